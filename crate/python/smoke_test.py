"""Smoke test for the pyvolret extension module.

Build and install first:  maturin develop -m crates/python/Cargo.toml --release
"""

import json
import math

import pyvolret as v


def main():
    # critical value and crossing significance of a reference pair
    cv = v.critical_value(2000, 2000, 0.05)
    assert abs(cv - 0.0430) < 1e-3, cv

    fit = v.SeFit.unit_mean(0.31)
    assert 0.0 < fit.cdf(1.0) < 1.0 and fit.quantile(fit.cdf(1.0)) - 1.0 < 1e-9
    x = fit.sample(20_000, 7)
    refit = v.fit_stretched_exponential([x])
    assert abs(refit.gamma - 0.31) < 0.05, refit

    r = v.long_memory_volatility(0.8, 3.5, 1 << 15, 3)
    assert abs(sum(t * t for t in r) / len(r) - sum(r) ** 2 / len(r) ** 2 - 1.0) < 1e-9
    i2 = v.extract_intervals(r, 2.0)
    i5 = v.extract_intervals(r, 5.0)
    report = v.ks_two_sample(v.scale(i2), v.scale(i5), 0.05)
    print(report)

    curve = v.mean_conditional_interval(i2, 8)
    assert sum(c for _, _, c in curve) == len(i2) - 1
    plus, minus = v.cluster_conditional_mean(i2, 5)
    print("clusters +", [round(m, 3) for _, m, _ in plus])
    print("clusters -", [round(m, 3) for _, m, _ in minus])

    windows, f = v.dfa(v.fgn(0.8, 1 << 14, 1))
    h_small, h_large = v.hurst_crossover(windows, f, 50)
    assert 0.65 < h_small < 0.95 and 0.65 < h_large < 0.95, (h_small, h_large)

    p = v.bootstrap_pvalue(fit, v.ks_gof(x, fit), len(x), 200, False, 1)
    assert 0.0 <= p <= 1.0

    cfg = """
seed = 5
bootstrap_replicas = 100
[[inputs]]
symbol = "LM"
surrogate = { kind = "long-memory", hurst = 0.8, nu = 3.5, n = 65536, seed = 2 }
"""
    bundle = v.run_report(cfg)
    assert json.loads(bundle)["symbols"][0]["symbol"] == "LM"
    table1, table2 = v.render_tables(bundle)
    assert table1.startswith("symbol,KS,CV,scaling\n")
    assert table2.startswith("symbol,q,p_KS,p_KSW\n")
    assert not math.isnan(refit.alpha)
    print(table1, table2, sep="")
    print("smoke test passed")


if __name__ == "__main__":
    main()
