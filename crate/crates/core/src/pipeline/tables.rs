use super::report::{Outcome, ReportBundle};

pub const TABLE1_HEADER: &str = "symbol,KS,CV,scaling";
pub const TABLE2_HEADER: &str = "symbol,q,p_KS,p_KSW";
const PREFERRED_LEVEL: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tables {
    /// Two-sample KS scaling test at the 5% level (or the first configured level).
    pub table1: String,
    /// Bootstrap p-values of the stretched-exponential fit.
    pub table2: String,
}

fn format_q(q: f64) -> String {
    if q.fract() == 0.0 {
        format!("{q:.0}")
    } else {
        format!("{q}")
    }
}

/// CSV renderings of the scaling tests and goodness-of-fit p-values.
/// Symbols whose section failed are left out.
pub fn render_tables(b: &ReportBundle) -> Tables {
    let mut table1 = format!("{TABLE1_HEADER}\n");
    let mut table2 = format!("{TABLE2_HEADER}\n");
    for s in &b.symbols {
        if let Outcome::Ok(reports) = &s.scaling_test {
            let pick = reports
                .iter()
                .find(|r| (r.significance - PREFERRED_LEVEL).abs() < 1e-12)
                .or_else(|| reports.first());
            if let Some(r) = pick {
                let yes = if r.verdict.is_accept() { "Yes" } else { "No" };
                table1.push_str(&format!(
                    "{},{:.4},{:.4},{yes}\n",
                    s.symbol, r.statistic, r.critical_value
                ));
            }
        }
        for g in &s.gof {
            if let Outcome::Ok(e) = &g.result {
                table2.push_str(&format!(
                    "{},{},{:.4},{:.4}\n",
                    s.symbol,
                    format_q(g.q),
                    e.p_ks,
                    e.p_ksw
                ));
            }
        }
    }
    Tables { table1, table2 }
}
