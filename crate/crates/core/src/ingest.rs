//! Minute-bar ingestion and volatility preprocessing.
//!
//! Prices arrive as `date,minute_index,price` records on a fixed intraday
//! grid of `S` slots. The volatility at slot `s` is `|ln Y(s) - ln Y(s-1)|`
//! and only exists when both prices are present on the same day, so neither
//! overnight moves nor gaps produce values. The intraday pattern `A(s)` is the
//! per-slot mean over the days that have a value at `s`; dividing it out and
//! then scaling to unit (population) standard deviation yields the series
//! the interval analysis runs on.

use std::collections::BTreeMap;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stats;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IngestError {
    #[error("line {line}: malformed record: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("line {line}: duplicate slot {slot} on {date}")]
    DuplicateSlot {
        line: usize,
        date: NaiveDate,
        slot: usize,
    },
    #[error("line {line}: minute index {slot} is outside the {slots}-slot grid")]
    OffGridRecord {
        line: usize,
        slot: usize,
        slots: usize,
    },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("no usable volatility values")]
    EmptySeries,
    #[error("intraday pattern has {pattern} slots but the series has {series}")]
    GridMismatch { pattern: usize, series: usize },
    #[error("volatility series has zero variance")]
    DegenerateVariance,
}

/// Intraday slot grid shared by every trading day.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Number of minute slots per day, `S`.
    pub slots: usize,
    /// Lengths of the trading sessions, in slots. They are laid end to end,
    /// so a midday break is bridged by consecutive slots.
    pub session_minutes: Vec<usize>,
}

impl GridSpec {
    pub fn new(slots: usize, session_minutes: Vec<usize>) -> Result<Self, IngestError> {
        if slots < 2 {
            return Err(IngestError::InvalidGrid(format!(
                "need at least 2 slots per day, got {slots}"
            )));
        }
        let total: usize = session_minutes.iter().sum();
        if total != slots {
            return Err(IngestError::InvalidGrid(format!(
                "sessions cover {total} minutes but the grid has {slots} slots"
            )));
        }
        Ok(Self {
            slots,
            session_minutes,
        })
    }

    /// Single contiguous session of `slots` minutes.
    pub fn uniform(slots: usize) -> Result<Self, IngestError> {
        Self::new(slots, vec![slots])
    }

    /// Shanghai/Shenzhen A-share day: 09:30-11:30 and 13:00-15:00, 240 slots.
    pub fn chinese_a_share() -> Self {
        Self {
            slots: 240,
            session_minutes: vec![120, 120],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradingDay {
    pub date: NaiveDate,
    /// One entry per grid slot; `None` marks a missing minute.
    pub prices: Vec<Option<f64>>,
}

impl TradingDay {
    /// Present `(slot, price)` pairs in slot order.
    pub fn points(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.prices
            .iter()
            .enumerate()
            .filter_map(|(s, p)| p.map(|p| (s, p)))
    }

    pub fn gap_count(&self) -> usize {
        self.prices.iter().filter(|p| p.is_none()).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceSeries {
    pub symbol: String,
    pub grid: GridSpec,
    /// Days in ascending date order.
    pub days: Vec<TradingDay>,
}

impl PriceSeries {
    pub fn gap_count(&self) -> usize {
        self.days.iter().map(TradingDay::gap_count).sum()
    }
}

/// Counters that reports disclose alongside the results.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Missing price minutes across all days.
    pub missing_prices: usize,
    /// Days skipped because they held fewer than two prices.
    pub degenerate_days: Vec<NaiveDate>,
    /// Volatility values dropped because the intraday pattern was zero at their slot.
    pub dropped_zero_pattern: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolatilityDay {
    pub date: NaiveDate,
    /// `values[s]` is the volatility at slot `s`; slot 0 never has one.
    pub values: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolatilitySeries {
    pub symbol: String,
    pub slots: usize,
    pub days: Vec<VolatilityDay>,
    pub diagnostics: Diagnostics,
}

impl VolatilitySeries {
    pub fn value_count(&self) -> usize {
        self.days
            .iter()
            .map(|d| d.values.iter().flatten().count())
            .sum()
    }
}

/// Mean volatility per intraday slot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntradayPattern {
    /// `None` where no day has a value at that slot.
    pub values: Vec<Option<f64>>,
    /// Number of days contributing to each slot.
    pub coverage: Vec<usize>,
    /// Number of days in the source series.
    pub days: usize,
}

/// Position of a flat-series sample in the original calendar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotRef {
    pub day: usize,
    pub slot: usize,
}

/// Deseasonalized volatility concatenated day by day and scaled to unit
/// population standard deviation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedVolatilitySeries {
    pub symbol: String,
    pub values: Vec<f64>,
    /// `positions[t]` maps flat index `t` back to `(day, slot)`.
    pub positions: Vec<SlotRef>,
    /// Dates of the days referenced by `positions`; empty for synthetic series.
    pub dates: Vec<NaiveDate>,
    /// Standard deviation that was divided out.
    pub scale: f64,
    pub diagnostics: Diagnostics,
}

impl NormalizedVolatilitySeries {
    /// Normalizes a flat series that has no calendar (synthetic data).
    pub fn from_raw(symbol: impl Into<String>, raw: Vec<f64>) -> Result<Self, IngestError> {
        let (values, scale) = unit_std(raw)?;
        let positions = (0..values.len()).map(|t| SlotRef { day: 0, slot: t }).collect();
        Ok(Self {
            symbol: symbol.into(),
            values,
            positions,
            dates: Vec::new(),
            scale,
            diagnostics: Diagnostics::default(),
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn split_record(line: &str) -> Vec<&str> {
    let sep = if line.contains(',') { ',' } else { '\t' };
    line.split(sep).map(str::trim).collect()
}

fn is_header(fields: &[&str]) -> bool {
    fields
        .first()
        .is_some_and(|f| f.eq_ignore_ascii_case("date"))
}

/// Parses `date,minute_index,price` records into a price series.
///
/// Blank lines, `#` comments and a leading `date,...` header are skipped.
/// Record order does not matter: days come out sorted by date and prices
/// are placed by minute index.
pub fn parse_minute_bars(
    symbol: &str,
    raw: &str,
    grid: &GridSpec,
) -> Result<PriceSeries, IngestError> {
    let grid = GridSpec::new(grid.slots, grid.session_minutes.clone())?;
    let mut days: BTreeMap<NaiveDate, Vec<Option<f64>>> = BTreeMap::new();

    for (idx, line) in raw.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields = split_record(line);
        if is_header(&fields) {
            continue;
        }
        let malformed = |reason: String| IngestError::MalformedRecord {
            line: line_no,
            reason,
        };
        if fields.len() != 3 {
            return Err(malformed(format!("expected 3 fields, found {}", fields.len())));
        }
        let date = NaiveDate::parse_from_str(fields[0], "%Y-%m-%d")
            .map_err(|e| malformed(format!("bad date {:?}: {e}", fields[0])))?;
        let slot: usize = fields[1]
            .parse()
            .map_err(|_| malformed(format!("bad minute index {:?}", fields[1])))?;
        let price: f64 = fields[2]
            .parse()
            .map_err(|_| malformed(format!("bad price {:?}", fields[2])))?;
        if !price.is_finite() || price <= 0.0 {
            return Err(malformed(format!("price must be positive and finite, got {price}")));
        }
        if slot >= grid.slots {
            return Err(IngestError::OffGridRecord {
                line: line_no,
                slot,
                slots: grid.slots,
            });
        }
        let day = days.entry(date).or_insert_with(|| vec![None; grid.slots]);
        if day[slot].is_some() {
            return Err(IngestError::DuplicateSlot {
                line: line_no,
                date,
                slot,
            });
        }
        day[slot] = Some(price);
    }

    Ok(PriceSeries {
        symbol: symbol.to_string(),
        grid,
        days: days
            .into_iter()
            .map(|(date, prices)| TradingDay { date, prices })
            .collect(),
    })
}

/// Absolute one-minute log returns within each day.
pub fn compute_volatility(p: &PriceSeries) -> Result<VolatilitySeries, IngestError> {
    let slots = p.grid.slots;
    let mut diagnostics = Diagnostics {
        missing_prices: p.gap_count(),
        ..Diagnostics::default()
    };
    let mut days = Vec::with_capacity(p.days.len());
    for day in &p.days {
        if day.points().take(2).count() < 2 {
            diagnostics.degenerate_days.push(day.date);
            continue;
        }
        let mut values = vec![None; slots];
        for s in 1..slots {
            if let (Some(prev), Some(cur)) = (day.prices[s - 1], day.prices[s]) {
                values[s] = Some((cur.ln() - prev.ln()).abs());
            }
        }
        days.push(VolatilityDay {
            date: day.date,
            values,
        });
    }
    if days.is_empty() {
        return Err(IngestError::EmptySeries);
    }
    Ok(VolatilitySeries {
        symbol: p.symbol.clone(),
        slots,
        days,
        diagnostics,
    })
}

pub fn intraday_pattern(v: &VolatilitySeries) -> Result<IntradayPattern, IngestError> {
    let mut sums = vec![Vec::new(); v.slots];
    for day in &v.days {
        for (s, value) in day.values.iter().enumerate() {
            if let Some(r) = value {
                sums[s].push(*r);
            }
        }
    }
    let coverage: Vec<usize> = sums.iter().map(Vec::len).collect();
    if coverage.iter().all(|&c| c == 0) {
        return Err(IngestError::EmptySeries);
    }
    let values = sums
        .iter()
        .map(|vals| (!vals.is_empty()).then(|| stats::mean(vals)))
        .collect();
    Ok(IntradayPattern {
        values,
        coverage,
        days: v.days.len(),
    })
}

/// Divides every volatility by the intraday pattern at its slot.
///
/// Values at slots where the pattern is zero or absent are dropped and
/// counted in `diagnostics.dropped_zero_pattern`.
pub fn deseasonalize(
    v: &VolatilitySeries,
    a: &IntradayPattern,
) -> Result<VolatilitySeries, IngestError> {
    if a.values.len() != v.slots {
        return Err(IngestError::GridMismatch {
            pattern: a.values.len(),
            series: v.slots,
        });
    }
    let mut diagnostics = v.diagnostics.clone();
    let days = v
        .days
        .iter()
        .map(|day| {
            let values = day
                .values
                .iter()
                .zip(&a.values)
                .map(|(r, pattern)| match (r, pattern) {
                    (Some(r), Some(p)) if *p > 0.0 => Some(r / p),
                    (Some(_), _) => {
                        diagnostics.dropped_zero_pattern += 1;
                        None
                    }
                    (None, _) => None,
                })
                .collect();
            VolatilityDay {
                date: day.date,
                values,
            }
        })
        .collect();
    Ok(VolatilitySeries {
        symbol: v.symbol.clone(),
        slots: v.slots,
        days,
        diagnostics,
    })
}

fn unit_std(values: Vec<f64>) -> Result<(Vec<f64>, f64), IngestError> {
    if values.is_empty() {
        return Err(IngestError::EmptySeries);
    }
    let sd = stats::population_std(&values);
    if !(sd > 0.0) || !sd.is_finite() {
        return Err(IngestError::DegenerateVariance);
    }
    Ok((values.into_iter().map(|r| r / sd).collect(), sd))
}

/// Flattens the series day by day and scales it to unit standard deviation.
pub fn normalize(v: &VolatilitySeries) -> Result<NormalizedVolatilitySeries, IngestError> {
    let mut raw = Vec::with_capacity(v.value_count());
    let mut positions = Vec::with_capacity(raw.capacity());
    for (d, day) in v.days.iter().enumerate() {
        for (s, value) in day.values.iter().enumerate() {
            if let Some(r) = value {
                raw.push(*r);
                positions.push(SlotRef { day: d, slot: s });
            }
        }
    }
    let (values, scale) = unit_std(raw)?;
    Ok(NormalizedVolatilitySeries {
        symbol: v.symbol.clone(),
        values,
        positions,
        dates: v.days.iter().map(|d| d.date).collect(),
        scale,
        diagnostics: v.diagnostics.clone(),
    })
}

/// Runs the full chain: volatility, intraday pattern, deseasonalization and
/// normalization.
pub fn preprocess(p: &PriceSeries) -> Result<NormalizedVolatilitySeries, IngestError> {
    let vol = compute_volatility(p)?;
    let pattern = intraday_pattern(&vol)?;
    let deseasonalized = deseasonalize(&vol, &pattern)?;
    normalize(&deseasonalized)
}
