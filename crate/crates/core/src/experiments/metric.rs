//! Scalar summaries of convergence records, addressed by strings such as
//! `rate_last:E1` or `slope:E`.
//!
//! Quantities: `E1`, `E2`, `E`, `eta`, `eta_classical`, `energy_err`, `N`,
//! `N_boundary`, `boundary_fraction`, `E2/E1`, `seconds`.
//! Forms: `last:Q`, `min:Q`, `max:Q`, `spread:Q` (max/min - 1), `slope:Q`
//! (regression against `N`), `rate_last:Q`, `rate_min:Q:n`, `rate_max:Q:n`
//! (over the last `n` observed rates), `total:seconds`, `steps`.

use crate::amr::{observed_rates, ConvergenceRecord, StepRecord};
use crate::error::{Error, Result};

type Getter = fn(&StepRecord) -> Option<f64>;

fn quantity(name: &str) -> Result<Getter> {
    Ok(match name {
        "E1" => |s| s.e1,
        "E2" => |s| s.e2,
        "E" => |s| s.e,
        "eta" => |s| s.eta,
        "eta_classical" => |s| s.eta_classical,
        "energy_err" => |s| s.energy_err,
        "N" => |s| Some(s.n as f64),
        "N_boundary" => |s| Some(s.n_boundary as f64),
        "boundary_fraction" => |s| Some(s.n_boundary as f64 / s.n as f64),
        "E2/E1" => |s| Some(s.e2? / s.e1?),
        "seconds" => |s| Some(s.seconds),
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown quantity `{other}`"
            )))
        }
    })
}

/// Preferred error measure of a record: `E`, then `E₁`, then `E₂`.
pub fn main_error(record: &ConvergenceRecord) -> &'static str {
    let has = |g: Getter| record.steps.iter().any(|s| g(s).is_some());
    if has(|s| s.e) {
        "E"
    } else if has(|s| s.e1) && record.steps.iter().all(|s| s.e1.is_some()) {
        "E1"
    } else {
        "E2"
    }
}

fn values(record: &ConvergenceRecord, g: Getter) -> Vec<f64> {
    record.steps.iter().filter_map(g).collect()
}

fn rates(record: &ConvergenceRecord, g: Getter) -> Vec<f64> {
    let v: Vec<Option<f64>> = record.steps.iter().map(g).collect();
    observed_rates(&v).into_iter().flatten().collect()
}

/// Evaluates `metric` on `record`; `None` when the record lacks the data.
pub fn evaluate(record: &ConvergenceRecord, metric: &str) -> Result<Option<f64>> {
    let parts: Vec<&str> = metric.split(':').collect();
    let tail = |n: usize| -> Result<usize> {
        parts
            .get(2)
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| Error::InvalidArgument(format!("bad count in `{metric}`")))
            })
            .unwrap_or(Ok(n))
    };
    Ok(match parts.as_slice() {
        ["steps"] => Some(record.steps.len() as f64),
        ["total", "seconds"] => Some(record.steps.iter().map(|s| s.seconds).sum()),
        [form, q, ..] => {
            let g = quantity(q)?;
            let v = values(record, g);
            match *form {
                "last" => record.steps.last().and_then(g),
                "min" => v.iter().copied().reduce(f64::min),
                "max" => v.iter().copied().reduce(f64::max),
                "spread" => {
                    let lo = v.iter().copied().reduce(f64::min);
                    let hi = v.iter().copied().reduce(f64::max);
                    lo.zip(hi).map(|(a, b)| b / a - 1.0)
                }
                "slope" => record.slope(g),
                "rate_last" => rates(record, g).last().copied(),
                "rate_min" | "rate_max" => {
                    let r = rates(record, g);
                    let n = tail(r.len())?;
                    let sel = &r[r.len().saturating_sub(n)..];
                    if *form == "rate_min" {
                        sel.iter().copied().reduce(f64::min)
                    } else {
                        sel.iter().copied().reduce(f64::max)
                    }
                }
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown metric form `{other}`"
                    )))
                }
            }
        }
        _ => return Err(Error::InvalidArgument(format!("unknown metric `{metric}`"))),
    })
}

/// Value of quantity `q` at `n` unknowns, interpolated linearly in log-log
/// and extrapolated from the nearest two rows outside the recorded range.
pub fn value_at(record: &ConvergenceRecord, q: &str, n: f64) -> Result<Option<f64>> {
    let g = quantity(q)?;
    let pts: Vec<(f64, f64)> = record
        .steps
        .iter()
        .filter_map(|s| {
            g(s).filter(|v| *v > 0.0)
                .map(|v| ((s.n as f64).ln(), v.ln()))
        })
        .collect();
    let x = n.ln();
    Ok(match pts.len() {
        0 => None,
        1 => Some(pts[0].1.exp()),
        len => {
            let i = pts.partition_point(|p| p.0 < x).clamp(1, len - 1);
            let (a, b) = (pts[i - 1], pts[i]);
            let t = if b.0 == a.0 {
                0.0
            } else {
                (x - a.0) / (b.0 - a.0)
            };
            Some((a.1 + t * (b.1 - a.1)).exp())
        }
    })
}
