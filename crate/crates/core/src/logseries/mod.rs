//! Truncated generalized series with logarithms, the integrality
//! representatives `iota`, and integrality tests on series.

mod iota;
mod series;

pub use iota::{iota_eval, parse_rational, IotaOverride, IotaPolicy, JMAX_LIMIT};
pub use series::{point_label, rational_expansion, shift_to_point, LogSeries, Term};

use crate::error::{Error, Result};
use crate::exactmath::{fmt_rational, frac, to_i64, Rational};

pub fn series_add(f: &LogSeries, g: &LogSeries) -> Result<LogSeries> {
    f.add(g)
}

pub fn series_mul(f: &LogSeries, g: &LogSeries) -> Result<LogSeries> {
    f.mul(g)
}

fn check_cutoffs(f: &LogSeries, policy: &IotaPolicy, slack: i64) -> Result<()> {
    for (class, t) in f.cutoffs() {
        let need = policy.max_over_logs(class);
        let gap = to_i64(&(&need - t)).expect("same class");
        if gap > slack {
            return Err(Error::TruncationTooShort(format!(
                "class {} + Z known below exponent {} only, need {}",
                fmt_rational(class),
                fmt_rational(t),
                fmt_rational(&(t + Rational::from_integer(gap.into())))
            )));
        }
    }
    Ok(())
}

/// Whether every term satisfies `mu - iota(mu + Z, j) >= 0`.
///
/// Every truncated class must be known up to the largest representative
/// the policy uses for it, since hidden terms may carry any log power.
pub fn is_integral(f: &LogSeries, policy: &IotaPolicy) -> Result<bool> {
    check_cutoffs(f, policy, 0)?;
    Ok(first_violation(f, policy).is_none())
}

/// First stored term `(mu, j)` that is not integral, in ascending order.
pub fn first_violation(f: &LogSeries, policy: &IotaPolicy) -> Option<(Rational, u32)> {
    f.iter().find(|(mu, j, _)| **mu < policy.eval(mu, *j)).map(|(mu, j, _)| (mu.clone(), j))
}

/// Smallest integer `e` such that `(x - alpha)^e f` is integral. May be
/// negative.
pub fn defect(f: &LogSeries, policy: &IotaPolicy) -> Result<i64> {
    let Some(e) = f.iter().map(|(mu, j, _)| to_i64(&(policy.eval(mu, j) - mu)).expect("same class")).max() else {
        return Err(if f.is_exact() {
            Error::ZeroPolynomial
        } else {
            Error::TruncationTooShort("no known terms".into())
        });
    };
    check_cutoffs(f, policy, e)?;
    Ok(e)
}

/// Class of an exponent in `[0, 1)`.
pub fn class_of(mu: &Rational) -> Rational {
    frac(mu)
}
