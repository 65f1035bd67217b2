use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exactmath::{fmt_rational, frac, rint, Rational};

/// Largest log power a policy file may describe.
pub const JMAX_LIMIT: u32 = 16;

/// Denominator always included in the axiom-2 validation grid.
const GRID_BASE: u64 = 60;

/// One table entry: for `class` and every log power `j >= min_logpow`
/// (up to the next entry of the same class), use `rep`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IotaOverride {
    pub class: Rational,
    pub min_logpow: u32,
    pub rep: Rational,
}

/// The choice of integral representatives per exponent class and log power.
///
/// Without overrides: the representative in `[0, 1)` for `j = 0` and the
/// one in `(0, 1]` for `j >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IotaPolicy {
    overrides: Vec<IotaOverride>,
    jmax: u32,
}

impl Default for IotaPolicy {
    fn default() -> Self {
        IotaPolicy { overrides: Vec::new(), jmax: JMAX_LIMIT }
    }
}

#[derive(Deserialize)]
struct PolicyFile {
    #[serde(default)]
    overrides: Vec<OverrideFile>,
    jmax: Option<u32>,
}

#[derive(Deserialize)]
struct OverrideFile {
    class: Value,
    #[serde(default)]
    min_logpow: u32,
    rep: Value,
}

fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(rint)
            .ok_or_else(|| Error::InvalidPolicy(format!("expected an integer or a \"p/q\" string, got {}", n))),
        Value::String(s) => parse_rational(s).ok_or_else(|| Error::InvalidPolicy(format!("bad rational {:?}", s))),
        other => Err(Error::InvalidPolicy(format!("expected a rational, got {}", other))),
    }
}

/// Parses `p` or `p/q` with optional sign and surrounding blanks.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: num_bigint::BigInt = n.parse().ok()?;
    let d: num_bigint::BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

impl IotaPolicy {
    /// Builds and validates a policy. Rejects anything violating the three
    /// axioms on the finite validation grid.
    pub fn new(overrides: Vec<IotaOverride>, jmax: u32) -> Result<Self> {
        if jmax > JMAX_LIMIT {
            return Err(Error::InvalidPolicy(format!("jmax {} exceeds {}", jmax, JMAX_LIMIT)));
        }
        let mut seen = std::collections::BTreeSet::new();
        for o in &overrides {
            if o.class.is_negative() || o.class >= Rational::one() {
                return Err(Error::InvalidPolicy(format!("class {} not in [0, 1)", fmt_rational(&o.class))));
            }
            if !(&o.rep - &o.class).is_integer() {
                return Err(Error::InvalidPolicy(format!(
                    "representative {} is not in the class {} + Z",
                    fmt_rational(&o.rep),
                    fmt_rational(&o.class)
                )));
            }
            if o.rep.abs() > Rational::one() {
                return Err(Error::InvalidPolicy(format!("representative {} outside [-1, 1]", fmt_rational(&o.rep))));
            }
            if !seen.insert((o.class.clone(), o.min_logpow)) {
                return Err(Error::InvalidPolicy(format!(
                    "duplicate entry for class {} from log power {}",
                    fmt_rational(&o.class),
                    o.min_logpow
                )));
            }
        }
        let policy = IotaPolicy { overrides, jmax };
        if !policy.eval(&Rational::zero(), 0).is_zero() {
            return Err(Error::InvalidPolicy("iota(Z, 0) must be 0".into()));
        }
        policy.check_subadditive()?;
        Ok(policy)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PolicyFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidPolicy(format!("malformed policy file: {}", e)))?;
        let mut overrides = Vec::new();
        for o in &file.overrides {
            overrides.push(IotaOverride {
                class: rational_from_json(&o.class)?,
                min_logpow: o.min_logpow,
                rep: rational_from_json(&o.rep)?,
            });
        }
        Self::new(overrides, file.jmax.unwrap_or(JMAX_LIMIT))
    }

    pub fn overrides(&self) -> &[IotaOverride] {
        &self.overrides
    }

    pub fn jmax(&self) -> u32 {
        self.jmax
    }

    /// `iota(class + Z, j)`; any representative of the class is accepted.
    pub fn eval(&self, class: &Rational, j: u32) -> Rational {
        let c = frac(class);
        let hit = self
            .overrides
            .iter()
            .filter(|o| o.class == c && o.min_logpow <= j)
            .max_by_key(|o| o.min_logpow);
        match hit {
            Some(o) => o.rep.clone(),
            None if j == 0 || !c.is_zero() => c,
            None => Rational::one(),
        }
    }

    /// Largest value over log powers `0..=jmax` for one class.
    pub fn max_over_logs(&self, class: &Rational) -> Rational {
        (0..=self.jmax).map(|j| self.eval(class, j)).max().unwrap()
    }

    /// Upper bound for every value the policy takes.
    pub fn max_value(&self) -> Rational {
        self.overrides.iter().map(|o| o.rep.clone()).fold(Rational::one(), |a, b| a.max(b))
    }

    /// Axiom 2 on classes with denominator dividing `lcm(60, override
    /// denominators)` and log powers up to `jmax`. Triples made only of
    /// default values are skipped since the default rule satisfies the
    /// axiom.
    fn check_subadditive(&self) -> Result<()> {
        if self.overrides.is_empty() {
            return Ok(());
        }
        let n = self.overrides.iter().fold(GRID_BASE, |acc, o| {
            acc.lcm(&o.class.denom().to_u64().expect("small denominator"))
        });
        let n_us = n as usize;
        let jm = self.jmax as usize;
        let touched: Vec<bool> = {
            let mut t = vec![false; n_us];
            for o in &self.overrides {
                t[(o.class.clone() * Rational::from_integer(n.into())).to_integer().to_usize().unwrap()] = true;
            }
            t
        };
        // scaled values: table[c][j] = n * iota(c/n, j)
        let table: Vec<Vec<i64>> = (0..n_us)
            .map(|c| {
                let class = Rational::new((c as i64).into(), (n as i64).into());
                (0..=2 * jm)
                    .map(|j| (self.eval(&class, j as u32) * Rational::from_integer(n.into())).to_integer().to_i64().unwrap())
                    .collect()
            })
            .collect();
        for c1 in 0..n_us {
            for c2 in 0..n_us {
                let c3 = (c1 + c2) % n_us;
                if !(touched[c1] || touched[c2] || touched[c3]) {
                    continue;
                }
                for j1 in 0..=jm {
                    for j2 in 0..=jm {
                        if table[c1][j1] + table[c2][j2] < table[c3][j1 + j2] {
                            return Err(Error::InvalidPolicy(format!(
                                "iota({}+Z,{}) + iota({}+Z,{}) < iota({}+Z,{})",
                                fmt_rational(&Rational::new((c1 as i64).into(), (n as i64).into())),
                                j1,
                                fmt_rational(&Rational::new((c2 as i64).into(), (n as i64).into())),
                                j2,
                                fmt_rational(&Rational::new((c3 as i64).into(), (n as i64).into())),
                                j1 + j2
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// `iota(class + Z, j)` under `policy`.
pub fn iota_eval(policy: &IotaPolicy, class: &Rational, j: u32) -> Rational {
    policy.eval(class, j)
}
