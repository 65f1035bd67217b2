//! The output document shared by the text and JSON renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputDocument {
    pub schema_version: String,
    pub command: String,
    pub operator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<PointReport>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refinements: Option<Vec<RefinementReport>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solutions: Option<SolutionsReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hermite: Option<HermiteReport>,
    pub timing_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub point: String,
    pub kind: String,
    pub exponents: Vec<String>,
    pub log_degrees: Vec<u32>,
    pub m: i64,
    pub bounds: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncated_solutions: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefinementReport {
    pub stage: usize,
    pub point: String,
    pub metric_before: i64,
    pub metric_after: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub point: String,
    pub solution: usize,
    pub exponent: String,
    pub logpow: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub element: String,
    pub integral: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub exponent: String,
    pub log_degree: u32,
    pub series: String,
    pub integral: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionsReport {
    pub point: String,
    pub kind: String,
    pub solutions: Vec<SeriesReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FractionReport {
    pub numerators: Vec<String>,
    pub u: String,
    pub v: String,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HermiteReport {
    pub basis: Vec<String>,
    pub steps: Vec<Vec<String>>,
    pub g: FractionReport,
    pub h: FractionReport,
    pub antiderivative: String,
    pub verified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstructed_at: Option<usize>,
}

fn fraction(f: &FractionReport) -> String {
    let parts: Vec<String> = f.numerators.iter().enumerate().map(|(i, a)| format!("({})*w{}", a, i)).collect();
    format!("({}) / (({})*({})^{})", parts.join(" + "), f.u, f.v, f.m)
}

impl OutputDocument {
    pub fn new(command: &str, operator: String) -> Self {
        OutputDocument {
            schema_version: SCHEMA_VERSION.into(),
            command: command.into(),
            operator,
            basis: None,
            points: None,
            refinements: None,
            check: None,
            solutions: None,
            hermite: None,
            timing_ms: 0.0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable document")
    }

    /// Plain text with the same mathematical content as the JSON form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(basis) = &self.basis {
            for b in basis {
                writeln!(out, "{}", b).unwrap();
            }
        }
        if let Some(check) = &self.check {
            writeln!(out, "integral: {}", check.integral).unwrap();
            if let Some(w) = &check.witness {
                writeln!(
                    out,
                    "witness: at {} solution {} term exponent {} log power {}",
                    w.point, w.solution, w.exponent, w.logpow
                )
                .unwrap();
            }
        }
        if let Some(s) = &self.solutions {
            writeln!(out, "# point {} ({})", s.point, s.kind).unwrap();
            for (i, y) in s.solutions.iter().enumerate() {
                let tag = if y.integral { "integral" } else { "not integral" };
                writeln!(out, "y{} = {}    [exponent {}, log degree {}, {}]", i, y.series, y.exponent, y.log_degree, tag)
                    .unwrap();
            }
        }
        if let Some(points) = &self.points {
            for p in points {
                writeln!(
                    out,
                    "# point {} ({}): exponents [{}], log degrees {:?}, m = {}, N = {:?}",
                    p.point,
                    p.kind,
                    p.exponents.join(", "),
                    p.log_degrees,
                    p.m,
                    p.bounds
                )
                .unwrap();
                for t in p.truncated_solutions.iter().flatten() {
                    writeln!(out, "#   {}", t).unwrap();
                }
            }
        }
        if let Some(steps) = &self.refinements {
            for r in steps {
                writeln!(out, "# stage {}: divided at {}, metric {} -> {}", r.stage, r.point, r.metric_before, r.metric_after)
                    .unwrap();
            }
        }
        if let Some(h) = &self.hermite {
            writeln!(out, "basis: [{}]", h.basis.join(", ")).unwrap();
            for (k, b) in h.steps.iter().enumerate() {
                writeln!(out, "step {}: b = [{}]", k + 1, b.join(", ")).unwrap();
            }
            writeln!(out, "g = {}", fraction(&h.g)).unwrap();
            writeln!(out, "h = {}", fraction(&h.h)).unwrap();
            writeln!(out, "antiderivative: {}", h.antiderivative).unwrap();
            writeln!(out, "verified: {}", h.verified).unwrap();
            if let Some(m) = h.obstructed_at {
                writeln!(out, "obstructed at m = {}", m).unwrap();
            }
        }
        out
    }
}
