//! Subcommands and their exit codes.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use ibasis_core::closure::{
    at_some_root, check_integral, integral_basis_with, singular_local_data, BasisOptions,
};
use ibasis_core::exactmath::{fmt_rational, NumberField, QPoly, Rational};
use ibasis_core::hermite::{derivative_matrix, hermite_reduce, verify_reduction, BasisVector};
use ibasis_core::localsolver::{
    classify_point, truncation_bounds, FrobeniusSystem, LocalData, PointKind, ShiftedOperator,
};
use ibasis_core::logseries::{is_integral, point_label, IotaPolicy};
use ibasis_core::oreops::{BasisElement, OrePoly};
use ibasis_core::Error;
use serde::Deserialize;
use thiserror::Error;

use crate::output::{
    CheckReport, FractionReport, HermiteReport, OutputDocument, PointReport, RefinementReport, SeriesReport,
    SolutionsReport, Witness,
};
use crate::parser::{parse_operator, parse_poly, parse_rational_point, ParseError};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "ibasis", version, about = "Integral bases of C(x)[D]/<L>")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// JSON file with iota overrides.
    #[arg(long, global = true)]
    pub iota: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 512)]
    pub max_wronskian_terms: usize,
    /// Threads for the per-point sweep.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Reserved; every computation is deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integral basis of C(x)[D]/<L>.
    Compute { operator: String },
    /// Whether an element of the quotient is integral.
    Check {
        operator: String,
        #[arg(long)]
        element: String,
    },
    /// Local solutions at a point.
    Solutions {
        operator: String,
        /// A rational number or `poly-root:p(t)`.
        #[arg(long)]
        at: String,
        /// Terms shown per solution.
        #[arg(long, default_value_t = 6)]
        terms: usize,
    },
    /// Exponents, Wronskian excess and truncation bounds at singular points.
    Bounds {
        operator: String,
        #[arg(long)]
        at: Option<String>,
    },
    /// Hermite reduction; input is a JSON file, `-` for stdin, or inline JSON.
    Hermite { input: String },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Math(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) => 1,
            CliError::Math(Error::CannotBoundWronskian { .. }) => 3,
            CliError::Math(Error::InvalidPolicy(_) | Error::ShapeMismatch(_)) => 1,
            CliError::Math(_) => 2,
        }
    }
}

/// A finished command: the document and its exit code.
pub struct Outcome {
    pub document: OutputDocument,
    pub exit_code: i32,
}

fn policy(cli: &Cli) -> Result<IotaPolicy, CliError> {
    match &cli.iota {
        None => Ok(IotaPolicy::default()),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {}", path.display(), e)))?;
            Ok(IotaPolicy::from_json(&text)?)
        }
    }
}

fn operator(text: &str) -> Result<OrePoly, CliError> {
    let l = parse_operator(text)?;
    match l.order() {
        Ok(0) | Err(_) => Err(Error::NotAnOperator(format!("'{}' has order zero", text)).into()),
        Ok(_) => Ok(l),
    }
}

fn point(text: &str) -> Result<Arc<NumberField>, CliError> {
    if let Some(p) = text.strip_prefix("poly-root:") {
        let p: QPoly = parse_poly(p, 't')?;
        if p.degree().unwrap_or(0) == 0 {
            return Err(CliError::Usage("poly-root needs a nonconstant polynomial".into()));
        }
        return NumberField::new(&p, "t").map_err(|e| CliError::Usage(e.to_string()));
    }
    Ok(NumberField::rational_point(&parse_rational_point(text)?))
}

fn kind_name(k: PointKind) -> &'static str {
    match k {
        PointKind::Ordinary => "ordinary",
        PointKind::RegularSingular => "regular singular",
        PointKind::Irregular => "irregular",
    }
}

fn rationals(qs: &[Rational]) -> Vec<String> {
    qs.iter().map(fmt_rational).collect()
}

fn point_report(d: &LocalData, with_solutions: bool) -> PointReport {
    PointReport {
        point: point_label(&d.field),
        kind: kind_name(d.kind).into(),
        exponents: rationals(&d.exponents),
        log_degrees: d.log_degrees.clone(),
        m: d.m,
        bounds: d.bounds.clone(),
        truncated_solutions: with_solutions.then(|| d.solutions.iter().map(|t| t.to_string()).collect()),
    }
}

fn cmd_compute(cli: &Cli, text: &str) -> Result<OutputDocument, CliError> {
    let l = operator(text)?;
    if !l.is_polynomial() {
        return Err(Error::NotAnOperator("compute needs polynomial coefficients".into()).into());
    }
    let policy = policy(cli)?;
    let opts = BasisOptions { max_wronskian_terms: cli.max_wronskian_terms, jobs: cli.jobs, ..BasisOptions::default() };
    let basis = integral_basis_with(&l, &policy, &opts)?;
    let points = singular_local_data(&l, &policy, cli.max_wronskian_terms)?;
    let mut doc = OutputDocument::new("compute", l.to_string());
    doc.basis = Some(basis.elements.iter().map(|b| b.to_string()).collect());
    doc.points = Some(points.iter().map(|d| point_report(d, false)).collect());
    doc.refinements = Some(
        basis
            .trace
            .iter()
            .map(|r| RefinementReport {
                stage: r.stage,
                point: r.point.clone(),
                metric_before: r.metric_before,
                metric_after: r.metric_after,
            })
            .collect(),
    );
    Ok(doc)
}

fn element(l: &OrePoly, text: &str) -> Result<BasisElement, CliError> {
    Ok(parse_operator(text)?.rem(l)?)
}

fn cmd_check(cli: &Cli, text: &str, elem: &str) -> Result<OutputDocument, CliError> {
    let l = operator(text)?;
    let b = element(&l, elem)?;
    let report = check_integral(&l, &b, &policy(cli)?)?;
    let mut doc = OutputDocument::new("check", l.to_string());
    doc.check = Some(CheckReport {
        element: b.to_string(),
        integral: report.integral,
        witness: report.witness.map(|w| Witness {
            point: w.point,
            solution: w.solution,
            exponent: fmt_rational(&w.exponent),
            logpow: w.logpow,
        }),
    });
    Ok(doc)
}

fn cmd_solutions(cli: &Cli, text: &str, at: &str, terms: usize) -> Result<OutputDocument, CliError> {
    let l = operator(text)?;
    let policy = policy(cli)?;
    let field = point(at)?;
    let report = at_some_root(&field, |k| {
        let op = ShiftedOperator::new(&l, k)?;
        let kind = op.kind()?;
        let mut sys = FrobeniusSystem::new(op)?;
        let full = policy.max_value() + Rational::from_integer(1.into());
        let mut out = Vec::new();
        for i in 0..sys.len() {
            let nu = sys.exponent(i);
            let shown = sys.solution(i, &(&nu + Rational::from_integer(terms.into())))?;
            let upto = (&nu + Rational::from_integer(terms.into())).max(full.clone());
            let integral = is_integral(&sys.solution(i, &upto)?, &policy)?;
            out.push(SeriesReport {
                exponent: fmt_rational(&nu),
                log_degree: sys.log_degree(i),
                series: shown.to_string(),
                integral,
            });
        }
        Ok(SolutionsReport { point: point_label(k), kind: kind_name(kind).into(), solutions: out })
    })?;
    let mut doc = OutputDocument::new("solutions", l.to_string());
    doc.solutions = Some(report);
    Ok(doc)
}

fn cmd_bounds(cli: &Cli, text: &str, at: Option<&str>) -> Result<OutputDocument, CliError> {
    let l = operator(text)?;
    let policy = policy(cli)?;
    let data = match at {
        Some(a) => {
            let field = point(a)?;
            if classify_point(&l, &field)? == PointKind::Irregular {
                return Err(Error::IrregularSingularity { point: point_label(&field) }.into());
            }
            vec![at_some_root(&field, |k| truncation_bounds(&l, k, &policy, cli.max_wronskian_terms))?]
        }
        None => singular_local_data(&l, &policy, cli.max_wronskian_terms)?,
    };
    let mut doc = OutputDocument::new("bounds", l.to_string());
    doc.points = Some(data.iter().map(|d| point_report(d, true)).collect());
    Ok(doc)
}

#[derive(Debug, Deserialize)]
struct HermiteInput {
    operator: String,
    #[serde(default)]
    basis: Option<Vec<String>>,
    a: Vec<String>,
    u: String,
    v: String,
    m: usize,
}

fn fraction(f: &BasisVector) -> FractionReport {
    FractionReport {
        numerators: f.numerators.iter().map(|a| a.display("x").to_string()).collect(),
        u: f.u.display("x").to_string(),
        v: f.v.display("x").to_string(),
        m: f.m,
    }
}

fn cmd_hermite(cli: &Cli, input: &str) -> Result<(OutputDocument, i32), CliError> {
    let text = if input.trim_start().starts_with('{') {
        input.to_string()
    } else if input == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::Usage(e.to_string()))?
    } else {
        std::fs::read_to_string(input).map_err(|e| CliError::Usage(format!("cannot read {}: {}", input, e)))?
    };
    let spec: HermiteInput =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad hermite input: {}", e)))?;
    let l = operator(&spec.operator)?;
    let basis = match &spec.basis {
        Some(list) => list.iter().map(|b| element(&l, b)).collect::<Result<Vec<_>, _>>()?,
        None => {
            let opts =
                BasisOptions { max_wronskian_terms: cli.max_wronskian_terms, jobs: cli.jobs, ..BasisOptions::default() };
            integral_basis_with(&l, &policy(cli)?, &opts)?.elements
        }
    };
    let dm = derivative_matrix(&l, &basis)?;
    let a = spec.a.iter().map(|s| parse_poly(s, 'x')).collect::<Result<Vec<_>, _>>()?;
    let f = BasisVector::new(a, parse_poly(&spec.u, 'x')?, parse_poly(&spec.v, 'x')?, spec.m)?;
    let red = hermite_reduce(&dm, &f)?;
    let verified = verify_reduction(&dm, &f, &red)?;
    let mut doc = OutputDocument::new("hermite", l.to_string());
    doc.hermite = Some(HermiteReport {
        basis: basis.iter().map(|b| b.to_string()).collect(),
        steps: red.steps.iter().map(|b| b.iter().map(|p| p.display("x").to_string()).collect()).collect(),
        g: fraction(&red.g),
        h: fraction(&red.h),
        antiderivative: red.g.to_element(&basis)?.to_string(),
        verified,
        obstructed_at: red.obstructed_at,
    });
    let code = if red.obstructed_at.is_some() { 2 } else { 0 };
    Ok((doc, code))
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let (mut document, exit_code) = match &cli.command {
        Command::Compute { operator } => (cmd_compute(cli, operator)?, 0),
        Command::Check { operator, element } => (cmd_check(cli, operator, element)?, 0),
        Command::Solutions { operator, at, terms } => (cmd_solutions(cli, operator, at, *terms)?, 0),
        Command::Bounds { operator, at } => (cmd_bounds(cli, operator, at.as_deref())?, 0),
        Command::Hermite { input } => cmd_hermite(cli, input)?,
    };
    document.timing_ms = start.elapsed().as_secs_f64() * 1000.0;
    Ok(Outcome { document, exit_code })
}

/// Parses arguments and runs, returning the text for stdout, the text for
/// stderr and the exit code.
pub fn main_with_args<I, T>(args: I) -> (String, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { (text, String::new(), 0) } else { (String::new(), text, 1) };
        }
    };
    match run(&cli) {
        Ok(out) => {
            let text = match cli.format {
                Format::Text => out.document.to_text(),
                Format::Json => out.document.to_json() + "\n",
            };
            let err = if out.exit_code != 0 { "error: reduction obstructed; partial result shown\n".into() } else { String::new() };
            (text, err, out.exit_code)
        }
        Err(e) => (String::new(), format!("error: {}\n", e), e.exit_code()),
    }
}
