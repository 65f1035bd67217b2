//! One line per acceptance criterion; exits nonzero if the set of failing
//! criteria differs from `EXPECTED_FAILURES`.

use std::collections::BTreeSet;
use std::sync::Arc;

use ibasis_cli::{main_with_args, parse_operator, parse_ratfun};
use ibasis_core::closure::{integral_basis_with, module_equal, BasisOptions, IntegralBasis};
use ibasis_core::exactmath::{rat, rint, squarefree_part, NfElem, NumberField, QPoly, RatFun, Rational};
use ibasis_core::localsolver::{generalized_wronskian, FrobeniusSystem, ShiftedOperator};
use ibasis_core::logseries::{iota_eval, is_integral, IotaPolicy, LogSeries};
use ibasis_core::oreops::{apply_operator, BasisElement, OrePoly};
use num_traits::Zero;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use serde_json::Value;

/// Criteria whose literal statement conflicts with exact computation.
const EXPECTED_FAILURES: &[u32] = &[8];

const SEED: [u8; 32] = *b"ibasis acceptance fixed seed 001";
const CASES: u32 = 200;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn cli(args: &[&str]) -> (String, String, i32) {
    main_with_args(std::iter::once("ibasis").chain(args.iter().copied()))
}

fn cli_json(args: &[&str]) -> Result<Value, String> {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (out, err, code) = cli(&full);
    if code != 0 {
        return Err(format!("exit {}: {}", code, err.trim()));
    }
    serde_json::from_str(&out).map_err(|e| e.to_string())
}

fn computed_basis(l: &str) -> Result<Vec<String>, String> {
    let doc = cli_json(&["compute", l])?;
    Ok(doc["basis"].as_array().ok_or("no basis")?.iter().map(|b| b.as_str().unwrap().to_string()).collect())
}

fn elements(l: &OrePoly, list: &[String]) -> Result<Vec<BasisElement>, String> {
    list.iter()
        .map(|s| parse_operator(s).map_err(|e| e.to_string())?.rem(l).map_err(|e| e.to_string()))
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs `compute`, compares with `expected` up to module equality, and
/// optionally as strings.
fn basis_criterion(op: &str, expected: &[&str], strings: bool) -> Outcome {
    let got = computed_basis(op)?;
    let l = parse_operator(op).map_err(|e| e.to_string())?;
    let want: Vec<String> = expected.iter().map(|s| s.to_string()).collect();
    let same = module_equal(&elements(&l, &got)?, &elements(&l, &want)?).map_err(|e| e.to_string())?;
    ensure(same, || format!("got {:?}, not module_equal to {:?}", got, want))?;
    if strings {
        ensure(got == want, || format!("got {:?}, want {:?}", got, want))?;
    }
    Ok(format!("{{{}}}", got.join(", ")))
}

fn criterion1() -> Outcome {
    basis_criterion("x^3*D^3 + x*D - 1", &["1", "x*D", "x*D^2 - D + 1/x"], true)
}

fn criterion2() -> Outcome {
    basis_criterion(
        "24*x^3*D^3 - 134*x^2*D^2 + 373*x*D - 450",
        &["1/x", "(1/x^2)*D - 3/(2*x^3)", "(1/x)*D^2 - (7/(2*x^2))*D + 9/(2*x^3)"],
        false,
    )
}

fn criterion3() -> Outcome {
    basis_criterion("(-1+2*x) + (1-4*x)*D + 2*x*D^2", &["1", "x*D"], true)
}

/// Elements of `Q(x)[Z]/<N>` with `N = Z^3 - 3Z^2 - 3(x^2-1)Z - (x^2-1)^2`,
/// as coordinates on `1, Z, Z^2`.
mod zfield {
    use super::*;

    pub type Elem = [RatFun; 3];

    fn r(s: &str) -> RatFun {
        parse_ratfun(s, 'x').unwrap()
    }

    pub fn from(cs: [&str; 3]) -> Elem {
        cs.map(r)
    }

    pub fn add(a: &Elem, b: &Elem) -> Elem {
        [a[0].add(&b[0]), a[1].add(&b[1]), a[2].add(&b[2])]
    }

    pub fn scale(a: &Elem, f: &RatFun) -> Elem {
        [a[0].mul(f), a[1].mul(f), a[2].mul(f)]
    }

    pub fn mul(a: &Elem, b: &Elem) -> Elem {
        let mut prod = vec![RatFun::zero(); 5];
        for i in 0..3 {
            for j in 0..3 {
                prod[i + j] = prod[i + j].add(&a[i].mul(&b[j]));
            }
        }
        // Z^3 = 3Z^2 + 3(x^2-1)Z + (x^2-1)^2
        let z3 = [r("(x^2-1)^2"), r("3*(x^2-1)"), r("3")];
        for k in (3..5).rev() {
            let c = std::mem::replace(&mut prod[k], RatFun::zero());
            for (i, z) in z3.iter().enumerate() {
                prod[k - 3 + i] = prod[k - 3 + i].add(&c.mul(z));
            }
        }
        [prod[0].clone(), prod[1].clone(), prod[2].clone()]
    }

    pub fn dz() -> Elem {
        from(["0", "2*(2x^2+1)/(3x(x-1)(x+1))", "-2/(3x(x-1)(x+1))"])
    }

    pub fn z() -> Elem {
        from(["0", "1", "0"])
    }

    /// The derivation with `D x = 1` and `D Z = dz()`.
    pub fn derive(a: &Elem) -> Elem {
        let dz = dz();
        let z = z();
        let plain = [a[0].derivative(), a[1].derivative(), a[2].derivative()];
        let lin = scale(&dz, &a[1]);
        let quad = scale(&mul(&z, &dz), &a[2].scale(&rint(2)));
        add(&add(&plain, &lin), &quad)
    }

    /// `N` evaluated at an element.
    pub fn relation(a: &Elem) -> Elem {
        let a2 = mul(a, a);
        let a3 = mul(&a2, a);
        let c = [r("-(x^2-1)^2"), r("-3*(x^2-1)"), r("-3")];
        let mut acc = a3;
        for (k, p) in [from(["1", "0", "0"]), a.clone(), a2].iter().enumerate() {
            acc = add(&acc, &scale(p, &c[k]));
        }
        acc
    }

    pub fn is_zero(a: &Elem) -> bool {
        a.iter().all(|c| c.is_zero())
    }

    /// `B . Z` for `B = sum b_k D^k`.
    pub fn apply(b: &BasisElement) -> Elem {
        let mut acc = from(["0", "0", "0"]);
        let mut dk = z();
        for c in b.coeffs() {
            acc = add(&acc, &scale(&dk, c));
            dk = derive(&dk);
        }
        acc
    }

    pub fn as_element(a: &Elem) -> BasisElement {
        BasisElement::new(a.to_vec(), 3).unwrap()
    }
}

fn criterion4() -> Outcome {
    let op = "9*x^2*D^3 + 9*x*D^2 - D";
    let basis = basis_criterion(op, &["1", "x*D", "x*D^2 + 1/3*D"], true)?;
    // D Z is consistent with N: N(Z) = 0 and d/dx N(Z) = 0 modulo N
    ensure(zfield::is_zero(&zfield::relation(&zfield::z())), || "N(Z) != 0".into())?;
    let dn = zfield::derive(&zfield::relation(&zfield::z()));
    ensure(zfield::is_zero(&dn), || "D Z inconsistent with N".into())?;
    let l = parse_operator(op).unwrap();
    let ops = elements(&l, &computed_basis(op)?)?;
    let derived: Vec<zfield::Elem> = ops.iter().map(zfield::apply).collect();
    let printed = [
        zfield::from(["0", "1", "0"]),
        zfield::from(["0", "2*(2x^2+1)/(3(x-1)(x+1))", "-2/(3(x-1)(x+1))"]),
        zfield::from(["8(x^2-1)/(9x(x-1)(x+1))", "8(x^2+2)/(9x(x-1)(x+1))", "-8/(9x(x-1)(x+1))"]),
    ];
    ensure(derived == printed, || format!("derived algebraic-side list differs: {:?}", derived))?;
    let reference = [
        zfield::from(["1", "0", "0"]),
        zfield::from(["0", "1", "0"]),
        zfield::from(["-1/x", "-(x^2+2)/(x(x-1)(x+1))", "1/(x(x-1)(x+1))"]),
    ];
    let u: [[&str; 3]; 3] = [["1", "-3/2", "9x/8"], ["1", "0", "0"], ["0", "0", "-9/8"]];
    let mapped: Vec<zfield::Elem> = u
        .iter()
        .map(|row| {
            let mut acc = zfield::from(["0", "0", "0"]);
            for (k, c) in row.iter().enumerate() {
                acc = zfield::add(&acc, &zfield::scale(&derived[k], &parse_ratfun(c, 'x').unwrap()));
            }
            acc
        })
        .collect();
    ensure(mapped == reference, || "unimodular image differs from the reference basis".into())?;
    let as_el = |v: &[zfield::Elem]| v.iter().map(zfield::as_element).collect::<Vec<_>>();
    let eq = module_equal(&as_el(&derived), &as_el(&reference)).map_err(|e| e.to_string())?;
    ensure(eq, || "module_equal(derived, reference) is false".into())?;
    Ok(format!("{}; algebraic side module_equal to the reference basis", basis))
}

fn criterion5() -> Outcome {
    let a = basis_criterion("1 + x*D", &["x"], true)?;
    let b = basis_criterion("1 - D", &["1"], true)?;
    Ok(format!("{} and {}", a, b))
}

fn series_lines(op: &str, at: &str, terms: &str) -> Result<Vec<(String, String)>, String> {
    let doc = cli_json(&["solutions", op, "--at", at, "--terms", terms])?;
    Ok(doc["solutions"]["solutions"]
        .as_array()
        .ok_or("no solutions")?
        .iter()
        .map(|s| (s["exponent"].as_str().unwrap().to_string(), s["series"].as_str().unwrap().to_string()))
        .collect())
}

fn criterion6() -> Outcome {
    let op = "(2-x) + 2*(2-2x+x^2)*D + 4*(x-1)*x*D^2";
    let l = parse_operator(op).unwrap();
    let k0 = NumberField::rational_point(&rint(0));
    let mut sys = FrobeniusSystem::new(ShiftedOperator::new(&l, &k0).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let coeffs = |sys: &mut FrobeniusSystem, i: usize| -> Result<Vec<Rational>, String> {
        let y = sys.solution(i, &rint(6)).map_err(|e| e.to_string())?;
        Ok((0..6).map(|n| y.coeff(&rint(n), 0).as_rational().unwrap()).collect())
    };
    let want0 = vec![rint(1), rat(-1, 2), rint(0), rat(-1, 24), rat(-7, 384), rat(-53, 3840)];
    let want1 = vec![rint(0), rint(0), rint(1), rat(1, 6), rat(1, 6), rat(13, 120)];
    let got = (coeffs(&mut sys, 0)?, coeffs(&mut sys, 1)?);
    ensure(got == (want0, want1), || format!("coefficients at 0: {:?}", got))?;
    let at0 = series_lines(op, "0", "6")?;
    ensure(at0[0].1.starts_with("1 - 1/2*x - 1/24*x^3 - 7/384*x^4 - 53/3840*x^5 + O(x^6)"), || at0[0].1.clone())?;
    ensure(at0[1].1.starts_with("x^2 + 1/6*x^3 + 1/6*x^4 + 13/120*x^5"), || at0[1].1.clone())?;
    let at1 = series_lines(op, "1", "4")?;
    let exps: Vec<&str> = at1.iter().map(|s| s.0.as_str()).collect();
    ensure(exps == ["0", "1/2"], || format!("exponents at 1: {:?}", exps))?;
    ensure(at1[0].1 == "1 - 1/2*(x-1) + 1/8*(x-1)^2 - 1/48*(x-1)^3 + O((x-1)^4)", || at1[0].1.clone())?;
    ensure(at1[1].1.starts_with("(x-1)^(1/2) + O("), || at1[1].1.clone())?;
    Ok("coefficients at 0 exact; classes {Z, 1/2+Z} at 1 with printed leading terms".into())
}

fn criterion7() -> Outcome {
    let a = cli_json(&["check", "(x-1) + D - x*D^2", "--element", "(1/x)*(1-D)"])?;
    ensure(a["check"]["integral"] == true, || format!("{}", a["check"]))?;
    let b = cli_json(&["check", "(-1+2*x) + (1-4*x)*D + 2*x*D^2", "--element", "D"])?;
    ensure(b["check"]["integral"] == false, || format!("{}", b["check"]))?;
    let w = &b["check"]["witness"];
    ensure(w["exponent"] == "-1/2" && w["point"] == "0", || format!("witness {}", w))?;
    Ok(format!("true; false with witness x^{} at {}", w["exponent"].as_str().unwrap(), w["point"].as_str().unwrap()))
}

fn criterion8() -> Outcome {
    let op = "(2x+1) - (4x^2+1)*D + 2*(2x-1)*x*D^2";
    let input = serde_json::json!({
        "operator": op,
        "basis": ["1", "1/(2x-1)*(2x*D-1)"],
        "a": ["4x^2+37x-11", "-28x^3+40x^2-x-1"],
        "u": "4",
        "v": "(x-1)x",
        "m": 2
    })
    .to_string();
    let doc = cli_json(&["hermite", &input])?;
    let h = &doc["hermite"];
    let parse = |s: &Value| parse_ratfun(s.as_str().unwrap(), 'x').unwrap();
    let b: Vec<RatFun> = h["steps"][0].as_array().unwrap().iter().map(parse).collect();
    let c: Vec<RatFun> = h["h"]["numerators"].as_array().unwrap().iter().map(parse).collect();
    let verified = h["verified"] == true;
    let l = parse_operator(op).unwrap();
    let antiderivative = parse_operator(h["antiderivative"].as_str().unwrap()).unwrap().rem(&l).unwrap();
    let printed = parse_operator("5/(x-1)*D - (2x+3)/((x-1)x)").unwrap().rem(&l).unwrap();
    let printed_b = vec![parse_ratfun("(4x+11)/2", 'x').unwrap(), parse_ratfun("5/2*(2x-1)", 'x').unwrap()];
    // does the printed antiderivative differentiate back to f
    let f = parse_operator("1/(4(x-1)^2x^2)*((4x^2+37x-11) + (-28x^3+40x^2-x-1)*1/(2x-1)*(2x*D-1))")
        .unwrap()
        .rem(&l)
        .unwrap();
    let d_printed = printed.d_times(&RatFun::one(), &l).unwrap();
    let d_ours = antiderivative.d_times(&RatFun::one(), &l).unwrap();
    let detail = format!(
        "b = [{}]; c = [{}]; verified {}; d/dx(computed) == f: {}; d/dx(printed) == f: {}; printed b negated: {}",
        b.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(", "),
        c.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(", "),
        verified,
        d_ours == f,
        d_printed == f,
        b.iter().zip(&printed_b).all(|(x, y)| x == &y.neg()),
    );
    let pass = b == printed_b && c.iter().all(|x| x.is_zero()) && verified && antiderivative == printed;
    if pass {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion10() -> Outcome {
    let (_, err, code) = cli(&["compute", "(-1-2*x) + (x+2*x^2)*D + (x^3+x^4)*D^2"]);
    ensure(code == 2, || format!("exit code {}", code))?;
    ensure(err.contains("irregular singularity at 0"), || err.clone())?;
    Ok(format!("exit 2: {}", err.trim()))
}

fn runner() -> TestRunner {
    let config = Config { cases: CASES, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &SEED))
}

fn sample<S: Strategy>(runner: &mut TestRunner, s: S, n: u32) -> Vec<S::Value> {
    (0..n).map(|_| s.new_tree(runner).unwrap().current()).collect()
}

fn suite_iota() -> Outcome {
    let p = IotaPolicy::default();
    let class = (0i64..64, 1i64..=64).prop_map(|(n, d)| rat(n % d, d));
    let cases = sample(&mut runner(), (class.clone(), 0u32..=8, class, 0u32..=8), CASES * 10);
    for (a, i, b, j) in &cases {
        let (ia, ib) = (iota_eval(&p, a, *i), iota_eval(&p, b, *j));
        ensure((&ia - a).is_integer() && (&ib - b).is_integer(), || format!("axiom 1 at {} {}", a, i))?;
        if i + j <= 8 {
            let sum = iota_eval(&p, &(a + b), i + j);
            let diff = &ia + &ib - &sum;
            ensure(diff.is_integer() && diff >= rint(0), || format!("axiom 2 at ({}, {}), ({}, {})", a, i, b, j))?;
        }
    }
    ensure(iota_eval(&p, &rint(0), 0).is_zero(), || "axiom 3".into())?;
    Ok(format!("{} cases", cases.len()))
}

fn arb_integral_series() -> impl Strategy<Value = Vec<(i64, i64, u32, i64)>> {
    prop::collection::vec((-4i64..8, 1i64..7, 0u32..3, -5i64..6), 0..6)
}

fn build_series(k: &Arc<NumberField>, p: &IotaPolicy, ts: &[(i64, i64, u32, i64)]) -> LogSeries {
    let mut s = LogSeries::zero(k);
    for &(n, d, j, c) in ts {
        let mut mu = rat(n, d);
        let floor = p.eval(&mu, j);
        while mu < floor {
            mu += rint(1);
        }
        s.add_term(mu, j, NfElem::from_rational(k, rint(c)));
    }
    s
}

fn suite_subring() -> Outcome {
    let p = IotaPolicy::default();
    let k = NumberField::rational_point(&rint(0));
    let cases = sample(&mut runner(), (arb_integral_series(), arb_integral_series()), CASES);
    for (a, b) in &cases {
        let (f, g) = (build_series(&k, &p, a), build_series(&k, &p, b));
        let ok = |s: &LogSeries| is_integral(s, &p).unwrap();
        ensure(ok(&f) && ok(&g), || "generator produced a non-integral series".into())?;
        ensure(ok(&f.add(&g).unwrap()), || format!("{} + {}", f, g))?;
        ensure(ok(&f.mul(&g).unwrap()), || format!("{} * {}", f, g))?;
    }
    Ok(format!("{} cases", cases.len()))
}

fn arb_poly(deg: usize) -> impl Strategy<Value = QPoly> {
    prop::collection::vec(-4i64..5, 0..=deg).prop_map(|cs| QPoly::from_ints(&cs))
}

fn suite_wronskian() -> Outcome {
    let s = (2usize..=3).prop_flat_map(|r| (prop::collection::vec(arb_poly(2), r), arb_poly(2), -3i64..4));
    let cases = sample(&mut runner(), s, CASES * 3);
    let mut used = 0;
    for (lower, top, a) in cases {
        if used == CASES {
            break;
        }
        let k = NumberField::rational_point(&rint(a));
        if top.is_zero() || top.eval(&rint(a)).is_zero() {
            continue;
        }
        let mut cs = lower;
        cs.push(top);
        let l = OrePoly::from_polys(cs);
        let r = l.order().unwrap();
        let elems: Vec<BasisElement> = (0..r).map(|i| BasisElement::monomial(RatFun::one(), i, r)).collect();
        let w = generalized_wronskian(&l, &k, &elems, &rint(8)).map_err(|e| e.to_string())?;
        ensure(!w.has_no_terms(), || format!("vanishing Wronskian for {}", l))?;
        let first = OrePoly::new(vec![l.coeff(r - 1), l.coeff(r)]);
        let res = apply_operator(&first, &w, &rint(5)).map_err(|e| e.to_string())?;
        ensure(res.has_no_terms(), || format!("{} at {}: residual {}", l, a, res))?;
        used += 1;
    }
    ensure(used == CASES, || format!("only {} operators with a regular point", used))?;
    Ok(format!("{} operators at ordinary points", used))
}

/// `prod (theta - e_i) + (x - c) (a theta + b)` with `theta = (x - c) D`:
/// a single regular singular point at `c` with exponents `e_i`.
fn arb_fuchsian() -> impl Strategy<Value = OrePoly> {
    let exps = (2usize..=3).prop_flat_map(|r| prop::collection::vec((-4i64..5, 1i64..5), r));
    (exps, -2i64..3, -3i64..4, -3i64..4).prop_map(|(es, c, a, b)| {
        let t = OrePoly::from_polys(vec![QPoly::from_ints(&[-c, 1])]);
        let theta = t.mul(&OrePoly::d_pow(1));
        let mut l = OrePoly::one();
        for (n, d) in es {
            l = l.mul(&theta.sub(&OrePoly::constant(RatFun::constant(rat(n, d)))));
        }
        let tail = theta.scale_left(&RatFun::constant(rint(a))).add(&OrePoly::constant(RatFun::constant(rint(b))));
        l.add(&t.mul(&tail))
    })
}

fn golden_operators() -> Vec<OrePoly> {
    [
        "x^3*D^3 + x*D - 1",
        "24*x^3*D^3 - 134*x^2*D^2 + 373*x*D - 450",
        "(-1+2*x) + (1-4*x)*D + 2*x*D^2",
        "9*x^2*D^3 + 9*x*D^2 - D",
        "1 + x*D",
        "1 - D",
        "(x-1) + D - x*D^2",
        "(2-x) + 2*(2-2x+x^2)*D + 4*(x-1)*x*D^2",
        "(2x+1) - (4x^2+1)*D + 2*(2x-1)*x*D^2",
    ]
    .iter()
    .map(|s| parse_operator(s).unwrap())
    .collect()
}

struct Runs {
    golden: Vec<(OrePoly, IntegralBasis, IntegralBasis)>,
    random: Vec<(OrePoly, IntegralBasis, IntegralBasis)>,
}

fn compute_runs() -> Result<Runs, String> {
    let p = IotaPolicy::default();
    let once = |l: &OrePoly| -> Result<(OrePoly, IntegralBasis, IntegralBasis), String> {
        let base = integral_basis_with(l, &p, &BasisOptions::default()).map_err(|e| format!("{}: {}", l, e))?;
        let doubled = BasisOptions { truncation_factor: 2, ..BasisOptions::default() };
        let wide = integral_basis_with(l, &p, &doubled).map_err(|e| format!("{}: {}", l, e))?;
        Ok((l.clone(), base, wide))
    };
    let golden = golden_operators().iter().map(once).collect::<Result<Vec<_>, _>>()?;
    let random = sample(&mut runner(), arb_fuchsian(), CASES).iter().map(once).collect::<Result<Vec<_>, _>>()?;
    Ok(Runs { golden, random })
}

fn suite_denominators(runs: &Runs) -> Outcome {
    let mut n = 0;
    for (l, b, _) in runs.golden.iter().chain(&runs.random) {
        let lr = l.lc().unwrap().num().clone();
        for e in &b.elements {
            for c in e.coeffs().iter().filter(|c| !c.is_zero()) {
                let rad = squarefree_part(c.den()).unwrap();
                ensure(rad.divides(&lr), || format!("{}: denominator of {} does not divide {}", l, e, lr.display("x")))?;
            }
        }
        n += 1;
    }
    Ok(format!("{} bases", n))
}

fn suite_metric(runs: &Runs) -> Outcome {
    let mut steps = 0;
    for (l, b, _) in runs.golden.iter().chain(&runs.random) {
        for r in &b.trace {
            ensure(r.metric_after < r.metric_before && r.metric_after >= 0, || format!("{}: {:?}", l, r))?;
            steps += 1;
        }
    }
    ensure(steps > 0, || "no refinements observed".into())?;
    Ok(format!("{} refinements over {} runs", steps, runs.golden.len() + runs.random.len()))
}

fn suite_truncation(runs: &Runs) -> Outcome {
    for (l, a, b) in runs.golden.iter().chain(&runs.random) {
        ensure(a.elements == b.elements, || format!("{}: doubled bounds changed the basis", l))?;
    }
    Ok(format!("{} runs unchanged with doubled N_i", runs.golden.len() + runs.random.len()))
}

fn criterion9() -> Outcome {
    let runs = compute_runs()?;
    let suites: Vec<(&str, Outcome)> = vec![
        ("iota axioms", suite_iota()),
        ("subring closure", suite_subring()),
        ("wronskian equation", suite_wronskian()),
        ("denominator law", suite_denominators(&runs)),
        ("metric decrease", suite_metric(&runs)),
        ("truncation robustness", suite_truncation(&runs)),
    ];
    let mut failed = Vec::new();
    for (name, out) in &suites {
        match out {
            Ok(m) => println!("    ok   {}: {}", name, m),
            Err(m) => {
                println!("    FAIL {}: {}", name, m);
                failed.push(*name);
            }
        }
    }
    if failed.is_empty() {
        Ok(format!("{} suites", suites.len()))
    } else {
        Err(format!("failing suites: {}", failed.join(", ")))
    }
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        (1, "logarithmic basis", criterion1),
        (2, "three exponent classes basis", criterion2),
        (3, "half-integer basis", criterion3),
        (4, "algebraic comparison basis", criterion4),
        (5, "first-order bases", criterion5),
        (6, "local solutions at 0 and 1", criterion6),
        (7, "integrality checks", criterion7),
        (8, "hermite reduction, literal values", criterion8),
        (9, "property suites", criterion9),
        (10, "irregular rejection", criterion10),
    ];
    let mut failed = BTreeSet::new();
    for (n, name, f) in criteria {
        match f() {
            Ok(msg) => println!("PASS criterion {} ({}): {}", n, name, msg),
            Err(msg) => {
                let tag = if EXPECTED_FAILURES.contains(&n) { " [expected failure]" } else { "" };
                println!("FAIL criterion {} ({}){}: {}", n, name, tag, msg);
                failed.insert(n);
            }
        }
    }
    let expected: BTreeSet<u32> = EXPECTED_FAILURES.iter().copied().collect();
    for n in expected.difference(&failed) {
        println!("note: criterion {} listed as an expected failure but passed", n);
    }
    let unexpected: Vec<u32> = failed.difference(&expected).copied().collect();
    println!("acceptance: {} of 10 criteria pass", 10 - failed.len());
    if !unexpected.is_empty() {
        println!("unexpected failures: {:?}", unexpected);
        std::process::exit(1);
    }
}
