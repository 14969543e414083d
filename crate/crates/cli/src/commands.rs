use std::path::Path;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use chebmass::approx::{fit_gen_cheb_dx, fit_monomial_normal_equations, fit_orthogonal};
use chebmass::bernstein::basis_value;
use chebmass::chebyshev::{cheb_from_monomial, eval_t, monomial_from_cheb};
use chebmass::diagnostics::diagnostics_report;
use chebmass::gencheb::gen_cheb;
use chebmass::integrals::{
    theorem2_integral, theorem2_integral_f64, theorem2_oracle, weighted_inner, Evaluable,
    FnEvaluable,
};
use chebmass::scalar::parse_rational;
use chebmass::{
    BigRational, ChebSeries, FitMeasure, FitResult, MassParams, MonomialPoly, Scalar, WeightedMeasure,
};

use crate::args::{
    Basis, CheckArgs, Command, ConvertArgs, EvalArgs, FitArgs, Format, IntegrateArgs, Kind, Masses,
};
use crate::output::{num, Output};
use crate::{CliError, EXIT_CHECK};

/// Relative agreement demanded between the closed-form integral and quadrature.
const INTEGRATE_TOL: f64 = 1e-10;
const SYMMETRY_POINTS: usize = 16;

pub fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Eval(a) => eval(a),
        Command::Convert(a) => convert(a),
        Command::Integrate(a) => integrate(a),
        Command::Check(a) => check(a),
        Command::Fit(a) => fit(a),
    }
}

fn is_decimal(s: &str) -> bool {
    s.contains(['.', 'e', 'E'])
}

enum MassSpec {
    Exact(MassParams<BigRational>),
    Float(MassParams<f64>),
}

impl MassSpec {
    fn parse(m: &Masses) -> Result<Self, CliError> {
        if is_decimal(&m.left) || is_decimal(&m.right) {
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| CliError::usage(format!("not a mass: {s:?}")))
            };
            eprintln!("warning: decimal masses use floating-point arithmetic; pass \"p/q\" for exact results");
            Ok(MassSpec::Float(MassParams::new(parse(&m.left)?, parse(&m.right)?)?))
        } else {
            Ok(MassSpec::Exact(MassParams::new(
                parse_rational(&m.left)?,
                parse_rational(&m.right)?,
            )?))
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            MassSpec::Exact(p) => p.left().to_f64() == 0.0 && p.right().to_f64() == 0.0,
            MassSpec::Float(p) => *p.left() == 0.0 && *p.right() == 0.0,
        }
    }

    fn json(&self) -> (Value, Value) {
        match self {
            MassSpec::Exact(p) => (p.left().to_json(), p.right().to_json()),
            MassSpec::Float(p) => (p.left().to_json(), p.right().to_json()),
        }
    }

    /// `T_n^{(M,N)}` as a float series.
    fn series(&self, n: usize) -> ChebSeries<f64> {
        match self {
            MassSpec::Exact(p) => gen_cheb(n, p).series().to_float(),
            MassSpec::Float(p) => gen_cheb(n, p).series().clone(),
        }
    }

    fn swapped(&self) -> Self {
        match self {
            MassSpec::Exact(p) => MassSpec::Exact(p.swapped()),
            MassSpec::Float(p) => MassSpec::Float(p.swapped()),
        }
    }
}

fn finish(out: Output, format: Format, path: Option<&Path>) -> Result<u8, CliError> {
    out.emit(format, path)?;
    Ok(0)
}

fn eval(a: EvalArgs) -> Result<u8, CliError> {
    let values: Vec<f64> = match a.kind {
        Kind::T => a.x.iter().map(|&x| eval_t(a.n, x)).collect(),
        Kind::Gen => {
            let series = MassSpec::parse(&a.masses)?.series(a.n);
            a.x.iter().map(|&x| series.eval_f64(x)).collect()
        }
        Kind::Bernstein => a
            .x
            .iter()
            .map(|x| basis_value(a.n, a.k, x))
            .collect::<Result<_, _>>()?,
    };
    if values.iter().any(|v| !v.is_finite()) {
        return Err(CliError::numeric("evaluation produced a non-finite value"));
    }
    let json = Value::Array(
        a.x.iter()
            .zip(&values)
            .map(|(x, v)| json!({"x": x, "value": v}))
            .collect(),
    );
    let rows = a.x.iter().zip(&values).map(|(x, v)| vec![num(*x), num(*v)]).collect();
    finish(
        Output::table(json, &["x", "value"], rows),
        a.common.format,
        a.common.out.as_deref(),
    )
}

enum Coeffs {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

fn parse_coeffs(list: &str) -> Result<Coeffs, CliError> {
    let items: Vec<&str> = list.split(',').map(str::trim).collect();
    if items.iter().any(|s| s.is_empty()) {
        return Err(CliError::usage(format!("empty coefficient in {list:?}")));
    }
    if items.iter().any(|s| is_decimal(s)) {
        eprintln!("warning: decimal coefficients use floating-point arithmetic");
        items
            .iter()
            .map(|s| s.parse::<f64>().map_err(|_| CliError::usage(format!("not a number: {s:?}"))))
            .collect::<Result<_, _>>()
            .map(Coeffs::Float)
    } else {
        items
            .iter()
            .map(|s| parse_rational(s).map_err(CliError::from))
            .collect::<Result<_, _>>()
            .map(Coeffs::Exact)
    }
}

fn coeff_output<S: Scalar>(basis: &str, coeffs: &[S], wrap: bool) -> Output {
    let list: Vec<Value> = coeffs.iter().map(Scalar::to_json).collect();
    let text = |v: &Value| match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    let rows = list
        .iter()
        .enumerate()
        .map(|(k, v)| vec![k.to_string(), text(v)])
        .collect();
    let json = if wrap {
        json!({"basis": basis, "coeffs": list})
    } else {
        Value::Array(list)
    };
    Output::table(json, &["k", "coeff"], rows)
}

fn convert(a: ConvertArgs) -> Result<u8, CliError> {
    let out = if let Some(list) = &a.monomial {
        match parse_coeffs(list)? {
            Coeffs::Exact(c) => {
                coeff_output("chebyshev-T", cheb_from_monomial(&MonomialPoly::new(c)).coeffs(), true)
            }
            Coeffs::Float(c) => {
                coeff_output("chebyshev-T", cheb_from_monomial(&MonomialPoly::new(c)).coeffs(), true)
            }
        }
    } else if let Some(list) = &a.chebyshev {
        match parse_coeffs(list)? {
            Coeffs::Exact(c) => coeff_output("monomial", monomial_from_cheb(&ChebSeries::new(c)).coeffs(), true),
            Coeffs::Float(c) => coeff_output("monomial", monomial_from_cheb(&ChebSeries::new(c)).coeffs(), true),
        }
    } else {
        let n = a.n.expect("clap requires --n here");
        match MassSpec::parse(&a.masses)? {
            MassSpec::Exact(p) => coeff_output("bernstein", gen_cheb(n, &p).bernstein().coeffs(), false),
            MassSpec::Float(p) => coeff_output("bernstein", gen_cheb(n, &p).bernstein().coeffs(), false),
        }
    };
    finish(out, a.common.format, a.common.out.as_deref())
}

fn integrate(a: IntegrateArgs) -> Result<u8, CliError> {
    let masses = MassSpec::parse(&a.masses)?;
    let (exact, value, oracle) = match &masses {
        MassSpec::Exact(p) => {
            let closed = theorem2_integral(a.n, a.r, a.i, p)?;
            (Some(closed.to_string()), closed.to_f64(), theorem2_oracle(a.n, a.r, a.i, p)?)
        }
        MassSpec::Float(p) => (
            None,
            theorem2_integral_f64(a.n, a.r, a.i, p)?,
            theorem2_oracle(a.n, a.r, a.i, p)?,
        ),
    };
    let diff = (value - oracle).abs();
    let rel = diff / value.abs().max(1.0);
    let (m, n) = masses.json();
    let json = json!({
        "n": a.n, "r": a.r, "i": a.i, "M": m, "N": n,
        "exact": exact, "value": value, "oracle": oracle,
        "diff": diff, "rel_diff": rel,
    });
    let exact_text = exact.clone().unwrap_or_default();
    let rows = vec![vec![
        exact_text.clone(),
        num(value),
        num(oracle),
        num(diff),
        num(rel),
    ]];
    let mut plain = String::new();
    if !exact_text.is_empty() {
        plain.push_str(&format!("exact   {exact_text}\n"));
    }
    plain.push_str(&format!(
        "value   {}\noracle  {}\ndiff    {:e}\n",
        num(value),
        num(oracle),
        diff
    ));
    let out = Output::table(json, &["exact", "value", "oracle", "diff", "rel_diff"], rows)
        .with_plain(plain);
    out.emit(a.common.format, a.common.out.as_deref())?;
    if rel.is_nan() || rel > INTEGRATE_TOL {
        eprintln!("error: closed form and quadrature differ by {rel:e} (relative)");
        return Ok(crate::EXIT_NUMERIC);
    }
    Ok(0)
}

fn check(a: CheckArgs) -> Result<u8, CliError> {
    let masses = MassSpec::parse(&a.masses)?;
    let measure = match &masses {
        MassSpec::Exact(p) => WeightedMeasure::new(p.to_float()),
        MassSpec::Float(p) => WeightedMeasure::new(p.clone()),
    };
    let size = a.max_n + 1;
    let series: Vec<ChebSeries<f64>> = (0..size).map(|n| masses.series(n)).collect();
    let cells: Vec<f64> = (0..size * size)
        .into_par_iter()
        .map(|idx| weighted_inner(&series[idx / size], &series[idx % size], &measure))
        .collect::<Result<_, _>>()?;
    let gram: Vec<Vec<f64>> = cells.chunks(size).map(<[f64]>::to_vec).collect();
    let max_offdiag = (0..size)
        .flat_map(|i| (0..size).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| gram[i][j].abs())
        .fold(0.0, f64::max);

    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let points: Vec<f64> = (0..SYMMETRY_POINTS).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let mirrored: Vec<ChebSeries<f64>> = {
        let swapped = masses.swapped();
        (0..size).map(|n| swapped.series(n)).collect()
    };
    let symmetry_max = (0..size)
        .flat_map(|n| points.iter().map(move |&x| (n, x)))
        .map(|(n, x)| {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let lhs = series[n].eval_f64(x);
            (lhs - sign * mirrored[n].eval_f64(-x)).abs() / lhs.abs().max(1.0)
        })
        .fold(0.0, f64::max);

    let pass = max_offdiag <= a.tol && symmetry_max <= 1e-12;
    let (m, n) = masses.json();
    let mut json = json!({
        "max_n": a.max_n, "M": m, "N": n, "tolerance": a.tol, "seed": a.seed,
        "gram": gram, "max_offdiag": max_offdiag,
        "symmetry_points": points, "symmetry_max_rel_diff": symmetry_max,
        "pass": pass,
    });

    let mut plain = String::new();
    for row in &gram {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>11.3e}")).collect();
        plain.push_str(&cells.join(" "));
        plain.push('\n');
    }
    plain.push_str(&format!(
        "max |<phi_m,phi_n>| (m != n) = {max_offdiag:e}, tolerance {:e}\nsymmetry spot check (seed {}) max rel diff = {symmetry_max:e}\n{}\n",
        a.tol,
        a.seed,
        if pass { "PASS" } else { "FAIL" }
    ));

    if a.report {
        let mass_set: Vec<MassParams<BigRational>> = match &masses {
            MassSpec::Exact(p) => vec![p.clone()],
            MassSpec::Float(_) => {
                eprintln!("warning: exact orthogonality breakdown needs rational masses; omitted");
                Vec::new()
            }
        };
        let report = diagnostics_report(a.max_n, &mass_set)?;
        json["diagnostics"] = serde_json::to_value(&report)
            .map_err(|e| CliError::numeric(format!("cannot serialize report: {e}")))?;
        plain.push_str(&report.render_plain());
    }

    let rows = gram
        .iter()
        .enumerate()
        .flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(move |(j, v)| vec![i.to_string(), j.to_string(), num(*v)])
        })
        .collect();
    let out = Output::table(json, &["m", "n", "inner"], rows).with_plain(plain);
    out.emit(a.common.format, a.common.out.as_deref())?;
    if pass {
        Ok(0)
    } else {
        eprintln!("check failed: max off-diagonal {max_offdiag:e} exceeds {:e} or symmetry broke", a.tol);
        Ok(EXIT_CHECK)
    }
}

type Target = FnEvaluable<Box<dyn Fn(f64) -> f64>>;

fn read_samples(path: &str) -> Result<Vec<(f64, f64)>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::usage(format!("cannot read {path}: {e}")))?;
    let mut points = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::usage(format!("{path}: {e}")))?;
        let parsed = (
            record.get(0).and_then(|s| s.parse::<f64>().ok()),
            record.get(1).and_then(|s| s.parse::<f64>().ok()),
        );
        match parsed {
            (Some(x), Some(y)) => points.push((x, y)),
            // a header row
            _ if line == 0 => continue,
            _ => return Err(CliError::usage(format!("{path}: row {} is not \"x,y\"", line + 1))),
        }
    }
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    if points.len() < 2 {
        return Err(CliError::usage(format!("{path}: need at least two samples")));
    }
    Ok(points)
}

/// Piecewise-linear through the samples, constant beyond the ends.
fn interpolate(points: &[(f64, f64)], x: f64) -> f64 {
    let (first, last) = (points[0], points[points.len() - 1]);
    if x <= first.0 {
        return first.1;
    }
    if x >= last.0 {
        return last.1;
    }
    let j = points.partition_point(|p| p.0 <= x).min(points.len() - 1);
    let ((x0, y0), (x1, y1)) = (points[j - 1], points[j]);
    if x1 == x0 {
        return y1;
    }
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

fn parse_target(spec: &str) -> Result<Target, CliError> {
    if let Some(list) = spec.strip_prefix("poly:") {
        let coeffs: Vec<f64> = list
            .split(',')
            .map(|s| {
                let s = s.trim();
                parse_rational(s)
                    .map(|r| r.to_f64())
                    .or_else(|_| s.parse::<f64>())
                    .map_err(|_| CliError::usage(format!("not a coefficient: {s:?}")))
            })
            .collect::<Result<_, _>>()?;
        let poly = MonomialPoly::new(coeffs);
        let degree = poly.degree();
        return Ok(FnEvaluable::polynomial(Box::new(move |x| poly.eval_f64(x)), degree));
    }
    if let Some(path) = spec.strip_prefix("csv:") {
        let points = read_samples(path)?;
        return Ok(FnEvaluable::opaque(Box::new(move |x| interpolate(&points, x))));
    }
    let f: Box<dyn Fn(f64) -> f64> = match spec {
        "abs" => Box::new(f64::abs),
        "exp" => Box::new(f64::exp),
        "runge" => Box::new(|x: f64| 1.0 / (1.0 + 25.0 * x * x)),
        other => {
            return Err(CliError::usage(format!(
                "unknown target {other:?}; expected poly:c0,c1,..., abs, exp, runge or csv:PATH"
            )))
        }
    };
    Ok(FnEvaluable::opaque(f))
}

fn fit(a: FitArgs) -> Result<u8, CliError> {
    let target = parse_target(&a.target)?;
    let masses = MassSpec::parse(&a.masses)?;
    let result: FitResult = match (a.basis, &masses) {
        (Basis::Gen, MassSpec::Exact(p)) => fit_orthogonal(&target, a.n, p)?,
        (Basis::Gen, MassSpec::Float(p)) => fit_orthogonal(&target, a.n, p)?,
        (Basis::GenDx, MassSpec::Exact(p)) => fit_gen_cheb_dx(&target, a.n, p)?,
        (Basis::GenDx, MassSpec::Float(p)) => fit_gen_cheb_dx(&target, a.n, p)?,
        (Basis::Monomial, _) => {
            if !masses.is_zero() {
                eprintln!("warning: the monomial fit uses dx on [0,1]; --M and --N are ignored");
            }
            fit_monomial_normal_equations(&target, a.n)?
        }
    };
    if !result.residual.is_finite() || result.coefficients.iter().any(|c| !c.is_finite()) {
        return Err(CliError::numeric("fit produced non-finite values"));
    }
    let mut json = serde_json::to_value(&result)
        .map_err(|e| CliError::numeric(format!("cannot serialize fit: {e}")))?;
    json["target"] = Value::String(a.target.clone());
    let rows = result
        .samples(&target as &dyn Evaluable, a.samples)
        .into_iter()
        .map(|r| r.iter().map(|v| num(*v)).collect())
        .collect();
    let plain = format!(
        "basis      {}\nmeasure    {}\ndegree     {}\ncoeffs     {}\nresidual   {:e}\ncondition  {:e}\noffdiag    {:e}\nnodes      {}\n",
        result.basis,
        match result.measure {
            FitMeasure::Weighted => "weighted",
            FitMeasure::Dx => "dx",
        },
        result.degree,
        result.coefficients.iter().map(|c| num(*c)).collect::<Vec<_>>().join(" "),
        result.residual,
        result.condition_estimate,
        result.gram_offdiag_ratio,
        result.quadrature_nodes,
    );
    let out = Output::table(json, &["x", "f", "p", "f_minus_p"], rows).with_plain(plain);
    finish(out, a.common.format, a.common.out.as_deref())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation() {
        let pts = [(0.0, 0.0), (1.0, 2.0), (2.0, 0.0)];
        assert_eq!(interpolate(&pts, 0.5), 1.0);
        assert_eq!(interpolate(&pts, 1.5), 1.0);
        assert_eq!(interpolate(&pts, 1.0), 2.0);
        assert_eq!(interpolate(&pts, -3.0), 0.0);
        assert_eq!(interpolate(&pts, 9.0), 0.0);
    }

    #[test]
    fn decimal_detection() {
        assert!(is_decimal("0.5"));
        assert!(is_decimal("1e-3"));
        assert!(!is_decimal("1/3"));
        assert!(!is_decimal("2"));
    }

    #[test]
    fn targets() {
        let p = parse_target("poly:1,0,1/2").unwrap();
        assert_eq!(p.degree_bound(), Some(2));
        assert_eq!(p.eval(2.0), 3.0);
        assert_eq!(parse_target("runge").unwrap().eval(0.0), 1.0);
        assert!(parse_target("sin").is_err());
    }
}
