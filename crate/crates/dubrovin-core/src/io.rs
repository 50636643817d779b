//! File formats: sparse polynomials (text and JSON with string-encoded
//! integers so arbitrary precision survives transport), curve descriptions,
//! and Riemann matrices.

use crate::curvefield::PlaneCurve;
use crate::error::DubrovinError;
use crate::exactalg::{Rational, VarTable, WPoly};
use crate::theta::RiemannMatrix;
use crate::Result;
use num_bigint::BigInt;
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};
use std::str::FromStr;
use std::sync::Arc;

/// One term of a sparse rational polynomial: `coeff` is `"num"` or
/// `"num/den"` with arbitrary-precision integers as strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub exps: Vec<u32>,
}

/// Sparse polynomial with named variables and optional weights.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<i64>>,
    pub terms: Vec<TermJson>,
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let parse_int = |t: &str| {
        BigInt::from_str(t.trim())
            .map_err(|e| DubrovinError::Parse(format!("bad integer `{t}`: {e}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den == BigInt::from(0) {
                return Err(DubrovinError::Parse("zero denominator".into()));
            }
            Ok(Rational::new(parse_int(n)?, den))
        }
        None => Ok(Rational::from(parse_int(s)?)),
    }
}

pub fn rational_to_string(q: &Rational) -> String {
    if q.denom() == &BigInt::from(1) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn poly_to_json(p: &WPoly<Rational>) -> PolyJson {
    PolyJson {
        vars: p.vars().names().to_vec(),
        weights: Some(p.vars().weights().to_vec()),
        terms: p
            .sorted_terms()
            .into_iter()
            .map(|(e, c)| TermJson {
                coeff: rational_to_string(c),
                exps: e.clone(),
            })
            .collect(),
    }
}

pub fn poly_from_json(j: &PolyJson) -> Result<WPoly<Rational>> {
    let weights = j
        .weights
        .clone()
        .unwrap_or_else(|| vec![1; j.vars.len()]);
    let table = VarTable::new(j.vars.clone(), weights)?;
    let mut p = WPoly::zero(table);
    for t in &j.terms {
        if t.exps.len() != j.vars.len() {
            return Err(DubrovinError::Parse(format!(
                "term has {} exponents for {} variables",
                t.exps.len(),
                j.vars.len()
            )));
        }
        p.add_term(t.exps.clone(), parse_rational(&t.coeff)?);
    }
    Ok(p)
}

/// Text format: one term per line, `coeff_num/coeff_den : e1 e2 ... en`.
pub fn poly_to_text(p: &WPoly<Rational>) -> String {
    let mut out = String::new();
    for (e, c) in p.sorted_terms() {
        out.push_str(&rational_to_string(c));
        out.push_str(" : ");
        let exps: Vec<String> = e.iter().map(|k| k.to_string()).collect();
        out.push_str(&exps.join(" "));
        out.push('\n');
    }
    out
}

pub fn poly_from_text(table: Arc<VarTable>, s: &str) -> Result<WPoly<Rational>> {
    let mut p = WPoly::zero(table.clone());
    for (lineno, line) in s.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (coeff, exps) = line.split_once(':').ok_or_else(|| {
            DubrovinError::Parse(format!("line {}: missing `:`", lineno + 1))
        })?;
        let c = parse_rational(coeff.trim())?;
        let e: Vec<u32> = exps
            .split_whitespace()
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|err| DubrovinError::Parse(format!("bad exponent `{t}`: {err}")))
            })
            .collect::<Result<_>>()?;
        if e.len() != table.len() {
            return Err(DubrovinError::Parse(format!(
                "line {}: {} exponents for {} variables",
                lineno + 1,
                e.len(),
                table.len()
            )));
        }
        p.add_term(e, c);
    }
    Ok(p)
}

/// Complex polynomial terms for numeric artifacts (quartics, recovered
/// forms): coefficients as `[re, im]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexTermJson {
    pub coeff: [f64; 2],
    pub exps: Vec<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexPolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<ComplexTermJson>,
}

pub fn complex_poly_to_json(p: &WPoly<C>) -> ComplexPolyJson {
    ComplexPolyJson {
        vars: p.vars().names().to_vec(),
        terms: p
            .sorted_terms()
            .into_iter()
            .map(|(e, c)| ComplexTermJson {
                coeff: [c.re, c.im],
                exps: e.clone(),
            })
            .collect(),
    }
}

pub fn complex_poly_from_json(j: &ComplexPolyJson) -> Result<WPoly<C>> {
    let table = VarTable::new(j.vars.clone(), vec![1; j.vars.len()])?;
    let mut p = WPoly::zero(table);
    for t in &j.terms {
        p.add_term(t.exps.clone(), C::new(t.coeff[0], t.coeff[1]));
    }
    Ok(p)
}

/// Curve description: `f` over `(x, y)` plus optional basis numerators.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveJson {
    pub vars: Vec<String>,
    pub f: PolyJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numerators: Option<Vec<PolyJson>>,
}

pub fn curve_from_json(j: &CurveJson) -> Result<(Arc<PlaneCurve>, Option<Vec<WPoly<Rational>>>)> {
    if j.vars != ["x", "y"] {
        return Err(DubrovinError::Parse(
            "curve vars must be [\"x\", \"y\"]".into(),
        ));
    }
    let f = poly_from_json(&j.f)?;
    // re-express over the canonical xy table
    let table = VarTable::xy();
    let mut fx = WPoly::zero(table.clone());
    for (e, c) in f.terms() {
        fx.add_term(e.clone(), c.clone());
    }
    let curve = PlaneCurve::new(fx)?;
    let numerators = match &j.numerators {
        None => None,
        Some(list) => {
            let mut out = Vec::new();
            for pj in list {
                let p = poly_from_json(pj)?;
                let mut px = WPoly::zero(table.clone());
                for (e, c) in p.terms() {
                    px.add_term(e.clone(), c.clone());
                }
                out.push(px);
            }
            Some(out)
        }
    };
    Ok((curve, numerators))
}

pub fn curve_to_json(curve: &PlaneCurve, numerators: Option<&[WPoly<Rational>]>) -> CurveJson {
    CurveJson {
        vars: vec!["x".into(), "y".into()],
        f: poly_to_json(curve.f()),
        numerators: numerators.map(|ns| ns.iter().map(poly_to_json).collect()),
    }
}

/// Riemann matrix JSON: `{"g": 2, "B": [[[re, im], ...], ...],
/// "convention": "dubrovin" | "ag"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RiemannJson {
    pub g: usize,
    #[serde(rename = "B")]
    pub b: Vec<Vec<[f64; 2]>>,
    pub convention: String,
}

pub fn riemann_from_json(j: &RiemannJson) -> Result<RiemannMatrix> {
    if j.b.len() != j.g || j.b.iter().any(|row| row.len() != j.g) {
        return Err(DubrovinError::Parse("B must be g x g".into()));
    }
    let entries: Vec<C> = j
        .b
        .iter()
        .flat_map(|row| row.iter().map(|[re, im]| C::new(*re, *im)))
        .collect();
    match j.convention.as_str() {
        "dubrovin" => RiemannMatrix::new(j.g, entries),
        "ag" => RiemannMatrix::from_ag(j.g, entries),
        other => Err(DubrovinError::Parse(format!(
            "unknown convention `{other}` (expected \"dubrovin\" or \"ag\")"
        ))),
    }
}

pub fn riemann_to_json(b: &RiemannMatrix) -> RiemannJson {
    let g = b.g();
    RiemannJson {
        g,
        b: (0..g)
            .map(|i| (0..g).map(|j| [b.at(i, j).re, b.at(i, j).im]).collect())
            .collect(),
        convention: "dubrovin".into(),
    }
}

/// Exponential-sum support: a list of integer vectors, plus coefficients
/// (either rational strings or `[re, im]` pairs handled by the caller).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SupportJson {
    pub support: Vec<Vec<i64>>,
}
