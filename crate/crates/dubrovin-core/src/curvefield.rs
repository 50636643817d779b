//! Arithmetic in the function field of a plane curve: normal forms modulo
//! `<f>`, implicit derivatives of `y(x)`, and holomorphic-differential
//! numerators.

use crate::error::DubrovinError;
use crate::exactalg::{Coeff, Rational, VarTable, WPoly};
use crate::Result;
use std::sync::Arc;

/// An affine plane curve `f(x, y) = 0` over the rationals.
///
/// The coefficient of `y^{degree_y}` must be a nonzero constant; curves with
/// a non-constant leading `y`-coefficient are rejected at construction
/// (apply a linear change of coordinates first). Irreducibility is assumed,
/// not verified: the degenerations in [`crate::degenerate`] rely on that.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneCurve {
    f: WPoly<Rational>,
    degree_y: u32,
    lead: Rational,
    f_x: WPoly<Rational>,
    f_y: WPoly<Rational>,
}

impl PlaneCurve {
    pub fn new(f: WPoly<Rational>) -> Result<Arc<Self>> {
        if f.vars().names() != ["x", "y"] {
            return Err(DubrovinError::BadCurve(
                "curve polynomial must live in the (x, y) table".into(),
            ));
        }
        if f.is_zero() {
            return Err(DubrovinError::BadCurve("zero polynomial".into()));
        }
        let degree_y = f.degree_in(1);
        if degree_y == 0 {
            return Err(DubrovinError::BadCurve("f does not involve y".into()));
        }
        let mut lead = <Rational as Coeff>::zero();
        for (e, c) in f.terms() {
            if e[1] == degree_y {
                if e[0] != 0 {
                    return Err(DubrovinError::BadCurve(format!(
                        "leading y-coefficient is not constant (found x^{} y^{} term); \
                         apply a linear change of coordinates first",
                        e[0], e[1]
                    )));
                }
                lead = c.clone();
            }
        }
        debug_assert!(!lead.is_zero());
        let f_x = f.partial_derivative("x")?;
        let f_y = f.partial_derivative("y")?;
        let mut curve = PlaneCurve {
            f,
            degree_y,
            lead,
            f_x,
            f_y,
        };
        // the partials are already y-reduced (their y-degree is < degree_y),
        // but normalize anyway for safety with odd inputs
        curve.f_x = reduce_raw(&curve.f_x, &curve.f, curve.degree_y, &curve.lead, 0, 1);
        curve.f_y = reduce_raw(&curve.f_y, &curve.f, curve.degree_y, &curve.lead, 0, 1);
        Ok(Arc::new(curve))
    }

    /// Hyperelliptic curve `y^2 = F(x)` from the univariate right-hand side.
    pub fn hyperelliptic(rhs_coeffs: &[Rational]) -> Result<Arc<Self>> {
        let t = VarTable::xy();
        let mut f = WPoly::monomial(t.clone(), vec![0, 2], <Rational as Coeff>::one());
        for (k, c) in rhs_coeffs.iter().enumerate() {
            f.add_term(vec![k as u32, 0], Coeff::neg_ref(c));
        }
        PlaneCurve::new(f)
    }

    pub fn f(&self) -> &WPoly<Rational> {
        &self.f
    }

    pub fn degree_y(&self) -> u32 {
        self.degree_y
    }

    pub fn f_x(&self) -> &WPoly<Rational> {
        &self.f_x
    }

    pub fn f_y(&self) -> &WPoly<Rational> {
        &self.f_y
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        self.f.vars()
    }

    /// Normal form of `p` modulo `<f>`: repeated `y`-division, leaving
    /// `deg_y < degree_y`.
    pub fn normal_form(&self, p: &WPoly<Rational>) -> WPoly<Rational> {
        reduce_raw(p, &self.f, self.degree_y, &self.lead, 0, 1)
    }

    /// Normal form for polynomials over a larger table in which the curve
    /// variables sit at positions `x_idx`, `y_idx`.
    pub fn normal_form_in(
        &self,
        p: &WPoly<Rational>,
        x_idx: usize,
        y_idx: usize,
    ) -> WPoly<Rational> {
        let f_embedded = self.f.embed(p.vars().clone(), &[x_idx, y_idx]);
        reduce_raw(p, &f_embedded, self.degree_y, &self.lead, x_idx, y_idx)
    }

    /// Total x-derivative numerator along the curve:
    /// `D(p) = p_x f_y - p_y f_x`, so that `dp/dx = D(p) / f_y`.
    pub fn total_derivative_numerator(&self, p: &WPoly<Rational>) -> WPoly<Rational> {
        let px = p.partial_derivative_idx(0);
        let py = p.partial_derivative_idx(1);
        let n = px
            .mul(&self.f_y)
            .unwrap()
            .sub(&py.mul(&self.f_x).unwrap())
            .unwrap();
        self.normal_form(&n)
    }
}

/// y-division of `p` by `f` (monic-able in the variable at `y_idx` with
/// constant leading coefficient `lead` and degree `deg`).
fn reduce_raw(
    p: &WPoly<Rational>,
    f: &WPoly<Rational>,
    deg: u32,
    lead: &Rational,
    _x_idx: usize,
    y_idx: usize,
) -> WPoly<Rational> {
    // rewrite rule: y^deg = (lead*y^deg - f) / lead
    let mut rule = WPoly::zero(f.vars().clone());
    for (e, c) in f.terms() {
        if e[y_idx] == deg && e.iter().enumerate().all(|(i, &k)| i == y_idx || k == 0) {
            continue; // the leading term itself
        }
        rule.add_term(e.clone(), c.div_ref(lead).neg_ref());
    }
    let mut cur = p.clone();
    loop {
        let m = cur.terms().map(|(e, _)| e[y_idx]).max().unwrap_or(0);
        if m < deg {
            return cur;
        }
        let mut low = WPoly::zero(cur.vars().clone());
        let mut high_terms: Vec<(Vec<u32>, Rational)> = Vec::new();
        for (e, c) in cur.terms() {
            if e[y_idx] >= deg {
                high_terms.push((e.clone(), c.clone()));
            } else {
                low.add_term(e.clone(), c.clone());
            }
        }
        let mut acc = low;
        for (e, c) in high_terms {
            let mut rest = e.clone();
            rest[y_idx] -= deg;
            let contrib = rule.mul_monomial(&rest, &c);
            acc = acc.add(&contrib).unwrap();
        }
        cur = acc;
    }
}

/// An element of the function field `K = Frac(Q[x,y]/<f>)` in `y`-reduced
/// normal form. Denominators are not canonicalized by gcd; equality goes
/// through cross-multiplication.
#[derive(Debug, Clone)]
pub struct CurveElem {
    curve: Arc<PlaneCurve>,
    num: WPoly<Rational>,
    den: WPoly<Rational>,
}

impl CurveElem {
    pub fn new(
        curve: Arc<PlaneCurve>,
        num: WPoly<Rational>,
        den: WPoly<Rational>,
    ) -> Result<Self> {
        let num = curve.normal_form(&num);
        let den = curve.normal_form(&den);
        if den.is_zero() {
            return Err(DubrovinError::DivisionByZero);
        }
        Ok(CurveElem { curve, num, den })
    }

    pub fn from_poly(curve: Arc<PlaneCurve>, num: WPoly<Rational>) -> Self {
        let one = WPoly::one(curve.vars().clone());
        let num = curve.normal_form(&num);
        CurveElem {
            curve,
            num,
            den: one,
        }
    }

    pub fn zero(curve: Arc<PlaneCurve>) -> Self {
        let num = WPoly::zero(curve.vars().clone());
        let den = WPoly::one(curve.vars().clone());
        CurveElem { curve, num, den }
    }

    pub fn curve(&self) -> &Arc<PlaneCurve> {
        &self.curve
    }

    pub fn num(&self) -> &WPoly<Rational> {
        &self.num
    }

    pub fn den(&self) -> &WPoly<Rational> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn check_same_curve(&self, rhs: &Self) -> Result<()> {
        if self.curve.f() != rhs.curve.f() {
            return Err(DubrovinError::BadCurve(
                "elements of different function fields".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_same_curve(rhs)?;
        let num = self
            .num
            .mul(&rhs.den)?
            .add(&rhs.num.mul(&self.den)?)?;
        let den = self.den.mul(&rhs.den)?;
        CurveElem::new(self.curve.clone(), num, den)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        CurveElem {
            curve: self.curve.clone(),
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_same_curve(rhs)?;
        CurveElem::new(
            self.curve.clone(),
            self.num.mul(&rhs.num)?,
            self.den.mul(&rhs.den)?,
        )
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        self.check_same_curve(rhs)?;
        if rhs.is_zero() {
            return Err(DubrovinError::DivisionByZero);
        }
        CurveElem::new(
            self.curve.clone(),
            self.num.mul(&rhs.den)?,
            self.den.mul(&rhs.num)?,
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        CurveElem {
            curve: self.curve.clone(),
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Equality in `K` via cross-multiplication and normal forms.
    pub fn equals(&self, rhs: &Self) -> Result<bool> {
        self.check_same_curve(rhs)?;
        let lhs = self.num.mul(&rhs.den)?;
        let r = rhs.num.mul(&self.den)?;
        Ok(self.curve.normal_form(&lhs.sub(&r)?).is_zero())
    }

    /// `d/dx` of `e(x, y(x))`, using `dy/dx = -f_x / f_y`:
    /// `(n/d)' = (D(n) d - n D(d)) / (f_y d^2)` with `D(p) = p_x f_y - p_y f_x`.
    pub fn implicit_derivative(&self) -> Result<Self> {
        let c = &self.curve;
        let dn = c.total_derivative_numerator(&self.num);
        let dd = c.total_derivative_numerator(&self.den);
        let num = dn.mul(&self.den)?.sub(&self.num.mul(&dd)?)?;
        let den = c.f_y().mul(&self.den.mul(&self.den)?)?;
        CurveElem::new(c.clone(), num, den)
    }
}

/// `H_i = h_i(x, y) / f_y(x, y)` for the supplied numerators.
pub fn holomorphic_basis(
    curve: &Arc<PlaneCurve>,
    numerators: &[WPoly<Rational>],
) -> Result<Vec<CurveElem>> {
    if numerators.is_empty() {
        return Err(DubrovinError::EmptyBasis);
    }
    numerators
        .iter()
        .map(|h| CurveElem::new(curve.clone(), h.clone(), curve.f_y().clone()))
        .collect()
}

/// The default numerator list for a smooth plane curve of degree `d`: all
/// monomials `x^i y^j` with `i + j <= d - 3`, in graded order
/// `1, x, y, x^2, x y, y^2, ...`.
pub fn default_numerators(d: u32) -> Vec<WPoly<Rational>> {
    let t = VarTable::xy();
    let mut out = Vec::new();
    if d < 3 {
        return out;
    }
    for total in 0..=(d - 3) {
        for i in (0..=total).rev() {
            let j = total - i;
            out.push(WPoly::monomial(
                t.clone(),
                vec![i, j],
                <Rational as Coeff>::one(),
            ));
        }
    }
    out
}
