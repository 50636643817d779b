//! The algebraic parametrization of the Dubrovin threefold: the lifted
//! canonical curve `(U, V, W) = -(H, H', H''/2)` and its orbit under the
//! reparametrization group `G`.

use crate::curvefield::{CurveElem, PlaneCurve};
use crate::error::DubrovinError;
use crate::exactalg::{Coeff, Rational, VarTable, WPoly};
use crate::linalg::{invert, Mat};
use crate::Result;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// An element of the lower-triangular group `G`: the matrix
/// `[[a, 0, 0], [2b, a^2, 0], [c, 3ab, a^3]]` with `a != 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl GroupElement {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self> {
        if a.is_zero() {
            return Err(DubrovinError::SingularGroupElement);
        }
        Ok(GroupElement { a, b, c })
    }

    pub fn identity() -> Self {
        GroupElement {
            a: Rational::one(),
            b: Rational::zero(),
            c: Rational::zero(),
        }
    }

    /// Matrix product in `G`: `self * rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &Self) -> Self {
        // a'' = a a', b'' = a' b + a^2 b', c'' = c a' + 6 a b b' + a^3 c'
        let a = self.a.mul_ref(&rhs.a);
        let b = rhs.a.mul_ref(&self.b).add_ref(&self.a.mul_ref(&self.a).mul_ref(&rhs.b));
        let c = self
            .c
            .mul_ref(&rhs.a)
            .add_ref(
                &Rational::from_i64(6)
                    .mul_ref(&self.a)
                    .mul_ref(&self.b)
                    .mul_ref(&rhs.b),
            )
            .add_ref(&self.a.mul_ref(&self.a).mul_ref(&self.a).mul_ref(&rhs.c));
        GroupElement { a, b, c }
    }
}

/// A function-field element with denominator a known power of `f_y`,
/// `num / f_y^pow`, with `num` in `y`-reduced normal form. The coordinates
/// of the lifted canonical curve naturally carry denominators
/// `f_y, f_y^3, f_y^5`.
#[derive(Debug, Clone)]
pub struct FyFraction {
    pub num: WPoly<Rational>,
    pub pow: u32,
}

/// Denominator-cleared coordinates: `f_y^2 U, f_y^4 V, f_y^6 W`, genuine
/// polynomials in `x, y` (y-reduced). The induced point of `WP^{3g-1}` is
/// unchanged because `(U, V, W) -> (lam U, lam^2 V, lam^3 W)` is the
/// weighted scaling, here with `lam = f_y^2`.
#[derive(Debug, Clone)]
pub struct ClearedCoords {
    pub u: Vec<WPoly<Rational>>,
    pub v: Vec<WPoly<Rational>>,
    pub w: Vec<WPoly<Rational>>,
}

/// The symbolic triple `(U, V, W)` of the lifted canonical curve.
/// Invariants: `V = dU/dx` and `W = (1/2) d^2 U/dx^2` componentwise.
#[derive(Debug, Clone)]
pub struct DubrovinParam {
    curve: Arc<PlaneCurve>,
    u: Vec<FyFraction>,
    v: Vec<FyFraction>,
    w: Vec<FyFraction>,
    cleared: Option<ClearedCoords>,
}

impl DubrovinParam {
    pub fn curve(&self) -> &Arc<PlaneCurve> {
        &self.curve
    }

    pub fn genus(&self) -> usize {
        self.u.len()
    }

    fn materialize(&self, f: &FyFraction) -> CurveElem {
        let mut den = WPoly::one(self.curve.vars().clone());
        for _ in 0..f.pow {
            den = self.curve.normal_form(&den.mul(self.curve.f_y()).unwrap());
        }
        CurveElem::new(self.curve.clone(), f.num.clone(), den).expect("f_y power is nonzero")
    }

    pub fn u_elem(&self, i: usize) -> CurveElem {
        self.materialize(&self.u[i])
    }

    pub fn v_elem(&self, i: usize) -> CurveElem {
        self.materialize(&self.v[i])
    }

    pub fn w_elem(&self, i: usize) -> CurveElem {
        self.materialize(&self.w[i])
    }

    pub fn u_fractions(&self) -> &[FyFraction] {
        &self.u
    }

    pub fn v_fractions(&self) -> &[FyFraction] {
        &self.v
    }

    pub fn w_fractions(&self) -> &[FyFraction] {
        &self.w
    }

    pub fn cleared(&self) -> Option<&ClearedCoords> {
        self.cleared.as_ref()
    }

    /// Fill in the denominator-free coordinates `f_y^2 U, f_y^4 V, f_y^6 W`.
    pub fn clear_denominators(&mut self) -> Result<&ClearedCoords> {
        let fy = self.curve.f_y().clone();
        let clear_one = |f: &FyFraction, target: u32| -> Result<WPoly<Rational>> {
            if f.pow > target {
                return Err(DubrovinError::ResidualDenominator);
            }
            let mut p = f.num.clone();
            for _ in 0..(target - f.pow) {
                p = self.curve.normal_form(&p.mul(&fy)?);
            }
            Ok(p)
        };
        let u = self
            .u
            .iter()
            .map(|f| clear_one(f, 2))
            .collect::<Result<Vec<_>>>()?;
        let v = self
            .v
            .iter()
            .map(|f| clear_one(f, 4))
            .collect::<Result<Vec<_>>>()?;
        let w = self
            .w
            .iter()
            .map(|f| clear_one(f, 6))
            .collect::<Result<Vec<_>>>()?;
        self.cleared = Some(ClearedCoords { u, v, w });
        Ok(self.cleared.as_ref().unwrap())
    }

    /// Apply a numeric group element:
    /// `(u, v, w) -> (a u, 2b u + a^2 v, c u + 3ab v + a^3 w)`.
    pub fn apply_group(
        &self,
        g: &GroupElement,
    ) -> Result<(Vec<CurveElem>, Vec<CurveElem>, Vec<CurveElem>)> {
        if g.a.is_zero() {
            return Err(DubrovinError::SingularGroupElement);
        }
        let a2 = g.a.mul_ref(&g.a);
        let a3 = a2.mul_ref(&g.a);
        let b2 = Rational::from_i64(2).mul_ref(&g.b);
        let ab3 = Rational::from_i64(3).mul_ref(&g.a).mul_ref(&g.b);
        let mut us = Vec::new();
        let mut vs = Vec::new();
        let mut ws = Vec::new();
        for i in 0..self.genus() {
            let u = self.u_elem(i);
            let v = self.v_elem(i);
            let w = self.w_elem(i);
            us.push(u.scale(&g.a));
            vs.push(u.scale(&b2).add(&v.scale(&a2))?);
            ws.push(
                u.scale(&g.c)
                    .add(&v.scale(&ab3))?
                    .add(&w.scale(&a3))?,
            );
        }
        Ok((us, vs, ws))
    }
}

/// Lift a holomorphic basis to the canonical curve in `WP^{3g-1}`:
/// `U = -H, V = -H', W = -(1/2) H''` componentwise, where `H_i = h_i / f_y`.
///
/// The basis elements must carry the literal denominator `f_y` (as produced
/// by [`crate::curvefield::holomorphic_basis`]); that structure is what keeps
/// every later step denominator-free.
pub fn lift_canonical(
    curve: &Arc<PlaneCurve>,
    basis: &[CurveElem],
) -> Result<DubrovinParam> {
    if basis.is_empty() {
        return Err(DubrovinError::EmptyBasis);
    }
    for b in basis {
        if b.den() != curve.f_y() {
            return Err(DubrovinError::ResidualDenominator);
        }
    }
    let dfy = curve.total_derivative_numerator(curve.f_y());
    let deriv = |f: &FyFraction| -> Result<FyFraction> {
        // d/dx (n / f_y^k) = (D(n) f_y - k n D(f_y)) / f_y^{k+2}
        let dn = curve.total_derivative_numerator(&f.num);
        let num = dn.mul(curve.f_y())?.sub(
            &f.num
                .mul(&dfy)?
                .scale(&Rational::from_i64(f.pow as i64)),
        )?;
        Ok(FyFraction {
            num: curve.normal_form(&num),
            pow: f.pow + 2,
        })
    };
    let mut u = Vec::with_capacity(basis.len());
    let mut v = Vec::with_capacity(basis.len());
    let mut w = Vec::with_capacity(basis.len());
    let half = Rational::new(1.into(), 2.into());
    for b in basis {
        let ui = FyFraction {
            num: b.num().neg(),
            pow: 1,
        };
        let vi = deriv(&ui)?;
        let mut wi = deriv(&vi)?;
        wi.num = wi.num.scale(&half);
        u.push(ui);
        v.push(vi);
        w.push(wi);
    }
    Ok(DubrovinParam {
        curve: curve.clone(),
        u,
        v,
        w,
        cleared: None,
    })
}

/// The three families of orbit-surface equations of a numeric point
/// `(tu, tv, tw)` on the threefold, for `1 <= i < j <= g`. The returned
/// polynomials live in the `uvw` table; the tilded values appear as
/// coefficients.
pub fn orbit_surface_equations(
    tu: &[Rational],
    tv: &[Rational],
    tw: &[Rational],
) -> Result<Vec<WPoly<Rational>>> {
    let g = tu.len();
    assert!(tv.len() == g && tw.len() == g);
    if tu.iter().all(|c| c.is_zero()) {
        return Err(DubrovinError::ZeroUCoordinate);
    }
    let t = VarTable::uvw(g);
    let var = |block: usize, i: usize| WPoly::var(t.clone(), block * g + i);
    let mut out = Vec::new();
    for i in 0..g {
        for j in (i + 1)..g {
            let (ui, uj) = (var(0, i), var(0, j));
            let (vi, vj) = (var(1, i), var(1, j));
            let (wi, wj) = (var(2, i), var(2, j));
            // tu_i u_j - tu_j u_i
            let e1 = uj.scale(&tu[i]).sub(&ui.scale(&tu[j]))?;
            // tu_i (tu_j v_i - tu_i v_j) - u_i (tv_i u_j - tv_j u_i)
            let e2 = vi
                .scale(&tu[i].mul_ref(&tu[j]))
                .sub(&vj.scale(&tu[i].mul_ref(&tu[i])))?
                .sub(
                    &ui.mul(&uj.scale(&tv[i]).sub(&ui.scale(&tv[j]))?)?,
                )?;
            // 2 tu_j^2 (tu_j w_i - tu_i w_j) - 2 u_j^2 (tw_i u_j - tw_j u_i)
            //   + 3 tu_j u_j (tv_j v_i - tv_i v_j)
            let tuj2 = tu[j].mul_ref(&tu[j]);
            let two = Rational::from_i64(2);
            let three = Rational::from_i64(3);
            let part1 = wi
                .scale(&tu[j].mul_ref(&tuj2))
                .sub(&wj.scale(&tu[i].mul_ref(&tuj2)))?
                .scale(&two);
            let part2 = uj
                .mul(&uj)?
                .mul(&uj.scale(&tw[i]).sub(&ui.scale(&tw[j]))?)?
                .scale(&two);
            let part3 = uj
                .mul(&vi.scale(&tv[j]).sub(&vj.scale(&tv[i]))?)?
                .scale(&three.mul_ref(&tu[j]));
            let e3 = part1.sub(&part2)?.add(&part3)?;
            out.push(e1);
            out.push(e2);
            out.push(e3);
        }
    }
    Ok(out)
}

/// Change of coordinates to an adapted basis: each vector is multiplied by
/// `2 pi i * Pia^{-1}`. `pia` is row-major g x g.
pub fn adapt_coordinates(
    tu: &[Complex64],
    tv: &[Complex64],
    tw: &[Complex64],
    pia: &Mat,
) -> Result<(Vec<Complex64>, Vec<Complex64>, Vec<Complex64>)> {
    let g = tu.len();
    if pia.rows != g || pia.cols != g {
        return Err(DubrovinError::VarTableMismatch(format!(
            "Pia is {}x{}, point has g = {g}",
            pia.rows, pia.cols
        )));
    }
    let inv = invert(pia, 1e12)?;
    let tpi = Complex64::new(0.0, 2.0 * PI);
    let apply = |x: &[Complex64]| -> Vec<Complex64> {
        inv.matvec(x).into_iter().map(|z| z * tpi).collect()
    };
    Ok((apply(tu), apply(tv), apply(tw)))
}

/// Numeric evaluation of a list of cleared coordinates at a rational curve
/// point, for weighted-scaling spot checks.
pub fn eval_cleared_at(
    coords: &ClearedCoords,
    x: &Rational,
    y: &Rational,
) -> (Vec<Rational>, Vec<Rational>, Vec<Rational>) {
    let ev =
        |ps: &[WPoly<Rational>]| -> Vec<Rational> { ps.iter().map(|p| p.eval(&[x.clone(), y.clone()])).collect() };
    (ev(&coords.u), ev(&coords.v), ev(&coords.w))
}
