//! Degenerate theta functions: finite exponential sums for nodal and graph
//! curves, polynomial thetas for node-free degenerations, and their
//! Hirota-quartic expansions.

use crate::error::DubrovinError;
use crate::exactalg::{Coeff, Rational, VarTable, WPoly};
use crate::hirota::{ExtendedTerms, HirotaTerms, TauFunction};
use crate::Result;
use num_complex::Complex64 as C;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A finite exponential sum `sum_u gamma_u exp(u^T z)` over a set of
/// integer support vectors (the vertex set of a Delaunay polytope). The
/// coefficients `gamma_u` are inputs; no Voronoi combinatorics is computed
/// here.
#[derive(Debug, Clone)]
pub struct ExpSumTheta<D: Coeff> {
    support: Vec<Vec<i64>>,
    coeffs: Vec<D>,
}

impl<D: Coeff> ExpSumTheta<D> {
    pub fn new(support: Vec<Vec<i64>>, coeffs: Vec<D>) -> Result<Self> {
        if support.is_empty() {
            return Err(DubrovinError::EmptySupport);
        }
        let g = support[0].len();
        if support.iter().any(|s| s.len() != g) || coeffs.len() != support.len() {
            return Err(DubrovinError::EmptySupport);
        }
        for (i, s) in support.iter().enumerate() {
            if support[..i].contains(s) {
                return Err(DubrovinError::BadComponent(format!(
                    "duplicate support vector {s:?}"
                )));
            }
        }
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(DubrovinError::EmptySupport);
        }
        Ok(ExpSumTheta { support, coeffs })
    }

    /// The tetrahedral preset: support `{0, e1, e2, e3}` with coefficients
    /// `(1, 1, 1, -1)`, the graph-curve values for four lines in the plane.
    pub fn tetrahedral() -> ExpSumTheta<D> {
        let support = vec![
            vec![0, 0, 0],
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
        ];
        let coeffs = vec![D::one(), D::one(), D::one(), D::from_i64(-1)];
        ExpSumTheta { support, coeffs }
    }

    pub fn g(&self) -> usize {
        self.support[0].len()
    }

    pub fn support(&self) -> &[Vec<i64>] {
        &self.support
    }

    pub fn coeffs(&self) -> &[D] {
        &self.coeffs
    }
}

/// The pair polynomial of the Hirota expansion: with `delta = u - u'`,
/// `(delta.U)^4 - 4 (delta.U)(delta.W) + 6c (delta.U)^2 + 3 (delta.V)^2 + 16d`
/// for distinct support vectors, and `8d` on the diagonal.
fn pair_polynomial<D: Coeff>(g: usize, table: &Arc<VarTable>, delta: &[i64]) -> WPoly<D> {
    let block_form = |block: usize| -> WPoly<D> {
        let mut p = WPoly::zero(table.clone());
        for (k, &dk) in delta.iter().enumerate() {
            if dk != 0 {
                let mut e = vec![0u32; table.len()];
                e[block * g + k] = 1;
                p.add_term(e, D::from_i64(dk));
            }
        }
        p
    };
    let du = block_form(0);
    let dv = block_form(1);
    let dw = block_form(2);
    let c_var = WPoly::<D>::var(table.clone(), table.len() - 2);
    let d_var = WPoly::<D>::var(table.clone(), table.len() - 1);
    let du2 = du.mul(&du).unwrap();
    let mut p = du2.mul(&du2).unwrap();
    p = p
        .sub(&du.mul(&dw).unwrap().scale(&D::from_i64(4)))
        .unwrap();
    p = p
        .add(&c_var.mul(&du2).unwrap().scale(&D::from_i64(6)))
        .unwrap();
    p = p
        .add(&dv.mul(&dv).unwrap().scale(&D::from_i64(3)))
        .unwrap();
    p = p.add(&d_var.scale(&D::from_i64(16))).unwrap();
    p
}

/// Symbolic Hirota expansion of a finite exponential sum: for each
/// unordered pair of support vectors, the coefficient polynomial of
/// `exp((u + u')^T z)` in the bilinear form, keyed by `u + u'`. Pairs
/// sharing a key accumulate.
pub fn expsum_hirota<D: Coeff>(
    theta: &ExpSumTheta<D>,
) -> Result<BTreeMap<Vec<i64>, WPoly<D>>> {
    let g = theta.g();
    let table = VarTable::uvwcd(g);
    let mut out: BTreeMap<Vec<i64>, WPoly<D>> = BTreeMap::new();
    let n = theta.support.len();
    for i in 0..n {
        for j in i..n {
            let key: Vec<i64> = theta.support[i]
                .iter()
                .zip(&theta.support[j])
                .map(|(a, b)| a + b)
                .collect();
            let gamma = theta.coeffs[i].mul_ref(&theta.coeffs[j]);
            let contrib = if i == j {
                // diagonal: 8 d gamma^2
                WPoly::<D>::var(table.clone(), table.len() - 1).scale(&gamma.mul_ref(&D::from_i64(8)))
            } else {
                let delta: Vec<i64> = theta.support[i]
                    .iter()
                    .zip(&theta.support[j])
                    .map(|(a, b)| a - b)
                    .collect();
                pair_polynomial::<D>(g, &table, &delta).scale(&gamma)
            };
            match out.remove(&key) {
                Some(prev) => {
                    out.insert(key, prev.add(&contrib)?);
                }
                None => {
                    out.insert(key, contrib);
                }
            }
        }
    }
    Ok(out)
}

/// `tau(x,y,t) = sum gamma_u exp(u^T (Ux + Vy + Wt + D))` as a tau
/// function, with closed-form derivatives of every order (so the KP
/// residual path is exact).
pub struct ExpSumTau {
    support: Vec<Vec<i64>>,
    coeffs: Vec<C>,
    u: Vec<C>,
    v: Vec<C>,
    w: Vec<C>,
    c: C,
    d: C,
    d_vec: Vec<C>,
}

impl ExpSumTau {
    pub fn new(
        theta: &ExpSumTheta<Rational>,
        u: Vec<C>,
        v: Vec<C>,
        w: Vec<C>,
        c: C,
        d: C,
        d_vec: Vec<C>,
    ) -> Result<Self> {
        let coeffs = theta
            .coeffs
            .iter()
            .map(|q| C::new(crate::exactalg::rational_to_f64(q), 0.0))
            .collect();
        Ok(ExpSumTau {
            support: theta.support.clone(),
            coeffs,
            u,
            v,
            w,
            c,
            d,
            d_vec,
        })
    }

    pub fn new_complex(
        support: Vec<Vec<i64>>,
        coeffs: Vec<C>,
        u: Vec<C>,
        v: Vec<C>,
        w: Vec<C>,
        c: C,
        d: C,
        d_vec: Vec<C>,
    ) -> Self {
        ExpSumTau {
            support,
            coeffs,
            u,
            v,
            w,
            c,
            d,
            d_vec,
        }
    }

    /// Per-term exponent data `(gamma e^{s.z}, s.U, s.V, s.W)`.
    fn term_data(&self, x: f64, y: f64, t: f64) -> Vec<(C, C, C, C)> {
        self.support
            .iter()
            .zip(&self.coeffs)
            .map(|(s, gam)| {
                let mut a = C::new(0.0, 0.0);
                let mut b = C::new(0.0, 0.0);
                let mut w = C::new(0.0, 0.0);
                let mut e = C::new(0.0, 0.0);
                for (k, &sk) in s.iter().enumerate() {
                    let skf = sk as f64;
                    a += self.u[k] * skf;
                    b += self.v[k] * skf;
                    w += self.w[k] * skf;
                    e += self.d_vec[k] * skf;
                }
                let val = gam * (a * x + b * y + w * t + e).exp();
                (val, a, b, w)
            })
            .collect()
    }
}

impl TauFunction for ExpSumTau {
    fn cd(&self) -> (C, C) {
        (self.c, self.d)
    }

    fn terms(&self, x: f64, y: f64, t: f64) -> Result<HirotaTerms> {
        let data = self.term_data(x, y, t);
        let mut h = HirotaTerms {
            tau: C::new(0.0, 0.0),
            tx: C::new(0.0, 0.0),
            txx: C::new(0.0, 0.0),
            txxx: C::new(0.0, 0.0),
            txxxx: C::new(0.0, 0.0),
            tt: C::new(0.0, 0.0),
            txt: C::new(0.0, 0.0),
            ty: C::new(0.0, 0.0),
            tyy: C::new(0.0, 0.0),
            tau_scale: 0.0,
        };
        for (val, a, b, w) in data {
            h.tau += val;
            h.tx += val * a;
            h.txx += val * a * a;
            h.txxx += val * a * a * a;
            h.txxxx += val * a * a * a * a;
            h.tt += val * w;
            h.txt += val * a * w;
            h.ty += val * b;
            h.tyy += val * b * b;
            h.tau_scale += val.norm();
        }
        Ok(h)
    }

    fn extended(&self, x: f64, y: f64, t: f64) -> Option<Result<ExtendedTerms>> {
        let data = self.term_data(x, y, t);
        let mut e = ExtendedTerms {
            x5: C::new(0.0, 0.0),
            x6: C::new(0.0, 0.0),
            x2t: C::new(0.0, 0.0),
            x3t: C::new(0.0, 0.0),
            xy: C::new(0.0, 0.0),
            x2y: C::new(0.0, 0.0),
            xyy: C::new(0.0, 0.0),
            x2yy: C::new(0.0, 0.0),
        };
        for (val, a, b, w) in data {
            let a2 = a * a;
            let a3 = a2 * a;
            e.x5 += val * a3 * a2;
            e.x6 += val * a3 * a3;
            e.x2t += val * a2 * w;
            e.x3t += val * a3 * w;
            e.xy += val * a * b;
            e.x2y += val * a2 * b;
            e.xyy += val * a * b * b;
            e.x2yy += val * a2 * b * b;
        }
        Some(Ok(e))
    }
}

/// Numeric KP residual of an exponential-sum tau at a numeric point of the
/// big space: like the theta-based residual sweep, but with the finite sum
/// (whose derivatives are closed-form, so the KP residual path is exact).
pub fn expsum_solution_check(
    theta: &ExpSumTheta<Rational>,
    point: &crate::hirota::DubrovinPoint,
    d_vec: Vec<C>,
    grid: &[(f64, f64, f64)],
) -> Result<crate::hirota::KpReport> {
    let tau = ExpSumTau::new(
        theta,
        point.u.clone(),
        point.v.clone(),
        point.w.clone(),
        point.c,
        point.d,
        d_vec,
    )?;
    crate::hirota::kp_residual(&tau, grid)
}

/// For monomial differentials `t^{k_i} dt`, the theta-surface
/// parametrization `z_i(p, q) = (p^{k_i+1} + q^{k_i+1}) / (k_i + 1)` over
/// the table `(p, q)`.
pub fn polytheta_parametrization(exponents: &[u32]) -> Vec<WPoly<Rational>> {
    let t = VarTable::new(vec!["p".into(), "q".into()], vec![1, 1]).unwrap();
    exponents
        .iter()
        .map(|&k| {
            let inv = Rational::new(1.into(), (k as i64 + 1).into());
            WPoly::from_terms(
                t.clone(),
                vec![
                    (vec![k + 1, 0], inv.clone()),
                    (vec![0, k + 1], inv),
                ],
            )
        })
        .collect()
}

/// Verify that a candidate polynomial theta vanishes identically on the
/// theta-surface parametrization determined by the monomial exponents:
/// substituting `z_i(p, q)` must give the exact zero polynomial.
pub fn verify_polytheta(theta: &WPoly<Rational>, exponents: &[u32]) -> Result<()> {
    assert_eq!(theta.vars().len(), exponents.len());
    let images = polytheta_parametrization(exponents);
    let composed = theta.compose(&images)?;
    if composed.is_zero() {
        Ok(())
    } else {
        Err(DubrovinError::NonvanishingTheta(composed.num_terms()))
    }
}

/// The affine trace of a projective linear factor `alpha u1 + beta u2 +
/// gamma u3` in the chart `(x, y) = (u1/u3, u2/u3)`.
#[derive(Debug, Clone)]
pub enum LineComponent {
    /// `y = slope x + intercept` (factor with beta != 0)
    Graph { slope: Rational, intercept: Rational },
    /// `x = x0` (factor with beta = 0, alpha != 0)
    Vertical { x0: Rational },
}

impl LineComponent {
    pub fn from_factor(alpha: &Rational, beta: &Rational, gamma: &Rational) -> Result<Self> {
        if !beta.is_zero() {
            Ok(LineComponent::Graph {
                slope: Coeff::neg_ref(&alpha.div_ref(beta)),
                intercept: Coeff::neg_ref(&gamma.div_ref(beta)),
            })
        } else if !alpha.is_zero() {
            Ok(LineComponent::Vertical {
                x0: Coeff::neg_ref(&gamma.div_ref(alpha)),
            })
        } else {
            Err(DubrovinError::BadComponent(
                "the line at infinity has no affine parametrization in this chart".into(),
            ))
        }
    }
}

/// Membership of a `(U, V, W)` polynomial in the Dubrovin-type ideal of a
/// reducible plane quartic, checked per rational line component: the
/// candidate must vanish identically on the group-applied lifted
/// parametrization of each listed component.
///
/// `f_homog` is the reducible quartic in `u_1, u_2, u_3`; components are
/// the affine traces of its linear factors.
pub fn graph_curve_membership(
    f_homog: &WPoly<Rational>,
    components: &[LineComponent],
    candidate: &WPoly<Rational>,
) -> Result<Vec<bool>> {
    if f_homog.vars().len() != 3 || candidate.vars().len() != 9 {
        return Err(DubrovinError::VarTableMismatch(
            "need a ternary form and a g=3 candidate".into(),
        ));
    }
    // affine chart (x, y) = (u1/u3, u2/u3)
    let st = VarTable::new(
        vec!["a".into(), "b".into(), "c".into(), "s".into()],
        vec![1, 1, 1, 1],
    )?;
    let s_var = WPoly::<Rational>::var(st.clone(), 3);
    let const_poly =
        |q: &Rational| WPoly::constant(st.clone(), q.clone());
    let mut verdicts = Vec::with_capacity(components.len());
    for comp in components {
        // x(s), y(s) in the chart, and the denominator base Q(s)
        let (x_s, y_s, q_s) = match comp {
            LineComponent::Graph { slope, intercept } => {
                let x_s = s_var.clone();
                let y_s = s_var.scale(slope).add(&const_poly(intercept))?;
                // f_y of the affine curve f(x, y) = F(x, y, 1)
                let (fx_aff, fy_aff) = affine_partials(f_homog)?;
                let _ = fx_aff;
                let q = fy_aff.compose(&[x_s.clone(), y_s.clone()])?;
                (x_s, y_s, q)
            }
            LineComponent::Vertical { x0 } => {
                let x_s = const_poly(x0);
                let y_s = s_var.clone();
                // vertical components use -f_x as the base (omega = -h dy / f_x)
                let (fx_aff, _fy_aff) = affine_partials(f_homog)?;
                let q = fx_aff.compose(&[x_s.clone(), y_s.clone()])?;
                (x_s, y_s, q)
            }
        };
        if q_s.is_zero() {
            return Err(DubrovinError::BadComponent(
                "denominator form vanishes identically on the component".into(),
            ));
        }
        // the component must actually lie on the curve
        let f_aff = dehomogenize(f_homog)?;
        if !f_aff.compose(&[x_s.clone(), y_s.clone()])?.is_zero() {
            return Err(DubrovinError::BadComponent(
                "line is not a component of the quartic".into(),
            ));
        }
        // h = (x, y, 1); u_i = -h_i / Q for graph lines, +h_i / Q for
        // vertical ones (omega = h dx / f_y = -h dy / f_x)
        let sign = match comp {
            LineComponent::Graph { .. } => -1i64,
            LineComponent::Vertical { .. } => 1i64,
        };
        let h: Vec<WPoly<Rational>> = vec![x_s.clone(), y_s.clone(), WPoly::one(st.clone())];
        let dq = q_s.partial_derivative_idx(3);
        // numerators over Q^k with quotient-rule derivative:
        // (n / Q^k)' = (n' Q - k n Q') / Q^{k+1}
        let mut nu = Vec::new();
        let mut nv = Vec::new();
        let mut nw = Vec::new();
        for hi in &h {
            let n_u = hi.scale(&Rational::from_i64(sign));
            let n_v = n_u
                .partial_derivative_idx(3)
                .mul(&q_s)?
                .sub(&n_u.mul(&dq)?)?;
            let n_w_raw = n_v
                .partial_derivative_idx(3)
                .mul(&q_s)?
                .sub(&n_v.mul(&dq)?.scale(&Rational::from_i64(2)))?;
            let half = Rational::new(1.into(), 2.into());
            nu.push(n_u);
            nv.push(n_v);
            nw.push(n_w_raw.scale(&half));
        }
        // weighted clearing with lam = Q turns (n_u/Q, n_v/Q^2, n_w/Q^3)
        // into the numerators themselves; then apply the group action
        let a = WPoly::<Rational>::var(st.clone(), 0);
        let b = WPoly::<Rational>::var(st.clone(), 1);
        let c = WPoly::<Rational>::var(st.clone(), 2);
        let a2 = a.mul(&a)?;
        let a3 = a2.mul(&a)?;
        let mut coords = Vec::with_capacity(9);
        for i in 0..3 {
            coords.push(a.mul(&nu[i])?);
        }
        for i in 0..3 {
            coords.push(
                b.mul(&nu[i])?
                    .scale(&Rational::from_i64(2))
                    .add(&a2.mul(&nv[i])?)?,
            );
        }
        for i in 0..3 {
            let t1 = c.mul(&nu[i])?;
            let t2 = a
                .mul(&b)?
                .mul(&nv[i])?
                .scale(&Rational::from_i64(3));
            let t3 = a3.mul(&nw[i])?;
            coords.push(t1.add(&t2)?.add(&t3)?);
        }
        // substitute into the candidate
        let mut acc = WPoly::<Rational>::zero(st.clone());
        for (e, coef) in candidate.terms() {
            let mut term = WPoly::constant(st.clone(), coef.clone());
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term = term.mul(&coords[i])?;
                }
            }
            acc = acc.add(&term)?;
        }
        verdicts.push(acc.is_zero());
    }
    Ok(verdicts)
}

/// Partials of the dehomogenized quartic `f(x, y) = F(x, y, 1)`.
fn affine_partials(f_homog: &WPoly<Rational>) -> Result<(WPoly<Rational>, WPoly<Rational>)> {
    let f_aff = dehomogenize(f_homog)?;
    Ok((
        f_aff.partial_derivative_idx(0),
        f_aff.partial_derivative_idx(1),
    ))
}

fn dehomogenize(f_homog: &WPoly<Rational>) -> Result<WPoly<Rational>> {
    let t = VarTable::xy();
    let mut out = WPoly::zero(t);
    for (e, c) in f_homog.terms() {
        out.add_term(vec![e[0], e[1]], c.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, rat_int};
    use crate::hirota::{grid_points, kp_residual, linspace};

    #[test]
    fn tetrahedral_expansion_matches_displayed_form() {
        let theta = ExpSumTheta::<Rational>::tetrahedral();
        let h = expsum_hirota(&theta).unwrap();
        let table = VarTable::uvwcd(3);
        let d_idx = table.len() - 1;
        let c_idx = table.len() - 2;
        // diagonal keys: 8 d gamma_i^2
        for i in 0..3 {
            let mut key = vec![0i64; 3];
            key[i] = 2;
            let p = &h[&key];
            let mut e = vec![0u32; table.len()];
            e[d_idx] = 1;
            assert_eq!(p.coeff(&e), rat_int(8));
            assert_eq!(p.num_terms(), 1);
        }
        // mixed key (0, e_i): gamma_0 gamma_i (u_i^4 + 6 c u_i^2 + 3 v_i^2
        //  - 4 u_i w_i + 16 d); gamma_0 gamma_3 = -1
        for i in 0..3 {
            let mut key = vec![0i64; 3];
            key[i] = 1;
            let p = &h[&key];
            let gam = if i == 2 { -1 } else { 1 };
            let mut e4 = vec![0u32; table.len()];
            e4[i] = 4;
            assert_eq!(p.coeff(&e4), rat_int(gam));
            let mut ec = vec![0u32; table.len()];
            ec[i] = 2;
            ec[c_idx] = 1;
            assert_eq!(p.coeff(&ec), rat_int(6 * gam));
            let mut ev = vec![0u32; table.len()];
            ev[3 + i] = 2;
            assert_eq!(p.coeff(&ev), rat_int(3 * gam));
            let mut euw = vec![0u32; table.len()];
            euw[i] = 1;
            euw[6 + i] = 1;
            assert_eq!(p.coeff(&euw), rat_int(-4 * gam));
            let mut ed = vec![0u32; table.len()];
            ed[d_idx] = 1;
            assert_eq!(p.coeff(&ed), rat_int(16 * gam));
            assert_eq!(p.num_terms(), 5);
        }
        // cross key (e_i, e_j): the long displayed polynomial; spot-check
        // the i < j = (0, 1) case, gamma_1 gamma_2 = 1
        let p = &h[&vec![1, 1, 0]];
        let mk = |entries: Vec<(usize, u32)>| {
            let mut e = vec![0u32; table.len()];
            for (i, k) in entries {
                e[i] = k;
            }
            e
        };
        assert_eq!(p.coeff(&mk(vec![(0, 4)])), rat_int(1)); // u1^4
        assert_eq!(p.coeff(&mk(vec![(0, 3), (1, 1)])), rat_int(-4)); // -4u1^3u2
        assert_eq!(p.coeff(&mk(vec![(0, 2), (1, 2)])), rat_int(6)); // 6u1^2u2^2
        assert_eq!(p.coeff(&mk(vec![(0, 2), (c_idx, 1)])), rat_int(6));
        assert_eq!(p.coeff(&mk(vec![(0, 1), (1, 1), (c_idx, 1)])), rat_int(-12));
        assert_eq!(p.coeff(&mk(vec![(0, 1), (6, 1)])), rat_int(-4)); // -4u1w1
        assert_eq!(p.coeff(&mk(vec![(0, 1), (7, 1)])), rat_int(4)); // +4u1w2
        assert_eq!(p.coeff(&mk(vec![(1, 1), (6, 1)])), rat_int(4)); // +4u2w1
        assert_eq!(p.coeff(&mk(vec![(1, 1), (7, 1)])), rat_int(-4)); // -4u2w2
        assert_eq!(p.coeff(&mk(vec![(3, 2)])), rat_int(3)); // 3v1^2
        assert_eq!(p.coeff(&mk(vec![(3, 1), (4, 1)])), rat_int(-6)); // -6v1v2
        assert_eq!(p.coeff(&mk(vec![(4, 2)])), rat_int(3)); // 3v2^2
        assert_eq!(p.coeff(&mk(vec![(d_idx, 1)])), rat_int(16));
    }

    #[test]
    fn single_exponential_solves_with_d_zero() {
        let theta = ExpSumTheta::<Rational>::new(vec![vec![2, -1]], vec![rat_int(3)]).unwrap();
        let h = expsum_hirota(&theta).unwrap();
        assert_eq!(h.len(), 1);
        let p = &h[&vec![4, -2]];
        // only the 8 d gamma^2 term: with d = 0 everything vanishes, u = c
        let table = VarTable::uvwcd(2);
        let mut e = vec![0u32; table.len()];
        e[table.len() - 1] = 1;
        assert_eq!(p.coeff(&e), rat_int(72));
        assert_eq!(p.num_terms(), 1);

        let c64 = |re: f64| C::new(re, 0.0);
        let tau = ExpSumTau::new(
            &theta,
            vec![c64(0.7), c64(-0.2)],
            vec![c64(0.1), c64(0.3)],
            vec![c64(-0.4), c64(0.05)],
            c64(0.37),
            c64(0.0),
            vec![c64(0.0), c64(0.0)],
        )
        .unwrap();
        let grid = grid_points(&linspace(-1.0, 1.0, 5), &[0.0, 0.5], &[0.0]);
        let rep = kp_residual(&tau, &grid).unwrap();
        assert!(rep.hirota_rel_max < 1e-12);
        assert!(rep.kp_abs_max < 1e-12, "kp {}", rep.kp_abs_max);
        // u = c everywhere
        for s in &rep.samples {
            assert!((s.u - c64(0.37)).norm() < 1e-12);
        }
    }

    #[test]
    fn two_term_support_matches_hand_expansion() {
        // tau = gamma_0 exp(s0.z) + gamma_1 exp(s1.z): the only nontrivial
        // coefficient is the generic pair polynomial at delta = s0 - s1
        let s0 = vec![1i64, 2];
        let s1 = vec![0i64, -1];
        let theta =
            ExpSumTheta::<Rational>::new(vec![s0.clone(), s1.clone()], vec![rat(2, 1), rat(-1, 3)])
                .unwrap();
        let h = expsum_hirota(&theta).unwrap();
        let key: Vec<i64> = s0.iter().zip(&s1).map(|(a, b)| a + b).collect();
        let p = &h[&key];
        // hand expansion with delta = (1, 3):
        // (u1 + 3u2)^4 - 4 (u1 + 3u2)(w1 + 3w2) + 6c (u1 + 3u2)^2
        //  + 3 (v1 + 3v2)^2 + 16 d, times gamma product -2/3.
        // table order: u1 u2 v1 v2 w1 w2 c d
        let table = VarTable::uvwcd(2);
        let gam = rat(-2, 3);
        let mk = |entries: Vec<(usize, u32)>| {
            let mut e = vec![0u32; table.len()];
            for (i, k) in entries {
                e[i] = k;
            }
            e
        };
        assert_eq!(p.coeff(&mk(vec![(0, 4)])), gam.clone());
        assert_eq!(p.coeff(&mk(vec![(1, 4)])), gam.mul_ref(&rat_int(81)));
        // -4 u1 w1 and -4*9 u2 w2
        assert_eq!(p.coeff(&mk(vec![(0, 1), (4, 1)])), gam.mul_ref(&rat_int(-4)));
        assert_eq!(p.coeff(&mk(vec![(1, 1), (5, 1)])), gam.mul_ref(&rat_int(-36)));
        // 3 * 2 * 3 v1 v2
        assert_eq!(p.coeff(&mk(vec![(2, 1), (3, 1)])), gam.mul_ref(&rat_int(18)));
        // 6 c (u1 + 3u2)^2: u1 u2 c picks 6 * 6 = 36
        assert_eq!(
            p.coeff(&mk(vec![(0, 1), (1, 1), (6, 1)])),
            gam.mul_ref(&rat_int(36))
        );
        assert_eq!(
            p.coeff(&mk(vec![(table.len() - 1, 1)])),
            gam.mul_ref(&rat_int(16))
        );
    }

    #[test]
    fn soliton_point_zeroes_tetrahedral_system() {
        // (U, V, W) = (kappa, kappa^2, kappa^3), c = d = 0 zeroes every
        // coefficient polynomial of the tetrahedral expansion exactly
        let theta = ExpSumTheta::<Rational>::tetrahedral();
        let h = expsum_hirota(&theta).unwrap();
        let kappas = [rat(1, 2), rat(-1, 3), rat(5, 4)];
        let mut vals: Vec<Rational> = kappas.to_vec();
        vals.extend(kappas.iter().map(|k| k.mul_ref(k)));
        vals.extend(kappas.iter().map(|k| k.mul_ref(k).mul_ref(k)));
        vals.push(rat_int(0)); // c
        vals.push(rat_int(0)); // d
        for (key, p) in &h {
            assert!(
                p.eval(&vals).is_zero(),
                "coefficient at key {key:?} does not vanish"
            );
        }
        // and the numeric residual is tiny on a grid; D gets an imaginary
        // shift so the grid stays away from the (real) soliton poles where
        // cancellation noise amplifies
        let c64 = |re: f64| C::new(re, 0.0);
        let tau = ExpSumTau::new(
            &theta,
            kappas
                .iter()
                .map(|k| c64(crate::exactalg::rational_to_f64(k)))
                .collect(),
            kappas
                .iter()
                .map(|k| c64(crate::exactalg::rational_to_f64(&k.mul_ref(k))))
                .collect(),
            kappas
                .iter()
                .map(|k| c64(crate::exactalg::rational_to_f64(&k.mul_ref(k).mul_ref(k))))
                .collect(),
            c64(0.0),
            c64(0.0),
            vec![C::new(0.1, 0.9), C::new(-0.2, 0.4), C::new(0.3, -0.7)],
        )
        .unwrap();
        let grid = grid_points(&linspace(-1.5, 1.5, 6), &linspace(-1.0, 1.0, 3), &[0.0, 0.3]);
        let rep = kp_residual(&tau, &grid).unwrap();
        assert!(rep.hirota_rel_max < 1e-10, "hirota {}", rep.hirota_rel_max);
        assert!(rep.kp_abs_max < 1e-8, "kp {}", rep.kp_abs_max);
    }

    #[test]
    fn quintic_polytheta_identity() {
        // f = x^4 - y^3: exponents (4, 1, 0);
        // theta = z3^5 - 20 z2^2 z3 + 20 z1 vanishes identically
        let zt = VarTable::new(
            vec!["z1".into(), "z2".into(), "z3".into()],
            vec![1, 1, 1],
        )
        .unwrap();
        let theta = WPoly::from_terms(
            zt.clone(),
            vec![
                (vec![0, 0, 5], rat_int(1)),
                (vec![0, 2, 1], rat_int(-20)),
                (vec![1, 0, 0], rat_int(20)),
            ],
        );
        verify_polytheta(&theta, &[4, 1, 0]).unwrap();
        // parametrization is symmetric under p <-> q
        let par = polytheta_parametrization(&[4, 1, 0]);
        for z in &par {
            for (e, c) in z.terms() {
                let swapped = vec![e[1], e[0]];
                assert_eq!(&z.coeff(&swapped), c);
            }
        }
        // a wrong candidate errors out
        let bad = WPoly::from_terms(zt, vec![(vec![1, 0, 0], rat_int(1))]);
        assert!(verify_polytheta(&bad, &[4, 1, 0]).is_err());
    }

    #[test]
    fn graph_curve_component_membership() {
        // f = u2 u3 (u2 - u1)(u3 - u1); affine components in the chart
        // (x, y) = (u1/u3, u2/u3): y = 0, y = x, and the vertical x = 1
        let ut = VarTable::u_only(3);
        let u1 = WPoly::<Rational>::var(ut.clone(), 0);
        let u2 = WPoly::<Rational>::var(ut.clone(), 1);
        let u3 = WPoly::<Rational>::var(ut.clone(), 2);
        let f = u2
            .mul(&u3)
            .unwrap()
            .mul(&u2.sub(&u1).unwrap())
            .unwrap()
            .mul(&u3.sub(&u1).unwrap())
            .unwrap();
        let comps = vec![
            LineComponent::from_factor(&rat_int(0), &rat_int(1), &rat_int(0)).unwrap(), // u2
            LineComponent::from_factor(&rat_int(-1), &rat_int(1), &rat_int(0)).unwrap(), // u2 - u1
            LineComponent::from_factor(&rat_int(-1), &rat_int(0), &rat_int(1)).unwrap(), // u3 - u1
        ];
        // the u3 factor is the line at infinity: rejected
        assert!(LineComponent::from_factor(&rat_int(0), &rat_int(0), &rat_int(1)).is_err());

        let t = VarTable::uvw(3);
        let candidates: Vec<(WPoly<Rational>, Vec<bool>)> = vec![
            // u2, v2, w2 vanish on the y = 0 component only
            (WPoly::var(t.clone(), 1), vec![true, false, false]),
            (WPoly::var(t.clone(), 4), vec![true, false, false]),
            (WPoly::var(t.clone(), 7), vec![true, false, false]),
            // u2 - u1 etc. vanish on the y = x component
            (
                WPoly::<Rational>::var(t.clone(), 1)
                    .sub(&WPoly::var(t.clone(), 0))
                    .unwrap(),
                vec![false, true, false],
            ),
            (
                WPoly::<Rational>::var(t.clone(), 4)
                    .sub(&WPoly::var(t.clone(), 3))
                    .unwrap(),
                vec![false, true, false],
            ),
            (
                WPoly::<Rational>::var(t.clone(), 7)
                    .sub(&WPoly::var(t.clone(), 6))
                    .unwrap(),
                vec![false, true, false],
            ),
            // u3 - u1 vanishes on the vertical x = 1 component
            (
                WPoly::<Rational>::var(t.clone(), 2)
                    .sub(&WPoly::var(t.clone(), 0))
                    .unwrap(),
                vec![false, false, true],
            ),
            (
                WPoly::<Rational>::var(t.clone(), 5)
                    .sub(&WPoly::var(t.clone(), 3))
                    .unwrap(),
                vec![false, false, true],
            ),
            // u1 alone vanishes on no component
            (WPoly::var(t.clone(), 0), vec![false, false, false]),
        ];
        for (cand, expect) in &candidates {
            let got = graph_curve_membership(&f, &comps, cand).unwrap();
            assert_eq!(&got, expect, "candidate {cand}");
        }
        // f itself (embedded in the uvw table) is a member on every component
        let f_uvw = f.embed(t.clone(), &[0, 1, 2]);
        let got = graph_curve_membership(&f, &comps, &f_uvw).unwrap();
        assert_eq!(got, vec![true, true, true]);
    }
}
