//! Linear algebra over theta constants: the lambda system that eliminates
//! `c` and `d` from the Dubrovin quartics, canonical-curve recovery, and
//! the genus-2 quintic recovery.

use crate::error::DubrovinError;
use crate::exactalg::{VarTable, WPoly};
use crate::hirota::dubrovin_quartic;
use crate::linalg::{nullspace, Mat};
use crate::theta::ThetaConstants;
use crate::Result;
use num_complex::Complex64 as C;

/// Solutions `lambda` of `sum_eps lambda_eps Q[eps] = 0` and
/// `sum_eps lambda_eps theta-hat[eps](0) = 0`, ordered like the theta
/// module's characteristic index.
#[derive(Debug, Clone)]
pub struct LambdaSolutionSpace {
    /// Nullspace basis vectors, each of length `2^g`.
    pub basis: Vec<Vec<C>>,
    /// All singular values of the system, descending.
    pub singular_values: Vec<f64>,
    /// Ratio between the smallest kept singular value and the largest one
    /// below the threshold (infinite when nothing was discarded).
    pub gap: f64,
}

/// Solve the linear conditions of the c,d-elimination: stack the upper
/// triangle of `sum lambda Q[eps]` and the value row, then compute the
/// numeric nullspace with threshold `tol * sigma_max`.
pub fn lambda_nullspace(constants: &ThetaConstants, tol: f64) -> Result<LambdaSolutionSpace> {
    let g = constants.g;
    let n = constants.chars.len();
    let mut rows: Vec<Vec<C>> = Vec::new();
    for j in 0..g {
        for k in j..g {
            rows.push(
                constants
                    .chars
                    .iter()
                    .map(|ch| ch.hessian[j * g + k])
                    .collect(),
            );
        }
    }
    rows.push(constants.chars.iter().map(|ch| ch.value).collect());
    let m = Mat::from_rows(rows);
    let (sigmas, basis) = nullspace(&m, tol);
    let kept = basis.len();
    let gap = if kept == 0 || kept == n {
        f64::INFINITY
    } else {
        let smallest_kept = sigmas[n - kept - 1];
        let largest_dropped = sigmas[n - kept];
        smallest_kept / largest_dropped.max(1e-300)
    };
    Ok(LambdaSolutionSpace {
        basis,
        singular_values: sigmas,
        gap,
    })
}

/// Normalize a complex form: divide by the largest-magnitude coefficient
/// (ties broken by term order), fixing the phase so that coefficient
/// becomes real positive.
pub fn normalize_form(p: &WPoly<C>) -> WPoly<C> {
    let mut best = C::new(0.0, 0.0);
    for (_, c) in p.sorted_terms() {
        if c.norm() > best.norm() * (1.0 + 1e-12) {
            best = *c;
        }
    }
    if best.norm() == 0.0 {
        return p.clone();
    }
    p.scale(&best.inv())
}

/// For each lambda in the nullspace, the quartic
/// `sum_eps lambda_eps d^4_U theta-hat[eps](0)` as a form in `u_1..u_g`,
/// normalized so its largest coefficient is 1. These cut out the canonical
/// model of the curve.
pub fn recover_canonical_quartics(constants: &ThetaConstants, tol: f64) -> Result<Vec<WPoly<C>>> {
    let space = lambda_nullspace(constants, tol)?;
    if space.basis.is_empty() {
        return Err(DubrovinError::UnexpectedDimension {
            got: 0,
            expected: 1,
        });
    }
    let g = constants.g;
    let table = VarTable::u_only(g);
    let mut out = Vec::new();
    for lambda in &space.basis {
        let mut tensor = vec![C::new(0.0, 0.0); g * g * g * g];
        for (le, ch) in lambda.iter().zip(&constants.chars) {
            for (t, &f) in tensor.iter_mut().zip(ch.fourth.iter()) {
                *t += le * f;
            }
        }
        let mut q = WPoly::<C>::zero(table.clone());
        for i in 0..g {
            for j in 0..g {
                for k in 0..g {
                    for l in 0..g {
                        let coef = tensor[((i * g + j) * g + k) * g + l];
                        if coef.norm() != 0.0 {
                            let mut e = vec![0u32; g];
                            e[i] += 1;
                            e[j] += 1;
                            e[k] += 1;
                            e[l] += 1;
                            q.add_term(e, coef);
                        }
                    }
                }
            }
        }
        out.push(normalize_form(&q));
    }
    Ok(out)
}

/// The genus-2 construction: solve for linear forms `l[eps]` in `(u1, u2)`
/// with `sum l[eps] Q[eps](U, U) = 0` and `sum l[eps] theta-hat[eps] = 0`,
/// and return the two quintics `sum l[eps] F[eps]`, which then involve
/// only `U, V, W`.
pub fn genus2_quintics(constants: &ThetaConstants, tol: f64) -> Result<Vec<WPoly<C>>> {
    let g = constants.g;
    if g != 2 {
        return Err(DubrovinError::BadRiemannMatrix(
            "genus-2 quintic recovery needs g = 2".into(),
        ));
    }
    let n = constants.chars.len();
    // unknowns (alpha_0, beta_0, ..., alpha_3, beta_3): l[eps] = alpha u1 + beta u2
    let mut rows: Vec<Vec<C>> = Vec::new();
    // cubic-coefficient rows of sum l[eps] Q[eps](U, U):
    //   u1^3: alpha Q11, u1^2 u2: 2 alpha Q12 + beta Q11,
    //   u1 u2^2: alpha Q22 + 2 beta Q12, u2^3: beta Q22
    for pattern in 0..4 {
        let mut row = Vec::with_capacity(2 * n);
        for ch in &constants.chars {
            let q11 = ch.hessian[0];
            let q12 = ch.hessian[1];
            let q22 = ch.hessian[3];
            let (ca, cb) = match pattern {
                0 => (q11, C::new(0.0, 0.0)),
                1 => (q12 * 2.0, q11),
                2 => (q22, q12 * 2.0),
                _ => (C::new(0.0, 0.0), q22),
            };
            row.push(ca);
            row.push(cb);
        }
        rows.push(row);
    }
    // linear-coefficient rows of sum l[eps] theta-hat[eps]
    for which in 0..2 {
        let mut row = Vec::with_capacity(2 * n);
        for ch in &constants.chars {
            if which == 0 {
                row.push(ch.value);
                row.push(C::new(0.0, 0.0));
            } else {
                row.push(C::new(0.0, 0.0));
                row.push(ch.value);
            }
        }
        rows.push(row);
    }
    let m = Mat::from_rows(rows);
    let (_sigmas, basis) = nullspace(&m, tol);
    if basis.len() != 2 {
        return Err(DubrovinError::UnexpectedDimension {
            got: basis.len(),
            expected: 2,
        });
    }
    let big = VarTable::uvwcd(2);
    let uvw = VarTable::uvw(2);
    let mut out = Vec::new();
    for sol in &basis {
        let mut quintic = WPoly::<C>::zero(big.clone());
        for (idx, ch) in constants.chars.iter().enumerate() {
            let alpha = sol[2 * idx];
            let beta = sol[2 * idx + 1];
            let mut ell = WPoly::<C>::zero(big.clone());
            let mut e1 = vec![0u32; big.len()];
            e1[0] = 1;
            ell.add_term(e1, alpha);
            let mut e2 = vec![0u32; big.len()];
            e2[1] = 1;
            ell.add_term(e2, beta);
            let f = dubrovin_quartic(ch, 2)?;
            quintic = quintic.add(&ell.mul(&f)?)?;
        }
        // the c and d parts must cancel; prune against the coefficient
        // scale and land in the uvw table
        let scale = quintic.max_coeff_magnitude();
        let cleaned = quintic.prune(1e-8 * scale);
        let mut small = WPoly::<C>::zero(uvw.clone());
        for (e, coef) in cleaned.terms() {
            if e[big.len() - 1] != 0 || e[big.len() - 2] != 0 {
                return Err(DubrovinError::UnexpectedDimension {
                    got: basis.len(),
                    expected: 2,
                });
            }
            small.add_term(e[..uvw.len()].to_vec(), *coef);
        }
        out.push(normalize_form(&small));
    }
    Ok(out)
}
