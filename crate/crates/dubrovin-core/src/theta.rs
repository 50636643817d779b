//! Numerical Riemann theta functions in the convention
//! `theta(z | B) = sum_{u in Z^g} exp( (1/2) u^T B u + u^T z )`,
//! where `B` is complex symmetric with negative-definite real part.
//!
//! Values, directional derivatives up to order 4, half-characteristics,
//! and the doubled-matrix theta constants used by the Hirota machinery.

use crate::error::DubrovinError;
use crate::util::{map_ordered, map_ordered_seq};
use crate::Result;
use num_complex::Complex64 as C;
use std::f64::consts::PI;

/// Complex symmetric `g x g` matrix with negative-definite real part.
#[derive(Debug, Clone)]
pub struct RiemannMatrix {
    g: usize,
    b: Vec<C>, // row-major
}

impl RiemannMatrix {
    pub fn new(g: usize, entries: Vec<C>) -> Result<Self> {
        if entries.len() != g * g {
            return Err(DubrovinError::BadRiemannMatrix(format!(
                "expected {} entries, got {}",
                g * g,
                entries.len()
            )));
        }
        let scale = entries.iter().map(|z| z.norm()).fold(1e-300, f64::max);
        for i in 0..g {
            for j in (i + 1)..g {
                let d = (entries[i * g + j] - entries[j * g + i]).norm();
                if d > 1e-12 * scale.max(1.0) {
                    return Err(DubrovinError::BadRiemannMatrix(format!(
                        "not symmetric at ({i},{j}): difference {d:.3e}"
                    )));
                }
            }
        }
        let neg_re: Vec<f64> = entries.iter().map(|z| -z.re).collect();
        if cholesky(g, &neg_re).is_none() {
            return Err(DubrovinError::BadRiemannMatrix(
                "real part is not negative definite".into(),
            ));
        }
        Ok(RiemannMatrix { g, b: entries })
    }

    /// Conversion from the algebraic-geometry convention: the two Riemann
    /// matrices differ by a factor `2 pi i`, so `B = 2 pi i * B_ag` with
    /// `Im B_ag` positive definite.
    pub fn from_ag(g: usize, entries_ag: Vec<C>) -> Result<Self> {
        if entries_ag.len() != g * g {
            return Err(DubrovinError::BadRiemannMatrix("wrong length".into()));
        }
        let im: Vec<f64> = entries_ag.iter().map(|z| z.im).collect();
        if cholesky(g, &im).is_none() {
            return Err(DubrovinError::BadRiemannMatrix(
                "imaginary part of the ag-convention matrix is not positive definite".into(),
            ));
        }
        let tpi = C::new(0.0, 2.0 * PI);
        RiemannMatrix::new(g, entries_ag.into_iter().map(|z| tpi * z).collect())
    }

    /// Back to the algebraic-geometry convention: `B_ag = B / (2 pi i)`.
    pub fn to_ag(&self) -> Vec<C> {
        let tpi = C::new(0.0, 2.0 * PI);
        self.b.iter().map(|z| z / tpi).collect()
    }

    pub fn doubled(&self) -> RiemannMatrix {
        RiemannMatrix {
            g: self.g,
            b: self.b.iter().map(|z| z * 2.0).collect(),
        }
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn at(&self, i: usize, j: usize) -> C {
        self.b[i * self.g + j]
    }

    pub fn entries(&self) -> &[C] {
        &self.b
    }

    /// `B e_k` as a vector (used by quasi-periodicity checks).
    pub fn column(&self, k: usize) -> Vec<C> {
        (0..self.g).map(|i| self.at(i, k)).collect()
    }
}

/// Cholesky factor (lower triangular, row-major) of a symmetric positive
/// definite matrix, or `None` if not positive definite.
fn cholesky(g: usize, a: &[f64]) -> Option<Vec<f64>> {
    let mut l = vec![0.0; g * g];
    for i in 0..g {
        for j in 0..=i {
            let mut s = a[i * g + j];
            for k in 0..j {
                s -= l[i * g + k] * l[j * g + k];
            }
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[i * g + i] = s.sqrt();
            } else {
                l[i * g + j] = s / l[j * g + j];
            }
        }
    }
    Some(l)
}

/// Solve `A x = rhs` for symmetric positive definite `A` given its
/// Cholesky factor.
fn chol_solve(g: usize, l: &[f64], rhs: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; g];
    for i in 0..g {
        let mut s = rhs[i];
        for k in 0..i {
            s -= l[i * g + k] * y[k];
        }
        y[i] = s / l[i * g + i];
    }
    let mut x = vec![0.0; g];
    for i in (0..g).rev() {
        let mut s = y[i];
        for k in (i + 1)..g {
            s -= l[k * g + i] * x[k];
        }
        x[i] = s / l[i * g + i];
    }
    x
}

/// A half-characteristic: a vector of bits. In all sums the bits enter
/// halved (shift by `eps/2`), which is the standard convention and the one
/// that reproduces both the plain theta function at `eps = 0` and the
/// classical addition formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfCharacteristic {
    bits: Vec<u8>,
}

impl HalfCharacteristic {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(DubrovinError::BadRiemannMatrix(
                "characteristic entries must be bits".into(),
            ));
        }
        Ok(HalfCharacteristic { bits })
    }

    pub fn zero(g: usize) -> Self {
        HalfCharacteristic { bits: vec![0; g] }
    }

    /// Little-endian: bit k of `index` is entry k.
    pub fn from_index(g: usize, index: usize) -> Self {
        HalfCharacteristic {
            bits: (0..g).map(|k| ((index >> k) & 1) as u8).collect(),
        }
    }

    pub fn index(&self) -> usize {
        self.bits
            .iter()
            .enumerate()
            .map(|(k, &b)| (b as usize) << k)
            .sum()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn half_shift(&self) -> Vec<f64> {
        self.bits.iter().map(|&b| b as f64 / 2.0).collect()
    }
}

/// Value and derivative tensors of a theta-like lattice sum at one point.
/// `tensors[k]` has `g^k` entries; entry `(i1..ik)` is the coefficient sum
/// `sum_m m_{i1} ... m_{ik} exp(...)`, i.e. the order-k z-derivative.
#[derive(Debug, Clone)]
pub struct ThetaMoments {
    pub g: usize,
    pub tensors: Vec<Vec<C>>,
}

impl ThetaMoments {
    pub fn value(&self) -> C {
        self.tensors[0][0]
    }

    pub fn gradient(&self) -> &[C] {
        &self.tensors[1]
    }

    pub fn hessian(&self) -> &[C] {
        &self.tensors[2]
    }

    /// Contract the order-k tensor with k direction vectors.
    pub fn contract(&self, dirs: &[&[C]]) -> C {
        let k = dirs.len();
        if k == 0 {
            return self.value();
        }
        let g = self.g;
        let t = &self.tensors[k];
        let mut total = C::new(0.0, 0.0);
        let mut idx = vec![0usize; k];
        loop {
            let mut flat = 0usize;
            let mut w = C::new(1.0, 0.0);
            for (a, &i) in idx.iter().enumerate() {
                flat = flat * g + i;
                w *= dirs[a][i];
            }
            total += t[flat] * w;
            // odometer
            let mut pos = k;
            loop {
                if pos == 0 {
                    return total;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < g {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }
}

/// Evaluation engine for a fixed Riemann matrix: Cholesky data of
/// `A = -Re B` plus the ellipsoid enumerator.
#[derive(Debug, Clone)]
pub struct ThetaEngine {
    b: RiemannMatrix,
    l: Vec<f64>, // cholesky of A = -Re B (lower)
    det_l: f64,
    linv_colnorm: Vec<f64>,
    lt_rownorm_max: f64,
}

const MAX_RADIUS: f64 = 45.0;

impl ThetaEngine {
    pub fn new(b: &RiemannMatrix) -> Result<Self> {
        let g = b.g();
        let neg_re: Vec<f64> = b.entries().iter().map(|z| -z.re).collect();
        let l = cholesky(g, &neg_re).ok_or_else(|| {
            DubrovinError::BadRiemannMatrix("real part is not negative definite".into())
        })?;
        let det_l: f64 = (0..g).map(|i| l[i * g + i]).product();
        // column norms of L^{-1}: solve L x = e_i forward
        let mut linv_colnorm = vec![0.0; g];
        for i in 0..g {
            let mut x = vec![0.0; g];
            for r in 0..g {
                let mut s = if r == i { 1.0 } else { 0.0 };
                for k in 0..r {
                    s -= l[r * g + k] * x[k];
                }
                x[r] = s / l[r * g + r];
            }
            linv_colnorm[i] = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        }
        let lt_rownorm_max = (0..g)
            .map(|i| {
                (0..g)
                    .map(|j| l[j * g + i])
                    .map(|v| v * v)
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        Ok(ThetaEngine {
            b: b.clone(),
            l,
            det_l,
            linv_colnorm,
            lt_rownorm_max,
        })
    }

    pub fn matrix(&self) -> &RiemannMatrix {
        &self.b
    }

    fn g(&self) -> usize {
        self.b.g()
    }

    /// `|| L^T v ||` for real `v`.
    fn ellip_norm(&self, v: &[f64]) -> f64 {
        let g = self.g();
        let mut s = 0.0;
        for i in 0..g {
            let mut t = 0.0;
            for j in i..g {
                t += self.l[j * g + i] * v[j];
            }
            s += t * t;
        }
        s.sqrt()
    }

    /// Gaussian peak data for `rho = Re z`: returns `c0 = A^{-1} rho`.
    fn peak_center(&self, z: &[C]) -> Vec<f64> {
        let rho: Vec<f64> = z.iter().map(|w| w.re).collect();
        chol_solve(self.g(), &self.l, &rho)
    }

    /// The Gaussian peak magnitude `exp((1/2) rho^T A^{-1} rho)` for
    /// `rho = Re z`: the natural scale of `|theta(z)|` away from the theta
    /// divisor.
    pub fn peak_magnitude(&self, z: &[C]) -> f64 {
        let rho: Vec<f64> = z.iter().map(|w| w.re).collect();
        let c0 = chol_solve(self.g(), &self.l, &rho);
        (0.5 * rho.iter().zip(&c0).map(|(a, b)| a * b).sum::<f64>()).exp()
    }

    /// Analytic tail bound (relative to the Gaussian peak) for radius `r`,
    /// including the polynomial growth of order-`n` derivative factors.
    fn tail_bound(&self, r: f64, n: usize, center_norm: f64) -> f64 {
        let g = self.g() as f64;
        let vg = PI.powf(g / 2.0) / gamma_half_int(self.g() + 2);
        let delta = 0.5 * g.sqrt() * self.lt_rownorm_max;
        let linv_max = self.linv_colnorm.iter().cloned().fold(0.0, f64::max);
        let mut acc = 0.0;
        let mut k = r;
        for _ in 0..400 {
            let shell = g * vg * (k + 1.0 + delta).powf(g - 1.0) / self.det_l.max(1e-300);
            let point_norm = linv_max * (k + 1.0) + center_norm;
            let poly = point_norm.max(1.0).powi(n as i32);
            let term = shell * poly * (-0.5 * k * k).exp();
            acc += term;
            if term < 1e-30 * acc.max(1e-300) {
                break;
            }
            k += 1.0;
        }
        acc
    }

    /// All integer points `u` whose shifted image `m = u + shift` satisfies
    /// `|| L^T (m - c0) || <= r`, sorted by (|u|^2, lex) so summation order
    /// is deterministic.
    fn lattice_points(&self, shift: &[f64], c0: &[f64], r: f64) -> Vec<Vec<i64>> {
        let g = self.g();
        let mut lo = vec![0i64; g];
        let mut hi = vec![0i64; g];
        for i in 0..g {
            let w = self.linv_colnorm[i] * r;
            lo[i] = (c0[i] - shift[i] - w).floor() as i64;
            hi[i] = (c0[i] - shift[i] + w).ceil() as i64;
        }
        let mut pts = Vec::new();
        let mut u = lo.clone();
        let mut v = vec![0.0; g];
        'outer: loop {
            for i in 0..g {
                v[i] = u[i] as f64 + shift[i] - c0[i];
            }
            if self.ellip_norm(&v) <= r {
                pts.push(u.clone());
            }
            let mut pos = g;
            loop {
                if pos == 0 {
                    break 'outer;
                }
                pos -= 1;
                u[pos] += 1;
                if u[pos] <= hi[pos] {
                    break;
                }
                u[pos] = lo[pos];
            }
        }
        pts.sort_by(|a, b| {
            let na: i64 = a.iter().map(|x| x * x).sum();
            let nb: i64 = b.iter().map(|x| x * x).sum();
            na.cmp(&nb).then_with(|| a.cmp(b))
        });
        pts
    }

    /// Lattice sum with derivative tensors up to `order` over the shifted
    /// lattice `u + shift` (characteristics pass `eps/2`). The truncation
    /// radius is grown until the analytic Gaussian tail bound falls below
    /// `tol` relative to the peak magnitude `exp((1/2) rho^T A^{-1} rho)`;
    /// at `z = 0` that scale is 1 and the bound is absolute.
    pub fn moments(&self, z: &[C], shift: &[f64], order: usize, tol: f64) -> Result<ThetaMoments> {
        if order > 4 {
            return Err(DubrovinError::DerivativeOrderTooHigh(order));
        }
        if !(tol > 0.0) {
            return Err(DubrovinError::TruncationFailure { tol, radius: 0.0 });
        }
        let g = self.g();
        assert_eq!(z.len(), g);
        assert_eq!(shift.len(), g);
        let c0 = self.peak_center(z);
        let center_norm = c0.iter().map(|v| v * v).sum::<f64>().sqrt()
            + shift.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut r = 2.0f64;
        loop {
            if self.tail_bound(r, order, center_norm) <= tol {
                break;
            }
            r += 0.5;
            if r > MAX_RADIUS {
                return Err(DubrovinError::TruncationFailure { tol, radius: r });
            }
        }
        let pts = self.lattice_points(shift, &c0, r);
        Ok(self.accumulate(z, shift, order, &pts))
    }

    fn accumulate(&self, z: &[C], shift: &[f64], order: usize, pts: &[Vec<i64>]) -> ThetaMoments {
        let g = self.g();
        let sizes: Vec<usize> = (0..=order).map(|k| g.pow(k as u32)).collect();
        let mut tensors: Vec<Vec<C>> =
            sizes.iter().map(|&s| vec![C::new(0.0, 0.0); s]).collect();
        let mut m = vec![0.0f64; g];
        for u in pts {
            for i in 0..g {
                m[i] = u[i] as f64 + shift[i];
            }
            let mut e = C::new(0.0, 0.0);
            for i in 0..g {
                let mut row = C::new(0.0, 0.0);
                for j in 0..g {
                    row += self.b.at(i, j) * m[j];
                }
                e += (row * 0.5 + z[i]) * m[i];
            }
            let w = e.exp();
            tensors[0][0] += w;
            if order >= 1 {
                for i in 0..g {
                    tensors[1][i] += w * m[i];
                }
            }
            if order >= 2 {
                for i in 0..g {
                    let wi = w * m[i];
                    for j in 0..g {
                        tensors[2][i * g + j] += wi * m[j];
                    }
                }
            }
            if order >= 3 {
                for i in 0..g {
                    for j in 0..g {
                        let wij = w * (m[i] * m[j]);
                        for k in 0..g {
                            tensors[3][(i * g + j) * g + k] += wij * m[k];
                        }
                    }
                }
            }
            if order >= 4 {
                for i in 0..g {
                    for j in 0..g {
                        let mij = m[i] * m[j];
                        for k in 0..g {
                            let wijk = w * (mij * m[k]);
                            for l in 0..g {
                                tensors[4][((i * g + j) * g + k) * g + l] += wijk * m[l];
                            }
                        }
                    }
                }
            }
        }
        ThetaMoments { g, tensors }
    }
}

/// `theta(z | B)` truncated so the omitted tail is below `tol` (relative to
/// the Gaussian peak scale; absolute at `z = 0`).
pub fn theta(z: &[C], b: &RiemannMatrix, tol: f64) -> Result<C> {
    let eng = ThetaEngine::new(b)?;
    Ok(eng.moments(z, &vec![0.0; b.g()], 0, tol)?.value())
}

/// Directional derivative with the given (direction, count) factors,
/// total order at most 4.
pub fn theta_dirderiv(
    orders: &[(Vec<C>, usize)],
    z: &[C],
    b: &RiemannMatrix,
    tol: f64,
) -> Result<C> {
    let total: usize = orders.iter().map(|(_, k)| k).sum();
    if total > 4 {
        return Err(DubrovinError::DerivativeOrderTooHigh(total));
    }
    let eng = ThetaEngine::new(b)?;
    let m = eng.moments(z, &vec![0.0; b.g()], total, tol)?;
    let mut dirs: Vec<&[C]> = Vec::with_capacity(total);
    for (d, k) in orders {
        for _ in 0..*k {
            dirs.push(d.as_slice());
        }
    }
    Ok(m.contract(&dirs))
}

/// Theta with half-characteristics:
/// `sum_u exp( (1/2)(u + eps/2)^T B (u + eps/2) + (z + pi i delta)^T (u + eps/2) )`.
/// With `eps = delta = 0` this is exactly [`theta`].
pub fn theta_char(
    eps: &HalfCharacteristic,
    delta: &HalfCharacteristic,
    z: &[C],
    b: &RiemannMatrix,
    tol: f64,
) -> Result<C> {
    let g = b.g();
    let eng = ThetaEngine::new(b)?;
    let zeff: Vec<C> = (0..g)
        .map(|i| z[i] + C::new(0.0, PI) * (delta.bits()[i] as f64))
        .collect();
    Ok(eng.moments(&zeff, &eps.half_shift(), 0, tol)?.value())
}

/// Theta constants of one half-characteristic with the doubled matrix:
/// value, Hessian, and the full fourth-derivative tensor at `z = 0`.
#[derive(Debug, Clone)]
pub struct CharConstants {
    pub eps: HalfCharacteristic,
    pub value: C,
    pub gradient: Vec<C>,
    pub hessian: Vec<C>, // g x g row-major
    pub third: Vec<C>,   // g^3
    pub fourth: Vec<C>,  // g^4
}

impl CharConstants {
    /// Bilinear form `x^T Q y` with the Hessian.
    pub fn q_form(&self, x: &[C], y: &[C]) -> C {
        let g = x.len();
        let mut s = C::new(0.0, 0.0);
        for i in 0..g {
            for j in 0..g {
                s += self.hessian[i * g + j] * x[i] * y[j];
            }
        }
        s
    }

    /// `d^4_X theta-hat[eps](0)` contracted with four copies of `x`.
    pub fn fourth_form(&self, x: &[C]) -> C {
        let g = x.len();
        let mut s = C::new(0.0, 0.0);
        for i in 0..g {
            for j in 0..g {
                for k in 0..g {
                    for l in 0..g {
                        s += self.fourth[((i * g + j) * g + k) * g + l] * x[i] * x[j] * x[k] * x[l];
                    }
                }
            }
        }
        s
    }
}

/// All `2^g` characteristics' constants for the doubled matrix `2B`,
/// in little-endian index order.
#[derive(Debug, Clone)]
pub struct ThetaConstants {
    pub g: usize,
    pub base: RiemannMatrix,
    pub doubled: RiemannMatrix,
    pub chars: Vec<CharConstants>,
}

/// Compute all doubled theta constants: `theta-hat[eps](0)`, Hessians, and
/// fourth-derivative tensors, for `eps` in little-endian order.
pub fn doubled_constants(b: &RiemannMatrix, tol: f64) -> Result<ThetaConstants> {
    let g = b.g();
    let b2 = b.doubled();
    let eng = ThetaEngine::new(&b2)?;
    let zero = vec![C::new(0.0, 0.0); g];
    let indices: Vec<usize> = (0..(1usize << g)).collect();
    let chars_res: Vec<Result<CharConstants>> = map_ordered(&indices, |&idx| {
        let eps = HalfCharacteristic::from_index(g, idx);
        let m = eng.moments(&zero, &eps.half_shift(), 4, tol)?;
        Ok(CharConstants {
            eps,
            value: m.tensors[0][0],
            gradient: m.tensors[1].clone(),
            hessian: m.tensors[2].clone(),
            third: m.tensors[3].clone(),
            fourth: m.tensors[4].clone(),
        })
    });
    let mut chars = Vec::with_capacity(chars_res.len());
    for c in chars_res {
        chars.push(c?);
    }
    Ok(ThetaConstants {
        g,
        base: b.clone(),
        doubled: b2,
        chars,
    })
}

/// Batch theta evaluation over many points, parallel when the `parallel`
/// feature is enabled. Deterministic output order either way.
pub fn theta_batch(zs: &[Vec<C>], b: &RiemannMatrix, tol: f64) -> Result<Vec<C>> {
    let eng = ThetaEngine::new(b)?;
    let shift = vec![0.0; b.g()];
    let vals: Vec<Result<C>> = map_ordered(zs, |z| Ok(eng.moments(z, &shift, 0, tol)?.value()));
    vals.into_iter().collect()
}

/// Sequential twin of [`theta_batch`], kept in all builds for the bench
/// suite.
pub fn theta_batch_seq(zs: &[Vec<C>], b: &RiemannMatrix, tol: f64) -> Result<Vec<C>> {
    let eng = ThetaEngine::new(b)?;
    let shift = vec![0.0; b.g()];
    let vals: Vec<Result<C>> =
        map_ordered_seq(zs, |z| Ok(eng.moments(z, &shift, 0, tol)?.value()));
    vals.into_iter().collect()
}

fn gamma_half_int(two_n: usize) -> f64 {
    // Gamma(two_n / 2), exact for integer and half-integer arguments
    if two_n % 2 == 0 {
        let n = two_n / 2;
        (1..n).map(|k| k as f64).product::<f64>().max(1.0)
    } else {
        let mut v = PI.sqrt();
        let mut x = 0.5;
        while (x - two_n as f64 / 2.0).abs() > 1e-9 {
            v *= x;
            x += 1.0;
        }
        v
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    /// Independent oracle: naive box summation, no ellipsoid logic.
    pub(crate) fn oracle(z: &[C], b: &RiemannMatrix, shift: &[f64], half_box: i64) -> C {
        let g = b.g();
        let mut total = c(0.0, 0.0);
        let mut u = vec![-half_box; g];
        loop {
            let m: Vec<f64> = (0..g).map(|i| u[i] as f64 + shift[i]).collect();
            let mut e = c(0.0, 0.0);
            for i in 0..g {
                for j in 0..g {
                    e += b.at(i, j) * (0.5 * m[i] * m[j]);
                }
                e += z[i] * m[i];
            }
            total += e.exp();
            let mut pos = g;
            loop {
                if pos == 0 {
                    return total;
                }
                pos -= 1;
                u[pos] += 1;
                if u[pos] <= half_box {
                    break;
                }
                u[pos] = -half_box;
            }
        }
    }

    fn b1() -> RiemannMatrix {
        RiemannMatrix::new(1, vec![c(-2.0 * PI, 0.0)]).unwrap()
    }

    /// B of the genus-2 example: (2 pi / sqrt 3) [[-2, 1], [1, -2]].
    pub(crate) fn b2_example() -> RiemannMatrix {
        let s = 2.0 * PI / 3.0f64.sqrt();
        RiemannMatrix::new(
            2,
            vec![c(-2.0 * s, 0.0), c(s, 0.0), c(s, 0.0), c(-2.0 * s, 0.0)],
        )
        .unwrap()
    }

    #[test]
    fn g1_spot_value_matches_oracle() {
        // sum exp(-pi n^2)
        let v = theta(&[c(0.0, 0.0)], &b1(), 1e-13).unwrap();
        let o = oracle(&[c(0.0, 0.0)], &b1(), &[0.0], 12);
        assert!((v - o).norm() < 1e-13, "{v} vs {o}");
        assert!((v.re - 1.08643481121).abs() < 1e-10);
    }

    #[test]
    fn evenness_and_lattice_periodicity() {
        let b = b2_example();
        let z = vec![c(0.3, -0.2), c(-0.1, 0.45)];
        let zneg: Vec<C> = z.iter().map(|w| -w).collect();
        let v1 = theta(&z, &b, 1e-12).unwrap();
        let v2 = theta(&zneg, &b, 1e-12).unwrap();
        assert!((v1 - v2).norm() < 1e-11);
        // theta(z + 2 pi i e_k) = theta(z)
        let mut zshift = z.clone();
        zshift[1] += c(0.0, 2.0 * PI);
        let v3 = theta(&zshift, &b, 1e-12).unwrap();
        assert!((v1 - v3).norm() < 1e-10);
    }

    #[test]
    fn quasi_periodicity() {
        // theta(z + B e_k) = exp(-B_kk/2 - z_k) theta(z)
        let b = b2_example();
        let z = vec![c(0.2, 0.1), c(-0.3, 0.25)];
        for k in 0..2 {
            let col = b.column(k);
            let zs: Vec<C> = z.iter().zip(&col).map(|(a, c)| a + c).collect();
            let lhs = theta(&zs, &b, 1e-12).unwrap();
            let factor = (-b.at(k, k) * 0.5 - z[k]).exp();
            let rhs = factor * theta(&z, &b, 1e-12).unwrap();
            let scale = lhs.norm().max(rhs.norm()).max(1.0);
            assert!((lhs - rhs).norm() / scale < 1e-10);
        }
    }

    #[test]
    fn char_half_shift_value() {
        // g=1, eps=1: sum exp(-pi (n + 1/2)^2)
        let eps = HalfCharacteristic::new(vec![1]).unwrap();
        let d0 = HalfCharacteristic::zero(1);
        let v = theta_char(&eps, &d0, &[c(0.0, 0.0)], &b1(), 1e-13).unwrap();
        let o = oracle(&[c(0.0, 0.0)], &b1(), &[0.5], 12);
        assert!((v - o).norm() < 1e-13);
        assert!((v.re - 0.91357913815).abs() < 1e-10);
        // eps = delta = 0 reduces to theta
        let z = vec![c(0.17, -0.4)];
        let v0 = theta_char(&HalfCharacteristic::zero(1), &d0, &z, &b1(), 1e-12).unwrap();
        assert!((v0 - theta(&z, &b1(), 1e-12).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn char_complete_square_identity() {
        // theta[eps](z) = exp((1/8) eps^T B eps + (1/2) eps^T z) theta(z + B eps/2)
        let b = b2_example();
        let eps = HalfCharacteristic::new(vec![1, 0]).unwrap();
        let d0 = HalfCharacteristic::zero(2);
        let z = vec![c(0.05, 0.3), c(-0.2, -0.1)];
        let lhs = theta_char(&eps, &d0, &z, &b, 1e-13).unwrap();
        let s: Vec<f64> = eps.half_shift();
        let mut quad = c(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                quad += b.at(i, j) * (0.5 * s[i] * s[j]);
            }
        }
        let mut lin = c(0.0, 0.0);
        let mut zshift = z.clone();
        for i in 0..2 {
            lin += z[i] * s[i];
            for j in 0..2 {
                zshift[i] += b.at(i, j) * s[j];
            }
        }
        let rhs = (quad + lin).exp() * theta(&zshift, &b, 1e-13).unwrap();
        assert!((lhs - rhs).norm() < 1e-11, "{lhs} vs {rhs}");
    }

    #[test]
    fn dirderiv_matches_finite_difference() {
        let b = b2_example();
        let z = vec![c(0.21, 0.13), c(-0.34, 0.08)];
        let dir = vec![c(0.7, -0.2), c(0.15, 0.4)];
        let d1 = theta_dirderiv(&[(dir.clone(), 1)], &z, &b, 1e-13).unwrap();
        let h = 1e-5;
        let zp: Vec<C> = z.iter().zip(&dir).map(|(a, d)| a + d * h).collect();
        let zm: Vec<C> = z.iter().zip(&dir).map(|(a, d)| a - d * h).collect();
        let fd = (theta(&zp, &b, 1e-13).unwrap() - theta(&zm, &b, 1e-13).unwrap()) / (2.0 * h);
        assert!((d1 - fd).norm() / d1.norm().max(1.0) < 1e-8);
        // second derivative via 5-point stencil (h^4 accuracy, mild rounding)
        let d2 = theta_dirderiv(&[(dir.clone(), 2)], &z, &b, 1e-13).unwrap();
        let h2 = 1e-3;
        let at = |s: f64| -> C {
            let zz: Vec<C> = z.iter().zip(&dir).map(|(a, d)| a + d * s).collect();
            theta(&zz, &b, 1e-13).unwrap()
        };
        let fd2 = (-at(2.0 * h2) + at(h2) * 16.0 - at(0.0) * 30.0 + at(-h2) * 16.0
            - at(-2.0 * h2))
            / (12.0 * h2 * h2);
        assert!((d2 - fd2).norm() / d2.norm().max(1.0) < 1e-7);
        // odd orders vanish at z = 0 by parity; zero direction gives zero
        let zero = vec![c(0.0, 0.0); 2];
        let d3 = theta_dirderiv(&[(dir.clone(), 3)], &zero, &b, 1e-13).unwrap();
        assert!(d3.norm() < 1e-12);
        let dz = theta_dirderiv(&[(vec![c(0.0, 0.0); 2], 1)], &z, &b, 1e-12).unwrap();
        assert!(dz.norm() == 0.0);
        assert!(theta_dirderiv(&[(dir, 5)], &z, &b, 1e-12).is_err());
    }

    #[test]
    fn doubled_constants_g1_and_g2() {
        // g=1: theta-hat[0](0) = sum exp(-2 pi n^2)
        let tc = doubled_constants(&b1(), 1e-13).unwrap();
        let o = oracle(&[c(0.0, 0.0)], &b1().doubled(), &[0.0], 10);
        assert!((tc.chars[0].value - o).norm() < 1e-13);
        // frozen from the oracle: 1 + 2 exp(-2 pi) + 2 exp(-8 pi) + ...
        assert!((tc.chars[0].value.re - 1.0037348854878).abs() < 1e-12);
        for ch in &tc.chars {
            for gr in &ch.gradient {
                assert!(gr.norm() < 1e-12, "gradient of even function must vanish");
            }
        }
        // g=2 example: the four values include 1.0042389593 and 0.33474631977
        let tc2 = doubled_constants(&b2_example(), 1e-12).unwrap();
        assert!((tc2.chars[0].value.re - 1.0042389593).abs() < 1e-9);
        for idx in 1..4 {
            assert!((tc2.chars[idx].value.re - 0.33474631977).abs() < 1e-8);
        }
        for ch in &tc2.chars {
            for i in 0..2 {
                for j in 0..2 {
                    assert!((ch.hessian[i * 2 + j] - ch.hessian[j * 2 + i]).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn convention_conversion_round_trip() {
        // B_ag = i I -> B = 2 pi i (i I) = -2 pi I
        let bi =
            RiemannMatrix::from_ag(2, vec![c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)])
                .unwrap();
        assert!((bi.at(0, 0) - c(-2.0 * PI, 0.0)).norm() < 1e-14);
        let back = bi.to_ag();
        assert!((back[0] - c(0.0, 1.0)).norm() < 1e-14);
        // indefinite input rejected
        assert!(RiemannMatrix::from_ag(1, vec![c(0.0, -1.0)]).is_err());
        // asymmetric rejected
        assert!(
            RiemannMatrix::new(2, vec![c(-1.0, 0.0), c(0.5, 0.0), c(-0.5, 0.0), c(-1.0, 0.0)])
                .is_err()
        );
    }

    #[test]
    fn truncation_honesty() {
        let b = b2_example();
        let z = vec![c(0.4, -0.6), c(-0.25, 0.3)];
        for tol in [1e-6, 1e-8, 1e-10] {
            let v1 = theta(&z, &b, tol).unwrap();
            let v2 = theta(&z, &b, tol / 2.0).unwrap();
            assert!((v1 - v2).norm() <= tol, "tol {tol}: {}", (v1 - v2).norm());
        }
    }

    #[test]
    fn batch_matches_seq() {
        let b = b2_example();
        let zs: Vec<Vec<C>> = (0..20)
            .map(|k| {
                vec![
                    c(0.05 * k as f64, -0.03 * k as f64),
                    c(-0.02 * k as f64, 0.04),
                ]
            })
            .collect();
        let a = theta_batch(&zs, &b, 1e-12).unwrap();
        let s = theta_batch_seq(&zs, &b, 1e-12).unwrap();
        assert_eq!(a.len(), s.len());
        for (x, y) in a.iter().zip(&s) {
            assert_eq!(x, y, "parallel and sequential must agree bitwise");
        }
    }
}
