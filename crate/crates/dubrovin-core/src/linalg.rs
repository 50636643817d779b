//! Dense complex linear algebra for the small systems that occur here
//! (dimension <= 2^g with g <= 4). Deterministic by construction.

use crate::error::DubrovinError;
use crate::Result;
use num_complex::Complex64 as C;

/// Row-major m x n matrix wrapper for readability.
#[derive(Debug, Clone)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<C>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            a: vec![C::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<C>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut a = Vec::with_capacity(r * c);
        for row in &rows {
            assert_eq!(row.len(), c);
            a.extend_from_slice(row);
        }
        Mat { rows: r, cols: c, a }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> C {
        self.a[i * self.cols + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut C {
        &mut self.a[i * self.cols + j]
    }

    pub fn matvec(&self, x: &[C]) -> Vec<C> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.at(i, j) * x[j])
                    .sum::<C>()
            })
            .collect()
    }

    pub fn hermitian_transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.at_mut(j, i) = self.at(i, j).conj();
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let s = self.at(i, k);
                if s.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    *out.at_mut(i, j) += s * rhs.at(k, j);
                }
            }
        }
        out
    }

    pub fn inf_norm(&self) -> f64 {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// Inverse by Gauss-Jordan with partial pivoting. Errors out when the
/// infinity-norm condition estimate exceeds `cond_cap`.
pub fn invert(m: &Mat, cond_cap: f64) -> Result<Mat> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut a = m.clone();
    let mut inv = Mat::zeros(n, n);
    for i in 0..n {
        *inv.at_mut(i, i) = C::new(1.0, 0.0);
    }
    for col in 0..n {
        let mut piv = col;
        let mut best = a.at(col, col).norm();
        for r in (col + 1)..n {
            let v = a.at(r, col).norm();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return Err(DubrovinError::IllConditioned(f64::INFINITY));
        }
        if piv != col {
            for j in 0..n {
                a.a.swap(col * n + j, piv * n + j);
                inv.a.swap(col * n + j, piv * n + j);
            }
        }
        let d = a.at(col, col);
        for j in 0..n {
            *a.at_mut(col, j) /= d;
            *inv.at_mut(col, j) /= d;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a.at(r, col);
            if f.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..n {
                let v = a.at(col, j);
                *a.at_mut(r, j) -= f * v;
                let w = inv.at(col, j);
                *inv.at_mut(r, j) -= f * w;
            }
        }
    }
    let cond = m.inf_norm() * inv.inf_norm();
    if !cond.is_finite() || cond > cond_cap {
        return Err(DubrovinError::IllConditioned(cond));
    }
    Ok(inv)
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Returns eigenvalues (ascending) with matching eigenvectors
/// (columns of the returned matrix), phases normalized so the largest
/// component of each vector is real positive.
pub fn hermitian_eigen(h: &Mat) -> (Vec<f64>, Mat) {
    assert_eq!(h.rows, h.cols);
    let n = h.rows;
    let mut a = h.clone();
    let mut v = Mat::zeros(n, n);
    for i in 0..n {
        *v.at_mut(i, i) = C::new(1.0, 0.0);
    }
    let scale = a.inf_norm().max(1e-300);
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a.at(p, q).norm_sqr();
            }
        }
        if off.sqrt() < 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = a.at(p, q);
                let mag = alpha.norm();
                if mag < 1e-300 {
                    continue;
                }
                let phase = alpha / mag; // e^{i phi}
                let hpp = a.at(p, p).re;
                let hqq = a.at(q, q).re;
                let tau = (hqq - hpp) / (2.0 * mag);
                // annihilation condition: t^2 - 2 tau t - 1 = 0, small root
                let t = if tau == 0.0 {
                    1.0
                } else {
                    -tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G[p][p]=c, G[p][q]=-s, G[q][p]=s*conj(phase), G[q][q]=c*conj(phase)
                let gqp = C::new(s, 0.0) * phase.conj();
                let gqq = C::new(c, 0.0) * phase.conj();
                // A <- A G (mix columns p, q)
                for i in 0..n {
                    let aip = a.at(i, p);
                    let aiq = a.at(i, q);
                    *a.at_mut(i, p) = aip * c + aiq * gqp;
                    *a.at_mut(i, q) = -aip * s + aiq * gqq;
                }
                // A <- G^H A (mix rows p, q)
                for j in 0..n {
                    let apj = a.at(p, j);
                    let aqj = a.at(q, j);
                    *a.at_mut(p, j) = apj * c + aqj * gqp.conj();
                    *a.at_mut(q, j) = -apj * s + aqj * gqq.conj();
                }
                // V <- V G
                for i in 0..n {
                    let vip = v.at(i, p);
                    let viq = v.at(i, q);
                    *v.at_mut(i, p) = vip * c + viq * gqp;
                    *v.at_mut(i, q) = -vip * s + viq * gqq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let eig: Vec<f64> = (0..n).map(|i| a.at(i, i).re).collect();
    order.sort_by(|&i, &j| eig[i].partial_cmp(&eig[j]).unwrap());
    let mut vals = Vec::with_capacity(n);
    let mut vecs = Mat::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vals.push(eig[i]);
        // phase-fix the column
        let mut big = 0usize;
        let mut bigmag = -1.0;
        for r in 0..n {
            let m = v.at(r, i).norm();
            if m > bigmag {
                bigmag = m;
                big = r;
            }
        }
        let ph = if bigmag > 0.0 {
            v.at(big, i) / C::new(bigmag, 0.0)
        } else {
            C::new(1.0, 0.0)
        };
        for r in 0..n {
            *vecs.at_mut(r, k) = v.at(r, i) / ph;
        }
    }
    (vals, vecs)
}

/// Singular values (descending) and an orthonormal basis of the numerical
/// null space of `a` (singular vectors with sigma <= rel_tol * sigma_max).
pub fn nullspace(a: &Mat, rel_tol: f64) -> (Vec<f64>, Vec<Vec<C>>) {
    let ata = a.hermitian_transpose().mul(a);
    let (vals, vecs) = hermitian_eigen(&ata);
    let n = ata.rows;
    let sigmas: Vec<f64> = vals.iter().map(|l| l.max(0.0).sqrt()).collect();
    let smax = sigmas.iter().cloned().fold(0.0, f64::max);
    let mut null = Vec::new();
    for k in 0..n {
        if sigmas[k] <= rel_tol * smax.max(1e-300) {
            null.push((0..n).map(|r| vecs.at(r, k)).collect());
        }
    }
    let mut desc = sigmas;
    desc.reverse();
    (desc, null)
}

/// Least squares for tall systems with very few unknowns, via the normal
/// equations (fine at these sizes and conditioning).
pub fn lstsq(a: &Mat, b: &[C]) -> Result<Vec<C>> {
    assert_eq!(a.rows, b.len());
    let ah = a.hermitian_transpose();
    let n = ah.mul(a);
    let rhs = ah.matvec(b);
    let inv = invert(&n, 1e14).map_err(|_| DubrovinError::RankDeficientFit)?;
    Ok(inv.matvec(&rhs))
}
