//! Exact rational kernels and linear solves by fraction-free elimination.
//!
//! Entries are cleared to integers per row and rows are content-stripped
//! after every elimination step, which keeps growth in check without
//! sacrificing exactness. Pivoting is deterministic (first nonzero in
//! column order), so echelon forms and kernel bases are reproducible.

use crate::exactalg::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense rational matrix given by rows.
#[derive(Debug, Clone)]
pub struct RatMatrix {
    pub rows: Vec<Vec<Rational>>,
    pub ncols: usize,
}

impl RatMatrix {
    pub fn new(rows: Vec<Vec<Rational>>, ncols: usize) -> Self {
        for r in &rows {
            assert_eq!(r.len(), ncols);
        }
        RatMatrix { rows, ncols }
    }

    pub fn entries(&self) -> usize {
        self.rows.len() * self.ncols
    }
}

fn clear_row(row: &[Rational]) -> Vec<BigInt> {
    let mut l: BigInt = BigInt::one();
    for c in row {
        let d = c.denom();
        let g = l.gcd(d);
        l = &l / &g * d;
    }
    let mut out: Vec<BigInt> = row.iter().map(|c| c.numer() * (&l / c.denom())).collect();
    strip_content(&mut out);
    out
}

fn strip_content(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for v in row.iter() {
        if !v.is_zero() {
            g = g.gcd(v);
        }
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for v in row.iter_mut() {
        *v = &*v / &g;
    }
}

/// Echelon data from forward elimination.
struct Echelon {
    rows: Vec<Vec<BigInt>>, // nonzero rows, staircase shape
    pivots: Vec<usize>,     // pivot column per row, strictly increasing
    ncols: usize,
}

fn forward_eliminate(m: &RatMatrix) -> Echelon {
    let ncols = m.ncols;
    let mut rows: Vec<Vec<BigInt>> = m
        .rows
        .iter()
        .map(|r| clear_row(r))
        .filter(|r| r.iter().any(|v| !v.is_zero()))
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        // first row at or below `rank` with a nonzero entry in `col`
        let Some(sel) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, sel);
        let (piv_rows, rest) = rows.split_at_mut(rank + 1);
        let piv_row = &piv_rows[rank];
        let piv = piv_row[col].clone();
        for r in rest.iter_mut() {
            if r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for j in 0..ncols {
                r[j] = &r[j] * &piv - &factor * &piv_row[j];
            }
            strip_content(r);
        }
        rows.retain(|r| r.iter().any(|v| !v.is_zero()));
        pivots.push(col);
        rank += 1;
        if rank >= rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    Echelon {
        rows,
        pivots,
        ncols,
    }
}

fn back_substitute(ech: &Echelon, free_col: usize) -> Vec<Rational> {
    let n = ech.ncols;
    let mut v = vec![<Rational as num_traits::Zero>::zero(); n];
    v[free_col] = Rational::one();
    for (r, &p) in ech.pivots.iter().enumerate().rev() {
        let mut s = <Rational as num_traits::Zero>::zero();
        for j in (p + 1)..n {
            if !v[j].is_zero() && !ech.rows[r][j].is_zero() {
                s += Rational::from(ech.rows[r][j].clone()) * &v[j];
            }
        }
        v[p] = -s / Rational::from(ech.rows[r][p].clone());
    }
    v
}

/// Reduced-echelon basis of the null space `{v : M v = 0}`: one vector per
/// free column, with a 1 at that column and 0 at every other free column.
pub fn kernel_basis(m: &RatMatrix) -> Vec<Vec<Rational>> {
    let ech = forward_eliminate(m);
    let pivset: std::collections::BTreeSet<usize> = ech.pivots.iter().cloned().collect();
    (0..m.ncols)
        .filter(|c| !pivset.contains(c))
        .map(|fc| back_substitute(&ech, fc))
        .collect()
}

/// Rank of the matrix.
pub fn rank(m: &RatMatrix) -> usize {
    forward_eliminate(m).pivots.len()
}

/// A particular exact solution of `A x = b`, or `None` when inconsistent
/// (free variables are set to zero).
pub fn solve_linear(a: &RatMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(a.rows.len(), b.len());
    let n = a.ncols;
    let mut rows = Vec::with_capacity(a.rows.len());
    for (r, bi) in a.rows.iter().zip(b.iter()) {
        let mut row = r.clone();
        row.push(-bi.clone());
        rows.push(row);
    }
    let aug = RatMatrix::new(rows, n + 1);
    let ech = forward_eliminate(&aug);
    if ech.pivots.contains(&n) {
        return None; // pivot in the augmented column: inconsistent
    }
    let mut v = back_substitute(&ech, n);
    v.truncate(n);
    Some(v)
}

/// Pivot-column prescreen modulo a 62-bit prime. Used to shrink large exact
/// solves: we solve exactly on the mod-p pivot columns only and verify the
/// result afterwards, falling back to the full exact path on any mismatch.
pub fn pivot_columns_mod_p(a: &RatMatrix, b: &[Rational]) -> Option<Vec<usize>> {
    const P: u64 = 4611686018427387847; // prime below 2^62
    let to_mod = |q: &Rational| -> Option<u64> {
        let num = mod_big(q.numer(), P);
        let den = mod_big(q.denom(), P);
        if den == 0 {
            return None;
        }
        Some(mul_mod(num, inv_mod(den, P)?, P))
    };
    let n = a.ncols;
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(a.rows.len());
    for (r, bi) in a.rows.iter().zip(b.iter()) {
        let mut row = Vec::with_capacity(n + 1);
        for q in r {
            row.push(to_mod(q)?);
        }
        row.push(to_mod(bi)?);
        rows.push(row);
    }
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for col in 0..=n {
        let Some(sel) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, sel);
        let inv = inv_mod(rows[rank][col], P)?;
        for j in 0..=n {
            rows[rank][j] = mul_mod(rows[rank][j], inv, P);
        }
        for i in 0..rows.len() {
            if i == rank || rows[i][col] == 0 {
                continue;
            }
            let f = rows[i][col];
            for j in 0..=n {
                let s = mul_mod(f, rows[rank][j], P);
                rows[i][j] = sub_mod(rows[i][j], s, P);
            }
        }
        pivots.push(col);
        rank += 1;
        if rank >= rows.len() {
            break;
        }
    }
    Some(pivots)
}

/// Fixed 62-bit primes for the modular solve path.
const PRIMES: [u64; 6] = [
    4611686018427387847,
    4611686018427387781,
    4611686018427387631,
    4611686018427387617,
    4611686018427387559,
    4611686018427387547,
];

/// Outcome of the modular-CRT linear solve.
pub enum ModSolve {
    /// Candidate solution, already verified exactly against the given
    /// system (`A x = b` holds in rational arithmetic).
    Solution(Vec<Rational>),
    /// The system was inconsistent modulo at least two distinct primes.
    /// Probabilistically conclusive; callers needing a certificate should
    /// fall back to the fraction-free path.
    Inconsistent,
    /// Reconstruction failed within the prime budget.
    Failed,
}

/// Solve `A x = b` by Gaussian elimination modulo several 62-bit primes,
/// Chinese remaindering, and rational reconstruction. A returned
/// `Solution` is verified exactly; free variables are set to zero.
pub fn solve_linear_modular(a: &RatMatrix, b: &[Rational]) -> ModSolve {
    let n = a.ncols;
    let mut residues: Vec<Vec<u64>> = Vec::new(); // per prime, solution vec
    let mut used_primes: Vec<u64> = Vec::new();
    let mut pivot_ref: Option<Vec<usize>> = None;
    let mut inconsistent_count = 0usize;
    for &p in PRIMES.iter() {
        let Some((pivots, sol)) = gauss_mod_p(a, b, p) else {
            continue; // denominator hit this prime, skip
        };
        let Some(sol) = sol else {
            inconsistent_count += 1;
            if inconsistent_count >= 2 {
                return ModSolve::Inconsistent;
            }
            continue;
        };
        match &pivot_ref {
            None => pivot_ref = Some(pivots),
            Some(r) if *r != pivots => continue, // unlucky prime, drop
            _ => {}
        }
        residues.push(sol);
        used_primes.push(p);
        if residues.len() < 2 {
            continue;
        }
        // CRT combine and attempt reconstruction
        let mut modulus = BigInt::one();
        for &q in &used_primes {
            modulus *= BigInt::from(q);
        }
        let mut ok = true;
        let mut x = Vec::with_capacity(n);
        for j in 0..n {
            let mut acc = BigInt::zero();
            let mut m_acc = BigInt::one();
            for (ri, &q) in residues.iter().zip(&used_primes) {
                // incremental CRT
                let qb = BigInt::from(q);
                let r = BigInt::from(ri[j]);
                if m_acc.is_one() {
                    acc = r;
                    m_acc = qb;
                } else {
                    // acc' = acc + m_acc * t, t = (r - acc) / m_acc mod q
                    let diff = (&r - &acc).mod_floor(&qb);
                    let m_inv = mod_inverse_big(&m_acc, &qb);
                    let t = (diff * m_inv).mod_floor(&qb);
                    acc += &m_acc * t;
                    m_acc *= qb;
                }
            }
            match rational_reconstruct(&acc, &modulus) {
                Some(q) => x.push(q),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        // exact verification against the full rational system
        if verify_solution(a, b, &x) {
            return ModSolve::Solution(x);
        }
    }
    ModSolve::Failed
}

fn verify_solution(a: &RatMatrix, b: &[Rational], x: &[Rational]) -> bool {
    for (row, want) in a.rows.iter().zip(b.iter()) {
        let mut s = <Rational as num_traits::Zero>::zero();
        for (c, xv) in row.iter().zip(x.iter()) {
            if !c.is_zero() && !xv.is_zero() {
                s += c * xv;
            }
        }
        if &s != want {
            return false;
        }
    }
    true
}

fn mod_inverse_big(a: &BigInt, p: &BigInt) -> BigInt {
    // p prime, a not divisible by p
    let a = a.mod_floor(p);
    let (mut t, mut new_t) = (BigInt::zero(), BigInt::one());
    let (mut r, mut new_r) = (p.clone(), a);
    while !new_r.is_zero() {
        let q = &r / &new_r;
        let tmp_t = &t - &q * &new_t;
        t = std::mem::replace(&mut new_t, tmp_t);
        let tmp_r = &r - &q * &new_r;
        r = std::mem::replace(&mut new_r, tmp_r);
    }
    t.mod_floor(p)
}

/// Wang rational reconstruction: find p/q with |p|, |q| <= sqrt(m/2) and
/// p = q r (mod m).
fn rational_reconstruct(r: &BigInt, m: &BigInt) -> Option<Rational> {
    let threshold = (m / BigInt::from(2)).sqrt();
    let mut r0 = m.clone();
    let mut r1 = r.mod_floor(m);
    let mut t0 = BigInt::zero();
    let mut t1 = BigInt::one();
    while r1 > threshold {
        let q = &r0 / &r1;
        let tmp_r = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, tmp_r);
        let tmp_t = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, tmp_t);
    }
    if t1.is_zero() {
        return None;
    }
    if t1.magnitude() > threshold.magnitude() {
        return None;
    }
    let (num, den) = if t1.is_negative() {
        (-r1, -t1)
    } else {
        (r1, t1)
    };
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Gauss-Jordan modulo `p`. Returns the pivot columns and either a
/// particular solution (free variables zero) or `None` when inconsistent.
/// Outer `None` means a denominator vanished mod p.
#[allow(clippy::type_complexity)]
fn gauss_mod_p(a: &RatMatrix, b: &[Rational], p: u64) -> Option<(Vec<usize>, Option<Vec<u64>>)> {
    let n = a.ncols;
    let to_mod = |q: &Rational| -> Option<u64> {
        let num = mod_big(q.numer(), p);
        let den = mod_big(q.denom(), p);
        if den == 0 {
            return None;
        }
        Some(mul_mod(num, inv_mod(den, p)?, p))
    };
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(a.rows.len());
    for (r, bi) in a.rows.iter().zip(b.iter()) {
        let mut row = Vec::with_capacity(n + 1);
        for q in r {
            row.push(to_mod(q)?);
        }
        row.push(to_mod(bi)?);
        rows.push(row);
    }
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for col in 0..n {
        let Some(sel) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, sel);
        let inv = inv_mod(rows[rank][col], p)?;
        for j in col..=n {
            rows[rank][j] = mul_mod(rows[rank][j], inv, p);
        }
        for i in 0..rows.len() {
            if i == rank || rows[i][col] == 0 {
                continue;
            }
            let f = rows[i][col];
            for j in col..=n {
                let s = mul_mod(f, rows[rank][j], p);
                rows[i][j] = sub_mod(rows[i][j], s, p);
            }
        }
        pivots.push(col);
        rank += 1;
        if rank >= rows.len() {
            break;
        }
    }
    // inconsistency: any remaining row with zero coefficients but nonzero rhs
    for row in rows.iter().skip(rank) {
        if row[..n].iter().all(|&v| v == 0) && row[n] != 0 {
            return Some((pivots, None));
        }
    }
    let mut sol = vec![0u64; n];
    for (r, &pc) in pivots.iter().enumerate() {
        // after Jordan elimination the pivot rows read x_pc + sum_free = rhs;
        // with free vars zero the solution is just the rhs entry
        sol[pc] = rows[r][n];
    }
    Some((pivots, Some(sol)))
}

fn mod_big(v: &BigInt, p: u64) -> u64 {
    let m = v.mod_floor(&BigInt::from(p));
    let (_, digits) = m.to_u64_digits();
    if m.is_negative() {
        // mod_floor returns non-negative remainder for positive modulus
        unreachable!()
    }
    digits.first().copied().unwrap_or(0)
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a == 0 {
        return None;
    }
    // extended euclid
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(((t % p as i128 + p as i128) % p as i128) as u64)
}
