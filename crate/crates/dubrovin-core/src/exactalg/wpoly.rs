//! Sparse multivariate polynomials with a weighted grading.

use super::coeff::Coeff;
use super::vartable::VarTable;
use crate::error::DubrovinError;
use crate::Result;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Exponent vector, densely indexed by the polynomial's [`VarTable`].
pub type Expo = Vec<u32>;

/// A sparse polynomial over the coefficient domain `D`.
///
/// Invariants: no zero coefficients are stored, and every exponent vector has
/// exactly `vars.len()` entries.
#[derive(Debug, Clone, PartialEq)]
pub struct WPoly<D: Coeff> {
    vars: Arc<VarTable>,
    terms: BTreeMap<Expo, D>,
}

impl<D: Coeff> WPoly<D> {
    pub fn zero(vars: Arc<VarTable>) -> Self {
        WPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Arc<VarTable>, c: D) -> Self {
        let mut p = WPoly::zero(vars);
        if !c.is_zero() {
            let e = vec![0u32; p.vars.len()];
            p.terms.insert(e, c);
        }
        p
    }

    pub fn one(vars: Arc<VarTable>) -> Self {
        Self::constant(vars, D::one())
    }

    /// The variable `x_idx` as a polynomial.
    pub fn var(vars: Arc<VarTable>, idx: usize) -> Self {
        let mut e = vec![0u32; vars.len()];
        e[idx] = 1;
        Self::monomial(vars, e, D::one())
    }

    pub fn monomial(vars: Arc<VarTable>, expo: Expo, c: D) -> Self {
        assert_eq!(expo.len(), vars.len(), "exponent arity");
        let mut p = WPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(expo, c);
        }
        p
    }

    /// Build from a list of `(exponents, coefficient)` pairs, summing repeats.
    pub fn from_terms(vars: Arc<VarTable>, terms: Vec<(Expo, D)>) -> Self {
        let mut p = WPoly::zero(vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &D)> {
        self.terms.iter()
    }

    pub fn coeff(&self, expo: &[u32]) -> D {
        self.terms.get(expo).cloned().unwrap_or_else(D::zero)
    }

    pub fn add_term(&mut self, expo: Expo, c: D) {
        assert_eq!(expo.len(), self.vars.len(), "exponent arity");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(expo) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add_ref(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_same_table(&self, rhs: &Self) -> Result<()> {
        if self.vars != rhs.vars {
            return Err(DubrovinError::VarTableMismatch(format!(
                "{:?} vs {:?}",
                self.vars.names(),
                rhs.vars.names()
            )));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_same_table(rhs)?;
        let mut out = self.clone();
        for (e, c) in rhs.terms.iter() {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_same_table(rhs)?;
        let mut out = self.clone();
        for (e, c) in rhs.terms.iter() {
            out.add_term(e.clone(), c.neg_ref());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = WPoly::zero(self.vars.clone());
        for (e, c) in self.terms.iter() {
            out.terms.insert(e.clone(), c.neg_ref());
        }
        out
    }

    pub fn scale(&self, c: &D) -> Self {
        if c.is_zero() {
            return WPoly::zero(self.vars.clone());
        }
        let mut out = WPoly::zero(self.vars.clone());
        for (e, k) in self.terms.iter() {
            let p = k.mul_ref(c);
            if !p.is_zero() {
                out.terms.insert(e.clone(), p);
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_same_table(rhs)?;
        let mut out = WPoly::zero(self.vars.clone());
        for (ea, ca) in self.terms.iter() {
            for (eb, cb) in rhs.terms.iter() {
                let mut e = ea.clone();
                for (k, &b) in e.iter_mut().zip(eb.iter()) {
                    *k += b;
                }
                out.add_term(e, ca.mul_ref(cb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut out = WPoly::one(self.vars.clone());
        for _ in 0..n {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Multiply by a single monomial, in place semantics avoided for clarity.
    pub fn mul_monomial(&self, expo: &[u32], c: &D) -> Self {
        let mut out = WPoly::zero(self.vars.clone());
        if c.is_zero() {
            return out;
        }
        for (e, k) in self.terms.iter() {
            let mut ne = e.clone();
            for (a, &b) in ne.iter_mut().zip(expo.iter()) {
                *a += b;
            }
            out.terms.insert(ne, k.mul_ref(c));
        }
        out
    }

    /// Weighted degree of a single exponent vector.
    pub fn term_weight(expo: &[u32], weights: &[i64]) -> i64 {
        expo.iter()
            .zip(weights.iter())
            .map(|(&e, &w)| e as i64 * w)
            .sum()
    }

    /// Common weighted degree of all terms, or an error when the polynomial
    /// is zero or inhomogeneous.
    pub fn weighted_degree(&self, weights: &[i64]) -> Result<i64> {
        let mut it = self.terms.keys();
        let first = it
            .next()
            .ok_or(DubrovinError::ZeroPolynomial("weighted degree"))?;
        let d = Self::term_weight(first, weights);
        for e in it {
            if Self::term_weight(e, weights) != d {
                return Err(DubrovinError::Inhomogeneous);
            }
        }
        Ok(d)
    }

    /// Maximum weighted degree over terms (zero polynomial -> error).
    pub fn max_weight(&self, weights: &[i64]) -> Result<i64> {
        self.terms
            .keys()
            .map(|e| Self::term_weight(e, weights))
            .max()
            .ok_or(DubrovinError::ZeroPolynomial("maximal weight"))
    }

    /// Sum of the terms of maximal weight under `weights`.
    pub fn initial_form(&self, weights: &[i64]) -> Result<Self> {
        let top = self.max_weight(weights)?;
        let mut out = WPoly::zero(self.vars.clone());
        for (e, c) in self.terms.iter() {
            if Self::term_weight(e, weights) == top {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// Formal partial derivative with respect to the named variable.
    pub fn partial_derivative(&self, var: &str) -> Result<Self> {
        let idx = self.vars.index_of(var)?;
        Ok(self.partial_derivative_idx(idx))
    }

    pub fn partial_derivative_idx(&self, idx: usize) -> Self {
        let mut out = WPoly::zero(self.vars.clone());
        for (e, c) in self.terms.iter() {
            let k = e[idx];
            if k == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[idx] = k - 1;
            out.add_term(ne, c.mul_ref(&D::from_i64(k as i64)));
        }
        out
    }

    /// Degree in one variable.
    pub fn degree_in(&self, idx: usize) -> u32 {
        self.terms.keys().map(|e| e[idx]).max().unwrap_or(0)
    }

    /// Substitute each variable by the given image polynomial (all images
    /// over one common table). Powers of the images are cached per variable.
    pub fn compose(&self, images: &[WPoly<D>]) -> Result<WPoly<D>> {
        assert_eq!(images.len(), self.vars.len(), "one image per variable");
        let target = images
            .first()
            .map(|p| p.vars.clone())
            .ok_or_else(|| DubrovinError::VarTableMismatch("no images".into()))?;
        for im in images {
            if im.vars != target {
                return Err(DubrovinError::VarTableMismatch(
                    "images over different tables".into(),
                ));
            }
        }
        // power cache: powers[i][k] = images[i]^k
        let mut powers: Vec<Vec<WPoly<D>>> =
            images.iter().map(|im| vec![WPoly::one(target.clone()), im.clone()]).collect();
        let mut out = WPoly::zero(target.clone());
        for (e, c) in self.terms.iter() {
            let mut term = WPoly::constant(target.clone(), c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&images[i])?;
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][k as usize])?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Evaluate at a point of `D^n`.
    pub fn eval(&self, vals: &[D]) -> D {
        assert_eq!(vals.len(), self.vars.len());
        let mut acc = D::zero();
        for (e, c) in self.terms.iter() {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = t.mul_ref(&vals[i]);
                }
            }
            acc = acc.add_ref(&t);
        }
        acc
    }

    /// Re-express over a larger table. `positions[i]` is the index in
    /// `target` of the i-th variable of `self`.
    pub fn embed(&self, target: Arc<VarTable>, positions: &[usize]) -> Self {
        assert_eq!(positions.len(), self.vars.len());
        let mut out = WPoly::zero(target.clone());
        for (e, c) in self.terms.iter() {
            let mut ne = vec![0u32; target.len()];
            for (i, &k) in e.iter().enumerate() {
                ne[positions[i]] += k;
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    pub fn map_coeffs<E: Coeff, F: Fn(&D) -> E>(&self, f: F) -> WPoly<E> {
        let mut out = WPoly::zero(self.vars.clone());
        for (e, c) in self.terms.iter() {
            let nc = f(c);
            if !nc.is_zero() {
                out.terms.insert(e.clone(), nc);
            }
        }
        out
    }

    /// Drop terms whose coefficient magnitude is below `tol` (used with the
    /// complex instantiation; tolerances are always call-site choices).
    pub fn prune(&self, tol: f64) -> Self {
        let mut out = WPoly::zero(self.vars.clone());
        for (e, c) in self.terms.iter() {
            if c.magnitude() > tol {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    pub fn max_coeff_magnitude(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.magnitude())
            .fold(0.0, f64::max)
    }

    /// Terms in the canonical serialization order: descending weighted degree
    /// (table weights), then descending lexicographic exponent.
    pub fn sorted_terms(&self) -> Vec<(&Expo, &D)> {
        let w = self.vars.weights();
        let mut v: Vec<(&Expo, &D)> = self.terms.iter().collect();
        v.sort_by(|a, b| {
            let wa = Self::term_weight(a.0, w);
            let wb = Self::term_weight(b.0, w);
            wb.cmp(&wa).then_with(|| b.0.cmp(a.0))
        });
        v
    }
}

impl WPoly<Complex64> {
    /// Max-norm distance between coefficient lists (missing terms count as 0).
    pub fn coeff_distance(&self, rhs: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for (e, c) in self.terms.iter() {
            d = d.max((c - rhs.coeff(e)).norm());
        }
        for (e, c) in rhs.terms.iter() {
            if !self.terms.contains_key(e) {
                d = d.max(c.norm());
            }
        }
        d
    }
}

/// Coefficient of `x^a y^b t^c` in `f(xU + yV + tW)`, for `f` homogeneous in
/// the `u`-block over the table `u_1..u_g`. The result lives in the `uvw`
/// table and has weighted degree `a + 2b + 3c`.
pub fn polarize<D: Coeff>(f: &WPoly<D>, a: u32, b: u32, c: u32) -> Result<WPoly<D>> {
    let g = f.vars().len();
    let deg = f.weighted_degree(&vec![1; g])?;
    if (a + b + c) as i64 != deg {
        return Err(DubrovinError::BadExponentSplit(format!(
            "a+b+c = {} but deg f = {deg}",
            a + b + c
        )));
    }
    let target = VarTable::uvw(g);
    let mut out = WPoly::zero(target.clone());
    for (e, coef) in f.terms() {
        // distribute each u_i^{e_i} into u,v,w parts with multinomials
        let mut splits: Vec<(Expo, D)> = vec![(vec![0u32; 3 * g], coef.clone())];
        for (i, &ei) in e.iter().enumerate() {
            if ei == 0 {
                continue;
            }
            let mut next: Vec<(Expo, D)> = Vec::new();
            for (base, k) in splits.iter() {
                for ai in 0..=ei {
                    for bi in 0..=(ei - ai) {
                        let ci = ei - ai - bi;
                        let m = multinomial3(ei, ai, bi, ci);
                        let mut ne = base.clone();
                        ne[i] += ai;
                        ne[g + i] += bi;
                        ne[2 * g + i] += ci;
                        next.push((ne, k.mul_ref(&D::from_i64(m))));
                    }
                }
            }
            splits = next;
        }
        for (ne, k) in splits {
            // keep only the splits matching the requested (a, b, c) totals
            let ta: u32 = ne[..g].iter().sum();
            let tb: u32 = ne[g..2 * g].iter().sum();
            if ta == a && tb == b {
                out.add_term(ne, k);
            }
        }
    }
    Ok(out)
}

/// n! / (a! b! c!), exact in i64 for the small degrees that occur here.
fn multinomial3(n: u32, a: u32, b: u32, c: u32) -> i64 {
    debug_assert_eq!(a + b + c, n);
    let fact = |m: u32| -> i64 { (1..=m as i64).product::<i64>().max(1) };
    fact(n) / (fact(a) * fact(b) * fact(c))
}

impl<D: Coeff> fmt::Display for WPoly<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = self.vars.names();
        let mut first = true;
        for (e, c) in self.sorted_terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*{}", names[i])?,
                    _ => write!(f, "*{}^{}", names[i], k)?,
                }
            }
        }
        Ok(())
    }
}
