//! Coefficient domains for sparse polynomials.
//!
//! Two instantiations are used throughout: exact arbitrary-precision
//! rationals for the symbolic side, and complex doubles for the theta side.
//! Complex comparisons always take a tolerance at the call site.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt::{Debug, Display};

/// Exact rational scalar. `BigRational` keeps values in lowest terms with a
/// positive denominator, which is exactly the invariant we need.
pub type Rational = BigRational;

/// Build a rational from a small numerator/denominator pair.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Build an integer rational.
pub fn rat_int(num: i64) -> Rational {
    BigRational::from_integer(BigInt::from(num))
}

/// What a polynomial coefficient must support. Both instantiations are
/// fields, so exact division is part of the contract.
pub trait Coeff: Clone + PartialEq + Debug + Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn div_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn from_i64(v: i64) -> Self;
    /// Magnitude, used only for tolerance pruning of complex polynomials.
    fn magnitude(&self) -> f64;
}

impl Coeff for Rational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div_ref(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn magnitude(&self) -> f64 {
        rational_to_f64(self).abs()
    }
}

impl Coeff for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div_ref(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Lossy conversion for diagnostics and for feeding exact data to the
/// numeric layer.
pub fn rational_to_f64(r: &Rational) -> f64 {
    // BigRational has no direct to_f64 for huge values; go through a scaled
    // division that stays finite for anything we produce.
    let num = r.numer();
    let den = r.denom();
    match (num.to_string().parse::<f64>(), den.to_string().parse::<f64>()) {
        (Ok(n), Ok(d)) if d != 0.0 && n.is_finite() && d.is_finite() => n / d,
        _ => {
            // fall back to a digit-limited approximation
            let s_num = num.to_string();
            let s_den = den.to_string();
            let cut = |s: &str| -> (f64, i32) {
                let neg = s.starts_with('-');
                let digits: String = s.chars().filter(|c| c.is_ascii_digit()).collect();
                let take = digits.len().min(15);
                let lead: f64 = digits[..take].parse().unwrap_or(0.0);
                let exp = (digits.len() - take) as i32;
                (if neg { -lead } else { lead }, exp)
            };
            let (n, en) = cut(&s_num);
            let (d, ed) = cut(&s_den);
            (n / d) * 10f64.powi(en - ed)
        }
    }
}
