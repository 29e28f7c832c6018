//! Exact univariate polynomial and truncated power-series arithmetic.
//!
//! `Polynomial` is a dense polynomial in `x` with arbitrary-precision integer
//! coefficients. `Series` is a truncated power series in a second variable `y`
//! whose coefficients are `Polynomial`s; that is the only bivariate object the
//! crate needs, so no general multivariate type exists.
//!
//! All operations are exact. Division helpers fail loudly instead of rounding.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use thiserror::Error;

/// Arbitrary-precision integer coefficient.
pub type Coefficient = BigInt;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    /// Exact division left a nonzero remainder.
    #[error("polynomial division leaves a remainder")]
    NotDivisible,
    /// An `x^-1` shift was requested on a polynomial with a constant term.
    #[error("constant term is nonzero")]
    ConstantTermNonzero,
    /// The `y^0` coefficient of a series denominator failed to divide exactly.
    #[error("leading denominator coefficient does not divide exactly")]
    NonUnitLeading,
}

/// Dense polynomial in `x` over the integers.
///
/// Canonical form: the highest stored coefficient is nonzero; the zero
/// polynomial stores nothing. Equality is coefficient-wise.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<BigInt>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(1)
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Polynomial::from_coeffs(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn constant<T: Into<BigInt>>(c: T) -> Self {
        Polynomial::from_coeffs(vec![c.into()])
    }

    /// `c * x^k`.
    pub fn monomial<T: Into<BigInt>>(c: T, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c.into();
        Polynomial::from_coeffs(coeffs)
    }

    /// Builds from coefficients indexed by power of `x`, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    /// Convenience constructor from machine integers, lowest power first.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Polynomial::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^k` (zero beyond the stored range).
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Coefficients indexed by power of `x`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Lowest power with a nonzero coefficient, or `None` for zero.
    pub fn min_power(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Horner evaluation at an integer point.
    pub fn eval_int(&self, v: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * v + c;
        }
        acc
    }

    /// `self * x`.
    pub fn shift_up(&self) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(BigInt::zero());
        coeffs.extend_from_slice(&self.coeffs);
        Polynomial { coeffs }
    }

    /// `self / x`; the constant term must vanish.
    pub fn shift_down(&self) -> Result<Polynomial, AlgebraError> {
        if self.is_zero() {
            return Ok(Polynomial::zero());
        }
        if !self.coeffs[0].is_zero() {
            return Err(AlgebraError::ConstantTermNonzero);
        }
        Ok(Polynomial {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// Exact quotient; errors unless `self = q * d` exactly.
    pub fn div_exact(&self, d: &Polynomial) -> Result<Polynomial, AlgebraError> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Ok(Polynomial::zero());
        }
        let (da, dd) = (self.coeffs.len(), d.coeffs.len());
        if da < dd {
            return Err(AlgebraError::NotDivisible);
        }
        let lead = &d.coeffs[dd - 1];
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); da - dd + 1];
        for k in (0..quot.len()).rev() {
            let top = rem[k + dd - 1].clone();
            if top.is_zero() {
                continue;
            }
            if !(&top % lead).is_zero() {
                return Err(AlgebraError::NotDivisible);
            }
            let q = &top / lead;
            for (i, dc) in d.coeffs.iter().enumerate() {
                let t = dc * &q;
                rem[k + i] -= t;
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(AlgebraError::NotDivisible);
        }
        Ok(Polynomial::from_coeffs(quot))
    }

    /// `self^n` with the empty-product convention `p^0 = 1`.
    pub fn pow(&self, n: usize) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Sum of all coefficients, i.e. the value at `x = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + rhs.coeff(k));
        }
        Polynomial::from_coeffs(coeffs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) - rhs.coeff(k));
        }
        Polynomial::from_coeffs(coeffs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::from_coeffs(coeffs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_value_binop {
    ($Op:ident, $op:ident) => {
        impl $Op for Polynomial {
            type Output = Polynomial;
            fn $op(self, rhs: Polynomial) -> Polynomial {
                (&self).$op(&rhs)
            }
        }
        impl $Op<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $op(self, rhs: &Polynomial) -> Polynomial {
                (&self).$op(rhs)
            }
        }
    };
}
forward_value_binop!(Add, add);
forward_value_binop!(Sub, sub);
forward_value_binop!(Mul, mul);

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        *self = &*self + rhs;
    }
}

impl fmt::Display for Polynomial {
    /// Renders as `c_k x^k + ... + c_1 x + c_0`, descending powers,
    /// unit coefficients elided: `x^3 + 4x^2 + 3x`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit = mag.is_one() && k > 0;
            if !unit {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

/// Truncated power series in `y` with `Polynomial` coefficients.
///
/// Stores exactly `order + 1` terms. Binary operations truncate to the
/// smaller order of the two operands.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Series {
    terms: Vec<Polynomial>,
}

impl Series {
    pub fn new(mut terms: Vec<Polynomial>, order: usize) -> Self {
        terms.resize(order + 1, Polynomial::zero());
        terms.truncate(order + 1);
        Series { terms }
    }

    /// Truncation order (inclusive).
    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    /// Coefficient of `y^n`.
    pub fn term(&self, n: usize) -> &Polynomial {
        &self.terms[n]
    }

    pub fn terms(&self) -> &[Polynomial] {
        &self.terms
    }

    pub fn add(&self, rhs: &Series) -> Series {
        let order = self.order().min(rhs.order());
        let terms = (0..=order).map(|n| self.term(n) + rhs.term(n)).collect();
        Series { terms }
    }

    pub fn mul(&self, rhs: &Series) -> Series {
        let order = self.order().min(rhs.order());
        let mut terms = vec![Polynomial::zero(); order + 1];
        for i in 0..=order {
            if self.term(i).is_zero() {
                continue;
            }
            for j in 0..=(order - i) {
                terms[i + j] += &(self.term(i) * rhs.term(j));
            }
        }
        Series { terms }
    }
}

/// Expands `numer / denom` as a power series in `y` up to `y^order`.
///
/// `numer` and `denom` list polynomial-in-`x` coefficients by power of `y`.
/// Every step divides exactly by the `y^0` denominator coefficient (which is
/// `1` or `x` for every generating function in this crate); a failed division
/// reports `NonUnitLeading`.
pub fn series_rational_expand(
    numer: &[Polynomial],
    denom: &[Polynomial],
    order: usize,
) -> Result<Series, AlgebraError> {
    let d0 = denom
        .first()
        .filter(|p| !p.is_zero())
        .ok_or(AlgebraError::NonUnitLeading)?;
    let mut terms: Vec<Polynomial> = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let mut acc = numer.get(n).cloned().unwrap_or_else(Polynomial::zero);
        for j in 1..denom.len().min(n + 1) {
            acc = &acc - &(&denom[j] * &terms[n - j]);
        }
        let t = acc
            .div_exact(d0)
            .map_err(|_| AlgebraError::NonUnitLeading)?;
        terms.push(t);
    }
    Ok(Series { terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(coeffs: &[i64]) -> Polynomial {
        Polynomial::from_ints(coeffs)
    }

    #[test]
    fn add_identity_and_hand_sums() {
        let t1 = p(&[0, 1, 1]); // x^2 + x
        assert_eq!(&t1 + &Polynomial::zero(), t1);
        assert_eq!(&p(&[1, 1]) + &t1, p(&[1, 2, 1]));
        // T_1(x) + T_1(x) = L_1(x)
        assert_eq!(&t1 + &t1, p(&[0, 2, 2]));
    }

    #[test]
    fn mul_identity_convolution_and_disjoint_unknots() {
        let t1 = p(&[0, 1, 1]);
        assert_eq!(&t1 * &Polynomial::one(), t1);
        // L_1(x) * T_1(x) = x * W_1(x)
        assert_eq!(&p(&[0, 2, 2]) * &t1, p(&[0, 0, 2, 4, 2]));
        assert_eq!(&Polynomial::x() * &Polynomial::x(), p(&[0, 0, 1]));
    }

    #[test]
    fn pow_small_cases() {
        assert_eq!(p(&[1, 1]).pow(0), Polynomial::one());
        assert_eq!(p(&[1, 1]).pow(3), p(&[1, 3, 3, 1]));
        assert_eq!(p(&[3, 4, 1]).pow(2), p(&[9, 24, 22, 8, 1]));
    }

    #[test]
    fn div_exact_cases() {
        let cubic = p(&[0, -1, 0, 1]); // x^3 - x
        assert_eq!(cubic.div_exact(&cubic).unwrap(), Polynomial::one());
        // alpha-solve for T_1: (x*(x^2+x) - (x^2+x)) / (x^3-x) = 1
        let t1 = p(&[0, 1, 1]);
        let num = &t1.shift_up() - &t1;
        assert_eq!(num.div_exact(&cubic).unwrap(), Polynomial::one());
        assert_eq!(t1.div_exact(&p(&[2, 1])), Err(AlgebraError::NotDivisible));
    }

    #[test]
    fn shift_down_cases() {
        assert_eq!(p(&[0, 1, 1]).shift_down().unwrap(), p(&[1, 1]));
        assert_eq!(p(&[0, 2, 4, 2]).shift_down().unwrap(), p(&[2, 4, 2]));
        assert_eq!(
            p(&[1, 1]).shift_down(),
            Err(AlgebraError::ConstantTermNonzero)
        );
    }

    #[test]
    fn eval_counts_states() {
        let one = BigInt::from(1);
        assert_eq!(p(&[0, 1, 1]).eval_int(&one), BigInt::from(2));
        assert_eq!(p(&[0, 3, 4, 1]).eval_int(&one), BigInt::from(8));
        assert_eq!(p(&[7, 3, 4, 1]).eval_int(&BigInt::from(0)), BigInt::from(7));
    }

    #[test]
    fn series_expansion_examples() {
        // x / (1 - y(x+1)) to order 2
        let s = series_rational_expand(&[Polynomial::x()], &[Polynomial::one(), -&p(&[1, 1])], 2)
            .unwrap();
        assert_eq!(s.term(0), &Polynomial::x());
        assert_eq!(s.term(1), &p(&[0, 1, 1]));
        assert_eq!(s.term(2), &p(&[0, 1, 2, 1]));

        // geometric series 1 / (1 - y)
        let g = series_rational_expand(
            &[Polynomial::one()],
            &[Polynomial::one(), -&Polynomial::one()],
            3,
        )
        .unwrap();
        assert!(g.terms().iter().all(|t| t == &Polynomial::one()));

        // x / (1 - y(2x+2)), y^2 term
        let l = series_rational_expand(&[Polynomial::x()], &[Polynomial::one(), -&p(&[2, 2])], 2)
            .unwrap();
        assert_eq!(l.term(2), &p(&[0, 4, 8, 4]));
    }

    #[test]
    fn series_truncates_to_min_order() {
        let a = Series::new(vec![Polynomial::one(); 5], 4);
        let b = Series::new(vec![Polynomial::one(); 3], 2);
        assert_eq!(a.mul(&b).order(), 2);
        assert_eq!(a.add(&b).order(), 2);
    }

    #[test]
    fn display_format() {
        assert_eq!(p(&[0, 3, 4, 1]).to_string(), "x^3 + 4x^2 + 3x");
        assert_eq!(p(&[-1, 0, 1]).to_string(), "x^2 - 1");
        assert_eq!(Polynomial::zero().to_string(), "0");
        assert_eq!(Polynomial::x().to_string(), "x");
        assert_eq!(p(&[5]).to_string(), "5");
    }

    fn random_poly(rng: &mut ChaCha8Rng) -> Polynomial {
        let deg = rng.gen_range(0..6);
        let coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-9..=9)).collect();
        Polynomial::from_ints(&coeffs)
    }

    #[test]
    fn ring_laws_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let (a, b, c) = (
                random_poly(&mut rng),
                random_poly(&mut rng),
                random_poly(&mut rng),
            );
            assert_eq!(&a + &b, &b + &a);
            assert_eq!(&a * &b, &b * &a);
            assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }
    }

    #[test]
    fn div_exact_inverts_mul() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..500 {
            let a = random_poly(&mut rng);
            let mut d = random_poly(&mut rng);
            if d.is_zero() {
                d = Polynomial::one();
            }
            assert_eq!((&a * &d).div_exact(&d).unwrap(), a);
        }
    }
}
