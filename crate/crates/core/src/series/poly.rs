use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Polynomial in the marker variable `y` with exact rational coefficients.
///
/// `coeffs[k]` multiplies `y^k`; trailing zeros are always trimmed, so the
/// zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MarkerPolynomial {
    coeffs: Vec<BigRational>,
}

impl MarkerPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        MarkerPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        MarkerPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    /// The monomial `c y^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `y^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn eval_at_zero(&self) -> BigRational {
        self.coeff(0)
    }

    pub fn eval_at_one(&self) -> BigRational {
        self.coeffs.iter().sum()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MarkerPolynomial {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Exact quotient by `(1 - y)`.
    ///
    /// Fails with [`Error::Invariant`] if the remainder (the value at
    /// `y = 1`) is not zero.
    pub fn divide_by_one_minus_y(&self) -> Result<Self> {
        // p(y) = (1 - y) q(y)  =>  q_k = sum_{i <= k} p_i
        let Some(deg) = self.degree() else {
            return Ok(Self::zero());
        };
        let mut quotient = Vec::with_capacity(deg);
        let mut running = BigRational::zero();
        for c in &self.coeffs[..deg] {
            running += c;
            quotient.push(running.clone());
        }
        running += &self.coeffs[deg];
        if !running.is_zero() {
            return Err(Error::invariant(format!(
                "division by (1 - y) leaves remainder {running} for {self}"
            )));
        }
        Ok(Self::new(quotient))
    }
}

impl fmt::Display for MarkerPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})y")?,
                _ => write!(f, "({c})y^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &MarkerPolynomial {
    type Output = MarkerPolynomial;

    fn add(self, rhs: Self) -> MarkerPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        MarkerPolynomial::new(
            (0..len)
                .map(|k| match (self.coeffs.get(k), rhs.coeffs.get(k)) {
                    (Some(a), Some(b)) => a + b,
                    (Some(a), None) | (None, Some(a)) => a.clone(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }
}

impl Neg for &MarkerPolynomial {
    type Output = MarkerPolynomial;

    fn neg(self) -> MarkerPolynomial {
        MarkerPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &MarkerPolynomial {
    type Output = MarkerPolynomial;

    fn sub(self, rhs: Self) -> MarkerPolynomial {
        self + &(-rhs)
    }
}

impl Mul for &MarkerPolynomial {
    type Output = MarkerPolynomial;

    fn mul(self, rhs: Self) -> MarkerPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return MarkerPolynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        MarkerPolynomial::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn trims_trailing_zeros() {
        let p = MarkerPolynomial::from_ints(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(MarkerPolynomial::from_ints(&[0, 0]).is_zero());
        assert_eq!(MarkerPolynomial::zero().degree(), None);
    }

    #[test]
    fn divide_examples() {
        let one_minus_y = MarkerPolynomial::from_ints(&[1, -1]);
        assert_eq!(one_minus_y.divide_by_one_minus_y().unwrap(), MarkerPolynomial::one());
        let p = MarkerPolynomial::from_ints(&[1, 0, -1]);
        assert_eq!(p.divide_by_one_minus_y().unwrap(), MarkerPolynomial::from_ints(&[1, 1]));
        // z^2 coefficient of sqrt(1-2yz) - sqrt(1-2z) is (1 - y^2)/2
        let p = MarkerPolynomial::new(vec![rat(1, 2), rat(0, 1), rat(-1, 2)]);
        assert_eq!(
            p.divide_by_one_minus_y().unwrap(),
            MarkerPolynomial::new(vec![rat(1, 2), rat(1, 2)])
        );
        assert!(MarkerPolynomial::zero().divide_by_one_minus_y().unwrap().is_zero());
    }

    #[test]
    fn divide_rejects_remainder() {
        let err = MarkerPolynomial::from_ints(&[1, 1]).divide_by_one_minus_y().unwrap_err();
        assert!(err.is_internal());
    }

    #[test]
    fn arithmetic() {
        let a = MarkerPolynomial::from_ints(&[1, 1]);
        let b = MarkerPolynomial::from_ints(&[1, -1]);
        assert_eq!(&a * &b, MarkerPolynomial::from_ints(&[1, 0, -1]));
        assert_eq!(&a + &b, MarkerPolynomial::from_ints(&[2]));
        assert!((&a - &a).is_zero());
        assert_eq!(a.scale(&rat(1, 2)).coeff(1), rat(1, 2));
        assert_eq!(a.eval_at_one(), rat(2, 1));
    }
}
