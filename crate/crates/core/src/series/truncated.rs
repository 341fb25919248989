use num_rational::BigRational;
use num_traits::{One, Zero};

use super::MarkerPolynomial;
use crate::{Error, Result};

/// Power series in `z`, truncated after `z^order`, whose coefficients are
/// polynomials in `y`.
///
/// Binary operations require equal orders. Nothing here re-truncates
/// implicitly; use [`TruncatedSeries::truncate`] to lower an order on
/// purpose.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    order: usize,
    coeffs: Vec<MarkerPolynomial>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            order,
            coeffs: vec![MarkerPolynomial::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(MarkerPolynomial::one(), order)
    }

    pub fn constant(c: MarkerPolynomial, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// Series with the given leading coefficients, zero-padded up to `order`.
    pub fn from_polys(order: usize, polys: Vec<MarkerPolynomial>) -> Result<Self> {
        if polys.len() > order + 1 && polys[order + 1..].iter().any(|p| !p.is_zero()) {
            return Err(Error::invalid(format!(
                "{} coefficients do not fit in order {order}",
                polys.len()
            )));
        }
        let mut s = Self::zero(order);
        for (slot, p) in s.coeffs.iter_mut().zip(polys) {
            *slot = p;
        }
        Ok(s)
    }

    /// `a + b z` with integer coefficient lists in `y`.
    pub fn linear(order: usize, a: &[i64], b: &[i64]) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = MarkerPolynomial::from_ints(a);
        if order >= 1 {
            s.coeffs[1] = MarkerPolynomial::from_ints(b);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[MarkerPolynomial] {
        &self.coeffs
    }

    pub fn coefficient(&self, k: usize) -> Result<&MarkerPolynomial> {
        self.coeffs.get(k).ok_or(Error::BeyondOrder {
            requested: k,
            order: self.order,
        })
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: order,
            });
        }
        Ok(TruncatedSeries {
            order,
            coeffs: self.coeffs[..=order].to_vec(),
        })
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order == other.order {
            Ok(())
        } else {
            Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            })
        }
    }

    fn map(&self, f: impl Fn(&MarkerPolynomial) -> MarkerPolynomial) -> Self {
        TruncatedSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&MarkerPolynomial, &MarkerPolynomial) -> MarkerPolynomial) -> Result<Self> {
        self.check_order(other)?;
        Ok(TruncatedSeries {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        self.map(|a| a.scale(c))
    }

    pub fn scale_poly(&self, c: &MarkerPolynomial) -> Self {
        self.map(|a| a * c)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let mut out = Self::zero(self.order);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=self.order - i].iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] = &out.coeffs[i + j] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    /// `d/dz`, one order lower.
    pub fn derivative(&self) -> Result<Self> {
        if self.order == 0 {
            return Err(Error::invalid("cannot differentiate an order-0 series"));
        }
        Ok(TruncatedSeries {
            order: self.order - 1,
            coeffs: (1..=self.order)
                .map(|k| self.coeffs[k].scale(&BigRational::from_integer(k.into())))
                .collect(),
        })
    }

    /// Antiderivative with zero constant term, one order higher.
    pub fn integral(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.order + 2);
        coeffs.push(MarkerPolynomial::zero());
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.scale(&BigRational::new(1.into(), (k + 1).into())));
        }
        TruncatedSeries {
            order: self.order + 1,
            coeffs,
        }
    }

    fn constant_term(&self) -> &MarkerPolynomial {
        &self.coeffs[0]
    }

    fn require_unit_constant(&self, operation: &'static str) -> Result<()> {
        if self.constant_term().as_constant().is_some_and(|c| c.is_one()) {
            Ok(())
        } else {
            Err(Error::ConstantTerm {
                operation,
                requirement: "constant term 1",
                constant: self.constant_term().to_string(),
            })
        }
    }

    /// Multiplicative inverse; the constant term must be a nonzero rational.
    pub fn reciprocal(&self) -> Result<Self> {
        let inv0 = match self.constant_term().as_constant() {
            Some(c) if !c.is_zero() => c.recip(),
            _ => {
                return Err(Error::ConstantTerm {
                    operation: "reciprocal",
                    requirement: "a nonzero constant term",
                    constant: self.constant_term().to_string(),
                })
            }
        };
        let mut out = Self::zero(self.order);
        out.coeffs[0] = MarkerPolynomial::constant(inv0.clone());
        for k in 1..=self.order {
            let mut acc = MarkerPolynomial::zero();
            for i in 1..=k {
                if !self.coeffs[i].is_zero() && !out.coeffs[k - i].is_zero() {
                    acc = &acc + &(&self.coeffs[i] * &out.coeffs[k - i]);
                }
            }
            out.coeffs[k] = acc.scale(&-inv0.clone());
        }
        Ok(out)
    }

    /// Square root with constant term 1.
    pub fn sqrt(&self) -> Result<Self> {
        self.require_unit_constant("sqrt")?;
        let half = BigRational::new(1.into(), 2.into());
        let mut out = Self::one(self.order);
        for k in 1..=self.order {
            let mut acc = self.coeffs[k].clone();
            for i in 1..k {
                if !out.coeffs[i].is_zero() && !out.coeffs[k - i].is_zero() {
                    acc = &acc - &(&out.coeffs[i] * &out.coeffs[k - i]);
                }
            }
            out.coeffs[k] = acc.scale(&half);
        }
        Ok(out)
    }

    /// Natural logarithm with constant term 1, as the integral of `s'/s`.
    pub fn log(&self) -> Result<Self> {
        self.require_unit_constant("log")?;
        if self.order == 0 {
            return Ok(Self::zero(0));
        }
        let lower = self.truncate(self.order - 1)?;
        Ok(self.derivative()?.mul(&lower.reciprocal()?)?.integral())
    }

    /// Arctangent of a series with zero constant term, as the integral of
    /// `w' / (1 + w^2)`.
    pub fn atan(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::ConstantTerm {
                operation: "atan",
                requirement: "constant term 0",
                constant: self.constant_term().to_string(),
            });
        }
        if self.order == 0 {
            return Ok(Self::zero(0));
        }
        let lower = self.truncate(self.order - 1)?;
        let denom = Self::one(lower.order).add(&lower.mul(&lower)?)?;
        Ok(self.derivative()?.mul(&denom.reciprocal()?)?.integral())
    }

    /// Coefficient-wise exact division by `(1 - y)`.
    pub fn divide_by_one_minus_y(&self) -> Result<Self> {
        Ok(TruncatedSeries {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .map(MarkerPolynomial::divide_by_one_minus_y)
                .collect::<Result<_>>()?,
        })
    }

    /// Sets `y = 0`.
    pub fn at_y_zero(&self) -> Self {
        self.map(|p| MarkerPolynomial::constant(p.eval_at_zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn univariate(s: &TruncatedSeries) -> Vec<BigRational> {
        s.coeffs().iter().map(|p| p.as_constant().expect("no y")).collect()
    }

    const N: usize = 12;

    #[test]
    fn reciprocal_identity() {
        let s = TruncatedSeries::linear(N, &[1], &[-2]);
        let prod = s.mul(&s.reciprocal().unwrap()).unwrap();
        assert_eq!(prod, TruncatedSeries::one(N));
        // 1/(1 - 2z) = sum 2^k z^k
        let r = univariate(&s.reciprocal().unwrap());
        for (k, c) in r.iter().enumerate() {
            assert_eq!(*c, BigRational::from_integer((1i64 << k).into()));
        }
    }

    #[test]
    fn z_over_sqrt() {
        let z = TruncatedSeries::linear(N, &[0], &[1]);
        let inv_sqrt = TruncatedSeries::linear(N, &[1], &[-2]).sqrt().unwrap().reciprocal().unwrap();
        let s = z.mul(&inv_sqrt).unwrap();
        assert_eq!(s.coefficient(2).unwrap(), &MarkerPolynomial::one());
        // (1-2z)^{-1/2} = sum (2k-1)!!/k! z^k
        let c = univariate(&inv_sqrt);
        assert_eq!(c[3], rat(15, 6));
    }

    #[test]
    fn scale_example() {
        let s = TruncatedSeries::linear(N, &[1], &[-1, -1]);
        let neg = s.scale(&rat(-1, 1));
        assert_eq!(neg, TruncatedSeries::linear(N, &[-1], &[1, 1]));
        assert_eq!(neg, s.neg());
    }

    #[test]
    fn sqrt_of_one_minus_two_z() {
        let s = TruncatedSeries::linear(N, &[1], &[-2]);
        let r = s.sqrt().unwrap();
        let c = univariate(&r);
        assert_eq!(&c[..4], &[rat(1, 1), rat(-1, 1), rat(-1, 2), rat(-1, 2)]);
        assert_eq!(r.mul(&r).unwrap(), s);
    }

    #[test]
    fn log_mercator() {
        let s = TruncatedSeries::linear(N, &[1], &[-2]).reciprocal().unwrap();
        let l = univariate(&s.log().unwrap());
        assert!(l[0].is_zero());
        for (k, c) in l.iter().enumerate().skip(1) {
            assert_eq!(c, &BigRational::new((1i64 << k).into(), (k as i64).into()));
        }
    }

    #[test]
    fn atan_series() {
        let z = TruncatedSeries::linear(N, &[0], &[1]);
        let a = univariate(&z.atan().unwrap());
        let want = [0, 1, 0, -3, 0, 5];
        for (k, w) in want.iter().enumerate() {
            let expected = if *w == 0 { rat(0, 1) } else { rat(1, *w) };
            assert_eq!(a[k], expected, "k = {k}");
        }
    }

    #[test]
    fn preconditions() {
        let s = TruncatedSeries::linear(N, &[2], &[1]);
        assert!(matches!(s.sqrt(), Err(Error::ConstantTerm { operation: "sqrt", .. })));
        assert!(matches!(s.log(), Err(Error::ConstantTerm { operation: "log", .. })));
        assert!(matches!(s.atan(), Err(Error::ConstantTerm { operation: "atan", .. })));
        assert!(s.reciprocal().is_ok());
        let y = TruncatedSeries::linear(N, &[0, 1], &[1]);
        let err = y.reciprocal().unwrap_err();
        assert!(err.to_string().contains("(1)y"), "{err}");
    }

    #[test]
    fn order_mismatch() {
        let a = TruncatedSeries::one(4);
        let b = TruncatedSeries::one(5);
        assert_eq!(a.add(&b), Err(Error::OrderMismatch { left: 4, right: 5 }));
        assert!(a.mul(&b).is_err());
        assert!(a.coefficient(5).is_err());
        assert!(TruncatedSeries::from_polys(1, vec![MarkerPolynomial::one(); 3]).is_err());
    }

    #[test]
    fn bivariate_identities() {
        // sqrt(1 - 2yz)^2 = 1 - 2yz
        let s = TruncatedSeries::linear(N, &[1], &[0, -2]);
        let r = s.sqrt().unwrap();
        assert_eq!(r.mul(&r).unwrap(), s);
        // log(a/b) = log a - log b with a = 1 - z(1+y), b = 1 - 2z
        let a = TruncatedSeries::linear(N, &[1], &[-1, -1]);
        let b = TruncatedSeries::linear(N, &[1], &[-2]);
        let lhs = a.mul(&b.reciprocal().unwrap()).unwrap().log().unwrap();
        let rhs = a.log().unwrap().sub(&b.log().unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn reciprocal_roundtrip(coeffs in proptest::collection::vec(-5i64..5, 1..8)) {
            let order = 7;
            let mut polys = vec![MarkerPolynomial::one()];
            polys.extend(coeffs.iter().map(|&c| MarkerPolynomial::from_ints(&[c, c - 1])));
            let s = TruncatedSeries::from_polys(order, polys).unwrap();
            prop_assert_eq!(s.mul(&s.reciprocal().unwrap()).unwrap(), TruncatedSeries::one(order));
            let r = s.sqrt().unwrap();
            prop_assert_eq!(r.mul(&r).unwrap(), s.clone());
            prop_assert_eq!(s.log().unwrap().derivative().unwrap(),
                s.derivative().unwrap().mul(&s.truncate(order - 1).unwrap().reciprocal().unwrap()).unwrap());
        }
    }
}
