//! Truncated Taylor expansions of one-parameter families of scalars.
//!
//! A jet of order `M` stores the coefficients `c_0, ..., c_M` of a
//! family `f(t) = c_0 + c_1 t + ... + c_M t^M + O(t^{M+1})`, so `c_k`
//! is the `k`-th derivative at zero divided by `k!`. Multiplication is
//! the Cauchy product truncated at order `M`; truncation to a lower
//! order is a ring homomorphism.

use crate::error::Error;
use crate::scalar::{factorial, Ring, Scalar};

/// Coefficients `c_0..=c_M` of a truncated Taylor expansion.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Jet<S> {
    coeffs: Vec<S>,
}

impl<S: Ring> Jet<S> {
    /// Jet from explicit Taylor coefficients; the order is one less than
    /// the number of coefficients, so the vector must be nonempty.
    pub fn from_coeffs(coeffs: Vec<S>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a jet has at least its order-0 coefficient"
        );
        Jet { coeffs }
    }

    /// The zero family at the given truncation order.
    pub fn zero(order: usize) -> Self {
        Jet {
            coeffs: vec![S::zero(); order + 1],
        }
    }

    /// The constant family `1`.
    pub fn one(order: usize) -> Self {
        Jet::constant(S::one(), order)
    }

    /// The constant family `c`.
    pub fn constant(c: S, order: usize) -> Self {
        let mut coeffs = vec![S::zero(); order + 1];
        coeffs[0] = c;
        Jet { coeffs }
    }

    /// Truncation order `M`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Taylor coefficient `c_k`; `k` must not exceed the order.
    pub fn coeff(&self, k: usize) -> &S {
        &self.coeffs[k]
    }

    /// All coefficients, lowest order first.
    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Value at the base point, `c_0`.
    pub fn value(&self) -> &S {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Discards coefficients above `order`, which must not exceed the
    /// current order. Truncation commutes with the ring operations.
    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "truncation can only lower the order");
        Jet {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    fn check_order(&self, other: &Self) -> Result<(), Error> {
        if self.order() == other.order() {
            Ok(())
        } else {
            Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            })
        }
    }

    /// Coefficientwise sum; the orders must agree.
    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        self.check_order(other)?;
        Ok(Jet {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    /// Coefficientwise difference; the orders must agree.
    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.check_order(other)?;
        Ok(Jet {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        })
    }

    /// Truncated Cauchy product; the orders must agree.
    pub fn mul(&self, other: &Self) -> Result<Self, Error> {
        self.check_order(other)?;
        let order = self.order();
        let mut coeffs = vec![S::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(order + 1 - i).enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Ok(Jet { coeffs })
    }

    pub fn neg(&self) -> Self {
        Jet {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    /// Multiplies every coefficient by the scalar `c`.
    pub fn scale(&self, c: &S) -> Self {
        Jet {
            coeffs: self.coeffs.iter().map(|x| c.clone() * x.clone()).collect(),
        }
    }
}

impl<S: Scalar> Jet<S> {
    /// The `m`-th derivative at the base point, `m! * c_m`. Orders past
    /// the truncation are unknown rather than zero, so they are an error.
    pub fn derivative(&self, m: usize) -> Result<S, Error> {
        if m > self.order() {
            return Err(Error::DerivativeOrder {
                requested: m,
                order: self.order(),
            });
        }
        Ok(factorial::<S>(m) * self.coeffs[m].clone())
    }

    /// Builds a jet from raw derivative values `f(0), f'(0), ...,
    /// f^{(M)}(0)` by dividing the `k`-th entry by `k!`.
    pub fn from_derivatives(values: Vec<S>) -> Self {
        assert!(!values.is_empty(), "a jet has at least its order-0 value");
        let coeffs = values
            .into_iter()
            .enumerate()
            .map(|(k, v)| v / factorial::<S>(k))
            .collect();
        Jet { coeffs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    fn rat(n: i64) -> Rat {
        Rat::from_integer(n.into())
    }

    fn jet(values: &[i64]) -> Jet<Rat> {
        Jet::from_coeffs(values.iter().map(|&v| rat(v)).collect())
    }

    #[test]
    fn cauchy_product_truncates() {
        let a = jet(&[1, 2, 3]);
        let b = jet(&[4, 5, 6]);
        // (1 + 2t + 3t^2)(4 + 5t + 6t^2) = 4 + 13t + 28t^2 + O(t^3)
        assert_eq!(a.mul(&b).unwrap(), jet(&[4, 13, 28]));
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let a = jet(&[1, 2]);
        let b = jet(&[1, 2, 3]);
        assert_eq!(
            a.mul(&b).unwrap_err(),
            Error::OrderMismatch { left: 1, right: 2 }
        );
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn derivative_restores_the_factorial() {
        // f(t) = 5 + 3t + 7t^2 has f''(0) = 14.
        let f = jet(&[5, 3, 7]);
        assert_eq!(f.derivative(0).unwrap(), rat(5));
        assert_eq!(f.derivative(1).unwrap(), rat(3));
        assert_eq!(f.derivative(2).unwrap(), rat(14));
        assert_eq!(
            f.derivative(3).unwrap_err(),
            Error::DerivativeOrder {
                requested: 3,
                order: 2
            }
        );
    }

    #[test]
    fn from_derivatives_divides_by_factorials() {
        let f: Jet<Rat> = Jet::from_derivatives(vec![rat(1), rat(2), rat(6)]);
        assert_eq!(f, jet(&[1, 2, 3]));
        assert_eq!(f.derivative(2).unwrap(), rat(6));
    }

    #[test]
    fn truncation_is_multiplicative() {
        let a = jet(&[1, -2, 3, 4]);
        let b = jet(&[2, 0, -1, 5]);
        let product = a.mul(&b).unwrap();
        for order in 0..=3 {
            assert_eq!(
                product.truncate(order),
                a.truncate(order).mul(&b.truncate(order)).unwrap(),
                "order {order}"
            );
        }
    }
}
