//! Univariate integer polynomials, coefficients stored lowest degree first.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::matrix::IntMatrix;

/// Integer polynomial.  The zero polynomial has an empty coefficient vector;
/// otherwise the leading coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly {
            coeffs: vec![BigInt::one()],
        }
    }

    /// The monomial x.
    pub fn x() -> Self {
        IntPoly::from_i64(&[0, 1])
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::from_coeffs(vec![c])
    }

    /// Build from lowest-degree-first coefficients, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// x^n - 1.
    pub fn x_pow_minus_one(n: usize) -> Self {
        assert!(n >= 1);
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[0] = BigInt::from(-1);
        coeffs[n] = BigInt::one();
        IntPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::from_coeffs((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::from_coeffs((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(coeffs)
    }

    pub fn pow(&self, k: u32) -> IntPoly {
        let mut acc = IntPoly::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Division with remainder.  Requires the divisor's leading coefficient
    /// to be a unit, which keeps every quotient step integral.
    pub fn div_rem(&self, divisor: &IntPoly) -> (IntPoly, IntPoly) {
        let dlead = divisor.leading().expect("division by zero polynomial");
        assert!(dlead.clone().abs().is_one(), "divisor must have unit leading coefficient");
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (IntPoly::zero(), self.clone());
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = &rem[i] / dlead;
            quot[i - dd] = q.clone();
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] -= &q * c;
            }
            debug_assert!(rem[i].is_zero());
        }
        (IntPoly::from_coeffs(quot), IntPoly::from_coeffs(rem))
    }

    /// Exact division: Some(quotient) iff the remainder vanishes.
    pub fn exact_div(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &IntPoly) -> bool {
        other.exact_div(self).is_some()
    }

    /// Companion matrix of a monic polynomial of degree >= 1: the matrix
    /// shifts basis vectors and carries the negated coefficients in the last
    /// column.
    pub fn companion(&self) -> IntMatrix {
        assert!(self.is_monic(), "companion matrix needs a monic polynomial");
        let n = self.degree().unwrap();
        assert!(n >= 1);
        IntMatrix::from_fn(n, n, |i, j| {
            if j + 1 == n {
                -self.coeff(i)
            } else if i == j + 1 {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        })
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.clone().abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}
