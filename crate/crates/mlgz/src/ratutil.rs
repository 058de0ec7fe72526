//! Crate-internal exact rational helpers: Gauss-Jordan inversion and solving,
//! rational polynomial arithmetic for CRT recombination, and exact integer
//! bounds of the form floor(c + sqrt(r)) used by the short-vector engine.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::matrix::IntMatrix;
use crate::poly::IntPoly;

pub(crate) fn rat_int(v: BigInt) -> BigRational {
    BigRational::from_integer(v)
}

/// Inverse over the rationals; None when singular.
pub(crate) fn invert_rational(m: &IntMatrix) -> Option<Vec<Vec<BigRational>>> {
    let n = m.rows();
    assert!(m.is_square());
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..n).map(|j| rat_int(m.at(i, j).clone())).collect();
            row.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    gauss_jordan(&mut a, n)?;
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solve `m x = b` over the rationals; None when there is no unique solution.
pub(crate) fn solve_rational(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigRational>> {
    let n = m.rows();
    assert!(m.is_square());
    assert_eq!(b.len(), n);
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..n).map(|j| rat_int(m.at(i, j).clone())).collect();
            row.push(rat_int(b[i].clone()));
            row
        })
        .collect();
    gauss_jordan(&mut a, n)?;
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

/// Reduce the left n x n block of an augmented matrix to the identity.
fn gauss_jordan(a: &mut [Vec<BigRational>], n: usize) -> Option<()> {
    let width = a[0].len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for j in 0..width {
            a[col][j] *= &inv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..width {
                let sub = &f * &a[col][j];
                a[r][j] -= sub;
            }
        }
    }
    Some(())
}

/// Rational polynomial, lowest degree first, trimmed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_int(p: &IntPoly) -> Self {
        RatPoly::from_coeffs(p.coeffs().iter().map(|c| rat_int(c.clone())).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, s: &BigRational) -> RatPoly {
        RatPoly::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        RatPoly::from_coeffs((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs =
            vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        RatPoly::from_coeffs(coeffs)
    }

    /// Multiply by x, then reduce mod `modulus`.
    pub fn mul_x_mod(&self, modulus: &RatPoly) -> RatPoly {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(BigRational::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        RatPoly::from_coeffs(coeffs).div_rem(modulus).1
    }

    pub fn div_rem(&self, divisor: &RatPoly) -> (RatPoly, RatPoly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let dlead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (RatPoly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = &rem[i] / &dlead;
            for (j, c) in divisor.coeffs.iter().enumerate() {
                let sub = &q * c;
                rem[i - dd + j] -= sub;
            }
            quot[i - dd] = q;
        }
        (RatPoly::from_coeffs(quot), RatPoly::from_coeffs(rem))
    }

    /// Extended gcd: returns (g, u, v) with u*self + v*other = g, g monic
    /// (or zero when both inputs are zero).
    pub fn xgcd(&self, other: &RatPoly) -> (RatPoly, RatPoly, RatPoly) {
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let one = RatPoly::from_coeffs(vec![BigRational::one()]);
        let (mut u0, mut u1) = (one.clone(), RatPoly::zero());
        let (mut v0, mut v1) = (RatPoly::zero(), one);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let qu = q.mul(&u1);
            let qv = q.mul(&v1);
            let nu = u0.add(&qu.scale(&-BigRational::one()));
            let nv = v0.add(&qv.scale(&-BigRational::one()));
            r0 = r1;
            r1 = r;
            u0 = u1;
            u1 = nu;
            v0 = v1;
            v1 = nv;
        }
        if let Some(d) = r0.degree() {
            let lead = r0.coeffs[d].clone();
            let inv = lead.recip();
            return (r0.scale(&inv), u0.scale(&inv), v0.scale(&inv));
        }
        (r0, u0, v0)
    }

    /// Back to an integer polynomial, if every coefficient is integral.
    pub fn to_int_poly(&self) -> Option<IntPoly> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            if !c.is_integer() {
                return None;
            }
            out.push(c.to_integer());
        }
        Some(IntPoly::from_coeffs(out))
    }
}

/// Exact floor(center + sqrt(radicand)) for rational center and rational
/// radicand >= 0.  Works by an integer-sqrt overestimate followed by a
/// predicate-driven walk down, so no irrational value is ever approximated.
pub(crate) fn floor_center_plus_sqrt(center: &BigRational, radicand: &BigRational) -> BigInt {
    assert!(!radicand.is_negative());
    let rad_floor = radicand.floor().to_integer();
    let overshoot = rad_floor.sqrt() + 1;
    let mut z = center.floor().to_integer() + overshoot + 1;
    // z <= center + sqrt(radicand)  <=>  z - center <= 0  or  (z-center)^2 <= radicand
    let fits = |z: &BigInt| {
        let d = rat_int(z.clone()) - center;
        !d.is_positive() || &d * &d <= *radicand
    };
    while !fits(&z) {
        z -= 1;
    }
    z
}
