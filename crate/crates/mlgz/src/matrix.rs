//! Exact integer matrices: fraction-free determinants, unimodular inverses,
//! characteristic polynomials and saturated integer kernels.
//!
//! Everything here works over arbitrary-precision integers.  Ranks in this
//! crate stay small (at most ~20) but Bareiss intermediates routinely exceed
//! 64 bits, so there is no machine-word fast path.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::IntPoly;
use crate::ratutil;
use crate::{Error, Result};

/// Dense integer matrix, row-major, arbitrary-precision entries.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Convenience constructor from machine-integer rows.
    ///
    /// Panics if the rows are ragged.
    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<BigInt>]) -> Self {
        let c = cols.len();
        let r = if c == 0 { 0 } else { cols[0].len() };
        assert!(cols.iter().all(|col| col.len() == r), "ragged columns");
        IntMatrix::from_fn(r, c, |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn check_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| -self.at(i, j))
    }

    pub fn scale(&self, s: &BigInt) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j) * s)
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j) + other.at(i, j))
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j) - other.at(i, j))
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.at(i, j) + a * other.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * &v[j]).sum())
            .collect()
    }

    /// `self` raised to a nonnegative power, by repeated squaring.
    pub fn pow(&self, mut k: u64) -> IntMatrix {
        let n = self.rows;
        assert!(self.is_square());
        let mut result = IntMatrix::identity(n);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn trace(&self) -> BigInt {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.at(i, i).clone()).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == IntMatrix::identity(self.rows)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Exact determinant by fraction-free Bareiss elimination.
    ///
    /// Every interior division is exact by the Bareiss identity; an inexact
    /// one indicates memory corruption and panics.
    pub fn det_exact(&self) -> Result<BigInt> {
        let n = self.check_square()?;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| self.at(i, j).clone()).collect())
            .collect();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        negate = !negate;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    let (q, r) = num.div_rem(&prev);
                    assert!(r.is_zero(), "Bareiss division must be exact");
                    a[i][j] = q;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        Ok(if negate { -det } else { det })
    }

    /// Exact inverse of a matrix with determinant +-1.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        let n = self.check_square()?;
        let det = self.det_exact()?;
        if !det.clone().abs().is_one() {
            return Err(Error::NotUnimodular { det });
        }
        let inv_rat = ratutil::invert_rational(self).expect("unimodular matrix is invertible");
        let inv = IntMatrix::from_fn(n, n, |i, j| {
            let v = &inv_rat[i][j];
            assert!(v.is_integer(), "inverse of a unimodular matrix is integral");
            v.to_integer()
        });
        debug_assert!(self.mul(&inv).is_identity());
        Ok(inv)
    }

    /// Characteristic polynomial `det(t*id - self)` by the Faddeev-LeVerrier
    /// recursion.  Each division by the step index is exact over the
    /// integers; an inexact one panics.
    pub fn char_poly(&self) -> Result<IntPoly> {
        let n = self.check_square()?;
        // cs[k] is the coefficient of t^(n-k)
        let mut cs: Vec<BigInt> = vec![BigInt::one()];
        let mut mk = self.clone();
        for k in 1..=n {
            if k > 1 {
                let mut shifted = mk;
                for i in 0..n {
                    let v = shifted.at(i, i) + &cs[k - 1];
                    shifted.set(i, i, v);
                }
                mk = self.mul(&shifted);
            }
            let (q, r) = (-mk.trace()).div_rem(&BigInt::from(k));
            assert!(r.is_zero(), "Faddeev-LeVerrier division must be exact");
            cs.push(q);
        }
        let mut coeffs = vec![BigInt::zero(); n + 1];
        for (k, c) in cs.into_iter().enumerate() {
            coeffs[n - k] = c;
        }
        Ok(IntPoly::from_coeffs(coeffs))
    }

    /// Basis of the saturated integer kernel `{v : self * v = 0}`, via
    /// Smith-style diagonalization with column-transform tracking.  The
    /// result is in Hermite-reduced canonical form; it is empty exactly when
    /// the kernel is trivial.
    pub fn smith_kernel(&self) -> Vec<Vec<BigInt>> {
        let (r, c) = (self.rows, self.cols);
        let mut a: Vec<Vec<BigInt>> = (0..r)
            .map(|i| (0..c).map(|j| self.at(i, j).clone()).collect())
            .collect();
        let mut v = IntMatrix::identity(c);

        let swap_cols = |a: &mut Vec<Vec<BigInt>>, v: &mut IntMatrix, x: usize, y: usize| {
            for row in a.iter_mut() {
                row.swap(x, y);
            }
            for i in 0..c {
                let t = v.at(i, x).clone();
                let u = v.at(i, y).clone();
                v.set(i, x, u);
                v.set(i, y, t);
            }
        };
        // col_y -= q * col_x
        let add_col = |a: &mut Vec<Vec<BigInt>>, v: &mut IntMatrix, x: usize, y: usize, q: &BigInt| {
            for row in a.iter_mut() {
                let t = &row[y] - q * &row[x];
                row[y] = t;
            }
            for i in 0..c {
                let t = v.at(i, y) - q * v.at(i, x);
                v.set(i, y, t);
            }
        };

        for t in 0..r.min(c) {
            // bring some nonzero entry of the trailing submatrix to (t, t)
            let pivot = (t..r)
                .flat_map(|i| (t..c).map(move |j| (i, j)))
                .filter(|&(i, j)| !a[i][j].is_zero())
                .min_by_key(|&(i, j)| a[i][j].clone().abs());
            let (pi, pj) = match pivot {
                Some(p) => p,
                None => break,
            };
            if pi != t {
                a.swap(pi, t);
            }
            if pj != t {
                swap_cols(&mut a, &mut v, pj, t);
            }

            loop {
                if let Some(i) = (t + 1..r).find(|&i| !a[i][t].is_zero()) {
                    let q = &a[i][t] / &a[t][t];
                    for j in 0..c {
                        let x = &a[i][j] - &q * &a[t][j];
                        a[i][j] = x;
                    }
                    if !a[i][t].is_zero() {
                        a.swap(t, i);
                    }
                    continue;
                }
                if let Some(j) = (t + 1..c).find(|&j| !a[t][j].is_zero()) {
                    let q = &a[t][j] / &a[t][t];
                    add_col(&mut a, &mut v, t, j, &q);
                    if !a[t][j].is_zero() {
                        swap_cols(&mut a, &mut v, t, j);
                    }
                    continue;
                }
                break;
            }
        }

        let mut basis = Vec::new();
        for j in 0..c {
            if (0..r).all(|i| a[i][j].is_zero()) {
                basis.push(v.column(j));
            }
        }
        for b in &basis {
            debug_assert!(self.mul_vec(b).iter().all(|x| x.is_zero()));
        }
        hermite_normal_form(&basis)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix({}x{}) {}", self.rows, self.cols, self)
    }
}

/// Evaluate a polynomial at a square matrix by Horner's scheme.
pub fn poly_eval_matrix(p: &IntPoly, m: &IntMatrix) -> Result<IntMatrix> {
    let n = if m.is_square() {
        m.rows()
    } else {
        return Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    };
    let coeffs = p.coeffs();
    let mut acc = IntMatrix::zeros(n, n);
    for c in coeffs.iter().rev() {
        acc = m.mul(&acc);
        for i in 0..n {
            let v = acc.at(i, i) + c;
            acc.set(i, i, v);
        }
    }
    Ok(acc)
}

/// The bilinear form value `u^T form v`.
pub fn bilinear(form: &IntMatrix, u: &[BigInt], v: &[BigInt]) -> BigInt {
    assert_eq!(form.rows(), u.len());
    assert_eq!(form.cols(), v.len());
    let mut acc = BigInt::zero();
    for i in 0..u.len() {
        if u[i].is_zero() {
            continue;
        }
        let mut row = BigInt::zero();
        for j in 0..v.len() {
            if !v[j].is_zero() {
                row += form.at(i, j) * &v[j];
            }
        }
        acc += &u[i] * row;
    }
    acc
}

/// Canonical Hermite normal form of the row span of the given vectors:
/// integer row echelon with positive pivots and the entries above each pivot
/// reduced into `[0, pivot)`.  Two inputs spanning the same lattice produce
/// identical output.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let ncols = rows[0].len();
    assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
    let mut mat: Vec<Vec<BigInt>> = rows.to_vec();
    let nrows = mat.len();
    let mut pivot_row = 0;
    for col in 0..ncols {
        if pivot_row >= nrows {
            break;
        }
        loop {
            let best = (pivot_row..nrows)
                .filter(|&i| !mat[i][col].is_zero())
                .min_by_key(|&i| mat[i][col].clone().abs());
            let r = match best {
                Some(r) => r,
                None => break,
            };
            mat.swap(pivot_row, r);
            let mut clean = true;
            for i in pivot_row + 1..nrows {
                if mat[i][col].is_zero() {
                    continue;
                }
                let q = mat[i][col].div_floor(&mat[pivot_row][col]);
                for j in 0..ncols {
                    let x = &mat[i][j] - &q * &mat[pivot_row][j];
                    mat[i][j] = x;
                }
                if !mat[i][col].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if mat[pivot_row][col].is_zero() {
            continue;
        }
        if mat[pivot_row][col].is_negative() {
            for j in 0..ncols {
                let x = -&mat[pivot_row][j];
                mat[pivot_row][j] = x;
            }
        }
        for i in 0..pivot_row {
            let q = mat[i][col].div_floor(&mat[pivot_row][col]);
            if q.is_zero() {
                continue;
            }
            for j in 0..ncols {
                let x = &mat[i][j] - &q * &mat[pivot_row][j];
                mat[i][j] = x;
            }
        }
        pivot_row += 1;
    }
    mat.truncate(pivot_row);
    mat
}
