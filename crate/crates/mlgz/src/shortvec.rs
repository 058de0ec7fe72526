//! Exact short-vector enumeration for positive definite integer forms:
//! rational LDL^T decomposition plus recursive interval bounding, with all
//! interval endpoints computed through exact integer square roots.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::matrix::IntMatrix;
use crate::ratutil::{floor_center_plus_sqrt, rat_int};

pub(crate) enum Definiteness {
    Positive,
    Negative,
    Indefinite,
}

/// LDL^T data of a positive definite form: positive pivots d and the strictly
/// upper unit-triangular coefficients u, so Q(x) = sum_i d_i (x_i + sum_{j>i}
/// u_ij x_j)^2.  None when the form is not positive definite.
fn ldl(gram: &IntMatrix) -> Option<(Vec<BigRational>, Vec<Vec<BigRational>>)> {
    let n = gram.rows();
    assert!(gram.is_square());
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| rat_int(gram.at(i, j).clone())).collect())
        .collect();
    let mut d = Vec::with_capacity(n);
    let mut u = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        let pivot = a[i][i].clone();
        if !pivot.is_positive() {
            return None;
        }
        for j in i + 1..n {
            u[i][j] = &a[i][j] / &pivot;
        }
        for r in i + 1..n {
            for c in i + 1..n {
                let sub = &a[i][r] * &u[i][c];
                a[r][c] -= sub;
            }
        }
        d.push(pivot);
    }
    Some((d, u))
}

pub(crate) fn definiteness(gram: &IntMatrix) -> Definiteness {
    if ldl(gram).is_some() {
        Definiteness::Positive
    } else if ldl(&gram.neg()).is_some() {
        Definiteness::Negative
    } else {
        Definiteness::Indefinite
    }
}

pub(crate) fn is_positive_definite(gram: &IntMatrix) -> bool {
    matches!(definiteness(gram), Definiteness::Positive)
}

/// All nonzero integer vectors with Q(x) <= bound for a positive definite
/// form, together with their exact norms, sorted by (norm, entries).
///
/// Panics if the form is not positive definite (callers check first).
pub(crate) fn enumerate_norm_at_most(
    gram: &IntMatrix,
    bound: &BigInt,
) -> Vec<(Vec<BigInt>, BigInt)> {
    let n = gram.rows();
    let (d, u) = ldl(gram).expect("form must be positive definite");
    let bound_rat = rat_int(bound.clone());
    let mut out = Vec::new();
    if bound.is_negative() || n == 0 {
        return out;
    }
    // components are filled from the last coordinate down
    let mut x = vec![BigInt::zero(); n];
    // used[i] = d_i (x_i + s_i)^2 for levels already assigned
    let mut used = vec![BigRational::zero(); n];
    let mut level = n;
    recurse(
        gram, &d, &u, &bound_rat, &mut x, &mut used, &mut level, &mut out,
    );
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    out
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    gram: &IntMatrix,
    d: &[BigRational],
    u: &[Vec<BigRational>],
    bound: &BigRational,
    x: &mut Vec<BigInt>,
    used: &mut Vec<BigRational>,
    level: &mut usize,
    out: &mut Vec<(Vec<BigInt>, BigInt)>,
) {
    let n = d.len();
    if *level == 0 {
        if x.iter().any(|v| !v.is_zero()) {
            let norm = crate::matrix::bilinear(gram, x, x);
            out.push((x.clone(), norm));
        }
        return;
    }
    let i = *level - 1;
    let remaining = {
        let spent: BigRational = used[*level..n].iter().cloned().sum();
        bound - spent
    };
    if remaining.is_negative() {
        return;
    }
    let shift: BigRational = (i + 1..n).map(|j| &u[i][j] * rat_int(x[j].clone())).sum();
    let radicand = &remaining / &d[i];
    let hi = floor_center_plus_sqrt(&(-shift.clone()), &radicand);
    let lo = -floor_center_plus_sqrt(&shift, &radicand);
    let mut v = lo;
    while v <= hi {
        x[i] = v.clone();
        let centered = rat_int(v.clone()) + &shift;
        used[i] = &d[i] * &centered * &centered;
        *level -= 1;
        recurse(gram, d, u, bound, x, used, level, out);
        *level += 1;
        v += 1;
    }
    x[i] = BigInt::zero();
    used[i] = BigRational::zero();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{ade_gram, AdeFamily};

    fn count_norm(gram: &IntMatrix, bound: i64, norm: i64) -> usize {
        enumerate_norm_at_most(gram, &BigInt::from(bound))
            .iter()
            .filter(|(_, q)| *q == BigInt::from(norm))
            .count()
    }

    #[test]
    fn root_counts_of_small_lattices() {
        // root systems: A2 has 6 roots, A3 12, D4 24, E6 72, E8 240
        for (fam, mu, roots) in [
            (AdeFamily::A, 2usize, 6usize),
            (AdeFamily::A, 3, 12),
            (AdeFamily::D, 4, 24),
            (AdeFamily::E, 6, 72),
            (AdeFamily::E, 8, 240),
        ] {
            let g = ade_gram(fam, mu).unwrap();
            assert_eq!(count_norm(&g, 2, 2), roots, "{fam:?}{mu}");
        }
    }

    #[test]
    fn identity_form_vectors() {
        let id2 = IntMatrix::identity(2);
        // norm <= 2: (+-1, 0), (0, +-1), (+-1, +-1)
        assert_eq!(enumerate_norm_at_most(&id2, &BigInt::from(2)).len(), 8);
        assert_eq!(count_norm(&id2, 2, 1), 4);
    }

    #[test]
    fn enumeration_is_exact_and_sorted() {
        let g = ade_gram(AdeFamily::A, 2).unwrap();
        let vs = enumerate_norm_at_most(&g, &BigInt::from(6));
        for (v, q) in &vs {
            assert_eq!(crate::matrix::bilinear(&g, v, v), *q);
            assert!(*q <= BigInt::from(6) && q.is_positive());
        }
        let mut sorted = vs.clone();
        sorted.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        assert_eq!(vs, sorted);
    }

    #[test]
    fn definiteness_detection() {
        let pos = ade_gram(AdeFamily::A, 3).unwrap();
        assert!(is_positive_definite(&pos));
        assert!(matches!(definiteness(&pos.neg()), Definiteness::Negative));
        let indef = IntMatrix::from_rows(&[&[1, 0], &[0, -1]]);
        assert!(matches!(definiteness(&indef), Definiteness::Indefinite));
        let degenerate = IntMatrix::from_rows(&[&[1, 1], &[1, 1]]);
        assert!(matches!(definiteness(&degenerate), Definiteness::Indefinite));
    }
}
