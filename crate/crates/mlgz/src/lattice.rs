//! Milnor lattice models: construction from a Seifert matrix, ADE Dynkin
//! models with Coxeter monodromy, companion models of cyclotomic products,
//! suspension, and reflections.
//!
//! Conventions, fixed once and checked by the Coxeter cross-check below:
//! matrices act on column vectors; the Seifert matrix entry `L[i][j]` is the
//! form value on the (i, j) basis pair; an automorphism A preserves L as
//! `A^T L A = L`.  The canonical ADE models live at ambient parameter n = 4,
//! where the intersection form is the positive definite Dynkin Gram matrix
//! with diagonal 2, and the Seifert matrix is lower triangular with diagonal
//! -1 and `L[j][i] = -I[i][j]` below it.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::cyclo::CycloFactorization;
use crate::matrix::IntMatrix;
use crate::{cyclo, Error, Result};

/// A rank-mu lattice with Seifert form, the monodromy and intersection form
/// it determines, and the ambient variable parameter n (the function has
/// n + 1 variables).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MilnorLattice {
    mu: usize,
    n: u32,
    seifert: IntMatrix,
    monodromy: IntMatrix,
    intersection: IntMatrix,
}

impl MilnorLattice {
    pub fn rank(&self) -> usize {
        self.mu
    }

    pub fn ambient_n(&self) -> u32 {
        self.n
    }

    pub fn seifert(&self) -> &IntMatrix {
        &self.seifert
    }

    pub fn monodromy(&self) -> &IntMatrix {
        &self.monodromy
    }

    pub fn intersection(&self) -> &IntMatrix {
        &self.intersection
    }

    /// The cyclotomic factorization of the characteristic polynomial of the
    /// monodromy, when the monodromy is quasiunipotent.
    pub fn monodromy_factorization(&self) -> Result<CycloFactorization> {
        cyclo::cyclotomic_factor(&self.monodromy.char_poly()?)
    }

    /// Check every structural invariant of the tuple.  Constructors already
    /// enforce these; the method exists so tests can re-assert them on
    /// transformed lattices.
    pub fn invariants_hold(&self) -> bool {
        let sign = parity_sign(self.n);
        let l = &self.seifert;
        let lt = l.transpose();
        let det_ok = l
            .det_exact()
            .map(|d| d.abs().is_one())
            .unwrap_or(false);
        let m_ok = self.monodromy.transpose().mul(l) == lt.scale(&sign);
        let i_ok = self.intersection == l.neg().add(&lt.scale(&sign));
        let sym_sign = if self.n % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        let i_sym = self.intersection.transpose() == self.intersection.scale(&sym_sign);
        let m_preserves_l = self.monodromy.transpose().mul(l).mul(&self.monodromy) == *l;
        let m_preserves_i =
            self.monodromy.transpose().mul(&self.intersection).mul(&self.monodromy)
                == self.intersection;
        det_ok && m_ok && i_ok && i_sym && m_preserves_l && m_preserves_i
    }
}

fn parity_sign(n: u32) -> BigInt {
    if n % 2 == 0 {
        -BigInt::one()
    } else {
        BigInt::one()
    }
}

/// Build the full lattice tuple from a unimodular Seifert matrix: the
/// monodromy is `(-1)^(n+1) (L^T)^(-1) L` and the intersection form is
/// `-L + (-1)^(n+1) L^T`.
pub fn make_from_seifert(seifert: IntMatrix, n: u32) -> Result<MilnorLattice> {
    if !seifert.is_square() {
        return Err(Error::NonSquare {
            rows: seifert.rows(),
            cols: seifert.cols(),
        });
    }
    let det = seifert.det_exact()?;
    if !det.clone().abs().is_one() {
        return Err(Error::NotUnimodular { det });
    }
    let sign = parity_sign(n);
    let lt = seifert.transpose();
    let monodromy = lt.inverse_unimodular()?.mul(&seifert).scale(&sign);
    let intersection = seifert.neg().add(&lt.scale(&sign));
    let ml = MilnorLattice {
        mu: seifert.rows(),
        n,
        seifert,
        monodromy,
        intersection,
    };
    assert!(ml.invariants_hold(), "lattice invariants must hold by construction");
    Ok(ml)
}

/// The three simple families.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AdeFamily {
    A,
    D,
    E,
}

impl AdeFamily {
    pub fn letter(self) -> char {
        match self {
            AdeFamily::A => 'A',
            AdeFamily::D => 'D',
            AdeFamily::E => 'E',
        }
    }
}

impl FromStr for AdeFamily {
    type Err = ();

    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        match s {
            "A" | "a" => Ok(AdeFamily::A),
            "D" | "d" => Ok(AdeFamily::D),
            "E" | "e" => Ok(AdeFamily::E),
            _ => Err(()),
        }
    }
}

impl fmt::Display for AdeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Positive definite Dynkin Gram matrix of the family.  A is the path; D is
/// the path on the first mu - 1 nodes with the last node forked off node
/// mu - 2; E is the path on the first mu - 1 nodes with the last node
/// attached to node 3.
pub fn ade_gram(family: AdeFamily, mu: usize) -> Result<IntMatrix> {
    let supported = match family {
        AdeFamily::A => mu >= 1,
        AdeFamily::D => mu >= 4,
        AdeFamily::E => (6..=8).contains(&mu),
    };
    if !supported {
        return Err(Error::UnsupportedFamily {
            family: family.letter(),
            mu,
        });
    }
    let mut g = IntMatrix::zeros(mu, mu);
    for i in 0..mu {
        g.set(i, i, BigInt::from(2));
    }
    let edge = |g: &mut IntMatrix, i: usize, j: usize| {
        g.set(i, j, BigInt::from(-1));
        g.set(j, i, BigInt::from(-1));
    };
    match family {
        AdeFamily::A => {
            for i in 0..mu.saturating_sub(1) {
                edge(&mut g, i, i + 1);
            }
        }
        AdeFamily::D => {
            for i in 0..mu - 2 {
                edge(&mut g, i, i + 1);
            }
            edge(&mut g, mu - 3, mu - 1);
        }
        AdeFamily::E => {
            for i in 0..mu - 2 {
                edge(&mut g, i, i + 1);
            }
            edge(&mut g, 2, mu - 1);
        }
    }
    Ok(g)
}

/// Canonical ADE Milnor lattice at n = 4: Dynkin intersection form, lower
/// triangular Seifert matrix, Coxeter monodromy.
pub fn ade_milnor(family: AdeFamily, mu: usize) -> Result<MilnorLattice> {
    let gram = ade_gram(family, mu)?;
    let seifert = IntMatrix::from_fn(mu, mu, |i, j| {
        if i == j {
            -BigInt::one()
        } else if i > j {
            -gram.at(j, i).clone()
        } else {
            BigInt::from(0)
        }
    });
    let ml = make_from_seifert(seifert, 4)?;
    debug_assert_eq!(ml.intersection, gram);
    Ok(ml)
}

/// A monodromy module without Seifert form: the companion model of a
/// cyclotomic product, with the first basis vector as certified cyclic
/// generator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonodromyModule {
    pub mu: usize,
    pub monodromy: IntMatrix,
    pub cyclic_gen: Vec<BigInt>,
    pub factorization: CycloFactorization,
}

/// Companion model of a nonempty cyclotomic factorization.  For a companion
/// matrix the first standard basis vector is a cyclic generator, and the
/// orbit matrix is the identity, so the certificate is automatic.
pub fn companion_module(f: &CycloFactorization) -> Result<MonodromyModule> {
    if f.is_empty() {
        return Err(Error::EmptyFactorization);
    }
    let p = f.expand();
    let mu = p.degree().unwrap();
    let monodromy = p.companion();
    let mut cyclic_gen = vec![BigInt::from(0); mu];
    cyclic_gen[0] = BigInt::one();
    debug_assert_eq!(monodromy.char_poly().unwrap(), p);
    Ok(MonodromyModule {
        mu,
        monodromy,
        cyclic_gen,
        factorization: f.clone(),
    })
}

/// Suspension: L picks up the sign (-1)^n, the ambient parameter increases
/// by one, and monodromy and intersection form are recomputed at the new
/// parity.  The recomputed monodromy must equal the negated one.
pub fn suspend(ml: &MilnorLattice) -> MilnorLattice {
    let sign = if ml.n % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    let suspended = make_from_seifert(ml.seifert.scale(&sign), ml.n + 1)
        .expect("suspension preserves unimodularity");
    assert_eq!(
        suspended.monodromy,
        ml.monodromy.neg(),
        "suspension must negate the monodromy"
    );
    suspended
}

/// Matrix of the reflection x -> x - I(x, e) e in the basis vector with the
/// given index; requires the form to be symmetric with I(e, e) = 2.
pub fn reflection_matrix(intersection: &IntMatrix, e: usize) -> Result<IntMatrix> {
    let mu = intersection.rows();
    assert!(intersection.is_square());
    assert_eq!(intersection, &intersection.transpose(), "form must be symmetric");
    if *intersection.at(e, e) != BigInt::from(2) {
        return Err(Error::BadDiagonal { index: e });
    }
    let mut s = IntMatrix::identity(mu);
    for j in 0..mu {
        let v = s.at(e, j) - intersection.at(j, e);
        s.set(e, j, v);
    }
    Ok(s)
}

/// Coxeter transformation of a symmetric form with diagonal 2: the product
/// of all basis reflections, applying the one in the last basis vector
/// first.
pub fn coxeter_matrix(intersection: &IntMatrix) -> Result<IntMatrix> {
    let mu = intersection.rows();
    let mut acc = IntMatrix::identity(mu);
    for e in 0..mu {
        acc = acc.mul(&reflection_matrix(intersection, e)?);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::cyclotomic_factor;
    use crate::poly::IntPoly;

    fn a2() -> MilnorLattice {
        ade_milnor(AdeFamily::A, 2).unwrap()
    }

    #[test]
    fn seifert_to_monodromy_hand_example() {
        let l = IntMatrix::from_rows(&[&[-1, 0], &[1, -1]]);
        let ml = make_from_seifert(l, 4).unwrap();
        assert_eq!(ml.monodromy(), &IntMatrix::from_rows(&[&[0, -1], &[1, -1]]));
        assert_eq!(
            ml.intersection(),
            &IntMatrix::from_rows(&[&[2, -1], &[-1, 2]])
        );
    }

    #[test]
    fn rank_one_model() {
        let l = IntMatrix::from_rows(&[&[-1]]);
        let ml = make_from_seifert(l, 4).unwrap();
        assert_eq!(ml.monodromy(), &IntMatrix::from_rows(&[&[-1]]));
        assert_eq!(ml.intersection(), &IntMatrix::from_rows(&[&[2]]));
        let f = ml.monodromy_factorization().unwrap();
        assert_eq!(f, CycloFactorization::from_pairs(&[(2, 1)]));
    }

    #[test]
    fn non_unimodular_rejected() {
        let l = IntMatrix::from_rows(&[&[2, 0], &[0, 1]]);
        assert!(matches!(
            make_from_seifert(l, 4),
            Err(Error::NotUnimodular { .. })
        ));
    }

    #[test]
    fn ade_models_match_quoted_table() {
        let a2 = a2();
        assert_eq!(a2.intersection(), &IntMatrix::from_rows(&[&[2, -1], &[-1, 2]]));
        assert_eq!(a2.seifert(), &IntMatrix::from_rows(&[&[-1, 0], &[1, -1]]));
        assert_eq!(a2.monodromy(), &IntMatrix::from_rows(&[&[0, -1], &[1, -1]]));
        assert_eq!(
            a2.monodromy_factorization().unwrap(),
            CycloFactorization::from_pairs(&[(3, 1)])
        );

        let d4 = ade_milnor(AdeFamily::D, 4).unwrap();
        assert_eq!(
            d4.monodromy_factorization().unwrap(),
            CycloFactorization::from_pairs(&[(6, 1), (2, 2)])
        );

        let e8 = ade_milnor(AdeFamily::E, 8).unwrap();
        assert_eq!(
            e8.monodromy_factorization().unwrap(),
            CycloFactorization::from_pairs(&[(30, 1)])
        );
        // monodromy order 30
        assert!(e8.monodromy().pow(30).is_identity());
        assert!(!e8.monodromy().pow(15).is_identity());
    }

    #[test]
    fn ade_family_characteristic_polynomials() {
        // A_mu: (t^(mu+1) - 1)/(t - 1); D_mu: (t^(mu-1) + 1)(t + 1)
        for mu in 1..=10usize {
            let ml = ade_milnor(AdeFamily::A, mu).unwrap();
            let expected = IntPoly::x_pow_minus_one(mu + 1)
                .exact_div(&IntPoly::from_i64(&[-1, 1]))
                .unwrap();
            assert_eq!(ml.monodromy().char_poly().unwrap(), expected, "A_{mu}");
        }
        for mu in 4..=10usize {
            let ml = ade_milnor(AdeFamily::D, mu).unwrap();
            let mut tm = vec![0i64; mu];
            tm[0] = 1;
            tm[mu - 1] = 1;
            let mut coeffs = vec![BigInt::from(0); mu];
            coeffs[0] = BigInt::one();
            coeffs[mu - 1] = BigInt::one();
            let expected = IntPoly::from_coeffs(coeffs).mul(&IntPoly::from_i64(&[1, 1]));
            assert_eq!(ml.monodromy().char_poly().unwrap(), expected, "D_{mu}");
        }
        let expect = [
            (6usize, vec![(12u64, 1u32), (3, 1)]),
            (7, vec![(18, 1), (2, 1)]),
            (8, vec![(30, 1)]),
        ];
        for (mu, pairs) in expect {
            let ml = ade_milnor(AdeFamily::E, mu).unwrap();
            assert_eq!(
                cyclotomic_factor(&ml.monodromy().char_poly().unwrap()).unwrap(),
                CycloFactorization::from_pairs(&pairs),
                "E_{mu}"
            );
        }
    }

    #[test]
    fn unsupported_families_rejected() {
        assert!(matches!(
            ade_milnor(AdeFamily::D, 3),
            Err(Error::UnsupportedFamily { .. })
        ));
        assert!(matches!(
            ade_milnor(AdeFamily::E, 9),
            Err(Error::UnsupportedFamily { .. })
        ));
    }

    #[test]
    fn companion_module_cases() {
        let m = companion_module(&CycloFactorization::from_pairs(&[(3, 1)])).unwrap();
        assert_eq!(m.mu, 2);
        assert_eq!(m.monodromy, IntMatrix::from_rows(&[&[0, -1], &[1, -1]]));
        assert_eq!(m.cyclic_gen, vec![BigInt::one(), BigInt::from(0)]);

        let m = companion_module(&CycloFactorization::from_pairs(&[(12, 1), (3, 1)])).unwrap();
        assert_eq!(m.mu, 6);

        // cyclic certificate: orbit matrix has determinant +-1
        let cols: Vec<Vec<BigInt>> = (0..m.mu as u64)
            .map(|i| m.monodromy.pow(i).mul_vec(&m.cyclic_gen))
            .collect();
        let orbit = IntMatrix::from_columns(&cols);
        assert!(orbit.det_exact().unwrap().abs().is_one());

        assert_eq!(
            companion_module(&CycloFactorization::from_pairs(&[])),
            Err(Error::EmptyFactorization)
        );
    }

    #[test]
    fn suspension_signs() {
        let a2 = a2();
        let s = suspend(&a2);
        assert_eq!(s.ambient_n(), 5);
        assert_eq!(s.seifert(), a2.seifert()); // (-1)^4 = +1
        assert_eq!(s.monodromy(), &a2.monodromy().neg());
        assert_eq!(
            s.monodromy_factorization().unwrap(),
            CycloFactorization::from_pairs(&[(6, 1)])
        );
        assert!(s.invariants_hold());

        let ss = suspend(&s);
        assert_eq!(ss.seifert(), &a2.seifert().neg());
        assert_eq!(ss.monodromy(), a2.monodromy());
        assert_eq!(ss.intersection(), &a2.intersection().neg());

        let s4 = suspend(&suspend(&ss));
        assert_eq!(s4.seifert(), a2.seifert());
        assert_eq!(s4.monodromy(), a2.monodromy());
        assert_eq!(s4.intersection(), a2.intersection());
        assert_eq!(s4.ambient_n(), 8);
    }

    #[test]
    fn reflections_are_isometric_involutions() {
        let gram = ade_gram(AdeFamily::A, 2).unwrap();
        let s = reflection_matrix(&gram, 0).unwrap();
        // e1 -> -e1, e2 -> e2 + e1
        assert_eq!(s, IntMatrix::from_rows(&[&[-1, 1], &[0, 1]]));
        for fam in [AdeFamily::A, AdeFamily::D, AdeFamily::E] {
            let mu = match fam {
                AdeFamily::A => 5,
                AdeFamily::D => 5,
                AdeFamily::E => 6,
            };
            let gram = ade_gram(fam, mu).unwrap();
            for e in 0..mu {
                let s = reflection_matrix(&gram, e).unwrap();
                assert!(s.mul(&s).is_identity());
                assert_eq!(s.transpose().mul(&gram).mul(&s), gram);
            }
        }
    }

    #[test]
    fn reflection_needs_diagonal_two() {
        let gram = IntMatrix::from_rows(&[&[4, 2], &[2, 4]]);
        assert_eq!(
            reflection_matrix(&gram, 0),
            Err(Error::BadDiagonal { index: 0 })
        );
    }

    #[test]
    fn coxeter_matches_seifert_monodromy() {
        let a2 = a2();
        let cox = coxeter_matrix(a2.intersection()).unwrap();
        assert_eq!(cox, IntMatrix::from_rows(&[&[0, -1], &[1, -1]]));
        assert_eq!(&cox, a2.monodromy());

        let a1 = ade_milnor(AdeFamily::A, 1).unwrap();
        assert_eq!(
            coxeter_matrix(a1.intersection()).unwrap(),
            IntMatrix::from_rows(&[&[-1]])
        );

        let e8 = ade_milnor(AdeFamily::E, 8).unwrap();
        let cox = coxeter_matrix(e8.intersection()).unwrap();
        assert_eq!(&cox, e8.monodromy());
        let mut order = 0u64;
        for k in 1..=30u64 {
            if cox.pow(k).is_identity() {
                order = k;
                break;
            }
        }
        assert_eq!(order, 30);
    }
}
