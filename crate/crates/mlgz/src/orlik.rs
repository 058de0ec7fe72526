//! Search for cyclic decompositions of a lattice under its monodromy: given
//! a divisor chain p_1, ..., p_l multiplying to the characteristic
//! polynomial, find generators a_1, ..., a_l whose monodromy orbits
//! concatenate to a unimodular basis, block i carrying characteristic
//! polynomial p_i.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::cyclo::CycloFactorization;
use crate::lattice::MilnorLattice;
use crate::matrix::{poly_eval_matrix, IntMatrix};
use crate::poly::IntPoly;
use crate::shortvec;
use crate::{Error, Result};

/// Default candidate norm bound for the generator search.
pub const DEFAULT_ORLIK_NORM_BOUND: u32 = 6;

/// Canonical divisor-chain split of a cyclotomic product: block j collects
/// every factor of multiplicity at least j, so consecutive blocks divide
/// each other and the product restores the polynomial.
pub fn split_by_multiplicity(f: &CycloFactorization) -> Vec<IntPoly> {
    let max_mult = f.factors().map(|(_, mult)| mult).max().unwrap_or(0);
    (1..=max_mult)
        .map(|j| {
            let mut p = IntPoly::one();
            for (m, mult) in f.factors() {
                if mult >= j {
                    p = p.mul(&crate::cyclo::cyclotomic_poly(m));
                }
            }
            p
        })
        .collect()
}

/// Candidate ordering for the generator search: by norm, then support size,
/// then reverse-lexicographically on the entries, so standard basis vectors
/// come before sums.  Deterministic across runs and platforms.
fn candidate_order(a: &(Vec<BigInt>, BigInt), b: &(Vec<BigInt>, BigInt)) -> Ordering {
    let support = |v: &[BigInt]| v.iter().filter(|x| !x.is_zero()).count();
    a.1.cmp(&b.1)
        .then_with(|| support(&a.0).cmp(&support(&b.0)))
        .then_with(|| b.0.cmp(&a.0))
}

/// Bounded search for cyclic-block generators.  Candidates are the vectors
/// of intersection norm at most `norm_bound`, tried in the canonical order
/// above; the first tuple whose concatenated orbit matrix is unimodular
/// wins.  `NotFound` carries the exhausted bound and is not a disproof.
pub fn orlik_cyclic_search(
    ml: &MilnorLattice,
    split: &[IntPoly],
    norm_bound: u32,
) -> Result<Vec<Vec<BigInt>>> {
    let mu = ml.rank();
    let monodromy = ml.monodromy();
    let char_poly = monodromy.char_poly()?;
    if split.is_empty() || split.iter().any(|p| p.degree().unwrap_or(0) == 0) {
        return Err(Error::BadSplit);
    }
    let product = split.iter().fold(IntPoly::one(), |acc, p| acc.mul(p));
    if product != char_poly {
        return Err(Error::BadSplit);
    }
    for w in split.windows(2) {
        if !w[1].divides(&w[0]) {
            return Err(Error::BadSplit);
        }
    }
    if !shortvec::is_positive_definite(ml.intersection()) {
        return Err(Error::IndefiniteForm);
    }

    let mut cands = shortvec::enumerate_norm_at_most(ml.intersection(), &BigInt::from(norm_bound));
    cands.sort_by(candidate_order);
    let cands: Vec<Vec<BigInt>> = cands.into_iter().map(|(v, _)| v).collect();

    // per-block candidates: annihilated by the block polynomial
    let block_cands: Vec<Vec<&Vec<BigInt>>> = split
        .iter()
        .map(|p| {
            let pm = poly_eval_matrix(p, monodromy).expect("monodromy is square");
            cands
                .iter()
                .filter(|v| pm.mul_vec(v).iter().all(|x| x.is_zero()))
                .collect()
        })
        .collect();

    let degrees: Vec<usize> = split.iter().map(|p| p.degree().unwrap()).collect();
    let mut chosen: Vec<&Vec<BigInt>> = Vec::with_capacity(split.len());
    let found = search_blocks(monodromy, &block_cands, &degrees, mu, &mut chosen);
    let generators = match found {
        Some(g) => g,
        None => return Err(Error::NotFound { bound: norm_bound }),
    };

    // re-verify: the basis change conjugates the monodromy into the direct
    // sum of the block companion matrices
    let basis = orbit_basis(monodromy, &generators, &degrees);
    let b = IntMatrix::from_columns(&basis);
    assert!(b.det_exact()?.abs().is_one());
    let conjugated = b.inverse_unimodular()?.mul(monodromy).mul(&b);
    let mut expected = IntMatrix::zeros(mu, mu);
    let mut offset = 0;
    for p in split {
        let c = p.companion();
        for i in 0..c.rows() {
            for j in 0..c.cols() {
                expected.set(offset + i, offset + j, c.at(i, j).clone());
            }
        }
        offset += c.rows();
    }
    assert_eq!(conjugated, expected, "blocks must carry the split polynomials");
    Ok(generators)
}

fn orbit_basis(
    monodromy: &IntMatrix,
    generators: &[Vec<BigInt>],
    degrees: &[usize],
) -> Vec<Vec<BigInt>> {
    let mut cols = Vec::new();
    for (gen, &deg) in generators.iter().zip(degrees) {
        let mut v = gen.clone();
        for _ in 0..deg {
            cols.push(v.clone());
            v = monodromy.mul_vec(&v);
        }
    }
    cols
}

fn search_blocks<'a>(
    monodromy: &IntMatrix,
    block_cands: &[Vec<&'a Vec<BigInt>>],
    degrees: &[usize],
    mu: usize,
    chosen: &mut Vec<&'a Vec<BigInt>>,
) -> Option<Vec<Vec<BigInt>>> {
    let block = chosen.len();
    if block == block_cands.len() {
        let generators: Vec<Vec<BigInt>> = chosen.iter().map(|v| (*v).clone()).collect();
        let basis = orbit_basis(monodromy, &generators, degrees);
        let b = IntMatrix::from_columns(&basis);
        debug_assert_eq!(b.rows(), mu);
        if b.det_exact().ok()?.abs().is_one() {
            return Some(generators);
        }
        return None;
    }
    for v in &block_cands[block] {
        chosen.push(v);
        if let Some(g) = search_blocks(monodromy, block_cands, degrees, mu, chosen) {
            return Some(g);
        }
        chosen.pop();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{ade_milnor, AdeFamily};
    use num_traits::One;

    #[test]
    fn split_of_d4() {
        let f = CycloFactorization::from_pairs(&[(6, 1), (2, 2)]);
        let split = split_by_multiplicity(&f);
        assert_eq!(split.len(), 2);
        // t^3 + 1 and t + 1
        assert_eq!(split[0], IntPoly::from_i64(&[1, 0, 0, 1]));
        assert_eq!(split[1], IntPoly::from_i64(&[1, 1]));
    }

    #[test]
    fn a2_generator_is_first_basis_vector() {
        let a2 = ade_milnor(AdeFamily::A, 2).unwrap();
        let split = split_by_multiplicity(&a2.monodromy_factorization().unwrap());
        let gens = orlik_cyclic_search(&a2, &split, DEFAULT_ORLIK_NORM_BOUND).unwrap();
        assert_eq!(gens, vec![vec![BigInt::one(), BigInt::zero()]]);
    }

    #[test]
    fn d4_splits_with_second_generator_in_kernel() {
        let d4 = ade_milnor(AdeFamily::D, 4).unwrap();
        let split = split_by_multiplicity(&d4.monodromy_factorization().unwrap());
        let gens = orlik_cyclic_search(&d4, &split, DEFAULT_ORLIK_NORM_BOUND).unwrap();
        assert_eq!(gens.len(), 2);
        // a2 lies in ker(M + id)
        let mplus = d4.monodromy().add(&IntMatrix::identity(4));
        assert!(mplus.mul_vec(&gens[1]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn e8_generator_found_within_default_bound() {
        let e8 = ade_milnor(AdeFamily::E, 8).unwrap();
        let split = split_by_multiplicity(&e8.monodromy_factorization().unwrap());
        assert_eq!(split.len(), 1);
        let gens = orlik_cyclic_search(&e8, &split, DEFAULT_ORLIK_NORM_BOUND).unwrap();
        assert_eq!(gens.len(), 1);
    }

    #[test]
    fn bad_splits_rejected() {
        let a2 = ade_milnor(AdeFamily::A, 2).unwrap();
        // wrong product
        let bad = vec![IntPoly::from_i64(&[1, 1])];
        assert_eq!(
            orlik_cyclic_search(&a2, &bad, DEFAULT_ORLIK_NORM_BOUND),
            Err(Error::BadSplit)
        );
        // right product, broken divisor chain
        let a3 = ade_milnor(AdeFamily::A, 3).unwrap();
        let bad = vec![IntPoly::from_i64(&[1, 0, 1]), IntPoly::from_i64(&[1, 1])];
        assert_eq!(
            orlik_cyclic_search(&a3, &bad, DEFAULT_ORLIK_NORM_BOUND),
            Err(Error::BadSplit)
        );
    }
}
