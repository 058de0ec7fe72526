//! Cyclotomic polynomial arithmetic: the Moebius function, construction and
//! recognition of cyclotomic products, exact power traces by Newton's
//! identities, the minus-identity power test, the order of the signed
//! monodromy group, and the chain-witness search over eigenvalue orders.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::poly::IntPoly;
use crate::{Error, Result};

/// Moebius function: 0 when a squared prime divides m, otherwise (-1)^s for
/// m a product of s distinct primes.
pub fn moebius(m: u64) -> i64 {
    assert!(m >= 1);
    let mut m = m;
    let mut s = 0;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            s += 1;
        }
        p += 1;
    }
    if m > 1 {
        s += 1;
    }
    if s % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Euler's totient.
pub fn euler_phi(m: u64) -> u64 {
    assert!(m >= 1);
    let mut m = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result = result / p * (p - 1);
        }
        p += 1;
    }
    if m > 1 {
        result = result / m * (m - 1);
    }
    result
}

fn divisors(m: u64) -> Vec<u64> {
    let mut divs = Vec::new();
    let mut i = 1;
    while i * i <= m {
        if m % i == 0 {
            divs.push(i);
            if i != m / i {
                divs.push(m / i);
            }
        }
        i += 1;
    }
    divs.sort_unstable();
    divs
}

static CYCLO_MEMO: Mutex<BTreeMap<u64, IntPoly>> = Mutex::new(BTreeMap::new());

/// The m-th cyclotomic polynomial, by exact division of x^m - 1 by the
/// cyclotomic polynomials of the proper divisors of m.  Results are memoized
/// process-wide behind a mutex.
pub fn cyclotomic_poly(m: u64) -> IntPoly {
    assert!(m >= 1);
    let mut memo = CYCLO_MEMO.lock().unwrap();
    if let Some(p) = memo.get(&m) {
        return p.clone();
    }
    for d in divisors(m) {
        if memo.contains_key(&d) {
            continue;
        }
        let mut q = IntPoly::x_pow_minus_one(d as usize);
        for e in divisors(d) {
            if e == d {
                continue;
            }
            q = q
                .exact_div(&memo[&e])
                .expect("x^d - 1 is divisible by the cyclotomic polynomials of divisors");
        }
        debug_assert!(q.is_monic());
        debug_assert_eq!(q.degree(), Some(euler_phi(d) as usize));
        memo.insert(d, q);
    }
    memo[&m].clone()
}

/// A monic integer polynomial recorded as a product of cyclotomic
/// polynomials with multiplicities.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CycloFactorization {
    factors: BTreeMap<u64, u32>,
}

impl CycloFactorization {
    pub fn from_pairs(pairs: &[(u64, u32)]) -> Self {
        let mut factors = BTreeMap::new();
        for &(m, mult) in pairs {
            assert!(m >= 1 && mult >= 1);
            *factors.entry(m).or_insert(0) += mult;
        }
        CycloFactorization { factors }
    }

    pub fn factors(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.factors.iter().map(|(&m, &mult)| (m, mult))
    }

    pub fn multiplicity(&self, m: u64) -> u32 {
        self.factors.get(&m).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Total degree of the expansion.
    pub fn mu(&self) -> usize {
        self.factors()
            .map(|(m, mult)| euler_phi(m) as usize * mult as usize)
            .sum()
    }

    /// The set of eigenvalue orders present.
    pub fn ord_set(&self) -> BTreeSet<u64> {
        self.factors.keys().copied().collect()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.values().all(|&mult| mult == 1)
    }

    /// lcm of the orders present: the multiplicative order of any matrix
    /// with this (semisimple) spectrum.
    pub fn monodromy_order(&self) -> u64 {
        self.factors.keys().fold(1u64, |acc, &m| acc.lcm(&m))
    }

    pub fn expand(&self) -> IntPoly {
        let mut p = IntPoly::one();
        for (m, mult) in self.factors() {
            p = p.mul(&cyclotomic_poly(m).pow(mult));
        }
        p
    }
}

impl fmt::Display for CycloFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (&m, &mult) in self.factors.iter().rev() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "Phi{m}")?;
            if mult > 1 {
                write!(f, "^{mult}")?;
            }
        }
        Ok(())
    }
}

/// Recognize a monic polynomial with nonzero constant term as a product of
/// cyclotomic polynomials.  The factorization is unique when it exists.
pub fn cyclotomic_factor(p: &IntPoly) -> Result<CycloFactorization> {
    if !p.is_monic() || p.coeff(0).is_zero() {
        return Err(Error::NotCyclotomicProduct);
    }
    let mut rem = p.clone();
    let mut factors = BTreeMap::new();
    let mut m = 1u64;
    while rem.degree() != Some(0) {
        // phi(m) >= sqrt(m/2), so no cyclotomic factor of degree <= d can
        // have index beyond 2 d^2
        let deg = rem.degree().unwrap() as u64;
        if m > 2 * deg * deg + 1 {
            return Err(Error::NotCyclotomicProduct);
        }
        if euler_phi(m) <= deg {
            let phi_m = cyclotomic_poly(m);
            while let Some(q) = rem.exact_div(&phi_m) {
                rem = q;
                *factors.entry(m).or_insert(0) += 1;
                if rem.degree() == Some(0) {
                    break;
                }
            }
        }
        m += 1;
    }
    if !rem.is_one() {
        return Err(Error::NotCyclotomicProduct);
    }
    if factors.is_empty() {
        return Err(Error::EmptyFactorization);
    }
    Ok(CycloFactorization { factors })
}

/// Exact traces of the first k_max powers of any matrix whose characteristic
/// polynomial expands the factorization, by Newton's identities on the
/// expanded polynomial.
pub fn power_traces(f: &CycloFactorization, k_max: usize) -> Vec<BigInt> {
    assert!(k_max >= 1);
    let p = f.expand();
    let n = p.degree().unwrap_or(0);
    // elementary symmetric functions: e_i = (-1)^i * coeff of t^(n-i)
    let e: Vec<BigInt> = (0..=n)
        .map(|i| {
            let c = p.coeff(n - i);
            if i % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect();
    let mut traces: Vec<BigInt> = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let mut t = BigInt::zero();
        for i in 1..k.min(n + 1) {
            let term = &e[i] * &traces[k - i - 1];
            if i % 2 == 1 {
                t += term;
            } else {
                t -= term;
            }
        }
        if k <= n {
            let term = BigInt::from(k as u64) * &e[k];
            if k % 2 == 1 {
                t += term;
            } else {
                t -= term;
            }
        }
        traces.push(t);
    }
    // first trace is the Moebius sum over the spectrum
    let moebius_sum: i64 = f
        .factors()
        .map(|(m, mult)| mult as i64 * moebius(m))
        .sum();
    debug_assert_eq!(traces[0], BigInt::from(moebius_sum));
    traces
}

/// Smallest k with lambda^k = -1 for every eigenvalue order m in the set,
/// when one exists.  Writing each m = 2^a * odd, such a k exists iff all a
/// agree and are >= 1, and then k = lcm / 2.
pub fn exists_minus_id_power(orders: &BTreeSet<u64>) -> Option<u64> {
    assert!(!orders.is_empty());
    let mut two_adic = None;
    for &m in orders {
        let a = m.trailing_zeros();
        if a == 0 {
            return None;
        }
        match two_adic {
            None => two_adic = Some(a),
            Some(prev) if prev != a => return None,
            _ => {}
        }
    }
    let lcm = orders.iter().fold(1u64, |acc, &m| acc.lcm(&m));
    Some(lcm / 2)
}

/// Order of the group {+-M^k} for a finite-order monodromy with the given
/// spectrum: the monodromy order N when some power of M is -id, else 2N.
pub fn signed_power_group_order(f: &CycloFactorization) -> u64 {
    let n = f.monodromy_order();
    if f.is_empty() {
        return 2;
    }
    if exists_minus_id_power(&f.ord_set()).is_some() {
        n
    } else {
        2 * n
    }
}

/// Witness for the chain condition on an eigenvalue-order set: an ordering
/// m_1..m_N, prime-power division steps m_i = m_{j(i)} / p_i^{k_i}, and a
/// split i1 <= i2 marking the consecutive run of p = 2 steps; everywhere
/// else p >= 3 and j(i) may be any earlier index.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainWitness {
    /// ordering of the set; m_seq[0] is the root
    pub m_seq: Vec<u64>,
    /// j_seq[x] = j(i) for i = x + 2, 1-based
    pub j_seq: Vec<usize>,
    pub p_seq: Vec<u64>,
    pub k_seq: Vec<u32>,
    pub i1: usize,
    pub i2: usize,
}

impl ChainWitness {
    /// Re-verify every invariant against the order set the witness claims
    /// to cover.
    pub fn validate(&self, ord_set: &BTreeSet<u64>) -> bool {
        let n = self.m_seq.len();
        if self.m_seq.iter().copied().collect::<BTreeSet<_>>() != *ord_set {
            return false;
        }
        if !(1 <= self.i1 && self.i1 <= self.i2 && self.i2 <= n) {
            return false;
        }
        if self.j_seq.len() != n.saturating_sub(1)
            || self.p_seq.len() != n.saturating_sub(1)
            || self.k_seq.len() != n.saturating_sub(1)
        {
            return false;
        }
        for i in 2..=n {
            let (j, p, k) = (self.j_seq[i - 2], self.p_seq[i - 2], self.k_seq[i - 2]);
            if j >= i || k < 1 {
                return false;
            }
            let in_two_run = self.i1 + 1 <= i && i <= self.i2;
            if in_two_run {
                if p != 2 || j != i - 1 {
                    return false;
                }
            } else if p < 3 || !is_prime(p) {
                return false;
            }
            let step = p.checked_pow(k);
            match step {
                Some(s) if self.m_seq[j - 1] == self.m_seq[i - 1] * s => {}
                _ => return false,
            }
        }
        is_prime(2) && self.p_seq.iter().all(|&p| is_prime(p))
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `ratio` as a prime power p^k with k >= 1, if it is one.
fn prime_power(ratio: u64) -> Option<(u64, u32)> {
    if ratio < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= ratio {
        if ratio % p == 0 {
            let mut r = ratio;
            let mut k = 0;
            while r % p == 0 {
                r /= p;
                k += 1;
            }
            return (r == 1).then_some((p, k));
        }
        p += 1;
    }
    Some((ratio, 1))
}

const CHAIN_SEARCH_CAP: usize = 8;

/// Exhaustive backtracking search for a chain witness.  Orderings are tried
/// lexicographically with larger values first, splits with i1 as large as
/// possible and then i2 as small as possible, and each step takes the
/// smallest feasible source index; the first witness found is therefore
/// canonical across runs and platforms.
pub fn chain_condition_witness(ord_set: &BTreeSet<u64>) -> Result<ChainWitness> {
    assert!(!ord_set.is_empty());
    let n = ord_set.len();
    if n > CHAIN_SEARCH_CAP {
        return Err(Error::CapExceeded {
            size: n,
            cap: CHAIN_SEARCH_CAP,
        });
    }
    let mut pool: Vec<u64> = ord_set.iter().copied().collect();
    pool.reverse(); // descending
    let mut ordering = Vec::with_capacity(n);
    if let Some(w) = search_orderings(&mut pool, &mut ordering, ord_set) {
        debug_assert!(w.validate(ord_set));
        Ok(w)
    } else {
        Err(Error::NoWitness)
    }
}

fn search_orderings(
    pool: &mut Vec<u64>,
    ordering: &mut Vec<u64>,
    ord_set: &BTreeSet<u64>,
) -> Option<ChainWitness> {
    if pool.is_empty() {
        return try_splits(ordering, ord_set);
    }
    for idx in 0..pool.len() {
        let m = pool.remove(idx); // pool is descending, so larger m first
        ordering.push(m);
        if let Some(w) = search_orderings(pool, ordering, ord_set) {
            return Some(w);
        }
        ordering.pop();
        pool.insert(idx, m);
    }
    None
}

fn try_splits(ordering: &[u64], ord_set: &BTreeSet<u64>) -> Option<ChainWitness> {
    let n = ordering.len();
    for i1 in (1..=n).rev() {
        for i2 in i1..=n {
            if let Some(w) = assign_steps(ordering, i1, i2) {
                debug_assert!(w.validate(ord_set));
                return Some(w);
            }
        }
    }
    None
}

fn assign_steps(ordering: &[u64], i1: usize, i2: usize) -> Option<ChainWitness> {
    let n = ordering.len();
    let mut j_seq = Vec::with_capacity(n.saturating_sub(1));
    let mut p_seq = Vec::with_capacity(n.saturating_sub(1));
    let mut k_seq = Vec::with_capacity(n.saturating_sub(1));
    for i in 2..=n {
        let target = ordering[i - 1];
        if i1 + 1 <= i && i <= i2 {
            // consecutive p = 2 step from the immediate predecessor
            let src = ordering[i - 2];
            if src % target != 0 {
                return None;
            }
            let (p, k) = prime_power(src / target)?;
            if p != 2 {
                return None;
            }
            j_seq.push(i - 1);
            p_seq.push(2);
            k_seq.push(k);
        } else {
            // any earlier source, odd prime power ratio; smallest j wins
            let found = (1..i).find_map(|j| {
                let src = ordering[j - 1];
                if src % target != 0 {
                    return None;
                }
                let (p, k) = prime_power(src / target)?;
                (p >= 3).then_some((j, p, k))
            })?;
            j_seq.push(found.0);
            p_seq.push(found.1);
            k_seq.push(found.2);
        }
    }
    Some(ChainWitness {
        m_seq: ordering.to_vec(),
        j_seq,
        p_seq,
        k_seq,
        i1,
        i2,
    })
}

/// True iff the trace of the k-th monodromy power equals (-1)^(n+1) for all
/// 1 <= k <= mult - 1, the constraint every singularity of the given
/// multiplicity satisfies.
pub fn acampo_check(f: &CycloFactorization, n: u32, mult: u32) -> bool {
    assert!(mult >= 2);
    let expected = if n % 2 == 0 {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    if mult == 2 {
        // only t_1 is constrained
        return power_traces(f, 1)[0] == expected;
    }
    power_traces(f, (mult - 1) as usize)
        .iter()
        .all(|t| *t == expected)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moebius_values() {
        assert_eq!(moebius(1), 1);
        assert_eq!(moebius(4), 0);
        assert_eq!(moebius(42), -1); // 2 * 3 * 7
        assert_eq!(moebius(6), 1);
        assert_eq!(moebius(30), -1);
    }

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic_poly(1), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic_poly(2), IntPoly::from_i64(&[1, 1]));
        assert_eq!(cyclotomic_poly(12), IntPoly::from_i64(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn cyclotomic_product_over_divisors() {
        for m in 1..=120u64 {
            let mut prod = IntPoly::one();
            for d in divisors(m) {
                prod = prod.mul(&cyclotomic_poly(d));
            }
            assert_eq!(prod, IntPoly::x_pow_minus_one(m as usize), "m = {m}");
        }
    }

    #[test]
    fn factor_recognizes_products() {
        let p = cyclotomic_poly(12).mul(&cyclotomic_poly(3));
        let f = cyclotomic_factor(&p).unwrap();
        assert_eq!(f, CycloFactorization::from_pairs(&[(12, 1), (3, 1)]));
        assert_eq!(f.to_string(), "Phi12*Phi3");

        let sq = IntPoly::from_i64(&[1, 1]).mul(&IntPoly::from_i64(&[1, 1]));
        assert_eq!(
            cyclotomic_factor(&sq).unwrap(),
            CycloFactorization::from_pairs(&[(2, 2)])
        );

        let bad = IntPoly::from_i64(&[-2, 0, 1]);
        assert_eq!(cyclotomic_factor(&bad), Err(Error::NotCyclotomicProduct));
    }

    #[test]
    fn factor_requires_monic_nonzero_constant() {
        assert!(cyclotomic_factor(&IntPoly::from_i64(&[0, 1])).is_err());
        assert!(cyclotomic_factor(&IntPoly::from_i64(&[1, 2])).is_err());
    }

    /// Ramanujan-sum closed form for the trace of the k-th power of a matrix
    /// with spectrum = the primitive m-th roots of unity, each once.  Used
    /// only as an independent oracle.
    fn ramanujan_sum(m: u64, k: u64) -> i64 {
        let g = m.gcd(&k);
        let d = m / g;
        moebius(d) * (euler_phi(m) / euler_phi(d)) as i64
    }

    #[test]
    fn traces_match_ramanujan_oracle() {
        for m in 1..=40u64 {
            let f = CycloFactorization::from_pairs(&[(m, 1)]);
            let traces = power_traces(&f, 12);
            for k in 1..=12usize {
                assert_eq!(
                    traces[k - 1],
                    BigInt::from(ramanujan_sum(m, k as u64)),
                    "m = {m}, k = {k}"
                );
            }
        }
    }

    #[test]
    fn traces_examples() {
        let phi3 = CycloFactorization::from_pairs(&[(3, 1)]);
        assert_eq!(
            power_traces(&phi3, 2),
            vec![BigInt::from(-1), BigInt::from(-1)]
        );
        let phi1 = CycloFactorization::from_pairs(&[(1, 1)]);
        assert_eq!(power_traces(&phi1, 1), vec![BigInt::one()]);
        let phi42 = CycloFactorization::from_pairs(&[(42, 1)]);
        assert_eq!(power_traces(&phi42, 1), vec![BigInt::from(-1)]);
    }

    #[test]
    fn first_trace_is_moebius_sum() {
        for m in 1..=100u64 {
            let f = CycloFactorization::from_pairs(&[(m, 1)]);
            assert_eq!(power_traces(&f, 1)[0], BigInt::from(moebius(m)), "m = {m}");
        }
    }

    fn orders(xs: &[u64]) -> BTreeSet<u64> {
        xs.iter().copied().collect()
    }

    #[test]
    fn minus_id_power_cases() {
        assert_eq!(exists_minus_id_power(&orders(&[18, 2])), Some(9));
        assert_eq!(exists_minus_id_power(&orders(&[12, 3])), None);
        assert_eq!(exists_minus_id_power(&orders(&[2])), Some(1));
        assert_eq!(exists_minus_id_power(&orders(&[30])), Some(15));
        assert_eq!(exists_minus_id_power(&orders(&[42])), Some(21));
        // single even order: always m/2
        for m in (2..200u64).step_by(2) {
            assert_eq!(exists_minus_id_power(&orders(&[m])), Some(m / 2));
        }
        // single odd order: never
        for m in (1..200u64).step_by(2) {
            assert_eq!(exists_minus_id_power(&orders(&[m])), None);
        }
    }

    #[test]
    fn signed_group_orders() {
        let e6 = CycloFactorization::from_pairs(&[(12, 1), (3, 1)]);
        assert_eq!(signed_power_group_order(&e6), 24);
        let e8 = CycloFactorization::from_pairs(&[(30, 1)]);
        assert_eq!(signed_power_group_order(&e8), 30);
        let a3 = CycloFactorization::from_pairs(&[(4, 1), (2, 1)]);
        assert_eq!(signed_power_group_order(&a3), 8);
        let e7 = CycloFactorization::from_pairs(&[(18, 1), (2, 1)]);
        assert_eq!(signed_power_group_order(&e7), 18);
    }

    #[test]
    fn chain_witness_all_odd_steps() {
        let w = chain_condition_witness(&orders(&[30, 10, 2])).unwrap();
        assert_eq!(w.m_seq, vec![30, 10, 2]);
        assert_eq!(w.p_seq, vec![3, 5]);
        assert_eq!(w.j_seq, vec![1, 2]);
        assert_eq!(w.k_seq, vec![1, 1]);
        assert_eq!((w.i1, w.i2), (3, 3));
        assert!(w.validate(&orders(&[30, 10, 2])));
    }

    #[test]
    fn chain_witness_with_forced_two_step() {
        // needs a p = 2 step 6 -> 3 and a later p = 3 step 18 -> 2
        let w = chain_condition_witness(&orders(&[18, 6, 3, 2])).unwrap();
        assert_eq!(w.m_seq, vec![18, 6, 3, 2]);
        assert_eq!(w.i1, 2);
        assert_eq!(w.i2, 3);
        assert_eq!(w.p_seq, vec![3, 2, 3]);
        assert!(w.validate(&orders(&[18, 6, 3, 2])));
    }

    #[test]
    fn chain_witness_unsatisfiable() {
        assert_eq!(
            chain_condition_witness(&orders(&[5, 7])),
            Err(Error::NoWitness)
        );
    }

    #[test]
    fn chain_witness_singleton_and_cap() {
        let w = chain_condition_witness(&orders(&[30])).unwrap();
        assert_eq!((w.i1, w.i2), (1, 1));
        let big = orders(&[2, 4, 8, 16, 32, 64, 128, 256, 512]);
        assert_eq!(
            chain_condition_witness(&big),
            Err(Error::CapExceeded { size: 9, cap: 8 })
        );
    }

    #[test]
    fn acampo_examples() {
        let phi42 = CycloFactorization::from_pairs(&[(42, 1)]);
        assert!(acampo_check(&phi42, 2, 2));
        let phi3 = CycloFactorization::from_pairs(&[(3, 1)]);
        assert!(acampo_check(&phi3, 2, 2));
        let phi1phi2 = CycloFactorization::from_pairs(&[(1, 1), (2, 1)]);
        assert!(!acampo_check(&phi1phi2, 2, 2));
    }
}
