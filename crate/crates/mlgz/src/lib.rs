//! Exact-arithmetic Milnor lattices and their automorphism groups.
//!
//! A Milnor lattice is a free `Z`-module of finite rank carrying a unimodular
//! Seifert form `L`, the monodromy `M` it determines, and the intersection
//! form `I`.  This crate builds such lattices (from a Seifert matrix, from
//! ADE Dynkin data with Coxeter monodromy, from companion matrices of
//! cyclotomic products), transforms them (suspension, reflections), and
//! computes the full automorphism group `G_Z = Aut(lattice, L)` by three
//! independent engines:
//!
//! * [`aut::brute_force_aut`] — definite-form backtracking over short
//!   vectors, pruning on the Seifert and intersection Gram constraints
//!   simultaneously;
//! * [`aut::crt_unit_aut`] — enumeration of automorphisms as polynomials in
//!   a cyclic monodromy, one signed monomial residue per cyclotomic factor,
//!   recombined by CRT over the rationals;
//! * [`d2k::d2k_analysis`] — the structured rank-2-kernel analysis for the
//!   even D-family, assembled from an exact sequence.
//!
//! A catalog of characteristic polynomials for the quasihomogeneous surface
//! singularities of modality at most two ships with the crate
//! ([`catalog`]), together with a verification runner that reproduces every
//! published group order.  Everything is exact: arbitrary-precision
//! integers, integer polynomials, and rationals where intermediate
//! divisions occur.  No floating point is used anywhere.

use num_bigint::BigInt;

pub mod aut;
pub mod catalog;
pub mod cli;
pub mod cyclo;
pub mod d2k;
pub mod lattice;
pub mod matrix;
pub mod orlik;
pub mod poly;
mod ratutil;
mod shortvec;

pub use aut::{
    brute_force_aut, crt_unit_aut, rank2_definite_aut_order, signed_monodromy_group, AutGroup,
    Engine, DEFAULT_BRUTE_BUDGET,
};
pub use catalog::{builtin_catalog_text, load_catalog, verify_all, CatalogEntry, Provenance};
pub use cyclo::{
    acampo_check, chain_condition_witness, cyclotomic_factor, cyclotomic_poly,
    exists_minus_id_power, moebius, power_traces, signed_power_group_order, ChainWitness,
    CycloFactorization,
};
pub use d2k::{d2k_analysis, D2kReport};
pub use lattice::{
    ade_milnor, companion_module, coxeter_matrix, make_from_seifert, reflection_matrix, suspend,
    AdeFamily, MilnorLattice, MonodromyModule,
};
pub use matrix::{poly_eval_matrix, IntMatrix};
pub use orlik::{orlik_cyclic_search, split_by_multiplicity, DEFAULT_ORLIK_NORM_BOUND};
pub use poly::IntPoly;

/// Errors across the crate, one variant per failure surface.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not unimodular: det = {det}")]
    NotUnimodular { det: BigInt },
    #[error("polynomial is not a product of cyclotomic polynomials")]
    NotCyclotomicProduct,
    #[error("empty cyclotomic factorization")]
    EmptyFactorization,
    #[error("no chain witness exists for this order set")]
    NoWitness,
    #[error("order set has {size} elements, the witness search is capped at {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("unsupported family/rank: {family} with mu = {mu}")]
    UnsupportedFamily { family: char, mu: usize },
    #[error("diagonal entry at index {index} is not 2")]
    BadDiagonal { index: usize },
    #[error("intersection form is indefinite")]
    IndefiniteForm,
    #[error("search budget of {budget} node expansions exceeded")]
    SearchBudgetExceeded { budget: u64 },
    #[error("characteristic polynomial has the repeated cyclotomic factor Phi{m}")]
    RepeatedFactor { m: u64 },
    #[error("supplied vector is not a cyclic generator")]
    NoCyclicCertificate,
    #[error("monodromy does not have finite order")]
    InfiniteOrder,
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("lattice is not an even-rank D-family model")]
    NotD2k,
    #[error("no cyclic decomposition found within norm bound {bound}")]
    NotFound { bound: u32 },
    #[error("split is not a divisor chain multiplying to the characteristic polynomial")]
    BadSplit,
    #[error("parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },
    #[error("line {line}: factor degrees sum to {got} but the name {name} implies mu = {expected}")]
    InconsistentDegree {
        line: usize,
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("table verification failed ({} failing checks)", failures.len())]
    VerificationFailure {
        failures: Vec<String>,
        report: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
