//! Exact computation of singular vectors in Verma modules of sl(n).
//!
//! The library models the Verma module M_lambda two ways and plays them
//! against each other:
//!
//! - [`oracle`]: the module itself, in its PBW basis `E^alpha v_lambda`,
//!   with the raising/lowering action written out termwise and a
//!   brute-force singular-vector finder (exact rational kernel
//!   computation on a weight space).
//! - [`algebra`] + [`operators`]: the polynomial picture, where the
//!   module is a space of (truncated-up) power series in the variables
//!   `x_{i,j}` and the simple root vectors act as differential operators
//!   `d_i`, `eta_i`, `zeta_i`.  Arbitrary rational powers `eta_i^mu` are
//!   well defined on this larger space.
//! - [`singular`]: the constructive solver.  Exponent recursions produce,
//!   for each of the n! admissible index vectors, a product of fractional
//!   eta-powers annihilated by every `d_i`; the polynomial ones are the
//!   singular vectors.  Also houses the Malikov-Feigin-Fuchs vector and
//!   the segment-sum irreducibility criterion.
//!
//! Everything is exact: coefficients, weights and exponents are
//! arbitrary-precision rationals, and every identity test in the suite is
//! an equality test.  Where a fractional power genuinely expands into an
//! infinite series, results carry an explicit truncation flag.
//!
//! [`render`] and [`json`] provide the LaTeX/text renderers and the
//! canonical JSON encodings used by the CLI and the browser demo.

pub mod algebra;
pub mod json;
pub mod operators;
pub mod oracle;
pub mod render;
pub mod singular;

pub use algebra::{
    falling_factorial, parse_rational, rational_to_string, ExtMonomial, Rational, Series,
    TruncationPolicy, VarIndex,
};
pub use operators::{
    apply_d, apply_d_long, apply_eta, apply_eta_power, apply_zeta, commutator,
    weight_eigenvalues, CartanMatrix, LinearOperator, Weight,
};
pub use oracle::{
    lower, raise, singular_kernel, tau, tau_inv, weight_of, weight_space_basis, MultiIndex,
    PBWVector, WeightDrop,
};
pub use singular::{
    build_eta_product, build_phi, default_policy, enumerate_solutions, exchange_rewrite,
    iota_exponents, irreducible, mff_vector, polynomial_verdict, theta_plan, ExponentPlan,
    IndexVector, IrreducibilityReport, PolyVerdict, SimpleRootMap, SolutionRecord,
};

/// Errors shared across the library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("simple-root index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("setting {var} = 0 is undefined: term carries negative exponent {exp}")]
    NegativeExponentAtZero { var: VarIndex, exp: Rational },
    #[error("series is not polynomial: exponent {exp} on {var}")]
    NotPolynomial { var: VarIndex, exp: Rational },
    #[error("zero series has no weight")]
    ZeroSeries,
    #[error("invalid index vector: entry {pos} is {value}, must be <= {max}")]
    InvalidIndexVector { pos: usize, value: usize, max: usize },
    #[error("invalid simple-root map: {0}")]
    InvalidRootMap(String),
    #[error("invalid exponent plan: consecutive steps {0} and {1} use the same root")]
    RepeatedRoot(usize, usize),
    #[error("weight must have n-1 = {expected} entries, got {got}")]
    WeightLength { expected: usize, got: usize },
    #[error("rank must satisfy n >= 2, got {0}")]
    RankTooSmall(usize),
    #[error("Malikov-Feigin-Fuchs vector requires n-2 + sum(lambda) in N, got {0}")]
    MffPrecondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
