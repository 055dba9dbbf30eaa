//! Exact computational engine for the Brauer monoid and BMW algebra of type D.
//!
//! The generators are the simple reflections `r1..rn` (written `g1..gn` on the
//! BMW side), the idempotent-like elements `e1..en`, and a central invertible
//! parameter `d` (delta).  Words in these generators are rewritten to a unique
//! normal form `delta^k * W`, where `W` is the canonical word of a key
//! `(orbit label, top set, bottom set, residual group element)`.  Algebra
//! elements are finite sums of keys with coefficients in an exact ring:
//! Laurent polynomials in `d` for the Brauer algebra, and a subring of
//! `Q(d)[l, l^-1]` for the BMW algebra.
//!
//! Modules, bottom up:
//! - [`coeff`]: the exact coefficient rings and the specialization map between
//!   them.
//! - [`roots`]: the type D root system (roots, reflections, mates, heights).
//! - [`admissible`]: admissible sets of orthogonal positive roots, the monoid
//!   action on them, orbit tables and canonical access words.
//! - [`word`]: generator words, the elementary rewrite steps, and the action
//!   of a word on admissible sets.
//! - [`cox`]: concrete Coxeter group elements for the residual groups
//!   attached to each orbit label.
//! - [`nf`]: normal-form keys, canonical words, and parsing of terminal words.
//! - [`search`]: the search-based reduction oracle.
//! - [`engine`]: the structural reducer (memoized structure maps) and step
//!   traces.
//! - [`brauer`]: Brauer algebra elements, multiplication, rank counts, the
//!   Temperley-Lieb subalgebra check.
//! - [`bmw`]: BMW algebra elements, trace replay over the deformed relations,
//!   the specialization map, and the Hecke/filtration checks.

pub mod admissible;
pub mod bmw;
pub mod brauer;
pub mod coeff;
pub mod cox;
pub mod engine;
pub mod nf;
pub mod oracle;
pub mod roots;
pub mod search;
pub mod word;




pub use admissible::{AdmissibleSet, Tables, YLabel};
pub use bmw::{bmw_mul, mu_map, BmwCtx, BMWElement};
pub use brauer::{br_mul, BrauerCtx, BrauerElement, Element};
pub use coeff::{Coeff, LaurentDelta, RElem};
pub use engine::Engine;
pub use nf::{NfKey, NormalForm};
pub use roots::{Root, RootSystem};
pub use word::Word;




/// Errors surfaced by the engine.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("roots are not mutually orthogonal: {0}")]
    NotOrthogonal(String),
    #[error("reduction search exhausted its budget ({0} states)")]
    ReduceFailed(usize),
    #[error("value is not in the image of the specialization: {0}")]
    NotInImage(String),
    #[error("unsupported rank n = {0}; supported range is 4..=8")]
    BadRank(u8),
    #[error("verification mismatch: {0}")]
    Mismatch(String),
    #[error("cache error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
