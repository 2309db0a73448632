//! Exact commutative algebra for blowup algebras of ideal pairs `J ⊆ I`.
//!
//! Everything is generic over the coefficient [`Field`]; the aliases below
//! fix the two fields the toolkit ships with.

pub mod atf;
pub mod blowup;
pub mod context;
pub mod error;
pub mod families;
pub mod field;
pub mod groebner;
pub mod monomial;
pub mod order;
pub mod parse;
pub mod poly;
pub mod ring;
pub mod syzygy;

pub use atf::{Certificate, Verdict};
pub use context::{BasisStore, Ctx};
pub use error::{AlgebraError, Result};
pub use field::{Field, Fp, Fp32003, Rational};
pub use groebner::{ring_map_kernel, Ideal};
pub use monomial::Monomial;
pub use order::MonomialOrder;
pub use parse::{format_polynomial, parse_polynomial, parse_polynomials};
pub use poly::Polynomial;
pub use ring::{PolyRing, RingSpec};

pub type QPolynomial = Polynomial<Rational>;
pub type QIdeal = Ideal<Rational>;
pub type QRingSpec = RingSpec<Rational>;
