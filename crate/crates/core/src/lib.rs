//! Complementary information set (t-CIS) codes built as one-generator
//! quasi-cyclic, quasi-twisted and quasi-polycyclic codes over finite fields,
//! plus their multinegacirculant analogues over `Z4`.

pub mod asymptotics;
pub mod code;
pub mod descent;
pub mod distance;
pub mod enumeration;
pub mod error;
pub mod field;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod ring;
pub mod search;
pub mod z4;

pub use code::{CodeRecord, GeneratorSpec, LinearCode};
pub use error::{Error, Result};
pub use field::{make_field, Elem, Field, FieldElement, FiniteField};
pub use matrix::Matrix;
pub use poly::{Factorization, Poly};
pub use ring::{CrtDecomposition, Family, QuotientRing, ResidueElement, Ring};
