//! Canonical filtrations of unipotent elements in special orthogonal groups over
//! small finite fields, the pieces they cut out, and exact point counts.

pub mod counting;
pub mod error;
pub mod filtration;
pub mod gf;
pub mod linalg;
pub mod nilpotent;
pub mod quadspace;

pub use counting::{CountPolynomial, RatPoly, RationalCount};
pub use error::{Error, Result};
pub use gf::{field_of_order, make_field, Elem, FieldCtx, FieldElement};
pub use linalg::{Mat, Quotient, Subspace, Vector};
pub use quadspace::{FormType, QuadSpace, SpaceDescriptor};
