//! Finite fields, polynomials over them, and the groups `PSL(2,q) <= PGL(2,q) <= PΓL(2,q)`
//! acting on `(q^2-q)/2` points, with the tools needed to build and test low-degree
//! exceptional polynomials whose monodromy lives in these groups.

pub mod analyze;
pub mod error;
pub mod families;
pub mod gf;
pub mod numtheory;
pub mod poly;
pub mod psl2;
pub mod ramify;
mod text;
pub mod verify;

pub use error::{Error, Result};
pub use gf::{Embedding, Fe, Field, FieldElem};
pub use poly::{EvalStats, Poly};
