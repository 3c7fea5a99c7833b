pub mod arith;
pub mod corroborate;
pub mod desingular;
pub mod diffop;
pub mod error;
pub mod extension;
pub mod field;
pub mod input;
pub mod linalg;
pub mod min_homog;
pub mod min_inhomog;
pub mod numeric;
pub mod pipeline;
pub mod poly;
pub mod rational_solutions;
pub mod ratfun;
pub mod report;
pub mod series;

pub use error::{Clause, EfaError, Result};
pub use field::{AlgebraicNumber, Field, KElem, NumberField};
pub use poly::Poly;
pub use ratfun::RatFun;
