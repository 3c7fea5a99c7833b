//! Rigorous numerics used to isolate and display algebraic numbers.

pub mod ball;
pub mod roots;

pub use ball::{CBall, Cq};
pub use roots::{isolate_roots, refine_root, IsolatedRoot};
