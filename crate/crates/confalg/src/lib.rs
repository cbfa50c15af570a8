//! Exact computations with conformal algebras over ℚ[∂] and their homotopy
//! analogues (A∞ and L∞ conformal algebras, conformal 2-algebras).

pub mod ainf;
pub mod assocconf;
pub mod cli;
pub mod confmap;
pub mod confmod;
pub mod lieconf;
pub mod linalg;
pub mod polyring;
pub mod transfer;
pub mod twocells;
