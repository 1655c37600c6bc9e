//! Exact computation on associative conformal algebras of finite rank over
//! `ℚ[∂]`: Hochschild cochains, twisted Rota-Baxter operators, the
//! L∞ brackets governing them, and their deformations.

pub mod conformal;
pub mod deform;
pub mod error;
pub mod exactpoly;
pub mod fixtures;
pub mod gen;
pub mod hochschild;
pub mod io;
pub mod linalg;
pub mod linf;
pub mod multilinear;
pub mod par;
pub mod report;
pub mod trb;

pub use error::{Error, Result};
pub use exactpoly::{MPoly, Rat};
pub use hochschild::{Cochain, Frame};
pub use multilinear::{LambdaExpr, StructureMap};
pub use report::CheckReport;
