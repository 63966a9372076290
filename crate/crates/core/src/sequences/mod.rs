//! ψ / φ objects and the explicit constructions built from them.

pub mod khinchin;
pub mod proof;
pub mod psi;
pub mod remark;

pub use khinchin::{
    greatest_khinchin_minorant, khinchin_validate, DivergenceScale, KhinchinMinorant, KhinchinReport,
};
pub use proof::{dyadic_diagnostics, phi_from_proof, DyadicRecord};
pub use psi::{phi_of, psi_of, PhiFamily, PhiSpec, PsiFamily, PsiSpec, StepFunction};
pub use remark::{remark_block_sums, remark_counterexample, RemarkBlock};
