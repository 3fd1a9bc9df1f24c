//! Exact computations in the generalized Heisenberg-Virasoro algebras
//! `HVir[G]`, `G ⊆ ℚ`, and their intermediate-series modules `V(α,β;F)`.
//!
//! * [`groups`]: additive subgroups of ℚ, including the chain `ℚ_k = (1/k!)ℤ`.
//! * [`algebra`]: elements, the bracket, and the rescaling map `HVir[ℤ] → HVir[ℚ_m]`.
//! * [`intermediate`]: module actions, reducibility, isomorphism, parameter transport.
//! * [`analysis`]: finite-window submodule closure and the structure-recovery algorithms.
//! * [`parse`] and [`cli`]: text grammars and the command model of the `hvir` binary.

#![allow(clippy::result_large_err)]

pub mod algebra;
pub mod analysis;
pub mod cli;
pub mod groups;
pub mod intermediate;
pub mod parse;
pub mod scalar;

pub use algebra::{AlgebraElement, BasisKey, PhiVariant, RescalingMap};
pub use analysis::{ActionTable, Subspace, Window};
pub use groups::SubgroupSpec;
pub use intermediate::{Classification, ModuleParams, Verdict, WeightVector};
pub use scalar::Rational;
