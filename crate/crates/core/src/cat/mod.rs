//! Schrödinger-cat probes under dephasing and amplitude damping.

pub mod closed_form;
pub mod coherent;
pub mod models;

pub use closed_form::*;
pub use coherent::{coherent_inner, coherent_overlap, LadderKet, Motion};
pub use models::*;
