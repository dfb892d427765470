//! Exact arithmetic: finite fields and integer matrices.

pub mod field;
pub mod intmatrix;

pub use field::{Field, FieldDesc, FieldElement, DEFAULT_MAX_FIELD_SIZE};
pub use intmatrix::{integer_kernel, smith_normal_form, solve_integer, IntMatrix, SmithForm};
