//! Finite abelian groups, homomorphisms and subgroups.

mod group;
mod hom;
mod lattice;
mod product;
mod subgroup;

pub use group::{FinAbGroup, GroupElement};
pub use hom::Homomorphism;
pub use product::ProductGroup;
pub use subgroup::{Quotient, Subgroup, SubgroupStructure};
