//! Representation-theoretic invariants of finite groups: the amenability
//! constant of the Fourier algebra, the anti-diagonal constant computed from
//! explicit Fourier coefficients on `G x G`, and the structural predicates
//! that characterise the groups where it is smallest.

pub mod cache;
pub mod catalog;
pub mod character;
pub mod classify;
pub mod error;
pub mod exec;
pub mod expr;
pub mod families;
pub mod group;
pub mod harmonic;
pub mod irreps;
pub mod linalg;
pub mod rational;

pub use character::{character_table, degrees, CharacterTable};
pub use error::{CacheError, ExprError, FamilyError, GroupError, RepError};
pub use exec::Execution;
pub use group::{FiniteGroup, GroupBuilder, Subgroup};
pub use irreps::{explicit_irreps, UnitaryIrrep};
