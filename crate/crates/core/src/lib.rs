//! Exact computation of fields of values of conjugacy classes and
//! irreducible characters of finite permutation groups.

pub mod action;
pub mod analysis;
pub mod character_table;
pub mod cyclotomic;
pub mod error;
pub mod fields;
pub mod group;
pub mod harness;
pub mod modp;
pub mod zmod;

pub use action::{
    brauer_check, build_actions, construct_sigma_for_field, permutation_isomorphic, ActionTable,
};
pub use analysis::GroupAnalysis;
pub use character_table::{character_table, verify_orthogonality, CharacterTable, OrthogonalityReport};
pub use cyclotomic::Cyclotomic;
pub use error::{ActionError, ArithError, Error, GroupError, HarnessError, TableError};
pub use fields::{InvariantProfile, RationalityFlags};
pub use group::{ClassData, ConjugacyClass, PermGroup, Permutation};
pub use zmod::{FieldKey, FieldSignature, GaloisElement, UnitGroup};
