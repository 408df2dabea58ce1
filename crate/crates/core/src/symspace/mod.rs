//! Catalog of the irreducible compact symmetric spaces `G/H` used for Euler
//! parametrizations: group data, restricted root systems with
//! multiplicities, root-length ratios and the periods of `U(1)` factors.
//!
//! The catalog ships as embedded TOML; formulas are evaluated per parameter
//! binding by [`lookup`].

mod catalog;
pub mod expr;

use thiserror::Error;

use crate::root_systems::RootError;

pub use catalog::{
    audit_row, catalog_audit, check_dimensions, lookup, restricted_root_system, sweep_bindings, AuditCheck,
    AuditRecord, Catalog, DimensionReport, ParameterBinding, Period, PeriodSpec, PeriodValue, RootLengthRatio, RowSpec,
    SourceNote, SpecialCaseSpec, SymmetricSpaceEntry, CATALOG_SCHEMA,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("catalog parse error: {0}")]
    Parse(String),
    #[error("catalog schema mismatch: expected `{expected}`, found `{found}`")]
    Schema { expected: String, found: String },
    #[error("no catalog row labelled `{0}`")]
    UnknownLabel(String),
    #[error("{label} needs parameter `{name}`")]
    MissingParameter { label: String, name: String },
    #[error("{label} takes no parameter `{name}`")]
    UnexpectedParameter { label: String, name: String },
    #[error("{label}: constraint `{constraint}` fails for {binding}")]
    ConstraintViolated { label: String, constraint: String, binding: String },
    #[error("cannot evaluate `{formula}`: {reason}")]
    Formula { formula: String, reason: String },
    #[error("cannot evaluate `{formula}`: unbound variable `{name}`")]
    UnboundVariable { formula: String, name: String },
    #[error("malformed parameter binding `{0}` (expected e.g. `p=2,q=3`)")]
    BadBinding(String),
    #[error(transparent)]
    Root(#[from] RootError),
}
