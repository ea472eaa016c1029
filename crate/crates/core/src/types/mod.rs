//! The type algebra: hash-consed nodes, textual syntax, recursive binders,
//! printing and the restricted surface grammars.

pub mod base;
pub mod build;
pub mod env;
pub mod grammar;
pub mod print;
pub mod store;
pub mod syntax;

pub use base::{BaseDescriptor, Constant, IntSet};
pub use build::{build_interface, build_type, mk_rec, BuildMode, Interface};
pub use env::TypeEnv;
pub use grammar::{validate_interface, validate_testtype};
pub use print::{print_surface, print_type};
pub use store::{TypeId, TypeNode, TypeStore};
pub use syntax::{parse_type_expr, TypeExpr, TypeExprKind};

use crate::error::ParseError;

/// Parses and elaborates a type in the given mode.
pub fn parse_type(store: &TypeStore, src: &str, mode: BuildMode) -> Result<TypeId, ParseError> {
    let e = parse_type_expr(src)?;
    build_type(store, &e, mode)
}

/// Prints in the surface grammar when possible, otherwise with plain constructors.
pub fn display_type(store: &TypeStore, t: TypeId) -> String {
    print_surface(store, t).unwrap_or_else(|| print_type(store, t))
}
