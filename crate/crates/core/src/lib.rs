//! Set-theoretic types with an explicit divergence type for a call-by-need
//! lambda calculus: subtyping, typechecking, evaluation and a soundness
//! harness.

pub mod error;
pub mod eval;
pub mod harness;
pub mod lang;
pub mod lexer;
pub mod oracle;
pub mod subtype;
pub mod typecheck;
pub mod typegen;
pub mod types;

pub use error::{ContractivityError, ParseError, SyntaxError};
pub use eval::{reduce, Outcome, Reduction, Rule};
pub use lang::{compile, parse_internal, parse_source, print_expr, Expr, ParseOptions};
pub use subtype::{Dnf, DnfLine, Kind, KindSplit, OpError};
pub use typecheck::{check_internal, check_program, CheckOptions, CheckVerdict, TypeError};
pub use types::{display_type, parse_type};
pub use types::{
    BaseDescriptor, BuildMode, Constant, Interface, TypeEnv, TypeId, TypeNode, TypeStore,
};
