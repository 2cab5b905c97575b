//! Reading and writing games, solutions and traces.

pub mod audit;
pub mod pgsolver;
pub mod solution;

pub use audit::{audit_trace, AuditError, AuditReport};
pub use pgsolver::{emit_game, parse_game, ParseError, ParseErrorKind};
pub use solution::{emit_solution, parse_solution, SolutionParseError};
