//! Reports, frame corpus and experiment suites behind the `gmlogic` binary.

pub mod corpus;
pub mod experiments;
pub mod report;

use gmlogic::controls::ControlError;
use gmlogic::formula::SyntaxError;
use gmlogic::frame::FrameError;
use gmlogic::semantics::SemanticsError;
use gmlogic::theories::TheoryError;

pub const EXIT_USAGE: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const EXIT_ASSERTION: i32 = 5;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Control(#[from] ControlError),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("assertion failed: {0}")]
    Assertion(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Frame(FrameError::BudgetExceeded { .. })
            | CliError::Semantics(SemanticsError::BudgetExceeded { .. })
            | CliError::Control(ControlError::BudgetExceeded { .. })
            | CliError::Control(ControlError::Semantics(SemanticsError::BudgetExceeded { .. })) => EXIT_BUDGET,
            CliError::Assertion(_) => EXIT_ASSERTION,
            _ => EXIT_USAGE,
        }
    }
}
