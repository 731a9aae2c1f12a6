//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Netlist or library text could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A netlist references a cell name absent from the library.
    #[error("undefined cell `{0}`")]
    UndefinedCell(String),

    /// Structural violation in a hypergraph (duplicate names, short nets, ...).
    #[error("netlist error: {0}")]
    Netlist(String),

    /// A combinational cycle makes timing-path depth undefined.
    /// Carries one witness cycle as a vertex-name sequence.
    #[error("combinational cycle: {}", .0.join(" -> "))]
    CombCycle(Vec<String>),

    /// Library tech constants violate an invariant.
    #[error("library error: {0}")]
    Library(String),

    /// Parameter combination outside the generator/sweep validity bounds.
    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    /// Placement demand exceeds floorplan capacity.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// PDN/tap configuration inconsistent with the selected PDN kind.
    #[error("pdn config error: {0}")]
    PdnConfig(String),

    /// Resistive network is not solvable as posed.
    #[error("ir solve error: {0}")]
    Solve(String),

    /// Experiment/CLI configuration error.
    #[error("config error: {0}")]
    Config(String),

    /// Metric preconditions violated (nonpositive period, missing outputs, ...).
    #[error("metric error: {0}")]
    Metric(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
