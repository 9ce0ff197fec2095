//! Real-time heuristic search with a stack-based agent: a generic step
//! framework, concrete policies with and without backtracking, runtime
//! audits of the framework contract, and admissibility/bound tooling.

pub mod admissibility;
pub mod audit;
pub mod bounds;
pub mod config;
pub mod cost;
pub mod error;
pub mod framework;
pub mod gen;
pub mod grid;
pub mod oracle;
pub mod policies;
pub mod probfile;
pub mod problem;
pub mod stack;
pub mod trace;

pub use cost::Cost;
pub use error::Error;
pub use framework::{
    AccountingMode, AgentState, AlgoParams, Direction, RunResult, StepBudget, StepDecision,
    StepPolicy, TieBreak,
};
pub use oracle::DistanceOracle;
pub use problem::{ProblemBuilder, ProblemSpec, StateId};
pub use stack::StackPath;
