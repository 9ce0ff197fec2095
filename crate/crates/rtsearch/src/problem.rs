//! Search-space representation and problem validation.
//!
//! A problem is a finite weighted digraph with a nonempty goal set, a start
//! state, an initial heuristic, a cost quantum ε and an admissibility weight
//! θ. All weights and heuristic values are stored as integer multiples of ε.

use std::collections::BTreeSet;
use std::fmt;

use crate::cost::{format_units, Cost};
use crate::error::Error;

/// Index of a state in its `ProblemSpec`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Edge {
    pub to: StateId,
    /// Weight in ε-units, always ≥ 1.
    pub weight: u64,
}

/// A heuristic search problem: graph, goals, start, initial heuristic, ε, θ.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    names: Vec<String>,
    adjacency: Vec<Vec<Edge>>,
    goals: BTreeSet<StateId>,
    start: StateId,
    /// Initial heuristic in ε-units, one entry per state.
    h_init: Vec<u64>,
    epsilon: f64,
    theta: f64,
}

impl ProblemSpec {
    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.names.len() as u32).map(StateId)
    }

    pub fn name(&self, s: StateId) -> &str {
        &self.names[s.index()]
    }

    pub fn find_state(&self, name: &str) -> Option<StateId> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| StateId(i as u32))
    }

    pub fn successors(&self, s: StateId) -> &[Edge] {
        &self.adjacency[s.index()]
    }

    pub fn goals(&self) -> &BTreeSet<StateId> {
        &self.goals
    }

    pub fn is_goal(&self, s: StateId) -> bool {
        self.goals.contains(&s)
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn h_init(&self) -> &[u64] {
        &self.h_init
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn check_state(&self, s: StateId) -> Result<(), Error> {
        if s.index() < self.names.len() {
            Ok(())
        } else {
            Err(Error::UnknownState(format!("{s}")))
        }
    }

    /// Displayable real-unit value of `units` for this problem's ε.
    pub fn fmt_units(&self, units: u64) -> String {
        format_units(units, self.epsilon)
    }
}

/// Incrementally assembles a `ProblemSpec`.
#[derive(Debug, Default)]
pub struct ProblemBuilder {
    names: Vec<String>,
    adjacency: Vec<Vec<Edge>>,
    h_init: Vec<u64>,
    goals: BTreeSet<StateId>,
    start: Option<StateId>,
    epsilon: f64,
    theta: f64,
}

impl ProblemBuilder {
    pub fn new(epsilon: f64, theta: f64) -> Self {
        ProblemBuilder {
            epsilon,
            theta,
            ..Default::default()
        }
    }

    /// Adds a state with its initial heuristic in ε-units; returns its id.
    pub fn add_state(&mut self, name: impl Into<String>, h_units: u64) -> StateId {
        let id = StateId(self.names.len() as u32);
        self.names.push(name.into());
        self.adjacency.push(Vec::new());
        self.h_init.push(h_units);
        id
    }

    /// Adds a directed edge with weight in ε-units (must be ≥ 1).
    pub fn add_edge(&mut self, from: StateId, to: StateId, weight_units: u64) {
        assert!(
            weight_units >= 1,
            "edge weight must be a positive multiple of epsilon"
        );
        self.adjacency[from.index()].push(Edge {
            to,
            weight: weight_units,
        });
    }

    /// Adds the edge in both directions with the same weight.
    pub fn add_undirected_edge(&mut self, a: StateId, b: StateId, weight_units: u64) {
        self.add_edge(a, b, weight_units);
        self.add_edge(b, a, weight_units);
    }

    pub fn set_goal(&mut self, s: StateId) {
        self.goals.insert(s);
    }

    pub fn set_start(&mut self, s: StateId) {
        self.start = Some(s);
    }

    pub fn set_h_init(&mut self, s: StateId, h_units: u64) {
        self.h_init[s.index()] = h_units;
    }

    pub fn build(self) -> Result<ProblemSpec, Error> {
        if self.names.is_empty() {
            return Err(Error::Config("problem has no states".into()));
        }
        if self.goals.is_empty() {
            return Err(Error::Config("problem has no goal states".into()));
        }
        if !self.epsilon.is_finite() || self.epsilon <= 0.0 {
            return Err(Error::Config("epsilon must be positive".into()));
        }
        if !self.theta.is_finite() || self.theta <= 0.0 {
            return Err(Error::Config("theta must be positive".into()));
        }
        let start = self
            .start
            .ok_or_else(|| Error::Config("problem has no start state".into()))?;
        Ok(ProblemSpec {
            names: self.names,
            adjacency: self.adjacency,
            goals: self.goals,
            start,
            h_init: self.h_init,
            epsilon: self.epsilon,
            theta: self.theta,
        })
    }
}

/// A single validation finding.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemViolation {
    /// No goal is reachable from this state.
    GoalUnreachable(StateId),
    /// h_init(s) exceeds θ·h*(s).
    Inadmissible {
        state: StateId,
        h_units: u64,
        h_star: Cost,
    },
}

impl fmt::Display for ProblemViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemViolation::GoalUnreachable(s) => {
                write!(f, "no goal reachable from state {s}")
            }
            ProblemViolation::Inadmissible { state, h_units, h_star } => write!(
                f,
                "h_init({state}) = {h_units} units exceeds theta * h*({state}) = theta * {h_star} units"
            ),
        }
    }
}

/// Result of `validate_problem`; empty means the problem is valid.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<ProblemViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}
