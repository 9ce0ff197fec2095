//! Concrete step policies for the agent framework.

mod acyclic;
mod lookahead;
mod lrta;
mod piecewise;
mod sla;
mod slat;

pub use acyclic::Acyclic;
pub use lookahead::{DynamicLookahead, LookaheadSpec};
pub use lrta::Lrta;
pub use piecewise::{Piecewise, SegmentState};
pub use sla::Sla;
pub use slat::Slat;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::framework::{AgentState, AlgoParams, StepPolicy, TieBreak};
use crate::oracle::DistanceOracle;
use crate::problem::StateId;

const F_TOL: f64 = 1e-9;

/// Resolves ties among equal-f candidates: lowest state id, or a seeded
/// uniform draw.
pub struct TieBreaker {
    rng: Option<ChaCha8Rng>,
}

impl TieBreaker {
    pub fn new(mode: TieBreak) -> Self {
        TieBreaker {
            rng: match mode {
                TieBreak::StateOrder => None,
                TieBreak::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            },
        }
    }

    fn pick(&mut self, tied: &[StateId]) -> StateId {
        match &mut self.rng {
            None => tied[0],
            Some(rng) => tied[rng.gen_range(0..tied.len())],
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Candidate {
    pub state: StateId,
    /// f(s) = γ·dist(top, s) + h(s), in ε-units.
    pub f: f64,
}

/// f-valued successor candidates of the current state, sorted by state id,
/// self-loops dropped, one entry per state.
pub(crate) fn successor_candidates(
    agent: &AgentState,
    oracle: &DistanceOracle,
    gamma: f64,
) -> Result<Vec<Candidate>, Error> {
    let top = agent.stack.top();
    let mut states: Vec<StateId> = oracle
        .problem()
        .successors(top)
        .iter()
        .map(|e| e.to)
        .filter(|&s| s != top)
        .collect();
    states.sort();
    states.dedup();
    if states.is_empty() {
        return Err(Error::Framework(format!(
            "state {} has no successors",
            oracle.problem().name(top)
        )));
    }
    states
        .into_iter()
        .map(|s| {
            let d = oracle
                .shortest_path_cost(top, s)?
                .finite()
                .expect("successor is reachable");
            Ok(Candidate {
                state: s,
                f: gamma * d as f64 + agent.h.get(s) as f64,
            })
        })
        .collect()
}

/// Minimum f among candidates and the tie-broken argmin.
pub(crate) fn pick_min(cands: &[Candidate], tie: &mut TieBreaker) -> (f64, StateId) {
    let min_f = cands.iter().map(|c| c.f).fold(f64::INFINITY, f64::min);
    let tied: Vec<StateId> = cands
        .iter()
        .filter(|c| c.f <= min_f + F_TOL)
        .map(|c| c.state)
        .collect();
    (min_f, tie.pick(&tied))
}

/// Rounds an f-value in ε-units up to the grid. Exact for integral inputs.
pub(crate) fn units_ceil(f: f64) -> u64 {
    (f - F_TOL).ceil().max(0.0) as u64
}

/// Builds a policy by name with fresh per-run state.
pub fn make_policy(name: &str, params: &AlgoParams) -> Result<Box<dyn StepPolicy>, Error> {
    let tie = || TieBreaker::new(params.tie_break);
    match name {
        "lrta" => Ok(Box::new(Lrta::new(tie()))),
        "sla" => Ok(Box::new(Sla::new(tie()))),
        "slat" => Ok(Box::new(Slat::new(tie()))),
        "slat-acyclic" => Ok(Box::new(Acyclic::new(Box::new(Slat::new(tie()))))),
        "lrta-acyclic" => Ok(Box::new(Acyclic::new(Box::new(Lrta::new(tie()))))),
        "dynlook" => Ok(Box::new(DynamicLookahead::new(
            LookaheadSpec {
                d_max: params.d_max,
            },
            tie(),
        ))),
        "piecewise" => Ok(Box::new(Piecewise::new(params.segment_len, tie()))),
        other => Err(Error::Config(format!("unknown algorithm '{other}'"))),
    }
}

/// Algorithm identifiers accepted by `make_policy`.
pub const ALGORITHMS: &[&str] = &[
    "lrta",
    "sla",
    "slat",
    "slat-acyclic",
    "lrta-acyclic",
    "dynlook",
    "piecewise",
];
