//! LRTA* with a dynamically chosen lookahead depth.
//!
//! The depth d is cut off at the first frontier whose minimum f already
//! fails to raise h(top) (deeper search cannot help there), at the goal
//! distance, and at the configured maximum. The update to h(top) takes the
//! max over the nested frontiers k = 1..d of the per-frontier min f, which
//! keeps the raise admissible: every goal path crosses each frontier.

use super::{pick_min, units_ceil, Candidate, TieBreaker, F_TOL};
use crate::error::Error;
use crate::framework::{AgentState, AlgoParams, Direction, StepDecision, StepPolicy};
use crate::oracle::DistanceOracle;
use crate::problem::StateId;

#[derive(Debug, Clone, Copy)]
pub struct LookaheadSpec {
    pub d_max: u64,
}

pub struct DynamicLookahead {
    spec: LookaheadSpec,
    tie: TieBreaker,
}

impl DynamicLookahead {
    pub fn new(spec: LookaheadSpec, tie: TieBreaker) -> Self {
        DynamicLookahead { spec, tie }
    }

    fn frontier_candidates(
        &self,
        agent: &AgentState,
        oracle: &DistanceOracle,
        gamma: f64,
        k: u64,
    ) -> Result<Vec<Candidate>, Error> {
        let top = agent.stack.top();
        let states = oracle.frontier(top, k);
        states
            .into_iter()
            .map(|s| {
                let d = oracle
                    .shortest_path_cost(top, s)?
                    .finite()
                    .expect("frontier state is reachable");
                Ok(Candidate {
                    state: s,
                    f: gamma * d as f64 + agent.h.get(s) as f64,
                })
            })
            .collect()
    }
}

impl StepPolicy for DynamicLookahead {
    fn name(&self) -> &'static str {
        "dynlook"
    }

    fn decide(
        &mut self,
        agent: &AgentState,
        oracle: &DistanceOracle,
        params: &AlgoParams,
    ) -> Result<StepDecision, Error> {
        let top = agent.stack.top();
        let h_top = agent.h.get(top);
        // Never look past a goal: its frontier would sit on the far side.
        let goal_cap = match oracle.edge_distance_to_set(
            top,
            &oracle.problem().goals().iter().copied().collect::<Vec<_>>(),
        )? {
            crate::cost::Cost::Finite(d) => d,
            crate::cost::Cost::Infinity => {
                return Err(Error::Framework(format!(
                    "no goal reachable from {}",
                    oracle.problem().name(top)
                )))
            }
        };
        let depth_cap = self.spec.d_max.min(goal_cap.max(1));

        let mut lss: Vec<StateId> = Vec::new();
        let mut best_raise = f64::NEG_INFINITY;
        let mut last: Option<(f64, StateId)> = None;
        for k in 1..=depth_cap {
            let cands = self.frontier_candidates(agent, oracle, params.gamma, k)?;
            if cands.is_empty() {
                break;
            }
            lss.extend(cands.iter().map(|c| c.state));
            let (min_f, best) = pick_min(&cands, &mut self.tie);
            best_raise = best_raise.max(min_f);
            last = Some((min_f, best));
            // Deeper frontiers are only consulted while the current one
            // still promises to raise h(top).
            if min_f <= h_top as f64 + F_TOL {
                break;
            }
        }
        let (_, target) = last.ok_or_else(|| {
            Error::Framework(format!(
                "state {} has no successors",
                oracle.problem().name(top)
            ))
        })?;
        lss.sort();
        lss.dedup();

        let new_h = units_ceil(best_raise);
        let h_updates = if new_h > h_top {
            vec![(top, new_h)]
        } else {
            vec![]
        };
        Ok(StepDecision {
            direction: Direction::Forward,
            next_state: Some(target),
            lss,
            gamma_weight: params.gamma,
            h_updates,
        })
    }
}
