//! LRTA* with a lookahead of one.
//!
//! Examines the immediate successors, raises h at the current state to the
//! minimum f-value when that is higher, and always moves to the argmin.

use super::{pick_min, successor_candidates, units_ceil, TieBreaker};
use crate::error::Error;
use crate::framework::{AgentState, AlgoParams, Direction, StepDecision, StepPolicy};
use crate::oracle::DistanceOracle;

pub struct Lrta {
    tie: TieBreaker,
}

impl Lrta {
    pub fn new(tie: TieBreaker) -> Self {
        Lrta { tie }
    }
}

impl StepPolicy for Lrta {
    fn name(&self) -> &'static str {
        "lrta"
    }

    fn decide(
        &mut self,
        agent: &AgentState,
        oracle: &DistanceOracle,
        params: &AlgoParams,
    ) -> Result<StepDecision, Error> {
        let top = agent.stack.top();
        let cands = successor_candidates(agent, oracle, params.gamma)?;
        let (min_f, best) = pick_min(&cands, &mut self.tie);
        let h_top = agent.h.get(top);
        let new_h = h_top.max(units_ceil(min_f));
        Ok(StepDecision {
            direction: Direction::Forward,
            next_state: Some(best),
            lss: cands.iter().map(|c| c.state).collect(),
            gamma_weight: params.gamma,
            h_updates: if new_h > h_top {
                vec![(top, new_h)]
            } else {
                vec![]
            },
        })
    }
}
