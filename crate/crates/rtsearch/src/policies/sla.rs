//! SLA*: LRTA* with a lookahead of one, plus backtracking on every update.
//!
//! Whenever the minimum f-value exceeds h at the current state, the value is
//! raised and the agent returns to the previous state. At the start state
//! (stack of length one) there is nowhere to return to, so the agent stays
//! put and only applies the update.

use super::{pick_min, successor_candidates, units_ceil, TieBreaker};
use crate::error::Error;
use crate::framework::{AgentState, AlgoParams, Direction, StepDecision, StepPolicy};
use crate::oracle::DistanceOracle;

pub struct Sla {
    tie: TieBreaker,
}

impl Sla {
    pub fn new(tie: TieBreaker) -> Self {
        Sla { tie }
    }
}

impl StepPolicy for Sla {
    fn name(&self) -> &'static str {
        "sla"
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
        let lss: Vec<_> = cands.iter().map(|c| c.state).collect();
        if min_f > h_top as f64 + super::F_TOL {
            let direction = if agent.stack.len() == 1 {
                Direction::Stay
            } else {
                Direction::Backward
            };
            Ok(StepDecision {
                direction,
                next_state: None,
                lss,
                gamma_weight: params.gamma,
                h_updates: vec![(top, units_ceil(min_f))],
            })
        } else {
            Ok(StepDecision {
                direction: Direction::Forward,
                next_state: Some(best),
                lss,
                gamma_weight: params.gamma,
                h_updates: vec![],
            })
        }
    }
}
