//! Piecewise backtracking: the stack is carved into segments of at most k
//! states, backtracking never leaves the current segment, and the running
//! discrepancy across segment seams decides when segmentation stops.

use super::{pick_min, successor_candidates, units_ceil, TieBreaker, F_TOL};
use crate::cost::Cost;
use crate::error::Error;
use crate::framework::{AgentState, AlgoParams, Direction, StepDecision, StepPolicy};
use crate::oracle::DistanceOracle;
use crate::problem::StateId;

/// Segment bookkeeping carried across steps.
#[derive(Debug, Clone, Copy, Default)]
pub struct SegmentState {
    /// Stack index of the first state of the current segment.
    pub begin_index: usize,
    /// Σ over closed seams of h(b) − h(e) + dist(e, b), in signed units.
    pub discrepancy: i64,
    /// Number of segments closed so far.
    pub closed: usize,
    /// Once the discrepancy passes the quota the current segment is final
    /// and grows without bound.
    pub finalized: bool,
}

pub struct Piecewise {
    k: usize,
    seg: SegmentState,
    /// One (segment-end, next-segment-begin, dist) triple per closed seam;
    /// the discrepancy sum is recomputed over these with the current h.
    seams: Vec<(StateId, StateId, u64)>,
    tie: TieBreaker,
}

impl Piecewise {
    pub fn new(k: usize, tie: TieBreaker) -> Self {
        Piecewise {
            k,
            seg: SegmentState::default(),
            seams: Vec::new(),
            tie,
        }
    }

    pub fn segment(&self) -> SegmentState {
        self.seg
    }
}

impl StepPolicy for Piecewise {
    fn name(&self) -> &'static str {
        "piecewise"
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

        if min_f > h_top as f64 + F_TOL {
            // Learn, then retreat — but never out of the current segment.
            let at_segment_start = agent.stack.len() - 1 == self.seg.begin_index;
            return Ok(StepDecision {
                direction: if at_segment_start {
                    Direction::Stay
                } else {
                    Direction::Backward
                },
                next_state: None,
                lss,
                gamma_weight: params.gamma,
                h_updates: vec![(top, units_ceil(min_f))],
            });
        }

        let grown = agent.stack.len() + 1 - self.seg.begin_index;
        if !self.seg.finalized && grown > self.k {
            // Close the segment at the old top and open one at the pushed
            // state; the seam contributes its h/dist discrepancy.
            let seam = oracle
                .shortest_path_cost(top, best)?
                .finite()
                .expect("successor is reachable");
            self.seams.push((top, best, seam));
            self.seg.discrepancy = self
                .seams
                .iter()
                .map(|&(e, b, d)| agent.h.get(b) as i64 - agent.h.get(e) as i64 + d as i64)
                .sum();
            self.seg.closed += 1;
            self.seg.begin_index = agent.stack.len();
            if let Cost::Finite(t) = params.quota {
                if self.seg.discrepancy > t as i64 {
                    self.seg.finalized = true;
                }
            }
        }
        Ok(StepDecision {
            direction: Direction::Forward,
            next_state: Some(best),
            lss,
            gamma_weight: params.gamma,
            h_updates: vec![],
        })
    }
}
