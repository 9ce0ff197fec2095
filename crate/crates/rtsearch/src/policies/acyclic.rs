//! Keeps the stack duplicate-free: a forward move into a state already on
//! the stack is rewritten as an excision back to its earlier occurrence.

use crate::error::Error;
use crate::framework::{AgentState, AlgoParams, Direction, StepDecision, StepPolicy};
use crate::oracle::DistanceOracle;

pub struct Acyclic {
    inner: Box<dyn StepPolicy>,
}

impl Acyclic {
    pub fn new(inner: Box<dyn StepPolicy>) -> Self {
        Acyclic { inner }
    }
}

impl StepPolicy for Acyclic {
    fn name(&self) -> &'static str {
        "acyclic"
    }

    fn decide(
        &mut self,
        agent: &AgentState,
        oracle: &DistanceOracle,
        params: &AlgoParams,
    ) -> Result<StepDecision, Error> {
        let mut decision = self.inner.decide(agent, oracle, params)?;
        if decision.direction == Direction::Forward {
            let target = decision.next_state.expect("forward move names a target");
            if agent.stack.contains(target) {
                decision.direction = Direction::Excise;
            }
        }
        Ok(decision)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::{run_search, StepBudget, TieBreak};
    use crate::gen::example_one;
    use crate::policies::{Lrta, TieBreaker};

    #[test]
    fn lrta_acyclic_excises_instead_of_repushing() {
        // Plain LRTA* on the example revisits C; the wrapper pops back to
        // the original C instead, so no state appears twice.
        let p = example_one();
        let o = DistanceOracle::new(&p);
        let params = AlgoParams::new(1.0);
        let mut policy = Acyclic::new(Box::new(Lrta::new(TieBreaker::new(TieBreak::StateOrder))));
        let r = run_search(&mut policy, &o, &params, StepBudget::Auto, true).unwrap();
        let names: Vec<&str> = r.final_stack.states().iter().map(|&s| p.name(s)).collect();
        assert_eq!(names, ["C", "B", "A"]);
        assert_eq!(r.solution_cost, crate::cost::Cost::Finite(20));
        let mut seen = r.final_stack.states().to_vec();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), r.final_stack.len());
        assert!(r.audit.is_empty(), "audit: {:?}", r.audit);
    }
}
