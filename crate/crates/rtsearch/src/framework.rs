//! The generic stack-based agent loop with learning-amount accounting.
//!
//! One cycle = plan (policy produces a `StepDecision`), learn (apply the
//! heuristic updates and charge the learning amount), execute (push, pop,
//! excise, or stay). The loop ends when a goal state is on top of the stack
//! or the step budget runs out.

use crate::audit::{audit_transition, AuditViolation};
use crate::cost::Cost;
use crate::error::Error;
use crate::oracle::DistanceOracle;
use crate::problem::{ProblemSpec, StateId};
use crate::stack::StackPath;

/// Time-indexed mutable map state → heuristic estimate, in ε-units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeuristicTable {
    values: Vec<u64>,
}

impl HeuristicTable {
    pub fn from_problem(problem: &ProblemSpec) -> Self {
        HeuristicTable {
            values: problem.h_init().to_vec(),
        }
    }

    pub fn from_units(values: Vec<u64>) -> Self {
        HeuristicTable { values }
    }

    pub fn get(&self, s: StateId) -> u64 {
        self.values[s.index()]
    }

    pub fn set(&mut self, s: StateId, units: u64) {
        self.values[s.index()] = units;
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }
}

/// How the learning amount u is charged.
///
/// `TotalIncrement` follows the worked LRTA* trace: every heuristic
/// increment is charged. `AxiomExclusion` follows the quota condition with
/// its exclusion set ∇: only increments at states on the new stack are
/// charged, never at the start state, and on backtracking moves not at the
/// popped state either. The two conventions differ on quota-bounded runs,
/// so both are kept selectable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AccountingMode {
    TotalIncrement,
    AxiomExclusion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    /// Lowest state id wins.
    StateOrder,
    /// Uniform choice among tied candidates from a seeded generator.
    Seeded(u64),
}

/// Control parameters shared by all policies.
#[derive(Debug, Clone)]
pub struct AlgoParams {
    /// Admissibility weight θ.
    pub theta: f64,
    /// Heuristic weight γ applied each step (held constant per run).
    pub gamma: f64,
    /// Upper bound γ̄ on the heuristic weight.
    pub gamma_bar: f64,
    /// Learning quota T in ε-units; `Cost::Infinity` disables it.
    pub quota: Cost,
    pub accounting: AccountingMode,
    /// Lookahead depth bound for the dynamic-lookahead policy.
    pub d_max: u64,
    /// Segment length k for piecewise backtracking.
    pub segment_len: usize,
    pub tie_break: TieBreak,
}

impl AlgoParams {
    pub fn new(theta: f64) -> Self {
        AlgoParams {
            theta,
            gamma: 1.0,
            gamma_bar: 1.0,
            quota: Cost::Infinity,
            accounting: AccountingMode::TotalIncrement,
            d_max: 1,
            segment_len: 1,
            tie_break: TieBreak::StateOrder,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !self.theta.is_finite() || self.theta <= 0.0 {
            return Err(Error::Config("theta must be positive".into()));
        }
        if !self.gamma.is_finite() || self.gamma <= 0.0 || self.gamma > self.gamma_bar + 1e-12 {
            return Err(Error::Config(
                "gamma must satisfy 0 < gamma <= gamma_bar".into(),
            ));
        }
        if self.theta + 1e-12 < self.gamma_bar {
            return Err(Error::Config("theta must be at least gamma_bar".into()));
        }
        if self.segment_len == 0 {
            return Err(Error::Config("segment length k must be at least 1".into()));
        }
        if self.d_max == 0 {
            return Err(Error::Config("d_max must be at least 1".into()));
        }
        Ok(())
    }
}

/// Move kind taken in one cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Push one state from the local search space.
    Forward,
    /// Pop the top state.
    Backward,
    /// Leave the stack unchanged.
    Stay,
    /// Move to an earlier occurrence of a state already on the stack,
    /// popping everything above it (acyclic cycle excision).
    Excise,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
            Direction::Stay => "stay",
            Direction::Excise => "excise",
        }
    }

    pub fn parse(s: &str) -> Option<Direction> {
        match s {
            "forward" => Some(Direction::Forward),
            "backward" => Some(Direction::Backward),
            "stay" => Some(Direction::Stay),
            "excise" => Some(Direction::Excise),
            _ => None,
        }
    }
}

/// One planning cycle's outcome: local search space, weight, heuristic
/// updates, and the move.
#[derive(Debug, Clone)]
pub struct StepDecision {
    pub direction: Direction,
    /// Target state for forward and excise moves.
    pub next_state: Option<StateId>,
    /// Local search space Γ(σ_t), excluding the current state (which is
    /// always examined and may always receive an update).
    pub lss: Vec<StateId>,
    pub gamma_weight: f64,
    /// New heuristic values in ε-units; must not decrease any state.
    pub h_updates: Vec<(StateId, u64)>,
}

/// Full agent state between cycles.
#[derive(Debug, Clone)]
pub struct AgentState {
    pub t: u64,
    pub stack: StackPath,
    pub h: HeuristicTable,
    /// Learning amount in ε-units.
    pub u: u64,
}

impl AgentState {
    pub fn initial(problem: &ProblemSpec) -> Self {
        AgentState {
            t: 0,
            stack: StackPath::new(problem.start()),
            h: HeuristicTable::from_problem(problem),
            u: 0,
        }
    }
}

/// Per-cycle trace record.
#[derive(Debug, Clone)]
pub struct StepRecord {
    pub t: u64,
    pub top: StateId,
    pub direction: Direction,
    pub moved_to: Option<StateId>,
    pub stack_len_after: usize,
    pub gamma: f64,
    /// Learning amount after this cycle, in ε-units.
    pub u_after: u64,
    /// (state, old units, new units) for every changed heuristic value.
    pub h_changes: Vec<(StateId, u64, u64)>,
    pub lss: Vec<StateId>,
}

/// Cost of a stack path plus a diagnostic when consecutive states are
/// mutually unreachable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathCost {
    pub cost: Cost,
    /// Index j of the first pair (s_{j-1}, s_j) with infinite distance.
    pub disconnected_at: Option<usize>,
}

/// Outcome of a run.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub final_stack: StackPath,
    pub solution_cost: Cost,
    /// Cost of every executed move, backtracking included, in ε-units.
    pub travel_cost: Cost,
    pub cycles: u64,
    pub timed_out: bool,
    pub audit: Vec<AuditViolation>,
    pub trace: Vec<StepRecord>,
    pub final_h: HeuristicTable,
    pub final_u: u64,
}

/// A step policy: one `StepDecision` per cycle.
pub trait StepPolicy {
    fn name(&self) -> &'static str;
    fn decide(
        &mut self,
        agent: &AgentState,
        oracle: &DistanceOracle,
        params: &AlgoParams,
    ) -> Result<StepDecision, Error>;
}

#[derive(Debug, Clone, Copy)]
pub enum StepBudget {
    /// 10 · |S|² · ceil(θ · max h* / ε) cycles.
    Auto,
    Steps(u64),
}

impl StepBudget {
    pub fn resolve(self, oracle: &DistanceOracle, params: &AlgoParams) -> u64 {
        match self {
            StepBudget::Steps(n) => n,
            StepBudget::Auto => {
                let n = oracle.problem().state_count() as u64;
                let max_h = oracle
                    .goal_distances()
                    .iter()
                    .filter_map(|c| c.finite())
                    .max()
                    .unwrap_or(0);
                let headroom = ((params.theta * max_h as f64).ceil() as u64).max(1);
                10u64
                    .saturating_mul(n)
                    .saturating_mul(n)
                    .saturating_mul(headroom)
            }
        }
    }
}

/// Σ dist(s_{j-1}, s_j) over the stack.
pub fn solution_cost(oracle: &DistanceOracle, stack: &StackPath) -> PathCost {
    let states = stack.states();
    let mut total = 0u64;
    for j in 1..states.len() {
        match oracle
            .shortest_path_cost(states[j - 1], states[j])
            .expect("stack states belong to the problem")
        {
            Cost::Finite(d) => total += d,
            Cost::Infinity => {
                return PathCost {
                    cost: Cost::Infinity,
                    disconnected_at: Some(j),
                }
            }
        }
    }
    PathCost {
        cost: Cost::Finite(total),
        disconnected_at: None,
    }
}

/// Raised when charging a heuristic increment would push u past the quota.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuotaExceeded {
    pub would_be: u64,
}

/// New learning amount after a transition.
///
/// `changes` holds (state, old, new) heuristic values. In exclusion mode
/// only increments at states on the new stack count, minus the exclusion
/// set: the start state always, plus the popped state on shrinking moves.
pub fn update_learning_amount(
    u_prev: u64,
    changes: &[(StateId, u64, u64)],
    direction: Direction,
    stack_after: &StackPath,
    start: StateId,
    old_top: StateId,
    mode: AccountingMode,
) -> u64 {
    let increment: u64 = match mode {
        AccountingMode::TotalIncrement => changes.iter().map(|&(_, old, new)| new - old).sum(),
        AccountingMode::AxiomExclusion => {
            let shrinks = matches!(direction, Direction::Backward | Direction::Excise);
            changes
                .iter()
                .filter(|&&(s, _, _)| {
                    s != start && !(shrinks && s == old_top) && stack_after.contains(s)
                })
                .map(|&(_, old, new)| new - old)
                .sum()
        }
    };
    u_prev + increment
}

/// As `update_learning_amount`, but signals when the quota would be
/// exceeded so the caller can convert the step into backtracking.
#[allow(clippy::too_many_arguments)]
pub fn charge_learning_amount(
    u_prev: u64,
    changes: &[(StateId, u64, u64)],
    direction: Direction,
    stack_after: &StackPath,
    start: StateId,
    old_top: StateId,
    mode: AccountingMode,
    quota: Cost,
) -> Result<u64, QuotaExceeded> {
    let u = update_learning_amount(
        u_prev,
        changes,
        direction,
        stack_after,
        start,
        old_top,
        mode,
    );
    match quota {
        Cost::Finite(t) if u > t => Err(QuotaExceeded { would_be: u }),
        _ => Ok(u),
    }
}

/// Runs `policy` on the problem behind `oracle` until a goal tops the stack
/// or the budget is exhausted.
pub fn run_search(
    policy: &mut dyn StepPolicy,
    oracle: &DistanceOracle,
    params: &AlgoParams,
    budget: StepBudget,
    audit_on: bool,
) -> Result<RunResult, Error> {
    params.validate()?;
    let problem = oracle.problem();
    let max_cycles = budget.resolve(oracle, params);
    let mut agent = AgentState::initial(problem);
    let mut trace: Vec<StepRecord> = Vec::new();
    let mut audit: Vec<AuditViolation> = Vec::new();
    let mut travel = 0u64;
    let mut timed_out = false;

    while !problem.is_goal(agent.stack.top()) {
        if agent.t >= max_cycles {
            timed_out = true;
            break;
        }
        let decision = policy.decide(&agent, oracle, params)?;
        let top = agent.stack.top();

        // Structural checks: Eq-6-style target membership is a hard error,
        // not an audit finding.
        if decision.direction == Direction::Forward {
            let next = decision
                .next_state
                .ok_or_else(|| Error::Framework("forward move without a target".into()))?;
            if !decision.lss.contains(&next) {
                return Err(Error::Framework(format!(
                    "forward target {} is outside the local search space",
                    problem.name(next)
                )));
            }
        }

        let before = audit_on.then(|| agent.clone());

        // Learning phase: apply h updates.
        let mut changes: Vec<(StateId, u64, u64)> = Vec::new();
        for &(s, new) in &decision.h_updates {
            problem.check_state(s)?;
            let old = agent.h.get(s);
            if new < old {
                return Err(Error::Framework(format!(
                    "policy decreased h({}) from {old} to {new}",
                    problem.name(s)
                )));
            }
            if new > old {
                agent.h.set(s, new);
                changes.push((s, old, new));
            }
        }

        // Execution phase.
        let moved_to = match decision.direction {
            Direction::Forward => {
                let next = decision.next_state.unwrap();
                match oracle.shortest_path_cost(top, next)? {
                    Cost::Finite(d) => travel += d,
                    Cost::Infinity => {
                        return Err(Error::Framework(format!(
                            "forward target {} unreachable from {}",
                            problem.name(next),
                            problem.name(top)
                        )))
                    }
                }
                agent.stack.push(next);
                Some(next)
            }
            Direction::Backward => {
                if agent.stack.len() < 2 {
                    return Err(Error::Framework(
                        "cannot backtrack past the start state".into(),
                    ));
                }
                agent.stack.pop();
                let prev = agent.stack.top();
                if let Cost::Finite(d) = oracle.shortest_path_cost(top, prev)? {
                    travel += d;
                }
                Some(prev)
            }
            Direction::Stay => None,
            Direction::Excise => {
                let target = decision
                    .next_state
                    .ok_or_else(|| Error::Framework("excise move without a target".into()))?;
                let idx = agent.stack.find(target).ok_or_else(|| {
                    Error::Framework(format!(
                        "excise target {} is not on the stack",
                        problem.name(target)
                    ))
                })?;
                if let Cost::Finite(d) = oracle.shortest_path_cost(top, target)? {
                    travel += d;
                }
                agent.stack.pop_to(idx);
                Some(target)
            }
        };

        agent.u = update_learning_amount(
            agent.u,
            &changes,
            decision.direction,
            &agent.stack,
            problem.start(),
            top,
            params.accounting,
        );
        agent.t += 1;

        if let Some(before) = before {
            audit.extend(audit_transition(oracle, &before, &agent, &decision, params));
        }

        trace.push(StepRecord {
            t: agent.t - 1,
            top,
            direction: decision.direction,
            moved_to,
            stack_len_after: agent.stack.len(),
            gamma: decision.gamma_weight,
            u_after: agent.u,
            h_changes: changes,
            lss: decision.lss,
        });
    }

    let path = solution_cost(oracle, &agent.stack);
    Ok(RunResult {
        solution_cost: if timed_out { Cost::Infinity } else { path.cost },
        final_stack: agent.stack,
        travel_cost: Cost::Finite(travel),
        cycles: agent.t,
        timed_out,
        audit,
        trace,
        final_h: agent.h,
        final_u: agent.u,
    })
}
