//! Runtime audits of the framework conditions.
//!
//! Each transition between consecutive agent states is checked against the
//! conditions a conforming policy must satisfy: the local search space
//! separates the current state from the goals, the heuristic weight stays in
//! range, forward pushes respect the weighted-distance inequality, pops only
//! follow a strict heuristic increase, θ-admissibility and monotonicity of
//! the heuristic hold, and the learning amount is accounted correctly.
//! Violations are data, not errors.

use std::fmt;

use crate::cost::Cost;
use crate::framework::{
    update_learning_amount, AccountingMode, AgentState, AlgoParams, Direction, StepDecision,
};
use crate::oracle::DistanceOracle;
use crate::problem::StateId;

const TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum AuditViolation {
    /// The local search space holds no separating set for the non-goal top.
    NoSeparatingSubset { t: u64, state: StateId },
    /// γ outside (0, γ̄].
    GammaOutOfRange { t: u64, gamma: f64 },
    /// Forward move did not push exactly one state onto the old stack.
    MalformedForward { t: u64 },
    /// Forward push without h(top) ≥ γ·dist(top, s) + h(s).
    ForwardConditionBroken { t: u64, from: StateId, to: StateId },
    /// Stack shrank without a strict heuristic increase at the old top.
    BacktrackWithoutIncrease { t: u64, state: StateId },
    /// h(s) exceeds θ·h*(s).
    AdmissibilityBroken {
        t: u64,
        state: StateId,
        h_units: u64,
    },
    /// Heuristic changed outside the local search space (current state
    /// excepted: it is always examined).
    ChangedOutsideLss { t: u64, state: StateId },
    /// Heuristic decreased.
    DecreasedInsideLss { t: u64, state: StateId },
    /// Recorded learning amount disagrees with the accounting rule.
    LearningAmountMismatch { t: u64, expected: u64, actual: u64 },
    /// Learning amount exceeds the quota (exclusion-mode accounting).
    QuotaExceeded { t: u64, u: u64 },
}

impl AuditViolation {
    pub fn cycle(&self) -> u64 {
        match self {
            AuditViolation::NoSeparatingSubset { t, .. }
            | AuditViolation::GammaOutOfRange { t, .. }
            | AuditViolation::MalformedForward { t }
            | AuditViolation::ForwardConditionBroken { t, .. }
            | AuditViolation::BacktrackWithoutIncrease { t, .. }
            | AuditViolation::AdmissibilityBroken { t, .. }
            | AuditViolation::ChangedOutsideLss { t, .. }
            | AuditViolation::DecreasedInsideLss { t, .. }
            | AuditViolation::LearningAmountMismatch { t, .. }
            | AuditViolation::QuotaExceeded { t, .. } => *t,
        }
    }
}

impl fmt::Display for AuditViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AuditViolation::NoSeparatingSubset { t, state } => {
                write!(
                    f,
                    "t={t}: local search space does not separate {state} from the goals"
                )
            }
            AuditViolation::GammaOutOfRange { t, gamma } => {
                write!(f, "t={t}: gamma {gamma} outside (0, gamma_bar]")
            }
            AuditViolation::MalformedForward { t } => {
                write!(f, "t={t}: forward move did not push exactly one state")
            }
            AuditViolation::ForwardConditionBroken { t, from, to } => {
                write!(
                    f,
                    "t={t}: forward push {from}->{to} violates the weighted-distance bound"
                )
            }
            AuditViolation::BacktrackWithoutIncrease { t, state } => {
                write!(f, "t={t}: stack shrank without increasing h({state})")
            }
            AuditViolation::AdmissibilityBroken { t, state, h_units } => {
                write!(f, "t={t}: h({state}) = {h_units} units exceeds theta * h*")
            }
            AuditViolation::ChangedOutsideLss { t, state } => {
                write!(
                    f,
                    "t={t}: h({state}) changed outside the local search space"
                )
            }
            AuditViolation::DecreasedInsideLss { t, state } => {
                write!(f, "t={t}: h({state}) decreased")
            }
            AuditViolation::LearningAmountMismatch {
                t,
                expected,
                actual,
            } => {
                write!(f, "t={t}: learning amount {actual} != expected {expected}")
            }
            AuditViolation::QuotaExceeded { t, u } => {
                write!(f, "t={t}: learning amount {u} exceeds the quota")
            }
        }
    }
}

/// Audits one transition `before` → `after` produced by `decision`.
pub fn audit_transition(
    oracle: &DistanceOracle,
    before: &AgentState,
    after: &AgentState,
    decision: &StepDecision,
    params: &AlgoParams,
) -> Vec<AuditViolation> {
    let problem = oracle.problem();
    let t = before.t;
    let top = before.stack.top();
    let mut out = Vec::new();

    // Separating-set condition: only imposed for a non-goal current state.
    if !problem.is_goal(top) {
        match oracle.is_separating(top, &decision.lss) {
            Ok(true) => {}
            Ok(false) => out.push(AuditViolation::NoSeparatingSubset { t, state: top }),
            Err(_) => out.push(AuditViolation::NoSeparatingSubset { t, state: top }),
        }
    }

    // Heuristic weight range.
    if !decision.gamma_weight.is_finite()
        || decision.gamma_weight <= 0.0
        || decision.gamma_weight > params.gamma_bar + TOL
    {
        out.push(AuditViolation::GammaOutOfRange {
            t,
            gamma: decision.gamma_weight,
        });
    }

    // Collect changed states.
    let changed: Vec<(StateId, u64, u64)> = problem
        .states()
        .filter_map(|s| {
            let (old, new) = (before.h.get(s), after.h.get(s));
            (old != new).then_some((s, old, new))
        })
        .collect();

    // Forward-push condition.
    if after.stack.len() > before.stack.len() {
        let well_formed = after.stack.len() == before.stack.len() + 1
            && after.stack.states()[..before.stack.len()] == *before.stack.states();
        if !well_formed {
            out.push(AuditViolation::MalformedForward { t });
        } else {
            let s = after.stack.top();
            let in_lss = decision.lss.contains(&s);
            let ok = match oracle.shortest_path_cost(top, s) {
                Ok(Cost::Finite(d)) => {
                    after.h.get(top) as f64 + TOL
                        >= decision.gamma_weight * d as f64 + after.h.get(s) as f64
                }
                _ => false,
            };
            if !in_lss || !ok {
                out.push(AuditViolation::ForwardConditionBroken {
                    t,
                    from: top,
                    to: s,
                });
            }
        }
    }

    // Backtracking requires a strict increase at the old top. Excision is
    // exempt: it collapses a cycle to an earlier occurrence of the target
    // and is legitimate with or without learning.
    if decision.direction == Direction::Backward && after.h.get(top) <= before.h.get(top) {
        out.push(AuditViolation::BacktrackWithoutIncrease { t, state: top });
    }

    // θ-admissibility wherever h changed.
    for &(s, _, new) in &changed {
        if let Cost::Finite(h_star) = oracle.goal_distance(s).unwrap_or(Cost::Infinity) {
            if new as f64 > params.theta * h_star as f64 + TOL {
                out.push(AuditViolation::AdmissibilityBroken {
                    t,
                    state: s,
                    h_units: new,
                });
            }
        }
    }

    // Changes confined to the local search space (plus the examined current
    // state) and monotone.
    for &(s, old, new) in &changed {
        if s != top && !decision.lss.contains(&s) {
            out.push(AuditViolation::ChangedOutsideLss { t, state: s });
        }
        if new < old {
            out.push(AuditViolation::DecreasedInsideLss { t, state: s });
        }
    }

    // Learning-amount accounting in the selected mode.
    let expected = update_learning_amount(
        before.u,
        &changed,
        decision.direction,
        &after.stack,
        problem.start(),
        top,
        params.accounting,
    );
    if expected != after.u {
        out.push(AuditViolation::LearningAmountMismatch {
            t,
            expected,
            actual: after.u,
        });
    }
    // The quota bound itself belongs to the exclusion-mode condition. In
    // total-increment accounting, SLA*T-style runs legitimately pass T and
    // switch to backtracking, so no bound is asserted there.
    if params.accounting == AccountingMode::AxiomExclusion {
        if let Cost::Finite(quota) = params.quota {
            if after.u > quota {
                out.push(AuditViolation::QuotaExceeded { t, u: after.u });
            }
        }
    }

    out
}
