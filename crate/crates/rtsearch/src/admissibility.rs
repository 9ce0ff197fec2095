//! Admissibility machinery: the raised heuristic over a visited region, the
//! strengthened max-of-min bound on single-state updates, and an empirical
//! checker that an update rule stays under the bound and preserves
//! θ-admissibility.

use std::collections::BTreeSet;

use crate::cost::Cost;
use crate::error::Error;
use crate::framework::HeuristicTable;
use crate::oracle::DistanceOracle;
use crate::problem::{ProblemSpec, StateId};

const TOL: f64 = 1e-9;

/// Cumulative union Γ* of all local search spaces seen so far.
#[derive(Debug, Clone, Default)]
pub struct VisitedUnion {
    set: BTreeSet<StateId>,
}

impl VisitedUnion {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn absorb(&mut self, states: impl IntoIterator<Item = StateId>) {
        self.set.extend(states);
    }

    pub fn contains(&self, s: StateId) -> bool {
        self.set.contains(&s)
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.set.iter().copied()
    }

    pub fn touches_goal(&self, problem: &ProblemSpec) -> bool {
        self.set.iter().any(|&s| problem.is_goal(s))
    }
}

/// h^Γ(s) = max over s' ∈ Γ of max{h(s), h(s') − θ·dist(s, s')}, in ε-units.
/// States unreachable from `s` contribute nothing.
pub fn raised_heuristic(
    oracle: &DistanceOracle,
    h: &HeuristicTable,
    gamma_set: &[StateId],
    s: StateId,
    theta: f64,
) -> Result<f64, Error> {
    if !gamma_set.contains(&s) {
        return Err(Error::Framework(format!(
            "raised heuristic requires {} to belong to the region",
            oracle.problem().name(s)
        )));
    }
    let mut best = h.get(s) as f64;
    for &other in gamma_set {
        if let Cost::Finite(d) = oracle.shortest_path_cost(s, other)? {
            best = best.max(h.get(other) as f64 - theta * d as f64);
        }
    }
    Ok(best)
}

/// How a bound value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundMode {
    /// Max over every separating subset of Γ*.
    Exact,
    /// Max over the nested-frontier family only: a lower bound on the max.
    FrontierApprox,
}

#[derive(Debug, Clone, Copy)]
pub struct UpdateBound {
    /// Largest admissibility-safe value for h(s), in ε-units.
    pub units: f64,
    pub mode: BoundMode,
}

/// Default cap on |Γ*| for exact subset enumeration.
pub const BRUTE_FORCE_CAP: usize = 12;

/// The strengthened max-of-min bound on h(s): max over separating subsets J
/// of Γ* (plus {s} itself) of min over s' ∈ J of θ·dist(s, s') + h^{Γ*}(s').
///
/// Exact up to `cap` states in Γ*; beyond that either falls back to the
/// frontier-family lower bound or, with `require_exact`, refuses.
pub fn max_update_bound(
    oracle: &DistanceOracle,
    h: &HeuristicTable,
    visited: &VisitedUnion,
    s: StateId,
    theta: f64,
    cap: usize,
    require_exact: bool,
) -> Result<UpdateBound, Error> {
    if !visited.contains(s) {
        return Err(Error::Framework(format!(
            "bound requires {} to belong to the visited region",
            oracle.problem().name(s)
        )));
    }
    let gamma: Vec<StateId> = visited.states().collect();
    let raised: Vec<f64> = gamma
        .iter()
        .map(|&g| raised_heuristic(oracle, h, &gamma, g, theta))
        .collect::<Result<_, _>>()?;
    let raised_at = |state: StateId| {
        raised[gamma
            .iter()
            .position(|&g| g == state)
            .expect("member of gamma")]
    };

    let subset_min = |members: &[StateId]| -> Result<f64, Error> {
        let mut min = f64::INFINITY;
        for &m in members {
            if let Cost::Finite(d) = oracle.shortest_path_cost(s, m)? {
                min = min.min(theta * d as f64 + raised_at(m));
            }
        }
        Ok(min)
    };

    // {s} is always admitted, giving bound ≥ h^{Γ*}(s).
    let mut bound = raised_at(s);

    if gamma.len() <= cap {
        for mask in 1u32..(1 << gamma.len()) {
            let members: Vec<StateId> = gamma
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &g)| g)
                .collect();
            if oracle.is_separating(s, &members)? {
                let min = subset_min(&members)?;
                if min.is_finite() {
                    bound = bound.max(min);
                }
            }
        }
        return Ok(UpdateBound {
            units: bound,
            mode: BoundMode::Exact,
        });
    }
    if require_exact {
        return Err(Error::Size(format!(
            "visited region has {} states, exact bound capped at {cap}",
            gamma.len()
        )));
    }

    // Frontier family: S(s,k) ∩ Γ* for each k, plus the region border.
    let mut families: Vec<Vec<StateId>> = Vec::new();
    let mut k = 1;
    loop {
        let frontier: Vec<StateId> = oracle
            .frontier(s, k)
            .into_iter()
            .filter(|f| visited.contains(*f))
            .collect();
        if frontier.is_empty() {
            break;
        }
        families.push(frontier);
        k += 1;
    }
    families.push(oracle.border(&gamma));
    for family in families {
        if !family.is_empty() && oracle.is_separating(s, &family)? {
            let min = subset_min(&family)?;
            if min.is_finite() {
                bound = bound.max(min);
            }
        }
    }
    Ok(UpdateBound {
        units: bound,
        mode: BoundMode::FrontierApprox,
    })
}

/// True iff h(s) ≤ θ·h*(s) everywhere; otherwise names an offending state.
pub fn check_theta_admissible(
    oracle: &DistanceOracle,
    h: &HeuristicTable,
    theta: f64,
) -> Result<(), StateId> {
    for (i, d) in oracle.goal_distances().iter().enumerate() {
        let s = StateId(i as u32);
        match d {
            Cost::Finite(units) => {
                if h.get(s) as f64 > theta * *units as f64 + TOL {
                    return Err(s);
                }
            }
            Cost::Infinity => {}
        }
    }
    Ok(())
}

/// A single-state update rule: proposes a new value (in ε-units) for the
/// heuristic at `s` given the current table and the visited region.
pub type UpdateRule =
    dyn Fn(&DistanceOracle, &HeuristicTable, &VisitedUnion, StateId) -> Result<f64, Error>;

#[derive(Debug, Clone, Default)]
pub struct Verdict {
    /// The rule proposed a value above the strengthened bound.
    pub exceeded_bound: bool,
    /// θ-admissibility was broken, with the first witness state.
    pub broke_admissibility: Option<StateId>,
    pub steps: usize,
}

#[derive(Debug, Clone, Default)]
pub struct VerdictReport {
    pub verdicts: Vec<Verdict>,
}

impl VerdictReport {
    pub fn never_exceeds(&self) -> bool {
        self.verdicts.iter().all(|v| !v.exceeded_bound)
    }

    pub fn never_breaks(&self) -> bool {
        self.verdicts
            .iter()
            .all(|v| v.broke_admissibility.is_none())
    }
}

/// Simulates a greedy agent applying `rule` at every visited state and
/// reports, per problem, whether the rule ever exceeded `max_update_bound`
/// and whether θ-admissibility ever broke. The bound is only asserted while
/// the visited region avoids the goals.
pub fn verify_update_rule(
    rule: &UpdateRule,
    problems: &[ProblemSpec],
    theta: f64,
) -> Result<VerdictReport, Error> {
    let mut report = VerdictReport::default();
    for problem in problems {
        let oracle = DistanceOracle::new(problem);
        let mut h = HeuristicTable::from_problem(problem);
        let mut visited = VisitedUnion::new();
        let mut cur = problem.start();
        let mut verdict = Verdict::default();
        let step_cap = 10 * problem.state_count() * problem.state_count();

        for _ in 0..step_cap {
            if problem.is_goal(cur) {
                break;
            }
            verdict.steps += 1;
            let succs: Vec<StateId> = problem.successors(cur).iter().map(|e| e.to).collect();
            visited.absorb(std::iter::once(cur));
            visited.absorb(succs.iter().copied());

            let proposed = rule(&oracle, &h, &visited, cur)?;
            if !visited.touches_goal(problem) {
                let bound =
                    max_update_bound(&oracle, &h, &visited, cur, theta, BRUTE_FORCE_CAP, false)?;
                if proposed > bound.units + TOL {
                    verdict.exceeded_bound = true;
                }
            }
            if proposed > h.get(cur) as f64 {
                h.set(cur, (proposed - TOL).ceil().max(0.0) as u64);
            }
            if verdict.broke_admissibility.is_none() {
                verdict.broke_admissibility = check_theta_admissible(&oracle, &h, theta).err();
            }

            // Greedy descent on dist + h, ties to the lowest id.
            let mut next = cur;
            let mut best = f64::INFINITY;
            for &s in &succs {
                if s == cur {
                    continue;
                }
                if let Cost::Finite(d) = oracle.shortest_path_cost(cur, s)? {
                    let f = d as f64 + h.get(s) as f64;
                    if f < best {
                        best = f;
                        next = s;
                    }
                }
            }
            cur = next;
        }
        report.verdicts.push(verdict);
    }
    Ok(report)
}

/// The one-step rule: min over successors of dist + h.
pub fn rule_min_successor(
    oracle: &DistanceOracle,
    h: &HeuristicTable,
    _visited: &VisitedUnion,
    s: StateId,
) -> Result<f64, Error> {
    let mut best = f64::INFINITY;
    for e in oracle.problem().successors(s) {
        if e.to != s {
            best = best.min(e.weight as f64 + h.get(e.to) as f64);
        }
    }
    Ok(if best.is_finite() {
        best
    } else {
        h.get(s) as f64
    })
}

/// The max-of-mins rule over the nested frontiers inside the visited region.
pub fn rule_max_of_mins(
    oracle: &DistanceOracle,
    h: &HeuristicTable,
    visited: &VisitedUnion,
    s: StateId,
) -> Result<f64, Error> {
    let mut best = h.get(s) as f64;
    let mut k = 1;
    loop {
        let frontier: Vec<StateId> = oracle
            .frontier(s, k)
            .into_iter()
            .filter(|f| visited.contains(*f))
            .collect();
        if frontier.is_empty() {
            break;
        }
        if oracle.is_separating(s, &frontier)? {
            let mut min = f64::INFINITY;
            for &f in &frontier {
                if let Cost::Finite(d) = oracle.shortest_path_cost(s, f)? {
                    min = min.min(d as f64 + h.get(f) as f64);
                }
            }
            if min.is_finite() {
                best = best.max(min);
            }
        }
        k += 1;
    }
    Ok(best)
}

/// Three states in a unit chain s—m—g with h(s) deliberately low: the
/// strengthened bound at s is 2, and any update above it over-estimates.
pub fn tight_chain_fixture() -> ProblemSpec {
    let mut b = crate::problem::ProblemBuilder::new(1.0, 1.0);
    let s = b.add_state("s", 1);
    let m = b.add_state("m", 1);
    let g = b.add_state("g", 0);
    b.add_undirected_edge(s, m, 1);
    b.add_undirected_edge(m, g, 1);
    b.set_goal(g);
    b.set_start(s);
    b.build().expect("fixture is well-formed")
}

/// Three states n—s—g where the only separating family for s is {s} itself,
/// yet the high-valued neighbor n raises h(s) from 1 to 2 — still
/// admissible because the s—g edge costs 2.
pub fn raised_neighbor_fixture() -> ProblemSpec {
    let mut b = crate::problem::ProblemBuilder::new(1.0, 1.0);
    let n = b.add_state("n", 3);
    let s = b.add_state("s", 1);
    let g = b.add_state("g", 0);
    b.add_undirected_edge(n, s, 1);
    b.add_undirected_edge(s, g, 2);
    b.set_goal(g);
    b.set_start(s);
    b.build().expect("fixture is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{example_one, gen_problem, GenSpec};

    #[test]
    fn raised_heuristic_self_region_is_identity() {
        let p = example_one();
        let o = DistanceOracle::new(&p);
        let h = HeuristicTable::from_problem(&p);
        let d = p.find_state("D").unwrap();
        assert_eq!(raised_heuristic(&o, &h, &[d], d, 1.0).unwrap(), 7.0);
    }

    #[test]
    fn raised_heuristic_of_zero_table_is_zero() {
        let p = example_one();
        let o = DistanceOracle::new(&p);
        let h = HeuristicTable::from_units(vec![0; 4]);
        let all: Vec<StateId> = p.states().collect();
        for s in p.states() {
            assert_eq!(raised_heuristic(&o, &h, &all, s, 1.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn high_neighbor_raises_the_estimate() {
        let p = raised_neighbor_fixture();
        let o = DistanceOracle::new(&p);
        let h = HeuristicTable::from_problem(&p);
        let s = p.find_state("s").unwrap();
        let n = p.find_state("n").unwrap();
        let raised = raised_heuristic(&o, &h, &[s, n], s, 1.0).unwrap();
        assert_eq!(raised, 2.0);
    }

    #[test]
    fn tight_chain_bound_is_two() {
        let p = tight_chain_fixture();
        let o = DistanceOracle::new(&p);
        let h = HeuristicTable::from_problem(&p);
        let s = p.find_state("s").unwrap();
        let m = p.find_state("m").unwrap();
        let mut visited = VisitedUnion::new();
        visited.absorb([s, m]);
        let b = max_update_bound(&o, &h, &visited, s, 1.0, BRUTE_FORCE_CAP, true).unwrap();
        assert_eq!(b.mode, BoundMode::Exact);
        assert_eq!(b.units, 2.0);
        // The bound is exactly θ·h*(s): anything above it over-estimates.
        assert_eq!(o.goal_distance(s).unwrap(), Cost::Finite(2));
    }

    #[test]
    fn no_separating_subset_leaves_the_raised_value() {
        let p = raised_neighbor_fixture();
        let o = DistanceOracle::new(&p);
        let h = HeuristicTable::from_problem(&p);
        let s = p.find_state("s").unwrap();
        let n = p.find_state("n").unwrap();
        let mut visited = VisitedUnion::new();
        visited.absorb([s, n]);
        let b = max_update_bound(&o, &h, &visited, s, 1.0, BRUTE_FORCE_CAP, true).unwrap();
        // {n} does not separate s from g, so only {s} contributes; the
        // raised value 2 beats the plain max-of-min value of 1, and an
        // update to 2 stays 1-admissible here.
        assert_eq!(b.units, 2.0);
        let mut h2 = h.clone();
        h2.set(s, 2);
        assert_eq!(check_theta_admissible(&o, &h2, 1.0), Ok(()));
    }

    #[test]
    fn exact_mode_refuses_large_regions() {
        let p = gen_problem(&GenSpec::random(20, 3)).unwrap();
        let o = DistanceOracle::new(&p);
        let h = HeuristicTable::from_problem(&p);
        let mut visited = VisitedUnion::new();
        visited.absorb(p.states());
        let err = max_update_bound(&o, &h, &visited, p.start(), 1.0, BRUTE_FORCE_CAP, true);
        assert!(matches!(err, Err(Error::Size(_))));
        let approx =
            max_update_bound(&o, &h, &visited, p.start(), 1.0, BRUTE_FORCE_CAP, false).unwrap();
        assert_eq!(approx.mode, BoundMode::FrontierApprox);
        assert!(approx.units >= h.get(p.start()) as f64);
    }

    #[test]
    fn admissibility_check_on_the_example() {
        let p = example_one();
        let o = DistanceOracle::new(&p);
        let h = HeuristicTable::from_problem(&p);
        assert_eq!(check_theta_admissible(&o, &h, 1.0), Ok(()));
        let d = p.find_state("D").unwrap();
        let mut h2 = h.clone();
        h2.set(d, 31);
        assert_eq!(check_theta_admissible(&o, &h2, 1.0), Err(d));
    }

    #[test]
    fn min_successor_rule_never_exceeds_or_breaks() {
        let problems: Vec<ProblemSpec> = (0..25)
            .map(|seed| gen_problem(&GenSpec::random(8, seed)).unwrap())
            .collect();
        let report = verify_update_rule(&rule_min_successor, &problems, 1.0).unwrap();
        assert!(report.never_exceeds());
        assert!(report.never_breaks());
    }

    #[test]
    fn max_of_mins_rule_never_breaks() {
        let problems: Vec<ProblemSpec> = (25..50)
            .map(|seed| gen_problem(&GenSpec::random(8, seed)).unwrap())
            .collect();
        let report = verify_update_rule(&rule_max_of_mins, &problems, 1.0).unwrap();
        assert!(report.never_breaks());
    }

    #[test]
    fn overshooting_the_bound_breaks_admissibility() {
        let over: Box<UpdateRule> = Box::new(|oracle, h, visited, s| {
            let b = max_update_bound(oracle, h, visited, s, 1.0, BRUTE_FORCE_CAP, false)?;
            Ok(b.units + 1.0)
        });
        let report = verify_update_rule(&over, &[tight_chain_fixture()], 1.0).unwrap();
        let v = &report.verdicts[0];
        assert!(v.exceeded_bound);
        assert!(v.broke_admissibility.is_some());
    }
}
