//! Exact distance oracles and set predicates over a `ProblemSpec`.
//!
//! Distances come from single-source Dijkstra runs cached per source.
//! Goal distances h* for all states come from one multi-source run over the
//! reversed graph. The separating-set test avoids path enumeration: a
//! candidate set fails to separate `s` from a goal `g` exactly when a
//! shortest s→g path survives after removing the candidate states, which a
//! single restricted Dijkstra detects.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::sync::{Mutex, OnceLock};

use crate::cost::Cost;
use crate::error::Error;
use crate::problem::{Edge, ProblemSpec, ProblemViolation, StateId, ValidationReport};

/// Cached exact shortest-path oracle. Read-only problem, interior caches.
pub struct DistanceOracle<'a> {
    problem: &'a ProblemSpec,
    per_source: Mutex<HashMap<StateId, std::sync::Arc<Vec<Cost>>>>,
    goal_dist: OnceLock<Vec<Cost>>,
}

impl<'a> DistanceOracle<'a> {
    pub fn new(problem: &'a ProblemSpec) -> Self {
        DistanceOracle {
            problem,
            per_source: Mutex::new(HashMap::new()),
            goal_dist: OnceLock::new(),
        }
    }

    pub fn problem(&self) -> &'a ProblemSpec {
        self.problem
    }

    fn dijkstra(&self, source: StateId, blocked: Option<&[bool]>) -> Vec<Cost> {
        let n = self.problem.state_count();
        let mut dist = vec![Cost::Infinity; n];
        let mut heap: BinaryHeap<Reverse<(u64, u32)>> = BinaryHeap::new();
        dist[source.index()] = Cost::ZERO;
        heap.push(Reverse((0, source.0)));
        while let Some(Reverse((d, s))) = heap.pop() {
            if Cost::Finite(d) > dist[s as usize] {
                continue;
            }
            for &Edge { to, weight } in self.problem.successors(StateId(s)) {
                if blocked.is_some_and(|b| b[to.index()]) {
                    continue;
                }
                let nd = d + weight;
                if Cost::Finite(nd) < dist[to.index()] {
                    dist[to.index()] = Cost::Finite(nd);
                    heap.push(Reverse((nd, to.0)));
                }
            }
        }
        dist
    }

    fn source_row(&self, source: StateId) -> std::sync::Arc<Vec<Cost>> {
        let mut cache = self.per_source.lock().unwrap();
        cache
            .entry(source)
            .or_insert_with(|| std::sync::Arc::new(self.dijkstra(source, None)))
            .clone()
    }

    /// dist(a, b): minimum cumulative edge weight, infinity if unreachable.
    pub fn shortest_path_cost(&self, a: StateId, b: StateId) -> Result<Cost, Error> {
        self.problem.check_state(a)?;
        self.problem.check_state(b)?;
        Ok(self.source_row(a)[b.index()])
    }

    /// h*(s) = min over goals of dist(s, g). Computed for all states at once
    /// by a multi-source Dijkstra on the reversed graph.
    pub fn goal_distance(&self, s: StateId) -> Result<Cost, Error> {
        self.problem.check_state(s)?;
        Ok(self.goal_distances()[s.index()])
    }

    pub fn goal_distances(&self) -> &[Cost] {
        self.goal_dist.get_or_init(|| {
            let n = self.problem.state_count();
            let mut rev: Vec<Vec<Edge>> = vec![Vec::new(); n];
            for s in self.problem.states() {
                for &Edge { to, weight } in self.problem.successors(s) {
                    rev[to.index()].push(Edge { to: s, weight });
                }
            }
            let mut dist = vec![Cost::Infinity; n];
            let mut heap: BinaryHeap<Reverse<(u64, u32)>> = BinaryHeap::new();
            for &g in self.problem.goals() {
                dist[g.index()] = Cost::ZERO;
                heap.push(Reverse((0, g.0)));
            }
            while let Some(Reverse((d, s))) = heap.pop() {
                if Cost::Finite(d) > dist[s as usize] {
                    continue;
                }
                for &Edge { to, weight } in &rev[s as usize] {
                    let nd = d + weight;
                    if Cost::Finite(nd) < dist[to.index()] {
                        dist[to.index()] = Cost::Finite(nd);
                        heap.push(Reverse((nd, to.0)));
                    }
                }
            }
            dist
        })
    }

    /// ‖a, b‖: fewest edges among all minimum-cost a→b paths.
    ///
    /// Dijkstra over lexicographic (cost, edge count) keys.
    pub fn edge_distance(&self, a: StateId, b: StateId) -> Result<Cost, Error> {
        self.problem.check_state(a)?;
        self.problem.check_state(b)?;
        Ok(self.edge_distances_from(a)[b.index()])
    }

    /// ‖a, S'‖ = min over s' ∈ S' of ‖a, s'‖.
    pub fn edge_distance_to_set(&self, a: StateId, set: &[StateId]) -> Result<Cost, Error> {
        self.problem.check_state(a)?;
        let dists = self.edge_distances_from(a);
        let mut best = Cost::Infinity;
        for &s in set {
            self.problem.check_state(s)?;
            best = best.min(dists[s.index()]);
        }
        Ok(best)
    }

    /// Edge distances from `a` to every state, as `Cost` edge counts.
    pub fn edge_distances_from(&self, a: StateId) -> Vec<Cost> {
        let n = self.problem.state_count();
        let mut dist: Vec<(Cost, u64)> = vec![(Cost::Infinity, u64::MAX); n];
        let mut heap: BinaryHeap<Reverse<(u64, u64, u32)>> = BinaryHeap::new();
        dist[a.index()] = (Cost::ZERO, 0);
        heap.push(Reverse((0, 0, a.0)));
        while let Some(Reverse((d, e, s))) = heap.pop() {
            if (Cost::Finite(d), e) > dist[s as usize] {
                continue;
            }
            for &Edge { to, weight } in self.problem.successors(StateId(s)) {
                let cand = (Cost::Finite(d + weight), e + 1);
                if cand < dist[to.index()] {
                    dist[to.index()] = cand;
                    heap.push(Reverse((d + weight, e + 1, to.0)));
                }
            }
        }
        dist.into_iter()
            .map(|(c, e)| {
                if c.is_finite() {
                    Cost::Finite(e)
                } else {
                    Cost::Infinity
                }
            })
            .collect()
    }

    /// States at edge-distance exactly `k` from `s`.
    pub fn frontier(&self, s: StateId, k: u64) -> Vec<StateId> {
        self.edge_distances_from(s)
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == Cost::Finite(k))
            .map(|(i, _)| StateId(i as u32))
            .collect()
    }

    /// True iff every shortest path from `s` to every reachable goal passes
    /// through some member of `candidate`.
    ///
    /// A state containing itself in `candidate` is trivially separated. For
    /// each reachable goal g, compares dist(s, g) against the shortest path
    /// avoiding all candidate states; equality means a shortest path dodges
    /// the candidate set.
    pub fn is_separating(&self, s: StateId, candidate: &[StateId]) -> Result<bool, Error> {
        self.problem.check_state(s)?;
        for &c in candidate {
            self.problem.check_state(c)?;
            if c == s {
                return Ok(true);
            }
        }
        // Fast path: the full successor set of a non-goal state always
        // separates it, since every path from s enters some successor first.
        if !self.problem.is_goal(s) {
            let succs = self.problem.successors(s);
            if !succs.is_empty() && succs.iter().all(|e| e.to == s || candidate.contains(&e.to)) {
                return Ok(true);
            }
        }
        let mut blocked = vec![false; self.problem.state_count()];
        for &c in candidate {
            blocked[c.index()] = true;
        }
        blocked[s.index()] = false;
        let unrestricted = self.source_row(s);
        let restricted = self.dijkstra(s, Some(&blocked));
        for &g in self.problem.goals() {
            if unrestricted[g.index()].is_finite()
                && restricted[g.index()] == unrestricted[g.index()]
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// ∂Γ: members of `gamma` with at least one out-edge leaving `gamma`.
    pub fn border(&self, gamma: &[StateId]) -> Vec<StateId> {
        let mut inside = vec![false; self.problem.state_count()];
        for &s in gamma {
            inside[s.index()] = true;
        }
        let mut result: Vec<StateId> = gamma
            .iter()
            .copied()
            .filter(|&s| {
                self.problem
                    .successors(s)
                    .iter()
                    .any(|e| !inside[e.to.index()])
            })
            .collect();
        result.sort();
        result.dedup();
        result
    }

    /// Checks goal reachability and θ-admissibility of the initial heuristic.
    ///
    /// Finite out-degree holds by construction for any finite `ProblemSpec`,
    /// so it never produces a report entry.
    pub fn validate_problem(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let theta = self.problem.theta();
        for s in self.problem.states() {
            let h_star = self.goal_distances()[s.index()];
            match h_star {
                Cost::Infinity => report.violations.push(ProblemViolation::GoalUnreachable(s)),
                Cost::Finite(units) => {
                    let h0 = self.problem.h_init()[s.index()];
                    if h0 as f64 > theta * units as f64 + 1e-9 {
                        report.violations.push(ProblemViolation::Inadmissible {
                            state: s,
                            h_units: h0,
                            h_star,
                        });
                    }
                }
            }
        }
        report
    }
}
