//! Built-in problem generators: the worked four-state chain and seeded
//! random symmetric graphs that are valid by construction.

use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::oracle::DistanceOracle;
use crate::problem::{ProblemBuilder, ProblemSpec, StateId};

/// The four-state chain A—B—C—D with ε = 0.1: unit edges, goal A, start C,
/// h = (0, 1, 1, 0.7). The underestimate at the dead-end D baits the agent
/// into a detour, which makes this the canonical smoke-test problem.
pub fn example_one() -> ProblemSpec {
    chain(4).expect("the four-state chain is well-formed")
}

/// A chain of `n` unit-cost states with the goal at one end, the start one
/// hop from the other, and a baited heuristic at the far end. `chain(4)` is
/// `example_one` exactly.
pub fn chain(n: usize) -> Result<ProblemSpec, Error> {
    if n < 3 {
        return Err(Error::Config("chain needs at least 3 states".into()));
    }
    let mut b = ProblemBuilder::new(0.1, 1.0);
    let ids: Vec<StateId> = (0..n).map(|i| b.add_state(state_name(i), 10)).collect();
    for w in ids.windows(2) {
        b.add_undirected_edge(w[0], w[1], 10);
    }
    b.set_goal(ids[0]);
    b.set_h_init(ids[0], 0);
    b.set_h_init(ids[n - 1], 7);
    b.set_start(ids[n - 2]);
    b.build()
}

fn state_name(i: usize) -> String {
    if i < 26 {
        char::from(b'A' + i as u8).to_string()
    } else {
        format!("s{i}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Chain,
    Random,
}

impl FromStr for GenKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "chain" => Ok(GenKind::Chain),
            "random" => Ok(GenKind::Random),
            other => Err(Error::Config(format!("unknown generator '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GenSpec {
    pub kind: GenKind,
    pub size: usize,
    pub seed: u64,
    /// Inclusive edge-weight range in ε-units (random graphs only).
    pub weight_units: (u64, u64),
    pub theta: f64,
}

impl GenSpec {
    pub fn random(size: usize, seed: u64) -> Self {
        GenSpec {
            kind: GenKind::Random,
            size,
            seed,
            weight_units: (1, 1),
            theta: 1.0,
        }
    }
}

pub fn gen_problem(spec: &GenSpec) -> Result<ProblemSpec, Error> {
    match spec.kind {
        GenKind::Chain => chain(spec.size),
        GenKind::Random => random_graph(spec),
    }
}

/// Seeded random symmetric graph: a random spanning tree keeps every state
/// connected to the goal, extra undirected edges add cycles, and h starts
/// at a per-state random fraction of h*, so the result is always valid.
fn random_graph(spec: &GenSpec) -> Result<ProblemSpec, Error> {
    let n = spec.size;
    if n < 2 {
        return Err(Error::Config("random graph needs at least 2 states".into()));
    }
    let (w_lo, w_hi) = spec.weight_units;
    if w_lo < 1 || w_hi < w_lo {
        return Err(Error::Config(
            "weight range must satisfy 1 <= lo <= hi".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut edges: Vec<(usize, usize, u64)> = Vec::new();
    for i in 1..n {
        edges.push((rng.gen_range(0..i), i, rng.gen_range(w_lo..=w_hi)));
    }
    for _ in 0..n {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b
            && !edges
                .iter()
                .any(|&(x, y, _)| (x, y) == (a, b) || (x, y) == (b, a))
        {
            edges.push((a, b, rng.gen_range(w_lo..=w_hi)));
        }
    }
    let start = rng.gen_range(1..n);

    let build = |h: &[u64]| -> Result<ProblemSpec, Error> {
        let mut b = ProblemBuilder::new(1.0, spec.theta);
        let ids: Vec<StateId> = (0..n).map(|i| b.add_state(state_name(i), h[i])).collect();
        for &(x, y, w) in &edges {
            b.add_undirected_edge(ids[x], ids[y], w);
        }
        b.set_goal(ids[0]);
        b.set_start(ids[start]);
        b.build()
    };

    let skeleton = build(&vec![0; n])?;
    let oracle = DistanceOracle::new(&skeleton);
    let h: Vec<u64> = oracle
        .goal_distances()
        .iter()
        .map(|d| {
            let d = d.finite().expect("spanning tree reaches the goal");
            if d == 0 {
                0
            } else {
                rng.gen_range(0..=d)
            }
        })
        .collect();
    build(&h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_chain_matches_the_worked_values() {
        let p = example_one();
        assert_eq!(p.state_count(), 4);
        assert_eq!(p.epsilon(), 0.1);
        assert_eq!(p.h_init(), &[0, 10, 10, 7]);
        assert_eq!(p.name(p.start()), "C");
        assert!(p.is_goal(p.find_state("A").unwrap()));
        let c = p.find_state("C").unwrap();
        let succ: Vec<&str> = p.successors(c).iter().map(|e| p.name(e.to)).collect();
        assert_eq!(succ, ["B", "D"]);
        assert!(p.successors(c).iter().all(|e| e.weight == 10));
    }

    #[test]
    fn random_graphs_are_valid_across_many_seeds() {
        for seed in 0..1000 {
            let mut spec = GenSpec::random(12, seed);
            spec.weight_units = (1, 5);
            let p = gen_problem(&spec).unwrap();
            let o = DistanceOracle::new(&p);
            let report = o.validate_problem();
            assert!(report.is_valid(), "seed {seed}: {:?}", report.violations);
        }
    }

    #[test]
    fn generation_is_deterministic_in_the_seed() {
        let a = gen_problem(&GenSpec::random(20, 7)).unwrap();
        let b = gen_problem(&GenSpec::random(20, 7)).unwrap();
        assert_eq!(a.h_init(), b.h_init());
        for s in a.states() {
            let ea: Vec<(StateId, u64)> =
                a.successors(s).iter().map(|e| (e.to, e.weight)).collect();
            let eb: Vec<(StateId, u64)> =
                b.successors(s).iter().map(|e| (e.to, e.weight)).collect();
            assert_eq!(ea, eb);
        }
    }
}
