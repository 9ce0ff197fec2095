//! Acceptance gate: one test (and one pass/fail line) per criterion.
//!
//! The random corpora are built once and shared; suites 2–4 stash their
//! per-run audit and timeout flags so criteria 5 and 6 can assert over
//! every run without repeating the work.

use std::sync::OnceLock;
use std::time::Instant;

use rtsearch::admissibility::{
    check_theta_admissible, max_update_bound, rule_max_of_mins, rule_min_successor,
    tight_chain_fixture, verify_update_rule, VisitedUnion, BRUTE_FORCE_CAP,
};
use rtsearch::bounds::{find_slat_bound_excess, sweep_quota, SweepRecord};
use rtsearch::framework::{
    run_search, AgentState, AlgoParams, HeuristicTable, RunResult, StepBudget,
};
use rtsearch::gen::{example_one, gen_problem, GenSpec};
use rtsearch::policies::{make_policy, ALGORITHMS};
use rtsearch::{Cost, DistanceOracle, ProblemSpec, StateId};

fn corpus() -> &'static Vec<ProblemSpec> {
    static CORPUS: OnceLock<Vec<ProblemSpec>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        (0..500)
            .map(|seed| {
                let size = 10 + (seed as usize % 39) * 5; // 10..=200 states
                gen_problem(&GenSpec::random(size, seed)).expect("generator output is valid")
            })
            .collect()
    })
}

#[derive(Debug, Default)]
struct SuiteFlags {
    runs: usize,
    audit_violations: usize,
    timeouts: usize,
}

impl SuiteFlags {
    fn absorb(&mut self, r: &RunResult) {
        self.runs += 1;
        self.audit_violations += r.audit.len();
        self.timeouts += usize::from(r.timed_out);
    }
}

fn run_algo(algo: &str, oracle: &DistanceOracle, params: &AlgoParams) -> RunResult {
    let mut policy = make_policy(algo, params).expect("known algorithm");
    run_search(policy.as_mut(), oracle, params, StepBudget::Auto, true).expect("run completes")
}

struct Suite1 {
    flags: SuiteFlags,
    ok: bool,
}

fn suite1() -> &'static Suite1 {
    static S: OnceLock<Suite1> = OnceLock::new();
    S.get_or_init(|| {
        let started = Instant::now();
        let p = example_one();
        let o = DistanceOracle::new(&p);
        let r = run_algo("lrta", &o, &AlgoParams::new(1.0));
        let mut flags = SuiteFlags::default();
        flags.absorb(&r);

        let id = |n: &str| p.find_state(n).unwrap();
        let (a, b, c, d) = (id("A"), id("B"), id("C"), id("D"));
        // Replay the h table over the four cycles, in ε-units (ε = 0.1).
        let mut h = HeuristicTable::from_problem(&p);
        let mut h_c = vec![h.get(c)];
        let mut h_d = vec![h.get(d)];
        let mut u = vec![0u64];
        for rec in &r.trace {
            for &(s, _, new) in &rec.h_changes {
                h.set(s, new);
            }
            h_c.push(h.get(c));
            h_d.push(h.get(d));
            u.push(rec.u_after);
        }
        let stacks_ok = r.final_stack.states() == [c, d, c, b, a];
        let ok = h_c == [10, 17, 17, 20, 20]
            && h_d == [7, 7, 27, 27, 27]
            && u == [0, 7, 27, 30, 30]
            && stacks_ok
            && h.get(a) == 0
            && h.get(b) == 10
            && r.solution_cost == Cost::Finite(40)
            && started.elapsed().as_secs_f64() < 1.0;
        Suite1 { flags, ok }
    })
}

struct Suite2 {
    flags: SuiteFlags,
    optimal: bool,
    converged: bool,
    elapsed: f64,
}

fn suite2() -> &'static Suite2 {
    static S: OnceLock<Suite2> = OnceLock::new();
    S.get_or_init(|| {
        let started = Instant::now();
        let mut flags = SuiteFlags::default();
        let mut optimal = true;
        let mut converged = true;
        for p in corpus() {
            let o = DistanceOracle::new(p);
            let r = run_algo("sla", &o, &AlgoParams::new(1.0));
            flags.absorb(&r);
            let d0 = o.goal_distance(p.start()).unwrap();
            optimal &= r.solution_cost == d0;
            converged &= r
                .final_stack
                .states()
                .iter()
                .all(|&s| Cost::Finite(r.final_h.get(s)) == o.goal_distance(s).unwrap());
        }
        Suite2 {
            flags,
            optimal,
            converged,
            elapsed: started.elapsed().as_secs_f64(),
        }
    })
}

struct Suite3 {
    flags: SuiteFlags,
    violations: usize,
}

fn suite3() -> &'static Suite3 {
    static S: OnceLock<Suite3> = OnceLock::new();
    S.get_or_init(|| {
        let mut flags = SuiteFlags::default();
        let mut violations = 0;
        for p in corpus() {
            let o = DistanceOracle::new(p);
            let d0 = o.goal_distance(p.start()).unwrap().finite().unwrap();
            for t in 0..=20u64 {
                // ε = 1 on this corpus, so T = t units.
                let mut params = AlgoParams::new(1.0);
                params.quota = Cost::Finite(t);
                let r = run_algo("slat-acyclic", &o, &params);
                flags.absorb(&r);
                if !r.timed_out {
                    let cost = r.solution_cost.finite().expect("non-timeout run solved");
                    if cost > d0 + t {
                        violations += 1;
                    }
                }
            }
        }
        Suite3 { flags, violations }
    })
}

struct Suite4 {
    flags: SuiteFlags,
    triples: usize,
    violations: usize,
    elapsed: f64,
}

fn suite4() -> &'static Suite4 {
    static S: OnceLock<Suite4> = OnceLock::new();
    S.get_or_init(|| {
        let started = Instant::now();
        let mut flags = SuiteFlags::default();
        let mut triples = 0;
        let mut violations = 0;
        for seed in 1000..1025u64 {
            let p = gen_problem(&GenSpec::random(60, seed)).unwrap();
            let o = DistanceOracle::new(&p);
            let d0 = o.goal_distance(p.start()).unwrap().finite().unwrap();
            for k in [1usize, 2, 5, 10] {
                for t in [0u64, 5, 10] {
                    let mut params = AlgoParams::new(1.0);
                    params.segment_len = k;
                    params.quota = Cost::Finite(t);
                    let r = run_algo("piecewise", &o, &params);
                    flags.absorb(&r);
                    triples += 1;
                    if !r.timed_out {
                        let cost = r.solution_cost.finite().expect("non-timeout run solved");
                        if cost as f64 > 3.0 * d0 as f64 + 2.0 * t as f64 {
                            violations += 1;
                        }
                    }
                }
            }
        }
        Suite4 {
            flags,
            triples,
            violations,
            elapsed: started.elapsed().as_secs_f64(),
        }
    })
}

#[test]
fn acceptance_1_golden_trace() {
    let s = suite1();
    println!(
        "criterion 1 (golden four-state trace): {}",
        if s.ok { "pass" } else { "FAIL" }
    );
    assert!(s.ok);
}

#[test]
fn acceptance_2_sla_optimality() {
    let s = suite2();
    let ok = s.optimal && s.converged && s.elapsed < 60.0;
    println!(
        "criterion 2 (SLA* optimality, 500 problems in {:.1}s): {}",
        s.elapsed,
        if ok { "pass" } else { "FAIL" }
    );
    assert!(s.optimal, "a final stack was not optimal");
    assert!(s.converged, "h != h* on a final-stack state");
    assert!(s.elapsed < 60.0, "suite took {:.1}s", s.elapsed);
}

#[test]
fn acceptance_3_slat_linear_bound() {
    let s = suite3();
    println!(
        "criterion 3 (quota-limited acyclic bound d0+T, {} runs): {}",
        s.flags.runs,
        if s.violations == 0 { "pass" } else { "FAIL" }
    );
    assert_eq!(s.violations, 0);
}

#[test]
fn acceptance_4_piecewise_bound() {
    let s = suite4();
    let ok = s.violations == 0 && s.triples >= 300 && s.elapsed < 120.0;
    println!(
        "criterion 4 (piecewise bound 3θd0+2T, {} triples in {:.1}s): {}",
        s.triples,
        s.elapsed,
        if ok { "pass" } else { "FAIL" }
    );
    assert!(s.triples >= 300);
    assert_eq!(s.violations, 0);
    assert!(s.elapsed < 120.0, "suite took {:.1}s", s.elapsed);
}

#[test]
fn acceptance_5_axiom_conformance() {
    let total: usize = [
        &suite1().flags,
        &suite2().flags,
        &suite3().flags,
        &suite4().flags,
    ]
    .iter()
    .map(|f| f.audit_violations)
    .sum();
    // Policies not exercised by suites 1-4 get their own audited pass.
    let mut extra = 0;
    for seed in 2000..2010u64 {
        let p = gen_problem(&GenSpec::random(40, seed)).unwrap();
        let o = DistanceOracle::new(&p);
        for algo in ALGORITHMS {
            let mut params = AlgoParams::new(1.0);
            params.quota = Cost::Finite(4);
            params.segment_len = 3;
            params.d_max = 3;
            let r = run_algo(algo, &o, &params);
            extra += r.audit.len();
        }
    }
    let ok = total == 0 && extra == 0;
    println!(
        "criterion 5 (axiom audits clean across all runs): {}",
        if ok { "pass" } else { "FAIL" }
    );
    assert_eq!(total, 0);
    assert_eq!(extra, 0);
}

#[test]
fn acceptance_6_completeness_budget() {
    let timeouts: usize = [
        &suite1().flags,
        &suite2().flags,
        &suite3().flags,
        &suite4().flags,
    ]
    .iter()
    .map(|f| f.timeouts)
    .sum();
    println!(
        "criterion 6 (zero timeouts at the completeness budget): {}",
        if timeouts == 0 { "pass" } else { "FAIL" }
    );
    assert_eq!(timeouts, 0);
}

#[test]
fn acceptance_7_admissibility_criterion() {
    let started = Instant::now();
    // (a) On small graphs the strengthened bound never authorizes an
    // inadmissible value: bound ≤ θ·h* wherever the visited region avoids
    // the goals, so any update ≤ bound preserves admissibility.
    let mut checked = 0;
    let mut safe = true;
    for seed in 3000..3040u64 {
        let size = 5 + (seed as usize % 4); // 5..=8 states
        let p = gen_problem(&GenSpec::random(size, seed)).unwrap();
        let o = DistanceOracle::new(&p);
        let h = HeuristicTable::from_problem(&p);
        let non_goal: Vec<StateId> = p.states().filter(|&s| !p.is_goal(s)).collect();
        // Every goal-free region containing s is a legal visited union for
        // some run prefix; enumerate them all at this scale.
        for &s in &non_goal {
            for mask in 0u32..(1 << non_goal.len()) {
                let mut region = VisitedUnion::new();
                region.absorb(
                    non_goal
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, &x)| x),
                );
                if !region.contains(s) {
                    continue;
                }
                let bound =
                    max_update_bound(&o, &h, &region, s, 1.0, BRUTE_FORCE_CAP, true).unwrap();
                let h_star = o.goal_distance(s).unwrap().finite().unwrap() as f64;
                checked += 1;
                safe &= bound.units <= h_star + 1e-9;
                // Applying the largest on-grid value under the bound keeps
                // the whole table admissible.
                let mut h2 = h.clone();
                h2.set(s, bound.units.floor() as u64);
                safe &= check_theta_admissible(&o, &h2, 1.0).is_ok();
            }
        }
        // Both shipped rules stay under the bound and never break.
        let report =
            verify_update_rule(&rule_min_successor, std::slice::from_ref(&p), 1.0).unwrap();
        safe &= report.never_exceeds() && report.never_breaks();
        let report = verify_update_rule(&rule_max_of_mins, &[p], 1.0).unwrap();
        safe &= report.never_breaks();
    }
    // (b) Exceeding the bound on the tight chain breaks 1-admissibility.
    let over: Box<rtsearch::admissibility::UpdateRule> = Box::new(|o, h, v, s| {
        Ok(max_update_bound(o, h, v, s, 1.0, BRUTE_FORCE_CAP, true)?.units + 1.0)
    });
    let broken = verify_update_rule(&over, &[tight_chain_fixture()], 1.0)
        .unwrap()
        .verdicts[0]
        .broke_admissibility
        .is_some();
    let elapsed = started.elapsed().as_secs_f64();
    let ok = safe && broken && checked > 100 && elapsed < 120.0;
    println!(
        "criterion 7 (update bound sound on ≤8-state graphs, {checked} configs in {elapsed:.1}s): {}",
        if ok { "pass" } else { "FAIL" }
    );
    assert!(safe, "a bound authorized an inadmissible update");
    assert!(broken, "bound + 1 failed to break admissibility");
    assert!(checked > 100);
    assert!(elapsed < 120.0);
}

#[test]
fn acceptance_8_exploratory_bookkeeping_only() {
    // The exponential regime is not an acceptance target: its Δ is not
    // constructive. The only assertions here are record completeness and
    // consistent within-bound bookkeeping on the exploratory sweep.
    let problems: Vec<(String, ProblemSpec)> = (4000..4010u64)
        .map(|seed| {
            (
                format!("random-30-{seed}"),
                gen_problem(&GenSpec::random(30, seed)).unwrap(),
            )
        })
        .collect();
    let quotas = [0u64, 2, 4, 6, 8];
    let params = AlgoParams::new(1.0);
    let records = sweep_quota("slat", &problems, &quotas, &params, StepBudget::Auto).unwrap();
    let complete = records.len() == problems.len() * quotas.len();
    let books_ok = records
        .iter()
        .all(|r: &SweepRecord| match (r.bound, r.solution_cost) {
            _ if r.timed_out => !r.within_bound,
            (Some(b), Some(c)) => r.within_bound == (c <= b + 1e-9),
            (Some(_), None) => !r.within_bound,
            (None, _) => r.within_bound,
        });
    // Whether a cycle-keeping run beats d0+T at this scale is recorded
    // either way; the claim is existential, not asserted.
    let excess = find_slat_bound_excess(4000..4020, 30, &quotas).unwrap();
    let ok = complete && books_ok;
    println!(
        "criterion 8 (exploratory sweep bookkeeping; cycle-keeping excess found: {}): {}",
        excess.is_some(),
        if ok { "pass" } else { "FAIL" }
    );
    assert!(complete);
    assert!(books_ok);
}

#[test]
fn acceptance_9_lookahead_equivalence() {
    // With d_max = 1 the dynamic-lookahead decision must equal the plain
    // one-step decision on every sampled state of a unit-weight corpus.
    let params1 = AlgoParams::new(1.0);
    let mut compared = 0usize;
    let mut equal = true;
    'outer: for seed in 5000..8000u64 {
        let p = gen_problem(&GenSpec::random(12 + (seed as usize % 30), seed)).unwrap();
        let o = DistanceOracle::new(&p);
        let mut lrta = make_policy("lrta", &params1).unwrap();
        let mut dyn1 = {
            let mut params = params1.clone();
            params.d_max = 1;
            make_policy("dynlook", &params).unwrap()
        };
        let mut agent = AgentState::initial(&p);
        // A blank table forces long learning runs, so each problem
        // contributes many distinct sampled states.
        agent.h = HeuristicTable::from_units(vec![0; p.state_count()]);
        for _ in 0..500 {
            if p.is_goal(agent.stack.top()) {
                // Restart the trial with the learned table so later,
                // partially-converged decisions are sampled too.
                let h = std::mem::replace(&mut agent.h, HeuristicTable::from_units(vec![]));
                agent = AgentState::initial(&p);
                agent.h = h;
            }
            let a = lrta.decide(&agent, &o, &params1).unwrap();
            let b = dyn1.decide(&agent, &o, &params1).unwrap();
            compared += 1;
            equal &= a.direction == b.direction
                && a.next_state == b.next_state
                && a.h_updates == b.h_updates
                && a.lss == b.lss;
            for &(s, new) in &a.h_updates {
                agent.h.set(s, new);
            }
            agent
                .stack
                .push(a.next_state.expect("one-step policy moves forward"));
            agent.t += 1;
            if compared >= 10_000 {
                break 'outer;
            }
        }
    }
    // On the four-state chain's start state the one-step picture is a trap:
    // depth 2 is consulted and the update jumps straight to the true cost.
    let p = example_one();
    let o = DistanceOracle::new(&p);
    let mut params = AlgoParams::new(1.0);
    params.d_max = 2;
    let mut deep = make_policy("dynlook", &params).unwrap();
    let decision = deep.decide(&AgentState::initial(&p), &o, &params).unwrap();
    let a = p.find_state("A").unwrap();
    let c = p.find_state("C").unwrap();
    let trap_detected = decision.lss.contains(&a) && decision.h_updates == vec![(c, 20)];

    let ok = compared >= 10_000 && equal && trap_detected;
    println!(
        "criterion 9 (d_max=1 ≡ one-step on {compared} states; depth-2 trap detection): {}",
        if ok { "pass" } else { "FAIL" }
    );
    assert!(compared >= 10_000);
    assert!(equal, "decisions diverged at d_max = 1");
    assert!(trap_detected);
}
