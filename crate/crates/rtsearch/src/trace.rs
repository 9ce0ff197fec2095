//! Trace serialization: CSV for machines, an aligned table for small
//! problems, and a replay path that feeds a parsed trace back through the
//! transition auditor.
//!
//! CSV schema (one row per cycle):
//!
//! ```text
//! t,top,direction,moved_to,stack_len,gamma,u,lss,h_changes
//! ```
//!
//! `lss` is `|`-separated state names; `h_changes` is
//! `name:old:new;...` with costs in real units.

use std::fmt::Write as FmtWrite;

use crate::audit::{audit_transition, AuditViolation};
use crate::cost::format_units;
use crate::error::Error;
use crate::framework::{AgentState, AlgoParams, Direction, StepDecision, StepRecord};
use crate::oracle::DistanceOracle;
use crate::problem::{ProblemSpec, StateId};

pub const CSV_HEADER: &str = "t,top,direction,moved_to,stack_len,gamma,u,lss,h_changes";

pub fn emit_trace_csv(problem: &ProblemSpec, trace: &[StepRecord]) -> String {
    let eps = problem.epsilon();
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for rec in trace {
        let lss = rec
            .lss
            .iter()
            .map(|&s| problem.name(s))
            .collect::<Vec<_>>()
            .join("|");
        let changes = rec
            .h_changes
            .iter()
            .map(|&(s, old, new)| {
                format!(
                    "{}:{}:{}",
                    problem.name(s),
                    format_units(old, eps),
                    format_units(new, eps)
                )
            })
            .collect::<Vec<_>>()
            .join(";");
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            rec.t,
            problem.name(rec.top),
            rec.direction.as_str(),
            rec.moved_to.map_or("-", |s| problem.name(s)),
            rec.stack_len_after,
            rec.gamma,
            format_units(rec.u_after, eps),
            lss,
            changes
        );
    }
    out
}

fn units_of(problem: &ProblemSpec, text: &str, line: usize) -> Result<u64, Error> {
    let v: f64 = text
        .parse()
        .map_err(|_| Error::parse(line, 1, format!("bad cost '{text}'")))?;
    let ratio = v / problem.epsilon();
    let units = ratio.round();
    if (ratio - units).abs() > 1e-6 || units < 0.0 {
        return Err(Error::parse(
            line,
            1,
            format!("'{text}' is off the cost grid"),
        ));
    }
    Ok(units as u64)
}

fn state_of(problem: &ProblemSpec, name: &str, line: usize) -> Result<StateId, Error> {
    problem
        .find_state(name)
        .ok_or_else(|| Error::parse(line, 1, format!("unknown state '{name}'")))
}

pub fn parse_trace(problem: &ProblemSpec, text: &str) -> Result<Vec<StepRecord>, Error> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == CSV_HEADER => {}
        _ => return Err(Error::parse(1, 1, "missing trace header")),
    }
    let mut records = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = raw.split(',').collect();
        if f.len() != 9 {
            return Err(Error::parse(
                line,
                1,
                format!("expected 9 fields, got {}", f.len()),
            ));
        }
        let t: u64 = f[0]
            .parse()
            .map_err(|_| Error::parse(line, 1, format!("bad cycle index '{}'", f[0])))?;
        let direction = Direction::parse(f[2])
            .ok_or_else(|| Error::parse(line, 1, format!("bad direction '{}'", f[2])))?;
        let moved_to = if f[3] == "-" {
            None
        } else {
            Some(state_of(problem, f[3], line)?)
        };
        let stack_len_after: usize = f[4]
            .parse()
            .map_err(|_| Error::parse(line, 1, format!("bad stack length '{}'", f[4])))?;
        let gamma: f64 = f[5]
            .parse()
            .map_err(|_| Error::parse(line, 1, format!("bad gamma '{}'", f[5])))?;
        let mut lss = Vec::new();
        for name in f[7].split('|').filter(|n| !n.is_empty()) {
            lss.push(state_of(problem, name, line)?);
        }
        let mut h_changes = Vec::new();
        for item in f[8].split(';').filter(|c| !c.is_empty()) {
            let parts: Vec<&str> = item.split(':').collect();
            if parts.len() != 3 {
                return Err(Error::parse(line, 1, format!("bad change '{item}'")));
            }
            h_changes.push((
                state_of(problem, parts[0], line)?,
                units_of(problem, parts[1], line)?,
                units_of(problem, parts[2], line)?,
            ));
        }
        records.push(StepRecord {
            t,
            top: state_of(problem, f[1], line)?,
            direction,
            moved_to,
            stack_len_after,
            gamma,
            u_after: units_of(problem, f[6], line)?,
            h_changes,
            lss,
        });
    }
    Ok(records)
}

/// Replays a recorded trace through the transition auditor and returns all
/// violations with the cycle they occurred in.
pub fn replay_audit(
    problem: &ProblemSpec,
    trace: &[StepRecord],
    params: &AlgoParams,
) -> Result<Vec<(u64, AuditViolation)>, Error> {
    let oracle = DistanceOracle::new(problem);
    let mut before = AgentState::initial(problem);
    let mut findings = Vec::new();
    for rec in trace {
        if rec.top != before.stack.top() {
            return Err(Error::Format(format!(
                "cycle {}: trace top {} does not match replayed stack top {}",
                rec.t,
                problem.name(rec.top),
                problem.name(before.stack.top())
            )));
        }
        let decision = StepDecision {
            direction: rec.direction,
            next_state: rec.moved_to,
            lss: rec.lss.clone(),
            gamma_weight: rec.gamma,
            h_updates: rec.h_changes.iter().map(|&(s, _, new)| (s, new)).collect(),
        };
        let mut after = before.clone();
        after.t += 1;
        for &(s, new) in &decision.h_updates {
            after.h.set(s, new);
        }
        match rec.direction {
            Direction::Forward => {
                let next = rec.moved_to.ok_or_else(|| {
                    Error::Format(format!("cycle {}: forward row without a target", rec.t))
                })?;
                after.stack.push(next);
            }
            Direction::Backward => {
                after.stack.pop();
            }
            Direction::Stay => {}
            Direction::Excise => {
                let target = rec.moved_to.ok_or_else(|| {
                    Error::Format(format!("cycle {}: excise row without a target", rec.t))
                })?;
                let pos = after.stack.find(target).ok_or_else(|| {
                    Error::Format(format!(
                        "cycle {}: excise target {} absent from the stack",
                        rec.t,
                        problem.name(target)
                    ))
                })?;
                after.stack.pop_to(pos);
            }
        }
        after.u = rec.u_after;
        for v in audit_transition(&oracle, &before, &after, &decision, params) {
            findings.push((rec.t, v));
        }
        before = after;
    }
    Ok(findings)
}

/// Human-oriented table with one h column per state, the stack, the local
/// search space and the learning amount per cycle. Refused when the
/// problem has more than 10 states.
pub fn emit_trace_table(problem: &ProblemSpec, trace: &[StepRecord]) -> Result<String, Error> {
    if problem.state_count() > 10 {
        return Err(Error::Format(format!(
            "table layout supports at most 10 states, problem has {}",
            problem.state_count()
        )));
    }
    let eps = problem.epsilon();
    let mut header: Vec<String> = vec!["t".into()];
    header.extend(problem.states().map(|s| format!("h({})", problem.name(s))));
    header.extend(["stack".to_string(), "lss".to_string(), "u".to_string()]);

    let mut agent = AgentState::initial(problem);
    let mut rows: Vec<Vec<String>> = Vec::new();
    let snapshot = |agent: &AgentState, t: u64, lss: &[StateId]| -> Vec<String> {
        let mut row = vec![t.to_string()];
        row.extend(problem.states().map(|s| format_units(agent.h.get(s), eps)));
        row.push(format!(
            "[{}]",
            agent
                .stack
                .states()
                .iter()
                .map(|&s| problem.name(s))
                .collect::<Vec<_>>()
                .join(" ")
        ));
        row.push(
            lss.iter()
                .map(|&s| problem.name(s))
                .collect::<Vec<_>>()
                .join(" "),
        );
        row.push(format_units(agent.u, eps));
        row
    };
    for rec in trace {
        rows.push(snapshot(&agent, rec.t, &rec.lss));
        for &(s, _, new) in &rec.h_changes {
            agent.h.set(s, new);
        }
        match rec.direction {
            Direction::Forward => agent
                .stack
                .push(rec.moved_to.expect("forward has a target")),
            Direction::Backward => {
                agent.stack.pop();
            }
            Direction::Stay => {}
            Direction::Excise => {
                let target = rec.moved_to.expect("excise has a target");
                let pos = agent.stack.find(target).expect("excise target on stack");
                agent.stack.pop_to(pos);
            }
        }
        agent.u = rec.u_after;
        agent.t += 1;
    }
    if let Some(last) = trace.last() {
        rows.push(snapshot(&agent, last.t + 1, &[]));
    }

    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    let mut emit_row = |cells: &[String]| {
        let line = cells
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{c:<width$}", width = widths[i]))
            .collect::<Vec<_>>()
            .join("  ");
        out.push_str(line.trim_end());
        out.push('\n');
    };
    emit_row(&header);
    for row in &rows {
        emit_row(row);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::{run_search, StepBudget, TieBreak};
    use crate::gen::{example_one, gen_problem, GenSpec};
    use crate::policies::{Lrta, TieBreaker};

    fn example_run() -> (ProblemSpec, crate::framework::RunResult) {
        let p = example_one();
        let o = DistanceOracle::new(&p);
        let mut policy = Lrta::new(TieBreaker::new(TieBreak::StateOrder));
        let r = run_search(
            &mut policy,
            &o,
            &AlgoParams::new(1.0),
            StepBudget::Auto,
            true,
        )
        .unwrap();
        (p, r)
    }

    #[test]
    fn csv_round_trips_and_replays_clean() {
        let (p, r) = example_run();
        let text = emit_trace_csv(&p, &r.trace);
        assert_eq!(text.lines().count(), r.cycles as usize + 1);
        let parsed = parse_trace(&p, &text).unwrap();
        assert_eq!(parsed.len(), r.trace.len());
        let findings = replay_audit(&p, &parsed, &AlgoParams::new(1.0)).unwrap();
        assert!(findings.is_empty(), "findings: {findings:?}");
    }

    #[test]
    fn forged_trace_is_caught_on_replay() {
        let (p, r) = example_run();
        let mut forged = r.trace.clone();
        // Claim the first cycle also raised h at the goal, which sits
        // outside the recorded lss and is charged nowhere.
        let a = p.find_state("A").unwrap();
        forged[0].h_changes.push((a, 0, 10));
        let findings = replay_audit(&p, &forged, &AlgoParams::new(1.0)).unwrap();
        assert!(!findings.is_empty());
    }

    #[test]
    fn table_matches_the_worked_example() {
        let (p, r) = example_run();
        let table = emit_trace_table(&p, &r.trace).unwrap();
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 6); // header + t=0..4
        assert!(lines[0].starts_with("t  h(A)  h(B)  h(C)  h(D)"));
        let cell =
            |row: usize, col: usize| -> &str { lines[row].split_whitespace().nth(col).unwrap() };
        // h(C) over time: 1, 1.7, 1.7, 2, 2.
        let h_c: Vec<&str> = (1..=5).map(|row| cell(row, 3)).collect();
        assert_eq!(h_c, ["1", "1.7", "1.7", "2", "2"]);
        // h(D) over time: 0.7, 0.7, 2.7, 2.7, 2.7.
        let h_d: Vec<&str> = (1..=5).map(|row| cell(row, 4)).collect();
        assert_eq!(h_d, ["0.7", "0.7", "2.7", "2.7", "2.7"]);
        // u over time: 0, 0.7, 2.7, 3, 3 — the last column.
        let u: Vec<&str> = lines[1..]
            .iter()
            .map(|l| l.split_whitespace().last().unwrap())
            .collect();
        assert_eq!(u, ["0", "0.7", "2.7", "3", "3"]);
        assert!(lines[5].contains("[C D C B A]"));
    }

    #[test]
    fn empty_trace_emits_header_only() {
        let p = example_one();
        assert_eq!(emit_trace_csv(&p, &[]), format!("{CSV_HEADER}\n"));
        let table = emit_trace_table(&p, &[]).unwrap();
        assert_eq!(table.lines().count(), 1);
    }

    #[test]
    fn table_refuses_large_problems() {
        let p = gen_problem(&GenSpec::random(11, 0)).unwrap();
        assert!(matches!(emit_trace_table(&p, &[]), Err(Error::Format(_))));
    }
}
