//! Line-based problem files.
//!
//! Directives, one per line (`#` starts a comment, blank lines ignored):
//!
//! ```text
//! epsilon 0.1          cost quantum (default 1, must precede states)
//! theta 1              admissibility weight (default 1)
//! state NAME H         declare a state with initial heuristic H
//! edge FROM TO W       directed edge of cost W
//! uedge A B W          the same edge in both directions
//! goal NAME            mark a goal (repeatable)
//! start NAME           mark the start
//! ```
//!
//! All costs are real values that must be integer multiples of ε.

use std::fmt::Write as FmtWrite;

use crate::cost::format_units;
use crate::error::Error;
use crate::problem::{ProblemBuilder, ProblemSpec, StateId};

fn to_units(value: &str, epsilon: f64, line: usize) -> Result<u64, Error> {
    let v: f64 = value
        .parse()
        .map_err(|_| Error::parse(line, 1, format!("bad number '{value}'")))?;
    if v < 0.0 {
        return Err(Error::parse(line, 1, format!("negative cost '{value}'")));
    }
    let ratio = v / epsilon;
    let units = ratio.round();
    if (ratio - units).abs() > 1e-6 {
        return Err(Error::parse(
            line,
            1,
            format!("'{value}' is not a multiple of epsilon {epsilon}"),
        ));
    }
    Ok(units as u64)
}

pub fn parse_problem(text: &str) -> Result<ProblemSpec, Error> {
    let mut epsilon = 1.0f64;
    let mut theta = 1.0;
    let mut builder: Option<ProblemBuilder> = None;
    let mut names: Vec<String> = Vec::new();

    let lookup = |names: &[String], name: &str, line: usize| -> Result<StateId, Error> {
        names
            .iter()
            .position(|n| n == name)
            .map(|i| StateId(i as u32))
            .ok_or_else(|| Error::parse(line, 1, format!("unknown state '{name}'")))
    };

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let arity = |n: usize| -> Result<(), Error> {
            if fields.len() == n + 1 {
                Ok(())
            } else {
                Err(Error::parse(
                    line,
                    1,
                    format!("'{}' takes {n} argument(s)", fields[0]),
                ))
            }
        };
        match fields[0] {
            "epsilon" => {
                arity(1)?;
                if builder.is_some() {
                    return Err(Error::parse(line, 1, "epsilon must precede states"));
                }
                epsilon = fields[1]
                    .parse()
                    .map_err(|_| Error::parse(line, 1, format!("bad number '{}'", fields[1])))?;
                if !epsilon.is_finite() || epsilon <= 0.0 {
                    return Err(Error::parse(line, 1, "epsilon must be positive"));
                }
            }
            "theta" => {
                arity(1)?;
                if builder.is_some() {
                    return Err(Error::parse(line, 1, "theta must precede states"));
                }
                theta = fields[1]
                    .parse()
                    .map_err(|_| Error::parse(line, 1, format!("bad number '{}'", fields[1])))?;
            }
            "state" => {
                arity(2)?;
                let b = builder.get_or_insert_with(|| ProblemBuilder::new(epsilon, theta));
                if names.iter().any(|n| n == fields[1]) {
                    return Err(Error::parse(
                        line,
                        1,
                        format!("duplicate state '{}'", fields[1]),
                    ));
                }
                b.add_state(fields[1], to_units(fields[2], epsilon, line)?);
                names.push(fields[1].to_string());
            }
            "edge" | "uedge" => {
                arity(3)?;
                let from = lookup(&names, fields[1], line)?;
                let to = lookup(&names, fields[2], line)?;
                let w = to_units(fields[3], epsilon, line)?;
                if w == 0 {
                    return Err(Error::parse(line, 1, "edge cost must be positive"));
                }
                let b = builder
                    .as_mut()
                    .ok_or_else(|| Error::parse(line, 1, "edge before any state"))?;
                if fields[0] == "edge" {
                    b.add_edge(from, to, w);
                } else {
                    b.add_undirected_edge(from, to, w);
                }
            }
            "goal" => {
                arity(1)?;
                let s = lookup(&names, fields[1], line)?;
                builder
                    .as_mut()
                    .ok_or_else(|| Error::parse(line, 1, "goal before any state"))?
                    .set_goal(s);
            }
            "start" => {
                arity(1)?;
                let s = lookup(&names, fields[1], line)?;
                builder
                    .as_mut()
                    .ok_or_else(|| Error::parse(line, 1, "start before any state"))?
                    .set_start(s);
            }
            other => {
                return Err(Error::parse(
                    line,
                    1,
                    format!("unknown directive '{other}'"),
                ));
            }
        }
    }
    builder
        .ok_or_else(|| Error::parse(1, 1, "file declares no states"))?
        .build()
        .map_err(|e| Error::parse(text.lines().count(), 1, e.to_string()))
}

pub fn write_problem(problem: &ProblemSpec) -> String {
    let eps = problem.epsilon();
    let mut out = String::new();
    let _ = writeln!(out, "epsilon {eps}");
    let _ = writeln!(out, "theta {}", problem.theta());
    for s in problem.states() {
        let _ = writeln!(
            out,
            "state {} {}",
            problem.name(s),
            format_units(problem.h_init()[s.index()], eps)
        );
    }
    for s in problem.states() {
        for e in problem.successors(s) {
            let _ = writeln!(
                out,
                "edge {} {} {}",
                problem.name(s),
                problem.name(e.to),
                format_units(e.weight, eps)
            );
        }
    }
    for &g in problem.goals() {
        let _ = writeln!(out, "goal {}", problem.name(g));
    }
    let _ = writeln!(out, "start {}", problem.name(problem.start()));
    out
}
