//! Plain-text grid maps and their conversion to search problems.
//!
//! Format: one row per line, `#` blocked, `.` free, `S` the start cell,
//! `G` a goal cell (at least one). All rows must have the same width.
//! Cells are 4-connected with unit edge cost and ε = 1.

use std::str::FromStr;

use crate::error::Error;
use crate::oracle::DistanceOracle;
use crate::problem::{ProblemBuilder, ProblemSpec, StateId};

#[derive(Debug, Clone)]
pub struct GridMap {
    pub width: usize,
    pub height: usize,
    blocked: Vec<bool>,
    pub start: (usize, usize),
    pub goals: Vec<(usize, usize)>,
}

impl GridMap {
    pub fn is_blocked(&self, x: usize, y: usize) -> bool {
        self.blocked[y * self.width + x]
    }

    pub fn free_cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.height)
            .flat_map(move |y| (0..self.width).map(move |x| (x, y)))
            .filter(|&(x, y)| !self.is_blocked(x, y))
    }
}

pub fn parse_grid_map(text: &str) -> Result<GridMap, Error> {
    let mut rows: Vec<&str> = text.lines().collect();
    while rows.last().is_some_and(|r| r.is_empty()) {
        rows.pop();
    }
    if rows.is_empty() {
        return Err(Error::parse(1, 1, "empty map"));
    }
    let width = rows[0].chars().count();
    let height = rows.len();
    let mut blocked = Vec::with_capacity(width * height);
    let mut start = None;
    let mut goals = Vec::new();
    for (y, row) in rows.iter().enumerate() {
        let line = y + 1;
        let count = row.chars().count();
        if count != width {
            // Point at the first extra cell, or just past a short row.
            return Err(Error::parse(
                line,
                count.min(width) + 1,
                format!("row is {count} cells wide, expected {width}"),
            ));
        }
        for (x, c) in row.chars().enumerate() {
            let col = x + 1;
            match c {
                '#' => blocked.push(true),
                '.' => blocked.push(false),
                'S' => {
                    if start.replace((x, y)).is_some() {
                        return Err(Error::parse(line, col, "more than one start cell"));
                    }
                    blocked.push(false);
                }
                'G' => {
                    goals.push((x, y));
                    blocked.push(false);
                }
                other => {
                    return Err(Error::parse(line, col, format!("unknown glyph '{other}'")));
                }
            }
        }
    }
    let start = start.ok_or_else(|| Error::parse(height, 1, "map has no start cell 'S'"))?;
    if goals.is_empty() {
        return Err(Error::parse(height, 1, "map has no goal cell 'G'"));
    }
    Ok(GridMap {
        width,
        height,
        blocked,
        start,
        goals,
    })
}

/// Initial-heuristic choice for grid problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeuristicKind {
    Zero,
    Manhattan,
    Exact,
}

impl FromStr for HeuristicKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "zero" => Ok(HeuristicKind::Zero),
            "manhattan" => Ok(HeuristicKind::Manhattan),
            "exact" => Ok(HeuristicKind::Exact),
            other => Err(Error::Config(format!("unknown heuristic kind '{other}'"))),
        }
    }
}

fn manhattan(a: (usize, usize), b: (usize, usize)) -> u64 {
    (a.0.abs_diff(b.0) + a.1.abs_diff(b.1)) as u64
}

/// 4-connected unit-cost problem over the free cells, with the chosen
/// initial heuristic. State names are "x-y".
pub fn grid_to_problem(map: &GridMap, theta: f64, h0: HeuristicKind) -> Result<ProblemSpec, Error> {
    let cells: Vec<(usize, usize)> = map.free_cells().collect();
    let h_for = |cell: (usize, usize)| -> u64 {
        match h0 {
            HeuristicKind::Zero | HeuristicKind::Exact => 0,
            HeuristicKind::Manhattan => map
                .goals
                .iter()
                .map(|&g| manhattan(cell, g))
                .min()
                .unwrap_or(0),
        }
    };
    let build = |h_exact: Option<&[u64]>| -> Result<ProblemSpec, Error> {
        let mut b = ProblemBuilder::new(1.0, theta);
        let mut ids = vec![None; map.width * map.height];
        for (i, &(x, y)) in cells.iter().enumerate() {
            let h = h_exact.map_or_else(|| h_for((x, y)), |v| v[i]);
            ids[y * map.width + x] = Some(b.add_state(format!("{x}-{y}"), h));
        }
        for &(x, y) in &cells {
            let from = ids[y * map.width + x].expect("free cell has an id");
            let mut link = |nx: usize, ny: usize| {
                if let Some(to) = ids[ny * map.width + nx] {
                    b.add_edge(from, to, 1);
                }
            };
            if x > 0 {
                link(x - 1, y);
            }
            if x + 1 < map.width {
                link(x + 1, y);
            }
            if y > 0 {
                link(x, y - 1);
            }
            if y + 1 < map.height {
                link(x, y + 1);
            }
        }
        for &(x, y) in &map.goals {
            let id = ids[y * map.width + x].expect("goal is a free cell");
            b.set_goal(id);
            b.set_h_init(id, 0);
        }
        b.set_start(ids[map.start.1 * map.width + map.start.0].expect("start is a free cell"));
        b.build()
    };
    if h0 != HeuristicKind::Exact {
        return build(None);
    }
    let skeleton = build(None)?;
    let oracle = DistanceOracle::new(&skeleton);
    let h: Vec<u64> = skeleton
        .states()
        .map(|s| oracle.goal_distance(s).expect("state exists"))
        .map(|d| d.finite().unwrap_or(0))
        .collect();
    build(Some(&h))
}

/// Convenience: the state id of the free cell at (x, y).
pub fn cell_state(problem: &ProblemSpec, x: usize, y: usize) -> Option<StateId> {
    problem.find_state(&format!("{x}-{y}"))
}
