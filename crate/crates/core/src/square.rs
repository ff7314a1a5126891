//! Unit squares on an `m x m` grid.
//!
//! Cells are addressed `(row, col)` with `1 <= row, col <= m` and row 1 at the
//! bottom. Several squares may share a cell.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::approx::{ClaimedRatio, Solution};
use crate::error::{Error, Result};
use crate::exact::{fpt_solve, FptTrace};
use crate::geometry::{Assignment, Axis, DensityReport, Direction, Instance, Rect, RectId, Region};

pub type GridAssignment = Assignment<Direction>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Square {
    pub id: RectId,
    pub row: u32,
    pub col: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridInstance {
    pub m: u32,
    pub squares: Vec<Square>,
    pub d: u32,
    pub k: Option<u32>,
}

impl GridInstance {
    pub fn new(m: u32, squares: Vec<Square>, d: u32, k: Option<u32>) -> Result<Self> {
        if m == 0 {
            return Err(Error::Geometry("grid side must be positive".into()));
        }
        if d == 0 {
            return Err(Error::Parameter("density budget d must be at least 1".into()));
        }
        let mut seen = BTreeSet::new();
        for s in &squares {
            if !(1..=m).contains(&s.row) || !(1..=m).contains(&s.col) {
                return Err(Error::Geometry(format!("square {} lies outside the {m}x{m} grid", s.id)));
            }
            if !seen.insert(s.id) {
                return Err(Error::Geometry(format!("duplicate square id {}", s.id)));
            }
        }
        Ok(Self { m, squares, d, k })
    }

    pub fn n(&self) -> usize {
        self.squares.len()
    }

    pub fn ids(&self) -> impl Iterator<Item = RectId> + '_ {
        self.squares.iter().map(|s| s.id)
    }

    pub fn square(&self, id: RectId) -> Option<&Square> {
        self.squares.iter().find(|s| s.id == id)
    }

    pub fn input_multiplicity(&self) -> u32 {
        let a = GridAssignment::none_for(self.ids());
        grid_density(self, &a).map(|r| r.max_density).unwrap_or(0)
    }

    fn cell(&self, row: u32, col: u32) -> usize {
        (row as usize - 1) * self.m as usize + (col as usize - 1)
    }

    /// Cells covered by `s` moved in `dir`, its own cell excluded.
    fn ray(&self, s: &Square, dir: Direction) -> Vec<usize> {
        match dir {
            Direction::Up => (s.row + 1..=self.m).map(|r| self.cell(r, s.col)).collect(),
            Direction::Down => (1..s.row).map(|r| self.cell(r, s.col)).collect(),
            Direction::Right => (s.col + 1..=self.m).map(|c| self.cell(s.row, c)).collect(),
            Direction::Left => (1..s.col).map(|c| self.cell(s.row, c)).collect(),
        }
    }
}

/// Per-cell coverage after applying `a`. The witness is `(col, row)` of the
/// smallest maximizing cell in column-major order, matching rectangle space.
pub fn grid_density(instance: &GridInstance, a: &GridAssignment) -> Result<DensityReport> {
    for (id, _) in a.iter() {
        if instance.square(id).is_none() {
            return Err(Error::DomainMismatch(id));
        }
    }
    if instance.squares.is_empty() {
        return Ok(DensityReport { max_density: 0, witness: None });
    }
    let counts = coverage(instance, a);
    let m = instance.m;
    let mut best = (0u32, (1i64, 1i64));
    for col in 1..=m {
        for row in 1..=m {
            let c = counts[instance.cell(row, col)];
            if c > best.0 {
                best = (c, (col as i64, row as i64));
            }
        }
    }
    Ok(DensityReport { max_density: best.0, witness: Some(best.1) })
}

fn coverage(instance: &GridInstance, a: &GridAssignment) -> Vec<u32> {
    let mut counts = vec![0u32; (instance.m * instance.m) as usize];
    for s in &instance.squares {
        counts[instance.cell(s.row, s.col)] += 1;
        if let Some(dir) = a.get(s.id) {
            for c in instance.ray(s, dir) {
                counts[c] += 1;
            }
        }
    }
    counts
}

pub fn is_grid_feasible(instance: &GridInstance, a: &GridAssignment) -> Result<bool> {
    Ok(grid_density(instance, a)?.max_density <= instance.d)
}

pub fn to_rect_instance(instance: &GridInstance) -> Instance {
    let m = instance.m as i64;
    let rects = instance
        .squares
        .iter()
        .map(|s| Rect {
            id: s.id,
            x_min: s.col as i64,
            y_min: s.row as i64,
            x_max: s.col as i64 + 1,
            y_max: s.row as i64 + 1,
        })
        .collect();
    Instance {
        region: Region { x_min: 1, y_min: 1, x_max: m + 1, y_max: m + 1 },
        rects,
        d: instance.d,
        k: instance.k,
    }
}

/// Optimal extension along one axis: per line, the `d` squares nearest each
/// end leave through that end.
pub fn axis_solution(instance: &GridInstance, axis: Axis) -> GridAssignment {
    let d = instance.d as usize;
    let mut a = GridAssignment::none_for(instance.ids());
    type Key = fn(&Square) -> u32;
    let (line, pos): (Key, Key) = match axis {
        Axis::Vertical => (|s| s.col, |s| s.row),
        Axis::Horizontal => (|s| s.row, |s| s.col),
    };
    let [toward_max, toward_min] = axis.directions();
    for l in 1..=instance.m {
        let mut members: Vec<&Square> = instance.squares.iter().filter(|s| line(s) == l).collect();
        members.sort_by_key(|s| (std::cmp::Reverse(pos(s)), s.id));
        let high = members.len().min(d);
        for s in &members[..high] {
            a.set(s.id, Some(toward_max));
        }
        let rest = &members[high..];
        let low = rest.len().min(d);
        for s in &rest[rest.len() - low..] {
            a.set(s.id, Some(toward_min));
        }
    }
    a
}

pub fn two_approx(instance: &GridInstance) -> Result<Solution> {
    let mult = instance.input_multiplicity();
    if mult > instance.d {
        return Err(Error::InfeasibleInput { density: mult, d: instance.d });
    }
    let v = axis_solution(instance, Axis::Vertical);
    let h = axis_solution(instance, Axis::Horizontal);
    let best = if h.extended_count() > v.extended_count() { h } else { v };
    Ok(Solution::new(best, "square2x", ClaimedRatio::rational(2, 1)))
}

/// The parameterized rectangle search run on the unit-square embedding.
pub fn fpt_solve_grid(instance: &GridInstance, k: usize) -> Result<FptTrace> {
    fpt_solve(&to_rect_instance(instance), k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Can every square be extended?
    All,
    Maximize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Backtrack {
    Solved { rho: usize, witness: GridAssignment },
    /// `All` mode only: no full extension exists.
    Impossible,
    Inconclusive { nodes: u64 },
}

impl Backtrack {
    pub fn rho(&self) -> Option<usize> {
        match self {
            Backtrack::Solved { rho, .. } => Some(*rho),
            _ => None,
        }
    }

    pub fn is_full(&self) -> Option<bool> {
        match self {
            Backtrack::Solved { .. } => Some(true),
            Backtrack::Impossible => Some(false),
            Backtrack::Inconclusive { .. } => None,
        }
    }
}

pub fn exact_backtracking(instance: &GridInstance, mode: Mode, node_budget: u64) -> Result<Backtrack> {
    exact_backtracking_fixed(instance, mode, &GridAssignment::default(), node_budget)
}

/// As [`exact_backtracking`], with some squares pinned to the directions in
/// `fixed`.
pub fn exact_backtracking_fixed(
    instance: &GridInstance,
    mode: Mode,
    fixed: &GridAssignment,
    node_budget: u64,
) -> Result<Backtrack> {
    let mult = instance.input_multiplicity();
    if mult > instance.d {
        return match mode {
            Mode::All => Ok(Backtrack::Impossible),
            Mode::Maximize => Err(Error::InfeasibleInput { density: mult, d: instance.d }),
        };
    }
    let n = instance.n();
    let mut options: Vec<Vec<(Direction, Vec<usize>)>> = Vec::with_capacity(n);
    for s in &instance.squares {
        let mut opts: Vec<(Direction, Vec<usize>)> = Direction::ALL
            .iter()
            .filter(|&&dir| fixed.get(s.id).is_none_or(|f| f == dir))
            .map(|&dir| (dir, instance.ray(s, dir)))
            .collect();
        opts.sort_by_key(|(dir, ray)| (ray.len(), *dir));
        options.push(opts);
    }
    let mut search = Search {
        options,
        counts: coverage(instance, &GridAssignment::none_for(instance.ids())),
        d: instance.d,
        mode,
        chosen: vec![None; n],
        done: vec![false; n],
        best: 0,
        best_dirs: vec![None; n],
        nodes: 0,
        budget: node_budget,
    };
    let finished = search.run(0, 0);
    let witness = |dirs: &[Option<Direction>]| {
        GridAssignment::from_pairs(instance.squares.iter().zip(dirs).map(|(s, &d)| (s.id, d)))
    };
    Ok(match (finished, mode) {
        (None, _) => Backtrack::Inconclusive { nodes: search.nodes },
        (Some(true), Mode::All) => Backtrack::Solved { rho: n, witness: witness(&search.chosen) },
        (Some(false), Mode::All) => Backtrack::Impossible,
        (Some(_), Mode::Maximize) => Backtrack::Solved { rho: search.best, witness: witness(&search.best_dirs) },
    })
}

struct Search {
    options: Vec<Vec<(Direction, Vec<usize>)>>,
    counts: Vec<u32>,
    d: u32,
    mode: Mode,
    chosen: Vec<Option<Direction>>,
    done: Vec<bool>,
    best: usize,
    best_dirs: Vec<Option<Direction>>,
    nodes: u64,
    budget: u64,
}

impl Search {
    fn legal(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.options[i]
            .iter()
            .enumerate()
            .filter(|(_, (_, ray))| ray.iter().all(|&c| self.counts[c] < self.d))
            .map(|(o, _)| o)
    }

    /// `Some(true)` stops the search (`All` mode success), `None` means the
    /// budget ran out.
    fn run(&mut self, placed: usize, count: usize) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        if count > self.best {
            self.best = count;
            self.best_dirs.clone_from(&self.chosen);
        }
        let n = self.chosen.len();
        if placed == n {
            return Some(self.mode == Mode::All);
        }
        if self.mode == Mode::Maximize && count + (n - placed) <= self.best {
            return Some(false);
        }
        // Most constrained open square first.
        let mut pick: Option<(usize, usize)> = None;
        for i in 0..n {
            if self.done[i] {
                continue;
            }
            let c = self.legal(i).count();
            if c == 0 && self.mode == Mode::All {
                return Some(false);
            }
            if pick.is_none_or(|(_, b)| c < b) {
                pick = Some((i, c));
            }
        }
        let (i, _) = pick.expect("an open square");
        let legal: Vec<usize> = self.legal(i).collect();
        self.done[i] = true;
        for o in legal {
            let dir = self.options[i][o].0;
            for k in 0..self.options[i][o].1.len() {
                let c = self.options[i][o].1[k];
                self.counts[c] += 1;
            }
            self.chosen[i] = Some(dir);
            let r = self.run(placed + 1, count + 1);
            for k in 0..self.options[i][o].1.len() {
                let c = self.options[i][o].1[k];
                self.counts[c] -= 1;
            }
            match r {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => self.chosen[i] = None,
            }
        }
        let mut r = Some(false);
        if self.mode == Mode::Maximize {
            r = self.run(placed + 1, count);
        }
        self.done[i] = false;
        r
    }
}
