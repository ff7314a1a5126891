//! Approximation algorithms for rectangles.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{blocked_on, Assignment, Axis, DensityGrid, Direction, Instance};
use crate::interval::{k_fold_packing, max_independent_set, project};

/// Guarantee advertised by a solver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum ClaimedRatio {
    Exact,
    Rational { num: u64, den: u64 },
    /// Holds asymptotically or with high probability only.
    Asymptotic { num: u64, den: u64 },
    Heuristic,
}

impl ClaimedRatio {
    pub fn rational(num: u64, den: u64) -> Self {
        let g = gcd(num, den);
        ClaimedRatio::Rational { num: num / g, den: den / g }
    }

    pub fn value(&self) -> Option<f64> {
        match *self {
            ClaimedRatio::Exact => Some(1.0),
            ClaimedRatio::Rational { num, den } | ClaimedRatio::Asymptotic { num, den } => {
                Some(num as f64 / den as f64)
            }
            ClaimedRatio::Heuristic => None,
        }
    }
}

impl fmt::Display for ClaimedRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ClaimedRatio::Exact => f.write_str("exact"),
            ClaimedRatio::Rational { num, den: 1 } => write!(f, "{num}"),
            ClaimedRatio::Rational { num, den } => write!(f, "{num}/{den}"),
            ClaimedRatio::Asymptotic { num, den } => write!(f, "~{num}/{den}"),
            ClaimedRatio::Heuristic => f.write_str("heuristic"),
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a.max(1) } else { gcd(b, a % b) }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Solution<D = Direction> {
    pub assignment: Assignment<D>,
    pub extended_count: usize,
    pub algorithm: String,
    pub claimed_ratio: ClaimedRatio,
    /// Set when the input already violates the density budget.
    pub input_infeasible: bool,
}

impl<D: Copy> Solution<D> {
    pub fn new(assignment: Assignment<D>, algorithm: &str, claimed_ratio: ClaimedRatio) -> Self {
        Self {
            extended_count: assignment.extended_count(),
            assignment,
            algorithm: algorithm.to_string(),
            claimed_ratio,
            input_infeasible: false,
        }
    }
}

impl Solution {
    fn infeasible(instance: &Instance, algorithm: &str, claimed_ratio: ClaimedRatio) -> Self {
        let mut s = Self::new(Assignment::none_for(instance.ids()), algorithm, claimed_ratio);
        s.input_infeasible = true;
        s
    }
}

/// Moves rects along one axis only: drops stuck rects, keeps an independent
/// set of the perpendicular projections and sends each member through an
/// unblocked side.
pub fn solve_axis_restricted_general(instance: &Instance, axis: Axis) -> Solution {
    let tag = match axis {
        Axis::Vertical => "approx4d-vertical",
        Axis::Horizontal => "approx4d-horizontal",
    };
    let ratio = ClaimedRatio::rational(2 * instance.d as u64, 1);
    if instance.input_density().max_density > instance.d {
        return Solution::infeasible(instance, tag, ratio);
    }
    let grid = DensityGrid::for_instance(instance);
    let mut open = Vec::new();
    for r in &instance.rects {
        let free: Vec<Direction> = axis
            .directions()
            .into_iter()
            .filter(|&dir| !blocked_on(&grid, instance, r, dir))
            .collect();
        if let Some(&dir) = free.first() {
            open.push((*r, dir));
        }
    }
    let good: Vec<_> = open.iter().map(|(r, _)| *r).collect();
    let chosen = max_independent_set(&project(&good, axis.perpendicular_dim()));
    let mut a = Assignment::none_for(instance.ids());
    for (r, dir) in &open {
        if chosen.contains(&r.id) {
            a.set(r.id, Some(*dir));
        }
    }
    Solution::new(a, tag, ratio)
}

pub fn solve_general_4d(instance: &Instance) -> Solution {
    let v = solve_axis_restricted_general(instance, Axis::Vertical);
    let h = solve_axis_restricted_general(instance, Axis::Horizontal);
    let mut best = if h.extended_count > v.extended_count { h } else { v };
    best.algorithm = "approx4d".into();
    best.claimed_ratio = ClaimedRatio::rational(4 * instance.d as u64, 1);
    best
}

fn require_disjoint(instance: &Instance) -> Result<()> {
    let density = instance.input_density().max_density;
    if density > 1 {
        return Err(Error::NotDisjoint(density));
    }
    Ok(())
}

/// Every selected rect moves in `dir`; the selection is a `(d-1)`-fold
/// packing of the perpendicular projections.
pub fn solve_direction_restricted_disjoint(instance: &Instance, dir: Direction) -> Result<Solution> {
    require_disjoint(instance)?;
    let d = instance.d as usize;
    let dim = dir.axis().perpendicular_dim();
    let selected = if d == 1 {
        let grid = DensityGrid::for_instance(instance);
        let free: Vec<_> = instance
            .rects
            .iter()
            .filter(|r| !blocked_on(&grid, instance, r, dir))
            .copied()
            .collect();
        max_independent_set(&project(&free, dim))
    } else {
        k_fold_packing(&project(&instance.rects, dim), d - 1).selected
    };
    let mut a = Assignment::none_for(instance.ids());
    for id in selected {
        a.set(id, Some(dir));
    }
    Ok(Solution::new(
        a,
        &format!("disjoint-{dir}"),
        disjoint_ratio(instance.d).unwrap_or(ClaimedRatio::Heuristic),
    ))
}

fn disjoint_ratio(d: u32) -> Option<ClaimedRatio> {
    (d >= 2).then(|| ClaimedRatio::rational(4 * d as u64, d as u64 - 1))
}

pub fn solve_disjoint(instance: &Instance) -> Result<Solution> {
    if instance.d < 2 {
        return Err(Error::Parameter("the disjoint solver needs d >= 2".into()));
    }
    require_disjoint(instance)?;
    let mut best: Option<Solution> = None;
    for dir in Direction::ALL {
        let s = solve_direction_restricted_disjoint(instance, dir)?;
        if best.as_ref().is_none_or(|b| s.extended_count > b.extended_count) {
            best = Some(s);
        }
    }
    let mut best = best.expect("four candidates");
    best.algorithm = "disjoint".into();
    Ok(best)
}
