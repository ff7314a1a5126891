//! Interval projections, maximum independent sets, piercing and k-fold packing.

use std::collections::BTreeSet;

use crate::geometry::{Coord, Dim, Rect, RectId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub id: RectId,
    pub lo: Coord,
    pub hi: Coord,
}

impl Interval {
    pub fn new(id: RectId, lo: Coord, hi: Coord) -> Self {
        debug_assert!(lo < hi);
        Self { id, lo, hi }
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }

    pub fn contains(&self, p: Coord) -> bool {
        self.lo <= p && p < self.hi
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingResult {
    pub selected: BTreeSet<RectId>,
    pub color_classes: Vec<Vec<RectId>>,
}

pub fn project(rects: &[Rect], dim: Dim) -> Vec<Interval> {
    rects
        .iter()
        .map(|r| match dim {
            Dim::X => Interval::new(r.id, r.x_min, r.x_max),
            Dim::Y => Interval::new(r.id, r.y_min, r.y_max),
        })
        .collect()
}

fn by_right_end(intervals: &[Interval]) -> Vec<Interval> {
    let mut v = intervals.to_vec();
    v.sort_by_key(|iv| (iv.hi, iv.id));
    v
}

/// Greedy earliest-right-endpoint independent set, in selection order.
pub fn greedy_mis(intervals: &[Interval]) -> Vec<Interval> {
    let mut out: Vec<Interval> = Vec::new();
    for iv in by_right_end(intervals) {
        if out.last().is_none_or(|last| last.hi <= iv.lo) {
            out.push(iv);
        }
    }
    out
}

pub fn max_independent_set(intervals: &[Interval]) -> BTreeSet<RectId> {
    greedy_mis(intervals).into_iter().map(|iv| iv.id).collect()
}

/// One point per greedy MIS member, at `hi - 1`; together they pierce every
/// input interval.
pub fn piercing_points(intervals: &[Interval]) -> Vec<Coord> {
    greedy_mis(intervals).into_iter().map(|iv| iv.hi - 1).collect()
}

/// Maximum depth of the configuration (0 when empty).
pub fn max_depth(intervals: &[Interval]) -> usize {
    let mut events: Vec<(Coord, i32)> = intervals
        .iter()
        .flat_map(|iv| [(iv.lo, 1), (iv.hi, -1)])
        .collect();
    // Ends sort before starts at the same coordinate.
    events.sort_unstable();
    let mut depth = 0i32;
    let mut best = 0i32;
    for (_, e) in events {
        depth += e;
        best = best.max(depth);
    }
    best as usize
}

/// Maximum subset of `intervals` whose depth never exceeds `k`.
pub fn k_fold_packing(intervals: &[Interval], k: usize) -> PackingResult {
    assert!(k >= 1, "k must be positive");
    let order = by_right_end(intervals);
    let mut coords: Vec<Coord> = intervals.iter().flat_map(|iv| [iv.lo, iv.hi]).collect();
    coords.sort_unstable();
    coords.dedup();
    let idx = |c: Coord| coords.binary_search(&c).unwrap();
    let mut depth = vec![0usize; coords.len()];
    let mut accepted = Vec::new();
    for iv in order {
        let (a, b) = (idx(iv.lo), idx(iv.hi));
        if depth[a..b].iter().all(|&c| c < k) {
            depth[a..b].iter_mut().for_each(|c| *c += 1);
            accepted.push(iv);
        }
    }
    let color_classes = first_fit_classes(&accepted);
    debug_assert!(color_classes.len() <= k);
    PackingResult {
        selected: accepted.iter().map(|iv| iv.id).collect(),
        color_classes,
    }
}

/// Partition into independent classes, first fit by left endpoint. Uses
/// exactly `max_depth` classes.
pub fn first_fit_classes(intervals: &[Interval]) -> Vec<Vec<RectId>> {
    let mut v = intervals.to_vec();
    v.sort_by_key(|iv| (iv.lo, iv.id));
    let mut class_end: Vec<Coord> = Vec::new();
    let mut classes: Vec<Vec<RectId>> = Vec::new();
    for iv in v {
        match class_end.iter().position(|&end| end <= iv.lo) {
            Some(c) => {
                class_end[c] = iv.hi;
                classes[c].push(iv.id);
            }
            None => {
                class_end.push(iv.hi);
                classes.push(vec![iv.id]);
            }
        }
    }
    classes
}
