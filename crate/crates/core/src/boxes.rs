//! Three-dimensional escape: boxes leave through one of six faces.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::approx::{ClaimedRatio, Solution};
use crate::error::{Error, Result};
use crate::geometry::{max_density, Assignment, Coord, Rect, RectId};

pub const DEFAULT_MIS_CAP: usize = 16;
pub const DEFAULT_BRUTE_CAP3: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis3 {
    X,
    Y,
    Z,
}

impl Axis3 {
    pub const ALL: [Axis3; 3] = [Axis3::X, Axis3::Y, Axis3::Z];

    fn index(self) -> usize {
        self as usize
    }

    pub fn directions(self) -> [Dir3; 2] {
        [Dir3 { axis: self, positive: true }, Dir3 { axis: self, positive: false }]
    }

    /// The two axes spanning the perpendicular plane.
    fn plane(self) -> (usize, usize) {
        match self {
            Axis3::X => (1, 2),
            Axis3::Y => (0, 2),
            Axis3::Z => (0, 1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dir3 {
    pub axis: Axis3,
    pub positive: bool,
}

impl Dir3 {
    pub const ALL: [Dir3; 6] = [
        Dir3 { axis: Axis3::X, positive: true },
        Dir3 { axis: Axis3::X, positive: false },
        Dir3 { axis: Axis3::Y, positive: true },
        Dir3 { axis: Axis3::Y, positive: false },
        Dir3 { axis: Axis3::Z, positive: true },
        Dir3 { axis: Axis3::Z, positive: false },
    ];

    pub fn parse(s: &str) -> Option<Dir3> {
        Dir3::ALL.into_iter().find(|d| d.to_string() == s)
    }
}

impl fmt::Display for Dir3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = ["x", "y", "z"][self.axis.index()];
        write!(f, "{a}{}", if self.positive { '+' } else { '-' })
    }
}

impl Serialize for Dir3 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dir3 {
    fn deserialize<De: serde::Deserializer<'de>>(d: De) -> std::result::Result<Self, De::Error> {
        let s = String::deserialize(d)?;
        Dir3::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("unknown direction {s:?}")))
    }
}

pub type Assignment3 = Assignment<Dir3>;

/// Closed-open box `[lo, hi)` per axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Box3 {
    pub id: RectId,
    pub lo: [Coord; 3],
    pub hi: [Coord; 3],
}

impl Box3 {
    pub fn new(id: RectId, lo: [Coord; 3], hi: [Coord; 3]) -> Result<Self> {
        if (0..3).any(|a| lo[a] >= hi[a]) {
            return Err(Error::Geometry(format!("box {id} is empty")));
        }
        Ok(Self { id, lo, hi })
    }

    pub fn contains_box(&self, o: &Box3) -> bool {
        (0..3).all(|a| self.lo[a] <= o.lo[a] && o.hi[a] <= self.hi[a])
    }

    pub fn overlaps(&self, o: &Box3) -> bool {
        (0..3).all(|a| self.lo[a] < o.hi[a] && o.lo[a] < self.hi[a])
    }

    pub fn contains_point(&self, p: [Coord; 3]) -> bool {
        (0..3).all(|a| self.lo[a] <= p[a] && p[a] < self.hi[a])
    }

    pub fn footprint(&self, axis: Axis3) -> Rect {
        let (u, v) = axis.plane();
        Rect { id: self.id, x_min: self.lo[u], y_min: self.lo[v], x_max: self.hi[u], y_max: self.hi[v] }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Region3 {
    pub lo: [Coord; 3],
    pub hi: [Coord; 3],
}

impl Region3 {
    pub fn new(lo: [Coord; 3], hi: [Coord; 3]) -> Result<Self> {
        if (0..3).any(|a| lo[a] >= hi[a]) {
            return Err(Error::Geometry("empty region".into()));
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, b: &Box3) -> bool {
        (0..3).all(|a| self.lo[a] <= b.lo[a] && b.hi[a] <= self.hi[a])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance3 {
    pub region: Region3,
    pub boxes: Vec<Box3>,
    pub d: u32,
    pub k: Option<u32>,
}

impl Instance3 {
    pub fn new(region: Region3, boxes: Vec<Box3>, d: u32, k: Option<u32>) -> Result<Self> {
        if d == 0 {
            return Err(Error::Parameter("density budget d must be at least 1".into()));
        }
        let mut seen = BTreeSet::new();
        for b in &boxes {
            if (0..3).any(|a| b.lo[a] >= b.hi[a]) {
                return Err(Error::Geometry(format!("box {} is empty", b.id)));
            }
            if !seen.insert(b.id) {
                return Err(Error::Geometry(format!("duplicate box id {}", b.id)));
            }
            if !region.contains(b) {
                return Err(Error::Geometry(format!("box {} lies outside the region", b.id)));
            }
        }
        Ok(Self { region, boxes, d, k })
    }

    pub fn n(&self) -> usize {
        self.boxes.len()
    }

    pub fn ids(&self) -> impl Iterator<Item = RectId> + '_ {
        self.boxes.iter().map(|b| b.id)
    }

    pub fn get(&self, id: RectId) -> Option<&Box3> {
        self.boxes.iter().find(|b| b.id == id)
    }

    pub fn input_density(&self) -> DensityReport3 {
        max_density3(&self.boxes)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport3 {
    pub max_density: u32,
    /// Lower corner of the lexicographically smallest maximizing voxel.
    pub witness: Option<[Coord; 3]>,
}

pub fn extend3(b: &Box3, region: &Region3, dir: Dir3) -> Box3 {
    let a = dir.axis.index();
    let mut out = *b;
    if dir.positive {
        out.hi[a] = region.hi[a];
    } else {
        out.lo[a] = region.lo[a];
    }
    out
}

/// Space swept by the move, body excluded; `None` if the box already
/// touches that face.
pub fn extension_region3(b: &Box3, region: &Region3, dir: Dir3) -> Option<Box3> {
    let a = dir.axis.index();
    let mut out = *b;
    if dir.positive {
        if b.hi[a] >= region.hi[a] {
            return None;
        }
        out.lo[a] = b.hi[a];
        out.hi[a] = region.hi[a];
    } else {
        if b.lo[a] <= region.lo[a] {
            return None;
        }
        out.hi[a] = b.lo[a];
        out.lo[a] = region.lo[a];
    }
    Some(out)
}

pub fn apply_assignment3(inst: &Instance3, a: &Assignment3) -> Result<Vec<Box3>> {
    for (id, _) in a.iter() {
        if inst.get(id).is_none() {
            return Err(Error::DomainMismatch(id));
        }
    }
    Ok(inst
        .boxes
        .iter()
        .map(|b| match a.get(b.id) {
            Some(dir) => extend3(b, &inst.region, dir),
            None => *b,
        })
        .collect())
}

pub fn max_density3(boxes: &[Box3]) -> DensityReport3 {
    Density3::from_boxes(boxes, [&[], &[], &[]]).report()
}

pub fn is_feasible3(inst: &Instance3, a: &Assignment3) -> Result<bool> {
    Ok(max_density3(&apply_assignment3(inst, a)?).max_density <= inst.d)
}

/// Voxel coverage counts over the compressed boundaries.
#[derive(Clone, Debug)]
pub struct Density3 {
    cuts: [Vec<Coord>; 3],
    counts: Vec<u32>,
}

impl Density3 {
    pub fn from_boxes(boxes: &[Box3], extra: [&[Coord]; 3]) -> Self {
        let cuts: [Vec<Coord>; 3] = std::array::from_fn(|a| {
            let mut v: Vec<Coord> = boxes.iter().flat_map(|b| [b.lo[a], b.hi[a]]).collect();
            v.extend_from_slice(extra[a]);
            v.sort_unstable();
            v.dedup();
            v
        });
        let size: usize = cuts.iter().map(|c| c.len().saturating_sub(1)).product();
        let mut grid = Self { cuts, counts: vec![0; size] };
        for b in boxes {
            grid.add(b);
        }
        grid
    }

    pub fn for_instance(inst: &Instance3) -> Self {
        let r = &inst.region;
        Self::from_boxes(&inst.boxes, [&[r.lo[0], r.hi[0]], &[r.lo[1], r.hi[1]], &[r.lo[2], r.hi[2]]])
    }

    fn dims(&self) -> [usize; 3] {
        std::array::from_fn(|a| self.cuts[a].len().saturating_sub(1))
    }

    fn span(&self, b: &Box3) -> [(usize, usize); 3] {
        std::array::from_fn(|a| {
            let at = |v| self.cuts[a].binary_search(&v).expect("coordinate is not a grid boundary");
            (at(b.lo[a]), at(b.hi[a]))
        })
    }

    fn cells(&self, b: &Box3) -> impl Iterator<Item = usize> + use<> {
        let [nx, ny, _] = self.dims();
        let [(x0, x1), (y0, y1), (z0, z1)] = self.span(b);
        (z0..z1).flat_map(move |k| (y0..y1).flat_map(move |j| (x0..x1).map(move |i| (k * ny + j) * nx + i)))
    }

    pub fn max_in(&self, b: &Box3) -> u32 {
        self.cells(b).map(|c| self.counts[c]).max().unwrap_or(0)
    }

    pub fn add(&mut self, b: &Box3) {
        for c in self.cells(b) {
            self.counts[c] += 1;
        }
    }

    pub fn remove(&mut self, b: &Box3) {
        for c in self.cells(b) {
            self.counts[c] -= 1;
        }
    }

    pub fn report(&self) -> DensityReport3 {
        let [nx, ny, nz] = self.dims();
        let mut best: Option<(u32, [usize; 3])> = None;
        for i in 0..nx {
            for j in 0..ny {
                for k in 0..nz {
                    let c = self.counts[(k * ny + j) * nx + i];
                    if best.is_none_or(|(b, _)| c > b) {
                        best = Some((c, [i, j, k]));
                    }
                }
            }
        }
        match best {
            Some((c, [i, j, k])) => DensityReport3 {
                max_density: c,
                witness: Some([self.cuts[0][i], self.cuts[1][j], self.cuts[2][k]]),
            },
            None => DensityReport3 { max_density: 0, witness: None },
        }
    }
}

fn blocked3(grid: &Density3, inst: &Instance3, b: &Box3, dir: Dir3) -> bool {
    extension_region3(b, &inst.region, dir).is_some_and(|ext| grid.max_in(&ext) >= inst.d)
}

pub fn project_boxes(boxes: &[Box3], axis: Axis3) -> Vec<Rect> {
    boxes.iter().map(|b| b.footprint(axis)).collect()
}

/// Boxes that cannot move alone in either direction along `axis`.
pub fn stuck_boxes(inst: &Instance3, axis: Axis3) -> BTreeSet<RectId> {
    let grid = Density3::for_instance(inst);
    inst.boxes
        .iter()
        .filter(|b| axis.directions().iter().all(|&dir| blocked3(&grid, inst, b, dir)))
        .map(|b| b.id)
        .collect()
}

/// Planar maximum independent set procedure used by the box pipelines.
pub trait MisPlugin {
    fn name(&self) -> &'static str;
    /// Approximation factor of `select`, if it has one.
    fn guarantee(&self) -> Option<u64>;
    fn select(&self, rects: &[Rect]) -> Result<BTreeSet<RectId>>;
}

#[derive(Clone, Copy, Debug)]
pub struct ExactMis {
    pub cap: usize,
}

impl Default for ExactMis {
    fn default() -> Self {
        Self { cap: DEFAULT_MIS_CAP }
    }
}

impl MisPlugin for ExactMis {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn guarantee(&self) -> Option<u64> {
        Some(1)
    }

    fn select(&self, rects: &[Rect]) -> Result<BTreeSet<RectId>> {
        rect_mis_exact(rects, self.cap)
    }
}

/// Smallest-area-first greedy. No guarantee.
#[derive(Clone, Copy, Debug, Default)]
pub struct GreedyMis;

impl MisPlugin for GreedyMis {
    fn name(&self) -> &'static str {
        "greedy"
    }

    fn guarantee(&self) -> Option<u64> {
        None
    }

    fn select(&self, rects: &[Rect]) -> Result<BTreeSet<RectId>> {
        let mut order: Vec<&Rect> = rects.iter().collect();
        order.sort_by_key(|r| ((r.x_max - r.x_min) * (r.y_max - r.y_min), r.id));
        let mut taken: Vec<&Rect> = Vec::new();
        for r in order {
            if taken.iter().all(|t| !t.overlaps(r)) {
                taken.push(r);
            }
        }
        Ok(taken.iter().map(|r| r.id).collect())
    }
}

/// Maximum set of pairwise non-overlapping rects by branch and bound.
pub fn rect_mis_exact(rects: &[Rect], cap: usize) -> Result<BTreeSet<RectId>> {
    let n = rects.len();
    if n > cap.min(64) {
        return Err(Error::SizeCap { n, cap: cap.min(64) });
    }
    let adj: Vec<u64> = rects
        .iter()
        .enumerate()
        .map(|(i, a)| {
            rects
                .iter()
                .enumerate()
                .filter(|&(j, b)| i != j && a.overlaps(b))
                .fold(0u64, |m, (j, _)| m | 1 << j)
        })
        .collect();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = 0u64;
    mis_branch(&adj, 0, all, &mut best);
    Ok((0..n).filter(|&i| best >> i & 1 == 1).map(|i| rects[i].id).collect())
}

fn mis_branch(adj: &[u64], chosen: u64, open: u64, best: &mut u64) {
    if chosen.count_ones() + open.count_ones() <= best.count_ones() {
        return;
    }
    if open == 0 {
        *best = chosen;
        return;
    }
    let v = open.trailing_zeros() as usize;
    let bit = 1u64 << v;
    mis_branch(adj, chosen | bit, open & !bit & !adj[v], best);
    mis_branch(adj, chosen, open & !bit, best);
}

fn infeasible3(inst: &Instance3, algorithm: &str, ratio: ClaimedRatio) -> Solution<Dir3> {
    let mut s = Solution::new(Assignment3::none_for(inst.ids()), algorithm, ratio);
    s.input_infeasible = true;
    s
}

/// Per axis: drop stuck boxes, keep an independent set of footprints, move
/// each through an unblocked face. Best axis wins.
pub fn solve_boxes_general(inst: &Instance3, plugin: &dyn MisPlugin) -> Result<Solution<Dir3>> {
    let ratio = match plugin.guarantee() {
        Some(g) => ClaimedRatio::rational(12 * inst.d as u64 * g, 1),
        None => ClaimedRatio::Heuristic,
    };
    let tag = format!("boxes-general/{}", plugin.name());
    if inst.input_density().max_density > inst.d {
        return Ok(infeasible3(inst, &tag, ratio));
    }
    let grid = Density3::for_instance(inst);
    let mut best: Option<Assignment3> = None;
    for axis in Axis3::ALL {
        let stuck = stuck_boxes(inst, axis);
        let live: Vec<&Box3> = inst.boxes.iter().filter(|b| !stuck.contains(&b.id)).collect();
        let feet: Vec<Rect> = live.iter().map(|b| b.footprint(axis)).collect();
        let chosen = plugin.select(&feet)?;
        let mut a = Assignment3::none_for(inst.ids());
        for b in live.iter().filter(|b| chosen.contains(&b.id)) {
            let dir = axis.directions().into_iter().find(|&dir| !blocked3(&grid, inst, b, dir));
            a.set(b.id, dir);
        }
        if best.as_ref().is_none_or(|cur| a.extended_count() > cur.extended_count()) {
            best = Some(a);
        }
    }
    Ok(Solution::new(best.expect("three axes"), &tag, ratio))
}

/// Disjoint boxes: per face, a (d-1)-fold packing of footprints built from
/// repeated independent-set extractions. Best face wins.
pub fn solve_boxes_disjoint(inst: &Instance3, plugin: &dyn MisPlugin) -> Result<Solution<Dir3>> {
    if inst.d < 2 {
        return Err(Error::Parameter("disjoint box escape needs d >= 2".into()));
    }
    let density = inst.input_density().max_density;
    if density > 1 {
        return Err(Error::NotDisjoint(density));
    }
    let d = inst.d as u64;
    let ratio = match plugin.guarantee() {
        Some(1) if d == 2 => ClaimedRatio::rational(6 * d, d - 1),
        Some(g) => ClaimedRatio::rational(12 * d * g, d - 1),
        None => ClaimedRatio::Heuristic,
    };
    let tag = format!("boxes-disjoint/{}", plugin.name());
    let grid = Density3::for_instance(inst);
    let mut best: Option<Assignment3> = None;
    for dir in Dir3::ALL {
        let mut pool: Vec<Rect> = inst
            .boxes
            .iter()
            .filter(|b| !blocked3(&grid, inst, b, dir))
            .map(|b| b.footprint(dir.axis))
            .collect();
        let mut packed: Vec<Rect> = Vec::new();
        for _ in 1..inst.d {
            if pool.is_empty() {
                break;
            }
            let round = plugin.select(&pool)?;
            let (taken, rest): (Vec<Rect>, Vec<Rect>) = pool.into_iter().partition(|r| round.contains(&r.id));
            packed.extend(taken);
            pool = rest;
        }
        debug_assert!(max_density(&packed).max_density < inst.d);
        let a = Assignment3::from_pairs(
            inst.boxes.iter().map(|b| (b.id, packed.iter().any(|r| r.id == b.id).then_some(dir))),
        );
        if best.as_ref().is_none_or(|cur| a.extended_count() > cur.extended_count()) {
            best = Some(a);
        }
    }
    Ok(Solution::new(best.expect("six faces"), &tag, ratio))
}

/// Exact runaway number for small box instances, optionally restricted to
/// some faces.
pub fn brute_force_rho3(inst: &Instance3, allowed: &[Dir3], cap: usize) -> Result<(usize, Assignment3)> {
    if inst.n() > cap {
        return Err(Error::SizeCap { n: inst.n(), cap });
    }
    if inst.input_density().max_density > inst.d {
        return Err(Error::InfeasibleInput { density: inst.input_density().max_density, d: inst.d });
    }
    let moves: Vec<Vec<(Dir3, Option<Box3>)>> = inst
        .boxes
        .iter()
        .map(|b| allowed.iter().map(|&dir| (dir, extension_region3(b, &inst.region, dir))).collect())
        .collect();
    let mut search = Brute3 {
        grid: Density3::for_instance(inst),
        moves,
        d: inst.d,
        cur: vec![None; inst.n()],
        best: 0,
        best_dirs: vec![None; inst.n()],
    };
    search.run(0, 0);
    let a = Assignment3::from_pairs(inst.boxes.iter().zip(&search.best_dirs).map(|(b, &d)| (b.id, d)));
    Ok((search.best, a))
}

struct Brute3 {
    grid: Density3,
    moves: Vec<Vec<(Dir3, Option<Box3>)>>,
    d: u32,
    cur: Vec<Option<Dir3>>,
    best: usize,
    best_dirs: Vec<Option<Dir3>>,
}

impl Brute3 {
    fn run(&mut self, i: usize, count: usize) {
        if count + (self.moves.len() - i) <= self.best {
            return;
        }
        if i == self.moves.len() {
            self.best = count;
            self.best_dirs = self.cur.clone();
            return;
        }
        for m in 0..self.moves[i].len() {
            let (dir, ext) = self.moves[i][m];
            match ext {
                Some(ext) if self.grid.max_in(&ext) < self.d => {
                    self.grid.add(&ext);
                    self.cur[i] = Some(dir);
                    self.run(i + 1, count + 1);
                    self.grid.remove(&ext);
                }
                Some(_) => continue,
                None => {
                    self.cur[i] = Some(dir);
                    self.run(i + 1, count + 1);
                }
            }
        }
        self.cur[i] = None;
        self.run(i + 1, count);
    }
}
