//! Integer rectangles, extensions and exact density computation.
//!
//! A rectangle covers the half-open product `[x_min, x_max) x [y_min, y_max)`,
//! so rectangles that only share an edge do not overlap. All density
//! questions are answered on the grid obtained by compressing every x and y
//! boundary of the configuration; density is constant on each compressed cell.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Coord = i64;
pub type RectId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Region {
    pub x_min: Coord,
    pub y_min: Coord,
    pub x_max: Coord,
    pub y_max: Coord,
}

impl Region {
    pub fn new(x_min: Coord, y_min: Coord, x_max: Coord, y_max: Coord) -> Result<Self> {
        if x_min >= x_max || y_min >= y_max {
            return Err(Error::Geometry(format!(
                "empty region ({x_min},{y_min},{x_max},{y_max})"
            )));
        }
        Ok(Self { x_min, y_min, x_max, y_max })
    }

    pub fn contains(&self, r: &Rect) -> bool {
        self.x_min <= r.x_min && r.x_max <= self.x_max && self.y_min <= r.y_min && r.y_max <= self.y_max
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rect {
    pub id: RectId,
    pub x_min: Coord,
    pub y_min: Coord,
    pub x_max: Coord,
    pub y_max: Coord,
}

impl Rect {
    pub fn new(id: RectId, x_min: Coord, y_min: Coord, x_max: Coord, y_max: Coord) -> Result<Self> {
        if x_min >= x_max || y_min >= y_max {
            return Err(Error::Geometry(format!(
                "rect {id} is empty ({x_min},{y_min},{x_max},{y_max})"
            )));
        }
        Ok(Self { id, x_min, y_min, x_max, y_max })
    }

    pub fn contains_point(&self, x: Coord, y: Coord) -> bool {
        self.x_min <= x && x < self.x_max && self.y_min <= y && y < self.y_max
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.x_min <= other.x_min
            && other.x_max <= self.x_max
            && self.y_min <= other.y_min
            && other.y_max <= self.y_max
    }

    pub fn overlaps(&self, other: &Rect) -> bool {
        self.x_min < other.x_max
            && other.x_min < self.x_max
            && self.y_min < other.y_max
            && other.y_min < self.y_max
    }

    pub fn translate(&self, dx: Coord, dy: Coord) -> Rect {
        Rect {
            id: self.id,
            x_min: self.x_min + dx,
            y_min: self.y_min + dy,
            x_max: self.x_max + dx,
            y_max: self.y_max + dy,
        }
    }

    /// True when no side lies on the region border.
    pub fn is_internal(&self, region: &Region) -> bool {
        self.x_min != region.x_min
            && self.x_max != region.x_max
            && self.y_min != region.y_min
            && self.y_max != region.y_max
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
    Left,
    Right,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::Up, Direction::Down, Direction::Left, Direction::Right];

    pub fn axis(self) -> Axis {
        match self {
            Direction::Up | Direction::Down => Axis::Vertical,
            Direction::Left | Direction::Right => Axis::Horizontal,
        }
    }

    pub fn opposite(self) -> Direction {
        match self {
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::Up => "up",
            Direction::Down => "down",
            Direction::Left => "left",
            Direction::Right => "right",
        }
    }

    pub fn parse(s: &str) -> Option<Direction> {
        match s {
            "up" => Some(Direction::Up),
            "down" => Some(Direction::Down),
            "left" => Some(Direction::Left),
            "right" => Some(Direction::Right),
            _ => None,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Extension axis: `Vertical` covers Up/Down, `Horizontal` covers Left/Right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Vertical,
    Horizontal,
}

impl Axis {
    pub fn directions(self) -> [Direction; 2] {
        match self {
            Axis::Vertical => [Direction::Up, Direction::Down],
            Axis::Horizontal => [Direction::Right, Direction::Left],
        }
    }

    /// The coordinate onto which rectangles are projected when they move
    /// along this axis.
    pub fn perpendicular_dim(self) -> Dim {
        match self {
            Axis::Vertical => Dim::X,
            Axis::Horizontal => Dim::Y,
        }
    }
}

/// A coordinate of the plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dim {
    X,
    Y,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub region: Region,
    pub rects: Vec<Rect>,
    pub d: u32,
    pub k: Option<u32>,
}

impl Instance {
    pub fn new(region: Region, rects: Vec<Rect>, d: u32, k: Option<u32>) -> Result<Self> {
        if d == 0 {
            return Err(Error::Parameter("density budget d must be at least 1".into()));
        }
        let mut seen = BTreeSet::new();
        for r in &rects {
            if r.x_min >= r.x_max || r.y_min >= r.y_max {
                return Err(Error::Geometry(format!("rect {} is empty", r.id)));
            }
            if !seen.insert(r.id) {
                return Err(Error::Geometry(format!("duplicate rect id {}", r.id)));
            }
            if !region.contains(r) {
                return Err(Error::Geometry(format!("rect {} lies outside the region", r.id)));
            }
        }
        Ok(Self { region, rects, d, k })
    }

    pub fn n(&self) -> usize {
        self.rects.len()
    }

    pub fn with_d(&self, d: u32) -> Result<Instance> {
        Instance::new(self.region, self.rects.clone(), d, self.k)
    }

    pub fn rect(&self, id: RectId) -> Option<&Rect> {
        self.rects.iter().find(|r| r.id == id)
    }

    pub fn ids(&self) -> impl Iterator<Item = RectId> + '_ {
        self.rects.iter().map(|r| r.id)
    }

    pub fn input_density(&self) -> DensityReport {
        max_density(&self.rects)
    }
}

/// Per-object choice of extension direction (`None` = left in place).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment<D = Direction> {
    dirs: BTreeMap<RectId, Option<D>>,
}

impl<D> Default for Assignment<D> {
    fn default() -> Self {
        Self { dirs: BTreeMap::new() }
    }
}

impl<D: Copy> Assignment<D> {
    /// Everything unextended.
    pub fn none_for(ids: impl IntoIterator<Item = RectId>) -> Self {
        Self {
            dirs: ids.into_iter().map(|id| (id, None)).collect(),
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (RectId, Option<D>)>) -> Self {
        Self { dirs: pairs.into_iter().collect() }
    }

    pub fn set(&mut self, id: RectId, dir: Option<D>) {
        self.dirs.insert(id, dir);
    }

    pub fn get(&self, id: RectId) -> Option<D> {
        self.dirs.get(&id).copied().flatten()
    }

    pub fn contains(&self, id: RectId) -> bool {
        self.dirs.contains_key(&id)
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    pub fn extended_count(&self) -> usize {
        self.dirs.values().filter(|d| d.is_some()).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = (RectId, Option<D>)> + '_ {
        self.dirs.iter().map(|(&id, &d)| (id, d))
    }

    pub fn extended(&self) -> impl Iterator<Item = (RectId, D)> + '_ {
        self.dirs.iter().filter_map(|(&id, d)| d.map(|d| (id, d)))
    }

    /// Checks that the domain is exactly `ids`.
    pub fn check_domain(&self, ids: impl IntoIterator<Item = RectId>) -> Result<()> {
        let ids: BTreeSet<RectId> = ids.into_iter().collect();
        if let Some(&extra) = self.dirs.keys().find(|id| !ids.contains(id)) {
            return Err(Error::DomainMismatch(extra));
        }
        if let Some(&missing) = ids.iter().find(|id| !self.dirs.contains_key(id)) {
            return Err(Error::MissingId(missing));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport {
    pub max_density: u32,
    /// Lower-left corner of the lexicographically smallest maximizing cell.
    pub witness: Option<(Coord, Coord)>,
}

/// Moves the side of `rect` facing `dir` onto the region border.
pub fn extend(rect: &Rect, region: &Region, dir: Direction) -> Rect {
    let mut r = *rect;
    match dir {
        Direction::Up => r.y_max = region.y_max,
        Direction::Down => r.y_min = region.y_min,
        Direction::Left => r.x_min = region.x_min,
        Direction::Right => r.x_max = region.x_max,
    }
    r
}

/// The part of `extend(rect, region, dir)` outside `rect`, if non-empty.
pub fn extension_region(rect: &Rect, region: &Region, dir: Direction) -> Option<Rect> {
    let mut r = *rect;
    match dir {
        Direction::Up => {
            r.y_min = rect.y_max;
            r.y_max = region.y_max;
        }
        Direction::Down => {
            r.y_max = rect.y_min;
            r.y_min = region.y_min;
        }
        Direction::Left => {
            r.x_max = rect.x_min;
            r.x_min = region.x_min;
        }
        Direction::Right => {
            r.x_min = rect.x_max;
            r.x_max = region.x_max;
        }
    }
    (r.x_min < r.x_max && r.y_min < r.y_max).then_some(r)
}

/// The extended configuration: every assigned rect stretched to the border.
pub fn apply_assignment(instance: &Instance, a: &Assignment) -> Result<Vec<Rect>> {
    if let Some((id, _)) = a.iter().find(|(id, _)| instance.rect(*id).is_none()) {
        return Err(Error::DomainMismatch(id));
    }
    Ok(instance
        .rects
        .iter()
        .map(|r| match a.get(r.id) {
            Some(dir) => extend(r, &instance.region, dir),
            None => *r,
        })
        .collect())
}

fn sorted_unique(mut v: Vec<Coord>) -> Vec<Coord> {
    v.sort_unstable();
    v.dedup();
    v
}

/// Exact maximum coverage of any point by `rects`.
pub fn max_density(rects: &[Rect]) -> DensityReport {
    if rects.is_empty() {
        return DensityReport { max_density: 0, witness: None };
    }
    let grid = DensityGrid::from_rects(rects, &[], &[]);
    grid.report()
}

/// Compressed-coordinate coverage counts.
///
/// Cell `(i, j)` is `[xs[i], xs[i+1]) x [ys[j], ys[j+1])`. Rectangles whose
/// boundaries are all among `xs`/`ys` can be added and queried exactly.
#[derive(Clone, Debug)]
pub struct DensityGrid {
    xs: Vec<Coord>,
    ys: Vec<Coord>,
    counts: Vec<u32>,
}

impl DensityGrid {
    /// Grid over the boundaries of `rects` plus any extra coordinates,
    /// initialised with the coverage of `rects`.
    pub fn from_rects(rects: &[Rect], extra_xs: &[Coord], extra_ys: &[Coord]) -> Self {
        let mut xs: Vec<Coord> = rects.iter().flat_map(|r| [r.x_min, r.x_max]).collect();
        xs.extend_from_slice(extra_xs);
        let mut ys: Vec<Coord> = rects.iter().flat_map(|r| [r.y_min, r.y_max]).collect();
        ys.extend_from_slice(extra_ys);
        let xs = sorted_unique(xs);
        let ys = sorted_unique(ys);
        let nx = xs.len().saturating_sub(1);
        let ny = ys.len().saturating_sub(1);
        // 2D difference array, then prefix sums.
        let w = nx + 1;
        let mut diff = vec![0i64; (nx + 1) * (ny + 1)];
        for r in rects {
            let (i0, i1) = (index_of(&xs, r.x_min), index_of(&xs, r.x_max));
            let (j0, j1) = (index_of(&ys, r.y_min), index_of(&ys, r.y_max));
            diff[j0 * w + i0] += 1;
            diff[j0 * w + i1] -= 1;
            diff[j1 * w + i0] -= 1;
            diff[j1 * w + i1] += 1;
        }
        for j in 0..=ny {
            for i in 1..=nx {
                diff[j * w + i] += diff[j * w + i - 1];
            }
        }
        for j in 1..=ny {
            for i in 0..=nx {
                diff[j * w + i] += diff[(j - 1) * w + i];
            }
        }
        let mut counts = vec![0u32; nx * ny];
        for j in 0..ny {
            for i in 0..nx {
                counts[j * nx + i] = diff[j * w + i] as u32;
            }
        }
        Self { xs, ys, counts }
    }

    /// Grid for an instance: rect boundaries plus the region border, so that
    /// every extension is aligned with the cells.
    pub fn for_instance(instance: &Instance) -> Self {
        let g = &instance.region;
        Self::from_rects(&instance.rects, &[g.x_min, g.x_max], &[g.y_min, g.y_max])
    }

    pub fn xs(&self) -> &[Coord] {
        &self.xs
    }

    pub fn ys(&self) -> &[Coord] {
        &self.ys
    }

    pub fn nx(&self) -> usize {
        self.xs.len().saturating_sub(1)
    }

    pub fn ny(&self) -> usize {
        self.ys.len().saturating_sub(1)
    }

    pub fn count(&self, i: usize, j: usize) -> u32 {
        self.counts[j * self.nx() + i]
    }

    /// Cell index range covered by `r`, which must be aligned with the grid.
    pub fn span(&self, r: &Rect) -> (usize, usize, usize, usize) {
        (
            index_of(&self.xs, r.x_min),
            index_of(&self.xs, r.x_max),
            index_of(&self.ys, r.y_min),
            index_of(&self.ys, r.y_max),
        )
    }

    pub fn max_in(&self, r: &Rect) -> u32 {
        let (i0, i1, j0, j1) = self.span(r);
        let nx = self.nx();
        let mut best = 0;
        for j in j0..j1 {
            for &c in &self.counts[j * nx + i0..j * nx + i1] {
                best = best.max(c);
            }
        }
        best
    }

    pub fn add(&mut self, r: &Rect) {
        self.apply(r, |c| *c += 1);
    }

    pub fn remove(&mut self, r: &Rect) {
        self.apply(r, |c| *c -= 1);
    }

    fn apply(&mut self, r: &Rect, f: impl Fn(&mut u32)) {
        let (i0, i1, j0, j1) = self.span(r);
        let nx = self.nx();
        for j in j0..j1 {
            for c in &mut self.counts[j * nx + i0..j * nx + i1] {
                f(c);
            }
        }
    }

    /// Adds `r` if that keeps every covered cell at most `limit`.
    pub fn try_add(&mut self, r: &Rect, limit: u32) -> bool {
        if self.max_in(r) < limit {
            self.add(r);
            true
        } else {
            false
        }
    }

    pub fn report(&self) -> DensityReport {
        let nx = self.nx();
        let mut best: Option<(u32, usize, usize)> = None;
        // x-major scan gives the lexicographically smallest (x, y) witness.
        for i in 0..nx {
            for j in 0..self.ny() {
                let c = self.counts[j * nx + i];
                if best.is_none_or(|(b, _, _)| c > b) {
                    best = Some((c, i, j));
                }
            }
        }
        match best {
            Some((c, i, j)) => DensityReport {
                max_density: c,
                witness: Some((self.xs[i], self.ys[j])),
            },
            None => DensityReport { max_density: 0, witness: None },
        }
    }
}

fn index_of(sorted: &[Coord], v: Coord) -> usize {
    sorted
        .binary_search(&v)
        .expect("coordinate is not a grid boundary")
}

/// True iff every point of the extended configuration has density at most d.
pub fn is_feasible(instance: &Instance, a: &Assignment) -> Result<bool> {
    let rects = apply_assignment(instance, a)?;
    Ok(max_density(&rects).max_density <= instance.d)
}

/// Region strictly beyond `rect` in `dir`, inside the band spanned by its
/// perpendicular sides.
fn beyond(rect: &Rect, region: &Region, dir: Direction) -> Option<Rect> {
    extension_region(rect, region, dir)
}

/// Whether extending `rect` alone in `dir` runs into a point already at
/// density `d`.
pub fn directional_block(instance: &Instance, rect: &Rect, dir: Direction) -> bool {
    let grid = DensityGrid::for_instance(instance);
    blocked_on(&grid, instance, rect, dir)
}

pub(crate) fn blocked_on(grid: &DensityGrid, instance: &Instance, rect: &Rect, dir: Direction) -> bool {
    match beyond(rect, &instance.region, dir) {
        Some(zone) => grid.max_in(&zone) >= instance.d,
        None => false,
    }
}

/// Rects blocked in both directions of `axis`.
pub fn stuck_rectangles(instance: &Instance, axis: Axis) -> BTreeSet<RectId> {
    let grid = DensityGrid::for_instance(instance);
    let [a, b] = axis.directions();
    instance
        .rects
        .iter()
        .filter(|r| blocked_on(&grid, instance, r, a) && blocked_on(&grid, instance, r, b))
        .map(|r| r.id)
        .collect()
}
