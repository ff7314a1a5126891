//! Seeded random instance generators.

use crate::boxes::{max_density3, Box3, Instance3, Region3};
use crate::error::{Error, Result};
use crate::geometry::{max_density, Coord, Instance, Rect, RectId, Region};
use crate::rng::Rng;
use crate::square::{GridInstance, Square};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RectSpec {
    pub n: usize,
    /// Region is `[0, coord_max]` on both axes.
    pub coord_max: Coord,
    pub max_side: Coord,
    pub d: u32,
    /// Candidates that push the input density above this are rejected.
    pub density_cap: u32,
}

impl RectSpec {
    pub fn new(n: usize, coord_max: Coord, d: u32) -> Self {
        Self { n, coord_max, max_side: (coord_max / 2).max(1), d, density_cap: d }
    }

    pub fn disjoint(self) -> Self {
        Self { density_cap: 1, ..self }
    }

    pub fn capped(self, density_cap: u32) -> Self {
        Self { density_cap, ..self }
    }
}

fn attempts(n: usize) -> usize {
    50 * n + 50
}

/// Up to `spec.n` rects placed by rejection sampling. Fewer come back when the
/// cap is hard to meet.
pub fn random_rects(spec: &RectSpec, rng: &mut Rng) -> Result<Instance> {
    if spec.coord_max < 1 || spec.max_side < 1 {
        return Err(Error::Parameter("coordinate range and side must be positive".into()));
    }
    let mut rects: Vec<Rect> = Vec::with_capacity(spec.n);
    for _ in 0..attempts(spec.n) {
        if rects.len() == spec.n {
            break;
        }
        let x0 = rng.range_i64(0, spec.coord_max - 1);
        let y0 = rng.range_i64(0, spec.coord_max - 1);
        let x1 = (x0 + rng.range_i64(1, spec.max_side)).min(spec.coord_max);
        let y1 = (y0 + rng.range_i64(1, spec.max_side)).min(spec.coord_max);
        rects.push(Rect::new(rects.len() as RectId, x0, y0, x1, y1)?);
        if max_density(&rects).max_density > spec.density_cap {
            rects.pop();
        }
    }
    Instance::new(Region::new(0, 0, spec.coord_max, spec.coord_max)?, rects, spec.d, None)
}

/// Squares on random cells of an `m`-grid, at most `d` per cell.
pub fn random_grid(m: u32, n: usize, d: u32, rng: &mut Rng) -> Result<GridInstance> {
    let mut squares = Vec::with_capacity(n);
    let mut per_cell = vec![0u32; (m * m) as usize];
    for _ in 0..attempts(n) {
        if squares.len() == n {
            break;
        }
        let row = rng.range_i64(1, m as i64) as u32;
        let col = rng.range_i64(1, m as i64) as u32;
        let cell = ((row - 1) * m + col - 1) as usize;
        if per_cell[cell] < d {
            per_cell[cell] += 1;
            squares.push(Square { id: squares.len() as RectId, row, col });
        }
    }
    GridInstance::new(m, squares, d, None)
}

/// Boxes in the cube `[0, side)^3` with density at most `density_cap`.
pub fn random_boxes(n: usize, side: Coord, d: u32, density_cap: u32, rng: &mut Rng) -> Result<Instance3> {
    if side < 2 {
        return Err(Error::Parameter("cube side must be at least 2".into()));
    }
    let mut boxes: Vec<Box3> = Vec::with_capacity(n);
    let max_len = (side / 2).max(1);
    for _ in 0..attempts(n) {
        if boxes.len() == n {
            break;
        }
        let lo: [Coord; 3] = std::array::from_fn(|_| rng.range_i64(0, side - 1));
        let hi: [Coord; 3] = std::array::from_fn(|a| (lo[a] + rng.range_i64(1, max_len)).min(side));
        boxes.push(Box3::new(boxes.len() as RectId, lo, hi)?);
        if max_density3(&boxes).max_density > density_cap {
            boxes.pop();
        }
    }
    Instance3::new(Region3::new([0; 3], [side; 3])?, boxes, d, None)
}
