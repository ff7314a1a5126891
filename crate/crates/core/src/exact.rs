//! Exact solvers: pruned brute force, the parameterized search and a
//! constrained backtracking search over internal rectangles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    extension_region, Assignment, Coord, DensityGrid, Dim, Direction, Instance, Rect,
};
use crate::interval::{greedy_mis, project};

pub const DEFAULT_BRUTE_CAP: usize = 10;
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

fn require_feasible_input(instance: &Instance) -> Result<()> {
    let density = instance.input_density().max_density;
    if density > instance.d {
        return Err(Error::InfeasibleInput { density, d: instance.d });
    }
    Ok(())
}

/// Extension regions per rect and direction, `None` when the rect already
/// touches that border.
struct Moves {
    ext: Vec<[Option<Rect>; 4]>,
}

impl Moves {
    fn new(instance: &Instance) -> Self {
        let ext = instance
            .rects
            .iter()
            .map(|r| Direction::ALL.map(|dir| extension_region(r, &instance.region, dir)))
            .collect();
        Self { ext }
    }

    fn fits(&self, grid: &DensityGrid, i: usize, dir: Direction, d: u32) -> bool {
        match &self.ext[i][dir.index()] {
            Some(z) => grid.max_in(z) < d,
            None => true,
        }
    }

    fn push(&self, grid: &mut DensityGrid, i: usize, dir: Direction) {
        if let Some(z) = &self.ext[i][dir.index()] {
            grid.add(z);
        }
    }

    fn pop(&self, grid: &mut DensityGrid, i: usize, dir: Direction) {
        if let Some(z) = &self.ext[i][dir.index()] {
            grid.remove(z);
        }
    }
}

/// Exact runaway number with the default size cap.
pub fn brute_force_rho(instance: &Instance) -> Result<(usize, Assignment)> {
    brute_force_restricted(instance, &Direction::ALL, DEFAULT_BRUTE_CAP)
}

/// Exact optimum when rects may only move in `dirs`.
pub fn brute_force_restricted(
    instance: &Instance,
    dirs: &[Direction],
    cap: usize,
) -> Result<(usize, Assignment)> {
    if instance.n() > cap {
        return Err(Error::SizeCap { n: instance.n(), cap });
    }
    require_feasible_input(instance)?;
    let moves = Moves::new(instance);
    let mut search = Brute {
        moves: &moves,
        dirs,
        d: instance.d,
        grid: DensityGrid::for_instance(instance),
        current: vec![None; instance.n()],
        best: 0,
        best_dirs: vec![None; instance.n()],
    };
    search.dfs(0, 0);
    let witness =
        Assignment::from_pairs(instance.rects.iter().zip(&search.best_dirs).map(|(r, &d)| (r.id, d)));
    Ok((search.best, witness))
}

struct Brute<'a> {
    moves: &'a Moves,
    dirs: &'a [Direction],
    d: u32,
    grid: DensityGrid,
    current: Vec<Option<Direction>>,
    best: usize,
    best_dirs: Vec<Option<Direction>>,
}

impl Brute<'_> {
    fn dfs(&mut self, i: usize, count: usize) {
        if count > self.best {
            self.best = count;
            self.best_dirs.clone_from(&self.current);
        }
        let n = self.current.len();
        if i == n || count + (n - i) <= self.best {
            return;
        }
        for &dir in self.dirs {
            if self.moves.fits(&self.grid, i, dir, self.d) {
                self.moves.push(&mut self.grid, i, dir);
                self.current[i] = Some(dir);
                self.dfs(i + 1, count + 1);
                self.current[i] = None;
                self.moves.pop(&mut self.grid, i, dir);
            }
        }
        self.dfs(i + 1, count);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FptTrace {
    pub axis_mis_sizes: (usize, usize),
    pub piercing_grid: Vec<(Coord, Coord)>,
    pub candidate_count: usize,
    /// `(d - 1) k^2`; the asserted bound is the looser `d k^2`.
    pub tight_bound: usize,
    pub subsets_tried: u64,
    pub verdict: bool,
    pub witness: Option<Assignment>,
}

/// Decides whether at least `k` rects can be extended, for inputs whose
/// density is at most `d - 1`.
pub fn fpt_solve(instance: &Instance, k: usize) -> Result<FptTrace> {
    let density = instance.input_density().max_density;
    if density + 1 > instance.d {
        return Err(Error::DensityPrecondition { density, limit: instance.d - 1 });
    }
    let mut trace = FptTrace {
        axis_mis_sizes: (0, 0),
        piercing_grid: Vec::new(),
        candidate_count: instance.n(),
        tight_bound: (instance.d as usize).saturating_sub(1) * k * k,
        subsets_tried: 0,
        verdict: false,
        witness: None,
    };
    let none = || Assignment::none_for(instance.ids());
    if k == 0 {
        trace.verdict = true;
        trace.witness = Some(none());
        return Ok(trace);
    }
    let xs = greedy_mis(&project(&instance.rects, Dim::X));
    let ys = greedy_mis(&project(&instance.rects, Dim::Y));
    trace.axis_mis_sizes = (xs.len(), ys.len());
    for (chosen, dir) in [(&xs, Direction::Up), (&ys, Direction::Right)] {
        if chosen.len() >= k {
            let mut a = none();
            for iv in chosen.iter() {
                a.set(iv.id, Some(dir));
            }
            trace.verdict = true;
            trace.witness = Some(a);
            return Ok(trace);
        }
    }
    trace.piercing_grid = xs
        .iter()
        .flat_map(|bx| ys.iter().map(move |by| (bx.hi - 1, by.hi - 1)))
        .collect();
    for r in &instance.rects {
        if !trace.piercing_grid.iter().any(|&(x, y)| r.contains_point(x, y)) {
            return Err(Error::Internal(format!("rect {} escapes the piercing grid", r.id)));
        }
    }
    let n = instance.n();
    let bound = instance.d as usize * k * k;
    if n > bound {
        return Err(Error::Internal(format!("{n} candidates exceed the bound {bound}")));
    }
    if k > n {
        return Ok(trace);
    }

    let moves = Moves::new(instance);
    let mut grid = DensityGrid::for_instance(instance);
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        trace.subsets_tried += 1;
        let mut dirs = vec![Direction::Up; k];
        if assign_dirs(&moves, &mut grid, instance.d, &subset, &mut dirs, 0) {
            let mut a = none();
            for (&i, &dir) in subset.iter().zip(&dirs) {
                a.set(instance.rects[i].id, Some(dir));
            }
            trace.verdict = true;
            trace.witness = Some(a);
            return Ok(trace);
        }
        if !next_combination(&mut subset, n) {
            return Ok(trace);
        }
    }
}

/// First direction vector in lexicographic order that keeps the subset
/// feasible, searched with incremental density.
fn assign_dirs(
    moves: &Moves,
    grid: &mut DensityGrid,
    d: u32,
    subset: &[usize],
    dirs: &mut [Direction],
    pos: usize,
) -> bool {
    if pos == subset.len() {
        return true;
    }
    let i = subset[pos];
    for dir in Direction::ALL {
        if moves.fits(grid, i, dir, d) {
            moves.push(grid, i, dir);
            dirs[pos] = dir;
            let ok = assign_dirs(moves, grid, d, subset, dirs, pos + 1);
            moves.pop(grid, i, dir);
            if ok {
                return true;
            }
        }
    }
    false
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConstrainedVerdict {
    Satisfiable(Assignment),
    Unsatisfiable,
    /// The node budget ran out before the search finished.
    Inconclusive { nodes: u64 },
}

impl ConstrainedVerdict {
    pub fn is_satisfiable(&self) -> bool {
        matches!(self, ConstrainedVerdict::Satisfiable(_))
    }
}

/// Can at least `p` internal rects move horizontally and `q` internal rects
/// vertically at once?
pub fn constrained_solve(instance: &Instance, p: usize, q: usize, node_budget: u64) -> Result<ConstrainedVerdict> {
    require_feasible_input(instance)?;
    let moves = Moves::new(instance);
    let grid = DensityGrid::for_instance(instance);
    let d = instance.d;
    // Internal rects with their solo-feasible directions split by axis.
    let mut cands: Vec<(usize, Vec<Direction>, Vec<Direction>)> = Vec::new();
    for (i, r) in instance.rects.iter().enumerate() {
        if !r.is_internal(&instance.region) {
            continue;
        }
        let ok = |dir: Direction| moves.fits(&grid, i, dir, d);
        let h: Vec<Direction> = [Direction::Right, Direction::Left].into_iter().filter(|&x| ok(x)).collect();
        let v: Vec<Direction> = [Direction::Up, Direction::Down].into_iter().filter(|&x| ok(x)).collect();
        if !h.is_empty() || !v.is_empty() {
            cands.push((i, h, v));
        }
    }
    let m = cands.len();
    let mut suffix_h = vec![0usize; m + 1];
    let mut suffix_v = vec![0usize; m + 1];
    for j in (0..m).rev() {
        suffix_h[j] = suffix_h[j + 1] + usize::from(!cands[j].1.is_empty());
        suffix_v[j] = suffix_v[j + 1] + usize::from(!cands[j].2.is_empty());
    }
    let mut s = Constrained {
        moves: &moves,
        cands: &cands,
        suffix_h,
        suffix_v,
        p,
        q,
        d,
        grid,
        current: vec![None; instance.n()],
        nodes: 0,
        budget: node_budget,
    };
    match s.dfs(0, 0, 0) {
        Some(true) => Ok(ConstrainedVerdict::Satisfiable(Assignment::from_pairs(
            instance.rects.iter().zip(&s.current).map(|(r, &d)| (r.id, d)),
        ))),
        Some(false) => Ok(ConstrainedVerdict::Unsatisfiable),
        None => Ok(ConstrainedVerdict::Inconclusive { nodes: s.nodes }),
    }
}

struct Constrained<'a> {
    moves: &'a Moves,
    cands: &'a [(usize, Vec<Direction>, Vec<Direction>)],
    suffix_h: Vec<usize>,
    suffix_v: Vec<usize>,
    p: usize,
    q: usize,
    d: u32,
    grid: DensityGrid,
    current: Vec<Option<Direction>>,
    nodes: u64,
    budget: u64,
}

impl Constrained<'_> {
    /// `None` when the budget is exhausted; on success `current` holds the
    /// witness.
    fn dfs(&mut self, j: usize, h: usize, v: usize) -> Option<bool> {
        let need_h = self.p.saturating_sub(h);
        let need_v = self.q.saturating_sub(v);
        if need_h == 0 && need_v == 0 {
            return Some(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        let left = self.cands.len() - j;
        if need_h > self.suffix_h[j] || need_v > self.suffix_v[j] || need_h + need_v > left {
            return Some(false);
        }
        let (i, hd, vd) = &self.cands[j];
        let i = *i;
        let mut options: Vec<(Direction, bool)> = Vec::new();
        if need_h > 0 {
            options.extend(hd.iter().map(|&x| (x, true)));
        }
        if need_v > 0 {
            options.extend(vd.iter().map(|&x| (x, false)));
        }
        for (dir, horizontal) in options {
            if !self.moves.fits(&self.grid, i, dir, self.d) {
                continue;
            }
            self.moves.push(&mut self.grid, i, dir);
            self.current[i] = Some(dir);
            let (nh, nv) = if horizontal { (h + 1, v) } else { (h, v + 1) };
            match self.dfs(j + 1, nh, nv) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            self.current[i] = None;
            self.moves.pop(&mut self.grid, i, dir);
        }
        self.dfs(j + 1, h, v)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::geometry::{is_feasible, Region};
    use proptest::prelude::*;

    /// Plain 5^n enumeration with a full density check per assignment.
    pub(crate) fn unpruned_rho(instance: &Instance, dirs: &[Direction]) -> usize {
        let n = instance.n();
        let choices = dirs.len() + 1;
        let total = choices.pow(n as u32);
        let mut best = 0;
        for code in 0..total {
            let mut c = code;
            let mut a = Assignment::none_for(instance.ids());
            let mut count = 0;
            for r in &instance.rects {
                let pick = c % choices;
                c /= choices;
                if pick > 0 {
                    a.set(r.id, Some(dirs[pick - 1]));
                    count += 1;
                }
            }
            if count > best && is_feasible(instance, &a).unwrap() {
                best = count;
            }
        }
        best
    }

    /// Random instances with input density at most `max_density`.
    pub(crate) fn arb_instance(
        max_n: usize,
        ds: std::ops::RangeInclusive<u32>,
        slack: u32,
    ) -> impl Strategy<Value = Instance> {
        (
            prop::collection::vec((0i64..18, 0i64..18, 1i64..6, 1i64..6), 0..=max_n),
            ds,
        )
            .prop_map(move |(raw, d)| {
                let region = Region::new(0, 0, 20, 20).unwrap();
                let limit = d.saturating_sub(slack);
                let mut rects: Vec<Rect> = Vec::new();
                for (x, y, w, h) in raw {
                    let r = Rect::new(rects.len() as u32, x, y, (x + w).min(20), (y + h).min(20)).unwrap();
                    rects.push(r);
                    if crate::geometry::max_density(&rects).max_density > limit {
                        rects.pop();
                    }
                }
                Instance::new(region, rects, d, None).unwrap()
            })
    }

    fn rect(id: u32, x0: i64, y0: i64, x1: i64, y1: i64) -> Rect {
        Rect::new(id, x0, y0, x1, y1).unwrap()
    }

    #[test]
    fn separated_rects_all_escape() {
        let region = Region::new(0, 0, 30, 30).unwrap();
        let rects: Vec<Rect> = (0..5).map(|i| rect(i, 5 * i as i64 + 1, 5, 5 * i as i64 + 3, 7)).collect();
        let inst = Instance::new(region, rects, 1, None).unwrap();
        let (rho, w) = brute_force_rho(&inst).unwrap();
        assert_eq!(rho, 5);
        assert!(is_feasible(&inst, &w).unwrap());
        let empty = Instance::new(region, vec![], 1, None).unwrap();
        assert_eq!(brute_force_rho(&empty).unwrap().0, 0);
    }

    #[test]
    fn brute_force_respects_cap() {
        let region = Region::new(0, 0, 100, 100).unwrap();
        let rects: Vec<Rect> = (0..11).map(|i| rect(i, 2 * i as i64, 0, 2 * i as i64 + 1, 1)).collect();
        let inst = Instance::new(region, rects, 1, None).unwrap();
        assert_eq!(brute_force_rho(&inst), Err(Error::SizeCap { n: 11, cap: 10 }));
    }

    #[test]
    fn fpt_early_exit_and_k_zero() {
        let region = Region::new(0, 0, 40, 40).unwrap();
        let rects: Vec<Rect> = (0..4).map(|i| rect(i, 4 * i as i64 + 1, 10, 4 * i as i64 + 3, 12)).collect();
        let inst = Instance::new(region, rects, 2, None).unwrap();
        let t0 = fpt_solve(&inst, 0).unwrap();
        assert!(t0.verdict);
        assert_eq!(t0.witness.unwrap().extended_count(), 0);
        let t = fpt_solve(&inst, 4).unwrap();
        assert!(t.verdict);
        assert_eq!(t.subsets_tried, 0);
        assert_eq!(t.axis_mis_sizes.0, 4);
        assert!(is_feasible(&inst, t.witness.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn fpt_rejects_saturated_input() {
        let region = Region::new(0, 0, 10, 10).unwrap();
        let inst = Instance::new(region, vec![rect(0, 1, 1, 3, 3), rect(1, 2, 2, 4, 4)], 2, None).unwrap();
        assert_eq!(fpt_solve(&inst, 1).unwrap_err(), Error::DensityPrecondition { density: 2, limit: 1 });
    }

    #[test]
    fn constrained_basics() {
        let region = Region::new(0, 0, 10, 10).unwrap();
        let inst = Instance::new(region, vec![rect(0, 4, 4, 5, 5)], 1, None).unwrap();
        assert!(constrained_solve(&inst, 0, 0, 10).unwrap().is_satisfiable());
        assert!(constrained_solve(&inst, 1, 0, 10).unwrap().is_satisfiable());
        assert_eq!(constrained_solve(&inst, 1, 1, 10).unwrap(), ConstrainedVerdict::Unsatisfiable);
        // A border rect never counts.
        let border = Instance::new(region, vec![rect(0, 0, 4, 1, 5)], 1, None).unwrap();
        assert_eq!(constrained_solve(&border, 1, 0, 10).unwrap(), ConstrainedVerdict::Unsatisfiable);
    }

    #[test]
    fn constrained_budget_is_inconclusive() {
        let region = Region::new(0, 0, 40, 40).unwrap();
        let rects: Vec<Rect> = (0..6).map(|i| rect(i, 10, 2 + 5 * i as i64, 12, 4 + 5 * i as i64)).collect();
        let inst = Instance::new(region, rects, 2, None).unwrap();
        // Six stacked rects: at most two rays leave through each end.
        assert!(constrained_solve(&inst, 0, 4, 1_000_000).unwrap().is_satisfiable());
        assert_eq!(constrained_solve(&inst, 0, 5, 1_000_000).unwrap(), ConstrainedVerdict::Unsatisfiable);
        assert!(matches!(constrained_solve(&inst, 0, 5, 3).unwrap(), ConstrainedVerdict::Inconclusive { .. }));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(150))]

        #[test]
        fn pruned_matches_unpruned(inst in arb_instance(6, 1..=3, 0)) {
            let (rho, w) = brute_force_rho(&inst).unwrap();
            prop_assert!(is_feasible(&inst, &w).unwrap());
            prop_assert_eq!(w.extended_count(), rho);
            prop_assert_eq!(rho, unpruned_rho(&inst, &Direction::ALL));
        }

        #[test]
        fn fpt_matches_brute(inst in arb_instance(7, 2..=3, 1)) {
            let (rho, _) = brute_force_rho(&inst).unwrap();
            for k in 0..=inst.n() {
                let t = fpt_solve(&inst, k).unwrap();
                prop_assert_eq!(t.verdict, rho >= k, "k = {}", k);
                if let Some(w) = &t.witness {
                    prop_assert!(is_feasible(&inst, w).unwrap());
                    prop_assert!(w.extended_count() >= k);
                }
            }
        }

        #[test]
        fn constrained_agrees_with_pair_enumeration(inst in arb_instance(5, 1..=2, 0), p in 0usize..3, q in 0usize..3) {
            let verdict = constrained_solve(&inst, p, q, u64::MAX).unwrap();
            let expected = pair_enumeration(&inst, p, q);
            prop_assert_eq!(verdict.is_satisfiable(), expected);
            if let ConstrainedVerdict::Satisfiable(w) = verdict {
                prop_assert!(is_feasible(&inst, &w).unwrap());
            }
        }
    }

    fn pair_enumeration(inst: &Instance, p: usize, q: usize) -> bool {
        let n = inst.n();
        (0..5usize.pow(n as u32)).any(|mut code| {
            let mut a = Assignment::none_for(inst.ids());
            let (mut h, mut v) = (0, 0);
            for r in &inst.rects {
                let pick = code % 5;
                code /= 5;
                if pick > 0 {
                    let dir = Direction::ALL[pick - 1];
                    a.set(r.id, Some(dir));
                    if r.is_internal(&inst.region) {
                        match dir.axis() {
                            crate::geometry::Axis::Horizontal => h += 1,
                            crate::geometry::Axis::Vertical => v += 1,
                        }
                    }
                }
            }
            h >= p && v >= q && is_feasible(inst, &a).unwrap()
        })
    }
}
