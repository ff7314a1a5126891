//! Linear relaxation over the compressed grid and scaled randomized rounding.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::approx::{ClaimedRatio, Solution};
use crate::error::{Error, Result};
use crate::geometry::{
    apply_assignment, extension_region, max_density, Assignment, Coord, DensityGrid, Direction, Instance, RectId,
};
use crate::rng::Rng;

pub const DEFAULT_TRIALS: u32 = 32;
const PIVOT_LIMIT: usize = 200_000;
const EPS: f64 = 1e-9;
const CERT_TOL: f64 = 1e-7;

/// One representative point per compressed cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridPoint {
    pub x: Coord,
    pub y: Coord,
    /// Input density of the cell.
    pub density: u32,
}

pub fn build_grid(instance: &Instance) -> Vec<GridPoint> {
    let g = DensityGrid::for_instance(instance);
    let mut out = Vec::with_capacity(g.nx() * g.ny());
    for i in 0..g.nx() {
        for j in 0..g.ny() {
            out.push(GridPoint { x: g.xs()[i], y: g.ys()[j], density: g.count(i, j) });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointConstraint {
    pub point: GridPoint,
    /// Variable indices whose extension region covers the point.
    pub vars: Vec<usize>,
    pub rhs: i64,
}

/// Variables are indexed `4 * i + dir.index()` for the i-th rect.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpModel {
    pub ids: Vec<RectId>,
    pub d: u32,
    pub point_constraints: Vec<PointConstraint>,
}

impl LpModel {
    pub fn num_vars(&self) -> usize {
        4 * self.ids.len()
    }

    pub fn var(i: usize, dir: Direction) -> usize {
        4 * i + dir.index()
    }

    /// All rows as (support, rhs): point rows then one choice row per rect.
    pub fn rows(&self) -> Vec<(Vec<usize>, f64)> {
        let mut rows: Vec<(Vec<usize>, f64)> =
            self.point_constraints.iter().map(|c| (c.vars.clone(), c.rhs as f64)).collect();
        for i in 0..self.ids.len() {
            rows.push(((4 * i..4 * i + 4).collect(), 1.0));
        }
        rows
    }

    /// Largest violation of any constraint or bound by `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (vars, rhs) in self.rows() {
            let lhs: f64 = vars.iter().map(|&v| x[v]).sum();
            worst = worst.max(lhs - rhs);
        }
        for &v in x {
            worst = worst.max(-v);
        }
        worst
    }
}

pub fn build_lp(instance: &Instance) -> Result<LpModel> {
    let density = instance.input_density().max_density;
    if density > instance.d {
        return Err(Error::InfeasibleInput { density, d: instance.d });
    }
    let g = DensityGrid::for_instance(instance);
    let (nx, ny) = (g.nx(), g.ny());
    let mut cover: Vec<Vec<usize>> = vec![Vec::new(); nx * ny];
    for (i, r) in instance.rects.iter().enumerate() {
        for dir in Direction::ALL {
            if let Some(z) = extension_region(r, &instance.region, dir) {
                let (i0, i1, j0, j1) = g.span(&z);
                for a in i0..i1 {
                    for b in j0..j1 {
                        cover[a * ny + b].push(LpModel::var(i, dir));
                    }
                }
            }
        }
    }
    let mut point_constraints = Vec::with_capacity(nx * ny);
    for a in 0..nx {
        for b in 0..ny {
            let density = g.count(a, b);
            point_constraints.push(PointConstraint {
                point: GridPoint { x: g.xs()[a], y: g.ys()[b], density },
                vars: std::mem::take(&mut cover[a * ny + b]),
                rhs: instance.d as i64 - density as i64,
            });
        }
    }
    Ok(LpModel { ids: instance.ids().collect(), d: instance.d, point_constraints })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FractionalSolution {
    /// Indexed like the model variables.
    pub values: Vec<f64>,
    pub objective_value: f64,
    pub pivots: usize,
}

impl FractionalSolution {
    pub fn value(&self, i: usize, dir: Direction) -> f64 {
        self.values[LpModel::var(i, dir)]
    }
}

/// Maximizes the number of extensions. Rows whose support is empty are
/// dropped and rows with identical support keep the smallest right-hand side
/// before the simplex runs.
pub fn solve_lp(model: &LpModel) -> Result<FractionalSolution> {
    let n = model.num_vars();
    let mut by_support: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut rows: Vec<(Vec<usize>, f64)> = Vec::new();
    for (mut vars, rhs) in model.rows() {
        if vars.is_empty() {
            if rhs < 0.0 {
                return Err(Error::Numerical("empty row with negative capacity".into()));
            }
            continue;
        }
        vars.sort_unstable();
        match by_support.get(&vars) {
            Some(&k) => rows[k].1 = rows[k].1.min(rhs),
            None => {
                by_support.insert(vars.clone(), rows.len());
                rows.push((vars, rhs));
            }
        }
    }
    let c = vec![1.0; n];
    let sol = simplex(&rows, &c, n)?;
    certify(&rows, &c, &sol.x, &sol.y)?;
    let values: Vec<f64> = sol.x.iter().map(|v| v.clamp(0.0, 1.0)).collect();
    if model.max_violation(&values) > CERT_TOL {
        return Err(Error::Numerical("solution violates the full model".into()));
    }
    Ok(FractionalSolution { objective_value: values.iter().sum(), values, pivots: sol.pivots })
}

struct SimplexResult {
    x: Vec<f64>,
    y: Vec<f64>,
    pivots: usize,
}

/// Dense condensed-tableau simplex for `max c.x, Ax <= b, x >= 0` with
/// `b >= 0`, using Bland's rule. Labels `0..n` are structural, `n..n+m`
/// are slacks.
fn simplex(rows: &[(Vec<usize>, f64)], c: &[f64], n: usize) -> Result<SimplexResult> {
    let m = rows.len();
    let mut t = vec![0.0f64; m * n];
    let mut beta: Vec<f64> = rows.iter().map(|r| r.1).collect();
    for (r, (vars, _)) in rows.iter().enumerate() {
        for &v in vars {
            t[r * n + v] = 1.0;
        }
    }
    let mut cost = c.to_vec();
    let mut basic: Vec<usize> = (n..n + m).collect();
    let mut nonbasic: Vec<usize> = (0..n).collect();
    let mut pivots = 0;
    loop {
        let entering = (0..n)
            .filter(|&j| cost[j] > EPS)
            .min_by_key(|&j| nonbasic[j]);
        let Some(j) = entering else { break };
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..m {
            let a = t[r * n + j];
            if a > EPS {
                let ratio = beta[r] / a;
                let better = match leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio < best - EPS || (ratio <= best + EPS && basic[r] < basic[lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            return Err(Error::Numerical("unbounded objective".into()));
        };
        pivots += 1;
        if pivots > PIVOT_LIMIT {
            return Err(Error::Numerical(format!("pivot limit {PIVOT_LIMIT} reached")));
        }
        let piv = t[r * n + j];
        let row: Vec<f64> = t[r * n..(r + 1) * n].iter().map(|v| v / piv).collect();
        let br = beta[r] / piv;
        for s in 0..m {
            if s == r {
                continue;
            }
            let f = t[s * n + j];
            if f.abs() <= 1e-15 {
                continue;
            }
            let srow = &mut t[s * n..(s + 1) * n];
            for k in 0..n {
                srow[k] -= f * row[k];
            }
            srow[j] = -f / piv;
            beta[s] -= f * br;
            if beta[s].abs() < 1e-12 {
                beta[s] = 0.0;
            }
        }
        let cj = cost[j];
        for k in 0..n {
            cost[k] -= cj * row[k];
        }
        cost[j] = -cj / piv;
        let rr = &mut t[r * n..(r + 1) * n];
        rr.copy_from_slice(&row);
        rr[j] = 1.0 / piv;
        beta[r] = br;
        std::mem::swap(&mut basic[r], &mut nonbasic[j]);
    }
    let mut x = vec![0.0; n];
    for (r, &b) in basic.iter().enumerate() {
        if b < n {
            x[b] = beta[r];
        }
    }
    let mut y = vec![0.0; m];
    for (j, &label) in nonbasic.iter().enumerate() {
        if label >= n {
            y[label - n] = -cost[j];
        }
    }
    Ok(SimplexResult { x, y, pivots })
}

/// Primal and dual feasibility plus complementary slackness.
fn certify(rows: &[(Vec<usize>, f64)], c: &[f64], x: &[f64], y: &[f64]) -> Result<()> {
    let n = c.len();
    let mut aty = vec![0.0; n];
    for ((vars, rhs), &yi) in rows.iter().zip(y) {
        if yi < -CERT_TOL {
            return Err(Error::Numerical("negative dual value".into()));
        }
        let lhs: f64 = vars.iter().map(|&v| x[v]).sum();
        let slack = rhs - lhs;
        if slack < -CERT_TOL {
            return Err(Error::Numerical("primal row violated".into()));
        }
        if (yi * slack).abs() > CERT_TOL {
            return Err(Error::Numerical("row complementary slackness violated".into()));
        }
        for &v in vars {
            aty[v] += yi;
        }
    }
    for j in 0..n {
        if x[j] < -CERT_TOL {
            return Err(Error::Numerical("negative primal value".into()));
        }
        let reduced = aty[j] - c[j];
        if reduced < -CERT_TOL {
            return Err(Error::Numerical("dual row violated".into()));
        }
        if (x[j] * reduced).abs() > CERT_TOL {
            return Err(Error::Numerical("column complementary slackness violated".into()));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundingParams {
    pub epsilon: f64,
    pub trials: u32,
    pub rng_seed: u64,
}

impl RoundingParams {
    pub fn new(epsilon: f64, trials: u32, rng_seed: u64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 0.5) {
            return Err(Error::Parameter(format!("epsilon {epsilon} must lie in (0, 1/2)")));
        }
        if trials == 0 {
            return Err(Error::Parameter("trials must be positive".into()));
        }
        Ok(Self { epsilon, trials, rng_seed })
    }
}

/// Draws one rounded direction for rect `i`: `dir` with probability
/// `(1 - eps) * r[i, dir]`, none otherwise.
pub fn round_one(frac: &FractionalSolution, i: usize, epsilon: f64, rng: &mut Rng) -> Option<Direction> {
    let u = rng.next_f64();
    let mut acc = 0.0;
    for dir in Direction::ALL {
        acc += (1.0 - epsilon) * frac.value(i, dir);
        if u < acc {
            return Some(dir);
        }
    }
    None
}

pub fn randomized_round(frac: &FractionalSolution, ids: &[RectId], epsilon: f64, rng: &mut Rng) -> Assignment {
    Assignment::from_pairs(ids.iter().enumerate().map(|(i, &id)| (id, round_one(frac, i, epsilon, rng))))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundingOutcome {
    pub lp_objective: f64,
    /// Max density and extension count of each trial, in trial order.
    pub trial_max_densities: Vec<u32>,
    pub trial_counts: Vec<usize>,
    /// Best feasible trial; `None` is a failure report.
    pub solution: Option<Solution>,
}

impl RoundingOutcome {
    pub fn feasible_trials(&self, d: u32) -> usize {
        self.trial_max_densities.iter().filter(|&&m| m <= d).count()
    }
}

pub fn randomized_solve(instance: &Instance, params: &RoundingParams) -> Result<RoundingOutcome> {
    let model = build_lp(instance)?;
    let frac = solve_lp(&model)?;
    let mut out = RoundingOutcome {
        lp_objective: frac.objective_value,
        trial_max_densities: Vec::new(),
        trial_counts: Vec::new(),
        solution: None,
    };
    let mut best: Option<Assignment> = None;
    for trial in 0..params.trials {
        let mut rng = Rng::derive(params.rng_seed, trial as u64);
        let a = randomized_round(&frac, &model.ids, params.epsilon, &mut rng);
        let density = max_density(&apply_assignment(instance, &a)?).max_density;
        out.trial_max_densities.push(density);
        out.trial_counts.push(a.extended_count());
        if density <= instance.d && best.as_ref().is_none_or(|b| a.extended_count() > b.extended_count()) {
            best = Some(a);
        }
    }
    out.solution = best.map(|a| {
        Solution::new(
            a,
            "lp-round",
            ClaimedRatio::Asymptotic { num: 1_000_000, den: ((1.0 - params.epsilon) * 1e6).round() as u64 },
        )
    });
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PreconditionReport {
    pub alpha: f64,
    pub d_threshold: f64,
    pub satisfied: bool,
    /// `d / d_threshold`: the factor by which the constant would have to shrink.
    pub slack_ratio: f64,
    /// Analysis quantities at the densest cell.
    pub mu: f64,
    pub delta: f64,
}

pub const PRECONDITION_CONSTANT: f64 = 9.0;

pub fn check_preconditions(instance: &Instance, epsilon: f64) -> PreconditionReport {
    let d = instance.d as f64;
    let worst = build_grid(instance).iter().map(|p| p.density).max().unwrap_or(0) as f64;
    let alpha = (1.0 - worst / d).max(0.0);
    let n = instance.n().max(2) as f64;
    let d_threshold = if alpha > 0.0 {
        PRECONDITION_CONSTANT * n.ln() * (1.0 - epsilon * alpha) / (epsilon * epsilon * alpha * alpha)
    } else {
        f64::INFINITY
    };
    let mu = (1.0 - epsilon) * d + epsilon * worst;
    PreconditionReport {
        alpha,
        d_threshold,
        satisfied: alpha > 0.0 && d >= d_threshold,
        slack_ratio: d / d_threshold,
        mu,
        delta: d / mu - 1.0,
    }
}
