//! Python bindings for the rectangle escape solvers.

use std::collections::BTreeMap;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use rect_escape::approx::{self, Solution};
use rect_escape::exact;
use rect_escape::generate::{self, RectSpec};
use rect_escape::geometry::{self, Assignment, Direction, RectId};
use rect_escape::io::{self as rio, AssignmentDoc, InstanceDoc};
use rect_escape::lp::{self, RoundingParams};
use rect_escape::reductions::{self, NaeFormula};
use rect_escape::rng;
use rect_escape::Error;

create_exception!(rect_escape_py, EscapeError, PyValueError);

fn err(e: Error) -> PyErr {
    EscapeError::new_err(e.to_string())
}

type DirMap = BTreeMap<RectId, Option<String>>;

fn to_map(a: &Assignment) -> DirMap {
    a.iter().map(|(id, d)| (id, d.map(|d| d.name().to_string()))).collect()
}

fn from_map(map: &DirMap) -> PyResult<Assignment> {
    map.iter()
        .map(|(&id, d)| match d.as_deref() {
            None | Some("none") => Ok((id, None)),
            Some(s) => Direction::parse(s)
                .map(|d| (id, Some(d)))
                .ok_or_else(|| EscapeError::new_err(format!("unknown direction {s:?}"))),
        })
        .collect::<PyResult<Vec<_>>>()
        .map(Assignment::from_pairs)
}

#[pyclass(frozen, skip_from_py_object, module = "rect_escape_py")]
#[derive(Clone)]
struct Rect {
    inner: geometry::Rect,
}

#[pymethods]
impl Rect {
    #[new]
    fn new(id: RectId, x_min: i64, y_min: i64, x_max: i64, y_max: i64) -> PyResult<Self> {
        geometry::Rect::new(id, x_min, y_min, x_max, y_max).map(|inner| Self { inner }).map_err(err)
    }

    #[getter]
    fn id(&self) -> RectId {
        self.inner.id
    }

    #[getter]
    fn bounds(&self) -> (i64, i64, i64, i64) {
        let r = &self.inner;
        (r.x_min, r.y_min, r.x_max, r.y_max)
    }

    fn __repr__(&self) -> String {
        let (a, b, c, d) = self.bounds();
        format!("Rect({}, {a}, {b}, {c}, {d})", self.inner.id)
    }
}

#[pyclass(frozen, module = "rect_escape_py")]
struct Instance {
    inner: geometry::Instance,
}

#[pymethods]
impl Instance {
    #[new]
    #[pyo3(signature = (region, rects, d, k=None))]
    fn new(region: (i64, i64, i64, i64), rects: Vec<PyRef<'_, Rect>>, d: u32, k: Option<u32>) -> PyResult<Self> {
        let region = geometry::Region::new(region.0, region.1, region.2, region.3).map_err(err)?;
        let rects = rects.iter().map(|r| r.inner).collect();
        geometry::Instance::new(region, rects, d, k).map(|inner| Self { inner }).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        match InstanceDoc::from_json(text).map_err(err)? {
            InstanceDoc::Rect { instance, .. } => Ok(Self { inner: instance }),
            other => Err(EscapeError::new_err(format!("expected a rect instance, got {}", other.kind()))),
        }
    }

    fn to_json(&self) -> String {
        self.doc().to_json()
    }

    fn digest(&self) -> String {
        self.doc().digest()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn d(&self) -> u32 {
        self.inner.d
    }

    #[getter]
    fn rects(&self) -> Vec<Rect> {
        self.inner.rects.iter().map(|r| Rect { inner: *r }).collect()
    }

    fn input_density(&self) -> u32 {
        self.inner.input_density().max_density
    }

    fn __repr__(&self) -> String {
        format!("Instance(n={}, d={})", self.inner.n(), self.inner.d)
    }
}

impl Instance {
    fn doc(&self) -> InstanceDoc {
        InstanceDoc::Rect { instance: self.inner.clone(), p: None, q: None }
    }
}

#[pyclass(frozen, get_all, module = "rect_escape_py")]
struct SolveResult {
    algorithm: String,
    claimed_ratio: String,
    count: usize,
    input_infeasible: bool,
    assignment: DirMap,
}

#[pymethods]
impl SolveResult {
    fn __repr__(&self) -> String {
        format!("SolveResult({}, count={}, ratio={})", self.algorithm, self.count, self.claimed_ratio)
    }
}

impl From<Solution> for SolveResult {
    fn from(s: Solution) -> Self {
        Self {
            assignment: to_map(&s.assignment),
            algorithm: s.algorithm,
            claimed_ratio: s.claimed_ratio.to_string(),
            count: s.extended_count,
            input_infeasible: s.input_infeasible,
        }
    }
}

/// Optimum and one optimal assignment, by exhaustive search.
#[pyfunction]
fn brute_force(inst: &Instance) -> PyResult<(usize, DirMap)> {
    exact::brute_force_rho(&inst.inner).map(|(rho, a)| (rho, to_map(&a))).map_err(err)
}

/// Whether at least `k` rects can be extended, with a witness when they can.
#[pyfunction]
fn fpt(inst: &Instance, k: usize) -> PyResult<(bool, Option<DirMap>)> {
    let trace = exact::fpt_solve(&inst.inner, k).map_err(err)?;
    Ok((trace.verdict, trace.witness.as_ref().map(to_map)))
}

#[pyfunction]
fn solve_general(inst: &Instance) -> SolveResult {
    approx::solve_general_4d(&inst.inner).into()
}

#[pyfunction]
fn solve_disjoint(inst: &Instance) -> PyResult<SolveResult> {
    approx::solve_disjoint(&inst.inner).map(Into::into).map_err(err)
}

/// Best of `trials` randomized roundings of the LP relaxation; `None` when no
/// trial met the budget.
#[pyfunction]
#[pyo3(signature = (inst, epsilon=0.25, trials=lp::DEFAULT_TRIALS, seed=0))]
fn lp_round(inst: &Instance, epsilon: f64, trials: u32, seed: u64) -> PyResult<Option<SolveResult>> {
    let params = RoundingParams::new(epsilon, trials, seed).map_err(err)?;
    let out = lp::randomized_solve(&inst.inner, &params).map_err(err)?;
    Ok(out.solution.map(Into::into))
}

#[pyfunction]
fn lp_bound(inst: &Instance) -> PyResult<f64> {
    let model = lp::build_lp(&inst.inner).map_err(err)?;
    lp::solve_lp(&model).map(|f| f.objective_value).map_err(err)
}

/// Largest number of extended rects covering one point.
#[pyfunction]
fn max_density(inst: &Instance, assignment: DirMap) -> PyResult<u32> {
    let a = from_map(&assignment)?;
    let rects = geometry::apply_assignment(&inst.inner, &a).map_err(err)?;
    Ok(geometry::max_density(&rects).max_density)
}

#[pyfunction]
fn is_feasible(inst: &Instance, assignment: DirMap) -> PyResult<bool> {
    geometry::is_feasible(&inst.inner, &from_map(&assignment)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (n, coord_max=20, d=2, seed=0, disjoint=false))]
fn random_instance(n: usize, coord_max: i64, d: u32, seed: u64, disjoint: bool) -> PyResult<Instance> {
    let mut spec = RectSpec::new(n, coord_max, d);
    if disjoint {
        spec = spec.disjoint();
    }
    generate::random_rects(&spec, &mut rng::Rng::new(seed)).map(|inner| Instance { inner }).map_err(err)
}

/// Grid instance document for a NAE-3SAT formula.
#[pyfunction]
fn reduce_naesat(num_vars: usize, clauses: Vec<Vec<usize>>) -> PyResult<String> {
    let phi = NaeFormula::new(num_vars, clauses).map_err(err)?;
    let art = reductions::reduce_naesat(&phi).map_err(err)?;
    Ok(InstanceDoc::Grid(art.instance).to_json())
}

/// Checks an assignment document against an instance document, both as JSON.
/// Returns the report as JSON.
#[pyfunction]
fn verify(instance_json: &str, assignment_json: &str) -> PyResult<String> {
    let doc = InstanceDoc::from_json(instance_json).map_err(err)?;
    let adoc = AssignmentDoc::from_json(assignment_json).map_err(err)?;
    rio::verify(&doc, &adoc).map(|r| r.to_json()).map_err(err)
}

/// Assignment document for `assignment` on `inst`.
#[pyfunction]
fn assignment_json(inst: &Instance, assignment: DirMap) -> PyResult<String> {
    Ok(AssignmentDoc::new(inst.digest(), &from_map(&assignment)?).to_json())
}

#[pymodule]
fn rect_escape_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("EscapeError", m.py().get_type::<EscapeError>())?;
    m.add_class::<Rect>()?;
    m.add_class::<Instance>()?;
    m.add_class::<SolveResult>()?;
    m.add_function(wrap_pyfunction!(brute_force, m)?)?;
    m.add_function(wrap_pyfunction!(fpt, m)?)?;
    m.add_function(wrap_pyfunction!(solve_general, m)?)?;
    m.add_function(wrap_pyfunction!(solve_disjoint, m)?)?;
    m.add_function(wrap_pyfunction!(lp_round, m)?)?;
    m.add_function(wrap_pyfunction!(lp_bound, m)?)?;
    m.add_function(wrap_pyfunction!(max_density, m)?)?;
    m.add_function(wrap_pyfunction!(is_feasible, m)?)?;
    m.add_function(wrap_pyfunction!(random_instance, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_naesat, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(assignment_json, m)?)?;
    Ok(())
}
