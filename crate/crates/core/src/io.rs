//! JSON documents, verification and SVG output.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::boxes::{apply_assignment3, max_density3, Assignment3, Box3, Dir3, Instance3, Region3};
use crate::error::{Error, Result};
use crate::geometry::{apply_assignment, max_density, Assignment, Coord, Direction, Instance, Rect, RectId, Region};
use crate::reductions::{MccGraph, NaeFormula};
use crate::square::{to_rect_instance, GridInstance, Square};

pub const FORMAT: u32 = 1;

/// An instance of any of the three kinds.
#[derive(Clone, Debug, PartialEq)]
pub enum InstanceDoc {
    Rect { instance: Instance, p: Option<usize>, q: Option<usize> },
    Grid(GridInstance),
    Box3(Instance3),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RectDoc {
    format: u32,
    kind: String,
    region: Region,
    rects: Vec<Rect>,
    d: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q: Option<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridDoc {
    format: u32,
    kind: String,
    m: u32,
    squares: Vec<Square>,
    d: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoxDoc {
    format: u32,
    kind: String,
    region: Region3,
    boxes: Vec<Box3>,
    d: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<u32>,
}

fn doc_err(e: serde_json::Error) -> Error {
    Error::Document(e.to_string())
}

fn check_format(v: &Value) -> Result<()> {
    match v.get("format").and_then(Value::as_u64) {
        Some(f) if f == FORMAT as u64 => Ok(()),
        Some(f) => Err(Error::Document(format!("unsupported format {f}"))),
        None => Err(Error::Document("missing \"format\" field".into())),
    }
}

fn parse_versioned<T: DeserializeOwned>(text: &str) -> Result<T> {
    let v: Value = serde_json::from_str(text).map_err(doc_err)?;
    check_format(&v)?;
    serde_json::from_value(v).map_err(doc_err)
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

impl InstanceDoc {
    pub fn kind(&self) -> &'static str {
        match self {
            InstanceDoc::Rect { .. } => "rect",
            InstanceDoc::Grid(_) => "grid",
            InstanceDoc::Box3(_) => "box3",
        }
    }

    fn to_value(&self) -> Value {
        let kind = self.kind().to_string();
        let v = match self {
            InstanceDoc::Rect { instance, p, q } => serde_json::to_value(RectDoc {
                format: FORMAT,
                kind,
                region: instance.region,
                rects: instance.rects.clone(),
                d: instance.d,
                k: instance.k,
                p: *p,
                q: *q,
            }),
            InstanceDoc::Grid(g) => serde_json::to_value(GridDoc {
                format: FORMAT,
                kind,
                m: g.m,
                squares: g.squares.clone(),
                d: g.d,
                k: g.k,
            }),
            InstanceDoc::Box3(b) => serde_json::to_value(BoxDoc {
                format: FORMAT,
                kind,
                region: b.region,
                boxes: b.boxes.clone(),
                d: b.d,
                k: b.k,
            }),
        };
        v.expect("documents serialize")
    }

    pub fn to_json(&self) -> String {
        pretty(&self.to_value())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(doc_err)?;
        check_format(&v)?;
        match v.get("kind").and_then(Value::as_str) {
            Some("rect") => {
                let r: RectDoc = serde_json::from_value(v).map_err(doc_err)?;
                let instance = Instance::new(r.region, r.rects, r.d, r.k)?;
                Ok(InstanceDoc::Rect { instance, p: r.p, q: r.q })
            }
            Some("grid") => {
                let g: GridDoc = serde_json::from_value(v).map_err(doc_err)?;
                Ok(InstanceDoc::Grid(GridInstance::new(g.m, g.squares, g.d, g.k)?))
            }
            Some("box3") => {
                let b: BoxDoc = serde_json::from_value(v).map_err(doc_err)?;
                Ok(InstanceDoc::Box3(Instance3::new(b.region, b.boxes, b.d, b.k)?))
            }
            Some(other) => Err(Error::Document(format!("unknown kind {other:?}"))),
            None => Err(Error::Document("missing \"kind\" field".into())),
        }
    }

    /// SHA-256 of the compact canonical serialization, hex encoded.
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(&self.to_value()).expect("documents serialize");
        Sha256::digest(&bytes).iter().fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }

    pub fn ids(&self) -> Vec<RectId> {
        match self {
            InstanceDoc::Rect { instance, .. } => instance.ids().collect(),
            InstanceDoc::Grid(g) => g.ids().collect(),
            InstanceDoc::Box3(b) => b.ids().collect(),
        }
    }

    pub fn d(&self) -> u32 {
        match self {
            InstanceDoc::Rect { instance, .. } => instance.d,
            InstanceDoc::Grid(g) => g.d,
            InstanceDoc::Box3(b) => b.d,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignedEntry {
    pub id: RectId,
    /// A direction name, or "none".
    pub dir: String,
}

/// Directions paired with the digest of the instance they belong to. Solver
/// output carries the optional summary fields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentDoc {
    pub format: u32,
    pub digest: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algorithm: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claimed_ratio: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_density: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
    pub assignment: Vec<AssignedEntry>,
}

/// Direction types that have document names.
pub trait DirName: Copy {
    fn doc_name(self) -> String;
    fn from_doc_name(s: &str) -> Option<Self>;
}

impl DirName for Direction {
    fn doc_name(self) -> String {
        self.name().to_string()
    }

    fn from_doc_name(s: &str) -> Option<Self> {
        Direction::parse(s)
    }
}

impl DirName for Dir3 {
    fn doc_name(self) -> String {
        self.to_string()
    }

    fn from_doc_name(s: &str) -> Option<Self> {
        Dir3::parse(s)
    }
}

impl AssignmentDoc {
    pub fn new<D: DirName>(digest: String, a: &Assignment<D>) -> Self {
        Self {
            format: FORMAT,
            digest,
            algorithm: None,
            status: None,
            claimed_ratio: None,
            count: None,
            max_density: None,
            runtime_ms: None,
            details: BTreeMap::new(),
            assignment: a
                .iter()
                .map(|(id, d)| AssignedEntry { id, dir: d.map_or_else(|| "none".to_string(), DirName::doc_name) })
                .collect(),
        }
    }

    pub fn to_assignment<D: DirName>(&self) -> Result<Assignment<D>> {
        let mut a = Assignment::default();
        for e in &self.assignment {
            if a.contains(e.id) {
                return Err(Error::Document(format!("id {} assigned twice", e.id)));
            }
            let dir = match e.dir.as_str() {
                "none" => None,
                s => Some(D::from_doc_name(s).ok_or_else(|| Error::Document(format!("unknown direction {s:?}")))?),
            };
            a.set(e.id, dir);
        }
        Ok(a)
    }

    pub fn to_json(&self) -> String {
        pretty(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        parse_versioned(text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoleSidecar {
    pub format: u32,
    pub digest: String,
    pub roles: BTreeMap<RectId, String>,
}

impl RoleSidecar {
    pub fn new(doc: &InstanceDoc, roles: BTreeMap<RectId, String>) -> Self {
        Self { format: FORMAT, digest: doc.digest(), roles }
    }

    pub fn to_json(&self) -> String {
        pretty(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        parse_versioned(text)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FormulaDoc {
    format: u32,
    num_vars: usize,
    clauses: Vec<Vec<usize>>,
}

pub fn formula_from_json(text: &str) -> Result<NaeFormula> {
    let f: FormulaDoc = parse_versioned(text)?;
    NaeFormula::new(f.num_vars, f.clauses)
}

pub fn formula_to_json(phi: &NaeFormula) -> String {
    pretty(&FormulaDoc { format: FORMAT, num_vars: phi.num_vars, clauses: phi.clauses.clone() })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    format: u32,
    k: usize,
    t: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parts: Option<Vec<Vec<u32>>>,
    edges: Vec<(u32, u32)>,
}

/// Without `parts`, part `i` holds ids `i*t .. i*t + t`.
pub fn graph_from_json(text: &str) -> Result<MccGraph> {
    let g: GraphDoc = parse_versioned(text)?;
    match g.parts {
        Some(parts) => MccGraph::new(g.k, g.t, parts, g.edges),
        None => MccGraph::with_edges(g.k, g.t, g.edges),
    }
}

pub fn graph_to_json(g: &MccGraph) -> String {
    pretty(&GraphDoc { format: FORMAT, k: g.k, t: g.t, parts: Some(g.parts.clone()), edges: g.edges.clone() })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub internal: usize,
    pub boundary: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub feasible: bool,
    pub d: u32,
    pub max_density: u32,
    /// Lower corner of the densest cell.
    pub witness: Option<Vec<Coord>>,
    pub extended: usize,
    pub tallies: BTreeMap<String, Tally>,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        pretty(self)
    }
}

/// Recomputes density from scratch. Ids missing from the assignment stay in
/// place.
pub fn verify(doc: &InstanceDoc, adoc: &AssignmentDoc) -> Result<VerifyReport> {
    if adoc.digest != doc.digest() {
        return Err(Error::Document("assignment digest does not match the instance".into()));
    }
    let mut tallies = BTreeMap::new();
    let (max, witness, extended) = match doc {
        InstanceDoc::Rect { instance, .. } => rect_tallies(instance, &adoc.to_assignment()?, &mut tallies)?,
        InstanceDoc::Grid(g) => rect_tallies(&to_rect_instance(g), &adoc.to_assignment()?, &mut tallies)?,
        InstanceDoc::Box3(b) => {
            let a: Assignment3 = adoc.to_assignment()?;
            let rep = max_density3(&apply_assignment3(b, &a)?);
            for (id, dir) in a.extended() {
                let bx = b.get(id).expect("checked by apply");
                let touches = (0..3).any(|i| bx.lo[i] == b.region.lo[i] || bx.hi[i] == b.region.hi[i]);
                bump(&mut tallies, dir.to_string(), !touches);
            }
            (rep.max_density, rep.witness.map(|w| w.to_vec()), a.extended_count())
        }
    };
    Ok(VerifyReport { feasible: max <= doc.d(), d: doc.d(), max_density: max, witness, extended, tallies })
}

fn bump(tallies: &mut BTreeMap<String, Tally>, key: String, internal: bool) {
    let t = tallies.entry(key).or_default();
    if internal {
        t.internal += 1;
    } else {
        t.boundary += 1;
    }
}

fn rect_tallies(
    inst: &Instance,
    a: &Assignment,
    tallies: &mut BTreeMap<String, Tally>,
) -> Result<(u32, Option<Vec<Coord>>, usize)> {
    let rep = max_density(&apply_assignment(inst, a)?);
    for (id, dir) in a.extended() {
        let internal = inst.rect(id).expect("checked by apply").is_internal(&inst.region);
        bump(tallies, dir.to_string(), internal);
    }
    Ok((rep.max_density, rep.witness.map(|(x, y)| vec![x, y]), a.extended_count()))
}

const CANVAS: f64 = 640.0;
const MARGIN: f64 = 24.0;
const LEGEND: f64 = 84.0;

struct Shape {
    body: Rect,
    extension: Option<Rect>,
    label: Option<String>,
}

fn is_guard_label(label: &str) -> bool {
    label.starts_with("guard") || label.starts_with('H')
}

/// Deterministic SVG: extensions hatched beneath the filled bodies, guards
/// tinted, labels from the sidecar. Boxes are drawn as their xy footprints.
pub fn render_svg(doc: &InstanceDoc, adoc: Option<&AssignmentDoc>, roles: Option<&RoleSidecar>) -> Result<String> {
    if let Some(a) = adoc {
        if a.digest != doc.digest() {
            return Err(Error::Document("assignment digest does not match the instance".into()));
        }
    }
    let label = |id: RectId| roles.and_then(|r| r.roles.get(&id).cloned());
    let (region, shapes): (Region, Vec<Shape>) = match doc {
        InstanceDoc::Rect { instance, .. } => (instance.region, rect_shapes(instance, adoc, &label)?),
        InstanceDoc::Grid(g) => {
            let inst = to_rect_instance(g);
            (inst.region, rect_shapes(&inst, adoc, &label)?)
        }
        InstanceDoc::Box3(b) => {
            let a: Option<Assignment3> = adoc.map(AssignmentDoc::to_assignment).transpose()?;
            let extended = match &a {
                Some(a) => apply_assignment3(b, a)?,
                None => b.boxes.clone(),
            };
            let shapes = b
                .boxes
                .iter()
                .zip(&extended)
                .map(|(orig, ext)| {
                    let body = orig.footprint(crate::boxes::Axis3::Z);
                    let grown = ext.footprint(crate::boxes::Axis3::Z);
                    Shape { body, extension: (grown != body).then_some(grown), label: label(orig.id) }
                })
                .collect();
            let r = b.region;
            (Region { x_min: r.lo[0], y_min: r.lo[1], x_max: r.hi[0], y_max: r.hi[1] }, shapes)
        }
    };
    let w = (region.x_max - region.x_min) as f64;
    let h = (region.y_max - region.y_min) as f64;
    let scale = CANVAS / w.max(h);
    let width = w * scale + 2.0 * MARGIN;
    let height = h * scale + 2.0 * MARGIN + LEGEND;
    let px = |x: Coord| MARGIN + (x - region.x_min) as f64 * scale;
    let py = |y: Coord| MARGIN + (region.y_max - y) as f64 * scale;
    let rect_el = |r: &Rect, class: &str| {
        format!(
            "<rect class=\"{class}\" data-id=\"{}\" x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\"/>",
            r.id,
            px(r.x_min),
            py(r.y_max),
            (r.x_max - r.x_min) as f64 * scale,
            (r.y_max - r.y_min) as f64 * scale
        )
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.2} {height:.2}\">"
    );
    s.push_str(concat!(
        "<defs><pattern id=\"hatch\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\" patternTransform=\"rotate(45)\">",
        "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#c0392b\" stroke-width=\"2\"/></pattern></defs>\n",
        "<style>.region{fill:#fff;stroke:#333}.ext{fill:url(#hatch);stroke:#c0392b;stroke-width:0.5;opacity:0.6}",
        ".body{fill:#5d8aa8;stroke:#1b2a38;stroke-width:0.8;opacity:0.85}.guard{fill:#999;stroke:#444;stroke-width:0.8;opacity:0.85}",
        "text{font-family:monospace;font-size:9px}</style>\n"
    ));
    let _ = writeln!(
        s,
        "<rect class=\"region\" x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\"/>",
        MARGIN,
        MARGIN,
        w * scale,
        h * scale
    );
    s.push_str("<g id=\"extensions\">\n");
    for sh in &shapes {
        if let Some(e) = &sh.extension {
            let _ = writeln!(s, "{}", rect_el(e, "ext"));
        }
    }
    s.push_str("</g>\n<g id=\"bodies\">\n");
    for sh in &shapes {
        let class = if sh.label.as_deref().is_some_and(is_guard_label) { "guard" } else { "body" };
        let _ = writeln!(s, "{}", rect_el(&sh.body, class));
    }
    s.push_str("</g>\n<g id=\"labels\">\n");
    for sh in &shapes {
        if let Some(l) = sh.label.as_deref().filter(|l| !is_guard_label(l)) {
            let _ = writeln!(
                s,
                "<text x=\"{:.2}\" y=\"{:.2}\">{}</text>",
                px(sh.body.x_min),
                py(sh.body.y_max) - 2.0,
                escape(l)
            );
        }
    }
    s.push_str("</g>\n<g id=\"legend\">\n");
    let ly = h * scale + 2.0 * MARGIN;
    for (i, (class, text)) in [("body", "original body"), ("ext", "extension"), ("guard", "guard")].iter().enumerate() {
        let y = ly + 4.0 + 22.0 * i as f64;
        let _ = writeln!(
            s,
            "<rect class=\"{class}\" x=\"{MARGIN:.2}\" y=\"{y:.2}\" width=\"16\" height=\"14\"/><text x=\"{:.2}\" y=\"{:.2}\">{text}</text>",
            MARGIN + 22.0,
            y + 11.0
        );
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}

fn rect_shapes(
    inst: &Instance,
    adoc: Option<&AssignmentDoc>,
    label: &dyn Fn(RectId) -> Option<String>,
) -> Result<Vec<Shape>> {
    let a: Option<Assignment> = adoc.map(AssignmentDoc::to_assignment).transpose()?;
    let extended = match &a {
        Some(a) => apply_assignment(inst, a)?,
        None => inst.rects.clone(),
    };
    Ok(inst
        .rects
        .iter()
        .zip(extended)
        .map(|(r, e)| Shape { body: *r, extension: (e != *r).then_some(e), label: label(r.id) })
        .collect())
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub instance: String,
    pub algorithm: String,
    pub status: String,
    pub count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opt: Option<usize>,
    /// `opt / count`; infinite ratios are omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchTable {
    pub format: u32,
    pub rows: Vec<BenchRow>,
    /// Largest observed `opt / count` per algorithm.
    pub worst_ratio: BTreeMap<String, f64>,
}

impl BenchTable {
    /// Sorts rows by instance then algorithm and fills the aggregate.
    pub fn new(mut rows: Vec<BenchRow>) -> Self {
        rows.sort_by(|a, b| (&a.instance, &a.algorithm).cmp(&(&b.instance, &b.algorithm)));
        let mut worst: BTreeMap<String, f64> = BTreeMap::new();
        for r in &rows {
            if let Some(ratio) = r.ratio {
                let w = worst.entry(r.algorithm.clone()).or_insert(ratio);
                *w = w.max(ratio);
            }
        }
        Self { format: FORMAT, rows, worst_ratio: worst }
    }

    pub fn to_json(&self) -> String {
        pretty(self)
    }
}
