//! Instance generators for the two hardness constructions: all-positive
//! not-all-equal SAT to full square escape, and multicolored clique to the
//! two-axis constrained rectangle problem.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Assignment, Coord, Direction, Instance, Rect, RectId, Region};
use crate::square::{GridAssignment, GridInstance, Square};

/// Side length of a variable envelope.
pub const ENVELOPE: u32 = 25;
/// Grid offset so that row 1 and column 1 stay free for guards.
const SHIFT: u32 = 2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NaeFormula {
    pub num_vars: usize,
    /// Variables are numbered from 1.
    pub clauses: Vec<Vec<usize>>,
}

impl NaeFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<usize>>) -> Result<Self> {
        let mut uses = vec![0usize; num_vars + 1];
        for (j, c) in clauses.iter().enumerate() {
            if !(2..=3).contains(&c.len()) {
                return Err(Error::Formula(format!("clause {} has {} variables", j + 1, c.len())));
            }
            let distinct: BTreeSet<usize> = c.iter().copied().collect();
            if distinct.len() != c.len() {
                return Err(Error::Formula(format!("clause {} repeats a variable", j + 1)));
            }
            for &v in c {
                if v == 0 || v > num_vars {
                    return Err(Error::Formula(format!("clause {} names unknown variable {v}", j + 1)));
                }
                uses[v] += 1;
                if uses[v] > 3 {
                    return Err(Error::Formula(format!("variable {v} occurs in more than 3 clauses")));
                }
            }
        }
        Ok(Self { num_vars, clauses })
    }

    /// Clause variables in increasing order.
    fn sorted_clause(&self, j: usize) -> Vec<usize> {
        let mut c = self.clauses[j].clone();
        c.sort_unstable();
        c
    }

    /// Which occurrence (1..=3) of `v` clause `j` is.
    fn occurrence(&self, j: usize, v: usize) -> usize {
        self.clauses[..=j].iter().filter(|c| c.contains(&v)).count()
    }

    pub fn is_nae(&self, tau: &[bool]) -> bool {
        tau.len() == self.num_vars
            && self.clauses.iter().all(|c| {
                let ones = c.iter().filter(|&&v| tau[v - 1]).count();
                ones > 0 && ones < c.len()
            })
    }

    /// All not-all-equal assignments, in binary counting order.
    pub fn nae_assignments(&self) -> Result<Vec<Vec<bool>>> {
        if self.num_vars > 20 {
            return Err(Error::SizeCap { n: self.num_vars, cap: 20 });
        }
        Ok((0u32..1 << self.num_vars)
            .map(|mask| (0..self.num_vars).map(|i| mask >> i & 1 == 1).collect::<Vec<bool>>())
            .filter(|tau| self.is_nae(tau))
            .collect())
    }
}

pub fn nae_brute(phi: &NaeFormula) -> Result<bool> {
    Ok(!phi.nae_assignments()?.is_empty())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Top,
    Bottom,
    Left,
    Right,
}

impl Side {
    fn of(dir: Direction) -> Side {
        match dir {
            Direction::Up => Side::Top,
            Direction::Down => Side::Bottom,
            Direction::Left => Side::Left,
            Direction::Right => Side::Right,
        }
    }

    fn outward(self) -> Direction {
        match self {
            Side::Top => Direction::Up,
            Side::Bottom => Direction::Down,
            Side::Left => Direction::Left,
            Side::Right => Direction::Right,
        }
    }
}

/// Label of a square in the satisfiability construction. Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NaeRole {
    Variable { var: usize, idx: usize },
    /// Copy squares stacked above the variable squares.
    CopyColumn { var: usize, idx: usize },
    /// Copy squares to the right of the variable squares.
    CopyRow { var: usize, idx: usize },
    Blocker { var: usize, idx: usize },
    /// Anchor left of a blocker, blocked up and down.
    AnchorLeft { var: usize, idx: usize },
    /// Anchor below a blocker, blocked left and right.
    AnchorBelow { var: usize, idx: usize },
    ClauseUp { clause: usize, pos: usize },
    ClauseRight { clause: usize, pos: usize },
    DummyP { clause: usize },
    DummyQ { clause: usize },
    Guard { side: Side, line: u32 },
}

impl fmt::Display for NaeRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NaeRole::Variable { var, idx } => write!(f, "s_{var}[{idx}]"),
            NaeRole::CopyColumn { var, idx } => write!(f, "copy_{var}.col[{idx}]"),
            NaeRole::CopyRow { var, idx } => write!(f, "copy_{var}.row[{idx}]"),
            NaeRole::Blocker { var, idx } => write!(f, "blocker_{var}[{idx}]"),
            NaeRole::AnchorLeft { var, idx } => write!(f, "anchor_{var}.left[{idx}]"),
            NaeRole::AnchorBelow { var, idx } => write!(f, "anchor_{var}.below[{idx}]"),
            NaeRole::ClauseUp { clause, pos } => write!(f, "t_{clause}[{pos}]^U"),
            NaeRole::ClauseRight { clause, pos } => write!(f, "t_{clause}[{pos}]^R"),
            NaeRole::DummyP { clause } => write!(f, "P_{clause}"),
            NaeRole::DummyQ { clause } => write!(f, "Q_{clause}"),
            NaeRole::Guard { side, line } => write!(f, "guard.{side:?}@{line}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridArtifact {
    pub instance: GridInstance,
    pub roles: BTreeMap<RectId, NaeRole>,
}

impl GridArtifact {
    pub fn labels(&self) -> BTreeMap<RectId, String> {
        self.roles.iter().map(|(&id, r)| (id, r.to_string())).collect()
    }

    pub fn id_of(&self, role: NaeRole) -> Option<RectId> {
        self.roles.iter().find(|(_, &r)| r == role).map(|(&id, _)| id)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum GuardKind {
    Partial,
    Full,
}

#[derive(Default)]
struct GridBuilder {
    placed: Vec<(u32, u32, NaeRole)>,
    guards: BTreeMap<(Side, u32), GuardKind>,
}

impl GridBuilder {
    /// Places at offset coordinates `(x, y)` = (column, row) before shifting.
    fn place(&mut self, x: u32, y: u32, role: NaeRole) -> (u32, u32) {
        let (col, row) = (x + SHIFT, y + SHIFT);
        self.placed.push((row, col, role));
        (row, col)
    }

    fn line(dir: Direction, row: u32, col: u32) -> u32 {
        match dir {
            Direction::Up | Direction::Down => col,
            Direction::Left | Direction::Right => row,
        }
    }

    fn guard(&mut self, dir: Direction, row: u32, col: u32, kind: GuardKind) -> Result<()> {
        let key = (Side::of(dir), Self::line(dir, row, col));
        match self.guards.get(&key) {
            None => {
                self.guards.insert(key, kind);
                Ok(())
            }
            Some(&k) if k == kind => Ok(()),
            Some(_) => Err(Error::Construction(format!(
                "line {} on side {:?} is both blocked and partially blocked",
                key.1, key.0
            ))),
        }
    }

    fn block(&mut self, at: (u32, u32), dir: Direction) -> Result<()> {
        self.guard(dir, at.0, at.1, GuardKind::Full)
    }

    fn partial(&mut self, at: (u32, u32), dir: Direction) -> Result<()> {
        self.guard(dir, at.0, at.1, GuardKind::Partial)
    }

    fn finish(self, d: u32) -> Result<GridArtifact> {
        let top = self.placed.iter().map(|&(r, c, _)| r.max(c)).max().unwrap_or(SHIFT);
        let m = top + 1;
        let mut squares = Vec::new();
        let mut roles = BTreeMap::new();
        let mut push = |row: u32, col: u32, role: NaeRole| {
            let id = squares.len() as RectId;
            squares.push(Square { id, row, col });
            roles.insert(id, role);
        };
        for &(row, col, role) in &self.placed {
            push(row, col, role);
        }
        for (&(side, line), &kind) in &self.guards {
            let (row, col) = match side {
                Side::Top => (m, line),
                Side::Bottom => (1, line),
                Side::Left => (line, 1),
                Side::Right => (line, m),
            };
            let copies = if kind == GuardKind::Full { 2 } else { 1 };
            for _ in 0..copies {
                push(row, col, NaeRole::Guard { side, line });
            }
        }
        let n = squares.len() as u32;
        let instance = GridInstance::new(m, squares, d, Some(n))?;
        if instance.input_multiplicity() > d {
            return Err(Error::Construction("a cell holds more than two squares".into()));
        }
        Ok(GridArtifact { instance, roles })
    }
}

fn gadget_origin(var: usize) -> u32 {
    ENVELOPE * (var as u32 - 1)
}

fn variable_offset(idx: usize) -> (u32, u32) {
    [(0, 4), (2, 2), (4, 0)][idx - 1]
}

const COPY_COLUMN: [(u32, u32); 4] = [(0, 8), (2, 12), (2, 16), (4, 20)];
const COPY_ROW: [(u32, u32); 4] = [(8, 2), (12, 4), (16, 0), (20, 2)];
const BLOCKERS: [(u32, u32); 4] = [(8, 8), (12, 12), (16, 16), (20, 20)];

fn place_variable(b: &mut GridBuilder, var: usize) -> Result<()> {
    let o = gadget_origin(var);
    for idx in 1..=3 {
        let (dx, dy) = variable_offset(idx);
        let at = b.place(o + dx, o + dy, NaeRole::Variable { var, idx });
        b.block(at, Direction::Down)?;
        b.block(at, Direction::Left)?;
        b.partial(at, Direction::Up)?;
        b.partial(at, Direction::Right)?;
    }
    for (i, &(dx, dy)) in COPY_COLUMN.iter().enumerate() {
        b.place(o + dx, o + dy, NaeRole::CopyColumn { var, idx: i + 1 });
    }
    for (i, &(dx, dy)) in COPY_ROW.iter().enumerate() {
        b.place(o + dx, o + dy, NaeRole::CopyRow { var, idx: i + 1 });
    }
    for (i, &(dx, dy)) in BLOCKERS.iter().enumerate() {
        let idx = i + 1;
        b.place(o + dx, o + dy, NaeRole::Blocker { var, idx });
        let left = b.place(o + dx - 2, o + dy, NaeRole::AnchorLeft { var, idx });
        b.block(left, Direction::Up)?;
        b.block(left, Direction::Down)?;
        let below = b.place(o + dx, o + dy - 2, NaeRole::AnchorBelow { var, idx });
        b.block(below, Direction::Left)?;
        b.block(below, Direction::Right)?;
    }
    Ok(())
}

/// Offset position of the variable square used by clause `j` for `v`.
fn feeding_square(phi: &NaeFormula, j: usize, v: usize) -> (u32, u32) {
    let o = gadget_origin(v);
    let (dx, dy) = variable_offset(phi.occurrence(j, v));
    (o + dx, o + dy)
}

fn clause_line(phi: &NaeFormula, j: usize) -> u32 {
    2 * (j as u32 + 1) + ENVELOPE * phi.num_vars as u32 + 10
}

pub fn reduce_naesat(phi: &NaeFormula) -> Result<GridArtifact> {
    let phi = NaeFormula::new(phi.num_vars, phi.clauses.clone())?;
    let mut b = GridBuilder::default();
    for var in 1..=phi.num_vars {
        place_variable(&mut b, var)?;
    }
    for j in 0..phi.clauses.len() {
        let clause = j + 1;
        let line = clause_line(&phi, j);
        let vars = phi.sorted_clause(j);
        for (x, &v) in vars.iter().enumerate() {
            let (sx, sy) = feeding_square(&phi, j, v);
            b.place(sx, line, NaeRole::ClauseUp { clause, pos: x + 1 });
            b.place(line, sy, NaeRole::ClauseRight { clause, pos: x + 1 });
        }
        if vars.len() == 2 {
            let (sx, sy) = feeding_square(&phi, j, vars[0]);
            // Odd offsets inside an envelope are never used.
            let p = b.place(sx + 1, line, NaeRole::DummyP { clause });
            b.block(p, Direction::Up)?;
            b.block(p, Direction::Down)?;
            let q = b.place(line, sy + 1, NaeRole::DummyQ { clause });
            b.block(q, Direction::Left)?;
            b.block(q, Direction::Right)?;
        }
    }
    b.finish(2)
}

/// The full extension built from a not-all-equal assignment.
pub fn naesat_witness(phi: &NaeFormula, tau: &[bool]) -> Result<GridAssignment> {
    if !phi.is_nae(tau) {
        return Err(Error::Witness("assignment is not a not-all-equal solution".into()));
    }
    let art = reduce_naesat(phi)?;
    let inst = &art.instance;
    let right = |var: usize| tau[var - 1];
    let mut a = GridAssignment::none_for(inst.ids());
    for (&id, &role) in &art.roles {
        let dir = match role {
            NaeRole::Variable { var, .. } => Some(if right(var) { Direction::Right } else { Direction::Up }),
            NaeRole::CopyColumn { .. } => Some(Direction::Left),
            NaeRole::CopyRow { .. } => Some(Direction::Down),
            NaeRole::Blocker { var, .. } => Some(if right(var) { Direction::Right } else { Direction::Up }),
            NaeRole::AnchorLeft { var, .. } => Some(if right(var) { Direction::Left } else { Direction::Right }),
            NaeRole::AnchorBelow { var, .. } => Some(if right(var) { Direction::Up } else { Direction::Down }),
            NaeRole::Guard { side, .. } => Some(side.outward()),
            _ => None,
        };
        a.set(id, dir);
    }
    for j in 0..phi.clauses.len() {
        let clause = j + 1;
        let vars = phi.sorted_clause(j);
        let sq = |role: NaeRole| {
            let id = art.id_of(role).expect("placed clause square");
            (id, *inst.square(id).expect("square"))
        };
        // Squares on the clause row: free ones leave upward, the rest split
        // left and right.
        let mut across = Vec::new();
        let mut along = Vec::new();
        for (x, &v) in vars.iter().enumerate() {
            let (uid, us) = sq(NaeRole::ClauseUp { clause, pos: x + 1 });
            if right(v) {
                a.set(uid, Some(Direction::Up));
            } else {
                across.push((us.col, uid));
            }
            let (rid, rs) = sq(NaeRole::ClauseRight { clause, pos: x + 1 });
            if right(v) {
                along.push((rs.row, rid));
            } else {
                a.set(rid, Some(Direction::Right));
            }
        }
        if vars.len() == 2 {
            let (pid, ps) = sq(NaeRole::DummyP { clause });
            across.push((ps.col, pid));
            let (qid, qs) = sq(NaeRole::DummyQ { clause });
            along.push((qs.row, qid));
        }
        across.sort_unstable();
        along.sort_unstable();
        for (i, &(_, id)) in across.iter().enumerate() {
            a.set(id, Some(if i == 0 { Direction::Left } else { Direction::Right }));
        }
        for (i, &(_, id)) in along.iter().enumerate() {
            a.set(id, Some(if i == 0 { Direction::Down } else { Direction::Up }));
        }
    }
    Ok(a)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MccGraph {
    pub k: usize,
    pub t: usize,
    /// `parts[i][j]` is the vertex id of `v_{i+1}[j+1]`.
    pub parts: Vec<Vec<u32>>,
    pub edges: Vec<(u32, u32)>,
}

impl MccGraph {
    pub fn new(k: usize, t: usize, parts: Vec<Vec<u32>>, edges: Vec<(u32, u32)>) -> Result<Self> {
        if k == 0 || t == 0 {
            return Err(Error::Graph("k and t must be positive".into()));
        }
        if parts.len() != k || parts.iter().any(|p| p.len() != t) {
            return Err(Error::Graph(format!("expected {k} parts of {t} vertices")));
        }
        let all: BTreeSet<u32> = parts.iter().flatten().copied().collect();
        if all.len() != k * t {
            return Err(Error::Graph("vertex ids repeat".into()));
        }
        let g = Self { k, t, parts, edges };
        let mut seen = BTreeSet::new();
        for &(u, v) in &g.edges {
            let (a, b) = (g.locate(u)?, g.locate(v)?);
            if a.0 == b.0 {
                return Err(Error::Graph(format!("edge ({u},{v}) lies inside one part")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::Graph(format!("edge ({u},{v}) repeats")));
            }
        }
        Ok(g)
    }

    /// Standard labelling: part `i` holds ids `i*t .. i*t + t`.
    pub fn with_edges(k: usize, t: usize, edges: Vec<(u32, u32)>) -> Result<Self> {
        let parts = (0..k).map(|i| (0..t).map(|j| (i * t + j) as u32).collect()).collect();
        Self::new(k, t, parts, edges)
    }

    /// 1-based (part, index) of vertex `v`.
    pub fn locate(&self, v: u32) -> Result<(usize, usize)> {
        for (i, part) in self.parts.iter().enumerate() {
            if let Some(j) = part.iter().position(|&u| u == v) {
                return Ok((i + 1, j + 1));
            }
        }
        Err(Error::Graph(format!("unknown vertex {v}")))
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.edges.iter().any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u))
    }

    /// Exhaustive search for one vertex per part forming a clique.
    pub fn find_clique(&self) -> Option<Vec<u32>> {
        let mut pick = Vec::with_capacity(self.k);
        self.extend_clique(&mut pick).then_some(pick)
    }

    fn extend_clique(&self, pick: &mut Vec<u32>) -> bool {
        if pick.len() == self.k {
            return true;
        }
        for &v in &self.parts[pick.len()] {
            if pick.iter().all(|&u| self.has_edge(u, v)) {
                pick.push(v);
                if self.extend_clique(pick) {
                    return true;
                }
                pick.pop();
            }
        }
        false
    }
}

/// Label of a rectangle in the clique construction. Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MccRole {
    Selection { part: usize, idx: usize },
    EdgeSquare { edge: usize },
    /// Incidence rect above the selected band.
    IncidenceW { edge: usize, part: usize, idx: usize },
    /// Incidence rect below the selected band.
    IncidenceZ { edge: usize, part: usize, idx: usize },
    GuardLeft,
    GuardTop,
    GuardBottom,
    GuardRight,
    GuardEdgeRow,
    GuardAbove { part: usize },
    GuardBelow { part: usize },
}

impl fmt::Display for MccRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MccRole::Selection { part, idx } => write!(f, "T_{part}[{idx}]"),
            MccRole::EdgeSquare { edge } => write!(f, "T_e{edge}"),
            MccRole::IncidenceW { edge, part, idx } => write!(f, "W_{part}[{idx}]@e{edge}"),
            MccRole::IncidenceZ { edge, part, idx } => write!(f, "Z_{part}[{idx}]@e{edge}"),
            MccRole::GuardLeft => f.write_str("guard.left"),
            MccRole::GuardTop => f.write_str("guard.top"),
            MccRole::GuardBottom => f.write_str("guard.bottom"),
            MccRole::GuardRight => f.write_str("H"),
            MccRole::GuardEdgeRow => f.write_str("guard.edge-row"),
            MccRole::GuardAbove { part } => write!(f, "H_{part}"),
            MccRole::GuardBelow { part } => write!(f, "H_{part}^dagger"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RectArtifact {
    pub instance: Instance,
    pub roles: BTreeMap<RectId, MccRole>,
    pub p: usize,
    pub q: usize,
}

impl RectArtifact {
    pub fn labels(&self) -> BTreeMap<RectId, String> {
        self.roles.iter().map(|(&id, r)| (id, r.to_string())).collect()
    }

    pub fn id_of(&self, role: MccRole) -> Option<RectId> {
        self.roles.iter().find(|(_, &r)| r == role).map(|(&id, _)| id)
    }
}

struct McLayout {
    t: Coord,
}

impl McLayout {
    fn offset(&self, part: usize) -> Coord {
        (2 * self.t + 5) * (part as Coord - 1)
    }

    /// `(x0, y0, x1, y1)` of the selection rect for `v_part[idx]`.
    fn selection(&self, part: usize, idx: usize) -> (Coord, Coord, Coord, Coord) {
        let j = idx as Coord;
        let y0 = 3 + j + self.offset(part);
        (2 + 2 * j, y0, 3 + 2 * j, y0 + self.t + 1)
    }

    fn edge_row(&self) -> Coord {
        (2 * self.t + 5).pow(2)
    }

    fn edge_x(&self, edge: usize) -> Coord {
        3 * self.t + 12 * edge as Coord
    }
}

pub fn reduce_mcc(g: &MccGraph) -> Result<RectArtifact> {
    let g = MccGraph::new(g.k, g.t, g.parts.clone(), g.edges.clone())?;
    let t = g.t as Coord;
    let lay = McLayout { t };
    if g.k as Coord >= 2 * t + 5 {
        return Err(Error::Construction("too many parts for the edge row height".into()));
    }
    let width = (3 + 2 * t).max(lay.edge_x(g.edges.len()) + 4) + 2;
    let height = lay.edge_row() + 3;
    let mut rects: Vec<Rect> = Vec::new();
    let mut roles = BTreeMap::new();
    let mut add = |x0: Coord, y0: Coord, x1: Coord, y1: Coord, role: MccRole| -> Result<()> {
        let id = rects.len() as RectId;
        rects.push(Rect::new(id, x0, y0, x1, y1)?);
        roles.insert(id, role);
        Ok(())
    };
    for part in 1..=g.k {
        for idx in 1..=g.t {
            let (x0, y0, x1, y1) = lay.selection(part, idx);
            add(x0, y0, x1, y1, MccRole::Selection { part, idx })?;
        }
    }
    for (e, &(u, v)) in g.edges.iter().enumerate() {
        let edge = e + 1;
        let x = lay.edge_x(edge);
        let y = lay.edge_row();
        add(x, y, x + 1, y + 1, MccRole::EdgeSquare { edge })?;
        let mut ends = [g.locate(u)?, g.locate(v)?];
        ends.sort_unstable();
        for (part, idx) in ends {
            let sel = lay.selection(part, idx);
            let top = lay.selection(part, g.t).3 + 2;
            add(x - 3, sel.3, x + 4, top, MccRole::IncidenceW { edge, part, idx })?;
            let bottom = lay.selection(part, 1).1 - 2;
            add(x - 3, bottom, x + 4, sel.1, MccRole::IncidenceZ { edge, part, idx })?;
        }
    }
    for _ in 0..2 {
        add(0, 0, 1, height, MccRole::GuardLeft)?;
        add(1, height - 1, width - 1, height, MccRole::GuardTop)?;
        let first = lay.selection(1, 1);
        let last = lay.selection(1, g.t);
        add(first.0 - 1, 0, last.2 + 1, 1, MccRole::GuardBottom)?;
    }
    add(width - 1, 0, width, height, MccRole::GuardRight)?;
    add(width - 1, lay.edge_row() - 1, width, lay.edge_row(), MccRole::GuardEdgeRow)?;
    for part in 1..=g.k {
        let top = lay.selection(part, g.t).3 + 2;
        add(width - 1, top - 1, width, top, MccRole::GuardAbove { part })?;
        let bottom = lay.selection(part, 1).1 - 2;
        add(width - 1, bottom, width, bottom + 1, MccRole::GuardBelow { part })?;
    }
    let region = Region::new(0, 0, width, height)?;
    let instance = Instance::new(region, rects, 2, None)?;
    if instance.input_density().max_density > 2 {
        return Err(Error::Construction("guards overlap beyond density two".into()));
    }
    Ok(RectArtifact { instance, roles, p: g.k, q: g.k * (g.k - 1) / 2 })
}

/// Selected rects go right and the clique's edge squares go down.
pub fn mcc_witness(g: &MccGraph, clique: &[u32]) -> Result<Assignment> {
    if clique.len() != g.k {
        return Err(Error::Witness(format!("expected {} vertices", g.k)));
    }
    for (i, &v) in clique.iter().enumerate() {
        if g.locate(v)?.0 != i + 1 {
            return Err(Error::Witness(format!("vertex {v} is not in part {}", i + 1)));
        }
        for &u in &clique[..i] {
            if !g.has_edge(u, v) {
                return Err(Error::Witness(format!("vertices {u} and {v} are not adjacent")));
            }
        }
    }
    let art = reduce_mcc(g)?;
    let mut a = Assignment::none_for(art.instance.ids());
    for &v in clique {
        let (part, idx) = g.locate(v)?;
        let id = art.id_of(MccRole::Selection { part, idx }).expect("selection rect");
        a.set(id, Some(Direction::Right));
    }
    for (e, &(u, v)) in g.edges.iter().enumerate() {
        if clique.contains(&u) && clique.contains(&v) {
            let id = art.id_of(MccRole::EdgeSquare { edge: e + 1 }).expect("edge square");
            a.set(id, Some(Direction::Down));
        }
    }
    Ok(a)
}
