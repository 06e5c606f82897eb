//! Minimal embedded resolution of a tagged family of plane branches by
//! iterated point blow-ups, producing a quotient-weighted dual graph.
//!
//! Every infinitely near point is described in the affine chart in which it
//! is the origin. Blowing up a point with local coordinates `(x, y)` uses the
//! chart `(x, y/x − c)` for the point of direction `c` and `(x/y, y)` for the
//! point at infinity; exceptional curves through a point are remembered as
//! one of the two coordinate lines of its chart.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{rat_int, ArithError, Quotient, Rat};
use crate::curve::{Branch, CurveError, Direction, LocalBranch, Role, Series, TaggedSystem, DEFAULT_TRUNCATION};
use crate::graph::{Arrow, ArrowKind, DualGraph, Vertex};

/// Default maximum number of blow-ups before input is declared malformed.
pub const DEFAULT_BLOWUP_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("blow-up cap of {0} reached; input looks malformed")]
    BlowupCap(usize),
    #[error("invalid input: {0}")]
    Precondition(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
}

impl ResolveError {
    pub fn is_precision(&self) -> bool {
        matches!(self, ResolveError::Curve(CurveError::PrecisionExhausted(_)))
    }
}

/// One of the two coordinate lines through the origin of a chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AxisCurve {
    /// `{x = 0}`
    #[serde(rename = "x")]
    XZero,
    /// `{y = 0}`
    #[serde(rename = "y")]
    YZero,
}

impl AxisCurve {
    pub fn other(self) -> AxisCurve {
        match self {
            AxisCurve::XZero => AxisCurve::YZero,
            AxisCurve::YZero => AxisCurve::XZero,
        }
    }

    pub fn branch(self) -> Branch {
        match self {
            AxisCurve::XZero => Branch::axis_x_zero(),
            AxisCurve::YZero => Branch::axis_y_zero(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolveOptions {
    /// Adds the coordinate axes: the given line to the f side, the other to g.
    pub with_axes: Option<AxisCurve>,
    pub truncation: u32,
    /// Number of extra blow-ups at seeded random points of the total
    /// transform after the minimal resolution is reached.
    pub non_minimal: usize,
    pub seed: u64,
    pub blowup_cap: usize,
}

impl Default for ResolveOptions {
    fn default() -> Self {
        ResolveOptions {
            with_axes: None,
            truncation: DEFAULT_TRUNCATION,
            non_minimal: 0,
            seed: 0,
            blowup_cap: DEFAULT_BLOWUP_CAP,
        }
    }
}

/// A blown-up infinitely near point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InfinitelyNearPoint {
    /// Equal to the id of the exceptional component it creates.
    pub id: usize,
    /// The point on whose exceptional curve this one lies.
    pub parent: Option<usize>,
    /// Lies on two exceptional components.
    pub satellite: bool,
    /// Branch index → multiplicity of its strict transform here.
    pub branches_through: BTreeMap<usize, u32>,
}

/// A branch of the resolved system, flattened in f, g, extra order (axes
/// appended to their sides when requested).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedBranch {
    pub branch: Branch,
    pub role: Role,
    pub mult: u64,
    /// Vertex met by the strict transform.
    pub vertex: usize,
    /// Index of its arrow in the graph.
    pub arrow: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionOutcome {
    pub graph: DualGraph,
    pub tree: Vec<InfinitelyNearPoint>,
    /// Multiplicity along each component of the product of the extra
    /// (discriminant-role) branches.
    pub m_h: BTreeMap<usize, u64>,
    pub branches: Vec<ResolvedBranch>,
    /// The system actually resolved (with axes when requested).
    pub system: TaggedSystem,
    /// Chart path of the point whose blow-up created each vertex.
    pub charts: BTreeMap<usize, Vec<Direction>>,
    /// Directions on each exceptional curve occupied by other curves of the
    /// total transform or by later blow-up centres.
    pub used_directions: BTreeMap<usize, BTreeSet<Direction>>,
}

#[derive(Debug, Clone)]
struct Point {
    path: Vec<Direction>,
    depth: u64,
    parent: Option<usize>,
    exc: Vec<(usize, AxisCurve)>,
    branches: Vec<(usize, LocalBranch)>,
}

#[derive(Debug, Clone, Copy, Default)]
struct Mults {
    f: u64,
    g: u64,
    h: u64,
}

struct Engine {
    roles: Vec<(Role, u64, String, Option<u64>)>,
    cap: u32,
    blowup_cap: usize,
    self_int: Vec<i64>,
    mults: Vec<Mults>,
    edges: Vec<(usize, usize)>,
    tree: Vec<InfinitelyNearPoint>,
    charts: Vec<Vec<Direction>>,
    used: Vec<BTreeSet<Direction>>,
    branch_vertex: Vec<Option<usize>>,
    /// Final normal-crossing points carrying a branch, by branch index.
    branch_points: BTreeMap<usize, Point>,
    /// Double points of two exceptional curves with nothing else through.
    double_points: Vec<Point>,
}

fn dir_of_axis(a: AxisCurve) -> Direction {
    match a {
        AxisCurve::XZero => Direction::Infinite,
        AxisCurve::YZero => Direction::Finite(Rat::zero()),
    }
}

impl Engine {
    fn label(&self, i: usize) -> &str {
        &self.roles[i].2
    }

    /// Normal crossings at a non-origin point: at most two curves, all
    /// branches smooth and transverse to the exceptional curve.
    fn is_nc(&self, p: &Point) -> Result<bool, CurveError> {
        if p.exc.len() + p.branches.len() > 2 {
            return Ok(false);
        }
        for (i, lb) in &p.branches {
            let ctx = self.label(*i);
            if lb.mult(ctx)? != 1 {
                return Ok(false);
            }
            for (_, axis) in &p.exc {
                let o = match axis {
                    AxisCurve::XZero => lb.ord_x(ctx)?,
                    AxisCurve::YZero => lb.ord_y(ctx)?,
                };
                if o != Some(1) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn blow_up(&mut self, p: Point) -> Result<Vec<Point>, ResolveError> {
        let id = self.self_int.len();
        if id >= self.blowup_cap {
            return Err(ResolveError::BlowupCap(self.blowup_cap));
        }
        let mut m = Mults::default();
        let mut through = BTreeMap::new();
        for (i, lb) in &p.branches {
            let mb = lb.mult(self.label(*i))?;
            through.insert(*i, mb);
            let (role, mu, _, _) = &self.roles[*i];
            let add = mu * mb as u64;
            match role {
                Role::F => m.f += add,
                Role::G => m.g += add,
                Role::Delta => m.h += add,
            }
        }
        for &(e, _) in &p.exc {
            m.f += self.mults[e].f;
            m.g += self.mults[e].g;
            m.h += self.mults[e].h;
            self.self_int[e] -= 1;
        }
        self.self_int.push(-1);
        self.mults.push(m);
        if p.exc.len() == 2 {
            let (a, b) = (p.exc[0].0, p.exc[1].0);
            let pos = self
                .edges
                .iter()
                .position(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b))
                .expect("exceptional curves through a satellite point meet");
            self.edges.remove(pos);
        }
        for &(e, _) in &p.exc {
            self.edges.push((e, id));
        }
        self.tree.push(InfinitelyNearPoint { id, parent: p.parent, satellite: p.exc.len() == 2, branches_through: through });
        self.charts.push(p.path.clone());

        let mut groups: BTreeMap<Direction, Vec<(usize, LocalBranch)>> = BTreeMap::new();
        for (i, lb) in &p.branches {
            let ctx = self.roles[*i].2.clone();
            let d = lb.direction(&ctx)?;
            let next = lb.chart(&d, self.cap, &ctx)?;
            groups.entry(d).or_default().push((*i, next));
        }
        let mut used: BTreeSet<Direction> = groups.keys().cloned().collect();
        let old_dirs: Vec<(Direction, usize, AxisCurve)> =
            p.exc.iter().map(|&(e, a)| (dir_of_axis(a), e, a)).collect();
        for (d, _, _) in &old_dirs {
            used.insert(d.clone());
        }
        self.used.push(used);

        let new_axis = |d: &Direction| match d {
            Direction::Finite(_) => AxisCurve::XZero,
            Direction::Infinite => AxisCurve::YZero,
        };
        let mut children = Vec::new();
        for (d, branches) in groups {
            let depth = p.depth + 1;
            for (x, (i, _)) in branches.iter().enumerate() {
                for (j, _) in branches.iter().skip(x + 1) {
                    let bi = self.roles[*i].3;
                    let bj = self.roles[*j].3;
                    if let (Some(a), Some(b)) = (bi, bj) {
                        if depth > a * b {
                            return Err(CurveError::IdenticalBranches(self.label(*i).into(), self.label(*j).into()).into());
                        }
                    }
                }
            }
            let mut exc = vec![(id, new_axis(&d))];
            for (od, e, a) in &old_dirs {
                if *od == d {
                    exc.push((*e, *a));
                }
            }
            let mut path = p.path.clone();
            path.push(d);
            children.push(Point { path, depth, parent: Some(id), exc, branches });
        }
        for (od, e, a) in old_dirs {
            if !children.iter().any(|c| c.path.last() == Some(&od)) {
                let mut path = p.path.clone();
                path.push(od.clone());
                self.double_points.push(Point {
                    path,
                    depth: p.depth + 1,
                    parent: Some(id),
                    exc: vec![(id, new_axis(&od)), (e, a)],
                    branches: vec![],
                });
            }
        }
        Ok(children)
    }

    fn run_queue(&mut self, mut queue: VecDeque<Point>, force_first: bool) -> Result<(), ResolveError> {
        let mut first = force_first;
        while let Some(p) = queue.pop_front() {
            if !first && self.is_nc(&p)? {
                if let Some((i, _)) = p.branches.first() {
                    self.branch_vertex[*i] = Some(p.exc[0].0);
                    self.branch_points.insert(*i, p);
                }
                continue;
            }
            first = false;
            queue.extend(self.blow_up(p)?);
        }
        Ok(())
    }

    /// One extra blow-up at a seeded random point of the total transform.
    fn extra_blowup(&mut self, rng: &mut ChaCha8Rng) -> Result<(), ResolveError> {
        let nv = self.self_int.len();
        let nd = self.double_points.len();
        let nb = self.branch_points.len();
        let k = rng.gen_range(0..nv + nd + nb);
        let p = if k < nv {
            let c = (1..).map(rat_int).map(Direction::Finite).find(|d| !self.used[k].contains(d)).unwrap();
            self.used[k].insert(c.clone());
            let mut path = self.charts[k].clone();
            path.push(c);
            Point { path, depth: 0, parent: Some(k), exc: vec![(k, AxisCurve::XZero)], branches: vec![] }
        } else if k < nv + nd {
            self.double_points.remove(k - nv)
        } else {
            let key = *self.branch_points.keys().nth(k - nv - nd).unwrap();
            self.branch_points.remove(&key).unwrap()
        };
        self.run_queue(VecDeque::from([p]), true)
    }
}

/// Resolves the system (plus the axes when requested) until the total
/// transform has normal crossings; the origin is always blown up.
pub fn resolve_embedded(sys: &TaggedSystem, opts: &ResolveOptions) -> Result<ResolutionOutcome, ResolveError> {
    let mut sys = sys.clone();
    if let Some(fa) = opts.with_axes {
        sys.f.push((fa.branch(), 1));
        sys.g.push((fa.other().branch(), 1));
    }
    if sys.f.is_empty() || sys.g.is_empty() {
        return Err(ResolveError::Precondition("need at least one f-branch and one g-branch".into()));
    }
    let mut roles = Vec::new();
    let mut start = Vec::new();
    for (idx, (role, b, mu)) in sys.all().enumerate() {
        b.validate()?;
        if mu == 0 {
            return Err(ResolveError::Precondition(format!("branch {} has multiplicity 0", b.label())));
        }
        let label = match &b.name {
            Some(n) => n.clone(),
            None => format!("#{idx} {}", b.label()),
        };
        roles.push((role, mu, label, b.degree_bound().map(u64::from)));
        start.push((idx, b.local()));
    }
    let n = roles.len();
    let mut eng = Engine {
        roles,
        cap: opts.truncation,
        blowup_cap: opts.blowup_cap,
        self_int: vec![],
        mults: vec![],
        edges: vec![],
        tree: vec![],
        charts: vec![],
        used: vec![],
        branch_vertex: vec![None; n],
        branch_points: BTreeMap::new(),
        double_points: vec![],
    };
    let origin = Point { path: vec![], depth: 1, parent: None, exc: vec![], branches: start };
    eng.run_queue(VecDeque::from([origin]), true)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.non_minimal {
        eng.extra_blowup(&mut rng)?;
    }

    let mut graph = DualGraph::new();
    for (id, (si, m)) in eng.self_int.iter().zip(&eng.mults).enumerate() {
        let mut v = Vertex::with_mults(id, *si, 0, m.f, m.g)?;
        v.q = Quotient::ratio(m.f, m.g)?;
        graph.add_vertex(v);
    }
    graph.edges = eng.edges.clone();
    let mut branches = Vec::new();
    for (idx, (role, b, mu)) in sys.all().enumerate() {
        let vertex = eng.branch_vertex[idx].expect("every branch ends at a normal-crossing point");
        let kind = match role {
            Role::F => ArrowKind::Out,
            Role::G => ArrowKind::In,
            Role::Delta => ArrowKind::Star,
        };
        graph.arrows.push(Arrow { v: vertex, kind, mult: mu });
        branches.push(ResolvedBranch { branch: b.clone(), role, mult: mu, vertex, arrow: idx });
    }
    Ok(ResolutionOutcome {
        graph,
        tree: eng.tree,
        m_h: eng.mults.iter().enumerate().map(|(i, m)| (i, m.h)).collect(),
        branches,
        system: sys,
        charts: eng.charts.into_iter().enumerate().collect(),
        used_directions: eng.used.into_iter().enumerate().collect(),
    })
}

/// Resolves, doubling the series truncation on precision exhaustion up to
/// `max_truncation`.
pub fn resolve_with_retry(sys: &TaggedSystem, opts: &ResolveOptions, max_truncation: u32) -> Result<ResolutionOutcome, ResolveError> {
    let mut o = opts.clone();
    loop {
        match resolve_embedded(sys, &o) {
            Err(e) if e.is_precision() && o.truncation < max_truncation => o.truncation *= 2,
            r => return r,
        }
    }
}

/// A smooth branch whose strict transform is a curvetta of `vertex`: the
/// line of a fresh direction through the centre of the blow-up creating the
/// vertex, pulled back through the (polynomial) chart maps.
pub fn synthesize_curvetta(outcome: &ResolutionOutcome, vertex: usize) -> Result<Branch, ResolveError> {
    let path = outcome.charts.get(&vertex).ok_or(ResolveError::UnknownVertex(vertex))?;
    let used = &outcome.used_directions[&vertex];
    let c = (1..).map(rat_int).find(|c| !used.contains(&Direction::Finite(c.clone()))).unwrap();
    let mut x = Series::t();
    let mut y = Series::t().scale(&c);
    for d in path.iter().rev() {
        match d {
            Direction::Finite(c0) => {
                y = x.mul(&y.add(&Series::monomial(c0.clone(), 0)));
            }
            Direction::Infinite => {
                x = x.mul(&y);
            }
        }
    }
    Ok(Branch::new(x, y)?.named(format!("curvetta of E{vertex}")))
}
