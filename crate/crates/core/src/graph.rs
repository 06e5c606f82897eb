//! Quotient-weighted dual graphs: orientation, maximal arcs, structure-theorem
//! checks, isomorphism and serialization.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{ArithError, Quotient};

/// Number of arcs enumerated explicitly before falling back to the
/// reachability description of the arc union only.
pub const ARC_ENUMERATION_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph schema error: {0}")]
    Schema(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("vertex {0}: quotient {1} does not match multiplicities")]
    QuotientMismatch(usize, Quotient),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// One exceptional component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: usize,
    pub self_int: Option<i64>,
    pub genus: Option<u64>,
    pub m_f: Option<u64>,
    pub m_g: Option<u64>,
    pub q: Quotient,
    /// Free-form provenance annotation (e.g. cover sheet or bamboo position).
    pub origin: Option<String>,
}

impl Vertex {
    /// A vertex with multiplicities; the quotient is `m_f / m_g`.
    pub fn with_mults(id: usize, self_int: i64, genus: u64, m_f: u64, m_g: u64) -> Result<Vertex, ArithError> {
        Ok(Vertex {
            id,
            self_int: Some(self_int),
            genus: Some(genus),
            m_f: Some(m_f),
            m_g: Some(m_g),
            q: Quotient::ratio(m_f, m_g)?,
            origin: None,
        })
    }

    /// A vertex known only by its quotient (as drawn in a figure).
    pub fn bare(id: usize, q: Quotient) -> Vertex {
        Vertex { id, self_int: None, genus: None, m_f: None, m_g: None, q, origin: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArrowKind {
    /// Strict transform of `{g = 0}` (quotient 0).
    In,
    /// Strict transform of `{f = 0}` (quotient ∞).
    Out,
    /// Strict transform of a discriminant branch.
    Star,
}

/// A strict-transform branch meeting a vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub v: usize,
    pub kind: ArrowKind,
    /// Multiplicity of the branch in its function.
    pub mult: u64,
}

/// The dual graph of a good resolution.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DualGraph {
    pub vertices: BTreeMap<usize, Vertex>,
    pub edges: Vec<(usize, usize)>,
    pub arrows: Vec<Arrow>,
}

impl DualGraph {
    pub fn new() -> DualGraph {
        DualGraph::default()
    }

    pub fn add_vertex(&mut self, v: Vertex) {
        self.vertices.insert(v.id, v);
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        self.edges.push((a, b));
    }

    pub fn add_arrow(&mut self, v: usize, kind: ArrowKind) {
        self.arrows.push(Arrow { v, kind, mult: 1 });
    }

    pub fn vertex(&self, id: usize) -> &Vertex {
        &self.vertices[&id]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Neighbours over edges, repeated for parallel edges.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
            .collect()
    }

    pub fn edge_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn arrows_at(&self, v: usize) -> impl Iterator<Item = (usize, &Arrow)> {
        self.arrows.iter().enumerate().filter(move |(_, a)| a.v == v)
    }

    /// Degree in the total transform: edges plus all arrows.
    pub fn degree(&self, v: usize) -> usize {
        self.edge_degree(v) + self.arrows_at(v).count()
    }

    pub fn count_arrows(&self, kind: ArrowKind) -> usize {
        self.arrows.iter().filter(|a| a.kind == kind).count()
    }

    pub fn is_connected(&self) -> bool {
        let Some(&start) = self.vertices.keys().next() else { return true };
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for w in self.neighbors(v) {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    /// `true` iff the graph has a cycle (including parallel edges).
    pub fn has_cycle(&self) -> bool {
        let comps = components(self.vertices.keys().copied(), &self.edges);
        self.edges.len() + comps > self.vertices.len()
    }

    /// Structural invariants: known endpoints, no self-loops, connected,
    /// quotients consistent with multiplicities.
    pub fn validate(&self) -> Result<(), GraphError> {
        for &(a, b) in &self.edges {
            for v in [a, b] {
                if !self.vertices.contains_key(&v) {
                    return Err(GraphError::UnknownVertex(v));
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
        }
        for a in &self.arrows {
            if !self.vertices.contains_key(&a.v) {
                return Err(GraphError::UnknownVertex(a.v));
            }
        }
        for v in self.vertices.values() {
            if let (Some(f), Some(g)) = (v.m_f, v.m_g) {
                if Quotient::ratio(f, g)? != v.q {
                    return Err(GraphError::QuotientMismatch(v.id, v.q.clone()));
                }
            }
        }
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(())
    }

    /// Vertex order along a bamboo (path graph), if the graph is one.
    pub fn chain_order(&self) -> Option<Vec<usize>> {
        if self.has_cycle() || !self.is_connected() {
            return None;
        }
        if self.vertices.keys().any(|&v| self.edge_degree(v) > 2) {
            return None;
        }
        let start = *self.vertices.keys().find(|&&v| self.edge_degree(v) <= 1)?;
        let mut order = vec![start];
        let mut prev = None;
        let mut cur = start;
        loop {
            let next = self.neighbors(cur).into_iter().find(|&w| Some(w) != prev);
            match next {
                Some(w) => {
                    order.push(w);
                    prev = Some(cur);
                    cur = w;
                }
                None => break,
            }
        }
        Some(order)
    }

    /// Renumbers vertices `0..n` in id order.
    pub fn renumbered(&self) -> DualGraph {
        let map: BTreeMap<usize, usize> = self.vertices.keys().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut out = DualGraph::new();
        for v in self.vertices.values() {
            out.add_vertex(Vertex { id: map[&v.id], ..v.clone() });
        }
        out.edges = self.edges.iter().map(|&(a, b)| (map[&a], map[&b])).collect();
        out.arrows = self.arrows.iter().map(|a| Arrow { v: map[&a.v], ..a.clone() }).collect();
        out
    }

    pub fn quotient_multiset(&self) -> Vec<Quotient> {
        let mut qs: Vec<Quotient> = self.vertices.values().map(|v| v.q.clone()).collect();
        qs.sort();
        qs
    }
}

fn components(vertices: impl Iterator<Item = usize>, edges: &[(usize, usize)]) -> usize {
    let verts: Vec<usize> = vertices.collect();
    let idx: HashMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..verts.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let n = p[c];
            p[c] = r;
            c = n;
        }
        r
    }
    let mut count = verts.len();
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, idx[&a]), find(&mut parent, idx[&b]));
        if ra != rb {
            parent[ra] = rb;
            count -= 1;
        }
    }
    count
}

/// Orientation of an edge `(a, b)` as stored in [`DualGraph::edges`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeOrientation {
    /// `a → b` (`q_a < q_b`).
    Forward,
    /// `b → a`.
    Backward,
    Unoriented,
}

/// Orients each edge from the smaller to the larger quotient.
pub fn derive_orientation(g: &DualGraph) -> Vec<EdgeOrientation> {
    g.edges
        .iter()
        .map(|&(a, b)| match g.vertex(a).q.cmp(&g.vertex(b).q) {
            std::cmp::Ordering::Less => EdgeOrientation::Forward,
            std::cmp::Ordering::Greater => EdgeOrientation::Backward,
            std::cmp::Ordering::Equal => EdgeOrientation::Unoriented,
        })
        .collect()
}

/// Oriented edges as `(edge index, tail, head)`.
fn oriented_edges(g: &DualGraph) -> Vec<(usize, usize, usize)> {
    derive_orientation(g)
        .into_iter()
        .enumerate()
        .filter_map(|(i, o)| {
            let (a, b) = g.edges[i];
            match o {
                EdgeOrientation::Forward => Some((i, a, b)),
                EdgeOrientation::Backward => Some((i, b, a)),
                EdgeOrientation::Unoriented => None,
            }
        })
        .collect()
}

/// A maximal arc: a going-in arrow, a path of positively oriented edges, and
/// a going-out arrow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Arc {
    pub in_arrow: usize,
    pub out_arrow: usize,
    pub vertices: Vec<usize>,
    /// Edge indices, one per consecutive vertex pair.
    pub edges: Vec<usize>,
}

/// A connected component of the closure of the complement of the arcs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplementComponent {
    pub vertices: BTreeSet<usize>,
    pub edges: BTreeSet<usize>,
    /// Distinct quotients met on the component (one on a valid graph).
    pub quotients: BTreeSet<Quotient>,
}

impl ComplementComponent {
    /// The common quotient, when constant.
    pub fn quotient(&self) -> Option<&Quotient> {
        if self.quotients.len() == 1 {
            self.quotients.iter().next()
        } else {
            None
        }
    }
}

/// The maximal arcs and the complement of their union.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArcDecomposition {
    pub arcs: Vec<Arc>,
    /// `true` when enumeration stopped at [`ARC_ENUMERATION_CAP`]; the union
    /// below is still exact.
    pub truncated: bool,
    pub arc_vertices: BTreeSet<usize>,
    pub arc_edges: BTreeSet<usize>,
    pub arc_arrows: BTreeSet<usize>,
    pub complement: Vec<ComplementComponent>,
}

impl ArcDecomposition {
    /// `true` iff every vertex and edge lies on an arc.
    pub fn covers(&self, g: &DualGraph) -> bool {
        self.arc_vertices.len() == g.vertices.len() && self.arc_edges.len() == g.edges.len()
    }
}

fn reach(start: impl Iterator<Item = usize>, adj: &BTreeMap<usize, Vec<usize>>) -> BTreeSet<usize> {
    let mut seen: BTreeSet<usize> = start.collect();
    let mut queue: VecDeque<usize> = seen.iter().copied().collect();
    while let Some(v) = queue.pop_front() {
        for &w in adj.get(&v).into_iter().flatten() {
            if seen.insert(w) {
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Enumerates the maximal arcs and the closure of their complement.
pub fn maximal_arcs(g: &DualGraph) -> ArcDecomposition {
    let oriented = oriented_edges(g);
    let mut fwd: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut bwd: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut out_edges: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for &(i, a, b) in &oriented {
        fwd.entry(a).or_default().push(b);
        bwd.entry(b).or_default().push(a);
        out_edges.entry(a).or_default().push((i, b));
    }
    let in_arrows: Vec<(usize, usize)> =
        g.arrows.iter().enumerate().filter(|(_, a)| a.kind == ArrowKind::In).map(|(i, a)| (i, a.v)).collect();
    let out_arrows: Vec<(usize, usize)> =
        g.arrows.iter().enumerate().filter(|(_, a)| a.kind == ArrowKind::Out).map(|(i, a)| (i, a.v)).collect();

    let from_in = reach(in_arrows.iter().map(|&(_, v)| v), &fwd);
    let to_out = reach(out_arrows.iter().map(|&(_, v)| v), &bwd);
    let arc_vertices: BTreeSet<usize> = from_in.intersection(&to_out).copied().collect();
    let arc_edges: BTreeSet<usize> = oriented
        .iter()
        .filter(|&&(_, a, b)| from_in.contains(&a) && to_out.contains(&b))
        .map(|&(i, _, _)| i)
        .collect();
    let arc_arrows: BTreeSet<usize> = in_arrows
        .iter()
        .filter(|&&(_, v)| to_out.contains(&v))
        .chain(out_arrows.iter().filter(|&&(_, v)| from_in.contains(&v)))
        .map(|&(i, _)| i)
        .collect();

    // Explicit enumeration by depth-first search.
    let mut outs_at: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(i, v) in &out_arrows {
        outs_at.entry(v).or_default().push(i);
    }
    let mut arcs = Vec::new();
    let mut truncated = false;
    'outer: for &(ia, v0) in &in_arrows {
        if !to_out.contains(&v0) {
            continue;
        }
        let mut stack: Vec<(Vec<usize>, Vec<usize>)> = vec![(vec![v0], vec![])];
        while let Some((path, edges)) = stack.pop() {
            let v = *path.last().unwrap();
            for &oa in outs_at.get(&v).into_iter().flatten() {
                if arcs.len() >= ARC_ENUMERATION_CAP {
                    truncated = true;
                    break 'outer;
                }
                arcs.push(Arc { in_arrow: ia, out_arrow: oa, vertices: path.clone(), edges: edges.clone() });
            }
            for &(ei, w) in out_edges.get(&v).into_iter().flatten().rev() {
                if to_out.contains(&w) {
                    let mut p = path.clone();
                    p.push(w);
                    let mut e = edges.clone();
                    e.push(ei);
                    stack.push((p, e));
                }
            }
        }
    }

    // Closure of the complement: all edges off the arcs with their endpoints,
    // plus the vertices off the arcs.
    let comp_edges: Vec<usize> = (0..g.edges.len()).filter(|i| !arc_edges.contains(i)).collect();
    let mut comp_vertices: BTreeSet<usize> =
        g.vertices.keys().filter(|v| !arc_vertices.contains(v)).copied().collect();
    for &i in &comp_edges {
        let (a, b) = g.edges[i];
        comp_vertices.insert(a);
        comp_vertices.insert(b);
    }
    let mut adj: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for &i in &comp_edges {
        let (a, b) = g.edges[i];
        adj.entry(a).or_default().push((i, b));
        adj.entry(b).or_default().push((i, a));
    }
    let mut seen = BTreeSet::new();
    let mut complement = Vec::new();
    for &s in &comp_vertices {
        if seen.contains(&s) {
            continue;
        }
        let mut comp = ComplementComponent { vertices: BTreeSet::new(), edges: BTreeSet::new(), quotients: BTreeSet::new() };
        let mut queue = VecDeque::from([s]);
        seen.insert(s);
        while let Some(v) = queue.pop_front() {
            comp.vertices.insert(v);
            comp.quotients.insert(g.vertex(v).q.clone());
            for &(i, w) in adj.get(&v).into_iter().flatten() {
                comp.edges.insert(i);
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        complement.push(comp);
    }

    ArcDecomposition { arcs, truncated, arc_vertices, arc_edges, arc_arrows, complement }
}

/// One failed clause of the structure theorem, with witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "clause")]
pub enum Theorem1Violation {
    /// (a) quotients not constant on a complement component.
    #[serde(rename = "a")]
    NonConstantComponent { vertices: Vec<usize>, quotients: Vec<String> },
    /// (b) an in/out arrow off the arcs.
    #[serde(rename = "b")]
    ArrowOutsideArcs { arrow: usize, vertex: usize },
    /// (c) an oriented edge off the arcs.
    #[serde(rename = "c")]
    OrientedEdgeOutsideArcs { edge: usize, from: usize, to: usize },
    /// (d) an arc that is not strictly increasing or not well formed.
    #[serde(rename = "d")]
    BadArc { arc: usize, reason: String },
    /// (e) arc membership disagrees with the local in/out rule.
    #[serde(rename = "e")]
    MembershipMismatch { vertex: usize, on_arcs: bool, has_incoming: bool, has_outgoing: bool },
}

impl Theorem1Violation {
    pub fn clause(&self) -> char {
        match self {
            Theorem1Violation::NonConstantComponent { .. } => 'a',
            Theorem1Violation::ArrowOutsideArcs { .. } => 'b',
            Theorem1Violation::OrientedEdgeOutsideArcs { .. } => 'c',
            Theorem1Violation::BadArc { .. } => 'd',
            Theorem1Violation::MembershipMismatch { .. } => 'e',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Theorem1Report {
    pub violations: Vec<Theorem1Violation>,
}

impl Theorem1Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn clause_passed(&self, c: char) -> bool {
        self.violations.iter().all(|v| v.clause() != c)
    }
}

/// Checks clause (d) and the well-formedness of every arc of a (possibly
/// hand-built) decomposition.
pub fn verify_decomposition(g: &DualGraph, d: &ArcDecomposition) -> Vec<Theorem1Violation> {
    let mut out = Vec::new();
    for (k, arc) in d.arcs.iter().enumerate() {
        let bad = |reason: String| Theorem1Violation::BadArc { arc: k, reason };
        let first = arc.vertices.first().copied();
        let last = arc.vertices.last().copied();
        match g.arrows.get(arc.in_arrow) {
            Some(a) if a.kind == ArrowKind::In && Some(a.v) == first => {}
            _ => out.push(bad("does not begin with a going-in arrow".into())),
        }
        match g.arrows.get(arc.out_arrow) {
            Some(a) if a.kind == ArrowKind::Out && Some(a.v) == last => {}
            _ => out.push(bad("does not end with a going-out arrow".into())),
        }
        if arc.edges.len() + 1 != arc.vertices.len() {
            out.push(bad("edge and vertex counts disagree".into()));
            continue;
        }
        for (j, &ei) in arc.edges.iter().enumerate() {
            let (u, w) = (arc.vertices[j], arc.vertices[j + 1]);
            match g.edges.get(ei) {
                Some(&(a, b)) if (a, b) == (u, w) || (b, a) == (u, w) => {
                    if g.vertex(u).q >= g.vertex(w).q {
                        out.push(bad(format!(
                            "edge {u}-{w} is not increasing ({} -> {})",
                            g.vertex(u).q,
                            g.vertex(w).q
                        )));
                    }
                }
                _ => out.push(bad(format!("edge {ei} does not join {u} and {w}"))),
            }
        }
    }
    out
}

/// Checks clauses (a)–(e) of the structure theorem for maximal arcs.
pub fn verify_theorem1(g: &DualGraph) -> Theorem1Report {
    let d = maximal_arcs(g);
    let mut violations = Vec::new();
    for c in &d.complement {
        if c.quotients.len() > 1 {
            violations.push(Theorem1Violation::NonConstantComponent {
                vertices: c.vertices.iter().copied().collect(),
                quotients: c.quotients.iter().map(|q| q.to_string()).collect(),
            });
        }
    }
    for (i, a) in g.arrows.iter().enumerate() {
        if a.kind != ArrowKind::Star && !d.arc_arrows.contains(&i) {
            violations.push(Theorem1Violation::ArrowOutsideArcs { arrow: i, vertex: a.v });
        }
    }
    for (i, a, b) in oriented_edges(g) {
        if !d.arc_edges.contains(&i) {
            violations.push(Theorem1Violation::OrientedEdgeOutsideArcs { edge: i, from: a, to: b });
        }
    }
    violations.extend(verify_decomposition(g, &d));
    let oriented = oriented_edges(g);
    for &v in g.vertices.keys() {
        let has_in = g.arrows_at(v).any(|(_, a)| a.kind == ArrowKind::In) || oriented.iter().any(|&(_, _, h)| h == v);
        let has_out = g.arrows_at(v).any(|(_, a)| a.kind == ArrowKind::Out) || oriented.iter().any(|&(_, t, _)| t == v);
        let on = d.arc_vertices.contains(&v);
        if on != (has_in && has_out) {
            violations.push(Theorem1Violation::MembershipMismatch { vertex: v, on_arcs: on, has_incoming: has_in, has_outgoing: has_out });
        }
    }
    Theorem1Report { violations }
}

/// A rupture component has positive genus or meets at least three other
/// components of the total transform.
pub fn is_rupture(g: &DualGraph, v: usize) -> bool {
    g.vertex(v).genus.unwrap_or(0) > 0 || g.degree(v) >= 3
}

/// Which vertex data an isomorphism must preserve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IsoOptions {
    pub quotients: bool,
    /// Compare self-intersections when both graphs carry them on every vertex.
    pub self_int: bool,
    /// Compare genera when both graphs carry them on every vertex.
    pub genus: bool,
    pub stars: StarMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarMode {
    /// Star arrows must match in number at every vertex.
    Count,
    /// Only the presence of at least one star at a vertex must match.
    Presence,
    Ignore,
}

impl Default for IsoOptions {
    fn default() -> Self {
        IsoOptions { quotients: true, self_int: true, genus: true, stars: StarMode::Count }
    }
}

impl IsoOptions {
    /// Shape only: edges and in/out arrows.
    pub fn shape() -> IsoOptions {
        IsoOptions { quotients: false, self_int: false, genus: false, stars: StarMode::Count }
    }
}

/// Finds a bijection preserving edges, arrow kinds, quotients and, where both
/// graphs state them, self-intersections and genera.
pub fn graph_isomorphic(a: &DualGraph, b: &DualGraph) -> Option<BTreeMap<usize, usize>> {
    graph_isomorphic_with(a, b, &IsoOptions::default())
}

pub fn graph_isomorphic_with(a: &DualGraph, b: &DualGraph, opts: &IsoOptions) -> Option<BTreeMap<usize, usize>> {
    iso_search(a, b, opts, &|_, _| true)
}

/// Isomorphism for a partially labelled drawing `b`: quotients are compared
/// only on the vertices of `b` listed in `labelled` (other options as given,
/// with `opts.quotients` ignored).
pub fn graph_isomorphic_partial(
    a: &DualGraph,
    b: &DualGraph,
    labelled: &BTreeSet<usize>,
    opts: &IsoOptions,
) -> Option<BTreeMap<usize, usize>> {
    let opts = IsoOptions { quotients: false, ..*opts };
    iso_search(a, b, &opts, &|v, w| !labelled.contains(&w) || a.vertex(v).q == b.vertex(w).q)
}

fn iso_search(
    a: &DualGraph,
    b: &DualGraph,
    opts: &IsoOptions,
    vertex_ok: &dyn Fn(usize, usize) -> bool,
) -> Option<BTreeMap<usize, usize>> {
    if a.len() != b.len() || a.edges.len() != b.edges.len() {
        return None;
    }
    let all_si = |g: &DualGraph| g.vertices.values().all(|v| v.self_int.is_some());
    let all_genus = |g: &DualGraph| g.vertices.values().all(|v| v.genus.is_some());
    let use_si = opts.self_int && all_si(a) && all_si(b);
    let use_genus = opts.genus && all_genus(a) && all_genus(b);

    let signature = |g: &DualGraph, v: &Vertex| -> String {
        let count = |k: ArrowKind| g.arrows_at(v.id).filter(|(_, x)| x.kind == k).count();
        let stars = match opts.stars {
            StarMode::Count => count(ArrowKind::Star),
            StarMode::Presence => usize::from(count(ArrowKind::Star) > 0),
            StarMode::Ignore => 0,
        };
        let mut s = format!("d{}i{}o{}s{}", g.edge_degree(v.id), count(ArrowKind::In), count(ArrowKind::Out), stars);
        if opts.quotients {
            let _ = write!(s, "q{}", v.q);
        }
        if use_si {
            let _ = write!(s, "e{}", v.self_int.unwrap());
        }
        if use_genus {
            let _ = write!(s, "g{}", v.genus.unwrap());
        }
        s
    };

    // Joint colour refinement so colours are comparable across graphs.
    let mut intern: HashMap<String, usize> = HashMap::new();
    let colour = |s: String, intern: &mut HashMap<String, usize>| -> usize {
        let n = intern.len();
        *intern.entry(s).or_insert(n)
    };
    let mut ca: BTreeMap<usize, usize> = a.vertices.values().map(|v| (v.id, colour(signature(a, v), &mut intern))).collect();
    let mut cb: BTreeMap<usize, usize> = b.vertices.values().map(|v| (v.id, colour(signature(b, v), &mut intern))).collect();
    for _ in 0..a.len() {
        let refine = |g: &DualGraph, c: &BTreeMap<usize, usize>, intern: &mut HashMap<String, usize>| {
            let mut out = BTreeMap::new();
            for &v in g.vertices.keys() {
                let mut nb: Vec<usize> = g.neighbors(v).into_iter().map(|w| c[&w]).collect();
                nb.sort_unstable();
                let key = format!("{}|{:?}", c[&v], nb);
                let n = intern.len();
                out.insert(v, *intern.entry(key).or_insert(n));
            }
            out
        };
        let na = refine(a, &ca, &mut intern);
        let nb = refine(b, &cb, &mut intern);
        let classes = |c: &BTreeMap<usize, usize>| c.values().collect::<BTreeSet<_>>().len();
        let stable = classes(&na) == classes(&ca) && classes(&nb) == classes(&cb);
        ca = na;
        cb = nb;
        if stable {
            break;
        }
    }
    let histogram = |c: &BTreeMap<usize, usize>| {
        let mut h: BTreeMap<usize, usize> = BTreeMap::new();
        for &x in c.values() {
            *h.entry(x).or_default() += 1;
        }
        h
    };
    if histogram(&ca) != histogram(&cb) {
        return None;
    }

    let edge_count = |g: &DualGraph| {
        let mut m: HashMap<(usize, usize), usize> = HashMap::new();
        for &(x, y) in &g.edges {
            *m.entry((x.min(y), x.max(y))).or_default() += 1;
        }
        m
    };
    let ea = edge_count(a);
    let eb = edge_count(b);
    let mult = |m: &HashMap<(usize, usize), usize>, x: usize, y: usize| m.get(&(x.min(y), x.max(y))).copied().unwrap_or(0);

    // Order a's vertices breadth-first so each has an already-mapped neighbour.
    let mut order = Vec::new();
    let mut seen = BTreeSet::new();
    for &s in a.vertices.keys() {
        if seen.insert(s) {
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                for w in a.neighbors(v) {
                    if seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    let bverts: Vec<usize> = b.vertices.keys().copied().collect();
    let mut map: BTreeMap<usize, usize> = BTreeMap::new();
    let mut used: BTreeSet<usize> = BTreeSet::new();

    fn search(
        k: usize,
        order: &[usize],
        bverts: &[usize],
        ca: &BTreeMap<usize, usize>,
        cb: &BTreeMap<usize, usize>,
        ok_pair: &dyn Fn(usize, usize, &BTreeMap<usize, usize>) -> bool,
        map: &mut BTreeMap<usize, usize>,
        used: &mut BTreeSet<usize>,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let v = order[k];
        for &w in bverts {
            if used.contains(&w) || ca[&v] != cb[&w] || !ok_pair(v, w, map) {
                continue;
            }
            map.insert(v, w);
            used.insert(w);
            if search(k + 1, order, bverts, ca, cb, ok_pair, map, used) {
                return true;
            }
            map.remove(&v);
            used.remove(&w);
        }
        false
    }
    let ok_pair = |v: usize, w: usize, map: &BTreeMap<usize, usize>| {
        vertex_ok(v, w) && map.iter().all(|(&x, &y)| mult(&ea, v, x) == mult(&eb, w, y))
    };
    if search(0, &order, &bverts, &ca, &cb, &ok_pair, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

/// Which pulled-back function a zero-intersection check refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionRole {
    F,
    G,
}

/// Vertices where `E_i · (F∘π) ≠ 0`: returns `(vertex, defect)` pairs, where
/// the defect is `self_int·m_i + Σ_adjacent m_j + Σ arrow multiplicities`.
/// Vertices lacking self-intersection or multiplicity data are skipped.
pub fn zero_intersection_defects(g: &DualGraph, role: FunctionRole) -> Vec<(usize, i64)> {
    let m = |v: &Vertex| match role {
        FunctionRole::F => v.m_f,
        FunctionRole::G => v.m_g,
    };
    let kind = match role {
        FunctionRole::F => ArrowKind::Out,
        FunctionRole::G => ArrowKind::In,
    };
    let mut out = Vec::new();
    'v: for v in g.vertices.values() {
        let (Some(si), Some(mv)) = (v.self_int, m(v)) else { continue };
        let mut total = si * mv as i64;
        for w in g.neighbors(v.id) {
            match m(g.vertex(w)) {
                Some(x) => total += x as i64,
                None => continue 'v,
            }
        }
        total += g.arrows_at(v.id).filter(|(_, a)| a.kind == kind).map(|(_, a)| a.mult as i64).sum::<i64>();
        if total != 0 {
            out.push((v.id, total));
        }
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct VertexRecord {
    id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    selfint: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    genus: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mf: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mg: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q: Option<Quotient>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    origin: Option<String>,
}

fn one() -> u64 {
    1
}

fn is_one(x: &u64) -> bool {
    *x == 1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ArrowRecord {
    v: usize,
    kind: ArrowKind,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    mult: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GraphRecord {
    vertices: Vec<VertexRecord>,
    #[serde(default)]
    edges: Vec<[usize; 2]>,
    #[serde(default)]
    arrows: Vec<ArrowRecord>,
}

impl Serialize for DualGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphRecord {
            vertices: self
                .vertices
                .values()
                .map(|v| VertexRecord {
                    id: v.id,
                    selfint: v.self_int,
                    genus: v.genus,
                    mf: v.m_f,
                    mg: v.m_g,
                    q: Some(v.q.clone()),
                    origin: v.origin.clone(),
                })
                .collect(),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            arrows: self.arrows.iter().map(|a| ArrowRecord { v: a.v, kind: a.kind, mult: a.mult }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DualGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let rec = GraphRecord::deserialize(d)?;
        let mut g = DualGraph::new();
        for v in rec.vertices {
            let q = match (v.q, v.mf, v.mg) {
                (Some(q), _, _) => q,
                (None, Some(f), Some(gm)) => Quotient::ratio(f, gm).map_err(D::Error::custom)?,
                _ => return Err(D::Error::custom(format!("vertex {} needs q or mf/mg", v.id))),
            };
            if g.vertices.contains_key(&v.id) {
                return Err(D::Error::custom(format!("duplicate vertex id {}", v.id)));
            }
            g.add_vertex(Vertex { id: v.id, self_int: v.selfint, genus: v.genus, m_f: v.mf, m_g: v.mg, q, origin: v.origin });
        }
        g.edges = rec.edges.into_iter().map(|[a, b]| (a, b)).collect();
        g.arrows = rec.arrows.into_iter().map(|a| Arrow { v: a.v, kind: a.kind, mult: a.mult }).collect();
        g.validate().map_err(D::Error::custom)?;
        Ok(g)
    }
}

/// Parses the structured graph format.
pub fn from_json(s: &str) -> Result<DualGraph, GraphError> {
    serde_json::from_str(s).map_err(|e| GraphError::Schema(e.to_string()))
}

/// Writes the structured graph format.
pub fn to_json(g: &DualGraph) -> String {
    serde_json::to_string_pretty(g).expect("graph serialization cannot fail")
}

/// Emits the graph in DOT, with oriented edges drawn forward and arrows as
/// half-edges ending at point nodes.
pub fn to_dot(g: &DualGraph) -> String {
    let mut s = String::from("graph G {\n  node [shape=circle];\n");
    for v in g.vertices.values() {
        let mut label = v.q.to_string();
        if let Some(si) = v.self_int {
            let _ = write!(label, "\\n{si}");
        }
        if let Some(genus) = v.genus.filter(|&x| x > 0) {
            let _ = write!(label, "\\n[{genus}]");
        }
        let _ = writeln!(s, "  v{} [label=\"{}\"];", v.id, label);
    }
    for (i, o) in derive_orientation(g).into_iter().enumerate() {
        let (a, b) = g.edges[i];
        let line = match o {
            EdgeOrientation::Forward => format!("  v{a} -- v{b} [dir=forward];"),
            EdgeOrientation::Backward => format!("  v{b} -- v{a} [dir=forward];"),
            EdgeOrientation::Unoriented => format!("  v{a} -- v{b};"),
        };
        let _ = writeln!(s, "{line}");
    }
    for (i, a) in g.arrows.iter().enumerate() {
        match a.kind {
            ArrowKind::In => {
                let _ = writeln!(s, "  a{i} [shape=point];\n  a{i} -- v{} [dir=forward];", a.v);
            }
            ArrowKind::Out => {
                let _ = writeln!(s, "  a{i} [shape=point];\n  v{} -- a{i} [dir=forward];", a.v);
            }
            ArrowKind::Star => {
                let _ = writeln!(s, "  a{i} [shape=star, label=\"\"];\n  v{} -- a{i};", a.v);
            }
        }
    }
    s.push_str("}\n");
    s
}
