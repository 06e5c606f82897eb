//! Blowing down `−1` curves: contraction steps, the minimal model of a good
//! resolution, and the behaviour of maximal arcs under contraction.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::arith::Quotient;
use crate::graph::{maximal_arcs, verify_theorem1, Arrow, DualGraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContractError {
    #[error("vertex {0} is not contractible: {1}")]
    NotContractible(usize, String),
    #[error("contracting vertex {0} would create a self-loop")]
    GeometryViolation(usize),
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
}

/// One blow-down.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContractionStep {
    pub contracted_vertex: usize,
    /// Former neighbours with their new self-intersection.
    pub neighbor_updates: Vec<(usize, i64)>,
    /// New edge between the two former neighbours, if any.
    pub merged_edge: Option<(usize, usize)>,
    /// Number of arrows moved onto the unique neighbour.
    pub moved_arrows: usize,
}

/// Why `v` cannot be blown down, or `None` if it can.
pub fn contraction_obstacle(g: &DualGraph, v: usize) -> Option<String> {
    let vx = g.vertices.get(&v)?;
    if vx.self_int != Some(-1) {
        return Some(format!("self-intersection {:?} is not -1", vx.self_int));
    }
    if vx.genus.unwrap_or(0) != 0 {
        return Some("positive genus".into());
    }
    if g.degree(v) > 2 {
        return Some(format!("rupture vertex of degree {}", g.degree(v)));
    }
    if g.len() == 1 {
        return Some("last remaining component".into());
    }
    let nb = g.neighbors(v);
    if nb.is_empty() {
        return Some("isolated component".into());
    }
    if nb.len() == 2 && nb[0] == nb[1] {
        return Some("double edge to a single neighbour".into());
    }
    None
}

pub fn is_contractible(g: &DualGraph, v: usize) -> bool {
    contraction_obstacle(g, v).is_none()
}

/// Contracts `v`; neighbours gain `+1`, two neighbours become adjacent, and
/// arrows on `v` move to its unique neighbour. Quotients and multiplicities
/// of the surviving vertices are untouched.
pub fn blow_down_once(g: &DualGraph, v: usize) -> Result<(DualGraph, ContractionStep), ContractError> {
    if !g.vertices.contains_key(&v) {
        return Err(ContractError::UnknownVertex(v));
    }
    if let Some(reason) = contraction_obstacle(g, v) {
        if reason.starts_with("double edge") {
            return Err(ContractError::GeometryViolation(v));
        }
        return Err(ContractError::NotContractible(v, reason));
    }
    let nb = g.neighbors(v);
    let mut out = g.clone();
    out.vertices.remove(&v);
    out.edges.retain(|&(a, b)| a != v && b != v);
    let mut updates = Vec::new();
    for &w in &nb {
        let x = out.vertices.get_mut(&w).unwrap();
        let s = x.self_int.map(|s| s + 1);
        x.self_int = s;
        updates.push((w, s.unwrap_or(0)));
    }
    let merged = if nb.len() == 2 {
        out.edges.push((nb[0], nb[1]));
        Some((nb[0], nb[1]))
    } else {
        None
    };
    let mut moved = 0;
    out.arrows = g
        .arrows
        .iter()
        .map(|a| {
            if a.v == v {
                moved += 1;
                Arrow { v: nb[0], ..a.clone() }
            } else {
                a.clone()
            }
        })
        .collect();
    Ok((out, ContractionStep { contracted_vertex: v, neighbor_updates: updates, merged_edge: merged, moved_arrows: moved }))
}

/// Blows up the double point of edge `idx`: a new genus-0 `−1` vertex with
/// multiplicities `m_a + m_b` is inserted between the endpoints, whose
/// self-intersections drop by one. Returns the new graph and the new id.
pub fn blow_up_edge(g: &DualGraph, idx: usize) -> Result<(DualGraph, usize), ContractError> {
    let &(a, b) = g.edges.get(idx).ok_or(ContractError::UnknownVertex(idx))?;
    let (va, vb) = (&g.vertices[&a], &g.vertices[&b]);
    let sum = |x: Option<u64>, y: Option<u64>| Some(x? + y?);
    let (m_f, m_g) = (sum(va.m_f, vb.m_f), sum(va.m_g, vb.m_g));
    let q = match (m_f, m_g) {
        (Some(f), Some(gm)) => Quotient::ratio(f, gm).map_err(|e| ContractError::NotContractible(idx, e.to_string()))?,
        _ => return Err(ContractError::NotContractible(idx, "endpoint multiplicities unknown".into())),
    };
    let id = g.vertices.keys().next_back().map_or(0, |m| m + 1);
    let mut out = g.clone();
    for w in [a, b] {
        let x = out.vertices.get_mut(&w).unwrap();
        x.self_int = x.self_int.map(|s| s - 1);
    }
    out.add_vertex(Vertex { id, self_int: Some(-1), genus: Some(0), m_f, m_g, q, origin: None });
    out.edges.remove(idx);
    out.edges.push((a, id));
    out.edges.push((id, b));
    Ok((out, id))
}

/// Contracts eligible vertices, lowest id first, until none remains.
pub fn minimal_model(g: &DualGraph) -> Result<(DualGraph, Vec<ContractionStep>), ContractError> {
    minimal_model_by(g, |cands| cands[0])
}

/// Like [`minimal_model`] but choosing among eligible vertices at random.
pub fn minimal_model_seeded(g: &DualGraph, seed: u64) -> Result<(DualGraph, Vec<ContractionStep>), ContractError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    minimal_model_by(g, move |cands| *cands.choose(&mut rng).unwrap())
}

/// Applies the given vertex order, skipping nothing: every listed vertex
/// must be contractible when its turn comes.
pub fn contract_in_order(g: &DualGraph, order: &[usize]) -> Result<(DualGraph, Vec<ContractionStep>), ContractError> {
    let mut cur = g.clone();
    let mut steps = Vec::new();
    for &v in order {
        let (next, step) = blow_down_once(&cur, v)?;
        cur = next;
        steps.push(step);
    }
    Ok((cur, steps))
}

fn minimal_model_by(g: &DualGraph, mut pick: impl FnMut(&[usize]) -> usize) -> Result<(DualGraph, Vec<ContractionStep>), ContractError> {
    let mut cur = g.clone();
    let mut steps = Vec::new();
    loop {
        let cands: Vec<usize> = cur.vertices.keys().copied().filter(|&v| is_contractible(&cur, v)).collect();
        if cands.is_empty() {
            return Ok((cur, steps));
        }
        let v = pick(&cands);
        let (next, step) = blow_down_once(&cur, v)?;
        cur = next;
        steps.push(step);
    }
}

/// The local shape of one contraction relative to the maximal arcs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ContractionShape {
    /// Off the arcs, one neighbour.
    OffArcLeaf,
    /// Off the arcs, two unoriented edges merged into one.
    OffArcBridge,
    /// Two arc edges merged into one arc edge.
    ArcInterior,
    /// In-arrow, vertex, edge: the in-arrow moves to the neighbour.
    ArcInEnd,
    /// Edge, vertex, out-arrow: the out-arrow moves to the neighbour.
    ArcOutEnd,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepTransport {
    pub vertex: usize,
    pub shape: Option<ContractionShape>,
    pub problems: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArcTransportReport {
    pub steps: Vec<StepTransport>,
    pub final_matches: bool,
}

impl ArcTransportReport {
    pub fn passed(&self) -> bool {
        self.final_matches && self.steps.iter().all(|s| s.shape.is_some() && s.problems.is_empty())
    }
}

fn pair(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn arc_edge_pairs(g: &DualGraph, edges: &BTreeSet<usize>) -> Vec<(usize, usize)> {
    let mut v: Vec<(usize, usize)> = edges.iter().map(|&i| pair(g.edges[i].0, g.edges[i].1)).collect();
    v.sort();
    v
}

/// Replays `steps` on `before`, checking that each contraction maps the
/// union of maximal arcs onto the new union, leaves the complement
/// unchanged apart from the removed vertex, keeps Theorem 1 valid, and has
/// one of the admissible local shapes; finally compares with `after`.
pub fn check_arc_transport(before: &DualGraph, after: &DualGraph, steps: &[ContractionStep]) -> ArcTransportReport {
    let mut cur = before.clone();
    let mut out = Vec::new();
    for step in steps {
        let v = step.contracted_vertex;
        let mut problems = Vec::new();
        let a0 = maximal_arcs(&cur);
        let next = match blow_down_once(&cur, v) {
            Ok((n, _)) => n,
            Err(e) => {
                out.push(StepTransport { vertex: v, shape: None, problems: vec![e.to_string()] });
                return ArcTransportReport { steps: out, final_matches: false };
            }
        };
        let a1 = maximal_arcs(&next);
        let on_arc = a0.arc_vertices.contains(&v);
        let nb = cur.neighbors(v);
        let arrows_here: Vec<&Arrow> = cur.arrows.iter().filter(|a| a.v == v).collect();
        let shape = if !on_arc {
            match nb.len() {
                1 if arrows_here.is_empty() => Some(ContractionShape::OffArcLeaf),
                2 => Some(ContractionShape::OffArcBridge),
                _ => None,
            }
        } else {
            match (nb.len(), arrows_here.first().map(|a| a.kind)) {
                (2, None) => Some(ContractionShape::ArcInterior),
                (1, Some(crate::graph::ArrowKind::In)) => Some(ContractionShape::ArcInEnd),
                (1, Some(crate::graph::ArrowKind::Out)) => Some(ContractionShape::ArcOutEnd),
                _ => None,
            }
        };
        // The image of the arc union is the new arc union.
        let mut img_v = a0.arc_vertices.clone();
        img_v.remove(&v);
        if img_v != a1.arc_vertices {
            problems.push(format!("arc vertices {:?} do not map onto {:?}", img_v, a1.arc_vertices));
        }
        let mut img_e: Vec<(usize, usize)> = arc_edge_pairs(&cur, &a0.arc_edges).into_iter().filter(|&(a, b)| a != v && b != v).collect();
        if shape == Some(ContractionShape::ArcInterior) {
            img_e.push(pair(nb[0], nb[1]));
        }
        img_e.sort();
        if img_e != arc_edge_pairs(&next, &a1.arc_edges) {
            problems.push("arc edges do not map onto the new arc edges".into());
        }
        // Complement components: the same vertex sets minus v, same quotients.
        // A component reduced to boundary vertices of the arcs with no edge
        // left (a leaf hanging off an arc) disappears; a bridge leaves the
        // merged edge behind.
        let comp0: BTreeMap<BTreeSet<usize>, _> = a0
            .complement
            .iter()
            .filter(|c| {
                (nb.len() == 2 && c.vertices.contains(&v))
                    || c.edges.iter().any(|&i| cur.edges[i].0 != v && cur.edges[i].1 != v)
                    || c.vertices.iter().any(|&w| w != v && !a1.arc_vertices.contains(&w))
            })
            .map(|c| {
                let mut s = c.vertices.clone();
                s.remove(&v);
                (s, c.quotients.clone())
            })
            .collect();
        let comp1: BTreeMap<BTreeSet<usize>, _> = a1.complement.iter().map(|c| (c.vertices.clone(), c.quotients.clone())).collect();
        if comp0 != comp1 {
            problems.push(format!("complement components {:?} are not carried onto {:?}", comp0.keys().collect::<Vec<_>>(), comp1.keys().collect::<Vec<_>>()));
        }
        if !verify_theorem1(&next).passed() {
            problems.push("Theorem 1 fails after the contraction".into());
        }
        out.push(StepTransport { vertex: v, shape, problems });
        cur = next;
    }
    let final_matches = cur == *after;
    ArcTransportReport { steps: out, final_matches }
}
