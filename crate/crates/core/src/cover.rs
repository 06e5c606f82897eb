//! Hirzebruch–Jung resolution of cyclic covers `z^d = h(x, y)`.
//!
//! The branch curve `{h = 0}` is resolved together with the coordinate axes.
//! Above every exceptional component `E_v` of that base resolution the
//! normalized cover has `c_v` components, each a degree-`s_v` cover of `E_v`
//! ramified with index `e_v` along it. Above every double point of the total
//! transform the normalized cover has cyclic quotient (Hirzebruch–Jung)
//! singularities, which are resolved by bamboos computed from the lattice of
//! the local monomial model `z^d = x^a y^b`.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{hj_expand, mod_inverse, quotient_cmp, ArithError, Rat};
use crate::curve::{Branch, Role};
use crate::graph::{Arrow, ArrowKind, DualGraph, GraphError, Vertex};
use crate::resolve::{resolve_with_retry, AxisCurve, ResolutionOutcome, ResolveError, ResolveOptions};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error(transparent)]
    Resolve(#[from] ResolveError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid cover: {0}")]
    Precondition(String),
    #[error("inconsistent cover data: {0}")]
    Inconsistent(String),
}

/// A cyclic cover `z^d = h` over the resolution of `{x y h = 0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSpec {
    pub degree: u64,
    /// Resolution of the h-branches (discriminant role) plus the axes; the
    /// axis on the f side pulls back to `f`, the other to `g`.
    pub base: ResolutionOutcome,
}

impl CoverSpec {
    /// Resolves the branches of `h` (with multiplicities) together with the
    /// axes, `f_axis` becoming `f`.
    pub fn from_branches(
        degree: u64,
        h: &[(Branch, u64)],
        f_axis: AxisCurve,
        opts: &ResolveOptions,
        max_truncation: u32,
    ) -> Result<CoverSpec, CoverError> {
        if degree < 2 {
            return Err(CoverError::Precondition(format!("degree must be at least 2, got {degree}")));
        }
        if h.is_empty() {
            return Err(CoverError::Precondition("h needs at least one branch".into()));
        }
        let sys = crate::curve::TaggedSystem { f: vec![], g: vec![], extra: h.to_vec() };
        let opts = ResolveOptions { with_axes: Some(f_axis), ..opts.clone() };
        let base = resolve_with_retry(&sys, &opts, max_truncation)?;
        Ok(CoverSpec { degree, base })
    }

    fn m_h(&self, v: usize) -> u64 {
        self.base.m_h[&v]
    }
}

/// Covering data above one base vertex; `components · sheets · ramification = d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SheetData {
    pub vertex: usize,
    pub m_h: u64,
    pub components: u64,
    pub sheets: u64,
    pub ramification: u64,
}

/// Multiplicity of `h` on the other curve at each puncture of `E_v`:
/// neighbours, discriminant branches, and axes (which count 0).
fn punctures(spec: &CoverSpec, v: usize) -> Vec<u64> {
    let mut out: Vec<u64> = spec.base.graph.neighbors(v).into_iter().map(|w| spec.m_h(w)).collect();
    for b in spec.base.branches.iter().filter(|b| b.vertex == v) {
        out.push(if b.role == Role::Delta { b.mult } else { 0 });
    }
    out
}

/// The local monodromy of the cover around `E_v` and its punctures decides
/// how the `gcd(d, m_v)` local sheets split into global components.
pub fn components_above(spec: &CoverSpec) -> Vec<SheetData> {
    let d = spec.degree;
    spec.base
        .graph
        .vertices
        .keys()
        .map(|&v| {
            let m = spec.m_h(v);
            let g = d.gcd(&m);
            let c = punctures(spec, v).into_iter().fold(g, |acc, p| acc.gcd(&p));
            SheetData { vertex: v, m_h: m, components: c, sheets: g / c, ramification: d / g }
        })
        .collect()
}

/// Normal form of `z^d = x^a y^b · unit` after normalization: `points`
/// cyclic quotient singularities of type `(n, q)` (smooth when `n = 1`).
/// `rays` lists the primitive lattice vectors of the bamboo, from the ray of
/// `{x = 0}` to the ray of `{y = 0}`, in coordinates where the valuation of
/// `x^A y^B` at ray `(p, r)` is `pA + rB`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalModel {
    pub points: u64,
    pub n: u64,
    pub q: u64,
    pub bamboo: Vec<i64>,
    pub rays: Vec<(i64, i64)>,
}

/// Where a Hirzebruch–Jung point sits in the base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HJLocation {
    Edge(usize, usize),
    Branch { vertex: usize, branch: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HJPoint {
    pub location: HJLocation,
    pub n: u64,
    pub q: u64,
    pub sheet_count: u64,
}

/// Lattice normalization of the monomial model `z^d = x^m1 y^m2`.
pub fn local_model_at_double_point(d: u64, m1: u64, m2: u64) -> Result<LocalModel, CoverError> {
    if d < 2 {
        return Err(CoverError::Precondition(format!("degree must be at least 2, got {d}")));
    }
    let g = d.gcd(&m1).gcd(&m2);
    let (dd, a, b) = ((d / g) as i64, (m1 / g) as i64, (m2 / g) as i64);
    let alpha = a.gcd(&dd);
    let beta = b.gcd(&dd);
    let (k1, k2) = (dd / alpha, dd / beta);
    let n = dd / (alpha * beta);
    // The dual lattice is {(p, r) : a p + b r ≡ 0 mod dd}; its points with
    // r = alpha (the least positive value) are (x + j k1, alpha).
    let x = if k1 == 1 {
        0
    } else {
        let inv = mod_inverse((a / alpha).rem_euclid(k1), k1)
            .ok_or_else(|| CoverError::Inconsistent(format!("no inverse of {} mod {k1}", a / alpha)))?;
        (-b * inv).rem_euclid(k1)
    };
    let rv = (k1, 0);
    let rw = (0, k2);
    if (n * x) % k1 != 0 {
        return Err(CoverError::Inconsistent(format!("lattice reduction failed for ({d}, {m1}, {m2})")));
    }
    let q = n * x / k1;
    if n == 1 {
        return Ok(LocalModel { points: g, n: 1, q: 0, bamboo: vec![], rays: vec![rv, rw] });
    }
    let s = hj_expand(n, q)?;
    let mut rays = vec![rv, (x, alpha)];
    for &bi in s.coeffs() {
        let (w1, w0) = (rays[rays.len() - 1], rays[rays.len() - 2]);
        rays.push((bi * w1.0 - w0.0, bi * w1.1 - w0.1));
    }
    if rays.last() != Some(&rw) {
        return Err(CoverError::Inconsistent(format!("bamboo for ({d}, {m1}, {m2}) does not close up")));
    }
    Ok(LocalModel { points: g, n: n as u64, q: q as u64, bamboo: s.coeffs().to_vec(), rays })
}

/// Provenance of a vertex of a cover graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum VertexOrigin {
    /// Component `sheet` above base vertex `vertex`.
    Base { vertex: usize, sheet: u64 },
    /// Position (from 1) inside the bamboo of HJ point `point`.
    Bamboo { point: usize, position: usize },
}

/// One bamboo above one Hirzebruch–Jung point (possibly empty for smooth
/// points), running from `start` towards `end` (`None`: a strand of `h`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bamboo {
    pub point: usize,
    pub sheet: u64,
    pub start: usize,
    pub end: Option<usize>,
    pub vertices: Vec<usize>,
}

/// A strict-transform germ of `{h = 0}` upstairs, attached to `vertex`
/// with multiplicity `mult` of `h` along it. Strands are not part of the
/// total transform of `{fg = 0}` and so are not drawn as arrows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Strand {
    pub vertex: usize,
    pub mult: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverGraph {
    pub graph: DualGraph,
    pub origins: BTreeMap<usize, VertexOrigin>,
    pub points: Vec<HJPoint>,
    pub bamboos: Vec<Bamboo>,
    pub strands: Vec<Strand>,
    /// Multiplicity of `h` along each vertex.
    pub m_h: BTreeMap<usize, u64>,
    /// The base graph, for comparing quotients.
    pub base: DualGraph,
}

#[derive(Debug, Clone, Copy, Default)]
struct M3 {
    f: u64,
    g: u64,
    h: u64,
}

impl M3 {
    fn total(&self) -> u64 {
        self.f + self.g + self.h
    }
}

struct Builder {
    mults: Vec<M3>,
    self_int: Vec<Option<i64>>,
    genus: Vec<u64>,
    origin: Vec<VertexOrigin>,
    edges: Vec<(usize, usize)>,
    arrows: Vec<Arrow>,
    strands: Vec<Strand>,
    bamboos: Vec<Bamboo>,
}

impl Builder {
    fn push(&mut self, m: M3, self_int: Option<i64>, genus: u64, origin: VertexOrigin) -> usize {
        self.mults.push(m);
        self.self_int.push(self_int);
        self.genus.push(genus);
        self.origin.push(origin);
        self.mults.len() - 1
    }
}

/// Solves `m_{j-1} − b_j m_j + m_{j+1} = 0` for the interior of a bamboo
/// with the given boundary values.
pub fn solve_bamboo(b: &[i64], left: &Rat, right: &Rat) -> Vec<Rat> {
    // m_j = A_j·left + B_j·m_1; propagate, then fix m_1 from the right end.
    let k = b.len();
    if k == 0 {
        return vec![];
    }
    let mut a = vec![(Rat::one(), Rat::zero()), (Rat::zero(), Rat::one())];
    for j in 1..=k {
        let bj = Rat::from_integer(b[j - 1].into());
        let next = (&bj * &a[j].0 - &a[j - 1].0, &bj * &a[j].1 - &a[j - 1].1);
        a.push(next);
    }
    let (ak, bk) = &a[k + 1];
    let m1 = (right - ak * left) / bk;
    (1..=k).map(|j| &a[j].0 * left + &a[j].1 * &m1).collect()
}

/// Builds the Hirzebruch–Jung resolution graph(s) of the cover, one per
/// connected component of the normalized germ.
pub fn assemble_cover_graph(spec: &CoverSpec) -> Result<Vec<CoverGraph>, CoverError> {
    let d = spec.degree;
    let base = &spec.base.graph;
    let sheets = components_above(spec);
    let mut b = Builder {
        mults: vec![],
        self_int: vec![],
        genus: vec![],
        origin: vec![],
        edges: vec![],
        arrows: vec![],
        strands: vec![],
        bamboos: vec![],
    };
    let mut up: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut bm: BTreeMap<usize, M3> = BTreeMap::new();
    for sd in &sheets {
        let v = base.vertex(sd.vertex);
        let m = M3 { f: v.m_f.unwrap_or(0), g: v.m_g.unwrap_or(0), h: sd.m_h };
        bm.insert(sd.vertex, m);
        let e = sd.ramification;
        let punct = punctures(spec, sd.vertex);
        // Euler characteristic of one component: s(2 − n) + points over punctures.
        let over: u64 = punct.iter().map(|&p| d.gcd(&sd.m_h).gcd(&p)).sum();
        if over % sd.components != 0 {
            return Err(CoverError::Inconsistent(format!("punctures of E{} do not split evenly", sd.vertex)));
        }
        let chi = sd.sheets as i64 * (2 - punct.len() as i64) + (over / sd.components) as i64;
        if chi > 2 || (2 - chi) % 2 != 0 {
            return Err(CoverError::Inconsistent(format!("Euler characteristic {chi} above E{}", sd.vertex)));
        }
        let genus = ((2 - chi) / 2) as u64;
        let ids = (0..sd.components)
            .map(|k| {
                b.push(
                    M3 { f: e * m.f, g: e * m.g, h: e * m.h },
                    None,
                    genus,
                    VertexOrigin::Base { vertex: sd.vertex, sheet: k },
                )
            })
            .collect();
        up.insert(sd.vertex, ids);
    }
    let comp = |up: &BTreeMap<usize, Vec<usize>>, v: usize, j: u64| {
        let ids = &up[&v];
        ids[(j % ids.len() as u64) as usize]
    };

    let mut points = Vec::new();
    let add_bamboo = |b: &mut Builder,
                          points: &mut Vec<HJPoint>,
                          loc: HJLocation,
                          model: &LocalModel,
                          ends: (&M3, &M3),
                          starts: Vec<(usize, Option<usize>)>|
     -> Result<(), CoverError> {
        let pid = points.len();
        points.push(HJPoint { location: loc, n: model.n, q: model.q, sheet_count: model.points });
        let interior = &model.rays[1..model.rays.len() - 1];
        for (j, (start, end)) in starts.into_iter().enumerate() {
            let mut prev = start;
            let mut verts = Vec::new();
            for (pos, (&(p, r), &bi)) in interior.iter().zip(&model.bamboo).enumerate() {
                let (p, r) = (p as u64, r as u64);
                let m = M3 {
                    f: p * ends.0.f + r * ends.1.f,
                    g: p * ends.0.g + r * ends.1.g,
                    h: p * ends.0.h + r * ends.1.h,
                };
                let id = b.push(m, Some(-bi), 0, VertexOrigin::Bamboo { point: pid, position: pos + 1 });
                b.edges.push((prev, id));
                verts.push(id);
                prev = id;
            }
            match end {
                Some(w) => b.edges.push((prev, w)),
                None => {
                    let (_, r) = *model.rays.last().unwrap();
                    b.strands.push(Strand { vertex: prev, mult: r as u64 * ends.1.h });
                }
            }
            b.bamboos.push(Bamboo { point: pid, sheet: j as u64, start, end, vertices: verts });
        }
        Ok(())
    };

    for &(v, w) in &base.edges {
        let model = local_model_at_double_point(d, bm[&v].h, bm[&w].h)?;
        let starts = (0..model.points).map(|j| (comp(&up, v, j), Some(comp(&up, w, j)))).collect();
        add_bamboo(&mut b, &mut points, HJLocation::Edge(v, w), &model, (&bm[&v], &bm[&w]), starts)?;
    }
    for (idx, br) in spec.base.branches.iter().enumerate() {
        let v = br.vertex;
        match br.role {
            Role::Delta => {
                let model = local_model_at_double_point(d, bm[&v].h, br.mult)?;
                let strand = M3 { f: 0, g: 0, h: br.mult };
                let starts = (0..model.points).map(|j| (comp(&up, v, j), None)).collect();
                add_bamboo(&mut b, &mut points, HJLocation::Branch { vertex: v, branch: idx }, &model, (&bm[&v], &strand), starts)?;
            }
            Role::F | Role::G => {
                let kind = if br.role == Role::F { ArrowKind::Out } else { ArrowKind::In };
                for j in 0..d.gcd(&bm[&v].h) {
                    b.arrows.push(Arrow { v: comp(&up, v, j), kind, mult: br.mult });
                }
            }
        }
    }

    // Self-intersections of the components above base vertices from
    // E · (x y h)∘R = 0, which holds since x y h vanishes on every E.
    let n = b.mults.len();
    let mut nb_sum = vec![0u64; n];
    for &(x, y) in &b.edges {
        nb_sum[x] += b.mults[y].total();
        nb_sum[y] += b.mults[x].total();
    }
    for a in &b.arrows {
        nb_sum[a.v] += a.mult;
    }
    for s in &b.strands {
        nb_sum[s.vertex] += s.mult;
    }
    for i in 0..n {
        let mt = b.mults[i].total();
        match b.self_int[i] {
            None => {
                if mt == 0 || nb_sum[i] % mt != 0 {
                    return Err(CoverError::Inconsistent(format!("non-integral self-intersection at vertex {i}")));
                }
                b.self_int[i] = Some(-((nb_sum[i] / mt) as i64));
            }
            Some(e) => {
                if e * mt as i64 + nb_sum[i] as i64 != 0 {
                    return Err(CoverError::Inconsistent(format!("bamboo vertex {i} violates zero intersection")));
                }
            }
        }
    }

    // Independent check of the lattice multiplicities: the tridiagonal
    // system with the boundary values must reproduce them.
    for bam in &b.bamboos {
        if bam.vertices.is_empty() {
            continue;
        }
        let bs: Vec<i64> = bam.vertices.iter().map(|&i| -b.self_int[i].unwrap()).collect();
        let fields: [fn(&M3) -> u64; 3] = [|m| m.f, |m| m.g, |m| m.h];
        for (k, field) in fields.iter().enumerate() {
            let left = Rat::from_integer(field(&b.mults[bam.start]).into());
            let right = match bam.end {
                Some(w) => Rat::from_integer(field(&b.mults[w]).into()),
                None if k == 2 => {
                    let s = b.strands.iter().find(|s| s.vertex == *bam.vertices.last().unwrap()).unwrap();
                    Rat::from_integer(s.mult.into())
                }
                None => Rat::zero(),
            };
            let sol = solve_bamboo(&bs, &left, &right);
            for (&i, s) in bam.vertices.iter().zip(&sol) {
                if *s != Rat::from_integer(field(&b.mults[i]).into()) {
                    return Err(CoverError::Inconsistent(format!("bamboo multiplicities disagree at vertex {i}")));
                }
            }
        }
    }

    // Split into connected germs.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for &(x, y) in &b.edges {
        let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
        if rx != ry {
            parent[rx.max(ry)] = rx.min(ry);
        }
    }
    let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &r) in roots.iter().enumerate() {
        groups.entry(r).or_default().push(i);
    }
    let mut out = Vec::new();
    for members in groups.values() {
        let map: BTreeMap<usize, usize> = members.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut g = DualGraph::new();
        let mut origins = BTreeMap::new();
        let mut m_h = BTreeMap::new();
        for (&i, &k) in &map {
            let m = b.mults[i];
            let mut v = Vertex::with_mults(k, b.self_int[i].unwrap(), b.genus[i], m.f, m.g)?;
            v.origin = Some(match &b.origin[i] {
                VertexOrigin::Base { vertex, sheet } if up[vertex].len() > 1 => format!("E{vertex}'({sheet})"),
                VertexOrigin::Base { vertex, .. } => format!("E{vertex}'"),
                VertexOrigin::Bamboo { point, position } => format!("P{point}.{position}"),
            });
            g.add_vertex(v);
            origins.insert(k, b.origin[i].clone());
            m_h.insert(k, m.h);
        }
        g.edges = b.edges.iter().filter(|(x, _)| map.contains_key(x)).map(|(x, y)| (map[x], map[y])).collect();
        g.arrows = b.arrows.iter().filter(|a| map.contains_key(&a.v)).map(|a| Arrow { v: map[&a.v], ..a.clone() }).collect();
        let strands = b.strands.iter().filter(|s| map.contains_key(&s.vertex)).map(|s| Strand { vertex: map[&s.vertex], mult: s.mult }).collect();
        let bamboos = b
            .bamboos
            .iter()
            .filter(|x| map.contains_key(&x.start))
            .map(|x| Bamboo {
                point: x.point,
                sheet: x.sheet,
                start: map[&x.start],
                end: x.end.map(|e| map[&e]),
                vertices: x.vertices.iter().map(|v| map[v]).collect(),
            })
            .collect();
        g.validate()?;
        out.push(CoverGraph { graph: g, origins, points: points.clone(), bamboos, strands, m_h, base: base.clone() });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Theorem2Violation {
    /// A component above a base vertex changed quotient.
    QuotientChanged { vertex: usize, base_vertex: usize },
    /// A bamboo between equal quotients (or on a strand of h) is not constant.
    NotConstant { bamboo: usize, vertex: usize },
    /// A bamboo between distinct quotients is not strictly monotone
    /// strictly inside the endpoint interval.
    NotInterpolating { bamboo: usize, vertex: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct Theorem2Report {
    pub violations: Vec<Theorem2Violation>,
}

impl Theorem2Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Quotient preservation on components above base vertices, and constancy
/// or strict interpolation along every bamboo.
pub fn check_theorem2(cg: &CoverGraph) -> Theorem2Report {
    let mut r = Theorem2Report::default();
    let q = |v: usize| cg.graph.vertex(v).q.clone();
    for (&v, o) in &cg.origins {
        if let VertexOrigin::Base { vertex, .. } = o {
            if cg.base.vertex(*vertex).q != q(v) {
                r.violations.push(Theorem2Violation::QuotientChanged { vertex: v, base_vertex: *vertex });
            }
        }
    }
    for (k, bam) in cg.bamboos.iter().enumerate() {
        let qs = q(bam.start);
        let qe = bam.end.map(q).unwrap_or_else(|| qs.clone());
        if qs == qe {
            for &v in &bam.vertices {
                if q(v) != qs {
                    r.violations.push(Theorem2Violation::NotConstant { bamboo: k, vertex: v });
                }
            }
            continue;
        }
        let mut seq: Vec<usize> = bam.vertices.clone();
        let (lo, hi) = if qs < qe { (qs, qe) } else { (qe, qs) };
        if quotient_cmp(&q(bam.start), &lo).is_ne() {
            seq.reverse();
        }
        let mut prev = lo.clone();
        for &v in &seq {
            let qv = q(v);
            if qv <= prev || qv >= hi {
                r.violations.push(Theorem2Violation::NotInterpolating { bamboo: k, vertex: v });
            }
            prev = qv;
        }
    }
    r
}

/// The cover as a one-vertex-per-component sanity summary: germ count.
pub fn germ_count(spec: &CoverSpec) -> Result<usize, CoverError> {
    Ok(assemble_cover_graph(spec)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat_int, Quotient};
    use crate::graph::{verify_theorem1, zero_intersection_defects, FunctionRole};

    fn line(c: i64) -> Branch {
        Branch::poly(&[(1, 1)], &[(1, c)])
    }

    #[test]
    fn a1_model() {
        let m = local_model_at_double_point(2, 1, 1).unwrap();
        assert_eq!((m.points, m.n, m.q), (1, 2, 1));
        assert_eq!(m.bamboo, vec![2]);
    }

    #[test]
    fn a2_and_type_31() {
        assert_eq!(local_model_at_double_point(3, 1, 1).unwrap().bamboo, vec![2, 2]);
        assert_eq!(local_model_at_double_point(3, 1, 2).unwrap().bamboo, vec![3]);
    }

    #[test]
    fn split_model_is_smooth() {
        let m = local_model_at_double_point(2, 2, 0).unwrap();
        assert_eq!((m.points, m.n), (2, 1));
        assert!(m.bamboo.is_empty());
    }

    #[test]
    fn rejects_small_degree() {
        assert!(local_model_at_double_point(1, 1, 1).is_err());
    }

    #[test]
    fn bamboo_solver() {
        // [2,2] between 0 and 3 is linear: 1, 2.
        assert_eq!(solve_bamboo(&[2, 2], &rat_int(0), &rat_int(3)), vec![rat_int(1), rat_int(2)]);
    }

    #[test]
    fn ramified_disc() {
        // h = a line through the origin: one blow-up, m_h = 1.
        let spec = CoverSpec::from_branches(2, &[(line(1), 1)], AxisCurve::XZero, &ResolveOptions::default(), 64).unwrap();
        let s = components_above(&spec);
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].components, s[0].ramification), (1, 2));
    }

    #[test]
    fn trivial_monodromy_splits() {
        let spec = CoverSpec::from_branches(2, &[(line(1), 2)], AxisCurve::XZero, &ResolveOptions::default(), 64).unwrap();
        let s = components_above(&spec);
        assert_eq!(s[0].components, 2);
        assert_eq!(assemble_cover_graph(&spec).unwrap().len(), 2);
    }

    #[test]
    fn cover_of_a_line_pencil() {
        // z^2 = (y − x)(y − 2x): base is one vertex; the cover has one
        // component, ramified, with two A1 strands; x, y give Out and In.
        let spec = CoverSpec::from_branches(2, &[(line(1), 1), (line(2), 1)], AxisCurve::XZero, &ResolveOptions::default(), 64).unwrap();
        let cgs = assemble_cover_graph(&spec).unwrap();
        assert_eq!(cgs.len(), 1);
        let cg = &cgs[0];
        assert!(check_theorem2(cg).passed());
        assert!(verify_theorem1(&cg.graph).passed());
        assert!(zero_intersection_defects(&cg.graph, FunctionRole::F).is_empty());
        assert!(zero_intersection_defects(&cg.graph, FunctionRole::G).is_empty());
        for v in cg.graph.vertices.values() {
            assert_eq!(v.q, Quotient::frac(1, 1));
            assert_eq!(v.genus, Some(0));
        }
    }
}
