//! End-to-end checks of the worked examples and the property suites, each
//! returning a one-line summary or the first failure found.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use hironaka::arith::Quotient;
use hironaka::cli::fixtures::{
    cover_from_text, drawing, resolve_system_text, EXAMPLE1_DELTA_PLUS, EXAMPLE1_SYSTEM, EXAMPLE2_COVER,
    EXAMPLE3_PHI1_COVER, EXAMPLE3_PHI2_COVER,
};
use hironaka::cli::random::{random_cover_of, random_system};
use hironaka::cli::{fuzz, MAX_TRUNCATION};
use hironaka::contract::{blow_up_edge, check_arc_transport, minimal_model, minimal_model_seeded};
use hironaka::cover::{assemble_cover_graph, check_theorem2, CoverGraph, CoverSpec, VertexOrigin};
use hironaka::graph::{graph_isomorphic, maximal_arcs, verify_theorem1, ArrowKind, DualGraph};
use hironaka::resolve::{resolve_with_retry, ResolveOptions};

use super::{curvetta_suite, hj_suite, local_model_suite, reparametrization_suite, zero_intersection_oracle};

pub type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(s: &str) -> Quotient {
    s.parse().unwrap()
}

fn quotients(list: &[&str]) -> Vec<Quotient> {
    let mut v: Vec<Quotient> = list.iter().map(|s| q(s)).collect();
    v.sort();
    v
}

fn show(qs: &[Quotient]) -> String {
    qs.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(", ")
}

fn arrow_vertex(g: &DualGraph, kind: ArrowKind) -> usize {
    g.arrows.iter().find(|a| a.kind == kind).expect("arrow present").v
}

/// Shortest vertex path between two vertices.
pub fn geodesic(g: &DualGraph, from: usize, to: usize) -> Vec<usize> {
    let mut prev: BTreeMap<usize, usize> = BTreeMap::new();
    let mut queue = VecDeque::from([from]);
    let mut seen = BTreeSet::from([from]);
    while let Some(v) = queue.pop_front() {
        for w in g.neighbors(v) {
            if seen.insert(w) {
                prev.insert(w, v);
                queue.push_back(w);
            }
        }
    }
    let mut path = vec![to];
    while *path.last().unwrap() != from {
        path.push(prev[path.last().unwrap()]);
    }
    path.reverse();
    path
}

/// Quotients of the complement components of the maximal arcs.
pub fn complement_quotients(g: &DualGraph) -> Result<BTreeSet<Quotient>, String> {
    maximal_arcs(g)
        .complement
        .iter()
        .map(|c| c.quotient().cloned().ok_or_else(|| format!("non-constant component {:?}", c.vertices)))
        .collect()
}

fn single_germ(text: &str) -> Result<(CoverSpec, CoverGraph), String> {
    let (spec, mut germs) = cover_from_text(text).map_err(|e| e.to_string())?;
    ensure(germs.len() == 1, || format!("{} germs above the origin, expected 1", germs.len()))?;
    Ok((spec, germs.remove(0)))
}

/// Example 1, discriminant side.
pub fn criterion1() -> Outcome {
    let o = resolve_system_text(EXAMPLE1_DELTA_PLUS).map_err(|e| e.to_string())?;
    let g = &o.graph;
    ensure(drawing("example1_delta_plus").matches(g), || "graph differs from the drawing".into())?;
    let starred: BTreeSet<Quotient> =
        g.arrows.iter().filter(|a| a.kind == ArrowKind::Star).map(|a| g.vertex(a.v).q.clone()).collect();
    let want: BTreeSet<Quotient> = quotients(&["7/5", "5/3", "12/7", "13/7"]).into_iter().collect();
    ensure(starred == want, || format!("starred quotients {starred:?}"))?;
    let d = maximal_arcs(g);
    ensure(d.arcs.len() == 1, || format!("{} maximal arcs", d.arcs.len()))?;
    let path = geodesic(g, arrow_vertex(g, ArrowKind::In), arrow_vertex(g, ArrowKind::Out));
    ensure(d.arcs[0].vertices == path, || format!("arc {:?} is not the geodesic {path:?}", d.arcs[0].vertices))?;
    ensure(verify_theorem1(g).passed(), || "structure theorem fails".into())?;
    Ok(format!("{} vertices, starred quotients {}, one arc of length {}", g.len(), show(&want.into_iter().collect::<Vec<_>>()), path.len()))
}

/// Example 1, graph of the morphism.
pub fn criterion2() -> Outcome {
    let g = resolve_system_text(EXAMPLE1_SYSTEM).map_err(|e| e.to_string())?.graph;
    ensure(drawing("example1_minimal").matches(&g), || "graph differs from the drawing".into())?;
    let want = quotients(&["7/5", "3/2", "5/3", "12/7", "7/4", "9/5", "11/6", "13/7", "3/2"]);
    ensure(g.quotient_multiset() == want, || format!("quotients {}", show(&g.quotient_multiset())))?;
    let d = maximal_arcs(&g);
    ensure(d.covers(&g), || "the maximal arcs do not cover the graph".into())?;
    ensure(verify_theorem1(&g).passed(), || "structure theorem fails".into())?;
    Ok(format!("{} vertices, quotients {}, arcs cover the graph", g.len(), show(&want)))
}

/// The normalized surface of Example 2 with each two-vertex bamboo
/// blown up at its middle point.
pub fn example2_blown_up_bamboos(cg: &CoverGraph) -> Result<DualGraph, String> {
    let mut g = cg.graph.clone();
    for b in cg.bamboos.iter().filter(|b| b.vertices.len() == 2) {
        let (u, w) = (b.vertices[0], b.vertices[1]);
        let idx = g.edges.iter().position(|&(x, y)| (x, y) == (u, w) || (x, y) == (w, u)).ok_or("bamboo edge missing")?;
        g = blow_up_edge(&g, idx).map_err(|e| e.to_string())?.0;
    }
    Ok(g)
}

/// Example 2. The drawing of the normalized surface shows three-vertex
/// bamboos where the minimal resolution of the cyclic quotient points has
/// two; that part is reported separately so the rest stays visible.
pub fn criterion3() -> Outcome {
    let (_, cg) = single_germ(EXAMPLE2_COVER)?;
    let mut fails = Vec::new();
    let shape = drawing("example2_hj").matches(&cg.graph);
    if !shape {
        let blown = example2_blown_up_bamboos(&cg)?;
        fails.push(format!(
            "normalized-surface shape: {} vertices vs {} drawn (after blowing up the middle of each two-vertex bamboo: {})",
            cg.graph.len(),
            drawing("example2_hj").graph.len(),
            if drawing("example2_hj").matches(&blown) { "matches" } else { "still differs" }
        ));
    }
    let (m, steps) = minimal_model(&cg.graph).map_err(|e| e.to_string())?;
    if !drawing("example2_minimal").matches(&m) {
        fails.push("minimal graph differs from the drawing".into());
    }
    let want = quotients(&["1", "1", "1", "1", "1", "1", "1", "5/4", "7/5", "3/2", "3/2", "3/2", "5/3"]);
    if m.quotient_multiset() != want {
        fails.push(format!("minimal quotients {}", show(&m.quotient_multiset())));
    }
    let g_vertex = arrow_vertex(&m, ArrowKind::In);
    for v in m.vertices.values() {
        let e = if v.id == g_vertex { -3 } else { -2 };
        if v.self_int != Some(e) {
            fails.push(format!("E{} has self-intersection {:?}", v.id, v.self_int));
        }
    }
    let comp = complement_quotients(&m)?;
    if comp != [q("1"), q("3/2")].into_iter().collect() {
        fails.push(format!("complement quotients {comp:?}"));
    }
    if !check_theorem2(&cg).passed() || !verify_theorem1(&m).passed() || !check_arc_transport(&cg.graph, &m, &steps).passed() {
        fails.push("a structure check fails".into());
    }
    if fails.is_empty() {
        Ok(format!("{} vertices upstairs, minimal model with {} vertices, complement quotients 1 and 3/2", cg.graph.len(), m.len()))
    } else {
        Err(fails.join("; "))
    }
}

/// Example 3 under the coordinate projection.
pub fn criterion4() -> Outcome {
    let (spec, cg) = single_germ(EXAMPLE3_PHI2_COVER)?;
    let base = &spec.base.graph;
    ensure(drawing("example3_phi2_delta_plus").matches(base), || "discriminant graph differs from the drawing".into())?;
    let chain = base.chain_order().ok_or("discriminant graph is not a bamboo")?;
    let qs: Vec<String> = chain.iter().map(|&v| base.vertex(v).q.to_string()).collect();
    let want = ["1/3", "3/8", "8/21", "13/34", "5/13", "2/5", "1/2", "1"];
    let rev: Vec<&str> = want.iter().rev().copied().collect();
    ensure(qs == want || qs == rev, || format!("bamboo quotients {qs:?}"))?;
    let d = maximal_arcs(base);
    ensure(d.arc_vertices.len() == base.len(), || "a vertex lies off the maximal arcs".into())?;
    let (m, _) = minimal_model(&cg.graph).map_err(|e| e.to_string())?;
    ensure(drawing("example3_phi2_minimal").matches(&m), || "minimal cover graph differs from the drawing".into())?;
    let comp = complement_quotients(&m)?;
    ensure(comp == [q("1/3")].into_iter().collect(), || format!("complement quotients {comp:?}"))?;
    ensure(check_theorem2(&cg).passed() && verify_theorem1(&m).passed(), || "a structure check fails".into())?;
    Ok(format!("bamboo {}, minimal model with {} vertices, complement quotient 1/3", want.join(" "), m.len()))
}

/// Example 3 under the generic projection.
pub fn criterion5() -> Outcome {
    let (spec, cg) = single_germ(EXAMPLE3_PHI1_COVER)?;
    ensure(drawing("example3_phi1_delta_plus").matches(&spec.base.graph), || "discriminant graph differs".into())?;
    ensure(cg.graph.has_cycle(), || "the cover graph has no cycle".into())?;
    let base_vertices: Vec<usize> =
        cg.origins.iter().filter(|(_, o)| matches!(o, VertexOrigin::Base { .. })).map(|(&v, _)| v).collect();
    for &v in &base_vertices {
        ensure(cg.graph.vertex(v).q == q("1"), || format!("E{v} has quotient {}", cg.graph.vertex(v).q))?;
    }
    ensure(drawing("example3_phi1_hj").matches(&cg.graph), || "cover graph differs from the drawing".into())?;
    let (m, _) = minimal_model(&cg.graph).map_err(|e| e.to_string())?;
    ensure(drawing("example3_phi1_minimal").matches(&m), || "minimal cover graph differs from the drawing".into())?;
    ensure(check_theorem2(&cg).passed() && verify_theorem1(&cg.graph).passed(), || "a structure check fails".into())?;
    Ok(format!("cover graph with {} vertices and a cycle; all {} non-bamboo quotients equal 1", cg.graph.len(), base_vertices.len()))
}

/// Random systems through resolution, and the first `covers` of them
/// through a cyclic cover.
pub fn criterion6(cases: usize, covers: usize) -> Outcome {
    let results = fuzz(0, cases, covers, 1);
    let bad: Vec<_> = results.iter().filter(|c| !c.problems.is_empty()).collect();
    if let Some(c) = bad.first() {
        return Err(format!("{} failing cases; case {} (seed {}): {}", bad.len(), c.case, c.seed, c.problems.join("; ")));
    }
    let germs: usize = results.iter().filter_map(|c| c.cover_germs).sum();
    Ok(format!("{cases} systems and {covers} covers ({germs} germs) pass"))
}

/// The stored examples' plane resolutions.
pub fn fixture_resolutions() -> Result<Vec<(String, hironaka::resolve::ResolutionOutcome)>, String> {
    let mut out = vec![
        ("example1 system".to_string(), resolve_system_text(EXAMPLE1_SYSTEM).map_err(|e| e.to_string())?),
        ("example1 discriminant".to_string(), resolve_system_text(EXAMPLE1_DELTA_PLUS).map_err(|e| e.to_string())?),
    ];
    for (name, text) in [("example2", EXAMPLE2_COVER), ("example3 phi1", EXAMPLE3_PHI1_COVER), ("example3 phi2", EXAMPLE3_PHI2_COVER)] {
        out.push((format!("{name} base"), cover_from_text(text).map_err(|e| e.to_string())?.0.base));
    }
    Ok(out)
}

/// Every graph produced from the stored examples: resolutions, cover
/// graphs and their minimal models.
pub fn fixture_graphs() -> Result<Vec<(String, DualGraph)>, String> {
    let mut out: Vec<(String, DualGraph)> = fixture_resolutions()?.into_iter().map(|(n, o)| (n, o.graph)).collect();
    for (name, text) in [("example2", EXAMPLE2_COVER), ("example3 phi1", EXAMPLE3_PHI1_COVER), ("example3 phi2", EXAMPLE3_PHI2_COVER)] {
        for (i, cg) in cover_from_text(text).map_err(|e| e.to_string())?.1.into_iter().enumerate() {
            let m = minimal_model(&cg.graph).map_err(|e| e.to_string())?.0;
            out.push((format!("{name} cover {i}"), cg.graph));
            out.push((format!("{name} cover {i} minimal"), m));
        }
    }
    let direct = resolve_system_text(EXAMPLE1_SYSTEM).map_err(|e| e.to_string())?.graph;
    out.push(("example1 minimal".into(), minimal_model(&direct).map_err(|e| e.to_string())?.0));
    Ok(out)
}

pub fn suite_hj(nmax: i64) -> Outcome {
    Ok(format!("{} fractions", hj_suite(nmax)?))
}

pub fn suite_curvetta() -> Outcome {
    let (mut n, mut exact) = (0, 0);
    for (name, o) in fixture_resolutions()? {
        let s = curvetta_suite(&o).map_err(|e| format!("{name}: {e}"))?;
        n += s.vertices;
        exact += s.exact;
    }
    ensure(exact == n, || format!("only {exact} of {n} vertices have a single-branch curvetta equation"))?;
    Ok(format!("{n} vertices"))
}

pub fn suite_reparametrization(count: usize) -> Outcome {
    Ok(format!("{} branches", reparametrization_suite(5, count)?))
}

pub fn suite_local_models(bound: u64) -> Outcome {
    Ok(format!("{} models", local_model_suite(bound)?))
}

/// Zero intersections on the stored examples' graphs and on `random`
/// random resolutions, covers and minimal models.
pub fn suite_zero_intersection(random: u64) -> Outcome {
    let mut graphs = fixture_graphs()?;
    for seed in 0..random {
        let sys = random_system(seed);
        let o = resolve_with_retry(&sys, &ResolveOptions::default(), MAX_TRUNCATION).map_err(|e| e.to_string())?;
        graphs.push((format!("random {seed}"), o.graph));
        let rc = random_cover_of(&sys, seed);
        let spec = CoverSpec::from_branches(rc.degree, &rc.h, rc.f_axis, &ResolveOptions::default(), MAX_TRUNCATION)
            .map_err(|e| e.to_string())?;
        for cg in assemble_cover_graph(&spec).map_err(|e| e.to_string())? {
            let m = minimal_model(&cg.graph).map_err(|e| e.to_string())?.0;
            graphs.push((format!("random cover {seed}"), cg.graph));
            graphs.push((format!("random cover {seed} minimal"), m));
        }
    }
    let mut checks = 0;
    for (name, g) in &graphs {
        checks += zero_intersection_oracle(g).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!("{} graphs, {checks} vertex conditions", graphs.len()))
}

/// Confluence of the minimal model on the stored examples' graphs (also
/// after extra blow-ups), and `non_minimal = 3` round trips on random
/// systems.
pub fn criterion8(random: u64) -> Outcome {
    let mut graphs = fixture_graphs()?;
    let extra = ResolveOptions { non_minimal: 3, seed: 1, ..ResolveOptions::default() };
    let sys = hironaka::cli::input::parse_system(EXAMPLE1_SYSTEM).unwrap().to_system().unwrap();
    graphs.push(("example1 with extra blow-ups".into(), resolve_with_retry(&sys, &extra, MAX_TRUNCATION).map_err(|e| e.to_string())?.graph));
    let mut orders = 0;
    for (name, g) in &graphs {
        let (a, _) = minimal_model(g).map_err(|e| e.to_string())?;
        for seed in 1..=4 {
            let (b, _) = minimal_model_seeded(g, seed).map_err(|e| e.to_string())?;
            ensure(graph_isomorphic(&a, &b).is_some(), || format!("{name}: contraction orders disagree (seed {seed})"))?;
            orders += 1;
        }
    }
    for seed in 0..random {
        let sys = random_system(seed);
        let direct = resolve_with_retry(&sys, &ResolveOptions::default(), MAX_TRUNCATION).map_err(|e| e.to_string())?;
        let opts = ResolveOptions { non_minimal: 3, seed, ..ResolveOptions::default() };
        let blown = resolve_with_retry(&sys, &opts, MAX_TRUNCATION).map_err(|e| e.to_string())?;
        ensure(blown.graph.len() == direct.graph.len() + 3, || format!("seed {seed}: expected three extra vertices"))?;
        let (a, _) = minimal_model(&blown.graph).map_err(|e| e.to_string())?;
        let (b, _) = minimal_model(&direct.graph).map_err(|e| e.to_string())?;
        ensure(graph_isomorphic(&a, &b).is_some(), || format!("seed {seed}: round trip differs"))?;
    }
    Ok(format!("{} graphs under {orders} random orders; {random} round trips", graphs.len()))
}
