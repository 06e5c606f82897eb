//! Built-in worked examples: their input systems, the expected drawings of
//! their dual graphs, and an end-to-end comparison of computed and drawn
//! graphs up to isomorphism.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::arith::Quotient;
use crate::contract::minimal_model;
use crate::cover::{assemble_cover_graph, check_theorem2, CoverGraph, CoverSpec};
use crate::graph::{from_json, graph_isomorphic_partial, verify_theorem1, DualGraph, IsoOptions, StarMode};
use crate::resolve::{resolve_with_retry, ResolutionOutcome, ResolveOptions};

use super::input::{parse_cover, parse_system, CoverInput, SystemInput};
use super::{CliError, MAX_TRUNCATION};

pub const EXAMPLE1_SYSTEM: &str = include_str!("../../fixtures/example1_system.json");
pub const EXAMPLE1_DELTA_PLUS: &str = include_str!("../../fixtures/example1_delta_plus.json");
pub const EXAMPLE2_COVER: &str = include_str!("../../fixtures/example2_cover.json");
pub const EXAMPLE3_PHI1_COVER: &str = include_str!("../../fixtures/example3_phi1_cover.json");
pub const EXAMPLE3_PHI2_COVER: &str = include_str!("../../fixtures/example3_phi2_cover.json");

const DRAWINGS: &[(&str, &str)] = &[
    ("example1_delta_plus", include_str!("../../fixtures/expected_example1_delta_plus.json")),
    ("example1_minimal", include_str!("../../fixtures/expected_example1_minimal.json")),
    ("example2_delta_plus", include_str!("../../fixtures/expected_example2_delta_plus.json")),
    ("example2_hj", include_str!("../../fixtures/expected_example2_hj.json")),
    ("example2_minimal", include_str!("../../fixtures/expected_example2_minimal.json")),
    ("example3_phi1_delta_plus", include_str!("../../fixtures/expected_example3_phi1_delta_plus.json")),
    ("example3_phi1_hj", include_str!("../../fixtures/expected_example3_phi1_hj.json")),
    ("example3_phi1_minimal", include_str!("../../fixtures/expected_example3_phi1_minimal.json")),
    ("example3_phi2_delta_plus", include_str!("../../fixtures/expected_example3_phi2_delta_plus.json")),
    ("example3_phi2_hj", include_str!("../../fixtures/expected_example3_phi2_hj.json")),
    ("example3_phi2_minimal", include_str!("../../fixtures/expected_example3_phi2_minimal.json")),
];

/// A drawn dual graph: vertices without a printed quotient are wildcards.
#[derive(Debug, Clone)]
pub struct Drawing {
    pub name: String,
    pub graph: DualGraph,
    /// Vertices whose quotient is printed in the drawing.
    pub labelled: BTreeSet<usize>,
    pub stars: StarMode,
}

#[derive(Deserialize)]
struct DrawingRecord {
    name: String,
    stars: String,
    graph: serde_json::Value,
}

impl Drawing {
    pub fn parse(text: &str) -> Result<Drawing, CliError> {
        let bad = |m: String| CliError::Input(super::input::InputError::Schema(m));
        let mut rec: DrawingRecord = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        let mut labelled = BTreeSet::new();
        let vertices = rec.graph.get_mut("vertices").and_then(|v| v.as_array_mut()).ok_or_else(|| bad("drawing without vertices".into()))?;
        for v in vertices {
            let id = v.get("id").and_then(|x| x.as_u64()).ok_or_else(|| bad("vertex without id".into()))? as usize;
            let obj = v.as_object_mut().ok_or_else(|| bad("vertex is not an object".into()))?;
            if obj.contains_key("q") {
                labelled.insert(id);
            } else {
                obj.insert("q".into(), serde_json::Value::String(Quotient::Zero.to_string()));
            }
        }
        let graph = from_json(&rec.graph.to_string())?;
        let stars = match rec.stars.as_str() {
            "count" => StarMode::Count,
            "presence" => StarMode::Presence,
            "ignore" => StarMode::Ignore,
            s => return Err(bad(format!("unknown star mode {s:?}"))),
        };
        Ok(Drawing { name: rec.name, graph, labelled, stars })
    }

    /// Compares a computed graph with the drawing: shape, arrow kinds,
    /// printed quotients and, where the drawing states them,
    /// self-intersections.
    pub fn matches(&self, g: &DualGraph) -> bool {
        let opts = IsoOptions { stars: self.stars, ..IsoOptions::default() };
        graph_isomorphic_partial(g, &self.graph, &self.labelled, &opts).is_some()
    }
}

/// The stored drawing with the given name.
pub fn drawing(name: &str) -> Drawing {
    let (_, text) = DRAWINGS.iter().find(|(n, _)| *n == name).unwrap_or_else(|| panic!("no drawing named {name}"));
    Drawing::parse(text).expect("stored drawings are well formed")
}

pub fn drawing_names() -> impl Iterator<Item = &'static str> {
    DRAWINGS.iter().map(|(n, _)| *n)
}

/// One comparison of a computed graph with a drawing.
#[derive(Debug, Clone, Serialize)]
pub struct DrawingCheck {
    pub drawing: String,
    pub matched: bool,
    pub vertices: usize,
    pub expected_vertices: usize,
}

/// The outcome of running one example end to end.
#[derive(Debug, Clone, Serialize)]
pub struct ExampleReport {
    pub name: String,
    pub checks: Vec<DrawingCheck>,
    pub theorem1: bool,
    pub theorem2: bool,
}

impl ExampleReport {
    pub fn matched(&self) -> bool {
        self.theorem1 && self.theorem2 && self.checks.iter().all(|c| c.matched)
    }
}

fn check(name: &str, g: &DualGraph) -> DrawingCheck {
    let d = drawing(name);
    DrawingCheck { drawing: name.into(), matched: d.matches(g), vertices: g.len(), expected_vertices: d.graph.len() }
}

pub fn resolve_system_text(text: &str) -> Result<ResolutionOutcome, CliError> {
    let si: SystemInput = parse_system(text)?;
    let sys = si.to_system()?;
    let opts = ResolveOptions { with_axes: si.with_axes.map(|a| a.zero_set()), ..ResolveOptions::default() };
    Ok(resolve_with_retry(&sys, &opts, MAX_TRUNCATION)?)
}

/// The cover of a stored example: its spec and the germs above it.
pub fn cover_from_text(text: &str) -> Result<(CoverSpec, Vec<CoverGraph>), CliError> {
    let ci: CoverInput = parse_cover(text)?;
    let (h, f_axis) = ci.parts()?;
    let spec = CoverSpec::from_branches(ci.degree, &h, f_axis, &ResolveOptions::default(), MAX_TRUNCATION)?;
    let germs = assemble_cover_graph(&spec)?;
    Ok((spec, germs))
}

/// Example 1: the discriminant-side graph and the graph of `(f, g)`.
pub fn run_example1() -> Result<ExampleReport, CliError> {
    let delta = resolve_system_text(EXAMPLE1_DELTA_PLUS)?;
    let direct = resolve_system_text(EXAMPLE1_SYSTEM)?;
    let (minimal, _) = minimal_model(&direct.graph)?;
    Ok(ExampleReport {
        name: "example1".into(),
        checks: vec![
            check("example1_delta_plus", &delta.graph),
            check("example1_minimal", &direct.graph),
            check("example1_minimal", &minimal),
        ],
        theorem1: [&delta.graph, &direct.graph, &minimal].iter().all(|g| verify_theorem1(g).passed()),
        theorem2: true,
    })
}

/// Runs a stored cover example whose drawings are named `{name}_delta_plus`,
/// `{name}_hj` and `{name}_minimal`.
pub fn run_cover_example(name: &str, text: &str) -> Result<ExampleReport, CliError> {
    let (spec, germs) = cover_from_text(text)?;
    let mut checks = vec![check(&format!("{name}_delta_plus"), &spec.base.graph)];
    let mut theorem1 = verify_theorem1(&spec.base.graph).passed();
    let mut theorem2 = true;
    if germs.len() != 1 {
        checks.push(DrawingCheck { drawing: format!("{name}_hj"), matched: false, vertices: germs.len(), expected_vertices: 1 });
        return Ok(ExampleReport { name: name.into(), checks, theorem1, theorem2: false });
    }
    let cg = &germs[0];
    let (minimal, _) = minimal_model(&cg.graph)?;
    checks.push(check(&format!("{name}_hj"), &cg.graph));
    checks.push(check(&format!("{name}_minimal"), &minimal));
    theorem1 &= verify_theorem1(&cg.graph).passed() && verify_theorem1(&minimal).passed();
    theorem2 &= check_theorem2(cg).passed();
    Ok(ExampleReport { name: name.into(), checks, theorem1, theorem2 })
}

/// Example 2: the triple cover `z³ = (y³ − x²)(y³ − (x + y)²)`.
pub fn run_example2() -> Result<ExampleReport, CliError> {
    run_cover_example("example2", EXAMPLE2_COVER)
}

/// Example 3: the double cover under the generic projection (φ₁) and the
/// coordinate projection (φ₂).
pub fn run_example3() -> Result<ExampleReport, CliError> {
    let a = run_cover_example("example3_phi1", EXAMPLE3_PHI1_COVER)?;
    let b = run_cover_example("example3_phi2", EXAMPLE3_PHI2_COVER)?;
    Ok(ExampleReport {
        name: "example3".into(),
        checks: a.checks.into_iter().chain(b.checks).collect(),
        theorem1: a.theorem1 && b.theorem1,
        theorem2: a.theorem2 && b.theorem2,
    })
}

/// All worked examples, in order.
pub fn run_all() -> Result<Vec<ExampleReport>, CliError> {
    Ok(vec![run_example1()?, run_example2()?, run_example3()?])
}
