//! Command-line front end: subcommands for resolving branch systems and
//! covers, analysing and contracting graphs, replaying the worked examples
//! and fuzzing the structure checks on random inputs.

pub mod fixtures;
pub mod input;
pub mod random;

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::contract::{check_arc_transport, minimal_model, minimal_model_seeded, ContractError};
use crate::cover::{assemble_cover_graph, check_theorem2, CoverError, CoverSpec};
use crate::curve::CurveError;
use crate::graph::{
    from_json, maximal_arcs, to_dot, verify_theorem1, zero_intersection_defects, DualGraph, FunctionRole, GraphError,
};
use crate::resolve::{resolve_with_retry, ResolveError, ResolveOptions};

use input::{parse_cover, parse_system, AxisName, InputError};

/// Largest series truncation tried before giving up on precision.
pub const MAX_TRUNCATION: u32 = 1024;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Resolve(#[from] ResolveError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Contract(#[from] ContractError),
    #[error("cannot read {0}: {1}")]
    Io(String, std::io::Error),
}

impl CliError {
    fn is_precision(&self) -> bool {
        match self {
            CliError::Resolve(e) | CliError::Cover(CoverError::Resolve(e)) => e.is_precision(),
            CliError::Input(InputError::Curve(CurveError::PrecisionExhausted(_))) => true,
            _ => false,
        }
    }

    /// Exit code for this error: 3 for exhausted precision, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.is_precision() {
            EXIT_PRECISION
        } else {
            EXIT_INPUT
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
}

#[derive(Debug, Parser)]
#[command(name = "hironaka", version, about = "Resolution graphs, Hironaka quotients and maximal arcs of finite plane morphisms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Resolve a branch system and report the structure checks.
    Resolve {
        /// Branch system file (`-` for standard input).
        input: PathBuf,
        /// Add the coordinate axes; the named coordinate becomes an f-branch.
        #[arg(long)]
        with_axes: Option<AxisName>,
        /// Extra blow-ups at random points after the minimal resolution.
        #[arg(long, default_value_t = 0)]
        non_minimal: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = crate::curve::DEFAULT_TRUNCATION)]
        truncation: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Resolve a cyclic cover `z^d = h` and report the structure checks.
    Cover {
        input: PathBuf,
        /// Also contract to the minimal good resolution.
        #[arg(long)]
        minimal: bool,
        #[arg(long, default_value_t = crate::curve::DEFAULT_TRUNCATION)]
        truncation: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Decompose a graph file into maximal arcs.
    Arcs {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Contract a graph file to its minimal model.
    Contract {
        input: PathBuf,
        /// Random contraction order instead of lowest id first.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run the built-in worked examples against their stored drawings.
    Fixtures,
    /// Run the structure checks on seeded random systems and covers.
    Fuzz {
        #[arg(long, default_value_t = 1000)]
        cases: usize,
        /// Number of the cases also lifted to a random cyclic cover.
        #[arg(long, default_value_t = 200)]
        covers: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads (results are merged in case order).
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn read_input(path: &PathBuf) -> Result<String, CliError> {
    let name = path.display().to_string();
    if name == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(name, e))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Io(name, e))
}

/// Invariant problems of one produced graph: the structure-theorem clauses
/// and the vanishing of `E_i · (f∘π)` and `E_i · (g∘π)`.
pub fn graph_problems(g: &DualGraph) -> Vec<String> {
    let mut out: Vec<String> = verify_theorem1(g).violations.iter().map(|v| format!("theorem 1: {v:?}")).collect();
    for role in [FunctionRole::F, FunctionRole::G] {
        for (v, d) in zero_intersection_defects(g, role) {
            out.push(format!("{role:?}: E{v} has intersection {d}"));
        }
    }
    if !g.is_connected() {
        out.push("graph is disconnected".into());
    }
    out
}

fn emit_json(out: &mut dyn Write, value: &impl Serialize) {
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(value).expect("serializable output"));
}

/// Runs one invocation; `args` includes the program name. Returns the exit
/// code; artefacts go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            if code == EXIT_OK {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_precision() {
                let _ = writeln!(err, "hint: series precision ran out at truncation {MAX_TRUNCATION}; give more terms or a larger --truncation");
            }
            e.exit_code()
        }
    }
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Resolve { input, with_axes, non_minimal, seed, truncation, format } => {
            let si = parse_system(&read_input(&input)?)?;
            let sys = si.to_system()?;
            let axes = with_axes.or(si.with_axes).map(AxisName::zero_set);
            let opts = ResolveOptions { with_axes: axes, non_minimal, seed, truncation, ..ResolveOptions::default() };
            let res = resolve_with_retry(&sys, &opts, MAX_TRUNCATION.max(truncation))?;
            let report = verify_theorem1(&res.graph);
            let problems = graph_problems(&res.graph);
            match format {
                Format::Dot => {
                    let _ = write!(out, "{}", to_dot(&res.graph));
                }
                Format::Json => emit_json(
                    out,
                    &json!({
                        "graph": res.graph,
                        "tree": res.tree,
                        "arcs": maximal_arcs(&res.graph),
                        "theorem1": report,
                        "problems": problems,
                    }),
                ),
            }
            Ok(verdict(problems.is_empty(), err, "resolution"))
        }
        Command::Cover { input, minimal, truncation, format } => {
            let ci = parse_cover(&read_input(&input)?)?;
            let (h, f_axis) = ci.parts()?;
            let opts = ResolveOptions { truncation, ..ResolveOptions::default() };
            let spec = CoverSpec::from_branches(ci.degree, &h, f_axis, &opts, MAX_TRUNCATION.max(truncation))?;
            let germs = assemble_cover_graph(&spec)?;
            let mut ok = graph_problems(&spec.base.graph).is_empty();
            let mut docs = Vec::new();
            let mut dots = vec![to_dot(&spec.base.graph)];
            for cg in &germs {
                let t2 = check_theorem2(cg);
                let mut problems = graph_problems(&cg.graph);
                ok &= t2.passed();
                let min = if minimal {
                    let (m, steps) = minimal_model(&cg.graph)?;
                    let transport = check_arc_transport(&cg.graph, &m, &steps);
                    ok &= transport.passed();
                    problems.extend(graph_problems(&m));
                    dots.push(to_dot(&cg.graph));
                    dots.push(to_dot(&m));
                    Some(json!({ "graph": m, "arcs": maximal_arcs(&m), "theorem1": verify_theorem1(&m), "transport": transport }))
                } else {
                    dots.push(to_dot(&cg.graph));
                    None
                };
                ok &= problems.is_empty();
                docs.push(json!({
                    "graph": cg.graph,
                    "origins": cg.origins,
                    "points": cg.points,
                    "bamboos": cg.bamboos,
                    "strands": cg.strands,
                    "arcs": maximal_arcs(&cg.graph),
                    "theorem1": verify_theorem1(&cg.graph),
                    "theorem2": t2,
                    "problems": problems,
                    "minimal": min,
                }));
            }
            match format {
                Format::Dot => {
                    for d in dots {
                        let _ = write!(out, "{d}");
                    }
                }
                Format::Json => emit_json(out, &json!({ "base": spec.base.graph, "germs": docs })),
            }
            Ok(verdict(ok, err, "cover"))
        }
        Command::Arcs { input, format } => {
            let g = from_json(&read_input(&input)?)?;
            let report = verify_theorem1(&g);
            match format {
                Format::Dot => {
                    let _ = write!(out, "{}", to_dot(&g));
                }
                Format::Json => emit_json(out, &json!({ "arcs": maximal_arcs(&g), "theorem1": report })),
            }
            Ok(verdict(report.passed(), err, "arc decomposition"))
        }
        Command::Contract { input, seed, format } => {
            let g = from_json(&read_input(&input)?)?;
            let (m, steps) = match seed {
                Some(s) => minimal_model_seeded(&g, s)?,
                None => minimal_model(&g)?,
            };
            let transport = check_arc_transport(&g, &m, &steps);
            match format {
                Format::Dot => {
                    let _ = write!(out, "{}", to_dot(&m));
                }
                Format::Json => emit_json(out, &json!({ "graph": m, "steps": steps, "transport": transport })),
            }
            Ok(verdict(transport.passed(), err, "arc transport"))
        }
        Command::Fixtures => {
            let reports = fixtures::run_all()?;
            let mut all = true;
            for r in &reports {
                let status = if r.matched() { "MATCH" } else { "MISMATCH" };
                let _ = writeln!(out, "{status} {}", r.name);
                for c in &r.checks {
                    let _ = writeln!(
                        out,
                        "  {} {} ({} vertices, drawing has {})",
                        if c.matched { "ok  " } else { "FAIL" },
                        c.drawing,
                        c.vertices,
                        c.expected_vertices
                    );
                }
                if !r.theorem1 || !r.theorem2 {
                    let _ = writeln!(out, "  FAIL structure checks (theorem 1: {}, theorem 2: {})", r.theorem1, r.theorem2);
                }
                all &= r.matched();
            }
            Ok(if all { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Fuzz { cases, covers, seed, jobs } => {
            let results = fuzz(seed, cases, covers, jobs);
            let failures: Vec<&FuzzCase> = results.iter().filter(|c| !c.problems.is_empty()).collect();
            emit_json(out, &json!({ "cases": cases, "covers": covers.min(cases), "seed": seed, "failures": failures }));
            Ok(verdict(failures.is_empty(), err, "fuzz"))
        }
    }
}

fn verdict(ok: bool, err: &mut dyn Write, what: &str) -> i32 {
    if ok {
        EXIT_OK
    } else {
        let _ = writeln!(err, "verification failed: {what}");
        EXIT_VERIFY
    }
}

/// The result of one fuzz case.
#[derive(Debug, Clone, Serialize)]
pub struct FuzzCase {
    pub case: usize,
    pub seed: u64,
    pub vertices: usize,
    pub cover_germs: Option<usize>,
    pub problems: Vec<String>,
}

/// Resolves case `i` (seed `seed + i`), checks every invariant, and for
/// `i < covers` also lifts it to a random cyclic cover and checks the
/// cover graphs and their minimal models.
pub fn fuzz_case(seed: u64, i: usize, covers: usize) -> FuzzCase {
    let s = seed.wrapping_add(i as u64);
    let sys = random::random_system(s);
    let mut c = FuzzCase { case: i, seed: s, vertices: 0, cover_germs: None, problems: vec![] };
    match resolve_with_retry(&sys, &ResolveOptions::default(), MAX_TRUNCATION) {
        Ok(res) => {
            c.vertices = res.graph.len();
            c.problems.extend(graph_problems(&res.graph));
        }
        Err(e) => c.problems.push(format!("resolve: {e}")),
    }
    if i < covers {
        let rc = random::random_cover_of(&sys, s);
        match CoverSpec::from_branches(rc.degree, &rc.h, rc.f_axis, &ResolveOptions::default(), MAX_TRUNCATION)
            .and_then(|spec| assemble_cover_graph(&spec))
        {
            Ok(germs) => {
                c.cover_germs = Some(germs.len());
                for cg in &germs {
                    c.problems.extend(graph_problems(&cg.graph).into_iter().map(|p| format!("cover: {p}")));
                    c.problems.extend(check_theorem2(cg).violations.iter().map(|v| format!("theorem 2: {v:?}")));
                    match minimal_model(&cg.graph) {
                        Ok((m, steps)) => {
                            c.problems.extend(graph_problems(&m).into_iter().map(|p| format!("minimal cover: {p}")));
                            if !check_arc_transport(&cg.graph, &m, &steps).passed() {
                                c.problems.push("arc transport failed".into());
                            }
                        }
                        Err(e) => c.problems.push(format!("contract: {e}")),
                    }
                }
            }
            Err(e) => c.problems.push(format!("cover: {e}")),
        }
    }
    c
}

/// Runs `cases` fuzz cases on `jobs` threads, returned in case order.
pub fn fuzz(seed: u64, cases: usize, covers: usize, jobs: usize) -> Vec<FuzzCase> {
    let jobs = jobs.max(1);
    let mut results: Vec<FuzzCase> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|w| scope.spawn(move || (w..cases).step_by(jobs).map(|i| fuzz_case(seed, i, covers)).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("fuzz worker panicked")).collect()
    });
    results.sort_by_key(|c| c.case);
    results
}
