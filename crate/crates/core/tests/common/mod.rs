//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

pub mod criteria;

use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hironaka::arith::{cf_evaluate, hj_expand, rat_int, HJString, Rat};
use hironaka::cli::random::{random_branch, random_system_sized};
use hironaka::cli::MAX_TRUNCATION;
use hironaka::cover::local_model_at_double_point;
use hironaka::curve::{contact_quotient, intersection_multiplicity, reparametrize_cover, valuations, Branch, CurveError, Direction, Order, Poly2, Series, TaggedSystem};
use hironaka::graph::{ArrowKind, DualGraph, Vertex};
use hironaka::resolve::{synthesize_curvetta, ResolutionOutcome};

/// Lattice points on the compact boundary of the convex hull of the nonzero
/// points of `{(p, r) ∈ Z²₊ : a p + b r ≡ 0 mod dd}` (the cone of the
/// normalized local model `z^d = x^m1 y^m2` after removing `gcd(d, m1, m2)`),
/// found by brute-force gift wrapping, from the x-axis ray to the y-axis ray.
pub fn hull_rays(d: u64, m1: u64, m2: u64) -> Vec<(i64, i64)> {
    let g = gcd(gcd(d, m1), m2);
    let (dd, a, b) = ((d / g) as i64, (m1 / g) as i64, (m2 / g) as i64);
    let in_lattice = |p: i64, r: i64| (a * p + b * r).rem_euclid(dd) == 0;
    let k1 = (1..=dd).find(|&p| in_lattice(p, 0)).unwrap();
    let k2 = (1..=dd).find(|&r| in_lattice(0, r)).unwrap();
    let pts: Vec<(i64, i64)> =
        (0..=k1).flat_map(|p| (0..=k2).map(move |r| (p, r))).filter(|&(p, r)| (p, r) != (0, 0) && in_lattice(p, r)).collect();
    let cross = |o: (i64, i64), u: (i64, i64), v: (i64, i64)| (u.0 - o.0) * (v.1 - o.1) - (u.1 - o.1) * (v.0 - o.0);
    let mut chain = vec![(k1, 0)];
    let mut cur = (k1, 0);
    while cur != (0, k2) {
        let mut best: Option<(i64, i64)> = None;
        for &q in pts.iter().filter(|&&q| q.0 < cur.0 && q.1 >= cur.1) {
            best = Some(match best {
                None => q,
                Some(bq) => {
                    let c = cross(cur, bq, q);
                    let closer = (q.0 - cur.0).abs() + (q.1 - cur.1).abs() < (bq.0 - cur.0).abs() + (bq.1 - cur.1).abs();
                    if c > 0 || (c == 0 && closer) {
                        q
                    } else {
                        bq
                    }
                }
            });
        }
        cur = best.expect("hull reaches the y-axis ray");
        chain.push(cur);
    }
    chain
}

/// Self-intersections `−b_i` of the interior rays: `w_{i−1} + w_{i+1} = b_i w_i`.
pub fn hull_bamboo(rays: &[(i64, i64)]) -> Vec<i64> {
    rays.windows(3)
        .map(|w| {
            let s = (w[0].0 + w[2].0, w[0].1 + w[2].1);
            let b = if w[1].0 != 0 { s.0 / w[1].0 } else { s.1 / w[1].1 };
            assert_eq!((b * w[1].0, b * w[1].1), s, "rays are not a lattice chain");
            b
        })
        .collect()
}

/// Number of points above the origin, as orbits of the monodromy
/// `Z² → Z/d`, `(i, j) ↦ i m1 + j m2`, acting on the `d` sheets.
pub fn orbit_count(d: u64, m1: u64, m2: u64) -> u64 {
    let mut seen = vec![false; d as usize];
    let mut orbits = 0;
    for s in 0..d as usize {
        if seen[s] {
            continue;
        }
        orbits += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(x) = stack.pop() {
            for step in [m1, m2] {
                let y = (x + step as usize) % d as usize;
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    orbits
}

/// Order of `m` in `Z/d`: the ramification index of the cover over `{x = 0}`
/// when `x` has multiplicity `m`.
pub fn additive_order(d: u64, m: u64) -> u64 {
    (1..=d).find(|k| (k * m) % d == 0).unwrap()
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Intersection multiplicity by substitution: for a graph branch
/// `y = p(x)` (given as `x = t`, `y = p(t)`) and any exact branch `b`,
/// `ord_t (y_b − p(x_b))`.
pub fn substitution_intersection(graph_branch: &Branch, b: &Branch) -> Order {
    assert_eq!(graph_branch.x, Series::t(), "oracle needs a graph branch");
    let p = &graph_branch.y;
    b.y.sub(&p.compose(&b.x)).ord()
}

/// All unordered vertex pairs joined by an edge, with repetition.
pub fn edge_pairs(g: &DualGraph) -> Vec<(usize, usize)> {
    let mut v: Vec<_> = g.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    v.sort();
    v
}

/// Vertices met by In or Out arrows.
pub fn arrow_vertices(g: &DualGraph) -> BTreeSet<usize> {
    g.arrows.iter().map(|a| a.v).collect()
}

pub fn r(n: i64) -> Rat {
    rat_int(n)
}

/// `x = t`, `y = Σ c_e t^e`.
pub fn graph_branch(terms: &[(u32, i64)]) -> Branch {
    Branch::poly(&[(1, 1)], terms)
}

/// Negative continued fraction of `n/q` by exact rational recursion
/// `b = ⌈x⌉`, `x ← 1/(b − x)`.
pub fn hj_oracle(n: i64, q: i64) -> Vec<i64> {
    let mut x = Rat::new(n.into(), q.into());
    let mut out = Vec::new();
    loop {
        let b = x.ceil();
        out.push(b.to_integer().try_into().unwrap());
        let rest = b - &x;
        if rest == Rat::from_integer(0.into()) {
            return out;
        }
        x = rest.recip();
    }
}

/// Binomial coefficient as a rational.
fn binom(n: u32, k: u32) -> Rat {
    let mut c = Rat::from_integer(1.into());
    for i in 0..k {
        c = c * Rat::new((n - i).into(), (i + 1).into());
    }
    c
}

fn strip(terms: BTreeMap<(u32, u32), Rat>, along_x: bool) -> Poly2 {
    let mut p = Poly2 { terms };
    p.terms.retain(|_, c| *c != Rat::from_integer(0.into()));
    let lo = p.terms.keys().map(|&(i, j)| if along_x { i } else { j }).min().unwrap_or(0);
    Poly2 { terms: p.terms.into_iter().map(|((i, j), c)| (if along_x { (i - lo, j) } else { (i, j - lo) }, c)).collect() }
}

/// Pushes the equation `G(x₁, y₁)` of a curve in the chart of the blow-up
/// point `dir` down to the equation of its image: the chart map is
/// `(x, y) = (x₁, x₁(y₁ + c))` for a finite direction `c` and
/// `(x, y) = (x₁y₁, y₁)` for the infinite one. Exceptional factors are
/// removed, leaving the strict transform.
pub fn push_down(g: &Poly2, dir: &Direction) -> Poly2 {
    let mut out: BTreeMap<(u32, u32), Rat> = BTreeMap::new();
    match dir {
        Direction::Finite(c0) => {
            // x^i (y/x − c0)^j = Σ_k C(j,k) (−c0)^{j−k} x^{i−k} y^k; shift by
            // x^top with top the largest power of y.
            let top = g.terms.keys().map(|&(_, j)| j).max().unwrap_or(0);
            for (&(i, j), c) in &g.terms {
                for k in 0..=j {
                    let mut coeff = c * binom(j, k);
                    for _ in 0..j - k {
                        coeff = coeff * -c0;
                    }
                    *out.entry((i + top - k, k)).or_insert_with(|| Rat::from_integer(0.into())) += coeff;
                }
            }
            strip(out, true)
        }
        Direction::Infinite => {
            // (x/y)^i y^j = x^i y^{j−i}; shift by y^i.
            let top = g.terms.keys().map(|&(i, _)| i).max().unwrap_or(0);
            for (&(i, j), c) in &g.terms {
                *out.entry((i, j + top - i)).or_insert_with(|| Rat::from_integer(0.into())) += c.clone();
            }
            strip(out, false)
        }
    }
}

/// Implicit equation of the curvetta of `vertex`: the line `y = c x` of the
/// first free finite direction `c` in the chart of the blow-up creating the
/// vertex, pushed down to the plane.
pub fn curvetta_equation(outcome: &ResolutionOutcome, vertex: usize) -> Poly2 {
    let used = &outcome.used_directions[&vertex];
    let c = (1..).map(rat_int).find(|c| !used.contains(&Direction::Finite(c.clone()))).unwrap();
    let mut g = Poly2 { terms: [((0, 1), rat_int(1)), ((1, 0), -c)].into_iter().collect() };
    for d in outcome.charts[&vertex].iter().rev() {
        g = push_down(&g, d);
    }
    g
}

/// Multiplicity at the origin of `{F = 0}`: the least total degree.
pub fn origin_multiplicity(f: &Poly2) -> u32 {
    f.terms.keys().map(|&(i, j)| i + j).min().unwrap_or(0)
}

/// What the curvetta oracle established over a set of vertices.
#[derive(Debug, Default, Clone, Copy)]
pub struct CurvettaStats {
    pub vertices: usize,
    /// Vertices whose pushed-down equation is a single branch at the
    /// origin, so that substitution gives exact intersection numbers.
    pub exact: usize,
}

/// Every vertex: the synthesized curvetta lies on the pushed-down equation
/// `F`; `contact_quotient` of the curvetta is the vertex quotient; and for
/// every branch `B` of the system, `ord F(B) ≥ I(curvetta, B)` with
/// equality whenever `F` has no other branch at the origin (its origin
/// multiplicity equals that of the curvetta).
pub fn curvetta_suite(outcome: &ResolutionOutcome) -> Result<CurvettaStats, String> {
    let mut stats = CurvettaStats::default();
    for (&v, vx) in &outcome.graph.vertices {
        let eq = curvetta_equation(outcome, v);
        let c = synthesize_curvetta(outcome, v).map_err(|e| e.to_string())?;
        if !eq.substitute(&c).is_zero() {
            return Err(format!("E{v}: synthesized curvetta is off its equation"));
        }
        let lib = contact_quotient(&c, &outcome.system).map_err(|e| format!("E{v}: {e}"))?;
        if lib != vx.q {
            return Err(format!("E{v}: vertex quotient {} but contact quotient {lib}", vx.q));
        }
        let mult_c = match (c.x.ord(), c.y.ord()) {
            (Order::Finite(a), Order::Finite(b)) => a.min(b),
            (Order::Finite(a), _) | (_, Order::Finite(a)) => a,
            _ => return Err(format!("E{v}: curvetta without finite order")),
        };
        let single = origin_multiplicity(&eq) == mult_c;
        for (_, b, _) in outcome.system.all() {
            let noether = intersection_multiplicity(&c, b).map_err(|e| format!("E{v}: {e}"))?;
            let Order::Finite(k) = eq.order_on(b) else {
                return Err(format!("E{v}: equation vanishes on {}", b.label()));
            };
            if (k as u64) < noether || (single && k as u64 != noether) {
                return Err(format!("E{v}: I({}) = {noether} but substitution gives {k}", b.label()));
            }
        }
        stats.vertices += 1;
        stats.exact += single as usize;
    }
    Ok(stats)
}

/// `E_i · (f∘π) = 0` and `E_i · (g∘π) = 0` recomputed from the graph:
/// `e_i m_i + Σ_{j ~ i} m_j + Σ arrows of the function at i = 0`. Returns
/// the number of vertices checked.
pub fn zero_intersection_oracle(g: &DualGraph) -> Result<usize, String> {
    let mut checked = 0;
    for v in g.vertices.values() {
        let Some(e) = v.self_int else { continue };
        for (mv, pick, kind) in [
            (v.m_f, (|w: &Vertex| w.m_f) as fn(&Vertex) -> Option<u64>, ArrowKind::Out),
            (v.m_g, |w: &Vertex| w.m_g, ArrowKind::In),
        ] {
            let Some(m) = mv else { continue };
            let mut total = e * m as i64;
            for &(a, b) in &g.edges {
                if a == v.id {
                    total += pick(g.vertex(b)).ok_or("missing multiplicity")? as i64;
                }
                if b == v.id {
                    total += pick(g.vertex(a)).ok_or("missing multiplicity")? as i64;
                }
            }
            total += g.arrows.iter().filter(|a| a.v == v.id && a.kind == kind).map(|a| a.mult as i64).sum::<i64>();
            if total != 0 {
                return Err(format!("E{}: {kind:?} intersection {total}", v.id));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Compares `local_model_at_double_point` with the brute-force hull for all
/// `d ≥ 2`, `m1, m2 ≥ 1` with `d·m1·m2 ≤ bound`. Returns the number of cases.
pub fn local_model_suite(bound: u64) -> Result<usize, String> {
    let mut cases = 0;
    for d in 2..=bound {
        for m1 in 1..=bound / d {
            for m2 in 1..=bound / (d * m1) {
                let lm = local_model_at_double_point(d, m1, m2).map_err(|e| format!("({d},{m1},{m2}): {e}"))?;
                let rays = hull_rays(d, m1, m2);
                let g = gcd(gcd(d, m1), m2);
                let dd = d / g;
                let ctx = format!("(d, m1, m2) = ({d}, {m1}, {m2}): {lm:?} vs rays {rays:?}");
                if lm.rays != rays || lm.bamboo != hull_bamboo(&rays) {
                    return Err(ctx);
                }
                if lm.points != orbit_count(d, m1, m2) || lm.points != g {
                    return Err(format!("point count, {ctx}"));
                }
                let (k1, k2) = (additive_order(dd, m1 / g), additive_order(dd, m2 / g));
                if rays[0] != (k1 as i64, 0) || *rays.last().unwrap() != (0, k2 as i64) || lm.n != k1 * k2 / dd {
                    return Err(format!("ramification, {ctx}"));
                }
                if lm.n > 1 {
                    let cf = cf_evaluate(&HJString::new(lm.bamboo.clone()).unwrap());
                    if cf != Rat::new((lm.n as i64).into(), (lm.q as i64).into()) {
                        return Err(format!("type n/q, {ctx}"));
                    }
                }
                cases += 1;
            }
        }
    }
    Ok(cases)
}

/// All coprime `0 < q < n ≤ nmax`: `hj_expand` agrees with the recursion
/// oracle, and `cf_evaluate` inverts it.
pub fn hj_suite(nmax: i64) -> Result<usize, String> {
    let mut cases = 0;
    for n in 2..=nmax {
        for q in 1..n {
            if gcd(n as u64, q as u64) != 1 {
                continue;
            }
            let s = hj_expand(n, q).map_err(|e| e.to_string())?;
            if s.coeffs() != hj_oracle(n, q).as_slice() || cf_evaluate(&s) != Rat::new(n.into(), q.into()) {
                return Err(format!("{n}/{q}: {:?}", s.coeffs()));
            }
            cases += 1;
        }
    }
    Ok(cases)
}

/// `valuations`, doubling the truncation from 64 on precision exhaustion.
pub fn valuations_retry(c: &Branch, sys: &TaggedSystem) -> Result<(u64, u64), CurveError> {
    let mut cap = 64;
    loop {
        match valuations(c, sys, cap) {
            Err(CurveError::PrecisionExhausted(_)) if cap < MAX_TRUNCATION => cap *= 2,
            r => return r,
        }
    }
}

/// `t → t^k` multiplies both valuations by `k` and keeps the contact
/// quotient, for `k ∈ 2..=5`, on `count` random branches against random
/// systems.
pub fn reparametrization_suite(seed: u64, count: usize) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    let mut i = 0u64;
    while done < count {
        let sys = random_system_sized(seed.wrapping_add(i), 3);
        i += 1;
        let c = random_branch(&mut rng);
        let Ok(base) = valuations_retry(&c, &sys) else { continue };
        let q = contact_quotient(&c, &sys).map_err(|e| e.to_string())?;
        for k in 2..=5u32 {
            let ck = reparametrize_cover(&c, k);
            let vk = valuations_retry(&ck, &sys).map_err(|e| format!("{}: {e}", c.label()))?;
            let qk = contact_quotient(&ck, &sys).map_err(|e| e.to_string())?;
            if vk != (base.0 * k as u64, base.1 * k as u64) || qk != q {
                return Err(format!("{} with k = {k}: {vk:?} vs {base:?}", c.label()));
            }
        }
        done += 1;
    }
    Ok(done)
}
