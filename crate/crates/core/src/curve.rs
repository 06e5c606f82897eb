//! Parametrized plane curve branches, valuations, intersection multiplicities
//! and contact quotients.
//!
//! A branch is a pair of power series `(x(t), y(t))` with rational
//! coefficients. Series carry an explicit precision: coefficients at
//! exponents at or above the precision are unknown, and any computation that
//! would need them fails with [`CurveError::PrecisionExhausted`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{fmt_rat, rat_int, ArithError, Quotient, Rat};

/// Default absolute truncation exponent for series inverses.
pub const DEFAULT_TRUNCATION: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("precision exhausted while processing {0}")]
    PrecisionExhausted(String),
    #[error("branches {0} and {1} are identical")]
    IdenticalBranches(String, String),
    #[error("branch {0} is a branch of {{fg = 0}}")]
    BranchOfFG(String),
    #[error("branch {0} is contained in a coordinate axis")]
    AxisBranch(String),
    #[error("invalid branch {0}: {1}")]
    InvalidBranch(String, String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Order of a series: known, bounded below by the precision, or the series is
/// exactly zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(u32),
    AtLeast(u32),
    Infinite,
}

impl Order {
    /// Lower bound usable in precision bookkeeping (`None` = infinite).
    fn lower_bound(self) -> Option<u32> {
        match self {
            Order::Finite(n) | Order::AtLeast(n) => Some(n),
            Order::Infinite => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::AtLeast(n) => write!(f, "unknown(>={n})"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

fn min_opt(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

fn add_opt(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    }
}

/// A truncated power series in one variable `t` with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    terms: BTreeMap<u32, Rat>,
    /// `None` means the series is exact (a polynomial).
    prec: Option<u32>,
}

impl Series {
    /// An exact polynomial.
    pub fn exact<I: IntoIterator<Item = (u32, Rat)>>(terms: I) -> Series {
        Series::build(terms, None)
    }

    /// A series known only below exponent `prec`.
    pub fn truncated<I: IntoIterator<Item = (u32, Rat)>>(terms: I, prec: u32) -> Series {
        Series::build(terms, Some(prec))
    }

    fn build<I: IntoIterator<Item = (u32, Rat)>>(terms: I, prec: Option<u32>) -> Series {
        let mut map: BTreeMap<u32, Rat> = BTreeMap::new();
        for (e, c) in terms {
            if prec.map_or(true, |p| e < p) {
                *map.entry(e).or_insert_with(Rat::zero) += c;
            }
        }
        map.retain(|_, c| !c.is_zero());
        Series { terms: map, prec }
    }

    pub fn zero() -> Series {
        Series::exact([])
    }

    pub fn monomial(c: Rat, e: u32) -> Series {
        Series::exact([(e, c)])
    }

    /// `t`
    pub fn t() -> Series {
        Series::monomial(Rat::one(), 1)
    }

    /// Exact polynomial from integer coefficients.
    pub fn from_ints(terms: &[(u32, i64)]) -> Series {
        Series::exact(terms.iter().map(|&(e, c)| (e, rat_int(c))))
    }

    pub fn terms(&self) -> &BTreeMap<u32, Rat> {
        &self.terms
    }

    pub fn precision(&self) -> Option<u32> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// `true` iff the series is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.prec.is_none() && self.terms.is_empty()
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn ord(&self) -> Order {
        match self.terms.keys().next() {
            Some(&e) => Order::Finite(e),
            None => match self.prec {
                Some(p) => Order::AtLeast(p),
                None => Order::Infinite,
            },
        }
    }

    /// Leading exponent and coefficient, if known.
    pub fn lead(&self) -> Option<(u32, &Rat)> {
        self.terms.iter().next().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: u32) -> Rat {
        self.terms.get(&e).cloned().unwrap_or_else(Rat::zero)
    }

    /// Largest exponent of an exact polynomial.
    pub fn degree(&self) -> Option<u32> {
        if self.prec.is_some() {
            return None;
        }
        Some(self.terms.keys().next_back().copied().unwrap_or(0))
    }

    pub fn add(&self, other: &Series) -> Series {
        let prec = min_opt(self.prec, other.prec);
        let terms = self.terms.iter().chain(other.terms.iter()).map(|(e, c)| (*e, c.clone()));
        Series::build(terms, prec)
    }

    pub fn neg(&self) -> Series {
        Series {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> Series {
        if c.is_zero() {
            return Series { terms: BTreeMap::new(), prec: self.prec };
        }
        Series {
            terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect(),
            prec: self.prec,
        }
    }

    /// Product; the result is known below `min(Pa + ord b, Pb + ord a)`.
    pub fn mul(&self, other: &Series) -> Series {
        if self.is_zero() || other.is_zero() {
            return Series::zero();
        }
        let prec = min_opt(
            add_opt(self.prec, other.ord().lower_bound()),
            add_opt(other.prec, self.ord().lower_bound()),
        );
        let mut out: BTreeMap<u32, Rat> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if prec.map_or(true, |p| e < p) {
                    *out.entry(e).or_insert_with(Rat::zero) += ca * cb;
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        Series { terms: out, prec }
    }

    pub fn pow(&self, k: u32) -> Series {
        let mut acc = Series::monomial(Rat::one(), 0);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Divides by `t^a`; every known term must have exponent `≥ a`.
    pub fn shift_down(&self, a: u32) -> Option<Series> {
        if self.terms.keys().next().map_or(false, |&e| e < a) {
            return None;
        }
        let prec = match self.prec {
            Some(p) if p < a => return None,
            Some(p) => Some(p - a),
            None => None,
        };
        Some(Series {
            terms: self.terms.iter().map(|(e, c)| (e - a, c.clone())).collect(),
            prec,
        })
    }

    /// Inverse of a unit (nonzero constant term), truncated below `cap`
    /// unless the inverse is exact.
    pub fn inv_unit(&self, cap: u32) -> Option<Series> {
        let u0 = self.terms.get(&0)?.clone();
        let inv0 = u0.recip();
        if self.terms.len() == 1 {
            let prec = self.prec;
            return Some(Series { terms: BTreeMap::from([(0, inv0)]), prec });
        }
        let prec = self.prec.map_or(cap, |p| p.min(cap));
        let mut v: Vec<Rat> = Vec::with_capacity(prec as usize);
        for n in 0..prec {
            if n == 0 {
                v.push(inv0.clone());
                continue;
            }
            let mut s = Rat::zero();
            for (&k, uk) in self.terms.range(1..=n) {
                let vk = &v[(n - k) as usize];
                if !vk.is_zero() {
                    s += uk * vk;
                }
            }
            v.push(-(s * &inv0));
        }
        Some(Series::truncated(v.into_iter().enumerate().map(|(e, c)| (e as u32, c)), prec))
    }

    /// Quotient `self / den`, requiring `ord(self) ≥ ord(den)`.
    pub fn div(&self, den: &Series, cap: u32) -> Option<Series> {
        if self.is_zero() {
            return Some(Series::zero());
        }
        let a = match den.ord() {
            Order::Finite(a) => a,
            _ => return None,
        };
        let unit = den.shift_down(a)?.inv_unit(cap.saturating_sub(a).max(1))?;
        let num = self.shift_down(a)?;
        Some(num.mul(&unit))
    }

    /// Substitutes `t → t^k`.
    pub fn substitute_power(&self, k: u32) -> Series {
        Series {
            terms: self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect(),
            prec: self.prec.map(|p| p * k),
        }
    }

    /// Composes `self(s(t))` for a series `s` with positive order.
    pub fn compose(&self, s: &Series) -> Series {
        let mut acc = match self.prec {
            Some(p) => {
                let bound = s.ord().lower_bound().map(|o| o * p);
                Series { terms: BTreeMap::new(), prec: bound }
            }
            None => Series::zero(),
        };
        for (e, c) in &self.terms {
            acc = acc.add(&s.pow(*e).scale(c));
        }
        acc
    }

    /// Forgets all coefficients at exponents `≥ prec`.
    pub fn truncate(&self, prec: u32) -> Series {
        Series::build(self.terms.iter().map(|(e, c)| (*e, c.clone())), Some(min_opt(self.prec, Some(prec)).unwrap()))
    }

    /// Subtracts a constant.
    pub fn sub_const(&self, c: &Rat) -> Series {
        self.sub(&Series::monomial(c.clone(), 0))
    }

    fn exponent_gcd(&self) -> u32 {
        self.terms.keys().fold(0u32, |g, &e| g.gcd(&e))
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})t^{}", fmt_rat(c), e)?;
        }
        if let Some(p) = self.prec {
            write!(f, " + O(t^{p})")?;
        }
        Ok(())
    }
}

/// Bivariate polynomial with rational coefficients, used as an implicit
/// equation oracle.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly2 {
    pub terms: BTreeMap<(u32, u32), Rat>,
}

impl Poly2 {
    pub fn from_ints(terms: &[((u32, u32), i64)]) -> Poly2 {
        let mut p = Poly2::default();
        for &((i, j), c) in terms {
            *p.terms.entry((i, j)).or_insert_with(Rat::zero) += rat_int(c);
        }
        p.terms.retain(|_, c| !c.is_zero());
        p
    }

    /// `F(x(t), y(t))`.
    pub fn substitute(&self, b: &Branch) -> Series {
        let mut acc = Series::zero();
        for ((i, j), c) in &self.terms {
            acc = acc.add(&b.x.pow(*i).mul(&b.y.pow(*j)).scale(c));
        }
        acc
    }

    /// `ord_t F(x(t), y(t))`, the intersection multiplicity with `{F = 0}`
    /// when the parametrization is primitive.
    pub fn order_on(&self, b: &Branch) -> Order {
        self.substitute(b).ord()
    }
}

/// A parametrized irreducible plane curve germ through the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub x: Series,
    pub y: Series,
    pub name: Option<String>,
    /// Optional implicit equation, used only as a test oracle.
    pub implicit: Option<Poly2>,
}

impl Branch {
    /// Validated constructor: not both zero, through the origin, primitive
    /// (to the known precision).
    pub fn new(x: Series, y: Series) -> Result<Branch, CurveError> {
        let b = Branch::new_unchecked(x, y);
        b.validate()?;
        Ok(b)
    }

    /// Constructor without the primitivity check (used for covering maps).
    pub fn new_unchecked(x: Series, y: Series) -> Branch {
        Branch { x, y, name: None, implicit: None }
    }

    pub fn named(mut self, name: impl Into<String>) -> Branch {
        self.name = Some(name.into());
        self
    }

    pub fn with_implicit(mut self, p: Poly2) -> Branch {
        self.implicit = Some(p);
        self
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("({}, {})", self.x, self.y))
    }

    /// Exact polynomial parametrization from integer coefficients.
    pub fn poly(x: &[(u32, i64)], y: &[(u32, i64)]) -> Branch {
        Branch::new(Series::from_ints(x), Series::from_ints(y)).expect("valid polynomial branch")
    }

    /// The axis `{x = 0}`, parametrized as `(0, t)`.
    pub fn axis_x_zero() -> Branch {
        Branch::new_unchecked(Series::zero(), Series::t()).named("x=0")
    }

    /// The axis `{y = 0}`, parametrized as `(t, 0)`.
    pub fn axis_y_zero() -> Branch {
        Branch::new_unchecked(Series::t(), Series::zero()).named("y=0")
    }

    pub fn validate(&self) -> Result<(), CurveError> {
        let label = self.label();
        let bad = |m: &str| Err(CurveError::InvalidBranch(label.clone(), m.to_string()));
        if self.x.is_zero() && self.y.is_zero() {
            return bad("both coordinates vanish identically");
        }
        if self.x.coeff(0) != Rat::zero() || self.y.coeff(0) != Rat::zero() {
            return bad("branch does not pass through the origin");
        }
        let g = self.x.exponent_gcd().gcd(&self.y.exponent_gcd());
        if g > 1 {
            return bad("parametrization is not primitive");
        }
        Ok(())
    }

    /// Both coordinates are exact polynomials.
    pub fn is_exact(&self) -> bool {
        self.x.is_exact() && self.y.is_exact()
    }

    /// Degree bound `max(deg x, deg y)` for exact parametrizations.
    pub fn degree_bound(&self) -> Option<u32> {
        Some(self.x.degree()?.max(self.y.degree()?).max(1))
    }

    pub fn local(&self) -> LocalBranch {
        LocalBranch { x: self.x.clone(), y: self.y.clone() }
    }

    /// Truncates both coordinates below `prec`.
    pub fn truncate(&self, prec: u32) -> Branch {
        Branch { x: self.x.truncate(prec), y: self.y.truncate(prec), ..self.clone() }
    }
}

/// A point on a new exceptional curve, seen from the chart of the blown-up
/// point: `Finite(c)` is the point where `y/x = c`, `Infinite` the point where
/// `x/y = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Direction {
    Finite(Rat),
    Infinite,
}

impl Ord for Direction {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Direction::Finite(a), Direction::Finite(b)) => a.cmp(b),
            (Direction::Finite(_), Direction::Infinite) => Ordering::Less,
            (Direction::Infinite, Direction::Finite(_)) => Ordering::Greater,
            (Direction::Infinite, Direction::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Direction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Finite(c) => write!(f, "{}", fmt_rat(c)),
            Direction::Infinite => write!(f, "inf"),
        }
    }
}

/// Local coordinates of a branch strict transform at an infinitely near
/// point (which is the origin of the current chart).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalBranch {
    pub x: Series,
    pub y: Series,
}

fn exhausted(ctx: &str) -> CurveError {
    CurveError::PrecisionExhausted(ctx.to_string())
}

impl LocalBranch {
    /// Compares `ord x` with `ord y`, failing when precision does not decide.
    fn order_cmp(&self, ctx: &str) -> Result<Ordering, CurveError> {
        match (self.x.ord(), self.y.ord()) {
            (Order::Finite(a), Order::Finite(b)) => Ok(a.cmp(&b)),
            (Order::Finite(a), Order::AtLeast(p)) if a < p => Ok(Ordering::Less),
            (Order::AtLeast(p), Order::Finite(b)) if b < p => Ok(Ordering::Greater),
            (Order::Finite(_), Order::Infinite) => Ok(Ordering::Less),
            (Order::Infinite, Order::Finite(_)) => Ok(Ordering::Greater),
            (Order::Infinite, Order::Infinite) => {
                Err(CurveError::InvalidBranch(ctx.to_string(), "branch vanishes identically".into()))
            }
            _ => Err(exhausted(ctx)),
        }
    }

    /// Multiplicity `min(ord x, ord y)` of the branch at the current point.
    pub fn mult(&self, ctx: &str) -> Result<u32, CurveError> {
        match self.order_cmp(ctx)? {
            Ordering::Greater => self.y.ord(),
            _ => self.x.ord(),
        }
        .pipe_finite(ctx)
    }

    /// The point of the next exceptional curve through which the branch
    /// passes.
    pub fn direction(&self, ctx: &str) -> Result<Direction, CurveError> {
        match self.order_cmp(ctx)? {
            Ordering::Greater => Ok(Direction::Infinite),
            Ordering::Less => Ok(Direction::Finite(Rat::zero())),
            Ordering::Equal => {
                let (_, cx) = self.x.lead().expect("finite order");
                let (_, cy) = self.y.lead().expect("finite order");
                Ok(Direction::Finite(cy / cx))
            }
        }
    }

    /// Strict transform in the chart centred at `dir`.
    pub fn chart(&self, dir: &Direction, cap: u32, ctx: &str) -> Result<LocalBranch, CurveError> {
        match dir {
            Direction::Finite(c) => {
                let q = self.y.div(&self.x, cap).ok_or_else(|| exhausted(ctx))?;
                Ok(LocalBranch { x: self.x.clone(), y: q.sub_const(c) })
            }
            Direction::Infinite => {
                let q = self.x.div(&self.y, cap).ok_or_else(|| exhausted(ctx))?;
                Ok(LocalBranch { x: q, y: self.y.clone() })
            }
        }
    }

    /// Order of the `x` coordinate, failing when unknown.
    pub fn ord_x(&self, ctx: &str) -> Result<Option<u32>, CurveError> {
        finite_or_inf(self.x.ord(), ctx)
    }

    /// Order of the `y` coordinate, failing when unknown.
    pub fn ord_y(&self, ctx: &str) -> Result<Option<u32>, CurveError> {
        finite_or_inf(self.y.ord(), ctx)
    }

    /// Both coordinates are exact polynomials or monomial quotients.
    pub fn is_exact(&self) -> bool {
        self.x.is_exact() && self.y.is_exact()
    }
}

fn finite_or_inf(o: Order, ctx: &str) -> Result<Option<u32>, CurveError> {
    match o {
        Order::Finite(n) => Ok(Some(n)),
        Order::Infinite => Ok(None),
        Order::AtLeast(_) => Err(exhausted(ctx)),
    }
}

trait PipeFinite {
    fn pipe_finite(self, ctx: &str) -> Result<u32, CurveError>;
}

impl PipeFinite for Order {
    fn pipe_finite(self, ctx: &str) -> Result<u32, CurveError> {
        match self {
            Order::Finite(n) => Ok(n),
            _ => Err(exhausted(ctx)),
        }
    }
}

/// Intersection multiplicity of two distinct branches by Noether's formula:
/// the sum over shared infinitely near points of the product of the
/// multiplicities of the strict transforms.
pub fn intersection_multiplicity(a: &Branch, b: &Branch) -> Result<u64, CurveError> {
    intersection_multiplicity_with(a, b, DEFAULT_TRUNCATION)
}

/// As [`intersection_multiplicity`] with an explicit series truncation.
pub fn intersection_multiplicity_with(a: &Branch, b: &Branch, cap: u32) -> Result<u64, CurveError> {
    let (na, nb) = (a.label(), b.label());
    let bound = match (a.degree_bound(), b.degree_bound()) {
        (Some(da), Some(db)) => Some(da as u64 * db as u64),
        _ => None,
    };
    let (mut la, mut lb) = (a.local(), b.local());
    let mut total = 0u64;
    let mut depth = 0u64;
    loop {
        let ma = la.mult(&na)? as u64;
        let mb = lb.mult(&nb)? as u64;
        total += ma * mb;
        depth += 1;
        if bound.map_or(false, |bd| depth > bd) {
            return Err(CurveError::IdenticalBranches(na, nb));
        }
        let da = la.direction(&na)?;
        let db = lb.direction(&nb)?;
        if da != db {
            return Ok(total);
        }
        la = la.chart(&da, cap, &na)?;
        lb = lb.chart(&db, cap, &nb)?;
    }
}

/// A pair of functions `f`, `g` given by their branches with multiplicities,
/// plus extra (e.g. discriminant) branches carried as starred curves.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TaggedSystem {
    pub f: Vec<(Branch, u64)>,
    pub g: Vec<(Branch, u64)>,
    pub extra: Vec<(Branch, u64)>,
}

/// Role of a branch in a tagged system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    F,
    G,
    Delta,
}

impl TaggedSystem {
    /// All branches with their role and multiplicity, in f, g, extra order.
    pub fn all(&self) -> impl Iterator<Item = (Role, &Branch, u64)> {
        self.f
            .iter()
            .map(|(b, m)| (Role::F, b, *m))
            .chain(self.g.iter().map(|(b, m)| (Role::G, b, *m)))
            .chain(self.extra.iter().map(|(b, m)| (Role::Delta, b, *m)))
    }

    /// The system `f = {x = 0}`, `g = {y = 0}`.
    pub fn axes() -> TaggedSystem {
        TaggedSystem {
            f: vec![(Branch::axis_x_zero(), 1)],
            g: vec![(Branch::axis_y_zero(), 1)],
            extra: vec![],
        }
    }
}

/// `V_f(c)` and `V_g(c)`.
pub fn valuations(c: &Branch, sys: &TaggedSystem, cap: u32) -> Result<(u64, u64), CurveError> {
    let v = |list: &[(Branch, u64)]| -> Result<u64, CurveError> {
        let mut s = 0;
        for (b, m) in list {
            match intersection_multiplicity_with(b, c, cap) {
                Ok(i) => s += m * i,
                Err(CurveError::IdenticalBranches(..)) => return Err(CurveError::BranchOfFG(c.label())),
                Err(e) => return Err(e),
            }
        }
        Ok(s)
    };
    Ok((v(&sys.f)?, v(&sys.g)?))
}

/// The contact quotient `V_f(c) / V_g(c)`.
pub fn contact_quotient(c: &Branch, sys: &TaggedSystem) -> Result<Quotient, CurveError> {
    contact_quotient_with(c, sys, DEFAULT_TRUNCATION)
}

pub fn contact_quotient_with(c: &Branch, sys: &TaggedSystem, cap: u32) -> Result<Quotient, CurveError> {
    let (vf, vg) = valuations(c, sys, cap)?;
    Ok(Quotient::ratio(vf, vg)?)
}

/// Substitutes `t → t^k`, modelling a ramified covering of the branch.
pub fn reparametrize_cover(c: &Branch, k: u32) -> Branch {
    Branch {
        x: c.x.substitute_power(k),
        y: c.y.substitute_power(k),
        name: c.name.clone(),
        implicit: c.implicit.clone(),
    }
}

/// `ord x / ord y`, the first Puiseux exponent of `x` as a series in `y`.
pub fn first_puiseux_exponent(c: &Branch) -> Result<Quotient, CurveError> {
    let label = c.label();
    match (c.x.ord(), c.y.ord()) {
        (Order::Finite(a), Order::Finite(b)) => Ok(Quotient::ratio(a as u64, b as u64)?),
        (Order::Infinite, _) | (_, Order::Infinite) => Err(CurveError::AxisBranch(label)),
        _ => Err(CurveError::PrecisionExhausted(label)),
    }
}
