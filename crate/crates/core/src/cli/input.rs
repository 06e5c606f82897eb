//! Structured input files: branch systems and cyclic cover specifications.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{fmt_rat, parse_rat, ArithError};
use crate::curve::{Branch, CurveError, Series, TaggedSystem};
use crate::resolve::AxisCurve;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("malformed input: {0}")]
    Schema(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoleTag {
    F,
    G,
    Delta,
}

/// `{ "x": [[exp, "coef"], …], "y": …, "role": "f"|"g"|"delta", "mult", "name" }`;
/// an optional `precision` marks both series as truncated there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchInput {
    #[serde(default)]
    pub x: Vec<(u32, String)>,
    #[serde(default)]
    pub y: Vec<(u32, String)>,
    #[serde(default = "default_role")]
    pub role: RoleTag,
    #[serde(default = "one")]
    pub mult: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
}

fn default_role() -> RoleTag {
    RoleTag::Delta
}

fn one() -> u64 {
    1
}

fn series(terms: &[(u32, String)], prec: Option<u32>) -> Result<Series, InputError> {
    let parsed = terms
        .iter()
        .map(|(e, c)| Ok((*e, parse_rat(c)?)))
        .collect::<Result<Vec<_>, ArithError>>()?;
    if let Some(p) = prec {
        if let Some((e, _)) = terms.iter().find(|(e, _)| *e >= p) {
            return Err(InputError::Schema(format!("exponent {e} is not below the precision {p}")));
        }
        return Ok(Series::truncated(parsed, p));
    }
    Ok(Series::exact(parsed))
}

impl BranchInput {
    pub fn to_branch(&self) -> Result<Branch, InputError> {
        if self.mult == 0 {
            return Err(InputError::Schema(format!("branch {:?} has multiplicity 0", self.name)));
        }
        let mut b = Branch::new_unchecked(series(&self.x, self.precision)?, series(&self.y, self.precision)?);
        if let Some(n) = &self.name {
            b = b.named(n.clone());
        }
        b.validate()?;
        Ok(b)
    }

    pub fn from_branch(b: &Branch, role: RoleTag, mult: u64) -> BranchInput {
        let terms = |s: &Series| s.terms().iter().map(|(e, c)| (*e, fmt_rat(c))).collect();
        BranchInput { x: terms(&b.x), y: terms(&b.y), role, mult, name: b.name.clone(), precision: b.x.precision() }
    }
}

/// A branch system; `with_axes` names the coordinate (`"x"` or `"y"`) that
/// is added as an f-branch, the other one becoming a g-branch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemInput {
    pub branches: Vec<BranchInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub with_axes: Option<AxisName>,
}

/// A coordinate function; its zero set is the corresponding axis line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisName {
    X,
    Y,
}

impl AxisName {
    /// The line `{name = 0}`.
    pub fn zero_set(self) -> AxisCurve {
        match self {
            AxisName::X => AxisCurve::XZero,
            AxisName::Y => AxisCurve::YZero,
        }
    }
}

impl std::str::FromStr for AxisName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "x" => Ok(AxisName::X),
            "y" => Ok(AxisName::Y),
            _ => Err(format!("expected \"x\" or \"y\", got {s:?}")),
        }
    }
}

impl SystemInput {
    pub fn to_system(&self) -> Result<TaggedSystem, InputError> {
        let mut sys = TaggedSystem::default();
        for bi in &self.branches {
            let b = bi.to_branch()?;
            match bi.role {
                RoleTag::F => sys.f.push((b, bi.mult)),
                RoleTag::G => sys.g.push((b, bi.mult)),
                RoleTag::Delta => sys.extra.push((b, bi.mult)),
            }
        }
        Ok(sys)
    }

    pub fn from_system(sys: &TaggedSystem) -> SystemInput {
        let mut branches = Vec::new();
        for (role, b, m) in sys.all() {
            let tag = match role {
                crate::curve::Role::F => RoleTag::F,
                crate::curve::Role::G => RoleTag::G,
                crate::curve::Role::Delta => RoleTag::Delta,
            };
            branches.push(BranchInput::from_branch(b, tag, m));
        }
        SystemInput { branches, with_axes: None }
    }
}

/// `{ "degree": d, "h_branches": [branch…], "f_role": "x"|"y", "g_role": "x"|"y" }`:
/// the cover `z^d = h` with `f` and `g` the pulled-back coordinate functions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverInput {
    pub degree: u64,
    pub h_branches: Vec<BranchInput>,
    pub f_role: AxisName,
    pub g_role: AxisName,
}

impl CoverInput {
    /// The h-branches with multiplicities and the axis on which `f` vanishes.
    pub fn parts(&self) -> Result<(Vec<(Branch, u64)>, AxisCurve), InputError> {
        if self.f_role == self.g_role {
            return Err(InputError::Schema("f_role and g_role must be different coordinates".into()));
        }
        let h = self.h_branches.iter().map(|b| Ok((b.to_branch()?, b.mult))).collect::<Result<Vec<_>, InputError>>()?;
        Ok((h, self.f_role.zero_set()))
    }
}

pub fn parse_system(s: &str) -> Result<SystemInput, InputError> {
    serde_json::from_str(s).map_err(|e| InputError::Schema(e.to_string()))
}

pub fn parse_cover(s: &str) -> Result<CoverInput, InputError> {
    serde_json::from_str(s).map_err(|e| InputError::Schema(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_branch_system() {
        let s = r#"{ "branches": [
            { "x": [[3, "1"]], "y": [[2, "1"]], "role": "f", "mult": 2, "name": "cusp" },
            { "x": [[1, "1"]], "y": [[1, "-1/2"]], "role": "g" } ], "with_axes": null }"#;
        let sys = parse_system(s).unwrap().to_system().unwrap();
        assert_eq!(sys.f.len(), 1);
        assert_eq!(sys.f[0].1, 2);
        assert_eq!(sys.g[0].0.y.coeff(1), crate::arith::rat(-1, 2));
    }

    #[test]
    fn rejects_non_primitive() {
        let s = r#"{ "branches": [ { "x": [[2, "1"]], "y": [[4, "1"]], "role": "f" } ] }"#;
        assert!(matches!(parse_system(s).unwrap().to_system(), Err(InputError::Curve(CurveError::InvalidBranch(..)))));
    }

    #[test]
    fn truncated_series() {
        let s = r#"{ "branches": [ { "x": [[1, "1"]], "y": [[2, "1"]], "role": "f", "precision": 5 } ] }"#;
        let sys = parse_system(s).unwrap().to_system().unwrap();
        assert_eq!(sys.f[0].0.y.precision(), Some(5));
    }

    #[test]
    fn round_trip() {
        let b = Branch::poly(&[(3, 1)], &[(2, 1), (5, -3)]).named("b");
        let bi = BranchInput::from_branch(&b, RoleTag::F, 1);
        let back = bi.to_branch().unwrap();
        assert_eq!(back.x, b.x);
        assert_eq!(back.y, b.y);
    }
}
