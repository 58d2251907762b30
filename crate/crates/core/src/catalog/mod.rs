//! Registry of varieties, elliptic fibrations and explicit maps.
//!
//! The built-in registry is immutable once constructed. User catalog files
//! (structured text or JSON) may add entries but never replace a built-in id.

mod builtin;
mod graph;
mod maps;
mod text;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::elliptic::{
    el2, el4, from_quartic, x1128, EllipticError, KodairaType, Mobius, WeierstrassModel,
};
use crate::symbolic::poly::Poly;

pub use builtin::{fiber_product_rows, TableRow};
pub use graph::{correspondence_graph, CorrespondenceGraph, Edge};
pub use maps::{generic_quotient_certificate, MapCheck, MapSpec};
pub use text::{parse_catalog, parse_poly, render_catalog};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("line {line}, field `{field}`: {message}")]
    Parse {
        line: usize,
        field: String,
        message: String,
    },
    #[error("duplicate id {0}")]
    Duplicate(String),
    #[error("unknown id {0}")]
    Unknown(String),
    #[error("invalid entry {id}: {message}")]
    Invalid { id: String, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("JSON catalog: {0}")]
    Json(String),
}

/// Invariants attached to a variety. All fields are optional because several
/// models only carry an equation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub chi: Option<i64>,
    pub h11: Option<i64>,
    pub h12: Option<i64>,
    pub level: Option<u32>,
    /// Position in the arrangement-of-eight-planes classification.
    pub arrangement: Option<u32>,
    /// Position in the older, shorter arrangement list.
    pub arrangement_alt: Option<u32>,
    /// Type label such as `T_{40}^1`.
    pub type_label: Option<String>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    /// `w^2 = twist * prod factors`, a double cover of P^3 in P(1,1,1,1,4).
    DoubleOctic { factors: Vec<Poly>, twist: i64 },
    /// `u_i^2 = f_i(x, y, z, t)` in P^7.
    QuadricIntersection {
        forms: Vec<Poly>,
        /// Nodes only, resolved by small resolutions.
        small_resolution: bool,
    },
    /// `x + 1/x + y + 1/y + z + 1/z + t + 1/t = 0`.
    FermiAffine,
    /// Fiber product of `left` and `mobius^*(right)` twisted by `twist`.
    FiberProduct {
        left: String,
        right: String,
        mobius: Option<Mobius>,
        twist: i64,
    },
    /// Equation only.
    Hypersurface { equation: Poly },
    /// Equations only.
    CompleteIntersection { equations: Vec<Poly> },
}

impl Shape {
    pub fn name(&self) -> &'static str {
        match self {
            Shape::DoubleOctic { .. } => "double_octic",
            Shape::QuadricIntersection { .. } => "quadric_intersection",
            Shape::FermiAffine => "fermi_affine",
            Shape::FiberProduct { .. } => "fiber_product",
            Shape::Hypersurface { .. } => "hypersurface",
            Shape::CompleteIntersection { .. } => "complete_intersection",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietySpec {
    pub id: String,
    pub shape: Shape,
    #[serde(default)]
    pub metadata: Metadata,
}

impl VarietySpec {
    /// Expanded branch octic of a double octic.
    pub fn octic(&self) -> Option<Poly> {
        match &self.shape {
            Shape::DoubleOctic { factors, .. } => Some(Poly::product(4, factors)),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), CatalogError> {
        let bad = |message: String| {
            Err(CatalogError::Invalid {
                id: self.id.clone(),
                message,
            })
        };
        match &self.shape {
            Shape::DoubleOctic { factors, twist } => {
                if *twist == 0 {
                    return bad("twist must be nonzero".into());
                }
                if factors.iter().any(|f| f.nvars() != 4 || f.is_zero()) {
                    return bad("factors must be nonzero forms in x, y, z, t".into());
                }
                let f = Poly::product(4, factors);
                if !f.is_homogeneous() || f.total_degree() != Some(8) {
                    return bad("branch form must be homogeneous of degree 8".into());
                }
            }
            Shape::QuadricIntersection { forms, .. } => {
                if forms.len() != 4 {
                    return bad(format!("expected 4 quadrics, got {}", forms.len()));
                }
                for f in forms {
                    if f.nvars() != 4 || !f.is_homogeneous() || f.total_degree() != Some(2) {
                        return bad("forms must be quadratic in x, y, z, t".into());
                    }
                }
            }
            Shape::FiberProduct {
                left,
                right,
                mobius,
                twist,
            } => {
                if *twist == 0 {
                    return bad("twist must be nonzero".into());
                }
                if mobius.is_some_and(|m| m.det() == 0) {
                    return bad("Mobius map is singular".into());
                }
                for f in [left, right] {
                    if let Err(e) = resolve_fibration(f) {
                        return bad(e.to_string());
                    }
                }
            }
            Shape::Hypersurface { equation } => {
                if !equation.is_homogeneous() {
                    return bad("equation must be homogeneous".into());
                }
            }
            Shape::CompleteIntersection { equations } => {
                if equations.iter().any(|e| !e.is_homogeneous()) {
                    return bad("equations must be homogeneous".into());
                }
            }
            Shape::FermiAffine => {}
        }
        Ok(())
    }
}

/// Where a fibration's equation comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FibrationSource {
    /// Four linear forms `a x + b z + c t`, stored as `[a, b, c]`.
    Quartic(Vec<[i64; 3]>),
    /// Coefficient lists of `a2, a4, a6` in t.
    Weierstrass([Vec<i64>; 3]),
    /// The 2-isogenous quotient of a Weierstrass fibration with a6 = 0.
    Quotient(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FibrationSpec {
    pub id: String,
    pub lambda: Option<i64>,
    pub source: FibrationSource,
    /// Declared singular fibers as (type, location).
    pub declared: Vec<(String, String)>,
    /// Picard number of the generic fiber.
    pub rho: Option<u32>,
    pub label: Option<String>,
}

impl FibrationSpec {
    /// Weierstrass model over Q(t).
    pub fn model(&self) -> Result<WeierstrassModel, EllipticError> {
        match &self.source {
            FibrationSource::Quartic(forms) => {
                let polys: Vec<Poly> = forms.iter().map(|f| Poly::linear(f)).collect();
                from_quartic(&polys)
            }
            FibrationSource::Weierstrass([a, b, c]) => WeierstrassModel::from_int_polys(a, b, c),
            FibrationSource::Quotient(base) => {
                let m = resolve_fibration(base)
                    .map_err(|_| EllipticError::BadQuartic)?
                    .model()?;
                if !m.a6().is_zero() {
                    return Err(EllipticError::DegenerateTorsion);
                }
                Ok(crate::elliptic::quotient_by_two_torsion(m.a2(), m.a4())?.target)
            }
        }
    }

    /// Declared fibers with the type names parsed.
    pub fn declared_types(&self) -> Vec<(KodairaType, String)> {
        self.declared
            .iter()
            .map(|(k, p)| {
                (
                    KodairaType::parse(k).expect("built-in fiber names parse"),
                    p.clone(),
                )
            })
            .collect()
    }
}

impl fmt::Display for FibrationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.lambda {
            Some(l) => write!(f, "{}({l})", self.id),
            None => write!(f, "{}", self.id),
        }
    }
}

/// Value used for the lambda families when no parameter is given.
pub const DEFAULT_LAMBDA: i64 = 3;

/// Resolve a fibration reference such as `S1`, `S3(2)` or `X1128`.
pub fn resolve_fibration(name: &str) -> Result<FibrationSpec, CatalogError> {
    let name = name.trim();
    let (base, lambda) = match name.split_once('(') {
        Some((b, rest)) => {
            let l = rest
                .strip_suffix(')')
                .and_then(|s| s.trim().parse::<i64>().ok())
                .ok_or_else(|| CatalogError::Unknown(name.to_string()))?;
            (b.trim(), Some(l))
        }
        None => (name, None),
    };
    builtin::fibration(base, lambda).ok_or_else(|| CatalogError::Unknown(name.to_string()))
}

/// Ids of the built-in fibrations.
pub fn fibration_ids() -> Vec<&'static str> {
    builtin::FIBRATION_IDS.to_vec()
}

/// The named Weierstrass models that are not quartic-table entries.
pub fn named_model(id: &str) -> Option<WeierstrassModel> {
    match id {
        "el2" => Some(el2()),
        "el4" => Some(el4()),
        "X1128" => Some(x1128()),
        _ => None,
    }
}

#[derive(Clone, Debug)]
pub struct Registry {
    varieties: BTreeMap<String, VarietySpec>,
    aliases: BTreeMap<String, String>,
    maps: Vec<MapSpec>,
    rows: Vec<TableRow>,
}

impl Registry {
    pub fn builtin() -> Registry {
        let mut varieties = BTreeMap::new();
        for v in builtin::varieties() {
            v.validate().expect("built-in entries are valid");
            let prev = varieties.insert(v.id.clone(), v);
            assert!(prev.is_none(), "duplicate built-in id");
        }
        Registry {
            varieties,
            aliases: builtin::aliases()
                .into_iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            maps: maps::builtin_maps(),
            rows: builtin::fiber_product_rows(),
        }
    }

    /// Built-ins extended by the entries of a catalog file.
    pub fn load(path: Option<&Path>) -> Result<Registry, CatalogError> {
        let mut reg = Registry::builtin();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path).map_err(|e| CatalogError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            reg.extend_from_str(&text)?;
        }
        Ok(reg)
    }

    /// Add entries from structured text or JSON (detected by the first
    /// non-blank character).
    pub fn extend_from_str(&mut self, text: &str) -> Result<(), CatalogError> {
        let entries = if text.trim_start().starts_with(['[', '{'])
            && !text.trim_start().starts_with("[variety")
        {
            parse_json(text)?
        } else {
            parse_catalog(text)?
        };
        self.extend(entries)
    }

    pub fn extend(&mut self, entries: Vec<VarietySpec>) -> Result<(), CatalogError> {
        for v in &entries {
            if self.varieties.contains_key(&v.id) || self.aliases.contains_key(&v.id) {
                return Err(CatalogError::Duplicate(v.id.clone()));
            }
            v.validate()?;
        }
        for v in entries {
            if self.varieties.contains_key(&v.id) {
                return Err(CatalogError::Duplicate(v.id));
            }
            self.varieties.insert(v.id.clone(), v);
        }
        Ok(())
    }

    pub fn get(&self, id: &str) -> Result<&VarietySpec, CatalogError> {
        let key = self.aliases.get(id).map(String::as_str).unwrap_or(id);
        self.varieties
            .get(key)
            .ok_or_else(|| CatalogError::Unknown(id.to_string()))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.get(id).is_ok()
    }

    /// Canonical id for an id or alias.
    pub fn canonical<'a>(&'a self, id: &'a str) -> &'a str {
        self.aliases.get(id).map(String::as_str).unwrap_or(id)
    }

    pub fn varieties(&self) -> impl Iterator<Item = &VarietySpec> {
        self.varieties.values()
    }

    pub fn aliases(&self) -> &BTreeMap<String, String> {
        &self.aliases
    }

    pub fn maps(&self) -> &[MapSpec] {
        &self.maps
    }

    pub fn map(&self, id: &str) -> Result<&MapSpec, CatalogError> {
        self.maps
            .iter()
            .find(|m| m.id == id)
            .ok_or_else(|| CatalogError::Unknown(id.to_string()))
    }

    pub fn rows(&self) -> &[TableRow] {
        &self.rows
    }

    /// Whether an id names a variety, an alias or a fibration.
    pub fn resolves(&self, id: &str) -> bool {
        self.contains(id) || resolve_fibration(id).is_ok()
    }

    /// Varieties attached to the level-8 newform.
    pub fn level8(&self) -> Vec<&VarietySpec> {
        self.varieties
            .values()
            .filter(|v| v.metadata.level == Some(8))
            .collect()
    }
}

fn parse_json(text: &str) -> Result<Vec<VarietySpec>, CatalogError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CatalogError::Json(e.to_string()))?;
    let entries = match value {
        serde_json::Value::Array(_) => serde_json::from_value(value),
        _ => serde_json::from_value(value).map(|v: VarietySpec| vec![v]),
    };
    entries.map_err(|e| CatalogError::Json(e.to_string()))
}

#[cfg(test)]
mod tests;
