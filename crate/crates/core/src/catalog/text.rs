//! Structured-text catalog files.
//!
//! ```text
//! # comment
//! [variety my_octic]
//! shape = double_octic
//! factor = 1 1 0 0 0            # x
//! factor = 1 1 0 0 0; -1 0 1 0 0  # x - y
//! # ... one line per factor, eight linear factors in all
//! twist = 1
//! chi = 140
//! ```
//!
//! A polynomial is a `;`-separated list of terms, each an integer coefficient
//! followed by one exponent per variable. Variables are x, y, z, t for
//! double octics and quadric intersections, and `nvars` otherwise.

use super::{resolve_fibration, CatalogError, Metadata, Shape, VarietySpec};
use crate::elliptic::Mobius;
use crate::symbolic::poly::{q, Poly};

/// Parse one polynomial in `nvars` variables.
pub fn parse_poly(s: &str, nvars: usize) -> Result<Poly, String> {
    let mut p = Poly::zero(nvars);
    for term in s.split(';').map(str::trim).filter(|t| !t.is_empty()) {
        let nums: Vec<i64> = term
            .split_whitespace()
            .map(|w| {
                w.parse::<i64>()
                    .map_err(|_| format!("`{w}` is not an integer"))
            })
            .collect::<Result<_, _>>()?;
        if nums.len() != nvars + 1 {
            return Err(format!(
                "term `{term}` needs a coefficient and {nvars} exponents"
            ));
        }
        if nums[1..].iter().any(|&e| e < 0) {
            return Err(format!("negative exponent in `{term}`"));
        }
        let exps: Vec<u32> = nums[1..].iter().map(|&e| e as u32).collect();
        p = p + Poly::monomial(nvars, &exps, q(nums[0]));
    }
    if p.is_zero() {
        return Err("polynomial is zero".into());
    }
    Ok(p)
}

#[derive(Default)]
struct Section {
    id: String,
    line: usize,
    fields: Vec<(usize, String, String)>,
}

fn err(line: usize, field: &str, message: impl Into<String>) -> CatalogError {
    CatalogError::Parse {
        line,
        field: field.to_string(),
        message: message.into(),
    }
}

fn int<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T, CatalogError> {
    v.parse()
        .map_err(|_| err(line, key, format!("`{v}` is not an integer")))
}

fn build(sec: Section) -> Result<VarietySpec, CatalogError> {
    let mut shape_name = None;
    let mut nvars = None;
    let mut polys: Vec<(usize, String, String)> = Vec::new();
    let mut twist = 1i64;
    let mut small = false;
    let (mut left, mut right, mut mobius) = (None, None, None);
    let mut m = Metadata::default();
    for (line, key, val) in sec.fields {
        let l = line;
        match key.as_str() {
            "shape" => shape_name = Some((l, val)),
            "nvars" => nvars = Some(int::<usize>(l, &key, &val)?),
            "factor" | "form" | "equation" => polys.push((l, key, val)),
            "twist" => twist = int(l, &key, &val)?,
            "small_resolution" => {
                small = val
                    .parse()
                    .map_err(|_| err(l, &key, "expected true or false"))?
            }
            "left" | "right" => {
                resolve_fibration(&val).map_err(|e| err(l, &key, e.to_string()))?;
                if key == "left" {
                    left = Some(val);
                } else {
                    right = Some(val);
                }
            }
            "mobius" => {
                let c: Vec<i64> = val
                    .split_whitespace()
                    .map(|w| int(l, &key, w))
                    .collect::<Result<_, _>>()?;
                let [a, b, cc, d] = c[..] else {
                    return Err(err(l, &key, "expected four integers a b c d"));
                };
                mobius = Some(Mobius::new(a, b, cc, d).map_err(|e| err(l, &key, e.to_string()))?);
            }
            "chi" => m.chi = Some(int(l, &key, &val)?),
            "h11" => m.h11 = Some(int(l, &key, &val)?),
            "h12" => m.h12 = Some(int(l, &key, &val)?),
            "level" => m.level = Some(int(l, &key, &val)?),
            "arrangement" => m.arrangement = Some(int(l, &key, &val)?),
            "arrangement_alt" => m.arrangement_alt = Some(int(l, &key, &val)?),
            "type" => m.type_label = Some(val),
            "note" => m.note = Some(val),
            _ => return Err(err(l, &key, "unknown field")),
        }
    }
    let Some((sl, shape_name)) = shape_name else {
        return Err(err(sec.line, "shape", "missing"));
    };
    let parse_all = |want: &str, n: usize| -> Result<Vec<Poly>, CatalogError> {
        polys
            .iter()
            .map(|(l, k, v)| {
                if k != want {
                    return Err(err(*l, k, format!("not allowed for shape {shape_name}")));
                }
                parse_poly(v, n).map_err(|e| err(*l, k, e))
            })
            .collect()
    };
    let shape = match shape_name.as_str() {
        "double_octic" => Shape::DoubleOctic {
            factors: parse_all("factor", 4)?,
            twist,
        },
        "quadric_intersection" => Shape::QuadricIntersection {
            forms: parse_all("form", 4)?,
            small_resolution: small,
        },
        "fermi_affine" => Shape::FermiAffine,
        "fiber_product" => Shape::FiberProduct {
            left: left.ok_or_else(|| err(sec.line, "left", "missing"))?,
            right: right.ok_or_else(|| err(sec.line, "right", "missing"))?,
            mobius,
            twist,
        },
        "hypersurface" | "complete_intersection" => {
            let n = nvars.ok_or_else(|| err(sec.line, "nvars", "missing"))?;
            let eqs = parse_all("equation", n)?;
            if shape_name == "hypersurface" {
                let [eq] = <[Poly; 1]>::try_from(eqs)
                    .map_err(|_| err(sec.line, "equation", "exactly one equation expected"))?;
                Shape::Hypersurface { equation: eq }
            } else {
                Shape::CompleteIntersection { equations: eqs }
            }
        }
        other => return Err(err(sl, "shape", format!("unknown shape `{other}`"))),
    };
    let v = VarietySpec {
        id: sec.id,
        shape,
        metadata: m,
    };
    v.validate()
        .map_err(|e| err(sec.line, "shape", e.to_string()))?;
    Ok(v)
}

/// Parse a structured-text catalog.
pub fn parse_catalog(text: &str) -> Result<Vec<VarietySpec>, CatalogError> {
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.split('#').next().unwrap().trim();
        if s.is_empty() {
            continue;
        }
        if let Some(head) = s.strip_prefix('[') {
            let head = head
                .strip_suffix(']')
                .ok_or_else(|| err(line, "section", "missing `]`"))?;
            let id = match head.split_whitespace().collect::<Vec<_>>()[..] {
                ["variety", id] => id.to_string(),
                _ => return Err(err(line, "section", "expected `[variety <id>]`")),
            };
            if sections.iter().any(|s| s.id == id) {
                return Err(CatalogError::Duplicate(id));
            }
            sections.push(Section {
                id,
                line,
                fields: Vec::new(),
            });
            continue;
        }
        let (k, v) = s
            .split_once('=')
            .ok_or_else(|| err(line, "", "expected `key = value`"))?;
        let sec = sections
            .last_mut()
            .ok_or_else(|| err(line, k.trim(), "field outside a section"))?;
        sec.fields
            .push((line, k.trim().to_string(), v.trim().to_string()));
    }
    sections.into_iter().map(build).collect()
}

/// Render entries in the structured-text format.
pub fn render_catalog(entries: &[VarietySpec]) -> String {
    fn poly(p: &Poly) -> String {
        p.terms()
            .map(|(m, c)| {
                let mut s = c.to_string();
                for e in m.exps() {
                    s.push_str(&format!(" {e}"));
                }
                s
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
    let mut out = String::new();
    for v in entries {
        out.push_str(&format!("[variety {}]\nshape = {}\n", v.id, v.shape.name()));
        match &v.shape {
            Shape::DoubleOctic { factors, twist } => {
                for f in factors {
                    out.push_str(&format!("factor = {}\n", poly(f)));
                }
                out.push_str(&format!("twist = {twist}\n"));
            }
            Shape::QuadricIntersection {
                forms,
                small_resolution,
            } => {
                for f in forms {
                    out.push_str(&format!("form = {}\n", poly(f)));
                }
                out.push_str(&format!("small_resolution = {small_resolution}\n"));
            }
            Shape::FermiAffine => {}
            Shape::FiberProduct {
                left,
                right,
                mobius,
                twist,
            } => {
                out.push_str(&format!(
                    "left = {left}\nright = {right}\ntwist = {twist}\n"
                ));
                if let Some(m) = mobius {
                    out.push_str(&format!("mobius = {} {} {} {}\n", m.a, m.b, m.c, m.d));
                }
            }
            Shape::Hypersurface { equation } => {
                out.push_str(&format!(
                    "nvars = {}\nequation = {}\n",
                    equation.nvars(),
                    poly(equation)
                ));
            }
            Shape::CompleteIntersection { equations } => {
                let n = equations.first().map_or(0, |e| e.nvars());
                out.push_str(&format!("nvars = {n}\n"));
                for e in equations {
                    out.push_str(&format!("equation = {}\n", poly(e)));
                }
            }
        }
        let m = &v.metadata;
        let nums = [
            ("chi", m.chi),
            ("h11", m.h11),
            ("h12", m.h12),
            ("level", m.level.map(i64::from)),
            ("arrangement", m.arrangement.map(i64::from)),
            ("arrangement_alt", m.arrangement_alt.map(i64::from)),
        ];
        for (k, val) in nums {
            if let Some(x) = val {
                out.push_str(&format!("{k} = {x}\n"));
            }
        }
        if let Some(t) = &m.type_label {
            out.push_str(&format!("type = {t}\n"));
        }
        if let Some(n) = &m.note {
            out.push_str(&format!("note = {}\n", n.replace('#', "")));
        }
        out.push('\n');
    }
    out
}
