//! Shared fixtures for the benchmarks.

use cy8_core::catalog::{Registry, Shape};
use cy8_core::Poly;

pub fn octic(reg: &Registry, id: &str) -> (Vec<Poly>, i64) {
    match &reg.get(id).expect("built-in id").shape {
        Shape::DoubleOctic { factors, twist } => (factors.clone(), *twist),
        _ => panic!("{id} is not a double octic"),
    }
}

pub fn quadrics(reg: &Registry, id: &str) -> Vec<Poly> {
    match &reg.get(id).expect("built-in id").shape {
        Shape::QuadricIntersection { forms, .. } => forms.clone(),
        _ => panic!("{id} is not a quadric intersection"),
    }
}
