//! The known correspondences between level-8 varieties as a directed multigraph.

use serde::Serialize;

use super::Registry;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: String,
    pub to: String,
    /// Degree label `a:b`.
    pub degree: String,
    /// Catalog map certifying the edge, when one is encoded.
    pub via: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorrespondenceGraph {
    /// Node ids with their type labels.
    pub nodes: Vec<(String, String)>,
    pub edges: Vec<Edge>,
}

const EDGES: [(&str, &str, &str, Option<&str>); 14] = [
    ("T44", "T70_1", "8:1", Some("cover_T44_T70_1")),
    ("T44", "T70_1", "8:2", None),
    ("T28", "T44", "8:1", Some("cover_T28_T44")),
    ("T32", "T28", "8:1", Some("cover_T32_T28")),
    ("T40_3", "T44", "8:1", Some("cover_T40_3_T44")),
    ("T40_3", "T70_1", "64:1", Some("cover_T40_3_T70_1")),
    ("T32_1", "T40_1", "2:1", Some("phi")),
    ("T40", "T44", "4:2", None),
    ("T40_1", "T36", "4:1", Some("psi")),
    ("T40_2", "T32_2", "2:1", Some("phi")),
    ("T50_V1", "T46", "4:2", None),
    ("T70", "T40_1", "4:1", Some("gamma_dual")),
    ("T32", "T70", "8:1", Some("T32_T70")),
    ("T50_V1", "T50_V2", "1:1", Some("cremona_V1_V2")),
];

/// One representative per type; the other models of a type are left out.
const NODES: [&str; 16] = [
    "T70", "T70_1", "T50_V1", "T50_V2", "T46", "T44", "T40", "T40_1", "T40_2", "T40_3", "T36",
    "T32", "T32_1", "T32_2", "T28", "T16",
];

pub fn correspondence_graph(reg: &Registry) -> CorrespondenceGraph {
    let nodes = NODES
        .iter()
        .filter_map(|id| {
            let v = reg.get(id).ok()?;
            Some((v.id.clone(), v.metadata.type_label.clone()?))
        })
        .collect();
    let edges = EDGES
        .iter()
        .map(|&(from, to, degree, via)| Edge {
            from: from.to_string(),
            to: to.to_string(),
            degree: degree.to_string(),
            via: via.map(str::to_string),
        })
        .collect();
    CorrespondenceGraph { nodes, edges }
}

impl CorrespondenceGraph {
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph correspondences {\n  rankdir=LR;\n");
        for (id, label) in &self.nodes {
            s.push_str(&format!("  \"{id}\" [label=\"{label}\"];\n"));
        }
        for e in &self.edges {
            s.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                e.from, e.to, e.degree
            ));
        }
        s.push_str("}\n");
        s
    }

    pub fn has_edge(&self, from: &str, to: &str, degree: &str) -> bool {
        self.edges
            .iter()
            .any(|e| e.from == from && e.to == to && e.degree == degree)
    }
}
