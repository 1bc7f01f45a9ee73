//! Recovery hypergraphs.
//!
//! Vertices are the `n` servers. Each recovery set of object `j` becomes an
//! edge labelled `j`; a single-column set is joined to an auxiliary vertex so
//! that no edge is a loop. The auxiliary vertex has unlimited capacity and is
//! left out of every capacity row downstream.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::recovery::{
    canonical_order, oracle_all_objects, second_smallest_recovery_sets, smallest_recovery_set,
};
use crate::rm::RmParams;

/// Id used for the auxiliary vertex in exports.
pub const AUXILIARY_ID: usize = 0;

/// Which recovery sets become edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgePolicy {
    /// Every minimal recovery set, by brute force.
    Oracle,
    /// Smallest and second-smallest sets from the geometric constructions.
    Geometric,
}

impl EdgePolicy {
    pub fn is_exact(self) -> bool {
        self == EdgePolicy::Oracle
    }
}

impl fmt::Display for EdgePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgePolicy::Oracle => "oracle",
            EdgePolicy::Geometric => "geometric",
        })
    }
}

impl FromStr for EdgePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(EdgePolicy::Oracle),
            "geometric" => Ok(EdgePolicy::Geometric),
            other => Err(Error::Parse(format!("unknown edge policy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    /// Object index `j` (1-based).
    pub label: usize,
    /// Server vertices, 1-based and ascending.
    pub servers: Vec<usize>,
    /// True for a single-server edge closed off by the auxiliary vertex.
    pub auxiliary: bool,
}

impl Edge {
    fn from_columns(label: usize, columns: Vec<usize>) -> Self {
        let auxiliary = columns.len() == 1;
        Edge {
            label,
            servers: columns,
            auxiliary,
        }
    }

    /// Vertex count including the auxiliary vertex.
    pub fn size(&self) -> usize {
        self.servers.len() + usize::from(self.auxiliary)
    }

    pub fn contains_server(&self, v: usize) -> bool {
        self.servers.binary_search(&v).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoveryHypergraph {
    pub params: RmParams,
    pub policy: EdgePolicy,
    servers: Vec<usize>,
    auxiliary: bool,
    edges: Vec<Edge>,
}

impl RecoveryHypergraph {
    /// Assembles a hypergraph from explicit edges; edges are sorted by label
    /// and then by `(size, lexicographic)` column order.
    pub fn from_edges(
        params: RmParams,
        policy: EdgePolicy,
        servers: Vec<usize>,
        mut edges: Vec<Edge>,
    ) -> Result<Self> {
        let n = params.n();
        for e in &edges {
            if e.label == 0 || e.label > params.k() {
                return Err(Error::ObjectOutOfRange {
                    j: e.label,
                    k: params.k(),
                });
            }
            if let Some(&v) = e.servers.iter().find(|&&v| v == 0 || v > n) {
                return Err(Error::IndexOutOfRange { index: v, len: n });
            }
        }
        edges.sort_by(|a, b| {
            a.label
                .cmp(&b.label)
                .then_with(|| canonical_order(&a.servers, &b.servers))
        });
        edges.dedup();
        let auxiliary = edges.iter().any(|e| e.auxiliary);
        Ok(RecoveryHypergraph {
            params,
            policy,
            servers,
            auxiliary,
            edges,
        })
    }

    /// Server vertices, ascending.
    pub fn servers(&self) -> &[usize] {
        &self.servers
    }

    pub fn has_auxiliary(&self) -> bool {
        self.auxiliary
    }

    /// Vertex count including the auxiliary vertex when present.
    pub fn vertex_count(&self) -> usize {
        self.servers.len() + usize::from(self.auxiliary)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edges_labelled(&self, j: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.label == j)
    }

    /// Distinct labels in ascending order.
    pub fn labels(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.edges.iter().map(|e| e.label).collect();
        set.into_iter().collect()
    }

    /// 0/1 incidence matrix, one row per vertex (auxiliary last) and one
    /// column per edge.
    pub fn incidence_matrix(&self) -> Vec<Vec<u8>> {
        let mut rows: Vec<Vec<u8>> = self
            .servers
            .iter()
            .map(|&v| {
                self.edges
                    .iter()
                    .map(|e| u8::from(e.contains_server(v)))
                    .collect()
            })
            .collect();
        if self.auxiliary {
            rows.push(self.edges.iter().map(|e| u8::from(e.auxiliary)).collect());
        }
        rows
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.contains_server(v)).count()
    }

    pub fn to_json(&self) -> HypergraphJson {
        let mut vertices = self.servers.clone();
        if self.auxiliary {
            vertices.push(AUXILIARY_ID);
        }
        HypergraphJson {
            vertices,
            auxiliary: self.auxiliary,
            edges: self
                .edges
                .iter()
                .map(|e| {
                    let mut vertices = e.servers.clone();
                    if e.auxiliary {
                        vertices.push(AUXILIARY_ID);
                    }
                    EdgeJson {
                        label: e.label,
                        vertices,
                    }
                })
                .collect(),
        }
    }

    /// Incidence matrix as CSV with a header of edge labels.
    pub fn incidence_csv(&self) -> String {
        let mut out = String::from("vertex");
        for e in &self.edges {
            out.push_str(&format!(",e{}", e.label));
        }
        out.push('\n');
        let mut ids: Vec<String> = self.servers.iter().map(usize::to_string).collect();
        if self.auxiliary {
            ids.push("aux".into());
        }
        for (id, row) in ids.iter().zip(self.incidence_matrix()) {
            out.push_str(id);
            for b in row {
                out.push(',');
                out.push(if b == 1 { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HypergraphJson {
    pub vertices: Vec<usize>,
    pub auxiliary: bool,
    pub edges: Vec<EdgeJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeJson {
    pub label: usize,
    pub vertices: Vec<usize>,
}

/// Builds the recovery hypergraph of `RM(r, m)` under `policy`.
pub fn build_hypergraph(p: RmParams, policy: EdgePolicy) -> Result<RecoveryHypergraph> {
    let mut edges = Vec::new();
    match policy {
        EdgePolicy::Oracle => {
            for (i, sets) in oracle_all_objects(p)?.into_iter().enumerate() {
                edges.extend(
                    sets.into_iter()
                        .map(|s| Edge::from_columns(i + 1, s.columns)),
                );
            }
        }
        EdgePolicy::Geometric => {
            p.require_dual()?;
            for j in 1..=p.k() {
                edges.push(Edge::from_columns(j, smallest_recovery_set(p, j)?.columns));
                for s in second_smallest_recovery_sets(p, j)? {
                    edges.push(Edge::from_columns(j, s.columns));
                }
            }
        }
    }
    RecoveryHypergraph::from_edges(p, policy, (1..=p.n()).collect(), edges)
}

/// Keeps the edges labelled by `objects` and the servers they touch.
pub fn induced_subgraph(g: &RecoveryHypergraph, objects: &[usize]) -> RecoveryHypergraph {
    let keep: BTreeSet<usize> = objects.iter().copied().collect();
    let edges: Vec<Edge> = g
        .edges
        .iter()
        .filter(|e| keep.contains(&e.label))
        .cloned()
        .collect();
    let servers: BTreeSet<usize> = edges
        .iter()
        .flat_map(|e| e.servers.iter().copied())
        .collect();
    RecoveryHypergraph {
        params: g.params,
        policy: g.policy,
        servers: servers.into_iter().collect(),
        auxiliary: edges.iter().any(|e| e.auxiliary),
        edges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rm(r: u32, m: u32) -> RmParams {
        RmParams::new(r, m).unwrap()
    }

    fn listed(g: &RecoveryHypergraph) -> Vec<(usize, Vec<usize>)> {
        g.to_json()
            .edges
            .into_iter()
            .map(|e| (e.label, e.vertices))
            .collect()
    }

    #[test]
    fn small_oracle_graph() {
        let g = build_hypergraph(rm(1, 2), EdgePolicy::Oracle).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(
            listed(&g),
            vec![
                (1, vec![1, 0]),
                (1, vec![2, 3, 4]),
                (2, vec![1, 3]),
                (2, vec![2, 4]),
                (3, vec![1, 2]),
                (3, vec![3, 4]),
            ]
        );
    }

    #[test]
    fn geometric_edge_counts() {
        let g = build_hypergraph(rm(2, 4), EdgePolicy::Geometric).unwrap();
        assert_eq!(g.edges_labelled(5).count(), 8);
        assert_eq!(g.edges_labelled(11).count(), 4);
    }

    #[test]
    fn induced_restrictions() {
        let g = build_hypergraph(rm(1, 2), EdgePolicy::Oracle).unwrap();
        let h = induced_subgraph(&g, &[3]);
        assert_eq!(h.servers(), &[1, 2, 3, 4]);
        assert!(!h.has_auxiliary());
        assert_eq!(listed(&h), vec![(3, vec![1, 2]), (3, vec![3, 4])]);
        assert_eq!(induced_subgraph(&g, &[1, 2, 3]), g);
        let empty = induced_subgraph(&g, &[]);
        assert_eq!((empty.vertex_count(), empty.edges().len()), (0, 0));
    }

    #[test]
    fn incidence_sums() {
        let g = build_hypergraph(rm(1, 2), EdgePolicy::Oracle).unwrap();
        let a = g.incidence_matrix();
        for (c, e) in g.edges().iter().enumerate() {
            assert_eq!(a.iter().map(|row| row[c] as usize).sum::<usize>(), e.size());
        }
        for (r, &v) in g.servers().iter().enumerate() {
            assert_eq!(a[r].iter().map(|&b| b as usize).sum::<usize>(), g.degree(v));
        }
        assert!(g
            .incidence_csv()
            .starts_with("vertex,e1,e1,e2,e2,e3,e3\n1,1,0,1,0,1,0\n"));
    }

    #[test]
    fn oracle_policy_capacity() {
        assert!(build_hypergraph(rm(1, 5), EdgePolicy::Oracle)
            .unwrap_err()
            .is_capacity());
    }
}
