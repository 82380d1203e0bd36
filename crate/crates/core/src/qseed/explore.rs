//! Breadth-first exploration of the unlabeled exchange graph.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::{CanonicalKey, CanonicalScope, QuantumSeed, SeedError};

#[derive(Debug, Clone)]
pub struct ExploreOptions {
    /// `None` explores until no new seeds appear.
    pub depth: Option<usize>,
    pub track_frames: bool,
    /// Maximum number of vertices before exploration stops.
    pub budget: usize,
    pub scope: CanonicalScope,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        Self {
            depth: None,
            track_frames: false,
            budget: 10_000,
            scope: CanonicalScope::Unfrozen,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GraphNode {
    pub id: usize,
    pub depth: usize,
    pub key: CanonicalKey,
    pub seed: QuantumSeed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    /// Mutated vertex at `from`, zero-based.
    pub mutation: usize,
}

#[derive(Debug, Clone)]
pub struct ExchangeGraph {
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
    /// Set when the vertex budget stopped the search early.
    pub truncated: bool,
}

#[derive(Serialize)]
struct NodeJson {
    id: usize,
    depth: usize,
    key: String,
}

#[derive(Serialize)]
struct GraphJson<'a> {
    nodes: Vec<NodeJson>,
    edges: &'a [GraphEdge],
    truncated: bool,
}

impl ExchangeGraph {
    pub fn vertex_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.nodes.len()];
        for e in &self.edges {
            d[e.from] += 1;
            d[e.to] += 1;
        }
        d
    }

    /// True when the graph is one cycle through every vertex.
    pub fn is_single_cycle(&self) -> bool {
        let n = self.nodes.len();
        if n < 3 || self.edges.len() != n || self.degrees().iter().any(|&d| d != 2) {
            return false;
        }
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            adj[e.from].push(e.to);
            adj[e.to].push(e.from);
        }
        let (mut prev, mut cur, mut steps) = (usize::MAX, 0usize, 0usize);
        loop {
            let next = if adj[cur][0] != prev {
                adj[cur][0]
            } else {
                adj[cur][1]
            };
            prev = cur;
            cur = next;
            steps += 1;
            if cur == 0 {
                return steps == n;
            }
            if steps > n {
                return false;
            }
        }
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph exchange {\n  node [shape=circle];\n");
        for node in &self.nodes {
            let _ = writeln!(
                s,
                "  n{} [label=\"{}\\n{}\"];",
                node.id,
                node.id,
                &node.key.digest()[..8]
            );
        }
        for e in &self.edges {
            let _ = writeln!(
                s,
                "  n{} -- n{} [label=\"{}\"];",
                e.from,
                e.to,
                e.mutation + 1
            );
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let js = GraphJson {
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeJson {
                    id: n.id,
                    depth: n.depth,
                    key: n.key.digest(),
                })
                .collect(),
            edges: &self.edges,
            truncated: self.truncated,
        };
        serde_json::to_value(js).expect("graph serializes")
    }
}

pub fn explore(seed: &QuantumSeed, opts: &ExploreOptions) -> Result<ExchangeGraph, SeedError> {
    let root = if opts.track_frames {
        seed.clone()
    } else {
        seed.clone().without_frame()
    };
    let mut index: HashMap<CanonicalKey, usize> = HashMap::new();
    let root_key = root.canonical_form(opts.scope);
    index.insert(root_key.clone(), 0);
    let mut nodes = vec![GraphNode {
        id: 0,
        depth: 0,
        key: root_key,
        seed: root,
    }];
    let mut edge_set: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut edges = Vec::new();
    let mut frontier = vec![0usize];
    let mut depth = 0;
    let mut truncated = false;
    let unfrozen = seed.unfrozen_indices();
    while !frontier.is_empty() && opts.depth.is_none_or(|d| depth < d) {
        let expanded: Vec<Result<(usize, usize, QuantumSeed, CanonicalKey), SeedError>> = frontier
            .par_iter()
            .flat_map_iter(|&id| {
                let s = &nodes[id].seed;
                unfrozen.iter().map(move |&k| {
                    let t = s.mutate(k)?;
                    let key = t.canonical_form(opts.scope);
                    Ok((id, k, t, key))
                })
            })
            .collect();
        let mut next = Vec::new();
        for item in expanded {
            let (from, k, t, key) = item?;
            let to = match index.get(&key) {
                Some(&to) => to,
                None => {
                    if nodes.len() >= opts.budget {
                        truncated = true;
                        continue;
                    }
                    let id = nodes.len();
                    index.insert(key.clone(), id);
                    nodes.push(GraphNode {
                        id,
                        depth: depth + 1,
                        key,
                        seed: t,
                    });
                    next.push(id);
                    id
                }
            };
            if from != to && edge_set.insert((from.min(to), from.max(to))) {
                edges.push(GraphEdge {
                    from,
                    to,
                    mutation: k,
                });
            }
        }
        frontier = next;
        depth += 1;
    }
    Ok(ExchangeGraph {
        nodes,
        edges,
        truncated,
    })
}
