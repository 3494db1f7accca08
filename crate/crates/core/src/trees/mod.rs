//! Finite trees with the derivative `T' = T \ MAX(T)`, rank, and the two
//! stripping facts used by the extractor.
//!
//! A tree never contains the root; nodes without a parent hang directly off
//! the implicit root. For a finite tree `t` lies in `T^k` exactly when its
//! height (longest chain from `t` down to a maximal node, counting `t`)
//! exceeds `k`, so every iterated derivative is one pass over the heights.

mod family;

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use family::{
    MarchingIndicators, TableFamily, WeaklyNullFamily, DEFAULT_PROBE_BUDGET,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTree {
    ids: Vec<String>,
    parent: Vec<Option<usize>>,
}

impl FiniteTree {
    pub fn empty() -> Self {
        FiniteTree {
            ids: Vec::new(),
            parent: Vec::new(),
        }
    }

    /// Builds a tree from `(id, parent id)` pairs; `None` attaches the node
    /// to the root. Rejects duplicate ids, unknown parents and cycles.
    pub fn from_edges<I, S>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Option<S>)>,
        S: Into<String>,
    {
        let edges: Vec<(String, Option<String>)> = edges
            .into_iter()
            .map(|(a, b)| (a.into(), b.map(Into::into)))
            .collect();
        let mut index = HashMap::with_capacity(edges.len());
        for (i, (id, _)) in edges.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::InvalidTree(format!("duplicate node {id}")));
            }
        }
        let parent = edges
            .iter()
            .map(|(id, p)| match p {
                None => Ok(None),
                Some(p) => index
                    .get(p)
                    .copied()
                    .map(Some)
                    .ok_or_else(|| Error::InvalidTree(format!("node {id} has unknown parent {p}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let tree = FiniteTree {
            ids: edges.into_iter().map(|(id, _)| id).collect(),
            parent,
        };
        tree.check_acyclic()?;
        Ok(tree)
    }

    fn check_acyclic(&self) -> Result<()> {
        // 0 = unvisited, 1 = on the current walk, 2 = known to reach the root
        let mut state = vec![0u8; self.len()];
        for start in 0..self.len() {
            let mut walk = Vec::new();
            let mut cur = Some(start);
            while let Some(v) = cur {
                match state[v] {
                    2 => break,
                    1 => {
                        return Err(Error::InvalidTree(format!(
                            "cycle through node {}",
                            self.ids[v]
                        )))
                    }
                    _ => {
                        state[v] = 1;
                        walk.push(v);
                        cur = self.parent[v];
                    }
                }
            }
            for v in walk {
                state[v] = 2;
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    /// Parent positions, indexed like [`FiniteTree::ids`].
    pub fn parent_indices(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn parent_of(&self, id: &str) -> Result<Option<&str>> {
        let i = self.index_of(id)?;
        Ok(self.parent[i].map(|p| self.ids[p].as_str()))
    }

    fn index_of(&self, id: &str) -> Result<usize> {
        self.ids
            .iter()
            .position(|x| x == id)
            .ok_or_else(|| Error::UnknownNode(id.to_string()))
    }

    fn children(&self) -> Vec<Vec<usize>> {
        let mut children = vec![Vec::new(); self.len()];
        for (v, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                children[*p].push(v);
            }
        }
        children
    }

    /// Nodes ordered so that every node precedes its descendants.
    fn top_down(&self) -> Vec<usize> {
        let children = self.children();
        let mut order: Vec<usize> = (0..self.len()).filter(|&v| self.parent[v].is_none()).collect();
        let mut i = 0;
        while i < order.len() {
            order.extend_from_slice(&children[order[i]]);
            i += 1;
        }
        order
    }

    /// Height of each node: 1 for maximal nodes, else 1 + the largest child height.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![1usize; self.len()];
        for &v in self.top_down().iter().rev() {
            if let Some(p) = self.parent[v] {
                h[p] = h[p].max(h[v] + 1);
            }
        }
        h
    }

    /// The maximal nodes `MAX(T)`.
    pub fn maximal(&self) -> Vec<&str> {
        let mut has_child = vec![false; self.len()];
        for p in self.parent.iter().flatten() {
            has_child[*p] = true;
        }
        (0..self.len())
            .filter(|&v| !has_child[v])
            .map(|v| self.ids[v].as_str())
            .collect()
    }

    /// The subtree on the nodes with `keep[v]`; each node's parent becomes
    /// its nearest kept ancestor.
    fn induced(&self, keep: &[bool]) -> FiniteTree {
        let mut new_index = vec![usize::MAX; self.len()];
        let mut ids = Vec::new();
        for v in 0..self.len() {
            if keep[v] {
                new_index[v] = ids.len();
                ids.push(self.ids[v].clone());
            }
        }
        let parent = (0..self.len())
            .filter(|&v| keep[v])
            .map(|v| {
                let mut p = self.parent[v];
                while let Some(u) = p {
                    if keep[u] {
                        return Some(new_index[u]);
                    }
                    p = self.parent[u];
                }
                None
            })
            .collect();
        FiniteTree { ids, parent }
    }

    /// `T' = T \ MAX(T)`.
    pub fn prune(&self) -> FiniteTree {
        let mut keep = vec![false; self.len()];
        for p in self.parent.iter().flatten() {
            keep[*p] = true;
        }
        self.induced(&keep)
    }

    /// `T^k`.
    pub fn iterated_prune(&self, k: usize) -> FiniteTree {
        let keep: Vec<bool> = self.heights().into_iter().map(|h| h > k).collect();
        self.induced(&keep)
    }

    /// Least `k` with `T^k` empty: the length of the longest chain.
    pub fn rank(&self) -> usize {
        self.heights().into_iter().max().unwrap_or(0)
    }

    /// `T \ T^k`, which has rank exactly `k`.
    pub fn strip(&self, k: usize) -> Result<FiniteTree> {
        let heights = self.heights();
        let rank = heights.iter().copied().max().unwrap_or(0);
        if k > rank {
            return Err(Error::RankExceeded { k, rank });
        }
        let keep: Vec<bool> = heights.into_iter().map(|h| h <= k).collect();
        Ok(self.induced(&keep))
    }

    /// `{t : s < t}`, re-rooted so that the children of `s` hang off the root.
    pub fn subtree_above(&self, s: &str) -> Result<FiniteTree> {
        let s = self.index_of(s)?;
        Ok(self.subtree_above_index(s, &self.children()))
    }

    fn subtree_above_index(&self, s: usize, children: &[Vec<usize>]) -> FiniteTree {
        let mut order = children[s].clone();
        let mut i = 0;
        while i < order.len() {
            order.extend_from_slice(&children[order[i]]);
            i += 1;
        }
        let position: HashMap<usize, usize> =
            order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        FiniteTree {
            ids: order.iter().map(|&v| self.ids[v].clone()).collect(),
            parent: order
                .iter()
                .map(|&v| match self.parent[v] {
                    Some(p) if p != s => Some(position[&p]),
                    _ => None,
                })
                .collect(),
        }
    }

    /// Checks `rank(T \ T^k) = k`.
    pub fn check_fact_i(&self, k: usize) -> Result<FactIReport> {
        let strip_rank = self.strip(k)?.rank();
        Ok(FactIReport {
            k,
            strip_rank,
            pass: strip_rank == k,
        })
    }

    /// Checks `rank({t : s < t}) = k` for every `s` in `MAX(T^k)`.
    pub fn check_fact_ii(&self, k: usize) -> Result<FactIIReport> {
        let rank = self.rank();
        if k > rank {
            return Err(Error::RankExceeded { k, rank });
        }
        let index: HashMap<&str, usize> = self
            .ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.as_str(), i))
            .collect();
        let children = self.children();
        let mut checked = 0;
        let mut failures = Vec::new();
        for s in self.iterated_prune(k).maximal() {
            checked += 1;
            let r = self.subtree_above_index(index[s], &children).rank();
            if r != k {
                failures.push(Witness {
                    node: s.to_string(),
                    rank: r,
                });
            }
        }
        Ok(FactIIReport {
            k,
            checked,
            pass: failures.is_empty(),
            failures,
        })
    }

    /// Parses the line format `id parent-id` with `-` for root children.
    /// Blank lines and lines starting with `#` are skipped.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [id, parent] = fields[..] else {
                return Err(Error::InvalidTree(format!(
                    "line {}: expected \"id parent-id\" or \"id -\"",
                    n + 1
                )));
            };
            let parent = (parent != "-").then(|| parent.to_string());
            edges.push((id.to_string(), parent));
        }
        Self::from_edges(edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (v, id) in self.ids.iter().enumerate() {
            let p = self.parent[v].map_or("-", |p| self.ids[p].as_str());
            let _ = writeln!(out, "{id} {p}");
        }
        out
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let doc: TreeJson = serde_json::from_str(json).map_err(|e| Error::Json(e.to_string()))?;
        Self::from_edges(
            doc.nodes
                .into_iter()
                .map(|n| (n.id.into_string(), n.parent.map(NodeId::into_string))),
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        let nodes: Vec<_> = (0..self.len())
            .map(|v| {
                serde_json::json!({
                    "id": self.ids[v],
                    "parent": self.parent[v].map(|p| self.ids[p].clone()),
                })
            })
            .collect();
        serde_json::json!({ "nodes": nodes })
    }

    /// A random tree on `n` nodes. Each node attaches to the previous node
    /// with probability `chain_bias`, otherwise to a uniformly random earlier
    /// node or the root.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize, chain_bias: f64) -> Self {
        let parent = (0..n)
            .map(|v| {
                if v == 0 {
                    None
                } else if rng.gen_bool(chain_bias) {
                    Some(v - 1)
                } else {
                    let p = rng.gen_range(0..=v);
                    (p < v).then_some(p)
                }
            })
            .collect();
        FiniteTree {
            ids: (0..n).map(|v| v.to_string()).collect(),
            parent,
        }
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        FiniteTree {
            ids: (0..n).map(|v| v.to_string()).collect(),
            parent: (0..n).map(|v| v.checked_sub(1)).collect(),
        }
    }

    /// One center node with `leaves` children.
    pub fn star(leaves: usize) -> Self {
        let mut parent = vec![None];
        parent.extend(std::iter::repeat_n(Some(0), leaves));
        FiniteTree {
            ids: (0..=leaves).map(|v| v.to_string()).collect(),
            parent,
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NodeId {
    Str(String),
    Num(i64),
}

impl NodeId {
    fn into_string(self) -> String {
        match self {
            NodeId::Str(s) => s,
            NodeId::Num(n) => n.to_string(),
        }
    }
}

#[derive(Deserialize)]
struct NodeJson {
    id: NodeId,
    parent: Option<NodeId>,
}

#[derive(Deserialize)]
struct TreeJson {
    nodes: Vec<NodeJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactIReport {
    pub k: usize,
    pub strip_rank: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub node: String,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactIIReport {
    pub k: usize,
    pub checked: usize,
    pub failures: Vec<Witness>,
    pub pass: bool,
}
