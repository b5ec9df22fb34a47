//! Min-cut sufficiency conditions for routing a helper-assisted
//! decomposition through a capacitated acyclic network.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dist::{entropy_of, JointDistribution};
use crate::objectives::{
    cut_sets, helper_rate_general, label_joint, residual_entropy_x, residual_entropy_y, LabelError, LabelingPair,
};

/// Slack applied to flow augmentation and to every feasibility comparison.
pub const FLOW_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("duplicate node id {0:?}")]
    DuplicateNode(String),
    #[error("edge refers to unknown node {0:?}")]
    UnknownNode(String),
    #[error("edge {from:?} -> {to:?} has invalid capacity {capacity}")]
    BadCapacity { from: String, to: String, capacity: f64 },
    #[error("the network has a directed cycle through {0:?}")]
    Cycle(String),
    #[error("no node has role {0}")]
    MissingRole(Role),
    #[error("role {0} is assigned to more than one node")]
    DuplicateRole(Role),
    #[error("the network has {0} terminals; pick one")]
    AmbiguousTerminal(usize),
    #[error("sink {0:?} is among the sources")]
    SinkInSources(String),
    #[error(transparent)]
    Labels(#[from] LabelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    #[serde(rename = "s_x")]
    SourceX,
    #[serde(rename = "s_y")]
    SourceY,
    #[serde(rename = "s_h")]
    Helper,
    #[serde(rename = "t")]
    Terminal,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::SourceX => "s_x",
            Role::SourceY => "s_y",
            Role::Helper => "s_h",
            Role::Terminal => "t",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<Role>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub capacity: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct NetworkFile {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
}

/// A validated acyclic network. Node indices follow the file order.
#[derive(Debug, Clone)]
pub struct CapacitatedNetwork {
    nodes: Vec<Node>,
    edges: Vec<(usize, usize, f64)>,
    index: HashMap<String, usize>,
}

impl CapacitatedNetwork {
    /// Checks ids, capacities, acyclicity and that s_x, s_y and s_h each
    /// label exactly one node. Several terminals are allowed.
    pub fn new(nodes: Vec<Node>, edges: Vec<Edge>) -> Result<Self, NetworkError> {
        let mut index = HashMap::new();
        for (k, n) in nodes.iter().enumerate() {
            if index.insert(n.id.clone(), k).is_some() {
                return Err(NetworkError::DuplicateNode(n.id.clone()));
            }
        }
        let lookup = |id: &str| index.get(id).copied().ok_or_else(|| NetworkError::UnknownNode(id.to_owned()));
        let mut resolved = Vec::with_capacity(edges.len());
        for e in &edges {
            if !e.capacity.is_finite() || e.capacity < 0.0 {
                return Err(NetworkError::BadCapacity {
                    from: e.from.clone(),
                    to: e.to.clone(),
                    capacity: e.capacity,
                });
            }
            resolved.push((lookup(&e.from)?, lookup(&e.to)?, e.capacity));
        }
        for role in [Role::SourceX, Role::SourceY, Role::Helper] {
            if nodes.iter().filter(|n| n.role == Some(role)).count() > 1 {
                return Err(NetworkError::DuplicateRole(role));
            }
        }
        let net = Self {
            nodes,
            edges: resolved,
            index,
        };
        net.check_acyclic()?;
        Ok(net)
    }

    pub fn parse(text: &str) -> Result<Self, NetworkError> {
        let file: NetworkFile = serde_json::from_str(text)?;
        Self::new(file.nodes, file.edges)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, NetworkError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        let file = NetworkFile {
            nodes: self.nodes.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(a, b, c)| Edge {
                    from: self.nodes[a].id.clone(),
                    to: self.nodes[b].id.clone(),
                    capacity: c,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("plain data")
    }

    fn check_acyclic(&self) -> Result<(), NetworkError> {
        let n = self.nodes.len();
        let mut indegree = vec![0usize; n];
        for &(_, b, _) in &self.edges {
            indegree[b] += 1;
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = queue.pop_front() {
            seen += 1;
            for &(a, b, _) in &self.edges {
                if a == v {
                    indegree[b] -= 1;
                    if indegree[b] == 0 {
                        queue.push_back(b);
                    }
                }
            }
        }
        match (0..n).find(|&v| indegree[v] > 0) {
            Some(v) if seen < n => Err(NetworkError::Cycle(self.nodes[v].id.clone())),
            _ => Ok(()),
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Edges as (from index, to index, capacity).
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Replaces the capacity of every edge from `from` to `to`.
    pub fn set_capacity(&mut self, from: &str, to: &str, capacity: f64) -> Result<(), NetworkError> {
        let a = self.node_index(from).ok_or_else(|| NetworkError::UnknownNode(from.to_owned()))?;
        let b = self.node_index(to).ok_or_else(|| NetworkError::UnknownNode(to.to_owned()))?;
        for e in self.edges.iter_mut().filter(|e| e.0 == a && e.1 == b) {
            e.2 = capacity;
        }
        Ok(())
    }

    pub fn role_node(&self, role: Role) -> Result<usize, NetworkError> {
        self.nodes
            .iter()
            .position(|n| n.role == Some(role))
            .ok_or(NetworkError::MissingRole(role))
    }

    pub fn terminals(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&v| self.nodes[v].role == Some(Role::Terminal))
            .collect()
    }
}

/// Value of a maximum flow and the source side of a minimum cut.
#[derive(Debug, Clone, PartialEq)]
pub struct MinCut {
    pub value: f64,
    /// Nodes reachable from the sources in the final residual graph.
    pub source_side: Vec<bool>,
    /// Capacity of the edges leaving `source_side`.
    pub cut_capacity: f64,
}

/// Max-flow from the node set `sources` to `sink` by shortest augmenting
/// paths. Several sources are joined through an uncapacitated super-source.
/// A sink that cannot be reached gives value 0.
pub fn min_cut(net: &CapacitatedNetwork, sources: &[usize], sink: usize) -> Result<MinCut, NetworkError> {
    if sources.contains(&sink) {
        return Err(NetworkError::SinkInSources(net.nodes[sink].id.clone()));
    }
    let n = net.nodes.len();
    let size = n + 1;
    let root = n;
    let mut residual = vec![vec![0.0f64; size]; size];
    for &(a, b, c) in &net.edges {
        residual[a][b] += c;
    }
    for &s in sources {
        residual[root][s] = f64::INFINITY;
    }

    let mut value = 0.0;
    loop {
        let mut parent = vec![usize::MAX; size];
        parent[root] = root;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            if v == sink {
                break;
            }
            for w in 0..size {
                if parent[w] == usize::MAX && residual[v][w] > FLOW_TOLERANCE {
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        if parent[sink] == usize::MAX {
            break;
        }
        let mut bottleneck = f64::INFINITY;
        let mut v = sink;
        while v != root {
            bottleneck = bottleneck.min(residual[parent[v]][v]);
            v = parent[v];
        }
        let mut v = sink;
        while v != root {
            let u = parent[v];
            residual[u][v] -= bottleneck;
            residual[v][u] += bottleneck;
            v = u;
        }
        value += bottleneck;
    }

    let mut reach = vec![false; size];
    reach[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for w in 0..size {
            if !reach[w] && residual[v][w] > FLOW_TOLERANCE {
                reach[w] = true;
                queue.push_back(w);
            }
        }
    }
    reach.truncate(n);
    let cut_capacity = net
        .edges
        .iter()
        .filter(|&&(a, b, _)| reach[a] && !reach[b])
        .map(|e| e.2)
        .sum();
    Ok(MinCut {
        value,
        source_side: reach,
        cut_capacity,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityRow {
    pub name: String,
    pub required: f64,
    pub achieved: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub terminal: String,
    pub limited: bool,
    pub rows: Vec<FeasibilityRow>,
    pub pass: bool,
}

impl fmt::Display for FeasibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<24} {:>12} {:>12}  result", "condition", "required", "min-cut")?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<24} {:>12.6} {:>12.6}  {}",
                r.name,
                r.required,
                r.achieved,
                if r.pass { "pass" } else { "FAIL" }
            )?;
        }
        write!(f, "overall: {}", if self.pass { "pass" } else { "FAIL" })
    }
}

/// The seven sufficient min-cut conditions toward the network's single
/// terminal, in the order
/// rho(s_X; s_H), rho(s_Y; s_H), rho(s_X, s_Y; s_H), rho(s_X; t),
/// rho(s_Y; t), rho(s_H; t), rho(s_X, s_Y, s_H; t).
///
/// The last row requires H(X|phi_X) + H(Y|phi_Y) + H(phi_X, phi_Y), with the
/// joint label entropy rather than the conditional helper rate.
pub fn check_feasibility(
    net: &CapacitatedNetwork,
    joint: &JointDistribution,
    labels: &LabelingPair,
) -> Result<FeasibilityReport, NetworkError> {
    check_at(net, joint, labels, single_terminal(net)?, false)
}

/// As [`check_feasibility`] with the source-to-helper requirements lowered
/// to H(X_cut), H(Y_cut) and their sum.
pub fn check_feasibility_limited(
    net: &CapacitatedNetwork,
    joint: &JointDistribution,
    labels: &LabelingPair,
) -> Result<FeasibilityReport, NetworkError> {
    check_at(net, joint, labels, single_terminal(net)?, true)
}

fn single_terminal(net: &CapacitatedNetwork) -> Result<usize, NetworkError> {
    match net.terminals().as_slice() {
        [] => Err(NetworkError::MissingRole(Role::Terminal)),
        [t] => Ok(*t),
        many => Err(NetworkError::AmbiguousTerminal(many.len())),
    }
}

/// Conditions toward one chosen terminal node.
pub fn check_at(
    net: &CapacitatedNetwork,
    joint: &JointDistribution,
    labels: &LabelingPair,
    terminal: usize,
    limited: bool,
) -> Result<FeasibilityReport, NetworkError> {
    labels.check_dims(joint)?;
    let (sx, sy, sh) = (
        net.role_node(Role::SourceX)?,
        net.role_node(Role::SourceY)?,
        net.role_node(Role::Helper)?,
    );
    let h_x = entropy_of(&joint.row_sums());
    let h_y = entropy_of(&joint.col_sums());
    let (to_helper_x, to_helper_y) = if limited {
        let c = cut_sets(joint, labels);
        (c.h_x_cut, c.h_y_cut)
    } else {
        (h_x, h_y)
    };
    let res_x = residual_entropy_x(joint, labels);
    let res_y = residual_entropy_y(joint, labels);
    let joint_labels: Vec<f64> = label_joint(joint, labels).concat();
    let t = terminal;
    let conditions = [
        ("rho(s_X; s_H)", vec![sx], sh, to_helper_x),
        ("rho(s_Y; s_H)", vec![sy], sh, to_helper_y),
        ("rho(s_X, s_Y; s_H)", vec![sx, sy], sh, to_helper_x + to_helper_y),
        ("rho(s_X; t)", vec![sx], t, res_x),
        ("rho(s_Y; t)", vec![sy], t, h_y),
        ("rho(s_H; t)", vec![sh], t, helper_rate_general(joint, labels)),
        ("rho(s_X, s_Y, s_H; t)", vec![sx, sy, sh], t, res_x + res_y + entropy_of(&joint_labels)),
    ];
    let mut rows = Vec::with_capacity(conditions.len());
    for (name, sources, sink, required) in conditions {
        let achieved = min_cut(net, &sources, sink)?.value;
        rows.push(FeasibilityRow {
            name: name.to_owned(),
            required,
            achieved,
            pass: achieved >= required - FLOW_TOLERANCE,
        });
    }
    Ok(FeasibilityReport {
        terminal: net.nodes[terminal].id.clone(),
        limited,
        pass: rows.iter().all(|r| r.pass),
        rows,
    })
}

/// Star network: s_x, s_y and s_h feed the terminal directly, and both
/// sources feed the helper. Every edge has capacity `capacity`.
pub fn star_network(capacity: f64) -> CapacitatedNetwork {
    let node = |id: &str, role| Node {
        id: id.into(),
        role: Some(role),
    };
    let edge = |a: &str, b: &str| Edge {
        from: a.into(),
        to: b.into(),
        capacity,
    };
    CapacitatedNetwork::new(
        vec![
            node("x", Role::SourceX),
            node("y", Role::SourceY),
            node("h", Role::Helper),
            node("t", Role::Terminal),
        ],
        vec![edge("x", "h"), edge("y", "h"), edge("x", "t"), edge("y", "t"), edge("h", "t")],
    )
    .expect("valid star")
}
