//! Connected components of the bipartite support graph and the exact
//! Gács-Körner common information.

use crate::dist::{entropy, JointDistribution, ProbVector};
use crate::objectives::LabelingPair;

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

/// Maximal decomposition of the support graph into connected components.
///
/// Component ids are canonical: components are numbered in order of their
/// smallest x-index.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentDecomposition {
    pub component_of_x: Vec<usize>,
    pub component_of_y: Vec<usize>,
    pub weights: ProbVector,
}

impl ComponentDecomposition {
    pub fn count(&self) -> usize {
        self.weights.len()
    }

    pub fn x_members(&self, c: usize) -> Vec<usize> {
        members(&self.component_of_x, c)
    }

    pub fn y_members(&self, c: usize) -> Vec<usize> {
        members(&self.component_of_y, c)
    }
}

fn members(ids: &[usize], c: usize) -> Vec<usize> {
    ids.iter()
        .enumerate()
        .filter(|(_, &k)| k == c)
        .map(|(i, _)| i)
        .collect()
}

/// Union-find over the support edges {(i, j) : P(i, j) > 0}.
pub fn connected_components(joint: &JointDistribution) -> ComponentDecomposition {
    let (n_x, n_y) = (joint.n_x(), joint.n_y());
    // nodes 0..n_x are x-symbols, n_x.. are y-symbols
    let mut uf = UnionFind::new(n_x + n_y);
    for i in 0..n_x {
        for j in 0..n_y {
            if joint.get(i, j) > 0.0 {
                uf.union(i, n_x + j);
            }
        }
    }

    // Every y-symbol has an x-neighbour (no zero marginals), so numbering
    // roots in x order reaches every component.
    let mut canonical = vec![usize::MAX; n_x + n_y];
    let mut count = 0;
    let mut component_of_x = Vec::with_capacity(n_x);
    for i in 0..n_x {
        let root = uf.find(i);
        if canonical[root] == usize::MAX {
            canonical[root] = count;
            count += 1;
        }
        component_of_x.push(canonical[root]);
    }
    let component_of_y: Vec<usize> = (0..n_y).map(|j| canonical[uf.find(n_x + j)]).collect();

    let mut weights = vec![0.0; count];
    for i in 0..n_x {
        for j in 0..n_y {
            weights[component_of_x[i]] += joint.get(i, j);
        }
    }
    ComponentDecomposition {
        component_of_x,
        component_of_y,
        weights: ProbVector::new(weights).expect("component weights partition the mass"),
    }
}

/// H(K) together with the decomposition that defines K.
pub fn gk_common_information(joint: &JointDistribution) -> (f64, ComponentDecomposition) {
    let decomposition = connected_components(joint);
    (entropy(&decomposition.weights), decomposition)
}

/// The labeling pair phi_X = phi_Y = component index.
pub fn gk_labelings(joint: &JointDistribution) -> LabelingPair {
    let d = connected_components(joint);
    let count = d.count();
    LabelingPair::new(d.component_of_x, d.component_of_y, count)
        .expect("component ids lie in 0..count")
}
