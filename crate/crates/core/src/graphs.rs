//! Random graph generators: Erdős–Rényi undirected graphs for the Gaussian
//! pipeline and layered DAGs for the structural-causal pipeline.

use rand::Rng;

use crate::adjacency::BinaryAdjacency;
use crate::rng::SeededRng;
use crate::{Error, Result};

/// DAG with a root layer of cause nodes and `p` child nodes spread over
/// consecutive layers. Edges only run from one layer to the next, so the
/// graph is acyclic by construction and the layer order is a topological
/// order. Node ids are assigned layer by layer: roots first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredDag {
    pub n_root: usize,
    /// Layer 0 holds the roots.
    pub layers: Vec<Vec<usize>>,
    /// Directed (parent, child) pairs.
    pub edges: Vec<(usize, usize)>,
    /// Number of non-root (child) nodes.
    pub p: usize,
}

impl LayeredDag {
    /// Parents of `node`, in ascending id order.
    pub fn parents_of(&self, node: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter(|(_, c)| *c == node)
            .map(|(p, _)| *p)
            .collect();
        out.sort_unstable();
        out
    }

    /// Child node ids (everything outside layer 0) in ascending order.
    pub fn child_nodes(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.layers[1..].iter().flatten().copied().collect();
        out.sort_unstable();
        out
    }

    pub fn validate(&self) -> Result<()> {
        let layer_of = |node: usize| -> Option<usize> {
            self.layers.iter().position(|l| l.contains(&node))
        };
        for layer in &self.layers[1..] {
            if layer.len() < 3 {
                return Err(Error::InvalidLayout(format!(
                    "non-root layer has {} nodes, minimum is 3",
                    layer.len()
                )));
            }
        }
        for &(parent, child) in &self.edges {
            let lp = layer_of(parent)
                .ok_or_else(|| Error::InvalidLayout(format!("unknown node {parent}")))?;
            let lc = layer_of(child)
                .ok_or_else(|| Error::InvalidLayout(format!("unknown node {child}")))?;
            if lc != lp + 1 {
                return Err(Error::InvalidLayout(format!(
                    "edge {parent}->{child} skips from layer {lp} to {lc}"
                )));
            }
        }
        for &node in self.layers[1..].iter().flatten() {
            if self.parents_of(node).is_empty() {
                return Err(Error::InvalidLayout(format!("node {node} has no parent")));
            }
        }
        Ok(())
    }
}

/// Undirected Erdős–Rényi graph: each unordered pair carries an edge
/// independently with probability `p_edge`.
pub fn sample_er_graph(p: usize, p_edge: f64, rng: &mut SeededRng) -> BinaryAdjacency {
    assert!(p >= 2, "need at least two nodes");
    assert!((0.0..=1.0).contains(&p_edge));
    let mut adj = BinaryAdjacency::zeros(p);
    for i in 0..p {
        for j in (i + 1)..p {
            if rng.gen_bool(p_edge) {
                adj.set(i, j, 1);
                adj.set(j, i, 1);
            }
        }
    }
    adj
}

/// Splits `p` child nodes over `n_layers` layers so sizes differ by at most
/// one, larger layers first.
fn layer_sizes(p: usize, n_layers: usize) -> Vec<usize> {
    let base = p / n_layers;
    let extra = p % n_layers;
    (0..n_layers)
        .map(|i| if i < extra { base + 1 } else { base })
        .collect()
}

/// Layered DAG with `n_root` roots and `p` children evenly distributed over
/// `n_layers` layers (each at least 3 nodes). Edges between consecutive
/// layers are sampled Bernoulli(`p_edge`); a child left without a parent is
/// attached to one uniformly random node of the previous layer.
pub fn sample_layered_dag(
    p: usize,
    n_root: usize,
    n_layers: usize,
    p_edge: f64,
    rng: &mut SeededRng,
) -> Result<LayeredDag> {
    if n_layers == 0 || p < 3 * n_layers {
        return Err(Error::InvalidLayout(format!(
            "cannot spread {p} child nodes over {n_layers} layers with at least 3 per layer"
        )));
    }
    if n_root == 0 {
        return Err(Error::InvalidLayout("need at least one root node".into()));
    }
    assert!((0.0..=1.0).contains(&p_edge));

    let mut layers = Vec::with_capacity(n_layers + 1);
    let mut next_id = 0;
    layers.push((0..n_root).collect::<Vec<_>>());
    next_id += n_root;
    for size in layer_sizes(p, n_layers) {
        layers.push((next_id..next_id + size).collect());
        next_id += size;
    }

    let mut edges = Vec::new();
    for w in layers.windows(2) {
        let (prev, curr) = (&w[0], &w[1]);
        for &child in curr {
            let mut got_parent = false;
            for &parent in prev {
                if rng.gen_bool(p_edge) {
                    edges.push((parent, child));
                    got_parent = true;
                }
            }
            if !got_parent {
                let parent = prev[rng.gen_range(0..prev.len())];
                edges.push((parent, child));
            }
        }
    }

    let dag = LayeredDag {
        n_root,
        layers,
        edges,
        p,
    };
    dag.validate()?;
    Ok(dag)
}

/// Ground-truth adjacency over the child nodes only: entry (j,k) = 1 iff the
/// DAG has a direct edge child_j -> child_k. Roots are discarded, so
/// root-mediated relations do not appear.
pub fn dag_to_adjacency(dag: &LayeredDag) -> BinaryAdjacency {
    let children = dag.child_nodes();
    let index_of = |node: usize| children.binary_search(&node).ok();
    let mut adj = BinaryAdjacency::zeros(dag.p);
    for &(parent, child) in &dag.edges {
        if let (Some(j), Some(k)) = (index_of(parent), index_of(child)) {
            adj.set(j, k, 1);
        }
    }
    adj
}
