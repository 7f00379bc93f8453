//! Gaussian pipeline: build a sparse precision matrix whose zero pattern is
//! exactly the graph, invert it to a covariance, and draw N(0, Σ) samples.
//!
//! The precision matrix uses a diagonally dominant construction instead of a
//! G-Wishart draw: off-diagonal weights are uniform in ±[min_w, max_w] on
//! the graph's edges, and each diagonal entry is the absolute row sum plus
//! `delta`. Gershgorin's theorem then bounds every eigenvalue below by
//! `delta`, so the matrix is positive definite with the exact zero pattern
//! and no edge weight ever degenerates to something statistically invisible.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::adjacency::BinaryAdjacency;
use crate::dataset::{Dataset, GeneratorMeta};
use crate::graphs::sample_er_graph;
use crate::linalg::{cholesky, invert_spd, Mat};
use crate::rng::SeededRng;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MvnParams {
    pub p: usize,
    pub p_edge: f64,
    pub n: usize,
    /// Minimum |off-diagonal| precision weight on a true edge.
    pub min_edge_weight: f64,
    pub max_edge_weight: f64,
    /// Diagonal slack above the absolute row sum; lower bound on eigenvalues.
    pub delta: f64,
}

impl Default for MvnParams {
    fn default() -> Self {
        Self {
            p: 10,
            p_edge: 0.267,
            n: 10_000,
            min_edge_weight: 0.1,
            max_edge_weight: 1.0,
            delta: 0.1,
        }
    }
}

/// Symmetric positive definite precision matrix whose off-diagonal zero
/// pattern equals the generating graph.
#[derive(Debug, Clone)]
pub struct PrecisionMatrix {
    mat: Mat,
    graph: BinaryAdjacency,
    delta: f64,
}

impl PrecisionMatrix {
    pub fn p(&self) -> usize {
        self.graph.p()
    }

    pub fn matrix(&self) -> &Mat {
        &self.mat
    }

    pub fn graph(&self) -> &BinaryAdjacency {
        &self.graph
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// Samples a precision matrix respecting `g`: entry (j,k) = ±Uniform[min_w,
/// max_w] where g has an edge, zero elsewhere off the diagonal, and
/// diagonal (j,j) = Σ_k≠j |entry(j,k)| + delta.
pub fn sample_precision(
    g: &BinaryAdjacency,
    rng: &mut SeededRng,
    min_w: f64,
    max_w: f64,
    delta: f64,
) -> PrecisionMatrix {
    assert!(g.is_symmetric(), "precision construction needs an undirected graph");
    assert!(0.0 < min_w && min_w <= max_w);
    assert!(delta > 0.0);
    let p = g.p();
    let mut mat = Mat::zeros(p, p);
    for j in 0..p {
        for k in (j + 1)..p {
            if g.get(j, k) == 1 {
                let magnitude = rng.gen_range(min_w..=max_w);
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                let w = sign * magnitude;
                mat.set(j, k, w);
                mat.set(k, j, w);
            }
        }
    }
    for j in 0..p {
        let row_sum: f64 = (0..p).filter(|&k| k != j).map(|k| mat.get(j, k).abs()).sum();
        mat.set(j, j, row_sum + delta);
    }
    PrecisionMatrix {
        mat,
        graph: g.clone(),
        delta,
    }
}

fn sample_mvn_values(k: &PrecisionMatrix, n: usize, rng: &mut SeededRng) -> Result<(Vec<f64>, usize)> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one sample".into()));
    }
    let p = k.p();
    let sigma = invert_spd(k.matrix())?;
    let l = cholesky(&sigma)?;
    let mut values = vec![0.0; n * p];
    let mut z = vec![0.0; p];
    for i in 0..n {
        for zj in z.iter_mut() {
            *zj = rng.sample(StandardNormal);
        }
        let row = &mut values[i * p..(i + 1) * p];
        for j in 0..p {
            // (Z·Lᵀ)_j = Σ_{k≤j} z_k · L[j][k]
            row[j] = l.row(j)[..=j]
                .iter()
                .zip(&z[..=j])
                .map(|(a, b)| a * b)
                .sum();
        }
    }
    let target_index = rng.gen_range(0..p);
    Ok((values, target_index))
}

/// Draws `n` samples from N(0, Σ) with Σ the inverse of `k`, via Z·Lᵀ with
/// L the Cholesky factor of Σ. The target column is selected uniformly.
pub fn sample_mvn(k: &PrecisionMatrix, n: usize, rng: &mut SeededRng) -> Result<Dataset> {
    let seed = rng.seed();
    let (values, target_index) = sample_mvn_values(k, n, rng)?;
    Dataset::new(
        n,
        k.p(),
        values,
        target_index,
        k.graph().clone(),
        GeneratorMeta {
            generator: "mvn".into(),
            seed,
            params: serde_json::Value::Null,
        },
    )
}

/// Full pipeline: graph, precision, samples, metadata. This is what the
/// `gen` subcommand and the experiment harness call.
pub fn generate(params: &MvnParams, seed: u64) -> Result<Dataset> {
    let root = SeededRng::new(seed);
    let mut graph_rng = root.derive("mvn-graph");
    let g = sample_er_graph(params.p, params.p_edge, &mut graph_rng);
    let mut prec_rng = root.derive("mvn-precision");
    let k = sample_precision(
        &g,
        &mut prec_rng,
        params.min_edge_weight,
        params.max_edge_weight,
        params.delta,
    );
    let mut data_rng = root.derive("mvn-data");
    let (values, target_index) = sample_mvn_values(&k, params.n, &mut data_rng)?;
    Dataset::new(
        params.n,
        params.p,
        values,
        target_index,
        g,
        GeneratorMeta {
            generator: "mvn".into(),
            seed,
            params: serde_json::to_value(params)?,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_edges_gives_diagonal_delta() {
        let g = BinaryAdjacency::zeros(4);
        let mut rng = SeededRng::new(1);
        let k = sample_precision(&g, &mut rng, 0.1, 1.0, 0.1);
        for j in 0..4 {
            for l in 0..4 {
                let expected = if j == l { 0.1 } else { 0.0 };
                assert_eq!(k.matrix().get(j, l), expected);
            }
        }
    }

    #[test]
    fn single_edge_matches_hand_eigenvalues() {
        // K = [[|w|+0.1, ±w], [±w, |w|+0.1]] has eigenvalues
        // diag ± |w| = {0.1, 2|w|+0.1} regardless of the sign draw.
        let mut g = BinaryAdjacency::zeros(2);
        g.set(0, 1, 1);
        g.set(1, 0, 1);
        let mut rng = SeededRng::new(7);
        let k = sample_precision(&g, &mut rng, 0.5, 0.5, 0.1);
        let m = k.matrix();
        assert!((m.get(0, 1).abs() - 0.5).abs() < 1e-15);
        assert_eq!(m.get(0, 1), m.get(1, 0));
        assert!((m.get(0, 0) - 0.6).abs() < 1e-15);
        let lo = m.get(0, 0) - m.get(0, 1).abs();
        let hi = m.get(0, 0) + m.get(0, 1).abs();
        assert!((lo - 0.1).abs() < 1e-12);
        assert!((hi - 1.1).abs() < 1e-12);
    }

    #[test]
    fn zero_pattern_matches_graph_every_seed() {
        for seed in 0..100 {
            let mut rng = SeededRng::new(seed);
            let g = sample_er_graph(10, 0.267, &mut rng);
            let k = sample_precision(&g, &mut rng, 0.1, 1.0, 0.1);
            for j in 0..10 {
                for l in 0..10 {
                    if j == l {
                        continue;
                    }
                    let has_weight = k.matrix().get(j, l) != 0.0;
                    let has_edge = g.get(j, l) == 1;
                    assert_eq!(has_weight, has_edge, "seed {seed} at ({j},{l})");
                    if has_edge {
                        assert!(k.matrix().get(j, l).abs() >= 0.1);
                    }
                }
            }
        }
    }

    #[test]
    fn identity_precision_gives_unit_variances() {
        let g = BinaryAdjacency::zeros(3);
        let mut rng = SeededRng::new(3);
        // delta = 1 makes K = I exactly.
        let k = sample_precision(&g, &mut rng, 0.1, 1.0, 1.0);
        let n = 100_000;
        let mut data_rng = SeededRng::new(99);
        let ds = sample_mvn(&k, n, &mut data_rng).unwrap();
        // Var of the sample variance of N(0,1) is 2/n; 3σ band.
        let band = 3.0 * (2.0 / n as f64).sqrt();
        for j in 0..3 {
            let col = ds.column(j);
            let mean: f64 = col.iter().sum::<f64>() / n as f64;
            let var: f64 = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
            assert!((var - 1.0).abs() < band, "column {j}: var {var}");
        }
    }

    #[test]
    fn single_sample_has_finite_shape() {
        let g = BinaryAdjacency::zeros(5);
        let mut rng = SeededRng::new(4);
        let k = sample_precision(&g, &mut rng, 0.1, 1.0, 0.1);
        let ds = sample_mvn(&k, 1, &mut rng).unwrap();
        assert_eq!(ds.n(), 1);
        assert_eq!(ds.p(), 5);
        assert!(ds.row(0).iter().all(|v| v.is_finite()));
    }

    #[test]
    fn generate_is_deterministic() {
        let params = MvnParams::default();
        let a = generate(&params, 123).unwrap();
        let b = generate(&params, 123).unwrap();
        assert_eq!(a.target_index(), b.target_index());
        assert_eq!(a.truth(), b.truth());
        for i in 0..a.n().min(50) {
            assert_eq!(a.row(i), b.row(i));
        }
    }
}
