//! Structural-causal pipeline: assign a nonlinear computational map to each
//! DAG child, traverse topologically (roots ~ N(0,1)), normalize, add
//! Gaussian noise, clip, and keep the child columns as the dataset.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::dataset::{Dataset, GeneratorMeta};
use crate::graphs::{dag_to_adjacency, sample_layered_dag, LayeredDag};
use crate::rng::SeededRng;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ScmParams {
    pub p: usize,
    pub n_root: usize,
    pub n_layers: usize,
    pub p_edge: f64,
    pub n: usize,
    /// Variance of the additive Gaussian noise.
    pub noise_variance: f64,
    /// Outputs are clipped to [-clip, clip].
    pub clip: f64,
}

impl Default for ScmParams {
    fn default() -> Self {
        Self {
            p: 10,
            n_root: 3,
            n_layers: 3,
            p_edge: 0.5,
            n: 10_000,
            noise_variance: 0.5,
            clip: 3.0,
        }
    }
}

/// The fixed table of nine smooth nonlinear parent->child maps, three per
/// arity.
pub const MAP_TABLE: [MapSpec; 9] = [
    MapSpec { arity: 1, eval: |x| x[0] * x[0] / 3.0 },
    MapSpec { arity: 1, eval: |x| 0.5 * x[0] * x[0] + 3.0 * x[0] },
    MapSpec { arity: 1, eval: |x| -x[0].abs() + 4.0 * x[0] },
    MapSpec { arity: 2, eval: |x| (x[0] * x[1] + x[0] * x[0]) / 2.0 },
    MapSpec { arity: 2, eval: |x| x[0] * x[0] + x[1] * x[1] - x[0] * x[1] },
    MapSpec { arity: 2, eval: |x| -(x[0] + x[1]) * (x[0] + x[1]) + x[0] * x[1] },
    MapSpec { arity: 3, eval: |x| (x[0] * x[1] + x[2] * x[2]) / 3.0 },
    MapSpec { arity: 3, eval: |x| -x[0] * x[0] + x[1] * x[2] + x[2] },
    MapSpec { arity: 3, eval: |x| (x[0] + x[1] + x[2]) + x[0] * x[2] },
];

#[derive(Clone, Copy)]
pub struct MapSpec {
    pub arity: usize,
    pub eval: fn(&[f64]) -> f64,
}

/// One entry of [`MAP_TABLE`], chosen for a child node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComputationalMap {
    pub arity: usize,
    /// Index into [`MAP_TABLE`].
    pub map_id: usize,
}

impl ComputationalMap {
    pub fn from_table(map_id: usize) -> Self {
        Self {
            arity: MAP_TABLE[map_id].arity,
            map_id,
        }
    }
}

pub fn eval_map(m: ComputationalMap, parent_values: &[f64]) -> Result<f64> {
    if parent_values.len() != m.arity {
        return Err(Error::ArityMismatch {
            expected: m.arity,
            got: parent_values.len(),
        });
    }
    Ok((MAP_TABLE[m.map_id].eval)(parent_values))
}

fn table_ids_with_arity(arity: usize) -> Vec<usize> {
    MAP_TABLE
        .iter()
        .enumerate()
        .filter(|(_, s)| s.arity == arity)
        .map(|(i, _)| i)
        .collect()
}

/// Assigns each child a uniformly random map matching its in-degree. The
/// map table tops out at arity 3, so a child with more than 3 parents keeps
/// a random 3-subset; the surviving parent set is written back into the DAG
/// edge list (and therefore the truth adjacency).
pub fn assign_maps(dag: &mut LayeredDag, rng: &mut SeededRng) -> BTreeMap<usize, ComputationalMap> {
    let mut maps = BTreeMap::new();
    for child in dag.child_nodes() {
        let mut parents = dag.parents_of(child);
        if parents.len() > 3 {
            // Random 3-subset via partial Fisher-Yates.
            for i in 0..3 {
                let j = rng.gen_range(i..parents.len());
                parents.swap(i, j);
            }
            let keep: Vec<usize> = parents[..3].to_vec();
            dag.edges
                .retain(|(p, c)| *c != child || keep.contains(p));
            parents = keep;
            parents.sort_unstable();
        }
        let candidates = table_ids_with_arity(parents.len());
        let map_id = candidates[rng.gen_range(0..candidates.len())];
        maps.insert(child, ComputationalMap::from_table(map_id));
    }
    maps
}

/// Output of [`generate_scm_detailed`]: the dataset plus the pre-noise
/// normalized column of every child, for verification of the normalization
/// contract.
pub struct ScmOutput {
    pub dataset: Dataset,
    /// Keyed by child node id; each column has length n and mean 0 /
    /// variance 1 (population) before noise and clipping.
    pub pre_noise: BTreeMap<usize, Vec<f64>>,
}

/// Normalizes to zero mean, unit population variance.
fn normalize_column(col: &mut [f64], node: usize) -> Result<()> {
    let n = col.len() as f64;
    let mean = col.iter().sum::<f64>() / n;
    let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    if var <= 0.0 || !var.is_finite() {
        return Err(Error::DegenerateColumn { node });
    }
    let sd = var.sqrt();
    for v in col.iter_mut() {
        *v = (*v - mean) / sd;
    }
    Ok(())
}

fn traverse(
    dag: &LayeredDag,
    maps: &BTreeMap<usize, ComputationalMap>,
    n: usize,
    noise_sd: f64,
    clip: f64,
    rng: &mut SeededRng,
) -> Result<(BTreeMap<usize, Vec<f64>>, BTreeMap<usize, Vec<f64>>)> {
    // node id -> final column (after normalize + noise + clip)
    let mut columns: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    let mut pre_noise: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for &root in &dag.layers[0] {
        let col: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        columns.insert(root, col);
    }
    // Layer order is a topological order.
    for layer in &dag.layers[1..] {
        for &child in layer {
            let map = maps[&child];
            let parents = dag.parents_of(child);
            let mut col = vec![0.0; n];
            let mut parent_vals = vec![0.0; parents.len()];
            for (i, slot) in col.iter_mut().enumerate() {
                for (slot_p, &p) in parent_vals.iter_mut().zip(&parents) {
                    *slot_p = columns[&p][i];
                }
                *slot = eval_map(map, &parent_vals)?;
            }
            normalize_column(&mut col, child)?;
            pre_noise.insert(child, col.clone());
            for v in col.iter_mut() {
                let noise: f64 = rng.sample(StandardNormal);
                *v = (*v + noise_sd * noise).clamp(-clip, clip);
            }
            columns.insert(child, col);
        }
    }
    Ok((columns, pre_noise))
}

/// Traverses the DAG and emits the dataset over the p child nodes (roots
/// discarded). A child whose pre-noise column is constant gets one map
/// resample; a second degenerate draw is a hard error.
pub fn generate_scm_detailed(
    dag: &LayeredDag,
    maps: &BTreeMap<usize, ComputationalMap>,
    n: usize,
    noise_variance: f64,
    clip: f64,
    rng: &mut SeededRng,
) -> Result<ScmOutput> {
    if n < 2 {
        return Err(Error::InvalidInput(
            "normalization needs at least two samples".into(),
        ));
    }
    let noise_sd = noise_variance.sqrt();
    let seed = rng.seed();
    let mut maps = maps.clone();
    let (columns, pre_noise) = match traverse(dag, &maps, n, noise_sd, clip, rng) {
        Ok(out) => out,
        Err(Error::DegenerateColumn { node }) => {
            let candidates = table_ids_with_arity(maps[&node].arity);
            let current = maps[&node].map_id;
            let alternatives: Vec<usize> =
                candidates.into_iter().filter(|&id| id != current).collect();
            let map_id = alternatives[rng.gen_range(0..alternatives.len())];
            maps.insert(node, ComputationalMap::from_table(map_id));
            traverse(dag, &maps, n, noise_sd, clip, rng)?
        }
        Err(e) => return Err(e),
    };

    let children = dag.child_nodes();
    let p = children.len();
    let mut values = vec![0.0; n * p];
    for (j, child) in children.iter().enumerate() {
        let col = &columns[child];
        for i in 0..n {
            values[i * p + j] = col[i];
        }
    }
    let truth = dag_to_adjacency(dag);
    let target_index = rng.gen_range(0..p);
    let dataset = Dataset::new(
        n,
        p,
        values,
        target_index,
        truth,
        GeneratorMeta {
            generator: "scm".into(),
            seed,
            params: serde_json::Value::Null,
        },
    )?;
    Ok(ScmOutput { dataset, pre_noise })
}

pub fn generate_scm(
    dag: &LayeredDag,
    maps: &BTreeMap<usize, ComputationalMap>,
    n: usize,
    noise_variance: f64,
    clip: f64,
    rng: &mut SeededRng,
) -> Result<Dataset> {
    Ok(generate_scm_detailed(dag, maps, n, noise_variance, clip, rng)?.dataset)
}

/// Full pipeline: DAG, maps, traversal, metadata.
pub fn generate(params: &ScmParams, seed: u64) -> Result<Dataset> {
    let root = SeededRng::new(seed);
    let mut dag_rng = root.derive("scm-dag");
    let mut dag = sample_layered_dag(
        params.p,
        params.n_root,
        params.n_layers,
        params.p_edge,
        &mut dag_rng,
    )?;
    let mut map_rng = root.derive("scm-maps");
    let maps = assign_maps(&mut dag, &mut map_rng);
    let mut data_rng = root.derive("scm-data");
    let out = generate_scm_detailed(
        &dag,
        &maps,
        params.n,
        params.noise_variance,
        params.clip,
        &mut data_rng,
    )?;
    let ds = out.dataset;
    Dataset::new(
        ds.n(),
        ds.p(),
        (0..ds.n()).flat_map(|i| ds.row(i).to_vec()).collect(),
        ds.target_index(),
        ds.truth().clone(),
        GeneratorMeta {
            generator: "scm".into(),
            seed,
            params: serde_json::to_value(params)?,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_table_hand_checks() {
        // x₁²/3 at x₁ = 3
        assert_eq!(eval_map(ComputationalMap::from_table(0), &[3.0]).unwrap(), 3.0);
        // x₁² + x₂² − x₁x₂ at (0,0)
        assert_eq!(eval_map(ComputationalMap::from_table(4), &[0.0, 0.0]).unwrap(), 0.0);
        // (x₁+x₂+x₃) + x₁x₃ at (1,1,1)
        assert_eq!(
            eval_map(ComputationalMap::from_table(8), &[1.0, 1.0, 1.0]).unwrap(),
            4.0
        );
        // 0.5x₁² + 3x₁ at x₁ = 2: 2 + 6
        assert_eq!(eval_map(ComputationalMap::from_table(1), &[2.0]).unwrap(), 8.0);
        // −|x₁| + 4x₁ at −1: −1 − 4
        assert_eq!(eval_map(ComputationalMap::from_table(2), &[-1.0]).unwrap(), -5.0);
        // (x₁x₂ + x₁²)/2 at (2,3): (6+4)/2
        assert_eq!(eval_map(ComputationalMap::from_table(3), &[2.0, 3.0]).unwrap(), 5.0);
        // −(x₁+x₂)² + x₁x₂ at (1,2): −9 + 2
        assert_eq!(eval_map(ComputationalMap::from_table(5), &[1.0, 2.0]).unwrap(), -7.0);
        // (x₁x₂ + x₃²)/3 at (1,2,3): (2+9)/3
        assert!((eval_map(ComputationalMap::from_table(6), &[1.0, 2.0, 3.0]).unwrap() - 11.0 / 3.0).abs() < 1e-15);
        // −x₁² + x₂x₃ + x₃ at (1,2,3): −1 + 6 + 3
        assert_eq!(eval_map(ComputationalMap::from_table(7), &[1.0, 2.0, 3.0]).unwrap(), 8.0);
    }

    #[test]
    fn arity_mismatch_is_rejected() {
        let err = eval_map(ComputationalMap::from_table(0), &[1.0, 2.0]);
        assert!(matches!(err, Err(Error::ArityMismatch { expected: 1, got: 2 })));
    }

    #[test]
    fn chain_dag_gets_arity_one_maps() {
        let mut dag = LayeredDag {
            n_root: 1,
            layers: vec![vec![0], vec![1, 2, 3], vec![4, 5, 6]],
            edges: vec![(0, 1), (0, 2), (0, 3), (1, 4), (2, 5), (3, 6)],
            p: 6,
        };
        let mut rng = SeededRng::new(2);
        let maps = assign_maps(&mut dag, &mut rng);
        for (_, m) in maps {
            assert_eq!(m.arity, 1);
        }
    }

    #[test]
    fn high_in_degree_is_capped_at_three() {
        let mut dag = LayeredDag {
            n_root: 5,
            layers: vec![vec![0, 1, 2, 3, 4], vec![5, 6, 7]],
            edges: vec![
                (0, 5), (1, 5), (2, 5), (3, 5), (4, 5),
                (0, 6), (1, 7),
            ],
            p: 3,
        };
        let mut rng = SeededRng::new(3);
        let maps = assign_maps(&mut dag, &mut rng);
        assert_eq!(dag.parents_of(5).len(), 3);
        assert_eq!(maps[&5].arity, 3);
        assert_eq!(maps[&6].arity, 1);
    }

    #[test]
    fn assign_maps_is_deterministic() {
        let build = || LayeredDag {
            n_root: 2,
            layers: vec![vec![0, 1], vec![2, 3, 4]],
            edges: vec![(0, 2), (1, 2), (0, 3), (1, 4)],
            p: 3,
        };
        let mut d1 = build();
        let mut d2 = build();
        let m1 = assign_maps(&mut d1, &mut SeededRng::new(77));
        let m2 = assign_maps(&mut d2, &mut SeededRng::new(77));
        assert_eq!(m1, m2);
        assert_eq!(d1, d2);
    }

    #[test]
    fn outputs_are_clipped_and_prenoise_is_normalized() {
        let params = ScmParams { n: 5_000, ..ScmParams::default() };
        let root = SeededRng::new(31);
        let mut dag_rng = root.derive("scm-dag");
        let mut dag =
            sample_layered_dag(params.p, params.n_root, params.n_layers, params.p_edge, &mut dag_rng)
                .unwrap();
        let mut map_rng = root.derive("scm-maps");
        let maps = assign_maps(&mut dag, &mut map_rng);
        let mut data_rng = root.derive("scm-data");
        let out = generate_scm_detailed(&dag, &maps, params.n, 0.5, 3.0, &mut data_rng).unwrap();
        let ds = &out.dataset;
        for i in 0..ds.n() {
            for v in ds.row(i) {
                assert!(*v >= -3.0 && *v <= 3.0);
            }
        }
        let n = params.n as f64;
        for (node, col) in &out.pre_noise {
            let mean = col.iter().sum::<f64>() / n;
            let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
            assert!(mean.abs() < crate::tol::TOL.scm_normalization, "node {node}: mean {mean}");
            assert!((var - 1.0).abs() < crate::tol::TOL.scm_normalization, "node {node}: var {var}");
        }
    }

    #[test]
    fn noise_free_chain_is_deterministic_transform_of_parent() {
        // Single-parent chain with the odd map −|x₁| + 4x₁ and no noise:
        // the child column must be the normalized map of the parent column.
        let dag = LayeredDag {
            n_root: 1,
            layers: vec![vec![0], vec![1, 2, 3]],
            edges: vec![(0, 1), (0, 2), (0, 3)],
            p: 3,
        };
        let mut maps = BTreeMap::new();
        for child in 1..=3 {
            maps.insert(child, ComputationalMap::from_table(2));
        }
        let mut rng = SeededRng::new(5);
        let out = generate_scm_detailed(&dag, &maps, 256, 0.0, f64::INFINITY, &mut rng).unwrap();
        // Reconstruct: the three children all apply the same map to the same
        // parent, so their columns must be identical.
        let ds = &out.dataset;
        for i in 0..ds.n() {
            assert_eq!(ds.value(i, 0), ds.value(i, 1));
            assert_eq!(ds.value(i, 1), ds.value(i, 2));
        }
    }

    #[test]
    fn column_means_stay_near_zero() {
        // Pre-noise columns are exactly zero-mean; noise is zero-mean; the
        // clip at ±3 is symmetric, so column means stay within sampling
        // error of 0. Var(col) ≤ 1 + σ², so 3σ_mean over n = 10⁴ draws.
        let ds = generate(&ScmParams::default(), 8).unwrap();
        let n = ds.n() as f64;
        let band = 3.0 * (1.5f64 / n).sqrt();
        for j in 0..ds.p() {
            let col = ds.column(j);
            let mean = col.iter().sum::<f64>() / n;
            assert!(mean.abs() < band, "column {j}: mean {mean} vs band {band}");
        }
    }

    #[test]
    fn generate_is_deterministic() {
        let a = generate(&ScmParams::default(), 99).unwrap();
        let b = generate(&ScmParams::default(), 99).unwrap();
        assert_eq!(a.target_index(), b.target_index());
        assert_eq!(a.truth(), b.truth());
        for i in 0..50 {
            assert_eq!(a.row(i), b.row(i));
        }
    }
}
