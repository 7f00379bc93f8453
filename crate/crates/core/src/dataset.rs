//! Dataset container and its on-disk format: `data.csv` with a `f0..f{p-1}`
//! header plus a `meta.json` sidecar holding the ground-truth adjacency and
//! generator provenance.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::adjacency::BinaryAdjacency;
use crate::{Error, Result};

pub const DATA_FILE: &str = "data.csv";
pub const META_FILE: &str = "meta.json";

/// Provenance of a generated dataset: which pipeline produced it, from which
/// seed, and with which hyperparameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorMeta {
    pub generator: String,
    pub seed: u64,
    pub params: serde_json::Value,
}

#[derive(Debug, Clone)]
pub struct Dataset {
    n: usize,
    p: usize,
    /// Row-major n×p.
    values: Vec<f64>,
    target_index: usize,
    truth: BinaryAdjacency,
    meta: GeneratorMeta,
}

#[derive(Serialize, Deserialize)]
struct MetaFile {
    p: usize,
    n: usize,
    target_index: usize,
    seed: u64,
    generator: String,
    adjacency: Vec<Vec<u8>>,
    params: serde_json::Value,
}

impl Dataset {
    pub fn new(
        n: usize,
        p: usize,
        values: Vec<f64>,
        target_index: usize,
        truth: BinaryAdjacency,
        meta: GeneratorMeta,
    ) -> Result<Self> {
        if values.len() != n * p {
            return Err(Error::InvalidInput(format!(
                "expected {n}×{p} values, got {}",
                values.len()
            )));
        }
        if target_index >= p {
            return Err(Error::InvalidInput(format!(
                "target_index {target_index} out of range for p={p}"
            )));
        }
        if truth.p() != p {
            return Err(Error::InvalidInput(format!(
                "truth graph has {} nodes, dataset has {p}",
                truth.p()
            )));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite value at row {} col {}",
                bad / p,
                bad % p
            )));
        }
        Ok(Self {
            n,
            p,
            values,
            target_index,
            truth,
            meta,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn target_index(&self) -> usize {
        self.target_index
    }

    pub fn truth(&self) -> &BinaryAdjacency {
        &self.truth
    }

    pub fn meta(&self) -> &GeneratorMeta {
        &self.meta
    }

    /// Stable identifier used in result tables: generator plus seed.
    pub fn id(&self) -> String {
        format!("{}-s{}", self.meta.generator, self.meta.seed)
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.p..(i + 1) * self.p]
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.p + j]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.value(i, j)).collect()
    }

    /// Input features of one sample: the row with the target column removed,
    /// keeping the remaining columns in dataset order.
    pub fn features_of(&self, i: usize) -> Vec<f64> {
        let row = self.row(i);
        let mut out = Vec::with_capacity(self.p - 1);
        out.extend_from_slice(&row[..self.target_index]);
        out.extend_from_slice(&row[self.target_index + 1..]);
        out
    }

    pub fn target_of(&self, i: usize) -> f64 {
        self.value(i, self.target_index)
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let mut w = BufWriter::new(File::create(dir.join(DATA_FILE))?);
        let header: Vec<String> = (0..self.p).map(|j| format!("f{j}")).collect();
        writeln!(w, "{}", header.join(","))?;
        let mut line = String::new();
        for i in 0..self.n {
            line.clear();
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    line.push(',');
                }
                line.push_str(&format!("{v}"));
            }
            writeln!(w, "{line}")?;
        }
        w.flush()?;

        let meta = MetaFile {
            p: self.p,
            n: self.n,
            target_index: self.target_index,
            seed: self.meta.seed,
            generator: self.meta.generator.clone(),
            adjacency: self.truth.to_rows(),
            params: self.meta.params.clone(),
        };
        let f = BufWriter::new(File::create(dir.join(META_FILE))?);
        serde_json::to_writer_pretty(f, &meta)?;
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let meta: MetaFile = serde_json::from_reader(BufReader::new(File::open(dir.join(META_FILE))?))?;
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_path(dir.join(DATA_FILE))?;
        let mut values = Vec::with_capacity(meta.n * meta.p);
        for record in reader.records() {
            let record = record?;
            if record.len() != meta.p {
                return Err(Error::InvalidInput(format!(
                    "csv row has {} fields, expected {}",
                    record.len(),
                    meta.p
                )));
            }
            for field in record.iter() {
                values.push(field.parse::<f64>().map_err(|e| {
                    Error::InvalidInput(format!("bad float {field:?}: {e}"))
                })?);
            }
        }
        let truth = BinaryAdjacency::from_rows(&meta.adjacency)?;
        Dataset::new(
            meta.n,
            meta.p,
            values,
            meta.target_index,
            truth,
            GeneratorMeta {
                generator: meta.generator,
                seed: meta.seed,
                params: meta.params,
            },
        )
    }
}
