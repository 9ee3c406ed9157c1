use std::collections::HashSet;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::bits::{check_width, from_hex, to_hex, BitString};
use super::function::{BooleanFunction, ClassKind, FunctionClass, Representation};
use super::generate::FunctionGenerator;
use super::gf2::Gf2Matrix;
use crate::error::{Error, Result};

/// Consecutive duplicate draws tolerated before giving up on uniqueness.
const MAX_DUPLICATE_STREAK: usize = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub struct DatasetEntry {
    pub id: usize,
    pub function: BooleanFunction,
    pub class: FunctionClass,
}

/// A balanced set of distinct functions. The first `m/2` entries are 1:1,
/// the rest 2:1; ids are `0..m` in that order.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub n: usize,
    pub seed: u64,
    pub generator: String,
    pub entries: Vec<DatasetEntry>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn labels(&self) -> Vec<ClassKind> {
        self.entries.iter().map(|e| e.class.kind).collect()
    }

    pub fn count(&self, kind: ClassKind) -> usize {
        self.entries.iter().filter(|e| e.class.kind == kind).count()
    }
}

/// Draws `m/2` distinct 1:1 and `m/2` distinct 2:1 functions of width `n`.
/// Distinctness is judged on truth tables. Deterministic in `seed`.
pub fn gen_dataset(
    n: usize,
    m: usize,
    seed: u64,
    generator: &dyn FunctionGenerator,
) -> Result<Dataset> {
    check_width(n)?;
    if m == 0 || !m.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "dataset size must be a positive even number, got {m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashSet<Vec<u32>> = HashSet::with_capacity(m);
    let mut entries = Vec::with_capacity(m);
    for kind in [ClassKind::OneToOne, ClassKind::TwoToOne] {
        let mut streak = 0;
        let mut drawn = 0;
        while drawn < m / 2 {
            let f = match kind {
                ClassKind::OneToOne => generator.one_to_one(n, &mut rng),
                ClassKind::TwoToOne => generator.two_to_one(n, &mut rng),
            };
            if !seen.insert(f.truth_table()) {
                streak += 1;
                if streak >= MAX_DUPLICATE_STREAK {
                    return Err(Error::UniquenessExhausted {
                        wanted: m / 2,
                        attempts: streak,
                    });
                }
                continue;
            }
            streak = 0;
            let class = f.classify_exact()?;
            debug_assert_eq!(class.kind, kind);
            entries.push(DatasetEntry {
                id: entries.len(),
                function: f,
                class,
            });
            drawn += 1;
        }
    }
    Ok(Dataset {
        n,
        seed,
        generator: generator.name().to_string(),
        entries,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum ReprKind {
    Linear,
    Table,
}

/// One function in the JSON manifest. Hex strings are zero-padded and use
/// the natural bit order (bit 0 = least significant).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ManifestEntry {
    pub id: usize,
    pub kind: ReprKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows_hex: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table_hex: Option<Vec<String>>,
    pub class: ClassKind,
    pub hidden_hex: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Manifest {
    pub n: usize,
    pub seed: u64,
    pub generator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<serde_json::Value>,
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn from_dataset(ds: &Dataset, config: Option<serde_json::Value>) -> Self {
        let n = ds.n;
        let entries = ds
            .entries
            .iter()
            .map(|e| {
                let (kind, rows_hex, table_hex) = match e.function.representation() {
                    Representation::Linear(m) => (
                        ReprKind::Linear,
                        Some(m.rows().iter().map(|&r| to_hex(r, n)).collect()),
                        None,
                    ),
                    Representation::Table(t) => (
                        ReprKind::Table,
                        None,
                        Some(t.iter().map(|&y| to_hex(y, n)).collect()),
                    ),
                };
                ManifestEntry {
                    id: e.id,
                    kind,
                    rows_hex,
                    table_hex,
                    class: e.class.kind,
                    hidden_hex: to_hex(e.class.hidden.value(), n),
                }
            })
            .collect();
        Manifest {
            n,
            seed: ds.seed,
            generator: ds.generator.clone(),
            config,
            entries,
        }
    }

    /// Rebuilds the dataset, re-deriving every class and rejecting entries
    /// whose recorded class or hidden string disagrees.
    pub fn to_dataset(&self) -> Result<Dataset> {
        let n = self.n;
        check_width(n).map_err(|e| Error::Manifest(e.to_string()))?;
        let entries = self
            .entries
            .iter()
            .map(|e| {
                let parse_all = |v: &Vec<String>| {
                    v.iter().map(|h| from_hex(h, n)).collect::<Result<Vec<u32>>>()
                };
                let function = match (&e.kind, &e.rows_hex, &e.table_hex) {
                    (ReprKind::Linear, Some(rows), _) => BooleanFunction::linear(
                        Gf2Matrix::from_rows(n, parse_all(rows)?)
                            .map_err(|err| Error::Manifest(format!("entry {}: {err}", e.id)))?,
                    ),
                    (ReprKind::Table, _, Some(table)) => {
                        BooleanFunction::from_table(n, parse_all(table)?)
                            .map_err(|err| Error::Manifest(format!("entry {}: {err}", e.id)))?
                    }
                    _ => {
                        return Err(Error::Manifest(format!(
                            "entry {} lacks the field for its representation",
                            e.id
                        )))
                    }
                };
                let class = function
                    .classify_exact()
                    .map_err(|err| Error::Manifest(format!("entry {}: {err}", e.id)))?;
                let hidden = BitString::new(n, from_hex(&e.hidden_hex, n)?)?;
                if class.kind != e.class || class.hidden != hidden {
                    return Err(Error::Manifest(format!(
                        "entry {}: recorded class {:?}/{} but function is {:?}/{}",
                        e.id, e.class, hidden, class.kind, class.hidden
                    )));
                }
                Ok(DatasetEntry {
                    id: e.id,
                    function,
                    class,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Dataset {
            n,
            seed: self.seed,
            generator: self.generator.clone(),
            entries,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Manifest(format!("{}: {e}", path.display())))
    }
}
