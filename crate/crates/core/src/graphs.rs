//! Seeded sampling of Erdős–Rényi and random multipartite graphs.
//!
//! Every sampler draws one uniform `f64` per eligible vertex pair, walking the
//! upper triangle in row-major order, from a ChaCha8 stream seeded with the
//! caller's [`Seed`]. Samples are therefore identical across platforms and
//! thread counts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};
use crate::matrix::SymMatrix;

const FRACTION_SUM_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl Seed {
    /// Independent seed for trial `index`, a SplitMix64 hash of `(self, index)`.
    pub fn for_trial(self, index: u64) -> Seed {
        Seed(splitmix64(
            self.0 ^ splitmix64(index.wrapping_add(0x632B_E59B_D9B4_E019)),
        ))
    }

    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Fractional part sizes of a multipartite vertex set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PartitionSpec {
    fractions: Vec<f64>,
}

impl PartitionSpec {
    pub fn new(fractions: Vec<f64>) -> Result<Self> {
        if fractions.len() < 2 {
            return Err(Error::InvalidPartition(format!(
                "need at least 2 parts, got {}",
                fractions.len()
            )));
        }
        if let Some(bad) = fractions
            .iter()
            .find(|f| !(f.is_finite() && **f > 0.0 && **f <= 1.0))
        {
            return Err(Error::InvalidPartition(format!(
                "fraction {bad} outside (0, 1]"
            )));
        }
        let sum: f64 = fractions.iter().sum();
        if (sum - 1.0).abs() > FRACTION_SUM_TOL {
            return Err(Error::InvalidPartition(format!(
                "fractions sum to {sum}, expected 1"
            )));
        }
        Ok(Self { fractions })
    }

    /// `m` equal parts of fraction `1/m`.
    pub fn equal(m: usize) -> Result<Self> {
        Self::new(vec![1.0 / m as f64; m])
    }

    pub fn fractions(&self) -> &[f64] {
        &self.fractions
    }

    pub fn part_count(&self) -> usize {
        self.fractions.len()
    }

    pub fn is_balanced(&self) -> bool {
        let first = self.fractions[0];
        self.fractions
            .iter()
            .all(|f| (f - first).abs() <= FRACTION_SUM_TOL)
    }
}

impl TryFrom<Vec<f64>> for PartitionSpec {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<PartitionSpec> for Vec<f64> {
    fn from(p: PartitionSpec) -> Self {
        p.fractions
    }
}

impl std::str::FromStr for PartitionSpec {
    type Err = Error;

    /// Parses a comma-separated list such as `0.5,0.5`.
    fn from_str(s: &str) -> Result<Self> {
        let fractions = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::InvalidPartition(format!("bad fraction {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(fractions)
    }
}

/// Integer part sizes; `total()` is the number of vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartSizes(Vec<usize>);

impl PartSizes {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidPartition("no parts".into()));
        }
        Ok(Self(sizes))
    }

    /// Every vertex in its own part; the Erdős–Rényi case.
    pub fn singletons(n: usize) -> Self {
        Self(vec![1; n])
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Part index of every vertex, parts laid out contiguously in order.
    pub fn labels(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(k, &s)| std::iter::repeat_n(k, s))
            .collect()
    }
}

/// Realizes fractions as integer sizes by largest-remainder rounding,
/// ties going to the lowest index.
///
/// Parts that would round to zero are topped up to one vertex, taken from
/// the currently largest part (lowest index on ties).
pub fn partition_sizes(n: usize, spec: &PartitionSpec) -> Result<PartSizes> {
    let m = spec.part_count();
    if n < m {
        return Err(Error::InvalidPartition(format!(
            "{n} vertices cannot fill {m} parts"
        )));
    }
    let exact: Vec<f64> = spec.fractions.iter().map(|f| f * n as f64).collect();
    let mut sizes: Vec<usize> = exact.iter().map(|x| (x + 1e-9).floor() as usize).collect();
    let assigned: usize = sizes.iter().sum();
    let mut order: Vec<usize> = (0..m).collect();
    let remainder = |i: usize| (exact[i] - sizes[i] as f64).max(0.0);
    let rems: Vec<f64> = (0..m).map(remainder).collect();
    // stable sort keeps lowest index first among equal remainders
    order.sort_by(|&a, &b| rems[b].total_cmp(&rems[a]));
    for &i in order.iter().take(n.saturating_sub(assigned)) {
        sizes[i] += 1;
    }
    while let Some(empty) = sizes.iter().position(|&s| s == 0) {
        let donor = (0..m)
            .max_by(|&a, &b| sizes[a].cmp(&sizes[b]).then(b.cmp(&a)))
            .expect("m >= 2");
        sizes[donor] -= 1;
        sizes[empty] += 1;
    }
    debug_assert_eq!(sizes.iter().sum::<usize>(), n);
    Ok(PartSizes(sizes))
}

/// Adjacency matrix of `G_n(p)`.
pub fn sample_er(n: usize, p: f64, seed: Seed) -> Result<SymMatrix> {
    if n == 0 {
        return Err(Error::Parameter("graph needs at least one vertex".into()));
    }
    check_probability(p)?;
    Ok(sample_with_labels(
        &PartSizes::singletons(n).labels(),
        p,
        seed,
    ))
}

/// Adjacency matrix of a random multipartite graph together with the realized
/// part sizes. Vertices of part `k` occupy a contiguous index range.
pub fn sample_multipartite(
    n: usize,
    spec: &PartitionSpec,
    p: f64,
    seed: Seed,
) -> Result<(SymMatrix, PartSizes)> {
    check_probability(p)?;
    let parts = partition_sizes(n, spec)?;
    let a = sample_with_labels(&parts.labels(), p, seed);
    Ok((a, parts))
}

fn sample_with_labels(labels: &[usize], p: f64, seed: Seed) -> SymMatrix {
    let n = labels.len();
    let mut rng = seed.rng();
    let mut a = SymMatrix::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if labels[i] != labels[j] && rng.random::<f64>() < p {
                a.set_sym(i, j, 1.0);
            }
        }
    }
    a
}

/// Block-diagonal all-ones matrix `I_{n,m}` matching `parts`.
pub fn quasi_unit(parts: &PartSizes) -> SymMatrix {
    let labels = parts.labels();
    SymMatrix::from_upper_fn(
        labels.len(),
        |i, j| {
            if labels[i] == labels[j] {
                1.0
            } else {
                0.0
            }
        },
    )
}

/// Subtracts the entrywise mean `p (J_n - I_{n,m})` from an adjacency matrix.
///
/// Fails if `a` has a nonzero entry inside a diagonal block of `parts`.
pub fn center(a: &SymMatrix, p: f64, parts: &PartSizes) -> Result<SymMatrix> {
    check_probability(p)?;
    let n = a.order();
    if parts.total() != n {
        return Err(Error::Consistency(format!(
            "parts cover {} vertices, matrix has order {n}",
            parts.total()
        )));
    }
    let labels = parts.labels();
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] && a[(i, j)] != 0.0 {
                return Err(Error::Consistency(format!(
                    "entry ({i}, {j}) = {} lies inside part {}",
                    a[(i, j)],
                    labels[i]
                )));
            }
        }
    }
    Ok(SymMatrix::from_upper_fn(n, |i, j| {
        if labels[i] == labels[j] {
            0.0
        } else {
            a[(i, j)] - p
        }
    }))
}
