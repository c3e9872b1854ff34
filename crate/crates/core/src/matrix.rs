//! Dense real square matrices stored row-major.
//!
//! Constructors that build structured matrices (all-ones, identity, sums,
//! adjacency samples) produce exactly symmetric storage. Matrices read from
//! arbitrary data are only checked for shape; symmetry is enforced by the
//! eigensolver, which rejects inputs outside its tolerance.

use std::fmt::Write as _;
use std::ops::{Add, Index, Neg};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// The all-ones matrix `J_n`.
    pub fn ones(n: usize) -> Self {
        Self {
            n,
            data: vec![1.0; n * n],
        }
    }

    /// `J_n - I_n`, the adjacency matrix of the complete graph.
    pub fn complete_graph(n: usize) -> Self {
        let mut m = Self::ones(n);
        for i in 0..n {
            m.data[i * n + i] = 0.0;
        }
        m
    }

    /// Builds a matrix by evaluating `f(i, j)` on the upper triangle
    /// (`i <= j`) and mirroring, so the result is exactly symmetric.
    pub fn from_upper_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                m.data[i * n + j] = v;
                m.data[j * n + i] = v;
            }
        }
        m
    }

    /// Wraps row-major data. Only the shape is validated.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Consistency(format!(
                "expected {} entries for order {n}, got {}",
                n * n,
                data.len()
            )));
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::Consistency(format!(
                "row {i} has {} entries, expected {n}",
                r.len()
            )));
        }
        Ok(Self {
            n,
            data: rows.concat(),
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub(crate) fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    /// Largest `|a_ij - a_ji|`.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max((self.data[i * n + j] - self.data[j * n + i]).abs());
            }
        }
        worst
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    /// `self - c * other`, elementwise.
    pub fn sub_scaled(&self, c: f64, other: &SymMatrix) -> Result<Self> {
        self.check_same_order(other)?;
        Ok(Self {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - c * b)
                .collect(),
        })
    }

    pub fn try_add(&self, other: &SymMatrix) -> Result<Self> {
        self.check_same_order(other)?;
        Ok(Self {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    fn check_same_order(&self, other: &SymMatrix) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::Consistency(format!(
                "matrix orders differ: {} vs {}",
                self.n, other.n
            )))
        }
    }

    /// Number of nonzero entries strictly above the diagonal.
    pub fn edge_count(&self) -> usize {
        let n = self.n;
        (0..n)
            .map(|i| {
                self.data[i * n + i + 1..(i + 1) * n]
                    .iter()
                    .filter(|v| **v != 0.0)
                    .count()
            })
            .sum()
    }

    /// Text form: first line `n`, then `n` whitespace-separated rows.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.n * self.n * 4 + 16);
        let _ = writeln!(out, "{}", self.n);
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v}")).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::Consistency("empty matrix text".into()))?;
        let n: usize = header
            .trim()
            .parse()
            .map_err(|e| Error::Consistency(format!("line 1: bad order {header:?}: {e}")))?;
        let mut data = Vec::with_capacity(n * n);
        for (lineno, line) in lines {
            for tok in line.split_whitespace() {
                let v: f64 = tok.parse().map_err(|e| {
                    Error::Consistency(format!("line {}: bad entry {tok:?}: {e}", lineno + 1))
                })?;
                data.push(v);
            }
        }
        Self::from_row_major(n, data)
    }

    /// Edge list of the nonzero upper-triangle entries, `i j` per line, 0-based.
    pub fn to_edge_list(&self) -> String {
        let n = self.n;
        let mut out = String::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.data[i * n + j] != 0.0 {
                    let _ = writeln!(out, "{i} {j}");
                }
            }
        }
        out
    }
}

impl Index<(usize, usize)> for SymMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl Neg for &SymMatrix {
    type Output = SymMatrix;

    fn neg(self) -> SymMatrix {
        self.scaled(-1.0)
    }
}

impl Add for &SymMatrix {
    type Output = SymMatrix;

    /// Panics on mismatched orders; use [`SymMatrix::try_add`] to get an error instead.
    fn add(self, rhs: &SymMatrix) -> SymMatrix {
        self.try_add(rhs).expect("matrix orders differ")
    }
}
