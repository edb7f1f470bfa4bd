//! The disjointness matrices `B(p,q,n)` and their rank over a prime field.

use crate::combinatorics::{enumerate_k_subsets, Subset, MAX_ELEMENT};
use crate::error::{Error, Result};

/// Default modulus for rank certificates.
pub const DEFAULT_PRIME: u64 = 1_000_003;

/// A dense 0/1 matrix whose rows and columns are labeled by subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledBooleanMatrix {
    row_labels: Vec<Subset>,
    col_labels: Vec<Subset>,
    entries: Vec<bool>,
}

impl LabeledBooleanMatrix {
    pub fn new(row_labels: Vec<Subset>, col_labels: Vec<Subset>, entries: Vec<bool>) -> Result<Self> {
        if entries.len() != row_labels.len() * col_labels.len() {
            return Err(Error::Malformed(format!(
                "{} entries for a {}x{} matrix",
                entries.len(),
                row_labels.len(),
                col_labels.len()
            )));
        }
        Ok(LabeledBooleanMatrix {
            row_labels,
            col_labels,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn row_labels(&self) -> &[Subset] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[Subset] {
        &self.col_labels
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.entries[row * self.cols() + col]
    }

    pub fn row(&self, row: usize) -> &[bool] {
        let c = self.cols();
        &self.entries[row * c..(row + 1) * c]
    }

    /// Column indices of the ones in `row`.
    pub fn row_support(&self, row: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(row)
            .iter()
            .enumerate()
            .filter_map(|(j, &b)| b.then_some(j))
    }

    pub fn row_weight(&self, row: usize) -> usize {
        self.row(row).iter().filter(|&&b| b).count()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&b| !b)
    }

    pub fn transpose(&self) -> LabeledBooleanMatrix {
        let (r, c) = (self.rows(), self.cols());
        let mut entries = Vec::with_capacity(r * c);
        for j in 0..c {
            for i in 0..r {
                entries.push(self.get(i, j));
            }
        }
        LabeledBooleanMatrix {
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
            entries,
        }
    }

    /// Rank over GF(`prime`). `prime` must be an odd prime.
    pub fn rank_mod_prime(&self, prime: u64) -> Result<usize> {
        if prime <= 2 || !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        let (r, c) = (self.rows(), self.cols());
        let mut m: Vec<Vec<u64>> = (0..r)
            .map(|i| self.row(i).iter().map(|&b| b as u64).collect())
            .collect();
        let mut rank = 0;
        for col in 0..c {
            let Some(pivot) = (rank..r).find(|&i| m[i][col] != 0) else {
                continue;
            };
            m.swap(rank, pivot);
            let inv = mod_pow(m[rank][col], prime - 2, prime);
            for x in m[rank][col..].iter_mut() {
                *x = mul_mod(*x, inv, prime);
            }
            let pivot_row = m[rank].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i == rank || row[col] == 0 {
                    continue;
                }
                let factor = row[col];
                for (x, &p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x = (*x + prime - mul_mod(factor, p, prime)) % prime;
                }
            }
            rank += 1;
            if rank == r {
                break;
            }
        }
        Ok(rank)
    }
}

/// `B(p,q,n)`: rows are the `q`-subsets of `[1..n]`, columns the `p`-subsets,
/// entry 1 iff row and column labels are disjoint.
pub fn build_matrix(p: usize, q: usize, n: usize) -> Result<LabeledBooleanMatrix> {
    if n < p.max(q) {
        return Err(Error::InvalidParameters(format!(
            "n={n} < max(p,q)={}: matrix has no rows or no columns",
            p.max(q)
        )));
    }
    if n > MAX_ELEMENT as usize {
        return Err(Error::GroundSize(n as u32));
    }
    let ground: Vec<u32> = (1..=n as u32).collect();
    let rows = enumerate_k_subsets(&ground, q);
    let cols = enumerate_k_subsets(&ground, p);
    let mut entries = Vec::with_capacity(rows.len() * cols.len());
    for r in &rows {
        entries.extend(cols.iter().map(|c| r.is_disjoint(*c)));
    }
    Ok(LabeledBooleanMatrix {
        row_labels: rows,
        col_labels: cols,
        entries,
    })
}

pub fn transpose_matrix(m: &LabeledBooleanMatrix) -> LabeledBooleanMatrix {
    m.transpose()
}

pub fn rank_mod_prime(m: &LabeledBooleanMatrix, prime: u64) -> Result<usize> {
    m.rank_mod_prime(prime)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}
