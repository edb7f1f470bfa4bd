//! Checking circuits against their target matrices.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, CoefficientVector};
use crate::combinatorics::Subset;
use crate::error::{Error, Result};
use crate::matrices::LabeledBooleanMatrix;

/// Largest input count [`exhaustive_min_gates`] accepts.
pub const SEARCH_MAX_INPUTS: usize = 4;
/// Largest gate budget [`exhaustive_min_gates`] accepts.
pub const SEARCH_MAX_BUDGET: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub label: Subset,
    pub expected: CoefficientVector,
    pub actual: CoefficientVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub passed: bool,
    pub mismatches: Vec<Mismatch>,
    pub checked_outputs: usize,
}

fn check_labels(c: &Circuit, m: &LabeledBooleanMatrix) -> Result<()> {
    if c.inputs() != m.col_labels() {
        return Err(Error::LabelMismatch(format!(
            "circuit has {} inputs, matrix has {} columns, or their labels/order differ",
            c.inputs().len(),
            m.cols()
        )));
    }
    if c.outputs().len() != m.rows() || c.outputs().iter().zip(m.row_labels()).any(|(o, r)| o.label != *r) {
        return Err(Error::LabelMismatch(format!(
            "circuit has {} outputs, matrix has {} rows, or their labels/order differ",
            c.outputs().len(),
            m.rows()
        )));
    }
    Ok(())
}

/// Passes iff every output's coefficient vector equals its 0/1 matrix row.
/// A multiplicity of 2 fails even though idempotent semigroups would hide it.
pub fn verify_circuit(c: &Circuit, m: &LabeledBooleanMatrix) -> Result<VerificationReport> {
    check_labels(c, m)?;
    let coeffs = c.coefficient_vectors();
    let mut mismatches = Vec::new();
    for (i, actual) in coeffs.outputs.into_iter().enumerate() {
        let expected = CoefficientVector::from_support(m.row_support(i));
        if actual != expected {
            mismatches.push(Mismatch {
                label: m.row_labels()[i],
                expected,
                actual,
            });
        }
    }
    Ok(VerificationReport {
        passed: mismatches.is_empty(),
        mismatches,
        checked_outputs: m.rows(),
    })
}

/// Multiset union takes the larger multiplicity, so it is idempotent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multiset(BTreeMap<u32, u32>);

impl Multiset {
    pub fn union(&self, other: &Multiset) -> Multiset {
        let mut out = self.0.clone();
        for (&k, &v) in &other.0 {
            let e = out.entry(k).or_insert(0);
            *e = (*e).max(v);
        }
        Multiset(out)
    }
}

fn fold_rows<T: Clone>(m: &LabeledBooleanMatrix, values: &[T], combine: impl Fn(&T, &T) -> T) -> Vec<Option<T>> {
    (0..m.rows())
        .map(|i| {
            let mut support = m.row_support(i);
            let first = values[support.next()?].clone();
            Some(support.fold(first, |acc, j| combine(&acc, &values[j])))
        })
        .collect()
}

fn agrees<T: Clone + PartialEq>(c: &Circuit, m: &LabeledBooleanMatrix, values: &[T], combine: impl Fn(&T, &T) -> T) -> bool {
    let got = c.evaluate(values, &combine);
    let want = fold_rows(m, values, &combine);
    got.into_iter().zip(want).all(|(g, w)| w.as_ref() == Some(&g))
}

/// Compares the circuit with direct row folding of `m` on random valuations
/// under integer addition, integer max, and multiset union. Max and union
/// are idempotent, so this is weaker than [`verify_circuit`].
pub fn random_semigroup_check(c: &Circuit, m: &LabeledBooleanMatrix, trials: usize, seed: u64) -> Result<bool> {
    check_labels(c, m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = c.inputs().len();
    for _ in 0..trials {
        let ints: Vec<u128> = (0..k).map(|_| rng.random_range(1..1u128 << 31)).collect();
        if !agrees(c, m, &ints, |a, b| a + b) {
            return Ok(false);
        }
        if !agrees(c, m, &ints, |a, b| *a.max(b)) {
            return Ok(false);
        }
        let sets: Vec<Multiset> = (0..k)
            .map(|_| {
                let size = rng.random_range(1..=3);
                Multiset((0..size).map(|_| (rng.random_range(0..32), rng.random_range(1..=3))).collect())
            })
            .collect();
        if !agrees(c, m, &sets, Multiset::union) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest number of gates `g ≤ budget` for which some `g`-gate circuit
/// over the columns of `m` has every row of `m` among its nodes, or `None`.
///
/// Nodes are identified with their 0/1 coefficient masks: in a minimal
/// circuit every node feeds an output, so it is a disjoint union of two
/// earlier nodes and a sub-mask of some row, and no mask appears twice.
/// The search is breadth-first over the sets of masks built so far.
pub fn exhaustive_min_gates(m: &LabeledBooleanMatrix, budget: usize) -> Result<Option<usize>> {
    let k = m.cols();
    if k > SEARCH_MAX_INPUTS {
        return Err(Error::SearchRefused(format!(
            "{k} inputs exceeds the cap of {SEARCH_MAX_INPUTS}"
        )));
    }
    if budget > SEARCH_MAX_BUDGET {
        return Err(Error::SearchRefused(format!(
            "budget {budget} exceeds the cap of {SEARCH_MAX_BUDGET}"
        )));
    }
    let rows: Vec<u16> = (0..m.rows())
        .map(|i| m.row_support(i).fold(0u16, |acc, j| acc | 1 << j))
        .collect();
    if rows.contains(&0) {
        return Ok(None);
    }
    // state: bit `mask` set when a node with that coefficient mask exists
    let target: u32 = rows.iter().fold(0, |acc, &r| acc | 1 << r);
    let useful = |mask: u16| rows.iter().any(|&r| mask & !r == 0);
    let start: u32 = (0..k).fold(0, |acc, j| acc | 1 << (1u16 << j));

    let mut seen = vec![false; 1 << (1 << k)];
    seen[start as usize] = true;
    let mut frontier = vec![start];
    for g in 0..=budget {
        if frontier.iter().any(|&s| s & target == target) {
            return Ok(Some(g));
        }
        if g == budget {
            break;
        }
        let mut next = Vec::new();
        for &state in &frontier {
            let masks: Vec<u16> = (1..1u16 << k).filter(|&x| state & (1 << x) != 0).collect();
            for (i, &a) in masks.iter().enumerate() {
                for &b in &masks[i + 1..] {
                    let sum = a | b;
                    if a & b != 0 || state & (1 << sum) != 0 || !useful(sum) {
                        continue;
                    }
                    let s = state | 1 << sum;
                    if !seen[s as usize] {
                        seen[s as usize] = true;
                        next.push(s);
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(None)
}
