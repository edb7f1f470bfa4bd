//! Recursive construction of circuits for disjoint-subset sums.
//!
//! A sum family `<p, q, S0, S>` is the collection of sums
//! `y_Q = sum of x_(S0 ∪ P)` over `p`-subsets `P ⊆ S \ Q`, one per `q`-subset
//! `Q ⊆ S`. With `S0 = ∅` and `S = [1..n]` this is the product of `B(p,q,n)`
//! with the vector of inputs.
//!
//! The family on `[1..n]` is built from the family on `[1..n-1]` in three
//! parts, split by how `Q` meets `{1, n}`:
//!
//! 1. `Q ∩ {1,n} = ∅`: every input `x_({1} ∪ S)` of the smaller circuit is
//!    replaced by a short sum that also brings in the inputs containing `n`
//!    (step 1.1). Outputs with `min Q - 1 = k < p` then miss exactly the
//!    terms `x_P` with `[1..k] ∪ {n} ⊆ P`; those are computed as the families
//!    `<p-k-1, q-1, [1..k] ∪ {n}, [k+2..n-1]>` (step 1.3) and added in
//!    (step 1.4).
//! 2. `|Q ∩ {1,n}| = 1`: the old outputs `y_({1} ∪ R)` are completed with the
//!    families `<p-1, q-1, {1}, [2..n-1]>` and `<p-1, q-1, {n}, [2..n-1]>`
//!    (steps 2.2, 2.3).
//! 3. `{1,n} ⊆ Q`: with `k = min([1..n] \ Q)`, the old output
//!    `y_([1..k] ∪ R)` is completed with `<p-1, q-k, {k}, [k+1..n-1]>`
//!    (steps 3.2, 3.3).
//!
//! Every sub-family is built by the same routine on an order-isomorphic copy
//! of `[1..m]`, sharing the host circuit's input nodes. Nothing is shared
//! between sibling sub-families, so the gate count follows
//! [`recurrence_cost`] exactly.

use std::collections::{HashMap, HashSet};
use std::fmt::{self, Write as _};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::circuit::{Circuit, CircuitBuilder, NodeRef, Output};
use crate::combinatorics::{binom_i, binomial, enumerate_k_subsets, Subset};
use crate::error::{Error, Result};
use crate::matrices::LabeledBooleanMatrix;

/// The family `<p, q, prefix, ground>`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct SumFamilySpec {
    pub p: usize,
    pub q: usize,
    pub prefix: Subset,
    pub ground: Subset,
}

impl SumFamilySpec {
    pub fn new(p: usize, q: usize, prefix: Subset, ground: Subset) -> Result<Self> {
        if !prefix.is_disjoint(ground) {
            return Err(Error::InvalidParameters(format!(
                "prefix {prefix} meets ground {ground}"
            )));
        }
        Ok(SumFamilySpec { p, q, prefix, ground })
    }

    /// `<p, q, ∅, [1..n]>`.
    pub fn full(p: usize, q: usize, n: usize) -> Result<Self> {
        if n > crate::combinatorics::MAX_ELEMENT as usize {
            return Err(Error::GroundSize(n as u32));
        }
        Ok(SumFamilySpec {
            p,
            q,
            prefix: Subset::EMPTY,
            ground: Subset::range(1, n as u32),
        })
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }
}

impl fmt::Display for SumFamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{},{},{}>", self.p, self.q, self.prefix, self.ground)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    /// A closed-form case: `p = 0`, `q = 0`, `n = p+q` or `p = q = 1`.
    Base,
    /// 1.1: input substitutions bringing in the variables that contain `n`.
    Substitution,
    /// 1.3: families `<p-k-1, q-1, [1..k] ∪ {n}, [k+2..n-1]>`.
    PrefixFamilies,
    /// 1.4: add those families to the incomplete outputs.
    PrefixCorrections,
    /// 2.2: families `<p-1, q-1, {1}, [2..n-1]>` and `<p-1, q-1, {n}, [2..n-1]>`.
    BoundaryFamilies,
    /// 2.3: outputs with exactly one of `1`, `n`.
    BoundaryCorrections,
    /// 3.2: families `<p-1, q-k, {k}, [k+1..n-1]>`.
    RunFamilies,
    /// 3.3: outputs containing both `1` and `n`.
    RunCorrections,
}

impl Step {
    pub fn label(self) -> &'static str {
        match self {
            Step::Base => "base",
            Step::Substitution => "1.1",
            Step::PrefixFamilies => "1.3",
            Step::PrefixCorrections => "1.4",
            Step::BoundaryFamilies => "2.2",
            Step::BoundaryCorrections => "2.3",
            Step::RunFamilies => "3.2",
            Step::RunCorrections => "3.3",
        }
    }

    /// Steps whose gates are built by nested sub-families.
    pub fn is_embedding(self) -> bool {
        matches!(self, Step::PrefixFamilies | Step::BoundaryFamilies | Step::RunFamilies)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    /// Sub-family nesting depth. The main `n-1` recursion stays at the same depth.
    pub depth: usize,
    pub spec: SumFamilySpec,
    pub step: Step,
    /// For embedding steps this is the total of the nested entries at `depth + 1`.
    pub gates_added: usize,
}

/// Audit trail of a synthesis run. The depth-0 entries sum to the gate count.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SynthesisTrace {
    pub entries: Vec<TraceEntry>,
}

impl SynthesisTrace {
    pub fn top_level_total(&self) -> usize {
        self.entries.iter().filter(|e| e.depth == 0).map(|e| e.gates_added).sum()
    }

    /// Entries of `step` at recursion levels with exactly these parameters.
    pub fn level(&self, p: usize, q: usize, n: usize) -> impl Iterator<Item = &TraceEntry> {
        self.entries
            .iter()
            .filter(move |e| e.spec.p == p && e.spec.q == q && e.spec.n() == n)
    }

    pub fn report(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            let _ = writeln!(
                s,
                "{:indent$}{:<4} {} +{}",
                "",
                e.step.label(),
                e.spec,
                e.gates_added,
                indent = 2 * e.depth
            );
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct Synthesis {
    pub circuit: Circuit,
    pub trace: SynthesisTrace,
}

/// Circuit for `B(p,q,n)` with the `p`-subsets of `[1..n]` as inputs and the
/// `q`-subsets as outputs, both in lexicographic order.
pub fn synth(p: usize, q: usize, n: usize) -> Result<Synthesis> {
    synth_family(SumFamilySpec::full(p, q, n)?)
}

/// Circuit for an arbitrary family. Inputs are `x_(prefix ∪ P)` for the
/// `p`-subsets `P` of the ground set, outputs `y_Q` for its `q`-subsets.
pub fn synth_family(spec: SumFamilySpec) -> Result<Synthesis> {
    if !spec.prefix.is_disjoint(spec.ground) {
        return Err(Error::InvalidParameters(format!(
            "prefix {} meets ground {}",
            spec.prefix, spec.ground
        )));
    }
    let m = spec.n();
    if m < spec.p + spec.q {
        return Err(Error::NotRepresentable);
    }
    let ground = spec.ground.to_vec();
    let local: Vec<u32> = (1..=m as u32).collect();

    let local_inputs = enumerate_k_subsets(&local, spec.p);
    let index: HashMap<Subset, usize> = local_inputs.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let labels = local_inputs.iter().map(|&s| spec.prefix.union(abs(&ground, s))).collect();

    let mut synth = Synthesizer {
        builder: CircuitBuilder::new(labels),
        trace: Vec::new(),
    };
    let outs = synth.family(spec.p, spec.q, spec.prefix, &ground, 0, &|s| NodeRef::Input(index[&s]));
    let outputs = enumerate_k_subsets(&local, spec.q)
        .into_iter()
        .map(|s| Output {
            label: abs(&ground, s),
            node: outs[&s],
        })
        .collect();
    let circuit = synth.builder.finish(outputs)?;
    let trace = SynthesisTrace { entries: synth.trace };
    debug_assert_eq!(trace.top_level_total(), circuit.gate_count());
    Ok(Synthesis { circuit, trace })
}

/// Variables summed into input `x_({1} ∪ s)` when lifting the family on
/// `[1..n-1]` to `[1..n]`. `s` is a `(p-1)`-subset of `[2..n-1]`.
///
/// With `[2..k] ⊆ s` and `k+1 ∉ s`, the result is `x_(T ∪ s')` for every
/// `k`-subset `T` of `[1..k] ∪ {n}`, where `s' = s \ [2..k]`. The first entry
/// is `{1} ∪ s` itself and exactly `k` entries contain `n`.
pub fn step11_substitution(s: Subset, p: usize, n: usize) -> Result<Vec<Subset>> {
    if p == 0 || s.len() != p - 1 || n < 2 || !s.is_subset(Subset::range(2, n as u32 - 1)) {
        return Err(Error::InvalidParameters(format!(
            "substitution needs a (p-1)-subset of [2..n-1], got {s} with p={p} n={n}"
        )));
    }
    Ok(substitution_terms(s, n as u32))
}

fn substitution_terms(s: Subset, n: u32) -> Vec<Subset> {
    let mut k = 1;
    while s.contains(k + 1) {
        k += 1;
    }
    let rest = s.difference(Subset::range(2, k));
    let mut pool: Vec<u32> = (1..=k).collect();
    pool.push(n);
    enumerate_k_subsets(&pool, k as usize)
        .into_iter()
        .map(|t| t.union(rest))
        .collect()
}

struct Synthesizer {
    builder: CircuitBuilder,
    trace: Vec<TraceEntry>,
}

type Resolver<'a> = &'a dyn Fn(Subset) -> NodeRef;

impl Synthesizer {
    fn record(&mut self, depth: usize, spec: SumFamilySpec, step: Step, since: usize) {
        let at = self.trace.len();
        self.record_at(at, depth, spec, step, since);
    }

    /// Embedding steps are logged ahead of the families they spawned.
    fn record_at(&mut self, at: usize, depth: usize, spec: SumFamilySpec, step: Step, since: usize) {
        self.trace.insert(
            at,
            TraceEntry {
                depth,
                spec,
                step,
                gates_added: self.builder.gate_count() - since,
            },
        );
    }

    /// Builds `<p, q, prefix, ground>` in local coordinates `[1..n]`
    /// (`n = ground.len()`; local `i` stands for `ground[i-1]`). `inputs`
    /// resolves each local `p`-subset to a host node. Returns the output node
    /// for every local `q`-subset.
    fn family(
        &mut self,
        p: usize,
        q: usize,
        prefix: Subset,
        ground: &[u32],
        depth: usize,
        inputs: Resolver<'_>,
    ) -> HashMap<Subset, NodeRef> {
        let n = ground.len();
        debug_assert!(n >= p + q);
        let spec = SumFamilySpec {
            p,
            q,
            prefix,
            ground: Subset::from_elements(ground.iter().copied()).expect("ground in range"),
        };
        let local: Vec<u32> = (1..=n as u32).collect();
        let all = Subset::range(1, n as u32);
        let start = self.builder.gate_count();

        if p == 0 {
            let x = inputs(Subset::EMPTY);
            self.record(depth, spec, Step::Base, start);
            return enumerate_k_subsets(&local, q).into_iter().map(|s| (s, x)).collect();
        }
        if q == 0 {
            let terms: Vec<NodeRef> = enumerate_k_subsets(&local, p).into_iter().map(inputs).collect();
            let root = self.builder.sum_balanced(&terms);
            self.record(depth, spec, Step::Base, start);
            return HashMap::from([(Subset::EMPTY, root)]);
        }
        if n == p + q {
            self.record(depth, spec, Step::Base, start);
            return enumerate_k_subsets(&local, q)
                .into_iter()
                .map(|s| (s, inputs(all.difference(s))))
                .collect();
        }
        if p == 1 && q == 1 {
            let out = self.complement_sums(n as u32, inputs);
            self.record(depth, spec, Step::Base, start);
            return out;
        }

        let last = n as u32;
        let one = Subset::singleton(1);
        let nn = Subset::singleton(last);

        // 1.1
        let t = self.builder.gate_count();
        let subst = self.substitutions(p, last, inputs);
        self.record(depth, spec, Step::Substitution, t);

        let old = {
            let lifted = |s: Subset| {
                if s.contains(1) {
                    subst[&s]
                } else {
                    inputs(s)
                }
            };
            self.family(p, q, prefix, &ground[..n - 1], depth, &lifted)
        };

        // 1.3: corrections keyed by the local output label they complete
        let t = self.builder.gate_count();
        let mark = self.trace.len();
        let mut prefix_corr: HashMap<Subset, NodeRef> = HashMap::new();
        for k in 1..p {
            let k32 = k as u32;
            let head = Subset::range(1, k32).union(nn);
            let abs_head = abs(ground, head);
            let sub_ground = &ground[k + 1..n - 1];
            let resolve = |s: Subset| inputs(head.union(s.shifted(k32 + 1)));
            let outs = self.family(p - k - 1, q - 1, prefix.union(abs_head), sub_ground, depth + 1, &resolve);
            for (r, node) in outs {
                let target = r.shifted(k32 + 1).union(Subset::singleton(k32 + 1));
                let prev = prefix_corr.insert(target, node);
                debug_assert!(prev.is_none());
            }
        }
        self.record_at(mark, depth, spec, Step::PrefixFamilies, t);

        // 1.4
        let t = self.builder.gate_count();
        let mut result: HashMap<Subset, NodeRef> = HashMap::with_capacity(binom_i(n as i64, q as i64));
        let inner: Vec<u32> = (2..last).collect();
        let mut corrected = 0;
        for s in enumerate_k_subsets(&inner, q) {
            let mut node = old[&s];
            if let Some(&c) = prefix_corr.get(&s) {
                node = self.builder.add(node, c);
                corrected += 1;
            }
            result.insert(s, node);
        }
        assert_eq!(corrected, prefix_corr.len(), "every 1.3 sum completes an output");
        assert_eq!(
            corrected,
            binom_i(n as i64 - 2, q as i64) - binom_i(n as i64 - p as i64 - 1, q as i64),
            "step 1.4 count law"
        );
        self.record(depth, spec, Step::PrefixCorrections, t);

        // 2.2
        let t = self.builder.gate_count();
        let mark = self.trace.len();
        let inner_ground = &ground[1..n - 1];
        let with_one = {
            let resolve = |s: Subset| inputs(one.union(s.shifted(1)));
            self.family(p - 1, q - 1, prefix.union(abs(ground, one)), inner_ground, depth + 1, &resolve)
        };
        let with_last = {
            let resolve = |s: Subset| inputs(nn.union(s.shifted(1)));
            self.family(p - 1, q - 1, prefix.union(abs(ground, nn)), inner_ground, depth + 1, &resolve)
        };
        self.record_at(mark, depth, spec, Step::BoundaryFamilies, t);

        // 2.3
        let t = self.builder.gate_count();
        for r in enumerate_k_subsets(&inner, q - 1) {
            let r_local = Subset::from_mask(r.mask() >> 1);
            let base = old[&one.union(r)];
            let a = self.builder.add(base, with_one[&r_local]);
            result.insert(nn.union(r), a);
            let b = self.builder.add(base, with_last[&r_local]);
            result.insert(one.union(r), b);
        }
        self.record(depth, spec, Step::BoundaryCorrections, t);

        // 3.2
        let t = self.builder.gate_count();
        let mark = self.trace.len();
        let mut runs = Vec::with_capacity(q.saturating_sub(1));
        for k in 2..=q {
            let k32 = k as u32;
            let kk = Subset::singleton(k32);
            let resolve = |s: Subset| inputs(kk.union(s.shifted(k32)));
            let outs = self.family(p - 1, q - k, prefix.union(abs(ground, kk)), &ground[k..n - 1], depth + 1, &resolve);
            runs.push((k32, outs));
        }
        self.record_at(mark, depth, spec, Step::RunFamilies, t);

        // 3.3
        let t = self.builder.gate_count();
        let mut covered = HashSet::new();
        for (k, outs) in &runs {
            let k = *k;
            let mut sub: Vec<(Subset, NodeRef)> = outs.iter().map(|(&r, &node)| (r, node)).collect();
            sub.sort_unstable_by_key(|e| e.0);
            for (r, node) in sub {
                let r = r.shifted(k);
                let base = old[&Subset::range(1, k).union(r)];
                let target = Subset::range(1, k - 1).union(nn).union(r);
                debug_assert_eq!(all.difference(target).min(), Some(k));
                let g = self.builder.add(base, node);
                assert!(covered.insert(target), "3.3 target {target} hit twice");
                result.insert(target, g);
            }
        }
        assert_eq!(covered.len(), binom_i(n as i64 - 2, q as i64 - 2), "part 3 coverage law");
        self.record(depth, spec, Step::RunCorrections, t);

        debug_assert_eq!(result.len(), binom_i(n as i64, q as i64));
        result
    }

    /// The `p = q = 1` case: `y_i = x_1 + ... + x_(i-1) + x_(i+1) + ... + x_n`
    /// from shared prefix and suffix sums, `3n - 6` gates.
    fn complement_sums(&mut self, n: u32, inputs: Resolver<'_>) -> HashMap<Subset, NodeRef> {
        debug_assert!(n >= 3);
        let x = |i: u32| inputs(Subset::singleton(i));
        // prefix[i] = x_1 + ... + x_i for i in [1..n-1]
        let mut prefix = vec![NodeRef::Input(usize::MAX); n as usize + 1];
        prefix[1] = x(1);
        for i in 2..n {
            prefix[i as usize] = self.builder.add(prefix[i as usize - 1], x(i));
        }
        // suffix[i] = x_i + ... + x_n for i in [2..n]
        let mut suffix = vec![NodeRef::Input(usize::MAX); n as usize + 1];
        suffix[n as usize] = x(n);
        for i in (2..n).rev() {
            suffix[i as usize] = self.builder.add(x(i), suffix[i as usize + 1]);
        }
        let mut out = HashMap::with_capacity(n as usize);
        out.insert(Subset::singleton(1), suffix[2]);
        for i in 2..n {
            let g = self.builder.add(prefix[i as usize - 1], suffix[i as usize + 1]);
            out.insert(Subset::singleton(i), g);
        }
        out.insert(Subset::singleton(n), prefix[n as usize - 1]);
        out
    }

    /// Step 1.1 in local coordinates on `[1..n]`: one sum per input
    /// `x_({1} ∪ S)`, `S` a `(p-1)`-subset of `[2..n-1]`.
    fn substitutions(&mut self, p: usize, n: u32, inputs: Resolver<'_>) -> HashMap<Subset, NodeRef> {
        let start = self.builder.gate_count();
        let inner: Vec<u32> = (2..n).collect();
        let one = Subset::singleton(1);
        let nn = Subset::singleton(n);
        let mut out = HashMap::new();
        let mut seen_with_n: HashSet<Subset> = HashSet::new();
        for s in enumerate_k_subsets(&inner, p - 1) {
            let terms = substitution_terms(s, n);
            debug_assert_eq!(terms[0], one.union(s));
            for t in &terms {
                if t.contains(n) {
                    assert!(seen_with_n.insert(t.difference(nn)), "x{t} substituted twice");
                }
            }
            let nodes: Vec<NodeRef> = terms.iter().map(|&t| inputs(t)).collect();
            let node = self.builder.sum_chain(&nodes);
            out.insert(one.union(s), node);
        }
        // each x_({n} ∪ S'') with S'' ⊆ [1..n-1] occurs exactly once
        let expected = binom_i(n as i64 - 1, p as i64 - 1);
        assert_eq!(seen_with_n.len(), expected, "step 1.1 occurrence law");
        assert_eq!(self.builder.gate_count() - start, expected);
        out
    }
}

fn abs(ground: &[u32], local: Subset) -> Subset {
    Subset::from_mask(local.elements().fold(0, |acc, e| acc | 1 << (ground[e as usize - 1] - 1)))
}

/// Each output summed independently as a left-to-right chain over its row.
pub fn naive_synth(m: &LabeledBooleanMatrix) -> Result<Circuit> {
    let mut b = CircuitBuilder::new(m.col_labels().to_vec());
    let mut outputs = Vec::with_capacity(m.rows());
    for (i, &label) in m.row_labels().iter().enumerate() {
        let terms: Vec<NodeRef> = m.row_support(i).map(NodeRef::Input).collect();
        if terms.is_empty() {
            return Err(Error::ZeroRow(label.to_string()));
        }
        let node = b.sum_chain(&terms);
        outputs.push(Output { label, node });
    }
    b.finish(outputs)
}

/// Exact gate count of [`synth`].
pub fn recurrence_cost(p: usize, q: usize, n: usize) -> Result<BigUint> {
    if n < p + q {
        return Err(Error::NotRepresentable);
    }
    Ok(CostTable::default().cost(p, q, n))
}

#[derive(Default)]
struct CostTable {
    memo: HashMap<(usize, usize, usize), BigUint>,
}

impl CostTable {
    fn cost(&mut self, p: usize, q: usize, n: usize) -> BigUint {
        debug_assert!(n >= p + q);
        if p == 0 || n == p + q {
            return BigUint::zero();
        }
        if q == 0 {
            return binomial(n as u64, p as i64) - BigUint::one();
        }
        if p == 1 && q == 1 {
            return BigUint::from(3 * n - 6);
        }
        if let Some(c) = self.memo.get(&(p, q, n)) {
            return c.clone();
        }
        let c = |a: usize, b: i64| binomial(a as u64, b);
        let (pi, qi) = (p as i64, q as i64);
        let mut total = self.cost(p, q, n - 1);
        total += c(n - 1, pi - 1);
        total += c(n - 2, qi) - c(n - p - 1, qi);
        for k in 2..=p {
            total += self.cost(p - k, q - 1, n - k - 1);
        }
        total += self.cost(p - 1, q - 1, n - 2) * 2u32;
        total += c(n - 2, qi - 1) * 2u32;
        for k in 2..=q {
            total += self.cost(p - 1, q - k, n - k - 1);
        }
        total += c(n - 2, qi - 2);
        self.memo.insert((p, q, n), total.clone());
        total
    }
}
