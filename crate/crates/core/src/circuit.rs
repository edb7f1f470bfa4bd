//! Straight-line programs of binary additions.
//!
//! A [`Circuit`] lists its inputs (labeled by subsets), then its gates in
//! topological order, then its labeled outputs. Outputs point at any node,
//! inputs included, and nodes may fan out freely. The gate count is the
//! complexity measure.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::{self, Write as _};

use crate::combinatorics::Subset;
use crate::error::{Error, Result};

/// Header line of the SLP text format.
pub const SLP_HEADER: &str = "bpqn-slp 1";

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeRef {
    Input(usize),
    Gate(usize),
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeRef::Input(i) => write!(f, "input #{i}"),
            NodeRef::Gate(j) => write!(f, "gate t{j}"),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gate {
    pub left: NodeRef,
    pub right: NodeRef,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Output {
    pub label: Subset,
    pub node: NodeRef,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    inputs: Vec<Subset>,
    gates: Vec<Gate>,
    outputs: Vec<Output>,
}

/// Multiplicity of each input in the linear form computed at a node.
/// Absent keys mean zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CoefficientVector(BTreeMap<usize, u64>);

impl CoefficientVector {
    pub fn unit(input: usize) -> Self {
        CoefficientVector(BTreeMap::from([(input, 1)]))
    }

    pub fn from_support<I: IntoIterator<Item = usize>>(support: I) -> Self {
        CoefficientVector(support.into_iter().map(|i| (i, 1)).collect())
    }

    pub fn get(&self, input: usize) -> u64 {
        self.0.get(&input).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.0.iter().map(|(&i, &m)| (i, m))
    }

    pub fn support_len(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero_one(&self) -> bool {
        self.0.values().all(|&m| m == 1)
    }

    pub fn add(&self, other: &CoefficientVector) -> CoefficientVector {
        let mut out = self.0.clone();
        for (&i, &m) in &other.0 {
            *out.entry(i).or_insert(0) += m;
        }
        CoefficientVector(out)
    }
}

impl fmt::Display for CoefficientVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (i, m)) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{i}:{m}")?;
        }
        f.write_str("}")
    }
}

/// Coefficient vectors for every node (inputs first, then gates) and every output.
#[derive(Clone, Debug)]
pub struct Coefficients {
    pub nodes: Vec<CoefficientVector>,
    pub outputs: Vec<CoefficientVector>,
}

impl Circuit {
    /// Checks the structural invariants: operands refer to inputs or earlier
    /// gates, labels are pairwise distinct within inputs and within outputs.
    pub fn new(inputs: Vec<Subset>, gates: Vec<Gate>, outputs: Vec<Output>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(inputs.len());
        for label in &inputs {
            if !seen.insert(*label) {
                return Err(Error::Malformed(format!("duplicate input x{label}")));
            }
        }
        let check = |r: NodeRef, limit: usize, what: &str| -> Result<()> {
            let ok = match r {
                NodeRef::Input(i) => i < inputs.len(),
                NodeRef::Gate(j) => j < limit,
            };
            if ok {
                Ok(())
            } else {
                Err(Error::Malformed(format!("{what} refers to missing {r}")))
            }
        };
        for (j, g) in gates.iter().enumerate() {
            check(g.left, j, &format!("gate t{j}"))?;
            check(g.right, j, &format!("gate t{j}"))?;
        }
        seen.clear();
        for o in &outputs {
            check(o.node, gates.len(), &format!("output y{}", o.label))?;
            if !seen.insert(o.label) {
                return Err(Error::Malformed(format!("duplicate output y{}", o.label)));
            }
        }
        Ok(Circuit {
            inputs,
            gates,
            outputs,
        })
    }

    pub fn inputs(&self) -> &[Subset] {
        &self.inputs
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[Output] {
        &self.outputs
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn output_labels(&self) -> Vec<Subset> {
        self.outputs.iter().map(|o| o.label).collect()
    }

    fn node_index(&self, r: NodeRef) -> usize {
        match r {
            NodeRef::Input(i) => i,
            NodeRef::Gate(j) => self.inputs.len() + j,
        }
    }

    /// Evaluates over any commutative semigroup given by `combine`.
    /// Panics if `values.len()` differs from the number of inputs.
    pub fn evaluate<T, F>(&self, values: &[T], combine: F) -> Vec<T>
    where
        T: Clone,
        F: Fn(&T, &T) -> T,
    {
        assert_eq!(values.len(), self.inputs.len(), "one value per input");
        let mut gate_values: Vec<T> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let v = {
                let get = |r: NodeRef| match r {
                    NodeRef::Input(i) => &values[i],
                    NodeRef::Gate(j) => &gate_values[j],
                };
                combine(get(g.left), get(g.right))
            };
            gate_values.push(v);
        }
        self.outputs
            .iter()
            .map(|o| match o.node {
                NodeRef::Input(i) => values[i].clone(),
                NodeRef::Gate(j) => gate_values[j].clone(),
            })
            .collect()
    }

    pub fn coefficient_vectors(&self) -> Coefficients {
        let mut nodes: Vec<CoefficientVector> = (0..self.inputs.len()).map(CoefficientVector::unit).collect();
        nodes.reserve(self.gates.len());
        for g in &self.gates {
            let v = nodes[self.node_index(g.left)].add(&nodes[self.node_index(g.right)]);
            nodes.push(v);
        }
        let outputs = self.outputs.iter().map(|o| nodes[self.node_index(o.node)].clone()).collect();
        Coefficients { nodes, outputs }
    }

    /// Consumers of each node, as (gates, outputs) in creation order.
    fn fanout(&self) -> Vec<Vec<Consumer>> {
        let mut fanout = vec![Vec::new(); self.inputs.len() + self.gates.len()];
        for (k, o) in self.outputs.iter().enumerate() {
            fanout[self.node_index(o.node)].push(Consumer::Output(k));
        }
        for (j, g) in self.gates.iter().enumerate() {
            fanout[self.node_index(g.left)].push(Consumer::Gate(j));
            fanout[self.node_index(g.right)].push(Consumer::Gate(j));
        }
        fanout
    }

    /// Applies the transposition principle: reverses every edge, so the
    /// result computes the transposed matrix with old outputs as inputs and
    /// old inputs as outputs. Each node's fan-out becomes a fan-in realized
    /// as a left-deep chain, giving `gates + outputs - inputs` gates.
    ///
    /// Every node must have at least one consumer (gate operand or output).
    pub fn transpose(&self) -> Result<Circuit> {
        let fanout = self.fanout();
        let n_in = self.inputs.len();
        for (idx, consumers) in fanout.iter().enumerate() {
            if consumers.is_empty() {
                let node = if idx < n_in {
                    NodeRef::Input(idx)
                } else {
                    NodeRef::Gate(idx - n_in)
                };
                return Err(Error::NotReduced(node));
            }
        }

        let mut builder = CircuitBuilder::new(self.output_labels());
        // transposed node for each original gate, filled from the last gate back
        let mut gate_t: Vec<Option<NodeRef>> = vec![None; self.gates.len()];
        let resolve = |c: &Consumer, gate_t: &[Option<NodeRef>]| match *c {
            Consumer::Output(k) => NodeRef::Input(k),
            Consumer::Gate(j) => gate_t[j].expect("consumer gates come later"),
        };
        for j in (0..self.gates.len()).rev() {
            let terms: Vec<NodeRef> = fanout[n_in + j].iter().map(|c| resolve(c, &gate_t)).collect();
            gate_t[j] = Some(builder.sum_chain(&terms));
        }
        let mut outputs = Vec::with_capacity(n_in);
        for (i, label) in self.inputs.iter().enumerate() {
            let terms: Vec<NodeRef> = fanout[i].iter().map(|c| resolve(c, &gate_t)).collect();
            let node = builder.sum_chain(&terms);
            outputs.push(Output { label: *label, node });
        }
        builder.finish(outputs)
    }

    fn ref_text(&self, r: NodeRef) -> String {
        match r {
            NodeRef::Input(i) => format!("x{}", self.inputs[i]),
            NodeRef::Gate(j) => format!("t{j}"),
        }
    }

    /// SLP text form. Parsing it back with [`Circuit::parse_slp`] yields an
    /// identical circuit.
    pub fn to_slp(&self) -> String {
        let mut s = String::new();
        s.push_str(SLP_HEADER);
        s.push('\n');
        for label in &self.inputs {
            let _ = writeln!(s, "input x{label}");
        }
        for (j, g) in self.gates.iter().enumerate() {
            let _ = writeln!(s, "gate t{j} = {} + {}", self.ref_text(g.left), self.ref_text(g.right));
        }
        for o in &self.outputs {
            let _ = writeln!(s, "output y{} = {}", o.label, self.ref_text(o.node));
        }
        s
    }

    pub fn parse_slp(text: &str) -> Result<Circuit> {
        SlpParser::default().parse(text)
    }

    /// Graphviz rendering: inputs as boxes, gates as circles, outputs as double circles.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph slp {\n  rankdir=LR;\n");
        let id = |r: NodeRef| match r {
            NodeRef::Input(i) => format!("x{i}"),
            NodeRef::Gate(j) => format!("t{j}"),
        };
        for (i, label) in self.inputs.iter().enumerate() {
            let _ = writeln!(s, "  x{i} [label=\"x{label}\", shape=box];");
        }
        for j in 0..self.gates.len() {
            let _ = writeln!(s, "  t{j} [label=\"t{j}\", shape=circle];");
        }
        for (k, o) in self.outputs.iter().enumerate() {
            let _ = writeln!(s, "  y{k} [label=\"y{}\", shape=doublecircle];", o.label);
        }
        for (j, g) in self.gates.iter().enumerate() {
            let _ = writeln!(s, "  {} -> t{j};", id(g.left));
            let _ = writeln!(s, "  {} -> t{j};", id(g.right));
        }
        for (k, o) in self.outputs.iter().enumerate() {
            let _ = writeln!(s, "  {} -> y{k};", id(o.node));
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Copy, Clone, Debug)]
enum Consumer {
    Gate(usize),
    Output(usize),
}

/// Append-only construction of a [`Circuit`].
#[derive(Debug)]
pub struct CircuitBuilder {
    inputs: Vec<Subset>,
    gates: Vec<Gate>,
}

impl CircuitBuilder {
    pub fn new(inputs: Vec<Subset>) -> Self {
        CircuitBuilder {
            inputs,
            gates: Vec::new(),
        }
    }

    pub fn input_count(&self) -> usize {
        self.inputs.len()
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn add(&mut self, left: NodeRef, right: NodeRef) -> NodeRef {
        debug_assert!(self.valid(left) && self.valid(right));
        self.gates.push(Gate { left, right });
        NodeRef::Gate(self.gates.len() - 1)
    }

    /// Left-deep sum of `terms`; a single term is returned as is.
    pub fn sum_chain(&mut self, terms: &[NodeRef]) -> NodeRef {
        let (&first, rest) = terms.split_first().expect("sum of no terms");
        rest.iter().fold(first, |acc, &t| self.add(acc, t))
    }

    /// Balanced pairwise sum of `terms`, same gate count as a chain.
    pub fn sum_balanced(&mut self, terms: &[NodeRef]) -> NodeRef {
        assert!(!terms.is_empty(), "sum of no terms");
        let mut level = terms.to_vec();
        while level.len() > 1 {
            let mut next = Vec::with_capacity(level.len().div_ceil(2));
            for pair in level.chunks(2) {
                next.push(match *pair {
                    [a, b] => self.add(a, b),
                    [a] => a,
                    _ => unreachable!(),
                });
            }
            level = next;
        }
        level[0]
    }

    fn valid(&self, r: NodeRef) -> bool {
        match r {
            NodeRef::Input(i) => i < self.inputs.len(),
            NodeRef::Gate(j) => j < self.gates.len(),
        }
    }

    pub fn finish(self, outputs: Vec<Output>) -> Result<Circuit> {
        Circuit::new(self.inputs, self.gates, outputs)
    }
}

pub fn evaluate<T: Clone, F: Fn(&T, &T) -> T>(c: &Circuit, values: &[T], combine: F) -> Vec<T> {
    c.evaluate(values, combine)
}

pub fn coefficient_vectors(c: &Circuit) -> Coefficients {
    c.coefficient_vectors()
}

pub fn transpose_circuit(c: &Circuit) -> Result<Circuit> {
    c.transpose()
}

pub fn serialize_slp(c: &Circuit) -> String {
    c.to_slp()
}

pub fn parse_slp(text: &str) -> Result<Circuit> {
    Circuit::parse_slp(text)
}

pub fn export_dot(c: &Circuit) -> String {
    c.to_dot()
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Inputs,
    Gates,
    Outputs,
}

#[derive(Default)]
struct SlpParser {
    inputs: Vec<Subset>,
    input_index: HashMap<Subset, usize>,
    gates: Vec<Gate>,
    outputs: Vec<Output>,
    output_labels: HashSet<Subset>,
}

impl SlpParser {
    fn parse(mut self, text: &str) -> Result<Circuit> {
        let mut lines = text.split('\n').enumerate().map(|(i, l)| (i + 1, l)).peekable();
        match lines.next() {
            Some((_, SLP_HEADER)) => {}
            _ => return Err(perr(1, format!("expected header `{SLP_HEADER}`"))),
        }
        let mut section = Section::Inputs;
        while let Some((line, l)) = lines.next() {
            if l.is_empty() {
                if lines.peek().is_none() {
                    break;
                }
                return Err(perr(line, "blank line"));
            }
            if l.ends_with('\r') {
                return Err(perr(line, "CR line ending"));
            }
            let (kw, rest) = l.split_once(' ').ok_or_else(|| perr(line, "expected `input`, `gate` or `output`"))?;
            let this = match kw {
                "input" => Section::Inputs,
                "gate" => Section::Gates,
                "output" => Section::Outputs,
                other => return Err(perr(line, format!("unknown item `{other}`"))),
            };
            if this < section {
                return Err(perr(line, format!("`{kw}` after a later section")));
            }
            section = this;
            match this {
                Section::Inputs => self.input(line, rest)?,
                Section::Gates => self.gate(line, rest)?,
                Section::Outputs => self.output(line, rest)?,
            }
        }
        if !text.is_empty() && !text.ends_with('\n') {
            return Err(perr(text.split('\n').count(), "missing final newline"));
        }
        Circuit::new(self.inputs, self.gates, self.outputs)
    }

    fn input(&mut self, line: usize, rest: &str) -> Result<()> {
        let label = rest
            .strip_prefix('x')
            .ok_or_else(|| perr(line, "input label must start with `x`"))?;
        let label: Subset = label.parse().map_err(|e| perr(line, format!("{e}")))?;
        if self.input_index.insert(label, self.inputs.len()).is_some() {
            return Err(perr(line, format!("duplicate input x{label}")));
        }
        self.inputs.push(label);
        Ok(())
    }

    fn gate(&mut self, line: usize, rest: &str) -> Result<()> {
        let (name, expr) = rest
            .split_once(" = ")
            .ok_or_else(|| perr(line, "expected `gate t<k> = <ref> + <ref>`"))?;
        let expected = format!("t{}", self.gates.len());
        if name != expected {
            return Err(perr(line, format!("expected gate name {expected}, found {name}")));
        }
        let (a, b) = expr
            .split_once(" + ")
            .ok_or_else(|| perr(line, "expected `<ref> + <ref>`"))?;
        let left = self.reference(line, a)?;
        let right = self.reference(line, b)?;
        self.gates.push(Gate { left, right });
        Ok(())
    }

    fn output(&mut self, line: usize, rest: &str) -> Result<()> {
        let (name, r) = rest
            .split_once(" = ")
            .ok_or_else(|| perr(line, "expected `output y{...} = <ref>`"))?;
        let label = name
            .strip_prefix('y')
            .ok_or_else(|| perr(line, "output label must start with `y`"))?;
        let label: Subset = label.parse().map_err(|e| perr(line, format!("{e}")))?;
        if !self.output_labels.insert(label) {
            return Err(perr(line, format!("duplicate output y{label}")));
        }
        let node = self.reference(line, r)?;
        self.outputs.push(Output { label, node });
        Ok(())
    }

    fn reference(&self, line: usize, r: &str) -> Result<NodeRef> {
        if let Some(label) = r.strip_prefix('x') {
            let label: Subset = label.parse().map_err(|e| perr(line, format!("{e}")))?;
            return self
                .input_index
                .get(&label)
                .map(|&i| NodeRef::Input(i))
                .ok_or_else(|| perr(line, format!("undeclared input x{label}")));
        }
        if let Some(idx) = r.strip_prefix('t') {
            if idx.is_empty() || !idx.bytes().all(|b| b.is_ascii_digit()) || (idx.len() > 1 && idx.starts_with('0')) {
                return Err(perr(line, format!("malformed gate reference `{r}`")));
            }
            let j: usize = idx.parse().map_err(|_| perr(line, format!("malformed gate reference `{r}`")))?;
            if j >= self.gates.len() {
                return Err(perr(line, format!("forward reference to t{j}")));
            }
            return Ok(NodeRef::Gate(j));
        }
        Err(perr(line, format!("malformed reference `{r}`")))
    }
}

fn perr(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(e: &[u32]) -> Subset {
        Subset::from_elements(e.iter().copied()).unwrap()
    }

    fn singletons(n: u32) -> Vec<Subset> {
        (1..=n).map(Subset::singleton).collect()
    }

    #[test]
    fn evaluate_identity_and_max_chain() {
        let c = Circuit::new(
            vec![set(&[1])],
            vec![],
            vec![Output {
                label: set(&[1]),
                node: NodeRef::Input(0),
            }],
        )
        .unwrap();
        assert_eq!(c.evaluate(&[7i64], |a, b| a + b), vec![7]);

        let mut b = CircuitBuilder::new(singletons(3));
        let t = b.sum_chain(&[NodeRef::Input(0), NodeRef::Input(1), NodeRef::Input(2)]);
        let c = b.finish(vec![Output { label: Subset::EMPTY, node: t }]).unwrap();
        assert_eq!(c.evaluate(&[1, 2, 3], |a: &i32, b| *a.max(b)), vec![3]);
    }

    #[test]
    fn coefficient_examples() {
        let mut b = CircuitBuilder::new(singletons(2));
        let t0 = b.add(NodeRef::Input(0), NodeRef::Input(1));
        let t1 = b.add(NodeRef::Input(0), NodeRef::Input(0));
        let c = b
            .finish(vec![
                Output { label: set(&[1]), node: t0 },
                Output { label: set(&[2]), node: t1 },
            ])
            .unwrap();
        let coeffs = c.coefficient_vectors();
        assert_eq!(coeffs.outputs[0], CoefficientVector::from_support([0, 1]));
        assert_eq!(coeffs.outputs[1].get(0), 2);
        assert!(!coeffs.outputs[1].is_zero_one());
    }

    #[test]
    fn symbolic_evaluation_matches_coefficients() {
        let mut b = CircuitBuilder::new(singletons(4));
        let t0 = b.add(NodeRef::Input(0), NodeRef::Input(1));
        let t1 = b.add(t0, NodeRef::Input(2));
        let t2 = b.add(t1, t0);
        let t3 = b.add(NodeRef::Input(3), t2);
        let c = b
            .finish(vec![
                Output { label: set(&[1]), node: t3 },
                Output { label: set(&[2]), node: NodeRef::Input(2) },
                Output { label: set(&[3]), node: t1 },
            ])
            .unwrap();
        let units: Vec<CoefficientVector> = (0..4).map(CoefficientVector::unit).collect();
        assert_eq!(c.evaluate(&units, |a, b| a.add(b)), c.coefficient_vectors().outputs);
    }

    #[test]
    fn structural_validation() {
        let bad_ref = Circuit::new(
            singletons(2),
            vec![Gate {
                left: NodeRef::Input(0),
                right: NodeRef::Gate(0),
            }],
            vec![],
        );
        assert!(matches!(bad_ref, Err(Error::Malformed(_))));
        let dup_out = Circuit::new(
            singletons(1),
            vec![],
            vec![
                Output { label: set(&[1]), node: NodeRef::Input(0) },
                Output { label: set(&[1]), node: NodeRef::Input(0) },
            ],
        );
        assert!(matches!(dup_out, Err(Error::Malformed(_))));
    }

    #[test]
    fn transpose_requires_consumers() {
        let mut b = CircuitBuilder::new(singletons(3));
        b.add(NodeRef::Input(0), NodeRef::Input(1));
        let c = b.finish(vec![Output { label: set(&[1]), node: NodeRef::Gate(0) }]).unwrap();
        assert_eq!(c.transpose(), Err(Error::NotReduced(NodeRef::Input(2))));

        let mut b = CircuitBuilder::new(singletons(2));
        b.add(NodeRef::Input(0), NodeRef::Input(1));
        let c = b.finish(vec![Output { label: set(&[1]), node: NodeRef::Input(0) },
            Output { label: set(&[2]), node: NodeRef::Input(1) }]).unwrap();
        assert_eq!(c.transpose(), Err(Error::NotReduced(NodeRef::Gate(0))));
    }

    #[test]
    fn transpose_small() {
        // y1 = x1 + x2, y2 = x1 + x2 + x3 ; transpose: x1' = a+b, x2' = a+b, x3' = b
        let mut b = CircuitBuilder::new(singletons(3));
        let t0 = b.add(NodeRef::Input(0), NodeRef::Input(1));
        let t1 = b.add(t0, NodeRef::Input(2));
        let c = b
            .finish(vec![
                Output { label: set(&[1]), node: t0 },
                Output { label: set(&[2]), node: t1 },
            ])
            .unwrap();
        let t = c.transpose().unwrap();
        assert_eq!(t.gate_count(), 2 + 2 - 3);
        assert_eq!(t.inputs(), &[set(&[1]), set(&[2])]);
        let coeffs = t.coefficient_vectors();
        assert_eq!(coeffs.outputs[0], CoefficientVector::from_support([0, 1]));
        assert_eq!(coeffs.outputs[1], CoefficientVector::from_support([0, 1]));
        assert_eq!(coeffs.outputs[2], CoefficientVector::from_support([1]));
        let tt = t.transpose().unwrap();
        assert_eq!(tt.gate_count(), 2);
        assert_eq!(tt.coefficient_vectors().outputs, c.coefficient_vectors().outputs);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let fwd = "bpqn-slp 1\ninput x{1}\ninput x{2}\ngate t0 = x{1} + t9\n";
        match Circuit::parse_slp(fwd) {
            Err(Error::Parse { line: 4, reason }) => assert!(reason.contains("forward reference")),
            other => panic!("{other:?}"),
        }
        let dup = "bpqn-slp 1\ninput x{1}\noutput y{1} = x{1}\noutput y{1} = x{1}\n";
        assert!(matches!(Circuit::parse_slp(dup), Err(Error::Parse { line: 4, .. })));
        let undeclared = "bpqn-slp 1\ninput x{1}\ngate t0 = x{1} + x{2}\n";
        assert!(matches!(Circuit::parse_slp(undeclared), Err(Error::Parse { line: 3, .. })));
        let order = "bpqn-slp 1\ninput x{1}\noutput y{1} = x{1}\ninput x{2}\n";
        assert!(matches!(Circuit::parse_slp(order), Err(Error::Parse { line: 4, .. })));
        let blank = "bpqn-slp 1\n\ninput x{1}\n";
        assert!(matches!(Circuit::parse_slp(blank), Err(Error::Parse { line: 2, .. })));
        let header = "bpqn-slp 2\n";
        assert!(matches!(Circuit::parse_slp(header), Err(Error::Parse { line: 1, .. })));
        let spaced = "bpqn-slp 1\ninput x{1, 2}\n";
        assert!(matches!(Circuit::parse_slp(spaced), Err(Error::Parse { line: 2, .. })));
        let misnumbered = "bpqn-slp 1\ninput x{1}\ngate t1 = x{1} + x{1}\n";
        assert!(matches!(Circuit::parse_slp(misnumbered), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn slp_text_shape() {
        let mut b = CircuitBuilder::new(vec![set(&[1, 2]), set(&[1, 3])]);
        let t0 = b.add(NodeRef::Input(0), NodeRef::Input(1));
        let c = b.finish(vec![Output { label: Subset::EMPTY, node: t0 }]).unwrap();
        assert_eq!(
            c.to_slp(),
            "bpqn-slp 1\ninput x{1,2}\ninput x{1,3}\ngate t0 = x{1,2} + x{1,3}\noutput y{} = t0\n"
        );
        assert_eq!(Circuit::parse_slp(&c.to_slp()).unwrap(), c);
    }

    #[test]
    fn sum_balanced_gate_count() {
        for k in 1..20 {
            let mut b = CircuitBuilder::new(singletons(k));
            let terms: Vec<NodeRef> = (0..k as usize).map(NodeRef::Input).collect();
            let root = b.sum_balanced(&terms);
            assert_eq!(b.gate_count(), k as usize - 1);
            let c = b.finish(vec![Output { label: Subset::EMPTY, node: root }]).unwrap();
            assert_eq!(
                c.coefficient_vectors().outputs[0],
                CoefficientVector::from_support(0..k as usize)
            );
        }
    }
}
