use bpqn::bounds::{bounds_report, ComplementBase};
use bpqn::circuit::{Gate, Output};
use bpqn::matrices::build_matrix;
use bpqn::synthesis::synth;
use bpqn::verification::{random_semigroup_check, verify_circuit};
use bpqn::{Circuit, NodeRef, Subset};

fn grid() -> impl Iterator<Item = (usize, usize, usize)> {
    (0..=3).flat_map(|p| (0..=3).flat_map(move |q| (p + q..=10).map(move |n| (p, q, n))))
}

/// Which gates some output depends on.
fn live_gates(c: &Circuit) -> Vec<bool> {
    let mut live = vec![false; c.gate_count()];
    for o in c.outputs() {
        if let NodeRef::Gate(j) = o.node {
            live[j] = true;
        }
    }
    for j in (0..c.gate_count()).rev() {
        if live[j] {
            let g = c.gates()[j];
            for r in [g.left, g.right] {
                if let NodeRef::Gate(i) = r {
                    live[i] = true;
                }
            }
        }
    }
    live
}

/// Drops gate `j` by routing its consumers to its left operand.
fn bypass(c: &Circuit, j: usize) -> Circuit {
    let left = c.gates()[j].left;
    let fix = |r: NodeRef| if r == NodeRef::Gate(j) { left } else { r };
    let gates = c.gates().iter().map(|g| Gate { left: fix(g.left), right: fix(g.right) }).collect();
    let outputs = c.outputs().iter().map(|o| Output { label: o.label, node: fix(o.node) }).collect();
    Circuit::new(c.inputs().to_vec(), gates, outputs).unwrap()
}

#[test]
fn semigroup_universality_on_grid() {
    for (p, q, n) in grid() {
        let m = build_matrix(p, q, n).unwrap();
        let c = synth(p, q, n).unwrap().circuit;
        assert!(random_semigroup_check(&c, &m, 20, (p * 100 + q * 10 + n) as u64).unwrap(), "({p},{q},{n})");
    }
}

#[test]
fn every_gate_is_live_and_load_bearing() {
    for (p, q, n) in [(1, 1, 5), (2, 1, 5), (2, 2, 6), (3, 2, 8), (1, 3, 7), (2, 0, 5)] {
        let m = build_matrix(p, q, n).unwrap();
        let c = synth(p, q, n).unwrap().circuit;
        assert!(live_gates(&c).iter().all(|&l| l), "dead gate in ({p},{q},{n})");
        for j in 0..c.gate_count() {
            let mutant = bypass(&c, j);
            assert!(!verify_circuit(&mutant, &m).unwrap().passed, "({p},{q},{n}) survives losing t{j}");
        }
    }
}

#[test]
fn slp_round_trip_is_byte_identical() {
    let c = synth(2, 2, 6).unwrap().circuit;
    let text = c.to_slp();
    let back = Circuit::parse_slp(&text).unwrap();
    assert_eq!(back, c);
    assert_eq!(back.to_slp(), text);
}

#[test]
fn dot_export_counts() {
    let dot = synth(1, 1, 3).unwrap().circuit.to_dot();
    assert_eq!(dot.matches("shape=box").count(), 3);
    assert_eq!(dot.matches("shape=circle").count(), 3);
    assert_eq!(dot.lines().filter(|l| l.contains("-> y")).count(), 3);
}

#[test]
fn transpose_example() {
    let c = synth(2, 1, 5).unwrap().circuit;
    assert_eq!((c.gate_count(), c.inputs().len(), c.outputs().len()), (19, 10, 5));
    let t = c.transpose().unwrap();
    assert_eq!(t.gate_count(), 14);
    assert!(verify_circuit(&t, &build_matrix(1, 2, 5).unwrap()).unwrap().passed);
    assert_eq!(t.transpose().unwrap().gate_count(), 19);
}

#[test]
fn all_ones_row_transposes_to_all_ones_column() {
    let c = synth(2, 0, 5).unwrap().circuit;
    assert_eq!(c.outputs()[0].label, Subset::EMPTY);
    let t = c.transpose().unwrap();
    assert_eq!(t.inputs(), &[Subset::EMPTY]);
    assert_eq!(t.gate_count(), 0);
    assert!(verify_circuit(&t, &build_matrix(0, 2, 5).unwrap()).unwrap().passed);
}

#[test]
fn bounds_hold_over_table_grid() {
    for p in 1..=3 {
        for q in 1..=3 {
            for n in p + q + 1..=10 {
                for base in [ComplementBase::Exact, ComplementBase::Weak] {
                    bounds_report(p, q, n, base).unwrap();
                }
            }
        }
    }
}
