use std::ffi::{CStr, CString};
use std::ptr;

use bpqn_ffi::*;

fn synth(p: usize, q: usize, n: usize) -> *mut BpqnCircuit {
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { bpqn_synth(p, q, n, &mut c) }, BpqnStatus::Ok);
    assert!(!c.is_null());
    c
}

fn last_error() -> String {
    let e = bpqn_last_error();
    assert!(!e.is_null());
    unsafe { CStr::from_ptr(e) }.to_string_lossy().into_owned()
}

#[test]
fn synth_counts_and_verify() {
    let c = synth(2, 1, 5);
    unsafe {
        assert_eq!(bpqn_circuit_gate_count(c), 19);
        assert_eq!(bpqn_circuit_input_count(c), 10);
        assert_eq!(bpqn_circuit_output_count(c), 5);
        let mut ok = false;
        assert_eq!(bpqn_verify(c, 2, 1, 5, &mut ok), BpqnStatus::Ok);
        assert!(ok);
        assert_eq!(bpqn_verify(c, 1, 2, 5, &mut ok), BpqnStatus::Structural);
        bpqn_circuit_free(c);
    }
}

#[test]
fn transpose_through_handles() {
    let c = synth(2, 1, 5);
    let mut t = ptr::null_mut();
    unsafe {
        assert_eq!(bpqn_circuit_transpose(c, &mut t), BpqnStatus::Ok);
        assert_eq!(bpqn_circuit_gate_count(t), 14);
        let mut ok = false;
        assert_eq!(bpqn_verify(t, 1, 2, 5, &mut ok), BpqnStatus::Ok);
        assert!(ok);
        bpqn_circuit_free(t);
        bpqn_circuit_free(c);
    }
}

#[test]
fn slp_round_trip() {
    let c = synth(1, 1, 4);
    unsafe {
        let mut text = ptr::null_mut();
        assert_eq!(bpqn_circuit_to_slp(c, &mut text), BpqnStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(bpqn_circuit_parse(text, &mut back), BpqnStatus::Ok);
        assert_eq!(bpqn_circuit_gate_count(back), 6);
        let mut again = ptr::null_mut();
        assert_eq!(bpqn_circuit_to_slp(back, &mut again), BpqnStatus::Ok);
        assert_eq!(CStr::from_ptr(text), CStr::from_ptr(again));

        let mut dot = ptr::null_mut();
        assert_eq!(bpqn_circuit_to_dot(c, &mut dot), BpqnStatus::Ok);
        assert!(CStr::from_ptr(dot).to_str().unwrap().starts_with("digraph"));

        for s in [text, again, dot] {
            bpqn_string_free(s);
        }
        bpqn_circuit_free(back);
        bpqn_circuit_free(c);
    }
}

#[test]
fn error_codes() {
    let mut c = ptr::null_mut();
    unsafe {
        assert_eq!(bpqn_synth(1, 2, 2, &mut c), BpqnStatus::NotRepresentable);
        assert!(c.is_null());
        assert!(last_error().contains("not representable"));

        assert_eq!(bpqn_synth(1, 1, 4, ptr::null_mut()), BpqnStatus::NullPointer);

        let bad = CString::new("bpqn-slp 1\ngate t0 = x{1} + x{2}\n").unwrap();
        assert_eq!(bpqn_circuit_parse(bad.as_ptr(), &mut c), BpqnStatus::Parse);
        assert!(last_error().starts_with("line "));

        let mut r = 0usize;
        assert_eq!(bpqn_rank_mod_prime(2, 2, 5, 1_000_003, &mut r), BpqnStatus::Ok);
        assert_eq!(r, 10);
        assert!(bpqn_last_error().is_null());
        assert_eq!(bpqn_rank_mod_prime(2, 2, 5, 10, &mut r), BpqnStatus::InvalidArgument);

        let mut cost = 0u64;
        assert_eq!(bpqn_recurrence_cost(2, 1, 5, &mut cost), BpqnStatus::Ok);
        assert_eq!(cost, 19);
        assert_eq!(bpqn_recurrence_cost(30, 30, 64, &mut cost), BpqnStatus::Overflow);

        assert_eq!(bpqn_circuit_gate_count(ptr::null()), 0);
        bpqn_circuit_free(ptr::null_mut());
        bpqn_string_free(ptr::null_mut());
    }
}

#[test]
fn header_is_generated() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/bpqn.h")).unwrap();
    for name in ["typedef struct BpqnCircuit BpqnCircuit", "BPQN_STATUS_NOT_REPRESENTABLE", "bpqn_synth(", "bpqn_last_error("] {
        assert!(h.contains(name), "header lacks {name}");
    }
}
