//! Addition-only circuits for set-disjointness matrices.
//!
//! `B(p,q,n)` has a row for every `q`-subset `Q` of `[1..n]`, a column for
//! every `p`-subset `P`, and a 1 exactly where `Q ∩ P = ∅`. This crate builds
//! circuits of binary additions computing `B(p,q,n)·x` by a recursive
//! construction, predicts their exact size, verifies them coefficient by
//! coefficient, transposes them, and evaluates upper and lower bounds on the
//! size of the best such circuit.
//!
//! ```
//! let s = bpqn::synthesis::synth(2, 1, 5).unwrap();
//! assert_eq!(s.circuit.gate_count(), 19);
//! let m = bpqn::matrices::build_matrix(2, 1, 5).unwrap();
//! assert!(bpqn::verification::verify_circuit(&s.circuit, &m).unwrap().passed);
//! ```

pub mod bounds;
pub mod circuit;
pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod matrices;
pub mod synthesis;
pub mod verification;

pub use circuit::{Circuit, NodeRef};
pub use combinatorics::Subset;
pub use error::{Error, Result};
pub use matrices::LabeledBooleanMatrix;
