//! Synthesis, verification and optimization of CX+phase circuits that realize
//! arbitrary diagonal operators on `n` qubits.
//!
//! A circuit made of CX and phase gates maps each computational basis state to
//! a (permuted) basis state with a phase. Tracking, for every wire, the F₂-linear
//! combination of input bits it carries (its *wire signature*) reduces the
//! design of a generic diagonal circuit to a combinatorial problem: every
//! nonzero vector of F₂ⁿ must appear as some wire's signature, so that one phase
//! gate per vector can be attached. The crate provides:
//!
//! - [`f2`]: bit-packed F₂ linear algebra and trinomial arithmetic,
//! - [`circuit`]: the circuit IR, signature simulator and variant checker,
//! - [`synth`]: constructions for fully-connected, linear and circular topologies,
//! - [`angles`]: phase-gate angles from target phases via a fast Walsh–Hadamard transform,
//! - [`adaptive`]: operator-specific reductions that skip zero-angle signatures,
//! - [`search`]: exact minimal-circuit search for small `n`.
//!
//! ```
//! use diagsynth::{angles, circuit, synth};
//! use circuit::{check_variant, place_phases, phase_profile_all, Variant};
//!
//! let skeleton = synth::full::synth_spa_full(3).unwrap();
//! assert_eq!(skeleton.cx_count(), 4);
//! assert!(check_variant(&skeleton, Variant::Spa).pass);
//!
//! let alpha = angles::PhaseTargets::new(vec![0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7]).unwrap();
//! let theta = angles::compute_theta(&alpha);
//! let bound = angles::bind_angles(&place_phases(&skeleton).unwrap(), &theta).unwrap();
//! let profile = phase_profile_all(&bound).unwrap();
//! assert!((profile[5] - 0.5).abs() < 1e-9);
//! ```

pub mod adaptive;
pub mod angles;
pub mod circuit;
pub mod error;
pub mod f2;
pub mod reference;
pub mod search;
pub mod synth;

pub use circuit::{Angle, Circuit, Gate, Topology, Variant};
pub use error::{Error, Result};
pub use f2::{Basis, F2Matrix, SigVec};
