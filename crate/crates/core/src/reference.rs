//! Small hand-transcribed circuits with known signature behavior, used as
//! fixtures by the test suites and the CLI documentation.

use crate::circuit::{Angle, Circuit, Gate, Topology};
use crate::f2::SigVec;

fn cx_circuit(n: usize, topology: Topology, cx: &[(usize, usize)]) -> Circuit {
    Circuit::from_cx(n, topology, cx).expect("reference circuit is valid")
}

/// 4-wire CX network ending at `(e0+e2+e3, e1+e2+e3, e2+e3, e3)`.
pub fn four_wire_example() -> Circuit {
    cx_circuit(4, Topology::Full, &[(0, 1), (3, 2), (2, 0), (0, 1)])
}

/// Shortest NPA solution for 3 wires (6 CX); targets produce
/// `011, 010, 101, 111, 110, 100`.
pub fn npa3() -> Circuit {
    cx_circuit(3, Topology::Full, &[(0, 1), (0, 1), (0, 2), (1, 2), (0, 2), (1, 2)])
}

/// Shortest WPA solution for 3 wires (6 CX), ending at `[010, 001, 100]`.
pub fn wpa3() -> Circuit {
    cx_circuit(3, Topology::Full, &[(0, 1), (2, 0), (1, 0), (2, 1), (0, 1), (2, 0)])
}

/// Shortest SPA solution for 3 wires (4 CX), ending at `[001, 101, 110]`.
pub fn spa3() -> Circuit {
    cx_circuit(3, Topology::Full, &[(0, 1), (1, 2), (0, 2), (2, 1)])
}

/// Skip set of the 4-wire linear skipping example.
pub const SKIP_EXAMPLE_SET: [u32; 4] = [0b1001, 0b1010, 0b1110, 0b1111];

/// 7-CX linear circuit on 4 wires that visits every nonzero signature except
/// [`SKIP_EXAMPLE_SET`].
pub fn skip_example_skeleton() -> Circuit {
    cx_circuit(4, Topology::Linear, &[(0, 1), (2, 1), (3, 2), (1, 2), (0, 1), (1, 2), (2, 3)])
}

/// [`skip_example_skeleton`] with its 11 symbolic phase gates at the drawn
/// positions.
pub fn skip_example_with_phases() -> Circuit {
    let s = |bits: u32| Angle::Sym(SigVec::new(bits, 4).unwrap());
    let p = |wire: usize, bits: u32| Gate::Phase { wire, angle: s(bits) };
    let gates = vec![
        p(0, 0b0001),
        p(1, 0b0010),
        p(2, 0b0100),
        p(3, 0b1000),
        Gate::cx(0, 1),
        p(1, 0b0011),
        Gate::cx(2, 1),
        Gate::cx(3, 2),
        p(1, 0b0111),
        p(2, 0b1100),
        Gate::cx(1, 2),
        Gate::cx(0, 1),
        p(1, 0b0110),
        p(2, 0b1011),
        Gate::cx(1, 2),
        Gate::cx(2, 3),
        p(2, 0b1101),
        p(3, 0b0101),
    ];
    Circuit::from_gates(4, Topology::Linear, gates).expect("reference circuit is valid")
}
