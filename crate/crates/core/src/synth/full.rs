//! Fully-connected topology. NPA and WPA both need `2^n - 2` CX gates and SPA
//! needs `2^n - n - 1`, and the constructions here meet those counts exactly.

use crate::circuit::{Circuit, Topology};
use crate::error::Result;
use crate::f2::check_wires;

/// Bit positions flipped by the binary-reflected Gray code on `n` bits, walking
/// from `0` through every mask and back to `0` (`2^n` flips).
pub fn gray_flip_sequence(n: usize) -> Vec<usize> {
    let len = 1usize << n;
    (1..len).map(|i| i.trailing_zeros() as usize).chain(std::iter::once(n - 1)).collect()
}

/// Exact decomposition in `2^n - 2` CX gates.
///
/// Wire `m - 1` is swept by a Gray-code walk over wires `0..m-1` for each
/// `m = 2..=n`, after the construction for `m - 1` wires has run on the lower wires.
pub fn synth_npa_full(n: usize) -> Result<Circuit> {
    check_wires(n)?;
    let mut cx = Vec::with_capacity((1usize << n) - 2);
    for m in 2..=n {
        cx.extend(gray_flip_sequence(m - 1).into_iter().map(|f| (f, m - 1)));
    }
    Ok(Circuit::from_cx_trusted(n, Topology::Full, cx))
}

/// Same circuit as [`synth_npa_full`]; the identity is a valid wire permutation.
pub fn synth_wpa_full(n: usize) -> Result<Circuit> {
    synth_npa_full(n)
}

/// Signature enumeration in `2^n - n - 1` CX gates: the Gray walk onto the top
/// wire without its closing flip, then the same on the remaining wires.
pub fn synth_spa_full(n: usize) -> Result<Circuit> {
    check_wires(n)?;
    let mut cx = Vec::with_capacity((1usize << n) - n - 1);
    for m in (2..=n).rev() {
        let flips = gray_flip_sequence(m - 1);
        cx.extend(flips[..flips.len() - 1].iter().map(|&f| (f, m - 1)));
    }
    Ok(Circuit::from_cx_trusted(n, Topology::Full, cx))
}
