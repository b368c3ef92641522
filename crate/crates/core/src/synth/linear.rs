//! Linear topology (`CX(a, b)` only for `|a - b| = 1`).

use crate::circuit::{final_signatures, Circuit, Topology};
use crate::error::{Error, Result};
use crate::f2::{check_wires, Basis, F2Matrix, SigVec};

type CxList = Vec<(usize, usize)>;

fn v_into(i: usize, j: usize, out: &mut CxList) {
    if i.abs_diff(j) == 1 {
        out.push((i, j));
        return;
    }
    let next = if j > i { i + 1 } else { i - 1 };
    out.push((i, next));
    v_into(next, j, out);
    out.push((i, next));
}

/// Ladder of `2|i - j| - 1` CX gates leaving wire `j` with the sum of the
/// signatures of all wires between `i` and `j` (inclusive), all other wires
/// restored.
pub fn v_circuit(i: usize, j: usize, n: usize) -> Result<Circuit> {
    check_wires(n)?;
    for w in [i, j] {
        if w >= n {
            return Err(Error::WireOutOfRange { wire: w, n });
        }
    }
    if i == j {
        return Err(Error::SelfLoop { control: i, target: j });
    }
    let mut cx = Vec::with_capacity(2 * i.abs_diff(j) - 1);
    v_into(i, j, &mut cx);
    Ok(Circuit::from_cx_trusted(n, Topology::Linear, cx))
}

fn gray_into(n: usize, offset: usize, out: &mut CxList) {
    if n <= 1 {
        return;
    }
    if n.is_multiple_of(2) {
        let m = n / 2;
        gray_into(n - 1, offset + 1, out);
        v_into(offset, offset + m, out);
        gray_into(n - 1, offset + 1, out);
    } else {
        let m = (n - 1) / 2;
        gray_into(n - 1, offset, out);
        v_into(offset + n - 1, offset + m, out);
        gray_into(n - 1, offset, out);
    }
}

/// `GRAY_n`: puts every signature `v` with `⟨v, e_m⟩ = 1` (`m = ⌊n/2⌋`) on wire
/// `m`, leaving all other wires unchanged.
pub fn gray_circuit(n: usize) -> Result<Circuit> {
    check_wires(n)?;
    let mut cx = Vec::new();
    gray_into(n, 0, &mut cx);
    Ok(Circuit::from_cx_trusted(n, Topology::Linear, cx))
}

fn spa_linear_cx(n: usize, swap_opt: bool) -> CxList {
    let mut cx = Vec::new();
    for w in (2..=n).rev() {
        gray_into(w, 0, &mut cx);
        // rotate the middle wire's content to the end of the active range
        for i in w / 2..w - 1 {
            cx.push((i, i + 1));
            cx.push((i + 1, i));
            if !swap_opt {
                cx.push((i, i + 1));
            }
        }
    }
    cx
}

/// Signature enumeration on a line: `GRAY_n`, a rotation of the upper
/// `⌈n/2⌉` wires, then the same on the first `n - 1` wires.
///
/// Each step of the rotation is a full SWAP (3 CX), or only its first two CX
/// when `swap_opt` is set.
pub fn synth_spa_linear(n: usize, swap_opt: bool) -> Result<Circuit> {
    check_wires(n)?;
    Ok(Circuit::from_cx_trusted(n, Topology::Linear, spa_linear_cx(n, swap_opt)))
}

/// Nearest-neighbor elimination that reduces `target` to the identity, as a
/// list of row operations.
fn eliminate(target: &F2Matrix) -> CxList {
    let n = target.ncols();
    let mut rows = target.rows().to_vec();
    let mut ops = Vec::new();
    let mut apply = |rows: &mut Vec<u32>, c: usize, t: usize| {
        rows[t] ^= rows[c];
        ops.push((c, t));
    };
    let has = |rows: &[u32], w: usize, k: usize| (rows[w] >> k) & 1 == 1;

    // upper wires lose bit k, wire k keeps it
    for k in 0..n {
        let i1 = (k..n).find(|&j| has(&rows, j, k)).expect("rows form a basis");
        for s in 0..i1 - k {
            apply(&mut rows, i1 - s, i1 - s - 1);
        }
        let i2 = (i1..n).rev().find(|&j| has(&rows, j, k)).unwrap();
        for j in i1..i2 {
            if !has(&rows, j + 1, k) {
                apply(&mut rows, j, j + 1);
            }
        }
        for s in (k..i2).rev() {
            apply(&mut rows, s, s + 1);
        }
    }
    // clear bit k from the lower wires, top column first
    for k in (0..n).rev() {
        let Some(i3) = (0..k).find(|&j| has(&rows, j, k)) else { continue };
        for j in (i3 + 1..k).rev() {
            if !has(&rows, j, k) {
                apply(&mut rows, j + 1, j);
            }
        }
        for s in i3..k {
            apply(&mut rows, s + 1, s);
        }
    }
    debug_assert!(rows.iter().enumerate().all(|(i, &r)| r == 1 << i));
    ops
}

/// CX list taking the standard basis to `target` on a line.
pub(crate) fn reach_cx(target: &F2Matrix) -> CxList {
    let mut ops = eliminate(target);
    ops.reverse();
    ops
}

/// CX list taking wire signatures `current` to `desired`.
pub(crate) fn transition_cx(current: &F2Matrix, desired: &F2Matrix) -> Result<CxList> {
    let m = desired.mul(&current.inverse()?)?;
    Ok(reach_cx(&m))
}

/// Rows `e_{(k+s) mod n}` for wire `k`.
pub(crate) fn cyclic_permutation(n: usize, s: usize) -> F2Matrix {
    F2Matrix::from_rows_unchecked((0..n).map(|k| 1u32 << ((k + s) % n)).collect(), n)
}

/// Shortest transition from `current` to any cyclic shift of the standard basis.
pub(crate) fn cheapest_cyclic_fixup(current: &F2Matrix) -> Result<CxList> {
    let n = current.ncols();
    let mut best: Option<CxList> = None;
    for s in 0..n {
        let ops = transition_cx(current, &cyclic_permutation(n, s))?;
        if best.as_ref().is_none_or(|b| ops.len() < b.len()) {
            best = Some(ops);
        }
    }
    Ok(best.expect("n >= 1"))
}

/// Linear-topology circuit of at most `2n²` CX gates whose final wire
/// signatures are exactly `target`.
pub fn reach(target: &[SigVec]) -> Result<Circuit> {
    let basis = Basis::new(target.to_vec())?;
    let n = basis.dim();
    Ok(Circuit::from_cx_trusted(n, Topology::Linear, reach_cx(&basis.to_matrix())))
}

/// SPA construction (with the 2-CX rotation) followed by a return to the
/// standard basis.
pub fn synth_npa_linear(n: usize) -> Result<Circuit> {
    check_wires(n)?;
    let mut cx = spa_linear_cx(n, true);
    let spa = Circuit::from_cx_trusted(n, Topology::Linear, cx.clone());
    let fin = final_signatures(&spa).to_matrix();
    cx.extend(transition_cx(&fin, &F2Matrix::identity(n))?);
    Ok(Circuit::from_cx_trusted(n, Topology::Linear, cx))
}

/// SPA construction followed by the cheapest return to a cyclic shift of the
/// standard basis. Never longer than [`synth_npa_linear`].
pub fn synth_wpa_linear(n: usize) -> Result<Circuit> {
    check_wires(n)?;
    let mut cx = spa_linear_cx(n, true);
    let spa = Circuit::from_cx_trusted(n, Topology::Linear, cx.clone());
    let fin = final_signatures(&spa).to_matrix();
    cx.extend(cheapest_cyclic_fixup(&fin)?);
    Ok(Circuit::from_cx_trusted(n, Topology::Linear, cx))
}
