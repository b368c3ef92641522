//! Phase-gate placement, merging and the induced phase profile.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use super::{check_variant, Angle, Circuit, Gate, Variant};
use crate::error::{Error, Result};
use crate::f2::{parity, SigVec};

/// Calls `f(gate_index, wire, signature_bits)` for every phase gate.
fn for_each_phase(c: &Circuit, mut f: impl FnMut(usize, usize, u32)) {
    let mut cur: Vec<u32> = (0..c.n()).map(|k| 1u32 << k).collect();
    for (i, g) in c.gates().iter().enumerate() {
        match *g {
            Gate::Cx { control, target } => cur[target] ^= cur[control],
            Gate::Phase { wire, .. } => f(i, wire, cur[wire]),
        }
    }
}

/// Collapses numeric phase gates that act on the same signature into one gate
/// at the first such position, carrying the sum of their angles. CX gates and
/// symbolic phase gates pass through unchanged.
pub fn merge_phase_gates(c: &Circuit) -> Circuit {
    let mut first_at: HashMap<u32, usize> = HashMap::new();
    let mut sums: Vec<(usize, f64)> = Vec::new();
    let mut drop = vec![false; c.gates().len()];
    for_each_phase(c, |i, _, sig| {
        let Gate::Phase { angle: Angle::Value(x), .. } = c.gates()[i] else { return };
        match first_at.get(&sig) {
            Some(&slot) => {
                sums[slot].1 += x;
                drop[i] = true;
            }
            None => {
                first_at.insert(sig, sums.len());
                sums.push((i, x));
            }
        }
    });
    let mut gates = c.gates().to_vec();
    for (i, total) in sums {
        if let Gate::Phase { wire, .. } = gates[i] {
            gates[i] = Gate::Phase { wire, angle: Angle::Value(total) };
        }
    }
    let gates = gates.into_iter().zip(drop).filter_map(|(g, d)| (!d).then_some(g)).collect();
    Circuit::from_gates_trusted(c.n(), c.topology().clone(), gates)
}

/// Inserts one symbolic phase gate per visited signature at its first
/// appearance. Requires every nonzero signature to be visited.
pub fn place_phases(skeleton: &Circuit) -> Result<Circuit> {
    let report = check_variant(skeleton, Variant::Spa);
    if !report.pass {
        return Err(Error::NotSpaComplete { missing: report.missing.len() });
    }
    Ok(place_at_first_visit(skeleton))
}

/// Like [`place_phases`], but signatures in `skip` may be left unvisited.
pub fn place_phases_covering(skeleton: &Circuit, skip: &[SigVec]) -> Result<Circuit> {
    let report = check_variant(skeleton, Variant::Spa);
    let missing = report.missing.iter().filter(|v| !skip.contains(v)).count();
    if missing > 0 {
        return Err(Error::NotSpaComplete { missing });
    }
    Ok(place_at_first_visit(skeleton))
}

fn place_at_first_visit(skeleton: &Circuit) -> Circuit {
    let n = skeleton.n();
    let sym = |bits: u32| Angle::Sym(SigVec::from_raw(bits, n));
    let mut seen = vec![false; 1 << n];
    let mut cur: Vec<u32> = (0..n).map(|k| 1u32 << k).collect();
    let mut gates = Vec::with_capacity(skeleton.gates().len() + (1 << n));
    for (k, &b) in cur.iter().enumerate() {
        seen[b as usize] = true;
        gates.push(Gate::Phase { wire: k, angle: sym(b) });
    }
    for (control, target) in skeleton.cx_pairs() {
        cur[target] ^= cur[control];
        gates.push(Gate::cx(control, target));
        let b = cur[target];
        if !seen[b as usize] {
            seen[b as usize] = true;
            gates.push(Gate::Phase { wire: target, angle: sym(b) });
        }
    }
    Circuit::from_gates_trusted(n, skeleton.topology().clone(), gates)
}

fn numeric_phases(c: &Circuit) -> Result<Vec<(u32, f64)>> {
    let mut out = Vec::new();
    let mut err = None;
    for_each_phase(c, |i, _, sig| match c.gates()[i] {
        Gate::Phase { angle: Angle::Value(x), .. } => out.push((sig, x)),
        _ => err = Some(Error::SymbolicAngle),
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Total phase the circuit applies to basis state `b`, reduced to `[0, 2π)`.
pub fn phase_profile(c: &Circuit, b: SigVec) -> Result<f64> {
    if b.dim() != c.n() {
        return Err(Error::Dimension { expected: c.n(), actual: b.dim() });
    }
    let total: f64 = numeric_phases(c)?.into_iter().filter(|&(sig, _)| parity(sig & b.bits())).map(|(_, x)| x).sum();
    Ok(total.rem_euclid(TAU))
}

/// [`phase_profile`] for every basis state, indexed by the state's mask.
pub fn phase_profile_all(c: &Circuit) -> Result<Vec<f64>> {
    let phases = numeric_phases(c)?;
    let size = 1usize << c.n();
    let mut out = vec![0.0; size];
    for (sig, x) in phases {
        for (b, acc) in out.iter_mut().enumerate() {
            if parity(sig & b as u32) {
                *acc += x;
            }
        }
    }
    for v in &mut out {
        *v = v.rem_euclid(TAU);
    }
    Ok(out)
}

/// Distance between two angles on the circle, in `[0, π]`.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    if d > PI {
        TAU - d
    } else {
        d
    }
}
