//! Phase-gate angles from target phases.
//!
//! A gate on signature `v` contributes `θ_v` to every basis state `b` with
//! `⟨v, b⟩ = 1`, so the targets satisfy `α_b = Σ_{⟨v,b⟩=1} θ_v`. Inverting this
//! is a scaled Walsh–Hadamard transform: `θ_k = -(Hα)_k / 2^{n-1}`.

use serde::{Deserialize, Serialize};

use crate::circuit::{Angle, Circuit, Gate};
use crate::error::{Error, Result};
use crate::f2::{check_wires, parity, SigVec};

/// Target phases `α_b` for every basis state `b`, with `α_0 = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseTargets {
    n: usize,
    alpha: Vec<f64>,
}

fn wires_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::PhaseLength(len));
    }
    let n = len.trailing_zeros() as usize;
    check_wires(n)?;
    Ok(n)
}

impl PhaseTargets {
    /// Takes `2^n` phases indexed by basis state and removes the global phase
    /// by subtracting `alpha[0]` from every entry.
    pub fn new(mut alpha: Vec<f64>) -> Result<Self> {
        let n = wires_for_len(alpha.len())?;
        if let Some(bad) = alpha.iter().find(|x| !x.is_finite()) {
            return Err(Error::Invalid(format!("non-finite phase {bad}")));
        }
        let global = alpha[0];
        for a in &mut alpha {
            *a -= global;
        }
        Ok(Self { n, alpha })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn get(&self, b: usize) -> f64 {
        self.alpha[b]
    }
}

/// One angle per nonzero signature.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleVector {
    n: usize,
    // index = signature bits; slot 0 is always 0.0
    theta: Vec<f64>,
}

impl AngleVector {
    /// `theta[k - 1]` is the angle of the signature with bits `k`.
    pub fn new(n: usize, theta: Vec<f64>) -> Result<Self> {
        check_wires(n)?;
        let expected = (1usize << n) - 1;
        if theta.len() != expected {
            return Err(Error::Dimension { expected, actual: theta.len() });
        }
        if let Some(bad) = theta.iter().find(|x| !x.is_finite()) {
            return Err(Error::Invalid(format!("non-finite angle {bad}")));
        }
        let mut full = Vec::with_capacity(expected + 1);
        full.push(0.0);
        full.extend(theta);
        Ok(Self { n, theta: full })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        check_wires(n)?;
        Ok(Self { n, theta: vec![0.0; 1 << n] })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, v: SigVec) -> Result<f64> {
        if v.dim() != self.n || v.is_zero() {
            return Err(Error::UnknownSignature(v));
        }
        Ok(self.theta[v.bits() as usize])
    }

    pub fn set(&mut self, v: SigVec, value: f64) -> Result<()> {
        if v.dim() != self.n || v.is_zero() {
            return Err(Error::UnknownSignature(v));
        }
        self.theta[v.bits() as usize] = value;
        Ok(())
    }

    /// `(signature, angle)` for every nonzero signature, in increasing bit order.
    pub fn iter(&self) -> impl Iterator<Item = (SigVec, f64)> + '_ {
        self.theta.iter().enumerate().skip(1).map(|(k, &x)| (SigVec::from_raw(k as u32, self.n), x))
    }

    /// Angles for signatures `1..2^n`, in increasing bit order.
    pub fn values(&self) -> &[f64] {
        &self.theta[1..]
    }
}

/// In-place unnormalized Walsh–Hadamard transform.
pub fn fwht(buf: &mut [f64]) {
    let len = buf.len();
    debug_assert!(len.is_power_of_two());
    let mut h = 1;
    while h < len {
        for block in buf.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// `θ̂` with `α_b = Σ_{⟨v,b⟩=1} θ_v` for every `b`, in `O(n 2^n)`.
pub fn compute_theta(targets: &PhaseTargets) -> AngleVector {
    let n = targets.n;
    let mut buf = targets.alpha.clone();
    fwht(&mut buf);
    let scale = -1.0 / (1u64 << (n - 1)) as f64;
    for x in &mut buf {
        *x *= scale;
    }
    buf[0] = 0.0;
    AngleVector { n, theta: buf }
}

/// Direct `O(4^n)` evaluation of `α_b = Σ_{⟨v,b⟩=1} θ_v`.
pub fn reconstruct_alpha(theta: &AngleVector) -> PhaseTargets {
    let size = 1usize << theta.n;
    let alpha =
        (0..size).map(|b| (1..size).filter(|&v| parity((v & b) as u32)).map(|v| theta.theta[v]).sum()).collect();
    PhaseTargets { n: theta.n, alpha }
}

/// Replaces every symbolic phase gate by its angle from `theta`.
pub fn bind_angles(c: &Circuit, theta: &AngleVector) -> Result<Circuit> {
    if theta.n != c.n() {
        return Err(Error::Dimension { expected: c.n(), actual: theta.n });
    }
    let gates = c
        .gates()
        .iter()
        .map(|g| match *g {
            Gate::Phase { wire, angle: Angle::Sym(s) } => Ok(Gate::Phase { wire, angle: Angle::Value(theta.get(s)?) }),
            other => Ok(other),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Circuit::from_gates_trusted(c.n(), c.topology().clone(), gates))
}
