//! Circular topology (`CX(j, j ± 1 mod n)`), built on the field structure of
//! an irreducible trinomial `x^n + x^l + 1`.
//!
//! The gate stream `CX(kj mod n, kj + 1 mod n)` for `j = 0, 1, …` advances the
//! wire-signature matrix (read from wire `kj mod n` onward) by the companion-like
//! matrix `A = C^k B`. When the trinomial is primitive, `A` generates the whole
//! multiplicative group of F_{2^n}, so `2^n - 1` steps visit every nonzero
//! signature and return to a cyclic shift of the standard basis.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::linear::{cheapest_cyclic_fixup, transition_cx};
use crate::circuit::{final_signatures, Circuit, Topology};
use crate::error::{Error, Result};
use crate::f2::poly::prime_factors;
use crate::f2::{find_circular_params, F2Matrix, Poly2, TrinomialParams};

/// Random draws allowed when searching for a primitive field element.
const PRIMITIVE_SEARCH_LIMIT: usize = 100_000;

/// Matrices behind the circular construction.
#[derive(Clone, Debug)]
pub struct CompanionState {
    /// `C^k B`, one step of the gate stream.
    pub a: F2Matrix,
    /// Adds row 0 into row 1.
    pub b: F2Matrix,
    /// Cyclic shift: row `i` of `C·X` is row `i + 1` of `X`.
    pub c: F2Matrix,
    /// A generator of the multiplicative group of the matrix field `F_2[A]`.
    pub g: F2Matrix,
}

impl CompanionState {
    /// Builds `A`, `B`, `C` and samples a primitive element `G` with a
    /// ChaCha8 stream seeded by `seed`.
    pub fn new(params: &TrinomialParams, seed: u64) -> Result<Self> {
        let n = params.n();
        let mut b = F2Matrix::identity(n);
        b.set(1, 0, true);
        let c = F2Matrix::from_rows_unchecked((0..n).map(|i| 1u32 << ((i + 1) % n)).collect(), n);
        let a = c.pow(params.k() as u64)?.mul(&b)?;
        let g = if params.is_primitive() {
            a.clone()
        } else {
            find_primitive_element(&a, n, &mut ChaCha8Rng::seed_from_u64(seed))?
        };
        Ok(Self { a, b, c, g })
    }
}

fn has_full_order(m: &F2Matrix, n: usize) -> Result<bool> {
    let group = (1u64 << n) - 1;
    if m.is_zero() {
        return Ok(false);
    }
    for p in prime_factors(group) {
        if m.pow(group / p)?.is_identity() {
            return Ok(false);
        }
    }
    Ok(m.pow(group)?.is_identity())
}

/// Draws `Σ ε_i A^i` uniformly until one has multiplicative order `2^n - 1`.
fn find_primitive_element(a: &F2Matrix, n: usize, rng: &mut impl Rng) -> Result<F2Matrix> {
    let mut powers = vec![F2Matrix::identity(n)];
    for i in 1..n {
        powers.push(powers[i - 1].mul(a)?);
    }
    for _ in 0..PRIMITIVE_SEARCH_LIMIT {
        let eps: u32 = rng.random_range(1..(1u32 << n));
        let mut g = F2Matrix::zero(n, n);
        for (i, p) in powers.iter().enumerate() {
            if (eps >> i) & 1 == 1 {
                g = g.add(p)?;
            }
        }
        if has_full_order(&g, n)? {
            return Ok(g);
        }
    }
    Err(Error::Unsupported(format!("no primitive element found for n = {n}")))
}

/// Characteristic polynomial `det(xI - M)` over F₂, via reduction to upper
/// Hessenberg form by similarity transforms.
pub fn char_poly(m: &F2Matrix) -> Result<Poly2> {
    if !m.is_square() {
        return Err(Error::Dimension { expected: m.ncols(), actual: m.nrows() });
    }
    let n = m.ncols();
    let mut h: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j)).collect()).collect();
    for j in 0..n.saturating_sub(2) {
        let Some(p) = (j + 1..n).find(|&i| h[i][j]) else { continue };
        if p != j + 1 {
            h.swap(p, j + 1);
            for row in h.iter_mut() {
                row.swap(p, j + 1);
            }
        }
        for r in j + 2..n {
            if h[r][j] {
                // row_r += row_{j+1}, then col_{j+1} += col_r keeps the similarity
                let pivot = h[j + 1].clone();
                for (x, v) in h[r].iter_mut().zip(pivot) {
                    *x ^= v;
                }
                for row in h.iter_mut() {
                    let v = row[r];
                    row[j + 1] ^= v;
                }
            }
        }
    }
    // p_k = (x + h_kk) p_{k-1} + Σ_{i<k} h_ik (Π_{i<j≤k} h_{j,j-1}) p_{i-1}
    let mut p = vec![Poly2::ONE];
    for k in 0..n {
        let mut next = p[k] * Poly2::X;
        if h[k][k] {
            next = next + p[k];
        }
        let mut sub = true;
        for i in (0..k).rev() {
            sub &= h[i + 1][i];
            if !sub {
                break;
            }
            if h[i][k] {
                next = next + p[i];
            }
        }
        p.push(next);
    }
    Ok(p[n])
}

fn stream(n: usize, k: usize, steps: u64) -> impl Iterator<Item = (usize, usize)> {
    (0..steps).map(move |j| {
        let c = ((k as u64 * j) % n as u64) as usize;
        (c, (c + 1) % n)
    })
}

fn primitive_params(n: usize) -> Result<TrinomialParams> {
    match find_circular_params(n)? {
        Some(p) if p.is_primitive() => Ok(p),
        Some(p) => Err(Error::Unsupported(format!(
            "x^{n} + x^{} + 1 is irreducible but not primitive (q = {}); use the non-primitive construction",
            p.l(),
            p.q()
        ))),
        None => Err(Error::Unsupported(format!("no irreducible trinomial of degree {n}"))),
    }
}

/// WPA in `2^n - 1` CX gates for `n` with a primitive trinomial.
pub fn synth_wpa_circular(n: usize) -> Result<Circuit> {
    if n == 1 {
        return Circuit::new(1, Topology::Circular);
    }
    let p = primitive_params(n)?;
    let cx = stream(n, p.k(), (1u64 << n) - 1).collect();
    Ok(Circuit::from_cx_trusted(n, Topology::Circular, cx))
}

/// [`synth_wpa_circular`] without its last `n` gates: SPA in the optimal
/// `2^n - n - 1` CX gates.
pub fn synth_spa_circular(n: usize) -> Result<Circuit> {
    if n == 1 {
        return Circuit::new(1, Topology::Circular);
    }
    let p = primitive_params(n)?;
    let cx = stream(n, p.k(), (1u64 << n) - n as u64 - 1).collect();
    Ok(Circuit::from_cx_trusted(n, Topology::Circular, cx))
}

/// Output of the staged construction for irreducible, non-primitive trinomials.
#[derive(Clone, Debug)]
pub struct StagedCircular {
    pub circuit: Circuit,
    pub params: TrinomialParams,
    pub seed: u64,
    /// Primitive element whose powers seed each stage.
    pub generator: F2Matrix,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CircularMetadata {
    pub l: usize,
    pub k: usize,
    pub r: u64,
    pub q: u64,
    pub seed: u64,
}

impl StagedCircular {
    pub fn metadata(&self) -> CircularMetadata {
        CircularMetadata {
            l: self.params.l(),
            k: self.params.k(),
            r: self.params.r(),
            q: self.params.q(),
            seed: self.seed,
        }
    }
}

/// SPA for `n` whose trinomial has root order `r < 2^n - 1`.
///
/// For `s = 0..q`, the wires are first brought to the rows of `G^s` (a
/// nearest-neighbor transition, skipped for `s = 0`), then `r` steps of the
/// gate stream run. Total length is at most `q·r + (q - 1)·2n²`.
pub fn synth_circular_nonprimitive(n: usize, seed: u64) -> Result<StagedCircular> {
    let params = find_circular_params(n)?
        .ok_or_else(|| Error::Unsupported(format!("no irreducible trinomial of degree {n}")))?;
    let state = CompanionState::new(&params, seed)?;
    let mut cx: Vec<(usize, usize)> = Vec::new();
    let mut current = F2Matrix::identity(n);
    let mut g_pow = F2Matrix::identity(n);
    for s in 0..params.q() {
        if s > 0 {
            g_pow = g_pow.mul(&state.g)?;
            cx.extend(transition_cx(&current, &g_pow)?);
        }
        cx.extend(stream(n, params.k(), params.r()));
        let sofar = Circuit::from_cx_trusted(n, Topology::Circular, cx.clone());
        current = final_signatures(&sofar).to_matrix();
    }
    Ok(StagedCircular {
        circuit: Circuit::from_cx_trusted(n, Topology::Circular, cx),
        params,
        seed,
        generator: state.g,
    })
}

/// [`synth_circular_nonprimitive`] followed by the cheapest return to a
/// cyclically shifted standard basis.
pub fn synth_wpa_circular_nonprimitive(n: usize, seed: u64) -> Result<StagedCircular> {
    let mut staged = synth_circular_nonprimitive(n, seed)?;
    let fin = final_signatures(&staged.circuit).to_matrix();
    let mut cx = staged.circuit.cx_pairs();
    cx.extend(cheapest_cyclic_fixup(&fin)?);
    staged.circuit = Circuit::from_cx_trusted(n, Topology::Circular, cx);
    Ok(staged)
}

/// Appends a nearest-neighbor return to the standard basis.
pub(crate) fn close_to_identity(c: &Circuit) -> Result<Circuit> {
    let n = c.n();
    let fin = final_signatures(c).to_matrix();
    let mut cx = c.cx_pairs();
    cx.extend(transition_cx(&fin, &F2Matrix::identity(n))?);
    Circuit::from_cx(n, c.topology().clone(), &cx)
}
