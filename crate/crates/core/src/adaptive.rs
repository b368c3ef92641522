//! Operator-specific CX reduction.
//!
//! A signature whose angle vanishes needs no phase gate, so the skeleton only
//! has to visit the remaining ones. [`synth_skipping`] searches for such a
//! shorter enumeration; [`generate_symmetries`] fills in phases of states the
//! input never occupies so that as many angles as possible vanish.

use std::cmp::Reverse;
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap};

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::angles::{compute_theta, AngleVector, PhaseTargets};
use crate::circuit::{check_variant, Circuit, Topology, Variant};
use crate::error::{Error, Result};
use crate::f2::{check_wires, parity, SigVec};
use crate::synth::{synthesize, SynthOptions};

pub const DEFAULT_EPSILON: f64 = 1e-9;
pub const NODE_BUDGET: usize = 1_000_000;
/// Largest `n` for which [`synth_skipping`] searches; beyond it the general
/// construction is returned.
pub const MAX_SEARCH_WIRES: usize = 6;

/// Signatures whose angle is below `epsilon` in magnitude. Never contains 0.
#[derive(Clone, Debug, PartialEq)]
pub struct SkipSet {
    n: usize,
    set: Vec<SigVec>,
    epsilon: f64,
}

impl SkipSet {
    pub fn new(n: usize, mut set: Vec<SigVec>, epsilon: f64) -> Result<Self> {
        check_wires(n)?;
        if epsilon.is_nan() || epsilon < 0.0 {
            return Err(Error::Invalid(format!("epsilon must be non-negative, got {epsilon}")));
        }
        for v in &set {
            if v.dim() != n {
                return Err(Error::Dimension { expected: n, actual: v.dim() });
            }
            if v.is_zero() {
                return Err(Error::Invalid("the zero signature cannot be skipped".into()));
            }
        }
        set.sort();
        set.dedup();
        Ok(Self { n, set, epsilon })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, Vec::new(), 0.0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn signatures(&self) -> &[SigVec] {
        &self.set
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn contains(&self, v: SigVec) -> bool {
        self.set.binary_search(&v).is_ok()
    }
}

/// Exactly the signatures with `|θ| < epsilon`.
pub fn discover_skip_set(theta: &AngleVector, epsilon: f64) -> Result<SkipSet> {
    let set = theta.iter().filter(|&(_, x)| x.abs() < epsilon).map(|(v, _)| v).collect();
    SkipSet::new(theta.n(), set, epsilon)
}

/// True if `c` visits every nonzero signature outside `skip`.
pub fn covers_outside(c: &Circuit, skip: &SkipSet) -> bool {
    c.n() == skip.n() && check_variant(c, Variant::Spa).missing.iter().all(|&v| skip.contains(v))
}

/// The general SPA skeleton for `topology`, with the linear construction
/// standing in on circles without a usable trinomial.
pub fn general_spa(topology: &Topology, n: usize) -> Result<Circuit> {
    let opts = SynthOptions { swap_opt: true, fallback_linear: true, ..Default::default() };
    Ok(synthesize(Variant::Spa, topology, n, opts)?.circuit)
}

#[derive(Clone, Copy)]
struct Node {
    rows: u64,
    remaining: u64,
    g: u32,
    parent: u32,
    edge: u16,
}

enum Found {
    Path(Vec<(usize, usize)>),
    Exhausted,
    NoneShorter,
}

/// Best-first search for a CX list shorter than `bound` that visits every
/// signature in `required`. `greedy` orders by remaining count only.
fn skip_search(n: usize, edges: &[(usize, usize)], required: u64, bound: u32, greedy: bool, budget: usize) -> Found {
    let width = n as u32;
    let mask = (1u64 << width) - 1;
    let row = |rows: u64, k: usize| (rows >> (width * k as u32)) & mask;
    let start_rows = (0..n).fold(0u64, |acc, k| acc | (1u64 << k) << (width * k as u32));
    let start_remaining = (0..n).fold(required, |acc, k| acc & !(1u64 << (1u64 << k)));

    let mut nodes = vec![Node { rows: start_rows, remaining: start_remaining, g: 0, parent: u32::MAX, edge: 0 }];
    let mut best: HashMap<(u64, u64), u32> = HashMap::new();
    best.insert((start_rows, start_remaining), 0);
    let mut heap = BinaryHeap::new();
    let key = |g: u32, h: u32, seq: u32| if greedy { Reverse((h, g, seq)) } else { Reverse((g + h, h, seq)) };
    heap.push(key(0, start_remaining.count_ones(), 0));
    let mut expanded = 0usize;

    while let Some(Reverse((_, _, idx))) = heap.pop() {
        let node = nodes[idx as usize];
        if best.get(&(node.rows, node.remaining)).is_some_and(|&g| g < node.g) {
            continue;
        }
        if node.remaining == 0 {
            let mut path = Vec::with_capacity(node.g as usize);
            let mut i = idx;
            while nodes[i as usize].parent != u32::MAX {
                path.push(edges[nodes[i as usize].edge as usize]);
                i = nodes[i as usize].parent;
            }
            path.reverse();
            return Found::Path(path);
        }
        expanded += 1;
        if expanded > budget {
            return Found::Exhausted;
        }
        let g = node.g + 1;
        for (e, &(c, t)) in edges.iter().enumerate() {
            let new_row = row(node.rows, t) ^ row(node.rows, c);
            let rows = node.rows ^ (row(node.rows, c) << (width * t as u32));
            let remaining = node.remaining & !(1u64 << new_row);
            let h = remaining.count_ones();
            if g + h >= bound {
                continue;
            }
            match best.entry((rows, remaining)) {
                Entry::Occupied(mut o) if *o.get() > g => {
                    o.insert(g);
                }
                Entry::Occupied(_) => continue,
                Entry::Vacant(v) => {
                    v.insert(g);
                }
            }
            let seq = nodes.len() as u32;
            nodes.push(Node { rows, remaining, g, parent: idx, edge: e as u16 });
            heap.push(key(g, h, seq));
        }
    }
    Found::NoneShorter
}

/// CX skeleton visiting every nonzero signature outside `skip` (visiting
/// members of `skip` is allowed), never longer than [`general_spa`].
///
/// For `n <= 6` an A* search with the admissible remaining-count heuristic runs
/// under a node budget, then a greedy best-first pass if the budget runs out.
/// Only results strictly shorter than the general construction replace it.
pub fn synth_skipping(skip: &SkipSet, topology: &Topology, n: usize) -> Result<Circuit> {
    if skip.n() != n {
        return Err(Error::Dimension { expected: n, actual: skip.n() });
    }
    let general = match topology {
        Topology::Custom(_) => None,
        t => Some(general_spa(t, n)?),
    };
    if skip.is_empty() || n > MAX_SEARCH_WIRES {
        return general.ok_or_else(|| Error::Unsupported("custom topology needs n <= 6 for skip search".into()));
    }
    let mut edges = topology.directed_edges(n);
    edges.sort_unstable();
    let required =
        (1..1u64 << n).filter(|&b| !skip.contains(SigVec::from_raw(b as u32, n))).fold(0u64, |acc, b| acc | 1u64 << b);
    let bound = general.as_ref().map_or(u32::MAX, |g| g.cx_count() as u32);
    let found = match skip_search(n, &edges, required, bound, false, NODE_BUDGET) {
        Found::Exhausted => skip_search(n, &edges, required, bound, true, NODE_BUDGET),
        other => other,
    };
    match (found, general) {
        (Found::Path(cx), _) => Ok(Circuit::from_cx_trusted(n, topology.clone(), cx)),
        (_, Some(g)) => Ok(g),
        (_, None) => Err(Error::Unsupported("skip search found no enumeration within budget".into())),
    }
}

/// Completes phases given only on `support` so that `2^n - 1 - |support|`
/// angles vanish.
///
/// Candidate zero angles are taken in descending Hamming weight (ties by
/// descending value); a candidate is kept when its coefficients over the free
/// phases are independent of those already kept. The resulting square system
/// is solved exactly; phases on `support` are copied through unchanged.
///
/// The ordering is a heuristic: other independent choices leave different
/// zero sets and can lead to shorter skeletons, which [`best_symmetries`]
/// explores.
pub fn generate_symmetries(support: &[usize], alpha_on_support: &[f64], n: usize) -> Result<PhaseTargets> {
    let mut order: Vec<usize> = (1..1usize << n).collect();
    order.sort_by_key(|&k| Reverse((k.count_ones(), k)));
    generate_with_order(support, alpha_on_support, n, &order)
}

fn generate_with_order(support: &[usize], alpha_on_support: &[f64], n: usize, order: &[usize]) -> Result<PhaseTargets> {
    check_wires(n)?;
    let size = 1usize << n;
    if support.is_empty() {
        return Err(Error::Invalid("support must be nonempty".into()));
    }
    if support.len() != alpha_on_support.len() {
        return Err(Error::Dimension { expected: support.len(), actual: alpha_on_support.len() });
    }
    let mut in_support = vec![false; size];
    for &s in support {
        if s == 0 || s >= size || in_support[s] {
            return Err(Error::Invalid(format!("support entry {s} is zero, out of range or repeated")));
        }
        in_support[s] = true;
    }
    let mut alpha = vec![0.0; size];
    for (&s, &a) in support.iter().zip(alpha_on_support) {
        alpha[s] = a;
    }
    let free: Vec<usize> = (1..size).filter(|&b| !in_support[b]).collect();
    let f = free.len();
    if f == 0 {
        return PhaseTargets::new(alpha);
    }
    // θ_k = -(Hα)_k / 2^{n-1}; the common scale does not affect which angles vanish
    let sign = |k: usize, b: usize| if parity((k & b) as u32) { -1.0 } else { 1.0 };

    let mut chosen: Vec<usize> = Vec::with_capacity(f);
    let mut reduced: Vec<(usize, Vec<f64>)> = Vec::with_capacity(f);
    for &k in order {
        if chosen.len() == f {
            break;
        }
        let mut r: Vec<f64> = free.iter().map(|&b| sign(k, b)).collect();
        for (pivot, row) in &reduced {
            let factor = r[*pivot] / row[*pivot];
            if factor != 0.0 {
                for (x, y) in r.iter_mut().zip(row) {
                    *x -= factor * y;
                }
            }
        }
        let Some(pivot) = (0..f).max_by(|&a, &b| r[a].abs().total_cmp(&r[b].abs())) else { break };
        if r[pivot].abs() > 1e-9 {
            chosen.push(k);
            reduced.push((pivot, r));
        }
    }
    if chosen.len() < f {
        return Err(Error::SymmetryExhausted);
    }
    let a = DMatrix::from_fn(f, f, |i, j| sign(chosen[i], free[j]));
    let rhs =
        DVector::from_iterator(f, chosen.iter().map(|&k| -support.iter().map(|&s| sign(k, s) * alpha[s]).sum::<f64>()));
    let x = a.lu().solve(&rhs).ok_or(Error::SymmetryExhausted)?;
    for (&b, &v) in free.iter().zip(x.iter()) {
        alpha[b] = v;
    }
    PhaseTargets::new(alpha)
}

/// A completed operator, its skip set and the skeleton that exploits it.
#[derive(Clone, Debug)]
pub struct SymmetryChoice {
    pub targets: PhaseTargets,
    pub skip: SkipSet,
    pub skeleton: Circuit,
}

/// Tries the default candidate order plus `tries` seeded shuffles of it and
/// keeps the completion whose skip-aware skeleton is shortest. Ties go to the
/// lexicographically smallest gate list, so the result does not depend on the
/// thread count.
pub fn best_symmetries(
    support: &[usize],
    alpha_on_support: &[f64],
    n: usize,
    topology: &Topology,
    tries: usize,
    seed: u64,
    epsilon: f64,
) -> Result<SymmetryChoice> {
    let mut base: Vec<usize> = (1..1usize << n).collect();
    base.sort_by_key(|&k| Reverse((k.count_ones(), k)));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut orders = vec![base.clone()];
    for _ in 0..tries {
        let mut o = base.clone();
        o.shuffle(&mut rng);
        orders.push(o);
    }
    let results: Vec<Result<SymmetryChoice>> = orders
        .par_iter()
        .map(|order| {
            let targets = generate_with_order(support, alpha_on_support, n, order)?;
            let skip = discover_skip_set(&compute_theta(&targets), epsilon)?;
            let skeleton = synth_skipping(&skip, topology, n)?;
            Ok(SymmetryChoice { targets, skip, skeleton })
        })
        .collect();
    let mut best: Option<SymmetryChoice> = None;
    let mut last_err = None;
    for r in results {
        match r {
            Ok(c) => {
                let better = best.as_ref().is_none_or(|b| {
                    (c.skeleton.cx_count(), c.skeleton.cx_pairs()) < (b.skeleton.cx_count(), b.skeleton.cx_pairs())
                });
                if better {
                    best = Some(c);
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    best.ok_or_else(|| last_err.unwrap_or(Error::SymmetryExhausted))
}
