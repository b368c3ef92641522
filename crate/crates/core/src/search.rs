//! Exact minimal CX counts for small `n` by IDA* over (wire signatures,
//! visited set).
//!
//! Every CX changes one wire and so adds at most one new signature. With `U`
//! unvisited signatures and `W` wires not yet in final form, a gate lowers
//! `U + W` by at most one, and the gate visiting the last new signature leaves
//! its target out of final form. Hence `U + max(W, [U > 0])` is admissible for
//! WPA and NPA, and `U` for SPA.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::{Circuit, Topology, Variant};
use crate::error::{Error, Result};
use crate::f2::check_wires;

/// Largest `n` the packed state supports (`2^n` visited bits in a `u64`).
pub const MAX_SEARCH_WIRES: usize = 6;

/// Transposition-table entries per root branch. Past this, states are no
/// longer recorded; pruning weakens but minimality is unaffected.
const TABLE_CAPACITY: usize = 1 << 22;

/// Analytic lower bound on the CX count: `2^n - n - 1` for SPA and `2^n - 2`
/// for WPA and NPA. Both hold on every topology, since restricting the
/// coupling graph only removes circuits.
pub fn verify_lower_bound(variant: Variant, _topology: &Topology, n: usize) -> usize {
    let size = 1usize << n;
    match variant {
        Variant::Spa => size - n - 1,
        Variant::Wpa | Variant::Npa => size - 2,
    }
}

struct Ctx<'a> {
    n: usize,
    width: u32,
    mask: u64,
    variant: Variant,
    edges: &'a [(usize, usize)],
    threshold: u32,
    // state -> smallest depth at which it was expanded under `threshold`
    seen: HashMap<(u64, u64), u32>,
    path: Vec<usize>,
    nodes: &'a AtomicU64,
    max_nodes: u64,
    aborted: &'a AtomicBool,
}

impl Ctx<'_> {
    fn row(&self, rows: u64, k: usize) -> u64 {
        (rows >> (self.width * k as u32)) & self.mask
    }

    fn wrong_wires(&self, rows: u64) -> u32 {
        (0..self.n)
            .filter(|&k| {
                let r = self.row(rows, k);
                match self.variant {
                    Variant::Spa => false,
                    Variant::Wpa => !r.is_power_of_two(),
                    Variant::Npa => r != 1 << k,
                }
            })
            .count() as u32
    }

    fn h(&self, rows: u64, unvisited: u64) -> u32 {
        let u = unvisited.count_ones();
        match self.variant {
            Variant::Spa => u,
            _ => u + self.wrong_wires(rows).max(u32::from(u > 0)),
        }
    }

    fn dfs(&mut self, rows: u64, unvisited: u64, g: u32) -> bool {
        let h = self.h(rows, unvisited);
        if h == 0 {
            return true;
        }
        if g + h > self.threshold {
            return false;
        }
        let full = self.seen.len() >= TABLE_CAPACITY;
        match self.seen.get_mut(&(rows, unvisited)) {
            Some(prev) if *prev <= g => return false,
            Some(prev) => *prev = g,
            None if !full => {
                self.seen.insert((rows, unvisited), g);
            }
            None => {}
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.max_nodes {
            self.aborted.store(true, Ordering::Relaxed);
        }
        if self.aborted.load(Ordering::Relaxed) {
            return false;
        }
        for e in 0..self.edges.len() {
            let (c, t) = self.edges[e];
            let rc = self.row(rows, c);
            let next_rows = rows ^ (rc << (self.width * t as u32));
            let next_unvisited = unvisited & !(1u64 << self.row(next_rows, t));
            self.path.push(e);
            if self.dfs(next_rows, next_unvisited, g + 1) {
                return true;
            }
            self.path.pop();
        }
        false
    }
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out
}

/// Wire permutations mapping the directed edge set onto itself.
fn automorphisms(edges: &[(usize, usize)], n: usize) -> Vec<Vec<usize>> {
    let set: std::collections::HashSet<_> = edges.iter().copied().collect();
    all_permutations(n).into_iter().filter(|p| edges.iter().all(|&(a, b)| set.contains(&(p[a], p[b])))).collect()
}

/// One root gate per orbit under the topology's automorphisms; conjugating a
/// circuit by an automorphism preserves every variant's acceptance.
fn root_representatives(edges: &[(usize, usize)], n: usize) -> Vec<usize> {
    let autos = automorphisms(edges, n);
    (0..edges.len())
        .filter(|&e| {
            let (a, b) = edges[e];
            autos.iter().all(|p| (p[a], p[b]) >= (a, b))
        })
        .collect()
}

/// Minimal CX count and a witness circuit for `variant` on `topology`, trying
/// thresholds up to `depth_budget`.
///
/// Witnesses are deterministic: root branches are explored in parallel but the
/// lowest-indexed successful root wins, and each branch tries gates in
/// lexicographic `(control, target)` order.
pub fn exact_min(variant: Variant, topology: &Topology, n: usize, depth_budget: usize) -> Result<(usize, Circuit)> {
    exact_min_limited(variant, topology, n, depth_budget, u64::MAX)
}

/// [`exact_min`] that also gives up after expanding `max_nodes` states.
pub fn exact_min_limited(
    variant: Variant,
    topology: &Topology,
    n: usize,
    depth_budget: usize,
    max_nodes: u64,
) -> Result<(usize, Circuit)> {
    check_wires(n)?;
    if n > MAX_SEARCH_WIRES {
        return Err(Error::Unsupported(format!("exact search supports n <= {MAX_SEARCH_WIRES}")));
    }
    let mut edges = topology.directed_edges(n);
    edges.sort_unstable();
    let width = n as u32;
    let start_rows = (0..n).fold(0u64, |acc, k| acc | (1u64 << k) << (width * k as u32));
    let start_unvisited = (1..1u64 << n).filter(|b| !b.is_power_of_two()).fold(0u64, |acc, b| acc | 1 << b);
    let nodes = AtomicU64::new(0);
    let aborted = AtomicBool::new(false);
    let make_ctx = |threshold| Ctx {
        n,
        width,
        mask: (1u64 << width) - 1,
        variant,
        edges: &edges,
        threshold,
        seen: HashMap::new(),
        path: Vec::new(),
        nodes: &nodes,
        max_nodes,
        aborted: &aborted,
    };

    let probe = make_ctx(0);
    let h0 = probe.h(start_rows, start_unvisited);
    if h0 == 0 {
        return Ok((0, Circuit::new(n, topology.clone())?));
    }
    if edges.is_empty() {
        return Err(Error::BudgetExceeded { budget: depth_budget });
    }
    let roots = root_representatives(&edges, n);
    let first = (h0 as usize).max(verify_lower_bound(variant, topology, n));
    for threshold in first..=depth_budget {
        let found: Vec<Option<Vec<usize>>> = roots
            .par_iter()
            .map(|&e| {
                let mut ctx = make_ctx(threshold as u32);
                let (c, t) = edges[e];
                let rows = start_rows ^ (ctx.row(start_rows, c) << (width * t as u32));
                let unvisited = start_unvisited & !(1u64 << ctx.row(rows, t));
                ctx.path.push(e);
                ctx.dfs(rows, unvisited, 1).then_some(ctx.path)
            })
            .collect();
        // A witness at this threshold is minimal even if another root was cut off.
        if let Some(path) = found.into_iter().flatten().next() {
            let cx: Vec<_> = path.into_iter().map(|e| edges[e]).collect();
            let len = cx.len();
            return Ok((len, Circuit::from_cx(n, topology.clone(), &cx)?));
        }
        if aborted.load(Ordering::Relaxed) {
            return Err(Error::NodeLimit { nodes: max_nodes });
        }
    }
    Err(Error::BudgetExceeded { budget: depth_budget })
}

/// Best known CX count for one cell of the reference table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum KnownCount {
    /// Proven optimal.
    Exact(usize),
    /// Upper bound from heuristic optimization.
    AtMost(usize),
}

impl std::fmt::Display for KnownCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KnownCount::Exact(v) => write!(f, "{v}"),
            KnownCount::AtMost(v) => write!(f, "<={v}"),
        }
    }
}

const TOPOLOGY_COLUMNS: [&str; 3] = ["full", "linear", "circular"];

/// Best known counts for `n = 2..=8`; columns are full, linear, circular, each
/// split into SPA, WPA, NPA.
const KNOWN: [[(usize, bool); 9]; 7] = {
    const fn e(v: usize) -> (usize, bool) {
        (v, true)
    }
    const fn u(v: usize) -> (usize, bool) {
        (v, false)
    }
    [
        [e(1), e(2), e(2), e(1), e(2), e(2), e(1), e(2), e(2)],
        [e(4), e(6), e(6), e(5), e(7), e(8), e(4), e(6), e(6)],
        [e(11), e(14), e(14), e(14), e(17), e(18), e(11), e(14), e(16)],
        [e(26), e(30), e(30), e(31), e(37), e(40), e(26), u(31), u(35)],
        [e(57), e(62), e(62), u(69), u(80), u(86), e(57), u(63), u(73)],
        [e(120), e(126), e(126), u(150), u(172), u(178), e(120), u(127), u(147)],
        [e(247), e(254), e(254), u(327), u(355), u(390), u(267), u(299), u(317)],
    ]
};

/// Best known count for `(variant, topology, n)`, for `2 <= n <= 8` on the
/// full, linear and circular topologies.
pub fn known_count(variant: Variant, topology: &Topology, n: usize) -> Option<KnownCount> {
    if !(2..=8).contains(&n) {
        return None;
    }
    let col = TOPOLOGY_COLUMNS.iter().position(|&t| t == topology.kind())?;
    let v = match variant {
        Variant::Spa => 0,
        Variant::Wpa => 1,
        Variant::Npa => 2,
    };
    let (value, exact) = KNOWN[n - 2][3 * col + v];
    Some(if exact { KnownCount::Exact(value) } else { KnownCount::AtMost(value) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::check_variant;

    const TOPOLOGIES: [Topology; 3] = [Topology::Full, Topology::Linear, Topology::Circular];

    #[test]
    fn lower_bounds() {
        assert_eq!(verify_lower_bound(Variant::Spa, &Topology::Linear, 4), 11);
        assert_eq!(verify_lower_bound(Variant::Wpa, &Topology::Full, 5), 30);
        assert_eq!(verify_lower_bound(Variant::Npa, &Topology::Circular, 1), 0);
    }

    #[test]
    fn trivial_sizes() {
        for v in Variant::ALL {
            let (len, c) = exact_min(v, &Topology::Full, 1, 5).unwrap();
            assert_eq!((len, c.cx_count()), (0, 0));
        }
    }

    #[test]
    fn small_cells_match_known_counts() {
        for n in 2..=3 {
            for t in &TOPOLOGIES {
                for v in Variant::ALL {
                    let (len, c) = exact_min(v, t, n, 20).unwrap();
                    assert_eq!(Some(KnownCount::Exact(len)), known_count(v, t, n), "{v} {t} n={n}");
                    assert_eq!(c.cx_count(), len);
                    assert!(check_variant(&c, v).pass);
                    assert!(len >= verify_lower_bound(v, t, n));
                }
            }
        }
    }

    #[test]
    fn witnesses_are_deterministic() {
        let a = exact_min(Variant::Npa, &Topology::Linear, 3, 20).unwrap();
        let b = exact_min(Variant::Npa, &Topology::Linear, 3, 20).unwrap();
        assert_eq!(a.1, b.1);
    }

    #[test]
    fn budget_is_reported() {
        assert_eq!(exact_min(Variant::Npa, &Topology::Linear, 3, 7).unwrap_err(), Error::BudgetExceeded { budget: 7 });
        assert!(matches!(exact_min(Variant::Spa, &Topology::Full, 7, 200), Err(Error::Unsupported(_))));
        assert_eq!(
            exact_min_limited(Variant::Npa, &Topology::Linear, 4, 30, 1000).unwrap_err(),
            Error::NodeLimit { nodes: 1000 }
        );
    }

    #[test]
    fn custom_topology_search() {
        // a star on 3 wires is the line 1-0-2
        let star = Topology::custom([(0, 1), (0, 2)]).unwrap();
        assert_eq!(exact_min(Variant::Spa, &star, 3, 20).unwrap().0, 5);
    }

    #[test]
    fn root_orbits() {
        let full = Topology::Full.directed_edges(4);
        assert_eq!(root_representatives(&full, 4).len(), 1);
        let mut lin = Topology::Linear.directed_edges(4);
        lin.sort_unstable();
        assert_eq!(root_representatives(&lin, 4).len(), 3);
        let mut circ = Topology::Circular.directed_edges(5);
        circ.sort_unstable();
        assert_eq!(root_representatives(&circ, 5).len(), 1);
    }

    #[test]
    fn known_table_lookup() {
        assert_eq!(known_count(Variant::Spa, &Topology::Linear, 8), Some(KnownCount::AtMost(327)));
        assert_eq!(known_count(Variant::Npa, &Topology::Circular, 4), Some(KnownCount::Exact(16)));
        assert_eq!(known_count(Variant::Spa, &Topology::Full, 9), None);
    }
}
