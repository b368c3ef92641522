//! Circuit IR over CX and phase gates, the wire-signature simulator and the
//! variant verifier.
//!
//! Time counts CX gates only: a circuit with `c` CX gates has times `0..=c`, and
//! a phase gate sitting after the `t`-th CX acts at time `t`.

mod json;
mod phases;
mod trace;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::f2::{check_wires, SigVec};

pub use phases::{
    merge_phase_gates, phase_distance, phase_profile, phase_profile_all, place_phases, place_phases_covering,
};
pub use trace::{
    check_variant, final_permutation, final_signatures, simulate_signatures, visited_signatures, SignatureTrace,
    Variant, VariantReport,
};

/// Allowed CX placements.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Topology {
    Full,
    Linear,
    Circular,
    /// Unordered wire pairs, stored as `(min, max)`.
    Custom(BTreeSet<(usize, usize)>),
}

impl Topology {
    pub fn custom(edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::SelfLoop { control: a, target: b });
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Topology::Custom(set))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Topology::Full => "full",
            Topology::Linear => "linear",
            Topology::Circular => "circular",
            Topology::Custom(_) => "custom",
        }
    }

    /// Whether `CX(a, b)` is allowed on `n` wires.
    pub fn allows(&self, a: usize, b: usize, n: usize) -> bool {
        if a == b || a >= n || b >= n {
            return false;
        }
        match self {
            Topology::Full => true,
            Topology::Linear => a.abs_diff(b) == 1,
            Topology::Circular => (a + 1) % n == b || (b + 1) % n == a,
            Topology::Custom(edges) => edges.contains(&(a.min(b), a.max(b))),
        }
    }

    /// All allowed ordered pairs `(control, target)`, lexicographically sorted.
    pub fn directed_edges(&self, n: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.allows(a, b, n) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Whether every CX allowed by `self` is also allowed by `other`.
    pub fn embeds_into(&self, other: &Topology, n: usize) -> bool {
        self.directed_edges(n).into_iter().all(|(a, b)| other.allows(a, b, n))
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind())
    }
}

impl FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Topology::Full),
            "linear" => Ok(Topology::Linear),
            "circular" => Ok(Topology::Circular),
            other => Err(Error::Invalid(format!("unknown topology '{other}' (expected full, linear or circular)"))),
        }
    }
}

/// A phase-gate angle: a number in radians, or a reference to the parameter θ_v
/// of signature `v`, to be bound later.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum Angle {
    Value(f64),
    Sym(SigVec),
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub enum Gate {
    Cx { control: usize, target: usize },
    Phase { wire: usize, angle: Angle },
}

impl Gate {
    pub fn cx(control: usize, target: usize) -> Gate {
        Gate::Cx { control, target }
    }

    pub fn phase(wire: usize, theta: f64) -> Gate {
        Gate::Phase { wire, angle: Angle::Value(theta) }
    }

    pub fn is_cx(&self) -> bool {
        matches!(self, Gate::Cx { .. })
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Circuit {
    n: usize,
    topology: Topology,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize, topology: Topology) -> Result<Self> {
        check_wires(n)?;
        if let Topology::Custom(edges) = &topology {
            if let Some(&(_, b)) = edges.iter().find(|&&(_, b)| b >= n) {
                return Err(Error::WireOutOfRange { wire: b, n });
            }
        }
        Ok(Self { n, topology, gates: Vec::new() })
    }

    pub fn from_gates(n: usize, topology: Topology, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Self::new(n, topology)?;
        c.gates.reserve(gates.len());
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn from_cx(n: usize, topology: Topology, cx: &[(usize, usize)]) -> Result<Self> {
        Self::from_gates(n, topology, cx.iter().map(|&(c, t)| Gate::cx(c, t)).collect())
    }

    /// Wraps a CX list produced by a construction known to respect `topology`.
    pub(crate) fn from_cx_trusted(n: usize, topology: Topology, cx: Vec<(usize, usize)>) -> Self {
        debug_assert!(cx.iter().all(|&(c, t)| topology.allows(c, t, n)));
        Self { n, topology, gates: cx.into_iter().map(|(c, t)| Gate::cx(c, t)).collect() }
    }

    pub(crate) fn from_gates_trusted(n: usize, topology: Topology, gates: Vec<Gate>) -> Self {
        Self { n, topology, gates }
    }

    fn check_gate(&self, g: &Gate) -> Result<()> {
        match *g {
            Gate::Cx { control, target } => {
                for w in [control, target] {
                    if w >= self.n {
                        return Err(Error::WireOutOfRange { wire: w, n: self.n });
                    }
                }
                if control == target {
                    return Err(Error::SelfLoop { control, target });
                }
                if !self.topology.allows(control, target, self.n) {
                    return Err(Error::TopologyViolation { control, target, topology: self.topology.to_string() });
                }
            }
            Gate::Phase { wire, angle } => {
                if wire >= self.n {
                    return Err(Error::WireOutOfRange { wire, n: self.n });
                }
                match angle {
                    Angle::Sym(v) if v.dim() != self.n => {
                        return Err(Error::Dimension { expected: self.n, actual: v.dim() })
                    }
                    Angle::Sym(v) if v.is_zero() => {
                        return Err(Error::Invalid("phase references the zero signature".into()))
                    }
                    Angle::Value(x) if !x.is_finite() => return Err(Error::Invalid(format!("non-finite angle {x}"))),
                    _ => {}
                }
            }
        }
        Ok(())
    }

    pub fn push(&mut self, g: Gate) -> Result<()> {
        self.check_gate(&g)?;
        self.gates.push(g);
        Ok(())
    }

    pub fn cx(&mut self, control: usize, target: usize) -> Result<()> {
        self.push(Gate::cx(control, target))
    }

    pub fn phase(&mut self, wire: usize, angle: Angle) -> Result<()> {
        self.push(Gate::Phase { wire, angle })
    }

    /// Appends all gates of `other`, which must have the same wire count.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n != self.n {
            return Err(Error::Dimension { expected: self.n, actual: other.n });
        }
        for g in &other.gates {
            self.push(*g)?;
        }
        Ok(())
    }

    /// The same gates checked against a different topology.
    pub fn with_topology(&self, topology: Topology) -> Result<Circuit> {
        Circuit::from_gates(self.n, topology, self.gates.clone())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn into_gates(self) -> Vec<Gate> {
        self.gates
    }

    pub fn cx_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_cx()).count()
    }

    pub fn phase_count(&self) -> usize {
        self.gates.len() - self.cx_count()
    }

    /// The CX gates in order, as `(control, target)`.
    pub fn cx_pairs(&self) -> Vec<(usize, usize)> {
        self.gates
            .iter()
            .filter_map(|g| match *g {
                Gate::Cx { control, target } => Some((control, target)),
                Gate::Phase { .. } => None,
            })
            .collect()
    }

    /// The CX skeleton with all phase gates removed.
    pub fn skeleton(&self) -> Circuit {
        Circuit {
            n: self.n,
            topology: self.topology.clone(),
            gates: self.gates.iter().copied().filter(Gate::is_cx).collect(),
        }
    }

    pub fn is_cx_only(&self) -> bool {
        self.gates.iter().all(Gate::is_cx)
    }

    pub fn has_symbolic_angles(&self) -> bool {
        self.gates.iter().any(|g| matches!(g, Gate::Phase { angle: Angle::Sym(_), .. }))
    }
}
