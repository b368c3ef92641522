//! CX skeletons that visit every nonzero wire signature, per topology and variant.

pub mod circular;
pub mod full;
pub mod linear;

use crate::circuit::{Circuit, Topology, Variant};
use crate::error::{Error, Result};
use crate::f2::{check_wires, find_circular_params};
use circular::CircularMetadata;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SynthOptions {
    /// Two-CX rotation step in the linear SPA construction.
    pub swap_opt: bool,
    /// Seed for the primitive-element search of the staged circular construction.
    pub seed: u64,
    /// Use the linear constructions on a circle without a usable trinomial.
    pub fallback_linear: bool,
}

#[derive(Clone, Debug)]
pub struct Synthesis {
    pub circuit: Circuit,
    /// Short name of the construction that produced the circuit.
    pub construction: &'static str,
    pub circular: Option<CircularMetadata>,
}

impl Synthesis {
    fn plain(circuit: Circuit, construction: &'static str) -> Self {
        Self { circuit, construction, circular: None }
    }
}

/// Builds the CX skeleton for `variant` on `topology` with `n` wires.
pub fn synthesize(variant: Variant, topology: &Topology, n: usize, opts: SynthOptions) -> Result<Synthesis> {
    check_wires(n)?;
    match topology {
        Topology::Full => {
            let c = match variant {
                Variant::Spa => full::synth_spa_full(n)?,
                Variant::Wpa => full::synth_wpa_full(n)?,
                Variant::Npa => full::synth_npa_full(n)?,
            };
            Ok(Synthesis::plain(c, "full-gray"))
        }
        Topology::Linear => Ok(Synthesis::plain(linear_for(variant, n, opts)?, "linear-gray")),
        Topology::Circular => synthesize_circular(variant, n, opts),
        Topology::Custom(_) => {
            Err(Error::Unsupported("no construction for custom topologies; use `search` for small n".into()))
        }
    }
}

fn linear_for(variant: Variant, n: usize, opts: SynthOptions) -> Result<Circuit> {
    match variant {
        Variant::Spa => linear::synth_spa_linear(n, opts.swap_opt),
        Variant::Wpa => linear::synth_wpa_linear(n),
        Variant::Npa => linear::synth_npa_linear(n),
    }
}

fn synthesize_circular(variant: Variant, n: usize, opts: SynthOptions) -> Result<Synthesis> {
    if n == 1 {
        return Ok(Synthesis::plain(Circuit::new(1, Topology::Circular)?, "trivial"));
    }
    let Some(params) = find_circular_params(n)? else {
        if opts.fallback_linear {
            let c = linear_for(variant, n, opts)?.with_topology(Topology::Circular)?;
            return Ok(Synthesis::plain(c, "linear-fallback"));
        }
        return Err(Error::Unsupported(format!(
            "no irreducible trinomial x^{n} + x^l + 1 with gcd(l, {n}) = 1 exists; \
             rerun with `--fallback linear` to embed the linear construction in the circle"
        )));
    };
    if params.is_primitive() {
        let c = match variant {
            Variant::Spa => circular::synth_spa_circular(n)?,
            Variant::Wpa => circular::synth_wpa_circular(n)?,
            Variant::Npa => circular::close_to_identity(&circular::synth_wpa_circular(n)?)?,
        };
        let md = CircularMetadata { l: params.l(), k: params.k(), r: params.r(), q: params.q(), seed: opts.seed };
        return Ok(Synthesis { circuit: c, construction: "circular-primitive", circular: Some(md) });
    }
    let staged = match variant {
        Variant::Spa => circular::synth_circular_nonprimitive(n, opts.seed)?,
        Variant::Wpa => circular::synth_wpa_circular_nonprimitive(n, opts.seed)?,
        Variant::Npa => {
            let mut s = circular::synth_circular_nonprimitive(n, opts.seed)?;
            s.circuit = circular::close_to_identity(&s.circuit)?;
            s
        }
    };
    let md = staged.metadata();
    Ok(Synthesis { circuit: staged.circuit, construction: "circular-staged", circular: Some(md) })
}
