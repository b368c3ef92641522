//! `diagsynth` command-line front end.
//!
//! Exit codes: 0 success, 2 invalid input or failed verification, 3
//! unsupported configuration, 4 search budget exceeded.

mod manifest;
mod qasm;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use diagsynth::adaptive::{best_symmetries, discover_skip_set, general_spa, synth_skipping, DEFAULT_EPSILON};
use diagsynth::angles::{bind_angles, compute_theta, PhaseTargets};
use diagsynth::circuit::{check_variant, phase_distance, phase_profile_all, place_phases, place_phases_covering};
use diagsynth::search::{exact_min, exact_min_limited, known_count, verify_lower_bound};
use diagsynth::synth::{synthesize, SynthOptions};
use diagsynth::{Circuit, Error, Topology, Variant};

const PHASE_TOLERANCE: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(name = "diagsynth", version, about = "Synthesize and verify CX+phase circuits for diagonal operators")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for search and adaptive optimization (0 = all cores).
    #[arg(long, global = true, env = "DIAGSYNTH_JOBS", default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a CX skeleton for a variant and topology.
    Synth(SynthArgs),
    /// Check a circuit against a variant, and optionally against target phases.
    Verify(VerifyArgs),
    /// Bind angles computed from target phases to a skeleton.
    Angles(AnglesArgs),
    /// Skip signatures whose angles vanish.
    Adapt(AdaptArgs),
    /// Exact minimal CX count for small n.
    Search(SearchArgs),
    /// Print a numeric circuit as OpenQASM 3.
    ExportQasm(ExportArgs),
    /// Best known counts next to searched and constructed ones.
    Table(TableArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum VariantArg {
    Spa,
    Wpa,
    Npa,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Spa => Variant::Spa,
            VariantArg::Wpa => Variant::Wpa,
            VariantArg::Npa => Variant::Npa,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum TopologyArg {
    Full,
    Linear,
    Circular,
    Custom,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Fallback {
    Linear,
}

/// Topology flag plus the edge list used by `custom`.
#[derive(clap::Args, Debug, Serialize)]
struct TopologyOpts {
    #[arg(long, value_enum)]
    topology: TopologyArg,
    /// Undirected edges for `--topology custom`, e.g. `0-1,1-2`.
    #[arg(long, value_delimiter = ',')]
    edges: Vec<String>,
}

impl TopologyOpts {
    fn resolve(&self) -> Result<Topology> {
        let t = match self.topology {
            TopologyArg::Full => Topology::Full,
            TopologyArg::Linear => Topology::Linear,
            TopologyArg::Circular => Topology::Circular,
            TopologyArg::Custom => {
                let edges = self
                    .edges
                    .iter()
                    .map(|e| {
                        let (a, b) = e.split_once('-').ok_or_else(|| anyhow!("edge '{e}' is not of the form a-b"))?;
                        Ok((a.trim().parse()?, b.trim().parse()?))
                    })
                    .collect::<Result<Vec<(usize, usize)>>>()?;
                Topology::custom(edges)?
            }
        };
        if !matches!(self.topology, TopologyArg::Custom) && !self.edges.is_empty() {
            bail!("--edges is only valid with --topology custom");
        }
        Ok(t)
    }
}

#[derive(clap::Args, Debug, Serialize)]
struct SynthArgs {
    #[arg(long, value_enum)]
    variant: VariantArg,
    #[command(flatten)]
    topology: TopologyOpts,
    #[arg(long)]
    n: usize,
    /// Rotate with 2 CX per step instead of a 3-CX swap (linear SPA).
    #[arg(long)]
    swap_opt: bool,
    /// Construction to embed when the circle has no usable trinomial.
    #[arg(long, value_enum)]
    fallback: Option<Fallback>,
    /// Check the variant before writing.
    #[arg(long)]
    verify: bool,
    /// Insert symbolic phase gates at first visits.
    #[arg(long)]
    phases: bool,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug, Serialize)]
struct VerifyArgs {
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long, value_enum)]
    variant: VariantArg,
    /// Target phases (JSON array of 2^n radians) to compare the phase profile against.
    #[arg(long)]
    alphas: Option<PathBuf>,
}

#[derive(clap::Args, Debug, Serialize)]
struct AnglesArgs {
    #[arg(long)]
    alphas: PathBuf,
    /// Skeleton, either CX-only or with symbolic phase gates.
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug, Serialize)]
struct AdaptArgs {
    #[arg(long)]
    alphas: PathBuf,
    #[command(flatten)]
    topology: TopologyOpts,
    /// Angles below this magnitude are treated as zero.
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    eps: f64,
    /// Basis states the input may occupy; other phases become free.
    #[arg(long, value_delimiter = ',')]
    support: Vec<usize>,
    /// Extra candidate orders tried when completing free phases.
    #[arg(long, default_value_t = 8)]
    tries: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug, Serialize)]
struct SearchArgs {
    #[arg(long, value_enum)]
    variant: VariantArg,
    #[command(flatten)]
    topology: TopologyOpts,
    #[arg(long)]
    n: usize,
    /// Largest CX count tried.
    #[arg(long, default_value_t = 24)]
    budget: usize,
    /// Give up after expanding this many search states.
    #[arg(long)]
    max_nodes: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug, Serialize)]
struct ExportArgs {
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug, Serialize)]
struct TableArgs {
    /// Largest n solved by exact search (at most 4).
    #[arg(long, default_value_t = 3)]
    search_max_n: usize,
    /// Largest n listed.
    #[arg(long, default_value_t = 8)]
    max_n: usize,
}

fn read_circuit(path: &Path) -> Result<Circuit> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Circuit::from_json(&text)?)
}

fn read_alphas(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{} is not a JSON array of numbers", path.display()))
}

fn max_phase_error(c: &Circuit, targets: &PhaseTargets) -> Result<f64> {
    if targets.n() != c.n() {
        return Err(Error::Dimension { expected: 1 << c.n(), actual: targets.alpha().len() }.into());
    }
    let profile = phase_profile_all(c)?;
    Ok(profile.iter().zip(targets.alpha()).map(|(p, a)| phase_distance(*p, *a)).fold(0.0, f64::max))
}

/// Prints to stdout; a closed pipe downstream is not an error.
fn print_out(text: &str) -> Result<()> {
    use std::io::Write;
    let mut lock = std::io::stdout().lock();
    match lock.write_all(text.as_bytes()).and_then(|()| lock.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

/// Writes to `out` with a manifest, or prints to stdout.
fn emit(
    out: &Option<PathBuf>,
    contents: &str,
    command: &str,
    flags: &impl Serialize,
    seed: u64,
    metadata: Option<serde_json::Value>,
) -> Result<()> {
    match out {
        Some(path) => manifest::write_with_manifest(path, contents, command, flags, seed, metadata),
        None => print_out(contents),
    }
}

fn cmd_synth(a: &SynthArgs, seed: u64) -> Result<()> {
    let topology = a.topology.resolve()?;
    let opts = SynthOptions { swap_opt: a.swap_opt, seed, fallback_linear: a.fallback.is_some() };
    let variant = Variant::from(a.variant);
    let s = synthesize(variant, &topology, a.n, opts)?;
    if a.verify {
        let report = check_variant(&s.circuit, variant);
        eprintln!("{}", report.summary());
        if !report.pass {
            bail!(Error::Invalid(format!("synthesized circuit fails {variant}")));
        }
    }
    let circuit = if a.phases { place_phases(&s.circuit)? } else { s.circuit };
    eprintln!("{} CX ({})", circuit.cx_count(), s.construction);
    let metadata = serde_json::json!({
        "construction": s.construction,
        "cx_count": circuit.cx_count(),
        "circular": s.circular,
    });
    emit(&a.out, &(circuit.to_json() + "\n"), "synth", a, seed, Some(metadata))
}

fn cmd_verify(a: &VerifyArgs) -> Result<()> {
    let c = read_circuit(&a.circuit)?;
    let report = check_variant(&c, a.variant.into());
    println!("{}", report.summary());
    let mut ok = report.pass;
    if let Some(path) = &a.alphas {
        let targets = PhaseTargets::new(read_alphas(path)?)?;
        let err = max_phase_error(&c, &targets)?;
        println!("max phase error: {err:.3e}");
        ok &= err < PHASE_TOLERANCE;
    }
    if !ok {
        bail!(Error::Invalid("verification failed".into()));
    }
    Ok(())
}

fn cmd_angles(a: &AnglesArgs, seed: u64) -> Result<()> {
    let c = read_circuit(&a.circuit)?;
    let targets = PhaseTargets::new(read_alphas(&a.alphas)?)?;
    if targets.n() != c.n() {
        bail!(Error::Dimension { expected: 1 << c.n(), actual: targets.alpha().len() });
    }
    let skeleton = if c.is_cx_only() {
        place_phases(&c)?
    } else if c.has_symbolic_angles() {
        c
    } else {
        bail!(Error::Invalid("circuit already has numeric angles".into()));
    };
    let bound = bind_angles(&skeleton, &compute_theta(&targets))?;
    let err = max_phase_error(&bound, &targets)?;
    eprintln!("max phase error: {err:.3e}");
    if err >= PHASE_TOLERANCE {
        bail!(Error::NotSpaComplete { missing: check_variant(&skeleton, Variant::Spa).missing.len() });
    }
    emit(&a.out, &(bound.to_json() + "\n"), "angles", a, seed, None)
}

#[derive(Serialize)]
struct AdaptReport {
    n: usize,
    skip_size: usize,
    general_cx: usize,
    cx: usize,
    saved: i64,
    max_phase_error: f64,
}

fn cmd_adapt(a: &AdaptArgs, seed: u64) -> Result<()> {
    let topology = a.topology.resolve()?;
    let raw = read_alphas(&a.alphas)?;
    let given = PhaseTargets::new(raw.clone())?;
    let n = given.n();
    let (targets, skip, skeleton) = if a.support.is_empty() {
        let theta = compute_theta(&given);
        let skip = discover_skip_set(&theta, a.eps)?;
        let sk = synth_skipping(&skip, &topology, n)?;
        (given, skip, sk)
    } else {
        let vals: Vec<f64> = a
            .support
            .iter()
            .map(|&s| raw.get(s).copied().ok_or_else(|| anyhow!("support state {s} out of range")))
            .collect::<Result<_>>()?;
        let choice = best_symmetries(&a.support, &vals, n, &topology, a.tries, seed, a.eps)?;
        (choice.targets, choice.skip, choice.skeleton)
    };
    let theta = compute_theta(&targets);
    let bound = bind_angles(&place_phases_covering(&skeleton, skip.signatures())?, &theta)?;
    let general_cx = match topology {
        Topology::Custom(_) => skeleton.cx_count(),
        ref t => general_spa(t, n)?.cx_count(),
    };
    let report = AdaptReport {
        n,
        skip_size: skip.len(),
        general_cx,
        cx: skeleton.cx_count(),
        saved: general_cx as i64 - skeleton.cx_count() as i64,
        max_phase_error: if a.support.is_empty() { max_phase_error(&bound, &targets)? } else { 0.0 },
    };
    eprintln!("{}", serde_json::to_string(&report)?);
    let metadata = serde_json::json!({ "report": report, "alpha": targets.alpha() });
    emit(&a.out, &(bound.to_json() + "\n"), "adapt", a, seed, Some(metadata))
}

fn cmd_search(a: &SearchArgs, seed: u64) -> Result<()> {
    let topology = a.topology.resolve()?;
    let variant = Variant::from(a.variant);
    let (len, c) = exact_min_limited(variant, &topology, a.n, a.budget, a.max_nodes.unwrap_or(u64::MAX))?;
    println!("length {len}");
    let metadata = serde_json::json!({
        "length": len,
        "lower_bound": verify_lower_bound(variant, &topology, a.n),
    });
    match &a.out {
        Some(_) => emit(&a.out, &(c.to_json() + "\n"), "search", a, seed, Some(metadata)),
        None => print_out(&(c.to_json() + "\n")),
    }
}

fn cmd_export(a: &ExportArgs, seed: u64) -> Result<()> {
    let c = read_circuit(&a.circuit)?;
    emit(&a.out, &qasm::to_qasm(&c)?, "export-qasm", a, seed, None)
}

fn cmd_table(a: &TableArgs, seed: u64) -> Result<()> {
    if a.search_max_n > 4 {
        bail!(Error::Unsupported("exact search in the table is limited to n <= 4".into()));
    }
    let mut text =
        format!("{:>2}  {:<9} {:<4} {:>6} {:>8} {:>12}\n", "n", "topology", "var", "known", "searched", "construction");
    let opts = SynthOptions { swap_opt: true, seed, fallback_linear: true };
    for n in 2..=a.max_n.min(8) {
        for t in [Topology::Full, Topology::Linear, Topology::Circular] {
            for v in [Variant::Spa, Variant::Wpa, Variant::Npa] {
                let known = known_count(v, &t, n).map_or("-".into(), |k| k.to_string());
                let searched = if n <= a.search_max_n {
                    exact_min(v, &t, n, 40).map_or_else(|e| format!("({e})"), |(len, _)| len.to_string())
                } else {
                    "-".into()
                };
                let built = synthesize(v, &t, n, opts)?.circuit.cx_count();
                text.push_str(&format!(
                    "{n:>2}  {:<9} {:<4} {known:>6} {searched:>8} {built:>12}\n",
                    t.kind(),
                    v.as_str()
                ));
            }
        }
    }
    print_out(&text)
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Unsupported(_) | Error::DegreeTooLarge { .. }) => 3,
        Some(Error::BudgetExceeded { .. } | Error::NodeLimit { .. }) => 4,
        _ => 2,
    }
}

fn run(cli: &Cli) -> Result<()> {
    if cli.jobs > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global()?;
    }
    match &cli.command {
        Command::Synth(a) => cmd_synth(a, cli.seed),
        Command::Verify(a) => cmd_verify(a),
        Command::Angles(a) => cmd_angles(a, cli.seed),
        Command::Adapt(a) => cmd_adapt(a, cli.seed),
        Command::Search(a) => cmd_search(a, cli.seed),
        Command::ExportQasm(a) => cmd_export(a, cli.seed),
        Command::Table(a) => cmd_table(a, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
