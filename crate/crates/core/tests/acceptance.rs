//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the report is printed in order and uncaptured.

use std::collections::BTreeSet;
use std::f64::consts::TAU;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use diagsynth::adaptive::{covers_outside, discover_skip_set, synth_skipping, SkipSet, DEFAULT_EPSILON};
use diagsynth::angles::{bind_angles, compute_theta, reconstruct_alpha, AngleVector, PhaseTargets};
use diagsynth::circuit::{
    check_variant, merge_phase_gates, phase_distance, phase_profile_all, place_phases, place_phases_covering,
    simulate_signatures, visited_signatures,
};
use diagsynth::f2::{find_circular_params, is_basis};
use diagsynth::search::{exact_min, verify_lower_bound};
use diagsynth::synth::circular::{synth_spa_circular, synth_wpa_circular, CompanionState};
use diagsynth::synth::full::{synth_npa_full, synth_spa_full};
use diagsynth::synth::linear::{gray_circuit, reach, synth_spa_linear};
use diagsynth::synth::{synthesize, SynthOptions};
use diagsynth::{reference, Circuit, F2Matrix, Gate, SigVec, Topology, Variant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

const TOPOLOGIES: [Topology; 3] = [Topology::Full, Topology::Linear, Topology::Circular];
const PRIMITIVE_N: [usize; 10] = [2, 3, 4, 5, 6, 7, 9, 10, 11, 15];

fn sign(n: usize) -> i64 {
    if n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn exact_div(num: i64, den: i64) -> i64 {
    assert_eq!(num % den, 0, "closed form is not an integer");
    num / den
}

fn criterion_counts() -> Outcome {
    for n in 1..=16usize {
        let p = 1i64 << n;
        let ni = n as i64;
        let pairs = [
            ("npa_full", synth_npa_full(n).unwrap().cx_count(), p - 2),
            ("spa_full", synth_spa_full(n).unwrap().cx_count(), p - ni - 1),
            ("gray", gray_circuit(n).unwrap().cx_count(), exact_div(5 * p - 6 * ni + sign(n) - 3, 6)),
            (
                "spa_linear",
                synth_spa_linear(n, false).unwrap().cx_count(),
                exact_div(40 * p + 6 * ni * ni - 60 * ni - 33 - 7 * sign(n), 24),
            ),
            (
                "spa_linear_opt",
                synth_spa_linear(n, true).unwrap().cx_count(),
                exact_div(10 * p - 12 * ni - sign(n) - 9, 6),
            ),
        ];
        for (name, got, want) in pairs {
            ensure!(got as i64 == want, "{name} n={n}: {got} != {want}");
        }
    }
    for n in PRIMITIVE_N {
        let p = 1usize << n;
        ensure!(synth_wpa_circular(n).unwrap().cx_count() == p - 1, "wpa_circular n={n}");
        ensure!(synth_spa_circular(n).unwrap().cx_count() == p - n - 1, "spa_circular n={n}");
    }
    Ok("n=1..16, circular on 10 primitive n".into())
}

fn criterion_verifier() -> Outcome {
    let mut checked = 0;
    for n in 1..=12 {
        for t in &TOPOLOGIES {
            if *t == Topology::Circular && n > 1 && find_circular_params(n).unwrap().is_none() {
                continue;
            }
            for v in Variant::ALL {
                for swap_opt in [false, true] {
                    let s = synthesize(v, t, n, SynthOptions { swap_opt, ..Default::default() })
                        .map_err(|e| format!("{v} {t} n={n}: {e}"))?;
                    let r = check_variant(&s.circuit, v);
                    ensure!(r.pass, "{v} {t} n={n}: {}", r.summary());
                    checked += 1;
                }
            }
        }
    }
    let staged = synthesize(Variant::Spa, &Topology::Circular, 12, SynthOptions::default()).unwrap();
    ensure!(staged.construction == "circular-staged", "n=12 circular used {}", staged.construction);
    Ok(format!("{checked} circuits, n=1..12"))
}

struct SearchCell {
    variant: Variant,
    topology: Topology,
    n: usize,
    expected: usize,
    found: usize,
}

fn search_cells() -> Vec<SearchCell> {
    let table =
        [(2, [1, 2, 2, 1, 2, 2, 1, 2, 2]), (3, [4, 6, 6, 5, 7, 8, 4, 6, 6]), (4, [11, 14, 14, 14, 17, 18, 11, 14, 16])];
    let mut wanted = Vec::new();
    for (n, row) in table {
        for (ti, t) in TOPOLOGIES.iter().enumerate() {
            for (vi, v) in [Variant::Spa, Variant::Wpa, Variant::Npa].into_iter().enumerate() {
                wanted.push((v, t.clone(), n, row[3 * ti + vi]));
            }
        }
    }
    // n = 5 cells where the lower bound is tight enough to search quickly.
    wanted.push((Variant::Spa, Topology::Full, 5, 26));
    wanted.push((Variant::Spa, Topology::Circular, 5, 26));
    wanted
        .into_iter()
        .map(|(variant, topology, n, expected)| {
            let (found, c) = exact_min(variant, &topology, n, expected + 2).expect("search within budget");
            assert!(check_variant(&c, variant).pass, "witness fails {variant}");
            SearchCell { variant, topology, n, expected, found }
        })
        .collect()
}

fn criterion_table(cells: &[SearchCell]) -> Outcome {
    for c in cells {
        ensure!(
            c.found == c.expected,
            "({}, {}, {}) = {} expected {}",
            c.variant,
            c.topology,
            c.n,
            c.found,
            c.expected
        );
    }
    Ok(format!("{} cells", cells.len()))
}

fn criterion_spa8() -> Outcome {
    let c = synth_spa_linear(8, true).unwrap();
    ensure!(c.cx_count() == 409, "got {}", c.cx_count());
    ensure!(check_variant(&c, Variant::Spa).pass, "SPA check failed");
    Ok("409 CX".into())
}

fn criterion_angles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let opts = SynthOptions { fallback_linear: true, ..Default::default() };
    let mut worst: f64 = 0.0;
    for n in 2..=8 {
        let skeletons: Vec<Circuit> = TOPOLOGIES
            .iter()
            .map(|t| place_phases(&synthesize(Variant::Spa, t, n, opts).unwrap().circuit).unwrap())
            .collect();
        for _ in 0..100 {
            let raw: Vec<f64> = (0..1 << n).map(|_| rng.random_range(0.0..TAU)).collect();
            let targets = PhaseTargets::new(raw).unwrap();
            let theta = compute_theta(&targets);
            for sk in &skeletons {
                let profile = phase_profile_all(&bind_angles(sk, &theta).unwrap()).unwrap();
                for (p, a) in profile.iter().zip(targets.alpha()) {
                    worst = worst.max(phase_distance(*p, *a));
                }
            }
        }
    }
    ensure!(worst < 1e-9, "max phase error {worst:e}");
    Ok(format!("max error {worst:.1e}"))
}

fn random_basis(n: usize, rng: &mut impl Rng) -> Vec<SigVec> {
    loop {
        let rows: Vec<u32> = (0..n).map(|_| rng.random_range(1..1u32 << n)).collect();
        let vs: Vec<SigVec> = rows.iter().map(|&r| SigVec::new(r, n).unwrap()).collect();
        if is_basis(&vs).unwrap() {
            return vs;
        }
    }
}

fn criterion_reach() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut longest = 0;
    for n in 3..=8 {
        for _ in 0..1000 {
            let target = random_basis(n, &mut rng);
            let c = reach(&target).unwrap();
            ensure!(c.topology() == &Topology::Linear, "wrong topology");
            ensure!(c.cx_count() <= 2 * n * n, "n={n}: length {}", c.cx_count());
            let fin = simulate_signatures(&c).final_basis();
            ensure!(fin.vectors() == target.as_slice(), "n={n}: final basis differs");
            longest = longest.max(c.cx_count());
        }
    }
    Ok(format!("6000 targets, longest {longest}"))
}

fn random_circuit(n: usize, len: usize, rng: &mut impl Rng) -> Circuit {
    let mut c = Circuit::new(n, Topology::Full).unwrap();
    for _ in 0..len {
        if rng.random_bool(0.6) {
            let a = rng.random_range(0..n);
            let b = (a + rng.random_range(1..n)) % n;
            c.push(Gate::cx(a, b)).unwrap();
        } else {
            c.push(Gate::phase(rng.random_range(0..n), rng.random_range(-3.0..3.0))).unwrap();
        }
    }
    c
}

fn trace_invariants(c: &Circuit) -> Result<(), String> {
    let tr = simulate_signatures(c);
    for t in 0..=tr.len() {
        ensure!(is_basis(&tr.at(t)).unwrap(), "signatures at t={t} are dependent");
    }
    let visited = visited_signatures(&tr).len();
    ensure!(visited <= c.n() + c.cx_count(), "visited {visited} > n + #CX");
    Ok(())
}

fn criterion_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let opts = SynthOptions { fallback_linear: true, ..Default::default() };
    for n in 1..=8 {
        for t in &TOPOLOGIES {
            for v in Variant::ALL {
                trace_invariants(&synthesize(v, t, n, opts).unwrap().circuit)?;
            }
        }
    }
    for i in 0..1000 {
        let n = 2 + i % 7;
        let c = random_circuit(n, rng.random_range(0..60), &mut rng);
        trace_invariants(&c)?;
        let merged = merge_phase_gates(&c);
        let (a, b) = (phase_profile_all(&c).unwrap(), phase_profile_all(&merged).unwrap());
        ensure!(a.iter().zip(&b).all(|(x, y)| phase_distance(*x, *y) < 1e-9), "merge changed the profile");
        ensure!(merged.cx_pairs() == c.cx_pairs(), "merge changed the CX gates");
    }

    for n in 1..=10 {
        let g = gray_circuit(n).unwrap();
        let tr = simulate_signatures(&g);
        let m = n / 2;
        let on_mid: BTreeSet<u32> = (0..=tr.len()).map(|t| tr.get(m, t).bits()).collect();
        let want: BTreeSet<u32> = (1..1u32 << n).filter(|v| (v >> m) & 1 == 1).collect();
        ensure!(on_mid == want, "GRAY_{n} misses signatures on wire {m}");
        let fin = tr.final_basis();
        ensure!(
            (0..n).filter(|&k| k != m).all(|k| fin.vectors()[k].as_unit() == Some(k)),
            "GRAY_{n} changes a wire other than {m}"
        );
    }

    for n in [2, 3, 4, 5, 6, 7] {
        let params = find_circular_params(n).unwrap().unwrap();
        let a = CompanionState::new(&params, 0).unwrap().a;
        let tr = simulate_signatures(&synth_wpa_circular(n).unwrap());
        let mut aj = F2Matrix::identity(n);
        for j in 0..=tr.len() {
            for i in 0..n {
                ensure!(aj.row(i) == tr.get((params.k() * j + i) % n, j), "row correspondence n={n} j={j}");
            }
            aj = a.mul(&aj).unwrap();
        }
    }

    for n in [2, 3, 4, 5, 6, 7, 9, 10] {
        let tr = simulate_signatures(&synth_wpa_circular(n).unwrap());
        let cut = tr.len() - n;
        let before: BTreeSet<u32> = (0..=cut).flat_map(|t| tr.at(t)).map(|v| v.bits()).collect();
        for t in cut + 1..=tr.len() {
            ensure!(tr.at(t).iter().all(|v| before.contains(&v.bits())), "new signature after truncation n={n}");
        }
    }
    Ok("basis, visited bound, merge, GRAY, rows, truncation".into())
}

fn criterion_adaptive() -> Outcome {
    let n = 4;
    let skip_sigs: Vec<SigVec> = reference::SKIP_EXAMPLE_SET.iter().map(|&b| SigVec::new(b, n).unwrap()).collect();
    let fixture = reference::skip_example_skeleton();
    let s = SkipSet::new(n, skip_sigs, DEFAULT_EPSILON).unwrap();
    ensure!(fixture.cx_count() == 7 && covers_outside(&fixture, &s), "fixture fails the skip check");

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let vals = (1..1u32 << n)
        .map(|k| if reference::SKIP_EXAMPLE_SET.contains(&k) { 0.0 } else { rng.random_range(0.2..3.0) })
        .collect();
    let theta = AngleVector::new(n, vals).unwrap();
    let skip = discover_skip_set(&theta, DEFAULT_EPSILON).unwrap();
    ensure!(skip == s, "discovered skip set differs");
    let c = synth_skipping(&skip, &Topology::Linear, n).unwrap();
    ensure!(c.cx_count() <= 11, "synth_skipping used {} CX", c.cx_count());
    let bound = bind_angles(&place_phases_covering(&c, skip.signatures()).unwrap(), &theta).unwrap();
    let want = reconstruct_alpha(&theta);
    let profile = phase_profile_all(&bound).unwrap();
    ensure!(profile.iter().zip(want.alpha()).all(|(p, a)| phase_distance(*p, *a) < 1e-9), "phase profile mismatch");
    Ok(format!("synth_skipping {} CX (stretch <= 7: {})", c.cx_count(), c.cx_count() <= 7))
}

fn criterion_lower_bounds(cells: &[SearchCell]) -> Outcome {
    for c in cells {
        let lb = verify_lower_bound(c.variant, &c.topology, c.n);
        ensure!(c.found >= lb, "({}, {}, {}) = {} below bound {lb}", c.variant, c.topology, c.n, c.found);
    }
    for n in 1..=3 {
        for v in [Variant::Wpa, Variant::Npa] {
            let (len, _) = exact_min(v, &Topology::Full, n, 20).map_err(|e| e.to_string())?;
            ensure!(len == (1 << n) - 2, "({v}, full, {n}) = {len}");
        }
    }
    Ok("all searched cells".into())
}

fn run(id: u32, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into()))
    });
    let secs = start.elapsed().as_secs_f64();
    let (tag, detail, ok) = match outcome {
        Ok(d) => ("PASS", d, true),
        Err(d) => ("FAIL", d, false),
    };
    println!("[{tag}] {id}. {name}: {detail} ({secs:.2}s)");
    ok
}

fn main() {
    std::panic::set_hook(Box::new(|_| {}));
    let mut cells = Vec::new();
    let mut results = vec![
        run(1, "closed-form gate counts", criterion_counts),
        run(2, "verifier pass on every construction", criterion_verifier),
        run(3, "minimal counts by exact search", || {
            cells = search_cells();
            criterion_table(&cells)
        }),
    ];
    results.push(run(4, "linear SPA on 8 wires with 2-CX rotation", criterion_spa8));
    results.push(run(5, "angle roundtrip on SPA skeletons", criterion_angles));
    results.push(run(6, "reachability on a line", criterion_reach));
    results.push(run(7, "property suites", criterion_properties));
    results.push(run(8, "skip-aware enumeration example", criterion_adaptive));
    results.push(run(9, "lower-bound consistency", || {
        ensure!(!cells.is_empty(), "no searched cells");
        criterion_lower_bounds(&cells)
    }));
    let passed = results.iter().filter(|&&r| r).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
