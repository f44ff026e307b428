//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::Rng;

use holoqc::diffop::Substitution;
use holoqc::gates::swap_pauli_form;
use holoqc::geometry::{
    berry_holonomy, bloch_circle_phase, entanglement_measure, schmidt_oracle, ProductState,
    StateLoop,
};
use holoqc::sampling::{gaussian_complex, random_circuit, random_state, random_unit_vector, rng};
use holoqc::semiclassical::{evolve_classical, pauli_hamiltonian, CoherentPoint};
use holoqc::torus::{
    circular_distance, hadamard_jacobian_det, hadamard_torus_map, integrate_flow, pauli_bracket,
    poisson_bracket, vector_field, FlowSpec, TorusPoint,
};
use holoqc::{
    apply_gate, apply_gate_poly, check_homogeneity, compare_states, encode_state,
    run_circuit_matrix, to_poly, Error, GateKind, GateSpec, HoloState, Pauli, StateVector, C64,
};

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn basis_states(n: usize) -> Vec<HoloState> {
    (0..1usize << n)
        .map(|i| {
            encode_state(
                &(0..1usize << n)
                    .map(|k| C64::new((k == i) as u8 as f64, 0.0))
                    .collect::<Vec<_>>(),
            )
            .unwrap()
        })
        .collect()
}

fn run(state: &HoloState, gates: &[GateSpec]) -> HoloState {
    gates
        .iter()
        .fold(state.clone(), |s, g| apply_gate(g, &s).unwrap())
}

fn vec_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn state_diff(a: &HoloState, b: &HoloState) -> f64 {
    vec_diff(&a.to_vector(), &b.to_vector())
}

fn circuits() -> Vec<(holoqc::Circuit, HoloState)> {
    let mut r = rng(0xC0FFEE);
    (0..100)
        .map(|_| {
            let n = r.random_range(2..=6);
            let depth = r.random_range(1..=30);
            let c = random_circuit(&mut r, n, depth);
            let s = random_state(&mut r, n);
            (c, s)
        })
        .collect()
}

fn oracle_equivalence() -> Verdict {
    let started = Instant::now();
    let mut worst: f64 = 0.0;
    let mut kinds = BTreeSet::new();
    for (c, s) in circuits() {
        kinds.extend(c.gates.iter().map(|g| g.kind.name()));
        let holo = holoqc::run_circuit_holo(&c, &s).unwrap();
        let reference = run_circuit_matrix(&c, &StateVector::from_holo(&s)).unwrap();
        worst = worst.max(compare_states(&reference, &holo).unwrap());
    }
    let secs = started.elapsed().as_secs_f64();
    verdict(
        worst <= 1e-9 && secs < 10.0 && kinds.len() == GateKind::ALL.len(),
        format!("max_dev={worst:.3e} time={secs:.2}s kinds={}", kinds.len()),
    )
}

fn homogeneity_preservation() -> Verdict {
    let mut checks = 0usize;
    let mut violations = 0usize;
    for (c, s) in circuits() {
        let mut p = to_poly(&s);
        for g in &c.gates {
            p = apply_gate_poly(g, &p).unwrap();
            for q in 1..=c.nqubits {
                checks += 1;
                if !check_homogeneity(&p, q) {
                    violations += 1;
                }
            }
        }
    }
    verdict(
        violations == 0,
        format!("checks={checks} violations={violations}"),
    )
}

fn gate_identities() -> Verdict {
    use GateKind::*;
    let i = C64::new(0.0, 1.0);
    let mut worst: f64 = 0.0;
    let involutions = [
        GateSpec::single(X, 1),
        GateSpec::single(Y, 1),
        GateSpec::single(Z, 2),
        GateSpec::single(H, 2),
        GateSpec::two(Cnot, 1, 2),
        GateSpec::two(Swap, 1, 2),
    ];
    let x = holoqc::gates::pauli_matrix(X);
    let z = holoqc::gates::pauli_matrix(Z);
    let subst = Substitution::swap(2, 1, 2);
    let pauli_swap = swap_pauli_form(2, 1, 2);
    for s in basis_states(2) {
        for g in &involutions {
            worst = worst.max(state_diff(&run(&s, &[g.clone(), g.clone()]), &s));
        }
        for (a, b, c) in [(X, Y, Z), (Y, Z, X), (Z, X, Y)] {
            let ab = run(&s, &[GateSpec::single(b, 1), GateSpec::single(a, 1)]);
            let ic = run(&s, &[GateSpec::single(c, 1)]).scale(i);
            worst = worst.max(state_diff(&ab, &ic));
        }
        let p = to_poly(&s);
        worst = worst.max(
            pauli_swap
                .apply(&p)
                .unwrap()
                .max_abs_diff(&subst.apply(&p).unwrap()),
        );
        worst = worst.max(state_diff(
            &run(&s, &[GateSpec::cu(1, 2, x)]),
            &run(&s, &[GateSpec::two(Cnot, 1, 2)]),
        ));
        worst = worst.max(state_diff(
            &run(&s, &[GateSpec::cu(2, 1, z)]),
            &run(&s, &[GateSpec::two(Cz, 2, 1)]),
        ));
    }
    verdict(worst <= 1e-10, format!("max_err={worst:.3e}"))
}

fn flow_conservation() -> Verdict {
    let mut r = rng(4);
    let mut drift: f64 = 0.0;
    for gen in Pauli::ALL {
        let spec = FlowSpec::new(gen, 1, 10.0, 1e-3).unwrap();
        for _ in 0..25 {
            let start =
                TorusPoint::pair(r.random_range(0.0..2.0 * PI), r.random_range(0.0..2.0 * PI))
                    .unwrap();
            drift = drift.max(integrate_flow(&spec, &start).unwrap().max_sum_drift());
        }
    }
    let fixed = [
        (Pauli::X, FRAC_PI_2, 0.0),
        (Pauli::X, 0.0, FRAC_PI_2),
        (Pauli::Y, 0.7, 0.7),
        (Pauli::Y, PI, 0.0),
    ];
    let residual = fixed
        .iter()
        .map(|&(g, a, b)| {
            let (u, v) = vector_field(g, &TorusPoint::pair(a, b).unwrap(), 1).unwrap();
            u.abs().max(v.abs())
        })
        .fold(0.0, f64::max);
    verdict(
        drift <= 1e-8 && residual == 0.0,
        format!("max_sum_drift={drift:.3e} fixed_point_residual={residual:e}"),
    )
}

fn hadamard_torus() -> Verdict {
    let mut r = rng(5);
    let mut det_err: f64 = 0.0;
    let mut round_trip: f64 = 0.0;
    for _ in 0..50 {
        let a = r.random_range(0.0..2.0 * PI);
        let d = r.random_range(0.1..PI - 0.1);
        let p = TorusPoint::pair(a, a - d).unwrap();
        det_err = det_err.max((hadamard_jacobian_det(&p, 1).unwrap() - 1.0).abs());
        let twice = hadamard_torus_map(&hadamard_torus_map(&p, 1).unwrap(), 1);
        round_trip = round_trip.max(twice.map_or(f64::INFINITY, |q| q.distance(&p)));
    }
    let singular_ok = [
        0.0,
        9.99e-10,
        -9.99e-10,
        4e-10,
        PI,
        PI + 9.99e-10,
        PI - 9.99e-10,
    ]
    .iter()
    .all(|&d| {
        matches!(
            hadamard_torus_map(&TorusPoint::pair(d, 0.0).unwrap(), 1),
            Err(Error::Singular(_))
        )
    });
    verdict(
        det_err <= 1e-6 && singular_ok && round_trip <= 1e-8,
        format!(
            "max|det-1|={det_err:.3e} singular_guard={singular_ok} max_round_trip={round_trip:.3e}"
        ),
    )
}

fn entanglement() -> Verdict {
    let mut r = rng(6);
    let h = FRAC_1_SQRT_2;
    let real =
        |v: &[f64]| encode_state(&v.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>()).unwrap();
    let bell = real(&[h, 0.0, 0.0, h]);
    let bell_m = entanglement_measure(&bell).unwrap().measure;
    let bell_err = (bell_m - h.acos())
        .abs()
        .max((bell_m - schmidt_oracle(&bell).unwrap().1).abs());

    let mut svd_err: f64 = 0.0;
    for _ in 0..100 {
        let s = random_state(&mut r, 2);
        let m = entanglement_measure(&s).unwrap().measure;
        svd_err = svd_err.max((m - schmidt_oracle(&s).unwrap().1).abs());
    }

    let mut product_max: f64 = 0.0;
    for n in [2, 3, 4] {
        for _ in 0..5 {
            let factors = (0..n)
                .map(|_| {
                    let v = random_unit_vector(&mut r, 2);
                    [v[0], v[1]]
                })
                .collect();
            let p = ProductState::new(factors).unwrap().to_holo();
            product_max = product_max.max(entanglement_measure(&p).unwrap().measure);
        }
    }

    let plus0 = real(&[h, 0.0, h, 0.0]);
    let before = entanglement_measure(&plus0).unwrap().measure;
    let after =
        entanglement_measure(&apply_gate(&GateSpec::two(GateKind::Cnot, 1, 2), &plus0).unwrap())
            .unwrap()
            .measure;
    verdict(
        bell_err <= 1e-5 && svd_err <= 1e-5 && product_max <= 1e-6 && before <= 1e-8 && (after - FRAC_PI_4).abs() <= 1e-4,
        format!(
            "bell_err={bell_err:.3e} svd_err={svd_err:.3e} product_max={product_max:.3e} cnot: {before:.3e} -> {after:.6}"
        ),
    )
}

fn holonomy() -> Verdict {
    let mut r = rng(7);
    let mut err: f64 = 0.0;
    let mut gauge: f64 = 0.0;
    for theta in [FRAC_PI_6, FRAC_PI_3, FRAC_PI_2] {
        let lp = StateLoop::bloch_circle(theta, 2000).unwrap();
        let g = berry_holonomy(&lp).unwrap();
        err = err.max(circular_distance(g, bloch_circle_phase(theta)));
        let phases: Vec<f64> = (0..lp.len()).map(|_| r.random_range(-PI..PI)).collect();
        gauge = gauge.max(circular_distance(
            berry_holonomy(&lp.regauge(&phases)).unwrap(),
            g,
        ));
    }
    verdict(
        err <= 2e-3 && gauge <= 1e-12,
        format!("max_err={err:.3e} gauge_dev={gauge:.3e}"),
    )
}

fn semiclassical() -> Verdict {
    let mut r = rng(8);
    let minus_i = C64::new(0.0, -1.0);
    let mut flow_err: f64 = 0.0;
    let mut energy: f64 = 0.0;
    let mut norm: f64 = 0.0;
    for kind in Pauli::ALL {
        let h = pauli_hamiltonian(kind, 2, 1).unwrap();
        for k in 0..100 {
            let z0 =
                CoherentPoint::new((0..4).map(|_| gaussian_complex(&mut r)).collect()).unwrap();
            let t = 0.1 * k as f64;
            // independent reference: Pade exponential of the 4x4 generator
            let u = (h.matrix() * (minus_i * C64::new(t, 0.0))).exp();
            let want = u * nalgebra::DVector::from_column_slice(z0.z());
            let got = evolve_classical(&h, &z0, t).unwrap();
            flow_err = flow_err.max(vec_diff(got.z(), want.as_slice()));
            let (e0, n0) = (h.energy(&z0), z0.norm());
            for j in 0..=10 {
                let z = evolve_classical(&h, &z0, j as f64).unwrap();
                energy = energy.max((h.energy(&z) - e0).abs());
                norm = norm.max((z.norm() - n0).abs());
            }
        }
    }
    verdict(
        flow_err <= 1e-10 && energy <= 1e-10 && norm <= 1e-10,
        format!("flow_err={flow_err:.3e} energy_drift={energy:.3e} norm_drift={norm:.3e}"),
    )
}

fn poisson_report() -> Verdict {
    let f = |a: f64, b: f64| (a + 0.3).sin() * b.cos() + 0.5 * a * b;
    let g = |a: f64, b: f64| (2.0 * a - b).cos() + b * b;
    let analytic = |a: f64, b: f64| {
        let fa = (a + 0.3).cos() * b.cos() + 0.5 * b;
        let fb = -(a + 0.3).sin() * b.sin() + 0.5 * a;
        let ga = -2.0 * (2.0 * a - b).sin();
        let gb = (2.0 * a - b).sin() + 2.0 * b;
        fa * gb - fb * ga
    };
    let points = [(0.2, 1.3), (1.7, -0.4), (-2.5, 2.2), (3.0, 0.9), (0.0, 0.0)];
    let err = points
        .iter()
        .map(|&(a, b)| (poisson_bracket(f, g, a, b) - analytic(a, b)).abs())
        .fold(0.0, f64::max);
    let xy: Vec<String> = points[..3]
        .iter()
        .map(|&(a, b)| {
            format!(
                "{{H_X,H_Y}}({a},{b})={:.3e} vs H_Z={:.3e}",
                pauli_bracket(Pauli::X, Pauli::Y, a, b),
                a - b
            )
        })
        .collect();
    verdict(
        err <= 1e-6,
        format!("cross_check_err={err:.3e}; {}", xy.join("; ")),
    )
}

fn cli_runs(dir: &Path, args: &[&str], outputs: &[&str]) -> (Vec<u8>, Vec<Vec<u8>>) {
    let o = Command::new(env!("CARGO_BIN_EXE_holoqc"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs");
    let files = outputs
        .iter()
        .map(|f| fs::read(dir.join(f)).unwrap_or_default())
        .collect();
    let mut out = o.stdout;
    out.extend(o.status.code().unwrap_or(-1).to_le_bytes());
    (out, files)
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let h = FRAC_1_SQRT_2;
    fs::write(d.join("bell.json"), r#"{ "n": 2, "gates": [ { "kind": "H", "qubits": [1] }, { "kind": "CNOT", "qubits": [1, 2] } ] }"#).unwrap();
    fs::write(
        d.join("w.json"),
        format!(
            r#"{{ "n": 3, "amplitudes": {{ "001": [{h}, 0], "010": [0.5, 0], "100": [0, 0.5] }} }}"#
        ),
    )
    .unwrap();
    fs::write(
        d.join("p.json"),
        r#"{ "z": [[0.6, 0], [0, 0.8], [1, 0], [0, 0]] }"#,
    )
    .unwrap();
    let runs: [(&[&str], &[&str]); 6] = [
        (
            &["simulate", "--circuit", "bell.json", "--out", "s.json"],
            &["s.json"],
        ),
        (
            &[
                "diff", "--seed", "0xC0FFEE", "--qubits", "6", "--depth", "30", "--out", "d.txt",
            ],
            &["d.txt"],
        ),
        (
            &[
                "portrait",
                "--generator",
                "X",
                "--out",
                "port",
                "--t-final",
                "3",
            ],
            &["port/X_offset_0.csv", "port/X_fixed_1.csv"],
        ),
        (
            &[
                "entanglement",
                "--state",
                "w.json",
                "--seed",
                "17",
                "--out",
                "e.json",
            ],
            &["e.json"],
        ),
        (&["holonomy", "--theta", "1.0", "--samples", "2000"], &[]),
        (
            &[
                "classical-evolve",
                "--state",
                "p.json",
                "--generator",
                "Y",
                "--qubit",
                "2",
                "--out",
                "c.csv",
            ],
            &["c.csv"],
        ),
    ];
    let mut differing = Vec::new();
    for (args, outs) in runs {
        let first = cli_runs(d, args, outs);
        let second = cli_runs(d, args, outs);
        if first != second || first.1.iter().any(|f| f.is_empty()) {
            differing.push(args[0]);
        }
    }
    verdict(
        differing.is_empty(),
        format!("commands=6 differing={differing:?}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence", oracle_equivalence),
        ("homogeneity preservation", homogeneity_preservation),
        ("gate identities", gate_identities),
        ("flow conservation", flow_conservation),
        ("hadamard torus map", hadamard_torus),
        ("entanglement", entanglement),
        ("berry holonomy", holonomy),
        ("semiclassical", semiclassical),
        ("poisson bracket", poisson_report),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        if !v.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {name}: {} ({})",
            k + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
