use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::path::Path;

use holoqc::formats::{
    self, parse_circuit, parse_coherent_point, parse_state, parse_state_list, state_to_json,
};
use holoqc::geometry::{
    berry_holonomy, bloch_circle_phase, entanglement_measure_with, EntanglementReport,
    OptimizerOptions, StateLoop,
};
use holoqc::sampling::{random_circuit, random_state, rng};
use holoqc::semiclassical::{evolve_classical, pauli_hamiltonian};
use holoqc::torus::{circular_distance, integrate_flow, FlowSpec, TorusPoint};
use holoqc::{
    apply_gate_poly, check_homogeneity, compare_states, from_poly, run_circuit_matrix, to_poly,
    BasisConvention, Circuit, HoloState, Pauli, StateVector,
};
use serde::Serialize;

use crate::{
    check_output, fmt_f64, read_input, ClassicalArgs, CliError, Command, DiffArgs,
    EntanglementArgs, HolonomyArgs, Outcome, PortraitArgs, RunConfig, SimulateArgs, EXIT_OK,
    EXIT_TOLERANCE,
};

/// Reference engine used by `diff`; swapped out in tests.
pub type MatrixOracle = fn(&Circuit, &StateVector) -> holoqc::Result<StateVector>;

/// Largest tolerated drift of a total phase along a portrait trajectory.
const PORTRAIT_DRIFT_TOL: f64 = 1e-8;

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    match &config.command {
        Command::Simulate(a) => cmd_simulate(a),
        Command::Diff(a) => cmd_diff_with(a, run_circuit_matrix),
        Command::Portrait(a) => cmd_portrait(a),
        Command::Entanglement(a) => cmd_entanglement(a),
        Command::Holonomy(a) => cmd_holonomy(a),
        Command::ClassicalEvolve(a) => cmd_classical_evolve(a),
    }
}

fn status(ok: bool) -> (&'static str, u8) {
    if ok {
        ("PASS", EXIT_OK)
    } else {
        ("FAIL", EXIT_TOLERANCE)
    }
}

fn load_state(path: &Path) -> Result<HoloState, CliError> {
    parse_state(&read_input(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_circuit(path: &Path) -> Result<Circuit, CliError> {
    parse_circuit(&read_input(path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn zero_state(n: usize) -> Result<HoloState, CliError> {
    Ok(HoloState::basis(&"0".repeat(n))?)
}

fn check_widths(circuit: &Circuit, state: &HoloState) -> Result<(), CliError> {
    if circuit.nqubits != state.nqubits() {
        return Err(CliError::Input(format!(
            "circuit acts on {} qubits but the state has {}",
            circuit.nqubits,
            state.nqubits()
        )));
    }
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs) -> Result<Outcome, CliError> {
    check_output(&args.out)?;
    let circuit = load_circuit(&args.circuit)?;
    let state = match &args.state {
        Some(p) => load_state(p)?,
        None => zero_state(circuit.nqubits)?,
    };
    check_widths(&circuit, &state)?;

    let n = circuit.nqubits;
    let mut poly = to_poly(&state);
    let mut violations = Vec::new();
    for (k, g) in circuit.gates.iter().enumerate() {
        poly = apply_gate_poly(g, &poly)?;
        for q in 1..=n {
            if !check_homogeneity(&poly, q) {
                violations.push((k + 1, q));
            }
        }
    }
    if let Some(&(gate, qubit)) = violations.first() {
        return Err(CliError::Tolerance(format!(
            "homogeneity violated on qubit {qubit} after gate {gate} ({} violations)",
            violations.len()
        )));
    }
    let out = from_poly(&poly)?;

    let mut text = String::new();
    writeln!(text, "qubits: {n}").unwrap();
    writeln!(text, "gates: {}", circuit.len()).unwrap();
    writeln!(text, "norm_sqr: {}", fmt_f64(out.norm_sqr())).unwrap();
    writeln!(text, "homogeneity: ok ({} checks)", circuit.len() * n).unwrap();
    Ok(Outcome {
        files: vec![(args.out.clone(), state_to_json(&out)?.into_bytes())],
        stdout: text,
        code: EXIT_OK,
    })
}

/// `diff` with an explicit reference engine.
pub fn cmd_diff_with(args: &DiffArgs, oracle: MatrixOracle) -> Result<Outcome, CliError> {
    if let Some(out) = &args.out {
        check_output(out)?;
    }
    if args.tol.is_nan() || args.tol < 0.0 {
        return Err(CliError::Input(format!(
            "tolerance must be nonnegative, got {}",
            args.tol
        )));
    }
    let mut r = rng(args.seed);
    let (source, circuit) = match &args.circuit {
        Some(p) => (format!("file {}", p.display()), load_circuit(p)?),
        None => {
            let n = args.qubits as usize;
            (
                format!(
                    "random seed={:#x} qubits={n} depth={}",
                    args.seed, args.depth
                ),
                random_circuit(&mut r, n, args.depth),
            )
        }
    };
    let state = match (&args.state, &args.circuit) {
        (Some(p), _) => load_state(p)?,
        (None, Some(_)) => zero_state(circuit.nqubits)?,
        (None, None) => random_state(&mut r, circuit.nqubits),
    };
    check_widths(&circuit, &state)?;

    let holo = holoqc::run_circuit_holo(&circuit, &state)?;
    let reference = oracle(&circuit, &StateVector::from_holo(&state))?;
    let dev = compare_states(&reference, &holo)?;
    let (word, code) = status(dev <= args.tol);

    let mut text = String::new();
    writeln!(text, "source: {source}").unwrap();
    writeln!(text, "qubits: {}", circuit.nqubits).unwrap();
    writeln!(text, "gates: {}", circuit.len()).unwrap();
    writeln!(text, "max_deviation: {}", fmt_f64(dev)).unwrap();
    writeln!(text, "tolerance: {}", fmt_f64(args.tol)).unwrap();
    writeln!(text, "status: {word}").unwrap();
    let files = args
        .out
        .iter()
        .map(|p| (p.clone(), text.clone().into_bytes()))
        .collect();
    Ok(Outcome {
        files,
        stdout: text,
        code,
    })
}

/// Starting points on the fixed sets of a generator.
fn fixed_starts(generator: Pauli) -> Vec<(f64, f64)> {
    match generator {
        Pauli::Z => vec![],
        Pauli::X => vec![(FRAC_PI_2, 0.0), (0.0, FRAC_PI_2)],
        Pauli::Y => vec![(0.0, 0.0), (PI, 0.0)],
    }
}

fn cmd_portrait(args: &PortraitArgs) -> Result<Outcome, CliError> {
    if args.out.exists() && !args.out.is_dir() {
        return Err(CliError::Input(format!(
            "{}: not a directory",
            args.out.display()
        )));
    }
    if args.offsets.iter().any(|c| !c.is_finite()) {
        return Err(CliError::Input("offsets must be finite".into()));
    }
    let spec = FlowSpec::new(args.generator, 1, args.t_final, args.dt)?;

    let mut starts: Vec<(String, (f64, f64))> = args
        .offsets
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            (
                format!("{}_offset_{i}.csv", args.generator),
                (-1.7, c + 1.7),
            )
        })
        .collect();
    starts.extend(
        fixed_starts(args.generator)
            .into_iter()
            .enumerate()
            .map(|(i, p)| (format!("{}_fixed_{i}.csv", args.generator), p)),
    );

    let mut files = Vec::new();
    let mut text = String::new();
    let mut worst: f64 = 0.0;
    for (name, (a, b)) in starts {
        let traj = integrate_flow(&spec, &TorusPoint::pair(a, b)?)?;
        let mut buf = Vec::new();
        traj.write_csv(&mut buf)
            .map_err(|e| CliError::Input(format!("{name}: {e}")))?;
        let drift = traj.max_sum_drift();
        worst = worst.max(drift);
        writeln!(
            text,
            "{name}: start=({}, {}) samples={} sum_drift={}",
            fmt_f64(a),
            fmt_f64(b),
            traj.len(),
            fmt_f64(drift)
        )
        .unwrap();
        files.push((args.out.join(name), buf));
    }
    let (word, code) = status(worst <= PORTRAIT_DRIFT_TOL);
    writeln!(text, "status: {word}").unwrap();
    Ok(Outcome {
        files,
        stdout: text,
        code,
    })
}

#[derive(Serialize)]
struct RestartOut {
    seed: u64,
    overlap: f64,
    sweeps: usize,
}

#[derive(Serialize)]
struct EntanglementOut {
    measure: f64,
    max_overlap: f64,
    witness: Vec<[[f64; 2]; 2]>,
    best_restart: usize,
    restarts: Vec<RestartOut>,
}

impl From<&EntanglementReport> for EntanglementOut {
    fn from(r: &EntanglementReport) -> Self {
        Self {
            measure: r.measure,
            max_overlap: r.max_overlap,
            witness: r
                .witness
                .factors()
                .iter()
                .map(|f| [[f[0].re, f[0].im], [f[1].re, f[1].im]])
                .collect(),
            best_restart: r.best_restart,
            restarts: r
                .restarts
                .iter()
                .map(|s| RestartOut {
                    seed: s.seed,
                    overlap: s.overlap,
                    sweeps: s.sweeps,
                })
                .collect(),
        }
    }
}

fn cmd_entanglement(args: &EntanglementArgs) -> Result<Outcome, CliError> {
    if let Some(out) = &args.out {
        check_output(out)?;
    }
    if args.restarts == 0 {
        return Err(CliError::Input("need at least one restart".into()));
    }
    let state = load_state(&args.state)?;
    if !state.is_normalized() {
        return Err(CliError::Input(format!(
            "{}: state is not normalized (norm_sqr {})",
            args.state.display(),
            fmt_f64(state.norm_sqr())
        )));
    }
    let opts = OptimizerOptions {
        restarts: args.restarts,
        seed: args.seed,
        ..OptimizerOptions::default()
    };
    let report = entanglement_measure_with(&state, &opts)?;
    let json = formats::to_json_string(&EntanglementOut::from(&report))?;
    Ok(match &args.out {
        Some(p) => Outcome {
            files: vec![(p.clone(), json.into_bytes())],
            stdout: format!("measure: {}\n", fmt_f64(report.measure)),
            code: EXIT_OK,
        },
        None => Outcome {
            files: vec![],
            stdout: json,
            code: EXIT_OK,
        },
    })
}

fn cmd_holonomy(args: &HolonomyArgs) -> Result<Outcome, CliError> {
    if let Some(out) = &args.out {
        check_output(out)?;
    }
    let (lp, reference) = match (&args.theta, &args.state) {
        (Some(theta), None) => {
            if !theta.is_finite() {
                return Err(CliError::Input(format!("invalid theta {theta}")));
            }
            (
                StateLoop::bloch_circle(*theta, args.samples)?,
                Some(bloch_circle_phase(*theta)),
            )
        }
        (None, Some(p)) => {
            let states = parse_state_list(&read_input(p)?)
                .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
            (StateLoop::new(states)?, None)
        }
        _ => {
            return Err(CliError::Input(
                "give exactly one of --theta and --state".into(),
            ))
        }
    };
    let gamma = berry_holonomy(&lp)?;

    let mut text = String::new();
    writeln!(text, "points: {}", lp.len()).unwrap();
    writeln!(text, "gamma: {}", fmt_f64(gamma)).unwrap();
    let mut code = EXIT_OK;
    if let Some(r) = reference {
        let dev = circular_distance(gamma, r);
        let (word, c) = status(dev <= args.tol);
        code = c;
        writeln!(text, "reference: {}", fmt_f64(r)).unwrap();
        writeln!(text, "deviation: {}", fmt_f64(dev)).unwrap();
        writeln!(text, "status: {word}").unwrap();
    }
    let files = args
        .out
        .iter()
        .map(|p| (p.clone(), text.clone().into_bytes()))
        .collect();
    Ok(Outcome {
        files,
        stdout: text,
        code,
    })
}

fn cmd_classical_evolve(args: &ClassicalArgs) -> Result<Outcome, CliError> {
    if let Some(out) = &args.out {
        check_output(out)?;
    }
    if !(args.dt > 0.0 && args.dt.is_finite()) || !(args.t_final >= 0.0 && args.t_final.is_finite())
    {
        return Err(CliError::Input(format!(
            "need dt > 0 and t_final >= 0, got dt={} t_final={}",
            args.dt, args.t_final
        )));
    }
    let z0 = parse_coherent_point(&read_input(&args.state)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.state.display())))?;
    let h = pauli_hamiltonian(args.generator, z0.nqubits(), args.qubit)?;

    let mut text = String::from("t");
    for var in 0..2 * z0.nqubits() {
        let name = BasisConvention::var_name(var);
        write!(text, ",re_{name},im_{name}").unwrap();
    }
    text.push_str(",energy,norm\n");

    let steps = ((args.t_final / args.dt) - 1e-9).ceil().max(0.0) as usize;
    for k in 0..=steps {
        let t = if k == steps {
            args.t_final
        } else {
            k as f64 * args.dt
        };
        let z = evolve_classical(&h, &z0, t)?;
        text.push_str(&fmt_f64(t));
        for c in z.z() {
            write!(text, ",{},{}", fmt_f64(c.re), fmt_f64(c.im)).unwrap();
        }
        writeln!(text, ",{},{}", fmt_f64(h.energy(&z)), fmt_f64(z.norm())).unwrap();
    }
    Ok(match &args.out {
        Some(p) => Outcome {
            files: vec![(p.clone(), text.into_bytes())],
            stdout: format!("samples: {}\n", steps + 1),
            code: EXIT_OK,
        },
        None => Outcome {
            files: vec![],
            stdout: text,
            code: EXIT_OK,
        },
    })
}
