use std::fs;
use std::path::Path;

use clap::ValueEnum;
use qihe_core::coding::{
    avg_letter_entropy, blocking_sequence, ensemble_state, holevo_chi, refactorization_ledger,
    tradeoff_curve, tradeoff_point, typical_subspace, typical_subspace_by_types,
    typical_subspace_dense, verify_refactorization_unitary, Alphabet, TypicalMethod,
    TypicalSubspace,
};
use qihe_core::protocols::{
    bell_protocol, classical_pair_protocol, even_parity_state, ghz_state, ghz_unlock,
    parity_no_information_check, parity_unlock, random_parity_channel, sample_branches,
    ProtocolOutcome,
};
use qihe_core::qcore::serial::matrix_from_json;
use qihe_core::thermo::{extractable_work, remote_carnot, ThermalContext, Units, WorkReport};
use qihe_core::verify::{run_criterion, run_suite, CriterionResult, CRITERIA};
use qihe_core::{partial_trace, DensityMatrix, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::args::{
    AlphabetArg, CarnotArgs, MethodArg, ProtocolArgs, ProtocolKind, RefactorArgs, RunConfig,
    StateKind, TradeoffArgs, TypicalArgs, VerifyArgs, WorkArgs,
};
use crate::report::{Obj, Output, Table};
use crate::CliError;

type CmdResult = Result<Output, CliError>;

/// Shortest round-trip decimal, as in the JSON output.
fn num(x: f64) -> String {
    Value::from(x).to_string()
}

pub struct Env {
    pub config: RunConfig,
    pub ctx: ThermalContext,
}

impl Env {
    fn energy_units(&self) -> &'static str {
        self.ctx.units().energy_label()
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.config.seed)
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_alphabet(path: &Path) -> Result<Alphabet, CliError> {
    Ok(Alphabet::from_json_str(&read(path)?)?)
}

fn load_state(path: &Path) -> Result<DensityMatrix, CliError> {
    let value: Value = serde_json::from_str(&read(path)?).map_err(Error::from)?;
    let data = value
        .get("data")
        .ok_or_else(|| Error::Argument("state file needs a `data` matrix".into()))?;
    let data = matrix_from_json(data)?;
    let dims = match value.get("dims") {
        None => vec![data.nrows()],
        Some(Value::Number(n)) => vec![n
            .as_u64()
            .ok_or_else(|| Error::Argument("bad `dims`".into()))?
            as usize],
        Some(v) => serde_json::from_value(v.clone()).map_err(Error::from)?,
    };
    Ok(DensityMatrix::new(data, dims)?)
}

fn work_obj(w: &WorkReport, env: &Env) -> Obj {
    let e = env.energy_units();
    Obj::new()
        .num("work", w.work, e)
        .num("work_bits", w.work_bits(&env.ctx), "bit")
        .num("entropy_delta", w.entropy_delta, "bit")
        .num("landauer_reset", w.landauer_reset, e)
        .num("hamiltonian_term", w.hamiltonian_term, e)
}

fn context_obj(env: &Env) -> Obj {
    Obj::new()
        .text(
            "units",
            match env.ctx.units() {
                Units::Natural => "natural",
                Units::Si => "si",
            },
        )
        .num("temperature", env.ctx.temperature(), "K")
        .num("unit_factor", env.ctx.unit_factor(), env.energy_units())
}

pub fn work(args: &WorkArgs, env: &Env) -> CmdResult {
    let needs = |flag: &str, ok: bool| {
        if ok {
            Ok(())
        } else {
            Err(CliError::Usage(format!("--state needs {flag}")))
        }
    };
    let rho = match args.state {
        StateKind::PureQubit => DensityMatrix::basis(&[2], 0)?,
        StateKind::MixedQubit => DensityMatrix::maximally_mixed(&[2])?,
        StateKind::Qubit => {
            needs("--p", args.p.is_some())?;
            let p = args.p.unwrap_or_default();
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Argument(format!("population {p} is outside [0, 1]")).into());
            }
            DensityMatrix::diagonal(&[2], &[1.0 - p, p])?
        }
        StateKind::Bell => ghz_state(2)?.to_density(),
        StateKind::Ghz => ghz_state(args.n)?.to_density(),
        StateKind::EvenParity => even_parity_state(args.n)?.rho,
        StateKind::Random => DensityMatrix::random(&[args.dim], &mut env.rng())?,
        StateKind::File => {
            needs("--file", args.file.is_some())?;
            load_state(args.file.as_deref().unwrap_or(Path::new("")))?
        }
    };
    let rho = if args.keep.is_empty() {
        rho
    } else {
        partial_trace(&rho, &args.keep)?
    };
    let w = extractable_work(&rho, &env.ctx)?;
    let report = work_obj(&w, env)
        .text(
            "state",
            args.state
                .to_possible_value()
                .map(|v| v.get_name().to_owned())
                .unwrap_or_default(),
        )
        .ints("dims", rho.dims(), "1")
        .num("capacity_bits", rho.capacity_bits(), "bit")
        .num("entropy_bits", rho.entropy()?, "bit")
        .obj("context", context_obj(env));
    Ok(Output::new(report))
}

pub fn carnot(args: &CarnotArgs) -> CmdResult {
    let r = remote_carnot(args.t_low, args.t_high)?;
    let report = Obj::new()
        .num("t_low", r.t_low, "K")
        .num("t_high", r.t_high, "K")
        .num("work_per_qubit", r.work_per_qubit, "J")
        .num("heat_from_hot", r.heat_from_hot, "J")
        .num("heat_to_cold", r.heat_from_hot - r.work_per_qubit, "J")
        .num("efficiency", r.efficiency, "1");
    Ok(Output::new(report))
}

fn protocol_obj(out: &ProtocolOutcome, env: &Env) -> Obj {
    let e = env.energy_units();
    let parties: Vec<Obj> = out
        .parties
        .iter()
        .map(|p| {
            Obj::new()
                .text("id", &p.id)
                .ints("held_subsystems", &p.held_subsystems, "index")
        })
        .collect();
    let mut baseline = Obj::new();
    for (id, w) in &out.baseline_work {
        baseline = baseline.obj(id, work_obj(w, env));
    }
    let mut expected = Obj::new();
    for id in out.branches.iter().flat_map(|b| b.per_party_work.keys()) {
        expected = expected.num(id, out.expected_work(id), e);
    }
    let branches: Vec<Obj> = out
        .branches
        .iter()
        .map(|b| {
            let log: Vec<Obj> = b
                .broadcast_log
                .iter()
                .map(|m| {
                    Obj::new()
                        .text("party", &m.party)
                        .int("subsystem", m.subsystem as u64, "index")
                        .int("outcome", m.outcome as u64, "bit")
                })
                .collect();
            let mut work = Obj::new();
            for (id, w) in &b.per_party_work {
                work = work.obj(id, work_obj(w, env));
            }
            Obj::new()
                .num("probability", b.probability, "1")
                .list("broadcast", log)
                .obj("work", work)
                .num("total_work", b.total_work(), e)
        })
        .collect();
    Obj::new()
        .text("protocol", &out.protocol)
        .list("parties", parties)
        .obj("baseline_work", baseline)
        .list("branches", branches)
        .obj("expected_work", expected)
        .num("expected_total_work", out.expected_total_work(), e)
        .obj("interceptor_work", work_obj(&out.interceptor_work, env))
        .num("broadcast_entropy", out.broadcast_entropy_bits, "bit")
}

pub fn protocol(args: &ProtocolArgs, env: &Env) -> CmdResult {
    let reject = |flag: &str, present: bool| {
        if present {
            Err(CliError::Usage(format!(
                "{flag} does not apply to this protocol"
            )))
        } else {
            Ok(())
        }
    };
    let kind = args.kind;
    reject("--intercept", args.intercept && kind != ProtocolKind::Bell)?;
    reject(
        "--n",
        args.n.is_some() && matches!(kind, ProtocolKind::Bell | ProtocolKind::Classical),
    )?;
    reject(
        "--reveal",
        !args.reveal.is_empty() && kind != ProtocolKind::Parity,
    )?;
    reject(
        "--channels",
        args.channels.is_some() && kind != ProtocolKind::Parity,
    )?;
    reject(
        "--initiator",
        args.initiator.is_some() && kind != ProtocolKind::Ghz,
    )?;

    let mut rng = env.rng();
    let mut extra = None;
    let outcome = match kind {
        ProtocolKind::Bell => bell_protocol(&env.ctx, args.intercept)?,
        ProtocolKind::Classical => classical_pair_protocol(&env.ctx)?,
        ProtocolKind::Ghz => {
            ghz_unlock(args.n.unwrap_or(3), args.initiator.unwrap_or(0), &env.ctx)?
        }
        ProtocolKind::Parity => {
            let n = args.n.unwrap_or(3);
            if let Some(count) = args.channels {
                extra = Some(parity_checks(n, count, &mut rng)?);
            }
            parity_unlock(n, &args.reveal, &env.ctx)?
        }
    };
    outcome.check_work_bounds(&env.ctx)?;
    let mut report = protocol_obj(&outcome, env).obj("context", context_obj(env));
    if let Some(checks) = extra {
        report = report.obj("no_information_check", checks);
    }
    if let Some(shots) = args.shots {
        let counts = sample_branches(&outcome, shots, &mut rng)?;
        let sampled: f64 = counts
            .iter()
            .zip(&outcome.branches)
            .map(|(&c, b)| c as f64 * b.total_work())
            .sum();
        let mean = if shots == 0 {
            0.0
        } else {
            sampled / shots as f64
        };
        report = report.obj(
            "sampling",
            Obj::new()
                .int("shots", shots as u64, "run")
                .ints("branch_counts", &counts, "run")
                .num("mean_total_work", mean, env.energy_units()),
        );
    }
    Ok(Output::new(report))
}

fn parity_checks(n: usize, count: usize, rng: &mut ChaCha8Rng) -> Result<Obj, CliError> {
    let mut max = [0.0f64; 3];
    for _ in 0..count {
        let kraus = rng.random_range(1..=4);
        let ch = random_parity_channel(n, kraus, rng)?;
        let r = parity_no_information_check(n, &ch)?;
        max[0] = max[0].max(r.rho1_deviation);
        max[1] = max[1].max(r.rho1_formula_deviation);
        max[2] = max[2].max(r.rho12_formula_deviation);
    }
    Ok(Obj::new()
        .int("channels", count as u64, "channel")
        .num("max_rho1_deviation", max[0], "1")
        .num("max_rho1_formula_deviation", max[1], "1")
        .num("max_rho12_formula_deviation", max[2], "1"))
}

pub fn holevo(args: &AlphabetArg) -> CmdResult {
    let a = load_alphabet(&args.alphabet)?;
    let report = Obj::new()
        .num("chi", holevo_chi(&a)?, "bit")
        .num("ensemble_entropy", ensemble_state(&a).entropy()?, "bit")
        .num("avg_letter_entropy", avg_letter_entropy(&a)?, "bit")
        .num("capacity_bits", a.capacity_bits(), "bit")
        .num("log2_letters", (a.len() as f64).log2(), "bit")
        .int("letters", a.len() as u64, "letter");
    Ok(Output::new(report))
}

pub fn tradeoff(args: &TradeoffArgs, env: &Env) -> CmdResult {
    let a = load_alphabet(&args.alphabet.alphabet)?;
    let p = tradeoff_point(&a, &env.ctx)?;
    let curve = tradeoff_curve(&a, &env.ctx)?;
    let point = |c: f64, e: f64| {
        Obj::new()
            .num("comm_bits", c, "bit")
            .num("energy_bits", e, "bit")
    };
    let boundary = curve.boundary(args.steps.max(2));

    let mut rows: Vec<Vec<String>> = boundary
        .iter()
        .map(|b| {
            vec![
                "boundary".into(),
                String::new(),
                num(b.comm_bits),
                num(b.energy_bits),
            ]
        })
        .collect();
    let mut report = Obj::new()
        .num("energy_bits", p.energy_bits, "bit")
        .num("energy", p.energy, env.energy_units())
        .num("comm_bits", p.comm_bits, "bit")
        .num("avg_letter_entropy", p.avg_letter_entropy, "bit")
        .num("capacity_bits", p.capacity_bits, "bit")
        .num("identity_residual", p.identity_residual, "bit")
        .obj(
            "max_comm",
            point(curve.max_comm.comm_bits, curve.max_comm.energy_bits),
        )
        .obj(
            "max_energy",
            point(curve.max_energy.comm_bits, curve.max_energy.energy_bits),
        )
        .list(
            "boundary",
            boundary
                .iter()
                .map(|b| point(b.comm_bits, b.energy_bits))
                .collect(),
        )
        .obj("context", context_obj(env));
    if let Some(n) = args.block {
        let seq = blocking_sequence(&a, n)?;
        rows.extend(seq.iter().map(|b| {
            vec![
                "blocking".into(),
                b.n.to_string(),
                num(b.comm_bits_per_letter),
                num(b.energy_bits_per_letter),
            ]
        }));
        report = report.list(
            "blocking",
            seq.iter()
                .map(|b| {
                    Obj::new()
                        .int("n", b.n as u64, "letter")
                        .num("comm_bits_per_letter", b.comm_bits_per_letter, "bit")
                        .num("energy_bits_per_letter", b.energy_bits_per_letter, "bit")
                        .num(
                            "energy_bound",
                            b.capacity_bits - b.avg_letter_entropy,
                            "bit",
                        )
                })
                .collect(),
        );
    }
    let table = Table {
        header: ["series", "n", "comm_bits", "energy_bits"]
            .map(String::from)
            .to_vec(),
        rows,
    };
    Ok(Output::with_table(report, table))
}

fn typical_obj(t: &TypicalSubspace) -> Obj {
    Obj::new()
        .int("block_length", t.block_length as u64, "letter")
        .num("delta", t.delta, "bit")
        .num("source_entropy", t.source_entropy, "bit")
        .opt_int("dim", t.dim.and_then(|d| u64::try_from(d).ok()), "1")
        .num("log2_dim", t.log2_dim, "bit")
        .num("dimension_bound_bits", t.dimension_bound_bits(), "bit")
        .num("capture_probability", t.capture_probability, "1")
        .num("epsilon", t.epsilon(), "1")
        .text(
            "method",
            match t.method {
                TypicalMethod::Dense => "dense",
                TypicalMethod::TypeClasses => "type_classes",
            },
        )
}

pub fn typical(args: &TypicalArgs) -> CmdResult {
    let rho = match (&args.alphabet, args.p) {
        (Some(path), _) => ensemble_state(&load_alphabet(path)?),
        (None, Some(p)) => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Argument(format!("p = {p} is outside [0, 1]")).into());
            }
            DensityMatrix::diagonal(&[2], &[1.0 - p, p])?
        }
        (None, None) => {
            return Err(CliError::Usage(
                "one of --p or --alphabet is required".into(),
            ))
        }
    };
    let mut points = Vec::with_capacity(args.block_lengths.len());
    let mut rows = Vec::with_capacity(args.block_lengths.len());
    for &l in &args.block_lengths {
        let t = match args.method {
            MethodArg::Auto => typical_subspace(&rho, l, args.delta)?,
            MethodArg::Dense => typical_subspace_dense(&rho, l, args.delta)?,
            MethodArg::Types => typical_subspace_by_types(&rho, l, args.delta)?,
        };
        rows.push(vec![
            l.to_string(),
            t.dim.map(|d| d.to_string()).unwrap_or_default(),
            num(t.log2_dim),
            num(t.dimension_bound_bits()),
            num(t.capture_probability),
        ]);
        points.push(typical_obj(&t));
    }
    let table = Table {
        header: [
            "L",
            "dim",
            "log2_dim",
            "dimension_bound_bits",
            "capture_probability",
        ]
        .map(String::from)
        .to_vec(),
        rows,
    };
    Ok(Output::with_table(Obj::new().list("points", points), table))
}

pub fn refactor(args: &RefactorArgs, env: &Env) -> CmdResult {
    let a = load_alphabet(&args.alphabet.alphabet)?;
    let r = refactorization_ledger(&a, args.block_length, args.delta, &env.ctx)?;
    let e = env.energy_units();
    let mut report = Obj::new()
        .int("block_length", r.block_length as u64, "letter")
        .num("delta", r.delta, "bit")
        .num("capacity_bits", r.capacity_bits, "bit")
        .num("source_entropy", r.source_entropy, "bit")
        .num("log2_typical_dim", r.log2_typical_dim, "bit")
        .num("success_probability", r.success_probability, "1")
        .num("epsilon", r.epsilon, "1")
        .num("w1", r.w1, e)
        .num("average_work", r.average_work, e)
        .num("w_ancilla", r.w_ancilla, e)
        .num("w_ancilla_bound", r.w_ancilla_bound, e)
        .num("net_per_letter", r.net_per_letter, e)
        .num("lower_bound", r.lower_bound, e)
        .num("upper_bound", r.upper_bound, e)
        .flag("within_bracket", r.within_bracket)
        .obj("context", context_obj(env));
    if args.unitary {
        let u = verify_refactorization_unitary(&a, args.block_length, args.delta)?;
        report = report.obj(
            "unitary",
            Obj::new()
                .int("codeword_dim", u.codeword_dim as u64, "1")
                .int("ancilla_dim", u.ancilla_dim as u64, "1")
                .num("unitarity_residual", u.unitarity_residual, "1")
                .num("mapping_residual", u.mapping_residual, "1")
                .num("zero_register_population", u.zero_register_population, "1")
                .num("capture_probability", u.capture_probability, "1"),
        );
    }
    Ok(Output::new(report))
}

fn criterion_obj(c: &CriterionResult) -> Obj {
    let checks = c
        .checks
        .iter()
        .map(|k| {
            Obj::new()
                .text("label", &k.label)
                .num("measured", k.measured, k.units)
                .num("tolerance", k.tolerance, k.units)
                .flag("passed", k.passed)
        })
        .collect();
    let mut o = Obj::new()
        .int("id", c.id as u64, "1")
        .text("name", &c.name)
        .flag("passed", c.passed)
        .list("checks", checks);
    if let Some(e) = &c.error {
        o = o.text("error", e);
    }
    o
}

/// Runs the selected criteria twice and compares the serialized reports.
pub fn verify(args: &VerifyArgs, env: &Env) -> Result<(Output, bool), CliError> {
    let seed = env.config.seed;
    let run = || -> Result<Vec<CriterionResult>, CliError> {
        match args.criterion {
            None => Ok(run_suite(seed).criteria),
            Some(id) => run_criterion(id, seed).map(|c| vec![c]).ok_or_else(|| {
                CliError::Usage(format!("criterion must be in 1..={CRITERIA}, got {id}"))
            }),
        }
    };
    let first = run()?;
    let second = run()?;
    let render = |cs: &[CriterionResult]| {
        Value::from(Obj::new().list("criteria", cs.iter().map(criterion_obj).collect())).to_string()
    };
    let deterministic = render(&first) == render(&second);
    let passed = deterministic && first.iter().all(|c| c.passed);

    let rows = first
        .iter()
        .flat_map(|c| {
            c.checks.iter().map(move |k| {
                vec![
                    c.id.to_string(),
                    k.label.clone(),
                    num(k.measured),
                    num(k.tolerance),
                    k.units.to_owned(),
                    k.passed.to_string(),
                ]
            })
        })
        .collect();
    let table = Table {
        header: [
            "criterion",
            "check",
            "measured",
            "tolerance",
            "units",
            "passed",
        ]
        .map(String::from)
        .to_vec(),
        rows,
    };
    let report = Obj::new()
        .int("seed", seed, "1")
        .flag("deterministic", deterministic)
        .flag("passed", passed)
        .list("criteria", first.iter().map(criterion_obj).collect());
    Ok((Output::with_table(report, table), passed))
}
