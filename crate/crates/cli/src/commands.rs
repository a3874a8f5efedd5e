use std::collections::BTreeMap;
use std::path::Path;

use num_traits::ToPrimitive;
use serde_json::{Map, Value};

use stabtherm::barrier::{
    generalized_barrier_exact, low_temp_gap_bound, max_penalty, PenaltyMode,
    DEFAULT_EXHAUSTIVE_CAP,
};
use stabtherm::high_temp::{critical_beta, first_order_beta_estimate, high_temp_gap_bound, KappaVariant};
use stabtherm::liouvillian::{compute_gap, mixing_time_bound, GibbsData, DEFAULT_DENSE_CAP};
use stabtherm::model::parse_rational;
use stabtherm::model_io::{
    build_ising, build_toric, builtin_ordering, parse_model, parse_ordering, serialize_model,
    serialize_ordering,
};
use stabtherm::verify::{verify, Status, VerifyOptions};
use stabtherm::{BathSpec, Error, Family, GapMethod, RatePreset, StabilizerModel};

use crate::report::{bath_digest, model_digest, num, rational, Report};
use crate::{BathArgs, BuildLattice, CliError, Command};

type CliResult<T> = std::result::Result<T, CliError>;

pub fn dispatch(command: &Command) -> CliResult<Report> {
    match command {
        Command::Build { lattice } => build(lattice),
        Command::Validate { model } => validate(model),
        Command::HighTemp { model, beta, variant, bath } => high_temp(model, *beta, variant, bath),
        Command::CriticalBeta { model, variant, tol } => critical(model, variant, *tol),
        Command::Barrier { model, ordering, exhaustive: _, samples, seed, beta, bath } => {
            barrier(model, ordering, samples.zip(*seed), *beta, bath)
        }
        Command::BarrierExact { model } => barrier_exact(model),
        Command::Gap { model, beta, bath, generator, method } => gap(model, *beta, bath, generator, method),
        Command::MixingTime { model, beta, gap, bath } => mixing_time(model, *beta, gap, bath),
        Command::Verify { model, beta, bath, samples, seed } => {
            run_verify(model, *beta, bath, *samples, *seed)
        }
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn parse_usize(s: &str, what: &str) -> CliResult<usize> {
    s.parse()
        .map_err(|_| Error::Argument(format!("invalid {what} '{s}'")).into())
}

/// A `.stab` path or `builtin:toric:<L>` / `builtin:ising:<dims>:<L>[:open]`.
pub fn load_model(spec: &str) -> CliResult<StabilizerModel> {
    let Some(rest) = spec.strip_prefix("builtin:") else {
        return Ok(parse_model(&read(Path::new(spec))?)?);
    };
    let parts: Vec<&str> = rest.split(':').collect();
    match parts.as_slice() {
        ["toric", l] => Ok(build_toric(parse_usize(l, "lattice size")?)?),
        ["ising", d, l] => Ok(build_ising(parse_usize(d, "dimension")?, parse_usize(l, "lattice size")?, true)?),
        ["ising", d, l, "open"] => {
            Ok(build_ising(parse_usize(d, "dimension")?, parse_usize(l, "lattice size")?, false)?)
        }
        _ => Err(Error::Argument(format!(
            "unknown builtin model '{spec}' (expected builtin:toric:<L> or builtin:ising:<dims>:<L>[:open])"
        ))
        .into()),
    }
}

/// Lines of `<ω> <h(ω)>`, `#` comments allowed.
fn parse_rates(text: &str) -> CliResult<RatePreset> {
    let mut table = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let bad = |message: String| Error::Parse { line: idx + 1, column: 1, message };
        if toks.len() != 2 {
            return Err(bad("expected '<omega> <rate>'".into()).into());
        }
        let omega = parse_rational(toks[0]).ok_or_else(|| bad(format!("invalid frequency '{}'", toks[0])))?;
        let rate: f64 = toks[1].parse().map_err(|_| bad(format!("invalid rate '{}'", toks[1])))?;
        if table.insert(omega, rate).is_some() {
            return Err(bad(format!("duplicate frequency '{}'", toks[0])).into());
        }
    }
    Ok(RatePreset::Custom(table))
}

fn load_bath(args: &BathArgs, beta: f64, model: &StabilizerModel) -> CliResult<BathSpec> {
    let preset = match &args.rates {
        Some(path) => parse_rates(&read(path)?)?,
        None => args.bath.parse::<RatePreset>()?,
    };
    let bath = BathSpec::new(beta, preset)?;
    bath.check_model(model)?;
    Ok(bath)
}

fn header(command: &str, model: &StabilizerModel) -> Report {
    let mut r = Report::new(command);
    r.set("model", model_digest(model));
    r
}

fn model_label(model: &StabilizerModel) -> String {
    format!(
        "{} ({} qubits, {} terms, rank {})",
        model.name().unwrap_or("model"),
        model.n_qubits(),
        model.n_generators(),
        model.rank()
    )
}

fn build(lattice: &BuildLattice) -> CliResult<Report> {
    let (model, output) = match lattice {
        BuildLattice::Toric { l, output } => (build_toric(*l)?, output),
        BuildLattice::Ising { dims, l, open, output } => (build_ising(*dims, *l, !open)?, output),
    };
    write(output, &serialize_model(&model))?;
    let mut r = header("build", &model);
    r.set("output", Value::String(output.display().to_string()));
    r.line(format!("wrote {} to {}", model_label(&model), output.display()));
    Ok(r)
}

fn validate(spec: &str) -> CliResult<Report> {
    let model = load_model(spec)?;
    let mut r = header("validate", &model);
    r.set("valid", Value::Bool(true));
    r.line(format!("ok: {}", model_label(&model)));
    Ok(r)
}

fn variants(name: &str) -> CliResult<Vec<KappaVariant>> {
    if name == "all" {
        Ok(KappaVariant::ALL.to_vec())
    } else {
        Ok(vec![name.parse()?])
    }
}

fn high_temp(spec: &str, beta: f64, variant: &str, bath_args: &BathArgs) -> CliResult<Report> {
    let model = load_model(spec)?;
    let bath = load_bath(bath_args, beta, &model)?;
    let mut r = header("high-temp", &model);
    r.set("bath", bath_digest(&bath, &model));
    r.set("formula", Value::String("thm1".into()));
    let mut out = Map::new();
    for v in variants(variant)? {
        let b = high_temp_gap_bound(&model, &bath, v)?;
        let mut m = Map::new();
        m.insert("kappa".into(), num(b.kappa.kappa));
        m.insert("argmax_site".into(), Value::from(b.kappa.argmax_site));
        m.insert("gap_lower_bound".into(), num(b.value));
        m.insert("h_min".into(), num(b.h_min));
        m.insert("s_star".into(), Value::from(b.s_star));
        m.insert("s_star_min".into(), Value::from(b.s_star_min));
        m.insert("warning".into(), b.warning.clone().map_or(Value::Null, Value::String));
        out.insert(v.name().into(), Value::Object(m));
        r.line(format!("{:<12} kappa = {:.6e}  gap >= {:.6e}", v.name(), b.kappa.kappa, b.value));
        if let Some(w) = b.warning {
            r.line(format!("  warning: {w}"));
        }
    }
    r.set("variants", Value::Object(out));
    Ok(r)
}

fn critical(spec: &str, variant: &str, tol: f64) -> CliResult<Report> {
    let model = load_model(spec)?;
    let v: KappaVariant = variant.parse()?;
    let c = critical_beta(&model, v, tol)?;
    let mut r = header("critical-beta", &model);
    r.set("variant", Value::String(v.name().into()));
    r.set("tolerance", num(tol));
    r.set("beta_star", num(c.beta_star));
    r.set("beta_star_finite", Value::Bool(c.is_finite()));
    r.set("inverse_beta_star", num(1.0 / c.beta_star));
    r.set("kappa_at_root", num(c.kappa_at_root));
    r.set("iterations", Value::from(c.iterations));
    r.set("first_order_estimate", num(first_order_beta_estimate(&model)));
    if c.is_finite() {
        r.line(format!("beta* = {:.9e}  (1/beta* = {:.6})", c.beta_star, 1.0 / c.beta_star));
    } else {
        r.line("beta* = inf: kappa stays below 1 for every beta");
    }
    Ok(r)
}

fn barrier(
    spec: &str,
    ordering_spec: &str,
    sampling: Option<(u64, u64)>,
    beta: Option<f64>,
    bath_args: &BathArgs,
) -> CliResult<Report> {
    let model = load_model(spec)?;
    let ordering = match ordering_spec.strip_prefix("builtin:") {
        Some(name) => builtin_ordering(name, &model)?,
        None => parse_ordering(&read(Path::new(ordering_spec))?, &model)?,
    };
    let mode = match sampling {
        Some((count, seed)) => PenaltyMode::Sampled { count, seed },
        None => PenaltyMode::Exhaustive { cap: DEFAULT_EXHAUSTIVE_CAP },
    };
    let mp = max_penalty(&model, &ordering, mode)?;
    let j = model.max_coupling();
    let over_j = &mp.penalty / j;
    let mut r = header("barrier", &model);
    r.set("ordering", Value::String(ordering_spec.into()));
    r.set("l_star", Value::from(ordering.l_star()));
    r.set("mode", Value::String(if mp.exact { "exhaustive" } else { "sampled" }.into()));
    if let Some((count, seed)) = sampling {
        r.set("samples", Value::from(count));
        r.set("seed", Value::from(seed));
    }
    r.set("evaluated", Value::from(mp.evaluated));
    r.set("exact", Value::Bool(mp.exact));
    r.set("max_penalty", rational(&mp.penalty));
    r.set("max_penalty_over_j", num(over_j.to_f64().unwrap_or(f64::NAN)));
    r.set("violated_count", Value::from(mp.violated_count));
    r.set("argmax_step", Value::from(mp.argmax_step));
    r.set("witness", Value::String(mp.witness.to_string()));
    r.line(format!(
        "max penalty = {} = {:.6} J ({}, {} Paulis)",
        rational(&mp.penalty).as_str().unwrap_or_default(),
        over_j.to_f64().unwrap_or(f64::NAN),
        if mp.exact { "exhaustive" } else { "sampled lower bound" },
        mp.evaluated
    ));
    r.line(format!("witness {} at step {}", mp.witness, mp.argmax_step));
    if let Some(beta) = beta {
        let bath = load_bath(bath_args, beta, &model)?;
        let h_min = bath.h_min(&model)?;
        let bound = low_temp_gap_bound(&mp.penalty, beta, h_min, ordering.l_star());
        let mut m = Map::new();
        m.insert("formula".into(), Value::String("eq5".into()));
        m.insert("bath".into(), bath_digest(&bath, &model));
        m.insert("value".into(), num(bound));
        r.set("gap_lower_bound", Value::Object(m));
        r.line(format!("gap >= {bound:.6e} at beta = {beta}"));
    }
    Ok(r)
}

fn barrier_exact(spec: &str) -> CliResult<Report> {
    let model = load_model(spec)?;
    let (barrier, ordering) = generalized_barrier_exact(&model)?;
    let mut r = header("barrier-exact", &model);
    r.set("barrier", rational(&barrier));
    r.set("ordering", Value::String(serialize_ordering(&ordering)));
    r.line(format!(
        "generalized barrier = {}",
        rational(&barrier).as_str().unwrap_or_default()
    ));
    Ok(r)
}

fn default_method(model: &StabilizerModel) -> GapMethod {
    if model.n_qubits() <= DEFAULT_DENSE_CAP {
        GapMethod::Dense
    } else {
        GapMethod::Coset
    }
}

fn gap(spec: &str, beta: f64, bath_args: &BathArgs, generator: &str, method: &str) -> CliResult<Report> {
    let model = load_model(spec)?;
    let bath = load_bath(bath_args, beta, &model)?;
    let family: Family = generator.parse()?;
    let method: GapMethod = method.parse()?;
    let g = compute_gap(&model, &bath, family, method)?;
    let mut r = header("gap", &model);
    r.set("bath", bath_digest(&bath, &model));
    r.set("generator", Value::String(family.name().into()));
    r.set("method", Value::String(g.method.name().into()));
    r.set("gap", num(g.gap));
    r.set("zero_modes", Value::from(g.zero_modes));
    r.set("largest_eigenvalue", num(g.largest));
    r.set("witness_block", g.witness_block.map_or(Value::Null, Value::from));
    r.line(format!("{family} gap = {:.12e} ({} method)", g.gap, g.method.name()));
    Ok(r)
}

fn mixing_time(spec: &str, beta: f64, gap_arg: &str, bath_args: &BathArgs) -> CliResult<Report> {
    let model = load_model(spec)?;
    let mut r = header("mixing-time", &model);
    let gap = if gap_arg == "auto" {
        let bath = load_bath(bath_args, beta, &model)?;
        r.set("bath", bath_digest(&bath, &model));
        compute_gap(&model, &bath, Family::Davies, default_method(&model))?.gap
    } else {
        gap_arg
            .parse::<f64>()
            .map_err(|_| Error::Argument(format!("invalid gap '{gap_arg}'")))?
    };
    let gibbs = GibbsData::new(&model, beta)?;
    let t = mixing_time_bound(gap, &gibbs)?;
    r.set("formula", Value::String("tmix".into()));
    r.set("beta", num(beta));
    r.set("gap", num(gap));
    r.set("gap_source", Value::String(if gap_arg == "auto" { "davies" } else { "given" }.into()));
    r.set("t_mix", num(t.exact));
    r.set("t_mix_energy", num(t.energy));
    r.set("log_inverse_norm", num(t.log_inverse_norm));
    r.set("log_inverse_norm_bound", num(t.log_inverse_norm_bound));
    r.line(format!("gap = {gap:.6e}"));
    r.line(format!("t_mix <= {:.6e}  (energy bound {:.6e})", t.exact, t.energy));
    Ok(r)
}

fn run_verify(spec: &str, beta: f64, bath_args: &BathArgs, samples: usize, seed: u64) -> CliResult<Report> {
    let model = load_model(spec)?;
    let bath = load_bath(bath_args, beta, &model)?;
    let options = VerifyOptions {
        poincare_samples: samples,
        seed,
        ..VerifyOptions::default()
    };
    let ledger = verify(&model, &bath, &options)?;
    let mut r = header("verify", &model);
    r.set("bath", bath_digest(&bath, &model));
    r.set("gap_davies", num(ledger.gap_davies));
    r.set("gap_heatbath", num(ledger.gap_heatbath));
    r.set("gap_method", Value::String(ledger.gap_method.name().into()));
    r.line(format!(
        "davies gap = {:.6e}, heat-bath gap = {:.6e}",
        ledger.gap_davies, ledger.gap_heatbath
    ));
    let mut entries = Vec::new();
    for e in &ledger.entries {
        let mut m = Map::new();
        m.insert("name".into(), Value::String(e.name.clone()));
        m.insert("status".into(), Value::String(e.status.name().into()));
        m.insert("value".into(), num(e.value));
        m.insert("bound".into(), num(e.bound));
        m.insert("margin".into(), num(e.margin));
        m.insert("note".into(), e.note.clone().map_or(Value::Null, Value::String));
        entries.push(Value::Object(m));
        let detail = match e.status {
            Status::Skipped => e.note.clone().unwrap_or_default(),
            _ => format!("value {:.6e} bound {:.6e}", e.value, e.bound),
        };
        r.line(format!("{:<7} {:<28} {detail}", e.status.name(), e.name));
    }
    r.set("entries", Value::Array(entries));
    let passed = ledger.all_passed();
    r.set("all_passed", Value::Bool(passed));
    r.ledger_failed = !passed;
    r.line(if passed { "ledger: all checks passed" } else { "ledger: FAILED" });
    Ok(r)
}
