//! One function per subcommand. Each returns the report text; nothing here
//! reads the clock or ambient entropy.

use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use num_rational::{BigRational, Rational64};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use nwlab_core::adversary::{
    attack_success_census, estimate_advantage, exact_advantage, leak_bit_length,
    run_attacker, run_leak, AdvantageMode, DistinguisherSpec, LeakOutput,
};
use nwlab_core::derand::{
    derandomize_decision, derandomize_search, pad, ExceptionTable, NoisyDecider,
};
use nwlab_core::design::{gen_design_greedy, gen_design_km, design_from_polynomials, verify_design};
use nwlab_core::hamming::{bad_set_bound, binary_entropy, hamming_ball_volume, hamming_distance};
use nwlab_core::machines::{decode, enumerate_machines, run_traced, InputTape, OutcomeDistribution};
use nwlab_core::nwprg::{derive_paper_params, leakage_exponents};
use nwlab_core::searchprob::{finder_failure_bound, ToySearch};
use nwlab_core::{BitString, HardnessParams, HardnessProblem, Oracle, RandomStream, TruncationBudget};

use crate::config::{base_dir, load, load_design_file, load_or_default, parse_bits, DesignSpec, PrgConfig};
use crate::CliError;

pub enum Report {
    Json(String),
    Csv(String),
}

fn to_json<T: Serialize>(value: &T) -> Result<Report, CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Other(e.to_string()))?;
    text.push('\n');
    Ok(Report::Json(text))
}

fn required<T: serde::de::DeserializeOwned>(config: Option<&Path>) -> Result<T, CliError> {
    match config {
        Some(path) => load(path),
        None => Err(CliError::Validation("this subcommand needs --config".into())),
    }
}

/// The target string of a generator config, checked against `n`.
fn target_of(text: &BitString, n: usize) -> Result<BitString, CliError> {
    if text.len() != n {
        return Err(CliError::Validation(format!(
            "target has {} bits but the generator takes targets of {n}",
            text.len()
        )));
    }
    Ok(text.clone())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DesignGenConfig {
    method: DesignSpec,
}

pub fn design_gen(config: Option<&Path>) -> Result<Report, CliError> {
    let cfg: DesignGenConfig = required(config)?;
    let base = base_dir(config);
    let report = match &cfg.method {
        DesignSpec::Greedy { d, r, s, m } => {
            let build = gen_design_greedy(*d, *r, *s, *m)?;
            json!({"method": "greedy", "design": build.design, "requested": build.requested, "shortfall": build.shortfall})
        }
        DesignSpec::Km { d, alpha } => {
            let km = gen_design_km(*d, *alpha)?;
            json!({"method": "km", "design": km.design, "size_floor": km.size_floor, "size_exponent": km.size_exponent,
                   "integral": km.integral, "meets_floor": km.meets_floor, "notes": km.notes})
        }
        DesignSpec::Polynomial { p, degree, m } => {
            let design = design_from_polynomials(*p, *degree, *m)?;
            json!({"method": "polynomial", "design": design})
        }
        other => json!({"method": "given", "design": other.resolve(&base)?}),
    };
    to_json(&report)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DesignVerifyConfig {
    design: DesignSpec,
}

pub fn design_verify(config: Option<&Path>) -> Result<Report, CliError> {
    let cfg: DesignVerifyConfig = required(config)?;
    let design = cfg.design.resolve(&base_dir(config))?;
    to_json(&verify_design(&design))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PrgParamsConfig {
    m: u64,
    #[serde(with = "nwlab_core::text")]
    alpha: Rational64,
    #[serde(default = "default_security")]
    security_constant: u64,
}

fn default_security() -> u64 {
    3
}

pub fn prg_params(config: Option<&Path>) -> Result<Report, CliError> {
    let cfg: PrgParamsConfig = required(config)?;
    let params = derive_paper_params(cfg.m, cfg.alpha, cfg.security_constant)?;
    let exponents = leakage_exponents(&params).map(|(l, r)| [l.to_string(), r.to_string()]);
    let budget = leak_bit_length(&params);
    to_json(&json!({"params": params, "leakage_exponents": exponents, "leak_budget": budget}))
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpandConfig {
    #[serde(default)]
    prg: Option<PrgConfig>,
    #[serde(default)]
    target: Option<BitString>,
    #[serde(default)]
    seed: Option<BitString>,
}

pub struct ExpandFlags {
    pub design: Option<PathBuf>,
    pub oracle: Option<Oracle>,
    pub target: Option<String>,
    pub seed: Option<String>,
    pub m: Option<usize>,
}

pub fn prg_expand(config: Option<&Path>, flags: ExpandFlags) -> Result<Report, CliError> {
    let cfg: ExpandConfig = load_or_default(config)?;
    let base = base_dir(config);
    let mut prg_cfg = match (cfg.prg, &flags.design) {
        (_, Some(path)) => PrgConfig {
            design: DesignSpec::Inline(load_design_file(path)?),
            oracle: Oracle::Target,
            m: None,
        },
        (Some(p), None) => p,
        (None, None) => return Err(CliError::Validation("give a design with --design or a prg in --config".into())),
    };
    if let Some(o) = flags.oracle {
        prg_cfg.oracle = o;
    }
    if flags.m.is_some() {
        prg_cfg.m = flags.m;
    }
    let target = match flags.target {
        Some(t) => parse_bits(&t, "--target")?,
        None => cfg.target.ok_or_else(|| CliError::Validation("missing target".into()))?,
    };
    let seed = match flags.seed {
        Some(s) => parse_bits(&s, "--seed")?,
        None => cfg.seed.ok_or_else(|| CliError::Validation("missing seed".into()))?,
    };
    let prg = prg_cfg.build(&base)?;
    let target = target_of(&target, prg.n())?;
    let output = prg.expand(&target, &seed)?;
    to_json(&json!({
        "params": prg.params(),
        "oracle": prg_cfg.oracle,
        "target": target,
        "seed": seed,
        "output": output,
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EnumerateConfig {
    prg: PrgConfig,
    target: BitString,
}

pub fn prg_enumerate(config: Option<&Path>) -> Result<Report, CliError> {
    let cfg: EnumerateConfig = required(config)?;
    let prg = cfg.prg.build(&base_dir(config))?;
    let target = target_of(&cfg.target, prg.n())?;
    let mut csv = String::from("seed,output\n");
    for (seed, output) in prg.enumerate_outputs(&target)? {
        csv.push_str(&format!("{seed},{output}\n"));
    }
    Ok(Report::Csv(csv))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AttackConfig {
    prg: PrgConfig,
    target: BitString,
    #[serde(default)]
    distinguisher: Option<DistinguisherSpec>,
    #[serde(default)]
    mode: Option<AdvantageMode>,
}

fn distinguisher(cfg: &AttackConfig) -> Result<&DistinguisherSpec, CliError> {
    cfg.distinguisher
        .as_ref()
        .ok_or_else(|| CliError::Validation("invalid config at `distinguisher`: missing".into()))
}

pub fn attack_advantage(config: Option<&Path>, seed: u64) -> Result<Report, CliError> {
    let cfg: AttackConfig = required(config)?;
    let prg = cfg.prg.build(&base_dir(config))?;
    let x = target_of(&cfg.target, prg.n())?;
    let d = distinguisher(&cfg)?;
    let report = match cfg.mode.clone().unwrap_or(AdvantageMode::Exact) {
        AdvantageMode::Exact => exact_advantage(d, &prg, &x)?,
        AdvantageMode::Sampled { samples } => {
            let mut rng = RandomStream::new(seed).split("advantage");
            estimate_advantage(d, &prg, &x, samples, &mut rng)?
        }
    };
    to_json(&report)
}

pub fn attack_leak(config: Option<&Path>, seed: u64) -> Result<Report, CliError> {
    let cfg: AttackConfig = required(config)?;
    let prg = cfg.prg.build(&base_dir(config))?;
    let x = target_of(&cfg.target, prg.n())?;
    let params = prg.params();
    let z = prg.truth_table(&x)?;
    let mut rng = RandomStream::new(seed).split("leak");
    let leak = run_leak(&prg, &z, &mut rng)?;
    let serialized = leak.to_bits(&params);
    let mut report = json!({
        "leak": leak,
        "serialized": serialized,
        "serialized_len": LeakOutput::serialized_len(&params, leak.j),
    });
    if let Some(d) = &cfg.distinguisher {
        let guess = run_attacker(&params, &x, &leak, d)?;
        let distance = hamming_distance(&guess, &z)?;
        report["attacker_output"] = json!(guess);
        report["agreement"] = json!(params.n - distance);
    }
    to_json(&report)
}

pub fn attack_census(config: Option<&Path>) -> Result<Report, CliError> {
    let cfg: AttackConfig = required(config)?;
    let prg = cfg.prg.build(&base_dir(config))?;
    let x = target_of(&cfg.target, prg.n())?;
    to_json(&attack_success_census(distinguisher(&cfg)?, &prg, &x)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BallConfig {
    n: u64,
    radius: u64,
}

pub fn lemma_ball(config: Option<&Path>) -> Result<Report, CliError> {
    let cfg: BallConfig = required(config)?;
    let volume = hamming_ball_volume(cfg.n, cfg.radius)?;
    // 2^(n H(r/n)) only bounds the ball for r <= n/2.
    let entropy = if cfg.n > 0 && 2 * cfg.radius <= cfg.n {
        Some(cfg.n as f64 * binary_entropy(cfg.radius as f64 / cfg.n as f64)?)
    } else {
        None
    };
    let holds = entropy.map(|e| log2_big(&volume) <= e + 1e-9);
    to_json(&json!({
        "n": cfg.n,
        "radius": cfg.radius,
        "volume": volume.to_string(),
        "entropy_exponent": entropy,
        "entropy_bound_holds": holds,
    }))
}

fn log2_big(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 53 {
        return (v.iter_u64_digits().next().unwrap_or(0) as f64).log2();
    }
    let shift = bits - 53;
    let top: BigUint = v >> shift;
    (top.iter_u64_digits().next().unwrap_or(0) as f64).log2() + shift as f64
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BadSetConfig {
    n: u64,
    ell: u64,
    dist: u64,
    #[serde(default)]
    pairs: Option<u64>,
}

pub fn lemma_badset(config: Option<&Path>) -> Result<Report, CliError> {
    let cfg: BadSetConfig = required(config)?;
    let bound = bad_set_bound(cfg.n, cfg.ell, cfg.dist)?;
    let volume = hamming_ball_volume(cfg.n, cfg.dist - 1)?;
    let fraction = BigRational::new(bound.clone().into(), (num_bigint::BigInt::from(1u8)) << cfg.n);
    let union = match cfg.pairs {
        Some(pairs) => Some(finder_failure_bound(pairs, cfg.n as usize, cfg.ell as usize, cfg.dist as usize)?.to_string()),
        None => None,
    };
    to_json(&json!({
        "n": cfg.n,
        "ell": cfg.ell,
        "dist": cfg.dist,
        "volume": volume.to_string(),
        "bound": bound.to_string(),
        "fraction_of_strings": fraction.to_string(),
        "union_bound": union,
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CensusConfig {
    hardness: HardnessParams,
    x: BitString,
}

pub fn lemma_census(config: Option<&Path>) -> Result<Report, CliError> {
    let cfg: CensusConfig = required(config)?;
    let problem = HardnessProblem::new(cfg.hardness)?;
    let sweep = problem.random_is_hard_sweep(&cfg.x)?;
    let union = if cfg.hardness.dist >= 1 {
        Some(
            finder_failure_bound(sweep.pairs as u64, cfg.hardness.n, cfg.hardness.ell, cfg.hardness.dist)?
                .to_string(),
        )
    } else {
        None
    };
    to_json(&json!({"sweep": sweep, "union_bound": union}))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HardnessConfig {
    hardness: HardnessParams,
    x: BitString,
    #[serde(default)]
    r: Option<BitString>,
    #[serde(default = "one")]
    repetitions: u64,
}

fn one() -> u64 {
    1
}

fn witness(cfg: &HardnessConfig) -> Result<&BitString, CliError> {
    cfg.r
        .as_ref()
        .ok_or_else(|| CliError::Validation("invalid config at `r`: missing".into()))
}

pub fn hardness_oracle(config: Option<&Path>) -> Result<Report, CliError> {
    let cfg: HardnessConfig = required(config)?;
    let problem = HardnessProblem::new(cfg.hardness)?;
    to_json(&problem.yes_oracle(&cfg.x, witness(&cfg)?)?)
}

pub fn hardness_verify(config: Option<&Path>, seed: u64) -> Result<Report, CliError> {
    let cfg: HardnessConfig = required(config)?;
    let problem = HardnessProblem::new(cfg.hardness)?;
    let r = witness(&cfg)?;
    let master = RandomStream::new(seed);
    let mut accepted = 0u64;
    for rep in 0..cfg.repetitions {
        let mut rng = master.split(&format!("verifier:{rep}"));
        accepted += problem.verifier(&cfg.x, r, &mut rng)? as u64;
    }
    to_json(&json!({
        "x": cfg.x,
        "r": r,
        "repetitions": cfg.repetitions,
        "accepted": accepted,
        "sample_count": problem.sample_count()?,
        "pairs": problem.pair_count(),
    }))
}

pub fn hardness_find(config: Option<&Path>, seed: u64) -> Result<Report, CliError> {
    let cfg: HardnessConfig = required(config)?;
    let problem = HardnessProblem::new(cfg.hardness)?;
    let master = RandomStream::new(seed);
    let mut found = Vec::new();
    for rep in 0..cfg.repetitions {
        let mut rng = master.split(&format!("finder:{rep}"));
        let r = problem.finder(&cfg.x, &mut rng);
        let membership = problem.yes_oracle(&cfg.x, &r)?.membership;
        found.push(json!({"r": r, "membership": membership}));
    }
    to_json(&json!({"x": cfg.x, "candidates": found}))
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerandConfig<E> {
    #[serde(default)]
    problem: Option<PathBuf>,
    #[serde(default)]
    prg: Option<PathBuf>,
    #[serde(default)]
    input: Option<BitString>,
    #[serde(default)]
    pad_target: Option<usize>,
    #[serde(default = "ExceptionTable::default")]
    exceptions: ExceptionTable<E>,
}

pub struct DerandFlags {
    pub problem: Option<PathBuf>,
    pub prg: Option<PathBuf>,
    pub input: Option<String>,
}

struct DerandSetup<P, E> {
    problem: P,
    prg: nwlab_core::TargetedPrg,
    input: BitString,
    pad_target: usize,
    exceptions: ExceptionTable<E>,
}

fn derand_setup<P, E>(config: Option<&Path>, flags: DerandFlags) -> Result<DerandSetup<P, E>, CliError>
where
    P: serde::de::DeserializeOwned,
    E: serde::de::DeserializeOwned,
{
    let cfg: DerandConfig<E> = match config {
        Some(path) => load(path)?,
        None => DerandConfig {
            problem: None,
            prg: None,
            input: None,
            pad_target: None,
            exceptions: ExceptionTable::default(),
        },
    };
    let base = base_dir(config);
    let problem_path = flags
        .problem
        .or_else(|| cfg.problem.map(|p| base.join(p)))
        .ok_or_else(|| CliError::Validation("missing --problem".into()))?;
    let prg_path = flags
        .prg
        .or_else(|| cfg.prg.map(|p| base.join(p)))
        .ok_or_else(|| CliError::Validation("missing --prg".into()))?;
    let input = match flags.input {
        Some(t) => parse_bits(&t, "--input")?,
        None => cfg.input.ok_or_else(|| CliError::Validation("missing --input".into()))?,
    };
    let problem: P = load(&problem_path)?;
    let prg_cfg: PrgConfig = load(&prg_path)?;
    let prg = prg_cfg.build(&base_dir(Some(&prg_path)))?;
    let pad_target = cfg.pad_target.unwrap_or(prg.n());
    Ok(DerandSetup {
        problem,
        prg,
        input,
        pad_target,
        exceptions: cfg.exceptions,
    })
}

/// Problem fixture files: `{label, kind, params}`.
#[derive(Deserialize)]
struct Fixture<P> {
    #[serde(default)]
    #[allow(dead_code)]
    label: Option<String>,
    #[serde(flatten)]
    problem: P,
}

#[derive(Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
enum DeciderFixture {
    Noisy(NoisyDecider),
}

pub fn derand_decision(config: Option<&Path>, flags: DerandFlags) -> Result<Report, CliError> {
    let s: DerandSetup<Fixture<DeciderFixture>, bool> = derand_setup(config, flags)?;
    let DeciderFixture::Noisy(decider) = s.problem.problem;
    let run = derandomize_decision(&decider, &s.prg, &s.input, s.pad_target, &s.exceptions)?;
    to_json(&json!({
        "input": s.input,
        "padded": pad(&s.input, s.pad_target).raw,
        "answer": run.answer,
        "accepting_seeds": run.accepting,
        "seeds_tried": run.seeds_tried,
        "from_exception": run.from_exception,
    }))
}

pub fn derand_search(config: Option<&Path>, flags: DerandFlags) -> Result<Report, CliError> {
    let s: DerandSetup<Fixture<ToySearch>, BitString> = derand_setup(config, flags)?;
    let run = derandomize_search(&s.problem.problem, &s.prg, &s.input, s.pad_target, &s.exceptions)?;
    to_json(&json!({
        "input": s.input,
        "padded": pad(&s.input, s.pad_target).raw,
        "witness": run.witness,
        "seed_used": run.seed_used,
        "seeds_tried": run.seeds_tried,
        "from_exception": run.from_exception,
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VmRunConfig {
    /// Machine description bits.
    program: BitString,
    #[serde(default)]
    inputs: Vec<BitString>,
    budget: TruncationBudget,
    max_output: usize,
    #[serde(default)]
    trace: bool,
    /// Also report the exact output distribution.
    #[serde(default)]
    exact: bool,
}

pub fn vm_run(config: Option<&Path>, seed: u64) -> Result<Report, CliError> {
    let cfg: VmRunConfig = required(config)?;
    let machine = decode(&cfg.program);
    let parts: Vec<&BitString> = cfg.inputs.iter().collect();
    let tape = InputTape::new(&parts);
    let mut rng = RandomStream::new(seed).split("vm");
    let (outcome, trace) = run_traced(&machine, &tape, &mut rng, &cfg.budget, cfg.max_output);
    let mut report = json!({
        "machine": machine.to_string(),
        "outcome": outcome,
        "random_bits_used": rng.position(),
    });
    if cfg.trace {
        report["trace"] = json!(trace);
    }
    if cfg.exact {
        let dist = OutcomeDistribution::exact(&machine, &tape, &cfg.budget, cfg.max_output)?;
        let entries: Vec<Value> = dist
            .entries
            .iter()
            .map(|(o, p)| json!({"outcome": o, "probability": p.to_string()}))
            .collect();
        report["distribution"] = json!({"paths": dist.paths, "entries": entries});
    }
    to_json(&report)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VmEnumerateConfig {
    max_bits: usize,
}

pub fn vm_enumerate(config: Option<&Path>) -> Result<Report, CliError> {
    let cfg: VmEnumerateConfig = required(config)?;
    let mut csv = String::from("description,program\n");
    for (desc, machine) in enumerate_machines(cfg.max_bits)? {
        csv.push_str(&format!("{desc},\"{machine}\"\n"));
    }
    Ok(Report::Csv(csv))
}
