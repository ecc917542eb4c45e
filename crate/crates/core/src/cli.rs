//! The `fairdiv` command line: `gen`, `run`, `check`, `sweep` and
//! `verify-lemmas`. Every command is a pure function of its flags and input
//! files; all randomness flows from `--seed`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fairness::{
    is_alpha_mms, is_balanced, is_ef1, is_efx, is_eq1, is_eqx, lemma1_condition, necessary_ef1,
    necessary_efx, necessary_eq1, necessary_eqx, MmsCap,
};
use crate::model::{
    approx, format_rational, harmonic, int, parse_rational, Allocation, Instance, InstanceFile,
    Rational, ValuationProfile,
};
use crate::polytope::sample_consistent_profile;
use crate::rules::Rule;
use crate::welfare::{
    empirical_distortion, gen_mms_upper, gen_thm1, gen_thm2, social_welfare, DistortionRatio,
    SearchMode, THM1_MAX_GOODS,
};

/// Exit status for a property violation or a lemma counterexample.
pub const EXIT_VIOLATION: i32 = 1;
/// Exit status for bad flags, unreadable input or unmet preconditions.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "fairdiv",
    version,
    about = "Ordinal fair division from top-k rankings"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Run a rule and report the fairness of its output.
    Run(RunArgs),
    /// Check an allocation against an instance.
    Check(CheckArgs),
    /// Worst welfare ratios and EF1 pass rates over a parameter grid.
    Sweep(SweepArgs),
    /// Exhaustively verify the deadline inequalities with exact arithmetic.
    VerifyLemmas(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Profile {
    /// Independent uniformly random top-k rankings.
    Random,
    /// Everyone ranks goods 0..k in order.
    Identical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Generator {
    Random,
    Identical,
    Thm1,
    Thm2,
    MmsUpper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Sampled,
    Exhaustive,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InstanceSource {
    /// Instance file; without it a profile is generated from --n/--m/--k.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value = "random")]
    pub profile: Profile,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum, default_value = "random")]
    pub generator: Generator,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Base of the x^n goods family.
    #[arg(long)]
    pub x: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Attach sampled consistent valuations (random and identical profiles).
    #[arg(long)]
    pub valuations: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub source: InstanceSource,
    /// Rule id, optionally `uniform:<rule>`.
    #[arg(long)]
    pub rule: String,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Bundles as JSON, e.g. `[[0,2],[1,3]]`.
    #[arg(long)]
    pub allocation: String,
    /// Properties that must hold; exit 1 otherwise.
    #[arg(long, value_delimiter = ',', default_value = "necessary-ef1")]
    pub require: Vec<String>,
    /// Approximation factor for the `mms` property, as `num/den`.
    #[arg(long, default_value = "1")]
    pub alpha: String,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_value = "ef1,mms,round-robin")]
    pub rules: Vec<String>,
    #[arg(long, default_value_t = 2)]
    pub n_min: usize,
    #[arg(long, default_value_t = 3)]
    pub n_max: usize,
    #[arg(long, default_value_t = 6)]
    pub m_max: usize,
    /// Fixed ranking length; by default every k in 0..=m.
    #[arg(long)]
    pub k: Option<usize>,
    /// Profiles per (n, m, k) cell.
    #[arg(long, default_value_t = 3)]
    pub instances: usize,
    #[arg(long, value_enum, default_value = "sampled")]
    pub mode: Mode,
    /// Valuation samples per instance in sampled mode.
    #[arg(long, default_value_t = 30)]
    pub samples: usize,
    #[arg(long, value_enum, default_value = "random")]
    pub profile: Profile,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write a per-(rule, n) summary table here.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 50)]
    pub n_max: usize,
    #[arg(long, default_value_t = 5000)]
    pub d_max: usize,
    #[command(flatten)]
    pub output: Output,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match execute(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Gen(args) => {
            let file = cmd_gen(&args)?;
            emit(
                &args.output.out,
                stdout,
                &(serde_json::to_string_pretty(&file)? + "\n"),
            )?;
            Ok(0)
        }
        Command::Run(args) => {
            let report = cmd_run(&args.source, &args.rule)?;
            emit(
                &args.output.out,
                stdout,
                &render_report(&report, args.output.format)?,
            )?;
            Ok(0)
        }
        Command::Check(args) => {
            let report = cmd_check(&args)?;
            emit(
                &args.output.out,
                stdout,
                &render_report(&report, args.output.format)?,
            )?;
            let mut violated = false;
            for name in &args.require {
                match report.get(name.as_str()) {
                    Some(Value::Bool(true)) => {}
                    Some(Value::Bool(false)) => violated = true,
                    _ => {
                        return Err(Error::Precondition(format!(
                            "property `{name}` is not available for this input"
                        )))
                    }
                }
            }
            Ok(if violated { EXIT_VIOLATION } else { 0 })
        }
        Command::Sweep(args) => {
            let rows = cmd_sweep(&args)?;
            let body = match args.format {
                Format::Csv => sweep_csv(&rows)?,
                Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
            };
            emit(&args.out, stdout, &body)?;
            if let Some(path) = &args.summary {
                fs::write(path, summary_table(&rows))?;
            }
            Ok(0)
        }
        Command::VerifyLemmas(args) => {
            let report = cmd_verify_lemmas(args.n_max, args.d_max)?;
            let body = match args.output.format {
                Format::Json => serde_json::to_string_pretty(&report)? + "\n",
                Format::Csv => lemma_csv(&report)?,
            };
            emit(&args.output.out, stdout, &body)?;
            Ok(if report.verified() { 0 } else { EXIT_VIOLATION })
        }
    }
}

fn emit(out: &Option<PathBuf>, stdout: &mut dyn Write, body: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, body)?,
        None => stdout.write_all(body.as_bytes())?,
    }
    Ok(())
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Error::Precondition(format!("missing --{flag}")))
}

fn generate(n: usize, m: usize, k: usize, profile: Profile, seed: u64) -> Result<Instance> {
    match profile {
        Profile::Random => Instance::random(n, m, k, &mut ChaCha8Rng::seed_from_u64(seed)),
        Profile::Identical => Instance::identical(n, m, k),
    }
}

pub fn cmd_gen(args: &GenArgs) -> Result<InstanceFile> {
    let n = args.n;
    let (inst, valuations) = match args.generator {
        Generator::Random | Generator::Identical => {
            let m = require(args.m, "m")?;
            let k = require(args.k, "k")?;
            let profile = if args.generator == Generator::Random {
                Profile::Random
            } else {
                Profile::Identical
            };
            let inst = generate(n, m, k, profile, args.seed)?;
            let v = if args.valuations {
                Some(sample_consistent_profile(&inst, args.seed)?)
            } else {
                None
            };
            (inst, v)
        }
        Generator::Thm1 => (
            gen_thm1(n, require(args.x, "x")?, THM1_MAX_GOODS)?.instance,
            None,
        ),
        Generator::Thm2 => (gen_thm2(n)?.instance, None),
        Generator::MmsUpper => {
            let m = require(args.m, "m")?;
            (gen_mms_upper(n, m, require(args.k, "k")?)?.instance, None)
        }
    };
    let mut file = InstanceFile::from_parts(&inst, valuations.as_ref())?;
    file.seed = Some(args.seed);
    Ok(file)
}

fn load_instance(path: &PathBuf) -> Result<(Instance, Option<ValuationProfile>, Option<u64>)> {
    let file: InstanceFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    let seed = file.seed;
    let (inst, v) = file.into_parts()?;
    Ok((inst, v, seed))
}

fn resolve(source: &InstanceSource) -> Result<(Instance, Option<ValuationProfile>, u64)> {
    match &source.instance {
        Some(path) => {
            let (inst, v, seed) = load_instance(path)?;
            Ok((inst, v, seed.unwrap_or(source.seed)))
        }
        None => {
            let inst = generate(
                require(source.n, "n")?,
                require(source.m, "m")?,
                require(source.k, "k")?,
                source.profile,
                source.seed,
            )?;
            Ok((inst, None, source.seed))
        }
    }
}

/// `Some(result)`, or `None` when the property does not apply.
fn optional(result: Result<bool>) -> Result<Option<bool>> {
    match result {
        Ok(b) => Ok(Some(b)),
        Err(Error::TopKSetsDisagree | Error::CapExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn all_pass(
    support: &[(Allocation, Rational)],
    check: impl Fn(&Allocation) -> Result<bool>,
) -> Result<Option<bool>> {
    let mut all = true;
    for (a, _) in support {
        match optional(check(a))? {
            Some(b) => all &= b,
            None => return Ok(None),
        }
    }
    Ok(Some(all))
}

/// Runs a rule; fairness flags hold for every allocation in the support.
pub fn cmd_run(source: &InstanceSource, rule: &str) -> Result<Value> {
    let rule: Rule = rule.parse()?;
    let (inst, v, seed) = resolve(source)?;
    let support = rule
        .run(&inst)?
        .support(crate::rules::DEFAULT_MAX_EXPANSION_N)?;
    let mut report = json!({
        "instance_id": crate::welfare::instance_fingerprint(&inst),
        "rule": rule.to_string(),
        "seed": seed,
        "necessary_ef1": all_pass(&support, |a| necessary_ef1(a, &inst))?,
        "lemma1": all_pass(&support, |a| lemma1_condition(a, &inst))?,
        "balanced": all_pass(&support, |a| Ok(is_balanced(a)))?,
    });
    match support.as_slice() {
        [(a, _)] => report["allocation"] = json!(a.bundles()),
        _ => {
            report["support"] = support
                .iter()
                .map(|(a, p)| json!({"allocation": a.bundles(), "probability": format_rational(p)}))
                .collect();
        }
    }
    let alpha = rule.base().mms_guarantee(&inst);
    report["alpha"] = json!(alpha.as_ref().map(format_rational));
    if let Some(v) = v {
        report["ef1"] = json!(all_pass(&support, |a| is_ef1(a, &v))?);
        report["alpha_mms"] = match &alpha {
            Some(alpha) => json!(all_pass(&support, |a| is_alpha_mms(
                a,
                &v,
                alpha,
                MmsCap::default()
            ))?),
            None => Value::Null,
        };
        let mut welfare = Rational::zero();
        for (a, p) in &support {
            welfare += social_welfare(a, &v)? * p;
        }
        report["social_welfare"] = json!(format_rational(&welfare));
    }
    Ok(report)
}

pub fn cmd_check(args: &CheckArgs) -> Result<Value> {
    let (inst, v, seed) = load_instance(&args.instance)?;
    let bundles: Vec<Vec<usize>> = serde_json::from_str(&args.allocation)?;
    let a = Allocation::new(bundles, inst.m())?;
    a.check_dims(inst.n(), inst.m())?;
    let alpha = parse_rational(&args.alpha)?;
    let mut report = json!({
        "instance_id": crate::welfare::instance_fingerprint(&inst),
        "seed": seed,
        "allocation": a.bundles(),
        "necessary-ef1": necessary_ef1(&a, &inst)?,
        "necessary-efx": necessary_efx(&a, &inst)?,
        "necessary-eq1": necessary_eq1(&a, &inst)?,
        "necessary-eqx": necessary_eqx(&a, &inst)?,
        "lemma1": optional(lemma1_condition(&a, &inst))?,
        "balanced": is_balanced(&a),
    });
    if let Some(v) = v {
        report["ef1"] = json!(is_ef1(&a, &v)?);
        report["efx"] = json!(is_efx(&a, &v)?);
        report["eq1"] = json!(is_eq1(&a, &v)?);
        report["eqx"] = json!(is_eqx(&a, &v)?);
        report["alpha"] = json!(format_rational(&alpha));
        report["mms"] = json!(optional(is_alpha_mms(&a, &v, &alpha, MmsCap::default()))?);
        report["social_welfare"] = json!(format_rational(&social_welfare(&a, &v)?));
    }
    Ok(report)
}

fn render_report(report: &Value, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(report)? + "\n"),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["key", "value"])?;
            for (key, value) in report.as_object().expect("reports are objects") {
                let text = match value {
                    Value::String(s) => s.clone(),
                    Value::Null => String::new(),
                    other => other.to_string(),
                };
                w.write_record([key.as_str(), text.as_str()])?;
            }
            csv_string(w)
        }
    }
}

fn csv_string(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

/// One instance of a sweep. `ratio` is `None` when the rule does not apply.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub instance_id: String,
    pub rule: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub seed: u64,
    pub mode: String,
    #[serde(serialize_with = "serialize_ratio")]
    pub ratio: Option<DistortionRatio>,
    pub necessary_ef1: Option<bool>,
}

fn serialize_ratio<S: serde::Serializer>(
    r: &Option<DistortionRatio>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

/// SplitMix64 finaliser, used to derive independent per-shard seeds.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn shard_seed(base: u64, n: usize, m: usize, k: usize, idx: usize) -> u64 {
    [n, m, k, idx]
        .iter()
        .fold(mix(base), |acc, &x| mix(acc ^ x as u64))
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<Vec<SweepRow>> {
    let rules = args
        .rules
        .iter()
        .map(|r| r.parse::<Rule>())
        .collect::<Result<Vec<_>>>()?;
    if args.n_min == 0 || args.n_min > args.n_max {
        return Err(Error::Precondition(format!(
            "need 1 <= n-min <= n-max (got {} and {})",
            args.n_min, args.n_max
        )));
    }
    let mode = match args.mode {
        Mode::Exhaustive => SearchMode::ExhaustiveVertices,
        Mode::Sampled => SearchMode::Sampled {
            samples: args.samples,
        },
    };
    let mut cells = Vec::new();
    for n in args.n_min..=args.n_max {
        for m in 1..=args.m_max {
            let ks: Vec<usize> = match args.k {
                Some(k) if k <= m => vec![k],
                Some(_) => Vec::new(),
                None => (0..=m).collect(),
            };
            for k in ks {
                for idx in 0..args.instances {
                    cells.push((n, m, k, idx));
                }
            }
        }
    }
    let mut rows = cells
        .par_iter()
        .map(|&(n, m, k, idx)| {
            let seed = shard_seed(args.seed, n, m, k, idx);
            let inst = generate(n, m, k, args.profile, seed)?;
            let instance_id = format!("n{n}-m{m}-k{k}-i{idx}");
            rules
                .iter()
                .map(|&rule| sweep_one(&inst, rule, mode, seed, instance_id.clone()))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();
    rows.sort_by(|a, b| {
        (a.n, a.m, a.k, &a.instance_id, &a.rule).cmp(&(b.n, b.m, b.k, &b.instance_id, &b.rule))
    });
    Ok(rows)
}

fn sweep_one(
    inst: &Instance,
    rule: Rule,
    mode: SearchMode,
    seed: u64,
    instance_id: String,
) -> Result<SweepRow> {
    let mut row = SweepRow {
        instance_id,
        rule: rule.to_string(),
        n: inst.n(),
        m: inst.m(),
        k: inst.k(),
        seed,
        mode: mode.to_string(),
        ratio: None,
        necessary_ef1: None,
    };
    let support = match rule
        .run(inst)
        .and_then(|ra| ra.support(crate::rules::DEFAULT_MAX_EXPANSION_N))
    {
        Ok(support) => support,
        // the rule does not apply to this cell
        Err(Error::CapExceeded { .. }) => {
            return Err(Error::Precondition(format!(
                "{rule} cannot be expanded for n = {}",
                inst.n()
            )))
        }
        Err(_) => return Ok(row),
    };
    row.necessary_ef1 = all_pass(&support, |a| necessary_ef1(a, inst))?;
    if inst.m() > 0 {
        row.ratio = Some(empirical_distortion(rule, inst, mode, seed)?.worst_ratio);
    }
    Ok(row)
}

/// CSV with columns `instance_id,rule,ratio_num,ratio_den,mode,seed`;
/// infinite ratios are written as `inf,0`.
pub fn sweep_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "instance_id",
        "rule",
        "ratio_num",
        "ratio_den",
        "mode",
        "seed",
    ])?;
    for row in rows {
        let Some(ratio) = &row.ratio else { continue };
        let (num, den) = match ratio {
            DistortionRatio::Finite(r) => (r.numer().to_string(), r.denom().to_string()),
            DistortionRatio::Infinite => ("inf".to_string(), "0".to_string()),
        };
        w.write_record([
            row.instance_id.as_str(),
            row.rule.as_str(),
            &num,
            &den,
            row.mode.as_str(),
            &row.seed.to_string(),
        ])?;
    }
    csv_string(w)
}

/// Human-readable table per (rule, n): instances, how many the rule
/// accepted, the necessary-EF1 pass rate among those, and the worst ratio.
pub fn summary_table(rows: &[SweepRow]) -> String {
    let mut groups: std::collections::BTreeMap<(String, usize), Vec<&SweepRow>> =
        Default::default();
    for row in rows {
        groups
            .entry((row.rule.clone(), row.n))
            .or_default()
            .push(row);
    }
    let mut out = format!(
        "{:<24} {:>3} {:>9} {:>9} {:>9} {:>24} {:>12}\n",
        "rule", "n", "instances", "available", "nec-ef1", "worst ratio", "approx"
    );
    for ((rule, n), members) in groups {
        let available: Vec<_> = members
            .iter()
            .filter(|r| r.ratio.is_some() || r.necessary_ef1.is_some())
            .collect();
        let passed = available
            .iter()
            .filter(|r| r.necessary_ef1 == Some(true))
            .count();
        let worst = available.iter().filter_map(|r| r.ratio.clone()).max();
        let (exact, decimal) = match &worst {
            Some(DistortionRatio::Finite(r)) => (format_rational(r), format!("{:.6}", approx(r))),
            Some(DistortionRatio::Infinite) => ("inf".into(), "inf".into()),
            None => ("-".into(), "-".into()),
        };
        let rate = if available.is_empty() {
            "-".to_string()
        } else {
            format!("{:.1}%", 100.0 * passed as f64 / available.len() as f64)
        };
        out += &format!(
            "{rule:<24} {n:>3} {:>9} {:>9} {rate:>9} {exact:>24} {decimal:>12}\n",
            members.len(),
            available.len()
        );
    }
    out
}

/// Outcome of checking one inequality over a range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityCheck {
    pub name: &'static str,
    pub checked: u64,
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub n: usize,
    pub d: usize,
    pub lhs: String,
    pub rhs: String,
}

impl InequalityCheck {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub n_max: usize,
    pub d_max: usize,
    pub checks: Vec<InequalityCheck>,
}

impl LemmaReport {
    pub fn verified(&self) -> bool {
        self.checks.iter().all(InequalityCheck::holds)
    }
}

/// `floor((d-i) / (2 H_n (n-i+1)))` for `i = 1..=n`, as integer divisions
/// `(d-i) Q / (2 P (n-i+1))` with `H_n = P/Q`; `u128` when it fits.
enum DeadlineFloors {
    Fast { q: u128, dens: Vec<u128> },
    Big { q: BigInt, dens: Vec<BigInt> },
}

impl DeadlineFloors {
    fn new(n: usize, d_max: usize) -> Result<Self> {
        let h = harmonic(n)?;
        let (p, q) = (h.numer().clone(), h.denom().clone());
        let dens: Vec<BigInt> = (1..=n)
            .map(|i| &p * BigInt::from(2 * (n - i + 1)))
            .collect();
        let fast_q = (&q * BigInt::from(d_max.max(1))).to_u128().and(q.to_u128());
        let fast_dens: Option<Vec<u128>> = dens.iter().map(ToPrimitive::to_u128).collect();
        Ok(match (fast_q, fast_dens) {
            (Some(q), Some(dens)) => DeadlineFloors::Fast { q, dens },
            _ => DeadlineFloors::Big { q, dens },
        })
    }

    fn sum(&self, d: usize) -> u64 {
        match self {
            DeadlineFloors::Fast { q, dens } => dens
                .iter()
                .enumerate()
                .map(|(idx, den)| (((d - idx - 1) as u128 * q) / den) as u64)
                .sum(),
            DeadlineFloors::Big { q, dens } => dens
                .iter()
                .enumerate()
                .map(|(idx, den)| {
                    (BigInt::from(d - idx - 1) * q)
                        .div_floor(den)
                        .to_u64()
                        .expect("floor is at most d")
                })
                .sum(),
        }
    }
}

/// `Σ_{i=1..n} floor((d-i) / (2 H_n (n-i+1)))` for `d >= n`.
pub fn deadline_sum(n: usize, d: usize) -> Result<u64> {
    if d < n {
        return Err(Error::Precondition(format!(
            "need d >= n (n = {n}, d = {d})"
        )));
    }
    Ok(DeadlineFloors::new(n, d)?.sum(d))
}

/// `floor((d-1)/(2n)) + deadline_sum(n, d)`.
pub fn refined_deadline_sum(n: usize, d: usize) -> Result<u64> {
    Ok(((d - 1) / (2 * n)) as u64 + deadline_sum(n, d)?)
}

fn check_range(
    name: &'static str,
    n_max: usize,
    d_max: usize,
    extra: impl Fn(usize, usize) -> u64 + Sync,
) -> Result<InequalityCheck> {
    let per_n = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let floors = DeadlineFloors::new(n, d_max)?;
            let mut checked = 0u64;
            for d in n + 1..=d_max {
                checked += 1;
                let lhs = floors.sum(d) + extra(n, d);
                let rhs = (d - n) as u64;
                if lhs > rhs {
                    return Ok((
                        checked,
                        Some(Counterexample {
                            n,
                            d,
                            lhs: lhs.to_string(),
                            rhs: rhs.to_string(),
                        }),
                    ));
                }
            }
            Ok((checked, None))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InequalityCheck {
        name,
        checked: per_n.iter().map(|(c, _)| c).sum(),
        counterexample: per_n.into_iter().find_map(|(_, c)| c),
    })
}

/// `Σ_i floor((d-i)/(2H_n(n-i+1))) <= d - n` for `1 <= n <= n_max`, `n < d <= d_max`.
pub fn verify_deadline_inequality(n_max: usize, d_max: usize) -> Result<InequalityCheck> {
    check_range("deadline-sum", n_max, d_max, |_, _| 0)
}

/// The same with `floor((d-1)/(2n))` added to the left side.
pub fn verify_refined_deadline_inequality(n_max: usize, d_max: usize) -> Result<InequalityCheck> {
    check_range("refined-deadline-sum", n_max, d_max, |n, d| {
        ((d - 1) / (2 * n)) as u64
    })
}

/// `H_{3n} <= 2 H_n - 1` for `4 <= n <= n_max`.
pub fn verify_harmonic_chain(n_max: usize) -> Result<InequalityCheck> {
    let mut checked = 0;
    for n in 4..=n_max {
        checked += 1;
        let lhs = harmonic(3 * n)?;
        let rhs = harmonic(n)? * int(2) - Rational::one();
        if lhs > rhs {
            return Ok(InequalityCheck {
                name: "harmonic-chain",
                checked,
                counterexample: Some(Counterexample {
                    n,
                    d: 3 * n,
                    lhs: format_rational(&lhs),
                    rhs: format_rational(&rhs),
                }),
            });
        }
    }
    Ok(InequalityCheck {
        name: "harmonic-chain",
        checked,
        counterexample: None,
    })
}

/// `Σ_{j=1..3n} 1 / (2 H_n j - 1)`.
pub fn reciprocal_tail_sum(n: usize) -> Result<Rational> {
    let two_h = harmonic(n)? * int(2);
    Ok((1..=3 * n)
        .map(|j| Rational::one() / (&two_h * int(j as i64) - Rational::one()))
        .sum())
}

/// `reciprocal_tail_sum(n) <= 1` for `3 <= n <= n_max`.
pub fn verify_tail_sum(n_max: usize) -> Result<InequalityCheck> {
    let mut checked = 0;
    for n in 3..=n_max {
        checked += 1;
        let lhs = reciprocal_tail_sum(n)?;
        if lhs > Rational::one() {
            return Ok(InequalityCheck {
                name: "reciprocal-tail-sum",
                checked,
                counterexample: Some(Counterexample {
                    n,
                    d: 3 * n,
                    lhs: format_rational(&lhs),
                    rhs: "1".into(),
                }),
            });
        }
    }
    Ok(InequalityCheck {
        name: "reciprocal-tail-sum",
        checked,
        counterexample: None,
    })
}

pub fn cmd_verify_lemmas(n_max: usize, d_max: usize) -> Result<LemmaReport> {
    Ok(LemmaReport {
        n_max,
        d_max,
        checks: vec![
            verify_deadline_inequality(n_max, d_max)?,
            verify_refined_deadline_inequality(n_max, d_max)?,
            verify_harmonic_chain(n_max)?,
            verify_tail_sum(n_max)?,
        ],
    })
}

fn lemma_csv(report: &LemmaReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["check", "checked", "holds", "n", "d", "lhs", "rhs"])?;
    for c in &report.checks {
        let (n, d, lhs, rhs) = match &c.counterexample {
            Some(x) => (
                x.n.to_string(),
                x.d.to_string(),
                x.lhs.clone(),
                x.rhs.clone(),
            ),
            None => Default::default(),
        };
        w.write_record([
            c.name,
            &c.checked.to_string(),
            &c.holds().to_string(),
            &n,
            &d,
            &lhs,
            &rhs,
        ])?;
    }
    csv_string(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::rat;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("fairdiv").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn deadline_sum_spot_values() {
        assert_eq!(refined_deadline_sum(2, 5).unwrap(), 2);
        assert_eq!(refined_deadline_sum(2, 6).unwrap(), 2);
        assert_eq!(refined_deadline_sum(2, 7).unwrap(), 3);
        // 2H_3 = 11/3: (4-i)/(11/3 (4-i)) = 3/11 for every i
        assert_eq!(deadline_sum(3, 4).unwrap(), 0);
        assert_eq!(harmonic(12).unwrap(), rat(86021, 27720));
        assert_eq!(
            reciprocal_tail_sum(3).unwrap(),
            Rational::new(19657653727i64.into(), 21402806880i64.into())
        );
    }

    /// Floors from the exact rational, independent of the integer path.
    fn rational_sum(n: usize, d: usize) -> u64 {
        let h = harmonic(n).unwrap();
        (1..=n)
            .map(|i| {
                let x = int((d - i) as i64) / (&h * int(2 * (n - i + 1) as i64));
                x.floor().to_integer().to_u64().unwrap()
            })
            .sum()
    }

    #[test]
    fn integer_floors_match_rational_floors() {
        for n in [1, 2, 3, 7, 20, 45, 60, 90] {
            for d in [n, n + 1, 2 * n, 4 * n + 3, 997] {
                if d >= n {
                    assert_eq!(
                        deadline_sum(n, d).unwrap(),
                        rational_sum(n, d),
                        "n={n} d={d}"
                    );
                }
            }
        }
        // large n forces the BigInt path
        assert!(matches!(
            DeadlineFloors::new(90, 10).unwrap(),
            DeadlineFloors::Big { .. }
        ));
        assert!(matches!(
            DeadlineFloors::new(10, 10).unwrap(),
            DeadlineFloors::Fast { .. }
        ));
    }

    #[test]
    fn small_lemma_ranges_verify() {
        let report = cmd_verify_lemmas(12, 300).unwrap();
        assert!(report.verified());
        assert_eq!(
            report.checks[0].checked,
            (1..=12).map(|n| 300 - n as u64).sum::<u64>()
        );
    }

    #[test]
    fn run_reports_allocation_and_seed() {
        let (code, out, _) = run_args(&[
            "run",
            "--rule",
            "ef1",
            "--n",
            "3",
            "--m",
            "8",
            "--k",
            "6",
            "--profile",
            "identical",
        ]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["necessary_ef1"], json!(true));
        assert_eq!(v["seed"], json!(0));
        assert!(v["allocation"].is_array());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(
            run_args(&["run", "--rule", "nope", "--n", "2", "--m", "2", "--k", "2"]).0,
            EXIT_USAGE
        );
        assert_eq!(run_args(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(
            run_args(&["run", "--rule", "ef1", "--n", "2", "--m", "4", "--k", "1"]).0,
            EXIT_USAGE
        );
        assert_eq!(run_args(&["--help"]).0, 0);
    }

    #[test]
    fn gen_thm1_instance() {
        let (code, out, _) = run_args(&["gen", "--generator", "thm1", "--n", "2", "--x", "2"]);
        assert_eq!(code, 0);
        let file: InstanceFile = serde_json::from_str(&out).unwrap();
        assert_eq!((file.n, file.m, file.k), (2, 4, 4));
        assert_eq!(file.rankings, vec![vec![0, 1, 2, 3]; 2]);
    }

    #[test]
    fn sweep_is_deterministic_and_tracks_the_threshold() {
        let args = |seed: &str| {
            run_args(&[
                "sweep",
                "--rules",
                "ef1",
                "--n-min",
                "2",
                "--n-max",
                "3",
                "--m-max",
                "5",
                "--instances",
                "2",
                "--samples",
                "5",
                "--profile",
                "identical",
                "--seed",
                seed,
                "--format",
                "json",
            ])
        };
        let (code, first, _) = args("9");
        assert_eq!(code, 0);
        assert_eq!(first, args("9").1);
        let rows: Vec<Value> = serde_json::from_str(&first).unwrap();
        for row in rows {
            let (n, m, k) = (
                row["n"].as_u64().unwrap() as usize,
                row["m"].as_u64().unwrap() as usize,
                row["k"].as_u64().unwrap() as usize,
            );
            if k >= crate::rules::ef1_threshold(n, m) {
                assert_eq!(row["necessary_ef1"], json!(true), "{row}");
            } else {
                assert_eq!(row["necessary_ef1"], Value::Null, "{row}");
            }
        }
    }

    #[test]
    fn sweep_csv_shape() {
        let (code, out, _) = run_args(&[
            "sweep",
            "--rules",
            "round-robin",
            "--n-min",
            "2",
            "--n-max",
            "2",
            "--m-max",
            "2",
            "--k",
            "0",
            "--instances",
            "1",
            "--mode",
            "exhaustive",
        ]);
        assert_eq!(code, 0);
        let mut lines = out.lines();
        assert_eq!(
            lines.next(),
            Some("instance_id,rule,ratio_num,ratio_den,mode,seed")
        );
        // two goods, empty rankings: one good each and zero welfare is possible
        assert!(
            out.contains("n2-m2-k0-i0,round-robin,inf,0,exhaustive-vertices,"),
            "{out}"
        );
    }
}
