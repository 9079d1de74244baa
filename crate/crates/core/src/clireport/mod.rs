//! Command-line front end: configuration, the verification suites and
//! deterministic report emission.

mod suites;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub use crate::borellab::{Check, Status};
use crate::error::{Error, Result};
use crate::exactfield::is_prime;

pub const SCHEMA_VERSION: &str = "1.0";
pub const SEED_ENV: &str = "WORKBENCH_SEED";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Identities,
    Weights,
    Hecke,
    Recursion,
    LemmaS,
    Pseries,
    Generation,
    HomTransfer,
    All,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Identities => "identities",
            Command::Weights => "weights",
            Command::Hecke => "hecke",
            Command::Recursion => "recursion",
            Command::LemmaS => "lemma-s",
            Command::Pseries => "pseries",
            Command::Generation => "generation",
            Command::HomTransfer => "hom-transfer",
            Command::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// Fully resolved configuration of one run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub p: u32,
    /// Degree of the coefficient field over `F_p`.
    pub k: usize,
    pub weight: Option<(u32, u32)>,
    /// `(i₁, i₂, s₁, s₂)`, the scalars given by field element codes.
    pub character: Option<(u32, u32, u64, u64)>,
    pub ideal: String,
    pub radius: Option<i64>,
    pub level: u32,
    pub trials: usize,
    pub seed: u64,
    pub bound: usize,
    pub word_length: usize,
    pub case: Option<String>,
}

/// Values read from `--config`; every field optional, flags take precedence.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub p: Option<u32>,
    pub k: Option<usize>,
    pub weight: Option<(u32, u32)>,
    pub character: Option<(u32, u32, u64, u64)>,
    pub ideal: Option<String>,
    pub radius: Option<i64>,
    pub level: Option<u32>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub bound: Option<usize>,
    pub word_length: Option<usize>,
    pub case: Option<String>,
}

impl RunConfig {
    pub fn new(command: Command) -> RunConfig {
        RunConfig {
            command,
            p: 3,
            k: 1,
            weight: None,
            character: None,
            ideal: "T".into(),
            radius: None,
            level: 2,
            trials: 20,
            seed: 0,
            bound: crate::borellab::DEFAULT_BOUND,
            word_length: 4,
            case: None,
        }
    }

    fn overlay(&mut self, o: &PartialConfig) {
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = o.$f.clone() { self.$f = v; } )* };
        }
        take!(p, k, ideal, level, trials, seed, bound, word_length);
        if o.weight.is_some() {
            self.weight = o.weight;
        }
        if o.character.is_some() {
            self.character = o.character;
        }
        if o.radius.is_some() {
            self.radius = o.radius;
        }
        if o.case.is_some() {
            self.case = o.case.clone();
        }
    }

    /// Range checks; nothing is computed for an invalid configuration.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !is_prime(self.p) || self.p > 13 {
            return bad(format!("p = {} must be a prime at most 13", self.p));
        }
        if !(1..=4).contains(&self.k) {
            return bad(format!("field degree k = {} must be between 1 and 4", self.k));
        }
        let p = self.p;
        if let Some((r, m)) = self.weight {
            if r > p - 1 {
                return bad(format!("weight r = {r} exceeds p - 1 = {}", p - 1));
            }
            if m >= (p - 1).max(1) {
                return bad(format!("weight m = {m} must be below {}", (p - 1).max(1)));
            }
        }
        if let Some((i1, i2, s1, s2)) = self.character {
            let q = (p as u64).pow(self.k as u32);
            if i1 >= (p - 1).max(1) || i2 >= (p - 1).max(1) {
                return bad(format!("character exponents ({i1}, {i2}) must be below {}", (p - 1).max(1)));
            }
            if s1 == 0 || s2 == 0 || s1 >= q || s2 >= q {
                return bad(format!("character scalars ({s1}, {s2}) must be nonzero field codes below {q}"));
            }
        }
        if let Some(r) = self.radius {
            if !(0..=crate::compactind::DEFAULT_R_MAX).contains(&r) {
                return bad(format!("radius {r} must be between 0 and {}", crate::compactind::DEFAULT_R_MAX));
            }
        }
        if !(1..=crate::principalseries::DEFAULT_N_MAX).contains(&self.level) {
            return bad(format!(
                "level {} must be between 1 and {}",
                self.level,
                crate::principalseries::DEFAULT_N_MAX
            ));
        }
        if self.bound == 0 || self.bound > 64 {
            return bad(format!("bound {} must be between 1 and 64", self.bound));
        }
        if self.word_length > 8 {
            return bad(format!("word length {} must be at most 8", self.word_length));
        }
        if self.trials > 100_000 {
            return bad(format!("trials {} must be at most 100000", self.trials));
        }
        let field = crate::exactfield::Field::with_degree(p, self.k)?;
        crate::compactind::HeckeIdeal::parse(field, &self.ideal)?;
        if let Some(case) = &self.case {
            if crate::borellab::TransferCase::parse(case).is_none() {
                return bad(format!("unknown hom-transfer case {case:?}"));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("serializable")
    }
}

/// The emitted report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub command: String,
    pub config: Value,
    pub checks: Vec<Check>,
    pub seed: u64,
    /// Always `null`: timing would break byte-identical reruns.
    pub wall_clock: Option<f64>,
}

impl ReportDocument {
    pub fn new(config: &RunConfig, checks: Vec<Check>) -> ReportDocument {
        ReportDocument {
            schema_version: SCHEMA_VERSION.into(),
            command: config.command.name().into(),
            config: config.to_json(),
            checks,
            seed: config.seed,
            wall_clock: None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        exit_code(&self.checks)
    }
}

/// `0` when every check passes, `2` on any failure, `3` when the only
/// non-passing checks are inconclusive.
pub fn exit_code(checks: &[Check]) -> i32 {
    if checks.iter().any(|c| c.status == Status::Fail) {
        EXIT_FAIL
    } else if checks.iter().any(|c| c.status == Status::Inconclusive) {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_PASS
    }
}

/// Serializes a report. JSON objects come out with sorted keys.
pub fn emit_report(doc: &ReportDocument, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            // Value's map is ordered, so round-tripping sorts every object
            let value = serde_json::to_value(doc).expect("serializable");
            let mut out = serde_json::to_string_pretty(&value).expect("serializable");
            out.push('\n');
            out.into_bytes()
        }
        Format::Text => {
            let mut out = format!("{} (schema {}, seed {})\n", doc.command, doc.schema_version, doc.seed);
            for c in &doc.checks {
                out.push_str(&format!("{:<12} {}\n", c.status.label(), c.name));
            }
            let count = |s: Status| doc.checks.iter().filter(|c| c.status == s).count();
            out.push_str(&format!(
                "{} checks: {} passed, {} failed, {} inconclusive\n",
                doc.checks.len(),
                count(Status::Pass),
                count(Status::Fail),
                count(Status::Inconclusive)
            ));
            out.into_bytes()
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "borel-workbench", version, about = "Exact verification suites for mod-p representations of GL2(Q_p)")]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// Exact matrix identities and decomposition round-trips
    Identities(Flags),
    /// Serre weights, their I_1-invariants and Ind_I^K of the trivial character
    Weights(Flags),
    /// The Hecke operator on compact induction
    Hecke(Flags),
    /// The sequence v_{i+1} = sum u(l) t v_i in a quotient
    Recursion(Flags),
    /// Reconstruction of s v from Borel translates
    LemmaS(Flags),
    /// Principal series invariants, eigenvalue and splitting
    Pseries(Flags),
    /// P-generation evidence and the pipeline producing I_1-fixed vectors
    Generation(Flags),
    /// P-maps that are G-maps
    HomTransfer(Flags),
    /// Every suite
    All(Flags),
}

#[derive(Debug, Args)]
struct Flags {
    /// The prime p, at most 13
    #[arg(long)]
    p: Option<u32>,
    /// Degree of the coefficient field over F_p
    #[arg(long)]
    k: Option<usize>,
    /// Weight as r,m
    #[arg(long, value_parser = parse_pair)]
    weight: Option<(u32, u32)>,
    /// Character as i1,i2,s1,s2
    #[arg(long = "char", value_parser = parse_character)]
    character: Option<(u32, u32, u64, u64)>,
    /// Hecke ideal: T, T^n, T-c or T+c
    #[arg(long)]
    ideal: Option<String>,
    /// Ball radius in the tree
    #[arg(long)]
    radius: Option<i64>,
    /// Principal series level N
    #[arg(long)]
    level: Option<u32>,
    /// Number of random samples
    #[arg(long)]
    trials: Option<usize>,
    /// RNG seed; overrides WORKBENCH_SEED
    #[arg(long)]
    seed: Option<u64>,
    /// Largest n tried by the recursion
    #[arg(long)]
    bound: Option<usize>,
    /// Word length for P-generation
    #[arg(long)]
    word_length: Option<usize>,
    /// hom-transfer case: supersingular, sp_to_ind, char_rigidity or princ_endo
    #[arg(long)]
    case: Option<String>,
    /// JSON file with configuration values; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn parse_pair(s: &str) -> std::result::Result<(u32, u32), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => Ok((a.parse().map_err(|e| format!("{e}"))?, b.parse().map_err(|e| format!("{e}"))?)),
        _ => Err(format!("expected r,m but got {s:?}")),
    }
}

fn parse_character(s: &str) -> std::result::Result<(u32, u32, u64, u64), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |x: &str| x.parse::<u64>().map_err(|e| format!("{e}"));
    match parts.as_slice() {
        [a, b, c, d] => Ok((num(a)? as u32, num(b)? as u32, num(c)?, num(d)?)),
        _ => Err(format!("expected i1,i2,s1,s2 but got {s:?}")),
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

fn usage_error(msg: impl std::fmt::Display) -> Outcome {
    Outcome { code: EXIT_USAGE, stdout: Vec::new(), stderr: format!("{msg}\n") }
}

/// Resolves flags, the optional config file and the seed environment
/// variable into a validated configuration.
fn resolve(command: Command, flags: &Flags, env_seed: Option<&str>) -> Result<RunConfig> {
    let mut cfg = RunConfig::new(command);
    if let Some(s) = env_seed {
        cfg.seed = s.trim().parse().map_err(|_| Error::InvalidConfig(format!("{SEED_ENV}={s:?} is not an integer")))?;
    }
    if let Some(path) = &flags.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
        let file: PartialConfig =
            serde_json::from_str(&text).map_err(|e| Error::InvalidConfig(format!("bad config file: {e}")))?;
        cfg.overlay(&file);
    }
    let from_flags = PartialConfig {
        p: flags.p,
        k: flags.k,
        weight: flags.weight,
        character: flags.character,
        ideal: flags.ideal.clone(),
        radius: flags.radius,
        level: flags.level,
        trials: flags.trials,
        seed: flags.seed,
        bound: flags.bound,
        word_length: flags.word_length,
        case: flags.case.clone(),
    };
    cfg.overlay(&from_flags);
    cfg.validate()?;
    Ok(cfg)
}

/// Runs the suites named by an already validated configuration.
pub fn run_config(cfg: &RunConfig) -> ReportDocument {
    ReportDocument::new(cfg, suites::run(cfg))
}

/// Parses `argv` (program name first), runs the command and renders the report.
pub fn run_command<I, S>(argv: I, env_seed: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: EXIT_PASS, stdout: e.to_string().into_bytes(), stderr: String::new() }
                }
                _ => {
                    let mut text = e.render().to_string();
                    if !text.contains("Usage") {
                        use clap::CommandFactory;
                        text = format!("{}\n{}", text.trim_end(), Cli::command().render_usage());
                    }
                    usage_error(text.trim_end())
                }
            };
        }
    };
    let (command, flags) = match &cli.command {
        CliCommand::Identities(f) => (Command::Identities, f),
        CliCommand::Weights(f) => (Command::Weights, f),
        CliCommand::Hecke(f) => (Command::Hecke, f),
        CliCommand::Recursion(f) => (Command::Recursion, f),
        CliCommand::LemmaS(f) => (Command::LemmaS, f),
        CliCommand::Pseries(f) => (Command::Pseries, f),
        CliCommand::Generation(f) => (Command::Generation, f),
        CliCommand::HomTransfer(f) => (Command::HomTransfer, f),
        CliCommand::All(f) => (Command::All, f),
    };
    let cfg = match resolve(command, flags, env_seed) {
        Ok(cfg) => cfg,
        Err(e) => {
            use clap::CommandFactory;
            let usage = Cli::command().render_usage();
            return usage_error(format!("error: {e}\n\n{usage}\n\nFor more information, try '--help'."));
        }
    };
    let doc = run_config(&cfg);
    Outcome { code: doc.exit_code(), stdout: emit_report(&doc, flags.format), stderr: String::new() }
}

/// A check for a suite that needs more than the models support at this prime.
pub(crate) fn skipped(name: &str, reason: &str) -> Check {
    Check::new(name, Status::Inconclusive, json!({ "skipped": reason }), Value::Null)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(statuses: &[Status]) -> ReportDocument {
        let checks =
            statuses.iter().enumerate().map(|(i, s)| Check::new(format!("c{i}"), *s, json!({}), json!({}))).collect();
        ReportDocument::new(&RunConfig::new(Command::Identities), checks)
    }

    #[test]
    fn exit_codes_follow_the_contract() {
        use Status::*;
        let cases: [(&[Status], i32); 7] = [
            (&[], 0),
            (&[Pass], 0),
            (&[Pass, Pass], 0),
            (&[Fail], 2),
            (&[Inconclusive, Fail], 2),
            (&[Inconclusive], 3),
            (&[Pass, Inconclusive], 3),
        ];
        for (statuses, code) in cases {
            assert_eq!(doc(statuses).exit_code(), code, "{statuses:?}");
        }
    }

    #[test]
    fn empty_report_and_stable_bytes() {
        let d = doc(&[]);
        let a = emit_report(&d, Format::Json);
        assert_eq!(a, emit_report(&d, Format::Json));
        let v: Value = serde_json::from_slice(&a).unwrap();
        assert_eq!(v["checks"], json!([]));
        assert!(a.ends_with(b"\n"));
    }

    #[test]
    fn text_marks_each_failure_once() {
        let d = doc(&[Status::Fail, Status::Pass, Status::Fail, Status::Inconclusive]);
        let text = String::from_utf8(emit_report(&d, Format::Text)).unwrap();
        assert_eq!(text.matches("FAIL").count(), 2);
    }

    #[test]
    fn invalid_weight_is_a_usage_error() {
        let out = run_command(["borel-workbench", "hecke", "--p", "7", "--weight", "9,0"], None);
        assert_eq!(out.code, EXIT_USAGE);
        assert!(out.stdout.is_empty());
        assert!(out.stderr.contains("weight"));
        assert_eq!(run_command(["borel-workbench", "frobnicate"], None).code, EXIT_USAGE);
        assert_eq!(run_command(["borel-workbench", "--help"], None).code, EXIT_PASS);
    }

    #[test]
    fn flags_override_the_config_file() {
        let dir = std::env::temp_dir().join(format!("workbench-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cfg.json");
        std::fs::write(&path, r#"{"p": 5, "trials": 3, "seed": 9}"#).unwrap();
        let flags = Flags {
            p: Some(2),
            k: None,
            weight: None,
            character: None,
            ideal: None,
            radius: None,
            level: None,
            trials: None,
            seed: None,
            bound: None,
            word_length: None,
            case: None,
            config: Some(path),
            format: Format::Json,
        };
        let cfg = resolve(Command::Identities, &flags, Some("4")).unwrap();
        assert_eq!((cfg.p, cfg.trials, cfg.seed), (2, 3, 9));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
