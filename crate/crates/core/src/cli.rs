//! Command-line front end.
//!
//! Exit codes: `0` every check passed, `1` a check failed (the report
//! carries witness data), `2` bad input (unparsable JSON, unknown builtin,
//! bad arguments), `3` numeric failure.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde_json::{Map, Value};

use crate::builtin::parse_rep;
use crate::error::{Error, Result};
use crate::lie::{AlgebraElement, DualVector};
use crate::moment::{hamiltonian_flow, moment, sigma, sphere_image_sample, support_reports};
use crate::rep::{RepJson, UnitaryRep};
use crate::report::{fmt_f64, num, num_array, CheckReport, Worst};
use crate::sampling::{random_element, random_state, Sampler};
use crate::suite::{self, element_json, state_json, SampleCounts, SuiteConfig};
use crate::symplectic::{StateJson, StateVector};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "MOMENTLAB_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Check that the generators are skew-Hermitian and respect brackets.
    Verify,
    /// Evaluate the moment map at given or sampled states.
    MomentEval,
    /// Run the full sampled check suite.
    Checks,
    /// Integrate the Hamiltonian flow of one generator and compare with the group action.
    Flow,
    /// Sample the moment image of the unit sphere and compare support values.
    SphereSample,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::MomentEval => "moment-eval",
            Command::Checks => "checks",
            Command::Flow => "flow",
            Command::SphereSample => "sphere-sample",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "momentlab", version, about = "Moment maps of unitary representations")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Builtin name (e.g. "su2:spin=1", "sum(su2:spin=1/2,su2:spin=1)") or path to a JSON representation.
    #[arg(long)]
    pub rep: String,
    /// Seed for all sampled inputs; decimal or 0x-prefixed hex.
    #[arg(long, value_parser = parse_seed)]
    pub seed: Option<u64>,
    /// Number of samples; overrides every per-check default.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Output file (stdout if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Tolerance override, `check=value`; repeatable.
    #[arg(long = "tol", value_parser = parse_tol)]
    pub tol: Vec<(String, f64)>,
    /// Direction in the algebra as a JSON array; repeatable.
    #[arg(long)]
    pub direction: Vec<String>,
    /// State as JSON `{"re":[...],"im":[...]}` (or an array of them), inline or a file path.
    #[arg(long)]
    pub state: Option<String>,
    /// Algebra element as a JSON array of coordinates.
    #[arg(long)]
    pub element: Option<String>,
    /// Final time for `flow`.
    #[arg(long, default_value_t = 1.0)]
    pub time: f64,
}

fn parse_seed(s: &str) -> std::result::Result<u64, String> {
    let t = s.trim();
    let r = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse(),
    };
    r.map_err(|e| format!("bad seed {t:?}: {e}"))
}

fn parse_tol(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected check=value, got {s:?}"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("bad tolerance value in {s:?}"))?;
    Ok((k.trim().to_string(), v))
}

/// Where the representation comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum RepSource {
    Builtin(String),
    JsonPath(PathBuf),
}

impl RepSource {
    /// An existing file is read as JSON, anything else is a builtin name.
    pub fn detect(text: &str) -> Self {
        let p = Path::new(text);
        if p.is_file() {
            RepSource::JsonPath(p.to_path_buf())
        } else {
            RepSource::Builtin(text.to_string())
        }
    }

    pub fn load(&self) -> Result<UnitaryRep> {
        match self {
            RepSource::Builtin(name) => parse_rep(name),
            RepSource::JsonPath(path) => {
                let text = std::fs::read_to_string(path)?;
                let raw: RepJson = serde_json::from_str(&text)
                    .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                UnitaryRep::from_json_unchecked(raw).map_err(|e| match e {
                    Error::Parse(m) => Error::Parse(m),
                    other => Error::Parse(other.to_string()),
                })
            }
        }
    }

    fn describe(&self) -> String {
        match self {
            RepSource::Builtin(name) => name.clone(),
            RepSource::JsonPath(p) => p.display().to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub rep_source: RepSource,
    pub seed: u64,
    pub samples: Option<usize>,
    pub tolerances: BTreeMap<String, f64>,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub directions: Vec<String>,
    pub state: Option<String>,
    pub element: Option<String>,
    pub time: f64,
}

impl RunConfig {
    pub fn new(command: Command, rep: &str) -> Self {
        Self {
            command,
            rep_source: RepSource::detect(rep),
            seed: suite::DEFAULT_SEED,
            samples: None,
            tolerances: BTreeMap::new(),
            output: None,
            format: Format::Json,
            directions: Vec::new(),
            state: None,
            element: None,
            time: 1.0,
        }
    }

    pub fn from_cli(cli: Cli) -> Self {
        Self {
            command: cli.command,
            rep_source: RepSource::detect(&cli.rep),
            seed: cli.seed.unwrap_or(suite::DEFAULT_SEED),
            samples: cli.samples,
            tolerances: cli.tol.into_iter().collect(),
            output: cli.out,
            format: cli.format,
            directions: cli.direction,
            state: cli.state,
            element: cli.element,
            time: cli.time,
        }
    }

    fn suite_config(&self) -> Result<SuiteConfig> {
        let mut cfg = SuiteConfig {
            seed: self.seed,
            ..SuiteConfig::default()
        };
        if let Some(n) = self.samples {
            cfg.samples = match self.command {
                Command::SphereSample => SampleCounts {
                    sphere: n,
                    ..SampleCounts::default()
                },
                _ => SampleCounts::uniform(n),
            };
        }
        for (k, v) in &self.tolerances {
            cfg.set_tol(k, *v)?;
        }
        Ok(cfg)
    }
}

/// What a command produced: checks decide the exit code, `body` is written
/// in the chosen format.
struct Outcome {
    checks: Vec<CheckReport>,
    json: Map<String, Value>,
    csv: String,
    /// Extra human-facing lines for stderr in CSV mode.
    note: Option<String>,
}

/// Runs `config`, writing the report to `config.output` or `stdout` and
/// diagnostics to `stderr`; returns the exit code.
pub fn run(config: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let threads = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok());
    let result = match threads {
        Some(n) if n >= 1 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(config)),
            Err(e) => Err(Error::Numeric(format!("cannot build thread pool: {e}"))),
        },
        _ => execute(config),
    };
    match result {
        Ok(out) => {
            let bytes = match config.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&Value::Object(out.json)).expect("JSON values serialize");
                    s.push('\n');
                    s
                }
                Format::Csv => {
                    if let Some(note) = &out.note {
                        let _ = stderr.write_all(note.as_bytes());
                    }
                    out.csv
                }
            };
            if let Err(e) = emit(config, stdout, bytes.as_bytes()) {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_PARSE;
            }
            let failed: Vec<&str> = out.checks.iter().filter(|c| !c.pass).map(|c| c.check.as_str()).collect();
            if failed.is_empty() {
                EXIT_PASS
            } else {
                let _ = writeln!(stderr, "failed checks: {}", failed.join(", "));
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Numeric(_) => EXIT_NUMERIC,
        _ => EXIT_PARSE,
    }
}

fn emit(config: &RunConfig, stdout: &mut dyn Write, bytes: &[u8]) -> std::io::Result<()> {
    match &config.output {
        Some(p) => std::fs::write(p, bytes),
        None => stdout.write_all(bytes),
    }
}

fn execute(config: &RunConfig) -> Result<Outcome> {
    if config.samples == Some(0) {
        return Err(Error::Parse("--samples must be at least 1".into()));
    }
    if !config.time.is_finite() {
        return Err(Error::Parse("--time must be finite".into()));
    }
    let cfg = config.suite_config()?;
    let rep = config.rep_source.load()?;
    let mut out = match config.command {
        Command::Verify => cmd_verify(&rep, &cfg),
        Command::Checks => cmd_checks(&rep, &cfg),
        Command::MomentEval => cmd_moment_eval(&rep, &cfg, config),
        Command::Flow => cmd_flow(&rep, &cfg, config),
        Command::SphereSample => cmd_sphere(&rep, &cfg, config),
    }?;
    let mut header = Map::new();
    header.insert("command".into(), Value::from(config.command.name()));
    header.insert("rep".into(), Value::from(config.rep_source.describe()));
    header.insert("seed".into(), Value::from(cfg.seed));
    header.insert("pass".into(), Value::Bool(out.checks.iter().all(|c| c.pass)));
    if !out.checks.is_empty() {
        header.insert(
            "checks".into(),
            Value::Array(out.checks.iter().map(CheckReport::to_json).collect()),
        );
    }
    header.append(&mut out.json);
    out.json = header;
    Ok(out)
}

fn checks_csv(checks: &[CheckReport]) -> String {
    let mut s = String::from("check,defect,tolerance,pass\n");
    for c in checks {
        s.push_str(&format!("{},{},{},{}\n", c.check, fmt_f64(c.defect), fmt_f64(c.tolerance), c.pass));
    }
    s
}

fn checks_only(checks: Vec<CheckReport>) -> Outcome {
    Outcome {
        csv: checks_csv(&checks),
        checks,
        json: Map::new(),
        note: None,
    }
}

fn cmd_verify(rep: &UnitaryRep, cfg: &SuiteConfig) -> Result<Outcome> {
    Ok(checks_only(suite::rep_checks(rep, cfg)))
}

fn cmd_checks(rep: &UnitaryRep, cfg: &SuiteConfig) -> Result<Outcome> {
    let mut checks = suite::rep_checks(rep, cfg);
    // sampled checks assume a valid representation
    if checks.iter().all(|c| c.pass) {
        checks.extend(suite::run_checks(rep, cfg)?);
    }
    Ok(checks_only(checks))
}

/// Inline JSON if it parses, otherwise a file holding JSON.
fn read_json_arg(text: &str) -> Result<Value> {
    match serde_json::from_str::<Value>(text) {
        Ok(v) => Ok(v),
        Err(inline_err) => {
            let p = Path::new(text);
            if p.is_file() {
                let body = std::fs::read_to_string(p)?;
                serde_json::from_str(&body).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))
            } else {
                Err(Error::Parse(format!("not JSON and not a file: {text:?} ({inline_err})")))
            }
        }
    }
}

fn parse_states(rep: &UnitaryRep, text: &str) -> Result<Vec<StateVector>> {
    let v = read_json_arg(text)?;
    let raws: Vec<StateJson> = match v {
        Value::Array(_) => serde_json::from_value(v),
        _ => serde_json::from_value(v).map(|s| vec![s]),
    }
    .map_err(|e| Error::Parse(format!("bad state JSON: {e}")))?;
    raws.iter()
        .map(|raw| {
            let x = StateVector::from_json(raw).map_err(|e| Error::Parse(e.to_string()))?;
            if x.space() != rep.space() {
                return Err(Error::Parse(format!(
                    "state has dimension {} but the representation acts on dimension {}",
                    x.space().dim(),
                    rep.dim()
                )));
            }
            Ok(x)
        })
        .collect()
}

fn parse_element(rep: &UnitaryRep, text: &str) -> Result<AlgebraElement> {
    let coords: Vec<f64> = serde_json::from_value(read_json_arg(text)?)
        .map_err(|e| Error::Parse(format!("bad algebra element {text:?}: {e}")))?;
    rep.algebra().element(coords).map_err(|e| Error::Parse(e.to_string()))
}

fn state_header(n: usize) -> Vec<String> {
    (0..n).map(|k| format!("re{k}")).chain((0..n).map(|k| format!("im{k}"))).collect()
}

fn state_cells(x: &StateVector) -> Vec<String> {
    let c = x.components();
    c.iter().map(|z| fmt_f64(z.re)).chain(c.iter().map(|z| fmt_f64(z.im))).collect()
}

fn mu_header(rep: &UnitaryRep) -> Vec<String> {
    rep.algebra().labels().iter().map(|l| format!("mu_{l}")).collect()
}

fn dual_json(d: &DualVector) -> Value {
    num_array(d.coords().iter().copied())
}

fn cmd_moment_eval(rep: &UnitaryRep, cfg: &SuiteConfig, config: &RunConfig) -> Result<Outcome> {
    let states = match &config.state {
        Some(text) => parse_states(rep, text)?,
        None => {
            let mut s = Sampler::for_index(cfg.seed, 100);
            let n = config.samples.unwrap_or(10);
            (0..n).map(|_| random_state(rep.space(), &mut s)).collect()
        }
    };
    let mut rows = Vec::with_capacity(states.len());
    let mut csv = state_header(rep.dim());
    csv.extend(mu_header(rep));
    let mut csv = csv.join(",") + "\n";
    for x in &states {
        let mu = moment(rep, x)?;
        rows.push(serde_json::json!({ "x": state_json(x), "mu": dual_json(&mu) }));
        let mut cells = state_cells(x);
        cells.extend(mu.coords().iter().map(|&v| fmt_f64(v)));
        csv.push_str(&cells.join(","));
        csv.push('\n');
    }
    let mut json = Map::new();
    json.insert("points".into(), Value::Array(rows));
    Ok(Outcome {
        checks: Vec::new(),
        json,
        csv,
        note: None,
    })
}

fn cmd_flow(rep: &UnitaryRep, cfg: &SuiteConfig, config: &RunConfig) -> Result<Outcome> {
    let mut s = Sampler::for_index(cfg.seed, 101);
    let xa = match &config.element {
        Some(text) => parse_element(rep, text)?,
        None => random_element(rep.algebra(), &mut s),
    };
    let x0 = match &config.state {
        Some(text) => {
            let mut v = parse_states(rep, text)?;
            if v.len() != 1 {
                return Err(Error::Parse("flow takes exactly one initial state".into()));
            }
            v.remove(0)
        }
        None => random_state(rep.space(), &mut s),
    };
    let steps = config.samples.unwrap_or(10);
    let e0 = sigma(rep, &xa, &x0)?;
    let mut traj = Worst::default();
    let mut energy = Worst::default();
    let mut rows = Vec::with_capacity(steps);
    let mut head = vec!["t".to_string()];
    head.extend(state_header(rep.dim()));
    head.extend(["sigma".to_string(), "defect".to_string()]);
    let mut csv = head.join(",") + "\n";
    for k in 1..=steps {
        let t = config.time * k as f64 / steps as f64;
        let xt = hamiltonian_flow(rep, &xa, &x0, t)?;
        let exact = rep.act(&xa.scale(t), &x0)?;
        let d = xt.sub(&exact)?.norm();
        let e = sigma(rep, &xa, &xt)?;
        traj.offer(d, || [("t".to_string(), num(t))].into_iter().collect());
        energy.offer((e - e0).abs(), || [("t".to_string(), num(t))].into_iter().collect());
        rows.push(serde_json::json!({ "t": num(t), "x": state_json(&xt), "sigma": num(e), "defect": num(d) }));
        let mut cells = vec![fmt_f64(t)];
        cells.extend(state_cells(&xt));
        cells.extend([fmt_f64(e), fmt_f64(d)]);
        csv.push_str(&cells.join(","));
        csv.push('\n');
    }
    let checks = vec![
        traj.into_report(suite::FLOW, cfg.tol(suite::FLOW)),
        energy.into_report(suite::FLOW_ENERGY, cfg.tol(suite::FLOW_ENERGY)),
    ];
    let mut json = Map::new();
    json.insert("element".into(), element_json(&xa));
    json.insert("x0".into(), state_json(&x0));
    json.insert("trajectory".into(), Value::Array(rows));
    Ok(Outcome {
        note: Some(checks_csv(&checks)),
        checks,
        json,
        csv,
    })
}

fn cmd_sphere(rep: &UnitaryRep, cfg: &SuiteConfig, config: &RunConfig) -> Result<Outcome> {
    let dirs = if config.directions.is_empty() {
        None
    } else {
        Some(
            config
                .directions
                .iter()
                .map(|d| parse_element(rep, d))
                .collect::<Result<Vec<_>>>()?,
        )
    };
    let checks = suite::sphere_checks(rep, cfg, dirs.clone())?;
    let mut json = Map::new();
    let mut note = checks_csv(&checks);
    if config.format == Format::Csv {
        // the CSV body carries the samples; support values go to stderr
        let samples = sphere_image_sample(rep, cfg.samples.sphere, cfg.seed)?;
        let dirs = dirs.unwrap_or_else(|| suite::sample_directions(rep, cfg.samples.directions, cfg.seed));
        note.push_str("direction,exact,empirical_max,gap\n");
        for r in support_reports(rep, &samples, &dirs)? {
            let d: Vec<String> = r.direction.coords().iter().map(|&v| fmt_f64(v)).collect();
            note.push_str(&format!(
                "[{}],{},{},{}\n",
                d.join(";"),
                fmt_f64(r.exact),
                fmt_f64(r.empirical_max),
                fmt_f64(r.gap())
            ));
        }
        let mut head = mu_header(rep);
        head.push("norm".into());
        let mut csv = head.join(",") + "\n";
        for mu in &samples {
            let mut cells: Vec<String> = mu.coords().iter().map(|&v| fmt_f64(v)).collect();
            cells.push(fmt_f64(mu.norm()));
            csv.push_str(&cells.join(","));
            csv.push('\n');
        }
        return Ok(Outcome {
            checks,
            json,
            csv,
            note: Some(note),
        });
    }
    json.insert("samples".into(), Value::from(cfg.samples.sphere));
    Ok(Outcome {
        checks,
        json,
        csv: String::new(),
        note: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(cfg: &RunConfig) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(cfg, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn verify_spin_half_passes() {
        let (code, out, _) = run_capture(&RunConfig::new(Command::Verify, "su2:spin=0.5"));
        assert_eq!(code, EXIT_PASS);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["pass"], Value::Bool(true));
    }

    #[test]
    fn unknown_builtin_is_parse_error() {
        let (code, _, err) = run_capture(&RunConfig::new(Command::Verify, "so3:spin=1"));
        assert_eq!(code, EXIT_PARSE);
        assert!(err.contains("unknown representation"));
    }

    #[test]
    fn moment_at_origin_is_zero() {
        let mut cfg = RunConfig::new(Command::MomentEval, "su2:spin=1");
        cfg.state = Some(r#"{"re":[0,0,0],"im":[0,0,0]}"#.into());
        cfg.format = Format::Csv;
        let (code, out, _) = run_capture(&cfg);
        assert_eq!(code, EXIT_PASS);
        let row = out.lines().nth(1).unwrap();
        assert!(row.split(',').all(|c| c.parse::<f64>().unwrap() == 0.0), "{row}");
    }

    #[test]
    fn tolerance_override_can_fail_a_check() {
        let mut cfg = RunConfig::new(Command::Flow, "su2:spin=1/2");
        cfg.samples = Some(2);
        cfg.tolerances.insert("flow".into(), 0.0);
        let (code, out, _) = run_capture(&cfg);
        assert_eq!(code, EXIT_CHECK_FAILED);
        assert!(out.contains("\"witness\""));
    }

    #[test]
    fn unknown_tolerance_name_is_rejected() {
        let mut cfg = RunConfig::new(Command::Verify, "su2:spin=1");
        cfg.tolerances.insert("nonsense".into(), 1.0);
        assert_eq!(run_capture(&cfg).0, EXIT_PARSE);
    }

    #[test]
    fn seeds_accept_hex() {
        assert_eq!(parse_seed("0x10").unwrap(), 16);
        assert_eq!(parse_seed("42").unwrap(), 42);
        assert!(parse_seed("x").is_err());
        assert_eq!(parse_tol("flow=1e-3").unwrap(), ("flow".to_string(), 1e-3));
    }
}
