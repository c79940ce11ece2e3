//! Command-line front end.
//!
//! Every artifact embeds the [`RunConfig`] that produced it together with
//! the tool version: JSON artifacts carry `"tool"` and `"config"` fields,
//! CSV artifacts start with `# tool:` and `# config:` comment lines.
//! `qirc replay <artifact>` re-runs that config and reproduces the
//! artifact byte for byte. Output paths are not part of the config.
//!
//! Exit codes: 0 success, 1 hard (or `--strict` report-only) violation,
//! 2 input or usage error.

use crate::channels;
use crate::claims::{self, CampaignConfig, ClaimReport, CloudPoint, GeneratorSpec, Sampler};
use crate::dynamics::trajectory;
use crate::error::Error;
use crate::families::{bell_spectator, gibbs_family, named_family, werner_spectator};
use crate::io::{parse_schedule, StateFile};
use crate::resources::{profile, OptimizerSettings, ProfileConfig, Q2Mode, ResourceProfile};
use crate::states::{self, DensityMatrix};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const TOOL: &str = concat!("qirc ", env!("CARGO_PKG_VERSION"));
pub const SEED_ENV: &str = "QIRC_SEED";

pub const SWEEP_HEADER: &str =
    "parameter,q1,q2,q3,norm,q1_raw,q2_raw,f_max,f_max_transfer,f_q,f_q_max";
pub const CLOUD_HEADER: &str = "trial,seed_master,seed_stream,q1,q2,q3,norm,q1_raw,q2_raw";
pub const TRAJECTORY_HEADER: &str = "step,label,q1,q2,q3,norm,norm_drift";

/// Where a state comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum Input {
    Family(String),
    State(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSettings {
    pub q2_mode: Q2Mode,
    pub generator: GeneratorSpec,
    pub optimizer: OptimizerSettings,
}

impl ProfileSettings {
    fn build(&self, d_a: usize) -> crate::Result<ProfileConfig> {
        Ok(ProfileConfig {
            generator: self.generator.build(d_a)?,
            q2_mode: self.q2_mode,
            optimizer: self.optimizer.clone(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SweepFamily {
    /// Werner state on AB with a maximally mixed spectator; parameter p.
    Werner,
    /// Depolarizing noise of strength p on A of a Bell pair ⊗ |0⟩.
    DepolarizeBell,
    /// Three-qubit Gibbs state; parameter β.
    GibbsBeta,
}

/// Everything that determines an artifact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RunConfig {
    Profile {
        input: Input,
        settings: ProfileSettings,
    },
    Sweep {
        family: SweepFamily,
        grid: Vec<f64>,
        coupling: f64,
        settings: ProfileSettings,
    },
    Check {
        claims: Vec<String>,
        strict: bool,
        campaign: CampaignConfig,
    },
    Evolve {
        input: Input,
        schedule: PathBuf,
        settings: ProfileSettings,
    },
}

#[derive(Parser, Debug)]
#[command(
    name = "qirc",
    version,
    about = "Resource coordinates of tripartite quantum states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// q2 operationalization: transfer | uhlmann-marginal.
    #[arg(long, default_value = "transfer")]
    q2_mode: String,
    /// Coherence generator on A: sigma-z | sigma-x | number.
    #[arg(long, default_value = "sigma-z")]
    generator: String,
    /// Random restarts of the singlet-fraction search.
    #[arg(long)]
    restarts: Option<usize>,
    /// Write the artifact here instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// Named family, e.g. bell-spectator, ghz, werner:0.7, gibbs:1:0.5.
    #[arg(long)]
    family: Option<String>,
    /// JSON state file.
    #[arg(long)]
    state: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Profile one state.
    Profile {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Profile a one-parameter family on a grid.
    Sweep {
        #[arg(value_enum)]
        family: SweepFamily,
        /// `start:stop:count` or a comma-separated list.
        #[arg(long, default_value = "0:1:21")]
        grid: String,
        /// Coupling J of the Gibbs family.
        #[arg(long, default_value_t = 1.0)]
        coupling: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Run claim checks ("all" or ids such as C1, T1.ball).
    Check {
        #[arg(required = true)]
        claims: Vec<String>,
        #[arg(long)]
        trials: Option<usize>,
        /// Master seed (default: $QIRC_SEED, else 0).
        #[arg(long)]
        seed: Option<u64>,
        /// haar-pure | ginibre-mixed | named-family.
        #[arg(long)]
        sampler: Option<String>,
        /// Subsystem dims, e.g. 2,2,2.
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long)]
        channels_per_state: Option<usize>,
        /// Exit 1 on report-only findings as well.
        #[arg(long)]
        strict: bool,
        /// Campaign settings as JSON; flags override it.
        #[arg(long)]
        campaign: Option<PathBuf>,
        /// Point-cloud CSV of the ball campaign.
        #[arg(long)]
        cloud: Option<PathBuf>,
        #[arg(long)]
        q2_mode: Option<String>,
        #[arg(long)]
        generator: Option<String>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Profile a state along a schedule of steps.
    Evolve {
        #[command(flatten)]
        input: InputArgs,
        /// JSON schedule file.
        #[arg(long)]
        schedule: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Re-run the config embedded in an artifact.
    Replay {
        artifact: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
        #[arg(long)]
        cloud: Option<PathBuf>,
    },
}

/// Why a run stopped.
#[derive(Debug)]
pub enum Failure {
    /// Bad input or usage; exit 2.
    Input(String),
    /// A hard or strict-mode violation; exit 1.
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Runs the CLI and returns the process exit code.
pub fn main_with_args(args: impl IntoIterator<Item = OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("{msg}");
            1
        }
    }
}

fn run(cmd: Command) -> Outcome<()> {
    let (config, out, cloud) = match cmd {
        Command::Replay {
            artifact,
            out,
            cloud,
        } => (load_config(&artifact)?, out, cloud),
        other => {
            let (config, out, cloud) = config_from_args(other)?;
            (config, out, cloud)
        }
    };
    execute(&config, out.as_deref(), cloud.as_deref())
}

fn settings(c: &Common) -> Outcome<ProfileSettings> {
    let mut optimizer = OptimizerSettings::default();
    if let Some(r) = c.restarts {
        optimizer.restarts = r;
    }
    Ok(ProfileSettings {
        q2_mode: c.q2_mode.parse()?,
        generator: c.generator.parse()?,
        optimizer,
    })
}

fn input(a: InputArgs) -> Input {
    match (a.family, a.state) {
        (Some(f), _) => Input::Family(f),
        (None, Some(p)) => Input::State(p),
        (None, None) => unreachable!("clap enforces one input"),
    }
}

fn default_seed() -> Outcome<u64> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("{SEED_ENV}={s:?} is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

type Parsed = (RunConfig, Option<PathBuf>, Option<PathBuf>);

fn config_from_args(cmd: Command) -> Outcome<Parsed> {
    Ok(match cmd {
        Command::Profile { input: i, common } => (
            RunConfig::Profile {
                input: input(i),
                settings: settings(&common)?,
            },
            common.out,
            None,
        ),
        Command::Sweep {
            family,
            grid,
            coupling,
            common,
        } => (
            RunConfig::Sweep {
                family,
                grid: parse_grid(&grid)?,
                coupling,
                settings: settings(&common)?,
            },
            common.out,
            None,
        ),
        Command::Check {
            claims: ids,
            trials,
            seed,
            sampler,
            dims,
            rank,
            channels_per_state,
            strict,
            campaign,
            cloud,
            q2_mode,
            generator,
            out,
        } => {
            let mut cfg = match &campaign {
                Some(path) => serde_json::from_str::<CampaignConfig>(&read(path)?)
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
                None => CampaignConfig {
                    seed: default_seed()?,
                    ..Default::default()
                },
            };
            if let Some(t) = trials {
                cfg.trials = t;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(s) = sampler {
                cfg.sampler = s.parse::<Sampler>()?;
            }
            if let Some(d) = dims {
                cfg.dims = d;
            }
            if rank.is_some() {
                cfg.rank = rank;
            }
            if let Some(c) = channels_per_state {
                cfg.channels_per_state = c;
            }
            if let Some(m) = q2_mode {
                cfg.q2_mode = m.parse()?;
            }
            if let Some(g) = generator {
                cfg.generator = g.parse()?;
            }
            (
                RunConfig::Check {
                    claims: resolve_claims(&ids)?,
                    strict,
                    campaign: cfg,
                },
                out,
                cloud,
            )
        }
        Command::Evolve {
            input: i,
            schedule,
            common,
        } => (
            RunConfig::Evolve {
                input: input(i),
                schedule,
                settings: settings(&common)?,
            },
            common.out,
            None,
        ),
        Command::Replay { .. } => unreachable!("handled by run"),
    })
}

fn resolve_claims(ids: &[String]) -> Outcome<Vec<String>> {
    if ids.iter().any(|s| s.eq_ignore_ascii_case("all")) {
        return Ok(claims::CLAIM_IDS.iter().map(|s| s.to_string()).collect());
    }
    let mut out: Vec<String> = Vec::new();
    for id in ids {
        let id = claims::resolve_claim(id)?.to_string();
        if !out.contains(&id) {
            out.push(id);
        }
    }
    Ok(out)
}

/// `start:stop:count` (inclusive endpoints) or `a,b,c`.
pub fn parse_grid(spec: &str) -> Outcome<Vec<f64>> {
    let bad = || Failure::Input(format!("bad grid {spec:?}"));
    let grid: Vec<f64> = if let [a, b, n] = spec.split(':').collect::<Vec<_>>().as_slice() {
        let a: f64 = a.trim().parse().map_err(|_| bad())?;
        let b: f64 = b.trim().parse().map_err(|_| bad())?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        if n < 2 {
            return Err(Failure::Input("a grid needs at least 2 points".into()));
        }
        (0..n)
            .map(|k| {
                if k == n - 1 {
                    b
                } else {
                    a + (b - a) * k as f64 / (n - 1) as f64
                }
            })
            .collect()
    } else {
        spec.split(',')
            .map(|s| s.trim().parse().map_err(|_| bad()))
            .collect::<Outcome<_>>()?
    };
    if grid.len() < 2 {
        return Err(Failure::Input("a grid needs at least 2 points".into()));
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(bad());
    }
    Ok(grid)
}

fn read(path: &Path) -> Outcome<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_state(input: &Input) -> Outcome<DensityMatrix> {
    match input {
        Input::Family(name) => Ok(named_family(name)?),
        Input::State(path) => StateFile::parse(&read(path)?)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
    }
}

/// Pulls the embedded config out of a JSON or CSV artifact.
pub fn load_config(path: &Path) -> Outcome<RunConfig> {
    let text = read(path)?;
    let bad = |why: String| Failure::Input(format!("{}: {why}", path.display()));
    let (tool, config) = if text.trim_start().starts_with('{') {
        #[derive(Deserialize)]
        struct Envelope {
            tool: String,
            config: RunConfig,
        }
        let env: Envelope = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
        (env.tool, env.config)
    } else {
        let field = |key: &str| {
            text.lines()
                .take_while(|l| l.starts_with('#'))
                .find_map(|l| l.strip_prefix(key))
                .map(str::to_string)
        };
        let tool = field("# tool: ").ok_or_else(|| bad("no tool line".into()))?;
        let cfg = field("# config: ").ok_or_else(|| bad("no config line".into()))?;
        (
            tool,
            serde_json::from_str(&cfg).map_err(|e| bad(e.to_string()))?,
        )
    };
    if tool != TOOL {
        eprintln!("warning: artifact written by {tool}, replaying with {TOOL}");
    }
    Ok(config)
}

fn emit(out: Option<&Path>, text: &str) -> Outcome<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Input(format!("stdout: {e}")))
        }
    }
}

fn json_artifact(config: &RunConfig, key: &str, value: &impl Serialize) -> String {
    let mut map = serde_json::Map::new();
    map.insert("tool".into(), TOOL.into());
    map.insert(
        "config".into(),
        serde_json::to_value(config).expect("config serializes"),
    );
    map.insert(
        key.into(),
        serde_json::to_value(value).expect("result serializes"),
    );
    let mut s = serde_json::to_string_pretty(&map).expect("json serializes");
    s.push('\n');
    s
}

fn csv_preamble(config: &RunConfig, header: &str) -> String {
    format!(
        "# tool: {TOOL}\n# config: {}\n{header}\n",
        serde_json::to_string(config).expect("config serializes")
    )
}

/// Fixed 17-significant-digit float; empty for a missing value.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn execute(config: &RunConfig, out: Option<&Path>, cloud: Option<&Path>) -> Outcome<()> {
    match config {
        RunConfig::Profile { input, settings } => {
            let rho = load_state(input)?;
            let p = profile(&rho, &settings.build(rho.dims()[0])?)?;
            emit(out, &json_artifact(config, "profile", &p))
        }
        RunConfig::Sweep {
            family,
            grid,
            coupling,
            settings,
        } => {
            if grid.len() < 2 {
                return Err(Failure::Input("a grid needs at least 2 points".into()));
            }
            let pcfg = settings.build(2)?;
            let mut text = csv_preamble(config, SWEEP_HEADER);
            for &x in grid {
                let rho = sweep_state(*family, x, *coupling)?;
                let p = profile(&rho, &pcfg)?;
                sweep_row(&mut text, x, &p);
            }
            emit(out, &text)
        }
        RunConfig::Check {
            claims: ids,
            strict,
            campaign,
        } => run_check(config, ids, *strict, campaign, out, cloud),
        RunConfig::Evolve {
            input,
            schedule,
            settings,
        } => {
            let rho = load_state(input)?;
            let specs = parse_schedule(&read(schedule)?)?;
            let pcfg = settings.build(rho.dims()[0])?;
            let steps = specs
                .iter()
                .enumerate()
                .map(|(k, s)| s.build(rho.dims(), &pcfg.generator, k))
                .collect::<crate::Result<Vec<_>>>()?;
            let traj = trajectory(&rho, &steps, &pcfg)?;
            let mut text = csv_preamble(config, TRAJECTORY_HEADER);
            let n0 = traj.steps[0].profile.norm;
            for (k, pt) in traj.steps.iter().enumerate() {
                let p = &pt.profile;
                let _ = writeln!(
                    text,
                    "{k},{},{},{},{},{},{}",
                    csv_field(&pt.label),
                    fmt_f64(p.q1),
                    fmt_f64(p.q2),
                    fmt_f64(p.q3),
                    fmt_f64(p.norm),
                    fmt_f64(p.norm - n0),
                );
            }
            let m = traj.monotone;
            let _ = writeln!(
                text,
                "# monotone: q1={} q2={} q3={} norm={}",
                m.q1, m.q2, m.q3, m.norm
            );
            emit(out, &text)
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn sweep_state(family: SweepFamily, x: f64, coupling: f64) -> Outcome<DensityMatrix> {
    Ok(match family {
        SweepFamily::Werner => werner_spectator(x)?,
        SweepFamily::DepolarizeBell => {
            let rho = bell_spectator(2, &states::basis_state(2, 0)?)?;
            channels::apply(&channels::depolarizing(2, x)?, &rho, 0)?
        }
        SweepFamily::GibbsBeta => gibbs_family(x, coupling)?,
    })
}

fn sweep_row(text: &mut String, x: f64, p: &ResourceProfile) {
    let b = &p.breakdown;
    let _ = writeln!(
        text,
        "{},{},{},{},{},{},{},{},{},{},{}",
        fmt_f64(x),
        fmt_f64(p.q1),
        fmt_f64(p.q2),
        fmt_f64(p.q3),
        fmt_f64(p.norm),
        fmt_opt(b.q1_raw),
        fmt_opt(b.q2_raw),
        fmt_opt(b.f_max),
        fmt_opt(b.f_max_transfer),
        fmt_f64(b.f_q),
        fmt_f64(b.f_q_max),
    );
}

fn cloud_csv(config: &RunConfig, points: &[CloudPoint]) -> String {
    let mut text = csv_preamble(config, CLOUD_HEADER);
    for pt in points {
        let _ = writeln!(
            text,
            "{},{},{},{},{},{},{},{},{}",
            pt.trial,
            pt.seed.master,
            pt.seed.stream,
            fmt_f64(pt.q1),
            fmt_f64(pt.q2),
            fmt_f64(pt.q3),
            fmt_f64(pt.norm),
            fmt_opt(pt.q1_raw),
            fmt_opt(pt.q2_raw),
        );
    }
    text
}

fn run_check(
    config: &RunConfig,
    ids: &[String],
    strict: bool,
    campaign: &CampaignConfig,
    out: Option<&Path>,
    cloud: Option<&Path>,
) -> Outcome<()> {
    campaign.validate()?;
    let mut reports: Vec<ClaimReport> = Vec::new();
    let mut points = None;
    for id in ids {
        let id = claims::resolve_claim(id)?;
        let (report, cloud_pts) = claims::run_claim(id, campaign)?;
        eprintln!(
            "{}: {:?}, {} violations in {} trials",
            report.claim_id, report.verdict, report.violations, report.trials
        );
        points = points.or(cloud_pts);
        reports.push(report);
    }
    if let Some(path) = cloud {
        match &points {
            Some(pts) => emit(Some(path), &cloud_csv(config, pts))?,
            None => eprintln!("warning: no point cloud produced (run T1 for one)"),
        }
    }
    emit(out, &json_artifact(config, "reports", &reports))?;
    let hard: Vec<&str> = reports
        .iter()
        .filter(|r| r.hard_failure())
        .map(|r| r.claim_id.as_str())
        .collect();
    if !hard.is_empty() {
        return Err(Failure::Violation(format!(
            "hard violations: {}",
            hard.join(", ")
        )));
    }
    if strict {
        let found: Vec<&str> = reports
            .iter()
            .filter(|r| r.has_findings())
            .map(|r| r.claim_id.as_str())
            .collect();
        if !found.is_empty() {
            return Err(Failure::Violation(format!(
                "report-only findings (strict): {}",
                found.join(", ")
            )));
        }
    }
    Ok(())
}
