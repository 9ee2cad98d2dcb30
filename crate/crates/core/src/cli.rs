//! Command-line surface: `demo`, `scenario`, `timing`, and `sweep`.
//!
//! Exit codes: 0 = consistent, 1 = input or usage error, 2 = signaling
//! witness found, 3 = internal consistency failure. All structured output
//! goes to standard output (JSON for reports, CSV for sweeps) with numbers
//! rounded to 12 significant digits so runs diff cleanly; diagnostics go
//! to standard error.

use std::fs;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::quantum::{LocalSetting, MeasurementSettings, Party, StateVector};
use crate::report::{format_number, to_stable_json};
use crate::scenario::{named_setting, parse_setting, BlochSpec, ScenarioFile};
use crate::timing::{
    model1_classify, model1_timing_window, multisim_classify, Model1Config, Model2Config,
    SpacetimeEvent,
};
use crate::witness::{
    mixed_model_box_test, run_scenario_with_tol, visibility_report, ChshSelection, Mode, Scenario,
    TimingInput, Verdict, WitnessError,
};
use crate::FEAS_TOL;

pub const EXIT_CONSISTENT: i32 = 0;
pub const EXIT_INPUT_ERROR: i32 = 1;
pub const EXIT_SIGNALING: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Debug, Parser)]
#[command(name = "nosig", version, about = "No-signaling feasibility analysis for tripartite hidden-communication models", long_about = None)]
struct Cli {
    /// Feasibility tolerance for the constraint solver.
    #[arg(long, global = true, default_value_t = FEAS_TOL)]
    tol: f64,

    /// Output format; `auto` picks JSON for reports and CSV for sweeps.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Auto)]
    output: OutputFormat,

    /// Print the JSON report schema and exit.
    #[arg(long, global = true)]
    schema: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Auto,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a named demonstration (ghz or w) end to end.
    Demo {
        /// Demonstration name: "ghz" or "w".
        name: String,
    },
    /// Evaluate a scenario file.
    Scenario {
        /// Path to a scenario JSON file.
        path: PathBuf,
    },
    /// Classify pair timing under a causal model.
    Timing(TimingArgs),
    /// Emit plot-ready CSV over a parameter grid.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct TimingArgs {
    /// Causal model: preferred frame ("pf") or per-device frames ("multisim").
    #[arg(long, value_enum)]
    model: TimingModel,

    /// pf: half-distance between the A and B devices.
    #[arg(long, allow_negative_numbers = true)]
    x: Option<f64>,

    /// pf: hidden-communication speed (units of c).
    #[arg(long)]
    v_hc: Option<f64>,

    /// pf: measurement time of C.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    t_c: f64,

    /// pf: delay added to A's measurement.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    delay_a: f64,

    /// pf: delay added to B's measurement.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    delay_b: f64,

    /// multisim: measurement event as "x,t"; pass three (A, B, C).
    #[arg(long, allow_hyphen_values = true)]
    event: Vec<String>,

    /// multisim: device velocity in the lab frame; pass three (A, B, C).
    #[arg(long, allow_negative_numbers = true)]
    velocity: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TimingModel {
    Pf,
    Multisim,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Visibility sweep: smallest/largest feasible scaling of the QM A-B
    /// correlator, one row per (state, observable) grid point.
    #[arg(long, conflicts_with = "box_chsh")]
    visibility: bool,

    /// Interval-box CHSH sweep: per-setting-pair feasible A-B intervals
    /// and the CHSH extremes over the box.
    #[arg(long = "box-chsh")]
    box_chsh: bool,

    /// States on the grid ("ghz" or "w"), comma separated.
    #[arg(long, value_delimiter = ',', default_value = "ghz")]
    state: Vec<String>,

    /// Observables on the visibility grid ("x", "y", "z"), applied to all
    /// three parties, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "z")]
    obs: Vec<String>,

    /// box-chsh: Alice's candidate settings, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "x,y")]
    alice_obs: Vec<String>,

    /// box-chsh: Bob's candidate settings, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "x,y")]
    bob_obs: Vec<String>,

    /// box-chsh: Charlie's fixed setting.
    #[arg(long, default_value = "x")]
    charlie_obs: String,
}

/// Parses `std::env::args` and dispatches; returns the process exit code.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return EXIT_CONSISTENT;
        }
        Err(e) => {
            eprint!("{e}");
            return EXIT_INPUT_ERROR;
        }
    };

    if cli.schema {
        print!("{REPORT_SCHEMA}");
        return EXIT_CONSISTENT;
    }

    let Some(command) = cli.command else {
        eprintln!("error: a subcommand is required (demo, scenario, timing, sweep); see --help");
        return EXIT_INPUT_ERROR;
    };

    match dispatch(command, cli.tol, cli.output) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Internal(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Internal(m) => f.write_str(m),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT_ERROR,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

fn witness_error(e: WitnessError) -> CliError {
    match &e {
        WitnessError::InternalInconsistency(_) => CliError::Internal(e.to_string()),
        _ => CliError::Input(e.to_string()),
    }
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

fn dispatch(command: Command, tol: f64, output: OutputFormat) -> Result<i32, CliError> {
    match command {
        Command::Demo { name } => {
            require_json(output, "demo")?;
            cmd_demo(&name, tol)
        }
        Command::Scenario { path } => {
            require_json(output, "scenario")?;
            cmd_scenario(&path, tol)
        }
        Command::Timing(args) => {
            require_json(output, "timing")?;
            cmd_timing(&args)
        }
        Command::Sweep(args) => {
            if output == OutputFormat::Json {
                return Err(CliError::Input(
                    "sweep emits CSV; --output json is not supported here".into(),
                ));
            }
            cmd_sweep(&args)
        }
    }
}

fn require_json(output: OutputFormat, cmd: &str) -> Result<(), CliError> {
    if output == OutputFormat::Csv {
        return Err(CliError::Input(format!(
            "{cmd} emits a JSON report; --output csv is only available for sweep"
        )));
    }
    Ok(())
}

struct Demo {
    state: StateVector,
    state_name: &'static str,
    obs_name: &'static str,
    settings: MeasurementSettings,
}

fn named_demo(name: &str) -> Result<Demo, CliError> {
    let (state, state_name, obs_name) = match name {
        "ghz" => (StateVector::ghz(), "ghz", "z"),
        "w" => (StateVector::w(), "w", "x"),
        other => {
            return Err(CliError::Input(format!(
                "unknown demo {other:?}; available demos: ghz, w"
            )))
        }
    };
    let settings = all_parties(obs_name).map_err(input)?;
    Ok(Demo {
        state,
        state_name,
        obs_name,
        settings,
    })
}

fn all_parties(obs: &str) -> Result<MeasurementSettings, crate::scenario::ScenarioError> {
    Ok(MeasurementSettings::new(
        named_setting(Party::A, obs)?,
        named_setting(Party::B, obs)?,
        named_setting(Party::C, obs)?,
    )?)
}

/// Runs the severed-A-B scenario in both modes: communication-only
/// (Condition 2, the severed pair factorizes) and the probe variant with
/// the severed correlators left free.
fn cmd_demo(name: &str, tol: f64) -> Result<i32, CliError> {
    let demo = named_demo(name)?;
    let timing = crate::timing::TimingStructure::severed_ab();

    let mut reports = Vec::with_capacity(2);
    for mode in [Mode::CommunicationOnly, Mode::MixedModelProbe] {
        let scenario = Scenario {
            state: demo.state.clone(),
            settings: demo.settings,
            timing: TimingInput::Structure(timing),
            mode,
        };
        reports.push(run_scenario_with_tol(&scenario, tol).map_err(witness_error)?);
    }
    let probe = reports.pop().expect("two reports");
    let comm = reports.pop().expect("two reports");
    let verdict = comm.verdict;

    let doc = json!({
        "demo": name,
        "state": demo.state_name,
        "observables": { "a": demo.obs_name, "b": demo.obs_name, "c": demo.obs_name },
        "timing": timing,
        "communication_only": comm,
        "mixed_model_probe": probe,
    });
    print!("{}", to_stable_json(&doc));
    Ok(verdict_code(verdict))
}

fn verdict_code(verdict: Verdict) -> i32 {
    if verdict == Verdict::SignalingWitness {
        EXIT_SIGNALING
    } else {
        EXIT_CONSISTENT
    }
}

fn cmd_scenario(path: &PathBuf, tol: f64) -> Result<i32, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let file = ScenarioFile::from_json(&text).map_err(input)?;
    let (scenario, file_tol) = file.build().map_err(input)?;
    let report =
        run_scenario_with_tol(&scenario, file_tol.unwrap_or(tol)).map_err(witness_error)?;
    print!("{}", to_stable_json(&report));
    Ok(verdict_code(report.verdict))
}

fn cmd_timing(args: &TimingArgs) -> Result<i32, CliError> {
    let doc = match args.model {
        TimingModel::Pf => {
            let (Some(x), Some(v_hc)) = (args.x, args.v_hc) else {
                return Err(CliError::Input(
                    "--model pf requires --x and --v-hc".into(),
                ));
            };
            let cfg = Model1Config::symmetric(x, v_hc, args.t_c)
                .and_then(|c| c.with_delays(args.delay_a, args.delay_b))
                .map_err(input)?;
            let labels = model1_classify(&cfg);
            let window = match model1_timing_window(x, v_hc) {
                Some((lo, hi)) => json!([lo, hi]),
                None => {
                    eprintln!(
                        "warning: no timing window at v_hc = {v_hc}; \
                         severing A-B alone needs v_hc > 3"
                    );
                    json!("empty")
                }
            };
            json!({ "model": "pf", "window": window, "labels": labels })
        }
        TimingModel::Multisim => {
            if args.event.len() != 3 || args.velocity.len() != 3 {
                return Err(CliError::Input(
                    "--model multisim requires exactly three --event and three --velocity".into(),
                ));
            }
            let mut events = [SpacetimeEvent::new(0.0, 0.0); 3];
            for (slot, text) in events.iter_mut().zip(&args.event) {
                *slot = parse_event(text)?;
            }
            let cfg = Model2Config::new(
                events,
                [args.velocity[0], args.velocity[1], args.velocity[2]],
            )
            .map_err(input)?;
            let labels = multisim_classify(&cfg).map_err(input)?;
            json!({ "model": "multisim", "labels": labels })
        }
    };
    print!("{}", to_stable_json(&doc));
    Ok(EXIT_CONSISTENT)
}

fn parse_event(text: &str) -> Result<SpacetimeEvent, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    let [x, t] = parts.as_slice() else {
        return Err(CliError::Input(format!(
            "event {text:?} must be \"x,t\""
        )));
    };
    let x: f64 = x.trim().parse().map_err(input)?;
    let t: f64 = t.trim().parse().map_err(input)?;
    Ok(SpacetimeEvent::new(x, t))
}

fn named_state(name: &str) -> Result<StateVector, CliError> {
    match name {
        "ghz" => Ok(StateVector::ghz()),
        "w" => Ok(StateVector::w()),
        other => Err(CliError::Input(format!(
            "unknown state {other:?}; use ghz or w"
        ))),
    }
}

fn cmd_sweep(args: &SweepArgs) -> Result<i32, CliError> {
    if args.visibility == args.box_chsh {
        return Err(CliError::Input(
            "pass exactly one of --visibility or --box-chsh".into(),
        ));
    }
    if args.visibility {
        sweep_visibility(args)
    } else {
        sweep_box_chsh(args)
    }
}

/// One CSV row per (state, observable) grid point, in grid order.
fn sweep_visibility(args: &SweepArgs) -> Result<i32, CliError> {
    let mut out = String::from("index,state,obs,e_ab_qm,v_min,v_max\n");
    let mut index = 0usize;
    for state_name in &args.state {
        let state = named_state(state_name)?;
        for obs in &args.obs {
            let settings = all_parties(obs).map_err(input)?;
            let report = visibility_report(&state, &settings).map_err(witness_error)?;
            out.push_str(&format!(
                "{index},{state_name},{obs},{},{},{}\n",
                format_number(report.e_ab_qm),
                format_number(report.v_min),
                format_number(report.v_max),
            ));
            index += 1;
        }
    }
    print!("{out}");
    Ok(EXIT_CONSISTENT)
}

/// One CSV row per (state, Alice setting, Bob setting), in grid order;
/// the box-level CHSH extremes repeat on each of the state's rows.
fn sweep_box_chsh(args: &SweepArgs) -> Result<i32, CliError> {
    let parse_side = |party: Party, names: &[String]| -> Result<Vec<LocalSetting>, CliError> {
        names
            .iter()
            .map(|n| parse_setting(party, &BlochSpec::Named(n.clone())).map_err(input))
            .collect()
    };
    let mut out = String::from("index,state,n,m,e_ab_qm,e_ab_lo,e_ab_hi,min_chsh,max_chsh\n");
    let mut index = 0usize;
    for state_name in &args.state {
        let state = named_state(state_name)?;
        let alice = parse_side(Party::A, &args.alice_obs)?;
        let bob = parse_side(Party::B, &args.bob_obs)?;
        let charlie = named_setting(Party::C, &args.charlie_obs).map_err(input)?;
        let result = mixed_model_box_test(&state, &alice, &bob, &charlie, ChshSelection::first_two())
            .map_err(witness_error)?;
        for pair in &result.pairs {
            out.push_str(&format!(
                "{index},{state_name},{},{},{},{},{},{},{}\n",
                pair.n,
                pair.m,
                format_number(pair.e_ab_qm),
                format_number(pair.e_ab_lo),
                format_number(pair.e_ab_hi),
                format_number(result.min_chsh),
                format_number(result.max_chsh),
            ));
            index += 1;
        }
    }
    print!("{out}");
    Ok(EXIT_CONSISTENT)
}
