//! Command-line front end: simulation, equilibrium, stability and parameter
//! sweeps with CSV or JSON reports.
//!
//! Exit codes: 0 on success, 1 on domain or validation errors (a
//! machine-readable `{"error":{...}}` line goes to stderr), 2 on usage
//! errors. Data streams carry no run metadata; the banner goes to stderr
//! and `--quiet` suppresses it.

mod output;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use samuelson::equilibrium::{build_problem, EquilibriumResult, Regularity, RegularizationConfig};
use samuelson::model::{
    simulate, simulate_classic, ClassicParams, ModelParams, Trajectory, ValidationMode,
};
use samuelson::spectral::{analyze, characteristic, SpectralReport, Stability};

use output::{emit, num, report, Json};
use sweep::{Analyses, AxisRange, SweepSpec};

const MAX_STEPS: u64 = 10_000_000;
const DEFAULT_THETA: f64 = 1e-6;

#[derive(Parser)]
#[command(name = "samuelson", version, about = "Delayed multiplier-accelerator income model")]
struct Cli {
    /// Suppress the stderr banner.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the delayed third-order income recurrence.
    Simulate(SimulateArgs),
    /// Simulate the classic second-order reference model.
    SimulateClassic(SimulateClassicArgs),
    /// Compute the equilibrium: closed form when the system is regular,
    /// Tikhonov-regularized on the rank-deficient boundary.
    Equilibrium(EquilibriumArgs),
    /// Classify stability from the characteristic roots.
    Stability(StabilityArgs),
    /// Evaluate a parameter grid, one report row per point.
    Sweep(SweepArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::SimulateClassic(_) => "simulate-classic",
            Command::Equilibrium(_) => "equilibrium",
            Command::Stability(_) => "stability",
            Command::Sweep(_) => "sweep",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, PartialEq)]
enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy)]
enum Mode {
    Strict,
    Extended,
}

impl Mode {
    fn to_validation(self) -> ValidationMode {
        match self {
            Mode::Strict => ValidationMode::Strict,
            Mode::Extended => ValidationMode::Extended,
        }
    }
}

#[derive(Args)]
struct ModelFlags {
    /// Consumption weight on the previous income.
    #[arg(long)]
    c1: f64,
    /// Consumption weight on the income two periods back.
    #[arg(long)]
    c2: f64,
    /// Accelerator factor.
    #[arg(long)]
    b: f64,
    /// Autonomous consumption level.
    #[arg(long)]
    p: f64,
    /// Validation mode; extended admits the boundary c1 + c2 = 1.
    #[arg(long, value_enum, default_value_t = Mode::Strict)]
    mode: Mode,
}

impl ModelFlags {
    fn build(&self) -> Result<ModelParams<f64>, Failure> {
        Ok(ModelParams::new(self.c1, self.c2, self.b, self.p, self.mode.to_validation())?)
    }
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SimulateArgs {
    #[command(flatten)]
    model: ModelFlags,
    /// Seed income T_0.
    #[arg(long)]
    t0: f64,
    /// Seed income T_1.
    #[arg(long)]
    t1: f64,
    /// Seed income T_2.
    #[arg(long)]
    t2: f64,
    /// Recurrence applications beyond the seeds.
    #[arg(long)]
    steps: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SimulateClassicArgs {
    /// Multiplier.
    #[arg(long)]
    a: f64,
    /// Accelerator factor.
    #[arg(long)]
    b: f64,
    /// Constant governmental expenditure.
    #[arg(long)]
    g_bar: f64,
    /// Seed income T_0.
    #[arg(long)]
    t0: f64,
    /// Seed income T_1.
    #[arg(long)]
    t1: f64,
    /// Recurrence applications beyond the seeds.
    #[arg(long)]
    steps: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct EquilibriumArgs {
    #[command(flatten)]
    model: ModelFlags,
    /// Tikhonov strength for the rank-deficient branch.
    #[arg(long, default_value_t = DEFAULT_THETA)]
    theta: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct StabilityArgs {
    /// Consumption weight on the previous income.
    #[arg(long)]
    c1: f64,
    /// Consumption weight on the income two periods back.
    #[arg(long)]
    c2: f64,
    /// Accelerator factor.
    #[arg(long)]
    b: f64,
    /// Autonomous consumption level (spectral analysis ignores it).
    #[arg(long, default_value_t = 0.0)]
    p: f64,
    #[arg(long, value_enum, default_value_t = Mode::Strict)]
    mode: Mode,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SweepArgs {
    /// c1 axis: VALUE or START:STOP:COUNT.
    #[arg(long, required_unless_present = "config", conflicts_with = "config")]
    c1: Option<String>,
    /// c2 axis: VALUE or START:STOP:COUNT.
    #[arg(long, required_unless_present = "config", conflicts_with = "config")]
    c2: Option<String>,
    /// b axis: VALUE or START:STOP:COUNT.
    #[arg(long, required_unless_present = "config", conflicts_with = "config")]
    b: Option<String>,
    /// Fixed autonomous level P.
    #[arg(long, required_unless_present = "config", conflicts_with = "config")]
    p: Option<f64>,
    /// Tikhonov strength used on rank-deficient grid points.
    #[arg(long, conflicts_with = "config")]
    theta: Option<f64>,
    #[arg(long, value_enum, default_value_t = Mode::Strict, conflicts_with = "config")]
    mode: Mode,
    /// Comma-separated per-point analyses: equilibrium,stability.
    #[arg(long, conflicts_with = "config")]
    analyses: Option<String>,
    /// Plain-text key=value sweep spec.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Domain failure reported as one machine-readable stderr line, exit 1.
struct Failure {
    code: &'static str,
    message: String,
}

impl Failure {
    fn new(code: &'static str, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }

    fn to_json_line(&self) -> String {
        Json::Object(vec![(
            "error",
            Json::Object(vec![
                ("code", Json::str(self.code)),
                ("message", Json::str(self.message.clone())),
            ]),
        )])
        .render()
    }
}

impl From<samuelson::Error> for Failure {
    fn from(e: samuelson::Error) -> Self {
        Failure { code: e.code(), message: e.to_string() }
    }
}

impl From<sweep::SweepError> for Failure {
    fn from(e: sweep::SweepError) -> Self {
        Failure { code: "invalid-sweep", message: e.0 }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: "io-error", message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if !cli.quiet {
        eprintln!("samuelson {} - {}", env!("CARGO_PKG_VERSION"), cli.command.name());
    }
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("{}", failure.to_json_line());
            ExitCode::from(1)
        }
    }
}

fn run(command: &Command) -> Result<(), Failure> {
    match command {
        Command::Simulate(args) => run_simulate(args),
        Command::SimulateClassic(args) => run_simulate_classic(args),
        Command::Equilibrium(args) => run_equilibrium(args),
        Command::Stability(args) => run_stability(args),
        Command::Sweep(args) => run_sweep(args),
    }
}

fn check_steps(steps: u64) -> Result<usize, Failure> {
    if steps > MAX_STEPS {
        return Err(Failure::new(
            "invalid-parameters",
            format!("steps must be at most {MAX_STEPS}, got {steps}"),
        ));
    }
    Ok(steps as usize)
}

fn mode_str(mode: ValidationMode) -> &'static str {
    match mode {
        ValidationMode::Strict => "strict",
        ValidationMode::Extended => "extended",
    }
}

fn stability_str(s: Stability) -> &'static str {
    match s {
        Stability::AsymptoticallyStable => "asymptotically_stable",
        Stability::Marginal => "marginal",
        Stability::Unstable => "unstable",
    }
}

fn model_json(params: &ModelParams<f64>) -> Json {
    Json::Object(vec![
        ("c1", Json::Num(params.c1())),
        ("c2", Json::Num(params.c2())),
        ("b", Json::Num(params.b())),
        ("P", Json::Num(params.p())),
        ("validation", Json::str(mode_str(params.mode()))),
    ])
}

fn run_simulate(args: &SimulateArgs) -> Result<(), Failure> {
    let params = args.model.build()?;
    let steps = check_steps(args.steps)?;
    let trajectory = simulate(&params, [args.t0, args.t1, args.t2], steps)?;
    let text = match args.format {
        Format::Csv => trajectory_csv(&trajectory, true),
        Format::Json => report(
            model_json(&params),
            trajectory_json(&trajectory, true),
            Json::Object(vec![
                ("steps", Json::Int(args.steps)),
                ("records", Json::Int(trajectory.records.len() as u64)),
            ]),
        ),
    };
    Ok(emit(&text, args.out.as_deref())?)
}

fn run_simulate_classic(args: &SimulateClassicArgs) -> Result<(), Failure> {
    let params = ClassicParams::new(args.a, args.b, args.g_bar)?;
    let steps = check_steps(args.steps)?;
    let trajectory = simulate_classic(&params, [args.t0, args.t1], steps)?;
    let text = match args.format {
        Format::Csv => trajectory_csv(&trajectory, false),
        Format::Json => report(
            Json::Object(vec![
                ("a", Json::Num(params.a())),
                ("b", Json::Num(params.b())),
                ("G_bar", Json::Num(params.g_bar())),
            ]),
            trajectory_json(&trajectory, false),
            Json::Object(vec![
                ("steps", Json::Int(args.steps)),
                ("records", Json::Int(trajectory.records.len() as u64)),
            ]),
        ),
    };
    Ok(emit(&text, args.out.as_deref())?)
}

fn trajectory_csv(trajectory: &Trajectory<f64>, with_components: bool) -> String {
    let mut text = String::new();
    text.push_str(if with_components { "k,T,C,I\n" } else { "k,T\n" });
    for record in &trajectory.records {
        text.push_str(&record.index.to_string());
        text.push(',');
        text.push_str(&num(record.income));
        if with_components {
            text.push(',');
            if let Some(c) = record.consumption {
                text.push_str(&num(c));
            }
            text.push(',');
            if let Some(i) = record.investment {
                text.push_str(&num(i));
            }
        }
        text.push('\n');
    }
    text
}

fn trajectory_json(trajectory: &Trajectory<f64>, with_components: bool) -> Json {
    let records = trajectory
        .records
        .iter()
        .map(|record| {
            let mut fields = vec![
                ("k", Json::Int(record.index as u64)),
                ("T", Json::Num(record.income)),
            ];
            if with_components {
                if let Some(c) = record.consumption {
                    fields.push(("C", Json::Num(c)));
                }
                if let Some(i) = record.investment {
                    fields.push(("I", Json::Num(i)));
                }
            }
            Json::Object(fields)
        })
        .collect();
    Json::Object(vec![
        ("start_index", Json::Int(trajectory.start_index as u64)),
        ("records", Json::Array(records)),
    ])
}

/// Unique equilibrium on regular systems, regularized on rank-deficient ones.
fn solve_equilibrium(
    params: &ModelParams<f64>,
    theta: f64,
) -> Result<(EquilibriumResult<f64>, Regularity, f64), Failure> {
    let problem = build_problem(params);
    let regularity = problem.regularity();
    let det_g = problem.matrix().det();
    let result = match regularity {
        Regularity::Regular => problem.unique_equilibrium()?,
        Regularity::RankDeficient => {
            problem.optimal_equilibrium(&RegularizationConfig::new(theta)?)?
        }
    };
    Ok((result, regularity, det_g))
}

fn kind_str(result: &EquilibriumResult<f64>) -> &'static str {
    match result.kind {
        samuelson::equilibrium::EquilibriumKind::Unique => "unique",
        samuelson::equilibrium::EquilibriumKind::Regularized => "regularized",
    }
}

fn regularity_str(regularity: Regularity) -> &'static str {
    match regularity {
        Regularity::Regular => "regular",
        Regularity::RankDeficient => "rank_deficient",
    }
}

fn equilibrium_result_json(result: &EquilibriumResult<f64>) -> Json {
    let mut fields = vec![
        ("kind", Json::str(kind_str(result))),
        ("s_e", Json::Num(result.income)),
        (
            "y_star",
            Json::Array(result.state.as_array().iter().map(|&x| Json::Num(x)).collect()),
        ),
        ("residual_d1", Json::Num(result.objective)),
    ];
    if let Some(theta) = result.theta {
        fields.push(("theta_used", Json::Num(theta)));
    }
    if let Some(consistent) = result.consistent {
        fields.push(("in_colspan", Json::Bool(consistent)));
    }
    Json::Object(fields)
}

fn run_equilibrium(args: &EquilibriumArgs) -> Result<(), Failure> {
    let params = args.model.build()?;
    let (result, regularity, det_g) = solve_equilibrium(&params, args.theta)?;
    let text = match args.format {
        Format::Json => report(
            model_json(&params),
            equilibrium_result_json(&result),
            Json::Object(vec![
                ("detG", Json::Num(det_g)),
                ("regularity", Json::str(regularity_str(regularity))),
            ]),
        ),
        Format::Csv => {
            let mut text = String::from("kind,s_e,s2,s3,residual_d1,theta,in_colspan\n");
            text.push_str(kind_str(&result));
            for value in result.state.as_array() {
                text.push(',');
                text.push_str(&num(value));
            }
            text.push(',');
            text.push_str(&num(result.objective));
            text.push(',');
            if let Some(theta) = result.theta {
                text.push_str(&num(theta));
            }
            text.push(',');
            if let Some(consistent) = result.consistent {
                text.push_str(if consistent { "true" } else { "false" });
            }
            text.push('\n');
            text
        }
    };
    Ok(emit(&text, args.out.as_deref())?)
}

fn spectral_json(report_data: &SpectralReport<f64>) -> Json {
    Json::Object(vec![
        (
            "roots",
            Json::Array(
                report_data
                    .roots
                    .iter()
                    .map(|r| Json::Object(vec![("re", Json::Num(r.re)), ("im", Json::Num(r.im))]))
                    .collect(),
            ),
        ),
        ("spectral_radius", Json::Num(report_data.spectral_radius)),
        ("classification", Json::str(stability_str(report_data.classification))),
        ("oscillatory", Json::Bool(report_data.oscillatory)),
    ])
}

fn run_stability(args: &StabilityArgs) -> Result<(), Failure> {
    let params = ModelParams::new(args.c1, args.c2, args.b, args.p, args.mode.to_validation())?;
    let report_data = analyze(&params);
    let cubic = characteristic(&params);
    let text = match args.format {
        Format::Json => report(
            model_json(&params),
            spectral_json(&report_data),
            Json::Object(vec![(
                "characteristic",
                Json::Array(vec![
                    Json::Num(1.0),
                    Json::Num(cubic.quadratic),
                    Json::Num(cubic.linear),
                    Json::Num(cubic.constant),
                ]),
            )]),
        ),
        Format::Csv => {
            let mut text =
                String::from("spectral_radius,classification,oscillatory,re1,im1,re2,im2,re3,im3\n");
            text.push_str(&num(report_data.spectral_radius));
            text.push(',');
            text.push_str(stability_str(report_data.classification));
            text.push(',');
            text.push_str(if report_data.oscillatory { "true" } else { "false" });
            for root in &report_data.roots {
                text.push(',');
                text.push_str(&num(root.re));
                text.push(',');
                text.push_str(&num(root.im));
            }
            text.push('\n');
            text
        }
    };
    Ok(emit(&text, args.out.as_deref())?)
}

fn run_sweep(args: &SweepArgs) -> Result<(), Failure> {
    let spec = match &args.config {
        Some(path) => SweepSpec::from_config(path)?,
        None => SweepSpec {
            c1: AxisRange::parse(args.c1.as_deref().expect("clap enforces presence"))?,
            c2: AxisRange::parse(args.c2.as_deref().expect("clap enforces presence"))?,
            b: AxisRange::parse(args.b.as_deref().expect("clap enforces presence"))?,
            p: args.p.expect("clap enforces presence"),
            theta: args.theta,
            mode: args.mode.to_validation(),
            analyses: match &args.analyses {
                Some(text) => Analyses::parse(text)?,
                None => Analyses { equilibrium: true, stability: true },
            },
        },
    };
    let theta = spec.theta.unwrap_or(DEFAULT_THETA);
    // reject a bad theta before touching the grid
    RegularizationConfig::new(theta)?;
    let grid = spec.grid()?;

    let mut rows_csv =
        String::from("c1,c2,b,P,detG,kind,s_e,theta,spectral_radius,classification\n");
    let mut rows_json = Vec::with_capacity(grid.len());
    for params in &grid {
        let problem = build_problem(params);
        let det_g = problem.matrix().det();
        let equilibrium =
            if spec.analyses.equilibrium { Some(solve_equilibrium(params, theta)?) } else { None };
        let spectral = if spec.analyses.stability { Some(analyze(params)) } else { None };

        let mut fields = vec![
            ("c1", Json::Num(params.c1())),
            ("c2", Json::Num(params.c2())),
            ("b", Json::Num(params.b())),
            ("P", Json::Num(params.p())),
            ("detG", Json::Num(det_g)),
        ];
        rows_csv.push_str(&num(params.c1()));
        rows_csv.push(',');
        rows_csv.push_str(&num(params.c2()));
        rows_csv.push(',');
        rows_csv.push_str(&num(params.b()));
        rows_csv.push(',');
        rows_csv.push_str(&num(params.p()));
        rows_csv.push(',');
        rows_csv.push_str(&num(det_g));
        rows_csv.push(',');
        if let Some((result, _, _)) = &equilibrium {
            rows_csv.push_str(kind_str(result));
            rows_csv.push(',');
            rows_csv.push_str(&num(result.income));
            rows_csv.push(',');
            if let Some(theta_used) = result.theta {
                rows_csv.push_str(&num(theta_used));
            }
            fields.push(("kind", Json::str(kind_str(result))));
            fields.push(("s_e", Json::Num(result.income)));
            if let Some(theta_used) = result.theta {
                fields.push(("theta", Json::Num(theta_used)));
            }
        } else {
            rows_csv.push(',');
            rows_csv.push(',');
        }
        rows_csv.push(',');
        if let Some(report_data) = &spectral {
            rows_csv.push_str(&num(report_data.spectral_radius));
            rows_csv.push(',');
            rows_csv.push_str(stability_str(report_data.classification));
            fields.push(("spectral_radius", Json::Num(report_data.spectral_radius)));
            fields.push((
                "classification",
                Json::str(stability_str(report_data.classification)),
            ));
        } else {
            rows_csv.push(',');
        }
        rows_csv.push('\n');
        rows_json.push(Json::Object(fields));
    }

    let text = match args.format {
        Format::Csv => rows_csv,
        Format::Json => {
            let axis = |a: &AxisRange| {
                Json::Object(vec![
                    ("start", Json::Num(a.start)),
                    ("stop", Json::Num(a.stop)),
                    ("count", Json::Int(a.count as u64)),
                ])
            };
            let mut analyses = Vec::new();
            if spec.analyses.equilibrium {
                analyses.push(Json::str("equilibrium"));
            }
            if spec.analyses.stability {
                analyses.push(Json::str("stability"));
            }
            report(
                Json::Object(vec![
                    ("c1", axis(&spec.c1)),
                    ("c2", axis(&spec.c2)),
                    ("b", axis(&spec.b)),
                    ("P", Json::Num(spec.p)),
                    ("mode", Json::str(mode_str(spec.mode))),
                    ("theta", Json::Num(theta)),
                    ("analyses", Json::Array(analyses)),
                ]),
                Json::Object(vec![("rows", Json::Array(rows_json))]),
                Json::Object(vec![("points", Json::Int(grid.len() as u64))]),
            )
        }
    };
    Ok(emit(&text, args.out.as_deref())?)
}
