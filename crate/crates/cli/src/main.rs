use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand};
use ghz_core::dichotomy::{classify, kakutani_classify, Classification, GaussianPerturbation};
use ghz_core::fluct::{discrete_perturbation_verdict, ghz_epsilon_chain, perturbed_pair};
use ghz_core::hv::{
    build_singular_contextual_model, exhaustive_no_go, ghz_constraints, lp_min_fluctuation, parity_obstruction, sample,
    Constraint, ContextualModel,
};
use ghz_core::phase::parse_phase_list;
use ghz_core::quantum::{ghz_state, outcome_distribution};
use ghz_core::{Phase, PhaseTriple, Sign};
use serde::Serialize;

mod output;

use output::Format;

#[derive(Parser, Debug)]
#[command(
    name = "ghz",
    version,
    about = "Quantum predictions, hidden-variable models and fluctuation bounds for the GHZ scheme"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Outcome law and product expectation of the GHZ state at three phases.
    Predict {
        /// Comma-separated phases in radians; `pi/2`, `3pi/2` and similar are exact.
        #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
        phases: PhaseTriple,
    },
    /// Singular/equivalent verdict for a Gaussian perturbation.
    Classify {
        /// Perturbation as a JSON file path or inline JSON.
        #[arg(long)]
        spec: String,
    },
    /// Exhaustive search for deterministic assignments satisfying every constraint.
    Nogo {
        /// Require +1 instead of -1 at (pi/2, pi/2, pi/2).
        #[arg(long)]
        flip_fourth: bool,
        /// Constraint family as a JSON file path or inline JSON array.
        #[arg(long, conflicts_with = "flip_fourth")]
        constraints: Option<String>,
    },
    /// Smallest fluctuation compatible with all four constraints at probability one.
    Bound {
        #[arg(long)]
        constraints: Option<String>,
    },
    /// Build or sample contextual hidden-variable models.
    #[command(subcommand)]
    Model(ModelCommand),
    /// Step-by-step evaluation of the fluctuation inequality chain on a model.
    EpsilonChain {
        /// Model JSON file; defaults to the singular model.
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Two distributions on N points differing by delta at every point.
    DiscreteExample {
        #[arg(long)]
        points: usize,
        #[arg(long)]
        delta: f64,
    },
}

#[derive(Subcommand, Debug)]
enum ModelCommand {
    /// Write a model as JSON.
    Build(BuildArgs),
    /// Draw samples at one setting and count joint outcomes.
    Sample(SampleArgs),
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("kind").required(true).args(["singular", "lp_witness"])))]
struct BuildArgs {
    /// Disjoint supports, one per constraint.
    #[arg(long)]
    singular: bool,
    /// The minimal-fluctuation family found by linear programming.
    #[arg(long)]
    lp_witness: bool,
    #[arg(long)]
    constraints: Option<String>,
}

#[derive(Args, Debug)]
struct SampleArgs {
    /// Setting to sample at, e.g. `pi/2,0,0`.
    #[arg(long, value_parser = parse_setting, allow_hyphen_values = true)]
    setting: Setting,
    #[arg(short = 'n', long = "samples")]
    n: u64,
    #[arg(long)]
    seed: u64,
    /// Model JSON file; defaults to the singular model.
    #[arg(long)]
    model: Option<PathBuf>,
    /// Largest per-phase gap, in radians, when matching `--setting` to the model.
    #[arg(long, default_value_t = 1e-6)]
    setting_tolerance: f64,
}

fn parse_triple(s: &str) -> Result<PhaseTriple, String> {
    s.parse().map_err(|e| format!("{e}"))
}

#[derive(Clone, Debug)]
struct Setting(Vec<Phase>);

fn parse_setting(s: &str) -> Result<Setting, String> {
    parse_phase_list(s).map(Setting).map_err(|e| format!("{e}"))
}

/// Inline JSON if the argument looks like JSON, otherwise a file path.
fn read_json_arg(arg: &str) -> Result<String> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg).with_context(|| format!("reading {arg}"))
    }
}

fn load_constraints(arg: Option<&str>) -> Result<Vec<Constraint>> {
    match arg {
        None => Ok(ghz_constraints()),
        Some(a) => {
            let family: Vec<Constraint> =
                serde_json::from_str(&read_json_arg(a)?).context("parsing constraint family")?;
            if family.is_empty() {
                bail!("constraint family is empty");
            }
            Ok(family)
        }
    }
}

fn load_model(path: Option<&Path>) -> Result<ContextualModel> {
    match path {
        None => Ok(build_singular_contextual_model(&ghz_constraints())?),
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing model {}", p.display()))
        }
    }
}

#[derive(Serialize)]
struct Prediction {
    #[serde(flatten)]
    distribution: ghz_core::quantum::OutcomeDistribution,
    product_expectation: f64,
}

#[derive(Serialize)]
struct ClassifyReport {
    perturbation: GaussianPerturbation,
    feldman_hajek: Classification,
    kakutani: Classification,
    routes_agree: bool,
}

#[derive(Serialize)]
struct BoundReport {
    epsilon_star: f64,
    lp_iterations: usize,
    lower_bound: f64,
    /// `pass` iff `epsilon_star ≥ 1/3`.
    assertion: &'static str,
    witness: ContextualModel,
}

fn run(cli: Cli) -> Result<()> {
    let out = cli.out.as_deref();
    match cli.command {
        Command::Predict { phases } => {
            let distribution = outcome_distribution(&ghz_state(), phases)?;
            let product_expectation = distribution.correlator(&[0, 1, 2]);
            match cli.format.unwrap_or(Format::Json) {
                Format::Csv => {
                    let rows = distribution.iter().map(|(o, p)| vec![o.label(), output::number(p)]);
                    output::emit_csv(out, &["outcome", "probability"], rows)
                }
                Format::Json => output::emit_json(
                    out,
                    &Prediction {
                        distribution,
                        product_expectation,
                    },
                ),
            }
        }
        Command::Classify { spec } => {
            let perturbation: GaussianPerturbation =
                serde_json::from_str(&read_json_arg(&spec)?).context("parsing perturbation spec")?;
            let feldman_hajek = classify(&perturbation)?;
            let kakutani = kakutani_classify(&perturbation)?;
            let routes_agree = feldman_hajek.verdict == kakutani.verdict;
            let report = ClassifyReport {
                perturbation,
                feldman_hajek,
                kakutani,
                routes_agree,
            };
            output::emit_structured(out, cli.format, &report)
        }
        Command::Nogo {
            flip_fourth,
            constraints,
        } => {
            let mut family = load_constraints(constraints.as_deref())?;
            if flip_fourth {
                let last = family.len() - 1;
                family[last] = family[last].with_sign(Sign::Plus);
            }
            let report = exhaustive_no_go(&family)?;
            let parity = parity_obstruction(&family)?;
            output::emit_structured(
                out,
                cli.format,
                &serde_json::json!({ "no_go": report, "parity": parity }),
            )
        }
        Command::Bound { constraints } => {
            let family = load_constraints(constraints.as_deref())?;
            let opt = lp_min_fluctuation(&family)?;
            let report = BoundReport {
                epsilon_star: opt.epsilon_star,
                lp_iterations: opt.lp_iterations,
                lower_bound: 1.0 / 3.0,
                assertion: if opt.epsilon_star >= 1.0 / 3.0 - 1e-9 {
                    "pass"
                } else {
                    "fail"
                },
                witness: opt.witness,
            };
            output::emit_structured(out, cli.format, &report)
        }
        Command::Model(ModelCommand::Build(args)) => {
            let family = load_constraints(args.constraints.as_deref())?;
            let model = if args.singular {
                build_singular_contextual_model(&family)?
            } else {
                lp_min_fluctuation(&family)?.witness
            };
            output::emit_structured(out, cli.format, &model)
        }
        Command::Model(ModelCommand::Sample(args)) => {
            let model = load_model(args.model.as_deref())?;
            let wanted = &args.setting.0;
            let idx = model
                .index_of(wanted)
                .or_else(|| model.nearest_index(wanted, args.setting_tolerance))
                .with_context(|| format!("model has no unique setting near {}", show_phases(wanted)))?;
            let counts = sample(&model, &model.settings()[idx], args.n, args.seed)?;
            match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => output::emit_text(out, &counts.to_csv()),
                Format::Json => output::emit_json(out, &counts),
            }
        }
        Command::EpsilonChain { model } => {
            let model = load_model(model.as_deref())?;
            let audit = ghz_epsilon_chain(&model, &ghz_constraints())?;
            output::emit_structured(out, cli.format, &audit)
        }
        Command::DiscreteExample { points, delta } => {
            let verdict = discrete_perturbation_verdict(points, delta)?;
            let (p, q) = perturbed_pair(points, delta)?;
            let value = serde_json::json!({ "verdict": verdict, "p": p, "p_prime": q });
            output::emit_structured(out, cli.format, &value)
        }
    }
}

fn show_phases(phases: &[Phase]) -> String {
    phases
        .iter()
        .map(|p| p.radians().to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
