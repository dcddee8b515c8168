//! `prophet`: prophet-inequality quantities, strategic signaling and equilibrium solvers for
//! instances given as JSON box distributions.

mod error;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use prophet_core::mc::{simulate, SimConfig};
use prophet_core::prophet::{
    dp_thresholds, expected_max, median_of_max, nonstrategic_dp_payoff, nonstrategic_payoff, spectrum,
};
use prophet_core::random::MC_SEED;
use prophet_core::report::{CaseReport, Row, Verdict};
use prophet_core::reproduce::{run_case, CASE_IDS};
use prophet_core::signaling::{best_response, SignalKind};
use prophet_core::stackelberg::{
    best_response_to_fixed, eval_profile, solve_dp_two_box, solve_frozen, solve_hem_two_box, solve_median_two_box,
};
use prophet_core::strategic::strategic_payoff;
use prophet_core::suites::{run_suite, SUITES};
use prophet_core::{EquilibriumOutcome, Instance, Policy, Profile, Regime};

use error::CliError;
use output::{render, Format};

#[derive(Parser)]
#[command(name = "prophet", version, about = "Prophet inequalities against strategic boxes")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Strategic,
    Classic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolicyName {
    Dp,
    Hem,
    Median,
}

#[derive(Subcommand)]
enum Command {
    /// Expected maximum (prophet value).
    Opt { file: PathBuf },
    /// Classic half-approximate thresholds and the DP payoff.
    Spectrum { file: PathBuf },
    /// Each box's optimal signaling against a threshold.
    BestResponse {
        file: PathBuf,
        #[arg(long)]
        threshold: f64,
    },
    /// Searcher payoff of a single threshold.
    Payoff {
        file: PathBuf,
        #[arg(long)]
        threshold: f64,
        #[arg(long, value_enum, default_value_t = Mode::Strategic)]
        mode: Mode,
    },
    /// Equilibrium of a threshold policy; `--frozen` computes thresholds from the priors.
    Equilibrium {
        file: PathBuf,
        #[arg(long, value_enum)]
        policy: PolicyName,
        #[arg(long)]
        frozen: bool,
    },
    /// Monte Carlo playouts of a fixed threshold or an equilibrium.
    Simulate {
        file: PathBuf,
        #[arg(long, value_enum, required_unless_present = "threshold")]
        policy: Option<PolicyName>,
        #[arg(long, conflicts_with = "policy")]
        threshold: Option<f64>,
        #[arg(long)]
        frozen: bool,
        #[arg(long, value_enum, default_value_t = Mode::Strategic)]
        mode: Mode,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, env = "PROPHET_SEED")]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        streams: usize,
    },
    /// Reproduce a registered case, or `all` for one summary row per case.
    Reproduce { case: String },
    /// Run a seeded property suite, or `all`.
    Check { suite: String },
}

struct Outcome {
    rows: Vec<Row>,
    ok: bool,
}

impl Outcome {
    fn info(rows: Vec<Row>) -> Self {
        Self { rows, ok: true }
    }
}

fn row(case: &str, quantity: impl Into<String>, value: f64, reference: impl Into<String>, verdict: Verdict) -> Row {
    Row {
        case_id: case.into(),
        quantity: quantity.into(),
        value,
        reference: reference.into(),
        verdict,
    }
}

fn info(case: &str, quantity: impl Into<String>, value: f64) -> Row {
    row(case, quantity, value, "", Verdict::Info)
}

fn policy_of(name: PolicyName, frozen: bool) -> Policy {
    match (name, frozen) {
        (PolicyName::Dp, false) => Policy::Dp,
        (PolicyName::Hem, false) => Policy::Hem,
        (PolicyName::Median, false) => Policy::Median,
        (PolicyName::Dp, true) => Policy::DpH,
        (PolicyName::Hem, true) => Policy::HemH,
        (PolicyName::Median, true) => Policy::MedianH,
    }
}

fn equilibrium(inst: &Instance, name: PolicyName, frozen: bool) -> Result<EquilibriumOutcome, CliError> {
    let policy = policy_of(name, frozen);
    if frozen {
        return Ok(solve_frozen(policy, inst.boxes())?);
    }
    let [h1, h2] = inst.boxes() else {
        return Err(CliError::Usage(format!(
            "{policy} equilibrium is solved for two boxes; use --frozen for other sizes"
        )));
    };
    Ok(match name {
        PolicyName::Dp => solve_dp_two_box(h1, h2)?,
        PolicyName::Hem => solve_hem_two_box(h1, h2)?,
        PolicyName::Median => solve_median_two_box(h1, h2)?,
    })
}

fn run(command: Command) -> Result<Outcome, CliError> {
    Ok(match command {
        Command::Opt { file } => {
            let inst = input::read_instance(&file)?;
            Outcome::info(vec![
                info("opt", "expected_max", expected_max(&inst)),
                info("opt", "boxes", inst.len() as f64),
            ])
        }
        Command::Spectrum { file } => {
            let inst = input::read_instance(&file)?;
            let s = spectrum(&inst);
            let c = "spectrum";
            let mut rows = vec![
                info(c, "opt", expected_max(&inst)),
                info(c, "t_kw", s.t_kw),
                info(c, "t_sc", s.t_sc),
                info(c, "median_lower", s.median_lower),
                info(c, "median_of_max", median_of_max(&inst)),
                info(c, "t_star", s.t_star),
                info(c, "dp_payoff", nonstrategic_dp_payoff(&inst)),
            ];
            rows.extend(
                dp_thresholds(&inst)
                    .iter()
                    .enumerate()
                    .map(|(i, t)| info(c, format!("dp_threshold_{}", i + 1), *t)),
            );
            Outcome::info(rows)
        }
        Command::BestResponse { file, threshold } => {
            let inst = input::read_instance(&file)?;
            let c = "best-response";
            let mut rows = Vec::new();
            for (i, d) in inst.boxes().iter().enumerate() {
                let s = best_response(d, threshold);
                let kind = match s.kind {
                    SignalKind::NoInformation => "no-information",
                    SignalKind::ThresholdSignaling => "threshold-signaling",
                    SignalKind::AlwaysRejected => "always-rejected",
                };
                let b = i + 1;
                rows.push(row(
                    c,
                    format!("box{b}_accept_prob"),
                    s.accept_prob,
                    kind,
                    Verdict::Info,
                ));
                rows.push(info(c, format!("box{b}_reject_prob"), s.reject_prob()));
                if let Some(cut) = s.cutoff {
                    rows.push(info(c, format!("box{b}_cutoff"), cut));
                    rows.push(info(c, format!("box{b}_partial_mass"), s.partial_mass));
                }
                if let Some(low) = s.low_posterior {
                    rows.push(info(c, format!("box{b}_low_posterior"), low));
                }
            }
            Outcome::info(rows)
        }
        Command::Payoff { file, threshold, mode } => {
            let inst = input::read_instance(&file)?;
            let opt = expected_max(&inst);
            let (name, u) = match mode {
                Mode::Strategic => ("strategic_payoff", strategic_payoff(&inst, threshold)),
                Mode::Classic => ("classic_payoff", nonstrategic_payoff(&inst, threshold)),
            };
            let c = "payoff";
            Outcome::info(vec![
                info(c, "threshold", threshold),
                info(c, name, u),
                info(c, "opt", opt),
                info(c, "ratio", u / opt),
            ])
        }
        Command::Equilibrium { file, policy, frozen } => {
            let inst = input::read_instance(&file)?;
            let out = equilibrium(&inst, policy, frozen)?;
            Outcome::info(equilibrium_rows(&out))
        }
        Command::Simulate {
            file,
            policy,
            threshold,
            frozen,
            mode,
            samples,
            seed,
            streams,
        } => {
            let inst = input::read_instance(&file)?;
            let priors = inst.boxes().to_vec();
            let (policy, profile) = match (threshold, policy) {
                (Some(t), _) => {
                    let profile = match mode {
                        Mode::Strategic => best_response_to_fixed(&priors, &vec![t; priors.len()])?,
                        Mode::Classic => Profile::full_information(priors)?,
                    };
                    (Policy::Fixed(t), profile)
                }
                (None, Some(name)) => {
                    let out = equilibrium(&inst, name, frozen)?;
                    (out.policy, out.profile)
                }
                (None, None) => return Err(CliError::Usage("either --policy or --threshold is required".into())),
            };
            let cfg = SimConfig {
                samples,
                seed: seed.unwrap_or(MC_SEED),
                parallel_streams: streams,
            };
            let sim = simulate(policy, &profile, cfg)?;
            let exact = eval_profile(policy, &profile).searcher_payoff;
            let c = "simulate";
            let agrees = (sim.payoff_mean - exact).abs() <= 4.0 * sim.payoff_stderr + 1e-12 * exact.abs().max(1.0);
            let mut rows = vec![
                row(c, "payoff_mean", sim.payoff_mean, policy.to_string(), Verdict::Info),
                info(c, "payoff_stderr", sim.payoff_stderr),
                row(
                    c,
                    "analytic_payoff",
                    exact,
                    "within 4 stderr",
                    if agrees { Verdict::Pass } else { Verdict::Fail },
                ),
            ];
            rows.extend(
                sim.win_freqs
                    .iter()
                    .enumerate()
                    .map(|(i, w)| info(c, format!("box{}_win_freq", i + 1), *w)),
            );
            Outcome { rows, ok: agrees }
        }
        Command::Reproduce { case } => reports(&case, &CASE_IDS, run_case)?,
        Command::Check { suite } => reports(&suite, &SUITES, run_suite)?,
    })
}

fn equilibrium_rows(out: &EquilibriumOutcome) -> Vec<Row> {
    let c = "equilibrium";
    let mut rows = vec![
        row(
            c,
            "searcher_payoff",
            out.searcher_payoff,
            out.policy.to_string(),
            Verdict::Info,
        ),
        info(c, "opt", out.opt),
        row(
            c,
            "ratio_vs_half_opt",
            out.ratio_vs_half_opt,
            ">= 1 for a half-approximation",
            if out.ratio_vs_half_opt < 1.0 {
                Verdict::BelowHalf
            } else {
                Verdict::Pass
            },
        ),
    ];
    match out.regime {
        Some(Regime::NoInformation) => rows.push(row(c, "box1_regime", 0.0, "no-information", Verdict::Info)),
        Some(Regime::Pooling { cutoff }) => rows.push(row(c, "box1_regime", cutoff, "pooling cutoff", Verdict::Info)),
        Some(Regime::Unreachable) => rows.push(row(c, "box1_regime", 0.0, "unreachable", Verdict::Info)),
        None => {}
    }
    for (i, (t, w)) in out.thresholds.iter().zip(&out.win_probs).enumerate() {
        rows.push(info(c, format!("box{}_threshold", i + 1), *t));
        rows.push(info(c, format!("box{}_win_prob", i + 1), *w));
    }
    for (i, d) in out.profile.posteriors().boxes().iter().enumerate() {
        rows.push(info(c, format!("box{}_posterior_mean", i + 1), d.mean()));
    }
    rows
}

/// One id gives its full report; `all` gives one summary row per registered id.
fn reports(id: &str, ids: &[&str], run: fn(&str) -> prophet_core::Result<CaseReport>) -> Result<Outcome, CliError> {
    if id == "all" {
        let all = ids.iter().map(|i| run(i)).collect::<prophet_core::Result<Vec<_>>>()?;
        return Ok(Outcome {
            ok: all.iter().all(CaseReport::holds),
            rows: all.iter().map(CaseReport::summary_row).collect(),
        });
    }
    let r = run(id).map_err(|e| CliError::Usage(format!("{e}; known: all, {}", ids.join(", "))))?;
    Ok(Outcome {
        ok: r.holds(),
        rows: r.rows,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli.command).and_then(|out| Ok((render(&out.rows, cli.format)?, out.ok)));
    match result {
        Ok((text, ok)) => {
            print!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
