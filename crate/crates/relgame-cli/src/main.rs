//! `relgame` — solve games, design relationship weights, and reproduce the
//! experiment tables from the command line.

use clap::{Parser, Subcommand, ValueEnum};
use relgame::design::{build_design_lp, order_and_design, DesignConfig};
use relgame::entropy::{gradient_descent, solve, EntropyNashConfig, GdConfig};
use relgame::experiments::{
    gd_outcome, heatmap, heatmap_csv, run_scalability, scalability_csv, sig6, table1, table1_csv,
    table2, table2_csv, BenchFamily, HeatmapConfig, HeatmapMode, ScalabilityConfig,
};
use relgame::game::{enumerate_pure_nash, expected_social_cost, social_cost};
use relgame::io::{parse_game, parse_relationships, parse_scenario};
use relgame::relationship::{NetworkSet, RelationshipType};
use relgame::{Error, SocialCost, StaticGame};
use serde::Deserialize;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_USAGE: u8 = 1;
const EXIT_SOLVER: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;

#[derive(Parser)]
#[command(name = "relgame", version, about = "Relationship-weight design for static games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by the subcommands. Any of them may also come from a JSON
/// config file (`--config`); explicit command-line values win.
#[derive(Parser, Debug, Clone)]
struct Common {
    /// Game or scenario JSON file.
    #[arg(long)]
    game: Option<PathBuf>,
    /// Relationship-set JSON file, or one of: individual, all_people,
    /// reciprocity.
    #[arg(long)]
    relationships: Option<String>,
    /// JSON config file supplying any of the common flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Entropy regularization weight λ.
    #[arg(long)]
    lambda: Option<f64>,
    /// L1 penalty weight γ.
    #[arg(long)]
    gamma: Option<f64>,
    /// Gradient-descent step size α.
    #[arg(long)]
    alpha: Option<f64>,
    /// Gradient-descent stopping threshold β.
    #[arg(long)]
    beta: Option<f64>,
    /// Design budget k.
    #[arg(long)]
    k: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Heatmap grid points per axis.
    #[arg(long)]
    grid: Option<usize>,
    /// Bench timeout per instance, seconds.
    #[arg(long)]
    timeout: Option<f64>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    game: Option<PathBuf>,
    relationships: Option<String>,
    lambda: Option<f64>,
    gamma: Option<f64>,
    alpha: Option<f64>,
    beta: Option<f64>,
    k: Option<f64>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    grid: Option<usize>,
    timeout: Option<f64>,
}

impl Common {
    /// Fills unset flags from the config file, if any.
    fn resolve(mut self) -> Result<Common, CliError> {
        let Some(path) = self.config.clone() else { return Ok(self) };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        let file: FileConfig = serde_json::from_str(&text)
            .map_err(|e| usage(format!("config {}: {e}", path.display())))?;
        self.game = self.game.or(file.game);
        self.relationships = self.relationships.or(file.relationships);
        self.lambda = self.lambda.or(file.lambda);
        self.gamma = self.gamma.or(file.gamma);
        self.alpha = self.alpha.or(file.alpha);
        self.beta = self.beta.or(file.beta);
        self.k = self.k.or(file.k);
        self.seed = self.seed.or(file.seed);
        self.out = self.out.or(file.out);
        self.grid = self.grid.or(file.grid);
        self.timeout = self.timeout.or(file.timeout);
        Ok(self)
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SolveMethod {
    PureNash,
    EntropyNash,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Algorithm {
    Oad,
    Gd,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MapMode {
    EntropyNash,
    PureNashGrid,
}

#[derive(Subcommand)]
enum Command {
    /// Compute an equilibrium of a game file.
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "entropy-nash")]
        method: SolveMethod,
    },
    /// Design relationship weights for a game file.
    Design {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "oad")]
        algorithm: Algorithm,
        /// Print the design LP for the chosen target before solving.
        #[arg(long)]
        dump_lp: bool,
        /// Target profile for --dump-lp, 1-based, comma-separated.
        #[arg(long, value_delimiter = ',')]
        target: Option<Vec<usize>>,
    },
    /// Player-count sweep over the traffic game (CSV).
    Table1 {
        #[command(flatten)]
        common: Common,
    },
    /// Relationship-type comparison on the 3-player traffic game (CSV).
    Table2 {
        #[command(flatten)]
        common: Common,
    },
    /// Social-cost heatmap over the (w1, w2) plane (CSV).
    Heatmap {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "entropy-nash")]
        mode: MapMode,
    },
    /// Runtime scaling study over player counts (CSV).
    Bench {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        n_start: usize,
        #[arg(long, default_value_t = 10)]
        n_end: usize,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        #[arg(long, value_enum, default_value = "social-dilemma")]
        family: Family,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Family {
    SocialDilemma,
    Traffic,
}

struct CliError {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> CliError {
    CliError { code: EXIT_USAGE, message: message.into() }
}

fn classify(e: Error) -> CliError {
    let code = match &e {
        Error::Lp(_) | Error::Divergence(_) | Error::NoInteriorEquilibrium(_) => EXIT_SOLVER,
        _ => EXIT_USAGE,
    };
    CliError { code, message: e.to_string() }
}

fn emit(common: &Common, text: &str) -> Result<(), CliError> {
    match &common.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_game(common: &Common) -> Result<(StaticGame, SocialCost), CliError> {
    let path = common.game.as_ref().ok_or_else(|| usage("--game FILE is required"))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let parsed: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: invalid JSON: {e}", path.display())))?;
    if parsed.get("scenario").is_some() {
        let g = parse_scenario(&text).map_err(classify)?;
        Ok((g, SocialCost::SumOfPlayerCosts))
    } else {
        parse_game(&text).map_err(classify)
    }
}

fn load_relationships(common: &Common, n: usize) -> Result<NetworkSet, CliError> {
    let spec = common
        .relationships
        .as_deref()
        .ok_or_else(|| usage("--relationships FILE|TYPE is required"))?;
    let by_name = match spec {
        "individual" => Some(RelationshipType::Individual),
        "all_people" => Some(RelationshipType::AllPeople),
        "reciprocity" => Some(RelationshipType::Reciprocity),
        _ => None,
    };
    if let Some(tag) = by_name {
        return NetworkSet::by_type(tag, n).map_err(classify);
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| usage(format!("cannot read relationships {spec}: {e}")))?;
    parse_relationships(&text, n).map_err(classify)
}

fn entropy_config(common: &Common) -> EntropyNashConfig {
    let mut cfg = EntropyNashConfig::default();
    if let Some(l) = common.lambda {
        cfg.lambda = l;
    }
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    cfg
}

fn gd_config(common: &Common) -> GdConfig {
    let mut cfg = GdConfig { entropy: entropy_config(common), ..Default::default() };
    if let Some(g) = common.gamma {
        cfg.gamma = g;
    }
    if let Some(a) = common.alpha {
        cfg.alpha = a;
    }
    if let Some(b) = common.beta {
        cfg.beta = b;
    }
    cfg
}

fn cmd_solve(common: &Common, method: SolveMethod) -> Result<(), CliError> {
    let (g, v) = load_game(common)?;
    match method {
        SolveMethod::PureNash => {
            let nash = enumerate_pure_nash(&g).map_err(classify)?;
            if nash.is_empty() {
                return Err(CliError {
                    code: EXIT_SOLVER,
                    message: "no pure Nash equilibrium".into(),
                });
            }
            let mut out = String::new();
            for p in &nash {
                let cost = social_cost(&g, &v, p).map_err(classify)?;
                out.push_str(&format!("pure nash {:?}  social cost {}\n", p.one_based(), sig6(cost)));
            }
            emit(common, &out)
        }
        SolveMethod::EntropyNash => {
            let cfg = entropy_config(common);
            let rep = solve(&g, &cfg).map_err(classify)?;
            if !rep.converged {
                return Err(CliError {
                    code: EXIT_SOLVER,
                    message: format!(
                        "entropy solve did not converge: residual {} after {} iterations",
                        rep.residual, rep.iterations
                    ),
                });
            }
            let cost = expected_social_cost(&g, &v, &rep.profile).map_err(classify)?;
            let mut out = String::new();
            for (i, d) in rep.profile.distributions().iter().enumerate() {
                let probs: Vec<String> = d.iter().map(|&p| sig6(p)).collect();
                out.push_str(&format!("player {}: [{}]\n", i + 1, probs.join(", ")));
            }
            out.push_str(&format!("expected social cost {}\n", sig6(cost)));
            emit(common, &out)
        }
    }
}

fn cmd_design(
    common: &Common,
    algorithm: Algorithm,
    dump_lp: bool,
    target: &Option<Vec<usize>>,
) -> Result<(), CliError> {
    let (g, v) = load_game(common)?;
    let phi = load_relationships(common, g.num_players())?;
    let design_cfg = DesignConfig::with_budget(common.k.unwrap_or(1.0));

    if dump_lp {
        let target = match target {
            Some(t) => relgame::PureProfile::from_one_based(t).map_err(classify)?,
            None => relgame::best_social_profile(&g, &v).map_err(classify)?.0,
        };
        let lp = build_design_lp(&g, &phi, &target, &design_cfg).map_err(classify)?;
        eprintln!("{}", lp.dump());
    }

    match algorithm {
        Algorithm::Oad => {
            let res = order_and_design(&g, &v, &phi, &design_cfg)
                .map_err(classify)?
                .ok_or_else(|| CliError {
                    code: EXIT_INFEASIBLE,
                    message: "no profile is designable within the budget".into(),
                })?;
            let out = json!({
                "algorithm": "oad",
                "w": res.w,
                "target_profile": res.target_profile,
                "achieved_cost": res.social_cost,
                "profiles_visited": res.profiles_visited,
                "elapsed_seconds": res.elapsed_seconds,
            });
            emit(common, &format!("{}\n", serde_json::to_string_pretty(&out).unwrap()))
        }
        Algorithm::Gd => {
            let cfg = gd_config(common);
            let res = gradient_descent(&g, &v, &phi, &cfg).map_err(classify)?;
            if !res.converged {
                return Err(CliError {
                    code: EXIT_SOLVER,
                    message: format!("gradient descent did not converge in {} steps", res.steps),
                });
            }
            let outcome = gd_outcome(&g, &v, &phi, &res).map_err(classify)?;
            let out = json!({
                "algorithm": "gd",
                "w": res.w,
                "target_profile": outcome.profile,
                "certified_pure": outcome.certified_pure,
                "achieved_cost": outcome.cost,
                "steps": res.steps,
            });
            emit(common, &format!("{}\n", serde_json::to_string_pretty(&out).unwrap()))
        }
    }
}

fn cmd_heatmap(common: &Common, mode: MapMode) -> Result<(), CliError> {
    let (g, v) = load_game(common)?;
    let phi = load_relationships(common, g.num_players())?;
    let mut cfg = HeatmapConfig {
        mode: match mode {
            MapMode::EntropyNash => HeatmapMode::EntropyNash,
            MapMode::PureNashGrid => HeatmapMode::PureNashGrid,
        },
        ..Default::default()
    };
    if let Some(grid) = common.grid {
        cfg.grid = grid;
    }
    if let Some(l) = common.lambda {
        cfg.lambda = l;
    }
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    let cells = heatmap(&g, &v, &phi, &cfg).map_err(classify)?;
    emit(common, &heatmap_csv(&cells))
}

fn cmd_bench(
    common: &Common,
    n_start: usize,
    n_end: usize,
    repeats: usize,
    family: Family,
) -> Result<(), CliError> {
    let cfg = ScalabilityConfig {
        n_start,
        n_end,
        repeats,
        timeout_seconds: common.timeout.unwrap_or(300.0),
        family: match family {
            Family::SocialDilemma => BenchFamily::SocialDilemma,
            Family::Traffic => BenchFamily::Traffic,
        },
    };
    let res = run_scalability(&cfg).map_err(classify)?;
    let mut out = scalability_csv(&res);
    out.push_str(&format!(
        "# oad slope {}  gd slope {}\n",
        sig6(res.oad_slope),
        sig6(res.gd_slope)
    ));
    if !res.oad_censored.is_empty() || !res.gd_censored.is_empty() {
        out.push_str(&format!(
            "# censored by timeout: oad {:?}  gd {:?}\n",
            res.oad_censored, res.gd_censored
        ));
    }
    emit(common, &out)
}

fn run() -> Result<(), CliError> {
    let cli = Cli::try_parse().map_err(|e| {
        // clap prints help/version through the error path too; those are
        // success, not usage errors
        if e.use_stderr() {
            usage(e.to_string())
        } else {
            print!("{e}");
            CliError { code: 0, message: String::new() }
        }
    })?;
    match cli.command {
        Command::Solve { common, method } => cmd_solve(&common.resolve()?, method),
        Command::Design { common, algorithm, dump_lp, target } => {
            cmd_design(&common.resolve()?, algorithm, dump_lp, &target)
        }
        Command::Table1 { common } => {
            let common = common.resolve()?;
            let rows = table1().map_err(classify)?;
            emit(&common, &table1_csv(&rows))
        }
        Command::Table2 { common } => {
            let common = common.resolve()?;
            let rows = table2().map_err(classify)?;
            emit(&common, &table2_csv(&rows))
        }
        Command::Heatmap { common, mode } => cmd_heatmap(&common.resolve()?, mode),
        Command::Bench { common, n_start, n_end, repeats, family } => {
            let common = common.resolve()?;
            cmd_bench(&common, n_start, n_end, repeats, family)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !e.message.is_empty() {
                eprintln!("error: {}", e.message);
            }
            ExitCode::from(e.code)
        }
    }
}
