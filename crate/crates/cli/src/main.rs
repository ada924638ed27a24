//! `roadgame`: solve crossing games from files and run the seeded experiments.

use clap::{Args, Parser, Subcommand, ValueEnum};
use roadgame::bayesian::{
    equilibrium_collision_probability, induced_normal_form, parse_game_file, solve_observed, BayesianGame, GameFile,
};
use roadgame::montecarlo::csv::{histogram_csv, sweep_csv};
use roadgame::montecarlo::{
    entry_histogram, fatality_curve, misjudgment_experiment, rng_stream, sweep_av_share, ExperimentConfig, SweepConfig,
};
use roadgame::normal_form::{enumerate_mixed_nash, enumerate_pure_nash, iesds, write_game, NormalFormGame};
use roadgame::rational::{format_rational, parse_rational, to_f64};
use roadgame::scenario::{
    fined_game, perturb_payoffs, zebra_equilibrium, ScenarioConfig, SpeedClass, ZebraPayoffTable,
};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const OUT_DIR_ENV: &str = "ROADGAME_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "roadgame",
    version,
    about = "Crossing games: exact equilibria and seeded experiments"
)]
struct Cli {
    /// Random seed for experiments and payoff noise [default: 42, or the config file's]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo iterations [default: 1000000, or the config file's]
    #[arg(long, global = true)]
    iterations: Option<u64>,
    /// Output file; `-` for stdout. Experiments default to $ROADGAME_OUT_DIR/<command>.csv
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Worker threads; results do not depend on it
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a normal-form or Bayesian game file
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Mixed)]
        mode: Mode,
    },
    /// Solve one of the built-in games
    Scenario(ScenarioArgs),
    /// Collision and fatality rates against the AV share
    Sweep { config: Option<PathBuf> },
    /// Entry-game outcome histogram for AV and human drivers
    Entry { config: Option<PathBuf> },
    /// Entry game with a pedestrian misjudging the driver's reaction time
    Misjudge { config: Option<PathBuf> },
}

#[derive(Args)]
struct ScenarioArgs {
    #[arg(value_enum)]
    name: ScenarioName,
    /// LOW, MEDIUM or HIGH
    #[arg(long)]
    speed: Option<String>,
    /// AV share, e.g. 0.3 or 1/3
    #[arg(long)]
    prior: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Mixed)]
    mode: Mode,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Pure,
    Mixed,
    Iesds,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioName {
    Zebra,
    Fined,
}

#[derive(Debug)]
enum Failure {
    Game(roadgame::Error),
    Input(String),
    Internal(String),
}

impl From<roadgame::Error> for Failure {
    fn from(e: roadgame::Error) -> Self {
        Failure::Game(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        use roadgame::Error::*;
        match self {
            Failure::Game(Capacity { .. }) => 3,
            Failure::Game(Parse { .. } | Config { .. } | InvalidGame(_) | Shape(_) | Domain(_) | Unsupported(_)) => 2,
            Failure::Input(_) => 2,
            Failure::Game(Structure(_)) | Failure::Internal(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Game(e) => e.to_string(),
            Failure::Input(m) | Failure::Internal(m) => m.clone(),
        }
    }
}

type Outcome<T> = Result<T, Failure>;

fn read(path: &Path) -> Outcome<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn emit(cli: &Cli, text: &str, default_name: Option<&str>) -> Outcome<()> {
    let target = match (&cli.output, default_name) {
        (Some(p), _) if p.as_os_str() == "-" => None,
        (Some(p), _) => Some(p.clone()),
        (None, Some(name)) => Some(
            std::env::var_os(OUT_DIR_ENV)
                .map(PathBuf::from)
                .unwrap_or_default()
                .join(name),
        ),
        (None, None) => None,
    };
    match target {
        None => print!("{text}"),
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)
                    .map_err(|e| Failure::Internal(format!("cannot create {}: {e}", dir.display())))?;
            }
            std::fs::write(&path, text)
                .map_err(|e| Failure::Internal(format!("cannot write {}: {e}", path.display())))?;
            eprintln!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn pure_lines(game: &NormalFormGame) -> String {
    let profiles = enumerate_pure_nash(game);
    if profiles.is_empty() {
        return "no pure equilibrium\n".into();
    }
    profiles
        .iter()
        .map(|p| format!("({}, {})\n", game.row_actions()[p.row], game.col_actions()[p.col]))
        .collect()
}

fn mixed_lines(game: &NormalFormGame) -> Outcome<String> {
    let mut out = format!(
        "# rows: {}; cols: {}\n",
        game.row_actions().join(" "),
        game.col_actions().join(" ")
    );
    for eq in enumerate_mixed_nash(game)? {
        writeln!(out, "{eq}").unwrap();
    }
    Ok(out)
}

fn iesds_lines(game: &NormalFormGame) -> String {
    let trace = iesds(game);
    let mut out = String::new();
    for step in &trace.steps {
        let dominator: Vec<String> = step
            .dominator
            .probs()
            .iter()
            .zip(&step.available)
            .filter(|(w, _)| **w != roadgame::rational::int(0))
            .map(|(w, label)| format!("{} {label}", format_rational(w)))
            .collect();
        writeln!(
            out,
            "eliminate {} {} (dominated by {})",
            step.player,
            step.action,
            dominator.join(" + ")
        )
        .unwrap();
    }
    if trace.steps.is_empty() {
        out.push_str("no strictly dominated action\n");
    }
    out.push_str("# reduced game\n");
    out.push_str(&write_game(&trace.reduced));
    out
}

fn solve_normal(game: &NormalFormGame, mode: Mode) -> Outcome<String> {
    match mode {
        Mode::Pure => Ok(pure_lines(game)),
        Mode::Mixed => mixed_lines(game),
        Mode::Iesds => Ok(iesds_lines(game)),
    }
}

fn solve_bayesian(game: &BayesianGame, mode: Mode) -> Outcome<String> {
    match mode {
        Mode::Pure => Ok(pure_lines(&induced_normal_form(game)?)),
        Mode::Mixed => {
            let mut out = String::new();
            for profile in solve_observed(game)? {
                let parts: Vec<String> = profile
                    .types
                    .iter()
                    .zip(&profile.per_type)
                    .map(|(t, p)| format!("{t}: {p}"))
                    .collect();
                writeln!(out, "{}", parts.join(" | ")).unwrap();
            }
            Ok(out)
        }
        Mode::Iesds => {
            let mut out = String::new();
            for (t, g) in game.types().iter().zip(game.games()) {
                writeln!(out, "[{t}]").unwrap();
                out.push_str(&iesds_lines(g));
            }
            Ok(out)
        }
    }
}

fn zebra(cli: &Cli, args: &ScenarioArgs) -> Outcome<String> {
    let mut cfg = match &args.config {
        Some(path) => ScenarioConfig::from_toml_str(&read(path)?)?,
        None => ScenarioConfig::default(),
    };
    if let Some(s) = &args.speed {
        cfg.speed_class = s.to_ascii_uppercase().parse::<SpeedClass>()?;
    }
    if let Some(p) = &args.prior {
        cfg.prior = parse_rational(p).ok_or_else(|| roadgame::Error::Config {
            field: "prior".into(),
            message: format!("`{p}` is not a number"),
        })?;
    }
    cfg.validate()?;
    let mut table: ZebraPayoffTable = cfg.tables();
    let amplitude = to_f64(&cfg.noise_amplitude);
    if amplitude > 0.0 {
        let mut rng = rng_stream(cli.seed.unwrap_or(42), 0);
        table.av_game = perturb_payoffs(&table.av_game, amplitude, &mut rng)?;
        table.human_game = perturb_payoffs(&table.human_game, amplitude, &mut rng)?;
    }
    let game = table.bayesian(cfg.prior.clone())?;
    let mut out = format!(
        "# {} speed, AV share {}\n",
        cfg.speed_class.label(),
        format_rational(&cfg.prior)
    );
    out.push_str(&solve_bayesian(&game, args.mode)?);
    if matches!(args.mode, Mode::Mixed) {
        let eq = zebra_equilibrium(&table)?;
        let p = equilibrium_collision_probability(&eq, game.prior(), &table.collision_cells())?;
        writeln!(
            out,
            "collision probability (most mixed equilibrium): {}",
            format_rational(&p)
        )
        .unwrap();
    }
    Ok(out)
}

fn run(cli: &Cli) -> Outcome<()> {
    match &cli.command {
        Command::Solve { file, mode } => {
            let text = match parse_game_file(&read(file)?)? {
                GameFile::Normal(g) => solve_normal(&g, *mode)?,
                GameFile::Bayesian(g) => solve_bayesian(&g, *mode)?,
            };
            emit(cli, &text, None)
        }
        Command::Scenario(args) => {
            let text = match args.name {
                ScenarioName::Fined => solve_normal(&fined_game(), args.mode)?,
                ScenarioName::Zebra => zebra(cli, args)?,
            };
            emit(cli, &text, None)
        }
        Command::Sweep { config } => {
            let mut cfg = match config {
                Some(path) => SweepConfig::from_toml_str(&read(path)?)?,
                None => SweepConfig::default(),
            };
            cfg.seed = cli.seed.unwrap_or(cfg.seed);
            cfg.iterations = cli.iterations.unwrap_or(cfg.iterations);
            cfg.workers = cli.workers.or(cfg.workers);
            let result = fatality_curve(&sweep_av_share(&cfg, &cfg.tables())?);
            emit(cli, &sweep_csv(&result), Some("sweep.csv"))
        }
        Command::Entry { config } => histograms(cli, config.as_deref(), false),
        Command::Misjudge { config } => histograms(cli, config.as_deref(), true),
    }
}

fn histograms(cli: &Cli, config: Option<&Path>, misjudge: bool) -> Outcome<()> {
    let defaults = if misjudge {
        ExperimentConfig::misjudgment_default()
    } else {
        ExperimentConfig::entry_default()
    };
    let mut cfg = match config {
        Some(path) => ExperimentConfig::from_toml_str(&read(path)?, defaults)?,
        None => defaults,
    };
    cfg.seed = cli.seed.unwrap_or(cfg.seed);
    cfg.iterations = cli.iterations.unwrap_or(cfg.iterations);
    cfg.workers = cli.workers.or(cfg.workers);
    cfg.validate()?;
    let mut results = Vec::new();
    for sim in cfg.sim_configs() {
        results.push(if misjudge {
            misjudgment_experiment(&sim)?
        } else {
            entry_histogram(&sim)?
        });
    }
    let name = if misjudge { "misjudge.csv" } else { "entry.csv" };
    emit(cli, &histogram_csv(&results), Some(name))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
