use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use chefs_hat::agents::{load_agent, save_agent, Agent, AgentKind, RandomAgent};
use chefs_hat::arena::{
    evaluate, freeze, run_self_play, run_vs_others, run_vs_random, self_play_head_to_head, showcase_generations,
    EvaluationSummary, ExperimentConfig,
};
use chefs_hat::engine::SEATS;
use chefs_hat::telemetry::{export_qtrace, read_transcript, verify_transcript, write_transcript, ResultsTable, Telemetry};

#[derive(Parser)]
#[command(name = "chefs-hat", version, about = "Train and evaluate Chef's Hat agents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train one learner against three random seats, then evaluate it frozen.
    TrainVsRandom {
        #[arg(long)]
        agent: AgentKind,
        #[command(flatten)]
        common: Common,
    },
    /// Generational self-play followed by a first/middle/last generation head-to-head.
    SelfPlay {
        #[arg(long)]
        agent: AgentKind,
        #[command(flatten)]
        common: Common,
    },
    /// Three trained learners and a random seat: evaluate, train jointly, evaluate again.
    Tournament {
        #[arg(long = "model", required = true, num_args = 1)]
        models: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Frozen evaluation of up to four saved agents; empty seats play randomly.
    Evaluate {
        #[arg(long = "model", required = true, num_args = 1)]
        models: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Rebuild and verify every match in a transcript.
    Replay { transcript: PathBuf },
}

#[derive(Args)]
struct Common {
    /// Training games (per generation for self-play).
    #[arg(long)]
    games: Option<usize>,
    #[arg(long)]
    generations: Option<usize>,
    #[arg(long)]
    eval_runs: Option<usize>,
    #[arg(long)]
    eval_games: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Experiment config in TOML; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Skip qtrace.csv and transcripts.jsonl.
    #[arg(long)]
    no_telemetry: bool,
}

impl Common {
    fn experiment(&self, self_play: bool) -> Result<ExperimentConfig> {
        let mut config = match &self.config {
            Some(path) => ExperimentConfig::load(path).with_context(|| format!("reading {}", path.display()))?,
            None => ExperimentConfig::default(),
        };
        if let Some(games) = self.games {
            if self_play {
                config.generation_games = games;
            } else {
                config.training_games = games;
            }
        }
        if let Some(g) = self.generations {
            config.generations = g;
        }
        if let Some(r) = self.eval_runs {
            config.eval_runs = r;
        }
        if let Some(g) = self.eval_games {
            config.eval_games = g;
        }
        if let Some(s) = self.seed {
            config.seed = s;
        }
        config.validate()?;
        Ok(config)
    }
}

struct Output {
    dir: PathBuf,
    results: ResultsTable,
    telemetry: Option<Telemetry>,
}

impl Output {
    fn new(common: &Common) -> Result<Self> {
        fs::create_dir_all(&common.out).with_context(|| format!("creating {}", common.out.display()))?;
        Ok(Self {
            dir: common.out.clone(),
            results: ResultsTable::new(),
            telemetry: (!common.no_telemetry).then(Telemetry::new),
        })
    }

    fn telemetry(&mut self) -> Option<&mut Telemetry> {
        self.telemetry.as_mut()
    }

    fn summary(&mut self, experiment: &str, phase: &str, labels: &[String], summary: &EvaluationSummary) {
        self.results.push_summary(experiment, phase, labels, summary);
        let row: Vec<String> = labels
            .iter()
            .enumerate()
            .map(|(s, l)| format!("{l} {:.1} ± {:.2}", summary.per_hundred(s), summary.std[s] * 100.0 / summary.games as f64))
            .collect();
        println!("{experiment}/{phase}: {}", row.join(" | "));
    }

    fn save(&self, agent: &dyn Agent, name: &str) -> Result<()> {
        let path = self.dir.join(format!("{name}.weights.json"));
        save_agent(agent, &path).with_context(|| format!("writing {}", path.display()))
    }

    fn finish(self) -> Result<()> {
        self.results.write_csv(&self.dir.join("results.csv"))?;
        if let Some(t) = &self.telemetry {
            if !t.steps.is_empty() {
                export_qtrace(&t.steps, &self.dir.join("qtrace.csv"))?;
            }
            write_transcript(&t.transcript, &self.dir.join("transcripts.jsonl"))?;
        }
        println!("wrote {}", self.dir.display());
        Ok(())
    }
}

fn load_models(paths: &[PathBuf]) -> Result<Vec<Box<dyn Agent>>> {
    paths
        .iter()
        .map(|p| load_agent(p).with_context(|| format!("loading {}", p.display())))
        .collect()
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::TrainVsRandom { agent, common } => {
            if !agent.is_learner() {
                bail!("--agent must be dql, a2c or ppo");
            }
            let config = common.experiment(false)?;
            let mut out = Output::new(&common)?;
            let outcome = run_vs_random(agent, &config, out.telemetry())?;
            out.summary("vs_random", "eval", &outcome.labels(), &outcome.evaluation);
            out.save(outcome.agents[0].as_ref(), agent.as_str())?;
            out.finish()
        }
        Command::SelfPlay { agent, common } => {
            if !agent.is_learner() {
                bail!("--agent must be dql, a2c or ppo");
            }
            let config = common.experiment(true)?;
            let mut out = Output::new(&common)?;
            let outcome = run_self_play(agent, &config, out.telemetry())?;
            for report in &outcome.reports {
                let summary = EvaluationSummary::from_runs(config.validation_games, vec![report.validation.clone()]);
                out.results.push_summary("vs_myself", &format!("gen{}-validation", report.generation + 1), &report.labels, &summary);
            }
            let (labels, summary) = self_play_head_to_head(&outcome, &config, out.telemetry())?;
            out.summary("vs_myself", "head_to_head", &labels, &summary);
            for g in showcase_generations(outcome.pool.generations) {
                let snap = outcome.pool.best(g).expect("ranked generation");
                out.save(snap.agent.as_ref(), &format!("{agent}-gen{}", g + 1))?;
            }
            out.finish()
        }
        Command::Tournament { models, common } => {
            let config = common.experiment(false)?;
            let learners = load_models(&models)?;
            let mut out = Output::new(&common)?;
            let outcome = run_vs_others(learners, &config, out.telemetry())?;
            out.summary("vs_others", "before", &outcome.labels, &outcome.before);
            out.summary("vs_others", "after", &outcome.labels, &outcome.after);
            for (agent, label) in outcome.agents.iter().zip(&outcome.labels).take(SEATS - 1) {
                out.save(agent.as_ref(), &format!("{label}-after"))?;
            }
            out.finish()
        }
        Command::Evaluate { models, common } => {
            if models.len() > SEATS {
                bail!("at most {SEATS} models");
            }
            let config = common.experiment(false)?;
            let mut lineup = load_models(&models)?;
            let mut labels: Vec<String> = lineup.iter().map(|a| a.kind().to_string()).collect();
            while lineup.len() < SEATS {
                labels.push(format!("random{}", lineup.len()));
                lineup.push(Box::new(RandomAgent::new()));
            }
            let mut agents: [Box<dyn Agent>; SEATS] = lineup.try_into().unwrap_or_else(|_| unreachable!());
            freeze(&mut agents);
            let mut out = Output::new(&common)?;
            let summary = evaluate(&mut agents, config.eval_runs, config.eval_games, config.seed, out.telemetry())?;
            out.summary("evaluate", "eval", &labels, &summary);
            out.finish()
        }
        Command::Replay { transcript } => replay(&transcript),
    }
}

fn replay(path: &Path) -> Result<()> {
    let lines = read_transcript(path).with_context(|| format!("reading {}", path.display()))?;
    let matches = verify_transcript(&lines)?;
    println!("verified {matches} matches, {} moves", lines.len());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
