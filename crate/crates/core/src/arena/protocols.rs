use rand::Rng;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::series::{evaluate, freeze, play_series, EvaluationSummary, SeriesResult};
use crate::agents::{build_agent, Agent, AgentKind, RandomAgent};
use crate::engine::SEATS;
use crate::error::{Error, Result};
use crate::seeding::{derive_seed, rng_from, SimRng};
use crate::telemetry::Telemetry;

// Streams split off the master seed.
const TRAIN: u64 = 0;
const EVAL: u64 = 1;
const EVAL_AFTER: u64 = 2;
const SELF_PLAY: u64 = 3;
const LEARNERS: u64 = 100;

fn random_agent() -> Box<dyn Agent> {
    Box::new(RandomAgent::new())
}

fn seats(v: Vec<Box<dyn Agent>>) -> [Box<dyn Agent>; SEATS] {
    v.try_into().unwrap_or_else(|_| panic!("exactly {SEATS} agents"))
}

fn train_block(
    agents: &mut [Box<dyn Agent>; SEATS],
    games: usize,
    seed: u64,
    carry_roles: bool,
    telemetry: Option<&mut Telemetry>,
) -> Result<SeriesResult> {
    for a in agents.iter_mut() {
        a.set_training(true);
    }
    let result = play_series(agents, games, seed, true, carry_roles, telemetry)?;
    freeze(agents);
    Ok(result)
}

pub struct VsRandomOutcome {
    /// Seat 0 is the learner, frozen after training.
    pub agents: [Box<dyn Agent>; SEATS],
    pub training: SeriesResult,
    pub evaluation: EvaluationSummary,
}

impl VsRandomOutcome {
    pub fn labels(&self) -> Vec<String> {
        let mut labels = vec![self.agents[0].kind().to_string()];
        labels.extend((1..SEATS).map(|i| format!("random{i}")));
        labels
    }
}

/// One learner in seat 0 against three random seats: a training block of
/// `training_games`, then a frozen `eval_runs` x `eval_games` evaluation.
pub fn run_vs_random(kind: AgentKind, config: &ExperimentConfig, mut telemetry: Option<&mut Telemetry>) -> Result<VsRandomOutcome> {
    config.validate()?;
    let learner = build_agent(&config.learner(kind, derive_seed(config.seed, LEARNERS)))?;
    let mut agents = seats(vec![learner, random_agent(), random_agent(), random_agent()]);
    let training = train_block(
        &mut agents,
        config.training_games,
        derive_seed(config.seed, TRAIN),
        config.carry_roles,
        telemetry.as_deref_mut(),
    )?;
    let evaluation = evaluate(&mut agents, config.eval_runs, config.eval_games, derive_seed(config.seed, EVAL), telemetry)?;
    Ok(VsRandomOutcome { agents, training, evaluation })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SnapshotTag {
    Best,
    SecondBest,
}

pub struct Snapshot {
    pub generation: usize,
    pub tag: SnapshotTag,
    pub label: String,
    /// Average summed reward in the ranking block.
    pub score: f64,
    pub agent: Box<dyn Agent>,
}

/// Frozen snapshots kept across self-play generations, two per generation.
#[derive(Default)]
pub struct GenerationPool {
    pub generations: usize,
    pub snapshots: Vec<Snapshot>,
}

impl GenerationPool {
    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn best(&self, generation: usize) -> Option<&Snapshot> {
        self.snapshots.iter().find(|s| s.generation == generation && s.tag == SnapshotTag::Best)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OpponentSource {
    Pool,
    Fresh,
    Random,
}

/// Opponent categories for the three non-copied seats, each uniform and independent.
pub fn draw_opponents(rng: &mut SimRng) -> [OpponentSource; SEATS - 1] {
    std::array::from_fn(|_| match rng.gen_range(0..3) {
        0 => OpponentSource::Pool,
        1 => OpponentSource::Fresh,
        _ => OpponentSource::Random,
    })
}

/// Seats ordered best first by average summed reward, then wins, then seat.
pub fn rank_seats(result: &SeriesResult) -> [usize; SEATS] {
    let mut order: [usize; SEATS] = std::array::from_fn(|s| s);
    order.sort_by(|&a, &b| {
        result
            .average_reward(b)
            .total_cmp(&result.average_reward(a))
            .then(result.wins[b].cmp(&result.wins[a]))
            .then(a.cmp(&b))
    });
    order
}

pub struct GenerationReport {
    pub generation: usize,
    pub labels: [String; SEATS],
    pub training: SeriesResult,
    pub validation: SeriesResult,
    pub ranking: [usize; SEATS],
}

pub struct SelfPlayOutcome {
    pub kind: AgentKind,
    pub pool: GenerationPool,
    pub reports: Vec<GenerationReport>,
}

/// Generational self-play. Generation 0 trains four fresh learners; every later
/// generation trains the previous best beside three drawn opponents. Each
/// generation ends with a frozen ranking block whose top two learner seats join
/// the pool; a generation with a single learner seat adds one snapshot.
pub fn run_self_play(kind: AgentKind, config: &ExperimentConfig, mut telemetry: Option<&mut Telemetry>) -> Result<SelfPlayOutcome> {
    config.validate()?;
    if !kind.is_learner() {
        return Err(Error::InvalidArgument("self-play needs a learning agent".into()));
    }
    let root = derive_seed(config.seed, SELF_PLAY);
    let mut pool = GenerationPool::default();
    let mut reports = Vec::with_capacity(config.generations);
    for generation in 0..config.generations {
        let gen_seed = derive_seed(root, generation as u64);
        let fresh = |slot: usize| build_agent(&config.learner(kind, derive_seed(gen_seed, LEARNERS + slot as u64)));
        let mut lineup: Vec<Box<dyn Agent>> = Vec::with_capacity(SEATS);
        let mut labels: Vec<String> = Vec::with_capacity(SEATS);
        if generation == 0 {
            for slot in 0..SEATS {
                lineup.push(fresh(slot)?);
                labels.push(format!("fresh{slot}"));
            }
        } else {
            let best = pool.best(generation - 1).expect("previous generation ranked");
            lineup.push(best.agent.clone());
            labels.push(best.label.clone());
            let mut rng = rng_from(derive_seed(gen_seed, 2));
            for (i, source) in draw_opponents(&mut rng).into_iter().enumerate() {
                let slot = i + 1;
                match source {
                    OpponentSource::Pool => {
                        let pick = &pool.snapshots[rng.gen_range(0..pool.len())];
                        lineup.push(pick.agent.clone());
                        labels.push(pick.label.clone());
                    }
                    OpponentSource::Fresh => {
                        lineup.push(fresh(slot)?);
                        labels.push(format!("fresh{slot}"));
                    }
                    OpponentSource::Random => {
                        lineup.push(random_agent());
                        labels.push("random".into());
                    }
                }
            }
        }
        let mut agents = seats(lineup);
        let training = train_block(
            &mut agents,
            config.generation_games,
            derive_seed(gen_seed, TRAIN),
            config.carry_roles,
            telemetry.as_deref_mut(),
        )?;
        let validation = play_series(
            &mut agents,
            config.validation_games,
            derive_seed(gen_seed, EVAL),
            false,
            true,
            telemetry.as_deref_mut(),
        )?;
        let ranking = rank_seats(&validation);
        let learners = ranking.iter().filter(|&&s| agents[s].kind().is_learner());
        for (tag, &seat) in [SnapshotTag::Best, SnapshotTag::SecondBest].into_iter().zip(learners) {
            let suffix = if tag == SnapshotTag::Best { "best" } else { "second" };
            pool.snapshots.push(Snapshot {
                generation,
                tag,
                label: format!("g{generation}-{suffix}"),
                score: validation.average_reward(seat),
                agent: agents[seat].clone(),
            });
        }
        pool.generations = generation + 1;
        log::info!(
            "generation {generation}: {:?} ranked {:?}, wins {:?}",
            labels,
            ranking,
            validation.wins
        );
        let labels: [String; SEATS] = labels.try_into().expect("four labels");
        reports.push(GenerationReport { generation, labels, training, validation, ranking });
    }
    Ok(SelfPlayOutcome { kind, pool, reports })
}

/// Generations compared head to head: first, middle, last.
pub fn showcase_generations(generations: usize) -> [usize; 3] {
    [0, generations.saturating_sub(1) / 2, generations.saturating_sub(1)]
}

/// First, middle and final generation's best snapshots plus a random seat, evaluated
/// frozen for `eval_runs` x `eval_games`.
pub fn self_play_head_to_head(
    outcome: &SelfPlayOutcome,
    config: &ExperimentConfig,
    telemetry: Option<&mut Telemetry>,
) -> Result<(Vec<String>, EvaluationSummary)> {
    let mut lineup = Vec::with_capacity(SEATS);
    let mut labels = Vec::with_capacity(SEATS);
    for g in showcase_generations(outcome.pool.generations) {
        let snap = outcome
            .pool
            .best(g)
            .ok_or_else(|| Error::Precondition(format!("generation {g} missing from pool")))?;
        lineup.push(snap.agent.clone());
        labels.push(format!("{}-gen{}", outcome.kind, g + 1));
    }
    lineup.push(random_agent());
    labels.push("random".into());
    let mut agents = seats(lineup);
    freeze(&mut agents);
    let summary = evaluate(&mut agents, config.eval_runs, config.eval_games, derive_seed(config.seed, EVAL_AFTER), telemetry)?;
    Ok((labels, summary))
}

pub struct TournamentOutcome {
    pub labels: Vec<String>,
    pub agents: [Box<dyn Agent>; SEATS],
    pub before: EvaluationSummary,
    pub training: SeriesResult,
    pub after: EvaluationSummary,
}

/// Three trained learners and a random seat: frozen evaluation, a joint training
/// block of `training_games`, then a second frozen evaluation.
pub fn run_vs_others(
    learners: Vec<Box<dyn Agent>>,
    config: &ExperimentConfig,
    mut telemetry: Option<&mut Telemetry>,
) -> Result<TournamentOutcome> {
    config.validate()?;
    if learners.len() != SEATS - 1 {
        return Err(Error::InvalidArgument(format!("tournament needs {} learners, got {}", SEATS - 1, learners.len())));
    }
    let mut labels: Vec<String> = learners.iter().map(|a| a.kind().to_string()).collect();
    labels.push("random".into());
    let mut lineup = learners;
    lineup.push(random_agent());
    let mut agents = seats(lineup);
    freeze(&mut agents);
    let before = evaluate(&mut agents, config.eval_runs, config.eval_games, derive_seed(config.seed, EVAL), telemetry.as_deref_mut())?;
    let training = train_block(
        &mut agents,
        config.training_games,
        derive_seed(config.seed, TRAIN),
        config.carry_roles,
        telemetry.as_deref_mut(),
    )?;
    let after = evaluate(&mut agents, config.eval_runs, config.eval_games, derive_seed(config.seed, EVAL_AFTER), telemetry)?;
    Ok(TournamentOutcome { labels, agents, before, training, after })
}
