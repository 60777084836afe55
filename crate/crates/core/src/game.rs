//! Signaling-game simulator.
//!
//! Each round draws signal components, sender knowledge components and
//! collision latents uniformly, derives the receiver's knowledge through the
//! active [`KnowledgeRule`], sends every signal component through the explicit
//! channel, and lets the receiver pick a type from its state. The reward is 1
//! exactly when the pick equals the sender's type. Only the receiver learns;
//! the sender's codebook is a fixed seeded injection.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{make_implicit, make_symmetric, DiscreteChannel, ImplicitChannelSpec};
use crate::error::{Error, Result};
use crate::prob::for_each_index;
use crate::rng::{substream, SimRng, TAG_CODEBOOK, TAG_ROUNDS};
use crate::semantic::{
    coupled_dominance, expand, EffectiveKnowledge, RoundContext, SemanticSystem, SystemParams,
};

/// Largest `(state, type)` table [`analytic_ceiling`] will enumerate.
pub const CEILING_CELL_LIMIT: usize = 1_000_000;

/// Redraw probability used for the mismatched component in cases II and III.
pub const CASE_MISMATCH_EPSILON: f64 = 0.5;

/// How the receiver's copy of one knowledge component is produced.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentRule {
    Copy,
    /// Through the implicit channel with the given redraw probability.
    Implicit {
        epsilon2: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnowledgeRule {
    pub components: Vec<ComponentRule>,
}

impl KnowledgeRule {
    pub fn copy(width: usize) -> Self {
        Self {
            components: vec![ComponentRule::Copy; width],
        }
    }

    pub fn implicit(width: usize, epsilon2: f64) -> Self {
        Self {
            components: vec![ComponentRule::Implicit { epsilon2 }; width],
        }
    }

    pub fn channels(&self, l_size: usize) -> Result<KnowledgeChannels> {
        let per = self
            .components
            .iter()
            .map(|c| match *c {
                ComponentRule::Copy => Ok(None),
                ComponentRule::Implicit { epsilon2 } => Ok(Some(make_implicit(
                    ImplicitChannelSpec::new(epsilon2, l_size)?,
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(KnowledgeChannels { per, l_size })
    }
}

/// A [`KnowledgeRule`] with its channels built.
#[derive(Clone, Debug)]
pub struct KnowledgeChannels {
    per: Vec<Option<DiscreteChannel<f64>>>,
    l_size: usize,
}

impl KnowledgeChannels {
    pub fn derive<R: Rng + ?Sized>(&self, sender: &[usize], rng: &mut R) -> Result<Vec<usize>> {
        if sender.len() != self.per.len() {
            return Err(Error::LengthMismatch {
                expected: self.per.len(),
                found: sender.len(),
            });
        }
        sender
            .iter()
            .zip(&self.per)
            .map(|(&k, ch)| match ch {
                None if k < self.l_size => Ok(k),
                None => Err(Error::SymbolOutOfRange {
                    symbol: k,
                    size: self.l_size,
                }),
                Some(ch) => ch.transmit(k, rng),
            })
            .collect()
    }

    /// `P(receiver component = out | sender component = k)`.
    fn transition(&self, component: usize, k: usize, out: usize) -> f64 {
        match &self.per[component] {
            None => f64::from(u8::from(k == out)),
            Some(ch) => ch.row(k)[out],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseId {
    I,
    II,
    III,
    IV,
}

impl CaseId {
    pub const ALL: [CaseId; 4] = [CaseId::I, CaseId::II, CaseId::III, CaseId::IV];
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseId::I => "I",
            CaseId::II => "II",
            CaseId::III => "III",
            CaseId::IV => "IV",
        })
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(CaseId::I),
            "II" | "2" => Ok(CaseId::II),
            "III" | "3" => Ok(CaseId::III),
            "IV" | "4" => Ok(CaseId::IV),
            _ => Err(Error::UnknownCase(s.to_string())),
        }
    }
}

/// Knowledge rule and collision factors of one width-2 case.
#[derive(Clone, Debug, PartialEq)]
pub struct CaseSetup {
    pub case: CaseId,
    pub rule: KnowledgeRule,
    pub alpha: f64,
    pub beta: f64,
}

/// I copies both components with `beta = alpha`; II redraws component 1 and
/// III component 2 through the implicit channel; IV copies both with
/// `beta = alpha / 2`.
pub fn make_case(case: CaseId, alpha: f64) -> CaseSetup {
    let noisy = ComponentRule::Implicit {
        epsilon2: CASE_MISMATCH_EPSILON,
    };
    let (components, beta) = match case {
        CaseId::I => (vec![ComponentRule::Copy, ComponentRule::Copy], alpha),
        CaseId::II => (vec![noisy, ComponentRule::Copy], alpha),
        CaseId::III => (vec![ComponentRule::Copy, noisy], alpha),
        CaseId::IV => (vec![ComponentRule::Copy, ComponentRule::Copy], alpha / 2.0),
    };
    CaseSetup {
        case,
        rule: KnowledgeRule { components },
        alpha,
        beta,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LearningParams {
    pub learning_rate: f64,
    pub epsilon0: f64,
    pub epsilon_decay: f64,
    pub epsilon_floor: f64,
    pub q_init: f64,
}

impl Default for LearningParams {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            epsilon0: 0.1,
            epsilon_decay: 0.9999,
            epsilon_floor: 0.001,
            q_init: 0.0,
        }
    }
}

impl LearningParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| {
            Err(Error::InvalidParameter(format!(
                "{what} = {v} out of range"
            )))
        };
        if !(self.learning_rate > 0.0 && self.learning_rate <= 1.0) {
            return bad("learning_rate", self.learning_rate);
        }
        for (what, v) in [
            ("epsilon0", self.epsilon0),
            ("epsilon_decay", self.epsilon_decay),
            ("epsilon_floor", self.epsilon_floor),
            ("q_init", self.q_init),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return bad(what, v);
            }
        }
        Ok(())
    }
}

/// Receiver decision rule.
pub trait Policy {
    fn act<R: Rng + ?Sized>(&mut self, state: usize, rng: &mut R) -> usize;
    fn learn(&mut self, state: usize, action: usize, reward: f64);
}

/// Tabular epsilon-greedy learner with update `Q <- Q + eta (u - Q)`.
#[derive(Clone, Debug)]
pub struct ReceiverAgent {
    q: Vec<f64>,
    actions: usize,
    params: LearningParams,
    exploration: f64,
    ties: Vec<usize>,
}

impl ReceiverAgent {
    pub fn new(states: usize, actions: usize, params: LearningParams) -> Result<Self> {
        params.validate()?;
        if states == 0 || actions == 0 {
            return Err(Error::InvalidParameter(
                "agent needs at least one state and one action".into(),
            ));
        }
        Ok(Self {
            q: vec![params.q_init; states * actions],
            actions,
            params,
            exploration: params.epsilon0,
            ties: Vec::with_capacity(actions),
        })
    }

    pub fn q(&self, state: usize, action: usize) -> f64 {
        self.q[state * self.actions + action]
    }

    pub fn q_values(&self) -> &[f64] {
        &self.q
    }

    pub fn exploration(&self) -> f64 {
        self.exploration
    }
}

impl Policy for ReceiverAgent {
    fn act<R: Rng + ?Sized>(&mut self, state: usize, rng: &mut R) -> usize {
        let explore = rng.random::<f64>() < self.exploration;
        self.exploration =
            (self.exploration * self.params.epsilon_decay).max(self.params.epsilon_floor);
        if explore {
            return rng.random_range(0..self.actions);
        }
        let row = &self.q[state * self.actions..(state + 1) * self.actions];
        let best = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        self.ties.clear();
        self.ties
            .extend((0..self.actions).filter(|&a| row[a] == best));
        self.ties[rng.random_range(0..self.ties.len())]
    }

    fn learn(&mut self, state: usize, action: usize, reward: f64) {
        let q = &mut self.q[state * self.actions + action];
        *q += self.params.learning_rate * (reward - *q);
    }
}

/// Fixed state-to-type table (for example the MAP decoder); never learns.
#[derive(Clone, Debug)]
pub struct TablePolicy(pub Vec<usize>);

impl Policy for TablePolicy {
    fn act<R: Rng + ?Sized>(&mut self, state: usize, _rng: &mut R) -> usize {
        self.0[state]
    }

    fn learn(&mut self, _state: usize, _action: usize, _reward: f64) {}
}

/// Parameters of one game.
#[derive(Clone, Debug, PartialEq)]
pub struct GameConfig {
    pub params: SystemParams,
    pub epsilon1: f64,
    pub knowledge: KnowledgeRule,
    pub learning: LearningParams,
    pub window: usize,
}

impl GameConfig {
    /// Width-1 game over `M` signals and `L` knowledge symbols with explicit
    /// crossover `epsilon1` and implicit redraw probability `epsilon2`.
    pub fn basic(signal_size: usize, knowledge_size: usize, epsilon1: f64, epsilon2: f64) -> Self {
        Self {
            params: SystemParams::basic(signal_size, knowledge_size),
            epsilon1,
            knowledge: KnowledgeRule::implicit(1, epsilon2),
            learning: LearningParams::default(),
            window: 1000,
        }
    }

    /// Width-2 case study over a noiseless explicit channel.
    pub fn case(signal_size: usize, knowledge_size: usize, case: CaseId, alpha: f64) -> Self {
        let setup = make_case(case, alpha);
        Self {
            params: SystemParams::expanded(signal_size, knowledge_size, setup.alpha, setup.beta),
            epsilon1: 0.0,
            knowledge: setup.rule,
            learning: LearningParams::default(),
            window: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoundTrace {
    pub ctx: RoundContext,
    pub received: Vec<usize>,
    pub state: usize,
    pub semantic_type: usize,
    pub response: usize,
    pub reward: u8,
}

/// A configured game: semantic system, channels and receiver dimensions.
#[derive(Clone, Debug)]
pub struct Game {
    config: GameConfig,
    system: SemanticSystem,
    explicit: DiscreteChannel<f64>,
    knowledge: KnowledgeChannels,
}

impl Game {
    pub fn new(config: GameConfig, system: SemanticSystem) -> Result<Self> {
        if system.params() != &config.params {
            return Err(Error::InvalidParameter(
                "semantic system does not match the game parameters".into(),
            ));
        }
        if config.knowledge.components.len() != config.params.width {
            return Err(Error::LengthMismatch {
                expected: config.params.width,
                found: config.knowledge.components.len(),
            });
        }
        if config.window == 0 {
            return Err(Error::InvalidParameter("window must be positive".into()));
        }
        config.learning.validate()?;
        let explicit = make_symmetric(config.params.signal_size, config.epsilon1)?;
        let knowledge = config.knowledge.channels(config.params.knowledge_size)?;
        Ok(Self {
            config,
            system,
            explicit,
            knowledge,
        })
    }

    /// Game whose codebook is drawn from the codebook substream of `seed`.
    pub fn seeded(config: GameConfig, seed: u64) -> Result<Self> {
        let mut rng = substream(seed, &[TAG_CODEBOOK]);
        let system = SemanticSystem::with_random_codebook(config.params.clone(), &mut rng)?;
        Self::new(config, system)
    }

    pub fn config(&self) -> &GameConfig {
        &self.config
    }

    pub fn system(&self) -> &SemanticSystem {
        &self.system
    }

    pub fn agent(&self) -> Result<ReceiverAgent> {
        ReceiverAgent::new(
            self.system.receiver_states(),
            self.system.t_size(),
            self.config.learning,
        )
    }

    /// Plays one round: draws `S`, `K_A`, the latents, `K_B` and `S_hat` in
    /// that order, then lets `policy` respond and learn.
    pub fn round<P: Policy, R: Rng + ?Sized>(
        &self,
        policy: &mut P,
        rng: &mut R,
    ) -> Result<RoundTrace> {
        let p = &self.config.params;
        let signals: Vec<usize> = (0..p.width)
            .map(|_| rng.random_range(0..p.signal_size))
            .collect();
        let sender_knowledge: Vec<usize> = (0..p.width)
            .map(|_| rng.random_range(0..p.knowledge_size))
            .collect();
        let latents: Vec<f64> = (1..p.width).map(|_| rng.random::<f64>()).collect();
        let receiver_knowledge = self.knowledge.derive(&sender_knowledge, rng)?;
        let received = self.explicit.transmit_all(&signals, rng)?;
        let ctx = RoundContext {
            signals,
            sender_knowledge,
            receiver_knowledge,
            latents,
        };
        let semantic_type = self.system.encode(&ctx)?;
        let state = self
            .system
            .receiver_state(&received, &ctx.receiver_knowledge, &ctx.latents)?;
        let response = policy.act(state, rng);
        let reward = u8::from(response == semantic_type);
        policy.learn(state, response, f64::from(reward));
        Ok(RoundTrace {
            ctx,
            received,
            state,
            semantic_type,
            response,
            reward,
        })
    }

    /// Plays `rounds` rounds on the round substream of `seed`.
    pub fn play<P: Policy>(&self, policy: &mut P, rounds: usize, seed: u64) -> Result<SrsaSeries> {
        if rounds < self.config.window {
            return Err(Error::InvalidParameter(format!(
                "rounds ({rounds}) must be at least the window ({})",
                self.config.window
            )));
        }
        let mut rng: SimRng = substream(seed, &[TAG_ROUNDS]);
        let mut rewards = Vec::with_capacity(rounds);
        for _ in 0..rounds {
            rewards.push(self.round(policy, &mut rng)?.reward);
        }
        SrsaSeries::new(rewards, self.config.window)
    }

    /// Exact `p(receiver state, type)` as a row-major `states x t_size` table.
    pub fn state_type_joint(&self) -> Result<Vec<f64>> {
        let p = &self.config.params;
        let (m, l, n) = (p.signal_size, p.knowledge_size, p.width);
        let states = self.system.receiver_states();
        let t_size = self.system.t_size();
        let cells = states.saturating_mul(t_size);
        if cells > CEILING_CELL_LIMIT {
            return Err(Error::TooLarge {
                cells,
                limit: CEILING_CELL_LIMIT,
            });
        }
        let law = coupled_dominance(&p.alphas, &p.betas)?;
        let ks = p.knowledge_states();
        let mut joint = vec![0.0; cells];
        // signals, received signals, sender knowledge, receiver knowledge
        let mut sizes = vec![m; 2 * n];
        sizes.extend(std::iter::repeat_n(l, 2 * n));
        let base = 1.0 / ((m as f64).powi(n as i32) * (l as f64).powi(n as i32));
        let mut bad = None;
        for_each_index(&sizes, |idx, _| {
            if bad.is_some() {
                return;
            }
            let (s, rest) = idx.split_at(n);
            let (s_hat, rest) = rest.split_at(n);
            let (ka, kb) = rest.split_at(n);
            let mut w = base;
            for i in 0..n {
                w *= self.explicit.row(s[i])[s_hat[i]] * self.knowledge.transition(i, ka[i], kb[i]);
            }
            if w == 0.0 {
                return;
            }
            let res = (|| -> Result<()> {
                let cs = expand(s, m)?;
                let cr = expand(s_hat, m)?;
                for &(da, db, pd) in &law {
                    let input = cs * ks
                        + EffectiveKnowledge {
                            value: ka[da],
                            dominance: da,
                        }
                        .index(l);
                    let state = cr * ks
                        + EffectiveKnowledge {
                            value: kb[db],
                            dominance: db,
                        }
                        .index(l);
                    let t = self.system.codebook().lookup(input)?;
                    joint[state * t_size + t] += w * pd;
                }
                Ok(())
            })();
            if let Err(e) = res {
                bad = Some(e);
            }
        });
        match bad {
            Some(e) => Err(e),
            None => Ok(joint),
        }
    }

    /// Agreement probability of the optimal decoder.
    pub fn ceiling(&self) -> Result<f64> {
        let t = self.system.t_size();
        Ok(self
            .state_type_joint()?
            .chunks(t)
            .map(|row| row.iter().copied().fold(0.0, f64::max))
            .sum())
    }

    /// Most probable type for each receiver state (lowest index on ties).
    pub fn map_decoder(&self) -> Result<Vec<usize>> {
        let t = self.system.t_size();
        Ok(self
            .state_type_joint()?
            .chunks(t)
            .map(|row| {
                let mut best = 0;
                for (i, &p) in row.iter().enumerate() {
                    if p > row[best] {
                        best = i;
                    }
                }
                best
            })
            .collect())
    }
}

/// Optimal-decoder agreement probability of `config`. Relabelling types does
/// not change it, so the identity codebook is used.
pub fn analytic_ceiling(config: &GameConfig) -> Result<f64> {
    let system = SemanticSystem::with_identity_codebook(config.params.clone())?;
    Game::new(config.clone(), system)?.ceiling()
}

/// Plays one learning episode with a fresh receiver.
pub fn run_episode(config: &GameConfig, rounds: usize, seed: u64) -> Result<SrsaSeries> {
    let game = Game::seeded(config.clone(), seed)?;
    let mut agent = game.agent()?;
    game.play(&mut agent, rounds, seed)
}

/// Reward trace of an episode with windowed statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct SrsaSeries {
    rewards: Vec<u8>,
    window: usize,
}

impl SrsaSeries {
    pub fn new(rewards: Vec<u8>, window: usize) -> Result<Self> {
        if window == 0 || rewards.len() < window {
            return Err(Error::InvalidParameter(format!(
                "need a positive window no longer than the {} rewards, got {window}",
                rewards.len()
            )));
        }
        if rewards.iter().any(|&r| r > 1) {
            return Err(Error::InvalidParameter("rewards must be 0 or 1".into()));
        }
        Ok(Self { rewards, window })
    }

    pub fn rewards(&self) -> &[u8] {
        &self.rewards
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn len(&self) -> usize {
        self.rewards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rewards.is_empty()
    }

    /// Mean reward of each complete, non-overlapping window.
    pub fn window_means(&self) -> Vec<f64> {
        self.rewards
            .chunks_exact(self.window)
            .map(|w| w.iter().map(|&r| f64::from(r)).sum::<f64>() / self.window as f64)
            .collect()
    }

    /// Within-window reward variance `m (1 - m)`.
    pub fn window_variances(&self) -> Vec<f64> {
        self.window_means()
            .into_iter()
            .map(|m| m * (1.0 - m))
            .collect()
    }

    /// First round of the stable region (the last quarter of the episode).
    pub fn stable_start(&self) -> usize {
        self.rewards.len() - self.rewards.len() / 4
    }

    pub fn stable_mean(&self) -> f64 {
        let tail = &self.rewards[self.stable_start()..];
        if tail.is_empty() {
            return self.final_window_mean();
        }
        tail.iter().map(|&r| f64::from(r)).sum::<f64>() / tail.len() as f64
    }

    /// Variance of the window means whose windows lie in the stable region.
    pub fn stable_window_variance(&self) -> f64 {
        let first = self.stable_start().div_ceil(self.window);
        let means = self.window_means();
        variance(means.get(first..).unwrap_or(&[]))
    }

    pub fn final_window_mean(&self) -> f64 {
        *self.window_means().last().expect("at least one window")
    }

    /// Writes `round,reward,windowed_mean`, the last column being the mean of
    /// the window ending at that round (empty until the first window fills).
    pub fn write_trace_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["round", "reward", "windowed_mean"])?;
        let mut sum = 0u64;
        for (i, &r) in self.rewards.iter().enumerate() {
            sum += u64::from(r);
            if i >= self.window {
                sum -= u64::from(self.rewards[i - self.window]);
            }
            let wm = if i + 1 >= self.window {
                crate::experiments::fmt_g(sum as f64 / self.window as f64)
            } else {
                String::new()
            };
            out.write_record([(i + 1).to_string(), r.to_string(), wm])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Population variance; zero for fewer than two values.
pub fn variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}
