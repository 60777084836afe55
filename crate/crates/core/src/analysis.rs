//! Exact checks of the semantic information identities and bounds.
//!
//! A [`ScenarioJoint`] is a joint law over the signal `S`, the received signal
//! `S_hat`, and the two knowledge instances `K_A`, `K_B`, together with
//! injective semantic maps `T = f(S, K_A)` and `T_hat = g(S_hat, K_B)`. Every
//! check evaluates both sides of an identity (or inequality) on the exact
//! table and reports the values alongside a pass flag.
//!
//! Identities are checked at [`Real::IDENTITY_TOL`] and inequalities with
//! [`Real::INEQUALITY_SLACK`] on the favorable side.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::Exp1;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::prob::{for_each_index, Alphabet, FanoBound, JointTable};
use crate::real::Real;
use crate::rng::substream;
use crate::semantic::{coupled_dominance, expand, split, EffectiveKnowledge};

pub const S: &str = "S";
pub const S_HAT: &str = "S_hat";
pub const K_A: &str = "K_A";
pub const K_B: &str = "K_B";
pub const T: &str = "T";
pub const T_HAT: &str = "T_hat";

/// Below this, `H(S) - H(S_1)` is treated as zero and the expansion ratio is
/// left undefined.
pub const GAMMA_DENOMINATOR_MIN: f64 = 1e-9;

/// Largest number of decoders [`ScenarioJoint::fano_exhaustive`] will visit.
pub const DECODER_ENUMERATION_LIMIT: usize = 1 << 22;

#[derive(Clone, Debug)]
pub struct ScenarioJoint<F> {
    table: JointTable<F>,
    encoder: Vec<usize>,
    decoder: Vec<usize>,
    t_size: usize,
    t_hat_size: usize,
    pos: [usize; 4],
}

fn check_injective_on<F: Real>(map: &[usize], range: usize, support: &[F]) -> Result<()> {
    let mut owner = vec![usize::MAX; range];
    for (input, &t) in map.iter().enumerate() {
        if t >= range {
            return Err(Error::SymbolOutOfRange {
                symbol: t,
                size: range,
            });
        }
        if support[input] <= F::zero() {
            continue;
        }
        if owner[t] != usize::MAX {
            return Err(Error::NonInjective {
                first: owner[t],
                second: input,
                image: t,
            });
        }
        owner[t] = input;
    }
    Ok(())
}

impl<F: Real> ScenarioJoint<F> {
    /// `encoder[s * |K_A| + k_a]` is the sender's type and
    /// `decoder[s_hat * |K_B| + k_b]` the receiver's. Both must be injective on
    /// the inputs that carry probability.
    pub fn new(
        table: JointTable<F>,
        encoder: Vec<usize>,
        t_size: usize,
        decoder: Vec<usize>,
        t_hat_size: usize,
    ) -> Result<Self> {
        let pos = [
            table.position(S)?,
            table.position(S_HAT)?,
            table.position(K_A)?,
            table.position(K_B)?,
        ];
        let sizes = table.sizes();
        let enc_inputs = sizes[pos[0]] * sizes[pos[2]];
        let dec_inputs = sizes[pos[1]] * sizes[pos[3]];
        if encoder.len() != enc_inputs {
            return Err(Error::LengthMismatch {
                expected: enc_inputs,
                found: encoder.len(),
            });
        }
        if decoder.len() != dec_inputs {
            return Err(Error::LengthMismatch {
                expected: dec_inputs,
                found: decoder.len(),
            });
        }
        let sender = table.marginalize(&[S, K_A])?;
        let receiver = table.marginalize(&[S_HAT, K_B])?;
        check_injective_on(&encoder, t_size, &ordered(&sender, S, K_A)?)?;
        check_injective_on(&decoder, t_hat_size, &ordered(&receiver, S_HAT, K_B)?)?;
        Ok(Self {
            table,
            encoder,
            decoder,
            t_size,
            t_hat_size,
            pos,
        })
    }

    /// Scenario whose maps are the row-major packings of their inputs.
    pub fn with_identity_maps(table: JointTable<F>) -> Result<Self> {
        let sizes = [S, S_HAT, K_A, K_B]
            .iter()
            .map(|l| table.alphabet(l).map(Alphabet::size))
            .collect::<Result<Vec<_>>>()?;
        let (e, d) = (sizes[0] * sizes[2], sizes[1] * sizes[3]);
        Self::new(table, (0..e).collect(), e, (0..d).collect(), d)
    }

    pub fn table(&self) -> &JointTable<F> {
        &self.table
    }

    pub fn t_size(&self) -> usize {
        self.t_size
    }

    pub fn encoder(&self) -> &[usize] {
        &self.encoder
    }

    fn size(&self, which: usize) -> usize {
        self.table.alphabets()[self.pos[which]].size()
    }

    fn encoder_input(&self, idx: &[usize]) -> usize {
        idx[self.pos[0]] * self.size(2) + idx[self.pos[2]]
    }

    fn decoder_input(&self, idx: &[usize]) -> usize {
        idx[self.pos[1]] * self.size(3) + idx[self.pos[3]]
    }

    /// Joint law of `(T, T_hat)` pushed forward through the semantic maps.
    pub fn type_joint(&self) -> Result<JointTable<F>> {
        self.table.pushforward(
            [
                (T, Alphabet::new(T, self.t_size)?),
                (T_HAT, Alphabet::new(T_HAT, self.t_hat_size)?),
            ],
            |idx, out| {
                out[0] = self.encoder[self.encoder_input(idx)];
                out[1] = self.decoder[self.decoder_input(idx)];
            },
        )
    }

    pub fn type_mutual_information(&self) -> Result<F> {
        self.type_joint()?.mutual_information(&[T], &[T_HAT])
    }

    /// Evaluates `I(T; T_hat)` directly and through its four-term
    /// decomposition over the signal and knowledge variables.
    pub fn decompose(&self) -> Result<DecompositionReport<F>> {
        let t = &self.table;
        let total = self.type_mutual_information()?;
        let signal = t.mutual_information(&[S], &[S_HAT])?;
        let knowledge = t.conditional_mutual_information(&[K_A], &[K_B], &[S, S_HAT])?;
        let sender_cross = t.conditional_mutual_information(&[S], &[K_B], &[S_HAT])?;
        let receiver_cross = t.conditional_mutual_information(&[S_HAT], &[K_A], &[S])?;
        let residual = total - (signal + knowledge + sender_cross + receiver_cross);
        Ok(DecompositionReport {
            total,
            signal,
            knowledge,
            sender_cross,
            receiver_cross,
            residual,
            passed: residual.abs().as_f64() <= F::IDENTITY_TOL,
        })
    }

    fn off_diagonal_mass(&self, a: usize, b: usize) -> Result<F> {
        let (pa, pb) = (self.pos[a], self.pos[b]);
        if self.size(a) != self.size(b) {
            return Err(Error::AlphabetMismatch {
                expected: self.size(a),
                found: self.size(b),
            });
        }
        let mut mass = F::zero();
        self.table.for_each_cell(|idx, p| {
            if idx[pa] != idx[pb] {
                mass = mass + p;
            }
        });
        Ok(mass)
    }

    fn require_diagonal(&self, a: usize, b: usize, what: &str) -> Result<()> {
        let mass = self.off_diagonal_mass(a, b)?;
        if mass.as_f64() > F::NORM_TOL {
            return Err(Error::OffSupport(format!(
                "{what}: {mass} of the mass lies off the diagonal"
            )));
        }
        Ok(())
    }

    /// Noiseless explicit channel (`S = S_hat`):
    /// `I(T; T_hat) = H(S) + I(K_A; K_B | S)`, with both cross terms zero.
    pub fn check_noiseless_explicit(&self) -> Result<NoiselessExplicitReport<F>> {
        self.require_diagonal(0, 1, "S = S_hat")?;
        let t = &self.table;
        let mutual_information = self.type_mutual_information()?;
        let signal_entropy = t.entropy(&[S])?;
        let knowledge = t.conditional_mutual_information(&[K_A], &[K_B], &[S])?;
        let predicted = signal_entropy + knowledge;
        let sender_cross = t.conditional_mutual_information(&[S], &[K_B], &[S_HAT])?;
        let receiver_cross = t.conditional_mutual_information(&[S_HAT], &[K_A], &[S])?;
        let tol = F::IDENTITY_TOL;
        let passed = (mutual_information - predicted).abs().as_f64() <= tol
            && sender_cross.as_f64() <= tol
            && receiver_cross.as_f64() <= tol;
        Ok(NoiselessExplicitReport {
            mutual_information,
            signal_entropy,
            knowledge,
            predicted,
            sender_cross,
            receiver_cross,
            passed,
        })
    }

    /// Noiseless implicit channel (`K_A = K_B`): the two interaction-information
    /// forms of `I(T; T_hat)` and the sandwich
    /// `I(S; S_hat) <= I(T; T_hat) <= I(S; S_hat) + H(K_A)`.
    pub fn check_noiseless_implicit(&self) -> Result<NoiselessImplicitReport<F>> {
        self.require_diagonal(2, 3, "K_A = K_B")?;
        let t = &self.table;
        let mutual_information = self.type_mutual_information()?;
        let signal = t.mutual_information(&[S], &[S_HAT])?;
        let sender_knowledge_entropy = t.entropy(&[K_A])?;
        let receiver_knowledge_entropy = t.entropy(&[K_B])?;
        let sender_interaction = t.interaction_information(&[K_A], &[S], &[S_HAT])?;
        let receiver_interaction = t.interaction_information(&[K_B], &[S], &[S_HAT])?;
        let sender_form = signal + sender_knowledge_entropy - sender_interaction;
        let receiver_form = signal + receiver_knowledge_entropy - receiver_interaction;
        let tol = F::IDENTITY_TOL;
        let slack = F::INEQUALITY_SLACK;
        Ok(NoiselessImplicitReport {
            mutual_information,
            signal,
            sender_knowledge_entropy,
            sender_interaction,
            sender_form,
            receiver_form,
            forms_agree: (mutual_information - sender_form).abs().as_f64() <= tol
                && (mutual_information - receiver_form).abs().as_f64() <= tol,
            lower_bound_holds: (signal - mutual_information).as_f64() <= slack,
            upper_bound_holds: (mutual_information - signal - sender_knowledge_entropy).as_f64()
                <= slack,
        })
    }

    /// Noiseless on both channels: `I(T; T_hat) = H(T) = H(T_hat)`.
    pub fn check_fully_noiseless(&self) -> Result<FullyNoiselessReport<F>> {
        self.require_diagonal(0, 1, "S = S_hat")?;
        self.require_diagonal(2, 3, "K_A = K_B")?;
        let tj = self.type_joint()?;
        let mutual_information = tj.mutual_information(&[T], &[T_HAT])?;
        let type_entropy = tj.entropy(&[T])?;
        let estimate_entropy = tj.entropy(&[T_HAT])?;
        let tol = F::IDENTITY_TOL;
        Ok(FullyNoiselessReport {
            mutual_information,
            type_entropy,
            estimate_entropy,
            passed: (mutual_information - type_entropy).abs().as_f64() <= tol
                && (mutual_information - estimate_entropy).abs().as_f64() <= tol,
        })
    }

    /// `q[input][t]`: probability that the receiver sees decoder input `input`
    /// while the sender's type is `t`.
    fn receiver_type_mass(&self) -> Vec<Vec<F>> {
        let mut q = vec![vec![F::zero(); self.t_size]; self.size(1) * self.size(3)];
        self.table.for_each_cell(|idx, p| {
            let t = self.encoder[self.encoder_input(idx)];
            let cell = &mut q[self.decoder_input(idx)][t];
            *cell = *cell + p;
        });
        q
    }

    fn fano_bound(&self) -> Result<FanoBound<F>> {
        self.table
            .srsa_fano_bound(&[K_A, S], &[K_B, S_HAT], self.t_size)
    }

    /// Exact agreement probability of a type-estimating `decoder` (indexed like
    /// the scenario's receiver map, values in `0..t_size`) against the Fano
    /// ceiling.
    pub fn check_fano(&self, decoder: &[usize]) -> Result<FanoReport<F>> {
        let q = self.receiver_type_mass();
        if decoder.len() != q.len() {
            return Err(Error::LengthMismatch {
                expected: q.len(),
                found: decoder.len(),
            });
        }
        if let Some(&t) = decoder.iter().find(|&&t| t >= self.t_size) {
            return Err(Error::SymbolOutOfRange {
                symbol: t,
                size: self.t_size,
            });
        }
        let success: F = decoder.iter().zip(&q).map(|(&t, row)| row[t]).sum();
        let bound = self.fano_bound()?;
        Ok(FanoReport {
            success,
            bound,
            passed: (success - bound.unclamped).as_f64() <= F::INEQUALITY_SLACK,
        })
    }

    /// Maximum a posteriori type estimate for every decoder input.
    pub fn map_decoder(&self) -> Vec<usize> {
        self.receiver_type_mass()
            .iter()
            .map(|row| {
                let mut best = 0;
                for (t, &p) in row.iter().enumerate() {
                    if p > row[best] {
                        best = t;
                    }
                }
                best
            })
            .collect()
    }

    /// Checks the Fano ceiling against every decoder from receiver inputs to
    /// types.
    pub fn fano_exhaustive(&self) -> Result<FanoSweep<F>> {
        let q = self.receiver_type_mass();
        let inputs = q.len();
        let count = (0..inputs).try_fold(1usize, |acc, _| acc.checked_mul(self.t_size));
        let count = match count {
            Some(c) if c <= DECODER_ENUMERATION_LIMIT => c,
            _ => {
                return Err(Error::TooLarge {
                    cells: count.unwrap_or(usize::MAX),
                    limit: DECODER_ENUMERATION_LIMIT,
                })
            }
        };
        let bound = self.fano_bound()?;
        let mut best = F::zero();
        let mut violations = 0;
        for_each_index(&vec![self.t_size; inputs], |decoder, _| {
            let success: F = decoder.iter().zip(&q).map(|(&t, row)| row[t]).sum();
            if (success - bound.unclamped).as_f64() > F::INEQUALITY_SLACK {
                violations += 1;
            }
            if success > best {
                best = success;
            }
        });
        Ok(FanoSweep {
            decoders: count,
            best_success: best,
            bound,
            violations,
        })
    }
}

/// Marginal over two variables, flattened as `a * |b| + b`.
fn ordered<F: Real>(marginal: &JointTable<F>, a: &str, b: &str) -> Result<Vec<F>> {
    let (sa, sb) = (marginal.alphabet(a)?.size(), marginal.alphabet(b)?.size());
    let (pa, pb) = (marginal.position(a)?, marginal.position(b)?);
    let mut out = vec![F::zero(); sa * sb];
    marginal.for_each_cell(|idx, p| out[idx[pa] * sb + idx[pb]] = p);
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport<F> {
    /// `I(T; T_hat)` from the pushed-forward type joint.
    pub total: F,
    /// `I(S; S_hat)`
    pub signal: F,
    /// `I(K_A; K_B | S, S_hat)`
    pub knowledge: F,
    /// `I(S; K_B | S_hat)`
    pub sender_cross: F,
    /// `I(S_hat; K_A | S)`
    pub receiver_cross: F,
    pub residual: F,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NoiselessExplicitReport<F> {
    pub mutual_information: F,
    pub signal_entropy: F,
    /// `I(K_A; K_B | S)`
    pub knowledge: F,
    pub predicted: F,
    pub sender_cross: F,
    pub receiver_cross: F,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NoiselessImplicitReport<F> {
    pub mutual_information: F,
    pub signal: F,
    pub sender_knowledge_entropy: F,
    /// `I(K_A; S) - I(K_A; S | S_hat)`
    pub sender_interaction: F,
    pub sender_form: F,
    pub receiver_form: F,
    pub forms_agree: bool,
    pub lower_bound_holds: bool,
    pub upper_bound_holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FullyNoiselessReport<F> {
    pub mutual_information: F,
    pub type_entropy: F,
    pub estimate_entropy: F,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct FanoReport<F> {
    pub success: F,
    pub bound: FanoBound<F>,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct FanoSweep<F> {
    pub decoders: usize,
    pub best_success: F,
    pub bound: FanoBound<F>,
    pub violations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpansionGain<F> {
    /// `I(T; T_hat) - I(T_1; T_hat_1)`
    pub gain: F,
    /// `H(S) - H(S_1)`
    pub rate_cost: F,
    /// `None` when the rate cost is below [`GAMMA_DENOMINATOR_MIN`].
    pub gamma: Option<F>,
    pub predicted: Option<F>,
    pub passed: bool,
}

/// Semantic gain of a width-2 scenario over its width-1 restriction, both with
/// a noiseless explicit channel.
pub fn expansion_gain<F: Real>(
    width1: &ScenarioJoint<F>,
    width2: &ScenarioJoint<F>,
) -> Result<ExpansionGain<F>> {
    width1.require_diagonal(0, 1, "width-1 S = S_hat")?;
    width2.require_diagonal(0, 1, "width-2 S = S_hat")?;
    let gain = width2.type_mutual_information()? - width1.type_mutual_information()?;
    let rate_cost = width2.table.entropy(&[S])? - width1.table.entropy(&[S])?;
    let k2 = width2
        .table
        .conditional_mutual_information(&[K_A], &[K_B], &[S])?;
    let k1 = width1
        .table
        .conditional_mutual_information(&[K_A], &[K_B], &[S])?;
    let (gamma, predicted, passed) = if rate_cost.abs().as_f64() > GAMMA_DENOMINATOR_MIN {
        let gamma = (k2 - k1) / rate_cost;
        let predicted = (F::one() + gamma) * rate_cost;
        (
            Some(gamma),
            Some(predicted),
            (gain - predicted).abs().as_f64() <= F::IDENTITY_TOL,
        )
    } else {
        (None, None, true)
    };
    Ok(ExpansionGain {
        gain,
        rate_cost,
        gamma,
        predicted,
        passed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpansionBounds<F> {
    /// `(H(S_1) + H(S_2)) / 2`
    pub lower: F,
    pub mutual_information: F,
    /// `H(K_A) + H(S)` with `K_A` the collided knowledge.
    pub upper: F,
    pub passed: bool,
}

/// Checks `(H(S_1) + H(S_2)) / 2 <= I(T; T_hat) <= H(K_A) + H(S)` on a width-2
/// scenario whose `S` is the composite of two components over
/// `0..signal_size`.
pub fn expansion_bounds<F: Real>(
    width2: &ScenarioJoint<F>,
    signal_size: usize,
) -> Result<ExpansionBounds<F>> {
    width2.require_diagonal(0, 1, "S = S_hat")?;
    let composite = width2.table.marginalize(&[S])?;
    if composite.probs().len() != signal_size * signal_size {
        return Err(Error::AlphabetMismatch {
            expected: signal_size * signal_size,
            found: composite.probs().len(),
        });
    }
    let a = Alphabet::new("signal", signal_size)?;
    let comps = composite.pushforward([("S1", a.clone()), ("S2", a)], |idx, out| {
        out.copy_from_slice(&split(idx[0], signal_size, 2));
    })?;
    let lower = (comps.entropy(&["S1"])? + comps.entropy(&["S2"])?) / F::lit(2.0);
    let mutual_information = width2.type_mutual_information()?;
    let upper = width2.table.entropy(&[K_A])? + width2.table.entropy(&[S])?;
    let slack = F::INEQUALITY_SLACK;
    let passed = (lower - mutual_information).as_f64() <= slack
        && (mutual_information - upper).as_f64() <= slack;
    Ok(ExpansionBounds {
        lower,
        mutual_information,
        upper,
        passed,
    })
}

/// Alphabet sizes of a sampled scenario. `S` and `S_hat` share a size, as do
/// `K_A` and `K_B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScenarioDims {
    pub signal_size: usize,
    pub knowledge_size: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScenarioConstraint {
    None,
    ExplicitNoiseless,
    ImplicitNoiseless,
    Both,
}

/// Largest table [`sample_scenario`] will build.
pub const SCENARIO_CELL_LIMIT: usize = 4096;

fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    v
}

/// Draws a point uniformly from the probability simplex, zeroes the cells where
/// `keep` is false and renormalizes.
fn masked_simplex<F: Real, R: Rng + ?Sized>(
    sizes: &[usize],
    rng: &mut R,
    mut keep: impl FnMut(&[usize]) -> bool,
) -> Result<Vec<F>> {
    let mut weights = vec![0.0f64; sizes.iter().product()];
    for_each_index(sizes, |idx, flat| {
        let w: f64 = rng.sample(Exp1);
        if keep(idx) {
            weights[flat] = w;
        }
    });
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::EmptySupport);
    }
    let probs: Vec<F> = weights.iter().map(|&w| F::lit(w / total)).collect();
    // renormalize in the target precision
    let sum: F = probs.iter().copied().sum();
    Ok(probs.into_iter().map(|p| p / sum).collect())
}

/// Random scenario over `(S, S_hat, K_A, K_B)` with seeded bijective semantic
/// maps. Deterministic in `seed`.
pub fn sample_scenario<F: Real>(
    dims: ScenarioDims,
    seed: u64,
    constraint: ScenarioConstraint,
) -> Result<ScenarioJoint<F>> {
    let (m, l) = (dims.signal_size, dims.knowledge_size);
    let cells = m * m * l * l;
    if cells > SCENARIO_CELL_LIMIT {
        return Err(Error::TooLarge {
            cells,
            limit: SCENARIO_CELL_LIMIT,
        });
    }
    let mut rng = substream(seed, &[m as u64, l as u64]);
    let sizes = [m, m, l, l];
    let probs = masked_simplex::<F, _>(&sizes, &mut rng, |i| match constraint {
        ScenarioConstraint::None => true,
        ScenarioConstraint::ExplicitNoiseless => i[0] == i[1],
        ScenarioConstraint::ImplicitNoiseless => i[2] == i[3],
        ScenarioConstraint::Both => i[0] == i[1] && i[2] == i[3],
    })?;
    let table = JointTable::new(
        [
            (S, Alphabet::new(S, m)?),
            (S_HAT, Alphabet::new(S_HAT, m)?),
            (K_A, Alphabet::new(K_A, l)?),
            (K_B, Alphabet::new(K_B, l)?),
        ],
        probs,
    )?;
    let n = m * l;
    let encoder = random_permutation(n, &mut rng);
    let decoder = random_permutation(n, &mut rng);
    ScenarioJoint::new(table, encoder, n, decoder, n)
}

pub const COMPONENT_LABELS: [&str; 6] = ["S1", "S2", "KA1", "KA2", "KB1", "KB2"];

/// Random joint over two signal components and two knowledge components per
/// party, labelled by [`COMPONENT_LABELS`]. The explicit channel is taken to be
/// noiseless, so received components are not separate variables.
pub fn sample_component_joint<F: Real>(
    signal_size: usize,
    knowledge_size: usize,
    seed: u64,
) -> Result<JointTable<F>> {
    let (m, l) = (signal_size, knowledge_size);
    let sizes = [m, m, l, l, l, l];
    let cells: usize = sizes.iter().product();
    if cells > SCENARIO_CELL_LIMIT {
        return Err(Error::TooLarge {
            cells,
            limit: SCENARIO_CELL_LIMIT,
        });
    }
    let mut rng = substream(seed, &[0xE4, m as u64, l as u64]);
    let probs = masked_simplex::<F, _>(&sizes, &mut rng, |_| true)?;
    component_table(m, l, probs)
}

pub(crate) fn component_table<F: Real>(m: usize, l: usize, probs: Vec<F>) -> Result<JointTable<F>> {
    let sizes = [m, m, l, l, l, l];
    let vars = COMPONENT_LABELS
        .iter()
        .zip(sizes)
        .map(|(&n, s)| Alphabet::new(n, s).map(|a| (n, a)))
        .collect::<Result<Vec<_>>>()?;
    JointTable::new(vars, probs)
}

/// Width-1 and width-2 views of one component joint.
#[derive(Clone, Debug)]
pub struct ExpansionPair<F> {
    /// `S = S1`, `K_A = KA1`, `K_B = KB1`.
    pub width1: ScenarioJoint<F>,
    /// `S = S1 (+) S2`, `K_A`, `K_B` the collided knowledge with factors
    /// `alpha`, `beta` and shared latent.
    pub width2: ScenarioJoint<F>,
}

/// Builds the paired scenarios from a component joint (see
/// [`sample_component_joint`]) with noiseless explicit channel. The latent is
/// integrated out exactly; semantic maps are seeded bijections.
pub fn expansion_pair<F: Real>(
    components: &JointTable<F>,
    alpha: f64,
    beta: f64,
    seed: u64,
) -> Result<ExpansionPair<F>> {
    let pos = COMPONENT_LABELS
        .iter()
        .map(|l| components.position(l))
        .collect::<Result<Vec<_>>>()?;
    let sizes = components.sizes();
    let (m, l) = (sizes[pos[0]], sizes[pos[2]]);
    let mut rng = substream(seed, &[0xE5]);

    let a = |n: &'static str, s: usize| Alphabet::new(n, s).map(|a| (n, a));
    let w1 = components.pushforward(
        [a(S, m)?, a(S_HAT, m)?, a(K_A, l)?, a(K_B, l)?],
        |idx, out| {
            out.copy_from_slice(&[idx[pos[0]], idx[pos[0]], idx[pos[2]], idx[pos[4]]]);
        },
    )?;
    let n1 = m * l;
    let width1 = ScenarioJoint::new(
        w1,
        random_permutation(n1, &mut rng),
        n1,
        random_permutation(n1, &mut rng),
        n1,
    )?;

    let law = coupled_dominance(&[alpha], &[beta])?;
    let (ms, ks) = (m * m, 2 * l);
    let mut probs = vec![F::zero(); ms * ms * ks * ks];
    let mut bad = None;
    components.for_each_cell(|idx, p| {
        let s = match expand(&[idx[pos[0]], idx[pos[1]]], m) {
            Ok(s) => s,
            Err(e) => {
                bad = Some(e);
                return;
            }
        };
        let ka = [idx[pos[2]], idx[pos[3]]];
        let kb = [idx[pos[4]], idx[pos[5]]];
        for &(da, db, w) in &law {
            let ea = EffectiveKnowledge {
                value: ka[da],
                dominance: da,
            }
            .index(l);
            let eb = EffectiveKnowledge {
                value: kb[db],
                dominance: db,
            }
            .index(l);
            let cell = ((s * ms + s) * ks + ea) * ks + eb;
            probs[cell] = probs[cell] + p * F::lit(w);
        }
    });
    if let Some(e) = bad {
        return Err(e);
    }
    let w2 = JointTable::new([a(S, ms)?, a(S_HAT, ms)?, a(K_A, ks)?, a(K_B, ks)?], probs)?;
    let n2 = ms * ks;
    let width2 = ScenarioJoint::new(
        w2,
        random_permutation(n2, &mut rng),
        n2,
        random_permutation(n2, &mut rng),
        n2,
    )?;
    Ok(ExpansionPair { width1, width2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    fn vars(m: usize, l: usize) -> Vec<(&'static str, Alphabet)> {
        vec![
            (S, Alphabet::new(S, m).unwrap()),
            (S_HAT, Alphabet::new(S_HAT, m).unwrap()),
            (K_A, Alphabet::new(K_A, l).unwrap()),
            (K_B, Alphabet::new(K_B, l).unwrap()),
        ]
    }

    fn scenario(f: impl FnMut(&[usize]) -> f64) -> ScenarioJoint<f64> {
        ScenarioJoint::with_identity_maps(JointTable::from_fn(vars(2, 2), f).unwrap()).unwrap()
    }

    #[test]
    fn decompose_perfect_channels() {
        let sc = scenario(|i| {
            if i[0] == i[1] && i[2] == i[3] {
                0.25
            } else {
                0.0
            }
        });
        let r = sc.decompose().unwrap();
        close(r.total, 2.0, 1e-12);
        assert!(r.passed);
    }

    #[test]
    fn decompose_independent() {
        let sc = scenario(|_| 1.0 / 16.0);
        let r = sc.decompose().unwrap();
        for v in [
            r.total,
            r.signal,
            r.knowledge,
            r.sender_cross,
            r.receiver_cross,
        ] {
            close(v, 0.0, 1e-12);
        }
    }

    #[test]
    fn non_injective_map_is_rejected() {
        let t = JointTable::<f64>::uniform(vars(2, 2)).unwrap();
        let err =
            ScenarioJoint::new(t.clone(), vec![0, 1, 2, 2], 4, vec![0, 1, 2, 3], 4).unwrap_err();
        assert!(matches!(err, Error::NonInjective { .. }));
        // collisions on zero-probability inputs are allowed
        let t = JointTable::from_fn(vars(2, 2), |i| if i[2] == 0 { 0.125 } else { 0.0 }).unwrap();
        assert!(ScenarioJoint::new(t, vec![0, 0, 1, 1], 4, vec![0, 1, 2, 3], 4).is_ok());
    }

    #[test]
    fn noiseless_explicit_examples() {
        // uniform S, K_A = K_B uniform independent of S
        let sc = scenario(|i| {
            if i[0] == i[1] && i[2] == i[3] {
                0.25
            } else {
                0.0
            }
        });
        let r = sc.check_noiseless_explicit().unwrap();
        close(r.mutual_information, 2.0, 1e-12);
        assert!(r.passed);
        // K_A, K_B independent
        let sc = scenario(|i| if i[0] == i[1] { 0.125 } else { 0.0 });
        let r = sc.check_noiseless_explicit().unwrap();
        close(r.mutual_information, r.signal_entropy, 1e-12);
        close(r.knowledge, 0.0, 1e-12);
        // off-diagonal mass
        let sc = scenario(|_| 1.0 / 16.0);
        assert!(matches!(
            sc.check_noiseless_explicit(),
            Err(Error::OffSupport(_))
        ));
    }

    #[test]
    fn noiseless_implicit_shared_knowledge_equalities() {
        // K_A = K_B = S xor S_hat: K_A determined by the signals
        let sc = scenario(|i| {
            if i[2] == i[3] && i[2] == (i[0] ^ i[1]) {
                0.25
            } else {
                0.0
            }
        });
        let r = sc.check_noiseless_implicit().unwrap();
        assert!(r.forms_agree);
        // interaction here is negative, so the upper bound fails on this table
        assert!(r.sender_interaction < 0.0);
        assert!(!r.upper_bound_holds);

        // K_A = S: a function of the signals, yet I(T; T_hat) = I(S; S_hat) + H(K_A | S_hat)
        let noisy = |i: &[usize]| if i[0] == i[1] { 0.4 } else { 0.1 };
        let sc = scenario(|i| {
            if i[2] == i[3] && i[2] == i[0] {
                noisy(i)
            } else {
                0.0
            }
        });
        let r = sc.check_noiseless_implicit().unwrap();
        let h_k_given_s_hat = sc.table().conditional_entropy(&[K_A], &[S_HAT]).unwrap();
        close(r.mutual_information, r.signal + h_k_given_s_hat, 1e-12);
        assert!(r.mutual_information > r.signal + 0.5);

        // K_A determined by S and by S_hat separately (here constant): left equality
        let sc = scenario(|i| {
            if i[2] == 0 && i[3] == 0 {
                noisy(i)
            } else {
                0.0
            }
        });
        let r = sc.check_noiseless_implicit().unwrap();
        close(r.mutual_information, r.signal, 1e-12);
        assert!(r.lower_bound_holds && r.upper_bound_holds);

        // K_A independent of (S, S_hat): right equality
        let sc = scenario(|i| {
            let pss = if i[0] == i[1] { 0.4 } else { 0.1 };
            if i[2] == i[3] {
                pss * 0.5
            } else {
                0.0
            }
        });
        let r = sc.check_noiseless_implicit().unwrap();
        close(
            r.mutual_information,
            r.signal + r.sender_knowledge_entropy,
            1e-12,
        );
    }

    #[test]
    fn fano_examples() {
        let perfect = scenario(|i| {
            if i[0] == i[1] && i[2] == i[3] {
                0.25
            } else {
                0.0
            }
        });
        let dec = perfect.map_decoder();
        let r = perfect.check_fano(&dec).unwrap();
        close(r.success, 1.0, 1e-12);
        assert!(r.passed);

        let indep = scenario(|_| 1.0 / 16.0);
        let r = indep.check_fano(&indep.map_decoder()).unwrap();
        close(r.success, 0.25, 1e-12);
        assert!(r.passed);
        let sweep = indep.fano_exhaustive().unwrap();
        assert_eq!(sweep.decoders, 256);
        assert_eq!(sweep.violations, 0);
        close(sweep.best_success, 0.25, 1e-12);
        assert!(indep.check_fano(&[0, 1, 2]).is_err());
        assert!(indep.check_fano(&[0, 1, 2, 4]).is_err());
    }

    #[test]
    fn sampler_support_and_determinism() {
        let dims = ScenarioDims {
            signal_size: 2,
            knowledge_size: 3,
        };
        let a = sample_scenario::<f64>(dims, 5, ScenarioConstraint::Both).unwrap();
        a.table().for_each_cell(|i, p| {
            if i[0] != i[1] || i[2] != i[3] {
                assert_eq!(p, 0.0);
            }
        });
        let b = sample_scenario::<f64>(dims, 5, ScenarioConstraint::Both).unwrap();
        assert_eq!(a.table(), b.table());
        assert_eq!(a.encoder(), b.encoder());
        let c = sample_scenario::<f64>(dims, 6, ScenarioConstraint::Both).unwrap();
        assert_ne!(a.table(), c.table());
        assert!(sample_scenario::<f64>(
            ScenarioDims {
                signal_size: 9,
                knowledge_size: 9
            },
            0,
            ScenarioConstraint::None
        )
        .is_err());
    }

    fn uniform_components_shared_knowledge() -> JointTable<f64> {
        // S1, S2, KA1, KA2 uniform independent; KB = KA
        let probs = {
            let mut v = vec![0.0; 64];
            for_each_index(&[2; 6], |i, flat| {
                if i[2] == i[4] && i[3] == i[5] {
                    v[flat] = 1.0 / 16.0;
                }
            });
            v
        };
        component_table(2, 2, probs).unwrap()
    }

    #[test]
    fn expansion_gain_analytic_example() {
        let pair = expansion_pair(&uniform_components_shared_knowledge(), 0.5, 0.5, 1).unwrap();
        let g = expansion_gain(&pair.width1, &pair.width2).unwrap();
        close(g.gain, 2.0, 1e-12);
        close(g.gamma.unwrap(), 1.0, 1e-12);
        assert!(g.passed);
    }

    #[test]
    fn expansion_gain_without_shared_knowledge_is_rate_cost() {
        // knowledge independent across parties, deterministic dominance
        let t = component_table(2, 2, vec![1.0 / 64.0; 64]).unwrap();
        let pair = expansion_pair(&t, 0.0, 0.0, 2).unwrap();
        let g = expansion_gain(&pair.width1, &pair.width2).unwrap();
        close(g.gamma.unwrap(), 0.0, 1e-12);
        close(g.gain, g.rate_cost, 1e-12);
    }

    #[test]
    fn expansion_gain_undefined_ratio() {
        // S2 constant: no rate cost
        let mut probs = vec![0.0; 64];
        for_each_index(&[2; 6], |i, flat| {
            if i[1] == 0 {
                probs[flat] = 1.0 / 32.0;
            }
        });
        let t = component_table(2, 2, probs).unwrap();
        let pair = expansion_pair(&t, 0.5, 0.5, 3).unwrap();
        let g = expansion_gain(&pair.width1, &pair.width2).unwrap();
        assert!(g.gamma.is_none());
    }

    #[test]
    fn expansion_bounds_examples() {
        let pair = expansion_pair(&uniform_components_shared_knowledge(), 0.0, 0.0, 4).unwrap();
        let b = expansion_bounds(&pair.width2, 2).unwrap();
        close(b.lower, 1.0, 1e-12);
        close(b.mutual_information, 3.0, 1e-12);
        close(b.upper, 3.0, 1e-12);
        assert!(b.passed);

        let mut probs = vec![0.0; 64];
        for_each_index(&[2; 6], |i, flat| {
            if i[0] == 1 && i[1] == 0 {
                probs[flat] = 1.0 / 16.0;
            }
        });
        let pm = component_table(2, 2, probs).unwrap();
        let b = expansion_bounds(&expansion_pair(&pm, 0.5, 0.5, 4).unwrap().width2, 2).unwrap();
        close(b.lower, 0.0, 1e-15);
        assert!(b.passed);
    }

    #[test]
    fn single_precision_decomposition() {
        let sc = sample_scenario::<f32>(
            ScenarioDims {
                signal_size: 2,
                knowledge_size: 2,
            },
            8,
            ScenarioConstraint::None,
        )
        .unwrap();
        assert!(sc.decompose().unwrap().passed);
    }
}
