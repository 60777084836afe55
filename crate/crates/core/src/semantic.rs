//! Semantic expansion, knowledge collision and the semantic codebook.
//!
//! A width-`n` system expands `n` signal components into one composite signal
//! (mixed-radix packing, first component least significant) and collides `n`
//! knowledge components into one [`EffectiveKnowledge`]. Collision is a
//! dominance draw driven by latents shared by both parties: at step `k` the
//! running dominant component survives iff `v_k >= factor_k`, otherwise
//! component `k + 1` takes over. The effective knowledge is the dominant
//! component's value together with its index.
//!
//! The sender's encoder input is `(composite signal, effective knowledge)`;
//! the codebook maps it injectively to a semantic type. The receiver's state is
//! the same packing applied to its received signal and its own collision.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::prob::{for_each_index, Alphabet, JointTable};
use crate::real::Real;

/// Packs signal components into a composite index. `components[0]` is the
/// least significant digit.
pub fn expand(components: &[usize], radix: usize) -> Result<usize> {
    let mut out = 0usize;
    for &c in components.iter().rev() {
        if c >= radix {
            return Err(Error::SymbolOutOfRange {
                symbol: c,
                size: radix,
            });
        }
        out = out * radix + c;
    }
    Ok(out)
}

/// Inverse of [`expand`].
pub fn split(mut composite: usize, radix: usize, width: usize) -> Vec<usize> {
    (0..width)
        .map(|_| {
            let c = composite % radix;
            composite /= radix;
            c
        })
        .collect()
}

/// Output of a knowledge collision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EffectiveKnowledge {
    /// Value of the dominant component.
    pub value: usize,
    /// Index of the component that dominated.
    pub dominance: usize,
}

impl EffectiveKnowledge {
    /// Packs into `0..l_size * width` as `dominance * l_size + value`.
    pub fn index(&self, l_size: usize) -> usize {
        self.dominance * l_size + self.value
    }
}

fn dominance_of(factors: &[f64], latents: &[f64]) -> usize {
    let mut dominant = 0;
    for (k, (&f, &v)) in factors.iter().zip(latents).enumerate() {
        if v < f {
            dominant = k + 1;
        }
    }
    dominant
}

fn check_factors(factors: &[f64]) -> Result<()> {
    match factors.iter().find(|f| !(0.0..=1.0).contains(*f)) {
        Some(f) => Err(Error::InvalidParameter(format!(
            "collision factor {f} outside [0, 1]"
        ))),
        None => Ok(()),
    }
}

fn check_latents(latents: &[f64]) -> Result<()> {
    match latents.iter().find(|v| !(0.0..1.0).contains(*v)) {
        Some(v) => Err(Error::InvalidParameter(format!(
            "latent {v} outside [0, 1)"
        ))),
        None => Ok(()),
    }
}

/// Collides knowledge components left to right with one latent per step.
pub fn collide(
    components: &[usize],
    factors: &[f64],
    latents: &[f64],
) -> Result<EffectiveKnowledge> {
    if components.is_empty() {
        return Err(Error::InvalidParameter(
            "collision needs at least one component".into(),
        ));
    }
    let steps = components.len() - 1;
    if factors.len() != steps {
        return Err(Error::LengthMismatch {
            expected: steps,
            found: factors.len(),
        });
    }
    if latents.len() != steps {
        return Err(Error::LengthMismatch {
            expected: steps,
            found: latents.len(),
        });
    }
    check_factors(factors)?;
    check_latents(latents)?;
    let dominance = dominance_of(factors, latents);
    Ok(EffectiveKnowledge {
        value: components[dominance],
        dominance,
    })
}

/// Law of the dominance index under uniform latents.
pub fn dominance_distribution(factors: &[f64]) -> Vec<f64> {
    let n = factors.len() + 1;
    (0..n)
        .map(|d| {
            let take = if d == 0 { 1.0 } else { factors[d - 1] };
            take * factors[d..].iter().map(|f| 1.0 - f).product::<f64>()
        })
        .collect()
}

/// Joint law of `(sender dominance, receiver dominance)` when both collide
/// with the same latents. Returns every pair with positive probability.
pub fn coupled_dominance(alphas: &[f64], betas: &[f64]) -> Result<Vec<(usize, usize, f64)>> {
    if alphas.len() != betas.len() {
        return Err(Error::LengthMismatch {
            expected: alphas.len(),
            found: betas.len(),
        });
    }
    check_factors(alphas)?;
    check_factors(betas)?;
    let n = alphas.len() + 1;
    let mut law = vec![0.0; n * n];
    // Each step's latent falls in one of four events: below both factors,
    // below only one (two cases), or above both.
    let steps = alphas.len();
    let mut events = vec![0usize; steps];
    for_each_index(&vec![4; steps], |idx, _| {
        events.copy_from_slice(idx);
        let mut p = 1.0;
        let (mut da, mut db) = (0, 0);
        for (k, &e) in events.iter().enumerate() {
            let (a, b) = (alphas[k], betas[k]);
            let (pa, pb, w) = match e {
                0 => (true, true, a.min(b)),
                1 => (true, false, (a - b).max(0.0)),
                2 => (false, true, (b - a).max(0.0)),
                _ => (false, false, 1.0 - a.max(b)),
            };
            p *= w;
            if pa {
                da = k + 1;
            }
            if pb {
                db = k + 1;
            }
        }
        law[da * n + db] += p;
    });
    Ok((0..n * n)
        .filter(|&i| law[i] > 0.0)
        .map(|i| (i / n, i % n, law[i]))
        .collect())
}

/// Injective map from encoder inputs to semantic types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codebook {
    t_size: usize,
    map: Vec<usize>,
}

impl Codebook {
    pub fn from_map(map: Vec<usize>, t_size: usize) -> Result<Self> {
        let mut owner = vec![usize::MAX; t_size];
        for (input, &t) in map.iter().enumerate() {
            if t >= t_size {
                return Err(Error::SymbolOutOfRange {
                    symbol: t,
                    size: t_size,
                });
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
        Ok(Self { t_size, map })
    }

    pub fn identity(inputs: usize, t_size: usize) -> Result<Self> {
        Self::from_map((0..inputs).collect(), t_size)
    }

    /// Uniformly random injection of `0..inputs` into `0..t_size`.
    pub fn random<R: Rng + ?Sized>(inputs: usize, t_size: usize, rng: &mut R) -> Result<Self> {
        if inputs > t_size {
            return Err(Error::InvalidParameter(format!(
                "{inputs} encoder inputs cannot map injectively into {t_size} types"
            )));
        }
        let mut types: Vec<usize> = (0..t_size).collect();
        types.shuffle(rng);
        types.truncate(inputs);
        Self::from_map(types, t_size)
    }

    pub fn t_size(&self) -> usize {
        self.t_size
    }

    pub fn inputs(&self) -> usize {
        self.map.len()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn lookup(&self, input: usize) -> Result<usize> {
        self.map
            .get(input)
            .copied()
            .ok_or(Error::CodebookMiss(input))
    }

    /// One `input type` pair per line, ascending by input.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (i, t) in self.map.iter().enumerate() {
            let _ = writeln!(s, "{i} {t}");
        }
        s
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_text().as_bytes())?;
        Ok(())
    }

    /// Parses the text form. Lines may come in any order but must cover every
    /// input `0..n` exactly once; blank lines and `#` comments are skipped.
    pub fn read_from<R: BufRead>(r: R, t_size: usize) -> Result<Self> {
        let mut pairs = Vec::new();
        for (n, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |reason: &str| Error::CodebookParse {
                line: n + 1,
                reason: reason.to_string(),
            };
            let mut it = line.split_whitespace();
            let input = it
                .next()
                .and_then(|x| x.parse::<usize>().ok())
                .ok_or_else(|| bad("bad input index"))?;
            let t = it
                .next()
                .and_then(|x| x.parse::<usize>().ok())
                .ok_or_else(|| bad("bad type index"))?;
            if it.next().is_some() {
                return Err(bad("trailing fields"));
            }
            pairs.push((input, t, n + 1));
        }
        let mut map = vec![usize::MAX; pairs.len()];
        for (input, t, line) in pairs {
            if input >= map.len() || map[input] != usize::MAX {
                return Err(Error::CodebookParse {
                    line,
                    reason: format!("input {input} duplicated or out of range"),
                });
            }
            map[input] = t;
        }
        Self::from_map(map, t_size)
    }
}

/// Dimensions and collision factors of a semantic system.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemParams {
    pub width: usize,
    pub signal_size: usize,
    pub knowledge_size: usize,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    /// Defaults to `max(L^2 M^2, reachable encoder inputs)`.
    pub t_size: Option<usize>,
}

impl SystemParams {
    /// Width-1 system (no expansion or collision).
    pub fn basic(signal_size: usize, knowledge_size: usize) -> Self {
        Self {
            width: 1,
            signal_size,
            knowledge_size,
            alphas: vec![],
            betas: vec![],
            t_size: None,
        }
    }

    /// Width-2 system with sender factor `alpha` and receiver factor `beta`.
    pub fn expanded(signal_size: usize, knowledge_size: usize, alpha: f64, beta: f64) -> Self {
        Self {
            width: 2,
            signal_size,
            knowledge_size,
            alphas: vec![alpha],
            betas: vec![beta],
            t_size: None,
        }
    }

    pub fn composite_size(&self) -> usize {
        self.signal_size.pow(self.width as u32)
    }

    pub fn knowledge_states(&self) -> usize {
        self.knowledge_size * self.width
    }

    /// Number of distinct encoder inputs (equivalently, receiver states).
    pub fn encoder_inputs(&self) -> usize {
        self.composite_size() * self.knowledge_states()
    }

    pub fn default_t_size(&self) -> usize {
        let (m, l) = (self.signal_size, self.knowledge_size);
        (l * l * m * m).max(self.encoder_inputs())
    }

    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.signal_size == 0 || self.knowledge_size == 0 {
            return Err(Error::InvalidParameter(
                "width and alphabet sizes must be positive".into(),
            ));
        }
        for (name, f) in [("alphas", &self.alphas), ("betas", &self.betas)] {
            if f.len() != self.width - 1 {
                return Err(Error::InvalidParameter(format!(
                    "{name} needs {} entries for width {}, got {}",
                    self.width - 1,
                    self.width,
                    f.len()
                )));
            }
            check_factors(f)?;
        }
        if let Some(t) = self.t_size {
            if t < self.encoder_inputs() {
                return Err(Error::InvalidParameter(format!(
                    "t_size {t} is smaller than the {} reachable encoder inputs",
                    self.encoder_inputs()
                )));
            }
        }
        Ok(())
    }
}

/// One round's realized signal, knowledge and latent values.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundContext {
    pub signals: Vec<usize>,
    pub sender_knowledge: Vec<usize>,
    pub receiver_knowledge: Vec<usize>,
    /// One latent per collision step, each in `[0, 1)`.
    pub latents: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SemanticSystem {
    params: SystemParams,
    t_size: usize,
    codebook: Codebook,
}

impl SemanticSystem {
    pub fn new(params: SystemParams, codebook: Codebook) -> Result<Self> {
        params.validate()?;
        let t_size = params.t_size.unwrap_or_else(|| params.default_t_size());
        if codebook.t_size() != t_size {
            return Err(Error::InvalidParameter(format!(
                "codebook targets {} types, system has {t_size}",
                codebook.t_size()
            )));
        }
        if codebook.inputs() != params.encoder_inputs() {
            return Err(Error::LengthMismatch {
                expected: params.encoder_inputs(),
                found: codebook.inputs(),
            });
        }
        Ok(Self {
            params,
            t_size,
            codebook,
        })
    }

    pub fn with_identity_codebook(params: SystemParams) -> Result<Self> {
        params.validate()?;
        let t = params.t_size.unwrap_or_else(|| params.default_t_size());
        let cb = Codebook::identity(params.encoder_inputs(), t)?;
        Self::new(params, cb)
    }

    pub fn with_random_codebook<R: Rng + ?Sized>(
        params: SystemParams,
        rng: &mut R,
    ) -> Result<Self> {
        params.validate()?;
        let t = params.t_size.unwrap_or_else(|| params.default_t_size());
        let cb = Codebook::random(params.encoder_inputs(), t, rng)?;
        Self::new(params, cb)
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn width(&self) -> usize {
        self.params.width
    }

    pub fn t_size(&self) -> usize {
        self.t_size
    }

    pub fn codebook(&self) -> &Codebook {
        &self.codebook
    }

    pub fn receiver_states(&self) -> usize {
        self.params.encoder_inputs()
    }

    fn check_width(&self, what: &str, len: usize) -> Result<()> {
        if len != self.params.width {
            return Err(Error::InvalidParameter(format!(
                "{what} has {len} components, system width is {}",
                self.params.width
            )));
        }
        Ok(())
    }

    fn pack(
        &self,
        signals: &[usize],
        knowledge: &[usize],
        factors: &[f64],
        latents: &[f64],
    ) -> Result<usize> {
        self.check_width("signal", signals.len())?;
        self.check_width("knowledge", knowledge.len())?;
        let l = self.params.knowledge_size;
        if let Some(&k) = knowledge.iter().find(|&&k| k >= l) {
            return Err(Error::SymbolOutOfRange { symbol: k, size: l });
        }
        let composite = expand(signals, self.params.signal_size)?;
        let eff = collide(knowledge, factors, latents)?;
        Ok(composite * self.params.knowledge_states() + eff.index(l))
    }

    /// Index of the sender's `(composite signal, effective knowledge)` pair.
    pub fn encoder_input(&self, ctx: &RoundContext) -> Result<usize> {
        self.pack(
            &ctx.signals,
            &ctx.sender_knowledge,
            &self.params.alphas,
            &ctx.latents,
        )
    }

    /// Semantic type generated by the sender.
    pub fn encode(&self, ctx: &RoundContext) -> Result<usize> {
        let input = self.encoder_input(ctx)?;
        self.codebook.lookup(input)
    }

    /// Receiver state from the received signal components, the receiver's
    /// knowledge components and the shared latents.
    pub fn receiver_state(
        &self,
        received: &[usize],
        knowledge: &[usize],
        latents: &[f64],
    ) -> Result<usize> {
        self.pack(received, knowledge, &self.params.betas, latents)
    }

    /// Measure of comprehension and interpretation: entropy of the
    /// (composite signal, sender effective knowledge) pair. The latents are
    /// integrated out exactly; dominance is independent of the components.
    pub fn mci<F: Real>(
        &self,
        joint: &JointTable<F>,
        signal_labels: &[&str],
        knowledge_labels: &[&str],
    ) -> Result<F> {
        self.check_width("signal label list", signal_labels.len())?;
        self.check_width("knowledge label list", knowledge_labels.len())?;
        let sig_pos = signal_labels
            .iter()
            .map(|l| joint.position(l))
            .collect::<Result<Vec<_>>>()?;
        let kn_pos = knowledge_labels
            .iter()
            .map(|l| joint.position(l))
            .collect::<Result<Vec<_>>>()?;
        let (m, l) = (self.params.signal_size, self.params.knowledge_size);
        for (&p, name) in sig_pos
            .iter()
            .zip(signal_labels)
            .chain(kn_pos.iter().zip(knowledge_labels))
        {
            let want = if sig_pos.contains(&p) { m } else { l };
            let have = joint.alphabets()[p].size();
            if have != want {
                return Err(Error::InvalidParameter(format!(
                    "variable `{name}` has {have} symbols, expected {want}"
                )));
            }
        }
        let dominance: Vec<F> = dominance_distribution(&self.params.alphas)
            .into_iter()
            .map(F::lit)
            .collect();
        let ks = self.params.knowledge_states();
        let mut probs = vec![F::zero(); self.params.composite_size() * ks];
        let mut sig = vec![0; self.params.width];
        let mut bad = None;
        joint.for_each_cell(|idx, p| {
            for (s, &pos) in sig.iter_mut().zip(&sig_pos) {
                *s = idx[pos];
            }
            let composite = match expand(&sig, m) {
                Ok(c) => c,
                Err(e) => {
                    bad = Some(e);
                    return;
                }
            };
            for (d, &pd) in dominance.iter().enumerate() {
                let eff = EffectiveKnowledge {
                    value: idx[kn_pos[d]],
                    dominance: d,
                };
                let cell = composite * ks + eff.index(l);
                probs[cell] = probs[cell] + p * pd;
            }
        });
        if let Some(e) = bad {
            return Err(e);
        }
        let table = JointTable::new(
            [
                (
                    "S",
                    Alphabet::new("composite signal", self.params.composite_size())?,
                ),
                ("K", Alphabet::new("effective knowledge", ks)?),
            ],
            probs,
        )?;
        table.entropy(&["S", "K"])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use rand::Rng;

    #[test]
    fn expand_examples() {
        assert_eq!(expand(&[0, 0], 2).unwrap(), 0);
        assert_eq!(expand(&[1, 0], 2).unwrap(), 1);
        assert_eq!(expand(&[0, 1], 2).unwrap(), 2);
        assert_eq!(expand(&[1, 1], 2).unwrap(), 3);
        assert_eq!(expand(&[1, 1, 1], 2).unwrap(), 7);
        assert!(matches!(
            expand(&[2, 0], 2),
            Err(Error::SymbolOutOfRange { symbol: 2, size: 2 })
        ));
        assert_eq!(split(expand(&[2, 0, 1], 3).unwrap(), 3, 3), vec![2, 0, 1]);
    }

    #[test]
    fn collide_extreme_factors() {
        for v in [0.0, 0.3, 0.999] {
            assert_eq!(
                collide(&[1, 0], &[0.0], &[v]).unwrap(),
                EffectiveKnowledge {
                    value: 1,
                    dominance: 0
                }
            );
            assert_eq!(
                collide(&[1, 0], &[1.0], &[v]).unwrap(),
                EffectiveKnowledge {
                    value: 0,
                    dominance: 1
                }
            );
        }
    }

    #[test]
    fn collide_half_factor_splits_evenly() {
        let mut rng = substream(21, &[]);
        let n = 100_000;
        let second = (0..n)
            .filter(|_| {
                collide(&[0, 1], &[0.5], &[rng.random::<f64>()])
                    .unwrap()
                    .dominance
                    == 1
            })
            .count();
        let frac = second as f64 / n as f64;
        assert!((frac - 0.5).abs() < 0.01, "{frac}");
    }

    #[test]
    fn collide_left_associative() {
        // step 0 flips to component 1, step 1 keeps it
        let e = collide(&[5, 6, 7], &[0.5, 0.5], &[0.1, 0.9]).unwrap();
        assert_eq!(
            e,
            EffectiveKnowledge {
                value: 6,
                dominance: 1
            }
        );
        let e = collide(&[5, 6, 7], &[0.5, 0.5], &[0.9, 0.1]).unwrap();
        assert_eq!(e.dominance, 2);
    }

    #[test]
    fn collide_length_errors() {
        assert!(matches!(
            collide(&[0, 1], &[], &[0.1]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            collide(&[0, 1], &[0.3], &[]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(collide(&[0, 1], &[0.3], &[1.0]).is_err());
        assert!(collide(&[0, 1], &[1.3], &[0.2]).is_err());
    }

    #[test]
    fn dominance_laws() {
        let d = dominance_distribution(&[0.5, 0.25]);
        assert_eq!(d, vec![0.375, 0.375, 0.25]);
        let c = coupled_dominance(&[0.5], &[0.25]).unwrap();
        assert_eq!(c, vec![(0, 0, 0.5), (1, 0, 0.25), (1, 1, 0.25)]);
        let same = coupled_dominance(&[0.4], &[0.4]).unwrap();
        assert!(same.iter().all(|&(a, b, _)| a == b));
    }

    #[test]
    fn default_encoder_space_is_sixteen() {
        let p = SystemParams::expanded(2, 2, 0.5, 0.5);
        assert_eq!(p.encoder_inputs(), 16);
        assert_eq!(p.default_t_size(), 16);
        let sys = SemanticSystem::with_random_codebook(p, &mut substream(1, &[])).unwrap();
        let mut seen = std::collections::HashSet::new();
        for s1 in 0..2 {
            for s2 in 0..2 {
                for k1 in 0..2 {
                    for k2 in 0..2 {
                        for v in [0.1, 0.9] {
                            let ctx = RoundContext {
                                signals: vec![s1, s2],
                                sender_knowledge: vec![k1, k2],
                                receiver_knowledge: vec![k1, k2],
                                latents: vec![v],
                            };
                            seen.insert(sys.encode(&ctx).unwrap());
                        }
                    }
                }
            }
        }
        assert_eq!(seen.len(), 16);
    }

    #[test]
    fn identity_codebook_zero_context() {
        let sys =
            SemanticSystem::with_identity_codebook(SystemParams::expanded(2, 2, 0.0, 0.0)).unwrap();
        let ctx = RoundContext {
            signals: vec![0, 0],
            sender_knowledge: vec![0, 0],
            receiver_knowledge: vec![0, 0],
            latents: vec![0.3],
        };
        assert_eq!(sys.encode(&ctx).unwrap(), 0);
    }

    #[test]
    fn basic_model_keeps_large_type_alphabet() {
        let p = SystemParams::basic(2, 2);
        assert_eq!(p.encoder_inputs(), 4);
        assert_eq!(p.default_t_size(), 16);
        let mut tight = p.clone();
        tight.t_size = Some(3);
        assert!(tight.validate().is_err());
    }

    #[test]
    fn receiver_state_coupling() {
        let sys =
            SemanticSystem::with_identity_codebook(SystemParams::expanded(2, 2, 0.5, 0.5)).unwrap();
        let ctx = RoundContext {
            signals: vec![1, 0],
            sender_knowledge: vec![0, 1],
            receiver_knowledge: vec![0, 1],
            latents: vec![0.3],
        };
        let state = sys
            .receiver_state(&ctx.signals, &ctx.receiver_knowledge, &ctx.latents)
            .unwrap();
        assert_eq!(state, sys.encoder_input(&ctx).unwrap());

        // beta = alpha / 2, latent between them: sender flips, receiver does not
        let half = SemanticSystem::with_identity_codebook(SystemParams::expanded(2, 2, 0.5, 0.25))
            .unwrap();
        let v = [0.4];
        let a = collide(&[0, 1], &half.params().alphas, &v).unwrap();
        let b = collide(&[0, 1], &half.params().betas, &v).unwrap();
        assert_ne!(a.dominance, b.dominance);
    }

    #[test]
    fn encode_rejects_inconsistent_context() {
        let sys =
            SemanticSystem::with_identity_codebook(SystemParams::expanded(2, 2, 0.5, 0.5)).unwrap();
        let ctx = RoundContext {
            signals: vec![0],
            sender_knowledge: vec![0, 0],
            receiver_knowledge: vec![0, 0],
            latents: vec![0.1],
        };
        assert!(sys.encode(&ctx).is_err());
        let ctx = RoundContext {
            signals: vec![0, 0],
            sender_knowledge: vec![0, 2],
            ..ctx
        };
        assert!(matches!(
            sys.encode(&ctx),
            Err(Error::SymbolOutOfRange { .. })
        ));
    }

    #[test]
    fn codebook_text_round_trip_and_errors() {
        let cb = Codebook::random(8, 16, &mut substream(4, &[])).unwrap();
        let text = cb.to_text();
        assert_eq!(text.lines().count(), 8);
        assert_eq!(Codebook::read_from(text.as_bytes(), 16).unwrap(), cb);
        assert!(Codebook::read_from("0 1\n1 1\n".as_bytes(), 4).is_err());
        assert!(Codebook::read_from("0 1\n2 3\n".as_bytes(), 4).is_err());
        assert!(Codebook::read_from("0 x\n".as_bytes(), 4).is_err());
        assert!(Codebook::read_from("0 9\n".as_bytes(), 4).is_err());
        assert_eq!(
            Codebook::read_from("# audit\n1 0\n\n0 3\n".as_bytes(), 4)
                .unwrap()
                .as_slice(),
            &[3, 0]
        );
        assert!(matches!(cb.lookup(8), Err(Error::CodebookMiss(8))));
    }

    fn four_bits_uniform() -> JointTable<f64> {
        let b = |n: &str| (n.to_string(), Alphabet::new(n, 2).unwrap());
        JointTable::uniform([b("S1"), b("S2"), b("K1"), b("K2")]).unwrap()
    }

    #[test]
    fn mci_examples() {
        let j = four_bits_uniform();
        let sys0 =
            SemanticSystem::with_identity_codebook(SystemParams::expanded(2, 2, 0.0, 0.0)).unwrap();
        let h = sys0.mci(&j, &["S1", "S2"], &["K1", "K2"]).unwrap();
        assert!((h - 3.0).abs() < 1e-12);
        let sys5 =
            SemanticSystem::with_identity_codebook(SystemParams::expanded(2, 2, 0.5, 0.5)).unwrap();
        let h = sys5.mci(&j, &["S1", "S2"], &["K1", "K2"]).unwrap();
        assert!((h - 4.0).abs() < 1e-12);

        let b = |n: &str| (n.to_string(), Alphabet::new(n, 2).unwrap());
        let pm = JointTable::<f64>::point_mass([b("S1"), b("S2"), b("K1"), b("K2")], &[1, 0, 1, 1])
            .unwrap();
        assert_eq!(sys0.mci(&pm, &["S1", "S2"], &["K1", "K2"]).unwrap(), 0.0);
        assert!(sys0.mci(&pm, &["S1"], &["K1", "K2"]).is_err());
    }
}
