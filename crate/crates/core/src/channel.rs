//! Explicit (physical) and implicit (knowledge) channel models.
//!
//! Both are discrete memoryless channels given by a row-stochastic transition
//! matrix. The explicit channel is a binary symmetric channel with crossover
//! `epsilon1`; the implicit channel keeps the sender's knowledge symbol with
//! probability `1 - epsilon2` and otherwise replaces it by an independent
//! uniform draw, so the replacement can coincide with the original.

use rand::Rng;

use crate::error::{Error, Result};
use crate::prob::{Alphabet, JointTable};
use crate::real::Real;

/// Row-stochastic transition matrix `p(y | x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteChannel<F> {
    input: Alphabet,
    output: Alphabet,
    transitions: Vec<F>,
}

impl<F: Real> DiscreteChannel<F> {
    pub fn new(input: Alphabet, output: Alphabet, rows: Vec<Vec<F>>) -> Result<Self> {
        if rows.len() != input.size() {
            return Err(Error::LengthMismatch {
                expected: input.size(),
                found: rows.len(),
            });
        }
        let mut transitions = Vec::with_capacity(input.size() * output.size());
        for (x, row) in rows.into_iter().enumerate() {
            if row.len() != output.size() {
                return Err(Error::LengthMismatch {
                    expected: output.size(),
                    found: row.len(),
                });
            }
            if row.iter().any(|&w| !(w >= F::zero() && w <= F::one())) {
                return Err(Error::InvalidChannel(format!(
                    "row {x} has an entry outside [0, 1]"
                )));
            }
            let total: F = row.iter().copied().sum();
            if (total.as_f64() - 1.0).abs() > F::NORM_TOL {
                return Err(Error::InvalidChannel(format!("row {x} sums to {total}")));
            }
            transitions.extend(row);
        }
        Ok(Self {
            input,
            output,
            transitions,
        })
    }

    pub fn input(&self) -> &Alphabet {
        &self.input
    }

    pub fn output(&self) -> &Alphabet {
        &self.output
    }

    /// Transition probabilities out of input symbol `x`.
    pub fn row(&self, x: usize) -> &[F] {
        let n = self.output.size();
        &self.transitions[x * n..(x + 1) * n]
    }

    /// Draws one output symbol for `symbol`. No state is kept between calls.
    pub fn transmit<R: Rng + ?Sized>(&self, symbol: usize, rng: &mut R) -> Result<usize> {
        if symbol >= self.input.size() {
            return Err(Error::SymbolOutOfRange {
                symbol,
                size: self.input.size(),
            });
        }
        let row = self.row(symbol);
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut last_supported = 0;
        for (y, &w) in row.iter().enumerate() {
            let w = w.as_f64();
            if w > 0.0 {
                last_supported = y;
                acc += w;
                if u < acc {
                    return Ok(y);
                }
            }
        }
        // u landed in the rounding gap at the top of the row
        Ok(last_supported)
    }

    /// Transmits each component of a composite signal independently.
    pub fn transmit_all<R: Rng + ?Sized>(
        &self,
        symbols: &[usize],
        rng: &mut R,
    ) -> Result<Vec<usize>> {
        symbols.iter().map(|&s| self.transmit(s, rng)).collect()
    }

    /// Joint `p(x, y) = p(x) p(y | x)` over the input variable of `input_dist`
    /// and a new output variable named `output_label`.
    pub fn joint_of(
        &self,
        input_dist: &JointTable<F>,
        output_label: &str,
    ) -> Result<JointTable<F>> {
        if input_dist.labels().len() != 1 {
            return Err(Error::LengthMismatch {
                expected: 1,
                found: input_dist.labels().len(),
            });
        }
        let in_alpha = &input_dist.alphabets()[0];
        if in_alpha.size() != self.input.size() {
            return Err(Error::AlphabetMismatch {
                expected: self.input.size(),
                found: in_alpha.size(),
            });
        }
        let vars = [
            (input_dist.labels()[0].clone(), in_alpha.clone()),
            (output_label.to_string(), self.output.clone()),
        ];
        let px = input_dist.probs();
        JointTable::from_fn(vars, |i| px[i[0]] * self.row(i[0])[i[1]])
    }
}

fn check_probability(name: &str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must lie in [0, 1], got {value}"
        )))
    }
}

/// Crossover probability of the binary symmetric explicit channel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExplicitChannelSpec {
    epsilon1: f64,
}

impl ExplicitChannelSpec {
    pub fn new(epsilon1: f64) -> Result<Self> {
        check_probability("epsilon1", epsilon1)?;
        Ok(Self { epsilon1 })
    }

    pub fn epsilon1(&self) -> f64 {
        self.epsilon1
    }
}

/// Redraw probability and alphabet size of the implicit knowledge channel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImplicitChannelSpec {
    epsilon2: f64,
    l_size: usize,
}

impl ImplicitChannelSpec {
    pub fn new(epsilon2: f64, l_size: usize) -> Result<Self> {
        check_probability("epsilon2", epsilon2)?;
        if l_size == 0 {
            return Err(Error::InvalidParameter(
                "knowledge alphabet must be non-empty".into(),
            ));
        }
        Ok(Self { epsilon2, l_size })
    }

    pub fn epsilon2(&self) -> f64 {
        self.epsilon2
    }

    pub fn l_size(&self) -> usize {
        self.l_size
    }

    /// `P(K_B = K_A) = 1 - epsilon2 + epsilon2 / L`.
    pub fn agreement_probability(&self) -> f64 {
        1.0 - self.epsilon2 + self.epsilon2 / self.l_size as f64
    }
}

/// Binary symmetric channel `[[1-e, e], [e, 1-e]]`.
pub fn make_bsc<F: Real>(spec: ExplicitChannelSpec) -> DiscreteChannel<F> {
    make_symmetric(2, spec.epsilon1).expect("valid BSC spec")
}

/// `m`-ary symmetric channel: keeps the symbol with probability `1 - e` and
/// moves to each other symbol with probability `e / (m - 1)`. Equals the BSC
/// for `m = 2`.
pub fn make_symmetric<F: Real>(m: usize, epsilon: f64) -> Result<DiscreteChannel<F>> {
    check_probability("epsilon", epsilon)?;
    if m == 0 {
        return Err(Error::InvalidParameter(
            "channel alphabet must be non-empty".into(),
        ));
    }
    if m == 1 {
        let a = Alphabet::new("signal", 1)?;
        return DiscreteChannel::new(a.clone(), a, vec![vec![F::one()]]);
    }
    let e = F::lit(epsilon);
    let keep = F::one() - e;
    let off = e / F::lit((m - 1) as f64);
    let rows = (0..m)
        .map(|x| (0..m).map(|y| if x == y { keep } else { off }).collect())
        .collect();
    let a = Alphabet::new("signal", m)?;
    DiscreteChannel::new(a.clone(), a, rows)
}

/// Implicit knowledge channel: diagonal `1 - e + e/L`, off-diagonal `e/L`.
pub fn make_implicit<F: Real>(spec: ImplicitChannelSpec) -> DiscreteChannel<F> {
    let l = spec.l_size;
    let e = F::lit(spec.epsilon2);
    let redraw = e / F::lit(l as f64);
    let keep = F::one() - e + redraw;
    let rows = (0..l)
        .map(|x| (0..l).map(|y| if x == y { keep } else { redraw }).collect())
        .collect();
    let a = Alphabet::new("knowledge", l).expect("non-empty");
    DiscreteChannel::new(a.clone(), a, rows).expect("implicit channel rows are stochastic")
}
