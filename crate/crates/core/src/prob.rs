//! Exact discrete probability engine.
//!
//! A [`JointTable`] is a probability tensor over named variables with finite
//! alphabets. Every information quantity in the crate (entropies, mutual and
//! conditional mutual information, interaction information, the Fano-type
//! agreement bound) is evaluated exactly on such tables, in bits.
//!
//! Cells are laid out row-major: the last variable varies fastest.

use serde::{Deserialize, Serialize};

use crate::channel::DiscreteChannel;
use crate::error::{Error, Result};
use crate::real::{surprisal_term, Real};

/// A finite alphabet; symbols are the indices `0..size`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    name: String,
    size: usize,
}

impl Alphabet {
    pub fn new(name: impl Into<String>, size: usize) -> Result<Self> {
        let name = name.into();
        if size == 0 {
            return Err(Error::InvalidParameter(format!(
                "alphabet `{name}` must have at least one symbol"
            )));
        }
        Ok(Self { name, size })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }
}

/// A labelled information quantity, in bits.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InfoReport {
    pub quantity: String,
    pub value: f64,
}

impl InfoReport {
    pub fn new(quantity: impl Into<String>, value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::InvalidParameter(
                "information value is not finite".into(),
            ));
        }
        Ok(Self {
            quantity: quantity.into(),
            value,
        })
    }
}

/// Calls `f` with every multi-index of a tensor of the given shape, in
/// row-major order, together with its flat offset.
pub fn for_each_index(sizes: &[usize], mut f: impl FnMut(&[usize], usize)) {
    let total: usize = sizes.iter().product();
    let mut idx = vec![0usize; sizes.len()];
    for flat in 0..total {
        f(&idx, flat);
        for d in (0..sizes.len()).rev() {
            idx[d] += 1;
            if idx[d] < sizes[d] {
                break;
            }
            idx[d] = 0;
        }
    }
}

/// Joint probability mass function over named finite variables.
#[derive(Clone, Debug, PartialEq)]
pub struct JointTable<F> {
    labels: Vec<String>,
    alphabets: Vec<Alphabet>,
    probs: Vec<F>,
}

impl<F: Real> JointTable<F> {
    /// Builds a table, rejecting negative entries and totals further than the
    /// scalar's normalization tolerance from one. Inputs are never renormalized.
    pub fn new<L, I>(vars: I, probs: Vec<F>) -> Result<Self>
    where
        L: Into<String>,
        I: IntoIterator<Item = (L, Alphabet)>,
    {
        let (labels, alphabets): (Vec<String>, Vec<Alphabet>) =
            vars.into_iter().map(|(l, a)| (l.into(), a)).unzip();
        if labels.is_empty() {
            return Err(Error::EmptyVariableSet);
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateVariable(l.clone()));
            }
        }
        let cells: usize = alphabets.iter().map(Alphabet::size).product();
        if probs.len() != cells {
            return Err(Error::LengthMismatch {
                expected: cells,
                found: probs.len(),
            });
        }
        let mut total = F::zero();
        for &p in &probs {
            if !p.is_finite() || p < F::zero() {
                return Err(Error::InvalidTable(format!(
                    "entry {p} is not a probability"
                )));
            }
            total = total + p;
        }
        if (total.as_f64() - 1.0).abs() > F::NORM_TOL {
            return Err(Error::InvalidTable(format!(
                "entries sum to {total}, not 1"
            )));
        }
        Ok(Self {
            labels,
            alphabets,
            probs,
        })
    }

    /// Builds a table by evaluating `f` at every multi-index.
    pub fn from_fn<L, I>(vars: I, mut f: impl FnMut(&[usize]) -> F) -> Result<Self>
    where
        L: Into<String>,
        I: IntoIterator<Item = (L, Alphabet)>,
    {
        let vars: Vec<(String, Alphabet)> = vars.into_iter().map(|(l, a)| (l.into(), a)).collect();
        let sizes: Vec<usize> = vars.iter().map(|(_, a)| a.size()).collect();
        let mut probs = vec![F::zero(); sizes.iter().product()];
        for_each_index(&sizes, |idx, flat| probs[flat] = f(idx));
        Self::new(vars, probs)
    }

    pub fn uniform<L, I>(vars: I) -> Result<Self>
    where
        L: Into<String>,
        I: IntoIterator<Item = (L, Alphabet)>,
    {
        let vars: Vec<(String, Alphabet)> = vars.into_iter().map(|(l, a)| (l.into(), a)).collect();
        let cells: usize = vars.iter().map(|(_, a)| a.size()).product();
        let p = F::one() / F::lit(cells as f64);
        Self::new(vars, vec![p; cells])
    }

    pub fn point_mass<L, I>(vars: I, at: &[usize]) -> Result<Self>
    where
        L: Into<String>,
        I: IntoIterator<Item = (L, Alphabet)>,
    {
        Self::from_fn(vars, |idx| if idx == at { F::one() } else { F::zero() })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn alphabets(&self) -> &[Alphabet] {
        &self.alphabets
    }

    pub fn alphabet(&self, label: &str) -> Result<&Alphabet> {
        Ok(&self.alphabets[self.position(label)?])
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.alphabets.iter().map(Alphabet::size).collect()
    }

    pub fn probs(&self) -> &[F] {
        &self.probs
    }

    pub fn flat_index(&self, idx: &[usize]) -> Result<usize> {
        if idx.len() != self.labels.len() {
            return Err(Error::LengthMismatch {
                expected: self.labels.len(),
                found: idx.len(),
            });
        }
        let mut flat = 0;
        for (&i, a) in idx.iter().zip(&self.alphabets) {
            if i >= a.size() {
                return Err(Error::SymbolOutOfRange {
                    symbol: i,
                    size: a.size(),
                });
            }
            flat = flat * a.size() + i;
        }
        Ok(flat)
    }

    pub fn prob(&self, idx: &[usize]) -> Result<F> {
        Ok(self.probs[self.flat_index(idx)?])
    }

    /// Visits every cell with its multi-index and probability.
    pub fn for_each_cell(&self, mut f: impl FnMut(&[usize], F)) {
        for_each_index(&self.sizes(), |idx, flat| f(idx, self.probs[flat]));
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownVariable(label.to_string()))
    }

    fn positions(&self, labels: &[&str]) -> Result<Vec<usize>> {
        if labels.is_empty() {
            return Err(Error::EmptyVariableSet);
        }
        let mut out = Vec::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateVariable(l.to_string()));
            }
            out.push(self.position(l)?);
        }
        Ok(out)
    }

    /// Marginal probabilities over the variables at `pos`, laid out row-major
    /// in the order given.
    fn marginal_probs(&self, pos: &[usize]) -> Vec<F> {
        let sizes = self.sizes();
        let out_sizes: Vec<usize> = pos.iter().map(|&p| sizes[p]).collect();
        let mut out = vec![F::zero(); out_sizes.iter().product()];
        for_each_index(&sizes, |idx, flat| {
            let mut o = 0;
            for (&p, &s) in pos.iter().zip(&out_sizes) {
                o = o * s + idx[p];
            }
            out[o] = out[o] + self.probs[flat];
        });
        out
    }

    /// Sums out every variable not in `keep`. Retained variables stay in table
    /// order.
    pub fn marginalize(&self, keep: &[&str]) -> Result<Self> {
        let mut pos = self.positions(keep)?;
        pos.sort_unstable();
        let probs = self.marginal_probs(&pos);
        let vars: Vec<(String, Alphabet)> = pos
            .iter()
            .map(|&p| (self.labels[p].clone(), self.alphabets[p].clone()))
            .collect();
        Self::new(vars, probs)
    }

    /// Distribution of a function of the table's variables. `f` receives a
    /// cell's multi-index and writes the multi-index of its image.
    pub fn pushforward<L, I>(
        &self,
        vars: I,
        mut f: impl FnMut(&[usize], &mut [usize]),
    ) -> Result<Self>
    where
        L: Into<String>,
        I: IntoIterator<Item = (L, Alphabet)>,
    {
        let vars: Vec<(String, Alphabet)> = vars.into_iter().map(|(l, a)| (l.into(), a)).collect();
        let out_sizes: Vec<usize> = vars.iter().map(|(_, a)| a.size()).collect();
        let mut probs = vec![F::zero(); out_sizes.iter().product()];
        let mut image = vec![0usize; out_sizes.len()];
        let mut bad = None;
        self.for_each_cell(|idx, p| {
            f(idx, &mut image);
            let mut o = 0;
            for (&i, &s) in image.iter().zip(&out_sizes) {
                if i >= s {
                    bad = Some(Error::SymbolOutOfRange { symbol: i, size: s });
                    return;
                }
                o = o * s + i;
            }
            probs[o] = probs[o] + p;
        });
        if let Some(e) = bad {
            return Err(e);
        }
        Self::new(vars, probs)
    }

    /// Joint entropy `H(vars)` in bits.
    pub fn entropy(&self, vars: &[&str]) -> Result<F> {
        let pos = self.positions(vars)?;
        Ok(self
            .marginal_probs(&pos)
            .into_iter()
            .map(surprisal_term)
            .sum())
    }

    /// `H(xs | given) = H(xs, given) - H(given)`.
    pub fn conditional_entropy(&self, xs: &[&str], given: &[&str]) -> Result<F> {
        if given.is_empty() {
            return self.entropy(xs);
        }
        check_disjoint(&[xs, given])?;
        Ok(self.entropy(&concat(&[xs, given]))? - self.entropy(given)?)
    }

    /// `I(xs; ys) = H(xs) + H(ys) - H(xs, ys)`.
    pub fn mutual_information(&self, xs: &[&str], ys: &[&str]) -> Result<F> {
        check_disjoint(&[xs, ys])?;
        let v = self.entropy(xs)? + self.entropy(ys)? - self.entropy(&concat(&[xs, ys]))?;
        clamp_information(v)
    }

    /// `I(xs; ys | given) = H(xs,given) + H(ys,given) - H(xs,ys,given) - H(given)`.
    pub fn conditional_mutual_information(
        &self,
        xs: &[&str],
        ys: &[&str],
        given: &[&str],
    ) -> Result<F> {
        if given.is_empty() {
            return self.mutual_information(xs, ys);
        }
        check_disjoint(&[xs, ys, given])?;
        let v = self.entropy(&concat(&[xs, given]))? + self.entropy(&concat(&[ys, given]))?
            - self.entropy(&concat(&[xs, ys, given]))?
            - self.entropy(given)?;
        clamp_information(v)
    }

    /// Interaction information `I(x; y) - I(x; y | z)`; may be negative.
    pub fn interaction_information(&self, x: &[&str], y: &[&str], z: &[&str]) -> Result<F> {
        check_disjoint(&[x, y, z])?;
        if z.is_empty() {
            return Err(Error::EmptyVariableSet);
        }
        Ok(self.mutual_information(x, y)? - self.conditional_mutual_information(x, y, z)?)
    }

    /// Fano-type ceiling on the probability that the receiver recovers the
    /// sender's semantic type: `1 - (H(sender | receiver) - 1) / log2 t_size`.
    pub fn srsa_fano_bound(
        &self,
        sender: &[&str],
        receiver: &[&str],
        t_size: usize,
    ) -> Result<FanoBound<F>> {
        if t_size < 2 {
            return Err(Error::InvalidParameter(format!(
                "type alphabet size must be at least 2, got {t_size}"
            )));
        }
        let conditional_entropy = self.conditional_entropy(sender, receiver)?;
        let unclamped = F::one() - (conditional_entropy - F::one()) / F::lit(t_size as f64).log2();
        let bound = unclamped.max(F::zero()).min(F::one());
        Ok(FanoBound {
            conditional_entropy,
            unclamped,
            bound,
        })
    }
}

/// Result of [`JointTable::srsa_fano_bound`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FanoBound<F> {
    pub conditional_entropy: F,
    pub unclamped: F,
    /// `unclamped` clipped to `[0, 1]`.
    pub bound: F,
}

fn concat<'a>(sets: &[&[&'a str]]) -> Vec<&'a str> {
    sets.iter().flat_map(|s| s.iter().copied()).collect()
}

fn check_disjoint(sets: &[&[&str]]) -> Result<()> {
    for (i, a) in sets.iter().enumerate() {
        if a.is_empty() && i < 2 {
            return Err(Error::EmptyVariableSet);
        }
        for b in &sets[i + 1..] {
            if let Some(l) = a.iter().find(|l| b.contains(l)) {
                return Err(Error::OverlappingSets(l.to_string()));
            }
        }
    }
    Ok(())
}

fn clamp_information<F: Real>(v: F) -> Result<F> {
    if v >= F::zero() {
        Ok(v)
    } else if v.as_f64() >= -F::INFO_TOL {
        Ok(F::zero())
    } else {
        Err(Error::NegativeInformation(v.as_f64()))
    }
}

/// Binary entropy function `H_b(p)` in bits.
pub fn binary_entropy<F: Real>(p: F) -> F {
    surprisal_term(p) + surprisal_term(F::one() - p)
}

/// Stopping rule for [`channel_capacity`].
#[derive(Clone, Copy, Debug)]
pub struct CapacityOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for CapacityOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 10_000,
        }
    }
}

/// Capacity of a discrete memoryless channel, maximizing `I(X;Y)` over input
/// distributions by Blahut-Arimoto alternating maximization from the uniform
/// input. Stops once two successive capacity estimates differ by less than
/// `tol`.
pub fn channel_capacity<F: Real>(ch: &DiscreteChannel<F>, tol: f64, max_iter: usize) -> Result<F> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let nx = ch.input().size();
    let ny = ch.output().size();
    let mut input = vec![F::one() / F::lit(nx as f64); nx];
    let mut divergence = vec![F::zero(); nx];
    let mut previous: Option<F> = None;
    let mut estimate = F::zero();
    for _ in 0..max_iter {
        let mut output = vec![F::zero(); ny];
        for (x, &px) in input.iter().enumerate() {
            for (y, &w) in ch.row(x).iter().enumerate() {
                output[y] = output[y] + px * w;
            }
        }
        for (x, d) in divergence.iter_mut().enumerate() {
            *d = ch
                .row(x)
                .iter()
                .zip(&output)
                .filter(|(&w, _)| w > F::zero())
                .map(|(&w, &q)| w * (w / q).log2())
                .sum();
        }
        estimate = input
            .iter()
            .zip(&divergence)
            .map(|(&p, &d)| p * d)
            .sum::<F>()
            .max(F::zero());
        if let Some(prev) = previous {
            if (estimate - prev).abs().as_f64() < tol {
                return Ok(estimate);
            }
        }
        previous = Some(estimate);
        let weights: Vec<F> = input
            .iter()
            .zip(&divergence)
            .map(|(&p, &d)| p * d.exp2())
            .collect();
        let total: F = weights.iter().copied().sum();
        for (p, w) in input.iter_mut().zip(weights) {
            *p = w / total;
        }
    }
    Err(Error::NonConvergence {
        last: estimate.as_f64(),
        iterations: max_iter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{make_bsc, ExplicitChannelSpec};

    fn bit(name: &str) -> (String, Alphabet) {
        (name.to_string(), Alphabet::new(name, 2).unwrap())
    }

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    /// Row-major tables over independent variables, built by hand.
    fn table(vars: &[(&str, usize)], probs: Vec<f64>) -> JointTable<f64> {
        JointTable::new(
            vars.iter().map(|&(l, s)| (l, Alphabet::new(l, s).unwrap())),
            probs,
        )
        .unwrap()
    }

    #[test]
    fn rejects_unnormalized_and_negative_tables() {
        assert!(matches!(
            JointTable::<f64>::new([bit("X")], vec![0.5, 0.6]),
            Err(Error::InvalidTable(_))
        ));
        assert!(matches!(
            JointTable::<f64>::new([bit("X")], vec![1.5, -0.5]),
            Err(Error::InvalidTable(_))
        ));
        assert!(matches!(
            JointTable::<f64>::new([bit("X")], vec![1.0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            JointTable::<f64>::new([bit("X"), bit("X")], vec![0.25; 4]),
            Err(Error::DuplicateVariable(_))
        ));
    }

    #[test]
    fn marginalize_uniform_and_point_mass() {
        let u = JointTable::<f64>::uniform([bit("X"), bit("Y")]).unwrap();
        assert_eq!(u.marginalize(&["X"]).unwrap().probs(), &[0.5, 0.5]);

        let pm = JointTable::<f64>::point_mass([bit("X"), bit("Y")], &[0, 1]).unwrap();
        let y = pm.marginalize(&["Y"]).unwrap();
        assert_eq!(y.labels(), &["Y".to_string()]);
        assert_eq!(y.probs(), &[0.0, 1.0]);
    }

    #[test]
    fn marginalize_unknown_label_names_it() {
        let u = JointTable::<f64>::uniform([bit("X")]).unwrap();
        match u.marginalize(&["Q"]) {
            Err(Error::UnknownVariable(l)) => assert_eq!(l, "Q"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(u.marginalize(&[]), Err(Error::EmptyVariableSet)));
    }

    #[test]
    fn entropy_examples() {
        let u = JointTable::<f64>::uniform([bit("X")]).unwrap();
        close(u.entropy(&["X"]).unwrap(), 1.0, 1e-15);
        let pm = JointTable::<f64>::point_mass([bit("X")], &[1]).unwrap();
        assert_eq!(pm.entropy(&["X"]).unwrap(), 0.0);
        let skew = table(&[("X", 2)], vec![0.25, 0.75]);
        // 0.25*2 + 0.75*log2(4/3)
        close(
            skew.entropy(&["X"]).unwrap(),
            0.811_278_124_459_132_8,
            1e-12,
        );
        assert!(matches!(skew.entropy(&[]), Err(Error::EmptyVariableSet)));
    }

    #[test]
    fn mutual_information_examples() {
        let u = JointTable::<f64>::uniform([bit("X"), bit("Y")]).unwrap();
        assert_eq!(u.mutual_information(&["X"], &["Y"]).unwrap(), 0.0);
        let same = table(&[("X", 2), ("Y", 2)], vec![0.5, 0.0, 0.0, 0.5]);
        close(same.mutual_information(&["X"], &["Y"]).unwrap(), 1.0, 1e-15);
        let bsc = table(&[("X", 2), ("Y", 2)], vec![0.45, 0.05, 0.05, 0.45]);
        close(
            bsc.mutual_information(&["X"], &["Y"]).unwrap(),
            0.531_004_406_410_719,
            1e-12,
        );
        assert!(matches!(
            same.mutual_information(&["X"], &["X", "Y"]),
            Err(Error::OverlappingSets(_))
        ));
    }

    #[test]
    fn conditional_and_interaction_information_examples() {
        // X = Y = Z uniform
        let copy3 = JointTable::<f64>::from_fn([bit("X"), bit("Y"), bit("Z")], |i| {
            if i[0] == i[1] && i[1] == i[2] {
                0.5
            } else {
                0.0
            }
        })
        .unwrap();
        assert_eq!(
            copy3
                .conditional_mutual_information(&["X"], &["Y"], &["Z"])
                .unwrap(),
            0.0
        );
        close(
            copy3
                .interaction_information(&["X"], &["Y"], &["Z"])
                .unwrap(),
            1.0,
            1e-12,
        );

        // Z = X xor Y
        let xor = JointTable::<f64>::from_fn([bit("X"), bit("Y"), bit("Z")], |i| {
            if i[0] ^ i[1] == i[2] {
                0.25
            } else {
                0.0
            }
        })
        .unwrap();
        close(
            xor.interaction_information(&["X"], &["Y"], &["Z"]).unwrap(),
            -1.0,
            1e-12,
        );

        // Z independent of a correlated (X, Y)
        let xy = [0.4, 0.1, 0.1, 0.4];
        let z = [0.3, 0.7];
        let t = JointTable::<f64>::from_fn([bit("X"), bit("Y"), bit("Z")], |i| {
            xy[i[0] * 2 + i[1]] * z[i[2]]
        })
        .unwrap();
        close(
            t.conditional_mutual_information(&["X"], &["Y"], &["Z"])
                .unwrap(),
            t.mutual_information(&["X"], &["Y"]).unwrap(),
            1e-12,
        );
        let indep = JointTable::<f64>::uniform([bit("X"), bit("Y"), bit("Z")]).unwrap();
        close(
            indep
                .interaction_information(&["X"], &["Y"], &["Z"])
                .unwrap(),
            0.0,
            1e-15,
        );
        assert!(matches!(
            t.conditional_mutual_information(&["X"], &["Y"], &["Y"]),
            Err(Error::OverlappingSets(_))
        ));
    }

    #[test]
    fn negative_information_beyond_tolerance_is_an_error() {
        assert_eq!(clamp_information(-5e-13_f64).unwrap(), 0.0);
        assert!(matches!(
            clamp_information(-1e-9_f64),
            Err(Error::NegativeInformation(_))
        ));
    }

    #[test]
    fn fano_bound_examples() {
        let vars = [bit("K_A"), bit("S"), bit("K_B"), bit("S_hat")];
        // (K_A, S) copied into (K_B, S_hat)
        let det = JointTable::<f64>::from_fn(vars.clone(), |i| {
            if i[0] == i[2] && i[1] == i[3] {
                0.25
            } else {
                0.0
            }
        })
        .unwrap();
        let b = det
            .srsa_fano_bound(&["K_A", "S"], &["K_B", "S_hat"], 16)
            .unwrap();
        close(b.conditional_entropy, 0.0, 1e-15);
        close(b.unclamped, 1.25, 1e-15);
        assert_eq!(b.bound, 1.0);

        let indep = JointTable::<f64>::uniform(vars).unwrap();
        let b = indep
            .srsa_fano_bound(&["K_A", "S"], &["K_B", "S_hat"], 16)
            .unwrap();
        close(b.conditional_entropy, 2.0, 1e-12);
        close(b.bound, 0.75, 1e-12);

        // H(sender|receiver) = 3 with |T| = 16: sender uniform on 8, receiver constant.
        let t = JointTable::<f64>::from_fn(
            [
                ("A", Alphabet::new("A", 8).unwrap()),
                ("R", Alphabet::new("R", 1).unwrap()),
            ],
            |_| 0.125,
        )
        .unwrap();
        close(
            t.srsa_fano_bound(&["A"], &["R"], 16).unwrap().bound,
            0.5,
            1e-12,
        );
        assert!(matches!(
            t.srsa_fano_bound(&["A"], &["R"], 1),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn capacity_examples() {
        let opts = CapacityOptions::default();
        let cap = |e: f64| {
            let ch = make_bsc::<f64>(ExplicitChannelSpec::new(e).unwrap());
            channel_capacity(&ch, opts.tol, opts.max_iter).unwrap()
        };
        close(cap(0.0), 1.0, 1e-15);
        close(cap(0.5), 0.0, 1e-15);
        close(cap(0.11), 1.0 - binary_entropy(0.11), 1e-12);
        close(cap(0.11), 0.500, 1e-3);
    }

    #[test]
    fn capacity_of_asymmetric_channel_converges() {
        // Z-channel with flip probability 0.5 on input 1: C = log2(5/4).
        let ch = DiscreteChannel::new(
            Alphabet::new("X", 2).unwrap(),
            Alphabet::new("Y", 2).unwrap(),
            vec![vec![1.0, 0.0], vec![0.5, 0.5]],
        )
        .unwrap();
        let c = channel_capacity(&ch, 1e-13, 100_000).unwrap();
        close(c, (1.25f64).log2(), 1e-6);
        assert!(matches!(
            channel_capacity(&ch, 1e-13, 2),
            Err(Error::NonConvergence { .. })
        ));
        assert!(channel_capacity(&ch, 0.0, 10).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let t = JointTable::<f32>::new([bit("X"), bit("Y")], vec![0.45, 0.05, 0.05, 0.45]).unwrap();
        let mi = t.mutual_information(&["X"], &["Y"]).unwrap();
        assert!((mi - 0.531_004_4).abs() < 1e-5);
    }
}
