//! Probability vectors, channels and the joint source `(p_Y, P_{X|Y})`.
//!
//! Every value here is validated once at construction and immutable
//! afterwards. Column-stochastic matrices store rows as outputs and columns
//! as inputs, so `P_{X|Y}` is `|X| x |Y|`.

use crate::error::{Error, Result};

/// Tolerance for membership in the probability simplex.
pub const SIMPLEX_TOL: f64 = 1e-9;

/// Mass at or below which a released symbol is treated as never emitted.
pub const ZERO_MASS: f64 = 1e-15;

/// A probability vector over a finite alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    probs: Vec<f64>,
}

/// Validates `v` as a probability vector.
///
/// Sums within [`SIMPLEX_TOL`] of one are renormalized; anything farther is
/// rejected rather than repaired.
pub fn validate_pmf(v: &[f64]) -> Result<Pmf> {
    Pmf::new(v.to_vec())
}

impl Pmf {
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Empty);
        }
        for (index, &value) in probs.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NotFinite { index, value });
            }
            if value < 0.0 {
                return Err(Error::NegativeEntry { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::SumNotOne { sum });
        }
        if sum != 1.0 {
            probs.iter_mut().for_each(|p| *p /= sum);
        }
        Ok(Pmf { probs })
    }

    /// Like [`Pmf::new`] but clamps entries in `[-SIMPLEX_TOL, 0)` to zero
    /// first. Used for vectors produced by floating-point elimination.
    pub(crate) fn from_computed(mut probs: Vec<f64>) -> Result<Self> {
        for p in probs.iter_mut() {
            if *p < 0.0 && *p >= -SIMPLEX_TOL {
                *p = 0.0;
            }
        }
        Pmf::new(probs)
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform pmf over an empty alphabet");
        Pmf {
            probs: vec![1.0 / n as f64; n],
        }
    }

    pub fn point_mass(n: usize, index: usize) -> Self {
        assert!(index < n);
        let mut probs = vec![0.0; n];
        probs[index] = 1.0;
        Pmf { probs }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }

    pub fn iter(&self) -> impl Iterator<Item = &f64> + '_ {
        self.probs.iter()
    }

    pub fn min(&self) -> f64 {
        self.probs.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.probs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Index of the largest entry; ties go to the lowest index.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &p) in self.probs.iter().enumerate() {
            if p > self.probs[best] {
                best = i;
            }
        }
        best
    }

    /// `E[g(Y)]` for symbol values `values`.
    pub fn expectation(&self, values: &[f64]) -> f64 {
        self.probs.iter().zip(values).map(|(p, v)| p * v).sum()
    }

    /// Variance of the symbol values under this pmf.
    pub fn variance(&self, values: &[f64]) -> f64 {
        let mean = self.expectation(values);
        self.probs
            .iter()
            .zip(values)
            .map(|(p, v)| p * (v - mean) * (v - mean))
            .sum()
    }
}

impl std::ops::Index<usize> for Pmf {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.probs[i]
    }
}

/// Shannon entropy in bits with `0 log 0 = 0`.
pub fn entropy(p: &Pmf) -> f64 {
    entropy_bits(p.as_slice())
}

pub(crate) fn entropy_bits(p: &[f64]) -> f64 {
    p.iter().filter(|&&v| v > 0.0).map(|&v| -v * v.log2()).sum()
}

/// Binary entropy `H_b(t)` in bits.
pub fn binary_entropy(t: f64) -> f64 {
    entropy_bits(&[t, 1.0 - t])
}

/// A column-stochastic matrix: rows index outputs, columns index inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    outputs: usize,
    inputs: usize,
    // row-major
    data: Vec<f64>,
}

impl Channel {
    /// Builds a channel from its rows. Each column must be a pmf.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let outputs = rows.len();
        if outputs == 0 {
            return Err(Error::Empty);
        }
        let inputs = rows[0].len();
        if inputs == 0 {
            return Err(Error::Empty);
        }
        for (row, r) in rows.iter().enumerate() {
            if r.len() != inputs {
                return Err(Error::RaggedMatrix {
                    row,
                    expected: inputs,
                    found: r.len(),
                });
            }
        }
        let columns: Vec<Vec<f64>> = (0..inputs)
            .map(|j| rows.iter().map(|r| r[j]).collect())
            .collect();
        Self::from_column_vecs(columns)
    }

    fn from_column_vecs(columns: Vec<Vec<f64>>) -> Result<Self> {
        let pmfs = columns
            .into_iter()
            .enumerate()
            .map(|(column, c)| {
                Pmf::new(c).map_err(|e| Error::InvalidColumn {
                    column,
                    reason: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_columns(&pmfs)
    }

    pub(crate) fn from_computed_columns(columns: Vec<Vec<f64>>) -> Result<Self> {
        let pmfs = columns
            .into_iter()
            .enumerate()
            .map(|(column, c)| {
                Pmf::from_computed(c).map_err(|e| Error::InvalidColumn {
                    column,
                    reason: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_columns(&pmfs)
    }

    /// Builds a channel whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[Pmf]) -> Result<Self> {
        let inputs = columns.len();
        if inputs == 0 {
            return Err(Error::Empty);
        }
        let outputs = columns[0].len();
        let mut data = vec![0.0; outputs * inputs];
        for (j, c) in columns.iter().enumerate() {
            if c.len() != outputs {
                return Err(Error::DimensionMismatch {
                    expected: outputs,
                    found: c.len(),
                });
            }
            for (i, &v) in c.iter().enumerate() {
                data[i * inputs + j] = v;
            }
        }
        Ok(Channel {
            outputs,
            inputs,
            data,
        })
    }

    pub fn identity(n: usize) -> Self {
        let columns: Vec<Pmf> = (0..n).map(|i| Pmf::point_mass(n, i)).collect();
        Self::from_columns(&columns).expect("identity columns are valid")
    }

    /// The channel that ignores its input and always emits `p`.
    pub fn constant(p: &Pmf, inputs: usize) -> Self {
        let columns = vec![p.clone(); inputs];
        Self::from_columns(&columns).expect("constant columns are valid")
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn get(&self, output: usize, input: usize) -> f64 {
        self.data[output * self.inputs + input]
    }

    pub fn row(&self, output: usize) -> &[f64] {
        &self.data[output * self.inputs..(output + 1) * self.inputs]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.outputs).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, input: usize) -> Vec<f64> {
        (0..self.outputs).map(|i| self.get(i, input)).collect()
    }

    pub fn column_pmf(&self, input: usize) -> Pmf {
        Pmf {
            probs: self.column(input),
        }
    }

    /// Matrix-vector product `P * v`.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.inputs {
            return Err(Error::DimensionMismatch {
                expected: self.inputs,
                found: v.len(),
            });
        }
        Ok((0..self.outputs)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Pushes an input distribution through the channel.
    pub fn push(&self, p: &Pmf) -> Result<Pmf> {
        Pmf::from_computed(self.apply(p.as_slice())?)
    }
}

/// Reverses a channel by Bayes' rule.
///
/// Given the input prior `p_in` and `P_{out|in}`, returns the output marginal
/// and `P_{in|out}` restricted to outputs of positive mass, together with the
/// indices of the retained outputs.
pub fn bayes_invert(p_in: &Pmf, forward: &Channel) -> Result<(Pmf, Channel, Vec<usize>)> {
    if forward.inputs() != p_in.len() {
        return Err(Error::DimensionMismatch {
            expected: forward.inputs(),
            found: p_in.len(),
        });
    }
    let p_out = forward.apply(p_in.as_slice())?;
    let kept: Vec<usize> = (0..forward.outputs())
        .filter(|&o| p_out[o] > ZERO_MASS)
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptySupport);
    }
    let columns: Vec<Vec<f64>> = kept
        .iter()
        .map(|&o| {
            (0..p_in.len())
                .map(|i| forward.get(o, i) * p_in[i] / p_out[o])
                .collect()
        })
        .collect();
    let marginal = Pmf::from_computed(kept.iter().map(|&o| p_out[o]).collect())?;
    Ok((marginal, Channel::from_computed_columns(columns)?, kept))
}

/// Computes `p_X = P_{X|Y} p_Y`, rejecting symbols of zero mass.
pub fn marginal_of(p_y: &Pmf, channel_x_given_y: &Channel) -> Result<Pmf> {
    let p_x = channel_x_given_y.apply(p_y.as_slice())?;
    if let Some(index) = p_x.iter().position(|&v| v <= 0.0) {
        return Err(Error::ZeroMassSymbol { index });
    }
    Pmf::from_computed(p_x)
}

/// The pair `(p_Y, P_{X|Y})`, with optional numeric values for the symbols of Y.
#[derive(Debug, Clone, PartialEq)]
pub struct JointSource {
    p_y: Pmf,
    channel_x_given_y: Channel,
    y_values: Option<Vec<f64>>,
    p_x: Pmf,
}

impl JointSource {
    pub fn new(p_y: Pmf, channel_x_given_y: Channel, y_values: Option<Vec<f64>>) -> Result<Self> {
        if let Some(index) = p_y.iter().position(|&v| v <= 0.0) {
            return Err(Error::NonPositivePrior { index });
        }
        if channel_x_given_y.inputs() != p_y.len() {
            return Err(Error::DimensionMismatch {
                expected: p_y.len(),
                found: channel_x_given_y.inputs(),
            });
        }
        if let Some(values) = &y_values {
            if values.len() != p_y.len() {
                return Err(Error::DimensionMismatch {
                    expected: p_y.len(),
                    found: values.len(),
                });
            }
            let distinct = values
                .iter()
                .enumerate()
                .all(|(i, a)| a.is_finite() && values[i + 1..].iter().all(|b| a != b));
            if !distinct {
                return Err(Error::InvalidYValues);
            }
        }
        let p_x = marginal_of(&p_y, &channel_x_given_y)?;
        Ok(JointSource {
            p_y,
            channel_x_given_y,
            y_values,
            p_x,
        })
    }

    pub fn p_y(&self) -> &Pmf {
        &self.p_y
    }

    pub fn channel_x_given_y(&self) -> &Channel {
        &self.channel_x_given_y
    }

    pub fn y_values(&self) -> Option<&[f64]> {
        self.y_values.as_deref()
    }

    pub fn with_y_values(self, values: Vec<f64>) -> Result<Self> {
        JointSource::new(self.p_y, self.channel_x_given_y, Some(values))
    }

    pub fn x_size(&self) -> usize {
        self.channel_x_given_y.outputs()
    }

    pub fn y_size(&self) -> usize {
        self.p_y.len()
    }

    /// The marginal `p_X`, strictly positive by construction.
    pub fn marginal_x(&self) -> &Pmf {
        &self.p_x
    }
}

/// `p_X` of a source.
pub fn marginal_x(src: &JointSource) -> Pmf {
    src.marginal_x().clone()
}

/// How released symbols are read back as estimates of Y.
#[derive(Debug, Clone, PartialEq)]
pub enum ULabels {
    /// Symbols carry no meaning beyond their identity.
    Opaque,
    /// Real-valued estimates of Y, one per released symbol.
    Estimates(Vec<f64>),
    /// Guessed symbol index of Y, one per released symbol.
    Symbols(Vec<usize>),
}

/// A release mechanism `p_{U|Y}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mechanism {
    pub channel_u_given_y: Channel,
    pub u_labels: ULabels,
}

impl Mechanism {
    pub fn new(channel_u_given_y: Channel, u_labels: ULabels) -> Result<Self> {
        let k = channel_u_given_y.outputs();
        let len = match &u_labels {
            ULabels::Opaque => k,
            ULabels::Estimates(v) => v.len(),
            ULabels::Symbols(v) => v.len(),
        };
        if len != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: len,
            });
        }
        Ok(Mechanism {
            channel_u_given_y,
            u_labels,
        })
    }

    /// `U = Y`, labelled with the source's own symbols.
    pub fn identity(n: usize) -> Self {
        Mechanism {
            channel_u_given_y: Channel::identity(n),
            u_labels: ULabels::Symbols((0..n).collect()),
        }
    }

    pub fn support_size(&self) -> usize {
        self.channel_u_given_y.outputs()
    }
}

/// The Markov chain `X - Y - U` induced by a mechanism on a source.
///
/// Released symbols of zero mass are dropped; `kept[k]` is the original row
/// of the mechanism behind the `k`-th retained symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct Composition {
    pub p_u: Pmf,
    pub p_x_given_u: Channel,
    pub p_y_given_u: Channel,
    pub kept: Vec<usize>,
}

pub fn compose(mech: &Mechanism, src: &JointSource) -> Result<Composition> {
    let ch = &mech.channel_u_given_y;
    if ch.inputs() != src.y_size() {
        return Err(Error::DimensionMismatch {
            expected: src.y_size(),
            found: ch.inputs(),
        });
    }
    let (p_u, p_y_given_u, kept) = bayes_invert(src.p_y(), ch)?;
    let x_columns = (0..p_u.len())
        .map(|u| src.channel_x_given_y().apply(&p_y_given_u.column(u)))
        .collect::<Result<Vec<_>>>()?;
    let p_x_given_u = Channel::from_computed_columns(x_columns)?;
    Ok(Composition {
        p_u,
        p_x_given_u,
        p_y_given_u,
        kept,
    })
}
