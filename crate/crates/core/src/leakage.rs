//! Leakage measures between a private variable X and a release U.
//!
//! Every measure takes the release as `(p_U, P_{X|U})` together with the
//! prior `p_X`. All logarithms are base 2.
//!
//! | measure | value |
//! |---------|-------|
//! | [`avg_tv_leakage`] | `T(X;U) = ½ Σ_u p(u) ‖p_{X|u} − p_X‖₁` |
//! | [`mutual_information`] | `Σ_u p(u) D(p_{X|u} ‖ p_X)` |
//! | [`maximal_leakage`] | `log₂ Σ_u max_x p(u|x)` |
//! | [`max_info_leakage`] | `H(X) − min_u H(X|U=u)` |

use std::f64::consts::LOG2_E;

use crate::error::{Error, Result};
use crate::probability::{bayes_invert, entropy, entropy_bits, Channel, Pmf};

fn check_dims(p_u: &Pmf, p_x_given_u: &Channel, p_x: &Pmf) -> Result<()> {
    if p_x_given_u.inputs() != p_u.len() {
        return Err(Error::DimensionMismatch {
            expected: p_u.len(),
            found: p_x_given_u.inputs(),
        });
    }
    if p_x_given_u.outputs() != p_x.len() {
        return Err(Error::DimensionMismatch {
            expected: p_x.len(),
            found: p_x_given_u.outputs(),
        });
    }
    Ok(())
}

/// `½ ‖p − q‖₁`.
pub fn tv_distance(p: &Pmf, q: &Pmf) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            found: q.len(),
        });
    }
    Ok(0.5 * l1(p.as_slice(), q.as_slice()))
}

fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Average total variation leakage `T(X;U)`.
pub fn avg_tv_leakage(p_u: &Pmf, p_x_given_u: &Channel, p_x: &Pmf) -> Result<f64> {
    check_dims(p_u, p_x_given_u, p_x)?;
    Ok(0.5
        * (0..p_u.len())
            .map(|u| p_u[u] * l1(&p_x_given_u.column(u), p_x.as_slice()))
            .sum::<f64>())
}

/// `½ Σ_{x,u} |p(x,u) − p(x) p(u)|` for a joint given as rows over x and
/// columns over u. Equals `T(X;U)`, and is symmetric in the two variables.
pub fn avg_tv_from_joint(joint: &[Vec<f64>]) -> f64 {
    let p_x: Vec<f64> = joint.iter().map(|r| r.iter().sum()).collect();
    let cols = joint.first().map_or(0, Vec::len);
    let p_u: Vec<f64> = (0..cols)
        .map(|u| joint.iter().map(|r| r[u]).sum())
        .collect();
    0.5 * joint
        .iter()
        .enumerate()
        .flat_map(|(x, r)| {
            let (p_x, p_u) = (&p_x, &p_u);
            r.iter()
                .enumerate()
                .map(move |(u, &v)| (v - p_x[x] * p_u[u]).abs())
        })
        .sum::<f64>()
}

/// Exponent of the `L^p` quantity used by [`avg_lp_distance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormExponent {
    Finite(f64),
    Infinity,
}

fn lp_norm(v: impl Iterator<Item = f64>, exponent: NormExponent) -> f64 {
    match exponent {
        NormExponent::Infinity => v.map(f64::abs).fold(0.0, f64::max),
        NormExponent::Finite(p) => v.map(|d| d.abs().powf(p)).sum::<f64>().powf(1.0 / p),
    }
}

/// `Σ_u p(u) ‖p_{X|u} − p_X‖_p` without the ½ factor.
///
/// For `p = 1` this is `2 T(X;U)`. Exponents in `(0, 1)` give the
/// non-subadditive quasi-norm.
pub fn avg_lp_distance(
    p_u: &Pmf,
    p_x_given_u: &Channel,
    p_x: &Pmf,
    exponent: NormExponent,
) -> Result<f64> {
    check_dims(p_u, p_x_given_u, p_x)?;
    if let NormExponent::Finite(p) = exponent {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::InvalidArgument(format!("norm exponent {p}")));
        }
    }
    Ok((0..p_u.len())
        .map(|u| {
            let col = p_x_given_u.column(u);
            p_u[u] * lp_norm(col.iter().zip(p_x.iter()).map(|(a, b)| a - b), exponent)
        })
        .sum())
}

/// `D(p ‖ q)` in bits; terms with `p(x) = 0` contribute nothing.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .filter(|(&a, _)| a > 0.0)
        .map(|(&a, &b)| a * (a / b).log2())
        .sum()
}

pub fn mutual_information(p_u: &Pmf, p_x_given_u: &Channel, p_x: &Pmf) -> Result<f64> {
    check_dims(p_u, p_x_given_u, p_x)?;
    let mi: f64 = (0..p_u.len())
        .map(|u| p_u[u] * kl_divergence(&p_x_given_u.column(u), p_x.as_slice()))
        .sum();
    Ok(mi.max(0.0))
}

/// Maximal leakage `log₂ Σ_u max_x p(u|x)` of a channel `P_{U|X}`.
///
/// Every x is assumed to carry positive prior mass, so the inner maximum
/// runs over all inputs.
pub fn maximal_leakage(p_u_given_x: &Channel) -> f64 {
    let total: f64 = (0..p_u_given_x.outputs())
        .map(|u| p_u_given_x.row(u).iter().copied().fold(0.0, f64::max))
        .sum();
    total.log2().max(0.0)
}

/// Maximal leakage of a release given in posterior form.
pub fn maximal_leakage_of(p_u: &Pmf, p_x_given_u: &Channel, p_x: &Pmf) -> Result<f64> {
    check_dims(p_u, p_x_given_u, p_x)?;
    let (_, p_u_given_x, _) = bayes_invert(p_u, p_x_given_u)?;
    Ok(maximal_leakage(&p_u_given_x))
}

/// Maximum information leakage `H(X) − min_u H(X|U=u)`.
pub fn max_info_leakage(p_u: &Pmf, p_x_given_u: &Channel, p_x: &Pmf) -> Result<f64> {
    check_dims(p_u, p_x_given_u, p_x)?;
    let min_posterior = (0..p_u.len())
        .map(|u| entropy_bits(&p_x_given_u.column(u)))
        .fold(f64::INFINITY, f64::min);
    Ok(entropy(p_x) - min_posterior)
}

/// Bounds on mutual information and maximal leakage implied by `T(X;U) = t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TvBounds {
    /// `2 log₂e · t²`, a lower bound on `I(X;U)`.
    pub mi_lower: f64,
    /// `log₂(1 + t / min_x p(x))`, an upper bound on maximal leakage.
    pub ml_upper: f64,
    /// `log₂(1 + t / ((|X| − 1) max_x p(x)))`, a lower bound on maximal leakage.
    pub ml_lower: f64,
}

pub fn tv_leakage_bounds(t: f64, p_x: &Pmf) -> TvBounds {
    let n = p_x.len();
    let ml_lower = if n > 1 {
        (1.0 + t / ((n - 1) as f64 * p_x.max())).log2()
    } else {
        0.0
    };
    TvBounds {
        mi_lower: 2.0 * LOG2_E * t * t,
        ml_upper: (1.0 + t / p_x.min()).log2(),
        ml_lower,
    }
}

/// Every leakage measure of one release, with the bounds implied by `T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeakageReport {
    pub t_leakage: f64,
    pub mutual_info_bits: f64,
    pub maximal_leakage_bits: f64,
    pub max_info_leakage_bits: f64,
    pub bound_mi_lower: f64,
    pub bound_ml_upper: f64,
    pub bound_ml_lower: f64,
}

/// Signed margins of the bound chain; each is nonnegative when it holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSlacks {
    /// `I − 2 log₂e · T²`
    pub mi_lower: f64,
    /// `L − I`
    pub mi_below_ml: f64,
    /// `log₂(1 + T / min p_X) − L`
    pub ml_upper: f64,
    /// `L − log₂(1 + T / ((|X| − 1) max p_X))`
    pub ml_lower: f64,
    /// `I* − I`
    pub worst_case_above_mi: f64,
}

impl LeakageReport {
    pub fn compute(p_u: &Pmf, p_x_given_u: &Channel, p_x: &Pmf) -> Result<Self> {
        let t_leakage = avg_tv_leakage(p_u, p_x_given_u, p_x)?;
        let bounds = tv_leakage_bounds(t_leakage, p_x);
        Ok(LeakageReport {
            t_leakage,
            mutual_info_bits: mutual_information(p_u, p_x_given_u, p_x)?,
            maximal_leakage_bits: maximal_leakage_of(p_u, p_x_given_u, p_x)?,
            max_info_leakage_bits: max_info_leakage(p_u, p_x_given_u, p_x)?,
            bound_mi_lower: bounds.mi_lower,
            bound_ml_upper: bounds.ml_upper,
            bound_ml_lower: bounds.ml_lower,
        })
    }

    pub fn slacks(&self) -> BoundSlacks {
        BoundSlacks {
            mi_lower: self.mutual_info_bits - self.bound_mi_lower,
            mi_below_ml: self.maximal_leakage_bits - self.mutual_info_bits,
            ml_upper: self.bound_ml_upper - self.maximal_leakage_bits,
            ml_lower: self.maximal_leakage_bits - self.bound_ml_lower,
            worst_case_above_mi: self.max_info_leakage_bits - self.mutual_info_bits,
        }
    }
}

/// Result of checking one inequality: whether it holds and by how much.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slack {
    pub holds: bool,
    pub slack: f64,
}

impl Slack {
    fn of(slack: f64) -> Self {
        Slack {
            holds: slack >= -1e-9,
            slack,
        }
    }
}

/// A Markov chain `A − B − C` given by `p_B`, `P_{A|B}` and `P_{C|B}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovChain {
    pub p_b: Pmf,
    pub p_a_given_b: Channel,
    pub p_c_given_b: Channel,
}

impl MarkovChain {
    pub fn new(p_b: Pmf, p_a_given_b: Channel, p_c_given_b: Channel) -> Result<Self> {
        for ch in [&p_a_given_b, &p_c_given_b] {
            if ch.inputs() != p_b.len() {
                return Err(Error::DimensionMismatch {
                    expected: p_b.len(),
                    found: ch.inputs(),
                });
            }
        }
        Ok(MarkovChain {
            p_b,
            p_a_given_b,
            p_c_given_b,
        })
    }

    /// Builds the chain from the backward description `p_C`, `P_{B|C}`.
    pub fn from_backward(p_c: &Pmf, p_b_given_c: &Channel, p_a_given_b: Channel) -> Result<Self> {
        let (p_b, p_c_given_b, kept) = bayes_invert(p_c, p_b_given_c)?;
        if kept.len() != p_b_given_c.outputs() {
            return Err(Error::InvalidArgument(
                "every symbol of B must have positive mass".into(),
            ));
        }
        MarkovChain::new(p_b, p_a_given_b, p_c_given_b)
    }

    pub fn p_a(&self) -> Result<Pmf> {
        self.p_a_given_b.push(&self.p_b)
    }

    /// `(p_C, P_{B|C})`
    pub fn backward(&self) -> Result<(Pmf, Channel)> {
        let (p_c, p_b_given_c, _) = bayes_invert(&self.p_b, &self.p_c_given_b)?;
        Ok((p_c, p_b_given_c))
    }

    /// `(p_C, P_{A|C})`
    pub fn a_given_c(&self) -> Result<(Pmf, Channel)> {
        let (p_c, p_b_given_c) = self.backward()?;
        let cols = (0..p_c.len())
            .map(|c| self.p_a_given_b.apply(&p_b_given_c.column(c)))
            .collect::<Result<Vec<_>>>()?;
        Ok((p_c, Channel::from_computed_columns(cols)?))
    }

    pub fn t_ab(&self) -> Result<f64> {
        avg_tv_leakage(&self.p_b, &self.p_a_given_b, &self.p_a()?)
    }

    pub fn t_ac(&self) -> Result<f64> {
        let (p_c, p_a_given_c) = self.a_given_c()?;
        avg_tv_leakage(&p_c, &p_a_given_c, &self.p_a()?)
    }

    pub fn t_bc(&self) -> Result<f64> {
        let (p_c, p_b_given_c) = self.backward()?;
        avg_tv_leakage(&p_c, &p_b_given_c, &self.p_b)
    }

    /// `Σ_c p(c) ‖p_{A|c} − p_A‖_p` for the chain's release C.
    pub fn lp_leakage_ac(&self, exponent: NormExponent) -> Result<f64> {
        let (p_c, p_a_given_c) = self.a_given_c()?;
        avg_lp_distance(&p_c, &p_a_given_c, &self.p_a()?, exponent)
    }

    /// `Σ_c p(c) ‖p_{B|c} − p_B‖_p`
    pub fn lp_leakage_bc(&self, exponent: NormExponent) -> Result<f64> {
        let (p_c, p_b_given_c) = self.backward()?;
        avg_lp_distance(&p_c, &p_b_given_c, &self.p_b, exponent)
    }
}

/// `T(A;B) − T(A;C)`: processing B into C cannot increase leakage about A.
pub fn is_postprocessing_consistent(chain: &MarkovChain) -> Result<Slack> {
    Ok(Slack::of(chain.t_ab()? - chain.t_ac()?))
}

/// `T(B;C) − T(A;C)`: leakage about the secondary A is bounded by leakage
/// about the primary B.
pub fn is_linkage_consistent(chain: &MarkovChain) -> Result<Slack> {
    Ok(Slack::of(chain.t_bc()? - chain.t_ac()?))
}

/// Linkage slack of the `L^p` analogue of `T`.
pub fn lp_linkage_slack(chain: &MarkovChain, exponent: NormExponent) -> Result<Slack> {
    Ok(Slack::of(
        chain.lp_leakage_bc(exponent)? - chain.lp_leakage_ac(exponent)?,
    ))
}

/// Which coordinates of `p_{B|c}` are moved in [`linkage_counterexample`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Perturbation {
    /// `+cδ` on coordinates 1, 2 and `−cδ` on 4, 5 (one-based).
    Paired,
    /// `+cδ` on coordinate 3 and `−cδ` on coordinate 6.
    Sparse,
}

/// The 3 x 6 channel `P_{A|B}` that merges B into three coarse symbols.
pub fn counterexample_channel() -> Channel {
    Channel::from_rows(&[
        vec![1.0, 1.0, 0.5, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.5, 1.0, 1.0, 0.0],
        vec![0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
    ])
    .expect("counterexample channel is column-stochastic")
}

/// The chain `A − B − C` with binary uniform `C ∈ {−1, 1}` and
/// `p_{B|c} = p_B + cδ·d`, under which only the `L¹` average satisfies the
/// linkage inequality.
pub fn linkage_counterexample(
    p_b: &Pmf,
    delta: f64,
    perturbation: Perturbation,
) -> Result<MarkovChain> {
    if p_b.len() != 6 {
        return Err(Error::DimensionMismatch {
            expected: 6,
            found: p_b.len(),
        });
    }
    let direction = match perturbation {
        Perturbation::Paired => [1.0, 1.0, 0.0, -1.0, -1.0, 0.0],
        Perturbation::Sparse => [0.0, 0.0, 1.0, 0.0, 0.0, -1.0],
    };
    let columns = [-1.0, 1.0]
        .iter()
        .map(|c| {
            Pmf::new(
                p_b.iter()
                    .zip(direction)
                    .map(|(p, d)| p + c * delta * d)
                    .collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    MarkovChain::from_backward(
        &Pmf::uniform(2),
        &Channel::from_columns(&columns)?,
        counterexample_channel(),
    )
}
