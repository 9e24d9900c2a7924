//! Optimal utility under an average total variation budget.
//!
//! For a budget `ε` the solver computes one of
//!
//! - `m_ε = max I(Y;U)`,
//! - `M_ε = min E[(Y − U)²]`,
//! - `E_ε = min Pr{Y ≠ U}`,
//!
//! over mechanisms `p_{U|Y}` with `T(X;U) ≤ ε`. Each objective is a concave
//! functional `φ` of the posterior `p_{Y|u}` (entropy, conditional
//! variance, negative largest entry), so optimal posteriors lie in the
//! extreme-point set `𝕊` of [`crate::regions`] and the problem becomes
//!
//! ```text
//! minimize Σ_i w_i φ(s_i)  s.t.  Σ_i w_i f(s_i) ≤ ε,  Σ_i w_i s_i = p_Y,  w ≥ 0.
//! ```
//!
//! A basic optimal `w` has at most `|Y| + 1` nonzero entries, which is the
//! support of the reconstructed mechanism. For binary Y the closed forms
//! [`mi_binary`], [`mmse_binary`] and [`perr_binary`] give the same values.

use std::f64::consts::LOG2_E;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::leakage::{avg_tv_leakage, mutual_information};
use crate::lp::{self, LpProblem, LpStatus};
use crate::probability::{
    binary_entropy, compose, entropy, entropy_bits, Channel, JointSource, Mechanism, Pmf, ULabels,
};
use crate::regions::{partition_simplex, SPointSet, SimplexPartition};

/// Weights at or below this are outside the mechanism's support.
pub const SUPPORT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UtilityKind {
    MutualInformation,
    Mmse,
    ErrorProbability,
}

impl UtilityKind {
    pub const ALL: [UtilityKind; 3] = [
        UtilityKind::MutualInformation,
        UtilityKind::Mmse,
        UtilityKind::ErrorProbability,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            UtilityKind::MutualInformation => "mi",
            UtilityKind::Mmse => "mmse",
            UtilityKind::ErrorProbability => "perr",
        }
    }

    /// Whether more budget can only raise (true) or only lower the value.
    pub fn increasing(self) -> bool {
        matches!(self, UtilityKind::MutualInformation)
    }
}

impl FromStr for UtilityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mi" | "mutual_information" => Ok(UtilityKind::MutualInformation),
            "mmse" => Ok(UtilityKind::Mmse),
            "perr" | "error_probability" => Ok(UtilityKind::ErrorProbability),
            other => Err(Error::InvalidArgument(format!("unknown utility '{other}'"))),
        }
    }
}

impl std::fmt::Display for UtilityKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `T(X;Y)`, the largest leakage any mechanism can produce.
pub fn t_xy(src: &JointSource) -> f64 {
    avg_tv_leakage(src.p_y(), src.channel_x_given_y(), src.marginal_x())
        .expect("source dimensions are consistent")
}

/// `‖p_{X|y₁} − p_{X|y₂}‖₁` of a binary-Y source.
pub fn delta_l1(src: &JointSource) -> Result<f64> {
    if src.y_size() != 2 {
        return Err(Error::NotBinary { size: src.y_size() });
    }
    let ch = src.channel_x_given_y();
    Ok((0..ch.outputs())
        .map(|x| (ch.get(x, 0) - ch.get(x, 1)).abs())
        .sum())
}

/// `m_ε` for binary Y with `p_Y(y₁) = p`.
pub fn mi_binary(p: f64, delta_l1: f64, eps: f64) -> f64 {
    let hb = binary_entropy(p);
    if delta_l1 <= 0.0 {
        return hb;
    }
    (eps / (p * (1.0 - p) * delta_l1)).min(1.0) * hb
}

/// `M_ε` for binary Y taking values `y1`, `y2`.
pub fn mmse_binary(p: f64, delta_l1: f64, eps: f64, y1: f64, y2: f64) -> f64 {
    if delta_l1 <= 0.0 {
        return 0.0;
    }
    (p * (1.0 - p) - eps / delta_l1).max(0.0) * (y1 - y2).powi(2)
}

/// `E_ε` for binary Y.
pub fn perr_binary(p: f64, delta_l1: f64, eps: f64) -> f64 {
    if delta_l1 <= 0.0 {
        return 0.0;
    }
    p.min(1.0 - p) * (1.0 - eps / (p * (1.0 - p) * delta_l1)).max(0.0)
}

/// The binary closed form of `kind` at budget `eps`.
pub fn binary_closed_form(src: &JointSource, kind: UtilityKind, eps: f64) -> Result<f64> {
    let d = delta_l1(src)?;
    let p = src.p_y()[0];
    Ok(match kind {
        UtilityKind::MutualInformation => mi_binary(p, d, eps),
        UtilityKind::Mmse => {
            let y = src.y_values().ok_or(Error::MissingYValues)?;
            mmse_binary(p, d, eps, y[0], y[1])
        }
        UtilityKind::ErrorProbability => perr_binary(p, d, eps),
    })
}

/// The optimum at one budget together with a mechanism attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffSolution {
    pub kind: UtilityKind,
    pub epsilon_requested: f64,
    /// Budget actually used, clamped to `[0, T(X;Y)]`.
    pub epsilon: f64,
    pub utility_value: f64,
    pub mechanism: Mechanism,
    /// `T(X;U)` of the mechanism, recomputed from the composed chain.
    pub achieved_t: f64,
    /// Indices into the solver's `𝕊` of the posteriors in use, one per
    /// released symbol.
    pub support: Vec<usize>,
    /// `p_U` over the released symbols.
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffPoint {
    pub epsilon: f64,
    pub utility_value: f64,
    pub achieved_t: f64,
}

/// Per-posterior objective `φ(s)` minimized by the LP.
fn objective(kind: UtilityKind, s: &Pmf, y_values: Option<&[f64]>) -> f64 {
    match kind {
        UtilityKind::MutualInformation => entropy(s),
        UtilityKind::Mmse => s.variance(y_values.expect("checked by caller")),
        UtilityKind::ErrorProbability => -s.max(),
    }
}

fn labels_for(kind: UtilityKind, posteriors: &[&Pmf], y_values: Option<&[f64]>) -> ULabels {
    match kind {
        UtilityKind::MutualInformation => ULabels::Opaque,
        UtilityKind::Mmse => {
            let y = y_values.expect("checked by caller");
            ULabels::Estimates(posteriors.iter().map(|s| s.expectation(y)).collect())
        }
        UtilityKind::ErrorProbability => {
            ULabels::Symbols(posteriors.iter().map(|s| s.argmax()).collect())
        }
    }
}

/// Builds `p_{U|Y}` from LP weights on `𝕊`.
///
/// Each `s_i` with `w_i > 1e-9` becomes a released symbol `u_i` with
/// `p_U(u_i) = w_i`, `p_{Y|u_i} = s_i` and `p(u_i|y) = w_i s_i(y) / p_Y(y)`.
/// Returns the mechanism and the support indices.
pub fn mechanism_from_weights(
    w: &[f64],
    spoints: &SPointSet,
    src: &JointSource,
    kind: UtilityKind,
) -> Result<(Mechanism, Vec<usize>)> {
    if w.len() != spoints.len() {
        return Err(Error::DimensionMismatch {
            expected: spoints.len(),
            found: w.len(),
        });
    }
    if kind == UtilityKind::Mmse && src.y_values().is_none() {
        return Err(Error::MissingYValues);
    }
    let support: Vec<usize> = (0..w.len()).filter(|&i| w[i] > SUPPORT_TOL).collect();
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let p_y = src.p_y();
    let columns: Vec<Vec<f64>> = (0..p_y.len())
        .map(|y| {
            let col: Vec<f64> = support
                .iter()
                .map(|&i| w[i] * spoints.points[i][y] / p_y[y])
                .collect();
            // dropped sub-tolerance weights leave the column short by < 1e-9 / p_Y(y)
            let total: f64 = col.iter().sum();
            col.into_iter().map(|v| v / total).collect()
        })
        .collect();
    let channel = Channel::from_computed_columns(columns)?;
    let posteriors: Vec<&Pmf> = support.iter().map(|&i| &spoints.points[i]).collect();
    let labels = labels_for(kind, &posteriors, src.y_values());
    Ok((Mechanism::new(channel, labels)?, support))
}

/// Utility of a mechanism recomputed from the composed chain: `I(Y;U)`,
/// `E[(Y − label(U))²]` or `Pr{Y ≠ label(U)}`.
pub fn utility_of(mech: &Mechanism, src: &JointSource, kind: UtilityKind) -> Result<f64> {
    let c = compose(mech, src)?;
    match kind {
        UtilityKind::MutualInformation => mutual_information(&c.p_u, &c.p_y_given_u, src.p_y()),
        UtilityKind::Mmse => {
            let y = src.y_values().ok_or(Error::MissingYValues)?;
            let ULabels::Estimates(labels) = &mech.u_labels else {
                return Err(Error::InvalidArgument(
                    "mmse utility needs real-valued labels".into(),
                ));
            };
            Ok(c.kept
                .iter()
                .enumerate()
                .map(|(k, &u)| {
                    let post = c.p_y_given_u.column(k);
                    c.p_u[k]
                        * post
                            .iter()
                            .zip(y)
                            .map(|(p, yv)| p * (yv - labels[u]).powi(2))
                            .sum::<f64>()
                })
                .sum())
        }
        UtilityKind::ErrorProbability => {
            let ULabels::Symbols(labels) = &mech.u_labels else {
                return Err(Error::InvalidArgument(
                    "error-probability utility needs symbol labels".into(),
                ));
            };
            Ok(1.0
                - c.kept
                    .iter()
                    .enumerate()
                    .map(|(k, &u)| {
                        let guess = labels[u];
                        if guess < src.y_size() {
                            c.p_u[k] * c.p_y_given_u.get(guess, k)
                        } else {
                            0.0
                        }
                    })
                    .sum::<f64>())
        }
    }
}

/// Solver for one source; `𝕊` is computed once and shared by every budget.
#[derive(Debug, Clone)]
pub struct TradeoffSolver {
    src: JointSource,
    partition: SimplexPartition,
    t_xy: f64,
    h_y: f64,
}

impl TradeoffSolver {
    pub fn new(src: &JointSource) -> Result<Self> {
        let partition = partition_simplex(src)?;
        // with every form dropped X ⊥ Y and T(X;Y) is zero up to rounding
        let t_xy = if partition.forms.is_empty() {
            0.0
        } else {
            t_xy(src)
        };
        Ok(TradeoffSolver {
            partition,
            t_xy,
            h_y: entropy(src.p_y()),
            src: src.clone(),
        })
    }

    pub fn source(&self) -> &JointSource {
        &self.src
    }

    pub fn partition(&self) -> &SimplexPartition {
        &self.partition
    }

    pub fn spoints(&self) -> &SPointSet {
        &self.partition.spoints
    }

    pub fn t_xy(&self) -> f64 {
        self.t_xy
    }

    /// Clamps a requested budget to `[0, T(X;Y)]`.
    pub fn clamp(&self, eps: f64) -> Result<f64> {
        if eps.is_nan() || eps < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "epsilon must be nonnegative, got {eps}"
            )));
        }
        Ok(eps.min(self.t_xy))
    }

    /// The LP over `𝕊` for `kind` at (clamped) budget `eps`.
    pub fn lp(&self, kind: UtilityKind, eps: f64) -> Result<LpProblem> {
        if kind == UtilityKind::Mmse && self.src.y_values().is_none() {
            return Err(Error::MissingYValues);
        }
        let s = self.spoints();
        let y_values = self.src.y_values();
        let costs = s
            .points
            .iter()
            .map(|p| objective(kind, p, y_values))
            .collect();
        let mut problem = LpProblem::new(costs).ub(s.f_values.clone(), eps);
        for y in 0..self.src.y_size() {
            problem = problem.eq(s.points.iter().map(|p| p[y]).collect(), self.src.p_y()[y]);
        }
        Ok(problem)
    }

    pub fn solve(&self, kind: UtilityKind, eps: f64) -> Result<TradeoffSolution> {
        let epsilon = self.clamp(eps)?;
        if kind == UtilityKind::Mmse && self.src.y_values().is_none() {
            return Err(Error::MissingYValues);
        }
        if self.partition.forms.is_empty() {
            return self.release_everything(kind, eps);
        }
        let lp = self.lp(kind, epsilon)?;
        let sol = lp::solve(&lp)?;
        match sol.status {
            LpStatus::Optimal => {}
            LpStatus::Infeasible => return Err(Error::Infeasible),
            LpStatus::Unbounded => return Err(Error::Unbounded),
        }
        let utility_value = match kind {
            UtilityKind::MutualInformation => self.h_y - sol.value,
            UtilityKind::Mmse => sol.value,
            UtilityKind::ErrorProbability => 1.0 + sol.value,
        };
        let (mechanism, support) =
            mechanism_from_weights(&sol.weights, self.spoints(), &self.src, kind)?;
        let weights = support.iter().map(|&i| sol.weights[i]).collect();
        let achieved_t = self.leakage_of(&mechanism)?;
        Ok(TradeoffSolution {
            kind,
            epsilon_requested: eps,
            epsilon,
            utility_value,
            mechanism,
            achieved_t,
            support,
            weights,
        })
    }

    // X ⊥ Y: releasing Y costs nothing.
    fn release_everything(&self, kind: UtilityKind, eps: f64) -> Result<TradeoffSolution> {
        let n = self.src.y_size();
        let support = (0..n)
            .map(|y| {
                self.spoints()
                    .find(Pmf::point_mass(n, y).as_slice(), 1e-9)
                    .ok_or(Error::DegenerateSystem)
            })
            .collect::<Result<Vec<_>>>()?;
        let labels = match kind {
            UtilityKind::MutualInformation => ULabels::Opaque,
            UtilityKind::Mmse => {
                ULabels::Estimates(self.src.y_values().ok_or(Error::MissingYValues)?.to_vec())
            }
            UtilityKind::ErrorProbability => ULabels::Symbols((0..n).collect()),
        };
        let mechanism = Mechanism::new(Channel::identity(n), labels)?;
        let utility_value = match kind {
            UtilityKind::MutualInformation => self.h_y,
            _ => 0.0,
        };
        Ok(TradeoffSolution {
            kind,
            epsilon_requested: eps,
            epsilon: 0.0,
            utility_value,
            achieved_t: self.leakage_of(&mechanism)?,
            mechanism,
            support,
            weights: self.src.p_y().as_slice().to_vec(),
        })
    }

    fn leakage_of(&self, mech: &Mechanism) -> Result<f64> {
        let c = compose(mech, &self.src)?;
        avg_tv_leakage(&c.p_u, &c.p_x_given_u, self.src.marginal_x())
    }

    /// Budgets `T(X;Y)·k/(n−1)` for `k = 0..n`.
    pub fn grid(&self, grid_size: usize) -> Result<Vec<f64>> {
        if grid_size < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least 2 points, got {grid_size}"
            )));
        }
        if self.t_xy <= 0.0 {
            return Err(Error::DegenerateRange);
        }
        let last = (grid_size - 1) as f64;
        Ok((0..grid_size)
            .map(|k| {
                if k + 1 == grid_size {
                    self.t_xy
                } else {
                    self.t_xy * k as f64 / last
                }
            })
            .collect())
    }

    pub fn sweep(&self, kind: UtilityKind, grid_size: usize) -> Result<Vec<TradeoffPoint>> {
        self.sweep_with(kind, grid_size, Strategy::default())
    }

    pub fn sweep_with(
        &self,
        kind: UtilityKind,
        grid_size: usize,
        strategy: Strategy,
    ) -> Result<Vec<TradeoffPoint>> {
        let grid = self.grid(grid_size)?;
        exec::try_map_indexed(grid.len(), strategy, |k| {
            let sol = self.solve(kind, grid[k])?;
            Ok(TradeoffPoint {
                epsilon: sol.epsilon,
                utility_value: sol.utility_value,
                achieved_t: sol.achieved_t,
            })
        })
    }
}

pub fn solve_tradeoff(src: &JointSource, kind: UtilityKind, eps: f64) -> Result<TradeoffSolution> {
    TradeoffSolver::new(src)?.solve(kind, eps)
}

pub fn sweep_curve(
    src: &JointSource,
    kind: UtilityKind,
    grid_size: usize,
) -> Result<Vec<TradeoffPoint>> {
    TradeoffSolver::new(src)?.sweep(kind, grid_size)
}

/// Bounds on `g_ε = max I(Y;U)` subject to `I(X;U) ≤ ε`, binary Y only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GBounds {
    /// `H(Y) ε / I(X;Y)`
    pub lower: f64,
    /// `ε + H(Y|X)`
    pub upper_linear: f64,
    /// `m` at budget `sqrt(ε / (2 log₂e))`, from the lower bound of `I` by `T`.
    pub upper_tv: f64,
}

pub fn g_eps_bounds(src: &JointSource, eps_mi: f64) -> Result<GBounds> {
    let d = delta_l1(src)?;
    let i_xy = mutual_information(src.p_y(), src.channel_x_given_y(), src.marginal_x())?;
    if !(eps_mi >= 0.0 && eps_mi <= i_xy + 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "eps_mi must lie in [0, I(X;Y)] = [0, {i_xy}], got {eps_mi}"
        )));
    }
    let h_y = entropy_bits(src.p_y().as_slice());
    let p = src.p_y()[0];
    let lower = if i_xy > 0.0 { h_y * eps_mi / i_xy } else { h_y };
    Ok(GBounds {
        lower,
        upper_linear: eps_mi + h_y - i_xy,
        upper_tv: mi_binary(p, d, (eps_mi / (2.0 * LOG2_E)).sqrt()),
    })
}
