//! Bayesian inference threats against a release.
//!
//! An attacker who wants to learn X picks a belief `q` over its alphabet and
//! pays `C(x, q)`. Without the release the best expected cost is
//! `c₀* = min_q E[C(X, q)]`; after seeing `U = u` it is
//! `c_u* = min_q E[C(X, q) | U = u]`. The inference gain
//! `ΔC = c₀* − E_U[c_U*]` is at most `4 L · T(X;U)` whenever the cost is
//! bounded by `L`.

use crate::error::{Error, Result};
use crate::leakage::{avg_tv_leakage, mutual_information};
use crate::probability::{entropy, Channel, Pmf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CostKind {
    /// `−log₂ q(x)`; unbounded.
    LogLoss,
    /// `Σ_{x'} (1{x = x'} − q(x'))²`, bounded by 2.
    Brier,
    /// Brier cost with beliefs restricted to a finite menu.
    FiniteMenu,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostFunction {
    kind: CostKind,
    menu: Vec<Pmf>,
    bound_l: Option<f64>,
}

/// Brier cost `1 − 2 q(x) + Σ q²`.
fn brier(x: usize, q: &Pmf) -> f64 {
    1.0 - 2.0 * q[x] + q.iter().map(|v| v * v).sum::<f64>()
}

impl CostFunction {
    pub fn log_loss() -> Self {
        CostFunction {
            kind: CostKind::LogLoss,
            menu: Vec::new(),
            bound_l: None,
        }
    }

    pub fn brier() -> Self {
        CostFunction {
            kind: CostKind::Brier,
            menu: Vec::new(),
            bound_l: Some(2.0),
        }
    }

    /// Brier cost over the given beliefs; `L` is found by enumerating the
    /// menu against every symbol.
    pub fn finite_menu(menu: Vec<Pmf>) -> Result<Self> {
        let n = menu.first().ok_or(Error::EmptyMenu)?.len();
        if let Some(bad) = menu.iter().find(|q| q.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        let bound = menu
            .iter()
            .flat_map(|q| (0..n).map(move |x| brier(x, q).abs()))
            .fold(0.0, f64::max);
        Ok(CostFunction {
            kind: CostKind::FiniteMenu,
            menu,
            bound_l: Some(bound),
        })
    }

    pub fn kind(&self) -> CostKind {
        self.kind
    }

    pub fn menu(&self) -> &[Pmf] {
        &self.menu
    }

    /// `L = sup |C(x, q)|`, or `None` for log-loss.
    pub fn bound_l(&self) -> Option<f64> {
        self.bound_l
    }

    /// `C(x, q)`, in bits for log-loss.
    pub fn cost(&self, x: usize, q: &Pmf) -> f64 {
        match self.kind {
            CostKind::LogLoss => -q[x].log2(),
            CostKind::Brier | CostKind::FiniteMenu => brier(x, q),
        }
    }

    /// `E_p[C(X, q)]`; zero-probability symbols contribute nothing.
    pub fn expected_cost(&self, p: &Pmf, q: &Pmf) -> f64 {
        p.iter()
            .enumerate()
            .filter(|(_, &px)| px > 0.0)
            .map(|(x, &px)| px * self.cost(x, q))
            .sum()
    }
}

/// The attacker's best belief against `p` and its expected cost.
pub fn optimal_belief(cost: &CostFunction, p: &Pmf) -> Result<(Pmf, f64)> {
    match cost.kind {
        CostKind::LogLoss => Ok((p.clone(), entropy(p))),
        CostKind::Brier => {
            let value = 1.0 - p.iter().map(|v| v * v).sum::<f64>();
            Ok((p.clone(), value))
        }
        CostKind::FiniteMenu => {
            let mut best: Option<(usize, f64)> = None;
            for (i, q) in cost.menu.iter().enumerate() {
                if q.len() != p.len() {
                    return Err(Error::DimensionMismatch {
                        expected: p.len(),
                        found: q.len(),
                    });
                }
                let c = cost.expected_cost(p, q);
                // strict comparison keeps the lowest index on ties
                if best.is_none_or(|(_, b)| c < b) {
                    best = Some((i, c));
                }
            }
            let (i, c) = best.ok_or(Error::EmptyMenu)?;
            Ok((cost.menu[i].clone(), c))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreatReport {
    pub c0_star: f64,
    pub expected_cu_star: f64,
    pub delta_c: f64,
    pub t_leakage: f64,
    /// `4 L T(X;U)` for bounded costs.
    pub bound_4lt: Option<f64>,
    /// `4 L T(X;U) − ΔC`
    pub slack: Option<f64>,
    /// `|ΔC − I(X;U)|`, log-loss only.
    pub log_loss_mi_gap: Option<f64>,
}

pub fn inference_gain(
    cost: &CostFunction,
    p_u: &Pmf,
    p_x_given_u: &Channel,
    p_x: &Pmf,
) -> Result<ThreatReport> {
    let t_leakage = avg_tv_leakage(p_u, p_x_given_u, p_x)?;
    let (_, c0_star) = optimal_belief(cost, p_x)?;
    let mut expected_cu_star = 0.0;
    for u in 0..p_u.len() {
        if p_u[u] > 0.0 {
            let (_, c) = optimal_belief(cost, &p_x_given_u.column_pmf(u))?;
            expected_cu_star += p_u[u] * c;
        }
    }
    let delta_c = c0_star - expected_cu_star;
    let bound_4lt = cost.bound_l.map(|l| 4.0 * l * t_leakage);
    let log_loss_mi_gap = match cost.kind {
        CostKind::LogLoss => Some((delta_c - mutual_information(p_u, p_x_given_u, p_x)?).abs()),
        _ => None,
    };
    Ok(ThreatReport {
        c0_star,
        expected_cu_star,
        delta_c,
        t_leakage,
        bound_4lt,
        slack: bound_4lt.map(|b| b - delta_c),
        log_loss_mi_gap,
    })
}
