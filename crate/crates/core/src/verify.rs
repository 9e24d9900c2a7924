//! Seeded randomized invariant suites.
//!
//! Each suite draws independent instances (instance `i` uses stream `i` of
//! the seed, see [`crate::random::instance_rng`]), evaluates a fixed list of
//! signed slacks on each, and reports the minimum of every slack together
//! with the instance that attained it. A check passes when its minimum is at
//! least its threshold, which is minus the numeric tolerance for
//! inequalities.

use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::leakage::{
    avg_tv_from_joint, is_linkage_consistent, is_postprocessing_consistent, linkage_counterexample,
    lp_linkage_slack, maximal_leakage, LeakageReport, NormExponent, Perturbation,
};
use crate::lp::{self, LpProblem, LpStatus};
use crate::probability::{bayes_invert, Pmf};
use crate::random::{instance_rng, random_channel, random_markov_chain, random_pmf};
use crate::threats::{inference_gain, CostFunction};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 1729;

/// `p_B` of the fixed chain on which only the `L¹` average satisfies linkage.
pub const COUNTEREXAMPLE_P_B: [f64; 6] = [0.1, 0.15, 0.2, 0.25, 0.2, 0.1];
pub const COUNTEREXAMPLE_DELTA: f64 = 0.01;

const BOUND_TOL: f64 = 1e-8;
const IDENTITY_TOL: f64 = 1e-9;
const MAX_ALPHABET: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Bounds,
    Markov,
    Threats,
    Lp,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Bounds, Suite::Markov, Suite::Threats, Suite::Lp];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Bounds => "bounds",
            Suite::Markov => "markov",
            Suite::Threats => "threats",
            Suite::Lp => "lp",
        }
    }

    /// Parses a suite name or `all`.
    pub fn selection(s: &str) -> Result<Vec<Suite>> {
        if s == "all" {
            Ok(Suite::ALL.to_vec())
        } else {
            Ok(vec![s.parse()?])
        }
    }

    fn checks(self) -> &'static [(&'static str, f64)] {
        match self {
            Suite::Bounds => &[
                ("mi_above_tv_square", -BOUND_TOL),
                ("ml_above_mi", -BOUND_TOL),
                ("ml_below_tv_upper", -BOUND_TOL),
                ("ml_above_tv_lower", -BOUND_TOL),
                ("worst_case_above_mi", -BOUND_TOL),
                ("tv_joint_form_agreement", -IDENTITY_TOL),
                ("ml_bayes_roundtrip", -IDENTITY_TOL),
            ],
            Suite::Markov => &[
                ("postprocessing", -IDENTITY_TOL),
                ("linkage", -IDENTITY_TOL),
            ],
            Suite::Threats => &[
                ("brier_gain_bound", -BOUND_TOL),
                ("menu_gain_bound", -BOUND_TOL),
                ("gain_nonnegative", -IDENTITY_TOL),
                ("log_loss_mi_identity", -IDENTITY_TOL),
                ("log_loss_ml_superbound", -BOUND_TOL),
            ],
            Suite::Lp => &[
                ("strong_duality", -BOUND_TOL),
                ("primal_feasibility", -IDENTITY_TOL),
                ("basic_solution", 0.0),
                ("determinism", 0.0),
            ],
        }
    }

    fn instance(self, rng: &mut impl Rng) -> Result<Vec<f64>> {
        match self {
            Suite::Bounds => bounds_instance(rng),
            Suite::Markov => markov_instance(rng),
            Suite::Threats => threats_instance(rng),
            Suite::Lp => lp_instance(rng),
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    /// Smallest slack seen.
    pub min_slack: f64,
    pub threshold: f64,
    /// Instance attaining the minimum; `None` for fixed-fixture checks.
    pub worst_instance: Option<usize>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.min_slack >= self.threshold
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub instances: usize,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub fn run_suite(
    suite: Suite,
    instances: usize,
    seed: u64,
    strategy: Strategy,
) -> Result<SuiteReport> {
    let slacks = exec::try_map_indexed(instances, strategy, |i| {
        suite.instance(&mut instance_rng(seed, i as u64))
    })?;
    let mut checks: Vec<Check> = suite
        .checks()
        .iter()
        .map(|&(name, threshold)| Check {
            name,
            min_slack: f64::INFINITY,
            threshold,
            worst_instance: None,
        })
        .collect();
    for (i, row) in slacks.iter().enumerate() {
        for (check, &s) in checks.iter_mut().zip(row) {
            // NaN must fail, never hide behind a comparison
            if s.is_nan() || s < check.min_slack {
                check.min_slack = if s.is_nan() { f64::NEG_INFINITY } else { s };
                check.worst_instance = Some(i);
            }
        }
    }
    if suite == Suite::Markov {
        checks.extend(counterexample_checks()?);
    }
    Ok(SuiteReport {
        suite,
        seed,
        instances,
        checks,
    })
}

fn alphabet(rng: &mut impl Rng) -> usize {
    rng.random_range(2..=MAX_ALPHABET)
}

fn bounds_instance(rng: &mut impl Rng) -> Result<Vec<f64>> {
    let nx = alphabet(rng);
    let nu = alphabet(rng);
    let p_x = random_pmf(rng, nx);
    let p_u_given_x = random_channel(rng, nu, nx);
    let (p_u, p_x_given_u, _) = bayes_invert(&p_x, &p_u_given_x)?;
    let report = LeakageReport::compute(&p_u, &p_x_given_u, &p_x)?;
    let s = report.slacks();
    let joint: Vec<Vec<f64>> = (0..nx)
        .map(|x| (0..nu).map(|u| p_x[x] * p_u_given_x.get(u, x)).collect())
        .collect();
    Ok(vec![
        s.mi_lower,
        s.mi_below_ml,
        s.ml_upper,
        s.ml_lower,
        s.worst_case_above_mi,
        -(report.t_leakage - avg_tv_from_joint(&joint)).abs(),
        -(report.maximal_leakage_bits - maximal_leakage(&p_u_given_x)).abs(),
    ])
}

fn markov_instance(rng: &mut impl Rng) -> Result<Vec<f64>> {
    let (na, nb, nc) = (alphabet(rng), alphabet(rng), alphabet(rng));
    let chain = random_markov_chain(rng, na, nb, nc);
    Ok(vec![
        is_postprocessing_consistent(&chain)?.slack,
        is_linkage_consistent(&chain)?.slack,
    ])
}

/// Linkage on the fixed counterexample chain: the `L¹` average keeps it,
/// the `L²`, `L^∞` and `p = ½` averages must visibly break it.
fn counterexample_checks() -> Result<Vec<Check>> {
    let p_b = Pmf::new(COUNTEREXAMPLE_P_B.to_vec())?;
    let paired = linkage_counterexample(&p_b, COUNTEREXAMPLE_DELTA, Perturbation::Paired)?;
    let sparse = linkage_counterexample(&p_b, COUNTEREXAMPLE_DELTA, Perturbation::Sparse)?;
    let fixed = |name, min_slack, threshold| Check {
        name,
        min_slack,
        threshold,
        worst_instance: None,
    };
    Ok(vec![
        fixed(
            "counterexample_l1_linkage",
            lp_linkage_slack(&paired, NormExponent::Finite(1.0))?.slack,
            -IDENTITY_TOL,
        ),
        fixed(
            "counterexample_l2_violation",
            -lp_linkage_slack(&paired, NormExponent::Finite(2.0))?.slack,
            f64::MIN_POSITIVE,
        ),
        fixed(
            "counterexample_linf_violation",
            -lp_linkage_slack(&paired, NormExponent::Infinity)?.slack,
            f64::MIN_POSITIVE,
        ),
        fixed(
            "counterexample_half_violation",
            -lp_linkage_slack(&sparse, NormExponent::Finite(0.5))?.slack,
            f64::MIN_POSITIVE,
        ),
    ])
}

fn random_menu(rng: &mut impl Rng, n: usize) -> Result<CostFunction> {
    let size = rng.random_range(1..=4);
    let mut menu: Vec<Pmf> = (0..size).map(|_| random_pmf(rng, n)).collect();
    if rng.random_bool(0.5) {
        menu.extend((0..n).map(|x| Pmf::point_mass(n, x)));
    }
    CostFunction::finite_menu(menu)
}

fn threats_instance(rng: &mut impl Rng) -> Result<Vec<f64>> {
    let nx = alphabet(rng);
    let nu = alphabet(rng);
    let p_x = random_pmf(rng, nx);
    let p_u_given_x = random_channel(rng, nu, nx);
    let (p_u, p_x_given_u, _) = bayes_invert(&p_x, &p_u_given_x)?;
    let menu = random_menu(rng, nx)?;

    let brier = inference_gain(&CostFunction::brier(), &p_u, &p_x_given_u, &p_x)?;
    let finite = inference_gain(&menu, &p_u, &p_x_given_u, &p_x)?;
    let log = inference_gain(&CostFunction::log_loss(), &p_u, &p_x_given_u, &p_x)?;
    let superbound = (1.0 + log.t_leakage / p_x.min()).log2();
    Ok(vec![
        brier.slack.expect("brier is bounded"),
        finite.slack.expect("menus are bounded"),
        brier.delta_c.min(finite.delta_c).min(log.delta_c),
        -log.log_loss_mi_gap
            .expect("log-loss reports the identity gap"),
        superbound - log.delta_c,
    ])
}

/// A random bounded LP with a known feasible point, compared against its
/// dual solved by the same simplex.
fn lp_instance(rng: &mut impl Rng) -> Result<Vec<f64>> {
    let m = rng.random_range(1..=4);
    let n = rng.random_range(m + 1..=8);
    let x0: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let a: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let dot = |r: &[f64], v: &[f64]| r.iter().zip(v).map(|(p, q)| p * q).sum::<f64>();
    let b: Vec<f64> = a.iter().map(|r| dot(r, &x0)).collect();
    let g = vec![1.0; n];
    let h = x0.iter().sum::<f64>() + rng.random::<f64>();
    let c: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..1.0)).collect();

    let mut primal = LpProblem::new(c.clone()).ub(g.clone(), h);
    for (row, &rhs) in a.iter().zip(&b) {
        primal = primal.eq(row.clone(), rhs);
    }
    let sol = lp::solve(&primal)?;
    let again = lp::solve(&primal)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::InvalidArgument(format!(
            "feasible bounded LP reported {:?}",
            sol.status
        )));
    }

    // dual: max bᵀy − h z  s.t.  Aᵀy − g z ≤ c, y free, z ≥ 0,
    // written as a minimization over (y⁺, y⁻, z) ≥ 0
    let mut dual_obj: Vec<f64> = b.iter().map(|v| -v).collect();
    dual_obj.extend(b.iter().copied());
    dual_obj.push(h);
    let mut dual = LpProblem::new(dual_obj);
    for j in 0..n {
        let mut row: Vec<f64> = a.iter().map(|r| r[j]).collect();
        row.extend(a.iter().map(|r| -r[j]));
        row.push(-g[j]);
        dual = dual.ub(row, c[j]);
    }
    let dual_sol = lp::solve(&dual)?;
    let gap = if dual_sol.status == LpStatus::Optimal {
        (sol.value + dual_sol.value).abs() / (1.0 + sol.value.abs())
    } else {
        f64::INFINITY
    };

    let nonzeros = sol.weights.iter().filter(|&&w| w > 0.0).count();
    let identical = sol.basis == again.basis
        && sol
            .weights
            .iter()
            .zip(&again.weights)
            .all(|(p, q)| p.to_bits() == q.to_bits());
    Ok(vec![
        -gap,
        -primal.max_violation(&sol.weights),
        primal.num_rows() as f64 - nonzeros as f64,
        if identical { 0.0 } else { -1.0 },
    ])
}
