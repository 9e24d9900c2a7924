//! Dense two-phase primal simplex with Bland's anti-cycling rule.
//!
//! Problems have the form
//!
//! ```text
//! minimize    c·w
//! subject to  A_eq w = b_eq
//!             A_ub w ≤ b_ub
//!             w ≥ 0
//! ```
//!
//! The solver returns a basic optimal solution, so at most as many weights
//! are nonzero as there are (non-redundant) constraint rows. Instances here
//! have at most a few hundred columns, so a dense tableau is adequate.

use crate::error::{Error, Result};

/// Smallest magnitude accepted as a pivot element.
pub const PIVOT_TOL: f64 = 1e-10;

/// Largest tolerated constraint violation.
pub const FEAS_TOL: f64 = 1e-9;

const MAX_PIVOTS: usize = 200_000;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub eq_matrix: Vec<Vec<f64>>,
    pub eq_rhs: Vec<f64>,
    pub ub_matrix: Vec<Vec<f64>>,
    pub ub_rhs: Vec<f64>,
}

impl LpProblem {
    pub fn new(objective: Vec<f64>) -> Self {
        LpProblem {
            objective,
            ..Default::default()
        }
    }

    pub fn eq(mut self, row: Vec<f64>, rhs: f64) -> Self {
        self.eq_matrix.push(row);
        self.eq_rhs.push(rhs);
        self
    }

    pub fn ub(mut self, row: Vec<f64>, rhs: f64) -> Self {
        self.ub_matrix.push(row);
        self.ub_rhs.push(rhs);
        self
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.eq_rhs.len() + self.ub_rhs.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        let mismatch = |expected, found| Err(Error::DimensionMismatch { expected, found });
        if self.eq_matrix.len() != self.eq_rhs.len() {
            return mismatch(self.eq_matrix.len(), self.eq_rhs.len());
        }
        if self.ub_matrix.len() != self.ub_rhs.len() {
            return mismatch(self.ub_matrix.len(), self.ub_rhs.len());
        }
        for row in self.eq_matrix.iter().chain(&self.ub_matrix) {
            if row.len() != n {
                return mismatch(n, row.len());
            }
        }
        let finite = self
            .objective
            .iter()
            .chain(self.eq_rhs.iter())
            .chain(self.ub_rhs.iter())
            .chain(self.eq_matrix.iter().flatten())
            .chain(self.ub_matrix.iter().flatten())
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidArgument("non-finite LP coefficient".into()));
        }
        Ok(())
    }

    /// Largest violation of any constraint (including `w ≥ 0`) at `w`.
    pub fn max_violation(&self, w: &[f64]) -> f64 {
        let dot = |row: &[f64]| row.iter().zip(w).map(|(a, b)| a * b).sum::<f64>();
        let eq = self
            .eq_matrix
            .iter()
            .zip(&self.eq_rhs)
            .map(|(r, b)| (dot(r) - b).abs());
        let ub = self
            .ub_matrix
            .iter()
            .zip(&self.ub_rhs)
            .map(|(r, b)| (dot(r) - b).max(0.0));
        let nonneg = w.iter().map(|v| (-v).max(0.0));
        eq.chain(ub).chain(nonneg).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal weights; empty unless the status is optimal.
    pub weights: Vec<f64>,
    /// Optimal value; `+∞` when infeasible, `−∞` when unbounded.
    pub value: f64,
    /// Original variables in the final basis, in increasing order.
    pub basis: Vec<usize>,
}

impl LpSolution {
    fn without_optimum(status: LpStatus) -> Self {
        let value = match status {
            LpStatus::Unbounded => f64::NEG_INFINITY,
            _ => f64::INFINITY,
        };
        LpSolution {
            status,
            weights: Vec::new(),
            value,
            basis: Vec::new(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

struct Tableau {
    // rows[i] has `cols + 1` entries, the last being the right-hand side
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    // reduced costs, last entry is −(objective value)
    cost_row: Vec<f64>,
    cols: usize,
    allowed: Vec<bool>,
    pivots: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let width = self.cols + 1;
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        self.rows[r][c] = 1.0;
        let pivot_row = self.rows[r].clone();
        let eliminate = |row: &mut Vec<f64>| {
            let f = row[c];
            if f != 0.0 {
                for j in 0..width {
                    row[j] -= f * pivot_row[j];
                }
                row[c] = 0.0;
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.cost_row);
        self.basis[r] = c;
        self.pivots += 1;
    }

    fn set_costs(&mut self, costs: &[f64]) {
        let width = self.cols + 1;
        let mut row = vec![0.0; width];
        row[..self.cols].copy_from_slice(costs);
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = costs[b];
            if cb != 0.0 {
                for (v, &t) in row.iter_mut().zip(&self.rows[i]) {
                    *v -= cb * t;
                }
            }
        }
        for &b in &self.basis {
            row[b] = 0.0;
        }
        self.cost_row = row;
    }

    /// Runs Bland's rule to optimality.
    fn optimize(&mut self) -> Result<Outcome> {
        loop {
            if self.pivots > MAX_PIVOTS {
                return Err(Error::IterationLimit);
            }
            let entering =
                (0..self.cols).find(|&j| self.allowed[j] && self.cost_row[j] < -PIVOT_TOL);
            let Some(c) = entering else {
                return Ok(Outcome::Optimal);
            };
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = row[c];
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = row[self.cols].max(0.0) / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((k, best)) => {
                        if ratio < best - 1e-12
                            || ((ratio - best).abs() <= 1e-12 && self.basis[i] < self.basis[k])
                        {
                            Some((i, ratio))
                        } else {
                            Some((k, best))
                        }
                    }
                };
            }
            match leave {
                Some((r, _)) => self.pivot(r, c),
                None => return Ok(Outcome::Unbounded),
            }
        }
    }
}

/// Solves `p`, returning a basic optimal solution or the infeasible /
/// unbounded status. Errors only for malformed input.
pub fn solve(p: &LpProblem) -> Result<LpSolution> {
    p.validate()?;
    let n = p.num_vars();
    let m_eq = p.eq_rhs.len();
    let m_ub = p.ub_rhs.len();
    let m = m_eq + m_ub;

    // Columns: originals, one slack per inequality, then artificials.
    let slack0 = n;
    let art0 = n + m_ub;
    let mut needs_artificial = Vec::with_capacity(m);
    let mut raw_rows = Vec::with_capacity(m);
    for (row, &b) in p.eq_matrix.iter().zip(&p.eq_rhs) {
        let mut r = row.clone();
        r.extend(std::iter::repeat_n(0.0, m_ub));
        let sign = if b < 0.0 { -1.0 } else { 1.0 };
        raw_rows.push((r, b, sign));
        needs_artificial.push(true);
    }
    for (k, (row, &b)) in p.ub_matrix.iter().zip(&p.ub_rhs).enumerate() {
        let mut r = row.clone();
        r.extend(std::iter::repeat_n(0.0, m_ub));
        r[slack0 + k] = 1.0;
        let sign = if b < 0.0 { -1.0 } else { 1.0 };
        raw_rows.push((r, b, sign));
        needs_artificial.push(b < 0.0);
    }
    let n_art = needs_artificial.iter().filter(|&&a| a).count();
    let cols = art0 + n_art;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut next_art = art0;
    for (i, (r, b, sign)) in raw_rows.into_iter().enumerate() {
        let mut row: Vec<f64> = r.into_iter().map(|v| v * sign).collect();
        row.extend(std::iter::repeat_n(0.0, n_art));
        row.push(b * sign);
        if needs_artificial[i] {
            row[next_art] = 1.0;
            basis.push(next_art);
            next_art += 1;
        } else {
            basis.push(slack0 + (i - m_eq));
        }
        rows.push(row);
    }

    let mut t = Tableau {
        rows,
        basis,
        cost_row: Vec::new(),
        cols,
        allowed: vec![true; cols],
        pivots: 0,
    };

    // Phase one: minimize the sum of artificials.
    if n_art > 0 {
        let mut phase1 = vec![0.0; cols];
        phase1[art0..].iter_mut().for_each(|c| *c = 1.0);
        t.set_costs(&phase1);
        t.optimize()?;
        let infeasibility = -t.cost_row[cols];
        let scale = p
            .eq_rhs
            .iter()
            .chain(&p.ub_rhs)
            .fold(1.0f64, |acc, b| acc.max(b.abs()));
        if infeasibility > FEAS_TOL * scale {
            return Ok(LpSolution::without_optimum(LpStatus::Infeasible));
        }
        // Drive remaining artificials out of the basis; drop redundant rows.
        let mut redundant = Vec::new();
        for i in 0..t.rows.len() {
            if t.basis[i] < art0 {
                continue;
            }
            let replacement = (0..art0).find(|&j| t.rows[i][j].abs() > PIVOT_TOL);
            match replacement {
                Some(j) => t.pivot(i, j),
                None => redundant.push(i),
            }
        }
        for &i in redundant.iter().rev() {
            t.rows.remove(i);
            t.basis.remove(i);
        }
        for j in art0..cols {
            t.allowed[j] = false;
        }
        for row in t.rows.iter_mut() {
            let rhs = &mut row[cols];
            if *rhs < 0.0 {
                *rhs = 0.0;
            }
        }
    }

    // Phase two.
    let mut costs = vec![0.0; cols];
    costs[..n].copy_from_slice(&p.objective);
    t.set_costs(&costs);
    if let Outcome::Unbounded = t.optimize()? {
        return Ok(LpSolution::without_optimum(LpStatus::Unbounded));
    }

    let mut weights = vec![0.0; n];
    let mut basis: Vec<usize> = Vec::new();
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            weights[b] = t.rows[i][cols].max(0.0);
            basis.push(b);
        }
    }
    basis.sort_unstable();
    let value = p.objective.iter().zip(&weights).map(|(c, w)| c * w).sum();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        weights,
        value,
        basis,
    })
}

/// Whether the constraints of `p` admit a point (the objective is ignored).
pub fn feasible(p: &LpProblem) -> bool {
    let probe = LpProblem {
        objective: vec![0.0; p.num_vars()],
        ..p.clone()
    };
    matches!(solve(&probe), Ok(s) if s.is_optimal())
}
