//! Sign-pattern partition of the simplex `P(Y)` and its extreme points.
//!
//! Row `r_i` of `P_{X|Y}` gives the linear form `r_i·(x − p_Y)`. On the set
//! where every form has a fixed sign the privacy cost
//!
//! ```text
//! f(x) = ½ ‖P_{X|Y}(x − p_Y)‖₁ = ½ Σ_i |r_i·(x − p_Y)|
//! ```
//!
//! is affine, so each such region is a polytope
//! `{x ∈ P(Y) : Ã x ≤ b}` and the optimal posteriors of the trade-off can be
//! restricted to the union of the regions' extreme points.
//!
//! Extreme points are found as basic feasible solutions of the slack form
//! `[Ã I; 1ᵀ 0] z = [b; 1], z ≥ 0`: every choice of `rows` linearly
//! independent columns whose basic solution is nonnegative is a vertex.

use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::lp::{self, LpProblem, PIVOT_TOL};
use crate::probability::{JointSource, Pmf};

/// Most retained linear forms accepted by [`enumerate_regions`].
pub const MAX_FORMS: usize = 20;

/// Largest `|Y|` accepted by [`partition_simplex`].
pub const MAX_Y: usize = 10;

/// L∞ distance under which two points are the same.
pub const DEDUP_TOL: f64 = 1e-9;

// Coefficient spread below which a form is constant on the simplex.
const ZERO_FORM_TOL: f64 = 1e-12;

/// `x ↦ coeffs·x + offset`, equal to `r·(x − p_Y)` for a row `r` of `P_{X|Y}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearForm {
    pub coeffs: Vec<f64>,
    pub offset: f64,
    /// Row of `P_{X|Y}` this form came from.
    pub row: usize,
}

impl LinearForm {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + self.offset
    }

    // Coefficients with their mean removed: two forms agree on the simplex
    // iff their centred coefficients and values at any simplex point agree.
    fn centred(&self) -> (Vec<f64>, f64) {
        let n = self.coeffs.len() as f64;
        let mean = self.coeffs.iter().sum::<f64>() / n;
        let c = self.coeffs.iter().map(|a| a - mean).collect();
        (c, self.offset + mean)
    }
}

/// The retained forms of a source and the rows that were discarded.
#[derive(Debug, Clone, PartialEq)]
pub struct FormSet {
    pub forms: Vec<LinearForm>,
    /// Rows whose form vanishes identically on the simplex.
    pub dropped_zero: Vec<usize>,
    /// `(row, kept_row)`: rows that are a positive multiple of an earlier
    /// retained form on the simplex.
    pub merged: Vec<(usize, usize)>,
    /// Scale of each retained form: the merged rows add to it.
    pub weights: Vec<f64>,
}

impl FormSet {
    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }
}

/// One form per row of `P_{X|Y}`; constant rows are dropped and positive
/// multiples of an earlier form are merged into it.
pub fn build_linear_forms(src: &JointSource) -> FormSet {
    let p_y = src.p_y().as_slice();
    let ch = src.channel_x_given_y();
    let mut set = FormSet {
        forms: Vec::new(),
        dropped_zero: Vec::new(),
        merged: Vec::new(),
        weights: Vec::new(),
    };
    for row in 0..ch.outputs() {
        let coeffs = ch.row(row).to_vec();
        let (hi, lo) = coeffs
            .iter()
            .fold((f64::NEG_INFINITY, f64::INFINITY), |(h, l), &v| {
                (h.max(v), l.min(v))
            });
        if hi - lo <= ZERO_FORM_TOL {
            set.dropped_zero.push(row);
            continue;
        }
        let offset = -coeffs.iter().zip(p_y).map(|(a, b)| a * b).sum::<f64>();
        let form = LinearForm {
            coeffs,
            offset,
            row,
        };
        match set
            .forms
            .iter()
            .position(|f| positive_multiple(f, &form).is_some())
        {
            Some(k) => {
                let scale = positive_multiple(&set.forms[k], &form).unwrap();
                set.weights[k] += scale;
                set.merged.push((row, set.forms[k].row));
            }
            None => {
                set.forms.push(form);
                set.weights.push(1.0);
            }
        }
    }
    set
}

// Some(s) with s > 0 if `g = s·f` on the simplex.
fn positive_multiple(f: &LinearForm, g: &LinearForm) -> Option<f64> {
    let (cf, _) = f.centred();
    let (cg, _) = g.centred();
    let (k, &pivot) = cf
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))?;
    let s = cg[k] / pivot;
    if s <= 0.0 {
        return None;
    }
    let same = cf
        .iter()
        .zip(&cg)
        .all(|(a, b)| (s * a - b).abs() <= 1e-12 * (1.0 + b.abs()));
    same.then_some(s)
}

/// `f(x) = ½ Σ_i |form_i(x)|`, the privacy cost of releasing posterior `x`.
pub fn f_value(forms: &FormSet, x: &[f64]) -> f64 {
    0.5 * forms
        .forms
        .iter()
        .zip(&forms.weights)
        .map(|(f, w)| w * f.eval(x).abs())
        .sum::<f64>()
}

/// `{x ∈ P(Y) : Ã x ≤ b}` for one sign pattern of the retained forms.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    /// `+1` where the form is nonnegative on the region, `−1` where it is not positive.
    pub sign_pattern: Vec<i8>,
    pub a_tilde: Vec<Vec<f64>>,
    pub b_tilde: Vec<f64>,
}

impl Region {
    fn from_pattern(forms: &FormSet, sign_pattern: Vec<i8>) -> Self {
        // σ (c·x + o) ≥ 0  ⇔  −σ c·x ≤ σ o
        let (a_tilde, b_tilde) = forms
            .forms
            .iter()
            .zip(&sign_pattern)
            .map(|(f, &s)| {
                let s = f64::from(s);
                (f.coeffs.iter().map(|a| -s * a).collect(), s * f.offset)
            })
            .unzip();
        Region {
            sign_pattern,
            a_tilde,
            b_tilde,
        }
    }

    pub fn dim(&self) -> usize {
        self.a_tilde.first().map_or(0, Vec::len)
    }

    /// Smallest margin `b_i − Ã_i x`; nonnegative iff `x` satisfies every row.
    pub fn membership_slack(&self, x: &[f64]) -> f64 {
        self.a_tilde
            .iter()
            .zip(&self.b_tilde)
            .map(|(row, b)| b - row.iter().zip(x).map(|(a, v)| a * v).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
    }

    /// The region's constraints as an LP over the simplex.
    pub fn as_lp(&self, n: usize) -> LpProblem {
        let mut p = LpProblem::new(vec![0.0; n]).eq(vec![1.0; n], 1.0);
        for (row, &b) in self.a_tilde.iter().zip(&self.b_tilde) {
            p = p.ub(row.clone(), b);
        }
        p
    }
}

/// Every nonempty sign-pattern region, in lexicographic pattern order with
/// `+` before `−`.
pub fn enumerate_regions(forms: &FormSet, n: usize) -> Result<Vec<Region>> {
    enumerate_regions_with(forms, n, Strategy::default())
}

pub fn enumerate_regions_with(
    forms: &FormSet,
    n: usize,
    strategy: Strategy,
) -> Result<Vec<Region>> {
    let m = forms.len();
    if m > MAX_FORMS {
        return Err(Error::TooManyForms {
            count: m,
            cap: MAX_FORMS,
        });
    }
    let candidates = exec::map_indexed(1usize << m, strategy, |code| {
        let pattern: Vec<i8> = (0..m)
            .map(|i| if code >> (m - 1 - i) & 1 == 0 { 1 } else { -1 })
            .collect();
        let region = Region::from_pattern(forms, pattern);
        lp::feasible(&region.as_lp(n)).then_some(region)
    });
    Ok(candidates.into_iter().flatten().collect())
}

// Gaussian elimination with partial pivoting on a square system.
// Returns None when a pivot falls below PIVOT_TOL.
fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let r = b.len();
    for col in 0..r {
        let piv = (col..r).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < PIVOT_TOL {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let pivot = a[col].clone();
        for i in col + 1..r {
            let f = a[i][col] / pivot[col];
            if f != 0.0 {
                for (v, &p) in a[i][col..r].iter_mut().zip(&pivot[col..r]) {
                    *v -= f * p;
                }
                b[i] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; r];
    for i in (0..r).rev() {
        let s: f64 = (i + 1..r).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn push_unique(points: &mut Vec<Pmf>, p: Pmf) -> Option<usize> {
    let dup = points
        .iter()
        .position(|q| linf(q.as_slice(), p.as_slice()) <= DEDUP_TOL);
    match dup {
        Some(_) => None,
        None => {
            points.push(p);
            Some(points.len() - 1)
        }
    }
}

fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Extreme points of a region, enumerated as basic feasible solutions.
pub fn region_extreme_points(region: &Region, n: usize) -> Result<Vec<Pmf>> {
    let m = region.a_tilde.len();
    let rows = m + 1;
    let cols = n + m;
    // augmented matrix [Ã I; 1ᵀ 0]
    let mut a = vec![vec![0.0; cols]; rows];
    for i in 0..m {
        a[i][..n].copy_from_slice(&region.a_tilde[i]);
        a[i][n + i] = 1.0;
    }
    a[m][..n].iter_mut().for_each(|v| *v = 1.0);
    let mut rhs = region.b_tilde.clone();
    rhs.push(1.0);

    let mut points: Vec<Pmf> = Vec::new();
    let mut idx: Vec<usize> = (0..rows).collect();
    loop {
        let sub: Vec<Vec<f64>> = a
            .iter()
            .map(|row| idx.iter().map(|&j| row[j]).collect())
            .collect();
        if let Some(z) = solve_square(sub, rhs.clone()) {
            if z.iter().all(|&v| v >= -lp::FEAS_TOL) {
                let mut x = vec![0.0; n];
                for (&j, &v) in idx.iter().zip(&z) {
                    if j < n {
                        x[j] = v.max(0.0);
                    }
                }
                if let Ok(p) = Pmf::from_computed(x) {
                    push_unique(&mut points, p);
                }
            }
        }
        if !next_combination(&mut idx, cols) {
            break;
        }
    }
    if points.is_empty() {
        return Err(Error::DegenerateSystem);
    }
    Ok(points)
}

/// The deduplicated union of all regions' extreme points.
#[derive(Debug, Clone, PartialEq)]
pub struct SPointSet {
    pub points: Vec<Pmf>,
    pub f_values: Vec<f64>,
    /// Regions in which each point was found; the first entry owns it.
    pub region_index: Vec<Vec<usize>>,
}

impl SPointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of the point within `tol` (L∞) of `x`, if any.
    pub fn find(&self, x: &[f64], tol: f64) -> Option<usize> {
        self.points
            .iter()
            .position(|p| linf(p.as_slice(), x) <= tol)
    }
}

/// A region together with its extreme points.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionVertices {
    pub region: Region,
    pub extreme_points: Vec<Pmf>,
}

/// Forms, regions and extreme points of one source.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPartition {
    pub forms: FormSet,
    pub regions: Vec<RegionVertices>,
    pub spoints: SPointSet,
}

pub fn partition_simplex(src: &JointSource) -> Result<SimplexPartition> {
    partition_simplex_with(src, Strategy::default())
}

pub fn partition_simplex_with(src: &JointSource, strategy: Strategy) -> Result<SimplexPartition> {
    let n = src.y_size();
    if n > MAX_Y {
        return Err(Error::AlphabetTooLarge {
            size: n,
            cap: MAX_Y,
        });
    }
    let forms = build_linear_forms(src);
    let regions = enumerate_regions_with(&forms, n, strategy)?;
    let vertices = exec::try_map_indexed(regions.len(), strategy, |i| {
        region_extreme_points(&regions[i], n)
    })?;

    let mut spoints = SPointSet {
        points: Vec::new(),
        f_values: Vec::new(),
        region_index: Vec::new(),
    };
    for (r, pts) in vertices.iter().enumerate() {
        for p in pts {
            match spoints.find(p.as_slice(), DEDUP_TOL) {
                Some(k) => spoints.region_index[k].push(r),
                None => {
                    let f = f_value(&forms, p.as_slice());
                    spoints.f_values.push(if f < 1e-14 { 0.0 } else { f });
                    spoints.points.push(p.clone());
                    spoints.region_index.push(vec![r]);
                }
            }
        }
    }
    let regions = regions
        .into_iter()
        .zip(vertices)
        .map(|(region, extreme_points)| RegionVertices {
            region,
            extreme_points,
        })
        .collect();
    Ok(SimplexPartition {
        forms,
        regions,
        spoints,
    })
}

/// The support set `𝕊` of optimal posteriors for a source.
pub fn enumerate_spoints(src: &JointSource) -> Result<SPointSet> {
    Ok(partition_simplex(src)?.spoints)
}
