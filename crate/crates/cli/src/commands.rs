//! Subcommand handlers. Each returns the text it emits.

use serde_json::{json, Map, Value};

use tvpriv::leakage::LeakageReport;
use tvpriv::probability::{compose, JointSource, Mechanism, ULabels};
use tvpriv::regions::partition_simplex;
use tvpriv::threats::{inference_gain, CostFunction};
use tvpriv::tradeoff::{utility_of, TradeoffSolver, UtilityKind};
use tvpriv::verify::{run_suite, Suite, SuiteReport};
use tvpriv::Strategy;

use crate::io::{num, nums, round12, rows};
use crate::CliError;

fn labels_json(labels: &ULabels, support: usize) -> (Value, &'static str) {
    match labels {
        ULabels::Opaque => (json!((0..support).collect::<Vec<_>>()), "opaque"),
        ULabels::Symbols(s) => (json!(s), "symbols"),
        ULabels::Estimates(e) => (nums(e), "estimates"),
    }
}

fn mechanism_json(mech: &Mechanism, src: &JointSource) -> Result<Value, CliError> {
    let c = compose(mech, src)?;
    let (labels, kind) = labels_json(&mech.u_labels, mech.support_size());
    let p_y_given_u: Vec<Vec<f64>> = (0..c.p_u.len()).map(|k| c.p_y_given_u.column(k)).collect();
    Ok(json!({
        "p_u": nums(c.p_u.as_slice()),
        "p_y_given_u": rows(&p_y_given_u),
        "p_u_given_y": rows(&mech.channel_u_given_y.rows()),
        "u_labels": labels,
        "label_kind": kind,
    }))
}

pub fn solve(
    src: &JointSource,
    name: Option<&str>,
    kind: UtilityKind,
    eps: f64,
) -> Result<Value, CliError> {
    let solver = TradeoffSolver::new(src)?;
    let sol = solver.solve(kind, eps)?;
    Ok(json!({
        "source": name,
        "utility_kind": kind.as_str(),
        "log_base": 2,
        "epsilon_requested": num(sol.epsilon_requested),
        "epsilon_clamped": num(sol.epsilon),
        "t_xy": num(solver.t_xy()),
        "utility": num(sol.utility_value),
        "achieved_t": num(sol.achieved_t),
        "mechanism": mechanism_json(&sol.mechanism, src)?,
    }))
}

pub fn curve(src: &JointSource, kind: UtilityKind, grid: usize) -> Result<String, CliError> {
    let points = TradeoffSolver::new(src)?.sweep(kind, grid)?;
    let mut out = String::from("epsilon,utility,achieved_t\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{}\n",
            round12(p.epsilon),
            round12(p.utility_value),
            round12(p.achieved_t)
        ));
    }
    Ok(out)
}

pub fn measure(src: &JointSource, mech: &Mechanism) -> Result<Value, CliError> {
    let c = compose(mech, src)?;
    let r = LeakageReport::compute(&c.p_u, &c.p_x_given_u, src.marginal_x())?;
    let s = r.slacks();
    let mut utility = Map::new();
    utility.insert(
        "mutual_information".into(),
        num(utility_of(mech, src, UtilityKind::MutualInformation)?),
    );
    match &mech.u_labels {
        ULabels::Estimates(_) if src.y_values().is_some() => {
            utility.insert(
                "mmse".into(),
                num(utility_of(mech, src, UtilityKind::Mmse)?),
            );
        }
        ULabels::Symbols(_) => {
            utility.insert(
                "error_probability".into(),
                num(utility_of(mech, src, UtilityKind::ErrorProbability)?),
            );
        }
        _ => {}
    }
    Ok(json!({
        "log_base": 2,
        "t_leakage": num(r.t_leakage),
        "mutual_info_bits": num(r.mutual_info_bits),
        "maximal_leakage_bits": num(r.maximal_leakage_bits),
        "max_info_leakage_bits": num(r.max_info_leakage_bits),
        "bounds": {
            "mi_lower": num(r.bound_mi_lower),
            "ml_upper": num(r.bound_ml_upper),
            "ml_lower": num(r.bound_ml_lower),
        },
        "slacks": {
            "mi_lower": num(s.mi_lower),
            "mi_below_ml": num(s.mi_below_ml),
            "ml_upper": num(s.ml_upper),
            "ml_lower": num(s.ml_lower),
            "worst_case_above_mi": num(s.worst_case_above_mi),
        },
        "utility": utility,
    }))
}

pub fn regions(src: &JointSource) -> Result<Value, CliError> {
    let part = partition_simplex(src)?;
    let regions: Vec<Value> = part
        .regions
        .iter()
        .map(|rv| {
            let pts: Vec<Vec<f64>> = rv
                .extreme_points
                .iter()
                .map(|p| p.as_slice().to_vec())
                .collect();
            json!({
                "sign_pattern": rv.region.sign_pattern,
                "A_tilde": rows(&rv.region.a_tilde),
                "b_tilde": nums(&rv.region.b_tilde),
                "extreme_points": rows(&pts),
            })
        })
        .collect();
    let s = &part.spoints;
    let spoints: Vec<Value> = (0..s.len())
        .map(|i| {
            json!({
                "point": nums(s.points[i].as_slice()),
                "f_value": num(s.f_values[i]),
                "regions": s.region_index[i],
            })
        })
        .collect();
    Ok(json!({
        "forms": {
            "retained_rows": part.forms.forms.iter().map(|f| f.row).collect::<Vec<_>>(),
            "dropped_rows": part.forms.dropped_zero,
            "merged_rows": part.forms.merged,
        },
        "regions": regions,
        "spoints": spoints,
    }))
}

pub fn threat(src: &JointSource, mech: &Mechanism, cost: &str) -> Result<Value, CliError> {
    let cost_fn = match cost {
        "brier" => CostFunction::brier(),
        "log_loss" => CostFunction::log_loss(),
        other => {
            return Err(CliError::Validation(format!(
                "--cost: unknown cost '{other}', expected brier or log_loss"
            )))
        }
    };
    let c = compose(mech, src)?;
    let r = inference_gain(&cost_fn, &c.p_u, &c.p_x_given_u, src.marginal_x())?;
    let opt = |v: Option<f64>| v.map_or(Value::Null, num);
    Ok(json!({
        "cost": cost,
        "c0_star": num(r.c0_star),
        "expected_cu_star": num(r.expected_cu_star),
        "delta_c": num(r.delta_c),
        "t_leakage": num(r.t_leakage),
        "bound_l": opt(cost_fn.bound_l()),
        "bound_4lt": opt(r.bound_4lt),
        "slack": opt(r.slack),
        "log_loss_mi_gap": opt(r.log_loss_mi_gap),
    }))
}

pub fn verify(
    suites: &[Suite],
    instances: usize,
    seed: u64,
    strategy: Strategy,
) -> Result<(Vec<SuiteReport>, String), CliError> {
    let mut text = String::new();
    let mut reports = Vec::new();
    for &suite in suites {
        let r = run_suite(suite, instances, seed, strategy)?;
        text.push_str(&format!(
            "suite {} ({} instances, seed {}): {}\n",
            suite.name(),
            instances,
            seed,
            if r.passed() { "ok" } else { "FAILED" }
        ));
        for c in &r.checks {
            let at = c
                .worst_instance
                .map_or_else(|| "fixed".to_string(), |i| format!("instance {i}"));
            text.push_str(&format!(
                "  {:<32} min slack {:>12.4e}  threshold {:>9.1e}  {:<4} ({at})\n",
                c.name,
                c.min_slack,
                c.threshold,
                if c.passed() { "ok" } else { "FAIL" },
            ));
        }
        reports.push(r);
    }
    Ok((reports, text))
}

pub fn verify_json(reports: &[SuiteReport]) -> Value {
    Value::Array(
        reports
            .iter()
            .map(|r| {
                json!({
                    "suite": r.suite.name(),
                    "seed": r.seed,
                    "instances": r.instances,
                    "passed": r.passed(),
                    "checks": r.checks.iter().map(|c| json!({
                        "name": c.name,
                        "min_slack": num(c.min_slack),
                        "threshold": c.threshold,
                        "worst_instance": c.worst_instance,
                        "passed": c.passed(),
                    })).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}
