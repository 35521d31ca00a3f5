//! Command implementations. Each returns a [`Report`] and whether every
//! check passed; input problems are [`CliError`]s.

use rand_core::SeedableRng;
use rand_pcg::Pcg64;
use rayon::prelude::*;

use wintgen_core::classify::{
    condition_matrix, counterexample_at, evaluate_point, theorem, weyl_l_check, TensorCache, TensorId, THEOREMS,
};
use wintgen_core::curvature::{
    classify_umbilicity, mean_curvature, normal_curvature, ricci_from_r, scalar_invariants, SubmanifoldModel,
};
use wintgen_core::derivations::commutation_residual;
use wintgen_core::grid::{random_model, GridSpec};
use wintgen_core::sectional::Strategy;
use wintgen_core::tables::{audit_basic, audit_derived, audit_nullity, confirm, derived_tables, ErrataSummary};
use wintgen_core::wintgen::{choi_lu_shape_ops, ddvv_gap, Family};
use wintgen_core::{ChoiLuParams, Rational, Scalar};

use crate::config::{Mode, RunConfig};
use crate::model_file::LoadedModel;
use crate::report::Report;
use crate::CliError;

pub type Outcome = Result<(Report, bool), CliError>;

/// Seed used when `--seed` is absent.
pub const DEFAULT_SEED: u64 = 7;
/// Random general models checked by `identity:commutation`.
pub const COMMUTATION_RANDOM_MODELS: usize = 20;
/// Relative tolerance of the `L_C` check.
pub const WEYL_L_REL_TOL: f64 = 1e-6;

const PARAM_COLS: [&str; 7] = ["n", "m", "a", "b", "c", "mu", "k_tilde"];

fn param_cells(p: &ChoiLuParams<Rational>) -> Vec<String> {
    vec![p.n.to_string(), p.m.to_string(), p.a.to_string(), p.b.to_string(), p.c.to_string(), p.mu.to_string(), p.k_tilde.to_string()]
}

fn cols(extra: &[&'static str]) -> Vec<&'static str> {
    PARAM_COLS.iter().chain(extra).copied().collect()
}

fn core_err(e: wintgen_core::Error) -> CliError {
    CliError::Input(e.to_string())
}

/// Order-preserving parallel map on a pool of `jobs` workers.
pub fn par_map<T: Sync, U: Send>(items: &[T], jobs: Option<usize>, f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    let run = || items.par_iter().map(&f).collect();
    match jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        },
        None => run(),
    }
}

fn join_index(idx: &[usize]) -> String {
    idx.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
}

// ---------------------------------------------------------------------------
// compute

pub const COMPUTE_SELECTORS: [&str; 19] = [
    "R", "Ricc", "C", "Rperp", "gwRicc", "RC", "CR", "RR", "CC", "RRicc", "RCmCR", "QgR", "QgC", "QgRicc", "QgGR", "QSR", "QSC",
    "QSGS", "P",
];

fn compute_in<S: Scalar>(model: &SubmanifoldModel<S>, selector: &str) -> Result<Report, CliError> {
    let mut rep = Report::new(format!("compute {selector}"), &["index", "value"]);
    let cache = TensorCache::new(model);
    let cv = cache.curvature();
    if selector.eq_ignore_ascii_case("Rperp") {
        normal_curvature(model).for_each_nonzero(|[i, j, a, b], v| rep.push(vec![join_index(&[i, j, a, b]), v.to_string()]));
    } else {
        let id = TensorId::parse(selector).map_err(core_err)?;
        cache.get(id).for_each_nonzero(|idx, v| rep.push(vec![join_index(idx), v.to_string()]));
    }
    let inv = scalar_invariants(model, &ricci_from_r(&cv.r).map_err(core_err)?, &normal_curvature(model));
    rep.summary("tau", &cv.ricci.tau);
    rep.summary("rho", &inv.rho);
    rep.summary("rho_perp", inv.rho_perp);
    rep.summary("H2", mean_curvature(model).h_sq);
    rep.summary("ddvv_gap", ddvv_gap(model));
    rep.summary("umbilicity", classify_umbilicity(model).as_str());
    Ok(rep)
}

pub fn compute(m: &LoadedModel, selector: &str, mode: Mode) -> Outcome {
    if !COMPUTE_SELECTORS.iter().any(|s| s.eq_ignore_ascii_case(selector)) {
        return Err(CliError::Input(format!("unknown tensor selector `{selector}`; expected one of {}", COMPUTE_SELECTORS.join(", "))));
    }
    let rep = match mode {
        Mode::Exact => compute_in(&m.model, selector)?,
        Mode::Float => compute_in(&m.model.map(|x| x.to_f64()), selector)?,
    };
    Ok((rep, true))
}

// ---------------------------------------------------------------------------
// conditions

fn conditions_in<S: Scalar>(model: &SubmanifoldModel<S>, tol: f64, rep: &mut Report) {
    for r in condition_matrix(model, tol) {
        rep.push(vec![
            r.left.code().to_string(),
            r.right.code().to_string(),
            r.verdict.kind.as_str().to_string(),
            r.verdict.lambda.map(|l| l.to_string()).unwrap_or_default(),
            r.verdict.residual_max.to_string(),
        ]);
    }
}

pub fn conditions(m: &LoadedModel, cfg: &RunConfig) -> Outcome {
    let mut rep = Report::new("conditions", &["left", "right", "kind", "lambda", "residual"]);
    match cfg.mode {
        Mode::Exact => conditions_in(&m.model, 0.0, &mut rep),
        Mode::Float => conditions_in(&m.model.map(|x| x.to_f64()), cfg.tol, &mut rep),
    }
    rep.summary("umbilicity", classify_umbilicity(&m.model).as_str());
    Ok((rep, true))
}

// ---------------------------------------------------------------------------
// sweep

pub fn sweep(cfg: &RunConfig) -> Outcome {
    let points = cfg.grid.points();
    let tol = cfg.tol();
    let mode = cfg.mode;
    let rows: Vec<Vec<Vec<String>>> = par_map(&points, cfg.jobs, |p| {
        let model = choi_lu_shape_ops(p).expect("grid points are valid");
        let fmt = |l: TensorId, r: TensorId, k: &str, lam: Option<String>| {
            let mut row = param_cells(p);
            row.extend([l.code().to_string(), r.code().to_string(), k.to_string(), lam.unwrap_or_default()]);
            row
        };
        match mode {
            Mode::Exact => condition_matrix(&model, tol)
                .into_iter()
                .map(|r| fmt(r.left, r.right, r.verdict.kind.as_str(), r.verdict.lambda.map(|l| l.to_string())))
                .collect(),
            Mode::Float => condition_matrix(&model.map(|x| x.to_f64()), tol)
                .into_iter()
                .map(|r| fmt(r.left, r.right, r.verdict.kind.as_str(), r.verdict.lambda.map(|l| l.to_string())))
                .collect(),
        }
    });
    let mut rep = Report::new("sweep", &cols(&["left", "right", "kind", "lambda"]));
    rep.summary("points", points.len());
    rows.into_iter().flatten().for_each(|r| rep.push(r));
    Ok((rep, true))
}

// ---------------------------------------------------------------------------
// ddvv

pub fn ddvv_model(m: &LoadedModel) -> Outcome {
    let gap = ddvv_gap(&m.model);
    let mut rep = Report::new("ddvv", &["model", "gap"]);
    rep.push(vec!["1".into(), gap.to_string()]);
    rep.summary("gap", &gap);
    let ok = gap.to_f64() >= -crate::config::DEFAULT_TOL;
    rep.summary("negative_gaps", usize::from(!ok));
    Ok((rep, ok))
}

/// Gap statistics over `count` random general models.
pub fn ddvv_random(count: usize, n: usize, m: usize, seed: u64, tol: f64) -> Outcome {
    let mut rng = Pcg64::seed_from_u64(seed);
    let mut rep = Report::new("ddvv --random", &["model", "gap"]);
    let (mut min, mut sum, mut negative) = (f64::INFINITY, 0.0, 0usize);
    for i in 0..count {
        let model = random_model(&mut rng, n, m).map_err(core_err)?;
        let gap = ddvv_gap(&model).to_f64();
        min = min.min(gap);
        sum += gap;
        if gap < -tol {
            negative += 1;
            rep.push(vec![(i + 1).to_string(), gap.to_string()]);
        }
    }
    rep.summary("models", count);
    rep.summary("min_gap", if count == 0 { f64::NAN } else { min });
    rep.summary("mean_gap", if count == 0 { f64::NAN } else { sum / count as f64 });
    rep.summary("negative_gaps", negative);
    Ok((rep, negative == 0))
}

// ---------------------------------------------------------------------------
// verify

pub fn verify(id: &str, cfg: &RunConfig, seed: u64) -> Outcome {
    match id {
        "identity:commutation" => verify_commutation(cfg, seed),
        "audit:tables" => verify_tables(cfg, true, true),
        "audit:basic" => verify_tables(cfg, true, false),
        "audit:derived" => verify_tables(cfg, false, true),
        "audit:nullity" => verify_nullity(cfg),
        "TEii" | "teii" => verify_weyl_l(cfg),
        _ => verify_theorem(id, cfg),
    }
}

pub fn verify_ids() -> Vec<&'static str> {
    let mut ids: Vec<&str> = THEOREMS.iter().map(|t| t.id).collect();
    ids.extend(["TEii", "identity:commutation", "audit:tables", "audit:basic", "audit:derived", "audit:nullity"]);
    ids
}

fn verify_theorem(id: &str, cfg: &RunConfig) -> Outcome {
    let spec = theorem(id).map_err(|_| CliError::Input(format!("unknown check `{id}`; known: {}", verify_ids().join(", "))))?;
    let points = spec.points(&cfg.grid);
    let (mode, tol) = (cfg.mode, cfg.tol());
    let results = par_map(&points, cfg.jobs, |p| match mode {
        Mode::Exact => evaluate_point::<Rational>(spec, p, tol),
        Mode::Float => evaluate_point::<f64>(spec, p, tol),
    });
    let mut rep = Report::new(format!("verify {}", spec.id), &cols(&["in_branch", "left", "right", "kind", "lambda", "expected_lambda", "residual"]));
    let mut failed = 0usize;
    for r in results {
        let r = r.map_err(core_err)?;
        if r.pass {
            continue;
        }
        failed += 1;
        for c in r.conds.iter().filter(|c| !c.ok) {
            let mut row = param_cells(&r.params);
            row.extend([
                r.in_branch.to_string(),
                c.left.code().to_string(),
                c.right.map(|t| t.code().to_string()).unwrap_or_else(|| "0".into()),
                c.kind.as_str().to_string(),
                c.lambda.clone().unwrap_or_default(),
                c.expected_lambda.clone().unwrap_or_default(),
                c.residual.clone(),
            ]);
            rep.push(row);
        }
    }
    rep.summary("points", points.len());
    rep.summary("failed_points", failed);
    rep.summary("status", if failed == 0 { "pass" } else { "fail" });
    Ok((rep, failed == 0))
}

fn verify_commutation(cfg: &RunConfig, seed: u64) -> Outcome {
    let points = cfg.grid.points();
    let bad = par_map(&points, cfg.jobs, |p| {
        let model = choi_lu_shape_ops(p).expect("grid points are valid");
        residual_max(&model)
    });
    let mut rep = Report::new("verify identity:commutation", &["source", "model", "max_residual"]);
    let mut failed = 0;
    for (p, r) in points.iter().zip(bad) {
        if let Some(r) = r {
            failed += 1;
            rep.push(vec!["grid".into(), format!("{:?}", param_cells(p)), r.to_string()]);
        }
    }
    let mut rng = Pcg64::seed_from_u64(seed);
    for i in 0..COMMUTATION_RANDOM_MODELS {
        let n = 4 + i % 4;
        let m = 2 + i % 3;
        let model = random_model(&mut rng, n, m).map_err(core_err)?;
        if let Some(r) = residual_max(&model) {
            failed += 1;
            rep.push(vec!["random".into(), format!("seed {seed} #{} n={n} m={m}", i + 1), r.to_string()]);
        }
    }
    rep.summary("grid_points", points.len());
    rep.summary("random_models", COMMUTATION_RANDOM_MODELS);
    rep.summary("failed", failed);
    rep.summary("status", if failed == 0 { "pass" } else { "fail" });
    Ok((rep, failed == 0))
}

fn residual_max(model: &SubmanifoldModel<Rational>) -> Option<Rational> {
    let r = commutation_residual(model).expect("valid model");
    (!r.is_zero()).then(|| wintgen_core::tensor::max_abs_component(&r).0)
}

/// Merged table errata over the grid, with both brute-force paths recorded.
pub struct TableAudit {
    pub basic: ErrataSummary,
    pub derived: ErrataSummary,
    pub unconfirmed: usize,
}

pub fn table_audit(grid: &GridSpec, jobs: Option<usize>, basic: bool, derived: bool) -> Result<TableAudit, CliError> {
    let points = grid.points();
    let lines = derived_tables();
    let per_point = par_map(&points, jobs, |p| -> Result<_, wintgen_core::Error> {
        let b = if basic { audit_basic(p)? } else { Vec::new() };
        let d = if derived { audit_derived(p, &lines)? } else { Vec::new() };
        Ok((b, d))
    });
    let mut out = TableAudit { basic: ErrataSummary::default(), derived: ErrataSummary::default(), unconfirmed: 0 };
    for r in per_point {
        let (b, d) = r.map_err(core_err)?;
        out.basic.add(b);
        out.derived.add(d);
    }
    let rows: Vec<_> = out.derived.entries.values().map(|(r, _)| r.clone()).collect();
    let confirmed = par_map(&rows, jobs, |r| confirm(r).unwrap_or(false));
    out.unconfirmed = confirmed.iter().filter(|c| !**c).count();
    Ok(out)
}

fn verify_tables(cfg: &RunConfig, basic: bool, derived: bool) -> Outcome {
    let audit = table_audit(&cfg.grid, cfg.jobs, basic, derived)?;
    let mut rep = Report::new(
        "verify audit:tables",
        &["table", "formula", "n", "index", "closed_form", "brute_force", "failing_points", "confirmed", "first_point"],
    );
    for (kind, sum) in [("basic", &audit.basic), ("derived", &audit.derived)] {
        for ((label, n, idx), (row, count)) in &sum.entries {
            let confirmed = if kind == "basic" { "n/a".to_string() } else { confirm(row).unwrap_or(false).to_string() };
            rep.push(vec![
                kind.into(),
                label.clone(),
                n.to_string(),
                idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","),
                row.closed_form.to_string(),
                row.brute.to_string(),
                count.to_string(),
                confirmed,
                param_cells(&row.params).join(" "),
            ]);
        }
    }
    rep.summary("grid_points", cfg.grid.points().len());
    rep.summary("basic_errata", audit.basic.entries.len());
    rep.summary("derived_errata", audit.derived.entries.len());
    rep.summary("derived_formulas_with_errata", audit.derived.labels().len());
    rep.summary("unconfirmed", audit.unconfirmed);
    let ok = audit.basic.is_empty() && audit.unconfirmed == 0;
    rep.summary("status", if ok { "pass" } else { "fail" });
    Ok((rep, ok))
}

fn verify_nullity(cfg: &RunConfig) -> Outcome {
    let points = cfg.grid.points();
    let rows = par_map(&points, cfg.jobs, audit_nullity);
    let mut rep = Report::new("verify audit:nullity", &cols(&["tensor", "index", "value"]));
    let mut seen = std::collections::BTreeSet::new();
    let mut hits = 0usize;
    for r in rows {
        for row in r.map_err(core_err)? {
            hits += 1;
            // one row per tensor, dimension and index
            if seen.insert((row.tensor, row.params.n, row.index.clone())) {
                let mut cells = param_cells(&row.params);
                cells.extend([row.tensor.to_string(), row.index.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","), row.value.to_string()]);
                rep.push(cells);
            }
        }
    }
    rep.summary("grid_points", points.len());
    rep.summary("nonzero_unlisted", hits);
    rep.summary("status", if hits == 0 { "pass" } else { "fail" });
    Ok((rep, hits == 0))
}

/// Non-umbilical points of the grid for the `L_C` check.
pub fn weyl_l_points(grid: &GridSpec) -> Vec<ChoiLuParams<Rational>> {
    grid.points().into_iter().filter(|p| !Family::Umbilical.contains(p)).collect()
}

fn verify_weyl_l(cfg: &RunConfig) -> Outcome {
    let points = weyl_l_points(&cfg.grid);
    let st = Strategy::default();
    let checks = par_map(&points, cfg.jobs, |p| weyl_l_check(p, &st));
    let mut rep = Report::new("verify TEii", &cols(&["kind", "lambda", "inf_k", "predicted", "rel_err"]));
    let mut failed = 0;
    for (p, c) in points.iter().zip(checks) {
        let c = c.map_err(core_err)?;
        if !c.pass(WEYL_L_REL_TOL) {
            failed += 1;
            let mut row = param_cells(p);
            row.extend([
                c.kind.as_str().to_string(),
                c.lambda.map(|l| l.to_string()).unwrap_or_default(),
                c.inf_k.to_string(),
                c.predicted.to_string(),
                c.rel_err.to_string(),
            ]);
            rep.push(row);
        }
    }
    rep.summary("points", points.len());
    rep.summary("failed_points", failed);
    rep.summary("rel_tol", WEYL_L_REL_TOL);
    rep.summary("status", if failed == 0 { "pass" } else { "fail" });
    Ok((rep, failed == 0))
}

/// Points of `points` outside every special family where `left` depends on
/// `right`; the data behind the "only if" directions.
pub fn counterexamples(
    left: TensorId,
    right: Option<TensorId>,
    points: &[ChoiLuParams<Rational>],
    allowed: &[Family],
    jobs: Option<usize>,
) -> Result<Vec<ChoiLuParams<Rational>>, CliError> {
    let hits = par_map(points, jobs, |p| {
        if allowed.iter().any(|f| f.contains(p)) {
            return Ok(None);
        }
        counterexample_at(left, right, p).map(|v| v.map(|_| p.clone()))
    });
    let mut out = Vec::new();
    for h in hits {
        if let Some(p) = h.map_err(core_err)? {
            out.push(p);
        }
    }
    Ok(out)
}
