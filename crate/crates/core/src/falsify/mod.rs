//! Numerical search for short circuits realizing controlled-U.
//!
//! Every template up to a gate budget is optimized from many random starts
//! with Nelder–Mead. A positive result is a constructive witness; a negative
//! one is evidence only.

pub mod nelder_mead;
mod template;

pub use template::{enumerate_templates, template_count, Template, MAX_BUDGET};

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::circuit::{apply_cnot, apply_single, Circuit};
use crate::error::{Error, Result};
use crate::io::matrix_json;
use crate::matrix::{cis, Mat2, Mat4};
use crate::synth::ZyzAngles;
use crate::verify::controlled;

pub const DEFAULT_RESTARTS: usize = 200;
pub const DEFAULT_SEED: u64 = 42;
/// A minimum at or above this residual counts as "no realization found".
pub const DEFAULT_THRESHOLD: f64 = 0.01;
/// A minimum at or below this residual counts as a realization.
pub const DEFAULT_SUCCESS_TOL: f64 = 1e-6;
/// Restarts for a template stop once its best residual reaches this value.
pub const CONVERGED_RESIDUAL: f64 = 1e-12;
const EARLY_EXIT_BATCH: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// `1 − |tr(m†t)|/4`: equality up to global phase.
    Phase,
    /// `1 − Re tr(m†t)/4`: exact equality.
    Exact,
}

impl Metric {
    fn params_per_slot(self) -> usize {
        match self {
            Metric::Phase => 3,
            Metric::Exact => 4,
        }
    }

    fn residual(self, m: &Mat4, t: &Mat4) -> f64 {
        let inner = m.inner(t);
        match self {
            Metric::Phase => 1.0 - inner.norm() / 4.0,
            Metric::Exact => 1.0 - inner.re / 4.0,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Phase => "phase",
            Metric::Exact => "exact",
        })
    }
}

impl FromStr for Metric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "phase" => Ok(Metric::Phase),
            "exact" => Ok(Metric::Exact),
            other => Err(Error::Parse(format!("unknown metric '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "realization found")]
    RealizationFound,
    #[serde(rename = "no realization found")]
    NoRealizationFound,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::RealizationFound => "realization found",
            Verdict::NoRealizationFound => "no realization found",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct FalsifyConfig {
    pub metric: Metric,
    pub restarts: usize,
    pub seed: u64,
    pub threshold: f64,
    pub success_tol: f64,
    /// Visit templates from the largest gate count down and stop after the
    /// first batch containing a realization. Per-template results do not
    /// change; only fewer templates are reported.
    pub stop_on_success: bool,
    pub optimizer: nelder_mead::Options,
}

impl Default for FalsifyConfig {
    fn default() -> Self {
        FalsifyConfig {
            metric: Metric::Phase,
            restarts: DEFAULT_RESTARTS,
            seed: DEFAULT_SEED,
            threshold: DEFAULT_THRESHOLD,
            success_tol: DEFAULT_SUCCESS_TOL,
            stop_on_success: false,
            optimizer: nelder_mead::Options::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TemplateResult {
    pub template: Template,
    pub residual: f64,
    /// `(α, β, γ, δ)` per slot; `α` is zero under the phase metric.
    pub params: Vec<[f64; 4]>,
    pub restarts_used: usize,
    pub evaluations: usize,
}

impl TemplateResult {
    pub fn circuit(&self) -> Circuit {
        let gates: Vec<Mat2> = self
            .params
            .iter()
            .map(|&[alpha, beta, gamma, delta]| {
                ZyzAngles {
                    alpha,
                    beta,
                    gamma,
                    delta,
                }
                .to_matrix()
            })
            .collect();
        self.template.instantiate(&gates)
    }

    fn to_json(&self) -> Value {
        let cnots: Vec<[usize; 2]> = self.template.cnots.iter().map(|&t| [1 - t, t]).collect();
        let slots: Vec<[usize; 2]> = self
            .template
            .slot_positions()
            .into_iter()
            .map(|(s, w)| [s, w])
            .collect();
        json!({
            "cnots": cnots,
            "slots": slots,
            "gates": self.template.gate_count(),
            "residual": self.residual,
            "params": self.params,
            "restarts_used": self.restarts_used,
            "evaluations": self.evaluations,
        })
    }
}

#[derive(Clone, Debug)]
pub struct FalsifyReport {
    pub target: Mat2,
    pub k: usize,
    pub metric: Metric,
    pub templates: Vec<TemplateResult>,
    pub min_residual: f64,
    pub threshold: f64,
    pub success_tol: f64,
    pub verdict: Verdict,
}

impl FalsifyReport {
    pub fn best(&self) -> Option<&TemplateResult> {
        self.templates
            .iter()
            .min_by(|a, b| a.residual.total_cmp(&b.residual))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "target": matrix_json(&self.target),
            "k": self.k,
            "metric": self.metric,
            "templates": self.templates.iter().map(TemplateResult::to_json).collect::<Vec<_>>(),
            "min_residual": self.min_residual,
            "threshold": self.threshold,
            "success_tol": self.success_tol,
            "verdict": self.verdict,
        })
    }
}

#[inline]
fn rotation(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Mat2 {
    let (s, c) = (gamma / 2.0).sin_cos();
    let sum = (beta + delta) / 2.0;
    let diff = (beta - delta) / 2.0;
    let g = cis(alpha);
    Mat2::new(
        g * cis(-sum) * c,
        -g * cis(-diff) * s,
        g * cis(diff) * s,
        g * cis(sum) * c,
    )
}

fn slot_angles(metric: Metric, x: &[f64]) -> [f64; 4] {
    match metric {
        Metric::Phase => [0.0, x[0], x[1], x[2]],
        Metric::Exact => [x[0], x[1], x[2], x[3]],
    }
}

/// Residual of `template` at parameter vector `x` against the target operator.
pub fn template_residual(template: &Template, x: &[f64], target: &Mat4, metric: Metric) -> f64 {
    let per = metric.params_per_slot();
    let mut m = Mat4::identity();
    let mut chunks = x.chunks_exact(per);
    for (s, occupied) in template.slots.iter().enumerate() {
        for (wire, &on) in occupied.iter().enumerate() {
            if on {
                let [a, b, g, d] = slot_angles(metric, chunks.next().expect("parameter count"));
                apply_single(&mut m, wire, &rotation(a, b, g, d));
            }
        }
        if let Some(&t) = template.cnots.get(s) {
            apply_cnot(&mut m, 1 - t);
        }
    }
    metric.residual(&m, target)
}

fn template_rng(seed: u64, template: &Template) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(template.key());
    rng
}

/// Multi-start minimization of one template. Deterministic in
/// `(template, target, config.seed)`; independent of the other templates.
pub fn optimize_template(
    template: &Template,
    target: &Mat4,
    config: &FalsifyConfig,
) -> TemplateResult {
    let per = config.metric.params_per_slot();
    let dim = per * template.slot_count();
    let mut rng = template_rng(config.seed, template);
    let objective = |x: &[f64]| template_residual(template, x, target, config.metric);

    let mut best_x: Vec<f64> = Vec::new();
    let mut best = f64::INFINITY;
    let mut restarts_used = 0;
    let mut evaluations = 0;
    let starts = if dim == 0 { 1 } else { config.restarts.max(1) };
    for _ in 0..starts {
        let x0: Vec<f64> = (0..dim)
            .map(|_| rng.gen_range(-std::f64::consts::PI..=std::f64::consts::PI))
            .collect();
        let run = nelder_mead::minimize(objective, &x0, &config.optimizer);
        restarts_used += 1;
        evaluations += run.evals;
        if run.value < best {
            best = run.value;
            best_x = run.x;
        }
        if best <= CONVERGED_RESIDUAL {
            break;
        }
    }

    TemplateResult {
        template: template.clone(),
        residual: best.clamp(0.0, 1.0),
        params: best_x
            .chunks_exact(per.max(1))
            .map(|x| slot_angles(config.metric, x))
            .collect(),
        restarts_used,
        evaluations,
    }
}

fn run_all(templates: &[Template], target: &Mat4, config: &FalsifyConfig) -> Vec<TemplateResult> {
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(templates.len().max(1));
    if workers <= 1 {
        return templates
            .iter()
            .map(|t| optimize_template(t, target, config))
            .collect();
    }
    let mut slots: Vec<Option<TemplateResult>> = vec![None; templates.len()];
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    (w..templates.len())
                        .step_by(workers)
                        .map(|i| (i, optimize_template(&templates[i], target, config)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("optimizer thread panicked") {
                slots[i] = Some(r);
            }
        }
    });
    slots
        .into_iter()
        .map(|r| r.expect("every template ran"))
        .collect()
}

/// Searches every template with at most `k` gates for a realization of
/// controlled-`u` under the phase metric.
pub fn falsify(u: &Mat2, k: usize, restarts: usize, seed: u64) -> Result<FalsifyReport> {
    falsify_with(
        u,
        k,
        &FalsifyConfig {
            restarts,
            seed,
            ..FalsifyConfig::default()
        },
    )
}

pub fn falsify_with(u: &Mat2, k: usize, config: &FalsifyConfig) -> Result<FalsifyReport> {
    u.check_unitary(crate::classify::INPUT_UNITARY_TOL)?;
    if config.success_tol.is_nan() || config.success_tol >= config.threshold {
        return Err(Error::Precondition(
            "success tolerance must be below the threshold".into(),
        ));
    }
    let mut templates = enumerate_templates(k)?;
    let target = controlled(u);

    let results = if config.stop_on_success {
        templates.sort_by_key(|t| std::cmp::Reverse(t.gate_count()));
        let mut out = Vec::new();
        for batch in templates.chunks(EARLY_EXIT_BATCH) {
            let done = run_all(batch, &target, config);
            let hit = done.iter().any(|r| r.residual <= config.success_tol);
            out.extend(done);
            if hit {
                break;
            }
        }
        out
    } else {
        run_all(&templates, &target, config)
    };

    let min_residual = results
        .iter()
        .map(|r| r.residual)
        .fold(f64::INFINITY, f64::min);
    let verdict = if min_residual <= config.success_tol {
        Verdict::RealizationFound
    } else if min_residual >= config.threshold {
        Verdict::NoRealizationFound
    } else {
        Verdict::Inconclusive
    };
    Ok(FalsifyReport {
        target: *u,
        k,
        metric: config.metric,
        templates: results,
        min_residual,
        threshold: config.threshold,
        success_tol: config.success_tol,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::phase_distance;
    use std::f64::consts::PI;

    fn quick(restarts: usize) -> FalsifyConfig {
        FalsifyConfig {
            restarts,
            ..FalsifyConfig::default()
        }
    }

    #[test]
    fn rotation_matches_zyz() {
        let (a, b, g, d) = (0.3, -1.2, 2.1, 0.9);
        let expected = ZyzAngles {
            alpha: a,
            beta: b,
            gamma: g,
            delta: d,
        }
        .to_matrix();
        assert!(rotation(a, b, g, d).distance(&expected) < 1e-15);
    }

    #[test]
    fn residual_agrees_with_circuit() {
        let t = Template {
            cnots: vec![0, 1],
            slots: vec![[true, true], [false, true], [true, false]],
        };
        let x: Vec<f64> = (0..12).map(|i| 0.37 * i as f64 - 1.5).collect();
        let target = controlled(&Mat2::H);
        let fast = template_residual(&t, &x, &target, Metric::Phase);
        let gates: Vec<Mat2> = x
            .chunks(3)
            .map(|p| rotation(0.0, p[0], p[1], p[2]))
            .collect();
        let slow = phase_distance(&t.instantiate(&gates).evaluate(), &target);
        assert!((fast - slow).abs() < 1e-14);
    }

    #[test]
    fn empty_template_against_cnot() {
        let t = Template::from_mask(vec![], 0);
        let r = optimize_template(&t, &controlled(&Mat2::X), &quick(5));
        assert!((r.residual - 0.5).abs() < 1e-15);
        assert_eq!(r.restarts_used, 1);
    }

    #[test]
    fn two_cnot_skeleton_reaches_its_target() {
        let u = Mat2::phase(PI / 4.0);
        let skeleton = Template {
            cnots: vec![0, 0],
            slots: vec![[true, true], [true, false], [true, false]],
        };
        let r = optimize_template(&skeleton, &controlled(&u), &quick(50));
        assert!(r.residual <= 1e-6, "{}", r.residual);
        let c = r.circuit();
        assert!(phase_distance(&c.evaluate(), &controlled(&u)) <= 1e-6);
    }

    #[test]
    fn abc_skeleton_reaches_det_one_target() {
        let v = crate::classify::sample(crate::classify::GateClass::J, 4).unwrap();
        let skeleton = Template {
            cnots: vec![0, 0],
            slots: vec![[true, false], [true, false], [true, false]],
        };
        let r = optimize_template(&skeleton, &controlled(&v), &quick(DEFAULT_RESTARTS));
        assert!(r.residual <= 1e-6, "{}", r.residual);
    }

    #[test]
    fn every_single_cnot_template_misses_t() {
        let target = controlled(&Mat2::phase(PI / 4.0));
        let cfg = quick(DEFAULT_RESTARTS);
        let templates: Vec<Template> = enumerate_templates(4)
            .unwrap()
            .into_iter()
            .filter(|t| t.cnots.len() == 1)
            .collect();
        assert_eq!(templates.len(), 30);
        for t in &templates {
            let r = optimize_template(t, &target, &cfg);
            assert!(r.residual >= 0.01, "{t:?}: {}", r.residual);
        }
    }

    #[test]
    fn phased_x_needs_two_gates() {
        let u = Mat2::X.scale(cis(1.1));
        let one = falsify(&u, 1, DEFAULT_RESTARTS, 42).unwrap();
        assert!(one.min_residual >= 0.01, "{}", one.min_residual);
        let two = falsify(&u, 2, DEFAULT_RESTARTS, 42).unwrap();
        assert!(two.min_residual <= 1e-6);
    }

    #[test]
    fn one_cnot_templates_miss_t() {
        let report = falsify(&Mat2::phase(PI / 4.0), 2, 20, 7).unwrap();
        assert!(report.min_residual >= 0.01, "{}", report.min_residual);
        assert_eq!(report.verdict, Verdict::NoRealizationFound);
    }

    #[test]
    fn deterministic_and_monotone() {
        let u = Mat2::rz(0.7);
        let a = falsify(&u, 2, 10, 3).unwrap();
        let b = falsify(&u, 2, 10, 3).unwrap();
        assert_eq!(a.templates, b.templates);
        let c = falsify(&u, 3, 10, 3).unwrap();
        assert!(c.min_residual <= a.min_residual);
        for r in &a.templates {
            let same = c
                .templates
                .iter()
                .find(|x| x.template == r.template)
                .unwrap();
            assert_eq!(same.residual, r.residual);
        }
    }

    #[test]
    fn exact_metric_sees_global_phase() {
        let u = Mat2::IDENTITY.scale(cis(0.9));
        let cfg = FalsifyConfig {
            metric: Metric::Exact,
            restarts: 10,
            ..FalsifyConfig::default()
        };
        let zero = falsify_with(&u, 0, &cfg).unwrap();
        assert!(zero.min_residual > 0.01);
        let one = falsify_with(&u, 1, &cfg).unwrap();
        assert_eq!(one.verdict, Verdict::RealizationFound);
        let best = one.best().unwrap();
        assert!(best.circuit().evaluate().distance(&controlled(&u)) < 1e-5);
    }

    #[test]
    fn early_exit_reports_subset() {
        let cfg = FalsifyConfig {
            restarts: 20,
            stop_on_success: true,
            ..FalsifyConfig::default()
        };
        let r = falsify_with(&Mat2::Z, 3, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::RealizationFound);
        assert!(r.templates.len() < template_count(3));
    }

    #[test]
    fn json_shape() {
        let r = falsify(&Mat2::X, 1, 3, 1).unwrap();
        let v = r.to_json();
        assert_eq!(v["k"], 1);
        assert_eq!(v["metric"], "phase");
        assert_eq!(v["verdict"], "realization found");
        assert_eq!(v["templates"].as_array().unwrap().len(), 5);
        assert!(v["templates"][0]["params"].is_array());
    }

    #[test]
    fn rejects_bad_budget() {
        assert!(matches!(
            falsify(&Mat2::X, 8, 1, 0),
            Err(Error::BudgetOutOfRange(8))
        ));
    }
}
