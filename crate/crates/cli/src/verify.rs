//! Verification suites. Float-mode defects are judged relative to a scale
//! (the size of the quantities compared); exact-mode defects must vanish.

use std::path::Path;

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use tsallis::format::{realization_from_json, scalar_to_json};
use tsallis::jordan::{solve_jordan, solve_shifted};
use tsallis::operators::{
    check_identity_mzadj, check_identity_r0adj, commutator_mz, commutator_r0, kernel_eigen_check, operators_agree,
    verify_adjoint, Defect, DiagonalShiftOperator, OpKind,
};
use tsallis::qcore::{kernel_coefficients, radius};
use tsallis::rational::{
    adjoint_span_dimension, borel, hankel, inverse_borel, is_q_rational, numerical_rank, taylor_from_realization,
    Realization,
};
use tsallis::scalar::{cmax, cto_f64};
use tsallis::space::InnerProductContext;
use tsallis::{MatrixSeries, QParam, Real, TruncatedSeries};

use crate::commands::{lift, synthetic};
use crate::config::{read_file, CliError, RunConfig};
use crate::output::{Document, Table};
use crate::Suite;

const RANK_TOL: f64 = 1e-8;

struct Check {
    name: String,
    defect: String,
    relative: f64,
    pass: bool,
    detail: Map<String, Value>,
}

struct Report<'a> {
    cfg: &'a RunConfig,
    checks: Vec<Check>,
}

impl<'a> Report<'a> {
    fn new(cfg: &'a RunConfig) -> Self {
        Report { cfg, checks: Vec::new() }
    }

    fn defect<R: Real>(&mut self, name: impl Into<String>, defect: &R, scale: f64) -> &mut Map<String, Value> {
        let relative = defect.to_f64() / scale.max(1.0);
        let pass = if R::EXACT { defect.is_zero() } else { relative <= self.cfg.tol };
        self.push(Check { name: name.into(), defect: defect.render(), relative, pass, detail: Map::new() })
    }

    fn operator<R: Real>(&mut self, name: impl Into<String>, d: &Defect<R>, scale: f64) {
        let detail = self.defect(name, &d.max, scale);
        detail.insert("checked".into(), json!(d.checked));
        detail.insert("worst".into(), json!(d.worst));
    }

    fn flag(&mut self, name: impl Into<String>, pass: bool, detail: Value) {
        let detail = match detail {
            Value::Object(m) => m,
            _ => Map::new(),
        };
        let defect = if pass { "0" } else { "1" };
        self.push(Check { name: name.into(), defect: defect.into(), relative: f64::from(!pass as u8), pass, detail });
    }

    fn push(&mut self, check: Check) -> &mut Map<String, Value> {
        self.checks.push(check);
        &mut self.checks.last_mut().unwrap().detail
    }

    fn finish(self, suite: Suite, q: Value) -> (Document, bool) {
        let pass = self.checks.iter().all(|c| c.pass);
        let mut table = Table::new(&["check", "defect", "relative", "pass"]);
        let mut checks = Vec::new();
        for c in self.checks {
            table.push(vec![c.name.clone(), c.defect.clone(), format!("{:.16e}", c.relative), c.pass.to_string()]);
            let mut obj = c.detail;
            obj.insert("name".into(), json!(c.name));
            obj.insert("defect".into(), json!(c.defect));
            obj.insert("relative".into(), scalar_to_json(&c.relative));
            obj.insert("pass".into(), json!(c.pass));
            checks.push(Value::Object(obj));
        }
        let cfg = self.cfg;
        let json = json!({
            "suite": format!("{suite:?}").to_lowercase(),
            "q": q,
            "trunc": cfg.trunc,
            "tol": cfg.tol,
            "mode": format!("{:?}", cfg.mode).to_lowercase(),
            "seed": cfg.seed,
            "pass": pass,
            "checks": checks,
        });
        (Document { json, table }, pass)
    }
}

/// Largest operator coefficient magnitude on `z^k`, `k <= n`.
fn op_scale<R: Real>(q: &QParam<R>, n: usize) -> f64 {
    let mut scale: f64 = 1.0;
    for kind in OpKind::ALL {
        let op = DiagonalShiftOperator::new(kind, q);
        for k in 0..=n {
            if let Ok(Some((_, c))) = op.on_monomial(k) {
                scale = scale.max(c.to_f64().abs());
            }
        }
    }
    scale
}

fn series_scale<R: Real>(f: &TruncatedSeries<R>) -> f64 {
    f.coeffs().iter().map(|c| cmax(c).to_f64()).fold(1.0, f64::max)
}

fn matrix_series_scale<R: Real>(f: &MatrixSeries<R>) -> f64 {
    f.coeffs().iter().flat_map(|m| m.iter().map(|c| cmax(c).to_f64())).fold(1.0, f64::max)
}

/// Highest monomial degree the operators can act on without dividing by a
/// vanishing factor.
fn safe_degree<R: Real>(q: &QParam<R>, n: usize) -> usize {
    q.degenerate_at(n).map_or(n, |d| d.min(n))
}

pub fn run<R: Real>(cfg: &RunConfig, suite: Suite, realization: Option<&Path>) -> Result<(Document, bool), CliError> {
    let q = cfg.q::<R>()?;
    let mut report = Report::new(cfg);
    match suite {
        Suite::Adjoints => adjoints(&mut report, &q)?,
        Suite::Identities => identities(&mut report, &q)?,
        Suite::Commutators => commutators(&mut report, &q)?,
        Suite::Eigen => eigen(&mut report, &q)?,
        Suite::Jordan => jordan(&mut report, &q)?,
        Suite::Rational => rational(&mut report, &q, realization)?,
    }
    Ok(report.finish(suite, scalar_to_json(q.value())))
}

fn adjoints<R: Real>(report: &mut Report, q: &QParam<R>) -> Result<(), CliError> {
    let trunc = report.cfg.trunc;
    let n = trunc - 1;
    let ctx = InnerProductContext::new(q, trunc);
    let weight_scale = ctx.weights().iter().map(|g| g.to_f64().abs()).fold(1.0, f64::max);
    let scale = weight_scale * op_scale(q, trunc);
    for (a, b) in [(OpKind::Mz, OpKind::MzAdj), (OpKind::R0, OpKind::R0Adj), (OpKind::Integ, OpKind::IntegAdj)] {
        let d = verify_adjoint(&DiagonalShiftOperator::new(a, q), &DiagonalShiftOperator::new(b, q), &ctx, n)?;
        report.operator(format!("adjoint {a}/{b}"), &d, scale);
    }
    Ok(())
}

fn identities<R: Real>(report: &mut Report, q: &QParam<R>) -> Result<(), CliError> {
    let n = safe_degree(q, report.cfg.trunc - 1);
    let scale = op_scale(q, n + 1);
    report.operator("R0* = (q-1)Mz - (q-2)I", &check_identity_r0adj(q, n)?, scale);
    report.operator("(q-1)Mz* = R0 + (q-2)I*", &check_identity_mzadj(q, n)?, scale);
    let op = |k| DiagonalShiftOperator::new(k, q);
    if q.is_one() {
        report.operator("q=1: R0 = I*", &operators_agree(&op(OpKind::R0), &op(OpKind::IntegAdj), n)?, scale);
    }
    if q.is_two() {
        report.operator("q=2: Mz* = R0", &operators_agree(&op(OpKind::MzAdj), &op(OpKind::R0), n)?, scale);
    }
    Ok(())
}

fn worst<R: Real>(acc: &mut Option<(R, usize)>, value: Option<R>, k: usize) {
    if let Some(v) = value {
        if acc.as_ref().is_none_or(|(m, _)| v > *m) {
            *acc = Some((v, k));
        }
    }
}

fn commutators<R: Real>(report: &mut Report, q: &QParam<R>) -> Result<(), CliError> {
    let trunc = report.cfg.trunc;
    let k_max = q.degenerate_at(trunc + 1).map_or(trunc, |d| d.saturating_sub(1).min(trunc));
    let scale = op_scale(q, k_max + 8).powi(2);
    let mut r0 = [None, None];
    let mut mz = [None, None, None];
    for k in 0..=k_max {
        let c = commutator_r0(k, q)?;
        worst(&mut r0[0], Some(c.brute_force_defect), k);
        worst(&mut r0[1], c.operator_form_defect, k);
        let c = commutator_mz(k, q)?;
        worst(&mut mz[0], Some(c.brute_force_defect), k);
        worst(&mut mz[1], c.operator_form_defect, k);
        worst(&mut mz[2], c.alternate_form_defect, k);
    }
    let names = [
        "[R0,R0*] coefficient",
        "[R0,R0*] = (q-2)R0 I^2 R0",
        "[Mz,Mz*] coefficient",
        "[Mz,Mz*] = (q-2)(I*)^2 R0^2",
        "[Mz,Mz*] = (q-2)(I* Mz^2)^2 R0^2",
    ];
    for (name, entry) in names.iter().zip(r0.into_iter().chain(mz)) {
        if let Some((d, k)) = entry {
            let detail = report.defect(*name, &d, scale);
            detail.insert("k_max".into(), json!(k_max));
            detail.insert("worst_k".into(), json!(k));
        }
    }
    Ok(())
}

fn eigen<R: Real>(report: &mut Report, q: &QParam<R>) -> Result<(), CliError> {
    let trunc = report.cfg.trunc;
    // |w|^2 at a quarter of the radius, on a 1/64 grid so it is exact.
    let rho = (radius(q).min(4.0).sqrt() / 2.0 * 64.0).floor().max(1.0) / 64.0;
    let r = R::from_f64(rho).expect("finite");
    let half = r.clone() / R::from_i64(2);
    let points = [
        Complex::new(r.clone(), R::zero()),
        Complex::new(R::zero(), r.clone()),
        Complex::new(-half.clone(), half),
    ];
    let coeffs: Vec<f64> = kernel_coefficients(q, trunc).iter().map(Real::to_f64).collect();
    for w in points {
        let wabs = cto_f64(&w).norm();
        let kernel_scale = coeffs.iter().enumerate().map(|(k, c)| c.abs() * wabs.powi(k as i32)).fold(1.0, f64::max);
        let d = kernel_eigen_check(&w, q, trunc)?;
        report.operator(format!("Mz* K_w = conj(w) K_w at w={}", tsallis::scalar::render_complex(&w)), &d, kernel_scale * op_scale(q, trunc));
    }
    Ok(())
}

fn jordan<R: Real>(report: &mut Report, q: &QParam<R>) -> Result<(), CliError> {
    let trunc = report.cfg.trunc;
    let scale = op_scale(q, trunc);
    for f0 in [0, 1] {
        let f0 = Complex::new(R::from_i64(f0), R::zero());
        let sol = solve_jordan(&f0, q, trunc)?;
        let s = scale * series_scale(&sol.coeffs);
        let label = f0.re.render();
        report.defect(format!("Jordan residual f0={label}"), &sol.residual, s);
        if let Some(d) = &sol.closed_form_defect {
            report.defect(format!("Jordan closed form f0={label}"), d, s);
        }
    }
    let lambda = Complex::new(R::one() / R::from_i64(2), R::zero());
    let sol = solve_shifted(&Complex::new(R::zero(), R::zero()), &lambda, q, trunc)?;
    let s = scale * series_scale(&sol.coeffs);
    let detail = report.defect("shifted residual lambda=1/2", &sol.residual, s);
    if let Some(d) = &sol.candidate_defect {
        detail.insert("candidate_defect".into(), json!(d.render()));
    }
    if let Some(d) = &sol.candidate_scaled_defect {
        report.defect("candidate f(lambda z) against lambda e_q(lambda z)", d, s);
    }
    Ok(())
}

fn rational<R: Real>(report: &mut Report, q: &QParam<R>, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(path) => {
            let r: Realization<R> = realization_from_json(&read_file(path)?)?;
            rank_report(report, q, &r, "file", None)
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(report.cfg.seed);
            for n in 1..=4 {
                let r = lift::<R>(&synthetic(&mut rng, n, (2, 1))?);
                rank_report(report, q, &r, &format!("synthetic N={n}"), Some(n))?;
            }
            Ok(())
        }
    }
}

/// Hankel rank, adjoint-span dimension and Borel round trip of the Taylor
/// series of `r`, at degree bound `2N+4`.
fn rank_report<R: Real>(
    report: &mut Report,
    q: &QParam<R>,
    r: &Realization<R>,
    label: &str,
    expected: Option<usize>,
) -> Result<(), CliError> {
    let n = r.state_dim();
    let bound = (2 * n + 4).max(6);
    let f = taylor_from_realization(r, q, bound);
    let size = bound / 2 + 1;
    let rank = numerical_rank(&hankel(&f, q, size, size)?, RANK_TOL);
    let span = adjoint_span_dimension(&f, q, size - 1, RANK_TOL)?;
    let (flag, _) = is_q_rational(&f, q, RANK_TOL)?;
    let detail = json!({
        "state_dim": n,
        "hankel_rank": rank,
        "adjoint_span": span,
        "q_rational": flag,
        "degree_bound": bound,
    });
    let rank_ok = match expected {
        Some(e) => rank == e,
        None => rank <= n,
    };
    report.flag(format!("{label}: Hankel rank"), rank_ok, detail.clone());
    report.flag(format!("{label}: adjoint span = Hankel rank"), span == rank, detail.clone());
    report.flag(format!("{label}: rank stabilizes"), flag, detail);
    let back = inverse_borel(&borel(&f, q)?, q)?;
    report.defect(format!("{label}: Borel round trip"), &back.max_defect(&f), matrix_series_scale(&f));
    Ok(())
}
