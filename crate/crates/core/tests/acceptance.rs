//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use tba_exact::closedform::Quantity;
use tba_exact::indices::{cfiv, itilde, IndexMethod};
use tba_exact::relations::{run_suite, Suite};
use tba_exact::solver::{closed_form_candidate, closed_form_residual, solve_su2k, Candidate, RESIDUAL_WINDOW};
use tba_exact::specfun::{aik, aik_prime, airy_ai, airy_ai_prime, bessel_k, gamma, hyp0f2, su3_phi_build, su3_phi_eval};
use tba_exact::{ClosedFormSolution, SolveOptions, ThetaGrid};

type Outcome = Result<String, String>;

/// Points at which `e^{-A}` is sampled for the mass fit.
const MASS_FIT: (f64, f64) = (4.0, 5.0);

fn grid() -> ThetaGrid<f64> {
    ThetaGrid::new(-40.0, 6.0, 0.025).unwrap()
}

fn ensure(ok: bool, msg: String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg)
    }
}

fn max_sup(r: &[(String, f64)]) -> f64 {
    r.iter().map(|x| x.1).fold(0.0, f64::max)
}

fn timed(limit: Duration, t0: Instant) -> Result<f64, String> {
    let s = t0.elapsed().as_secs_f64();
    ensure(t0.elapsed() < limit, format!("took {s:.1} s, limit {} s", limit.as_secs()))?;
    Ok(s)
}

fn fendley() -> Outcome {
    let t0 = Instant::now();
    let cf = ClosedFormSolution::su2k(1.0).map_err(|e| e.to_string())?;
    let r = closed_form_residual(&cf, grid(), RESIDUAL_WINDOW).map_err(|e| e.to_string())?;
    let sup = max_sup(&r);
    ensure(sup < 1e-6, format!("sup residual {sup:.2e}"))?;
    let s = timed(Duration::from_secs(30), t0)?;
    Ok(format!("sup residual {sup:.2e} in {s:.1} s"))
}

fn su2k_family() -> Outcome {
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    for k in [1.0, 2.0, 3.0, 4.0, 2.5] {
        let cf = ClosedFormSolution::su2k(k).map_err(|e| e.to_string())?;
        let sup = max_sup(&closed_form_residual(&cf, grid(), RESIDUAL_WINDOW).map_err(|e| e.to_string())?);
        ensure(sup < 1e-6, format!("k = {k}: sup residual {sup:.2e}"))?;
        let cot = 1.0 / (PI / (k + 2.0)).tan();
        let ea = cf.plateau_estimate(Quantity::ExpA).map_err(|e| e.to_string())?;
        let b = cf.plateau_estimate(Quantity::B).map_err(|e| e.to_string())?;
        let dp = (ea - 2.0 * cot).norm().max((b + cot).norm());
        ensure(dp < 1e-6, format!("k = {k}: plateau off by {dp:.2e}"))?;
        let m = cf.tail_mass_fit(MASS_FIT.0, MASS_FIT.1).map_err(|e| e.to_string())?;
        ensure((m - 1.0).abs() < 1e-4, format!("k = {k}: mass fit {m}"))?;
        worst = (worst.0.max(sup), worst.1.max(dp), worst.2.max((m - 1.0).abs()));
    }
    Ok(format!(
        "max residual {:.2e}, plateau error {:.2e}, |m_A - 1| {:.2e}",
        worst.0, worst.1, worst.2
    ))
}

fn solver_agreement() -> Outcome {
    let g = grid();
    let range = g.window(RESIDUAL_WINDOW.0, RESIDUAL_WINDOW.1);
    let mut out = Vec::new();
    for k in [1.0, 2.0, 3.0] {
        let opts = SolveOptions {
            damping: 0.5,
            ..Default::default()
        };
        let sol = solve_su2k(k, g, &opts).map_err(|e| format!("k = {k}: {e}"))?;
        let cf = ClosedFormSolution::su2k(k).map_err(|e| e.to_string())?;
        let Candidate::Su2k { a, b, .. } = closed_form_candidate(&cf, g).map_err(|e| e.to_string())? else {
            return Err("wrong candidate model".into());
        };
        let d = sol
            .a
            .sup_diff(&a, range.clone())
            .and_then(|x| Ok(x.max(sol.b.sup_diff(&b, range.clone())?)))
            .map_err(|e| e.to_string())?;
        let it = sol.report.iterations;
        ensure(d < 1e-6 && it < 2000, format!("k = {k}: sup diff {d:.2e}, {it} iterations"))?;
        out.push(format!("k={k}: {d:.1e}/{it} it"));
    }
    Ok(out.join(", "))
}

fn su3() -> Outcome {
    let cf = ClosedFormSolution::su3().map_err(|e| e.to_string())?;
    let sup = max_sup(&closed_form_residual(&cf, grid(), RESIDUAL_WINDOW).map_err(|e| e.to_string())?);
    ensure(sup < 1e-5, format!("sup residual {sup:.2e}"))?;
    let a1 = Complex64::from_polar(3.0 / (2.0 * 2f64.sqrt()), PI / 4.0);
    let want = [
        (Quantity::ExpA1, a1),
        (Quantity::ExpA2, a1.conj()),
        (Quantity::B0, Complex64::new(-0.75, -0.25)),
        (Quantity::B0Bar, Complex64::new(-0.75, 0.25)),
    ];
    let mut dp = 0.0f64;
    for (q, w) in want {
        dp = dp.max((cf.plateau_estimate(q).map_err(|e| e.to_string())? - w).norm());
    }
    ensure(dp < 1e-5, format!("plateau off by {dp:.2e}"))?;
    let m = cf.tail_mass_fit(MASS_FIT.0, MASS_FIT.1).map_err(|e| e.to_string())?;
    ensure((m - 1.0).abs() < 1e-4, format!("mass fit {m}"))?;
    Ok(format!("sup residual {sup:.2e}, plateau error {dp:.2e}, |m_A - 1| {:.2e}", (m - 1.0).abs()))
}

fn cfiv_index() -> Outcome {
    let mut worst = 0.0f64;
    let mut slowest = 0.0f64;
    for k in [1.0, 2.0, 3.0, 4.0] {
        let t0 = Instant::now();
        for method in [IndexMethod::Quadrature, IndexMethod::GammaFormula] {
            let r = cfiv(k, method).map_err(|e| e.to_string())?;
            ensure(r.abs_diff < 1e-6, format!("k = {k}, {method:?}: {} vs {}", r.numeric, r.exact))?;
            worst = worst.max(r.abs_diff);
        }
        slowest = slowest.max(timed(Duration::from_secs(5), t0).map_err(|e| format!("k = {k}: {e}"))?);
    }
    Ok(format!("max |Q - k/(k+2)| {worst:.2e}, slowest k {slowest:.2} s"))
}

fn conserved() -> Outcome {
    let mut worst = 0.0f64;
    for k in [1.0, 2.0, 3.0] {
        for m in [1, 2, 3, 5] {
            let q = itilde(m, k, IndexMethod::Quadrature).map_err(|e| e.to_string())?.numeric;
            let g = itilde(m, k, IndexMethod::GammaFormula).map_err(|e| e.to_string())?.numeric;
            let rel = (q - g).abs() / g.abs();
            ensure(rel < 1e-6, format!("k = {k}, m = {m}: {q} vs {g}"))?;
            worst = worst.max(rel);
        }
        let i1 = itilde(1, k, IndexMethod::GammaFormula).map_err(|e| e.to_string())?.numeric;
        let qc = cfiv(k, IndexMethod::GammaFormula).map_err(|e| e.to_string())?.numeric;
        ensure((2.0 * i1 - qc).abs() < 1e-8, format!("k = {k}: 2 I1 = {} vs Q = {qc}", 2.0 * i1))?;
    }
    Ok(format!("max relative difference {worst:.2e}"))
}

fn identity_suite() -> Outcome {
    let t0 = Instant::now();
    let checks = run_suite(Suite::All, 42).map_err(|e| e.to_string())?;
    let required = [
        "airy_three_term",
        "quantum_wronskian_h0",
        "ysystem_first_order_su2k",
        "ysystem_first_order_su3",
        "appendix_c_constants",
        "squared_wronskian",
    ];
    for name in required {
        ensure(checks.iter().any(|c| c.name.starts_with(name)), format!("missing check {name}"))?;
    }
    for k in ["k=1", "k=2", "k=3"] {
        ensure(
            checks.iter().any(|c| c.name.starts_with("quantum_wronskian_h0") && c.name.contains(k)),
            format!("missing quantum Wronskian at {k}"),
        )?;
    }
    if let Some(c) = checks.iter().find(|c| !c.passed) {
        return Err(c.to_string());
    }
    let s = timed(Duration::from_secs(60), t0)?;
    Ok(format!("{} checks in {s:.2} s", checks.len()))
}

type C = [f64; 2];

#[derive(Deserialize)]
struct Oracles {
    gamma: Vec<(C, C)>,
    airy: Vec<(C, C, C)>,
    bessel_k: Vec<(f64, C, C)>,
    aik: Vec<(f64, C, C, C)>,
    hyp0f2: Vec<(f64, f64, C, C)>,
    su3_phi: Vec<(C, C, C, C)>,
}

fn c(v: C) -> Complex64 {
    Complex64::new(v[0], v[1])
}

fn rel(got: Complex64, want: Complex64) -> f64 {
    (got - want).norm() / want.norm().max(1e-300)
}

fn load_oracles() -> Result<Oracles, String> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/oracles.json");
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    // rows are objects; flatten them into tuples in field order
    let rows = |name: &str, fields: &[&str]| -> serde_json::Value {
        let arr = v[name].as_array().cloned().unwrap_or_default();
        serde_json::Value::Array(
            arr.iter()
                .map(|r| serde_json::Value::Array(fields.iter().map(|f| r[*f].clone()).collect()))
                .collect(),
        )
    };
    let flat = serde_json::json!({
        "gamma": rows("gamma", &["z", "value"]),
        "airy": rows("airy", &["z", "ai", "aip"]),
        "bessel_k": rows("bessel_k", &["nu", "z", "value"]),
        "aik": rows("aik", &["k", "e", "value", "deriv"]),
        "hyp0f2": rows("hyp0f2", &["b1", "b2", "zeta", "value"]),
        "su3_phi": rows("su3_phi", &["u", "value", "d1", "d2"]),
    });
    serde_json::from_value(flat).map_err(|e| e.to_string())
}

fn oracle_tables() -> Result<(), String> {
    let o = load_oracles()?;
    let sizes = [o.gamma.len(), o.airy.len(), o.bessel_k.len(), o.aik.len(), o.hyp0f2.len(), o.su3_phi.len()];
    ensure(sizes.iter().all(|&n| n == 50), format!("table sizes {sizes:?}"))?;
    let fail = |what: String| Err::<(), String>(what);
    for (z, v) in &o.gamma {
        if gamma(c(*z)).map_or(f64::INFINITY, |g| rel(g.value, c(*v))) >= 1e-12 {
            return fail(format!("gamma at {z:?}"));
        }
    }
    for (z, ai, aip) in &o.airy {
        if rel(airy_ai(c(*z)).value, c(*ai)) >= 1e-10 || rel(airy_ai_prime(c(*z)).value, c(*aip)) >= 1e-10 {
            return fail(format!("airy at {z:?}"));
        }
    }
    for (nu, z, v) in &o.bessel_k {
        let tol = if c(*z).norm() <= 30.0 { 1e-10 } else { 1e-8 };
        if bessel_k(*nu, c(*z)).map_or(f64::INFINITY, |k| rel(k.value, c(*v))) >= tol {
            return fail(format!("bessel K_{nu} at {z:?}"));
        }
    }
    for (k, e, v, d) in &o.aik {
        let a = aik(*k, c(*e)).map_or(f64::INFINITY, |x| rel(x.value, c(*v)));
        let b = aik_prime(*k, c(*e)).map_or(f64::INFINITY, |x| rel(x.value, c(*d)));
        if a.max(b) >= 1e-9 {
            return fail(format!("aik k={k} at {e:?}"));
        }
    }
    for (b1, b2, z, v) in &o.hyp0f2 {
        if hyp0f2(*b1, *b2, c(*z)).map_or(f64::INFINITY, |x| rel(x.value, c(*v))) >= 1e-12 {
            return fail(format!("0F2({b1},{b2}) at {z:?}"));
        }
    }
    let phi = su3_phi_build().map_err(|e| e.to_string())?;
    for (u, v, d1, d2) in &o.su3_phi {
        for (d, want) in [(0u8, v), (1, d1), (2, d2)] {
            if su3_phi_eval(&phi, c(*u), d).map_or(f64::INFINITY, |x| rel(x.value, c(*want))) >= 1e-10 {
                return fail(format!("phi^({d}) at {u:?}"));
            }
        }
    }
    Ok(())
}

fn properties() -> Outcome {
    // refinement order of the closed-form residual
    let cf = ClosedFormSolution::su2k(1.0).map_err(|e| e.to_string())?;
    let sup = |h: f64| -> Result<f64, String> {
        let g = ThetaGrid::new(-40.0, 8.0, h).map_err(|e| e.to_string())?;
        Ok(max_sup(&closed_form_residual(&cf, g, RESIDUAL_WINDOW).map_err(|e| e.to_string())?))
    };
    let order = (sup(0.4)? / sup(0.2)?).log2();
    ensure(order >= 2.0, format!("refinement order {order:.2}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let su3 = ClosedFormSolution::su3().map_err(|e| e.to_string())?;
    let mut conj = 0.0f64;
    for _ in 0..50 {
        let t = Complex64::new(rng.gen_range(-10.0..4.0), 0.0);
        let v = su3.su3_all(t).map_err(|e| e.to_string())?;
        conj = conj.max((v[0] - v[1].conj()).norm()).max((v[2] - v[3].conj()).norm());
    }
    ensure(conj < 1e-9, format!("SU(3) conjugation defect {conj:.2e}"))?;

    let mut ladder = 0.0f64;
    for _ in 0..50 {
        let (b1, b2) = (rng.gen_range(0.2..2.5), rng.gen_range(0.2..2.5));
        let z = Complex64::from_polar(rng.gen_range(0.0..5.0), rng.gen_range(-PI..PI));
        let f = |z: Complex64| hyp0f2(b1, b2, z).map(|r| r.value).map_err(|e| e.to_string());
        let h = 1e-4;
        let fd = (f(z + h)? - f(z - h)?) / (2.0 * h);
        let exact = hyp0f2(b1 + 1.0, b2 + 1.0, z).map_err(|e| e.to_string())?.value / (b1 * b2);
        ladder = ladder.max((fd - exact).norm() / exact.norm().max(1e-3));
    }
    ensure(ladder < 1e-6, format!("0F2 ladder defect {ladder:.2e}"))?;

    oracle_tables()?;
    Ok(format!(
        "refinement order {order:.1}, conjugation {conj:.1e}, 0F2 ladder {ladder:.1e}, oracle tables ok"
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("k=1 closed form solves the TBA", fendley),
        ("SU(2)_k family", su2k_family),
        ("independent solver agreement", solver_agreement),
        ("SU(3) closed form", su3),
        ("CFIV index", cfiv_index),
        ("conserved quantities", conserved),
        ("identity suite", identity_suite),
        ("property suite", properties),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(msg) => println!("PASS {} {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {name}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
