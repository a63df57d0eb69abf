//! One PASS/FAIL line per acceptance criterion. Lines go straight to stderr
//! so they show up without `--nocapture`.

use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fluxweight::amr::{mark, mark_strict, weight_demo, ConvergenceRecord};
use fluxweight::discretization::{
    linear_problem, scalar_field, solve_barbosa_hughes, solve_method, solve_nitsche, vector_field,
    ExactSolution, Method, MethodParams, ProblemSpec, Sign,
};
use fluxweight::estimator::{compute_residuals, weight_element, weight_facet, WeightConfig};
use fluxweight::experiments::metric::{evaluate, value_at};
use fluxweight::experiments::{run_study, Manifest, RunOptions};
use fluxweight::fem::{segment_rule, Continuity};
use fluxweight::geometry::DomainKind;
use fluxweight::mesh::{compute_distance_field, Mesh};
use fluxweight::norm_eval::{dwt_step, wavelet_norm, ArcFunction};

fn report(id: u32, pass: bool, detail: &str) {
    let line = format!(
        "criterion {id}: {} {detail}\n",
        if pass { "PASS" } else { "FAIL" }
    );
    std::io::stderr().write_all(line.as_bytes()).unwrap();
    assert!(pass, "criterion {id}: {detail}");
}

fn manifest_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../manifests")
        .join(name)
}

/// Runs the named studies of a manifest file, keyed by study name.
fn run(file: &str, names: &[&str]) -> HashMap<String, ConvergenceRecord> {
    let text = std::fs::read_to_string(manifest_path(file)).unwrap();
    let manifest = Manifest::from_json(&text).unwrap();
    let opts = RunOptions::default();
    manifest
        .studies
        .iter()
        .filter(|s| names.contains(&s.name.as_str()))
        .map(|s| {
            let r = run_study(s, Path::new("."), &opts).unwrap();
            assert!(r.failure.is_none(), "{}: {:?}", s.name, r.failure);
            (s.name.clone(), r)
        })
        .collect()
}

fn metric(r: &ConvergenceRecord, m: &str) -> f64 {
    evaluate(r, m).unwrap().unwrap_or(f64::NAN)
}

fn within(x: f64, lo: f64, hi: f64) -> bool {
    (lo..=hi).contains(&x)
}

fn franke_amr() -> &'static HashMap<String, ConvergenceRecord> {
    static CELL: OnceLock<HashMap<String, ConvergenceRecord>> = OnceLock::new();
    CELL.get_or_init(|| run("franke_nitsche_amr.json", &["amr-eta", "amr-classical"]))
}

fn nitsche_uniform() -> &'static HashMap<String, ConvergenceRecord> {
    static CELL: OnceLock<HashMap<String, ConvergenceRecord>> = OnceLock::new();
    CELL.get_or_init(|| run("franke_nitsche_uniform.json", &["nitsche-k1", "nitsche-k2"]))
}

fn lm_uniform() -> &'static HashMap<String, ConvergenceRecord> {
    static CELL: OnceLock<HashMap<String, ConvergenceRecord>> = OnceLock::new();
    CELL.get_or_init(|| run("franke_lm_uniform.json", &["lm-k2-k0", "lm-k2-k2"]))
}

#[test]
fn criterion_01_uniform_nitsche_rates() {
    let t = nitsche_uniform();
    let (k1, k2) = (&t["nitsche-k1"], &t["nitsche-k2"]);
    let lo = metric(k1, "rate_min:E1:3");
    let hi = metric(k1, "rate_max:E1:3");
    let last2 = metric(k2, "rate_last:E1");
    let secs = metric(k1, "total:seconds") + metric(k2, "total:seconds");
    let pass = lo >= 0.8 && hi <= 1.2 && last2 >= 1.8 && secs <= 120.0;
    report(
        1,
        pass,
        &format!("k=1 E1 rates in [{lo:.3}, {hi:.3}] (want 1.0 +- 0.2), k=2 last rate {last2:.3} (want >= 1.8), {secs:.1} s (want <= 120)"),
    );
}

#[test]
fn criterion_02_e2_over_e1_ratio() {
    let k1 = &nitsche_uniform()["nitsche-k1"];
    let lo = metric(k1, "min:E2/E1");
    let hi = metric(k1, "max:E2/E1");
    let spread = metric(k1, "spread:E2/E1");
    let pass = lo >= 0.15 && hi <= 0.40 && spread <= 0.30;
    report(
        2,
        pass,
        &format!("E2/E1 in [{lo:.3}, {hi:.3}] (want within [0.15, 0.40]), variation {spread:.3} (want <= 0.30)"),
    );
}

#[test]
fn criterion_03_lm_k2_k0_rates() {
    let r = &lm_uniform()["lm-k2-k0"];
    let lo = metric(r, "rate_min:E1:2");
    let hi = metric(r, "rate_max:E1:2");
    report(
        3,
        lo >= 1.3 && hi <= 1.8,
        &format!("last two E1 rates in [{lo:.3}, {hi:.3}] (want within [1.3, 1.8])"),
    );
}

#[test]
fn criterion_04_lm_k2_k2_degrades() {
    let r = &lm_uniform()["lm-k2-k2"];
    let last = metric(r, "rate_last:E1");
    report(
        4,
        within(last, 0.75, 1.25),
        &format!("finest E1 rate {last:.3} (want 1.0 +- 0.25)"),
    );
}

#[test]
fn criterion_05_lshape_uniform_e2_rate() {
    let t = run("lshape_nitsche_uniform.json", &["lshape-nitsche-k1"]);
    let r = &t["lshape-nitsche-k1"];
    let lo = metric(r, "rate_min:E2:3");
    let hi = metric(r, "rate_max:E2:3");
    report(
        5,
        lo >= 0.45 && hi <= 0.70,
        &format!("last three E2 rates in [{lo:.3}, {hi:.3}] (want within [0.45, 0.70])"),
    );
}

#[test]
fn criterion_06_franke_amr_comparison() {
    let t = franke_amr();
    let (eta, classical) = (&t["amr-eta"], &t["amr-classical"]);
    let last = eta.last().unwrap();
    let e_eta = last.e.unwrap();
    let e_cl = value_at(classical, "E", last.n as f64).unwrap().unwrap();
    let ratio = e_eta / e_cl;
    let slope = metric(eta, "slope:E");
    let secs = metric(eta, "total:seconds") + metric(classical, "total:seconds");
    let pass = ratio <= 0.5 && slope <= -1.2 && secs <= 900.0;
    report(
        6,
        pass,
        &format!(
            "E(eta)/E(classical) at N={} is {ratio:.3} (want <= 0.5), slope {slope:.3} (want <= -1.2), {secs:.1} s (want <= 900)",
            last.n
        ),
    );
}

#[test]
fn criterion_07_lshape_amr_beats_pw() {
    let t = run("lshape_amr.json", &["lshape-amr-eta", "lshape-pw"]);
    let eta = &t["lshape-amr-eta"];
    let last = eta.last().unwrap();
    let pw = value_at(&t["lshape-pw"], "E", last.n as f64)
        .unwrap()
        .unwrap();
    let ratio = last.e.unwrap() / pw;
    report(
        7,
        ratio < 1.0,
        &format!("E(eta)/E(PW) at N={} is {ratio:.3} (want < 1)", last.n),
    );
}

#[test]
fn criterion_08_energy_control() {
    let t = franke_amr();
    let cl = metric(&t["amr-classical"], "slope:energy_err");
    let eta = metric(&t["amr-eta"], "slope:energy_err");
    report(
        8,
        cl <= -0.45 && eta > cl,
        &format!(
            "energy slopes: classical {cl:.3} (want <= -0.45), eta {eta:.3} (want > classical)"
        ),
    );
}

fn wavelet_identities() -> Result<(), String> {
    let (c, d) = dwt_step(&[2.5f64; 8]).map_err(|e| e.to_string())?;
    let s2 = std::f64::consts::SQRT_2;
    if !c.iter().all(|x| (x - 2.5 * s2).abs() < 1e-14) || !d.iter().all(|x| x.abs() < 1e-14) {
        return Err("constant vector".into());
    }
    let (c, d) = dwt_step(&[1.0f64, 0.0, 0.0, 0.0]).map_err(|e| e.to_string())?;
    let hand = [(c[0], s2 / 2.0), (c[1], 0.0), (d[0], s2 / 2.0), (d[1], 0.0)];
    if hand.iter().any(|(a, b)| (a - b).abs() > 1e-15) {
        return Err(format!("hand vector: {c:?} {d:?}"));
    }
    let chart = DomainKind::UnitSquare.boundary::<f64>();
    let f =
        |s: f64| (std::f64::consts::PI * s).cos() + 0.3 * (3.0 * std::f64::consts::PI * s).sin();
    let base = wavelet_norm(&ArcFunction::on_chart(&chart, f), 12, 4).map_err(|e| e.to_string())?;
    let scaled = wavelet_norm(&ArcFunction::on_chart(&chart, move |s| -3.0 * f(s)), 12, 4)
        .map_err(|e| e.to_string())?;
    if (scaled - 3.0 * base).abs() > 1e-12 * base {
        return Err(format!("homogeneity: {scaled} vs 3 x {base}"));
    }
    Ok(())
}

fn weight_and_marking_cases() -> Result<(), String> {
    let c = |k| WeightConfig {
        c1: 1.0,
        c2: 1.0,
        k,
    };
    let ok = weight_element(0.3, 0.0, &c(2)) == 1.0
        && (weight_element(0.01, 0.5, &c(1)) - 0.02f64).abs() < 1e-15
        && weight_element(0.1f64, 0.05, &c(2)) == 1.0
        && weight_facet(0.3, 0.7) == 0.3;
    if !ok {
        return Err("weight formula".into());
    }
    let ok = mark(&[1.0, 0.6, 0.4], 0.5).unwrap() == vec![0, 1]
        && mark(&[0.3; 5], 0.5).unwrap() == vec![0, 1, 2, 3, 4]
        && mark_strict(&[1.0, 0.5], 0.5).unwrap() == vec![0]
        && mark(&[0.0; 3], 0.5).unwrap() == vec![0, 1, 2];
    if !ok {
        return Err("marking rule".into());
    }
    Ok(())
}

fn random_refinement() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for start in [Mesh::<f64>::unit_square(2), Mesh::lshape(1)] {
        let mut mesh = start.map_err(|e| e.to_string())?;
        for _ in 0..10 {
            let n = mesh.num_elements();
            let marked: Vec<usize> = (0..rng.gen_range(1..=(n / 4).max(1)))
                .map(|_| rng.gen_range(0..n))
                .collect();
            mesh = mesh.refine(&marked).map_err(|e| e.to_string())?;
            mesh.check_invariants(10.0)?;
        }
    }
    Ok(())
}

fn methods() -> Vec<MethodParams> {
    let base = MethodParams::default();
    vec![
        MethodParams {
            method: Method::Lagrange,
            k: 2,
            kprime: 0,
            ..base
        },
        MethodParams {
            method: Method::BarbosaHughes,
            k: 1,
            kprime: 0,
            ..base
        },
        MethodParams {
            method: Method::Nitsche,
            k: 1,
            sign: Sign::Minus,
            ..base
        },
        MethodParams {
            method: Method::Nitsche,
            k: 2,
            ..base
        },
    ]
}

fn linear_exactness() -> Result<(), String> {
    let problem = linear_problem::<f64>(DomainKind::LShape, [1.0, -0.5, 2.0]);
    let mesh = Arc::new(Mesh::lshape(2).map_err(|e| e.to_string())?);
    let dist = compute_distance_field(&mesh);
    for params in methods() {
        let sol = solve_method(&problem, mesh.clone(), &params).map_err(|e| e.to_string())?;
        let r = compute_residuals(&sol, &problem, &dist).map_err(|e| e.to_string())?;
        let mut all: Vec<f64> = [&r.r1_element, &r.r0, &r.r1_facet, &r.r2, &r.r3]
            .into_iter()
            .flatten()
            .copied()
            .collect();
        all.extend(r.patches.iter().flat_map(|(_, t)| t.iter().map(|x| x.1)));
        let worst = all.into_iter().fold(0.0, f64::max);
        if worst > 1e-9 {
            return Err(format!(
                "{:?} k={}: residual {worst:e}",
                params.method, params.k
            ));
        }
    }
    Ok(())
}

/// u = sin(x) e^y, a = 1 + x²/2.
fn smooth_problem() -> ProblemSpec<f64> {
    let u = |x: f64, y: f64| x.sin() * y.exp();
    let grad = |x: f64, y: f64| [x.cos() * y.exp(), x.sin() * y.exp()];
    ProblemSpec {
        name: "smooth".into(),
        domain: DomainKind::UnitSquare,
        a: scalar_field(|x, _| 1.0 + 0.5 * x * x),
        grad_a: vector_field(|x, _| [x, 0.0]),
        f: scalar_field(|x, y| -x * x.cos() * y.exp()),
        g: scalar_field(u),
        grad_g: Some(vector_field(grad)),
        exact: Some(ExactSolution {
            u: scalar_field(u),
            grad: vector_field(grad),
        }),
    }
}

fn compatibility() -> Result<(), String> {
    let problem = smooth_problem();
    let mesh = Arc::new(Mesh::unit_square(4).map_err(|e| e.to_string())?);
    let rule = segment_rule::<f64>(12).map_err(|e| e.to_string())?;
    for params in methods() {
        let sol = solve_method(&problem, mesh.clone(), &params).map_err(|e| e.to_string())?;
        let flux = sol.flux(&problem);
        let mut diff = 0.0;
        for (b, bf) in mesh.boundary_facets().iter().enumerate() {
            for (&t, &w) in rule.points.iter().zip(&rule.weights) {
                let x = mesh
                    .vertex(bf.vertices[0])
                    .lerp(mesh.vertex(bf.vertices[1]), t);
                diff +=
                    w * bf.length * (problem.exact_flux(x, bf.normal).unwrap() - flux.eval(b, t));
            }
        }
        if diff.abs() > 1e-9 {
            return Err(format!("{:?} k={}: {diff:e}", params.method, params.k));
        }
    }
    Ok(())
}

fn stenberg() -> Result<(), String> {
    let mut problem = smooth_problem();
    problem.a = scalar_field(|_, _| 1.0);
    problem.grad_a = vector_field(|_, _| [0.0, 0.0]);
    problem.f = scalar_field(|_, _| 0.0);
    let mesh = Arc::new(Mesh::unit_square(4).map_err(|e| e.to_string())?);
    let alpha = 0.1;
    for (k, sign) in [(1, Sign::Plus), (1, Sign::Minus), (2, Sign::Plus)] {
        let bh = solve_barbosa_hughes(
            &problem,
            mesh.clone(),
            k,
            k,
            Continuity::Discontinuous,
            alpha,
            sign,
        )
        .map_err(|e| e.to_string())?;
        let ni = solve_nitsche(&problem, mesh.clone(), k, 1.0 / alpha, sign)
            .map_err(|e| e.to_string())?;
        let diff =
            bh.u.iter()
                .zip(&ni.u)
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        if diff > 1e-8 {
            return Err(format!("k={k} {sign:?}: {diff:e}"));
        }
    }
    Ok(())
}

type Suite = fn() -> Result<(), String>;

#[test]
fn criterion_09_property_suites() {
    let suites: [(&str, Suite); 6] = [
        ("wavelet identities", wavelet_identities),
        ("weights and marking", weight_and_marking_cases),
        ("random refinement", random_refinement),
        ("linear exactness", linear_exactness),
        ("compatibility", compatibility),
        ("Stenberg equivalence", stenberg),
    ];
    let failures: Vec<String> = suites
        .iter()
        .filter_map(|(name, f)| f().err().map(|e| format!("{name}: {e}")))
        .collect();
    let detail = if failures.is_empty() {
        format!("{} suites", suites.len())
    } else {
        failures.join("; ")
    };
    report(9, failures.is_empty(), &detail);
}

#[test]
fn criterion_10_weight_demo() {
    let demo = weight_demo::<f64>(2, 1.0, 7, 0.5).unwrap();
    let (b, c) = (demo.boundary_level(), demo.center_level());
    let pass = demo.meshes.len() == 8 && b >= c + 2;
    report(
        10,
        pass,
        &format!("boundary level {b}, center level {c} (want a gap >= 2)"),
    );
}
