use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::discretization::{solve_method, Method, MethodParams, Sign};
use crate::experiments::problem;
use crate::fem::Continuity;
use crate::geometry::DomainKind;
use crate::mesh::{generate_pw_mesh, Mesh};

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

#[test]
fn marking_cases() {
    assert_eq!(mark(&[1.0, 0.6, 0.4], 0.5).unwrap(), vec![0, 1]);
    assert_eq!(mark(&[0.3; 5], 0.5).unwrap(), vec![0, 1, 2, 3, 4]);
    assert_eq!(mark(&[1.0, 0.5], 0.5).unwrap(), vec![0, 1]);
    assert_eq!(mark_strict(&[1.0, 0.5], 0.5).unwrap(), vec![0]);
    assert_eq!(mark(&[0.0, 0.0, 0.0], 0.5).unwrap(), vec![0, 1, 2]);
    assert_eq!(mark_strict(&[0.2, 0.7, 0.7], 1.0).unwrap(), vec![1]);
}

#[test]
fn marking_rejects_bad_input() {
    assert!(mark::<f64>(&[], 0.5).is_err());
    assert!(mark(&[1.0], 0.0).is_err());
    assert!(mark(&[1.0], 1.5).is_err());
    assert!(mark(&[1.0, f64::NAN], 0.5).is_err());
    assert!(mark(&[1.0, -1.0], 0.5).is_err());
}

proptest! {
    #[test]
    fn raising_theta_never_enlarges_the_marked_set(
        eta in prop::collection::vec(0.0f64..10.0, 1..60),
        a in 0.01f64..1.0,
        b in 0.01f64..1.0,
    ) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let big = mark(&eta, lo).unwrap();
        let small = mark(&eta, hi).unwrap();
        prop_assert!(small.iter().all(|e| big.contains(e)));
        let max = eta.iter().copied().fold(0.0, f64::max);
        let arg = eta.iter().position(|&x| x == max).unwrap();
        prop_assert!(small.contains(&arg));
    }
}

#[test]
fn regression_and_rates() {
    let n = [10.0, 100.0, 1000.0];
    let e = [1.0, 0.1f64.powf(0.75), 0.01f64.powf(0.75)];
    assert!((regression_slope(&n, &e).unwrap() + 0.75).abs() < 1e-12);
    assert!(regression_slope(&[1.0], &[1.0]).is_none());
    let r = observed_rates(&[Some(1.0), Some(0.25), None, Some(0.1)]);
    assert_eq!(r.len(), 4);
    assert!(r[0].is_none() && r[2].is_none() && r[3].is_none());
    assert!((r[1].unwrap() - 2.0).abs() < 1e-14);
}

#[test]
fn dof_count_matches_solvers() {
    let p = problem::<f64>("franke").unwrap();
    let mesh = Arc::new(Mesh::unit_square(3).unwrap().refine(&[0, 5]).unwrap());
    let cases = [
        (Method::Nitsche, 1, 0, Continuity::Discontinuous),
        (Method::Nitsche, 3, 0, Continuity::Discontinuous),
        (Method::Lagrange, 2, 0, Continuity::Discontinuous),
        (Method::Lagrange, 2, 2, Continuity::Continuous),
        (Method::BarbosaHughes, 1, 1, Continuity::Discontinuous),
    ];
    for (method, k, kprime, continuity) in cases {
        let params = MethodParams {
            method,
            k,
            kprime,
            continuity,
            ..MethodParams::default()
        };
        let sol = solve_method(&p, mesh.clone(), &params).unwrap();
        assert_eq!(
            count_dofs(&mesh, &params),
            sol.n_dofs(),
            "{method:?} k={k} k'={kprime}"
        );
    }
}

fn small_config() -> AmrConfig {
    let mut c = AmrConfig::new(MethodParams::default());
    c.level = 10;
    c.dual = None;
    c
}

#[test]
fn budget_just_above_initial_gives_one_step() {
    let p = problem::<f64>("franke").unwrap();
    let mut c = small_config();
    c.budget = count_dofs(
        &initial_mesh::<f64>(DomainKind::UnitSquare, None).unwrap(),
        &c.params,
    ) + 1;
    let r = amr_loop(&p, &c).unwrap();
    assert_eq!(r.steps.len(), 1);
    assert!(r.failure.is_none());
}

#[test]
fn budget_below_initial_is_rejected() {
    let p = problem::<f64>("franke").unwrap();
    let mut c = small_config();
    c.budget = 10;
    assert!(amr_loop(&p, &c).is_err());
    c.budget = 1000;
    c.theta = 0.0;
    assert!(amr_loop(&p, &c).is_err());
}

#[test]
fn loop_respects_budget_and_is_deterministic() {
    let p = problem::<f64>("franke").unwrap();
    let mut c = small_config();
    c.budget = 600;
    c.dual = Some(DualMesh::Uniform(8));
    let a = amr_loop(&p, &c).unwrap();
    let b = amr_loop(&p, &c).unwrap();
    assert!(a.steps.len() > 3);
    a.check_invariants().unwrap();
    assert!(a.last().unwrap().n <= c.budget);
    assert!(a.steps.iter().rev().skip(1).all(|s| s.e1.is_none()));
    assert!(a.last().unwrap().e1.is_some());
    let strip = |r: &ConvergenceRecord| {
        r.steps
            .iter()
            .map(|s| StepRecord {
                seconds: 0.0,
                ..s.clone()
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn loop_reports_partial_record_on_solver_failure() {
    let p = problem::<f64>("franke").unwrap();
    let mut c = small_config();
    c.params.sign = Sign::Minus;
    c.params.gamma = 1e-6;
    let r = amr_loop(&p, &c).unwrap();
    assert!(r.steps.is_empty());
    assert!(r.failure.as_deref().unwrap().contains("solver"));
}

#[test]
fn uniform_study_single_level() {
    let p = problem::<f64>("franke").unwrap();
    let r = uniform_study(&p, &small_config(), &[4]).unwrap();
    assert_eq!(r.steps.len(), 1);
    assert_eq!(r.steps[0].h, Some(0.25));
    let rates = observed_rates(&r.steps.iter().map(|s| s.e2).collect::<Vec<_>>());
    assert_eq!(rates, vec![None]);
}

#[test]
fn uniform_study_on_the_lshape() {
    let p = problem::<f64>("lshape-singular").unwrap();
    let r = uniform_study(&p, &small_config(), &[2, 4]).unwrap();
    r.check_invariants().unwrap();
    let e = r.steps[0].e.unwrap();
    assert!((e - 4.0 * r.steps[0].e2.unwrap()).abs() < 1e-15);
}

#[test]
fn pw_boundary_facets_quadruple_when_h_halves() {
    let a = generate_pw_mesh::<f64>(DomainKind::UnitSquare, 0.25, 1_000_000).unwrap();
    let b = generate_pw_mesh::<f64>(DomainKind::UnitSquare, 0.125, 1_000_000).unwrap();
    let ratio = b.boundary_facets().len() as f64 / a.boundary_facets().len() as f64;
    assert!((3.0..=5.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn pw_study_records_each_parameter() {
    let p = problem::<f64>("franke").unwrap();
    let r = pw_study(&p, &small_config(), &[0.5, 0.25], 100_000).unwrap();
    assert_eq!(r.steps.len(), 2);
    assert!(r.steps[1].n_boundary > r.steps[0].n_boundary);
    let capped = pw_study(&p, &small_config(), &[0.5, 0.05], 200).unwrap();
    assert_eq!(capped.steps.len(), 1);
    assert!(capped.failure.is_some());
}

#[test]
fn weight_demo_refines_towards_the_boundary() {
    let demo = weight_demo::<f64>(2, 1.0, 7, 0.5).unwrap();
    assert_eq!(demo.meshes.len(), 8);
    demo.last().check_invariants(10.0).unwrap();
    assert!(
        demo.boundary_level() >= demo.center_level() + 2,
        "boundary {} centre {}",
        demo.boundary_level(),
        demo.center_level()
    );
}

#[test]
fn record_csv_layout() {
    let r = ConvergenceRecord {
        label: "x".into(),
        steps: vec![StepRecord {
            step: 0,
            n: 9,
            n_boundary: 8,
            e2: Some(0.5),
            seconds: 1.25,
            ..StepRecord::default()
        }],
        failure: None,
    };
    let mut buf = Vec::new();
    r.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "step,N,N_boundary,eta,eta_classical,E1,E2,E,energy_err,seconds"
    );
    assert_eq!(lines[1], "0,9,8,,,,5e-1,,,1.250");
}

#[test]
fn marked_sets_are_sorted() {
    let eta = [0.9, 0.1, 1.0, 0.95];
    assert_eq!(sorted(mark(&eta, 0.5).unwrap()), mark(&eta, 0.5).unwrap());
}
