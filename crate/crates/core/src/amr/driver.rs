use std::sync::Arc;
use std::time::Instant;

use log::{info, warn};

use crate::discretization::{
    energy_error, solve_method, DiscreteSolution, Method, MethodParams, ProblemSpec,
};
use crate::error::{Error, Result};
use crate::estimator::{estimate, IndicatorField};
use crate::fem::{default_degree, Continuity};
use crate::mesh::{compute_distance_field, generate_pw_mesh, Mesh};
use crate::norm_eval::{neumann_dual_error, wavelet_pyramid, DualError, FluxError, WaveletPyramid};
use crate::scalar::{lit, to_f64, Real};

use super::config::{initial_mesh, uniform_mesh, AmrConfig, DualMesh, EstimatorKind};
use super::marking::mark;
use super::record::{ConvergenceRecord, StepRecord};

/// Everything computed in one step, handed to the observer of the study.
pub struct StepView<'a, T> {
    pub row: &'a StepRecord,
    pub mesh: &'a Mesh<T>,
    pub solution: &'a DiscreteSolution<T>,
    pub indicators: &'a IndicatorField<T>,
    pub pyramid: &'a WaveletPyramid<T>,
}

/// Unknowns of the discretization on `mesh` without building the spaces.
pub fn count_dofs<T: Real>(mesh: &Mesh<T>, params: &MethodParams) -> usize {
    let k = params.k;
    let bulk = mesh.num_vertices()
        + k.saturating_sub(1) * mesh.num_facets()
        + k.saturating_sub(1) * k.saturating_sub(2) / 2 * mesh.num_elements();
    let nb = mesh.boundary_facets().len();
    let multiplier = match params.method {
        Method::Nitsche => 0,
        _ => match params.continuity {
            Continuity::Discontinuous => nb * (params.kprime + 1),
            Continuity::Continuous => nb * params.kprime.max(1),
        },
    };
    bulk + multiplier
}

/// `E₁` of the flux error of `solution`, with elements two orders higher.
pub fn flux_dual_error<T: Real>(
    problem: &ProblemSpec<T>,
    solution: &DiscreteSolution<T>,
    dual: DualMesh,
) -> Result<DualError<T>> {
    let mesh = solution.space.mesh();
    let fine = match dual {
        DualMesh::Refine(r) => {
            let mut m = (**mesh).clone();
            for _ in 0..r {
                m = m.uniform_refine()?;
            }
            m
        }
        DualMesh::Uniform(n) => uniform_mesh(mesh.domain(), n)?,
    };
    let delta = FluxError::new(mesh, solution.flux(problem), problem)?;
    neumann_dual_error(&delta, Arc::new(fine), solution.space.order() + 2)
}

struct Evaluated<T> {
    row: StepRecord,
    solution: DiscreteSolution<T>,
    indicators: IndicatorField<T>,
    pyramid: WaveletPyramid<T>,
}

fn evaluate<T: Real>(
    problem: &ProblemSpec<T>,
    mesh: Arc<Mesh<T>>,
    config: &AmrConfig,
    step: usize,
) -> Result<Evaluated<T>> {
    let solution = solve_method(problem, mesh.clone(), &config.params)?;
    let distance = compute_distance_field(&mesh);
    let indicators = estimate(
        &solution,
        problem,
        &distance,
        &config.weights,
        &config.eta_options(),
    )?;
    let delta = FluxError::new(&mesh, solution.flux(problem), problem)?;
    let pyramid = wavelet_pyramid(&delta, config.level, default_degree(config.params.k))?;
    let e2 = to_f64(pyramid.norm());
    let energy_err = match &problem.exact {
        Some(ex) => Some(to_f64(energy_error(&solution.space, &solution.u, |x| {
            (ex.grad)(x)
        })?)),
        None => None,
    };
    let row = StepRecord {
        step,
        h: None,
        n: solution.n_dofs(),
        n_boundary: solution.space.boundary_dofs().len(),
        eta: Some(to_f64(indicators.eta.total)),
        eta_classical: Some(to_f64(indicators.eta_classical.total)),
        e1: None,
        e2: Some(e2),
        e: (config.params.method != Method::Lagrange).then_some(4.0 * e2),
        energy_err,
        seconds: 0.0,
    };
    Ok(Evaluated {
        row,
        solution,
        indicators,
        pyramid,
    })
}

fn add_e1<T: Real>(
    problem: &ProblemSpec<T>,
    ev: &mut Evaluated<T>,
    dual: Option<DualMesh>,
) -> Result<()> {
    if let Some(d) = dual {
        let err = flux_dual_error(problem, &ev.solution, d)?;
        if !err.compatible {
            warn!(
                "step {}: flux error mean {:e}",
                ev.row.step,
                to_f64(err.mean)
            );
        }
        ev.row.e1 = Some(to_f64(err.e1));
    }
    Ok(())
}

fn study_label(problem: &ProblemSpec<impl Real>, config: &AmrConfig, kind: &str) -> String {
    format!(
        "{} {} k={} {kind}",
        problem.name,
        config.params.method.tag(),
        config.params.k
    )
}

pub fn amr_loop<T: Real>(
    problem: &ProblemSpec<T>,
    config: &AmrConfig,
) -> Result<ConvergenceRecord> {
    amr_loop_with(problem, config, |_| Ok(()))
}

/// Solve, estimate, mark and refine until the next mesh would exceed the
/// budget. `E₂` is recorded at every step, `E₁` at the last one. A failing
/// solve ends the loop with the completed steps and `failure` set; only an
/// invalid configuration is returned as an error.
pub fn amr_loop_with<T: Real>(
    problem: &ProblemSpec<T>,
    config: &AmrConfig,
    mut observer: impl FnMut(&StepView<T>) -> Result<()>,
) -> Result<ConvergenceRecord> {
    config.validate()?;
    let kind = match config.estimator {
        EstimatorKind::Eta => "AMR-eta",
        EstimatorKind::Classical => "AMR-classical",
    };
    let mut record = ConvergenceRecord::new(study_label(problem, config, kind));
    let mut mesh = Arc::new(initial_mesh::<T>(problem.domain, config.initial_n)?);
    let n0 = count_dofs(&mesh, &config.params);
    if n0 > config.budget {
        return Err(Error::InvalidArgument(format!(
            "initial mesh has {n0} unknowns, over the budget of {}",
            config.budget
        )));
    }
    for step in 0.. {
        let start = Instant::now();
        let outcome = (|| -> Result<(Evaluated<T>, Option<Mesh<T>>)> {
            let mut ev = evaluate(problem, mesh.clone(), config, step)?;
            let eta = match config.estimator {
                EstimatorKind::Eta => &ev.indicators.eta.per_element,
                EstimatorKind::Classical => &ev.indicators.eta_classical.per_element,
            };
            let next = mesh.refine(&mark(eta, lit::<T>(config.theta))?)?;
            if count_dofs(&next, &config.params) > config.budget {
                add_e1(problem, &mut ev, config.dual)?;
                return Ok((ev, None));
            }
            Ok((ev, Some(next)))
        })();
        match outcome {
            Ok((mut ev, next)) => {
                ev.row.seconds = start.elapsed().as_secs_f64();
                info!(
                    "{}: step {} N = {} E2 = {:e}",
                    record.label,
                    step,
                    ev.row.n,
                    ev.row.e2.unwrap_or(0.0)
                );
                observer(&StepView {
                    row: &ev.row,
                    mesh: &mesh,
                    solution: &ev.solution,
                    indicators: &ev.indicators,
                    pyramid: &ev.pyramid,
                })?;
                record.steps.push(ev.row);
                match next {
                    Some(m) => mesh = Arc::new(m),
                    None => break,
                }
            }
            Err(e) => {
                warn!("{}: aborted at step {step}: {e}", record.label);
                record.failure = Some(e.to_string());
                break;
            }
        }
    }
    Ok(record)
}

fn sweep<T: Real>(
    problem: &ProblemSpec<T>,
    config: &AmrConfig,
    mut record: ConvergenceRecord,
    meshes: impl Iterator<Item = (f64, Result<Mesh<T>>)>,
    mut observer: impl FnMut(&StepView<T>) -> Result<()>,
) -> Result<ConvergenceRecord> {
    config.validate()?;
    for (step, (h, mesh)) in meshes.enumerate() {
        let start = Instant::now();
        let outcome = mesh.and_then(|m| {
            let m = Arc::new(m);
            let mut ev = evaluate(problem, m.clone(), config, step)?;
            add_e1(problem, &mut ev, config.dual)?;
            Ok((m, ev))
        });
        match outcome {
            Ok((mesh, mut ev)) => {
                ev.row.h = Some(h);
                ev.row.seconds = start.elapsed().as_secs_f64();
                info!(
                    "{}: h = {h} N = {} E2 = {:e}",
                    record.label,
                    ev.row.n,
                    ev.row.e2.unwrap_or(0.0)
                );
                observer(&StepView {
                    row: &ev.row,
                    mesh: &mesh,
                    solution: &ev.solution,
                    indicators: &ev.indicators,
                    pyramid: &ev.pyramid,
                })?;
                record.steps.push(ev.row);
            }
            Err(e) => {
                warn!("{}: aborted at h = {h}: {e}", record.label);
                record.failure = Some(e.to_string());
                break;
            }
        }
    }
    Ok(record)
}

pub fn uniform_study<T: Real>(
    problem: &ProblemSpec<T>,
    config: &AmrConfig,
    levels: &[usize],
) -> Result<ConvergenceRecord> {
    uniform_study_with(problem, config, levels, |_| Ok(()))
}

/// Structured meshes with `h = 1/n` for each `n` in `levels`; `E₁` at every
/// level when `config.dual` is set.
pub fn uniform_study_with<T: Real>(
    problem: &ProblemSpec<T>,
    config: &AmrConfig,
    levels: &[usize],
    observer: impl FnMut(&StepView<T>) -> Result<()>,
) -> Result<ConvergenceRecord> {
    let record = ConvergenceRecord::new(study_label(problem, config, "uniform"));
    let meshes = levels
        .iter()
        .map(|&n| (1.0 / n.max(1) as f64, uniform_mesh(problem.domain, n)));
    sweep(problem, config, record, meshes, observer)
}

pub fn pw_study<T: Real>(
    problem: &ProblemSpec<T>,
    config: &AmrConfig,
    h_list: &[f64],
    cap: usize,
) -> Result<ConvergenceRecord> {
    pw_study_with(problem, config, h_list, cap, |_| Ok(()))
}

/// Boundary-concentrated meshes for each grading parameter in `h_list`.
pub fn pw_study_with<T: Real>(
    problem: &ProblemSpec<T>,
    config: &AmrConfig,
    h_list: &[f64],
    cap: usize,
    observer: impl FnMut(&StepView<T>) -> Result<()>,
) -> Result<ConvergenceRecord> {
    let record = ConvergenceRecord::new(study_label(problem, config, "PW"));
    let meshes = h_list
        .iter()
        .map(|&h| (h, generate_pw_mesh(problem.domain, lit::<T>(h), cap)));
    sweep(problem, config, record, meshes, observer)
}
