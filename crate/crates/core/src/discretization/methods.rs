use std::sync::Arc;

use log::debug;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fem::{
    assemble_load, assemble_stiffness, boundary_facet_points, default_degree, segment_rule, solve,
    BoundarySpace, Continuity, CsrMatrix, FeSpace, SparseSystem, Structure, TripletBuilder,
};
use crate::geometry::Point2;
use crate::mesh::Mesh;
use crate::scalar::{lit, Real};

use super::problem::ProblemSpec;
use super::solution::{DiscreteSolution, Multiplier};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    #[serde(alias = "lm")]
    Lagrange,
    #[serde(alias = "bh")]
    BarbosaHughes,
    Nitsche,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Lagrange => "LM",
            Method::BarbosaHughes => "BH",
            Method::Nitsche => "Nitsche",
        }
    }
}

/// Sign in front of the non-symmetric boundary term. `Plus` is the
/// antisymmetric variant, `Minus` the symmetric one.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[default]
    #[serde(rename = "+", alias = "antisymmetric")]
    Plus,
    #[serde(rename = "-", alias = "symmetric")]
    Minus,
}

impl Sign {
    pub fn value<T: Real>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }
}

/// Method and discretization parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MethodParams {
    pub method: Method,
    pub k: usize,
    pub kprime: usize,
    pub continuity: Continuity,
    pub gamma: f64,
    pub alpha: f64,
    pub sign: Sign,
}

impl Default for MethodParams {
    fn default() -> Self {
        Self {
            method: Method::Nitsche,
            k: 1,
            kprime: 0,
            continuity: Continuity::Discontinuous,
            gamma: 10.0,
            alpha: 0.1,
            sign: Sign::Plus,
        }
    }
}

/// Solves with the method selected in `params`.
pub fn solve_method<T: Real>(
    problem: &ProblemSpec<T>,
    mesh: Arc<Mesh<T>>,
    params: &MethodParams,
) -> Result<DiscreteSolution<T>> {
    match params.method {
        Method::Lagrange => {
            solve_lagrange(problem, mesh, params.k, params.kprime, params.continuity)
        }
        Method::BarbosaHughes => solve_barbosa_hughes(
            problem,
            mesh,
            params.k,
            params.kprime,
            params.continuity,
            lit::<T>(params.alpha),
            params.sign,
        ),
        Method::Nitsche => {
            solve_nitsche(problem, mesh, params.k, lit::<T>(params.gamma), params.sign)
        }
    }
}

fn check_domain<T: Real>(problem: &ProblemSpec<T>, mesh: &Mesh<T>) -> Result<()> {
    if problem.domain != mesh.domain() {
        return Err(Error::InvalidArgument(format!(
            "problem `{}` lives on {:?} but the mesh covers {:?}",
            problem.name,
            problem.domain,
            mesh.domain()
        )));
    }
    Ok(())
}

fn bulk<T: Real>(problem: &ProblemSpec<T>, space: &FeSpace<T>) -> Result<(CsrMatrix<T>, Vec<T>)> {
    let deg = default_degree(space.order());
    let a = &problem.a;
    let f = &problem.f;
    let k = assemble_stiffness(space, |x| a(x), deg)?;
    let b = assemble_load(space, |x| f(x), deg)?;
    Ok((k, b))
}

/// Boundary data at one facet quadrature point.
struct BoundaryPoint<T> {
    weight: T,
    g: T,
    /// Trace values of the bulk basis.
    phi: Vec<T>,
    /// `a ∂_ν φ_i`.
    dn: Vec<T>,
    /// Multiplier basis values.
    psi: Vec<T>,
}

fn boundary_points<T: Real>(
    problem: &ProblemSpec<T>,
    space: &FeSpace<T>,
    mspace: Option<&BoundarySpace<T>>,
    b: usize,
    degree: usize,
) -> Result<Vec<BoundaryPoint<T>>> {
    let rule = segment_rule::<T>(degree)?;
    let bf = &space.mesh().boundary_facets()[b];
    let geo = space.geometry(bf.element);
    let n = bf.normal;
    Ok(boundary_facet_points(space, b, &rule)
        .into_iter()
        .map(|p| {
            let a = (problem.a)(p.x);
            let dn = (0..space.n_local())
                .map(|i| a * geo.gradient(&p.shape, i).dot(n))
                .collect();
            BoundaryPoint {
                weight: p.weight,
                g: (problem.g)(p.x),
                phi: p.shape.values,
                dn,
                psi: mspace.map(|m| m.values(p.t)).unwrap_or_default(),
            }
        })
        .collect())
}

/// Lagrange multiplier method:
/// `∫a∇u·∇v - ∫_Γ λ v = ∫f v`, `∫_Γ u μ = ∫_Γ g μ`.
pub fn solve_lagrange<T: Real>(
    problem: &ProblemSpec<T>,
    mesh: Arc<Mesh<T>>,
    k: usize,
    kprime: usize,
    continuity: Continuity,
) -> Result<DiscreteSolution<T>> {
    solve_multiplier(problem, mesh, k, kprime, continuity, None)
        .map_err(|e| e.with_context("Lagrange multiplier"))
}

/// Barbosa–Hughes stabilized multiplier method with parameter `alpha` and
/// the given sign on the stabilization of the test function.
pub fn solve_barbosa_hughes<T: Real>(
    problem: &ProblemSpec<T>,
    mesh: Arc<Mesh<T>>,
    k: usize,
    kprime: usize,
    continuity: Continuity,
    alpha: T,
    sign: Sign,
) -> Result<DiscreteSolution<T>> {
    if alpha <= T::zero() {
        return Err(Error::InvalidArgument("alpha must be positive".into()));
    }
    solve_multiplier(problem, mesh, k, kprime, continuity, Some((alpha, sign)))
        .map_err(|e| e.with_context("Barbosa-Hughes"))
}

fn solve_multiplier<T: Real>(
    problem: &ProblemSpec<T>,
    mesh: Arc<Mesh<T>>,
    k: usize,
    kprime: usize,
    continuity: Continuity,
    stab: Option<(T, Sign)>,
) -> Result<DiscreteSolution<T>> {
    check_domain(problem, &mesh)?;
    let space = FeSpace::new(mesh.clone(), k);
    let mspace = BoundarySpace::new(mesh.clone(), kprime, continuity)?;
    let (nu, nl) = (space.n_dofs(), mspace.n_dofs());
    let (stiff, load) = bulk(problem, &space)?;
    let mut t = TripletBuilder::new(nu + nl, nu + nl);
    t.add_matrix(&stiff, 0, 0, T::one());
    let mut rhs = load;
    rhs.resize(nu + nl, T::zero());
    let degree = default_degree(k.max(kprime));
    for (b, bf) in mesh.boundary_facets().iter().enumerate() {
        let dofs = space.element_dofs(bf.element);
        let mdofs: Vec<usize> = mspace.facet_dofs(b).iter().map(|d| nu + d).collect();
        let h = bf.length;
        let pts = boundary_points(problem, &space, Some(&mspace), b, degree)?;
        let (nloc, mloc) = (dofs.len(), mdofs.len());
        let mut uu = vec![T::zero(); nloc * nloc];
        let mut ul = vec![T::zero(); nloc * mloc];
        let mut lu = vec![T::zero(); mloc * nloc];
        let mut ll = vec![T::zero(); mloc * mloc];
        let mut rl = vec![T::zero(); mloc];
        for p in &pts {
            let w = p.weight;
            for m in 0..mloc {
                rl[m] -= w * p.g * p.psi[m];
                for i in 0..nloc {
                    // -∫ λ v and -∫ u μ
                    ul[i * mloc + m] -= w * p.psi[m] * p.phi[i];
                    lu[m * nloc + i] -= w * p.psi[m] * p.phi[i];
                }
            }
            if let Some((alpha, sign)) = stab {
                let s = sign.value::<T>();
                let ah = alpha * h * w;
                for i in 0..nloc {
                    for j in 0..nloc {
                        uu[i * nloc + j] += s * ah * p.dn[i] * p.dn[j];
                    }
                    for m in 0..mloc {
                        ul[i * mloc + m] -= s * ah * p.dn[i] * p.psi[m];
                        lu[m * nloc + i] += ah * p.psi[m] * p.dn[i];
                    }
                }
                for m in 0..mloc {
                    for l in 0..mloc {
                        ll[m * mloc + l] -= ah * p.psi[m] * p.psi[l];
                    }
                }
            }
        }
        if stab.is_some() {
            t.add_block(dofs, dofs, &uu);
            t.add_block(&mdofs, &mdofs, &ll);
        }
        t.add_block(dofs, &mdofs, &ul);
        t.add_block(&mdofs, dofs, &lu);
        for (m, &d) in mdofs.iter().enumerate() {
            rhs[d] += rl[m];
        }
    }
    let structure = match stab {
        Some((_, Sign::Plus)) => Structure::General,
        _ => Structure::Symmetric,
    };
    let system = SparseSystem::new(t.build(), rhs, structure);
    debug!(
        "multiplier system: {} bulk + {} multiplier unknowns, nnz {}",
        nu,
        nl,
        system.matrix.nnz()
    );
    let x = solve(&system, None)?;
    let (u, lambda) = x.split_at(nu);
    let method = if stab.is_some() {
        super::Method::BarbosaHughes
    } else {
        super::Method::Lagrange
    };
    Ok(DiscreteSolution::new(
        method,
        space,
        u.to_vec(),
        Multiplier::Coefficients {
            space: mspace,
            coeffs: lambda.to_vec(),
        },
        stab.map(|(_, s)| s).unwrap_or_default(),
        stab.map(|(a, _)| a),
    ))
}

/// Nitsche's method with penalty `gamma`.
pub fn solve_nitsche<T: Real>(
    problem: &ProblemSpec<T>,
    mesh: Arc<Mesh<T>>,
    k: usize,
    gamma: T,
    sign: Sign,
) -> Result<DiscreteSolution<T>> {
    check_domain(problem, &mesh)?;
    let space = FeSpace::new(mesh.clone(), k);
    let (stiff, mut rhs) = bulk(problem, &space)?;
    let mut t = TripletBuilder::new(space.n_dofs(), space.n_dofs());
    t.add_matrix(&stiff, 0, 0, T::one());
    let s = sign.value::<T>();
    let degree = default_degree(k);
    for (b, bf) in mesh.boundary_facets().iter().enumerate() {
        let dofs = space.element_dofs(bf.element);
        let n = dofs.len();
        let pen = gamma / bf.length;
        let mut kk = vec![T::zero(); n * n];
        let mut rb = vec![T::zero(); n];
        for p in boundary_points(problem, &space, None, b, degree)? {
            let w = p.weight;
            for i in 0..n {
                for j in 0..n {
                    kk[i * n + j] += w
                        * (-p.phi[i] * p.dn[j]
                            + s * p.dn[i] * p.phi[j]
                            + pen * p.phi[i] * p.phi[j]);
                }
                rb[i] += w * p.g * (s * p.dn[i] + pen * p.phi[i]);
            }
        }
        t.add_block(dofs, dofs, &kk);
        for (i, &d) in dofs.iter().enumerate() {
            rhs[d] += rb[i];
        }
    }
    let structure = match sign {
        Sign::Minus => Structure::SymmetricPositiveDefinite,
        Sign::Plus => Structure::General,
    };
    let system = SparseSystem::new(t.build(), rhs, structure);
    let u = solve(&system, None).map_err(|e| e.with_context("Nitsche"))?;
    Ok(DiscreteSolution::new(
        Method::Nitsche,
        space,
        u,
        Multiplier::Nitsche { gamma },
        sign,
        None,
    ))
}

/// `‖∇(u - u_h)‖_{0,Ω}` for a known exact gradient.
pub fn energy_error<T: Real>(
    space: &FeSpace<T>,
    coeffs: &[T],
    grad_exact: impl Fn(Point2<T>) -> Point2<T>,
) -> Result<T> {
    let rule = crate::fem::triangle_rule::<T>(default_degree(space.order()))?;
    let shapes = space.tabulate(&rule);
    let uh = crate::fem::FeFunction::new(space, coeffs);
    let two = T::one() + T::one();
    let mut total = T::zero();
    for e in 0..space.mesh().num_elements() {
        let geo = space.geometry(e);
        for (q, sh) in shapes.iter().enumerate() {
            let [xi, eta] = rule.points[q];
            let x = geo.map(crate::fem::ElementGeometry::reference_lambda(xi, eta));
            let d = grad_exact(x) - uh.eval_with(e, &geo, sh).gradient;
            total += rule.weights[q] * two * geo.area * d.dot(d);
        }
    }
    Ok(total.sqrt())
}
