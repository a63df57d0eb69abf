//! Sparse direct solves backed by faer, with an optional single linear
//! constraint `cᵀx = 0`.

use faer::prelude::*;
use faer::sparse::{SparseColMat, Triplet};
use log::debug;

use crate::error::{Error, Result};
use crate::scalar::{count, Real};

use super::sparse::{CsrMatrix, SparseSystem, Structure};

fn solver_error<T: Real>(m: &CsrMatrix<T>, reason: impl Into<String>) -> Error {
    Error::Solver {
        context: String::new(),
        reason: reason.into(),
        n: m.n_rows(),
        nnz: m.nnz(),
    }
}

fn to_faer<T: Real>(
    m: &CsrMatrix<T>,
    keep: impl Fn(usize, usize) -> bool,
) -> Result<SparseColMat<usize, T>> {
    let triplets: Vec<_> = m
        .iter()
        .filter(|&(r, c, _)| keep(r, c))
        .map(|(r, c, v)| Triplet::new(r, c, v))
        .collect();
    SparseColMat::try_new_from_triplets(m.n_rows(), m.n_cols(), &triplets)
        .map_err(|e| solver_error(m, format!("matrix construction: {e:?}")))
}

/// A factorized matrix.
enum Factor<T: Real> {
    Lu(faer::sparse::linalg::solvers::Lu<usize, T>),
    Llt(faer::sparse::linalg::solvers::Llt<usize, T>),
}

impl<T: Real> Factor<T> {
    fn new(m: &CsrMatrix<T>, structure: Structure) -> Result<Self> {
        match structure {
            Structure::SymmetricPositiveDefinite => {
                let a = to_faer(m, |r, c| r >= c)?;
                let llt = a.sp_cholesky(faer::Side::Lower).map_err(|e| {
                    solver_error(m, format!("Cholesky factorization failed: {e:?}"))
                })?;
                Ok(Factor::Llt(llt))
            }
            _ => {
                let a = to_faer(m, |_, _| true)?;
                let lu = a
                    .sp_lu()
                    .map_err(|e| solver_error(m, format!("LU factorization failed: {e:?}")))?;
                Ok(Factor::Lu(lu))
            }
        }
    }

    fn solve(&self, b: &[T]) -> Vec<T> {
        let mut rhs = faer::Col::<T>::zeros(b.len());
        for (i, &v) in b.iter().enumerate() {
            rhs[i] = v;
        }
        let x = match self {
            Factor::Lu(f) => f.solve(&rhs),
            Factor::Llt(f) => f.solve(&rhs),
        };
        (0..b.len()).map(|i| x[i]).collect()
    }
}

fn norm2<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |s, &x| s + x * x).sqrt()
}

fn residual<T: Real>(m: &CsrMatrix<T>, x: &[T], b: &[T]) -> Vec<T> {
    m.mul_vec(x)
        .iter()
        .zip(b)
        .map(|(&ax, &bi)| bi - ax)
        .collect()
}

/// Factorizes and solves, then checks `‖b - Ax‖ ≤ tol (‖b‖ + ‖A‖‖x‖)`,
/// allowing one step of iterative refinement.
fn checked_solve<T: Real>(m: &CsrMatrix<T>, b: &[T], structure: Structure) -> Result<Vec<T>> {
    let factor = Factor::new(m, structure)?;
    let mut x = factor.solve(b);
    let tol = T::solver_tolerance();
    let a_norm = m.norm_inf();
    let mut refined = false;
    loop {
        if x.iter().any(|v| !v.is_finite()) {
            return Err(solver_error(m, "non-finite solution"));
        }
        let r = residual(m, &x, b);
        let rn = norm2(&r);
        let bound = tol * (norm2(b) + a_norm * norm2(&x));
        if rn <= bound {
            return Ok(x);
        }
        if refined {
            return Err(solver_error(
                m,
                format!("residual {rn:e} exceeds {bound:e} after refinement"),
            ));
        }
        debug!("residual {rn:e} above {bound:e}; refining");
        let dx = factor.solve(&r);
        for (xi, d) in x.iter_mut().zip(dx) {
            *xi += d;
        }
        refined = true;
    }
}

/// Solves `A x = b`, or, with a constraint vector `c`, the bordered system
/// `A x + c μ = b`, `cᵀx = 0` (returning only `x`).
///
/// For a symmetric `A` whose kernel is the constants the constrained problem
/// is solved by deflation: `μ` is fixed from the compatibility condition,
/// the first unknown is pinned, and the constant shift restoring `cᵀx = 0`
/// is added afterwards. Otherwise the bordered matrix is factorized by LU.
pub fn solve<T: Real>(system: &SparseSystem<T>, constraint: Option<&[T]>) -> Result<Vec<T>> {
    let a = &system.matrix;
    let b = &system.rhs;
    let Some(c) = constraint else {
        return checked_solve(a, b, system.structure);
    };
    assert_eq!(c.len(), b.len());
    let n = b.len();
    let tol = T::solver_tolerance();
    let ones = vec![T::one(); n];
    let a_one = a.mul_vec(&ones);
    let kernel_is_constant = norm2(&a_one) <= tol * a.norm_inf() * count::<T>(n).sqrt();
    let csum: T = c.iter().copied().sum();
    let symmetric = system.structure != Structure::General;

    let x = if symmetric && kernel_is_constant && csum.abs() > T::zero() && n > 1 {
        let mu = b.iter().copied().sum::<T>() / csum;
        let reduced_rhs: Vec<T> = (1..n).map(|i| b[i] - c[i] * mu).collect();
        let reduced = CsrMatrix::from_triplets(
            n - 1,
            n - 1,
            a.iter()
                .filter(|&(r, cc, _)| r > 0 && cc > 0)
                .map(|(r, cc, v)| (r - 1, cc - 1, v))
                .collect(),
        );
        let y = checked_solve(&reduced, &reduced_rhs, Structure::SymmetricPositiveDefinite)
            .or_else(|_| checked_solve(&reduced, &reduced_rhs, Structure::General))?;
        let mut x = Vec::with_capacity(n);
        x.push(T::zero());
        x.extend(y);
        let shift = x.iter().zip(c).fold(T::zero(), |s, (&xi, &ci)| s + xi * ci) / csum;
        for xi in &mut x {
            *xi -= shift;
        }
        // the bordered residual must hold for the recovered pair
        let mut full_r = residual(a, &x, b);
        for (ri, &ci) in full_r.iter_mut().zip(c) {
            *ri -= ci * mu;
        }
        let cx = x.iter().zip(c).fold(T::zero(), |s, (&xi, &ci)| s + xi * ci);
        let rn = (norm2(&full_r).powi(2) + cx * cx).sqrt();
        let bound = tol * (norm2(b) + a.norm_inf() * (norm2(&x) + mu.abs()));
        if rn > bound {
            return Err(solver_error(
                a,
                format!("deflated solve residual {rn:e} exceeds {bound:e}"),
            ));
        }
        x
    } else {
        let mut entries: Vec<_> = a.iter().collect();
        for (i, &ci) in c.iter().enumerate() {
            if ci != T::zero() {
                entries.push((i, n, ci));
                entries.push((n, i, ci));
            }
        }
        let bordered = CsrMatrix::from_triplets(n + 1, n + 1, entries);
        let mut rhs = b.clone();
        rhs.push(T::zero());
        let mut x = checked_solve(&bordered, &rhs, Structure::General)?;
        x.truncate(n);
        x
    };
    Ok(x)
}
