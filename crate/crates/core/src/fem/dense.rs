use crate::scalar::Real;

/// Solves a small dense system by Gaussian elimination with partial
/// pivoting. `a` is row-major `n × n`. Returns `None` if a pivot vanishes.
pub fn dense_solve<T: Real>(mut a: Vec<T>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    assert_eq!(a.len(), n * n);
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| {
            a[i * n + k]
                .abs()
                .partial_cmp(&a[j * n + k].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[p * n + k] == T::zero() || !a[p * n + k].is_finite() {
            return None;
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            b.swap(k, p);
        }
        for i in k + 1..n {
            let f = a[i * n + k] / a[k * n + k];
            if f == T::zero() {
                continue;
            }
            for j in k..n {
                a[i * n + j] = a[i * n + j] - f * a[k * n + j];
            }
            b[i] = b[i] - f * b[k];
        }
    }
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s -= a[i * n + j] * x[j];
        }
        x[i] = s / a[i * n + i];
    }
    Some(x)
}
