use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fem::segment_rule;
use crate::scalar::{count, lit, to_f64, Real};

use super::boundary_fn::{for_each_overlap, BoundaryFunction};

/// Analysis low-pass taps as rationals; the filter is `(√2/2)` times these.
const LOW_PASS: [(i64, i64); 10] = [
    (3, 128),
    (-3, 128),
    (-11, 64),
    (11, 64),
    (1, 1),
    (1, 1),
    (11, 64),
    (-11, 64),
    (-3, 128),
    (3, 128),
];

/// Largest admissible level.
pub const MAX_LEVEL: usize = 40;

pub const DEFAULT_LEVEL: usize = 20;

/// The low-pass filter `h`.
pub fn low_pass<T: Real>() -> [T; 10] {
    let s = T::FRAC_1_SQRT_2();
    LOW_PASS.map(|(p, q)| s * lit::<T>(p as f64) / lit::<T>(q as f64))
}

/// Scaled cell integrals `v_{M,k} = 2^{M/2}/|Γ| ∫ v` over the `2^M` uniform
/// arc-length cells. Cells are split at piece boundaries and integrated
/// with a Gauss rule of the given degree.
pub fn sample_to_dyadic<T: Real>(
    v: &dyn BoundaryFunction<T>,
    level: usize,
    degree: usize,
) -> Result<Vec<T>> {
    if !(3..=MAX_LEVEL).contains(&level) {
        return Err(Error::WaveletLevel(level));
    }
    let rule = segment_rule::<T>(degree)?;
    let pieces = v.pieces();
    let perimeter = v.perimeter();
    let n = 1usize << level;
    let cell = perimeter / count::<T>(n);
    let scale = lit::<T>(2f64.powf(level as f64 / 2.0)) / perimeter;
    Ok((0..n)
        .into_par_iter()
        .map(|k| {
            let a = cell * count::<T>(k);
            let b = if k + 1 == n {
                perimeter
            } else {
                cell * count::<T>(k + 1)
            };
            let mut s = T::zero();
            for_each_overlap(&pieces, a, b, |i, lo, hi| {
                let len = hi - lo;
                for (&t, &w) in rule.points.iter().zip(&rule.weights) {
                    s += w * len * v.eval(i, lo + len * t);
                }
            });
            s * scale
        })
        .collect())
}

/// One analysis step: `(v_j, d_j)` from `v_{j+1}` with periodic extension.
///
/// `v_{j,k} = Σ_l h(l) v_{j+1,2k+l}` with the taps of [`low_pass`] (which
/// already carry the `√2/2` factor), `d_{j,k} = (√2/2)(v_{j+1,2k} - v_{j+1,2k+1})`.
pub fn dwt_step<T: Real>(v: &[T]) -> Result<(Vec<T>, Vec<T>)> {
    let n = v.len();
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "wavelet step needs a power-of-two length of at least 2, got {n}"
        )));
    }
    let h = low_pass::<T>();
    let s = T::FRAC_1_SQRT_2();
    let half = n / 2;
    let coarse = (0..half)
        .map(|k| {
            h.iter()
                .enumerate()
                .fold(T::zero(), |acc, (l, &hl)| acc + hl * v[(2 * k + l) % n])
        })
        .collect();
    let detail = (0..half).map(|k| s * (v[2 * k] - v[2 * k + 1])).collect();
    Ok((coarse, detail))
}

/// Averages `v_j` for `j = 0..=M` and details `d_j` for `j = 0..M`.
#[derive(Clone, Debug)]
pub struct WaveletPyramid<T> {
    pub averages: Vec<Vec<T>>,
    pub details: Vec<Vec<T>>,
}

impl<T: Real> WaveletPyramid<T> {
    pub fn from_finest(v: Vec<T>) -> Result<Self> {
        let n = v.len();
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "finest level length {n} is not a power of two"
            )));
        }
        let levels = n.trailing_zeros() as usize;
        let mut averages = vec![Vec::new(); levels + 1];
        let mut details = vec![Vec::new(); levels];
        averages[levels] = v;
        for j in (0..levels).rev() {
            let (c, d) = dwt_step(&averages[j + 1])?;
            averages[j] = c;
            details[j] = d;
        }
        Ok(Self { averages, details })
    }

    pub fn level(&self) -> usize {
        self.details.len()
    }

    /// `(‖v₀‖² + Σ_j 2^{-j} ‖d_j‖²)^{1/2}`.
    pub fn norm(&self) -> T {
        let sq = |v: &[T]| v.iter().fold(T::zero(), |s, &x| s + x * x);
        let mut total = sq(&self.averages[0]);
        let mut w = T::one();
        let half = lit::<T>(0.5);
        for d in &self.details {
            total += w * sq(d);
            w *= half;
        }
        total.sqrt()
    }

    /// CSV rows `level,index,v,d`; `d` is empty on the finest level.
    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "level,index,v,d")?;
        for (j, v) in self.averages.iter().enumerate() {
            for (k, &x) in v.iter().enumerate() {
                match self.details.get(j) {
                    Some(d) => writeln!(w, "{j},{k},{:e},{:e}", to_f64(x), to_f64(d[k]))?,
                    None => writeln!(w, "{j},{k},{:e},", to_f64(x))?,
                }
            }
        }
        Ok(())
    }
}

pub fn wavelet_pyramid<T: Real>(
    v: &dyn BoundaryFunction<T>,
    level: usize,
    degree: usize,
) -> Result<WaveletPyramid<T>> {
    WaveletPyramid::from_finest(sample_to_dyadic(v, level, degree)?)
}

/// The wavelet approximation `E₂` of `‖v‖_{-1/2,Γ}`.
pub fn wavelet_norm<T: Real>(
    v: &dyn BoundaryFunction<T>,
    level: usize,
    degree: usize,
) -> Result<T> {
    Ok(wavelet_pyramid(v, level, degree)?.norm())
}
