use log::info;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Maximum strategy: every `T` with `η_T ≥ θ max η`. All-zero indicators
/// mark everything.
pub fn mark<T: Real>(eta: &[T], theta: T) -> Result<Vec<usize>> {
    select(eta, theta, false)
}

/// Same as [`mark`] with a strict inequality; the argmax is always kept.
pub fn mark_strict<T: Real>(eta: &[T], theta: T) -> Result<Vec<usize>> {
    select(eta, theta, true)
}

fn select<T: Real>(eta: &[T], theta: T, strict: bool) -> Result<Vec<usize>> {
    if eta.is_empty() {
        return Err(Error::InvalidArgument("no indicators to mark".into()));
    }
    if !(theta > T::zero() && theta <= T::one()) {
        return Err(Error::InvalidArgument(format!(
            "marking fraction {theta} not in (0, 1]"
        )));
    }
    if let Some(bad) = eta.iter().position(|x| !x.is_finite() || *x < T::zero()) {
        return Err(Error::InvalidArgument(format!(
            "indicator {bad} is {}",
            eta[bad]
        )));
    }
    let (arg, max) =
        eta.iter().copied().enumerate().fold(
            (0, T::zero()),
            |(ia, a), (i, x)| if x > a { (i, x) } else { (ia, a) },
        );
    if max == T::zero() {
        info!("all indicators vanish; marking all {} elements", eta.len());
        return Ok((0..eta.len()).collect());
    }
    let bound = theta * max;
    Ok(eta
        .iter()
        .enumerate()
        .filter(|&(i, &x)| i == arg || if strict { x > bound } else { x >= bound })
        .map(|(i, _)| i)
        .collect())
}
