use serde::{Deserialize, Serialize};

use crate::scalar::{lit, Real};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightConfig {
    pub c1: f64,
    pub c2: f64,
    pub k: usize,
}

impl Default for WeightConfig {
    fn default() -> Self {
        Self {
            c1: 1.0,
            c2: 1.0,
            k: 1,
        }
    }
}

/// `ς_T = min{C₁, C₂ (h_T/ρ_T)^k}`, and `C₁` when `ρ_T = 0`.
pub fn weight_element<T: Real>(h: T, rho: T, config: &WeightConfig) -> T {
    let c1 = lit::<T>(config.c1);
    if rho <= T::zero() {
        return c1;
    }
    let ratio = (h / rho).powi(config.k as i32);
    c1.min(lit::<T>(config.c2) * ratio)
}

/// `ς_F = min{ς_T, ς_T′}`.
pub fn weight_facet<T: Real>(a: T, b: T) -> T {
    a.min(b)
}
