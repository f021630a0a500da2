//! Lévy-distributed steps via Mantegna's construction.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{DdwError, Result};

/// Stability index of the Lévy draws. Valid range is `(1, 3]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct LevyParams {
    lambda: f64,
    sigma_u: f64,
}

impl LevyParams {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 1.0 && lambda <= 3.0) {
            return Err(DdwError::Config(format!(
                "Lévy index {lambda} outside (1, 3]"
            )));
        }
        Ok(LevyParams {
            lambda,
            sigma_u: mantegna_sigma(lambda),
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// One undamped draw. Indices of 2 and above fall back to a standard
    /// normal draw, the light-tailed limit of the stable family.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let v: f64 = rng.sample(StandardNormal);
        if self.lambda >= 2.0 {
            return v;
        }
        let u: f64 = rng.sample::<f64, _>(StandardNormal) * self.sigma_u;
        u / v.abs().powf(1.0 / self.lambda)
    }
}

impl Default for LevyParams {
    fn default() -> Self {
        LevyParams::new(1.5).expect("1.5 is a valid index")
    }
}

impl TryFrom<f64> for LevyParams {
    type Error = DdwError;

    fn try_from(lambda: f64) -> Result<Self> {
        LevyParams::new(lambda)
    }
}

impl From<LevyParams> for f64 {
    fn from(p: LevyParams) -> f64 {
        p.lambda
    }
}

fn mantegna_sigma(beta: f64) -> f64 {
    if beta >= 2.0 {
        return 0.0;
    }
    let num = libm::tgamma(1.0 + beta) * (PI * beta / 2.0).sin();
    let den = libm::tgamma((1.0 + beta) / 2.0) * beta * 2f64.powf((beta - 1.0) / 2.0);
    (num / den).powf(1.0 / beta)
}

/// Lévy draw damped by `1 - (gen / max_gen)^2`.
pub fn levy_step<R: Rng + ?Sized>(
    params: &LevyParams,
    gen: usize,
    max_gen: usize,
    rng: &mut R,
) -> Result<f64> {
    if max_gen == 0 || gen > max_gen {
        return Err(DdwError::InvalidInput(format!(
            "generation {gen} outside [0, {max_gen}]"
        )));
    }
    let ratio = gen as f64 / max_gen as f64;
    let damping = 1.0 - ratio * ratio;
    // Always consume the draw so substreams stay aligned across generations.
    let raw = params.sample(rng);
    Ok(raw * damping)
}
