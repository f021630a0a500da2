use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpiralKind {
    /// `r sin(theta)`, `r cos(theta)`
    Archimedean,
    /// `r sinh(theta)`, `r cosh(theta)`
    Hyperbolic,
}

/// Per-position route multipliers, each sequence scaled to max |c| = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SpiralCoefficients {
    pub xcoef: Vec<f64>,
    pub ycoef: Vec<f64>,
}

pub fn spiral_coefficients<R: Rng + ?Sized>(
    len: usize,
    kind: SpiralKind,
    rng: &mut R,
) -> SpiralCoefficients {
    let mut xr = Vec::with_capacity(len);
    let mut yr = Vec::with_capacity(len);
    for _ in 0..len {
        let theta = 10.0 * std::f64::consts::PI * rng.gen::<f64>();
        let r = theta + 1.5 * rng.gen::<f64>();
        let (x, y) = match kind {
            SpiralKind::Archimedean => (r * theta.sin(), r * theta.cos()),
            SpiralKind::Hyperbolic => (r * theta.sinh(), r * theta.cosh()),
        };
        xr.push(x);
        yr.push(y);
    }
    SpiralCoefficients {
        xcoef: normalize(xr),
        ycoef: normalize(yr),
    }
}

fn normalize(mut v: Vec<f64>) -> Vec<f64> {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max > 0.0 {
        for x in &mut v {
            *x /= max;
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::DdwRng;
    use rand::SeedableRng;

    fn max_abs(v: &[f64]) -> f64 {
        v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    #[test]
    fn singleton_is_unit() {
        let mut rng = DdwRng::seed_from_u64(1);
        for kind in [SpiralKind::Archimedean, SpiralKind::Hyperbolic] {
            for _ in 0..50 {
                let c = spiral_coefficients(1, kind, &mut rng);
                assert_eq!(c.xcoef[0].abs(), 1.0);
                assert_eq!(c.ycoef[0].abs(), 1.0);
            }
        }
    }

    #[test]
    fn normalized_to_unit_max() {
        let mut rng = DdwRng::seed_from_u64(2);
        for len in [2, 7, 60] {
            for kind in [SpiralKind::Archimedean, SpiralKind::Hyperbolic] {
                let c = spiral_coefficients(len, kind, &mut rng);
                assert_eq!(c.xcoef.len(), len);
                assert_eq!(max_abs(&c.xcoef), 1.0);
                assert_eq!(max_abs(&c.ycoef), 1.0);
                assert!(c.xcoef.iter().chain(&c.ycoef).all(|x| x.abs() <= 1.0));
            }
        }
    }

    #[test]
    fn hyperbolic_y_is_positive() {
        let mut rng = DdwRng::seed_from_u64(3);
        for _ in 0..200 {
            let c = spiral_coefficients(30, SpiralKind::Hyperbolic, &mut rng);
            assert!(c.ycoef.iter().all(|&y| y > 0.0 && y <= 1.0));
        }
    }
}
