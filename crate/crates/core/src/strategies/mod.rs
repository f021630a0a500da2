//! Newborn generation for the three population parts.
//!
//! * Part A: Lévy exploration around the best individual, followed by a
//!   change of dimension count.
//! * Part B: Archimedean-spiral routes from the individual itself towards a
//!   better individual and the optimal dimension solution.
//! * Part C: hyperbolic-spiral routes from the best individual and the optimal
//!   dimension solution towards the individual.
//!
//! Foreign series are mapped onto the frame of the newborn's base; when a
//! frame position maps to several foreign positions the closest value wins.

mod levy;
mod spiral;

use std::collections::BTreeMap;

use rand::Rng;

pub use levy::{levy_step, LevyParams};
pub use spiral::{spiral_coefficients, SpiralCoefficients, SpiralKind};

use crate::dataset::{ChannelBounds, DimRange, SearchBounds};
use crate::error::{DdwError, Result};
use crate::individual::{resize_series, Individual, ResizeMode};
use crate::series::{closest_in, map_slices, Series};

fn bounds_for<'a>(bounds: &'a SearchBounds, name: &str) -> Result<&'a ChannelBounds> {
    bounds
        .get(name)
        .ok_or_else(|| DdwError::InvalidInput(format!("no bounds for channel '{name}'")))
}

fn partner<'a>(x: &'a Individual, name: &str, role: &str) -> Result<&'a Series> {
    x.channel(name)
        .ok_or_else(|| DdwError::InvalidInput(format!("{role} lacks channel '{name}'")))
}

/// Values of `other` matched onto each position of `frame`.
fn matched_values(frame: &[f64], other: &[f64]) -> Vec<f64> {
    let dirs = map_slices(frame, other).dirs;
    frame
        .iter()
        .zip(&dirs)
        .map(|(&v, dir)| other[closest_in(dir, other, v)])
        .collect()
}

fn clamp_series(values: Vec<f64>, bounds: &ChannelBounds) -> Series {
    let v = values
        .into_iter()
        .enumerate()
        .map(|(i, x)| bounds.clamp(i, x))
        .collect();
    Series::from_vec_unchecked(v)
}

/// Part A newborn: a damped Lévy jump from `x_best` in every position, then
/// a resize to a freshly drawn length, trimming or padding around the worst
/// positions of `x_best`.
pub fn strategy_a<R: Rng + ?Sized>(
    x_best: &Individual,
    gen: usize,
    max_gen: usize,
    levy: &LevyParams,
    bounds: &SearchBounds,
    range: DimRange,
    rng: &mut R,
) -> Result<Individual> {
    let mut channels = BTreeMap::new();
    for (name, s) in &x_best.channels {
        let b = bounds_for(bounds, name)?;
        let mut values = Vec::with_capacity(s.len());
        for (j, &v) in s.iter().enumerate() {
            let step = levy_step(levy, gen, max_gen, rng)?;
            values.push(v + b.span(j) * step);
        }
        let moved = clamp_series(values, b);
        let target = rng.gen_range(range.min..=range.max);
        let resized = if target == moved.len() {
            moved
        } else {
            let mode = match x_best.quality(name) {
                Some(q) if q.len() == moved.len() => ResizeMode::Worst(q),
                _ => ResizeMode::Random,
            };
            resize_series(&moved, target, range, mode, rng)?
        };
        channels.insert(name.clone(), resized);
    }
    Ok(Individual::new(channels))
}

/// Displacements of a Part B individual in its own frame:
/// towards the better individual, towards the optimal dimension solution,
/// and their sum.
pub fn b_routes(
    x_b: &[f64],
    better: &[f64],
    d_best: &[f64],
    coeffs: &SpiralCoefficients,
) -> [Vec<f64>; 3] {
    let better_m = matched_values(x_b, better);
    let dbest_m = matched_values(x_b, d_best);
    let mut r1 = Vec::with_capacity(x_b.len());
    let mut r2 = Vec::with_capacity(x_b.len());
    for j in 0..x_b.len() {
        r1.push(coeffs.xcoef[j] * (better_m[j] - x_b[j]));
        r2.push(coeffs.ycoef[j] * (dbest_m[j] - x_b[j]));
    }
    let r3 = r1.iter().zip(&r2).map(|(a, b)| a + b).collect();
    [r1, r2, r3]
}

/// Part B: three newborns `x_b + route_k`. `x_better` must be strictly
/// better than `x_b`.
pub fn strategy_b<R: Rng + ?Sized>(
    x_b: &Individual,
    x_better: &Individual,
    d_best: &Individual,
    bounds: &SearchBounds,
    rng: &mut R,
) -> Result<[Individual; 3]> {
    let fb = x_b.require_fitness()?;
    let fbetter = x_better.require_fitness()?;
    d_best.require_fitness()?;
    if fbetter >= fb {
        return Err(DdwError::Precondition(format!(
            "x_better fitness {fbetter} is not below x_b fitness {fb}"
        )));
    }
    strategy_b_unchecked(x_b, x_better, d_best, bounds, rng)
}

/// Part B without the ordering check, for the engine's fallback partner.
pub(crate) fn strategy_b_unchecked<R: Rng + ?Sized>(
    x_b: &Individual,
    x_better: &Individual,
    d_best: &Individual,
    bounds: &SearchBounds,
    rng: &mut R,
) -> Result<[Individual; 3]> {
    let mut out: [BTreeMap<String, Series>; 3] = Default::default();
    for (name, s) in &x_b.channels {
        let b = bounds_for(bounds, name)?;
        let better = partner(x_better, name, "x_better")?;
        let dbest = partner(d_best, name, "d_best")?;
        let better_m = matched_values(s, better);
        let dbest_m = matched_values(s, dbest);
        for (k, slot) in out.iter_mut().enumerate() {
            // Each newborn draws its own coefficient pair.
            let coeffs = spiral_coefficients(s.len(), SpiralKind::Archimedean, rng);
            let v = (0..s.len())
                .map(|j| {
                    let r1 = coeffs.xcoef[j] * (better_m[j] - s[j]);
                    let r2 = coeffs.ycoef[j] * (dbest_m[j] - s[j]);
                    s[j] + [r1, r2, r1 + r2][k]
                })
                .collect();
            slot.insert(name.clone(), clamp_series(v, b));
        }
    }
    Ok(out.map(Individual::new))
}

/// Displacements of a Part C individual: from `x_best` towards `x_c`, from
/// `d_best` towards `x_c`, and their sum. Both anchors share one frame.
pub fn c_routes(
    x_best: &[f64],
    d_best: &[f64],
    x_c: &[f64],
    coeffs: &SpiralCoefficients,
) -> [Vec<f64>; 3] {
    let c1 = matched_values(x_best, x_c);
    let c2 = matched_values(d_best, x_c);
    let mut r1 = Vec::with_capacity(x_best.len());
    let mut r2 = Vec::with_capacity(x_best.len());
    for j in 0..x_best.len() {
        r1.push(coeffs.xcoef[j] * (c1[j] - x_best[j]));
        r2.push(coeffs.ycoef[j] * (c2[j] - d_best[j]));
    }
    let r3 = r1.iter().zip(&r2).map(|(a, b)| a + b).collect();
    [r1, r2, r3]
}

/// Part C: newborns `x_best + route1`, `d_best + route2`, `x_best + route3`.
pub fn strategy_c<R: Rng + ?Sized>(
    x_c: &Individual,
    x_best: &Individual,
    d_best: &Individual,
    bounds: &SearchBounds,
    rng: &mut R,
) -> Result<[Individual; 3]> {
    let mut out: [BTreeMap<String, Series>; 3] = Default::default();
    for (name, best) in &x_best.channels {
        let b = bounds_for(bounds, name)?;
        let dbest = partner(d_best, name, "d_best")?;
        let xc = partner(x_c, name, "x_c")?;
        if dbest.len() != best.len() {
            return Err(DdwError::InvalidInput(format!(
                "d_best channel '{name}' has length {}, x_best has {}",
                dbest.len(),
                best.len()
            )));
        }
        let c1 = matched_values(best, xc);
        let c2 = matched_values(dbest, xc);
        for (k, slot) in out.iter_mut().enumerate() {
            let coeffs = spiral_coefficients(best.len(), SpiralKind::Hyperbolic, rng);
            let v = (0..best.len())
                .map(|j| {
                    let r1 = coeffs.xcoef[j] * (c1[j] - best[j]);
                    let r2 = coeffs.ycoef[j] * (c2[j] - dbest[j]);
                    match k {
                        0 => best[j] + r1,
                        1 => dbest[j] + r2,
                        _ => best[j] + r1 + r2,
                    }
                })
                .collect();
            slot.insert(name.clone(), clamp_series(v, b));
        }
    }
    Ok(out.map(Individual::new))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fitness::FitnessReport;
    use crate::rng::DdwRng;
    use rand::SeedableRng;

    fn ind(v: &[f64]) -> Individual {
        Individual::single("x", Series::new(v.to_vec()).unwrap())
    }

    fn scored(v: &[f64], f: f64) -> Individual {
        let mut x = ind(v);
        x.fitness = Some(FitnessReport {
            fitness: f,
            per_dim_quality: [("x".to_string(), vec![0.0; v.len()])].into(),
        });
        x
    }

    fn wide(len: usize) -> SearchBounds {
        [(
            "x".to_string(),
            ChannelBounds {
                global_min: -100.0,
                global_max: 100.0,
                env_min: vec![0.0; len],
                env_max: vec![0.0; len],
                coord: None,
            },
        )]
        .into()
    }

    fn ones(n: usize) -> SpiralCoefficients {
        SpiralCoefficients {
            xcoef: vec![1.0; n],
            ycoef: vec![1.0; n],
        }
    }

    #[test]
    fn b_routes_direct_substitution() {
        let [r1, r2, r3] = b_routes(&[0.0], &[2.0], &[4.0], &ones(1));
        assert_eq!((r1[0], r2[0], r3[0]), (2.0, 4.0, 6.0));
    }

    #[test]
    fn c_routes_direct_substitution() {
        let [r1, r2, r3] = c_routes(&[0.0], &[10.0], &[4.0], &ones(1));
        assert_eq!((r1[0], r2[0], r3[0]), (4.0, -6.0, -2.0));
        let best = 0.0 + r1[0];
        let dbest = 10.0 + r2[0];
        let third = 0.0 + r3[0];
        assert_eq!((best, dbest, third), (4.0, 4.0, -2.0));
    }

    #[test]
    fn b_routes_use_closest_matched_value() {
        // x_b = (0, 5) against better = (1, 4, 6): DTW maps position 1 onto {1, 2}.
        let [r1, _, _] = b_routes(&[0.0, 5.0], &[1.0, 4.0, 6.0], &[0.0, 5.0], &ones(2));
        // Position 1 has candidates 4 and 6, both at distance 1; the first wins.
        assert_eq!(r1, vec![1.0, -1.0]);
    }

    #[test]
    fn fixed_points() {
        let mut rng = DdwRng::seed_from_u64(4);
        let x = scored(&[1.0, 2.0, 3.0], 1.0);
        let out = strategy_b_unchecked(&x, &x, &x, &wide(3), &mut rng).unwrap();
        for n in &out {
            assert_eq!(n.channels, x.channels);
        }
        let out = strategy_c(&x, &x, &x, &wide(3), &mut rng).unwrap();
        for n in &out {
            assert_eq!(n.channels, x.channels);
        }
    }

    #[test]
    fn strategy_b_requires_strictly_better_partner() {
        let mut rng = DdwRng::seed_from_u64(5);
        let x = scored(&[1.0], 1.0);
        let same = scored(&[2.0], 1.0);
        assert!(matches!(
            strategy_b(&x, &same, &same, &wide(1), &mut rng),
            Err(DdwError::Precondition(_))
        ));
        let better = scored(&[2.0], 0.5);
        assert!(strategy_b(&x, &better, &better, &wide(1), &mut rng).is_ok());
    }

    #[test]
    fn frame_lengths_are_preserved() {
        let mut rng = DdwRng::seed_from_u64(6);
        let x_b = scored(&[1.0, 2.0, 3.0, 4.0], 3.0);
        let better = scored(&[0.0, 1.0, 2.0], 1.0);
        let dbest = scored(&[0.5, 1.5, 2.5, 3.5, 4.5], 0.5);
        for n in strategy_b(&x_b, &better, &dbest, &wide(5), &mut rng).unwrap() {
            assert_eq!(n.channel("x").unwrap().len(), 4);
        }
        let x_best = scored(&[1.0, 1.0], 0.1);
        let d = scored(&[2.0, 2.0], 0.2);
        for n in strategy_c(&x_b, &x_best, &d, &wide(5), &mut rng).unwrap() {
            assert_eq!(n.channel("x").unwrap().len(), 2);
        }
    }

    #[test]
    fn strategy_a_last_generation_without_resize_is_identity() {
        let mut rng = DdwRng::seed_from_u64(7);
        let x = scored(&[1.0, -2.0, 3.0], 0.0);
        let range = DimRange::new(3, 3).unwrap();
        let out = strategy_a(&x, 10, 10, &LevyParams::default(), &wide(3), range, &mut rng).unwrap();
        assert_eq!(out.channels, x.channels);
    }

    #[test]
    fn strategy_a_collapsed_bounds() {
        let mut rng = DdwRng::seed_from_u64(8);
        let x = scored(&[1.0, 1.0, 1.0], 0.0);
        let mut b = wide(3);
        b.get_mut("x").unwrap().global_min = 1.0;
        b.get_mut("x").unwrap().global_max = 1.0;
        let range = DimRange::new(2, 5).unwrap();
        for _ in 0..20 {
            let out = strategy_a(&x, 0, 10, &LevyParams::default(), &b, range, &mut rng).unwrap();
            let s = out.channel("x").unwrap();
            assert!(range.contains(s.len()));
            assert!(s.iter().all(|&v| v == 1.0));
        }
        let fixed = DimRange::new(4, 4).unwrap();
        let out = strategy_a(&x, 0, 10, &LevyParams::default(), &b, fixed, &mut rng).unwrap();
        assert_eq!(out.channel("x").unwrap().len(), 4);
    }

    #[test]
    fn newborns_respect_bounds() {
        let mut rng = DdwRng::seed_from_u64(9);
        let mut b = wide(3);
        b.get_mut("x").unwrap().global_min = -1.0;
        b.get_mut("x").unwrap().global_max = 1.0;
        let x_b = scored(&[0.9, -0.9, 0.0], 2.0);
        let better = scored(&[-1.0, 1.0, 1.0], 1.0);
        let dbest = scored(&[1.0, -1.0, -1.0], 0.5);
        for _ in 0..50 {
            for n in strategy_b(&x_b, &better, &dbest, &b, &mut rng)
                .unwrap()
                .iter()
                .chain(strategy_c(&x_b, &better, &dbest, &b, &mut rng).unwrap().iter())
            {
                assert!(n.channel("x").unwrap().iter().all(|v| v.abs() <= 1.0));
            }
        }
    }
}
