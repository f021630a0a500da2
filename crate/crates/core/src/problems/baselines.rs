use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{DdwError, Result};
use crate::fitness::Objective;
use crate::record::{mean_std, ConfigEcho, IterationStats, RunRecord};
use crate::rng::{substream, DdwRng, Stream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "lowercase")]
pub enum BaselineAlgorithm {
    /// Global-best particle swarm.
    Pso {
        inertia: f64,
        cognitive: f64,
        social: f64,
        /// Velocity limit as a fraction of each coordinate's range.
        velocity_limit: f64,
    },
    /// Grey wolf optimizer; `a` decays linearly from this value to 0.
    Gwo { a: f64 },
}

impl BaselineAlgorithm {
    pub fn pso() -> Self {
        BaselineAlgorithm::Pso {
            inertia: 0.8,
            cognitive: 1.49445,
            social: 1.49445,
            velocity_limit: 0.2,
        }
    }

    pub fn gwo() -> Self {
        BaselineAlgorithm::Gwo { a: 2.0 }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BaselineAlgorithm::Pso { .. } => "pso",
            BaselineAlgorithm::Gwo { .. } => "gwo",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineConfig {
    #[serde(flatten)]
    pub algorithm: BaselineAlgorithm,
    pub population_size: usize,
    pub max_iterations: usize,
    pub seed: u64,
    /// Worker threads; `None` uses the global rayon pool.
    #[serde(skip)]
    pub workers: Option<usize>,
}

impl BaselineConfig {
    pub fn new(algorithm: BaselineAlgorithm, seed: u64) -> Self {
        BaselineConfig {
            algorithm,
            population_size: 50,
            max_iterations: 500,
            seed,
            workers: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.population_size < 3 {
            return Err(DdwError::Config("baseline population must be at least 3".into()));
        }
        if self.max_iterations < 1 {
            return Err(DdwError::Config("max_iterations must be at least 1".into()));
        }
        if self.workers == Some(0) {
            return Err(DdwError::Config("workers must be at least 1".into()));
        }
        Ok(())
    }
}

fn evaluate_all(objective: &dyn Objective, xs: &[Vec<f64>]) -> Vec<f64> {
    xs.par_iter().map(|x| objective.evaluate(x)).collect()
}

fn argmin(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.total_cmp(&v[best]).is_lt() {
            best = i;
        }
    }
    best
}

fn iteration_stats(iteration: usize, best: f64, fitness: &[f64], lens: (usize, usize)) -> IterationStats {
    let (mean, std) = mean_std(fitness);
    IterationStats {
        iteration,
        best_fitness: best,
        mean_fitness: mean,
        std_fitness: std,
        population_size: fitness.len(),
        min_len: lens.0,
        max_len: lens.1,
        odc: None,
    }
}

/// Runs PSO or GWO. `initial` overrides the uniform-in-bounds start.
pub fn run_baseline(
    config: &BaselineConfig,
    objective: &dyn Objective,
    initial: Option<Vec<Vec<f64>>>,
) -> Result<RunRecord> {
    config.validate()?;
    match config.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| DdwError::Config(format!("cannot build worker pool: {e}")))?
            .install(|| run_inner(config, objective, initial)),
        None => run_inner(config, objective, initial),
    }
}

fn run_inner(
    config: &BaselineConfig,
    objective: &dyn Objective,
    initial: Option<Vec<Vec<f64>>>,
) -> Result<RunRecord> {
    let start = Instant::now();
    let dim = objective.dimension();
    let lower = objective.lower_bounds();
    let upper = objective.upper_bounds();
    let mut rng = substream(config.seed, Stream::Baseline, 0, 0);

    let positions = match initial {
        Some(p) => {
            if p.len() != config.population_size || p.iter().any(|x| x.len() != dim) {
                return Err(DdwError::InvalidInput(
                    "initial positions do not match population size and dimension".into(),
                ));
            }
            p
        }
        None => (0..config.population_size)
            .map(|_| {
                lower
                    .iter()
                    .zip(&upper)
                    .map(|(&lo, &hi)| if hi > lo { rng.gen_range(lo..=hi) } else { lo })
                    .collect()
            })
            .collect(),
    };

    let swarm = Swarm {
        objective,
        lower: &lower,
        upper: &upper,
        iterations: config.max_iterations,
        lens: {
            let l = objective.channel_lengths();
            (
                l.iter().copied().min().unwrap_or(dim),
                l.iter().copied().max().unwrap_or(dim),
            )
        },
    };
    let (best_x, history) = match config.algorithm {
        BaselineAlgorithm::Pso {
            inertia,
            cognitive,
            social,
            velocity_limit,
        } => swarm.pso(positions, inertia, cognitive, social, velocity_limit, &mut rng),
        BaselineAlgorithm::Gwo { a } => swarm.gwo(positions, a, &mut rng),
    };

    let mut final_best = objective.to_individual(&best_x)?;
    if final_best.fitness.is_none() {
        final_best.fitness = Some(crate::fitness::FitnessReport {
            fitness: objective.evaluate(&best_x),
            per_dim_quality: Default::default(),
        });
    }
    Ok(RunRecord {
        algorithm: config.algorithm.name().to_string(),
        problem: objective.name(),
        seed: config.seed,
        config: ConfigEcho::Baseline(config.clone()),
        history,
        final_best,
        odc: None,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

struct Swarm<'a> {
    objective: &'a dyn Objective,
    lower: &'a [f64],
    upper: &'a [f64],
    iterations: usize,
    /// Shortest and longest channel of a decoded position.
    lens: (usize, usize),
}

impl Swarm<'_> {
    fn clamp(&self, x: &mut [f64]) {
        for (i, v) in x.iter_mut().enumerate() {
            *v = v.clamp(self.lower[i], self.upper[i]);
        }
    }

    fn pso(
        &self,
        mut pos: Vec<Vec<f64>>,
        inertia: f64,
        c1: f64,
        c2: f64,
        vlimit: f64,
        rng: &mut DdwRng,
    ) -> (Vec<f64>, Vec<IterationStats>) {
        let dim = self.lower.len();
        let vmax: Vec<f64> = self
            .lower
            .iter()
            .zip(self.upper)
            .map(|(l, h)| vlimit * (h - l))
            .collect();
        let mut vel = vec![vec![0.0; dim]; pos.len()];
        let mut fit = evaluate_all(self.objective, &pos);
        let mut pbest = pos.clone();
        let mut pbest_fit = fit.clone();
        let g = argmin(&fit);
        let mut gbest = pos[g].clone();
        let mut gbest_fit = fit[g];
        let mut history = Vec::with_capacity(self.iterations);

        for t in 0..self.iterations {
            for i in 0..pos.len() {
                for d in 0..dim {
                    let r1: f64 = rng.gen();
                    let r2: f64 = rng.gen();
                    let v = inertia * vel[i][d]
                        + c1 * r1 * (pbest[i][d] - pos[i][d])
                        + c2 * r2 * (gbest[d] - pos[i][d]);
                    vel[i][d] = v.clamp(-vmax[d], vmax[d]);
                    pos[i][d] += vel[i][d];
                }
                self.clamp(&mut pos[i]);
            }
            fit = evaluate_all(self.objective, &pos);
            for i in 0..pos.len() {
                if fit[i] < pbest_fit[i] {
                    pbest_fit[i] = fit[i];
                    pbest[i].clone_from(&pos[i]);
                }
                if fit[i] < gbest_fit {
                    gbest_fit = fit[i];
                    gbest.clone_from(&pos[i]);
                }
            }
            history.push(iteration_stats(t + 1, gbest_fit, &fit, self.lens));
        }
        (gbest, history)
    }

    fn gwo(
        &self,
        mut pos: Vec<Vec<f64>>,
        a0: f64,
        rng: &mut DdwRng,
    ) -> (Vec<f64>, Vec<IterationStats>) {
        let dim = self.lower.len();
        let mut fit = evaluate_all(self.objective, &pos);
        // Alpha, beta, delta: the three best positions seen so far.
        let mut leaders: Vec<(f64, Vec<f64>)> = Vec::with_capacity(3);
        let absorb = |fit: &[f64], pos: &[Vec<f64>], leaders: &mut Vec<(f64, Vec<f64>)>| {
            for (f, x) in fit.iter().zip(pos) {
                if leaders.len() < 3 || *f < leaders[leaders.len() - 1].0 {
                    let at = leaders.partition_point(|(lf, _)| *lf <= *f);
                    leaders.insert(at, (*f, x.clone()));
                    leaders.truncate(3);
                }
            }
        };
        absorb(&fit, &pos, &mut leaders);
        let mut history = Vec::with_capacity(self.iterations);

        for t in 0..self.iterations {
            let a = a0 - t as f64 * (a0 / self.iterations as f64);
            for x in pos.iter_mut() {
                for d in 0..dim {
                    let mut sum = 0.0;
                    for k in 0..3 {
                        let leader = &leaders[k.min(leaders.len() - 1)].1;
                        let r1: f64 = rng.gen();
                        let r2: f64 = rng.gen();
                        let big_a = 2.0 * a * r1 - a;
                        let big_c = 2.0 * r2;
                        let dist = (big_c * leader[d] - x[d]).abs();
                        sum += leader[d] - big_a * dist;
                    }
                    x[d] = sum / 3.0;
                }
                self.clamp(x);
            }
            fit = evaluate_all(self.objective, &pos);
            absorb(&fit, &pos, &mut leaders);
            history.push(iteration_stats(t + 1, leaders[0].0, &fit, self.lens));
        }
        (leaders.swap_remove(0).1, history)
    }
}
