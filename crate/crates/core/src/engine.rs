//! The DDW iteration loop.
//!
//! Each iteration sorts the population, collects the optimal dimension
//! solution from Part A, generates newborns for Parts A, B and C, and selects
//! the next population. Work inside an iteration fans out over rayon; every
//! random draw comes from a substream keyed by (seed, iteration, index), so
//! the outcome does not depend on the number of worker threads.

use std::cmp::Ordering;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{ChannelBounds, DimRange, ReferenceDataset, SearchBounds};
use crate::error::{DdwError, Result};
use crate::fitness::{
    blackbox_fitness, template_fitness, template_fitness_value, FitnessReport, Objective, BLACKBOX_CHANNEL};
use crate::individual::{init_population, Individual};
use crate::odc::{classify, odc_collect, odc_probe_blackbox};
use crate::record::{mean_std, ConfigEcho, IterationStats, OdcCounts, RunRecord};
use crate::rng::{substream, Stream};
use crate::series::Series;
use crate::strategies::{strategy_a, strategy_b_unchecked, strategy_c, LevyParams};

/// What is being optimized.
#[derive(Clone, Copy)]
pub enum Problem<'a> {
    /// Variable-length multichannel template against reference cycles.
    Template(&'a ReferenceDataset),
    /// Fixed-dimension scalar objective.
    Blackbox(&'a dyn Objective),
}

impl Problem<'_> {
    pub fn name(&self) -> String {
        match self {
            Problem::Template(_) => "template".to_string(),
            Problem::Blackbox(o) => o.name(),
        }
    }

    pub fn evaluate(&self, x: &Individual) -> Result<FitnessReport> {
        match self {
            Problem::Template(d) => template_fitness(x, d),
            Problem::Blackbox(o) => blackbox_fitness(x, *o),
        }
    }

    fn bounds(&self) -> Result<SearchBounds> {
        match self {
            Problem::Template(d) => d.bounds(),
            Problem::Blackbox(o) => Ok([(
                BLACKBOX_CHANNEL.to_string(),
                ChannelBounds::from_box(o.lower_bounds(), o.upper_bounds()),
            )]
            .into()),
        }
    }

    fn dim_range(&self) -> Result<DimRange> {
        match self {
            Problem::Template(d) => Ok(d.dim_range()),
            Problem::Blackbox(o) => DimRange::new(o.dimension(), o.dimension()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub population_size: usize,
    pub max_iterations: usize,
    pub a_frac: f64,
    pub b_frac: f64,
    pub c_frac: f64,
    pub levy_lambda: LevyParams,
    pub seed: u64,
    /// Stop as soon as the best fitness is at or below this value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_fitness: Option<f64>,
    /// Worker threads; `None` uses the global rayon pool. Not part of the
    /// record since it cannot change the result.
    #[serde(skip)]
    pub workers: Option<usize>,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            population_size: 50,
            max_iterations: 500,
            a_frac: 0.05,
            b_frac: 0.45,
            c_frac: 0.50,
            levy_lambda: LevyParams::default(),
            seed: 0,
            target_fitness: None,
            workers: None,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 4 {
            return Err(DdwError::Config(format!(
                "population size {} is below the minimum of 4",
                self.population_size
            )));
        }
        if self.max_iterations < 1 {
            return Err(DdwError::Config("max_iterations must be at least 1".into()));
        }
        let fracs = [self.a_frac, self.b_frac, self.c_frac];
        if fracs.iter().any(|f| !(0.0..=1.0).contains(f)) {
            return Err(DdwError::Config(format!("part fractions {fracs:?} outside [0, 1]")));
        }
        if (fracs.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(DdwError::Config(format!("part fractions {fracs:?} do not sum to 1")));
        }
        if self.workers == Some(0) {
            return Err(DdwError::Config("workers must be at least 1".into()));
        }
        Ok(())
    }

    pub fn partition_sizes(&self) -> (usize, usize, usize) {
        partition_sizes(self.population_size, self.a_frac, self.b_frac)
    }
}

/// Part sizes: `|A| = max(1, floor(a M))`, `|B| = floor(b M)`, rest to C.
pub fn partition_sizes(m: usize, a_frac: f64, b_frac: f64) -> (usize, usize, usize) {
    let floor = |x: f64| (x + 1e-9).floor() as usize;
    let a = floor(a_frac * m as f64).max(1).min(m);
    let b = floor(b_frac * m as f64).min(m - a);
    (a, b, m - a - b)
}

/// Splits a population sorted best-first into Parts A, B and C.
pub fn partition<'p>(
    sorted: &'p [Individual],
    config: &EngineConfig,
) -> (&'p [Individual], &'p [Individual], &'p [Individual]) {
    let (a, b, _) = partition_sizes(sorted.len(), config.a_frac, config.b_frac);
    let (part_a, rest) = sorted.split_at(a);
    let (part_b, part_c) = rest.split_at(b);
    (part_a, part_b, part_c)
}

#[derive(Debug, Clone)]
struct Member {
    id: u64,
    fitness: f64,
    ind: Individual,
}

fn by_fitness_then_age(a: &Member, b: &Member) -> Ordering {
    a.fitness.total_cmp(&b.fitness).then(a.id.cmp(&b.id))
}

fn select_members(
    current: Vec<Member>,
    newborns_a: Vec<Member>,
    newborns_bc: Vec<Member>,
    d_best: Member,
    m: usize,
) -> Result<Vec<Member>> {
    let keep = m
        .checked_sub(newborns_a.len())
        .ok_or_else(|| DdwError::Internal("more Part A newborns than population slots".into()))?;
    let mut pool = current;
    pool.extend(newborns_bc);
    pool.push(d_best);
    if pool.len() < keep {
        return Err(DdwError::Internal(format!(
            "selection pool of {} cannot fill {keep} slots",
            pool.len()
        )));
    }
    pool.sort_by(by_fitness_then_age);
    pool.truncate(keep);
    pool.extend(newborns_a);
    Ok(pool)
}

/// Next population: the `M - |A|` lowest-fitness members of
/// `current ∪ {d_best} ∪ newborns_bc` plus every Part A newborn. Ties go to
/// the member that appears first in that order.
pub fn select_next(
    current: Vec<Individual>,
    newborns_a: Vec<Individual>,
    newborns_bc: Vec<Individual>,
    d_best: Individual,
    population_size: usize,
) -> Result<Vec<Individual>> {
    let mut id = 0u64;
    let mut wrap = |ind: Individual| -> Result<Member> {
        let fitness = ind.require_fitness()?;
        id += 1;
        Ok(Member { id, fitness, ind })
    };
    let current = current.into_iter().map(&mut wrap).collect::<Result<Vec<_>>>()?;
    let d_best = wrap(d_best)?;
    let bc = newborns_bc.into_iter().map(&mut wrap).collect::<Result<Vec<_>>>()?;
    let a = newborns_a.into_iter().map(&mut wrap).collect::<Result<Vec<_>>>()?;
    Ok(select_members(current, a, bc, d_best, population_size)?
        .into_iter()
        .map(|m| m.ind)
        .collect())
}

fn blackbox_population(objective: &dyn Objective, m: usize, seed: u64) -> Result<Vec<Individual>> {
    let lower = objective.lower_bounds();
    let upper = objective.upper_bounds();
    if lower.len() != objective.dimension() || upper.len() != objective.dimension() {
        return Err(DdwError::Config("objective bounds do not match its dimension".into()));
    }
    (0..m)
        .into_par_iter()
        .map(|k| {
            let mut rng = substream(seed, Stream::Init, 0, k as u64);
            let x = lower
                .iter()
                .zip(&upper)
                .map(|(&lo, &hi)| if hi > lo { rng.gen_range(lo..=hi) } else { lo })
                .collect();
            Ok(Individual::single(BLACKBOX_CHANNEL, Series::new(x)?))
        })
        .collect()
}

/// Runs DDW on `problem`.
pub fn run(problem: Problem<'_>, config: &EngineConfig) -> Result<RunRecord> {
    config.validate()?;
    match config.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| DdwError::Config(format!("cannot build worker pool: {e}")))?
            .install(|| run_inner(problem, config)),
        None => run_inner(problem, config),
    }
}

struct Context<'a> {
    problem: Problem<'a>,
    config: &'a EngineConfig,
    bounds: SearchBounds,
    range: DimRange,
}

impl Context<'_> {
    /// Scores newborns. Template-mode members get their fitness value only;
    /// the per-position quality is filled in by [`Context::complete`] once a
    /// member actually needs it.
    fn evaluate_all(&self, inds: Vec<Individual>, first_id: u64) -> Result<Vec<Member>> {
        inds.into_par_iter()
            .enumerate()
            .map(|(k, mut ind)| {
                let fitness = match self.problem {
                    Problem::Template(d) => template_fitness_value(&ind, d)?,
                    Problem::Blackbox(o) => {
                        let report = blackbox_fitness(&ind, o)?;
                        let f = report.fitness;
                        ind.fitness = Some(report);
                        f
                    }
                };
                Ok(Member {
                    id: first_id + k as u64,
                    fitness,
                    ind,
                })
            })
            .collect()
    }

    fn complete(&self, members: &mut [Member]) -> Result<()> {
        members
            .par_iter_mut()
            .filter(|m| m.ind.fitness.is_none())
            .try_for_each(|m| {
                let report = self.problem.evaluate(&m.ind)?;
                debug_assert_eq!(report.fitness.to_bits(), m.fitness.to_bits());
                m.ind.fitness = Some(report);
                Ok(())
            })
    }

    fn collect_dimensions(&self, part_a: &[Individual]) -> Result<Individual> {
        match self.problem {
            Problem::Template(d) => odc_collect(part_a, d),
            Problem::Blackbox(o) => odc_probe_blackbox(part_a, o),
        }
    }

    fn newborns(
        &self,
        gen: usize,
        pop: &[Member],
        d_best: &Individual,
    ) -> Result<(Vec<Individual>, Vec<Individual>)> {
        let cfg = self.config;
        let seed = cfg.seed;
        let (na, nb, _) = cfg.partition_sizes();
        let x_best = &pop[0].ind;
        let g = gen as u64;

        let from_a: Vec<Individual> = (0..na)
            .into_par_iter()
            .map(|k| {
                let mut rng = substream(seed, Stream::StrategyA, g, k as u64);
                strategy_a(
                    x_best,
                    gen,
                    cfg.max_iterations,
                    &cfg.levy_lambda,
                    &self.bounds,
                    self.range,
                    &mut rng,
                )
            })
            .collect::<Result<_>>()?;

        let from_bc: Vec<[Individual; 3]> = (na..pop.len())
            .into_par_iter()
            .map(|k| {
                let me = &pop[k];
                if k < na + nb {
                    let mut rng = substream(seed, Stream::StrategyB, g, k as u64);
                    // Members of A ∪ B strictly better than x_b form a prefix.
                    let better = pop[..na + nb]
                        .iter()
                        .take_while(|m| m.fitness < me.fitness)
                        .count();
                    let x_better = if better > 0 {
                        &pop[rng.gen_range(0..better)].ind
                    } else {
                        x_best
                    };
                    strategy_b_unchecked(&me.ind, x_better, d_best, &self.bounds, &mut rng)
                } else {
                    let mut rng = substream(seed, Stream::StrategyC, g, k as u64);
                    strategy_c(&me.ind, x_best, d_best, &self.bounds, &mut rng)
                }
            })
            .collect::<Result<_>>()?;

        Ok((from_a, from_bc.into_iter().flatten().collect()))
    }
}

fn stats(iteration: usize, pop: &[Member]) -> IterationStats {
    let fits: Vec<f64> = pop.iter().map(|m| m.fitness).collect();
    let (mean, std) = mean_std(&fits);
    let best = fits.iter().copied().fold(f64::INFINITY, f64::min);
    let lens = pop.iter().flat_map(|m| m.ind.lengths());
    let (min_len, max_len) = lens.fold((usize::MAX, 0), |(lo, hi), l| (lo.min(l), hi.max(l)));
    IterationStats {
        iteration,
        best_fitness: best,
        mean_fitness: mean,
        std_fitness: std,
        population_size: pop.len(),
        min_len,
        max_len,
        odc: None,
    }
}

fn run_inner(problem: Problem<'_>, config: &EngineConfig) -> Result<RunRecord> {
    let start = Instant::now();
    let ctx = Context {
        problem,
        config,
        bounds: problem.bounds()?,
        range: problem.dim_range()?,
    };
    let m = config.population_size;

    let initial = match problem {
        Problem::Template(d) => init_population(d, m, config.seed)?,
        Problem::Blackbox(o) => blackbox_population(o, m, config.seed)?,
    };
    let mut next_id = 0u64;
    let mut pop = ctx.evaluate_all(initial, next_id)?;
    next_id += m as u64;

    let (na, _, _) = config.partition_sizes();
    let mut history = Vec::with_capacity(config.max_iterations);
    let mut odc_counts = OdcCounts::default();

    for gen in 0..config.max_iterations {
        pop.sort_by(by_fitness_then_age);
        ctx.complete(&mut pop[..na])?;

        let part_a: Vec<Individual> = pop[..na].iter().map(|m| m.ind.clone()).collect();
        let d_best = ctx.collect_dimensions(&part_a)?;
        let d_fitness = d_best.require_fitness()?;
        let part_a_fitness: Vec<f64> = pop[..na].iter().map(|m| m.fitness).collect();
        let class = classify(d_fitness, &part_a_fitness);
        odc_counts.add(class);
        let d_member = Member {
            id: next_id,
            fitness: d_fitness,
            ind: d_best,
        };
        next_id += 1;

        let (from_a, from_bc) = ctx.newborns(gen, &pop, &d_member.ind)?;
        let a_members = ctx.evaluate_all(from_a, next_id)?;
        next_id += a_members.len() as u64;
        let bc_members = ctx.evaluate_all(from_bc, next_id)?;
        next_id += bc_members.len() as u64;

        pop = select_members(pop, a_members, bc_members, d_member, m)?;

        let mut s = stats(gen + 1, &pop);
        s.odc = Some(class);
        let reached = config.target_fitness.is_some_and(|t| s.best_fitness <= t);
        history.push(s);
        if reached {
            break;
        }
    }

    pop.sort_by(by_fitness_then_age);
    ctx.complete(&mut pop[..1])?;
    let final_best = pop.swap_remove(0).ind;
    Ok(RunRecord {
        algorithm: "ddw".to_string(),
        problem: problem.name(),
        seed: config.seed,
        config: ConfigEcho::Ddw(config.clone()),
        history,
        final_best,
        odc: Some(odc_counts),
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fitness::test_objectives::Sphere;

    fn ind(v: f64, f: f64) -> Individual {
        let mut x = Individual::single("x", Series::new(vec![v]).unwrap());
        x.fitness = Some(FitnessReport {
            fitness: f,
            per_dim_quality: Default::default(),
        });
        x
    }

    #[test]
    fn part_sizes() {
        assert_eq!(partition_sizes(100, 0.05, 0.45), (5, 45, 50));
        assert_eq!(partition_sizes(50, 0.05, 0.45), (2, 22, 26));
        assert_eq!(partition_sizes(20, 0.05, 0.45), (1, 9, 10));
        assert_eq!(partition_sizes(4, 0.05, 0.45), (1, 1, 2));
    }

    #[test]
    fn partition_slices() {
        let pop: Vec<Individual> = (0..20).map(|i| ind(i as f64, i as f64)).collect();
        let (a, b, c) = partition(&pop, &EngineConfig::default());
        assert_eq!((a.len(), b.len(), c.len()), (1, 9, 10));
        assert_eq!(a[0].fitness_value(), Some(0.0));
    }

    #[test]
    fn config_validation() {
        let ok = EngineConfig::default();
        assert!(ok.validate().is_ok());
        for bad in [
            EngineConfig { population_size: 3, ..ok.clone() },
            EngineConfig { max_iterations: 0, ..ok.clone() },
            EngineConfig { a_frac: 0.1, ..ok.clone() },
            EngineConfig { workers: Some(0), ..ok.clone() },
        ] {
            assert!(matches!(bad.validate(), Err(DdwError::Config(_))));
        }
    }

    #[test]
    fn selection_keeps_best_current_when_newborns_are_worse() {
        let current: Vec<Individual> = (0..4).map(|i| ind(i as f64, i as f64)).collect();
        let bc: Vec<Individual> = (0..6).map(|i| ind(10.0 + i as f64, 10.0 + i as f64)).collect();
        let a = vec![ind(99.0, 99.0)];
        let d = ind(50.0, 50.0);
        let next = select_next(current, a, bc, d, 4).unwrap();
        let f: Vec<f64> = next.iter().map(|x| x.fitness_value().unwrap()).collect();
        assert_eq!(f, vec![0.0, 1.0, 2.0, 99.0]);
    }

    #[test]
    fn selection_admits_better_d_best() {
        let current: Vec<Individual> = (0..4).map(|i| ind(i as f64, 1.0 + i as f64)).collect();
        let next = select_next(current, vec![ind(9.0, 9.0)], vec![], ind(-1.0, 0.0), 4).unwrap();
        assert_eq!(next[0].fitness_value(), Some(0.0));
        assert_eq!(next.len(), 4);
    }

    #[test]
    fn selection_ties_prefer_earlier() {
        let current = vec![ind(1.0, 1.0), ind(2.0, 5.0)];
        let bc = vec![ind(3.0, 1.0)];
        let next = select_next(current, vec![ind(4.0, 9.0)], bc, ind(5.0, 7.0), 2).unwrap();
        assert_eq!(next[0].channel("x").unwrap()[0], 1.0);
    }

    #[test]
    fn selection_sizes_at_fifty() {
        let current: Vec<Individual> = (0..50).map(|i| ind(i as f64, i as f64)).collect();
        let a = vec![ind(0.0, 100.0), ind(0.0, 101.0)];
        let bc: Vec<Individual> = (0..144).map(|i| ind(0.0, 200.0 + i as f64)).collect();
        let next = select_next(current, a, bc, ind(0.0, 0.5), 50).unwrap();
        assert_eq!(next.len(), 50);
        assert_eq!(next.iter().filter(|x| x.fitness_value().unwrap() >= 100.0).count(), 2);
    }

    #[test]
    fn selection_pool_too_small() {
        let err = select_next(vec![ind(0.0, 0.0)], vec![ind(0.0, 1.0)], vec![], ind(0.0, 0.0), 5);
        assert!(matches!(err, Err(DdwError::Internal(_))));
    }

    #[test]
    fn single_iteration_run() {
        let sphere = Sphere(2);
        let cfg = EngineConfig {
            max_iterations: 1,
            seed: 3,
            ..EngineConfig::default()
        };
        let rec = run(Problem::Blackbox(&sphere), &cfg).unwrap();
        assert_eq!(rec.history.len(), 1);
        assert_eq!(rec.odc.unwrap().total(), 1);
    }

    #[test]
    fn sphere_improves_and_is_reproducible() {
        let sphere = Sphere(2);
        let cfg = EngineConfig {
            max_iterations: 60,
            seed: 17,
            ..EngineConfig::default()
        };
        let rec = run(Problem::Blackbox(&sphere), &cfg).unwrap();
        assert!(rec.best_so_far_is_monotone());
        assert!(rec.history.iter().all(|s| s.population_size == 50));
        assert!(rec.history.iter().all(|s| s.min_len == 2 && s.max_len == 2));
        assert!(rec.final_fitness() < 1e-3, "{}", rec.final_fitness());
        let again = run(Problem::Blackbox(&sphere), &cfg).unwrap();
        assert_eq!(rec.without_wall_time(), again.without_wall_time());
    }

    #[test]
    fn early_stop_on_target() {
        let sphere = Sphere(2);
        let cfg = EngineConfig {
            max_iterations: 500,
            seed: 2,
            target_fitness: Some(1e-2),
            ..EngineConfig::default()
        };
        let rec = run(Problem::Blackbox(&sphere), &cfg).unwrap();
        assert!(rec.history.len() < 500);
        assert!(rec.final_fitness() <= 1e-2);
    }
}
