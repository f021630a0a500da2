//! Property tests over the public API.

use std::collections::BTreeMap;

use crate::io::{read_dataset, write_dataset_to};
use crate::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn values(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-50.0f64..50.0, 1..=max_len)
}

fn series(v: &[f64]) -> Series {
    Series::new(v.to_vec()).unwrap()
}

fn dataset(cycles: &[Vec<f64>]) -> ReferenceDataset {
    let cycles = cycles
        .iter()
        .enumerate()
        .map(|(i, v)| Cycle::new(i as i64, [("x".to_string(), series(v))].into()).unwrap())
        .collect();
    ReferenceDataset::new(vec!["x".into()], cycles).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mapping_total_is_symmetric(a in values(12), b in values(12)) {
        let ab = map_series(&series(&a), &series(&b)).total;
        let ba = map_series(&series(&b), &series(&a)).total;
        prop_assert!((ab - ba).abs() <= 1e-9 * ab.max(1.0));
    }

    #[test]
    fn mapping_to_self_is_zero(a in values(20)) {
        let m = map_series(&series(&a), &series(&a));
        prop_assert_eq!(m.total, 0.0);
        prop_assert!(m.per_dim.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn route_is_a_monotone_cover(a in values(15), b in values(15)) {
        prop_assume!(a.len() != b.len());
        let route = dtw_best_route(&series(&a), &series(&b)).unwrap();
        prop_assert_eq!(route[0], (0, 0));
        prop_assert_eq!(*route.last().unwrap(), (a.len() - 1, b.len() - 1));
        for w in route.windows(2) {
            let (di, dj) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            prop_assert!(matches!((di, dj), (1, 0) | (0, 1) | (1, 1)));
        }
        let m = map_series(&series(&a), &series(&b));
        let cost: f64 = route.iter().map(|&(i, j)| (a[i] - b[j]).powi(2)).sum();
        prop_assert!((cost - m.total).abs() <= 1e-9 * cost.max(1.0));
        // Index sets are contiguous, ordered, and cover every position of b.
        let mut next = 0;
        for d in &m.dirs {
            prop_assert!(*d.start() == next || *d.start() + 1 == next);
            next = *d.end() + 1;
        }
        prop_assert_eq!(next, b.len());
    }

    #[test]
    fn mapping_total_bounded_by_per_dim_sum(a in values(10), b in values(10)) {
        // Each row contributes at least its best cell to the route cost.
        let m = map_series(&series(&a), &series(&b));
        let lower: f64 = m.per_dim.iter().sum();
        prop_assert!(lower <= m.total + 1e-9 * m.total.max(1.0));
    }

    #[test]
    fn fitness_ignores_cycle_order_and_duplication(
        cycles in prop::collection::vec(values(8), 1..6),
        pool in prop::collection::vec(-50.0f64..50.0, 8),
        pick in any::<usize>(),
        rot in 0usize..6,
    ) {
        let x = &pool[..cycles[pick % cycles.len()].len()];
        let ind = Individual::single("x", series(x));
        let base = template_fitness(&ind, &dataset(&cycles)).unwrap();
        let mut rotated = cycles.clone();
        rotated.rotate_left(rot % cycles.len());
        let r = template_fitness(&ind, &dataset(&rotated)).unwrap();
        prop_assert!((r.fitness - base.fitness).abs() <= 1e-9 * base.fitness.max(1.0));
        let doubled: Vec<Vec<f64>> = cycles.iter().chain(&cycles).cloned().collect();
        let d = template_fitness(&ind, &dataset(&doubled)).unwrap();
        prop_assert!((d.fitness - base.fitness).abs() <= 1e-9 * base.fitness.max(1.0));
        for (q, p) in d.per_dim_quality["x"].iter().zip(&base.per_dim_quality["x"]) {
            prop_assert!((q - p).abs() <= 1e-9 * p.max(1.0));
        }
    }

    #[test]
    fn fitness_value_matches_full_report(
        cycles in prop::collection::vec(values(9), 1..5),
        pool in prop::collection::vec(-50.0f64..50.0, 9),
        pick in any::<usize>(),
    ) {
        let x = &pool[..cycles[pick % cycles.len()].len()];
        let ind = Individual::single("x", series(x));
        let data = dataset(&cycles);
        let full = template_fitness(&ind, &data).unwrap().fitness;
        prop_assert_eq!(full.to_bits(), template_fitness_value(&ind, &data).unwrap().to_bits());
    }

    #[test]
    fn resize_hits_target_exactly(
        v in values(12),
        target in 1usize..16,
        seed in any::<u64>(),
        worst in any::<bool>(),
    ) {
        let s = series(&v);
        let range = DimRange::new(1, 16).unwrap();
        let quality: Vec<f64> = (0..v.len()).map(|i| (i * 7 % 5) as f64).collect();
        let mode = if worst { ResizeMode::Worst(&quality) } else { ResizeMode::Random };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let out = resize_series(&s, target, range, mode, &mut rng).unwrap();
        prop_assert_eq!(out.len(), target);
        let (lo, hi) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
        prop_assert!(out.iter().all(|&x| x >= lo && x <= hi));
    }

    #[test]
    fn merge_never_prefers_worse_quality(
        a in values(8),
        b in values(8),
        qa in prop::collection::vec(0u8..4, 8),
        qb in prop::collection::vec(0u8..4, 8),
    ) {
        let base = Individual::single("x", series(&a));
        let other = Individual::single("x", series(&b));
        let bq: BTreeMap<String, Vec<f64>> = [("x".into(), qa[..a.len()].iter().map(|&q| q as f64).collect())].into();
        let oq: BTreeMap<String, Vec<f64>> = [("x".into(), qb[..b.len()].iter().map(|&q| q as f64).collect())].into();
        let (merged, trace) = odc_merge_traced(&base, &other, &bq, &oq).unwrap();
        prop_assert_eq!(merged.channel("x").unwrap().len(), a.len());
        prop_assert!(trace.iter().all(|c| c.chosen_quality <= c.rejected_quality));
    }

    #[test]
    fn csv_round_trip(cycles in prop::collection::vec(values(6), 1..5)) {
        let data = dataset(&cycles);
        let mut buf = Vec::new();
        write_dataset_to(&data, &mut buf).unwrap();
        prop_assert_eq!(read_dataset(buf.as_slice()).unwrap(), data);
    }
}
