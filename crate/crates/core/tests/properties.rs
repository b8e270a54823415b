use learncomp::analysis::{delta_n, sample_complexity, DeltaMode, DistributionSpec};
use learncomp::bitcore::{all_strings, BitString};
use learncomp::machine::{toy_complexity, FunctionTable};
use learncomp::predictors::{LabeledSample, Pointwise, Predictor, PrefixNearestNeighbour, ShortestConsistentProgram};
use learncomp::reduction::{compress, decompress, Branch, CompressorConfig, KSymbol, TupleSearch};
use learncomp::{Exact, Scalar};
use num_rational::Ratio;
use proptest::prelude::*;

fn bits(max_len: usize) -> impl Strategy<Value = BitString> {
    proptest::collection::vec(any::<bool>(), 0..=max_len).prop_map(BitString::from_bits)
}

fn table(t: usize) -> impl Strategy<Value = FunctionTable> {
    (0u64..1 << (1 << t)).prop_map(move |mask| FunctionTable::from_mask(t, mask))
}

fn predictor(which: u8) -> Box<dyn Predictor> {
    match which % 3 {
        0 => Box::new(Pointwise),
        1 => Box::new(PrefixNearestNeighbour),
        _ => Box::new(ShortestConsistentProgram::new(40)),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn container_round_trips_under_any_search(
        y in bits(40),
        which in 0u8..2,
        eps_num in 1u64..10,
        seed in any::<u64>(),
        count in 1u64..200,
    ) {
        let phi = predictor(which);
        let config = CompressorConfig {
            epsilon: Ratio::new(eps_num, 10),
            search: TupleSearch::Sampled { count, seed },
        };
        let z = compress(phi.as_ref(), &y, &config).unwrap();
        prop_assert_eq!(decompress(phi.as_ref(), &z.bits).unwrap(), y.clone());
        if let Some(parts) = &z.coded {
            prop_assert_eq!(z.branch, Branch::Coded);
            prop_assert!(parts.m >= 4);
            let trains = parts.kstring.symbols().iter().filter(|s| matches!(s, KSymbol::Train(_))).count();
            prop_assert_eq!(trains, parts.n);
            prop_assert!(parts.kstring.error_count() <= config.budget(parts.m));
        } else {
            prop_assert_eq!(z.len(), y.len() + 1);
        }
    }

    #[test]
    fn delta_is_a_probability(eta in table(2), which in 0u8..3, n in 1usize..5, eps_num in 0u64..4) {
        let phi = predictor(which);
        let d = delta_n(phi.as_ref(), &eta, Exact::from_ratio(eps_num, 4), n, &DistributionSpec::Uniform, DeltaMode::Exact)
            .unwrap();
        prop_assert!(d >= Exact::from_ratio(0, 1) && d <= Exact::from_ratio(1, 1));
    }

    #[test]
    fn reported_sample_size_is_the_first(eta in table(2), which in 0u8..3, delta_num in 1u64..10) {
        let phi = predictor(which);
        let delta = Exact::from_ratio(delta_num, 10);
        let eps = Exact::from_ratio(1, 5);
        let report = sample_complexity(phi.as_ref(), &eta, delta.clone(), eps, &DistributionSpec::Uniform, 40, DeltaMode::Exact)
            .unwrap();
        let (last, before) = report.deltas.split_last().unwrap();
        prop_assert!(before.iter().all(|p| p.delta_n > delta));
        if let Some(n) = report.sample_complexity {
            prop_assert_eq!(last.n, n);
            prop_assert!(last.delta_n <= delta);
        } else {
            prop_assert!(last.delta_n > delta);
        }
    }

    #[test]
    fn raising_the_cap_never_raises_toy_complexity(y in bits(12).prop_filter("nonempty", |y| !y.is_empty()), low in 8u64..20) {
        let a = toy_complexity(&y, low).unwrap();
        let b = toy_complexity(&y, low + 12).unwrap();
        if let (Some(va), Some(vb)) = (a.value(), b.value()) {
            prop_assert!(vb <= va);
        }
        if a.is_exact() {
            prop_assert!(b.is_exact());
        }
    }

    #[test]
    fn prefix_nn_matches_pointwise_on_seen_objects(eta in table(3), picks in proptest::collection::vec(0usize..8, 1..6)) {
        let xs = all_strings(3);
        let chosen: Vec<BitString> = picks.iter().map(|&i| xs[i].clone()).collect();
        let sample = LabeledSample::labelled_by(&eta, &chosen).unwrap();
        for x in &chosen {
            let nn = PrefixNearestNeighbour.predict(&sample, x).unwrap();
            let pw = Pointwise.predict(&sample, x).unwrap();
            prop_assert_eq!(nn, pw);
            prop_assert_eq!(nn, eta.eval(x).unwrap());
        }
    }
}
