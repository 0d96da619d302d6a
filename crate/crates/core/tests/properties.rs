//! Property tests for the estimator and the streaming index.

use fwdest::estimator::{self, estimate, estimate_distribution, kappa, lambda, recurrence_times};
use fwdest::{
    Alphabet, ContextSchedule, PayoffFunction, Schedules, StreamingEstimator, SymbolSequence, ThresholdSchedule,
};
use proptest::prelude::*;

fn sequence() -> impl Strategy<Value = SymbolSequence> {
    (2usize..=4).prop_flat_map(|a| {
        prop::collection::vec(0..a as u8, 2..120)
            .prop_map(move |v| SymbolSequence::from_indices(Alphabet::numeric(a).unwrap(), v).unwrap())
    })
}

fn schedules() -> impl Strategy<Value = Schedules> {
    prop_oneof![
        Just(Schedules::default()),
        (1usize..=5, 1usize..=4).prop_map(|(k, j)| {
            Schedules::new(
                ContextSchedule::Constant { value: k },
                ThresholdSchedule::Constant { value: j },
            )
        }),
        Just(Schedules::new(
            ContextSchedule::Log { coef: 1.0 },
            ThresholdSchedule::Power { exponent: 0.25 }
        )),
    ]
}

/// Definition-level recurrence list: scan every earlier window.
fn brute_taus(data: &[u8], n: usize, k: usize) -> Vec<usize> {
    let block = &data[n + 1 - k..=n];
    (1..=n + 1 - k)
        .filter(|&t| &data[n + 1 - k - t..=n - t] == block)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn estimate_stays_in_payoff_range(seq in sequence(), sch in schedules(), frac in 0.0f64..1.0, seed in any::<u64>()) {
        let n = ((seq.len() - 1) as f64 * frac) as usize;
        let a = seq.alphabet().size();
        let values: Vec<f64> = (0..a).map(|i| ((seed >> (8 * i)) & 0xff) as f64 - 128.0).collect();
        let g = PayoffFunction::new(values).unwrap();
        let r = estimate(&seq, n, &g, &sch).unwrap();
        if r.abstained {
            prop_assert_eq!((r.value, r.kappa, r.lambda), (0.0, 0, 0));
        } else {
                prop_assert!(g.min() <= r.value && r.value <= g.max());
        }
    }

    #[test]
    fn kappa_respects_threshold_and_cap(seq in sequence(), sch in schedules(), frac in 0.0f64..1.0) {
        let n = 1 + ((seq.len() - 2) as f64 * frac) as usize;
        let k = kappa(&seq, n, &sch).unwrap();
        let cap = sch.context_len(n as u64, seq.alphabet().size()).unwrap();
        prop_assert!(k <= cap);
        let j = sch.threshold(n as u64).unwrap() as u64;
        if k > 0 {
            prop_assert!(lambda(&seq, n, k).unwrap() >= j);
        }
        // nothing longer within the cap qualifies
        for longer in k + 1..=cap.min(n + 1) {
            prop_assert!(lambda(&seq, n, longer).unwrap() < j);
        }
    }

    #[test]
    fn longer_suffixes_recur_no_more_often(seq in sequence(), frac in 0.0f64..1.0) {
        let n = ((seq.len() - 1) as f64 * frac) as usize;
        let counts: Vec<u64> = (1..=n + 1).map(|k| lambda(&seq, n, k).unwrap()).collect();
        prop_assert!(counts.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn recurrence_times_match_definition(seq in sequence(), frac in 0.0f64..1.0, k in 1usize..6) {
        let n = ((seq.len() - 1) as f64 * frac) as usize;
        prop_assume!(k <= n + 1);
        let taus = recurrence_times(&seq, n, k, usize::MAX).unwrap();
        prop_assert!(taus.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(&taus, &brute_taus(seq.as_slice(), n, k));
        let first3 = recurrence_times(&seq, n, k, 3).unwrap();
        prop_assert_eq!(&first3[..], &taus[..taus.len().min(3)]);
    }

    #[test]
    fn evaluation_is_deterministic(seq in sequence(), sch in schedules()) {
        let n = seq.len() - 1;
        let a = estimate_distribution(&seq, n, &sch).unwrap();
        let b = estimate_distribution(&seq.clone(), n, &sch).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn streaming_index_agrees_on_every_prefix(seq in sequence(), sch in schedules()) {
        let horizon = seq.len() - 1;
        let mut index = StreamingEstimator::new(seq.alphabet().clone(), sch, horizon).unwrap();
        let g = PayoffFunction::indicator(1, seq.alphabet().size()).unwrap();
        for (n, &x) in seq.as_slice().iter().enumerate() {
            index.push(x).unwrap();
            let prefix = SymbolSequence::from_indices(seq.alphabet().clone(), seq.as_slice()[..=n].to_vec()).unwrap();
            prop_assert_eq!(index.current_estimate(&g).unwrap(), estimate(&prefix, n, &g, &sch).unwrap());
            prop_assert_eq!(index.current_distribution().unwrap(), estimate_distribution(&prefix, n, &sch).unwrap());
            for k in 1..=index.k_max().min(n + 1) {
                prop_assert_eq!(index.lambda(k).unwrap(), lambda(&prefix, n, k).unwrap());
                prop_assert_eq!(
                    index.recurrence_times(k, usize::MAX).unwrap(),
                    recurrence_times(&prefix, n, k, usize::MAX).unwrap()
                );
            }
        }
    }

    #[test]
    fn d_star_is_a_bounded_metric(
        x in prop::collection::vec(0u8..3, 12),
        y in prop::collection::vec(0u8..3, 12),
        z in prop::collection::vec(0u8..3, 12),
        depth in 1usize..=12,
    ) {
        let d = |a: &[u8], b: &[u8]| estimator::d_star(a, b, depth).unwrap();
        prop_assert_eq!(d(&x, &y), d(&y, &x));
        prop_assert!((0.0..1.0).contains(&d(&x, &y)));
        prop_assert_eq!(d(&x, &x), 0.0);
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z));
        // agreement on the last m symbols caps the distance at 2^-m
        let m = x.iter().rev().zip(y.iter().rev()).take(depth).take_while(|(a, b)| a == b).count();
        prop_assert!(d(&x, &y) <= 0.5f64.powi(m as i32));
    }
}
