//! Statistical checks on the simulated processes and their oracles.

use fwdest::harness::stats::{chi_square_quantile, pearson};
use fwdest::{Alphabet, Process, ProcessSpec};

fn binary() -> Alphabet {
    Alphabet::numeric(2).unwrap()
}

fn markov(order: usize, transitions: Vec<Vec<f64>>) -> Process {
    Process::new(binary(), ProcessSpec::Markov { order, transitions }).unwrap()
}

/// Counts of non-overlapping `k`-blocks, first symbol most significant.
fn block_counts(data: &[u8], k: usize, a: usize) -> Vec<u64> {
    let mut counts = vec![0u64; a.pow(k as u32)];
    for w in data.chunks_exact(k) {
        let code = w.iter().fold(0usize, |c, &x| c * a + x as usize);
        counts[code] += 1;
    }
    counts
}

#[test]
fn fair_coin_marginals_across_seeds() {
    let coin = Process::new(binary(), ProcessSpec::Iid { probs: vec![0.5, 0.5] }).unwrap();
    let crit = chi_square_quantile(1, 0.999);
    let mut rejections = 0;
    for seed in 0..40 {
        let data: Vec<u8> = coin.sampler(seed).take(10_000).collect();
        let (stat, dof) = pearson(&block_counts(&data, 1, 2), &[0.5, 0.5]);
        assert_eq!(dof, 1);
        rejections += (stat > crit) as usize;
    }
    // one false rejection in 40 happens with probability ~4%
    assert!(rejections <= 1, "{rejections} rejections");
}

#[test]
fn symmetric_chain_balances_ones() {
    let chain = markov(1, vec![vec![0.3, 0.7], vec![0.7, 0.3]]);
    let n = 100_000;
    let ones = chain.sampler(5).take(n).filter(|&x| x == 1).count() as f64;
    let frac = ones / n as f64;
    // the chain alternates, so the variance of the mean is (1 + rho) / (1 - rho) / 4n with rho = -0.4
    let sigma = ((1.0 - 0.4) / (1.0 + 0.4) / (4.0 * n as f64)).sqrt();
    assert!((frac - 0.5).abs() < 3.0 * sigma, "fraction {frac}, sigma {sigma}");
}

#[test]
fn blocks_follow_the_stationary_law() {
    let chain = markov(2, vec![vec![0.9, 0.1], vec![0.6, 0.4], vec![0.4, 0.6], vec![0.1, 0.9]]);
    for k in 1..=3 {
        let law = chain.block_law(k).unwrap();
        // one block per independent run, so the counts are exactly multinomial
        let mut counts = vec![0u64; law.len()];
        for seed in 0..20_000u64 {
            let block: Vec<u8> = chain.sampler(seed).take(k).collect();
            counts[block.iter().fold(0usize, |c, &x| c * 2 + x as usize)] += 1;
        }
        let (stat, dof) = pearson(&counts, &law);
        assert!(
            stat < chi_square_quantile(dof, 0.999),
            "k={k}: chi2 {stat} on {dof} dof"
        );
    }
}

#[test]
fn long_run_frequencies_match_the_stationary_law() {
    let chain = markov(1, vec![vec![0.7, 0.3], vec![0.2, 0.8]]);
    let pi = chain.marginal();
    assert!((pi[0] - 0.4).abs() < 1e-12 && (pi[1] - 0.6).abs() < 1e-12);
    let data: Vec<u8> = chain.sampler(9).take(400_000).collect();
    let frac = data.iter().filter(|&&x| x == 1).count() as f64 / data.len() as f64;
    assert!((frac - 0.6).abs() < 0.01, "{frac}");
}

#[test]
fn identity_emission_hmm_matches_its_chain() {
    let t = vec![vec![0.8, 0.2], vec![0.35, 0.65]];
    let chain = markov(1, t.clone());
    let hmm = Process::new(
        binary(),
        ProcessSpec::Hidden {
            transitions: t,
            emissions: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        },
    )
    .unwrap();
    for k in 1..=4 {
        let (a, b) = (chain.block_law(k).unwrap(), hmm.block_law(k).unwrap());
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-12), "k={k}");
    }
    let traj_c = chain.generate(3, 50, &[10, 50]).unwrap();
    let mut oracle = hmm.oracle();
    for &x in traj_c.seq.as_slice() {
        oracle.observe(x).unwrap();
    }
    let last = &traj_c.oracle_conditionals[1].1;
    assert!(oracle.predictive().iter().zip(last).all(|(x, y)| (x - y).abs() < 1e-12));
}

#[test]
fn hmm_emissions_follow_the_marginal() {
    let hmm = Process::new(
        binary(),
        ProcessSpec::Hidden {
            transitions: vec![vec![0.9, 0.1], vec![0.2, 0.8]],
            emissions: vec![vec![0.8, 0.2], vec![0.3, 0.7]],
        },
    )
    .unwrap();
    let marginal = hmm.marginal();
    let mut counts = vec![0u64; 2];
    for seed in 0..20_000u64 {
        counts[hmm.sampler(seed).next().unwrap() as usize] += 1;
    }
    let (stat, dof) = pearson(&counts, &marginal);
    assert!(stat < chi_square_quantile(dof, 0.999), "chi2 {stat}");
}

#[test]
fn trajectories_reproduce_from_their_seed() {
    let chain = markov(2, vec![vec![0.9, 0.1], vec![0.6, 0.4], vec![0.4, 0.6], vec![0.1, 0.9]]);
    let a = chain.generate(1234, 5000, &[1, 100, 5000]).unwrap();
    let b = chain.generate(1234, 5000, &[5000, 100, 1]).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.rng_seed, 1234);
    let c = chain.generate(1235, 5000, &[1, 100, 5000]).unwrap();
    assert_ne!(a.seq, c.seq);
    // the sampler and the trajectory draw the same symbols
    let direct: Vec<u8> = chain.sampler(1234).take(5001).collect();
    assert_eq!(a.seq.as_slice(), &direct[..]);
}

#[test]
fn invalid_specs_name_the_field() {
    let err = Process::new(
        binary(),
        ProcessSpec::Markov {
            order: 1,
            transitions: vec![vec![0.5, 0.5], vec![0.2, 0.7]],
        },
    )
    .unwrap_err()
    .to_string();
    assert!(err.contains("transitions[1]"), "{err}");
    let err = Process::new(
        binary(),
        ProcessSpec::Markov {
            order: 1,
            transitions: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        },
    )
    .unwrap_err()
    .to_string();
    assert!(err.contains("transitions"), "{err}");
}
