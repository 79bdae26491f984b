//! Statistical checks of the BPSK/AWGN hard-decision channel.

use grandab_core::channel::{substream, transmit_hard, ChannelConfig};
use grandab_core::BitVector;
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

fn q(x: f64) -> f64 {
    1.0 - Normal::new(0.0, 1.0).unwrap().cdf(x)
}

#[test]
fn raw_flip_rate_matches_gaussian_tail() {
    for (snr_db, seed) in [(4.0, 1u64), (7.0, 2)] {
        let cfg = ChannelConfig::awgn(snr_db);
        let p = q(1.0 / cfg.sigma());
        let mut rng = substream(seed, 0);
        let frames = 1_000_000 / 128 + 1;
        let mut flips = 0u64;
        let mut total = 0u64;
        for f in 0..frames {
            // Alternate all-zero and all-one words to exercise both symbols.
            let c = if f % 2 == 0 {
                BitVector::zeros(128)
            } else {
                BitVector::from_words(vec![u64::MAX; 2], 128)
            };
            let r = transmit_hard(&c, &cfg, &mut rng);
            flips += (&r ^ &c).weight() as u64;
            total += 128;
        }
        let measured = flips as f64 / total as f64;
        let se = (p * (1.0 - p) / total as f64).sqrt();
        assert!(
            (measured - p).abs() < 3.0 * se,
            "snr {snr_db}: measured {measured}, expected {p} ± {se}"
        );
    }
}

#[test]
fn flip_positions_are_uniform() {
    let n = 128;
    let cfg = ChannelConfig::awgn(3.0);
    let mut rng = substream(17, 5);
    let mut counts = vec![0u64; n];
    let c = BitVector::zeros(n);
    for _ in 0..100_000 {
        for i in transmit_hard(&c, &cfg, &mut rng).ones() {
            counts[i] += 1;
        }
    }
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / n as f64;
    let chi2: f64 = counts
        .iter()
        .map(|&o| (o as f64 - expected).powi(2) / expected)
        .sum();
    let p_value = 1.0 - ChiSquared::new((n - 1) as f64).unwrap().cdf(chi2);
    assert!(p_value > 0.01, "chi2 = {chi2}, p = {p_value}");
}
