use risec_core::channels::{moments, pdf, sample, FadingKind};
use risec_core::specfun::integrate;
use risec_core::{mc_asc, simulate, ChannelStream, McConfig, Model, QuadratureSpec, SystemParams};

/// Kolmogorov-Smirnov distance between `samples` and the CDF obtained by
/// integrating the density, evaluated at every `stride`-th order statistic.
fn ks_distance(kind: FadingKind, samples: &mut [f64], stride: usize) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let spec = QuadratureSpec::default();
    let mut cdf = 0.0;
    let mut prev = 0.0;
    let mut worst: f64 = 0.0;
    for i in (0..samples.len()).step_by(stride) {
        let x = samples[i];
        cdf += integrate(|g| pdf(kind, g).unwrap(), prev, x, &spec).unwrap();
        prev = x;
        let below = i as f64 / n;
        let above = (i + 1) as f64 / n;
        worst = worst.max((cdf - below).abs()).max((above - cdf).abs());
    }
    worst
}

#[test]
fn samplers_match_their_densities() {
    let n = 20_000;
    // Critical value of the KS statistic at the 1% level.
    let critical = 1.628 / (n as f64).sqrt();
    for (i, kind) in [
        FadingKind::Rayleigh,
        FadingKind::DoubleRayleigh,
        FadingKind::TripleCascade,
    ]
    .into_iter()
    .enumerate()
    {
        let mut rng = ChannelStream::new(2024).split(i as u64);
        let mut xs: Vec<f64> = (0..n).map(|_| sample(kind, &mut rng)).collect();
        let d = ks_distance(kind, &mut xs, 40);
        assert!(d < critical, "{kind:?}: KS distance {d} >= {critical}");
    }
}

#[test]
fn sample_moments_match_constants() {
    let n = 400_000;
    for kind in [
        FadingKind::Rayleigh,
        FadingKind::DoubleRayleigh,
        FadingKind::TripleCascade,
    ] {
        let mut rng = ChannelStream::new(77);
        let xs: Vec<f64> = (0..n).map(|_| sample(kind, &mut rng)).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let m = moments(kind);
        let se = (m.variance / n as f64).sqrt();
        assert!((mean - m.mean).abs() < 4.0 * se, "{kind:?} mean {mean}");
        assert!(
            ((var - m.variance) / m.variance).abs() < 0.02,
            "{kind:?} variance {var}"
        );
    }
}

#[test]
fn std_error_halves_when_trials_quadruple() {
    let p = SystemParams::defaults(Model::V2vRisAp);
    let small = mc_asc(
        &p,
        &McConfig {
            trials: 20_000,
            ..McConfig::default()
        },
    )
    .unwrap()
    .0;
    let large = mc_asc(
        &p,
        &McConfig {
            trials: 80_000,
            ..McConfig::default()
        },
    )
    .unwrap()
    .0;
    let ratio = small.std_error / large.std_error;
    assert!((ratio - 2.0).abs() < 0.1, "ratio {ratio}");
}

#[test]
fn seeds_change_draws_but_not_statistics() {
    let p = SystemParams::defaults(Model::VanetRisRelay);
    let a = simulate(
        &p,
        &McConfig {
            trials: 50_000,
            seed: 1,
            ..McConfig::default()
        },
        &[],
    )
    .unwrap();
    let b = simulate(
        &p,
        &McConfig {
            trials: 50_000,
            seed: 2,
            ..McConfig::default()
        },
        &[],
    )
    .unwrap();
    assert_ne!(a.difference.value, b.difference.value);
    let se = a.difference.std_error.hypot(b.difference.std_error);
    assert!((a.difference.value - b.difference.value).abs() < 4.0 * se);
}

#[test]
fn unshared_source_hop_keeps_link_means() {
    let p = SystemParams {
        n_0: 0.01,
        ..SystemParams::defaults(Model::VanetRisRelay)
    };
    let shared = McConfig {
        trials: 100_000,
        ..McConfig::default()
    };
    let split = McConfig {
        shared_source_channel: false,
        ..shared
    };
    let a = simulate(&p, &shared, &[1.0]).unwrap();
    let b = simulate(&p, &split, &[1.0]).unwrap();
    // The signed difference is linear in the per-link capacities, so only
    // its spread depends on the coupling.
    let se = a.difference.std_error.hypot(b.difference.std_error);
    assert!((a.difference.value - b.difference.value).abs() < 4.0 * se);
    assert!(b.difference.std_error > a.difference.std_error);
}
