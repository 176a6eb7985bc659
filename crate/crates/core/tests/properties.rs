use proptest::prelude::*;
use risec_core::channels::{
    mgf_complement_double_rayleigh, mgf_complement_triple_cascade, mgf_double_rayleigh,
    mgf_triple_cascade,
};
use risec_core::specfun::{bessel_k0, erf, hyp2f1_special};
use risec_core::{
    asc_approx, asc_exact, avg_capacity, jensen_bound, sop, Link, Model, QuadratureSpec, SopMode,
    SystemParams,
};

fn model() -> impl Strategy<Value = Model> {
    prop_oneof![Just(Model::V2vRisAp), Just(Model::VanetRisRelay)]
}

prop_compose! {
    fn params()(
        model in model(),
        p_s in 0.1..100.0f64,
        beta in 2.0..4.0f64,
        n_cells in 1u32..64,
        r_d in 1.0..20.0f64,
        r_e in 1.0..20.0f64,
        r_s in 1.0..20.0f64,
    ) -> SystemParams {
        SystemParams {
            p_s,
            beta,
            n_cells,
            r_d,
            r_e,
            r_s: (model == Model::VanetRisRelay).then_some(r_s),
            ..SystemParams::defaults(model)
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn double_rayleigh_mgf_is_a_decreasing_probability(s in 0.0..1e4f64, ds in 1e-3..10.0f64) {
        let m = mgf_double_rayleigh(s);
        prop_assert!(m > 0.0 && m <= 1.0);
        prop_assert!(mgf_double_rayleigh(s + ds) < m);
        let c = mgf_complement_double_rayleigh(s);
        prop_assert!((c - (1.0 - m)).abs() <= 1e-12);
    }

    #[test]
    fn triple_cascade_mgf_is_a_decreasing_probability(s in 1e-3..1e3f64) {
        let m = mgf_triple_cascade(s).unwrap();
        prop_assert!(m > 0.0 && m < 1.0);
        prop_assert!(mgf_triple_cascade(s * 1.5).unwrap() < m);
        let c = mgf_complement_triple_cascade(s).unwrap();
        prop_assert!((c - (1.0 - m)).abs() <= 1e-9);
    }

    #[test]
    fn hypergeometric_is_increasing(x in -1.0..0.999f64, dx in 1e-4..1e-3f64) {
        let f = hyp2f1_special(x).unwrap();
        prop_assert!(f >= 0.75 && f.is_finite());
        prop_assert!(hyp2f1_special(x + dx).unwrap() > f);
    }

    #[test]
    fn erf_is_odd_monotone_and_bounded(x in -10.0..10.0f64) {
        prop_assert_eq!(erf(-x), -erf(x));
        prop_assert!(erf(x).abs() <= 1.0);
        prop_assert!(erf(x + 0.01) >= erf(x));
    }

    #[test]
    fn k0_is_positive_and_decreasing(x in 1e-6..600.0f64) {
        let k = bessel_k0(x).unwrap();
        prop_assert!(k > 0.0);
        prop_assert!(bessel_k0(x * 1.01).unwrap() < k);
    }

    #[test]
    fn sop_is_a_probability_increasing_in_threshold(p in params(), c_th in 0.01..5.0f64) {
        for mode in [SopMode::Corrected, SopMode::PaperLiteral] {
            let low = sop(&p, c_th, mode);
            prop_assert!((0.0..=1.0).contains(&low));
            prop_assert!(sop(&p, c_th * 1.1, mode) >= low);
        }
    }

    #[test]
    fn capacity_sits_below_jensen_bound(p in params()) {
        let spec = QuadratureSpec::default();
        for link in [Link::Destination, Link::Eavesdropper] {
            let c = avg_capacity(&p, link, &spec).unwrap();
            prop_assert!(c > 0.0 && c < jensen_bound(&p, link));
        }
    }

    #[test]
    fn exact_asc_is_antisymmetric(p in params()) {
        let spec = QuadratureSpec::default();
        let swapped = SystemParams { r_d: p.r_e, r_e: p.r_d, ..p };
        let a = asc_exact(&p, &spec).unwrap();
        let b = asc_exact(&swapped, &spec).unwrap();
        prop_assert!((a + b).abs() <= 1e-8 * (1.0 + a.abs()));
    }

    #[test]
    fn relay_approx_depends_on_source_hop_only_through_received_power(
        p in params(), k in 0.1..10.0f64,
    ) {
        prop_assume!(p.model == Model::VanetRisRelay);
        // Scaling p_s by k and r_s by k^(1/beta) leaves p_s r_s^-beta unchanged.
        let r_s = p.r_s.unwrap();
        let scaled = SystemParams { p_s: p.p_s * k, r_s: Some(r_s * k.powf(1.0 / p.beta)), ..p };
        let (a, b) = (asc_approx(&p), asc_approx(&scaled));
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn more_power_never_hurts_the_destination(p in params(), k in 1.01..10.0f64) {
        let spec = QuadratureSpec::default();
        let louder = SystemParams { p_s: p.p_s * k, ..p };
        prop_assert!(
            avg_capacity(&louder, Link::Destination, &spec).unwrap()
                > avg_capacity(&p, Link::Destination, &spec).unwrap()
        );
    }
}
