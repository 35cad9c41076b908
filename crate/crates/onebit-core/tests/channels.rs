mod common;

use common::{derived, rel, sigma, UNIT};
use onebit_core::channels::{
    coherent_radial_law, induce_law, interval_law, noncoherent_radial_law, threshold_law, ChannelKind, DiscreteInput,
    ExtReal, Quantizer,
};
use onebit_core::specfun::q_func;
use proptest::prelude::*;

#[test]
fn threshold_examples() {
    assert_eq!(threshold_law(1.7, 1.7, UNIT), 0.5);
    assert_eq!(threshold_law(0.0, 0.0, UNIT), 0.5);
    assert!(rel(threshold_law(1.0, 0.0, UNIT), derived("channels.threshold_law.q_minus1")) < 1e-15);
}

#[test]
fn interval_extended_forms() {
    for x in [-3.0, 0.0, 2.5] {
        assert_eq!(interval_law(x, ExtReal::NegInf, ExtReal::PosInf, UNIT), 1.0);
        assert_eq!(interval_law(x, ExtReal::PosInf, ExtReal::PosInf, UNIT), 0.0);
        assert_eq!(interval_law(x, ExtReal::NegInf, ExtReal::NegInf, UNIT), 0.0);
        assert_eq!(interval_law(x, ExtReal::Finite(0.5), ExtReal::PosInf, UNIT), threshold_law(x, 0.5, UNIT));
        let below = interval_law(x, ExtReal::NegInf, ExtReal::Finite(0.5), UNIT);
        assert!((below - (1.0 - threshold_law(x, 0.5, UNIT))).abs() < 1e-15);
    }
}

#[test]
fn interval_reflects_about_center() {
    let (lo, hi) = (-0.4, 1.6);
    let theta = 0.5 * (lo + hi);
    for d in [0.1, 0.7, 3.0] {
        let a = interval_law(theta - d, ExtReal::Finite(lo), ExtReal::Finite(hi), UNIT);
        let b = interval_law(theta + d, ExtReal::Finite(lo), ExtReal::Finite(hi), UNIT);
        assert!(rel(a, b) < 1e-13);
    }
}

#[test]
fn quantizer_validation() {
    assert!(Quantizer::interval(ExtReal::Finite(2.0), ExtReal::Finite(1.0)).is_err());
    assert!(Quantizer::interval(ExtReal::PosInf, ExtReal::NegInf).is_err());
    assert!(Quantizer::radial(0.0).is_err());
    assert!(Quantizer::threshold(f64::NAN).is_err());
}

#[test]
fn coherent_examples() {
    for h in [0.3, 1.0, 2.0] {
        let v = coherent_radial_law(h, 0.0, 1.2, UNIT).unwrap();
        assert!(rel(v, (-1.44f64).exp()) < 1e-15);
    }
    assert!(coherent_radial_law(1.0, 2.0, 1e-9, UNIT).unwrap() > 1.0 - 1e-15);
    assert!(rel(coherent_radial_law(1.0, 2.0, 1.0, UNIT).unwrap(), derived("channels.coherent_radial.h1_x2_u1")) < 1e-10);
}

#[test]
fn noncoherent_examples() {
    assert_eq!(noncoherent_radial_law(0.0, 1.5, UNIT), (-2.25f64).exp());
    let x = 1.3;
    assert!(rel(noncoherent_radial_law(x, (x * x + 1.0f64).sqrt(), UNIT), (-1.0f64).exp()) < 1e-15);
    assert!(rel(noncoherent_radial_law(1.0, 1.0, UNIT), derived("channels.noncoherent_radial.x1_u1")) < 1e-15);
}

#[test]
fn induce_law_examples() {
    let single = DiscreteInput::new(vec![0.0], vec![1.0]).unwrap();
    let law = induce_law(&single, &Quantizer::threshold(0.0).unwrap(), ChannelKind::Gaussian, UNIT).unwrap();
    assert_eq!(law.w(), &[0.5]);

    let p: f64 = 2.0;
    let anti = DiscreteInput::antipodal(p.sqrt());
    let law = induce_law(&anti, &Quantizer::threshold(0.0).unwrap(), ChannelKind::Gaussian, UNIT).unwrap();
    let a = p.sqrt();
    let mut want = [q_func(a), q_func(-a)];
    if anti.points()[0] > 0.0 {
        want.swap(0, 1);
    }
    assert_eq!(law.w(), &want);

    let three = DiscreteInput::new(vec![-1.0, 0.5, 2.0], vec![0.3, 0.5, 0.2]).unwrap();
    let (lo, hi) = (ExtReal::Finite(-0.2), ExtReal::Finite(1.1));
    let q = Quantizer::interval(lo, hi).unwrap();
    let law = induce_law(&three, &q, ChannelKind::Gaussian, UNIT).unwrap();
    for (w, &x) in law.w().iter().zip(three.points()) {
        assert_eq!(*w, interval_law(x, lo, hi, UNIT));
    }
}

#[test]
fn induce_law_rejects_kind_mismatch() {
    let input = DiscreteInput::antipodal(1.0);
    assert!(induce_law(&input, &Quantizer::radial(1.0).unwrap(), ChannelKind::Gaussian, UNIT).is_err());
    assert!(induce_law(&input, &Quantizer::threshold(0.0).unwrap(), ChannelKind::Noncoherent, UNIT).is_err());
}

#[test]
fn coherent_law_at_zero_input_is_free_of_fading() {
    let want = (-0.81f64).exp();
    for i in 0..200 {
        let h = 0.01 + 0.05 * i as f64;
        assert!(rel(coherent_radial_law(h, 0.0, 0.9, UNIT).unwrap(), want) < 1e-12);
    }
}

proptest! {
    #[test]
    fn threshold_increasing_in_input(x in -20.0f64..20.0, dx in 1e-4f64..1.0, u in -5.0f64..5.0) {
        prop_assert!(threshold_law(x + dx, u, UNIT) >= threshold_law(x, u, UNIT));
    }

    #[test]
    fn reflection(x in -30.0f64..30.0, u in -30.0f64..30.0, s in 0.1f64..10.0) {
        let sg = sigma(s);
        prop_assert!((threshold_law(x, u, sg) - (1.0 - threshold_law(-x, -u, sg))).abs() < 2e-16);
    }

    #[test]
    fn interval_is_difference_of_thresholds(x in -8.0f64..8.0, lo in -6.0f64..6.0, width in 0.0f64..6.0) {
        let hi = lo + width;
        let direct = interval_law(x, ExtReal::Finite(lo), ExtReal::Finite(hi), UNIT);
        let diff = threshold_law(x, lo, UNIT) - threshold_law(x, hi, UNIT);
        prop_assert!((direct - diff).abs() < 1e-14);
    }

    #[test]
    fn interval_increasing_below_center(lo in -4.0f64..4.0, width in 0.1f64..4.0, t in 0.0f64..1.0, dt in 1e-3f64..1.0) {
        let hi = lo + width;
        let theta = 0.5 * (lo + hi);
        // two points below the center, spaced at least 1e-3 · 4
        let x1 = theta - 4.0 * (t + dt);
        let x2 = theta - 4.0 * t;
        let w = |x: f64| interval_law(x, ExtReal::Finite(lo), ExtReal::Finite(hi), UNIT);
        prop_assume!(w(x1) > 1e-300);
        prop_assert!(w(x2) > w(x1));
    }

    #[test]
    fn coherent_continuous_in_threshold(h in 0.1f64..3.0, x in 0.1f64..10.0, u in 0.01f64..10.0) {
        let step = 1e-4;
        let a = coherent_radial_law(h, x, u, UNIT).unwrap();
        let b = coherent_radial_law(h, x, u + step, UNIT).unwrap();
        // the Rician density at r is at most r, so |∂/∂Υ| ≤ 2Υ
        prop_assert!(b <= a);
        prop_assert!(a - b <= 2.0 * (u + step) * step * 2.0);
    }

    #[test]
    fn noncoherent_monotone(x in 0.0f64..10.0, u in 0.1f64..10.0, d in 1e-3f64..1.0) {
        prop_assert!(noncoherent_radial_law(x + d, u, UNIT) >= noncoherent_radial_law(x, u, UNIT));
        prop_assert!(noncoherent_radial_law(x, u + d, UNIT) <= noncoherent_radial_law(x, u, UNIT));
    }
}
