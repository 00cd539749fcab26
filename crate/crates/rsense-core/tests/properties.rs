//! Property-based invariants over randomly drawn model points.

use proptest::prelude::*;

use rsense_core::curve::format_float;
use rsense_core::special::erfcx;
use rsense_core::{dispersion, metrology, ParamSet, Stability};

fn stable_set() -> impl Strategy<Value = ParamSet> {
    // chi as a fraction of chi**(P) keeps every draw dipolar-stable
    (0.5f64..4.0, 1e-4f64..1e-2, 0.5f64..2.0, 0.0f64..0.98).prop_map(|(p, q, zeta, frac)| {
        let chi_max = dispersion::critical_chi_instability(p).unwrap();
        ParamSet::new(p, q, zeta, frac * chi_max).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dispersion_is_positive_and_bounded_by_free_particle(
        set in stable_set(),
        k in 1e-3f64..20.0,
    ) {
        let w = dispersion::omega(k, &set).unwrap();
        prop_assert!(w > 0.0);
        // v_D <= 2, so omega <= free-particle value with contact coupling P(1 + 2 chi)
        let bound = 0.5 * (k.powi(4) + set.p * k * k * (1.0 + 2.0 * set.chi)).sqrt();
        prop_assert!(w <= bound * (1.0 + 1e-12));
    }

    #[test]
    fn dispersion_without_roton_is_monotone(
        p in 0.5f64..4.0,
        q in 1e-4f64..1e-2,
        frac in 0.0f64..0.95,
        k in 1e-3f64..10.0,
    ) {
        let chi_star = dispersion::critical_chi_roton(p).unwrap();
        let set = ParamSet::new(p, q, 1.0, frac * chi_star).unwrap();
        prop_assert_eq!(set.stability(), Stability::StableNoRoton);
        prop_assert!(dispersion::omega_dk(k, &set).unwrap() > 0.0);
    }

    #[test]
    fn roton_sits_below_the_maxon(set in stable_set()) {
        if let Some(f) = dispersion::roton_features(&set).unwrap() {
            prop_assert!(f.k_roton > f.k_maxon);
            prop_assert!(f.omega_roton < f.omega_maxon);
            prop_assert!(f.omega_roton > 0.0);
        }
    }

    #[test]
    fn qfi_is_nonnegative_and_matches_sigma_x(
        gamma in 0.0f64..5.0,
        dgamma in -2.0f64..2.0,
    ) {
        let f = metrology::qfi(gamma, dgamma);
        prop_assert!(f >= 0.0);
        let g = metrology::fisher_sigma_x(gamma, dgamma);
        prop_assert!((f - g).abs() <= 1e-12 * f.abs().max(1.0));
    }

    #[test]
    fn erfcx_is_positive_and_decreasing(x in 0.0f64..100.0) {
        let y = erfcx(x);
        prop_assert!(y > 0.0 && y <= 1.0);
        prop_assert!(erfcx(x + 0.1) < y);
    }

    #[test]
    fn csv_floats_round_trip(bits in any::<u64>()) {
        let v = f64::from_bits(bits);
        prop_assume!(v.is_finite());
        prop_assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
    }
}
