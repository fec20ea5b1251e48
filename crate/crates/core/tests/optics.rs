use ebcm_core::messaging::Message;
use ebcm_core::optics::{
    fresnel_energy_coefficients, make_bs_unit, make_gap_unit, make_interface_unit, make_pbs_unit, qwp_matrix, snell_refract,
    DelayModel, DetectorUnit, PortMapper, Refraction, Transform,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn rng(seed: u64) -> ebcm_core::Rng {
    ebcm_core::Rng::seed_from_u64(seed)
}

#[test]
fn snell_examples() {
    assert_eq!(snell_refract(0.75, 1.52, 1.0).unwrap(), Refraction::TotalInternalReflection);
    let Refraction::Refracted(t) = snell_refract(30f64.to_radians(), 1.0, 1.52).unwrap() else { panic!() };
    assert!((t.to_degrees() - 19.205).abs() < 1e-3);
    // Critical angle asin(1/1.52) = 0.71805 rad.
    assert!(matches!(snell_refract(0.7180, 1.52, 1.0).unwrap(), Refraction::Refracted(_)));
    assert_eq!(snell_refract(0.7181, 1.52, 1.0).unwrap(), Refraction::TotalInternalReflection);
}

#[test]
fn fresnel_below_tir_only() {
    assert!(fresnel_energy_coefficients(0.75, 1.52, 1.0).is_err());
    let c = fresnel_energy_coefficients(0.0, 1.0, 1.52).unwrap();
    assert!((c.r_s + 0.52 / 2.52).abs() < 1e-12);
    assert!((c.r_s * c.r_s - 0.042580).abs() < 1e-6);
}

proptest! {
    #[test]
    fn energy_amplitudes_are_complementary(theta in 0.0f64..1.55, n1 in 1.0f64..3.0, n2 in 1.0f64..3.0) {
        prop_assume!(n1 * theta.sin() < n2);
        let c = fresnel_energy_coefficients(theta, n1, n2).unwrap();
        prop_assert!((c.r_s * c.r_s + c.t_s * c.t_s - 1.0).abs() < 1e-12);
        prop_assert!((c.r_p * c.r_p + c.t_p * c.t_p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn interface_transform_is_unitary(theta in 0.0f64..1.55, n1 in 1.0f64..3.0, n2 in 1.0f64..3.0) {
        prop_assume!(n1 * theta.sin() < n2);
        let u = make_interface_unit(theta, n1, n2, 0.99).unwrap();
        prop_assert!(u.transform().unitarity_error() <= 1e-9);
    }

    #[test]
    fn gap_transform_is_unitary(w in 0.0f64..10.0, theta in 0.72f64..1.5) {
        let u = make_gap_unit(w, 1.52, theta, 0.99).unwrap();
        prop_assert!(u.transform().unitarity_error() <= 1e-9);
    }

    #[test]
    fn interface_output_is_unit_and_state_on_simplex(
        ports in prop::collection::vec(0usize..2, 1..300),
        xis in prop::collection::vec(0.0f64..3.2, 300),
        seed: u64,
    ) {
        let mut u = make_interface_unit(0.4, 1.0, 1.52, 0.99).unwrap();
        let mut r = rng(seed);
        for (p, xi) in ports.iter().zip(&xis) {
            let (out, msg) = u.process(*p, Message::from_angles(*xi, 0.3, *xi), &mut r).unwrap();
            prop_assert!(out <= 1);
            prop_assert!((msg.norm_sqr() - 1.0).abs() < 1e-9);
            let x = u.x();
            prop_assert!((x[0] + x[1] - 1.0).abs() < 1e-12);
            prop_assert!(x[0] >= 0.0 && x[1] >= 0.0);
        }
    }
}

#[test]
fn fixed_units_are_unitary() {
    assert!(Transform::beam_splitter().unitarity_error() <= 1e-12);
    assert!(Transform::polarizing_beam_splitter().unitarity_error() <= 1e-12);
    assert!(make_bs_unit(0.99).unwrap().transform().unitarity_error() <= 1e-12);
}

#[test]
fn quarter_wave_plate_is_unitary_at_random_angles() {
    let mut r = rng(3);
    for _ in 0..100 {
        let m = qwp_matrix(r.random::<f64>() * 7.0 - 3.5);
        for i in 0..2 {
            for j in 0..2 {
                let s: Complex64 = (0..2).map(|k| m[i][k] * m[j][k].conj()).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((s - target).norm() < 1e-12);
            }
        }
    }
}

/// Fraction of a steady port-0 stream leaving through port 0, after burn-in.
fn port0_fraction(mut unit: ebcm_core::optics::InterfaceUnit, msg: Message, burn_in: usize, events: usize) -> f64 {
    let mut r = rng(5);
    for _ in 0..burn_in {
        unit.process(0, msg, &mut r).unwrap();
    }
    let mut hits = 0;
    for _ in 0..events {
        if unit.process(0, msg, &mut r).unwrap().0 == 0 {
            hits += 1;
        }
    }
    hits as f64 / events as f64
}

#[test]
fn interface_stream_converges_to_fresnel_reflectance() {
    let events = 100_000;
    let f = port0_fraction(make_interface_unit(0.0, 1.0, 1.52, 0.99).unwrap(), Message::polarized(0.0), 2000, events);
    // Normal incidence reflectance (0.52/2.52)² = 0.042580.
    let p = 0.042580;
    let sigma = (p * (1.0 - p) / events as f64).sqrt();
    assert!((f - p).abs() < 4.0 * sigma, "fraction {f}");
}

#[test]
fn pbs_passes_s_and_swaps_p() {
    let s = port0_fraction(make_pbs_unit(0.99).unwrap(), Message::polarized(0.0), 2000, 10_000);
    let p = port0_fraction(make_pbs_unit(0.99).unwrap(), Message::polarized(std::f64::consts::FRAC_PI_2), 2000, 10_000);
    assert_eq!(s, 1.0);
    assert_eq!(p, 0.0);
}

#[test]
fn wide_gap_reflects_nearly_everything() {
    for xi in [0.0, std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_2] {
        let f = port0_fraction(make_gap_unit(5.0, 1.52, std::f64::consts::FRAC_PI_4, 0.99).unwrap(), Message::polarized(xi), 2000, 10_000);
        assert!(f >= 0.98, "xi={xi}: {f}");
    }
}

#[test]
fn gap_unit_requires_total_internal_reflection() {
    assert!(make_gap_unit(1.0, 1.52, 0.5, 0.99).is_err());
}

#[test]
fn detector_count_matches_clicks_and_state_stays_on_simplex() {
    let mapper = PortMapper::new(0.0, 0.5, 7).unwrap();
    let mut d = DetectorUnit::new(mapper, 0.99, Some(DelayModel { t_max: 100.0, h: 2.0 })).unwrap();
    let mut r = rng(9);
    let mut clicks = 0;
    for i in 0..20_000u32 {
        let dir = r.random::<f64>() - 0.5;
        let msg = Message::from_angles(r.random::<f64>() * 6.0, 0.0, 0.3);
        let det = d.process(msg, dir, f64::from(i), &mut r).unwrap();
        if det.click {
            clicks += 1;
            assert!(det.click_time.unwrap() >= f64::from(i));
        } else {
            assert!(det.click_time.is_none());
        }
        let sum: f64 = d.x().iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }
    assert_eq!(d.count(), clicks);
    assert_eq!(d.received(), 20_000);
    assert!(d.process(Message::polarized(0.0), 1.0, 0.0, &mut r).is_err());
}

#[test]
fn single_direction_stream_is_detected_with_certainty() {
    let mut d = DetectorUnit::single(0.99).unwrap();
    let mut r = rng(4);
    let msg = Message::from_angles(0.7, 0.7, 1.1);
    for _ in 0..1000 {
        d.process(msg, 0.0, 0.0, &mut r).unwrap();
    }
    let before = d.count();
    for _ in 0..10_000 {
        d.process(msg, 0.0, 0.0, &mut r).unwrap();
    }
    assert!((d.count() - before) as f64 / 10_000.0 >= 0.99);
}
