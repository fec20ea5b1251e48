use ebcm_core::dlm::{dlm_ode_oracle, ScalarDlm, VectorDlm};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MILLION: usize = 1_000_000;

#[test]
fn scalar_state_stays_in_unit_interval_over_a_million_steps() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for fast in [false, true] {
        let mut m = ScalarDlm::new(0.5, 0.99, fast).unwrap();
        for _ in 0..MILLION {
            m.step(rng.random::<f64>()).unwrap();
            assert!((0.0..=1.0).contains(&m.x()));
        }
    }
}

#[test]
fn vector_norm_bounded_over_a_million_unit_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut m = VectorDlm::new(vec![0.6, 0.0, 0.8], 0.99).unwrap();
    let mut v = [0.0; 3];
    for _ in 0..MILLION {
        let mut n2 = 0.0;
        for c in v.iter_mut() {
            *c = rng.random::<f64>() * 2.0 - 1.0;
            n2 += *c * *c;
        }
        let n = n2.sqrt();
        for c in v.iter_mut() {
            *c /= n;
        }
        m.step(&v).unwrap();
        let norm: f64 = m.x().iter().map(|a| a * a).sum::<f64>().sqrt();
        assert!(norm <= 1.0 + 1e-12, "norm {norm}");
    }
}

#[test]
fn one_hot_sum_stays_one_over_a_million_steps() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut m = VectorDlm::uniform(5, 0.99).unwrap();
    for _ in 0..MILLION {
        m.step_one_hot(rng.random_range(0..5)).unwrap();
        let sum: f64 = m.x().iter().sum();
        assert!((sum - 1.0).abs() <= 1e-12, "sum {sum}");
        assert!(m.x().iter().all(|&c| c >= 0.0));
    }
}

proptest! {
    #[test]
    fn scalar_state_in_range(x0 in 0.0f64..=1.0, gamma in 0.0f64..0.9999, fast: bool,
                             ys in prop::collection::vec(0.0f64..=1.0, 1..400)) {
        let mut m = ScalarDlm::new(x0, gamma, fast).unwrap();
        for y in ys {
            let bit = m.step(y).unwrap();
            prop_assert!(bit <= 1);
            prop_assert!((0.0..=1.0).contains(&m.x()));
        }
    }

    #[test]
    fn one_hot_keeps_simplex(gamma in 0.0f64..0.9999, ks in prop::collection::vec(0usize..4, 1..400)) {
        let mut m = VectorDlm::uniform(4, gamma).unwrap();
        for k in ks {
            m.step_one_hot(k).unwrap();
            let sum: f64 = m.x().iter().sum();
            prop_assert!((sum - 1.0).abs() <= 1e-12);
            prop_assert!(m.x().iter().all(|&c| c >= 0.0));
        }
    }

    #[test]
    fn unit_inputs_stay_in_ball(gamma in 0.0f64..0.9999,
                                angles in prop::collection::vec(0.0f64..std::f64::consts::TAU, 1..400)) {
        let mut m = VectorDlm::new(vec![0.0, 1.0], gamma).unwrap();
        for a in angles {
            m.step(&[a.cos(), a.sin()]).unwrap();
            let norm = m.x().iter().map(|c| c * c).sum::<f64>().sqrt();
            prop_assert!(norm <= 1.0 + 1e-12);
        }
    }
}

#[test]
fn stationary_bit_average_approximates_input() {
    for &y in &[0.3, 0.0426, 0.75] {
        let mut m = ScalarDlm::new(y, 0.99, false).unwrap();
        for _ in 0..2000 {
            m.step(y).unwrap();
        }
        for k in [100usize, 1000, 10_000] {
            let ones: u32 = (0..k).map(|_| u32::from(m.step(y).unwrap())).sum();
            let mean = f64::from(ones) / k as f64;
            assert!((mean - y).abs() <= 2.0 / k as f64, "y={y} K={k} mean={mean}");
        }
    }
}

#[test]
fn periodic_input_converges_to_its_mean() {
    let seq = [[1.0, 0.0], [0.0, 1.0], [0.0, 1.0], [-1.0, 0.0]];
    let mut m = VectorDlm::new(vec![0.0, 0.0], 0.9999).unwrap();
    for _ in 0..50_000 {
        for v in &seq {
            m.step(v).unwrap();
        }
    }
    assert!((m.x()[0] - 0.0).abs() < 1e-3);
    assert!((m.x()[1] - 0.5).abs() < 1e-3);
}

#[test]
fn constant_input_is_the_fixed_point() {
    let mut m = VectorDlm::new(vec![0.2, -0.3, 0.1], 0.9).unwrap();
    let v = [0.0, 0.6, 0.8];
    for _ in 0..1000 {
        m.step(&v).unwrap();
    }
    for (a, b) in m.x().iter().zip(v) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn discrete_rule_approaches_the_continuum_limit() {
    let tau = 1e-3;
    let big_gamma = 1.0;
    let gamma = 1.0 / (1.0 + tau * big_gamma);
    let input = |t: f64| vec![(3.0 * t).cos(), (3.0 * t).sin()];
    let x0 = [0.0, 1.0];
    let mut m = VectorDlm::new(x0.to_vec(), gamma).unwrap();
    let steps = (1.0 / tau).round() as usize;
    for k in 1..=steps {
        m.step(&input(k as f64 * tau)).unwrap();
    }
    let reference = dlm_ode_oracle(&x0, input, big_gamma, 1.0).unwrap();
    for (a, b) in m.x().iter().zip(&reference) {
        assert!((a - b).abs() < 1e-2, "{a} vs {b}");
    }
}

fn steps_to_follow(fast: bool) -> usize {
    let mut m = ScalarDlm::new(0.5, 0.99, fast).unwrap();
    for _ in 0..500 {
        m.step(0.3).unwrap();
    }
    let mut k = 0;
    loop {
        k += 1;
        m.step(0.8).unwrap();
        if (m.x() - 0.8).abs() < 0.01 {
            return k;
        }
        assert!(k < 10_000);
    }
}

#[test]
fn fast_variant_follows_a_step_change_quickly() {
    // Input jumps 0.3 → 0.8 after 500 events; values computed from the update
    // rule and frozen.
    let fast = steps_to_follow(true);
    let slow = steps_to_follow(false);
    assert_eq!(fast, 11);
    assert_eq!(slow, 120);
    assert!(slow >= 10 * fast);
}
