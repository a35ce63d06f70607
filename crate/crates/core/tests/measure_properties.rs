use proptest::prelude::*;
use qdm_core::linalg::{embed_local, pauli};
use qdm_core::measures::{entropic_discord, lqu, mutual_information, qfi, qip, skew_information};
use qdm_core::optimize::{multistart_minimize, sphere_grid_minimize};
use qdm_core::random;
use qdm_core::{GridSpec, Objective, OrbitProblem, SpectrumSpec, Subsystem};

fn side() -> impl Strategy<Value = Subsystem> {
    prop_oneof![Just(Subsystem::A), Just(Subsystem::B)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn spectrum_shift_and_scale(seed in any::<u64>(), side in side(), c in -3.0f64..3.0, r in 0.1f64..3.0) {
        let mut rng = random::rng(seed);
        let rho = random::any_state(&mut rng, (2, 2));
        let unit = SpectrumSpec::qubit();
        let moved = SpectrumSpec::new(vec![c - r, c + r]).unwrap();
        let l0 = lqu(&rho, side, &unit).unwrap().value;
        let l1 = lqu(&rho, side, &moved).unwrap().value;
        prop_assert!((l1 - r * r * l0).abs() <= 1e-9);
        let q0 = qip(&rho, side, &unit).unwrap().raw.value;
        let q1 = qip(&rho, side, &moved).unwrap().raw.value;
        prop_assert!((q1 - r * r * q0).abs() <= 1e-9);
    }

    #[test]
    fn minima_lie_below_every_direction(seed in any::<u64>(), side in side()) {
        let mut rng = random::rng(seed);
        let rho = random::any_state(&mut rng, (2, 2));
        let spectrum = SpectrumSpec::qubit();
        let l = lqu(&rho, side, &spectrum).unwrap().value;
        let q = qip(&rho, side, &spectrum).unwrap().raw.value;
        for _ in 0..10 {
            let k = embed_local(&pauli::along(random::unit_direction(&mut rng)), side, (2, 2)).unwrap();
            prop_assert!(l <= skew_information(&rho, &k).unwrap() + 1e-9);
            prop_assert!(q <= qfi(&rho, &k).unwrap() + 1e-9);
        }
        prop_assert!(l <= q + 1e-9);
    }

    #[test]
    fn lqu_invariant_under_local_unitaries_on_b(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let rho = random::any_state(&mut rng, (2, 2));
        let moved = rho
            .apply_local_unitaries(&random::unitary(&mut rng, 2), &random::unitary(&mut rng, 2))
            .unwrap();
        let spectrum = SpectrumSpec::qubit();
        let before = lqu(&rho, Subsystem::B, &spectrum).unwrap().value;
        let after = lqu(&moved, Subsystem::B, &spectrum).unwrap().value;
        prop_assert!((before - after).abs() <= 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn entropic_discord_is_bounded(seed in any::<u64>(), side in side()) {
        let mut rng = random::rng(seed);
        let rho = random::any_state(&mut rng, (2, 2));
        let d = entropic_discord(&rho, side).unwrap().value;
        prop_assert!(d >= -1e-8, "{d}");
        prop_assert!(d <= mutual_information(&rho) + 1e-8);
    }

    #[test]
    fn finer_lattices_never_report_larger_minima(seed in any::<u64>(), skew in any::<bool>()) {
        let mut rng = random::rng(seed);
        let rho = random::any_state(&mut rng, (2, 2));
        let objective = if skew { Objective::Skew } else { Objective::Qfi };
        let problem = OrbitProblem::new(&rho, Subsystem::A, SpectrumSpec::qubit(), objective).unwrap();
        let mut previous = f64::INFINITY;
        for resolution in [64, 256, 1024, 4096] {
            let grid = GridSpec::new(resolution, 12).unwrap();
            let v = sphere_grid_minimize(&problem, &grid).unwrap().value;
            prop_assert!(v <= previous + 1e-12, "{resolution}: {v} > {previous}");
            previous = v;
        }
    }

    #[test]
    fn multistart_never_loses_to_the_oracle(seed in any::<u64>(), skew in any::<bool>(), side in side()) {
        let mut rng = random::rng(seed);
        let rho = random::any_state(&mut rng, (2, 2));
        let objective = if skew { Objective::Skew } else { Objective::Qfi };
        let problem = OrbitProblem::new(&rho, side, SpectrumSpec::qubit(), objective).unwrap();
        let smooth = multistart_minimize(&problem, 8, seed).unwrap().value;
        let grid = sphere_grid_minimize(&problem, &GridSpec::default()).unwrap().value;
        prop_assert!(smooth <= grid + 1e-6, "{smooth} vs {grid}");
    }
}

#[test]
fn refinement_rounds_only_help() {
    let mut rng = random::rng(3);
    let rho = random::any_state(&mut rng, (2, 2));
    let problem =
        OrbitProblem::new(&rho, Subsystem::A, SpectrumSpec::qubit(), Objective::Skew).unwrap();
    let mut previous = f64::INFINITY;
    for rounds in 0..6 {
        let v = sphere_grid_minimize(&problem, &GridSpec::new(2048, rounds).unwrap())
            .unwrap()
            .value;
        assert!(v <= previous);
        previous = v;
    }
    let closed = lqu(&rho, Subsystem::A, &SpectrumSpec::qubit())
        .unwrap()
        .value;
    assert!((previous - closed).abs() < 1e-9);
}
