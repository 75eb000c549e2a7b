use num_complex::Complex64;
use proptest::prelude::*;
use qbm_core::monitoring::*;
use qbm_core::oracle::*;
use qbm_core::*;

fn ohmic(gamma: f64) -> CorrelatorSet {
    CorrelatorSet::position(OscillatorParams::natural(0.1), BathSpec::ohmic(gamma), SeriesControl::VARIANCE).unwrap()
}

fn sigma() -> f64 {
    0.5 / 2f64.sqrt()
}

fn two_point(k0: f64, kf: f64, t: f64) -> CharFunctionInput {
    CharFunctionInput {
        wavenumbers: vec![k0, kf],
        times: vec![0.0, t],
        slit_width: sigma(),
    }
}

#[test]
fn normalization() {
    let set = ohmic(0.2);
    let input = CharFunctionInput {
        wavenumbers: vec![0.0; 4],
        times: vec![0.0, 0.5, 1.0, 1.3],
        slit_width: sigma(),
    };
    let phi = characteristic_function(&input, &set, &QuadratureTolerance::default()).unwrap();
    assert!((phi - Complex64::new(1.0, 0.0)).norm() < 1e-13);
}

#[test]
fn single_measurement_is_gaussian() {
    let set = ohmic(0.2);
    let proto = MeasurementProtocol::unmonitored(Observable::Position, sigma(), 0.0);
    let z0 = zeta0_sq(&proto, &set);
    for k in [0.3, 1.0, 2.5, 4.0] {
        let input = CharFunctionInput {
            wavenumbers: vec![k],
            times: vec![0.0],
            slit_width: sigma(),
        };
        let phi = characteristic_function(&input, &set, &QuadratureTolerance::default()).unwrap();
        let expected = (-0.5 * z0 * k * k).exp();
        assert!((phi.norm() - expected).abs() < 1e-12 * expected.max(1e-3), "k={k}");
    }
}

#[test]
fn shifts() {
    let set = ohmic(0.2);
    let zero = CharFunctionInput {
        wavenumbers: vec![0.0; 3],
        times: vec![0.0, 1.0, 2.0],
        slit_width: sigma(),
    };
    assert!(commutator_shifts(&zero, &set).unwrap().iter().all(|&s| s == 0.0));

    let input = two_point(0.7, 1.9, 2.4);
    let s = commutator_shifts(&input, &set).unwrap();
    assert_eq!(s[1], 0.0);
    assert_eq!(s[0], 1.9 * set.antisymmetric(-2.4));

    let three = CharFunctionInput {
        wavenumbers: vec![0.4, -1.0, 2.0],
        times: vec![0.0, 0.8, 2.0],
        slit_width: sigma(),
    };
    let classical = commutator_shifts(&three, &Classical(set)).unwrap();
    assert!(classical.iter().all(|&s| s == 0.0));
    let quantum = commutator_shifts(&three, &set).unwrap();
    let expected0 = -1.0 * set.antisymmetric(-0.8) + 2.0 * set.antisymmetric(-2.0);
    assert!((quantum[0] - expected0).abs() < 1e-15);
    assert_eq!(quantum[2], 0.0);
}

#[test]
fn invalid_inputs() {
    let set = ohmic(0.2);
    let unordered = CharFunctionInput {
        wavenumbers: vec![1.0, 1.0],
        times: vec![1.0, 0.5],
        slit_width: sigma(),
    };
    assert!(matches!(commutator_shifts(&unordered, &set), Err(OracleError::Input(_))));
    let mismatched = CharFunctionInput {
        wavenumbers: vec![1.0],
        times: vec![0.0, 0.5],
        slit_width: sigma(),
    };
    assert!(mismatched.validate().is_err());
    let no_width = CharFunctionInput { slit_width: 0.0, ..two_point(1.0, 1.0, 1.0) };
    assert!(no_width.validate().is_err());
}

#[test]
fn inversion_matches_closed_form() {
    let tol = QuadratureTolerance::default();
    for (gamma, n) in [(0.0, 1usize), (0.2, 1)] {
        let set = ohmic(gamma);
        let spacing = 1.3;
        let t = n as f64 * spacing + 0.9;
        let proto = MeasurementProtocol::monitored(Observable::Position, sigma(), 0.0, spacing).at(t);
        assert_eq!(proto.intermediates, n);
        let joint = JointTwoPoint::new(t, &proto, &set).unwrap();
        let (s0, sf) = (joint.zeta0_sq.sqrt(), joint.zeta_sq.sqrt());
        let x0s: Vec<f64> = (-3..=3).map(|i| i as f64 * s0).collect();
        let xfs: Vec<f64> = (-3..=3).map(|i| i as f64 * sf).collect();
        let grid = InversionGrid::conservative(sigma(), set.variance(), n, 3.0 * s0.max(sf));
        let w = joint_density_by_inversion(&x0s, &xfs, t, &proto, &set, &grid, &tol).unwrap();
        for (i, &x0) in x0s.iter().enumerate() {
            for (j, &xf) in xfs.iter().enumerate() {
                let exact = joint.density(x0, xf);
                assert!((w[i][j] - exact).abs() <= 1e-6 * exact, "γ={gamma} n={n} ({x0}, {xf})");
            }
        }
    }
}

#[test]
fn marginalization_reports_coverage() {
    let xs: Vec<f64> = (0..=400).map(|i| -2.0 + 4.0 * i as f64 / 400.0).collect();
    let ys: Vec<f64> = xs.iter().map(|x| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()).collect();
    match quadrature_marginalize(&xs, &ys) {
        Err(OracleError::Coverage { mass, .. }) => assert!((mass - 0.9545).abs() < 1e-3),
        other => panic!("expected a coverage error, got {other:?}"),
    }
}

#[test]
fn drude_momentum_duality() {
    let params = OscillatorParams::natural(0.1);
    let bath = BathSpec::drude(0.2, 100.0);
    let pos = CorrelatorSet::position(params, bath, SeriesControl::VARIANCE).unwrap();
    let mom = CorrelatorSet::momentum(params, bath, SeriesControl::VARIANCE).unwrap();
    for t in [0.5, 2.0, 19.5] {
        let s = -finite_difference_second_derivative(|x| pos.symmetric(x), t, 1e-2).unwrap();
        assert!((s - mom.symmetric(t)).abs() < 1e-6 * mom.variance());
        let a = -finite_difference_second_derivative(|x| pos.antisymmetric(x), t, 1e-2).unwrap();
        assert!((a - mom.antisymmetric(t)).abs() < 1e-6 * mom.variance());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hermitian_symmetry(k0 in -4.0f64..4.0, kf in -4.0f64..4.0, t in 0.1f64..10.0, gamma in 0.0f64..1.0) {
        let set = ohmic(gamma);
        let tol = QuadratureTolerance::default();
        let plus = characteristic_function(&two_point(k0, kf, t), &set, &tol).unwrap();
        let minus = characteristic_function(&two_point(-k0, -kf, t), &set, &tol).unwrap();
        prop_assert!((plus - minus.conj()).norm() < 1e-12);
    }

    #[test]
    fn single_time_is_positive_definite(
        ks in prop::array::uniform4(-3.0f64..3.0),
        re in prop::array::uniform4(-1.0f64..1.0),
        im in prop::array::uniform4(-1.0f64..1.0),
    ) {
        let set = ohmic(0.2);
        let tol = QuadratureTolerance::default();
        let phi = |k: f64| characteristic_function(
            &CharFunctionInput { wavenumbers: vec![k], times: vec![0.0], slit_width: sigma() },
            &set,
            &tol,
        ).unwrap();
        let z: Vec<Complex64> = (0..4).map(|i| Complex64::new(re[i], im[i])).collect();
        let mut form = Complex64::new(0.0, 0.0);
        for a in 0..4 {
            for b in 0..4 {
                form += z[a].conj() * phi(ks[a] - ks[b]) * z[b];
            }
        }
        prop_assert!(form.re >= -1e-12);
        prop_assert!(form.im.abs() < 1e-12);
    }
}
