//! The compiled map against dense density-matrix simulation.

use msd_core::catalog::builtin;
use msd_core::dynamics::BetaConvention;
use msd_core::map::evaluate_heterogeneous;
use msd_core::oracle::{oracle_distill, oracle_distill_ordered, oracle_single_flip_probe, FlipClass};
use msd_core::{Bloch, DistillationMap, Evaluation, MeasurementModel};

const SMALL: [&str; 3] = ["4-2-2", "5-1-3", "steane-7-1-3"];
const INPUTS: [Bloch; 5] = [[0.0, 0.0, 0.0], [0.3, 0.2, 0.1], [-0.5, 0.4, 0.6], [0.0, 0.0, 0.95], [0.56, 0.56, 0.0]];

fn max_diff(a: &Evaluation, b: &Evaluation) -> f64 {
    let p = (a.success_probability - b.success_probability).abs();
    a.state.expectations.iter().zip(&b.state.expectations).map(|(x, y)| (x - y).abs()).fold(p, f64::max)
}

#[test]
fn homogeneous_inputs_match() {
    for name in SMALL {
        let code = builtin(name).unwrap();
        let map = DistillationMap::build(&code).unwrap();
        for lambda in [0.0, 0.3, 0.7, 1.0] {
            let model = MeasurementModel::raw_lambda(lambda).unwrap();
            for r in INPUTS {
                let m = map.evaluate(r, lambda).unwrap();
                let o = oracle_distill(&code, &vec![r; code.n], &model).unwrap();
                assert!(max_diff(&m, &o) < 1e-10, "{name} λ={lambda} r={r:?}: {}", max_diff(&m, &o));
            }
        }
    }
}

#[test]
fn heterogeneous_inputs_match() {
    for name in SMALL {
        let code = builtin(name).unwrap();
        let inputs: Vec<Bloch> = (0..code.n)
            .map(|q| {
                let t = q as f64;
                [0.6 * (1.3 * t).cos(), 0.6 * (1.3 * t).sin(), 0.3 - 0.1 * t]
            })
            .collect();
        for lambda in [0.2, 0.9] {
            let model = MeasurementModel::raw_lambda(lambda).unwrap();
            let m = evaluate_heterogeneous(&code, &inputs, lambda, None).unwrap();
            let o = oracle_distill(&code, &inputs, &model).unwrap();
            assert!(max_diff(&m, &o) < 1e-10, "{name} λ={lambda}");
        }
    }
}

#[test]
fn measurement_order_does_not_matter() {
    let code = builtin("steane-7-1-3").unwrap();
    let model = MeasurementModel::raw_lambda(0.6).unwrap();
    let inputs = vec![[0.2, -0.3, 0.5]; 7];
    let forward = oracle_distill(&code, &inputs, &model).unwrap();
    let backward = oracle_distill_ordered(&code, &inputs, &model, &[5, 4, 3, 2, 1, 0]).unwrap();
    assert!(max_diff(&forward, &backward) < 1e-12);
}

#[test]
fn gaussian_strength_enters_as_tanh_beta() {
    let code = builtin("5-1-3").unwrap();
    let map = DistillationMap::build(&code).unwrap();
    let beta = 1.5;
    let model = MeasurementModel::gaussian(beta).unwrap();
    let r = [0.3, 0.5, 0.2];
    let o = oracle_distill(&code, &[r; 5], &model).unwrap();
    let good = map.evaluate(r, BetaConvention::Tanh.lambda(beta).unwrap()).unwrap();
    let bad = map.evaluate(r, BetaConvention::TanhHalfSquared.lambda(beta).unwrap()).unwrap();
    assert!(max_diff(&good, &o) < 1e-10);
    assert!(max_diff(&bad, &o) > 1e-3);
}

#[test]
fn equivalent_models_give_equal_maps() {
    let code = builtin("4-2-2").unwrap();
    let beta: f64 = 0.8;
    let models = [
        MeasurementModel::gaussian(beta).unwrap(),
        MeasurementModel::coefficient_h((beta / 2.0).tanh()).unwrap(),
        MeasurementModel::binary_eta(beta.tanh()).unwrap(),
    ];
    let r = [0.1, 0.7, -0.2];
    let reference = oracle_distill(&code, &[r; 4], &models[0]).unwrap();
    for m in &models[1..] {
        assert!(max_diff(&oracle_distill(&code, &[r; 4], m).unwrap(), &reference) < 1e-12, "{m}");
    }
}

#[test]
fn first_order_flips_of_the_fifteen_qubit_code() {
    // Only Z-type generator flips survive at |T⟩ inputs; in the canonical
    // set four of them act as logical X and the rest as identity.
    let code = builtin("15-1-3-canonical").unwrap();
    let probe = oracle_single_flip_probe(&code, std::f64::consts::FRAC_PI_4, 3.0).unwrap();
    let count = |c: FlipClass| probe.flips.iter().filter(|f| f.class == c).count();
    assert_eq!(count(FlipClass::Vanishing), 4);
    assert_eq!(count(FlipClass::LogicalX), 4);
    assert_eq!(count(FlipClass::Identity), 6);
    assert!(probe.leading_m_y.abs() < 1e-15);
    let expected = 2.0 * (-6f64).exp();
    assert!((probe.leading_m_x - expected).abs() < 1e-9 * expected, "{}", probe.leading_m_x);

    let std = builtin("15-1-3-standard").unwrap();
    let probe = oracle_single_flip_probe(&std, std::f64::consts::FRAC_PI_4, 3.0).unwrap();
    assert_eq!(probe.leading_m_x, 0.0);
}
