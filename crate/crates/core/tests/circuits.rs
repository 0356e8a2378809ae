use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gbl_core::circuit::{channel_matrix, enumerate_branches, reduce_to_data, run, run_exact, Channel, Circuit, Input};
use gbl_core::gates::{sum_matrix, sum_protocol};
use gbl_core::{Cyclotomic, Error, Matrix};

fn circuit(json: serde_json::Value) -> Circuit {
    serde_json::from_value(json).unwrap()
}

fn qutrit(instructions: serde_json::Value) -> Circuit {
    circuit(serde_json::json!({
        "schema": "gbl/1",
        "registers": [{"name": "q", "dim": 3, "boundary": "e"}],
        "instructions": instructions,
    }))
}

fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// The data part of a full register state with the ancilla (last register) in a basis state.
fn data_part(full: &[[f64; 2]]) -> Vec<Complex64> {
    let amps: Vec<Complex64> = full.iter().map(|z| Complex64::new(z[0], z[1])).collect();
    (0..9).map(|k| (0..3).map(|anc| amps[3 * k + anc]).sum()).collect()
}

#[test]
fn sum_protocol_on_random_superpositions() {
    let c = sum_protocol(true);
    let sum = sum_matrix().to_complex();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..20 {
        let input = random_state(&mut rng, 9);
        let want = &sum * nalgebra::DVector::from_vec(input.clone());
        let record = run(&c, &Input::Amplitudes(input), 30, trial, true).unwrap();
        let mut outcomes = std::collections::BTreeSet::new();
        for shot in &record.shots {
            outcomes.insert(shot.outcomes["j"]);
            let got = data_part(shot.final_state.as_ref().unwrap());
            for k in 0..9 {
                assert!((got[k] - want[k]).norm() < 1e-10, "trial {trial} shot {}", shot.shot);
            }
        }
        assert_eq!(outcomes.len(), 3, "every ancilla outcome occurs");
    }
}

#[test]
fn sum_protocol_on_basis_inputs() {
    let record = run(&sum_protocol(true), &Input::Basis(vec![2, 1]), 100, 42, false).unwrap();
    assert_eq!(record.shots.len(), 100);
    for shot in &record.shots {
        let out = shot.basis_out.as_ref().unwrap();
        assert_eq!(&out[..2], &[2, 0]);
        assert_eq!(out[2] as u32, shot.outcomes["j"]);
    }
    for c in 0..3 {
        let branches = enumerate_branches(&sum_protocol(true), &Input::Basis(vec![0, c])).unwrap();
        assert_eq!(branches.len(), 3);
    }
}

#[test]
fn identity_input_is_fixed_in_every_branch() {
    let c = sum_protocol(true);
    for b in enumerate_branches(&c, &Input::Basis(vec![0, 0])).unwrap() {
        let data = reduce_to_data(&c, &b.state).unwrap();
        assert!(data.iter().skip(1).all(Cyclotomic::is_zero));
        assert!(!data[0].is_zero());
    }
}

#[test]
fn missing_correction_shifts_the_target() {
    let c = sum_protocol(false);
    for b in enumerate_branches(&c, &Input::Basis(vec![1, 1])).unwrap() {
        let j = b.outcomes[0].1 as usize;
        let data = reduce_to_data(&c, &b.state).unwrap();
        let k = data.iter().position(|x| !x.is_zero()).unwrap();
        assert_eq!(k, 3 + (2 + 3 - j) % 3);
    }
    assert!(matches!(channel_matrix(&c).unwrap(), Channel::NonUnitary { .. }));
}

#[test]
fn norm_is_kept_over_many_shots() {
    let c = sum_protocol(true);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let input = random_state(&mut rng, 9);
    let record = run(&c, &Input::Amplitudes(input), 1000, 99, true).unwrap();
    for shot in &record.shots {
        let norm: f64 = shot.final_state.as_ref().unwrap().iter().map(|z| z[0] * z[0] + z[1] * z[1]).sum();
        assert!((norm - 1.0).abs() < 1e-10);
        for probs in &shot.branch_probs {
            assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn runs_are_reproducible_from_the_seed() {
    let c = sum_protocol(true);
    let input = Input::Amplitudes(random_state(&mut ChaCha8Rng::seed_from_u64(1), 9));
    let a = serde_json::to_string(&run(&c, &input, 200, 5, true).unwrap()).unwrap();
    let b = serde_json::to_string(&run(&c, &input, 200, 5, true).unwrap()).unwrap();
    let other = serde_json::to_string(&run(&c, &input, 200, 6, true).unwrap()).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, other);
}

#[test]
fn exact_and_float_paths_agree() {
    let c = qutrit(serde_json::json!([
        {"gate": "H3", "on": ["q"]},
        {"gate": "T3", "on": ["q"]},
        {"gate": "H3", "on": ["q"], "pow": 3}
    ]));
    let exact = run_exact(&c, &Input::Basis(vec![1]), 0).unwrap();
    let float = run(&c, &Input::Basis(vec![1]), 1, 0, true).unwrap();
    for (x, z) in exact.state.iter().zip(float.shots[0].final_state.as_ref().unwrap()) {
        assert!((x.to_complex() - Complex64::new(z[0], z[1])).norm() < 1e-10);
    }
}

#[test]
fn small_circuits() {
    let empty = qutrit(serde_json::json!([]));
    let record = run(&empty, &Input::Basis(vec![2]), 1, 0, false).unwrap();
    assert_eq!(record.shots[0].basis_out, Some(vec![2]));

    let x = qutrit(serde_json::json!([{"gate": "X3", "on": ["q"]}]));
    let record = run(&x, &Input::Basis(vec![0]), 1, 0, false).unwrap();
    assert_eq!(record.shots[0].basis_out, Some(vec![1]));

    let h4 = qutrit(serde_json::json!([{"gate": "H3", "on": ["q"], "pow": 4}]));
    assert_eq!(channel_matrix(&h4).unwrap(), Channel::Unitary(Matrix::identity(3)));

    let measured = qutrit(serde_json::json!([
        {"gate": "H3", "on": ["q"]},
        {"measure": "q", "bind": "k"}
    ]));
    assert!(matches!(channel_matrix(&measured).unwrap(), Channel::NonUnitary { .. }));
}

#[test]
fn validation_reports_the_first_bad_instruction() {
    let bad = qutrit(serde_json::json!([
        {"gate": "X3", "on": ["q"]},
        {"if": "k", "eq": 1, "gate": "X3", "on": ["q"]},
        {"gate": "NOPE", "on": ["q"]}
    ]));
    match bad.validate() {
        Err(Error::CircuitValidation { index, .. }) => assert_eq!(index, 1),
        other => panic!("{other:?}"),
    }
    let same_type = circuit(serde_json::json!({
        "schema": "gbl/1",
        "registers": [
            {"name": "a", "dim": 3, "boundary": "e"},
            {"name": "b", "dim": 3, "boundary": "e"}
        ],
        "instructions": [{"gate": "SUM3", "on": ["a", "b"]}]
    }));
    assert!(matches!(same_type.validate(), Err(Error::CircuitValidation { index: 0, .. })));
}
