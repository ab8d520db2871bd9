use disturbance::linalg::ComplexMatrix;
use disturbance::measures::{self, Certificate, Method};
use disturbance::quantum::random::{random_channel, random_density, random_povm, random_unitary};
use disturbance::quantum::{targets, Channel, Povm};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const R: usize = 40;

fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
}

fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::diag(&[1.0, -1.0])
}

fn uniform(d: usize) -> Povm {
    let e = ComplexMatrix::identity(d).scale(1.0 / d as f64);
    Povm::new(vec![e; d]).unwrap()
}

fn symmetric_povm(d: usize, a2: f64) -> Povm {
    disturbance::family::symmetric_povm(d, a2).unwrap()
}

#[test]
fn delta_tv_examples() {
    let e = targets::computational_basis(2);
    assert!(measures::delta_tv(&e, &e).unwrap().value.abs() < 1e-15);
    let v = measures::delta_tv(&e, &uniform(2)).unwrap();
    assert!((v.value - 0.5).abs() < 1e-12);
    assert_eq!(v.method, Method::SignEnumeration);
    let v = measures::delta_tv(&e, &symmetric_povm(2, 0.4)).unwrap();
    assert!((v.value - 0.2).abs() < 1e-12);
}

#[test]
fn delta_tv_certificate_attains_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let e = random_povm(4, 3, &mut rng);
        let ep = random_povm(4, 3, &mut rng);
        let v = measures::delta_tv(&e, &ep).unwrap();
        let Some(Certificate::Signs { signs, state }) = v.certificate else {
            panic!("missing certificate");
        };
        let attained: f64 = (0..4)
            .map(|i| {
                let diff = ep.effect(i) - e.effect(i);
                signs[i] as f64 * diff.expectation(&state)
            })
            .sum::<f64>()
            / 2.0;
        assert!((attained - v.value).abs() < 1e-10);
    }
}

#[test]
fn delta_tv_dominates_sampled_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let e = random_povm(3, 2, &mut rng);
    let ep = random_povm(3, 2, &mut rng);
    let v = measures::delta_tv(&e, &ep).unwrap().value;
    for _ in 0..10_000 {
        let rho = random_density(2, &mut rng);
        let p = e.probabilities(rho.matrix());
        let q = ep.probabilities(rho.matrix());
        let tv: f64 = p.iter().zip(&q).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0;
        assert!(v >= tv - 1e-9);
    }
}

#[test]
fn delta_tv_refuses_huge_outcome_counts() {
    let d = 1;
    let e = Povm::new(
        (0..25)
            .map(|_| ComplexMatrix::identity(d).scale(1.0 / 25.0))
            .collect(),
    )
    .unwrap();
    assert!(measures::delta_tv(&e, &e).is_err());
}

#[test]
fn delta_linf_examples() {
    let e = targets::computational_basis(2);
    assert!(measures::delta_linf(&e, &e).unwrap().value.abs() < 1e-15);
    assert!((measures::delta_linf(&e, &uniform(2)).unwrap().value - 0.5).abs() < 1e-12);
    assert!((measures::delta_linf(&e, &symmetric_povm(2, 0.4)).unwrap().value - 0.2).abs() < 1e-12);
}

#[test]
fn worst_fidelity_examples() {
    let v = measures::worst_fidelity(&Channel::identity(2), R).unwrap();
    assert!((v.value - 1.0).abs() < 1e-9);
    assert_eq!(v.method, Method::HeuristicRestarts { restarts: R });
    let v = measures::worst_fidelity(&Channel::depolarizing(2), R).unwrap();
    assert!((v.value - 0.5).abs() < 1e-9);
    let v = measures::worst_fidelity(&Channel::dephasing(2), R).unwrap();
    assert!((v.value - 0.5).abs() < 1e-6);
    assert!(measures::worst_fidelity(&Channel::identity(2), 0).is_err());
}

#[test]
fn avg_fidelity_examples() {
    assert!((measures::avg_fidelity(&Channel::identity(3)).unwrap().value - 1.0).abs() < 1e-12);
    assert!((measures::avg_fidelity(&Channel::depolarizing(2)).unwrap().value - 0.5).abs() < 1e-12);
    assert!(
        (measures::avg_fidelity(&Channel::dephasing(2)).unwrap().value - 2.0 / 3.0).abs() < 1e-12
    );
}

#[test]
fn avg_fidelity_matches_haar_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let t = random_channel(2, &mut rng);
    let exact = measures::avg_fidelity(&t).unwrap().value;
    let n = 20_000;
    let mean: f64 = (0..n)
        .map(|_| {
            let psi = disturbance::quantum::random::random_pure(2, &mut rng);
            t.apply_matrix(&ComplexMatrix::projector(&psi)).expectation(&psi)
        })
        .sum::<f64>()
        / n as f64;
    assert!((mean - exact).abs() < 5e-3, "{mean} vs {exact}");
}

#[test]
fn trace_norm_disturbance_examples() {
    assert!(measures::trace_norm_disturbance(&Channel::identity(2), R).unwrap().value < 1e-12);
    let v = measures::trace_norm_disturbance(&Channel::dephasing(2), R).unwrap();
    assert!((v.value - 0.5).abs() < 1e-9);
    let v = measures::trace_norm_disturbance(&Channel::unitary(&pauli_x()).unwrap(), R).unwrap();
    assert!((v.value - 1.0).abs() < 1e-9);
}

#[test]
fn hat_delta_examples() {
    // ⟨ψ|ψψ*|ψ⟩ = 1 for every ψ
    assert!(measures::hat_delta(&Channel::identity(2), R).unwrap().value < 1e-9);
    assert!(measures::hat_delta(&Channel::depolarizing(3), R).unwrap().value < 1e-9);
    assert!((measures::hat_delta(&Channel::dephasing(2), R).unwrap().value - 0.5).abs() < 1e-6);
}

#[test]
fn diamond_distance_examples() {
    assert!(measures::diamond_distance(&Channel::identity(2)).unwrap().value < 1e-7);
    let v = measures::diamond_distance(&Channel::dephasing(2)).unwrap();
    assert!((v.value - 1.0).abs() < 1e-7);
    assert_eq!(v.method, Method::Sdp);
    let v = measures::diamond_distance(&Channel::unitary(&pauli_z()).unwrap()).unwrap();
    assert!((v.value - 2.0).abs() < 1e-7);
}

#[test]
fn heuristics_are_reproducible_for_a_seed() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let t = random_channel(3, &mut rng);
    let a = measures::worst_fidelity_seeded(&t, 16, 42).unwrap();
    let b = measures::worst_fidelity_seeded(&t, 16, 42).unwrap();
    assert_eq!(a, b);
}

#[test]
fn fuchs_van_de_graaf() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for k in 0..50 {
        let d = 2 + k % 2;
        let t = random_channel(d, &mut rng);
        let f = measures::worst_fidelity(&t, R).unwrap().value;
        let tv = measures::trace_norm_disturbance(&t, R).unwrap().value;
        assert!(1.0 - f <= tv + 2e-4, "1 - f = {} > Δ_TV = {tv}", 1.0 - f);
        assert!(tv <= (1.0 - f).sqrt() + 2e-4);
    }
}

#[test]
fn diamond_dominates_twice_trace_disturbance() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..5 {
        let t = random_channel(2, &mut rng);
        let tv = measures::trace_norm_disturbance(&t, R).unwrap().value;
        let dia = measures::diamond_distance(&t).unwrap().value;
        assert!(2.0 * tv <= dia + 1e-6 && dia <= 2.0 + 1e-9);
    }
}

#[test]
fn unitary_covariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..5 {
        let t = random_channel(2, &mut rng);
        let u = random_unitary(2, &mut rng);
        let tu = t.conjugated(&u).unwrap();
        let pairs = [
            (
                measures::worst_fidelity(&t, R).unwrap().value,
                measures::worst_fidelity(&tu, R).unwrap().value,
                2e-4,
            ),
            (
                measures::avg_fidelity(&t).unwrap().value,
                measures::avg_fidelity(&tu).unwrap().value,
                1e-9,
            ),
            (
                measures::trace_norm_disturbance(&t, R).unwrap().value,
                measures::trace_norm_disturbance(&tu, R).unwrap().value,
                2e-4,
            ),
            (
                measures::hat_delta(&t, R).unwrap().value,
                measures::hat_delta(&tu, R).unwrap().value,
                2e-4,
            ),
            (
                measures::diamond_distance(&t).unwrap().value,
                measures::diamond_distance(&tu).unwrap().value,
                1e-6,
            ),
        ];
        for (a, b, tol) in pairs {
            assert!((a - b).abs() <= tol, "{a} vs {b}");
        }
    }
}

#[test]
fn shape_mismatch_is_rejected() {
    let e2 = targets::computational_basis(2);
    let e3 = targets::computational_basis(3);
    assert!(measures::delta_tv(&e2, &e3).is_err());
    assert!(measures::delta_linf(&e2, &e3).is_err());
}
