use disturbance::quantum::targets;
use disturbance::sdp::{tradeoff_dims, tradeoff_program};

#[test]
fn packed_sizes() {
    assert_eq!(tradeoff_dims(3, 9), (183, 101));
    assert_eq!(tradeoff_dims(2, 2), (40, 18));
    assert_eq!(tradeoff_dims(1, 1), (11, 5));
}

#[test]
fn assembled_program_matches_packed_sizes() {
    for (e, lambda) in [
        (targets::qutrit_sic(), 0.1),
        (targets::qubit_sic(), 0.05),
        (targets::computational_basis(3), 0.2),
        (targets::degenerate_von_neumann(2), 0.3),
    ] {
        let (blocks, params) = tradeoff_dims(e.dim(), e.outcomes());
        let tp = tradeoff_program(&e, lambda).unwrap();
        assert_eq!(tp.program.block_dims().iter().sum::<usize>(), blocks);
        assert_eq!(tp.program.variable_dims().iter().sum::<usize>(), params);
    }
}

#[test]
fn zero_lambda_keeps_outer_sizes() {
    // the J_i ⪰ 0 blocks shrink to the face of tr₁J_i = E_iᵀ; the rest does not
    let e = targets::qutrit_sic();
    let tp = tradeoff_program(&e, 0.0).unwrap();
    let (blocks, params) = tradeoff_dims(3, 9);
    assert_eq!(tp.program.variable_dims().iter().sum::<usize>(), params);
    assert_eq!(tp.program.block_dims().iter().sum::<usize>(), blocks - 9 * (9 - 3));
}

#[test]
fn rejects_out_of_range_lambda() {
    let e = targets::computational_basis(2);
    assert!(tradeoff_program(&e, -0.1).is_err());
    assert!(tradeoff_program(&e, 1.5).is_err());
}
