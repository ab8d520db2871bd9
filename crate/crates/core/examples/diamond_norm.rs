// Diamond distances from the semidefinite program.

use disturbance::linalg::{ComplexMatrix, C64};
use disturbance::quantum::Channel;
use disturbance::sdp::{self, SolverOptions};

pub fn run_example() -> disturbance::Result<()> {
    let opts = SolverOptions::default();
    let id = Channel::identity(2);
    let z = ComplexMatrix::diag(&[1.0, -1.0]);
    let phase = |theta: f64| {
        let mut u = ComplexMatrix::identity(2);
        u[(1, 1)] = C64::from_polar(1.0, theta);
        Channel::unitary(&u)
    };
    println!("Pauli Z vs id:     {:.6}", sdp::diamond_distance(&Channel::unitary(&z)?, &id, &opts)?);
    for theta in [0.1, 0.5, 1.0] {
        // 2 sin(θ/2) for a phase gate
        println!(
            "phase {theta:.1} vs id:   {:.6} (exact {:.6})",
            sdp::diamond_distance(&phase(theta)?, &id, &opts)?,
            2.0 * (theta / 2.0).sin()
        );
    }
    println!("dephasing vs id:   {:.6}", sdp::diamond_distance(&Channel::dephasing(2), &id, &opts)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("diamond norm");
}
