// The generic interior-point solver on two small programs, and the SDPA
// export of a tradeoff program.

use disturbance::linalg::ComplexMatrix;
use disturbance::quantum::{random, targets};
use disturbance::sdp::{self, SolverOptions};
use rand::SeedableRng;

pub fn run_example() -> disturbance::Result<()> {
    let opts = SolverOptions::default();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let rho = random::random_density(4, &mut rng);
    let h = rho.matrix() - &ComplexMatrix::identity(4).scale(0.25);
    let lm = sdp::lambda_max_sdp(&h, &opts)?;
    println!(
        "lambda_max: sdp {:.10}, eigensolver {:.10}, gap {:.1e}, {} iterations",
        lm.value,
        h.max_eigenvalue()?,
        lm.solution.relative_gap,
        lm.solution.iterations
    );
    let m = &random::random_unitary(3, &mut rng) * random::random_density(3, &mut rng).matrix();
    let tn = sdp::trace_norm_sdp(&m, &opts)?;
    println!("trace norm: sdp {:.10}, svd {:.10}", tn.value, m.trace_norm());

    let program = sdp::tradeoff_program(&targets::qubit_sic(), 0.1)?.program.to_problem()?;
    let text = sdp::to_sdpa(&program);
    println!("SDPA export of the qubit SIC program at lambda = 0.1:");
    for line in text.lines().take(4) {
        let short: String = line.chars().take(72).collect();
        println!("  {short}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("sdp solver");
}
