// The tradeoff program for a computational-basis target against the
// closed-form diamond curve.

use disturbance::curves;
use disturbance::quantum::targets;
use disturbance::sdp::{self, SolverOptions};

pub fn run_example() -> disturbance::Result<()> {
    let d = 2;
    let e = targets::computational_basis(d);
    let opts = SolverOptions::default();
    let lambdas = [0.0, 0.1, 0.25, 0.4, 0.5];
    println!("lambda  nu        closed form  iterations");
    for s in sdp::tradeoff_sweep(&e, &lambdas, &opts) {
        let s = s?;
        println!(
            "{:.2}    {:.7} {:.7}    {}",
            s.lambda,
            s.nu,
            curves::diamond_from_tv(d, s.lambda),
            s.iterations
        );
    }
    let (blocks, params) = sdp::tradeoff_dims(d, d);
    println!("packed program size for d=m={d}: {blocks} x {params}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("sdp tradeoff");
}
