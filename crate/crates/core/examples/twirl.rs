// Twirling a random instrument into a symmetric one; no error or
// disturbance measure increases.

use disturbance::family::{sym_measures, symmetric_povm, twirl_channel, twirl_povm};
use disturbance::measures;
use disturbance::quantum::{random, targets};
use rand::SeedableRng;

pub fn run_example() -> disturbance::Result<()> {
    let d = 3;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let inst = random::random_instrument(d, d, &mut rng);
    let e = targets::computational_basis(d);
    let t = inst.total_channel();

    let sym = twirl_channel(&t)?;
    let closed = sym_measures(&sym);
    let twirled_povm = symmetric_povm(d, twirl_povm(&inst.povm())?)?;
    println!(
        "symmetric part: alpha={:.4} beta={:.4} gamma={:.4}",
        sym.alpha, sym.beta, sym.gamma
    );
    println!(
        "delta_tv: {:.4} -> {:.4}",
        measures::delta_tv(&e, &inst.povm())?.value,
        measures::delta_tv(&e, &twirled_povm)?.value
    );
    println!(
        "1 - f:    {:.4} -> {:.4}",
        1.0 - measures::worst_fidelity(&t, 50)?.value,
        1.0 - closed.f
    );
    println!(
        "avg f:    {:.4} -> {:.4}",
        measures::avg_fidelity(&t)?.value,
        closed.avg_fidelity
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("twirl");
}
