// Error measures of a noisy POVM and disturbance measures of common
// channels.

use disturbance::measures;
use disturbance::quantum::{targets, Channel};

pub fn run_example() -> disturbance::Result<()> {
    let e = targets::computational_basis(3);
    let noisy = e.mix_with_trivial(0.8);
    let tv = measures::delta_tv(&e, &noisy)?;
    let linf = measures::delta_linf(&e, &noisy)?;
    println!("noisy basis: delta_tv = {:.4} ({:?})", tv.value, tv.method);
    println!("             delta_linf = {:.4}", linf.value);

    for (name, t) in [
        ("identity", Channel::identity(2)),
        ("dephasing", Channel::dephasing(2)),
        ("depolarizing", Channel::depolarizing(2)),
    ] {
        let f = measures::worst_fidelity(&t, 20)?;
        let avg = measures::avg_fidelity(&t)?;
        let tr = measures::trace_norm_disturbance(&t, 20)?;
        let hat = measures::hat_delta(&t, 20)?;
        let dia = measures::diamond_distance(&t)?;
        println!(
            "{name:<12} f={:.4} avg={:.4} trace={:.4} hat={:.4} diamond={:.4}",
            f.value, avg.value, tr.value, hat.value, dia.value
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("measures");
}
