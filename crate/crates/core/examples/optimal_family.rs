// Members of the optimal instrument family evaluated by the general
// measure oracles and placed against the closed-form curves.

use disturbance::curves;
use disturbance::family::{achiever_from_delta, family_instrument};
use disturbance::measures;
use disturbance::quantum::targets;

pub fn run_example() -> disturbance::Result<()> {
    let d = 2;
    let e = targets::computational_basis(d);
    println!("delta   f        curve    Delta_dia  curve");
    for delta in [0.0, 0.1, 0.25, 0.4] {
        let p = achiever_from_delta(d, delta)?;
        let inst = family_instrument(&p)?;
        let t = inst.total_channel();
        let tv = measures::delta_tv(&e, &inst.povm())?.value;
        let f = measures::worst_fidelity(&t, 50)?.value;
        let dia = measures::diamond_distance(&t)?.value;
        println!(
            "{tv:.3}   {f:.6} {:.6} {dia:.6}   {:.6}",
            curves::fidelity_from_tv(d, tv),
            curves::diamond_from_tv(d, tv)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("optimal family");
}
