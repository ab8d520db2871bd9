// The unit cone of family parameters, and why the second parameter `z`
// is needed: at zero error only `z > 0` reaches zero `hat-Delta`.

use disturbance::family::{
    achiever_from_delta, cone_to_marginals, family_instrument, ConePoint, FamilyParams,
};
use disturbance::measures;

pub fn run_example() -> disturbance::Result<()> {
    let d = 2;
    for (x, y, z) in [(1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (-1.0, 0.0, 0.0), (0.0, 0.0, 1.0)] {
        let m = cone_to_marginals(&ConePoint::new(x, y, z)?, d)?;
        println!(
            "cone ({x:+.1}, {y:+.1}, {z:.1}): alpha1={:.3} beta1={:+.3} a2={:.3} delta_tv={:.3}",
            m.alpha1, m.beta1, m.a2, m.delta_tv
        );
    }

    let lueders = family_instrument(&achiever_from_delta(d, 0.0)?)?;
    let depol = family_instrument(&FamilyParams::new(d, 0.5, 0.0, 1.0)?)?;
    for (name, inst) in [("z = 0  ", &lueders), ("z = 1/2", &depol)] {
        let hat = measures::hat_delta(&inst.total_channel(), 50)?.value;
        println!("zero-error member with {name}: hat-Delta = {hat:.4}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("cone");
}
