// Optimal error-disturbance curves in closed form, and their inverses.

use disturbance::curves::{self, CurvePair, Grid};

pub fn run_example() -> disturbance::Result<()> {
    for m in [2, 3, 5] {
        let pts = curves::sweep(CurvePair::TvDiamond, m, &Grid::new(0.0, 2.0, 5)?)?;
        let row: Vec<String> = pts
            .iter()
            .map(|p| format!("{:.2}->{:.4}", p.disturbance, p.delta))
            .collect();
        println!("m={m}: {}", row.join("  "));
    }

    let d = 3;
    let delta = 0.2;
    println!("d={d}, delta_tv={delta}:");
    for pair in CurvePair::ALL {
        let x = pair.invert(d, delta);
        println!(
            "  best {:<14} {x:.6} (curve gives back {:.6})",
            pair.disturbance_measure(),
            pair.eval(d, x)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("closed-form curves");
}
