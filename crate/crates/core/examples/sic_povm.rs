// Qubit and qutrit SIC POVMs: completeness and equal pairwise overlaps.

use disturbance::linalg::ComplexMatrix;
use disturbance::quantum::targets;

pub fn run_example() -> disturbance::Result<()> {
    for d in [2, 3] {
        let p = targets::sic(d)?;
        let mut sum = ComplexMatrix::zeros(d, d);
        for e in p.effects() {
            sum += e;
        }
        let defect = (&sum - &ComplexMatrix::identity(d)).max_abs();
        let proj: Vec<ComplexMatrix> = p.effects().iter().map(|e| e.scale(d as f64)).collect();
        let mut overlaps = Vec::new();
        for i in 0..proj.len() {
            for j in i + 1..proj.len() {
                overlaps.push((&proj[i] * &proj[j]).trace().re);
            }
        }
        let (lo, hi) = overlaps
            .iter()
            .fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
        println!(
            "d={d}: {} effects, |sum - 1| = {defect:.1e}, overlaps in [{lo:.12}, {hi:.12}], 1/(d+1) = {:.12}",
            p.outcomes(),
            1.0 / (d as f64 + 1.0)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("sic povm");
}
