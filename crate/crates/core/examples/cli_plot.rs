// Drives the command-line front end in process: a curve CSV plus a gnuplot
// script, written to a temporary directory.

use std::fs;

pub fn run_example() -> disturbance::Result<()> {
    let dir = std::env::temp_dir().join(format!("disturbance-example-{}", std::process::id()));
    fs::create_dir_all(&dir)?;
    let csv = dir.join("diamond.csv");
    let plot = dir.join("diamond.gp");
    let args = [
        "disturbance",
        "curve",
        "--pair",
        "tv-diamond",
        "--m",
        "2,3,5",
        "--points",
        "21",
        "--out",
        csv.to_str().unwrap_or_default(),
        "--emit-plot",
        plot.to_str().unwrap_or_default(),
    ];
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = disturbance::cli::run_from(args, &mut out, &mut err);
    if code != 0 {
        return Err(disturbance::Error::Validation(String::from_utf8_lossy(&err).into()));
    }
    let rows = fs::read_to_string(&csv)?.lines().count() - 1;
    println!("wrote {rows} rows to {}", csv.display());
    print!("{}", fs::read_to_string(&plot)?);
    fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("cli plot");
}
