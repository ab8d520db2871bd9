//! Every example builds and runs to completion.

mod cli_plot {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/cli_plot.rs"));
}

mod closed_form_curves {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/closed_form_curves.rs"));
}

mod cone {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/cone.rs"));
}

mod diamond_norm {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/diamond_norm.rs"));
}

mod measures {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/measures.rs"));
}

mod optimal_family {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/optimal_family.rs"));
}

mod sdp_solver {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/sdp_solver.rs"));
}

mod sdp_tradeoff {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/sdp_tradeoff.rs"));
}

mod sic_povm {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/sic_povm.rs"));
}

mod twirl {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/twirl.rs"));
}

#[test]
fn example_cli_plot() {
    cli_plot::run_example().expect("cli_plot example");
}

#[test]
fn example_closed_form_curves() {
    closed_form_curves::run_example().expect("closed_form_curves example");
}

#[test]
fn example_cone() {
    cone::run_example().expect("cone example");
}

#[test]
fn example_diamond_norm() {
    diamond_norm::run_example().expect("diamond_norm example");
}

#[test]
fn example_measures() {
    measures::run_example().expect("measures example");
}

#[test]
fn example_optimal_family() {
    optimal_family::run_example().expect("optimal_family example");
}

#[test]
fn example_sdp_solver() {
    sdp_solver::run_example().expect("sdp_solver example");
}

#[test]
fn example_sdp_tradeoff() {
    sdp_tradeoff::run_example().expect("sdp_tradeoff example");
}

#[test]
fn example_sic_povm() {
    sic_povm::run_example().expect("sic_povm example");
}

#[test]
fn example_twirl() {
    twirl::run_example().expect("twirl example");
}
