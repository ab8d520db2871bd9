use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::curves::{self, CurvePair, Grid};
use crate::error::{invalid, Result};
use crate::family::{achiever_from_delta, family_instrument};
use crate::measures;
use crate::quantum::{targets, Instrument, Povm};
use crate::sdp::{self, SolverOptions};

use super::output::{emit, gnuplot, num, Csv, Series};
use super::{
    verify, BuiltinPovm, Command, CurveArgs, FamilyArgs, Outcome, RunConfig, SdpArgs, SicArgs,
    VerifyArgs,
};

pub(crate) fn dispatch(
    config: &RunConfig,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<Outcome> {
    if !(config.tol > 0.0 && config.tol < 1.0) {
        return Err(invalid(format!("solver tolerance {} outside (0, 1)", config.tol)));
    }
    match &config.command {
        Command::Curve(a) => curve(config, a, stdout),
        Command::FamilySweep(a) => family_sweep(config, a, stdout),
        Command::SdpTradeoff(a) => sdp_tradeoff(config, a, stdout, stderr),
        Command::Sic(a) => sic(config, a, stdout),
        Command::Verify(a) => run_verify(config, a, stdout),
    }
}

fn solver_options(config: &RunConfig) -> SolverOptions {
    SolverOptions {
        tol: config.tol,
        ..SolverOptions::default()
    }
}

fn write_plot(config: &RunConfig, xlabel: &str, ylabel: &str, series: &[Series]) -> Result<()> {
    if let (Some(plot), Some(csv)) = (&config.emit_plot, &config.out) {
        fs::write(plot, gnuplot(csv, xlabel, ylabel, series))?;
    }
    Ok(())
}

fn no_plot(config: &RunConfig) -> Result<()> {
    if config.emit_plot.is_some() {
        return Err(invalid("--emit-plot only applies to CSV-producing commands"));
    }
    Ok(())
}

fn linspace(start: f64, stop: f64, points: usize) -> Result<Vec<f64>> {
    Ok(Grid::new(start, stop, points)?.values())
}

fn curve(config: &RunConfig, a: &CurveArgs, stdout: &mut dyn Write) -> Result<Outcome> {
    let (first, second) = match a.pair {
        CurvePair::TvDiamond => (&a.m, &a.d),
        _ => (&a.d, &a.m),
    };
    let ks: Vec<usize> = if !first.is_empty() {
        first.clone()
    } else if !second.is_empty() {
        second.clone()
    } else {
        vec![2]
    };
    let domain = match a.pair {
        CurvePair::TvDiamond => 2.0,
        _ => 1.0,
    };
    let mut csv = Csv::new(&["Delta", "delta", "m", "measure_pair"]);
    for &k in &ks {
        if k < 2 {
            return Err(invalid(format!("curves need k ≥ 2, got {k}")));
        }
        let (lo, hi) = a.pair.default_range(k);
        let grid = Grid::new(a.start.unwrap_or(lo), a.stop.unwrap_or(hi), a.points)?;
        if [grid.start, grid.stop].iter().any(|x| !(0.0..=domain).contains(x)) {
            return Err(invalid(format!(
                "grid [{}, {}] leaves the domain [0, {domain}] of {}",
                grid.start,
                grid.stop,
                a.pair.disturbance_measure()
            )));
        }
        for p in curves::sweep(a.pair, k, &grid)? {
            csv.push(vec![num(p.disturbance), num(p.delta), k.to_string(), a.pair.name().into()]);
        }
    }
    emit(config.out.as_deref(), &csv.render(), stdout)?;
    let label = if a.pair == CurvePair::TvDiamond { "m" } else { "d" };
    let series: Vec<Series> = ks
        .iter()
        .map(|k| Series {
            x: 1,
            y: 2,
            filter: Some((3, k.to_string())),
            title: format!("{label}={k}"),
        })
        .collect();
    write_plot(config, a.pair.disturbance_measure(), "delta_TV", &series)?;
    Ok(Outcome::Done)
}

fn family_sweep(config: &RunConfig, a: &FamilyArgs, stdout: &mut dyn Write) -> Result<Outcome> {
    if a.d < 2 {
        return Err(invalid("family sweeps need d ≥ 2"));
    }
    let top = 1.0 - 1.0 / a.d as f64;
    let deltas = if a.delta.is_empty() {
        linspace(0.0, top, a.points)?
    } else {
        a.delta.clone()
    };
    if let Some(bad) = deltas.iter().find(|x| !(0.0..=top + 1e-12).contains(*x)) {
        return Err(invalid(format!("δ = {bad} outside [0, {top}]")));
    }
    let opts = solver_options(config);
    let e = targets::computational_basis(a.d);
    let rows: Vec<Result<Vec<String>>> = deltas
        .par_iter()
        .map(|&delta| {
            let p = achiever_from_delta(a.d, delta)?;
            let inst = family_instrument(&p)?;
            let t = inst.total_channel();
            let tv = measures::delta_tv(&e, &inst.povm())?.value;
            let f = measures::worst_fidelity_seeded(&t, a.restarts, config.seed)?.value;
            let avg = measures::avg_fidelity(&t)?.value;
            let trace = measures::trace_norm_disturbance_seeded(&t, a.restarts, config.seed)?.value;
            let dia = measures::diamond_distance_with(&t, &opts)?.value;
            Ok([delta, tv, f, avg, trace, dia, p.mu, p.nu].map(num).to_vec())
        })
        .collect();
    let mut csv = Csv::new(&[
        "delta",
        "delta_tv",
        "f",
        "avg_f",
        "Delta_tv",
        "Delta_diamond",
        "mu",
        "nu",
    ]);
    for r in rows {
        csv.push(r?);
    }
    emit(config.out.as_deref(), &csv.render(), stdout)?;
    write_plot(
        config,
        "Delta",
        "delta_TV",
        &[
            Series {
                x: 5,
                y: 2,
                filter: None,
                title: "trace norm".into(),
            },
            Series {
                x: 6,
                y: 2,
                filter: None,
                title: "diamond".into(),
            },
        ],
    )?;
    Ok(Outcome::Done)
}

fn load_povm(a: &SdpArgs) -> Result<Povm> {
    let builtin = <BuiltinPovm as clap::ValueEnum>::from_str(&a.povm, false).ok();
    match builtin {
        Some(BuiltinPovm::Basis) => {
            if a.d < 2 {
                return Err(invalid("basis target needs d ≥ 2"));
            }
            Ok(targets::computational_basis(a.d))
        }
        Some(BuiltinPovm::Sic2) => Ok(targets::qubit_sic()),
        Some(BuiltinPovm::Sic3) => Ok(targets::qutrit_sic()),
        Some(BuiltinPovm::Degenerate) => {
            if a.d < 2 || !a.d.is_multiple_of(2) {
                return Err(invalid("degenerate target needs an even d ≥ 2"));
            }
            Ok(targets::degenerate_von_neumann(a.d / 2))
        }
        None => {
            let text = fs::read_to_string(&a.povm)
                .map_err(|e| invalid(format!("cannot read POVM file '{}': {e}", a.povm)))?;
            let p: Povm = serde_json::from_str(&text)?;
            Ok(p)
        }
    }
}

#[derive(Serialize)]
struct InstrumentDump<'a> {
    lambda: f64,
    nu: f64,
    delta_linf: f64,
    instrument: &'a Instrument,
}

fn sdp_tradeoff(
    config: &RunConfig,
    a: &SdpArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<Outcome> {
    let e = load_povm(a)?;
    let lambdas = if a.lambda.is_empty() {
        linspace(0.0, sdp::lambda_range(&e), a.points)?
    } else {
        a.lambda.clone()
    };
    if let Some(bad) = lambdas.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(invalid(format!("λ = {bad} outside [0, 1]")));
    }
    let opts = solver_options(config);
    let solved = sdp::tradeoff_sweep(&e, &lambdas, &opts)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let mut csv = Csv::new(&["lambda", "nu", "delta_linf", "relative_gap", "iterations"]);
    for s in &solved {
        csv.push(vec![
            num(s.lambda),
            num(s.nu),
            num(s.delta_linf),
            num(s.relative_gap),
            s.iterations.to_string(),
        ]);
    }
    emit(config.out.as_deref(), &csv.render(), stdout)?;

    if let Some(dir) = &a.dump_instruments {
        fs::create_dir_all(dir)?;
        for (i, s) in solved.iter().enumerate() {
            let dump = InstrumentDump {
                lambda: s.lambda,
                nu: s.nu,
                delta_linf: s.delta_linf,
                instrument: &s.instrument,
            };
            fs::write(
                dir.join(format!("instrument_{i:03}.json")),
                serde_json::to_string_pretty(&dump)?,
            )?;
        }
    }
    if let Some(dir) = &a.dump_problem {
        fs::create_dir_all(dir)?;
        for (i, &l) in lambdas.iter().enumerate() {
            let p = sdp::tradeoff_program(&e, l)?.program.to_problem()?;
            fs::write(dir.join(format!("problem_{i:03}.dat-s")), sdp::to_sdpa(&p))?;
        }
    }
    if let Some(path) = &a.heuristic_out {
        heuristic_comparison(&e, a.points.max(2), &opts, path, stderr)?;
    }
    write_plot(
        config,
        "lambda",
        "nu",
        &[Series {
            x: 1,
            y: 2,
            filter: None,
            title: "SDP".into(),
        }],
    )?;
    Ok(Outcome::Done)
}

/// Lüders instruments of `E' = tE + (1−t)·tr(E)/d` against the SDP optimum
/// at the same `λ = δ_l∞(E')`.
fn heuristic_comparison(
    e: &Povm,
    points: usize,
    opts: &SolverOptions,
    path: &Path,
    stderr: &mut dyn Write,
) -> Result<()> {
    let ts = linspace(0.0, 1.0, points)?;
    let rows: Vec<Result<[f64; 4]>> = ts
        .par_iter()
        .map(|&t| {
            let ep = e.mix_with_trivial(t);
            let inst = Instrument::luders(&ep)?;
            let lambda = measures::delta_linf(e, &ep)?.value.min(1.0);
            let nu_h = measures::diamond_distance_with(&inst.total_channel(), opts)?.value;
            let nu_s = sdp::tradeoff_sdp(e, lambda, opts)?.nu;
            Ok([t, lambda, nu_h, nu_s])
        })
        .collect();
    let mut csv = Csv::new(&["t", "lambda", "nu_heuristic", "nu_sdp"]);
    let (mut excess, mut gap) = (f64::NEG_INFINITY, 0.0f64);
    for r in rows {
        let r = r?;
        excess = excess.max(r[3] - r[2]);
        gap = gap.max((r[3] - r[2]).abs());
        csv.push(r.map(num).to_vec());
    }
    fs::write(path, csv.render())?;
    writeln!(
        stderr,
        "heuristic family: max(ν_sdp − ν_heuristic) = {excess:.3e}, max |difference| = {gap:.3e}"
    )?;
    Ok(())
}

fn sic(config: &RunConfig, a: &SicArgs, stdout: &mut dyn Write) -> Result<Outcome> {
    no_plot(config)?;
    let p = targets::sic(a.d)?;
    let mut text = serde_json::to_string_pretty(&p)?;
    text.push('\n');
    emit(config.out.as_deref(), &text, stdout)?;
    Ok(Outcome::Done)
}

fn run_verify(config: &RunConfig, a: &VerifyArgs, stdout: &mut dyn Write) -> Result<Outcome> {
    no_plot(config)?;
    if a.samples == 0 || a.restarts == 0 {
        return Err(invalid("verification needs at least one sample and one restart"));
    }
    let report = verify::run_suite(a.suite, a.samples, a.restarts, config.seed, &solver_options(config))?;
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    emit(config.out.as_deref(), &text, stdout)?;
    Ok(Outcome::Report(report))
}
