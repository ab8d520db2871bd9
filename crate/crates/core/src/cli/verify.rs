//! Property suites behind `verify`. Each property collects one excess value
//! per randomized case and passes when the largest excess stays within its
//! slack.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::curves::{self, CurvePair, Grid};
use crate::error::Result;
use crate::family::{
    achiever_from_delta, family_instrument, sym_measures, symmetric_channel, symmetric_povm,
    twirl_channel, twirl_povm, FamilyParams,
};
use crate::linalg::{ComplexMatrix, C64};
use crate::measures;
use crate::quantum::random::{
    random_channel, random_density, random_instrument, random_povm, random_unitary,
};
use crate::quantum::{targets, Channel, Povm};
use crate::sdp::{self, SolverOptions, Status};

use super::Suite;

/// Slack of properties that compare exact values.
pub const EXACT_SLACK: f64 = 1e-7;
/// Slack of properties involving restart-based maximizations.
pub const HEURISTIC_SLACK: f64 = 2e-4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Property {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub passed: bool,
    pub properties: Vec<Property>,
}

impl Report {
    fn new(suite: &str, properties: Vec<Property>) -> Self {
        Self {
            suite: suite.into(),
            passed: properties.iter().all(|p| p.passed),
            properties,
        }
    }
}

/// Passes when every excess is at most `slack`.
fn bounded(name: &str, slack: f64, excess: &[f64]) -> Property {
    let worst = excess.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Property {
        name: name.into(),
        passed: !excess.is_empty() && excess.iter().all(|x| *x <= slack),
        detail: format!("{} cases, largest excess {worst:.3e}, slack {slack:e}", excess.len()),
    }
}

fn flag(name: &str, passed: bool, detail: String) -> Property {
    Property {
        name: name.into(),
        passed,
        detail,
    }
}

/// Transposes per-case rows of excesses into per-property columns.
fn columns<const N: usize>(rows: Vec<Result<[f64; N]>>) -> Result<[Vec<f64>; N]> {
    let mut cols: [Vec<f64>; N] = std::array::from_fn(|_| Vec::new());
    for r in rows {
        for (c, x) in cols.iter_mut().zip(r?) {
            c.push(x);
        }
    }
    Ok(cols)
}

fn case_rng(seed: u64, case: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(case as u64))
}

/// Dimension of case `n`, alternating between 2 and 3.
fn case_dim(n: usize) -> usize {
    2 + n % 2
}

pub fn run_suite(
    suite: Suite,
    samples: usize,
    restarts: usize,
    seed: u64,
    opts: &SolverOptions,
) -> Result<Report> {
    let props = match suite {
        Suite::Twirl => twirl(samples, restarts, seed, opts)?,
        Suite::FuchsVanDeGraaf => fuchs_van_de_graaf(samples, restarts, seed)?,
        Suite::Corz => corz(restarts, seed)?,
        Suite::Axioms => axioms(samples, restarts, seed, opts)?,
        Suite::Curves => curve_properties()?,
        Suite::Sdp => solver(samples, seed, opts)?,
        Suite::All => {
            let mut all = Vec::new();
            for s in [
                Suite::Twirl,
                Suite::FuchsVanDeGraaf,
                Suite::Corz,
                Suite::Axioms,
                Suite::Curves,
                Suite::Sdp,
            ] {
                let r = run_suite(s, samples, restarts, seed, opts)?;
                all.extend(r.properties.into_iter().map(|mut p| {
                    p.name = format!("{}/{}", r.suite, p.name);
                    p
                }));
            }
            all
        }
    };
    Ok(Report::new(suite_name(suite), props))
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Twirl => "twirl",
        Suite::FuchsVanDeGraaf => "fuchs-van-de-graaf",
        Suite::Corz => "corz",
        Suite::Axioms => "axioms",
        Suite::Curves => "curves",
        Suite::Sdp => "sdp",
        Suite::All => "all",
    }
}

/// Twirling a random instrument (m = d, computational-basis target) never
/// increases an error or disturbance measure. The twirled side uses closed
/// forms or exact oracles; the original side uses the general oracles.
pub fn twirl(
    samples: usize,
    restarts: usize,
    seed: u64,
    opts: &SolverOptions,
) -> Result<Vec<Property>> {
    let rows: Vec<Result<[f64; 7]>> = (0..samples)
        .into_par_iter()
        .map(|n| {
            let d = case_dim(n);
            let inst = random_instrument(d, d, &mut case_rng(seed, n));
            let e = targets::computational_basis(d);
            let t = inst.total_channel();
            let ep = inst.povm();
            let sym = twirl_channel(&t)?;
            let closed = sym_measures(&sym);
            let epp = symmetric_povm(d, twirl_povm(&ep)?)?;
            let ts = symmetric_channel(&sym)?;
            let rs = seed.wrapping_add(n as u64);
            Ok([
                measures::delta_tv(&e, &epp)?.value - measures::delta_tv(&e, &ep)?.value,
                measures::delta_linf(&e, &epp)?.value - measures::delta_linf(&e, &ep)?.value,
                closed.delta_trace
                    - measures::trace_norm_disturbance_seeded(&t, restarts, rs)?.value,
                measures::worst_fidelity_seeded(&t, restarts, rs)?.value - closed.f,
                measures::avg_fidelity(&t)?.value - closed.avg_fidelity,
                measures::diamond_distance_with(&ts, opts)?.value
                    - measures::diamond_distance_with(&t, opts)?.value,
                measures::hat_delta_seeded(&ts, restarts, rs)?.value
                    - measures::hat_delta_seeded(&t, restarts, rs)?.value,
            ])
        })
        .collect();
    let [tv, linf, trace, f, avg, dia, hat] = columns(rows)?;
    Ok(vec![
        bounded("delta_tv not increased", EXACT_SLACK, &tv),
        bounded("delta_linf not increased", EXACT_SLACK, &linf),
        bounded("trace-norm disturbance not increased", HEURISTIC_SLACK, &trace),
        bounded("1 - worst fidelity not increased", HEURISTIC_SLACK, &f),
        bounded("1 - average fidelity not increased", EXACT_SLACK, &avg),
        bounded("diamond distance not increased", EXACT_SLACK, &dia),
        bounded("hat-Delta not increased", HEURISTIC_SLACK, &hat),
    ])
}

/// `1 − f ≤ Δ_TV ≤ √(1 − f)` on random channels.
pub fn fuchs_van_de_graaf(samples: usize, restarts: usize, seed: u64) -> Result<Vec<Property>> {
    let rows: Vec<Result<[f64; 2]>> = (0..samples)
        .into_par_iter()
        .map(|n| {
            let t = random_channel(case_dim(n), &mut case_rng(seed, n));
            let rs = seed.wrapping_add(n as u64);
            let f = measures::worst_fidelity_seeded(&t, restarts, rs)?.value;
            let tr = measures::trace_norm_disturbance_seeded(&t, restarts, rs)?.value;
            Ok([(1.0 - f) - tr, tr - (1.0 - f).max(0.0).sqrt()])
        })
        .collect();
    let [lower, upper] = columns(rows)?;
    Ok(vec![
        bounded("1 - f <= trace-norm disturbance", HEURISTIC_SLACK, &lower),
        bounded("trace-norm disturbance <= sqrt(1 - f)", HEURISTIC_SLACK, &upper),
    ])
}

/// The second family parameter is needed for `Δ̂`: at zero error the
/// depolarizing member has `Δ̂ = 0`, the `z = 0` member does not.
pub fn corz(restarts: usize, seed: u64) -> Result<Vec<Property>> {
    let mut props = Vec::new();
    for d in [2usize, 3] {
        let df = d as f64;
        let e = targets::computational_basis(d);
        let full = family_instrument(&FamilyParams::new(d, (df - 1.0) / df, 0.0, 1.0)?)?;
        let tv = measures::delta_tv(&e, &full.povm())?.value;
        let hat = measures::hat_delta_seeded(&full.total_channel(), restarts, seed)?.value;
        props.push(bounded(
            &format!("d={d}: depolarizing member has delta_tv = 0"),
            1e-9,
            &[tv.abs()],
        ));
        props.push(bounded(
            &format!("d={d}: depolarizing member has hat-Delta = 0"),
            1e-6,
            &[hat.abs()],
        ));

        let slice = family_instrument(&achiever_from_delta(d, 0.0)?)?;
        let tv0 = measures::delta_tv(&e, &slice.povm())?.value;
        let hat0 = measures::hat_delta_seeded(&slice.total_channel(), restarts, seed)?.value;
        props.push(bounded(
            &format!("d={d}: z=0 member at zero error has delta_tv = 0"),
            1e-9,
            &[tv0.abs()],
        ));
        let floor = if d == 2 { 0.49 } else { 1e-3 };
        props.push(flag(
            &format!("d={d}: z=0 member at zero error has hat-Delta >= {floor}"),
            hat0 >= floor,
            format!("hat-Delta = {hat0}"),
        ));
    }
    Ok(props)
}

fn mix_povm(l: f64, a: &Povm, b: &Povm) -> Result<Povm> {
    Povm::new(
        a.effects()
            .iter()
            .zip(b.effects())
            .map(|(x, y)| &x.scale(l) + &y.scale(1.0 - l))
            .collect(),
    )
}

fn conj_povm(u: &ComplexMatrix, p: &Povm, perm: &[usize]) -> Result<Povm> {
    let ua = u.adjoint();
    Povm::new(perm.iter().map(|&i| &(&ua * p.effect(i)) * u).collect())
}

/// Unitary `U_π` with `U_π|i⟩ = |π(i)⟩`.
fn permutation_unitary(perm: &[usize]) -> ComplexMatrix {
    let d = perm.len();
    ComplexMatrix::from_fn(d, d, |r, c| {
        if perm[c] == r {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Channel measures in the order used by [`axioms`]: trace-norm
/// disturbance, `1 − f`, `1 − f̄`, diamond distance.
fn channel_measures(t: &Channel, restarts: usize, seed: u64, opts: &SolverOptions) -> Result<[f64; 4]> {
    Ok([
        measures::trace_norm_disturbance_seeded(t, restarts, seed)?.value,
        1.0 - measures::worst_fidelity_seeded(t, restarts, seed)?.value,
        1.0 - measures::avg_fidelity(t)?.value,
        measures::diamond_distance_with(t, opts)?.value,
    ])
}

const CHANNEL_MEASURES: [(&str, f64); 4] = [
    ("trace-norm disturbance", HEURISTIC_SLACK),
    ("1 - worst fidelity", HEURISTIC_SLACK),
    ("1 - average fidelity", EXACT_SLACK),
    ("diamond distance", EXACT_SLACK),
];

/// Convexity of every measure, outcome-permutation and diagonal-unitary
/// invariance of the error measures, and basis independence of the
/// disturbance measures.
pub fn axioms(
    samples: usize,
    restarts: usize,
    seed: u64,
    opts: &SolverOptions,
) -> Result<Vec<Property>> {
    const WEIGHTS: [f64; 3] = [0.25, 0.5, 0.75];
    let rows: Vec<Result<[f64; 15]>> = (0..samples)
        .into_par_iter()
        .map(|n| {
            let d = case_dim(n);
            let rng = &mut case_rng(seed, n);
            let rs = seed.wrapping_add(n as u64);
            let e = targets::computational_basis(d);
            let (pa, pb) = (random_povm(d, d, rng), random_povm(d, d, rng));
            let (ca, cb) = (random_channel(d, rng), random_channel(d, rng));
            let u = random_unitary(d, rng);
            let mut out = [f64::NEG_INFINITY; 15];

            let err = |p: &Povm| -> Result<[f64; 2]> {
                Ok([
                    measures::delta_tv(&e, p)?.value,
                    measures::delta_linf(&e, p)?.value,
                ])
            };
            let (ea, eb) = (err(&pa)?, err(&pb)?);
            let (ma, mb) = (
                channel_measures(&ca, restarts, rs, opts)?,
                channel_measures(&cb, restarts, rs, opts)?,
            );
            for l in WEIGHTS {
                let em = err(&mix_povm(l, &pa, &pb)?)?;
                let cm = Channel::combination(&[(l, &ca), (1.0 - l, &cb)])?;
                let mm = channel_measures(&cm, restarts, rs, opts)?;
                for k in 0..2 {
                    out[k] = out[k].max(em[k] - l * ea[k] - (1.0 - l) * eb[k]);
                }
                for k in 0..4 {
                    out[2 + k] = out[2 + k].max(mm[k] - l * ma[k] - (1.0 - l) * mb[k]);
                }
            }

            let mut perm: Vec<usize> = (0..d).collect();
            perm.rotate_left(1 + n % (d - 1));
            let permuted = conj_povm(&permutation_unitary(&perm), &pa, &perm)?;
            let phases: Vec<f64> = (0..d).map(|i| (i as f64 + 1.0) * 0.7 + n as f64).collect();
            let diag = ComplexMatrix::from_fn(d, d, |r, c| {
                if r == c {
                    C64::from_polar(1.0, phases[r])
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            let identity: Vec<usize> = (0..d).collect();
            let rotated = conj_povm(&diag, &pa, &identity)?;
            let (ep, ed) = (err(&permuted)?, err(&rotated)?);
            for k in 0..2 {
                out[6 + k] = (ep[k] - ea[k]).abs();
                out[8 + k] = (ed[k] - ea[k]).abs();
            }

            let cu = ca.conjugated(&u)?;
            let mu = channel_measures(&cu, restarts, rs, opts)?;
            for k in 0..4 {
                out[10 + k] = (mu[k] - ma[k]).abs();
            }
            let hat = |t: &Channel| measures::hat_delta_seeded(t, restarts, rs).map(|v| v.value);
            out[14] = (hat(&cu)? - hat(&ca)?).abs();
            Ok(out)
        })
        .collect();
    let cols = columns(rows)?;
    let mut props = vec![
        bounded("convexity of delta_tv", 1e-6, &cols[0]),
        bounded("convexity of delta_linf", 1e-6, &cols[1]),
    ];
    for (k, (name, _)) in CHANNEL_MEASURES.iter().enumerate() {
        props.push(bounded(&format!("convexity of {name}"), 1e-6, &cols[2 + k]));
    }
    props.push(bounded("permutation invariance of delta_tv", 1e-9, &cols[6]));
    props.push(bounded("permutation invariance of delta_linf", 1e-9, &cols[7]));
    props.push(bounded("diagonal-unitary invariance of delta_tv", 1e-9, &cols[8]));
    props.push(bounded("diagonal-unitary invariance of delta_linf", 1e-9, &cols[9]));
    for (k, (name, slack)) in CHANNEL_MEASURES.iter().enumerate() {
        props.push(bounded(&format!("basis independence of {name}"), *slack, &cols[10 + k]));
    }
    props.push(bounded("basis independence of hat-Delta", HEURISTIC_SLACK, &cols[14]));
    Ok(props)
}

/// Shape checks of the closed-form curves for `k = 2..=6`.
pub fn curve_properties() -> Result<Vec<Property>> {
    let mut endpoints = Vec::new();
    let mut convexity = Vec::new();
    let mut monotone = Vec::new();
    let mut inverse = Vec::new();
    for pair in CurvePair::ALL {
        for k in 2..=6 {
            let top = 1.0 - 1.0 / k as f64;
            let (lo, hi) = pair.default_range(k);
            endpoints.push((pair.eval(k, lo) - top).abs().max(pair.eval(k, hi).abs()));
            let pts = curves::sweep(pair, k, &Grid::new(lo, hi, 200)?)?;
            for w in pts.windows(3) {
                convexity.push(-(w[0].delta - 2.0 * w[1].delta + w[2].delta));
            }
            for w in pts.windows(2) {
                monotone.push(w[1].delta - w[0].delta);
            }
            for delta in Grid::new(0.0, top, 50)?.values() {
                inverse.push((pair.eval(k, pair.invert(k, delta)) - delta).abs());
            }
        }
    }
    let mut ordering = Vec::new();
    for x in Grid::new(0.0, 0.99, 100)?.values() {
        for m in 2..6 {
            ordering.push(curves::curve_tv_diamond(m, x) - curves::curve_tv_diamond(m + 1, x));
        }
    }
    let mid = curves::curve_tv_diamond(2, 0.5);
    Ok(vec![
        bounded("endpoints (1 - 1/k and 0)", 1e-12, &endpoints),
        bounded("convexity (second differences >= 0)", 1e-9, &convexity),
        bounded("delta non-increasing along the sweep", 0.0, &monotone),
        bounded("inverse reproduces delta", 1e-9, &inverse),
        bounded("diamond curve increases with m", 1e-12, &ordering),
        bounded(
            "diamond curve m=2 at 0.5 is (2 - sqrt 3)/4",
            1e-9,
            &[(mid - (2.0 - 3f64.sqrt()) / 4.0).abs()],
        ),
    ])
}

fn sdp_ok(v: &sdp::LmiSolution, opts: &SolverOptions) -> bool {
    v.solution.status == Status::Optimal && v.solution.relative_gap <= opts.tol
}

/// Generic solver against eigenvalue oracles, plus the basis tradeoff
/// against its closed form.
pub fn solver(samples: usize, seed: u64, opts: &SolverOptions) -> Result<Vec<Property>> {
    let rows: Vec<Result<[f64; 4]>> = (0..samples)
        .into_par_iter()
        .map(|n| {
            let rng = &mut case_rng(seed, n);
            let k = 2 + n % 3;
            let h = random_density(k, rng).matrix() - &random_density(k, rng).matrix().scale(2.0);
            let m = &random_unitary(k, rng) * random_density(k, rng).matrix();
            let lm = sdp::lambda_max_sdp(&h, opts)?;
            let tn = sdp::trace_norm_sdp(&m, opts)?;
            let flag = |ok: bool| if ok { 0.0 } else { 1.0 };
            Ok([
                (lm.value - h.max_eigenvalue()?).abs(),
                (tn.value - m.trace_norm()).abs(),
                flag(sdp_ok(&lm, opts)),
                flag(sdp_ok(&tn, opts)),
            ])
        })
        .collect();
    let [lm, tn, lm_ok, tn_ok] = columns(rows)?;

    let e = targets::computational_basis(2);
    let lambdas = Grid::new(0.0, sdp::lambda_range(&e), 5)?.values();
    let mut basis = Vec::new();
    for s in sdp::tradeoff_sweep(&e, &lambdas, opts) {
        let s = s?;
        basis.push((s.nu - curves::diamond_from_tv(2, s.lambda)).abs());
    }
    Ok(vec![
        bounded("lambda_max program matches eigenvalues", 1e-7, &lm),
        bounded("trace-norm program matches singular values", 1e-7, &tn),
        bounded("lambda_max solves optimal within the gap tolerance", 0.0, &lm_ok),
        bounded("trace-norm solves optimal within the gap tolerance", 0.0, &tn_ok),
        bounded("basis d=2 tradeoff matches the diamond curve", 1e-5, &basis),
    ])
}
