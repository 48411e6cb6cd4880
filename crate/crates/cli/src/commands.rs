//! The five subcommands.

use std::f64::consts::PI;

use anyhow::{Context, Result};
use epr_geometry::amplitude::{sampled_amplitude, static_phase_gradient, Reduction};
use epr_geometry::geometry::{
    alpha, bh_metric, conformal_metric_exp, find_horizons, horizons_numeric, omega_sq_exp, omega_sq_linear, validity_window,
    y_to_x, z_to_y,
};
use epr_geometry::quantum::{effective_mass_sq, quantum_potential, validity_margin, QMode};
use epr_geometry::static_model::{compare_g11, derive_g, find_metric_singularities, valid_intervals, Contact};
use epr_geometry::trajectory::{epr_drift, integrate_pair};
use epr_geometry::verify::{
    check_airy_ode, check_chain, check_continuity, check_hamilton_jacobi, check_metric_chain, check_nonlinear, check_q_slope,
    convergence_order, Convergence,
};
use epr_geometry::{Amplitude, Grid, Interval, Params};

use crate::args::{RunConfig, TrajectoryArgs};
use crate::output::{Plot, RunOutput, Table};

pub const AIRY_WINDOW: (f64, f64) = (-2.0, 2.0);
pub const STATIC_WINDOW: (f64, f64) = (0.0, 2.0 * PI);
/// Step sizes for the observed order of the sampled Airy check.
pub const CONVERGENCE_STEPS: [f64; 3] = [0.1, 0.05, 0.025];

fn or_nan(r: epr_geometry::Result<f64>) -> f64 {
    r.unwrap_or(f64::NAN)
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let g = Grid::new(lo, hi, n);
    (0..n).map(move |i| g.point(i))
}

/// Samples the exact Airy amplitude on the nodes of `grid`, padded by up to
/// four nodes each side without crossing the amplitude's first zero.
fn sampled_airy(exact: &Amplitude, grid: &Grid) -> Result<Amplitude> {
    let h = grid.spacing();
    let room = exact.domain().map_or(f64::INFINITY, |d| (d.hi - grid.hi) / h);
    let upper = (room.ceil() as usize).saturating_sub(1).min(4);
    let lo = grid.lo - 4.0 * h;
    let nodes: Vec<f64> = (0..grid.n + 4 + upper).map(|i| lo + h * i as f64).collect();
    let values = nodes.iter().map(|z| exact.value_at(*z)).collect::<epr_geometry::Result<Vec<_>>>()?;
    Ok(sampled_amplitude(&nodes, &values, Reduction::FirstParticle)?)
}

/// Half-width of the `x` range shown for `−α dt² + dx²/α`.
fn bh_extent(p: &Params) -> f64 {
    let two_m = 2.0 * p.big_m;
    let center = ((1.0 + p.c_const) / two_m).abs();
    let horizon = (p.c_const / two_m).abs();
    2.0 * center.max(horizon).max(1.0)
}

/// Residual checks of the Airy model on `[lo, hi]` with `n` points.
fn airy_checks(p: &Params, window: (f64, f64), n: usize, label: &str, out: &mut RunOutput) -> Result<()> {
    let ampl = Amplitude::airy(p)?;
    let q = quantum_potential(&ampl, QMode::EprReduced, p);
    let iv = Interval::new(window.0, window.1);
    let grid = Grid::clipped(iv, ampl.domain(), n)?;
    out.report(label, check_airy_ode(&ampl, p, &grid)?);
    match sampled_airy(&ampl, &grid) {
        Ok(s) => out.report(&format!("{label}/sampled"), check_airy_ode(&s, p, &grid)?),
        Err(e) => out.note(&format!("{label}/sampled"), format!("not sampled: {e}")),
    }
    out.report(label, check_q_slope(&q, p, &grid)?);
    if p.big_m > 0.0 {
        let z_to_x = z_to_y(&q, p, iv)?.then(&y_to_x(p)?)?;
        let (a, b) = (z_to_x.forward(grid.lo)?, z_to_x.forward(grid.hi)?);
        out.report(label, check_metric_chain(&q, p, iv, &Grid::new(a.min(b), a.max(b), n))?);
    }
    Ok(())
}

fn horizon_tables(p: &Params, cfg: &RunConfig, lo: f64, hi: f64, out: &mut RunOutput) -> Result<()> {
    let hs = find_horizons(p)?;
    let window = validity_window(p, cfg.threshold).ok();
    let numeric = horizons_numeric(p, Interval::new(lo, hi));
    let mut t = Table::new("horizons", &["analytic", "numeric", "difference"]);
    for h in &hs.locations {
        let nearest = numeric.iter().copied().min_by(|a, b| (a - h).abs().total_cmp(&(b - h).abs())).unwrap_or(f64::NAN);
        t.push(vec![*h, nearest, (nearest - h).abs()]);
    }
    out.tables.push(t);
    let mut r = Table::new("regions", &["lo", "hi", "timelike"]);
    for (iv, kind) in &hs.regions {
        r.push(vec![iv.lo, iv.hi, flag(matches!(kind, epr_geometry::geometry::Region::Timelike))]);
    }
    out.tables.push(r);
    out.note("horizons", &hs);
    match &window {
        Some(w) => {
            out.note("validity_window", w);
            out.note("validity_bounds", [w.bounds().lo, w.bounds().hi]);
        }
        None => out.note("validity_window", "undefined for M <= 0"),
    }

    let metric = bh_metric(p);
    let mut m = Table::new("bh_metric", &["x", "g_tt", "g_xx", "alpha", "in_validity_window"]);
    for x in linspace(lo, hi, cfg.grid_n) {
        let in_w = window.map_or(f64::NAN, |w| flag(w.contains(x)));
        m.push(vec![x, or_nan(metric.g_tt(x)), or_nan(metric.g_xx(x)), alpha(p, x), in_w]);
    }
    out.plots.extend(Plot::from_table(&m, "bh_metric", "alpha(x)", "x", &["alpha"]));
    out.tables.push(m);
    Ok(())
}

pub fn airy_example(cfg: &RunConfig) -> Result<RunOutput> {
    let p = cfg.params;
    let (lo, hi) = cfg.window(AIRY_WINDOW)?;
    let ampl = Amplitude::airy(&p).context("Airy amplitude")?;
    let q = quantum_potential(&ampl, QMode::EprReduced, &p);
    let mut out = RunOutput::default();

    let (lin, exp) = (omega_sq_linear(&q, &p), omega_sq_exp(&q, &p));
    let mut fields = Table::new(
        "fields",
        &["z", "r", "q", "omega_sq_linear", "omega_sq_exp", "margin", "mass_sq", "tachyonic", "within_threshold"],
    );
    for z in linspace(lo, hi, cfg.grid_n) {
        let qz = or_nan(q.eval_at(z));
        let mass = effective_mass_sq(qz, &p);
        let margin = validity_margin(qz, &p);
        fields.push(vec![
            z,
            or_nan(ampl.value_at(z)),
            qz,
            or_nan(lin(z)),
            or_nan(exp(z)),
            margin,
            mass.value,
            flag(mass.tachyonic),
            flag(margin <= cfg.threshold),
        ]);
    }
    out.plots.extend(Plot::from_table(&fields, "fields", "Airy amplitude and Q", "z", &["r", "q"]));
    out.plots.extend(Plot::from_table(&fields, "conformal", "Conformal factors", "z", &["omega_sq_linear", "omega_sq_exp"]));
    out.tables.push(fields);

    if p.big_m > 0.0 {
        let iv = Interval::new(lo, hi);
        let zy = z_to_y(&q, &p, iv)?;
        let yx = y_to_x(&p)?;
        let chain = conformal_metric_exp(&q, &p).pushforward(&zy)?.pushforward(&yx)?;
        let bh = bh_metric(&p);
        let window = validity_window(&p, cfg.threshold)?;
        let mut t = Table::new("chain", &["z", "y", "x", "g_tt_chain", "g_xx_chain", "g_tt_bh", "g_xx_bh", "in_validity_window"]);
        for z in linspace(lo, hi, cfg.grid_n) {
            let y = or_nan(zy.forward(z));
            let x = or_nan(yx.forward(y));
            t.push(vec![
                z,
                y,
                x,
                or_nan(chain.g_tt(x)),
                or_nan(chain.g_xx(x)),
                or_nan(bh.g_tt(x)),
                or_nan(bh.g_xx(x)),
                flag(window.contains(x)),
            ]);
        }
        out.tables.push(t);
        let l = bh_extent(&p);
        horizon_tables(&p, cfg, -l, l, &mut out)?;
    } else {
        out.note("chain", "z -> y -> x needs M > 0");
    }

    airy_checks(&p, (lo, hi), cfg.grid_n, "airy", &mut out)?;
    Ok(out)
}

/// Residual checks of the static model on each valid interval.
fn static_checks(p: &Params, window: (f64, f64), n: usize, label: &str, out: &mut RunOutput) -> Result<usize> {
    let ampl = Amplitude::static_sine(p);
    let g = derive_g(p);
    let phase = static_phase_gradient(g.as_real_fn(), &ampl)?;
    let intervals = valid_intervals(p, &g, Interval::new(window.0, window.1));
    for iv in &intervals {
        // Stay clear of the R² zeros bounding the interval.
        let pad = 1e-6 * iv.width();
        let grid = Grid::new(iv.lo + pad, iv.hi - pad, n);
        out.report(label, check_nonlinear(&ampl, &g, p, &grid)?);
        out.report(label, check_chain(&ampl, &g, p, &grid)?);
        out.report(label, check_continuity(&ampl, &phase, &grid)?);
        out.report(label, check_hamilton_jacobi(&ampl, &phase, p, &grid)?);
    }
    Ok(intervals.len())
}

pub fn static_example(cfg: &RunConfig) -> Result<RunOutput> {
    let p = cfg.params;
    let (lo, hi) = cfg.window(STATIC_WINDOW)?;
    let ampl = Amplitude::static_sine(&p);
    let g = derive_g(&p);
    let q = quantum_potential(&ampl, QMode::TwoParticleSum, &p);
    let window = Interval::new(lo, hi);
    let intervals = valid_intervals(&p, &g, window);
    let mut out = RunOutput::default();

    let mut t = Table::new(
        "static",
        &["u", "r_sq", "q", "g", "g_sq8", "g11_derived", "g11_alternative", "discrepancy", "valid"],
    );
    for u in linspace(lo, hi, cfg.grid_n) {
        let r_sq = (p.c1 * (p.k() * u).sin() + p.c2) / p.q0();
        let (d, a, disc) = match compare_g11(&p, &g, &ampl, u) {
            Ok(c) => (c.g11_derived, c.g11_alternative, c.discrepancy),
            Err(_) => (f64::NAN, f64::NAN, f64::NAN),
        };
        let valid = intervals.iter().any(|iv| iv.contains_closed(u));
        t.push(vec![u, r_sq, or_nan(q.eval_at(u)), or_nan(g.eval(u)), or_nan(g.g_sq8(u)), d, a, disc, flag(valid)]);
    }
    out.plots.extend(Plot::from_table(&t, "g11", "g11 derived vs alternative form", "u", &["g11_derived", "g11_alternative"]));
    out.plots.extend(Plot::from_table(&t, "static", "R² and 8G²", "u", &["r_sq", "g_sq8"]));
    out.tables.push(t);

    let mut s = Table::new("singularities", &["u", "tangent"]);
    for sing in find_metric_singularities(&p, window) {
        s.push(vec![sing.u, flag(sing.contact == Contact::Tangent)]);
    }
    out.tables.push(s);
    let mut v = Table::new("valid_intervals", &["lo", "hi"]);
    for iv in &intervals {
        v.push(vec![iv.lo, iv.hi]);
    }
    out.tables.push(v);

    if let Ok(c) = compare_g11(&p, &g, &ampl, 0.0) {
        out.note("g11_at_zero", c);
    }
    if static_checks(&p, (lo, hi), cfg.grid_n, "static", &mut out)? == 0 {
        out.note("static_checks", "no valid interval in the window");
    }
    Ok(out)
}

pub fn verify(cfg: &RunConfig) -> Result<RunOutput> {
    let p = cfg.params;
    let n = cfg.grid_n;
    let mut out = RunOutput::default();
    let resolutions = [n, 2 * n - 1, 4 * n - 3];
    let airy_window = cfg.window(AIRY_WINDOW)?;
    let static_window = cfg.window(STATIC_WINDOW)?;
    for res in resolutions {
        airy_checks(&p, airy_window, res, &format!("airy/n={res}"), &mut out)?;
        static_checks(&p, static_window, res, &format!("static/n={res}"), &mut out)?;
    }

    let exact = Amplitude::airy(&p)?;
    let grid = Grid::clipped(Interval::new(airy_window.0, airy_window.1), exact.domain(), n)?;
    let sampled = |h: f64| {
        let cells = ((grid.hi - grid.lo) / h).round() as usize;
        let nodes = Grid::new(grid.lo, grid.lo + h * cells as f64, cells + 1);
        let s = sampled_airy(&exact, &nodes).map_err(|e| epr_geometry::Error::Precondition(e.to_string()))?;
        check_airy_ode(&s, &p, &Grid::new(grid.lo, nodes.hi, n))
    };
    let mut t = Table::new("convergence", &["step", "normalized_max"]);
    for h in CONVERGENCE_STEPS {
        t.push(vec![h, sampled(h)?.normalized_max]);
    }
    out.tables.push(t);
    let order = convergence_order(sampled, &CONVERGENCE_STEPS)?;
    out.note("sampled_airy_order", order);
    let analytic = convergence_order(|_| check_airy_ode(&exact, &p, &grid), &CONVERGENCE_STEPS)?;
    out.note("analytic_airy_order", analytic);
    if let Convergence::Order(o) = order {
        println!("sampled Airy check: observed order {o:.3}");
    }
    Ok(out)
}

pub fn trajectories(cfg: &RunConfig, args: &TrajectoryArgs) -> Result<RunOutput> {
    let p = cfg.params;
    let ampl = Amplitude::static_sine(&p);
    let g = derive_g(&p);
    let phase = static_phase_gradient(g.as_real_fn(), &ampl)?;
    let traj = integrate_pair(&phase, [args.x1, args.x2], args.span, &p, args.tol)
        .with_context(|| format!("starting point ({}, {})", args.x1, args.x2))?;
    let mut t = Table::new("trajectory", &["lambda", "x1", "x2", "u", "p1", "p2"]);
    for i in 0..traj.len() {
        t.push(vec![traj.lambda[i], traj.x1[i], traj.x2[i], traj.x1[i] + traj.x2[i], traj.p1[i], traj.p2[i]]);
    }
    let (du, dp) = epr_drift(&traj);
    let mut out = RunOutput::default();
    out.plots.extend(Plot::from_table(&t, "trajectory", "Particle positions", "lambda", &["x1", "x2"]));
    out.tables.push(t);
    out.note("stop", traj.stop);
    out.note("stats", traj.stats);
    out.note("u_drift", du);
    out.note("momentum_sum", dp);
    println!("trajectory: {} steps, stop = {:?}, max|du| = {du:.3e}, max|p1+p2| = {dp:.3e}", traj.len(), traj.stop);
    Ok(out)
}

pub fn horizons(cfg: &RunConfig) -> Result<RunOutput> {
    let p = cfg.params;
    let l = bh_extent(&p);
    let (lo, hi) = cfg.window((-l, l))?;
    let mut out = RunOutput::default();
    horizon_tables(&p, cfg, lo, hi, &mut out)?;
    let hs = find_horizons(&p)?;
    let locs: Vec<String> = hs.locations.iter().map(|h| format!("{h}")).collect();
    println!("horizons: [{}]", locs.join(", "));
    if let Ok(w) = validity_window(&p, cfg.threshold) {
        let b = w.bounds();
        println!("validity window: center {} [{}, {}]", w.center, b.lo, b.hi);
    }
    Ok(out)
}
