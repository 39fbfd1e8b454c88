//! One function per subcommand. Each validates its inputs through the owning
//! module's constructors before doing any work.

use std::fs;
use std::path::Path;

use serde_json::Value;
use wergm_core::critical::{critical_table, find_theta0};
use wergm_core::gaussian_directed::{psi_inf, psi_n_exact, psi_n_monte_carlo};
use wergm_core::graphs::{concentration_report, run_sampler};
use wergm_core::phase_curve::{bounding_point_with, r_of_beta1_with};
use wergm_core::variational::{profile, psi_gradient, search_interval, solve_psi};
use wergm_core::{Classification, EdgeDistribution, GaussianModelParams, ModelParams};

use crate::cli::{Command, DistArgs, DistKind, Format, OutputArgs};
use crate::error::CliError;
use crate::format::{fmt_g, json_number};
use crate::range::{linspace, parse_atoms};
use crate::table::{emit, json_document, Cell, Table};

/// Parameter points of the profile figures.
pub const FIGURE_POINTS: [(f64, f64); 5] = [(-5.0, 3.5), (-2.5, 4.0), (-5.7, 5.0), (-4.3, 5.0), (-5.0, 5.0)];
/// Width and size of the default V-region grid below the critical `beta1`.
const V_REGION_SPAN: f64 = 6.0;
const V_REGION_STEPS: usize = 60;

pub fn run(command: Command) -> Result<(), CliError> {
    let op = command.operation();
    match command {
        Command::Rate { u, dist, out } => rate(op, &u.0, &dist, &out),
        Command::Psi { p, beta1, beta2, dist, out } => psi(op, p, &beta1.0, &beta2.0, &dist, &out),
        Command::CriticalTable { p, out } => critical(op, &p.0, &out),
        Command::PhaseCurve { p, beta1, out } => phase_curve(op, p, &beta1.0, &out),
        Command::Figures { p, out_dir, points, beta1, profile_points, out } => {
            let points = if points.is_empty() { FIGURE_POINTS.to_vec() } else { points };
            figures(op, p, &out_dir, &points, beta1.map(|b| b.0), profile_points, &out)
        }
        Command::Sample { p, beta1, beta2, n, sweeps, burn_in, seed, trajectory, out } => {
            sample(op, p, beta1, beta2, n, sweeps, burn_in, seed, trajectory.as_deref(), &out)
        }
        Command::Gaussian { beta1, beta2, n, samples, seed, out } => {
            gaussian(op, &beta1.0, &beta2.0, n, samples, seed, &out)
        }
    }
}

fn distribution(op: &str, args: &DistArgs) -> Result<EdgeDistribution, CliError> {
    match (args.dist, &args.atoms) {
        (DistKind::Uniform, None) => Ok(EdgeDistribution::Uniform01),
        (DistKind::Bernoulli, None) => Ok(EdgeDistribution::BernoulliHalf),
        (DistKind::Finite, Some(text)) => {
            let atoms = parse_atoms(text).map_err(|m| CliError::cli(op, m, Some("atoms")))?;
            EdgeDistribution::finite_support(atoms).map_err(|e| CliError::core(op, e))
        }
        (DistKind::Finite, None) => Err(CliError::cli(op, "--dist finite needs --atoms", Some("atoms"))),
        (_, Some(_)) => Err(CliError::cli(op, "--atoms only applies to --dist finite", Some("atoms"))),
    }
}

fn write_table(op: &str, command: &str, table: &Table, out: &OutputArgs, default: Format) -> Result<(), CliError> {
    let text = match out.format.unwrap_or(default) {
        Format::Csv => table.to_csv(),
        Format::Json => json_document(command, table, vec![]),
    };
    emit(&text, out.output.as_deref(), op)
}

fn classification_name(c: Classification) -> &'static str {
    match c {
        Classification::Unique => "unique",
        Classification::TwoGlobal => "two_global",
    }
}

fn rate(op: &str, us: &[f64], dist: &DistArgs, out: &OutputArgs) -> Result<(), CliError> {
    let dist = distribution(op, dist)?;
    let mut table = Table::new(&["u", "theta", "rate", "rate_d1", "rate_d2"]);
    for &u in us {
        let r = dist.rate_point(u).map_err(|e| CliError::core(op, e))?;
        table.push(vec![r.u.into(), r.theta.into(), r.value.into(), r.d1.into(), r.d2.into()]);
    }
    write_table(op, "rate", &table, out, Format::Csv)
}

fn psi(op: &str, p: u32, b1s: &[f64], b2s: &[f64], dist: &DistArgs, out: &OutputArgs) -> Result<(), CliError> {
    let dist = distribution(op, dist)?;
    let mut table = Table::new(&[
        "p",
        "beta1",
        "beta2",
        "psi",
        "classification",
        "maximizers",
        "u1_star",
        "u2_star",
        "grad_beta1",
        "grad_beta2",
    ]);
    for &b1 in b1s {
        for &b2 in b2s {
            let params = ModelParams::new(b1, b2, p, dist.clone()).map_err(|e| CliError::core(op, e))?;
            let s = solve_psi(&params).map_err(|e| CliError::core(op, e))?;
            let grad = if s.is_unique() { Some(psi_gradient(&params).map_err(|e| CliError::core(op, e))?) } else { None };
            table.push(vec![
                p.into(),
                b1.into(),
                b2.into(),
                s.psi.into(),
                classification_name(s.classification).into(),
                Cell::List(s.maximizers.clone()),
                s.maximizers[0].into(),
                s.maximizers.get(1).copied().into(),
                grad.map(|g| g.0).into(),
                grad.map(|g| g.1).into(),
            ]);
        }
    }
    write_table(op, "psi", &table, out, Format::Json)
}

fn critical(op: &str, ps: &[u32], out: &OutputArgs) -> Result<(), CliError> {
    let rows = critical_table(ps).map_err(|e| CliError::core(op, e))?;
    let mut table = Table::new(&["p", "theta0", "n_theta0", "u0", "m_u0", "g_theta0", "f_u0", "beta1_c", "beta2_c"]);
    for c in rows {
        table.push(vec![
            c.p.into(),
            c.theta0.into(),
            c.n_theta0.into(),
            c.u0.into(),
            c.m_u0.into(),
            c.g_theta0.into(),
            c.f_u0.into(),
            c.beta1_c.into(),
            c.beta2_c.into(),
        ]);
    }
    write_table(op, "critical-table", &table, out, Format::Csv)
}

fn phase_curve(op: &str, p: u32, b1s: &[f64], out: &OutputArgs) -> Result<(), CliError> {
    let crit = find_theta0(p).map_err(|e| CliError::core(op, e))?;
    let mut table = Table::new(&["beta1", "r", "u1_star", "u2_star", "psi", "jump_u", "jump_u_p", "m_a", "m_b"]);
    for &b1 in b1s {
        let bound = bounding_point_with(&crit, b1).map_err(|e| CliError::core(op, e))?;
        let pt = r_of_beta1_with(&crit, b1).map_err(|e| CliError::core(op, e))?;
        let (j1, j2) = pt.jumps(p);
        table.push(vec![
            b1.into(),
            pt.r.into(),
            pt.u1_star.into(),
            pt.u2_star.into(),
            pt.psi.into(),
            j1.into(),
            j2.into(),
            bound.m_a.into(),
            bound.m_b.into(),
        ]);
    }
    write_table(op, "phase-curve", &table, out, Format::Csv)
}

fn write_file(op: &str, path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::cli(op, format!("cannot write {}: {e}", path.display()), Some("out_dir")))
}

fn figures(
    op: &str,
    p: u32,
    out_dir: &Path,
    points: &[(f64, f64)],
    beta1: Option<Vec<f64>>,
    profile_points: usize,
    out: &OutputArgs,
) -> Result<(), CliError> {
    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::cli(op, format!("cannot create {}: {e}", out_dir.display()), Some("out_dir")))?;
    let mut manifest = Table::new(&["file", "beta1", "beta2", "classification", "maximizers", "psi"]);
    for &(b1, b2) in points {
        let params = ModelParams::uniform(b1, b2, p).map_err(|e| CliError::core(op, e))?;
        let (lo, hi) = search_interval(&params.dist);
        let rows = profile(&params, lo, hi, profile_points).map_err(|e| CliError::core(op, e))?;
        let mut table = Table::new(&["u", "l", "l_d1"]);
        for r in rows {
            table.push(vec![r.u.into(), r.value.into(), r.d1.into()]);
        }
        let name = format!("profile_p{p}_beta1_{}_beta2_{}.csv", fmt_g(b1), fmt_g(b2));
        write_file(op, &out_dir.join(&name), &table.to_csv())?;
        let s = solve_psi(&params).map_err(|e| CliError::core(op, e))?;
        manifest.push(vec![
            name.as_str().into(),
            b1.into(),
            b2.into(),
            classification_name(s.classification).into(),
            Cell::List(s.maximizers),
            s.psi.into(),
        ]);
    }

    let crit = find_theta0(p).map_err(|e| CliError::core(op, e))?;
    let grid = match beta1 {
        Some(g) => g,
        None => linspace(crit.beta1_c - V_REGION_SPAN, crit.beta1_c - wergm_core::phase_curve::CORNER_GAP, V_REGION_STEPS)
            .expect("non-empty default grid"),
    };
    let mut region = Table::new(&["beta1", "m_a", "m_b", "r"]);
    for b1 in grid {
        let bound = bounding_point_with(&crit, b1).map_err(|e| CliError::core(op, e))?;
        let pt = r_of_beta1_with(&crit, b1).map_err(|e| CliError::core(op, e))?;
        region.push(vec![b1.into(), bound.m_a.into(), bound.m_b.into(), pt.r.into()]);
    }
    let name = format!("v_region_p{p}.csv");
    write_file(op, &out_dir.join(&name), &region.to_csv())?;
    manifest.push(vec![
        name.as_str().into(),
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
    ]);
    write_table(op, "figures", &manifest, out, Format::Csv)
}

#[allow(clippy::too_many_arguments)]
fn sample(
    op: &str,
    p: u32,
    beta1: f64,
    beta2: f64,
    n: usize,
    sweeps: usize,
    burn_in: usize,
    seed: u64,
    trajectory: Option<&Path>,
    out: &OutputArgs,
) -> Result<(), CliError> {
    let params = ModelParams::uniform(beta1, beta2, p).map_err(|e| CliError::core(op, e))?;
    let stats = run_sampler(&params, n, sweeps, burn_in, seed).map_err(|e| CliError::core(op, e))?;

    let mut traj = Table::new(&["sweep", "t_h1", "t_h2"]);
    for (i, (t1, t2)) in stats.edge_series.iter().zip(&stats.h2_series).enumerate() {
        traj.push(vec![(burn_in + i + 1).into(), (*t1).into(), (*t2).into()]);
    }
    if let Some(path) = trajectory {
        fs::write(path, traj.to_csv())
            .map_err(|e| CliError::cli(op, format!("cannot write {}: {e}", path.display()), Some("trajectory")))?;
    }

    match out.format.unwrap_or(Format::Csv) {
        Format::Csv => emit(&traj.to_csv(), out.output.as_deref(), op),
        Format::Json => {
            let report = concentration_report(&stats, &params).map_err(|e| CliError::core(op, e))?;
            let mut targets = Table::new(&["u_star", "u_star_pow_p", "edge_deviation", "h2_deviation"]);
            for t in &report.targets {
                targets.push(vec![
                    t.u_star.into(),
                    t.u_star_pow_p.into(),
                    t.edge_deviation.into(),
                    t.h2_deviation.into(),
                ]);
            }
            let extra = vec![
                ("p", Value::from(p)),
                ("beta1", json_number(beta1)),
                ("beta2", json_number(beta2)),
                ("n", Value::from(n)),
                ("sweeps", Value::from(sweeps)),
                ("burn_in", Value::from(burn_in)),
                ("seed", Value::from(seed)),
                ("h2", Value::from(stats.h2_name.as_str())),
                ("edge_mean", json_number(stats.edge_mean)),
                ("edge_se", json_number(stats.edge_se)),
                ("h2_mean", json_number(stats.h2_mean)),
                ("h2_se", json_number(stats.h2_se)),
                ("acceptance_rate", json_number(stats.acceptance_rate)),
                ("max_resync_drift", json_number(stats.max_resync_drift)),
                ("classification", Value::from(classification_name(report.classification))),
            ];
            emit(&json_document("sample", &targets, extra), out.output.as_deref(), op)
        }
    }
}

fn gaussian(
    op: &str,
    b1s: &[f64],
    b2s: &[f64],
    n: usize,
    samples: usize,
    seed: u64,
    out: &OutputArgs,
) -> Result<(), CliError> {
    let mut table = Table::new(&["beta1", "beta2", "n", "psi_n", "psi_inf", "mc_estimate", "mc_std_error"]);
    let mut row_seed = seed;
    for &b1 in b1s {
        for &b2 in b2s {
            let params = GaussianModelParams::new(b1, b2).map_err(|e| CliError::core(op, e))?;
            let exact = psi_n_exact(&params, n).map_err(|e| CliError::core(op, e))?;
            let limit = psi_inf(&params).map_err(|e| CliError::core(op, e))?;
            let mc = psi_n_monte_carlo(&params, n, samples, row_seed).map_err(|e| CliError::core(op, e))?;
            row_seed = row_seed.wrapping_add(1);
            table.push(vec![
                b1.into(),
                b2.into(),
                n.into(),
                exact.into(),
                limit.into(),
                mc.estimate.into(),
                mc.std_error.into(),
            ]);
        }
    }
    write_table(op, "gaussian", &table, out, Format::Csv)
}
