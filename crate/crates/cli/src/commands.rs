use std::fs::File;
use std::io::{self, BufWriter, Write};

use edgescatter::bound_edge::{BoundEdgeField, WaveguideParams};
use edgescatter::geometry::PlanePoint;
use edgescatter::green::{tail_scan, TailScanResult};
use edgescatter::grid::{Exclusion, FieldGrid, GridSpec};
use edgescatter::oracle_fd::{compare, fd_tail_scan, run, FdProblem, FdTailConfig};
use edgescatter::sommerfeld::{helmholtz_residual, SommerfeldField};
use edgescatter::Error;

use crate::config::{Mode, RunConfig, TailPath};
use crate::summary::Summary;

/// Outcome of a command that ran to completion.
pub enum Outcome {
    Pass,
    /// A check ran but its result is outside tolerance.
    Fail(String),
}

pub type CmdResult = Result<Outcome, Error>;

fn grid_spec(c: &RunConfig) -> Result<GridSpec, Error> {
    let g = &c.grid;
    GridSpec::new(g.x0, g.y0, g.dx, g.dy, g.nx, g.ny)
}

fn energy(c: &RunConfig) -> f64 {
    match c.mode {
        Mode::Sommerfeld => c.k * c.k,
        Mode::Bound => c.k * c.k - c.alpha * c.alpha,
    }
}

fn exclusion(c: &RunConfig) -> Exclusion {
    let mut ex = Exclusion::edge(c.a[0]);
    ex.band = c.band;
    if c.mode == Mode::Bound {
        ex = ex.with_delta_line();
    }
    ex
}

enum Analytic {
    Sommerfeld(SommerfeldField),
    Bound(BoundEdgeField),
}

impl Analytic {
    fn new(c: &RunConfig) -> Result<Self, Error> {
        Ok(match c.mode {
            Mode::Sommerfeld => Self::Sommerfeld(SommerfeldField::new(c.k, c.a[0], c.bc)?.with_amplitude(c.c0)),
            Mode::Bound => Self::Bound(BoundEdgeField::new(WaveguideParams::new(c.alpha, c.k)?).with_amplitude(c.c0)),
        })
    }

    fn on_grid(&self, spec: GridSpec) -> Result<FieldGrid, Error> {
        match self {
            Self::Sommerfeld(f) => f.field_on_grid(spec),
            Self::Bound(f) => f.field_on_grid(spec),
        }
    }
}

fn artifact(c: &RunConfig) -> io::Result<Option<BufWriter<File>>> {
    c.output.as_ref().map(|p| File::create(p).map(BufWriter::new)).transpose()
}

pub fn field(c: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let grid = Analytic::new(c)?.on_grid(grid_spec(c)?)?;
    match artifact(c)? {
        Some(mut w) => {
            grid.write_csv(&mut w)?;
            w.flush()?;
        }
        None => grid.write_csv(out)?,
    }
    Ok(Outcome::Pass)
}

pub fn residual(c: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let grid = Analytic::new(c)?.on_grid(grid_spec(c)?)?;
    let ex = exclusion(c).with_tip_radius(c.tip_radius);
    let r = helmholtz_residual(&grid, energy(c), &ex)?;
    if r.coarse {
        writeln!(out, "warning: grid under-resolves the wavelength")?;
    }
    let mut s = Summary::new();
    s.float("max", r.max).float("l2", r.l2).int("nodes", r.nodes).flag("coarse", r.coarse);
    writeln!(out, "{s}")?;
    match c.max_residual {
        Some(limit) if r.l2 > limit => Ok(Outcome::Fail(format!("residual l2 {:.16e} above {:.16e}", r.l2, limit))),
        _ => Ok(Outcome::Pass),
    }
}

pub fn oracle(c: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let spec = grid_spec(c)?;
    let analytic = Analytic::new(c)?;
    let exact = analytic.on_grid(spec)?;
    let e = energy(c);
    let mut problem = FdProblem::new(spec, e).with_edge(c.a[0], c.bc);
    problem = match &analytic {
        Analytic::Sommerfeld(f) => problem.with_boundary(move |x, y, side| f.eval(x, y, side)),
        Analytic::Bound(f) => problem
            .with_delta_line(c.alpha)
            .with_boundary(move |x, y, side| f.eval(x, y, side)),
    };
    let solution = run(&problem, c.solver_tol)?;
    let report = compare(&exact, &solution.field, &exclusion(c))?;
    if let Some(mut w) = artifact(c)? {
        solution.field.write_csv(&mut w)?;
        w.flush()?;
    }
    for region in &report.regions {
        writeln!(
            out,
            "region {:<10} nodes={:<7} l2_rel={:.16e} max_rel={:.16e}",
            region.name, region.nodes, region.l2_rel, region.max_rel
        )?;
    }
    let mut s = Summary::new();
    s.float("l2_rel", report.l2_rel)
        .float("max_rel", report.max_rel)
        .float("dx", spec.dx)
        .float("dy", spec.dy)
        .float("E", e);
    writeln!(out, "{s}")?;
    let limit = c.max_l2_rel.unwrap_or(match c.mode {
        Mode::Sommerfeld => 0.02,
        Mode::Bound => 0.05,
    });
    if report.l2_rel > limit {
        return Ok(Outcome::Fail(format!("l2_rel {:.16e} above {:.16e}", report.l2_rel, limit)));
    }
    Ok(Outcome::Pass)
}

pub fn tail(c: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let probe = PlanePoint::new(c.probe_x, c.probe_y.unwrap_or(40.0 / c.alpha), 0.0);
    let mut scans: Vec<(&str, TailScanResult, f64)> = Vec::new();
    if matches!(c.path, TailPath::Green | TailPath::Both) {
        scans.push(("green", tail_scan(c.alpha, c.k, c.strength, &c.a, probe)?, 0.05));
    }
    if matches!(c.path, TailPath::Fd | TailPath::Both) {
        let cfg = FdTailConfig::new(c.alpha, c.k);
        scans.push(("fd", fd_tail_scan(&cfg, &c.a, c.solver_tol)?, 0.15));
    }
    if let Some(mut w) = artifact(c)? {
        let names: Vec<String> = scans.iter().map(|(n, ..)| format!("amplitude_{n}")).collect();
        writeln!(w, "a,{}", names.join(","))?;
        for (m, a) in c.a.iter().enumerate() {
            let row: Vec<String> = scans.iter().map(|(_, s, _)| format!("{:.16e}", s.amplitudes[m])).collect();
            writeln!(w, "{a:.16e},{}", row.join(","))?;
        }
        w.flush()?;
    }
    let mut failures = Vec::new();
    for (name, scan, tol) in &scans {
        let mut s = Summary::new();
        s.text("path", name)
            .float("slope", scan.slope)
            .float("residual", scan.residual)
            .float("alpha", c.alpha)
            .float("k", c.k);
        writeln!(out, "{s}")?;
        let ratio = scan.slope / (-2.0 * c.alpha);
        if (ratio - 1.0).abs() > *tol {
            failures.push(format!("{name} slope/(-2 alpha) = {ratio:.16e}"));
        }
    }
    if failures.is_empty() {
        Ok(Outcome::Pass)
    } else {
        Ok(Outcome::Fail(failures.join("; ")))
    }
}

