//! `key=value` configuration with `--key=value` overrides.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use edgescatter::sommerfeld::BoundaryCondition;
use edgescatter::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Field,
    Residual,
    Verify,
    Tail,
    Oracle,
}

impl Command {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "field" => Self::Field,
            "residual" => Self::Residual,
            "verify" => Self::Verify,
            "tail" => Self::Tail,
            "oracle" => Self::Oracle,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sommerfeld,
    Bound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailPath {
    Green,
    Fd,
    Both,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub x0: f64,
    pub y0: f64,
    pub dx: f64,
    pub dy: f64,
    pub nx: usize,
    pub ny: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub alpha: f64,
    pub k: f64,
    /// Edge tip; a list only for `tail`.
    pub a: Vec<f64>,
    pub bc: BoundaryCondition,
    pub c0: Complex64,
    pub mode: Mode,
    pub grid: Grid,
    pub output: Option<PathBuf>,
    pub solver_tol: f64,
    pub tip_radius: f64,
    pub band: usize,
    pub max_l2_rel: Option<f64>,
    pub max_residual: Option<f64>,
    pub strength: f64,
    pub probe_x: f64,
    pub probe_y: Option<f64>,
    pub path: TailPath,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub const KEYS: &[&str] = &[
    "alpha", "k", "a", "bc", "c0_re", "c0_im", "mode", "x0", "y0", "dx", "dy", "nx", "ny", "output",
    "solver_tol", "tip_radius", "band", "max_l2_rel", "max_residual", "strength", "probe_x",
    "probe_y", "path",
];

pub const USAGE: &str = "\
usage: edgescatter <field|residual|verify|tail|oracle> [--config=FILE] [--key=value ...]

keys (also accepted as `key = value` lines in the config file):
  alpha k a bc=dirichlet|neumann c0_re c0_im mode=sommerfeld|bound
  x0 y0 dx dy nx ny output solver_tol tip_radius band max_l2_rel
  max_residual strength probe_x probe_y path=green|fd|both

`a` takes a range start:step:end or a comma list for `tail`.";

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

/// Parses the contents of a config file into raw key/value pairs.
pub fn parse_file(text: &str) -> Result<BTreeMap<String, String>, UsageError> {
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected key=value", n + 1)))?;
        out.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(out)
}

/// Builds a [`RunConfig`] from command-line arguments (program name excluded).
///
/// `read` loads the file named by `--config`.
pub fn from_args<I, F>(args: I, read: F) -> Result<RunConfig, UsageError>
where
    I: IntoIterator<Item = String>,
    F: Fn(&str) -> std::io::Result<String>,
{
    let mut args = args.into_iter();
    let command = args.next().ok_or_else(|| usage("missing command"))?;
    let command = Command::parse(&command).ok_or_else(|| usage(format!("unknown command `{command}`")))?;
    let mut config_file = None;
    let mut flags = BTreeMap::new();
    for arg in args {
        let body = arg
            .strip_prefix("--")
            .ok_or_else(|| usage(format!("unexpected argument `{arg}`")))?;
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| usage(format!("flag `{arg}` needs a value (--key=value)")))?;
        if key == "config" {
            config_file = Some(value.to_string());
        } else {
            flags.insert(key.to_string(), value.to_string());
        }
    }
    let mut raw = match config_file {
        Some(path) => {
            let text = read(&path).map_err(|e| usage(format!("cannot read config `{path}`: {e}")))?;
            parse_file(&text)?
        }
        None => BTreeMap::new(),
    };
    raw.extend(flags);
    build(command, &raw)
}

struct Raw<'a>(&'a BTreeMap<String, String>);

impl Raw<'_> {
    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, UsageError> {
        self.0
            .get(key)
            .map(|v| v.parse::<T>().map_err(|_| usage(format!("bad value for `{key}`: `{v}`"))))
            .transpose()
    }

    fn or<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, UsageError> {
        Ok(self.get(key)?.unwrap_or(default))
    }
}

/// `start:step:end` (end inclusive), a comma list, or a single number.
pub fn parse_positions(s: &str) -> Result<Vec<f64>, UsageError> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| usage(format!("bad number `{t}` in `{s}`")))
    };
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [start, step, end] => {
            let (start, step, end) = (num(start)?, num(step)?, num(end)?);
            if step <= 0.0 || end < start {
                return Err(usage(format!("range `{s}` needs step > 0 and end >= start")));
            }
            let count = ((end - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|n| start + n as f64 * step).collect())
        }
        [list] => list.split(',').map(num).collect(),
        _ => Err(usage(format!("`{s}` is neither a number, a list nor start:step:end"))),
    }
}

fn build(command: Command, raw: &BTreeMap<String, String>) -> Result<RunConfig, UsageError> {
    if let Some(unknown) = raw.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(usage(format!("unknown key `{unknown}`")));
    }
    let r = Raw(raw);
    let alpha: f64 = r.or("alpha", 1.0)?;
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(usage("alpha must be positive"));
    }
    let default_k = if command == Command::Tail { alpha / 2.0 } else { 2.0 };
    let k: f64 = r.or("k", default_k)?;
    if !(k.is_finite() && k > 0.0) {
        return Err(usage("k must be positive"));
    }
    let a = match raw.get("a") {
        Some(s) => parse_positions(s)?,
        None if command == Command::Tail => parse_positions("1:0.5:3")?.iter().map(|v| v / alpha).collect(),
        None => vec![0.0],
    };
    if command == Command::Tail {
        if a.len() < 4 {
            return Err(usage("tail needs at least 4 positions in `a`"));
        }
        if a.windows(2).any(|w| w[1] <= w[0]) || a[0] <= 0.0 {
            return Err(usage("tail positions must be positive and increasing"));
        }
    } else if a.len() != 1 {
        return Err(usage("`a` takes a single value for this command"));
    }
    let bc = match r.or("bc", "dirichlet".to_string())?.as_str() {
        "dirichlet" => BoundaryCondition::Dirichlet,
        "neumann" => BoundaryCondition::Neumann,
        other => return Err(usage(format!("bc must be dirichlet or neumann, got `{other}`"))),
    };
    let mode = match r.or("mode", "sommerfeld".to_string())?.as_str() {
        "sommerfeld" => Mode::Sommerfeld,
        "bound" => Mode::Bound,
        other => return Err(usage(format!("mode must be sommerfeld or bound, got `{other}`"))),
    };
    if mode == Mode::Bound {
        if k == alpha {
            return Err(usage("bound mode needs k != alpha"));
        }
        if bc == BoundaryCondition::Neumann || a[0] != 0.0 {
            return Err(usage("bound mode has a Dirichlet edge with its tip at the origin"));
        }
    }
    let path = match r.or("path", "green".to_string())?.as_str() {
        "green" => TailPath::Green,
        "fd" => TailPath::Fd,
        "both" => TailPath::Both,
        other => return Err(usage(format!("path must be green, fd or both, got `{other}`"))),
    };
    let grid = Grid {
        x0: r.or("x0", -4.0)?,
        y0: r.or("y0", -4.0)?,
        dx: r.or("dx", 0.04)?,
        dy: r.or("dy", 0.04)?,
        nx: r.or("nx", 201)?,
        ny: r.or("ny", 201)?,
    };
    if !(grid.dx > 0.0 && grid.dy > 0.0) || grid.nx < 3 || grid.ny < 3 {
        return Err(usage("grid needs dx, dy > 0 and at least 3x3 nodes"));
    }
    let solver_tol: f64 = r.or("solver_tol", 1e-10)?;
    if !(1e-12..=1e-6).contains(&solver_tol) {
        return Err(usage("solver_tol must lie in [1e-12, 1e-6]"));
    }
    let strength: f64 = r.or("strength", 1.0)?;
    if !strength.is_finite() || strength == 0.0 {
        return Err(usage("strength must be finite and nonzero"));
    }
    Ok(RunConfig {
        command,
        alpha,
        k,
        a,
        bc,
        c0: Complex64::new(r.or("c0_re", 1.0)?, r.or("c0_im", 0.0)?),
        mode,
        grid,
        output: r.get::<String>("output")?.filter(|s| s != "-").map(PathBuf::from),
        solver_tol,
        tip_radius: r.or("tip_radius", 1.0)?,
        band: r.or("band", 2)?,
        max_l2_rel: r.get("max_l2_rel")?,
        max_residual: r.get("max_residual")?,
        strength,
        probe_x: r.or("probe_x", 0.0)?,
        probe_y: r.get("probe_y")?,
        path,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    fn no_file(_: &str) -> std::io::Result<String> {
        Err(std::io::Error::other("no file"))
    }

    #[test]
    fn defaults() {
        let c = from_args(args("verify"), no_file).unwrap();
        assert_eq!((c.alpha, c.k), (1.0, 2.0));
        assert_eq!(c.a, vec![0.0]);
        assert_eq!(c.grid.nx, 201);
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_positions("1:0.5:3").unwrap(), vec![1.0, 1.5, 2.0, 2.5, 3.0]);
        assert_eq!(parse_positions("1,2").unwrap(), vec![1.0, 2.0]);
        assert!(parse_positions("1:0:3").is_err());
        assert!(parse_positions("1:2").is_err());
        let c = from_args(args("tail --alpha=2"), no_file).unwrap();
        assert_eq!(c.k, 1.0);
        assert_eq!(c.a, vec![0.5, 0.75, 1.0, 1.25, 1.5]);
    }

    #[test]
    fn flags_override_the_file() {
        let file = |_: &str| Ok("# test\nalpha = 0.5\nk=3\nmode = bound\n".to_string());
        let c = from_args(args("field --config=x.cfg --k=1.5"), file).unwrap();
        assert_eq!((c.alpha, c.k, c.mode), (0.5, 1.5, Mode::Bound));
    }

    #[test]
    fn every_key_is_accepted_from_a_file() {
        let text = "alpha=1\nk=2\na=0\nbc=dirichlet\nc0_re=1\nc0_im=0\nmode=sommerfeld\nx0=-4\ny0=-4\n\
                    dx=0.04\ndy=0.04\nnx=201\nny=201\noutput=-\nsolver_tol=1e-10\ntip_radius=1\nband=2\n\
                    max_l2_rel=0.02\nmax_residual=1\nstrength=1\nprobe_x=0\nprobe_y=40\npath=green\n";
        assert_eq!(parse_file(text).unwrap().len(), KEYS.len());
        assert!(from_args(args("oracle --config=f"), |_| Ok(text.to_string())).is_ok());
    }

    #[test]
    fn rejects_bad_configs() {
        for bad in [
            "",
            "launch",
            "field --alpha=-1",
            "field --nope=1",
            "field --alpha",
            "field alpha=1",
            "field --a=1:0.5:3",
            "tail --a=1,2",
            "field --mode=bound --k=1",
            "field --bc=robin",
            "oracle --solver_tol=1e-3",
            "field --config=missing.cfg",
        ] {
            assert!(from_args(args(bad), no_file).is_err(), "{bad}");
        }
        assert!(parse_file("alpha 1").is_err());
    }
}
