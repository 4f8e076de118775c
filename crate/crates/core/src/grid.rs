//! Rectangular sample lattices and the CSV exchange format.
//!
//! Nodes are stored row-major by `y`, then `x`: node `(i, j)` sits at
//! `(x0 + i·dx, y0 + j·dy)` and has flat index `j·nx + i`.

use std::io::{BufRead, Write};

use num_complex::Complex64;

use crate::{Error, Result};

/// Relative distance (in cells) below which a node coordinate is snapped
/// onto a special line.
const SNAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x0: f64,
    pub y0: f64,
    pub dx: f64,
    pub dy: f64,
    pub nx: usize,
    pub ny: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Interior,
    /// On the edge `{y = 0, x ≥ a}`, tip included.
    Edge,
    /// On the delta line `x = 0`.
    DeltaLine,
    OuterBoundary,
}

impl GridSpec {
    pub fn new(x0: f64, y0: f64, dx: f64, dy: f64, nx: usize, ny: usize) -> Result<Self> {
        let finite = [x0, y0, dx, dy].iter().all(|v| v.is_finite());
        if !finite || dx <= 0.0 || dy <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "grid spacings must be positive and finite (dx = {dx}, dy = {dy})"
            )));
        }
        if nx < 3 || ny < 3 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 3x3 nodes, got {nx}x{ny}"
            )));
        }
        Ok(Self { x0, y0, dx, dy, nx, ny })
    }

    /// A grid with `n` nodes per side covering `[lo, hi]²`.
    pub fn square(lo: f64, hi: f64, n: usize) -> Result<Self> {
        let h = (hi - lo) / (n as f64 - 1.0);
        Self::new(lo, lo, h, h, n, n)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Abscissa of column `i`, snapped to `0` and to each of `specials`.
    pub fn x_snapped(&self, i: usize, specials: &[f64]) -> f64 {
        let x = self.x0 + i as f64 * self.dx;
        snap(x, self.dx, specials)
    }

    pub fn x(&self, i: usize) -> f64 {
        snap(self.x0 + i as f64 * self.dx, self.dx, &[])
    }

    pub fn y(&self, j: usize) -> f64 {
        snap(self.y0 + j as f64 * self.dy, self.dy, &[])
    }

    /// Column index whose abscissa is `x`, if `x` lies on a grid line.
    pub fn column_of(&self, x: f64) -> Option<usize> {
        line_index(x, self.x0, self.dx, self.nx)
    }

    pub fn row_of(&self, y: f64) -> Option<usize> {
        line_index(y, self.y0, self.dy, self.ny)
    }

    /// Node classification, with priority edge > outer boundary > delta line.
    pub fn mask(&self, edge_tip: Option<f64>, delta_line: bool) -> Vec<NodeKind> {
        let mut mask = Vec::with_capacity(self.len());
        let specials: Vec<f64> = edge_tip.into_iter().collect();
        for j in 0..self.ny {
            let y = self.y(j);
            for i in 0..self.nx {
                let x = self.x_snapped(i, &specials);
                let kind = if edge_tip.is_some_and(|a| y == 0.0 && x >= a) {
                    NodeKind::Edge
                } else if i == 0 || j == 0 || i + 1 == self.nx || j + 1 == self.ny {
                    NodeKind::OuterBoundary
                } else if delta_line && x == 0.0 {
                    NodeKind::DeltaLine
                } else {
                    NodeKind::Interior
                };
                mask.push(kind);
            }
        }
        mask
    }
}

fn snap(v: f64, h: f64, specials: &[f64]) -> f64 {
    if v.abs() <= SNAP * h {
        return 0.0;
    }
    for &s in specials {
        if (v - s).abs() <= SNAP * h {
            return s;
        }
    }
    v
}

fn line_index(v: f64, origin: f64, h: f64, n: usize) -> Option<usize> {
    let t = (v - origin) / h;
    let i = t.round();
    if (t - i).abs() <= SNAP && i >= 0.0 && (i as usize) < n {
        Some(i as usize)
    } else {
        None
    }
}

/// Nodes left out of a residual or comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exclusion {
    /// Tip abscissa of an edge ray whose neighbourhood is excluded.
    pub edge_tip: Option<f64>,
    /// Half-width, in cells, of the bands around the edge and the delta line.
    pub band: usize,
    /// Exclude the band around `x = 0`.
    pub delta_line: bool,
    /// Physical radius about the tip `(a, 0)` that is excluded.
    pub tip_radius: f64,
}

impl Exclusion {
    pub fn edge(a: f64) -> Self {
        Self {
            edge_tip: Some(a),
            band: 2,
            delta_line: false,
            tip_radius: 0.0,
        }
    }

    pub fn with_tip_radius(mut self, r: f64) -> Self {
        self.tip_radius = r;
        self
    }

    pub fn with_delta_line(mut self) -> Self {
        self.delta_line = true;
        self
    }

    pub fn excludes(&self, spec: &GridSpec, x: f64, y: f64) -> bool {
        let bx = self.band as f64 * spec.dx * (1.0 + 1e-9);
        let by = self.band as f64 * spec.dy * (1.0 + 1e-9);
        if let Some(a) = self.edge_tip {
            if y.abs() <= by && x >= a - bx {
                return true;
            }
            if (x - a).hypot(y) < self.tip_radius {
                return true;
            }
        }
        self.delta_line && x.abs() <= bx
    }
}

/// Complex samples on a [`GridSpec`], with a per-node classification.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub spec: GridSpec,
    pub values: Vec<Complex64>,
    pub mask: Vec<NodeKind>,
}

impl FieldGrid {
    pub fn new(spec: GridSpec, values: Vec<Complex64>, mask: Vec<NodeKind>) -> Result<Self> {
        if values.len() != spec.len() || mask.len() != spec.len() {
            return Err(Error::GridMismatch(format!(
                "{}x{} grid with {} values and {} mask entries",
                spec.nx,
                spec.ny,
                values.len(),
                mask.len()
            )));
        }
        Ok(Self { spec, values, mask })
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[self.spec.index(i, j)]
    }

    pub fn kind(&self, i: usize, j: usize) -> NodeKind {
        self.mask[self.spec.index(i, j)]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Writes the `x,y,re,im` CSV with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x,y,re,im")?;
        for j in 0..self.spec.ny {
            let y = self.spec.y(j);
            for i in 0..self.spec.nx {
                let v = self.at(i, j);
                writeln!(w, "{:.16e},{:.16e},{:.16e},{:.16e}", self.spec.x(i), y, v.re, v.im)?;
            }
        }
        Ok(())
    }
}

/// One row of the CSV format.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub x: f64,
    pub y: f64,
    pub value: Complex64,
}

/// Reads back a file written by [`FieldGrid::write_csv`].
pub fn read_csv<R: BufRead>(r: R) -> Result<Vec<Sample>> {
    let mut lines = r.lines();
    let header = lines.next().transpose()?;
    if header.as_deref().map(str::trim) != Some("x,y,re,im") {
        return Err(Error::Parse("missing `x,y,re,im` header".into()));
    }
    let mut out = Vec::new();
    for (n, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<f64> = line
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse(format!("line {}: {e}", n + 2)))?;
        if cols.len() != 4 {
            return Err(Error::Parse(format!("line {}: expected 4 columns", n + 2)));
        }
        out.push(Sample {
            x: cols[0],
            y: cols[1],
            value: Complex64::new(cols[2], cols[3]),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapping_and_lookup() {
        let g = GridSpec::new(-1.0, -1.0, 0.1, 0.1, 21, 21).unwrap();
        assert_eq!(g.x(10), 0.0);
        assert_eq!(g.y(10), 0.0);
        assert_eq!(g.x_snapped(13, &[0.3]), 0.3);
        assert_eq!(g.column_of(0.3), Some(13));
        assert_eq!(g.column_of(0.35), None);
        assert_eq!(g.row_of(5.0), None);
    }

    #[test]
    fn mask_priorities() {
        let g = GridSpec::new(-1.0, -1.0, 0.5, 0.5, 5, 5).unwrap();
        let m = g.mask(Some(0.0), true);
        // tip at the delta line, and the edge runs through the right boundary
        assert_eq!(m[g.index(2, 2)], NodeKind::Edge);
        assert_eq!(m[g.index(4, 2)], NodeKind::Edge);
        assert_eq!(m[g.index(1, 2)], NodeKind::Interior);
        assert_eq!(m[g.index(2, 1)], NodeKind::DeltaLine);
        assert_eq!(m[g.index(2, 0)], NodeKind::OuterBoundary);
        let count = m.iter().filter(|k| **k == NodeKind::Edge).count();
        assert_eq!(count, 3);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let g = GridSpec::new(-0.3, 0.7, 0.1, 0.2, 3, 4).unwrap();
        let values: Vec<Complex64> = (0..g.len())
            .map(|n| Complex64::new((n as f64 * 0.37).sin() / 3.0, 1e-300 * n as f64))
            .collect();
        let field = FieldGrid::new(g, values.clone(), g.mask(None, false)).unwrap();
        let mut buf = Vec::new();
        field.write_csv(&mut buf).unwrap();
        let back = read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.len(), g.len());
        for (s, v) in back.iter().zip(&values) {
            assert_eq!(s.value, *v);
        }
        assert_eq!(back[1].x, g.x(1));
        assert_eq!(back[g.nx].y, g.y(1));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(GridSpec::new(0.0, 0.0, 0.0, 1.0, 5, 5).is_err());
        assert!(read_csv("a,b\n".as_bytes()).is_err());
        assert!(read_csv("x,y,re,im\n1,2,3\n".as_bytes()).is_err());
        let g = GridSpec::new(0.0, 0.0, 1.0, 1.0, 3, 3).unwrap();
        assert!(FieldGrid::new(g, vec![], vec![]).is_err());
    }
}
