use crate::grid::{Exclusion, FieldGrid, NodeKind};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RegionReport {
    pub name: &'static str,
    pub nodes: usize,
    pub l2_rel: f64,
    pub max_rel: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub l2_rel: f64,
    pub max_rel: f64,
    pub nodes: usize,
    /// The same measures restricted to the four quadrants about the origin.
    pub regions: Vec<RegionReport>,
}

const QUADRANTS: [&str; 4] = ["x<0,y<0", "x>=0,y<0", "x<0,y>=0", "x>=0,y>=0"];

#[derive(Default, Clone, Copy)]
struct Sums {
    diff2: f64,
    ref2: f64,
    diff_max: f64,
    ref_max: f64,
    nodes: usize,
}

impl Sums {
    fn rel(&self) -> (f64, f64) {
        let l2 = if self.ref2 > 0.0 { (self.diff2 / self.ref2).sqrt() } else { self.diff2.sqrt() };
        let max = if self.ref_max > 0.0 { self.diff_max / self.ref_max } else { self.diff_max };
        (l2, max)
    }
}

/// Relative L2 and max-norm discrepancy of `fd` against `analytic`.
///
/// Outer-boundary nodes are skipped, and so is every node that `exclusion`
/// rules out or that lies within `exclusion.band` cells of an edge or
/// delta-line node.
pub fn compare(analytic: &FieldGrid, fd: &FieldGrid, exclusion: &Exclusion) -> Result<CompareReport> {
    if analytic.spec != fd.spec {
        return Err(Error::GridMismatch("the two fields live on different grids".into()));
    }
    let spec = analytic.spec;
    let band = exclusion.band as isize;
    let special = |m: NodeKind| m == NodeKind::Edge || (exclusion.delta_line && m == NodeKind::DeltaLine);
    let specials: Vec<f64> = exclusion.edge_tip.into_iter().collect();
    let mut total = Sums::default();
    let mut quads = [Sums::default(); 4];
    for j in 0..spec.ny {
        for i in 0..spec.nx {
            if analytic.kind(i, j) == NodeKind::OuterBoundary || analytic.kind(i, j) == NodeKind::Edge {
                continue;
            }
            let x = spec.x_snapped(i, &specials);
            let y = spec.y(j);
            if exclusion.excludes(&spec, x, y) {
                continue;
            }
            let near = (-band..=band).any(|dj| {
                (-band..=band).any(|di| {
                    let (ii, jj) = (i as isize + di, j as isize + dj);
                    ii >= 0
                        && jj >= 0
                        && (ii as usize) < spec.nx
                        && (jj as usize) < spec.ny
                        && special(analytic.kind(ii as usize, jj as usize))
                })
            });
            if near {
                continue;
            }
            let a = analytic.at(i, j);
            let d = (a - fd.at(i, j)).norm();
            let q = usize::from(x >= 0.0) + 2 * usize::from(y >= 0.0);
            for s in [&mut total, &mut quads[q]] {
                s.diff2 += d * d;
                s.ref2 += a.norm_sqr();
                s.diff_max = s.diff_max.max(d);
                s.ref_max = s.ref_max.max(a.norm());
                s.nodes += 1;
            }
        }
    }
    if total.nodes == 0 {
        return Err(Error::GridMismatch("no nodes left to compare".into()));
    }
    let (l2_rel, max_rel) = total.rel();
    let regions = QUADRANTS
        .iter()
        .zip(quads)
        .map(|(name, s)| {
            let (l2_rel, max_rel) = s.rel();
            RegionReport {
                name,
                nodes: s.nodes,
                l2_rel,
                max_rel,
            }
        })
        .collect();
    Ok(CompareReport {
        l2_rel,
        max_rel,
        nodes: total.nodes,
        regions,
    })
}
