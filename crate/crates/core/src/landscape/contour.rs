//! Marching-squares isoline extraction on a rectangular window of the
//! `(c, y)` plane.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::params::ModelParams;

use super::{gamma, LandscapeParams, PhasePoint};

/// Rectangular evaluation window in the `(c, y)` plane.
#[derive(Debug, Clone, Copy)]
pub struct Window {
    pub c_min: f64,
    pub c_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Window {
    /// Default window containing all critical points and heteroclinics of
    /// the figure's parameter grid with margin.
    pub fn default_figure() -> Self {
        Window { c_min: 0.02, c_max: 0.98, y_min: -0.35, y_max: 0.35 }
    }

    fn validate(&self) -> Result<()> {
        if !(self.c_min < self.c_max && self.y_min < self.y_max) {
            return Err(Error::domain("empty contour window".to_string()));
        }
        if !(self.c_min > 0.0 && self.c_max < 1.0) {
            return Err(Error::domain(format!(
                "contour window c-range [{}, {}] not inside (0,1)",
                self.c_min, self.c_max
            )));
        }
        Ok(())
    }
}

/// An isoline of `Γ` at a fixed level.
#[derive(Debug, Clone)]
pub struct Polyline {
    pub level: f64,
    /// Vertices as `(c, y)` pairs.
    pub points: Vec<(f64, f64)>,
}

impl Polyline {
    pub fn is_closed(&self) -> bool {
        self.points.len() > 2 && {
            let a = self.points[0];
            let b = *self.points.last().unwrap();
            (a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12
        }
    }
}

// Edge of the node grid: (ix, iy) of the lower-left node plus orientation
// (false = horizontal, true = vertical).
type EdgeId = (usize, usize, bool);

/// Marching-squares isolines of `Γ` over `window` on an `n_cells × n_cells`
/// grid, one polyline set per requested level.
pub fn contours(
    lp: LandscapeParams,
    params: &ModelParams,
    window: Window,
    n_cells: usize,
    levels: &[f64],
) -> Result<Vec<Polyline>> {
    window.validate()?;
    if n_cells < 2 {
        return Err(Error::domain("contour grid needs at least 2 cells".to_string()));
    }
    if levels.iter().any(|l| !l.is_finite()) {
        return Err(Error::domain("contour levels must be finite".to_string()));
    }
    let n = n_cells;
    let cx = |i: usize| window.c_min + (window.c_max - window.c_min) * i as f64 / n as f64;
    let cy = |j: usize| window.y_min + (window.y_max - window.y_min) * j as f64 / n as f64;

    let mut values = vec![f64::NAN; (n + 1) * (n + 1)];
    for j in 0..=n {
        for i in 0..=n {
            values[j * (n + 1) + i] =
                gamma(PhasePoint::new(cx(i), cy(j)), lp, params).unwrap_or(f64::NAN);
        }
    }
    let val = |i: usize, j: usize| values[j * (n + 1) + i];

    let mut out = Vec::new();
    for &level in levels {
        let mut crossings: HashMap<EdgeId, (f64, f64)> = HashMap::new();
        let mut segments: Vec<(EdgeId, EdgeId)> = Vec::new();

        // Crossing point on an edge, cached so both adjacent cells share it.
        let edge_point = |id: EdgeId, crossings: &mut HashMap<EdgeId, (f64, f64)>| {
            *crossings.entry(id).or_insert_with(|| {
                let (i, j, vertical) = id;
                let (va, vb) = if vertical {
                    (val(i, j), val(i, j + 1))
                } else {
                    (val(i, j), val(i + 1, j))
                };
                let t = ((level - va) / (vb - va)).clamp(0.0, 1.0);
                if vertical {
                    (cx(i), cy(j) + t * (cy(j + 1) - cy(j)))
                } else {
                    (cx(i) + t * (cx(i + 1) - cx(i)), cy(j))
                }
            })
        };

        for j in 0..n {
            for i in 0..n {
                let corners = [val(i, j), val(i + 1, j), val(i + 1, j + 1), val(i, j + 1)];
                if corners.iter().any(|v| v.is_nan()) {
                    continue;
                }
                let mut case = 0usize;
                for (bit, v) in corners.iter().enumerate() {
                    if *v >= level {
                        case |= 1 << bit;
                    }
                }
                if case == 0 || case == 15 {
                    continue;
                }
                let bottom: EdgeId = (i, j, false);
                let right: EdgeId = (i + 1, j, true);
                let top: EdgeId = (i, j + 1, false);
                let left: EdgeId = (i, j, true);
                let push = |a: EdgeId, b: EdgeId,
                                segments: &mut Vec<(EdgeId, EdgeId)>,
                                crossings: &mut HashMap<EdgeId, (f64, f64)>| {
                    edge_point(a, crossings);
                    edge_point(b, crossings);
                    segments.push((a, b));
                };
                match case {
                    1 | 14 => push(left, bottom, &mut segments, &mut crossings),
                    2 | 13 => push(bottom, right, &mut segments, &mut crossings),
                    3 | 12 => push(left, right, &mut segments, &mut crossings),
                    4 | 11 => push(right, top, &mut segments, &mut crossings),
                    6 | 9 => push(bottom, top, &mut segments, &mut crossings),
                    7 | 8 => push(left, top, &mut segments, &mut crossings),
                    5 | 10 => {
                        // Saddle cell: disambiguate with the center value.
                        let center = 0.25 * corners.iter().sum::<f64>();
                        let flip = (center >= level) == (case == 5);
                        if flip {
                            push(left, bottom, &mut segments, &mut crossings);
                            push(right, top, &mut segments, &mut crossings);
                        } else {
                            push(left, top, &mut segments, &mut crossings);
                            push(bottom, right, &mut segments, &mut crossings);
                        }
                    }
                    _ => unreachable!(),
                }
            }
        }

        out.extend(chain_segments(level, &segments, &crossings));
    }
    Ok(out)
}

/// Joins shared-edge segments into polylines. Iteration is by segment index
/// so the output order is deterministic.
fn chain_segments(
    level: f64,
    segments: &[(EdgeId, EdgeId)],
    crossings: &HashMap<EdgeId, (f64, f64)>,
) -> Vec<Polyline> {
    let mut adj: HashMap<EdgeId, Vec<usize>> = HashMap::new();
    for (idx, (a, b)) in segments.iter().enumerate() {
        adj.entry(*a).or_default().push(idx);
        adj.entry(*b).or_default().push(idx);
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();

    let walk = |start: usize, used: &mut Vec<bool>| -> Vec<EdgeId> {
        let (a, b) = segments[start];
        used[start] = true;
        let mut path = vec![a, b];
        // Extend forward from the tail, then backward from the head.
        for end in 0..2 {
            loop {
                let tip = if end == 0 { *path.last().unwrap() } else { path[0] };
                let Some(cands) = adj.get(&tip) else { break };
                let Some(&next) = cands.iter().find(|&&s| !used[s]) else { break };
                used[next] = true;
                let (na, nb) = segments[next];
                let other = if na == tip { nb } else { na };
                if end == 0 {
                    path.push(other);
                } else {
                    path.insert(0, other);
                }
            }
        }
        path
    };

    // Open chains first (their endpoints have degree 1), then leftover loops.
    for pass in 0..2 {
        for idx in 0..segments.len() {
            if used[idx] {
                continue;
            }
            let (a, b) = segments[idx];
            let deg_a = adj[&a].len();
            let deg_b = adj[&b].len();
            if pass == 0 && deg_a > 1 && deg_b > 1 {
                continue;
            }
            let path = walk(idx, &mut used);
            let points = path.iter().map(|e| crossings[e]).collect();
            out.push(Polyline { level, points });
        }
    }
    out
}

/// CSV export of contour polylines: `level,c,y` per vertex, one blank line
/// between polylines.
pub fn polylines_to_csv(polylines: &[Polyline]) -> String {
    let mut s = String::from("level,c,y\n");
    for (k, pl) in polylines.iter().enumerate() {
        if k > 0 {
            s.push('\n');
        }
        for (c, y) in &pl.points {
            s.push_str(&format!("{:.12e},{:.12e},{:.12e}\n", pl.level, c, y));
        }
    }
    s
}
