//! Deterministic SVG rendering of the landscape panel figure.

use crate::error::Result;
use crate::params::ModelParams;
use crate::thermo;

use super::{contours, find_critical_points, CriticalKind, LandscapeParams, Polyline, Window};

/// Layout and sampling options for [`render_figure`].
#[derive(Debug, Clone)]
pub struct FigureStyle {
    /// Side length of one square panel in pixels.
    pub panel_px: f64,
    /// Gap between panels in pixels.
    pub gap_px: f64,
    /// Evaluation window shared by all panels.
    pub window: Window,
    /// Contour grid resolution per panel (cells per side).
    pub n_cells: usize,
    /// Number of non-saddle levels per panel (geometrically spaced around
    /// the saddle level).
    pub extra_levels: usize,
}

impl Default for FigureStyle {
    fn default() -> Self {
        FigureStyle {
            panel_px: 220.0,
            gap_px: 14.0,
            window: Window::default_figure(),
            n_cells: 400,
            extra_levels: 12,
        }
    }
}

/// The contour levels drawn in one panel: every saddle level plus
/// `extra_levels` levels geometrically spaced around their mean.
fn panel_levels(
    lp: LandscapeParams,
    params: &ModelParams,
    style: &FigureStyle,
) -> Result<Vec<f64>> {
    let cps = find_critical_points(lp, params)?;
    let mut saddle_levels: Vec<f64> = cps
        .iter()
        .filter(|cp| matches!(cp.kind, CriticalKind::Saddle | CriticalKind::Degenerate))
        .map(|cp| cp.level)
        .collect();
    if saddle_levels.is_empty() {
        saddle_levels = cps.iter().map(|cp| cp.level).collect();
    }
    saddle_levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
    saddle_levels.dedup_by(|a, b| (*a - *b).abs() < 1e-12);

    let center = saddle_levels.iter().sum::<f64>() / saddle_levels.len().max(1) as f64;
    // Span estimate from the window corners and center line.
    let w = &style.window;
    let mut span: f64 = 1e-3;
    for &(c, y) in &[
        (w.c_min, 0.0),
        (w.c_max, 0.0),
        (0.5 * (w.c_min + w.c_max), w.y_max),
        (w.c_min, w.y_max),
        (w.c_max, w.y_max),
    ] {
        if let Ok(v) = super::gamma(super::PhasePoint::new(c, y), lp, params) {
            span = span.max((v - center).abs());
        }
    }
    let mut levels = saddle_levels;
    let half = style.extra_levels / 2;
    let d0 = span / 120.0;
    let ratio: f64 = 1.7;
    for k in 0..half {
        let d = d0 * ratio.powi(k as i32);
        levels.push(center + d);
        levels.push(center - d);
    }
    levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(levels)
}

fn fmt(x: f64) -> String {
    format!("{:.3}", x)
}

/// Renders a rows×columns grid of contour panels (rows: θ offsets, columns:
/// π offsets relative to `p*`) as an SVG 1.1 document. Output is
/// byte-identical for identical inputs.
pub fn render_figure(
    theta_offsets: &[f64],
    pi_offsets: &[f64],
    params: &ModelParams,
    style: &FigureStyle,
) -> Result<String> {
    let p_star = thermo::critical_pressure(params)?;
    let rows = theta_offsets.len();
    let cols = pi_offsets.len();
    let ps = style.panel_px;
    let gap = style.gap_px;
    let margin = 30.0;
    let width = margin * 2.0 + cols as f64 * ps + (cols.saturating_sub(1)) as f64 * gap;
    let height = margin * 2.0 + rows as f64 * ps + (rows.saturating_sub(1)) as f64 * gap;

    let w = &style.window;
    let sx = |c: f64| (c - w.c_min) / (w.c_max - w.c_min) * ps;
    let sy = |y: f64| ps - (y - w.y_min) / (w.y_max - w.y_min) * ps;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        fmt(width),
        fmt(height),
        fmt(width),
        fmt(height)
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    for (r, dth) in theta_offsets.iter().enumerate() {
        for (col, dpi) in pi_offsets.iter().enumerate() {
            let lp = LandscapeParams::new(params.theta_star + dth, p_star + dpi);
            let x0 = margin + col as f64 * (ps + gap);
            let y0 = margin + r as f64 * (ps + gap);
            svg.push_str(&format!(
                "<g transform=\"translate({},{})\">\n",
                fmt(x0),
                fmt(y0)
            ));
            svg.push_str(&format!(
                "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" \
                 fill=\"none\" stroke=\"#888\" stroke-width=\"1\"/>\n",
                fmt(ps),
                fmt(ps)
            ));

            let cps = find_critical_points(lp, params)?;
            let levels = panel_levels(lp, params, style)?;
            let saddle_set: Vec<f64> = cps
                .iter()
                .filter(|cp| {
                    matches!(cp.kind, CriticalKind::Saddle | CriticalKind::Degenerate)
                })
                .map(|cp| cp.level)
                .collect();
            let pls: Vec<Polyline> =
                contours(lp, params, style.window, style.n_cells, &levels)?;
            for pl in &pls {
                let is_saddle_level =
                    saddle_set.iter().any(|s| (s - pl.level).abs() < 1e-12);
                let (color, width) = if is_saddle_level {
                    ("#c0392b", 1.4)
                } else {
                    ("#34495e", 0.7)
                };
                let pts: Vec<String> = pl
                    .points
                    .iter()
                    .map(|&(c, y)| format!("{},{}", fmt(sx(c)), fmt(sy(y))))
                    .collect();
                svg.push_str(&format!(
                    "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" \
                     stroke-width=\"{}\"/>\n",
                    pts.join(" "),
                    color,
                    width
                ));
            }
            for cp in &cps {
                let marker = match cp.kind {
                    CriticalKind::Saddle => "#c0392b",
                    CriticalKind::Maximum => "#2980b9",
                    CriticalKind::Minimum => "#27ae60",
                    CriticalKind::Degenerate => "#8e44ad",
                };
                svg.push_str(&format!(
                    "<circle cx=\"{}\" cy=\"{}\" r=\"2.2\" fill=\"{}\"/>\n",
                    fmt(sx(cp.point.c)),
                    fmt(sy(cp.point.y)),
                    marker
                ));
            }
            svg.push_str(&format!(
                "<text x=\"4\" y=\"12\" font-size=\"9\" fill=\"#555\">\
                 d&#952;={} d&#960;={}</text>\n",
                fmt(*dth),
                fmt(*dpi)
            ));
            svg.push_str("</g>\n");
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_style() -> FigureStyle {
        FigureStyle { panel_px: 120.0, n_cells: 60, ..FigureStyle::default() }
    }

    #[test]
    fn default_grid_has_15_panels() {
        let params = ModelParams::default();
        let svg = render_figure(
            &[0.16, 0.0, -0.08],
            &[-0.010, -0.001, 0.0, 0.001, 0.010],
            &params,
            &small_style(),
        )
        .unwrap();
        assert_eq!(svg.matches("<g transform").count(), 15);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn single_degenerate_panel() {
        let params = ModelParams::default();
        let svg = render_figure(&[0.0], &[0.0], &params, &small_style()).unwrap();
        assert_eq!(svg.matches("<g transform").count(), 1);
        // The degenerate critical point marker.
        assert_eq!(svg.matches("#8e44ad").count(), 1);
    }

    #[test]
    fn rendering_is_deterministic() {
        let params = ModelParams::default();
        let style = small_style();
        let a = render_figure(&[-0.08], &[0.0, 0.001], &params, &style).unwrap();
        let b = render_figure(&[-0.08], &[0.0, 0.001], &params, &style).unwrap();
        assert_eq!(a, b);
    }
}
