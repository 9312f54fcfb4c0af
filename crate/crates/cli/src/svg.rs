//! Deterministic SVG figures: raster regions as merged row-run
//! rectangles under point-cloud scatter layers, with a small legend.
//!
//! Output bytes depend only on the input layers: coordinates are
//! written with fixed six-decimal formatting and layers render in the
//! order given.

use std::fmt::Write as _;

use indspec::cplane::{CompactSetEstimate, HullRegion, SetKind};

pub enum Layer<'a> {
    Region { region: &'a HullRegion, label: String },
    Points { set: &'a CompactSetEstimate, label: String },
}

pub const MAX_LAYERS: usize = 10;

const REGION_FILLS: [&str; 3] = ["#c6dbef", "#fdd0a2", "#c7e9c0"];
const POINT_FILLS: [&str; 5] = ["#1f4e79", "#b30000", "#2d6a2d", "#6a3d9a", "#8c510a"];

struct Frame {
    min_x: f64,
    min_y: f64,
    scale: f64,
    height: f64,
}

impl Frame {
    // SVG y grows downward; the complex plane's imaginary axis up
    fn map(&self, re: f64, im: f64) -> (f64, f64) {
        (
            (re - self.min_x) * self.scale,
            self.height - (im - self.min_y) * self.scale,
        )
    }
}

fn layer_bounds(layer: &Layer) -> Option<(f64, f64, f64, f64)> {
    match layer {
        Layer::Region { region, .. } => {
            if region.is_empty() {
                return None;
            }
            let o = region.origin();
            let h = region.cell_size();
            Some((
                o.re - h,
                o.im - h,
                o.re + region.cols() as f64 * h,
                o.im + region.rows() as f64 * h,
            ))
        }
        Layer::Points { set, .. } => {
            if set.is_empty() {
                return None;
            }
            let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
            let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
            for p in set.points() {
                min_x = min_x.min(p.re);
                min_y = min_y.min(p.im);
                max_x = max_x.max(p.re);
                max_y = max_y.max(p.im);
            }
            Some((min_x, min_y, max_x, max_y))
        }
    }
}

pub fn marker_label(kind: SetKind) -> &'static str {
    match kind {
        SetKind::ExactCurve => "curve samples",
        SetKind::Eigenvalues => "eigenvalues",
        SetKind::RegionRaster => "raster points",
        SetKind::Empty => "empty set",
    }
}

/// Renders the layers to a standalone SVG document.
pub fn render(layers: &[Layer]) -> Result<String, indspec::Error> {
    if layers.len() > MAX_LAYERS {
        return Err(indspec::Error::InvalidParameter {
            what: format!("at most {MAX_LAYERS} figure layers, got {}", layers.len()),
        });
    }
    let bounds = layers.iter().filter_map(layer_bounds).fold(
        None::<(f64, f64, f64, f64)>,
        |acc, b| match acc {
            None => Some(b),
            Some(a) => Some((a.0.min(b.0), a.1.min(b.1), a.2.max(b.2), a.3.max(b.3))),
        },
    );
    // empty figure still renders axes
    let (min_x, min_y, max_x, max_y) = bounds.unwrap_or((-1.0, -1.0, 1.0, 1.0));
    let pad = 0.05 * ((max_x - min_x).max(max_y - min_y)).max(1e-9);
    let (min_x, min_y, max_x, max_y) = (min_x - pad, min_y - pad, max_x + pad, max_y + pad);

    let width_px = 640.0;
    let scale = width_px / (max_x - min_x);
    let height_px = (max_y - min_y) * scale;
    let frame = Frame {
        min_x,
        min_y,
        scale,
        height: height_px,
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width_px:.0}" height="{height_px:.6}" viewBox="0 0 {width_px:.0} {height_px:.6}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);

    // axes through the origin if visible
    if min_x < 0.0 && max_x > 0.0 {
        let (x, _) = frame.map(0.0, 0.0);
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.6}" y1="0" x2="{x:.6}" y2="{height_px:.6}" stroke="#cccccc" stroke-width="1"/>"##
        );
    }
    if min_y < 0.0 && max_y > 0.0 {
        let (_, y) = frame.map(0.0, 0.0);
        let _ = writeln!(
            svg,
            r##"<line x1="0" y1="{y:.6}" x2="{width_px:.0}" y2="{y:.6}" stroke="#cccccc" stroke-width="1"/>"##
        );
    }

    let mut region_idx = 0usize;
    let mut point_idx = 0usize;
    let mut legend: Vec<(String, String, bool)> = Vec::new();

    for layer in layers {
        match layer {
            Layer::Region { region, label } => {
                let fill = REGION_FILLS[region_idx % REGION_FILLS.len()];
                region_idx += 1;
                legend.push((label.clone(), fill.to_string(), true));
                if region.is_empty() {
                    continue;
                }
                let h = region.cell_size();
                let _ = writeln!(svg, r#"<g fill="{fill}">"#);
                // merge consecutive true cells per row into one rect
                for r in 0..region.rows() {
                    let mut c = 0;
                    while c < region.cols() {
                        if !region.cell(r, c) {
                            c += 1;
                            continue;
                        }
                        let start = c;
                        while c < region.cols() && region.cell(r, c) {
                            c += 1;
                        }
                        let first = region.cell_center(r, start);
                        let (x, y) = frame.map(first.re - 0.5 * h, first.im + 0.5 * h);
                        let w = (c - start) as f64 * h * frame.scale;
                        let hh = h * frame.scale;
                        let _ = writeln!(
                            svg,
                            r#"<rect x="{x:.6}" y="{y:.6}" width="{w:.6}" height="{hh:.6}"/>"#
                        );
                    }
                }
                let _ = writeln!(svg, "</g>");
            }
            Layer::Points { set, label } => {
                let fill = POINT_FILLS[point_idx % POINT_FILLS.len()];
                point_idx += 1;
                legend.push((
                    format!("{label} ({})", marker_label(set.kind())),
                    fill.to_string(),
                    false,
                ));
                if set.is_empty() {
                    continue;
                }
                let _ = writeln!(svg, r#"<g fill="{fill}">"#);
                for p in set.points() {
                    let (x, y) = frame.map(p.re, p.im);
                    let _ = writeln!(svg, r#"<circle cx="{x:.6}" cy="{y:.6}" r="1.6"/>"#);
                }
                let _ = writeln!(svg, "</g>");
            }
        }
    }

    for (i, (label, fill, is_region)) in legend.iter().enumerate() {
        let y = 16.0 + 18.0 * i as f64;
        if *is_region {
            let _ = writeln!(
                svg,
                r#"<rect x="8" y="{:.6}" width="12" height="12" fill="{fill}"/>"#,
                y - 10.0
            );
        } else {
            let _ = writeln!(
                svg,
                r#"<circle cx="14" cy="{:.6}" r="4" fill="{fill}"/>"#,
                y - 4.0
            );
        }
        let escaped = label.replace('&', "&amp;").replace('<', "&lt;");
        let _ = writeln!(
            svg,
            r#"<text x="26" y="{y:.6}" font-family="monospace" font-size="12">{escaped}</text>"#
        );
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}
