use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// Markers only, linear axes.
    Scatter,
    /// Logarithmic y axis; nonpositive values are drawn at the floor.
    SemilogY,
    /// Linear axes, typically rate markers plus a reference curve.
    RateCurve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Marker {
    None,
    Circle,
    Cross,
    Dot,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub color: String,
    pub marker: Marker,
    pub line: bool,
}

impl Series {
    pub fn markers(label: &str, color: &str, marker: Marker, points: Vec<(f64, f64)>) -> Self {
        Self {
            label: label.to_string(),
            points,
            color: color.to_string(),
            marker,
            line: false,
        }
    }

    pub fn line(label: &str, color: &str, points: Vec<(f64, f64)>) -> Self {
        Self {
            label: label.to_string(),
            points,
            color: color.to_string(),
            marker: Marker::None,
            line: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub kind: PlotKind,
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 45.0;
const BOTTOM: f64 = 60.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Step from {1, 2, 5} x 10^k giving roughly `target` intervals.
fn nice_step(span: f64, target: f64) -> f64 {
    let raw = span / target;
    let mag = 10f64.powf(raw.log10().floor());
    let frac = raw / mag;
    let nice = if frac <= 1.0 {
        1.0
    } else if frac <= 2.0 {
        2.0
    } else if frac <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn ticks(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn tick_label(v: f64, step: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if v.abs() >= 1e5 || v.abs() < 1e-3 {
        return format!("{v:.1e}");
    }
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    format!("{v:.decimals$}")
}

fn padded(lo: f64, hi: f64, unit: f64) -> (f64, f64) {
    if hi > lo {
        let pad = 0.03 * (hi - lo);
        (lo - pad, hi + pad)
    } else {
        (lo - unit, hi + unit)
    }
}

/// Renders the plot as a self-contained SVG document.
pub fn render_svg(plot: &Plot) -> Result<String> {
    if plot.series.iter().all(|s| s.points.is_empty()) {
        return Err(Error::InvalidConfig("plot has no data".into()));
    }
    let log_y = plot.kind == PlotKind::SemilogY;

    let finite: Vec<(f64, f64)> = plot
        .series
        .iter()
        .flat_map(|s| s.points.iter().copied())
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .collect();
    if finite.is_empty() {
        return Err(Error::InvalidConfig("plot has no finite data".into()));
    }

    // floor one decade below the smallest positive value
    let min_positive = finite
        .iter()
        .map(|p| p.1)
        .filter(|y| *y > 0.0)
        .fold(f64::INFINITY, f64::min);
    let floor_exp = if min_positive.is_finite() {
        min_positive.log10().floor() - 1.0
    } else {
        -16.0
    };
    let mut clamped = 0usize;
    let transform_y = |y: f64| -> f64 {
        if log_y {
            if y > 0.0 {
                y.log10().max(floor_exp)
            } else {
                floor_exp
            }
        } else {
            y
        }
    };
    if log_y {
        clamped = finite.iter().filter(|p| p.1 <= 0.0).count();
    }

    let (xmin, xmax) = finite
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.0), hi.max(p.0)));
    let (ymin, ymax) = finite.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        let y = transform_y(p.1);
        (lo.min(y), hi.max(y))
    });
    let (x0, x1) = padded(xmin, xmax, 0.5);
    let (y0, y1) = if log_y {
        let (lo, hi) = (ymin.floor(), ymax.ceil());
        if hi > lo {
            (lo, hi)
        } else {
            (lo - 1.0, hi + 1.0)
        }
    } else {
        padded(ymin, ymax, 0.5)
    };

    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (1.0 - (y - y0) / (y1 - y0)) * ph;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        LEFT + pw / 2.0,
        escape(&plot.title)
    );
    let _ = writeln!(
        out,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );

    let xstep = nice_step(x1 - x0, 6.0);
    for v in ticks(x0, x1, xstep) {
        let px = sx(v);
        let _ = writeln!(
            out,
            r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + ph,
            TOP + ph + 5.0,
            TOP + ph + 19.0,
            tick_label(v, xstep)
        );
    }
    let ystep = if log_y {
        ((y1 - y0) / 8.0).ceil().max(1.0)
    } else {
        nice_step(y1 - y0, 6.0)
    };
    for v in ticks(y0, y1, ystep) {
        let py = sy(v);
        let label = if log_y {
            format!("1e{}", v as i64)
        } else {
            tick_label(v, ystep)
        };
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 15.0,
        escape(&plot.x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="18" y="{:.1}" text-anchor="middle" transform="rotate(-90 18 {:.1})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(&plot.y_label)
    );

    let _ = writeln!(
        out,
        r#"<clipPath id="plot-area"><rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}"/></clipPath><g clip-path="url(#plot-area)">"#
    );
    for s in &plot.series {
        let pts: Vec<(f64, f64)> = s
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| (sx(x), sy(transform_y(y))))
            .collect();
        if s.line && pts.len() > 1 {
            let mut d = String::new();
            for (px, py) in &pts {
                let _ = write!(d, "{px:.2},{py:.2} ");
            }
            let _ = writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
                d.trim_end(),
                s.color
            );
        }
        for (px, py) in &pts {
            marker(&mut out, s.marker, *px, *py, &s.color);
        }
    }
    let _ = writeln!(out, "</g>");

    let lx = LEFT + pw + 15.0;
    for (i, s) in plot.series.iter().enumerate() {
        let ly = TOP + 12.0 + 20.0 * i as f64;
        if s.line {
            let _ = writeln!(
                out,
                r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{}" stroke-width="1.5"/>"#,
                lx + 24.0,
                s.color
            );
        }
        marker(&mut out, s.marker, lx + 12.0, ly, &s.color);
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}">{}</text>"#,
            lx + 30.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
    if clamped > 0 {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="11" fill="dimgray">{clamped} value(s) &lt;= 0 drawn at 1e{}</text>"#,
            LEFT + 6.0,
            TOP + ph - 6.0,
            floor_exp as i64
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn marker(out: &mut String, m: Marker, x: f64, y: f64, color: &str) {
    let _ = match m {
        Marker::None => Ok(()),
        Marker::Circle => writeln!(
            out,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="none" stroke="{color}"/>"#
        ),
        Marker::Dot => writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="1.5" fill="{color}"/>"#),
        Marker::Cross => writeln!(
            out,
            r#"<path d="M{:.2},{:.2}L{:.2},{:.2}M{:.2},{:.2}L{:.2},{:.2}" stroke="{color}"/>"#,
            x - 3.0,
            y - 3.0,
            x + 3.0,
            y + 3.0,
            x - 3.0,
            y + 3.0,
            x + 3.0,
            y - 3.0
        ),
    };
}

pub fn write_svg(plot: &Plot, path: &Path) -> Result<()> {
    let svg = render_svg(plot)?;
    std::fs::write(path, svg).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
