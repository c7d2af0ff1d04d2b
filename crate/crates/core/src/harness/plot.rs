//! Static line plots of a trace: one SVG per monitor plus `trace.dat` and
//! `plots.gp` for gnuplot.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::harness::io::{TraceRow, TRACE_COLUMNS};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 50.0;

/// One curve of a plot.
#[derive(Clone, Debug)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
}

#[derive(Clone, Debug)]
pub struct LinePlot {
    pub title: String,
    pub x_label: String,
    pub log_y: bool,
    pub series: Vec<Series>,
}

impl LinePlot {
    /// Renders the plot. Non-finite points (and non-positive ones on a log
    /// axis) are dropped; `None` if nothing is left to draw.
    pub fn to_svg(&self) -> Option<String> {
        let keep =
            |&(x, y): &(f64, f64)| x.is_finite() && y.is_finite() && (!self.log_y || y > 0.0);
        let ty = |y: f64| if self.log_y { y.log10() } else { y };
        let series: Vec<(&Series, Vec<(f64, f64)>)> = self
            .series
            .iter()
            .map(|s| {
                (
                    s,
                    s.points
                        .iter()
                        .copied()
                        .filter(keep)
                        .map(|(x, y)| (x, ty(y)))
                        .collect(),
                )
            })
            .collect();
        let all: Vec<(f64, f64)> = series.iter().flat_map(|(_, p)| p.iter().copied()).collect();
        if all.is_empty() {
            return None;
        }
        let (x0, x1) = padded_range(all.iter().map(|p| p.0));
        let (y0, y1) = padded_range(all.iter().map(|p| p.1));
        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let sx = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * plot_w;
        let sy = |y: f64| MARGIN_TOP + (y1 - y) / (y1 - y0) * plot_h;

        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            svg,
            r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
        );
        for k in 0..=4 {
            let fx = x0 + (x1 - x0) * k as f64 / 4.0;
            let px = sx(fx);
            let _ = writeln!(
                svg,
                r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                HEIGHT - MARGIN_BOTTOM,
                HEIGHT - MARGIN_BOTTOM + 5.0,
                HEIGHT - MARGIN_BOTTOM + 18.0,
                tick(fx)
            );
            let fy = y0 + (y1 - y0) * k as f64 / 4.0;
            let py = sy(fy);
            let label = if self.log_y {
                format!("1e{}", tick(fy))
            } else {
                tick(fy)
            };
            let _ = writeln!(
                svg,
                r#"<line x1="{:.2}" y1="{py:.2}" x2="{MARGIN_LEFT}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"#,
                MARGIN_LEFT - 5.0,
                MARGIN_LEFT - 8.0,
                py + 4.0
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            MARGIN_LEFT + plot_w / 2.0,
            HEIGHT - 10.0,
            escape(&self.x_label)
        );
        const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];
        for (k, (s, pts)) in series.iter().enumerate() {
            if pts.is_empty() {
                continue;
            }
            let color = COLORS[k % COLORS.len()];
            let path: Vec<String> = pts
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let dash = if s.dashed {
                r#" stroke-dasharray="6,4""#
            } else {
                ""
            };
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"/>"#,
                path.join(" ")
            );
            let ly = MARGIN_TOP + 16.0 + 16.0 * k as f64;
            let lx = WIDTH - MARGIN_RIGHT - 150.0;
            let _ = writeln!(
                svg,
                r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="1.5"{dash}/><text x="{}" y="{}">{}</text>"#,
                lx + 20.0,
                lx + 25.0,
                ly + 4.0,
                escape(&s.label)
            );
        }
        svg.push_str("</svg>\n");
        Some(svg)
    }
}

fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if hi > lo {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    } else {
        let pad = if lo == 0.0 { 1.0 } else { 0.1 * lo.abs() };
        (lo - pad, hi + pad)
    }
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-2 || v.abs() >= 1e4) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Plots every monitor column of a trace. `hemisphere` adds the closed-form
/// `R_max = 6/(1-4t)` overlay. Columns without finite data are skipped.
pub fn plot_trace(rows: &[TraceRow], dir: &Path, hemisphere: bool) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let columns: Vec<Vec<f64>> = (0..TRACE_COLUMNS.len())
        .map(|k| rows.iter().map(|r| r.values()[k]).collect())
        .collect();
    let t = &columns[0];
    let t_tilde = &columns[14];
    let mut written = Vec::new();
    for (k, name) in TRACE_COLUMNS.iter().enumerate() {
        if matches!(*name, "t" | "t_tilde") {
            continue;
        }
        let normalized = matches!(*name, "kappa_tilde" | "spread_norm");
        let (xs, x_label) = if normalized {
            (t_tilde, "t_tilde")
        } else {
            (t, "t")
        };
        let mut plot = LinePlot {
            title: name.to_string(),
            x_label: x_label.to_string(),
            log_y: *name == "R_max",
            series: vec![Series {
                label: name.to_string(),
                points: xs.iter().copied().zip(columns[k].iter().copied()).collect(),
                dashed: false,
            }],
        };
        if hemisphere && *name == "R_max" {
            plot.series.push(Series {
                label: "6/(1-4t)".into(),
                points: t.iter().map(|&t| (t, 6.0 / (1.0 - 4.0 * t))).collect(),
                dashed: true,
            });
        }
        if let Some(svg) = plot.to_svg() {
            let path = dir.join(format!("{name}.svg"));
            fs::write(&path, svg).map_err(|e| Error::io(&path, e))?;
            written.push(path);
        }
    }
    let dat = dir.join("trace.dat");
    fs::write(&dat, gnuplot_data(rows)).map_err(|e| Error::io(&dat, e))?;
    let gp = dir.join("plots.gp");
    fs::write(&gp, gnuplot_script(hemisphere)).map_err(|e| Error::io(&gp, e))?;
    written.extend([dat, gp]);
    Ok(written)
}

fn gnuplot_data(rows: &[TraceRow]) -> String {
    let mut out = format!("# {}\n", TRACE_COLUMNS.join(" "));
    for r in rows {
        let line: Vec<String> = r.values().iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

fn gnuplot_script(hemisphere: bool) -> String {
    let mut out = String::from(
        "set terminal svg size 640,400\nset datafile missing 'NaN'\nset key top right\n",
    );
    for (k, name) in TRACE_COLUMNS.iter().enumerate() {
        if matches!(*name, "t" | "t_tilde") {
            continue;
        }
        let x = if matches!(*name, "kappa_tilde" | "spread_norm") {
            15
        } else {
            1
        };
        let _ = writeln!(
            out,
            "\nset output 'gp_{name}.svg'\nset xlabel '{}'",
            TRACE_COLUMNS[x - 1]
        );
        if *name == "R_max" {
            out.push_str("set logscale y\n");
        }
        let _ = write!(
            out,
            "plot 'trace.dat' using {x}:{} with lines title '{name}'",
            k + 1
        );
        if hemisphere && *name == "R_max" {
            out.push_str(", 6/(1-4*x) with lines dashtype 2 title '6/(1-4t)'");
        }
        out.push('\n');
        if *name == "R_max" {
            out.push_str("unset logscale y\n");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svg_drops_nonfinite_points() {
        let plot = LinePlot {
            title: "a<b".into(),
            x_label: "t".into(),
            log_y: true,
            series: vec![Series {
                label: "y".into(),
                points: vec![(0.0, 1.0), (1.0, f64::NAN), (2.0, 100.0), (3.0, -1.0)],
                dashed: false,
            }],
        };
        let svg = plot.to_svg().unwrap();
        assert!(svg.contains("a&lt;b"));
        let line = svg.lines().find(|l| l.starts_with("<polyline")).unwrap();
        assert_eq!(line.matches(',').count(), 2);
    }

    #[test]
    fn empty_plot_renders_nothing() {
        let plot = LinePlot {
            title: "x".into(),
            x_label: "t".into(),
            log_y: false,
            series: vec![Series {
                label: "y".into(),
                points: vec![(0.0, f64::NAN)],
                dashed: false,
            }],
        };
        assert!(plot.to_svg().is_none());
    }

    #[test]
    fn script_references_every_monitor() {
        let gp = gnuplot_script(true);
        for name in TRACE_COLUMNS
            .iter()
            .filter(|n| !matches!(**n, "t" | "t_tilde"))
        {
            assert!(gp.contains(&format!("gp_{name}.svg")), "{name}");
        }
        assert!(gp.contains("6/(1-4*x)"));
    }
}
