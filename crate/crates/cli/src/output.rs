//! CSV and SVG writers. All floats go out at 17 significant digits so
//! downstream exponent fits see full precision, and identical runs produce
//! byte-identical files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};

/// `{:.16e}` — one leading digit plus 16, deterministic.
pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv(path: &Path, header: &str, rows: &[Vec<String>]) -> Result<()> {
    let mut w = BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    );
    writeln!(w, "{header}")?;
    for row in rows {
        writeln!(w, "{}", row.join(","))?;
    }
    w.flush()?;
    Ok(())
}

/// One polyline per series on a fixed 900x620 canvas, with optional point
/// markers. Coordinates outside the given ranges are dropped (the branch
/// arms diverge).
pub struct SvgPlot {
    pub x_label: String,
    pub y_label: String,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub series: Vec<Vec<(f64, f64)>>,
    pub markers: Vec<(f64, f64)>,
}

const W: f64 = 900.0;
const H: f64 = 620.0;
const MARGIN: f64 = 60.0;

impl SvgPlot {
    fn map(&self, p: (f64, f64)) -> (f64, f64) {
        let (x0, x1) = self.x_range;
        let (y0, y1) = self.y_range;
        let fx = (p.0 - x0) / (x1 - x0);
        let fy = (p.1 - y0) / (y1 - y0);
        (MARGIN + fx * (W - 2.0 * MARGIN), H - MARGIN - fy * (H - 2.0 * MARGIN))
    }

    fn in_range(&self, p: (f64, f64)) -> bool {
        p.0.is_finite()
            && p.1.is_finite()
            && p.0 >= self.x_range.0
            && p.0 <= self.x_range.1
            && p.1 >= self.y_range.0
            && p.1 <= self.y_range.1
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        );
        writeln!(
            w,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
        )?;
        writeln!(w, r#"<rect width="{W}" height="{H}" fill="white"/>"#)?;
        // axes
        writeln!(
            w,
            r#"<line x1="{m}" y1="{b}" x2="{r}" y2="{b}" stroke="black" stroke-width="1"/>"#,
            m = MARGIN,
            b = H - MARGIN,
            r = W - MARGIN
        )?;
        writeln!(
            w,
            r#"<line x1="{m}" y1="{t}" x2="{m}" y2="{b}" stroke="black" stroke-width="1"/>"#,
            m = MARGIN,
            t = MARGIN,
            b = H - MARGIN
        )?;
        writeln!(
            w,
            r#"<text x="{x}" y="{y}" font-size="14" text-anchor="middle">{label}</text>"#,
            x = W / 2.0,
            y = H - 18.0,
            label = self.x_label
        )?;
        writeln!(
            w,
            r#"<text x="18" y="{y}" font-size="14" text-anchor="middle" transform="rotate(-90 18 {y})">{label}</text>"#,
            y = H / 2.0,
            label = self.y_label
        )?;
        for (range, vertical) in [(self.x_range, false), (self.y_range, true)] {
            for (v, frac) in [(range.0, 0.0), ((range.0 + range.1) / 2.0, 0.5), (range.1, 1.0)] {
                let (x, y, anchor) = if vertical {
                    (MARGIN - 8.0, H - MARGIN - frac * (H - 2.0 * MARGIN) + 4.0, "end")
                } else {
                    (MARGIN + frac * (W - 2.0 * MARGIN), H - MARGIN + 18.0, "middle")
                };
                writeln!(
                    w,
                    r#"<text x="{x:.1}" y="{y:.1}" font-size="11" text-anchor="{anchor}">{v:.4}</text>"#
                )?;
            }
        }

        let palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];
        for (k, pts) in self.series.iter().enumerate() {
            let color = palette[k % palette.len()];
            // split into runs of in-range points so clipped arms break cleanly
            let mut run: Vec<String> = Vec::new();
            let flush = |run: &mut Vec<String>, w: &mut BufWriter<File>| -> Result<()> {
                if run.len() >= 2 {
                    writeln!(
                        w,
                        r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.2"/>"#,
                        run.join(" ")
                    )?;
                }
                run.clear();
                Ok(())
            };
            for &p in pts {
                if self.in_range(p) {
                    let (x, y) = self.map(p);
                    run.push(format!("{x:.2},{y:.2}"));
                } else {
                    flush(&mut run, &mut w)?;
                }
            }
            flush(&mut run, &mut w)?;
        }
        for &p in &self.markers {
            if self.in_range(p) {
                let (x, y) = self.map(p);
                writeln!(w, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3.5" fill="black"/>"#)?;
            }
        }
        writeln!(w, "</svg>")?;
        w.flush()?;
        Ok(())
    }
}
