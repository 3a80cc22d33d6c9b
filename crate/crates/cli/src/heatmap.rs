//! Minimal self-contained SVG heatmaps: a grid of coloured cells, a linear
//! colour ramp with its min/max legend, and axis labels.

use std::fmt::Write as _;

use ergcftp::format::fmt_num;

const CELL: f64 = 36.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 60.0;
const LEGEND_WIDTH: f64 = 90.0;
const LOW: (f64, f64, f64) = (49.0, 54.0, 149.0);
const HIGH: (f64, f64, f64) = (253.0, 231.0, 37.0);
const MISSING: &str = "#bdbdbd";

pub struct Heatmap<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
    pub xs: &'a [f64],
    pub ys: &'a [f64],
    /// `values[ix][iy]`; NaN cells are drawn grey.
    pub values: &'a [Vec<f64>],
}

fn ramp(t: f64) -> String {
    let mix = |a: f64, b: f64| (a + (b - a) * t).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        mix(LOW.0, HIGH.0),
        mix(LOW.1, HIGH.1),
        mix(LOW.2, HIGH.2)
    )
}

fn short(x: f64) -> String {
    let s = format!("{x:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

impl Heatmap<'_> {
    pub fn render(&self) -> String {
        let (nx, ny) = (self.xs.len(), self.ys.len());
        let finite = self.values.iter().flatten().copied().filter(|v| v.is_finite());
        let (lo, hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        let grid_w = CELL * nx as f64;
        let grid_h = CELL * ny as f64;
        let width = MARGIN_LEFT + grid_w + LEGEND_WIDTH;
        let height = MARGIN_TOP + grid_h + MARGIN_BOTTOM;

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="11">"#
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="22" font-size="14" text-anchor="middle">{}</text>"#,
            MARGIN_LEFT + grid_w / 2.0,
            self.title
        );
        for ix in 0..nx {
            for iy in 0..ny {
                let v = self.values[ix][iy];
                let fill = if !v.is_finite() {
                    MISSING.to_string()
                } else if hi > lo {
                    ramp((v - lo) / (hi - lo))
                } else {
                    ramp(0.5)
                };
                // larger y values are drawn higher up
                let x = MARGIN_LEFT + CELL * ix as f64;
                let y = MARGIN_TOP + CELL * (ny - 1 - iy) as f64;
                let _ = writeln!(
                    s,
                    r#"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{fill}"><title>{}, {}: {}</title></rect>"#,
                    short(self.xs[ix]),
                    short(self.ys[iy]),
                    fmt_num(v)
                );
            }
        }
        for (ix, &xv) in self.xs.iter().enumerate() {
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
                MARGIN_LEFT + CELL * (ix as f64 + 0.5),
                MARGIN_TOP + grid_h + 16.0,
                short(xv)
            );
        }
        for (iy, &yv) in self.ys.iter().enumerate() {
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
                MARGIN_LEFT - 6.0,
                MARGIN_TOP + CELL * ((ny - 1 - iy) as f64 + 0.5) + 4.0,
                short(yv)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            MARGIN_LEFT + grid_w / 2.0,
            MARGIN_TOP + grid_h + 40.0,
            self.x_label
        );
        let _ = writeln!(
            s,
            r#"<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>"#,
            MARGIN_TOP + grid_h / 2.0,
            self.y_label
        );

        let lx = MARGIN_LEFT + grid_w + 20.0;
        let _ = writeln!(
            s,
            r#"<defs><linearGradient id="ramp" x1="0" y1="1" x2="0" y2="0"><stop offset="0" stop-color="{}"/><stop offset="1" stop-color="{}"/></linearGradient></defs>"#,
            ramp(0.0),
            ramp(1.0)
        );
        let _ = writeln!(
            s,
            r#"<rect x="{lx}" y="{MARGIN_TOP}" width="16" height="{grid_h}" fill="url(#ramp)"/>"#
        );
        let (lo_txt, hi_txt) = if lo.is_finite() { (fmt_num(lo), fmt_num(hi)) } else { ("NA".into(), "NA".into()) };
        let _ = writeln!(s, r#"<text x="{}" y="{}">{hi_txt}</text>"#, lx + 20.0, MARGIN_TOP + 10.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{lo_txt}</text>"#, lx + 20.0, MARGIN_TOP + grid_h);
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_one_rect_per_cell_and_legend() {
        let values = vec![vec![0.0, 1.0, f64::NAN], vec![0.5, 0.25, 0.75]];
        let svg = Heatmap {
            title: "t",
            x_label: "x",
            y_label: "y",
            xs: &[0.0, 1.0],
            ys: &[-1.0, 0.0, 1.0],
            values: &values,
        }
        .render();
        assert_eq!(svg.matches("<rect").count(), 7);
        assert!(svg.contains(MISSING));
        assert!(svg.contains(">1</text>") && svg.contains(">0</text>"));
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    }

    #[test]
    fn ramp_endpoints() {
        assert_eq!(ramp(0.0), "#313695");
        assert_eq!(ramp(1.0), "#fde725");
    }
}
