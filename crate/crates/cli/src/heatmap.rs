//! Standalone SVG heatmaps over the `(θ_G, θ_D)` plane.

use std::fmt::Write;

use regulation_game::sweep::Class;

use crate::error::CliError;
use crate::format::num;
use crate::records::Row;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Safety,
    UG,
    UD,
    Class,
}

impl Metric {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "safety" => Ok(Metric::Safety),
            "u_g" => Ok(Metric::UG),
            "u_d" => Ok(Metric::UD),
            "class" => Ok(Metric::Class),
            _ => Err(CliError::Usage(format!(
                "unknown metric {s:?}; expected safety, u_g, u_d or class"
            ))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Metric::Safety => "safety",
            Metric::UG => "u_g",
            Metric::UD => "u_d",
            Metric::Class => "class",
        }
    }

    fn value(&self, r: &Row) -> f64 {
        match self {
            Metric::Safety => r.beta1,
            Metric::UG => r.u_g,
            Metric::UD => r.u_d,
            Metric::Class => Class::ALL.iter().position(|c| *c == r.class).unwrap() as f64,
        }
    }
}

/// Red at 0, yellow at 1/2, green at 1.
pub fn ramp(t: f64) -> (u8, u8, u8) {
    let t = if t.is_finite() {
        t.clamp(0.0, 1.0)
    } else {
        0.0
    };
    let lerp = |a: f64, b: f64, s: f64| (a + (b - a) * s).round() as u8;
    let (red, yellow, green) = (
        (215.0, 48.0, 39.0),
        (255.0, 255.0, 191.0),
        (26.0, 152.0, 80.0),
    );
    let (from, to, s) = if t < 0.5 {
        (red, yellow, 2.0 * t)
    } else {
        (yellow, green, 2.0 * t - 1.0)
    };
    (
        lerp(from.0, to.0, s),
        lerp(from.1, to.1, s),
        lerp(from.2, to.2, s),
    )
}

fn class_color(c: Class) -> (u8, u8, u8) {
    match c {
        Class::Abstain => (128, 128, 128),
        Class::Backfire => (215, 48, 39),
        Class::Mutualism => (26, 152, 80),
        Class::SafetyImproving => (145, 191, 219),
        Class::Neutral => (255, 255, 191),
        Class::Mixed => (253, 174, 97),
    }
}

fn hex((r, g, b): (u8, u8, u8)) -> String {
    format!("#{r:02x}{g:02x}{b:02x}")
}

fn distinct_sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

const PLOT: f64 = 600.0;
const LEFT: f64 = 80.0;
const TOP: f64 = 40.0;

/// Renders `rows` as one rect per cell. When the file holds several shares,
/// only rows with the first row's `δ` are drawn; the count of skipped rows
/// is returned alongside the document.
pub fn render(rows: &[Row], metric: Metric) -> (String, usize) {
    let delta = rows[0].delta;
    let all = rows.len();
    let rows: Vec<&Row> = rows.iter().filter(|r| r.delta == delta).collect();
    let skipped = all - rows.len();
    let xs = distinct_sorted(rows.iter().map(|r| r.theta_g).collect());
    let ys = distinct_sorted(rows.iter().map(|r| r.theta_d).collect());
    let (w, h) = (PLOT / xs.len() as f64, PLOT / ys.len() as f64);
    let values: Vec<f64> = rows.iter().map(|r| metric.value(r)).collect();
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };

    let mut s = String::new();
    let width = LEFT + PLOT + 260.0;
    let height = TOP + PLOT + 70.0;
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<title>{} at delta = {}</title>"#,
        metric.as_str(),
        num(delta)
    )
    .unwrap();
    writeln!(s, r#"<g id="cells">"#).unwrap();
    for (r, v) in rows.iter().zip(&values) {
        let i = xs.binary_search_by(|x| x.total_cmp(&r.theta_g)).unwrap();
        let j = ys.binary_search_by(|y| y.total_cmp(&r.theta_d)).unwrap();
        let fill = match metric {
            Metric::Class => class_color(r.class),
            _ => ramp((v - lo) / span),
        };
        writeln!(
            s,
            r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{}" data-theta-g="{}" data-theta-d="{}" data-value="{}" data-class="{}"/>"#,
            LEFT + i as f64 * w,
            TOP + PLOT - (j + 1) as f64 * h,
            w,
            h,
            hex(fill),
            num(r.theta_g),
            num(r.theta_d),
            if metric == Metric::Class { r.class.as_str().to_string() } else { num(*v) },
            r.class.as_str(),
        )
        .unwrap();
    }
    writeln!(s, "</g>").unwrap();

    // Axes.
    let (x0, y0) = (LEFT, TOP + PLOT);
    writeln!(s, r#"<g id="axes" stroke="black" fill="none"><rect x="{x0}" y="{TOP}" width="{PLOT}" height="{PLOT}"/></g>"#).unwrap();
    let xl = (xs[0], *xs.last().unwrap());
    let yl = (ys[0], *ys.last().unwrap());
    writeln!(
        s,
        r#"<text x="{x0}" y="{}" text-anchor="start">{}</text>"#,
        y0 + 18.0,
        num(xl.0)
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
        x0 + PLOT,
        y0 + 18.0,
        num(xl.1)
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="{y0}" text-anchor="end">{}</text>"#,
        x0 - 6.0,
        num(yl.0)
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
        x0 - 6.0,
        TOP + 12.0,
        num(yl.1)
    )
    .unwrap();
    writeln!(
        s,
        r#"<text id="x-label" x="{}" y="{}" text-anchor="middle" font-size="16">θ_G</text>"#,
        x0 + PLOT / 2.0,
        y0 + 45.0
    )
    .unwrap();
    writeln!(
        s,
        r#"<text id="y-label" x="{}" y="{}" text-anchor="middle" font-size="16" transform="rotate(-90 {} {})">θ_D</text>"#,
        x0 - 45.0,
        TOP + PLOT / 2.0,
        x0 - 45.0,
        TOP + PLOT / 2.0
    )
    .unwrap();

    // Legend.
    let lx = LEFT + PLOT + 40.0;
    writeln!(s, r#"<g id="legend">"#).unwrap();
    writeln!(
        s,
        r#"<text x="{lx}" y="{}">{}</text>"#,
        TOP,
        metric.as_str()
    )
    .unwrap();
    if metric == Metric::Class {
        for (k, c) in Class::ALL.iter().enumerate() {
            let y = TOP + 15.0 + 22.0 * k as f64;
            writeln!(
                s,
                r#"<rect x="{lx}" y="{y}" width="16" height="16" fill="{}"/>"#,
                hex(class_color(*c))
            )
            .unwrap();
            writeln!(
                s,
                r#"<text x="{}" y="{}">{}</text>"#,
                lx + 22.0,
                y + 12.0,
                c.as_str()
            )
            .unwrap();
        }
    } else {
        writeln!(
            s,
            r#"<defs><linearGradient id="ramp" x1="0" y1="1" x2="0" y2="0">"#
        )
        .unwrap();
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            writeln!(s, r#"<stop offset="{t}" stop-color="{}"/>"#, hex(ramp(t))).unwrap();
        }
        writeln!(s, "</linearGradient></defs>").unwrap();
        writeln!(
            s,
            r#"<rect x="{lx}" y="{}" width="24" height="300" fill="url(#ramp)" stroke="black"/>"#,
            TOP + 15.0
        )
        .unwrap();
        writeln!(
            s,
            r#"<text id="legend-max" x="{}" y="{}">max {}</text>"#,
            lx + 30.0,
            TOP + 25.0,
            num(hi)
        )
        .unwrap();
        writeln!(
            s,
            r#"<text id="legend-min" x="{}" y="{}">min {}</text>"#,
            lx + 30.0,
            TOP + 315.0,
            num(lo)
        )
        .unwrap();
    }
    writeln!(s, "</g>").unwrap();
    writeln!(s, "</svg>").unwrap();
    (s, skipped)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramp_endpoints() {
        assert_eq!(ramp(0.0), (215, 48, 39));
        assert_eq!(ramp(0.5), (255, 255, 191));
        assert_eq!(ramp(1.0), (26, 152, 80));
    }

    #[test]
    fn unknown_metric() {
        assert_eq!(Metric::parse("welfare").unwrap_err().exit_code(), 2);
    }
}
