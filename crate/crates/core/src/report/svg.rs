use std::fmt::Write;

use super::{InfidelityRow, SweepReport};

const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 130.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];
/// Zero infidelities are drawn at this floor on the log axis.
const LOG_FLOOR: f64 = 1e-18;

#[derive(Clone, Debug)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
}

struct Axis {
    lo: f64,
    hi: f64,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>) -> Axis {
        let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        if !lo.is_finite() {
            return Axis { lo: 0.0, hi: 1.0 };
        }
        if hi - lo < 1e-12 {
            return Axis { lo: lo - 0.5, hi: hi + 0.5 };
        }
        let pad = 0.05 * (hi - lo);
        Axis { lo: lo - pad, hi: hi + pad }
    }

    fn map(&self, v: f64, from: f64, to: f64) -> f64 {
        from + (v - self.lo) / (self.hi - self.lo) * (to - from)
    }

    fn ticks(&self, count: usize) -> Vec<f64> {
        (0..=count)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / count as f64)
            .collect()
    }
}

/// Static line chart; `log_y` plots `log10(y)` with decade labels.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[Series], log_y: bool) -> String {
    let ty = |y: f64| if log_y { y.max(LOG_FLOOR).log10() } else { y };
    let xa = Axis::fit(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let ya = Axis::fit(series.iter().flat_map(|s| s.points.iter().map(|p| ty(p.1))));
    let (x0, x1, y0, y1) = (LEFT, W - RIGHT, H - BOTTOM, TOP);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">{}</text>"#, (x0 + x1) / 2.0, escape(title));
    let _ = writeln!(s, r#"<rect x="{x0}" y="{y1}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#, x1 - x0, y0 - y1);
    for t in xa.ticks(5) {
        let px = xa.map(t, x0, x1);
        let _ = writeln!(s, r#"<line x1="{px:.1}" y1="{y0}" x2="{px:.1}" y2="{:.1}" stroke="black"/>"#, y0 + 5.0);
        let _ = writeln!(s, r#"<text x="{px:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, y0 + 18.0, tick_label(t));
    }
    for t in ya.ticks(5) {
        let py = ya.map(t, y0, y1);
        let label = if log_y { format!("1e{:.1}", t) } else { tick_label(t) };
        let _ = writeln!(s, r#"<line x1="{:.1}" y1="{py:.1}" x2="{x0}" y2="{py:.1}" stroke="black"/>"#, x0 - 5.0);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{label}</text>"#, x0 - 8.0, py + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, (x0 + x1) / 2.0, H - 15.0, escape(x_label));
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.1}" text-anchor="middle" transform="rotate(-90 18 {:.1})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(y_label)
    );

    for (i, ser) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = ser
            .points
            .iter()
            .map(|&(x, y)| format!("{:.1},{:.1}", xa.map(x, x0, x1), ya.map(ty(y), y0, y1)))
            .collect();
        let dash = if ser.dashed { r#" stroke-dasharray="5,4""# } else { "" };
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>"#, pts.join(" "));
        if !ser.dashed {
            for p in &pts {
                let (cx, cy) = p.split_once(',').unwrap_or(("0", "0"));
                let _ = writeln!(s, r#"<circle cx="{cx}" cy="{cy}" r="2.5" fill="{color}"/>"#);
            }
        }
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let _ = writeln!(s, r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"{dash}/>"#, x1 + 10.0, x1 + 30.0);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}">{}</text>"#, x1 + 35.0, ly + 4.0, escape(&ser.label));
    }
    s.push_str("</svg>\n");
    s
}

fn tick_label(v: f64) -> String {
    if v.abs() >= 1000.0 || (v != 0.0 && v.abs() < 0.01) {
        format!("{v:.1e}")
    } else {
        format!("{v:.2}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Infidelity against iteration count, one line per basis index with at
/// least one iteration.
pub fn infidelity_svg(rows: &[InfidelityRow]) -> String {
    let mut ks: Vec<usize> = rows.iter().filter(|r| r.m > 0).map(|r| r.k).collect();
    ks.dedup();
    let series: Vec<Series> = ks
        .iter()
        .map(|&k| Series {
            label: format!("k = {k}"),
            points: rows
                .iter()
                .filter(|r| r.k == k && r.m > 0)
                .map(|r| (r.m as f64, r.infidelity))
                .collect(),
            dashed: false,
        })
        .collect();
    line_plot("Infidelity per iteration", "m", "infidelity", &series, true)
}

/// Mean runs against `ln(1/ε)` with the fitted lines dashed.
pub fn sweep_svg(report: &SweepReport) -> String {
    let mut series = Vec::new();
    for f in &report.fits {
        let points: Vec<(f64, f64)> = report
            .rows_for(f.k)
            .map(|r| ((1.0 / r.epsilon).ln(), r.mean_runs))
            .collect();
        let fitted = points
            .iter()
            .map(|&(x, _)| (x, f.fit.slope * x + f.fit.intercept))
            .collect();
        series.push(Series {
            label: format!("k = {}", f.k),
            points,
            dashed: false,
        });
        series.push(Series {
            label: format!("fit {}", f.k),
            points: fitted,
            dashed: true,
        });
    }
    line_plot("Mean circuit runs", "ln(1/epsilon)", "mean runs", &series, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plots_are_well_formed() {
        let rows = vec![
            InfidelityRow { k: 1, m: 0, infidelity: 0.0, success_probability: 1.0 },
            InfidelityRow { k: 2, m: 1, infidelity: 1e-3, success_probability: 0.7 },
            InfidelityRow { k: 2, m: 2, infidelity: 0.0, success_probability: 0.9 },
        ];
        let svg = infidelity_svg(&rows);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert_eq!(svg, infidelity_svg(&rows));
        assert!(line_plot("t", "x", "y", &[], false).contains("</svg>"));
    }
}
