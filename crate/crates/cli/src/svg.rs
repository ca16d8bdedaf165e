//! Static line charts rebuilt from the CSV rows alone.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::CliError;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

type Series = BTreeMap<String, Vec<(f64, f64)>>;

/// One chart per `(experiment, metric)`, one series per estimator showing the
/// mean over replications, with a logarithmic `n` axis.
///
/// Returns `(file stem, svg document)` pairs in a fixed order.
pub fn render_charts(csv_text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    // (experiment, metric) → estimator → n → (sum, count)
    let mut acc: BTreeMap<(String, String), BTreeMap<String, BTreeMap<u64, (f64, usize)>>> = BTreeMap::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| CliError::Validation(format!("CSV: {e}")))?;
        let field = |i: usize| rec.get(i).unwrap_or("").to_string();
        let n: u64 = field(3)
            .parse()
            .map_err(|_| CliError::Validation(format!("CSV: bad n '{}'", field(3))))?;
        let v: f64 = field(5)
            .parse()
            .map_err(|_| CliError::Validation(format!("CSV: bad value '{}'", field(5))))?;
        let e = acc
            .entry((field(0), field(4)))
            .or_default()
            .entry(field(1))
            .or_default()
            .entry(n)
            .or_insert((0.0, 0));
        e.0 += v;
        e.1 += 1;
    }
    Ok(acc
        .into_iter()
        .map(|((experiment, metric), by_est)| {
            let series: Series = by_est
                .into_iter()
                .map(|(est, pts)| (est, pts.into_iter().map(|(n, (s, c))| (n as f64, s / c as f64)).collect()))
                .collect();
            let title = format!("{experiment}: {metric} distance to the limit");
            (format!("{experiment}-{metric}"), chart(&title, &series))
        })
        .collect())
}

fn chart(title: &str, series: &Series) -> String {
    let all = series.values().flatten();
    let n_max = all.clone().map(|p| p.0).fold(1.0, f64::max);
    let y_max = all.map(|p| p.1).filter(|v| v.is_finite()).fold(0.0, f64::max);
    let y_max = if y_max > 0.0 { y_max * 1.05 } else { 1.0 };
    let decades = n_max.log10().ceil().max(1.0);
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let x = |n: f64| LEFT + plot_w * n.max(1.0).log10() / decades;
    let y = |v: f64| TOP + plot_h * (1.0 - v / y_max);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, LEFT + plot_w / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for d in 0..=decades as i32 {
        let px = x(10f64.powi(d));
        let _ = writeln!(
            s,
            r##"<line x1="{px:.1}" y1="{TOP}" x2="{px:.1}" y2="{:.1}" stroke="#ddd"/><text x="{px:.1}" y="{:.1}" text-anchor="middle">1e{d}</text>"##,
            TOP + plot_h,
            TOP + plot_h + 18.0
        );
    }
    for i in 0..=4 {
        let v = y_max * i as f64 / 4.0;
        let py = y(v);
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{py:.1}" x2="{:.1}" y2="{py:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" text-anchor="end">{v:.3}</text>"##,
            LEFT + plot_w,
            LEFT - 6.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">n (log scale)</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    );
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = pts
            .iter()
            .filter(|p| p.1.is_finite())
            .map(|&(n, v)| format!("{:.2},{:.2}", x(n), y(v)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            path.join(" ")
        );
        let ly = TOP + 16.0 + 18.0 * i as f64;
        let lx = LEFT + plot_w + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
