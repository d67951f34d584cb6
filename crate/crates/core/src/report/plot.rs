use std::fmt::Write as _;
use std::path::Path;

use crate::diagnostics::CusumResult;
use crate::Result;

/// CUSUM path as CSV with columns `period,w,lower,upper`.
pub fn cusum_csv(c: &CusumResult) -> String {
    let mut out = String::from("period,w,lower,upper\n");
    for i in 0..c.w.len() {
        writeln!(out, "{},{},{},{}", c.periods[i], c.w[i], c.lower[i], c.upper[i]).unwrap();
    }
    out
}

/// Standalone SVG line chart of the CUSUM path and its boundaries.
pub fn cusum_svg(c: &CusumResult) -> String {
    const W: f64 = 720.0;
    const H: f64 = 360.0;
    const PAD: f64 = 48.0;
    let m = c.w.len();
    let ymax = c.upper.iter().chain(c.w.iter().map(|v| v.abs()).collect::<Vec<_>>().iter()).fold(1.0f64, |a, v| a.max(*v)) * 1.05;
    let sx = |i: usize| PAD + (W - 2.0 * PAD) * if m > 1 { i as f64 / (m - 1) as f64 } else { 0.5 };
    let sy = |v: f64| H / 2.0 - (H / 2.0 - PAD) * v / ymax;
    let path = |vals: &[f64]| {
        vals.iter()
            .enumerate()
            .map(|(i, v)| format!("{}{:.2},{:.2}", if i == 0 { "M" } else { " L" }, sx(i), sy(*v)))
            .collect::<String>()
    };
    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#).unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(out, r##"<line x1="{PAD}" y1="{y:.2}" x2="{x2}" y2="{y:.2}" stroke="#999" stroke-width="0.5"/>"##, y = sy(0.0), x2 = W - PAD).unwrap();
    for (vals, colour, dash) in [(&c.upper, "#c0392b", " stroke-dasharray=\"6 4\""), (&c.lower, "#c0392b", " stroke-dasharray=\"6 4\""), (&c.w, "#1f4e79", "")] {
        writeln!(out, r#"<path d="{}" fill="none" stroke="{colour}" stroke-width="1.5"{dash}/>"#, path(vals)).unwrap();
    }
    if let (Some(first), Some(last)) = (c.periods.first(), c.periods.last()) {
        writeln!(out, r#"<text x="{PAD}" y="{:.0}" font-family="sans-serif" font-size="12">{first}</text>"#, H - 16.0).unwrap();
        writeln!(out, r#"<text x="{:.0}" y="{:.0}" font-family="sans-serif" font-size="12" text-anchor="end">{last}</text>"#, W - PAD, H - 16.0).unwrap();
    }
    writeln!(out, r#"<text x="{PAD}" y="24" font-family="sans-serif" font-size="13">CUSUM ({} significance)</text>"#, level_label(c)).unwrap();
    out.push_str("</svg>\n");
    out
}

fn level_label(c: &CusumResult) -> &'static str {
    use crate::diagnostics::CusumLevel::*;
    match c.level {
        One => "1%",
        Five => "5%",
        Ten => "10%",
    }
}

/// Writes the CUSUM path to `path`, as SVG when the extension is `.svg`
/// and as CSV otherwise.
pub fn emit_cusum_plot(c: &CusumResult, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let svg = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("svg"));
    std::fs::write(path, if svg { cusum_svg(c) } else { cusum_csv(c) })?;
    Ok(())
}
