//! Signed bar charts as standalone SVG 1.1 documents.

use crate::error::{Error, Result};

const WIDTH: f64 = 1200.0;
const HEIGHT: f64 = 400.0;
const MARGIN_LEFT: f64 = 20.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 48.0;
const MARGIN_BOTTOM: f64 = 24.0;

/// Escape text for use in XML content and attribute values.
fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            other => out.push(other),
        }
    }
    out
}

/// Render one bar per value: positive bars rise above the zero axis,
/// negative bars hang below it. The vertical scale is symmetric around
/// zero. Output is deterministic for identical inputs.
pub fn svg_barchart(values: &[f64], title: &str) -> Result<String> {
    if values.is_empty() {
        return Err(Error::invalid("a bar chart needs at least one value"));
    }
    if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::invalid(format!(
            "value {pos} is not finite: {}",
            values[pos]
        )));
    }
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let zero_y = MARGIN_TOP + plot_h / 2.0;
    let mut max_abs = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max_abs == 0.0 {
        max_abs = 1.0;
    }
    let slot = plot_w / values.len() as f64;
    let bar_w = (slot * 0.85).max(0.1);

    let mut out = String::with_capacity(160 * values.len() + 512);
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    let title = xml_escape(title);
    out.push_str(&format!("  <title>{title}</title>\n"));
    out.push_str(&format!(
        "  <text x=\"{:.2}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" \
         text-anchor=\"middle\">{title}</text>\n",
        WIDTH / 2.0
    ));
    for (i, &v) in values.iter().enumerate() {
        let h = v.abs() / max_abs * (plot_h / 2.0);
        let x = MARGIN_LEFT + i as f64 * slot + (slot - bar_w) / 2.0;
        let (y, fill) = if v >= 0.0 {
            (zero_y - h, "#3b6ea5")
        } else {
            (zero_y, "#b04a4a")
        };
        out.push_str(&format!(
            "  <rect class=\"bar\" x=\"{x:.2}\" y=\"{y:.2}\" width=\"{bar_w:.2}\" \
             height=\"{h:.2}\" fill=\"{fill}\"><title>variable {i}: {v:e}</title></rect>\n"
        ));
    }
    out.push_str(&format!(
        "  <line x1=\"{MARGIN_LEFT}\" y1=\"{zero_y:.2}\" x2=\"{:.2}\" y2=\"{zero_y:.2}\" \
         stroke=\"#333333\" stroke-width=\"1\"/>\n",
        WIDTH - MARGIN_RIGHT
    ));
    out.push_str("</svg>\n");
    Ok(out)
}
