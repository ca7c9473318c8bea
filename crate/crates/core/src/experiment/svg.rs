//! Static SVG emission: one polyline per data series, viewBox fitted to
//! the data extent, no scripting.

const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Render named series as polylines. Data coordinates are used directly
/// (y negated so larger values point up); the viewBox is the padded data
/// bounding box.
pub fn polyline_chart(series: &[(&str, Vec<(f64, f64)>)]) -> String {
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin: f64 = 0.0;
    let mut ymax = f64::NEG_INFINITY;
    for (_, pts) in series {
        for &(x, y) in pts {
            xmin = xmin.min(x);
            xmax = xmax.max(x);
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
    }
    if !xmin.is_finite() || !ymax.is_finite() {
        xmin = 0.0;
        xmax = 1.0;
        ymin = 0.0;
        ymax = 1.0;
    }
    let pad_x = 0.05 * (xmax - xmin).max(1e-12);
    let pad_y = 0.05 * (ymax - ymin).max(1e-12);
    let x0 = xmin - pad_x;
    let w = (xmax - xmin) + 2.0 * pad_x;
    let y0 = -(ymax + pad_y);
    let h = (ymax - ymin) + 2.0 * pad_y;
    let stroke = h / 300.0;

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{x0:.6} {y0:.6} {w:.6} {h:.6}\">\n"
    ));
    for (idx, (name, pts)) in series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let mut coords = String::new();
        for &(x, y) in pts {
            coords.push_str(&format!("{x:.6},{:.6} ", -y));
        }
        out.push_str(&format!(
            "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"{stroke:.6}\" \
             data-name=\"{name}\" points=\"{}\"/>\n",
            coords.trim_end()
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// Staircase outline of a normalized histogram: counts / (total * width)
/// over uniform bins, as polyline points.
pub fn histogram_outline(values: &[f64], lo: f64, hi: f64, bins: usize) -> Vec<(f64, f64)> {
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in values {
        if v >= lo && v < hi {
            let b = ((v - lo) / width) as usize;
            counts[b.min(bins - 1)] += 1;
        } else if v == hi {
            counts[bins - 1] += 1;
        }
    }
    let norm = 1.0 / (values.len() as f64 * width);
    let mut pts = Vec::with_capacity(2 * bins + 2);
    pts.push((lo, 0.0));
    for (b, &c) in counts.iter().enumerate() {
        let y = c as f64 * norm;
        pts.push((lo + b as f64 * width, y));
        pts.push((lo + (b + 1) as f64 * width, y));
    }
    pts.push((hi, 0.0));
    pts
}
