//! Minimal static SVG line plots with the data table embedded as a
//! comment, so every figure is self-describing.

pub struct Series<'a> {
    pub label: &'a str,
    pub points: Vec<(f64, f64)>,
}

pub struct Plot<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
    pub series: Vec<Series<'a>>,
    /// Horizontal reference lines, e.g. a bound threshold.
    pub h_lines: Vec<(f64, &'a str)>,
}

const W: f64 = 640.0;
const H: f64 = 420.0;
const M: f64 = 60.0;
const COLORS: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

impl Plot<'_> {
    pub fn render(&self) -> String {
        let mut all: Vec<(f64, f64)> = self
            .series
            .iter()
            .flat_map(|s| s.points.iter().copied())
            .collect();
        for &(y, _) in &self.h_lines {
            if let Some(&(x, _)) = all.first() {
                all.push((x, y));
            }
        }
        if all.is_empty() {
            return String::from("<svg xmlns=\"http://www.w3.org/2000/svg\"/>");
        }
        let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in &all {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if x1 - x0 < 1e-300 {
            x1 = x0 + 1.0;
        }
        if y1 - y0 < 1e-300 {
            y1 = y0 + 1.0;
        }
        let pad_y = 0.08 * (y1 - y0);
        let (y0, y1) = (y0 - pad_y, y1 + pad_y);
        let sx = |x: f64| M + (x - x0) / (x1 - x0) * (W - 2.0 * M);
        let sy = |y: f64| H - M - (y - y0) / (y1 - y0) * (H - 2.0 * M);

        let mut out = String::new();
        out.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
             viewBox=\"0 0 {W} {H}\">\n"
        ));
        out.push_str("<!-- data:\n");
        for s in &self.series {
            out.push_str(&format!("  series {}:\n", s.label));
            for &(x, y) in &s.points {
                out.push_str(&format!("    {x:.12e},{y:.12e}\n"));
            }
        }
        out.push_str("-->\n");
        out.push_str(&format!(
            "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n"
        ));
        out.push_str(&format!(
            "<text x=\"{:.1}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\" \
             font-family=\"sans-serif\">{}</text>\n",
            W / 2.0,
            xml_escape(self.title)
        ));
        // axes
        out.push_str(&format!(
            "<line x1=\"{M}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
            H - M,
            W - M,
            H - M
        ));
        out.push_str(&format!(
            "<line x1=\"{M}\" y1=\"{M}\" x2=\"{M}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
            H - M
        ));
        for i in 0..=4 {
            let xv = x0 + (x1 - x0) * i as f64 / 4.0;
            let yv = y0 + (y1 - y0) * i as f64 / 4.0;
            out.push_str(&format!(
                "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-size=\"11\" \
                 font-family=\"sans-serif\">{:.3}</text>\n",
                sx(xv),
                H - M + 18.0,
                xv
            ));
            out.push_str(&format!(
                "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\" font-size=\"11\" \
                 font-family=\"sans-serif\">{:.3}</text>\n",
                M - 6.0,
                sy(yv) + 4.0,
                yv
            ));
        }
        out.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-size=\"12\" \
             font-family=\"sans-serif\">{}</text>\n",
            W / 2.0,
            H - 16.0,
            xml_escape(self.x_label)
        ));
        out.push_str(&format!(
            "<text x=\"16\" y=\"{:.1}\" text-anchor=\"middle\" font-size=\"12\" \
             font-family=\"sans-serif\" transform=\"rotate(-90 16 {:.1})\">{}</text>\n",
            H / 2.0,
            H / 2.0,
            xml_escape(self.y_label)
        ));
        for (i, &(y, label)) in self.h_lines.iter().enumerate() {
            out.push_str(&format!(
                "<line x1=\"{M}\" y1=\"{:.2}\" x2=\"{:.1}\" y2=\"{:.2}\" stroke=\"#888\" \
                 stroke-dasharray=\"6 4\"/>\n",
                sy(y),
                W - M,
                sy(y)
            ));
            out.push_str(&format!(
                "<text x=\"{:.1}\" y=\"{:.2}\" font-size=\"11\" fill=\"#555\" \
                 font-family=\"sans-serif\">{}</text>\n",
                W - M + 4.0,
                sy(y) + 4.0 + 12.0 * i as f64,
                xml_escape(label)
            ));
        }
        for (i, s) in self.series.iter().enumerate() {
            let color = COLORS[i % COLORS.len()];
            let pts: Vec<String> = s
                .points
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            out.push_str(&format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
                pts.join(" ")
            ));
            for &(x, y) in &s.points {
                out.push_str(&format!(
                    "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.4\" fill=\"{color}\"/>\n",
                    sx(x),
                    sy(y)
                ));
            }
            out.push_str(&format!(
                "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" fill=\"{color}\" \
                 font-family=\"sans-serif\">{}</text>\n",
                M + 8.0,
                M + 16.0 + 14.0 * i as f64,
                xml_escape(s.label)
            ));
        }
        out.push_str("</svg>\n");
        out
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_wellformed_svg_with_data_comment() {
        let plot = Plot {
            title: "test",
            x_label: "x",
            y_label: "y",
            series: vec![Series {
                label: "data",
                points: vec![(0.0, 1.0), (1.0, 2.0), (2.0, 1.5)],
            }],
            h_lines: vec![(1.2, "bound")],
        };
        let svg = plot.render();
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert!(svg.contains("polyline"));
        assert!(svg.contains("<!-- data:"));
        assert!(svg.contains("bound"));
    }
}
