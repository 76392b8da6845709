use std::fmt::Write;

use super::CanarySummary;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Median log10 p against duplication count, one line per test. Duplication
/// counts are spaced evenly rather than to scale.
pub fn power_plot_svg(summary: &CanarySummary) -> String {
    let mut dups: Vec<usize> = summary.by_duplication.iter().map(|d| d.duplication).collect();
    dups.sort_unstable();
    dups.dedup();
    let mut tests: Vec<&str> = Vec::new();
    for d in &summary.by_duplication {
        if !tests.contains(&d.test.as_str()) {
            tests.push(&d.test);
        }
    }
    let lowest = summary
        .by_duplication
        .iter()
        .filter_map(|d| d.median_log10_p)
        .fold(-1.0f64, f64::min)
        .floor();

    let x = |i: usize| {
        let span = (dups.len().max(2) - 1) as f64;
        MARGIN + (WIDTH - 2.0 * MARGIN) * i as f64 / span
    };
    let y = |v: f64| MARGIN + (HEIGHT - 2.0 * MARGIN) * (v / lowest);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (x0, x1, y0, y1) = (MARGIN, WIDTH - MARGIN, y(0.0), y(lowest));
    let _ = writeln!(svg, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#);
    let _ = writeln!(svg, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#);
    let ticks = 5;
    for k in 0..=ticks {
        let v = lowest * k as f64 / ticks as f64;
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{v:.1}</text>"#,
            x0 - 6.0,
            y(v) + 4.0
        );
    }
    for (i, d) in dups.iter().enumerate() {
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{d}</text>"#,
            x(i),
            y1 + 18.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">duplication count</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.1}" transform="rotate(-90 16 {:.1})" text-anchor="middle">median log10 p</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );

    for (t, test) in tests.iter().enumerate() {
        let color = COLORS[t % COLORS.len()];
        let points: Vec<String> = summary
            .by_duplication
            .iter()
            .filter(|d| d.test == *test)
            .filter_map(|d| {
                let i = dups.iter().position(|&x| x == d.duplication)?;
                Some(format!("{:.1},{:.1}", x(i), y(d.median_log10_p?)))
            })
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            points.join(" ")
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" fill="{color}">{test}</text>"#,
            x1 - 150.0,
            MARGIN + 16.0 * t as f64
        );
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::DupSummary;

    #[test]
    fn draws_one_line_per_test() {
        let row = |test: &str, duplication, m| DupSummary {
            test: test.into(),
            duplication,
            runs: 1,
            failed: 0,
            median_log10_p: Some(m),
            median_p: Some(10f64.powf(m)),
        };
        let summary = CanarySummary {
            schema_version: 1,
            tool_version: "t".into(),
            config_hash: String::new(),
            by_duplication: vec![row("a", 1, -0.5), row("a", 10, -6.0), row("b", 1, -0.3), row("b", 10, -1.7)],
            controls: vec![],
        };
        let svg = power_plot_svg(&summary);
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<polyline").count(), 2);
    }
}
