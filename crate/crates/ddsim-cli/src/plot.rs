//! Plot emission: self-contained gnuplot scripts (data inlined, so the script
//! depends on nothing but gnuplot) and a dependency-free SVG writer.
//! Both consume only the trace CSV.

use std::fmt::Write as _;

use ddsim_core::experiment::FidelityTrace;

pub const PALETTE: &[&str] = &[
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
    "#bcbd22", "#e377c2",
];

/// Gnuplot script with one inline data block per protocol, drawing the mean
/// with a shaded +-stderr band.
pub fn gnuplot_script(traces: &[FidelityTrace]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# generated by ddsim; render with: gnuplot this_file > out.svg");
    let _ = writeln!(s, "set terminal svg size 860,560 dynamic background 'white'");
    let _ = writeln!(s, "set xlabel 'J T'");
    let _ = writeln!(s, "set ylabel 'entanglement fidelity'");
    let _ = writeln!(s, "set key bottom left");
    let _ = writeln!(s, "set grid");
    for (i, tr) in traces.iter().enumerate() {
        let _ = writeln!(s, "$data{i} << EOD");
        for r in &tr.records {
            let _ = writeln!(s, "{:.16e} {:.16e} {:.16e}", r.t, r.fe_mean, r.fe_stderr);
        }
        let _ = writeln!(s, "EOD");
    }
    let mut parts = Vec::new();
    for (i, tr) in traces.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        parts.push(format!(
            "$data{i} using 1:($2-$3):($2+$3) with filledcurves fc rgb '{color}' fs transparent solid 0.15 notitle"
        ));
        parts.push(format!(
            "$data{i} using 1:2 with lines lw 2 lc rgb '{color}' title '{}'",
            tr.label
        ));
    }
    let _ = writeln!(s, "plot \\\n  {}", parts.join(", \\\n  "));
    s
}

/// Minimal standalone SVG: per-protocol polyline with a translucent stderr
/// band, axes with round-number ticks, legend.
pub fn svg_plot(traces: &[FidelityTrace]) -> String {
    const W: f64 = 860.0;
    const H: f64 = 560.0;
    const ML: f64 = 72.0;
    const MR: f64 = 24.0;
    const MT: f64 = 24.0;
    const MB: f64 = 56.0;

    let mut tmax = 0.0f64;
    let mut ymin = 1.0f64;
    for tr in traces {
        for r in &tr.records {
            tmax = tmax.max(r.t);
            ymin = ymin.min(r.fe_mean - r.fe_stderr);
        }
    }
    if tmax <= 0.0 {
        tmax = 1.0;
    }
    let ymin = (ymin - 0.05).clamp(-0.05, 0.95);
    let ymax = 1.02f64;

    let px = |t: f64| ML + (t / tmax) * (W - ML - MR);
    let py = |f: f64| MT + (ymax - f) / (ymax - ymin) * (H - MT - MB);

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns='http://www.w3.org/2000/svg' width='{W}' height='{H}' viewBox='0 0 {W} {H}'>"
    );
    let _ = writeln!(s, "<rect width='{W}' height='{H}' fill='white'/>");
    // Axes.
    let _ = writeln!(
        s,
        "<rect x='{ML}' y='{MT}' width='{}' height='{}' fill='none' stroke='black'/>",
        W - ML - MR,
        H - MT - MB
    );
    // Ticks.
    for k in 0..=5 {
        let t = tmax * k as f64 / 5.0;
        let x = px(t);
        let _ = writeln!(s, "<line x1='{x}' y1='{}' x2='{x}' y2='{}' stroke='black'/>", H - MB, H - MB + 5.0);
        let _ = writeln!(
            s,
            "<text x='{x}' y='{}' font-size='13' text-anchor='middle'>{:.3}</text>",
            H - MB + 20.0,
            t
        );
        let f = ymin + (ymax - ymin) * k as f64 / 5.0;
        let y = py(f);
        let _ = writeln!(s, "<line x1='{}' y1='{y}' x2='{ML}' y2='{y}' stroke='black'/>", ML - 5.0);
        let _ = writeln!(
            s,
            "<text x='{}' y='{}' font-size='13' text-anchor='end'>{f:.2}</text>",
            ML - 9.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        "<text x='{}' y='{}' font-size='15' text-anchor='middle'>J T</text>",
        (ML + W - MR) / 2.0,
        H - 12.0
    );
    let _ = writeln!(
        s,
        "<text x='18' y='{}' font-size='15' text-anchor='middle' transform='rotate(-90 18 {})'>entanglement fidelity</text>",
        (MT + H - MB) / 2.0,
        (MT + H - MB) / 2.0
    );

    for (i, tr) in traces.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if tr.records.iter().any(|r| r.fe_stderr > 0.0) {
            let mut band = String::new();
            for r in &tr.records {
                let _ = write!(band, "{:.2},{:.2} ", px(r.t), py((r.fe_mean + r.fe_stderr).min(ymax)));
            }
            for r in tr.records.iter().rev() {
                let _ = write!(band, "{:.2},{:.2} ", px(r.t), py((r.fe_mean - r.fe_stderr).max(ymin)));
            }
            let _ = writeln!(s, "<polygon points='{}' fill='{color}' fill-opacity='0.15' stroke='none'/>", band.trim());
        }
        let pts: Vec<String> = tr
            .records
            .iter()
            .map(|r| format!("{:.2},{:.2}", px(r.t), py(r.fe_mean.clamp(ymin, ymax))))
            .collect();
        let _ = writeln!(
            s,
            "<polyline points='{}' fill='none' stroke='{color}' stroke-width='2'/>",
            pts.join(" ")
        );
        // Legend entry.
        let ly = MT + 18.0 + 20.0 * i as f64;
        let _ = writeln!(s, "<line x1='{}' y1='{ly}' x2='{}' y2='{ly}' stroke='{color}' stroke-width='3'/>", W - MR - 150.0, W - MR - 120.0);
        let _ = writeln!(
            s,
            "<text x='{}' y='{}' font-size='13'>{}</text>",
            W - MR - 112.0,
            ly + 4.0,
            tr.label
        );
    }
    let _ = writeln!(s, "</svg>");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use ddsim_core::experiment::TraceRecord;

    fn trace(label: &str) -> FidelityTrace {
        FidelityTrace {
            label: label.into(),
            seed: 1,
            records: (1..=4)
                .map(|k| TraceRecord {
                    t: 0.4 * k as f64,
                    fe_mean: 1.0 - 0.1 * k as f64,
                    fe_stderr: 0.01,
                    n_real: 10,
                })
                .collect(),
            config_digest: String::new(),
            truncated: false,
        }
    }

    #[test]
    fn gnuplot_script_is_self_contained() {
        let s = gnuplot_script(&[trace("pdd"), trace("nrd")]);
        assert!(s.contains("$data0 << EOD"));
        assert!(s.contains("$data1 << EOD"));
        assert!(s.contains("title 'pdd'"));
        assert!(s.contains("filledcurves"));
        // Data is inline: exactly one value row per record.
        let data_rows = s.lines().filter(|l| l.split(' ').count() == 3 && l.contains('e')).count();
        assert_eq!(data_rows, 8);
    }

    #[test]
    fn svg_has_curves_and_legend() {
        let s = svg_plot(&[trace("pdd"), trace("srpd")]);
        assert!(s.starts_with("<svg"));
        assert!(s.ends_with("</svg>\n"));
        assert_eq!(s.matches("<polyline").count(), 2);
        assert_eq!(s.matches("<polygon").count(), 2);
        assert!(s.contains(">srpd</text>"));
    }
}
