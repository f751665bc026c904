//! Deterministic artifact writers. Every float is printed with 17
//! significant digits so identical runs produce identical bytes; data files
//! carry no timestamps.

use std::fmt::Write as _;
use std::path::Path;

use staticmass::{EnergyReport, StabilityReport, SweepResult};

use crate::checks::CheckOutcome;
use crate::CliError;

/// 17 significant digits, sign-stable; the only float format in artifacts.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

pub fn energy_json(path: &Path, report: &EnergyReport<f64>) -> Result<(), CliError> {
    let mut s = String::from("{\n");
    let fields = [
        ("mass", report.mass),
        ("lower_bound", report.lower_bound),
        ("minkowski_functional", report.minkowski_functional),
        ("penrose_rhs", report.penrose_rhs),
        ("divergence_residual", report.divergence_residual),
        ("c_eps", report.c_eps),
        ("n_eps", report.n_eps),
    ];
    for (k, (name, value)) in fields.iter().enumerate() {
        let comma = if k + 1 == fields.len() { "" } else { "," };
        let _ = writeln!(s, "  \"{name}\": {}{comma}", num(*value));
    }
    s.push_str("}\n");
    write_file(path, &s)
}

pub fn stability_json(path: &Path, report: &StabilityReport<f64>) -> Result<(), CliError> {
    let mut s = String::from("{\n");
    let fields = [
        ("h_o", report.h_o),
        ("height_gap", report.height_gap),
        ("height_bound_rhs", report.height_bound_rhs),
        ("vol_graph", report.vol_graph),
        ("vol_base", report.vol_base),
        ("vol_estimate_rhs", report.vol_estimate_rhs),
        ("mass_a_plus", report.mass_a_plus),
        ("mass_a_minus", report.mass_a_minus),
        ("mass_b_plus", report.mass_b_plus),
        ("mass_b_minus", report.mass_b_minus),
        ("flat_distance_bound", report.flat_distance_bound),
        ("gamma", report.gamma),
    ];
    for (k, (name, value)) in fields.iter().enumerate() {
        let comma = if k + 1 == fields.len() { "" } else { "," };
        let _ = writeln!(s, "  \"{name}\": {}{comma}", num(*value));
    }
    s.push_str("}\n");
    write_file(path, &s)
}

pub fn sweep_csv(path: &Path, sweep: &SweepResult<f64>) -> Result<(), CliError> {
    let mut s = String::from(
        "i,mu,mass,h_o,height_gap,vol_gap,mass_A_plus,mass_A_minus,mass_B_plus,mass_B_minus,flat_bound,gamma_fit,vol_gap_fixed\n",
    );
    let rows = &sweep.rows;
    for (k, row) in rows.iter().enumerate() {
        let gamma = if k + 1 == rows.len() {
            num(sweep.gamma_fit)
        } else {
            String::new()
        };
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{gamma},{}",
            row.index,
            num(row.mu),
            num(row.mass),
            num(row.h_o),
            num(row.height_gap),
            num(row.vol_gap),
            num(row.mass_a_plus),
            num(row.mass_a_minus),
            num(row.mass_b_plus),
            num(row.mass_b_minus),
            num(row.flat_bound),
            num(row.vol_gap_fixed),
        );
    }
    write_file(path, &s)
}

/// Log-log scatter of (mass, flat bound) with the fitted-slope line.
pub fn sweep_svg(path: &Path, sweep: &SweepResult<f64>) -> Result<(), CliError> {
    let pts: Vec<(f64, f64)> = sweep
        .rows
        .iter()
        .filter(|r| r.mass > 0.0 && r.flat_bound > 0.0)
        .map(|r| (r.mass.log10(), r.flat_bound.log10()))
        .collect();
    if pts.len() < 2 {
        return Ok(());
    }
    let (w, h, margin) = (480.0, 360.0, 48.0);
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let (x0, x1) = (xs.iter().cloned().fold(f64::MAX, f64::min), xs.iter().cloned().fold(f64::MIN, f64::max));
    let (y0, y1) = (ys.iter().cloned().fold(f64::MAX, f64::min), ys.iter().cloned().fold(f64::MIN, f64::max));
    let pad = |lo: f64, hi: f64| {
        let span = (hi - lo).max(1e-9);
        (lo - 0.06 * span, hi + 0.06 * span)
    };
    let (x0, x1) = pad(x0, x1);
    let (y0, y1) = pad(y0, y1);
    let sx = |x: f64| margin + (x - x0) / (x1 - x0) * (w - 2.0 * margin);
    let sy = |y: f64| h - margin - (y - y0) / (y1 - y0) * (h - 2.0 * margin);

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    let _ = writeln!(s, "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>",
        margin, h - margin, w - margin, h - margin
    );
    let _ = writeln!(
        s,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>",
        margin, margin, margin, h - margin
    );
    // Fitted line through the last point with the fitted slope, clipped to
    // the data box.
    let (mx, my) = *pts.last().expect("len checked");
    let gamma = sweep.gamma_fit;
    let (lx0, lx1) = if gamma.abs() > 1e-12 {
        let xa = mx + (y0 - my) / gamma;
        let xb = mx + (y1 - my) / gamma;
        (xa.min(xb).max(x0), xa.max(xb).min(x1))
    } else {
        (x0, x1)
    };
    if lx0 < lx1 {
        let line_y = |x: f64| my + gamma * (x - mx);
        let _ = writeln!(
            s,
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>",
            sx(lx0),
            sy(line_y(lx0)),
            sx(lx1),
            sy(line_y(lx1))
        );
    }
    for (x, y) in &pts {
        let _ = writeln!(
            s,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"#1a6\"/>",
            sx(*x),
            sy(*y)
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"12\">log10 mass</text>",
        w / 2.0 - 40.0,
        h - 12.0
    );
    let _ = writeln!(
        s,
        "<text x=\"14\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"12\" transform=\"rotate(-90 14 {:.2})\">log10 flat bound</text>",
        h / 2.0 + 50.0,
        h / 2.0 + 50.0
    );
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"12\">slope {:.4}</text>",
        w - margin - 110.0,
        margin + 14.0,
        sweep.gamma_fit
    );
    s.push_str("</svg>\n");
    write_file(path, &s)
}

/// The run summary: the one artifact allowed to carry a timestamp.
pub fn run_summary_json(
    path: &Path,
    config_path: &str,
    outcomes: &[CheckOutcome],
    skipped: &[String],
    wall_seconds: f64,
    timestamp_unix: u64,
) -> Result<(), CliError> {
    let mut s = String::from("{\n");
    let _ = writeln!(s, "  \"v\": 1,");
    let _ = writeln!(
        s,
        "  \"tool\": \"{} {}\",",
        env!("CARGO_PKG_NAME"),
        env!("CARGO_PKG_VERSION")
    );
    let _ = writeln!(s, "  \"timestamp_unix\": {timestamp_unix},");
    let _ = writeln!(s, "  \"config\": {},", serde_json::to_string(config_path).expect("string"));
    let _ = writeln!(s, "  \"wall_clock_seconds\": {},", num(wall_seconds));
    let _ = writeln!(s, "  \"checks\": [");
    for (k, outcome) in outcomes.iter().enumerate() {
        let comma = if k + 1 == outcomes.len() { "" } else { "," };
        let residual = match outcome.residual {
            Some(r) => num(r),
            None => "null".into(),
        };
        let _ = writeln!(
            s,
            "    {{\"name\": \"{}\", \"passed\": {}, \"residual\": {residual}, \"detail\": {}}}{comma}",
            outcome.name,
            outcome.passed,
            serde_json::to_string(&outcome.detail).expect("string"),
        );
    }
    let _ = writeln!(s, "  ],");
    let skipped_json: Vec<String> = skipped
        .iter()
        .map(|t| serde_json::to_string(t).expect("string"))
        .collect();
    let _ = writeln!(s, "  \"skipped_artifacts\": [{}],", skipped_json.join(", "));
    let _ = writeln!(
        s,
        "  \"all_passed\": {}",
        outcomes.iter().all(|o| o.passed)
    );
    s.push_str("}\n");
    write_file(path, &s)
}
