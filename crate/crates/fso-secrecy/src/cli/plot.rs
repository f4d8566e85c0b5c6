//! Plot-script generation from sweep CSVs.
//!
//! Either a gnuplot script referencing the CSV by relative path, or a
//! self-contained SVG line chart. Columns ending in `_err_bits` are
//! treated as error columns and skipped; every other non-axis column
//! becomes one labeled curve.

use std::fmt::Write as _;
use std::path::{Component, Path, PathBuf};

use crate::cli::config::AxisVar;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotStyle {
    /// Plain-text gnuplot script.
    Gnuplot,
    /// Self-contained vector graphic.
    Svg,
}

impl PlotStyle {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "gnuplot" | "gnuplot_script" => Ok(PlotStyle::Gnuplot),
            "svg" | "svg_direct" => Ok(PlotStyle::Svg),
            other => Err(Error::Config(format!(
                "unknown plot style '{other}' (expected gnuplot or svg)"
            ))),
        }
    }
}

struct ParsedCsv {
    header: Vec<String>,
    columns: Vec<Vec<f64>>,
}

fn parse_csv(path: &Path) -> Result<ParsedCsv> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();

    let (_, header_line) = lines.next().ok_or_else(|| Error::CsvParse {
        line: 1,
        message: "empty file".into(),
    })?;
    let header: Vec<String> = header_line
        .split(',')
        .map(|s| s.trim().to_string())
        .collect();
    if header.len() < 2 {
        return Err(Error::CsvParse {
            line: 1,
            message: format!("need an axis column and at least one value column, got {header:?}"),
        });
    }

    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); header.len()];
    for (idx, line) in lines {
        if line.trim().is_empty() {
            return Err(Error::CsvParse {
                line: idx + 1,
                message: "empty data row".into(),
            });
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != header.len() {
            return Err(Error::CsvParse {
                line: idx + 1,
                message: format!("expected {} cells, got {}", header.len(), cells.len()),
            });
        }
        for (c, cell) in cells.iter().enumerate() {
            let v: f64 = cell.trim().parse().map_err(|_| Error::CsvParse {
                line: idx + 1,
                message: format!("'{cell}' is not a number"),
            })?;
            columns[c].push(v);
        }
    }
    if columns[0].is_empty() {
        return Err(Error::CsvParse {
            line: 2,
            message: "no data rows".into(),
        });
    }
    Ok(ParsedCsv { header, columns })
}

/// Indices of the curve (value) columns: everything except the axis and
/// the error columns.
fn curve_columns(header: &[String]) -> Vec<usize> {
    (1..header.len())
        .filter(|&i| !header[i].ends_with("_err_bits"))
        .collect()
}

fn axis_label(name: &str) -> String {
    for axis in [
        AxisVar::GammaBDb,
        AxisVar::Rho,
        AxisVar::SigmaTb2,
        AxisVar::GammaEDb,
    ] {
        if axis.key() == name {
            return axis.label().to_string();
        }
    }
    name.to_string()
}

fn curve_title(name: &str) -> String {
    name.strip_suffix("_bits").unwrap_or(name).replace('_', " ")
}

/// The CSV path as the script should reference it: relative to the script's
/// directory, never absolute.
fn csv_reference(csv_path: &Path, out_path: &Path) -> PathBuf {
    let out_dir = out_path.parent().unwrap_or_else(|| Path::new(""));
    if let Ok(stripped) = csv_path.strip_prefix(out_dir) {
        return stripped.to_path_buf();
    }
    if !csv_path.is_absolute()
        && !out_dir
            .components()
            .any(|c| matches!(c, Component::Normal(_)))
    {
        return csv_path.to_path_buf();
    }
    PathBuf::from(csv_path.file_name().unwrap_or_default())
}

/// Writes a plot script (or SVG) for `csv_path` to `out_path`.
pub fn emit_plot_script(csv_path: &Path, style: PlotStyle, out_path: &Path) -> Result<()> {
    let parsed = parse_csv(csv_path)?;
    let rendered = match style {
        PlotStyle::Gnuplot => render_gnuplot(&parsed, &csv_reference(csv_path, out_path)),
        PlotStyle::Svg => render_svg(&parsed),
    };
    std::fs::write(out_path, rendered)?;
    Ok(())
}

fn render_gnuplot(csv: &ParsedCsv, csv_ref: &Path) -> String {
    let mut s = String::new();
    let curves = curve_columns(&csv.header);
    let _ = writeln!(s, "# average secrecy capacity sweep");
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set xlabel \"{}\"", axis_label(&csv.header[0]));
    let _ = writeln!(
        s,
        "set ylabel \"average secrecy capacity lower bound (bits/channel use)\""
    );
    let _ = writeln!(s, "set key bottom right");
    let _ = writeln!(s, "set grid");
    s.push_str("plot ");
    for (n, &c) in curves.iter().enumerate() {
        if n > 0 {
            s.push_str(", \\\n     ");
        }
        let _ = write!(
            s,
            "'{}' using 1:{} with lines lw 2 title '{}'",
            csv_ref.display(),
            c + 1,
            curve_title(&csv.header[c])
        );
    }
    s.push('\n');
    s
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

fn render_svg(csv: &ParsedCsv) -> String {
    let curves = curve_columns(&csv.header);
    let xs = &csv.columns[0];
    let (x_min, x_max) = extent(xs);
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for &c in &curves {
        let (lo, hi) = extent(&csv.columns[c]);
        y_min = y_min.min(lo);
        y_max = y_max.max(hi);
    }
    y_min = y_min.min(0.0);
    if y_max <= y_min {
        y_max = y_min + 1.0;
    }
    y_max += 0.05 * (y_max - y_min);

    const W: f64 = 800.0;
    const H: f64 = 560.0;
    const L: f64 = 80.0;
    const R: f64 = 24.0;
    const T: f64 = 24.0;
    const B: f64 = 64.0;
    let px = |x: f64| L + (x - x_min) / (x_max - x_min) * (W - L - R);
    let py = |y: f64| H - B - (y - y_min) / (y_max - y_min) * (H - T - B);

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\" font-family=\"sans-serif\" font-size=\"13\">"
    );
    let _ = writeln!(s, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>");

    // axes + ticks
    let _ = writeln!(
        s,
        "<rect x=\"{L}\" y=\"{T}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
        W - L - R,
        H - T - B
    );
    for k in 0..=5 {
        let xv = x_min + (x_max - x_min) * k as f64 / 5.0;
        let yv = y_min + (y_max - y_min) * k as f64 / 5.0;
        let xp = px(xv);
        let yp = py(yv);
        let _ = writeln!(
            s,
            "<line x1=\"{xp:.1}\" y1=\"{:.1}\" x2=\"{xp:.1}\" y2=\"{:.1}\" stroke=\"black\"/>",
            H - B,
            H - B + 5.0
        );
        let _ = writeln!(
            s,
            "<text x=\"{xp:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>",
            H - B + 20.0,
            tick(xv)
        );
        let _ = writeln!(
            s,
            "<line x1=\"{:.1}\" y1=\"{yp:.1}\" x2=\"{L}\" y2=\"{yp:.1}\" stroke=\"black\"/>",
            L - 5.0
        );
        let _ = writeln!(
            s,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{}</text>",
            L - 9.0,
            yp + 4.0,
            tick(yv)
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>",
        L + (W - L - R) / 2.0,
        H - 16.0,
        axis_label(&csv.header[0])
    );
    let _ = writeln!(
        s,
        "<text x=\"18\" y=\"{:.1}\" text-anchor=\"middle\" \
         transform=\"rotate(-90 18 {:.1})\">average secrecy capacity lower bound \
         (bits/channel use)</text>",
        T + (H - T - B) / 2.0,
        T + (H - T - B) / 2.0
    );

    // curves
    for (n, &c) in curves.iter().enumerate() {
        let color = PALETTE[n % PALETTE.len()];
        let mut pts = String::new();
        for (i, &x) in xs.iter().enumerate() {
            let _ = write!(pts, "{:.2},{:.2} ", px(x), py(csv.columns[c][i]));
        }
        let _ = writeln!(
            s,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>",
            pts.trim_end()
        );
    }

    // legend
    for (n, &c) in curves.iter().enumerate() {
        let color = PALETTE[n % PALETTE.len()];
        let y = T + 18.0 + 18.0 * n as f64;
        let _ = writeln!(
            s,
            "<line x1=\"{:.1}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" \
             stroke=\"{color}\" stroke-width=\"2\"/>",
            L + 12.0,
            L + 40.0
        );
        let _ = writeln!(
            s,
            "<text x=\"{:.1}\" y=\"{:.1}\">{}</text>",
            L + 46.0,
            y + 4.0,
            curve_title(&csv.header[c])
        );
    }

    s.push_str("</svg>\n");
    s
}

fn extent(values: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo, hi)
}

fn tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if !(0.01..1000.0).contains(&a) {
        format!("{v:.1e}")
    } else {
        let r = (v * 1000.0).round() / 1000.0;
        format!("{r}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_csv(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::Builder::new().suffix(".csv").tempfile().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    const FIG1_LIKE: &str = "gamma_b_db,lb_rho0_bits,lb_rho0_err_bits,lb_rho0.1_bits,lb_rho0.1_err_bits,lb_rho0.5_bits,lb_rho0.5_err_bits,lb_rho0.9_bits,lb_rho0.9_err_bits,awgn_baseline_bits,awgn_baseline_err_bits\n\
        0,0.1,0.001,0.09,0.001,0.07,0.001,0.04,0.001,0,0\n\
        10,0.4,0.001,0.39,0.001,0.36,0.001,0.33,0.001,0.45,0\n";

    #[test]
    fn gnuplot_script_has_five_labeled_curves() {
        let csv = write_csv(FIG1_LIKE);
        let out = tempfile::Builder::new().suffix(".gp").tempfile().unwrap();
        emit_plot_script(csv.path(), PlotStyle::Gnuplot, out.path()).unwrap();
        let script = std::fs::read_to_string(out.path()).unwrap();
        assert_eq!(script.matches("title").count(), 5, "script:\n{script}");
        assert!(script.contains("average electrical SNR at Bob (dB)"));
        assert!(
            !script.contains("/tmp"),
            "script must not embed absolute paths:\n{script}"
        );
    }

    #[test]
    fn svg_has_five_curves_and_labels() {
        let csv = write_csv(FIG1_LIKE);
        let out = tempfile::Builder::new().suffix(".svg").tempfile().unwrap();
        emit_plot_script(csv.path(), PlotStyle::Svg, out.path()).unwrap();
        let svg = std::fs::read_to_string(out.path()).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 5);
        assert!(svg.contains("bits/channel use"));
        assert!(svg.starts_with("<svg"));
    }

    #[test]
    fn three_curve_table_renders_three_curves() {
        let csv = write_csv(
            "gamma_b_db,a_bits,a_err_bits,b_bits,b_err_bits,c_bits,c_err_bits\n0,1,0,2,0,3,0\n1,2,0,3,0,4,0\n",
        );
        let out = tempfile::Builder::new().suffix(".gp").tempfile().unwrap();
        emit_plot_script(csv.path(), PlotStyle::Gnuplot, out.path()).unwrap();
        let script = std::fs::read_to_string(out.path()).unwrap();
        assert_eq!(script.matches("title").count(), 3);
    }

    #[test]
    fn empty_rows_are_an_error_not_an_empty_plot() {
        let csv = write_csv("gamma_b_db,a_bits,a_err_bits\n");
        let out = tempfile::NamedTempFile::new().unwrap();
        let err = emit_plot_script(csv.path(), PlotStyle::Gnuplot, out.path());
        assert!(matches!(err, Err(Error::CsvParse { .. })), "{err:?}");
    }

    #[test]
    fn malformed_cells_report_the_row_number() {
        let csv = write_csv("gamma_b_db,a_bits,a_err_bits\n0,0.5,0\n1,oops,0\n");
        let out = tempfile::NamedTempFile::new().unwrap();
        match emit_plot_script(csv.path(), PlotStyle::Gnuplot, out.path()) {
            Err(Error::CsvParse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected row-numbered parse error, got {other:?}"),
        }
    }

    #[test]
    fn ragged_rows_report_the_row_number() {
        let csv = write_csv("gamma_b_db,a_bits,a_err_bits\n0,0.5\n");
        let out = tempfile::NamedTempFile::new().unwrap();
        match emit_plot_script(csv.path(), PlotStyle::Gnuplot, out.path()) {
            Err(Error::CsvParse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected row-numbered parse error, got {other:?}"),
        }
    }

    #[test]
    fn csv_reference_is_relative() {
        let r = csv_reference(Path::new("/a/b/fig1.csv"), Path::new("/a/b/fig1.gp"));
        assert_eq!(r, PathBuf::from("fig1.csv"));
        let r = csv_reference(Path::new("data/fig1.csv"), Path::new("fig1.gp"));
        assert_eq!(r, PathBuf::from("data/fig1.csv"));
        let r = csv_reference(Path::new("/elsewhere/fig1.csv"), Path::new("/a/b/fig1.gp"));
        assert_eq!(r, PathBuf::from("fig1.csv"));
    }
}
