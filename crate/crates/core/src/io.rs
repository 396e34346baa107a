//! CSV and PGM import/export.
//!
//! Every CSV starts with a header row. Vertices are written 1-based and
//! eigenmodes 0-based; complex values use paired `_re`/`_im` columns. Floats
//! are written in Rust's shortest round-trip form, so reading a file back
//! reproduces the values bit for bit.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::operators::{Complex64, Signal, Spectrum};
use crate::spectral::SpectralBasis;
use crate::transform::WgftCoefficients;
use crate::windows::{ConditionReport, SpectralWindow, WindowFamily};

fn writer(path: &Path) -> Result<csv::Writer<File>> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

fn reader(path: &Path) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(file))
}

fn parse_field<T: std::str::FromStr>(path: &Path, line: usize, field: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    field.trim().parse().map_err(|e: T::Err| Error::Parse {
        path: path.to_path_buf(),
        line,
        message: format!("bad value `{field}`: {e}"),
    })
}

fn record_line(record: &csv::StringRecord) -> usize {
    record.position().map_or(0, |p| p.line() as usize)
}

pub fn write_eigenvalues(path: &Path, basis: &SpectralBasis) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["mode", "eigenvalue"])?;
    for (l, lambda) in basis.eigenvalues().iter().enumerate() {
        w.write_record([l.to_string(), lambda.to_string()])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Eigenvector matrix, one row per vertex and one column per mode.
pub fn write_eigenvectors(path: &Path, basis: &SpectralBasis) -> Result<()> {
    let mut w = writer(path)?;
    let n = basis.len();
    let mut header = vec!["vertex".to_string()];
    header.extend((0..n).map(|l| format!("chi_{l}")));
    w.write_record(&header)?;
    for i in 0..n {
        let mut row = vec![(i + 1).to_string()];
        row.extend((0..n).map(|l| basis.mode(l, i).to_string()));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_signal(path: &Path, f: &Signal) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["vertex", "re", "im"])?;
    for (i, z) in f.iter().enumerate() {
        w.write_record([(i + 1).to_string(), z.re.to_string(), z.im.to_string()])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads a `vertex,re,im` file. Vertices must be `1..=N` in order.
pub fn read_signal(path: &Path) -> Result<Signal> {
    let mut r = reader(path)?;
    let mut values = Vec::new();
    for record in r.records() {
        let record = record?;
        let line = record_line(&record);
        if record.len() != 3 {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                message: "expected vertex,re,im".into(),
            });
        }
        let vertex: usize = parse_field(path, line, &record[0])?;
        if vertex != values.len() + 1 {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("expected vertex {}, found {vertex}", values.len() + 1),
            });
        }
        values.push(Complex64::new(
            parse_field(path, line, &record[1])?,
            parse_field(path, line, &record[2])?,
        ));
    }
    Ok(Signal(values))
}

/// `vertex,abs_error` for `|f(i) - f_rec(i)|`.
pub fn write_pointwise_error(path: &Path, reference: &Signal, approx: &Signal) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["vertex", "abs_error"])?;
    for (i, (a, b)) in reference.iter().zip(approx.iter()).enumerate() {
        w.write_record([(i + 1).to_string(), (a - b).norm().to_string()])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Window spectra: `mode, eigenvalue, g{j}_re, g{j}_im, gamma{j}_re, gamma{j}_im, ...`.
pub fn write_window_family(
    path: &Path,
    basis: &SpectralBasis,
    family: &WindowFamily,
) -> Result<()> {
    let mut w = writer(path)?;
    let mut header = vec!["mode".to_string(), "eigenvalue".to_string()];
    for j in 1..=family.len() {
        header.extend([
            format!("g{j}_re"),
            format!("g{j}_im"),
            format!("gamma{j}_re"),
            format!("gamma{j}_im"),
        ]);
    }
    w.write_record(&header)?;
    for (l, lambda) in basis.eigenvalues().iter().enumerate() {
        let mut row = vec![l.to_string(), lambda.to_string()];
        for (g, gamma) in family.pairs() {
            let (a, b) = (g.samples[l], gamma.samples[l]);
            row.extend([a.re, a.im, b.re, b.im].iter().map(f64::to_string));
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads a family written by [`write_window_family`]. The eigenvalue column
/// is informational and ignored.
pub fn read_window_family(path: &Path) -> Result<WindowFamily> {
    let mut r = reader(path)?;
    let header_len = r.headers()?.len();
    if header_len < 6 || (header_len - 2) % 4 != 0 {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: "expected mode,eigenvalue followed by groups of four window columns".into(),
        });
    }
    let windows = (header_len - 2) / 4;
    let mut analysis = vec![Vec::new(); windows];
    let mut synthesis = vec![Vec::new(); windows];
    for record in r.records() {
        let record = record?;
        let line = record_line(&record);
        let mode: usize = parse_field(path, line, &record[0])?;
        if mode != analysis[0].len() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("expected mode {}, found {mode}", analysis[0].len()),
            });
        }
        for j in 0..windows {
            let col = 2 + 4 * j;
            let value = |k: usize| parse_field::<f64>(path, line, &record[col + k]);
            analysis[j].push(Complex64::new(value(0)?, value(1)?));
            synthesis[j].push(Complex64::new(value(2)?, value(3)?));
        }
    }
    let to_windows = |samples: Vec<Vec<Complex64>>, prefix: &str| {
        samples
            .into_iter()
            .enumerate()
            .map(|(j, s)| SpectralWindow::new(Spectrum(s), format!("{prefix}{}", j + 1)))
            .collect::<Result<Vec<_>>>()
    };
    WindowFamily::new(to_windows(analysis, "g")?, to_windows(synthesis, "gamma")?)
}

/// Per-vertex denominators `vertex, d_re, d_im, d_abs`.
pub fn write_condition_report(path: &Path, report: &ConditionReport) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["vertex", "d_re", "d_im", "d_abs"])?;
    for (i, d) in report.denominators.iter().enumerate() {
        w.write_record([
            (i + 1).to_string(),
            d.re.to_string(),
            d.im.to_string(),
            d.norm().to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Human-readable verdict of a [`ConditionReport`].
pub fn condition_summary(report: &ConditionReport) -> String {
    let s = &report.sufficient;
    let mut out = String::new();
    out.push_str(&format!(
        "satisfied = {}\nmin_abs_denominator = {}\nargmin_vertex = {}\ntolerance = {}\n",
        report.satisfied,
        report.min_abs,
        report.argmin + 1,
        report.tolerance
    ));
    if !report.failing_vertices.is_empty() {
        let ids: Vec<String> = report
            .failing_vertices
            .iter()
            .map(|v| (v + 1).to_string())
            .collect();
        out.push_str(&format!("failing_vertices = [{}]\n", ids.join(", ")));
    }
    for (j, p) in s.pairs.iter().enumerate() {
        out.push_str(&format!(
            "window {}: csuff1 = {}, csuff1a = {}, csuff1b = {}, csuff1c = {}, csuff2 = {}\n",
            j + 1,
            p.csuff1,
            p.csuff1a,
            p.csuff1b,
            p.csuff1c,
            p.csuff2
        ));
    }
    out.push_str(&format!(
        "csuff3 = {}\ncsuff4 = {}\ncsuff5 = {}\ndc_bound_applies = {}\nsufficient_condition_guarantee = {}\n",
        s.csuff3,
        s.csuff4,
        s.csuff5,
        s.dc_bound_applies,
        s.guarantees_nondegeneracy()
    ));
    out
}

/// Coefficients in long form `window, vertex, mode, re, im`, preceded by a
/// `# fingerprint=... windows=J n=N` comment line.
pub fn write_coefficients(path: &Path, coeffs: &WgftCoefficients) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut buf = BufWriter::new(file);
    writeln!(
        buf,
        "# fingerprint={} windows={} n={}",
        coeffs.fingerprint(),
        coeffs.window_count(),
        coeffs.signal_len()
    )
    .map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(buf);
    w.write_record(["window", "vertex", "mode", "re", "im"])?;
    for (j, m) in coeffs.matrices().iter().enumerate() {
        for n in 0..m.nrows() {
            for k in 0..m.ncols() {
                let z = m[(n, k)];
                w.write_record([
                    (j + 1).to_string(),
                    (n + 1).to_string(),
                    k.to_string(),
                    z.re.to_string(),
                    z.im.to_string(),
                ])?;
            }
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_coefficients(path: &Path) -> Result<WgftCoefficients> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let meta_line = text.lines().next().unwrap_or_default();
    let bad_meta = || Error::Parse {
        path: path.to_path_buf(),
        line: 1,
        message: "missing `# fingerprint=... windows=J n=N` line".into(),
    };
    let meta = meta_line.strip_prefix('#').ok_or_else(bad_meta)?;
    let mut fingerprint = None;
    let mut windows = None;
    let mut n = None;
    for item in meta.split_whitespace() {
        match item.split_once('=') {
            Some(("fingerprint", v)) => fingerprint = Some(v.to_string()),
            Some(("windows", v)) => windows = Some(parse_field::<usize>(path, 1, v)?),
            Some(("n", v)) => n = Some(parse_field::<usize>(path, 1, v)?),
            _ => {}
        }
    }
    let (fingerprint, windows, n) = match (fingerprint, windows, n) {
        (Some(f), Some(j), Some(n)) if j > 0 && n > 0 => (f, j, n),
        _ => return Err(bad_meta()),
    };

    let mut matrices = vec![DMatrix::<Complex64>::zeros(n, n); windows];
    let mut seen = 0usize;
    let mut r = reader(path)?;
    for record in r.records() {
        let record = record?;
        let line = record_line(&record);
        let j: usize = parse_field(path, line, &record[0])?;
        let v: usize = parse_field(path, line, &record[1])?;
        let k: usize = parse_field(path, line, &record[2])?;
        if j == 0 || j > windows || v == 0 || v > n || k >= n {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("index out of range (window {j}, vertex {v}, mode {k})"),
            });
        }
        matrices[j - 1][(v - 1, k)] = Complex64::new(
            parse_field(path, line, &record[3])?,
            parse_field(path, line, &record[4])?,
        );
        seen += 1;
    }
    if seen != windows * n * n {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: format!(
                "expected {} coefficient rows, found {seen}",
                windows * n * n
            ),
        });
    }
    WgftCoefficients::new(matrices, fingerprint)
}

/// Real matrix with rows = vertices and columns = eigenmodes.
pub fn write_spectrogram(path: &Path, matrix: &DMatrix<f64>) -> Result<()> {
    let mut w = writer(path)?;
    let mut header = vec!["vertex".to_string()];
    header.extend((0..matrix.ncols()).map(|k| format!("mode_{k}")));
    w.write_record(&header)?;
    for n in 0..matrix.nrows() {
        let mut row = vec![(n + 1).to_string()];
        row.extend(matrix.row(n).iter().map(f64::to_string));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Binary 8-bit PGM, linear grey scale normalized by the maximum entry.
/// Image rows are vertices and columns eigenmodes.
pub fn write_pgm(path: &Path, matrix: &DMatrix<f64>) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let max = matrix.iter().copied().fold(0.0, f64::max);
    write!(out, "P5\n{} {}\n255\n", matrix.ncols(), matrix.nrows())
        .map_err(|e| Error::io(path, e))?;
    let mut pixels = Vec::with_capacity(matrix.len());
    for n in 0..matrix.nrows() {
        for k in 0..matrix.ncols() {
            let v = if max > 0.0 { matrix[(n, k)] / max } else { 0.0 };
            pixels.push((v * 255.0).round().clamp(0.0, 255.0) as u8);
        }
    }
    out.write_all(&pixels).map_err(|e| Error::io(path, e))?;
    out.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{path_graph, LaplacianKind};
    use crate::signals::random_signal;
    use crate::transform::mwgft_analyze;
    use crate::windows::{rbf_prototype, shifted_family, uniform_shifts, Pairing};

    fn setup() -> (SpectralBasis, WindowFamily) {
        let b =
            SpectralBasis::from_graph(&path_graph(6).unwrap(), LaplacianKind::SymmetricNormalized)
                .unwrap();
        let k = rbf_prototype(b.lambda_max(), 0.5).unwrap();
        let fam = WindowFamily::paired(
            shifted_family(&k, &uniform_shifts(2, b.lambda_max()), &b),
            Pairing::NormalizedSynthesis,
        )
        .unwrap();
        (b, fam)
    }

    #[test]
    fn signal_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("f.csv");
        let f = random_signal(7, 1, true);
        write_signal(&p, &f).unwrap();
        assert_eq!(read_signal(&p).unwrap(), f);
    }

    #[test]
    fn family_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("w.csv");
        let (b, fam) = setup();
        write_window_family(&p, &b, &fam).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(text.starts_with("mode,eigenvalue,g1_re,g1_im,gamma1_re,gamma1_im,g2_re"));
        let back = read_window_family(&p).unwrap();
        for ((a, b), (c, d)) in fam.pairs().zip(back.pairs()) {
            assert_eq!(a.samples, c.samples);
            assert_eq!(b.samples, d.samples);
        }
    }

    #[test]
    fn coefficients_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.csv");
        let (b, fam) = setup();
        let coeffs = mwgft_analyze(&b, &fam, &random_signal(6, 2, true)).unwrap();
        write_coefficients(&p, &coeffs).unwrap();
        assert_eq!(read_coefficients(&p).unwrap(), coeffs);

        let truncated = dir.path().join("t.csv");
        let text = std::fs::read_to_string(&p).unwrap();
        let short: Vec<&str> = text.lines().take(10).collect();
        std::fs::write(&truncated, short.join("\n")).unwrap();
        assert!(matches!(
            read_coefficients(&truncated),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn pgm_header_and_scaling() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.pgm");
        let m = DMatrix::from_row_slice(2, 3, &[0.0, 1.0, 2.0, 4.0, 3.0, 0.5]);
        write_pgm(&p, &m).unwrap();
        let bytes = std::fs::read(&p).unwrap();
        let header = b"P5\n3 2\n255\n";
        assert_eq!(&bytes[..header.len()], header);
        assert_eq!(&bytes[header.len()..], &[0, 64, 128, 255, 191, 32]);
    }
}
