//! Trajectory CSV files: header `tau,x1,x2,x3,x4,v1,v2,v3,v4`, one row per
//! sample, values in `{:.16e}` form so they round-trip exactly.

use crate::error::CliError;
use poincare_core::geodesic::State;
use poincare_core::Vector4;
use std::io::Write;
use std::path::Path;

pub const HEADER: [&str; 9] = ["tau", "x1", "x2", "x3", "x4", "v1", "v2", "v3", "v4"];

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `samples` to `w`.
pub fn write_samples<W: Write>(w: W, samples: &[State]) -> Result<(), CliError> {
    let mut out = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    let io = |e: csv::Error| CliError::Io(e.into());
    out.write_record(HEADER).map_err(io)?;
    for s in samples {
        let row = std::iter::once(s.tau)
            .chain(s.x.iter().copied())
            .chain(s.v.iter().copied())
            .map(fmt);
        out.write_record(row).map_err(io)?;
    }
    out.flush()?;
    Ok(())
}

/// Writes the trajectory to a temporary file next to `path` and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, samples: &[State]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    write_samples(std::io::BufWriter::new(tmp.as_file_mut()), samples)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

/// Parses a trajectory. Errors name the 1-based file line.
pub fn read_samples<R: std::io::Read>(r: R, path: &str) -> Result<Vec<State>, CliError> {
    let fail = |line: u64, message: String| CliError::Csv {
        path: path.to_string(),
        message: format!("line {line}: {message}"),
    };
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let header = reader
        .headers()
        .map_err(|e| fail(1, e.to_string()))?
        .clone();
    if header.iter().ne(HEADER) {
        return Err(fail(1, format!("expected header `{}`", HEADER.join(","))));
    }
    let mut samples = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i as u64 + 2;
        let record = record.map_err(|e| {
            let line = e.position().map_or(line, |p| p.line());
            fail(line, e.to_string())
        })?;
        if record.len() != HEADER.len() {
            return Err(fail(
                line,
                format!("expected {} fields, found {}", HEADER.len(), record.len()),
            ));
        }
        let mut vals = [0.0; 9];
        for (j, (field, slot)) in record.iter().zip(vals.iter_mut()).enumerate() {
            *slot = field.trim().parse().map_err(|_| {
                fail(
                    line,
                    format!("column `{}`: cannot parse `{field}`", HEADER[j]),
                )
            })?;
        }
        samples.push(State::new(
            Vector4::new(vals[1], vals[2], vals[3], vals[4]),
            Vector4::new(vals[5], vals[6], vals[7], vals[8]),
            vals[0],
        ));
    }
    Ok(samples)
}
