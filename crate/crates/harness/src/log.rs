//! CSV run logs.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{HarnessError, Result};
use crate::sim::{Record, RunLog};

pub const HEADER: &str = "t,y_d,y_true,y_meas,y_hat,e,e_o,F_true,F_hat,e_F,s,u,G";

/// Divergence marker prefix; the reader skips `#` lines.
pub const DIVERGED_PREFIX: &str = "# diverged at step ";

fn fields(r: &Record) -> [f64; 13] {
    [
        r.t, r.y_d, r.y_true, r.y_meas, r.y_hat, r.e, r.e_o, r.f_true, r.f_hat, r.e_f, r.s, r.u, r.g,
    ]
}

/// Renders the log with 17 significant digits per value and LF endings.
pub fn render_log_csv(log: &RunLog) -> String {
    let mut out = String::with_capacity(64 + log.records.len() * 13 * 24);
    out.push_str(HEADER);
    out.push('\n');
    for r in &log.records {
        for (i, v) in fields(r).iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write!(out, "{v:.16e}").expect("writing to a String");
        }
        out.push('\n');
    }
    if let Some(k) = log.diverged_at {
        writeln!(out, "{DIVERGED_PREFIX}{k}").expect("writing to a String");
    }
    out
}

pub fn write_log_csv(log: &RunLog, path: &Path) -> Result<()> {
    std::fs::write(path, render_log_csv(log)).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_log_csv(path: &Path) -> Result<Vec<Record>> {
    let csv_err = |source| HarnessError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(csv_err)?;
    let header: Vec<String> = reader.headers().map_err(csv_err)?.iter().map(str::to_owned).collect();
    if header.join(",") != HEADER {
        return Err(HarnessError::Config(format!(
            "{}: unexpected header `{}`",
            path.display(),
            header.join(",")
        )));
    }
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.map_err(csv_err)?;
        let mut v = [0.0; 13];
        for (i, cell) in row.iter().enumerate() {
            v[i] = cell.trim().parse().map_err(|e| {
                HarnessError::Config(format!(
                    "{}: line {}: column {}: {e}",
                    path.display(),
                    row.position().map_or(0, |p| p.line()),
                    i + 1
                ))
            })?;
        }
        out.push(Record {
            t: v[0],
            y_d: v[1],
            y_true: v[2],
            y_meas: v[3],
            y_hat: v[4],
            e: v[5],
            e_o: v[6],
            f_true: v[7],
            f_hat: v[8],
            e_f: v[9],
            s: v[10],
            u: v[11],
            g: v[12],
        });
    }
    Ok(out)
}
