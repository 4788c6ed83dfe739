use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;

use super::record::{BasisRow, RunRecord, SweepRow};
use crate::error::{Error, Result};

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        ensure_dir(parent)?;
    }
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    write_text(path, &(text + "\n"))
}

fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:e}")
    }
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from("scheme,dt,err_inf,eps_mass,eps_ham,cost,status\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.scheme,
            num(r.dt),
            num(r.err_inf),
            num(r.eps_mass),
            num(r.eps_ham),
            r.cost,
            r.status
        );
    }
    s
}

pub fn basis_csv(rows: &[BasisRow]) -> String {
    let mut s = String::from("n,dt,err_inf,status\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{}", r.n, num(r.dt), num(r.err_inf), r.status);
    }
    s
}

pub fn run_csv(record: &RunRecord) -> String {
    let mut s = String::from("time,err_inf,eps_mass,eps_ham,evals_a,evals_b,sup_norm\n");
    for p in &record.samples {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            num(p.time),
            num(p.err_inf),
            num(p.eps_mass),
            num(p.eps_ham),
            p.evals_a,
            p.evals_b,
            num(p.sup_norm)
        );
    }
    s
}

/// `x,re,im` rows.
pub fn snapshot_csv(nodes: &[f64], values: &[Complex64]) -> String {
    let mut s = String::from("x,re,im\n");
    for (x, z) in nodes.iter().zip(values) {
        let _ = writeln!(s, "{},{},{}", num(*x), num(z.re), num(z.im));
    }
    s
}

/// Writes `<stem>.csv` and the `<stem>.json` sidecar.
pub fn write_snapshot<M: Serialize>(
    dir: &Path,
    stem: &str,
    nodes: &[f64],
    values: &[Complex64],
    meta: &M,
) -> Result<PathBuf> {
    let csv = dir.join(format!("{stem}.csv"));
    write_text(&csv, &snapshot_csv(nodes, values))?;
    write_json(&dir.join(format!("{stem}.json")), meta)?;
    Ok(csv)
}

/// Parses a snapshot CSV into nodes and values.
pub fn read_snapshot(path: &Path) -> Result<(Vec<f64>, Vec<Complex64>)> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == "x,re,im" => {}
        _ => return Err(Error::Config(format!("{}: expected header `x,re,im`", path.display()))),
    }
    let (mut xs, mut zs) = (Vec::new(), Vec::new());
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parse = |v: Option<&str>| -> Result<f64> {
            v.and_then(|s| s.trim().parse::<f64>().ok())
                .ok_or_else(|| Error::Config(format!("{}: bad row {}", path.display(), i + 2)))
        };
        let mut it = line.split(',');
        let x = parse(it.next())?;
        let re = parse(it.next())?;
        let im = parse(it.next())?;
        xs.push(x);
        zs.push(Complex64::new(re, im));
    }
    Ok((xs, zs))
}

/// Raw little-endian `(re, im)` pairs, for bit-exact caching.
pub fn encode_states(states: &[Vec<Complex64>]) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(&(states.len() as u64).to_le_bytes());
    for s in states {
        out.extend_from_slice(&(s.len() as u64).to_le_bytes());
        for z in s {
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    out
}

pub fn decode_states(bytes: &[u8]) -> Option<Vec<Vec<Complex64>>> {
    let mut pos = 0;
    let mut take = |n: usize| -> Option<&[u8]> {
        let s = bytes.get(pos..pos + n)?;
        pos += n;
        Some(s)
    };
    let word = |b: &[u8]| u64::from_le_bytes(b.try_into().unwrap());
    let count = word(take(8)?) as usize;
    let mut states = Vec::with_capacity(count.min(1 << 16));
    for _ in 0..count {
        let len = word(take(8)?) as usize;
        let mut s = Vec::with_capacity(len.min(1 << 24));
        for _ in 0..len {
            let re = f64::from_le_bytes(take(8)?.try_into().unwrap());
            let im = f64::from_le_bytes(take(8)?.try_into().unwrap());
            s.push(Complex64::new(re, im));
        }
        states.push(s);
    }
    if pos == bytes.len() {
        Some(states)
    } else {
        None
    }
}
