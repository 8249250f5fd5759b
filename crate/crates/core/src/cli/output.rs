//! CSV artifacts with a provenance footer, written atomically.

use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::commutator::IdentityReport;
use crate::error::{Error, Result};
use crate::estimates::EstimateReport;

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Io(std::io::Error::other(e.to_string()))
}

/// Shortest round-trip scientific form; identical input gives identical text.
pub fn fmt_real(x: f64) -> String {
    format!("{x:e}")
}

/// Provenance stamp: crate version and a SHA-256 of whatever configured the run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stamp {
    pub hash: String,
}

impl Stamp {
    pub fn of_bytes(bytes: &[u8]) -> Self {
        Self {
            hash: format!("{:x}", Sha256::digest(bytes)),
        }
    }

    /// Hash of an argument vector, joined by NUL.
    pub fn of_args<S: AsRef<str>>(args: &[S]) -> Self {
        let joined: Vec<&str> = args.iter().map(|s| s.as_ref()).collect();
        Self::of_bytes(joined.join("\0").as_bytes())
    }

    pub fn footer(&self) -> String {
        format!("# gw-commute {} {}", env!("CARGO_PKG_VERSION"), self.hash)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    failures: usize,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            ..Self::default()
        }
    }

    pub fn push(&mut self, row: Vec<String>, pass: bool) {
        debug_assert_eq!(row.len(), self.header.len());
        if !pass {
            self.failures += 1;
        }
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn failures(&self) -> usize {
        self.failures
    }

    pub fn render(&self, stamp: &Stamp) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(io_err)?;
        for row in &self.rows {
            w.write_record(row).map_err(io_err)?;
        }
        let mut out = w.into_inner().map_err(io_err)?;
        writeln!(out, "{}", stamp.footer())?;
        Ok(out)
    }

    pub fn write(&self, path: &Path, stamp: &Stamp) -> Result<()> {
        write_atomic(path, &self.render(stamp)?)
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub const IDENTITY_HEADER: [&str; 7] =
    ["alpha", "omega_re", "omega_im", "pair", "rel_l2_err", "pass", "testfn"];

pub fn identity_row(r: &IdentityReport, testfn: &str) -> Vec<String> {
    vec![
        r.alpha.to_string(),
        fmt_real(r.omega.re),
        fmt_real(r.omega.im),
        r.pair.clone(),
        fmt_real(r.rel_l2_err),
        r.pass.to_string(),
        testfn.to_string(),
    ]
}

pub const ESTIMATE_HEADER: [&str; 15] = [
    "n", "m", "p", "q", "r", "omega_re", "omega_im", "theta", "lhs", "rhs", "constant", "margin",
    "pass", "kind", "testfn",
];

pub fn estimate_row(r: &EstimateReport) -> Vec<String> {
    vec![
        r.n.to_string(),
        r.m.to_string(),
        r.p.to_string(),
        r.q.to_string(),
        r.r.to_string(),
        fmt_real(r.omega.re),
        fmt_real(r.omega.im),
        fmt_real(r.theta()),
        fmt_real(r.lhs),
        fmt_real(r.rhs),
        fmt_real(r.constant),
        fmt_real(r.margin),
        r.pass.to_string(),
        r.kind.clone(),
        r.test_fn.clone(),
    ]
}

pub fn estimate_table(reports: &[EstimateReport]) -> Table {
    let mut t = Table::new(&ESTIMATE_HEADER);
    for r in reports {
        t.push(estimate_row(r), r.pass);
    }
    t
}
