use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use super::certificate::Certificate;
use super::NumberQuery;
use crate::error::{Error, Result};

/// Environment variable naming the store directory.
pub const STORE_ENV: &str = "APSUM_STORE";

static APPEND_LOCK: Mutex<()> = Mutex::new(());

/// Best bounds recorded for one query.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Bounds {
    pub lower: Option<u64>,
    pub upper: Option<u64>,
}

impl Bounds {
    pub fn exact(&self) -> Option<u64> {
        match (self.lower, self.upper) {
            (Some(a), Some(b)) if a == b => Some(a),
            _ => None,
        }
    }

    fn absorb(&mut self, cert: &Certificate) {
        if cert.bounds_below() {
            self.lower = Some(self.lower.map_or(cert.value, |v| v.max(cert.value)));
        }
        if cert.bounds_above() {
            self.upper = Some(self.upper.map_or(cert.value, |v| v.min(cert.value)));
        }
    }

    fn consistent(&self) -> bool {
        !matches!((self.lower, self.upper), (Some(a), Some(b)) if a > b)
    }
}

/// Append-only journal of certificates: one JSON-lines file per query.
#[derive(Clone, Debug)]
pub struct ResultStore {
    dir: PathBuf,
}

impl ResultStore {
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        fs::create_dir_all(dir.as_ref())?;
        Ok(ResultStore {
            dir: dir.as_ref().to_path_buf(),
        })
    }

    /// The store named by `APSUM_STORE`, if set.
    pub fn from_env() -> Result<Option<Self>> {
        match std::env::var_os(STORE_ENV) {
            Some(dir) if !dir.is_empty() => Ok(Some(Self::open(dir)?)),
            _ => Ok(None),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, q: &NumberQuery) -> PathBuf {
        self.dir.join(format!("{}.jsonl", q.key()))
    }

    /// All certificates for `q`, checking the journal's integrity: every
    /// line re-serializes to its own bytes, names `q`, and the recorded
    /// bounds do not contradict each other.
    pub fn load(&self, q: &NumberQuery) -> Result<Vec<Certificate>> {
        let path = self.path_for(q);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e.into()),
        };
        let mut out = Vec::new();
        let mut bounds = Bounds::default();
        for (i, line) in text.lines().enumerate() {
            let at = || format!("{}:{}", path.display(), i + 1);
            let cert: Certificate = serde_json::from_str(line)
                .map_err(|e| Error::Integrity(format!("{}: {e}", at())))?;
            if serde_json::to_string(&cert)? != line {
                return Err(Error::Integrity(format!(
                    "{}: line is not in canonical form",
                    at()
                )));
            }
            if cert.query != *q {
                return Err(Error::Integrity(format!(
                    "{}: certificate for {} in the file of {q}",
                    at(),
                    cert.query
                )));
            }
            bounds.absorb(&cert);
            if !bounds.consistent() {
                return Err(Error::Integrity(format!(
                    "{}: conflicting results for {q}: lower {:?}, upper {:?}",
                    at(),
                    bounds.lower,
                    bounds.upper
                )));
            }
            out.push(cert);
        }
        Ok(out)
    }

    pub fn bounds(&self, q: &NumberQuery) -> Result<Bounds> {
        let mut b = Bounds::default();
        for cert in self.load(q)? {
            b.absorb(&cert);
        }
        Ok(b)
    }

    /// Append `cert`, refusing anything that contradicts what is stored.
    pub fn append(&self, cert: &Certificate) -> Result<PathBuf> {
        let _guard = APPEND_LOCK
            .lock()
            .map_err(|_| Error::Internal("store lock poisoned".into()))?;
        let mut bounds = self.bounds(&cert.query)?;
        bounds.absorb(cert);
        if !bounds.consistent() {
            return Err(Error::Integrity(format!(
                "{} {:?} {} contradicts the store (lower {:?}, upper {:?})",
                cert.query, cert.claim, cert.value, bounds.lower, bounds.upper
            )));
        }
        let mut line = serde_json::to_string(cert)?;
        line.push('\n');
        let path = self.path_for(&cert.query);
        let mut f = OpenOptions::new().create(true).append(true).open(&path)?;
        f.write_all(line.as_bytes())?;
        Ok(path)
    }

    /// Every query that has a journal file, sorted.
    pub fn queries(&self) -> Result<Vec<NumberQuery>> {
        let mut out = Vec::new();
        for entry in fs::read_dir(&self.dir)? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "jsonl") {
                let text = fs::read_to_string(&path)?;
                if let Some(first) = text.lines().next() {
                    let cert: Certificate = serde_json::from_str(first)
                        .map_err(|e| Error::Integrity(format!("{}: {e}", path.display())))?;
                    out.push(cert.query);
                }
            }
        }
        out.sort();
        Ok(out)
    }
}
