//! Line-delimited persistence of resolved search targets.
//!
//! One record per line, tab-separated, fixed field order:
//!
//! ```text
//! S{2}4   found   C^      S{2}4   0,1,3,4   1700000000
//! S{1}3   empty   3       -       0,2,3     1700000000
//! ```
//!
//! Found records are re-verified spectrally when loaded. A line that fails to
//! parse or verify is quarantined on its own; the rest of the file loads.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::cert::ConstructionExpr;
use crate::descriptor::SetDescriptor;
use crate::error::CacheError;
use crate::graph::Graph;
use crate::graph6::{decode_graph6, encode_graph6};
use crate::realizer::{OracleCache, OracleEntry};
use crate::spectra::{has_spectrum, SpectrumMultiset};

const HEADER: &str = "# lapint realizer cache v1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CacheStatus {
    Found { graph: Graph, certificate: ConstructionExpr },
    Empty { exhausted_order: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheRecord {
    pub key: SetDescriptor,
    pub status: CacheStatus,
    pub spectrum: SpectrumMultiset,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quarantined {
    /// 1-based line number.
    pub line: usize,
    pub text: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadedCache {
    pub records: Vec<CacheRecord>,
    pub quarantined: Vec<Quarantined>,
}

pub fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

impl CacheRecord {
    pub fn from_entry(key: SetDescriptor, entry: &OracleEntry, timestamp: u64) -> Self {
        let status = match entry {
            OracleEntry::Found { graph, certificate } => {
                CacheStatus::Found { graph: graph.clone(), certificate: certificate.clone() }
            }
            OracleEntry::Empty { order } => CacheStatus::Empty { exhausted_order: *order },
        };
        CacheRecord { key, status, spectrum: key.expand(), timestamp }
    }

    pub fn to_entry(&self) -> OracleEntry {
        match &self.status {
            CacheStatus::Found { graph, certificate } => {
                OracleEntry::Found { graph: graph.clone(), certificate: certificate.clone() }
            }
            CacheStatus::Empty { exhausted_order } => OracleEntry::Empty { order: *exhausted_order },
        }
    }

    pub fn to_line(&self) -> String {
        let (status, a, b) = match &self.status {
            CacheStatus::Found { graph, certificate } => ("found", encode_graph6(graph), certificate.to_string()),
            CacheStatus::Empty { exhausted_order } => ("empty", exhausted_order.to_string(), "-".to_string()),
        };
        format!("{}\t{status}\t{a}\t{b}\t{}\t{}", self.key, self.spectrum, self.timestamp)
    }

    pub fn parse_line(line: &str) -> Result<Self, String> {
        let fields: Vec<&str> = line.split('\t').collect();
        let [key, status, a, b, spectrum, timestamp] = fields[..] else {
            return Err(format!("expected 6 fields, found {}", fields.len()));
        };
        let key: SetDescriptor = key.parse().map_err(|e| format!("key: {e}"))?;
        let spectrum: SpectrumMultiset = spectrum.parse().map_err(|e| format!("spectrum: {e}"))?;
        let timestamp = timestamp.parse().map_err(|e| format!("timestamp: {e}"))?;
        let status = match status {
            "found" => CacheStatus::Found {
                graph: decode_graph6(a.as_bytes()).map_err(|e| format!("graph: {e}"))?,
                certificate: b.parse().map_err(|e| format!("certificate: {e}"))?,
            },
            "empty" => {
                if b != "-" {
                    return Err("empty record with a certificate".into());
                }
                CacheStatus::Empty { exhausted_order: a.parse().map_err(|e| format!("order: {e}"))? }
            }
            other => return Err(format!("unknown status {other:?}")),
        };
        Ok(CacheRecord { key, status, spectrum, timestamp })
    }

    /// Checks the record against its key; found graphs are checked by exact
    /// spectrum.
    pub fn verify(&self) -> Result<(), String> {
        let target = self.key.expand();
        if self.spectrum != target {
            return Err(format!("spectrum {} does not expand {}", self.spectrum, self.key));
        }
        match &self.status {
            CacheStatus::Found { graph, .. } => {
                if graph.order() != self.key.order() || !graph.is_connected() || !has_spectrum(graph, &target) {
                    return Err(format!("graph does not realize {}", self.key));
                }
            }
            CacheStatus::Empty { exhausted_order } => {
                if *exhausted_order != self.key.order() {
                    return Err(format!("exhausted order {exhausted_order} is not the order of {}", self.key));
                }
            }
        }
        Ok(())
    }
}

impl LoadedCache {
    pub fn to_oracle_cache(&self) -> OracleCache {
        let mut cache = OracleCache::new();
        for r in &self.records {
            cache.insert(r.key, r.to_entry());
        }
        cache
    }
}

/// Reads a cache file. A missing file is an empty cache.
pub fn cache_load(path: &Path) -> Result<LoadedCache, CacheError> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(LoadedCache::default()),
        Err(e) => return Err(e.into()),
    };
    let mut out = LoadedCache::default();
    for (k, line) in text.lines().enumerate() {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match CacheRecord::parse_line(line).and_then(|r| r.verify().map(|()| r)) {
            Ok(r) => out.records.push(r),
            Err(reason) => out.quarantined.push(Quarantined { line: k + 1, text: line.to_string(), reason }),
        }
    }
    Ok(out)
}

/// Writes all records to a temporary file beside `path`, then renames it
/// over `path`.
pub fn cache_store(path: &Path, records: &[CacheRecord]) -> Result<(), CacheError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    writeln!(tmp, "{HEADER}")?;
    for r in records {
        writeln!(tmp, "{}", r.to_line())?;
    }
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// `previous` records updated with the entries of `cache`. Records whose
/// entry is unchanged keep their timestamp; new or changed ones get `stamp`.
pub fn merge_records(previous: &[CacheRecord], cache: &OracleCache, stamp: u64) -> Vec<CacheRecord> {
    let mut by_key: BTreeMap<SetDescriptor, CacheRecord> = previous.iter().map(|r| (r.key, r.clone())).collect();
    for (key, entry) in cache.iter() {
        let unchanged = by_key.get(key).is_some_and(|r| &r.to_entry() == entry);
        if !unchanged {
            by_key.insert(*key, CacheRecord::from_entry(*key, entry, stamp));
        }
    }
    by_key.into_values().collect()
}
