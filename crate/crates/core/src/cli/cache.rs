use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::qseries::{StatKind, StatParams, StatTable};

/// Environment variable consulted when `--cache-dir` is absent.
pub const CACHE_ENV: &str = "BGRANK_CACHE_DIR";

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Metadata stored in the `#` header of a cache file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheMeta {
    pub kind: StatKind,
    pub params: StatParams,
    pub n_max: usize,
    pub route: String,
    pub checksum: String,
    pub tool_version: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheEntry {
    pub path: PathBuf,
    pub meta: CacheMeta,
}

/// Platform cache directory, used after the flag and the environment.
pub fn default_cache_dir() -> Option<PathBuf> {
    if let Some(dir) = std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()) {
        return Some(PathBuf::from(dir));
    }
    dirs::cache_dir().map(|d| d.join("bgrank"))
}

fn params_key(p: &StatParams) -> String {
    let f = |name: &str, v: Option<String>| v.map(|v| format!("{name}{v}"));
    [f("j", p.j.map(|j| j.to_string())), f("a", p.a.map(|a| a.to_string())), f("b", p.b.map(|b| b.to_string()))]
        .into_iter()
        .flatten()
        .collect::<Vec<_>>()
        .join("_")
}

fn params_field(p: &StatParams) -> String {
    let show = |v: Option<String>| v.unwrap_or_else(|| "-".into());
    format!(
        "j={} a={} b={}",
        show(p.j.map(|v| v.to_string())),
        show(p.a.map(|v| v.to_string())),
        show(p.b.map(|v| v.to_string()))
    )
}

fn parse_params(s: &str) -> Option<StatParams> {
    let mut out = StatParams::default();
    for part in s.split_whitespace() {
        let (k, v) = part.split_once('=')?;
        if v == "-" {
            continue;
        }
        match k {
            "j" => out.j = Some(v.parse().ok()?),
            "a" => out.a = Some(v.parse().ok()?),
            "b" => out.b = Some(v.parse().ok()?),
            _ => return None,
        }
    }
    Some(out)
}

pub fn cache_file_name(kind: StatKind, params: &StatParams, n_max: usize) -> String {
    let key = params_key(params);
    if key.is_empty() {
        format!("{kind}_n{n_max}.csv")
    } else {
        format!("{kind}_{key}_n{n_max}.csv")
    }
}

fn body(values: &[BigInt]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "value"]).expect("in-memory write");
    for (n, v) in values.iter().enumerate() {
        w.write_record([n.to_string(), v.to_string()]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii")
}

fn checksum(body: &str) -> String {
    hex::encode(Sha256::digest(body.as_bytes()))
}

/// Serializes a table: `# key: value` header lines, then `n,value` CSV.
pub fn encode_table(table: &StatTable) -> String {
    let body = body(table.values());
    format!(
        "# kind: {}\n# params: {}\n# n_max: {}\n# route: {}\n# tool_version: {}\n# checksum: {}\n{}",
        table.kind,
        params_field(&table.params),
        table.n_max(),
        table.route,
        TOOL_VERSION,
        checksum(&body),
        body
    )
}

/// Parses and verifies a cache file's contents.
pub fn decode_table(path: &Path, text: &str) -> Result<(CacheMeta, StatTable)> {
    let bad = |reason: &str| Error::MalformedCache { path: path.to_path_buf(), reason: reason.to_string() };
    let mut header = std::collections::BTreeMap::new();
    let mut rest = text;
    while let Some(line) = rest.strip_prefix("# ") {
        let (line, tail) = line.split_once('\n').ok_or_else(|| bad("truncated header"))?;
        let (k, v) = line.split_once(": ").ok_or_else(|| bad("header line without ': '"))?;
        header.insert(k.to_string(), v.to_string());
        rest = tail;
    }
    let field = |k: &str| header.get(k).cloned().ok_or_else(|| bad(&format!("missing header field {k}")));
    let stored = field("checksum")?;
    if checksum(rest) != stored {
        return Err(Error::ChecksumMismatch(path.to_path_buf()));
    }
    let kind = StatKind::parse(&field("kind")?).ok_or_else(|| bad("unknown kind"))?;
    let params = parse_params(&field("params")?).ok_or_else(|| bad("bad params"))?;
    let n_max: usize = field("n_max")?.parse().map_err(|_| bad("bad n_max"))?;
    let mut reader = csv::ReaderBuilder::new().from_reader(rest.as_bytes());
    let mut values = Vec::with_capacity(n_max + 1);
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| bad(&e.to_string()))?;
        let n: usize = rec.get(0).and_then(|s| s.parse().ok()).ok_or_else(|| bad("bad index"))?;
        let v: BigInt = rec.get(1).and_then(|s| s.parse().ok()).ok_or_else(|| bad("bad value"))?;
        if n != i {
            return Err(bad("indices are not consecutive"));
        }
        values.push(v);
    }
    if values.len() != n_max + 1 {
        return Err(bad("row count does not match n_max"));
    }
    let route = field("route")?;
    let table = StatTable::new(kind, params, route.clone(), values).map_err(|e| bad(&e.to_string()))?;
    let meta = CacheMeta { kind, params, n_max, route, checksum: stored, tool_version: field("tool_version")? };
    Ok((meta, table))
}

pub fn read_table(path: &Path) -> Result<CacheEntry> {
    let text = fs::read_to_string(path)?;
    let (meta, _) = decode_table(path, &text)?;
    Ok(CacheEntry { path: path.to_path_buf(), meta })
}

fn load(path: &Path) -> Result<StatTable> {
    let text = fs::read_to_string(path)?;
    Ok(decode_table(path, &text)?.1)
}

/// Writes to a temporary sibling, then renames over the target, so readers
/// see either the old file or the complete new one.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir)?;
    static SEQ: AtomicU64 = AtomicU64::new(0);
    let tmp = dir.join(format!(
        ".{}.{}.{}.tmp",
        path.file_name().and_then(|s| s.to_str()).unwrap_or("out"),
        std::process::id(),
        SEQ.fetch_add(1, Ordering::Relaxed)
    ));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(())
}

/// On-disk table cache; `dir = None` disables it.
#[derive(Clone, Debug, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Self { dir }
    }

    pub fn disabled() -> Self {
        Self { dir: None }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn path_for(&self, kind: StatKind, params: &StatParams, n_max: usize) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(cache_file_name(kind, params, n_max)))
    }

    pub fn store(&self, table: &StatTable) -> Result<Option<PathBuf>> {
        let Some(path) = self.path_for(table.kind, &table.params, table.n_max()) else {
            return Ok(None);
        };
        write_atomic(&path, &encode_table(table))?;
        Ok(Some(path))
    }

    /// Returns the cached table if it verifies, otherwise computes and
    /// stores it. A corrupt file is reported and replaced, never reused.
    pub fn get_or_compute(
        &self,
        kind: StatKind,
        params: StatParams,
        n_max: usize,
        compute: impl FnOnce() -> Result<StatTable>,
    ) -> Result<StatTable> {
        let Some(path) = self.path_for(kind, &params, n_max) else {
            return compute();
        };
        if path.exists() {
            match load(&path) {
                Ok(t) if t.kind == kind && t.params == params && t.n_max() == n_max => return Ok(t),
                Ok(_) => eprintln!("warning: {} holds a different table; recomputing", path.display()),
                Err(e) => eprintln!("warning: {e}; recomputing"),
            }
        }
        let table = compute()?;
        self.store(&table)?;
        Ok(table)
    }
}

/// Writes `table` under `dir` and reads it back through the verifier.
pub fn cache_roundtrip(table: &StatTable, dir: &Path) -> Result<StatTable> {
    let cache = Cache::new(Some(dir.to_path_buf()));
    let path = cache.store(table)?.expect("cache enabled");
    load(&path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::{p_table, pbar_abn_table};

    #[test]
    fn encode_decode() {
        let t = pbar_abn_table(0, 1, 5, 30).unwrap();
        let text = encode_table(&t);
        assert!(text.starts_with("# kind: pbar-ab\n# params: j=0 a=1 b=5\n# n_max: 30\n"));
        let (meta, back) = decode_table(Path::new("x"), &text).unwrap();
        assert_eq!(back, t);
        assert_eq!(meta.params, t.params);
        assert_eq!(meta.tool_version, TOOL_VERSION);
    }

    #[test]
    fn tampering_is_detected() {
        let text = encode_table(&p_table(20));
        let bad = text.replacen("627", "628", 1);
        assert_ne!(bad, text);
        assert!(matches!(decode_table(Path::new("x"), &bad), Err(Error::ChecksumMismatch(_))));
        let bad = text.replacen("# kind", "#kind", 1);
        assert!(decode_table(Path::new("x"), &bad).is_err());
    }

    #[test]
    fn file_names() {
        let p = StatParams { j: Some(-2), a: Some(1), b: Some(3) };
        assert_eq!(cache_file_name(StatKind::PbarJab, &p, 9), "pbar-ab_j-2_a1_b3_n9.csv");
        assert_eq!(cache_file_name(StatKind::P, &StatParams::default(), 9), "p_n9.csv");
    }

    #[test]
    fn disabled_cache_always_computes() {
        let c = Cache::disabled();
        let mut calls = 0;
        for _ in 0..2 {
            c.get_or_compute(StatKind::P, StatParams::default(), 5, || {
                calls += 1;
                Ok(p_table(5))
            })
            .unwrap();
        }
        assert_eq!(calls, 2);
    }
}
