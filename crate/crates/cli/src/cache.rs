//! Content-addressed result cache: one JSON file per key, checksummed
//! so corruption reads as a miss, written atomically via a temp file.

use serde_json::Value;
use sha2::{Digest, Sha256};
use std::fs;
use std::path::Path;

/// Bump to invalidate every existing cache entry.
pub const CACHE_VERSION: u32 = 1;

/// Everything that can change a report's value, hashed into the entry
/// name; presentation flags stay out.
pub struct CacheKey<'a> {
    pub kind: &'a str,
    pub poly: &'a str,
    pub q: Option<u64>,
    pub search_bound: Option<u64>,
    pub precision: Option<u32>,
}

impl CacheKey<'_> {
    fn digest(&self) -> String {
        let tag = format!(
            "v{}|{}|{}|q={:?}|b={:?}|prec={:?}",
            CACHE_VERSION, self.kind, self.poly, self.q, self.search_bound, self.precision
        );
        hex(&Sha256::digest(tag.as_bytes()))
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

// checksums are taken over the Value serialization, which orders object
// keys canonically, so a round trip through the file cannot drift
fn canonical(v: &Value) -> String {
    serde_json::to_string(v).expect("JSON value serializes")
}

fn warn(path: &Path, why: &str) {
    eprintln!("warning: ignoring cache entry {}: {}", path.display(), why);
}

/// Fetch a cached payload.  A missing file is a silent miss; anything
/// malformed is a miss with a warning.
pub fn get(dir: &Path, key: &CacheKey) -> Option<Value> {
    let path = dir.join(format!("{}.json", key.digest()));
    let raw = fs::read_to_string(&path).ok()?;
    let parsed: Value = match serde_json::from_str(&raw) {
        Ok(v) => v,
        Err(_) => {
            warn(&path, "unreadable JSON");
            return None;
        }
    };
    let checksum = parsed.get("checksum").and_then(Value::as_str);
    let payload = parsed.get("payload");
    let (checksum, payload) = match (checksum, payload) {
        (Some(c), Some(p)) => (c, p),
        _ => {
            warn(&path, "missing checksum or payload");
            return None;
        }
    };
    if hex(&Sha256::digest(canonical(payload).as_bytes())) != checksum {
        warn(&path, "checksum mismatch");
        return None;
    }
    Some(payload.clone())
}

/// Store a payload; I/O trouble is a warning, never an error.
pub fn put(dir: &Path, key: &CacheKey, payload: &Value) {
    if let Err(e) = try_put(dir, key, payload) {
        eprintln!("warning: cache write failed: {e}");
    }
}

fn try_put(dir: &Path, key: &CacheKey, payload: &Value) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let digest = key.digest();
    let entry = serde_json::json!({
        "version": CACHE_VERSION,
        "checksum": hex(&Sha256::digest(canonical(payload).as_bytes())),
        "payload": payload,
    });
    let tmp = dir.join(format!(".tmp-{}-{}", digest, std::process::id()));
    fs::write(&tmp, canonical(&entry))?;
    fs::rename(&tmp, dir.join(format!("{digest}.json")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn key<'a>(kind: &'a str, poly: &'a str) -> CacheKey<'a> {
        CacheKey { kind, poly, q: None, search_bound: None, precision: None }
    }

    #[test]
    fn put_then_get_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let k = key("type", "5,0,1");
        let payload = json!({"count": "3", "rows": [1, 2, 3]});
        put(dir.path(), &k, &payload);
        assert_eq!(get(dir.path(), &k), Some(payload.clone()));
        assert_eq!(
            canonical(&get(dir.path(), &k).unwrap()),
            canonical(&payload)
        );
    }

    #[test]
    fn distinct_keys_never_collide() {
        let a = key("type", "5,0,1").digest();
        assert_ne!(a, key("primes", "5,0,1").digest());
        assert_ne!(a, key("type", "9,0,1").digest());
        let mut bounded = key("type", "5,0,1");
        bounded.search_bound = Some(100);
        assert_ne!(a, bounded.digest());
    }

    #[test]
    fn absent_entry_is_a_silent_miss() {
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(get(dir.path(), &key("pic", "5,0,1")), None);
        assert_eq!(get(&dir.path().join("nowhere"), &key("pic", "5,0,1")), None);
    }

    #[test]
    fn corruption_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let k = key("icm", "5,0,1");
        put(dir.path(), &k, &json!({"total": "17638816"}));
        let path = fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().path())
            .find(|p| p.extension().is_some_and(|e| e == "json"))
            .unwrap();

        let good = fs::read_to_string(&path).unwrap();
        fs::write(&path, good.replace("17638816", "17638817")).unwrap();
        assert_eq!(get(dir.path(), &k), None);

        fs::write(&path, "not json at all").unwrap();
        assert_eq!(get(dir.path(), &k), None);

        fs::write(&path, "{\"payload\": {}}").unwrap();
        assert_eq!(get(dir.path(), &k), None);
    }

    #[test]
    fn overwrite_replaces_the_entry() {
        let dir = tempfile::tempdir().unwrap();
        let k = key("wk", "5,0,1");
        put(dir.path(), &k, &json!({"total": "1"}));
        put(dir.path(), &k, &json!({"total": "2"}));
        assert_eq!(get(dir.path(), &k), Some(json!({"total": "2"})));
    }
}
