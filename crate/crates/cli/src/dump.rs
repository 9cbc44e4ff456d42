//! Field dumps: one JSON header line, then the raw samples as little-endian
//! `f64`, component-major with a row-major (x, y, z) grid inside each
//! component. Complex samples are interleaved `(re, im)`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use photonlab::{Complex64, FieldData, FieldKind, FieldSnapshot, GridSpec};
use serde_json::{json, Map, Value};

pub const FORMAT: &str = "photonlab-field";
pub const VERSION: u64 = 1;
const LAYOUT: &str = "component-major; row-major x,y,z; complex interleaved re,im";

#[derive(Debug, thiserror::Error)]
pub enum DumpError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: malformed header field `{field}`: {reason}")]
    Header {
        path: PathBuf,
        field: &'static str,
        reason: String,
    },
    #[error("{path}: incompatible dump version {found} (this build reads version {VERSION})")]
    Version { path: PathBuf, found: u64 },
    #[error("{path}: {reason}")]
    Payload { path: PathBuf, reason: String },
}

fn header(snap: &FieldSnapshot) -> Value {
    json!({
        "format": FORMAT,
        "version": VERSION,
        "kind": snap.kind.name(),
        "time": snap.time,
        "dim": snap.grid.dim,
        "n": snap.grid.n,
        "box_length": snap.grid.box_length,
        "components": snap.components,
        "complex": matches!(snap.data, FieldData::Complex(_)),
        "endianness": "little",
        "layout": LAYOUT,
        "len": snap.data.len(),
    })
}

/// Write `snap` to `path`, creating parent directories.
pub fn dump_field(snap: &FieldSnapshot, path: &Path) -> Result<(), DumpError> {
    let io = |source| DumpError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(io)?;
    }
    let mut bytes = serde_json::to_vec(&header(snap)).expect("header serializes");
    bytes.push(b'\n');
    match &snap.data {
        FieldData::Real(v) => v
            .iter()
            .for_each(|x| bytes.extend_from_slice(&x.to_le_bytes())),
        FieldData::Complex(v) => v.iter().for_each(|z| {
            bytes.extend_from_slice(&z.re.to_le_bytes());
            bytes.extend_from_slice(&z.im.to_le_bytes());
        }),
    }
    let mut file = fs::File::create(path).map_err(io)?;
    file.write_all(&bytes).map_err(io)?;
    Ok(())
}

struct Fields<'a> {
    path: &'a Path,
    map: &'a Map<String, Value>,
}

impl Fields<'_> {
    fn bad(&self, field: &'static str, reason: impl Into<String>) -> DumpError {
        DumpError::Header {
            path: self.path.to_path_buf(),
            field,
            reason: reason.into(),
        }
    }

    fn get(&self, field: &'static str) -> Result<&Value, DumpError> {
        self.map
            .get(field)
            .ok_or_else(|| self.bad(field, "missing"))
    }

    fn u64(&self, field: &'static str) -> Result<u64, DumpError> {
        self.get(field)?
            .as_u64()
            .ok_or_else(|| self.bad(field, "expected a non-negative integer"))
    }

    fn usize(&self, field: &'static str) -> Result<usize, DumpError> {
        usize::try_from(self.u64(field)?).map_err(|_| self.bad(field, "out of range"))
    }

    fn f64(&self, field: &'static str) -> Result<f64, DumpError> {
        self.get(field)?
            .as_f64()
            .ok_or_else(|| self.bad(field, "expected a number"))
    }

    fn str(&self, field: &'static str) -> Result<&str, DumpError> {
        self.get(field)?
            .as_str()
            .ok_or_else(|| self.bad(field, "expected a string"))
    }

    fn bool(&self, field: &'static str) -> Result<bool, DumpError> {
        self.get(field)?
            .as_bool()
            .ok_or_else(|| self.bad(field, "expected true or false"))
    }
}

/// Read a dump written by [`dump_field`]; the payload round-trips bit for bit.
pub fn load_field(path: &Path) -> Result<FieldSnapshot, DumpError> {
    let bytes = fs::read(path).map_err(|source| DumpError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let newline = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| DumpError::Payload {
            path: path.to_path_buf(),
            reason: "no header line".into(),
        })?;
    let value: Value =
        serde_json::from_slice(&bytes[..newline]).map_err(|e| DumpError::Header {
            path: path.to_path_buf(),
            field: "header",
            reason: format!("not valid JSON: {e}"),
        })?;
    let map = value.as_object().ok_or_else(|| DumpError::Header {
        path: path.to_path_buf(),
        field: "header",
        reason: "expected a JSON object".into(),
    })?;
    let h = Fields { path, map };

    if h.str("format")? != FORMAT {
        return Err(h.bad("format", format!("expected \"{FORMAT}\"")));
    }
    let version = h.u64("version")?;
    if version != VERSION {
        return Err(DumpError::Version {
            path: path.to_path_buf(),
            found: version,
        });
    }
    if h.str("endianness")? != "little" {
        return Err(h.bad("endianness", "only \"little\" is supported"));
    }
    if h.str("layout")? != LAYOUT {
        return Err(h.bad("layout", format!("expected \"{LAYOUT}\"")));
    }
    let kind_name = h.str("kind")?;
    let kind = FieldKind::from_name(kind_name)
        .ok_or_else(|| h.bad("kind", format!("unknown kind \"{kind_name}\"")))?;
    let time = h.f64("time")?;
    let grid = GridSpec::new(h.usize("dim")?, h.usize("n")?, h.f64("box_length")?);
    grid.validate().map_err(|e| h.bad("dim", e.to_string()))?;
    let components = h.usize("components")?;
    let complex = h.bool("complex")?;
    let len = h.usize("len")?;
    if len != components * grid.len() {
        return Err(h.bad(
            "len",
            format!("{len} does not match {components} x {} samples", grid.len()),
        ));
    }

    let payload = &bytes[newline + 1..];
    let doubles = if complex { 2 * len } else { len };
    if payload.len() != 8 * doubles {
        return Err(DumpError::Payload {
            path: path.to_path_buf(),
            reason: format!(
                "expected {} payload bytes, found {}",
                8 * doubles,
                payload.len()
            ),
        });
    }
    let mut raw = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")));
    let data = if complex {
        let mut v = Vec::with_capacity(len);
        while let (Some(re), Some(im)) = (raw.next(), raw.next()) {
            v.push(Complex64::new(re, im));
        }
        FieldData::Complex(v)
    } else {
        FieldData::Real(raw.collect())
    };
    FieldSnapshot::new(kind, time, grid, components, data).map_err(|e| DumpError::Payload {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}
