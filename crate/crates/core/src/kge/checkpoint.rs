//! Canonical-text checkpoints. Parameters are written as exact IEEE bit
//! patterns in hex, so a save/load round trip is bit-identical on every
//! platform. Layout:
//!
//! ```text
//! plangen-embeddings 1
//! scalar f64
//! blocks <scalars> <pairs>
//! entity <name> <kind> <hex> ...      (one per catalog entity, in id order)
//! relation <name> <hex> ...           (one per trained relation)
//! sha256 <hex digest of all preceding bytes>
//! ```

use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use super::{BlockStructure, EmbeddingSet, KgeError};
use crate::kg::{Catalog, EntityKind, Relation};
use crate::scalar::Scalar;

const MAGIC: &str = "plangen-embeddings";
pub const CHECKPOINT_VERSION: u32 = 1;

pub fn checkpoint_to_string<T: Scalar>(theta: &EmbeddingSet<T>) -> String {
    let s = theta.structure();
    let mut body = format!(
        "{MAGIC} {CHECKPOINT_VERSION}\nscalar {}\nblocks {} {}\n",
        T::NAME,
        s.scalars,
        s.pairs
    );
    let row = |v: &[T]| v.iter().map(|x| x.to_hex()).collect::<Vec<_>>().join(" ");
    for e in theta.catalog().entities() {
        let v = theta.entity(e.id).expect("catalog entity");
        body.push_str(&format!("entity {} {} {}\n", e.name, e.kind, row(v)));
    }
    for r in theta.relations() {
        let w = theta.relation(r).expect("listed relation");
        body.push_str(&format!("relation {} {}\n", r, row(w)));
    }
    let digest = hex::encode(Sha256::digest(body.as_bytes()));
    body.push_str(&format!("sha256 {digest}\n"));
    body
}

pub fn checkpoint_from_str<T: Scalar>(text: &str) -> Result<EmbeddingSet<T>, KgeError> {
    let marker = text.rfind("sha256 ").ok_or(KgeError::Checksum)?;
    let (body, tail) = text.split_at(marker);
    let stated = tail.trim_end().strip_prefix("sha256 ").ok_or(KgeError::Checksum)?;
    if !body.is_empty() && !body.ends_with('\n') {
        return Err(KgeError::Checksum);
    }
    if hex::encode(Sha256::digest(body.as_bytes())) != stated {
        return Err(KgeError::Checksum);
    }

    let bad = |line: usize, reason: String| KgeError::Format { line, reason };
    let mut lines = body.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| bad(0, format!("missing {what}")))
    };

    let (n, header) = next("header")?;
    let version = header
        .strip_prefix(MAGIC)
        .and_then(|v| v.trim().parse::<u32>().ok())
        .ok_or_else(|| bad(n, "not a checkpoint header".into()))?;
    if version != CHECKPOINT_VERSION {
        return Err(KgeError::Version {
            found: version,
            expected: CHECKPOINT_VERSION,
        });
    }
    let (n, scalar) = next("scalar line")?;
    let found = scalar
        .strip_prefix("scalar ")
        .ok_or_else(|| bad(n, "expected `scalar <type>`".into()))?;
    if found != T::NAME {
        return Err(KgeError::ScalarMismatch {
            found: found.to_string(),
            expected: T::NAME,
        });
    }
    let (n, blocks) = next("blocks line")?;
    let parts: Vec<usize> = blocks
        .strip_prefix("blocks ")
        .map(|b| b.split(' ').filter_map(|x| x.parse().ok()).collect())
        .unwrap_or_default();
    let structure = match parts.as_slice() {
        [s, p] => BlockStructure::new(*s, *p),
        _ => return Err(bad(n, "expected `blocks <scalars> <pairs>`".into())),
    };
    let d = structure.dim();
    let parse_row = |line: usize, cols: &[&str]| -> Result<Vec<T>, KgeError> {
        if cols.len() != d {
            return Err(bad(line, format!("expected {d} values, found {}", cols.len())));
        }
        cols.iter()
            .map(|c| T::from_hex(c).ok_or_else(|| bad(line, format!("bad value `{c}`"))))
            .collect()
    };

    let mut catalog = Catalog::new();
    let mut entities = Vec::new();
    let mut relations = Vec::new();
    for (n, line) in lines {
        let cols: Vec<&str> = line.split(' ').collect();
        match cols.first().copied() {
            Some("entity") if cols.len() >= 3 => {
                let kind = cols[2]
                    .parse::<EntityKind>()
                    .map_err(|e| bad(n, e.to_string()))?;
                catalog.add(cols[1], kind).map_err(|e| bad(n, e.to_string()))?;
                entities.push(parse_row(n, &cols[3..])?);
            }
            Some("relation") if cols.len() >= 2 => {
                let r = cols[1].parse::<Relation>().map_err(|e| bad(n, e.to_string()))?;
                relations.push((r, parse_row(n, &cols[2..])?));
            }
            _ => return Err(bad(n, "expected an entity or relation row".into())),
        }
    }
    EmbeddingSet::from_parts(catalog, structure, entities, relations)
}

pub fn save_checkpoint<T: Scalar>(theta: &EmbeddingSet<T>, path: &Path) -> Result<(), KgeError> {
    fs::write(path, checkpoint_to_string(theta))
        .map_err(|e| KgeError::Io(path.display().to_string(), e))
}

pub fn load_checkpoint<T: Scalar>(path: &Path) -> Result<EmbeddingSet<T>, KgeError> {
    let text =
        fs::read_to_string(path).map_err(|e| KgeError::Io(path.display().to_string(), e))?;
    checkpoint_from_str(&text)
}
