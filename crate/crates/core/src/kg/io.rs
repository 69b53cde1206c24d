//! Five-column TSV triple files: `head  relation  tail  weight  split`.
//!
//! Lines starting with `#` are comments. Dataset files use the split
//! values `train`, `valid` and `test`; ground-truth files use `all`.

use std::fs;
use std::path::Path;

use super::{default_catalog, Catalog, Dataset, GroundTruth, KgError, Relation, Split, Triple};

const GROUND_TRUTH_SPLIT: &str = "all";

struct Row<'a> {
    line: usize,
    head: &'a str,
    relation: Relation,
    tail: &'a str,
    weight: u32,
    split: &'a str,
}

fn rows(text: &str) -> Result<Vec<Row<'_>>, KgError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let row = raw.trim_end_matches('\r');
        if row.trim().is_empty() || row.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = row.split('\t').collect();
        if cols.len() != 5 {
            return Err(KgError::Malformed {
                line,
                reason: format!("expected 5 tab-separated columns, found {}", cols.len()),
            });
        }
        let relation = cols[1].parse::<Relation>().map_err(|_| KgError::Malformed {
            line,
            reason: format!("unknown relation `{}`", cols[1]),
        })?;
        let weight = cols[3].parse::<u32>().map_err(|_| KgError::Malformed {
            line,
            reason: format!("weight `{}` is not a non-negative integer", cols[3]),
        })?;
        out.push(Row {
            line,
            head: cols[0],
            relation,
            tail: cols[2],
            weight,
            split: cols[4],
        });
    }
    Ok(out)
}

fn resolve(row: &Row<'_>, catalog: &Catalog) -> Result<Triple, KgError> {
    let lookup = |name: &str| {
        catalog.lookup(name).ok_or_else(|| KgError::Malformed {
            line: row.line,
            reason: format!("unknown entity `{name}`"),
        })
    };
    let triple = Triple::new(lookup(row.head)?, row.relation, lookup(row.tail)?, row.weight);
    triple.validate(catalog).map_err(|e| KgError::Malformed {
        line: row.line,
        reason: e.to_string(),
    })?;
    Ok(triple)
}

/// Parses a dataset TSV against `catalog` (the default catalog when `None`).
pub fn parse_triples(text: &str, catalog: Option<&Catalog>) -> Result<Dataset, KgError> {
    let catalog = catalog.cloned().unwrap_or_else(default_catalog);
    let (mut train, mut valid, mut test) = (Vec::new(), Vec::new(), Vec::new());
    for row in rows(text)? {
        let split = row.split.parse::<Split>().map_err(|_| KgError::Malformed {
            line: row.line,
            reason: format!("unknown split `{}`", row.split),
        })?;
        let triple = resolve(&row, &catalog)?;
        match split {
            Split::Train => train.push(triple),
            Split::Valid => valid.push(triple),
            Split::Test => test.push(triple),
        }
    }
    Dataset::new(catalog, train, valid, test)
}

pub fn load_triples(path: &Path, catalog: Option<&Catalog>) -> Result<Dataset, KgError> {
    let text = fs::read_to_string(path).map_err(|e| KgError::Io(path.display().to_string(), e))?;
    parse_triples(&text, catalog)
}

pub fn parse_ground_truth(text: &str, catalog: Option<&Catalog>) -> Result<GroundTruth, KgError> {
    let catalog = catalog.cloned().unwrap_or_else(default_catalog);
    let mut keys = Vec::new();
    for row in rows(text)? {
        if row.split != GROUND_TRUTH_SPLIT && row.split.parse::<Split>().is_err() {
            return Err(KgError::Malformed {
                line: row.line,
                reason: format!("unknown split `{}`", row.split),
            });
        }
        keys.push(resolve(&row, &catalog)?.key());
    }
    GroundTruth::new(catalog, keys)
}

pub fn load_ground_truth(path: &Path, catalog: Option<&Catalog>) -> Result<GroundTruth, KgError> {
    let text = fs::read_to_string(path).map_err(|e| KgError::Io(path.display().to_string(), e))?;
    parse_ground_truth(&text, catalog)
}

/// Dataset rows in split order, each split in its stored order.
pub fn dataset_to_tsv(ds: &Dataset) -> String {
    let c = ds.catalog();
    let mut out = String::from("# head\trelation\ttail\tweight\tsplit\n");
    for split in Split::ALL {
        for t in ds.split(split) {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                c.name(t.head),
                t.relation,
                c.name(t.tail),
                t.weight,
                split
            ));
        }
    }
    out
}

pub fn ground_truth_to_tsv(gt: &GroundTruth) -> String {
    let c = gt.catalog();
    let mut out = String::from("# head\trelation\ttail\tweight\tsplit\n");
    for k in gt.triples() {
        out.push_str(&format!(
            "{}\t{}\t{}\t1\t{}\n",
            c.name(k.head),
            k.relation,
            c.name(k.tail),
            GROUND_TRUTH_SPLIT
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_row_parses() {
        let ds = parse_triples("cup\tObjInLoc\tcabinet\t12\ttrain\n", None).unwrap();
        assert_eq!(ds.train().len(), 1);
        assert_eq!(ds.train()[0].weight, 12);
        assert!(ds.valid().is_empty() && ds.test().is_empty());
    }

    #[test]
    fn duplicate_across_splits_is_split_overlap() {
        let text = "cup\tObjInLoc\tcabinet\t12\ttrain\ncup\tObjInLoc\tcabinet\t1\ttest\n";
        let err = parse_triples(text, None).unwrap_err();
        assert!(err.to_string().contains("split overlap"), "{err}");
    }

    #[test]
    fn malformed_rows_report_line_numbers() {
        let text = "# comment\ncup\tObjInLoc\tcabinet\t12\ttrain\ncup\tObjInLoc\tcabinet\n";
        assert!(matches!(
            parse_triples(text, None),
            Err(KgError::Malformed { line: 3, .. })
        ));
        let text = "cup\tNextTo\tcabinet\t1\ttrain\n";
        let err = parse_triples(text, None).unwrap_err();
        assert!(matches!(err, KgError::Malformed { line: 1, .. }));
        assert!(err.to_string().contains("unknown relation"));
    }

    #[test]
    fn kind_signature_checked_on_load() {
        let err = parse_triples("cabinet\tObjInLoc\tcup\t1\ttrain\n", None).unwrap_err();
        assert!(err.to_string().contains("signature"), "{err}");
    }
}
