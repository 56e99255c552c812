//! Transitive groups of degree 2–12 by `nTk` label.
//!
//! The bundled file has one group per line, `nTk : gen, gen, …`, generators
//! in 1-based cycle notation. Setting `TORSIONLAB_DATA` to a file, or to a
//! directory containing `transitive_groups.txt`, replaces the bundled copy.

use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use super::{split_generators, Caps, PermError, PermGroup, Permutation};

pub const DATA_ENV: &str = "TORSIONLAB_DATA";
pub const TABLE_FILE: &str = "transitive_groups.txt";

const BUNDLED: &str = include_str!("../../data/transitive_groups.txt");

#[derive(Debug, Clone)]
pub struct TableEntry {
    pub label: String,
    pub degree: usize,
    pub index: usize,
    pub generators: Vec<Permutation>,
}

impl TableEntry {
    pub fn group(&self) -> Result<PermGroup, PermError> {
        PermGroup::new(self.degree, self.generators.clone())
    }

    pub fn group_with_caps(&self, caps: Caps) -> Result<PermGroup, PermError> {
        PermGroup::with_caps(self.degree, self.generators.clone(), caps)
    }
}

#[derive(Debug, Clone)]
pub struct TransitiveTable {
    entries: Vec<TableEntry>,
}

/// Splits `nTk` into `(n, k)`.
pub fn parse_label(label: &str) -> Option<(usize, usize)> {
    let (n, k) = label.trim().split_once('T')?;
    let n: usize = n.parse().ok()?;
    let k: usize = k.parse().ok()?;
    (n >= 1 && k >= 1).then_some((n, k))
}

impl TransitiveTable {
    pub fn parse(text: &str) -> Result<Self, PermError> {
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| PermError::Table(format!("line {}: {msg}", lineno + 1));
            let (label, gens) = line.split_once(':').ok_or_else(|| err("missing ':'"))?;
            let label = label.trim();
            let (degree, index) = parse_label(label).ok_or_else(|| err("bad label"))?;
            let generators = split_generators(gens)
                .map_err(|e| err(&e.to_string()))?
                .into_iter()
                .map(|g| Permutation::parse(g, Some(degree)))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| err(&e.to_string()))?;
            entries.push(TableEntry {
                label: label.to_string(),
                degree,
                index,
                generators,
            });
        }
        Ok(Self { entries })
    }

    pub fn from_path(path: &Path) -> Result<Self, PermError> {
        let file = if path.is_dir() {
            path.join(TABLE_FILE)
        } else {
            path.to_path_buf()
        };
        let text = std::fs::read_to_string(&file)
            .map_err(|e| PermError::Table(format!("{}: {e}", file.display())))?;
        Self::parse(&text)
    }

    /// The compiled-in table.
    pub fn bundled() -> &'static TransitiveTable {
        static TABLE: OnceLock<TransitiveTable> = OnceLock::new();
        TABLE.get_or_init(|| Self::parse(BUNDLED).expect("bundled table parses"))
    }

    /// The table named by `TORSIONLAB_DATA` if set, else the bundled one.
    pub fn load() -> Result<TransitiveTable, PermError> {
        match data_override() {
            Some(path) => Self::from_path(&path),
            None => Ok(Self::bundled().clone()),
        }
    }

    pub fn entries(&self) -> &[TableEntry] {
        &self.entries
    }

    pub fn of_degree(&self, degree: usize) -> impl Iterator<Item = &TableEntry> {
        self.entries.iter().filter(move |e| e.degree == degree)
    }

    pub fn get(&self, label: &str) -> Option<&TableEntry> {
        let (n, k) = parse_label(label)?;
        self.entries.iter().find(|e| e.degree == n && e.index == k)
    }

    pub fn group(&self, label: &str) -> Result<PermGroup, PermError> {
        self.get(label)
            .ok_or_else(|| PermError::UnknownLabel(label.to_string()))?
            .group()
    }
}

pub fn data_override() -> Option<PathBuf> {
    std::env::var_os(DATA_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_counts() {
        let t = TransitiveTable::bundled();
        let counts: Vec<usize> = (2..=12).map(|n| t.of_degree(n).count()).collect();
        assert_eq!(counts, vec![1, 2, 5, 5, 16, 7, 50, 34, 45, 8, 301]);
    }

    #[test]
    fn lookups() {
        let t = TransitiveTable::bundled();
        let c2 = t.group("2T1").unwrap();
        assert_eq!((c2.degree(), c2.order().unwrap()), (2, 2));
        let c6 = t.group("6T1").unwrap();
        assert!(c6.is_transitive());
        assert_eq!(c6.order().unwrap(), 6);
        assert!(matches!(t.group("13T1"), Err(PermError::UnknownLabel(_))));
        assert!(matches!(t.group("junk"), Err(PermError::UnknownLabel(_))));
    }

    #[test]
    fn parse_is_whitespace_insensitive() {
        let t = TransitiveTable::parse("# comment\n 4T1 :(1 2 3 4)\n4T2: ( 1 2 )( 3 4 ) ,(1,3)(2,4)\n")
            .unwrap();
        assert_eq!(t.entries().len(), 2);
        assert_eq!(t.group("4T2").unwrap().order().unwrap(), 4);
        assert!(TransitiveTable::parse("4T1 (1 2 3 4)").is_err());
        assert!(TransitiveTable::parse("4T1 : (1 2 3 5)").is_err());
    }
}
