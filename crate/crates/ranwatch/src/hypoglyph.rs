//! Unicode confusable ("hypoglyph") substitution and analysis.
//!
//! A hypoglyph swap replaces an ASCII codepoint with a visually similar
//! non-ASCII one, e.g. Latin C (U+0043) with Cyrillic Es (U+0421). The
//! resulting string renders the same but no longer byte-matches any
//! fixed-vocabulary pattern. [`skeleton`] undoes the swap for analysis:
//! two strings are visually confusable when their skeletons are equal.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

/// Confusable pairs shipped with the engine: Latin/Cyrillic look-alikes for
/// a, c, e, o, p, x, y, C, E, O, P plus the Armenian q look-alike U+055B.
const BUILTIN_TABLE: &[(char, char)] = &[
    ('\u{0430}', 'a'),
    ('\u{0441}', 'c'),
    ('\u{0435}', 'e'),
    ('\u{043E}', 'o'),
    ('\u{0440}', 'p'),
    ('\u{0445}', 'x'),
    ('\u{0443}', 'y'),
    ('\u{0421}', 'C'),
    ('\u{0415}', 'E'),
    ('\u{041E}', 'O'),
    ('\u{0420}', 'P'),
    ('\u{055B}', 'q'),
];

#[derive(Debug)]
pub enum HypoglyphError {
    /// A substitution pair failed validation.
    BadPair { src: char, dst: char, reason: String },
    /// A confusable-table file line could not be parsed.
    BadTableLine { line: usize, content: String },
    Io(std::io::Error),
}

impl fmt::Display for HypoglyphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HypoglyphError::BadPair { src, dst, reason } => write!(
                f,
                "invalid substitution U+{:04X} -> U+{:04X}: {reason}",
                *src as u32, *dst as u32
            ),
            HypoglyphError::BadTableLine { line, content } => {
                write!(f, "confusable table line {line}: cannot parse {content:?}")
            }
            HypoglyphError::Io(e) => write!(f, "confusable table I/O: {e}"),
        }
    }
}

impl std::error::Error for HypoglyphError {}

impl From<std::io::Error> for HypoglyphError {
    fn from(e: std::io::Error) -> Self {
        HypoglyphError::Io(e)
    }
}

/// Lookup table from non-ASCII confusables to their ASCII representatives.
#[derive(Debug, Clone)]
pub struct ConfusableTable {
    to_ascii: BTreeMap<char, char>,
}

impl ConfusableTable {
    /// The table shipped with the engine.
    pub fn builtin() -> &'static ConfusableTable {
        static TABLE: OnceLock<ConfusableTable> = OnceLock::new();
        TABLE.get_or_init(|| ConfusableTable {
            to_ascii: BUILTIN_TABLE.iter().copied().collect(),
        })
    }

    /// Loads a table from a two-column UTF-8 text file of hex codepoints,
    /// one `<non-ascii> <ascii>` pair per line. Blank lines and lines
    /// starting with `#` are ignored.
    pub fn from_file(path: &Path) -> Result<ConfusableTable, HypoglyphError> {
        let text = std::fs::read_to_string(path)?;
        let mut to_ascii = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || HypoglyphError::BadTableLine {
                line: idx + 1,
                content: raw.to_string(),
            };
            let mut cols = line.split_whitespace();
            let src = parse_hex_char(cols.next().ok_or_else(bad)?).ok_or_else(bad)?;
            let dst = parse_hex_char(cols.next().ok_or_else(bad)?).ok_or_else(bad)?;
            if cols.next().is_some() || src.is_ascii() || !dst.is_ascii() {
                return Err(bad());
            }
            to_ascii.insert(src, dst);
        }
        Ok(ConfusableTable { to_ascii })
    }

    /// Maps each confusable codepoint to its ASCII representative. Idempotent:
    /// representatives are ASCII and therefore never table keys themselves.
    pub fn skeleton(&self, text: &str) -> String {
        text.chars()
            .map(|c| self.to_ascii.get(&c).copied().unwrap_or(c))
            .collect()
    }

    /// True iff any codepoint of `text` is a non-ASCII entry of this table.
    pub fn contains_hypoglyph(&self, text: &str) -> bool {
        text.chars().any(|c| self.to_ascii.contains_key(&c))
    }

    /// ASCII representative of a single codepoint, if it is a confusable.
    pub fn representative(&self, c: char) -> Option<char> {
        self.to_ascii.get(&c).copied()
    }
}

fn parse_hex_char(s: &str) -> Option<char> {
    let s = s.strip_prefix("U+").or_else(|| s.strip_prefix("0x")).unwrap_or(s);
    char::from_u32(u32::from_str_radix(s, 16).ok()?)
}

/// Codepoint-to-codepoint substitution applied by the attacker.
///
/// Every pair maps an ASCII source to a non-ASCII look-alike with the same
/// skeleton, so applying the map changes the bytes but never the rendered
/// appearance.
#[derive(Debug, Clone, Default)]
pub struct SubstitutionMap {
    pairs: BTreeMap<char, char>,
}

impl SubstitutionMap {
    /// The three-pair map used throughout the experiments:
    /// C -> U+0421, e -> U+0435, q -> U+055B.
    pub fn builtin() -> SubstitutionMap {
        SubstitutionMap::from_pairs(
            [('C', '\u{0421}'), ('e', '\u{0435}'), ('q', '\u{055B}')],
            ConfusableTable::builtin(),
        )
        .expect("builtin map validates against builtin table")
    }

    /// An empty (identity) map.
    pub fn empty() -> SubstitutionMap {
        SubstitutionMap::default()
    }

    /// Builds a map, validating each pair against `table`: the source must be
    /// ASCII, the replacement non-ASCII, the two distinct, and their skeletons
    /// equal.
    pub fn from_pairs(
        pairs: impl IntoIterator<Item = (char, char)>,
        table: &ConfusableTable,
    ) -> Result<SubstitutionMap, HypoglyphError> {
        let mut map = BTreeMap::new();
        for (src, dst) in pairs {
            let fail = |reason: &str| HypoglyphError::BadPair {
                src,
                dst,
                reason: reason.to_string(),
            };
            if src == dst {
                return Err(fail("source and replacement are identical"));
            }
            if !src.is_ascii() {
                return Err(fail("source must be ASCII"));
            }
            if dst.is_ascii() {
                return Err(fail("replacement must be non-ASCII"));
            }
            if table.representative(dst) != Some(src) {
                return Err(fail("skeletons differ under the confusable table"));
            }
            map.insert(src, dst);
        }
        Ok(SubstitutionMap { pairs: map })
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn replacement(&self, src: char) -> Option<char> {
        self.pairs.get(&src).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (char, char)> + '_ {
        self.pairs.iter().map(|(&s, &d)| (s, d))
    }
}

/// Replaces every occurrence of each mapped source codepoint. All other
/// codepoints pass through, so the output always has the same codepoint count
/// as the input.
pub fn apply(text: &str, map: &SubstitutionMap) -> String {
    text.chars()
        .map(|c| map.replacement(c).unwrap_or(c))
        .collect()
}

/// Skeleton under the builtin confusable table.
pub fn skeleton(text: &str) -> String {
    ConfusableTable::builtin().skeleton(text)
}

/// Hypoglyph presence under the builtin confusable table.
pub fn contains_hypoglyph(text: &str) -> bool {
    ConfusableTable::builtin().contains_hypoglyph(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_map_is_the_three_documented_pairs() {
        let map = SubstitutionMap::builtin();
        assert_eq!(map.len(), 3);
        assert_eq!(map.replacement('C'), Some('\u{0421}'));
        assert_eq!(map.replacement('e'), Some('\u{0435}'));
        assert_eq!(map.replacement('q'), Some('\u{055B}'));
    }

    #[test]
    fn apply_replaces_all_occurrences() {
        let out = apply("RRCSetupRequest", &SubstitutionMap::builtin());
        // 1 C, 3 e and 1 q replaced, everything else untouched.
        assert_eq!(out, "RR\u{0421}S\u{0435}tupR\u{0435}\u{055B}u\u{0435}st");
        assert_ne!(out, "RRCSetupRequest");
        assert_eq!(out.chars().count(), "RRCSetupRequest".chars().count());
    }

    #[test]
    fn apply_with_empty_map_is_identity() {
        assert_eq!(apply("RRCSetupRequest", &SubstitutionMap::empty()), "RRCSetupRequest");
    }

    #[test]
    fn apply_without_sources_present_is_identity() {
        assert_eq!(apply("zzz", &SubstitutionMap::builtin()), "zzz");
    }

    #[test]
    fn skeleton_restores_ascii() {
        let manipulated = apply("RRCSetupRequest", &SubstitutionMap::builtin());
        assert_eq!(skeleton(&manipulated), "RRCSetupRequest");
        assert_eq!(skeleton("RRCSetupRequest"), "RRCSetupRequest");
        assert_eq!(skeleton("\u{0421}"), "C");
    }

    #[test]
    fn skeleton_is_idempotent() {
        let manipulated = apply("SecurityModeCommand", &SubstitutionMap::builtin());
        let once = skeleton(&manipulated);
        assert_eq!(skeleton(&once), once);
    }

    #[test]
    fn contains_hypoglyph_detects_substitutions() {
        assert!(!contains_hypoglyph("RRCSetupRequest"));
        assert!(!contains_hypoglyph(""));
        assert!(contains_hypoglyph(&apply("RRCSetupRequest", &SubstitutionMap::builtin())));
    }

    #[test]
    fn from_pairs_rejects_invalid_entries() {
        let table = ConfusableTable::builtin();
        // ASCII replacement
        assert!(SubstitutionMap::from_pairs([('C', 'K')], table).is_err());
        // non-ASCII source
        assert!(SubstitutionMap::from_pairs([('\u{0421}', '\u{0435}')], table).is_err());
        // skeleton mismatch: U+0435 is the look-alike of e, not of o
        assert!(SubstitutionMap::from_pairs([('o', '\u{0435}')], table).is_err());
        // identical pair
        assert!(SubstitutionMap::from_pairs([('e', 'e')], table).is_err());
    }

    #[test]
    fn table_loads_from_hex_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("confusables.txt");
        std::fs::write(&path, "# custom table\n0421 0043\nU+0435 U+0065\n").unwrap();
        let table = ConfusableTable::from_file(&path).unwrap();
        assert_eq!(table.skeleton("\u{0421}\u{0435}"), "Ce");
        assert!(table.contains_hypoglyph("\u{0435}"));
        assert!(!table.contains_hypoglyph("e"));
    }

    #[test]
    fn table_file_errors_name_the_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.txt");
        std::fs::write(&path, "0421 0043\nnot-hex\n").unwrap();
        match ConfusableTable::from_file(&path) {
            Err(HypoglyphError::BadTableLine { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected BadTableLine, got {other:?}"),
        }
    }
}
