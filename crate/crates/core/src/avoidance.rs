//! Overlap and square detection, the Thue–Morse square catalog, and the
//! membership predicates built on them.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::word::{conjugates, thue_morse_prefix, FiniteWord, Letter, Morphism};

/// An overlap `axaxa` starting at `position` with `period = |ax|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct OverlapOccurrence {
    pub position: usize,
    pub period: usize,
}

/// A square `uu` starting at `position` with `half_length = |u|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SquareOccurrence {
    pub position: usize,
    pub half_length: usize,
}

#[inline]
fn is_overlap_at(w: &[Letter], pos: usize, period: usize) -> bool {
    (0..=period).all(|j| w[pos + j] == w[pos + j + period])
}

/// The lexicographically least `(position, period)` overlap in `w`.
pub fn find_overlap(w: &[Letter]) -> Option<OverlapOccurrence> {
    let n = w.len();
    for position in 0..n {
        let max_period = (n - position).saturating_sub(1) / 2;
        for period in 1..=max_period {
            if is_overlap_at(w, position, period) {
                return Some(OverlapOccurrence { position, period });
            }
        }
    }
    None
}

pub fn is_overlap_free(w: &[Letter]) -> bool {
    find_overlap(w).is_none()
}

/// True iff some overlap ends on the last letter of `w`.
pub fn has_overlap_ending_at_end(w: &[Letter]) -> bool {
    let n = w.len();
    if n < 3 {
        return false;
    }
    let last = n - 1;
    for period in 1..=last / 2 {
        if w[last] != w[last - period] {
            continue;
        }
        let start = last - 2 * period;
        if (0..period).all(|j| w[start + j] == w[start + j + period]) {
            return true;
        }
    }
    false
}

/// Every square occurrence in `w`.
pub fn find_squares(w: &[Letter]) -> BTreeSet<SquareOccurrence> {
    let n = w.len();
    let mut out = BTreeSet::new();
    for position in 0..n {
        for half_length in 1..=(n - position) / 2 {
            if w[position..position + half_length]
                == w[position + half_length..position + 2 * half_length]
            {
                out.insert(SquareOccurrence {
                    position,
                    half_length,
                });
            }
        }
    }
    out
}

/// The distinct squares of length at most `max_length` occurring in `w`.
pub fn squares_occurring_in(w: &[Letter], max_length: usize) -> BTreeSet<FiniteWord> {
    let n = w.len();
    let mut out = BTreeSet::new();
    for position in 0..n {
        let max_half = ((n - position) / 2).min(max_length / 2);
        for half in 1..=max_half {
            if w[position..position + half] == w[position + half..position + 2 * half] {
                out.insert(
                    FiniteWord::binary(w[position..position + 2 * half].to_vec())
                        .expect("binary prefix"),
                );
            }
        }
    }
    out
}

/// The Thue–Morse square catalog truncated at `max_length`: all words
/// `mu^k(a)` with `a` in {00, 11, 010010, 101101}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareCatalog {
    pub max_length: usize,
    pub entries: BTreeSet<FiniteWord>,
}

pub const SQUARE_SEEDS: [&str; 4] = ["00", "11", "010010", "101101"];

pub fn square_catalog(max_length: usize) -> Result<SquareCatalog> {
    if max_length < 2 {
        return Err(Error::Parameter(format!(
            "catalog length {max_length} must be at least 2"
        )));
    }
    let mu = Morphism::thue_morse();
    let mut entries = BTreeSet::new();
    for seed in SQUARE_SEEDS {
        let mut cur = FiniteWord::parse(seed, 2)?;
        while cur.len() <= max_length {
            let next = mu.apply(&cur)?;
            entries.insert(cur);
            cur = next;
        }
    }
    Ok(SquareCatalog {
        max_length,
        entries,
    })
}

/// Checks that no position in the tested region of `w` starts squares of
/// two different half-lengths up to `max_half`. The tested positions are
/// `0..=|w| - 2 max_half`, so every candidate square fits in `w`.
pub fn unique_square_start_in(w: &[Letter], max_half: usize) -> Result<bool> {
    if max_half == 0 || w.len() < 2 * max_half {
        return Err(Error::Parameter(format!(
            "window of length {} cannot hold squares of half-length {max_half}",
            w.len()
        )));
    }
    let last = w.len() - 2 * max_half;
    Ok((0..=last).all(|i| {
        (1..=max_half)
            .filter(|&h| w[i..i + h] == w[i + h..i + 2 * h])
            .take(2)
            .count()
            <= 1
    }))
}

/// [`unique_square_start_in`] on the Thue–Morse prefix of length `prefix_len`.
pub fn unique_square_start(prefix_len: usize, max_half: usize) -> Result<bool> {
    unique_square_start_in(&thue_morse_prefix(prefix_len), max_half)
}

/// True iff every conjugate of `w` is overlap-free.
pub fn is_circular_overlap_free(w: &FiniteWord) -> bool {
    conjugates(w).iter().all(|c| is_overlap_free(c))
}

/// Slice form of [`is_circular_overlap_free`] that avoids allocating each
/// rotation separately.
pub fn is_circular_overlap_free_letters(w: &[Letter]) -> bool {
    let n = w.len();
    if n == 0 {
        return true;
    }
    let doubled: Vec<Letter> = w.iter().chain(w.iter()).copied().collect();
    (0..n).all(|i| is_overlap_free(&doubled[i..i + n]))
}

/// True iff `w` is an overlap and neither maximal proper factor contains one.
pub fn minimal_overlap_check(w: &[Letter]) -> bool {
    let n = w.len();
    if n < 3 || n.is_multiple_of(2) {
        return false;
    }
    let period = (n - 1) / 2;
    is_overlap_at(w, 0, period) && is_overlap_free(&w[1..]) && is_overlap_free(&w[..n - 1])
}

/// Prefix length first scanned when testing membership of a word of
/// length `len` in the Thue–Morse factor set.
pub fn tm_factor_scan_length(len: usize) -> usize {
    (8 * len.max(1).next_power_of_two()).max(64)
}

const TM_SCAN_CAP: usize = 1 << 26;

fn occurs_in(haystack: &[Letter], needle: &[Letter]) -> bool {
    needle.is_empty() || haystack.windows(needle.len()).any(|win| win == needle)
}

/// True iff `w` is a factor of the Thue–Morse word.
///
/// Scans a prefix of length [`tm_factor_scan_length`] and its double, and
/// keeps doubling until two consecutive scans agree.
pub fn is_tm_factor(w: &[Letter]) -> Result<bool> {
    if w.iter().any(|&l| l > 1) {
        return Err(Error::Domain("Thue-Morse factors are binary".into()));
    }
    let mut len = tm_factor_scan_length(w.len());
    let mut prev = occurs_in(&thue_morse_prefix(len), w);
    loop {
        len *= 2;
        if len > TM_SCAN_CAP {
            return Err(Error::Inconclusive(format!(
                "factor scan did not settle below prefix length {TM_SCAN_CAP}"
            )));
        }
        let cur = occurs_in(&thue_morse_prefix(len), w);
        if cur == prev {
            return Ok(cur);
        }
        prev = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FiniteWord {
        s.parse().unwrap()
    }

    fn occ(position: usize, period: usize) -> OverlapOccurrence {
        OverlapOccurrence { position, period }
    }

    #[test]
    fn overlap_examples() {
        assert_eq!(find_overlap(&w("000")), Some(occ(0, 1)));
        assert_eq!(find_overlap(&w("0110100110010110")), None);
        assert_eq!(find_overlap(&w("001100110")), Some(occ(0, 4)));
        assert_eq!(find_overlap(&[]), None);
    }

    #[test]
    fn smallest_occurrence_is_returned() {
        // "01010" has period 2 at 0; "1010" continues but starts later
        assert_eq!(find_overlap(&w("010101")), Some(occ(0, 2)));
        assert_eq!(find_overlap(&w("1000")), Some(occ(1, 1)));
    }

    #[test]
    fn suffix_detector_examples() {
        assert!(has_overlap_ending_at_end(&w("01010")));
        assert!(!has_overlap_ending_at_end(&w("0110")));
        assert!(has_overlap_ending_at_end(&w("0011000")));
        assert!(!has_overlap_ending_at_end(&w("0001")));
    }

    #[test]
    fn square_examples() {
        let sq = |p, h| SquareOccurrence {
            position: p,
            half_length: h,
        };
        assert_eq!(find_squares(&w("00")), BTreeSet::from([sq(0, 1)]));
        assert_eq!(find_squares(&w("0110")), BTreeSet::from([sq(1, 1)]));
        assert_eq!(
            find_squares(&w("010010")),
            BTreeSet::from([sq(0, 3), sq(2, 1)])
        );
    }

    #[test]
    fn catalog_examples() {
        let names = |c: SquareCatalog| {
            c.entries
                .iter()
                .map(|e| e.to_string())
                .collect::<BTreeSet<_>>()
        };
        let set = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
        assert_eq!(names(square_catalog(2).unwrap()), set(&["00", "11"]));
        assert_eq!(
            names(square_catalog(4).unwrap()),
            set(&["00", "11", "0101", "1010"])
        );
        assert_eq!(
            names(square_catalog(12).unwrap()),
            set(&[
                "00",
                "11",
                "0101",
                "1010",
                "010010",
                "101101",
                "01100110",
                "10011001",
                "011001011001",
                "100110100110",
            ])
        );
        assert!(square_catalog(1).is_err());
    }

    #[test]
    fn unique_square_examples() {
        assert!(unique_square_start(16, 2).unwrap());
        assert!(!unique_square_start_in(&w("0000"), 2).unwrap());
        assert!(unique_square_start(8, 5).is_err());
    }

    #[test]
    fn circular_examples() {
        assert!(is_circular_overlap_free(&w("0")));
        assert!(is_circular_overlap_free(&w("0011")));
        assert!(!is_circular_overlap_free(&w("00110")));
        assert!(is_circular_overlap_free(&w("")));
        for s in ["0", "0011", "00110", "001", "010011"] {
            assert_eq!(
                is_circular_overlap_free(&w(s)),
                is_circular_overlap_free_letters(&w(s))
            );
        }
    }

    #[test]
    fn minimal_overlap_examples() {
        assert!(minimal_overlap_check(&w("000")));
        assert!(minimal_overlap_check(&w("001100110")));
        assert!(!minimal_overlap_check(&w("0000")));
        assert!(!minimal_overlap_check(&w("00000")));
        assert!(!minimal_overlap_check(&w("011")));
    }

    #[test]
    fn tm_factor_examples() {
        assert!(is_tm_factor(&w("0110")).unwrap());
        assert!(!is_tm_factor(&w("000")).unwrap());
        assert!(is_tm_factor(&w("010010")).unwrap());
        assert!(is_tm_factor(&[]).unwrap());
        assert!(matches!(is_tm_factor(&w("012")), Err(Error::Domain(_))));
    }
}
