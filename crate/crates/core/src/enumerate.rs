//! Counting binary overlap-free words, and the circular variant.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::avoidance::{find_overlap, has_overlap_ending_at_end, is_circular_overlap_free_letters};
use crate::error::{Error, Result};
use crate::word::{letters_to_string, Letter};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMethod {
    ExhaustiveFilter,
    PrunedDfs,
}

/// `values[n]` is the number of binary overlap-free words of length `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountTable {
    pub values: Vec<u64>,
    pub method: CountMethod,
}

impl CountTable {
    pub fn max_n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> Option<u64> {
        self.values.get(n).copied()
    }
}

/// Depth at which the search tree is split into independent subtrees.
const SPLIT_DEPTH: usize = 14;

/// Exact counts `a_0..=a_max_n` by depth-first extension of overlap-free
/// words, pruning any extension that creates an overlap at its end.
///
/// Only words starting with 0 are explored; complementation doubles the
/// counts. Subtrees below [`SPLIT_DEPTH`] run in parallel and their counts
/// are summed, so the result does not depend on scheduling.
pub fn count_overlap_free(max_n: usize) -> CountTable {
    let mut values = vec![0u64; max_n + 1];
    values[0] = 1;
    if max_n == 0 {
        return CountTable {
            values,
            method: CountMethod::PrunedDfs,
        };
    }
    let split = SPLIT_DEPTH.min(max_n);
    let mut frontier = Vec::new();
    let mut half = vec![0u64; max_n + 1];
    let mut buf = vec![0];
    collect(&mut buf, split, &mut half, &mut frontier);

    let deep = frontier
        .par_iter()
        .map(|prefix| {
            let mut counts = vec![0u64; max_n + 1];
            let mut word = SuffixMatcher::with_capacity(max_n);
            for &letter in prefix {
                word.push(letter);
            }
            descend(&mut word, max_n, &mut counts);
            counts
        })
        .reduce(
            || vec![0u64; max_n + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    for n in 1..=max_n {
        values[n] = 2 * (half[n] + if n > split { deep[n] } else { 0 });
    }
    CountTable {
        values,
        method: CountMethod::PrunedDfs,
    }
}

// Counts levels up to `split` and records the words of length `split`.
fn collect(buf: &mut Vec<Letter>, split: usize, counts: &mut [u64], out: &mut Vec<Vec<Letter>>) {
    counts[buf.len()] += 1;
    if buf.len() == split {
        out.push(buf.clone());
        return;
    }
    for letter in 0..2 {
        buf.push(letter);
        if !has_overlap_ending_at_end(buf) {
            collect(buf, split, counts, out);
        }
        buf.pop();
    }
}

// Counts every overlap-free extension of the current word strictly longer
// than it.
fn descend(word: &mut SuffixMatcher, max_n: usize, counts: &mut [u64]) {
    if word.len() == max_n {
        return;
    }
    for letter in 0..2 {
        if !word.push(letter) {
            counts[word.len()] += 1;
            descend(word, max_n, counts);
        }
        word.pop();
    }
}

/// A growable binary word that tracks, for every period `p`, the length
/// `m_p` of the longest common suffix of the word and the word with its
/// last `p` letters removed.
///
/// Appending `c` maps `m_p` to `m_p + 1` when `c == w[len - p]` and to 0
/// otherwise, and an overlap of period `p` ends at the new letter exactly
/// when `m_p > p`. One pass over the periods therefore replaces the
/// per-period rescans of [`has_overlap_ending_at_end`].
#[derive(Clone, Debug)]
pub struct SuffixMatcher {
    capacity: usize,
    // letter i of the word sits at reversed[capacity - 1 - i]
    reversed: Vec<Letter>,
    len: usize,
    // matches[d][p] for the prefix of length d; matches[d][d] = 0
    matches: Vec<Vec<u16>>,
    periods: Vec<u16>,
}

impl SuffixMatcher {
    pub fn with_capacity(capacity: usize) -> Self {
        assert!(
            capacity < u16::MAX as usize,
            "word too long for u16 match lengths"
        );
        Self {
            capacity,
            reversed: vec![0; capacity],
            len: 0,
            matches: vec![vec![0]],
            periods: (0..=capacity as u16).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Appends `letter`; returns true iff an overlap now ends at it.
    pub fn push(&mut self, letter: Letter) -> bool {
        let len = self.len;
        assert!(len < self.capacity, "matcher capacity exceeded");
        if self.matches.len() <= len + 1 {
            self.matches.push(Vec::new());
        }
        let (done, todo) = self.matches.split_at_mut(len + 1);
        let parent = &done[len];
        let child = &mut todo[0];
        child.clear();
        child.resize(len + 2, 0);
        let letters = &self.reversed[self.capacity - len..];
        let overlap = extend_matches(
            &mut child[1..=len],
            &parent[1..=len],
            letters,
            &self.periods[1..=len],
            letter,
        );
        self.reversed[self.capacity - 1 - len] = letter;
        self.len += 1;
        overlap
    }

    pub fn pop(&mut self) {
        self.len -= 1;
    }
}

#[inline(always)]
fn extend_matches_generic(
    child: &mut [u16],
    parent: &[u16],
    letters: &[Letter],
    periods: &[u16],
    letter: Letter,
) -> bool {
    let mut excess = 0u16;
    for (((dst, &src), &l), &p) in child.iter_mut().zip(parent).zip(letters).zip(periods) {
        let m = src.wrapping_add(1).wrapping_mul(u16::from(l == letter));
        *dst = m;
        excess |= m.saturating_sub(p);
    }
    excess != 0
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
unsafe fn extend_matches_avx2(
    child: &mut [u16],
    parent: &[u16],
    letters: &[Letter],
    periods: &[u16],
    letter: Letter,
) -> bool {
    extend_matches_generic(child, parent, letters, periods, letter)
}

// The update loop dominates enumeration time and vectorizes well, so it is
// compiled twice and picked at runtime.
fn extend_matches(
    child: &mut [u16],
    parent: &[u16],
    letters: &[Letter],
    periods: &[u16],
    letter: Letter,
) -> bool {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("avx2") {
            // SAFETY: the CPU supports AVX2, checked just above.
            return unsafe { extend_matches_avx2(child, parent, letters, periods, letter) };
        }
    }
    extend_matches_generic(child, parent, letters, periods, letter)
}

/// Counts by filtering all `2^n` words; the independent check for the DFS.
pub fn count_overlap_free_exhaustive(max_n: usize) -> Result<CountTable> {
    if max_n > 24 {
        return Err(Error::Resource(format!(
            "exhaustive filtering up to length {max_n} is too large"
        )));
    }
    let values = (0..=max_n)
        .map(|n| {
            (0u64..1 << n)
                .filter(|&bits| {
                    let word: Vec<Letter> = (0..n).map(|i| ((bits >> i) & 1) as Letter).collect();
                    find_overlap(&word).is_none()
                })
                .count() as u64
        })
        .collect();
    Ok(CountTable {
        values,
        method: CountMethod::ExhaustiveFilter,
    })
}

/// All binary overlap-free words of length `n`, in lexicographic order.
pub fn overlap_free_words(n: usize) -> Vec<Vec<Letter>> {
    fn go(buf: &mut Vec<Letter>, n: usize, out: &mut Vec<Vec<Letter>>) {
        if buf.len() == n {
            out.push(buf.clone());
            return;
        }
        for letter in 0..2 {
            buf.push(letter);
            if !has_overlap_ending_at_end(buf) {
                go(buf, n, out);
            }
            buf.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), n, &mut out);
    out
}

/// Least-squares slope of `ln a_n` against `ln n` over the powers of two
/// in `[n_lo, n_hi]`.
pub fn growth_envelope(table: &CountTable, n_lo: usize, n_hi: usize) -> Result<f64> {
    growth_slope(&table.values, n_lo, n_hi)
}

/// [`growth_envelope`] over a bare sequence indexed from 0.
pub fn growth_slope(values: &[u64], n_lo: usize, n_hi: usize) -> Result<f64> {
    if n_lo < 1 || n_hi < 2 * n_lo {
        return Err(Error::Parameter(format!(
            "growth range [{n_lo}, {n_hi}] needs n_hi >= 2 n_lo >= 2"
        )));
    }
    if n_hi >= values.len() {
        return Err(Error::Parameter(format!(
            "table stops at {} but range ends at {n_hi}",
            values.len().saturating_sub(1)
        )));
    }
    let points: Vec<(f64, f64)> = (0..usize::BITS)
        .map(|e| 1usize << e)
        .filter(|&n| n >= n_lo && n <= n_hi)
        .map(|n| {
            if values[n] == 0 {
                Err(Error::Parameter(format!("zero count at n = {n}")))
            } else {
                Ok(((n as f64).ln(), (values[n] as f64).ln()))
            }
        })
        .collect::<Result<_>>()?;
    if points.len() < 2 {
        return Err(Error::Parameter(
            "growth range holds fewer than two powers of two".into(),
        ));
    }
    let m = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Counts of binary words of each length all of whose conjugates are
/// overlap-free.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircularReport {
    pub max_n: usize,
    /// `counts[n - 1]` is `c_n`.
    pub counts: Vec<u64>,
    pub support: Vec<usize>,
    /// The lexicographically least witness for every length in the support.
    pub examples: BTreeMap<usize, String>,
}

impl CircularReport {
    pub fn count(&self, n: usize) -> Option<u64> {
        n.checked_sub(1).and_then(|i| self.counts.get(i)).copied()
    }
}

/// Filters the linear overlap-free words of each length by the conjugate
/// test.
pub fn circular_overlap_free_lengths(max_n: usize) -> Result<CircularReport> {
    if max_n < 1 {
        return Err(Error::Parameter("max_n must be at least 1".into()));
    }
    let per_length: Vec<(u64, Option<String>)> = (1..=max_n)
        .into_par_iter()
        .map(|n| {
            let hits: Vec<Vec<Letter>> = overlap_free_words(n)
                .into_iter()
                .filter(|w| is_circular_overlap_free_letters(w))
                .collect();
            (
                hits.len() as u64,
                hits.first().map(|w| letters_to_string(w)),
            )
        })
        .collect();
    let mut counts = Vec::with_capacity(max_n);
    let mut support = Vec::new();
    let mut examples = BTreeMap::new();
    for (i, (count, example)) in per_length.into_iter().enumerate() {
        counts.push(count);
        if count > 0 {
            support.push(i + 1);
        }
        if let Some(ex) = example {
            examples.insert(i + 1, ex);
        }
    }
    Ok(CircularReport {
        max_n,
        counts,
        support,
        examples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let t = count_overlap_free(4);
        assert_eq!(t.values, vec![1, 2, 4, 6, 10]);
        assert_eq!(t.method, CountMethod::PrunedDfs);
        assert_eq!(count_overlap_free(0).values, vec![1]);
    }

    #[test]
    fn matcher_agrees_with_plain_detector() {
        for n in 0..=14usize {
            for bits in 0u64..1 << n {
                let word: Vec<Letter> = (0..n).map(|i| ((bits >> i) & 1) as Letter).collect();
                let mut matcher = SuffixMatcher::with_capacity(n.max(1));
                let mut last = false;
                for &l in &word {
                    last = matcher.push(l);
                }
                assert_eq!(last, has_overlap_ending_at_end(&word), "{word:?}");
            }
        }
    }

    #[test]
    fn dfs_matches_exhaustive_past_split_depth() {
        let dfs = count_overlap_free(18);
        let brute = count_overlap_free_exhaustive(18).unwrap();
        assert_eq!(dfs.values, brute.values);
    }

    #[test]
    fn listing_agrees_with_counts() {
        let t = count_overlap_free(12);
        for n in 0..=12 {
            assert_eq!(overlap_free_words(n).len() as u64, t.values[n]);
        }
    }

    #[test]
    fn growth_slope_controls() {
        let constant = vec![5u64; 100];
        assert!(growth_slope(&constant, 4, 64).unwrap().abs() < 1e-12);
        let identity: Vec<u64> = (0..100).collect();
        assert!((growth_slope(&identity, 4, 64).unwrap() - 1.0).abs() < 1e-12);
        assert!(growth_slope(&identity, 4, 6).is_err());
        assert!(growth_slope(&identity, 64, 256).is_err());
        assert!(growth_slope(&identity, 0, 8).is_err());
    }

    #[test]
    fn circular_small() {
        let r = circular_overlap_free_lengths(8).unwrap();
        assert_eq!(r.support, vec![1, 2, 3, 4, 6, 8]);
        assert_eq!(r.count(5), Some(0));
        assert_eq!(r.count(1), Some(2));
        assert_eq!(r.count(2), Some(4));
        assert_eq!(r.examples[&2], "00");
        assert!(circular_overlap_free_lengths(0).is_err());
    }
}
