//! Subword complexity: exact factor counting with prefix stabilization, and
//! the closed forms for the Thue–Morse word, the generalized Thue–Morse
//! words, and the paperfolding family.
//!
//! Functions named `p*` take the factor length `n` directly; the closed
//! forms are usually stated for `p(n + 1)`, and the shift is applied here.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{paperfolding_letters, s2, thue_morse_prefix, Letter};

/// Something that can produce arbitrarily long prefixes of an infinite word.
pub trait WordSource: Sync {
    fn id(&self) -> String;
    fn alphabet_size(&self) -> usize;
    fn prefix(&self, len: usize) -> Vec<Letter>;
}

/// The Thue–Morse word as the fixed point of 0 → 01, 1 → 10.
#[derive(Clone, Copy, Debug, Default)]
pub struct ThueMorse;

impl WordSource for ThueMorse {
    fn id(&self) -> String {
        "tm".into()
    }

    fn alphabet_size(&self) -> usize {
        2
    }

    fn prefix(&self, len: usize) -> Vec<Letter> {
        thue_morse_prefix(len).into_letters()
    }
}

/// `n ↦ s2(n) mod k`.
#[derive(Clone, Copy, Debug)]
pub struct GeneralizedThueMorse {
    k: u32,
}

impl GeneralizedThueMorse {
    pub fn new(k: u32) -> Result<Self> {
        if !(2..=10).contains(&k) {
            return Err(Error::Parameter(format!("k = {k} must lie in [2, 10]")));
        }
        Ok(Self { k })
    }

    pub fn k(&self) -> u32 {
        self.k
    }
}

impl WordSource for GeneralizedThueMorse {
    fn id(&self) -> String {
        format!("tm{}", self.k)
    }

    fn alphabet_size(&self) -> usize {
        self.k as usize
    }

    fn prefix(&self, len: usize) -> Vec<Letter> {
        (0..len as u64)
            .map(|n| (s2(n) % self.k) as Letter)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableSource {
    Brute,
    Formula,
}

/// `values[n - 1]` is `p(n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityTable {
    pub family: String,
    pub alphabet_size: usize,
    pub values: Vec<u64>,
    pub source: TableSource,
    /// The stabilized prefix length, or the number of folds for
    /// paperfolding tables.
    pub settled_at: Option<usize>,
}

impl ComplexityTable {
    pub fn p(&self, n: usize) -> Option<u64> {
        n.checked_sub(1).and_then(|i| self.values.get(i)).copied()
    }

    /// `p(n) <= p(n+1) <= σ p(n)` across the table.
    pub fn is_monotone_and_branching_bounded(&self) -> bool {
        self.values
            .windows(2)
            .all(|w| w[0] <= w[1] && w[1] <= self.alphabet_size as u64 * w[0])
    }
}

/// Numbers of distinct factors of lengths `1..=max_n` across all `words`.
///
/// Windows of length `n + 1` are identified exactly by the class of their
/// length-`n` prefix together with their last letter, so each length costs
/// one pass over the surviving window positions.
pub fn distinct_factor_counts(words: &[&[Letter]], alphabet_size: usize, max_n: usize) -> Vec<u64> {
    let sigma = alphabet_size;
    let sep = sigma as u16;
    let total: usize = words.iter().map(|w| w.len() + 1).sum();
    let mut text: Vec<u16> = Vec::with_capacity(total);
    for w in words {
        text.extend(w.iter().map(|&l| {
            assert!(
                (l as usize) < sigma,
                "letter {l} outside alphabet of size {sigma}"
            );
            u16::from(l)
        }));
        text.push(sep);
    }

    let mut counts = Vec::with_capacity(max_n);
    if max_n == 0 {
        return counts;
    }
    // length-1 windows: class = letter
    let mut starts: Vec<u32> = Vec::with_capacity(total);
    let mut class: Vec<u32> = Vec::with_capacity(total);
    let mut seen = vec![false; sigma];
    for (i, &c) in text.iter().enumerate() {
        if c != sep {
            starts.push(i as u32);
            class.push(u32::from(c));
            seen[c as usize] = true;
        }
    }
    let mut classes = sigma;
    counts.push(seen.iter().filter(|&&s| s).count() as u64);

    let mut table: Vec<u32> = Vec::new();
    for n in 1..max_n {
        table.clear();
        table.resize(classes * sigma, u32::MAX);
        let mut next = 0u32;
        let mut kept = 0;
        for idx in 0..starts.len() {
            let start = starts[idx] as usize;
            let c = text[start + n];
            if c == sep {
                continue;
            }
            let key = class[idx] as usize * sigma + c as usize;
            if table[key] == u32::MAX {
                table[key] = next;
                next += 1;
            }
            starts[kept] = start as u32;
            class[kept] = table[key];
            kept += 1;
        }
        starts.truncate(kept);
        class.truncate(kept);
        classes = next as usize;
        counts.push(next as u64);
    }
    counts
}

/// Longest prefix a stabilization loop will materialize.
pub const PREFIX_CAP: usize = 1 << 22;

/// Initial prefix length for a profile up to `max_n`.
pub fn initial_prefix_len(max_n: usize) -> usize {
    (8 * max_n.max(1).next_power_of_two()).max(64)
}

/// Subword complexity `p(1..=max_n)` of `source`, from prefixes doubled
/// until the whole profile is unchanged across two consecutive doublings.
pub fn factor_profile(source: &dyn WordSource, max_n: usize) -> Result<ComplexityTable> {
    if max_n == 0 {
        return Err(Error::Parameter("factor length must be at least 1".into()));
    }
    let sigma = source.alphabet_size();
    let mut len = initial_prefix_len(max_n);
    let profile = |len: usize| distinct_factor_counts(&[&source.prefix(len)], sigma, max_n);
    let mut prev = profile(len);
    let mut unchanged = 0;
    while unchanged < 2 {
        let next_len = len * 2;
        if next_len > PREFIX_CAP {
            return Err(Error::Inconclusive(format!(
                "{} profile up to n = {max_n} did not settle below prefix length {PREFIX_CAP}",
                source.id()
            )));
        }
        let cur = profile(next_len);
        if cur == prev {
            unchanged += 1;
        } else {
            unchanged = 0;
        }
        prev = cur;
        len = next_len;
    }
    Ok(ComplexityTable {
        family: source.id(),
        alphabet_size: sigma,
        values: prev,
        source: TableSource::Brute,
        settled_at: Some(len),
    })
}

/// Number of distinct length-`n` factors of `source`.
pub fn factor_count(source: &dyn WordSource, n: usize) -> Result<u64> {
    Ok(*factor_profile(source, n)?.values.last().expect("n >= 1"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `n = 2^a + b`, `0 <= b < 2^(a-1)`
    Lower,
    /// `n = 2^a + 2^(a-1) + b`, `0 <= b < 2^(a-1)`
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicDecomposition {
    pub n: u64,
    pub a: u32,
    pub b: u64,
    pub branch: Branch,
}

impl DyadicDecomposition {
    pub fn of(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter(format!("n = {n} has no dyadic split")));
        }
        let a = 63 - n.leading_zeros();
        let half = 1u64 << (a - 1);
        let rest = n - (1u64 << a);
        let (b, branch) = if rest < half {
            (rest, Branch::Lower)
        } else {
            (rest - half, Branch::Upper)
        };
        Ok(Self { n, a, b, branch })
    }

    pub fn reconstruct(&self) -> u64 {
        let base = 1u64 << self.a;
        match self.branch {
            Branch::Lower => base + self.b,
            Branch::Upper => base + base / 2 + self.b,
        }
    }
}

/// Subword complexity of the Thue–Morse word.
pub fn pt_formula(n: u64) -> u64 {
    assert!(n >= 1, "p(n) is defined for n >= 1");
    let m = n - 1;
    match m {
        0 => 2,
        1 => 4,
        _ => {
            let d = DyadicDecomposition::of(m).expect("m >= 2");
            let pow = 1u64 << d.a;
            match d.branch {
                Branch::Lower => 4 * m - pow,
                Branch::Upper => 4 * m - pow - 2 * d.b,
            }
        }
    }
}

/// Subword complexity of the generalized Thue–Morse word `s2(n) mod k`.
pub fn ptk_formula(n: u64, k: u64) -> Result<u64> {
    if k < 2 {
        return Err(Error::Parameter(format!("k = {k} must be at least 2")));
    }
    if n < 1 {
        return Err(Error::Parameter("p(n) is defined for n >= 1".into()));
    }
    let m = n - 1;
    Ok(match m {
        0 => k,
        1 => k * k,
        _ => {
            let d = DyadicDecomposition::of(m)?;
            let half = 1u64 << (d.a - 1);
            match d.branch {
                Branch::Lower => k * (k * m - half),
                Branch::Upper => k * (k * m - half - d.b),
            }
        }
    })
}

/// Number of length-`n` factors across all paperfolding words.
pub fn pf_formula(n: u64) -> u64 {
    assert!(n >= 1, "f(n) is defined for n >= 1");
    if n <= 3 {
        return 1 << n;
    }
    let a = 63 - n.leading_zeros();
    let pow = 1u64 << a;
    let quarter = 1u64 << (2 * a - 2); // 4^(a-1)
    if n < pow + pow / 2 {
        2 * pow * n - 5 * quarter
    } else if n < pow + pow / 2 + pow / 4 {
        3 * pow * n - 11 * quarter
    } else {
        2 * pow * n - 4 * quarter
    }
}

/// Largest fold count the paperfolding stabilization may reach.
pub const FOLD_CAP: usize = 16;

// Fold counts whose full family exceeds this many letters are refused.
const FAMILY_LETTER_CAP: usize = 1 << 27;

/// Factors of length `1..=max_n` across the `2^K` paperfolding words built
/// from all instruction sequences of length `K`.
pub fn paperfolding_family_counts(folds: usize, max_n: usize) -> Result<Vec<u64>> {
    if folds == 0 || folds > FOLD_CAP {
        return Err(Error::Parameter(format!(
            "fold count {folds} outside [1, {FOLD_CAP}]"
        )));
    }
    let letters = (1usize << folds) * ((1usize << folds) - 1);
    if letters > FAMILY_LETTER_CAP {
        return Err(Error::Resource(format!(
            "{folds} folds need {letters} letters"
        )));
    }
    let words: Vec<Vec<Letter>> = (0..1u64 << folds)
        .map(|index| {
            let bits: Vec<u8> = (0..folds).map(|j| ((index >> j) & 1) as u8).collect();
            paperfolding_letters(&bits)
        })
        .collect();
    let slices: Vec<&[Letter]> = words.iter().map(Vec::as_slice).collect();
    Ok(distinct_factor_counts(&slices, 2, max_n))
}

/// `f(1..=max_n)` for the paperfolding family, increasing the fold count
/// until the profile is unchanged for two consecutive increments.
pub fn paperfolding_profile(max_n: usize) -> Result<ComplexityTable> {
    if max_n == 0 {
        return Err(Error::Parameter("factor length must be at least 1".into()));
    }
    // first fold count whose words are at least twice max_n long
    let mut folds = (usize::BITS - max_n.leading_zeros()) as usize + 1;
    let mut prev = paperfolding_family_counts(folds, max_n)?;
    let mut unchanged = 0;
    while unchanged < 2 {
        folds += 1;
        let cur = match paperfolding_family_counts(folds, max_n) {
            Ok(c) => c,
            Err(Error::Resource(msg)) | Err(Error::Parameter(msg)) => {
                return Err(Error::Inconclusive(format!(
                    "paperfolding profile up to n = {max_n} did not settle: {msg}"
                )))
            }
            Err(e) => return Err(e),
        };
        if cur == prev {
            unchanged += 1;
        } else {
            unchanged = 0;
        }
        prev = cur;
    }
    Ok(ComplexityTable {
        family: "paperfolding".into(),
        alphabet_size: 2,
        values: prev,
        source: TableSource::Brute,
        settled_at: Some(folds),
    })
}

pub fn paperfolding_factor_count(n: usize) -> Result<u64> {
    Ok(*paperfolding_profile(n)?.values.last().expect("n >= 1"))
}

/// Closed-form tables matching the brute-force ones.
pub fn formula_table(
    family: &str,
    alphabet_size: usize,
    max_n: usize,
    f: impl Fn(u64) -> u64,
) -> ComplexityTable {
    ComplexityTable {
        family: family.into(),
        alphabet_size,
        values: (1..=max_n as u64).map(f).collect(),
        source: TableSource::Formula,
        settled_at: None,
    }
}

/// `p(n + 1) - p(n)` for the Thue–Morse word, with `p(0) = 1`.
pub fn pt_first_difference(n: u64) -> i64 {
    let p = |m: u64| if m == 0 { 1 } else { pt_formula(m) as i64 };
    p(n + 1) - p(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(word: &[Letter], n: usize) -> u64 {
        let set: std::collections::HashSet<&[Letter]> = word.windows(n).collect();
        set.len() as u64
    }

    #[test]
    fn refinement_matches_window_sets() {
        let words: [&[Letter]; 3] = [&[0, 1, 1, 0, 1, 0, 0, 1], &[2, 2, 2], &[1, 0]];
        let counts = distinct_factor_counts(&words, 3, 9);
        for n in 1..=9 {
            let mut set = std::collections::HashSet::new();
            for w in words {
                set.extend(w.windows(n));
            }
            assert_eq!(counts[n - 1], set.len() as u64, "n = {n}");
        }
    }

    #[test]
    fn thue_morse_counts() {
        assert_eq!(factor_count(&ThueMorse, 1).unwrap(), 2);
        assert_eq!(factor_count(&ThueMorse, 4).unwrap(), 10);
        let t3 = GeneralizedThueMorse::new(3).unwrap();
        assert_eq!(factor_count(&t3, 2).unwrap(), 9);
        let prefix = ThueMorse.prefix(4096);
        assert_eq!(brute(&prefix, 8), 22);
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(pt_formula(1), 2);
        assert_eq!(pt_formula(2), 4);
        assert_eq!(pt_formula(3), 6);
        assert_eq!(pt_formula(8), 22);
        assert_eq!(ptk_formula(1, 3).unwrap(), 3);
        assert_eq!(ptk_formula(3, 3).unwrap(), 15);
        assert!(ptk_formula(3, 1).is_err());
        let f: Vec<u64> = (1..=7).map(pf_formula).collect();
        assert_eq!(f, [2, 4, 8, 12, 20, 28, 40]);
    }

    #[test]
    fn dyadic_examples() {
        let d = DyadicDecomposition::of(7).unwrap();
        assert_eq!((d.a, d.b, d.branch), (2, 1, Branch::Upper));
        let d = DyadicDecomposition::of(2).unwrap();
        assert_eq!((d.a, d.b, d.branch), (1, 0, Branch::Lower));
        assert!(DyadicDecomposition::of(1).is_err());
    }

    #[test]
    fn paperfolding_small() {
        assert_eq!(paperfolding_factor_count(1).unwrap(), 2);
        assert_eq!(paperfolding_factor_count(3).unwrap(), 8);
        assert_eq!(paperfolding_factor_count(4).unwrap(), 12);
        assert!(paperfolding_family_counts(0, 4).is_err());
    }

    #[test]
    fn generalized_rejects_small_k() {
        assert!(GeneralizedThueMorse::new(1).is_err());
    }

    #[test]
    fn first_differences_start() {
        let d: Vec<i64> = (0..5).map(pt_first_difference).collect();
        assert_eq!(d, [1, 2, 2, 4, 2]);
    }
}
