//! The counting argument showing that ternary words containing an overlap
//! do not form a context-free language, made checkable.
//!
//! For `n = 2^(2k+1) + 1` and `x = mu^(2k)(0)`, the word `w = 0xx` is an
//! overlap none of whose proper factors is one. Lifting `x` through the
//! coalescing map 0→0, 1→1, 2→1 gives the set `R = {0yy}` of ternary
//! overlaps. Exchanging a middle factor of one element of `R` for a
//! different middle of another must destroy every overlap, and only few
//! elements of `R` can share a middle; together these contradict the
//! interchange lemma's lower bound once `n` is large.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::avoidance::{find_overlap, minimal_overlap_check, OverlapOccurrence};
use crate::error::{Error, Result};
use crate::word::{FiniteWord, Morphism};

/// Largest `k` for which the witness word is materialized.
pub const MAX_WITNESS_K: u32 = 6;
/// Largest `k` for which `R` is materialized (`|R| = 2^(4^k / 2)`).
pub const MAX_R_K: u32 = 2;
/// Largest `k` considered when searching for a contradiction threshold.
pub const MAX_THRESHOLD_K: u32 = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessInstance {
    pub k: u32,
    pub n: usize,
    pub x: FiniteWord,
    /// `0xx`, carried over the ternary alphabet.
    pub w: FiniteWord,
}

/// `2^(2k+1) + 1`.
pub fn witness_length(k: u32) -> usize {
    (1usize << (2 * k + 1)) + 1
}

impl WitnessInstance {
    pub fn build(k: u32) -> Result<Self> {
        if k > MAX_WITNESS_K {
            return Err(Error::Resource(format!(
                "k = {k} exceeds {MAX_WITNESS_K} (n would be {})",
                witness_length(k)
            )));
        }
        let n = witness_length(k);
        let x = Morphism::thue_morse().apply_iter(&[0], 2 * k as usize)?;
        let mut letters = vec![0];
        letters.extend_from_slice(&x);
        letters.extend_from_slice(&x);
        let w = FiniteWord::new(letters, 3)?;
        if x.len() != 1 << (2 * k) || w.len() != n {
            return Err(Error::Construction(format!(
                "witness for k = {k} has wrong length"
            )));
        }
        if !minimal_overlap_check(&w) {
            return Err(Error::Construction(format!(
                "witness for k = {k} is not a minimal overlap"
            )));
        }
        Ok(Self { k, n, x, w })
    }

    /// `(n - 1) / 2`, the largest middle length.
    pub fn m(&self) -> usize {
        (self.n - 1) / 2
    }
}

/// Every ternary word mapped onto `x` by 0→0, 1→1, 2→1, in lexicographic
/// order.
pub fn psi_preimages(x: &[u8]) -> Result<Vec<FiniteWord>> {
    if x.iter().any(|&l| l > 1) {
        return Err(Error::Domain("preimages are taken of binary words".into()));
    }
    let ones = x.iter().filter(|&&l| l == 1).count();
    if ones > 24 {
        return Err(Error::Resource(format!(
            "{ones} ones give too many preimages"
        )));
    }
    let mut out = Vec::with_capacity(1 << ones);
    let mut buf = Vec::with_capacity(x.len());
    fn go(x: &[u8], buf: &mut Vec<u8>, out: &mut Vec<FiniteWord>) {
        match x.get(buf.len()) {
            None => out.push(FiniteWord::new(buf.clone(), 3).expect("ternary")),
            Some(0) => {
                buf.push(0);
                go(x, buf, out);
                buf.pop();
            }
            Some(_) => {
                for l in [1, 2] {
                    buf.push(l);
                    go(x, buf, out);
                    buf.pop();
                }
            }
        }
    }
    go(x, &mut buf, &mut out);
    Ok(out)
}

/// `R = {0yy : y ∈ psi^-1(x)}` in lexicographic order.
pub fn build_r(k: u32) -> Result<Vec<FiniteWord>> {
    if k == 0 {
        return Err(Error::Parameter(
            "k = 0 gives |R| = 2^(1/2); R is only defined for k >= 1".into(),
        ));
    }
    if k > MAX_R_K {
        return Err(Error::Resource(format!(
            "|R| = 2^{} is too large to materialize",
            (witness_length(k) - 1) / 4
        )));
    }
    let witness = WitnessInstance::build(k)?;
    Ok(psi_preimages(&witness.x)?
        .into_iter()
        .map(|y| {
            let mut letters = Vec::with_capacity(witness.n);
            letters.push(0);
            letters.extend_from_slice(&y);
            letters.extend_from_slice(&y);
            FiniteWord::new(letters, 3).expect("ternary")
        })
        .collect())
}

/// A factorization `z = prefix · middle · suffix` of length-`n` words with
/// `m/2 <= |middle| <= m`, `m = (n - 1) / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Split {
    pub prefix_len: usize,
    pub mid_len: usize,
    pub suffix_len: usize,
}

impl Split {
    pub fn new(prefix_len: usize, mid_len: usize, suffix_len: usize) -> Result<Self> {
        let n = prefix_len + mid_len + suffix_len;
        let m = (n.max(1) - 1) / 2;
        if 2 * mid_len < m || mid_len > m || mid_len == 0 {
            return Err(Error::Parameter(format!(
                "middle length {mid_len} outside [{}/2, {m}] for n = {n}",
                m
            )));
        }
        Ok(Self {
            prefix_len,
            mid_len,
            suffix_len,
        })
    }

    pub fn n(&self) -> usize {
        self.prefix_len + self.mid_len + self.suffix_len
    }

    pub fn middle<'a>(&self, z: &'a [u8]) -> &'a [u8] {
        &z[self.prefix_len..self.prefix_len + self.mid_len]
    }

    /// Every valid split of length-`n` words.
    pub fn all(n: usize) -> Vec<Split> {
        let m = (n.max(1) - 1) / 2;
        let mut out = Vec::new();
        for mid in m.div_ceil(2).max(1)..=m {
            for prefix in 0..=n - mid {
                out.push(Split {
                    prefix_len: prefix,
                    mid_len: mid,
                    suffix_len: n - mid - prefix,
                });
            }
        }
        out
    }

    /// Twenty fixed splits for `k = 2` (`n = 33`): split `i` has middle
    /// length `8 + i mod 9` and prefix length `(5i + 3) mod (34 - mid)`.
    pub fn k2_sample() -> Vec<Split> {
        let n = witness_length(2);
        (0..20)
            .map(|i| {
                let mid = 8 + i % 9;
                let prefix = (5 * i + 3) % (n - mid + 1);
                Split::new(prefix, mid, n - mid - prefix).expect("valid sample split")
            })
            .collect()
    }
}

/// Exchanging the middle of `R[j]` into `R[i]` produced a word that still
/// contains an overlap although the two middles differ.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SwapViolation {
    pub i: usize,
    pub j: usize,
    pub word: String,
    pub overlap: OverlapOccurrence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SwapOutcome {
    pub pairs_tested: u64,
    pub violations: Vec<SwapViolation>,
}

/// Recombines `prefix(z_i) middle(z_j) suffix(z_i)` for all ordered pairs
/// with different middles and reports those that still contain an overlap.
pub fn swap_check(r: &[FiniteWord], split: Split) -> SwapOutcome {
    let (start, end) = (split.prefix_len, split.prefix_len + split.mid_len);
    let per_i: Vec<(u64, Vec<SwapViolation>)> = (0..r.len())
        .into_par_iter()
        .map(|i| {
            let zi: &[u8] = &r[i];
            let mut buf = zi.to_vec();
            let mut tested = 0;
            let mut found = Vec::new();
            for (j, zj) in r.iter().enumerate() {
                let mid_j = &zj[start..end];
                if mid_j == &zi[start..end] {
                    continue;
                }
                tested += 1;
                buf[start..end].copy_from_slice(mid_j);
                if let Some(overlap) = find_overlap(&buf) {
                    found.push(SwapViolation {
                        i,
                        j,
                        word: crate::word::letters_to_string(&buf),
                        overlap,
                    });
                }
            }
            (tested, found)
        })
        .collect();
    let mut outcome = SwapOutcome {
        pairs_tested: 0,
        violations: Vec::new(),
    };
    for (tested, found) in per_i {
        outcome.pairs_tested += tested;
        outcome.violations.extend(found);
    }
    outcome.violations.sort();
    outcome
}

/// The largest number of elements of `r` that share one middle factor.
pub fn fixed_middle_bound(r: &[FiniteWord], split: Split) -> usize {
    let mut counts: HashMap<&[u8], usize> = HashMap::new();
    for z in r {
        *counts.entry(split.middle(z)).or_default() += 1;
    }
    counts.into_values().max().unwrap_or(0)
}

/// `2^((n - 1) / 8)`, the claimed cap on elements sharing a middle.
pub fn fixed_middle_cap(k: u32) -> Result<BigInt> {
    let n = witness_length(k);
    if !(n - 1).is_multiple_of(8) {
        return Err(Error::Parameter(format!(
            "(n - 1) / 8 is not an integer for k = {k}"
        )));
    }
    Ok(BigInt::from(2).pow((n - 1) / 8))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterchangeReport {
    pub k: u32,
    pub n: usize,
    pub c: BigRational,
    /// `|R| / (c (n + 1)^2)` with `|R| = 2^((n - 1) / 4)`.
    pub lower_bound: BigRational,
    /// `2^((n - 1) / 8)`.
    pub upper_bound: BigInt,
    pub contradiction: bool,
    /// Smallest `k <= MAX_THRESHOLD_K` with a contradiction for this `c`.
    pub threshold_k: Option<u32>,
}

fn bounds(k: u32, c: &BigRational) -> (BigRational, BigInt) {
    let n = witness_length(k);
    let r_size = BigInt::from(2).pow((n - 1) / 4);
    let denom = c * BigRational::from_integer(BigInt::from((n + 1) * (n + 1)));
    let lower = BigRational::from_integer(r_size) / denom;
    let upper = BigInt::from(2).pow((n - 1) / 8);
    (lower, upper)
}

/// Compares the lemma's lower bound on `|Z|` against the fixed-middle cap,
/// exactly, for lemma constant `c`.
pub fn contradiction_report(k: u32, c: &BigRational) -> Result<InterchangeReport> {
    if k == 0 {
        return Err(Error::Parameter("the comparison needs k >= 1".into()));
    }
    if k > MAX_THRESHOLD_K {
        return Err(Error::Resource(format!(
            "k = {k} exceeds {MAX_THRESHOLD_K}"
        )));
    }
    if *c <= BigRational::zero() {
        return Err(Error::Parameter(format!(
            "lemma constant {c} must be positive"
        )));
    }
    let (lower_bound, upper_bound) = bounds(k, c);
    let contradiction = lower_bound > BigRational::from_integer(upper_bound.clone());
    let threshold_k = (1..=MAX_THRESHOLD_K).find(|&t| {
        let (lo, up) = bounds(t, c);
        lo > BigRational::from_integer(up)
    });
    Ok(InterchangeReport {
        k,
        n: witness_length(k),
        c: c.clone(),
        lower_bound,
        upper_bound,
        contradiction,
        threshold_k,
    })
}

/// Exact comparison in report form; rationals are rendered as `p/q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContradictionSummary {
    pub c: String,
    pub lower: String,
    pub upper: String,
    pub holds: bool,
    pub threshold_k: Option<u32>,
}

impl From<&InterchangeReport> for ContradictionSummary {
    fn from(r: &InterchangeReport) -> Self {
        Self {
            c: r.c.to_string(),
            lower: r.lower_bound.to_string(),
            upper: r.upper_bound.to_string(),
            holds: r.contradiction,
            threshold_k: r.threshold_k,
        }
    }
}

/// Everything the harness checks for one `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HarnessReport {
    pub k: u32,
    pub n: usize,
    #[serde(rename = "R_size")]
    pub r_size: usize,
    pub all_contain_overlap: bool,
    pub psi_projects_to_witness: bool,
    pub splits_tested: usize,
    pub pairs_tested: u64,
    pub violations: Vec<SwapViolation>,
    pub fixed_middle_max: usize,
    pub fixed_middle_worst_split: Option<Split>,
    /// Splits whose fixed-middle count exceeds `bound`.
    pub fixed_middle_exceeding: Vec<(Split, usize)>,
    pub bound: String,
    pub contradiction: ContradictionSummary,
}

impl HarnessReport {
    pub fn swaps_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn bound_holds(&self) -> bool {
        self.fixed_middle_exceeding.is_empty()
    }
}

pub fn run_harness(k: u32, splits: &[Split], c: &BigRational) -> Result<HarnessReport> {
    let witness = WitnessInstance::build(k)?;
    let r = build_r(k)?;
    let psi = Morphism::psi();
    let all_contain_overlap = r.iter().all(|z| find_overlap(z).is_some());
    let psi_projects_to_witness = r
        .iter()
        .all(|z| psi.apply(z).map(|p| p == witness.w).unwrap_or(false));
    let cap = fixed_middle_cap(k)?;
    let contradiction = ContradictionSummary::from(&contradiction_report(k, c)?);
    let mut pairs_tested = 0;
    let mut violations = Vec::new();
    let mut fixed_middle_max = 0;
    let mut worst = None;
    let mut exceeding = Vec::new();
    for &split in splits {
        if split.n() != witness.n {
            return Err(Error::Parameter(format!(
                "split {split:?} does not cover n = {}",
                witness.n
            )));
        }
        let outcome = swap_check(&r, split);
        pairs_tested += outcome.pairs_tested;
        violations.extend(outcome.violations);
        let fm = fixed_middle_bound(&r, split);
        if fm > fixed_middle_max {
            fixed_middle_max = fm;
            worst = Some(split);
        }
        if BigInt::from(fm) > cap {
            exceeding.push((split, fm));
        }
    }
    Ok(HarnessReport {
        k,
        n: witness.n,
        r_size: r.len(),
        all_contain_overlap,
        psi_projects_to_witness,
        splits_tested: splits.len(),
        pairs_tested,
        violations,
        fixed_middle_max,
        fixed_middle_worst_split: worst,
        fixed_middle_exceeding: exceeding,
        bound: cap.to_string(),
        contradiction,
    })
}

/// `|R|` from the closed form, without building `R`.
pub fn r_size_formula(k: u32) -> BigInt {
    BigInt::from(2).pow((witness_length(k) - 1) / 4)
}
