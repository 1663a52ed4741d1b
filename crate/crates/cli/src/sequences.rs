//! Named sequences available to `series` and `kernel`, and the cached
//! computations behind them.

use std::fmt;
use std::str::FromStr;

use tmwords::complexity::{pf_formula, pt_first_difference, pt_formula};
use tmwords::enumerate::{circular_overlap_free_lengths, count_overlap_free, CircularReport};
use tmwords::series::SequenceWindow;
use tmwords::word::s2;
use tmwords::{Error, Result};

use crate::cache::{Cache, CacheKey};

/// `a_0..=a_max_n`, cached.
pub fn overlap_free_counts(cache: &Cache, max_n: usize) -> Result<Vec<u64>> {
    cache.get_or_compute(&CacheKey::new("overlap-free", "pruned-dfs", max_n), || {
        Ok(count_overlap_free(max_n).values)
    })
}

/// The circular report up to `max_n`, cached.
pub fn circular_report(cache: &Cache, max_n: usize) -> Result<CircularReport> {
    cache.get_or_compute(&CacheKey::new("circular", "conjugates", max_n), || {
        circular_overlap_free_lengths(max_n)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    OverlapFree,
    Pt,
    DeltaPt,
    Delta2Pt,
    Circular,
    Fibonacci,
    Tm,
    Pf,
}

pub const BUILTINS: [Builtin; 8] = [
    Builtin::OverlapFree,
    Builtin::Pt,
    Builtin::DeltaPt,
    Builtin::Delta2Pt,
    Builtin::Circular,
    Builtin::Fibonacci,
    Builtin::Tm,
    Builtin::Pf,
];

impl Builtin {
    pub fn name(self) -> &'static str {
        match self {
            Builtin::OverlapFree => "overlap-free",
            Builtin::Pt => "pt",
            Builtin::DeltaPt => "delta-pt",
            Builtin::Delta2Pt => "delta2-pt",
            Builtin::Circular => "circular",
            Builtin::Fibonacci => "fibonacci",
            Builtin::Tm => "tm",
            Builtin::Pf => "pf",
        }
    }

    /// Closed-form value at `n`, for sequences that have one. Complexity
    /// functions take the value 1 at `n = 0` (the empty factor).
    pub fn eval(self, n: u64) -> Option<i64> {
        match self {
            Builtin::Pt => Some(if n == 0 { 1 } else { pt_formula(n) as i64 }),
            Builtin::DeltaPt => Some(pt_first_difference(n)),
            Builtin::Delta2Pt => Some(pt_first_difference(n + 1) - pt_first_difference(n)),
            Builtin::Tm => Some(i64::from(s2(n) % 2)),
            Builtin::Pf => Some(if n == 0 { 1 } else { pf_formula(n) as i64 }),
            Builtin::Fibonacci => fibonacci(n),
            Builtin::OverlapFree | Builtin::Circular => None,
        }
    }

    /// First index of a default window.
    pub fn default_offset(self) -> usize {
        match self {
            Builtin::Circular => 1,
            _ => 0,
        }
    }

    /// `s(offset), ..., s(offset + len - 1)`.
    pub fn window(self, cache: &Cache, offset: usize, len: usize) -> Result<SequenceWindow> {
        if len == 0 {
            return Err(Error::Parameter("window length must be at least 1".into()));
        }
        let end = offset + len;
        let values: Vec<i64> = match self {
            Builtin::OverlapFree => overlap_free_counts(cache, end - 1)?[offset..]
                .iter()
                .map(|&v| v as i64)
                .collect(),
            Builtin::Circular => {
                if offset == 0 {
                    return Err(Error::Parameter("circular counts start at n = 1".into()));
                }
                circular_report(cache, end - 1)?.counts[offset - 1..]
                    .iter()
                    .map(|&v| v as i64)
                    .collect()
            }
            _ => (offset as u64..end as u64)
                .map(|n| {
                    self.eval(n).ok_or_else(|| {
                        Error::Resource(format!("{} overflows 64 bits at n = {n}", self.name()))
                    })
                })
                .collect::<Result<_>>()?,
        };
        SequenceWindow::new(offset, values)
    }
}

fn fibonacci(n: u64) -> Option<i64> {
    let (mut a, mut b) = (0i64, 1i64);
    for _ in 0..n {
        (a, b) = (b, a.checked_add(b)?);
    }
    Some(a)
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Builtin {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        BUILTINS.into_iter().find(|b| b.name() == s).ok_or_else(|| {
            let names: Vec<_> = BUILTINS.iter().map(|b| b.name()).collect();
            format!(
                "unknown sequence '{s}'; expected one of {}",
                names.join(", ")
            )
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_windows() {
        let c = Cache::disabled();
        assert_eq!(
            Builtin::OverlapFree.window(&c, 0, 5).unwrap().values,
            [1, 2, 4, 6, 10]
        );
        assert_eq!(Builtin::Pt.window(&c, 1, 4).unwrap().values, [2, 4, 6, 10]);
        assert_eq!(
            Builtin::DeltaPt.window(&c, 0, 5).unwrap().values,
            [1, 2, 2, 4, 2]
        );
        assert_eq!(
            Builtin::Tm.window(&c, 0, 8).unwrap().values,
            [0, 1, 1, 0, 1, 0, 0, 1]
        );
        assert_eq!(
            Builtin::Pf.window(&c, 1, 7).unwrap().values,
            [2, 4, 8, 12, 20, 28, 40]
        );
        assert_eq!(
            Builtin::Fibonacci.window(&c, 0, 7).unwrap().values,
            [0, 1, 1, 2, 3, 5, 8]
        );
        assert_eq!(Builtin::Circular.window(&c, 1, 6).unwrap().values[4], 0);
        assert!(Builtin::Circular.window(&c, 0, 6).is_err());
        assert!(Builtin::Fibonacci.window(&c, 0, 200).is_err());
    }

    #[test]
    fn names_round_trip() {
        for b in BUILTINS {
            assert_eq!(b.name().parse::<Builtin>().unwrap(), b);
        }
        assert!("nope".parse::<Builtin>().is_err());
    }
}
