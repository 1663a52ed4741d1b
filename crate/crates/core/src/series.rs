//! Finite windows of integer sequences and the analyses run on them:
//! iterated differences, eventual periodicity, runs, exact linear
//! recurrence guessing, gap support, and k-kernel closure.
//!
//! Everything here is exact. Absence of a recurrence or a period is only
//! evidence about the window that was searched.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Values `s(offset), s(offset + 1), ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceWindow {
    pub offset: usize,
    pub values: Vec<i64>,
}

impl SequenceWindow {
    pub fn new(offset: usize, values: Vec<i64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Parameter("sequence window is empty".into()));
        }
        Ok(Self { offset, values })
    }

    /// `s(n)` for `n` in `[offset, offset + len)` from a closure.
    pub fn from_fn(offset: usize, len: usize, f: impl Fn(usize) -> i64) -> Result<Self> {
        Self::new(offset, (offset..offset + len).map(f).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, n: usize) -> Option<i64> {
        n.checked_sub(self.offset)
            .and_then(|i| self.values.get(i))
            .copied()
    }
}

/// Forward differences iterated `order` times; the offset is kept.
pub fn differences(s: &SequenceWindow, order: usize) -> Result<SequenceWindow> {
    if order == 0 {
        return Err(Error::Parameter(
            "difference order must be at least 1".into(),
        ));
    }
    if s.len() <= order {
        return Err(Error::Parameter(format!(
            "window of length {} is too short for order {order}",
            s.len()
        )));
    }
    let mut values = s.values.clone();
    for _ in 0..order {
        values = values.windows(2).map(|w| w[1] - w[0]).collect();
    }
    SequenceWindow::new(s.offset, values)
}

/// `s(i + period) = s(i)` for every window index `i >= preperiod`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodGuess {
    /// Counted in window entries, not absolute indices.
    pub preperiod: usize,
    pub period: usize,
}

/// The least `(preperiod, period)` in lexicographic order, within bounds,
/// that the whole window satisfies.
pub fn detect_eventual_period(
    s: &SequenceWindow,
    max_pre: usize,
    max_per: usize,
) -> Result<Option<PeriodGuess>> {
    if max_per == 0 {
        return Err(Error::Parameter("max period must be at least 1".into()));
    }
    if s.len() < max_pre + 2 * max_per {
        return Err(Error::Parameter(format!(
            "window of length {} is shorter than max_pre + 2 max_per = {}",
            s.len(),
            max_pre + 2 * max_per
        )));
    }
    let v = &s.values;
    for preperiod in 0..=max_pre {
        for period in 1..=max_per {
            if (preperiod..v.len() - period).all(|i| v[i] == v[i + period]) {
                return Ok(Some(PeriodGuess { preperiod, period }));
            }
        }
    }
    Ok(None)
}

/// Length of the longest run of entries equal to `value`.
pub fn max_run(s: &SequenceWindow, value: i64) -> usize {
    let mut best = 0;
    let mut cur = 0;
    for &x in &s.values {
        if x == value {
            cur += 1;
            best = best.max(cur);
        } else {
            cur = 0;
        }
    }
    best
}

/// `a(n) = c_1 a(n-1) + ... + c_order a(n-order)`, holding at every window
/// position with `order` predecessors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceGuess {
    pub order: usize,
    pub coefficients: Vec<BigRational>,
}

impl RecurrenceGuess {
    /// Exact check against every window entry past the first `order`.
    pub fn verifies(&self, values: &[i64]) -> bool {
        (self.order..values.len()).all(|n| {
            let rhs: BigRational = self
                .coefficients
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(values[n - 1 - i])))
                .sum();
            rhs == BigRational::from_integer(BigInt::from(values[n]))
        })
    }

    pub fn coefficient_strings(&self) -> Vec<String> {
        self.coefficients.iter().map(|c| c.to_string()).collect()
    }
}

/// The minimal-order linear recurrence with constant rational coefficients
/// satisfied by the entire window, if one of order `<= max_order` exists.
///
/// For each order the full overdetermined system is reduced exactly; the
/// order is accepted iff the system is consistent. An all-zero window
/// yields order 1 with coefficient 0.
pub fn guess_linear_recurrence(
    s: &SequenceWindow,
    max_order: usize,
) -> Result<Option<RecurrenceGuess>> {
    if max_order == 0 {
        return Err(Error::Parameter("max order must be at least 1".into()));
    }
    if s.len() < 3 * max_order {
        return Err(Error::Parameter(format!(
            "window of length {} is shorter than 3 max_order = {}",
            s.len(),
            3 * max_order
        )));
    }
    let v = &s.values;
    if v.iter().all(|&x| x == 0) {
        return Ok(Some(RecurrenceGuess {
            order: 1,
            coefficients: vec![BigRational::zero()],
        }));
    }
    for order in 1..=max_order {
        let rows: Vec<Vec<BigInt>> = (order..v.len())
            .map(|n| {
                let mut row: Vec<BigInt> = (1..=order).map(|i| BigInt::from(v[n - i])).collect();
                row.push(BigInt::from(v[n]));
                row
            })
            .collect();
        if let Some(coefficients) = solve_consistent(rows, order) {
            let guess = RecurrenceGuess {
                order,
                coefficients,
            };
            debug_assert!(guess.verifies(v));
            return Ok(Some(guess));
        }
    }
    Ok(None)
}

/// Reduces the augmented integer system `[A | b]` (each row holds `unknowns`
/// coefficients then the right-hand side) to row echelon form without
/// fractions, then back-substitutes with free unknowns set to zero.
/// Returns `None` when the system is inconsistent.
fn solve_consistent(mut rows: Vec<Vec<BigInt>>, unknowns: usize) -> Option<Vec<BigRational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..unknowns {
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let pivot_row = rows[r].clone();
        for row in rows.iter_mut().skip(r + 1) {
            if row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            let p = &pivot_row[col];
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x = &*x * p - &f * y;
            }
            normalize(row);
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    // a zero row with non-zero right-hand side is a contradiction
    if rows[r..]
        .iter()
        .any(|row| !row[unknowns].is_zero() && row[..unknowns].iter().all(Zero::is_zero))
    {
        return None;
    }
    let mut x = vec![BigRational::zero(); unknowns];
    for (i, &col) in pivots.iter().enumerate().rev() {
        let row = &rows[i];
        let mut acc = BigRational::from_integer(row[unknowns].clone());
        for j in col + 1..unknowns {
            acc -= BigRational::from_integer(row[j].clone()) * &x[j];
        }
        x[col] = acc / BigRational::from_integer(row[col].clone());
    }
    Some(x)
}

fn normalize(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

/// Indices of non-zero entries and the smallest ratio between consecutive
/// ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapSupport {
    pub support: Vec<usize>,
    pub min_ratio: Ratio<u64>,
}

/// Support of the window from absolute index `from_index` on.
pub fn support_and_gap_ratio(s: &SequenceWindow, from_index: usize) -> Result<GapSupport> {
    if from_index == 0 {
        return Err(Error::Parameter(
            "gap ratios need support indices of at least 1".into(),
        ));
    }
    let support: Vec<usize> = s
        .values
        .iter()
        .enumerate()
        .map(|(i, &x)| (i + s.offset, x))
        .filter(|&(n, x)| n >= from_index && x != 0)
        .map(|(n, _)| n)
        .collect();
    if support.len() < 2 {
        return Err(Error::Parameter(format!(
            "need two support points at or after {from_index}, found {}",
            support.len()
        )));
    }
    let min_ratio = support
        .windows(2)
        .map(|w| Ratio::new(w[1] as u64, w[0] as u64))
        .min()
        .expect("at least one ratio");
    Ok(GapSupport { support, min_ratio })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClosureStatus {
    Closed,
    Unresolved,
}

/// The subsequence `n ↦ s(k^e n + r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct KernelClass {
    pub e: u32,
    pub r: u64,
}

/// Classes of the k-kernel found by breadth-first closure, identified by
/// agreement on `[0, window)`. This is a guess: classes found distinct stay
/// distinct on longer windows, but equal ones may later split.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelAutomaton {
    pub k: u64,
    pub window: usize,
    pub depth_limit: u32,
    pub classes: Vec<KernelClass>,
    /// `transitions[c][d]` is the class of digit-`d` child of class `c`;
    /// `None` where the depth limit stopped exploration.
    pub transitions: Vec<Vec<Option<usize>>>,
    pub status: ClosureStatus,
}

impl KernelAutomaton {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }
}

/// Breadth-first closure of the k-kernel of `s` starting from `s` itself.
pub fn kernel_closure(
    s: &dyn Fn(u64) -> i64,
    k: u64,
    depth_limit: u32,
    window: usize,
) -> Result<KernelAutomaton> {
    if k < 2 {
        return Err(Error::Parameter(format!("base {k} must be at least 2")));
    }
    if window < 64 {
        return Err(Error::Parameter(format!(
            "comparison window {window} must be at least 64"
        )));
    }
    let sample = |class: KernelClass| -> Vec<i64> {
        let step = k.pow(class.e);
        (0..window as u64).map(|n| s(step * n + class.r)).collect()
    };
    let root = KernelClass { e: 0, r: 0 };
    let mut classes = vec![root];
    let mut index: HashMap<Vec<i64>, usize> = HashMap::from([(sample(root), 0)]);
    let mut transitions: Vec<Vec<Option<usize>>> = vec![vec![None; k as usize]];
    let mut queue = VecDeque::from([0usize]);
    let mut status = ClosureStatus::Closed;
    while let Some(c) = queue.pop_front() {
        let KernelClass { e, r } = classes[c];
        if e >= depth_limit {
            status = ClosureStatus::Unresolved;
            continue;
        }
        for d in 0..k {
            let child = KernelClass {
                e: e + 1,
                r: r + d * k.pow(e),
            };
            let values = sample(child);
            let target = match index.get(&values) {
                Some(&t) => t,
                None => {
                    let t = classes.len();
                    classes.push(child);
                    transitions.push(vec![None; k as usize]);
                    index.insert(values, t);
                    queue.push_back(t);
                    t
                }
            };
            transitions[c][d as usize] = Some(target);
        }
    }
    Ok(KernelAutomaton {
        k,
        window,
        depth_limit,
        classes,
        transitions,
        status,
    })
}

/// Whether a ratio exceeds one, i.e. the support is lacunary on the window.
pub fn is_lacunary(g: &GapSupport) -> bool {
    g.min_ratio > Ratio::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn win(v: &[i64]) -> SequenceWindow {
        SequenceWindow::new(0, v.to_vec()).unwrap()
    }

    #[test]
    fn difference_examples() {
        assert_eq!(
            differences(&win(&[2, 4, 6, 10, 12]), 1).unwrap().values,
            [2, 2, 4, 2]
        );
        assert_eq!(differences(&win(&[3; 6]), 1).unwrap().values, [0; 5]);
        assert_eq!(differences(&win(&[1, 2, 4, 8]), 2).unwrap().values, [1, 2]);
        assert!(differences(&win(&[1, 2]), 2).is_err());
        assert!(differences(&win(&[1, 2]), 0).is_err());
    }

    #[test]
    fn period_examples() {
        assert_eq!(
            detect_eventual_period(&win(&[5; 10]), 2, 3).unwrap(),
            Some(PeriodGuess {
                preperiod: 0,
                period: 1
            })
        );
        let v: Vec<i64> = std::iter::once(7).chain([1, 2].repeat(6)).collect();
        assert_eq!(
            detect_eventual_period(&win(&v), 3, 3).unwrap(),
            Some(PeriodGuess {
                preperiod: 1,
                period: 2
            })
        );
        assert!(detect_eventual_period(&win(&[1, 2, 3]), 2, 2).is_err());
    }

    #[test]
    fn run_examples() {
        assert_eq!(max_run(&win(&[0; 8]), 4), 0);
        assert_eq!(max_run(&win(&[4, 4, 4]), 4), 3);
        assert_eq!(max_run(&win(&[4, 1, 4, 4, 2]), 4), 2);
    }

    #[test]
    fn fibonacci_control() {
        let mut fib = vec![0i64, 1];
        while fib.len() < 30 {
            let n = fib.len();
            fib.push(fib[n - 1] + fib[n - 2]);
        }
        let g = guess_linear_recurrence(&win(&fib), 5).unwrap().unwrap();
        assert_eq!(g.order, 2);
        assert_eq!(g.coefficient_strings(), ["1", "1"]);
        assert!(g.verifies(&fib));
    }

    #[test]
    fn recurrence_edge_cases() {
        let zero = guess_linear_recurrence(&win(&[0; 9]), 3).unwrap().unwrap();
        assert_eq!(
            (zero.order, zero.coefficient_strings()),
            (1, vec!["0".to_string()])
        );
        assert!(guess_linear_recurrence(&win(&[1, 2, 3]), 2).is_err());
        // n^2 needs order 3
        let squares: Vec<i64> = (0..20).map(|n| n * n).collect();
        let g = guess_linear_recurrence(&win(&squares), 5).unwrap().unwrap();
        assert_eq!(g.coefficient_strings(), ["3", "-3", "1"]);
        // rational coefficients: a(n) = a(n-1)/2 on powers of two descending
        let halves: Vec<i64> = (0..12).map(|i| 1 << (11 - i)).collect();
        let g = guess_linear_recurrence(&win(&halves), 3).unwrap().unwrap();
        assert_eq!(g.coefficient_strings(), ["1/2"]);
    }

    #[test]
    fn gap_examples() {
        let powers = SequenceWindow::from_fn(0, 300, |n| i64::from(n.is_power_of_two())).unwrap();
        let g = support_and_gap_ratio(&powers, 1).unwrap();
        assert_eq!(g.min_ratio, Ratio::new(2, 1));
        assert!(is_lacunary(&g));
        assert!(support_and_gap_ratio(&win(&[0, 1, 0]), 1).is_err());
        assert!(support_and_gap_ratio(&powers, 0).is_err());
    }

    #[test]
    fn kernel_of_thue_morse_and_constant() {
        let t = |n: u64| i64::from(n.count_ones() % 2 == 1);
        let a = kernel_closure(&t, 2, 8, 256).unwrap();
        assert_eq!(a.class_count(), 2);
        assert_eq!(a.status, ClosureStatus::Closed);
        let c = kernel_closure(&|_| 3, 2, 4, 64).unwrap();
        assert_eq!(c.class_count(), 1);
        assert!(kernel_closure(&t, 1, 4, 64).is_err());
        assert!(kernel_closure(&t, 2, 4, 10).is_err());
    }

    #[test]
    fn kernel_depth_limit_reports_unresolved() {
        // n ↦ n has an infinite kernel
        let a = kernel_closure(&|n| n as i64, 2, 3, 64).unwrap();
        assert_eq!(a.status, ClosureStatus::Unresolved);
        assert!(a.transitions.iter().any(|t| t.contains(&None)));
    }
}
