//! The acceptance criteria as runnable checks. `verify-all` and the
//! acceptance test target both run these.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_rational::{BigRational, Ratio};
use serde_json::{json, Value};

use tmwords::avoidance::{
    is_circular_overlap_free, square_catalog, squares_occurring_in, tm_factor_scan_length,
    unique_square_start,
};
use tmwords::complexity::{
    factor_profile, paperfolding_profile, pf_formula, pt_formula, ptk_formula,
    GeneralizedThueMorse, ThueMorse,
};
use tmwords::enumerate::{count_overlap_free, count_overlap_free_exhaustive, growth_slope};
use tmwords::interchange::{
    build_r, contradiction_report, fixed_middle_cap, run_harness, witness_length, Split,
    WitnessInstance,
};
use tmwords::series::{
    detect_eventual_period, guess_linear_recurrence, kernel_closure, max_run,
    support_and_gap_ratio, ClosureStatus, SequenceWindow,
};
use tmwords::word::{thue_morse_prefix, tk_letter, FiniteWord};
use tmwords::Error;

use crate::cache::Cache;
use crate::commands::{generate_word, GenSpec};
use crate::report::{ReportEnvelope, Status};
use crate::sequences::{circular_report, overlap_free_counts, Builtin};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    Full,
    Quick,
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::Full => "full",
            Profile::Quick => "quick",
        }
    }

    fn pick<T>(self, full: T, quick: T) -> T {
        match self {
            Profile::Full => full,
            Profile::Quick => quick,
        }
    }
}

pub struct Context {
    pub profile: Profile,
    pub cache: Cache,
}

pub struct Criterion {
    pub id: u8,
    pub slug: &'static str,
    pub title: &'static str,
    /// Wall-clock budget for the full profile.
    pub budget: Duration,
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

pub const CRITERIA: [Criterion; 12] = [
    Criterion {
        id: 1,
        slug: "thue-morse-fidelity",
        title: "Thue-Morse fidelity",
        budget: secs(1),
    },
    Criterion {
        id: 2,
        slug: "enumeration-oracles",
        title: "Enumeration oracle equivalence",
        budget: secs(10),
    },
    Criterion {
        id: 3,
        slug: "growth-envelope",
        title: "Growth envelope",
        budget: secs(120),
    },
    Criterion {
        id: 4,
        slug: "rationality-refutation",
        title: "Rationality refutation",
        budget: secs(30),
    },
    Criterion {
        id: 5,
        slug: "square-catalog",
        title: "Square catalog",
        budget: secs(60),
    },
    Criterion {
        id: 6,
        slug: "circular-lengths",
        title: "Circular lengths",
        budget: secs(60),
    },
    Criterion {
        id: 7,
        slug: "complexity-formulas",
        title: "Complexity formulas",
        budget: secs(180),
    },
    Criterion {
        id: 8,
        slug: "difference-analysis",
        title: "Difference analysis",
        budget: secs(10),
    },
    Criterion {
        id: 9,
        slug: "kernel-route",
        title: "Kernel route",
        budget: secs(30),
    },
    Criterion {
        id: 10,
        slug: "paperfolding",
        title: "Paperfolding",
        budget: secs(120),
    },
    Criterion {
        id: 11,
        slug: "interchange-harness",
        title: "Interchange harness",
        budget: secs(120),
    },
    Criterion {
        id: 12,
        slug: "determinism",
        title: "Determinism",
        budget: secs(120),
    },
];

pub fn criterion(id: u8) -> &'static Criterion {
    &CRITERIA[usize::from(id) - 1]
}

pub fn claim_id(id: u8) -> String {
    format!("criterion-{id:02}-{}", criterion(id).slug)
}

/// Result of one criterion before it is wrapped in an envelope.
struct Outcome {
    ok: bool,
    parameters: Value,
    evidence: Value,
}

type Check = fn(&Context) -> tmwords::Result<Outcome>;

fn check_for(id: u8) -> Check {
    match id {
        1 => thue_morse_fidelity,
        2 => enumeration_oracles,
        3 => growth_envelope,
        4 => rationality_refutation,
        5 => square_catalog_check,
        6 => circular_lengths,
        7 => complexity_formulas,
        8 => difference_analysis,
        9 => kernel_route,
        10 => paperfolding,
        11 => interchange_harness,
        12 => determinism,
        _ => unreachable!("criteria are numbered 1 to 12"),
    }
}

/// Runs one criterion. Timings are left out so reports stay reproducible.
pub fn run_criterion(id: u8, ctx: &Context) -> ReportEnvelope {
    assert!((1..=12).contains(&id), "no criterion {id}");
    let (status, parameters, evidence) = match check_for(id)(ctx) {
        Ok(o) => (Status::from_bool(o.ok), o.parameters, o.evidence),
        Err(Error::Inconclusive(msg)) => {
            (Status::Inconclusive, Value::Null, json!({ "reason": msg }))
        }
        Err(e) => (Status::Fail, Value::Null, json!({ "error": e.to_string() })),
    };
    let mut report =
        ReportEnvelope::new(claim_id(id), status, evidence).param("profile", ctx.profile.name());
    if let Value::Object(map) = parameters {
        for (k, v) in map {
            report = report.param(&k, v);
        }
    }
    report
}

/// Runs a criterion and records its wall-clock time.
pub fn run_timed(id: u8, ctx: &Context) -> (ReportEnvelope, Duration) {
    let start = Instant::now();
    let r = run_criterion(id, ctx);
    (r, start.elapsed())
}

/// Criteria 1 to 11 in order.
pub fn run_core(ctx: &Context) -> Vec<ReportEnvelope> {
    (1..=11).map(|id| run_criterion(id, ctx)).collect()
}

fn ratio_string(r: Ratio<u64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn thue_morse_fidelity(_ctx: &Context) -> tmwords::Result<Outcome> {
    let expected = "0110100110010110";
    let generated = generate_word(&GenSpec::Tm, 16)?.to_string();
    let limit = 1usize << 16;
    let t = thue_morse_prefix(limit);
    let mut mismatches = Vec::new();
    for (n, &l) in t.iter().enumerate() {
        if l != tk_letter(n as u64, 2)? {
            mismatches.push(n);
        }
    }
    Ok(Outcome {
        ok: generated == expected && mismatches.is_empty(),
        parameters: json!({ "length": 16, "agreement_bound": limit }),
        evidence: json!({
            "generated": generated,
            "expected": expected,
            "definitions_compared": limit,
            "mismatches": mismatches,
        }),
    })
}

fn enumeration_oracles(_ctx: &Context) -> tmwords::Result<Outcome> {
    let max_n = 16;
    let dfs = count_overlap_free(max_n);
    let brute = count_overlap_free_exhaustive(max_n)?;
    let ok = dfs.values == brute.values && dfs.values[3] == 6 && dfs.values[4] == 10;
    Ok(Outcome {
        ok,
        parameters: json!({ "max_n": max_n }),
        evidence: json!({ "pruned_dfs": dfs.values, "exhaustive": brute.values }),
    })
}

fn growth_envelope(ctx: &Context) -> tmwords::Result<Outcome> {
    let (lo, hi) = (128, ctx.profile.pick(2048, 1024));
    let (bracket_lo, bracket_hi) = (1.1, 1.5);
    let values = overlap_free_counts(&ctx.cache, hi)?;
    let slope = growth_slope(&values, lo, hi)?;
    let points: Vec<Value> = (0..usize::BITS)
        .map(|e| 1usize << e)
        .filter(|&n| n >= lo && n <= hi)
        .map(|n| json!({ "n": n, "a_n": values[n] }))
        .collect();
    Ok(Outcome {
        ok: (bracket_lo..=bracket_hi).contains(&slope),
        parameters: json!({ "n_lo": lo, "n_hi": hi, "bracket": [bracket_lo, bracket_hi] }),
        evidence: json!({ "slope": format!("{slope:.6}"), "points": points }),
    })
}

fn rationality_refutation(ctx: &Context) -> tmwords::Result<Outcome> {
    let (a_terms, a_order) = (120, 10);
    let (p_terms, p_order) = (512, 16);
    let a = overlap_free_counts(&ctx.cache, a_terms - 1)?;
    let a_window = SequenceWindow::new(0, a.iter().map(|&v| v as i64).collect())?;
    let a_fit = guess_linear_recurrence(&a_window, a_order)?;

    let fib = Builtin::Fibonacci.window(&ctx.cache, 0, 60)?;
    let fib_fit = guess_linear_recurrence(&fib, a_order)?;
    let fib_coefficients = fib_fit.as_ref().map(|g| g.coefficient_strings());
    let fib_ok = fib_fit.as_ref().is_some_and(|g| g.order == 2)
        && fib_coefficients.as_deref() == Some(&["1".to_string(), "1".to_string()][..]);

    let pt = factor_profile(&ThueMorse, p_terms)?;
    let p_window = SequenceWindow::new(1, pt.values.iter().map(|&v| v as i64).collect())?;
    let p_fit = guess_linear_recurrence(&p_window, p_order)?;

    Ok(Outcome {
        ok: a_fit.is_none() && fib_ok && p_fit.is_none(),
        parameters: json!({
            "overlap_free": { "terms": a_terms, "max_order": a_order },
            "fibonacci": { "terms": 60, "max_order": a_order },
            "pt": { "terms": p_terms, "max_order": p_order },
        }),
        evidence: json!({
            "overlap_free_recurrence": a_fit.map(|g| g.coefficient_strings()),
            "fibonacci_recurrence": fib_coefficients,
            "pt_recurrence": p_fit.map(|g| g.coefficient_strings()),
        }),
    })
}

/// Squares of length at most `max_len` seen in Thue-Morse prefixes, doubling
/// the prefix until two consecutive scans agree.
fn stabilized_square_scan(max_len: usize) -> tmwords::Result<(BTreeSet<FiniteWord>, usize)> {
    let cap = 1 << 22;
    let mut len = tm_factor_scan_length(max_len);
    let mut prev = squares_occurring_in(&thue_morse_prefix(len), max_len);
    loop {
        len *= 2;
        if len > cap {
            return Err(Error::Inconclusive(format!(
                "square scan did not settle below prefix length {cap}"
            )));
        }
        let cur = squares_occurring_in(&thue_morse_prefix(len), max_len);
        if cur == prev {
            return Ok((cur, len));
        }
        prev = cur;
    }
}

fn square_catalog_check(ctx: &Context) -> tmwords::Result<Outcome> {
    let max_len = 24;
    let catalog = square_catalog(max_len)?.entries;
    let (scanned, settled_at) = stabilized_square_scan(max_len)?;
    let (prefix, max_half) = ctx.profile.pick((1 << 12, 1 << 9), (1 << 10, 1 << 7));
    let unique = unique_square_start(prefix, max_half)?;
    let names = |s: &BTreeSet<FiniteWord>| s.iter().map(|w| w.to_string()).collect::<Vec<_>>();
    Ok(Outcome {
        ok: catalog == scanned && unique,
        parameters: json!({ "max_length": max_len, "prefix_len": prefix, "max_half": max_half }),
        evidence: json!({
            "catalog": names(&catalog),
            "scan_settled_at": settled_at,
            "scan_only": names(&scanned.difference(&catalog).cloned().collect()),
            "catalog_only": names(&catalog.difference(&scanned).cloned().collect()),
            "unique_square_start": unique,
        }),
    })
}

fn circular_lengths(ctx: &Context) -> tmwords::Result<Outcome> {
    let max_n = ctx.profile.pick(48, 24);
    let report = circular_report(&ctx.cache, max_n)?;
    let expected: Vec<usize> = [1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48]
        .into_iter()
        .filter(|&n| n <= max_n)
        .collect();
    let examples_ok = report.support.iter().all(|n| {
        report.examples.get(n).is_some_and(|w| {
            w.parse::<FiniteWord>()
                .is_ok_and(|w| w.len() == *n && is_circular_overlap_free(&w))
        })
    });
    let counts = SequenceWindow::new(1, report.counts.iter().map(|&c| c as i64).collect())?;
    let gaps = support_and_gap_ratio(&counts, 2)?;
    let gap_ok = gaps.min_ratio >= Ratio::new(4, 3);
    Ok(Outcome {
        ok: report.support == expected && examples_ok && gap_ok,
        parameters: json!({ "max_n": max_n, "gap_from_index": 2, "min_ratio_required": "4/3" }),
        evidence: json!({
            "support": report.support,
            "expected_support": expected,
            "counts": report.counts,
            "examples": report.examples,
            "min_ratio": ratio_string(gaps.min_ratio),
        }),
    })
}

fn compare_table(
    values: &[u64],
    formula: impl Fn(u64) -> tmwords::Result<u64>,
) -> tmwords::Result<Vec<u64>> {
    let mut bad = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        let n = i as u64 + 1;
        if v != formula(n)? {
            bad.push(n);
        }
    }
    Ok(bad)
}

fn complexity_formulas(ctx: &Context) -> tmwords::Result<Outcome> {
    let (t_max, tk_max, eq_max) = ctx.profile.pick((512, 256, 1024), (128, 64, 1024));
    let t = factor_profile(&ThueMorse, t_max)?;
    let t_bad = compare_table(&t.values, |n| Ok(pt_formula(n)))?;
    let mut tk = serde_json::Map::new();
    let mut ok = t_bad.is_empty() && t.is_monotone_and_branching_bounded();
    for k in 2..=5u32 {
        let table = factor_profile(&GeneralizedThueMorse::new(k)?, tk_max)?;
        let bad = compare_table(&table.values, |n| ptk_formula(n, u64::from(k)))?;
        ok &= bad.is_empty() && table.is_monotone_and_branching_bounded();
        tk.insert(
            format!("tm{k}"),
            json!({ "mismatches": bad, "settled_at": table.settled_at }),
        );
    }
    let mut eq_bad = Vec::new();
    for n in 1..=eq_max as u64 {
        if ptk_formula(n, 2)? != pt_formula(n) {
            eq_bad.push(n);
        }
    }
    ok &= eq_bad.is_empty();
    Ok(Outcome {
        ok,
        parameters: json!({ "tm_max": t_max, "tmk_max": tk_max, "k": [2, 3, 4, 5], "identity_max": eq_max }),
        evidence: json!({
            "tm": { "mismatches": t_bad, "settled_at": t.settled_at },
            "tmk": tk,
            "ptk2_vs_pt_mismatches": eq_bad,
        }),
    })
}

fn difference_analysis(ctx: &Context) -> tmwords::Result<Outcome> {
    let (max_n, max_pre, max_per) = (1024, 128, 64);
    let delta = Builtin::DeltaPt.window(&ctx.cache, 0, max_n + 1)?;
    let period = detect_eventual_period(&delta, max_pre, max_per)?;
    let head = Builtin::DeltaPt.window(&ctx.cache, 0, 129)?;
    let run = max_run(&head, 4);
    let second = Builtin::Delta2Pt.window(&ctx.cache, 0, max_n + 1)?;
    let gaps = support_and_gap_ratio(&second, 1)?;
    Ok(Outcome {
        ok: period.is_none() && run >= 31 && gaps.min_ratio >= Ratio::new(4, 3),
        parameters: json!({
            "max_n": max_n, "max_preperiod": max_pre, "max_period": max_per,
            "run_window_max_n": 128, "run_value": 4, "gap_from_index": 1,
        }),
        evidence: json!({
            "eventual_period": period,
            "max_run_of_4": run,
            "second_difference_support": gaps.support,
            "min_ratio": ratio_string(gaps.min_ratio),
        }),
    })
}

fn kernel_route(ctx: &Context) -> tmwords::Result<Outcome> {
    let depth = 16;
    let (t_window, small, large) = ctx.profile.pick((4096, 2048, 4096), (1024, 512, 1024));
    let t = |n: u64| Builtin::Tm.eval(n).expect("closed form");
    let d = |n: u64| Builtin::DeltaPt.eval(n).expect("closed form");
    let tk = kernel_closure(&t, 2, depth, t_window)?;
    let dk_small = kernel_closure(&d, 2, depth, small)?;
    let dk_large = kernel_closure(&d, 2, depth, large)?;
    let closed = |a: &tmwords::series::KernelAutomaton| a.status == ClosureStatus::Closed;
    let ok = closed(&tk)
        && tk.class_count() == 2
        && closed(&dk_small)
        && closed(&dk_large)
        && dk_small.class_count() == dk_large.class_count();
    Ok(Outcome {
        ok,
        parameters: json!({ "base": 2, "depth_limit": depth, "tm_window": t_window, "delta_windows": [small, large] }),
        evidence: json!({
            "tm": { "classes": tk.class_count(), "status": tk.status },
            "delta_pt": {
                "classes": [dk_small.class_count(), dk_large.class_count()],
                "status": [dk_small.status, dk_large.status],
                "representatives": dk_large.classes,
                "transitions": dk_large.transitions,
            },
        }),
    })
}

fn paperfolding(ctx: &Context) -> tmwords::Result<Outcome> {
    let max_n = ctx.profile.pick(32, 16);
    let table = paperfolding_profile(max_n)?;
    let bad = compare_table(&table.values, |n| Ok(pf_formula(n)))?;
    let head: Vec<u64> = table.values.iter().take(7).copied().collect();
    Ok(Outcome {
        ok: bad.is_empty() && head == [2, 4, 8, 12, 20, 28, 40],
        parameters: json!({ "max_n": max_n }),
        evidence: json!({
            "values": table.values,
            "mismatches": bad,
            "settled_at_folds": table.settled_at,
        }),
    })
}

fn interchange_harness(_ctx: &Context) -> tmwords::Result<Outcome> {
    let one: BigRational = "1".parse().expect("rational literal");
    let minimal: Vec<bool> = (0..=3)
        .map(|k| {
            WitnessInstance::build(k)
                .map(|_| true)
                .or_else(|e| match e {
                    Error::Construction(_) => Ok(false),
                    e => Err(e),
                })
        })
        .collect::<tmwords::Result<_>>()?;
    let k1 = run_harness(1, &Split::all(witness_length(1)), &one)?;
    let k2 = run_harness(2, &Split::k2_sample(), &one)?;
    let k3 = contradiction_report(3, &one)?;
    let lower_expected: BigRational = format!("{}/{}", 1u64 << 32, 130 * 130)
        .parse()
        .expect("rational");
    let mut checks = serde_json::Map::new();
    let mut record = |name: &str, ok: bool| {
        checks.insert(name.to_string(), json!(ok));
        ok
    };
    let mut ok = record("witness_minimal_k0_to_k3", minimal.iter().all(|&m| m));
    for h in [&k1, &k2] {
        let r_len = build_r(h.k)?.len();
        let formula = fixed_middle_cap(h.k)?.pow(2);
        ok &= record(
            &format!("r_size_k{}", h.k),
            r_len == h.r_size && formula.to_string() == r_len.to_string(),
        );
        ok &= record(
            &format!("all_contain_overlap_k{}", h.k),
            h.all_contain_overlap,
        );
        ok &= record(
            &format!("psi_projection_k{}", h.k),
            h.psi_projects_to_witness,
        );
        ok &= record(&format!("swap_violations_none_k{}", h.k), h.swaps_clean());
        ok &= record(
            &format!("fixed_middle_within_bound_k{}", h.k),
            h.bound_holds(),
        );
    }
    ok &= record(
        "contradiction_k3_c1",
        k3.contradiction
            && k3.lower_bound == lower_expected
            && k3.upper_bound.to_string() == "65536",
    );
    Ok(Outcome {
        ok,
        parameters: json!({ "c": "1", "k1_splits": "all", "k2_splits": "fixed sample of 20" }),
        evidence: json!({
            "checks": checks,
            "k1": k1,
            "k2": k2,
            "k3_contradiction": {
                "lower": k3.lower_bound.to_string(),
                "upper": k3.upper_bound.to_string(),
                "holds": k3.contradiction,
                "threshold_k": k3.threshold_k,
            },
        }),
    })
}

/// Runs the quick profile of criteria 1 to 11 twice, once without a cache
/// on a single worker thread and once with the given cache on the default
/// pool, and compares the serialized reports byte for byte.
fn determinism(ctx: &Context) -> tmwords::Result<Outcome> {
    let quick = |cache: Cache| Context {
        profile: Profile::Quick,
        cache,
    };
    let serial = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| Error::Resource(e.to_string()))?;
    let a = serial.install(|| run_core(&quick(Cache::disabled())));
    let b = run_core(&quick(ctx.cache.clone()));
    let bytes = |rs: &[ReportEnvelope]| serde_json::to_vec(rs).expect("reports serialize");
    let identical = bytes(&a) == bytes(&b);
    let differing: Vec<String> = a
        .iter()
        .zip(&b)
        .filter(|(x, y)| serde_json::to_vec(x).ok() != serde_json::to_vec(y).ok())
        .map(|(x, _)| x.claim_id.clone())
        .collect();
    Ok(Outcome {
        ok: identical,
        parameters: json!({ "compared": ["no cache, one thread", "cache as configured, default pool"] }),
        evidence: json!({
            "identical": identical,
            "differing_claims": differing,
            "statuses": a.iter().map(|r| json!({ "claim_id": r.claim_id, "status": r.status })).collect::<Vec<_>>(),
        }),
    })
}
