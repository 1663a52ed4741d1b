//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::{BigRational, Ratio};
use serde_json::{json, Value};

use tmwords::avoidance::{find_overlap, find_squares};
use tmwords::complexity::{
    factor_profile, paperfolding_profile, pf_formula, pt_formula, ptk_formula,
    GeneralizedThueMorse, ThueMorse, FOLD_CAP, PREFIX_CAP,
};
use tmwords::interchange::{
    contradiction_report, run_harness, witness_length, ContradictionSummary, Split,
    WitnessInstance, MAX_R_K,
};
use tmwords::series::{
    detect_eventual_period, differences, guess_linear_recurrence, is_lacunary, kernel_closure,
    max_run, support_and_gap_ratio, ClosureStatus, SequenceWindow,
};
use tmwords::word::{
    conjugates, paperfolding_prefix, thue_morse_prefix, tk_prefix, FiniteWord, InstructionSequence,
};
use tmwords::Error;

use crate::cache::Cache;
use crate::report::{emit, Format, ReportEnvelope, Status, Table};
use crate::sequences::{circular_report, overlap_free_counts, Builtin};
use crate::suite::{self, Context, Profile};

pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "tmwords",
    version,
    about = "Thue-Morse words, overlap avoidance and subword complexity"
)]
pub struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<FormatArg>,
    /// Ignore and do not write the sequence cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
    Text,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Text => Format::Text,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print a prefix of a word.
    Generate {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Test a word for overlaps, squares, or circular overlaps.
    Avoid {
        #[arg(value_enum)]
        kind: AvoidKind,
        word: String,
    },
    /// Count overlap-free or circularly overlap-free binary words.
    Enum {
        #[command(subcommand)]
        what: EnumKind,
    },
    /// Subword complexity tables.
    Complexity {
        #[command(subcommand)]
        family: ComplexityFamily,
    },
    /// Analyses of integer sequence windows.
    Series(SeriesArgs),
    /// Breadth-first closure of a k-kernel.
    Kernel {
        #[arg(long)]
        builtin: Builtin,
        #[arg(long, default_value_t = 2)]
        base: u64,
        #[arg(long, default_value_t = 1024)]
        window: usize,
        #[arg(long, default_value_t = 16)]
        depth: u32,
    },
    /// The swap and counting checks behind the ternary overlap argument.
    Interchange {
        #[arg(long)]
        k: u32,
        /// Lemma constant, as an integer or p/q.
        #[arg(long, default_value = "1")]
        c: String,
    },
    /// Run every acceptance check.
    VerifyAll {
        /// Reduced parameters.
        #[arg(long)]
        quick: bool,
        /// Add wall-clock times to the reports.
        #[arg(long)]
        timings: bool,
    },
    /// Inspect or empty the sequence cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum GenFamily {
    /// The Thue-Morse word.
    Tm {
        #[arg(long)]
        length: usize,
    },
    /// n -> s2(n) mod k.
    Tmk {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        length: usize,
    },
    /// The paperfolding word for a binary instruction string.
    Paperfolding {
        #[arg(long)]
        instructions: String,
        /// Defaults to the whole word.
        #[arg(long)]
        length: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum AvoidKind {
    Overlap,
    Square,
    Circular,
}

#[derive(Subcommand, Debug)]
pub enum EnumKind {
    OverlapFree {
        #[arg(long)]
        max: usize,
    },
    Circular {
        #[arg(long)]
        max: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum ComplexityFamily {
    Tm {
        #[arg(long)]
        max: usize,
        #[arg(long)]
        check_formula: bool,
    },
    Tmk {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        max: usize,
        #[arg(long)]
        check_formula: bool,
    },
    Paperfolding {
        #[arg(long)]
        max: usize,
        #[arg(long)]
        check_formula: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SeriesAnalysis {
    Diff,
    Period,
    Run,
    Recurrence,
    Gaps,
}

#[derive(Args, Debug)]
pub struct SeriesArgs {
    #[arg(value_enum)]
    pub analysis: SeriesAnalysis,
    /// One integer per line, or `n,value` lines.
    #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub builtin: Option<Builtin>,
    /// Window length for builtin sequences.
    #[arg(long, default_value_t = 256)]
    pub len: usize,
    /// First index of the window.
    #[arg(long)]
    pub offset: Option<usize>,
    /// Difference order.
    #[arg(long, default_value_t = 1)]
    pub order: usize,
    #[arg(long, default_value_t = 16)]
    pub max_pre: usize,
    #[arg(long, default_value_t = 16)]
    pub max_per: usize,
    /// Value whose longest run is measured.
    #[arg(long, allow_hyphen_values = true)]
    pub value: Option<i64>,
    #[arg(long, default_value_t = 8)]
    pub max_order: usize,
    /// First index considered for gap ratios.
    #[arg(long, default_value_t = 1)]
    pub from: usize,
}

#[derive(Subcommand, Debug)]
pub enum CacheAction {
    Clear,
    Stat,
}

/// Why a command produced no report.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cache: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(Error::Parameter(_) | Error::Domain(_) | Error::Resource(_)) => {
                EXIT_USAGE
            }
            CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}

/// Which word `generate` and the fidelity check produce.
pub enum GenSpec {
    Tm,
    Tmk(u32),
    Paperfolding(InstructionSequence),
}

pub fn generate_word(spec: &GenSpec, length: usize) -> tmwords::Result<FiniteWord> {
    match spec {
        GenSpec::Tm => Ok(thue_morse_prefix(length)),
        GenSpec::Tmk(k) => {
            let alphabet = u8::try_from(*k)
                .ok()
                .filter(|&a| a <= tmwords::word::MAX_ALPHABET)
                .ok_or_else(|| {
                    Error::Parameter(format!(
                        "k = {k} needs more than {} letters to print as a word",
                        tmwords::word::MAX_ALPHABET
                    ))
                })?;
            FiniteWord::new(tk_prefix(*k, length)?, alphabet.max(2))
        }
        GenSpec::Paperfolding(instr) => {
            let w = paperfolding_prefix(instr);
            if length > w.len() {
                return Err(Error::Parameter(format!(
                    "{} instructions give {} letters, fewer than {length}",
                    instr.len(),
                    w.len()
                )));
            }
            Ok(w.factor(0, length))
        }
    }
}

fn generate(family: &GenFamily) -> Result<ReportEnvelope, CliError> {
    let (spec, length, id) = match family {
        GenFamily::Tm { length } => (GenSpec::Tm, *length, "tm".to_string()),
        GenFamily::Tmk { k, length } => (GenSpec::Tmk(*k), *length, format!("tm{k}")),
        GenFamily::Paperfolding {
            instructions,
            length,
        } => {
            let instr: InstructionSequence = instructions.parse()?;
            let full = (1usize << instr.len()) - 1;
            (
                GenSpec::Paperfolding(instr),
                length.unwrap_or(full),
                "paperfolding".to_string(),
            )
        }
    };
    let word = generate_word(&spec, length)?;
    let text = word.to_string();
    let mut report = ReportEnvelope::new(
        format!("generate-{id}"),
        Status::Pass,
        json!({ "word": text }),
    )
    .param("family", &id)
    .param("length", length);
    if let GenFamily::Paperfolding { instructions, .. } = family {
        report = report.param("instructions", instructions);
    }
    let mut table = Table::new(&["n", "letter"]);
    for (i, l) in word.iter().enumerate() {
        table.push(vec![i.to_string(), l.to_string()]);
    }
    Ok(report.with_table(table).with_text(text))
}

fn parse_word(s: &str) -> Result<FiniteWord, CliError> {
    s.parse::<FiniteWord>()
        .map_err(|e| CliError::Usage(format!("bad word '{s}': {e}")))
}

fn avoid(kind: AvoidKind, word: &str) -> Result<ReportEnvelope, CliError> {
    let w = parse_word(word)?;
    let report = match kind {
        AvoidKind::Overlap => {
            let overlap = find_overlap(&w);
            ReportEnvelope::new(
                "avoid-overlap",
                Status::from_bool(overlap.is_none()),
                json!({ "word": word, "overlap": overlap }),
            )
        }
        AvoidKind::Square => {
            let squares = find_squares(&w);
            ReportEnvelope::new(
                "avoid-square",
                Status::from_bool(squares.is_empty()),
                json!({ "word": word, "squares": squares }),
            )
        }
        AvoidKind::Circular => {
            let witness = conjugates(&w)
                .iter()
                .enumerate()
                .find_map(|(shift, c)| find_overlap(c).map(|o| (shift, c.to_string(), o)));
            let evidence = match &witness {
                None => json!({ "word": word, "conjugate": null, "overlap": null }),
                Some((shift, c, o)) => {
                    json!({ "word": word, "conjugate": { "shift": shift, "word": c }, "overlap": o })
                }
            };
            ReportEnvelope::new(
                "avoid-circular",
                Status::from_bool(witness.is_none()),
                evidence,
            )
        }
    };
    Ok(report.param("word", word))
}

fn enumerate(what: &EnumKind, cache: &Cache) -> Result<ReportEnvelope, CliError> {
    match what {
        EnumKind::OverlapFree { max } => {
            let values = overlap_free_counts(cache, *max)?;
            let signed: Vec<i64> = values.iter().map(|&v| v as i64).collect();
            Ok(ReportEnvelope::new(
                "enum-overlap-free",
                Status::Pass,
                json!({ "method": "pruned-dfs", "values": values }),
            )
            .param("max", max)
            .with_table(Table::sequence(0, &signed, "a_n")))
        }
        EnumKind::Circular { max } => {
            let report = circular_report(cache, *max)?;
            let signed: Vec<i64> = report.counts.iter().map(|&v| v as i64).collect();
            Ok(ReportEnvelope::new(
                "enum-circular",
                Status::Pass,
                json!({ "support": report.support, "counts": report.counts, "examples": report.examples }),
            )
            .param("max", max)
            .with_table(Table::sequence(1, &signed, "c_n")))
        }
    }
}

type Formula = Box<dyn Fn(u64) -> tmwords::Result<u64>>;

fn complexity(family: &ComplexityFamily) -> Result<ReportEnvelope, CliError> {
    let (id, max, check, table, formula): (String, usize, bool, _, Formula) = match family {
        ComplexityFamily::Tm { max, check_formula } => (
            "tm".into(),
            *max,
            *check_formula,
            factor_profile(&ThueMorse, *max),
            Box::new(|n| Ok(pt_formula(n))),
        ),
        ComplexityFamily::Tmk {
            k,
            max,
            check_formula,
        } => {
            let source = GeneralizedThueMorse::new(*k)?;
            let k = u64::from(*k);
            (
                format!("tm{k}"),
                *max,
                *check_formula,
                factor_profile(&source, *max),
                Box::new(move |n| ptk_formula(n, k)),
            )
        }
        ComplexityFamily::Paperfolding { max, check_formula } => (
            "paperfolding".into(),
            *max,
            *check_formula,
            paperfolding_profile(*max),
            Box::new(|n| Ok(pf_formula(n))),
        ),
    };
    let table = match table {
        Ok(t) => t,
        Err(Error::Inconclusive(reason)) => return Ok(ReportEnvelope::new(
            format!("complexity-{id}"),
            Status::Inconclusive,
            json!({ "reason": reason, "caps": { "prefix_cap": PREFIX_CAP, "fold_cap": FOLD_CAP } }),
        )
        .param("family", &id)
        .param("max", max)),
        Err(e) => return Err(e.into()),
    };
    let mut csv = Table::new(&["n", "p_brute", "p_formula", "match"]);
    let mut mismatches = Vec::new();
    for (i, &p) in table.values.iter().enumerate() {
        let n = i as u64 + 1;
        let f = formula(n)?;
        if f != p {
            mismatches.push(n);
        }
        csv.push(vec![
            n.to_string(),
            p.to_string(),
            f.to_string(),
            (f == p).to_string(),
        ]);
    }
    let status = Status::from_bool(!check || mismatches.is_empty());
    Ok(ReportEnvelope::new(
        format!("complexity-{id}"),
        status,
        json!({
            "values": table.values,
            "settled_at": table.settled_at,
            "mismatches": mismatches,
            "monotone_and_branching_bounded": table.is_monotone_and_branching_bounded(),
        }),
    )
    .param("family", &id)
    .param("max", max)
    .param("check_formula", check)
    .with_table(csv))
}

/// Reads one integer per line, or `n,value` lines; blank lines, `#`
/// comments and a non-numeric header line are skipped.
pub fn read_sequence_file(
    path: &PathBuf,
    offset: Option<usize>,
) -> Result<SequenceWindow, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut first_index = None;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed = match fields.as_slice() {
            [v] => v.parse::<i64>().map(|v| (None, v)).ok(),
            [n, v] => match (n.parse::<usize>(), v.parse::<i64>()) {
                (Ok(n), Ok(v)) => Some((Some(n), v)),
                _ => None,
            },
            _ => None,
        };
        match parsed {
            Some((n, v)) => {
                if values.is_empty() {
                    first_index = n;
                }
                values.push(v);
            }
            None if values.is_empty() && first_index.is_none() && lineno == 0 => continue,
            None => {
                return Err(CliError::Usage(format!(
                    "{}:{}: expected an integer or n,value",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    if values.is_empty() {
        return Err(CliError::Usage(format!(
            "{} holds no values",
            path.display()
        )));
    }
    Ok(SequenceWindow::new(
        offset.or(first_index).unwrap_or(0),
        values,
    )?)
}

fn series(args: &SeriesArgs, cache: &Cache) -> Result<ReportEnvelope, CliError> {
    let (sequence_id, window) = match (&args.input, args.builtin) {
        (Some(path), _) => (
            path.display().to_string(),
            read_sequence_file(path, args.offset)?,
        ),
        (None, Some(b)) => (
            b.name().to_string(),
            b.window(cache, args.offset.unwrap_or(b.default_offset()), args.len)?,
        ),
        (None, None) => {
            return Err(CliError::Usage(
                "give --input FILE or --builtin NAME".into(),
            ))
        }
    };
    let evidence_window = json!({ "offset": window.offset, "len": window.len() });
    let (analysis, parameters, result, table) = match args.analysis {
        SeriesAnalysis::Diff => {
            let d = differences(&window, args.order)?;
            let table = Table::sequence(d.offset, &d.values, "value");
            (
                "diff",
                json!({ "order": args.order }),
                json!(d.values),
                Some(table),
            )
        }
        SeriesAnalysis::Period => {
            let p = detect_eventual_period(&window, args.max_pre, args.max_per)?;
            let result = p.map(|g| {
                json!({ "preperiod": g.preperiod, "period": g.period, "from_index": window.offset + g.preperiod })
            });
            (
                "period",
                json!({ "max_pre": args.max_pre, "max_per": args.max_per }),
                json!(result),
                None,
            )
        }
        SeriesAnalysis::Run => {
            let value = args
                .value
                .ok_or_else(|| CliError::Usage("run needs --value".into()))?;
            (
                "run",
                json!({ "value": value }),
                json!({ "max_run": max_run(&window, value) }),
                None,
            )
        }
        SeriesAnalysis::Recurrence => {
            let g = guess_linear_recurrence(&window, args.max_order)?;
            let result =
                g.map(|g| json!({ "order": g.order, "coefficients": g.coefficient_strings() }));
            (
                "recurrence",
                json!({ "max_order": args.max_order }),
                json!(result),
                None,
            )
        }
        SeriesAnalysis::Gaps => {
            let g = support_and_gap_ratio(&window, args.from)?;
            let ratio: Ratio<u64> = g.min_ratio;
            (
                "gaps",
                json!({ "from": args.from }),
                json!({
                    "support": g.support,
                    "min_ratio": format!("{}/{}", ratio.numer(), ratio.denom()),
                    "lacunary": is_lacunary(&g),
                }),
                None,
            )
        }
    };
    let mut report = ReportEnvelope::new(
        format!("series-{analysis}"),
        Status::Pass,
        json!({
            "sequence_id": sequence_id,
            "analysis": analysis,
            "parameters": parameters,
            "result": result,
            "evidence_window": evidence_window,
        }),
    )
    .param("sequence", &sequence_id)
    .param("analysis", analysis);
    if let Value::Object(map) = parameters {
        for (k, v) in map {
            report = report.param(&k, v);
        }
    }
    if let Some(t) = table {
        report = report.with_table(t);
    }
    Ok(report)
}

fn kernel(
    builtin: Builtin,
    base: u64,
    window: usize,
    depth: u32,
) -> Result<ReportEnvelope, CliError> {
    if builtin.eval(0).is_none() {
        return Err(CliError::Usage(format!(
            "{builtin} has no closed form to sample; choose another sequence"
        )));
    }
    let overflow = std::sync::atomic::AtomicBool::new(false);
    let s = |n: u64| {
        builtin.eval(n).unwrap_or_else(|| {
            overflow.store(true, std::sync::atomic::Ordering::Relaxed);
            0
        })
    };
    let guess = kernel_closure(&s, base, depth, window)?;
    let recheck = kernel_closure(&s, base, depth, 2 * window)?;
    if overflow.load(std::sync::atomic::Ordering::Relaxed) {
        return Err(
            Error::Resource(format!("{builtin} overflows within the sampled range")).into(),
        );
    }
    let stable = guess.status == ClosureStatus::Closed
        && recheck.status == ClosureStatus::Closed
        && guess.class_count() == recheck.class_count();
    let status = if stable {
        Status::Pass
    } else {
        Status::Inconclusive
    };
    Ok(ReportEnvelope::new(
        "kernel",
        status,
        json!({
            "classes": guess.class_count(),
            "classes_at_double_window": recheck.class_count(),
            "status": guess.status,
            "status_at_double_window": recheck.status,
            "representatives": guess.classes,
            "transitions": guess.transitions,
        }),
    )
    .param("builtin", builtin.name())
    .param("base", base)
    .param("window", window)
    .param("depth_limit", depth))
}

fn interchange(k: u32, c: &str) -> Result<ReportEnvelope, CliError> {
    let c: BigRational = c
        .parse()
        .map_err(|e| CliError::Usage(format!("bad rational '{c}': {e}")))?;
    let report = if (1..=MAX_R_K).contains(&k) {
        let splits = if k == 1 {
            Split::all(witness_length(1))
        } else {
            Split::k2_sample()
        };
        let h = run_harness(k, &splits, &c)?;
        let ok = h.all_contain_overlap
            && h.psi_projects_to_witness
            && h.swaps_clean()
            && h.bound_holds();
        ReportEnvelope::new(
            "interchange",
            Status::from_bool(ok),
            serde_json::to_value(&h).expect("serializes"),
        )
    } else {
        let witness = WitnessInstance::build(k)?;
        let summary = ContradictionSummary::from(&contradiction_report(k, &c)?);
        ReportEnvelope::new(
            "interchange",
            Status::Pass,
            json!({
                "k": k,
                "n": witness.n,
                "R_size": tmwords::interchange::r_size_formula(k).to_string(),
                "splits_tested": 0,
                "pairs_tested": 0,
                "violations": [],
                "fixed_middle_max": null,
                "bound": tmwords::interchange::fixed_middle_cap(k)?.to_string(),
                "contradiction": summary,
            }),
        )
    };
    Ok(report.param("k", k).param("c", c.to_string()))
}

fn verify_all(quick: bool, timings: bool, cache: Cache) -> ReportEnvelope {
    let ctx = Context {
        profile: if quick { Profile::Quick } else { Profile::Full },
        cache,
    };
    let reports: Vec<ReportEnvelope> = (1..=12)
        .map(|id| {
            let (mut r, elapsed) = suite::run_timed(id, &ctx);
            if timings {
                r.elapsed_ms = Some(elapsed.as_millis() as u64);
            }
            r
        })
        .collect();
    let status = Status::combine(reports.iter().map(|r| r.status));
    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    let mut table = Table::new(&["claim_id", "status"]);
    for r in &reports {
        table.push(vec![
            r.claim_id.clone(),
            serde_json::to_value(r.status)
                .expect("status")
                .as_str()
                .expect("string")
                .to_string(),
        ]);
    }
    ReportEnvelope::new(
        "verify-all",
        status,
        json!({
            "summary": { "pass": count(Status::Pass), "fail": count(Status::Fail), "inconclusive": count(Status::Inconclusive) },
            "reports": reports,
        }),
    )
    .param("profile", ctx.profile.name())
    .with_table(table)
}

fn cache_command(action: &CacheAction, cache: &Cache) -> Result<ReportEnvelope, CliError> {
    match action {
        CacheAction::Stat => Ok(ReportEnvelope::new(
            "cache-stat",
            Status::Pass,
            serde_json::to_value(cache.stat()?).expect("serializes"),
        )),
        CacheAction::Clear => {
            let removed = cache.clear()?;
            Ok(ReportEnvelope::new(
                "cache-clear",
                Status::Pass,
                json!({ "removed": removed }),
            ))
        }
    }
}

/// Parses `args` (program name first), runs the command, prints its report
/// and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    // `cache clear/stat` act on the configured directory even with --no-cache
    let configured = Cache::from_env();
    let cache = if cli.no_cache {
        Cache::disabled()
    } else {
        configured.clone()
    };
    let default_format = match &cli.command {
        Command::Generate { .. } => Format::Text,
        Command::Complexity { .. } | Command::Enum { .. } => Format::Csv,
        _ => Format::Json,
    };
    let format = cli.format.map(Format::from).unwrap_or(default_format);
    let result = match &cli.command {
        Command::Generate { family } => generate(family),
        Command::Avoid { kind, word } => avoid(*kind, word),
        Command::Enum { what } => enumerate(what, &cache),
        Command::Complexity { family } => complexity(family),
        Command::Series(args) => series(args, &cache),
        Command::Kernel {
            builtin,
            base,
            window,
            depth,
        } => kernel(*builtin, *base, *window, *depth),
        Command::Interchange { k, c } => interchange(*k, c),
        Command::VerifyAll { quick, timings } => Ok(verify_all(*quick, *timings, cache)),
        Command::Cache { action } => cache_command(action, &configured),
    };
    let report = match result {
        Ok(r) => r,
        Err(CliError::Core(Error::Inconclusive(reason))) => ReportEnvelope::new(
            "inconclusive",
            Status::Inconclusive,
            json!({ "reason": reason }),
        ),
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    match emit(&report, format) {
        Ok(text) => {
            print!("{text}");
            report.status.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
