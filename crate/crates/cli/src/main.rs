use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use privcache::construct::dual::dualize;
use privcache::construct::mn::{build_mn, build_trivial, TrivialMode};
use privcache::construct::pda::{build_from_pda, Pda};
use privcache::construct::private::{build_partial_private, privatize, subpack_comparison};
use privcache::construct::table1::build_table1;
use privcache::construct::timeshare::time_share;
use privcache::construct::tradeoff::tradeoff_curve;
use privcache::json::{deserialize_scheme, serialize_scheme};
use privcache::rational::{self, Rational};
use privcache::search::{search_sub2, search_sub3_uncoded, SearchOptions, SearchReport};
use privcache::verify::{privacy_report, rate_and_memory, verify_correctness, weak_privacy_check};
use privcache::{PrivacyReport, Scheme, Violation};

#[derive(Parser)]
#[command(name = "privcache", version, about = "Build, verify and search demand-private coded caching schemes")]
struct Cli {
    /// Output format for reports (scheme documents are always JSON).
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a scheme and write its JSON document.
    Build {
        #[command(subcommand)]
        kind: BuildKind,
        /// Write to this file instead of standard output.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Check decodability and privacy of a scheme document.
    Verify {
        /// Scheme JSON path, or `-` for standard input.
        #[arg(long)]
        scheme: String,
        #[arg(long, value_enum, default_value_t = PrivacyMode::Exact)]
        privacy: PrivacyMode,
        /// Required ambiguity for `--privacy ambiguity` (defaults to N).
        #[arg(long)]
        level: Option<usize>,
    },
    /// Run an exhaustive impossibility search.
    Search {
        #[arg(value_enum)]
        which: SearchKind,
        /// Drop the privacy-derived condition (control run).
        #[arg(long)]
        no_privacy_condition: bool,
        /// Only caches with two subfiles of one file and one of the other (sub3-uncoded).
        #[arg(long)]
        structural_only: bool,
        #[arg(long)]
        threads: Option<usize>,
        /// Report the running candidate count on standard error.
        #[arg(long)]
        progress: bool,
    },
    /// Achievable private (M, R) vertices.
    Tradeoff {
        #[arg(long, default_value_t = 2)]
        files: usize,
        #[arg(long, default_value_t = 2)]
        users: usize,
    },
    /// Subpacketization under full privacy versus ambiguity level L.
    CompareSubpack {
        #[arg(long)]
        files: usize,
        #[arg(long)]
        users: usize,
        #[arg(long, value_parser = parse_rational)]
        memory: Rational,
        #[arg(long)]
        level: usize,
    },
}

#[derive(Subcommand)]
enum BuildKind {
    /// Maddah-Ali–Niesen scheme with parameter t.
    Mn {
        #[arg(long)]
        users: usize,
        #[arg(long)]
        files: usize,
        #[arg(long)]
        t: usize,
    },
    /// Scheme induced by a placement delivery array text file.
    Pda {
        #[arg(long)]
        file: String,
        #[arg(long)]
        files: usize,
    },
    /// The private (2, 2; 1, 2/3) scheme with three subfiles.
    Table1,
    Trivial {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        files: usize,
        #[arg(long)]
        users: usize,
    },
    /// Private scheme from a non-private one with N*K users.
    Private {
        #[arg(long)]
        from: String,
    },
    /// Partially private scheme with ambiguity level L.
    Partial {
        #[arg(long)]
        from: String,
        #[arg(long)]
        level: usize,
    },
    Dual {
        #[arg(long)]
        from: String,
    },
    Timeshare {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, value_parser = parse_rational)]
        alpha: Rational,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Empty,
    Full,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum PrivacyMode {
    Exact,
    Ambiguity,
    Weak,
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchKind {
    Sub2,
    Sub3Uncoded,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    rational::parse(s).ok_or_else(|| format!("expected p/q or an integer, got {s:?}"))
}

fn read_input(path: &str) -> Result<String> {
    let mut text = String::new();
    if path == "-" {
        io::stdin().read_to_string(&mut text).context("reading standard input")?;
    } else {
        text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    }
    Ok(text)
}

fn load_scheme(path: &str) -> Result<Scheme> {
    let text = read_input(path)?;
    deserialize_scheme(&text).with_context(|| format!("loading scheme from {path}"))
}

/// Tabular view of a report: one header row plus data rows.
trait Tabular {
    fn header(&self) -> Vec<&'static str>;
    fn rows(&self) -> Vec<Vec<String>>;
}

fn render<T: Serialize + Tabular>(value: &T, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(value)? + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(value.header())?;
            for row in value.rows() {
                w.write_record(row)?;
            }
            String::from_utf8(w.into_inner()?)?
        }
        Format::Table => {
            let header: Vec<String> = value.header().iter().map(|s| s.to_string()).collect();
            let rows = value.rows();
            let widths: Vec<usize> = (0..header.len())
                .map(|c| rows.iter().map(|r| r[c].len()).chain([header[c].len()]).max().unwrap_or(0))
                .collect();
            let mut out = String::new();
            for row in std::iter::once(&header).chain(&rows) {
                let cells: Vec<String> = row.iter().zip(&widths).map(|(s, &w)| format!("{s:<w$}")).collect();
                out.push_str(cells.join("  ").trim_end());
                out.push('\n');
            }
            out
        }
    })
}

fn key_values(pairs: Vec<(&str, String)>) -> Vec<Vec<String>> {
    pairs.into_iter().map(|(k, v)| vec![k.to_string(), v]).collect()
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct VerifyReport {
    provenance: String,
    users: usize,
    files: usize,
    subpack: usize,
    #[serde(with = "rational")]
    memory: Rational,
    #[serde(with = "rational")]
    rate: Rational,
    correct: bool,
    privacy_mode: PrivacyMode,
    private: bool,
    violations: Vec<Violation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    privacy: Option<PrivacyReport>,
}

impl Tabular for VerifyReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["field", "value"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let mut kv = vec![
            ("provenance", self.provenance.clone()),
            ("users", self.users.to_string()),
            ("files", self.files.to_string()),
            ("subpack", self.subpack.to_string()),
            ("memory", rational::format(&self.memory)),
            ("rate", rational::format(&self.rate)),
            ("correct", self.correct.to_string()),
            ("private", self.private.to_string()),
            ("violations", self.violations.len().to_string()),
        ];
        if let Some(p) = &self.privacy {
            kv.push(("max_mutual_info_bits", p.max_mutual_info_bits.to_string()));
            kv.push(("max_posterior", rational::format(&p.max_posterior)));
            kv.push(("min_ambiguity", p.min_ambiguity.to_string()));
        }
        key_values(kv)
    }
}

impl Tabular for SearchReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["field", "value"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let mut rows = key_values(vec![
            ("search", self.search.clone()),
            ("privacy_condition", self.privacy_condition.to_string()),
            ("candidates_examined", self.candidates_examined.to_string()),
            ("feasible_found", self.feasible_found.to_string()),
        ]);
        rows.extend(self.sub_lemma_checks.iter().map(|(k, v)| vec![format!("check:{k}"), v.to_string()]));
        rows.extend(self.counts.iter().map(|(k, v)| vec![format!("count:{k}"), v.to_string()]));
        rows
    }
}

#[derive(Serialize)]
struct Curve(Vec<privcache::RatePoint>);

impl Tabular for Curve {
    fn header(&self) -> Vec<&'static str> {
        vec!["memory", "rate", "label"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.0
            .iter()
            .map(|p| vec![rational::format(&p.memory), rational::format(&p.rate), p.label.clone()])
            .collect()
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SubpackComparison {
    files: usize,
    users: usize,
    #[serde(with = "rational")]
    memory: Rational,
    level: usize,
    full_privacy_subpack: u128,
    partial_privacy_subpack: u128,
}

impl Tabular for SubpackComparison {
    fn header(&self) -> Vec<&'static str> {
        vec!["files", "users", "memory", "level", "full_privacy_subpack", "partial_privacy_subpack"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.files.to_string(),
            self.users.to_string(),
            rational::format(&self.memory),
            self.level.to_string(),
            self.full_privacy_subpack.to_string(),
            self.partial_privacy_subpack.to_string(),
        ]]
    }
}

fn build(kind: BuildKind) -> Result<Scheme> {
    Ok(match kind {
        BuildKind::Mn { users, files, t } => build_mn(users, files, t)?,
        BuildKind::Pda { file, files } => {
            let pda: Pda = read_input(&file)?.parse().with_context(|| format!("parsing {file}"))?;
            build_from_pda(&pda, files)?
        }
        BuildKind::Table1 => build_table1(),
        BuildKind::Trivial { mode, files, users } => {
            let mode = match mode {
                Mode::Empty => TrivialMode::EmptyCache,
                Mode::Full => TrivialMode::FullCache,
            };
            build_trivial(files, users, mode)?
        }
        BuildKind::Private { from } => privatize(&load_scheme(&from)?)?,
        BuildKind::Partial { from, level } => build_partial_private(&load_scheme(&from)?, level)?,
        BuildKind::Dual { from } => dualize(&load_scheme(&from)?)?,
        BuildKind::Timeshare { a, b, alpha } => {
            if a == "-" && b == "-" {
                bail!("at most one of --a and --b can read standard input");
            }
            time_share(&load_scheme(&a)?, &load_scheme(&b)?, alpha)?
        }
    })
}

fn verify(path: &str, mode: PrivacyMode, level: Option<usize>) -> Result<(VerifyReport, bool)> {
    let s = load_scheme(path)?;
    let p = s.params();
    let (memory, rate) = rate_and_memory(&s);
    let mut violations = verify_correctness(&s);
    let correct = violations.is_empty();
    let (private, privacy) = match mode {
        PrivacyMode::Weak => {
            let leaks = weak_privacy_check(&s);
            let ok = leaks.is_empty();
            violations.extend(leaks);
            (ok, None)
        }
        PrivacyMode::Exact | PrivacyMode::Ambiguity => {
            let report = privacy_report(&s)?;
            let ok = match mode {
                PrivacyMode::Exact => report.exact_private,
                _ => report.min_ambiguity >= level.unwrap_or(p.files),
            };
            (ok, Some(report))
        }
    };
    let report = VerifyReport {
        provenance: s.provenance().to_string(),
        users: p.users,
        files: p.files,
        subpack: p.subpack,
        memory,
        rate,
        correct,
        privacy_mode: mode,
        private,
        violations,
        privacy,
    };
    Ok((report, correct && private))
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => io::stdout().write_all(text.as_bytes()).context("writing standard output"),
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let format = cli.format;
    match cli.command {
        Command::Build { kind, out } => {
            let s = build(kind)?;
            emit(out.as_ref(), &serialize_scheme(&s))?;
        }
        Command::Verify { scheme, privacy, level } => {
            let (report, ok) = verify(&scheme, privacy, level)?;
            emit(None, &render(&report, format)?)?;
            if !ok {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Search { which, no_privacy_condition, structural_only, threads, progress } => {
            let cb = |n: u64| eprintln!("candidates examined: {n}");
            let opts = SearchOptions {
                privacy_condition: !no_privacy_condition,
                structural_only,
                threads,
                progress: if progress { Some(&cb) } else { None },
            };
            let report = match which {
                SearchKind::Sub2 => search_sub2(&opts),
                SearchKind::Sub3Uncoded => search_sub3_uncoded(&opts),
            };
            emit(None, &render(&report, format)?)?;
        }
        Command::Tradeoff { files, users } => {
            if (files, users) != (2, 2) {
                bail!("the trade-off curve is available for 2 files and 2 users only");
            }
            emit(None, &render(&Curve(tradeoff_curve()?), format)?)?;
        }
        Command::CompareSubpack { files, users, memory, level } => {
            let (full, partial) = subpack_comparison(files, users, memory, level)?;
            let cmp = SubpackComparison {
                files,
                users,
                memory,
                level,
                full_privacy_subpack: full,
                partial_privacy_subpack: partial,
            };
            emit(None, &render(&cmp, format)?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
