//! Command surface of the `ringforge` binary.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::dsl::{self, DslError, RingExpr};
use crate::properties::{replay, Backend, PropertyKind};
use crate::report::{analyze, parse_elements, AnalyzeOptions, PropertyReport};
use crate::search::{self, RunOptions, SearchConfig, SearchError, Shard};
use crate::verify::{builtin_corpus, load_manifest, statement_audit, verify_generated_map};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_AUDIT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ringforge", version, about = "Finite ring workbench")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structure and all nine properties of a ring.
    Analyze {
        expr: String,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value = "auto")]
        backend: Backend,
        /// Add per-stage timings to the report.
        #[arg(long)]
        timings: bool,
        /// Skip the idempotent non-reversibility shortcut.
        #[arg(long)]
        no_shortcut: bool,
    },
    /// One property; `--replay` instead re-checks a witness tuple.
    Check {
        expr: String,
        property: PropertyKind,
        #[arg(long, default_value = "auto")]
        backend: Backend,
        /// Exit with status 1 when the verdict differs.
        #[arg(long)]
        expect: Option<bool>,
        /// Comma-separated witness elements, e.g. "u*v, v*u, u".
        #[arg(long)]
        replay: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Checks that generator images define an isomorphism onto a target.
    Iso {
        presentation: String,
        target: String,
        /// Comma-separated images of the generators, in the target.
        #[arg(long)]
        images: String,
        #[arg(long)]
        json: bool,
    },
    /// Statement audit over a corpus manifest (the shipped one by default).
    Audit {
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Runs or resumes one shard of a presentation search.
    Search {
        #[arg(long)]
        config: PathBuf,
        /// Zero-based shard `i/k`.
        #[arg(long)]
        shard: Option<Shard>,
        #[arg(long)]
        resume: bool,
        /// Output directory; defaults to `<config>.out` beside the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Merge `k` finished shards instead of running.
        #[arg(long, value_name = "K")]
        merge: Option<u64>,
        #[arg(long)]
        json: bool,
    },
}

/// Error text, with a caret under the offending column for parse errors.
pub fn render_dsl_error(input: &str, err: &DslError) -> String {
    match err {
        DslError::Parse(e) => {
            format!("error: {e}\n  {input}\n  {}^", " ".repeat(input[..e.pos.min(input.len())].chars().count()))
        }
        other => format!("error: {other}"),
    }
}

fn fail(err: &mut dyn Write, msg: impl std::fmt::Display) -> i32 {
    let _ = writeln!(err, "{msg}");
    EXIT_ERROR
}

/// Dispatches a parsed command line; returns the process exit status.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match cli.command {
        Command::Analyze { expr, json, backend, timings, no_shortcut } => {
            let opts = AnalyzeOptions { backend, timings, shortcut: !no_shortcut };
            match analyze(&expr, &opts) {
                Ok(r) => {
                    let _ = write!(out, "{}", if json { r.to_json() + "\n" } else { r.to_table() });
                    EXIT_OK
                }
                Err(e) => fail(err, render_dsl_error(&expr, &e)),
            }
        }
        Command::Check { expr, property, backend, expect, replay: witness, json } => {
            let built = match dsl::build(&expr) {
                Ok(b) => b,
                Err(e) => return fail(err, render_dsl_error(&expr, &e)),
            };
            if let Some(text) = witness {
                let elems = match parse_elements(&built, &text) {
                    Ok(e) => e,
                    Err(e) => return fail(err, render_dsl_error(&text, &e)),
                };
                let ok = replay(&built.ring, property, &elems);
                let _ = writeln!(out, "witness {} {property}", if ok { "violates" } else { "does not violate" });
                return if ok { EXIT_OK } else { EXIT_FALSE };
            }
            let res = match crate::properties::check(&built.ring, property, backend) {
                Ok(r) => r,
                Err(e) => return fail(err, format!("error: {e}")),
            };
            let rep = PropertyReport::new(&built.ring, &res);
            if json {
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&rep).expect("serializable"));
            } else {
                let _ = write!(out, "{property}: {} [{}]", rep.holds, rep.backend);
                if let Some(w) = &rep.witness {
                    let _ = write!(out, "  witness ({})", w.labels.join("; "));
                }
                let _ = writeln!(out);
            }
            match expect {
                Some(want) if want != rep.holds => EXIT_FALSE,
                _ => EXIT_OK,
            }
        }
        Command::Iso { presentation, target, images, json } => iso(&presentation, &target, &images, json, out, err),
        Command::Audit { corpus, json } => {
            let rings = match &corpus {
                Some(path) => load_manifest(path),
                None => builtin_corpus(),
            };
            let rings = match rings {
                Ok(r) => r,
                Err(e) => return fail(err, format!("error: {e}")),
            };
            match statement_audit(&rings) {
                Ok(report) => {
                    let _ = write!(out, "{}", if json { report.to_json() + "\n" } else { report.to_table() });
                    if report.has_failures() {
                        EXIT_AUDIT
                    } else {
                        EXIT_OK
                    }
                }
                Err(e) => fail(err, format!("error: {e}")),
            }
        }
        Command::Search { config, shard, resume, out: dir, merge, json } => {
            match search_command(&config, shard, resume, dir, merge, json, out) {
                Ok(code) => code,
                Err(e) => fail(err, format!("error: {e}")),
            }
        }
    }
}

fn iso(presentation: &str, target: &str, images: &str, json: bool, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let pres = match dsl::parse_ring_expr(presentation) {
        Ok(RingExpr::FreeQuotient { p, gens, relations }) => {
            match dsl::presentation(p, &gens, &relations, crate::construct::n_max_from_env()) {
                Ok(pres) => pres,
                Err(e) => return fail(err, render_dsl_error(presentation, &e)),
            }
        }
        Ok(_) => return fail(err, "error: the source must be a presentation F<p><gens>/(relations)"),
        Err(e) => return fail(err, render_dsl_error(presentation, &e.into())),
    };
    let built = match dsl::build(target) {
        Ok(b) => b,
        Err(e) => return fail(err, render_dsl_error(target, &e)),
    };
    let elems = match parse_elements(&built, images) {
        Ok(e) => e,
        Err(e) => return fail(err, render_dsl_error(images, &e)),
    };
    let report = match verify_generated_map(&pres, &built.ring, &elems) {
        Ok(r) => r,
        Err(e) => return fail(err, format!("error: {e}")),
    };
    if json {
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("serializable"));
    } else {
        for r in &report.relations {
            let _ = writeln!(out, "relation {:<40} {}", r.relation, if r.holds { "vanishes" } else { "FAILS" });
        }
        let _ = writeln!(out, "image size     {} of {}", report.image_size, report.target_order);
        let source = match (&report.source_order, &report.source_error) {
            (Some(n), _) => n.to_string(),
            (None, Some(e)) => format!("unknown ({e})"),
            (None, None) => "unknown".into(),
        };
        let _ = writeln!(out, "source order   {source}");
        let _ = writeln!(out, "surjective     {}", report.is_surjective);
        let _ = writeln!(out, "isomorphism    {}", report.is_isomorphism);
    }
    if report.is_isomorphism {
        EXIT_OK
    } else {
        EXIT_FALSE
    }
}

fn default_out_dir(config: &Path) -> PathBuf {
    let mut name = config.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".out");
    config.with_file_name(name)
}

fn search_command(
    config: &Path,
    shard: Option<Shard>,
    resume: bool,
    dir: Option<PathBuf>,
    merge: Option<u64>,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, SearchError> {
    let cfg = SearchConfig::load(config)?;
    let dir = dir.unwrap_or_else(|| default_out_dir(config));
    let print_summary = |out: &mut dyn Write,
                         findings: &[search::Finding],
                         stats: &search::Stats|
     -> Result<(), SearchError> {
        let summary = search::summarize(&cfg, findings, stats)?;
        let _ = write!(
            out,
            "{}",
            if json { serde_json::to_string_pretty(&summary).expect("serializable") + "\n" } else { summary.to_text() }
        );
        Ok(())
    };
    if let Some(k) = merge {
        let (findings, stats) = search::merge_shards(&cfg, &dir, k)?;
        let path = dir.join("merged.findings.jsonl");
        search::write_findings(&path, &findings)?;
        let _ = writeln!(out, "merged {k} shards into {}", path.display());
        print_summary(out, &findings, &stats)?;
        return Ok(EXIT_OK);
    }
    let mut opts = RunOptions::new(&dir);
    opts.shard = shard.unwrap_or(Shard::WHOLE);
    opts.resume = resume;
    let report = search::run_shard(&cfg, &opts)?;
    let cp = &report.checkpoint;
    let _ = writeln!(
        out,
        "shard {} [{}, {}): {} candidates, {} findings, {:.1} s -> {}",
        cp.shard,
        cp.start,
        cp.end,
        cp.stats.candidates,
        report.findings.len(),
        report.elapsed.as_secs_f64(),
        report.findings_path.display()
    );
    if cp.shard.count == 1 && cp.complete() {
        print_summary(out, &report.findings, &cp.stats)?;
    }
    Ok(EXIT_OK)
}
