use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use htiling::constructions::{
    build_construction, construction_edge_count, curve, curve_csv, refutation_scenarios,
    verify_construction_matching, xi, xi_blowup, ConstructionSpec, MatchingCheck, Verdict,
};
use htiling::graph::SmallGraph;
use htiling::patterns::PatternKind;
use htiling::simplex::{psi_star, psi_star_grid, to_decimal, Rational};
use htiling::tiling::{
    h_blowup_tiling, hhat_blowup_tiling, k2_blowup_tiling, lift_tiling, max_mixed_cover,
    max_tiling, SearchLimits, Tiling, TilingRecord, DEFAULT_NODE_BUDGET,
};
use htiling::verify::{
    verify_figure_fixtures, verify_lemma, LemmaId, Mode, VerificationReport,
    SCHEMA_VERSION,
};

#[derive(Parser)]
#[command(name = "htiling", version, about = "Tiling solvers and finite checks for packing H")]
struct Cli {
    /// Print machine-readable JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extremal density for the given fraction of copies.
    Xi {
        #[arg(long)]
        beta: String,
    },
    /// Density bound for blowups of H.
    XiBlowup {
        #[arg(long)]
        t: u64,
        #[arg(long)]
        beta: String,
    },
    /// Exact maximum of the simplex objective.
    PsiStar {
        #[arg(long)]
        alpha: String,
    },
    /// Compares the simplex maximum with the density formula on alpha = j/(6k), 0 <= j <= k.
    CheckPropOpt {
        #[arg(long, default_value_t = 30)]
        grid: u32,
        /// Lattice resolution of the independent grid lower bound.
        #[arg(long, default_value_t = 20)]
        oracle_steps: u32,
    },
    /// Maximum number of disjoint pattern copies in a graph.
    Nu {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value = "H", conflicts_with = "pattern_file")]
        pattern: String,
        /// Custom pattern in edge-list format.
        #[arg(long)]
        pattern_file: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Largest number of vertices covered by disjoint copies from several families.
    MixedCover {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, value_delimiter = ',', default_value = "K2,H,Hhat")]
        families: Vec<String>,
        #[arg(long)]
        target: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Writes an extremal construction in edge-list format.
    Construct {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Checks whether a construction has fewer than beta*n disjoint copies of H.
    VerifyConstruction {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Runs the fixed constructions, one of which has beta*n disjoint copies of H.
    RefutationDemo {
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Boundary verification of a pairwise edge bound.
    VerifyLemma {
        #[arg(long)]
        id: String,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, default_value_t = 100_000)]
        count: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Report destination, written atomically.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validates the explicit perfect tilings of blowups.
    VerifyEmbeddings {
        #[arg(long, default_value_t = 12)]
        t_max: usize,
    },
    /// Validates the decomposition fixtures.
    Fixtures,
    /// Samples the density formula on a range as CSV.
    Curve {
        #[arg(long, default_value = "0")]
        from: String,
        #[arg(long, default_value = "1/6")]
        to: String,
        #[arg(long, default_value_t = 30)]
        steps: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct GraphArg {
    /// Edge-list file, or `-` for stdin.
    #[arg(long)]
    graph: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    BipartiteLower,
    Planted,
}

#[derive(clap::Args)]
struct SpecArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    beta: String,
    /// Threshold for the planted construction.
    #[arg(long, default_value_t = 1)]
    i: usize,
    #[arg(long, value_delimiter = ',', default_value = "3,3")]
    sizes: Vec<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 3,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn parse_rational(s: &str) -> Result<Rational> {
    if s.contains(['.', 'e', 'E']) {
        bail!("{s:?}: rationals are written p/q; decimals are not accepted");
    }
    s.trim()
        .parse::<Rational>()
        .with_context(|| format!("{s:?} is not a rational p/q"))
}

fn read_graph(source: &str) -> Result<SmallGraph> {
    let text = if source == "-" {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        fs::read_to_string(source).with_context(|| format!("reading {source}"))?
    };
    Ok(SmallGraph::parse_edge_list(&text).with_context(|| format!("parsing {source}"))?)
}

/// Writes via a temporary file in the same directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().context("output path has no file name")?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    fs::write(&tmp, contents).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming to {}", path.display()))?;
    Ok(())
}

fn emit(json: bool, value: Value, human: impl FnOnce() -> String) -> Result<()> {
    let mut out = io::stdout().lock();
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?;
    } else {
        write!(out, "{}", human())?;
    }
    Ok(())
}

fn spec_from(args: &SpecArgs) -> Result<ConstructionSpec> {
    let beta = parse_rational(&args.beta)?;
    Ok(match args.kind {
        KindArg::BipartiteLower => ConstructionSpec::bipartite_lower(args.n, beta),
        KindArg::Planted => ConstructionSpec::planted(args.i, args.sizes.clone(), args.n, beta),
    })
}

fn matching_json(c: &MatchingCheck) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "spec": c.spec,
        "nu": c.nu,
        "beta_n": c.beta_n.to_string(),
        "exact": c.exact,
        "holds": c.holds(),
        "verdict": c.verdict,
    })
}

fn verdict_status(v: &Verdict) -> Status {
    match v {
        Verdict::Holds => Status::Pass,
        Verdict::Fails => Status::Fail,
        Verdict::Inconclusive => Status::Inconclusive,
    }
}

fn run(cli: &Cli) -> Result<Status> {
    let json = cli.json;
    match &cli.command {
        Command::Xi { beta } => {
            let b = parse_rational(beta)?;
            let v = xi(&b)?;
            emit(
                json,
                json!({"schema_version": SCHEMA_VERSION, "beta": b.to_string(), "xi": v.to_string()}),
                || format!("xi({b}) = {v} ~ {}\n", to_decimal(&v, 12)),
            )?;
        }
        Command::XiBlowup { t, beta } => {
            if *t == 0 {
                bail!("--t must be positive");
            }
            let b = parse_rational(beta)?;
            let v = xi_blowup(*t, &b)?;
            emit(
                json,
                json!({"schema_version": SCHEMA_VERSION, "t": t, "beta": b.to_string(), "xi": v.to_string()}),
                || format!("xi_blowup(t={t}, {b}) = {v} ~ {}\n", to_decimal(&v, 12)),
            )?;
        }
        Command::PsiStar { alpha } => {
            let a = parse_rational(alpha)?;
            let (v, point) = psi_star(&a)?;
            let y: Vec<String> = point.y.iter().map(|x| x.to_string()).collect();
            emit(
                json,
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "alpha": a.to_string(),
                    "value": v.to_string(),
                    "decimal": to_decimal(&v, 12),
                    "argmax": y,
                }),
                || format!("psi*({a}) = {v} ~ {}\nargmax y = ({})\n", to_decimal(&v, 12), y.join(", ")),
            )?;
        }
        Command::CheckPropOpt { grid, oracle_steps } => {
            if *grid == 0 || *oracle_steps == 0 {
                bail!("--grid and --oracle-steps must be positive");
            }
            let mut rows = Vec::new();
            let mut all_ok = true;
            for j in 0..=*grid {
                let a = Rational::new(j.into(), (6 * grid).into());
                let (star, _) = psi_star(&a)?;
                let formula = xi(&a)?;
                let lower = psi_star_grid(&a, *oracle_steps)?;
                let ok = star == formula && lower <= star;
                all_ok &= ok;
                rows.push((a, star, formula, lower, ok));
            }
            let table: Vec<Value> = rows
                .iter()
                .map(|(a, s, f, l, ok)| {
                    json!({"alpha": a.to_string(), "psi_star": s.to_string(), "xi": f.to_string(),
                           "grid_lower_bound": l.to_string(), "pass": ok})
                })
                .collect();
            emit(
                json,
                json!({"schema_version": SCHEMA_VERSION, "rows": table, "pass": all_ok}),
                || {
                    let mut s = format!("{:>8} {:>14} {:>14} {:>6}\n", "alpha", "psi_star", "xi", "result");
                    for (a, st, f, _, ok) in &rows {
                        s += &format!("{:>8} {:>14} {:>14} {:>6}\n", a.to_string(), st.to_string(), f.to_string(), if *ok { "PASS" } else { "FAIL" });
                    }
                    s
                },
            )?;
            return Ok(if all_ok { Status::Pass } else { Status::Fail });
        }
        Command::Nu { graph, pattern, pattern_file, budget } => {
            let kind = match pattern_file {
                Some(p) => PatternKind::Custom(read_graph(&p.to_string_lossy())?),
                None => PatternKind::from_name(pattern)?,
            };
            let host = read_graph(&graph.graph)?;
            let r = max_tiling(&kind, &host, *budget);
            r.witness.validate(&host).context("internal error: invalid witness")?;
            emit(
                json,
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "pattern": kind.name(),
                    "nu": r.count,
                    "exact": r.exact,
                    "witness": TilingRecord::from(&r.witness),
                }),
                || format!("nu = {}{}\n", r.count, if r.exact { " (exact)" } else { " (lower bound, budget exhausted)" }),
            )?;
            return Ok(if r.exact { Status::Pass } else { Status::Inconclusive });
        }
        Command::MixedCover { graph, families, target, budget } => {
            let kinds = families
                .iter()
                .map(|f| PatternKind::from_name(f.trim()))
                .collect::<Result<Vec<_>, _>>()?;
            let host = read_graph(&graph.graph)?;
            let limits = SearchLimits { target: *target, ..SearchLimits::with_budget(*budget) };
            let r = max_mixed_cover(&kinds, &host, limits)?;
            let exact = r.exact || r.reached_target;
            emit(
                json,
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "families": kinds.iter().map(|k| k.name()).collect::<Vec<_>>(),
                    "coverage": r.coverage,
                    "exact": r.exact,
                    "reached_target": r.reached_target,
                    "witness": TilingRecord::from(&r.witness),
                }),
                || format!("coverage = {} with {} members{}\n", r.coverage, r.witness.len(),
                    if r.reached_target { " (target reached)" } else if r.exact { " (exact)" } else { " (lower bound)" }),
            )?;
            return Ok(if exact { Status::Pass } else { Status::Inconclusive });
        }
        Command::Construct { spec, out } => {
            let spec = spec_from(spec)?;
            let g = build_construction(&spec)?;
            let text = g.to_edge_list();
            match out {
                Some(path) => write_atomic(path, &text)?,
                None => io::stdout().lock().write_all(text.as_bytes())?,
            }
            let expected = construction_edge_count(&spec)?;
            if expected != g.edge_count().into() {
                bail!("edge count {} differs from closed form {expected}", g.edge_count());
            }
        }
        Command::VerifyConstruction { spec, budget } => {
            let spec = spec_from(spec)?;
            let c = verify_construction_matching(&spec, *budget)?;
            emit(json, matching_json(&c), || {
                format!("nu = {}{}, beta*n = {}: {:?}\n", c.nu, if c.exact { "" } else { " (lower bound)" }, c.beta_n, c.verdict)
            })?;
            return Ok(verdict_status(&c.verdict));
        }
        Command::RefutationDemo { budget } => {
            let mut results = Vec::new();
            let mut status = Status::Pass;
            for (spec, expected) in refutation_scenarios() {
                let c = verify_construction_matching(&spec, *budget)?;
                if c.verdict == Verdict::Inconclusive {
                    status = Status::Inconclusive;
                } else if c.verdict != expected && status == Status::Pass {
                    status = Status::Fail;
                }
                results.push((c, expected));
            }
            let scenarios: Vec<Value> = results
                .iter()
                .map(|(c, e)| {
                    let mut v = matching_json(c);
                    v["expected"] = json!(e);
                    v
                })
                .collect();
            emit(
                json,
                json!({"schema_version": SCHEMA_VERSION, "scenarios": scenarios, "pass": status == Status::Pass}),
                || {
                    let mut s = String::new();
                    for (c, e) in &results {
                        s += &format!("{}: nu = {}, beta*n = {}, holds = {} (expected {:?})\n",
                            serde_json::to_string(&c.spec).unwrap_or_default(), c.nu, c.beta_n, c.holds(), e);
                    }
                    s
                },
            )?;
            return Ok(status);
        }
        Command::VerifyLemma { id, mode, count, seed, jobs, out } => {
            let lemma = LemmaId::parse(id)?;
            let mode = match mode {
                ModeArg::Exhaustive => {
                    if lemma != LemmaId::L51 {
                        bail!("exhaustive mode is only available for L51; use --mode sampled");
                    }
                    Mode::Exhaustive
                }
                ModeArg::Sampled => {
                    if *count == 0 {
                        bail!("--count must be positive");
                    }
                    Mode::Sampled { count: *count, seed: *seed }
                }
            };
            if *jobs == 0 {
                bail!("--jobs must be positive");
            }
            let last = Mutex::new(Instant::now());
            let progress = |done: u64, total: u64| {
                let mut last = last.lock().expect("progress lock");
                if last.elapsed() >= Duration::from_secs(1) || done == total {
                    *last = Instant::now();
                    eprintln!("progress: {done}/{total}");
                }
            };
            let report = verify_lemma(lemma, mode, *jobs, Some(&progress))?;
            let text = serde_json::to_string_pretty(&report)?;
            if let Some(path) = out {
                write_atomic(path, &(text.clone() + "\n"))?;
            }
            emit(json, serde_json::from_str(&text)?, || lemma_summary(&report))?;
            return Ok(match report.verdict.as_str() {
                "pass" => Status::Pass,
                "fail" => Status::Fail,
                _ => Status::Inconclusive,
            });
        }
        Command::VerifyEmbeddings { t_max } => {
            return verify_embeddings(json, *t_max);
        }
        Command::Fixtures => {
            let report = verify_figure_fixtures()?;
            emit(json, serde_json::to_value(&report)?, || {
                let mut s = String::new();
                for f in &report.fixtures {
                    s += &format!("{:<36} valid={} cover={} extendable={}\n", f.key, f.valid, f.cover, f.extendable);
                }
                let n = &report.negative_control;
                s += &format!("negative control ({} without {}): validation failed = {}\n", n.key, n.removed_edge, n.member_validation_failed);
                s += &format!("verdict: {}\n", report.verdict);
                s
            })?;
            return Ok(if report.verdict == "pass" { Status::Pass } else { Status::Fail });
        }
        Command::Curve { from, to, steps, out } => {
            let rows = curve(&parse_rational(from)?, &parse_rational(to)?, *steps)?;
            let csv = curve_csv(&rows);
            match out {
                Some(path) => write_atomic(path, &csv)?,
                None => io::stdout().lock().write_all(csv.as_bytes())?,
            }
        }
    }
    Ok(Status::Pass)
}

fn lemma_summary(r: &VerificationReport) -> String {
    let mut s = format!(
        "{} ({}, {} cross edges): checked {}, failures {}, undecided {}, {} ms\n",
        r.lemma, r.mode, r.cross_edges_checked, r.checked, r.failure_count, r.undecided, r.elapsed_ms
    );
    for c in &r.l_configs {
        s += &format!("  L_i={:?} L_j={:?}: {} checked, {} failures\n", c.l_i, c.l_j, c.checked, c.failures);
    }
    for f in r.failures.iter().take(10) {
        s += &format!("  counterexample bip={} L_i={:?} L_j={:?}\n", f.bip_hex, f.l_i, f.l_j);
    }
    s += &format!("verdict: {}\n", r.verdict);
    s
}

fn tiling_from_rows(kind: PatternKind, rows: &[[usize; 6]]) -> Tiling {
    Tiling::new(
        rows.iter()
            .map(|r| htiling::patterns::Embedding::new(kind.clone(), r.to_vec()))
            .collect(),
    )
}

fn verify_embeddings(json: bool, t_max: usize) -> Result<Status> {
    if t_max == 0 {
        bail!("--t-max must be positive");
    }
    let mut checks: Vec<(String, usize, usize, bool)> = Vec::new();
    let mut check = |name: String, tiling: &Tiling, host: &SmallGraph, expected: usize| {
        let ok = tiling.validate(host).is_ok() && tiling.len() == expected;
        checks.push((name, tiling.len(), expected, ok));
    };
    let k2 = SmallGraph::complete(2)?.blowup(6)?;
    check("K2[6]".into(), &tiling_from_rows(PatternKind::H, &k2_blowup_tiling()), &k2, 2);
    let h6 = PatternKind::H.graph().blowup(6)?;
    check("H[6]".into(), &tiling_from_rows(PatternKind::H, &h_blowup_tiling()), &h6, 6);
    for t in 1..=t_max {
        let host = PatternKind::Hhat.graph().blowup(t)?;
        let tiling = hhat_blowup_tiling(t)?;
        check(format!("Hhat[{t}]"), &tiling, &host, t / 2 + 4 * (t / 6));
    }
    let hhat = PatternKind::Hhat.graph();
    let one = Tiling::new(vec![htiling::patterns::Embedding::new(PatternKind::Hhat, (0..7).collect())]);
    let lifted = lift_tiling(&one, &hhat)?;
    check("lift(Hhat)".into(), &lifted, &hhat.blowup(6)?, 7);
    let pass = checks.iter().all(|c| c.3);
    emit(
        json,
        json!({
            "schema_version": SCHEMA_VERSION,
            "checks": checks.iter().map(|(n, got, want, ok)| json!({"host": n, "copies": got, "expected": want, "pass": ok})).collect::<Vec<_>>(),
            "pass": pass,
        }),
        || {
            let mut s = String::new();
            for (n, got, want, ok) in &checks {
                s += &format!("{n:<12} copies={got:<3} expected={want:<3} {}\n", if *ok { "PASS" } else { "FAIL" });
            }
            s
        },
    )?;
    Ok(if pass { Status::Pass } else { Status::Fail })
}
