use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use signreg::exactmat::{format_matrix, parse_matrix};
use signreg::generators::{
    construct_ssr, generate, GeneratorSpec, PatternSearch, ScaleTarget, DEFAULT_SEARCH_ATTEMPTS,
    DEFAULT_SEARCH_BOUND,
};
use signreg::harness::{self, Fault, HarnessConfig};
use signreg::preserver::{decide, find_witness, Outcome, Regime};
use signreg::scalar::int;
use signreg::vdp::{sign_vectors, vd_check};
use signreg::{
    classify, Error, MatrixSpaceMap, Mode, Rational, RationalMatrix, SignPattern, TransformChain,
};

#[derive(Parser)]
#[command(
    name = "signreg",
    version,
    about = "Exact sign-regularity classification and preserver checks"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    JsonLines,
}

#[derive(Subcommand)]
enum Command {
    /// Report the SSR/SR order and sign pattern of a matrix.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
        /// Exit 1 unless the matrix is SSR up to the examined order.
        #[arg(long)]
        strict: bool,
        /// Examine orders 1..=k only.
        #[arg(long)]
        order: Option<usize>,
    },
    /// Apply a transform chain to a matrix.
    Apply {
        /// Comma-separated tokens, e.g. "rowflip,transpose".
        #[arg(long)]
        chain: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether an operator preserves a sign-regularity class.
    Factor {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_parser = parse_mode)]
        mode: Mode,
        /// Sign pattern such as "+,-" (pattern modes only).
        #[arg(long, value_parser = parse_pattern)]
        pattern: Option<SignPattern>,
    },
    /// Produce a test matrix.
    Generate {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Shape such as 4x4.
        #[arg(long, value_parser = parse_shape)]
        shape: (usize, usize),
        #[arg(long, value_parser = parse_pattern)]
        pattern: Option<SignPattern>,
        /// Vandermonde nodes, comma-separated, one per row.
        #[arg(long)]
        nodes: Option<String>,
        /// Gadget target: entry:i,j | row:i | col:j (1-based).
        #[arg(long, value_parser = parse_target)]
        target: Option<ScaleTarget>,
        /// Gadget scale factor.
        #[arg(long, default_value = "2")]
        c: String,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BOUND)]
        bound: i64,
        #[arg(long, default_value_t = DEFAULT_SEARCH_ATTEMPTS)]
        attempts: u64,
        /// Accept SR(eps) hits in pattern search instead of SSR(eps).
        #[arg(long)]
        non_strict: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find a matrix showing an operator is not a preserver.
    Witness {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_parser = parse_mode)]
        mode: Mode,
        #[arg(long, value_parser = parse_pattern)]
        pattern: Option<SignPattern>,
    },
    /// Check variation diminution for an SSR matrix.
    Vd {
        #[arg(long = "in")]
        input: PathBuf,
        /// Test every nonzero vector in {-1,0,1}^n.
        #[arg(long, required_unless_present = "x")]
        exhaustive_signs: bool,
        /// A single vector to test, comma-separated.
        #[arg(long)]
        x: Option<String>,
    },
    /// Run all property suites.
    VerifyTheorems {
        /// Shapes: a range like 2x2..4x4 or a list like 2x3,3x3.
        #[arg(long, default_value = "2x2..4x4")]
        shapes: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 10)]
        chains: usize,
        /// Deliberately break an invariant to check the harness.
        #[arg(long, value_enum)]
        inject_fault: Option<FaultArg>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Pascal,
    Vandermonde,
    Gadget,
    Pattern,
    Ssr,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    PushforwardSign,
}

/// Failure that maps to exit status 2.
#[derive(Debug)]
struct UsageError(String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<bool, UsageError>;

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_pattern(s: &str) -> Result<SignPattern, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_shape(s: &str) -> Result<(usize, usize), String> {
    let (m, n) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("shape '{s}' is not of the form MxN"))?;
    let dim = |t: &str| match t.trim().parse::<usize>() {
        Ok(d) if d > 0 => Ok(d),
        _ => Err(format!("bad dimension '{t}' in shape '{s}'")),
    };
    Ok((dim(m)?, dim(n)?))
}

fn parse_target(s: &str) -> Result<ScaleTarget, String> {
    let bad = || format!("target '{s}' is not entry:i,j, row:i or col:j");
    let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
    let idx = |t: &str| match t.trim().parse::<usize>() {
        Ok(d) if d > 0 => Ok(d - 1),
        _ => Err(bad()),
    };
    match kind {
        "entry" => {
            let (i, j) = rest.split_once(',').ok_or_else(bad)?;
            Ok(ScaleTarget::Entry(idx(i)?, idx(j)?))
        }
        "row" => Ok(ScaleTarget::Row(idx(rest)?)),
        "col" => Ok(ScaleTarget::Col(idx(rest)?)),
        _ => Err(bad()),
    }
}

fn parse_shapes(s: &str) -> Result<Vec<(usize, usize)>, UsageError> {
    if let Some((lo, hi)) = s.split_once("..") {
        let (a, b) = parse_shape(lo).map_err(UsageError)?;
        let (c, d) = parse_shape(hi).map_err(UsageError)?;
        let shapes: Vec<_> = (a..=c).flat_map(|m| (b..=d).map(move |n| (m, n))).collect();
        if shapes.is_empty() {
            return Err(UsageError(format!("empty shape range '{s}'")));
        }
        Ok(shapes)
    } else {
        s.split(',')
            .map(|t| parse_shape(t).map_err(UsageError))
            .collect()
    }
}

fn parse_scalars(s: &str) -> Result<Vec<Rational>, UsageError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<Rational>()
                .map_err(|_| UsageError(format!("'{t}' is not a rational number")))
        })
        .collect()
}

fn read(path: &Path) -> Result<String, UsageError> {
    fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn read_matrix(path: &Path) -> Result<RationalMatrix, UsageError> {
    parse_matrix(&read(path)?).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn read_map(path: &Path) -> Result<MatrixSpaceMap<Rational>, UsageError> {
    MatrixSpaceMap::parse(&read(path)?).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn write_matrix(path: &Path, a: &RationalMatrix) -> Result<(), UsageError> {
    fs::write(path, format_matrix(a)).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn matrix_json(a: &RationalMatrix) -> Value {
    Value::Array(
        (0..a.rows())
            .map(|i| {
                Value::Array(
                    a.row(i)
                        .iter()
                        .map(|x| Value::String(x.to_string()))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn vector_json(x: &[Rational]) -> Value {
    Value::Array(x.iter().map(|v| Value::String(v.to_string())).collect())
}

struct Out {
    format: Format,
}

impl Out {
    fn emit(&self, human: impl FnOnce() -> String, json: impl FnOnce() -> Value) {
        match self.format {
            Format::Human => println!("{}", human()),
            Format::JsonLines => println!("{}", json()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let out = Out { format: cli.format };
    match run(cli.command, cli.seed, &out) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("signreg: error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, seed: u64, out: &Out) -> CmdResult {
    match command {
        Command::Classify {
            input,
            strict,
            order,
        } => cmd_classify(&input, strict, order, out),
        Command::Apply {
            chain,
            input,
            out: path,
        } => cmd_apply(&chain, &input, path.as_deref(), out),
        Command::Factor {
            input,
            mode,
            pattern,
        } => cmd_factor(&input, mode, pattern.as_ref(), out),
        Command::Generate {
            kind,
            shape,
            pattern,
            nodes,
            target,
            c,
            bound,
            attempts,
            non_strict,
            out: path,
        } => {
            let spec = GenerateArgs {
                kind,
                shape,
                pattern,
                nodes,
                target,
                c,
                bound,
                attempts,
                strict: !non_strict,
                seed,
            };
            cmd_generate(spec, path.as_deref(), out)
        }
        Command::Witness {
            input,
            mode,
            pattern,
        } => cmd_witness(&input, mode, pattern.as_ref(), out),
        Command::Vd {
            input,
            exhaustive_signs,
            x,
        } => cmd_vd(&input, exhaustive_signs, x.as_deref(), out),
        Command::VerifyTheorems {
            shapes,
            samples,
            chains,
            inject_fault,
        } => {
            let cfg = HarnessConfig {
                shapes: parse_shapes(&shapes)?,
                samples,
                chains_per_matrix: chains,
                seed,
                fault: inject_fault.map(|FaultArg::PushforwardSign| Fault::PushforwardSign),
            };
            cmd_verify(&cfg, out)
        }
    }
}

fn cmd_classify(input: &Path, strict: bool, order: Option<usize>, out: &Out) -> CmdResult {
    let a = read_matrix(input)?;
    let k = order.unwrap_or(a.min_dim());
    let c = classify(&a, k)?;
    out.emit(
        || c.to_string(),
        || {
            json!({
                "command": "classify",
                "label": c.label(),
                "strict_order": c.strict_order,
                "regular_order": c.regular_order,
                "pattern": c.pattern.to_string(),
            })
        },
    );
    Ok(!strict || c.strict_order >= k)
}

fn cmd_apply(chain: &str, input: &Path, path: Option<&Path>, out: &Out) -> CmdResult {
    let a = read_matrix(input)?;
    let chain = TransformChain::parse(a.shape(), chain)?;
    let b = chain.apply(&a)?;
    if let Some(path) = path {
        write_matrix(path, &b)?;
    }
    out.emit(
        || format_matrix(&b).trim_end().to_string(),
        || json!({"command": "apply", "chain": chain.to_string(), "matrix": matrix_json(&b)}),
    );
    Ok(true)
}

fn minors_json(minors: &[(signreg::MinorIndex, Rational)]) -> Value {
    Value::Array(
        minors
            .iter()
            .map(|(idx, v)| {
                json!({
                    "rows": idx.rows().iter().map(|r| r + 1).collect::<Vec<_>>(),
                    "cols": idx.cols().iter().map(|c| c + 1).collect::<Vec<_>>(),
                    "value": v.to_string(),
                })
            })
            .collect(),
    )
}

fn witness_report(
    w: &signreg::preserver::Witness<Rational>,
    mode: Mode,
    eps: Option<&SignPattern>,
) -> (String, Value) {
    let minors = w.offending_minors(mode, eps);
    let mut human = format!("witness ({}, {}):\n{}", w.direction, w.family, w.matrix);
    if let Some(image) = &w.image {
        human.push_str(&format!("\nimage:\n{image}"));
    }
    for (idx, v) in &minors {
        human.push_str(&format!("\nminor {idx} = {v}"));
    }
    let json = json!({
        "direction": w.direction.to_string(),
        "family": w.family,
        "matrix": matrix_json(&w.matrix),
        "image": w.image.as_ref().map(matrix_json),
        "minors": minors_json(&minors),
    });
    (human, json)
}

fn cmd_factor(input: &Path, mode: Mode, eps: Option<&SignPattern>, out: &Out) -> CmdResult {
    let map = read_map(input)?;
    let v = signreg::factor_preserver(&map, mode, eps)?;
    let regime = v.regime.name();
    match &v.outcome {
        Outcome::Preserver(f) => {
            out.emit(
                || format!("preserver ({mode}, {regime} regime): {f}"),
                || {
                    json!({
                        "command": "factor",
                        "mode": mode.name(),
                        "regime": regime,
                        "preserver": true,
                        "factorization": f.to_string(),
                    })
                },
            );
            Ok(true)
        }
        Outcome::NotPreserver { reason, witness } => {
            let (human, wj) = witness_report(witness, mode, eps);
            out.emit(
                || format!("not a preserver ({mode}, {regime} regime): {reason}\n{human}"),
                || {
                    json!({
                        "command": "factor",
                        "mode": mode.name(),
                        "regime": regime,
                        "preserver": false,
                        "reason": reason.to_string(),
                        "witness": wj,
                    })
                },
            );
            Ok(false)
        }
    }
}

fn cmd_witness(input: &Path, mode: Mode, eps: Option<&SignPattern>, out: &Out) -> CmdResult {
    let map = read_map(input)?;
    signreg::preserver::validate_query(map.rows(), map.cols(), mode, eps)?;
    let regime = Regime::for_query(map.rows(), map.cols(), mode);
    if let Ok(f) = decide(&map, mode, regime) {
        out.emit(
            || format!("no witness: the map preserves the class ({f})"),
            || json!({"command": "witness", "found": false, "factorization": f.to_string()}),
        );
        return Ok(false);
    }
    match find_witness(&map, mode, eps) {
        Ok(w) => {
            let (human, mut wj) = witness_report(&w, mode, eps);
            wj["command"] = json!("witness");
            wj["found"] = json!(true);
            out.emit(|| human, || wj);
            Ok(true)
        }
        Err(Error::WitnessNotFound(msg)) => {
            out.emit(
                || format!("no witness found: {msg}"),
                || json!({"command": "witness", "found": false, "error": msg}),
            );
            Ok(false)
        }
        Err(e) => Err(e.into()),
    }
}

struct GenerateArgs {
    kind: Kind,
    shape: (usize, usize),
    pattern: Option<SignPattern>,
    nodes: Option<String>,
    target: Option<ScaleTarget>,
    c: String,
    bound: i64,
    attempts: u64,
    strict: bool,
    seed: u64,
}

fn need_pattern(p: Option<SignPattern>) -> Result<SignPattern, UsageError> {
    p.ok_or_else(|| UsageError("this kind needs --pattern".into()))
}

fn cmd_generate(g: GenerateArgs, path: Option<&Path>, out: &Out) -> CmdResult {
    let (m, n) = g.shape;
    let result = match g.kind {
        Kind::Pascal => generate(&GeneratorSpec::Pascal { rows: m, cols: n }),
        Kind::Vandermonde => {
            let nodes = match &g.nodes {
                Some(s) => parse_scalars(s)?,
                None => (1..=m as i64).map(int).collect(),
            };
            if nodes.len() != m {
                return Err(UsageError(format!("{} nodes for {m} rows", nodes.len())));
            }
            generate(&GeneratorSpec::Vandermonde { nodes, cols: n })
        }
        Kind::Gadget => {
            let c = parse_scalars(&g.c)?;
            let [c] = c.as_slice() else {
                return Err(UsageError("--c takes one value".into()));
            };
            let target = g
                .target
                .ok_or_else(|| UsageError("gadget needs --target".into()))?;
            generate(&GeneratorSpec::GadgetJ {
                rows: m,
                cols: n,
                target,
                c: c.clone(),
            })
        }
        Kind::Pattern => generate(&GeneratorSpec::PatternSearch(PatternSearch {
            bound: g.bound,
            attempts: g.attempts,
            strict: g.strict,
            ..PatternSearch::new(m, n, need_pattern(g.pattern)?, g.seed)
        })),
        Kind::Ssr => construct_ssr(m, n, &need_pattern(g.pattern)?, g.seed),
    };
    let a = match result {
        Ok(a) => a,
        Err(e @ Error::SearchExhausted { .. }) => {
            out.emit(
                || format!("no matrix found: {e}"),
                || json!({"command": "generate", "found": false, "error": e.to_string()}),
            );
            return Ok(false);
        }
        Err(e) => return Err(e.into()),
    };
    if let Some(path) = path {
        write_matrix(path, &a)?;
    }
    out.emit(
        || format_matrix(&a).trim_end().to_string(),
        || json!({"command": "generate", "found": true, "matrix": matrix_json(&a)}),
    );
    Ok(true)
}

fn cmd_vd(input: &Path, exhaustive: bool, x: Option<&str>, out: &Out) -> CmdResult {
    let a = read_matrix(input)?;
    let mut xs = Vec::new();
    if let Some(x) = x {
        let v = parse_scalars(x)?;
        if v.len() != a.cols() {
            return Err(UsageError(format!(
                "vector of length {} for {} columns",
                v.len(),
                a.cols()
            )));
        }
        xs.push(v);
    }
    if exhaustive {
        xs.extend(sign_vectors(a.cols()));
    }
    let report = vd_check(&a, &xs)?;
    for v in &report.violations {
        out.emit(
            || {
                format!(
                    "violation: x = {} has {} changes, Ax = {} has {}",
                    v.x.iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(","),
                    v.changes_x,
                    v.ax.iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(","),
                    v.changes_ax
                )
            },
            || {
                json!({
                    "command": "vd",
                    "x": vector_json(&v.x),
                    "ax": vector_json(&v.ax),
                    "changes_x": v.changes_x,
                    "changes_ax": v.changes_ax,
                })
            },
        );
    }
    out.emit(
        || format!("checked {} vectors, {} violations", report.checked, report.violations.len()),
        || json!({"command": "vd", "checked": report.checked, "violations": report.violations.len()}),
    );
    Ok(report.is_clean())
}

fn cmd_verify(cfg: &HarnessConfig, out: &Out) -> CmdResult {
    let report = harness::run::<Rational>(cfg)?;
    for s in &report.suites {
        out.emit(
            || {
                let status = if s.passed + s.failed == 0 {
                    "skip"
                } else if s.informational {
                    "info"
                } else if s.failed == 0 {
                    "pass"
                } else {
                    "FAIL"
                };
                let mut line = format!(
                    "{status} {:<22} {:>6} passed {:>4} failed  {}",
                    s.name, s.passed, s.failed, s.invariant
                );
                for f in &s.failures {
                    line.push_str(&format!("\n    {}", f.replace('\n', "\n    ")));
                }
                line
            },
            || {
                json!({
                    "suite": s.name,
                    "invariant": s.invariant,
                    "informational": s.informational,
                    "passed": s.passed,
                    "failed": s.failed,
                    "failures": s.failures,
                })
            },
        );
    }
    let violated: Vec<&str> = report.violated().map(|s| s.name).collect();
    out.emit(
        || {
            if violated.is_empty() {
                format!("all invariants hold (seed {})", report.seed)
            } else {
                format!("violated: {} (seed {})", violated.join(", "), report.seed)
            }
        },
        || json!({"summary": true, "clean": violated.is_empty(), "violated": violated, "seed": report.seed}),
    );
    Ok(violated.is_empty())
}
