//! The `seppack` command line.
//!
//! Exit codes: 0 when the verification accepts (or the command succeeds), 1 when it
//! rejects, 2 on usage, parse and domain errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use seppack_core::certificate::{
    hadwiger_upper_bound_smooth, lift_from_code, max_admissible_epsilon, rank_bound, reduce_certificate,
    verify_certificate,
};
use seppack_core::ell1::{
    alon_parameters, alon_rs_code, contact_degrees, format_code, min_distance_neighbor_count, touching_pairs,
    verify_total_separability_l1, L1Packing,
};
use seppack_core::planar::{
    build_pi_measure, contact_graph, csep_formula, generate_packing, is_quasi_hexagon, lattice_for, polygon_angle_sum,
    verify_total_separability, AngularMeasure, Line, Point, SymmetricPolygon,
};
use seppack_core::polyomino::{adjacency_count, max_adjacency, merge_clusters, optimal_cluster, Lattice};
use seppack_core::scalar::{format_rational, parse_rational, rat};
use seppack_core::spherical::{deletion_parameters, deletion_search_trials, verify_code};
use seppack_core::{Error as CoreError, Kind, Scalar, VerificationReport};

use crate::formats::{
    body_from_json, body_to_json, certificate_from_json, declared_alpha, certificate_to_json, format_cluster, format_code_file,
    matrix_to_json, packing_from_json, packing_to_json, parse_binary_code, parse_cluster, parse_code_file,
    scalar_to_json, FormatError, NormPolicy,
};
use crate::manifest::{sha256_hex, RunManifest};
use crate::svg::{render_svg, SvgOptions};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 2024;

#[derive(Debug, Parser)]
#[command(name = "seppack", version, about = "Totally separable packings: constructions and exact verifiers")]
struct Cli {
    /// Print a machine-readable JSON report.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomised commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write a run manifest (inputs, parameters, verdicts) to this file.
    #[arg(long, global = true, value_name = "FILE")]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spherical codes.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Separable Hadwiger certificates.
    #[command(subcommand)]
    Cert(CertCmd),
    /// Reed-Solomon based codes and packings of l1 balls.
    #[command(subcommand)]
    Ell1(Ell1Cmd),
    /// Planar packings of symmetric polygons.
    #[command(subcommand)]
    Planar(PlanarCmd),
    /// Lattice cell clusters.
    #[command(subcommand)]
    Polyomino(PolyominoCmd),
    /// Re-run the command recorded in a manifest and compare the verdicts.
    Replay {
        #[arg(value_name = "MANIFEST")]
        file: String,
    },
}

#[derive(Debug, Subcommand)]
enum CodeCmd {
    /// Deletion search for vectors with pairwise |inner product| < 1/3.
    Search {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Check unit norms and inner products in (-1 + 2 alpha, alpha].
    Verify {
        /// Defaults to the `# alpha` line of the file.
        #[arg(long)]
        alpha: Option<String>,
        /// Normalise every nonzero vector instead of rejecting non-unit ones.
        #[arg(long)]
        normalize: bool,
        file: String,
    },
}

#[derive(Debug, Subcommand)]
enum CertCmd {
    /// Lift a code file to a certificate.
    Lift {
        /// Defaults to the `# alpha` line of the file.
        #[arg(long)]
        alpha: Option<String>,
        /// Number of extra dimensions, each carrying an antipodal pair.
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long)]
        normalize: bool,
        #[arg(long)]
        out: Option<String>,
        file: String,
    },
    Verify { file: String },
    /// Remove antipodal pairs and build the reduced matrix.
    Reduce {
        #[arg(long)]
        epsilon: Option<String>,
        file: String,
    },
    /// Upper bound on the separable Hadwiger number of smooth bodies in R^d, d = 5, 6, 7.
    Bound {
        #[arg(long)]
        d: u32,
    },
}

#[derive(Debug, Subcommand)]
enum Ell1Cmd {
    Build {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        out: Option<String>,
    },
    /// Check total separability of the packing of radius D/2 around the codewords.
    Verify { file: String },
    /// Number of codewords at minimum distance.
    Neighbors {
        #[arg(long)]
        index: Option<usize>,
        file: String,
    },
}

#[derive(Debug, Args)]
struct BodyArgs {
    /// Built-in body: square, hexagon, octagon, elongated-octagon.
    #[arg(long)]
    body: Option<String>,
    /// JSON file with a body (`{"vertices": ...}`) or a packing.
    #[arg(long = "body-file")]
    body_file: Option<String>,
}

#[derive(Debug, Subcommand)]
enum PlanarCmd {
    Classify {
        #[command(flatten)]
        body: BodyArgs,
    },
    /// Optimal totally separable packing of n translates.
    Pack {
        #[command(flatten)]
        body: BodyArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<String>,
    },
    Contacts { file: String },
    Verify { file: String },
    /// Angular measure of a body, with optional polygon angle sum.
    Measure {
        #[command(flatten)]
        body: BodyArgs,
        /// Use the uniform measure instead of a π-measure.
        #[arg(long)]
        uniform: bool,
        /// Convex polygon as `x,y;x,y;...` with rational coordinates.
        #[arg(long)]
        polygon: Option<String>,
    },
    Render {
        file: String,
        #[arg(long)]
        svg: Option<String>,
        #[arg(long = "no-lines")]
        no_lines: bool,
    },
}

#[derive(Debug, Subcommand)]
enum PolyominoCmd {
    Optimal {
        #[arg(long)]
        lattice: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<String>,
    },
    Count {
        #[arg(long, default_value = "square")]
        lattice: String,
        file: String,
    },
    /// Merge two square-lattice clusters.
    Merge { first: String, second: String },
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        let code = match e {
            CoreError::Precondition(_)
            | CoreError::Overlap { .. }
            | CoreError::ConstructionGap { .. }
            | CoreError::Internal(_)
            | CoreError::DivisionByZero(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Core(c) => c.into(),
            other => Failure {
                code: 2,
                message: other.to_string(),
            },
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

/// Result of one command: exit code, human summary, JSON report, and optionally a
/// primary data product (printed to stdout unless written to a file).
struct Outcome {
    exit: i32,
    summary: String,
    report: Value,
    data: Option<String>,
}

impl Outcome {
    fn new(exit: i32, summary: String, report: Value) -> Self {
        Outcome {
            exit,
            summary,
            report,
            data: None,
        }
    }
}

struct Context<'a> {
    stdin: &'a mut dyn Read,
    seed: Option<u64>,
    inputs: BTreeMap<String, String>,
    outputs: BTreeMap<String, String>,
    parameters: BTreeMap<String, String>,
}

impl Context<'_> {
    fn read(&mut self, path: &str) -> Result<String, Failure> {
        let mut text = String::new();
        if path == "-" {
            self.stdin
                .read_to_string(&mut text)
                .map_err(|e| usage(format!("cannot read stdin: {e}")))?;
        } else {
            text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))?;
        }
        self.inputs.insert(path.to_string(), sha256_hex(text.as_bytes()));
        Ok(text)
    }

    fn write(&mut self, path: &str, content: &str) -> Result<(), Failure> {
        std::fs::write(path, content).map_err(|e| usage(format!("cannot write {path}: {e}")))?;
        self.outputs.insert(path.to_string(), sha256_hex(content.as_bytes()));
        Ok(())
    }

    fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    /// Emits `data` to `out` if given, otherwise attaches it to the outcome.
    fn deliver(&mut self, mut outcome: Outcome, data: String, out: Option<&str>) -> Result<Outcome, Failure> {
        match out {
            Some(path) => {
                self.write(path, &data)?;
                outcome.report["output"] = json!(path);
            }
            None => outcome.data = Some(data),
        }
        Ok(outcome)
    }
}

/// Rational (`p/q`) or, if it contains `.` or an exponent, a float.
fn parse_scalar(text: &str) -> Result<Scalar, Failure> {
    if text.contains(['.', 'e', 'E']) {
        text.parse::<f64>()
            .map(Scalar::Float)
            .map_err(|_| usage(format!("invalid number {text:?}")))
    } else {
        Ok(Scalar::Exact(parse_rational(text)?))
    }
}

fn resolve_alpha(ctx: &mut Context, given: Option<String>, text: &str) -> Result<Scalar, Failure> {
    let alpha = given
        .or_else(|| declared_alpha(text).map(str::to_string))
        .ok_or_else(|| usage("no --alpha given and the file has no `# alpha` line"))?;
    ctx.param("alpha", &alpha);
    parse_scalar(&alpha)
}

fn violations_json(report: &VerificationReport) -> Value {
    Value::Array(
        report
            .violations
            .iter()
            .take(100)
            .map(|v| json!({"i": v.i, "j": v.j, "condition": v.condition.id(), "witness": scalar_to_json(&v.witness)}))
            .collect(),
    )
}

fn verdict(report: &VerificationReport) -> &'static str {
    match (report.accepted(), report.numerically_accepted()) {
        (true, true) => "accepted (numerically)",
        (true, false) => "accepted",
        _ => "rejected",
    }
}

fn parse_lattice(name: &str) -> Result<Lattice, Failure> {
    name.parse::<Lattice>().map_err(|e: CoreError| usage(e.to_string()))
}

fn builtin_body(name: &str) -> Result<SymmetricPolygon, Failure> {
    match name {
        "square" => Ok(SymmetricPolygon::square()),
        "hexagon" => Ok(SymmetricPolygon::hexagon()),
        "octagon" => Ok(SymmetricPolygon::octagon()),
        "elongated-octagon" => Ok(SymmetricPolygon::elongated_octagon()),
        other => Err(usage(format!(
            "unknown body {other:?}; expected square, hexagon, octagon or elongated-octagon"
        ))),
    }
}

fn load_body(ctx: &mut Context, args: &BodyArgs) -> Result<SymmetricPolygon, Failure> {
    match (&args.body, &args.body_file) {
        (Some(name), None) => {
            ctx.param("body", name);
            builtin_body(name)
        }
        (None, Some(path)) => {
            let text = ctx.read(path)?;
            Ok(body_from_json(&text)?)
        }
        _ => Err(usage("give exactly one of --body and --body-file")),
    }
}

fn line_json(line: &Line) -> Value {
    let c = line.canonical();
    json!({"normal": [format_rational(&c.normal.x), format_rational(&c.normal.y)], "offset": format_rational(&c.offset)})
}

fn line_text(line: &Line) -> String {
    let c = line.canonical();
    let b = &c.normal.y;
    let sign = if b < &rat(0, 1) { "-" } else { "+" };
    format!(
        "{}·x {sign} {}·y = {}",
        format_rational(&c.normal.x),
        format_rational(&if b < &rat(0, 1) { -b.clone() } else { b.clone() }),
        format_rational(&c.offset)
    )
}

fn run_code(ctx: &mut Context, cmd: CodeCmd) -> Result<Outcome, Failure> {
    match cmd {
        CodeCmd::Search { dim, trials, out } => {
            let seed = ctx.seed.unwrap_or(DEFAULT_SEED);
            ctx.param("dim", dim);
            ctx.param("trials", trials);
            if trials == 0 {
                return Err(usage("--trials must be at least 1"));
            }
            let params = deletion_parameters(dim)?;
            let code = deletion_search_trials(dim, seed, trials)?;
            let accepted = verify_code(&code).accepted();
            let report = json!({
                "dim": dim, "seed": seed, "trials": trials, "k": params.k, "p": params.p,
                "expected_survivors": params.expected_survivors, "count": code.len(),
                "coherence": code.coherence(), "accepted": accepted,
            });
            let summary = format!(
                "{} vectors in R^{dim} (k = {}, expected at least {:.2}), coherence {:.6}",
                code.len(),
                params.k,
                params.expected_survivors,
                code.coherence()
            );
            let header = vec![
                format!("deletion search: dim {dim}, seed {seed}, trials {trials}"),
                "inner products lie in (-1/3, 1/3); verify with --alpha 1/3".to_string(),
            ];
            let outcome = Outcome::new(if accepted { 0 } else { 1 }, summary, report);
            ctx.deliver(outcome, format_code_file(&code, &header), out.as_deref())
        }
        CodeCmd::Verify { alpha, normalize, file } => {
            let text = ctx.read(&file)?;
            let alpha = resolve_alpha(ctx, alpha, &text)?;
            let policy = if normalize { NormPolicy::Normalize } else { NormPolicy::Strict };
            let code = parse_code_file(&text, alpha, policy)?;
            let report = verify_code(&code);
            let mut summary = format!(
                "{}: {} vectors in R^{}, coherence {:.9}",
                verdict(&report),
                code.len(),
                code.dimension(),
                code.coherence()
            );
            for v in report.violations.iter().take(10) {
                summary.push_str(&format!("\n  ({}, {}) {} {}", v.i, v.j, v.condition, v.witness));
            }
            let json = json!({
                "accepted": report.accepted(), "numerical": report.numerical, "count": code.len(),
                "dimension": code.dimension(), "coherence": code.coherence(), "violations": violations_json(&report),
            });
            Ok(Outcome::new(if report.accepted() { 0 } else { 1 }, summary, json))
        }
    }
}

fn run_cert(ctx: &mut Context, cmd: CertCmd) -> Result<Outcome, Failure> {
    match cmd {
        CertCmd::Lift { alpha, k, normalize, out, file } => {
            ctx.param("k", k);
            let text = ctx.read(&file)?;
            let alpha = resolve_alpha(ctx, alpha, &text)?;
            let policy = if normalize { NormPolicy::Normalize } else { NormPolicy::Strict };
            let code = parse_code_file(&text, alpha, policy)?;
            let cert = lift_from_code(&code, k)?;
            let report = verify_certificate(&cert)?;
            let summary = format!(
                "certificate with {} pairs in R^{}: {}",
                cert.len(),
                cert.dimension(),
                verdict(&report)
            );
            let json = json!({"dimension": cert.dimension(), "pairs": cert.len(), "accepted": report.accepted()});
            let outcome = Outcome::new(if report.accepted() { 0 } else { 1 }, summary, json);
            let data = serde_json::to_string_pretty(&certificate_to_json(&cert)).expect("json") + "\n";
            ctx.deliver(outcome, data, out.as_deref())
        }
        CertCmd::Verify { file } => {
            let text = ctx.read(&file)?;
            let cert = certificate_from_json(&text)?;
            let report = verify_certificate(&cert)?;
            let mut summary = format!("{}: {} pairs in R^{}", verdict(&report), cert.len(), cert.dimension());
            for v in report.violations.iter().take(10) {
                summary.push_str(&format!("\n  phi_{}(x_{}) {} {}", v.i, v.j, v.condition, v.witness));
            }
            let json = json!({
                "accepted": report.accepted(), "numerical": report.numerical, "pairs": cert.len(),
                "dimension": cert.dimension(), "violations": violations_json(&report),
            });
            Ok(Outcome::new(if report.accepted() { 0 } else { 1 }, summary, json))
        }
        CertCmd::Reduce { epsilon, file } => {
            let text = ctx.read(&file)?;
            let cert = certificate_from_json(&text)?;
            let eps = match &epsilon {
                Some(e) => {
                    ctx.param("epsilon", e);
                    parse_scalar(e)?
                }
                None => max_admissible_epsilon(&cert)?,
            };
            let red = reduce_certificate(&cert, &eps)?;
            let bound = cert.dimension() + 1 - red.removed.min(cert.dimension() + 1);
            let rank = if cert.kind() == Kind::Exact { Some(red.matrix.rank_exact()?) } else { None };
            let trace = if red.matrix.rows() > 0 { red.matrix.rank_lower_bound_trace().ok() } else { None };
            let within = rank.map_or(true, |r| r <= bound);
            let summary = format!(
                "epsilon {eps}: removed {} antipodal pairs, {}x{} matrix, rank {} (bound d - k + 1 = {bound}), trace bound {}",
                red.removed,
                red.matrix.rows(),
                red.matrix.cols(),
                rank.map_or("n/a".to_string(), |r| r.to_string()),
                trace.as_ref().map_or("n/a".to_string(), |t| t.to_string()),
            );
            let json = json!({
                "epsilon": scalar_to_json(&eps), "removed": red.removed, "size": red.matrix.rows(),
                "rank": rank, "rank_bound": bound, "trace_bound": trace.as_ref().map(scalar_to_json),
                "survivors": red.survivors, "matrix": matrix_to_json(&red.matrix),
            });
            Ok(Outcome::new(if within { 0 } else { 1 }, summary, json))
        }
        CertCmd::Bound { d } => {
            ctx.param("d", d);
            let b = hadwiger_upper_bound_smooth(d)?;
            let summary = format!("d = {d}: at most {b} (largest integer below {})", format_rational(&rank_bound(d)));
            Ok(Outcome::new(0, summary, json!({"d": d, "bound": b})))
        }
    }
}

fn run_ell1(ctx: &mut Context, cmd: Ell1Cmd) -> Result<Outcome, Failure> {
    match cmd {
        Ell1Cmd::Build { k, out } => {
            ctx.param("k", k);
            let params = alon_parameters(k)?;
            let code = alon_rs_code(k).map_err(|e| {
                let mut f = Failure::from(e);
                f.message.push_str(&format!(
                    " (q = {}, length {}, {} codewords, D = {}, {} neighbours per codeword)",
                    params.q, params.length, params.codewords, params.min_distance, params.neighbor_count
                ));
                f
            })?;
            let report = json!({
                "k": k, "q": params.q, "length": params.length, "codewords": code.len(),
                "min_distance": params.min_distance, "neighbor_count": params.neighbor_count,
            });
            let summary = format!(
                "{} codewords of length {}, minimum distance {}",
                code.len(),
                params.length,
                params.min_distance
            );
            ctx.deliver(Outcome::new(0, summary, report), format_code(&code), out.as_deref())
        }
        Ell1Cmd::Verify { file } => {
            let text = ctx.read(&file)?;
            let code = parse_binary_code(&text)?;
            let packing = L1Packing::from_code(code)?;
            let report = verify_total_separability_l1(&packing)?;
            let degrees = contact_degrees(&packing);
            let (lo, hi) = (degrees.iter().min().copied(), degrees.iter().max().copied());
            let summary = format!(
                "{}: {} balls of radius {} in dimension {}, D = {}, contact degrees {}..{}",
                verdict(&report),
                packing.code().len(),
                packing.radius(),
                packing.code().length(),
                packing.min_distance(),
                lo.unwrap_or(0),
                hi.unwrap_or(0)
            );
            let json = json!({
                "accepted": report.accepted(), "codewords": packing.code().len(), "length": packing.code().length(),
                "min_distance": packing.min_distance(), "radius": format_rational(packing.radius()),
                "touching_pairs": touching_pairs(&packing).len(), "min_degree": lo, "max_degree": hi,
                "violations": violations_json(&report),
            });
            Ok(Outcome::new(if report.accepted() { 0 } else { 1 }, summary, json))
        }
        Ell1Cmd::Neighbors { index, file } => {
            let text = ctx.read(&file)?;
            let code = parse_binary_code(&text)?;
            let packing = L1Packing::from_code(code)?;
            let code = packing.code();
            match index {
                Some(i) => {
                    let w = code
                        .words()
                        .get(i)
                        .ok_or_else(|| usage(format!("index {i} out of range ({} codewords)", code.len())))?;
                    let count = min_distance_neighbor_count(code, w)?;
                    let summary = format!("codeword {i}: {count} neighbours at distance {}", packing.min_distance());
                    Ok(Outcome::new(0, summary, json!({"index": i, "neighbors": count})))
                }
                None => {
                    let degrees = contact_degrees(&packing);
                    let (lo, hi) = (degrees.iter().min().copied().unwrap_or(0), degrees.iter().max().copied().unwrap_or(0));
                    let summary = format!(
                        "{} codewords, neighbours at distance {}: min {lo}, max {hi}",
                        code.len(),
                        packing.min_distance()
                    );
                    Ok(Outcome::new(0, summary, json!({"min": lo, "max": hi, "min_distance": packing.min_distance()})))
                }
            }
        }
    }
}

fn parse_polygon(text: &str) -> Result<Vec<Point>, Failure> {
    text.split(';')
        .map(|pair| {
            let (x, y) = pair
                .split_once(',')
                .ok_or_else(|| usage(format!("expected x,y in {pair:?}")))?;
            Ok(Point::new(parse_rational(x)?, parse_rational(y)?))
        })
        .collect()
}

fn run_planar(ctx: &mut Context, cmd: PlanarCmd) -> Result<Outcome, Failure> {
    match cmd {
        PlanarCmd::Classify { body } => {
            let body = load_body(ctx, &body)?;
            let class = body.classify();
            let lengths: Vec<String> = (0..body.len()).map(|i| format_rational(&body.edge_length(i))).collect();
            let witness = is_quasi_hexagon(&body).1.map(|w| {
                json!({"vertex": w.vertex, "u1": [format_rational(&w.u1.x), format_rational(&w.u1.y)],
                       "u2": [format_rational(&w.u2.x), format_rational(&w.u2.y)]})
            });
            let summary = format!(
                "{} ({} vertices): separable Hadwiger number {}, optimal clusters on the {} lattice",
                class,
                body.len(),
                class.hadwiger_degree(),
                lattice_for(class)
            );
            let json = json!({
                "class": class.name(), "hadwiger_degree": class.hadwiger_degree(), "lattice": lattice_for(class).name(),
                "edge_lengths": lengths, "witness": witness, "body": body_to_json(&body),
            });
            Ok(Outcome::new(0, summary, json))
        }
        PlanarCmd::Pack { body, n, out } => {
            ctx.param("n", n);
            let body = load_body(ctx, &body)?;
            let packing = generate_packing(&body, n)?;
            let contacts = contact_graph(&packing)?.edge_count();
            let formula = csep_formula(body.classify(), n as u64);
            let summary = format!("{n} translates with {contacts} contacts (formula {formula})");
            let json = json!({"n": n, "contacts": contacts, "formula": formula, "class": body.classify().name()});
            let outcome = Outcome::new(if contacts as u64 == formula { 0 } else { 1 }, summary, json);
            let data = serde_json::to_string_pretty(&packing_to_json(&packing)).expect("json") + "\n";
            ctx.deliver(outcome, data, out.as_deref())
        }
        PlanarCmd::Contacts { file } => {
            let text = ctx.read(&file)?;
            let packing = packing_from_json(&text)?;
            let graph = contact_graph(&packing)?;
            let summary = format!(
                "{} translates, {} contacts, maximum degree {}",
                packing.len(),
                graph.edge_count(),
                graph.max_degree()
            );
            let json = json!({
                "n": packing.len(), "contacts": graph.edge_count(), "max_degree": graph.max_degree(),
                "edges": graph.edges(), "degrees": graph.degrees(),
            });
            Ok(Outcome::new(0, summary, json))
        }
        PlanarCmd::Verify { file } => {
            let text = ctx.read(&file)?;
            let packing = packing_from_json(&text)?;
            let report = match verify_total_separability(&packing) {
                Err(CoreError::Overlap { i, j, gauge }) => {
                    let summary = format!("not a packing: translates {i} and {j} overlap (gauge {gauge} < 2)");
                    let json = json!({"packing": false, "separable": false, "overlap": {"i": i, "j": j, "gauge": gauge}});
                    return Ok(Outcome::new(1, summary, json));
                }
                other => other?,
            };
            let mut summary = format!(
                "{}: {} translates, {} contacts, {} distinct separating lines",
                if report.separable { "totally separable" } else { "not totally separable" },
                packing.len(),
                report.graph.edge_count(),
                report.distinct_lines().len()
            );
            if let Some(f) = report.first_failure() {
                summary.push_str(&format!(
                    "\n  pair ({}, {}) has no separating line{}",
                    f.i,
                    f.j,
                    f.blocker.map_or(String::new(), |b| format!("; translate {b} is in the way"))
                ));
            }
            let pairs: Vec<Value> = report
                .pairs
                .iter()
                .map(|p| json!({"i": p.i, "j": p.j, "line": p.line.as_ref().map(line_json), "blocker": p.blocker}))
                .collect();
            let json = json!({
                "packing": true, "separable": report.separable, "contacts": report.graph.edge_count(),
                "pairs": pairs, "lines": report.distinct_lines().iter().map(line_text).collect::<Vec<_>>(),
            });
            Ok(Outcome::new(if report.separable { 0 } else { 1 }, summary, json))
        }
        PlanarCmd::Measure { body, uniform, polygon } => {
            let body = load_body(ctx, &body)?;
            let mu = if uniform { AngularMeasure::uniform(&body) } else { build_pi_measure(&body)? };
            let mut lines = vec![format!(
                "{}, total mass {}π",
                if uniform { "uniform measure" } else { "π-measure" },
                format_rational(&mu.total_mass())
            )];
            let mut edges = Vec::new();
            for e in 0..body.len() {
                let pieces: Vec<Value> = mu
                    .pieces(e)
                    .iter()
                    .map(|p| json!({"start": format_rational(&p.start), "end": format_rational(&p.end), "rate": format_rational(&p.rate)}))
                    .collect();
                let mass = mu.edge_arc_mass(e, &rat(0, 1), &rat(1, 1));
                lines.push(format!("  edge {e}: mass {}π", format_rational(&mass)));
                edges.push(json!({"edge": e, "mass": format_rational(&mass), "pieces": pieces}));
            }
            let zero: Vec<Value> = mu
                .zero_arcs()
                .iter()
                .map(|(e, s, t)| json!({"edge": e, "start": format_rational(s), "end": format_rational(t)}))
                .collect();
            let mut json = json!({"total_mass": format_rational(&mu.total_mass()), "edges": edges, "zero_arcs": zero});
            if let Some(text) = polygon {
                ctx.param("polygon", &text);
                let vertices = parse_polygon(&text)?;
                let sum = polygon_angle_sum(&mu, &vertices)?;
                lines.push(format!("angle sum of the polygon: {}π", format_rational(&sum)));
                json["angle_sum"] = json!(format_rational(&sum));
            }
            Ok(Outcome::new(0, lines.join("\n"), json))
        }
        PlanarCmd::Render { file, svg, no_lines } => {
            let text = ctx.read(&file)?;
            let packing = packing_from_json(&text)?;
            let report = if no_lines {
                None
            } else {
                match verify_total_separability(&packing) {
                    Ok(r) => Some(r),
                    Err(CoreError::Overlap { .. }) => None,
                    Err(e) => return Err(e.into()),
                }
            };
            let doc = render_svg(&packing, report.as_ref(), &SvgOptions::default());
            let line_count = doc.matches("<line").count();
            let summary = format!("{} translates, {} separating lines", packing.len(), line_count);
            let json = json!({"paths": packing.len(), "lines": line_count});
            ctx.deliver(Outcome::new(0, summary, json), doc, svg.as_deref())
        }
    }
}

fn run_polyomino(ctx: &mut Context, cmd: PolyominoCmd) -> Result<Outcome, Failure> {
    match cmd {
        PolyominoCmd::Optimal { lattice, n, out } => {
            ctx.param("lattice", &lattice);
            ctx.param("n", n);
            let lattice = parse_lattice(&lattice)?;
            let cluster = optimal_cluster(lattice, n)?;
            let count = adjacency_count(&cluster);
            let summary = format!("{n} cells on the {lattice} lattice with {count} adjacencies");
            let json = json!({"lattice": lattice.name(), "n": n, "adjacencies": count, "formula": max_adjacency(lattice, n as u64)});
            ctx.deliver(Outcome::new(0, summary, json), format_cluster(&cluster), out.as_deref())
        }
        PolyominoCmd::Count { lattice, file } => {
            ctx.param("lattice", &lattice);
            let lattice = parse_lattice(&lattice)?;
            let text = ctx.read(&file)?;
            let cluster = parse_cluster(&text, lattice)?;
            let count = adjacency_count(&cluster);
            let bound = max_adjacency(lattice, cluster.len() as u64);
            let summary = format!("{} cells, {count} adjacencies (maximum for this size {bound})", cluster.len());
            Ok(Outcome::new(0, summary, json!({"n": cluster.len(), "adjacencies": count, "maximum": bound})))
        }
        PolyominoCmd::Merge { first, second } => {
            let a = parse_cluster(&ctx.read(&first)?, Lattice::Square)?;
            let b = parse_cluster(&ctx.read(&second)?, Lattice::Square)?;
            let merged = merge_clusters(&a, &b)?;
            let (ca, cb, cm) = (adjacency_count(&a), adjacency_count(&b), adjacency_count(&merged));
            let summary = format!("{} + {} - 1 = {} cells; adjacencies {ca} + {cb} -> {cm}", a.len(), b.len(), merged.len());
            let json = json!({"n": merged.len(), "adjacencies": cm, "parts": [ca, cb]});
            let mut outcome = Outcome::new(0, summary, json);
            outcome.data = Some(format_cluster(&merged));
            Ok(outcome)
        }
    }
}

fn replay(ctx: &mut Context, path: &str) -> Result<Outcome, Failure> {
    let text = ctx.read(path)?;
    let manifest = RunManifest::from_json(&text).map_err(|e| usage(format!("invalid manifest: {e}")))?;
    let mut mismatched: Vec<String> = Vec::new();
    for (file, digest) in &manifest.inputs {
        if file == "-" {
            continue;
        }
        match std::fs::read(file) {
            Ok(bytes) if sha256_hex(&bytes) == *digest => {}
            Ok(_) => mismatched.push(format!("{file} changed")),
            Err(e) => mismatched.push(format!("{file}: {e}")),
        }
    }
    let mut args = vec!["seppack".to_string(), "--json".to_string()];
    args.extend(manifest.command.iter().cloned());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(args, ctx.stdin, &mut out, &mut err);
    let verdicts: Value = serde_json::from_slice(&out).unwrap_or(Value::Null);
    let same = code == manifest.exit_code && verdicts == manifest.verdicts;
    let summary = if same && mismatched.is_empty() {
        "replay reproduced the recorded verdicts".to_string()
    } else {
        format!(
            "replay differs: exit {} (recorded {}), verdicts {}{}",
            code,
            manifest.exit_code,
            if verdicts == manifest.verdicts { "equal" } else { "differ" },
            mismatched.iter().map(|m| format!("; {m}")).collect::<String>()
        )
    };
    let json = json!({"reproduced": same && mismatched.is_empty(), "exit_code": code, "inputs": mismatched});
    Ok(Outcome::new(if same && mismatched.is_empty() { 0 } else { 1 }, summary, json))
}

/// Arguments recorded in a manifest: everything after the program name except
/// `--manifest FILE` and `--json` (replay always asks for JSON).
fn recorded_command(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args.iter().skip(1) {
        if skip {
            skip = false;
            continue;
        }
        if a == "--manifest" {
            skip = true;
        } else if a.starts_with("--manifest=") || a == "--json" {
            continue;
        } else {
            out.push(a.clone());
        }
    }
    out
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let informational = !e.use_stderr();
            if informational {
                let _ = write!(stdout, "{}", e.render());
                return 0;
            }
            let _ = write!(stderr, "{}", e.render());
            return 2;
        }
    };
    let strings: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let mut ctx = Context {
        stdin,
        seed: cli.seed,
        inputs: BTreeMap::new(),
        outputs: BTreeMap::new(),
        parameters: BTreeMap::new(),
    };
    let result = match cli.command {
        Command::Code(c) => run_code(&mut ctx, c),
        Command::Cert(c) => run_cert(&mut ctx, c),
        Command::Ell1(c) => run_ell1(&mut ctx, c),
        Command::Planar(c) => run_planar(&mut ctx, c),
        Command::Polyomino(c) => run_polyomino(&mut ctx, c),
        Command::Replay { file } => replay(&mut ctx, &file),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(f) => Outcome::new(f.code, format!("error: {}", f.message), json!({"error": f.message})),
    };
    let mut report = outcome.report.clone();
    if cli.json {
        if let Some(data) = &outcome.data {
            report["output_data"] = json!(data);
        }
        let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&report).expect("json"));
    } else if let Some(data) = &outcome.data {
        let _ = write!(stdout, "{data}");
        let _ = writeln!(stderr, "{}", outcome.summary);
    } else if outcome.exit == 2 {
        let _ = writeln!(stderr, "{}", outcome.summary);
    } else {
        let _ = writeln!(stdout, "{}", outcome.summary);
    }
    if let Some(path) = &cli.manifest {
        let manifest = RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: recorded_command(&strings),
            parameters: ctx.parameters,
            seed: ctx.seed,
            inputs: ctx.inputs,
            outputs: ctx.outputs,
            exit_code: outcome.exit,
            verdicts: report,
        };
        if let Err(e) = std::fs::write(path, manifest.to_json()) {
            let _ = writeln!(stderr, "error: cannot write manifest {}: {e}", path.display());
            return 2;
        }
    }
    outcome.exit
}
