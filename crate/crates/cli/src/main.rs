//! fencelab: a command-line workbench for polygonal fences and fans.
//!
//! Commands read fence/fan documents (JSON, exact rational coordinates)
//! from a file or standard input, and emit deterministic reports on
//! standard output. Exit status: 0 ok, 1 violation or failure (the report
//! carries the witness), 2 usage error.

mod experiment;
mod render;
mod report;

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use fencelab_core::chains::{build_cover, validate_cover, Rect};
use fencelab_core::geometry::{Point, SquaredRadius};
use fencelab_core::model::{DocumentError, FenceDocument, ModelError, ModelPayload};
use fencelab_core::pattern::{
    extract_pattern, realize_pattern, validate_realization, ChainPattern,
};
use fencelab_core::pierce::{fan_pierced_basis, pierced_ball};
use fencelab_core::probe::{
    bend_spectrum, classify_circle, find_bends, AnnulusProbe, CircleProbe, ProbeError,
};
use fencelab_core::scalar::Scalar;

use report::CommandReport;

#[derive(Parser)]
#[command(name = "fencelab", version, about = "exact probing of fences and fans in the plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct DocArg {
    /// Input document path, or `-` for standard input.
    #[arg(value_name = "DOC")]
    input: String,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a fence or fan document.
    Validate(DocArg),
    /// Classify the intersection of a circle with the model.
    Probe {
        #[command(flatten)]
        doc: DocArg,
        /// Probe center as `x,y` (exact rationals).
        #[arg(long, value_parser = parse_point)]
        center: Point,
        /// Squared radius (exact rational).
        #[arg(long, value_parser = parse_radius2)]
        r2: SquaredRadius,
    },
    /// Enumerate bends in the annulus between two circles.
    Bends {
        #[command(flatten)]
        doc: DocArg,
        #[arg(long, value_parser = parse_point)]
        center: Point,
        /// Squared radius of the terminating circle.
        #[arg(long, value_parser = parse_radius2)]
        q2: SquaredRadius,
        /// Squared radius of the touched circle.
        #[arg(long, value_parser = parse_radius2)]
        r2: SquaredRadius,
    },
    /// Compute the exact bend spectrum about a center.
    Spectrum {
        #[command(flatten)]
        doc: DocArg,
        #[arg(long, value_parser = parse_point)]
        center: Point,
    },
    /// Find a certified pierced ball about a point.
    Pierce {
        #[command(flatten)]
        doc: DocArg,
        #[arg(long, value_parser = parse_point)]
        center: Point,
        /// Squared radius bound for the ball.
        #[arg(long, value_parser = parse_radius2)]
        epsilon2: SquaredRadius,
    },
    /// Pierced neighborhood of a fan point (vertex by default).
    FanBasis {
        #[command(flatten)]
        doc: DocArg,
        /// Base point on the fan; defaults to the vertex.
        #[arg(long, value_parser = parse_point)]
        at: Option<Point>,
        #[arg(long, value_parser = parse_radius2)]
        epsilon2: SquaredRadius,
    },
    /// Build a validated chain cover of a fence.
    Cover {
        #[command(flatten)]
        doc: DocArg,
        #[arg(long, value_parser = parse_radius2)]
        epsilon2: SquaredRadius,
    },
    /// Extract the refining chain pattern of a fence.
    Pattern {
        #[command(flatten)]
        doc: DocArg,
        #[arg(long)]
        depth: usize,
    },
    /// Realize an abstract chain pattern as nested rectangles.
    Realize {
        /// Pattern JSON (a `pattern` report or a bare pattern object).
        #[arg(value_name = "PATTERN")]
        input: String,
        /// Root box as `x0,y0,x1,y1`; defaults to `0,0,16,16`.
        #[arg(long, value_parser = parse_rect)]
        root: Option<Rect>,
    },
    /// Render a scene as standalone SVG on stdout.
    Render {
        #[command(flatten)]
        doc: DocArg,
        #[arg(long, value_parser = parse_point)]
        center: Option<Point>,
        #[arg(long, value_parser = parse_radius2)]
        r2: Option<SquaredRadius>,
        /// Also highlight bends terminating at this squared radius.
        #[arg(long, value_parser = parse_radius2)]
        q2: Option<SquaredRadius>,
        /// Overlay a realization (JSON file from `realize`).
        #[arg(long)]
        realization: Option<String>,
    },
    /// Packaged experiments.
    Experiment {
        #[command(subcommand)]
        which: ExperimentCommand,
    },
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Bump family with touch radii approaching 1 from below.
    CombLimit {
        /// Largest `n` of the `1 - 1/n` apex heights (at least 3).
        #[arg(long)]
        n: u32,
    },
}

fn parse_scalar(text: &str) -> Result<Scalar, String> {
    text.parse().map_err(|e| format!("{e}"))
}

fn parse_radius2(text: &str) -> Result<SquaredRadius, String> {
    let v = parse_scalar(text)?;
    SquaredRadius::new(v).map_err(|e| format!("{e}"))
}

fn parse_point(text: &str) -> Result<Point, String> {
    let (x, y) = text
        .split_once(',')
        .ok_or_else(|| "expected x,y".to_string())?;
    Ok(Point::new(parse_scalar(x)?, parse_scalar(y)?))
}

fn parse_rect(text: &str) -> Result<Rect, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 4 {
        return Err("expected x0,y0,x1,y1".to_string());
    }
    let vals: Result<Vec<Scalar>, String> = parts.into_iter().map(parse_scalar).collect();
    let vals = vals?;
    if vals[0] >= vals[2] || vals[1] >= vals[3] {
        return Err("root box must have positive extent".to_string());
    }
    Ok(Rect::new(
        Point::new(vals[0].clone(), vals[1].clone()),
        Point::new(vals[2].clone(), vals[3].clone()),
    ))
}

enum Failure {
    /// Violation or failure with a witness payload (exit 1).
    Violation(CommandReport),
    /// Usage problem (exit 2).
    Usage(String),
}

type CmdResult = Result<Output, Failure>;

enum Output {
    Report(CommandReport),
    Raw(String),
}

fn read_input(path: &str) -> Result<Vec<u8>, Failure> {
    if path == "-" {
        let mut buf = Vec::new();
        std::io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| Failure::Usage(format!("reading standard input: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read(path).map_err(|e| Failure::Usage(format!("reading {path}: {e}")))
    }
}

fn model_error_payload(err: &DocumentError) -> serde_json::Value {
    match err {
        DocumentError::Invalid(ModelError::InvalidFence(vs)) => {
            json!({"error": "invalid fence", "violations": vs})
        }
        DocumentError::Invalid(ModelError::InvalidFan(vs)) => {
            json!({"error": "invalid fan", "violations": vs})
        }
        other => json!({"error": other.to_string()}),
    }
}

fn load_document(command: &str, path: &str) -> Result<(FenceDocument, String), Failure> {
    let bytes = read_input(path)?;
    let digest = report::digest(&bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| Failure::Usage("document is not UTF-8".to_string()))?;
    match FenceDocument::from_json(&text) {
        Ok(doc) => Ok((doc, digest)),
        Err(err) => Err(Failure::Violation(CommandReport::violation(
            command,
            digest,
            model_error_payload(&err),
        ))),
    }
}

fn fence_only<'a>(
    command: &str,
    digest: &str,
    doc: &'a FenceDocument,
) -> Result<&'a fencelab_core::model::Fence, Failure> {
    match &doc.payload {
        ModelPayload::Fence(f) => Ok(f),
        ModelPayload::Fan(_) => Err(Failure::Violation(CommandReport::violation(
            command,
            digest.to_string(),
            json!({"error": "this command needs a fence document"}),
        ))),
    }
}

fn probe_violation(command: &str, digest: String, err: &ProbeError) -> Failure {
    match err {
        ProbeError::BadParams(msg) => Failure::Usage(msg.clone()),
        other => Failure::Violation(CommandReport::violation(
            command,
            digest,
            json!({"error": other.to_string()}),
        )),
    }
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Validate(doc) => {
            let (doc, digest) = load_document("validate", &doc.input)?;
            let result = match &doc.payload {
                ModelPayload::Fence(f) => json!({
                    "valid": true,
                    "kind": "fence",
                    "arcs": f.arcs().len(),
                    "points": f.points().len(),
                }),
                ModelPayload::Fan(f) => json!({
                    "valid": true,
                    "kind": "fan",
                    "legs": f.legs().len(),
                }),
            };
            Ok(Output::Report(CommandReport::ok("validate", digest, result)))
        }
        Command::Probe { doc, center, r2 } => {
            let (doc, digest) = load_document("probe", &doc.input)?;
            let fence = fence_only("probe", &digest, &doc)?;
            let probe = CircleProbe { center, r2 };
            let events = classify_circle(fence, &probe);
            Ok(Output::Report(CommandReport::ok(
                "probe",
                digest,
                json!({"probe": probe, "events": events}),
            )))
        }
        Command::Bends { doc, center, q2, r2 } => {
            let (doc, digest) = load_document("bends", &doc.input)?;
            let fence = fence_only("bends", &digest, &doc)?;
            let annulus = AnnulusProbe::new(center, q2, r2)
                .map_err(|e| probe_violation("bends", digest.clone(), &e))?;
            let bends = find_bends(fence, &annulus)
                .map_err(|e| probe_violation("bends", digest.clone(), &e))?;
            Ok(Output::Report(CommandReport::ok(
                "bends",
                digest,
                json!({
                    "center": annulus.center,
                    "q2": annulus.q2,
                    "r2": annulus.r2,
                    "bends": bends,
                }),
            )))
        }
        Command::Spectrum { doc, center } => {
            let (doc, digest) = load_document("spectrum", &doc.input)?;
            let fence = fence_only("spectrum", &digest, &doc)?;
            let spectrum = bend_spectrum(fence, &center);
            Ok(Output::Report(CommandReport::ok(
                "spectrum",
                digest,
                serde_json::to_value(&spectrum).expect("spectrum serializes"),
            )))
        }
        Command::Pierce { doc, center, epsilon2 } => {
            let (doc, digest) = load_document("pierce", &doc.input)?;
            let fence = fence_only("pierce", &digest, &doc)?;
            let (r2, certificate) = pierced_ball(fence, &center, &epsilon2);
            Ok(Output::Report(CommandReport::ok(
                "pierce",
                digest,
                json!({"r2": r2, "certificate": certificate}),
            )))
        }
        Command::FanBasis { doc, at, epsilon2 } => {
            let (doc, digest) = load_document("fan-basis", &doc.input)?;
            let ModelPayload::Fan(fan) = &doc.payload else {
                return Err(Failure::Violation(CommandReport::violation(
                    "fan-basis",
                    digest,
                    json!({"error": "this command needs a fan document"}),
                )));
            };
            let p = at.unwrap_or_else(|| fan.vertex().clone());
            match fan_pierced_basis(fan, &p, &epsilon2) {
                Ok((region, certificate)) => Ok(Output::Report(CommandReport::ok(
                    "fan-basis",
                    digest,
                    json!({"region": region, "certificate": certificate}),
                ))),
                Err(err) => Err(Failure::Violation(CommandReport::violation(
                    "fan-basis",
                    digest,
                    json!({"error": err.to_string()}),
                ))),
            }
        }
        Command::Cover { doc, epsilon2 } => {
            let (doc, digest) = load_document("cover", &doc.input)?;
            let fence = fence_only("cover", &digest, &doc)?;
            let cover = build_cover(fence, &epsilon2);
            let violations = validate_cover(fence, &cover);
            assert!(violations.is_empty(), "built covers validate");
            let links: usize = cover.chains.iter().map(|c| c.links.len()).sum();
            Ok(Output::Report(CommandReport::ok(
                "cover",
                digest,
                json!({"epsilon2": cover.epsilon2, "links": links, "cover": cover}),
            )))
        }
        Command::Pattern { doc, depth } => {
            if depth == 0 {
                return Err(Failure::Usage("depth must be at least 1".to_string()));
            }
            let (doc, digest) = load_document("pattern", &doc.input)?;
            let fence = fence_only("pattern", &digest, &doc)?;
            let pattern = extract_pattern(fence, depth);
            Ok(Output::Report(CommandReport::ok(
                "pattern",
                digest,
                json!({"depth": depth, "pattern": pattern}),
            )))
        }
        Command::Realize { input, root } => {
            let bytes = read_input(&input)?;
            let digest = report::digest(&bytes);
            let value: serde_json::Value = serde_json::from_slice(&bytes)
                .map_err(|e| Failure::Usage(format!("parsing pattern: {e}")))?;
            let pattern_value = if value.get("levels").is_some() {
                value
            } else if let Some(p) = value.pointer("/result/pattern") {
                p.clone()
            } else {
                return Err(Failure::Usage(
                    "input is neither a pattern nor a pattern report".to_string(),
                ));
            };
            let pattern: ChainPattern = serde_json::from_value(pattern_value)
                .map_err(|e| Failure::Usage(format!("parsing pattern: {e}")))?;
            let root = root.unwrap_or_else(|| {
                Rect::new(Point::from_ints(0, 0), Point::from_ints(16, 16))
            });
            match realize_pattern(&pattern, &root) {
                Ok(realization) => {
                    let violations = validate_realization(&pattern, &realization);
                    assert!(violations.is_empty(), "realizations validate");
                    Ok(Output::Report(CommandReport::ok(
                        "realize",
                        digest,
                        json!({"root": root, "realization": realization}),
                    )))
                }
                Err(err) => Err(Failure::Violation(CommandReport::violation(
                    "realize",
                    digest,
                    json!({"error": err.to_string()}),
                ))),
            }
        }
        Command::Render { doc, center, r2, q2, realization } => {
            let (doc, _digest) = load_document("render", &doc.input)?;
            let mut probes = Vec::new();
            let mut bends = Vec::new();
            if let (Some(center), Some(r2)) = (center.clone(), r2.clone()) {
                probes.push(CircleProbe {
                    center: center.clone(),
                    r2: r2.clone(),
                });
                if let Some(q2) = q2.clone() {
                    probes.push(CircleProbe {
                        center: center.clone(),
                        r2: q2.clone(),
                    });
                    if let ModelPayload::Fence(fence) = &doc.payload {
                        let annulus = AnnulusProbe::new(center, q2, r2)
                            .map_err(|e| Failure::Usage(e.to_string()))?;
                        bends = find_bends(fence, &annulus)
                            .map_err(|e| Failure::Usage(e.to_string()))?;
                    }
                }
            }
            let realization = match realization {
                None => None,
                Some(path) => {
                    let bytes = read_input(&path)?;
                    let value: serde_json::Value = serde_json::from_slice(&bytes)
                        .map_err(|e| Failure::Usage(format!("parsing realization: {e}")))?;
                    let inner = value
                        .pointer("/result/realization")
                        .cloned()
                        .unwrap_or(value);
                    Some(
                        serde_json::from_value(inner)
                            .map_err(|e| Failure::Usage(format!("parsing realization: {e}")))?,
                    )
                }
            };
            let scene = render::Scene {
                model: &doc.payload,
                probes,
                bends,
                region: None,
                realization: realization.as_ref(),
            };
            Ok(Output::Raw(render::render_svg(&scene)))
        }
        Command::Experiment { which } => match which {
            ExperimentCommand::CombLimit { n } => {
                let digest = report::digest(format!("comb-limit --n {n}").as_bytes());
                let rep = experiment::comb_limit(n)
                    .map_err(|e| probe_violation("experiment comb-limit", digest.clone(), &e))?;
                Ok(Output::Report(CommandReport::ok(
                    "experiment comb-limit",
                    digest,
                    serde_json::to_value(&rep).expect("report serializes"),
                )))
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Output::Report(report)) => {
            print!("{}", report.render());
            ExitCode::from(0)
        }
        Ok(Output::Raw(text)) => {
            print!("{text}");
            ExitCode::from(0)
        }
        Err(Failure::Violation(report)) => {
            print!("{}", report.render());
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
