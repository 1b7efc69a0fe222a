//! `hexspan` command-line tool.
//!
//! Exit codes:
//! - 0: success
//! - 1: I/O, parse or usage error
//! - 2: input not in general position (without `--auto-rotate`)
//! - 3: a check failed
//! - 4: the requested walk or sweep could not be built

use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hexspan::constructions::{expected_lower_bound_stretch, lower_bound_family};
use hexspan::delaunay::{
    build_hexagon_delaunay, build_shape_delaunay, check_general_position_for, DelaunayError, GeneralPositionReport,
    Triangulation,
};
use hexspan::geom::{general_position_rotation_for, Point, Side};
use hexspan::io::{read_points, rescale_to_unit_box, write_text, Envelope, UnitBoxTransform};
use hexspan::random::random_instance;
use hexspan::shape::{ConvexShape, ShapeKind};
use hexspan::spanner::{stretch_factor_with, StretchReport};
use hexspan::svg::{sweep_svg, triangulation_svg, walk_svg, witness_polygons};
use hexspan::sweep::{build_sweep_with, classify_transitions, SweepTrace};
use hexspan::verify::{verify_triangulation, VerifyOptions, VerifyReport};
use hexspan::walk::{decompose, find_gentle, WalkDecomposition, WalkError};

const EXIT_IO: u8 = 1;
const EXIT_GENERAL_POSITION: u8 = 2;
const EXIT_CHECK: u8 = 3;
const EXIT_WALK: u8 = 4;

/// Family sizes run by `lowerbound` when none is given.
const DEFAULT_FAMILY_KS: [usize; 6] = [1, 2, 5, 10, 50, 100];

#[derive(Parser, Debug)]
#[command(name = "hexspan", version, about = "Hexagon-Delaunay triangulations and their stretch factors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    args: Args,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Build the triangulation.
    Triangulate,
    /// Exact stretch factor.
    Stretch,
    /// Walk decomposition of one pair.
    Walk,
    /// Potential sweeps of one pair's gentle-free sections.
    Sweep,
    /// Run every check over the requested pairs.
    Verify,
    /// Measure the lower-bound family.
    Lowerbound,
    /// Stretch factors of seeded random instances against the shape's bound.
    RandomTest,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Triangulate => "triangulate",
            Command::Stretch => "stretch",
            Command::Walk => "walk",
            Command::Sweep => "sweep",
            Command::Verify => "verify",
            Command::Lowerbound => "lowerbound",
            Command::RandomTest => "random-test",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Text,
    Svg,
}

#[derive(clap::Args, Debug)]
struct Args {
    /// Point file: one "x y" per line, '#' comments.
    #[arg(long, global = true, conflicts_with_all = ["family", "random"])]
    input: Option<PathBuf>,
    /// Lower-bound family, as k=K.
    #[arg(long, global = true, value_parser = parse_family, conflicts_with = "random")]
    family: Option<usize>,
    /// Uniform random points in the unit square, as n=N.
    #[arg(long, global = true, value_parser = parse_random)]
    random: Option<usize>,
    /// Seed, or an inclusive range A..B for verify and random-test.
    #[arg(long, global = true, default_value = "0", value_parser = parse_seeds)]
    seed: Seeds,
    #[arg(long, global = true, default_value = "hexagon")]
    shape: ShapeKind,
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Rotate the input into general position instead of refusing it.
    #[arg(long, global = true)]
    auto_rotate: bool,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; does not change the output.
    #[arg(long, global = true, env = "HEXSPAN_THREADS")]
    threads: Option<usize>,
    /// Pair of point indices, as s=S t=T.
    #[arg(long, global = true, num_args = 2, value_names = ["s=S", "t=T"])]
    pair: Option<Vec<String>>,
    /// Section of the walk to sweep, as i=I j=J.
    #[arg(long, global = true, num_args = 2, value_names = ["i=I", "j=J"])]
    section: Option<Vec<String>>,
    /// Ratio matrix for stretch; every ordered pair for walk-based commands.
    #[arg(long, global = true)]
    all_pairs: bool,
    /// Draw one empty homothet per triangle in SVG output.
    #[arg(long, global = true)]
    witnesses: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Seeds(RangeInclusive<u64>);

impl Seeds {
    fn single(&self) -> Result<u64, Failure> {
        if self.0.start() == self.0.end() {
            Ok(*self.0.start())
        } else {
            Err(Failure::usage("a seed range is only accepted by verify and random-test"))
        }
    }
}

fn keyed(s: &str, key: &str) -> Result<usize, String> {
    let v = s
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| format!("expected {key}=<integer>, got '{s}'"))?;
    v.parse().map_err(|_| format!("expected {key}=<integer>, got '{s}'"))
}

fn parse_family(s: &str) -> Result<usize, String> {
    let k = keyed(s, "k")?;
    if k == 0 {
        return Err("k must be at least 1".into());
    }
    Ok(k)
}

fn parse_random(s: &str) -> Result<usize, String> {
    keyed(s, "n")
}

fn parse_seeds(s: &str) -> Result<Seeds, String> {
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| format!("bad seed '{s}'"));
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            let (a, b) = (num(a)?, num(b)?);
            if a > b {
                return Err(format!("empty seed range '{s}'"));
            }
            Ok(Seeds(a..=b))
        }
        None => {
            let a = num(s)?;
            Ok(Seeds(a..=a))
        }
    }
}

fn parse_two(v: &Option<Vec<String>>, a: &str, b: &str) -> Result<Option<(usize, usize)>, Failure> {
    match v {
        None => Ok(None),
        Some(v) => Ok(Some((
            keyed(&v[0], a).map_err(Failure::usage)?,
            keyed(&v[1], b).map_err(Failure::usage)?,
        ))),
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Failure::new(EXIT_IO, message)
    }
}

/// Points ready for triangulation, with how they were obtained.
struct Instance {
    points: Vec<Point>,
    transform: Option<UnitBoxTransform>,
    rotation: f64,
    family: Option<usize>,
}

fn general_position_failure(report: &GeneralPositionReport) -> Failure {
    let mut msg = format!(
        "general position violated ({} violations); rerun with --auto-rotate\n",
        report.violations.len()
    );
    for v in &report.violations {
        writeln!(msg, "  {:?} {:?}", v.kind, v.indices).unwrap();
    }
    Failure::new(EXIT_GENERAL_POSITION, msg)
}

fn load(args: &Args, seed: u64) -> Result<Instance, Failure> {
    let shape = ConvexShape::of_kind(args.shape);
    if let Some(k) = args.family {
        return Ok(Instance {
            points: lower_bound_family(k).points,
            transform: None,
            rotation: 0.0,
            family: Some(k),
        });
    }
    if let Some(n) = args.random {
        let inst = random_instance(n, seed, &shape).map_err(|e| Failure::usage(e.to_string()))?;
        return Ok(Instance {
            points: inst.points,
            transform: None,
            rotation: inst.angle,
            family: None,
        });
    }
    let path = args
        .input
        .as_ref()
        .ok_or_else(|| Failure::usage("one of --input, --family or --random is required"))?;
    let raw = read_points(path).map_err(|e| Failure::new(EXIT_IO, e.to_string()))?;
    let (points, transform) = rescale_to_unit_box(&raw);
    let report = check_general_position_for(&points, &shape);
    if report.is_clean() {
        return Ok(Instance {
            points,
            transform: Some(transform),
            rotation: 0.0,
            family: None,
        });
    }
    if !args.auto_rotate {
        return Err(general_position_failure(&report));
    }
    let (rotated, angle) =
        general_position_rotation_for(&raw, seed, &shape).map_err(|e| Failure::new(EXIT_GENERAL_POSITION, e.to_string()))?;
    let (points, transform) = rescale_to_unit_box(&rotated);
    Ok(Instance {
        points,
        transform: Some(transform),
        rotation: angle,
        family: None,
    })
}

fn triangulate(points: &[Point], shape: ShapeKind) -> Result<Triangulation, Failure> {
    let built = match shape {
        ShapeKind::Hexagon => build_hexagon_delaunay(points),
        k => build_shape_delaunay(points, &ConvexShape::of_kind(k)),
    };
    built.map_err(|e| match e {
        DelaunayError::TooFewPoints(_) => Failure::usage(e.to_string()),
        DelaunayError::GeneralPosition(r) => general_position_failure(&r),
        other => Failure::new(EXIT_GENERAL_POSITION, format!("{other}; rerun with --auto-rotate")),
    })
}

fn require_hexagon(args: &Args, what: &str) -> Result<(), Failure> {
    if args.shape != ShapeKind::Hexagon {
        return Err(Failure::usage(format!("{what} is defined for the hexagon only")));
    }
    Ok(())
}

fn reject_format(args: &Args, allowed: &[Format], what: &str) -> Result<(), Failure> {
    if !allowed.contains(&args.format) {
        return Err(Failure::usage(format!("{what} has no {:?} output", args.format).to_lowercase()));
    }
    Ok(())
}

/// Rendered output and whether every check passed.
struct Output {
    text: String,
    passed: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, passed: true }
    }
}

fn json<T: Serialize>(cmd: Command, inst: Option<&Instance>, result: T) -> String {
    let mut s = Envelope::new(cmd.name(), inst.and_then(|i| i.transform), result).to_json();
    s.push('\n');
    s
}

#[derive(Serialize)]
struct TriangulateResult<'a> {
    shape: ShapeKind,
    rotation: f64,
    points: &'a [Point],
    triangles: &'a [[usize; 3]],
    general_position: GeneralPositionReport,
}

fn cmd_triangulate(args: &Args) -> Result<Output, Failure> {
    let inst = load(args, args.seed.single()?)?;
    let tri = triangulate(&inst.points, args.shape)?;
    Ok(Output::ok(match args.format {
        Format::Svg => {
            let w = if args.witnesses {
                witness_polygons(&tri, &ConvexShape::of_kind(args.shape))
            } else {
                Vec::new()
            };
            triangulation_svg(&tri, &w, &[])
        }
        Format::Text => {
            let mut s = format!("{} points, {} triangles\n", tri.points.len(), tri.triangles.len());
            for t in &tri.triangles {
                writeln!(s, "{} {} {}", t[0], t[1], t[2]).unwrap();
            }
            s
        }
        Format::Json => json(
            Command::Triangulate,
            Some(&inst),
            TriangulateResult {
                shape: args.shape,
                rotation: inst.rotation,
                points: &tri.points,
                triangles: &tri.triangles,
                general_position: check_general_position_for(&tri.points, &ConvexShape::of_kind(args.shape)),
            },
        ),
    }))
}

fn stretch_of(points: &[Point], shape: ShapeKind, all_pairs: bool) -> Result<StretchReport, Failure> {
    if points.len() == 2 {
        return Ok(StretchReport {
            max_ratio: 1.0,
            witness_pair: (0, 1),
            witness_path: vec![0, 1],
            excluded_pairs: Vec::new(),
            ratios: all_pairs.then(|| vec![vec![0.0, 1.0], vec![1.0, 0.0]]),
        });
    }
    let tri = triangulate(points, shape)?;
    stretch_factor_with(&tri, all_pairs).map_err(|e| Failure::new(EXIT_CHECK, e.to_string()))
}

#[derive(Serialize)]
struct StretchResult {
    shape: ShapeKind,
    rotation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<f64>,
    #[serde(flatten)]
    report: StretchReport,
}

fn cmd_stretch(args: &Args) -> Result<Output, Failure> {
    reject_format(args, &[Format::Json, Format::Text], "stretch")?;
    let inst = load(args, args.seed.single()?)?;
    let report = stretch_of(&inst.points, args.shape, args.all_pairs)?;
    let expected = inst.family.map(expected_lower_bound_stretch);
    Ok(Output::ok(match args.format {
        Format::Text => {
            let mut s = format!(
                "max_ratio {:.12}\nwitness {} {}\npath {:?}\n",
                report.max_ratio, report.witness_pair.0, report.witness_pair.1, report.witness_path
            );
            if let Some(e) = expected {
                writeln!(s, "expected {e:.12}").unwrap();
            }
            if let Some(r) = &report.ratios {
                for row in r {
                    let cells: Vec<String> = row.iter().map(|v| format!("{v:.6}")).collect();
                    writeln!(s, "{}", cells.join(" ")).unwrap();
                }
            }
            s
        }
        _ => json(
            Command::Stretch,
            Some(&inst),
            StretchResult {
                shape: args.shape,
                rotation: inst.rotation,
                expected,
                report,
            },
        ),
    }))
}

fn required_pair(args: &Args) -> Result<(usize, usize), Failure> {
    parse_two(&args.pair, "s", "t")?.ok_or_else(|| Failure::usage("--pair s=S t=T is required"))
}

fn walk_of(tri: &Triangulation, s: usize, t: usize) -> Result<WalkDecomposition, Failure> {
    let n = tri.points.len();
    if s >= n || t >= n || s == t {
        return Err(Failure::usage(format!("pair ({s}, {t}) is not two distinct points of {n}")));
    }
    decompose(tri, s, t).map_err(|e| {
        let hint = match e {
            WalkError::DegenerateCrossing(_) => "; rerun with --auto-rotate",
            WalkError::PointOnSegment(_) => "; split the pair at that point",
            _ => "",
        };
        Failure::new(EXIT_WALK, format!("walk {s}-{t}: {e}{hint}"))
    })
}

fn cmd_walk(args: &Args) -> Result<Output, Failure> {
    require_hexagon(args, "walk")?;
    let inst = load(args, args.seed.single()?)?;
    let tri = triangulate(&inst.points, args.shape)?;
    let (s, t) = required_pair(args)?;
    let walk = walk_of(&tri, s, t)?;
    Ok(Output::ok(match args.format {
        Format::Svg => walk_svg(&tri, &walk.tri_seq, s, t),
        Format::Text => {
            let mut out = format!("walk {s}-{t}: {} triangles\n", walk.n());
            for k in 1..=walk.n() {
                writeln!(
                    out,
                    "T{k} {:?} u {} l {}",
                    walk.tri(k),
                    walk.upper[k - 1],
                    walk.lower[k - 1]
                )
                .unwrap();
            }
            out
        }
        Format::Json => json(Command::Walk, Some(&inst), &walk),
    }))
}

#[derive(Serialize)]
struct SweepEntry {
    section: (usize, usize),
    p: usize,
    q: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<SweepTrace>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn sweeps_of(walk: &WalkDecomposition, section: Option<(usize, usize)>) -> Result<Vec<SweepEntry>, Failure> {
    let n = walk.n();
    let sections: Vec<(usize, usize)> = match section {
        Some((i, j)) if 1 <= i && i <= j && j <= n => vec![(i, j)],
        Some((i, j)) => return Err(Failure::usage(format!("section ({i}, {j}) is outside 1..={n}"))),
        None => (1..=n).flat_map(|i| (i..=n).map(move |j| (i, j))).collect(),
    };
    let mut out = Vec::new();
    for (i, j) in sections {
        let gentle = match find_gentle(walk, i, j) {
            Ok(g) if !g.has_gentle_edge() => g,
            _ => continue,
        };
        for p in walk.tri(i) {
            if !walk.touches(i, p, Side::W) {
                continue;
            }
            for q in walk.tri(j) {
                if !walk.touches(j, q, Side::E) {
                    continue;
                }
                let (trace, error) = match build_sweep_with(walk, i, j, p, q, &gentle) {
                    Ok(t) => (Some(t), None),
                    Err(e) => (None, Some(e.to_string())),
                };
                out.push(SweepEntry {
                    section: (i, j),
                    p,
                    q,
                    trace,
                    error,
                });
            }
        }
    }
    Ok(out)
}

fn cmd_sweep(args: &Args) -> Result<Output, Failure> {
    require_hexagon(args, "sweep")?;
    let inst = load(args, args.seed.single()?)?;
    let tri = triangulate(&inst.points, args.shape)?;
    let (s, t) = required_pair(args)?;
    let walk = walk_of(&tri, s, t)?;
    let entries = sweeps_of(&walk, parse_two(&args.section, "i", "j")?)?;
    let first = entries.iter().find_map(|e| e.trace.as_ref());
    Ok(Output::ok(match args.format {
        Format::Svg => {
            let trace = first.ok_or_else(|| Failure::new(EXIT_WALK, format!("walk {s}-{t}: no sweep could be built")))?;
            sweep_svg(trace)
        }
        Format::Text => {
            let mut out = format!("walk {s}-{t}: {} sweeps\n", entries.len());
            for e in &entries {
                match (&e.trace, &e.error) {
                    (Some(tr), _) => {
                        let labels = classify_transitions(tr)
                            .map(|l| l.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" "))
                            .unwrap_or_else(|e| e.to_string());
                        writeln!(
                            out,
                            "section {:?} p {} q {}: P(x_end) {:.12} 2 d_pq {:.12} labels {labels}",
                            e.section,
                            e.p,
                            e.q,
                            tr.final_potential(),
                            2.0 * tr.d_pq
                        )
                        .unwrap();
                    }
                    (None, Some(err)) => {
                        writeln!(out, "section {:?} p {} q {}: {err}", e.section, e.p, e.q).unwrap()
                    }
                    (None, None) => {}
                }
            }
            out
        }
        Format::Json => json(Command::Sweep, Some(&inst), &entries),
    }))
}

#[derive(Serialize)]
struct InstanceSummary {
    seed: u64,
    rotation: f64,
    passed: bool,
    failed_checks: Vec<String>,
}

#[derive(Serialize)]
struct VerifyResult {
    passed: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    instances: Vec<InstanceSummary>,
    report: VerifyReport,
}

fn verify_text(r: &VerifyReport) -> String {
    let mut s = format!(
        "points {} pairs {} walks {} splits {} gentle-free sections {} sweeps {} path-free sweeps {}\n",
        r.points, r.pairs, r.walks, r.splits, r.gentle_free_sections, r.sweeps, r.path_free_sweeps
    );
    for (k, v) in &r.walk_skipped {
        writeln!(s, "skipped walks ({k}): {v}").unwrap();
    }
    for (name, t) in &r.checks {
        let verdict = if t.passed() { "pass" } else { "FAIL" };
        writeln!(s, "{verdict} {name}: {} checked, {} failed", t.checked, t.failed).unwrap();
    }
    for m in &r.messages {
        writeln!(s, "  {m}").unwrap();
    }
    s
}

fn cmd_verify(args: &Args) -> Result<Output, Failure> {
    reject_format(args, &[Format::Json, Format::Text], "verify")?;
    require_hexagon(args, "verify")?;
    let pairs = parse_two(&args.pair, "s", "t")?.map(|p| vec![p]);
    let opts = VerifyOptions {
        pairs,
        tol: args.tol,
        ..VerifyOptions::default()
    };
    let seeds: Vec<u64> = if args.random.is_some() {
        args.seed.0.clone().collect()
    } else {
        vec![args.seed.single()?]
    };
    let mut total = VerifyReport::default();
    let mut instances = Vec::new();
    let mut last = None;
    for &seed in &seeds {
        let inst = load(args, seed)?;
        let tri = triangulate(&inst.points, args.shape)?;
        if let Some(ps) = &opts.pairs {
            let n = tri.points.len();
            if ps.iter().any(|&(s, t)| s >= n || t >= n || s == t) {
                return Err(Failure::usage(format!("--pair is not two distinct points of {n}")));
            }
        }
        let rep = verify_triangulation(&tri, &opts);
        if args.random.is_some() {
            instances.push(InstanceSummary {
                seed,
                rotation: inst.rotation,
                passed: rep.passed(),
                failed_checks: rep.checks.iter().filter(|(_, t)| !t.passed()).map(|(k, _)| k.clone()).collect(),
            });
        }
        total.points += rep.points;
        total.merge(rep);
        last = Some(inst);
    }
    total.messages.truncate(opts.max_messages);
    let passed = total.passed();
    let text = match args.format {
        Format::Text => verify_text(&total),
        _ => json(
            Command::Verify,
            if seeds.len() == 1 { last.as_ref() } else { None },
            VerifyResult {
                passed,
                instances,
                report: total,
            },
        ),
    };
    Ok(Output { text, passed })
}

#[derive(Serialize)]
struct FamilyRow {
    k: usize,
    triangles: usize,
    ladder: bool,
    measured: f64,
    expected: f64,
    diff: f64,
    passed: bool,
}

#[derive(Serialize)]
struct LowerboundResult {
    tol: f64,
    increasing: bool,
    passed: bool,
    rows: Vec<FamilyRow>,
}

fn sorted(mut t: Vec<[usize; 3]>) -> Vec<[usize; 3]> {
    for x in &mut t {
        let m = (0..3).min_by_key(|&i| x[i]).unwrap();
        x.rotate_left(m);
    }
    t.sort();
    t
}

fn cmd_lowerbound(args: &Args) -> Result<Output, Failure> {
    reject_format(args, &[Format::Json, Format::Text], "lowerbound")?;
    let ks: Vec<usize> = match args.family {
        Some(k) => vec![k],
        None => DEFAULT_FAMILY_KS.to_vec(),
    };
    let mut rows = Vec::new();
    for k in ks {
        let fam = lower_bound_family(k);
        let tri = triangulate(&fam.points, ShapeKind::Hexagon)?;
        let ladder = sorted(tri.triangles.clone()) == sorted(fam.ladder_triangles());
        let measured = stretch_factor_with(&tri, false)
            .map_err(|e| Failure::new(EXIT_CHECK, e.to_string()))?
            .max_ratio;
        let expected = expected_lower_bound_stretch(k);
        let diff = (measured - expected).abs();
        rows.push(FamilyRow {
            k,
            triangles: tri.triangles.len(),
            ladder,
            measured,
            expected,
            diff,
            passed: ladder && diff <= args.tol,
        });
    }
    let increasing = rows.windows(2).all(|w| w[1].measured > w[0].measured);
    let passed = increasing && rows.iter().all(|r| r.passed);
    let text = match args.format {
        Format::Text => {
            let mut s = String::from("k triangles ladder measured expected diff\n");
            for r in &rows {
                writeln!(
                    s,
                    "{} {} {} {:.12} {:.12} {:.3e}",
                    r.k, r.triangles, r.ladder, r.measured, r.expected, r.diff
                )
                .unwrap();
            }
            writeln!(s, "{}", if passed { "pass" } else { "FAIL" }).unwrap();
            s
        }
        _ => json(
            Command::Lowerbound,
            None,
            LowerboundResult {
                tol: args.tol,
                increasing,
                passed,
                rows,
            },
        ),
    };
    Ok(Output { text, passed })
}

/// Proven stretch bound of each shape's Delaunay triangulation.
fn shape_bound(shape: ShapeKind) -> f64 {
    match shape {
        ShapeKind::Square => (4.0 + 2.0 * 2f64.sqrt()).sqrt(),
        ShapeKind::Hexagon | ShapeKind::Triangle => 2.0,
        ShapeKind::Custom => f64::INFINITY,
    }
}

#[derive(Serialize)]
struct RandomRow {
    seed: u64,
    rotation: f64,
    max_ratio: f64,
    witness_pair: (usize, usize),
}

#[derive(Serialize)]
struct RandomTestResult {
    shape: ShapeKind,
    n: usize,
    bound: f64,
    tol: f64,
    max_ratio: f64,
    passed: bool,
    rows: Vec<RandomRow>,
}

fn cmd_random_test(args: &Args) -> Result<Output, Failure> {
    reject_format(args, &[Format::Json, Format::Text], "random-test")?;
    let n = args.random.ok_or_else(|| Failure::usage("--random n=N is required"))?;
    let bound = shape_bound(args.shape);
    let mut rows = Vec::new();
    for seed in args.seed.0.clone() {
        let inst = load(args, seed)?;
        let r = stretch_of(&inst.points, args.shape, false)?;
        rows.push(RandomRow {
            seed,
            rotation: inst.rotation,
            max_ratio: r.max_ratio,
            witness_pair: r.witness_pair,
        });
    }
    let max_ratio = rows.iter().map(|r| r.max_ratio).fold(1.0, f64::max);
    let passed = max_ratio <= bound + args.tol;
    let text = match args.format {
        Format::Text => {
            let mut s = String::new();
            for r in &rows {
                writeln!(s, "seed {} max_ratio {:.12}", r.seed, r.max_ratio).unwrap();
            }
            writeln!(
                s,
                "{} max {max_ratio:.12} bound {bound:.12}",
                if passed { "pass" } else { "FAIL" }
            )
            .unwrap();
            s
        }
        _ => json(
            Command::RandomTest,
            None,
            RandomTestResult {
                shape: args.shape,
                n,
                bound,
                tol: args.tol,
                max_ratio,
                passed,
                rows,
            },
        ),
    };
    Ok(Output { text, passed })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let args = &cli.args;
    if !(args.tol > 0.0) {
        return Err(Failure::usage("--tol must be positive"));
    }
    if args.format == Format::Svg && !matches!(cli.command, Command::Triangulate | Command::Walk | Command::Sweep) {
        return Err(Failure::usage(format!("{} has no svg output", cli.command.name())));
    }
    if let Some(t) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::usage(e.to_string()))?;
    }
    match cli.command {
        Command::Triangulate => cmd_triangulate(args),
        Command::Stretch => cmd_stretch(args),
        Command::Walk => cmd_walk(args),
        Command::Sweep => cmd_sweep(args),
        Command::Verify => cmd_verify(args),
        Command::Lowerbound => cmd_lowerbound(args),
        Command::RandomTest => cmd_random_test(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_IO } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            match &cli.args.out {
                Some(path) => {
                    if let Err(e) = write_text(path, &out.text) {
                        eprintln!("error: {e}");
                        return ExitCode::from(EXIT_IO);
                    }
                }
                None => print!("{}", out.text),
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: checks failed");
                ExitCode::from(EXIT_CHECK)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
