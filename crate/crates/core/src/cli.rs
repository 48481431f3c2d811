//! Command-line front end: argument parsing, report rendering and exit codes.
//!
//! Exit codes: 0 success, 1 internal error, 2 usage or unsupported input,
//! 3 non-reduced or non-minimal word, 4 invalid point, 5 verification
//! mismatch, 6 enumeration budget exceeded.

use std::io::Write;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cartan::{bruhat_leq, coset_fixed_points, is_reduced, CartanDatum, ParabolicType, WeylElement, Word};
use crate::chevalley::{enumerate_points_fq, sample_check_cell, FieldSpec, SignTable, DEFAULT_BUDGET};
use crate::error::Error;
use crate::fibre::{
    deodhar_polynomial, distinguished_polynomial, fibration_split_check, fibre_report, FibreCell, FibreReport, FixedPoint,
    Relation, Sign, SignSource, TargetWalls,
};
use crate::gallery::{bs_cells_report, enumerate_galleries, half_space_test, wall_sequence, GalleryType, IndexSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_WORD: i32 = 3;
pub const EXIT_POINT: i32 = 4;
pub const EXIT_MISMATCH: i32 = 5;
pub const EXIT_BUDGET: i32 = 6;

/// Prime used for sampling the cell equations.
const SAMPLING_PRIME: u64 = 101;

#[derive(Parser, Debug)]
#[command(name = "bsfibre", version, about = "Cells of Bott-Samelson varieties and fibres of their resolution")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cellular decomposition of the Bott-Samelson variety.
    Cells(Common),
    /// Cells, equations and components of the fibre over fixed points.
    Fibre(FibreArgs),
    /// Check the predictions against the matrix model over a finite field (type A).
    Verify(VerifyArgs),
    /// Fibre point-count polynomial from subexpressions of the word.
    Deodhar(DeodharArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Cartan type, e.g. A3, B2, G2.
    cartan: String,
    /// Comma-separated 1-based letters, source first.
    #[arg(long, default_value = "")]
    word: String,
    /// Comma-separated simple indices of the target face type.
    #[arg(long, default_value = "")]
    target_type: String,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Shorthand for --format json.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct FibreArgs {
    #[command(flatten)]
    common: Common,
    /// Fixed point as a word, `e`, or `all`.
    #[arg(long, default_value = "all")]
    point: String,
    #[arg(long, value_enum, default_value_t = WallsArg::Full)]
    target_walls: WallsArg,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Prime field size for the point census.
    #[arg(long, default_value_t = 2)]
    q: u64,
    /// Seed for the sampled checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest number of points the census may visit.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Samples per cell, on and off the cell equations.
    #[arg(long, default_value_t = 100)]
    trials: usize,
}

#[derive(Args, Debug)]
struct DeodharArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "all")]
    point: String,
    /// Count only distinguished subexpressions, weighted by their defect.
    #[arg(long)]
    distinguished: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum WallsArg {
    Full,
    Simple,
}

impl From<WallsArg> for TargetWalls {
    fn from(w: WallsArg) -> TargetWalls {
        match w {
            WallsArg::Full => TargetWalls::Full,
            WallsArg::Simple => TargetWalls::Simple,
        }
    }
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Failure {
        Failure { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::InvalidCartanType { .. } | Error::InvalidLetter { .. } | Error::NotARoot(_) => EXIT_USAGE,
            Error::UnsupportedType(_) | Error::NotPrime(_) | Error::WordTooLong { .. } => EXIT_USAGE,
            Error::NonReducedWord(_) | Error::NotMinimalCosetRep { .. } => EXIT_WORD,
            Error::PointNotInVariety(_) | Error::TargetMismatch { .. } => EXIT_POINT,
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            Error::UnresolvedSigns | Error::MalformedStructure(_) | Error::InvariantViolation(_) => EXIT_INTERNAL,
        };
        Failure::new(code, e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut buffer = Vec::new();
    let result = match &cli.command {
        Command::Cells(c) => cmd_cells(c, &mut buffer),
        Command::Fibre(f) => cmd_fibre(f, &mut buffer),
        Command::Verify(v) => cmd_verify(v, &mut buffer),
        Command::Deodhar(d) => cmd_deodhar(d, &mut buffer),
    };
    match result {
        Ok(()) => {
            let _ = out.write_all(&buffer);
            EXIT_OK
        }
        Err(f) => {
            // Reports that failed verification are still shown; JSON is never
            // emitted partially because it is rendered in one piece at the end.
            if f.code == EXIT_MISMATCH {
                let _ = out.write_all(&buffer);
            }
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

struct Setup {
    tau: GalleryType,
    format: Format,
}

impl Setup {
    fn datum(&self) -> &CartanDatum {
        self.tau.datum()
    }

    fn json(&self) -> bool {
        self.format == Format::Json
    }
}

fn setup(c: &Common) -> std::result::Result<Setup, Failure> {
    let datum: CartanDatum = c.cartan.parse()?;
    let word: Word = c.word.parse().map_err(|e| Failure::new(EXIT_USAGE, format!("invalid word: {e}")))?;
    let target_type: ParabolicType =
        c.target_type.parse().map_err(|e| Failure::new(EXIT_USAGE, format!("invalid target type: {e}")))?;
    let tau = GalleryType::new(Arc::new(datum), word, target_type)?;
    let format = if c.json { Format::Json } else { c.format };
    Ok(Setup { tau, format })
}

fn point_label(datum: &CartanDatum, u: &WeylElement) -> String {
    u.label(datum)
}

/// Resolves `--point` to fixed points of the Schubert variety.
fn points(s: &Setup, spec: &str) -> std::result::Result<Vec<WeylElement>, Failure> {
    let d = s.datum();
    let t0 = s.tau.target_type();
    if spec.trim() == "all" {
        return Ok(coset_fixed_points(d, s.tau.word(), t0)?);
    }
    let word: Word = spec.parse().map_err(|e| Failure::new(EXIT_POINT, format!("invalid point {spec:?}: {e}")))?;
    word.validate(d).map_err(|e| Failure::new(EXIT_POINT, format!("invalid point {spec:?}: {e}")))?;
    if !is_reduced(d, &word) {
        return Err(Failure::new(EXIT_POINT, format!("point word ({word}) is not reduced")));
    }
    let w = WeylElement::from_word(d, &word)?;
    let u = crate::cartan::min_coset_rep(d, &w, t0);
    if !bruhat_leq(d, &u, s.tau.element()) {
        return Err(Error::PointNotInVariety(point_label(d, &u)).into());
    }
    Ok(vec![u])
}

fn write_json(out: &mut dyn Write, value: &Value) -> Outcome {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::new(EXIT_INTERNAL, e.to_string()))?;
    writeln!(out, "{text}").map_err(|e| Failure::new(EXIT_INTERNAL, e.to_string()))
}

fn io(e: std::io::Error) -> Failure {
    Failure::new(EXIT_INTERNAL, e.to_string())
}

fn indices_json(set: &IndexSet) -> Value {
    json!(set.to_vec())
}

fn header(s: &Setup) -> String {
    let t0 = s.tau.target_type();
    let target = if t0.is_empty() { String::new() } else { format!(" target type {{{t0}}}") };
    format!("{} word ({}){target}", s.datum().name(), s.tau.word())
}

fn cmd_cells(c: &Common, out: &mut dyn Write) -> Outcome {
    let s = setup(c)?;
    let report = bs_cells_report(&s.tau);
    let d = s.datum();
    if s.json() {
        let rows: Vec<Value> = report
            .rows
            .iter()
            .map(|r| json!({"gallery": r.gallery.to_string(), "J": indices_json(&r.load_bearing), "dim": r.dim(), "target": point_label(d, &r.target)}))
            .collect();
        return write_json(
            out,
            &json!({"cartan": d.name(), "word": s.tau.word().letters(), "target_type": s.tau.target_type().generators(), "cells": rows, "poincare": report.poincare}),
        );
    }
    writeln!(out, "{}", header(&s)).map_err(io)?;
    let width = s.tau.len().max(7);
    writeln!(out, "{:<width$}  {:<16}  {:>3}  target", "gallery", "J", "dim").map_err(io)?;
    for r in &report.rows {
        writeln!(out, "{:<width$}  {:<16}  {:>3}  {}", r.gallery.to_string(), r.load_bearing.to_string(), r.dim(), point_label(d, &r.target))
            .map_err(io)?;
    }
    writeln!(out, "poincare {:?}", report.poincare).map_err(io)
}

fn sign_source(d: &CartanDatum) -> Option<SignTable> {
    SignTable::type_a(d).ok()
}

fn relation_text(rel: &Relation) -> String {
    let mut text = format!("x{}", rel.lead);
    for &(f, sign) in &rel.terms {
        let op = match sign {
            Sign::Plus => "-",
            Sign::Minus => "+",
            Sign::Unresolved => "+-",
        };
        text.push_str(&format!(" {op} x{f}"));
    }
    text + " = 0"
}

fn cell_json(cell: &FibreCell) -> Value {
    let relations: Vec<Value> = cell
        .equations
        .relations
        .iter()
        .map(|rel| {
            let terms: Vec<Value> = rel.terms.iter().map(|&(f, sign)| json!([f, sign.value()])).collect();
            json!({"lead": rel.lead, "terms": terms})
        })
        .collect();
    json!({
        "gallery": cell.gallery.to_string(),
        "J": indices_json(&cell.load_bearing),
        "J2": indices_json(&cell.j2),
        "zero": indices_json(&cell.equations.zero_indices),
        "relations": relations,
        "dim": cell.dim,
    })
}

struct FibreRun {
    report: FibreReport,
    deodhar: Vec<u64>,
}

impl FibreRun {
    fn matches(&self) -> bool {
        self.report.poincare == self.deodhar
    }
}

fn fibre_runs(s: &Setup, us: &[WeylElement], walls: TargetWalls) -> std::result::Result<Vec<FibreRun>, Failure> {
    let d = s.datum();
    let t0 = s.tau.target_type();
    let signs = sign_source(d);
    let signs = signs.as_ref().map(|t| t as &dyn SignSource);
    us.iter()
        .map(|u| {
            let x = FixedPoint::new(d, u, t0, walls);
            let report = fibre_report(&s.tau, &x, signs)?;
            let deodhar = deodhar_polynomial(d, s.tau.word(), t0, u)?;
            Ok(FibreRun { report, deodhar })
        })
        .collect()
}

fn fibre_json(s: &Setup, run: &FibreRun) -> Value {
    let d = s.datum();
    let rep = &run.report;
    json!({
        "point": point_label(d, rep.point.u()),
        "cells": rep.cells.iter().map(cell_json).collect::<Vec<_>>(),
        "poincare": rep.poincare,
        "dim": rep.dim,
        "components": rep.components.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        "connected": rep.connected,
        "deodhar": run.deodhar,
        "match": run.matches(),
    })
}

fn write_fibre_table(s: &Setup, run: &FibreRun, out: &mut dyn Write) -> Outcome {
    let d = s.datum();
    let rep = &run.report;
    writeln!(out, "point {}", point_label(d, rep.point.u())).map_err(io)?;
    let width = s.tau.len().max(7);
    writeln!(out, "  {:<width$}  {:<14}  {:<14}  {:>3}  equations", "gallery", "J", "J2", "dim").map_err(io)?;
    for cell in &rep.cells {
        let mut eqs: Vec<String> = cell.equations.zero_indices.iter().map(|j| format!("x{j} = 0")).collect();
        eqs.extend(cell.equations.relations.iter().map(relation_text));
        let eqs = if eqs.is_empty() { "-".to_string() } else { eqs.join(", ") };
        writeln!(
            out,
            "  {:<width$}  {:<14}  {:<14}  {:>3}  {eqs}",
            cell.gallery.to_string(),
            cell.load_bearing.to_string(),
            cell.j2.to_string(),
            cell.dim
        )
        .map_err(io)?;
    }
    let components: Vec<String> = rep.components.iter().map(|g| g.to_string()).collect();
    writeln!(
        out,
        "  poincare {:?}  dim {}  components {}  connected {}",
        rep.poincare,
        rep.dim,
        components.join(" "),
        if rep.connected { "yes" } else { "no" }
    )
    .map_err(io)?;
    writeln!(out, "  deodhar {:?}  match {}", run.deodhar, if run.matches() { "yes" } else { "no" }).map_err(io)
}

fn cmd_fibre(f: &FibreArgs, out: &mut dyn Write) -> Outcome {
    let s = setup(&f.common)?;
    let single = f.point.trim() != "all";
    let us = points(&s, &f.point)?;
    let walls: TargetWalls = f.target_walls.into();
    let runs = fibre_runs(&s, &us, walls)?;
    let d = s.datum();
    if s.json() {
        let base = json!({
            "cartan": d.name(),
            "word": s.tau.word().letters(),
            "target_type": s.tau.target_type().generators(),
            "target_walls": walls.to_string(),
        });
        let mut value = base;
        let obj = value.as_object_mut().expect("object literal");
        if single {
            if let Value::Object(fields) = fibre_json(&s, &runs[0]) {
                obj.extend(fields);
            }
        } else {
            obj.insert("fibres".to_string(), Value::Array(runs.iter().map(|r| fibre_json(&s, r)).collect()));
        }
        return write_json(out, &value);
    }
    writeln!(out, "{}", header(&s)).map_err(io)?;
    for run in &runs {
        write_fibre_table(&s, run, out)?;
    }
    Ok(())
}

fn cmd_deodhar(a: &DeodharArgs, out: &mut dyn Write) -> Outcome {
    let s = setup(&a.common)?;
    let us = points(&s, &a.point)?;
    let d = s.datum();
    let t0 = s.tau.target_type();
    let mut rows = Vec::new();
    for u in &us {
        let poly = if a.distinguished {
            distinguished_polynomial(d, s.tau.word(), t0, u)?
        } else {
            deodhar_polynomial(d, s.tau.word(), t0, u)?
        };
        rows.push((point_label(d, u), poly));
    }
    if s.json() {
        let points: Vec<Value> = rows.iter().map(|(p, poly)| json!({"point": p, "polynomial": poly})).collect();
        return write_json(
            out,
            &json!({"cartan": d.name(), "word": s.tau.word().letters(), "target_type": t0.generators(), "distinguished": a.distinguished, "points": points}),
        );
    }
    writeln!(out, "{}", header(&s)).map_err(io)?;
    for (p, poly) in rows {
        writeln!(out, "point {p}  {poly:?}").map_err(io)?;
    }
    Ok(())
}

/// One failed comparison.
struct Mismatch(String);

fn cmd_verify(v: &VerifyArgs, out: &mut dyn Write) -> Outcome {
    let s = setup(&v.common)?;
    let d = s.datum();
    let t0 = s.tau.target_type();
    let field = FieldSpec::new(v.q)?;
    let census = enumerate_points_fq(&s.tau, field, v.budget)?;
    let q = v.q;
    let pow = |e: usize| q.pow(e as u32);

    let mut mismatches: Vec<Mismatch> = Vec::new();
    let mut lines: Vec<(String, String, String, bool)> = Vec::new();
    let compare = |what: String, seen: String, expected: String, lines: &mut Vec<_>, mismatches: &mut Vec<Mismatch>| {
        let ok = seen == expected;
        if !ok {
            mismatches.push(Mismatch(format!("{what}: counted {seen}, predicted {expected}")));
        }
        lines.push((what, seen, expected, ok));
    };

    let expected_total = (q as u128 + 1).pow(s.tau.len() as u32);
    compare("total".to_string(), census.total.to_string(), expected_total.to_string(), &mut lines, &mut mismatches);

    let cells = bs_cells_report(&s.tau);
    for row in &cells.rows {
        let seen = census.per_class.get(&row.gallery).copied().unwrap_or(0);
        compare(format!("class {}", row.gallery), seen.to_string(), pow(row.dim()).to_string(), &mut lines, &mut mismatches);
    }

    let us = coset_fixed_points(d, s.tau.word(), t0)?;
    let runs = fibre_runs(&s, &us, TargetWalls::Full)?;
    for run in &runs {
        let u = run.report.point.u();
        let seen = census.per_point.iter().find(|(w, _)| w == u).map_or(0, |(_, c)| *c);
        let predicted: u64 = run.report.poincare.iter().enumerate().map(|(p, n)| n * pow(p)).sum();
        compare(format!("fibre {}", point_label(d, u)), seen.to_string(), predicted.to_string(), &mut lines, &mut mismatches);
    }
    let stray: u64 = census.per_point.iter().filter(|(w, _)| !us.contains(w)).map(|(_, c)| c).sum();
    compare("points over other fixed points".to_string(), stray.to_string(), "0".to_string(), &mut lines, &mut mismatches);

    // Structural identities on every gallery.
    let mut structural = 0usize;
    for gamma in enumerate_galleries(&s.tau) {
        let signs: Vec<bool> = wall_sequence(&s.tau, &gamma).iter().map(|w| w.load_bearing).collect();
        if signs != half_space_test(&s.tau, &gamma) {
            mismatches.push(Mismatch(format!("gallery {gamma}: load-bearing tests disagree")));
        }
        if !fibration_split_check(&s.tau, &gamma)? {
            mismatches.push(Mismatch(format!("gallery {gamma}: j differs from fibre dimension plus length")));
        }
        structural += 1;
    }
    for run in &runs {
        for cell in &run.report.cells {
            if !cell.relation_tests_agree() {
                mismatches.push(Mismatch(format!("gallery {}: relation tests disagree", cell.gallery)));
            }
        }
        if !run.matches() {
            mismatches.push(Mismatch(format!("fibre {}: subexpression count differs", point_label(d, run.report.point.u()))));
        }
    }

    // Sampled membership checks of the cell equations over a larger field.
    let sampling = FieldSpec::new(SAMPLING_PRIME)?;
    let mut rng = ChaCha8Rng::seed_from_u64(v.seed);
    let mut sampled = 0usize;
    let mut sample_failures: Vec<String> = Vec::new();
    for run in &runs {
        for cell in &run.report.cells {
            let outcome = sample_check_cell(&s.tau, &cell.gallery, &run.report.point, sampling, v.trials, &mut rng)?;
            sampled += 1;
            if let Some(ce) = outcome.counterexample {
                sample_failures.push(format!("over {}: {ce}", point_label(d, run.report.point.u())));
            }
        }
    }
    mismatches.extend(sample_failures.iter().map(|m| Mismatch(format!("cell equations: {m}"))));

    if s.json() {
        let census_rows: Vec<Value> =
            lines.iter().map(|(w, seen, exp, ok)| json!({"check": w, "counted": seen, "predicted": exp, "ok": ok})).collect();
        write_json(
            out,
            &json!({
                "cartan": d.name(),
                "word": s.tau.word().letters(),
                "target_type": t0.generators(),
                "q": q,
                "seed": v.seed,
                "census": census_rows,
                "galleries_checked": structural,
                "cells_sampled": sampled,
                "sample_failures": sample_failures,
                "pass": mismatches.is_empty(),
            }),
        )?;
    } else {
        writeln!(out, "{} over F_{q}: {} points", header(&s), census.total).map_err(io)?;
        writeln!(out, "  {:<32}  {:>10}  {:>10}", "check", "counted", "predicted").map_err(io)?;
        for (what, seen, exp, ok) in &lines {
            writeln!(out, "  {what:<32}  {seen:>10}  {exp:>10}{}", if *ok { "" } else { "  MISMATCH" }).map_err(io)?;
        }
        writeln!(out, "  structural checks on {structural} galleries; {sampled} cells sampled over F_{SAMPLING_PRIME}").map_err(io)?;
        writeln!(out, "{}", if mismatches.is_empty() { "pass" } else { "FAIL" }).map_err(io)?;
    }
    match mismatches.first() {
        None => Ok(()),
        Some(Mismatch(m)) => Err(Failure::new(EXIT_MISMATCH, m.clone())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["bsfibre"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn relation_rendering() {
        let rel = Relation { wall: crate::cartan::Root::from_coeffs(&[1, 0]), lead: 4, terms: vec![(2, Sign::Plus), (1, Sign::Minus)] };
        assert_eq!(relation_text(&rel), "x4 - x2 + x1 = 0");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["cells", "A2", "--word", "1,2,1"]).0, EXIT_OK);
        assert_eq!(call(&["cells", "A2", "--word", "1,1"]).0, EXIT_WORD);
        assert_eq!(call(&["cells", "Q2", "--word", "1"]).0, EXIT_USAGE);
        assert_eq!(call(&["cells", "A2", "--word", "x"]).0, EXIT_USAGE);
        assert_eq!(call(&["nonsense"]).0, EXIT_USAGE);
        assert_eq!(call(&["fibre", "A2", "--word", "1,2,1", "--point", "2,1,2,1"]).0, EXIT_POINT);
        assert_eq!(call(&["fibre", "A2", "--word", "1,2", "--point", "2,1"]).0, EXIT_POINT);
        assert_eq!(call(&["verify", "B2", "--word", "1,2,1,2"]).0, EXIT_USAGE);
        assert_eq!(call(&["verify", "A3", "--word", "2,1,3,2", "--q", "3", "--budget", "10"]).0, EXIT_BUDGET);
        assert_eq!(call(&["verify", "A2", "--word", "1,2,1", "--q", "4"]).0, EXIT_USAGE);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }
}
