pub mod document;
pub mod fixtures;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use ccc_core::cone::cone_from_rays;
use ccc_core::skeleton::CovectorPoint;
use ccc_core::{
    abc_factorization, complete_fan, confun_equal, convolve, decide_left_functorial, decide_right_functorial,
    fltz_skeleton, smooth_refine, star_quotient, unit_chi, Cone, ConFun, Fan, Int, StackyFan, StackyMorphism,
};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::document::{
    parse_document, parse_int, parse_rat, string_rows, ConFunDocument, DefaultResolver, Document, DocumentError,
    StackyFanDocument,
};

#[derive(Debug, Parser)]
#[command(name = "ccc", version, about = "Stacky fans, their skeleta and constructible functions")]
pub struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Print counterexample points for negative verdicts.
    #[arg(long, global = true)]
    pub witness: bool,
    /// Read the input from a built-in fixture instead of a file.
    #[arg(long, global = true, value_name = "NAME")]
    pub fixture: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Is the stacky fan a scheme, and a variety?
    Classify { input: Option<String> },
    /// The conic skeleton of a stacky fan in its cotangent bundle.
    Skeleton { input: Option<String> },
    /// Is a covector point on the skeleton?
    Member {
        input: Option<String>,
        /// Comma-separated point of M_R, e.g. `1/2,0`.
        #[arg(long, allow_hyphen_values = true)]
        base: String,
        /// Comma-separated covector in N_R.
        #[arg(long, allow_hyphen_values = true)]
        covector: String,
    },
    /// Is the morphism left-functorial?
    LeftFunctorial { input: Option<String> },
    /// Is the morphism right-functorial?
    RightFunctorial { input: Option<String> },
    /// Factor a fan morphism out of a smooth complete fan as c∘b∘a.
    Factor { input: Option<String> },
    /// Smooth refinement of the fan.
    Refine { input: Option<String> },
    /// A complete fan containing the fan.
    Complete { input: Option<String> },
    /// Star of a cone and its quotient fan.
    Star {
        input: Option<String>,
        /// Rays of the cone separated by `;`, e.g. `1,0;1,2`. Empty for the zero cone.
        #[arg(long, allow_hyphen_values = true)]
        cone: String,
    },
    /// Euler characteristic of the unit object.
    UnitChi { input: Option<String> },
    /// Convolution of two constructible functions.
    Convolve { first: String, second: String },
    /// Are two constructible functions equal?
    Equal { first: String, second: String },
}

/// A failure that is not about the input document.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

pub struct Report {
    pub text: String,
    pub json: Value,
    /// `Some` for yes/no questions.
    pub verdict: Option<bool>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Some(false) => 1,
            _ => 0,
        }
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            serde_json::to_string(&self.json).expect("reports serialize") + "\n"
        } else {
            self.text.clone()
        }
    }
}

/// Exit code for an error returned by [`run`].
pub fn exit_code(err: &anyhow::Error) -> i32 {
    if let Some(d) = err.downcast_ref::<DocumentError>() {
        d.exit_code()
    } else if err.downcast_ref::<UsageError>().is_some() {
        64
    } else {
        5
    }
}

fn load(arg: Option<&str>, fixture: Option<&str>) -> anyhow::Result<(Document, Option<PathBuf>)> {
    let from_fixture = |name: &str| -> anyhow::Result<(Document, Option<PathBuf>)> {
        let text = fixtures::get(name).ok_or_else(|| UsageError(format!("unknown fixture {name:?}")))?;
        Ok((parse_document(text.as_bytes())?, None))
    };
    match (fixture, arg) {
        (Some(name), None) => from_fixture(name),
        (Some(_), Some(_)) => Err(UsageError("give either a file or --fixture, not both".into()).into()),
        (None, None) => Err(UsageError("missing input file".into()).into()),
        (None, Some(path)) => {
            let p = Path::new(path);
            if p.exists() {
                let bytes = std::fs::read(p).with_context(|| format!("reading {path}"))?;
                Ok((parse_document(&bytes)?, p.parent().map(Path::to_path_buf)))
            } else if fixtures::get(path).is_some() {
                from_fixture(path)
            } else {
                Err(UsageError(format!("{path}: no such file or fixture")).into())
            }
        }
    }
}

fn wrong_kind(expected: &str, doc: &Document) -> anyhow::Error {
    DocumentError::Validation(format!("expected a {expected}, found a {}", doc.kind())).into()
}

fn stacky_fan(arg: Option<&str>, fixture: Option<&str>) -> anyhow::Result<StackyFan> {
    match load(arg, fixture)?.0 {
        Document::StackyFan(d) => Ok(d.to_stacky_fan()?),
        other => Err(wrong_kind("stacky fan", &other)),
    }
}

fn morphism(arg: Option<&str>, fixture: Option<&str>) -> anyhow::Result<StackyMorphism> {
    let (doc, base) = load(arg, fixture)?;
    match doc {
        Document::Morphism(d) => Ok(d.to_morphism(&DefaultResolver, base.as_deref())?),
        other => Err(wrong_kind("morphism", &other)),
    }
}

fn confun(arg: &str) -> anyhow::Result<ConFun> {
    match load(Some(arg), None)?.0 {
        Document::ConFun(d) => Ok(d.to_confun()?),
        other => Err(wrong_kind("constructible function", &other)),
    }
}

fn rat_list(s: &str) -> anyhow::Result<Vec<ccc_core::Rat>> {
    s.split(',')
        .map(|x| parse_rat(x.trim()).map_err(|e| UsageError(e.to_string()).into()))
        .collect()
}

fn vec_str(v: &[Int]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn cone_json(c: &Cone) -> Value {
    json!(string_rows(c.rays()))
}

fn fan_json(f: &Fan) -> Value {
    json!({
        "lattice_rank": f.ambient_rank(),
        "cones": f.maximal_cones().iter().map(cone_json).collect::<Vec<_>>(),
    })
}

fn fan_text(f: &Fan) -> String {
    let mut out = String::new();
    for c in f.maximal_cones() {
        let _ = writeln!(out, "  {c}");
    }
    out
}

pub fn run(cli: &Cli) -> anyhow::Result<Report> {
    let fx = cli.fixture.as_deref();
    match &cli.command {
        Command::Classify { input } => {
            let c = stacky_fan(input.as_deref(), fx)?.classify()?;
            let mut text = format!("scheme: {}\nvariety: {}\n", c.is_scheme, c.is_variety);
            if let Some(cone) = &c.failing_cone {
                let _ = writeln!(text, "failing cone: {cone}");
            }
            Ok(Report { text, json: json!({"is_scheme": c.is_scheme, "is_variety": c.is_variety}), verdict: None })
        }
        Command::Skeleton { input } => {
            let x = stacky_fan(input.as_deref(), fx)?;
            let s = fltz_skeleton(&x);
            let mut text = format!("skeleton in T*(M_R/ker β), rank {}\n", s.rank());
            let mut pieces = Vec::new();
            for p in &s.pieces {
                let subspace: Vec<String> = p.subspace.iter().map(|v| vec_str(v)).collect();
                let _ = writeln!(text, "  span⟨{}⟩ × {}", subspace.join(","), p.fiber);
                pieces.push(json!({
                    "cone": p.cone.as_ref().map(cone_json),
                    "subspace": string_rows(&p.subspace),
                    "fiber": cone_json(&p.fiber),
                }));
            }
            Ok(Report { text, json: json!({"rank": s.rank(), "pieces": pieces}), verdict: None })
        }
        Command::Member { input, base, covector } => {
            let x = stacky_fan(input.as_deref(), fx)?;
            let pt = CovectorPoint::new(rat_list(base)?, rat_list(covector)?);
            if pt.base.len() != x.rank() || pt.covector.len() != x.rank() {
                bail!(UsageError(format!("points need {} coordinates", x.rank())));
            }
            let yes = fltz_skeleton(&x).contains(&pt)?;
            Ok(Report { text: format!("member: {yes}\n"), json: json!({"member": yes}), verdict: Some(yes) })
        }
        Command::LeftFunctorial { input } => {
            let v = decide_left_functorial(&morphism(input.as_deref(), fx)?)?;
            let mut text = format!("left-functorial: {}\n", v.verdict);
            let mut out = json!({"verdict": v.verdict});
            if cli.witness {
                if let Some(w) = &v.witness {
                    let _ = writeln!(text, "witness: {} lies over the target support but not in the source support", vec_str(w));
                    out["witness"] = json!(w.iter().map(|x| x.to_string()).collect::<Vec<_>>());
                }
                if let Some(c) = &v.covector_witness {
                    let cov: Vec<String> = c.covector.iter().map(document::format_rat).collect();
                    let _ = writeln!(text, "covector witness: base 0, covector ({})", cov.join(","));
                    out["covector_witness"] = json!(cov);
                }
            }
            Ok(Report { text, json: out, verdict: Some(v.verdict) })
        }
        Command::RightFunctorial { input } => {
            let v = decide_right_functorial(&morphism(input.as_deref(), fx)?)?;
            let mut text = format!("right-functorial: {}\n", v.verdict);
            for c in &v.per_cone {
                let _ = writeln!(text, "  {}: image is a cone {}, saturated {}", c.cone, c.image_is_cone, c.saturated);
            }
            if let (Some(c), Some(k)) = (&v.failing_cone, v.failing_condition) {
                let _ = writeln!(text, "fails condition ({k}) at {c}");
            }
            let per_cone: Vec<Value> = v
                .per_cone
                .iter()
                .map(|c| json!({"cone": cone_json(&c.cone), "image_is_cone": c.image_is_cone, "saturated": c.saturated}))
                .collect();
            let out = json!({
                "verdict": v.verdict,
                "failing_cone": v.failing_cone.as_ref().map(cone_json),
                "failing_condition": v.failing_condition,
                "cones": per_cone,
            });
            Ok(Report { text, json: out, verdict: Some(v.verdict) })
        }
        Command::Factor { input } => {
            let phi = morphism(input.as_deref(), fx)?;
            let abc = abc_factorization(phi.fan_morphism())?;
            let (a, b, c) = (abc.a.map().matrix(), abc.b.map().matrix(), abc.c.map().matrix());
            let text = format!(
                "a = {a}\nb = {b}\nc = {c}\nsmooth fan ({} maximal cones):\n{}",
                abc.smooth_fan.maximal_cones().len(),
                fan_text(&abc.smooth_fan)
            );
            let out = json!({
                "a": string_rows(&a.rows_vec()),
                "b": string_rows(&b.rows_vec()),
                "c": string_rows(&c.rows_vec()),
                "smooth_fan": fan_json(&abc.smooth_fan),
            });
            Ok(Report { text, json: out, verdict: None })
        }
        Command::Refine { input } => {
            let x = stacky_fan(input.as_deref(), fx)?;
            let refined = smooth_refine(x.fan())?;
            let y = StackyFan::new(refined, x.group().clone(), x.beta().matrix().clone())?;
            let doc = StackyFanDocument::from_stacky_fan(&y, None);
            Ok(Report { text: format!("smooth refinement:\n{}", fan_text(y.fan())), json: json!(doc), verdict: None })
        }
        Command::Complete { input } => {
            let x = stacky_fan(input.as_deref(), fx)?;
            let (fan, refined) = complete_fan(x.fan())?;
            let y = StackyFan::new(fan, x.group().clone(), x.beta().matrix().clone())?;
            let doc = StackyFanDocument::from_stacky_fan(&y, None);
            let text = format!("completion (input refined: {refined}):\n{}", fan_text(y.fan()));
            Ok(Report { text, json: json!({"refined": refined, "stacky_fan": doc}), verdict: None })
        }
        Command::Star { input, cone } => {
            let x = stacky_fan(input.as_deref(), fx)?;
            let n = x.rank();
            let mut rays = Vec::new();
            for part in cone.split(';').map(str::trim).filter(|s| !s.is_empty()) {
                let r: Vec<Int> = part
                    .split(',')
                    .map(|s| parse_int(s.trim()).map_err(|e| anyhow!(UsageError(e.to_string()))))
                    .collect::<anyhow::Result<_>>()?;
                if r.len() != n {
                    bail!(UsageError(format!("ray {part} needs {n} coordinates")));
                }
                rays.push(r);
            }
            let tau = cone_from_rays(n, &rays)?;
            let q = star_quotient(x.fan(), &tau)?;
            let mut text = format!("star of {tau}:\n");
            for c in &q.star {
                let _ = writeln!(text, "  {c}");
            }
            let _ = write!(text, "quotient fan in rank {}:\n{}", q.quotient_fan.ambient_rank(), fan_text(&q.quotient_fan));
            let out = json!({
                "star": q.star.iter().map(cone_json).collect::<Vec<_>>(),
                "quotient_fan": fan_json(&q.quotient_fan),
                "projection": string_rows(&q.projection.matrix().rows_vec()),
            });
            Ok(Report { text, json: out, verdict: None })
        }
        Command::UnitChi { input } => {
            let f = unit_chi(&stacky_fan(input.as_deref(), fx)?)?;
            let doc = ConFunDocument::from_confun(&f, None);
            Ok(Report { text: format!("{f}\n"), json: json!(doc), verdict: None })
        }
        Command::Convolve { first, second } => {
            let h = convolve(&confun(first)?, &confun(second)?)?;
            let doc = ConFunDocument::from_confun(&h, None);
            Ok(Report { text: format!("{h}\n"), json: json!(doc), verdict: None })
        }
        Command::Equal { first, second } => {
            let yes = confun_equal(&confun(first)?, &confun(second)?)?;
            Ok(Report { text: format!("equal: {yes}\n"), json: json!({"equal": yes}), verdict: Some(yes) })
        }
    }
}

/// Parses `argv`, runs the command and returns the exit code, writing the
/// report to `out` and diagnostics to `err`.
pub fn main_with(argv: &[String], out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match run(&cli) {
        Ok(report) => {
            let _ = out.write_all(report.render(cli.json).as_bytes());
            report.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            exit_code(&e)
        }
    }
}
