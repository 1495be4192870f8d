//! JSON documents: stacky fans, morphisms and constructible functions.

use std::fmt;
use std::path::{Path, PathBuf};

use ccc_core::lattice::{FinAbGroup, IntMatrix, LatticeMap};
use ccc_core::polyhedron::{Constraint, Region, Rel};
use ccc_core::{ConFun, Fan, Int, Rat, StackyFan, StackyMorphism};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";

/// Failures while reading a document, each with its own exit code.
#[derive(Debug)]
pub enum DocumentError {
    Parse { line: usize, column: usize, message: String },
    Schema(String),
    Validation(String),
}

impl DocumentError {
    pub fn exit_code(&self) -> i32 {
        match self {
            DocumentError::Parse { .. } => 2,
            DocumentError::Schema(_) => 3,
            DocumentError::Validation(_) => 4,
        }
    }
}

impl fmt::Display for DocumentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DocumentError::Parse { line, column, message } => {
                write!(f, "parse error at line {line}, column {column}: {message}")
            }
            DocumentError::Schema(m) => write!(f, "schema error: {m}"),
            DocumentError::Validation(m) => write!(f, "validation error: {m}"),
        }
    }
}

impl std::error::Error for DocumentError {}

type DocResult<T> = std::result::Result<T, DocumentError>;

fn invalid(e: impl fmt::Display) -> DocumentError {
    DocumentError::Validation(e.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDocument {
    pub free_rank: usize,
    pub torsion: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StackyFanDocument {
    pub schema_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub lattice_rank: usize,
    /// Maximal cones as ray lists; `[]` is the zero cone.
    pub cones: Vec<Vec<Vec<String>>>,
    #[serde(rename = "L")]
    pub group: GroupDocument,
    /// `β : M → L`, one row per generator of `L`.
    pub beta: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FanReference {
    Fixture {
        fixture: String,
    },
    Path {
        path: String,
    },
    Inline(Box<StackyFanDocument>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDocument {
    pub schema_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub source: FanReference,
    pub target: FanReference,
    #[serde(rename = "phi_N")]
    pub phi_n: Vec<Vec<String>>,
    #[serde(rename = "phi_L")]
    pub phi_l: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintDocument {
    pub normal: Vec<String>,
    /// One of `>=`, `>`, `=`.
    pub rel: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDocument {
    pub coefficient: String,
    pub region: Vec<ConstraintDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConFunDocument {
    pub schema_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub ambient: usize,
    pub terms: Vec<TermDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deck: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    StackyFan(StackyFanDocument),
    Morphism(MorphismDocument),
    ConFun(ConFunDocument),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::StackyFan(_) => "stacky fan",
            Document::Morphism(_) => "morphism",
            Document::ConFun(_) => "constructible function",
        }
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_canonical(&self) -> String {
        let s = match self {
            Document::StackyFan(d) => serde_json::to_string_pretty(d),
            Document::Morphism(d) => serde_json::to_string_pretty(d),
            Document::ConFun(d) => serde_json::to_string_pretty(d),
        };
        s.expect("documents serialize") + "\n"
    }
}

pub fn parse_document(bytes: &[u8]) -> DocResult<Document> {
    let value: Value = serde_json::from_slice(bytes).map_err(|e| DocumentError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let Value::Object(map) = &value else {
        return Err(DocumentError::Schema("top level must be an object".into()));
    };
    let schema = |e: serde_json::Error| DocumentError::Schema(e.to_string());
    let doc = if map.contains_key("phi_N") {
        Document::Morphism(serde_json::from_value(value).map_err(schema)?)
    } else if map.contains_key("terms") {
        Document::ConFun(serde_json::from_value(value).map_err(schema)?)
    } else {
        Document::StackyFan(serde_json::from_value(value).map_err(schema)?)
    };
    let version = match &doc {
        Document::StackyFan(d) => &d.schema_version,
        Document::Morphism(d) => &d.schema_version,
        Document::ConFun(d) => &d.schema_version,
    };
    if version != SCHEMA_VERSION {
        return Err(DocumentError::Schema(format!("unsupported schema_version {version:?}")));
    }
    Ok(doc)
}

pub fn parse_int(s: &str) -> DocResult<Int> {
    s.parse::<Int>().map_err(|_| DocumentError::Schema(format!("{s:?} is not a decimal integer")))
}

/// `"3"`, `"-1/2"`.
pub fn parse_rat(s: &str) -> DocResult<Rat> {
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(DocumentError::Schema(format!("{s:?} has a zero denominator")));
            }
            Ok(Rat::new(parse_int(n)?, d))
        }
    }
}

pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn int_rows(rows: &[Vec<String>]) -> DocResult<Vec<Vec<Int>>> {
    rows.iter().map(|r| r.iter().map(|s| parse_int(s)).collect()).collect()
}

fn matrix(rows: &[Vec<String>], rows_expected: usize, cols: usize, what: &str) -> DocResult<IntMatrix> {
    if rows.len() != rows_expected {
        return Err(invalid(format!("{what} needs {rows_expected} rows, found {}", rows.len())));
    }
    IntMatrix::from_rows(int_rows(rows)?, cols).map_err(|e| invalid(format!("{what}: {e}")))
}

pub fn string_rows(rows: &[Vec<Int>]) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

impl StackyFanDocument {
    pub fn to_stacky_fan(&self) -> DocResult<StackyFan> {
        let n = self.lattice_rank;
        let cones = self.cones.iter().map(|c| int_rows(c)).collect::<DocResult<Vec<_>>>()?;
        if let Some(r) = cones.iter().flatten().find(|r| r.len() != n) {
            return Err(invalid(format!("ray {r:?} does not have {n} coordinates")));
        }
        let fan = Fan::from_rays(n, &cones).map_err(invalid)?;
        let torsion = self.group.torsion.iter().map(|s| parse_int(s)).collect::<DocResult<Vec<_>>>()?;
        let group = FinAbGroup::new(self.group.free_rank, torsion).map_err(invalid)?;
        let beta = matrix(&self.beta, group.num_generators(), n, "beta")?;
        StackyFan::new(fan, group, beta).map_err(invalid)
    }

    pub fn from_stacky_fan(x: &StackyFan, name: Option<String>) -> Self {
        StackyFanDocument {
            schema_version: SCHEMA_VERSION.into(),
            name,
            lattice_rank: x.rank(),
            cones: x.fan().maximal_cones().iter().map(|c| string_rows(c.rays())).collect(),
            group: GroupDocument {
                free_rank: x.group().free_rank(),
                torsion: x.group().invariant_factors().iter().map(|d| d.to_string()).collect(),
            },
            beta: string_rows(&x.beta().matrix().rows_vec()),
        }
    }
}

/// Resolves fan references; `base` is the directory of the referring file.
pub trait FanResolver {
    fn resolve(&self, reference: &FanReference, base: Option<&Path>) -> DocResult<StackyFan>;
}

impl MorphismDocument {
    pub fn to_morphism(&self, resolver: &dyn FanResolver, base: Option<&Path>) -> DocResult<StackyMorphism> {
        let source = resolver.resolve(&self.source, base)?;
        let target = resolver.resolve(&self.target, base)?;
        let phi_n = matrix(&self.phi_n, target.rank(), source.rank(), "phi_N")?;
        let phi_l = matrix(&self.phi_l, source.group().num_generators(), target.group().num_generators(), "phi_L")?;
        StackyMorphism::new(source, target, LatticeMap::new(phi_n), phi_l).map_err(invalid)
    }
}

fn parse_rel(s: &str) -> DocResult<Rel> {
    match s {
        ">=" => Ok(Rel::Ge),
        ">" => Ok(Rel::Gt),
        "=" => Ok(Rel::Eq),
        other => Err(DocumentError::Schema(format!("unknown relation {other:?}"))),
    }
}

fn rel_str(r: Rel) -> &'static str {
    match r {
        Rel::Ge => ">=",
        Rel::Gt => ">",
        Rel::Eq => "=",
    }
}

impl ConFunDocument {
    pub fn to_confun(&self) -> DocResult<ConFun> {
        let n = self.ambient;
        let mut terms = Vec::new();
        for t in &self.terms {
            let mut cs = Vec::new();
            for c in &t.region {
                let normal = c.normal.iter().map(|s| parse_rat(s)).collect::<DocResult<Vec<_>>>()?;
                if normal.len() != n {
                    return Err(invalid(format!("constraint normal has {} entries, expected {n}", normal.len())));
                }
                cs.push(Constraint::new(normal, parse_rat(&c.rhs)?, parse_rel(&c.rel)?));
            }
            terms.push((parse_int(&t.coefficient)?, Region::new(n, cs)));
        }
        let f = ConFun::from_terms(n, terms).map_err(invalid)?;
        match &self.deck {
            None => Ok(f),
            Some(deck) => f.periodic(&int_rows(deck)?).map_err(invalid),
        }
    }

    pub fn from_confun(f: &ConFun, name: Option<String>) -> Self {
        let terms = f
            .terms()
            .iter()
            .map(|(c, r)| TermDocument {
                coefficient: c.to_string(),
                region: r
                    .constraints()
                    .iter()
                    .map(|k| ConstraintDocument {
                        normal: k.normal.iter().map(format_rat).collect(),
                        rel: rel_str(k.rel).into(),
                        rhs: format_rat(&k.rhs),
                    })
                    .collect(),
            })
            .collect();
        ConFunDocument {
            schema_version: SCHEMA_VERSION.into(),
            name,
            ambient: f.ambient(),
            terms,
            deck: f.deck().map(string_rows),
        }
    }
}

/// Resolves `{"fixture": ...}` from the embedded set and `{"path": ...}`
/// relative to the referring file.
pub struct DefaultResolver;

impl FanResolver for DefaultResolver {
    fn resolve(&self, reference: &FanReference, base: Option<&Path>) -> DocResult<StackyFan> {
        let doc = match reference {
            FanReference::Inline(d) => return d.to_stacky_fan(),
            FanReference::Fixture { fixture } => {
                let text = crate::fixtures::get(fixture)
                    .ok_or_else(|| invalid(format!("unknown fixture {fixture:?}")))?;
                parse_document(text.as_bytes())?
            }
            FanReference::Path { path } => {
                let full: PathBuf = base.map(|b| b.join(path)).unwrap_or_else(|| PathBuf::from(path));
                let bytes = std::fs::read(&full).map_err(|e| invalid(format!("{}: {e}", full.display())))?;
                parse_document(&bytes)?
            }
        };
        match doc {
            Document::StackyFan(d) => d.to_stacky_fan(),
            other => Err(invalid(format!("expected a stacky fan, found a {}", other.kind()))),
        }
    }
}
