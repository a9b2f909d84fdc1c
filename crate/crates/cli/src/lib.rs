//! JSON file formats for algebras, complexes and chain maps, and the
//! rendering of reports, shared by the `silting` binary and its tests.
//!
//! Complexes name vertices by label and paths by arrow names, so the same
//! file can be read over any algebra with matching labels; this is how sets
//! over `eAe` and `A/AeA` are fed to `glue`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use silting_core::complex::{ChainMap, PathMatrix, ProjComplex};
use silting_core::linalg::{Field, Scalar};
use silting_core::quiver::{AlgebraElement, PathAlgebra, Quiver};
use silting_core::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed or inconsistent input: exit code 2.
    #[error("{0}")]
    Input(String),
    /// A computation or certificate failed: exit code 1.
    #[error("{0}")]
    Math(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Math(_) => 1,
        }
    }
}

/// Precondition failures are input errors; anything else is mathematical.
impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) | Error::Linalg(_) => CliError::Math(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

/// A vertex label; numbers are accepted and read as their decimal form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Text(String),
    Number(i64),
}

impl Label {
    pub fn as_string(&self) -> String {
        match self {
            Label::Text(s) => s.clone(),
            Label::Number(n) => n.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArrowSpec {
    pub name: String,
    pub from: Label,
    pub to: Label,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraFile {
    #[serde(default = "version")]
    pub v: u32,
    pub field: String,
    pub vertices: Vec<Label>,
    #[serde(default)]
    pub arrows: Vec<ArrowSpec>,
}

fn version() -> u32 {
    FORMAT_VERSION
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Path(String),
    Inline(AlgebraFile),
}

/// `"e:<vertex>"` or a list of arrow names.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PathSpec {
    Trivial(String),
    Arrows(Vec<String>),
}

/// An integer or a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Int(i64),
    Text(String),
}

pub type Entry = Vec<(PathSpec, Coeff)>;
pub type MatrixSpec = Vec<Vec<Entry>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexFile {
    #[serde(default = "version")]
    pub v: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraRef>,
    pub components: BTreeMap<String, Vec<Label>>,
    #[serde(default)]
    pub differentials: BTreeMap<String, MatrixSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapFile {
    #[serde(default = "version")]
    pub v: u32,
    pub source: ComplexFile,
    pub target: ComplexFile,
    pub components: BTreeMap<String, MatrixSpec>,
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input(format!("{}: {e}", path.display())))
}

pub fn build_algebra(file: &AlgebraFile, field_override: Option<Field>) -> Result<Arc<PathAlgebra>, CliError> {
    if file.v != FORMAT_VERSION {
        return Err(input(format!("unsupported format version {}", file.v)));
    }
    let field = match field_override {
        Some(f) => f,
        None => Field::parse(&file.field).ok_or_else(|| input(format!("field: cannot parse `{}`", file.field)))?,
    };
    let vertices: Vec<String> = file.vertices.iter().map(Label::as_string).collect();
    let arrows: Vec<(String, String, String)> = file
        .arrows
        .iter()
        .map(|a| (a.name.clone(), a.from.as_string(), a.to.as_string()))
        .collect();
    let q = Quiver::new(&vertices, &arrows).map_err(|e| input(e.to_string()))?;
    Ok(Arc::new(PathAlgebra::new(q, field).map_err(|e| input(e.to_string()))?))
}

pub fn load_algebra(path: &Path, field_override: Option<Field>) -> Result<Arc<PathAlgebra>, CliError> {
    let file: AlgebraFile = read_json(path)?;
    build_algebra(&file, field_override).map_err(|e| match e {
        CliError::Input(m) => input(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn algebra_to_file(alg: &PathAlgebra) -> AlgebraFile {
    let q = alg.quiver();
    AlgebraFile {
        v: FORMAT_VERSION,
        field: alg.field().to_string(),
        vertices: q.vertices().iter().cloned().map(Label::Text).collect(),
        arrows: q
            .arrows()
            .iter()
            .map(|a| ArrowSpec {
                name: a.name.clone(),
                from: Label::Text(q.vertices()[a.source].clone()),
                to: Label::Text(q.vertices()[a.target].clone()),
            })
            .collect(),
    }
}

fn same_quiver(a: &PathAlgebra, b: &PathAlgebra) -> bool {
    a.quiver() == b.quiver()
}

fn parse_degree(key: &str, at: &str) -> Result<i32, CliError> {
    key.trim().parse().map_err(|_| input(format!("{at}: degree key `{key}` is not an integer")))
}

fn parse_coeff(c: &Coeff, field: Field, at: &str) -> Result<Scalar, CliError> {
    match c {
        Coeff::Int(n) => Ok(field.from_i64(*n)),
        Coeff::Text(s) => field.parse_scalar(s).ok_or_else(|| input(format!("{at}: bad coefficient `{s}`"))),
    }
}

fn parse_entry(alg: &PathAlgebra, entry: &Entry, at: &str) -> Result<AlgebraElement, CliError> {
    let mut out = AlgebraElement::zero();
    for (t, (spec, c)) in entry.iter().enumerate() {
        let here = format!("{at}[{t}]");
        let idx = match spec {
            PathSpec::Trivial(s) => {
                let label = s.strip_prefix("e:").ok_or_else(|| input(format!("{here}: path `{s}` is neither `e:<vertex>` nor a list of arrows")))?;
                let v = alg.quiver().vertex_index(label).ok_or_else(|| input(format!("{here}: unknown vertex `{label}`")))?;
                alg.idempotent_index(v)
            }
            PathSpec::Arrows(names) if names.is_empty() => return Err(input(format!("{here}: empty arrow list"))),
            PathSpec::Arrows(names) => alg.path_by_names(names).map_err(|e| input(format!("{here}: {e}")))?,
        };
        out.add_term(idx, parse_coeff(c, alg.field(), &here)?);
    }
    Ok(out)
}

fn parse_matrix(alg: &PathAlgebra, m: &MatrixSpec, rows: &[usize], cols: &[usize], at: &str) -> Result<PathMatrix, CliError> {
    if m.len() != rows.len() || m.iter().any(|r| r.len() != cols.len()) {
        return Err(input(format!("{at}: expected a {}×{} matrix", rows.len(), cols.len())));
    }
    let mut out = PathMatrix::zero(rows, cols);
    for (i, row) in m.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            out.set(i, j, parse_entry(alg, e, &format!("{at}[{i}][{j}]"))?);
        }
    }
    Ok(out)
}

fn parse_components(alg: &PathAlgebra, file: &BTreeMap<String, Vec<Label>>, at: &str) -> Result<BTreeMap<i32, Vec<usize>>, CliError> {
    let mut comps = BTreeMap::new();
    for (k, labels) in file {
        let n = parse_degree(k, at)?;
        let vs = labels
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let l = l.as_string();
                alg.quiver()
                    .vertex_index(&l)
                    .ok_or_else(|| input(format!("{at}.{k}[{i}]: unknown vertex `{l}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        comps.insert(n, vs);
    }
    Ok(comps)
}

/// Reads `file` over `alg`, resolving labels and arrow names; a declared
/// algebra must have the same quiver.
pub fn complex_from_file(file: &ComplexFile, alg: &Arc<PathAlgebra>, base: Option<&Path>) -> Result<ProjComplex, CliError> {
    if file.v != FORMAT_VERSION {
        return Err(input(format!("unsupported format version {}", file.v)));
    }
    if let Some(r) = &file.algebra {
        let declared = resolve_algebra(r, base, Some(alg.field()))?;
        if !same_quiver(&declared, alg) {
            return Err(input("algebra: the complex is declared over a different quiver"));
        }
    }
    let comps = parse_components(alg, &file.components, "components")?;
    let mut diffs = BTreeMap::new();
    for (k, m) in &file.differentials {
        let n = parse_degree(k, "differentials")?;
        let empty = Vec::new();
        let rows = comps.get(&(n + 1)).unwrap_or(&empty);
        let cols = comps.get(&n).unwrap_or(&empty);
        diffs.insert(n, parse_matrix(alg, m, rows, cols, &format!("differentials.{k}"))?);
    }
    ProjComplex::new(alg.clone(), comps, diffs).map_err(|e| input(e.to_string()))
}

pub fn resolve_algebra(r: &AlgebraRef, base: Option<&Path>, field_override: Option<Field>) -> Result<Arc<PathAlgebra>, CliError> {
    match r {
        AlgebraRef::Inline(a) => build_algebra(a, field_override),
        AlgebraRef::Path(p) => {
            let path = match base {
                Some(b) => b.join(p),
                None => PathBuf::from(p),
            };
            load_algebra(&path, field_override)
        }
    }
}

/// One complex or a JSON list of complexes.
#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(Box<ComplexFile>),
    Many(Vec<ComplexFile>),
}

fn read_complex_files(path: &Path) -> Result<Vec<ComplexFile>, CliError> {
    Ok(match read_json::<OneOrMany>(path)? {
        OneOrMany::One(c) => vec![*c],
        OneOrMany::Many(v) => v,
    })
}

fn with_path<T>(path: &Path, r: Result<T, CliError>) -> Result<T, CliError> {
    r.map_err(|e| match e {
        CliError::Input(m) => input(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Loads the complexes in `path`. Without `over`, each file must declare its
/// algebra; all complexes must then share it.
pub fn load_complexes(path: &Path, over: Option<&Arc<PathAlgebra>>, field_override: Option<Field>) -> Result<Vec<ProjComplex>, CliError> {
    let base = path.parent();
    let mut out: Vec<ProjComplex> = Vec::new();
    for (i, file) in read_complex_files(path)?.iter().enumerate() {
        let alg = match (over, out.first(), &file.algebra) {
            (Some(a), _, _) => a.clone(),
            (None, Some(prev), _) if file.algebra.is_none() => prev.algebra().clone(),
            (None, _, Some(r)) => with_path(path, resolve_algebra(r, base, field_override))?,
            (None, _, None) => return Err(input(format!("{}[{i}]: no algebra given", path.display()))),
        };
        let alg = match out.first() {
            Some(prev) if same_quiver(prev.algebra(), &alg) && prev.algebra().field() == alg.field() => prev.algebra().clone(),
            Some(_) => return Err(input(format!("{}[{i}]: complexes live over different algebras", path.display()))),
            None => alg,
        };
        out.push(with_path(path, complex_from_file(file, &alg, base))?);
    }
    Ok(out)
}

pub fn load_complex(path: &Path, over: Option<&Arc<PathAlgebra>>, field_override: Option<Field>) -> Result<ProjComplex, CliError> {
    let mut v = load_complexes(path, over, field_override)?;
    if v.len() != 1 {
        return Err(input(format!("{}: expected a single complex, found {}", path.display(), v.len())));
    }
    Ok(v.remove(0))
}

fn coeff_of(s: &Scalar) -> Coeff {
    match s.to_i64() {
        Some(n) => Coeff::Int(n),
        None => Coeff::Text(s.to_string()),
    }
}

fn entry_of(alg: &PathAlgebra, x: &AlgebraElement) -> Entry {
    x.terms()
        .map(|(i, c)| {
            let p = alg.path(i);
            let spec = if p.arrows.is_empty() {
                PathSpec::Trivial(format!("e:{}", alg.vertex_label(p.source)))
            } else {
                PathSpec::Arrows(p.arrows.iter().map(|&a| alg.quiver().arrows()[a].name.clone()).collect())
            };
            (spec, coeff_of(c))
        })
        .collect()
}

fn matrix_of(alg: &PathAlgebra, m: &PathMatrix) -> MatrixSpec {
    (0..m.rows().len())
        .map(|i| (0..m.cols().len()).map(|j| entry_of(alg, m.get(i, j))).collect())
        .collect()
}

pub fn complex_to_file(x: &ProjComplex, algebra: Option<AlgebraRef>) -> ComplexFile {
    let alg = x.algebra();
    let components = x
        .degrees()
        .map(|n| {
            let labels = x.component(n).iter().map(|&v| Label::Text(alg.vertex_label(v).to_string())).collect();
            (n.to_string(), labels)
        })
        .collect();
    let differentials = x
        .degrees()
        .filter_map(|n| x.differential(n).map(|d| (n.to_string(), matrix_of(alg, d))))
        .collect();
    ComplexFile {
        v: FORMAT_VERSION,
        algebra,
        components,
        differentials,
    }
}

/// A complex with its algebra inlined, so the output is self-contained.
pub fn complex_json(x: &ProjComplex) -> Value {
    serde_json::to_value(complex_to_file(x, Some(AlgebraRef::Inline(algebra_to_file(x.algebra()))))).expect("serializable")
}

pub fn map_to_file(f: &ChainMap) -> MapFile {
    let alg = f.source().algebra();
    let inline = || Some(AlgebraRef::Inline(algebra_to_file(alg)));
    MapFile {
        v: FORMAT_VERSION,
        source: complex_to_file(f.source(), inline()),
        target: complex_to_file(f.target(), inline()),
        components: f.components().iter().map(|(n, m)| (n.to_string(), matrix_of(alg, m))).collect(),
    }
}

pub fn map_from_file(file: &MapFile, alg: &Arc<PathAlgebra>) -> Result<ChainMap, CliError> {
    let source = complex_from_file(&file.source, alg, None)?;
    let target = complex_from_file(&file.target, alg, None)?;
    let mut comps = BTreeMap::new();
    for (k, m) in &file.components {
        let n = parse_degree(k, "components")?;
        comps.insert(n, parse_matrix(alg, m, target.component(n), source.component(n), &format!("components.{k}"))?);
    }
    ChainMap::new(source, target, comps).map_err(|e| input(e.to_string()))
}

pub fn map_json(f: &ChainMap) -> Value {
    serde_json::to_value(map_to_file(f)).expect("serializable")
}

/// Sorted `(complex, multiplicity)` classes as JSON.
pub fn classes_json(classes: &[(ProjComplex, usize)]) -> Value {
    Value::Array(
        classes
            .iter()
            .map(|(c, m)| json!({ "summand": c.describe(), "multiplicity": m, "complex": complex_json(c) }))
            .collect(),
    )
}

/// The KA₃ example files: name and contents.
pub const FIXTURES: [(&str, &str); 8] = [
    ("a3.json", include_str!("../fixtures/a3.json")),
    ("c_silting.json", include_str!("../fixtures/c_silting.json")),
    ("b_silting.json", include_str!("../fixtures/b_silting.json")),
    ("b_canonical.json", include_str!("../fixtures/b_canonical.json")),
    ("i2.json", include_str!("../fixtures/i2.json")),
    ("s2.json", include_str!("../fixtures/s2.json")),
    ("p3.json", include_str!("../fixtures/p3.json")),
    ("loop.json", include_str!("../fixtures/loop.json")),
];

pub fn write_fixtures(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|e| input(format!("{}: {e}", dir.display())))?;
    FIXTURES
        .iter()
        .map(|(name, body)| {
            let p = dir.join(name);
            fs::write(&p, body).map_err(|e| input(format!("{}: {e}", p.display())))?;
            Ok(p)
        })
        .collect()
}
