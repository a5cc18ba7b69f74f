//! The `solvcohom` pipeline: resolve a manifold or raw bicomplex, then emit
//! dimension tables, generators, decompositions and formality verdicts.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use solvcohom_core::bicomplex::BicomplexJson;
use solvcohom_core::builder::{
    build_b, build_c, build_closure, classify_g8, preset, preset_case, Family, SplittingData, ALL_CASES,
};
use solvcohom_core::decomposition::decompose;
use solvcohom_core::formality::{formality_report, massey_from_text, MasseyWitness, WITNESS_TRIPLES};
use solvcohom_core::report::{DecompositionRecord, DimsTable, GeneratorTable};
use solvcohom_core::{Bicomplex, Error, GaussianRational, ParseError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    Dims,
    Generators,
    Decomposition,
    Formality,
    Massey,
}

impl Emit {
    pub fn name(self) -> &'static str {
        match self {
            Emit::Dims => "dims",
            Emit::Generators => "generators",
            Emit::Decomposition => "decomposition",
            Emit::Formality => "formality",
            Emit::Massey => "massey",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
    Latex,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Text => "txt",
            Format::Json => "json",
            Format::Latex => "tex",
        }
    }
}

#[derive(Parser, Debug, Default)]
#[command(name = "solvcohom", version, about = "Cohomology, decompositions and formality of splitting-type solvmanifolds")]
pub struct Args {
    /// TOML spec file with the same keys as the flags.
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub case: Option<String>,
    /// Structure parameter of g8, e.g. "1+i".
    #[arg(long = "A", allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub nprime: Option<i64>,
    /// g2 lattice parameter, b in units of pi/(2 Re A_n).
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    /// g1 lattice parameter, b in units of pi/2.
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
    /// Raw bicomplex in JSON.
    #[arg(long)]
    pub bicomplex: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub emit: Vec<Emit>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Triple "a12;a23;a34" of monomials.
    #[arg(long)]
    pub massey: Option<String>,
    /// Write the full corpus for all preset cases to --out-dir.
    #[arg(long)]
    pub regenerate_golden: bool,
}

/// A failure with its process exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub const PARSE: i32 = 2;
    pub const INVALID_CASE: i32 = 3;
    pub const DECOMPOSITION: i32 = 4;

    fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Self::new(Self::PARSE, message)
    }

    fn invalid(message: impl Into<String>) -> Self {
        Self::new(Self::INVALID_CASE, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) | Error::UnknownLabel(_) => CliError::PARSE,
            Error::InvalidCase(_) | Error::InvalidBicomplex(_) | Error::UndefinedProduct(_) | Error::BidegreeMismatch { .. } => {
                CliError::INVALID_CASE
            }
            Error::DecompositionFailure(_) | Error::MalformedShape(_) => CliError::DECOMPOSITION,
            _ => 1,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new(1, e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Input {
    Preset { family: Family, case: String },
    G8Parameters { a: String, n: i64, nprime: i64 },
    Raw(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunRequest {
    pub input: Input,
    pub emits: Vec<Emit>,
    pub format: Format,
    pub massey: Option<String>,
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(untagged)]
enum Scalar {
    Int(i64),
    Str(String),
    #[default]
    Missing,
}

impl Scalar {
    fn text(self) -> Option<String> {
        match self {
            Scalar::Int(k) => Some(k.to_string()),
            Scalar::Str(s) => Some(s),
            Scalar::Missing => None,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum EmitList {
    One(String),
    Many(Vec<Emit>),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    family: Option<String>,
    #[serde(default)]
    case: Scalar,
    #[serde(rename = "A")]
    a: Option<String>,
    n: Option<i64>,
    nprime: Option<i64>,
    #[serde(default)]
    q: Scalar,
    #[serde(default)]
    r: Scalar,
    bicomplex: Option<PathBuf>,
    emit: Option<EmitList>,
    format: Option<Format>,
    massey: Option<String>,
    out_dir: Option<PathBuf>,
}

fn parse_emits(s: &str) -> CliResult<Vec<Emit>> {
    s.split(',')
        .map(|t| Emit::from_str(t.trim(), true).map_err(|_| CliError::usage(format!("unknown output {t:?}"))))
        .collect()
}

fn read_spec(path: &Path) -> CliResult<SpecFile> {
    let src = fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    toml::from_str(&src).map_err(|e| {
        let at = e.span().map_or(0, |s| s.start);
        let p = ParseError::at(&src, at, e.message().to_string());
        CliError::usage(format!("{}: {p}", path.display()))
    })
}

impl RunRequest {
    /// Merges the spec file (if any) under the flags.
    pub fn from_args(args: &Args) -> CliResult<Self> {
        let spec = match &args.spec {
            Some(p) => read_spec(p)?,
            None => SpecFile::default(),
        };
        let base = args.spec.as_deref().and_then(Path::parent).unwrap_or(Path::new(""));
        let family = args.family.clone().or(spec.family);
        let case = args.case.clone().or(spec.case.text());
        let a = args.a.clone().or(spec.a);
        let n = args.n.or(spec.n);
        let nprime = args.nprime.or(spec.nprime);
        let q = args.q.clone().or(spec.q.text());
        let r = args.r.clone().or(spec.r.text());
        let bicomplex = args.bicomplex.clone().or(spec.bicomplex.map(|p| base.join(p)));

        let input = if let Some(p) = bicomplex {
            if family.is_some() {
                return Err(CliError::usage("--bicomplex cannot be combined with --family"));
            }
            Input::Raw(p)
        } else {
            let family: Family = family
                .ok_or_else(|| CliError::usage("one of --family or --bicomplex is required"))?
                .parse()
                .map_err(|e: Error| CliError::invalid(e.to_string()))?;
            match (case, a, q, r) {
                (Some(c), None, None, None) => Input::Preset { family, case: c },
                (None, Some(a), None, None) if family == Family::G8 => {
                    let (Some(n), Some(nprime)) = (n, nprime) else {
                        return Err(CliError::usage("--A needs --n and --nprime"));
                    };
                    Input::G8Parameters { a, n, nprime }
                }
                (None, None, Some(q), None) if family == Family::G2AlphaPos => Input::Preset {
                    family,
                    case: format!("q={q}"),
                },
                (None, None, None, Some(r)) if family == Family::G1 => Input::Preset {
                    family,
                    case: format!("r={r}"),
                },
                (None, None, None, None) => return Err(CliError::usage("a case or lattice parameter is required")),
                _ => return Err(CliError::usage(format!("conflicting or unsupported case parameters for {family}"))),
            }
        };

        let mut emits = args.emit.clone();
        if emits.is_empty() {
            emits = match spec.emit {
                Some(EmitList::One(s)) => parse_emits(&s)?,
                Some(EmitList::Many(v)) => v,
                None => vec![Emit::Dims],
            };
        }
        if emits.is_empty() {
            return Err(CliError::usage("no outputs requested"));
        }
        let mut seen = Vec::new();
        emits.retain(|e| {
            let fresh = !seen.contains(e);
            seen.push(*e);
            fresh
        });
        Ok(RunRequest {
            input,
            emits,
            format: args.format.or(spec.format).unwrap_or_default(),
            massey: args.massey.clone().or(spec.massey),
            out_dir: args.out_dir.clone().or(spec.out_dir),
        })
    }
}

/// A resolved input.
#[allow(clippy::large_enum_variant)]
pub enum Subject {
    Manifold {
        family: Family,
        case: String,
        data: SplittingData,
        b: Bicomplex,
        c: Bicomplex,
    },
    Raw {
        path: PathBuf,
        complex: Bicomplex,
    },
}

impl Subject {
    pub fn resolve(input: &Input) -> CliResult<Self> {
        let (family, case, data) = match input {
            Input::Preset { family, case } => (*family, case.clone(), preset_case(*family, case)?),
            Input::G8Parameters { a, n, nprime } => {
                let a_param: GaussianRational = a.parse().map_err(|e: ParseError| CliError::usage(format!("--A: {e}")))?;
                let flags = classify_g8(&a_param, *n, *nprime)?;
                let name = flags.g8_name().map_or_else(|| format!("A={a},n={n},nprime={nprime}"), str::to_string);
                (Family::G8, name, preset(Family::G8, &flags)?)
            }
            Input::Raw(path) => {
                let src = fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
                let j: BicomplexJson = serde_json::from_str(&src).map_err(|e| {
                    CliError::usage(format!("{}: {}", path.display(), ParseError::new(e.line(), e.column(), e.to_string())))
                })?;
                return Ok(Subject::Raw {
                    path: path.clone(),
                    complex: Bicomplex::from_json(&j)?,
                });
            }
        };
        Ok(Subject::Manifold {
            family,
            case,
            b: build_b(&data)?,
            c: build_c(&data)?,
            data,
        })
    }

    fn complex(&self) -> &Bicomplex {
        match self {
            Subject::Manifold { c, .. } => c,
            Subject::Raw { complex, .. } => complex,
        }
    }

    fn describe(&self) -> Value {
        match self {
            Subject::Manifold { family, case, .. } => json!({"family": family.token(), "case": case}),
            Subject::Raw { path, .. } => json!({"bicomplex": path.display().to_string()}),
        }
    }

    /// File-name stem for `--out-dir`.
    pub fn stem(&self) -> String {
        match self {
            Subject::Manifold { family, case, .. } => format!("{}_{}", family.token(), sanitize(case)),
            Subject::Raw { path, .. } => path.file_stem().map_or("bicomplex".into(), |s| s.to_string_lossy().into_owned()),
        }
    }
}

fn sanitize(s: &str) -> String {
    s.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MasseyEval {
    pub triple: [String; 3],
    pub defined: bool,
    pub nonvanishing: Option<bool>,
    pub witness: Option<MasseyWitness>,
    pub note: Option<String>,
}

fn massey_evals(subject: &Subject, triple: Option<&str>) -> CliResult<Vec<MasseyEval>> {
    let Subject::Manifold { data, .. } = subject else {
        return Err(CliError::invalid("Massey products need a form algebra; raw bicomplexes carry no product"));
    };
    let alg = build_closure(data)?;
    let triples: Vec<String> = match triple {
        Some(t) => vec![t.to_string()],
        None => WITNESS_TRIPLES.iter().map(|t| t.join(";")).collect(),
    };
    let explicit = triple.is_some();
    let mut out = Vec::new();
    for t in triples {
        let parts: Vec<String> = t.split(';').map(|s| s.trim().to_string()).collect();
        if parts.len() != 3 {
            return Err(CliError::usage("--massey expects \"a12;a23;a34\""));
        }
        let names = [parts[0].clone(), parts[1].clone(), parts[2].clone()];
        match massey_from_text(&alg, &t) {
            Ok(m) => out.push(MasseyEval {
                triple: names,
                defined: true,
                nonvanishing: Some(m.nonvanishing),
                witness: Some(MasseyWitness::new(&alg, &m)),
                note: None,
            }),
            // listed triples whose monomials are absent from this case
            Err(Error::UnknownLabel(_) | Error::Parse(_)) if !explicit => {}
            Err(Error::UndefinedProduct(msg)) => out.push(MasseyEval {
                triple: names,
                defined: false,
                nonvanishing: None,
                witness: None,
                note: Some(msg),
            }),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct RawFormality {
    ddbar: bool,
    weak: bool,
    weak_criterion: String,
}

/// One artifact in each format.
struct Artifact {
    json: Value,
    text: String,
    latex: String,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn artifact(subject: &Subject, emit: Emit, massey: Option<&str>) -> CliResult<Artifact> {
    let c = subject.complex();
    Ok(match emit {
        Emit::Dims => {
            let t = DimsTable::new(c);
            Artifact {
                json: to_value(&t),
                text: t.to_text(),
                latex: t.to_latex(),
            }
        }
        Emit::Generators => {
            let b = match subject {
                Subject::Manifold { b, .. } => Some(b),
                Subject::Raw { .. } => None,
            };
            let t = GeneratorTable::new(c, b);
            Artifact {
                json: to_value(&t),
                text: t.to_text(),
                latex: GeneratorTable::latex(c, b),
            }
        }
        Emit::Decomposition => {
            let d = decompose(c)?;
            Artifact {
                json: to_value(&DecompositionRecord::new(&d)),
                text: DecompositionRecord::to_text(&d),
                latex: DecompositionRecord::to_latex(&d),
            }
        }
        Emit::Formality => match subject {
            Subject::Manifold { data, .. } => {
                let r = formality_report(data)?;
                let mut text = format!(
                    "ddbar: {}\nstrong: {}\nweak: {} ({})\ndolbeault: {}\ngeometric_bc_obstructed: {}\n",
                    r.ddbar, r.strong, r.weak, r.weak_criterion, r.dolbeault, r.geometric_bc_obstructed
                );
                match &r.massey_witness {
                    Some(w) => text.push_str(&format!(
                        "massey_witness: <{}, {}, {}> = [{}] at ({},{}), quotient dimension {}\n",
                        w.a12, w.a23, w.a34, w.representative, w.bidegree.0, w.bidegree.1, w.quotient_dimension
                    )),
                    None => text.push_str("massey_witness: none\n"),
                }
                let mut latex = String::from("\\begin{tabular}{l|l}\n");
                for (k, v) in [
                    ("$\\partial\\bar\\partial$-lemma", r.ddbar),
                    ("strong", r.strong),
                    ("weak", r.weak),
                    ("Dolbeault", r.dolbeault),
                    ("geometric BC obstructed", r.geometric_bc_obstructed),
                ] {
                    latex.push_str(&format!("{k} & {}\\\\\n", if v { "yes" } else { "no" }));
                }
                latex.push_str("\\end{tabular}\n");
                Artifact {
                    json: to_value(&r),
                    text,
                    latex,
                }
            }
            Subject::Raw { complex, .. } => {
                let r = RawFormality {
                    ddbar: solvcohom_core::ddbar_lemma(complex)?.holds,
                    weak: !decompose(complex)?.has_squares(),
                    weak_criterion: "no squares in the decomposition; not known to match strong formality for raw input".into(),
                };
                Artifact {
                    text: format!("ddbar: {}\nweak: {} ({})\n", r.ddbar, r.weak, r.weak_criterion),
                    latex: format!("$\\partial\\bar\\partial$-lemma & {}\\\\\n", if r.ddbar { "yes" } else { "no" }),
                    json: to_value(&r),
                }
            }
        },
        Emit::Massey => {
            let evals = massey_evals(subject, massey)?;
            let mut text = String::new();
            let mut latex = String::from("\\begin{tabular}{l|l}\n");
            for e in &evals {
                let verdict = match (e.nonvanishing, &e.note) {
                    (Some(true), _) => "nonvanishing".to_string(),
                    (Some(false), _) => "vanishing".to_string(),
                    (None, Some(n)) => format!("undefined ({n})"),
                    (None, None) => "undefined".to_string(),
                };
                text.push_str(&format!("<{}>: {verdict}", e.triple.join(", ")));
                if let Some(w) = &e.witness {
                    text.push_str(&format!(" [{}] at ({},{})", w.representative, w.bidegree.0, w.bidegree.1));
                }
                text.push('\n');
                latex.push_str(&format!("$\\langle {}\\rangle$ & {verdict}\\\\\n", e.triple.join(",")));
            }
            if evals.is_empty() {
                text.push_str("no listed triple applies to this case\n");
            }
            latex.push_str("\\end{tabular}\n");
            Artifact {
                json: to_value(&evals),
                text,
                latex,
            }
        }
    })
}

/// Runs a request, writing to `out` unless `out_dir` is set.
pub fn run(req: &RunRequest, out: &mut dyn Write) -> CliResult<()> {
    let subject = Subject::resolve(&req.input)?;
    let mut arts = Vec::new();
    for e in &req.emits {
        arts.push((*e, artifact(&subject, *e, req.massey.as_deref())?));
    }
    if let Some(dir) = &req.out_dir {
        fs::create_dir_all(dir)?;
        for (e, a) in &arts {
            let path = dir.join(format!("{}.{}.{}", subject.stem(), e.name(), req.format.extension()));
            fs::write(&path, render_one(a, req.format))?;
            writeln!(out, "{}", path.display())?;
        }
        return Ok(());
    }
    match req.format {
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("input".into(), subject.describe());
            for (e, a) in &arts {
                obj.insert(e.name().into(), a.json.clone());
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&Value::Object(obj)).expect("json"))?;
        }
        Format::Text | Format::Latex => {
            for (i, (e, a)) in arts.iter().enumerate() {
                if arts.len() > 1 {
                    let lead = if req.format == Format::Latex { "%" } else { "#" };
                    if i > 0 {
                        writeln!(out)?;
                    }
                    writeln!(out, "{lead} {}", e.name())?;
                }
                write!(out, "{}", render_one(a, req.format))?;
            }
        }
    }
    Ok(())
}

fn render_one(a: &Artifact, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&a.json).expect("json")),
        Format::Text => a.text.clone(),
        Format::Latex => a.latex.clone(),
    }
}

/// Writes `<family>/<case>/{dims,generators,decomposition,formality}.json`
/// and `dims.tex` for every preset case, returning the paths written.
pub fn regenerate_golden(out_dir: &Path) -> CliResult<Vec<PathBuf>> {
    let results: Vec<CliResult<Vec<(PathBuf, String)>>> = std::thread::scope(|s| {
        let handles: Vec<_> = ALL_CASES
            .iter()
            .map(|(family, case)| {
                s.spawn(move || -> CliResult<Vec<(PathBuf, String)>> {
                    let subject = Subject::resolve(&Input::Preset {
                        family: *family,
                        case: case.to_string(),
                    })?;
                    let dir = out_dir.join(family.token()).join(sanitize(case));
                    let mut files = Vec::new();
                    for e in [Emit::Dims, Emit::Generators, Emit::Decomposition, Emit::Formality] {
                        let a = artifact(&subject, e, None)?;
                        files.push((dir.join(format!("{}.json", e.name())), render_one(&a, Format::Json)));
                        if e == Emit::Dims {
                            files.push((dir.join("dims.tex"), a.latex));
                        }
                    }
                    Ok(files)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut written = Vec::new();
    let mut index = BTreeMap::new();
    for (r, (family, case)) in results.into_iter().zip(ALL_CASES) {
        for (path, body) in r? {
            fs::create_dir_all(path.parent().expect("case directory"))?;
            fs::write(&path, body)?;
            written.push(path);
        }
        index.entry(family.token()).or_insert_with(Vec::new).push(*case);
    }
    let idx = out_dir.join("index.json");
    fs::write(&idx, format!("{}\n", serde_json::to_string_pretty(&index).expect("json")))?;
    written.push(idx);
    Ok(written)
}

/// Entry point shared by the binary and the tests.
pub fn main_with(args: &Args, out: &mut dyn Write) -> CliResult<()> {
    if args.regenerate_golden {
        let dir = args.out_dir.clone().ok_or_else(|| CliError::usage("--regenerate-golden needs --out-dir"))?;
        for p in regenerate_golden(&dir)? {
            writeln!(out, "{}", p.display())?;
        }
        return Ok(());
    }
    run(&RunRequest::from_args(args)?, out)
}
