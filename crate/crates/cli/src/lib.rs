//! `qform`: command-line front end to the monodromy quadratic form pipeline.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use qform_core::charpoly::{self, format_polynomial};
use qform_core::graph::NamedChain;
use qform_core::io::{self, int_json, Format};
use qform_core::pipeline::{self, Input, StageError};
use qform_core::quadform::{self, GramForm};
use qform_core::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "qform", version, about = "Monodromy quadratic forms of curve germs on surface singularities")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: OutputFormat,
    /// Write results to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Files {
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate graph or chain files.
    Validate(Files),
    /// Multiplicities of a resolution graph.
    Mult(Files),
    /// Screw numbers and integer edge weights of every bamboo.
    Screw(Files),
    /// Semistable reduction graph in nt1 form.
    Ssred {
        #[command(flatten)]
        files: Files,
        /// Also write a DOT rendering (single input only).
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Gram matrix of the form in a chain basis.
    Gram {
        #[command(flatten)]
        files: Files,
        /// chain1 basis; give one per input file.
        #[arg(long)]
        basis: Vec<PathBuf>,
        /// Restrict to the absolute cycles of the basis.
        #[arg(long)]
        absolute: bool,
    },
    /// Characteristic polynomials Δ and Δ₂.
    Charpoly {
        #[command(flatten)]
        files: Files,
        /// Also print expanded polynomials.
        #[arg(long)]
        expanded: bool,
    },
    /// Full report as a JSON document.
    Invariants {
        #[command(flatten)]
        files: Files,
        #[arg(long)]
        basis: Vec<PathBuf>,
    },
    /// Compare the invariants of two forms.
    Compare {
        first: PathBuf,
        second: PathBuf,
        /// chain1 bases for the first and second file, in that order.
        #[arg(long)]
        basis: Vec<PathBuf>,
    },
}

/// A failure for one input, with its exit code.
#[derive(Debug)]
struct Failure {
    message: String,
    code: i32,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            message: message.into(),
            code: 1,
        }
    }

    fn from_error(file: &Path, err: Error) -> Self {
        let code = if err.is_invariant_violation() { 2 } else { 1 };
        let message = match err {
            Error::Parse(p) => p.with_file(file.display().to_string()).to_string(),
            other => format!("{}: {other}", file.display()),
        };
        Failure { message, code }
    }

    fn from_stage(file: &Path, err: StageError) -> Self {
        let code = if err.error.is_invariant_violation() { 2 } else { 1 };
        let message = match err.error {
            Error::Parse(p) => p.with_file(file.display().to_string()).to_string(),
            other => format!("{}: {}: {other}", file.display(), err.stage),
        };
        Failure { message, code }
    }
}

/// Text and JSON renderings of one result.
struct Output {
    text: String,
    json: Value,
}

type Outcome = Result<Output, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Input, Failure> {
    pipeline::load(&read(path)?).map_err(|e| Failure::from_error(path, e))
}

fn load_chains(path: &Path, nt: &qform_core::graph::NtGraph) -> Result<Vec<NamedChain>, Failure> {
    io::parse_chains(&read(path)?, Some(nt)).map_err(|e| Failure::from_error(path, e))
}

fn nt_of(path: &Path, input: &Input) -> Result<qform_core::graph::NtGraph, Failure> {
    match input {
        Input::Nt(nt) => Ok(nt.clone()),
        Input::Resolution(g) => Ok(pipeline::resolve(g).map_err(|e| Failure::from_stage(path, e))?.nt),
    }
}

fn resolution_only(path: &Path, input: Input) -> Result<qform_core::graph::ResolutionGraph, Failure> {
    match input {
        Input::Resolution(g) => Ok(g),
        Input::Nt(_) => Err(Failure::usage(format!("{}: needs an rg1 resolution graph", path.display()))),
    }
}

fn validate(path: &Path) -> Outcome {
    let text = read(path)?;
    let fmt = io::detect_format(&text).map_err(|e| Failure::from_error(path, e.into()))?;
    let (counts, label) = match fmt {
        Format::Rg1 => {
            let g = io::parse_resolution(&text).map_err(|e| Failure::from_error(path, e))?;
            ((g.vertices().len(), g.edges().len(), g.arrows().len()), "vertices")
        }
        Format::Nt1 => {
            let g = io::parse_ntgraph(&text).map_err(|e| Failure::from_error(path, e))?;
            ((g.pieces().len(), g.edges().len(), g.arrows().len()), "vertices")
        }
        Format::Chain1 => {
            let c = io::parse_chains(&text, None).map_err(|e| Failure::from_error(path, e))?;
            ((c.len(), 0, 0), "chains")
        }
    };
    let text = if fmt == Format::Chain1 {
        format!("valid {} format={fmt} chains={}\n", path.display(), counts.0)
    } else {
        format!(
            "valid {} format={fmt} {label}={} edges={} arrows={}\n",
            path.display(),
            counts.0,
            counts.1,
            counts.2
        )
    };
    Ok(Output {
        text,
        json: json!({"valid": true, "format": fmt.name(), "counts": [counts.0, counts.1, counts.2]}),
    })
}

fn mult(path: &Path) -> Outcome {
    let g = resolution_only(path, load(path)?)?;
    let m = qform_core::multiplicity::multiplicities(&g).map_err(|e| Failure::from_error(path, e))?;
    let mut text = String::new();
    let mut obj = serde_json::Map::new();
    for (v, m) in g.vertices().iter().zip(&m) {
        text.push_str(&format!("mult {} {m}\n", v.id));
        obj.insert(v.id.clone(), json!(m));
    }
    Ok(Output {
        text,
        json: json!({ "multiplicities": obj }),
    })
}

fn screw(path: &Path) -> Outcome {
    let g = resolution_only(path, load(path)?)?;
    let stages = pipeline::resolve(&g).map_err(|e| Failure::from_stage(path, e))?;
    let s = &stages.screws;
    let mut text = format!("e {}\n", s.e);
    for b in &s.entries {
        text.push_str(&format!(
            "screw {} d={} scn={}/{} s={} kind={}\n",
            b.bamboo,
            b.d,
            b.scn.numer(),
            b.scn.denom(),
            b.s,
            b.kind.as_str()
        ));
    }
    Ok(Output {
        text,
        json: pipeline::screws_json(s),
    })
}

fn ssred(path: &Path, dot: Option<&Path>) -> Outcome {
    let input = load(path)?;
    let nt = nt_of(path, &input)?;
    if let Some(dot) = dot {
        fs::write(dot, io::nt_to_dot(&nt)).map_err(|e| Failure::usage(format!("{}: {e}", dot.display())))?;
    }
    Ok(Output {
        text: io::serialize_ntgraph(&nt),
        json: pipeline::nt_json(&nt),
    })
}

fn form_for(path: &Path, basis: Option<&Path>) -> Result<GramForm, Failure> {
    let input = load(path)?;
    let nt = nt_of(path, &input)?;
    let chains = basis.map(|b| load_chains(b, &nt)).transpose()?;
    let label = basis.unwrap_or(path);
    let basis = match chains {
        Some(c) => quadform::ChainBasis::new(&nt, c).map_err(|e| Failure::from_error(label, e))?,
        None => quadform::default_basis(&nt),
    };
    quadform::gram(&nt, &basis).map_err(|e| Failure::from_error(path, e))
}

fn matrix_text(form: &GramForm) -> String {
    form.matrix
        .to_rows()
        .iter()
        .map(|row| row.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ") + "\n")
        .collect()
}

fn gram(path: &Path, basis: Option<&Path>, absolute: bool) -> Outcome {
    let mut form = form_for(path, basis)?;
    if absolute {
        form = form.absolute_form();
    }
    Ok(Output {
        text: matrix_text(&form),
        json: io::form_json(&form),
    })
}

fn charpoly_cmd(path: &Path, expanded: bool) -> Outcome {
    let input = load(path)?;
    let mut text = String::new();
    let mut obj = serde_json::Map::new();
    let nt = match &input {
        Input::Resolution(g) => {
            let stages = pipeline::resolve(g).map_err(|e| Failure::from_stage(path, e))?;
            let d = charpoly::delta(g, &stages.mults).map_err(|e| Failure::from_error(path, e))?;
            text.push_str(&format!("delta {d}\nmilnor {}\n", d.degree()));
            if expanded {
                let coeffs = d.expand().expect("delta is checked to be a polynomial");
                text.push_str(&format!("delta_expanded {}\n", format_polynomial(&coeffs)));
                obj.insert("delta_coefficients".into(), coeffs.iter().map(int_json).collect());
            }
            obj.insert("delta".into(), pipeline::cyclo_json(&d));
            obj.insert("milnor_number".into(), json!(d.degree()));
            stages.nt
        }
        Input::Nt(nt) => nt.clone(),
    };
    let d2 = charpoly::delta2(&nt).map_err(|e| Failure::from_error(path, e))?;
    text.push_str(&format!("delta2 {d2}\n"));
    if expanded {
        let coeffs = d2.expand().expect("delta2 is checked to be a polynomial");
        text.push_str(&format!("delta2_expanded {}\n", format_polynomial(&coeffs)));
        obj.insert("delta2_coefficients".into(), coeffs.iter().map(int_json).collect());
    }
    let jordan = charpoly::jordan_block_count(&nt);
    text.push_str(&format!("jordan_blocks {jordan}\n"));
    obj.insert("delta2".into(), pipeline::cyclo_json(&d2));
    obj.insert("jordan_blocks".into(), json!(jordan));
    Ok(Output {
        text,
        json: Value::Object(obj),
    })
}

fn invariants(path: &Path, basis: Option<&Path>) -> Outcome {
    let input = load(path)?;
    let chains = match basis {
        Some(b) => Some(load_chains(b, &nt_of(path, &input)?)?),
        None => None,
    };
    let report = pipeline::run(&input, chains).map_err(|e| Failure::from_stage(path, e))?;
    let json = report.to_json();
    Ok(Output {
        text: serde_json::to_string_pretty(&json).expect("serializable") + "\n",
        json,
    })
}

fn compare(a: &Path, b: &Path, bases: &[PathBuf]) -> Outcome {
    let (ba, bb) = match bases {
        [] => (None, None),
        [x, y] => (Some(x.as_path()), Some(y.as_path())),
        _ => return Err(Failure::usage("compare takes either no --basis or exactly two")),
    };
    let (fa, fb) = rayon::join(|| form_for(a, ba), || form_for(b, bb));
    let report = quadform::compare(&fa?, &fb?);
    let mut text = String::new();
    let mut inv = Vec::new();
    for i in &report.invariants {
        let status = if i.differs { "differs" } else { "same" };
        text.push_str(&format!("{} {} {} {status}\n", i.key, i.left, i.right));
        inv.push(json!({"key": i.key, "first": i.left, "second": i.right, "differs": i.differs}));
    }
    text.push_str(&report.verdict());
    text.push('\n');
    Ok(Output {
        text,
        json: json!({
            "invariants": inv,
            "distinguished_by": report.distinguished_by(),
            "verdict": if report.distinguished_by().is_empty() { "not_distinguished" } else { "distinguished" },
        }),
    })
}

/// Pairs every input file with its basis file, if any.
fn pair_bases<'a>(files: &'a [PathBuf], bases: &'a [PathBuf]) -> Result<Vec<(&'a Path, Option<&'a Path>)>, Failure> {
    if !bases.is_empty() && bases.len() != files.len() {
        return Err(Failure::usage(format!(
            "{} --basis files given for {} inputs",
            bases.len(),
            files.len()
        )));
    }
    Ok(files
        .iter()
        .enumerate()
        .map(|(i, f)| (f.as_path(), bases.get(i).map(PathBuf::as_path)))
        .collect())
}

fn batch<'a>(jobs: Vec<(&'a Path, Option<&'a Path>)>, f: impl Fn(&Path, Option<&Path>) -> Outcome + Sync) -> Vec<(PathBuf, Outcome)> {
    jobs.into_par_iter().map(|(p, b)| (p.to_path_buf(), f(p, b))).collect()
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code. Results go to `out` (or `--out`), diagnostics to `err`.
pub fn run(args: impl IntoIterator<Item = String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let results: Vec<(PathBuf, Outcome)> = match &cli.command {
        Command::Validate(f) => batch(pair_bases(&f.files, &[]).unwrap(), |p, _| validate(p)),
        Command::Mult(f) => batch(pair_bases(&f.files, &[]).unwrap(), |p, _| mult(p)),
        Command::Screw(f) => batch(pair_bases(&f.files, &[]).unwrap(), |p, _| screw(p)),
        Command::Ssred { files, dot } => {
            if dot.is_some() && files.files.len() > 1 {
                let _ = writeln!(err, "qform: --dot needs a single input file");
                return 1;
            }
            batch(pair_bases(&files.files, &[]).unwrap(), |p, _| ssred(p, dot.as_deref()))
        }
        Command::Gram {
            files,
            basis,
            absolute,
        } => match pair_bases(&files.files, basis) {
            Ok(jobs) => batch(jobs, |p, b| gram(p, b, *absolute)),
            Err(f) => vec![(PathBuf::new(), Err(f))],
        },
        Command::Charpoly { files, expanded } => {
            batch(pair_bases(&files.files, &[]).unwrap(), |p, _| charpoly_cmd(p, *expanded))
        }
        Command::Invariants { files, basis } => match pair_bases(&files.files, basis) {
            Ok(jobs) => batch(jobs, invariants),
            Err(f) => vec![(PathBuf::new(), Err(f))],
        },
        Command::Compare { first, second, basis } => vec![(first.clone(), compare(first, second, basis))],
    };

    let mut code = 0;
    let mut text = String::new();
    let mut docs = Vec::new();
    let multiple = results.len() > 1;
    for (path, r) in results {
        match r {
            Ok(o) => {
                if multiple && cli.format == OutputFormat::Text {
                    text.push_str(&format!("== {}\n", path.display()));
                }
                text.push_str(&o.text);
                docs.push(json!({"file": path.display().to_string(), "result": o.json}));
            }
            Err(f) => {
                let _ = writeln!(err, "qform: {}", f.message);
                code = code.max(f.code);
            }
        }
    }
    let rendered = match cli.format {
        OutputFormat::Text => text,
        OutputFormat::Json if multiple => serde_json::to_string_pretty(&Value::Array(docs)).unwrap() + "\n",
        OutputFormat::Json => match docs.pop() {
            Some(d) => serde_json::to_string_pretty(&d["result"]).unwrap() + "\n",
            None => String::new(),
        },
    };
    let written = match &cli.out {
        Some(p) => fs::write(p, rendered).map_err(|e| format!("{}: {e}", p.display())),
        None => out.write_all(rendered.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "qform: {e}");
        return 1;
    }
    code
}
