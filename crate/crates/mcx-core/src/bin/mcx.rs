//! Command-line front end: expression evaluation, representation
//! conversion, conjugations, norms, ideal queries, and matrix commands
//! over JSON documents.
//!
//! Exit codes: 0 success, 2 parse or validation error, 3 domain error
//! (null cone, singular matrix, not self-adjoint, not multiperplex),
//! 4 I/O error. Component indices are 1-based on this surface.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mcx_core::docs::{
    Coeffs, FlavorName, IdealOp, IdealQuery, KetDocument, MatrixDocument, NumberDocument, Rep,
};
use mcx_core::expr::{self, Value};
use mcx_core::ideal::{IdealFlavor, IdealSpec};
use mcx_core::render;
use mcx_core::{
    from_idempotent, spectral_decompose, ConjugationMask, IdempotentRep, Level, McError,
    Multiperplex, DEFAULT_TOL,
};

const DEFAULT_MATRIX_TOL: f64 = mcx_core::linalg::DEFAULT_SINGULAR_TOL;

#[derive(Parser)]
#[command(
    name = "mcx",
    version,
    about = "Multicomplex number calculator and linear algebra tool"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate expressions, one per input line
    Eval(ExprArgs),
    /// Rewrite a number document in the other (or a chosen) representation
    Convert(ConvertArgs),
    /// Apply a conjugation to each input expression
    Conj(ConjArgs),
    /// Multiperplex norm of each input expression
    Norm(ExprArgs),
    /// Ideal lattice query from a JSON document
    Ideal(IdealArgs),
    /// Determinant of a square matrix document
    Det(MatrixArgs),
    /// Inverse of a square matrix document
    Inv(MatrixArgs),
    /// Spectral decomposition of a self-adjoint matrix document
    Eig(MatrixArgs),
}

#[derive(Args)]
struct IoArgs {
    /// Input file; stdin when absent
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    /// Output file; stdout when absent
    #[arg(long = "out", value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ExprArgs {
    /// Number of imaginary units
    #[arg(long)]
    n: usize,
    /// Output format
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Null-cone tolerance for division and inversion
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct ConjArgs {
    /// Conjugated units, comma separated, or "all"
    #[arg(long, value_name = "LIST")]
    mask: String,
    #[command(flatten)]
    expr: ExprArgs,
}

#[derive(Args)]
struct ConvertArgs {
    /// Expected level; must match the document when given
    #[arg(long)]
    n: Option<usize>,
    /// Target representation; defaults to the other one
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct IdealArgs {
    /// Membership tolerance
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Representation for result documents
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct MatrixArgs {
    /// Expected level; must match the document when given
    #[arg(long)]
    n: Option<usize>,
    /// Singularity / self-adjointness tolerance
    #[arg(long, default_value_t = DEFAULT_MATRIX_TOL)]
    tol: f64,
    /// Representation for result documents; defaults to the input's
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Std,
    Idem,
    Json,
}

/// Failure with its exit code. Parse covers syntax and validation,
/// Domain covers value-dependent algebra failures.
enum AppError {
    Parse(String),
    Domain(String),
    Io(String),
}

impl AppError {
    fn code(&self) -> u8 {
        match self {
            AppError::Parse(_) => 2,
            AppError::Domain(_) => 3,
            AppError::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            AppError::Parse(m) | AppError::Domain(m) | AppError::Io(m) => m,
        }
    }
}

fn list_1based(indices: &[usize]) -> String {
    indices
        .iter()
        .map(|p| (p + 1).to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Core errors surface here with 1-based component numbering.
fn core_error(e: McError) -> AppError {
    match &e {
        McError::NullCone { indices } => AppError::Domain(format!(
            "null cone: vanishing component {}",
            list_1based(indices)
        )),
        McError::Singular { indices } => AppError::Domain(format!(
            "singular matrix: determinant vanishes at component {}",
            list_1based(indices)
        )),
        McError::NotSelfAdjoint { slice } => AppError::Domain(format!(
            "not self-adjoint: component {} slice is not hermitian",
            slice + 1
        )),
        McError::NotMultiperplex { index, imag } => AppError::Domain(format!(
            "not multiperplex: component {} has imaginary part {}",
            index + 1,
            imag
        )),
        McError::NotHermitian => AppError::Domain("matrix slice is not hermitian".into()),
        McError::NoConvergence(sweeps) => AppError::Domain(format!(
            "eigensolver did not converge within {sweeps} sweeps"
        )),
        _ => AppError::Parse(e.to_string()),
    }
}

fn read_input(io: &IoArgs) -> Result<String, AppError> {
    match &io.input {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| AppError::Io(format!("cannot read {}: {e}", path.display()))),
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| AppError::Io(format!("cannot read stdin: {e}")))?;
            Ok(buf)
        }
    }
}

fn write_output(io: &IoArgs, text: &str) -> Result<(), AppError> {
    match &io.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| AppError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_level(n: usize) -> Result<Level, AppError> {
    Level::new(n).map_err(core_error)
}

fn check_level_flag(flag: Option<usize>, doc_n: usize) -> Result<(), AppError> {
    if let Some(n) = flag {
        if n != doc_n {
            return Err(AppError::Parse(format!(
                "level mismatch: document has n={doc_n}, flag has n={n}"
            )));
        }
    }
    Ok(())
}

fn parse_line(src: &str, level: Level) -> Result<expr::Expr, AppError> {
    expr::parse(src, level).map_err(|e| AppError::Parse(format!("parse error: {e}")))
}

/// Renders an evaluated value. Without an explicit format, plain values
/// print standard coefficients and multiperplex values print as epsilon
/// sums.
fn render_value(v: &Value, format: Option<Format>) -> Result<String, AppError> {
    match format {
        None => Ok(match v {
            Value::M1(z) => render::fmt_complex(*z),
            Value::Mc(r) => render::fmt_standard(&from_idempotent(r)),
            Value::Perplex(d) => render::fmt_multiperplex(d),
        }),
        Some(Format::Std) => Ok(match v {
            Value::M1(z) => render::fmt_complex(*z),
            Value::Mc(r) => render::fmt_standard(&from_idempotent(r)),
            Value::Perplex(d) => render::fmt_standard(&from_idempotent(&d.to_rep())),
        }),
        Some(Format::Idem) => match v {
            Value::M1(_) => Err(AppError::Parse(
                "idempotent format requires level >= 2".into(),
            )),
            Value::Mc(r) => Ok(render::fmt_idempotent(r)),
            Value::Perplex(d) => Ok(render::fmt_idempotent(&d.to_rep())),
        },
        Some(Format::Json) => {
            let doc = match v {
                Value::M1(z) => NumberDocument {
                    n: 1,
                    rep: Rep::Standard,
                    coeffs: Coeffs::Real(vec![z.re, z.im]),
                },
                Value::Mc(r) => {
                    NumberDocument::from_multicomplex(&from_idempotent(r), Rep::Standard)
                        .map_err(core_error)?
                }
                Value::Perplex(d) => NumberDocument::from_multiperplex(d, Rep::Idempotent),
            };
            to_json(&doc)
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, AppError> {
    serde_json::to_string(value).map_err(|e| AppError::Parse(format!("cannot serialize: {e}")))
}

fn from_json<'a, T: serde::Deserialize<'a>>(text: &'a str) -> Result<T, AppError> {
    serde_json::from_str(text).map_err(|e| AppError::Parse(format!("malformed document: {e}")))
}

/// Shared driver for the line-oriented expression commands. `post` maps
/// each evaluated value before rendering.
fn run_lines(
    args: &ExprArgs,
    post: impl Fn(Value) -> Result<Value, AppError>,
) -> Result<(), AppError> {
    let level = parse_level(args.n)?;
    let text = read_input(&args.io)?;
    let mut out = String::new();
    for line in text.lines() {
        let src = line.trim();
        if src.is_empty() {
            continue;
        }
        let parsed = parse_line(src, level)?;
        let value = expr::eval(&parsed, level, args.tol).map_err(core_error)?;
        out.push_str(&render_value(&post(value)?, args.format)?);
        out.push('\n');
    }
    write_output(&args.io, &out)
}

fn cmd_eval(args: &ExprArgs) -> Result<(), AppError> {
    run_lines(args, Ok)
}

fn cmd_norm(args: &ExprArgs) -> Result<(), AppError> {
    run_lines(args, |v| {
        Ok(match v {
            Value::M1(z) => Value::M1(z.norm().into()),
            other => Value::Perplex(other.as_rep().map_err(core_error)?.mnorm()),
        })
    })
}

fn cmd_conj(args: &ConjArgs) -> Result<(), AppError> {
    let level = parse_level(args.expr.n)?;
    let mask = parse_mask(&args.mask, level)?;
    run_lines(&args.expr, move |v| {
        Ok(match v {
            Value::M1(z) => {
                if mask.bits().count_ones() % 2 == 1 {
                    Value::M1(z.conj())
                } else {
                    Value::M1(z)
                }
            }
            Value::Mc(r) => Value::Mc(r.conjugate(mask).map_err(core_error)?),
            Value::Perplex(d) => {
                let conjugated = d.to_rep().conjugate(mask).map_err(core_error)?;
                // conjugations permute the components, so the multiperplex
                // shard is stable under them
                match Multiperplex::from_rep(&conjugated, DEFAULT_TOL) {
                    Ok(d2) => Value::Perplex(d2),
                    Err(_) => Value::Mc(conjugated),
                }
            }
        })
    })
}

fn parse_mask(text: &str, level: Level) -> Result<ConjugationMask, AppError> {
    if text.trim() == "all" {
        return Ok(ConjugationMask::full(level));
    }
    let mut units = Vec::new();
    for piece in text.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            return Err(AppError::Parse(format!("malformed mask '{text}'")));
        }
        let k: usize = piece
            .parse()
            .map_err(|_| AppError::Parse(format!("malformed mask '{text}'")))?;
        units.push(k);
    }
    ConjugationMask::from_units(level, &units).map_err(core_error)
}

fn cmd_convert(args: &ConvertArgs) -> Result<(), AppError> {
    let text = read_input(&args.io)?;
    let doc: NumberDocument = from_json(text.trim())?;
    doc.validate().map_err(core_error)?;
    check_level_flag(args.n, doc.n)?;
    let target = match args.format {
        Some(Format::Std) => Rep::Standard,
        Some(Format::Idem) => Rep::Idempotent,
        Some(Format::Json) | None => doc.rep.other(),
    };
    let out = match target {
        Rep::Standard => {
            NumberDocument::from_multicomplex(&doc.to_multicomplex().map_err(core_error)?, target)
                .map_err(core_error)?
        }
        Rep::Idempotent => NumberDocument::from_rep(&doc.to_rep().map_err(core_error)?, target),
    };
    write_output(&args.io, &(to_json(&out)? + "\n"))
}

fn flavor_of(name: Option<FlavorName>) -> IdealFlavor {
    match name {
        Some(FlavorName::Multicomplex) => IdealFlavor::Multicomplex,
        _ => IdealFlavor::Multiperplex,
    }
}

fn indices_0based(j: &[usize], what: &str) -> Result<Vec<usize>, AppError> {
    j.iter()
        .map(|&k| {
            k.checked_sub(1)
                .ok_or_else(|| AppError::Parse(format!("{what} indices are 1-based, got 0")))
        })
        .collect()
}

fn result_rep(format: Option<Format>) -> Rep {
    match format {
        Some(Format::Std) => Rep::Standard,
        _ => Rep::Idempotent,
    }
}

fn cmd_ideal(args: &IdealArgs) -> Result<(), AppError> {
    let text = read_input(&args.io)?;
    let query: IdealQuery = from_json(text.trim())?;
    let level = parse_level(query.n)?;
    let flavor = flavor_of(query.flavor);
    let spec = IdealSpec::new(level, flavor, indices_0based(&query.j, "J")?).map_err(core_error)?;
    let need_x = |x: &Option<NumberDocument>| -> Result<IdempotentRep, AppError> {
        let doc = x
            .as_ref()
            .ok_or_else(|| AppError::Parse("query needs an element x".into()))?;
        check_level_flag(Some(query.n), doc.n)
            .map_err(|_| AppError::Parse("element level differs from query level".into()))?;
        doc.to_rep().map_err(core_error)
    };
    let rendered = match query.op {
        IdealOp::Generator => {
            let g = spec.generator().map_err(core_error)?;
            to_json(
                &NumberDocument::from_multicomplex(&g, result_rep(args.format))
                    .map_err(core_error)?,
            )?
        }
        IdealOp::Contains => {
            let x = need_x(&query.x)?;
            let verdict = spec.contains(&x, args.tol).map_err(core_error)?;
            to_json(&verdict)?
        }
        IdealOp::Meet | IdealOp::Join => {
            let j2 = query
                .j2
                .as_ref()
                .ok_or_else(|| AppError::Parse("query needs a second index set J2".into()))?;
            let other =
                IdealSpec::new(level, flavor, indices_0based(j2, "J2")?).map_err(core_error)?;
            let combined = if query.op == IdealOp::Meet {
                spec.meet(&other)
            } else {
                spec.join(&other)
            }
            .map_err(core_error)?;
            let indices: Vec<usize> = combined.indices().map(|p| p + 1).collect();
            to_json(&indices)?
        }
        IdealOp::Quotient => {
            let x = need_x(&query.x)?;
            let rep = spec.quotient_rep(&x).map_err(core_error)?;
            to_json(&NumberDocument::from_rep(&rep, result_rep(args.format)))?
        }
    };
    write_output(&args.io, &(rendered + "\n"))
}

fn read_matrix(args: &MatrixArgs) -> Result<(MatrixDocument, mcx_core::McMatrix), AppError> {
    let text = read_input(&args.io)?;
    let doc: MatrixDocument = from_json(text.trim())?;
    check_level_flag(args.n, doc.n)?;
    let matrix = doc.to_matrix().map_err(core_error)?;
    Ok((doc, matrix))
}

fn doc_rep(doc: &MatrixDocument, format: Option<Format>) -> Result<Rep, AppError> {
    Ok(match format {
        Some(Format::Std) => Rep::Standard,
        Some(Format::Idem) => Rep::Idempotent,
        Some(Format::Json) | None => doc.effective_rep().map_err(core_error)?,
    })
}

fn cmd_det(args: &MatrixArgs) -> Result<(), AppError> {
    let (doc, matrix) = read_matrix(args)?;
    let det = matrix.det().map_err(core_error)?;
    let out = NumberDocument::from_rep(&det, doc_rep(&doc, args.format)?);
    write_output(&args.io, &(to_json(&out)? + "\n"))?;
    // the document is still printed; the exit status carries the verdict
    let vanishing = matrix
        .vanishing_det_components(args.tol)
        .map_err(core_error)?;
    if !vanishing.is_empty() {
        return Err(AppError::Domain(format!(
            "singular matrix: determinant vanishes at component {}",
            list_1based(&vanishing)
        )));
    }
    Ok(())
}

fn cmd_inv(args: &MatrixArgs) -> Result<(), AppError> {
    let (doc, matrix) = read_matrix(args)?;
    let inverse = matrix.invert_with_tol(args.tol).map_err(core_error)?;
    let out = MatrixDocument::from_matrix(&inverse, doc_rep(&doc, args.format)?);
    write_output(&args.io, &(to_json(&out)? + "\n"))
}

#[derive(Serialize)]
struct EigOutput {
    eigenvalues: Vec<NumberDocument>,
    eigenkets: Vec<KetDocument>,
    residual: f64,
}

fn cmd_eig(args: &MatrixArgs) -> Result<(), AppError> {
    let (doc, matrix) = read_matrix(args)?;
    let spectral = spectral_decompose(&matrix, args.tol).map_err(core_error)?;
    let rep = doc_rep(&doc, args.format)?;
    let out = EigOutput {
        eigenvalues: spectral
            .eigenvalues
            .iter()
            .map(|d| NumberDocument::from_multiperplex(d, rep))
            .collect(),
        eigenkets: spectral
            .eigenkets
            .iter()
            .map(|k| KetDocument::from_ket(k, rep))
            .collect(),
        residual: spectral.residual,
    };
    write_output(&args.io, &(to_json(&out)? + "\n"))
}

fn run(cli: &Cli) -> Result<(), AppError> {
    match &cli.cmd {
        Cmd::Eval(a) => cmd_eval(a),
        Cmd::Convert(a) => cmd_convert(a),
        Cmd::Conj(a) => cmd_conj(a),
        Cmd::Norm(a) => cmd_norm(a),
        Cmd::Ideal(a) => cmd_ideal(a),
        Cmd::Det(a) => cmd_det(a),
        Cmd::Inv(a) => cmd_inv(a),
        Cmd::Eig(a) => cmd_eig(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
