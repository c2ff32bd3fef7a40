//! `vbcm`: command-line front end to `vbcm-core`.
//!
//! Structured inputs (matrices, chain data, band data, module presentations)
//! are JSON, given as a positional argument that is either literal JSON or a
//! path, or read from standard input when omitted or `-`. Every global flag can
//! also be set through an environment variable with the `VBCM_` prefix.

mod render;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use vbcm_core::band::{self, BandDatum, DualGraph};
use vbcm_core::chain::{self, ChainData};
use vbcm_core::cmmod::{self, CuspSingularity, QCuspData, SimpleEllipticSingularity};
use vbcm_core::cohom;
use vbcm_core::laurent::{self, LaurentMatrix};
use vbcm_core::wild::{self, ModulePresentation, Sigma2Module, WitnessKind, WitnessParams};
use vbcm_core::{Error, Field, FieldElem, Matrix};

use render::{Format, Output};

#[derive(Parser, Debug)]
#[command(name = "vbcm", version, about = "Vector bundles on chains and cycles of projective lines, and Cohen-Macaulay modules")]
struct Cli {
    /// Ground field: `q` or `fp:<prime>`.
    #[arg(long, global = true, env = "VBCM_FIELD", default_value = "q")]
    field: String,

    #[arg(long, global = true, env = "VBCM_FORMAT", value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Seed for every randomized step.
    #[arg(long, global = true, env = "VBCM_SEED", default_value_t = 0)]
    seed: u64,

    /// Write the result to this file instead of standard output.
    #[arg(long, global = true, env = "VBCM_OUT")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bundles on the projective line given by a Laurent transition matrix.
    #[command(subcommand)]
    P1(P1Cmd),
    /// Weighted matrix problem on a chain of projective lines.
    #[command(subcommand)]
    Chain(ChainCmd),
    /// Band data on a cycle of projective lines.
    #[command(subcommand)]
    Band(BandCmd),
    /// Cohomology of band bundles.
    #[command(subcommand)]
    Cohom(CohomCmd),
    /// Cohen-Macaulay modules over cusp, simple elliptic and Q-cusp singularities.
    #[command(subcommand)]
    Cm(CmCmd),
    /// Wildness gadgets.
    #[command(subcommand)]
    Wild(WildCmd),
    /// Rank-indexed table of Cohen-Macaulay modules.
    Catalog(CatalogArgs),
}

#[derive(Args, Debug)]
struct InputArg {
    /// Literal JSON, a file path, or `-` for standard input.
    input: Option<String>,
}

#[derive(Subcommand, Debug)]
enum P1Cmd {
    /// Splitting type of the bundle.
    Split {
        #[command(flatten)]
        input: InputArg,
        /// Also print the base-change matrices S and T.
        #[arg(long)]
        witness: bool,
    },
    /// Dimension of global sections of the bundle twisted by O(twist).
    Sections {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0)]
        twist: i64,
    },
}

#[derive(Subcommand, Debug)]
enum ChainCmd {
    /// Line-bundle decomposition of a vector bundle on a chain.
    Classify {
        #[command(flatten)]
        input: InputArg,
    },
    /// Decomposition of a torsion-free sheaf into interval line bundles.
    TfClassify {
        #[command(flatten)]
        input: InputArg,
    },
}

#[derive(Args, Debug)]
struct SeqArgs {
    #[arg(long)]
    s: usize,
    #[arg(long)]
    r: usize,
    /// Residue-class degree sums, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    delta: Vec<i64>,
}

#[derive(Subcommand, Debug)]
enum BandCmd {
    /// Canonical representative of the s-shift orbit.
    Canon {
        #[command(flatten)]
        input: InputArg,
    },
    /// Whether two band data (a JSON array of two) give isomorphic bundles.
    Iso {
        #[command(flatten)]
        input: InputArg,
    },
    /// Nonnegative non-periodic sequences with given residue-class sums.
    Enum(SeqArgs),
    /// Number of one-parameter families of given rank and multidegree.
    Nu(SeqArgs),
    /// Explicit node gluing matrices.
    Glue {
        #[command(flatten)]
        input: InputArg,
    },
    /// Chain data obtained by cutting the closing node.
    Cut {
        #[command(flatten)]
        input: InputArg,
    },
    /// Vector-bundle type of a curve given by its dual graph.
    CurveType {
        #[command(flatten)]
        input: InputArg,
    },
    /// Same as `cohom dims`.
    Cohom(DimsArgs),
}

#[derive(Args, Debug)]
struct DimsArgs {
    #[command(flatten)]
    input: InputArg,
    /// Compute by Čech cohomology of the gluing instead of the closed formula.
    #[arg(long)]
    cech: bool,
}

#[derive(Subcommand, Debug)]
enum CohomCmd {
    /// h0 and h1 of a band bundle.
    Dims(DimsArgs),
    /// Whether a sequence is suitable.
    Suitable {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        d: Vec<i64>,
    },
    /// Whether a band bundle is generically spanned with vanishing h1.
    Spanned {
        #[command(flatten)]
        input: InputArg,
    },
    /// Cohomology of the Atiyah bundle M_{r,d}(nx) on an elliptic curve.
    Atiyah {
        #[arg(long)]
        r: i64,
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(long)]
        n: i64,
        /// The point x is the origin.
        #[arg(long)]
        origin: bool,
    },
}

#[derive(Subcommand, Debug)]
enum CmCmd {
    /// Indecomposable CM modules of a given rank over a cusp singularity.
    CuspEnum {
        /// Self-intersection numbers, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        b: Vec<i64>,
        #[arg(long)]
        rank: usize,
    },
    /// Indecomposable CM modules of a given rank over a simple elliptic singularity.
    EllipticEnum {
        /// Minus the self-intersection of the elliptic curve.
        #[arg(long, allow_negative_numbers = true)]
        b: i64,
        #[arg(long)]
        rank: usize,
    },
    /// Indecomposable CM modules of a given rank over a Q-cusp singularity.
    QcuspEnum {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        b: Vec<i64>,
        #[arg(long)]
        rank: usize,
    },
    /// Number of trivial summands of the full bundle with degrees d.
    Nd {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        d: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        b: Vec<i64>,
    },
    /// Action of the reflection on band parameters.
    Sigma {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        d: Vec<i64>,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        t: usize,
    },
}

#[derive(Subcommand, Debug)]
enum WildCmd {
    /// Embeds a module over a free algebra into modules over two generators.
    Embed {
        #[command(flatten)]
        input: InputArg,
        /// Distinct scalars used by the embedding, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambdas: Option<Vec<String>>,
    },
    /// Dimension of Hom between two modules (a JSON array of two).
    Homdim {
        #[command(flatten)]
        input: InputArg,
    },
    /// Matrices of a wildness family at given parameter values.
    Witness {
        #[arg(long)]
        kind: String,
        /// Size of the identity block (genus kind).
        #[arg(long)]
        n: Option<usize>,
        /// Parameter values `name=value`; missing ones are drawn from the seed.
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
        /// JSON object with optional matrices `A` and `B` (genus kind).
        #[arg(long)]
        matrices: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Target {
    Cusp,
    Elliptic,
    Qcusp,
}

#[derive(Args, Debug)]
struct CatalogArgs {
    #[arg(long, value_enum)]
    target: Target,
    /// Singularity data: the cycle of self-intersections, or a single b for
    /// the elliptic case.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    b: Vec<i64>,
    #[arg(long, default_value_t = 1)]
    min_rank: usize,
    #[arg(long)]
    max_rank: usize,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_precondition() => 3,
            _ => 2,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read_input(arg: &InputArg) -> CliResult<Value> {
    let text = match arg.input.as_deref() {
        None | Some("-") => std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::Invalid(format!("reading stdin: {e}")))?,
        Some(s) if s.trim_start().starts_with(['{', '[']) => s.to_string(),
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("reading {path}: {e}")))?,
    };
    parse_json(&text)
}

fn parse_json(text: &str) -> CliResult<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")).into())
}

fn pair(v: &Value) -> CliResult<(&Value, &Value)> {
    match v.as_array().map(Vec::as_slice) {
        Some([a, b]) => Ok((a, b)),
        _ => Err(Error::Parse("expected a JSON array of two items".into()).into()),
    }
}

fn check_delta(args: &SeqArgs) -> CliResult<()> {
    if args.delta.len() != args.s {
        return Err(Error::SizeMismatch(format!("delta has {} entries, expected s = {}", args.delta.len(), args.s)).into());
    }
    if args.s == 0 || args.r == 0 {
        return Err(Error::RangeViolation("s and r must be positive".into()).into());
    }
    if args.delta.iter().any(|&x| x < 0) {
        return Err(Error::RangeViolation("delta entries must be nonnegative".into()).into());
    }
    Ok(())
}

fn band_input(field: Field, input: &InputArg) -> CliResult<BandDatum> {
    Ok(BandDatum::from_json(field, &read_input(input)?)?)
}

fn dims(field: Field, args: &DimsArgs) -> CliResult<Output> {
    let b = band_input(field, &args.input)?;
    let c = if args.cech { cohom::cech_cohomology(&b)? } else { cohom::cohomology(&b)? };
    Ok(Output::Value(c.to_json()))
}

fn warn(w: Option<String>) {
    if let Some(w) = w {
        eprintln!("warning: {w}");
    }
}

fn run(cli: &Cli) -> CliResult<Output> {
    let field = Field::parse(&cli.field)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let out = match &cli.command {
        Command::P1(P1Cmd::Split { input, witness }) => {
            let a = LaurentMatrix::from_json(field, &read_input(input)?)?;
            let res = laurent::diagonalize(&a)?;
            if *witness {
                Output::Value(json!({ "degrees": res.degrees, "S": res.s.to_json(), "T": res.t.to_json() }))
            } else {
                Output::Value(json!(res.degrees))
            }
        }
        Command::P1(P1Cmd::Sections { input, twist }) => {
            let a = LaurentMatrix::from_json(field, &read_input(input)?)?;
            Output::Value(json!(laurent::section_dim_oracle(&a, *twist)?))
        }
        Command::Chain(ChainCmd::Classify { input }) => {
            let data = ChainData::from_json(field, &read_input(input)?)?;
            let red = chain::reduce_chain(&data)?;
            Output::Value(json!({ "bundles": red.bundles, "transformed": red.transformed.to_json() }))
        }
        Command::Chain(ChainCmd::TfClassify { input }) => {
            let data = ChainData::from_json(field, &read_input(input)?)?;
            let parts = chain::decompose_torsion_free(&data)?;
            Output::Value(Value::Array(parts.iter().map(|p| p.to_json()).collect()))
        }
        Command::Band(cmd) => match cmd {
            BandCmd::Canon { input } => Output::Value(band::canonical_form(&band_input(field, input)?)?.to_json()),
            BandCmd::Iso { input } => {
                let v = read_input(input)?;
                let (a, b) = pair(&v)?;
                let (a, b) = (BandDatum::from_json(field, a)?, BandDatum::from_json(field, b)?);
                Output::Value(json!(band::are_isomorphic(&a, &b)?))
            }
            BandCmd::Enum(args) => {
                check_delta(args)?;
                Output::Value(json!(band::enumerate_nonneg(args.s, args.r, &args.delta)))
            }
            BandCmd::Nu(args) => {
                check_delta(args)?;
                Output::Value(json!(band::nu_count(args.s, args.r, &args.delta)))
            }
            BandCmd::Glue { input } => Output::Value(band::build_gluing(&band_input(field, input)?)?.to_json()),
            BandCmd::Cut { input } => Output::Value(band::cut_cycle(&band_input(field, input)?)?.to_json()),
            BandCmd::CurveType { input } => {
                let g = DualGraph::from_json(&read_input(input)?)?;
                Output::Value(json!(band::curve_vb_type(&g)?.to_string()))
            }
            BandCmd::Cohom(args) => dims(field, args)?,
        },
        Command::Cohom(cmd) => match cmd {
            CohomCmd::Dims(args) => dims(field, args)?,
            CohomCmd::Suitable { d } => Output::Value(json!(cohom::is_suitable(d))),
            CohomCmd::Spanned { input } => Output::Value(json!(cohom::is_generically_spanned(&band_input(field, input)?)?)),
            CohomCmd::Atiyah { r, d, n, origin } => Output::Value(cohom::atiyah_cohom(*r, *d, *n, *origin)?.to_json()),
        },
        Command::Cm(cmd) => match cmd {
            CmCmd::CuspEnum { b, rank } => {
                let sing = CuspSingularity::new(b.clone())?;
                warn(sing.warning());
                Output::Descriptors(cmmod::enumerate_cm_cusp(&sing, *rank))
            }
            CmCmd::EllipticEnum { b, rank } => {
                let sing = SimpleEllipticSingularity::new(*b)?;
                Output::Descriptors(cmmod::enumerate_cm_elliptic(&sing, *rank))
            }
            CmCmd::QcuspEnum { b, rank } => {
                let data = QCuspData::new(b.clone())?;
                warn(data.cover().warning());
                Output::Descriptors(cmmod::enumerate_cm_qcusp(&data, *rank))
            }
            CmCmd::Nd { d, b } => {
                let sing = CuspSingularity::new(b.clone())?;
                Output::Value(json!(cmmod::n_d(d, &sing)?))
            }
            CmCmd::Sigma { d, m, lambda, t } => {
                let lambda = field.parse_elem(lambda)?;
                let (d, m, lambda) = cmmod::sigma_act(d, *m, &lambda, *t)?;
                Output::Value(json!({ "d": d, "m": m, "lambda": lambda.to_string() }))
            }
        },
        Command::Wild(cmd) => match cmd {
            WildCmd::Embed { input, lambdas } => {
                let m = ModulePresentation::from_json(field, &read_input(input)?)?;
                let lambdas = lambdas
                    .as_ref()
                    .map(|ls| ls.iter().map(|l| field.parse_elem(l)).collect::<std::result::Result<Vec<FieldElem>, Error>>())
                    .transpose()?;
                Output::Value(wild::embed_sigma2(field, &m, lambdas.as_deref())?.to_json())
            }
            WildCmd::Homdim { input } => {
                let v = read_input(input)?;
                let (a, b) = pair(&v)?;
                let dim = if a.get("A").is_some() {
                    wild::hom_dim_sigma2(&Sigma2Module::from_json(field, a)?, &Sigma2Module::from_json(field, b)?)
                } else {
                    wild::hom_dim(&ModulePresentation::from_json(field, a)?, &ModulePresentation::from_json(field, b)?)?
                };
                Output::Value(json!(dim))
            }
            WildCmd::Witness { kind, n, params, matrices } => {
                let kind: WitnessKind = kind.parse()?;
                let mut values = BTreeMap::new();
                for p in params {
                    let (name, value) =
                        p.split_once('=').ok_or_else(|| CliError::Invalid(format!("parameter `{p}` is not NAME=VALUE")))?;
                    values.insert(name.trim().to_string(), field.parse_elem(value)?);
                }
                for v in kind.variables() {
                    if !values.contains_key(*v) {
                        values.insert(v.to_string(), field.random_nonzero(&mut rng));
                    }
                }
                let mut wp = WitnessParams { values, n: *n, a: None, b: None };
                if let Some(text) = matrices {
                    let text = if text.trim_start().starts_with('{') {
                        text.clone()
                    } else {
                        std::fs::read_to_string(text).map_err(|e| CliError::Invalid(format!("reading {text}: {e}")))?
                    };
                    let v = parse_json(&text)?;
                    wp.a = v.get("A").map(|m| Matrix::from_json(field, m)).transpose()?;
                    wp.b = v.get("B").map(|m| Matrix::from_json(field, m)).transpose()?;
                }
                Output::Value(wild::witness(field, kind, &wp)?.to_json())
            }
        },
        Command::Catalog(args) => catalog(args)?,
    };
    Ok(out)
}

fn catalog(args: &CatalogArgs) -> CliResult<Output> {
    if args.min_rank < 1 || args.max_rank < args.min_rank {
        return Err(CliError::Invalid(format!("empty rank range {}..={}", args.min_rank, args.max_rank)));
    }
    let ranks = args.min_rank..=args.max_rank;
    let rows = match args.target {
        Target::Cusp => {
            let sing = CuspSingularity::new(args.b.clone())?;
            warn(sing.warning());
            ranks.flat_map(|r| cmmod::enumerate_cm_cusp(&sing, r)).collect()
        }
        Target::Elliptic => {
            let [b] = args.b[..] else {
                return Err(CliError::Invalid("the elliptic target takes a single b".into()));
            };
            let sing = SimpleEllipticSingularity::new(b)?;
            ranks.flat_map(|r| cmmod::enumerate_cm_elliptic(&sing, r)).collect()
        }
        Target::Qcusp => {
            let data = QCuspData::new(args.b.clone())?;
            warn(data.cover().warning());
            ranks.flat_map(|r| cmmod::enumerate_cm_qcusp(&data, r)).collect()
        }
    };
    Ok(Output::Descriptors(rows))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            let text = out.render(cli.format);
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("error: writing {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
