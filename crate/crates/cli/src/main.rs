//! Command-line surface: category files or builtins in, dimension tables,
//! verification reports, and derived categories out.
//!
//! Exit codes: 0 = success / all checks pass, 1 = a check failed,
//! 2 = usage or parse error.


use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};

use superhh::builtin::{builtin, BUILTIN_NAMES};
use superhh::category::SuperCategory;
use superhh::field::{FieldKind, FieldSpec, Fp, Rat, Scalar};
use superhh::products::SignConvention;

use superhh_cli::commands;
use superhh_cli::format::{self, CategoryFile, IdempotentsFile};
use superhh_cli::report::{InputDigest, RunReport};

/// Hochschild and cyclic (co)homology of finite superadditive categories.
///
/// Categories are given as TOML files or as builtins addressed by `@name`
/// (see `catalog`). All arithmetic is exact: rationals or an odd prime field.
#[derive(Parser)]
#[command(name = "superhh", version, max_term_width = 100)]
struct Cli {
    /// Write the machine-readable report as JSON to this path.
    #[arg(long, global = true, value_name = "FILE")]
    json: Option<PathBuf>,

    /// Field for builtin categories: an odd prime for F_p (default: Q).
    #[arg(long, global = true, value_name = "P")]
    prime: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the category axioms and report every violation.
    Validate { category: String },
    /// Hochschild homology dimensions.
    Hh {
        category: String,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
    },
    /// Hochschild cohomology dimensions.
    Hcoh {
        category: String,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
    },
    /// Cyclic homology dimensions (total complex of the cyclic bicomplex).
    Hc {
        category: String,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
    },
    /// Cyclic cohomology dimensions (dualized bicomplex).
    Hccoh {
        category: String,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
    },
    /// Graded center (= HH^0) with a basis.
    Center { category: String },
    /// Graded commutator quotient (= HH_0) with representatives.
    Hh0 { category: String },
    /// Tensor product of two categories (written as a category file).
    Tensor {
        a: String,
        b: String,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Opposite category (written as a category file).
    Op {
        category: String,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Matrix truncation of the additive completion.
    Mat {
        category: String,
        #[arg(long, default_value_t = 2)]
        length: usize,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Idempotent fragment: objects (X, 1_X) plus the supplied idempotents.
    Idem {
        category: String,
        #[arg(long, value_name = "FILE")]
        idempotents: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Verify the chain-level shuffle identities on the normalized bases.
    VerifyIdentities {
        a: String,
        b: String,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// One of: koszul-homological, koszul-parity, koszul-total,
        /// nokoszul-homological, ... (default: resolve empirically).
        #[arg(long)]
        convention: Option<String>,
    },
    /// Eilenberg–Zilber check for HH of a tensor product.
    Ez {
        a: String,
        b: String,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
    },
    /// Künneth rank identity for HC of a tensor product.
    Kunneth {
        a: String,
        b: String,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
    },
    /// Verify exactness of the Gysin–Connes sequence.
    GysinConnes {
        category: String,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
    },
    /// List the builtin categories.
    Catalog,
}

enum Source {
    Builtin(String),
    File(PathBuf, String),
}

impl Source {
    fn load(spec: &str) -> Result<Source> {
        if let Some(name) = spec.strip_prefix('@') {
            if !BUILTIN_NAMES.contains(&name) {
                bail!("unknown builtin `@{name}` (see `superhh catalog`)");
            }
            Ok(Source::Builtin(name.to_string()))
        } else {
            let path = PathBuf::from(spec);
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("cannot read category file `{spec}`"))?;
            Ok(Source::File(path, text))
        }
    }

    fn digest(&self) -> InputDigest {
        match self {
            Source::Builtin(name) => InputDigest {
                name: format!("@{name}"),
                sha256: hex_digest(name.as_bytes()),
            },
            Source::File(path, text) => InputDigest {
                name: path.display().to_string(),
                sha256: hex_digest(text.as_bytes()),
            },
        }
    }

    fn field_kind(&self, prime: Option<u64>) -> Result<FieldSpec> {
        match self {
            Source::Builtin(_) => match prime {
                None => Ok(FieldSpec::rationals()),
                Some(p) => FieldSpec::prime(p).map_err(|e| anyhow!("{e}")),
            },
            Source::File(_, text) => {
                let file = CategoryFile::from_str(text)?;
                format::parse_field(&file.field)
            }
        }
    }

    fn to_category<F: Scalar>(&self, spec: FieldSpec, validate: bool) -> Result<SuperCategory<F>> {
        match self {
            Source::Builtin(name) => builtin(name, spec).map_err(|e| anyhow!("{e}")),
            Source::File(_, text) => {
                let file = CategoryFile::from_str(text)?;
                if validate {
                    file.to_category::<F>()
                } else {
                    file.to_category_unchecked::<F>()
                }
            }
        }
    }
}

fn hex_digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(threads) = std::env::var("SUPERHH_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    match run(cli) {
        Ok(all_pass) => {
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let started = Instant::now();
    let mut report = RunReport::default();

    if let Command::Catalog = cli.command {
        report.command = "catalog".into();
        report.field = "-".into();
        let spec = FieldSpec::rationals();
        let mut lines = Vec::new();
        for name in BUILTIN_NAMES {
            let cat: SuperCategory<Rat> = builtin(name, spec).map_err(|e| anyhow!("{e}"))?;
            lines.push(format!(
                "@{name}: {} object(s), {} basis morphism(s), parities ({})",
                cat.object_count(),
                cat.basis_count(),
                (0..cat.basis_count())
                    .map(|k| cat.parity(k).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ));
        }
        report.basis_lines = Some(lines);
        return emit(cli.json.as_deref(), report, started, started);
    }

    let sources = command_sources(&cli.command)?;
    let loaded: Vec<Source> = sources
        .iter()
        .map(|s| Source::load(s))
        .collect::<Result<_>>()?;
    for src in &loaded {
        report.inputs.push(src.digest());
    }
    let field = loaded[0].field_kind(cli.prime)?;
    for src in &loaded[1..] {
        let other = src.field_kind(cli.prime)?;
        if other != field {
            bail!("inputs live over different fields: {field} vs {other}");
        }
    }
    report.field = field.to_string();
    let loaded_at = Instant::now();

    let validate_inputs = !matches!(cli.command, Command::Validate { .. });
    let (out_path, category_file) = match field.kind() {
        FieldKind::Rationals => {
            let cats: Vec<SuperCategory<Rat>> = loaded
                .iter()
                .map(|s| s.to_category::<Rat>(field, validate_inputs))
                .collect::<Result<_>>()?;
            dispatch(&cli.command, &cats, &mut report)?
        }
        FieldKind::PrimeField => {
            let cats: Vec<SuperCategory<Fp>> = loaded
                .iter()
                .map(|s| s.to_category::<Fp>(field, validate_inputs))
                .collect::<Result<_>>()?;
            dispatch(&cli.command, &cats, &mut report)?
        }
    };
    if let Some(file) = category_file {
        match out_path {
            Some(path) => {
                std::fs::write(&path, &file)
                    .with_context(|| format!("cannot write `{}`", path.display()))?;
                report
                    .notes
                    .get_or_insert_with(Vec::new)
                    .push(format!("category written to {}", path.display()));
            }
            None => report.category_file = Some(file),
        }
    }

    emit(cli.json.as_deref(), report, loaded_at, started)
}

fn emit(
    json: Option<&std::path::Path>,
    mut report: RunReport,
    loaded_at: Instant,
    started: Instant,
) -> Result<bool> {
    commands::finish_timing(&mut report, loaded_at, started);
    report.print_human();
    if let Some(path) = json {
        let text = serde_json::to_string_pretty(&report)?;
        std::fs::write(path, text)
            .with_context(|| format!("cannot write report `{}`", path.display()))?;
    }
    Ok(report.all_checks_pass())
}

fn command_sources(cmd: &Command) -> Result<Vec<String>> {
    Ok(match cmd {
        Command::Validate { category }
        | Command::Hh { category, .. }
        | Command::Hcoh { category, .. }
        | Command::Hc { category, .. }
        | Command::Hccoh { category, .. }
        | Command::Center { category }
        | Command::Hh0 { category }
        | Command::Op { category, .. }
        | Command::Mat { category, .. }
        | Command::Idem { category, .. }
        | Command::GysinConnes { category, .. } => vec![category.clone()],
        Command::Tensor { a, b, .. }
        | Command::VerifyIdentities { a, b, .. }
        | Command::Ez { a, b, .. }
        | Command::Kunneth { a, b, .. } => vec![a.clone(), b.clone()],
        Command::Catalog => vec![],
    })
}

fn dispatch<F: Scalar>(
    cmd: &Command,
    cats: &[SuperCategory<F>],
    report: &mut RunReport,
) -> Result<(Option<PathBuf>, Option<String>)> {
    let mut out_path = None;
    let mut file = None;
    match cmd {
        Command::Validate { .. } => {
            report.command = "validate".into();
            commands::run_validate(&cats[0], report)?;
        }
        Command::Hh { max_degree, .. } => {
            report.command = "hh".into();
            report.max_degree = Some(*max_degree);
            commands::run_homology_table("hh", &cats[0], *max_degree, report)?;
        }
        Command::Hcoh { max_degree, .. } => {
            report.command = "hcoh".into();
            report.max_degree = Some(*max_degree);
            commands::run_homology_table("hcoh", &cats[0], *max_degree, report)?;
        }
        Command::Hc { max_degree, .. } => {
            report.command = "hc".into();
            report.max_degree = Some(*max_degree);
            commands::run_homology_table("hc", &cats[0], *max_degree, report)?;
        }
        Command::Hccoh { max_degree, .. } => {
            report.command = "hccoh".into();
            report.max_degree = Some(*max_degree);
            commands::run_homology_table("hccoh", &cats[0], *max_degree, report)?;
        }
        Command::Center { .. } => {
            report.command = "center".into();
            commands::run_center(&cats[0], report)?;
        }
        Command::Hh0 { .. } => {
            report.command = "hh0".into();
            commands::run_hh0(&cats[0], report)?;
        }
        Command::Tensor { out, .. } => {
            report.command = "tensor".into();
            file = Some(commands::run_tensor(&cats[0], &cats[1], report)?);
            out_path = out.clone();
        }
        Command::Op { out, .. } => {
            report.command = "op".into();
            file = Some(commands::run_op(&cats[0], report)?);
            out_path = out.clone();
        }
        Command::Mat { length, out, .. } => {
            report.command = "mat".into();
            file = Some(commands::run_mat(&cats[0], *length, report)?);
            out_path = out.clone();
        }
        Command::Idem { idempotents, out, .. } => {
            report.command = "idem".into();
            let text = std::fs::read_to_string(idempotents)
                .with_context(|| format!("cannot read `{}`", idempotents.display()))?;
            let idems = IdempotentsFile::from_str(&text)?.resolve(&cats[0])?;
            file = Some(commands::run_idem(&cats[0], idems, report)?);
            out_path = out.clone();
        }
        Command::VerifyIdentities { max_degree, seed, convention, .. } => {
            report.command = "verify-identities".into();
            report.max_degree = Some(*max_degree);
            report.seed = Some(*seed);
            let conv = match convention {
                Some(s) => Some(
                    SignConvention::parse(s)
                        .ok_or_else(|| anyhow!("unknown convention `{s}`"))?,
                ),
                None => None,
            };
            commands::run_verify_identities(&cats[0], &cats[1], *max_degree, *seed, conv, report)?;
        }
        Command::Ez { max_degree, .. } => {
            report.command = "ez".into();
            report.max_degree = Some(*max_degree);
            commands::run_ez(&cats[0], &cats[1], *max_degree, report)?;
        }
        Command::Kunneth { max_degree, .. } => {
            report.command = "kunneth".into();
            report.max_degree = Some(*max_degree);
            commands::run_kunneth(&cats[0], &cats[1], *max_degree, report)?;
        }
        Command::GysinConnes { max_degree, .. } => {
            report.command = "gysin-connes".into();
            report.max_degree = Some(*max_degree);
            commands::run_gysin_connes(&cats[0], *max_degree, report)?;
        }
        Command::Catalog => unreachable!("handled before dispatch"),
    }
    Ok((out_path, file))
}
