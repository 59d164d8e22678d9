use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use fqtnn::closed_forms::{self, ClosedFormError};
use fqtnn::field::{FieldError, FieldSpec};
use fqtnn::grassmannian::{CountTable, Enumerator, Filter, GrassmannianError, Subspace, DEFAULT_WORK_CAP};
use fqtnn::matrix::MatrixFq;
use fqtnn::structures::{self, Matroid, PositroidMode, StructureError};
use fqtnn::verify::{self, Suite, VerifyError, VerifyOptions};

#[derive(Parser)]
#[command(name = "fqtnn", version, about = "Totally nonnegative Grassmannians over finite fields")]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Bound on the search-space estimate C(n,k) q^(k(n-k)).
    #[arg(long, global = true, env = "TNN_WORK_CAP", default_value_t = DEFAULT_WORK_CAP)]
    work_cap: u64,

    /// Write data to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Characteristic.
    #[arg(long)]
    p: u32,
    /// Extension degree.
    #[arg(long, default_value_t = 1)]
    r: u32,
    /// Monic modulus, constant coefficient first (e.g. 1,0,1 for x^2+1).
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
}

impl FieldArgs {
    fn build(&self) -> Result<Arc<FieldSpec>, CliError> {
        match &self.modulus {
            None => Ok(FieldSpec::new(self.p, self.r)?),
            Some(m) => {
                if m.len() as u32 != self.r + 1 {
                    return Err(CliError::Usage(format!(
                        "modulus has degree {} but --r is {}",
                        m.len().saturating_sub(1),
                        self.r
                    )));
                }
                Ok(FieldSpec::with_modulus(self.p, m.clone())?)
            }
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// |Gr^{>=0}_{2,n}(F_3)|, variants 1..=6
    F3,
    /// |Gr^{>=0}_{2,n}(F_5)|, variants 1..=3
    F5,
    /// |Gr^{>=0}_{1,n}(F_q)| (or the polynomial in q with --poly)
    K1Nonneg,
    /// |Gr^{>0}_{1,n}(F_q)| (or the polynomial in q with --poly)
    K1Pos,
}

#[derive(Subcommand)]
enum Command {
    /// Count points of Gr_{k,n}(F_q) passing a filter.
    Count {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value = "tnn")]
        filter: Filter,
        #[arg(long, value_enum, default_value = "text")]
        format: OutFormat,
        /// Print pivot-set progress on stderr.
        #[arg(long)]
        progress: bool,
    },
    /// Stream the canonical representatives as JSON lines.
    Enumerate {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value = "tnn")]
        filter: Filter,
        #[arg(long)]
        progress: bool,
    },
    /// Triangle of counts for 0 <= k <= n <= max-n.
    Table {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        max_n: usize,
        #[arg(long, default_value = "tnn")]
        filter: Filter,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
    },
    /// Run a named cross-check suite (or `all`).
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Subspaces fixed by the twisted cyclic shift, as JSON lines.
    FixedPoints {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        field: FieldArgs,
        /// Only totally nonnegative fixed points.
        #[arg(long)]
        tnn: bool,
    },
    /// Decide whether a matroid is realized by a TNN subspace.
    Positroid {
        /// Matroid JSON: {"n":4,"k":2,"bases":[[1,2],[1,4],[2,3],[3,4]]}
        #[arg(long)]
        matroid: String,
        #[command(flatten)]
        field: FieldArgs,
        /// Check only this witness (rows separated by ';', entries by ',').
        #[arg(long)]
        witness: Option<String>,
    },
    /// Evaluate a closed-form count.
    ClosedForm {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        variant: u8,
        /// Field order for the k = 1 families.
        #[arg(long)]
        q: Option<u64>,
        /// Print the k = 1 count as a polynomial in q.
        #[arg(long)]
        poly: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: OutFormat,
    },
    /// alt(V^perp) of the row span of a matrix.
    Dual {
        /// Rows separated by ';', entries (element codes) by ','.
        #[arg(long)]
        rows: String,
        #[command(flatten)]
        field: FieldArgs,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    WorkCap(String),
    Io(io::Error),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<ClosedFormError> for CliError {
    fn from(e: ClosedFormError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<GrassmannianError> for CliError {
    fn from(e: GrassmannianError) -> Self {
        match e {
            GrassmannianError::WorkCapExceeded { .. } => CliError::WorkCap(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<StructureError> for CliError {
    fn from(e: StructureError) -> Self {
        match e {
            StructureError::Grassmannian(g) => g.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        if e.is_work_cap() {
            CliError::WorkCap(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

fn parse_rows(spec: &Arc<FieldSpec>, text: &str) -> Result<MatrixFq, CliError> {
    let mut rows = Vec::new();
    for row in text.split(';').filter(|r| !r.trim().is_empty()) {
        let codes: Result<Vec<u32>, CliError> = row
            .split(',')
            .map(|e| {
                let x: u64 = e
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad matrix entry '{e}'")))?;
                Ok(spec.check_code(x)?)
            })
            .collect();
        rows.push(codes?);
    }
    let k = rows.len();
    let n = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Usage("matrix rows have different lengths".into()));
    }
    MatrixFq::from_codes(spec, k, n, rows.concat()).map_err(|e| CliError::Usage(e.to_string()))
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Returns `Ok(false)` when a verification suite failed.
fn run(cli: Cli) -> Result<bool, CliError> {
    let cap = cli.work_cap;
    let mut out = open_output(&cli.output)?;
    let mut ok = true;
    match cli.command {
        Command::Count {
            k,
            n,
            field,
            filter,
            format,
            progress,
        } => {
            let spec = field.build()?;
            let report = Enumerator::new(k, n, &spec, filter)?
                .with_work_cap(cap)
                .with_progress(progress)
                .count()?;
            match format {
                OutFormat::Text => writeln!(out, "{}", report.count)?,
                OutFormat::Json => {
                    let count: serde_json::Number = report
                        .count
                        .to_string()
                        .parse()
                        .expect("decimal integers are JSON numbers");
                    let v = json!({
                        "k": k,
                        "n": n,
                        "field": spec.descriptor(),
                        "filter": filter,
                        "count": count,
                    });
                    writeln!(out, "{v}")?
                }
            }
        }
        Command::Enumerate {
            k,
            n,
            field,
            filter,
            progress,
        } => {
            let spec = field.build()?;
            let en = Enumerator::new(k, n, &spec, filter)?
                .with_work_cap(cap)
                .with_progress(progress);
            let mut err = None;
            en.for_each(|v| {
                if err.is_none() {
                    if let Err(e) = writeln!(out, "{}", v.to_json_line()) {
                        err = Some(e);
                    }
                }
            })?;
            if let Some(e) = err {
                return Err(e.into());
            }
        }
        Command::Table {
            field,
            max_n,
            filter,
            format,
        } => {
            let spec = field.build()?;
            let table = CountTable::compute(&spec, max_n, filter, cap)?;
            match format {
                TableFormat::Csv => write!(out, "{}", table.to_csv())?,
                TableFormat::Json => writeln!(out, "{}", table.to_json())?,
            }
        }
        Command::Verify { suite, max_n } => {
            let suites: Vec<Suite> = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![suite.parse().map_err(CliError::Usage)?]
            };
            let opts = VerifyOptions {
                max_n,
                work_cap: cap,
            };
            for s in suites {
                let report = verify::run_suite(s, &opts)?;
                ok &= report.passed();
                writeln!(out, "{}", report.to_json())?;
            }
        }
        Command::FixedPoints { k, n, field, tnn } => {
            let spec = field.build()?;
            for v in structures::fixed_points(k, n, &spec, tnn, cap)? {
                writeln!(out, "{}", v.to_json_line())?;
            }
        }
        Command::Positroid {
            matroid,
            field,
            witness,
        } => {
            let spec = field.build()?;
            let m: Matroid = serde_json::from_str(&matroid)
                .map_err(|e| CliError::Usage(format!("bad matroid JSON: {e}")))?;
            let mode = match witness {
                Some(w) => PositroidMode::Witness(Subspace::canonicalize(&parse_rows(&spec, &w)?)?),
                None => PositroidMode::Exhaustive { work_cap: cap },
            };
            let ans = structures::is_positroid(&m, &spec, mode)?;
            let v = json!({
                "is_positroid": ans.is_positroid,
                "witness": ans.witness.map(|w| w.to_json()),
            });
            writeln!(out, "{v}")?;
        }
        Command::ClosedForm {
            family,
            n,
            variant,
            q,
            poly,
            format,
        } => {
            let (name, value) = match family {
                Family::F3 => ("f3", closed_forms::f3_k2(n, variant)?.to_string()),
                Family::F5 => ("f5", closed_forms::f5_k2(n, variant)?.to_string()),
                Family::K1Nonneg | Family::K1Pos => {
                    let nonneg = matches!(family, Family::K1Nonneg);
                    let name = if nonneg { "k1-nonneg" } else { "k1-pos" };
                    if poly {
                        let p = if nonneg {
                            closed_forms::k1_nonneg_poly(n)
                        } else {
                            closed_forms::k1_pos_poly(n)
                        };
                        (name, p.to_string())
                    } else {
                        let q = q.ok_or_else(|| CliError::Usage("--q is required without --poly".into()))?;
                        let v = if nonneg {
                            closed_forms::k1_nonneg(q, n)?
                        } else {
                            closed_forms::k1_pos(q, n)?
                        };
                        (name, v.to_string())
                    }
                }
            };
            match format {
                OutFormat::Text => writeln!(out, "{value}")?,
                OutFormat::Json => {
                    let v = json!({"family": name, "n": n, "variant": variant, "value": value});
                    writeln!(out, "{v}")?
                }
            }
        }
        Command::Dual { rows, field } => {
            let spec = field.build()?;
            let v = Subspace::canonicalize(&parse_rows(&spec, &rows)?)?;
            writeln!(out, "{}", v.dual().to_json())?;
        }
    }
    out.flush()?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .expect("thread pool is configured once");
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::WorkCap(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
