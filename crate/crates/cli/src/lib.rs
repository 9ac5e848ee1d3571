//! Command implementations for the `perfect-forms` binary.
//!
//! Every command writes its report to the supplied writer and returns the
//! process exit status; files are written only where a path is given.

pub mod json;
pub mod table;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use perfect_forms::formspace::Gram;
use perfect_forms::perfection::perfection_report;
use perfect_forms::scalar::to_fraction_string;
use perfect_forms::seed::{initial_perfect_form, seed_trace_form};
use perfect_forms::shortvec::minimal_vectors;
use perfect_forms::voronoi::{enumerate_resumable, Checkpoint, EnumerationConfig};
use perfect_forms::{EnumerationResult, FormOverF, QuadraticField, Rational};
use serde_json::{json, Value};

use json::{adjacency_file, classes_file, field_from_d, parse_number, render, ElementJson, FieldJson, FormJson};
use table::{Count, Row};

pub const CHECKPOINT_ENV: &str = "PERFECT_FORMS_CHECKPOINT_DIR";
pub const REFERENCE_TABLE: &str = include_str!("../data/reference_counts.csv");

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] perfect_forms::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(perfect_forms::Error::Truncated { .. }) => 3,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "perfect-forms",
    version,
    about = "Perfect binary forms over real quadratic fields"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    /// Square-free d > 1 selecting Q(sqrt d).
    #[arg(long)]
    pub d: Option<i64>,
    /// Work over Q instead.
    #[arg(long, conflicts_with = "d")]
    pub rational: bool,
    /// Number of variables.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
}

impl FieldArgs {
    fn field(&self) -> Result<Option<QuadraticField>, CliError> {
        match (self.d, self.rational) {
            (_, true) => Ok(Some(QuadraticField::rational())),
            (Some(1), _) => Err(CliError::Usage("d = 1 is not allowed; use --rational".into())),
            (Some(d), _) => field_from_d(d).map(Some),
            (None, false) => Ok(None),
        }
    }

    fn require_field(&self) -> Result<QuadraticField, CliError> {
        self.field()?
            .ok_or_else(|| CliError::Usage("one of --d or --rational is required".into()))
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Worker threads (default: available cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Abort once this many classes have been found.
    #[arg(long, default_value_t = 10_000)]
    pub class_cap: usize,
}

impl RunArgs {
    fn config(&self) -> EnumerationConfig {
        let jobs = self
            .jobs
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        EnumerationConfig {
            class_cap: self.class_cap,
            threads: jobs.max(1),
            ..EnumerationConfig::default()
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The explicit initial perfect form over Q(sqrt d).
    Seed {
        #[arg(long)]
        d: i64,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Minimum and minimal vectors of a Gram matrix or a form.
    Minvec {
        /// JSON array of rows; entries are integers or "num/den" strings.
        #[arg(long, conflicts_with_all = ["form_file", "d", "rational"])]
        gram_file: Option<PathBuf>,
        /// A form in the JSON form schema.
        #[arg(long, conflicts_with_all = ["d", "rational"])]
        form_file: Option<PathBuf>,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Checks whether a form (default: the initial form) is perfect.
    PerfectCheck {
        #[arg(long, conflicts_with_all = ["d", "rational"])]
        form_file: Option<PathBuf>,
        #[command(flatten)]
        field: FieldArgs,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Lists the classes of perfect forms and their neighbor graph.
    Enumerate {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Directory for the classes and adjacency files.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Checkpoint file, rewritten after every batch.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Directory for checkpoints when --checkpoint is not given.
        #[arg(long, env = CHECKPOINT_ENV)]
        checkpoint_dir: Option<PathBuf>,
        /// Continue from the checkpoint if it exists.
        #[arg(long)]
        resume: bool,
    },
    /// Class counts for a range of fields, as CSV keyed by discriminant.
    Table {
        #[arg(long)]
        d_min: Option<i64>,
        #[arg(long)]
        d_max: Option<i64>,
        /// Individual values of d; may be repeated.
        #[arg(long = "d")]
        d: Vec<i64>,
        #[command(flatten)]
        run: RunArgs,
        /// CSV destination (default: stdout).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Plot data destination.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Compares class counts against a reference table.
    Verify {
        /// Reference CSV with D and N_D columns (default: the shipped table).
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Previously computed CSV; otherwise the counts are computed.
        #[arg(long)]
        computed: Option<PathBuf>,
        #[arg(long)]
        d_min: Option<i64>,
        #[arg(long)]
        d_max: Option<i64>,
        #[command(flatten)]
        run: RunArgs,
    },
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Seed { d, n, output } => cmd_seed(*d, *n, output.as_deref(), out),
        Command::Minvec {
            gram_file,
            form_file,
            field,
            output,
        } => cmd_minvec(
            gram_file.as_deref(),
            form_file.as_deref(),
            field,
            output.as_deref(),
            out,
        ),
        Command::PerfectCheck { form_file, field, json } => cmd_perfect_check(form_file.as_deref(), field, *json, out),
        Command::Enumerate {
            field,
            run,
            out_dir,
            checkpoint,
            checkpoint_dir,
            resume,
        } => {
            let field_v = field.require_field()?;
            let cp = checkpoint.clone().or_else(|| {
                checkpoint_dir
                    .as_ref()
                    .map(|dir| dir.join(format!("checkpoint_{}.json", tag(field_v, field.n))))
            });
            cmd_enumerate(field_v, field.n, &run.config(), out_dir, cp.as_deref(), *resume, out)
        }
        Command::Table {
            d_min,
            d_max,
            d,
            run,
            output,
            plot,
        } => {
            let mut ds = d.clone();
            if d_min.is_some() || d_max.is_some() {
                ds.extend(table::squarefree_range(d_min.unwrap_or(2), d_max.unwrap_or(66)));
            }
            for &x in &ds {
                field_from_d(x)?;
            }
            cmd_table(&ds, &run.config(), output.as_deref(), plot.as_deref(), out)
        }
        Command::Verify {
            reference,
            computed,
            d_min,
            d_max,
            run,
        } => cmd_verify(
            reference.as_deref(),
            computed.as_deref(),
            (*d_min, *d_max),
            &run.config(),
            out,
        ),
    }
}

fn write_json_or_print(value: &Value, output: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    let text = render(value)?;
    match output {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn cmd_seed(d: i64, n: usize, output: Option<&Path>, out: &mut dyn Write) -> Result<i32, CliError> {
    if d == 1 {
        return Err(CliError::Usage("the seed needs a quadratic field, d > 1".into()));
    }
    let field = field_from_d(d)?;
    let (seed, gram, md) = seed_trace_form::<Rational>(field)?;
    let form = initial_perfect_form::<Rational>(field, n)?;
    let fmd = minimal_vectors(&form.restriction_of_scalars())?;
    let report = perfection_report(&form, &fmd)?;
    let (p, q) = seed.alpha.sqrt_coords();
    let value = json!({
        "field": FieldJson::of(field),
        "alpha": ElementJson::of(&seed.alpha),
        "alpha_sqrt_d": {"rational": to_fraction_string(&p), "sqrt_d": to_fraction_string(&q)},
        "x0": to_fraction_string(&seed.x0),
        "n_tilde": seed.n_tilde,
        "eta": ElementJson::of(&seed.eta),
        "geodesic": seed.geodesic.equation(),
        "trace_form": {
            "gram": gram_json(&gram),
            "minimum": to_fraction_string(&md.minimum),
            "min_vectors": md.vectors,
        },
        "form": FormJson::of(&form),
        "minimum": to_fraction_string(&fmd.minimum),
        "num_min_vectors": fmd.len(),
        "perfect": report.is_perfect,
        "rank": report.rank,
        "required_rank": report.required,
    });
    write_json_or_print(&value, output, out)?;
    Ok(0)
}

fn gram_json(g: &Gram<Rational>) -> Vec<Vec<String>> {
    g.rows()
        .iter()
        .map(|r| r.iter().map(to_fraction_string).collect())
        .collect()
}

fn read_form(path: &Path) -> Result<FormOverF, CliError> {
    let form: FormJson = serde_json::from_str(&fs::read_to_string(path)?)?;
    form.form()
}

fn read_gram(path: &Path) -> Result<Gram<Rational>, CliError> {
    let value: Value = serde_json::from_str(&fs::read_to_string(path)?)?;
    let rows = value
        .as_array()
        .ok_or_else(|| CliError::Usage("Gram file must be a JSON array of rows".into()))?;
    let parsed = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| CliError::Usage("Gram rows must be arrays".into()))?
                .iter()
                .map(|x| match x {
                    Value::String(s) => parse_number(s),
                    Value::Number(n) if n.is_i64() => parse_number(&n.to_string()),
                    other => Err(CliError::Usage(format!("bad Gram entry {other}"))),
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    if parsed.is_empty() || parsed.iter().any(|r| r.len() != parsed.len()) {
        return Err(CliError::Usage("Gram matrix must be square and nonempty".into()));
    }
    Gram::new(parsed).map_err(|e| CliError::Usage(e.to_string()))
}

fn form_for(form_file: Option<&Path>, field: &FieldArgs) -> Result<FormOverF, CliError> {
    match form_file {
        Some(p) => read_form(p),
        None => {
            let f = field.require_field()?;
            Ok(initial_perfect_form::<Rational>(f, field.n)?)
        }
    }
}

pub fn cmd_minvec(
    gram_file: Option<&Path>,
    form_file: Option<&Path>,
    field: &FieldArgs,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let (gram, form) = match gram_file {
        Some(p) => (read_gram(p)?, None),
        None => {
            let f = form_for(form_file, field)?;
            (f.restriction_of_scalars(), Some(f))
        }
    };
    let md = minimal_vectors(&gram)?;
    let mut value = json!({
        "dimension": gram.dim(),
        "minimum": to_fraction_string(&md.minimum),
        "num_vectors": md.len(),
        "vectors": md.vectors,
    });
    if let Some(f) = form {
        let fv: Vec<Vec<ElementJson>> = md.vectors.iter().map(|v| json::vector_json(f.field(), v)).collect();
        value["field"] = serde_json::to_value(FieldJson::of(f.field()))?;
        value["field_vectors"] = serde_json::to_value(fv)?;
    }
    write_json_or_print(&value, output, out)?;
    Ok(0)
}

pub fn cmd_perfect_check(
    form_file: Option<&Path>,
    field: &FieldArgs,
    as_json: bool,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let form = form_for(form_file, field)?;
    let md = minimal_vectors(&form.restriction_of_scalars())?;
    let report = perfection_report(&form, &md)?;
    if as_json {
        let value = json!({
            "field": FieldJson::of(form.field()),
            "minimum": to_fraction_string(&md.minimum),
            "min_vectors": md.vectors,
            "perfect": report.is_perfect,
            "rank": report.rank,
            "required_rank": report.required,
        });
        out.write_all(render(&value)?.as_bytes())?;
    } else {
        writeln!(
            out,
            "perfect: {}, rank {}/{}, minimum {}, {} minimal vectors",
            report.is_perfect,
            report.rank,
            report.required,
            md.minimum,
            md.len()
        )?;
    }
    Ok(0)
}

/// File-name tag for a field and rank.
pub fn tag(field: QuadraticField, n: usize) -> String {
    let base = if field.is_rational() {
        "rational".to_string()
    } else {
        format!("D{}", field.discriminant())
    };
    if n == 2 {
        base
    } else {
        format!("{base}_n{n}")
    }
}

fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, text)?;
    fs::rename(tmp, path)
}

/// Runs an enumeration, saving checkpoints to `checkpoint` when given and
/// resuming from it when asked to.
pub fn run_enumeration(
    field: QuadraticField,
    n: usize,
    config: &EnumerationConfig,
    checkpoint: Option<&Path>,
    resume: bool,
) -> Result<EnumerationResult, CliError> {
    let resume_from: Option<Checkpoint> = match checkpoint {
        Some(p) if resume && p.exists() => Some(serde_json::from_str(&fs::read_to_string(p)?)?),
        _ => None,
    };
    if let Some(p) = checkpoint.and_then(|p| p.parent()) {
        if !p.as_os_str().is_empty() {
            fs::create_dir_all(p)?;
        }
    }
    let save = |cp: &Checkpoint| -> perfect_forms::Result<()> {
        if let Some(p) = checkpoint {
            let text = serde_json::to_string(cp).map_err(|e| perfect_forms::Error::Domain(e.to_string()))?;
            write_atomic(p, &text)
                .map_err(|e| perfect_forms::Error::Domain(format!("checkpoint {}: {e}", p.display())))?;
        }
        Ok(())
    };
    Ok(enumerate_resumable(field, n, config, resume_from.as_ref(), save)?)
}

pub fn summary_line(res: &EnumerationResult) -> String {
    if res.field.is_rational() {
        format!("N={}", res.num_classes())
    } else {
        format!("D={} N_D={} classes", res.field.discriminant(), res.num_classes())
    }
}

pub fn cmd_enumerate(
    field: QuadraticField,
    n: usize,
    config: &EnumerationConfig,
    out_dir: &Path,
    checkpoint: Option<&Path>,
    resume: bool,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let res = match run_enumeration(field, n, config, checkpoint, resume) {
        Err(CliError::Core(perfect_forms::Error::Truncated { cap })) => {
            writeln!(out, "TRUNCATED: class cap {cap} reached for {}", tag(field, n))?;
            return Ok(3);
        }
        other => other?,
    };
    fs::create_dir_all(out_dir)?;
    let t = tag(field, n);
    fs::write(out_dir.join(format!("classes_{t}.json")), render(&classes_file(&res))?)?;
    fs::write(
        out_dir.join(format!("adjacency_{t}.json")),
        render(&adjacency_file(&res))?,
    )?;
    writeln!(out, "{}", summary_line(&res))?;
    Ok(0)
}

/// `N_D` for each `d`, sorted by discriminant.
pub fn compute_rows(ds: &[i64], config: &EnumerationConfig) -> Vec<Row> {
    let mut ds = ds.to_vec();
    ds.sort_by_key(|&d| table::discriminant_of(d));
    ds.dedup();
    ds.iter()
        .map(|&d| {
            let count = match field_from_d(d).and_then(|f| run_enumeration(f, 2, config, None, false)) {
                Ok(res) => Count::Classes(res.num_classes()),
                Err(e) => Count::Error(e.to_string()),
            };
            Row {
                discriminant: table::discriminant_of(d),
                count,
            }
        })
        .collect()
}

pub fn cmd_table(
    ds: &[i64],
    config: &EnumerationConfig,
    output: Option<&Path>,
    plot: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let rows = compute_rows(ds, config);
    let csv = table::render_csv(&rows)?;
    match output {
        Some(p) => fs::write(p, &csv)?,
        None => out.write_all(csv.as_bytes())?,
    }
    if let Some(p) = plot {
        fs::write(p, table::render_plot(&rows))?;
    }
    let mut failed = false;
    for r in &rows {
        if let Count::Error(e) = &r.count {
            eprintln!("D={}: {e}", r.discriminant);
            failed = true;
        }
    }
    Ok(if failed { 1 } else { 0 })
}

pub fn cmd_verify(
    reference: Option<&Path>,
    computed: Option<&Path>,
    d_range: (Option<i64>, Option<i64>),
    config: &EnumerationConfig,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let reference_text = match reference {
        Some(p) => fs::read_to_string(p)?,
        None => REFERENCE_TABLE.to_string(),
    };
    let reference_rows = table::parse_table(&reference_text)?;
    let computed_rows = match computed {
        Some(p) => table::parse_table(&fs::read_to_string(p)?)?,
        None => {
            let (lo, hi) = (d_range.0.unwrap_or(i64::MIN), d_range.1.unwrap_or(i64::MAX));
            let ds = reference_rows
                .iter()
                .map(|r| {
                    table::d_of_discriminant(r.discriminant)
                        .ok_or_else(|| CliError::Usage(format!("{} is not a fundamental discriminant", r.discriminant)))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let ds: Vec<i64> = ds.into_iter().filter(|d| (lo..=hi).contains(d)).collect();
            compute_rows(&ds, config)
        }
    };
    let cmp = table::compare(&computed_rows, &reference_rows);
    for line in &cmp.lines {
        writeln!(out, "{line}")?;
    }
    writeln!(out, "{}/{} match", cmp.matched, cmp.total)?;
    Ok(if cmp.all_match() { 0 } else { 1 })
}
