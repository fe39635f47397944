//! The `photosocial` command-line tool.
//!
//! Exit codes: 0 success, 1 usage error, 2 data, validation or I/O error,
//! 3 numeric failure (singular design, non-convergence, degenerate variance).

pub mod format;
pub mod svg;

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use photosocial::groupgraph::{self, GroupGraphError, IndicatorOptions, DEFAULT_MAX_MEMBERS, DEFAULT_MIN_MEMBERS};
use photosocial::harvest::{self, Checkpoint, DatasetSource, HarvestError, DEFAULT_PAGE_SIZE};
use photosocial::ingest::{self, IngestError, ValidationReport};
use photosocial::metrics::{self, Functionality, MetricsError, RelationKind, UserClass};
use photosocial::synth::{self, SynthConfig, SynthError};
use photosocial::typology::{self, TypologyError, REPUTATION_REGRESSORS, REPUTATION_RESPONSE};
use photosocial::{BuildMode, Dataset, Table as DataTable, UserId};
use thiserror::Error;

use crate::format::{fmt_opt, fmt_real, Table};
use crate::svg::{Polyline, ScatterPoint, SvgScatter};

/// Largest number of points per Lorenz series written to curve CSV or SVG.
pub const MAX_CURVE_POINTS: usize = 1000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<MetricsError> for CliError {
    fn from(e: MetricsError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<TypologyError> for CliError {
    fn from(e: TypologyError) -> Self {
        match e {
            TypologyError::SingularDesign
            | TypologyError::ConvergenceFailure(_)
            | TypologyError::ZeroVarianceColumn(_)
            | TypologyError::DegenerateResponse(_) => CliError::Numeric(e.to_string()),
            TypologyError::UnknownColumn(_) | TypologyError::InvalidComponents { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<GroupGraphError> for CliError {
    fn from(e: GroupGraphError) -> Self {
        match e {
            GroupGraphError::InvalidLogBase | GroupGraphError::InvalidRange { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<SynthError> for CliError {
    fn from(e: SynthError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn report_lines(r: &ValidationReport) -> String {
    let mut s = String::new();
    for issue in &r.errors {
        s.push_str(&format!("error: {issue}\n"));
    }
    for issue in &r.warnings {
        s.push_str(&format!("warning: {issue}\n"));
    }
    s.trim_end().to_string()
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        match e {
            IngestError::Invalid(report) => CliError::Data(format!(
                "{}\n{} error(s); dataset rejected",
                report_lines(&report),
                report.errors.len()
            )),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<HarvestError> for CliError {
    fn from(e: HarvestError) -> Self {
        match e {
            HarvestError::Storage(inner) => inner.into(),
            other => CliError::Data(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "photosocial", version, about = "Quantitative analysis of photo-sharing social datasets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct DataArgs {
    /// Dataset directory in the TSV interchange format.
    #[arg(long, value_name = "DIR")]
    data: PathBuf,
    /// Drop invalid rows with a warning instead of failing.
    #[arg(long)]
    lenient: bool,
}

#[derive(Debug, Args)]
struct CsvOut {
    /// Write the CSV table to PATH instead of standard output.
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SampleArgs {
    /// Restrict to the K most intensive users (0 = all users).
    #[arg(long, value_name = "K")]
    top: Option<usize>,
    /// Transform counts by ln(1 + x).
    #[arg(long)]
    log1p: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a dataset directory, optionally re-saving it canonically.
    #[command(after_help = "CSV columns: table,rows")]
    Ingest {
        #[command(flatten)]
        data: DataArgs,
        /// Save the validated dataset to DIR in canonical order.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
        #[command(flatten)]
        csv: CsvOut,
    },
    /// Per-functionality totals, means over active users and percent inactive, by account class.
    #[command(
        after_help = "CSV columns: functionality,total,mean_all,mean_nonpro,mean_pro,pct_zero_all,pct_zero_nonpro,pct_zero_pro"
    )]
    Stats {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        csv: CsvOut,
    },
    /// Fractions of inactive, communication-only, photos-only and mixed users.
    #[command(after_help = "CSV columns: segment,fraction (rows inactive, communication_only, photos_only, photos_and_communication)")]
    Segments {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        csv: CsvOut,
    },
    /// Lorenz curves and Gini coefficients.
    #[command(after_help = "CSV columns: series,n,total,gini\nCurve CSV columns: series,population_share,value_share")]
    Lorenz {
        #[command(flatten)]
        data: DataArgs,
        /// A functionality (photos, contacts_out, contacts_in, comments_given, comments_received,
        /// favorites_given, favorites_received, groups), group_members or group_pool.
        #[arg(long, default_value = "photos")]
        subject: String,
        /// Write curve points (at most 1000 per series) to PATH.
        #[arg(long, value_name = "PATH")]
        curve_csv: Option<PathBuf>,
        /// Plot the curves to an SVG file.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        #[command(flatten)]
        csv: CsvOut,
    },
    /// Photo id coverage and the implied bound on the share of private photos.
    #[command(after_help = "CSV columns: distinct_ids,min_id,max_id,coverage,private_upper_bound")]
    Coverage {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        csv: CsvOut,
    },
    /// The K most intensive users by summed activity ranks.
    #[command(after_help = "CSV columns: rank,user,rank_sum,intensity")]
    Topsample {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value_t = 1000)]
        k: usize,
        #[command(flatten)]
        csv: CsvOut,
    },
    /// Reciprocation rates of user-to-user relations.
    #[command(after_help = "CSV columns: relation,pairs,reciprocated,rate")]
    Reciprocity {
        #[command(flatten)]
        data: DataArgs,
        /// contacts, commented, favorited or all.
        #[arg(long, default_value = "all")]
        relation: String,
        #[command(flatten)]
        csv: CsvOut,
    },
    /// Pearson correlations between the eight activity counts.
    #[command(after_help = "CSV columns: variable followed by one column per variable")]
    Corr {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        sample: SampleArgs,
        #[command(flatten)]
        csv: CsvOut,
    },
    /// Principal components of the activity counts (top sample by default).
    #[command(
        after_help = "CSV columns: variable,pc1..pcK; loading rows, then eigenvalue and variance_explained rows\nScores CSV columns: user,pc1..pcK"
    )]
    Pca {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value_t = 3)]
        components: usize,
        #[command(flatten)]
        sample: SampleArgs,
        /// Write per-user component scores to PATH.
        #[arg(long, value_name = "PATH")]
        scores: Option<PathBuf>,
        /// Plot the projection on the first two components.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        #[command(flatten)]
        csv: CsvOut,
    },
    /// Least-squares regression of one activity count on others (top sample by default).
    #[command(after_help = "CSV columns: term,estimate; rows intercept, each regressor, r_squared, n")]
    Regress {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value = REPUTATION_RESPONSE)]
        response: String,
        /// Comma-separated regressor columns.
        #[arg(long, value_delimiter = ',', default_values_t = REPUTATION_REGRESSORS.map(String::from))]
        regressors: Vec<String>,
        #[command(flatten)]
        sample: SampleArgs,
        #[command(flatten)]
        csv: CsvOut,
    },
    /// Social density and tag dispersion of every group in a member-count range.
    #[command(
        after_help = "CSV columns: group,name,members,vertices,social_edges,thematic_edges,social_density,tag_dispersion\nUndefined indicators are empty cells; rows are sorted by tag dispersion."
    )]
    Groups {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value_t = DEFAULT_MIN_MEMBERS)]
        min_members: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_MEMBERS)]
        max_members: usize,
        /// Count non-adjacent member pairs as zero weights in the dispersion.
        #[arg(long)]
        include_nonedges: bool,
        /// Logarithm base of rarity and tag weight.
        #[arg(long, default_value_t = 2.0)]
        log_base: f64,
        /// Plot the groups on social density (soc) and tag dispersion (thm) axes.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        #[command(flatten)]
        csv: CsvOut,
    },
    /// Generate a seeded synthetic dataset.
    #[command(after_help = "CSV columns: table,rows")]
    Synth {
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        users: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        pro_fraction: Option<f64>,
        /// Number of groups (default: users / 50).
        #[arg(long)]
        groups: Option<usize>,
        #[arg(long)]
        tag_vocabulary: Option<usize>,
        /// Probability that a photo id is skipped (a private photo).
        #[arg(long)]
        skip_prob: Option<f64>,
        #[arg(long)]
        first_photo_id: Option<u64>,
        #[arg(long)]
        mutual_prob: Option<f64>,
        #[command(flatten)]
        csv: CsvOut,
    },
    /// Crawl a dataset directory through the paged-source interface, with checkpoints.
    #[command(after_help = "CSV columns: table,rows")]
    Harvest {
        /// Dataset directory served as the paged source.
        #[arg(long, value_name = "DIR")]
        source: PathBuf,
        /// Work directory for partial results and the checkpoint.
        #[arg(long, value_name = "DIR")]
        work: PathBuf,
        /// Where to save the harvested dataset.
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_PAGE_SIZE)]
        page_size: usize,
        /// Continue from the checkpoint in the work directory.
        #[arg(long)]
        resume: bool,
        #[command(flatten)]
        csv: CsvOut,
    },
}

/// Runs the tool on `argv` (without the program name) using the process's
/// standard streams.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString>,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString>,
{
    let args = std::iter::once(OsString::from("photosocial")).chain(argv.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "photosocial: {e}");
            e.exit_code()
        }
    }
}

fn load(args: &DataArgs, err: &mut dyn Write) -> Result<Dataset, CliError> {
    let mode = if args.lenient { BuildMode::Lenient } else { BuildMode::Strict };
    if !args.data.is_dir() {
        return Err(CliError::Data(format!("{}: not a directory", args.data.display())));
    }
    let (d, report) = ingest::load(&args.data, mode)?;
    if !(report.errors.is_empty() && report.warnings.is_empty()) {
        writeln!(err, "{}", report_lines(&report))?;
    }
    Ok(d)
}

fn emit(table: &Table, dest: &CsvOut, out: &mut dyn Write) -> Result<(), CliError> {
    match &dest.csv {
        Some(path) => write_table(table, path),
        None => Ok(table.write_to(out)?),
    }
}

fn write_table(table: &Table, path: &Path) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    table.write_to(&mut w)?;
    w.flush()?;
    Ok(())
}

fn write_svg(chart: &SvgScatter, path: &Path) -> Result<(), CliError> {
    chart.write(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn counts_table(d: &Dataset) -> Table {
    let mut t = Table::new(["table", "rows"]);
    for table in DataTable::ALL {
        t.push([table.file_name().trim_end_matches(".tsv").to_string(), d.records().len(table).to_string()]);
    }
    t
}

fn sample_users(d: &Dataset, top: usize) -> Option<Vec<UserId>> {
    (top > 0).then(|| metrics::top_sample::<f64>(d, top).into_iter().map(|r| r.user).collect())
}

fn activity_matrix(
    d: &Dataset,
    sample: &SampleArgs,
    default_top: usize,
) -> Result<(typology::VariableMatrix<f64>, Vec<UserId>), CliError> {
    let users = sample_users(d, sample.top.unwrap_or(default_top))
        .unwrap_or_else(|| d.users().iter().map(|u| u.id).collect());
    let m = typology::VariableMatrix::from_activity(d, Some(&users), sample.log1p)?;
    Ok((m, users))
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Ingest { data, out: dest, csv } => {
            let d = load(&data, err)?;
            if let Some(dir) = dest {
                fs::create_dir_all(&dir).map_err(|e| CliError::Data(format!("{}: {e}", dir.display())))?;
                ingest::save(&d, &dir)?;
            }
            emit(&counts_table(&d), &csv, out)
        }
        Command::Stats { data, csv } => {
            let d = load(&data, err)?;
            let stats = metrics::functionality_stats::<f64>(&d);
            let mut t = Table::new([
                "functionality",
                "total",
                "mean_all",
                "mean_nonpro",
                "mean_pro",
                "pct_zero_all",
                "pct_zero_nonpro",
                "pct_zero_pro",
            ]);
            for r in &stats.rows {
                t.push([
                    r.functionality.name().to_string(),
                    r.total.to_string(),
                    fmt_opt(r.mean_active.all),
                    fmt_opt(r.mean_active.non_pro),
                    fmt_opt(r.mean_active.pro),
                    fmt_opt(r.pct_zero.all),
                    fmt_opt(r.pct_zero.non_pro),
                    fmt_opt(r.pct_zero.pro),
                ]);
            }
            emit(&t, &csv, out)
        }
        Command::Segments { data, csv } => {
            let d = load(&data, err)?;
            let s = metrics::segment_users::<f64>(&d)?;
            let mut t = Table::new(["segment", "fraction"]);
            for (name, v) in [
                ("inactive", s.inactive),
                ("communication_only", s.communication_only),
                ("photos_only", s.photos_only),
                ("photos_and_communication", s.photos_and_communication),
            ] {
                t.push([name.to_string(), fmt_real(v)]);
            }
            emit(&t, &csv, out)
        }
        Command::Lorenz { data, subject, curve_csv, svg, csv } => {
            let functionality = match subject.as_str() {
                "group_members" | "group_pool" => None,
                name => Some(name.parse::<Functionality>().map_err(CliError::Usage)?),
            };
            let d = load(&data, err)?;
            let series: Vec<(&str, metrics::Distribution<f64>)> = match functionality {
                Some(f) => [("all", UserClass::All), ("non_pro", UserClass::NonPro), ("pro", UserClass::Pro)]
                    .into_iter()
                    .map(|(label, class)| (label, metrics::functionality_distribution(&d, f, class)))
                    .collect(),
                None if subject == "group_members" => vec![("groups", metrics::group_member_distribution(&d))],
                None => vec![("groups", metrics::group_pool_distribution(&d))],
            };
            let mut summary = Table::new(["series", "n", "total", "gini"]);
            let mut curves = Table::new(["series", "population_share", "value_share"]);
            let mut lines = Vec::new();
            for (label, dist) in &series {
                let total: f64 = dist.values().iter().sum();
                let gini = if dist.is_empty() { None } else { Some(metrics::gini(dist)?) };
                summary.push([label.to_string(), dist.len().to_string(), fmt_real(total), fmt_opt(gini)]);
                if dist.is_empty() {
                    continue;
                }
                let points = svg::thin(&metrics::lorenz(dist)?.points, MAX_CURVE_POINTS);
                for &(x, y) in &points {
                    curves.push([label.to_string(), fmt_real(x), fmt_real(y)]);
                }
                lines.push(Polyline { name: label.to_string(), points, dashed: false });
            }
            if let Some(path) = curve_csv {
                write_table(&curves, &path)?;
            }
            if let Some(path) = svg {
                lines.push(Polyline { name: "equality".into(), points: vec![(0.0, 0.0), (1.0, 1.0)], dashed: true });
                let chart = SvgScatter {
                    title: format!("Lorenz curves: {subject}"),
                    x_label: "cumulative share of population".into(),
                    y_label: "cumulative share of total".into(),
                    lines,
                    x_range: Some((0.0, 1.0)),
                    y_range: Some((0.0, 1.0)),
                    ..Default::default()
                };
                write_svg(&chart, &path)?;
            }
            emit(&summary, &csv, out)
        }
        Command::Coverage { data, csv } => {
            let d = load(&data, err)?;
            let ids: Vec<_> = d.photos().iter().map(|p| p.id).collect();
            let c = metrics::id_coverage_bound::<f64>(&ids)?;
            let mut t = Table::new(["distinct_ids", "min_id", "max_id", "coverage", "private_upper_bound"]);
            t.push([
                c.distinct_ids.to_string(),
                c.min_id.to_string(),
                c.max_id.to_string(),
                fmt_real(c.coverage),
                fmt_real(c.private_upper_bound),
            ]);
            emit(&t, &csv, out)
        }
        Command::Topsample { data, k, csv } => {
            let d = load(&data, err)?;
            let mut t = Table::new(["rank", "user", "rank_sum", "intensity"]);
            for (i, r) in metrics::top_sample::<f64>(&d, k).iter().enumerate() {
                t.push([(i + 1).to_string(), r.user.to_string(), r.rank_sum.to_string(), fmt_real(r.intensity)]);
            }
            emit(&t, &csv, out)
        }
        Command::Reciprocity { data, relation, csv } => {
            let kinds: Vec<RelationKind> = if relation == "all" {
                RelationKind::ALL.to_vec()
            } else {
                vec![relation.parse().map_err(|e: MetricsError| CliError::Usage(e.to_string()))?]
            };
            let d = load(&data, err)?;
            let mut t = Table::new(["relation", "pairs", "reciprocated", "rate"]);
            for kind in kinds {
                let r = metrics::derive_relation(&d, kind);
                let reciprocated = r.pairs.iter().filter(|&&(a, b)| r.pairs.contains(&(b, a))).count();
                let rate = match metrics::reciprocity_rate::<f64>(&r) {
                    Ok(v) => Some(v),
                    Err(MetricsError::EmptyRelation) => None,
                    Err(e) => return Err(e.into()),
                };
                t.push([kind.name().to_string(), r.pairs.len().to_string(), reciprocated.to_string(), fmt_opt(rate)]);
            }
            emit(&t, &csv, out)
        }
        Command::Corr { data, sample, csv } => {
            let d = load(&data, err)?;
            let (m, _) = activity_matrix(&d, &sample, 0)?;
            let c = typology::correlation_matrix(&m)?;
            let mut t = Table::new(std::iter::once("variable".to_string()).chain(c.names.iter().cloned()));
            for (i, name) in c.names.iter().enumerate() {
                t.push(
                    std::iter::once(name.clone()).chain((0..c.names.len()).map(|j| fmt_real(c.values.get(i, j)))),
                );
            }
            emit(&t, &csv, out)
        }
        Command::Pca { data, components, sample, scores, svg, csv } => {
            if svg.is_some() && components < 2 {
                return Err(CliError::Usage("--svg needs at least 2 components".into()));
            }
            let d = load(&data, err)?;
            let (m, users) = activity_matrix(&d, &sample, 1000)?;
            let r = typology::pca(&m, components)?;
            let pcs: Vec<String> = (1..=components).map(|c| format!("pc{c}")).collect();
            let mut t = Table::new(std::iter::once("variable".to_string()).chain(pcs.iter().cloned()));
            for (name, row) in r.names.iter().zip(&r.loadings) {
                t.push(std::iter::once(name.clone()).chain(row.iter().map(|&v| fmt_real(v))));
            }
            t.push(std::iter::once("eigenvalue".to_string()).chain(r.eigenvalues[..components].iter().map(|&v| fmt_real(v))));
            t.push(std::iter::once("variance_explained".to_string()).chain(r.variance_explained.iter().map(|&v| fmt_real(v))));
            if scores.is_some() || svg.is_some() {
                let projected = typology::pca_project(&r, &m)?;
                if let Some(path) = scores {
                    let mut s = Table::new(std::iter::once("user".to_string()).chain(pcs.iter().cloned()));
                    for (u, row) in users.iter().zip(&projected) {
                        s.push(std::iter::once(u.to_string()).chain(row.iter().map(|&v| fmt_real(v))));
                    }
                    write_table(&s, &path)?;
                }
                if let Some(path) = svg {
                    let chart = SvgScatter {
                        title: format!("Projection on the first two components ({} users)", users.len()),
                        x_label: format!("pc1 ({:.1}%)", 100.0 * r.variance_explained[0]),
                        y_label: format!("pc2 ({:.1}%)", 100.0 * r.variance_explained[1]),
                        points: users
                            .iter()
                            .zip(&projected)
                            .map(|(u, row)| ScatterPoint { x: row[0], y: row[1], label: Some(format!("user {u}")) })
                            .collect(),
                        ..Default::default()
                    };
                    write_svg(&chart, &path)?;
                }
            }
            emit(&t, &csv, out)
        }
        Command::Regress { data, response, regressors, sample, csv } => {
            let d = load(&data, err)?;
            let (m, _) = activity_matrix(&d, &sample, 1000)?;
            let names: Vec<&str> = regressors.iter().map(String::as_str).collect();
            let r = typology::ols(&m, &response, &names)?;
            let mut t = Table::new(["term", "estimate"]);
            t.push(["intercept".to_string(), fmt_real(r.intercept)]);
            for (name, &b) in r.regressors.iter().zip(&r.coefficients) {
                t.push([name.clone(), fmt_real(b)]);
            }
            t.push(["r_squared".to_string(), fmt_real(r.r_squared)]);
            t.push(["n".to_string(), r.n.to_string()]);
            emit(&t, &csv, out)
        }
        Command::Groups { data, min_members, max_members, include_nonedges, log_base, svg, csv } => {
            if min_members > max_members {
                return Err(GroupGraphError::InvalidRange { min: min_members, max: max_members }.into());
            }
            let d = load(&data, err)?;
            let stats = groupgraph::TagCorpusStats::<f64>::new(&d)?.with_log_base(log_base)?;
            let opts = IndicatorOptions { include_nonedges };
            let rows = groupgraph::map_groups(&d, &stats, min_members, max_members, opts)?;
            let mut t = Table::new([
                "group",
                "name",
                "members",
                "vertices",
                "social_edges",
                "thematic_edges",
                "social_density",
                "tag_dispersion",
            ]);
            let name_of = |g| d.group(g).map(|x| x.name.clone()).unwrap_or_default();
            for r in &rows {
                t.push([
                    r.group.to_string(),
                    name_of(r.group),
                    r.member_count.to_string(),
                    r.vertex_count.to_string(),
                    r.social_edges.to_string(),
                    r.thematic_edges.to_string(),
                    fmt_opt(r.social_density),
                    fmt_opt(r.tag_dispersion),
                ]);
            }
            if let Some(path) = svg {
                let points: Vec<ScatterPoint> = rows
                    .iter()
                    .filter_map(|r| {
                        Some(ScatterPoint { x: r.social_density?, y: r.tag_dispersion?, label: Some(name_of(r.group)) })
                    })
                    .collect();
                let chart = SvgScatter {
                    title: format!("Social and thematic indicators for {} groups", points.len()),
                    x_label: "soc".into(),
                    y_label: "thm".into(),
                    points,
                    ..Default::default()
                };
                write_svg(&chart, &path)?;
            }
            emit(&t, &csv, out)
        }
        Command::Synth {
            out: dir,
            users,
            seed,
            pro_fraction,
            groups,
            tag_vocabulary,
            skip_prob,
            first_photo_id,
            mutual_prob,
            csv,
        } => {
            let mut cfg = SynthConfig::with_users(users, seed);
            if let Some(v) = pro_fraction {
                cfg.pro_fraction = v;
            }
            if let Some(v) = groups {
                cfg.n_groups = v;
            }
            if let Some(v) = tag_vocabulary {
                cfg.tag_vocabulary = v;
            }
            if let Some(v) = skip_prob {
                cfg.id_skip_prob = v;
            }
            if let Some(v) = first_photo_id {
                cfg.first_photo_id = v;
            }
            if let Some(v) = mutual_prob {
                cfg.mutual_prob = v;
            }
            let d = synth::generate(&cfg)?;
            fs::create_dir_all(&dir).map_err(|e| CliError::Data(format!("{}: {e}", dir.display())))?;
            ingest::save(&d, &dir)?;
            emit(&counts_table(&d), &csv, out)
        }
        Command::Harvest { source, work, out: dest, page_size, resume, csv } => {
            if page_size == 0 {
                return Err(CliError::Usage("--page-size must be positive".into()));
            }
            let d = load(&DataArgs { data: source, lenient: false }, err)?;
            fs::create_dir_all(&work).map_err(|e| CliError::Data(format!("{}: {e}", work.display())))?;
            let from = if resume { Some(Checkpoint::load(&work)?) } else { None };
            let mut src = DatasetSource::new(&d, page_size);
            let outcome = harvest::harvest(&mut src, &work, from)?;
            for w in &outcome.warnings {
                writeln!(err, "warning: {w}")?;
            }
            fs::create_dir_all(&dest).map_err(|e| CliError::Data(format!("{}: {e}", dest.display())))?;
            ingest::save(&outcome.dataset, &dest)?;
            emit(&counts_table(&outcome.dataset), &csv, out)
        }
    }
}
