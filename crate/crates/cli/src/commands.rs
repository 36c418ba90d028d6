//! The `estimate`, `theory` and `simulate` subcommands.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use maxdep::estimators::MIN_BOOTSTRAP_REPLICATES;
use maxdep::simulate::{synthetic_labels, MIN_SIM_ALPHA};
use maxdep::{
    bootstrap_variogram, empirical_madogram, empirical_variogram, enumerate_subsets,
    extremal_coefficient_from_madogram, logistic_extremal_coefficients, logistic_pairwise_madogram,
    logistic_variogram, rank_transform, sample_rows, BlockMaximaTable, ConfidenceInterval,
    DependenceReport, EstimationOptions, LogisticModel, SimulationSpec, SubsetIndex, TiePolicy,
    MAX_SUBSET_DIM,
};

use crate::csv_io::{parse_csv_str, read_text, write_rows_csv};
use crate::error::{CliError, Result};

/// Dependence among block maxima: variogram estimates, closed forms and simulation.
#[derive(Debug, Parser)]
#[command(name = "maxdep", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate variograms, madograms and extremal coefficients from a CSV of block maxima.
    Estimate(EstimateArgs),
    /// Closed-form quantities of the symmetric logistic model.
    Theory(TheoryArgs),
    /// Sample the symmetric logistic model (unit Fréchet margins) to CSV.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TieArg {
    Midrank,
    #[value(alias = "first-occurrence")]
    Ecdf,
}

impl From<TieArg> for EstimationOptions {
    fn from(t: TieArg) -> Self {
        let tie_policy = match t {
            TieArg::Midrank => TiePolicy::Midrank,
            TieArg::Ecdf => TiePolicy::FirstOccurrence,
        };
        EstimationOptions { tie_policy }
    }
}

/// Which subsets of locations to report on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubsetSelection {
    Pairs,
    Full,
    /// Every subset of size >= 2.
    All,
    /// Label groups such as `A+B,A+B+C`.
    Explicit(Vec<Vec<String>>),
}

impl FromStr for SubsetSelection {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "pairs" => Ok(Self::Pairs),
            "full" => Ok(Self::Full),
            "all" => Ok(Self::All),
            _ => {
                let groups = s
                    .split(',')
                    .map(|group| {
                        let labels: Vec<String> =
                            group.split('+').map(|l| l.trim().to_owned()).collect();
                        if labels.iter().any(String::is_empty) {
                            return Err(format!("empty label in subset `{group}`"));
                        }
                        let mut uniq = labels.clone();
                        uniq.sort();
                        uniq.dedup();
                        if uniq.len() < 2 {
                            return Err(format!(
                                "subset `{group}` needs at least two distinct locations"
                            ));
                        }
                        Ok(labels)
                    })
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                Ok(Self::Explicit(groups))
            }
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct EstimateArgs {
    /// CSV file: header of location labels, one row of maxima per block.
    #[arg(long)]
    pub input: PathBuf,
    /// Comma-separated labels of the locations to keep, in order.
    #[arg(long, value_delimiter = ',')]
    pub locations: Option<Vec<String>>,
    /// pairs, full, all, or explicit groups like A+B,A+B+C.
    #[arg(long, default_value = "all")]
    pub subsets: SubsetSelection,
    /// Number of bootstrap resamples (at least 100); off by default.
    #[arg(long)]
    pub bootstrap: Option<usize>,
    /// Confidence level of bootstrap intervals.
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = TieArg::Midrank)]
    pub ties: TieArg,
    /// Skip rows with empty cells instead of failing.
    #[arg(long)]
    pub drop_incomplete: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Write here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct TheoryArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Bootstrap request attached to an estimation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapConfig {
    pub replicates: usize,
    pub level: f64,
    pub seed: u64,
}

/// Reports of an `estimate` run plus the number of incomplete rows skipped.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateOutcome {
    pub reports: Vec<DependenceReport>,
    pub dropped_rows: usize,
}

fn resolve_subsets(
    table: &BlockMaximaTable,
    selection: &SubsetSelection,
) -> Result<Vec<SubsetIndex>> {
    let k = table.k();
    let mut subsets = match selection {
        SubsetSelection::Pairs => {
            let mut out = Vec::with_capacity(k * (k - 1) / 2);
            for a in 0..k {
                for b in a + 1..k {
                    out.push(SubsetIndex::pair(a, b, k)?);
                }
            }
            out
        }
        SubsetSelection::Full => vec![SubsetIndex::full(k)?],
        SubsetSelection::All => enumerate_subsets(k, 2)?,
        SubsetSelection::Explicit(groups) => groups
            .iter()
            .map(|group| {
                let cols = group
                    .iter()
                    .map(|l| {
                        table
                            .position(l)
                            .ok_or_else(|| CliError::UnknownLocation(l.clone()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(SubsetIndex::new(cols, k)?)
            })
            .collect::<Result<Vec<_>>>()?,
    };
    subsets.sort_by(|a, b| (a.len(), a.members()).cmp(&(b.len(), b.members())));
    subsets.dedup();
    Ok(subsets)
}

/// One report per selected subset, in (size, lexicographic) order.
pub fn estimate_reports(
    table: &BlockMaximaTable,
    selection: &SubsetSelection,
    opts: EstimationOptions,
    bootstrap: Option<BootstrapConfig>,
) -> Result<Vec<DependenceReport>> {
    let pseudo = rank_transform(table, opts);
    resolve_subsets(table, selection)?
        .into_iter()
        .map(|subset| {
            let v_hat = empirical_variogram(&pseudo, &subset)?;
            let (madogram, extremal_coefficient) = if subset.len() == 2 {
                let nu = empirical_madogram(&pseudo, &subset)?;
                (Some(nu), Some(extremal_coefficient_from_madogram(nu)?))
            } else {
                (None, None)
            };
            let ci = bootstrap
                .map(|b| {
                    let (lower, upper) =
                        bootstrap_variogram(table, &subset, b.replicates, b.level, b.seed, opts)?;
                    ConfidenceInterval::new(lower, upper, b.level, b.replicates)
                })
                .transpose()?;
            let labels = subset
                .members()
                .iter()
                .map(|&c| table.locations()[c].clone())
                .collect();
            Ok(DependenceReport {
                subset,
                labels,
                v_hat,
                madogram,
                extremal_coefficient,
                ci,
            })
        })
        .collect()
}

fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "--level must lie in (0, 1), got {level}"
        )))
    }
}

pub fn cmd_estimate(args: &EstimateArgs) -> Result<EstimateOutcome> {
    let bootstrap = match args.bootstrap {
        Some(replicates) => {
            if replicates < MIN_BOOTSTRAP_REPLICATES {
                return Err(CliError::Usage(format!(
                    "--bootstrap needs at least {MIN_BOOTSTRAP_REPLICATES} replicates, got {replicates}"
                )));
            }
            check_level(args.level)?;
            Some(BootstrapConfig {
                replicates,
                level: args.level,
                seed: args.seed,
            })
        }
        None => None,
    };

    let mut raw = parse_csv_str(&read_text(&args.input)?)?;
    if let Some(locations) = &args.locations {
        raw = raw.select(locations)?;
    }
    let loaded = raw.into_table(args.drop_incomplete)?;
    let reports = estimate_reports(&loaded.table, &args.subsets, args.ties.into(), bootstrap)?;
    Ok(EstimateOutcome {
        reports,
        dropped_rows: loaded.dropped_rows,
    })
}

fn fmt4(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.4}")).unwrap_or_default()
}

fn csv_string(write: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    write(&mut w).expect("writing to memory");
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("UTF-8 labels")
}

fn json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable");
    s.push('\n');
    s
}

pub fn render_reports(reports: &[DependenceReport], format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => json_string(&reports),
        OutputFormat::Csv => csv_string(|w| {
            w.write_record([
                "subset",
                "labels",
                "v_hat",
                "madogram",
                "extremal_coefficient",
                "ci_lower",
                "ci_upper",
                "ci_level",
                "ci_replicates",
            ])?;
            for r in reports {
                let subset = r
                    .subset
                    .one_based()
                    .iter()
                    .map(usize::to_string)
                    .collect::<Vec<_>>();
                let labels = r.labels.iter().map(|l| l.as_str()).collect::<Vec<_>>();
                w.write_record([
                    subset.join("+"),
                    labels.join("+"),
                    fmt4(Some(r.v_hat)),
                    fmt4(r.madogram),
                    fmt4(r.extremal_coefficient),
                    fmt4(r.ci.map(|c| c.lower)),
                    fmt4(r.ci.map(|c| c.upper)),
                    r.ci.map(|c| c.level.to_string()).unwrap_or_default(),
                    r.ci.map(|c| c.replicates.to_string()).unwrap_or_default(),
                ])?;
            }
            Ok(())
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientEntry {
    pub subset: Vec<usize>,
    pub extremal_coefficient: f64,
}

/// Closed-form summary of a logistic model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoryReport {
    pub alpha: f64,
    pub k: usize,
    pub variogram: f64,
    pub pairwise_madogram: f64,
    pub pairwise_extremal_coefficient: f64,
    pub extremal_coefficients: Vec<CoefficientEntry>,
}

pub fn cmd_theory(args: &TheoryArgs) -> Result<TheoryReport> {
    if !(2..=MAX_SUBSET_DIM).contains(&args.k) {
        return Err(CliError::Usage(format!(
            "--k must lie in 2..={MAX_SUBSET_DIM}, got {}",
            args.k
        )));
    }
    let model =
        LogisticModel::new(args.alpha, args.k).map_err(|e| CliError::Usage(e.to_string()))?;
    let eps = logistic_extremal_coefficients(&model)?;
    let pair = SubsetIndex::pair(0, 1, args.k)?;
    Ok(TheoryReport {
        alpha: args.alpha,
        k: args.k,
        variogram: logistic_variogram(&model)?,
        pairwise_madogram: logistic_pairwise_madogram(&model)?,
        pairwise_extremal_coefficient: eps.get(&pair),
        extremal_coefficients: eps
            .iter()
            .map(|(s, e)| CoefficientEntry {
                subset: s.one_based(),
                extremal_coefficient: e,
            })
            .collect(),
    })
}

pub fn render_theory(report: &TheoryReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => json_string(report),
        OutputFormat::Csv => csv_string(|w| {
            w.write_record(["quantity", "subset", "value"])?;
            let f = |x: f64| format!("{x:.4}");
            w.write_record(["variogram", "", &f(report.variogram)])?;
            w.write_record(["pairwise_madogram", "", &f(report.pairwise_madogram)])?;
            w.write_record([
                "pairwise_extremal_coefficient",
                "",
                &f(report.pairwise_extremal_coefficient),
            ])?;
            for e in &report.extremal_coefficients {
                let subset = e
                    .subset
                    .iter()
                    .map(usize::to_string)
                    .collect::<Vec<_>>()
                    .join("+");
                w.write_record(["extremal_coefficient", &subset, &f(e.extremal_coefficient)])?;
            }
            Ok(())
        }),
    }
}

/// Samples the model and renders it as CSV with header `L1..Lk`.
pub fn cmd_simulate(args: &SimulateArgs) -> Result<String> {
    if args.n < 1 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    if !(MIN_SIM_ALPHA..=1.0).contains(&args.alpha) {
        return Err(CliError::Usage(format!(
            "--alpha must lie in [{MIN_SIM_ALPHA}, 1] for simulation, got {}",
            args.alpha
        )));
    }
    let model =
        LogisticModel::new(args.alpha, args.k).map_err(|e| CliError::Usage(e.to_string()))?;
    let spec = SimulationSpec::new(model, args.n, args.seed)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(write_rows_csv(
        &synthetic_labels(args.k),
        &sample_rows(&spec),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(labels: &[&str], cols: &[&[f64]]) -> BlockMaximaTable {
        let n = cols[0].len();
        let rows = (0..n)
            .map(|i| cols.iter().map(|c| c[i]).collect())
            .collect();
        BlockMaximaTable::new(labels.to_vec(), rows).unwrap()
    }

    #[test]
    fn subset_selection_parsing() {
        assert_eq!(
            "pairs".parse::<SubsetSelection>().unwrap(),
            SubsetSelection::Pairs
        );
        assert_eq!(
            "A+B,B+C+A".parse::<SubsetSelection>().unwrap(),
            SubsetSelection::Explicit(vec![
                vec!["A".into(), "B".into()],
                vec!["B".into(), "C".into(), "A".into()]
            ])
        );
        assert!("A".parse::<SubsetSelection>().is_err());
        assert!("A+A".parse::<SubsetSelection>().is_err());
        assert!("A+,B+C".parse::<SubsetSelection>().is_err());
    }

    #[test]
    fn selections_resolve_in_canonical_order() {
        let c = [1.0, 2.0, 3.0];
        let t = table(&["A", "B", "C"], &[&c, &c, &c]);
        let one_based = |sel: SubsetSelection| {
            resolve_subsets(&t, &sel)
                .unwrap()
                .iter()
                .map(SubsetIndex::one_based)
                .collect::<Vec<_>>()
        };
        assert_eq!(
            one_based(SubsetSelection::Pairs),
            vec![vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(one_based(SubsetSelection::Full), vec![vec![1, 2, 3]]);
        assert_eq!(one_based(SubsetSelection::All).len(), 4);
        let explicit = "C+B+A,C+A,A+C".parse().unwrap();
        assert_eq!(one_based(explicit), vec![vec![1, 3], vec![1, 2, 3]]);
        let unknown = "A+Z".parse().unwrap();
        assert!(matches!(
            resolve_subsets(&t, &unknown),
            Err(CliError::UnknownLocation(_))
        ));
    }

    #[test]
    fn identical_columns_report_total_dependence() {
        let c = [3.0, 1.0, 4.0, 1.5, 9.0];
        let t = table(&["A", "B"], &[&c, &c]);
        let r = estimate_reports(
            &t,
            &SubsetSelection::Pairs,
            EstimationOptions::default(),
            None,
        )
        .unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].v_hat, 1.0);
        assert_eq!(r[0].madogram, Some(0.0));
        assert_eq!(r[0].extremal_coefficient, Some(1.0));
        assert_eq!(r[0].ci, None);
    }

    #[test]
    fn triples_carry_no_pair_fields() {
        let t = table(
            &["MS", "S", "M"],
            &[
                &[1.0, 3.0, 2.0, 5.0],
                &[2.0, 1.0, 3.0, 4.0],
                &[4.0, 3.0, 1.0, 2.0],
            ],
        );
        let boot = BootstrapConfig {
            replicates: 100,
            level: 0.9,
            seed: 3,
        };
        let r = estimate_reports(
            &t,
            &SubsetSelection::All,
            EstimationOptions::default(),
            Some(boot),
        )
        .unwrap();
        assert_eq!(r.len(), 4);
        assert!(r[3].madogram.is_none() && r[3].extremal_coefficient.is_none());
        let ci = r[3].ci.unwrap();
        assert!(ci.lower <= ci.upper);
        assert_eq!(ci.replicates, 100);

        let json = render_reports(&r, OutputFormat::Json);
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed[3]["subset"], serde_json::json!([1, 2, 3]));
        assert_eq!(parsed[3]["labels"], serde_json::json!(["MS", "S", "M"]));
        assert!(parsed[3].get("madogram").is_none());
        assert!(parsed[0].get("madogram").is_some());

        let csv = render_reports(&r, OutputFormat::Csv);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[4].starts_with("1+2+3,MS+S+M,"), "{}", lines[4]);
    }

    #[test]
    fn theory_values() {
        let args = |alpha: f64, k: usize| TheoryArgs {
            alpha,
            k,
            format: OutputFormat::Json,
            output: None,
        };
        let r = cmd_theory(&args(1.0, 3)).unwrap();
        assert!(r.variogram.abs() < 1e-15);
        let eps: Vec<f64> = r
            .extremal_coefficients
            .iter()
            .map(|e| e.extremal_coefficient)
            .collect();
        assert_eq!(eps, vec![1.0, 1.0, 1.0, 2.0, 2.0, 2.0, 3.0]);

        let r = cmd_theory(&args(0.5, 2)).unwrap();
        assert!((r.variogram - 0.4853).abs() < 1e-4);
        assert!((r.pairwise_madogram - 0.0858).abs() < 1e-4);
        assert!((r.pairwise_extremal_coefficient - std::f64::consts::SQRT_2).abs() < 1e-4);
        let csv = render_theory(&r, OutputFormat::Csv);
        assert!(csv.contains("variogram,,0.4853"), "{csv}");

        for (alpha, k) in [(0.0, 2), (1.5, 2), (0.5, 1), (0.5, 21)] {
            assert!(matches!(
                cmd_theory(&args(alpha, k)),
                Err(CliError::Usage(_))
            ));
        }
    }

    #[test]
    fn simulate_checks_parameters() {
        let args = |alpha: f64, k: usize, n: usize| SimulateArgs {
            alpha,
            k,
            n,
            seed: 7,
            output: None,
        };
        for (alpha, k, n) in [(0.5, 2, 0), (0.0, 2, 5), (1e-4, 2, 5), (0.5, 1, 5)] {
            assert!(matches!(
                cmd_simulate(&args(alpha, k, n)),
                Err(CliError::Usage(_))
            ));
        }
        let a = cmd_simulate(&args(0.5, 2, 10)).unwrap();
        assert_eq!(a, cmd_simulate(&args(0.5, 2, 10)).unwrap());
        assert!(a.starts_with("L1,L2\n"));
        assert_eq!(a.lines().count(), 11);
        assert_eq!(cmd_simulate(&args(0.5, 3, 1)).unwrap().lines().count(), 2);
    }
}
