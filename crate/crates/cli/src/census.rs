use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Subcommand};
use torsionlab::bounds::BaseFieldData;
use torsionlab::counting::{self, FitKind};
use torsionlab::ingest::{self, Dataset, Format, GroupResolver, Strictness};

use crate::output::{parse_count, Outcome, Output};

#[derive(Args, Debug)]
pub struct DataArg {
    /// JSONL or CSV field list (by extension).
    #[arg(long)]
    data: PathBuf,
    /// Group key to select, `nTk` or generators.
    #[arg(long, default_value = "2T1")]
    group: String,
}

#[derive(Subcommand, Debug)]
pub enum CensusCmd {
    /// Fits the growth exponent of #{E : D_E <= X}.
    Growth {
        #[command(flatten)]
        data: DataArg,
        #[arg(long = "x-min", value_parser = parse_count, default_value = "1")]
        x_min: u64,
    },
    /// Distribution of a_D, written as `D,a_D` with --csv.
    Multiplicity {
        #[command(flatten)]
        data: DataArg,
    },
    /// rk_l of every l-group record against the torsion rank bound.
    Rankcheck {
        #[arg(long)]
        data: PathBuf,
        #[arg(long = "ell", alias = "l")]
        ell: u64,
        /// Base field degree; the dataset header is used when absent.
        #[arg(long)]
        d: Option<u64>,
        #[arg(long = "rkF")]
        rk_f: Option<u64>,
    },
    /// Writes the imaginary quadratic fields with |D| <= limit.
    Generate {
        #[arg(long, value_parser = parse_count)]
        limit: u64,
        /// Include class group invariants (slower).
        #[arg(long)]
        invariants: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load(path: &Path, out: &mut Output) -> Result<(Dataset, GroupResolver)> {
    let strictness = if out.global().strict {
        Strictness::Strict
    } else {
        Strictness::Lenient
    };
    let mut resolver = GroupResolver::from_env()?;
    let (ds, report) = ingest::parse(path, Format::from_path(path), strictness, &mut resolver)?;
    out.row("records", ds.len());
    if !report.rejected.is_empty() {
        eprintln!("warning: skipped {report}");
        out.row("rejected rows", report.rejected.len());
        for e in report.rejected.iter().take(10) {
            out.row("rejected", format!("line {}: {}", e.line, e.message));
        }
    }
    Ok((ds, resolver))
}

pub fn run(cmd: &CensusCmd, out: &mut Output) -> Result<Outcome> {
    match cmd {
        CensusCmd::Growth { data, x_min } => {
            let (ds, mut resolver) = load(&data.data, out)?;
            let a = resolver.resolve(&data.group)?.min_index()?;
            let series = ingest::to_census(&ds, &data.group);
            let fit = counting::epsilon_fit(&series, FitKind::Growth, *x_min, None)?;
            out.row("group", data.group.trim());
            out.row("fields", series.count_by_bound(u64::MAX));
            out.row("points", fit.points);
            out.row("slope", format!("{:.6}", fit.slope));
            out.row("1/a(G)", format!("{:.6}", 1.0 / a as f64));
            out.row("residual", format!("{:.3e}", fit.residual));
            let mut rows = Vec::new();
            let mut x = 1u64;
            while x <= fit.x_max {
                if x >= fit.x_min {
                    rows.push(vec![x.to_string(), series.count_by_bound(x).to_string()]);
                }
                x *= 2;
            }
            out.csv(&["X", "N"], rows);
            out.json(&serde_json::json!({ "group": data.group.trim(), "a": a, "fit": fit }))?;
            Ok(Outcome::Pass)
        }
        CensusCmd::Multiplicity { data } => {
            let (ds, _) = load(&data.data, out)?;
            let series = ingest::to_census(&ds, &data.group);
            let max = series.max_multiplicity(u64::MAX);
            let signed = ingest::max_signed_multiplicity(&ds, &data.group);
            let histogram = series.multiplicity_histogram();
            out.row("group", data.group.trim());
            out.row("distinct D", series.pairs().len());
            out.row("max a_D", max);
            out.row("max per signed D", signed);
            for (m, n) in &histogram {
                out.row(&format!("a_D = {m}"), n);
            }
            out.csv_text(series.to_csv());
            out.json(&serde_json::json!({
                "group": data.group.trim(),
                "max_a_D": max,
                "max_signed_multiplicity": signed,
                "histogram": histogram,
            }))?;
            Ok(Outcome::Pass)
        }
        CensusCmd::Rankcheck { data, ell, d, rk_f } => {
            let (ds, mut resolver) = load(data, out)?;
            let base = BaseFieldData {
                d: d.unwrap_or(ds.base.d),
                rk: rk_f.unwrap_or(ds.base.rk),
                h_ell: if d.is_some() || rk_f.is_some() { None } else { ds.base.h_ell },
            };
            let rep = ingest::rank_vs_bound(&ds, *ell, &base, &mut resolver)?;
            out.row("ell", rep.ell);
            out.row("checked", rep.checked);
            out.row("violations", rep.violations.len());
            out.row("max rank/bound", format!("{:.4}", rep.max_ratio));
            for n in &rep.notes {
                out.row("note", n);
            }
            for s in rep.skipped_invalid.iter().take(10) {
                out.row("skipped", s);
            }
            for v in rep.violations.iter().take(10) {
                out.row("violation", format!("{} rank {} > {:.3}", v.label, v.rank, v.bound));
            }
            out.csv(
                &["label", "rank", "bound"],
                rep.violations
                    .iter()
                    .map(|v| vec![v.label.clone(), v.rank.to_string(), v.bound.to_string()]),
            );
            out.json(&rep)?;
            Ok(Outcome::from_ok(rep.passed()))
        }
        CensusCmd::Generate { limit, invariants, out: path } => {
            let ds = ingest::imaginary_quadratic_dataset(i64::try_from(*limit)?, *invariants)?;
            let text = match Format::from_path(path) {
                Format::Csv => ds.to_csv(),
                Format::Jsonl => ds.to_jsonl(),
            };
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            out.row("records", ds.len());
            out.row("written", path.display());
            out.json(&serde_json::json!({ "records": ds.len(), "path": path }))?;
            Ok(Outcome::Pass)
        }
    }
}
