use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::amr::{
    amr_loop_with, observed_rates, pw_study_with, uniform_study_with, ConvergenceRecord, StepView,
};
use crate::error::Result;
use crate::mesh::write_mesh;

use super::manifest::{Assertion, Manifest, Relative, Study, StudyKind};
use super::metric::{evaluate, main_error, value_at};
use super::problems::problem;
use super::svg::{LogLogPlot, Series};

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub out: PathBuf,
    pub dump_mesh: bool,
    pub dump_indicators: bool,
    pub dump_pyramid: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AssertionOutcome {
    pub study: String,
    pub metric: String,
    pub relative_to: Option<String>,
    pub value: Option<f64>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RunReport {
    pub records: Vec<ConvergenceRecord>,
    pub assertions: Vec<AssertionOutcome>,
}

impl RunReport {
    /// No assertion failed and no study aborted.
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed) && self.records.iter().all(|r| r.failure.is_none())
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn dump_step(dir: &Path, opts: &RunOptions, view: &StepView<f64>) -> Result<()> {
    let step = view.row.step;
    if opts.dump_mesh {
        write_mesh(
            view.mesh,
            create(&dir.join(format!("mesh_step{step:02}.txt")))?,
        )?;
    }
    if opts.dump_indicators {
        view.indicators
            .write_csv(create(&dir.join(format!("indicators_step{step:02}.csv")))?)?;
    }
    if opts.dump_pyramid {
        view.pyramid
            .write_csv(create(&dir.join(format!("pyramid_step{step:02}.csv")))?)?;
    }
    Ok(())
}

/// Runs one study, writing dumps into `dir` when requested.
pub fn run_study(study: &Study, dir: &Path, opts: &RunOptions) -> Result<ConvergenceRecord> {
    let problem = problem::<f64>(&study.problem)?;
    let config = study.config();
    let observer = |v: &StepView<f64>| dump_step(dir, opts, v);
    let mut record = match study.kind {
        StudyKind::Uniform => uniform_study_with(&problem, &config, &study.levels, observer)?,
        StudyKind::Amr => amr_loop_with(&problem, &config, observer)?,
        StudyKind::Pw => pw_study_with(&problem, &config, &study.h, study.cap, observer)?,
    };
    record.label = study.name.clone();
    Ok(record)
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:e}")).unwrap_or_default()
}

/// Per-level table with observed rates and the `E₂/E₁` ratio.
pub fn write_table(record: &ConvergenceRecord, mut w: impl Write) -> std::io::Result<()> {
    let e1: Vec<_> = record.steps.iter().map(|s| s.e1).collect();
    let e2: Vec<_> = record.steps.iter().map(|s| s.e2).collect();
    let (r1, r2) = (observed_rates(&e1), observed_rates(&e2));
    writeln!(w, "h,N,E1,rate_E1,E2,rate_E2,ratio")?;
    for (i, s) in record.steps.iter().enumerate() {
        let ratio = s.e2.zip(s.e1).map(|(a, b)| a / b);
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            opt(s.h),
            s.n,
            opt(s.e1),
            r1[i].map(|r| format!("{r:.3}")).unwrap_or_default(),
            opt(s.e2),
            r2[i].map(|r| format!("{r:.3}")).unwrap_or_default(),
            ratio.map(|r| format!("{r:.4}")).unwrap_or_default()
        )?;
    }
    Ok(())
}

fn points(record: &ConvergenceRecord, q: &str) -> Vec<(f64, f64)> {
    record
        .steps
        .iter()
        .filter_map(|s| {
            let v = match q {
                "E" => s.e,
                "E1" => s.e1,
                "E2" => s.e2,
                "eta" => s.eta,
                "eta_classical" => s.eta_classical,
                "energy_err" => s.energy_err,
                _ => None,
            };
            v.map(|v| (s.n as f64, v))
        })
        .collect()
}

/// Error and estimator curves with a slope `-1` guide and the regression
/// line of the main error.
pub fn study_plot(record: &ConvergenceRecord) -> LogLogPlot {
    let main = main_error(record);
    let mut series: Vec<Series> = [main, "eta", "eta_classical", "energy_err"]
        .iter()
        .map(|q| Series::new(*q, points(record, q)))
        .filter(|s| !s.points.is_empty())
        .collect();
    let pts = points(record, main);
    if let (Some(&first), Some(&last)) = (pts.first(), pts.last()) {
        if last.0 > first.0 {
            series.push(
                Series::new(
                    "slope -1",
                    vec![first, (last.0, first.1 * first.0 / last.0)],
                )
                .dashed(),
            );
            let (n, e): (Vec<f64>, Vec<f64>) = pts.iter().copied().unzip();
            if let Some(slope) = crate::amr::regression_slope(&n, &e) {
                let m = pts.len() as f64;
                let lx = n.iter().map(|x| x.ln()).sum::<f64>() / m;
                let ly = e.iter().map(|x| x.ln()).sum::<f64>() / m;
                let line = |x: f64| (ly + slope * (x.ln() - lx)).exp();
                series.push(
                    Series::new(
                        format!("fit {slope:.2}"),
                        vec![(first.0, line(first.0)), (last.0, line(last.0))],
                    )
                    .dashed(),
                );
            }
        }
    }
    LogLogPlot {
        title: record.label.clone(),
        x_label: "N".into(),
        y_label: "error / estimator".into(),
        series,
    }
}

fn check(records: &[ConvergenceRecord], study: &Study, a: &Assertion) -> AssertionOutcome {
    let own = records
        .iter()
        .find(|r| r.label == study.name)
        .expect("every study has a record");
    let value = (|| -> Result<Option<f64>> {
        let v = evaluate(own, &a.metric)?;
        let Some(other_name) = &a.relative_to else {
            return Ok(v);
        };
        let Some(other) = records.iter().find(|r| &r.label == other_name) else {
            return Ok(None);
        };
        let Some(v) = v else { return Ok(None) };
        let w = match (a.mode, a.metric.split_once(':')) {
            (Relative::Ratio, Some(("last", q))) => match own.last() {
                Some(s) => value_at(other, q, s.n as f64)?,
                None => None,
            },
            _ => evaluate(other, &a.metric)?,
        };
        Ok(w.map(|w| match a.mode {
            Relative::Ratio => v / w,
            Relative::Difference => v - w,
        }))
    })()
    .ok()
    .flatten();
    let passed = value.is_some_and(|v| {
        let lo = a.min.is_none_or(|m| if a.strict { v > m } else { v >= m });
        let hi = a.max.is_none_or(|m| if a.strict { v < m } else { v <= m });
        v.is_finite() && lo && hi
    });
    AssertionOutcome {
        study: study.name.clone(),
        metric: a.metric.clone(),
        relative_to: a.relative_to.clone(),
        value,
        min: a.min,
        max: a.max,
        passed,
    }
}

/// Runs every study in parallel, writes `<out>/<study>/` with the record,
/// table and plot, then a comparison plot and `summary.json`. A manifest
/// without studies writes nothing.
pub fn run_manifest(manifest: &Manifest, opts: &RunOptions) -> Result<RunReport> {
    if manifest.studies.is_empty() {
        return Ok(RunReport::default());
    }
    fs::create_dir_all(&opts.out)?;
    let records = manifest
        .studies
        .par_iter()
        .map(|study| -> Result<ConvergenceRecord> {
            let dir = opts.out.join(&study.name);
            fs::create_dir_all(&dir)?;
            let record = run_study(study, &dir, opts)?;
            record.write_csv(create(&dir.join("record.csv"))?)?;
            if study.kind != StudyKind::Amr {
                write_table(&record, create(&dir.join("table.csv"))?)?;
            }
            fs::write(dir.join("convergence.svg"), study_plot(&record).render())?;
            Ok(record)
        })
        .collect::<Result<Vec<_>>>()?;

    let assertions = manifest
        .studies
        .iter()
        .flat_map(|s| s.assertions.iter().map(move |a| (s, a)))
        .map(|(s, a)| check(&records, s, a))
        .collect();

    let comparison = LogLogPlot {
        title: "comparison".into(),
        x_label: "N".into(),
        y_label: "error".into(),
        series: records
            .iter()
            .map(|r| {
                let q = main_error(r);
                Series::new(format!("{} ({q})", r.label), points(r, q))
            })
            .collect(),
    };
    fs::write(opts.out.join("comparison.svg"), comparison.render())?;
    let report = RunReport {
        records,
        assertions,
    };
    serde_json::to_writer_pretty(create(&opts.out.join("summary.json"))?, &report)?;
    Ok(report)
}

/// Human-readable assertion report.
pub fn format_report(report: &RunReport) -> String {
    let mut s = String::new();
    for r in &report.records {
        if let Some(f) = &r.failure {
            s.push_str(&format!("FAIL {}: aborted: {f}\n", r.label));
        }
    }
    for a in &report.assertions {
        let rel = a
            .relative_to
            .as_deref()
            .map(|o| format!(" vs {o}"))
            .unwrap_or_default();
        s.push_str(&format!(
            "{} {}: {}{rel} = {} (min {}, max {})\n",
            if a.passed { "PASS" } else { "FAIL" },
            a.study,
            a.metric,
            a.value
                .map(|v| format!("{v:.4}"))
                .unwrap_or_else(|| "n/a".into()),
            a.min.map(|v| v.to_string()).unwrap_or_else(|| "-".into()),
            a.max.map(|v| v.to_string()).unwrap_or_else(|| "-".into()),
        ));
    }
    s
}
