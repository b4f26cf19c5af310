//! Batch workflows behind the `histotex` binary: feature extraction,
//! significance analysis, the design sweep, and synthetic data.

mod config;
mod manifest;

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hyperopt::{build_space, write_history_csv};
use crate::imageio::{load_image, resize, GrayImage};
use crate::matrix::FeatureMatrix;
use crate::pipeline::{
    sweep_designs, write_selection_rates_csv, write_table3_csv, write_table3_json, Dataset, DesignOutcome,
    EvalConfig, FeatureCache,
};
use crate::stats::{significance_report, write_boxplot_csv, write_significance_csv};
use crate::synth::write_synthetic;
use crate::texture::{extract_features, FEATURE_NAMES};

pub use config::{ImageSize, RunConfig, DEFAULT_SIZE};
pub use manifest::{Manifest, ManifestRow};

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Usage = 1,
    Data = 2,
    Partial = 3,
}

/// Files written by a command and how many inputs or designs were dropped.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CommandReport {
    pub outputs: Vec<PathBuf>,
    pub skipped: usize,
}

impl CommandReport {
    pub fn status(&self) -> ExitStatus {
        if self.skipped > 0 {
            ExitStatus::Partial
        } else {
            ExitStatus::Success
        }
    }
}

/// Maps an error to the exit code class it belongs to.
pub fn error_status(e: &Error) -> ExitStatus {
    match e {
        Error::InvalidArgument(_) | Error::Parse(_) => ExitStatus::Usage,
        _ => ExitStatus::Data,
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn create_file(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

/// Loads one image and brings it to the configured size.
pub fn load_sized(path: &Path, size: ImageSize) -> Result<GrayImage> {
    let img = load_image(path)?;
    match size {
        ImageSize::Native => Ok(img),
        ImageSize::Fixed(w, h) => resize(&img, w, h).map_err(|e| Error::UnsupportedImage {
            path: path.to_path_buf(),
            message: e.to_string(),
        }),
    }
}

/// Loads every manifest image; any failure aborts.
pub fn load_dataset(manifest: &Manifest, size: ImageSize) -> Result<Dataset> {
    let images = manifest
        .rows
        .par_iter()
        .map(|r| load_sized(&r.path, size))
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(
        images,
        manifest.rows.iter().map(|r| r.label).collect(),
        manifest.classes.clone(),
        manifest.rows.iter().map(|r| r.raw_path.clone()).collect(),
    )
}

/// Runs `f` on a pool with `workers` threads, or on the global pool.
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Writes `features.csv` (`path,label,<39 features>`) for a manifest using
/// the configured texture parameters. Unreadable images are skipped.
pub fn cmd_extract(manifest_path: &Path, cfg: &RunConfig) -> Result<CommandReport> {
    cfg.validate()?;
    let manifest = Manifest::load(manifest_path)?;
    let rows: Vec<Option<Vec<f64>>> = manifest
        .rows
        .par_iter()
        .map(|r| {
            let res = load_sized(&r.path, cfg.size).and_then(|img| extract_features(&img, &cfg.texture));
            match res {
                Ok(v) => Some(v.into_inner()),
                Err(e) => {
                    log::warn!("skipping {}: {e}", r.raw_path);
                    None
                }
            }
        })
        .collect();

    create_dir(&cfg.out)?;
    let out = cfg.out.join("features.csv");
    let mut w = csv::Writer::from_writer(create_file(&out)?);
    let mut header = vec!["path".to_string(), "label".to_string()];
    header.extend(FEATURE_NAMES.iter().map(|s| s.to_string()));
    w.write_record(&header)?;
    let mut skipped = 0;
    for (r, values) in manifest.rows.iter().zip(rows) {
        let Some(values) = values else {
            skipped += 1;
            continue;
        };
        let mut rec = vec![r.raw_path.clone(), manifest.classes[r.label].clone()];
        rec.extend(values.iter().map(f64::to_string));
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io(&out, e))?;
    Ok(CommandReport {
        outputs: vec![out],
        skipped,
    })
}

/// A features table as written by [`cmd_extract`].
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    pub feature_names: Vec<String>,
    pub classes: Vec<String>,
    pub labels: Vec<usize>,
    pub paths: Vec<String>,
    pub features: FeatureMatrix,
}

pub fn read_feature_table(path: &Path) -> Result<FeatureTable> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.clone();
    if header.len() < 3 || &header[0] != "path" || &header[1] != "label" {
        return Err(Error::Parse(format!(
            "{}: expected header path,label,<features...>",
            path.display()
        )));
    }
    let feature_names: Vec<String> = header.iter().skip(2).map(str::to_string).collect();
    let mut classes: Vec<String> = Vec::new();
    let mut labels = Vec::new();
    let mut paths = Vec::new();
    let mut data = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        paths.push(rec[0].to_string());
        let label = &rec[1];
        let id = match classes.iter().position(|c| c == label) {
            Some(i) => i,
            None => {
                classes.push(label.to_string());
                classes.len() - 1
            }
        };
        labels.push(id);
        for v in rec.iter().skip(2) {
            data.push(
                v.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("{}: bad number '{v}'", path.display())))?,
            );
        }
    }
    let features = FeatureMatrix::new(labels.len(), feature_names.len(), data)?;
    Ok(FeatureTable {
        feature_names,
        classes,
        labels,
        paths,
        features,
    })
}

/// Kruskal–Wallis / Benjamini–Hochberg screen of a features table; writes
/// `significance.csv` and `boxplot.csv`.
pub fn cmd_stats(features_path: &Path, cfg: &RunConfig) -> Result<CommandReport> {
    cfg.validate()?;
    let table = read_feature_table(features_path)?;
    if table.classes.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "significance analysis needs 3 classes, found {}",
            table.classes.len()
        )));
    }
    let report = significance_report(&table.features, &table.labels, &table.feature_names, cfg.alpha)?;
    create_dir(&cfg.out)?;
    let sig = cfg.out.join("significance.csv");
    write_significance_csv(&report, create_file(&sig)?)?;
    let boxes = cfg.out.join("boxplot.csv");
    write_boxplot_csv(&report, &table.classes, create_file(&boxes)?)?;
    log::info!(
        "{} of {} features significant at alpha={}",
        report.significant_count(),
        report.rows.len(),
        cfg.alpha
    );
    Ok(CommandReport {
        outputs: vec![sig, boxes],
        skipped: 0,
    })
}

/// Writes the sweep reports for already evaluated designs.
pub fn write_run_outputs(outcomes: &[DesignOutcome], out_dir: &Path) -> Result<Vec<PathBuf>> {
    create_dir(out_dir)?;
    let mut outputs = Vec::new();
    let table_csv = out_dir.join("table3.csv");
    write_table3_csv(outcomes, create_file(&table_csv)?)?;
    outputs.push(table_csv);
    let table_json = out_dir.join("table3.json");
    write_table3_json(outcomes, create_file(&table_json)?)?;
    outputs.push(table_json);
    let rates = out_dir.join("selection_rate.csv");
    write_selection_rates_csv(outcomes, create_file(&rates)?)?;
    outputs.push(rates);

    let hist_dir = out_dir.join("histories");
    create_dir(&hist_dir)?;
    for o in outcomes {
        let Some(report) = &o.report else { continue };
        let space = build_space(&o.design);
        for (fold, history) in report.histories.iter().enumerate() {
            let p = hist_dir.join(format!("{}_fold{fold}.csv", o.design.file_stem()));
            write_history_csv(&space, history, create_file(&p)?)?;
            outputs.push(p);
        }
    }
    Ok(outputs)
}

/// Nested cross-validation of the configured designs on a manifest.
pub fn cmd_run(manifest_path: &Path, cfg: &RunConfig) -> Result<CommandReport> {
    cfg.validate()?;
    let manifest = Manifest::load(manifest_path)?;
    let dataset = load_dataset(&manifest, cfg.size)?;
    let cache = FeatureCache::new(dataset);
    let eval = EvalConfig::new(cfg.k, cfg.budget, cfg.seed);
    log::info!(
        "evaluating {} design(s) on {} images, K={}, B={}",
        cfg.designs.len(),
        cache.dataset().len(),
        cfg.k,
        cfg.budget
    );
    let outcomes = sweep_designs(&cache, &cfg.designs, &eval);
    let outputs = write_run_outputs(&outcomes, &cfg.out)?;
    let failed = outcomes.iter().filter(|o| o.report.is_none()).count();
    if failed == outcomes.len() {
        return Err(Error::InsufficientData(format!(
            "all {failed} design(s) failed; see table3.csv"
        )));
    }
    Ok(CommandReport {
        outputs,
        skipped: failed,
    })
}

/// Generates the synthetic image set and its manifest under the output
/// directory.
pub fn cmd_synth(cfg: &RunConfig) -> Result<CommandReport> {
    cfg.validate()?;
    let synth = crate::synth::SynthConfig {
        seed: cfg.seed,
        ..cfg.synth
    };
    let manifest = write_synthetic(&synth, &cfg.out)?;
    Ok(CommandReport {
        outputs: vec![manifest],
        skipped: 0,
    })
}
