use std::io::Write;

use super::evaluate::{selection_rates, DesignOutcome};
use crate::error::Result;
use crate::texture::FEATURE_NAMES;

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

/// One row per design with mean/std of train, validation and test macro-F1
/// and the dimension trace.
pub fn write_table3_csv<W: Write>(outcomes: &[DesignOutcome], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "design",
        "status",
        "train_mean",
        "train_std",
        "valid_mean",
        "valid_std",
        "test_mean",
        "test_std",
        "dims_input",
        "dims_after_fs",
        "dims_after_dc",
        "dimension_trace",
    ])?;
    for o in outcomes {
        let mut row = vec![o.design.to_string()];
        match &o.report {
            Some(r) => {
                row.push("ok".into());
                for s in [r.train, r.valid, r.test] {
                    row.push(s.mean.to_string());
                    row.push(s.std.to_string());
                }
                row.push(r.dimensions.input.to_string());
                row.push(opt(r.dimensions.after_fs));
                row.push(opt(r.dimensions.after_dc));
                row.push(r.dimensions.display());
            }
            None => {
                row.push(format!("error: {}", o.error.as_deref().unwrap_or("unknown")));
                row.extend(std::iter::repeat_n(String::new(), 10));
            }
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_table3_json<W: Write>(outcomes: &[DesignOutcome], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, outcomes)?;
    out.write_all(b"\n").map_err(csv::Error::from)?;
    Ok(())
}

/// 39 rows (`feature`, then one rate column per selection design).
pub fn write_selection_rates_csv<W: Write>(outcomes: &[DesignOutcome], out: W) -> Result<()> {
    let rates = selection_rates(outcomes);
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["feature".to_string()];
    header.extend(rates.iter().map(|(m, _)| m.file_stem()));
    w.write_record(&header)?;
    for (j, name) in FEATURE_NAMES.iter().enumerate() {
        let mut row = vec![name.to_string()];
        row.extend(rates.iter().map(|(_, r)| r[j].to_string()));
        w.write_record(&row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
