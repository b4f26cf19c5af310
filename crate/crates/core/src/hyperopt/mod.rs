//! Sequential model-based optimization over mixed categorical / integer /
//! continuous search spaces.

mod space;
mod tpe;

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use space::{build_space, Dimension, Domain, HyperParamVector, ParamValue, SearchSpace, COST_RANGE};
pub use tpe::{categorical_probs, Parzen, TpeConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub index: usize,
    pub params: HyperParamVector,
    pub objective: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sampler {
    Tpe(TpeConfig),
    Random,
}

impl Default for Sampler {
    fn default() -> Self {
        Sampler::Tpe(TpeConfig::default())
    }
}

/// Draws every dimension uniformly (log-uniformly where flagged).
pub fn sample_random<R: Rng + ?Sized>(space: &SearchSpace, rng: &mut R) -> HyperParamVector {
    HyperParamVector {
        values: space
            .dims()
            .iter()
            .map(|d| (d.name.clone(), tpe::sample_uniform(&d.domain, rng)))
            .collect(),
    }
}

/// Proposes the next parameter vector given the trials so far.
pub fn suggest<R: Rng + ?Sized>(
    space: &SearchSpace,
    history: &[TrialRecord],
    sampler: &Sampler,
    rng: &mut R,
) -> Result<HyperParamVector> {
    if space.is_empty() {
        return Err(Error::InvalidArgument("search space has no dimensions".into()));
    }
    let cfg = match sampler {
        Sampler::Tpe(cfg) if history.len() >= cfg.n_startup.max(2) => cfg,
        _ => return Ok(sample_random(space, rng)),
    };
    if let Some(bad) = history.iter().find(|t| !space.contains(&t.params)) {
        return Err(Error::InvalidArgument(format!(
            "trial {} does not belong to the search space",
            bad.index
        )));
    }

    // best first, earlier trial first among equals
    let mut order: Vec<&TrialRecord> = history.iter().collect();
    order.sort_by(|a, b| b.objective.total_cmp(&a.objective).then(a.index.cmp(&b.index)));
    let n_good = ((cfg.gamma * history.len() as f64).ceil() as usize).clamp(1, history.len() - 1);
    let (good, bad) = order.split_at(n_good);

    let values = space
        .dims()
        .iter()
        .enumerate()
        .map(|(k, d)| {
            let g: Vec<&ParamValue> = good.iter().map(|t| &t.params.values[k].1).collect();
            let b: Vec<&ParamValue> = bad.iter().map(|t| &t.params.values[k].1).collect();
            (d.name.clone(), tpe::suggest_dimension(&d.domain, &g, &b, cfg, rng))
        })
        .collect();
    Ok(HyperParamVector { values })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeResult {
    pub best_value: f64,
    pub best_params: HyperParamVector,
    pub best_trial: usize,
    pub history: Vec<TrialRecord>,
}

/// Runs `budget` sequential trials and returns the best one (earliest among
/// equal objectives). The objective receives the trial index and parameters.
pub fn optimize<F>(
    space: &SearchSpace,
    budget: usize,
    seed: u64,
    sampler: &Sampler,
    mut objective: F,
) -> Result<OptimizeResult>
where
    F: FnMut(usize, &HyperParamVector) -> Result<f64>,
{
    if budget == 0 {
        return Err(Error::InvalidArgument("optimization budget must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut history: Vec<TrialRecord> = Vec::with_capacity(budget);
    let mut best = 0;
    for index in 0..budget {
        let params = suggest(space, &history, sampler, &mut rng)?;
        let value = objective(index, &params).map_err(|e| Error::Trial {
            index,
            source: Box::new(e),
        })?;
        if !value.is_finite() {
            return Err(Error::Trial {
                index,
                source: Box::new(Error::NonFinite("objective value")),
            });
        }
        if index > 0 && value > history[best].objective {
            best = index;
        }
        history.push(TrialRecord {
            index,
            params,
            objective: value,
        });
    }
    Ok(OptimizeResult {
        best_value: history[best].objective,
        best_params: history[best].params.clone(),
        best_trial: best,
        history,
    })
}

/// Writes `trial,<dimension names…>,objective`.
pub fn write_history_csv<W: Write>(space: &SearchSpace, history: &[TrialRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["trial".to_string()];
    header.extend(space.names().into_iter().map(str::to_string));
    header.push("objective".into());
    w.write_record(&header)?;
    for t in history {
        let mut row = vec![t.index.to_string()];
        for d in space.dims() {
            row.push(t.params.get(&d.name).map_or_else(String::new, ToString::to_string));
        }
        row.push(t.objective.to_string());
        w.write_record(&row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
