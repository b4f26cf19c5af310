use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;

use super::Dataset;
use crate::error::Result;
use crate::matrix::FeatureMatrix;
use crate::texture::{method_features, power_spectrum, Method, PowerSpectrum, TextureParams, FEATURE_COUNT};

type Key = (usize, Method, (usize, usize));

/// Memoizes per-image, per-method feature blocks for one dataset. Texture
/// parameters are re-drawn every optimization trial but take few distinct
/// values, so most blocks are reused. The power spectrum of each image is
/// computed once and shared by the two spectral methods.
#[derive(Debug)]
pub struct FeatureCache {
    dataset: Dataset,
    blocks: RwLock<HashMap<Key, Arc<Vec<f64>>>>,
    spectra: RwLock<HashMap<usize, Arc<PowerSpectrum>>>,
}

impl FeatureCache {
    pub fn new(dataset: Dataset) -> Self {
        Self {
            dataset,
            blocks: RwLock::new(HashMap::new()),
            spectra: RwLock::new(HashMap::new()),
        }
    }

    pub fn dataset(&self) -> &Dataset {
        &self.dataset
    }

    pub fn cached_blocks(&self) -> usize {
        self.blocks.read().expect("cache lock").len()
    }

    fn spectrum(&self, i: usize) -> Result<Arc<PowerSpectrum>> {
        if let Some(s) = self.spectra.read().expect("cache lock").get(&i) {
            return Ok(Arc::clone(s));
        }
        let s = Arc::new(power_spectrum(self.dataset.image(i))?);
        Ok(Arc::clone(
            self.spectra.write().expect("cache lock").entry(i).or_insert(s),
        ))
    }

    fn block(&self, i: usize, method: Method, p: &TextureParams) -> Result<Arc<Vec<f64>>> {
        let key = (i, method, method.param_key(p));
        if let Some(b) = self.blocks.read().expect("cache lock").get(&key) {
            return Ok(Arc::clone(b));
        }
        let spectrum = match method {
            Method::Adf | Method::Rdf => Some(self.spectrum(i)?),
            _ => None,
        };
        let values = Arc::new(method_features(self.dataset.image(i), spectrum.as_deref(), method, p)?);
        Ok(Arc::clone(
            self.blocks.write().expect("cache lock").entry(key).or_insert(values),
        ))
    }

    /// The full feature vector of one image.
    pub fn features_of(&self, i: usize, p: &TextureParams) -> Result<Vec<f64>> {
        let mut row = Vec::with_capacity(FEATURE_COUNT);
        for method in Method::ALL {
            row.extend_from_slice(&self.block(i, method, p)?);
        }
        Ok(row)
    }

    /// Feature matrix for the samples at `indices`, in that order.
    pub fn features(&self, indices: &[usize], p: &TextureParams) -> Result<FeatureMatrix> {
        p.validate()?;
        let rows: Vec<Vec<f64>> = indices
            .par_iter()
            .map(|&i| self.features_of(i, p))
            .collect::<Result<_>>()?;
        let mut data = Vec::with_capacity(indices.len() * FEATURE_COUNT);
        for r in rows {
            data.extend(r);
        }
        FeatureMatrix::new(indices.len(), FEATURE_COUNT, data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imageio::GrayImage;
    use crate::texture::extract_features;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cached_rows_match_direct_extraction() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let images: Vec<GrayImage> = (0..4)
            .map(|_| GrayImage::new(16, 12, (0..192).map(|_| rng.random()).collect()).unwrap())
            .collect();
        let ds = Dataset::new(
            images.clone(),
            vec![0, 1, 0, 1],
            vec!["a".into(), "b".into()],
            (0..4).map(|i| i.to_string()).collect(),
        )
        .unwrap();
        let cache = FeatureCache::new(ds);
        let p = TextureParams {
            glcm_distance: 3,
            ..TextureParams::default()
        };
        let m = cache.features(&[3, 1], &p).unwrap();
        assert_eq!(m.row(0), extract_features(&images[3], &p).unwrap().values());
        assert_eq!(m.row(1), extract_features(&images[1], &p).unwrap().values());
        let before = cache.cached_blocks();
        cache.features(&[3, 1], &p).unwrap();
        assert_eq!(cache.cached_blocks(), before);
        // changing only the GLCM distance adds only GLCM blocks
        let q = TextureParams { glcm_distance: 2, ..p };
        cache.features(&[3, 1], &q).unwrap();
        assert_eq!(cache.cached_blocks(), before + 2);
    }
}
