use std::sync::Arc;

use crate::error::{Error, Result};
use crate::imageio::GrayImage;

/// Grayscale images with class labels. `labels[i]` indexes `class_names`.
#[derive(Debug, Clone)]
pub struct Dataset {
    images: Vec<Arc<GrayImage>>,
    labels: Vec<usize>,
    class_names: Vec<String>,
    ids: Vec<String>,
}

impl Dataset {
    pub fn new(
        images: Vec<GrayImage>,
        labels: Vec<usize>,
        class_names: Vec<String>,
        ids: Vec<String>,
    ) -> Result<Self> {
        Self::from_shared(images.into_iter().map(Arc::new).collect(), labels, class_names, ids)
    }

    pub fn from_shared(
        images: Vec<Arc<GrayImage>>,
        labels: Vec<usize>,
        class_names: Vec<String>,
        ids: Vec<String>,
    ) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::Empty("dataset"));
        }
        for len in [labels.len(), ids.len()] {
            if len != images.len() {
                return Err(Error::DimensionMismatch {
                    expected: images.len(),
                    actual: len,
                });
            }
        }
        if let Some(&l) = labels.iter().find(|&&l| l >= class_names.len()) {
            return Err(Error::InvalidArgument(format!(
                "label index {l} has no class name ({} classes)",
                class_names.len()
            )));
        }
        Ok(Self {
            images,
            labels,
            class_names,
            ids,
        })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, i: usize) -> &GrayImage {
        &self.images[i]
    }

    pub fn images(&self) -> &[Arc<GrayImage>] {
        &self.images
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    /// Copy with the images at `indices` replaced by `f(index, image)`.
    /// Labels, ids and every other image are shared unchanged.
    pub fn with_images_replaced<F>(&self, indices: &[usize], mut f: F) -> Self
    where
        F: FnMut(usize, &GrayImage) -> GrayImage,
    {
        let mut images = self.images.clone();
        for &i in indices {
            images[i] = Arc::new(f(i, &self.images[i]));
        }
        Self {
            images,
            labels: self.labels.clone(),
            class_names: self.class_names.clone(),
            ids: self.ids.clone(),
        }
    }
}
