//! C ABI over the `histotex` library.
//!
//! Conventions:
//! - every fallible function returns an [`HtxStatus`]; on failure a
//!   description is available from [`htx_last_error`] on the same thread;
//! - objects are opaque handles created by `*_new`/`*_load`/`*_train`
//!   functions and released with the matching `*_free`;
//! - arrays are passed as pointer + length, matrices row-major.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;
use std::slice;

use histotex::classify::{ClassifierSpec, Criterion, TrainedClassifier};
use histotex::imageio::{load_image, resize, GrayImage};
use histotex::metrics::macro_f1;
use histotex::stats::{benjamini_hochberg, kruskal_wallis};
use histotex::texture::{extract_features, TextureParams, FEATURE_COUNT, FEATURE_NAMES};
use histotex::{Error, FeatureMatrix};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HtxStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    Data = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

pub const HTX_FEATURE_COUNT: usize = 39;

pub const HTX_CLASSIFIER_SVM_LINEAR: u32 = 0;
pub const HTX_CLASSIFIER_SVM_RBF: u32 = 1;
pub const HTX_CLASSIFIER_TREE: u32 = 2;

pub const HTX_CRITERION_GINI: u32 = 0;
pub const HTX_CRITERION_ENTROPY: u32 = 1;
pub const HTX_CRITERION_LOG_LOSS: u32 = 2;

/// Opaque 8-bit grayscale image.
pub struct HtxImage(GrayImage);

/// Opaque trained classifier.
pub struct HtxClassifier(TrainedClassifier);

/// Texture parameters. Level counts must be 4, 16, 64 or 256; distances and
/// steps 1 to 4.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HtxTextureParams {
    pub fos_levels: usize,
    pub glds_levels: usize,
    pub glds_distance: usize,
    pub glcm_levels: usize,
    pub glcm_distance: usize,
    pub glrlm_levels: usize,
    pub adf_angle_step: usize,
    pub rdf_radius_step: usize,
}

impl From<HtxTextureParams> for TextureParams {
    fn from(p: HtxTextureParams) -> Self {
        TextureParams {
            fos_levels: p.fos_levels,
            glds_levels: p.glds_levels,
            glds_distance: p.glds_distance,
            glcm_levels: p.glcm_levels,
            glcm_distance: p.glcm_distance,
            glrlm_levels: p.glrlm_levels,
            adf_angle_step: p.adf_angle_step,
            rdf_radius_step: p.rdf_radius_step,
        }
    }
}

/// Classifier selection. `kind` is one of the `HTX_CLASSIFIER_*` constants;
/// `c` applies to both SVMs, `gamma` to the RBF SVM, `criterion`
/// (`HTX_CRITERION_*`) and `max_depth` to the tree.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HtxClassifierSpec {
    pub kind: u32,
    pub c: f64,
    pub gamma: f64,
    pub criterion: u32,
    pub max_depth: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> HtxStatus {
    match e {
        Error::Io { .. } => HtxStatus::Io,
        Error::InvalidArgument(_) | Error::DimensionMismatch { .. } | Error::Parse(_) => {
            HtxStatus::InvalidArgument
        }
        _ => HtxStatus::Data,
    }
}

struct Fail(HtxStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(HtxStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> HtxStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            HtxStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            HtxStatus::Panic
        }
    }
}

unsafe fn slice_in<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn slice_out<'a, T>(p: *mut T, len: usize, what: &str) -> Result<&'a mut [T], Fail> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts_mut(p, len))
}

unsafe fn matrix_in(data: *const f64, rows: usize, cols: usize) -> Result<FeatureMatrix, Fail> {
    let len = rows
        .checked_mul(cols)
        .ok_or_else(|| Fail(HtxStatus::InvalidArgument, "matrix size overflows".into()))?;
    let values = slice_in(data, len, "features")?;
    Ok(FeatureMatrix::new(rows, cols, values.to_vec())?)
}

fn boxed<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    unsafe { *out = Box::into_raw(Box::new(value)) };
    Ok(())
}

/// Description of the last failure on this thread, or NULL. The pointer is
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn htx_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn htx_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Length of the feature vector written by [`htx_extract_features`].
#[no_mangle]
pub extern "C" fn htx_feature_count() -> usize {
    FEATURE_COUNT
}

static NAME_STORAGE: std::sync::OnceLock<Vec<CString>> = std::sync::OnceLock::new();

/// Name of feature slot `index` (static string), or NULL when out of range.
#[no_mangle]
pub extern "C" fn htx_feature_name(index: usize) -> *const c_char {
    let names = NAME_STORAGE.get_or_init(|| {
        FEATURE_NAMES
            .iter()
            .map(|n| CString::new(*n).expect("names have no NUL"))
            .collect()
    });
    names.get(index).map_or(ptr::null(), |s| s.as_ptr())
}

/// Default texture parameters.
#[no_mangle]
pub extern "C" fn htx_texture_params_default() -> HtxTextureParams {
    let d = TextureParams::default();
    HtxTextureParams {
        fos_levels: d.fos_levels,
        glds_levels: d.glds_levels,
        glds_distance: d.glds_distance,
        glcm_levels: d.glcm_levels,
        glcm_distance: d.glcm_distance,
        glrlm_levels: d.glrlm_levels,
        adf_angle_step: d.adf_angle_step,
        rdf_radius_step: d.rdf_radius_step,
    }
}

/// Wraps a copy of `width * height` row-major gray pixels.
///
/// # Safety
/// `pixels` must point to `width * height` readable bytes; `out` must be a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn htx_image_from_gray(
    pixels: *const u8,
    width: usize,
    height: usize,
    out: *mut *mut HtxImage,
) -> HtxStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let len = width
            .checked_mul(height)
            .ok_or_else(|| Fail(HtxStatus::InvalidArgument, "image size overflows".into()))?;
        let data = slice_in(pixels, len, "pixels")?.to_vec();
        boxed(out, HtxImage(GrayImage::new(width, height, data)?))
    })
}

/// Loads a PNG or PGM file, converting color to gray.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn htx_image_load(path: *const c_char, out: *mut *mut HtxImage) -> HtxStatus {
    guard(|| {
        if path.is_null() {
            return Err(null("path"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| Fail(HtxStatus::InvalidArgument, "path is not UTF-8".into()))?;
        boxed(out, HtxImage(load_image(Path::new(path))?))
    })
}

/// Area-average downsampling to `width` x `height` into a new image.
///
/// # Safety
/// `img` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn htx_image_resize(
    img: *const HtxImage,
    width: usize,
    height: usize,
    out: *mut *mut HtxImage,
) -> HtxStatus {
    guard(|| {
        let img = img.as_ref().ok_or_else(|| null("img"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        boxed(out, HtxImage(resize(&img.0, width, height)?))
    })
}

/// Width in pixels, or 0 for NULL.
///
/// # Safety
/// `img` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn htx_image_width(img: *const HtxImage) -> usize {
    img.as_ref().map_or(0, |i| i.0.width())
}

/// Height in pixels, or 0 for NULL.
///
/// # Safety
/// `img` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn htx_image_height(img: *const HtxImage) -> usize {
    img.as_ref().map_or(0, |i| i.0.height())
}

/// Releases an image. NULL is ignored.
///
/// # Safety
/// `img` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn htx_image_free(img: *mut HtxImage) {
    if !img.is_null() {
        drop(Box::from_raw(img));
    }
}

/// Writes the 39 texture features of `img` into `out`.
///
/// # Safety
/// `img` must be a live handle, `params` valid or NULL (defaults), and
/// `out` must hold `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn htx_extract_features(
    img: *const HtxImage,
    params: *const HtxTextureParams,
    out: *mut f64,
    out_len: usize,
) -> HtxStatus {
    guard(|| {
        let img = img.as_ref().ok_or_else(|| null("img"))?;
        let p: TextureParams = params.as_ref().map_or_else(TextureParams::default, |p| (*p).into());
        if out_len < FEATURE_COUNT {
            return Err(Fail(
                HtxStatus::BufferTooSmall,
                format!("output needs {FEATURE_COUNT} slots, got {out_len}"),
            ));
        }
        let dst = slice_out(out, FEATURE_COUNT, "out")?;
        dst.copy_from_slice(extract_features(&img.0, &p)?.values());
        Ok(())
    })
}

/// Kruskal–Wallis test. `values` holds the groups back to back; group `g`
/// has `group_sizes[g]` entries.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn htx_kruskal_wallis(
    values: *const f64,
    group_sizes: *const usize,
    n_groups: usize,
    out_h: *mut f64,
    out_p: *mut f64,
) -> HtxStatus {
    guard(|| {
        let sizes = slice_in(group_sizes, n_groups, "group_sizes")?;
        let total: usize = sizes.iter().sum();
        let all = slice_in(values, total, "values")?;
        let mut groups = Vec::with_capacity(n_groups);
        let mut at = 0;
        for &s in sizes {
            groups.push(&all[at..at + s]);
            at += s;
        }
        if out_h.is_null() || out_p.is_null() {
            return Err(null("output"));
        }
        let kw = kruskal_wallis(&groups)?;
        *out_h = kw.h;
        *out_p = kw.p;
        Ok(())
    })
}

/// Benjamini–Hochberg adjusted p-values; `out` may alias `pvals`.
///
/// # Safety
/// Both pointers must be valid for `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn htx_benjamini_hochberg(pvals: *const f64, n: usize, out: *mut f64) -> HtxStatus {
    guard(|| {
        let adjusted = benjamini_hochberg(slice_in(pvals, n, "pvals")?)?;
        slice_out(out, n, "out")?.copy_from_slice(&adjusted);
        Ok(())
    })
}

/// Macro-averaged F1 over `classes` (the union of both label arrays when
/// `classes` is NULL).
///
/// # Safety
/// Label pointers must be valid for `n` entries, `classes` for `n_classes`.
#[no_mangle]
pub unsafe extern "C" fn htx_macro_f1(
    y_true: *const usize,
    y_pred: *const usize,
    n: usize,
    classes: *const usize,
    n_classes: usize,
    out: *mut f64,
) -> HtxStatus {
    guard(|| {
        let t = slice_in(y_true, n, "y_true")?;
        let p = slice_in(y_pred, n, "y_pred")?;
        let classes: Vec<usize> = if classes.is_null() {
            let mut c: Vec<usize> = t.iter().chain(p).copied().collect();
            c.sort_unstable();
            c.dedup();
            c
        } else {
            slice_in(classes, n_classes, "classes")?.to_vec()
        };
        if out.is_null() {
            return Err(null("out"));
        }
        *out = macro_f1(t, p, &classes)?;
        Ok(())
    })
}

fn spec_from(s: &HtxClassifierSpec) -> Result<ClassifierSpec, Fail> {
    let bad = |what: &str, v: u32| Fail(HtxStatus::InvalidArgument, format!("unknown {what} {v}"));
    Ok(match s.kind {
        HTX_CLASSIFIER_SVM_LINEAR => ClassifierSpec::SvmLinear { c: s.c },
        HTX_CLASSIFIER_SVM_RBF => ClassifierSpec::SvmRbf { c: s.c, gamma: s.gamma },
        HTX_CLASSIFIER_TREE => ClassifierSpec::Tree {
            criterion: match s.criterion {
                HTX_CRITERION_GINI => Criterion::Gini,
                HTX_CRITERION_ENTROPY => Criterion::Entropy,
                HTX_CRITERION_LOG_LOSS => Criterion::LogLoss,
                v => return Err(bad("criterion", v)),
            },
            max_depth: s.max_depth,
        },
        v => return Err(bad("classifier kind", v)),
    })
}

/// Trains a classifier on a row-major `rows` x `cols` matrix.
///
/// # Safety
/// `features` must hold `rows * cols` doubles, `labels` `rows` entries;
/// `spec` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn htx_classifier_train(
    features: *const f64,
    rows: usize,
    cols: usize,
    labels: *const usize,
    spec: *const HtxClassifierSpec,
    out: *mut *mut HtxClassifier,
) -> HtxStatus {
    guard(|| {
        let spec = spec_from(spec.as_ref().ok_or_else(|| null("spec"))?)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let f = matrix_in(features, rows, cols)?;
        let y = slice_in(labels, rows, "labels")?;
        boxed(out, HtxClassifier(spec.train(&f, y)?))
    })
}

/// Predicts one label per row into `out_labels`.
///
/// # Safety
/// `model` must be a live handle; `features` must hold `rows * cols`
/// doubles and `out_labels` `rows` entries.
#[no_mangle]
pub unsafe extern "C" fn htx_classifier_predict(
    model: *const HtxClassifier,
    features: *const f64,
    rows: usize,
    cols: usize,
    out_labels: *mut usize,
) -> HtxStatus {
    guard(|| {
        let model = model.as_ref().ok_or_else(|| null("model"))?;
        let f = matrix_in(features, rows, cols)?;
        let pred = model.0.predict(&f)?;
        slice_out(out_labels, rows, "out_labels")?.copy_from_slice(&pred);
        Ok(())
    })
}

/// Releases a classifier. NULL is ignored.
///
/// # Safety
/// `model` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn htx_classifier_free(model: *mut HtxClassifier) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}
