#ifndef HISTOTEX_H
#define HISTOTEX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

#define HTX_FEATURE_COUNT 39

#define HTX_CLASSIFIER_SVM_LINEAR 0

#define HTX_CLASSIFIER_SVM_RBF 1

#define HTX_CLASSIFIER_TREE 2

#define HTX_CRITERION_GINI 0

#define HTX_CRITERION_ENTROPY 1

#define HTX_CRITERION_LOG_LOSS 2

// Result codes.
typedef enum HtxStatus {
  HTX_STATUS_OK = 0,
  HTX_STATUS_NULL_POINTER = 1,
  HTX_STATUS_INVALID_ARGUMENT = 2,
  HTX_STATUS_IO = 3,
  HTX_STATUS_DATA = 4,
  HTX_STATUS_BUFFER_TOO_SMALL = 5,
  HTX_STATUS_PANIC = 6,
} HtxStatus;

// Opaque trained classifier.
typedef struct HtxClassifier HtxClassifier;

// Opaque 8-bit grayscale image.
typedef struct HtxImage HtxImage;

// Texture parameters. Level counts must be 4, 16, 64 or 256; distances and
// steps 1 to 4.
typedef struct HtxTextureParams {
  size_t fos_levels;
  size_t glds_levels;
  size_t glds_distance;
  size_t glcm_levels;
  size_t glcm_distance;
  size_t glrlm_levels;
  size_t adf_angle_step;
  size_t rdf_radius_step;
} HtxTextureParams;

// Classifier selection. `kind` is one of the `HTX_CLASSIFIER_*` constants;
// `c` applies to both SVMs, `gamma` to the RBF SVM, `criterion`
// (`HTX_CRITERION_*`) and `max_depth` to the tree.
typedef struct HtxClassifierSpec {
  uint32_t kind;
  double c;
  double gamma;
  uint32_t criterion;
  size_t max_depth;
} HtxClassifierSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Description of the last failure on this thread, or NULL. The pointer is
// valid until the next call into this library from the same thread.
const char *htx_last_error(void);

// Library version as a static NUL-terminated string.
const char *htx_version(void);

// Length of the feature vector written by [`htx_extract_features`].
size_t htx_feature_count(void);

// Name of feature slot `index` (static string), or NULL when out of range.
const char *htx_feature_name(size_t index);

// Default texture parameters.
struct HtxTextureParams htx_texture_params_default(void);

// Wraps a copy of `width * height` row-major gray pixels.
//
// # Safety
// `pixels` must point to `width * height` readable bytes; `out` must be a
// valid pointer.
enum HtxStatus htx_image_from_gray(const uint8_t *pixels,
                                   size_t width,
                                   size_t height,
                                   struct HtxImage **out);

// Loads a PNG or PGM file, converting color to gray.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be a valid pointer.
enum HtxStatus htx_image_load(const char *path, struct HtxImage **out);

// Area-average downsampling to `width` x `height` into a new image.
//
// # Safety
// `img` must be a live handle; `out` must be a valid pointer.
enum HtxStatus htx_image_resize(const struct HtxImage *img,
                                size_t width,
                                size_t height,
                                struct HtxImage **out);

// Width in pixels, or 0 for NULL.
//
// # Safety
// `img` must be NULL or a live handle.
size_t htx_image_width(const struct HtxImage *img);

// Height in pixels, or 0 for NULL.
//
// # Safety
// `img` must be NULL or a live handle.
size_t htx_image_height(const struct HtxImage *img);

// Releases an image. NULL is ignored.
//
// # Safety
// `img` must be NULL or a handle not yet freed.
void htx_image_free(struct HtxImage *img);

// Writes the 39 texture features of `img` into `out`.
//
// # Safety
// `img` must be a live handle, `params` valid or NULL (defaults), and
// `out` must hold `out_len` doubles.
enum HtxStatus htx_extract_features(const struct HtxImage *img,
                                    const struct HtxTextureParams *params,
                                    double *out,
                                    size_t out_len);

// Kruskal–Wallis test. `values` holds the groups back to back; group `g`
// has `group_sizes[g]` entries.
//
// # Safety
// Pointers must be valid for the stated lengths.
enum HtxStatus htx_kruskal_wallis(const double *values,
                                  const size_t *group_sizes,
                                  size_t n_groups,
                                  double *out_h,
                                  double *out_p);

// Benjamini–Hochberg adjusted p-values; `out` may alias `pvals`.
//
// # Safety
// Both pointers must be valid for `n` doubles.
enum HtxStatus htx_benjamini_hochberg(const double *pvals, size_t n, double *out);

// Macro-averaged F1 over `classes` (the union of both label arrays when
// `classes` is NULL).
//
// # Safety
// Label pointers must be valid for `n` entries, `classes` for `n_classes`.
enum HtxStatus htx_macro_f1(const size_t *y_true,
                            const size_t *y_pred,
                            size_t n,
                            const size_t *classes,
                            size_t n_classes,
                            double *out);

// Trains a classifier on a row-major `rows` x `cols` matrix.
//
// # Safety
// `features` must hold `rows * cols` doubles, `labels` `rows` entries;
// `spec` and `out` must be valid pointers.
enum HtxStatus htx_classifier_train(const double *features,
                                    size_t rows,
                                    size_t cols,
                                    const size_t *labels,
                                    const struct HtxClassifierSpec *spec,
                                    struct HtxClassifier **out);

// Predicts one label per row into `out_labels`.
//
// # Safety
// `model` must be a live handle; `features` must hold `rows * cols`
// doubles and `out_labels` `rows` entries.
enum HtxStatus htx_classifier_predict(const struct HtxClassifier *model,
                                      const double *features,
                                      size_t rows,
                                      size_t cols,
                                      size_t *out_labels);

// Releases a classifier. NULL is ignored.
//
// # Safety
// `model` must be NULL or a handle not yet freed.
void htx_classifier_free(struct HtxClassifier *model);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HISTOTEX_H */
