use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use histotex_ffi::*;

fn checkerboard(n: usize) -> Vec<u8> {
    (0..n * n).map(|i| if (i / n + i % n).is_multiple_of(2) { 0 } else { 255 }).collect()
}

fn last_error() -> String {
    let p = htx_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn feature_names_and_count() {
    assert_eq!(htx_feature_count(), HTX_FEATURE_COUNT);
    let first = unsafe { CStr::from_ptr(htx_feature_name(0)) };
    assert_eq!(first.to_str().unwrap(), "fos_mean");
    let last = unsafe { CStr::from_ptr(htx_feature_name(38)) };
    assert_eq!(last.to_str().unwrap(), "rdf_entropy");
    assert!(htx_feature_name(39).is_null());
    let v = unsafe { CStr::from_ptr(htx_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn image_round_trip_and_features() {
    let px = checkerboard(8);
    let mut img: *mut HtxImage = ptr::null_mut();
    unsafe {
        assert_eq!(htx_image_from_gray(px.as_ptr(), 8, 8, &mut img), HtxStatus::Ok);
        assert_eq!((htx_image_width(img), htx_image_height(img)), (8, 8));
        let mut feats = [0.0f64; HTX_FEATURE_COUNT];
        let params = htx_texture_params_default();
        assert_eq!(
            htx_extract_features(img, &params, feats.as_mut_ptr(), feats.len()),
            HtxStatus::Ok
        );
        // GLCM contrast of a two-level checkerboard, averaged over directions
        let levels = params.glcm_levels as f64;
        let step = levels - 1.0;
        let expected = 0.5 * step * step;
        assert!((feats[14] - expected).abs() < 1e-9, "{}", feats[14]);

        assert_eq!(
            htx_extract_features(img, ptr::null(), feats.as_mut_ptr(), 10),
            HtxStatus::BufferTooSmall
        );
        assert!(last_error().contains("39"));

        let mut small: *mut HtxImage = ptr::null_mut();
        assert_eq!(htx_image_resize(img, 4, 4, &mut small), HtxStatus::Ok);
        assert_eq!(htx_image_width(small), 4);
        assert_eq!(htx_image_resize(img, 16, 16, &mut small), HtxStatus::InvalidArgument);
        htx_image_free(small);
        htx_image_free(img);
        htx_image_free(ptr::null_mut());
    }
}

#[test]
fn null_and_invalid_inputs() {
    unsafe {
        let mut img: *mut HtxImage = ptr::null_mut();
        assert_eq!(htx_image_from_gray(ptr::null(), 4, 4, &mut img), HtxStatus::NullPointer);
        assert_eq!(htx_image_from_gray([0u8; 4].as_ptr(), 2, 2, ptr::null_mut()), HtxStatus::NullPointer);
        let missing = CString::new("/nonexistent/file.png").unwrap();
        assert_eq!(htx_image_load(missing.as_ptr(), &mut img), HtxStatus::Io);
        assert!(last_error().contains("nonexistent"));
        let mut out = [0.0];
        assert_eq!(htx_benjamini_hochberg([1.5].as_ptr(), 1, out.as_mut_ptr()), HtxStatus::InvalidArgument);
        let mut feats = [0.0; 39];
        assert_eq!(
            htx_extract_features(ptr::null(), ptr::null(), feats.as_mut_ptr(), 39),
            HtxStatus::NullPointer
        );
    }
}

#[test]
fn load_png_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.png");
    histotex::imageio::GrayImage::new(5, 3, (0..15).collect()).unwrap().save_png(&path).unwrap();
    let c = CString::new(path.to_str().unwrap()).unwrap();
    unsafe {
        let mut img: *mut HtxImage = ptr::null_mut();
        assert_eq!(htx_image_load(c.as_ptr(), &mut img), HtxStatus::Ok);
        assert_eq!((htx_image_width(img), htx_image_height(img)), (5, 3));
        htx_image_free(img);
    }
}

#[test]
fn statistics_entry_points() {
    let values = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0];
    let sizes = [3usize, 3, 3];
    let (mut h, mut p) = (0.0, 0.0);
    unsafe {
        assert_eq!(htx_kruskal_wallis(values.as_ptr(), sizes.as_ptr(), 3, &mut h, &mut p), HtxStatus::Ok);
    }
    assert!((h - 7.2).abs() < 1e-12);
    assert!((p - (-3.6f64).exp()).abs() < 1e-12);

    let mut adj = [0.01, 0.02, 0.03];
    unsafe {
        let src = adj;
        assert_eq!(htx_benjamini_hochberg(src.as_ptr(), 3, adj.as_mut_ptr()), HtxStatus::Ok);
    }
    assert_eq!(adj, [0.03, 0.03, 0.03]);

    let t = [0usize, 1, 2, 0, 1, 2];
    let pred = [0usize; 6];
    let mut f1 = 0.0;
    unsafe {
        assert_eq!(htx_macro_f1(t.as_ptr(), pred.as_ptr(), 6, ptr::null(), 0, &mut f1), HtxStatus::Ok);
    }
    assert!((f1 - 1.0 / 6.0).abs() < 1e-12);
}

#[test]
fn classifier_train_predict() {
    let x = [0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 1.0, 0.0];
    let y = [0usize, 0, 1, 1];
    let specs = [
        HtxClassifierSpec { kind: HTX_CLASSIFIER_SVM_RBF, c: 1e4, gamma: 1.0, criterion: 0, max_depth: 0 },
        HtxClassifierSpec { kind: HTX_CLASSIFIER_TREE, c: 0.0, gamma: 0.0, criterion: HTX_CRITERION_GINI, max_depth: 2 },
    ];
    for spec in specs {
        unsafe {
            let mut model: *mut HtxClassifier = ptr::null_mut();
            assert_eq!(htx_classifier_train(x.as_ptr(), 4, 2, y.as_ptr(), &spec, &mut model), HtxStatus::Ok);
            let mut out = [9usize; 4];
            assert_eq!(htx_classifier_predict(model, x.as_ptr(), 4, 2, out.as_mut_ptr()), HtxStatus::Ok);
            assert_eq!(out, y);
            assert_eq!(
                htx_classifier_predict(model, x.as_ptr(), 2, 4, out.as_mut_ptr()),
                HtxStatus::InvalidArgument
            );
            htx_classifier_free(model);
        }
    }
    let bad = HtxClassifierSpec { kind: 7, c: 1.0, gamma: 1.0, criterion: 0, max_depth: 1 };
    let mut model: *mut HtxClassifier = ptr::null_mut();
    unsafe {
        assert_eq!(htx_classifier_train(x.as_ptr(), 4, 2, y.as_ptr(), &bad, &mut model), HtxStatus::InvalidArgument);
        let single = [0usize; 4];
        let lk = HtxClassifierSpec { kind: HTX_CLASSIFIER_SVM_LINEAR, c: 1.0, gamma: 0.0, criterion: 0, max_depth: 0 };
        assert_eq!(htx_classifier_train(x.as_ptr(), 4, 2, single.as_ptr(), &lk, &mut model), HtxStatus::Data);
    }
    assert!(model.is_null());
}

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/histotex.h")
}

#[test]
fn header_declares_every_export() {
    let text = std::fs::read_to_string(header()).expect("header generated by build script");
    for f in [
        "htx_last_error",
        "htx_version",
        "htx_feature_count",
        "htx_feature_name",
        "htx_texture_params_default",
        "htx_image_from_gray",
        "htx_image_load",
        "htx_image_resize",
        "htx_image_free",
        "htx_extract_features",
        "htx_kruskal_wallis",
        "htx_benjamini_hochberg",
        "htx_macro_f1",
        "htx_classifier_train",
        "htx_classifier_predict",
        "htx_classifier_free",
        "HTX_STATUS_OK",
    ] {
        assert!(text.contains(f), "{f} missing from header");
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "histotex.h"
int main(void) {
    unsigned char px[64];
    for (int i = 0; i < 64; i++) px[i] = (unsigned char)((i / 8 + i % 8) % 2 ? 255 : 0);
    HtxImage *img = NULL;
    if (htx_image_from_gray(px, 8, 8, &img) != HTX_STATUS_OK) return 1;
    double f[HTX_FEATURE_COUNT];
    HtxTextureParams p = htx_texture_params_default();
    if (htx_extract_features(img, &p, f, HTX_FEATURE_COUNT) != HTX_STATUS_OK) return 2;
    htx_image_free(img);
    if (htx_extract_features(NULL, &p, f, HTX_FEATURE_COUNT) != HTX_STATUS_NULL_POINTER) return 3;
    printf("%s %.1f\n", htx_feature_name(14), f[14]);
    return 0;
}
"#;

/// Compiles and links a C program against the header and the static
/// library when a C compiler is available.
#[test]
fn c_program_links_against_static_library() {
    let Ok(exe) = std::env::current_exe() else { return };
    let target = exe.parent().and_then(|p| p.parent()).expect("target dir");
    let lib = target.join("libhistotex_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: static library or C compiler not available");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let bin = dir.path().join("main");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C build failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "C program exit {:?}", out.status);
    let expected = format!("glcm_contrast {:.1}\n", 0.5 * 15.0 * 15.0);
    assert_eq!(String::from_utf8_lossy(&out.stdout), expected);
}
