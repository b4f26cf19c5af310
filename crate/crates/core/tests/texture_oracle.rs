mod common;

use histotex::imageio::{quantize, QuantizedImage};
use histotex::synth::{generate_dataset, SynthConfig};
use histotex::texture::{
    extract_features, fos_features, glcm_features, glds_features, glrlm_features, Method,
    TextureParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::max_abs_diff;

const TOL: f64 = 1e-9;

#[test]
fn spatial_methods_match_oracle_at_all_levels_and_distances() {
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    for case in 0..60 {
        let w = rng.random_range(9..=20);
        let h = rng.random_range(9..=20);
        let levels = [4, 16, 64, 256][case % 4];
        let d = rng.random_range(1..=4);
        let q = common::random_quantized(&mut rng, w, h, levels);
        let ctx = format!("case {case}: {w}x{h} levels {levels} d {d}");
        assert!(max_abs_diff(&fos_features(&q).unwrap().to_array(), &common::fos(&q)) < TOL, "fos {ctx}");
        assert!(max_abs_diff(&glds_features(&q, d).unwrap().to_array(), &common::glds(&q, d)) < TOL, "glds {ctx}");
        assert!(max_abs_diff(&glcm_features(&q, d).unwrap().to_array(), &common::glcm(&q, d)) < TOL, "glcm {ctx}");
        assert!(max_abs_diff(&glrlm_features(&q).unwrap().to_array(), &common::glrlm(&q)) < TOL, "glrlm {ctx}");
    }
}

#[test]
fn structured_images_match_oracle() {
    // long runs and few distinct values stress the run and degenerate paths
    let stripes = QuantizedImage::new(10, 7, 4, (0..70).map(|i| ((i % 10) / 3) as u8).collect()).unwrap();
    let blocks = QuantizedImage::new(8, 8, 16, (0..64).map(|i| ((i / 8 / 4) * 2 + (i % 8) / 4) as u8).collect()).unwrap();
    let constant = QuantizedImage::new(5, 6, 16, vec![9; 30]).unwrap();
    for q in [stripes, blocks, constant] {
        for d in 1..=2 {
            assert!(max_abs_diff(&glds_features(&q, d).unwrap().to_array(), &common::glds(&q, d)) < TOL);
            assert!(max_abs_diff(&glcm_features(&q, d).unwrap().to_array(), &common::glcm(&q, d)) < TOL);
        }
        assert!(max_abs_diff(&fos_features(&q).unwrap().to_array(), &common::fos(&q)) < TOL);
        assert!(max_abs_diff(&glrlm_features(&q).unwrap().to_array(), &common::glrlm(&q)) < TOL);
    }
}

#[test]
fn feature_vector_slots_match_oracle() {
    let img = common::random_gray(77, 23, 18);
    let p = TextureParams {
        fos_levels: 256,
        glds_levels: 16,
        glds_distance: 3,
        glcm_levels: 4,
        glcm_distance: 2,
        glrlm_levels: 64,
        adf_angle_step: 2,
        rdf_radius_step: 3,
    };
    let v = extract_features(&img, &p).unwrap();
    let v = v.values();
    let expect = [
        (Method::Fos, common::fos(&quantize(&img, 256).unwrap()).to_vec()),
        (Method::Glds, common::glds(&quantize(&img, 16).unwrap(), 3).to_vec()),
        (Method::Glcm, common::glcm(&quantize(&img, 4).unwrap(), 2).to_vec()),
        (Method::Glrlm, common::glrlm(&quantize(&img, 64).unwrap()).to_vec()),
    ];
    for (m, e) in expect {
        assert!(max_abs_diff(&v[m.slots()], &e) < TOL, "{m:?}");
    }
}

#[test]
fn quantization_is_floor_of_scaled_value() {
    let img = common::random_gray(5, 16, 16);
    for levels in [4, 16, 64, 256] {
        let q = quantize(&img, levels).unwrap();
        for r in 0..16 {
            for c in 0..16 {
                assert_eq!(q.get(r, c), img.get(r, c) as usize * levels / 256);
            }
        }
    }
}

#[test]
fn synthetic_classes_order_by_radial_mean() {
    // blobs concentrate power at low frequency, the grating at its period
    let ds = generate_dataset(&SynthConfig {
        per_class: 7,
        ..SynthConfig::default()
    })
    .unwrap();
    let rdf_mean = Method::Rdf.slots().start;
    let mut per_class: [Vec<f64>; 3] = Default::default();
    for i in 0..ds.len() {
        let v = extract_features(ds.image(i), &TextureParams::default()).unwrap();
        per_class[ds.labels()[i]].push(v.values()[rdf_mean]);
    }
    let medians = per_class.map(|mut v| {
        v.sort_by(f64::total_cmp);
        v[v.len() / 2]
    });
    let [grating, noise, blob] = medians;
    assert!(blob < noise && noise < grating, "{medians:?}");
}
