#![allow(clippy::needless_range_loop)]

mod common;

use ewa_denoise::convolve::{convolve_direct, convolve_fft};
use ewa_denoise::detector::{classify, neighborhood_counts, window_size};
use ewa_denoise::io::{decode, encode_pgm, encode_pgm_ascii, encode_png};
use ewa_denoise::restoration::restore;
use ewa_denoise::{
    detect, distance_transform, ewa_filter, inject_spn, nni_fill, psnr, ConvBackend, FloatImage,
    GrayImage, Grid, Kernel, NoiseParams, PixelMask,
};
use proptest::prelude::*;

use common::*;

fn gray_image(max_side: usize) -> impl Strategy<Value = GrayImage> {
    (1..=max_side, 1..=max_side).prop_flat_map(|(w, h)| {
        prop::collection::vec(any::<u8>(), w * h)
            .prop_map(move |data| GrayImage::from_vec(w, h, data).unwrap())
    })
}

fn alphabet_image(max_side: usize) -> impl Strategy<Value = GrayImage> {
    (1..=max_side, 1..=max_side).prop_flat_map(|(w, h)| {
        prop::collection::vec(prop::sample::select(vec![0u8, 128, 255]), w * h)
            .prop_map(move |data| GrayImage::from_vec(w, h, data).unwrap())
    })
}

fn mask_with_known(max_side: usize) -> impl Strategy<Value = PixelMask> {
    (1..=max_side, 1..=max_side, 0.05f64..0.95).prop_flat_map(|(w, h, p)| {
        (
            prop::collection::vec(prop::bool::weighted(p), w * h),
            0..w * h,
        )
            .prop_map(move |(mut bits, forced)| {
                bits[forced] = true;
                PixelMask::new(Grid::from_vec(w, h, bits).unwrap())
            })
    })
}

fn float_grid(max_side: usize) -> impl Strategy<Value = FloatImage> {
    (1..=max_side, 1..=max_side).prop_flat_map(|(w, h)| {
        prop::collection::vec(-300.0f64..300.0, w * h)
            .prop_map(move |data| FloatImage::from_vec(w, h, data).unwrap())
    })
}

proptest! {
    #[test]
    fn quantize_idempotent_and_bounded(vals in prop::collection::vec(-1e4f64..1e4, 1..64)) {
        let n = vals.len();
        let f = FloatImage::from_vec(n, 1, vals).unwrap();
        let q = f.quantize().unwrap();
        let qq = q.to_float().quantize().unwrap();
        prop_assert_eq!(&q, &qq);
    }

    #[test]
    fn codecs_round_trip(img in gray_image(24)) {
        prop_assert_eq!(&decode(&encode_pgm(&img)).unwrap(), &img);
        prop_assert_eq!(&decode(&encode_pgm_ascii(&img)).unwrap(), &img);
        prop_assert_eq!(&decode(&encode_png(&img).unwrap()).unwrap(), &img);
    }

    #[test]
    fn noise_touches_only_masked_pixels(img in gray_image(32), p in 0.0f64..=1.0, seed in any::<u64>()) {
        let params = NoiseParams::new(p, seed).with_impulses(20, 230);
        let (noisy, mask) = inject_spn(&img, &params).unwrap();
        for row in 0..img.height() {
            for col in 0..img.width() {
                let v = noisy.get(row, col);
                if mask.is_known(row, col) {
                    prop_assert_eq!(v, img.get(row, col));
                } else {
                    prop_assert!(v == 20 || v == 230);
                }
            }
        }
        prop_assert_eq!(inject_spn(&img, &params).unwrap(), (noisy, mask));
    }

    #[test]
    fn detector_matches_loop_oracle(img in alphabet_image(8)) {
        match (detect(&img), detect_mask_oracle(&img)) {
            (Ok(report), Some((w, mask))) => {
                prop_assert_eq!(report.w, w);
                let got = report.mask.bits().map(|&b| u8::from(b));
                let got: Vec<Vec<u8>> = got.rows().map(<[u8]>::to_vec).collect();
                prop_assert_eq!(got, mask);
            }
            (Err(_), None) => {}
            (got, want) => prop_assert!(false, "detector {:?} vs oracle {:?}", got.map(|r| r.w), want),
        }
    }

    #[test]
    fn detected_pixels_are_suspicious(img in gray_image(20)) {
        if let Ok(report) = detect(&img) {
            for row in 0..img.height() {
                for col in 0..img.width() {
                    let v = img.get(row, col);
                    if !report.mask.is_known(row, col) {
                        prop_assert!(v == report.n_min || v == report.n_max);
                    }
                    let total = report.c_min_map.get(row, col) + report.c_max_map.get(row, col);
                    prop_assert!(total as usize <= report.w * report.w);
                }
            }
            prop_assert!(report.w % 2 == 1 && report.w >= 3);
        }
    }

    #[test]
    fn window_size_monotone(a in 0.0f64..0.999, b in 0.0f64..0.999) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(window_size(lo).unwrap() <= window_size(hi).unwrap());
    }

    #[test]
    fn edt_matches_brute_force(mask in mask_with_known(16)) {
        let field = distance_transform(&mask).unwrap();
        let oracle = edt_oracle(&mask);
        for row in 0..mask.height() {
            for col in 0..mask.width() {
                let (d2, at) = oracle[row][col];
                prop_assert_eq!(field.cpm.get(row, col), at);
                prop_assert_eq!(field.squared_distance(row, col), d2);
                prop_assert_eq!(field.dm.get(row, col), (d2 as f64).sqrt());
                prop_assert_eq!(field.dm.get(row, col) == 0.0, mask.is_known(row, col));
            }
        }
    }

    #[test]
    fn edt_is_one_lipschitz(mask in mask_with_known(12)) {
        let f = distance_transform(&mask).unwrap();
        let (w, h) = (mask.width(), mask.height());
        for a in 0..w * h {
            for b in 0..w * h {
                let (ra, ca) = (a / w, a % w);
                let (rb, cb) = (b / w, b % w);
                let gap = (((ra.abs_diff(rb)).pow(2) + (ca.abs_diff(cb)).pow(2)) as f64).sqrt();
                prop_assert!((f.dm.get(ra, ca) - f.dm.get(rb, cb)).abs() <= gap + 1e-12);
            }
        }
    }

    #[test]
    fn nni_uses_known_values_only(mask in mask_with_known(16), seed in any::<u8>()) {
        let (w, h) = (mask.width(), mask.height());
        let img = GrayImage::from_fn(w, h, |r, c| ((r * 37 + c * 11) as u8).wrapping_add(seed)).unwrap();
        let filled = nni_fill(&img, &distance_transform(&mask).unwrap()).unwrap();
        let known: Vec<u8> = (0..w * h)
            .filter(|i| mask.is_known(i / w, i % w))
            .map(|i| img.as_slice()[i])
            .collect();
        prop_assert!(filled.as_slice().iter().all(|v| known.contains(v)));
    }

    #[test]
    fn fft_and_direct_convolution_agree(a in float_grid(40)) {
        let direct = convolve_direct(&a, &Kernel::ones());
        prop_assert!(relative_error(&direct, &convolve_oracle(&a)) <= 1e-12);
        prop_assert!(relative_error(&convolve_fft(&a, &Kernel::ones()), &direct) <= 1e-9);
    }

    #[test]
    fn restore_matches_weighted_average_loop(
        x in prop::collection::vec(0.0f64..255.0, 64),
        wm in prop::collection::vec(0.01f64..9.0, 64),
        scale in 0.01f64..100.0,
    ) {
        let x = FloatImage::from_vec(8, 8, x).unwrap();
        let wm = FloatImage::from_vec(8, 8, wm).unwrap();
        let oracle = weighted_average_oracle(&x, &wm);
        let (lo, hi) = x.min_max();
        for backend in [ConvBackend::Direct, ConvBackend::Fft] {
            let y = restore(&x, &wm, backend).unwrap();
            prop_assert!(relative_error(&y, &oracle) <= 1e-9);
            prop_assert!(y.as_slice().iter().all(|&v| v >= lo - 1e-9 && v <= hi + 1e-9));
        }
        let y = restore(&x, &wm, ConvBackend::Direct).unwrap();
        let scaled = restore(&x, &wm.map(|&w| w * scale), ConvBackend::Direct).unwrap();
        prop_assert!(relative_error(&scaled, &y) <= 1e-12);
    }

    #[test]
    fn weight_ranges_hold(mask in mask_with_known(24)) {
        let (w, h) = (mask.width(), mask.height());
        let img = GrayImage::from_fn(w, h, |r, c| (r * 5 + c * 9) as u8).unwrap();
        // ewa_filter itself rejects out-of-range weights
        let out = ewa_filter(&img, &mask, ConvBackend::Direct).unwrap();
        let (lo, hi) = out.initial.to_float().min_max();
        prop_assert!(out.restored.as_slice().iter().all(|&v| v >= lo && v <= hi));
    }

    #[test]
    fn psnr_symmetric(a in gray_image(16), seed in any::<u64>()) {
        let (b, _) = inject_spn(&a, &NoiseParams::new(0.3, seed)).unwrap();
        prop_assert_eq!(psnr(&a, &b).unwrap(), psnr(&b, &a).unwrap());
    }
}

#[test]
fn checkerboard_block_interiors_exempt() {
    // 20x20 image of 5x5 blocks alternating 0 and 255
    let img = GrayImage::from_fn(
        20,
        20,
        |r, c| if (r / 5 + c / 5) % 2 == 0 { 0 } else { 255 },
    )
    .unwrap();
    let w = 3;
    let (c_min, c_max) = neighborhood_counts(&img, 0, 255, w);
    let mask = classify(&img, 0, 255, w, &c_min, &c_max).unwrap();
    for row in 0..20 {
        for col in 0..20 {
            let interior = (1..4).contains(&(row % 5)) && (1..4).contains(&(col % 5));
            if interior {
                assert!(mask.is_known(row, col), "interior ({row},{col}) flagged");
            }
        }
    }
}

#[test]
fn psnr_falls_as_corruption_grows() {
    let img = ewa_denoise::load_image(data_path("lena.pgm")).unwrap();
    let (noisy, truth) = inject_spn(&img, &NoiseParams::new(0.3, 5)).unwrap();
    // reveal the corruption one prefix of rows at a time
    let mut last = f64::INFINITY;
    for rows in (0..=512).step_by(64) {
        let partial = GrayImage::from_fn(512, 512, |r, c| {
            if r < rows && !truth.is_known(r, c) {
                noisy.get(r, c)
            } else {
                img.get(r, c)
            }
        })
        .unwrap();
        let db = psnr(&img, &partial).unwrap();
        assert!(db <= last);
        last = db;
    }
}
