//! End-to-end scheme behavior through the bitstream: embed, serialize,
//! reparse, extract, recover; plus capacity and quality relations.

mod common;

use jrdh_core::jpeg::{parse_jpeg, serialize_jpeg, TablePolicy};
use jrdh_core::metrics::psnr;
use jrdh_core::payload::{random_payload, BitSeq};
use jrdh_core::rdh::{capacity, embed_image, extract_image, SchemeId};
use jrdh_core::{decode_to_pixels, JpegImage};
use proptest::prelude::*;

fn max_payload(image: &JpegImage, scheme: SchemeId) -> u64 {
    capacity(image, scheme).saturating_sub(32)
}

#[test]
fn embed_serialize_reparse_extract_recovers_everything() {
    // One entry per QF is enough here; the acceptance suite sweeps all.
    for e in common::corpus().iter().filter(|e| e.name == "portrait") {
        for scheme in SchemeId::ALL {
            let payload = random_payload(max_payload(&e.image, scheme) as usize, 2024);
            let (marked, _) = embed_image(e.image.clone(), &payload, scheme).expect("embed");
            let marked_bytes = serialize_jpeg(&marked, TablePolicy::RebuildOptimal).unwrap();
            let reparsed = parse_jpeg(&marked_bytes).unwrap();
            assert_eq!(reparsed.coefficients, marked.coefficients);

            let (extracted, recovered) = extract_image(reparsed, scheme).expect("extract");
            assert_eq!(extracted, payload, "{} qf{} {scheme}", e.name, e.qf);
            assert_eq!(recovered.coefficients, e.image.coefficients);

            // Canonical form is the optimal-table fixpoint of the recovered
            // coefficients, so the original file comes back byte-identical.
            let recovered_bytes = serialize_jpeg(&recovered, TablePolicy::RebuildOptimal).unwrap();
            assert_eq!(recovered_bytes, e.bytes, "{} qf{} {scheme}", e.name, e.qf);
        }
    }
}

#[test]
fn in_memory_recovery_preserves_original_tables_byte_exactly() {
    // Without a bitstream round-trip the recovered image still carries the
    // original's Huffman tables, so PreserveOriginal reproduces the canonical
    // file byte for byte.
    for e in common::corpus().iter().filter(|e| e.qf == 70) {
        for scheme in SchemeId::ALL {
            let payload = random_payload((max_payload(&e.image, scheme) / 2) as usize, 31);
            let (marked, _) = embed_image(e.image.clone(), &payload, scheme).unwrap();
            let (extracted, recovered) = extract_image(marked, scheme).unwrap();
            assert_eq!(extracted, payload);
            let bytes = serialize_jpeg(&recovered, TablePolicy::PreserveOriginal).unwrap();
            assert_eq!(bytes, e.bytes, "{} {scheme}", e.name);
        }
    }
}

#[test]
fn capacity_relations_hold_on_the_corpus() {
    for e in common::corpus() {
        let proposed = capacity(&e.image, SchemeId::Proposed);
        let liu = capacity(&e.image, SchemeId::Liu2018);
        let huang = capacity(&e.image, SchemeId::Huang2016);
        assert_eq!(proposed, liu, "{} qf{}", e.name, e.qf);
        assert!(huang <= proposed);
        // Higher quality factors quantize finer and leave more nonzero ACs.
        assert!(proposed > 0 && huang > 0);
    }
}

#[test]
fn lena_like_corpus_image_matches_published_capacity_within_10_percent() {
    let e = common::corpus()
        .iter()
        .find(|e| e.name == "portrait" && e.qf == 50)
        .unwrap();
    let cap = capacity(&e.image, SchemeId::Proposed) as f64;
    let published = 24689.0;
    assert!(
        (cap - published).abs() <= published * 0.10,
        "portrait qf50 capacity {cap} not within 10% of {published}"
    );
}

#[test]
fn psnr_decreases_as_payload_grows() {
    let e = common::corpus()
        .iter()
        .find(|e| e.name == "waves" && e.qf == 50)
        .unwrap();
    let original_pixels = decode_to_pixels(&e.image);
    for scheme in SchemeId::ALL {
        let cap = max_payload(&e.image, scheme);
        let mut last = f64::INFINITY;
        for step in [0u64, 1, 2, 4, 6, 8, 10] {
            let bits = cap * step / 10;
            let payload = random_payload(bits as usize, 7);
            let (marked, _) = embed_image(e.image.clone(), &payload, scheme).unwrap();
            let p = psnr(&original_pixels, &decode_to_pixels(&marked)).unwrap();
            assert!(
                p <= last + 1e-9,
                "{scheme}: psnr rose from {last} to {p} at step {step}"
            );
            last = p;
        }
        assert!(last.is_finite());
    }
}

#[test]
fn proposed_distorts_no_more_than_liu_on_every_corpus_image() {
    for e in common::corpus().iter().filter(|e| e.qf == 50) {
        let bits = max_payload(&e.image, SchemeId::Huang2016) / 2;
        let payload = random_payload(bits as usize, 11);
        let original_pixels = decode_to_pixels(&e.image);
        let (marked_p, _) = embed_image(e.image.clone(), &payload, SchemeId::Proposed).unwrap();
        let (marked_l, _) = embed_image(e.image.clone(), &payload, SchemeId::Liu2018).unwrap();
        let psnr_p = psnr(&original_pixels, &decode_to_pixels(&marked_p)).unwrap();
        let psnr_l = psnr(&original_pixels, &decode_to_pixels(&marked_l)).unwrap();
        assert!(
            psnr_p >= psnr_l,
            "{}: proposed {psnr_p} dB < liu {psnr_l} dB",
            e.name
        );
    }
}

#[test]
fn color_images_embed_and_extract() {
    // Build a color JPEG through the codec test path: parse a serialized
    // synthetic 4:2:0 image, embed across all components, recover.
    use jrdh_core::jpeg::tables as t;
    use jrdh_core::jpeg::{
        ComponentPlane, FrameComponent, FrameInfo, HuffmanSpec, QuantTable, ScanComponent, ScanInfo,
    };
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    let mut rng = ChaCha20Rng::seed_from_u64(77);
    let mut planes = Vec::new();
    for (bw, bh) in [(16, 16), (8, 8), (8, 8)] {
        let mut plane = ComponentPlane::new(bw, bh);
        for block in plane.blocks.iter_mut() {
            block.coeffs[0] = rng.gen_range(-100..=100);
            for k in 1..64 {
                if rng.gen_bool(0.25) {
                    let mag: i16 = rng.gen_range(1..=80);
                    block.coeffs[k] = if rng.gen_bool(0.5) { mag } else { -mag };
                }
            }
        }
        planes.push(plane);
    }
    let mut quant_tables: [Option<QuantTable>; 4] = Default::default();
    quant_tables[0] = Some(QuantTable { values: [10; 64] });
    quant_tables[1] = Some(QuantTable { values: [18; 64] });
    let mut dc_tables: [Option<HuffmanSpec>; 4] = Default::default();
    dc_tables[0] = Some(t::default_luma_dc());
    dc_tables[1] = Some(t::default_chroma_dc());
    let mut ac_tables: [Option<HuffmanSpec>; 4] = Default::default();
    ac_tables[0] = Some(t::default_luma_ac());
    ac_tables[1] = Some(t::default_chroma_ac());
    let img = JpegImage {
        frame: FrameInfo {
            precision: 8,
            width: 128,
            height: 128,
            components: vec![
                FrameComponent {
                    id: 1,
                    h_sampling: 2,
                    v_sampling: 2,
                    quant_table: 0,
                },
                FrameComponent {
                    id: 2,
                    h_sampling: 1,
                    v_sampling: 1,
                    quant_table: 1,
                },
                FrameComponent {
                    id: 3,
                    h_sampling: 1,
                    v_sampling: 1,
                    quant_table: 1,
                },
            ],
        },
        quant_tables,
        dc_tables,
        ac_tables,
        restart_interval: 0,
        scan: ScanInfo {
            components: vec![
                ScanComponent {
                    component: 0,
                    dc_table: 0,
                    ac_table: 0,
                },
                ScanComponent {
                    component: 1,
                    dc_table: 1,
                    ac_table: 1,
                },
                ScanComponent {
                    component: 2,
                    dc_table: 1,
                    ac_table: 1,
                },
            ],
        },
        coefficients: planes,
        app_segments: vec![],
    };
    let canonical =
        parse_jpeg(&serialize_jpeg(&img, TablePolicy::RebuildOptimal).unwrap()).unwrap();

    for scheme in SchemeId::ALL {
        let payload = random_payload(max_payload(&canonical, scheme) as usize, 5);
        let (marked, report) = embed_image(canonical.clone(), &payload, scheme).unwrap();
        assert_eq!(report.bits_embedded, capacity(&canonical, scheme));
        let bytes = serialize_jpeg(&marked, TablePolicy::RebuildOptimal).unwrap();
        let (extracted, recovered) = extract_image(parse_jpeg(&bytes).unwrap(), scheme).unwrap();
        assert_eq!(extracted, payload, "{scheme}");
        assert_eq!(recovered.coefficients, canonical.coefficients);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn random_payload_round_trips_through_all_schemes(len_frac in 0.0f64..1.0, seed in any::<u64>()) {
        let e = common::corpus().iter().find(|e| e.name == "shapes" && e.qf == 50).unwrap();
        for scheme in SchemeId::ALL {
            let cap = max_payload(&e.image, scheme);
            let bits = (cap as f64 * len_frac) as usize;
            let payload = random_payload(bits, seed);
            let (marked, _) = embed_image(e.image.clone(), &payload, scheme).unwrap();
            let (extracted, recovered) = extract_image(marked, scheme).unwrap();
            prop_assert_eq!(extracted, payload);
            prop_assert_eq!(&recovered.coefficients, &e.image.coefficients);
        }
    }

    #[test]
    fn arbitrary_bit_patterns_round_trip(bits in proptest::collection::vec(any::<bool>(), 0..600)) {
        let e = common::corpus().iter().find(|e| e.name == "mixed" && e.qf == 70).unwrap();
        let payload = BitSeq::from_bits(bits);
        for scheme in SchemeId::ALL {
            let (marked, _) = embed_image(e.image.clone(), &payload, scheme).unwrap();
            let (extracted, recovered) = extract_image(marked, scheme).unwrap();
            prop_assert_eq!(&extracted, &payload);
            prop_assert_eq!(&recovered.coefficients, &e.image.coefficients);
        }
    }
}
