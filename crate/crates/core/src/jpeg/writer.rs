//! Serialization of a [`JpegImage`] back to a standard baseline bitstream.
//!
//! The segment layout is canonical and deterministic: SOI, preserved
//! APPn/COM segments, DQT per referenced table id ascending, SOF0, DHT per
//! referenced id (DC then AC), DRI when a restart interval is set, SOS,
//! entropy data, EOI. A file produced here re-serializes byte-identically
//! after a parse round-trip.

use super::huffman::Encoder;
use super::scan::{encode_scan, gather_frequencies};
use super::{marker, Error, HuffmanSpec, JpegImage};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TablePolicy {
    /// Re-use the Huffman tables carried by the image; fails with
    /// `MissingCode` if a needed symbol has no code.
    PreserveOriginal,
    /// Compute optimal Huffman tables from the actual symbol statistics
    /// (two-pass encoding).
    #[default]
    RebuildOptimal,
}

pub fn serialize_jpeg(image: &JpegImage, policy: TablePolicy) -> Result<Vec<u8>, Error> {
    validate_model(image)?;

    let (dc_specs, ac_specs, assignments) = match policy {
        TablePolicy::PreserveOriginal => {
            let assignments: Vec<(u8, u8)> = image
                .scan
                .components
                .iter()
                .map(|sc| (sc.dc_table, sc.ac_table))
                .collect();
            (
                image.dc_tables.clone(),
                image.ac_tables.clone(),
                assignments,
            )
        }
        TablePolicy::RebuildOptimal => {
            // Component 0 gets table id 0, all others share id 1.
            let assignments: Vec<(u8, u8)> = image
                .scan
                .components
                .iter()
                .map(|sc| if sc.component == 0 { (0, 0) } else { (1, 1) })
                .collect();
            let (dc_freq, ac_freq) = gather_frequencies(image, &assignments)?;
            let mut dc_specs: [Option<HuffmanSpec>; 4] = Default::default();
            let mut ac_specs: [Option<HuffmanSpec>; 4] = Default::default();
            for id in 0..4 {
                dc_specs[id] = dc_freq[id].build_optimal();
                ac_specs[id] = ac_freq[id].build_optimal();
            }
            (dc_specs, ac_specs, assignments)
        }
    };

    let mut dc_encoders: [Option<Encoder>; 4] = Default::default();
    let mut ac_encoders: [Option<Encoder>; 4] = Default::default();
    for &(dc_id, ac_id) in &assignments {
        let dc_spec = dc_specs[dc_id as usize]
            .as_ref()
            .ok_or(model_error(format!(
                "scan references undefined DC table {dc_id}"
            )))?;
        let ac_spec = ac_specs[ac_id as usize]
            .as_ref()
            .ok_or(model_error(format!(
                "scan references undefined AC table {ac_id}"
            )))?;
        dc_encoders[dc_id as usize].get_or_insert_with(|| Encoder::new(dc_spec));
        ac_encoders[ac_id as usize].get_or_insert_with(|| Encoder::new(ac_spec));
    }

    let scan_data = encode_scan(image, &assignments, &dc_encoders, &ac_encoders)?;

    let mut out = Vec::with_capacity(scan_data.len() + 1024);
    out.extend_from_slice(&[0xFF, marker::SOI]);

    for seg in &image.app_segments {
        push_segment(&mut out, seg.marker, &seg.data)?;
    }

    for id in 0..4u8 {
        if !image.frame.components.iter().any(|c| c.quant_table == id) {
            continue;
        }
        let table = image.quant_tables[id as usize]
            .as_ref()
            .ok_or(model_error(format!(
                "component references undefined quant table {id}"
            )))?;
        let wide = table.values.iter().any(|&v| v > 255);
        let mut payload = Vec::with_capacity(1 + 64 * if wide { 2 } else { 1 });
        payload.push(u8::from(wide) << 4 | id);
        for &v in &table.values {
            if wide {
                payload.push((v >> 8) as u8);
            }
            payload.push(v as u8);
        }
        push_segment(&mut out, marker::DQT, &payload)?;
    }

    {
        let f = &image.frame;
        let mut payload = Vec::with_capacity(6 + 3 * f.components.len());
        payload.push(f.precision);
        payload.extend_from_slice(&f.height.to_be_bytes());
        payload.extend_from_slice(&f.width.to_be_bytes());
        payload.push(f.components.len() as u8);
        for c in &f.components {
            payload.push(c.id);
            payload.push(c.h_sampling << 4 | c.v_sampling);
            payload.push(c.quant_table);
        }
        push_segment(&mut out, marker::SOF0, &payload)?;
    }

    for id in 0..4u8 {
        for (class_bit, specs, used) in [
            (0u8, &dc_specs, assignments.iter().any(|a| a.0 == id)),
            (1u8, &ac_specs, assignments.iter().any(|a| a.1 == id)),
        ] {
            if !used {
                continue;
            }
            // Presence was validated when the encoders were built.
            let spec = specs[id as usize].as_ref().unwrap();
            let mut payload = Vec::with_capacity(17 + spec.symbols.len());
            payload.push(class_bit << 4 | id);
            payload.extend_from_slice(&spec.counts);
            payload.extend_from_slice(&spec.symbols);
            push_segment(&mut out, marker::DHT, &payload)?;
        }
    }

    if image.restart_interval > 0 {
        if image.restart_interval > u16::MAX as u32 {
            return Err(model_error(format!(
                "restart interval {} exceeds the DRI field range",
                image.restart_interval
            )));
        }
        push_segment(
            &mut out,
            marker::DRI,
            &(image.restart_interval as u16).to_be_bytes(),
        )?;
    }

    {
        let mut payload = Vec::with_capacity(4 + 2 * image.scan.components.len());
        payload.push(image.scan.components.len() as u8);
        for (sc, &(dc_id, ac_id)) in image.scan.components.iter().zip(&assignments) {
            payload.push(image.frame.components[sc.component].id);
            payload.push(dc_id << 4 | ac_id);
        }
        payload.extend_from_slice(&[0, 63, 0]);
        push_segment(&mut out, marker::SOS, &payload)?;
    }

    out.extend_from_slice(&scan_data);
    out.extend_from_slice(&[0xFF, marker::EOI]);
    Ok(out)
}

fn model_error(detail: String) -> Error {
    Error::MarkerSyntax { offset: 0, detail }
}

fn push_segment(out: &mut Vec<u8>, m: u8, payload: &[u8]) -> Result<(), Error> {
    if payload.len() + 2 > u16::MAX as usize {
        return Err(model_error(format!(
            "{} segment payload of {} bytes does not fit",
            marker::name(m),
            payload.len()
        )));
    }
    out.extend_from_slice(&[0xFF, m]);
    out.extend_from_slice(&((payload.len() + 2) as u16).to_be_bytes());
    out.extend_from_slice(payload);
    Ok(())
}

fn validate_model(image: &JpegImage) -> Result<(), Error> {
    let f = &image.frame;
    if f.precision != 8 {
        return Err(model_error(format!(
            "{}-bit precision is not baseline",
            f.precision
        )));
    }
    if f.width == 0 || f.height == 0 {
        return Err(model_error("zero frame dimension".into()));
    }
    if f.components.is_empty() || image.scan.components.len() != f.components.len() {
        return Err(model_error(
            "scan must cover every frame component exactly once".into(),
        ));
    }
    let mut seen = vec![false; f.components.len()];
    for sc in &image.scan.components {
        if sc.component >= f.components.len() || seen[sc.component] {
            return Err(model_error("invalid scan component mapping".into()));
        }
        seen[sc.component] = true;
    }
    if image.coefficients.len() != f.components.len() {
        return Err(model_error("coefficient plane count mismatch".into()));
    }
    for idx in 0..f.components.len() {
        let want = image.coded_block_extent(idx);
        let plane = &image.coefficients[idx];
        if (plane.blocks_wide, plane.blocks_high) != want || plane.blocks.len() != want.0 * want.1 {
            return Err(model_error(format!(
                "component {idx} coefficient grid is {}x{}, expected {}x{}",
                plane.blocks_wide, plane.blocks_high, want.0, want.1
            )));
        }
    }
    Ok(())
}
