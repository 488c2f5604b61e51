//! Entropy-coded scan decode and encode.
//!
//! The encoder side is split into a symbol-event traversal shared by the
//! frequency-gathering pass (for optimal table generation) and the bit-emit
//! pass, so both see the identical symbol stream, DC predictions, and
//! restart resets.

use super::bitio::{BitReader, BitWriter};
use super::huffman::{category, extend, magnitude_bits, Decoder, Encoder, FrequencyTable};
use super::{
    ceil_div, CoeffBlock, ComponentPlane, Error, FrameInfo, HuffmanSpec, JpegImage, ScanInfo,
    MAX_AC_MAGNITUDE, MAX_DC_DIFF_MAGNITUDE,
};

/// Coefficient-grid extent of a component as entropy-coded: MCU-padded for
/// interleaved scans, block-padded for single-component scans.
pub(crate) fn coded_extent(frame: &FrameInfo, interleaved: bool, idx: usize) -> (usize, usize) {
    let c = &frame.components[idx];
    if interleaved {
        (
            frame.mcus_wide() * c.h_sampling as usize,
            frame.mcus_high() * c.v_sampling as usize,
        )
    } else {
        let (w, h) = frame.component_size(idx);
        (ceil_div(w, 8), ceil_div(h, 8))
    }
}

fn mcu_count(frame: &FrameInfo, scan: &ScanInfo) -> usize {
    if scan.is_interleaved() {
        frame.mcus_wide() * frame.mcus_high()
    } else {
        let (bw, bh) = coded_extent(frame, false, scan.components[0].component);
        bw * bh
    }
}

pub fn decode_scan(
    bytes: &[u8],
    start: usize,
    frame: &FrameInfo,
    scan: &ScanInfo,
    dc_tables: &[Option<HuffmanSpec>; 4],
    ac_tables: &[Option<HuffmanSpec>; 4],
    restart_interval: u32,
) -> Result<(Vec<ComponentPlane>, usize), Error> {
    let interleaved = scan.is_interleaved();
    let mut planes: Vec<ComponentPlane> = (0..frame.components.len())
        .map(|i| {
            let (bw, bh) = coded_extent(frame, interleaved, i);
            ComponentPlane::new(bw, bh)
        })
        .collect();

    let dc_decoders: Vec<Decoder> = scan
        .components
        .iter()
        .map(|sc| Decoder::new(dc_tables[sc.dc_table as usize].as_ref().unwrap()))
        .collect();
    let ac_decoders: Vec<Decoder> = scan
        .components
        .iter()
        .map(|sc| Decoder::new(ac_tables[sc.ac_table as usize].as_ref().unwrap()))
        .collect();

    let mut preds = vec![0i32; scan.components.len()];
    let mut reader = BitReader::new(bytes, start);
    let mcus = mcu_count(frame, scan);
    let interval = restart_interval as usize;
    let mut rst_index = 0u8;

    for mcu in 0..mcus {
        if interval > 0 && mcu > 0 && mcu % interval == 0 {
            reader.expect_restart(rst_index)?;
            rst_index = (rst_index + 1) & 7;
            preds.iter_mut().for_each(|p| *p = 0);
        }
        for (si, sc) in scan.components.iter().enumerate() {
            let comp = &frame.components[sc.component];
            let (reps_h, reps_v) = if interleaved {
                (comp.h_sampling as usize, comp.v_sampling as usize)
            } else {
                (1, 1)
            };
            for v in 0..reps_v {
                for h in 0..reps_h {
                    let block = decode_block(
                        &mut reader,
                        &dc_decoders[si],
                        &ac_decoders[si],
                        &mut preds[si],
                    )?;
                    let plane = &mut planes[sc.component];
                    let (bx, by) = if interleaved {
                        let mcu_x = mcu % frame.mcus_wide();
                        let mcu_y = mcu / frame.mcus_wide();
                        (
                            mcu_x * comp.h_sampling as usize + h,
                            mcu_y * comp.v_sampling as usize + v,
                        )
                    } else {
                        (mcu % plane.blocks_wide, mcu / plane.blocks_wide)
                    };
                    *plane.block_mut(bx, by) = block;
                }
            }
        }
    }

    let end = reader.finish()?;
    Ok((planes, end))
}

fn decode_block(
    reader: &mut BitReader,
    dc: &Decoder,
    ac: &Decoder,
    pred: &mut i32,
) -> Result<CoeffBlock, Error> {
    let mut block = CoeffBlock::ZERO;

    let cat = dc.decode(reader)?;
    if cat > 11 {
        return Err(Error::MarkerSyntax {
            offset: reader.offset(),
            detail: format!("DC size category {cat} exceeds the baseline limit"),
        });
    }
    let diff = if cat == 0 {
        0
    } else {
        extend(reader.read_bits(cat)?, cat)
    };
    *pred += diff;
    if *pred < i16::MIN as i32 || *pred > i16::MAX as i32 {
        return Err(Error::MarkerSyntax {
            offset: reader.offset(),
            detail: format!("DC value {pred} out of range"),
        });
    }
    block.coeffs[0] = *pred as i16;

    let mut k = 1usize;
    while k < 64 {
        let sym = ac.decode(reader)?;
        let run = (sym >> 4) as usize;
        let cat = sym & 0x0F;
        if cat == 0 {
            if sym == 0x00 {
                break; // EOB
            }
            if sym == 0xF0 {
                k += 16;
                if k > 64 {
                    return Err(Error::MarkerSyntax {
                        offset: reader.offset(),
                        detail: "ZRL overruns block".into(),
                    });
                }
                continue;
            }
            return Err(Error::MarkerSyntax {
                offset: reader.offset(),
                detail: format!("invalid AC symbol 0x{sym:02X}"),
            });
        }
        if cat > 10 {
            return Err(Error::MarkerSyntax {
                offset: reader.offset(),
                detail: format!("AC size category {cat} exceeds the baseline limit"),
            });
        }
        k += run;
        if k > 63 {
            return Err(Error::MarkerSyntax {
                offset: reader.offset(),
                detail: "AC run overruns block".into(),
            });
        }
        block.coeffs[k] = extend(reader.read_bits(cat)?, cat) as i16;
        k += 1;
    }

    Ok(block)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum TableClass {
    Dc,
    Ac,
}

impl TableClass {
    fn name(self) -> &'static str {
        match self {
            TableClass::Dc => "DC",
            TableClass::Ac => "AC",
        }
    }
}

pub(crate) enum ScanEvent {
    Restart(u8),
    Symbol {
        class: TableClass,
        table: u8,
        symbol: u8,
        extra: u32,
        extra_len: u8,
    },
}

/// Walks the scan in entropy-coding order and feeds every restart marker and
/// Huffman symbol (with its appended magnitude bits) to `f`.
/// `assignments` gives the (DC, AC) table ids per scan component.
pub(crate) fn visit_scan_events<F>(
    image: &JpegImage,
    assignments: &[(u8, u8)],
    mut f: F,
) -> Result<(), Error>
where
    F: FnMut(ScanEvent) -> Result<(), Error>,
{
    let frame = &image.frame;
    let scan = &image.scan;
    let interleaved = scan.is_interleaved();
    let mut preds = vec![0i32; scan.components.len()];
    let mcus = mcu_count(frame, scan);
    let interval = image.restart_interval as usize;
    let mut rst_index = 0u8;

    for mcu in 0..mcus {
        if interval > 0 && mcu > 0 && mcu % interval == 0 {
            f(ScanEvent::Restart(rst_index))?;
            rst_index = (rst_index + 1) & 7;
            preds.iter_mut().for_each(|p| *p = 0);
        }
        for (si, sc) in scan.components.iter().enumerate() {
            let comp = &frame.components[sc.component];
            let plane = &image.coefficients[sc.component];
            let (reps_h, reps_v) = if interleaved {
                (comp.h_sampling as usize, comp.v_sampling as usize)
            } else {
                (1, 1)
            };
            for v in 0..reps_v {
                for h in 0..reps_h {
                    let (bx, by) = if interleaved {
                        let mcu_x = mcu % frame.mcus_wide();
                        let mcu_y = mcu / frame.mcus_wide();
                        (
                            mcu_x * comp.h_sampling as usize + h,
                            mcu_y * comp.v_sampling as usize + v,
                        )
                    } else {
                        (mcu % plane.blocks_wide, mcu / plane.blocks_wide)
                    };
                    let block_index = by * plane.blocks_wide + bx;
                    emit_block_events(
                        plane.block(bx, by),
                        sc.component,
                        block_index,
                        assignments[si],
                        &mut preds[si],
                        &mut f,
                    )?;
                }
            }
        }
    }
    Ok(())
}

fn emit_block_events<F>(
    block: &CoeffBlock,
    component: usize,
    block_index: usize,
    (dc_table, ac_table): (u8, u8),
    pred: &mut i32,
    f: &mut F,
) -> Result<(), Error>
where
    F: FnMut(ScanEvent) -> Result<(), Error>,
{
    let dc = block.coeffs[0] as i32;
    let diff = dc - *pred;
    *pred = dc;
    if diff.abs() > MAX_DC_DIFF_MAGNITUDE {
        return Err(Error::CategoryOverflow {
            component,
            block: block_index,
            index: 0,
            value: diff,
        });
    }
    let cat = category(diff);
    f(ScanEvent::Symbol {
        class: TableClass::Dc,
        table: dc_table,
        symbol: cat,
        extra: magnitude_bits(diff, cat),
        extra_len: cat,
    })?;

    let mut run = 0u32;
    for k in 1..64 {
        let v = block.coeffs[k] as i32;
        if v == 0 {
            run += 1;
            continue;
        }
        if v.abs() > MAX_AC_MAGNITUDE {
            return Err(Error::CategoryOverflow {
                component,
                block: block_index,
                index: k,
                value: v,
            });
        }
        while run > 15 {
            f(ScanEvent::Symbol {
                class: TableClass::Ac,
                table: ac_table,
                symbol: 0xF0,
                extra: 0,
                extra_len: 0,
            })?;
            run -= 16;
        }
        let cat = category(v);
        f(ScanEvent::Symbol {
            class: TableClass::Ac,
            table: ac_table,
            symbol: ((run as u8) << 4) | cat,
            extra: magnitude_bits(v, cat),
            extra_len: cat,
        })?;
        run = 0;
    }
    if run > 0 {
        f(ScanEvent::Symbol {
            class: TableClass::Ac,
            table: ac_table,
            symbol: 0x00,
            extra: 0,
            extra_len: 0,
        })?;
    }
    Ok(())
}

/// Entropy-encodes the scan with the given per-component table assignments.
pub fn encode_scan(
    image: &JpegImage,
    assignments: &[(u8, u8)],
    dc_encoders: &[Option<Encoder>; 4],
    ac_encoders: &[Option<Encoder>; 4],
) -> Result<Vec<u8>, Error> {
    let mut writer = BitWriter::new();
    visit_scan_events(image, assignments, |ev| match ev {
        ScanEvent::Restart(i) => {
            writer.write_restart(i);
            Ok(())
        }
        ScanEvent::Symbol {
            class,
            table,
            symbol,
            extra,
            extra_len,
        } => {
            let enc = match class {
                TableClass::Dc => dc_encoders[table as usize].as_ref(),
                TableClass::Ac => ac_encoders[table as usize].as_ref(),
            }
            .ok_or(Error::MissingCode {
                class: class.name(),
                table,
                symbol,
            })?;
            enc.write(&mut writer, symbol, class.name(), table)?;
            writer.write_bits(extra, extra_len);
            Ok(())
        }
    })?;
    Ok(writer.finish())
}

/// First pass of two-pass optimal encoding: per-table symbol statistics.
pub fn gather_frequencies(
    image: &JpegImage,
    assignments: &[(u8, u8)],
) -> Result<([FrequencyTable; 4], [FrequencyTable; 4]), Error> {
    let mut dc_freq: [FrequencyTable; 4] = Default::default();
    let mut ac_freq: [FrequencyTable; 4] = Default::default();
    visit_scan_events(image, assignments, |ev| {
        if let ScanEvent::Symbol {
            class,
            table,
            symbol,
            ..
        } = ev
        {
            match class {
                TableClass::Dc => dc_freq[table as usize].record(symbol),
                TableClass::Ac => ac_freq[table as usize].record(symbol),
            }
        }
        Ok(())
    })?;
    Ok((dc_freq, ac_freq))
}
