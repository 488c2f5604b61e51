//! Baseline JPEG bitstream parsing down to quantized coefficients.

use super::scan::decode_scan;
use super::{
    marker, AppSegment, Error, FrameComponent, FrameInfo, HuffmanSpec, JpegImage, QuantTable,
    ScanComponent, ScanInfo,
};

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn u8(&mut self) -> Result<u8, Error> {
        let b = *self
            .data
            .get(self.pos)
            .ok_or(Error::TruncatedStream { offset: self.pos })?;
        self.pos += 1;
        Ok(b)
    }

    fn u16(&mut self) -> Result<u16, Error> {
        let hi = self.u8()? as u16;
        let lo = self.u8()? as u16;
        Ok((hi << 8) | lo)
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], Error> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.data.len());
        match end {
            Some(end) => {
                let s = &self.data[self.pos..end];
                self.pos = end;
                Ok(s)
            }
            None => Err(Error::TruncatedStream {
                offset: self.data.len(),
            }),
        }
    }

    /// Reads the next marker byte, skipping any 0xFF fill bytes.
    /// Returns (marker, offset of the 0xFF that introduced it).
    fn marker(&mut self) -> Result<(u8, usize), Error> {
        let start = self.pos;
        if self.u8()? != 0xFF {
            return Err(Error::MarkerSyntax {
                offset: start,
                detail: "expected marker".into(),
            });
        }
        let mut m = self.u8()?;
        while m == 0xFF {
            m = self.u8()?;
        }
        if m == 0x00 {
            return Err(Error::MarkerSyntax {
                offset: start,
                detail: "stuffed byte where a marker was expected".into(),
            });
        }
        Ok((m, start))
    }

    /// Reads a segment length field and returns the payload span.
    fn segment(&mut self) -> Result<&'a [u8], Error> {
        let at = self.pos;
        let len = self.u16()? as usize;
        if len < 2 {
            return Err(Error::MarkerSyntax {
                offset: at,
                detail: format!("segment length {len} < 2"),
            });
        }
        self.take(len - 2)
    }
}

pub fn parse_jpeg(bytes: &[u8]) -> Result<JpegImage, Error> {
    let mut cur = Cursor {
        data: bytes,
        pos: 0,
    };
    if bytes.len() < 2 || bytes[0] != 0xFF || bytes[1] != marker::SOI {
        return Err(Error::MarkerSyntax {
            offset: 0,
            detail: "missing SOI marker".into(),
        });
    }
    cur.pos = 2;

    let mut frame: Option<FrameInfo> = None;
    let mut quant_tables: [Option<QuantTable>; 4] = Default::default();
    let mut dc_tables: [Option<HuffmanSpec>; 4] = Default::default();
    let mut ac_tables: [Option<HuffmanSpec>; 4] = Default::default();
    let mut restart_interval = 0u32;
    let mut app_segments = Vec::new();
    let mut parsed_scan: Option<(ScanInfo, Vec<super::ComponentPlane>)> = None;

    loop {
        let (m, at) = cur.marker()?;
        match m {
            marker::EOI => break,
            m if marker::is_app(m) || m == marker::COM => {
                let data = cur.segment()?.to_vec();
                app_segments.push(AppSegment { marker: m, data });
            }
            marker::DQT => {
                let seg = cur.segment()?;
                parse_dqt(seg, at, &mut quant_tables)?;
            }
            marker::DHT => {
                let seg = cur.segment()?;
                parse_dht(seg, at, &mut dc_tables, &mut ac_tables)?;
            }
            marker::DRI => {
                let seg = cur.segment()?;
                if seg.len() != 2 {
                    return Err(Error::MarkerSyntax {
                        offset: at,
                        detail: format!("DRI payload length {} != 2", seg.len()),
                    });
                }
                restart_interval = u32::from(seg[0]) << 8 | u32::from(seg[1]);
            }
            marker::SOF0 => {
                if frame.is_some() {
                    return Err(Error::MarkerSyntax {
                        offset: at,
                        detail: "second SOF0 marker".into(),
                    });
                }
                let seg = cur.segment()?;
                frame = Some(parse_sof0(seg, at)?);
            }
            m if marker::is_unsupported_sof(m) => {
                return Err(Error::UnsupportedFormat {
                    offset: at,
                    detail: format!(
                        "{} frame (only baseline sequential SOF0 is supported)",
                        marker::name(m)
                    ),
                });
            }
            marker::DAC => {
                return Err(Error::UnsupportedFormat {
                    offset: at,
                    detail: "arithmetic coding conditioning (DAC)".into(),
                });
            }
            marker::DNL => {
                return Err(Error::UnsupportedFormat {
                    offset: at,
                    detail: "DNL-defined number of lines".into(),
                });
            }
            marker::SOS => {
                if parsed_scan.is_some() {
                    return Err(Error::UnsupportedFormat {
                        offset: at,
                        detail: "multiple scans (only single-scan baseline is supported)".into(),
                    });
                }
                let frame = frame.as_ref().ok_or(Error::MarkerSyntax {
                    offset: at,
                    detail: "SOS before SOF0".into(),
                })?;
                let seg = cur.segment()?;
                let scan = parse_sos(seg, at, frame)?;
                for sc in &scan.components {
                    if dc_tables[sc.dc_table as usize].is_none() {
                        return Err(Error::MarkerSyntax {
                            offset: at,
                            detail: format!("scan references undefined DC table {}", sc.dc_table),
                        });
                    }
                    if ac_tables[sc.ac_table as usize].is_none() {
                        return Err(Error::MarkerSyntax {
                            offset: at,
                            detail: format!("scan references undefined AC table {}", sc.ac_table),
                        });
                    }
                }
                let (planes, end) = decode_scan(
                    bytes,
                    cur.pos,
                    frame,
                    &scan,
                    &dc_tables,
                    &ac_tables,
                    restart_interval,
                )?;
                cur.pos = end;
                parsed_scan = Some((scan, planes));
            }
            other => {
                return Err(Error::MarkerSyntax {
                    offset: at,
                    detail: format!("unexpected {} marker", marker::name(other)),
                });
            }
        }
    }

    let frame = frame.ok_or(Error::MarkerSyntax {
        offset: bytes.len(),
        detail: "no SOF0 frame header".into(),
    })?;
    let (scan, coefficients) = parsed_scan.ok_or(Error::MarkerSyntax {
        offset: bytes.len(),
        detail: "no scan data".into(),
    })?;
    for c in &frame.components {
        if quant_tables[c.quant_table as usize].is_none() {
            return Err(Error::MarkerSyntax {
                offset: bytes.len(),
                detail: format!(
                    "component references undefined quant table {}",
                    c.quant_table
                ),
            });
        }
    }

    Ok(JpegImage {
        frame,
        quant_tables,
        dc_tables,
        ac_tables,
        restart_interval,
        scan,
        coefficients,
        app_segments,
    })
}

fn parse_dqt(seg: &[u8], at: usize, tables: &mut [Option<QuantTable>; 4]) -> Result<(), Error> {
    let mut i = 0usize;
    while i < seg.len() {
        let pq_tq = seg[i];
        let pq = pq_tq >> 4;
        let tq = (pq_tq & 0x0F) as usize;
        i += 1;
        if pq > 1 || tq > 3 {
            return Err(Error::MarkerSyntax {
                offset: at,
                detail: format!("invalid DQT precision/id byte 0x{pq_tq:02X}"),
            });
        }
        let entry_size = if pq == 1 { 2 } else { 1 };
        if i + 64 * entry_size > seg.len() {
            return Err(Error::MarkerSyntax {
                offset: at,
                detail: "DQT table data truncated".into(),
            });
        }
        let mut values = [0u16; 64];
        for v in values.iter_mut() {
            *v = if pq == 1 {
                let x = u16::from(seg[i]) << 8 | u16::from(seg[i + 1]);
                i += 2;
                x
            } else {
                let x = u16::from(seg[i]);
                i += 1;
                x
            };
            if *v == 0 {
                return Err(Error::MarkerSyntax {
                    offset: at,
                    detail: format!("quant table {tq} contains a zero divisor"),
                });
            }
        }
        tables[tq] = Some(QuantTable { values });
    }
    Ok(())
}

fn parse_dht(
    seg: &[u8],
    at: usize,
    dc: &mut [Option<HuffmanSpec>; 4],
    ac: &mut [Option<HuffmanSpec>; 4],
) -> Result<(), Error> {
    let mut i = 0usize;
    while i < seg.len() {
        let tc_th = seg[i];
        let tc = tc_th >> 4;
        let th = (tc_th & 0x0F) as usize;
        i += 1;
        if tc > 1 || th > 3 {
            return Err(Error::MarkerSyntax {
                offset: at,
                detail: format!("invalid DHT class/id byte 0x{tc_th:02X}"),
            });
        }
        if i + 16 > seg.len() {
            return Err(Error::MarkerSyntax {
                offset: at,
                detail: "DHT counts truncated".into(),
            });
        }
        let mut counts = [0u8; 16];
        counts.copy_from_slice(&seg[i..i + 16]);
        i += 16;
        let total: usize = counts.iter().map(|&c| c as usize).sum();
        if total > 256 {
            return Err(Error::MarkerSyntax {
                offset: at,
                detail: format!("DHT declares {total} symbols"),
            });
        }
        if i + total > seg.len() {
            return Err(Error::MarkerSyntax {
                offset: at,
                detail: "DHT symbols truncated".into(),
            });
        }
        let symbols = seg[i..i + total].to_vec();
        i += total;
        let spec = HuffmanSpec::new(counts, symbols);
        if tc == 0 {
            dc[th] = Some(spec);
        } else {
            ac[th] = Some(spec);
        }
    }
    Ok(())
}

fn parse_sof0(seg: &[u8], at: usize) -> Result<FrameInfo, Error> {
    if seg.len() < 6 {
        return Err(Error::MarkerSyntax {
            offset: at,
            detail: "SOF0 header too short".into(),
        });
    }
    let precision = seg[0];
    if precision != 8 {
        return Err(Error::UnsupportedFormat {
            offset: at,
            detail: format!("{precision}-bit sample precision"),
        });
    }
    let height = u16::from(seg[1]) << 8 | u16::from(seg[2]);
    let width = u16::from(seg[3]) << 8 | u16::from(seg[4]);
    if width == 0 || height == 0 {
        return Err(Error::UnsupportedFormat {
            offset: at,
            detail: "zero frame dimension (DNL-deferred height is not supported)".into(),
        });
    }
    let n = seg[5] as usize;
    if !(n == 1 || n == 3) {
        return Err(Error::UnsupportedFormat {
            offset: at,
            detail: format!("{n}-component frame (grayscale or YCbCr expected)"),
        });
    }
    if seg.len() != 6 + 3 * n {
        return Err(Error::MarkerSyntax {
            offset: at,
            detail: "SOF0 length inconsistent with component count".into(),
        });
    }
    let mut components = Vec::with_capacity(n);
    for k in 0..n {
        let id = seg[6 + 3 * k];
        let hv = seg[7 + 3 * k];
        let (h, v) = (hv >> 4, hv & 0x0F);
        let tq = seg[8 + 3 * k];
        if !(1..=4).contains(&h) || !(1..=4).contains(&v) {
            return Err(Error::MarkerSyntax {
                offset: at,
                detail: format!("component {id} has invalid sampling factors {h}x{v}"),
            });
        }
        if tq > 3 {
            return Err(Error::MarkerSyntax {
                offset: at,
                detail: format!("component {id} references invalid quant table {tq}"),
            });
        }
        if components.iter().any(|c: &FrameComponent| c.id == id) {
            return Err(Error::MarkerSyntax {
                offset: at,
                detail: format!("duplicate component id {id}"),
            });
        }
        components.push(FrameComponent {
            id,
            h_sampling: h,
            v_sampling: v,
            quant_table: tq,
        });
    }
    Ok(FrameInfo {
        precision,
        width,
        height,
        components,
    })
}

fn parse_sos(seg: &[u8], at: usize, frame: &FrameInfo) -> Result<ScanInfo, Error> {
    if seg.is_empty() {
        return Err(Error::MarkerSyntax {
            offset: at,
            detail: "empty SOS header".into(),
        });
    }
    let ns = seg[0] as usize;
    if seg.len() != 1 + 2 * ns + 3 {
        return Err(Error::MarkerSyntax {
            offset: at,
            detail: "SOS length inconsistent with component count".into(),
        });
    }
    if ns != frame.components.len() {
        return Err(Error::UnsupportedFormat {
            offset: at,
            detail: format!(
                "scan covers {ns} of {} components (only full single scans are supported)",
                frame.components.len()
            ),
        });
    }
    let mut components = Vec::with_capacity(ns);
    for k in 0..ns {
        let cs = seg[1 + 2 * k];
        let td_ta = seg[2 + 2 * k];
        let (td, ta) = (td_ta >> 4, td_ta & 0x0F);
        let component = frame
            .components
            .iter()
            .position(|c| c.id == cs)
            .ok_or_else(|| Error::MarkerSyntax {
                offset: at,
                detail: format!("scan references unknown component id {cs}"),
            })?;
        if td > 3 || ta > 3 {
            return Err(Error::MarkerSyntax {
                offset: at,
                detail: format!("invalid Huffman table selectors {td}/{ta}"),
            });
        }
        if components
            .iter()
            .any(|sc: &ScanComponent| sc.component == component)
        {
            return Err(Error::MarkerSyntax {
                offset: at,
                detail: format!("component id {cs} appears twice in scan"),
            });
        }
        components.push(ScanComponent {
            component,
            dc_table: td,
            ac_table: ta,
        });
    }
    let (ss, se, ah_al) = (seg[1 + 2 * ns], seg[2 + 2 * ns], seg[3 + 2 * ns]);
    if ss != 0 || se != 63 || ah_al != 0 {
        return Err(Error::UnsupportedFormat {
            offset: at,
            detail: format!("non-baseline spectral selection Ss={ss} Se={se} AhAl={ah_al:#04X}"),
        });
    }
    Ok(ScanInfo { components })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_missing_soi() {
        let err = parse_jpeg(&[0x00, 0x01, 0x02]).unwrap_err();
        assert!(matches!(err, Error::MarkerSyntax { offset: 0, .. }));
    }

    #[test]
    fn rejects_progressive_sof2() {
        // SOI + SOF2 header stub.
        let bytes = [
            0xFF, 0xD8, 0xFF, 0xC2, 0x00, 0x0B, 0x08, 0x00, 0x10, 0x00, 0x10, 0x01, 0x01, 0x11,
            0x00,
        ];
        let err = parse_jpeg(&bytes).unwrap_err();
        match err {
            Error::UnsupportedFormat { offset, detail } => {
                assert_eq!(offset, 2);
                assert!(detail.contains("SOF2"), "{detail}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_truncated_segment() {
        let bytes = [0xFF, 0xD8, 0xFF, 0xDB, 0x00, 0x45, 0x00];
        let err = parse_jpeg(&bytes).unwrap_err();
        assert!(matches!(err, Error::TruncatedStream { .. }));
    }

    #[test]
    fn rejects_zero_quant_divisor() {
        let mut bytes = vec![0xFF, 0xD8, 0xFF, 0xDB, 0x00, 0x43, 0x00];
        bytes.extend([0u8; 64]);
        let err = parse_jpeg(&bytes).unwrap_err();
        assert!(matches!(err, Error::MarkerSyntax { .. }));
    }
}
