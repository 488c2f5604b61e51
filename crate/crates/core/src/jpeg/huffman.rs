//! Huffman coding for baseline JPEG: canonical code construction from DHT
//! definitions (Annex C), symbol decode (Annex F), and optimal table
//! generation from symbol statistics (Annex K.2).

use super::bitio::{BitReader, BitWriter};
use super::{Error, HuffmanSpec};

/// Size category of a coefficient or DC difference: the number of magnitude
/// bits appended after the Huffman-coded symbol.
pub fn category(v: i32) -> u8 {
    (32 - v.unsigned_abs().leading_zeros()) as u8
}

/// The magnitude bits for `v` in category `cat` (T.81 F.1.2.1: negative
/// values are stored as v - 1 in `cat` low bits).
pub fn magnitude_bits(v: i32, cat: u8) -> u32 {
    if v >= 0 {
        v as u32
    } else {
        (v - 1) as u32 & ((1u32 << cat) - 1)
    }
}

/// Inverse of `magnitude_bits` (T.81 F.2.2.1 EXTEND).
pub fn extend(bits: u32, cat: u8) -> i32 {
    if cat == 0 {
        0
    } else if bits < (1 << (cat - 1)) {
        bits as i32 - (1 << cat) + 1
    } else {
        bits as i32
    }
}

/// Symbol decoder built from a DHT definition (T.81 F.2.2.3 DECODE, using
/// MINCODE/MAXCODE/VALPTR).
pub struct Decoder {
    mincode: [i32; 17],
    maxcode: [i32; 17],
    valptr: [usize; 17],
    values: Vec<u8>,
}

impl Decoder {
    pub fn new(spec: &HuffmanSpec) -> Decoder {
        let mut mincode = [0i32; 17];
        let mut maxcode = [-1i32; 17];
        let mut valptr = [0usize; 17];
        let mut code = 0i32;
        let mut k = 0usize;
        for len in 1..=16 {
            let count = spec.counts[len - 1] as usize;
            if count > 0 {
                valptr[len] = k;
                mincode[len] = code;
                code += count as i32;
                k += count;
                maxcode[len] = code - 1;
            }
            code <<= 1;
        }
        Decoder {
            mincode,
            maxcode,
            valptr,
            values: spec.symbols.clone(),
        }
    }

    pub fn decode(&self, reader: &mut BitReader) -> Result<u8, Error> {
        let mut code = 0i32;
        for len in 1..=16 {
            code = (code << 1) | reader.read_bit()? as i32;
            if code <= self.maxcode[len] {
                let idx = self.valptr[len] + (code - self.mincode[len]) as usize;
                return self
                    .values
                    .get(idx)
                    .copied()
                    .ok_or(Error::InvalidHuffmanCode {
                        offset: reader.offset(),
                    });
            }
        }
        Err(Error::InvalidHuffmanCode {
            offset: reader.offset(),
        })
    }
}

/// Symbol encoder: canonical (code, length) per symbol value.
pub struct Encoder {
    codes: [Option<(u16, u8)>; 256],
}

impl Encoder {
    pub fn new(spec: &HuffmanSpec) -> Encoder {
        let mut codes = [None; 256];
        let mut code = 0u16;
        let mut k = 0usize;
        for len in 1..=16u8 {
            for _ in 0..spec.counts[len as usize - 1] {
                codes[spec.symbols[k] as usize] = Some((code, len));
                code += 1;
                k += 1;
            }
            code <<= 1;
        }
        Encoder { codes }
    }

    pub fn write(
        &self,
        writer: &mut BitWriter,
        symbol: u8,
        class: &'static str,
        table: u8,
    ) -> Result<(), Error> {
        match self.codes[symbol as usize] {
            Some((code, len)) => {
                writer.write_bits(code as u32, len);
                Ok(())
            }
            None => Err(Error::MissingCode {
                class,
                table,
                symbol,
            }),
        }
    }

    pub fn has_code(&self, symbol: u8) -> bool {
        self.codes[symbol as usize].is_some()
    }
}

/// Accumulates symbol frequencies for one table, then builds an optimal
/// code per Annex K.2 (Figures K.1-K.4). Slot 256 is the reserved symbol
/// that keeps every real code shorter than all-ones.
#[derive(Clone)]
pub struct FrequencyTable {
    freq: [u32; 257],
}

impl Default for FrequencyTable {
    fn default() -> Self {
        FrequencyTable { freq: [0; 257] }
    }
}

impl FrequencyTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, symbol: u8) {
        self.freq[symbol as usize] += 1;
    }

    /// Builds the optimal table. Returns `None` when no symbols were
    /// recorded (the table is unused).
    pub fn build_optimal(&self) -> Option<HuffmanSpec> {
        if self.freq[..256].iter().all(|&f| f == 0) {
            return None;
        }
        let mut freq = self.freq;
        freq[256] = 1;

        let mut others = [-1i32; 257];
        let mut codesize = [0usize; 257];

        // Figure K.1: merge the two least-frequent entries until one remains.
        loop {
            let mut v1 = usize::MAX;
            let mut v1_min = u32::MAX;
            for (i, &f) in freq.iter().enumerate() {
                if f > 0 && f <= v1_min {
                    v1_min = f;
                    v1 = i;
                }
            }
            let mut v2 = usize::MAX;
            let mut v2_min = u32::MAX;
            for (i, &f) in freq.iter().enumerate() {
                if f > 0 && f <= v2_min && i != v1 {
                    v2_min = f;
                    v2 = i;
                }
            }
            if v2 == usize::MAX {
                break;
            }

            freq[v1] += freq[v2];
            freq[v2] = 0;

            codesize[v1] += 1;
            while others[v1] >= 0 {
                v1 = others[v1] as usize;
                codesize[v1] += 1;
            }
            others[v1] = v2 as i32;
            codesize[v2] += 1;
            while others[v2] >= 0 {
                v2 = others[v2] as usize;
                codesize[v2] += 1;
            }
        }

        // Figure K.2: count codes of each size.
        let mut bits = [0u8; 33];
        for &size in &codesize {
            if size > 0 {
                bits[size] += 1;
            }
        }

        // Figure K.3: limit code lengths to 16 bits.
        let mut i = 32;
        while i > 16 {
            while bits[i] > 0 {
                let mut j = i - 2;
                while bits[j] == 0 {
                    j -= 1;
                }
                bits[i] -= 2;
                bits[i - 1] += 1;
                bits[j + 1] += 2;
                bits[j] -= 1;
            }
            i -= 1;
        }
        while bits[i] == 0 {
            i -= 1;
        }
        // Remove the reserved symbol's code.
        bits[i] -= 1;

        // Figure K.4: symbols sorted by code size, then value.
        let mut symbols = Vec::new();
        for size in 1..=32 {
            for (value, &cs) in codesize.iter().take(256).enumerate() {
                if cs == size {
                    symbols.push(value as u8);
                }
            }
        }

        let mut counts = [0u8; 16];
        counts.copy_from_slice(&bits[1..17]);
        Some(HuffmanSpec::new(counts, symbols))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jpeg::tables;

    #[test]
    fn category_bounds() {
        assert_eq!(category(0), 0);
        assert_eq!(category(1), 1);
        assert_eq!(category(-1), 1);
        assert_eq!(category(2), 2);
        assert_eq!(category(-3), 2);
        assert_eq!(category(1023), 10);
        assert_eq!(category(-1023), 10);
        assert_eq!(category(1024), 11);
        assert_eq!(category(2047), 11);
    }

    #[test]
    fn magnitude_extend_inverse() {
        for v in -2047..=2047i32 {
            if v == 0 {
                continue;
            }
            let cat = category(v);
            assert_eq!(extend(magnitude_bits(v, cat), cat), v, "v={v}");
        }
    }

    #[test]
    fn encode_decode_symbols_round_trip() {
        let spec = tables::default_luma_ac();
        let enc = Encoder::new(&spec);
        let dec = Decoder::new(&spec);
        let mut w = BitWriter::new();
        for &sym in &spec.symbols {
            enc.write(&mut w, sym, "AC", 0).unwrap();
        }
        let bytes = w.finish();
        let mut r = BitReader::new(&bytes, 0);
        for &sym in &spec.symbols {
            assert_eq!(dec.decode(&mut r).unwrap(), sym);
        }
    }

    #[test]
    fn undefined_code_is_invalid_huffman() {
        // One single-bit code '0'; an all-ones stream never matches.
        let spec = HuffmanSpec::new(
            {
                let mut c = [0u8; 16];
                c[0] = 1;
                c
            },
            vec![0x05],
        );
        let dec = Decoder::new(&spec);
        let bytes = [0xFE, 0xFE, 0xFE];
        let mut r = BitReader::new(&bytes, 0);
        assert!(matches!(
            dec.decode(&mut r),
            Err(Error::InvalidHuffmanCode { .. })
        ));
    }

    #[test]
    fn missing_code_reported() {
        let spec = HuffmanSpec::new(
            {
                let mut c = [0u8; 16];
                c[0] = 1;
                c[1] = 1;
                c
            },
            vec![0x00, 0x01],
        );
        let enc = Encoder::new(&spec);
        let mut w = BitWriter::new();
        let err = enc.write(&mut w, 0x23, "AC", 1).unwrap_err();
        assert!(matches!(
            err,
            Error::MissingCode {
                class: "AC",
                table: 1,
                symbol: 0x23
            }
        ));
    }

    #[test]
    fn optimal_table_covers_recorded_symbols() {
        let mut ft = FrequencyTable::new();
        for (sym, n) in [
            (0x01u8, 500u32),
            (0x11, 200),
            (0x00, 900),
            (0xF0, 3),
            (0x7A, 1),
        ] {
            for _ in 0..n {
                ft.record(sym);
            }
        }
        let spec = ft.build_optimal().unwrap();
        let enc = Encoder::new(&spec);
        for sym in [0x01u8, 0x11, 0x00, 0xF0, 0x7A] {
            assert!(enc.has_code(sym), "symbol {sym:#x}");
        }
        // No code may be 16 ones; the reserved slot guarantees it.
        let total: usize = spec.counts.iter().map(|&c| c as usize).sum();
        assert_eq!(total, spec.symbols.len());
    }

    #[test]
    fn optimal_table_single_symbol() {
        let mut ft = FrequencyTable::new();
        for _ in 0..10 {
            ft.record(0x05);
        }
        let spec = ft.build_optimal().unwrap();
        let enc = Encoder::new(&spec);
        let dec = Decoder::new(&spec);
        let mut w = BitWriter::new();
        enc.write(&mut w, 0x05, "DC", 0).unwrap();
        let bytes = w.finish();
        let mut r = BitReader::new(&bytes, 0);
        assert_eq!(dec.decode(&mut r).unwrap(), 0x05);
    }

    #[test]
    fn empty_frequency_table_builds_nothing() {
        assert!(FrequencyTable::new().build_optimal().is_none());
    }

    #[test]
    fn optimal_shorter_codes_for_frequent_symbols() {
        let mut ft = FrequencyTable::new();
        for _ in 0..10_000 {
            ft.record(0x01);
        }
        for _ in 0..10 {
            ft.record(0x22);
        }
        let spec = ft.build_optimal().unwrap();
        let len_of = |spec: &HuffmanSpec, sym: u8| -> u8 {
            let mut k = 0usize;
            for len in 1..=16u8 {
                for _ in 0..spec.counts[len as usize - 1] {
                    if spec.symbols[k] == sym {
                        return len;
                    }
                    k += 1;
                }
            }
            panic!("symbol missing");
        };
        assert!(len_of(&spec, 0x01) <= len_of(&spec, 0x22));
    }
}
