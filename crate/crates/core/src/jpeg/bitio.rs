//! Entropy-coded segment bit I/O.
//!
//! The reader consumes exactly the scan byte span: it honors 0xFF00 stuffing,
//! stops at any real marker, and validates restart markers at the positions
//! the caller requests. The writer mirrors this: stuffing after 0xFF bytes,
//! 1-bit padding before markers and at the end of the scan.

use super::{marker, Error};

pub struct BitReader<'a> {
    data: &'a [u8],
    /// Next unread byte index into `data`.
    pos: usize,
    bit_buf: u8,
    bits_left: u8,
}

impl<'a> BitReader<'a> {
    /// `pos` is the absolute offset of the first entropy-coded byte.
    pub fn new(data: &'a [u8], pos: usize) -> Self {
        BitReader {
            data,
            pos,
            bit_buf: 0,
            bits_left: 0,
        }
    }

    /// Absolute byte offset of the next unread byte (for error reporting).
    pub fn offset(&self) -> usize {
        self.pos
    }

    fn load_byte(&mut self) -> Result<(), Error> {
        match self.data.get(self.pos) {
            None => Err(Error::TruncatedStream { offset: self.pos }),
            Some(&0xFF) => match self.data.get(self.pos + 1) {
                Some(&0x00) => {
                    self.bit_buf = 0xFF;
                    self.bits_left = 8;
                    self.pos += 2;
                    Ok(())
                }
                // A real marker where entropy data was expected.
                _ => Err(Error::TruncatedStream { offset: self.pos }),
            },
            Some(&b) => {
                self.bit_buf = b;
                self.bits_left = 8;
                self.pos += 1;
                Ok(())
            }
        }
    }

    pub fn read_bit(&mut self) -> Result<u8, Error> {
        if self.bits_left == 0 {
            self.load_byte()?;
        }
        self.bits_left -= 1;
        Ok((self.bit_buf >> self.bits_left) & 1)
    }

    /// Reads `n` bits MSB-first. `n` must be <= 16.
    pub fn read_bits(&mut self, n: u8) -> Result<u32, Error> {
        let mut v = 0u32;
        for _ in 0..n {
            v = (v << 1) | self.read_bit()? as u32;
        }
        Ok(v)
    }

    /// Discards padding bits, consumes the expected RSTn marker, and resumes
    /// bit reading after it.
    pub fn expect_restart(&mut self, index: u8) -> Result<(), Error> {
        self.bits_left = 0;
        let want = marker::RST0 + (index & 7);
        if self.pos + 1 >= self.data.len() {
            return Err(Error::TruncatedStream { offset: self.pos });
        }
        if self.data[self.pos] != 0xFF || self.data[self.pos + 1] != want {
            return Err(Error::MarkerSyntax {
                offset: self.pos,
                detail: format!(
                    "expected RST{} marker, found 0x{:02X}{:02X}",
                    index & 7,
                    self.data[self.pos],
                    self.data[self.pos + 1]
                ),
            });
        }
        self.pos += 2;
        Ok(())
    }

    /// Discards padding bits and returns the offset of the terminating
    /// marker (which must follow immediately).
    pub fn finish(mut self) -> Result<usize, Error> {
        self.bits_left = 0;
        Ok(self.pos)
    }
}

#[derive(Default)]
pub struct BitWriter {
    out: Vec<u8>,
    bit_buf: u8,
    bits_used: u8,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    fn push_byte(&mut self, b: u8) {
        self.out.push(b);
        if b == 0xFF {
            self.out.push(0x00);
        }
    }

    pub fn write_bit(&mut self, bit: u8) {
        self.bit_buf = (self.bit_buf << 1) | (bit & 1);
        self.bits_used += 1;
        if self.bits_used == 8 {
            let b = self.bit_buf;
            self.bit_buf = 0;
            self.bits_used = 0;
            self.push_byte(b);
        }
    }

    /// Writes the low `n` bits of `v`, MSB-first. `n` must be <= 16.
    pub fn write_bits(&mut self, v: u32, n: u8) {
        for i in (0..n).rev() {
            self.write_bit(((v >> i) & 1) as u8);
        }
    }

    /// Pads the current byte with 1-bits (no-op on a byte boundary).
    pub fn pad_to_byte(&mut self) {
        while self.bits_used != 0 {
            self.write_bit(1);
        }
    }

    /// Pads and emits a restart marker.
    pub fn write_restart(&mut self, index: u8) {
        self.pad_to_byte();
        self.out.push(0xFF);
        self.out.push(marker::RST0 + (index & 7));
    }

    /// Pads the final byte and returns the entropy-coded bytes.
    pub fn finish(mut self) -> Vec<u8> {
        self.pad_to_byte();
        self.out
    }
}
