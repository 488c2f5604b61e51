//! JPEG marker byte values (the byte following 0xFF).

pub const SOI: u8 = 0xD8;
pub const EOI: u8 = 0xD9;
pub const SOS: u8 = 0xDA;
pub const DQT: u8 = 0xDB;
pub const DNL: u8 = 0xDC;
pub const DRI: u8 = 0xDD;
pub const DHT: u8 = 0xC4;
pub const DAC: u8 = 0xCC;
pub const COM: u8 = 0xFE;

/// Baseline sequential DCT frame.
pub const SOF0: u8 = 0xC0;

pub const APP0: u8 = 0xE0;
pub const APP15: u8 = 0xEF;

pub const RST0: u8 = 0xD0;
pub const RST7: u8 = 0xD7;

pub fn is_app(marker: u8) -> bool {
    (APP0..=APP15).contains(&marker)
}

pub fn is_rst(marker: u8) -> bool {
    (RST0..=RST7).contains(&marker)
}

/// Start-of-frame markers other than SOF0 (extended, progressive, lossless,
/// hierarchical variants). DHT/JPG/DAC share the 0xC0 block and are excluded.
pub fn is_unsupported_sof(marker: u8) -> bool {
    matches!(
        marker,
        0xC1 | 0xC2 | 0xC3 | 0xC5 | 0xC6 | 0xC7 | 0xC9 | 0xCA | 0xCB | 0xCD | 0xCE | 0xCF
    )
}

/// Human-readable name for error messages.
pub fn name(marker: u8) -> String {
    match marker {
        SOI => "SOI".into(),
        EOI => "EOI".into(),
        SOS => "SOS".into(),
        DQT => "DQT".into(),
        DNL => "DNL".into(),
        DRI => "DRI".into(),
        DHT => "DHT".into(),
        DAC => "DAC".into(),
        COM => "COM".into(),
        SOF0 => "SOF0".into(),
        m if is_app(m) => format!("APP{}", m - APP0),
        m if is_rst(m) => format!("RST{}", m - RST0),
        m if (0xC0..=0xCF).contains(&m) => format!("SOF{}", m - 0xC0),
        m => format!("0x{m:02X}"),
    }
}
