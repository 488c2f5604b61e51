//! Reversible data hiding in quantized AC coefficients.
//!
//! Three schemes over nonzero AC coefficients of a baseline JPEG:
//!
//! * `Proposed` — every nonzero AC carries one bit; bit 1 moves the
//!   coefficient toward zero: `2C` for 0, `2C - sign(C)` for 1.
//! * `Liu2018` — same carrier set, but bit 1 moves away from zero:
//!   `2C` for 0, `2C + sign(C)` for 1.
//! * `Huang2016` — histogram shifting: only coefficients of magnitude 1
//!   carry bits (`C + sign(C)*S`); larger magnitudes shift outward by one
//!   to keep extraction unambiguous.
//!
//! All three preserve the coefficient's sign and never touch zeros or DC,
//! so the carrier positions are recoverable blind.

mod pipeline;

pub use pipeline::{capacity, embed_image, extract_image, EmbedError, EmbedReport, ExtractError};

use crate::jpeg::MAX_AC_MAGNITUDE;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeId {
    Proposed,
    Liu2018,
    Huang2016,
}

impl SchemeId {
    pub const ALL: [SchemeId; 3] = [SchemeId::Proposed, SchemeId::Liu2018, SchemeId::Huang2016];

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::Proposed => "proposed",
            SchemeId::Liu2018 => "liu2018",
            SchemeId::Huang2016 => "huang2016",
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "proposed" => Ok(SchemeId::Proposed),
            "liu2018" => Ok(SchemeId::Liu2018),
            "huang2016" => Ok(SchemeId::Huang2016),
            other => Err(format!(
                "unknown scheme '{other}' (expected proposed, liu2018 or huang2016)"
            )),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoeffError {
    #[error("sign of zero is undefined; zero coefficients never carry data")]
    ZeroInput,
    #[error("marked value {0} would exceed the baseline AC magnitude limit")]
    Overflow(i32),
    #[error("value {0} is outside the operation's domain")]
    OutsideDomain(i32),
}

/// Sign of a nonzero value: +1 or -1.
pub fn sign(x: i32) -> Result<i32, CoeffError> {
    match x {
        0 => Err(CoeffError::ZeroInput),
        x if x > 0 => Ok(1),
        _ => Ok(-1),
    }
}

/// Embeds one bit into a nonzero AC coefficient and returns the marked
/// value. For `Huang2016` the coefficient must have magnitude 1; larger
/// magnitudes are shifted with [`shift_coeff`] instead.
pub fn embed_coeff(scheme: SchemeId, c: i32, bit: bool) -> Result<i32, CoeffError> {
    let s = sign(c)?;
    let marked = match scheme {
        SchemeId::Proposed => {
            if bit {
                2 * c - s
            } else {
                2 * c
            }
        }
        SchemeId::Liu2018 => {
            if bit {
                2 * c + s
            } else {
                2 * c
            }
        }
        SchemeId::Huang2016 => {
            if c.abs() != 1 {
                return Err(CoeffError::OutsideDomain(c));
            }
            c + s * bit as i32
        }
    };
    if marked.abs() > MAX_AC_MAGNITUDE {
        return Err(CoeffError::Overflow(marked));
    }
    Ok(marked)
}

/// Huang2016 histogram shift for coefficients of magnitude > 1:
/// moves the value one step away from zero.
pub fn shift_coeff(c: i32) -> Result<i32, CoeffError> {
    if c.abs() <= 1 {
        return Err(CoeffError::OutsideDomain(c));
    }
    let shifted = c + sign(c)?;
    if shifted.abs() > MAX_AC_MAGNITUDE {
        return Err(CoeffError::Overflow(shifted));
    }
    Ok(shifted)
}

/// Extracts the bit (if the marked value carries one) and restores the
/// original coefficient.
///
/// `Proposed` recovery is `(marked + sign) / 2` for odd values. Strictly
/// the sign in question is the original coefficient's, but embedding
/// preserves sign, so the marked value's own sign substitutes for it.
pub fn extract_coeff(scheme: SchemeId, marked: i32) -> Result<(Option<bool>, i32), CoeffError> {
    let s = sign(marked)?;
    match scheme {
        SchemeId::Proposed => {
            if marked % 2 == 0 {
                Ok((Some(false), marked / 2))
            } else {
                Ok((Some(true), (marked + s) / 2))
            }
        }
        SchemeId::Liu2018 => {
            if marked % 2 == 0 {
                Ok((Some(false), marked / 2))
            } else {
                Ok((Some(true), (marked - s) / 2))
            }
        }
        SchemeId::Huang2016 => match marked.abs() {
            1 => Ok((Some(false), marked)),
            2 => Ok((Some(true), s)),
            _ => Ok((None, marked - s)),
        },
    }
}
