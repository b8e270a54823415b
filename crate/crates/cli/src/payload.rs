//! Bit strings on disk.
//!
//! Payload files hold one header byte with the number of padding bits in the
//! last byte, followed by the bits MSB-first. Raw inputs are either plain
//! bytes (8 bits each, no header) or text made of `0` and `1`.

use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use learncomp::BitString;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RawFormat {
    /// Every byte contributes 8 bits, MSB first.
    Bytes,
    /// ASCII `0`/`1`; whitespace is ignored.
    Text,
}

pub fn read_raw(path: &Path, format: RawFormat) -> Result<BitString> {
    let data = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    match format {
        RawFormat::Bytes => Ok(BitString::from_bytes(&data, 0)?),
        RawFormat::Text => {
            let text = String::from_utf8(data).context("text input is not UTF-8")?;
            let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
            Ok(cleaned.parse()?)
        }
    }
}

pub fn write_raw(path: &Path, bits: &BitString, format: RawFormat) -> Result<()> {
    let data = match format {
        RawFormat::Bytes => {
            if !bits.len().is_multiple_of(8) {
                bail!("{} bits do not fill whole bytes; use --output-format text", bits.len());
            }
            bits.to_bytes().0
        }
        RawFormat::Text => format!("{bits}\n").into_bytes(),
    };
    std::fs::write(path, data).with_context(|| format!("writing {}", path.display()))
}

pub fn encode(bits: &BitString) -> Vec<u8> {
    let (bytes, padding) = bits.to_bytes();
    let mut out = Vec::with_capacity(bytes.len() + 1);
    out.push(padding);
    out.extend(bytes);
    out
}

pub fn decode(data: &[u8]) -> Result<BitString> {
    let Some((&padding, bytes)) = data.split_first() else {
        bail!("payload is empty (missing header byte)");
    };
    if padding > 7 || (bytes.is_empty() && padding != 0) {
        bail!("payload header claims {padding} padding bits");
    }
    Ok(BitString::from_bytes(bytes, padding)?)
}

pub fn read_payload(path: &Path) -> Result<BitString> {
    let data = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    decode(&data).with_context(|| format!("in {}", path.display()))
}

pub fn write_payload(path: &Path, bits: &BitString) -> Result<()> {
    std::fs::write(path, encode(bits)).with_context(|| format!("writing {}", path.display()))
}
