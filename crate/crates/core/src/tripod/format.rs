//! `.tnim` cache files and CSV export.
//!
//! Layout: `TNIM`, version byte, then little-endian `u32` center, rows, cols
//! and the row-major `u32` values.

use std::fs;
use std::path::Path;

use thiserror::Error;

use super::CompletionArray;

pub const TNIM_MAGIC: &[u8; 4] = b"TNIM";
pub const TNIM_VERSION: u8 = 1;
const HEADER: usize = 4 + 1 + 12;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("bad magic bytes {0:?}")]
    BadMagic(Vec<u8>),
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u8),
    #[error("truncated file: need {needed} bytes, found {found}")]
    Truncated { needed: usize, found: usize },
    #[error("{0} trailing bytes after the grid")]
    TrailingBytes(usize),
    #[error("grid is {rows}x{cols}, expected a square")]
    NotSquare { rows: usize, cols: usize },
}

pub fn encode_tnim(arr: &CompletionArray) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER + 4 * arr.values().len());
    out.extend_from_slice(TNIM_MAGIC);
    out.push(TNIM_VERSION);
    for x in [arr.center(), arr.dim() as u32, arr.dim() as u32] {
        out.extend_from_slice(&x.to_le_bytes());
    }
    for v in arr.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

fn u32_at(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap())
}

pub fn decode_tnim(bytes: &[u8]) -> Result<CompletionArray, FormatError> {
    if bytes.len() < 4 {
        return Err(FormatError::Truncated { needed: HEADER, found: bytes.len() });
    }
    if &bytes[..4] != TNIM_MAGIC {
        return Err(FormatError::BadMagic(bytes[..4].to_vec()));
    }
    if bytes.len() < 5 {
        return Err(FormatError::Truncated { needed: HEADER, found: bytes.len() });
    }
    if bytes[4] != TNIM_VERSION {
        return Err(FormatError::UnsupportedVersion(bytes[4]));
    }
    if bytes.len() < HEADER {
        return Err(FormatError::Truncated { needed: HEADER, found: bytes.len() });
    }
    let center = u32_at(bytes, 5);
    let rows = u32_at(bytes, 9) as usize;
    let cols = u32_at(bytes, 13) as usize;
    let needed = HEADER + 4 * rows * cols;
    if bytes.len() < needed {
        return Err(FormatError::Truncated { needed, found: bytes.len() });
    }
    if bytes.len() > needed {
        return Err(FormatError::TrailingBytes(bytes.len() - needed));
    }
    if rows != cols {
        return Err(FormatError::NotSquare { rows, cols });
    }
    let values = bytes[HEADER..].chunks_exact(4).map(|c| u32::from_le_bytes(c.try_into().unwrap())).collect();
    Ok(CompletionArray::from_values(center, rows, values).expect("sizes checked"))
}

pub fn write_tnim(arr: &CompletionArray, path: &Path) -> Result<(), FormatError> {
    fs::write(path, encode_tnim(arr))?;
    Ok(())
}

pub fn read_tnim(path: &Path) -> Result<CompletionArray, FormatError> {
    decode_tnim(&fs::read(path)?)
}

/// Comma-separated rows, no header.
pub fn to_csv(arr: &CompletionArray) -> String {
    let mut s = String::with_capacity(arr.values().len() * 4);
    for a in 0..arr.dim() {
        let row: Vec<String> = arr.row(a).iter().map(u32::to_string).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tripod::generate_array;

    #[test]
    fn round_trip() {
        let arr = generate_array(6, 256);
        assert_eq!(decode_tnim(&encode_tnim(&arr)).unwrap(), arr);
    }

    #[test]
    fn distinct_errors() {
        let good = encode_tnim(&generate_array(2, 8));
        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(matches!(decode_tnim(&bad), Err(FormatError::BadMagic(_))));
        let mut v2 = good.clone();
        v2[4] = 2;
        assert!(matches!(decode_tnim(&v2), Err(FormatError::UnsupportedVersion(2))));
        assert!(matches!(decode_tnim(&good[..good.len() - 1]), Err(FormatError::Truncated { .. })));
        assert!(matches!(decode_tnim(&good[..10]), Err(FormatError::Truncated { .. })));
        assert!(matches!(decode_tnim(b"TN"), Err(FormatError::Truncated { .. })));
        let mut long = good.clone();
        long.push(0);
        assert!(matches!(decode_tnim(&long), Err(FormatError::TrailingBytes(1))));
    }

    #[test]
    fn header_layout() {
        let bytes = encode_tnim(&generate_array(6, 2));
        assert_eq!(&bytes[..5], b"TNIM\x01");
        assert_eq!(&bytes[5..9], &6u32.to_le_bytes());
        assert_eq!(&bytes[9..13], &2u32.to_le_bytes());
        assert_eq!(bytes.len(), HEADER + 16);
    }

    #[test]
    fn csv() {
        assert_eq!(to_csv(&generate_array(2, 3)), "2,1,0\n1,0,2\n0,2,1\n");
    }
}
