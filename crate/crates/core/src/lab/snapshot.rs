//! Binary field snapshots.
//!
//! A fixed 128-byte little-endian header followed by the retained modes,
//! sorted lexicographically by signed wavenumber `(m₀, m₁, m₂)`, each stored
//! as three interleaved `(Re, Im)` pairs of `f64`.
//!
//! | offset | type      | content                      |
//! |-------:|-----------|------------------------------|
//! | 0      | `[u8; 4]` | magic `GVRY`                 |
//! | 4      | `u32`     | format version                |
//! | 8      | `u32`     | points per axis `n`          |
//! | 12     | `u32`     | model flags                  |
//! | 16     | `f64`     | box length `L`               |
//! | 24     | `f64`     | time                         |
//! | 32     | `f64`     | dealias fraction             |
//! | 40     | `9×f64`   | `M`, row-major               |
//! | 112    | `u64`     | retained mode count          |
//! | 120    | `u32`     | payload layout (0)           |
//! | 124    | `u32`     | reserved                     |

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::spectral::{ModelConfig, SpectralField, WavenumberGrid};

pub const MAGIC: [u8; 4] = *b"GVRY";
pub const FORMAT_VERSION: u32 = 1;
pub const HEADER_LEN: usize = 128;
const LAYOUT_LEX_INTERLEAVED: u32 = 0;

#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotHeader {
    pub version: u32,
    pub n: u32,
    pub flags: u32,
    pub box_length: f64,
    pub time: f64,
    pub dealias: f64,
    pub m: [[f64; 3]; 3],
    pub retained: u64,
    pub layout: u32,
}

impl SnapshotHeader {
    pub fn model(&self) -> ModelConfig {
        ModelConfig::from_flags(self.m, self.flags)
    }

    fn encode(&self) -> [u8; HEADER_LEN] {
        let mut b = [0u8; HEADER_LEN];
        b[0..4].copy_from_slice(&MAGIC);
        b[4..8].copy_from_slice(&self.version.to_le_bytes());
        b[8..12].copy_from_slice(&self.n.to_le_bytes());
        b[12..16].copy_from_slice(&self.flags.to_le_bytes());
        b[16..24].copy_from_slice(&self.box_length.to_le_bytes());
        b[24..32].copy_from_slice(&self.time.to_le_bytes());
        b[32..40].copy_from_slice(&self.dealias.to_le_bytes());
        for (i, x) in self.m.iter().flatten().enumerate() {
            b[40 + 8 * i..48 + 8 * i].copy_from_slice(&x.to_le_bytes());
        }
        b[112..120].copy_from_slice(&self.retained.to_le_bytes());
        b[120..124].copy_from_slice(&self.layout.to_le_bytes());
        b
    }

    fn decode(b: &[u8]) -> Result<Self> {
        if b.len() < HEADER_LEN {
            return Err(LabError::Format(format!("truncated header: {} of {HEADER_LEN} bytes", b.len())));
        }
        if b[0..4] != MAGIC {
            return Err(LabError::Format(format!("bad magic {:?}, expected \"GVRY\"", &b[0..4])));
        }
        let u32_at = |o: usize| u32::from_le_bytes(b[o..o + 4].try_into().expect("4 bytes"));
        let f64_at = |o: usize| f64::from_le_bytes(b[o..o + 8].try_into().expect("8 bytes"));
        let version = u32_at(4);
        if version != FORMAT_VERSION {
            return Err(LabError::VersionMismatch {
                found: version,
                expected: FORMAT_VERSION,
            });
        }
        Ok(Self {
            version,
            n: u32_at(8),
            flags: u32_at(12),
            box_length: f64_at(16),
            time: f64_at(24),
            dealias: f64_at(32),
            m: std::array::from_fn(|i| std::array::from_fn(|j| f64_at(40 + 8 * (3 * i + j)))),
            retained: u64::from_le_bytes(b[112..120].try_into().expect("8 bytes")),
            layout: u32_at(120),
        })
    }
}

/// Retained storage indices in lexicographic signed-mode order.
fn lex_order(grid: &WavenumberGrid) -> Vec<usize> {
    let mut idx = grid.retained().to_vec();
    idx.sort_by_key(|&i| grid.mode(i));
    idx
}

pub fn encode_snapshot(field: &SpectralField, model: &ModelConfig) -> Vec<u8> {
    let grid = field.grid();
    let order = lex_order(grid);
    let header = SnapshotHeader {
        version: FORMAT_VERSION,
        n: grid.n() as u32,
        flags: model.flags(),
        box_length: grid.box_length(),
        time: field.time(),
        dealias: grid.dealias(),
        m: model.m,
        retained: order.len() as u64,
        layout: LAYOUT_LEX_INTERLEAVED,
    };
    let mut out = Vec::with_capacity(HEADER_LEN + order.len() * 48);
    out.extend_from_slice(&header.encode());
    for i in order {
        for z in field.coeff(i) {
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    out
}

pub fn decode_snapshot(bytes: &[u8]) -> Result<(SpectralField, SnapshotHeader)> {
    let header = SnapshotHeader::decode(bytes)?;
    if header.layout != LAYOUT_LEX_INTERLEAVED {
        return Err(LabError::Format(format!("unknown payload layout {}", header.layout)));
    }
    let grid = WavenumberGrid::new(header.n as usize, header.box_length, header.dealias)
        .map_err(|e| LabError::Format(format!("header describes an invalid grid: {e}")))?;
    let order = lex_order(&grid);
    if header.retained != order.len() as u64 {
        return Err(LabError::Format(format!(
            "header claims {} retained modes, grid has {}",
            header.retained,
            order.len()
        )));
    }
    let expected = HEADER_LEN + order.len() * 48;
    if bytes.len() != expected {
        return Err(LabError::Format(format!(
            "payload length {} does not match {} retained modes ({} bytes expected)",
            bytes.len() - HEADER_LEN,
            order.len(),
            expected - HEADER_LEN
        )));
    }
    let mut field = SpectralField::zeros(&grid).with_time(header.time);
    let f = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().expect("8 bytes"));
    for (slot, i) in order.into_iter().enumerate() {
        let base = HEADER_LEN + 48 * slot;
        let v: [Complex64; 3] = std::array::from_fn(|c| Complex64::new(f(base + 16 * c), f(base + 16 * c + 8)));
        field.set_coeff(i, v);
    }
    Ok((field, header))
}

pub fn write_snapshot(path: &Path, field: &SpectralField, model: &ModelConfig) -> Result<()> {
    let bytes = encode_snapshot(field, model);
    let mut file = std::fs::File::create(path).map_err(|e| LabError::io(path, e))?;
    file.write_all(&bytes).map_err(|e| LabError::io(path, e))
}

pub fn read_snapshot(path: &Path) -> Result<(SpectralField, SnapshotHeader)> {
    let bytes = std::fs::read(path).map_err(|e| LabError::io(path, e))?;
    decode_snapshot(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::RandomFieldSpec;

    fn sample() -> (SpectralField, ModelConfig) {
        let grid = WavenumberGrid::new(8, 3.0, 2.0 / 3.0).unwrap();
        let f = RandomFieldSpec::new(1.0, 4).with_mean().generate(&grid).with_time(0.375);
        (f, ModelConfig::navier_stokes())
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let (f, m) = sample();
        let bytes = encode_snapshot(&f, &m);
        let (g, h) = decode_snapshot(&bytes).unwrap();
        assert_eq!(f, g);
        assert_eq!(h.model(), m);
        assert_eq!(encode_snapshot(&g, &h.model()), bytes);
    }

    #[test]
    fn corrupt_magic() {
        let (f, m) = sample();
        let mut bytes = encode_snapshot(&f, &m);
        bytes[0] = b'X';
        assert!(matches!(decode_snapshot(&bytes), Err(LabError::Format(_))));
    }

    #[test]
    fn version_bump_names_both() {
        let (f, m) = sample();
        let mut bytes = encode_snapshot(&f, &m);
        bytes[4..8].copy_from_slice(&2u32.to_le_bytes());
        let err = decode_snapshot(&bytes).unwrap_err();
        assert!(matches!(err, LabError::VersionMismatch { found: 2, expected: 1 }));
        let msg = err.to_string();
        assert!(msg.contains('2') && msg.contains('1'), "{msg}");
    }

    #[test]
    fn truncated_payload() {
        let (f, m) = sample();
        let bytes = encode_snapshot(&f, &m);
        assert!(matches!(decode_snapshot(&bytes[..bytes.len() - 8]), Err(LabError::Format(_))));
        assert!(matches!(decode_snapshot(&bytes[..60]), Err(LabError::Format(_))));
    }
}
