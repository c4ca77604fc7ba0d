//! Piece file format.
//!
//! ```text
//! "IDA1" | version u8 = 1 | w u8 | m u8 | n u8 | piece_index u8
//!        | spec_len u16 LE | spec (canonical text)
//!        | original_length u64 LE | payload_len u64 LE (symbols)
//!        | payload | crc32 u32 LE (over the payload bytes)
//! ```
//!
//! Payload symbols are packed two per byte, high nibble first, for w = 4,
//! one per byte for w = 8 and little-endian u16 for w = 16.

use crate::codegen::GeneratorSpec;
use crate::error::{IdaError, Result};
use crate::gf::{FieldElement, FieldWidth};

pub const MAGIC: &[u8; 4] = b"IDA1";
pub const VERSION: u8 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceHeader {
    pub width: FieldWidth,
    pub m: usize,
    pub n: usize,
    pub piece_index: usize,
    pub spec: GeneratorSpec,
    pub original_length: u64,
    pub payload_len: u64,
    pub checksum: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub header: PieceHeader,
    pub payload: Vec<FieldElement>,
}

/// Pack symbols into bytes.
pub fn pack_symbols(symbols: &[FieldElement], width: FieldWidth) -> Vec<u8> {
    match width {
        FieldWidth::W4 => symbols
            .chunks(2)
            .map(|pair| ((pair[0] as u8) << 4) | pair.get(1).map_or(0, |&lo| lo as u8))
            .collect(),
        FieldWidth::W8 => symbols.iter().map(|&s| s as u8).collect(),
        FieldWidth::W16 => symbols.iter().flat_map(|s| s.to_le_bytes()).collect(),
    }
}

/// Inverse of [`pack_symbols`]; `count` symbols are read (zero padded if the
/// bytes run out).
pub fn unpack_symbols(bytes: &[u8], width: FieldWidth, count: usize) -> Vec<FieldElement> {
    let byte = |i: usize| bytes.get(i).copied().unwrap_or(0);
    (0..count)
        .map(|t| match width {
            FieldWidth::W4 => {
                let b = byte(t / 2);
                u16::from(if t % 2 == 0 { b >> 4 } else { b & 0x0F })
            }
            FieldWidth::W8 => u16::from(byte(t)),
            FieldWidth::W16 => u16::from_le_bytes([byte(2 * t), byte(2 * t + 1)]),
        })
        .collect()
}

pub fn packed_len(symbols: usize, width: FieldWidth) -> usize {
    (symbols * width.bits() as usize).div_ceil(8)
}

pub fn checksum(payload_bytes: &[u8]) -> u32 {
    crc32fast::hash(payload_bytes)
}

impl Piece {
    /// Build a piece, filling in the payload length and checksum.
    pub fn new(spec: &GeneratorSpec, piece_index: usize, original_length: u64, payload: Vec<FieldElement>) -> Piece {
        let bytes = pack_symbols(&payload, spec.width);
        Piece {
            header: PieceHeader {
                width: spec.width,
                m: spec.m,
                n: spec.n,
                piece_index,
                spec: spec.clone(),
                original_length,
                payload_len: payload.len() as u64,
                checksum: checksum(&bytes),
            },
            payload,
        }
    }

    pub fn payload_bytes(&self) -> Vec<u8> {
        pack_symbols(&self.payload, self.header.width)
    }

    pub fn verify_checksum(&self) -> Result<()> {
        if checksum(&self.payload_bytes()) != self.header.checksum {
            return Err(IdaError::Checksum { piece: self.header.piece_index });
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let h = &self.header;
        let narrow = |name: &str, v: usize| -> Result<u8> {
            u8::try_from(v).map_err(|_| IdaError::MalformedPiece(format!("{name} = {v} does not fit in one byte")))
        };
        let spec = h.spec.to_string();
        let spec_len = u16::try_from(spec.len())
            .map_err(|_| IdaError::MalformedPiece("generator spec longer than 65535 bytes".into()))?;
        let payload = self.payload_bytes();
        let mut out = Vec::with_capacity(4 + 7 + spec.len() + 16 + payload.len() + 4);
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        out.push(h.width.bits() as u8);
        out.push(narrow("m", h.m)?);
        out.push(narrow("n", h.n)?);
        out.push(narrow("piece_index", h.piece_index)?);
        out.extend_from_slice(&spec_len.to_le_bytes());
        out.extend_from_slice(spec.as_bytes());
        out.extend_from_slice(&h.original_length.to_le_bytes());
        out.extend_from_slice(&h.payload_len.to_le_bytes());
        out.extend_from_slice(&payload);
        out.extend_from_slice(&h.checksum.to_le_bytes());
        Ok(out)
    }

    /// Parse a piece file. The checksum is read but not verified here.
    pub fn from_bytes(bytes: &[u8]) -> Result<Piece> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(IdaError::MalformedPiece("bad magic".into()));
        }
        let version = r.u8()?;
        if version != VERSION {
            return Err(IdaError::MalformedPiece(format!("unsupported version {version}")));
        }
        let width = FieldWidth::try_from(u32::from(r.u8()?))?;
        let m = r.u8()? as usize;
        let n = r.u8()? as usize;
        let piece_index = r.u8()? as usize;
        let spec_len = u16::from_le_bytes(r.array()?) as usize;
        let spec_text = std::str::from_utf8(r.take(spec_len)?)
            .map_err(|_| IdaError::MalformedPiece("generator spec is not UTF-8".into()))?;
        let spec: GeneratorSpec = spec_text.parse()?;
        let original_length = u64::from_le_bytes(r.array()?);
        let payload_len = u64::from_le_bytes(r.array()?);
        let symbols = usize::try_from(payload_len)
            .map_err(|_| IdaError::MalformedPiece("payload length overflows".into()))?;
        let packed = r.take(packed_len(symbols, width))?;
        let payload = unpack_symbols(packed, width, symbols);
        let checksum = u32::from_le_bytes(r.array()?);
        if r.pos != bytes.len() {
            return Err(IdaError::MalformedPiece(format!("{} trailing bytes", bytes.len() - r.pos)));
        }
        if spec.width != width || spec.m != m || spec.n != n {
            return Err(IdaError::MalformedPiece(format!(
                "generator spec `{spec}` disagrees with header (w={width}, m={m}, n={n})"
            )));
        }
        if m >= n {
            return Err(IdaError::MalformedPiece(format!("m = {m} is not below n = {n}")));
        }
        if piece_index >= n {
            return Err(IdaError::MalformedPiece(format!("piece index {piece_index} out of range for n = {n}")));
        }
        Ok(Piece {
            header: PieceHeader { width, m, n, piece_index, spec, original_length, payload_len, checksum },
            payload,
        })
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(len).filter(|&e| e <= self.bytes.len()).ok_or_else(|| {
            IdaError::MalformedPiece(format!("truncated at byte {} (wanted {len} more)", self.pos))
        })?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N]> {
        Ok(self.take(N)?.try_into().expect("length checked"))
    }
}
