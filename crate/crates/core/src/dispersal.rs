//! Split a file into m segments, encode them into n pieces, and rebuild the
//! file from any m pieces.
//!
//! The file becomes a symbol stream (see [`crate::piece::pack_symbols`] for
//! the byte layout) of T = ⌈8L/w⌉ symbols. Segment i is the contiguous run
//! `[i·s, (i+1)·s)` of that stream with s = ⌈T/m⌉, zero padded at the tail.

use crate::codegen::{ensure_valid, Family, GeneratorSpec};
use crate::error::{IdaError, Result};
use crate::gf::{FieldElement, FieldWidth};
use crate::matrix::GfMatrix;
use crate::piece::{pack_symbols, unpack_symbols, Piece};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentBlock {
    pub width: FieldWidth,
    pub segments: Vec<Vec<FieldElement>>,
    pub original_length: u64,
}

/// Symbols per segment for a file of `len` bytes.
pub fn segment_symbols(len: u64, m: usize, width: FieldWidth) -> usize {
    let total = (len * 8).div_ceil(u64::from(width.bits()));
    total.div_ceil(m as u64) as usize
}

/// Bit range `[start, end)` of the original file held by segment `i`.
pub fn segment_bit_range(i: usize, segment_len: usize, width: FieldWidth, original_length: u64) -> (u64, u64) {
    let bits = (segment_len as u64) * u64::from(width.bits());
    let file_bits = original_length * 8;
    let start = (i as u64 * bits).min(file_bits);
    let end = ((i as u64 + 1) * bits).min(file_bits);
    (start, end)
}

pub fn split(data: &[u8], m: usize, width: FieldWidth) -> SegmentBlock {
    assert!(m >= 1, "split needs m >= 1");
    let s = segment_symbols(data.len() as u64, m, width);
    let total = (data.len() * 8).div_ceil(width.bits() as usize);
    let stream = unpack_symbols(data, width, total);
    let segments = (0..m)
        .map(|i| {
            let mut seg: Vec<FieldElement> = stream.iter().skip(i * s).take(s).copied().collect();
            seg.resize(s, 0);
            seg
        })
        .collect();
    SegmentBlock { width, segments, original_length: data.len() as u64 }
}

impl SegmentBlock {
    pub fn m(&self) -> usize {
        self.segments.len()
    }

    pub fn segment_len(&self) -> usize {
        self.segments.first().map_or(0, Vec::len)
    }

    /// Concatenate the segments and truncate to the original length.
    pub fn join(&self) -> Vec<u8> {
        let stream: Vec<FieldElement> = self.segments.concat();
        let mut bytes = pack_symbols(&stream, self.width);
        bytes.resize(self.original_length as usize, 0);
        bytes
    }
}

/// Encode per (S₁..S_m)·G = (F₁..F_n), symbol position by symbol position.
pub fn encode(block: &SegmentBlock, g: &GfMatrix, spec: &GeneratorSpec) -> Result<Vec<Piece>> {
    if spec.family == Family::Vandermonde {
        return Err(IdaError::InvalidSpec(
            "vandermonde describes an m-of-(m+n) code; disperse with rs_strong instead".into(),
        ));
    }
    let (m, n) = (g.rows(), g.cols());
    if block.m() != m || spec.m != m || spec.n != n || spec.width != g.width() || block.width != g.width() {
        return Err(IdaError::DimensionMismatch {
            op: "encode",
            left_rows: block.m(),
            left_cols: block.segment_len(),
            right_rows: m,
            right_cols: n,
        });
    }
    ensure_valid(g)?;
    let len = block.segment_len();
    let f = g.field();
    let spec = spec.resolved();
    Ok((0..n)
        .map(|j| {
            let mut payload = vec![0; len];
            for (i, seg) in block.segments.iter().enumerate() {
                f.mul_acc(&mut payload, seg, g.get(i, j));
            }
            Piece::new(&spec, j, block.original_length, payload)
        })
        .collect())
}

/// Split and encode in one step.
pub fn disperse(data: &[u8], spec: &GeneratorSpec) -> Result<Vec<Piece>> {
    let g = spec.build()?;
    encode(&split(data, spec.m, spec.width), &g, spec)
}

/// Common header of a piece set; checks agreement, distinct indices and
/// every checksum. Returns the pieces sorted by index.
pub fn check_piece_set(pieces: &[Piece]) -> Result<Vec<&Piece>> {
    let Some(first) = pieces.first() else {
        return Err(IdaError::InsufficientPieces { have: 0, need: 1 });
    };
    let h0 = &first.header;
    for p in pieces {
        let h = &p.header;
        let field = if h.width != h0.width {
            Some("field_width")
        } else if h.m != h0.m {
            Some("m")
        } else if h.n != h0.n {
            Some("n")
        } else if h.spec.resolved() != h0.spec.resolved() {
            Some("generator_spec")
        } else if h.original_length != h0.original_length {
            Some("original_length")
        } else if h.payload_len != h0.payload_len {
            Some("payload_len")
        } else {
            None
        };
        if let Some(field) = field {
            return Err(IdaError::HeaderMismatch { field });
        }
        if h.piece_index >= h.n {
            return Err(IdaError::PieceIndexOutOfRange { index: h.piece_index, n: h.n });
        }
        if p.payload.len() as u64 != h.payload_len {
            return Err(IdaError::PayloadLength { expected: h.payload_len as usize, got: p.payload.len() });
        }
    }
    let mut sorted: Vec<&Piece> = pieces.iter().collect();
    sorted.sort_by_key(|p| p.header.piece_index);
    for pair in sorted.windows(2) {
        if pair[0].header.piece_index == pair[1].header.piece_index {
            return Err(IdaError::DuplicatePiece { index: pair[0].header.piece_index });
        }
    }
    for p in &sorted {
        p.verify_checksum()?;
    }
    let expected = segment_symbols(h0.original_length, h0.m, h0.width) as u64;
    if h0.payload_len != expected {
        return Err(IdaError::MalformedPiece(format!(
            "payload of {} symbols does not match original length {} (expected {expected})",
            h0.payload_len, h0.original_length
        )));
    }
    Ok(sorted)
}

/// Rebuild the original bytes from at least m pieces, decoding through the
/// m lowest piece indices.
pub fn reconstruct(pieces: &[Piece]) -> Result<Vec<u8>> {
    let sorted = check_piece_set(pieces)?;
    let h = &sorted[0].header;
    if sorted.len() < h.m {
        return Err(IdaError::InsufficientPieces { have: sorted.len(), need: h.m });
    }
    let g = h.spec.build()?;
    let chosen = &sorted[..h.m];
    let cols: Vec<usize> = chosen.iter().map(|p| p.header.piece_index).collect();
    let sub = g.select_columns(&cols)?;
    // S·G_J = F_J, so S = F_J·G_J⁻¹
    let decode = sub.invert()?;
    let f = g.field();
    let len = h.payload_len as usize;
    let segments = (0..h.m)
        .map(|i| {
            let mut seg = vec![0; len];
            for (k, p) in chosen.iter().enumerate() {
                f.mul_acc(&mut seg, &p.payload, decode.get(k, i));
            }
            seg
        })
        .collect();
    Ok(SegmentBlock { width: h.width, segments, original_length: h.original_length }.join())
}
