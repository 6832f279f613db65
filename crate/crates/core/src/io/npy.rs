//! Reading and writing 2-D float arrays in the numpy `.npy` v1.0 format.
//!
//! Only C-order, little-endian `f4`/`f8` arrays with a two-entry shape are
//! accepted. Anything else is an error rather than a silent conversion.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::FeatureMatrix;

pub(crate) const MAGIC: &[u8; 6] = b"\x93NUMPY";
const PREAMBLE_LEN: usize = 10;
const ALIGN: usize = 64;

/// Element type of an npy payload.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NpyDtype {
    F32,
    F64,
}

impl NpyDtype {
    fn descr(self) -> &'static str {
        match self {
            NpyDtype::F32 => "<f4",
            NpyDtype::F64 => "<f8",
        }
    }

    fn size(self) -> usize {
        match self {
            NpyDtype::F32 => 4,
            NpyDtype::F64 => 8,
        }
    }
}

/// The parsed header dictionary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NpyHeader {
    pub dtype: NpyDtype,
    pub fortran_order: bool,
    pub shape: (usize, usize),
}

pub fn read_npy(path: impl AsRef<Path>) -> Result<FeatureMatrix> {
    let bytes = fs::read(path)?;
    decode_npy(&bytes)
}

/// Writes `matrix` as `<f8`, which reads back bit-for-bit.
pub fn write_npy(path: impl AsRef<Path>, matrix: &FeatureMatrix) -> Result<()> {
    write_npy_as(path, matrix, NpyDtype::F64)
}

/// Writes `matrix` with the given element type. `F32` rounds every value.
pub fn write_npy_as(path: impl AsRef<Path>, matrix: &FeatureMatrix, dtype: NpyDtype) -> Result<()> {
    fs::write(path, encode_npy(matrix, dtype))?;
    Ok(())
}

pub fn encode_npy(matrix: &FeatureMatrix, dtype: NpyDtype) -> Vec<u8> {
    let header = NpyHeader {
        dtype,
        fortran_order: false,
        shape: (matrix.rows(), matrix.cols()),
    };
    let mut out = encode_header(&header);
    out.reserve(matrix.as_slice().len() * dtype.size());
    match dtype {
        NpyDtype::F64 => {
            for v in matrix.as_slice() {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        NpyDtype::F32 => {
            for v in matrix.as_slice() {
                out.extend_from_slice(&(*v as f32).to_le_bytes());
            }
        }
    }
    out
}

pub(crate) fn encode_header(header: &NpyHeader) -> Vec<u8> {
    let dict = format!(
        "{{'descr': '{}', 'fortran_order': {}, 'shape': ({}, {}), }}",
        header.dtype.descr(),
        if header.fortran_order { "True" } else { "False" },
        header.shape.0,
        header.shape.1
    );
    // dict + at least one space of padding + '\n', rounded up to the alignment
    let unpadded = PREAMBLE_LEN + dict.len() + 1;
    let total = unpadded.div_ceil(ALIGN) * ALIGN;
    let header_len = total - PREAMBLE_LEN;

    let mut out = Vec::with_capacity(total);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&[1, 0]);
    out.extend_from_slice(&(header_len as u16).to_le_bytes());
    out.extend_from_slice(dict.as_bytes());
    out.resize(total - 1, b' ');
    out.push(b'\n');
    out
}

pub fn decode_npy(bytes: &[u8]) -> Result<FeatureMatrix> {
    let (header, offset) = decode_header(bytes)?;
    let (rows, cols) = header.shape;
    let count = rows
        .checked_mul(cols)
        .ok_or_else(|| Error::MalformedHeader("shape overflows".into()))?;
    let payload = &bytes[offset..];
    let expected = count * header.dtype.size();
    if payload.len() != expected {
        return Err(Error::MalformedHeader(format!(
            "payload has {} bytes, shape ({rows}, {cols}) needs {expected}",
            payload.len()
        )));
    }
    let data: Vec<f64> = match header.dtype {
        NpyDtype::F64 => payload
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect(),
        NpyDtype::F32 => payload
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()) as f64)
            .collect(),
    };
    FeatureMatrix::new(rows, cols, data)
}

/// Parses the preamble and header dictionary, returning the payload offset.
pub fn decode_header(bytes: &[u8]) -> Result<(NpyHeader, usize)> {
    if bytes.len() < PREAMBLE_LEN || &bytes[..6] != MAGIC {
        return Err(Error::MalformedHeader("missing \\x93NUMPY magic".into()));
    }
    if bytes[6..8] != [1, 0] {
        return Err(Error::MalformedHeader(format!(
            "unsupported version {}.{}",
            bytes[6], bytes[7]
        )));
    }
    let header_len = u16::from_le_bytes([bytes[8], bytes[9]]) as usize;
    let end = PREAMBLE_LEN + header_len;
    if bytes.len() < end {
        return Err(Error::MalformedHeader("truncated header".into()));
    }
    let text = std::str::from_utf8(&bytes[PREAMBLE_LEN..end])
        .map_err(|_| Error::MalformedHeader("header is not ASCII".into()))?;
    let header = parse_dict(text)?;
    Ok((header, end))
}

fn parse_dict(text: &str) -> Result<NpyHeader> {
    let mut p = DictParser {
        s: text.as_bytes(),
        pos: 0,
    };
    let mut descr = None;
    let mut fortran = None;
    let mut shape = None;

    p.expect(b'{')?;
    loop {
        p.skip_ws();
        if p.eat(b'}') {
            break;
        }
        let key = p.string()?;
        p.skip_ws();
        p.expect(b':')?;
        p.skip_ws();
        match key.as_str() {
            "descr" => descr = Some(p.string()?),
            "fortran_order" => fortran = Some(p.boolean()?),
            "shape" => shape = Some(p.tuple()?),
            other => return Err(Error::MalformedHeader(format!("unexpected key {other:?}"))),
        }
        p.skip_ws();
        if !p.eat(b',') {
            p.skip_ws();
            p.expect(b'}')?;
            break;
        }
    }
    if !p.rest().trim().is_empty() {
        return Err(Error::MalformedHeader("trailing text after dictionary".into()));
    }

    let descr = descr.ok_or_else(|| Error::MalformedHeader("missing 'descr'".into()))?;
    let fortran_order =
        fortran.ok_or_else(|| Error::MalformedHeader("missing 'fortran_order'".into()))?;
    let shape = shape.ok_or_else(|| Error::MalformedHeader("missing 'shape'".into()))?;

    let dtype = match descr.as_str() {
        "<f8" => NpyDtype::F64,
        "<f4" => NpyDtype::F32,
        _ => return Err(Error::UnsupportedDtype(descr)),
    };
    if fortran_order {
        return Err(Error::MalformedHeader("fortran_order arrays are not supported".into()));
    }
    if shape.len() != 2 {
        return Err(Error::Not2D(shape.len()));
    }
    Ok(NpyHeader {
        dtype,
        fortran_order,
        shape: (shape[0], shape[1]),
    })
}

struct DictParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl DictParser<'_> {
    fn rest(&self) -> &str {
        std::str::from_utf8(&self.s[self.pos..]).unwrap_or("")
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::MalformedHeader(format!(
                "expected '{}' at offset {}",
                c as char, self.pos
            )))
        }
    }

    fn string(&mut self) -> Result<String> {
        let quote = match self.s.get(self.pos) {
            Some(&q @ (b'\'' | b'"')) => q,
            _ => return Err(Error::MalformedHeader("expected a quoted string".into())),
        };
        self.pos += 1;
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos] != quote {
            self.pos += 1;
        }
        if self.pos == self.s.len() {
            return Err(Error::MalformedHeader("unterminated string".into()));
        }
        let out = String::from_utf8_lossy(&self.s[start..self.pos]).into_owned();
        self.pos += 1;
        Ok(out)
    }

    fn boolean(&mut self) -> Result<bool> {
        for (word, value) in [("True", true), ("False", false)] {
            if self.s[self.pos..].starts_with(word.as_bytes()) {
                self.pos += word.len();
                return Ok(value);
            }
        }
        Err(Error::MalformedHeader("expected True or False".into()))
    }

    fn tuple(&mut self) -> Result<Vec<usize>> {
        self.expect(b'(')?;
        let mut dims = Vec::new();
        loop {
            self.skip_ws();
            if self.eat(b')') {
                return Ok(dims);
            }
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let digits = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
            let dim = digits
                .parse()
                .map_err(|_| Error::MalformedHeader("bad shape entry".into()))?;
            dims.push(dim);
            self.skip_ws();
            if !self.eat(b',') {
                self.skip_ws();
                self.expect(b')')?;
                return Ok(dims);
            }
        }
    }
}
