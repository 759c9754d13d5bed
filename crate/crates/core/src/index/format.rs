//! On-disk layout, little-endian throughout:
//!
//! ```text
//! "COOC"            4 bytes
//! version           u32 (= 1)
//! n, q, mu, d       u64 each
//! r1                u64, u64::MAX when absent
//! z[d]              u64
//! delta[d]          i64
//! F[d]              i64
//! W[d]              i64
//! digest            32 bytes
//! crc32             u32 over every preceding byte
//! ```

use std::io::{Read, Write};

use super::{CooccurrenceIndex, IndexMeta};
use crate::delta::DeltaEncoding;
use crate::error::{FormatError, Result};
use crate::predecessor::Variant;

pub const MAGIC: [u8; 4] = *b"COOC";
pub const FORMAT_VERSION: u32 = 1;

const HEADER_LEN: usize = 4 + 4 + 5 * 8;
const NO_R1: u64 = u64::MAX;

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, len: usize, what: &'static str) -> Result<&'a [u8], FormatError> {
        let end = self.pos.checked_add(len).filter(|&e| e <= self.buf.len());
        let end = end.ok_or(FormatError::Truncated(what))?;
        let out = &self.buf[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u32(&mut self, what: &'static str) -> Result<u32, FormatError> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn u64(&mut self, what: &'static str) -> Result<u64, FormatError> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn u64s(&mut self, d: usize, what: &'static str) -> Result<Vec<u64>, FormatError> {
        let raw = self.take(d * 8, what)?;
        Ok(raw.chunks_exact(8).map(|c| u64::from_le_bytes(c.try_into().unwrap())).collect())
    }

    fn i64s(&mut self, d: usize, what: &'static str) -> Result<Vec<i64>, FormatError> {
        let raw = self.take(d * 8, what)?;
        Ok(raw.chunks_exact(8).map(|c| i64::from_le_bytes(c.try_into().unwrap())).collect())
    }
}

impl CooccurrenceIndex {
    pub fn to_bytes(&self) -> Vec<u8> {
        let enc = &self.enc;
        let d = enc.d();
        let mut out = Vec::with_capacity(HEADER_LEN + 32 * d + 36);
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        for v in [self.meta.n, self.meta.q, self.meta.mu, d as u64, enc.r1.unwrap_or(NO_R1)] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        for z in &enc.z {
            out.extend_from_slice(&z.to_le_bytes());
        }
        for arr in [&enc.delta, &enc.f, &enc.w] {
            for v in arr {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        out.extend_from_slice(&self.meta.digest);
        let crc = crc32fast::hash(&out);
        out.extend_from_slice(&crc.to_le_bytes());
        out
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&self.to_bytes())?;
        Ok(())
    }

    /// Decodes with the default predecessor variant.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        Self::from_bytes_with(bytes, Variant::default())
    }

    pub fn from_bytes_with(bytes: &[u8], variant: Variant) -> Result<Self> {
        let mut cur = Cursor { buf: bytes, pos: 0 };
        let magic: [u8; 4] = cur.take(4, "magic")?.try_into().unwrap();
        if magic != MAGIC {
            return Err(FormatError::BadMagic(magic).into());
        }
        let version = cur.u32("version")?;
        if version != FORMAT_VERSION {
            return Err(FormatError::VersionMismatch {
                found: version,
                expected: FORMAT_VERSION,
            }
            .into());
        }
        let n = cur.u64("n")?;
        let q = cur.u64("q")?;
        let mu = cur.u64("mu")?;
        let d = cur.u64("d")?;
        let r1 = cur.u64("r1")?;

        // Size the body before allocating so a corrupt `d` cannot request huge buffers.
        let body = usize::try_from(d)
            .ok()
            .and_then(|d| d.checked_mul(32))
            .and_then(|b| b.checked_add(32 + 4));
        match body {
            Some(b) if b <= bytes.len() - cur.pos => {}
            _ => {
                let available = (bytes.len() - cur.pos) / 8;
                let field = match available as u64 {
                    a if a < d => "z",
                    a if a < 2 * d => "delta",
                    a if a < 3 * d => "F",
                    a if a < 4 * d => "W",
                    _ if bytes.len() - cur.pos < 32 * d as usize + 32 => "digest",
                    _ => "checksum",
                };
                return Err(FormatError::Truncated(field).into());
            }
        }
        let d = d as usize;
        let expected_len = cur.pos + 32 * d + 36;
        let stored = u32::from_le_bytes(bytes[expected_len - 4..expected_len].try_into().unwrap());
        let computed = crc32fast::hash(&bytes[..expected_len - 4]);
        if stored != computed {
            return Err(FormatError::ChecksumMismatch { stored, computed }.into());
        }
        if bytes.len() > expected_len {
            return Err(FormatError::TrailingBytes(bytes.len() - expected_len).into());
        }

        let enc = DeltaEncoding {
            n,
            z: cur.u64s(d, "z")?,
            delta: cur.i64s(d, "delta")?,
            f: cur.i64s(d, "F")?,
            w: cur.i64s(d, "W")?,
            r1: (r1 != NO_R1).then_some(r1),
        };
        let digest: [u8; 32] = cur.take(32, "digest")?.try_into().unwrap();
        let meta = IndexMeta { n, q, mu, digest };
        Self::from_parts(enc, meta, variant)
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut buf = Vec::new();
        r.read_to_end(&mut buf)?;
        Self::from_bytes(&buf)
    }
}
