//! Container for the coded streams of one block.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic      4 bytes  "GKSB"
//! version    u8       1
//! scheme     u8       0 gk, 1 binary-helper, 2 general-helper, 3 limited-helper
//! corner     u8       0 X-side, 1 Y-side (binary-helper only, else 0)
//! reserved   u8       0
//! n          u64      block length
//! seed       u64      sampling seed
//! count      u16      number of streams
//! directory  count x (name_len u8, name bytes, bit_len u64)
//! payloads   count x ceil(bit_len / 8) bytes, in directory order,
//!            zero-padded to a byte boundary
//! ```

use super::arith::BitString;
use super::CodecError;

pub const MAGIC: &[u8; 4] = b"GKSB";
pub const VERSION: u8 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Gk,
    BinaryHelper,
    GeneralHelper,
    LimitedHelper,
}

impl Scheme {
    fn tag(self) -> u8 {
        match self {
            Scheme::Gk => 0,
            Scheme::BinaryHelper => 1,
            Scheme::GeneralHelper => 2,
            Scheme::LimitedHelper => 3,
        }
    }

    fn from_tag(tag: u8) -> Option<Self> {
        Some(match tag {
            0 => Scheme::Gk,
            1 => Scheme::BinaryHelper,
            2 => Scheme::GeneralHelper,
            3 => Scheme::LimitedHelper,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Gk => "gk",
            Scheme::BinaryHelper => "binary-helper",
            Scheme::GeneralHelper => "general-helper",
            Scheme::LimitedHelper => "limited-helper",
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        [Scheme::Gk, Scheme::BinaryHelper, Scheme::GeneralHelper, Scheme::LimitedHelper]
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown scheme {s:?}"))
    }
}

/// Which source is sent in full in the binary helper scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Corner {
    /// Y in full, X given its label.
    #[default]
    XSide,
    /// X in full, Y given its label.
    YSide,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stream {
    pub name: String,
    pub bits: BitString,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedBundle {
    pub scheme: Scheme,
    pub corner: Corner,
    pub n: u64,
    pub seed: u64,
    pub streams: Vec<Stream>,
}

impl EncodedBundle {
    pub fn stream(&self, name: &str) -> Option<&BitString> {
        self.streams.iter().find(|s| s.name == name).map(|s| &s.bits)
    }

    pub fn stream_mut(&mut self, name: &str) -> Option<&mut BitString> {
        self.streams.iter_mut().find(|s| s.name == name).map(|s| &mut s.bits)
    }

    pub fn bit_lengths(&self) -> Vec<(&str, u64)> {
        self.streams.iter().map(|s| (s.name.as_str(), s.bits.len())).collect()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        out.push(self.scheme.tag());
        out.push(match self.corner {
            Corner::XSide => 0,
            Corner::YSide => 1,
        });
        out.push(0);
        out.extend_from_slice(&self.n.to_le_bytes());
        out.extend_from_slice(&self.seed.to_le_bytes());
        let count = u16::try_from(self.streams.len()).expect("few streams");
        out.extend_from_slice(&count.to_le_bytes());
        for s in &self.streams {
            let name = s.name.as_bytes();
            out.push(u8::try_from(name.len()).expect("short stream name"));
            out.extend_from_slice(name);
            out.extend_from_slice(&s.bits.len().to_le_bytes());
        }
        for s in &self.streams {
            out.extend_from_slice(s.bits.as_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CodecError> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(CodecError::BadBundle("bad magic".into()));
        }
        let version = r.u8()?;
        if version != VERSION {
            return Err(CodecError::BadBundle(format!("unsupported version {version}")));
        }
        let tag = r.u8()?;
        let scheme = Scheme::from_tag(tag).ok_or_else(|| CodecError::BadBundle(format!("unknown scheme tag {tag}")))?;
        let corner = match r.u8()? {
            0 => Corner::XSide,
            1 => Corner::YSide,
            c => return Err(CodecError::BadBundle(format!("unknown corner {c}"))),
        };
        r.u8()?;
        let n = r.u64()?;
        let seed = r.u64()?;
        let count = u16::from_le_bytes(r.take(2)?.try_into().unwrap());
        let mut directory = Vec::with_capacity(count as usize);
        for _ in 0..count {
            let len = r.u8()? as usize;
            let name = std::str::from_utf8(r.take(len)?)
                .map_err(|_| CodecError::BadBundle("stream name is not utf-8".into()))?
                .to_owned();
            directory.push((name, r.u64()?));
        }
        let mut streams = Vec::with_capacity(directory.len());
        for (name, bit_len) in directory {
            let payload = r.take(usize::try_from(bit_len.div_ceil(8)).map_err(|_| r.truncated())?)?;
            let bits = BitString::from_bytes(payload.to_vec(), bit_len).expect("length matches");
            streams.push(Stream { name, bits });
        }
        if r.pos != bytes.len() {
            return Err(CodecError::BadBundle(format!("{} trailing bytes", bytes.len() - r.pos)));
        }
        Ok(Self {
            scheme,
            corner,
            n,
            seed,
            streams,
        })
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn truncated(&self) -> CodecError {
        CodecError::BadBundle(format!("truncated at byte {}", self.pos))
    }

    fn take(&mut self, k: usize) -> Result<&'a [u8], CodecError> {
        let end = self.pos.checked_add(k).filter(|&e| e <= self.bytes.len()).ok_or_else(|| self.truncated())?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u8(&mut self) -> Result<u8, CodecError> {
        Ok(self.take(1)?[0])
    }

    fn u64(&mut self) -> Result<u64, CodecError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}
