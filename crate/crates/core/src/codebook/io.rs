//! Binary codebook files.
//!
//! Layout, integers little-endian:
//!
//! ```text
//! "GRCB" | version u8 | kind u8 (0 explicit, 1 linear) | alphabet u16
//!        | n u32 | rate f64 | seed u64
//! explicit: M u64, then M words
//! linear:   k u32, then the k generator rows
//! ```
//!
//! Binary words and generator rows are packed eight symbols per byte, most
//! significant bit first; larger alphabets use one byte per symbol.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{Codebook, ExplicitCodebook, LinearCodebook};
use crate::{Error, Result};

const MAGIC: &[u8; 4] = b"GRCB";
const VERSION: u8 = 1;

fn pack_bits(word: &[u8], out: &mut Vec<u8>) {
    for chunk in word.chunks(8) {
        let mut byte = 0u8;
        for (i, &b) in chunk.iter().enumerate() {
            byte |= (b & 1) << (7 - i);
        }
        out.push(byte);
    }
}

fn unpack_bits(bytes: &[u8], n: usize, out: &mut Vec<u8>) {
    out.extend((0..n).map(|j| (bytes[j / 8] >> (7 - j % 8)) & 1));
}

pub fn write_codebook<W: Write>(cb: &Codebook, mut w: W) -> Result<()> {
    let mut buf = Vec::new();
    buf.extend_from_slice(MAGIC);
    buf.push(VERSION);
    buf.push(match cb {
        Codebook::Explicit(_) => 0,
        Codebook::Linear(_) => 1,
    });
    buf.extend_from_slice(&(cb.alphabet_size() as u16).to_le_bytes());
    buf.extend_from_slice(&(cb.n() as u32).to_le_bytes());
    buf.extend_from_slice(&cb.rate().to_le_bytes());
    buf.extend_from_slice(&cb.seed().to_le_bytes());
    match cb {
        Codebook::Explicit(c) => {
            buf.extend_from_slice(&c.len().to_le_bytes());
            if c.alphabet_size() == 2 {
                for word in c.iter() {
                    pack_bits(word, &mut buf);
                }
            } else {
                buf.extend_from_slice(c.flat());
            }
        }
        Codebook::Linear(c) => {
            buf.extend_from_slice(&(c.k() as u32).to_le_bytes());
            for row in c.generator_rows() {
                pack_bits(&row, &mut buf);
            }
        }
    }
    w.write_all(&buf)?;
    w.flush()?;
    Ok(())
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(len)
            .filter(|&e| e <= self.data.len())
            .ok_or_else(|| Error::Format("truncated file".into()))?;
        let s = &self.data[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N]> {
        Ok(self.take(N)?.try_into().unwrap())
    }
}

pub fn read_codebook<R: Read>(mut r: R) -> Result<Codebook> {
    let mut data = Vec::new();
    r.read_to_end(&mut data)?;
    let mut c = Cursor { data: &data, pos: 0 };
    if c.take(4)? != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = c.array::<1>()?[0];
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let kind = c.array::<1>()?[0];
    let alphabet = u16::from_le_bytes(c.array()?) as usize;
    let n = u32::from_le_bytes(c.array()?) as usize;
    let rate = f64::from_le_bytes(c.array()?);
    let seed = u64::from_le_bytes(c.array()?);
    if n == 0 || !(2..=256).contains(&alphabet) {
        return Err(Error::Format(format!("bad header: n = {n}, alphabet = {alphabet}")));
    }
    let row_bytes = n.div_ceil(8);
    let cb = match kind {
        0 => {
            let m = u64::from_le_bytes(c.array()?) as usize;
            let per_word = if alphabet == 2 { row_bytes } else { n };
            let body = c.take(m.checked_mul(per_word).ok_or_else(|| Error::Format("size overflow".into()))?)?;
            let mut words = Vec::with_capacity(m * n);
            if alphabet == 2 {
                for chunk in body.chunks_exact(row_bytes) {
                    unpack_bits(chunk, n, &mut words);
                }
            } else {
                crate::word::check_symbols(body, alphabet)?;
                words.extend_from_slice(body);
            }
            Codebook::Explicit(ExplicitCodebook::from_flat(n, alphabet, rate, seed, words))
        }
        1 => {
            if alphabet != 2 {
                return Err(Error::NonBinaryLinear(alphabet));
            }
            let k = u32::from_le_bytes(c.array()?) as usize;
            let body = c.take(k * row_bytes)?;
            let rows: Vec<Vec<u8>> = body
                .chunks_exact(row_bytes)
                .map(|chunk| {
                    let mut row = Vec::with_capacity(n);
                    unpack_bits(chunk, n, &mut row);
                    row
                })
                .collect();
            let mut code = LinearCodebook::from_generator(&rows)?;
            code.set_seed(seed);
            Codebook::Linear(code)
        }
        other => return Err(Error::Format(format!("unknown codebook kind {other}"))),
    };
    if c.pos != data.len() {
        return Err(Error::Format("trailing bytes".into()));
    }
    Ok(cb)
}

pub fn save_codebook(cb: &Codebook, path: impl AsRef<Path>) -> Result<()> {
    write_codebook(cb, BufWriter::new(File::create(path)?))
}

pub fn load_codebook(path: impl AsRef<Path>) -> Result<Codebook> {
    read_codebook(BufReader::new(File::open(path)?))
}
