//! Words over the alphabet `{0, …, q-1}` and the channel's additive action.
//!
//! A word is a slice of symbols `z_1 … z_n`; when read as a number, `z_1` is
//! the most significant digit. `⊕` is per-symbol addition mod `q` and `⊖`
//! its inverse (XOR when `q = 2`).

use crate::{Error, Result};

pub fn check_symbols(word: &[u8], alphabet: usize) -> Result<()> {
    match word.iter().find(|&&s| s as usize >= alphabet) {
        Some(&symbol) => Err(Error::SymbolOutOfRange { symbol, alphabet }),
        None => Ok(()),
    }
}

pub fn check_length(word: &[u8], n: usize) -> Result<()> {
    if word.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: word.len(),
        });
    }
    Ok(())
}

/// `x ⊕ z`.
pub fn add(x: &[u8], z: &[u8], alphabet: usize) -> Vec<u8> {
    let q = alphabet as u16;
    x.iter()
        .zip(z)
        .map(|(&a, &b)| ((a as u16 + b as u16) % q) as u8)
        .collect()
}

/// `y ⊖ z`, written into `out`.
pub fn subtract_into(y: &[u8], z: &[u8], alphabet: usize, out: &mut Vec<u8>) {
    out.clear();
    if alphabet == 2 {
        out.extend(y.iter().zip(z).map(|(&a, &b)| a ^ b));
    } else {
        let q = alphabet as u16;
        out.extend(
            y.iter()
                .zip(z)
                .map(|(&a, &b)| ((a as u16 + q - b as u16) % q) as u8),
        );
    }
}

pub fn subtract(y: &[u8], z: &[u8], alphabet: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(y.len());
    subtract_into(y, z, alphabet, &mut out);
    out
}

/// Parse a binary word of length `n` from hex; the hex value is the word
/// read as a base-2 integer.
pub fn from_hex(hex: &str, n: usize) -> Result<Vec<u8>> {
    let hex = hex.trim().trim_start_matches("0x");
    let mut bits = Vec::with_capacity(hex.len() * 4);
    for c in hex.chars() {
        let v = c
            .to_digit(16)
            .ok_or_else(|| Error::InvalidArgument(format!("bad hex digit {c:?}")))?;
        bits.extend((0..4).rev().map(|i| ((v >> i) & 1) as u8));
    }
    let first_one = bits.iter().position(|&b| b == 1).unwrap_or(bits.len());
    let significant = bits.len() - first_one;
    if significant > n {
        return Err(Error::InvalidArgument(format!(
            "hex value needs {significant} bits, word length is {n}"
        )));
    }
    let mut word = vec![0u8; n - significant];
    word.extend_from_slice(&bits[first_one..]);
    Ok(word)
}

/// Hex form of a binary word (see [`from_hex`]).
pub fn to_hex(word: &[u8]) -> String {
    let pad = (4 - word.len() % 4) % 4;
    let mut padded = vec![0u8; pad];
    padded.extend_from_slice(word);
    padded
        .chunks(4)
        .map(|c| {
            let v = c.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32);
            char::from_digit(v, 16).unwrap()
        })
        .collect()
}

/// Compact text form: hex for binary words, comma-separated symbols otherwise.
pub fn format_word(word: &[u8], alphabet: usize) -> String {
    if alphabet == 2 {
        to_hex(word)
    } else {
        word.iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Inverse of [`format_word`].
pub fn parse_word(text: &str, n: usize, alphabet: usize) -> Result<Vec<u8>> {
    let word = if alphabet == 2 && !text.contains(',') {
        from_hex(text, n)?
    } else {
        text.split(',')
            .map(|s| {
                s.trim()
                    .parse::<u8>()
                    .map_err(|e| Error::InvalidArgument(format!("bad symbol {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?
    };
    check_length(&word, n)?;
    check_symbols(&word, alphabet)?;
    Ok(word)
}

/// Digits of a word as a string, e.g. `0100`.
pub fn to_digits(word: &[u8]) -> String {
    word.iter()
        .map(|&s| char::from_digit(s as u32, 36).unwrap_or('?'))
        .collect()
}
