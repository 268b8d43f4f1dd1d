//! GF(4) arithmetic, packed vectors, and the DNA alphabet correspondence.
//!
//! GF(4) = {0, 1, w, w2} with w2 = w + 1 and characteristic 2. Elements are
//! stored in two bits: the low bit is the coefficient of 1, the high bit the
//! coefficient of w, so addition is a plain XOR of the bit patterns.
//!
//! Vectors pack 32 symbols per `u64` word, which makes row addition,
//! Hamming weight, and GC-weight cheap enough for exhaustive codeword scans.
//!
//! The DNA correspondence sends 0 -> A, 1 -> T, w -> C, w2 -> G. Under this
//! map the Watson-Crick complement of a word is addition of the all-ones
//! vector, and the GC-weight of a word is the number of symbols with the
//! high bit set.

use std::fmt;

use crate::{Error, Result};

/// An element of GF(4). Bit 0 carries the unit part, bit 1 the w part.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf4(u8);

const MUL_TABLE: [[u8; 4]; 4] = [
    [0, 0, 0, 0],
    [0, 1, 2, 3],
    [0, 2, 3, 1], // w * w = w2, w * w2 = 1
    [0, 3, 1, 2],
];

impl Gf4 {
    pub const ZERO: Gf4 = Gf4(0);
    pub const ONE: Gf4 = Gf4(1);
    pub const OMEGA: Gf4 = Gf4(2);
    pub const OMEGA_SQ: Gf4 = Gf4(3);

    /// All four elements in bit order.
    pub const ALL: [Gf4; 4] = [Gf4(0), Gf4(1), Gf4(2), Gf4(3)];

    /// Builds an element from its 2-bit pattern (masked to the low two bits).
    pub const fn from_bits(bits: u8) -> Gf4 {
        Gf4(bits & 0b11)
    }

    pub const fn bits(self) -> u8 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Multiplicative inverse; `None` for zero.
    pub const fn inverse(self) -> Option<Gf4> {
        match self.0 {
            0 => None,
            1 => Some(Gf4(1)),
            2 => Some(Gf4(3)),
            _ => Some(Gf4(2)),
        }
    }

    /// Parses one of the text symbols `0`, `1`, `w`, `W`.
    pub fn from_symbol(c: char) -> Result<Gf4> {
        match c {
            '0' => Ok(Gf4::ZERO),
            '1' => Ok(Gf4::ONE),
            'w' => Ok(Gf4::OMEGA),
            'W' => Ok(Gf4::OMEGA_SQ),
            other => Err(Error::InvalidSymbol(other.to_string())),
        }
    }

    pub const fn symbol(self) -> char {
        match self.0 {
            0 => '0',
            1 => '1',
            2 => 'w',
            _ => 'W',
        }
    }
}

impl std::ops::Add for Gf4 {
    type Output = Gf4;
    // Characteristic 2 with the polynomial-basis encoding: field addition
    // is exactly XOR of the bit patterns.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Gf4) -> Gf4 {
        Gf4(self.0 ^ rhs.0)
    }
}

impl std::ops::Mul for Gf4 {
    type Output = Gf4;
    fn mul(self, rhs: Gf4) -> Gf4 {
        Gf4(MUL_TABLE[self.0 as usize][rhs.0 as usize])
    }
}

impl fmt::Display for Gf4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

const SYMBOLS_PER_WORD: usize = 32;
/// Even bit positions: the unit part of every packed symbol.
const LO: u64 = 0x5555_5555_5555_5555;

/// A fixed-length vector over GF(4), packed two bits per symbol.
///
/// The length is immutable after creation. Unused high bits of the last
/// word are kept zero so that equality and hashing work on the raw words.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf4Vector {
    words: Vec<u64>,
    len: usize,
}

fn word_count(len: usize) -> usize {
    len.div_ceil(SYMBOLS_PER_WORD)
}

/// Mask selecting the used bits of the final word for a given length.
fn tail_mask(len: usize) -> u64 {
    let used = len % SYMBOLS_PER_WORD;
    if used == 0 {
        u64::MAX
    } else {
        (1u64 << (2 * used)) - 1
    }
}

impl Gf4Vector {
    pub fn zeros(len: usize) -> Gf4Vector {
        Gf4Vector { words: vec![0; word_count(len)], len }
    }

    /// The all-ones vector, i.e. the image of the complement translation.
    pub fn all_ones(len: usize) -> Gf4Vector {
        let mut words = vec![LO; word_count(len)];
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(len);
        }
        Gf4Vector { words, len }
    }

    pub fn from_elems(elems: &[Gf4]) -> Gf4Vector {
        let mut v = Gf4Vector::zeros(elems.len());
        for (i, &e) in elems.iter().enumerate() {
            v.set(i, e);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> Gf4 {
        debug_assert!(i < self.len);
        let bits = (self.words[i / SYMBOLS_PER_WORD] >> (2 * (i % SYMBOLS_PER_WORD))) & 0b11;
        Gf4::from_bits(bits as u8)
    }

    #[inline]
    pub fn set(&mut self, i: usize, x: Gf4) {
        debug_assert!(i < self.len);
        let w = &mut self.words[i / SYMBOLS_PER_WORD];
        let shift = 2 * (i % SYMBOLS_PER_WORD);
        *w = (*w & !(0b11 << shift)) | ((x.bits() as u64) << shift);
    }

    pub fn iter(&self) -> impl Iterator<Item = Gf4> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_all_ones(&self) -> bool {
        *self == Gf4Vector::all_ones(self.len)
    }

    /// Checked elementwise sum.
    pub fn add(&self, other: &Gf4Vector) -> Result<Gf4Vector> {
        self.check_len(other)?;
        let mut out = self.clone();
        out.add_assign(other);
        Ok(out)
    }

    /// Scalar multiple of the whole vector.
    pub fn scale(&self, s: Gf4) -> Gf4Vector {
        let mut out = Gf4Vector::zeros(self.len);
        for (dst, &src) in out.words.iter_mut().zip(&self.words) {
            *dst = scale_word(src, s);
        }
        out
    }

    #[inline]
    pub(crate) fn add_assign(&mut self, other: &Gf4Vector) {
        debug_assert_eq!(self.len, other.len);
        for (dst, &src) in self.words.iter_mut().zip(&other.words) {
            *dst ^= src;
        }
    }

    /// `self += s * other`; the workhorse of row reduction and enumeration.
    #[inline]
    pub(crate) fn add_assign_scaled(&mut self, other: &Gf4Vector, s: Gf4) {
        debug_assert_eq!(self.len, other.len);
        match s.bits() {
            0 => {}
            1 => self.add_assign(other),
            _ => {
                for (dst, &src) in self.words.iter_mut().zip(&other.words) {
                    *dst ^= scale_word(src, s);
                }
            }
        }
    }

    /// Number of nonzero symbols.
    #[inline]
    pub fn weight(&self) -> usize {
        self.words
            .iter()
            .map(|&w| ((w | (w >> 1)) & LO).count_ones() as usize)
            .sum()
    }

    /// Number of symbols mapping to C or G (high bit set).
    #[inline]
    pub fn gc_weight(&self) -> usize {
        self.words.iter().map(|&w| ((w >> 1) & LO).count_ones() as usize).sum()
    }

    /// Number of symbols equal to 1.
    #[inline]
    pub(crate) fn count_one_symbols(&self) -> usize {
        self.words
            .iter()
            .map(|&w| ((w & LO) & !((w >> 1) & LO)).count_ones() as usize)
            .sum()
    }

    /// Per-symbol counts `(n0, n1, nw, nW)`.
    pub fn symbol_counts(&self) -> [usize; 4] {
        let mut n1 = 0usize;
        let mut nw = 0usize;
        let mut nw2 = 0usize;
        for &w in &self.words {
            let lo = w & LO;
            let hi = (w >> 1) & LO;
            n1 += (lo & !hi).count_ones() as usize;
            nw += (hi & !lo).count_ones() as usize;
            nw2 += (hi & lo).count_ones() as usize;
        }
        [self.len - n1 - nw - nw2, n1, nw, nw2]
    }

    /// The coordinate-reversed vector.
    pub fn reversed(&self) -> Gf4Vector {
        let mut out = Gf4Vector::zeros(self.len);
        for i in 0..self.len {
            out.set(self.len - 1 - i, self.get(i));
        }
        out
    }

    /// Adds the all-ones vector, i.e. takes the field-side complement.
    pub fn complemented(&self) -> Gf4Vector {
        let mut out = self.clone();
        for (i, w) in out.words.iter_mut().enumerate() {
            let mask = if i + 1 == word_count(self.len) { LO & tail_mask(self.len) } else { LO };
            *w ^= mask;
        }
        out
    }

    /// Hamming distance to another vector of the same length.
    pub fn hamming(&self, other: &Gf4Vector) -> Result<usize> {
        self.check_len(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| {
                let d = a ^ b;
                ((d | (d >> 1)) & LO).count_ones() as usize
            })
            .sum())
    }

    /// Maps the vector to a DNA word via 0A 1T wC WG.
    pub fn to_dna(&self) -> DnaWord {
        const BASES: [u8; 4] = *b"ATCG";
        DnaWord(self.iter().map(|x| BASES[x.bits() as usize]).collect())
    }

    fn check_len(&self, other: &Gf4Vector) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch { left: self.len, right: other.len });
        }
        Ok(())
    }
}

#[inline]
fn scale_word(w: u64, s: Gf4) -> u64 {
    let lo = w & LO;
    let hi = (w >> 1) & LO;
    match s.bits() {
        0 => 0,
        1 => w,
        2 => hi | ((hi ^ lo) << 1),       // w * (a w + b) = (a+b) w + a
        _ => (hi ^ lo) | (lo << 1),       // w2 * (a w + b) = b w + (a+b)
    }
}

impl fmt::Display for Gf4Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", x)?;
        }
        Ok(())
    }
}

/// Parses a whitespace-separated row of `0 1 w W` symbols.
pub fn parse_vector(s: &str) -> Result<Gf4Vector> {
    let mut elems = Vec::new();
    for tok in s.split_whitespace() {
        let mut chars = tok.chars();
        let c = chars.next().unwrap();
        if chars.next().is_some() {
            return Err(Error::InvalidSymbol(tok.to_string()));
        }
        elems.push(Gf4::from_symbol(c)?);
    }
    Ok(Gf4Vector::from_elems(&elems))
}

/// Parses a matrix given one row per line; all rows must agree in length.
pub fn parse_matrix(s: &str) -> Result<Vec<Gf4Vector>> {
    let mut rows = Vec::new();
    for (idx, line) in s.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = parse_vector(line).map_err(|e| Error::Parse { line: idx + 1, msg: e.to_string() })?;
        if let Some(first) = rows.first() {
            let first: &Gf4Vector = first;
            if first.len() != row.len() {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("row length {} differs from {}", row.len(), first.len()),
                });
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Formats a matrix as one row per line in the `0 1 w W` text format.
pub fn format_matrix(rows: &[Gf4Vector]) -> String {
    let mut out = String::new();
    for row in rows {
        out.push_str(&row.to_string());
        out.push('\n');
    }
    out
}

/// A DNA word over the uppercase alphabet ACGT.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DnaWord(Vec<u8>);

impl DnaWord {
    /// Parses an uppercase ACGT string; anything else is rejected.
    pub fn parse(s: &str) -> Result<DnaWord> {
        let mut bases = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                'A' | 'C' | 'G' | 'T' => bases.push(c as u8),
                other => return Err(Error::InvalidBase(other)),
            }
        }
        Ok(DnaWord(bases))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_str(&self) -> &str {
        // Invariant: only ASCII ACGT bytes are stored.
        std::str::from_utf8(&self.0).unwrap()
    }

    pub fn reverse(&self) -> DnaWord {
        DnaWord(self.0.iter().rev().copied().collect())
    }

    /// Watson-Crick complement: A<->T, C<->G.
    pub fn complement(&self) -> DnaWord {
        DnaWord(self.0.iter().map(|&b| complement_base(b)).collect())
    }

    pub fn reverse_complement(&self) -> DnaWord {
        DnaWord(self.0.iter().rev().map(|&b| complement_base(b)).collect())
    }

    pub fn hamming(&self, other: &DnaWord) -> Result<usize> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch { left: self.len(), right: other.len() });
        }
        Ok(self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count())
    }

    /// Number of G and C symbols.
    pub fn gc_weight(&self) -> usize {
        self.0.iter().filter(|&&b| b == b'G' || b == b'C').count()
    }

    /// Inverse of [`Gf4Vector::to_dna`].
    pub fn to_vector(&self) -> Gf4Vector {
        let elems: Vec<Gf4> = self
            .0
            .iter()
            .map(|&b| match b {
                b'A' => Gf4::ZERO,
                b'T' => Gf4::ONE,
                b'C' => Gf4::OMEGA,
                _ => Gf4::OMEGA_SQ,
            })
            .collect();
        Gf4Vector::from_elems(&elems)
    }
}

fn complement_base(b: u8) -> u8 {
    match b {
        b'A' => b'T',
        b'T' => b'A',
        b'C' => b'G',
        _ => b'C',
    }
}

impl fmt::Display for DnaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
