//! Binary codes and the totally separable packings of `ℓ1` balls centred at their
//! codewords.
//!
//! For a code `C ⊆ {0,1}^d` with minimum Hamming distance `D`, the balls of radius
//! `D/2` around the codewords form a packing, and for each codeword `u` the
//! functional `f = 2u - (1, ..., 1)` separates its ball from all the others by the
//! single hyperplane `f(x) = f(u) - D/2`. The Reed–Solomon construction over
//! `GF(2^k)` gives codes of length `4^k` in which every codeword has many neighbours
//! at distance exactly `D`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::Functional;
use crate::report::{Condition, VerificationReport};
use crate::scalar::{int, rat, Rational, Scalar};

/// `GF(2^k)` for `1 ≤ k ≤ 4`, elements as bit patterns `0..2^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinaryField {
    k: u32,
    modulus: u32,
}

impl BinaryField {
    /// Reduction polynomials: `x + 1`, `x² + x + 1`, `x³ + x + 1`, `x⁴ + x + 1`.
    pub fn new(k: u32) -> Result<Self> {
        let modulus = match k {
            1 => 0b11,
            2 => 0b111,
            3 => 0b1011,
            4 => 0b10011,
            _ => return Err(Error::Domain(format!("field degree must be in 1..=4, got {k}"))),
        };
        Ok(BinaryField { k, modulus })
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        1 << self.k
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let mut product = 0u32;
        for bit in 0..self.k {
            if b >> bit & 1 == 1 {
                product ^= a << bit;
            }
        }
        for bit in (self.k..2 * self.k).rev() {
            if product >> bit & 1 == 1 {
                product ^= self.modulus << (bit - self.k);
            }
        }
        product
    }

    /// Horner evaluation of `Σ c_t x^t`.
    pub fn eval(&self, coefficients: &[u32], x: u32) -> u32 {
        coefficients
            .iter()
            .rev()
            .fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }
}

/// A word of `{0,1}^len`, bit `i` of block `i / 64` holding coordinate `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitWord {
    len: usize,
    blocks: Vec<u64>,
}

impl BitWord {
    pub fn zeros(len: usize) -> Self {
        BitWord {
            len,
            blocks: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut w = BitWord::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                w.set(i);
            }
        }
        w
    }

    /// Integer vector with entries in `{0, 1}`; anything else is a domain error.
    pub fn from_ints(entries: &[i64]) -> Result<Self> {
        let bits = entries
            .iter()
            .map(|&e| match e {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::Domain(format!("entry {other} is not binary"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BitWord::from_bits(&bits))
    }

    /// Parses a string of `0` and `1` characters.
    pub fn parse(text: &str) -> Result<Self> {
        let bits = text
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("invalid bit {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BitWord::from_bits(&bits))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.blocks[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        self.blocks[i / 64] |= 1 << (i % 64);
    }

    pub fn weight(&self) -> u32 {
        self.blocks.iter().map(|b| b.count_ones()).sum()
    }

    pub fn hamming(&self, other: &BitWord) -> u32 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a ^ b).count_ones())
            .sum()
    }

    /// `f_u(x)` for `f_u = 2u - (1, ..., 1)` and `u = self`:
    /// `|u ∧ x| - |¬u ∧ x|`.
    pub fn separating_value(&self, x: &BitWord) -> i64 {
        let (mut plus, mut minus) = (0u32, 0u32);
        for (u, x) in self.blocks.iter().zip(&x.blocks) {
            plus += (u & x).count_ones();
            minus += (!u & x).count_ones();
        }
        i64::from(plus) - i64::from(minus)
    }

    pub fn to_ints(&self) -> Vec<i64> {
        (0..self.len).map(|i| i64::from(self.get(i))).collect()
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Distinct codewords of a common length `d ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryCode {
    length: usize,
    words: Vec<BitWord>,
    min_distance: Option<u32>,
}

impl BinaryCode {
    pub fn new(words: Vec<BitWord>) -> Result<Self> {
        let length = words
            .first()
            .map(BitWord::len)
            .ok_or_else(|| Error::Domain("a code needs at least one codeword".to_string()))?;
        if length == 0 {
            return Err(Error::Domain("codewords must have positive length".to_string()));
        }
        for w in &words {
            if w.len() != length {
                return Err(Error::Dimension {
                    expected: length,
                    found: w.len(),
                });
            }
        }
        let mut sorted: Vec<&BitWord> = words.iter().collect();
        sorted.sort();
        if let Some(pair) = sorted.windows(2).find(|p| p[0] == p[1]) {
            return Err(Error::Domain(format!("duplicate codeword {}", pair[0])));
        }
        Ok(BinaryCode {
            length,
            words,
            min_distance: None,
        })
    }

    /// Like [`BinaryCode::new`], also computing and caching the minimum distance.
    pub fn with_min_distance(words: Vec<BitWord>) -> Result<Self> {
        let mut code = BinaryCode::new(words)?;
        code.min_distance = Some(min_distance(&code)?);
        Ok(code)
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn words(&self) -> &[BitWord] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn cached_min_distance(&self) -> Option<u32> {
        self.min_distance
    }

    fn distance(&self) -> Result<u32> {
        match self.min_distance {
            Some(d) => Ok(d),
            None => min_distance(self),
        }
    }

    pub fn index_of(&self, word: &BitWord) -> Option<usize> {
        self.words.iter().position(|w| w == word)
    }
}

/// Minimum pairwise Hamming distance, by brute force over all pairs.
pub fn min_distance(code: &BinaryCode) -> Result<u32> {
    if code.len() < 2 {
        return Err(Error::Domain("minimum distance needs at least two codewords".to_string()));
    }
    let words = code.words();
    let mut best = u32::MAX;
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            best = best.min(words[i].hamming(&words[j]));
        }
    }
    Ok(best)
}

/// Number of codewords at Hamming distance exactly `D` from `u`.
pub fn min_distance_neighbor_count(code: &BinaryCode, u: &BitWord) -> Result<usize> {
    if code.index_of(u).is_none() {
        return Err(Error::Domain(format!("{u} is not a codeword")));
    }
    let d = code.distance()?;
    Ok(code.words().iter().filter(|w| w.hamming(u) == d).count())
}

/// `f = 2u - (1, ..., 1)` for a 0/1 vector `u`.
pub fn separating_functional(u: &[i64]) -> Result<Functional> {
    let coefficients = u
        .iter()
        .map(|&e| match e {
            0 => Ok(Scalar::integer(-1)),
            1 => Ok(Scalar::integer(1)),
            other => Err(Error::Domain(format!("entry {other} is not binary"))),
        })
        .collect::<Result<Vec<_>>>()?;
    Functional::new(coefficients)
}

/// Structural parameters of the Reed–Solomon based code for a given `k`: length
/// `q²` with `q = 2^k`, `q^(q/2)` codewords, minimum distance `2(q/2 + 1)`, and
/// `(q - 1)·C(q, q/2 - 1)` neighbours at that distance for every codeword.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlonParameters {
    pub k: u32,
    pub q: u32,
    pub length: usize,
    pub codewords: u128,
    pub min_distance: u32,
    pub neighbor_count: u64,
    /// `k = 1`: the message space is the constants only.
    pub degenerate: bool,
}

pub fn alon_parameters(k: u32) -> Result<AlonParameters> {
    let field = BinaryField::new(k)?;
    let q = field.order();
    let half = q / 2;
    Ok(AlonParameters {
        k,
        q,
        length: (q * q) as usize,
        codewords: u128::from(q).pow(half),
        min_distance: 2 * (q - half + 1),
        neighbor_count: u64::from(q - 1) * binomial(u64::from(q), u64::from(half - 1)),
        degenerate: k == 1,
    })
}

fn binomial(n: u64, r: u64) -> u64 {
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Codewords of the Reed–Solomon code over `GF(2^k)` with messages of degree
/// `< q/2`, as symbol sequences. Message `m` has coefficients given by the base-`q`
/// digits of `m`, constant term first; evaluation points are `0, 1, ..., q - 1`.
pub fn rs_symbol_code(k: u32) -> Result<Vec<Vec<u32>>> {
    let params = alon_parameters(k)?;
    if params.codewords > 1 << 16 {
        return Err(Error::TooLarge(format!(
            "the code for k = {k} has {} codewords",
            params.codewords
        )));
    }
    let field = BinaryField::new(k)?;
    let q = params.q;
    let half = (q / 2) as usize;
    let mut out = Vec::with_capacity(params.codewords as usize);
    for m in 0..params.codewords as u32 {
        let mut digits = m;
        let coefficients: Vec<u32> = (0..half)
            .map(|_| {
                let d = digits % q;
                digits /= q;
                d
            })
            .collect();
        out.push((0..q).map(|x| field.eval(&coefficients, x)).collect());
    }
    Ok(out)
}

/// Indicator encoding: symbol `s` at position `e` sets coordinate `e·q + s`.
pub fn indicator_encode(symbols: &[u32], q: u32) -> BitWord {
    let mut w = BitWord::zeros(symbols.len() * q as usize);
    for (e, &s) in symbols.iter().enumerate() {
        w.set(e * q as usize + s as usize);
    }
    w
}

/// The binary code of length `4^k` obtained from [`rs_symbol_code`] by indicator
/// encoding, with its minimum distance computed by brute force. `k = 4` has `2^32`
/// codewords and is refused; its counts are available from [`alon_parameters`].
pub fn alon_rs_code(k: u32) -> Result<BinaryCode> {
    let params = alon_parameters(k)?;
    let words = rs_symbol_code(k)?
        .iter()
        .map(|s| indicator_encode(s, params.q))
        .collect();
    BinaryCode::with_min_distance(words)
}

/// Balls of radius `radius` in `ℓ1^d` centred at the codewords.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Packing {
    code: BinaryCode,
    radius: Rational,
}

impl L1Packing {
    /// Packing of radius `D/2`.
    pub fn from_code(code: BinaryCode) -> Result<Self> {
        let d = code.distance()?;
        let radius = rat(i64::from(d), 2);
        let mut code = code;
        code.min_distance = Some(d);
        Ok(L1Packing { code, radius })
    }

    /// Packing with an explicit radius; it must not exceed `D/2`.
    pub fn new(code: BinaryCode, radius: Rational) -> Result<Self> {
        let d = code.distance()?;
        if radius > rat(i64::from(d), 2) || radius <= int(0) {
            return Err(Error::Parameter(format!(
                "radius {radius} is not in (0, D/2] for D = {d}"
            )));
        }
        let mut code = code;
        code.min_distance = Some(d);
        Ok(L1Packing { code, radius })
    }

    pub fn code(&self) -> &BinaryCode {
        &self.code
    }

    pub fn radius(&self) -> &Rational {
        &self.radius
    }

    pub fn min_distance(&self) -> u32 {
        self.code.min_distance.expect("set on construction")
    }
}

/// The hyperplane `f_u(x) = f_u(u) - D/2` separating the ball around `u`, as the
/// functional and its level.
pub fn separating_hyperplane(u: &BitWord, d: u32) -> Result<(Functional, Rational)> {
    let f = separating_functional(&u.to_ints())?;
    let level = int(i64::from(u.weight())) - rat(i64::from(d), 2);
    Ok((f, level))
}

/// Checks `f_u(u) - f_u(u') ≥ D` for every ordered pair of distinct centres, so that
/// one hyperplane per centre has every other ball in its closed far side.
pub fn verify_total_separability_l1(packing: &L1Packing) -> Result<VerificationReport> {
    let d = packing.min_distance();
    if packing.radius != rat(i64::from(d), 2) {
        return Err(Error::Parameter(format!(
            "radius {} differs from D/2 = {}/2",
            packing.radius, d
        )));
    }
    let words = packing.code.words();
    let mut report = VerificationReport::default();
    for (i, u) in words.iter().enumerate() {
        let own = u.separating_value(u);
        for (j, w) in words.iter().enumerate() {
            if i == j {
                continue;
            }
            let gap = own - u.separating_value(w);
            if gap < i64::from(d) {
                report.push(i, j, Condition::SeparationGap, Scalar::integer(gap));
            }
        }
    }
    Ok(report)
}

/// Unordered pairs of centres at `ℓ1` distance exactly `2·radius`.
pub fn touching_pairs(packing: &L1Packing) -> Vec<(usize, usize)> {
    let target = packing.radius.clone() * int(2);
    if !target.is_integer() {
        return Vec::new();
    }
    let target: u32 = match target.to_integer().try_into() {
        Ok(t) => t,
        Err(_) => return Vec::new(),
    };
    let words = packing.code.words();
    let mut out = Vec::new();
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            if words[i].hamming(&words[j]) == target {
                out.push((i, j));
            }
        }
    }
    out
}

/// Contact degree of every centre.
pub fn contact_degrees(packing: &L1Packing) -> Vec<usize> {
    let mut degrees = vec![0; packing.code.len()];
    for (i, j) in touching_pairs(packing) {
        degrees[i] += 1;
        degrees[j] += 1;
    }
    degrees
}

/// Serialises one codeword per line.
pub fn format_code(code: &BinaryCode) -> String {
    let mut out = String::new();
    for w in code.words() {
        out.push_str(&w.to_string());
        out.push('\n');
    }
    out
}
