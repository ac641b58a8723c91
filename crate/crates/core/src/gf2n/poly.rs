//! Polynomials over GF(2) and their products.

use std::fmt;

use crate::conv::{self, Concrete};

/// How polynomial products are computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MulStrategy {
    #[default]
    Schoolbook,
    Karatsuba,
    FftRadix3,
}

impl MulStrategy {
    pub const ALL: [MulStrategy; 3] = [
        MulStrategy::Schoolbook,
        MulStrategy::Karatsuba,
        MulStrategy::FftRadix3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MulStrategy::Schoolbook => "schoolbook",
            MulStrategy::Karatsuba => "karatsuba",
            MulStrategy::FftRadix3 => "fft_radix3",
        }
    }
}

impl std::str::FromStr for MulStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "schoolbook" => Ok(MulStrategy::Schoolbook),
            "karatsuba" => Ok(MulStrategy::Karatsuba),
            "fft_radix3" | "fft" => Ok(MulStrategy::FftRadix3),
            other => Err(format!("unknown multiplication strategy `{other}`")),
        }
    }
}

impl fmt::Display for MulStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Karatsuba falls back to schoolbook when an operand has degree below this.
pub const KARATSUBA_THRESHOLD: usize = 32;
/// The FFT route falls back to schoolbook when the product has degree below this.
pub const FFT_THRESHOLD: usize = 81;

/// A polynomial over GF(2); bit `i` of the packed words is the coefficient of `x^i`.
///
/// Always normalized: the last word is nonzero, so the zero polynomial has no
/// words and `degree()` returns `None`.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct BitPoly {
    words: Vec<u64>,
}

fn clmul64(a: u64, b: u64) -> (u64, u64) {
    let (mut lo, mut hi) = (0u64, 0u64);
    let mut b = b;
    while b != 0 {
        let i = b.trailing_zeros();
        lo ^= a << i;
        if i > 0 {
            hi ^= a >> (64 - i);
        }
        b &= b - 1;
    }
    (lo, hi)
}

impl BitPoly {
    pub fn zero() -> Self {
        BitPoly { words: Vec::new() }
    }

    pub fn one() -> Self {
        BitPoly { words: vec![1] }
    }

    /// `x^i`.
    pub fn monomial(i: usize) -> Self {
        let mut p = BitPoly {
            words: vec![0; i / 64 + 1],
        };
        p.words[i / 64] = 1 << (i % 64);
        p
    }

    pub fn from_words(words: Vec<u64>) -> Self {
        let mut p = BitPoly { words };
        p.normalize();
        p
    }

    pub fn from_u64(v: u64) -> Self {
        Self::from_words(vec![v])
    }

    pub fn from_coeffs(bits: impl IntoIterator<Item = usize>) -> Self {
        let mut p = Self::zero();
        for i in bits {
            p.flip(i);
        }
        p
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - last.leading_zeros() as usize)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    pub fn flip(&mut self, i: usize) {
        if self.words.len() <= i / 64 {
            self.words.resize(i / 64 + 1, 0);
        }
        self.words[i / 64] ^= 1 << (i % 64);
        self.normalize();
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Exponents of the nonzero coefficients, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(wi * 64 + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }

    pub fn add(&self, other: &BitPoly) -> BitPoly {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut w = long.words.clone();
        for (a, b) in w.iter_mut().zip(&short.words) {
            *a ^= b;
        }
        Self::from_words(w)
    }

    pub fn shl(&self, s: usize) -> BitPoly {
        if self.is_zero() {
            return Self::zero();
        }
        let (ws, bs) = (s / 64, s % 64);
        let mut w = vec![0u64; self.words.len() + ws + 1];
        for (i, &x) in self.words.iter().enumerate() {
            w[i + ws] ^= x << bs;
            if bs > 0 {
                w[i + ws + 1] ^= x >> (64 - bs);
            }
        }
        Self::from_words(w)
    }

    /// Coefficients `[start, start + len)` shifted down to position 0.
    pub fn extract(&self, start: usize, len: usize) -> BitPoly {
        let mut out = Self::zero();
        for i in self.support() {
            if i >= start && i < start + len {
                out.flip(i - start);
            }
        }
        out
    }

    /// Coefficients below `x^len`.
    pub fn truncate(&self, len: usize) -> BitPoly {
        let mut w: Vec<u64> = self.words.iter().take(len.div_ceil(64)).copied().collect();
        if len % 64 != 0 {
            if let Some(last) = w.get_mut(len / 64) {
                *last &= (1u64 << (len % 64)) - 1;
            }
        }
        Self::from_words(w)
    }

    pub fn square(&self) -> BitPoly {
        let mut w = vec![0u64; 2 * self.words.len()];
        for (i, &x) in self.words.iter().enumerate() {
            w[2 * i] = spread32(x as u32);
            w[2 * i + 1] = spread32((x >> 32) as u32);
        }
        Self::from_words(w)
    }

    pub fn mul(&self, other: &BitPoly, strategy: MulStrategy) -> BitPoly {
        match strategy {
            MulStrategy::Schoolbook => self.mul_schoolbook(other),
            MulStrategy::Karatsuba => mul_karatsuba(self, other),
            MulStrategy::FftRadix3 => mul_fft(self, other),
        }
    }

    pub fn mul_schoolbook(&self, other: &BitPoly) -> BitPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut w = vec![0u64; self.words.len() + other.words.len()];
        for (i, &a) in self.words.iter().enumerate() {
            for (j, &b) in other.words.iter().enumerate() {
                let (lo, hi) = clmul64(a, b);
                w[i + j] ^= lo;
                w[i + j + 1] ^= hi;
            }
        }
        Self::from_words(w)
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, divisor: &BitPoly) -> (BitPoly, BitPoly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let mut r = self.clone();
        let mut quot = Self::zero();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let s = rd - dd;
            quot.flip(s);
            r = r.add(&divisor.shl(s));
        }
        (quot, r)
    }

    pub fn rem(&self, modulus: &BitPoly) -> BitPoly {
        let dd = modulus.degree().expect("division by zero polynomial");
        match self.degree() {
            Some(d) if d >= dd => {}
            _ => return self.clone(),
        }
        // bitwise reduction on a scratch word buffer
        let mut w = self.words.clone();
        let msup: Vec<usize> = modulus.support();
        let top = self.degree().unwrap();
        for i in (dd..=top).rev() {
            if (w[i / 64] >> (i % 64)) & 1 == 1 {
                for &j in &msup {
                    let p = i - dd + j;
                    w[p / 64] ^= 1 << (p % 64);
                }
            }
        }
        Self::from_words(w)
    }

    pub fn gcd(&self, other: &BitPoly) -> BitPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// `(g, s)` with `g = gcd(self, m)` and `s * self = g (mod m)`.
    pub fn ext_gcd_inverse(&self, m: &BitPoly) -> (BitPoly, BitPoly) {
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut s0, mut s1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.add(&q.mul_schoolbook(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        (r0, s0.rem(m))
    }

    /// `self^(2^e) mod m` by repeated squaring.
    pub fn frobenius_mod(&self, e: usize, m: &BitPoly) -> BitPoly {
        let mut r = self.rem(m);
        for _ in 0..e {
            r = r.square().rem(m);
        }
        r
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(n) => n,
        };
        if n == 1 {
            return true;
        }
        let x = BitPoly::monomial(1);
        if x.frobenius_mod(n, self) != x.rem(self) {
            return false;
        }
        for p in prime_factors(n) {
            let h = x.frobenius_mod(n / p, self).add(&x);
            if !self.gcd(&h).is_one() {
                return false;
            }
        }
        true
    }

    pub fn to_bools(&self, len: usize) -> Vec<bool> {
        (0..len).map(|i| self.coeff(i)).collect()
    }

    /// Hex of the packed words, most significant first; `0` for zero.
    pub fn to_hex(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = format!("{:x}", self.words.last().unwrap());
        for w in self.words.iter().rev().skip(1) {
            s.push_str(&format!("{w:016x}"));
        }
        s
    }

    pub fn from_hex(s: &str) -> Option<BitPoly> {
        let s = s.trim().trim_start_matches("0x");
        if s.is_empty() || !s.chars().all(|c| c.is_ascii_hexdigit()) {
            return None;
        }
        let mut words = Vec::new();
        let bytes = s.as_bytes();
        let mut end = bytes.len();
        while end > 0 {
            let start = end.saturating_sub(16);
            let chunk = std::str::from_utf8(&bytes[start..end]).ok()?;
            words.push(u64::from_str_radix(chunk, 16).ok()?);
            end = start;
        }
        Some(Self::from_words(words))
    }
}

fn spread32(x: u32) -> u64 {
    let mut x = x as u64;
    x = (x | (x << 16)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x << 8)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & 0x5555_5555_5555_5555;
    x
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn mul_karatsuba(a: &BitPoly, b: &BitPoly) -> BitPoly {
    let (da, db) = match (a.degree(), b.degree()) {
        (Some(x), Some(y)) => (x, y),
        _ => return BitPoly::zero(),
    };
    if da.min(db) < KARATSUBA_THRESHOLD {
        return a.mul_schoolbook(b);
    }
    let h = (da.max(db) + 2) / 2;
    let (a0, a1) = (a.truncate(h), a.extract(h, da + 1));
    let (b0, b1) = (b.truncate(h), b.extract(h, db + 1));
    let p0 = mul_karatsuba(&a0, &b0);
    let p2 = mul_karatsuba(&a1, &b1);
    let p1 = mul_karatsuba(&a0.add(&a1), &b0.add(&b1));
    let mid = p1.add(&p0).add(&p2);
    p0.add(&mid.shl(h)).add(&p2.shl(2 * h))
}

fn mul_fft(a: &BitPoly, b: &BitPoly) -> BitPoly {
    let (da, db) = match (a.degree(), b.degree()) {
        (Some(x), Some(y)) => (x, y),
        _ => return BitPoly::zero(),
    };
    if da + db < FFT_THRESHOLD {
        return a.mul_schoolbook(b);
    }
    let c: Vec<u8> = (0..=da).map(|i| a.coeff(i) as u8).collect();
    let v: Vec<u8> = (0..=db).map(|i| b.coeff(i) as u8).collect();
    let p = conv::full_product_fft(&mut Concrete { q: 2 }, &c, &v);
    BitPoly::from_coeffs(p.iter().enumerate().filter(|(_, &d)| d == 1).map(|(i, _)| i))
}

impl fmt::Debug for BitPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .support()
            .into_iter()
            .rev()
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join("+"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_products() {
        let x1 = BitPoly::from_u64(0b11);
        for s in MulStrategy::ALL {
            assert_eq!(x1.mul(&x1, s), BitPoly::from_u64(0b101));
            assert_eq!(BitPoly::from_u64(0b111).mul(&x1, s), BitPoly::from_u64(0b1001));
            assert!(BitPoly::zero().mul(&x1, s).is_zero());
        }
    }

    #[test]
    fn zero_has_no_degree() {
        assert_eq!(BitPoly::zero().degree(), None);
        assert_eq!(BitPoly::one().degree(), Some(0));
        assert_eq!(BitPoly::monomial(130).degree(), Some(130));
    }

    #[test]
    fn square_spreads_bits() {
        let p = BitPoly::from_words(vec![0xdead_beef_1234_5678, 0x9]);
        assert_eq!(p.square(), p.mul_schoolbook(&p));
    }

    #[test]
    fn hex_round_trip() {
        let p = BitPoly::from_words(vec![0x1, 0xabc]);
        assert_eq!(BitPoly::from_hex(&p.to_hex()).unwrap(), p);
        assert_eq!(BitPoly::from_hex("0").unwrap(), BitPoly::zero());
        assert!(BitPoly::from_hex("xyz").is_none());
    }

    #[test]
    fn irreducibility_small_degrees() {
        assert!(BitPoly::from_u64(0b10).is_irreducible());
        assert!(BitPoly::from_u64(0b111).is_irreducible());
        assert!(!BitPoly::from_u64(0b101).is_irreducible());
        assert!(BitPoly::from_u64(0b1011).is_irreducible());
        assert!(BitPoly::from_u64(0x11b).is_irreducible());
    }
}
