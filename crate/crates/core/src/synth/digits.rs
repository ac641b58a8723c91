//! Registers of Z_2 or Z_4 digits and constant-times-variable products on them.

use super::builder::Builder;
use crate::conv::{self, DigitArith};
use crate::gf2n::{MulStrategy, FFT_THRESHOLD, KARATSUBA_THRESHOLD};

/// A digit held in wires; `None` marks a bit known to be zero. Z_4 digits use
/// `lo + 2 hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Digit {
    pub lo: Option<usize>,
    pub hi: Option<usize>,
}

impl Digit {
    pub const ZERO: Digit = Digit { lo: None, hi: None };

    pub fn bit(w: usize) -> Digit {
        Digit { lo: Some(w), hi: None }
    }

    fn is_zero(&self) -> bool {
        self.lo.is_none() && self.hi.is_none()
    }

    fn lo(&self) -> usize {
        self.lo.expect("materialized digit")
    }

    fn hi(&self) -> usize {
        self.hi.expect("materialized Z4 digit")
    }
}

pub fn bits(ws: &[usize]) -> Vec<Digit> {
    ws.iter().map(|&w| Digit::bit(w)).collect()
}

/// Fresh zeroed register of `len` digits.
pub fn alloc_reg(b: &mut Builder, q: u8, len: usize) -> Vec<Digit> {
    (0..len)
        .map(|_| Digit {
            lo: Some(b.alloc()),
            hi: (q == 4).then(|| b.alloc()),
        })
        .collect()
}

pub fn release_reg(b: &mut Builder, reg: &[Digit]) {
    for d in reg.iter().rev() {
        if let Some(h) = d.hi {
            b.release(h);
        }
        if let Some(l) = d.lo {
            b.release(l);
        }
    }
}

/// `dst += k * src` over Z_q; `dst` is materialized.
pub fn add_mul(b: &mut Builder, q: u8, dst: Digit, src: Digit, k: u8) {
    let k = k % q;
    if k == 0 || src.is_zero() {
        return;
    }
    if q == 2 {
        b.cnot(src.lo(), dst.lo());
        return;
    }
    match k {
        1 => {
            if let Some(sh) = src.hi {
                b.cnot(sh, dst.hi());
            }
            if let Some(sl) = src.lo {
                b.toffoli(dst.lo(), sl, dst.hi());
                b.cnot(sl, dst.lo());
            }
        }
        2 => {
            if let Some(sl) = src.lo {
                b.cnot(sl, dst.hi());
            }
        }
        _ => {
            if let Some(sl) = src.lo {
                b.cnot(sl, dst.lo());
                b.toffoli(dst.lo(), sl, dst.hi());
            }
            if let Some(sh) = src.hi {
                b.cnot(sh, dst.hi());
            }
        }
    }
}

/// `dst += k * src` into a digit known to be zero (no carries).
fn init_mul(b: &mut Builder, q: u8, dst: Digit, src: Digit, k: u8) {
    let k = k % q;
    if k == 0 || src.is_zero() {
        return;
    }
    if q == 2 {
        b.cnot(src.lo(), dst.lo());
        return;
    }
    match k {
        1 => {
            if let Some(sl) = src.lo {
                b.cnot(sl, dst.lo());
            }
            if let Some(sh) = src.hi {
                b.cnot(sh, dst.hi());
            }
        }
        2 => {
            if let Some(sl) = src.lo {
                b.cnot(sl, dst.hi());
            }
        }
        _ => {
            // -(l + 2h) = l + 2(h + l) mod 4
            if let Some(sl) = src.lo {
                b.cnot(sl, dst.lo());
                b.cnot(sl, dst.hi());
            }
            if let Some(sh) = src.hi {
                b.cnot(sh, dst.hi());
            }
        }
    }
}

/// `o += c * a mod x^{len(o)}` by schoolbook.
fn mul_schoolbook(b: &mut Builder, q: u8, c: &[u8], a: &[Digit], o: &[Digit]) {
    for (i, &ci) in c.iter().enumerate() {
        if ci % q == 0 || i >= o.len() {
            continue;
        }
        for (j, &aj) in a.iter().enumerate() {
            if i + j >= o.len() {
                break;
            }
            add_mul(b, q, o[i + j], aj, ci);
        }
    }
}

fn trim(c: &[u8]) -> &[u8] {
    let end = c.iter().rposition(|&x| x != 0).map_or(0, |p| p + 1);
    &c[..end]
}

/// `o += c * a mod x^{len(o)}` by Karatsuba, without scratch space. `a` must be
/// materialized; it is modified and restored.
///
/// With `c = c0 + x^h c1`, `a = a0 + x^h a1` and `p_i` the three half products,
/// `c a = (1 - x^h)(p0 - x^h p2) + x^h p1`. Multiplication by `1 - x^h` is an
/// invertible in-place ripple on `o`, so `o` is first mapped through its
/// inverse, receives `p0 - x^h p2`, and is mapped back.
fn mul_karatsuba(b: &mut Builder, q: u8, c: &[u8], a: &[Digit], o: &[Digit]) {
    let c = trim(c);
    let l = o.len();
    let c = &c[..c.len().min(l)];
    let a = &a[..a.len().min(l)];
    if c.is_empty() || a.is_empty() || l == 0 {
        return;
    }
    let l = l.min(c.len() + a.len() - 1);
    let o = &o[..l];
    if c.len().min(a.len()) < KARATSUBA_THRESHOLD {
        mul_schoolbook(b, q, c, a, o);
        return;
    }
    let h = c.len().max(a.len()).div_ceil(2);
    let (c0, c1) = c.split_at(h.min(c.len()));
    let (a0, a1) = a.split_at(h.min(a.len()));
    if l <= h {
        mul_karatsuba(b, q, c0, a0, o);
        return;
    }
    if c1.is_empty() || a1.is_empty() {
        // one operand fits in the low half: two independent products
        if a1.is_empty() {
            mul_karatsuba(b, q, c0, a, o);
            mul_karatsuba(b, q, c1, a, &o[h..]);
        } else {
            mul_karatsuba(b, q, c, a0, o);
            mul_karatsuba(b, q, c, a1, &o[h..]);
        }
        return;
    }
    let neg = |v: u8| (q - v % q) % q;
    // o <- (1 - x^h)^{-1} o
    for i in h..l {
        add_mul(b, q, o[i], o[i - h], 1);
    }
    mul_karatsuba(b, q, c0, a0, o);
    let c1_neg: Vec<u8> = c1.iter().map(|&v| neg(v)).collect();
    mul_karatsuba(b, q, &c1_neg, a1, &o[h..]);
    // o <- (1 - x^h) o
    for i in (h..l).rev() {
        add_mul(b, q, o[i], o[i - h], q - 1);
    }
    // o += x^h (c0 + c1)(a0 + a1)
    for (j, &d) in a1.iter().enumerate() {
        add_mul(b, q, a0[j], d, 1);
    }
    let mut cs = c0.to_vec();
    for (j, &v) in c1.iter().enumerate() {
        cs[j] = (cs[j] + v) % q;
    }
    mul_karatsuba(b, q, &cs, a0, &o[h..]);
    for (j, &d) in a1.iter().enumerate().rev() {
        add_mul(b, q, a0[j], d, q - 1);
    }
}

/// Symbolic digits: every linear combination is computed into fresh wires.
struct Emit<'a> {
    b: &'a mut Builder,
    q: u8,
    allocated: Vec<usize>,
}

impl DigitArith for Emit<'_> {
    type D = Digit;

    fn modulus(&self) -> u8 {
        self.q
    }

    fn zero(&self) -> Digit {
        Digit::ZERO
    }

    fn lin_comb(&mut self, terms: &[(Digit, u8)]) -> Digit {
        let q = self.q;
        let live: Vec<(Digit, u8)> = terms
            .iter()
            .copied()
            .filter(|(d, k)| k % q != 0 && !d.is_zero())
            .collect();
        match live.as_slice() {
            [] => return Digit::ZERO,
            [(d, 1)] => return *d,
            _ => {}
        }
        let lo = self.b.alloc();
        self.allocated.push(lo);
        let hi = (q == 4).then(|| {
            let w = self.b.alloc();
            self.allocated.push(w);
            w
        });
        let dst = Digit { lo: Some(lo), hi };
        init_mul(self.b, q, dst, live[0].0, live[0].1);
        for &(d, k) in &live[1..] {
            add_mul(self.b, q, dst, d, k);
        }
        dst
    }
}

/// The FFT path falls back to the direct convolution for short products and
/// for constants with at most `2 log2(len)` nonzero taps, whose direct network is
/// already logarithmic in depth.
fn fft_fallback(strategy: MulStrategy, c: &[u8], len: usize) -> MulStrategy {
    let taps = c.iter().filter(|&&v| v != 0).count();
    let sparse = taps <= 2 * (usize::BITS - len.leading_zeros()) as usize;
    if strategy == MulStrategy::FftRadix3 && (len < FFT_THRESHOLD || sparse) {
        MulStrategy::Schoolbook
    } else {
        strategy
    }
}

/// Compute `c * a mod x^len` into a fresh register, run `body` on it (which must
/// leave it unchanged), then uncompute.
pub fn with_product(
    b: &mut Builder,
    q: u8,
    strategy: MulStrategy,
    c: &[u8],
    a: &[Digit],
    len: usize,
    body: impl FnOnce(&mut Builder, &[Digit]),
) {
    match fft_fallback(strategy, c, len) {
        MulStrategy::Schoolbook | MulStrategy::Karatsuba => {
            let p = alloc_reg(b, q, len);
            // Karatsuba adds operand halves in place, so Z_4 operands need high bits
            let mut lifted = Vec::new();
            let a_reg: Vec<Digit> = if strategy == MulStrategy::Karatsuba {
                a.iter()
                    .map(|d| {
                        let mut d = *d;
                        if d.lo.is_none() {
                            let w = b.alloc();
                            lifted.push(w);
                            d.lo = Some(w);
                        }
                        if q == 4 && d.hi.is_none() {
                            let w = b.alloc();
                            lifted.push(w);
                            d.hi = Some(w);
                        }
                        d
                    })
                    .collect()
            } else {
                a.to_vec()
            };
            let m0 = b.mark();
            if strategy == MulStrategy::Karatsuba {
                mul_karatsuba(b, q, c, &a_reg, &p);
            } else {
                mul_schoolbook(b, q, c, &a_reg, &p);
            }
            let m1 = b.mark();
            body(b, &p);
            b.undo_range(m0, m1);
            b.release_all(&lifted);
            release_reg(b, &p);
        }
        MulStrategy::FftRadix3 => {
            let m0 = b.mark();
            let mut emit = Emit {
                b,
                q,
                allocated: Vec::new(),
            };
            let mut prod = conv::full_product_fft(&mut emit, c, a);
            let allocated = emit.allocated;
            prod.resize(len, Digit::ZERO);
            let p = alloc_reg(b, q, len);
            for (dst, src) in p.iter().zip(&prod) {
                init_mul(b, q, *dst, *src, 1);
            }
            let m1 = b.mark();
            body(b, &p);
            b.undo_range(m0, m1);
            release_reg(b, &p);
            b.release_all(&allocated);
        }
    }
}
