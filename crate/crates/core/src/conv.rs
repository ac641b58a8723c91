//! Radix-3 FFT multiplication (Schönhage) over Z/2 or Z/4, generic over how
//! digits are represented.
//!
//! The same code multiplies concrete digit vectors and emits reversible
//! circuits: a [`DigitArith`] either evaluates linear combinations directly or
//! allocates fresh wires and records the gates that compute them. One operand
//! is always a classical constant; the other is whatever `D` is.
//!
//! Products live in `R_k = Z_q[x] / (x^{2N} + x^N + 1)` with `N = 3^k`. In that
//! ring `x` is a primitive `3N`-th root of unity, which is what makes the
//! radix-3 transform work without any multiplications beyond coefficient
//! rotations.

/// Arithmetic on single digits of `Z_q`, `q` in {2, 4}.
pub trait DigitArith {
    type D: Copy;

    fn modulus(&self) -> u8;

    fn zero(&self) -> Self::D;

    /// `sum(c_i * d_i) mod q`; coefficients are already reduced mod q.
    fn lin_comb(&mut self, terms: &[(Self::D, u8)]) -> Self::D;
}

/// Plain evaluation on `u8` digits.
#[derive(Clone, Copy, Debug)]
pub struct Concrete {
    pub q: u8,
}

impl DigitArith for Concrete {
    type D = u8;

    fn modulus(&self) -> u8 {
        self.q
    }

    fn zero(&self) -> u8 {
        0
    }

    fn lin_comb(&mut self, terms: &[(u8, u8)]) -> u8 {
        let s: u32 = terms.iter().map(|&(d, c)| d as u32 * c as u32).sum();
        (s % self.q as u32) as u8
    }
}

/// Below this `k` the ring product is done as a constant matrix.
pub const BASE_K: u32 = 2;

/// Smallest `k` with `2 * 3^k >= len`.
pub fn ring_k_for(len: usize) -> u32 {
    let mut k = 0;
    while 2 * 3usize.pow(k) < len {
        k += 1;
    }
    k
}

fn neg(c: u8, q: u8) -> u8 {
    (q - c % q) % q
}

/// `c * x^j mod (x^{2N} + x^N + 1)` as a concrete vector of length `2N`.
fn ring_shift(c: &[u8], j: usize, n: usize, q: u8) -> Vec<u8> {
    let mut cyc = vec![0u8; 3 * n];
    for (i, &v) in c.iter().enumerate() {
        let p = (i + j) % (3 * n);
        cyc[p] = (cyc[p] + v) % q;
    }
    reduce_cyclic_concrete(&cyc, n, q)
}

fn reduce_cyclic_concrete(cyc: &[u8], n: usize, q: u8) -> Vec<u8> {
    let mut out = cyc[..2 * n].to_vec();
    for i in 0..n {
        let top = cyc[2 * n + i];
        out[i] = (out[i] + neg(top, q)) % q;
        out[n + i] = (out[n + i] + neg(top, q)) % q;
    }
    out
}

/// Reduces a `3N`-periodic vector into `R_k` (`x^{2N} = -x^N - 1`).
fn reduce_cyclic<A: DigitArith>(ar: &mut A, cyc: &[A::D], n: usize) -> Vec<A::D> {
    let q = ar.modulus();
    let m1 = neg(1, q);
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        out.push(ar.lin_comb(&[(cyc[i], 1), (cyc[2 * n + i], m1)]));
    }
    for i in 0..n {
        out.push(ar.lin_comb(&[(cyc[n + i], 1), (cyc[2 * n + i], m1)]));
    }
    out
}

fn rotate<D: Copy>(v: &[D], s: usize) -> Vec<D> {
    let len = v.len();
    let s = s % len;
    let mut out = Vec::with_capacity(len);
    out.extend_from_slice(&v[len - s..]);
    out.extend_from_slice(&v[..len - s]);
    out
}

/// Length-`3^j` DFT of `elems` (each a `3m`-periodic vector) with root
/// `x^root_exp`.
fn dft<A: DigitArith>(ar: &mut A, elems: &[Vec<A::D>], root_exp: usize) -> Vec<Vec<A::D>> {
    let len = elems.len();
    if len == 1 {
        return elems.to_vec();
    }
    let period = elems[0].len();
    let third = len / 3;
    let subs: Vec<Vec<Vec<A::D>>> = (0..3)
        .map(|r| {
            let part: Vec<Vec<A::D>> = elems.iter().skip(r).step_by(3).cloned().collect();
            dft(ar, &part, (3 * root_exp) % period)
        })
        .collect();
    (0..len)
        .map(|l| {
            let b1 = rotate(&subs[1][l % third], (l * root_exp) % period);
            let b2 = rotate(&subs[2][l % third], (2 * l * root_exp) % period);
            let b0 = &subs[0][l % third];
            (0..period)
                .map(|i| ar.lin_comb(&[(b0[i], 1), (b1[i], 1), (b2[i], 1)]))
                .collect()
        })
        .collect()
}

/// Splits a `2N`-vector into `3t` blocks of `m` digits, each padded to period `3m`.
fn chunk<D: Copy>(v: &[D], zero: D, m: usize, t: usize, period: usize) -> Vec<Vec<D>> {
    (0..3 * t)
        .map(|j| {
            let mut e = vec![zero; period];
            if j < 2 * t {
                e[..m].copy_from_slice(&v[j * m..(j + 1) * m]);
            }
            e
        })
        .collect()
}

/// `a * c` in `R_k`. `a` and `c` have length `2 * 3^k`.
pub fn ring_mul_const<A: DigitArith>(ar: &mut A, k: u32, a: &[A::D], c: &[u8]) -> Vec<A::D> {
    let n = 3usize.pow(k);
    assert_eq!(a.len(), 2 * n);
    assert_eq!(c.len(), 2 * n);
    let q = ar.modulus();
    if k <= BASE_K {
        // column j of the multiplication matrix is c * x^j
        let cols: Vec<Vec<u8>> = (0..2 * n).map(|j| ring_shift(c, j, n, q)).collect();
        return (0..2 * n)
            .map(|p| {
                let terms: Vec<(A::D, u8)> = (0..2 * n)
                    .filter(|&j| cols[j][p] != 0)
                    .map(|j| (a[j], cols[j][p]))
                    .collect();
                ar.lin_comb(&terms)
            })
            .collect();
    }
    let k_inner = k.div_ceil(2);
    let m = 3usize.pow(k_inner);
    let t = n / m;
    let points = 3 * t;
    let period = 3 * m;
    let root = m / t;

    let mut conc = Concrete { q };
    let c_hat = dft(&mut conc, &chunk(c, 0u8, m, t, period), root);
    let zero = ar.zero();
    let a_hat = dft(ar, &chunk(a, zero, m, t, period), root);

    let products: Vec<Vec<A::D>> = a_hat
        .iter()
        .zip(&c_hat)
        .map(|(ah, ch)| {
            let ar_red = reduce_cyclic(ar, ah, m);
            let c_red = reduce_cyclic_concrete(ch, m, q);
            let mut p = ring_mul_const(ar, k_inner, &ar_red, &c_red);
            p.resize(period, zero);
            p
        })
        .collect();

    let mut coeffs = dft(ar, &products, period - root);
    // divide by the (odd) transform length
    let inv_len = if q == 2 { 1 } else { (points % 4) as u8 };
    if inv_len != 1 {
        for e in coeffs.iter_mut() {
            for d in e.iter_mut() {
                *d = ar.lin_comb(&[(*d, inv_len)]);
            }
        }
    }

    let mut slots: Vec<Vec<(A::D, u8)>> = vec![Vec::new(); 3 * n];
    for (j, e) in coeffs.iter().enumerate() {
        let red = reduce_cyclic(ar, e, m);
        for (i, &d) in red.iter().enumerate() {
            slots[(j * m + i) % (3 * n)].push((d, 1));
        }
    }
    let cyc: Vec<A::D> = slots.iter().map(|terms| ar.lin_comb(terms)).collect();
    reduce_cyclic(ar, &cyc, n)
}

/// Full product `c * a` (length `len(c) + len(a) - 1`) through a large enough ring.
pub fn full_product_fft<A: DigitArith>(ar: &mut A, c: &[u8], a: &[A::D]) -> Vec<A::D> {
    if c.is_empty() || a.is_empty() {
        return Vec::new();
    }
    let out_len = c.len() + a.len() - 1;
    let k = ring_k_for(out_len);
    let n2 = 2 * 3usize.pow(k);
    let zero = ar.zero();
    let mut av = a.to_vec();
    av.resize(n2, zero);
    let mut cv = c.to_vec();
    cv.resize(n2, 0);
    let mut p = ring_mul_const(ar, k, &av, &cv);
    p.truncate(out_len);
    p
}

/// Schoolbook product used as the reference for the other routes.
pub fn full_product_schoolbook(q: u8, c: &[u8], a: &[u8]) -> Vec<u8> {
    if c.is_empty() || a.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u8; c.len() + a.len() - 1];
    for (i, &ci) in c.iter().enumerate() {
        for (j, &aj) in a.iter().enumerate() {
            out[i + j] = ((out[i + j] as u32 + ci as u32 * aj as u32) % q as u32) as u8;
        }
    }
    out
}
