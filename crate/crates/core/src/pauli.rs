//! Pauli operators `i^k X^a Z^b` in X-then-Z normal form.

use std::fmt;

use crate::bits::Bits;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    pub a: Bits,
    pub b: Bits,
    pub phase_exp: u8,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        PauliOperator {
            a: Bits::zeros(n),
            b: Bits::zeros(n),
            phase_exp: 0,
        }
    }

    pub fn new(a: Bits, b: Bits, phase_exp: u8) -> Self {
        assert_eq!(a.len(), b.len());
        PauliOperator {
            a,
            b,
            phase_exp: phase_exp % 4,
        }
    }

    pub fn x(n: usize, i: usize) -> Self {
        Self::new(Bits::unit(n, i), Bits::zeros(n), 0)
    }

    pub fn z(n: usize, i: usize) -> Self {
        Self::new(Bits::zeros(n), Bits::unit(n, i), 0)
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Group law: `X^{a1}Z^{b1} X^{a2}Z^{b2} = (-1)^{b1·a2} X^{a1+a2} Z^{b1+b2}`.
    pub fn mul(&self, o: &PauliOperator) -> PauliOperator {
        let k = self.phase_exp as u32 + o.phase_exp as u32 + 2 * self.b.dot(&o.a) as u32;
        PauliOperator {
            a: self.a.xor(&o.a),
            b: self.b.xor(&o.b),
            phase_exp: (k % 4) as u8,
        }
    }

    /// `a·b' + b·a' mod 2`; zero iff the operators commute.
    pub fn symplectic(&self, o: &PauliOperator) -> bool {
        self.a.dot(&o.b) ^ self.b.dot(&o.a)
    }

    /// Phase exponent relative to the Hermitian representative `i^{a·b} X^a Z^b`.
    pub fn hermitian_sign(&self) -> Option<bool> {
        let ab = (self.a.and_count(&self.b) % 4) as u8;
        match (self.phase_exp + 4 - ab) % 4 {
            0 => Some(false),
            2 => Some(true),
            _ => None,
        }
    }

    /// Pack `(a, b)` as `a | b << n` for `n <= 32`.
    pub fn label(&self) -> u64 {
        let n = self.n();
        self.a.to_u64() | (self.b.to_u64() << n)
    }

    pub fn from_label(n: usize, label: u64) -> Self {
        let mask = (1u64 << n) - 1;
        Self::new(
            Bits::from_u64(n, label & mask),
            Bits::from_u64(n, (label >> n) & mask),
            0,
        )
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ph = ["", "i", "-", "-i"][self.phase_exp as usize];
        write!(f, "{ph}")?;
        for i in 0..self.n() {
            let c = match (self.a.get(i), self.b.get(i)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'W',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xz_anticommute() {
        let x = PauliOperator::x(1, 0);
        let z = PauliOperator::z(1, 0);
        assert!(x.symplectic(&z));
        assert_eq!(x.mul(&z).phase_exp, 0);
        assert_eq!(z.mul(&x).phase_exp, 2);
    }

    #[test]
    fn hermitian_sign_of_y() {
        let y = PauliOperator::new(Bits::from_u64(1, 1), Bits::from_u64(1, 1), 1);
        assert_eq!(y.hermitian_sign(), Some(false));
        let my = PauliOperator::new(Bits::from_u64(1, 1), Bits::from_u64(1, 1), 3);
        assert_eq!(my.hermitian_sign(), Some(true));
    }
}
