//! Arithmetic in GF(2^m) over a polynomial basis.

use std::fmt;
use std::ops::{Add, AddAssign};

use crate::error::{Error, Result};

/// Largest supported extension degree of the base field.
pub const MAX_DEGREE: u32 = 10;

/// Default moduli, indexed by degree. All are primitive, so the residue of
/// `x` generates the multiplicative group.
const DEFAULT_MODULI: [(u32, u32); 9] = [
    (2, 0b111),            // x^2 + x + 1
    (3, 0b1011),           // x^3 + x + 1
    (4, 0b1_0011),         // x^4 + x + 1
    (5, 0b10_0101),        // x^5 + x^2 + 1
    (6, 0b101_1011),       // x^6 + x^4 + x^3 + x + 1
    (7, 0b1000_0011),      // x^7 + x + 1
    (8, 0b1_0001_1101),    // x^8 + x^4 + x^3 + x^2 + 1
    (9, 0b10_0001_0001),   // x^9 + x^4 + 1
    (10, 0b100_0000_1001), // x^10 + x^3 + 1
];

/// Returns the built-in modulus for degree `m`, if there is one.
pub fn default_modulus(m: u32) -> Option<u32> {
    DEFAULT_MODULI.iter().find(|(deg, _)| *deg == m).map(|(_, poly)| *poly)
}

/// An element of GF(2^m): bit `i` is the coefficient of `w^i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BaseElem(u32);

impl BaseElem {
    pub const ZERO: BaseElem = BaseElem(0);
    pub const ONE: BaseElem = BaseElem(1);

    /// Wraps a raw bitmask. The caller is responsible for it fitting in `m`
    /// bits; use [`BaseField::elem`] for a checked conversion.
    pub const fn from_bits_unchecked(bits: u32) -> Self {
        BaseElem(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl Add for BaseElem {
    type Output = BaseElem;

    /// Characteristic 2: addition is XOR of coefficient vectors.
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: BaseElem) -> BaseElem {
        BaseElem(self.0 ^ rhs.0)
    }
}

impl AddAssign for BaseElem {
    #[inline]
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: BaseElem) {
        self.0 ^= rhs.0;
    }
}

impl fmt::LowerHex for BaseElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerHex::fmt(&self.0, f)
    }
}

/// Carry-less product of two polynomials over GF(2), reduced modulo `modulus`
/// of degree `m`.
fn clmul_reduce(mut a: u32, mut b: u32, modulus: u32, m: u32) -> u32 {
    let top = 1u32 << m;
    let mut acc = 0u32;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= modulus;
        }
    }
    acc
}

/// The field GF(q), q = 2^m, with log/antilog tables relative to a fixed
/// primitive element `w`.
#[derive(Clone, Debug)]
pub struct BaseField {
    m: u32,
    modulus: u32,
    generator: BaseElem,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl PartialEq for BaseField {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.modulus == other.modulus && self.generator == other.generator
    }
}

impl Eq for BaseField {}

impl BaseField {
    /// GF(2^m) with the built-in modulus for `m`.
    pub fn new(m: u32) -> Result<Self> {
        let modulus = default_modulus(m).ok_or(Error::UnsupportedDegree(m))?;
        Self::with_modulus(m, modulus)
    }

    /// GF(2^m) modulo `modulus`, which must be irreducible of degree `m`.
    ///
    /// The generator is the smallest element (by bitmask) of multiplicative
    /// order `2^m - 1`. Finding one proves the quotient ring is a field, so no
    /// separate irreducibility test is needed. For primitive moduli the
    /// generator is the residue of `x`.
    pub fn with_modulus(m: u32, modulus: u32) -> Result<Self> {
        if m == 0 || m > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(m));
        }
        if modulus >> m != 1 {
            return Err(Error::InvalidModulus {
                modulus,
                reason: "degree does not match m",
            });
        }
        let q = 1u32 << m;
        let order = q - 1;
        let prime_factors = prime_factors(order);
        let has_full_order = |g: u32| {
            let pow = |e: u32| {
                let mut result = 1u32;
                let mut base = g;
                let mut e = e;
                while e > 0 {
                    if e & 1 == 1 {
                        result = clmul_reduce(result, base, modulus, m);
                    }
                    base = clmul_reduce(base, base, modulus, m);
                    e >>= 1;
                }
                result
            };
            pow(order) == 1 && prime_factors.iter().all(|p| pow(order / p) != 1)
        };
        let generator = if m == 1 {
            1
        } else {
            (2..q).find(|&g| has_full_order(g)).ok_or(Error::InvalidModulus {
                modulus,
                reason: "not irreducible",
            })?
        };

        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..order {
            exp[i as usize] = x;
            log[x as usize] = i;
            x = clmul_reduce(x, generator, modulus, m);
        }
        for i in order..2 * order {
            exp[i as usize] = exp[(i - order) as usize];
        }
        Ok(BaseField {
            m,
            modulus,
            generator: BaseElem(generator),
            exp,
            log,
        })
    }

    /// Extension degree over GF(2).
    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Field size q = 2^m.
    pub fn order(&self) -> u32 {
        1 << self.m
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// The fixed primitive element `w`.
    pub fn generator(&self) -> BaseElem {
        self.generator
    }

    /// Checked conversion from a bitmask.
    pub fn elem(&self, bits: u32) -> Result<BaseElem> {
        if bits >> self.m != 0 {
            return Err(Error::ElementOutOfRange { bits, m: self.m });
        }
        Ok(BaseElem(bits))
    }

    /// All q elements in bitmask order.
    pub fn elements(&self) -> impl Iterator<Item = BaseElem> + Clone {
        (0..self.order()).map(BaseElem)
    }

    /// All nonzero elements in bitmask order.
    pub fn nonzero(&self) -> impl Iterator<Item = BaseElem> + Clone {
        (1..self.order()).map(BaseElem)
    }

    /// `w^i`, for any integer exponent (reduced modulo q - 1).
    pub fn w_pow(&self, i: i64) -> BaseElem {
        let order = i64::from(self.order() - 1);
        BaseElem(self.exp[i.rem_euclid(order) as usize])
    }

    /// Discrete log to base `w`; `None` for zero.
    pub fn log(&self, x: BaseElem) -> Option<u32> {
        (!x.is_zero()).then(|| self.log[x.0 as usize])
    }

    #[inline]
    pub fn mul(&self, a: BaseElem, b: BaseElem) -> BaseElem {
        if a.0 == 0 || b.0 == 0 {
            return BaseElem::ZERO;
        }
        BaseElem(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    #[inline]
    pub fn square(&self, a: BaseElem) -> BaseElem {
        self.mul(a, a)
    }

    pub fn inv(&self, a: BaseElem) -> Result<BaseElem> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let order = self.order() - 1;
        Ok(BaseElem(self.exp[((order - self.log[a.0 as usize]) % order) as usize]))
    }

    pub fn div(&self, a: BaseElem, b: BaseElem) -> Result<BaseElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` with `0^0 = 1`.
    pub fn pow(&self, a: BaseElem, e: u64) -> BaseElem {
        if e == 0 {
            return BaseElem::ONE;
        }
        if a.is_zero() {
            return BaseElem::ZERO;
        }
        let order = u64::from(self.order() - 1);
        let l = u64::from(self.log[a.0 as usize]);
        BaseElem(self.exp[((l * (e % order)) % order) as usize])
    }

    /// `a^(2^k)`, the k-th iterate of the Frobenius map.
    pub fn frobenius_pow(&self, a: BaseElem, k: u32) -> BaseElem {
        (0..k % self.m).fold(a, |x, _| self.square(x))
    }

    /// The unique square root (squaring is bijective in characteristic 2).
    pub fn sqrt(&self, a: BaseElem) -> BaseElem {
        self.frobenius_pow(a, self.m - 1)
    }

    /// Relative trace to GF(2^d): `x + x^(2^d) + x^(2^(2d)) + ... + x^(2^(m-d))`.
    pub fn rel_trace(&self, x: BaseElem, d: u32) -> Result<BaseElem> {
        if d == 0 || !self.m.is_multiple_of(d) {
            return Err(Error::NotADivisor { d, m: self.m });
        }
        let mut acc = BaseElem::ZERO;
        let mut term = x;
        for _ in 0..self.m / d {
            acc += term;
            term = self.frobenius_pow(term, d);
        }
        Ok(acc)
    }

    /// Absolute trace to GF(2), as 0 or 1.
    pub fn abs_trace(&self, x: BaseElem) -> u8 {
        let mut acc = BaseElem::ZERO;
        let mut term = x;
        for _ in 0..self.m {
            acc += term;
            term = self.square(term);
        }
        debug_assert!(acc.0 <= 1);
        acc.0 as u8
    }

    /// The elements of absolute trace `bit`, in bitmask order.
    pub fn trace_set(&self, bit: u8) -> Vec<BaseElem> {
        self.elements().filter(|&x| self.abs_trace(x) == bit).collect()
    }

    /// Degree over GF(2) of the smallest subfield containing `x`: the least
    /// divisor `e` of `m` with `x^(2^e) = x`.
    pub fn smallest_subfield_degree(&self, x: BaseElem) -> u32 {
        (1..=self.m)
            .filter(|e| self.m.is_multiple_of(*e))
            .find(|&e| self.frobenius_pow(x, e) == x)
            .unwrap_or(self.m)
    }

    /// Renders `x` as `0` or `w^i` (with `1` for `w^0` and `w` for `w^1`).
    pub fn power_notation(&self, x: BaseElem) -> String {
        match self.log(x) {
            None => "0".to_string(),
            Some(0) => "1".to_string(),
            Some(1) => "w".to_string(),
            Some(i) => format!("w^{i}"),
        }
    }
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut factors = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            factors.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        factors.push(n);
    }
    factors
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schoolbook(a: u32, b: u32, modulus: u32, m: u32) -> u32 {
        // Full product first, then long division.
        let mut prod = 0u64;
        for i in 0..m {
            if (b >> i) & 1 == 1 {
                prod ^= u64::from(a) << i;
            }
        }
        for bit in (m..2 * m).rev() {
            if (prod >> bit) & 1 == 1 {
                prod ^= u64::from(modulus) << (bit - m);
            }
        }
        prod as u32
    }

    #[test]
    fn default_moduli_are_primitive() {
        for m in 2..=MAX_DEGREE {
            let f = BaseField::new(m).unwrap();
            assert_eq!(f.generator(), BaseElem(2), "m = {m}");
            assert_eq!(f.pow(f.generator(), u64::from(f.order() - 1)), BaseElem::ONE);
        }
    }

    #[test]
    fn mul_matches_schoolbook() {
        for m in 2..=6 {
            let f = BaseField::new(m).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b).bits(), schoolbook(a.bits(), b.bits(), f.modulus(), m));
                }
            }
        }
    }

    #[test]
    fn q8_square_of_w_squared() {
        // w^4 = w * w^3 = w(w + 1) = w^2 + w under w^3 = w + 1.
        let f = BaseField::new(3).unwrap();
        let w2 = f.w_pow(2);
        assert_eq!(f.mul(w2, w2), BaseElem(0b110));
    }

    #[test]
    fn add_is_xor_and_self_inverse() {
        let f = BaseField::new(5).unwrap();
        for x in f.elements() {
            assert_eq!(x + x, BaseElem::ZERO);
        }
    }

    #[test]
    fn zero_has_no_inverse() {
        let f = BaseField::new(4).unwrap();
        assert!(matches!(f.inv(BaseElem::ZERO), Err(Error::ZeroInverse)));
    }

    #[test]
    fn reducible_modulus_is_rejected() {
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2
        assert!(BaseField::with_modulus(4, 0b10101).is_err());
        // wrong degree
        assert!(BaseField::with_modulus(4, 0b1011).is_err());
    }

    #[test]
    fn irreducible_non_primitive_modulus_finds_generator() {
        // x^4 + x^3 + x^2 + x + 1 is irreducible, but x has order 5.
        let f = BaseField::with_modulus(4, 0b11111).unwrap();
        assert_ne!(f.generator(), BaseElem(2));
        assert_eq!(f.pow(f.generator(), 15), BaseElem::ONE);
        assert_ne!(f.pow(f.generator(), 5), BaseElem::ONE);
    }

    #[test]
    fn relative_trace_examples() {
        let f = BaseField::new(3).unwrap();
        let w = f.generator();
        assert_eq!(f.rel_trace(BaseElem::ZERO, 1).unwrap(), BaseElem::ZERO);
        // w + w^2 + w^4 = w + w^2 + (w^2 + w) = 0
        assert_eq!(f.rel_trace(w, 1).unwrap(), BaseElem::ZERO);
        assert_eq!(f.abs_trace(w), 0);
        for x in f.elements() {
            assert_eq!(f.rel_trace(x, 3).unwrap(), x);
        }
        assert!(matches!(f.rel_trace(w, 2), Err(Error::NotADivisor { .. })));
    }

    #[test]
    fn trace_of_one_is_parity_of_m() {
        for m in 2..=9 {
            let f = BaseField::new(m).unwrap();
            assert_eq!(u32::from(f.abs_trace(BaseElem::ONE)), m % 2);
        }
    }

    #[test]
    fn trace_sets_balanced_and_disjoint() {
        for m in 2..=7 {
            let f = BaseField::new(m).unwrap();
            let t0 = f.trace_set(0);
            let t1 = f.trace_set(1);
            assert_eq!(t0.len() as u32, f.order() / 2);
            assert_eq!(t1.len() as u32, f.order() / 2);
            assert!(t0.contains(&BaseElem::ZERO));
            assert!(t0.iter().all(|x| !t1.contains(x)));
        }
    }

    #[test]
    fn f4_trace_one_elements() {
        let f = BaseField::new(2).unwrap();
        let omega = f.generator();
        let mut expected = vec![omega, f.square(omega)];
        expected.sort();
        assert_eq!(f.trace_set(1), expected);
    }

    #[test]
    fn smallest_subfield() {
        let f8 = BaseField::new(3).unwrap();
        assert_eq!(f8.smallest_subfield_degree(BaseElem::ZERO), 1);
        assert_eq!(f8.smallest_subfield_degree(BaseElem::ONE), 1);
        assert_eq!(f8.smallest_subfield_degree(f8.generator()), 3);

        let f16 = BaseField::new(4).unwrap();
        // F_4* inside F_16* is generated by w^5.
        let omega = f16.w_pow(5);
        assert_eq!(f16.pow(omega, 4), omega);
        assert_eq!(f16.smallest_subfield_degree(omega), 2);
        assert_eq!(f16.smallest_subfield_degree(f16.generator()), 4);
    }

    #[test]
    fn sqrt_inverts_square() {
        let f = BaseField::new(6).unwrap();
        for x in f.elements() {
            assert_eq!(f.sqrt(f.square(x)), x);
        }
    }

    #[test]
    fn power_notation_rendering() {
        let f = BaseField::new(3).unwrap();
        assert_eq!(f.power_notation(BaseElem::ZERO), "0");
        assert_eq!(f.power_notation(BaseElem::ONE), "1");
        assert_eq!(f.power_notation(f.generator()), "w");
        assert_eq!(f.power_notation(f.w_pow(5)), "w^5");
    }
}
