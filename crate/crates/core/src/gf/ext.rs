//! The quadratic extension GF(q^2) = GF(q)(δ) with δ^2 = δ + v.

use std::fmt;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use super::base::{BaseElem, BaseField};
use crate::error::{Error, Result};

/// Which defining relation the extension uses.
///
/// The orthogonal Buekenhout-Metz tower takes v of absolute trace 1 with
/// v ≠ 1. The Tits tower takes v = 1, so that δ lies in F_4; this needs m odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tower {
    Orthogonal,
    Tits,
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tower::Orthogonal => "orthogonal",
            Tower::Tits => "tits",
        })
    }
}

/// Picks the constant v of the relation δ^2 = δ + v.
///
/// Orthogonal: `w^i` for the smallest `i` with absolute trace 1 and `w^i ≠ 1`.
/// Tits: 1.
pub fn choose_v(base: &BaseField, tower: Tower) -> Result<BaseElem> {
    match tower {
        Tower::Orthogonal => {
            if base.degree() < 2 {
                return Err(Error::UnsupportedTower("orthogonal tower needs q > 2"));
            }
            (0..i64::from(base.order() - 1))
                .map(|i| base.w_pow(i))
                .find(|&v| v != BaseElem::ONE && base.abs_trace(v) == 1)
                .ok_or(Error::UnsupportedTower("no v of trace 1 other than 1"))
        }
        Tower::Tits => {
            if base.degree().is_multiple_of(2) {
                return Err(Error::UnsupportedTower("Tits tower needs m odd"));
            }
            Ok(BaseElem::ONE)
        }
    }
}

/// An element `c0 + c1·δ` of GF(q^2).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtElem {
    pub c0: BaseElem,
    pub c1: BaseElem,
}

impl ExtElem {
    pub const ZERO: ExtElem = ExtElem {
        c0: BaseElem::ZERO,
        c1: BaseElem::ZERO,
    };
    pub const ONE: ExtElem = ExtElem {
        c0: BaseElem::ONE,
        c1: BaseElem::ZERO,
    };
    pub const DELTA: ExtElem = ExtElem {
        c0: BaseElem::ZERO,
        c1: BaseElem::ONE,
    };

    pub const fn new(c0: BaseElem, c1: BaseElem) -> Self {
        ExtElem { c0, c1 }
    }

    pub const fn from_base(c0: BaseElem) -> Self {
        ExtElem { c0, c1: BaseElem::ZERO }
    }

    pub const fn is_zero(self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    /// True when the element lies in the subfield GF(q).
    pub const fn in_base(self) -> bool {
        self.c1.is_zero()
    }
}

impl Add for ExtElem {
    type Output = ExtElem;

    #[inline]
    fn add(self, rhs: ExtElem) -> ExtElem {
        ExtElem {
            c0: self.c0 + rhs.c0,
            c1: self.c1 + rhs.c1,
        }
    }
}

impl AddAssign for ExtElem {
    #[inline]
    fn add_assign(&mut self, rhs: ExtElem) {
        *self = *self + rhs;
    }
}

/// GF(q^2) over GF(q) with basis {1, δ}.
///
/// Multiplication goes through log/antilog tables indexed by the packed
/// encoding `c0 | c1 << m`; the tables are built from the componentwise
/// product rule once at construction.
#[derive(Clone, Debug)]
pub struct ExtField {
    base: BaseField,
    v: BaseElem,
    tower: Tower,
    generator: ExtElem,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl PartialEq for ExtField {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.v == other.v && self.tower == other.tower
    }
}

impl Eq for ExtField {}

impl ExtField {
    pub fn new(base: BaseField, tower: Tower) -> Result<Self> {
        let v = choose_v(&base, tower)?;
        Self::with_v(base, tower, v)
    }

    /// Orthogonal tower over GF(2^m) with the default modulus.
    pub fn orthogonal(m: u32) -> Result<Self> {
        Self::new(BaseField::new(m)?, Tower::Orthogonal)
    }

    /// Tits tower over GF(2^m) with the default modulus.
    pub fn tits(m: u32) -> Result<Self> {
        Self::new(BaseField::new(m)?, Tower::Tits)
    }

    /// Builds the extension for an explicit v. `x^2 + x + v` must be
    /// irreducible over GF(q), i.e. v must have absolute trace 1.
    pub fn with_v(base: BaseField, tower: Tower, v: BaseElem) -> Result<Self> {
        if base.abs_trace(v) != 1 {
            return Err(Error::UnsupportedTower("v must have absolute trace 1"));
        }
        if tower == Tower::Tits && v != BaseElem::ONE {
            return Err(Error::UnsupportedTower("Tits tower uses v = 1"));
        }
        if tower == Tower::Orthogonal && v == BaseElem::ONE {
            return Err(Error::UnsupportedTower("orthogonal tower uses v != 1"));
        }
        let m = base.degree();
        let size = 1usize << (2 * m);
        let order = (size - 1) as u32;
        let pack = |x: ExtElem| x.c0.bits() | (x.c1.bits() << m);
        let slow_mul = |a: ExtElem, b: ExtElem| mul_components(&base, v, a, b);

        let prime_factors = {
            let mut n = order;
            let mut out = Vec::new();
            let mut p = 2;
            while p * p <= n {
                if n.is_multiple_of(p) {
                    out.push(p);
                    while n.is_multiple_of(p) {
                        n /= p;
                    }
                }
                p += 1;
            }
            if n > 1 {
                out.push(n);
            }
            out
        };
        let slow_pow = |x: ExtElem, mut e: u32| {
            let mut acc = ExtElem::ONE;
            let mut sq = x;
            while e > 0 {
                if e & 1 == 1 {
                    acc = slow_mul(acc, sq);
                }
                sq = slow_mul(sq, sq);
                e >>= 1;
            }
            acc
        };
        let generator = (2..size as u32)
            .map(|bits| ExtElem {
                c0: BaseElem::from_bits_unchecked(bits & ((1 << m) - 1)),
                c1: BaseElem::from_bits_unchecked(bits >> m),
            })
            .find(|&g| {
                slow_pow(g, order) == ExtElem::ONE
                    && prime_factors.iter().all(|p| slow_pow(g, order / p) != ExtElem::ONE)
            })
            .ok_or(Error::UnsupportedTower("extension is not a field"))?;

        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; size];
        let mut x = ExtElem::ONE;
        for i in 0..order {
            exp[i as usize] = pack(x);
            log[pack(x) as usize] = i;
            x = slow_mul(x, generator);
        }
        for i in order..2 * order {
            exp[i as usize] = exp[(i - order) as usize];
        }
        Ok(ExtField {
            base,
            v,
            tower,
            generator,
            exp,
            log,
        })
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn v(&self) -> BaseElem {
        self.v
    }

    pub fn tower(&self) -> Tower {
        self.tower
    }

    /// q, the size of the base field.
    pub fn q(&self) -> u32 {
        self.base.order()
    }

    /// A primitive element of GF(q^2).
    pub fn generator(&self) -> ExtElem {
        self.generator
    }

    pub fn delta(&self) -> ExtElem {
        ExtElem::DELTA
    }

    #[inline]
    fn pack(&self, x: ExtElem) -> usize {
        (x.c0.bits() | (x.c1.bits() << self.base.degree())) as usize
    }

    #[inline]
    fn unpack(&self, bits: u32) -> ExtElem {
        let m = self.base.degree();
        ExtElem {
            c0: BaseElem::from_bits_unchecked(bits & ((1 << m) - 1)),
            c1: BaseElem::from_bits_unchecked(bits >> m),
        }
    }

    /// Packed index `c0 | c1 << m`, in `0..q^2`.
    pub fn index_of(&self, x: ExtElem) -> usize {
        self.pack(x)
    }

    pub fn from_index(&self, idx: usize) -> ExtElem {
        self.unpack(idx as u32)
    }

    /// All q^2 elements in packed-index order.
    pub fn elements(&self) -> impl Iterator<Item = ExtElem> + Clone + '_ {
        (0..1u32 << (2 * self.base.degree())).map(|i| self.unpack(i))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = ExtElem> + Clone + '_ {
        self.elements().skip(1)
    }

    /// Checked construction from two bitmasks.
    pub fn elem(&self, c0: u32, c1: u32) -> Result<ExtElem> {
        Ok(ExtElem {
            c0: self.base.elem(c0)?,
            c1: self.base.elem(c1)?,
        })
    }

    /// Embeds `w^i` from the base field.
    pub fn w_pow(&self, i: i64) -> ExtElem {
        ExtElem::from_base(self.base.w_pow(i))
    }

    #[inline]
    pub fn mul(&self, a: ExtElem, b: ExtElem) -> ExtElem {
        if a.is_zero() || b.is_zero() {
            return ExtElem::ZERO;
        }
        let l = self.log[self.pack(a)] + self.log[self.pack(b)];
        self.unpack(self.exp[l as usize])
    }

    /// Scales by a base-field element.
    #[inline]
    pub fn scale(&self, a: ExtElem, s: BaseElem) -> ExtElem {
        ExtElem {
            c0: self.base.mul(a.c0, s),
            c1: self.base.mul(a.c1, s),
        }
    }

    #[inline]
    pub fn square(&self, a: ExtElem) -> ExtElem {
        self.mul(a, a)
    }

    pub fn inv(&self, a: ExtElem) -> Result<ExtElem> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let order = self.exp.len() as u32 / 2;
        let l = self.log[self.pack(a)];
        Ok(self.unpack(self.exp[((order - l) % order) as usize]))
    }

    pub fn div(&self, a: ExtElem, b: ExtElem) -> Result<ExtElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: ExtElem, e: u64) -> ExtElem {
        if e == 0 {
            return ExtElem::ONE;
        }
        if a.is_zero() {
            return ExtElem::ZERO;
        }
        let order = (self.exp.len() / 2) as u64;
        let l = u64::from(self.log[self.pack(a)]);
        self.unpack(self.exp[((l * (e % order)) % order) as usize])
    }

    /// `a^(2^k)` on GF(q^2). For `k < m` this restricts to the base-field
    /// automorphism `x -> x^(2^k)` and commutes with [`Self::frobenius`].
    pub fn frobenius_pow(&self, a: ExtElem, k: u32) -> ExtElem {
        (0..k % (2 * self.base.degree())).fold(a, |x, _| self.square(x))
    }

    /// `k^q = (k0 + k1) + k1·δ`, using δ^q = δ + 1.
    #[inline]
    pub fn frobenius(&self, k: ExtElem) -> ExtElem {
        ExtElem {
            c0: k.c0 + k.c1,
            c1: k.c1,
        }
    }

    /// `k^(q+1) = k0^2 + k0·k1 + v·k1^2`, an element of GF(q).
    #[inline]
    pub fn norm(&self, k: ExtElem) -> BaseElem {
        let f = &self.base;
        f.square(k.c0) + f.mul(k.c0, k.c1) + f.mul(self.v, f.square(k.c1))
    }

    /// The relative trace `k + k^q`, which is just `k1`.
    #[inline]
    pub fn boxed(&self, k: ExtElem) -> BaseElem {
        k.c1
    }

    pub fn sqrt(&self, a: ExtElem) -> ExtElem {
        self.frobenius_pow(a, 2 * self.base.degree() - 1)
    }

    /// Renders as `w^i + w^j·δ` in power notation.
    pub fn power_notation(&self, x: ExtElem) -> String {
        let f = &self.base;
        match (x.c0.is_zero(), x.c1.is_zero()) {
            (true, true) => "0".to_string(),
            (false, true) => f.power_notation(x.c0),
            (true, false) => delta_term(&f.power_notation(x.c1)),
            (false, false) => format!("{} + {}", f.power_notation(x.c0), delta_term(&f.power_notation(x.c1))),
        }
    }

    /// Packed hex encoding `c0 | c1 << m`.
    pub fn hex(&self, x: ExtElem) -> String {
        format!("{:#x}", self.pack(x))
    }
}

fn delta_term(coeff: &str) -> String {
    if coeff == "1" {
        "δ".to_string()
    } else {
        format!("{coeff}·δ")
    }
}

/// `(a0 + a1δ)(b0 + b1δ) = (a0b0 + v·a1b1) + (a0b1 + a1b0 + a1b1)δ`.
fn mul_components(base: &BaseField, v: BaseElem, a: ExtElem, b: ExtElem) -> ExtElem {
    let t = base.mul(a.c1, b.c1);
    ExtElem {
        c0: base.mul(a.c0, b.c0) + base.mul(v, t),
        c1: base.mul(a.c0, b.c1) + base.mul(a.c1, b.c0) + t,
    }
}
