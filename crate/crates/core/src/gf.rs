//! Arithmetic in binary extension fields GF(2^w), 1 <= w <= 16.
//!
//! Multiplication goes through log/exp tables built from a fixed primitive
//! polynomial per width. Width 8 (polynomial 0x11D) is the default.

use std::fmt;
use std::ops::{Add, AddAssign, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Primitive polynomials indexed by width, including the leading term.
const PRIMITIVE: [u32; 17] = [
    0, 0x3, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443,
    0x8003, 0x1100B,
];

pub const DEFAULT_WIDTH: u8 = 8;

/// An element of GF(2^w), stored as its polynomial-basis bit pattern.
///
/// Addition is XOR and needs no field context; everything else goes through
/// [`BinaryField`].
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub u16);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl Add for Elem {
    type Output = Elem;
    fn add(self, rhs: Elem) -> Elem {
        Elem(self.0 ^ rhs.0)
    }
}

impl Sub for Elem {
    type Output = Elem;
    fn sub(self, rhs: Elem) -> Elem {
        Elem(self.0 ^ rhs.0)
    }
}

impl AddAssign for Elem {
    fn add_assign(&mut self, rhs: Elem) {
        self.0 ^= rhs.0;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Inv,
    Div,
}

struct Tables {
    width: u8,
    poly: u32,
    /// exp[i] = g^i for i in 0..2*(order-1), doubled to skip a modulo.
    exp: Vec<u16>,
    log: Vec<u16>,
}

/// GF(2^w) descriptor. Cloning is cheap; the tables are shared.
#[derive(Clone)]
pub struct BinaryField {
    tables: Arc<Tables>,
}

impl fmt::Debug for BinaryField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{})", self.tables.width)
    }
}

impl PartialEq for BinaryField {
    fn eq(&self, other: &Self) -> bool {
        self.tables.width == other.tables.width && self.tables.poly == other.tables.poly
    }
}

impl Eq for BinaryField {}

impl Default for BinaryField {
    fn default() -> Self {
        BinaryField::new(DEFAULT_WIDTH).expect("default width is supported")
    }
}

impl BinaryField {
    pub fn new(width: u8) -> Result<Self> {
        if !(1..=16).contains(&width) {
            return Err(Error::Field(format!(
                "unsupported width {width}, expected 1..=16"
            )));
        }
        let poly = PRIMITIVE[width as usize];
        let order = 1usize << width;
        let cycle = order - 1;
        let mut exp = vec![0u16; 2 * cycle];
        let mut log = vec![0u16; order];
        let mut val: u32 = 1;
        for i in 0..cycle {
            if i > 0 && val == 1 {
                return Err(Error::Field(format!(
                    "polynomial {poly:#x} is not primitive"
                )));
            }
            exp[i] = val as u16;
            log[val as usize] = i as u16;
            val <<= 1;
            if val & (1 << width) != 0 {
                val ^= poly;
            }
        }
        for i in cycle..2 * cycle {
            exp[i] = exp[i - cycle];
        }
        Ok(BinaryField {
            tables: Arc::new(Tables {
                width,
                poly,
                exp,
                log,
            }),
        })
    }

    pub fn width(&self) -> u8 {
        self.tables.width
    }

    pub fn poly(&self) -> u32 {
        self.tables.poly
    }

    /// Number of elements, 2^w.
    pub fn order(&self) -> usize {
        1usize << self.tables.width
    }

    /// The element with bit pattern `v`; `v` must be below the field order.
    pub fn elem(&self, v: usize) -> Elem {
        debug_assert!(v < self.order());
        Elem(v as u16)
    }

    pub fn contains(&self, a: Elem) -> bool {
        (a.0 as usize) < self.order()
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        a + b
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        let t = &*self.tables;
        Elem(t.exp[t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::Field("inverse of zero".into()));
        }
        let t = &*self.tables;
        let cycle = self.order() - 1;
        Ok(Elem(t.exp[(cycle - t.log[a.0 as usize] as usize) % cycle]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let t = &*self.tables;
        let cycle = (self.order() - 1) as u64;
        let l = (t.log[a.0 as usize] as u64 * (e % cycle)) % cycle;
        Elem(t.exp[l as usize])
    }

    /// Binary operation dispatch; `Inv` ignores `b`.
    pub fn apply(&self, op: FieldOp, a: Elem, b: Elem) -> Result<Elem> {
        match op {
            FieldOp::Add => Ok(self.add(a, b)),
            FieldOp::Mul => Ok(self.mul(a, b)),
            FieldOp::Inv => self.inv(a),
            FieldOp::Div => self.div(a, b),
        }
    }

    /// Number of hex digits needed to print one element.
    pub fn hex_digits(&self) -> usize {
        (self.tables.width as usize).div_ceil(4)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Carry-less multiply then reduce: an implementation of field
    /// multiplication independent of the log tables.
    fn slow_mul(a: u16, b: u16, width: u8, poly: u32) -> u16 {
        let mut acc: u32 = 0;
        for i in 0..width {
            if b >> i & 1 == 1 {
                acc ^= (a as u32) << i;
            }
        }
        for bit in (width as u32..2 * width as u32).rev() {
            if acc >> bit & 1 == 1 {
                acc ^= poly << (bit - width as u32);
            }
        }
        acc as u16
    }

    #[test]
    fn every_width_builds() {
        for w in 1..=16 {
            let f = BinaryField::new(w).unwrap();
            assert_eq!(f.order(), 1 << w);
        }
        assert!(BinaryField::new(0).is_err());
        assert!(BinaryField::new(17).is_err());
    }

    #[test]
    fn add_is_self_inverse() {
        let f = BinaryField::default();
        for x in 0..256 {
            let x = f.elem(x);
            assert_eq!(f.add(x, x), Elem::ZERO);
        }
    }

    #[test]
    fn inverse_round_trip() {
        for w in [1, 4, 8, 12] {
            let f = BinaryField::new(w).unwrap();
            for x in 1..f.order() {
                let x = f.elem(x);
                assert_eq!(f.mul(x, f.inv(x).unwrap()), Elem::ONE);
            }
        }
    }

    #[test]
    fn inverse_of_zero_fails() {
        let f = BinaryField::default();
        assert!(f.inv(Elem::ZERO).is_err());
        assert!(f.div(Elem::ONE, Elem::ZERO).is_err());
        assert!(f.apply(FieldOp::Inv, Elem::ZERO, Elem::ZERO).is_err());
    }

    #[test]
    fn gf16_axioms_exhaustive() {
        let f = BinaryField::new(4).unwrap();
        let all: Vec<Elem> = (0..16).map(|v| f.elem(v)).collect();
        for &a in &all {
            for &b in &all {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.mul(a, b).0, slow_mul(a.0, b.0, 4, 0x13));
                for &c in &all {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn tables_match_carryless_multiply() {
        for w in [2u8, 3, 5, 8, 11, 16] {
            let f = BinaryField::new(w).unwrap();
            let step = (f.order() / 97).max(1);
            for a in (0..f.order()).step_by(step) {
                for b in (0..f.order()).step_by(step) {
                    assert_eq!(
                        f.mul(f.elem(a), f.elem(b)).0,
                        slow_mul(a as u16, b as u16, w, f.poly()),
                        "w={w} a={a} b={b}"
                    );
                }
            }
        }
    }

    #[test]
    fn pow_agrees_with_repeated_mul() {
        let f = BinaryField::default();
        let a = f.elem(0x53);
        let mut acc = Elem::ONE;
        for e in 0..600u64 {
            assert_eq!(f.pow(a, e), acc);
            acc = f.mul(acc, a);
        }
    }
}
