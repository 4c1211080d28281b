//! Extension fields GF(q^κ) over a base field GF(q), q = 2^w.
//!
//! Elements are coefficient vectors of length κ in the polynomial basis
//! `1, x, ..., x^(κ-1)` modulo a monic irreducible polynomial of degree κ.
//! The modulus is the first irreducible in a fixed pseudo-random candidate
//! stream, so it depends only on `(w, κ)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::{BinaryField, Elem};

/// Coefficient vector of an extension-field element, lowest degree first.
pub type ExtElem = Vec<Elem>;

/// Give up on the modulus search after this many candidates.
const SEARCH_LIMIT: u32 = 1 << 16;
const MODULUS_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtField {
    base: BinaryField,
    kappa: usize,
    /// Monic modulus, `kappa + 1` coefficients.
    modulus: Vec<Elem>,
    /// `frob[i] = x^(i q) mod modulus`: the Frobenius map on the basis.
    frob: Vec<ExtElem>,
}

impl ExtField {
    pub fn new(base: &BinaryField, kappa: usize) -> Result<Self> {
        if kappa == 0 {
            return Err(Error::params("extension degree must be at least 1"));
        }
        // Irreducibles have density about 1/κ among monic polynomials, so a
        // fixed pseudo-random candidate stream finds one quickly.
        let mut rng = ChaCha8Rng::seed_from_u64(MODULUS_SEED);
        for _ in 0..SEARCH_LIMIT {
            let mut modulus: Vec<Elem> = (0..kappa)
                .map(|_| base.elem(rng.gen_range(0..base.order())))
                .collect();
            modulus.push(Elem::ONE);
            if is_irreducible(base, &modulus) {
                return Self::with_modulus(base, modulus);
            }
        }
        Err(Error::Field(format!(
            "no irreducible polynomial of degree {kappa} over {base:?} found"
        )))
    }

    /// Extension defined by a given monic irreducible modulus.
    pub fn with_modulus(base: &BinaryField, modulus: Vec<Elem>) -> Result<Self> {
        if modulus.len() < 2 || modulus.last() != Some(&Elem::ONE) {
            return Err(Error::Field("modulus must be monic of degree >= 1".into()));
        }
        if !is_irreducible(base, &modulus) {
            return Err(Error::Field(format!("modulus {modulus:?} is reducible")));
        }
        let kappa = modulus.len() - 1;
        let mut field = ExtField {
            base: base.clone(),
            kappa,
            modulus,
            frob: Vec::new(),
        };
        // For κ = 1 the class of x is the root -c0 = c0 of the modulus.
        let mut xq = if kappa == 1 {
            vec![field.modulus[0]]
        } else {
            field.basis(1)
        };
        for _ in 0..base.width() {
            xq = field.mul(&xq, &xq);
        }
        let mut acc = field.one();
        for _ in 0..kappa {
            field.frob.push(acc.clone());
            acc = field.mul(&acc, &xq);
        }
        Ok(field)
    }

    pub fn base(&self) -> &BinaryField {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.kappa
    }

    pub fn modulus(&self) -> &[Elem] {
        &self.modulus
    }

    pub fn zero(&self) -> ExtElem {
        vec![Elem::ZERO; self.kappa]
    }

    pub fn one(&self) -> ExtElem {
        self.basis(0)
    }

    /// The basis element `x^i`, `i < κ`.
    pub fn basis(&self, i: usize) -> ExtElem {
        let mut v = self.zero();
        v[i] = Elem::ONE;
        v
    }

    /// Base-field element embedded as a constant.
    pub fn constant(&self, c: Elem) -> ExtElem {
        let mut v = self.zero();
        v[0] = c;
        v
    }

    pub fn contains(&self, a: &[Elem]) -> bool {
        a.len() == self.kappa && a.iter().all(|&c| self.base.contains(c))
    }

    pub fn add(&self, a: &[Elem], b: &[Elem]) -> ExtElem {
        a.iter().zip(b).map(|(&x, &y)| x + y).collect()
    }

    pub fn add_assign(&self, a: &mut [Elem], b: &[Elem]) {
        for (x, &y) in a.iter_mut().zip(b) {
            *x += y;
        }
    }

    /// `c * a` for a base-field scalar `c`.
    pub fn scale(&self, c: Elem, a: &[Elem]) -> ExtElem {
        a.iter().map(|&x| self.base.mul(c, x)).collect()
    }

    pub fn mul(&self, a: &[Elem], b: &[Elem]) -> ExtElem {
        let f = &self.base;
        let k = self.kappa;
        let mut prod = vec![Elem::ZERO; 2 * k - 1];
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (p, &y) in prod[i..].iter_mut().zip(b) {
                *p += f.mul(x, y);
            }
        }
        for i in (k..2 * k - 1).rev() {
            let c = prod[i];
            if c.is_zero() {
                continue;
            }
            for (p, &g) in prod[i - k..i].iter_mut().zip(&self.modulus) {
                *p += f.mul(c, g);
            }
        }
        prod.truncate(k);
        prod
    }

    /// `a^q`, linear over the base field.
    pub fn frobenius(&self, a: &[Elem]) -> ExtElem {
        let mut out = self.zero();
        for (&c, col) in a.iter().zip(&self.frob) {
            if c.is_zero() {
                continue;
            }
            for (o, &y) in out.iter_mut().zip(col) {
                *o += self.base.mul(c, y);
            }
        }
        out
    }

    pub fn is_zero(&self, a: &[Elem]) -> bool {
        a.iter().all(|x| x.is_zero())
    }

    pub fn inv(&self, a: &[Elem]) -> Result<ExtElem> {
        if self.is_zero(a) {
            return Err(Error::Field("inverse of zero".into()));
        }
        let f = &self.base;
        // Extended Euclid on (modulus, a), tracking the cofactor of a.
        let mut r0 = self.modulus.clone();
        let mut r1 = trimmed(a.to_vec());
        let mut s0: Vec<Elem> = Vec::new();
        let mut s1: Vec<Elem> = vec![Elem::ONE];
        while !r1.is_empty() {
            let (q, r) = divrem(f, &r0, &r1);
            let qs = poly_mul(f, &q, &s1);
            let s2 = trimmed(poly_add(&s0, &qs));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        if r0.len() != 1 {
            return Err(Error::Invariant("extension modulus is not irreducible".into()));
        }
        let c = f.inv(r0[0])?;
        let mut out = self.zero();
        for (o, &s) in out.iter_mut().zip(&s0) {
            *o = f.mul(s, c);
        }
        Ok(out)
    }

    /// Solve `a x = b` for a square system by Gaussian elimination.
    pub fn solve(&self, mut a: Vec<Vec<ExtElem>>, mut b: Vec<ExtElem>) -> Result<Vec<ExtElem>> {
        let n = b.len();
        if a.len() != n || a.iter().any(|row| row.len() != n) {
            return Err(Error::params("solve needs a square system"));
        }
        for col in 0..n {
            let pivot = (col..n)
                .find(|&i| !self.is_zero(&a[i][col]))
                .ok_or_else(|| Error::Invariant(format!("singular system at column {col}")))?;
            a.swap(col, pivot);
            b.swap(col, pivot);
            let inv = self.inv(&a[col][col])?;
            for j in col..n {
                a[col][j] = self.mul(&a[col][j], &inv);
            }
            b[col] = self.mul(&b[col], &inv);
            for i in 0..n {
                if i == col || self.is_zero(&a[i][col]) {
                    continue;
                }
                let factor = a[i][col].clone();
                for j in col..n {
                    let t = self.mul(&factor, &a[col][j]);
                    self.add_assign(&mut a[i][j], &t);
                }
                let t = self.mul(&factor, &b[col]);
                self.add_assign(&mut b[i], &t);
            }
        }
        Ok(b)
    }
}

fn trimmed(mut p: Vec<Elem>) -> Vec<Elem> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_add(a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, &y) in out.iter_mut().zip(short) {
        *o += y;
    }
    out
}

fn poly_mul(f: &BinaryField, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Elem::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += f.mul(x, y);
        }
    }
    trimmed(out)
}

/// Quotient and remainder of `a / b`, `b` trimmed and nonzero.
fn divrem(f: &BinaryField, a: &[Elem], b: &[Elem]) -> (Vec<Elem>, Vec<Elem>) {
    let mut r = trimmed(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = f.inv(*b.last().expect("nonzero divisor")).expect("nonzero lead");
    let mut q = vec![Elem::ZERO; r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = f.mul(*r.last().unwrap(), lead_inv);
        q[shift] = c;
        for (i, &y) in b.iter().enumerate() {
            r[shift + i] += f.mul(c, y);
        }
        r = trimmed(r);
    }
    (trimmed(q), r)
}

fn gcd(f: &BinaryField, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut a = trimmed(a.to_vec());
    let mut b = trimmed(b.to_vec());
    while !b.is_empty() {
        let (_, r) = divrem(f, &a, &b);
        a = std::mem::replace(&mut b, r);
    }
    a
}

/// Ben-Or test: a monic `g` of degree κ is irreducible over GF(q) iff
/// `gcd(g, x^(q^i) - x) = 1` for every `1 <= i <= κ/2`.
pub fn is_irreducible(base: &BinaryField, g: &[Elem]) -> bool {
    let g = trimmed(g.to_vec());
    if g.len() < 2 {
        return false;
    }
    let kappa = g.len() - 1;
    let rem = |p: Vec<Elem>| divrem(base, &p, &g).1;
    let x = rem(vec![Elem::ZERO, Elem::ONE]);
    let mut h = x.clone();
    for _ in 0..kappa / 2 {
        for _ in 0..base.width() {
            h = rem(poly_mul(base, &h, &h));
        }
        let diff = trimmed(poly_add(&h, &x));
        if gcd(base, &g, &diff).len() != 1 {
            return false;
        }
    }
    true
}
