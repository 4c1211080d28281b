//! Systematic Reed–Solomon erasure codec used as the inner code of each repair
//! group.
//!
//! Position `i` of a codeword is the evaluation at the field element `i` of the
//! unique polynomial of degree `< dimension` that takes the message values at
//! the first `dimension` points. Any `dimension` positions therefore determine
//! the codeword.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gf::{BinaryField, Elem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MdsCodec {
    field: BinaryField,
    length: usize,
    dimension: usize,
    points: Vec<Elem>,
    /// `dimension x length` systematic generator matrix.
    generator: Vec<Vec<Elem>>,
}

impl MdsCodec {
    pub fn new(field: &BinaryField, length: usize, dimension: usize) -> Result<Self> {
        if dimension == 0 || dimension > length {
            return Err(Error::params(format!(
                "MDS codec needs 1 <= dimension <= length, got ({length}, {dimension})"
            )));
        }
        if length > field.order() {
            return Err(Error::Field(format!(
                "length {length} exceeds the {} elements of {field:?}",
                field.order()
            )));
        }
        let points: Vec<Elem> = (0..length).map(|i| field.elem(i)).collect();
        let mut generator = vec![vec![Elem::ZERO; length]; dimension];
        for (j, &x) in points.iter().enumerate() {
            let basis = lagrange_basis(field, &points[..dimension], x)?;
            for (i, b) in basis.into_iter().enumerate() {
                generator[i][j] = b;
            }
        }
        Ok(MdsCodec {
            field: field.clone(),
            length,
            dimension,
            points,
            generator,
        })
    }

    /// Same code with `extra` more positions appended; existing positions keep
    /// their evaluation points, so old codeword symbols are unchanged.
    pub fn lengthened(&self, extra: usize) -> Result<Self> {
        MdsCodec::new(&self.field, self.length + extra, self.dimension)
    }

    pub fn field(&self) -> &BinaryField {
        &self.field
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn points(&self) -> &[Elem] {
        &self.points
    }

    /// Row `i` holds the contribution of message symbol `i` to each position.
    pub fn generator(&self) -> &[Vec<Elem>] {
        &self.generator
    }

    pub fn encode(&self, message: &[Elem]) -> Result<Vec<Elem>> {
        if message.len() != self.dimension {
            return Err(Error::params(format!(
                "message has {} symbols, codec dimension is {}",
                message.len(),
                self.dimension
            )));
        }
        let f = &self.field;
        let mut out = vec![Elem::ZERO; self.length];
        for (row, &m) in self.generator.iter().zip(message) {
            if m.is_zero() {
                continue;
            }
            for (o, &g) in out.iter_mut().zip(row) {
                *o += f.mul(m, g);
            }
        }
        Ok(out)
    }

    /// Recover the full codeword from any `dimension` or more positions.
    /// Extra positions are checked against the decoded codeword.
    pub fn decode(&self, available: &BTreeMap<usize, Elem>) -> Result<Vec<Elem>> {
        if let Some((&pos, _)) = available.range(self.length..).next() {
            return Err(Error::params(format!(
                "position {pos} outside codeword of length {}",
                self.length
            )));
        }
        if available.len() < self.dimension {
            return Err(Error::Insufficient(format!(
                "{} positions available, {} needed",
                available.len(),
                self.dimension
            )));
        }
        let f = &self.field;
        let chosen: Vec<(usize, Elem)> = available
            .iter()
            .take(self.dimension)
            .map(|(&p, &v)| (p, v))
            .collect();
        let xs: Vec<Elem> = chosen.iter().map(|&(p, _)| self.points[p]).collect();
        let mut out = Vec::with_capacity(self.length);
        for &x in &self.points {
            let basis = lagrange_basis(f, &xs, x)?;
            let v = basis
                .iter()
                .zip(&chosen)
                .fold(Elem::ZERO, |acc, (&b, &(_, y))| acc + f.mul(b, y));
            out.push(v);
        }
        for (&p, &v) in available.iter().skip(self.dimension) {
            if out[p] != v {
                return Err(Error::Inconsistent(format!(
                    "position {p} disagrees with the decoded codeword"
                )));
            }
        }
        Ok(out)
    }
}

/// Values at `x` of the Lagrange basis polynomials over the nodes `xs`.
fn lagrange_basis(f: &BinaryField, xs: &[Elem], x: Elem) -> Result<Vec<Elem>> {
    let mut out = Vec::with_capacity(xs.len());
    for (i, &xi) in xs.iter().enumerate() {
        let mut num = Elem::ONE;
        let mut den = Elem::ONE;
        for (l, &xl) in xs.iter().enumerate() {
            if l != i {
                num = f.mul(num, x - xl);
                den = f.mul(den, xi - xl);
            }
        }
        out.push(f.div(num, den)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::subsets_of;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_message(f: &BinaryField, len: usize, rng: &mut ChaCha8Rng) -> Vec<Elem> {
        (0..len).map(|_| f.elem(rng.gen_range(0..f.order()))).collect()
    }

    #[test]
    fn identity_code_when_no_redundancy() {
        let f = BinaryField::default();
        let c = MdsCodec::new(&f, 5, 5).unwrap();
        let msg: Vec<Elem> = (1..=5).map(|v| f.elem(v)).collect();
        assert_eq!(c.encode(&msg).unwrap(), msg);
    }

    #[test]
    fn zero_message_gives_zero_codeword() {
        let f = BinaryField::default();
        let c = MdsCodec::new(&f, 7, 3).unwrap();
        assert_eq!(c.encode(&[Elem::ZERO; 3]).unwrap(), vec![Elem::ZERO; 7]);
    }

    #[test]
    fn systematic_prefix() {
        let f = BinaryField::default();
        let c = MdsCodec::new(&f, 6, 4).unwrap();
        let msg: Vec<Elem> = [9, 8, 7, 6].iter().map(|&v| f.elem(v)).collect();
        assert_eq!(&c.encode(&msg).unwrap()[..4], &msg[..]);
    }

    #[test]
    fn every_pair_of_positions_decodes_4_2() {
        let f = BinaryField::default();
        let c = MdsCodec::new(&f, 4, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let msg = random_message(&f, 2, &mut rng);
        let cw = c.encode(&msg).unwrap();
        let positions: Vec<u32> = (0..4).collect();
        for pair in subsets_of(&positions, 2) {
            let avail = pair.iter().map(|&p| (p as usize, cw[p as usize])).collect();
            let got = c.decode(&avail).unwrap();
            assert_eq!(&got[..2], &msg[..]);
        }
    }

    #[test]
    fn every_erasure_pattern_up_to_length_8() {
        let f = BinaryField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for len in 1..=8usize {
            for dim in 1..=len {
                let c = MdsCodec::new(&f, len, dim).unwrap();
                let cw = c.encode(&random_message(&f, dim, &mut rng)).unwrap();
                let positions: Vec<u32> = (0..len as u32).collect();
                for erased in subsets_of(&positions, len - dim) {
                    let avail = (0..len)
                        .filter(|p| !erased.contains(&(*p as u32)))
                        .map(|p| (p, cw[p]))
                        .collect();
                    assert_eq!(c.decode(&avail).unwrap(), cw);
                }
            }
        }
    }

    #[test]
    fn below_threshold_fails() {
        let f = BinaryField::default();
        let c = MdsCodec::new(&f, 6, 3).unwrap();
        let avail = [(0, Elem(1)), (4, Elem(2))].into_iter().collect();
        assert!(matches!(c.decode(&avail), Err(Error::Insufficient(_))));
    }

    #[test]
    fn wrong_message_length_fails() {
        let f = BinaryField::default();
        let c = MdsCodec::new(&f, 6, 3).unwrap();
        assert!(c.encode(&[Elem(1); 2]).is_err());
    }

    #[test]
    fn tampered_extra_position_is_detected() {
        let f = BinaryField::default();
        let c = MdsCodec::new(&f, 6, 3).unwrap();
        let mut cw = c.encode(&[Elem(1), Elem(2), Elem(3)]).unwrap();
        cw[5] += Elem(1);
        let avail = cw.iter().copied().enumerate().collect();
        assert!(matches!(c.decode(&avail), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn field_too_small() {
        let f = BinaryField::new(2).unwrap();
        assert!(MdsCodec::new(&f, 5, 2).is_err());
        assert!(MdsCodec::new(&f, 4, 2).is_ok());
    }

    #[test]
    fn lengthening_keeps_old_symbols() {
        let f = BinaryField::default();
        let c = MdsCodec::new(&f, 3, 2).unwrap();
        let long = c.lengthened(1).unwrap();
        let msg = [Elem(0x21), Elem(0x42)];
        let a = c.encode(&msg).unwrap();
        let b = long.encode(&msg).unwrap();
        assert_eq!(&b[..3], &a[..]);
        assert_eq!(b.len(), 4);
    }

    proptest! {
        #[test]
        fn round_trip_under_erasures(
            len in 2usize..10,
            seed in any::<u64>(),
            erase_mask in any::<u16>(),
        ) {
            let f = BinaryField::default();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let dim = rng.gen_range(1..=len);
            let c = MdsCodec::new(&f, len, dim).unwrap();
            let cw = c.encode(&random_message(&f, dim, &mut rng)).unwrap();
            let mut avail: BTreeMap<usize, Elem> = BTreeMap::new();
            let mut erased = 0;
            for (p, &v) in cw.iter().enumerate() {
                if erase_mask >> p & 1 == 1 && erased < len - dim {
                    erased += 1;
                } else {
                    avail.insert(p, v);
                }
            }
            prop_assert_eq!(c.decode(&avail).unwrap(), cw);
        }

        #[test]
        fn encoding_is_linear(seed in any::<u64>(), a in 0usize..256) {
            let f = BinaryField::default();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = MdsCodec::new(&f, 8, 5).unwrap();
            let u = random_message(&f, 5, &mut rng);
            let v = random_message(&f, 5, &mut rng);
            let a = f.elem(a);
            let mix: Vec<Elem> = u.iter().zip(&v).map(|(&x, &y)| f.mul(a, x) + y).collect();
            let lhs = c.encode(&mix).unwrap();
            let cu = c.encode(&u).unwrap();
            let cv = c.encode(&v).unwrap();
            let rhs: Vec<Elem> = cu.iter().zip(&cv).map(|(&x, &y)| f.mul(a, x) + y).collect();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
