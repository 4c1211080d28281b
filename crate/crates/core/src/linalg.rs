//! Incremental row echelon form over GF(2^w).

use crate::gf::{BinaryField, Elem};

/// A growing set of linearly independent vectors, kept in echelon form.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: BinaryField,
    width: usize,
    /// Pivot column and row, the row normalized to 1 at its pivot.
    rows: Vec<(usize, Vec<Elem>)>,
}

impl Echelon {
    pub fn new(field: &BinaryField, width: usize) -> Self {
        Echelon {
            field: field.clone(),
            width,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Add `v` if it is independent of the vectors seen so far.
    pub fn insert(&mut self, v: &[Elem]) -> bool {
        assert_eq!(v.len(), self.width, "vector width mismatch");
        let f = &self.field;
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if c.is_zero() {
                continue;
            }
            for (x, &y) in v.iter_mut().zip(row) {
                *x += f.mul(c, y);
            }
        }
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = f.inv(v[pivot]).expect("pivot is nonzero");
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
        self.rows.push((pivot, v));
        true
    }
}

pub fn rank(field: &BinaryField, vectors: &[Vec<Elem>]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let mut ech = Echelon::new(field, first.len());
    for v in vectors {
        ech.insert(v);
    }
    ech.rank()
}
