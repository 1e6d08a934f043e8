//! Reduction modulo an integer lattice, used as the abelianization invariant.

/// Row-style Hermite normal form of a sublattice of `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    /// `(pivot column, row)` with strictly increasing pivot columns and positive pivots.
    rows: Vec<(usize, Vec<i128>)>,
}

impl Lattice {
    pub fn new(dim: usize, generators: impl IntoIterator<Item = Vec<i64>>) -> Self {
        let mut work: Vec<Vec<i128>> = generators
            .into_iter()
            .map(|g| {
                assert_eq!(g.len(), dim);
                g.into_iter().map(i128::from).collect()
            })
            .filter(|g: &Vec<i128>| g.iter().any(|&x| x != 0))
            .collect();
        let mut rows: Vec<(usize, Vec<i128>)> = Vec::new();
        for col in 0..dim {
            // Euclid on column `col` across the remaining rows.
            loop {
                let mut nz: Vec<usize> = (0..work.len()).filter(|&i| work[i][col] != 0).collect();
                if nz.len() <= 1 {
                    break;
                }
                nz.sort_by_key(|&i| work[i][col].abs());
                let p = nz[0];
                for &i in &nz[1..] {
                    let q = work[i][col].div_euclid(work[p][col]);
                    let pivot = work[p].clone();
                    for (x, y) in work[i].iter_mut().zip(&pivot) {
                        *x -= q * y;
                    }
                }
            }
            if let Some(i) = work.iter().position(|r| r[col] != 0) {
                let mut row = work.swap_remove(i);
                if row[col] < 0 {
                    row.iter_mut().for_each(|x| *x = -*x);
                }
                rows.push((col, row));
            }
            work.retain(|r| r.iter().any(|&x| x != 0));
        }
        // Reduce entries above each pivot into [0, pivot).
        for k in 0..rows.len() {
            let (col, pivot) = (rows[k].0, rows[k].1.clone());
            for (_, row) in rows.iter_mut().take(k) {
                let q = row[col].div_euclid(pivot[col]);
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= q * y;
                }
            }
        }
        Lattice { dim, rows }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Canonical representative of `v + L`: pivot coordinates land in `[0, pivot)`.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.dim);
        let mut x: Vec<i128> = v.iter().map(|&a| i128::from(a)).collect();
        for (col, row) in &self.rows {
            let q = x[*col].div_euclid(row[*col]);
            if q != 0 {
                for (a, b) in x.iter_mut().zip(row) {
                    *a -= q * b;
                }
            }
        }
        x.into_iter().map(|a| a as i64).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cyclic_quotient() {
        let l = Lattice::new(1, [vec![6], vec![4]]);
        assert_eq!(l.rank(), 1);
        assert_eq!(l.reduce(&[7]), vec![1]);
        assert_eq!(l.reduce(&[-1]), vec![1]);
    }

    #[test]
    fn trivial_lattice_is_identity() {
        let l = Lattice::new(3, []);
        assert_eq!(l.reduce(&[1, -2, 3]), vec![1, -2, 3]);
    }

    proptest! {
        #[test]
        fn coset_representatives_agree(
            gens in proptest::collection::vec(proptest::collection::vec(-5i64..6, 3), 0..4),
            v in proptest::collection::vec(-20i64..21, 3),
            coeffs in proptest::collection::vec(-3i64..4, 4),
        ) {
            let l = Lattice::new(3, gens.clone());
            let mut w = v.clone();
            for (g, c) in gens.iter().zip(&coeffs) {
                for (a, b) in w.iter_mut().zip(g) {
                    *a += c * b;
                }
            }
            prop_assert_eq!(l.reduce(&v), l.reduce(&w));
            prop_assert_eq!(l.reduce(&l.reduce(&v)), l.reduce(&v));
        }
    }
}
