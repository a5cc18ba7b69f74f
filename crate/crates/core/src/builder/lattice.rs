//! Subgroups of `Z^d` with exact membership.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// A subgroup of `Z^d`, stored as a row-echelon integer basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivialitySubgroup {
    dim: usize,
    generators: Vec<Vec<i64>>,
    echelon: Vec<Vec<BigInt>>,
}

impl TrivialitySubgroup {
    pub fn new(dim: usize, generators: Vec<Vec<i64>>) -> Self {
        assert!(generators.iter().all(|g| g.len() == dim), "generator length");
        let rows: Vec<Vec<BigInt>> = generators.iter().map(|g| g.iter().map(|&x| BigInt::from(x)).collect()).collect();
        TrivialitySubgroup {
            dim,
            echelon: hermite(rows, dim),
            generators,
        }
    }

    pub fn trivial(dim: usize) -> Self {
        Self::new(dim, Vec::new())
    }

    pub fn full(dim: usize) -> Self {
        Self::new(dim, (0..dim).map(|i| (0..dim).map(|j| (i == j) as i64).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.echelon.len()
    }

    /// Adds generators, returning the enlarged subgroup.
    pub fn join(&self, more: &[Vec<i64>]) -> Self {
        let mut g = self.generators.clone();
        g.extend(more.iter().cloned());
        Self::new(self.dim, g)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        assert_eq!(v.len(), self.dim, "vector length");
        let mut v: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        let mut col = 0;
        for row in &self.echelon {
            let piv = row.iter().position(|x| !x.is_zero()).expect("nonzero echelon row");
            if v[col..piv].iter().any(|x| !x.is_zero()) {
                return false;
            }
            let (q, r) = v[piv].div_rem(&row[piv]);
            if !r.is_zero() {
                return false;
            }
            for (x, y) in v.iter_mut().zip(row) {
                *x -= &q * y;
            }
            col = piv + 1;
        }
        v.iter().all(Zero::is_zero)
    }
}

/// Integer row echelon form with positive pivots.
fn hermite(mut rows: Vec<Vec<BigInt>>, dim: usize) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    for c in 0..dim {
        loop {
            rows.retain(|r| r.iter().any(|x| !x.is_zero()));
            let mut nz: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            nz.sort_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()));
            let p = nz[0];
            if nz.len() == 1 {
                let mut r = rows.swap_remove(p);
                if r[c].is_negative() {
                    r.iter_mut().for_each(|x| *x = -x.clone());
                }
                out.push(r);
                break;
            }
            let pivot = rows[p].clone();
            for &i in &nz[1..] {
                let q = rows[i][c].div_floor(&pivot[c]);
                for (x, y) in rows[i].iter_mut().zip(&pivot) {
                    *x -= &q * y;
                }
            }
        }
    }
    out
}
