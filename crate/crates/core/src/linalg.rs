//! Exact linear algebra over `Q(i)`: dense and sparse matrices, echelon
//! forms, kernels, spans and preimage solving.

use std::collections::BTreeMap;

use crate::scalar::GaussianRational as Q;

/// Dense vector.
pub type Vector = Vec<Q>;

pub fn zero_vector(n: usize) -> Vector {
    vec![Q::zero(); n]
}

pub fn unit_vector(n: usize, i: usize) -> Vector {
    let mut v = zero_vector(n);
    v[i] = Q::one();
    v
}

pub fn is_zero_vector(v: &[Q]) -> bool {
    v.iter().all(Q::is_zero)
}

/// `a + k b` in place.
pub fn axpy(a: &mut [Q], k: &Q, b: &[Q]) {
    if k.is_zero() {
        return;
    }
    for (x, y) in a.iter_mut().zip(b) {
        if !y.is_zero() {
            *x += &(k * y);
        }
    }
}

pub fn scale(v: &[Q], k: &Q) -> Vector {
    v.iter().map(|x| x * k).collect()
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Q>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vector>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row);
        }
        Matrix { rows: r, cols, data }
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(columns: &[Vector], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                if !x.is_zero() {
                    m.set(i, j, x.clone());
                }
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Q::is_zero)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vector {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                let mut acc = Q::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Stack `self` above `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).inv().expect("nonzero pivot");
            if !inv.is_one() {
                for j in c..self.cols {
                    let v = self.get(r, j) * &inv;
                    self.set(r, j, v);
                }
            }
            let pivot_row: Vec<Q> = self.row(r).to_vec();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    if !pivot_row[j].is_zero() {
                        let v = self.get(i, j) - &(&f * &pivot_row[j]);
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the null space, one vector per free column, in column order.
    pub fn kernel(&self) -> Vec<Vector> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = zero_vector(self.cols);
            v[f] = Q::one();
            for (r, &p) in pivots.iter().enumerate() {
                let x = m.get(r, f);
                if !x.is_zero() {
                    v[p] = -x;
                }
            }
            out.push(v);
        }
        out
    }

    /// Inverse of a square matrix, `None` if singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Q::one());
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Some(out)
    }

    pub fn conj(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(Q::conj).collect(),
        }
    }
}

/// Sparse matrix keyed by `(row, col)`; only nonzero entries are stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: BTreeMap<(usize, usize), Q>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        self.entries.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Adds `v` to entry `(i, j)`.
    pub fn add_entry(&mut self, i: usize, j: usize, v: &Q) {
        assert!(i < self.rows && j < self.cols, "entry ({i},{j}) outside {}x{}", self.rows, self.cols);
        let e = self.entries.entry((i, j)).or_default();
        *e += v;
        if e.is_zero() {
            self.entries.remove(&(i, j));
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        assert!(i < self.rows && j < self.cols);
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Q)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows, self.cols);
        for (&(i, j), v) in &self.entries {
            m.set(i, j, v.clone());
        }
        m
    }

    pub fn from_dense(m: &Matrix) -> Self {
        let mut s = SparseMatrix::zeros(m.rows, m.cols);
        for i in 0..m.rows {
            for j in 0..m.cols {
                let v = m.get(i, j);
                if !v.is_zero() {
                    s.entries.insert((i, j), v.clone());
                }
            }
        }
        s
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in sparse product");
        let mut by_row: BTreeMap<usize, Vec<(usize, &Q)>> = BTreeMap::new();
        for (&(k, j), v) in &other.entries {
            by_row.entry(k).or_default().push((j, v));
        }
        let mut out = SparseMatrix::zeros(self.rows, other.cols);
        for (&(i, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(j, b) in row {
                    out.add_entry(i, j, &(a * b));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (&(i, j), v) in &other.entries {
            out.add_entry(i, j, v);
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vector {
        assert_eq!(self.cols, v.len());
        let mut out = zero_vector(self.rows);
        for (&(i, j), a) in &self.entries {
            if !v[j].is_zero() {
                out[i] += &(a * &v[j]);
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vector {
        let mut v = zero_vector(self.rows);
        for (&(i, c), x) in &self.entries {
            if c == j {
                v[i] = x.clone();
            }
        }
        v
    }

    pub fn columns(&self) -> Vec<Vector> {
        let mut cols = vec![zero_vector(self.rows); self.cols];
        for (&(i, j), x) in &self.entries {
            cols[j][i] = x.clone();
        }
        cols
    }

    pub fn conj(&self) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|(k, v)| (*k, v.conj())).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        let mut s = Span::new(self.rows);
        for c in self.columns() {
            s.insert(&c);
        }
        s.dim()
    }

    pub fn kernel(&self) -> Vec<Vector> {
        self.to_dense().kernel()
    }

    /// `P self Q` style reindexing: entry `(i,j)` moves to `(r[i], c[j])`.
    pub fn permuted(&self, r: &[usize], c: &[usize]) -> SparseMatrix {
        let mut out = SparseMatrix::zeros(self.rows, self.cols);
        for (&(i, j), v) in &self.entries {
            out.entries.insert((r[i], c[j]), v.clone());
        }
        out
    }
}

/// An incrementally built subspace of `Q(i)^n` in reduced echelon form.
///
/// Each stored row remembers which inserted vectors it is a combination of,
/// so membership queries can also return coordinates.
#[derive(Clone, Debug)]
pub struct Span {
    n: usize,
    rows: Vec<(usize, Vector, Vector)>,
    inserted: usize,
}

impl Span {
    pub fn new(n: usize) -> Self {
        Span {
            n,
            rows: Vec::new(),
            inserted: 0,
        }
    }

    pub fn from_vectors<'a>(n: usize, vs: impl IntoIterator<Item = &'a Vector>) -> Self {
        let mut s = Span::new(n);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Number of vectors passed to `insert` so far.
    pub fn generators(&self) -> usize {
        self.inserted
    }

    /// Residual of `v` after elimination, together with the combination of
    /// generators that was subtracted (so `v = residual + Σ c_k g_k`).
    pub fn reduce(&self, v: &[Q]) -> (Vector, Vector) {
        assert_eq!(v.len(), self.n, "vector length does not match ambient dimension");
        let mut r = v.to_vec();
        let mut combo = zero_vector(self.inserted);
        for (p, row, c) in &self.rows {
            let f = r[*p].clone();
            if f.is_zero() {
                continue;
            }
            let mf = -&f;
            axpy(&mut r, &mf, row);
            for (acc, x) in combo.iter_mut().zip(c) {
                if !x.is_zero() {
                    *acc += &(&f * x);
                }
            }
        }
        (r, combo)
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        let mut r = v.to_vec();
        for (p, row, _) in &self.rows {
            let f = r[*p].clone();
            if !f.is_zero() {
                axpy(&mut r, &-&f, row);
            }
        }
        is_zero_vector(&r)
    }

    /// Coordinates of `v` in terms of the inserted generators, if `v` lies in
    /// the span.
    pub fn solve(&self, v: &[Q]) -> Option<Vector> {
        let (r, combo) = self.reduce(v);
        is_zero_vector(&r).then_some(combo)
    }

    /// Insert `v`; returns true if the dimension grew.
    pub fn insert(&mut self, v: &[Q]) -> bool {
        let idx = self.inserted;
        self.inserted += 1;
        for (_, _, c) in self.rows.iter_mut() {
            c.push(Q::zero());
        }
        let (mut r, combo) = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        // r = v - Σ combo_k g_k
        let mut c = combo.iter().map(|x| -x).collect::<Vector>();
        c.resize(self.inserted, Q::zero());
        c[idx] = Q::one();
        let inv = r[p].inv().expect("nonzero pivot");
        r = scale(&r, &inv);
        c = scale(&c, &inv);
        for (_, row, rc) in self.rows.iter_mut() {
            let f = row[p].clone();
            if f.is_zero() {
                continue;
            }
            let mf = -&f;
            axpy(row, &mf, &r);
            axpy(rc, &mf, &c);
        }
        let pos = self.rows.partition_point(|(q, _, _)| *q < p);
        self.rows.insert(pos, (p, r, c));
        true
    }

    /// The echelon basis vectors.
    pub fn basis(&self) -> Vec<Vector> {
        self.rows.iter().map(|(_, r, _)| r.clone()).collect()
    }
}

/// Solver for `M x = y` over `Q(i)`, caching the column echelon form of `M`.
#[derive(Clone, Debug)]
pub struct Preimage {
    span: Span,
    cols: usize,
}

impl Preimage {
    pub fn new(m: &SparseMatrix) -> Self {
        let mut span = Span::new(m.rows);
        for c in m.columns() {
            span.insert(&c);
        }
        Preimage { span, cols: m.cols }
    }

    /// Some `x` with `M x = y`, or `None` if `y` is not in the image.
    pub fn solve(&self, y: &[Q]) -> Option<Vector> {
        let x = self.span.solve(y)?;
        debug_assert_eq!(x.len(), self.cols);
        Some(x)
    }

    pub fn image(&self) -> &Span {
        &self.span
    }
}

/// Vectors of `candidates` extending `base` to a basis of
/// `span(base) + span(candidates)`, chosen greedily in order.
pub fn complement(base: &Span, candidates: &[Vector]) -> Vec<Vector> {
    let mut s = base.clone();
    candidates.iter().filter(|c| s.insert(c)).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Q {
        Q::from_ints(n, 0)
    }

    #[test]
    fn kernel_and_rank() {
        let m = Matrix::from_rows(vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]], 3);
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(is_zero_vector(&m.mul_vec(v)));
        }
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_rows(vec![vec![q(1), Q::i()], vec![q(2), q(3)]], 2);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        let s = Matrix::from_rows(vec![vec![q(1), q(2)], vec![q(2), q(4)]], 2);
        assert!(s.inverse().is_none());
    }

    #[test]
    fn span_solve_returns_coordinates() {
        let a = vec![q(1), q(1), q(0)];
        let b = vec![q(0), q(1), q(1)];
        let mut s = Span::new(3);
        assert!(s.insert(&a));
        assert!(s.insert(&b));
        assert!(!s.insert(&[q(1), q(2), q(1)]));
        let y = vec![q(2), q(5), q(3)];
        let x = s.solve(&y).unwrap();
        let mut back = zero_vector(3);
        axpy(&mut back, &x[0], &a);
        axpy(&mut back, &x[1], &b);
        assert_eq!(back, y);
        assert!(s.solve(&[q(0), q(0), q(1)]).is_none());
    }

    #[test]
    fn preimage() {
        let mut m = SparseMatrix::zeros(2, 3);
        m.set(0, 0, q(2));
        m.set(1, 1, Q::i());
        m.set(1, 2, q(1));
        let p = Preimage::new(&m);
        let y = vec![q(4), q(3)];
        let x = p.solve(&y).unwrap();
        assert_eq!(m.mul_vec(&x), y);
    }
}
