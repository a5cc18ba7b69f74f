//! Bounded double complexes over `Q(i)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::decomposition::{Shape, ShapeKind};
use crate::error::{Error, Result};
use crate::forms::{Generator, Sign};
use crate::linalg::{zero_vector, Matrix, SparseMatrix, Vector};
use crate::scalar::GaussianRational as Q;

pub type Bidegree = (i32, i32);

/// Identifier attached to a basis element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// A synthetic name; conjugation toggles a trailing `*`.
    Named(String),
    Form(Generator),
}

impl Label {
    pub fn conjugate(&self) -> (Label, Sign) {
        match self {
            Label::Named(s) => match s.strip_suffix('*') {
                Some(t) => (Label::Named(t.to_string()), 1),
                None => (Label::Named(format!("{s}*")), 1),
            },
            Label::Form(g) => {
                let (h, s) = g.conjugate();
                (Label::Form(h), s)
            }
        }
    }

    pub fn render(&self, unit: Option<&[Q]>) -> String {
        match self {
            Label::Named(s) => s.clone(),
            Label::Form(g) => g.render(unit),
        }
    }

    pub fn render_latex(&self, unit: Option<&[Q]>) -> String {
        match self {
            Label::Named(s) => s.clone(),
            Label::Form(g) => g.render_latex(unit),
        }
    }

    pub fn as_generator(&self) -> Option<&Generator> {
        match self {
            Label::Form(g) => Some(g),
            Label::Named(_) => None,
        }
    }
}

/// A homogeneous element: coefficients in the basis at `bidegree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainElement {
    pub bidegree: Bidegree,
    pub coeffs: Vector,
}

impl CochainElement {
    pub fn zero(b: &Bicomplex, bidegree: Bidegree) -> Self {
        CochainElement {
            bidegree,
            coeffs: zero_vector(b.dim(bidegree)),
        }
    }

    pub fn basis(b: &Bicomplex, bidegree: Bidegree, i: usize) -> Self {
        let mut e = Self::zero(b, bidegree);
        e.coeffs[i] = Q::one();
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Q::is_zero)
    }
}

/// Which composition identity failed, or a shape problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    DelDel,
    DelbarDelbar,
    Anticommute,
    MatrixShape,
    LabelCount,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub bidegree: Bidegree,
}

/// A bounded bigraded vector space with `∂` of bidegree (1,0) and `∂̄` of
/// bidegree (0,1), stored as sparse matrices keyed by source bidegree.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Bicomplex {
    cells: BTreeMap<Bidegree, Vec<Label>>,
    del: BTreeMap<Bidegree, SparseMatrix>,
    delbar: BTreeMap<Bidegree, SparseMatrix>,
    /// Coefficients `c` of `T = exp(c·z)`, used only for rendering labels.
    pub unit: Option<Vec<Q>>,
}

impl Bicomplex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a cell; existing basis at that bidegree is replaced.
    pub fn set_cell(&mut self, bd: Bidegree, labels: Vec<Label>) {
        if labels.is_empty() {
            self.cells.remove(&bd);
        } else {
            self.cells.insert(bd, labels);
        }
    }

    pub fn set_del(&mut self, bd: Bidegree, m: SparseMatrix) {
        if m.is_zero() && m.rows == self.dim((bd.0 + 1, bd.1)) && m.cols == self.dim(bd) {
            self.del.remove(&bd);
        } else {
            self.del.insert(bd, m);
        }
    }

    pub fn set_delbar(&mut self, bd: Bidegree, m: SparseMatrix) {
        if m.is_zero() && m.rows == self.dim((bd.0, bd.1 + 1)) && m.cols == self.dim(bd) {
            self.delbar.remove(&bd);
        } else {
            self.delbar.insert(bd, m);
        }
    }

    pub fn dim(&self, bd: Bidegree) -> usize {
        self.cells.get(&bd).map_or(0, Vec::len)
    }

    pub fn labels(&self, bd: Bidegree) -> &[Label] {
        self.cells.get(&bd).map_or(&[], Vec::as_slice)
    }

    /// Nonzero bidegrees in increasing order.
    pub fn bidegrees(&self) -> impl Iterator<Item = Bidegree> + '_ {
        self.cells.keys().copied()
    }

    pub fn total_dim(&self) -> usize {
        self.cells.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// `(pmin, pmax, qmin, qmax)` of the nonzero cells.
    pub fn bounding_box(&self) -> Option<(i32, i32, i32, i32)> {
        bounding_box(self.cells.keys().copied())
    }

    /// Total degrees with a nonzero component.
    pub fn total_degrees(&self) -> BTreeSet<i32> {
        self.cells.keys().map(|(p, q)| p + q).collect()
    }

    /// `∂: A^{p,q} → A^{p+1,q}`.
    pub fn del_at(&self, bd: Bidegree) -> SparseMatrix {
        self.del
            .get(&bd)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zeros(self.dim((bd.0 + 1, bd.1)), self.dim(bd)))
    }

    /// `∂̄: A^{p,q} → A^{p,q+1}`.
    pub fn delbar_at(&self, bd: Bidegree) -> SparseMatrix {
        self.delbar
            .get(&bd)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zeros(self.dim((bd.0, bd.1 + 1)), self.dim(bd)))
    }

    /// `∂∂̄: A^{p,q} → A^{p+1,q+1}`.
    pub fn deldelbar_at(&self, bd: Bidegree) -> SparseMatrix {
        self.del_at((bd.0, bd.1 + 1)).mul(&self.delbar_at(bd))
    }

    pub fn apply_del(&self, x: &CochainElement) -> CochainElement {
        CochainElement {
            bidegree: (x.bidegree.0 + 1, x.bidegree.1),
            coeffs: self.del_at(x.bidegree).mul_vec(&x.coeffs),
        }
    }

    pub fn apply_delbar(&self, x: &CochainElement) -> CochainElement {
        CochainElement {
            bidegree: (x.bidegree.0, x.bidegree.1 + 1),
            coeffs: self.delbar_at(x.bidegree).mul_vec(&x.coeffs),
        }
    }

    pub fn has_zero_differentials(&self) -> bool {
        self.del.values().all(SparseMatrix::is_zero) && self.delbar.values().all(SparseMatrix::is_zero)
    }

    /// Every failure of `∂∂ = 0`, `∂̄∂̄ = 0`, `∂∂̄ + ∂̄∂ = 0`, plus matrix
    /// shape mismatches, keyed by source bidegree.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut shape_ok = true;
        for (bd, m) in &self.del {
            if m.cols != self.dim(*bd) || m.rows != self.dim((bd.0 + 1, bd.1)) {
                out.push(Violation {
                    kind: ViolationKind::MatrixShape,
                    bidegree: *bd,
                });
                shape_ok = false;
            }
        }
        for (bd, m) in &self.delbar {
            if m.cols != self.dim(*bd) || m.rows != self.dim((bd.0, bd.1 + 1)) {
                out.push(Violation {
                    kind: ViolationKind::MatrixShape,
                    bidegree: *bd,
                });
                shape_ok = false;
            }
        }
        if !shape_ok {
            return out;
        }
        let sources: BTreeSet<Bidegree> = self.del.keys().chain(self.delbar.keys()).copied().collect();
        for bd in sources {
            let (p, q) = bd;
            if !self.del_at((p + 1, q)).mul(&self.del_at(bd)).is_zero() {
                out.push(Violation {
                    kind: ViolationKind::DelDel,
                    bidegree: bd,
                });
            }
            if !self.delbar_at((p, q + 1)).mul(&self.delbar_at(bd)).is_zero() {
                out.push(Violation {
                    kind: ViolationKind::DelbarDelbar,
                    bidegree: bd,
                });
            }
            let a = self.del_at((p, q + 1)).mul(&self.delbar_at(bd));
            let b = self.delbar_at((p + 1, q)).mul(&self.del_at(bd));
            if !a.add(&b).is_zero() {
                out.push(Violation {
                    kind: ViolationKind::Anticommute,
                    bidegree: bd,
                });
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Complex conjugate: `(p,q) ↦ (q,p)`, `∂ ↔ ∂̄`, entries and labels
    /// conjugated. A label whose conjugate carries a sign gets its basis
    /// vector rescaled so labels stay canonical.
    pub fn conjugate(&self) -> Bicomplex {
        let mut out = Bicomplex {
            unit: self.unit.clone(),
            ..Default::default()
        };
        let mut signs: BTreeMap<Bidegree, Vec<Sign>> = BTreeMap::new();
        for (&(p, q), labels) in &self.cells {
            let (ls, ss): (Vec<_>, Vec<_>) = labels.iter().map(Label::conjugate).unzip();
            out.cells.insert((q, p), ls);
            signs.insert((q, p), ss);
        }
        let resign = |m: &SparseMatrix, src: Bidegree, dst: Bidegree| {
            let mut r = SparseMatrix::zeros(m.rows, m.cols);
            for (i, j, v) in m.entries() {
                let s = signs[&dst][i] * signs[&src][j];
                let v = v.conj();
                r.set(i, j, if s < 0 { -v } else { v });
            }
            r
        };
        for (&(p, q), m) in &self.delbar {
            out.del.insert((q, p), resign(m, (q, p), (q + 1, p)));
        }
        for (&(p, q), m) in &self.del {
            out.delbar.insert((q, p), resign(m, (q, p), (q, p + 1)));
        }
        out
    }

    /// Block-diagonal sum; `b`'s basis follows `a`'s in each cell.
    pub fn direct_sum(&self, b: &Bicomplex) -> Bicomplex {
        let mut out = Bicomplex {
            unit: self.unit.clone().or_else(|| b.unit.clone()),
            ..Default::default()
        };
        let keys: BTreeSet<Bidegree> = self.cells.keys().chain(b.cells.keys()).copied().collect();
        for bd in &keys {
            let mut ls = self.labels(*bd).to_vec();
            ls.extend(b.labels(*bd).iter().cloned());
            out.cells.insert(*bd, ls);
        }
        let block = |ma: SparseMatrix, mb: SparseMatrix| {
            let mut m = SparseMatrix::zeros(ma.rows + mb.rows, ma.cols + mb.cols);
            for (i, j, v) in ma.entries() {
                m.set(i, j, v.clone());
            }
            for (i, j, v) in mb.entries() {
                m.set(ma.rows + i, ma.cols + j, v.clone());
            }
            m
        };
        for bd in keys {
            let d = block(self.del_at(bd), b.del_at(bd));
            if !d.is_zero() {
                out.del.insert(bd, d);
            }
            let d = block(self.delbar_at(bd), b.delbar_at(bd));
            if !d.is_zero() {
                out.delbar.insert(bd, d);
            }
        }
        out
    }

    /// Basis in each cell sorted by label, matrices permuted accordingly.
    pub fn canonicalized(&self) -> Bicomplex {
        let mut perm: BTreeMap<Bidegree, Vec<usize>> = BTreeMap::new();
        let mut out = Bicomplex {
            unit: self.unit.clone(),
            ..Default::default()
        };
        for (bd, labels) in &self.cells {
            let mut order: Vec<usize> = (0..labels.len()).collect();
            order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
            let mut new_pos = vec![0; labels.len()];
            for (np, &old) in order.iter().enumerate() {
                new_pos[old] = np;
            }
            out.cells.insert(*bd, order.iter().map(|&i| labels[i].clone()).collect());
            perm.insert(*bd, new_pos);
        }
        let p = |bd: Bidegree| perm.get(&bd).cloned().unwrap_or_default();
        for (&bd, m) in &self.del {
            out.del.insert(bd, m.permuted(&p((bd.0 + 1, bd.1)), &p(bd)));
        }
        for (&bd, m) in &self.delbar {
            out.delbar.insert(bd, m.permuted(&p((bd.0, bd.1 + 1)), &p(bd)));
        }
        out
    }

    /// The same complex in new bases: column `j` of `g[bd]` gives the
    /// `j`-th new basis vector at `bd` in old coordinates. Missing cells keep
    /// their basis; new basis elements are named `v{p},{q}.{j}`.
    pub fn change_basis(&self, g: &BTreeMap<Bidegree, Matrix>) -> Result<Bicomplex> {
        let mut inv = BTreeMap::new();
        for (&bd, m) in g {
            if m.rows != self.dim(bd) || m.cols != m.rows {
                return Err(Error::InvalidBicomplex(format!("basis change at {bd:?} has the wrong size")));
            }
            let i = m
                .inverse()
                .ok_or_else(|| Error::InvalidBicomplex(format!("basis change at {bd:?} is singular")))?;
            inv.insert(bd, i);
        }
        let mut out = Bicomplex {
            unit: self.unit.clone(),
            ..Default::default()
        };
        for (&bd, labels) in &self.cells {
            let ls = if g.contains_key(&bd) {
                (0..labels.len()).map(|j| Label::Named(format!("v{},{}.{j}", bd.0, bd.1))).collect()
            } else {
                labels.clone()
            };
            out.cells.insert(bd, ls);
        }
        let conj = |m: &SparseMatrix, src: Bidegree, tgt: Bidegree| {
            let mut d = m.to_dense();
            if let Some(gs) = g.get(&src) {
                d = d.mul(gs);
            }
            if let Some(gi) = inv.get(&tgt) {
                d = gi.mul(&d);
            }
            SparseMatrix::from_dense(&d)
        };
        for (&bd, m) in &self.del {
            out.del.insert(bd, conj(m, bd, (bd.0 + 1, bd.1)));
        }
        for (&bd, m) in &self.delbar {
            out.delbar.insert(bd, conj(m, bd, (bd.0, bd.1 + 1)));
        }
        Ok(out)
    }

    /// Labels per bidegree as sets.
    pub fn label_sets(&self) -> BTreeMap<Bidegree, BTreeSet<Label>> {
        self.cells
            .iter()
            .map(|(bd, ls)| (*bd, ls.iter().cloned().collect()))
            .collect()
    }

    /// Position of a label in its cell.
    pub fn position(&self, bd: Bidegree, label: &Label) -> Option<usize> {
        self.labels(bd).iter().position(|l| l == label)
    }

    /// Total complex `d = ∂ + ∂̄: A^k → A^{k+1}`, with `A^k` ordered by
    /// increasing `p`.
    pub fn total_differential(&self, k: i32) -> SparseMatrix {
        let src = self.total_layout(k);
        let dst = self.total_layout(k + 1);
        let rows = dst.iter().map(|(_, _, n)| n).sum();
        let cols = src.iter().map(|(_, _, n)| n).sum();
        let offset = |layout: &[(Bidegree, usize, usize)], bd: Bidegree| {
            layout.iter().find(|(b, _, _)| *b == bd).map(|(_, o, _)| *o)
        };
        let mut m = SparseMatrix::zeros(rows, cols);
        for &(bd, co, _) in &src {
            for (target, mat) in [((bd.0 + 1, bd.1), self.del_at(bd)), ((bd.0, bd.1 + 1), self.delbar_at(bd))] {
                if let Some(ro) = offset(&dst, target) {
                    for (i, j, v) in mat.entries() {
                        m.add_entry(ro + i, co + j, v);
                    }
                }
            }
        }
        m
    }

    /// `(bidegree, offset, dim)` blocks of `A^k`.
    pub fn total_layout(&self, k: i32) -> Vec<(Bidegree, usize, usize)> {
        let mut off = 0;
        let mut out = Vec::new();
        for (&bd, ls) in &self.cells {
            if bd.0 + bd.1 == k {
                out.push((bd, off, ls.len()));
                off += ls.len();
            }
        }
        out
    }

    pub fn total_dim_in_degree(&self, k: i32) -> usize {
        self.total_layout(k).iter().map(|(_, _, n)| n).sum()
    }

    pub fn to_json(&self) -> BicomplexJson {
        let unit = self.unit.as_deref();
        let cells = self
            .cells
            .iter()
            .map(|(&(p, q), ls)| JsonCell {
                p,
                q,
                basis: ls.iter().map(|l| l.render(unit)).collect(),
            })
            .collect();
        let mats = |ms: &BTreeMap<Bidegree, SparseMatrix>| {
            ms.iter()
                .filter(|(_, m)| !m.is_zero())
                .map(|(&(p, q), m)| JsonMatrix {
                    p,
                    q,
                    entries: m.entries().map(|(i, j, v)| (i, j, v.clone())).collect(),
                })
                .collect()
        };
        BicomplexJson {
            cells,
            del: mats(&self.del),
            delbar: mats(&self.delbar),
        }
    }

    /// Build from the JSON schema; labels become `Label::Named`. Fails on
    /// shape mismatches or broken identities.
    pub fn from_json(j: &BicomplexJson) -> Result<Bicomplex> {
        let mut b = Bicomplex::new();
        for c in &j.cells {
            if b.cells.contains_key(&(c.p, c.q)) {
                return Err(Error::InvalidBicomplex(format!("cell ({},{}) listed twice", c.p, c.q)));
            }
            b.set_cell((c.p, c.q), c.basis.iter().cloned().map(Label::Named).collect());
        }
        for (list, is_del) in [(&j.del, true), (&j.delbar, false)] {
            for m in list {
                let src = (m.p, m.q);
                let dst = if is_del { (m.p + 1, m.q) } else { (m.p, m.q + 1) };
                let mut s = SparseMatrix::zeros(b.dim(dst), b.dim(src));
                for (i, jj, v) in &m.entries {
                    if *i >= s.rows || *jj >= s.cols {
                        return Err(Error::InvalidBicomplex(format!(
                            "entry ({i},{jj}) outside the {}x{} matrix at ({},{})",
                            s.rows, s.cols, m.p, m.q
                        )));
                    }
                    s.add_entry(*i, *jj, v);
                }
                if is_del {
                    b.del.insert(src, s);
                } else {
                    b.delbar.insert(src, s);
                }
            }
        }
        let v = b.validate();
        if let Some(first) = v.first() {
            return Err(Error::InvalidBicomplex(format!(
                "{:?} fails at ({},{})",
                first.kind, first.bidegree.0, first.bidegree.1
            )));
        }
        Ok(b)
    }

    /// Every `(bidegree, index)` pair, in bidegree order.
    pub fn basis_positions(&self) -> Vec<(Bidegree, usize)> {
        self.cells
            .iter()
            .flat_map(|(bd, ls)| (0..ls.len()).map(move |i| (*bd, i)))
            .collect()
    }
}

impl fmt::Display for Bicomplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = self.unit.as_deref();
        for (bd, ls) in &self.cells {
            let names: Vec<String> = ls.iter().map(|l| l.render(unit)).collect();
            writeln!(f, "({},{}): {}", bd.0, bd.1, names.join(", "))?;
        }
        Ok(())
    }
}

pub fn bounding_box(cells: impl IntoIterator<Item = Bidegree>) -> Option<(i32, i32, i32, i32)> {
    let mut it = cells.into_iter();
    let first = it.next()?;
    let mut bb = (first.0, first.0, first.1, first.1);
    for (p, q) in it {
        bb.0 = bb.0.min(p);
        bb.1 = bb.1.max(p);
        bb.2 = bb.2.min(q);
        bb.3 = bb.3.max(q);
    }
    Some(bb)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonCell {
    pub p: i32,
    pub q: i32,
    pub basis: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonMatrix {
    pub p: i32,
    pub q: i32,
    pub entries: Vec<(usize, usize, Q)>,
}

/// Raw bicomplex interchange format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BicomplexJson {
    pub cells: Vec<JsonCell>,
    #[serde(default)]
    pub del: Vec<JsonMatrix>,
    #[serde(default)]
    pub delbar: Vec<JsonMatrix>,
}

/// The standard complex `C(S)` with one-dimensional cells.
pub fn shape_complex(s: &Shape) -> Result<Bicomplex> {
    s.check()?;
    let mut b = Bicomplex::new();
    for &(p, q) in s.cells() {
        b.set_cell((p, q), vec![Label::Named(format!("e{p},{q}"))]);
    }
    let one = Q::one();
    let arrow = |v: &Q| {
        let mut m = SparseMatrix::zeros(1, 1);
        m.set(0, 0, v.clone());
        m
    };
    match s.kind() {
        ShapeKind::Square => {
            let (p, q) = s.anchor();
            b.del.insert((p, q), arrow(&one));
            b.delbar.insert((p, q), arrow(&one));
            b.delbar.insert((p + 1, q), arrow(&one));
            b.del.insert((p, q + 1), arrow(&-&one));
        }
        ShapeKind::Zigzag => {
            for &(p, q) in s.cells() {
                if s.cells().contains(&(p + 1, q)) {
                    b.del.insert((p, q), arrow(&one));
                }
                if s.cells().contains(&(p, q + 1)) {
                    b.delbar.insert((p, q), arrow(&one));
                }
            }
        }
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3(second: i64) -> Bicomplex {
        let mut b = Bicomplex::new();
        for p in 0..3 {
            b.set_cell((p, 0), vec![Label::Named(format!("x{p}"))]);
        }
        let mut m = SparseMatrix::zeros(1, 1);
        m.set(0, 0, Q::one());
        b.set_del((0, 0), m.clone());
        m.set(0, 0, Q::from_ints(second, 0));
        b.set_del((1, 0), m);
        b
    }

    #[test]
    fn detects_single_deldel_failure() {
        let v = chain3(1).validate();
        assert_eq!(
            v,
            vec![Violation {
                kind: ViolationKind::DelDel,
                bidegree: (0, 0)
            }]
        );
        assert!(chain3(0).validate().is_empty());
        assert!(Bicomplex::new().validate().is_empty());
    }

    #[test]
    fn square_shape_anticommutes() {
        let s = Shape::square((0, 0));
        let b = shape_complex(&s).unwrap();
        assert!(b.is_valid());
        assert_eq!(b.total_dim(), 4);
        assert_eq!(b.del_at((0, 1)).get(0, 0), Q::from_ints(-1, 0));
    }

    #[test]
    fn horizontal_line_has_one_arrow() {
        let b = shape_complex(&Shape::zigzag([(1, 1), (2, 1)]).unwrap()).unwrap();
        assert_eq!(b.del_at((1, 1)).get(0, 0), Q::one());
        assert!(b.delbar_at((1, 1)).is_zero());
    }

    #[test]
    fn conjugate_is_involution() {
        let mut b = shape_complex(&Shape::square((0, 0))).unwrap();
        let mut m = SparseMatrix::zeros(1, 1);
        m.set(0, 0, Q::from_ints(2, 3));
        b.set_cell((5, 5), vec![Label::Named("y".into())]);
        b.set_cell((6, 5), vec![Label::Named("z".into())]);
        b.set_del((5, 5), m);
        assert_eq!(b.conjugate().conjugate(), b);
        assert!(b.conjugate().is_valid());
    }

    #[test]
    fn json_round_trip() {
        let b = shape_complex(&Shape::square((1, 2))).unwrap();
        let j = b.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back: BicomplexJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Bicomplex::from_json(&back).unwrap(), b);
    }

    #[test]
    fn json_rejects_bad_complex() {
        let j = chain3(1).to_json();
        assert!(Bicomplex::from_json(&j).is_err());
    }

    #[test]
    fn direct_sum_dims_add() {
        let a = shape_complex(&Shape::square((0, 0))).unwrap();
        let s = a.direct_sum(&a);
        for bd in a.bidegrees() {
            assert_eq!(s.dim(bd), 2 * a.dim(bd));
        }
        assert!(s.is_valid());
        assert_eq!(a.direct_sum(&Bicomplex::new()), a);
    }
}
