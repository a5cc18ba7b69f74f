//! Decomposition of bounded double complexes into squares and zigzags.
//!
//! Squares are counted by the rank of `∂∂̄`. What is left is read off two
//! subquotients per cell: a source space `ker ∂∂̄ / (ker ∂ ∩ ker ∂̄ + im ∂ +
//! im ∂̄)` and a target space `(im ∂ + im ∂̄) ∩ ker ∂ ∩ ker ∂̄ / im ∂∂̄`.
//! Between adjacent antidiagonals these form a representation of an
//! alternating type-A quiver, whose interval summands are exactly the
//! zigzags of length at least two. Interval multiplicities come from the
//! ranks of the limit-to-colimit maps of its restrictions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::bicomplex::{bounding_box, Bicomplex, Bidegree};
use crate::cohomology::{dimension, CellSpaces, Flavor};
use crate::error::{Error, Result};
use crate::linalg::{complement, is_zero_vector, zero_vector, Matrix, Span, Vector};
use crate::scalar::GaussianRational as Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeKind {
    Square,
    Zigzag,
}

/// The support of an indecomposable bounded double complex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape {
    kind: ShapeKind,
    cells: BTreeSet<Bidegree>,
}

impl Shape {
    /// Square with bottom-left corner `bl`.
    pub fn square(bl: Bidegree) -> Shape {
        let (p, q) = bl;
        Shape {
            kind: ShapeKind::Square,
            cells: [(p, q), (p + 1, q), (p, q + 1), (p + 1, q + 1)].into_iter().collect(),
        }
    }

    pub fn dot(bd: Bidegree) -> Shape {
        Shape {
            kind: ShapeKind::Zigzag,
            cells: [bd].into_iter().collect(),
        }
    }

    /// `S_h^{p,q} = {(p,q), (p+1,q)}`.
    pub fn h_line(bd: Bidegree) -> Shape {
        Shape {
            kind: ShapeKind::Zigzag,
            cells: [bd, (bd.0 + 1, bd.1)].into_iter().collect(),
        }
    }

    /// `S_v^{p,q} = {(p,q), (p,q+1)}`.
    pub fn v_line(bd: Bidegree) -> Shape {
        Shape {
            kind: ShapeKind::Zigzag,
            cells: [bd, (bd.0, bd.1 + 1)].into_iter().collect(),
        }
    }

    pub fn zigzag(cells: impl IntoIterator<Item = Bidegree>) -> Result<Shape> {
        let s = Shape {
            kind: ShapeKind::Zigzag,
            cells: cells.into_iter().collect(),
        };
        s.check()?;
        Ok(s)
    }

    pub fn kind(&self) -> ShapeKind {
        self.kind
    }

    pub fn cells(&self) -> &BTreeSet<Bidegree> {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn is_zigzag(&self) -> bool {
        self.kind == ShapeKind::Zigzag
    }

    pub fn is_square(&self) -> bool {
        self.kind == ShapeKind::Square
    }

    pub fn is_dot(&self) -> bool {
        self.is_zigzag() && self.cells.len() == 1
    }

    /// Lexicographically smallest cell (bottom-left corner for squares).
    pub fn anchor(&self) -> Bidegree {
        *self.cells.iter().next().expect("nonempty shape")
    }

    pub fn contains(&self, bd: Bidegree) -> bool {
        self.cells.contains(&bd)
    }

    pub fn check(&self) -> Result<()> {
        if self.cells.is_empty() {
            return Err(Error::MalformedShape("empty cell set".into()));
        }
        match self.kind {
            ShapeKind::Square => {
                if *self != Shape::square(self.anchor()) {
                    return Err(Error::MalformedShape(format!("{:?} is not a square", self.cells)));
                }
            }
            ShapeKind::Zigzag => {
                let degs: BTreeSet<i32> = self.cells.iter().map(|(p, q)| p + q).collect();
                let lo = *degs.iter().next().unwrap();
                if degs.iter().any(|d| *d > lo + 1) {
                    return Err(Error::MalformedShape(format!("{:?} spans more than two antidiagonals", self.cells)));
                }
                // staircase order: p ascending, q descending
                let mut ordered: Vec<Bidegree> = self.cells.iter().copied().collect();
                ordered.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
                for w in ordered.windows(2) {
                    let (a, b) = (w[0], w[1]);
                    let vertical = a.0 == b.0 && a.1 == b.1 + 1;
                    let horizontal = b.0 == a.0 + 1 && a.1 == b.1;
                    if !(vertical || horizontal) {
                        return Err(Error::MalformedShape(format!("{:?} is not staircase-connected", self.cells)));
                    }
                }
            }
        }
        Ok(())
    }

    fn kind_rank(&self) -> u8 {
        match (self.kind, self.cells.len()) {
            (ShapeKind::Zigzag, 1) => 0,
            (ShapeKind::Zigzag, 2) if self.is_h_line() => 1,
            (ShapeKind::Zigzag, 2) => 2,
            (ShapeKind::Zigzag, _) => 3,
            (ShapeKind::Square, _) => 4,
        }
    }

    fn is_h_line(&self) -> bool {
        let a = self.anchor();
        self.cells.len() == 2 && self.cells.contains(&(a.0 + 1, a.1))
    }

    /// The JSON tag: `D`, `Sh`, `Sv`, `square` or `zigzag`.
    pub fn tag(&self) -> &'static str {
        match self.kind_rank() {
            0 => "D",
            1 => "Sh",
            2 => "Sv",
            3 => "zigzag",
            _ => "square",
        }
    }

    fn sort_key(&self) -> (i32, i32, u8, Vec<Bidegree>) {
        let min_p = self.cells.iter().map(|c| c.0).min().unwrap();
        let min_q = self.cells.iter().map(|c| c.1).min().unwrap();
        (min_p, min_q, self.kind_rank(), self.cells.iter().copied().collect())
    }

    /// Whether `bd` counts towards `flavor` cohomology for this shape.
    pub fn contributes(&self, flavor: Flavor, bd: Bidegree) -> bool {
        if self.is_square() || !self.contains(bd) {
            return false;
        }
        let (p, q) = bd;
        let absent = |c: Bidegree| !self.contains(c);
        match flavor {
            Flavor::ConjDolbeault => absent((p - 1, q)) && absent((p + 1, q)),
            Flavor::Dolbeault => absent((p, q - 1)) && absent((p, q + 1)),
            Flavor::BottChern => absent((p + 1, q)) && absent((p, q + 1)),
            Flavor::Aeppli => absent((p - 1, q)) && absent((p, q - 1)),
            Flavor::DeRham => false,
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, q) = self.anchor();
        match self.tag() {
            "D" => write!(f, "D^{{{p},{q}}}"),
            "Sh" => write!(f, "S_h^{{{p},{q}}}"),
            "Sv" => write!(f, "S_v^{{{p},{q}}}"),
            "square" => write!(f, "Sq^{{{p},{q}}}"),
            _ => {
                let cells: Vec<String> = self.cells.iter().map(|(a, b)| format!("({a},{b})")).collect();
                write!(f, "Z{{{}}}", cells.join(""))
            }
        }
    }
}

/// A multiset of shapes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Decomposition {
    entries: Vec<(Shape, usize)>,
}

impl Decomposition {
    /// Aggregates repeated shapes, drops zero multiplicities and sorts.
    pub fn from_counts(items: impl IntoIterator<Item = (Shape, usize)>) -> Self {
        let mut m: BTreeMap<Shape, usize> = BTreeMap::new();
        for (s, k) in items {
            if k > 0 {
                *m.entry(s).or_default() += k;
            }
        }
        let mut entries: Vec<(Shape, usize)> = m.into_iter().collect();
        entries.sort_by_key(|(s, _)| s.sort_key());
        Decomposition { entries }
    }

    pub fn entries(&self) -> &[(Shape, usize)] {
        &self.entries
    }

    pub fn multiplicity(&self, s: &Shape) -> usize {
        self.entries.iter().find(|(t, _)| t == s).map_or(0, |e| e.1)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total number of summands.
    pub fn count(&self) -> usize {
        self.entries.iter().map(|e| e.1).sum()
    }

    /// Multiplicity-weighted cell dimension at `bd`.
    pub fn dim(&self, bd: Bidegree) -> usize {
        self.entries.iter().filter(|(s, _)| s.contains(bd)).map(|(_, k)| k).sum()
    }

    pub fn cells(&self) -> BTreeSet<Bidegree> {
        self.entries.iter().flat_map(|(s, _)| s.cells.iter().copied()).collect()
    }

    pub fn has_squares(&self) -> bool {
        self.entries.iter().any(|(s, _)| s.is_square())
    }

    /// The direct sum of standard shape complexes.
    pub fn to_complex(&self) -> Result<Bicomplex> {
        let mut b = Bicomplex::new();
        for (s, k) in &self.entries {
            let c = crate::bicomplex::shape_complex(s)?;
            for _ in 0..*k {
                b = b.direct_sum(&c);
            }
        }
        Ok(b)
    }

    pub fn to_json(&self) -> Vec<ShapeJson> {
        self.entries
            .iter()
            .map(|(s, k)| ShapeJson {
                shape: s.tag().to_string(),
                anchor: s.anchor(),
                cells: s.cells.iter().copied().collect(),
                mult: *k,
            })
            .collect()
    }

    pub fn from_json(items: &[ShapeJson]) -> Result<Self> {
        let mut out = Vec::new();
        for it in items {
            let s = if it.shape == "square" {
                Shape {
                    kind: ShapeKind::Square,
                    cells: it.cells.iter().copied().collect(),
                }
            } else {
                Shape {
                    kind: ShapeKind::Zigzag,
                    cells: it.cells.iter().copied().collect(),
                }
            };
            s.check()?;
            if s.tag() != it.shape || s.anchor() != it.anchor {
                return Err(Error::MalformedShape(format!("tag/anchor mismatch for {:?}", it.cells)));
            }
            out.push((s, it.mult));
        }
        Ok(Decomposition::from_counts(out))
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(s, k)| if *k == 1 { s.to_string() } else { format!("({s})^{k}") })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeJson {
    pub shape: String,
    pub anchor: Bidegree,
    pub cells: Vec<Bidegree>,
    pub mult: usize,
}

/// Lemma-style counting of a flavor from the multiset.
pub fn cohomology_counts(d: &Decomposition, flavor: Flavor, p: i32, q: i32) -> usize {
    d.entries
        .iter()
        .filter(|(s, _)| s.contributes(flavor, (p, q)))
        .map(|(_, k)| k)
        .sum()
}

/// A subquotient `U/W` of a cell, by a chosen basis of a complement.
struct SubQuotient {
    basis: Vec<Vector>,
    /// Span of `basis` followed by the generators of `W`.
    solver: Span,
}

impl SubQuotient {
    fn new(n: usize, u: &[Vector], w: &[Vector]) -> Self {
        let wspan = Span::from_vectors(n, w);
        let basis = complement(&wspan, u);
        let mut solver = Span::new(n);
        for v in basis.iter().chain(w.iter()) {
            solver.insert(v);
        }
        SubQuotient { basis, solver }
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn coords(&self, v: &[Q]) -> Option<Vector> {
        let c = self.solver.solve(v)?;
        Some(c[..self.basis.len()].to_vec())
    }
}

fn sources(b: &Bicomplex, bd: Bidegree) -> SubQuotient {
    let c = CellSpaces::new(b, bd);
    let u = c.ker_ddbar();
    let mut w = c.ker_both();
    w.extend(c.im_sum());
    SubQuotient::new(c.dim(), &u, &w)
}

fn targets(b: &Bicomplex, bd: Bidegree) -> SubQuotient {
    let c = CellSpaces::new(b, bd);
    let n = c.dim();
    let gens = c.im_sum();
    let g = Matrix::from_columns(&gens, n);
    // elements Σ x_i g_i with ∂ and ∂̄ both zero
    let d = b.del_at(bd).to_dense();
    let e = b.delbar_at(bd).to_dense();
    let closed: Vec<Vector> = if gens.is_empty() {
        Vec::new()
    } else {
        let mut cond = d.mul(&g);
        cond = cond.vstack(&e.mul(&g));
        cond.kernel().iter().map(|x| g.mul_vec(x)).collect()
    };
    SubQuotient::new(n, &closed, &c.im_ddbar())
}

/// Representation of an `A_L` quiver: `dims[v]` and arrows `(from, to, M)`
/// between consecutive vertices.
struct Zigzag {
    dims: Vec<usize>,
    arrows: Vec<(usize, usize, Matrix)>,
}

impl Zigzag {
    /// Number of interval summands whose support contains `[a, b]`.
    fn full_count(&self, a: usize, b: usize) -> usize {
        if (a..=b).any(|v| self.dims[v] == 0) {
            return 0;
        }
        let offsets: Vec<usize> = (a..=b)
            .scan(0, |acc, v| {
                let o = *acc;
                *acc += self.dims[v];
                Some(o)
            })
            .collect();
        let total: usize = (a..=b).map(|v| self.dims[v]).sum();
        let off = |v: usize| offsets[v - a];
        let inside: Vec<&(usize, usize, Matrix)> = self
            .arrows
            .iter()
            .filter(|(f, t, _)| (a..=b).contains(f) && (a..=b).contains(t))
            .collect();
        // limit: compatible families
        let mut cons_rows: Vec<Vector> = Vec::new();
        for (f, t, m) in &inside {
            for i in 0..m.rows {
                let mut row = zero_vector(total);
                for j in 0..m.cols {
                    row[off(*f) + j] = m.get(i, j).clone();
                }
                row[off(*t) + i] -= &Q::one();
                cons_rows.push(row);
            }
        }
        let lim = if cons_rows.is_empty() {
            Matrix::identity(total).columns()
        } else {
            Matrix::from_rows(cons_rows, total).kernel()
        };
        // colimit relations
        let mut rel = Span::new(total);
        for (f, t, m) in &inside {
            for j in 0..m.cols {
                let mut v = zero_vector(total);
                v[off(*f) + j] = Q::one();
                for i in 0..m.rows {
                    v[off(*t) + i] -= m.get(i, j);
                }
                rel.insert(&v);
            }
        }
        let base = rel.dim();
        for l in &lim {
            let mut v = zero_vector(total);
            let n = self.dims[a];
            v[..n].clone_from_slice(&l[..n]);
            rel.insert(&v);
        }
        rel.dim() - base
    }

    /// Multiplicity of every interval `[a, b]`.
    fn intervals(&self) -> BTreeMap<(usize, usize), usize> {
        let len = self.dims.len();
        let mut c = vec![vec![0usize; len]; len];
        for (a, row) in c.iter_mut().enumerate() {
            for (b, x) in row.iter_mut().enumerate().skip(a) {
                *x = self.full_count(a, b);
            }
        }
        let get = |a: isize, b: usize| -> isize {
            if a < 0 || b >= len {
                0
            } else {
                c[a as usize][b] as isize
            }
        };
        let mut out = BTreeMap::new();
        for a in 0..len {
            for b in a..len {
                let m = get(a as isize, b) - get(a as isize - 1, b) - get(a as isize, b + 1) + get(a as isize - 1, b + 1);
                if m != 0 {
                    out.insert((a, b), m.max(0) as usize);
                    if m < 0 {
                        out.insert((a, b), usize::MAX);
                    }
                }
            }
        }
        out
    }
}

/// Decompose a valid bounded bicomplex into squares and zigzags.
pub fn decompose(b: &Bicomplex) -> Result<Decomposition> {
    let Some((p0, p1, q0, q1)) = b.bounding_box() else {
        return Ok(Decomposition::default());
    };
    let mut items: Vec<(Shape, usize)> = Vec::new();
    let mut src: BTreeMap<Bidegree, SubQuotient> = BTreeMap::new();
    let mut tgt: BTreeMap<Bidegree, SubQuotient> = BTreeMap::new();
    for bd in b.bidegrees().collect::<Vec<_>>() {
        let sq = b.deldelbar_at(bd).rank();
        if sq > 0 {
            items.push((Shape::square(bd), sq));
        }
        let t = targets(b, bd);
        let bc = dimension(b, Flavor::BottChern, bd);
        if bc < t.dim() {
            return Err(Error::DecompositionFailure(format!("negative dot count at {bd:?}")));
        }
        if bc > t.dim() {
            items.push((Shape::dot(bd), bc - t.dim()));
        }
        src.insert(bd, sources(b, bd));
        tgt.insert(bd, t);
    }
    let dim_of = |m: &BTreeMap<Bidegree, SubQuotient>, bd: Bidegree| m.get(&bd).map_or(0, SubQuotient::dim);
    for k in (p0 + q0)..=(p1 + q1) {
        // vertices: T_p at (p, k+1-p), S_p at (p, k-p), interleaved by p
        let mut cells: Vec<Bidegree> = Vec::new();
        let mut dims: Vec<usize> = Vec::new();
        for p in p0..=p1 + 1 {
            let t = (p, k + 1 - p);
            let s = (p, k - p);
            cells.push(t);
            dims.push(dim_of(&tgt, t));
            cells.push(s);
            dims.push(dim_of(&src, s));
        }
        if dims.iter().skip(1).step_by(2).all(|d| *d == 0) {
            continue;
        }
        let mut arrows = Vec::new();
        for (i, &s) in cells.iter().enumerate().skip(1).step_by(2) {
            let Some(sq) = src.get(&s) else { continue };
            if sq.dim() == 0 {
                continue;
            }
            for (to, dst, mat) in [(i - 1, (s.0, s.1 + 1), b.delbar_at(s)), (i + 1, (s.0 + 1, s.1), b.del_at(s))] {
                if to >= cells.len() {
                    continue;
                }
                let tq = tgt.get(&dst);
                let tdim = tq.map_or(0, SubQuotient::dim);
                let mut m = Matrix::zeros(tdim, sq.dim());
                for (j, v) in sq.basis.iter().enumerate() {
                    let image = mat.mul_vec(v);
                    if tdim == 0 {
                        if !is_zero_vector(&image) && tq.is_none() {
                            return Err(Error::DecompositionFailure(format!("arrow from {s:?} leaves the complex")));
                        }
                        continue;
                    }
                    let coords = tq
                        .unwrap()
                        .coords(&image)
                        .ok_or_else(|| Error::DecompositionFailure(format!("image of {s:?} not in target space at {dst:?}")))?;
                    for (r, x) in coords.into_iter().enumerate() {
                        m.set(r, j, x);
                    }
                }
                arrows.push((i, to, m));
            }
        }
        let z = Zigzag { dims, arrows };
        for ((a, e), mult) in z.intervals() {
            if mult == usize::MAX || a == e {
                return Err(Error::DecompositionFailure(format!(
                    "unexpected interval {:?}..{:?} in degree {k}",
                    cells[a], cells[e]
                )));
            }
            let shape = Shape::zigzag(cells[a..=e].iter().copied())?;
            items.push((shape, mult));
        }
    }
    let d = Decomposition::from_counts(items);
    verify(b, &d)?;
    Ok(d)
}

fn verify(b: &Bicomplex, d: &Decomposition) -> Result<()> {
    let cells: BTreeSet<Bidegree> = d.cells().into_iter().chain(b.bidegrees()).collect();
    for &bd in &cells {
        if d.dim(bd) != b.dim(bd) {
            return Err(Error::DecompositionFailure(format!(
                "dimension at {bd:?}: complex {}, shapes {}",
                b.dim(bd),
                d.dim(bd)
            )));
        }
        for f in Flavor::BIGRADED {
            let direct = dimension(b, f, bd);
            let counted = cohomology_counts(d, f, bd.0, bd.1);
            if direct != counted {
                return Err(Error::DecompositionFailure(format!(
                    "{f} at {bd:?}: direct {direct}, counted {counted}"
                )));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Page1Check {
    pub dots_and_len2_only: bool,
    pub has_squares: bool,
}

/// Whether the zigzags are all of length at most two, and whether squares
/// occur.
pub fn page1_check(b: &Bicomplex) -> Result<Page1Check> {
    Ok(page1_of(&decompose(b)?))
}

pub fn page1_of(d: &Decomposition) -> Page1Check {
    Page1Check {
        dots_and_len2_only: d.entries.iter().all(|(s, _)| s.is_square() || s.len() <= 2),
        has_squares: d.has_squares(),
    }
}

/// Grid of cell dimensions with `→`/`↑` marking arrows of lines, zigzags
/// and squares. `bounds` defaults to the cells of `d`.
pub fn render_ascii(d: &Decomposition, bounds: Option<(i32, i32, i32, i32)>) -> String {
    let Some((p0, p1, q0, q1)) = bounds.or_else(|| bounding_box(d.cells())) else {
        return String::new();
    };
    let mut harrow: BTreeMap<Bidegree, usize> = BTreeMap::new();
    let mut varrow: BTreeMap<Bidegree, usize> = BTreeMap::new();
    for (s, k) in &d.entries {
        for &(p, q) in &s.cells {
            if s.contains((p + 1, q)) {
                *harrow.entry((p, q)).or_default() += k;
            }
            if s.contains((p, q + 1)) {
                *varrow.entry((p, q)).or_default() += k;
            }
        }
    }
    let label = |bd: Bidegree| match d.dim(bd) {
        0 => ".".to_string(),
        1 => "C".to_string(),
        n => format!("C^{n}"),
    };
    let arrow = |m: &BTreeMap<Bidegree, usize>, bd: Bidegree, glyph: &str| match m.get(&bd) {
        None => String::new(),
        Some(1) => glyph.to_string(),
        Some(k) => format!("{k}{glyph}"),
    };
    let mut cw = 1;
    let mut aw = 1;
    for p in p0..=p1 {
        for q in q0..=q1 {
            cw = cw.max(label((p, q)).chars().count());
            aw = aw.max(arrow(&harrow, (p, q), "→").chars().count());
            cw = cw.max(arrow(&varrow, (p, q), "↑").chars().count());
        }
    }
    let pad = |s: &str, w: usize| format!("{s}{}", " ".repeat(w.saturating_sub(s.chars().count())));
    let margin = format!("q={}", q1).len().max(format!("q={}", q0).len());
    let mut out = String::new();
    for q in (q0..=q1).rev() {
        let mut line = pad(&format!("q={q}"), margin);
        for p in p0..=p1 {
            line.push(' ');
            line.push_str(&pad(&label((p, q)), cw));
            if p < p1 {
                line.push(' ');
                line.push_str(&pad(&arrow(&harrow, (p, q), "→"), aw));
            }
        }
        let _ = writeln!(out, "{}", line.trim_end());
        if q > q0 {
            let mut line = " ".repeat(margin);
            for p in p0..=p1 {
                line.push(' ');
                line.push_str(&pad(&arrow(&varrow, (p, q - 1), "↑"), cw));
                if p < p1 {
                    line.push(' ');
                    line.push_str(&" ".repeat(aw));
                }
            }
            let _ = writeln!(out, "{}", line.trim_end());
        }
    }
    let mut line = " ".repeat(margin);
    for p in p0..=p1 {
        line.push(' ');
        line.push_str(&pad(&format!("p={p}"), cw));
        if p < p1 {
            line.push(' ');
            line.push_str(&" ".repeat(aw));
        }
    }
    let _ = writeln!(out, "{}", line.trim_end());
    out
}

/// Graphviz rendering: one node per cell, one edge per arrow type.
pub fn render_dot(d: &Decomposition) -> String {
    let mut out = String::from("digraph decomposition {\n  node [shape=plaintext];\n");
    for bd in d.cells() {
        let _ = writeln!(
            out,
            "  c_{}_{} [label=\"C^{}\", pos=\"{},{}!\"];",
            name(bd.0),
            name(bd.1),
            d.dim(bd),
            bd.0,
            bd.1
        );
    }
    let mut edges: BTreeMap<(Bidegree, Bidegree), usize> = BTreeMap::new();
    for (s, k) in &d.entries {
        for &(p, q) in &s.cells {
            for t in [(p + 1, q), (p, q + 1)] {
                if s.contains(t) {
                    *edges.entry(((p, q), t)).or_default() += k;
                }
            }
        }
    }
    for ((a, t), k) in edges {
        let kind = if t.0 > a.0 { "del" } else { "delbar" };
        let _ = writeln!(
            out,
            "  c_{}_{} -> c_{}_{} [label=\"{kind} x{k}\"];",
            name(a.0),
            name(a.1),
            name(t.0),
            name(t.1)
        );
    }
    out.push_str("}\n");
    out
}

fn name(x: i32) -> String {
    if x < 0 {
        format!("m{}", -x)
    } else {
        x.to_string()
    }
}
