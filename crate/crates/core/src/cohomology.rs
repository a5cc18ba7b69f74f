//! Dolbeault, conjugate Dolbeault, Bott-Chern, Aeppli and de Rham cohomology.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bicomplex::{Bicomplex, Bidegree};
use crate::decomposition::{decompose, Shape};
use crate::error::{Error, Result};
use crate::linalg::{complement, Matrix, SparseMatrix, Span, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    /// `ker ∂̄ / im ∂̄`
    Dolbeault,
    /// `ker ∂ / im ∂`
    ConjDolbeault,
    /// `(ker ∂ ∩ ker ∂̄) / im ∂∂̄`
    BottChern,
    /// `ker ∂∂̄ / (im ∂ + im ∂̄)`
    Aeppli,
    /// cohomology of the total complex
    DeRham,
}

impl Flavor {
    /// The four bigraded flavors.
    pub const BIGRADED: [Flavor; 4] = [Flavor::ConjDolbeault, Flavor::Dolbeault, Flavor::BottChern, Flavor::Aeppli];

    pub fn name(self) -> &'static str {
        match self {
            Flavor::Dolbeault => "dolbeault",
            Flavor::ConjDolbeault => "conj_dolbeault",
            Flavor::BottChern => "bott_chern",
            Flavor::Aeppli => "aeppli",
            Flavor::DeRham => "de_rham",
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A cohomology group with representatives of a basis.
///
/// Representatives are coefficient vectors in the basis at `bidegree`, or in
/// the total-degree layout of [`Bicomplex::total_layout`] for de Rham.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyGroup {
    pub flavor: Flavor,
    pub bidegree: Option<Bidegree>,
    pub degree: i32,
    pub dimension: usize,
    pub representatives: Vec<Vector>,
}

/// Kernels and images in one cell.
pub struct CellSpaces<'a> {
    b: &'a Bicomplex,
    bd: Bidegree,
}

impl<'a> CellSpaces<'a> {
    pub fn new(b: &'a Bicomplex, bd: Bidegree) -> Self {
        CellSpaces { b, bd }
    }

    pub fn dim(&self) -> usize {
        self.b.dim(self.bd)
    }

    pub fn ker_del(&self) -> Vec<Vector> {
        kernel_or_all(&self.b.del_at(self.bd), self.dim())
    }

    pub fn ker_delbar(&self) -> Vec<Vector> {
        kernel_or_all(&self.b.delbar_at(self.bd), self.dim())
    }

    /// `ker ∂ ∩ ker ∂̄`.
    pub fn ker_both(&self) -> Vec<Vector> {
        let a = self.b.del_at(self.bd).to_dense();
        let c = self.b.delbar_at(self.bd).to_dense();
        if a.rows + c.rows == 0 {
            return identity_columns(self.dim());
        }
        a.vstack(&c).kernel()
    }

    pub fn ker_ddbar(&self) -> Vec<Vector> {
        kernel_or_all(&self.b.deldelbar_at(self.bd), self.dim())
    }

    pub fn im_del(&self) -> Vec<Vector> {
        self.b.del_at((self.bd.0 - 1, self.bd.1)).columns()
    }

    pub fn im_delbar(&self) -> Vec<Vector> {
        self.b.delbar_at((self.bd.0, self.bd.1 - 1)).columns()
    }

    pub fn im_ddbar(&self) -> Vec<Vector> {
        self.b.deldelbar_at((self.bd.0 - 1, self.bd.1 - 1)).columns()
    }

    /// Generators of `im ∂ + im ∂̄`.
    pub fn im_sum(&self) -> Vec<Vector> {
        let mut v = self.im_del();
        v.extend(self.im_delbar());
        v
    }

    pub fn span(&self, vs: &[Vector]) -> Span {
        Span::from_vectors(self.dim(), vs)
    }
}

fn identity_columns(n: usize) -> Vec<Vector> {
    Matrix::identity(n).columns()
}

fn kernel_or_all(m: &SparseMatrix, n: usize) -> Vec<Vector> {
    if m.rows == 0 || m.is_zero() {
        identity_columns(n)
    } else {
        m.kernel()
    }
}

/// Greedy complement of `span(boundary)` inside `span(cycles)`.
fn quotient(n: usize, cycles: &[Vector], boundary: &[Vector]) -> Vec<Vector> {
    complement(&Span::from_vectors(n, boundary), cycles)
}

fn group(flavor: Flavor, bd: Bidegree, reps: Vec<Vector>) -> CohomologyGroup {
    CohomologyGroup {
        flavor,
        bidegree: Some(bd),
        degree: bd.0 + bd.1,
        dimension: reps.len(),
        representatives: reps,
    }
}

pub fn dolbeault(b: &Bicomplex, p: i32, q: i32) -> CohomologyGroup {
    let c = CellSpaces::new(b, (p, q));
    group(Flavor::Dolbeault, (p, q), quotient(c.dim(), &c.ker_delbar(), &c.im_delbar()))
}

pub fn conj_dolbeault(b: &Bicomplex, p: i32, q: i32) -> CohomologyGroup {
    let c = CellSpaces::new(b, (p, q));
    group(Flavor::ConjDolbeault, (p, q), quotient(c.dim(), &c.ker_del(), &c.im_del()))
}

pub fn bott_chern(b: &Bicomplex, p: i32, q: i32) -> CohomologyGroup {
    let c = CellSpaces::new(b, (p, q));
    group(Flavor::BottChern, (p, q), quotient(c.dim(), &c.ker_both(), &c.im_ddbar()))
}

pub fn aeppli(b: &Bicomplex, p: i32, q: i32) -> CohomologyGroup {
    let c = CellSpaces::new(b, (p, q));
    group(Flavor::Aeppli, (p, q), quotient(c.dim(), &c.ker_ddbar(), &c.im_sum()))
}

pub fn de_rham(b: &Bicomplex, k: i32) -> CohomologyGroup {
    let n = b.total_dim_in_degree(k);
    let d = b.total_differential(k);
    let cycles = kernel_or_all(&d, n);
    let boundary = b.total_differential(k - 1).columns();
    let reps = quotient(n, &cycles, &boundary);
    CohomologyGroup {
        flavor: Flavor::DeRham,
        bidegree: None,
        degree: k,
        dimension: reps.len(),
        representatives: reps,
    }
}

pub fn bigraded(b: &Bicomplex, flavor: Flavor, bd: Bidegree) -> CohomologyGroup {
    match flavor {
        Flavor::Dolbeault => dolbeault(b, bd.0, bd.1),
        Flavor::ConjDolbeault => conj_dolbeault(b, bd.0, bd.1),
        Flavor::BottChern => bott_chern(b, bd.0, bd.1),
        Flavor::Aeppli => aeppli(b, bd.0, bd.1),
        Flavor::DeRham => panic!("de Rham cohomology is singly graded"),
    }
}

/// Dimension by ranks only.
pub fn dimension(b: &Bicomplex, flavor: Flavor, bd: Bidegree) -> usize {
    let (p, q) = bd;
    let n = b.dim(bd);
    if n == 0 {
        return 0;
    }
    match flavor {
        Flavor::Dolbeault => n - b.delbar_at(bd).rank() - b.delbar_at((p, q - 1)).rank(),
        Flavor::ConjDolbeault => n - b.del_at(bd).rank() - b.del_at((p - 1, q)).rank(),
        Flavor::BottChern => {
            let c = CellSpaces::new(b, bd);
            c.ker_both().len() - b.deldelbar_at((p - 1, q - 1)).rank()
        }
        Flavor::Aeppli => {
            let c = CellSpaces::new(b, bd);
            n - b.deldelbar_at(bd).rank() - c.span(&c.im_sum()).dim()
        }
        Flavor::DeRham => panic!("de Rham cohomology is singly graded"),
    }
}

pub fn de_rham_dimension(b: &Bicomplex, k: i32) -> usize {
    b.total_dim_in_degree(k) - b.total_differential(k).rank() - b.total_differential(k - 1).rank()
}

/// Dimensions over the bounding box (zero cells included).
pub fn table(b: &Bicomplex, flavor: Flavor) -> BTreeMap<Bidegree, usize> {
    let mut out = BTreeMap::new();
    if let Some((p0, p1, q0, q1)) = b.bounding_box() {
        for p in p0..=p1 {
            for q in q0..=q1 {
                out.insert((p, q), dimension(b, flavor, (p, q)));
            }
        }
    }
    out
}

pub fn de_rham_table(b: &Bicomplex) -> BTreeMap<i32, usize> {
    b.total_degrees().into_iter().map(|k| (k, de_rham_dimension(b, k))).collect()
}

/// Is `v` (at `bd`) in `im ∂ + im ∂̄ + span(extra)`?
pub fn in_images_plus(b: &Bicomplex, bd: Bidegree, v: &[crate::scalar::GaussianRational], extra: &[Vector]) -> bool {
    let c = CellSpaces::new(b, bd);
    let mut gens = c.im_sum();
    gens.extend(extra.iter().cloned());
    c.span(&gens).contains(v)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DdbarVerdict {
    pub holds: bool,
    /// A zigzag of length at least two when the lemma fails.
    pub witness: Option<Shape>,
}

/// The `∂∂̄`-lemma, decided from the decomposition and cross-checked
/// against equality of the four bigraded dimensions.
pub fn ddbar_lemma(b: &Bicomplex) -> Result<DdbarVerdict> {
    let d = decompose(b)?;
    let witness = d.entries().iter().map(|(s, _)| s).find(|s| s.is_zigzag() && s.len() >= 2).cloned();
    let holds = witness.is_none();
    let mut equal = true;
    for bd in b.bidegrees() {
        let dims: Vec<usize> = Flavor::BIGRADED.iter().map(|f| dimension(b, *f, bd)).collect();
        if dims.iter().any(|x| *x != dims[0]) {
            equal = false;
            break;
        }
    }
    if equal != holds {
        return Err(Error::InternalInconsistency(format!(
            "decomposition says ddbar-lemma = {holds}, dimension test says {equal}"
        )));
    }
    Ok(DdbarVerdict { holds, witness })
}
