//! Finite form complexes `B_Γ`, `C_Γ = B_Γ + B̄_Γ` and the algebra
//! `B_Γ ∧ B̄_Γ` of splitting-type solvmanifolds `C^n ⋉ C^m / Γ`.
//!
//! Coordinates are numbered fiber first: `z_1..z_m` span the fiber and
//! `z_{m+1}..z_{m+n}` the base.

mod lattice;
mod presets;
mod salamon;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

pub use lattice::TrivialitySubgroup;
pub use presets::{
    classify_g1, classify_g2, classify_g2_alpha0, classify_g8, is_lattice_compatible, preset, preset_case, CaseFlags,
    Family, LatticeDescriptor, ALL_CASES,
};
pub use salamon::{parse_salamon, StructureConstants};

use crate::bicomplex::{Bicomplex, Bidegree, CochainElement, Label};
use crate::error::{Error, Result};
use crate::forms::{parse_generator, Generator, IndexSet};
use crate::linalg::{zero_vector, SparseMatrix};
use crate::scalar::GaussianRational as Q;

/// `exp(λ·w + μ·w̄)` on the base `C^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Character {
    pub hol: Vec<Q>,
    pub antihol: Vec<Q>,
}

impl Character {
    pub fn holomorphic(hol: Vec<Q>) -> Self {
        let n = hol.len();
        Character {
            hol,
            antihol: vec![Q::zero(); n],
        }
    }

    pub fn trivial(n: usize) -> Self {
        Self::holomorphic(vec![Q::zero(); n])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingData {
    pub n: usize,
    pub m: usize,
    /// Multiplier of `dz_j` for fiber slot `j`.
    pub b_factors: Vec<Character>,
    /// Multiplier of `dz̄_j` for fiber slot `j`.
    pub bbar_factors: Vec<Character>,
    /// Exponent tuples `(s_1..s_m, t_1..t_m)` with `β^s γ^t` trivial on `Γ`.
    pub triviality: TrivialitySubgroup,
    /// Exponent vector of `T`, used for rendering labels.
    pub unit: Option<Vec<Q>>,
}

impl SplittingData {
    pub fn coords(&self) -> usize {
        self.n + self.m
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidCase(m));
        if self.b_factors.len() != self.m || self.bbar_factors.len() != self.m {
            return bad(format!("expected {} fiber factors", self.m));
        }
        for c in self.b_factors.iter().chain(&self.bbar_factors) {
            if c.hol.len() != self.n || c.antihol.len() != self.n {
                return bad(format!("character of length {} on a base of dimension {}", c.hol.len(), self.n));
            }
        }
        if self.triviality.dim() != 2 * self.m {
            return bad(format!("triviality subgroup lives in Z^{}, expected Z^{}", self.triviality.dim(), 2 * self.m));
        }
        if let Some(u) = &self.unit {
            if u.len() != self.coords() {
                return bad("unit vector length".into());
            }
        }
        Ok(())
    }

    /// The `B_Γ` generator on `dz_I ∧ dz̄_K`, if its character is trivial on `Γ`.
    pub fn generator(&self, hol: &IndexSet, antihol: &IndexSet) -> Option<Generator> {
        let m = self.m as u32;
        let tuple: Vec<i64> = (1..=m)
            .map(|j| hol.contains(j) as i64)
            .chain((1..=m).map(|j| antihol.contains(j) as i64))
            .collect();
        if !self.triviality.contains(&tuple) {
            return None;
        }
        let mut g = Generator::unit(self.coords());
        g.hol = hol.clone();
        g.antihol = antihol.clone();
        let mut add = |c: &Character| {
            for k in 0..self.n {
                g.hol_exp[self.m + k] += &c.hol[k];
                g.antihol_exp[self.m + k] += &c.antihol[k];
            }
        };
        for j in 1..=m {
            if hol.contains(j) {
                add(&self.b_factors[j as usize - 1]);
            }
            if antihol.contains(j) {
                add(&self.bbar_factors[j as usize - 1]);
            }
        }
        Some(g)
    }

    pub fn b_generators(&self) -> BTreeSet<Generator> {
        let n = self.coords() as u32;
        let mut out = BTreeSet::new();
        for p in 0..=self.coords() {
            for q in 0..=self.coords() {
                for i in IndexSet::subsets(n, p) {
                    for k in IndexSet::subsets(n, q) {
                        if let Some(g) = self.generator(&i, &k) {
                            out.insert(g);
                        }
                    }
                }
            }
        }
        out
    }
}

fn display_order(g: &Generator) -> impl Ord {
    (g.hol.clone(), g.antihol.clone(), g.hol_exp.clone(), g.antihol_exp.clone())
}

/// The sub-bicomplex of forms spanned by `gens`; fails unless `∂` and `∂̄`
/// preserve the span.
pub fn form_complex(gens: &BTreeSet<Generator>, unit: Option<Vec<Q>>) -> Result<Bicomplex> {
    let mut cells: BTreeMap<Bidegree, Vec<Generator>> = BTreeMap::new();
    for g in gens {
        cells.entry(g.bidegree()).or_default().push(g.clone());
    }
    for v in cells.values_mut() {
        v.sort_by_key(display_order);
    }
    let index: BTreeMap<&Generator, usize> =
        cells.values().flat_map(|v| v.iter().enumerate().map(|(i, g)| (g, i))).collect();
    let mut b = Bicomplex::new();
    b.unit = unit;
    for (bd, v) in &cells {
        b.set_cell(*bd, v.iter().cloned().map(Label::Form).collect());
    }
    for (&(p, q), v) in &cells {
        let mut del = SparseMatrix::zeros(cells.get(&(p + 1, q)).map_or(0, Vec::len), v.len());
        let mut delbar = SparseMatrix::zeros(cells.get(&(p, q + 1)).map_or(0, Vec::len), v.len());
        for (j, g) in v.iter().enumerate() {
            for (target, terms) in [(&mut del, g.del()), (&mut delbar, g.delbar())] {
                for (c, h) in terms {
                    let &i = index.get(&h).ok_or_else(|| {
                        Error::InternalInconsistency(format!("differential of {} leaves the span", g.render(b.unit.as_deref())))
                    })?;
                    target.add_entry(i, j, &c);
                }
            }
        }
        if !del.is_zero() {
            b.set_del((p, q), del);
        }
        if !delbar.is_zero() {
            b.set_delbar((p, q), delbar);
        }
    }
    Ok(b)
}

fn conjugates(gens: &BTreeSet<Generator>) -> BTreeSet<Generator> {
    gens.iter().map(|g| g.conjugate().0).collect()
}

/// `B_Γ`: holomorphic-multiplier forms with trivial character on `Γ`.
pub fn build_b(data: &SplittingData) -> Result<Bicomplex> {
    data.validate()?;
    form_complex(&data.b_generators(), data.unit.clone())
}

/// `C_Γ = B_Γ + B̄_Γ`, identifying coincident labels.
pub fn build_c(data: &SplittingData) -> Result<Bicomplex> {
    data.validate()?;
    let b = data.b_generators();
    let mut all = conjugates(&b);
    all.extend(b);
    form_complex(&all, data.unit.clone())
}

/// A form complex closed under the wedge product.
#[derive(Clone, Debug)]
pub struct FormAlgebra {
    pub complex: Bicomplex,
}

impl FormAlgebra {
    pub fn new(complex: Bicomplex) -> Self {
        FormAlgebra { complex }
    }

    pub fn coords(&self) -> usize {
        self.complex
            .basis_positions()
            .first()
            .and_then(|&(bd, i)| self.complex.labels(bd)[i].as_generator())
            .map_or(0, Generator::coords)
    }

    /// The basis element with this label, with the coordinate of its
    /// generator.
    pub fn locate(&self, g: &Generator) -> Option<(Bidegree, usize)> {
        let bd = g.bidegree();
        self.complex.position(bd, &Label::Form(g.clone())).map(|i| (bd, i))
    }

    pub fn basis_element(&self, g: &Generator) -> Option<CochainElement> {
        self.locate(g).map(|(bd, i)| CochainElement::basis(&self.complex, bd, i))
    }

    /// Parses a monomial such as `T^-1 dz_{13}` into an element.
    pub fn element(&self, text: &str) -> Result<CochainElement> {
        let (c, g) = parse_generator(text, self.coords(), self.complex.unit.as_deref())?;
        let mut e = self
            .basis_element(&g)
            .ok_or_else(|| Error::UnknownLabel(text.trim().to_string()))?;
        for x in &mut e.coeffs {
            *x *= &c;
        }
        Ok(e)
    }

    pub fn wedge(&self, u: &CochainElement, v: &CochainElement) -> Result<CochainElement> {
        let bd = (u.bidegree.0 + v.bidegree.0, u.bidegree.1 + v.bidegree.1);
        let mut out = CochainElement::zero(&self.complex, bd);
        if out.coeffs.is_empty() {
            out.coeffs = zero_vector(0);
        }
        let lu = self.complex.labels(u.bidegree);
        let lv = self.complex.labels(v.bidegree);
        for (i, a) in u.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let gu = lu[i].as_generator().ok_or_else(|| Error::InternalInconsistency("product of synthetic labels".into()))?;
            for (j, b) in v.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let gv = lv[j].as_generator().ok_or_else(|| Error::InternalInconsistency("product of synthetic labels".into()))?;
                let Some((g, s)) = gu.wedge(gv) else { continue };
                let (_, k) = self.locate(&g).ok_or_else(|| {
                    Error::InternalInconsistency(format!("product {} is outside the algebra", g.render(self.complex.unit.as_deref())))
                })?;
                let term = (a * b).scale_int(s as i64);
                out.coeffs[k] += &term;
            }
        }
        Ok(out)
    }

    /// Sum of `coeff · label` over the nonzero entries.
    pub fn render(&self, e: &CochainElement) -> String {
        let labels = self.complex.labels(e.bidegree);
        let terms: Vec<String> = e
            .coeffs
            .iter()
            .zip(labels)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, l)| {
                let name = l.render(self.complex.unit.as_deref());
                if c.is_one() {
                    name
                } else if (-c).is_one() {
                    format!("-{name}")
                } else {
                    format!("({c}) {name}")
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ").replace("+ -", "- ")
        }
    }
}

/// `B_Γ ∧ B̄_Γ`, spanned by all products of a `B_Γ` and a `B̄_Γ` generator.
pub fn build_closure(data: &SplittingData) -> Result<FormAlgebra> {
    data.validate()?;
    let b = data.b_generators();
    let bbar = conjugates(&b);
    let mut all = BTreeSet::new();
    for x in &b {
        for y in &bbar {
            if let Some((g, _)) = x.wedge(y) {
                all.insert(g);
            }
        }
    }
    Ok(FormAlgebra::new(form_complex(&all, data.unit.clone())?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{dimension, Flavor};

    #[test]
    fn g8_case_i_is_one_per_cell() {
        let d = preset_case(Family::G8, "i").unwrap();
        let b = build_b(&d).unwrap();
        for p in 0..4 {
            for q in 0..4 {
                assert_eq!(b.dim((p, q)), 1);
            }
        }
        assert!(b.has_zero_differentials());
        let c = build_c(&d).unwrap();
        assert_eq!(c.label_sets(), b.label_sets());
        let cl = build_closure(&d).unwrap();
        assert_eq!(cl.complex.label_sets(), b.label_sets());
    }

    #[test]
    fn g8_case_vii_b11() {
        let d = preset_case(Family::G8, "vii").unwrap();
        assert_eq!(build_b(&d).unwrap().dim((1, 1)), 9);
    }

    #[test]
    fn g2_alpha0_labels() {
        let d = preset_case(Family::G2Alpha0, "pi/2").unwrap();
        let b = build_b(&d).unwrap();
        let names: BTreeSet<String> = b.labels((1, 1)).iter().map(|l| l.render(b.unit.as_deref())).collect();
        let want: BTreeSet<String> = ["dz_{11̄}", "dz_{12̄}", "dz_{21̄}", "dz_{22̄}", "dz_{33̄}"].iter().map(|s| s.to_string()).collect();
        assert_eq!(names, want);
    }

    #[test]
    fn c_is_conjugation_symmetric() {
        for (f, case) in ALL_CASES {
            let d = preset_case(*f, case).unwrap();
            let c = build_c(&d).unwrap();
            assert!(c.is_valid(), "{f:?} {case}");
            assert_eq!(c.conjugate().label_sets(), c.label_sets(), "{f:?} {case}");
            let b = build_b(&d).unwrap();
            assert!(b.is_valid());
            for bd in b.bidegrees() {
                assert!(b.delbar_at(bd).is_zero());
            }
        }
    }

    #[test]
    fn closure_product() {
        let d = preset_case(Family::G1, "i").unwrap();
        let cl = build_closure(&d).unwrap();
        let u = cl.element("T dz_{32̄}").unwrap();
        let v = cl.element("T̄^-1 dz_{1̄3̄}").unwrap();
        let w = cl.wedge(&u, &v).unwrap();
        assert_eq!(w.bidegree, (1, 3));
        assert_eq!(cl.render(&w), "-T T̄^-1 dz_{31̄2̄3̄}");
        assert_eq!(dimension(&cl.complex, Flavor::BottChern, (0, 0)), 1);
    }
}
