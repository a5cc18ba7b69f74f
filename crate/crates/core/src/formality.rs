//! Formality verdicts and triple Aeppli-Bott-Chern Massey products.

use std::cell::RefCell;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bicomplex::{Bicomplex, Bidegree, CochainElement};
use crate::builder::{build_b, build_c, build_closure, FormAlgebra, SplittingData};
use crate::cohomology::{ddbar_lemma, CellSpaces};
use crate::decomposition::decompose;
use crate::error::{Error, Result};
use crate::linalg::{axpy, is_zero_vector, Preimage, Span, Vector};
use crate::scalar::GaussianRational as Q;

/// Default number of triples evaluated by [`scan_massey`].
pub const DEFAULT_SCAN_BUDGET: usize = 4000;

/// Environment variable overriding the scan budget.
pub const SCAN_BUDGET_VAR: &str = "SOLVCOHOM_SCAN_BUDGET";

/// A `∂`- and `∂̄`-closed representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BottChernClass {
    pub bidegree: Bidegree,
    pub representative: CochainElement,
    /// Paper-notation text, when the class was parsed from a label.
    pub label: Option<String>,
}

impl BottChernClass {
    pub fn new(alg: &FormAlgebra, representative: CochainElement) -> Result<Self> {
        let b = &alg.complex;
        if !b.apply_del(&representative).is_zero() || !b.apply_delbar(&representative).is_zero() {
            return Err(Error::UndefinedProduct(format!("{} is not Bott-Chern closed", alg.render(&representative))));
        }
        Ok(BottChernClass {
            bidegree: representative.bidegree,
            representative,
            label: None,
        })
    }

    /// Parses a monomial such as `T dz_{32'}`.
    pub fn parse(alg: &FormAlgebra, text: &str) -> Result<Self> {
        let mut c = Self::new(alg, alg.element(text)?)?;
        c.label = Some(text.trim().to_string());
        Ok(c)
    }

    pub fn name(&self, alg: &FormAlgebra) -> String {
        self.label.clone().unwrap_or_else(|| alg.render(&self.representative))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MasseyResult {
    pub inputs: [BottChernClass; 3],
    pub representative: CochainElement,
    /// Dimension of the Aeppli quotient the class lives in.
    pub quotient_dimension: usize,
    pub nonvanishing: bool,
    /// `(α₁₃, α₂₄)`.
    pub primitives: (CochainElement, CochainElement),
}

fn sign(bd: Bidegree) -> Q {
    if (bd.0 + bd.1) % 2 == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

fn scaled(e: &CochainElement, k: &Q) -> CochainElement {
    CochainElement {
        bidegree: e.bidegree,
        coeffs: e.coeffs.iter().map(|x| x * k).collect(),
    }
}

fn add(a: &CochainElement, b: &CochainElement) -> CochainElement {
    let mut coeffs = a.coeffs.clone();
    axpy(&mut coeffs, &Q::one(), &b.coeffs);
    CochainElement {
        bidegree: a.bidegree,
        coeffs,
    }
}

/// Per-cell solvers reused across many triples.
pub struct MasseyContext<'a> {
    pub alg: &'a FormAlgebra,
    ddbar: RefCell<BTreeMap<Bidegree, Preimage>>,
    ker_ddbar: RefCell<BTreeMap<Bidegree, Vec<Vector>>>,
}

impl<'a> MasseyContext<'a> {
    pub fn new(alg: &'a FormAlgebra) -> Self {
        MasseyContext {
            alg,
            ddbar: RefCell::new(BTreeMap::new()),
            ker_ddbar: RefCell::new(BTreeMap::new()),
        }
    }

    fn complex(&self) -> &Bicomplex {
        &self.alg.complex
    }

    /// `x` at `bd` with `∂∂̄x = y`.
    fn solve_ddbar(&self, bd: Bidegree, y: &CochainElement) -> Option<CochainElement> {
        if is_zero_vector(&y.coeffs) {
            return Some(CochainElement::zero(self.complex(), bd));
        }
        let mut cache = self.ddbar.borrow_mut();
        let pre = cache
            .entry(bd)
            .or_insert_with(|| Preimage::new(&self.complex().deldelbar_at(bd)));
        pre.solve(&y.coeffs).map(|coeffs| CochainElement { bidegree: bd, coeffs })
    }

    fn ker_ddbar(&self, bd: Bidegree) -> Vec<Vector> {
        self.ker_ddbar
            .borrow_mut()
            .entry(bd)
            .or_insert_with(|| CellSpaces::new(self.complex(), bd).ker_ddbar())
            .clone()
    }

    /// Evaluates `⟨a₁₂, a₂₃, a₃₄⟩` with the first primitives the solver finds.
    pub fn massey(&self, a12: &BottChernClass, a23: &BottChernClass, a34: &BottChernClass) -> Result<MasseyResult> {
        let (p, q) = a12.bidegree;
        let (r, s) = a23.bidegree;
        let (u, v) = a34.bidegree;
        let b13 = (p + r - 1, q + s - 1);
        let b24 = (r + u - 1, s + v - 1);
        let lhs13 = scaled(&self.alg.wedge(&a12.representative, &a23.representative)?, &sign((p, q)));
        let lhs24 = scaled(&self.alg.wedge(&a23.representative, &a34.representative)?, &sign((r, s)));
        let alpha13 = self.solve_ddbar(b13, &lhs13).ok_or_else(|| {
            Error::UndefinedProduct(format!("{} is not ddbar-exact", self.alg.render(&lhs13)))
        })?;
        let alpha24 = self.solve_ddbar(b24, &lhs24).ok_or_else(|| {
            Error::UndefinedProduct(format!("{} is not ddbar-exact", self.alg.render(&lhs24)))
        })?;
        self.evaluate(a12, a23, a34, alpha13, alpha24)
    }

    /// Evaluates with caller-supplied primitives, which are checked.
    pub fn massey_with_primitives(
        &self,
        a12: &BottChernClass,
        a23: &BottChernClass,
        a34: &BottChernClass,
        alpha13: CochainElement,
        alpha24: CochainElement,
    ) -> Result<MasseyResult> {
        let b = self.complex();
        let (p, q) = a12.bidegree;
        let (r, s) = a23.bidegree;
        let (u, v) = a34.bidegree;
        for (alpha, expected) in [(&alpha13, (p + r - 1, q + s - 1)), (&alpha24, (r + u - 1, s + v - 1))] {
            if alpha.bidegree != expected {
                return Err(Error::BidegreeMismatch {
                    expected,
                    found: alpha.bidegree,
                });
            }
        }
        let lhs13 = scaled(&self.alg.wedge(&a12.representative, &a23.representative)?, &sign((p, q)));
        let lhs24 = scaled(&self.alg.wedge(&a23.representative, &a34.representative)?, &sign((r, s)));
        for (alpha, lhs) in [(&alpha13, &lhs13), (&alpha24, &lhs24)] {
            let got = b.deldelbar_at(alpha.bidegree).mul_vec(&alpha.coeffs);
            if got != lhs.coeffs {
                return Err(Error::UndefinedProduct("primitive does not solve the ddbar equation".into()));
            }
        }
        self.evaluate(a12, a23, a34, alpha13, alpha24)
    }

    fn evaluate(
        &self,
        a12: &BottChernClass,
        a23: &BottChernClass,
        a34: &BottChernClass,
        alpha13: CochainElement,
        alpha24: CochainElement,
    ) -> Result<MasseyResult> {
        let b = self.complex();
        let (p, q) = a12.bidegree;
        let (r, s) = a23.bidegree;
        let (u, v) = a34.bidegree;
        let target = (p + r + u - 1, q + s + v - 1);
        let first = scaled(&self.alg.wedge(&a12.representative, &alpha24)?, &sign((p, q)));
        let second = scaled(&self.alg.wedge(&alpha13, &a34.representative)?, &-sign((r, s)));
        let rep = add(&first, &second);
        if !is_zero_vector(&b.deldelbar_at(target).mul_vec(&rep.coeffs)) {
            return Err(Error::InternalInconsistency("Massey representative is not ddbar-closed".into()));
        }

        let cell = CellSpaces::new(b, target);
        let mut denominator = cell.im_sum();
        for h in self.ker_ddbar((r + u - 1, s + v - 1)) {
            let h = CochainElement { bidegree: (r + u - 1, s + v - 1), coeffs: h };
            denominator.push(self.alg.wedge(&a12.representative, &h)?.coeffs);
        }
        for h in self.ker_ddbar((p + r - 1, q + s - 1)) {
            let h = CochainElement { bidegree: (p + r - 1, q + s - 1), coeffs: h };
            denominator.push(self.alg.wedge(&h, &a34.representative)?.coeffs);
        }
        let den = Span::from_vectors(cell.dim(), &denominator);
        let kernel = Span::from_vectors(cell.dim(), &self.ker_ddbar(target));
        let quotient_dimension = kernel.dim() - den.dim();
        let nonvanishing = !den.contains(&rep.coeffs);
        Ok(MasseyResult {
            inputs: [a12.clone(), a23.clone(), a34.clone()],
            representative: rep,
            quotient_dimension,
            nonvanishing,
            primitives: (alpha13, alpha24),
        })
    }

    /// Elements `h` with `∂∂̄h = 0` at `bd`, the indeterminacy of a primitive.
    pub fn indeterminacy(&self, bd: Bidegree) -> Vec<Vector> {
        self.ker_ddbar(bd)
    }
}

/// One-shot form of [`MasseyContext::massey`].
pub fn massey_abc(alg: &FormAlgebra, a12: &BottChernClass, a23: &BottChernClass, a34: &BottChernClass) -> Result<MasseyResult> {
    MasseyContext::new(alg).massey(a12, a23, a34)
}

/// Parses `"a12;a23;a34"` and evaluates the triple.
pub fn massey_from_text(alg: &FormAlgebra, triple: &str) -> Result<MasseyResult> {
    let parts: Vec<&str> = triple.split(';').collect();
    if parts.len() != 3 {
        return Err(crate::error::ParseError::new(1, 1, "expected three monomials separated by ';'").into());
    }
    let a12 = BottChernClass::parse(alg, parts[0])?;
    let a23 = BottChernClass::parse(alg, parts[1])?;
    let a34 = BottChernClass::parse(alg, parts[2])?;
    massey_abc(alg, &a12, &a23, &a34)
}

/// Explicit witness triples for the non-formal cases.
pub const WITNESS_TRIPLES: &[[&str; 3]] = &[
    ["T dz_{32'}", "Tb^-1 dz_{1'3'}", "Tb dz_{23'}"],
    ["T^-2 dz_{131'}", "Tb^2 dz_{22'3'}", "dz_{3'}"],
    ["T^-1 dz_{13}", "Tb dz_{2'3'}", "dz_{3'}"],
    ["Tb^-1 dz_{13'}", "T dz_{32'}", "dz_3"],
];

/// True iff `B_Γ` equals its conjugate label-wise and carries zero
/// differentials.
pub fn strong_formality(data: &SplittingData) -> Result<bool> {
    let b = build_b(data)?;
    Ok(b.label_sets() == b.conjugate().label_sets() && b.has_zero_differentials())
}

/// Basis monomials of the closure that are Bott-Chern closed, nonzero in
/// cohomology, and of total degree `1..=max_degree`.
pub fn bc_monomials(alg: &FormAlgebra, max_degree: i32) -> Vec<BottChernClass> {
    let b = &alg.complex;
    let mut out = Vec::new();
    let mut by_degree: Vec<(i32, Bidegree, usize)> = b
        .basis_positions()
        .into_iter()
        .map(|(bd, i)| (bd.0 + bd.1, bd, i))
        .filter(|(k, _, _)| (1..=max_degree).contains(k))
        .collect();
    by_degree.sort();
    for (_, bd, i) in by_degree {
        let e = CochainElement::basis(b, bd, i);
        if let Ok(c) = BottChernClass::new(alg, e) {
            let cell = CellSpaces::new(b, bd);
            if !cell.span(&cell.im_ddbar()).contains(&c.representative.coeffs) {
                out.push(c);
            }
        }
    }
    out
}

/// Outcome of a bounded scan.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScanOutcome {
    pub evaluated: usize,
    pub undefined: usize,
    pub exhausted: bool,
    pub witness: Option<MasseyResult>,
}

pub fn scan_budget() -> usize {
    std::env::var(SCAN_BUDGET_VAR)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SCAN_BUDGET)
}

/// Evaluates triples of [`bc_monomials`] of degree at most 4, stopping at the
/// first nonvanishing product or after `budget` defined evaluations.
pub fn scan_massey(ctx: &MasseyContext, budget: usize) -> Result<ScanOutcome> {
    let alg = ctx.alg;
    let b = &alg.complex;
    let mons = bc_monomials(alg, 4);
    let mut out = ScanOutcome::default();
    for a in &mons {
        for c in &mons {
            let ab = alg.wedge(&a.representative, &c.representative)?;
            for d in &mons {
                let (p, q) = a.bidegree;
                let target = (p + c.bidegree.0 + d.bidegree.0 - 1, q + c.bidegree.1 + d.bidegree.1 - 1);
                if b.dim(target) == 0 {
                    continue;
                }
                let cd = alg.wedge(&c.representative, &d.representative)?;
                if ab.is_zero() && cd.is_zero() {
                    continue;
                }
                if out.evaluated >= budget {
                    return Ok(out);
                }
                match ctx.massey(a, c, d) {
                    Ok(m) => {
                        out.evaluated += 1;
                        if m.nonvanishing {
                            out.witness = Some(m);
                            return Ok(out);
                        }
                    }
                    Err(Error::UndefinedProduct(_)) => out.undefined += 1,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    out.exhausted = true;
    Ok(out)
}

/// Witness triple in printable form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MasseyWitness {
    pub a12: String,
    pub a23: String,
    pub a34: String,
    pub bidegree: Bidegree,
    pub representative: String,
    pub quotient_dimension: usize,
}

impl MasseyWitness {
    pub fn new(alg: &FormAlgebra, m: &MasseyResult) -> Self {
        MasseyWitness {
            a12: m.inputs[0].name(alg),
            a23: m.inputs[1].name(alg),
            a34: m.inputs[2].name(alg),
            bidegree: m.representative.bidegree,
            representative: alg.render(&m.representative),
            quotient_dimension: m.quotient_dimension,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalityReport {
    pub ddbar: bool,
    pub strong: bool,
    pub weak: bool,
    /// How `weak` was decided.
    pub weak_criterion: String,
    pub dolbeault: bool,
    pub geometric_bc_obstructed: bool,
    pub massey_witness: Option<MasseyWitness>,
}

/// Evaluates the witness list, then scans.
pub fn find_witness(alg: &FormAlgebra, budget: usize) -> Result<Option<MasseyResult>> {
    let ctx = MasseyContext::new(alg);
    for t in WITNESS_TRIPLES {
        let Ok(classes) = t.iter().map(|s| BottChernClass::parse(alg, s)).collect::<Result<Vec<_>>>() else {
            continue;
        };
        match ctx.massey(&classes[0], &classes[1], &classes[2]) {
            Ok(m) if m.nonvanishing => return Ok(Some(m)),
            Ok(_) | Err(Error::UndefinedProduct(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(scan_massey(&ctx, budget)?.witness)
}

pub fn formality_report(data: &SplittingData) -> Result<FormalityReport> {
    formality_report_with_budget(data, scan_budget())
}

pub fn formality_report_with_budget(data: &SplittingData, budget: usize) -> Result<FormalityReport> {
    let c = build_c(data)?;
    let ddbar = ddbar_lemma(&c)?.holds;
    let strong = strong_formality(data)?;
    if strong != ddbar {
        return Err(Error::InternalInconsistency(format!(
            "strong formality {strong} disagrees with the ddbar-lemma {ddbar}"
        )));
    }
    let alg = build_closure(data)?;
    let weak = !decompose(&alg.complex)?.has_squares();
    if weak != strong && data.coords() == 3 {
        return Err(Error::InternalInconsistency(format!("weak formality {weak} disagrees with strong {strong}")));
    }
    let witness = find_witness(&alg, budget)?;
    if ddbar && witness.is_some() {
        return Err(Error::InternalInconsistency("nonvanishing Massey product on a ddbar-lemma manifold".into()));
    }
    Ok(FormalityReport {
        ddbar,
        strong,
        weak,
        weak_criterion: "no squares in the closure".into(),
        dolbeault: true,
        geometric_bc_obstructed: witness.is_some(),
        massey_witness: witness.as_ref().map(|m| MasseyWitness::new(&alg, m)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{preset_case, Family};

    fn closure(f: Family, c: &str) -> FormAlgebra {
        build_closure(&preset_case(f, c).unwrap()).unwrap()
    }

    #[test]
    fn g1_case_i_witness() {
        let alg = closure(Family::G1, "i");
        let m = massey_from_text(&alg, "T dz_{32'}; Tb^-1 dz_{1'3'}; Tb dz_{23'}").unwrap();
        assert_eq!(m.representative.bidegree, (1, 3));
        assert!(m.nonvanishing);
        assert!(m.quotient_dimension >= 1);
    }

    #[test]
    fn undefined_product_is_reported() {
        let alg = closure(Family::G8, "i");
        let mons = bc_monomials(&alg, 4);
        assert!(!mons.is_empty());
        let ctx = MasseyContext::new(&alg);
        let out = scan_massey(&ctx, 200).unwrap();
        assert!(out.witness.is_none());
    }

    #[test]
    fn strong_matches_ddbar() {
        for (f, c) in crate::builder::ALL_CASES {
            let d = preset_case(*f, c).unwrap();
            let ddbar = ddbar_lemma(&build_c(&d).unwrap()).unwrap().holds;
            assert_eq!(strong_formality(&d).unwrap(), ddbar, "{f} {c}");
        }
    }
}
