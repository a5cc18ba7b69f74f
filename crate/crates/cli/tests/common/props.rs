//! Randomized suites over shape sums, shared by the acceptance target.

use std::collections::BTreeMap;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use solvcohom_core::bicomplex::{shape_complex, Bicomplex, Bidegree, CochainElement, ViolationKind};
use solvcohom_core::builder::{build_closure, preset_case, Family, FormAlgebra};
use solvcohom_core::cohomology::{de_rham_dimension, dimension, in_images_plus};
use solvcohom_core::decomposition::{cohomology_counts, decompose, Decomposition, Shape};
use solvcohom_core::formality::{BottChernClass, MasseyContext};
use solvcohom_core::linalg::Matrix;
use solvcohom_core::{Flavor, GaussianRational as Q};

pub const CASES: u32 = 1000;

const FLAVORS: [Flavor; 4] = [Flavor::Dolbeault, Flavor::ConjDolbeault, Flavor::BottChern, Flavor::Aeppli];

fn runner() -> TestRunner {
    TestRunner::new(Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    })
}

/// Cell `t` of the staircase through `(p,q)`; odd offsets are one degree up.
fn stair(p: i32, q: i32, t: i32) -> Bidegree {
    if t.rem_euclid(2) == 0 {
        (p - t / 2, q + t / 2)
    } else {
        (p - (t - 1) / 2, q + (t + 1) / 2)
    }
}

pub fn shape() -> impl Strategy<Value = Shape> {
    (0u8..5, 0i32..3, 0i32..3, 0i32..2, 3i32..6).prop_map(|(kind, p, q, start, len)| match kind {
        0 => Shape::dot((p, q)),
        1 => Shape::h_line((p, q)),
        2 => Shape::v_line((p, q)),
        3 => Shape::square((p, q)),
        _ => {
            let (p, q) = (p + 2, q);
            Shape::zigzag((-start..len - start).map(|t| stair(p, q, t))).expect("staircase")
        }
    })
}

/// A shape sum with a scrambled basis in every cell.
#[derive(Clone, Debug)]
pub struct Scrambled {
    pub shapes: Vec<Shape>,
    pub complex: Bicomplex,
}

impl Scrambled {
    pub fn expected(&self) -> Decomposition {
        Decomposition::from_counts(self.shapes.iter().map(|s| (s.clone(), 1)))
    }
}

fn small(k: i8) -> Q {
    Q::from_ints((k % 3) as i64, (k / 3 % 2) as i64)
}

/// `L·U` with unit diagonals, so always invertible.
fn unimodular(n: usize, coeffs: &mut impl Iterator<Item = i8>) -> Matrix {
    let mut l = Matrix::identity(n);
    let mut u = Matrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            l.set(i, j, small(coeffs.next().unwrap_or(0)));
            u.set(j, i, small(coeffs.next().unwrap_or(0)));
        }
    }
    l.mul(&u)
}

pub fn scrambled() -> impl Strategy<Value = Scrambled> {
    (prop::collection::vec(shape(), 1..6), prop::collection::vec(any::<i8>(), 64)).prop_map(|(shapes, noise)| {
        let plain = Decomposition::from_counts(shapes.iter().map(|s| (s.clone(), 1)))
            .to_complex()
            .expect("shape complex");
        let mut it = noise.into_iter().cycle();
        let g: BTreeMap<Bidegree, Matrix> = plain.bidegrees().map(|bd| (bd, unimodular(plain.dim(bd), &mut it))).collect();
        Scrambled {
            complex: plain.change_basis(&g).expect("invertible"),
            shapes,
        }
    })
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

fn cells(b: &Bicomplex) -> Vec<Bidegree> {
    let Some((p0, p1, q0, q1)) = b.bounding_box() else {
        return Vec::new();
    };
    (p0 - 1..=p1 + 1).flat_map(|p| (q0 - 1..=q1 + 1).map(move |q| (p, q))).collect()
}

/// Scrambled sums validate; doubling one arrow of a square breaks
/// anticommutation there and nowhere else.
pub fn validation_identities() -> Result<(), String> {
    runner()
        .run(&(scrambled(), 0i32..3, 0i32..3), |(s, p, q)| {
            check(s.complex.validate().is_empty(), || format!("{:?}", s.complex.validate()))?;
            let b = s.complex.direct_sum(&shape_complex(&Shape::square((p, q))).expect("square"));
            check(b.is_valid(), || "square sum invalid".into())?;
            let mut broken = b.clone();
            let mut m = broken.del_at((p, q));
            let last = m.cols - 1;
            let row = m.rows - 1;
            m.set(row, last, Q::from_ints(2, 0));
            broken.set_del((p, q), m);
            let v = broken.validate();
            check(
                v.iter().any(|x| x.kind == ViolationKind::Anticommute && x.bidegree == (p, q))
                    && v.iter().all(|x| x.kind != ViolationKind::DelDel && x.kind != ViolationKind::DelbarDelbar),
                || format!("{v:?}"),
            )
        })
        .map_err(|e| e.to_string())
}

pub fn decomposition_roundtrip() -> Result<(), String> {
    runner()
        .run(&scrambled(), |s| {
            let d = decompose(&s.complex).map_err(|e| TestCaseError::fail(e.to_string()))?;
            check(d == s.expected(), || format!("got {d}, expected {}", s.expected()))
        })
        .map_err(|e| e.to_string())
}

pub fn counting_matches_direct() -> Result<(), String> {
    runner()
        .run(&scrambled(), |s| {
            let d = s.expected();
            for bd in cells(&s.complex) {
                for f in FLAVORS {
                    let (a, b) = (cohomology_counts(&d, f, bd.0, bd.1), dimension(&s.complex, f, bd));
                    check(a == b, || format!("{f:?} at {bd:?}: counted {a}, direct {b}"))?;
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn euler_characteristic() -> Result<(), String> {
    runner()
        .run(&scrambled(), |s| {
            let b = &s.complex;
            let sign = |k: i32| if k.rem_euclid(2) == 0 { 1i64 } else { -1 };
            let all = cells(b);
            let ps: std::collections::BTreeSet<i32> = all.iter().map(|c| c.0).collect();
            for p in ps {
                let col = all.iter().filter(|c| c.0 == p);
                let chain: i64 = col.clone().map(|&c| sign(c.1) * b.dim(c) as i64).sum();
                let coh: i64 = col.map(|&c| sign(c.1) * dimension(b, Flavor::Dolbeault, c) as i64).sum();
                check(chain == coh, || format!("column p={p}: {chain} vs {coh}"))?;
            }
            let total: i64 = all.iter().map(|&c| sign(c.0 + c.1) * b.dim(c) as i64).sum();
            let Some((p0, p1, q0, q1)) = b.bounding_box() else {
                return Ok(());
            };
            let dr: i64 = (p0 + q0..=p1 + q1).map(|k| sign(k) * de_rham_dimension(b, k) as i64).sum();
            check(total == dr, || format!("total {total} vs de Rham {dr}"))
        })
        .map_err(|e| e.to_string())
}

pub fn zigzag_inequality() -> Result<(), String> {
    runner()
        .run(&scrambled(), |s| {
            for bd in cells(&s.complex) {
                let h = |f| dimension(&s.complex, f, bd);
                let (bc, a, d, db) = (h(Flavor::BottChern), h(Flavor::Aeppli), h(Flavor::ConjDolbeault), h(Flavor::Dolbeault));
                check(bc + a >= d + db, || format!("{bd:?}: {bc}+{a} < {d}+{db}"))?;
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn conjugation_symmetry() -> Result<(), String> {
    runner()
        .run(&scrambled(), |s| {
            let b = s.complex.direct_sum(&s.complex.conjugate());
            check(b.is_valid(), || "conjugate sum invalid".into())?;
            for (p, q) in cells(&b) {
                for f in [Flavor::BottChern, Flavor::Aeppli] {
                    let (x, y) = (dimension(&b, f, (p, q)), dimension(&b, f, (q, p)));
                    check(x == y, || format!("{f:?} ({p},{q})={x} but ({q},{p})={y}"))?;
                }
                let (x, y) = (dimension(&b, Flavor::Dolbeault, (p, q)), dimension(&b, Flavor::ConjDolbeault, (q, p)));
                check(x == y, || format!("dbar ({p},{q})={x} but del ({q},{p})={y}"))?;
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

struct MasseyFixture {
    alg: FormAlgebra,
    triple: [&'static str; 3],
}

fn fixtures() -> Vec<MasseyFixture> {
    [
        (Family::G1, "i", ["T dz_{32'}", "Tb^-1 dz_{1'3'}", "Tb dz_{23'}"]),
        (Family::G1, "ii", ["T^-2 dz_{131'}", "Tb^2 dz_{22'3'}", "dz_{3'}"]),
        (Family::G8, "ii", ["Tb^-1 dz_{1'3'}", "Tb dz_{2'3'}", "T^-1 dz_{13}"]),
    ]
    .into_iter()
    .map(|(f, c, triple)| MasseyFixture {
        alg: build_closure(&preset_case(f, c).expect("preset")).expect("closure"),
        triple,
    })
    .collect()
}

fn combine(bd: Bidegree, dim: usize, basis: &[Vec<Q>], noise: &[i8]) -> CochainElement {
    let mut coeffs = vec![Q::zero(); dim];
    for (v, &k) in basis.iter().zip(noise.iter().cycle()) {
        let c = small(k);
        for (x, y) in coeffs.iter_mut().zip(v) {
            *x += &(&c * y);
        }
    }
    CochainElement { bidegree: bd, coeffs }
}

fn add(a: &CochainElement, b: &CochainElement) -> CochainElement {
    CochainElement {
        bidegree: a.bidegree,
        coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
    }
}

/// Shifting either primitive by a `∂∂̄`-closed form keeps the verdict and
/// the class in the quotient.
pub fn massey_invariance() -> Result<(), String> {
    let fx = fixtures();
    let prepared: Vec<_> = fx
        .iter()
        .map(|f| {
            let ctx = MasseyContext::new(&f.alg);
            let cls: Vec<BottChernClass> = f.triple.iter().map(|t| BottChernClass::parse(&f.alg, t).expect("class")).collect();
            let base = ctx.massey(&cls[0], &cls[1], &cls[2]).expect("defined");
            (ctx, cls, base)
        })
        .collect();
    runner()
        .run(&(0..prepared.len(), prop::collection::vec(any::<i8>(), 1..12), prop::collection::vec(any::<i8>(), 1..12)), |(i, n13, n24)| {
            let (ctx, cls, base) = &prepared[i];
            let alg = &fx[i].alg;
            let b = &alg.complex;
            let (a13, a24) = &base.primitives;
            let h13 = combine(a13.bidegree, b.dim(a13.bidegree), &ctx.indeterminacy(a13.bidegree), &n13);
            let h24 = combine(a24.bidegree, b.dim(a24.bidegree), &ctx.indeterminacy(a24.bidegree), &n24);
            let m = ctx
                .massey_with_primitives(&cls[0], &cls[1], &cls[2], add(a13, &h13), add(a24, &h24))
                .map_err(|e| TestCaseError::fail(e.to_string()))?;
            check(m.nonvanishing == base.nonvanishing && m.quotient_dimension == base.quotient_dimension, || {
                format!("verdict changed for triple {i}")
            })?;
            let diff: Vec<Q> = m.representative.coeffs.iter().zip(&base.representative.coeffs).map(|(x, y)| x - y).collect();
            let mut extra = Vec::new();
            for h in ctx.indeterminacy(a24.bidegree) {
                let h = CochainElement { bidegree: a24.bidegree, coeffs: h };
                extra.push(alg.wedge(&cls[0].representative, &h).expect("wedge").coeffs);
            }
            for h in ctx.indeterminacy(a13.bidegree) {
                let h = CochainElement { bidegree: a13.bidegree, coeffs: h };
                extra.push(alg.wedge(&h, &cls[2].representative).expect("wedge").coeffs);
            }
            check(in_images_plus(b, m.representative.bidegree, &diff, &extra), || format!("class moved for triple {i}"))
        })
        .map_err(|e| e.to_string())
}
