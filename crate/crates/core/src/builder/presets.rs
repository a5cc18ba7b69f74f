//! The three families with `n = 1`, `m = 2` and their lattice cases.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{Character, SplittingData, TrivialitySubgroup};
use crate::error::{Error, Result};
use crate::scalar::GaussianRational as Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "g1")]
    G1,
    #[serde(rename = "g2_alpha0")]
    G2Alpha0,
    #[serde(rename = "g2")]
    G2AlphaPos,
    #[serde(rename = "g8")]
    G8,
}

impl Family {
    pub fn token(self) -> &'static str {
        match self {
            Family::G1 => "g1",
            Family::G2Alpha0 => "g2_alpha0",
            Family::G2AlphaPos => "g2",
            Family::G8 => "g8",
        }
    }

    pub fn cases(self) -> &'static [&'static str] {
        match self {
            Family::G1 => &["i", "ii", "iii"],
            Family::G2Alpha0 => &["pi/2", "pi/3"],
            Family::G2AlphaPos => &["odd", "even", "generic"],
            Family::G8 => &["i", "ii", "iii", "iv", "v", "vi", "vii"],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "g1" => Ok(Family::G1),
            "g2_alpha0" | "g2_0" | "g2^0" => Ok(Family::G2Alpha0),
            "g2" | "g2_alpha" | "g2_alpha_pos" => Ok(Family::G2AlphaPos),
            "g8" => Ok(Family::G8),
            other => Err(Error::InvalidCase(format!("unknown family {other:?}"))),
        }
    }
}

/// The fifteen distinct cases, in table order.
pub const ALL_CASES: &[(Family, &str)] = &[
    (Family::G1, "i"),
    (Family::G1, "ii"),
    (Family::G1, "iii"),
    (Family::G2Alpha0, "pi/2"),
    (Family::G2Alpha0, "pi/3"),
    (Family::G2AlphaPos, "odd"),
    (Family::G2AlphaPos, "even"),
    (Family::G2AlphaPos, "generic"),
    (Family::G8, "i"),
    (Family::G8, "ii"),
    (Family::G8, "iii"),
    (Family::G8, "iv"),
    (Family::G8, "v"),
    (Family::G8, "vi"),
    (Family::G8, "vii"),
];

/// Which of `β₁`, `γ₁`, `β₁γ₁`, `β₁γ₁⁻¹` restrict to 1 on the lattice.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CaseFlags {
    pub beta1_trivial: bool,
    pub gamma1_trivial: bool,
    pub beta1gamma1_trivial: bool,
    pub beta1gamma1inv_trivial: bool,
}

const FLAG_VECTORS: [[i64; 2]; 4] = [[1, 0], [0, 1], [1, 1], [1, -1]];

impl CaseFlags {
    pub fn new(beta1: bool, gamma1: bool, beta1gamma1: bool, beta1gamma1inv: bool) -> Self {
        CaseFlags {
            beta1_trivial: beta1,
            gamma1_trivial: gamma1,
            beta1gamma1_trivial: beta1gamma1,
            beta1gamma1inv_trivial: beta1gamma1inv,
        }
    }

    fn as_array(&self) -> [bool; 4] {
        [self.beta1_trivial, self.gamma1_trivial, self.beta1gamma1_trivial, self.beta1gamma1inv_trivial]
    }

    /// The subgroup of `Z²` in `(s₁, t₁)` generated by the true flags.
    pub fn reduced_subgroup(&self) -> TrivialitySubgroup {
        let gens = FLAG_VECTORS
            .iter()
            .zip(self.as_array())
            .filter(|(_, f)| *f)
            .map(|(v, _)| v.to_vec())
            .collect();
        TrivialitySubgroup::new(2, gens)
    }

    /// Closed under the group law: no flag is implied without being set.
    pub fn is_consistent(&self) -> bool {
        let g = self.reduced_subgroup();
        FLAG_VECTORS.iter().zip(self.as_array()).all(|(v, f)| g.contains(v) == f)
    }

    /// The subgroup of `Z⁴` in `(s₁, s₂, t₁, t₂)`, using `β₂ = β₁⁻¹`, `γ₂ = γ₁⁻¹`.
    pub fn subgroup(&self) -> TrivialitySubgroup {
        let mut gens = vec![vec![1, 1, 0, 0], vec![0, 0, 1, 1]];
        for (v, f) in FLAG_VECTORS.iter().zip(self.as_array()) {
            if f {
                gens.push(vec![v[0], 0, v[1], 0]);
            }
        }
        TrivialitySubgroup::new(4, gens)
    }

    /// Flags of a case of Theorem-style enumeration `i..vii` for `g8`.
    pub fn g8_case(token: &str) -> Result<Self> {
        Ok(match token {
            "i" => CaseFlags::new(false, false, false, false),
            "ii" => CaseFlags::new(true, false, false, false),
            "iii" => CaseFlags::new(false, true, false, false),
            "iv" => CaseFlags::new(false, false, false, true),
            "v" => CaseFlags::new(false, false, true, false),
            "vi" => CaseFlags::new(false, false, true, true),
            "vii" => CaseFlags::new(true, true, true, true),
            other => return Err(Error::InvalidCase(format!("unknown g8 case {other:?}"))),
        })
    }

    /// The `g8` case token with these flags.
    pub fn g8_name(&self) -> Option<&'static str> {
        ["i", "ii", "iii", "iv", "v", "vi", "vii"]
            .into_iter()
            .find(|t| CaseFlags::g8_case(t).ok() == Some(*self))
    }
}

fn holo(c: Q) -> Character {
    Character::holomorphic(vec![c])
}

fn data(c: Q, flags: &CaseFlags) -> SplittingData {
    let slots = vec![holo(-&c), holo(c.clone())];
    SplittingData {
        n: 1,
        m: 2,
        b_factors: slots.clone(),
        bbar_factors: slots,
        triviality: flags.subgroup(),
        unit: if c.is_zero() { None } else { Some(vec![Q::zero(), Q::zero(), c]) },
    }
}

/// Splitting data with the representative constant `c` of each family.
pub fn preset(family: Family, flags: &CaseFlags) -> Result<SplittingData> {
    if !flags.is_consistent() {
        return Err(Error::InvalidCase(format!("inconsistent flags {flags:?}")));
    }
    let c = match family {
        Family::G1 | Family::G2AlphaPos => Q::from_ints(2, 0),
        Family::G2Alpha0 => Q::zero(),
        Family::G8 if flags.g8_name() == Some("v") => Q::from_ints(-2, 2),
        Family::G8 => Q::from_ints(0, 2),
    };
    Ok(data(c, flags))
}

/// Presets by case token (see [`Family::cases`]; `g1` also takes `r=…`,
/// `g2` takes `q=…`).
pub fn preset_case(family: Family, token: &str) -> Result<SplittingData> {
    preset(family, &case_flags(family, token)?)
}

pub fn case_flags(family: Family, token: &str) -> Result<CaseFlags> {
    let t = token.trim();
    match family {
        Family::G8 => CaseFlags::g8_case(t),
        Family::G1 => match t {
            "i" => Ok(classify_g1(Some(&BigRational::zero()))),
            "ii" => Ok(classify_g1(Some(&BigRational::one()))),
            "iii" | "generic" => Ok(classify_g1(None)),
            _ => match t.strip_prefix("r=") {
                Some(r) => Ok(classify_g1(parse_rational_or_generic(r)?.as_ref())),
                None => Err(Error::InvalidCase(format!("unknown g1 case {t:?}"))),
            },
        },
        Family::G2AlphaPos => match t {
            "odd" => Ok(classify_g2(Some(&BigRational::from_integer(3.into())))),
            "even" => Ok(classify_g2(Some(&BigRational::from_integer(2.into())))),
            "generic" => Ok(classify_g2(None)),
            _ => match t.strip_prefix("q=") {
                Some(q) => Ok(classify_g2(parse_rational_or_generic(q)?.as_ref())),
                None => Err(Error::InvalidCase(format!("unknown g2 case {t:?}"))),
            },
        },
        Family::G2Alpha0 => classify_g2_alpha0(t),
    }
}

fn parse_rational_or_generic(s: &str) -> Result<Option<BigRational>> {
    if s.trim() == "generic" {
        return Ok(None);
    }
    let q: Q = s.parse().map_err(Error::Parse)?;
    if !q.is_real() {
        return Err(Error::InvalidCase(format!("{s} is not real")));
    }
    Ok(Some(q.re().clone()))
}

fn integer(x: &BigRational) -> Option<BigInt> {
    x.is_integer().then(|| x.to_integer())
}

/// `r` is `b` in units of `π/2`; `None` means not a rational multiple.
pub fn classify_g1(r: Option<&BigRational>) -> CaseFlags {
    match r.and_then(integer) {
        Some(k) if (&k % 2u32).is_zero() => CaseFlags::new(true, true, true, true),
        Some(_) => CaseFlags::new(false, false, true, true),
        None => CaseFlags::new(false, false, false, true),
    }
}

/// `q` is `b` in units of `π/(2 Re A_n)`; `None` means generic.
pub fn classify_g2(q: Option<&BigRational>) -> CaseFlags {
    match q.and_then(integer) {
        Some(k) if !(&k % 2u32).is_zero() => CaseFlags::new(true, true, true, true),
        Some(_) => CaseFlags::new(false, false, true, true),
        None => CaseFlags::new(false, false, false, true),
    }
}

/// `x₃ ∈ {π/2, π/3, π/4, π/6}`; `β₁γ₁⁻¹` is trivial only for `π/2`.
pub fn classify_g2_alpha0(x3: &str) -> Result<CaseFlags> {
    match x3.replace('π', "pi").replace(' ', "").as_str() {
        "pi/2" => Ok(CaseFlags::new(false, false, true, true)),
        "pi/3" | "pi/4" | "pi/6" => Ok(CaseFlags::new(false, false, true, false)),
        other => Err(Error::InvalidCase(format!("x3 = {other} is not an admissible value"))),
    }
}

/// The shape of `F_A(n)`: `π/(l·Im A)`-type real part and an optional
/// transcendental `log((n+√(n²−4))/2)` term. `l = None` stands for a
/// vanishing real part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDescriptor {
    pub l: Option<u32>,
    pub has_log: bool,
}

pub fn is_lattice_compatible(n: i64) -> (bool, Option<LatticeDescriptor>) {
    let d = |l: Option<u32>, has_log| Some(LatticeDescriptor { l, has_log });
    match n {
        ..=-3 => (true, d(Some(2), true)),
        -2 => (true, d(Some(2), false)),
        -1 => (true, d(Some(3), false)),
        0 => (true, d(Some(4), false)),
        1 => (true, d(Some(6), false)),
        2 => (false, None),
        _ => (true, d(None, true)),
    }
}

/// A lattice generator `z = π(x + i y) + (i/2)·L` with `L` transcendental
/// when present.
struct LatticeVector {
    x: BigRational,
    y: BigRational,
    has_log: bool,
}

/// `e^{i(α Re z + β Im z)}` for the four characters.
fn character_coefficients(a: &BigRational, t: &BigRational) -> [(BigRational, BigRational); 4] {
    let two = BigRational::from_integer(2.into());
    let four = BigRational::from_integer(4.into());
    let one = BigRational::one();
    [
        (-&two * (&one + t), &two * a),
        (-&two * (&one - t), &two * a),
        (-four.clone(), &four * a),
        (-&four * t, BigRational::zero()),
    ]
}

fn trivial_on(alpha: &BigRational, beta: &BigRational, v: &LatticeVector) -> bool {
    if v.has_log && !beta.is_zero() {
        return false;
    }
    let phase = (alpha * &v.x + beta * &v.y) / BigRational::from_integer(2.into());
    phase.is_integer()
}

/// Case flags for `A = a + it` (`a ∈ {0, 1}`) and the lattice spanned by
/// `F_A(n)` and `F_A(n')`.
pub fn classify_g8(a_param: &Q, n: i64, nprime: i64) -> Result<CaseFlags> {
    let a = a_param.re().clone();
    let t = a_param.im().clone();
    if !(a.is_zero() || a.is_one()) {
        return Err(Error::InvalidCase(format!("Re A = {a} is neither 0 nor 1")));
    }
    if t.is_zero() {
        return Err(Error::InvalidCase("Im A must be nonzero".into()));
    }
    if n == nprime {
        return Err(Error::InvalidCase(format!("n = n' = {n}")));
    }
    let vector = |k: i64| -> Result<LatticeVector> {
        let (ok, desc) = is_lattice_compatible(k);
        let desc = desc.filter(|_| ok).ok_or_else(|| Error::InvalidCase(format!("F_A({k}) = 0")))?;
        Ok(match desc.l {
            Some(l) => {
                let lt = &t * BigRational::from_integer(l.into());
                LatticeVector {
                    x: lt.recip(),
                    y: -&a / &lt,
                    has_log: desc.has_log,
                }
            }
            None => LatticeVector {
                x: BigRational::zero(),
                y: BigRational::zero(),
                has_log: true,
            },
        })
    };
    let (u, v) = (vector(n)?, vector(nprime)?);
    let special = |k: i64| (-2..=1).contains(&k);
    if (special(n) && special(nprime)) || (n >= 3 && nprime >= 3) {
        return Err(Error::InvalidCase(format!("F_A({n}) and F_A({nprime}) are real-linearly dependent")));
    }
    let coeffs = character_coefficients(&a, &t);
    let f = |i: usize| trivial_on(&coeffs[i].0, &coeffs[i].1, &u) && trivial_on(&coeffs[i].0, &coeffs[i].1, &v);
    let flags = CaseFlags::new(f(0), f(1), f(2), f(3));
    debug_assert!(flags.is_consistent());
    Ok(flags)
}

impl fmt::Display for CaseFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["β₁", "γ₁", "β₁γ₁", "β₁γ₁⁻¹"];
        let on: Vec<&str> = names.iter().zip(self.as_array()).filter(|(_, b)| *b).map(|(n, _)| *n).collect();
        if on.is_empty() {
            f.write_str("none trivial")
        } else {
            write!(f, "{} trivial", on.join(", "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Q {
        s.parse().unwrap()
    }

    #[test]
    fn g8_examples() {
        assert_eq!(classify_g8(&q("-i"), 0, 3).unwrap().g8_name(), Some("ii"));
        assert_eq!(classify_g8(&q("i"), 0, 3).unwrap().g8_name(), Some("iii"));
        assert_eq!(classify_g8(&q("1/3*i"), -2, 3).unwrap().g8_name(), Some("vii"));
        assert_eq!(classify_g8(&q("1/2*i"), -2, 3).unwrap().g8_name(), Some("vi"));
        assert_eq!(classify_g8(&q("1/2*i"), 3, 0).unwrap().g8_name(), Some("v"));
        assert!(classify_g8(&q("i"), 2, 3).is_err());
        assert!(classify_g8(&q("i"), 3, 3).is_err());
        assert!(classify_g8(&q("2+i"), 0, 3).is_err());
        assert!(classify_g8(&q("1"), 0, 3).is_err());
        assert!(classify_g8(&q("i"), 0, 1).is_err());
    }

    #[test]
    fn g8_flags_always_consistent() {
        for a in ["i", "-i", "1/2*i", "1/3*i", "2/5*i", "1+i", "1-1/2*i", "1+1/3*i", "7*i"] {
            for n in -5..6 {
                for np in -5..6 {
                    if let Ok(f) = classify_g8(&q(a), n, np) {
                        assert!(f.is_consistent(), "{a} {n} {np}");
                        assert!(f.g8_name().is_some());
                    }
                }
            }
        }
    }

    #[test]
    fn g2_and_g1() {
        let three = BigRational::from_integer(3.into());
        assert_eq!(classify_g2(Some(&three)), CaseFlags::new(true, true, true, true));
        assert_eq!(classify_g2(Some(&BigRational::from_integer(2.into()))), CaseFlags::new(false, false, true, true));
        assert_eq!(classify_g2(None), CaseFlags::new(false, false, false, true));
        assert_eq!(classify_g2(Some(&(three / BigRational::from_integer(2.into())))), CaseFlags::new(false, false, false, true));
        assert_eq!(classify_g1(Some(&BigRational::from_integer(4.into()))).g8_name(), Some("vii"));
        assert_eq!(classify_g1(Some(&BigRational::from_integer((-1).into()))).g8_name(), Some("vi"));
    }

    #[test]
    fn lattice_descriptors() {
        assert_eq!(is_lattice_compatible(3), (true, Some(LatticeDescriptor { l: None, has_log: true })));
        assert_eq!(is_lattice_compatible(-2), (true, Some(LatticeDescriptor { l: Some(2), has_log: false })));
        assert_eq!(is_lattice_compatible(2), (false, None));
    }

    #[test]
    fn flag_consistency() {
        assert!(!CaseFlags::new(true, true, false, false).is_consistent());
        assert!(CaseFlags::new(false, false, true, true).is_consistent());
        for t in Family::G8.cases() {
            assert!(CaseFlags::g8_case(t).unwrap().is_consistent());
        }
        let s = CaseFlags::g8_case("vi").unwrap().subgroup();
        assert!(s.contains(&[2, 0, 0, 0]));
        assert!(!s.contains(&[1, 0, 0, 0]));
        assert!(s.contains(&[1, 0, 0, 1]));
        assert!(preset(Family::G8, &CaseFlags::new(true, true, false, false)).is_err());
    }
}
