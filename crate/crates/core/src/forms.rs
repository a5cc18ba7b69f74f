//! Wedge monomials `f dz_I ∧ dz̄_K` with exponential multipliers.
//!
//! Holomorphic differentials are always written before antiholomorphic ones;
//! moving `dz̄_k` across `r` holomorphic factors costs `(-1)^r`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::ParseError;
use crate::scalar::GaussianRational;

/// `+1` or `-1`.
pub type Sign = i32;

/// Strictly increasing list of 1-based coordinate indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexSet(Vec<u32>);

impl IndexSet {
    pub fn empty() -> Self {
        IndexSet(Vec::new())
    }

    /// Sorts and checks for repeats; `None` if an index repeats or is 0.
    pub fn new(mut v: Vec<u32>) -> Option<Self> {
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) || v.first() == Some(&0) {
            return None;
        }
        Some(IndexSet(v))
    }

    pub fn singleton(k: u32) -> Self {
        IndexSet(vec![k])
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, k: u32) -> bool {
        self.0.binary_search(&k).is_ok()
    }

    /// All subsets of `{1..=n}` with `size` elements, in lexicographic order.
    pub fn subsets(n: u32, size: usize) -> Vec<IndexSet> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(size);
        fn rec(start: u32, n: u32, size: usize, cur: &mut Vec<u32>, out: &mut Vec<IndexSet>) {
            if cur.len() == size {
                out.push(IndexSet(cur.clone()));
                return;
            }
            for k in start..=n {
                cur.push(k);
                rec(k + 1, n, size, cur, out);
                cur.pop();
            }
        }
        rec(1, n, size, &mut cur, &mut out);
        out
    }
}

/// Sorted union of `a` and `b` with the sign of the shuffle taking `a ++ b`
/// to sorted order; `None` if they share an index.
pub fn merge_with_sign(a: &IndexSet, b: &IndexSet) -> Option<(IndexSet, Sign)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut inversions = 0usize;
    while i < a.0.len() || j < b.0.len() {
        if j == b.0.len() || (i < a.0.len() && a.0[i] < b.0[j]) {
            out.push(a.0[i]);
            i += 1;
        } else if i == a.0.len() || b.0[j] < a.0[i] {
            // b[j] jumps over the remaining elements of a
            inversions += a.0.len() - i;
            out.push(b.0[j]);
            j += 1;
        } else {
            return None;
        }
    }
    let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
    Some((IndexSet(out), sign))
}

/// `dz_k ∧ dz_a`, i.e. `merge_with_sign({k}, a)`.
pub fn insert_with_sign(k: u32, a: &IndexSet) -> Option<(IndexSet, Sign)> {
    merge_with_sign(&IndexSet::singleton(k), a)
}

fn parity(k: usize) -> Sign {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// The form `exp(Λ·z + M·z̄) dz_I ∧ dz̄_K`.
///
/// `hol_exp` and `antihol_exp` have one entry per coordinate (fiber and base
/// alike); distinct generators are linearly independent forms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub hol_exp: Vec<GaussianRational>,
    pub antihol_exp: Vec<GaussianRational>,
    pub hol: IndexSet,
    pub antihol: IndexSet,
}

impl Generator {
    /// The constant function 1 on `coords` coordinates.
    pub fn unit(coords: usize) -> Self {
        Generator {
            hol_exp: vec![GaussianRational::zero(); coords],
            antihol_exp: vec![GaussianRational::zero(); coords],
            hol: IndexSet::empty(),
            antihol: IndexSet::empty(),
        }
    }

    pub fn coords(&self) -> usize {
        self.hol_exp.len()
    }

    pub fn bidegree(&self) -> (i32, i32) {
        (self.hol.len() as i32, self.antihol.len() as i32)
    }

    pub fn has_trivial_multiplier(&self) -> bool {
        self.hol_exp.iter().chain(&self.antihol_exp).all(|c| c.is_zero())
    }

    /// `self ∧ other = sign * product`, or `None` when a differential repeats.
    pub fn wedge(&self, other: &Generator) -> Option<(Generator, Sign)> {
        let (hol, s1) = merge_with_sign(&self.hol, &other.hol)?;
        let (antihol, s2) = merge_with_sign(&self.antihol, &other.antihol)?;
        let cross = parity(self.antihol.len() * other.hol.len());
        let add = |a: &[GaussianRational], b: &[GaussianRational]| -> Vec<GaussianRational> {
            a.iter().zip(b).map(|(x, y)| x + y).collect()
        };
        Some((
            Generator {
                hol_exp: add(&self.hol_exp, &other.hol_exp),
                antihol_exp: add(&self.antihol_exp, &other.antihol_exp),
                hol,
                antihol,
            },
            s1 * s2 * cross,
        ))
    }

    /// `∂` of the form as a list of `(coefficient, generator)`.
    pub fn del(&self) -> Vec<(GaussianRational, Generator)> {
        let mut out = Vec::new();
        for (k, lam) in self.hol_exp.iter().enumerate() {
            if lam.is_zero() {
                continue;
            }
            if let Some((hol, s)) = insert_with_sign(k as u32 + 1, &self.hol) {
                let mut g = self.clone();
                g.hol = hol;
                out.push((lam.scale_int(s as i64), g));
            }
        }
        out
    }

    /// `∂̄` of the form as a list of `(coefficient, generator)`.
    pub fn delbar(&self) -> Vec<(GaussianRational, Generator)> {
        let mut out = Vec::new();
        let cross = parity(self.hol.len());
        for (k, mu) in self.antihol_exp.iter().enumerate() {
            if mu.is_zero() {
                continue;
            }
            if let Some((antihol, s)) = insert_with_sign(k as u32 + 1, &self.antihol) {
                let mut g = self.clone();
                g.antihol = antihol;
                out.push((mu.scale_int((s * cross) as i64), g));
            }
        }
        out
    }

    /// Complex conjugate: `conj(self) = sign * result`.
    pub fn conjugate(&self) -> (Generator, Sign) {
        let conj = |v: &[GaussianRational]| v.iter().map(|c| c.conj()).collect::<Vec<_>>();
        (
            Generator {
                hol_exp: conj(&self.antihol_exp),
                antihol_exp: conj(&self.hol_exp),
                hol: self.antihol.clone(),
                antihol: self.hol.clone(),
            },
            parity(self.hol.len() * self.antihol.len()),
        )
    }

    /// Exponents `(a, b)` with multiplier `T^a T̄^b`, `T = exp(c·z)`.
    pub fn t_exponents(&self, c: &[GaussianRational]) -> Option<(i64, i64)> {
        let cbar: Vec<_> = c.iter().map(|x| x.conj()).collect();
        Some((multiple_of(&self.hol_exp, c)?, multiple_of(&self.antihol_exp, &cbar)?))
    }

    /// Text rendering, e.g. `T^-1 T̄ dz_{12̄3̄}`.
    pub fn render(&self, unit: Option<&[GaussianRational]>) -> String {
        let mut out = String::new();
        match unit.and_then(|c| self.t_exponents(c)) {
            Some((a, b)) => {
                push_power(&mut out, "T", a, false);
                push_power(&mut out, "T\u{304}", b, false);
            }
            None => {
                if !self.has_trivial_multiplier() {
                    out.push_str(&self.exp_text());
                    out.push(' ');
                }
            }
        }
        if self.hol.is_empty() && self.antihol.is_empty() {
            if out.is_empty() {
                return "1".into();
            }
            return out.trim_end().to_string();
        }
        out.push_str("dz_");
        let wide = self.coords() > 9;
        let mut idx = String::new();
        let mut first = true;
        for (set, bar) in [(&self.hol, false), (&self.antihol, true)] {
            for k in set.indices() {
                if wide && !first {
                    idx.push(',');
                }
                let _ = write!(idx, "{k}");
                if bar {
                    idx.push('\u{304}');
                }
                first = false;
            }
        }
        if idx.chars().filter(|c| *c != '\u{304}').count() == 1 {
            out.push_str(&idx);
        } else {
            let _ = write!(out, "{{{idx}}}");
        }
        out
    }

    /// LaTeX rendering, e.g. `T^{-1}\bar{T}dz_{1\bar{2}\bar{3}}`.
    pub fn render_latex(&self, unit: Option<&[GaussianRational]>) -> String {
        let mut out = String::new();
        match unit.and_then(|c| self.t_exponents(c)) {
            Some((a, b)) => {
                push_power(&mut out, "T", a, true);
                push_power(&mut out, "\\bar{T}", b, true);
            }
            None => {
                if !self.has_trivial_multiplier() {
                    out.push_str(&self.exp_text());
                }
            }
        }
        if self.hol.is_empty() && self.antihol.is_empty() {
            return if out.is_empty() { "1".into() } else { out };
        }
        out.push_str("dz_{");
        let wide = self.coords() > 9;
        let mut first = true;
        for (set, bar) in [(&self.hol, false), (&self.antihol, true)] {
            for k in set.indices() {
                if wide && !first {
                    out.push(',');
                }
                if bar {
                    let _ = write!(out, "\\bar{{{k}}}");
                } else {
                    let _ = write!(out, "{k}");
                }
                first = false;
            }
        }
        out.push('}');
        out
    }

    fn exp_text(&self) -> String {
        let mut terms = Vec::new();
        for (k, c) in self.hol_exp.iter().enumerate() {
            if !c.is_zero() {
                terms.push(format!("({c})z{}", k + 1));
            }
        }
        for (k, c) in self.antihol_exp.iter().enumerate() {
            if !c.is_zero() {
                terms.push(format!("({c})z\u{304}{}", k + 1));
            }
        }
        format!("e^{{{}}}", terms.join("+"))
    }
}

fn multiple_of(v: &[GaussianRational], c: &[GaussianRational]) -> Option<i64> {
    let mut k: Option<i64> = None;
    for (x, y) in v.iter().zip(c) {
        if y.is_zero() {
            if !x.is_zero() {
                return None;
            }
            continue;
        }
        let m = x.as_integer_multiple_of(y)?;
        if *k.get_or_insert(m) != m {
            return None;
        }
    }
    Some(k.unwrap_or(0))
}

fn push_power(out: &mut String, base: &str, e: i64, latex: bool) {
    match e {
        0 => {}
        1 => out.push_str(base),
        _ if latex => {
            let _ = write!(out, "{base}^{{{e}}}");
        }
        _ => {
            let _ = write!(out, "{base}^{e}");
        }
    }
    if e != 0 && !latex {
        out.push(' ');
    }
}

/// Parse a monomial in the notation produced by [`Generator::render`].
///
/// Accepts an optional leading sign, `T`/`T̄` powers (`Tb`, `\bar{T}` and
/// `^{k}` are also accepted) and `dz_{...}` where a bar is written as a
/// combining macron, a trailing `'`, or `\bar{k}`. Factors may come in any
/// order; the returned coefficient absorbs the reordering sign.
pub fn parse_generator(
    s: &str,
    coords: usize,
    unit: Option<&[GaussianRational]>,
) -> Result<(GaussianRational, Generator), ParseError> {
    MonomialParser {
        src: s,
        chars: s.char_indices().collect(),
        pos: 0,
        coords,
        unit,
    }
    .parse()
}

struct MonomialParser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
    coords: usize,
    unit: Option<&'a [GaussianRational]>,
}

impl MonomialParser<'_> {
    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.src.len(), |c| c.0)
    }

    fn err(&self, msg: &str) -> ParseError {
        ParseError::at(self.src, self.offset(), msg)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace() || c == '*' || c == '\\' && self.rest().starts_with("\\,")) {
            if self.peek() == Some('\\') {
                self.pos += 1;
            }
            self.pos += 1;
        }
    }

    fn rest(&self) -> String {
        self.chars[self.pos.min(self.chars.len())..].iter().map(|c| c.1).collect()
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.rest().starts_with(lit) {
            self.pos += lit.chars().count();
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        let braced = self.eat("{");
        let neg = self.eat("-");
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer exponent"));
        }
        let text: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
        let v: i64 = text.parse().map_err(|_| self.err("exponent out of range"))?;
        if braced && !self.eat("}") {
            return Err(self.err("expected '}'"));
        }
        Ok(if neg { -v } else { v })
    }

    fn bar_suffix(&mut self) -> bool {
        matches!(self.peek(), Some('\u{304}') | Some('\u{305}') | Some('\''))
            && {
                self.pos += 1;
                true
            }
    }

    fn parse(mut self) -> Result<(GaussianRational, Generator), ParseError> {
        let mut coeff = GaussianRational::one();
        let mut hol = vec![GaussianRational::zero(); self.coords];
        let mut antihol = vec![GaussianRational::zero(); self.coords];
        let mut gen = Generator::unit(self.coords);
        self.skip_ws();
        if self.eat("-") {
            coeff = -coeff;
        } else {
            self.eat("+");
        }
        let mut saw_anything = false;
        loop {
            self.skip_ws();
            if self.pos >= self.chars.len() {
                break;
            }
            saw_anything = true;
            let start_err = self.err("unknown token");
            let conj_t = if self.eat("T\u{304}") || self.eat("Tb") || self.eat("\\bar{T}") || self.eat("\\barT") || self.eat("\\bar T") {
                Some(true)
            } else if self.eat("T") {
                Some(false)
            } else {
                None
            };
            if let Some(is_bar) = conj_t {
                let e = if self.eat("^") { self.integer()? } else { 1 };
                let c = self
                    .unit
                    .ok_or_else(|| self.err("T used but this complex has no T unit"))?;
                for k in 0..self.coords {
                    if is_bar {
                        antihol[k] += &c[k].conj().scale_int(e);
                    } else {
                        hol[k] += &c[k].scale_int(e);
                    }
                }
                continue;
            }
            if self.eat("dz") {
                self.eat("_");
                let braced = self.eat("{");
                let mut factors: Vec<(u32, bool)> = Vec::new();
                loop {
                    self.skip_ws();
                    if braced && self.eat("}") {
                        break;
                    }
                    if !braced && !factors.is_empty() {
                        break;
                    }
                    if self.eat(",") {
                        continue;
                    }
                    let bar_prefix = self.eat("\\bar");
                    let inner_brace = bar_prefix && self.eat("{");
                    let start = self.pos;
                    let wide = braced && (self.coords > 9 || self.rest().contains(','));
                    if wide || inner_brace {
                        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                            self.pos += 1;
                        }
                    } else if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                        self.pos += 1;
                    }
                    if start == self.pos {
                        return Err(self.err("expected a coordinate index"));
                    }
                    let text: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
                    let k: u32 = text.parse().map_err(|_| self.err("bad index"))?;
                    if k == 0 || k as usize > self.coords {
                        return Err(self.err("coordinate index out of range"));
                    }
                    if inner_brace && !self.eat("}") {
                        return Err(self.err("expected '}'"));
                    }
                    let bar = bar_prefix | self.bar_suffix();
                    factors.push((k, bar));
                }
                for (k, bar) in factors {
                    let mut f = Generator::unit(self.coords);
                    if bar {
                        f.antihol = IndexSet::singleton(k);
                    } else {
                        f.hol = IndexSet::singleton(k);
                    }
                    match gen.wedge(&f) {
                        Some((g, s)) => {
                            gen = g;
                            if s < 0 {
                                coeff = -coeff;
                            }
                        }
                        None => return Err(self.err("repeated differential")),
                    }
                }
                continue;
            }
            if self.eat("1") {
                continue;
            }
            return Err(start_err);
        }
        if !saw_anything {
            return Err(self.err("empty monomial"));
        }
        gen.hol_exp = hol;
        gen.antihol_exp = antihol;
        Ok((coeff, gen))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[u32]) -> IndexSet {
        IndexSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn merge_examples() {
        assert_eq!(merge_with_sign(&set(&[1]), &set(&[2])), Some((set(&[1, 2]), 1)));
        assert_eq!(merge_with_sign(&set(&[2]), &set(&[1])), Some((set(&[1, 2]), -1)));
        assert_eq!(merge_with_sign(&set(&[1]), &set(&[1])), None);
    }

    #[test]
    fn insert_examples() {
        assert_eq!(insert_with_sign(3, &set(&[1, 2])), Some((set(&[1, 2, 3]), 1)));
        assert_eq!(insert_with_sign(1, &set(&[2, 3])), Some((set(&[1, 2, 3]), 1)));
        assert_eq!(insert_with_sign(2, &set(&[1, 2])), None);
        assert_eq!(insert_with_sign(2, &set(&[1, 3])), Some((set(&[1, 2, 3]), -1)));
    }

    fn unit() -> Vec<GaussianRational> {
        vec![GaussianRational::zero(), GaussianRational::zero(), GaussianRational::from_ints(2, 0)]
    }

    #[test]
    fn render_and_parse_round_trip() {
        let c = unit();
        for s in ["T^-1 T\u{304} dz_{12\u{304}3\u{304}}", "T dz_{32\u{304}}", "dz_3", "dz_3\u{304}", "1", "T^-2 T\u{304}^2 dz_{121\u{304}2\u{304}}"] {
            let (k, g) = parse_generator(s, 3, Some(&c)).unwrap();
            assert!(k.is_one());
            assert_eq!(g.render(Some(&c)), s);
        }
    }

    #[test]
    fn parse_accepts_ascii_bars_and_reorders() {
        let c = unit();
        let (k, g) = parse_generator("Tb^-1 dz_{1'3'}", 3, Some(&c)).unwrap();
        assert!(k.is_one());
        assert_eq!(g.render(Some(&c)), "T\u{304}^-1 dz_{1\u{304}3\u{304}}");
        let (k, g) = parse_generator("dz_{1'3}", 3, Some(&c)).unwrap();
        assert_eq!(k, GaussianRational::from_ints(-1, 0));
        assert_eq!(g.render(None), "dz_{31\u{304}}");
        assert!(parse_generator("dz_{11}", 3, Some(&c)).is_err());
        assert!(parse_generator("dz_{4}", 3, Some(&c)).is_err());
        assert!(parse_generator("T dz_1", 3, None).is_err());
    }

    #[test]
    fn latex_rendering() {
        let c = unit();
        let (_, g) = parse_generator("T^-1 Tb dz_{12'3'}", 3, Some(&c)).unwrap();
        assert_eq!(g.render_latex(Some(&c)), "T^{-1}\\bar{T}dz_{1\\bar{2}\\bar{3}}");
    }

    #[test]
    fn del_uses_exponent_coefficients() {
        let c = unit();
        let (_, g) = parse_generator("T^-1 dz_1", 3, Some(&c)).unwrap();
        let d = g.del();
        assert_eq!(d.len(), 1);
        // dz_3 ∧ dz_1 = -dz_{13}, coefficient -2 from T^-1
        assert_eq!(d[0].0, GaussianRational::from_ints(2, 0));
        assert_eq!(d[0].1.render(Some(&c)), "T^-1 dz_{13}");
        assert!(g.delbar().is_empty());
    }

    #[test]
    fn conjugation_sign() {
        let c = unit();
        let (_, g) = parse_generator("T dz_{32'}", 3, Some(&c)).unwrap();
        let (h, s) = g.conjugate();
        assert_eq!(s, -1);
        assert_eq!(h.render(Some(&c)), "T\u{304} dz_{23\u{304}}");
        assert_eq!(h.conjugate(), (g, -1));
    }
}
