//! Structure equations in Salamon notation, e.g. `(e^{15},-e^{25},0)`.

use std::collections::BTreeMap;

use crate::error::{Error, ParseError, Result};
use crate::scalar::GaussianRational as Q;

/// `(i, j, k) ↦ c` with `de^k = Σ_{i<j} c_{ij}^k e^i ∧ e^j`, stored
/// antisymmetrically (`c_{ji}^k = −c_{ij}^k`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureConstants {
    pub dim: usize,
    pub constants: BTreeMap<(u32, u32, u32), Q>,
}

impl StructureConstants {
    pub fn get(&self, i: u32, j: u32, k: u32) -> Q {
        self.constants.get(&(i, j, k)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_abelian(&self) -> bool {
        self.constants.is_empty()
    }
}

/// Parses `(de^1, …, de^d)`. Coefficients are Gaussian rationals or names
/// from `bindings` (a leading backslash is ignored, so `\alpha` and
/// `alpha` coincide).
pub fn parse_salamon(s: &str, bindings: &BTreeMap<String, Q>) -> Result<StructureConstants> {
    let mut p = Salamon {
        src: s,
        chars: s.char_indices().collect(),
        pos: 0,
        bindings,
    };
    let entries = p.parse()?;
    let dim = entries.len();
    let mut constants = BTreeMap::new();
    for (k, terms) in entries.into_iter().enumerate() {
        for (at, c, i, j) in terms {
            if i == 0 || j == 0 || i as usize > dim || j as usize > dim {
                return Err(ParseError::at(s, at, format!("index out of range 1..{dim}")).into());
            }
            if i == j {
                return Err(ParseError::at(s, at, "repeated index in e^{ii}").into());
            }
            let (a, b, c) = if i < j { (i, j, c) } else { (j, i, -&c) };
            let k = k as u32 + 1;
            let e = constants.entry((a, b, k)).or_insert_with(Q::zero);
            *e += &c;
        }
    }
    let mut out = BTreeMap::new();
    for ((a, b, k), c) in constants {
        if !c.is_zero() {
            out.insert((b, a, k), -&c);
            out.insert((a, b, k), c);
        }
    }
    Ok(StructureConstants { dim, constants: out })
}

struct Salamon<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
    bindings: &'a BTreeMap<String, Q>,
}

type Term = (usize, Q, u32, u32);

impl Salamon<'_> {
    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.src.len(), |c| c.0)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        ParseError::at(self.src, self.offset(), msg).into()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn parse(&mut self) -> Result<Vec<Vec<Term>>> {
        self.expect('(')?;
        let mut entries = vec![self.entry()?];
        while self.eat(',') {
            entries.push(self.entry()?);
        }
        self.expect(')')?;
        self.skip_ws();
        if self.pos != self.chars.len() {
            return Err(self.err("trailing input"));
        }
        Ok(entries)
    }

    fn entry(&mut self) -> Result<Vec<Term>> {
        self.skip_ws();
        if self.peek() == Some('0') {
            let save = self.pos;
            self.pos += 1;
            self.skip_ws();
            if matches!(self.peek(), Some(',') | Some(')')) {
                return Ok(Vec::new());
            }
            self.pos = save;
        }
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            self.skip_ws();
            let sign = match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    Q::one()
                }
                Some('-') => {
                    self.pos += 1;
                    -Q::one()
                }
                _ if first => Q::one(),
                _ => break,
            };
            first = false;
            terms.push(self.term(sign)?);
        }
        if terms.is_empty() {
            return Err(self.err("expected a term"));
        }
        Ok(terms)
    }

    fn at_basis_form(&self) -> bool {
        self.peek() == Some('e') && self.chars.get(self.pos + 1).map(|c| c.1) == Some('^')
    }

    fn term(&mut self, sign: Q) -> Result<Term> {
        self.skip_ws();
        let mut coeff = sign;
        if !self.at_basis_form() {
            coeff *= &self.coefficient()?;
            self.eat('*');
        }
        self.skip_ws();
        let at = self.offset();
        if !(self.eat('e') && self.peek() == Some('^')) {
            return Err(self.err("expected e^{ij}"));
        }
        self.pos += 1;
        let digits: Vec<u32> = if self.eat('{') {
            let mut d = Vec::new();
            loop {
                self.skip_ws();
                match self.peek() {
                    Some('}') => {
                        self.pos += 1;
                        break;
                    }
                    Some(',') => self.pos += 1,
                    Some(c) if c.is_ascii_digit() => {
                        let start = self.pos;
                        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                            self.pos += 1;
                        }
                        let s: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
                        // without separators each digit is one index
                        d.push(s);
                    }
                    _ => return Err(self.err("expected digits or '}'")),
                }
            }
            if d.len() == 1 {
                d[0].chars().map(|c| c.to_digit(10).unwrap()).collect()
            } else {
                d.iter().map(|s| s.parse().unwrap()).collect()
            }
        } else {
            let mut d = Vec::new();
            while let Some(c) = self.peek().and_then(|c| c.to_digit(10)) {
                d.push(c);
                self.pos += 1;
            }
            d
        };
        if digits.len() != 2 {
            return Err(ParseError::at(self.src, at, "expected exactly two indices").into());
        }
        Ok((at, coeff, digits[0], digits[1]))
    }

    fn coefficient(&mut self) -> Result<Q> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let start = self.pos;
                while self.peek().is_some_and(|c| c != ')') {
                    self.pos += 1;
                }
                let text: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
                let at = self.chars.get(start).map_or(self.src.len(), |c| c.0);
                self.expect(')')?;
                text.trim().parse().map_err(|e: ParseError| ParseError::at(self.src, at + e.column.saturating_sub(1), e.message).into())
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '/') {
                    self.pos += 1;
                }
                let text: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
                text.parse().map_err(|_| self.err("bad number"))
            }
            Some('\\') | Some(_) => {
                if self.peek() == Some('\\') {
                    self.pos += 1;
                }
                let start = self.pos;
                while self.peek().is_some_and(char::is_alphanumeric) && !self.at_basis_form() {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
                if name.is_empty() {
                    return Err(self.err("expected a coefficient"));
                }
                self.bindings
                    .get(&name)
                    .cloned()
                    .ok_or_else(|| ParseError::at(self.src, self.chars[start].0, format!("unbound coefficient {name}")).into())
            }
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g1_equations() {
        let c = parse_salamon("(e^{15},-e^{25},-e^{35},e^{45},0,0)", &BTreeMap::new()).unwrap();
        assert_eq!(c.dim, 6);
        assert_eq!(c.get(1, 5, 1), Q::one());
        assert_eq!(c.get(5, 1, 1), -Q::one());
        assert_eq!(c.get(2, 5, 2), -Q::one());
        assert_eq!(c.get(3, 5, 3), -Q::one());
        assert_eq!(c.get(4, 5, 4), Q::one());
        assert_eq!(c.constants.len(), 8);
    }

    #[test]
    fn abelian_and_g8() {
        assert!(parse_salamon("(0,0,0,0,0,0)", &BTreeMap::new()).unwrap().is_abelian());
        let c = parse_salamon("(e^{16}-e^{25}, e^{15}+e^{26}, -e^{36}+e^{45}, -e^{35}-e^{46}, 0, 0)", &BTreeMap::new()).unwrap();
        assert_eq!(c.get(1, 6, 1), Q::one());
        assert_eq!(c.get(2, 5, 1), -Q::one());
        assert_eq!(c.get(4, 5, 3), Q::one());
    }

    #[test]
    fn bound_coefficients() {
        let mut b = BTreeMap::new();
        b.insert("alpha".to_string(), "1/2".parse().unwrap());
        let c = parse_salamon(
            r"(\alpha e^{15}+e^{25},-e^{15}+\alpha e^{25},-\alpha e^{35}+e^{45},-e^{35}-\alpha e^{45},0,0)",
            &b,
        )
        .unwrap();
        assert_eq!(c.get(1, 5, 1), "1/2".parse().unwrap());
        assert_eq!(c.get(4, 5, 4), "-1/2".parse().unwrap());
        let c = parse_salamon("(2e^{12}, (1+i) e^{21}, 0)", &b).unwrap();
        assert_eq!(c.get(1, 2, 1), Q::from_ints(2, 0));
        assert_eq!(c.get(1, 2, 2), Q::from_ints(-1, -1));
    }

    #[test]
    fn errors() {
        let none = BTreeMap::new();
        assert!(parse_salamon("(e^{17},0)", &none).is_err());
        assert!(parse_salamon("(e^{11},0)", &none).is_err());
        assert!(parse_salamon("(e^{12},0", &none).is_err());
        assert!(parse_salamon("(x e^{12},0)", &none).is_err());
        match parse_salamon("(e^{12}, f^{12})", &none) {
            Err(Error::Parse(p)) => assert_eq!(p.column, 10),
            other => panic!("{other:?}"),
        }
    }
}
