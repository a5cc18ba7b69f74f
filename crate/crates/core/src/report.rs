//! Dimension tables, generator lists and decomposition records.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::bicomplex::{Bicomplex, Bidegree, CochainElement};
use crate::builder::FormAlgebra;
use crate::cohomology::{bott_chern, de_rham_table, dimension, Flavor};
use crate::decomposition::{page1_of, render_ascii, Decomposition, Page1Check, ShapeJson};

/// Cells ordered by total degree, then by decreasing `p`:
/// `(0,0), (1,0), (0,1), (2,0), (1,1), …`.
pub fn paper_order(cells: impl IntoIterator<Item = Bidegree>) -> Vec<Bidegree> {
    let mut v: Vec<Bidegree> = cells.into_iter().collect();
    v.sort_by_key(|&(p, q)| (p + q, -p));
    v.dedup();
    v
}

/// All cells of the bounding box in [`paper_order`].
pub fn box_cells(b: &Bicomplex) -> Vec<Bidegree> {
    let Some((p0, p1, q0, q1)) = b.bounding_box() else {
        return Vec::new();
    };
    paper_order((p0..=p1).flat_map(|p| (q0..=q1).map(move |q| (p, q))))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimsRow {
    pub p: i32,
    pub q: i32,
    pub dim: usize,
    pub dolbeault: usize,
    pub conj_dolbeault: usize,
    pub bott_chern: usize,
    pub aeppli: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimsTable {
    pub rows: Vec<DimsRow>,
    pub de_rham: BTreeMap<i32, usize>,
}

impl DimsTable {
    pub fn new(b: &Bicomplex) -> Self {
        let rows = box_cells(b)
            .into_iter()
            .map(|bd| DimsRow {
                p: bd.0,
                q: bd.1,
                dim: b.dim(bd),
                dolbeault: dimension(b, Flavor::Dolbeault, bd),
                conj_dolbeault: dimension(b, Flavor::ConjDolbeault, bd),
                bott_chern: dimension(b, Flavor::BottChern, bd),
                aeppli: dimension(b, Flavor::Aeppli, bd),
            })
            .collect();
        DimsTable {
            rows,
            de_rham: de_rham_table(b),
        }
    }

    pub fn get(&self, bd: Bidegree, flavor: Flavor) -> Option<usize> {
        let r = self.rows.iter().find(|r| (r.p, r.q) == bd)?;
        match flavor {
            Flavor::Dolbeault => Some(r.dolbeault),
            Flavor::ConjDolbeault => Some(r.conj_dolbeault),
            Flavor::BottChern => Some(r.bott_chern),
            Flavor::Aeppli => Some(r.aeppli),
            Flavor::DeRham => None,
        }
    }

    /// Values of one flavor down the rows, `(0,0)` excluded.
    pub fn column(&self, flavor: Flavor) -> Vec<usize> {
        self.rows
            .iter()
            .filter(|r| (r.p, r.q) != (0, 0))
            .filter_map(|r| self.get((r.p, r.q), flavor))
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("(p,q)   dim  dbar  del   BC    A\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<7} {:>4} {:>5} {:>4} {:>4} {:>4}",
                format!("({},{})", r.p, r.q),
                r.dim,
                r.dolbeault,
                r.conj_dolbeault,
                r.bott_chern,
                r.aeppli
            );
        }
        let dr: Vec<String> = self.de_rham.iter().map(|(k, d)| format!("b{k}={d}")).collect();
        let _ = writeln!(out, "de Rham: {}", dr.join(" "));
        out
    }

    /// A tabular with one row per bidegree, `(0,0)` omitted.
    pub fn to_latex(&self) -> String {
        let mut out = String::from("\\begin{tabular}{c|c|c|c}\n$(p,q)$ & $h_{\\bar\\partial}$ & $h_{BC}$ & $h_{A}$\\\\\n\\hline\n");
        for r in self.rows.iter().filter(|r| (r.p, r.q) != (0, 0)) {
            let _ = writeln!(out, "$({},{})$ & {} & {} & {}\\\\", r.p, r.q, r.dolbeault, r.bott_chern, r.aeppli);
        }
        out.push_str("\\end{tabular}\n");
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorRow {
    pub p: i32,
    pub q: i32,
    /// Basis of `B_Γ`, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<String>>,
    pub basis: Vec<String>,
    pub bott_chern: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorTable {
    pub rows: Vec<GeneratorRow>,
}

fn labels(b: &Bicomplex, bd: Bidegree, latex: bool) -> Vec<String> {
    b.labels(bd)
        .iter()
        .map(|l| if latex { l.render_latex(b.unit.as_deref()) } else { l.render(b.unit.as_deref()) })
        .collect()
}

impl GeneratorTable {
    pub fn new(c: &Bicomplex, b: Option<&Bicomplex>) -> Self {
        Self::build(c, b, false)
    }

    fn build(c: &Bicomplex, b: Option<&Bicomplex>, latex: bool) -> Self {
        let alg = FormAlgebra::new(c.clone());
        let cells = match b {
            Some(b) => paper_order(c.bidegrees().chain(b.bidegrees())),
            None => paper_order(c.bidegrees()),
        };
        let rows = cells
            .into_iter()
            .map(|bd| GeneratorRow {
                p: bd.0,
                q: bd.1,
                b: b.map(|b| labels(b, bd, latex)),
                basis: labels(c, bd, latex),
                bott_chern: bott_chern(c, bd.0, bd.1)
                    .representatives
                    .into_iter()
                    .map(|coeffs| alg.render(&CochainElement { bidegree: bd, coeffs }))
                    .collect(),
            })
            .collect();
        GeneratorTable { rows }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let _ = writeln!(out, "({},{})", r.p, r.q);
            if let Some(b) = &r.b {
                let _ = writeln!(out, "  B:  {}", b.join(", "));
            }
            let _ = writeln!(out, "  C:  {}", r.basis.join(", "));
            let _ = writeln!(out, "  BC: {}", r.bott_chern.iter().map(|s| format!("[{s}]")).collect::<Vec<_>>().join(", "));
        }
        out
    }

    pub fn latex(c: &Bicomplex, b: Option<&Bicomplex>) -> String {
        let t = Self::build(c, b, true);
        let mut out = String::from("\\begin{tabular}{c|l|l}\n$(p,q)$ & $C_\\Gamma$ & $H_{BC}$\\\\\n\\hline\n");
        for r in t.rows.iter().filter(|r| (r.p, r.q) != (0, 0)) {
            let _ = writeln!(out, "$({},{})$ & ${}$ & {}\\\\", r.p, r.q, r.basis.join(",\\ "), r.bott_chern.len());
        }
        out.push_str("\\end{tabular}\n");
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionRecord {
    pub summary: String,
    pub shapes: Vec<ShapeJson>,
    pub page1: Page1Check,
}

impl DecompositionRecord {
    pub fn new(d: &Decomposition) -> Self {
        DecompositionRecord {
            summary: d.to_string(),
            shapes: d.to_json(),
            page1: page1_of(d),
        }
    }

    pub fn to_text(d: &Decomposition) -> String {
        format!("{}\n\n{}", d, render_ascii(d, None))
    }

    pub fn to_latex(d: &Decomposition) -> String {
        let parts: Vec<String> = d
            .entries()
            .iter()
            .map(|(s, k)| {
                let a = s.anchor();
                let base = match s.tag() {
                    "D" => format!("D^{{{},{}}}", a.0, a.1),
                    "Sh" => format!("S_h^{{{},{}}}", a.0, a.1),
                    "Sv" => format!("S_v^{{{},{}}}", a.0, a.1),
                    _ => s.to_string(),
                };
                if *k == 1 {
                    base
                } else {
                    format!("({base})^{{\\oplus {k}}}")
                }
            })
            .collect();
        format!("${}$\n", parts.join("\\oplus "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{build_c, preset_case, Family};

    #[test]
    fn order_matches_tables() {
        let cells = paper_order([(3, 3), (0, 1), (1, 0), (1, 1), (2, 0), (0, 2), (0, 0)]);
        assert_eq!(cells, vec![(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 3)]);
    }

    #[test]
    fn g1_case_i_dolbeault_column() {
        let c = build_c(&preset_case(Family::G1, "i").unwrap()).unwrap();
        let t = DimsTable::new(&c);
        assert_eq!(t.column(Flavor::Dolbeault), vec![3, 3, 3, 9, 3, 1, 9, 9, 1, 3, 9, 3, 3, 3, 1]);
        assert!(t.to_latex().contains("$(1,1)$ & 9 &"));
        let g = GeneratorTable::new(&c, None);
        assert_eq!(g.rows.len(), 16);
    }
}
