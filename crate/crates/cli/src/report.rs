//! Command outputs. Each report serializes to JSON (`--json`) with the same
//! `version` and `command` fields as scenario files, and renders as a plain
//! two-column table otherwise.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::schema::SCHEMA_VERSION;

/// Residue matrix as printed: entries in `0..n`.
pub type Residues = [[u64; 2]; 2];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Report {
    Commutant(CommutantReport),
    EndInvariants(EndReportOut),
    HomInvariants(HomReport),
    ClassifyAbelian(ClassifyReport),
    EnumerateAbelian(EnumerateReport),
    BrauerBound(BrauerReport),
    OverQ(OverQReport),
    Lattice(LatticeOut),
    H1Bound(H1Out),
    FiniteGl2r(RealReport),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutantReport {
    pub modulus: u64,
    pub ell: u64,
    pub s: u32,
    /// `null` for scalar input.
    pub mu: Option<u32>,
    pub a_prime: Option<Residues>,
    pub generators: Vec<Residues>,
    /// Invariant factors of the commutant.
    pub shape: Vec<u64>,
    pub order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndReportOut {
    pub n: u64,
    pub n1: u64,
    pub n2: u64,
    pub scan_n1: u64,
    pub scan_n2: u64,
    pub shape: Vec<u64>,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pair {
    pub source: Residues,
    pub target: Residues,
    pub chi: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomReport {
    pub modulus: u64,
    pub d: u64,
    /// `gcd(d, n)`.
    pub m: u64,
    pub twisted: bool,
    pub phi: Residues,
    pub phi_dual: Residues,
    pub pairs: Vec<Pair>,
    pub invariant_homs: Vec<u64>,
    pub transcendental_quotient: Vec<u64>,
    pub transcendental_order: u64,
    pub sequence_left: Vec<u64>,
    pub sequence_image: Vec<u64>,
    pub divisibility: Divisibility,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Divisibility {
    Rational { hom_quotient: Vec<u64>, end_quotient: Vec<u64>, kernel: Vec<u64>, cokernel: Vec<u64> },
    Twisted { hom_quotient: Vec<u64>, end_ratio: Vec<u64>, kernel: Vec<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub modulus: u64,
    pub ell: u64,
    pub s: u32,
    pub level: u64,
    pub family: String,
    pub conjugator: Residues,
    pub elements_checked: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderRow {
    pub order: usize,
    pub classes: usize,
    pub subgroups: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRow {
    pub family: String,
    pub classes: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerateReport {
    pub ell: u64,
    pub s: u32,
    pub ambient_order: usize,
    pub classes: usize,
    pub subgroups: usize,
    pub max_order: usize,
    /// `l^{3s}`.
    pub bound: u64,
    pub orders: Vec<OrderRow>,
    pub normal_forms: Vec<FamilyRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorOut {
    pub label: String,
    /// Decimal.
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrauerReport {
    pub modulus: u64,
    pub d: u64,
    pub period: u64,
    pub base_change_degree: u32,
    pub surface: String,
    pub twisted: bool,
    pub n1: u64,
    pub n2: u64,
    /// Structure over the quadratic extension, for a twisted action.
    pub kernel_n1: Option<u64>,
    pub kernel_n2: Option<u64>,
    pub field_degree_budget: u64,
    pub c: u64,
    pub factors: Vec<FactorOut>,
    pub bound: String,
    pub exact: bool,
    pub status: String,
    /// Order of the fixed homomorphisms modulo the geometric ones.
    pub hom_quotient_order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverQReport {
    pub d: u64,
    pub max_order: u64,
    pub bound: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeOut {
    pub label: String,
    pub rank: usize,
    pub determinant: i64,
    pub even: bool,
    pub positive: usize,
    pub negative: usize,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1Out {
    pub rank: usize,
    pub group_order: u64,
    pub fixed_mod_order: u64,
    pub fixed_lattice_rank: usize,
    pub h1_order: u64,
    /// `|G|^r`.
    pub divides: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealReport {
    pub d: i64,
    pub group: String,
    pub order: u32,
}

fn shape(f: &[u64]) -> String {
    if f.is_empty() {
        "0".into()
    } else {
        f.iter().map(|x| format!("Z/{x}")).collect::<Vec<_>>().join(" x ")
    }
}

fn mat(m: &Residues) -> String {
    format!("[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map_or("-".into(), T::to_string)
}

struct Table(Vec<(String, String)>);

impl Table {
    fn new() -> Self {
        Table(Vec::new())
    }

    fn row(&mut self, k: impl Into<String>, v: impl ToString) -> &mut Self {
        self.0.push((k.into(), v.to_string()));
        self
    }

    fn render(&self) -> String {
        let w = self.0.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in &self.0 {
            writeln!(out, "{k:<w$}  {v}").unwrap();
        }
        out
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut value = serde_json::to_value(self).expect("report serializes");
        if let Value::Object(map) = &mut value {
            map.insert("version".into(), Value::from(SCHEMA_VERSION));
        }
        serde_json::to_string_pretty(&value).expect("value serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        let mut value: Value = serde_json::from_str(text)?;
        if let Value::Object(map) = &mut value {
            map.remove("version");
        }
        serde_json::from_value(value)
    }

    pub fn to_table(&self) -> String {
        let mut t = Table::new();
        match self {
            Report::Commutant(r) => {
                t.row("modulus", r.modulus).row("prime", r.ell).row("exponent", r.s).row("mu", opt(&r.mu));
                t.row("A'", r.a_prime.as_ref().map_or("-".into(), mat));
                for (i, g) in r.generators.iter().enumerate() {
                    t.row(format!("generator {i}"), mat(g));
                }
                t.row("shape", shape(&r.shape)).row("order", r.order);
            }
            Report::EndInvariants(r) => {
                t.row("n", r.n).row("n1 (commutant)", r.n1).row("n2 (commutant)", r.n2);
                t.row("n1 (divisor scan)", r.scan_n1).row("n2 (divisor scan)", r.scan_n2);
                t.row("shape", shape(&r.shape));
                t.row("check", if r.agree { "AGREE" } else { "DISAGREE" });
            }
            Report::HomInvariants(r) => {
                t.row("modulus", r.modulus).row("d", r.d).row("gcd(d,n)", r.m).row("twisted", r.twisted);
                t.row("phi", mat(&r.phi)).row("phi dual", mat(&r.phi_dual)).row("generators", r.pairs.len());
                t.row("fixed homs", shape(&r.invariant_homs));
                t.row("transcendental quotient", shape(&r.transcendental_quotient));
                t.row("transcendental order", r.transcendental_order);
                t.row("sequence kernel", shape(&r.sequence_left)).row("sequence image", shape(&r.sequence_image));
                match &r.divisibility {
                    Divisibility::Rational { hom_quotient, end_quotient, kernel, cokernel } => {
                        t.row("hom quotient", shape(hom_quotient)).row("end quotient", shape(end_quotient));
                        t.row("kernel", shape(kernel)).row("cokernel", shape(cokernel));
                    }
                    Divisibility::Twisted { hom_quotient, end_ratio, kernel } => {
                        t.row("hom quotient", shape(hom_quotient)).row("end ratio", shape(end_ratio));
                        t.row("kernel", shape(kernel));
                    }
                }
                t.row("certificate", "ok");
            }
            Report::ClassifyAbelian(r) => {
                t.row("modulus", r.modulus).row("level", r.level).row("family", &r.family);
                t.row("conjugator", mat(&r.conjugator)).row("elements checked", r.elements_checked);
            }
            Report::EnumerateAbelian(r) => {
                t.row("prime", r.ell).row("exponent", r.s).row("ambient order", r.ambient_order);
                t.row("classes", r.classes).row("subgroups", r.subgroups);
                t.row("max order", r.max_order).row("bound l^3s", r.bound);
                for o in &r.orders {
                    t.row(format!("order {}", o.order), format!("{} classes, {} subgroups", o.classes, o.subgroups));
                }
                for f in &r.normal_forms {
                    t.row(format!("family {}", f.family), format!("{} classes", f.classes));
                }
            }
            Report::BrauerBound(r) => {
                t.row("modulus", r.modulus).row("d", r.d).row("period", r.period);
                t.row("[L:k]", r.base_change_degree).row("surface", &r.surface).row("twisted", r.twisted);
                t.row("n1", r.n1).row("n2", r.n2).row("n1'", opt(&r.kernel_n1)).row("n2'", opt(&r.kernel_n2));
                t.row("field degree budget", r.field_degree_budget).row("c", r.c);
                for f in &r.factors {
                    t.row(format!("factor {}", f.label), &f.value);
                }
                t.row("bound", &r.bound).row("status", &r.status);
                t.row("hom quotient order", r.hom_quotient_order);
            }
            Report::OverQ(r) => {
                t.row("d", r.d).row("max order", r.max_order).row("bound", &r.bound);
            }
            Report::Lattice(r) => {
                t.row("lattice", &r.label).row("rank", r.rank).row("determinant", r.determinant);
                t.row("even", r.even).row("signature", format!("({}, {})", r.positive, r.negative));
                t.row("degenerate", r.degenerate);
            }
            Report::H1Bound(r) => {
                t.row("rank", r.rank).row("group order", r.group_order);
                t.row("fixed points mod |G|", r.fixed_mod_order).row("fixed lattice rank", r.fixed_lattice_rank);
                t.row("H1 order", r.h1_order).row("divides |G|^r", r.divides);
            }
            Report::FiniteGl2r(r) => {
                t.row("d", r.d).row("group", &r.group).row("order", r.order);
            }
        }
        t.render()
    }
}
