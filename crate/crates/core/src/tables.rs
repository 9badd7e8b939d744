//! Regeneration of the published polynomial tables and of the r table.
//!
//! Each published row lists the members of one or a few families
//! `G(X) + lambda` with `G` fixed. The listings print odd-characteristic
//! polynomials as `X^n + L(X)` where the primitive polynomial is
//! `X^n - L(X)`; [`printed_form`] converts between the two, and is the
//! identity in characteristic 2.

use std::fmt;
use std::str::FromStr;

use crate::config::Guards;
use crate::enumeration::{count_trace_one_classes, enumerate_family, enumerate_special_primitives, SpecialForm};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Poly;
use crate::primitivity::{is_primitive, is_primitive_element};
use crate::text::parse_poly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TableId {
    T1,
    T2,
    T3,
    T4,
    T5,
    RTable,
}

impl TableId {
    pub const ALL: [TableId; 6] = [TableId::T1, TableId::T2, TableId::T3, TableId::T4, TableId::T5, TableId::RTable];

    pub fn name(self) -> &'static str {
        match self {
            TableId::T1 => "t1",
            TableId::T2 => "t2",
            TableId::T3 => "t3",
            TableId::T4 => "t4",
            TableId::T5 => "t5",
            TableId::RTable => "r_table",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            TableId::T1 => "P(2,3,q): degree 3 over F_(q^2)",
            TableId::T2 => "P(m,3,2): degree 3 over F_(2^m)",
            TableId::T3 => "P(2,n,2): degree n over F_4",
            TableId::T4 => "P(m,3,3): degree 3 over F_(3^m)",
            TableId::T5 => "x^3 + x^2 + x + lambda over F_(q^2)",
            TableId::RTable => "trace-one classes r and |P_2(m,2)| = r m",
        }
    }
}

impl FromStr for TableId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TableId::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| Error::UnknownKind(s.to_string()))
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One published row: parameters, the families as printed, and the listed
/// polynomials as printed.
struct RowDef {
    q: u64,
    m: u32,
    n: usize,
    families: &'static [&'static str],
    listed: &'static [&'static str],
}

const fn row(q: u64, m: u32, n: usize, families: &'static [&'static str], listed: &'static [&'static str]) -> RowDef {
    RowDef { q, m, n, families, listed }
}

const T1_ROWS: &[RowDef] = &[
    row(2, 2, 3, &["x^3 + x^2 + x"], &["x^3 + x^2 + x + a", "x^3 + x^2 + x + a+1"]),
    row(3, 2, 3, &["x^3 + x^2 + x"], &["x^3 + x^2 + x + a", "x^3 + x^2 + x + 2a+1"]),
    row(5, 2, 3, &["x^3 + x^2 + x"], &["x^3 + x^2 + x + 3a", "x^3 + x^2 + x + 2a+3"]),
    row(
        7,
        2,
        3,
        &["x^3 + x^2 + x"],
        &["x^3 + x^2 + x + 3a+1", "x^3 + x^2 + x + 3a+3", "x^3 + x^2 + x + 4a+4", "x^3 + x^2 + x + 4a+6"],
    ),
    row(
        11,
        2,
        3,
        &["x^3 + x^2"],
        &[
            "x^3 + x^2 + 7a+1",
            "x^3 + x^2 + a+10",
            "x^3 + x^2 + a+7",
            "x^3 + x^2 + 4a+7",
            "x^3 + x^2 + 3a",
            "x^3 + x^2 + 8a+1",
        ],
    ),
];

const T2_ROWS: &[RowDef] = &[
    row(2, 3, 3, &["x^3 + x^2"], &["x^3 + x^2 + a", "x^3 + x^2 + a^2", "x^3 + x^2 + a^2+a"]),
    row(
        2,
        4,
        3,
        &["x^3 + x^2"],
        &["x^3 + x^2 + a^3+a+1", "x^3 + x^2 + a^3+a^2+a", "x^3 + x^2 + a^3+a^2+1", "x^3 + x^2 + a^3+1"],
    ),
    row(
        2,
        5,
        3,
        &["x^3 + x^2"],
        &[
            "x^3 + x^2 + a^4+a^2",
            "x^3 + x^2 + a^2+a+1",
            "x^3 + x^2 + a^4+a^3+a^2",
            "x^3 + x^2 + a^4+a^3+a^2+1",
            "x^3 + x^2 + a^2+a",
            "x^3 + x^2 + a^4+a^3",
            "x^3 + x^2 + a^4+a^2+1",
            "x^3 + x^2 + a^4+a^3+1",
            "x^3 + x^2 + a^4+a^2+a+1",
            "x^3 + x^2 + a^4+a^2+a",
        ],
    ),
    row(
        2,
        6,
        3,
        &["x^3 + x^2"],
        &[
            "x^3 + x^2 + a^4+a^3+1",
            "x^3 + x^2 + a^5+a^4+a^3+a",
            "x^3 + x^2 + a^5+a^3+a^2",
            "x^3 + x^2 + a^4+a^3",
            "x^3 + x^2 + a^5+a^4+a^3+a+1",
            "x^3 + x^2 + a^5+a^3+a^2+1",
        ],
    ),
];

const T3_N7_FAMILIES: &[&str] = &[
    "x^7 + x^6 + x^5",
    "x^7 + x^6 + x^4",
    "x^7 + x^4 + x^3",
    "x^7 + x^6 + x^4 + x^3",
    "x^7 + x^6 + x^2",
    "x^7 + x^5 + x^4 + x^2",
    "x^7 + x^6 + x^5 + x^4 + x^3 + x^2",
    "x^7 + x^5 + x^4 + x",
    "x^7 + x^6 + x^5 + x^4 + x",
    "x^7 + x^3 + x",
    "x^7 + x^5 + x^4 + x^3 + x",
    "x^7 + x^5 + x^3 + x^2 + x",
    "x^7 + x^6 + x^5 + x^3 + x^2 + x",
    "x^7 + x^6 + x^4 + x^3 + x^2 + x",
];

const T3_ROWS: &[RowDef] = &[
    row(2, 2, 4, &["x^4 + x^3 + x^2"], &["x^4 + x^3 + x^2 + a", "x^4 + x^3 + x^2 + a+1"]),
    // the printed n = 5 entries have degree 4; the family is read with x^5
    row(2, 2, 5, &["x^5 + x^4 + x^3 + x^2 + x"], &["x^4 + x^3 + x^2 + x + a", "x^4 + x^3 + x^2 + x + a+1"]),
    row(2, 2, 6, &["x^6 + x^5 + x"], &["x^6 + x^5 + x + a", "x^6 + x^5 + x + a+1"]),
    row(
        2,
        2,
        7,
        T3_N7_FAMILIES,
        &[
            "x^7 + x^6 + x^5 + a",
            "x^7 + x^6 + x^5 + a+1",
            "x^7 + x^6 + x^4 + a",
            "x^7 + x^6 + x^4 + a+1",
            "x^7 + x^4 + x^3 + a",
            "x^7 + x^4 + x^3 + a+1",
            "x^7 + x^6 + x^4 + x^3 + a",
            "x^7 + x^6 + x^4 + x^3 + a+1",
            "x^7 + x^6 + x^2 + a",
            "x^7 + x^6 + x^2 + a+1",
            "x^7 + x^5 + x^4 +x^2 + a",
            "x^7 + x^5 + x^4 + x^2 + a+1",
            "x^7 + x^6 + x^5 + x^4 + x^3 + x^2 + a",
            "x^7 + x^6 + x^5 + x^4 + x^3 + x^2  + a+1",
            "x^7 + x^5 + x^4 + x + a",
            "x^7 + x^5 + x^4 + x + a+1",
            "x^7 + x^6 + x^5 + x^4 + x + a",
            "x^7 + x^6 + x^5 + x^4 + x + a+1",
            "x^7 + x^3 + x + a",
            "x^7 + x^3 + x + a+1",
            "x^7 + x^5 + x^4 + x^3 + x + a",
            "x^7 + x^5 + x^4 + x^3 + x + a+1",
            "x^7 + x^5 + x^3 + x^2 + x + a",
            "x^7 + x^5 + x^3 + x^2 + x + a+1",
            "x^7 + x^6 + x^5 + x^3 + x^2 + x + a",
            "x^7 + x^6 + x^5 + x^3 + x^2 + x + a+1",
            "x^7 + x^6 + x^4 + x^3 + x^2 + x + a",
            "x^7 + x^6 + x^4 + x^3 + x^2 + x + a+1",
        ],
    ),
];

const T4_ROWS: &[RowDef] = &[
    row(
        3,
        3,
        3,
        &["x^3 + x^2"],
        &[
            "x^3 + x^2 + a",
            "x^3 + x^2 + a+2",
            "x^3 + x^2 + a^2+2a+2",
            "x^3 + x^2 + a+1",
            "x^3 + x^2 + a^2+a+2",
            "x^3 + x^2 + 2a^2+a",
            "x^3 + x^2 + a^2+1",
            "x^3 + x^2 + 2a^2+2a",
            "x^3 + x^2 + 2a^2+1",
        ],
    ),
    row(
        3,
        4,
        3,
        &["x^3 + x"],
        &[
            "x^3 + x + a",
            "x^3 + x + a^3",
            "x^3 + x + 2a^3+a^2+a+1",
            "x^3 + x + a^3+a^2+2a",
            "x^3 + x + a^3+a+2",
            "x^3 + x + 2a^3+a^2+2a",
            "x^3 + x + 2a^3+2a",
            "x^3 + x + a^3+2a+2",
            "x^3 + x + 2a^2+a+1",
            "x^3 + x + a^3+2a^2+1",
            "x^3 + x + a^2+a",
            "x^3 + x + 2a^3+a^2+2a+2",
            "x^3 + x + 2a",
            "x^3 + x + 2a^3",
            "x^3 + x + a^3+2a^2+2a+2",
            "x^3 + x + a^3+2a^2+a",
            "x^3 + x + 2a^3+2a+1",
            "x^3 + x + a^3+2a^2+a",
            "x^3 + x + a^3+a",
            "x^3 + x + 2a^3+a+1",
            "x^3 + x + a^2+2a+2",
            "x^3 + x + 2a^3+a^2+2",
            "x^3 + x + 2a^2+2",
            "x^3 + x + a^3+2a^2+a+1",
            "x^3 + x + 2a^3+a^2+a+1",
            "x^3 + x + 2a^3+2a^2+a+1",
            "x^3 + x + a^3+2a+2",
            "x^3 + x + 2a^2+a+1",
            "x^3 + x + a^2+a",
            "x^3 + x + 2a^3+1",
            "x^3 + x + 2a+1",
            "x^3 + x + 2a^3+a^2",
            "x^3 + x + a^3+2a^2+2a+2",
            "x^3 + x + 2a^3+a+1",
            "x^3 + x + a^2+2a+2",
            "x^3 + x + 2a^2+2a",
        ],
    ),
];

const T5_ROWS: &[RowDef] = &[
    row(2, 2, 3, &["x^3 + x^2 + x"], &["x^3 + x^2 + x + a", "x^3 + x^2 + x + a+1"]),
    row(3, 2, 3, &["x^3 + x^2 + x"], &["x^3 + x^2 + x + a", "x^3 + x^2 + x + 2a+1"]),
    row(5, 2, 3, &["x^3 + x^2 + x"], &["x^3 + x^2 + x + 3a", "x^3 + x^2 + x + 2a+3"]),
    row(
        7,
        2,
        3,
        &["x^3 + x^2 + x"],
        &["x^3 + x^2 + x + 3a+1", "x^3 + x^2 + x + 3a+3", "x^3 + x^2 + x + 4a+4", "x^3 + x^2 + x + 4a+6"],
    ),
    row(
        11,
        2,
        3,
        &["x^3 + x^2 + x"],
        &[
            "x^3 + x^2 + x + 9a+2",
            "x^3 + x^2 + x + 9a+6",
            "x^3 + x^2 + x + 6a+5",
            "x^3 + x^2 + x + 5a",
            "x^3 + x^2 + x + 6a+4",
            "x^3 + x^2 + x + 6a+9",
            "x^3 + x^2 + x + 2a+9",
            "x^3 + x^2 + x + 2a+5",
            "x^3 + x^2 + x + 5a+6",
            "x^3 + x^2 + x + 6a",
            "x^3 + x^2 + x + 5a+7",
            "x^3 + x^2 + x + 5a+2",
        ],
    ),
    row(
        13,
        2,
        3,
        &["x^3 + x^2 + x"],
        &[
            "x^3 + x^2 + x + a",
            "x^3 + x^2 + x + 12a+6",
            "x^3 + x^2 + x + 10a+9",
            "x^3 + x^2 + x + 12a+1",
            "x^3 + x^2 + x + 11a+9",
            "x^3 + x^2 + x + 7a+5",
            "x^3 + x^2 + x + 9a+5",
            "x^3 + x^2 + x + 10a+11",
            "x^3 + x^2 + x + 2a+7",
            "x^3 + x^2 + x + a+5",
            "x^3 + x^2 + x + 4a+1",
            "x^3 + x^2 + x + 9a",
        ],
    ),
];

fn rows_of(id: TableId) -> &'static [RowDef] {
    match id {
        TableId::T1 => T1_ROWS,
        TableId::T2 => T2_ROWS,
        TableId::T3 => T3_ROWS,
        TableId::T4 => T4_ROWS,
        TableId::T5 => T5_ROWS,
        TableId::RTable => &[],
    }
}

/// `2 X^d - p` for `p` monic of degree `d`: every coefficient below the top
/// changes sign. Maps the printed form to the primitive one and back.
pub fn printed_form(p: &Poly) -> Poly {
    let field = p.field();
    let d = p.deg().unwrap_or(0);
    let c = p.coeffs().iter().enumerate().map(|(i, &x)| if i == d { x } else { field.neg(x) }).collect();
    Poly::new(field, c)
}

/// Whether `p` is `G + lambda` with `G` monic over the prime field,
/// `G(0) = 0`, `-lambda` primitive and `p` primitive.
pub fn is_special_member(p: &Poly, base_order: u64) -> Result<bool> {
    let field = p.field();
    let lambda = p.constant_term();
    if !p.is_monic() || p.deg().is_none_or(|d| d == 0) || lambda.is_zero() {
        return Ok(false);
    }
    if base_order != field.characteristic() {
        return Err(Error::NonPrimeBase(base_order));
    }
    if !p.coeffs()[1..].iter().all(|&c| field.in_prime_subfield(c)) {
        return Ok(false);
    }
    if !is_primitive_element(field, field.neg(lambda))? {
        return Ok(false);
    }
    is_primitive(p)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ListedStatus {
    /// Primitive as printed.
    Member,
    /// Primitive once read as `X^n - L(X)`.
    SignCorrected,
    Mismatch(String),
}

impl ListedStatus {
    pub fn label(&self) -> &str {
        match self {
            ListedStatus::Member => "member",
            ListedStatus::SignCorrected => "member_sign_corrected",
            ListedStatus::Mismatch(_) => "mismatch",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListedCheck {
    pub param: u64,
    pub listed: String,
    /// The primitive polynomial the entry was read as, if any.
    pub read_as: Option<Poly>,
    pub status: ListedStatus,
    /// `read_as` belongs to one of the row's families.
    pub in_family: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyRow {
    /// The varying parameter of the table (q, m or n).
    pub param: u64,
    pub q: u64,
    pub m: u32,
    pub n: usize,
    /// `(G, members)` with `G` in primitive-sign form.
    pub families: Vec<(Poly, Vec<Poly>)>,
    /// `|P(m,n,q)|` by exhaustive enumeration.
    pub exhaustive: usize,
    pub listed_lines: usize,
    pub listed_distinct: usize,
}

impl FamilyRow {
    pub fn family_count(&self) -> usize {
        self.families.iter().map(|(_, v)| v.len()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyTable {
    pub id: TableId,
    pub rows: Vec<FamilyRow>,
    pub listed: Vec<ListedCheck>,
}

fn check_listed(ext: &Field, q: u64, n: usize, s: &str, families: &[Poly]) -> Result<ListedCheck> {
    let mut c =
        ListedCheck { param: 0, listed: s.to_string(), read_as: None, status: ListedStatus::Member, in_family: false };
    let p = match parse_poly(ext, s) {
        Ok(p) => p,
        Err(e) => {
            c.status = ListedStatus::Mismatch(format!("parse: {e}"));
            return Ok(c);
        }
    };
    if p.deg() != Some(n) {
        c.status = ListedStatus::Mismatch(format!("degree {} in a degree-{n} row", p.degree()));
        return Ok(c);
    }
    let lower_in_family = |p: &Poly| {
        let lower = p - &Poly::constant(ext, p.constant_term());
        families.iter().any(|g| g == &lower)
    };
    let corrected = printed_form(&p);
    let mut readings = Vec::new();
    for (cand, status) in [(p, ListedStatus::Member), (corrected, ListedStatus::SignCorrected)] {
        if is_special_member(&cand, q)? {
            readings.push((lower_in_family(&cand), cand, status));
        }
    }
    // a reading inside the row's families wins over one outside them
    readings.sort_by_key(|r| !r.0);
    match readings.into_iter().next() {
        Some((in_family, p, status)) => {
            c.in_family = in_family;
            c.read_as = Some(p);
            c.status = status;
        }
        None => c.status = ListedStatus::Mismatch("not primitive of the special form in either sign".into()),
    }
    Ok(c)
}

fn param_of(id: TableId, r: &RowDef) -> u64 {
    match id {
        TableId::T1 | TableId::T5 => r.q,
        TableId::T2 | TableId::T4 => r.m as u64,
        TableId::T3 => r.n as u64,
        TableId::RTable => 0,
    }
}

/// Regenerate a polynomial table over Conway-modulus fields.
pub fn build_poly_table(id: TableId, guards: &Guards) -> Result<PolyTable> {
    if id == TableId::RTable {
        return Err(Error::Invalid("r_table is not a polynomial table".into()));
    }
    let mut rows = Vec::new();
    let mut listed = Vec::new();
    for r in rows_of(id) {
        let base = Field::prime(r.q)?;
        let ext = Field::with_order(r.q.pow(r.m))?;
        let mut families = Vec::new();
        for f in r.families {
            let g = printed_form(&parse_poly(&base, f)?).lift(&ext)?;
            let members = enumerate_family(&ext, &g)?;
            families.push((g, members));
        }
        let exhaustive = enumerate_special_primitives(r.q, r.m, r.n, SpecialForm::Pmnq, guards)?.len();
        let gs: Vec<Poly> = families.iter().map(|(g, _)| g.clone()).collect();
        let param = param_of(id, r);
        let mut distinct: Vec<Poly> = Vec::new();
        for s in r.listed {
            let mut c = check_listed(&ext, r.q, r.n, s, &gs)?;
            c.param = param;
            if let Ok(p) = parse_poly(&ext, s) {
                if !distinct.contains(&p) {
                    distinct.push(p);
                }
            }
            listed.push(c);
        }
        rows.push(FamilyRow {
            param,
            q: r.q,
            m: r.m,
            n: r.n,
            families,
            exhaustive,
            listed_lines: r.listed.len(),
            listed_distinct: distinct.len(),
        });
    }
    Ok(PolyTable { id, rows, listed })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RRow {
    pub m: u32,
    pub r: u64,
    pub p2m2: u64,
}

pub fn build_r_table(ms: impl IntoIterator<Item = u32>, guards: &Guards) -> Result<Vec<RRow>> {
    ms.into_iter()
        .map(|m| {
            let t = count_trace_one_classes(m, guards)?;
            Ok(RRow { m, r: t.r, p2m2: t.p2m2 })
        })
        .collect()
}

pub fn r_table_csv(rows: &[RRow]) -> String {
    let mut s = String::from("m,r,P2m2\n");
    for r in rows {
        s.push_str(&format!("{},{},{}\n", r.m, r.r, r.p2m2));
    }
    s
}

/// Named CSV documents for a polynomial table: the member listing, the
/// per-row counts and the report on the published entries.
pub fn poly_table_csv(t: &PolyTable) -> Vec<(String, String)> {
    let name = t.id.name();
    let mut members = format!("# {name} {}\nparam,q,m,n,family,polynomial,printed\n", t.id.title());
    let mut counts =
        format!("# {name} counts\nparam,q,m,n,families,family_count,exhaustive,listed_lines,listed_distinct\n");
    for r in &t.rows {
        for (g, ms) in &r.families {
            for p in ms {
                members.push_str(&format!("{},{},{},{},{},{},{}\n", r.param, r.q, r.m, r.n, g, p, printed_form(p)));
            }
        }
        counts.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.param,
            r.q,
            r.m,
            r.n,
            r.families.len(),
            r.family_count(),
            r.exhaustive,
            r.listed_lines,
            r.listed_distinct
        ));
    }
    let mut report = format!("# {name} published entries\nparam,listed,read_as,status,in_family,detail\n");
    for c in &t.listed {
        let detail = match &c.status {
            ListedStatus::Mismatch(d) => d.as_str(),
            _ => "",
        };
        report.push_str(&format!(
            "{},{},{},{},{},{}\n",
            c.param,
            c.listed,
            c.read_as.as_ref().map(|p| p.to_string()).unwrap_or_default(),
            c.status.label(),
            c.in_family,
            detail
        ));
    }
    vec![
        (format!("{name}.csv"), members),
        (format!("{name}_counts.csv"), counts),
        (format!("{name}_listed.csv"), report),
    ]
}
