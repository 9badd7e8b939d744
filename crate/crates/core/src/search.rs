//! Construction of primitive TSRs from primitive compositions `f(g(X))`,
//! the two equivalent existence questions, and trace-one quadratics.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{sat_pow, Guards};
use crate::error::{Error, Result};
use crate::factor::is_prime;
use crate::field::{Fe, Field};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::primitivity::{
    conjugate_product, is_primitive, is_primitive_poly, minimal_polynomial, primitive_elements, PrimitivityCertificate,
};
use crate::text::format_elem;
use crate::tsr::{tsr_charpoly_direct, tsr_charpoly_formula, TsrSpec};

pub const DEFAULT_BUDGET: u64 = 1 << 20;

/// Companion matrix of a monic `h` with `h(0) != 0`.
pub fn companion_matrix(h: &Poly) -> Result<Matrix> {
    if h.constant_term().is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    Matrix::companion(h)
}

/// Monic reversal `X^d k(1/X) / k(0)`.
pub fn reciprocal(k: &Poly) -> Result<Poly> {
    if k.constant_term().is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    Ok(k.reversed().monic())
}

/// Monic polynomial of degree `d`; coefficients of degree `< low` are zero
/// and the rest are the base-`q` digits of `idx`, the top degree most
/// significant. Increasing `idx` walks the coefficient tuples
/// lexicographically.
pub(crate) fn monic_lex(field: &Field, d: usize, low: usize, mut idx: u64) -> Poly {
    let q = field.order();
    let mut c = vec![Fe::ZERO; d + 1];
    c[d] = Fe::ONE;
    for slot in c.iter_mut().take(d).skip(low) {
        *slot = field.element(idx % q).expect("digit below q");
        idx /= q;
    }
    Poly::new(field, c)
}

/// Primitive monic polynomials of degree `d`, lexicographic.
pub fn primitive_monics(field: &Field, d: usize) -> Result<Vec<Poly>> {
    let total = sat_pow(field.order(), d as u32);
    Guards::check("monic candidates q^d", total, Guards::default().field_order)?;
    let found: Vec<Option<Poly>> = (0..total as u64)
        .into_par_iter()
        .map(|i| {
            let f = monic_lex(field, d, 0, i);
            if f.constant_term().is_zero() {
                return Ok(None);
            }
            Ok(is_primitive(&f)?.then_some(f))
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

fn prime_base(q: u64) -> Result<Field> {
    if !is_prime(q) {
        return Err(Error::NonPrimeBase(q));
    }
    Field::prime(q)
}

fn check_dims(m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::Invalid(format!("m = {m}, n = {n} must be positive")));
    }
    Ok(())
}

/// First index in `0..limit` accepted by `test`, by a parallel scan that
/// always reports the minimal hit.
fn first_hit<F>(limit: u64, test: F) -> Result<Option<u64>>
where
    F: Fn(u64) -> Result<bool> + Sync,
{
    let hit =
        (0..limit).into_par_iter().map(|i| test(i).map(|ok| ok.then_some(i))).find_first(|r| !matches!(r, Ok(None)));
    match hit {
        Some(Ok(i)) => Ok(i),
        Some(Err(e)) => Err(e),
        None => Ok(None),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Ceiling on the number of `(f, g)` pairs examined.
    pub budget: u64,
    /// Run the scan for `q >= 3` and even `n` as well.
    pub allow_even_n: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: DEFAULT_BUDGET, allow_even_n: false }
    }
}

/// Intermediate values of one successful construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub f: Poly,
    pub g: Poly,
    /// `F_q[X]/(f)`, so `alpha` is the class of `X`.
    pub ext: Field,
    pub alpha: Fe,
    /// `g(X) - alpha` over `ext`.
    pub k: Poly,
    pub lambda: Fe,
    /// `X^n - lambda L(X)`.
    pub reciprocal: Poly,
    pub l: Poly,
    pub h: Poly,
    pub a: Matrix,
    /// Product of the conjugates of `reciprocal`.
    pub conjugate_product: Poly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub spec: TsrSpec,
    pub charpoly: Poly,
    pub certificate: PrimitivityCertificate,
    pub provenance: Provenance,
    pub candidates_tried: u64,
}

impl SearchResult {
    pub fn to_json(&self) -> Value {
        let p = &self.provenance;
        json!({
            "spec": self.spec.to_json(),
            "charpoly": self.charpoly.to_string(),
            "certificate": self.certificate.to_json(),
            "candidates_tried": self.candidates_tried,
            "provenance": {
                "f": p.f.to_string(),
                "g": p.g.to_string(),
                "alpha": format_elem(&p.ext, p.alpha),
                "k": p.k.to_string(),
                "lambda": format_elem(&p.ext, p.lambda),
                "reciprocal": p.reciprocal.to_string(),
                "L": p.l.to_string(),
                "h": p.h.to_string(),
                "A": p.a.to_index_rows(),
            },
        })
    }
}

/// Build the TSR attached to a primitive `f(g(X))`.
///
/// With `alpha` a root of `f`, `f(g) = prod (g - alpha^(q^i))`, so the
/// factor carrying `alpha` is `k = g - alpha`. Its monic reciprocal is
/// `X^n - lambda L(X)` with `lambda = 1/alpha`, and the TSR takes
/// `g_T = L` and `B` the companion matrix of the minimal polynomial of
/// `lambda`.
pub fn construct_from_composition(f: &Poly, g: &Poly) -> Result<(TsrSpec, Provenance)> {
    let base = f.field().clone();
    let q = base.order();
    let m = f.deg().ok_or(Error::BadDegree { expected: ">= 1".into(), found: "-inf".into() })?;
    let n = g.deg().ok_or(Error::BadDegree { expected: ">= 1".into(), found: "-inf".into() })?;
    if !g.constant_term().is_zero() || !g.is_monic() {
        return Err(Error::Invalid(format!("{g} must be monic with g(0) = 0")));
    }
    let ext = Field::extension(base.characteristic(), m as u32, Some(f))?;
    let alpha = if m == 1 { ext.neg(f.constant_term()) } else { ext.generator_symbol().unwrap() };
    let k = &g.lift(&ext)? - &Poly::constant(&ext, alpha);
    let lambda = ext.inv(alpha).ok_or(Error::ZeroElement)?;
    let recip = reciprocal(&k)?;
    // L = (X^n - reciprocal) / lambda
    let neg_alpha = ext.neg(alpha);
    let l_ext = Poly::new(&ext, recip.coeffs()[..n].iter().map(|&x| ext.mul(x, neg_alpha)).collect());
    let l = l_ext.descend(&base)?;
    if l.constant_term() != Fe::ONE {
        return Err(Error::ExistenceViolation(format!("L(0) != 1 for {recip}")));
    }
    let h = minimal_polynomial(&ext, lambda, q)?;
    let a = companion_matrix(&h)?;
    let c: Vec<Fe> = (1..n).map(|i| l.coeff(i)).collect();
    let spec = TsrSpec::new(&base, m, n, c, a.clone())?;
    let cp = conjugate_product(&recip, q)?;
    Ok((
        spec,
        Provenance {
            f: f.clone(),
            g: g.clone(),
            ext,
            alpha,
            k,
            lambda,
            reciprocal: recip,
            l,
            h,
            a,
            conjugate_product: cp,
        },
    ))
}

/// Scan primitive `f` of degree `m` (outer) and monic `g` of degree `n`
/// with `g(0) = 0` (inner), both lexicographic, for a primitive `f(g(X))`,
/// then assemble the TSR.
pub fn search_primitive_tsr(q: u64, m: usize, n: usize, opts: &SearchOptions) -> Result<SearchResult> {
    check_dims(m, n)?;
    let base = prime_base(q)?;
    if q >= 3 && n.is_multiple_of(2) && !opts.allow_even_n {
        return Err(Error::InvalidParity { q, n: n as u32 });
    }
    let fs = primitive_monics(&base, m)?;
    let g_count = q.pow(n as u32 - 1);
    let total = fs.len() as u64 * g_count;
    let limit = total.min(opts.budget);
    let hit = first_hit(limit, |i| {
        let f = &fs[(i / g_count) as usize];
        let g = monic_lex(&base, n, 1, i % g_count);
        is_primitive(&f.compose(&g))
    })?;
    let Some(i) = hit else {
        return Err(Error::BudgetExhausted { tried: limit });
    };
    let f = &fs[(i / g_count) as usize];
    let g = monic_lex(&base, n, 1, i % g_count);
    let (spec, provenance) = construct_from_composition(f, &g)?;
    let charpoly = tsr_charpoly_formula(&spec)?;
    if charpoly != provenance.conjugate_product || charpoly != tsr_charpoly_direct(&spec)? {
        return Err(Error::ExistenceViolation(format!(
            "characteristic polynomial {charpoly} disagrees with {}",
            provenance.conjugate_product
        )));
    }
    let certificate = is_primitive_poly(&charpoly)?
        .ok_or_else(|| Error::ExistenceViolation(format!("{charpoly} is not primitive")))?;
    Ok(SearchResult { spec, charpoly, certificate, provenance, candidates_tried: i + 1 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConjectureForm {
    /// Primitive `G(X) + lambda` over `F_(q^m)`.
    Direct,
    /// Primitive `f(G(X))` over `F_q` with `f` primitive of degree `m`.
    Composition,
}

impl FromStr for ConjectureForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(ConjectureForm::Direct),
            "composition" => Ok(ConjectureForm::Composition),
            _ => Err(Error::UnknownKind(s.to_string())),
        }
    }
}

impl fmt::Display for ConjectureForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConjectureForm::Direct => "direct",
            ConjectureForm::Composition => "composition",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjectureWitness {
    pub q: u64,
    pub m: usize,
    pub n: usize,
    pub form: ConjectureForm,
    pub found: bool,
    pub candidates_tried: u64,
    /// `G + lambda` over `F_(q^m)` (default modulus), `G` monic with
    /// `G(0) = 0` and `-lambda` primitive.
    pub direct: Option<Poly>,
    /// `(f, G)` over `F_q`.
    pub composition: Option<(Poly, Poly)>,
    /// The witness of the scanned form was converted to the other form and
    /// the converted witness passed its own primitivity test.
    pub cross_verified: bool,
}

impl ConjectureWitness {
    pub fn to_json(&self) -> Value {
        json!({
            "q": self.q,
            "m": self.m,
            "n": self.n,
            "form": self.form.to_string(),
            "found": self.found,
            "candidates_tried": self.candidates_tried,
            "direct": self.direct.as_ref().map(|p| p.to_string()),
            "composition": self.composition.as_ref().map(|(f, g)| json!({"f": f.to_string(), "g": g.to_string()})),
            "cross_verified": self.cross_verified,
        })
    }
}

/// `(f, G)` from a direct witness: `f` is the minimal polynomial of
/// `-lambda`. Returns `None` when the converted pair is not a witness.
pub fn direct_to_composition(w: &Poly, base_order: u64) -> Result<Option<(Poly, Poly)>> {
    let ext = w.field().clone();
    let base = prime_base(base_order)?;
    let lambda = w.constant_term();
    let g = (w - &Poly::constant(&ext, lambda)).descend(&base)?;
    let f = minimal_polynomial(&ext, ext.neg(lambda), base_order)?;
    let m = (ext.degree() / ext.subfield_degree(base_order)?) as usize;
    if f.deg() != Some(m) || !is_primitive(&f)? || !is_primitive(&f.compose(&g))? {
        return Ok(None);
    }
    Ok(Some((f, g)))
}

/// `G + lambda` over `ext` from a composition witness, with `-lambda` the
/// first root of `f` in `ext`.
pub fn composition_to_direct(f: &Poly, g: &Poly, ext: &Field) -> Result<Option<Poly>> {
    let lifted = f.lift(ext)?;
    let Some(beta) = ext.nonzero_elements().find(|&x| lifted.eval(x).is_zero()) else {
        return Ok(None);
    };
    let w = &g.lift(ext)? + &Poly::constant(ext, ext.neg(beta));
    Ok(is_primitive(&w)?.then_some(w))
}

pub fn verify_conjecture(q: u64, m: usize, n: usize, form: ConjectureForm, budget: u64) -> Result<ConjectureWitness> {
    check_dims(m, n)?;
    let base = prime_base(q)?;
    let ext = Field::with_order(q.checked_pow(m as u32).ok_or(Error::FieldTooLarge(sat_pow(q, m as u32)))?)?;
    let g_count = q.pow(n as u32 - 1);
    let mut w = ConjectureWitness {
        q,
        m,
        n,
        form,
        found: false,
        candidates_tried: 0,
        direct: None,
        composition: None,
        cross_verified: false,
    };
    match form {
        ConjectureForm::Direct => {
            let mut lambdas: Vec<Fe> = primitive_elements(&ext).iter().map(|&x| ext.neg(x)).collect();
            lambdas.sort_unstable();
            let per = lambdas.len() as u64;
            let total = g_count * per;
            let limit = total.min(budget);
            let build = |i: u64| -> Result<Poly> {
                let g = monic_lex(&base, n, 1, i / per).lift(&ext)?;
                Ok(&g + &Poly::constant(&ext, lambdas[(i % per) as usize]))
            };
            let hit = first_hit(limit, |i| is_primitive(&build(i)?))?;
            w.candidates_tried = hit.map_or(limit, |i| i + 1);
            match hit {
                Some(i) => {
                    let p = build(i)?;
                    w.composition = direct_to_composition(&p, q)?;
                    w.cross_verified = w.composition.is_some();
                    w.direct = Some(p);
                    w.found = true;
                }
                None if limit < total => return Err(Error::BudgetExhausted { tried: limit }),
                None => {}
            }
        }
        ConjectureForm::Composition => {
            let fs = primitive_monics(&base, m)?;
            let total = fs.len() as u64 * g_count;
            let limit = total.min(budget);
            let hit = first_hit(limit, |i| {
                let g = monic_lex(&base, n, 1, i % g_count);
                is_primitive(&fs[(i / g_count) as usize].compose(&g))
            })?;
            w.candidates_tried = hit.map_or(limit, |i| i + 1);
            match hit {
                Some(i) => {
                    let f = fs[(i / g_count) as usize].clone();
                    let g = monic_lex(&base, n, 1, i % g_count);
                    w.direct = composition_to_direct(&f, &g, &ext)?;
                    w.cross_verified = w.direct.is_some();
                    w.composition = Some((f, g));
                    w.found = true;
                }
                None if limit < total => return Err(Error::BudgetExhausted { tried: limit }),
                None => {}
            }
        }
    }
    Ok(w)
}

/// First primitive `X^2 + lambda X + lambda` over F_(2^m), scanning
/// primitive `lambda` by index.
pub fn find_trace_one_quadratic(m: u32) -> Result<Poly> {
    if m == 0 {
        return Err(Error::Invalid("m must be positive".into()));
    }
    Guards::check("field order 2^(2m)", sat_pow(2, 2 * m), Guards::default().field_order)?;
    let field = Field::extension(2, m, None)?;
    for lambda in primitive_elements(&field) {
        let p = Poly::new(&field, vec![lambda, lambda, Fe::ONE]);
        if is_primitive(&p)? {
            return Ok(p);
        }
    }
    Err(Error::ExistenceViolation(format!("no primitive X^2 + lambda X + lambda over F_(2^{m})")))
}
