use rayon::prelude::*;

use crate::config::{sat_pow, Guards};
use crate::error::{Error, Result};
use crate::factor::is_prime;
use crate::field::{Fe, Field};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::primitivity::{is_primitive, primitive_elements};
use crate::tsr::{is_primitive_tsr, TsrSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialForm {
    /// `X^n - mu g(X)`, `g(0) = 1`, `deg g <= n - 1`, `mu` primitive.
    Pqmn,
    /// `G(X) + lambda`, `G` monic of degree n with `G(0) = 0`, `-lambda`
    /// primitive. These are the monic reciprocals of the `Pqmn` form.
    Pmnq,
}

fn prime_base(q: u64) -> Result<Field> {
    if !is_prime(q) {
        return Err(Error::NonPrimeBase(q));
    }
    Field::prime(q)
}

/// Digits of `idx` in base `q`, least significant first, as elements.
fn digits(field: &Field, q: u64, mut idx: u64, len: usize) -> Vec<Fe> {
    (0..len)
        .map(|_| {
            let d = field.from_int((idx % q) as i64);
            idx /= q;
            d
        })
        .collect()
}

/// Elements of `F_q` read as lexicographic tuples with the first entry most
/// significant.
fn tuple(field: &Field, q: u64, idx: u64, len: usize) -> Vec<Fe> {
    let mut d = digits(field, q, idx, len);
    d.reverse();
    d
}

fn sort_by_text(mut v: Vec<Poly>) -> Vec<Poly> {
    v.sort_by_cached_key(|p| p.to_string());
    v
}

/// All members of the chosen special form over `F_(q^m)`, sorted by their
/// text encoding.
pub fn enumerate_special_primitives(q: u64, m: u32, n: usize, form: SpecialForm, guards: &Guards) -> Result<Vec<Poly>> {
    prime_base(q)?;
    if n == 0 || m == 0 {
        return Err(Error::Invalid("m and n must be positive".into()));
    }
    let ext = Field::with_order(q.pow(m))?;
    let prims = primitive_elements(&ext);
    let g_count = q.pow(n as u32 - 1);
    Guards::check(
        "special-form candidates q^(n-1) * phi(q^m - 1)",
        g_count as u128 * prims.len() as u128,
        guards.special,
    )?;
    let lambdas: Vec<Fe> = match form {
        SpecialForm::Pqmn => prims,
        SpecialForm::Pmnq => prims.iter().map(|&x| ext.neg(x)).collect(),
    };
    let found: Vec<Poly> = (0..g_count)
        .into_par_iter()
        .flat_map_iter(|gi| {
            let lower = digits(&ext, q, gi, n - 1);
            let lambdas = &lambdas;
            let ext = &ext;
            let base: Vec<Fe> = match form {
                SpecialForm::Pqmn => {
                    let mut c = vec![Fe::ONE];
                    c.extend(lower);
                    c
                }
                SpecialForm::Pmnq => {
                    let mut c = vec![Fe::ZERO];
                    c.extend(lower);
                    c.push(Fe::ONE);
                    c
                }
            };
            lambdas.iter().filter_map(move |&l| {
                let p = match form {
                    SpecialForm::Pqmn => {
                        let mut c: Vec<Fe> = base.iter().map(|&x| ext.neg(ext.mul(l, x))).collect();
                        c.push(Fe::ONE);
                        Poly::new(ext, c)
                    }
                    SpecialForm::Pmnq => {
                        let mut c = base.clone();
                        c[0] = l;
                        Poly::new(ext, c)
                    }
                };
                is_primitive(&p).unwrap().then_some(p)
            })
        })
        .collect();
    Ok(sort_by_text(found))
}

/// Members `G + lambda` of the `Pmnq` form for one fixed `G` over `F_q`.
pub fn enumerate_family(ext: &Field, g: &Poly) -> Result<Vec<Poly>> {
    let lifted = g.lift(ext)?;
    if !lifted.is_monic() || !lifted.constant_term().is_zero() {
        return Err(Error::Invalid(format!("{g} must be monic with zero constant term")));
    }
    let found: Vec<Poly> = primitive_elements(ext)
        .into_par_iter()
        .filter_map(|mu| {
            let p = &lifted + &Poly::constant(ext, ext.neg(mu));
            is_primitive(&p).unwrap().then_some(p)
        })
        .collect();
    Ok(sort_by_text(found))
}

/// Every matrix in `M_m(F_q)` in lexicographic order of the row-major entry
/// tuple.
fn all_matrices<'a>(field: &'a Field, m: usize, guards: &Guards) -> Result<impl ParallelIterator<Item = Matrix> + 'a> {
    let q = field.order();
    let total = sat_pow(q, (m * m) as u32);
    Guards::check("matrix space q^(m^2)", total, guards.matrices)?;
    Ok((0..total as u64).into_par_iter().map(move |idx| Matrix::from_flat(field, m, m, tuple(field, q, idx, m * m))))
}

/// Exhaustive count of matrices with characteristic polynomial `p`.
pub fn count_matrices_with_charpoly(p: &Poly, guards: &Guards) -> Result<u64> {
    let m = p.deg().ok_or(Error::BadDegree { expected: ">= 1".into(), found: "-inf".into() })?;
    let field = p.field();
    let target = p.monic();
    Ok(all_matrices(field, m, guards)?.filter(|a| a.charpoly().unwrap() == target).count() as u64)
}

pub fn enumerate_gl(field: &Field, m: usize, guards: &Guards) -> Result<Vec<Matrix>> {
    Ok(all_matrices(field, m, guards)?.filter(|a| a.is_invertible()).collect())
}

/// Every primitive TSR, ordered by `(c_1, ..., c_(n-1))` then `B`, both
/// lexicographic.
pub fn enumerate_tsrp_bruteforce(q: u64, m: usize, n: usize, guards: &Guards) -> Result<Vec<TsrSpec>> {
    let field = Field::with_order(q)?;
    let gl = enumerate_gl(&field, m, guards)?;
    let c_count = q.pow(n as u32 - 1);
    Guards::check("TSR candidates q^(n-1) |GL_m(F_q)|", c_count as u128 * gl.len() as u128, guards.enumeration)?;
    let total = c_count * gl.len() as u64;
    let found = (0..total)
        .into_par_iter()
        .filter_map(|idx| {
            let ci = idx / gl.len() as u64;
            let b = gl[(idx % gl.len() as u64) as usize].clone();
            let spec = TsrSpec::new(&field, m, n, tuple(&field, q, ci, n - 1), b).unwrap();
            is_primitive_tsr(&spec).unwrap().then_some(spec)
        })
        .collect();
    Ok(found)
}
