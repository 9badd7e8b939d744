use std::collections::HashMap;

use num_integer::Integer;
use rayon::prelude::*;

use crate::config::Guards;
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::poly::Poly;
use crate::primitivity::is_primitive_element;

/// Orbits of the units modulo `2^(2m) - 1` under doubling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetPartition {
    pub m: u32,
    pub modulus: u64,
    pub cosets: Vec<Vec<u64>>,
    pub leaders: Vec<u64>,
}

fn check_m(m: u32, guards: &Guards) -> Result<()> {
    if m == 0 {
        return Err(Error::Invalid("m must be positive".into()));
    }
    Guards::check("coset parameter m", m as u128, guards.coset_m as u128)
}

/// Doubling modulo `2^bits - 1` rotates the `bits`-bit representation.
fn rotate(i: u64, bits: u32) -> u64 {
    let mask = (1u64 << bits) - 1;
    ((i << 1) | (i >> (bits - 1))) & mask
}

/// Whether `i` is the smallest element of its doubling orbit.
pub fn is_coset_leader(i: u64, bits: u32) -> bool {
    let mut r = rotate(i, bits);
    for _ in 1..bits {
        if r < i {
            return false;
        }
        r = rotate(r, bits);
    }
    true
}

fn leaders(m: u32) -> Vec<u64> {
    let bits = 2 * m;
    let modulus = (1u64 << bits) - 1;
    (1..=modulus).into_par_iter().filter(|&i| is_coset_leader(i, bits) && i.gcd(&modulus) == 1).collect()
}

pub fn cyclotomic_partition(m: u32, guards: &Guards) -> Result<CosetPartition> {
    check_m(m, guards)?;
    let bits = 2 * m;
    let modulus = (1u64 << bits) - 1;
    let leaders = leaders(m);
    let cosets = leaders
        .iter()
        .map(|&j| {
            let mut c = vec![j];
            let mut r = (j * 2) % modulus;
            while r != j {
                c.push(r);
                r = (r * 2) % modulus;
            }
            c.sort_unstable();
            c
        })
        .collect();
    Ok(CosetPartition { m, modulus, cosets, leaders })
}

/// Result of classifying the coset leaders by relative trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceOneTally {
    pub m: u32,
    /// Classes whose relative trace equals 1.
    pub r: u64,
    /// `r * m`, the number of primitive `X^2 + X + mu` over F_(2^m).
    pub p2m2: u64,
    /// Classes whose trace is a Frobenius conjugate of 1 without being 1.
    pub tripwire: u64,
    pub classes: u64,
    pub trace_one_leaders: Vec<u64>,
}

fn big_field(m: u32) -> Result<Field> {
    Field::extension(2, 2 * m, None)
}

/// `alpha^j + alpha^(j 2^m)` with `alpha = X` in the Conway model of
/// F_(2^(2m)).
fn relative_trace(field: &Field, m: u32, j: u64) -> Fe {
    let alpha = field.generator_symbol().unwrap_or(Fe::ONE);
    let b = field.pow(alpha, j);
    let mut c = b;
    for _ in 0..m {
        c = field.square(c);
    }
    field.add(b, c)
}

pub fn count_trace_one_classes(m: u32, guards: &Guards) -> Result<TraceOneTally> {
    check_m(m, guards)?;
    let field = big_field(m)?;
    let leaders = leaders(m);
    let traces: Vec<(u64, Fe)> = leaders.par_iter().map(|&j| (j, relative_trace(&field, m, j))).collect();
    let mut trace_one_leaders = Vec::new();
    let mut tripwire = 0;
    for &(j, t) in &traces {
        if t == Fe::ONE {
            trace_one_leaders.push(j);
        } else {
            let mut s = t;
            for _ in 0..2 * m {
                s = field.square(s);
                if s == Fe::ONE {
                    tripwire += 1;
                    break;
                }
            }
        }
    }
    let r = trace_one_leaders.len() as u64;
    Ok(TraceOneTally { m, r, p2m2: r * m as u64, tripwire, classes: leaders.len() as u64, trace_one_leaders })
}

/// Element-level count of primitive `beta` in F_(2^(2m)) with
/// `beta + beta^(2^m) = 1`, by scanning the whole field.
pub fn count_trace_one_primitive_elements(m: u32, guards: &Guards) -> Result<u64> {
    check_m(m, guards)?;
    let field = big_field(m)?;
    Guards::check("field order 2^(2m)", field.order() as u128, guards.field_order)?;
    let hits: Vec<Fe> = (1..field.order())
        .into_par_iter()
        .map(|i| field.element(i).unwrap())
        .filter(|&b| {
            let mut c = b;
            for _ in 0..m {
                c = field.square(c);
            }
            field.add(b, c) == Fe::ONE
        })
        .collect();
    let mut count = 0;
    for b in hits {
        if is_primitive_element(&field, b)? {
            count += 1;
        }
    }
    Ok(count)
}

/// One conjugate class with its trace, norm and the `m` quadratics
/// `X^2 - t_i X + n_i` over F_(2^m).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugateClassSummary {
    pub leader: u64,
    pub trace: Fe,
    pub norm: Fe,
    pub quadratics: Vec<Poly>,
}

/// Map F_(2^m) into F_(2^(2m)); both use Conway moduli, so the generator of
/// the small field goes to `alpha^(2^m + 1)`.
fn embedding(small: &Field, big: &Field, m: u32) -> Result<Vec<Fe>> {
    let alpha = big.generator_symbol().unwrap_or(Fe::ONE);
    let gamma = big.pow(alpha, (1u64 << m) + 1);
    let mut powers = vec![Fe::ONE];
    for _ in 1..m {
        let last = *powers.last().unwrap();
        powers.push(big.mul(last, gamma));
    }
    small
        .elements()
        .map(|x| {
            let cs = small.coeffs(x);
            Ok(cs.iter().zip(&powers).filter(|(&c, _)| c == 1).fold(Fe::ZERO, |acc, (_, &p)| big.add(acc, p)))
        })
        .collect()
}

pub fn conjugate_class_summary(m: u32, leader: u64, guards: &Guards) -> Result<ConjugateClassSummary> {
    check_m(m, guards)?;
    let big = big_field(m)?;
    let small = Field::extension(2, m, None)?;
    if !big.uses_conway_modulus() || !small.uses_conway_modulus() {
        return Err(Error::Invalid(format!("no Conway moduli tabulated for m = {m}")));
    }
    let emb = embedding(&small, &big, m)?;
    let back: HashMap<Fe, Fe> = small.elements().zip(emb.iter().copied()).map(|(s, b)| (b, s)).collect();
    let pull = |x: Fe| back.get(&x).copied().ok_or_else(|| Error::Invalid("value outside the subfield".into()));
    let alpha = big.generator_symbol().unwrap_or(Fe::ONE);
    let modulus = (1u64 << (2 * m)) - 1;
    let mut quadratics = Vec::with_capacity(m as usize);
    let mut first = None;
    for i in 0..m {
        let e = ((leader as u128 * (1u128 << i)) % modulus as u128) as u64;
        let b = big.pow(alpha, e);
        let mut c = b;
        for _ in 0..m {
            c = big.square(c);
        }
        let t = pull(big.add(b, c))?;
        let nm = pull(big.mul(b, c))?;
        if first.is_none() {
            first = Some((t, nm));
        }
        quadratics.push(Poly::new(&small, vec![nm, small.neg(t), Fe::ONE]));
    }
    let (trace, norm) = first.unwrap();
    Ok(ConjugateClassSummary { leader, trace, norm, quadratics })
}
