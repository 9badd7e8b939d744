use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::factor::{factor_integer, mobius};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountKind {
    /// Primitive LFSRs of order n over F_q.
    LfsrPrim,
    /// Irreducible LFSRs of order n over F_q.
    LfsrIrr,
    /// Primitive sigma-LFSRs of order n over F_(q^m).
    SigmaPrim,
    /// Irreducible sigma-LFSRs of order n over F_(q^m).
    SigmaIrr,
    /// |GL_m(F_q)|.
    GlOrder,
    /// Primitive TSRs of order 1.
    TsrOrder1,
    /// Primitive TSRs with m = 1.
    TsrM1,
}

impl FromStr for CountKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "lfsr_prim" => CountKind::LfsrPrim,
            "lfsr_irr" => CountKind::LfsrIrr,
            "sigma_prim" => CountKind::SigmaPrim,
            "sigma_irr" => CountKind::SigmaIrr,
            "gl_order" => CountKind::GlOrder,
            "tsr_order1" => CountKind::TsrOrder1,
            "tsr_m1" => CountKind::TsrM1,
            other => return Err(Error::UnknownKind(other.to_string())),
        })
    }
}

fn big_pow(q: u64, e: u64) -> BigUint {
    BigUint::from(q).pow(e as u32)
}

fn phi_of_power_minus_one(q: u64, e: u64) -> Result<BigUint> {
    let v = (q as u128).checked_pow(e as u32).ok_or(Error::FactorizationOverflow(u128::MAX))? - 1;
    Ok(BigUint::from(factor_integer(v)?.totient()))
}

fn exact_div(a: BigUint, b: &BigUint) -> Result<BigUint> {
    let (quo, rem) = a.div_rem(b);
    if !rem.is_zero() {
        return Err(Error::Invalid(format!("{a} is not divisible by {b}")));
    }
    Ok(quo)
}

/// `prod_{i=0}^{m-1} (q^m - q^i)`.
pub fn gl_order(q: u64, m: u32) -> BigUint {
    let qm = big_pow(q, m as u64);
    (0..m).map(|i| &qm - big_pow(q, i as u64)).product()
}

/// `prod_{i=1}^{m-1} (q^m - q^i)`: matrices with a given primitive
/// characteristic polynomial.
fn fiber(q: u64, m: u32) -> BigUint {
    let qm = big_pow(q, m as u64);
    (1..m).map(|i| &qm - big_pow(q, i as u64)).product()
}

/// `sum_{d | n} mu(d) q^(n/d)`.
fn necklace_sum(q: u64, n: u64) -> Result<BigUint> {
    let mut acc = BigInt::zero();
    for d in factor_integer(n as u128)?.divisors() {
        let mu = mobius(d)?;
        if mu != 0 {
            acc += BigInt::from(mu) * BigInt::from(big_pow(q, n / d as u64));
        }
    }
    acc.to_biguint().ok_or_else(|| Error::Invalid("negative necklace sum".into()))
}

pub fn closed_form_count(kind: CountKind, q: u64, m: u32, n: u32) -> Result<BigUint> {
    let (qq, m64, n64) = (q, m as u64, n as u64);
    match kind {
        CountKind::LfsrPrim | CountKind::TsrM1 => exact_div(phi_of_power_minus_one(qq, n64)?, &BigUint::from(n64)),
        CountKind::LfsrIrr => exact_div(necklace_sum(qq, n64)?, &BigUint::from(n64)),
        CountKind::SigmaPrim => {
            let mn = m64 * n64;
            let lead = exact_div(phi_of_power_minus_one(qq, mn)?, &BigUint::from(mn))?;
            Ok(lead * big_pow(qq, m64 * (m64 - 1) * (n64 - 1)) * fiber(qq, m))
        }
        CountKind::SigmaIrr => {
            let mn = m64 * n64;
            let total = big_pow(qq, m64 * (m64 - 1) * (n64 - 1)) * fiber(qq, m) * necklace_sum(qq, mn)?;
            exact_div(total, &BigUint::from(mn))
        }
        CountKind::GlOrder => Ok(gl_order(qq, m)),
        CountKind::TsrOrder1 => {
            let classes = exact_div(gl_order(qq, m), &(big_pow(qq, m64) - 1u32))?;
            let prim = exact_div(phi_of_power_minus_one(qq, m64)?, &BigUint::from(m64))?;
            Ok(classes * prim)
        }
    }
}

/// `(p_count / m) |GL_m(F_q)| / (q^m - 1)`.
pub fn tsrp_count_theorem(q: u64, m: u32, _n: u32, p_count: u64) -> Result<BigUint> {
    if !p_count.is_multiple_of(m as u64) {
        return Err(Error::FiberSizeViolation { m, count: p_count });
    }
    let classes = exact_div(gl_order(q, m), &(big_pow(q, m as u64) - 1u32))?;
    Ok(BigUint::from(p_count / m as u64) * classes)
}

/// `(number of admissible g) phi(q^m - 1)/m |GL_m(F_q)|/(q^m - 1)`, where the
/// admissible g are the monic degree-n polynomials over F_q with zero constant
/// term other than `X^n`; for n = 1 that leaves only `g = X`.
pub fn tsrp_upper_bound(q: u64, m: u32, n: u32) -> Result<BigUint> {
    let admissible = if n <= 1 { BigUint::from(1u32) } else { big_pow(q, n as u64 - 1) - 1u32 };
    let prim = exact_div(phi_of_power_minus_one(q, m as u64)?, &BigUint::from(m))?;
    let classes = exact_div(gl_order(q, m), &(big_pow(q, m as u64) - 1u32))?;
    Ok(admissible * prim * classes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn to_u64(v: &BigUint) -> Result<u64> {
        use num_traits::ToPrimitive;
        v.to_u64().ok_or_else(|| Error::Invalid(format!("{v} exceeds u64")))
    }

    fn c(kind: &str, q: u64, m: u32, n: u32) -> u64 {
        to_u64(&closed_form_count(kind.parse().unwrap(), q, m, n).unwrap()).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(c("lfsr_prim", 2, 1, 4), 2);
        assert_eq!(c("lfsr_irr", 2, 1, 3), 2);
        assert_eq!(c("gl_order", 2, 2, 1), 6);
        assert_eq!(c("sigma_prim", 2, 2, 2), 16);
        assert_eq!(c("tsr_m1", 3, 1, 2), 2);
        assert!(matches!("nope".parse::<CountKind>(), Err(Error::UnknownKind(_))));
    }

    #[test]
    fn necklace_counts_match_small_table() {
        // irreducible monic polynomials over F_2 of degree 1..8
        let expected = [2u64, 1, 2, 3, 6, 9, 18, 30];
        for (i, &e) in expected.iter().enumerate() {
            assert_eq!(c("lfsr_irr", 2, 1, i as u32 + 1), e);
        }
    }

    #[test]
    fn sigma_with_m1_is_lfsr() {
        for (q, n) in [(2u64, 5u32), (3, 4), (5, 3)] {
            assert_eq!(c("sigma_prim", q, 1, n), c("lfsr_prim", q, 1, n));
            assert_eq!(c("sigma_irr", q, 1, n), c("lfsr_irr", q, 1, n));
        }
    }

    #[test]
    fn theorem_examples() {
        assert_eq!(to_u64(&tsrp_count_theorem(2, 2, 2, 2).unwrap()).unwrap(), 2);
        assert_eq!(to_u64(&tsrp_count_theorem(2, 2, 3, 2).unwrap()).unwrap(), 2);
        assert!(matches!(tsrp_count_theorem(2, 3, 2, 4), Err(Error::FiberSizeViolation { .. })));
        // n = 1: p_count = phi(q^m - 1)
        let p = crate::factor::totient(8).unwrap() as u64;
        assert_eq!(tsrp_count_theorem(3, 2, 1, p).unwrap(), closed_form_count(CountKind::TsrOrder1, 3, 2, 1).unwrap());
        assert_eq!(to_u64(&tsrp_upper_bound(2, 2, 2).unwrap()).unwrap(), 2);
    }
}
