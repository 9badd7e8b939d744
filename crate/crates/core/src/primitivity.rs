//! Irreducibility and primitivity testing, primitive elements, minimal
//! polynomials and the Galois-conjugate product.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{factor_integer, is_prime, Factorization};
use crate::field::{Fe, Field};
use crate::poly::Poly;
use crate::text;

/// Evidence that `poly` is primitive: for every prime `l | group_order`,
/// `X^(group_order / l) mod poly` differs from 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitivityCertificate {
    pub poly: Poly,
    pub group_order: u128,
    pub factors: Factorization,
    pub witnesses: Vec<Poly>,
}

/// Serialized certificate. `field` carries enough to rebuild the coefficient
/// field; the modulus is written in `x` over F_p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub field: FieldJson,
    pub poly: String,
    pub group_order: u64,
    pub factors: Vec<(u64, u32)>,
    pub witnesses: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    pub p: u64,
    pub k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<String>,
}

impl FieldJson {
    pub fn describe(field: &Field) -> FieldJson {
        FieldJson {
            p: field.characteristic(),
            k: field.degree(),
            modulus: (!field.is_prime_field()).then(|| text::format_digits(field.modulus_digits(), 'x')),
        }
    }

    pub fn build(&self) -> Result<Field> {
        match &self.modulus {
            None => Field::extension(self.p, self.k, None),
            Some(m) => {
                let base = Field::prime(self.p)?;
                let m = text::parse_poly(&base, m)?;
                Field::extension(self.p, self.k, Some(&m))
            }
        }
    }
}

impl PrimitivityCertificate {
    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            field: FieldJson::describe(self.poly.field()),
            poly: self.poly.to_string(),
            group_order: self.group_order as u64,
            factors: self.factors.factors.clone(),
            witnesses: self.witnesses.iter().map(|w| w.to_string()).collect(),
        }
    }
}

/// Re-check a serialized certificate from scratch.
pub fn verify_certificate(c: &CertificateJson) -> Result<bool> {
    let field = c.field.build()?;
    let f = text::parse_poly(&field, &c.poly)?;
    let Some(n) = f.deg().filter(|&d| d >= 1) else {
        return Ok(false);
    };
    let expected = (field.order() as u128).checked_pow(n as u32).map(|v| v - 1);
    if expected != Some(c.group_order as u128) || !f.is_monic() {
        return Ok(false);
    }
    let product = c.factors.iter().try_fold(1u128, |acc, &(p, e)| acc.checked_mul((p as u128).checked_pow(e)?));
    if product != Some(c.group_order as u128) || !c.factors.iter().all(|&(p, _)| is_prime(p)) {
        return Ok(false);
    }
    if c.witnesses.len() != c.factors.len() || !is_irreducible(&f)? {
        return Ok(false);
    }
    let x = Poly::x(&field);
    for (&(l, _), w) in c.factors.iter().zip(&c.witnesses) {
        let w = text::parse_poly(&field, w)?;
        let e = BigUint::from(c.group_order / l);
        let actual = x.modpow_big(&e, &f)?;
        if actual != w || w.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn frobenius_power(x_pow: &Poly, q: u64, f: &Poly) -> Result<Poly> {
    x_pow.modpow(q, f)
}

/// Rabin's irreducibility test.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    let n = f
        .deg()
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::BadDegree { expected: ">= 1".into(), found: f.degree().to_string() })?;
    if n == 1 {
        return Ok(true);
    }
    let f = f.monic();
    let field = f.field().clone();
    let q = field.order();
    let x = Poly::x(&field);
    // xq[i] = X^(q^i) mod f
    let mut xq = Vec::with_capacity(n + 1);
    xq.push(x.rem(&f)?);
    for i in 1..=n {
        let next = frobenius_power(&xq[i - 1], q, &f)?;
        xq.push(next);
    }
    if xq[n] != xq[0] {
        return Ok(false);
    }
    let nf = factor_integer(n as u128)?;
    for l in nf.primes() {
        let d = n / l as usize;
        let g = (&xq[d] - &x).gcd(&f);
        if !g.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Primitivity test with certificate. Non-monic input is normalized first.
pub fn is_primitive_poly(f: &Poly) -> Result<Option<PrimitivityCertificate>> {
    let n = f
        .deg()
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::BadDegree { expected: ">= 1".into(), found: f.degree().to_string() })?;
    if f.constant_term().is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    let f = f.monic();
    if !is_irreducible(&f)? {
        return Ok(None);
    }
    let q = f.field().order();
    let group_order = (q as u128)
        .checked_pow(n as u32)
        .map(|v| v - 1)
        .filter(|&v| v < 1u128 << 64)
        .ok_or(Error::FactorizationOverflow((q as u128).saturating_pow(n as u32)))?;
    let factors = factor_integer(group_order)?;
    let x = Poly::x(f.field());
    let mut witnesses = Vec::with_capacity(factors.factors.len());
    for l in factors.primes() {
        let w = x.modpow_big(&BigUint::from(group_order / l as u128), &f)?;
        if w.is_one() {
            return Ok(None);
        }
        witnesses.push(w);
    }
    Ok(Some(PrimitivityCertificate { poly: f, group_order, factors, witnesses }))
}

pub fn is_primitive(f: &Poly) -> Result<bool> {
    Ok(is_primitive_poly(f)?.is_some())
}

/// Whether `x` generates the multiplicative group of `field`.
pub fn is_primitive_element(field: &Field, x: Fe) -> Result<bool> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let n = field.order() - 1;
    let fac = field.group_order_factors();
    let ok = fac.primes().all(|l| field.pow(x, n / l) != Fe::ONE);
    Ok(ok)
}

/// First primitive element in index order.
pub fn first_primitive_element(field: &Field) -> Result<Fe> {
    for x in field.nonzero_elements() {
        if is_primitive_element(field, x)? {
            return Ok(x);
        }
    }
    Err(Error::ExistenceViolation(format!("no primitive element in {field}")))
}

/// All primitive elements in index order.
pub fn primitive_elements(field: &Field) -> Vec<Fe> {
    let n = field.order() - 1;
    let primes: Vec<u64> = field.group_order_factors().primes().collect();
    field.nonzero_elements().filter(|&x| primes.iter().all(|&l| field.pow(x, n / l) != Fe::ONE)).collect()
}

fn prime_base(field: &Field, base_order: u64) -> Result<(Field, u32)> {
    let j = field.subfield_degree(base_order)?;
    if j != 1 {
        return Err(Error::NonPrimeBase(base_order));
    }
    Ok((field.prime_subfield(), field.degree()))
}

/// Minimal polynomial of `x` over the prime subfield with `base_order`
/// elements: the product of `X - y` over the Frobenius orbit of `x`.
pub fn minimal_polynomial(field: &Field, x: Fe, base_order: u64) -> Result<Poly> {
    let (base, _) = prime_base(field, base_order)?;
    let mut orbit = vec![x];
    loop {
        let next = field.pow(*orbit.last().unwrap(), base_order);
        if next == x {
            break;
        }
        orbit.push(next);
    }
    let mut acc = Poly::one(field);
    for y in orbit {
        acc = &acc * &Poly::new(field, vec![field.neg(y), Fe::ONE]);
    }
    acc.descend(&base)
}

/// Product of the Galois conjugates of `f`, descended to F_q.
pub fn conjugate_product(f: &Poly, base_order: u64) -> Result<Poly> {
    let field = f.field().clone();
    let (base, m) = prime_base(&field, base_order)?;
    let mut acc = Poly::one(&field);
    let mut conj = f.clone();
    for _ in 0..m {
        acc = &acc * &conj;
        conj = conj.map_coeffs(|c| field.pow(c, base_order));
    }
    acc.descend(&base)
}

/// Multiplicative order of `X` modulo `f` (`f(0) != 0`).
///
/// Starts from the exponent `lcm_{d <= n}(q^d - 1) * p^t` with `p^t >= n`,
/// which every such order divides, and strips prime factors while
/// `X^(E/l) = 1` still holds.
pub fn order_of_x(f: &Poly) -> Result<u64> {
    let n = f
        .deg()
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::BadDegree { expected: ">= 1".into(), found: f.degree().to_string() })?;
    if f.constant_term().is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    let f = f.monic();
    let field = f.field();
    let q = field.order();
    let p = field.characteristic();
    let mut exps: BTreeMap<u64, u32> = BTreeMap::new();
    for d in 1..=n as u32 {
        let v = (q as u128).checked_pow(d).ok_or(Error::FactorizationOverflow(u128::MAX))? - 1;
        for (l, e) in factor_integer(v)?.factors {
            let slot = exps.entry(l).or_insert(0);
            *slot = (*slot).max(e);
        }
    }
    let mut t = 0u32;
    while (p as u128).pow(t) < n as u128 {
        t += 1;
    }
    if t > 0 {
        *exps.entry(p).or_insert(0) += t;
    }
    let mut e = exps.iter().fold(BigUint::one(), |acc, (&l, &k)| acc * BigUint::from(l).pow(k));
    let x = Poly::x(field);
    for (&l, &k) in &exps {
        let lb = BigUint::from(l);
        for _ in 0..k {
            let cand = &e / &lb;
            if x.modpow_big(&cand, &f)?.is_one() {
                e = cand;
            } else {
                break;
            }
        }
    }
    u64::try_from(e).map_err(|_| Error::Invalid("order of X exceeds 2^64".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    fn brute_order(f: &Poly) -> u64 {
        let x = Poly::x(f.field());
        let mut acc = x.rem(f).unwrap();
        let mut k = 1;
        while !acc.is_one() {
            acc = (&acc * &x).rem(f).unwrap();
            k += 1;
        }
        k
    }

    fn all_monic(field: &Field, d: usize) -> Vec<Poly> {
        let q = field.order();
        (0..q.pow(d as u32))
            .map(|mut idx| {
                let mut v = Vec::new();
                for _ in 0..d {
                    v.push(field.element(idx % q).unwrap());
                    idx /= q;
                }
                v.push(Fe::ONE);
                Poly::new(field, v)
            })
            .collect()
    }

    #[test]
    fn irreducible_examples() {
        let f = f2();
        assert!(is_irreducible(&Poly::from_ints(&f, &[1, 1, 1])).unwrap());
        assert!(!is_irreducible(&Poly::from_ints(&f, &[1, 0, 1])).unwrap());
        assert!(is_irreducible(&Poly::from_ints(&f, &[1, 1, 1, 1, 1])).unwrap());
    }

    #[test]
    fn irreducible_matches_trial_division() {
        for q in [2u64, 3, 4, 5] {
            let field = Field::with_order(q).unwrap();
            let max_d = if q <= 3 { 6 } else { 4 };
            let small: Vec<Poly> = (1..=max_d / 2).flat_map(|d| all_monic(&field, d)).collect();
            for d in 1..=max_d {
                for f in all_monic(&field, d) {
                    let trial = small.iter().filter(|g| g.deg().unwrap() < d).all(|g| !f.rem(g).unwrap().is_zero());
                    assert_eq!(is_irreducible(&f).unwrap(), trial, "{f} over F_{q}");
                }
            }
        }
    }

    #[test]
    fn primitive_examples() {
        let f = f2();
        assert!(is_primitive(&Poly::from_ints(&f, &[1, 1, 1])).unwrap());
        assert!(!is_primitive(&Poly::from_ints(&f, &[1, 1, 1, 1, 1])).unwrap());
        assert_eq!(brute_order(&Poly::from_ints(&f, &[1, 1, 1, 1, 1])), 5);
        assert!(is_primitive(&Poly::from_ints(&f, &[1, 0, 0, 1, 1])).unwrap());
        assert_eq!(brute_order(&Poly::from_ints(&f, &[1, 0, 0, 1, 1])), 15);
        assert_eq!(is_primitive_poly(&Poly::from_ints(&f, &[0, 1, 1])).unwrap_err(), Error::ZeroConstantTerm);
    }

    #[test]
    fn certificate_verdict_matches_brute_order() {
        for q in [2u64, 3, 4, 5, 7, 9, 16] {
            let field = Field::with_order(q).unwrap();
            let mut d = 1;
            while q.pow(d as u32) <= 1 << 12 {
                for f in all_monic(&field, d) {
                    if f.constant_term().is_zero() {
                        continue;
                    }
                    let verdict = is_primitive(&f).unwrap();
                    if is_irreducible(&f).unwrap() {
                        let o = brute_order(&f);
                        assert_eq!((q.pow(d as u32) - 1) % o, 0);
                        assert_eq!(verdict, o == q.pow(d as u32) - 1, "{f}");
                        assert_eq!(order_of_x(&f).unwrap(), o);
                    } else {
                        assert!(!verdict);
                    }
                }
                d += if q > 4 { 2 } else { 1 };
            }
        }
    }

    #[test]
    fn order_of_x_reducible() {
        let f = f2();
        for g in all_monic(&f, 6).into_iter().filter(|g| !g.constant_term().is_zero()) {
            assert_eq!(order_of_x(&g).unwrap(), brute_order(&g), "{g}");
        }
        let f3 = Field::prime(3).unwrap();
        for g in all_monic(&f3, 4).into_iter().filter(|g| !g.constant_term().is_zero()) {
            assert_eq!(order_of_x(&g).unwrap(), brute_order(&g), "{g}");
        }
    }

    #[test]
    fn primitive_element_examples() {
        let f4 = Field::with_order(4).unwrap();
        assert!(!is_primitive_element(&f4, Fe::ONE).unwrap());
        assert!(is_primitive_element(&f4, f4.generator_symbol().unwrap()).unwrap());
        let f7 = Field::prime(7).unwrap();
        assert!(!is_primitive_element(&f7, f7.from_int(2)).unwrap());
        assert_eq!(is_primitive_element(&f7, Fe::ZERO), Err(Error::ZeroElement));
    }

    #[test]
    fn primitive_element_count_is_totient() {
        for q in [2u64, 3, 4, 8, 9, 25, 27, 49, 64, 81, 121, 125, 243, 256, 1024, 2048, 4096] {
            let field = Field::with_order(q).unwrap();
            let phi = crate::factor::totient(q as u128 - 1).unwrap();
            assert_eq!(primitive_elements(&field).len() as u128, phi, "q = {q}");
        }
    }

    #[test]
    fn minimal_polynomial_examples() {
        let f4 = Field::with_order(4).unwrap();
        let f2 = f2();
        assert_eq!(minimal_polynomial(&f4, Fe::ONE, 2).unwrap(), Poly::from_ints(&f2, &[1, 1]));
        assert_eq!(minimal_polynomial(&f4, Fe::ZERO, 2).unwrap(), Poly::from_ints(&f2, &[0, 1]));
        let a = f4.generator_symbol().unwrap();
        assert_eq!(minimal_polynomial(&f4, a, 2).unwrap(), Poly::from_ints(&f2, &[1, 1, 1]));
        assert!(matches!(minimal_polynomial(&f4, a, 3), Err(Error::BaseNotSubfield { .. })));
    }

    #[test]
    fn minimal_polynomial_properties() {
        for q in [16u64, 64, 81, 125] {
            let field = Field::with_order(q).unwrap();
            let p = field.characteristic();
            for x in field.elements() {
                let mp = minimal_polynomial(&field, x, p).unwrap();
                assert_eq!(field.degree() as usize % mp.deg().unwrap(), 0);
                let lifted = mp.lift(&field).unwrap();
                assert!(lifted.eval(x).is_zero());
                let mut orbit = 1;
                let mut y = field.pow(x, p);
                while y != x {
                    y = field.pow(y, p);
                    orbit += 1;
                }
                assert_eq!(mp.deg().unwrap(), orbit);
            }
        }
    }

    #[test]
    fn conjugate_product_examples() {
        let f4 = Field::with_order(4).unwrap();
        let a = f4.generator_symbol().unwrap();
        let f = Poly::new(&f4, vec![a, a, Fe::ONE]);
        let f2 = f2();
        // (X^2 + aX + a)(X^2 + (a+1)X + (a+1)) = X^4 + X^3 + 1
        let a1 = f4.add(a, Fe::ONE);
        let by_hand = &f * &Poly::new(&f4, vec![a1, a1, Fe::ONE]);
        assert_eq!(by_hand, Poly::from_ints(&f4, &[1, 0, 0, 1, 1]));
        assert_eq!(conjugate_product(&f, 2).unwrap(), Poly::from_ints(&f2, &[1, 0, 0, 1, 1]));
        // coefficients already in F_2: result is f^2
        let g = Poly::from_ints(&f4, &[1, 1, 0, 1]);
        let g2 = Poly::from_ints(&f2, &[1, 1, 0, 1]);
        assert_eq!(conjugate_product(&g, 2).unwrap(), g2.pow(2));
    }

    #[test]
    fn certificate_json_roundtrip_and_tamper() {
        let f9 = Field::with_order(9).unwrap();
        let cert = all_monic(&f9, 3)
            .iter()
            .filter(|f| !f.constant_term().is_zero())
            .find_map(|f| is_primitive_poly(f).unwrap())
            .expect("a primitive cubic over F_9");
        let json = cert.to_json();
        let s = serde_json::to_string(&json).unwrap();
        let back: CertificateJson = serde_json::from_str(&s).unwrap();
        assert!(verify_certificate(&back).unwrap());
        let mut bad = back.clone();
        bad.witnesses[0] = "1".into();
        assert!(!verify_certificate(&bad).unwrap());
        let mut bad = back;
        bad.group_order -= 1;
        assert!(!verify_certificate(&bad).unwrap());
    }
}
