//! Prime and extension fields of order up to 2^32.
//!
//! An element of F_{p^k} is stored as its index `sum c_i p^i`, where
//! `c_0 + c_1 a + ... + c_{k-1} a^{k-1}` is its expansion in the power basis
//! of the modulus root `a`. Index order is therefore lexicographic order on
//! `(c_{k-1}, ..., c_0)`, which is the enumeration order used everywhere.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::conway;
use crate::error::{Error, Result};
use crate::factor::{factor_integer, is_prime, prime_power, Factorization};
use crate::poly::Poly;
use crate::primitivity;

/// A field element, meaningful only together with the [`Field`] it came from.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Fe(pub(crate) u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn index(self) -> u64 {
        self.0 as u64
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

const TABLE_LIMIT: u64 = 1 << 16;
const MAX_DEGREE: usize = 32;

enum Arith {
    Prime,
    /// Modulus bit pattern including the leading `x^k` bit.
    Binary(u64),
    Tables {
        exp: Vec<u32>,
        log: Vec<u32>,
    },
    Generic,
}

struct Inner {
    p: u32,
    k: u32,
    order: u64,
    /// Monic modulus, little-endian, length k + 1. Empty for prime fields.
    modulus: Vec<u32>,
    arith: Arith,
}

/// A finite field F_{p^k}. Cheap to clone; shareable across threads.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.k == other.inner.k
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.k == 1 {
            write!(f, "F_{}", self.inner.p)
        } else {
            write!(
                f,
                "F_{} = F_{}[a]/({})",
                self.inner.order,
                self.inner.p,
                crate::text::format_digits(&self.inner.modulus, 'a')
            )
        }
    }
}

impl Field {
    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<Field> {
        if p < 2 || !is_prime(p) {
            return Err(Error::CompositeCharacteristic(p));
        }
        if p > u32::MAX as u64 {
            return Err(Error::FieldTooLarge(p as u128));
        }
        Ok(Field { inner: Arc::new(Inner { p: p as u32, k: 1, order: p, modulus: Vec::new(), arith: Arith::Prime }) })
    }

    /// F_{p^k}. With no modulus the built-in Conway table is consulted, then
    /// the lexicographically least primitive polynomial of degree `k`.
    pub fn extension(p: u64, k: u32, modulus: Option<&Poly>) -> Result<Field> {
        let base = Field::prime(p)?;
        if k == 0 {
            return Err(Error::Invalid("extension degree must be at least 1".into()));
        }
        let order = (p as u128)
            .checked_pow(k)
            .filter(|&o| o <= 1u128 << 32)
            .ok_or(Error::FieldTooLarge((p as u128).saturating_pow(k)))?;
        if order == 1u128 << 32 {
            // indices must fit in u32
            return Err(Error::FieldTooLarge(order));
        }
        if k == 1 {
            if let Some(m) = modulus {
                if m.field() != &base || !m.is_monic() || m.deg() != Some(1) {
                    return Err(Error::BadModulus { expected: 1 });
                }
            }
            return Ok(base);
        }
        let digits: Vec<u32> = match modulus {
            Some(m) => {
                if m.field() != &base || !m.is_monic() || m.deg() != Some(k as usize) {
                    return Err(Error::BadModulus { expected: k });
                }
                if !primitivity::is_irreducible(m)? {
                    return Err(Error::ReducibleModulus(p as u32));
                }
                m.coeffs().iter().map(|c| c.0).collect()
            }
            None => match conway::lookup(p as u32, k) {
                Some(c) => c.to_vec(),
                None => least_primitive_modulus(&base, k)?,
            },
        };
        Ok(Self::from_modulus_unchecked(p as u32, k, digits))
    }

    /// The field with `q` elements, built from the default modulus.
    pub fn with_order(q: u64) -> Result<Field> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Field::extension(p, k, None)
    }

    fn from_modulus_unchecked(p: u32, k: u32, modulus: Vec<u32>) -> Field {
        debug_assert_eq!(modulus.len(), k as usize + 1);
        let order = (p as u64).pow(k);
        let arith = if p == 2 {
            Arith::Binary(modulus.iter().enumerate().fold(0u64, |acc, (i, &c)| acc | ((c as u64) << i)))
        } else {
            Arith::Generic
        };
        let field = Field { inner: Arc::new(Inner { p, k, order, modulus, arith }) };
        if p != 2 && order <= TABLE_LIMIT {
            return field.with_tables();
        }
        field
    }

    fn with_tables(self) -> Field {
        let g = primitivity::first_primitive_element(&self).expect("a finite field always has a primitive element");
        let q = self.inner.order as usize;
        let mut exp = vec![0u32; q - 1];
        let mut log = vec![0u32; q];
        let mut x = Fe::ONE;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = x.0;
            log[x.0 as usize] = i as u32;
            x = self.mul(x, g);
        }
        let Inner { p, k, order, modulus, .. } = &*self.inner;
        Field {
            inner: Arc::new(Inner {
                p: *p,
                k: *k,
                order: *order,
                modulus: modulus.clone(),
                arith: Arith::Tables { exp, log },
            }),
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.inner.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.inner.k
    }

    pub fn order(&self) -> u64 {
        self.inner.order
    }

    pub fn is_prime_field(&self) -> bool {
        self.inner.k == 1
    }

    /// The defining modulus over F_p (`None` for prime fields).
    pub fn modulus(&self) -> Option<Poly> {
        if self.inner.k == 1 {
            return None;
        }
        let base = self.prime_subfield();
        Some(Poly::new(&base, self.inner.modulus.iter().map(|&c| Fe(c)).collect()))
    }

    pub fn modulus_digits(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn uses_conway_modulus(&self) -> bool {
        self.inner.k == 1 || conway::lookup(self.inner.p, self.inner.k) == Some(&self.inner.modulus[..])
    }

    pub fn prime_subfield(&self) -> Field {
        if self.inner.k == 1 {
            self.clone()
        } else {
            Field::prime(self.inner.p as u64).expect("characteristic is prime")
        }
    }

    /// Factorization of `|F| - 1`.
    pub fn group_order_factors(&self) -> Factorization {
        factor_integer(self.inner.order as u128 - 1).expect("field order below 2^32")
    }

    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    /// The power-basis generator `a` (class of X modulo the modulus).
    pub fn generator_symbol(&self) -> Option<Fe> {
        (self.inner.k > 1).then_some(Fe(self.inner.p))
    }

    pub fn element(&self, index: u64) -> Result<Fe> {
        if index >= self.inner.order {
            return Err(Error::ElementOutOfRange { index, order: self.inner.order });
        }
        Ok(Fe(index as u32))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.inner.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.inner.order).map(|i| Fe(i as u32))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (1..self.inner.order).map(|i| Fe(i as u32))
    }

    pub fn in_prime_subfield(&self, x: Fe) -> bool {
        x.0 < self.inner.p
    }

    /// Power-basis coordinates `(c_0, ..., c_{k-1})`.
    pub fn coeffs(&self, x: Fe) -> Vec<u32> {
        let mut d = [0u64; MAX_DEGREE];
        self.unpack(x.0, &mut d);
        d[..self.inner.k as usize].iter().map(|&c| c as u32).collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Fe> {
        if coeffs.len() > self.inner.k as usize {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for a degree-{} field",
                coeffs.len(),
                self.inner.k
            )));
        }
        let mut d = [0u64; MAX_DEGREE];
        for (slot, &c) in d.iter_mut().zip(coeffs) {
            *slot = (c % self.inner.p) as u64;
        }
        Ok(Fe(self.pack(&d)))
    }

    #[inline]
    fn unpack(&self, mut x: u32, out: &mut [u64]) {
        let p = self.inner.p;
        if p == 2 {
            for slot in out.iter_mut().take(self.inner.k as usize) {
                *slot = (x & 1) as u64;
                x >>= 1;
            }
            return;
        }
        for slot in out.iter_mut().take(self.inner.k as usize) {
            *slot = (x % p) as u64;
            x /= p;
        }
    }

    #[inline]
    fn pack(&self, d: &[u64]) -> u32 {
        let p = self.inner.p as u64;
        let mut acc = 0u64;
        for i in (0..self.inner.k as usize).rev() {
            acc = acc * p + d[i];
        }
        acc as u32
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let p = self.inner.p;
        if p == 2 {
            return Fe(a.0 ^ b.0);
        }
        if self.inner.k == 1 {
            let s = a.0 as u64 + b.0 as u64;
            return Fe((if s >= p as u64 { s - p as u64 } else { s }) as u32);
        }
        let (mut da, mut db) = ([0u64; MAX_DEGREE], [0u64; MAX_DEGREE]);
        self.unpack(a.0, &mut da);
        self.unpack(b.0, &mut db);
        for i in 0..self.inner.k as usize {
            da[i] = (da[i] + db[i]) % p as u64;
        }
        Fe(self.pack(&da))
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        let p = self.inner.p;
        if p == 2 || a.0 == 0 {
            return a;
        }
        if self.inner.k == 1 {
            return Fe(p - a.0);
        }
        let mut d = [0u64; MAX_DEGREE];
        self.unpack(a.0, &mut d);
        for c in d.iter_mut().take(self.inner.k as usize) {
            *c = (p as u64 - *c) % p as u64;
        }
        Fe(self.pack(&d))
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        match &self.inner.arith {
            Arith::Prime => Fe(((a.0 as u64 * b.0 as u64) % self.inner.p as u64) as u32),
            Arith::Binary(modulus) => Fe(binary_mul(a.0, b.0, *modulus, self.inner.k)),
            Arith::Tables { exp, log } => {
                let n = exp.len() as u64;
                let e = (log[a.0 as usize] as u64 + log[b.0 as usize] as u64) % n;
                Fe(exp[e as usize])
            }
            Arith::Generic => self.mul_generic(a, b),
        }
    }

    fn mul_generic(&self, a: Fe, b: Fe) -> Fe {
        let k = self.inner.k as usize;
        let p = self.inner.p as u64;
        let (mut da, mut db) = ([0u64; MAX_DEGREE], [0u64; MAX_DEGREE]);
        self.unpack(a.0, &mut da);
        self.unpack(b.0, &mut db);
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..k {
            if da[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        let m = &self.inner.modulus;
        for d in (k..2 * k - 1).rev() {
            let c = prod[d] % p;
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for i in 0..k {
                let t = c * ((p - m[i] as u64) % p) % p;
                prod[d - k + i] = (prod[d - k + i] + t) % p;
            }
        }
        Fe(self.pack(&prod[..k]))
    }

    pub fn square(&self, a: Fe) -> Fe {
        self.mul(a, a)
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        if let Arith::Tables { exp, log } = &self.inner.arith {
            if a.0 == 0 {
                return if e == 0 { Fe::ONE } else { Fe::ZERO };
            }
            let n = exp.len() as u128;
            return Fe(exp[((log[a.0 as usize] as u128 * e as u128) % n) as usize]);
        }
        let mut acc = Fe::ONE;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn pow_big(&self, a: Fe, e: &BigUint) -> Fe {
        let mut acc = Fe::ONE;
        for i in (0..e.bits()).rev() {
            acc = self.mul(acc, acc);
            if e.bit(i) {
                acc = self.mul(acc, a);
            }
        }
        acc
    }

    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a.0 == 0 {
            return None;
        }
        Some(match &self.inner.arith {
            Arith::Prime => {
                let p = self.inner.p as i64;
                let (mut r0, mut r1) = (p, a.0 as i64);
                let (mut t0, mut t1) = (0i64, 1i64);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (t0, t1) = (t1, t0 - q * t1);
                }
                Fe(t0.rem_euclid(p) as u32)
            }
            Arith::Tables { exp, log } => {
                let n = exp.len();
                Fe(exp[(n - log[a.0 as usize] as usize) % n])
            }
            _ => self.pow(a, self.inner.order - 2),
        })
    }

    pub fn div(&self, a: Fe, b: Fe) -> Option<Fe> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    /// `x^(base_order^i)`, the i-th power of the Frobenius relative to the
    /// subfield with `base_order` elements.
    pub fn frobenius(&self, x: Fe, base_order: u64, i: u32) -> Result<Fe> {
        let j = self.subfield_degree(base_order)?;
        let steps = (self.inner.k / j) as u64;
        let i = i as u64 % steps;
        let mut y = x;
        for _ in 0..i * j as u64 {
            y = self.pow(y, self.inner.p as u64);
        }
        Ok(y)
    }

    /// `j` with `base_order = p^j` and `j | k`.
    pub fn subfield_degree(&self, base_order: u64) -> Result<u32> {
        let err = Error::BaseNotSubfield { base: base_order, order: self.inner.order };
        let (p, j) = prime_power(base_order).ok_or(err.clone())?;
        if p != self.inner.p as u64 || !self.inner.k.is_multiple_of(j) {
            return Err(err);
        }
        Ok(j)
    }
}

#[inline]
fn binary_mul(a: u32, b: u32, modulus: u64, k: u32) -> u32 {
    let (a, mut b) = (a as u64, b as u64);
    let mut prod = 0u64;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            prod ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    let mut top = 63 - prod.leading_zeros().min(63) as i32;
    while prod != 0 && top >= k as i32 {
        prod ^= modulus << (top - k as i32);
        top = 63 - prod.leading_zeros().min(63) as i32;
    }
    prod as u32
}

/// Smallest primitive monic polynomial of degree `k` over `base` in
/// lexicographic coefficient order.
fn least_primitive_modulus(base: &Field, k: u32) -> Result<Vec<u32>> {
    let p = base.order();
    let count = p.checked_pow(k).ok_or(Error::FieldTooLarge(p as u128))?;
    for idx in 0..count {
        let mut coeffs = Vec::with_capacity(k as usize + 1);
        let mut rest = idx;
        for _ in 0..k {
            coeffs.push(Fe((rest % p) as u32));
            rest /= p;
        }
        coeffs.push(Fe::ONE);
        if coeffs[0].is_zero() {
            continue;
        }
        let f = Poly::new(base, coeffs);
        if primitivity::is_primitive_poly(&f)?.is_some() {
            return Ok(f.coeffs().iter().map(|c| c.0).collect());
        }
    }
    Err(Error::ExistenceViolation(format!("no primitive polynomial of degree {k} over F_{p}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f4() -> Field {
        let f2 = Field::prime(2).unwrap();
        let m = Poly::from_ints(&f2, &[1, 1, 1]);
        Field::extension(2, 2, Some(&m)).unwrap()
    }

    #[test]
    fn prime_field_examples() {
        assert_eq!(Field::prime(2).unwrap().order(), 2);
        assert_eq!(Field::prime(13).unwrap().order(), 13);
        assert_eq!(Field::prime(4), Err(Error::CompositeCharacteristic(4)));
        assert_eq!(Field::prime(1), Err(Error::CompositeCharacteristic(1)));
    }

    #[test]
    fn extension_field_examples() {
        let f = f4();
        assert_eq!(f.order(), 4);
        let f2 = Field::prime(2).unwrap();
        let bad = Poly::from_ints(&f2, &[1, 0, 1]);
        assert_eq!(Field::extension(2, 2, Some(&bad)).unwrap_err(), Error::ReducibleModulus(2));
        let f9 = Field::extension(3, 2, None).unwrap();
        assert_eq!(f9.modulus_digits(), &[2, 2, 1]);
        assert!(f9.uses_conway_modulus());
    }

    #[test]
    fn frobenius_examples() {
        let f = f4();
        let a = f.generator_symbol().unwrap();
        assert_eq!(f.frobenius(a, 2, 0).unwrap(), a);
        // a^2 = a + 1
        assert_eq!(f.frobenius(a, 2, 1).unwrap(), f.add(a, Fe::ONE));
        assert_eq!(f.frobenius(a, 2, 2).unwrap(), a);
        assert!(matches!(f.frobenius(a, 3, 1), Err(Error::BaseNotSubfield { .. })));
        let f16 = Field::with_order(16).unwrap();
        assert!(f16.frobenius(a, 8, 1).is_err());
        assert!(f16.frobenius(a, 4, 1).is_ok());
    }

    fn sample_fields() -> Vec<Field> {
        [2u64, 3, 13, 4, 8, 9, 16, 25, 27, 49, 125, 169, 1 << 10, 3u64.pow(7), 5u64.pow(7), 1 << 20]
            .iter()
            .map(|&q| Field::with_order(q).unwrap())
            .collect()
    }

    #[test]
    fn field_axioms_on_random_samples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for f in sample_fields() {
            for _ in 0..1000 {
                let q = f.order();
                let (a, b, c) =
                    (Fe(rng.gen_range(0..q) as u32), Fe(rng.gen_range(0..q) as u32), Fe(rng.gen_range(0..q) as u32));
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)), "{f}");
                assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)), "{f}");
                assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE, "{f}");
                }
            }
        }
    }

    #[test]
    fn tables_agree_with_generic_multiplication() {
        let f = Field::with_order(81).unwrap();
        assert!(matches!(f.inner.arith, Arith::Tables { .. }));
        for a in f.elements() {
            for b in f.elements().step_by(7) {
                assert_eq!(f.mul(a, b), f.mul_generic(a, b));
            }
        }
    }

    #[test]
    fn frobenius_is_an_automorphism_exhaustively() {
        for q in [4u64, 8, 16, 9, 27, 81, 1 << 12, 625] {
            let f = Field::with_order(q).unwrap();
            let p = f.characteristic();
            let k = f.degree();
            let xs: Vec<Fe> = f.elements().collect();
            for &x in &xs {
                assert_eq!(f.frobenius(x, p, k).unwrap(), x);
            }
            for &x in xs.iter().step_by(3) {
                for &y in xs.iter().step_by(11) {
                    let fx = f.frobenius(x, p, 1).unwrap();
                    let fy = f.frobenius(y, p, 1).unwrap();
                    assert_eq!(f.frobenius(f.add(x, y), p, 1).unwrap(), f.add(fx, fy));
                    assert_eq!(f.frobenius(f.mul(x, y), p, 1).unwrap(), f.mul(fx, fy));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn coeffs_roundtrip(idx in 0u64..(1u64 << 20)) {
            let f = Field::with_order(1 << 20).unwrap();
            let x = f.element(idx).unwrap();
            prop_assert_eq!(f.from_coeffs(&f.coeffs(x)).unwrap(), x);
        }

        #[test]
        fn frobenius_sampled_large_field(idx in 1u64..(1u64 << 20), jdx in 1u64..(1u64 << 20)) {
            let f = Field::with_order(1 << 20).unwrap();
            let (x, y) = (f.element(idx).unwrap(), f.element(jdx).unwrap());
            prop_assert_eq!(f.frobenius(x, 4, 10).unwrap(), x);
            let s = |z| f.frobenius(z, 2, 1).unwrap();
            prop_assert_eq!(s(f.mul(x, y)), f.mul(s(x), s(y)));
            prop_assert_eq!(s(f.add(x, y)), f.add(s(x), s(y)));
        }
    }
}
