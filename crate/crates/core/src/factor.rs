//! Integer factorization for group orders up to 2^64.
//!
//! Trial division by the primes below 10^6, then Pollard rho with Brent's
//! cycle detection on whatever cofactor remains. Primality of cofactors is
//! decided by Miller-Rabin with a witness set that is deterministic below 2^64.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 1_000_000;
const RHO_RETRIES: u64 = 64;
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Prime factorization of a positive integer, primes ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub n: u128,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn product(&self) -> u128 {
        self.factors.iter().fold(1u128, |acc, &(p, e)| acc * (p as u128).pow(e))
    }

    /// Euler's totient of `n`.
    pub fn totient(&self) -> u128 {
        self.factors.iter().fold(1u128, |acc, &(p, e)| acc * (p as u128 - 1) * (p as u128).pow(e - 1))
    }

    /// All positive divisors of `n`, ascending.
    pub fn divisors(&self) -> Vec<u128> {
        let mut divs = vec![1u128];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u128;
            for _ in 0..e {
                pk *= p as u128;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }
}

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = TRIAL_LIMIT as usize;
        let mut sieve = vec![true; limit + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= limit {
            if sieve[i] {
                let mut j = i * i;
                while j <= limit {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        sieve.iter().enumerate().filter_map(|(i, &b)| b.then_some(i as u64)).collect()
    })
}

fn factor_cache() -> &'static RwLock<HashMap<u128, Factorization>> {
    static CACHE: OnceLock<RwLock<HashMap<u128, Factorization>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho: returns a nontrivial factor of the odd
/// composite `n`, or `None` if this polynomial offset cycles without one.
fn brent(n: u64, offset: u64) -> Option<u64> {
    let f = |x: u64| (mul_mod(x, x, n) + offset) % n;
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut g = 1u64;
    let mut x = y;
    let mut ys = y;
    const M: u64 = 128;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..M.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += M;
        }
        r *= 2;
        if r > 1 << 26 {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn split_large(n: u64, out: &mut Vec<u64>) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    if is_prime(n) {
        out.push(n);
        return Ok(());
    }
    let root = (n as f64).sqrt() as u64;
    for r in root.saturating_sub(1)..=root + 1 {
        if r > 1 && r.checked_mul(r) == Some(n) {
            split_large(r, out)?;
            return split_large(r, out);
        }
    }
    for offset in 1..=RHO_RETRIES {
        if let Some(d) = brent(n, offset) {
            split_large(d, out)?;
            return split_large(n / d, out);
        }
    }
    Err(Error::FactorizationFailed(n))
}

/// Complete prime factorization of `n` (1 <= n <= 2^64).
pub fn factor_integer(n: u128) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Invalid("cannot factor 0".into()));
    }
    if n > 1u128 << 64 {
        return Err(Error::FactorizationOverflow(n));
    }
    if let Some(f) = factor_cache().read().unwrap().get(&n) {
        return Ok(f.clone());
    }
    let mut rest = n;
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for &p in small_primes() {
        let pp = p as u128;
        if pp * pp > rest {
            break;
        }
        if rest.is_multiple_of(pp) {
            let mut e = 0;
            while rest.is_multiple_of(pp) {
                rest /= pp;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if rest > 1 {
        // every prime below 10^6 is gone, so rest < 2^64 unless n was 2^64
        let rest = u64::try_from(rest).map_err(|_| Error::FactorizationOverflow(n))?;
        let mut big = Vec::new();
        split_large(rest, &mut big)?;
        big.sort_unstable();
        for p in big {
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
    }
    factors.sort_unstable();
    let f = Factorization { n, factors };
    factor_cache().write().unwrap().insert(n, f.clone());
    Ok(f)
}

/// Euler's totient.
pub fn totient(n: u128) -> Result<u128> {
    Ok(factor_integer(n)?.totient())
}

/// Möbius function.
pub fn mobius(n: u128) -> Result<i32> {
    let f = factor_integer(n)?;
    if !f.is_squarefree() {
        return Ok(0);
    }
    Ok(if f.factors.len() % 2 == 0 { 1 } else { -1 })
}

/// Returns `(p, k)` with `q = p^k`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let f = factor_integer(q as u128).ok()?;
    match f.factors.as_slice() {
        [(p, k)] => Some((*p, *k)),
        _ => None,
    }
}

/// Checked `base^exp` in u128.
pub fn checked_pow(base: u64, exp: u32) -> Option<u128> {
    (base as u128).checked_pow(exp)
}
