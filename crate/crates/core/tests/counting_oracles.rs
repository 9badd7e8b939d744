//! Closed-form counts and factorizations against brute force written with
//! plain integer arithmetic mod p.

use std::collections::HashSet;

use num_bigint::BigUint;
use proptest::prelude::*;

use tsrforge::enumeration::{closed_form_count, gl_order, CountKind};
use tsrforge::factor::{factor_integer, is_prime, totient};

fn mul_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// Remainder of `a` modulo monic `f`.
fn rem_mod_p(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let n = f.len() - 1;
    let mut a = a.to_vec();
    while a.len() > n {
        let top = a.pop().unwrap();
        let shift = a.len() - n;
        for i in 0..n {
            a[shift + i] = (a[shift + i] + (p - top) * f[i]) % p;
        }
    }
    a
}

/// Monic polynomials of degree `d`, little-endian.
fn monics(p: u64, d: usize) -> Vec<Vec<u64>> {
    (0..p.pow(d as u32))
        .map(|mut i| {
            let mut c: Vec<u64> = (0..d)
                .map(|_| {
                    let v = i % p;
                    i /= p;
                    v
                })
                .collect();
            c.push(1);
            c
        })
        .collect()
}

fn x_order(f: &[u64], p: u64) -> Option<u64> {
    let n = f.len() - 1;
    if f[0] == 0 {
        return None;
    }
    let mut one = vec![0; n];
    one[0] = 1;
    let mut acc = rem_mod_p(&[0, 1], f, p);
    acc.resize(n, 0);
    let mut k = 1;
    while acc != one {
        acc = rem_mod_p(&mul_mod_p(&acc, &[0, 1], p), f, p);
        acc.resize(n, 0);
        k += 1;
        if k > p.pow(n as u32) {
            return None;
        }
    }
    Some(k)
}

fn reducible_set(p: u64, d: usize) -> HashSet<Vec<u64>> {
    let mut out = HashSet::new();
    for i in 1..=d / 2 {
        for a in monics(p, i) {
            for b in monics(p, d - i) {
                out.insert(mul_mod_p(&a, &b, p));
            }
        }
    }
    out
}

#[test]
fn primitive_polynomial_counts() {
    for (p, d) in [(2u64, 2usize), (2, 3), (2, 4), (2, 5), (2, 6), (3, 2), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2)] {
        let full = p.pow(d as u32) - 1;
        let brute = monics(p, d).iter().filter(|f| x_order(f, p) == Some(full)).count();
        let formula = closed_form_count(CountKind::LfsrPrim, p, 1, d as u32).unwrap();
        assert_eq!(formula, BigUint::from(brute), "p={p} d={d}");
    }
}

#[test]
fn irreducible_polynomial_counts() {
    for (p, d) in [(2u64, 2usize), (2, 3), (2, 4), (2, 6), (3, 2), (3, 3), (3, 4), (5, 3)] {
        let brute = p.pow(d as u32) as usize - reducible_set(p, d).len();
        let formula = closed_form_count(CountKind::LfsrIrr, p, 1, d as u32).unwrap();
        assert_eq!(formula, BigUint::from(brute), "p={p} d={d}");
    }
}

fn det_mod_p(mut a: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = a.len();
    let mut det = 1;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| a[r][c] != 0) else {
            return 0;
        };
        if piv != c {
            a.swap(piv, c);
            det = (p - det) % p;
        }
        det = det * a[c][c] % p;
        let inv = (1..p).find(|&x| x * a[c][c] % p == 1).unwrap();
        for r in c + 1..n {
            let factor = a[r][c] * inv % p;
            for k in c..n {
                a[r][k] = (a[r][k] + (p - factor) * a[c][k]) % p;
            }
        }
    }
    det
}

#[test]
fn general_linear_group_orders() {
    for (p, m) in [(2u64, 2usize), (2, 3), (3, 2), (5, 2), (2, 4)] {
        let total = p.pow((m * m) as u32);
        let invertible = (0..total)
            .filter(|&idx| {
                let mut i = idx;
                let a: Vec<Vec<u64>> = (0..m)
                    .map(|_| {
                        (0..m)
                            .map(|_| {
                                let v = i % p;
                                i /= p;
                                v
                            })
                            .collect()
                    })
                    .collect();
                det_mod_p(a, p) != 0
            })
            .count();
        assert_eq!(gl_order(p, m as u32), BigUint::from(invertible), "p={p} m={m}");
    }
}

fn trial_division(mut n: u128) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        let mut e = 0;
        while n.is_multiple_of(d) {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d as u64, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n as u64, 1));
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #[test]
    fn factorization_matches_trial_division(n in 2u64..5_000_000) {
        let f = factor_integer(n as u128).unwrap();
        prop_assert_eq!(f.factors, trial_division(n as u128));
    }

    #[test]
    fn large_factorizations_multiply_back(n in 1u64 << 40..u64::MAX) {
        let f = factor_integer(n as u128).unwrap();
        prop_assert_eq!(f.product(), n as u128);
        prop_assert!(f.factors.iter().all(|&(p, _)| is_prime(p)));
    }

    #[test]
    fn totient_matches_gcd_count(n in 1u64..3000) {
        let count = (1..=n).filter(|&k| gcd(k, n) == 1).count() as u128;
        prop_assert_eq!(totient(n as u128).unwrap(), count);
    }
}
