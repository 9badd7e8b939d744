//! Named invariant checks over every module, at two scales.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{sat_pow, Guards};
use crate::conway;
use crate::enumeration::{
    closed_form_count, count_matrices_with_charpoly, count_trace_one_classes, count_trace_one_primitive_elements,
    cyclotomic_partition, enumerate_special_primitives, enumerate_tsrp_bruteforce, tsrp_count_theorem,
    tsrp_upper_bound, CountKind, SpecialForm,
};
use crate::error::Error;
use crate::factor::totient;
use crate::field::{Fe, Field};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::primitivity::{
    conjugate_product, is_irreducible, is_primitive, minimal_polynomial, order_of_x, primitive_elements,
};
use crate::search::{
    find_trace_one_quadratic, primitive_monics, search_primitive_tsr, verify_conjecture, ConjectureForm, SearchOptions,
    DEFAULT_BUDGET,
};
use crate::tables::{build_poly_table, TableId};
use crate::tsr::{
    build_transition_matrix, compose_gh, is_primitive_tsr, mn_decompositions, tsr_charpoly_direct,
    tsr_charpoly_formula, tsr_period, tsr_step, TsrSpec, TsrState,
};

/// r for m = 2..=12 and `|P_2(m,2)| = r m`.
pub const R_VALUES: [(u32, u64, u64); 11] = [
    (2, 1, 2),
    (3, 1, 3),
    (4, 1, 4),
    (5, 2, 10),
    (6, 3, 18),
    (7, 6, 42),
    (8, 7, 56),
    (9, 16, 144),
    (10, 25, 250),
    (11, 57, 627),
    (12, 68, 816),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl FromStr for Level {
    type Err = Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            _ => Err(Error::UnknownKind(s.to_string())),
        }
    }
}

/// Deliberate corruptions used as negative controls for the suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Shift `c_1` by one inside the closed-form characteristic polynomial.
    CharpolyFormula,
    /// Report one class too many in the trace-one tally.
    TraceCount,
}

impl FromStr for Fault {
    type Err = Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "charpoly-formula" => Ok(Fault::CharpolyFormula),
            "trace-count" => Ok(Fault::TraceCount),
            _ => Err(Error::UnknownKind(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CheckConfig {
    pub level: Level,
    pub fault: Option<Fault>,
    pub seed: u64,
    pub guards: Guards,
}

impl CheckConfig {
    pub fn new(level: Level) -> CheckConfig {
        CheckConfig { level, fault: None, seed: 0, guards: Guards::default() }
    }

    fn full(&self) -> bool {
        self.level == Level::Full
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ salt)
    }
}

type CheckResult = std::result::Result<String, String>;
type CheckFn = fn(&CheckConfig) -> CheckResult;

trait Fail<T> {
    fn ctx(self, what: &str) -> std::result::Result<T, String>;
}

impl<T> Fail<T> for crate::Result<T> {
    fn ctx(self, what: &str) -> std::result::Result<T, String> {
        self.map_err(|e| format!("{what}: {e}"))
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

const CHECKS: &[(&str, CheckFn)] = &[
    ("field_axioms", field_axioms),
    ("frobenius", frobenius),
    ("polynomial_division", polynomial_division),
    ("companion_charpoly", companion_charpoly),
    ("determinant_vs_charpoly", determinant_vs_charpoly),
    ("conway_moduli_primitive", conway_moduli_primitive),
    ("primitive_element_count", primitive_element_count),
    ("primitivity_vs_order", primitivity_vs_order),
    ("minimal_polynomials", minimal_polynomials),
    ("conjugate_product_descends", conjugate_product_descends),
    ("closed_form_counts", closed_form_counts),
    ("charpoly_formula_vs_direct", charpoly_formula_vs_direct),
    ("state_evolution", state_evolution),
    ("period_property", period_property),
    ("decomposition_unique", decomposition_unique),
    ("matrix_count_lemma", matrix_count_lemma),
    ("tsrp_count_theorem", tsrp_theorem),
    ("conjugate_fibers", conjugate_fibers),
    ("tsrp_upper_bound", upper_bound),
    ("coset_partition", coset_partition),
    ("r_table", r_table),
    ("trace_one_elements", trace_one_elements),
    ("search_soundness", search_soundness),
    ("conjecture_equivalence", conjecture_equivalence),
    ("trace_one_quadratic", trace_one_quadratic),
    ("table_listing_counts", table_listing_counts),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

/// Run every check in order, reporting each outcome as it completes.
pub fn run_checks(cfg: &CheckConfig, mut report: impl FnMut(&CheckOutcome)) -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|(name, f)| {
            let (passed, detail) = match f(cfg) {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            let out = CheckOutcome { name, passed, detail };
            report(&out);
            out
        })
        .collect()
}

fn random_elem(field: &Field, rng: &mut ChaCha8Rng) -> Fe {
    field.element(rng.gen_range(0..field.order())).unwrap()
}

fn random_poly(field: &Field, deg: usize, monic: bool, rng: &mut ChaCha8Rng) -> Poly {
    let mut c: Vec<Fe> = (0..=deg).map(|_| random_elem(field, rng)).collect();
    if monic {
        c[deg] = Fe::ONE;
    }
    Poly::new(field, c)
}

fn random_matrix(field: &Field, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    Matrix::from_flat(field, n, n, (0..n * n).map(|_| random_elem(field, rng)).collect())
}

fn field_orders(cfg: &CheckConfig) -> Vec<u64> {
    let mut v = vec![2, 3, 4, 7, 8, 9, 16, 25, 27, 49, 121, 243, 256, 1 << 12];
    if cfg.full() {
        v.extend([3u64.pow(10), 1 << 20, 5u64.pow(7)]);
    }
    v
}

fn field_axioms(cfg: &CheckConfig) -> CheckResult {
    let mut rng = cfg.rng(1);
    let orders = field_orders(cfg);
    for &q in &orders {
        let f = Field::with_order(q).ctx("field")?;
        for _ in 0..1000 {
            let (a, b, c) = (random_elem(&f, &mut rng), random_elem(&f, &mut rng), random_elem(&f, &mut rng));
            ensure(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)), || format!("+ not associative in F_{q}"))?;
            ensure(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)), || format!("* not associative in F_{q}"))?;
            ensure(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)), || format!("not distributive in F_{q}"))?;
            if !a.is_zero() {
                ensure(f.mul(a, f.inv(a).unwrap()) == Fe::ONE, || format!("bad inverse in F_{q}"))?;
            }
        }
    }
    Ok(format!("{} fields x 1000 triples", orders.len()))
}

fn frobenius(cfg: &CheckConfig) -> CheckResult {
    let mut rng = cfg.rng(2);
    let mut fields = 0;
    for q in field_orders(cfg) {
        let f = Field::with_order(q).ctx("field")?;
        let p = f.characteristic();
        let k = f.degree();
        for _ in 0..200 {
            let (a, b) = (random_elem(&f, &mut rng), random_elem(&f, &mut rng));
            let s = |x| f.frobenius(x, p, 1).unwrap();
            ensure(s(f.add(a, b)) == f.add(s(a), s(b)), || format!("frobenius not additive on F_{q}"))?;
            ensure(s(f.mul(a, b)) == f.mul(s(a), s(b)), || format!("frobenius not multiplicative on F_{q}"))?;
        }
        let closes = |x: Fe| f.frobenius(x, p, k).unwrap() == x;
        if q <= 1 << 12 {
            ensure(f.elements().all(closes), || format!("orbit does not close on F_{q}"))?;
        } else {
            ensure((0..500).all(|_| closes(random_elem(&f, &mut rng))), || format!("orbit does not close on F_{q}"))?;
        }
        fields += 1;
    }
    Ok(format!("{fields} fields"))
}

fn polynomial_division(cfg: &CheckConfig) -> CheckResult {
    let mut rng = cfg.rng(3);
    let mut pairs = 0;
    for q in [2u64, 5, 9, 16] {
        let f = Field::with_order(q).ctx("field")?;
        for _ in 0..200 {
            let a = random_poly(&f, rng.gen_range(0..12), false, &mut rng);
            let b = random_poly(&f, rng.gen_range(0..6), false, &mut rng);
            if b.is_zero() {
                continue;
            }
            let (quot, rem) = a.divrem(&b).ctx("divrem")?;
            ensure(&(&quot * &b) + &rem == a, || format!("quot*b + rem != a for {a} / {b}"))?;
            ensure(rem.degree() < b.degree(), || format!("remainder too large for {a} / {b}"))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs"))
}

fn companion_charpoly(cfg: &CheckConfig) -> CheckResult {
    let mut rng = cfg.rng(4);
    for q in [2u64, 3, 4, 7, 9] {
        let f = Field::with_order(q).ctx("field")?;
        for d in 1..=8 {
            let h = random_poly(&f, d, true, &mut rng);
            let c = Matrix::companion(&h).ctx("companion")?;
            ensure(c.charpoly().ctx("charpoly")? == h, || format!("charpoly(companion({h})) differs"))?;
        }
    }
    Ok("40 polynomials".into())
}

fn determinant_vs_charpoly(cfg: &CheckConfig) -> CheckResult {
    let mut rng = cfg.rng(5);
    for q in [2u64, 3, 5, 8, 25] {
        let f = Field::with_order(q).ctx("field")?;
        for n in 1..=7 {
            let m = random_matrix(&f, n, &mut rng);
            let det = m.det().ctx("det")?;
            let c0 = m.charpoly().ctx("charpoly")?.constant_term();
            let expect = if n % 2 == 0 { c0 } else { f.neg(c0) };
            ensure(det == expect, || format!("det vs charpoly mismatch over F_{q}, n = {n}"))?;
        }
    }
    Ok("35 matrices".into())
}

fn conway_moduli_primitive(cfg: &CheckConfig) -> CheckResult {
    let limit: u128 = if cfg.full() { 1 << 24 } else { 1 << 16 };
    let mut count = 0;
    for (p, k) in conway::entries() {
        if sat_pow(p as u64, k) > limit {
            continue;
        }
        let base = Field::prime(p as u64).ctx("field")?;
        let digits: Vec<Fe> = conway::lookup(p, k).unwrap().iter().map(|&d| base.from_int(d as i64)).collect();
        let f = Poly::new(&base, digits);
        ensure(is_primitive(&f).ctx("primitivity")?, || format!("tabulated modulus {f} over F_{p} is not primitive"))?;
        count += 1;
    }
    Ok(format!("{count} moduli"))
}

fn primitive_element_count(cfg: &CheckConfig) -> CheckResult {
    let _ = cfg;
    let orders = [
        2u64, 3, 4, 5, 8, 9, 16, 25, 27, 32, 49, 64, 81, 121, 125, 128, 243, 256, 343, 512, 625, 729, 1024, 2048, 4096,
    ];
    for q in orders {
        let f = Field::with_order(q).ctx("field")?;
        let got = primitive_elements(&f).len() as u128;
        let phi = totient(q as u128 - 1).ctx("totient")?;
        ensure(got == phi, || format!("F_{q}: {got} primitive elements, phi = {phi}"))?;
    }
    Ok(format!("{} fields", orders.len()))
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

fn primitivity_vs_order(cfg: &CheckConfig) -> CheckResult {
    let limit: u64 = if cfg.full() { 1 << 12 } else { 1 << 9 };
    let mut tested = 0;
    for q in [2u64, 3, 4, 5, 7] {
        let f = Field::with_order(q).ctx("field")?;
        let mut d = 1;
        while q.pow(d) <= limit {
            for i in 0..q.pow(d) {
                let mut c: Vec<Fe> = (0..d).map(|j| f.element(i / q.pow(j) % q).unwrap()).collect();
                c.push(Fe::ONE);
                let p = Poly::new(&f, c);
                if p.constant_term().is_zero() {
                    continue;
                }
                let prim = is_primitive(&p).ctx("primitivity")?;
                let irr = is_irreducible(&p).ctx("irreducibility")?;
                ensure(!prim || irr, || format!("{p} primitive but reducible"))?;
                let order = brute_order(&p);
                ensure(order == order_of_x(&p).ctx("order")?, || format!("order of X mod {p} disagrees"))?;
                if irr {
                    ensure((q.pow(d) - 1) % order == 0, || format!("order of X mod {p} does not divide q^d - 1"))?;
                }
                ensure(prim == (irr && order == q.pow(d) - 1), || format!("verdict on {p} disagrees with order"))?;
                tested += 1;
            }
            d += 1;
        }
    }
    Ok(format!("{tested} polynomials"))
}

fn minimal_polynomials(_: &CheckConfig) -> CheckResult {
    for q in [4u64, 16, 27, 25, 64] {
        let f = Field::with_order(q).ctx("field")?;
        let p = f.characteristic();
        for x in f.elements() {
            let mp = minimal_polynomial(&f, x, p).ctx("minimal polynomial")?;
            ensure(mp.lift(&f).ctx("lift")?.eval(x).is_zero(), || format!("minpoly {mp} misses its root in F_{q}"))?;
            let mut orbit = 1;
            let mut y = f.pow(x, p);
            while y != x {
                y = f.pow(y, p);
                orbit += 1;
            }
            ensure(mp.deg() == Some(orbit), || format!("minpoly {mp} degree differs from orbit {orbit}"))?;
        }
    }
    Ok("5 fields".into())
}

fn conjugate_product_descends(cfg: &CheckConfig) -> CheckResult {
    let mut rng = cfg.rng(6);
    for (q, m) in [(2u64, 2u32), (2, 3), (3, 2), (5, 2), (2, 4)] {
        let ext = Field::with_order(q.pow(m)).ctx("field")?;
        for _ in 0..30 {
            let d = rng.gen_range(1..5);
            let f = random_poly(&ext, d, true, &mut rng);
            let phi = conjugate_product(&f, q).ctx("conjugate product")?;
            ensure(phi.deg() == Some(m as usize * d), || format!("deg of product of conjugates of {f}"))?;
        }
    }
    Ok("150 polynomials".into())
}

fn closed_form_counts(_: &CheckConfig) -> CheckResult {
    let c = |k: CountKind, q, m, n| closed_form_count(k, q, m, n).ctx("count");
    ensure(c(CountKind::LfsrPrim, 2, 1, 4)? == BigUint::from(2u32), || "lfsr_prim(2,4) != 2".into())?;
    ensure(c(CountKind::LfsrIrr, 2, 1, 3)? == BigUint::from(2u32), || "lfsr_irr(2,3) != 2".into())?;
    ensure(c(CountKind::GlOrder, 2, 2, 1)? == BigUint::from(6u32), || "gl_order(2,2) != 6".into())?;
    ensure(c(CountKind::SigmaPrim, 2, 2, 2)? == BigUint::from(16u32), || "sigma_prim(2,2,2) != 16".into())?;
    // order-one registers are matrices with primitive characteristic polynomial
    let g = Guards::default();
    for (q, m) in [(2u64, 2u32), (2, 3), (3, 2), (5, 2)] {
        let brute = enumerate_tsrp_bruteforce(q, m as usize, 1, &g).ctx("brute force")?.len();
        let formula = c(CountKind::TsrOrder1, q, m, 1)?;
        ensure(formula == BigUint::from(brute), || format!("tsr_order1({q},{m}) = {formula}, brute force {brute}"))?;
    }
    for (q, n) in [(2u64, 3u32), (3, 2), (2, 5)] {
        let brute = enumerate_tsrp_bruteforce(q, 1, n as usize, &g).ctx("brute force")?.len();
        let formula = c(CountKind::TsrM1, q, 1, n)?;
        ensure(formula == BigUint::from(brute), || format!("tsr_m1({q},{n}) = {formula}, brute force {brute}"))?;
    }
    Ok("examples and 7 brute-force points".into())
}

/// The closed form, corrupted when the fault is active.
fn formula_under(cfg: &CheckConfig, spec: &TsrSpec) -> crate::Result<Poly> {
    if cfg.fault != Some(Fault::CharpolyFormula) || spec.n() < 2 {
        return tsr_charpoly_formula(spec);
    }
    let f = spec.field();
    let mut g = spec.g_t().coeffs().to_vec();
    g.resize(spec.n(), Fe::ZERO);
    g[1] = f.add(g[1], Fe::ONE);
    Ok(compose_gh(&Poly::new(f, g), &spec.b().charpoly()?, spec.n()))
}

fn charpoly_formula_vs_direct(cfg: &CheckConfig) -> CheckResult {
    let mut rng = cfg.rng(7);
    let mut count = 0;
    for q in [2u64, 3, 5] {
        let f = Field::prime(q).ctx("field")?;
        for m in 1..=3 {
            for n in 1..=3 {
                for _ in 0..100 {
                    let spec = TsrSpec::random(&f, m, n, &mut rng);
                    let a = formula_under(cfg, &spec).ctx("formula")?;
                    let b = tsr_charpoly_direct(&spec).ctx("determinant")?;
                    ensure(a == b, || format!("q={q} m={m} n={n}: formula {a} != determinant {b}"))?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} specs, 0 mismatches"))
}

fn state_evolution(cfg: &CheckConfig) -> CheckResult {
    let mut rng = cfg.rng(8);
    for (q, m, n) in [(2u64, 2usize, 3usize), (3, 2, 2), (5, 1, 3), (2, 3, 2)] {
        let f = Field::prime(q).ctx("field")?;
        for _ in 0..10 {
            let spec = TsrSpec::random(&f, m, n, &mut rng);
            let t = build_transition_matrix(&spec);
            let flat: Vec<Fe> = (0..m * n).map(|_| random_elem(&f, &mut rng)).collect();
            let mut s = TsrState::from_flat(&spec, &flat).ctx("state")?;
            let k = rng.gen_range(1..=50);
            for _ in 0..k {
                s = tsr_step(&spec, &s).ctx("step")?;
            }
            let direct = t.pow(k).ctx("power")?.vec_mul(&flat).ctx("product")?;
            ensure(s.flatten() == direct, || format!("state after {k} steps differs from S0 T^k"))?;
        }
    }
    Ok("40 runs".into())
}

fn orbit_length(spec: &TsrSpec, start: &TsrState, cap: u64) -> crate::Result<Option<u64>> {
    let mut s = tsr_step(spec, start)?;
    let mut k = 1;
    while s.blocks != start.blocks {
        if k >= cap {
            return Ok(None);
        }
        s = tsr_step(spec, &s)?;
        k += 1;
    }
    Ok(Some(k))
}

fn period_property(cfg: &CheckConfig) -> CheckResult {
    let limit: u128 = if cfg.full() { 1 << 16 } else { 1 << 12 };
    let draws = if cfg.full() { 40 } else { 15 };
    let mut rng = cfg.rng(9);
    let (mut prim, mut non) = (0, 0);
    for q in [2u64, 3, 5] {
        let f = Field::prime(q).ctx("field")?;
        for m in 1..=4usize {
            for n in 1..=4usize {
                let size = sat_pow(q, (m * n) as u32);
                if size > limit {
                    continue;
                }
                let full = (size - 1) as u64;
                let mut specs: Vec<TsrSpec> = (0..draws).map(|_| TsrSpec::random(&f, m, n, &mut rng)).collect();
                let opts = SearchOptions { allow_even_n: true, ..SearchOptions::default() };
                if let Ok(r) = search_primitive_tsr(q, m, n, &opts) {
                    specs.push(r.spec);
                }
                for spec in specs {
                    let mut start: Vec<Fe> = (0..m * n).map(|_| random_elem(&f, &mut rng)).collect();
                    if start.iter().all(|x| x.is_zero()) {
                        start[0] = Fe::ONE;
                    }
                    let start = TsrState::from_flat(&spec, &start).ctx("state")?;
                    let period = tsr_period(&spec).ctx("period")?;
                    if is_primitive_tsr(&spec).ctx("primitivity")? {
                        let len = orbit_length(&spec, &start, full).ctx("orbit")?;
                        ensure(len == Some(full) && period == full, || {
                            format!("primitive spec {:?} has orbit {len:?}, period {period}", spec.to_json())
                        })?;
                        prim += 1;
                    } else {
                        ensure(period < full, || {
                            format!("non-primitive spec {:?} has period {period}", spec.to_json())
                        })?;
                        let len = orbit_length(&spec, &start, full).ctx("orbit")?;
                        ensure(len.is_some_and(|l| period % l == 0), || {
                            format!("orbit {len:?} does not divide period {period}")
                        })?;
                        non += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{prim} primitive with full orbits, {non} non-primitive with smaller order"))
}

fn decomposition_unique(cfg: &CheckConfig) -> CheckResult {
    let limit: u128 = if cfg.full() { 1 << 16 } else { 1 << 10 };
    let mut rng = cfg.rng(10);
    let mut count = 0;
    for q in [2u64, 3, 5] {
        let f = Field::prime(q).ctx("field")?;
        for m in 1..=3usize {
            for n in 1..=4usize {
                if sat_pow(q, (m * n) as u32) > limit {
                    continue;
                }
                for _ in 0..20 {
                    let spec = TsrSpec::random(&f, m, n, &mut rng);
                    let psi = tsr_charpoly_formula(&spec).ctx("charpoly")?;
                    let all = mn_decompositions(&psi, m, n).ctx("decompose")?;
                    ensure(all.iter().all(|d| d.recompose(n) == psi), || format!("recomposition of {psi} differs"))?;
                    ensure(all.iter().any(|d| d.g == spec.g_t()), || format!("{psi} lost its own decomposition"))?;
                    if is_primitive(&psi).ctx("primitivity")? {
                        ensure(all.len() == 1, || format!("primitive {psi} has {} decompositions", all.len()))?;
                    }
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} characteristic polynomials"))
}

fn matrix_count_lemma(cfg: &CheckConfig) -> CheckResult {
    let mut points = vec![(2u64, 2usize), (3, 2)];
    if cfg.full() {
        points.extend([(2, 3), (5, 2)]);
    }
    let mut seen = Vec::new();
    for (q, m) in points {
        let f = Field::prime(q).ctx("field")?;
        let expect: u64 = (1..m as u32).map(|i| q.pow(m as u32) - q.pow(i)).product();
        for p in primitive_monics(&f, m).ctx("primitive polynomials")? {
            let got = count_matrices_with_charpoly(&p, &cfg.guards).ctx("matrix count")?;
            ensure(got == expect, || format!("{p} over F_{q}: {got} matrices, expected {expect}"))?;
        }
        seen.push(format!("q={q} m={m}: {expect}"));
    }
    Ok(seen.join(", "))
}

/// Points where the count theorem applies: odd `n` or `q = 2`.
pub const TSRP_GRID: [(u64, usize, usize); 6] = [(2, 2, 2), (2, 2, 3), (2, 3, 2), (3, 2, 3), (3, 2, 1), (5, 2, 1)];

fn tsrp_grid(cfg: &CheckConfig) -> Vec<(u64, usize, usize)> {
    let mut v = TSRP_GRID.to_vec();
    if cfg.full() {
        v.extend([(2, 2, 4), (2, 3, 3), (2, 2, 5), (3, 1, 3), (5, 1, 3)]);
    }
    v
}

fn tsrp_theorem(cfg: &CheckConfig) -> CheckResult {
    let mut out = Vec::new();
    for (q, m, n) in tsrp_grid(cfg) {
        let brute = enumerate_tsrp_bruteforce(q, m, n, &cfg.guards).ctx("brute force")?.len();
        let p = enumerate_special_primitives(q, m as u32, n, SpecialForm::Pqmn, &cfg.guards).ctx("special form")?.len()
            as u64;
        let thm = tsrp_count_theorem(q, m as u32, n as u32, p).ctx("theorem")?;
        ensure(thm == BigUint::from(brute), || format!("({q},{m},{n}): brute force {brute}, theorem {thm}"))?;
        out.push(format!("({q},{m},{n})={brute}"));
    }
    Ok(out.join(" "))
}

fn conjugate_fibers(cfg: &CheckConfig) -> CheckResult {
    let mut points = vec![(2u64, 2u32, 3usize), (3, 2, 3), (2, 3, 2)];
    if cfg.full() {
        points.extend([(2, 2, 4), (5, 2, 3), (2, 4, 2)]);
    }
    for &(q, m, n) in &points {
        let mut images: Vec<Poly> = Vec::new();
        for p in enumerate_special_primitives(q, m, n, SpecialForm::Pqmn, &cfg.guards).ctx("special form")? {
            let img = conjugate_product(&p, q).ctx("conjugate product")?;
            ensure(is_primitive(&img).ctx("primitivity")?, || format!("product of conjugates of {p} not primitive"))?;
            ensure(mn_decompositions(&img, m as usize, n).ctx("decompose")?.len() == 1, || {
                format!("{img} is not uniquely decomposable")
            })?;
            images.push(img);
        }
        let total = images.len();
        images.sort_by_cached_key(|p| p.to_string());
        images.dedup();
        ensure(total == images.len() * m as usize, || {
            format!("({q},{m},{n}): {total} preimages over {} images", images.len())
        })?;
    }
    Ok(format!("{} points", points.len()))
}

fn upper_bound(cfg: &CheckConfig) -> CheckResult {
    for (q, m, n) in tsrp_grid(cfg) {
        let brute = enumerate_tsrp_bruteforce(q, m, n, &cfg.guards).ctx("brute force")?.len();
        let bound = tsrp_upper_bound(q, m as u32, n as u32).ctx("bound")?;
        ensure(BigUint::from(brute) <= bound, || format!("({q},{m},{n}): {brute} > bound {bound}"))?;
    }
    let top = if cfg.full() { 12 } else { 10 };
    for m in 2..=top {
        let r = count_trace_one_classes(m, &cfg.guards).ctx("trace tally")?.r;
        let cap = totient((1u128 << m) - 1).ctx("totient")? / m as u128;
        ensure(r as u128 <= cap, || format!("m={m}: r={r} > phi(2^m-1)/m = {cap}"))?;
    }
    Ok(format!("grid bounded, r <= phi(2^m-1)/m for m <= {top}"))
}

fn coset_partition(cfg: &CheckConfig) -> CheckResult {
    let top = if cfg.full() { 12 } else { 8 };
    for m in 1..=top {
        let p = cyclotomic_partition(m, &cfg.guards).ctx("partition")?;
        ensure(p.cosets.iter().all(|c| c.len() == 2 * m as usize), || format!("m={m}: coset of wrong size"))?;
        let total: u128 = p.cosets.iter().map(|c| c.len() as u128).sum();
        let phi = totient(p.modulus as u128).ctx("totient")?;
        ensure(total == phi, || format!("m={m}: cosets cover {total} of {phi} units"))?;
    }
    Ok(format!("m = 1..={top}"))
}

fn r_of(cfg: &CheckConfig, m: u32) -> std::result::Result<u64, String> {
    let t = count_trace_one_classes(m, &cfg.guards).ctx("trace tally")?;
    ensure(t.tripwire == 0, || format!("m={m}: {} classes with conjugate-of-one trace", t.tripwire))?;
    Ok(t.r + u64::from(cfg.fault == Some(Fault::TraceCount)))
}

fn r_table(cfg: &CheckConfig) -> CheckResult {
    let top = if cfg.full() { 12 } else { 10 };
    for &(m, r, p2) in R_VALUES.iter().filter(|row| row.0 <= top) {
        let got = r_of(cfg, m)?;
        ensure(got == r && got * m as u64 == p2, || format!("m={m}: r={got}, expected {r}"))?;
    }
    Ok(format!("m = 2..={top}"))
}

fn trace_one_elements(cfg: &CheckConfig) -> CheckResult {
    let top = if cfg.full() { 10 } else { 8 };
    for m in 1..=top {
        let r = r_of(cfg, m)?;
        let elems = count_trace_one_primitive_elements(m, &cfg.guards).ctx("element tally")?;
        ensure(elems == 2 * r * m as u64, || format!("m={m}: {elems} elements, 2rm = {}", 2 * r * m as u64))?;
    }
    Ok(format!("m = 1..={top}"))
}

pub const SEARCH_POINTS: [(u64, usize, usize); 8] =
    [(2, 2, 2), (2, 2, 3), (2, 3, 2), (2, 2, 7), (3, 2, 3), (5, 2, 3), (7, 2, 3), (11, 2, 3)];

fn search_soundness(_: &CheckConfig) -> CheckResult {
    for (q, m, n) in SEARCH_POINTS {
        let r = search_primitive_tsr(q, m, n, &SearchOptions::default()).ctx("search")?;
        ensure(is_primitive(&r.charpoly).ctx("primitivity")?, || {
            format!("({q},{m},{n}): {} not primitive", r.charpoly)
        })?;
        let direct = tsr_charpoly_direct(&r.spec).ctx("determinant")?;
        ensure(direct == r.provenance.conjugate_product, || {
            format!("({q},{m},{n}): determinant {direct} != product of conjugates")
        })?;
    }
    Ok(format!("{} points", SEARCH_POINTS.len()))
}

fn conjecture_equivalence(cfg: &CheckConfig) -> CheckResult {
    let mut qs = vec![2u64, 3, 5];
    if cfg.full() {
        qs.push(7);
    }
    let mut points = 0;
    for &q in &qs {
        for m in 2..=3 {
            for n in 2..=3 {
                let d = verify_conjecture(q, m, n, ConjectureForm::Direct, DEFAULT_BUDGET).ctx("direct")?;
                let c = verify_conjecture(q, m, n, ConjectureForm::Composition, DEFAULT_BUDGET).ctx("composition")?;
                ensure(d.found == c.found, || format!("({q},{m},{n}): direct {} vs composition {}", d.found, c.found))?;
                ensure(!d.found || (d.cross_verified && c.cross_verified), || {
                    format!("({q},{m},{n}): witness failed to cross-convert")
                })?;
                points += 1;
            }
        }
    }
    Ok(format!("{points} points"))
}

fn trace_one_quadratic(_: &CheckConfig) -> CheckResult {
    for m in 1..=10 {
        let w = find_trace_one_quadratic(m).ctx("trace-one quadratic")?;
        ensure(w.coeff(0) == w.coeff(1), || format!("m={m}: {w} is not X^2 + lX + l"))?;
        let phi = conjugate_product(&w, 2).ctx("conjugate product")?;
        ensure(is_primitive(&phi).ctx("primitivity")?, || {
            format!("m={m}: product of conjugates of {w} not primitive")
        })?;
    }
    Ok("m = 1..=10".into())
}

fn table_listing_counts(cfg: &CheckConfig) -> CheckResult {
    for id in [TableId::T1, TableId::T2, TableId::T3] {
        let t = build_poly_table(id, &cfg.guards).ctx("table")?;
        for r in &t.rows {
            ensure(r.family_count() == r.listed_distinct, || {
                format!("{id} row {}: {} family members, {} listed", r.param, r.family_count(), r.listed_distinct)
            })?;
            ensure(r.family_count() <= r.exhaustive, || {
                format!("{id} row {}: family exceeds exhaustive count", r.param)
            })?;
        }
    }
    Ok("t1, t2, t3 family sizes equal the published list lengths".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        let out = run_checks(&CheckConfig::new(Level::Quick), |_| {});
        let failed: Vec<String> = out.iter().filter(|o| !o.passed).map(|o| o.to_string()).collect();
        assert!(failed.is_empty(), "{failed:?}");
        assert_eq!(out.len(), check_names().len());
    }

    #[test]
    fn faults_are_caught() {
        for (fault, name) in [(Fault::CharpolyFormula, "charpoly_formula_vs_direct"), (Fault::TraceCount, "r_table")] {
            let cfg = CheckConfig { fault: Some(fault), ..CheckConfig::new(Level::Quick) };
            let out = run_checks(&cfg, |_| {});
            let first = out.iter().find(|o| !o.passed).unwrap();
            assert_eq!(first.name, name);
        }
    }
}
