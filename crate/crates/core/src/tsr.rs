//! Transformation shift registers in normalized form: state blocks
//! `s_i in F_q^m`, recurrence `s_{i+n} = (s_i + c_1 s_{i+1} + ... +
//! c_{n-1} s_{i+n-1}) B` with `B` invertible.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::{sat_pow, Guards};
use crate::error::{Error, Result};
use crate::factor::factor_integer;
use crate::field::{Fe, Field};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::primitivity;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TsrSpec {
    field: Field,
    m: usize,
    n: usize,
    c: Vec<Fe>,
    b: Matrix,
}

/// Wire format of a normalized spec; entries are field-element indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TsrSpecJson {
    pub q: u64,
    pub m: usize,
    pub n: usize,
    pub c: Vec<u64>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<u64>>,
}

/// Unnormalized wire format with `c_0` and `A`; normalized on ingest to
/// `B = c_0 A`, `c_i <- c_i / c_0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawTsrJson {
    pub q: u64,
    pub m: usize,
    pub n: usize,
    pub c0: u64,
    pub c: Vec<u64>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<u64>>,
}

impl TsrSpec {
    pub fn new(field: &Field, m: usize, n: usize, c: Vec<Fe>, b: Matrix) -> Result<TsrSpec> {
        if m == 0 || n == 0 {
            return Err(Error::Invalid(format!("m = {m}, n = {n} must be positive")));
        }
        if c.len() != n - 1 {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coefficients c_1..c_(n-1), got {}",
                n - 1,
                c.len()
            )));
        }
        if b.field() != field {
            return Err(Error::FieldMismatch);
        }
        if b.rows() != m || b.cols() != m {
            return Err(Error::DimensionMismatch(format!("B is {}x{}, expected {m}x{m}", b.rows(), b.cols())));
        }
        if !b.is_invertible() {
            return Err(Error::SingularB);
        }
        Ok(TsrSpec { field: field.clone(), m, n, c, b })
    }

    /// Normalize the unnormalized recurrence with coefficients `c_0..c_{n-1}`
    /// and matrix `A`.
    pub fn from_unnormalized(field: &Field, n: usize, c: &[Fe], a: Matrix) -> Result<TsrSpec> {
        if c.len() != n {
            return Err(Error::DimensionMismatch(format!("expected {n} coefficients c_0..c_(n-1), got {}", c.len())));
        }
        let inv = field.inv(c[0]).ok_or(Error::ZeroElement)?;
        let rest = c[1..].iter().map(|&x| field.mul(x, inv)).collect();
        let m = a.rows();
        TsrSpec::new(field, m, n, rest, a.scale(c[0]))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn c(&self) -> &[Fe] {
        &self.c
    }
    pub fn b(&self) -> &Matrix {
        &self.b
    }

    /// `c_0 = 1, c_1, ..., c_{n-1}`.
    pub fn full_c(&self) -> Vec<Fe> {
        let mut v = vec![Fe::ONE];
        v.extend_from_slice(&self.c);
        v
    }

    /// `g_T(X) = 1 + c_1 X + ... + c_{n-1} X^{n-1}`.
    pub fn g_t(&self) -> Poly {
        Poly::new(&self.field, self.full_c())
    }

    pub fn to_json(&self) -> TsrSpecJson {
        TsrSpecJson {
            q: self.field.order(),
            m: self.m,
            n: self.n,
            c: self.c.iter().map(|x| x.index()).collect(),
            b: self.b.to_index_rows(),
        }
    }

    pub fn from_json(j: &TsrSpecJson) -> Result<TsrSpec> {
        let field = Field::with_order(j.q)?;
        let c = j.c.iter().map(|&x| field.element(x)).collect::<Result<Vec<_>>>()?;
        let b = Matrix::from_index_rows(&field, &j.b)?;
        TsrSpec::new(&field, j.m, j.n, c, b)
    }

    pub fn from_raw_json(j: &RawTsrJson) -> Result<TsrSpec> {
        let field = Field::with_order(j.q)?;
        let c0 = field.element(j.c0)?;
        if c0.is_zero() {
            return Err(Error::Invalid("c0 = 0: the register is not periodic".into()));
        }
        let mut c = vec![c0];
        for &x in &j.c {
            c.push(field.element(x)?);
        }
        let a = Matrix::from_index_rows(&field, &j.a)?;
        if a.rows() != j.m {
            return Err(Error::DimensionMismatch(format!("A has {} rows, m = {}", a.rows(), j.m)));
        }
        TsrSpec::from_unnormalized(&field, j.n, &c, a)
    }

    /// Parse either wire format: objects carrying `A` are normalized.
    pub fn parse_json(s: &str) -> Result<TsrSpec> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if v.get("A").is_some() {
            let raw: RawTsrJson = serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?;
            TsrSpec::from_raw_json(&raw)
        } else {
            let j: TsrSpecJson = serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?;
            TsrSpec::from_json(&j)
        }
    }

    /// Uniformly random `c` and invertible `B` (rejection sampling).
    pub fn random<R: Rng + ?Sized>(field: &Field, m: usize, n: usize, rng: &mut R) -> TsrSpec {
        let q = field.order();
        let pick = |rng: &mut R| field.element(rng.gen_range(0..q)).unwrap();
        let c = (1..n).map(|_| pick(rng)).collect();
        loop {
            let data = (0..m * m).map(|_| pick(rng)).collect();
            let b = Matrix::from_flat(field, m, m, data);
            if b.is_invertible() {
                return TsrSpec::new(field, m, n, c, b).unwrap();
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TsrState {
    pub blocks: Vec<Vec<Fe>>,
    pub step_index: u64,
}

impl TsrState {
    pub fn new(blocks: Vec<Vec<Fe>>) -> TsrState {
        TsrState { blocks, step_index: 0 }
    }

    pub fn zero(spec: &TsrSpec) -> TsrState {
        TsrState::new(vec![vec![Fe::ZERO; spec.m]; spec.n])
    }

    pub fn from_flat(spec: &TsrSpec, flat: &[Fe]) -> Result<TsrState> {
        if flat.len() != spec.m * spec.n {
            return Err(Error::DimensionMismatch(format!(
                "state has {} entries, expected {}",
                flat.len(),
                spec.m * spec.n
            )));
        }
        Ok(TsrState::new(flat.chunks(spec.m).map(|c| c.to_vec()).collect()))
    }

    pub fn flatten(&self) -> Vec<Fe> {
        self.blocks.concat()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().flatten().all(|x| x.is_zero())
    }
}

/// The `mn x mn` block companion matrix: identity blocks on the block
/// subdiagonal, last block column `B, c_1 B, ..., c_{n-1} B`.
pub fn build_transition_matrix(spec: &TsrSpec) -> Matrix {
    let (m, n) = (spec.m, spec.n);
    let f = &spec.field;
    let mut t = Matrix::zero(f, m * n, m * n);
    for j in 1..n {
        for i in 0..m {
            t.set(j * m + i, (j - 1) * m + i, Fe::ONE);
        }
    }
    for (j, &cj) in spec.full_c().iter().enumerate() {
        for r in 0..m {
            for col in 0..m {
                t.set(j * m + r, (n - 1) * m + col, f.mul(cj, spec.b.get(r, col)));
            }
        }
    }
    t
}

pub fn tsr_step(spec: &TsrSpec, state: &TsrState) -> Result<TsrState> {
    if state.blocks.len() != spec.n || state.blocks.iter().any(|b| b.len() != spec.m) {
        return Err(Error::DimensionMismatch(format!("state must have {} blocks of width {}", spec.n, spec.m)));
    }
    let f = &spec.field;
    let mut acc = vec![Fe::ZERO; spec.m];
    for (blk, &cj) in state.blocks.iter().zip(spec.full_c().iter()) {
        if cj.is_zero() {
            continue;
        }
        for (a, &x) in acc.iter_mut().zip(blk) {
            *a = f.add(*a, f.mul(cj, x));
        }
    }
    let last = spec.b.vec_mul(&acc)?;
    let mut blocks: Vec<Vec<Fe>> = state.blocks[1..].to_vec();
    blocks.push(last);
    Ok(TsrState { blocks, step_index: state.step_index + 1 })
}

/// `g^m * h(X^n / g)` with denominators cleared, for monic `h` of degree `m`.
pub fn compose_gh(g: &Poly, h: &Poly, n: usize) -> Poly {
    let field = g.field();
    let m = h.deg().unwrap_or(0);
    let mut acc = Poly::zero(field);
    let mut gpow = Poly::one(field);
    // k runs downward so g^(m-k) grows incrementally
    for k in (0..=m).rev() {
        let hk = h.coeff(k);
        if !hk.is_zero() {
            let term = &Poly::monomial(field, hk, n * k) * &gpow;
            acc = &acc + &term;
        }
        gpow = &gpow * g;
    }
    acc
}

pub fn tsr_charpoly_formula(spec: &TsrSpec) -> Result<Poly> {
    let psi_b = spec.b.charpoly()?;
    Ok(compose_gh(&spec.g_t(), &psi_b, spec.n))
}

pub fn tsr_charpoly_direct(spec: &TsrSpec) -> Result<Poly> {
    build_transition_matrix(spec).charpoly()
}

/// Multiplicative order of the transition matrix.
pub fn tsr_period(spec: &TsrSpec) -> Result<u64> {
    let guards = Guards::default();
    let mn = (spec.m * spec.n) as u32;
    let size = sat_pow(spec.field.order(), mn);
    Guards::check("q^(mn) for period computation", size, guards.field_order)?;
    let psi = tsr_charpoly_formula(spec)?;
    let squarefree = psi.gcd(&psi.derivative()).is_one();
    if squarefree {
        return primitivity::order_of_x(&psi);
    }
    let t = build_transition_matrix(spec);
    let q = spec.field.order();
    let p = spec.field.characteristic();
    let mut exps: BTreeMap<u64, u32> = BTreeMap::new();
    for d in 1..=mn {
        for (l, e) in factor_integer(sat_pow(q, d) - 1)?.factors {
            let slot = exps.entry(l).or_insert(0);
            *slot = (*slot).max(e);
        }
    }
    let mut t_exp = 0u32;
    while sat_pow(p, t_exp) < mn as u128 {
        t_exp += 1;
    }
    if t_exp > 0 {
        *exps.entry(p).or_insert(0) += t_exp;
    }
    let mut e = exps.iter().fold(BigUint::one(), |acc, (&l, &k)| acc * BigUint::from(l).pow(k));
    for (&l, &k) in &exps {
        let lb = BigUint::from(l);
        for _ in 0..k {
            let cand = &e / &lb;
            if t.pow_big(&cand)?.is_identity() {
                e = cand;
            } else {
                break;
            }
        }
    }
    u64::try_from(e).map_err(|_| Error::Invalid("period exceeds 2^64".into()))
}

pub fn is_primitive_tsr(spec: &TsrSpec) -> Result<bool> {
    primitivity::is_primitive(&tsr_charpoly_formula(spec)?)
}

/// `f = g^m h(X^n / g)` with `g(0) = 1`, `deg g <= n - 1`, `h` monic of
/// degree `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub g: Poly,
    pub h: Poly,
}

impl Decomposition {
    pub fn recompose(&self, n: usize) -> Poly {
        compose_gh(&self.g, &self.h, n)
    }
}

/// Search all `q^(n-1)` candidates for `g`. For each, `h` is solved from the
/// bottom up: the term `h_k X^(nk) g^(m-k)` is the only new contribution at
/// degree `nk`, since `g(0) = 1`.
pub fn mn_decompose(f: &Poly, m: usize, n: usize) -> Result<Option<Decomposition>> {
    decompositions(f, m, n, true).map(|v| v.into_iter().next())
}

/// Every `(m, n)`-decomposition of `f`, in candidate order of `g`.
pub fn mn_decompositions(f: &Poly, m: usize, n: usize) -> Result<Vec<Decomposition>> {
    decompositions(f, m, n, false)
}

fn decompositions(f: &Poly, m: usize, n: usize, first_only: bool) -> Result<Vec<Decomposition>> {
    let field = f.field().clone();
    if m == 0 || n == 0 || f.deg() != Some(m * n) {
        return Err(Error::BadDegree { expected: format!("{}", m * n), found: f.degree().to_string() });
    }
    let q = field.order();
    let count = q.checked_pow(n as u32 - 1).ok_or(Error::ScaleExceeded {
        what: "decomposition candidates",
        value: u128::MAX,
        limit: u64::MAX as u128,
    })?;
    let f = f.monic();
    let mut found = Vec::new();
    'cand: for idx in 0..count {
        let mut coeffs = vec![Fe::ONE];
        let mut rest = idx;
        for _ in 1..n {
            coeffs.push(field.element(rest % q)?);
            rest /= q;
        }
        let g = Poly::new(&field, coeffs);
        let mut gpows = vec![Poly::one(&field)];
        for _ in 0..m {
            let next = gpows.last().unwrap() * &g;
            gpows.push(next);
        }
        let mut residual = f.clone();
        let mut h = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let hk = residual.coeff(n * k);
            h.push(hk);
            if !hk.is_zero() {
                let term = &Poly::monomial(&field, hk, n * k) * &gpows[m - k];
                residual = &residual - &term;
            }
            // everything left starts at degree n(k+1)
            let clear = (0..(n * (k + 1)).min(m * n + 1)).all(|d| residual.coeff(d).is_zero());
            if !clear {
                continue 'cand;
            }
        }
        if residual.is_zero() && h[m] == Fe::ONE {
            found.push(Decomposition { g, h: Poly::new(&field, h) });
            if first_only {
                break;
            }
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    fn example_spec() -> TsrSpec {
        let f = f2();
        let b = Matrix::companion(&Poly::from_ints(&f, &[1, 1, 1])).unwrap();
        TsrSpec::new(&f, 2, 2, vec![Fe::ONE], b).unwrap()
    }

    fn fib() -> TsrSpec {
        let f = f2();
        TsrSpec::new(&f, 1, 2, vec![Fe::ONE], Matrix::identity(&f, 1)).unwrap()
    }

    #[test]
    fn transition_matrix_examples() {
        let t = build_transition_matrix(&fib());
        assert_eq!(t.to_index_rows(), vec![vec![0, 1], vec![1, 1]]);
        let f3 = Field::prime(3).unwrap();
        let b = Matrix::from_index_rows(&f3, &[vec![1, 2], vec![0, 1]]).unwrap();
        let s = TsrSpec::new(&f3, 2, 1, vec![], b.clone()).unwrap();
        assert_eq!(build_transition_matrix(&s), b);
        let singular = Matrix::from_index_rows(&f3, &[vec![1, 2], vec![2, 1]]).unwrap();
        assert_eq!(TsrSpec::new(&f3, 2, 1, vec![], singular).unwrap_err(), Error::SingularB);
    }

    #[test]
    fn charpoly_examples() {
        let f = f2();
        let target = Poly::from_ints(&f, &[1, 0, 0, 1, 1]);
        assert_eq!(tsr_charpoly_formula(&example_spec()).unwrap(), target);
        assert_eq!(tsr_charpoly_direct(&example_spec()).unwrap(), target);
        assert_eq!(tsr_charpoly_direct(&fib()).unwrap(), Poly::from_ints(&f, &[1, 1, 1]));
        // m = 1: X^n - b g_T(X)
        let f5 = Field::prime(5).unwrap();
        let s = TsrSpec::new(
            &f5,
            1,
            3,
            vec![f5.from_int(2), f5.from_int(4)],
            Matrix::from_index_rows(&f5, &[vec![3]]).unwrap(),
        )
        .unwrap();
        let g = s.g_t();
        let expect = &Poly::monomial(&f5, Fe::ONE, 3) - &g.scale(f5.from_int(3));
        assert_eq!(tsr_charpoly_formula(&s).unwrap(), expect);
        assert_eq!(tsr_charpoly_direct(&s).unwrap(), expect);
    }

    #[test]
    fn step_examples() {
        let s = fib();
        let f = f2();
        let z = TsrState::zero(&s);
        assert!(tsr_step(&s, &z).unwrap().is_zero());
        let mut st = TsrState::from_flat(&s, &[Fe::ONE, Fe::ZERO]).unwrap();
        let mut bits = vec![1u64, 0];
        for _ in 0..4 {
            st = tsr_step(&s, &st).unwrap();
            bits.push(st.blocks[1][0].index());
        }
        assert_eq!(bits, vec![1, 0, 1, 1, 0, 1]);
        assert_eq!(st.step_index, 4);
        let bad = TsrState::new(vec![vec![Fe::ONE]]);
        assert!(matches!(tsr_step(&s, &bad), Err(Error::DimensionMismatch(_))));
        let _ = f;
    }

    #[test]
    fn step_matches_matrix_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for q in [2u64, 3, 4, 5] {
            let field = Field::with_order(q).unwrap();
            for (m, n) in [(1, 3), (2, 2), (3, 2), (2, 3)] {
                let spec = TsrSpec::random(&field, m, n, &mut rng);
                let t = build_transition_matrix(&spec);
                let flat: Vec<Fe> = (0..m * n).map(|_| field.element(rng.gen_range(0..q)).unwrap()).collect();
                let mut st = TsrState::from_flat(&spec, &flat).unwrap();
                let mut v = flat.clone();
                for _ in 0..50 {
                    st = tsr_step(&spec, &st).unwrap();
                    v = t.vec_mul(&v).unwrap();
                    assert_eq!(st.flatten(), v);
                }
            }
        }
    }

    #[test]
    fn period_examples() {
        let f = f2();
        assert_eq!(tsr_period(&fib()).unwrap(), 3);
        assert_eq!(tsr_period(&example_spec()).unwrap(), 15);
        let id = TsrSpec::new(&f, 3, 1, vec![], Matrix::identity(&f, 3)).unwrap();
        assert_eq!(tsr_period(&id).unwrap(), 1);
        // stepping oracle
        let s = example_spec();
        let start = TsrState::from_flat(&s, &[Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ZERO]).unwrap();
        let mut st = tsr_step(&s, &start).unwrap();
        let mut k = 1;
        while st.blocks != start.blocks {
            st = tsr_step(&s, &st).unwrap();
            k += 1;
        }
        assert_eq!(k, 15);
    }

    #[test]
    fn period_matches_matrix_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for q in [2u64, 3] {
            let field = Field::with_order(q).unwrap();
            for (m, n) in [(2, 2), (3, 1), (2, 3), (1, 4)] {
                for _ in 0..20 {
                    let spec = TsrSpec::random(&field, m, n, &mut rng);
                    let t = build_transition_matrix(&spec);
                    let mut acc = t.clone();
                    let mut k = 1u64;
                    while !acc.is_identity() {
                        acc = acc.mul(&t).unwrap();
                        k += 1;
                    }
                    assert_eq!(tsr_period(&spec).unwrap(), k);
                }
            }
        }
    }

    #[test]
    fn decomposition_examples() {
        let f = f2();
        let d = mn_decompose(&Poly::from_ints(&f, &[1, 0, 0, 1, 1]), 2, 2).unwrap().unwrap();
        assert_eq!(d.g, Poly::from_ints(&f, &[1, 1]));
        assert_eq!(d.h, Poly::from_ints(&f, &[1, 1, 1]));
        assert!(mn_decompose(&Poly::from_ints(&f, &[1, 1, 0, 0, 1]), 2, 2).unwrap().is_none());
        let psi = Poly::from_ints(&f, &[1, 0, 1, 1]);
        let d = mn_decompose(&psi, 3, 1).unwrap().unwrap();
        assert!(d.g.is_one());
        assert_eq!(d.h, psi);
        assert!(matches!(mn_decompose(&psi, 2, 2), Err(Error::BadDegree { .. })));
    }

    #[test]
    fn decomposition_recovers_low_degree_g() {
        // g = 1 + X with n = 3: the top coefficient X^(n-1) of g is zero
        let f3 = Field::prime(3).unwrap();
        let g = Poly::from_ints(&f3, &[1, 1, 0]);
        let h = Poly::from_ints(&f3, &[2, 1, 1]);
        let f = compose_gh(&g, &h, 3);
        let d = mn_decompose(&f, 2, 3).unwrap().unwrap();
        assert_eq!(d.recompose(3), f);
    }

    #[test]
    fn json_roundtrip_and_normalization() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f5 = Field::prime(5).unwrap();
        let spec = TsrSpec::random(&f5, 2, 3, &mut rng);
        let s = serde_json::to_string(&spec.to_json()).unwrap();
        assert_eq!(TsrSpec::parse_json(&s).unwrap(), spec);
        let raw = r#"{"q":5,"m":1,"n":2,"c0":2,"c":[4],"A":[[3]]}"#;
        let norm = TsrSpec::parse_json(raw).unwrap();
        assert_eq!(norm.c(), &[f5.from_int(2)]);
        assert_eq!(norm.b().to_index_rows(), vec![vec![1]]);
        let zero = r#"{"q":5,"m":1,"n":2,"c0":0,"c":[4],"A":[[3]]}"#;
        assert!(TsrSpec::parse_json(zero).is_err());
    }
}
