use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tsrforge::primitivity::{conjugate_product, is_primitive};
use tsrforge::search::{reciprocal, search_primitive_tsr, SearchOptions};
use tsrforge::tables::printed_form;
use tsrforge::tsr::{
    build_transition_matrix, is_primitive_tsr, mn_decompositions, tsr_charpoly_direct, tsr_charpoly_formula,
    tsr_period, tsr_step, TsrSpec, TsrState,
};
use tsrforge::{Fe, Field, Poly};

fn spec_strategy() -> impl Strategy<Value = (u64, usize, usize, u64)> {
    (prop::sample::select(vec![2u64, 3, 4, 5, 7]), 1usize..=3, 1usize..=4, any::<u64>())
}

fn spec_from(q: u64, m: usize, n: usize, seed: u64) -> TsrSpec {
    let f = Field::with_order(q).unwrap();
    TsrSpec::random(&f, m, n, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn formula_matches_determinant((q, m, n, seed) in spec_strategy()) {
        let spec = spec_from(q, m, n, seed);
        prop_assert_eq!(tsr_charpoly_formula(&spec).unwrap(), tsr_charpoly_direct(&spec).unwrap());
    }

    #[test]
    fn step_is_row_times_transition((q, m, n, seed) in spec_strategy(), steps in 1u64..20) {
        let spec = spec_from(q, m, n, seed);
        let f = spec.field().clone();
        let flat: Vec<Fe> = (0..m * n).map(|i| f.element((seed >> (i % 60)) % q).unwrap()).collect();
        let mut s = TsrState::from_flat(&spec, &flat).unwrap();
        for _ in 0..steps {
            s = tsr_step(&spec, &s).unwrap();
        }
        let t = build_transition_matrix(&spec).pow(steps).unwrap();
        prop_assert_eq!(s.flatten(), t.vec_mul(&flat).unwrap());
    }

    #[test]
    fn json_round_trip((q, m, n, seed) in spec_strategy()) {
        let spec = spec_from(q, m, n, seed);
        let text = serde_json::to_string(&spec.to_json()).unwrap();
        let back = TsrSpec::parse_json(&text).unwrap();
        prop_assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), text);
        prop_assert_eq!(back, spec);
    }

    #[test]
    fn own_decomposition_is_found((q, m, n, seed) in spec_strategy()) {
        let spec = spec_from(q, m, n, seed);
        let psi = tsr_charpoly_formula(&spec).unwrap();
        let all = mn_decompositions(&psi, m, n).unwrap();
        prop_assert!(all.iter().any(|d| d.g == spec.g_t()));
        for d in &all {
            prop_assert_eq!(d.recompose(n), psi.clone());
        }
    }

    #[test]
    fn primitive_iff_full_period((q, m, n, seed) in (prop::sample::select(vec![2u64, 3]), 1usize..=3, 1usize..=3, any::<u64>())) {
        let spec = spec_from(q, m, n, seed);
        let full = q.pow((m * n) as u32) - 1;
        prop_assert_eq!(is_primitive_tsr(&spec).unwrap(), tsr_period(&spec).unwrap() == full);
    }

    #[test]
    fn reciprocal_is_an_involution(c in prop::collection::vec(0u64..9, 1..7), c0 in 1u64..9) {
        let f = Field::with_order(9).unwrap();
        let mut cs = vec![f.element(c0).unwrap()];
        cs.extend(c.iter().map(|&x| f.element(x).unwrap()));
        cs.push(Fe::ONE);
        let p = Poly::new(&f, cs);
        prop_assert_eq!(reciprocal(&reciprocal(&p).unwrap()).unwrap(), p);
    }

    #[test]
    fn printed_form_is_an_involution(c in prop::collection::vec(0u64..25, 1..7)) {
        let f = Field::with_order(25).unwrap();
        let mut cs: Vec<Fe> = c.iter().map(|&x| f.element(x).unwrap()).collect();
        cs.push(Fe::ONE);
        let p = Poly::new(&f, cs);
        prop_assert_eq!(printed_form(&printed_form(&p)), p);
    }
}

#[test]
fn search_result_charpoly_is_reciprocal_of_composition() {
    let r = search_primitive_tsr(2, 2, 3, &SearchOptions::default()).unwrap();
    let composed = r.provenance.f.compose(&r.provenance.g);
    assert!(is_primitive(&composed).unwrap());
    assert_eq!(r.charpoly, reciprocal(&composed).unwrap());
    assert_eq!(r.charpoly, conjugate_product(&r.provenance.reciprocal, 2).unwrap());
}

#[test]
fn search_is_deterministic_across_pools() {
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| search_primitive_tsr(5, 2, 3, &SearchOptions::default()).unwrap().to_json())
    };
    assert_eq!(run(1), run(4));
}
