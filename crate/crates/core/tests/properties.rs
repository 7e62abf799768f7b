use std::f64::consts::TAU;

use num_complex::Complex64;
use proptest::prelude::*;

use geoent::experiments::{catalog_basic_ids, verify_pure_sufficiency, BasicId};
use geoent::optimize::{
    grid_oracle, maximize_with_ansatz, refine, sample_maximize, CaseConfig, SampleConfig,
};
use geoent::overlap::{mixture_overlap, overlap_sq, product_vector, ProductParams, TyingPattern};
use geoent::qstate::{
    cyclic_shift, make_basic_ti, term_period, HybridSpec, PureState, SeedPattern,
};

fn state(n: usize) -> impl Strategy<Value = PureState> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n)
        .prop_filter("nonzero", |v| {
            v.iter().any(|(re, im)| re.abs() + im.abs() > 1e-3)
        })
        .prop_map(move |v| {
            let amps = v
                .into_iter()
                .map(|(re, im)| Complex64::new(re, im))
                .collect();
            PureState::normalized(n, amps).unwrap()
        })
}

fn params(n: usize) -> impl Strategy<Value = ProductParams> {
    (
        prop::collection::vec(0.0f64..=1.0, n),
        prop::collection::vec(0.0f64..TAU, n),
    )
        .prop_map(|(a, t)| ProductParams::new(a, t).unwrap())
}

fn state_and_params() -> impl Strategy<Value = (PureState, ProductParams)> {
    (2usize..=5).prop_flat_map(|n| (state(n), params(n)))
}

fn seed_bits() -> impl Strategy<Value = SeedPattern> {
    (2usize..=10)
        .prop_flat_map(|n| prop::collection::vec(any::<bool>(), n))
        .prop_map(|bits| SeedPattern::new(&bits).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn basic_states_are_shift_invariant(seed in seed_bits()) {
        let psi = make_basic_ti(&seed);
        prop_assert!(psi.distance(&cyclic_shift(&psi, 1)).unwrap() < 1e-12);
        prop_assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert_eq!(seed.n_sites() % term_period(&seed), 0);
        prop_assert_eq!(seed.rotated(term_period(&seed)), seed);
    }

    #[test]
    fn full_turn_is_identity((psi, _) in state_and_params()) {
        let n = psi.n_sites();
        prop_assert!(psi.distance(&cyclic_shift(&psi, n)).unwrap() < 1e-12);
    }

    #[test]
    fn superpositions_are_normalized(c in 0.0f64..=1.0, phi in 0.0f64..TAU, pick in 0usize..4) {
        let pairs = [
            (BasicId::Ghz(4), BasicId::W(4)),
            (BasicId::W(5), BasicId::Psi1b5),
            (BasicId::Psi3x6, BasicId::Psi2a6),
            (BasicId::GhzPrime(8), BasicId::Psi2x8),
        ];
        let (a, b) = pairs[pick];
        let spec = HybridSpec::two_component(a.build().unwrap(), b.build().unwrap(), c, phi).unwrap();
        let psi = spec.superpose().unwrap().state;
        prop_assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!(psi.distance(&cyclic_shift(&psi, 1)).unwrap() < 1e-12);
    }

    #[test]
    fn overlap_is_a_probability((psi, p) in state_and_params()) {
        let v = overlap_sq(&psi, &p).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&v));
        let own = overlap_sq(&product_vector(&p), &p).unwrap();
        prop_assert!((own - 1.0).abs() < 1e-12);
    }

    #[test]
    fn overlap_has_ring_symmetry((psi, p) in state_and_params(), k in 0usize..5) {
        let a = overlap_sq(&psi, &p).unwrap();
        let b = overlap_sq(&cyclic_shift(&psi, k), &p.rotated(k)).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn mixtures_never_beat_their_best_member(
        (psi, p) in state_and_params(),
        w in 0.0f64..=1.0,
        a in 0.0f64..=1.0,
    ) {
        let q = ProductParams::uniform(psi.n_sites(), a, 0.0).unwrap();
        let mix = mixture_overlap(&psi, &[(w, p.clone()), (1.0 - w, q.clone())]).unwrap();
        let best = overlap_sq(&psi, &p).unwrap().max(overlap_sq(&psi, &q).unwrap());
        prop_assert!(mix <= best + 1e-12);
    }

    #[test]
    fn refine_never_loses((psi, p) in state_and_params()) {
        let tying = TyingPattern::free(psi.n_sites()).unwrap();
        let r = refine(&psi, &p, &tying).unwrap();
        prop_assert!(r.lambda >= overlap_sq(&psi, &p).unwrap());
        prop_assert!(r.lambda <= 1.0 + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sampling_is_monotone_and_deterministic(psi in state(4), seed in any::<u64>(), n in 1u64..400) {
        let tying = TyingPattern::free(4).unwrap();
        let short = sample_maximize(&psi, &SampleConfig::new(tying.clone(), n, seed).unwrap()).unwrap();
        let long = sample_maximize(&psi, &SampleConfig::new(tying.clone(), 2 * n, seed).unwrap()).unwrap();
        let again = sample_maximize(&psi, &SampleConfig::new(tying, 2 * n, seed).unwrap()).unwrap();
        prop_assert!(long.lambda >= short.lambda);
        prop_assert_eq!(long, again);
    }

    #[test]
    fn tied_grid_never_beats_free_grid(psi in state(3)) {
        let tied = grid_oracle(&psi, &TyingPattern::symmetric(3).unwrap(), 6).unwrap();
        let free = grid_oracle(&psi, &TyingPattern::free(3).unwrap(), 6).unwrap();
        prop_assert!(tied.lambda <= free.lambda + 1e-12);
    }
}

#[test]
fn catalog_states_reach_their_closed_forms() {
    let cfg = CaseConfig::new(10_000, 11);
    for id in catalog_basic_ids() {
        let basic = id.build().unwrap();
        let cf = id.closed_form().unwrap().lambda_max;
        let t = TyingPattern::ansatz(&basic);
        let outcomes = maximize_with_ansatz(&basic.state, [t.clone(), t], true, &cfg).unwrap();
        let best = outcomes
            .iter()
            .map(|o| o.best_lambda())
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((best - cf).abs() < 1e-6, "{}: {best} vs {cf}", id.label());
        assert!(best <= cf + 1e-9, "{}", id.label());
    }
}

#[test]
fn separable_mixtures_stay_below_the_pure_bound() {
    for id in [BasicId::Ghz(3), BasicId::W(3), BasicId::Psi3x6] {
        let psi = id.build().unwrap().state;
        let cf = id.closed_form().unwrap().lambda_max;
        let r = verify_pure_sufficiency(&psi, cf, 10_000, 4, 5).unwrap();
        assert!(r.passed(), "{}: {}", id.label(), r.max_observed);
    }
}
