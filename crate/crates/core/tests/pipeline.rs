use std::sync::Arc;

use octrans::algebra::BaseAlgebra;
use octrans::fliess::WordSeries;
use octrans::json::{
    distribution_cumulants_json, parse_distribution, parse_series, parse_word_series,
    series_to_json, word_series_to_json,
};
use octrans::ncpart::Independence;
use octrans::prob::{
    cumulants, distribution_of, multiplicative_convolve, product_moments, transforms_of,
    OVDistribution,
};
use octrans::series::GroupElement;
use octrans::suite::run_suite;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn scalar_cumulants(tail: &[i64]) -> GroupElement {
    let mut coeffs = vec![1];
    coeffs.extend_from_slice(tail);
    GroupElement::scalar_ints(&coeffs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn cumulant_files_round_trip(tail in proptest::collection::vec(-3i64..=3, 3)) {
        let k = scalar_cumulants(&tail);
        let d = parse_distribution(&distribution_cumulants_json(&k, None).to_string()).unwrap();
        prop_assert_eq!(cumulants(&d).unwrap(), k);
    }

    #[test]
    fn free_product_moments_match_the_oracle(a in proptest::collection::vec(-2i64..=2, 2), b in proptest::collection::vec(-2i64..=2, 2)) {
        let da = OVDistribution::from_cumulants(&scalar_cumulants(&a), None).unwrap();
        let db = OVDistribution::from_cumulants(&scalar_cumulants(&b), None).unwrap();
        let k = Independence::Free;
        let product = multiplicative_convolve(k, &transforms_of(k, &da).unwrap(), &transforms_of(k, &db).unwrap()).unwrap();
        let (_, psi) = product_moments(k, &da, &db).unwrap();
        let back = distribution_of(k, &product).unwrap();
        prop_assert_eq!(back.psi_moments(), &psi);
    }
}

#[test]
fn series_and_word_series_survive_the_wire() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let alg = Arc::new(BaseAlgebra::upper_triangular());
    let g = GroupElement::random(&alg, 2, &mut rng);
    assert_eq!(
        &parse_series(&series_to_json(&g).to_string()).unwrap(),
        g.series()
    );
    let w = WordSeries::random(&mut rng, 3, 3, 2, None);
    assert_eq!(
        parse_word_series(&word_series_to_json(&w).to_string()).unwrap(),
        w
    );
}

#[test]
fn fast_suites_are_green_and_repeatable() {
    for name in ["fliess", "classical", "ybe"] {
        let first = serde_json::to_string(&run_suite(name).unwrap()).unwrap();
        let second = serde_json::to_string(&run_suite(name).unwrap()).unwrap();
        assert_eq!(first, second);
        assert!(first.contains("\"status\":\"pass\""));
        assert!(!first.contains("\"fail\""));
    }
}
