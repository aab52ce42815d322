use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::mixed::mixed_moment_with;
use super::*;
use crate::algebra::{AlgElement, BaseAlgebra};
use crate::rational::{q, random_q, Q};
use crate::series::{GroupElement, MultiSeries};

const CATALAN: [usize; 13] = [
    1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796, 58786, 208012,
];

#[test]
fn catalan_counts() {
    for (n, &c) in CATALAN.iter().enumerate().take(11) {
        assert_eq!(enumerate_nc(n).unwrap().len(), c, "n = {n}");
    }
}

#[test]
fn catalan_twelve_and_cap() {
    assert_eq!(enumerate_nc(12).unwrap().len(), CATALAN[12]);
    assert_eq!(enumerate_nc(13).unwrap_err(), NcError::SizeTooLarge(13));
}

#[test]
fn enumeration_is_distinct_and_noncrossing() {
    let parts = enumerate_nc(7).unwrap();
    let set: std::collections::HashSet<_> = parts.iter().cloned().collect();
    assert_eq!(set.len(), parts.len());
    for p in parts.iter() {
        assert!(NCPartition::from_blocks(7, p.blocks().to_vec()).is_some());
    }
}

#[test]
fn crossing_is_rejected() {
    assert!(NCPartition::from_one_based(4, &[&[1, 3], &[2, 4]]).is_none());
    assert!(NCPartition::from_one_based(4, &[&[1, 4], &[2, 3]]).is_some());
}

#[test]
fn kreweras_small_cases() {
    let p = NCPartition::from_one_based(2, &[&[1, 2]]).unwrap();
    assert_eq!(
        kreweras(&p),
        NCPartition::from_one_based(2, &[&[1], &[2]]).unwrap()
    );
    let p = NCPartition::from_one_based(2, &[&[1], &[2]]).unwrap();
    assert_eq!(
        kreweras(&p),
        NCPartition::from_one_based(2, &[&[1, 2]]).unwrap()
    );
    let p = NCPartition::from_one_based(3, &[&[1, 3], &[2]]).unwrap();
    assert_eq!(
        kreweras(&p),
        NCPartition::from_one_based(3, &[&[1, 2], &[3]]).unwrap()
    );
}

#[test]
fn kreweras_complements_sizes_and_is_a_bijection() {
    for n in 1..=8 {
        let parts = enumerate_nc(n).unwrap();
        let images: std::collections::HashSet<_> = parts.iter().map(kreweras).collect();
        assert_eq!(images.len(), parts.len());
        for p in parts.iter() {
            assert_eq!(p.num_blocks() + kreweras(p).num_blocks(), n + 1);
            // Kr^2 is rotation back by one step.
            let twice = kreweras(&kreweras(p));
            let rotated: Vec<Vec<usize>> = p
                .blocks()
                .iter()
                .map(|b| b.iter().map(|x| (x + n - 1) % n).collect())
                .collect();
            assert_eq!(twice, NCPartition::from_blocks(n, rotated).unwrap());
        }
    }
}

#[test]
fn nesting_forest_and_irreducibility() {
    let p = NCPartition::from_one_based(6, &[&[1, 6], &[2, 5], &[3], &[4]]).unwrap();
    assert_eq!(p.nesting_forest(), &[None, Some(0), Some(1), Some(1)]);
    assert!(p.is_irreducible());
    let p = NCPartition::from_one_based(4, &[&[1, 2], &[3, 4]]).unwrap();
    assert_eq!(p.nesting_forest(), &[None, None]);
    assert!(!p.is_irreducible());
    let p = NCPartition::from_one_based(5, &[&[1, 3, 5], &[2], &[4]]).unwrap();
    assert_eq!(p.nesting_forest(), &[None, Some(0), Some(0)]);
}

#[test]
fn irreducible_count_is_shifted_catalan() {
    for n in 1..=9 {
        let count = enumerate_nc(n)
            .unwrap()
            .iter()
            .filter(|p| p.is_irreducible())
            .count();
        assert_eq!(count, CATALAN[n - 1]);
    }
}

/// Scalar moments from free cumulants by the first-block recursion
/// `m_n = sum_s kappa_s sum_{i1+..+is = n-s} m_{i1} .. m_{is}`.
fn scalar_moments_oracle(kappa: &[Q], order: usize) -> Vec<Q> {
    let mut m = vec![q(1)];
    for n in 1..=order {
        let mut total = q(0);
        for s in 1..=n.min(kappa.len()) {
            // Number of ways to fill s gaps with total size n - s, weighted.
            let mut ways = vec![q(0); n - s + 1];
            ways[0] = q(1);
            for _ in 0..s {
                let mut next = vec![q(0); n - s + 1];
                for (t, w) in ways.iter().enumerate() {
                    for i in 0..=(n - s - t) {
                        next[t + i] += w * &m[i];
                    }
                }
                ways = next;
            }
            total += &kappa[s - 1] * &ways[n - s];
        }
        m.push(total);
    }
    m
}

fn scalar_family(cumulants: &[i64]) -> CumulantFamily {
    CumulantFamily::new(GroupElement::scalar_ints(cumulants).unwrap())
}

#[test]
fn scalar_moments_match_recursion() {
    // kappa_1..kappa_5 = 1, 2, -1, 3, 5
    let fam = scalar_family(&[1, 2, -1, 3, 5]);
    let m = moments_from_cumulants_nc(&fam).unwrap();
    let oracle = scalar_moments_oracle(&[q(1), q(2), q(-1), q(3), q(5)], 5);
    assert_eq!(m.scalar_coeffs(), oracle);
}

#[test]
fn semicircle_shifted_gives_catalan_shifts() {
    // a = 1 + s with s standard semicircular: kappa_1 = 1, kappa_2 = 1.
    let fam = scalar_family(&[1, 1, 0, 0, 0, 0]);
    let m = moments_from_cumulants_nc(&fam).unwrap().scalar_coeffs();
    // phi((1+s)^n) = sum_k C(n,2k) Cat_k
    let binom = |n: usize, k: usize| (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1));
    for (n, v) in m.iter().enumerate() {
        let expected: usize = (0..=n / 2).map(|k| binom(n, 2 * k) * CATALAN[k]).sum();
        assert_eq!(*v, q(expected as i64));
    }
}

#[test]
fn kappa_eval_scalar_is_block_product() {
    let fam = scalar_family(&[1, 2, 3, 4]);
    let pi = NCPartition::from_one_based(5, &[&[1, 5], &[2, 3, 4]]).unwrap();
    let unit = AlgElement::new(vec![q(1)]);
    let v = kappa_eval(&pi, &fam, &vec![unit; 4]).unwrap();
    assert_eq!(v.coeffs(), &[q(2) * q(3)]);
    let big = NCPartition::from_one_based(6, &[&[1, 2, 3, 4, 5, 6]]).unwrap();
    let unit = AlgElement::new(vec![q(1)]);
    assert_eq!(
        kappa_eval(&big, &fam, &vec![unit; 5]).unwrap_err(),
        NcError::ArityMissing(6)
    );
}

#[test]
fn kappa_eval_nests_arguments_on_upper_triangular() {
    // pi = {{1,3},{2}}: kappa_2(a b1 kappa_1(a b2) , a) = K1(b1 K0 b2) = K1(b1 b2)
    let alg = Arc::new(BaseAlgebra::upper_triangular());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let k = GroupElement::random(&alg, 3, &mut rng);
    let fam = CumulantFamily::new(k.clone());
    let b1 = AlgElement::new(vec![q(1), q(2), q(-1)]);
    let b2 = AlgElement::new(vec![q(3), q(0), q(5)]);
    let pi = NCPartition::from_one_based(3, &[&[1, 3], &[2]]).unwrap();
    let v = kappa_eval(&pi, &fam, &[b1.clone(), b2.clone()]).unwrap();
    let expected = k.eval(&[alg.mul(&b1, &b2).unwrap()]);
    assert_eq!(v, expected);
}

fn random_group(alg: &Arc<BaseAlgebra>, order: usize, seed: u64) -> GroupElement {
    GroupElement::random(alg, order, &mut ChaCha8Rng::seed_from_u64(seed))
}

#[test]
fn cumulant_round_trip_dim3() {
    let alg = Arc::new(BaseAlgebra::upper_triangular());
    let k = random_group(&alg, 3, 11);
    let fam = CumulantFamily::new(k.clone());
    let m = moments_from_cumulants_nc(&fam).unwrap();
    assert_eq!(m.order(), 4);
    let back = cumulants_from_moments_nc(&m).unwrap();
    assert_eq!(back.main(), &k);
}

#[test]
fn conditional_round_trip_dim3() {
    let alg = Arc::new(BaseAlgebra::upper_triangular());
    let k = random_group(&alg, 3, 5);
    let kc = random_group(&alg, 3, 6);
    let fam = CumulantFamily::with_conditional(k.clone(), kc.clone()).unwrap();
    let phi = moments_from_cumulants_nc(&fam).unwrap();
    let psi = moments_from_cumulants_nc(&CumulantFamily::new(k.clone())).unwrap();
    let back = conditional_cumulants_nc(&phi, &psi).unwrap();
    assert_eq!(back.main(), &k);
    assert_eq!(back.conditional(), Some(&kc));
}

#[test]
fn mean_not_unit_is_rejected() {
    let m = MultiSeries::scalar_ints(&[1, 2, 5]);
    assert_eq!(
        cumulants_from_moments_nc(&m).unwrap_err(),
        NcError::MeanNotUnit
    );
}

#[test]
fn non_bimodule_moments_are_rejected() {
    // C(e0, e1) = e0 cannot be of the form f(e0) e1 in the diagonal algebra.
    let alg = Arc::new(BaseAlgebra::diagonal(2));
    let mut comps = MultiSeries::one(&alg, 2)
        .add(&MultiSeries::identity(&alg, 2))
        .components()
        .to_vec();
    comps[2][1] = q(1);
    let m = MultiSeries::from_components(&alg, 2, comps).unwrap();
    assert!(matches!(
        cumulants_from_moments_nc(&m),
        Err(NcError::MomentsInconsistent(2))
    ));
}

fn scalar_var(psi: &[i64], phi: &[i64]) -> VariableData {
    let k = GroupElement::scalar_ints(psi).unwrap();
    let kc = GroupElement::scalar_ints(phi).unwrap();
    VariableData::from_cumulants(CumulantFamily::with_conditional(k, kc).unwrap()).unwrap()
}

fn scalar_word(vars: &[usize]) -> ColoredWord {
    ColoredWord::plain(&BaseAlgebra::scalar(), vars)
}

fn val(x: i64) -> AlgElement {
    AlgElement::new(vec![q(x)])
}

#[test]
fn free_abab_closed_form() {
    // kappa_2 = 2 for a, 3 for b; phi(abab) = m2a + m2b - 1 with means 1.
    let vars = [
        scalar_var(&[1, 2, 0, 0], &[1, 2, 0, 0]),
        scalar_var(&[1, 3, 0, 0], &[1, 3, 0, 0]),
    ];
    let v = mixed_moment(Independence::Free, &vars, &scalar_word(&[0, 1, 0, 1])).unwrap();
    assert_eq!(v.phi, val(3 + 4 - 1));
}

#[test]
fn monotone_readings_differ_on_bab() {
    let vars = [
        scalar_var(&[1, 2, 0], &[1, 2, 0]),
        scalar_var(&[1, 3, 0], &[1, 3, 0]),
    ];
    let w = scalar_word(&[1, 0, 1]);
    let shifted = mixed_moment_with(Independence::Monotone, &vars, &w, true).unwrap();
    let raw = mixed_moment_with(Independence::Monotone, &vars, &w, false).unwrap();
    assert_eq!(shifted.phi, val(4));
    assert_eq!(raw.phi, val(1));
}

#[test]
fn free_routes_agree_on_all_scalar_words_up_to_eight() {
    let vars = [
        scalar_var(&[1, 2, -1, 3, 1, 0, 2, 1], &[1, 2, -1, 3, 1, 0, 2, 1]),
        scalar_var(&[1, -1, 2, 0, 1, 3, 1, 2], &[1, -1, 2, 0, 1, 3, 1, 2]),
    ];
    for len in 1..=8 {
        for mask in 0u32..(1 << len) {
            let letters: Vec<usize> = (0..len).map(|i| ((mask >> i) & 1) as usize).collect();
            let w = scalar_word(&letters);
            let a = mixed_moment(Independence::Free, &vars, &w).unwrap();
            let b = mixed_moment_nc(Independence::Free, &vars, &w).unwrap();
            assert_eq!(a, b, "{letters:?}");
        }
    }
}

#[test]
fn cfree_routes_agree_on_scalar_words() {
    let vars = [
        scalar_var(&[1, 2, -1, 3, 1, 0, 1], &[1, 1, 2, -2, 0, 1, 2]),
        scalar_var(&[1, -1, 2, 0, 1, 3, 0], &[1, 3, 0, 1, 2, -1, 1]),
    ];
    for len in 1..=7 {
        for mask in 0u32..(1 << len) {
            let letters: Vec<usize> = (0..len).map(|i| ((mask >> i) & 1) as usize).collect();
            let w = scalar_word(&letters);
            let a = mixed_moment(Independence::ConditionallyFree, &vars, &w).unwrap();
            let b = mixed_moment_nc(Independence::ConditionallyFree, &vars, &w).unwrap();
            assert_eq!(a, b, "{letters:?}");
        }
    }
}

fn random_element<R: rand::Rng>(d: usize, rng: &mut R) -> AlgElement {
    AlgElement::new((0..d).map(|_| random_q(rng, 3, 2)).collect())
}

fn random_word<R: rand::Rng>(d: usize, vars: &[usize], rng: &mut R) -> ColoredWord {
    ColoredWord::new(
        random_element(d, rng),
        vars.iter().map(|&v| (v, random_element(d, rng))).collect(),
    )
}

#[test]
fn routes_agree_on_dim3_words() {
    let alg = Arc::new(BaseAlgebra::upper_triangular());
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mk = |s1, s2| {
        let fam =
            CumulantFamily::with_conditional(random_group(&alg, 4, s1), random_group(&alg, 4, s2))
                .unwrap();
        VariableData::from_cumulants(fam).unwrap()
    };
    let vars = [mk(1, 2), mk(3, 4)];
    for letters in [
        vec![0, 1],
        vec![0, 1, 0],
        vec![1, 0, 1, 0],
        vec![0, 0, 1, 0, 1],
        vec![0, 1, 1, 0, 1],
    ] {
        let w = random_word(3, &letters, &mut rng);
        for kind in [Independence::Free, Independence::ConditionallyFree] {
            let a = mixed_moment(kind, &vars, &w).unwrap();
            let b = mixed_moment_nc(kind, &vars, &w).unwrap();
            assert_eq!(a, b, "{kind:?} {letters:?}");
        }
    }
}

#[test]
fn single_variable_words_reduce_to_moments() {
    let alg = Arc::new(BaseAlgebra::upper_triangular());
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let fam = CumulantFamily::with_conditional(random_group(&alg, 3, 1), random_group(&alg, 3, 2))
        .unwrap();
    let vars = [VariableData::from_cumulants(fam).unwrap()];
    let w = random_word(3, &[0, 0, 0], &mut rng);
    let coeffs: Vec<AlgElement> = w.letters.iter().map(|(_, c)| c.clone()).collect();
    let expected = alg.mul(&w.lead, &vars[0].phi().eval(&coeffs)).unwrap();
    for kind in [
        Independence::Free,
        Independence::ConditionallyFree,
        Independence::Monotone,
        Independence::ConditionallyMonotone,
    ] {
        let v = mixed_moment(kind, &vars, &w).unwrap();
        if kind.is_conditional() {
            assert_eq!(v.phi, expected, "{kind:?}");
        }
    }
}

#[test]
fn word_too_long() {
    let vars = [scalar_var(&[1, 1], &[1, 1])];
    let w = scalar_word(&[0; 13]);
    assert_eq!(
        mixed_moment(Independence::Free, &vars, &w).unwrap_err(),
        NcError::WordTooLong(13)
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn scalar_cumulant_round_trip(ks in proptest::collection::vec(-5i64..6, 5)) {
        let mut coeffs = vec![1i64];
        coeffs.extend(ks);
        let fam = scalar_family(&coeffs);
        let m = moments_from_cumulants_nc(&fam).unwrap();
        let back = cumulants_from_moments_nc(&m).unwrap();
        prop_assert_eq!(back.main(), fam.main());
    }

    #[test]
    fn free_word_is_linear_in_lead(x in -4i64..5, seed in 0u64..100) {
        let alg = Arc::new(BaseAlgebra::upper_triangular());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vars = [
            VariableData::from_cumulants(CumulantFamily::new(random_group(&alg, 2, seed + 1))).unwrap(),
            VariableData::from_cumulants(CumulantFamily::new(random_group(&alg, 2, seed + 2))).unwrap(),
        ];
        let w = random_word(3, &[0, 1, 0], &mut rng);
        let scaled = ColoredWord::new(w.lead.scale(&q(x)), w.letters.clone());
        let a = mixed_moment(Independence::Free, &vars, &w).unwrap();
        let b = mixed_moment(Independence::Free, &vars, &scaled).unwrap();
        prop_assert_eq!(a.phi.scale(&q(x)), b.phi);
    }
}
