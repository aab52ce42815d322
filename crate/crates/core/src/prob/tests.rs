use std::sync::Arc;

use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::oracle::{product_factors, product_moments_with, transforms_of};
use super::*;
use crate::algebra::{AlgElement, BaseAlgebra};
use crate::ncpart::{mixed_moment, ColoredWord, Independence, VariableData};
use crate::rational::Q;

const KINDS: [Independence; 4] = [
    Independence::Free,
    Independence::ConditionallyFree,
    Independence::Monotone,
    Independence::ConditionallyMonotone,
];

fn random_group(alg: &Arc<BaseAlgebra>, order: usize, seed: u64) -> GroupElement {
    GroupElement::random(alg, order, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn random_dist(alg: &Arc<BaseAlgebra>, order: usize, seed: u64) -> OVDistribution {
    let k = random_group(alg, order, seed);
    let kc = random_group(alg, order, seed + 1000);
    OVDistribution::from_cumulants(&k, Some(&kc)).unwrap()
}

fn scalar() -> Arc<BaseAlgebra> {
    Arc::new(BaseAlgebra::scalar())
}

fn ut() -> Arc<BaseAlgebra> {
    Arc::new(BaseAlgebra::upper_triangular())
}

fn point_mass(alg: &Arc<BaseAlgebra>, order: usize) -> OVDistribution {
    let one = GroupElement::one(alg, order);
    OVDistribution::from_cumulants(&one, Some(&one)).unwrap()
}

fn unit_variance(order: usize) -> OVDistribution {
    let mut k = vec![1, 1];
    k.resize(order + 1, 0);
    OVDistribution::from_cumulants(&GroupElement::scalar_ints(&k).unwrap(), None).unwrap()
}

/// Transform product against the oracle, at transform and moment level.
fn assert_matches_oracle(kind: Independence, a: &OVDistribution, b: &OVDistribution) {
    let (ta, tb) = (
        transforms_of(kind, a).unwrap(),
        transforms_of(kind, b).unwrap(),
    );
    let product = multiplicative_convolve(kind, &ta, &tb).unwrap();
    let oracle = product_transforms(kind, a, b).unwrap();
    assert_eq!(
        product.main.first_mismatch(&oracle.main),
        None,
        "{kind:?} main"
    );
    if kind.is_conditional() {
        assert_eq!(
            product.conditional.first_mismatch(&oracle.conditional),
            None,
            "{kind:?} conditional"
        );
    }
    let back = distribution_of(kind, &product).unwrap();
    let (phi, psi) = product_moments(kind, a, b).unwrap();
    assert_eq!(back.psi_moments(), &psi, "{kind:?} psi moments");
    if kind.is_conditional() {
        assert_eq!(back.phi_moments(), &phi, "{kind:?} phi moments");
    }
}

#[test]
fn point_mass_has_unit_cumulants_and_transforms() {
    let alg = ut();
    let dist = point_mass(&alg, 3);
    assert_eq!(
        point_mass(&scalar(), 3).psi_moments(),
        &MultiSeries::scalar_ints(&[1; 5])
    );
    let one = GroupElement::one(&alg, 3);
    assert_eq!(cumulants(&dist).unwrap(), one);
    assert_eq!(t_transform(&one), one);
    assert_eq!(h_transform(&one).unwrap(), one);
}

#[test]
fn scalar_examples() {
    let m = MultiSeries::scalar_ints(&[1, 1, 2, 4]);
    let k = cumulants(&OVDistribution::from_moments(m, None).unwrap()).unwrap();
    assert_eq!(k, GroupElement::scalar_ints(&[1, 1, 0]).unwrap());
    let k = GroupElement::scalar_ints(&[1, 3]).unwrap();
    assert_eq!(
        moments(&k).unwrap().scalar_coeffs()[2],
        Q::from_integer(4.into())
    );
    let t = t_transform(&GroupElement::scalar_ints(&[1, 1, 0]).unwrap());
    assert_eq!(t.scalar_coeffs()[2], Q::from_integer((-1).into()));
}

#[test]
fn round_trips_are_exact() {
    for (alg, order) in [(scalar(), 4), (ut(), 3)] {
        let k = random_group(&alg, order, 7);
        assert_eq!(cumulants_of(&moments(&k).unwrap()).unwrap(), k);
        assert_eq!(cumulants_from_t(&t_transform(&k)).unwrap(), k);
        assert_eq!(cumulants_from_h(&h_transform(&k).unwrap()).unwrap(), k);
        let dist = random_dist(&alg, order, 8);
        let kp = conditional_pair(&dist).unwrap();
        let tp = conditional_t(&kp).unwrap();
        assert_eq!(k_pair_from_t(&tp).unwrap(), kp);
        assert_eq!(t_pair_from_h(&conditional_h(&tp).unwrap()).unwrap(), tp);
    }
}

#[test]
fn degenerate_conditioning_collapses_pairs() {
    let alg = ut();
    let k = random_group(&alg, 3, 21);
    let dist = OVDistribution::from_cumulants(&k, Some(&k)).unwrap();
    assert_eq!(dist.phi_moments(), dist.psi_moments());
    let kp = conditional_pair(&dist).unwrap();
    assert_eq!(kp.main, kp.conditional);
    let tp = conditional_t(&kp).unwrap();
    assert_eq!(tp.main, tp.conditional);
    let hp = conditional_h(&tp).unwrap();
    assert_eq!(hp.main, hp.conditional);
}

#[test]
fn every_kind_matches_oracle_on_scalars() {
    let alg = scalar();
    for kind in KINDS {
        assert_matches_oracle(kind, &random_dist(&alg, 4, 31), &random_dist(&alg, 4, 32));
    }
}

#[test]
fn every_kind_matches_oracle_on_upper_triangular() {
    let alg = ut();
    for kind in KINDS {
        assert_matches_oracle(kind, &random_dist(&alg, 2, 41), &random_dist(&alg, 2, 42));
    }
}

#[test]
fn point_mass_is_neutral_for_every_kind() {
    let alg = ut();
    let a = random_dist(&alg, 3, 51);
    let unit = point_mass(&alg, 3);
    for kind in KINDS {
        let ta = transforms_of(kind, &a).unwrap();
        let tu = transforms_of(kind, &unit).unwrap();
        assert_eq!(
            multiplicative_convolve(kind, &ta, &tu).unwrap(),
            ta,
            "{kind:?} right"
        );
        assert_eq!(
            multiplicative_convolve(kind, &tu, &ta).unwrap(),
            ta,
            "{kind:?} left"
        );
    }
}

#[test]
fn product_order_is_the_smaller_one() {
    let alg = scalar();
    let (a, b) = (random_dist(&alg, 4, 61), random_dist(&alg, 2, 62));
    for kind in KINDS {
        let p = multiplicative_convolve(
            kind,
            &transforms_of(kind, &a).unwrap(),
            &transforms_of(kind, &b).unwrap(),
        );
        assert_eq!(p.unwrap().order(), 2);
    }
}

#[test]
fn wrong_transform_role_is_rejected() {
    let alg = scalar();
    let a = random_dist(&alg, 2, 71);
    let t = transforms_of(Independence::Free, &a).unwrap();
    let h = transforms_of(Independence::Monotone, &a).unwrap();
    assert_eq!(
        multiplicative_convolve(Independence::Monotone, &t, &t),
        Err(ProbError::KindMismatch(Independence::Monotone))
    );
    assert_eq!(
        multiplicative_convolve(Independence::Free, &h, &t),
        Err(ProbError::KindMismatch(Independence::Free))
    );
    assert!(matches!(
        distribution_of(Independence::Free, &h),
        Err(ProbError::KindMismatch(_))
    ));
}

#[test]
fn conditional_slot_degenerates_to_the_free_product() {
    let alg = ut();
    let k = [random_group(&alg, 3, 81), random_group(&alg, 3, 82)];
    let dists = k
        .clone()
        .map(|k| OVDistribution::from_cumulants(&k, Some(&k)).unwrap());
    for (cond, plain) in [
        (Independence::ConditionallyFree, Independence::Free),
        (Independence::ConditionallyMonotone, Independence::Monotone),
    ] {
        let [a, b] = [0, 1].map(|i| transforms_of(cond, &dists[i]).unwrap());
        let p = multiplicative_convolve(cond, &a, &b).unwrap();
        assert_eq!(p.main, p.conditional, "{cond:?}");
        let [a, b] = [0, 1].map(|i| transforms_of(plain, &dists[i]).unwrap());
        assert_eq!(
            p.main,
            multiplicative_convolve(plain, &a, &b).unwrap().main,
            "{cond:?}"
        );
    }
}

#[test]
fn free_convolution_is_associative() {
    let alg = ut();
    for kind in [
        Independence::Free,
        Independence::ConditionallyFree,
        Independence::Monotone,
    ] {
        let [a, b, c] =
            [91, 92, 93].map(|s| transforms_of(kind, &random_dist(&alg, 3, s)).unwrap());
        let conv =
            |x: &TransformPair, y: &TransformPair| multiplicative_convolve(kind, x, y).unwrap();
        assert_eq!(conv(&conv(&a, &b), &c), conv(&a, &conv(&b, &c)), "{kind:?}");
    }
}

#[test]
fn unit_variance_free_product_has_abab_three() {
    let a = unit_variance(5);
    let vars = [a.variable_data().unwrap(), a.variable_data().unwrap()];
    let word = ColoredWord::plain(&scalar(), &[0, 1, 0, 1]);
    assert_eq!(
        mixed_moment(Independence::Free, &vars, &word).unwrap().phi,
        AlgElement::new(vec![Q::from_integer(3.into())])
    );

    let t = transforms_of(Independence::Free, &a).unwrap();
    let product = multiplicative_convolve(Independence::Free, &t, &t).unwrap();
    let back = distribution_of(Independence::Free, &product).unwrap();
    assert_eq!(back.order(), 5);
    assert_eq!(
        back.psi_moments().scalar_coeffs()[2],
        Q::from_integer(3.into())
    );
    let (_, psi) = product_moments(Independence::Free, &a, &a).unwrap();
    assert_eq!(back.psi_moments(), &psi);
}

#[test]
fn monotone_abab_depends_on_the_variance_of_b() {
    let alg = scalar();
    let data = |m2: i64| {
        let m = MultiSeries::scalar_ints(&[1, 1, m2, 3]);
        VariableData::from_moments(&m, &m).unwrap()
    };
    let word = ColoredWord::plain(&alg, &[0, 1, 0, 1]);
    for (m2b, expected) in [(1, 2), (3, 4)] {
        let vars = [data(2), data(m2b)];
        let v = mixed_moment(Independence::Monotone, &vars, &word).unwrap();
        assert_eq!(
            v.psi,
            AlgElement::new(vec![Q::from_integer(expected.into())]),
            "m2^b = {m2b}"
        );
    }
}

#[test]
fn unshifted_monotone_reading_fails_at_degree_one() {
    let alg = scalar();
    let (a, b) = (random_dist(&alg, 2, 101), random_dist(&alg, 2, 102));
    let vars = [a.variable_data().unwrap(), b.variable_data().unwrap()];
    let kind = Independence::Monotone;
    let (_, psi) = product_moments_with(&vars, product_factors(kind), 2, |v, w| {
        let m = crate::ncpart::mixed_moment_with_shift(kind, v, w, false)?;
        Ok((m.phi, m.psi))
    })
    .unwrap();
    let h = transforms_of(kind, &OVDistribution::from_moments(psi, None).unwrap()).unwrap();
    let [ta, tb] = [&a, &b].map(|d| transforms_of(kind, d).unwrap());
    let product = multiplicative_convolve(kind, &ta, &tb).unwrap();
    assert_eq!(product.main.first_mismatch(&h.main), Some(1));
}

#[test]
fn subordination_identities_hold_on_random_data() {
    for (alg, order) in [(scalar(), 4), (ut(), 3)] {
        let [a, b] = [111, 112].map(|s| conditional_pair(&random_dist(&alg, order, s)).unwrap());
        let sub = subordination(&a, &b).unwrap();
        let oracle = product_transforms(
            Independence::ConditionallyFree,
            &random_dist(&alg, order, 111),
            &random_dist(&alg, order, 112),
        )
        .unwrap();
        assert_eq!(conditional_h(&oracle).unwrap(), sub.product_h);
        assert_eq!(k_pair_from_t(&oracle).unwrap(), sub.product_k);
    }
}

#[test]
fn subordination_with_point_mass() {
    let alg = ut();
    let a = conditional_pair(&random_dist(&alg, 3, 121)).unwrap();
    let unit = TransformPair::degenerate(TransformRole::Cumulants, GroupElement::one(&alg, 3));
    let sub = subordination(&a, &unit).unwrap();
    assert_eq!(sub.k_left, a.main);
    assert_eq!(sub.k_right, GroupElement::one(&alg, 3));
    assert_eq!(sub.product_k, a);
}

#[test]
fn subordination_routes_agree_for_unit_variance() {
    let k = cumulants(&unit_variance(4)).unwrap();
    let pair = TransformPair::degenerate(TransformRole::Cumulants, k);
    let sub = subordination(&pair, &pair).unwrap();
    assert_eq!(sub.product_k.main, sub.product_k.conditional);
    assert!(sub
        .product_k
        .main
        .scalar_coeffs()
        .iter()
        .all(|q| q.is_integer()));
    assert_eq!(sub.product_k.main.scalar_coeffs()[0], Q::one());
}
