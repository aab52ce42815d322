use super::*;
use crate::rational::{q, qf};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn w(s: &str) -> Word {
    Word::parse(s).unwrap()
}

fn series(letters: usize, max_len: usize, comps: &[&[(&str, Q)]]) -> WordSeries {
    let terms = comps
        .iter()
        .map(|c| c.iter().map(|(s, x)| (w(s), x.clone())).collect())
        .collect();
    WordSeries::new(letters, max_len, terms).unwrap()
}

// Polynomials in time, truncated at degree `L`: the input-output semantics
// of a series with inputs `u_1 .. u_m` and `u_0 = 1`.
type Poly = Vec<Q>;

fn poly_mul(a: &Poly, b: &Poly, len: usize) -> Poly {
    let mut out = vec![q(0); len + 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate().filter(|(j, _)| i + j <= len) {
            out[i + j] += x * y;
        }
    }
    out
}

fn integrate(a: &Poly, len: usize) -> Poly {
    let mut out = vec![q(0); len + 1];
    for (i, x) in a.iter().enumerate().filter(|(i, _)| *i < len) {
        out[i + 1] = x / q(i as i64 + 1);
    }
    out
}

/// Iterated integral of `w` against inputs `u` (letter 0 reads the constant 1).
fn iterated(w: &Word, u: &[Poly], len: usize) -> Poly {
    let mut e = vec![q(0); len + 1];
    e[0] = q(1);
    for &l in w.letters().iter().rev() {
        let weighted = if l == 0 {
            e.clone()
        } else {
            poly_mul(&u[l as usize - 1], &e, len)
        };
        e = integrate(&weighted, len);
    }
    e
}

fn eval(s: &WordSeries, u: &[Poly]) -> Vec<Poly> {
    let len = s.max_len();
    (0..s.arity())
        .map(|i| {
            let mut out = vec![q(0); len + 1];
            for (word, c) in s.component(i) {
                for (k, x) in iterated(word, u, len).iter().enumerate() {
                    out[k] += c * x;
                }
            }
            out
        })
        .collect()
}

fn random_inputs(rng: &mut ChaCha8Rng, m: usize, len: usize) -> Vec<Poly> {
    (0..m)
        .map(|_| (0..=len).map(|_| random_q(rng, 3, 2)).collect())
        .collect()
}

#[test]
fn word_shuffles() {
    let x0 = series(2, 4, &[&[("x0", q(1))]]);
    let x1 = series(2, 4, &[&[("x1", q(1))]]);
    assert_eq!(
        x0.shuffle(&x1).unwrap(),
        series(2, 4, &[&[("x0x1", q(1)), ("x1x0", q(1))]])
    );
    assert_eq!(x0.shuffle(&x0).unwrap(), series(2, 4, &[&[("x0x0", q(2))]]));
    let x0x1 = series(2, 4, &[&[("x0x1", q(1))]]);
    assert_eq!(
        x0x1.shuffle(&x0).unwrap(),
        series(2, 4, &[&[("x0x0x1", q(2)), ("x0x1x0", q(1))]])
    );
}

#[test]
fn shuffle_counts_match_position_choices() {
    // |u ⧢ v| counted with multiplicity is binomial(|u| + |v|, |u|).
    let total: u64 = shuffle_words(&[0, 1, 0], &[1, 1]).values().sum();
    assert_eq!(total, 10);
}

#[test]
fn words_parse_and_print() {
    assert_eq!(w("x0x12x3").letters(), &[0, 12, 3]);
    assert_eq!(w("").to_string(), "");
    assert_eq!(format!("{:?}", w("1")), "1");
    assert!(Word::parse("y0").is_err());
    assert!(Word::parse("x0x").is_err());
}

#[test]
fn composition_one_and_two_steps() {
    let d = series(2, 4, &[&[("", q(2)), ("x1", q(3))]]);
    let unit = WordSeries::one(2, 4, 1);
    assert_eq!(unit.compose(&d).unwrap(), WordSeries::one(2, 4, 1));
    // x'_1 ∘ d = x0 d_1
    let x1 = series(2, 4, &[&[("x1", q(1))]]);
    assert_eq!(
        x1.compose(&d).unwrap(),
        series(2, 4, &[&[("x0", q(2)), ("x0x1", q(3))]])
    );
    // x'_1 x'_1 ∘ d = x0 (d_1 ⧢ x0 d_1)
    let inner = series(2, 4, &[&[("x0", q(2)), ("x0x1", q(3))]]);
    let expected = d.shuffle(&inner).unwrap();
    let expected = WordSeries {
        letters: 2,
        max_len: 4,
        comps: vec![prepend_series(0, &expected.comps[0], 4)],
    };
    let x1x1 = series(2, 4, &[&[("x1x1", q(1))]]);
    assert_eq!(x1x1.compose(&d).unwrap(), expected);
    // x'_0 is plain integration.
    let x0 = series(2, 4, &[&[("x0x1", q(1))]]);
    assert_eq!(
        x0.compose(&d).unwrap(),
        series(2, 4, &[&[("x0x0", q(2)), ("x0x0x1", q(3))]])
    );
}

#[test]
fn feedback_examples() {
    let f = series(3, 4, &[&[("x1", q(5))], &[("", q(1))]]);
    let x0_cubed = series(3, 4, &[&[("x0x0x0", q(1))]]);
    assert_eq!(x0_cubed.feedback(&f).unwrap(), x0_cubed);
    let unit = WordSeries::one(3, 4, 1);
    assert_eq!(unit.feedback(&f).unwrap(), unit);
    let x2 = series(3, 4, &[&[("x2", q(1))]]);
    assert_eq!(x2.feedback(&f).unwrap(), x2);
    let x1 = series(3, 4, &[&[("x1", q(1))]]);
    assert_eq!(x1.feedback(&f).unwrap(), series(3, 4, &[&[("x1x1", q(5))]]));
}

#[test]
fn shape_errors() {
    let a = WordSeries::one(2, 3, 1);
    let b = WordSeries::one(3, 3, 1);
    assert_eq!(a.shuffle(&b), Err(FliessError::AlphabetMismatch(2, 3)));
    assert!(matches!(
        b.compose(&a),
        Err(FliessError::ArityMismatch { .. })
    ));
    assert_eq!(
        WordSeries::new(2, 6, vec![vec![]]),
        Err(FliessError::TooLong(6))
    );
    let twice = WordSeries::one(2, 3, 1).scale(&q(2));
    assert!(matches!(
        twice.star_inverse(),
        Err(FliessError::NotGroupLike(0, _))
    ));
    assert_eq!(
        WordSeries::zero(2, 3, 1).shuffle_inverse(),
        Err(FliessError::NotInvertible(0))
    );
    assert!(matches!(
        WordSeries::new(2, 3, vec![vec![(w("x2"), q(1))]]),
        Err(FliessError::LetterOutOfRange(2, 2))
    ));
}

#[test]
fn shuffle_inverse_and_star_inverse() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = WordSeries::random(&mut rng, 3, 4, 2, Some(&qf(3, 2)));
    assert_eq!(
        g.shuffle(&g.shuffle_inverse().unwrap()).unwrap(),
        WordSeries::one(3, 4, 2)
    );
    let g = WordSeries::random(&mut rng, 3, 4, 2, Some(&q(1)));
    let inv = g.star_inverse().unwrap();
    assert_eq!(inv.star(&g).unwrap(), WordSeries::one(3, 4, 2));
    assert_eq!(g.star(&inv).unwrap(), WordSeries::one(3, 4, 2));
}

#[test]
fn composition_matches_input_output_semantics() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..4 {
        let c = WordSeries::random(&mut rng, 3, 4, 2, None);
        let d = WordSeries::random(&mut rng, 2, 4, 2, None);
        let u = random_inputs(&mut rng, 1, 4);
        assert_eq!(eval(&c.compose(&d).unwrap(), &u), eval(&c, &eval(&d, &u)));
    }
}

#[test]
fn feedback_matches_input_output_semantics() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..4 {
        let e = WordSeries::random(&mut rng, 3, 4, 1, None);
        let f = WordSeries::random(&mut rng, 3, 4, 2, None);
        let u = random_inputs(&mut rng, 2, 4);
        let scaled: Vec<Poly> = u
            .iter()
            .zip(eval(&f, &u))
            .map(|(a, b)| poly_mul(a, &b, 4))
            .collect();
        assert_eq!(eval(&e.feedback(&f).unwrap(), &u), eval(&e, &scaled));
    }
}

#[test]
fn closed_loop_matches_input_output_semantics() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..3 {
        // c: 1-tuple on 3 letters (m = 2), d: 2-tuple on 2 letters (k = 1).
        let c = WordSeries::random(&mut rng, 3, 4, 1, None);
        let d = WordSeries::random(&mut rng, 2, 4, 2, None);
        let u = random_inputs(&mut rng, 2, 4);
        // y = F_c[u · F_d[y]], by fixed-point iteration on polynomials.
        let mut y = vec![vec![q(0); 5]];
        for _ in 0..6 {
            let fd = eval(&d, &y);
            let scaled: Vec<Poly> = u.iter().zip(fd).map(|(a, b)| poly_mul(a, &b, 4)).collect();
            y = eval(&c, &scaled);
        }
        assert_eq!(eval(&c.closed_loop(&d).unwrap(), &u), y);
    }
}

#[test]
fn suite_instance_is_green() {
    let report = verify_fliess(2, 3, 9);
    assert!(
        report.passed(),
        "{:#?}",
        report.failures().collect::<Vec<_>>()
    );
    assert_eq!(report.checks.len(), 8);
}

#[test]
fn unit_series_is_trivial_for_lambda() {
    // c = 1: λ_1 is constant at the unit, so both sides of the sharp identity are 1.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let c = WordSeries::one(2, 3, 1);
    let d = WordSeries::random(&mut rng, 2, 3, 1, None);
    assert_eq!(c.compose(&d).unwrap(), WordSeries::one(2, 3, 1));
    assert_eq!(
        c.shuffle(&c).unwrap().compose(&d).unwrap(),
        WordSeries::one(2, 3, 1)
    );
}

fn arb_series(letters: usize, max_len: usize) -> impl Strategy<Value = WordSeries> {
    let words = all_words(letters, max_len);
    proptest::collection::vec((-3i64..=3, 1i64..=2), words.len()).prop_map(move |cs| {
        let terms = words
            .iter()
            .cloned()
            .zip(cs.into_iter().map(|(n, d)| qf(n, d)))
            .collect();
        WordSeries::new(letters, max_len, vec![terms]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn shuffle_is_commutative_and_associative(a in arb_series(2, 3), b in arb_series(2, 3), c in arb_series(2, 3)) {
        prop_assert_eq!(a.shuffle(&b).unwrap(), b.shuffle(&a).unwrap());
        prop_assert_eq!(a.shuffle(&b).unwrap().shuffle(&c).unwrap(), a.shuffle(&b.shuffle(&c).unwrap()).unwrap());
    }

    #[test]
    fn composition_is_a_shuffle_morphism(a in arb_series(2, 3), b in arb_series(2, 3), d in arb_series(2, 3)) {
        prop_assert_eq!(
            a.shuffle(&b).unwrap().compose(&d).unwrap(),
            a.compose(&d).unwrap().shuffle(&b.compose(&d).unwrap()).unwrap()
        );
    }

    #[test]
    fn star_is_associative(a in arb_series(2, 3), b in arb_series(2, 3), c in arb_series(2, 3)) {
        let l = a.star(&b).unwrap().star(&c).unwrap();
        prop_assert_eq!(l, a.star(&b.star(&c).unwrap()).unwrap());
    }
}
