//! Matching-operator identities for the left translations `λ_c(d) = c ∘ d`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::one;
use crate::report::{Check, Report};

use super::{Result, WordSeries};

/// `c, c2`: `m`-tuples on `k + 1` letters with unit constants.
/// `d, d2`: `k`-tuples on `m + 1` letters.
#[derive(Clone, Debug)]
pub struct FliessInstance {
    pub c: WordSeries,
    pub c2: WordSeries,
    pub d: WordSeries,
    pub d2: WordSeries,
}

impl FliessInstance {
    pub fn random<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> Self {
        let k = rng.gen_range(1..=2);
        let m = rng.gen_range(1..=2);
        let unit = one();
        Self {
            c: WordSeries::random(rng, k + 1, max_len, m, Some(&unit)),
            c2: WordSeries::random(rng, k + 1, max_len, m, Some(&unit)),
            d: WordSeries::random(rng, m + 1, max_len, k, None),
            d2: WordSeries::random(rng, m + 1, max_len, k, None),
        }
    }
}

fn compare(a: &WordSeries, b: &WordSeries) -> Option<String> {
    (a != b).then(|| format!("{a} vs {b}"))
}

/// `λ_c(d ⟲ λ_c2(d2)^{-1⋆}) ⋆ λ_c2(d2)`; at `d2 = d` this is `(λ_c # λ_c2)(d)`.
fn matched(c: &WordSeries, d: &WordSeries, c2: &WordSeries, d2: &WordSeries) -> Result<WordSeries> {
    let right = c2.compose(d2)?;
    c.compose(&d.feedback(&right.star_inverse()?)?)?
        .star(&right)
}

fn first(outcomes: impl IntoIterator<Item = Result<Option<String>>>) -> Result<Option<String>> {
    for o in outcomes {
        if let Some(w) = o? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn check_instance(inst: &FliessInstance, label: &str, report: &mut Report) {
    let FliessInstance { c, c2, d, d2 } = inst;
    let chain = (|| {
        let mid = c.compose(d)?.shuffle(&c2.compose(d2)?)?;
        first([
            Ok(compare(&matched(c, d, c2, d2)?, &mid).map(|w| format!("left: {w}"))),
            Ok(compare(&matched(c2, d2, c, d)?, &mid).map(|w| format!("right: {w}"))),
        ])
    })();
    report.push(Check::from_outcome(
        format!("{label}: matching chain"),
        chain,
    ));

    let sharp = (|| {
        let sum = c.shuffle(c2)?;
        first([d, d2].map(|x| Ok(compare(&matched(c, x, c2, x)?, &sum.compose(x)?))))
    })();
    report.push(Check::from_outcome(format!("{label}: lambda sharp"), sharp));

    let closed = (|| -> Result<Option<String>> {
        Ok(compare(
            &d.closed_loop(c)?.closed_loop(c2)?,
            &d.closed_loop(&c.shuffle(c2)?)?,
        ))
    })();
    report.push(Check::from_outcome(format!("{label}: closed loop"), closed));

    let laws = (|| {
        let f = c.compose(d)?;
        let g = c2.compose(d2)?;
        let h = c.compose(d2)?;
        let unit = WordSeries::one(f.letters(), f.max_len(), f.arity());
        first([
            Ok(compare(&d.shuffle(d2)?, &d2.shuffle(d)?)
                .map(|w| format!("shuffle commutativity: {w}"))),
            Ok(compare(&f.star(&g)?.star(&h)?, &f.star(&g.star(&h)?)?)
                .map(|w| format!("star associativity: {w}"))),
            Ok(compare(&f.star(&unit)?, &f).map(|w| format!("star unit: {w}"))),
            Ok(compare(&f.star(&f.star_inverse()?)?, &unit).map(|w| format!("star inverse: {w}"))),
            Ok(
                compare(&d.feedback(&f)?.feedback(&g)?, &d.feedback(&f.star(&g)?)?)
                    .map(|w| format!("module law: {w}")),
            ),
            Ok(
                compare(&c.compose(&d.feedback(&g)?)?, &c.compose(d)?.feedback(&g)?)
                    .map(|w| format!("distributivity: {w}")),
            ),
            Ok(compare(&d.closed_loop(c)?.open_loop(c)?, d).map(|w| format!("open loop: {w}"))),
        ])
    })();
    report.push(Check::from_outcome(
        format!("{label}: group module laws"),
        laws,
    ));
}

/// Check the matching chain, `λ_c # λ_c2 = λ_{c ⧢ c2}`, the closed-loop
/// identity and the group-module laws on random instances.
pub fn verify_fliess(instances: usize, max_len: usize, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::new("fliess");
    for i in 0..instances {
        let inst = FliessInstance::random(&mut rng, max_len);
        check_instance(&inst, &format!("instance {}", i + 1), &mut report);
    }
    report
}

/// Ten instances at word length 4.
pub fn fliess_suite() -> Report {
    verify_fliess(10, 4, 31)
}
