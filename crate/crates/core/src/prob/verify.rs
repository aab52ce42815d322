//! Transform-level factorizations checked against the mixed-moment oracles.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgElement, BaseAlgebra};
use crate::ncpart::{
    mixed_moment, moments_from_cumulants_nc, ColoredWord, CumulantFamily, Independence,
};
use crate::rational::q;
use crate::report::{Check, Report};
use crate::series::GroupElement;

use super::oracle::transforms_of;
use super::{
    conditional_h, conditional_pair, cumulants_from_h, cumulants_from_t, cumulants_of,
    distribution_of, h_transform, k_pair_from_t, moments, multiplicative_convolve, product_moments,
    product_transforms, subordination, t_transform, OVDistribution, Result, TransformPair,
};

/// One base algebra at one transform order.
#[derive(Clone, Debug)]
pub struct ProbabilityCase {
    pub name: String,
    pub algebra: Arc<BaseAlgebra>,
    pub order: usize,
}

impl ProbabilityCase {
    pub fn new(name: impl Into<String>, algebra: Arc<BaseAlgebra>, order: usize) -> Self {
        Self {
            name: name.into(),
            algebra,
            order,
        }
    }

    fn label(&self, what: &str) -> String {
        format!("{what} [{} N={}]", self.name, self.order)
    }
}

/// Instance counts and the seed the random data is drawn from.
#[derive(Clone, Copy, Debug)]
pub struct ProbabilityBudget {
    pub families: usize,
    pub instances: usize,
    pub seed: u64,
}

impl Default for ProbabilityBudget {
    fn default() -> Self {
        Self {
            families: 20,
            instances: 10,
            seed: 2024,
        }
    }
}

/// Collects failing witnesses for one check.
struct Tally {
    property: String,
    witnesses: Vec<String>,
}

impl Tally {
    fn new(property: String) -> Self {
        Self {
            property,
            witnesses: Vec::new(),
        }
    }

    fn record(&mut self, instance: usize, outcome: Result<Option<String>>) {
        match outcome {
            Ok(None) => {}
            Ok(Some(w)) => self.witnesses.push(format!("instance {instance}: {w}")),
            Err(e) => self.witnesses.push(format!("instance {instance}: {e}")),
        }
    }

    fn finish(self, report: &mut Report) {
        let mut check = Check::pass(self.property);
        if !self.witnesses.is_empty() {
            check = Check::fail(check.property, self.witnesses.join("; "));
        }
        report.push(check);
    }
}

fn degree(what: &str, d: Option<usize>) -> Option<String> {
    d.map(|d| format!("{what} differs at degree {d}"))
}

fn random_dist(case: &ProbabilityCase, rng: &mut ChaCha8Rng) -> Result<OVDistribution> {
    let k = GroupElement::random(&case.algebra, case.order, rng);
    let kc = GroupElement::random(&case.algebra, case.order, rng);
    OVDistribution::from_cumulants(&k, Some(&kc))
}

/// Series moments against the partition sum, and the round trips through
/// moments, T and H.
fn duality(k: &GroupElement, kc: &GroupElement) -> Result<Option<String>> {
    let m = moments(k)?;
    let oracle = moments_from_cumulants_nc(&CumulantFamily::new(k.clone()))?;
    let cond = super::conditional_moments(k, kc)?;
    let cond_oracle =
        moments_from_cumulants_nc(&CumulantFamily::with_conditional(k.clone(), kc.clone())?)?;
    let routes = [
        ("moments vs partition sum", m.first_mismatch(&oracle)),
        (
            "conditional moments vs partition sum",
            cond.first_mismatch(&cond_oracle),
        ),
        ("K -> moments -> K", cumulants_of(&m)?.first_mismatch(k)),
        (
            "K -> T -> K",
            cumulants_from_t(&t_transform(k))?.first_mismatch(k),
        ),
        (
            "K -> H -> K",
            cumulants_from_h(&h_transform(k)?)?.first_mismatch(k),
        ),
    ];
    Ok(routes.into_iter().find_map(|(what, d)| degree(what, d)))
}

/// The series product of the transforms of `a` and `b` against the oracle
/// product, at transform level and after converting back to moments.
fn factorization(
    kind: Independence,
    a: &OVDistribution,
    b: &OVDistribution,
) -> Result<(Option<String>, TransformPair)> {
    let (ta, tb) = (transforms_of(kind, a)?, transforms_of(kind, b)?);
    let product = multiplicative_convolve(kind, &ta, &tb)?;
    let oracle = product_transforms(kind, a, b)?;
    let mut w = degree("main transform", product.main.first_mismatch(&oracle.main));
    if kind.is_conditional() {
        w = w.or_else(|| {
            degree(
                "conditional transform",
                product.conditional.first_mismatch(&oracle.conditional),
            )
        });
    }
    let back = distribution_of(kind, &product)?;
    let (phi, psi) = product_moments(kind, a, b)?;
    w = w.or_else(|| degree("psi moments", back.psi_moments().first_mismatch(&psi)));
    if kind.is_conditional() {
        w = w.or_else(|| degree("phi moments", back.phi_moments().first_mismatch(&phi)));
    }
    Ok((w, oracle))
}

/// Subordination fixed points; the identities are checked inside
/// [`subordination`]. With an oracle c-free product the results are also
/// compared against it.
fn subordinate(
    a: &OVDistribution,
    b: &OVDistribution,
    oracle: Option<&TransformPair>,
) -> Result<Option<String>> {
    let sub = subordination(&conditional_pair(a)?, &conditional_pair(b)?)?;
    let Some(oracle) = oracle else {
        return Ok(None);
    };
    let k = k_pair_from_t(oracle)?;
    let h = conditional_h(oracle)?;
    Ok(degree("K_ab", sub.product_k.main.first_mismatch(&k.main))
        .or_else(|| {
            degree(
                "K^c_ab",
                sub.product_k.conditional.first_mismatch(&k.conditional),
            )
        })
        .or_else(|| degree("H_ab", sub.product_h.main.first_mismatch(&h.main)))
        .or_else(|| {
            degree(
                "H^c_ab",
                sub.product_h.conditional.first_mismatch(&h.conditional),
            )
        }))
}

/// H by its fixed point, by `e_lambda(T.E)` and by the `⋆_λ` inverse; the
/// three routes are compared inside [`h_transform`] and [`conditional_h`].
fn dual_route(dist: &OVDistribution) -> Result<Option<String>> {
    transforms_of(Independence::ConditionallyMonotone, dist)?;
    Ok(None)
}

/// Scalar `a`, `b` with unit variance and vanishing higher cumulants:
/// `phi(abab) = 3`, and the free pipeline reproduces the product moments to order 5.
pub fn dykema_unit_variance() -> Check {
    let property = "dykema unit variance [scalar N=5]";
    let outcome = (|| -> Result<Option<String>> {
        let alg = Arc::new(BaseAlgebra::scalar());
        let k = GroupElement::scalar_ints(&[1, 1, 0, 0, 0, 0])?;
        let a = OVDistribution::from_cumulants(&k, None)?;
        let vars = [a.variable_data()?, a.variable_data()?];
        let abab = mixed_moment(
            Independence::Free,
            &vars,
            &ColoredWord::plain(&alg, &[0, 1, 0, 1]),
        )?;
        if abab.phi != AlgElement::new(vec![q(3)]) {
            return Ok(Some(format!("phi(abab) = {:?}", abab.phi)));
        }
        Ok(factorization(Independence::Free, &a, &a)?.0)
    })();
    Check::from_outcome(property, outcome)
}

fn duality_families(
    case: &ProbabilityCase,
    families: usize,
    rng: &mut ChaCha8Rng,
    report: &mut Report,
) {
    let mut tally = Tally::new(case.label("moment-cumulant duality"));
    for i in 1..=families {
        let k = GroupElement::random(&case.algebra, case.order, rng);
        let kc = GroupElement::random(&case.algebra, case.order, rng);
        tally.record(i, duality(&k, &kc));
    }
    tally.finish(report);
}

/// Only the moment-cumulant duality on random families.
pub fn verify_duality(case: &ProbabilityCase, budget: ProbabilityBudget) -> Check {
    let mut report = Report::default();
    duality_families(
        case,
        budget.families,
        &mut ChaCha8Rng::seed_from_u64(budget.seed),
        &mut report,
    );
    report.checks.remove(0)
}

/// Every probability check on one case.
pub fn verify_probability(case: &ProbabilityCase, budget: ProbabilityBudget) -> Report {
    let mut report = Report::new(format!("probability [{} N={}]", case.name, case.order));
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);

    duality_families(case, budget.families, &mut rng, &mut report);

    let mut sub = Tally::new(case.label("subordination"));
    let mut dual = Tally::new(case.label("monotone dual route"));
    let kinds = [
        ("free factorization", Independence::Free),
        (
            "conditionally free factorization",
            Independence::ConditionallyFree,
        ),
        ("monotone factorization", Independence::Monotone),
        (
            "conditionally monotone factorization",
            Independence::ConditionallyMonotone,
        ),
    ];
    let mut instance = 0;
    for (name, kind) in kinds {
        let mut tally = Tally::new(case.label(name));
        for i in 1..=budget.instances {
            instance += 1;
            let pair =
                random_dist(case, &mut rng).and_then(|a| Ok((a, random_dist(case, &mut rng)?)));
            let (a, b) = match pair {
                Ok(p) => p,
                Err(e) => {
                    tally.record(i, Err(e));
                    continue;
                }
            };
            let oracle = match factorization(kind, &a, &b) {
                Ok((w, oracle)) => {
                    tally.record(i, Ok(w));
                    Some(oracle)
                }
                Err(e) => {
                    tally.record(i, Err(e));
                    None
                }
            };
            let cfree = oracle
                .as_ref()
                .filter(|_| kind == Independence::ConditionallyFree);
            sub.record(instance, subordinate(&a, &b, cfree));
            if matches!(
                kind,
                Independence::Monotone | Independence::ConditionallyMonotone
            ) {
                dual.record(
                    instance,
                    dual_route(&a).and_then(|w| Ok(w.or(dual_route(&b)?))),
                );
            }
        }
        tally.finish(&mut report);
    }
    dual.finish(&mut report);
    sub.finish(&mut report);
    report
}

/// Scalar at `N = 4` and 2x2 upper-triangular (dimension 3) at `N = 3`.
pub fn default_cases() -> Vec<ProbabilityCase> {
    vec![
        ProbabilityCase::new("scalar", Arc::new(BaseAlgebra::scalar()), 4),
        ProbabilityCase::new(
            "upper-triangular",
            Arc::new(BaseAlgebra::upper_triangular()),
            3,
        ),
    ]
}

/// Duality, the four factorizations, the dual H route and subordination on
/// the default cases, plus the unit-variance instance.
pub fn probability_suite() -> Report {
    let mut report = Report::new("probability");
    report.push(dykema_unit_variance());
    for case in default_cases() {
        let sub = verify_probability(&case, ProbabilityBudget::default());
        report.checks.extend(sub.checks);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_variance_instance_passes() {
        assert!(dykema_unit_variance().passed());
    }

    #[test]
    fn small_budget_passes_on_both_cases() {
        let budget = ProbabilityBudget {
            families: 2,
            instances: 1,
            seed: 5,
        };
        for mut case in default_cases() {
            case.order = case.order.min(2);
            let report = verify_probability(&case, budget);
            assert!(report.passed(), "{:#?}", report.checks);
            assert_eq!(report.checks.len(), 7);
        }
    }

    #[test]
    fn failures_carry_instance_witnesses() {
        let mut report = Report::new("t");
        let mut tally = Tally::new("p".into());
        tally.record(3, Ok(Some("x".into())));
        tally.record(4, Ok(None));
        tally.finish(&mut report);
        assert_eq!(
            report.checks[0].witnesses,
            vec!["instance 3: x".to_string()]
        );
    }
}
