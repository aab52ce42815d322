//! Bridge from the mixed-moment oracles to product distributions.

use crate::algebra::AlgElement;
use crate::ncpart::{mixed_moment, ColoredWord, Independence, VariableData};
use crate::series::MultiSeries;

use super::transforms::{
    conditional_h, conditional_pair, conditional_t, cumulants, h_transform, t_transform,
};
use super::{OVDistribution, Result, TransformPair, TransformRole};

/// Moment series of the product `x_{f0} x_{f1}` up to `order + 1`, where
/// variable 0 is `a` and variable 1 is `b`.
pub(crate) fn product_moments_with<F>(
    vars: &[VariableData; 2],
    factors: [usize; 2],
    order: usize,
    mut moment: F,
) -> Result<(MultiSeries, MultiSeries)>
where
    F: FnMut(&[VariableData], &ColoredWord) -> Result<(AlgElement, AlgElement)>,
{
    let alg = vars[0].algebra().clone();
    let d = alg.dim();
    let mut err = None;
    let mut psi_parts = Vec::new();
    let phi = MultiSeries::from_fn(&alg, order + 1, |tuple| {
        let mut letters = Vec::with_capacity(2 * tuple.len());
        for &i in tuple {
            letters.push((factors[0], alg.unit()));
            letters.push((factors[1], AlgElement::basis(d, i)));
        }
        let word = ColoredWord::new(alg.unit(), letters);
        match moment(vars, &word) {
            Ok((phi, psi)) => {
                psi_parts.push(psi);
                phi
            }
            Err(e) => {
                err.get_or_insert(e);
                psi_parts.push(AlgElement::zero(d));
                AlgElement::zero(d)
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    let mut parts = psi_parts.into_iter();
    let psi = MultiSeries::from_fn(&alg, order + 1, |_| {
        parts.next().expect("one value per tuple")
    });
    Ok((phi, psi))
}

/// The factor order of the product variable for each kind: `ab` for the
/// free kinds and `ba` for the monotone kinds (with `a` before `b`).
pub(crate) fn product_factors(kind: Independence) -> [usize; 2] {
    match kind {
        Independence::Free | Independence::ConditionallyFree => [0, 1],
        Independence::Monotone | Independence::ConditionallyMonotone => [1, 0],
    }
}

/// Moments `(phi, psi)` of the product variable of two independent
/// variables, straight from the mixed-moment oracle.
pub fn product_moments(
    kind: Independence,
    a: &OVDistribution,
    b: &OVDistribution,
) -> Result<(MultiSeries, MultiSeries)> {
    let order = a.order().min(b.order());
    let vars = [
        a.truncate(order).variable_data()?,
        b.truncate(order).variable_data()?,
    ];
    product_moments_with(&vars, product_factors(kind), order, |vars, word| {
        let v = mixed_moment(kind, vars, word)?;
        Ok((v.phi, v.psi))
    })
}

/// Transforms of the oracle product: `T` (free), `(T, T^c)` (c-free),
/// `H` (monotone) or `(H, H^c)` (c-monotone).
pub fn product_transforms(
    kind: Independence,
    a: &OVDistribution,
    b: &OVDistribution,
) -> Result<TransformPair> {
    let (phi, psi) = product_moments(kind, a, b)?;
    let dist = if kind.is_conditional() {
        OVDistribution::from_moments(phi, Some(psi))?
    } else {
        OVDistribution::from_moments(psi, None)?
    };
    transforms_of(kind, &dist)
}

/// The transform a convolution of the given kind acts on.
pub fn transforms_of(kind: Independence, dist: &OVDistribution) -> Result<TransformPair> {
    match kind {
        Independence::Free => Ok(TransformPair::degenerate(
            TransformRole::T,
            t_transform(&cumulants(dist)?),
        )),
        Independence::Monotone => Ok(TransformPair::degenerate(
            TransformRole::H,
            h_transform(&cumulants(dist)?)?,
        )),
        Independence::ConditionallyFree => conditional_t(&conditional_pair(dist)?),
        Independence::ConditionallyMonotone => {
            conditional_h(&conditional_t(&conditional_pair(dist)?)?)
        }
    }
}
