//! The four multiplicative convolutions at transform level.

use crate::ncpart::Independence;
use crate::series::{
    crossed_mul, crossed_mul_opposite, star, star_opposite, CrossedPair, OOperator,
};

use super::transforms::{cumulants_from_h, k_pair_from_t, t_pair_from_h};
use super::{OVDistribution, ProbError, Result, TransformPair, TransformRole};

pub type ConvolutionKind = Independence;

/// The operator `lambda^{-1#} # rho` behind the free T-transform product.
pub fn free_operator() -> OOperator {
    OOperator::sharp(OOperator::LambdaInvSharp, OOperator::Rho)
}

/// Transform role each kind operates on.
pub fn operand_role(kind: ConvolutionKind) -> TransformRole {
    match kind {
        Independence::Free | Independence::ConditionallyFree => TransformRole::T,
        Independence::Monotone | Independence::ConditionallyMonotone => TransformRole::H,
    }
}

fn crossed(op: OOperator, p: &TransformPair) -> Result<CrossedPair> {
    Ok(CrossedPair::new(op, p.main.clone(), p.conditional.clone())?)
}

/// Product transform of two independent variables.
///
/// Free kinds take T-transforms and return the transform of `ab`. Monotone
/// kinds take H-transforms of `a` and `b` with `a - 1` before `b - 1` and
/// return the transform of `ba`. One-state kinds ignore the conditional slot
/// and return a degenerate pair.
pub fn multiplicative_convolve(
    kind: ConvolutionKind,
    a: &TransformPair,
    b: &TransformPair,
) -> Result<TransformPair> {
    let role = operand_role(kind);
    if a.role != role || b.role != role {
        return Err(ProbError::KindMismatch(kind));
    }
    let order = a.order().min(b.order());
    let (a, b) = (a.truncate(order), b.truncate(order));
    match kind {
        Independence::Free => Ok(TransformPair::degenerate(
            role,
            star(&free_operator(), &a.main, &b.main)?,
        )),
        Independence::Monotone => Ok(TransformPair::degenerate(
            role,
            star_opposite(&OOperator::Lambda, &a.main, &b.main)?,
        )),
        Independence::ConditionallyFree => {
            let p = crossed_mul(
                &crossed(free_operator(), &a)?,
                &crossed(free_operator(), &b)?,
            )?;
            TransformPair::new(role, p.k, p.h)
        }
        Independence::ConditionallyMonotone => {
            let p = crossed_mul_opposite(
                &crossed(OOperator::Lambda, &a)?,
                &crossed(OOperator::Lambda, &b)?,
            )?;
            TransformPair::new(role, p.k, p.h)
        }
    }
}

/// Rebuild the distribution described by a product transform.
pub fn distribution_of(kind: ConvolutionKind, pair: &TransformPair) -> Result<OVDistribution> {
    if pair.role != operand_role(kind) {
        return Err(ProbError::KindMismatch(kind));
    }
    match kind {
        Independence::Free => {
            let k = super::cumulants_from_t(&pair.main)?;
            OVDistribution::from_cumulants(&k, None)
        }
        Independence::Monotone => {
            OVDistribution::from_cumulants(&cumulants_from_h(&pair.main)?, None)
        }
        Independence::ConditionallyFree => {
            let k = k_pair_from_t(pair)?;
            OVDistribution::from_cumulants(&k.main, Some(&k.conditional))
        }
        Independence::ConditionallyMonotone => {
            let k = k_pair_from_t(&t_pair_from_h(pair)?)?;
            OVDistribution::from_cumulants(&k.main, Some(&k.conditional))
        }
    }
}
