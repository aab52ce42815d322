//! Subordination series for the c-free multiplicative convolution.

use crate::series::{fixed_point, star, star_opposite, GroupElement, OOperator};

use super::convolve::multiplicative_convolve;
use super::transforms::{conditional_h, conditional_t, k_pair_from_t};
use super::{mismatch, ProbError, Result, TransformPair, TransformRole};

/// `K_{a-|b}`, `K_{a|-b}`, their H counterparts and the product transforms
/// they reproduce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subordination {
    pub k_left: GroupElement,
    pub k_right: GroupElement,
    pub h_left: GroupElement,
    pub h_right: GroupElement,
    /// `(K_ab, K^c_ab)` of the c-free product.
    pub product_k: TransformPair,
    /// `(H_ab, H^c_ab)` of the c-free product.
    pub product_h: TransformPair,
}

/// `A ._lambda B = A . (I.B)`
fn dot_lambda(a: &GroupElement, b: &GroupElement) -> crate::series::Result<GroupElement> {
    a.act(&OOperator::Lambda.apply(b))
}

/// `A ._rho B = A . (B.I)`
fn dot_rho(a: &GroupElement, b: &GroupElement) -> crate::series::Result<GroupElement> {
    a.act(&OOperator::Rho.apply(b))
}

fn check(name: &'static str, lhs: &GroupElement, rhs: &GroupElement) -> Result<()> {
    match mismatch(lhs, rhs) {
        Some(degree) => Err(ProbError::SubordinationIdentityFailed { name, degree }),
        None => Ok(()),
    }
}

/// Solve the subordination fixed points from the cumulant pairs of `a` and
/// `b` and check every factorization against the c-free convolution.
pub fn subordination(a: &TransformPair, b: &TransformPair) -> Result<Subordination> {
    assert_eq!(
        a.role,
        TransformRole::Cumulants,
        "subordination takes cumulant pairs"
    );
    assert_eq!(
        b.role,
        TransformRole::Cumulants,
        "subordination takes cumulant pairs"
    );
    let order = a.order().min(b.order());
    let (a, b) = (a.truncate(order), b.truncate(order));
    let (ka, kb) = (&a.main, &b.main);

    let k_right = fixed_point(ka, |x| dot_lambda(kb, &dot_rho(ka, x)?))?;
    let k_left = fixed_point(ka, |y| dot_rho(ka, &dot_lambda(kb, y)?))?;

    let (ta, tb) = (conditional_t(&a)?, conditional_t(&b)?);
    let product_t = multiplicative_convolve(super::ConvolutionKind::ConditionallyFree, &ta, &tb)?;
    let product_k = k_pair_from_t(&product_t)?;
    check(
        "K_ab = K_b *lambda K_a-|b",
        &star_opposite(&OOperator::Lambda, kb, &k_left)?,
        &product_k.main,
    )?;
    check(
        "K_ab = K_a *rho K_a|-b",
        &star(&OOperator::Rho, ka, &k_right)?,
        &product_k.main,
    )?;
    check("K_a-|b = K_a .rho K_a|-b", &dot_rho(ka, &k_right)?, &k_left)?;
    let kc = dot_rho(&a.conditional, &k_right)?.mul(&dot_lambda(&b.conditional, &k_left)?)?;
    check("K^c_ab", &kc, &product_k.conditional)?;

    let (ha, hb) = (conditional_h(&ta)?, conditional_h(&tb)?);
    let (ham, hbm) = (&ha.main, &hb.main);
    let h_right = fixed_point(ham, |x| dot_rho(ham, &dot_lambda(hbm, x)?))?;
    let h_left = fixed_point(ham, |y| dot_lambda(hbm, &dot_rho(ham, y)?))?;
    let product_h = conditional_h(&product_t)?;
    check(
        "H_a-|b = H_b .lambda H_a|-b",
        &dot_lambda(hbm, &h_right)?,
        &h_left,
    )?;
    check(
        "H_ab = H_b *lambda H_a|-b",
        &star_opposite(&OOperator::Lambda, hbm, &h_right)?,
        &product_h.main,
    )?;
    check(
        "H_ab = H_a *rho H_a-|b",
        &star(&OOperator::Rho, ham, &h_left)?,
        &product_h.main,
    )?;
    let hc = dot_rho(&ha.conditional, &h_left)?.mul(&dot_lambda(&hb.conditional, &h_right)?)?;
    check("H^c_ab", &hc, &product_h.conditional)?;

    Ok(Subordination {
        k_left,
        k_right,
        h_left,
        h_right,
        product_k,
        product_h,
    })
}
