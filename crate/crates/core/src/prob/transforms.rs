//! K, T and H transforms and their conditional partners.

use crate::ncpart::{self, CumulantFamily};
use crate::series::{
    e_inverse, e_transform, fixed_point, relative_e, relative_e_inverse, star_left_inverse,
    CompElement, CrossedPair, GroupElement, MultiSeries, OOperator,
};

use super::{mismatch, OVDistribution, ProbError, Result, TransformPair, TransformRole};

fn lambda() -> OOperator {
    OOperator::Lambda
}

/// `I . A` as a composition element (`A` must start with `1_B`).
fn lambda_of(a: &GroupElement) -> CompElement {
    OOperator::Lambda.apply(a)
}

/// Moment series `C` of order `N + 1` from cumulants `K` of order `N`:
/// `C = e_lambda(1 + K.I)`, checked against the double-inverse formula.
pub fn moments(k: &GroupElement) -> Result<MultiSeries> {
    let g = GroupElement::new(k.unit_plus_right_shift().into_series())?;
    let c = e_transform(&lambda(), &g)?;
    let dual = star_left_inverse(&lambda(), &g.cauchy_inverse());
    if let Some(deg) = mismatch(&c, &dual) {
        return Err(ProbError::RouteMismatch(deg));
    }
    Ok(c.into_series())
}

/// Cumulants from a moment series via `1 + K.I = e_lambda^{-1}(C)`, checked
/// against the partition route.
pub fn cumulants_of(moments: &MultiSeries) -> Result<GroupElement> {
    let c = GroupElement::new(moments.clone())?;
    let g = e_inverse(&lambda(), &c);
    let k = g.strip_unit_plus_right_shift()?;
    let oracle = ncpart::cumulants_from_moments_nc(moments)?;
    if let Some(deg) = mismatch(&k, oracle.main()) {
        return Err(ProbError::OracleMismatch(deg));
    }
    Ok(k)
}

/// Cumulants of the `psi` state (of `phi` for one-state data).
pub fn cumulants(dist: &OVDistribution) -> Result<GroupElement> {
    cumulants_of(dist.psi_moments())
}

/// `phi`-moments from `(K, K^c)`: the fixed point of
/// `C' = 1 + (K^c . (I.C)) . (I.C')` where `C` are the `psi`-moments.
pub fn conditional_moments(k: &GroupElement, kc: &GroupElement) -> Result<MultiSeries> {
    k.compatible(kc)?;
    let order = k.order() + 1;
    let psi = GroupElement::new(moments(k)?)?;
    let outer = GroupElement::new(kc.series().extend_order(order))?.act(&lambda_of(&psi))?;
    let one = GroupElement::one(k.algebra(), order);
    let phi = fixed_point(&one, |x| {
        let tail = outer.series().cauchy(&x.series().left_shift())?;
        GroupElement::new(MultiSeries::one(k.algebra(), order).add(&tail))
    })?;
    Ok(phi.into_series())
}

/// `(K, K^c)` for a distribution. `K^c` is extracted combinatorially; the
/// series relation [`conditional_moments`] is then checked forward.
pub fn conditional_pair(dist: &OVDistribution) -> Result<TransformPair> {
    let k = cumulants(dist)?;
    if !dist.has_two_states() {
        return Ok(TransformPair::degenerate(TransformRole::Cumulants, k));
    }
    let fam: CumulantFamily =
        ncpart::conditional_cumulants_nc(dist.phi_moments(), dist.psi_moments())?;
    let kc = fam.outer().clone();
    let forward = conditional_moments(&k, &kc)?;
    if let Some(deg) = mismatch(&forward, dist.phi_moments()) {
        return Err(ProbError::OracleMismatch(deg));
    }
    TransformPair::new(TransformRole::Cumulants, k, kc)
}

/// `T = e_lambda^{-1}(K) = K . (I.K)^{-1}`.
pub fn t_transform(k: &GroupElement) -> GroupElement {
    e_inverse(&lambda(), k)
}

/// `K = e_lambda(T)`.
pub fn cumulants_from_t(t: &GroupElement) -> Result<GroupElement> {
    Ok(e_transform(&lambda(), t)?)
}

fn expect_role(pair: &TransformPair, role: TransformRole) {
    assert_eq!(pair.role, role, "transform pair has the wrong role");
}

/// `(K, K^c) -> (T, T^c)`, with `T^c = K^c . (I.K)^{-1}`. The dual route
/// through the crossed-product inverse of `(T, T^c)^{-1}` is asserted.
pub fn conditional_t(pair: &TransformPair) -> Result<TransformPair> {
    expect_role(pair, TransformRole::Cumulants);
    let p = CrossedPair::new(lambda(), pair.main.clone(), pair.conditional.clone())?;
    let out = relative_e_inverse(&p);
    // ((T, T^c)^{-1})^{-1} in the crossed product recovers (K, K^c).
    let inv = out.cauchy_inverse();
    let k = star_left_inverse(&lambda(), &inv.k);
    let kc = inv.h.act(&lambda_of(&k))?.cauchy_inverse();
    if let Some(deg) = mismatch(&k, &pair.main).or_else(|| mismatch(&kc, &pair.conditional)) {
        return Err(ProbError::RouteMismatch(deg));
    }
    TransformPair::new(TransformRole::T, out.k, out.h)
}

fn geometric(like: &GroupElement) -> CompElement {
    CompElement::geometric(like.algebra(), like.order())
}

/// `(1 - I.H)^{-1} . I` as a composition element.
fn resolvent_shift(h: &GroupElement) -> crate::series::Result<CompElement> {
    let alg = h.algebra();
    let base = MultiSeries::one(alg, h.order()).sub(&h.series().left_shift());
    let inv = GroupElement::new(base)?.cauchy_inverse();
    CompElement::new(inv.series().right_shift())
}

/// H-transform by the fixed point `H = K . ((1 - I.H)^{-1} . I)`, checked
/// against `H = e_lambda(T . E)` and its double-inverse form.
pub fn h_transform(k: &GroupElement) -> Result<GroupElement> {
    let h = fixed_point(k, |x| k.act(&resolvent_shift(x)?))?;
    let te = t_transform(k).act(&geometric(k))?;
    let via_e = e_transform(&lambda(), &te)?;
    let via_star = star_left_inverse(&lambda(), &te.cauchy_inverse());
    if let Some(deg) = mismatch(&h, &via_e).or_else(|| mismatch(&h, &via_star)) {
        return Err(ProbError::RouteMismatch(deg));
    }
    Ok(h)
}

/// `(T, T^c) -> (H, H^c)` by the relative e-transform of `(T.E, T^c.E)`,
/// checked against `H^c = K^c . ((1 - I.H)^{-1} . I)`.
pub fn conditional_h(pair: &TransformPair) -> Result<TransformPair> {
    expect_role(pair, TransformRole::T);
    let e = geometric(&pair.main);
    let p = CrossedPair::new(lambda(), pair.main.act(&e)?, pair.conditional.act(&e)?)?;
    let out = relative_e(&p)?;
    let k = cumulants_from_t(&pair.main)?;
    let kc = pair.conditional.act(&lambda_of(&k))?;
    let h = h_transform(&k)?;
    let hc = kc.act(&resolvent_shift(&h)?)?;
    if let Some(deg) = mismatch(&out.k, &h).or_else(|| mismatch(&out.h, &hc)) {
        return Err(ProbError::RouteMismatch(deg));
    }
    TransformPair::new(TransformRole::H, out.k, out.h)
}

/// Inverse of [`h_transform`]: `K = H . R(H)^{-1}` with `R(H) = (1 - I.H)^{-1} . I`.
pub fn cumulants_from_h(h: &GroupElement) -> Result<GroupElement> {
    let k = h.act(&resolvent_shift(h)?.comp_inverse())?;
    let back = h_transform(&k)?;
    if let Some(deg) = mismatch(&back, h) {
        return Err(ProbError::RouteMismatch(deg));
    }
    Ok(k)
}

/// Inverse of [`conditional_t`].
pub fn k_pair_from_t(pair: &TransformPair) -> Result<TransformPair> {
    expect_role(pair, TransformRole::T);
    let out = relative_e(&CrossedPair::new(
        lambda(),
        pair.main.clone(),
        pair.conditional.clone(),
    )?)?;
    TransformPair::new(TransformRole::Cumulants, out.k, out.h)
}

/// Inverse of [`conditional_h`].
pub fn t_pair_from_h(pair: &TransformPair) -> Result<TransformPair> {
    expect_role(pair, TransformRole::H);
    let out = relative_e_inverse(&CrossedPair::new(
        lambda(),
        pair.main.clone(),
        pair.conditional.clone(),
    )?);
    let e_inv = geometric(&pair.main).comp_inverse();
    TransformPair::new(TransformRole::T, out.k.act(&e_inv)?, out.h.act(&e_inv)?)
}
