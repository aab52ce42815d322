//! Operator-valued moment-cumulant formulas summed over noncrossing partitions.
//!
//! A cumulant series `K` stores `kappa_{n+1}(a b1, .., a bn, a) = K^(n)(b1..bn)`;
//! by right linearity `kappa_{n+1}(a b1, .., a bn) = K^(n)(b1..b_{n-1}) . bn`
//! with the last argument shifted accordingly.

use std::sync::Arc;

use crate::algebra::{AlgElement, BaseAlgebra};
use crate::series::{basis_tuples, GroupElement, MultiSeries};

use super::{enumerate_nc, NCPartition, NcError};

/// Cumulants of one variable; `conditional` is used on outer blocks when present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CumulantFamily {
    main: GroupElement,
    conditional: Option<GroupElement>,
}

impl CumulantFamily {
    pub fn new(main: GroupElement) -> Self {
        Self {
            main,
            conditional: None,
        }
    }

    pub fn with_conditional(
        main: GroupElement,
        conditional: GroupElement,
    ) -> Result<Self, NcError> {
        let order = main.order().min(conditional.order());
        let (main, conditional) = (main.truncate(order), conditional.truncate(order));
        main.compatible(&conditional)?;
        Ok(Self {
            main,
            conditional: Some(conditional),
        })
    }

    pub fn main(&self) -> &GroupElement {
        &self.main
    }

    /// Outer-block cumulants (the main ones if none were given).
    pub fn outer(&self) -> &GroupElement {
        self.conditional.as_ref().unwrap_or(&self.main)
    }

    pub fn conditional(&self) -> Option<&GroupElement> {
        self.conditional.as_ref()
    }

    pub fn algebra(&self) -> &Arc<BaseAlgebra> {
        self.main.algebra()
    }

    /// Largest cumulant arity available is `order + 1`.
    pub fn order(&self) -> usize {
        self.main.order()
    }
}

/// Value of a nested partition product on a word `a c_0 a c_1 .. a c_{n-1}`.
///
/// `kappa(pos, outer)` returns the cumulant series for the block whose first
/// point is `pos`; outer blocks get `outer = true`.
pub(crate) fn nested_value<'k, F>(
    alg: &BaseAlgebra,
    owner: &[usize],
    blocks: &[Vec<usize>],
    coeffs: &[AlgElement],
    kappa: &F,
) -> AlgElement
where
    F: Fn(usize, bool) -> &'k MultiSeries,
{
    interval(alg, owner, blocks, coeffs, kappa, 0, coeffs.len(), true)
}

#[allow(clippy::too_many_arguments)]
fn interval<'k, F>(
    alg: &BaseAlgebra,
    owner: &[usize],
    blocks: &[Vec<usize>],
    coeffs: &[AlgElement],
    kappa: &F,
    start: usize,
    end: usize,
    outer: bool,
) -> AlgElement
where
    F: Fn(usize, bool) -> &'k MultiSeries,
{
    if start == end {
        return alg.unit();
    }
    let block = &blocks[owner[start]];
    let k = block.len();
    let mut args = Vec::with_capacity(k - 1);
    for w in block.windows(2) {
        let inner = interval(alg, owner, blocks, coeffs, kappa, w[0] + 1, w[1], false);
        args.push(alg.mul_unchecked(&coeffs[w[0]], &inner));
    }
    let last = block[k - 1];
    let head = kappa(start, outer).eval(&args);
    let head = alg.mul_unchecked(&head, &coeffs[last]);
    let tail = interval(alg, owner, blocks, coeffs, kappa, last + 1, end, outer);
    alg.mul_unchecked(&head, &tail)
}

fn check_arity(fam_order: usize, n: usize) -> Result<(), NcError> {
    if n > fam_order + 1 {
        return Err(NcError::ArityMissing(n));
    }
    Ok(())
}

/// Evaluate the partition product `kappa_pi` on `a b1 a b2 .. b_{n-1} a`.
pub fn kappa_eval(
    pi: &NCPartition,
    fam: &CumulantFamily,
    args: &[AlgElement],
) -> Result<AlgElement, NcError> {
    let n = pi.size();
    assert_eq!(
        args.len() + 1,
        n,
        "kappa_eval takes n-1 interleaving arguments"
    );
    let largest = pi.blocks().iter().map(Vec::len).max().unwrap_or(0);
    check_arity(fam.order(), largest)?;
    let alg = fam.algebra();
    let mut coeffs = args.to_vec();
    coeffs.push(alg.unit());
    let (outer, inner) = (fam.outer().series(), fam.main().series());
    let pick = |_: usize, is_outer: bool| if is_outer { outer } else { inner };
    Ok(nested_value(alg, &pi.owners(), pi.blocks(), &coeffs, &pick))
}

fn basis_elements(d: usize, tuple: &[usize]) -> Vec<AlgElement> {
    tuple.iter().map(|&i| AlgElement::basis(d, i)).collect()
}

fn sum_over_nc<'k, F>(
    alg: &BaseAlgebra,
    coeffs: &[AlgElement],
    skip_full: bool,
    kappa: &F,
) -> Result<AlgElement, NcError>
where
    F: Fn(usize, bool) -> &'k MultiSeries,
{
    let n = coeffs.len();
    let mut acc = AlgElement::zero(alg.dim());
    for pi in enumerate_nc(n)?.iter() {
        if skip_full && pi.num_blocks() == 1 {
            continue;
        }
        acc = acc.add(&nested_value(alg, &pi.owners(), pi.blocks(), coeffs, kappa));
    }
    Ok(acc)
}

/// Moment series `C(b1..bn) = phi(a b1 .. a bn)` of order `fam.order() + 1`,
/// outer blocks taken from the conditional cumulants when present.
pub fn moments_from_cumulants_nc(fam: &CumulantFamily) -> Result<MultiSeries, NcError> {
    let alg = fam.algebra().clone();
    let order = fam.order() + 1;
    let d = alg.dim();
    let (outer, inner) = (fam.outer().series(), fam.main().series());
    let pick = |_: usize, is_outer: bool| if is_outer { outer } else { inner };
    let mut err = None;
    let s = MultiSeries::from_fn(&alg, order, |tuple| {
        if tuple.is_empty() {
            return alg.unit();
        }
        match sum_over_nc(&alg, &basis_elements(d, tuple), false, &pick) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                AlgElement::zero(d)
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(s),
    }
}

fn check_mean(moments: &MultiSeries) -> Result<(), NcError> {
    let alg = moments.algebra();
    if moments.order() < 1 {
        return Err(NcError::OrderTooLow {
            needed: 1,
            available: moments.order(),
        });
    }
    if moments.eval(&[]) != alg.unit() || moments.eval(&[alg.unit()]) != alg.unit() {
        return Err(NcError::MeanNotUnit);
    }
    Ok(())
}

/// Peel cumulants off degree by degree. `inner` fixes the cumulants used on
/// inner blocks; `None` means the series being extracted is used everywhere.
fn extract(moments: &MultiSeries, inner: Option<&MultiSeries>) -> Result<GroupElement, NcError> {
    check_mean(moments)?;
    let alg = moments.algebra().clone();
    let d = alg.dim();
    let order = moments.order() - 1;
    let mut k = MultiSeries::one(&alg, order);
    for m in 1..=order {
        let current = k.clone();
        let inner_series = inner.unwrap_or(&current);
        let pick = |_: usize, is_outer: bool| if is_outer { &current } else { inner_series };
        let width = d.pow(m as u32);
        for (idx, tuple) in basis_tuples(d, m).enumerate() {
            let mut coeffs = basis_elements(d, &tuple);
            coeffs.push(alg.unit());
            let rest = sum_over_nc(&alg, &coeffs, true, &pick)?;
            let value = moments.eval(&coeffs).sub(&rest);
            for (j, x) in value.into_coeffs().into_iter().enumerate() {
                k.component_mut(m)[j * width + idx] = x;
            }
        }
    }
    Ok(GroupElement::new(k)?)
}

fn round_trip(fam: &CumulantFamily, moments: &MultiSeries) -> Result<(), NcError> {
    let back = moments_from_cumulants_nc(fam)?;
    if let Some(deg) = back.first_mismatch(moments) {
        return Err(NcError::MomentsInconsistent(deg));
    }
    Ok(())
}

/// Inverse of [`moments_from_cumulants_nc`] for a single state; the result has
/// order one less than the moments. Round trip is asserted.
pub fn cumulants_from_moments_nc(moments: &MultiSeries) -> Result<CumulantFamily, NcError> {
    let fam = CumulantFamily::new(extract(moments, None)?);
    round_trip(&fam, moments)?;
    Ok(fam)
}

/// Cumulants for a pair of states: main cumulants from `psi_moments`, then the
/// conditional ones from `phi_moments` with inner blocks fixed to the main ones.
pub fn conditional_cumulants_nc(
    phi_moments: &MultiSeries,
    psi_moments: &MultiSeries,
) -> Result<CumulantFamily, NcError> {
    let order = phi_moments.order().min(psi_moments.order());
    let (phi_moments, psi_moments) = (phi_moments.truncate(order), psi_moments.truncate(order));
    let main = cumulants_from_moments_nc(&psi_moments)?;
    let cond = extract(&phi_moments, Some(main.main().series()))?;
    let fam = CumulantFamily::with_conditional(main.main().clone(), cond)?;
    round_trip(&fam, &phi_moments)?;
    Ok(fam)
}
