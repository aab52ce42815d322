//! Operator-valued distributions with mean `1_B`, their K/T/H transforms, the
//! four multiplicative convolutions and the subordination series.
//!
//! Order convention: a distribution of order `N` carries moment series
//! `C(b1..bn) = phi(x b1 x b2 .. x bn)` up to `n = N + 1`; its transforms are
//! group elements of order `N`.

mod convolve;
mod oracle;
mod subordination;
mod transforms;
mod verify;

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::BaseAlgebra;
use crate::ncpart::{self, NcError};
use crate::series::{GroupElement, MultiSeries, SeriesError};

pub use convolve::{
    distribution_of, free_operator, multiplicative_convolve, operand_role, ConvolutionKind,
};
pub use oracle::{product_moments, product_transforms, transforms_of};
pub use subordination::{subordination, Subordination};
pub use transforms::{
    conditional_h, conditional_moments, conditional_pair, conditional_t, cumulants,
    cumulants_from_h, cumulants_from_t, cumulants_of, h_transform, k_pair_from_t, moments,
    t_pair_from_h, t_transform,
};
pub use verify::{
    default_cases, dykema_unit_variance, probability_suite, verify_duality, verify_probability,
    ProbabilityBudget, ProbabilityCase,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProbError {
    #[error("mean is not the unit of B")]
    MeanNotUnit,
    #[error("series route disagrees with the partition oracle at degree {0}")]
    OracleMismatch(usize),
    #[error("two routes for the same transform disagree at degree {0}")]
    RouteMismatch(usize),
    #[error("operands are not transforms of the kind {0:?} expects")]
    KindMismatch(ConvolutionKind),
    #[error("subordination identity `{name}` fails at degree {degree}")]
    SubordinationIdentityFailed { name: &'static str, degree: usize },
    #[error("distribution order {0} is too low (need at least 1)")]
    OrderTooLow(usize),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Partition(#[from] NcError),
}

pub type Result<T> = std::result::Result<T, ProbError>;

/// Where a distribution's data came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Moments,
    Cumulants,
}

/// A `B`-valued distribution under one or two states.
///
/// `psi` is absent for a single-state distribution; every accessor then
/// falls back to `phi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OVDistribution {
    phi: MultiSeries,
    psi: Option<MultiSeries>,
    provenance: Provenance,
}

fn check_moments(m: &MultiSeries) -> Result<()> {
    if m.order() < 2 {
        return Err(ProbError::OrderTooLow(m.order().saturating_sub(1)));
    }
    let alg = m.algebra();
    if m.component(0) != alg.unit_coeffs()
        || *m.component(1) != *MultiSeries::identity(alg, 1).component(1)
    {
        return Err(ProbError::MeanNotUnit);
    }
    Ok(())
}

impl OVDistribution {
    /// Validate moment series (`phi`, optional `psi`); both are truncated to
    /// the shorter one. Right linearity is checked by a partition round trip.
    pub fn from_moments(phi: MultiSeries, psi: Option<MultiSeries>) -> Result<Self> {
        check_moments(&phi)?;
        let order = match &psi {
            Some(p) => {
                check_moments(p)?;
                phi.order().min(p.order())
            }
            None => phi.order(),
        };
        let phi = phi.truncate(order);
        let psi = psi.map(|p| p.truncate(order));
        match &psi {
            Some(p) => {
                ncpart::conditional_cumulants_nc(&phi, p)?;
            }
            None => {
                ncpart::cumulants_from_moments_nc(&phi)?;
            }
        }
        Ok(Self {
            phi,
            psi,
            provenance: Provenance::Moments,
        })
    }

    /// From cumulants `K` and optional conditional cumulants `K^c`.
    pub fn from_cumulants(k: &GroupElement, conditional: Option<&GroupElement>) -> Result<Self> {
        let psi = moments(k)?;
        let phi = match conditional {
            Some(kc) => Some(conditional_moments(k, kc)?),
            None => None,
        };
        let (phi, psi) = match phi {
            Some(phi) => (phi, Some(psi)),
            None => (psi, None),
        };
        Ok(Self {
            phi,
            psi,
            provenance: Provenance::Cumulants,
        })
    }

    pub fn algebra(&self) -> &Arc<BaseAlgebra> {
        self.phi.algebra()
    }

    /// Transform order `N`; moments run to `N + 1`.
    pub fn order(&self) -> usize {
        self.phi.order() - 1
    }

    pub fn phi_moments(&self) -> &MultiSeries {
        &self.phi
    }

    pub fn psi_moments(&self) -> &MultiSeries {
        self.psi.as_ref().unwrap_or(&self.phi)
    }

    pub fn has_two_states(&self) -> bool {
        self.psi.is_some()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self {
            phi: self.phi.truncate(order + 1),
            psi: self.psi.as_ref().map(|p| p.truncate(order + 1)),
            provenance: self.provenance,
        }
    }

    /// Single-variable oracle data.
    pub fn variable_data(&self) -> Result<ncpart::VariableData> {
        Ok(ncpart::VariableData::from_moments(
            &self.phi,
            self.psi_moments(),
        )?)
    }
}

/// Which transform a [`TransformPair`] holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformRole {
    Cumulants,
    T,
    H,
}

/// A main transform with its conditional partner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformPair {
    pub role: TransformRole,
    pub main: GroupElement,
    pub conditional: GroupElement,
}

impl TransformPair {
    pub fn new(role: TransformRole, main: GroupElement, conditional: GroupElement) -> Result<Self> {
        if main.algebra() != conditional.algebra() {
            return Err(SeriesError::AlgebraMismatch.into());
        }
        if main.order() != conditional.order() {
            return Err(SeriesError::OrderMismatch(main.order(), conditional.order()).into());
        }
        Ok(Self {
            role,
            main,
            conditional,
        })
    }

    /// Pair with both slots equal (one-state data).
    pub fn degenerate(role: TransformRole, main: GroupElement) -> Self {
        Self {
            role,
            conditional: main.clone(),
            main,
        }
    }

    pub fn order(&self) -> usize {
        self.main.order()
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self {
            role: self.role,
            main: self.main.truncate(order),
            conditional: self.conditional.truncate(order),
        }
    }
}

pub(crate) fn mismatch(a: &MultiSeries, b: &MultiSeries) -> Option<usize> {
    a.first_mismatch(b)
}

#[cfg(test)]
mod tests;
