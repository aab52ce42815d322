//! Truncated series of multilinear maps on a base algebra.
//!
//! A [`MultiSeries`] of order `N` stores, for every arity `n <= N`, a dense
//! tensor `c_n[j; i1..in]` with `component_n(e_i1, .., e_in) = sum_j c_n[..] e_j`.
//! Tensors are flat and row-major in `(j, i1, .., in)`.
//!
//! Two groups live here: series starting with `1_B` under the Cauchy product
//! ([`GroupElement`]) and series starting with the identity map `I` under
//! composition ([`CompElement`]). The second acts on the first on the right.

mod crossed;
mod operator;

use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::algebra::{AlgElement, BaseAlgebra};
use crate::rational::{one, random_q, zero, Q};

pub use crossed::{
    crossed_inverse, crossed_mul, crossed_mul_opposite, relative_e, relative_e_inverse, CrossedPair,
};
pub use operator::{
    e_inverse, e_transform, fixed_point, star, star_inverse, star_left_inverse, star_opposite,
    star_opposite_inverse, OOperator,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("truncation orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("series live over different base algebras")]
    AlgebraMismatch,
    #[error("component {degree} has {found} coefficients, expected {expected}")]
    ShapeMismatch {
        degree: usize,
        expected: usize,
        found: usize,
    },
    #[error("degree-0 component is not the unit of B")]
    NotUnital,
    #[error("degree-0 component of a compositional series must vanish")]
    NotCompositional,
    #[error("degree-1 component is not the identity map (scaled linear parts are not supported)")]
    LinearPartNotIdentity,
    #[error("star inverse round-trip fails at degree {0}")]
    StarInverseCheckFailed(usize),
    #[error("fixed point iteration not stable at degree {0}")]
    FixedPointNotStable(usize),
    #[error("crossed pairs carry different operators")]
    OperatorMismatch,
    #[error("series is not of the form K.I (unit stripping fails at degree {0})")]
    UnitStripMismatch(usize),
    #[error("series of order {0} cannot be unit-stripped")]
    NothingToStrip(usize),
}

pub type Result<T> = std::result::Result<T, SeriesError>;

/// Truncated formal series of multilinear maps `B^n -> B`, `n = 0..=order`.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiSeries {
    alg: Arc<BaseAlgebra>,
    order: usize,
    comps: Vec<Vec<Q>>,
}

impl fmt::Debug for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiSeries(dim={}, order={}) [", self.dim(), self.order)?;
        for (n, c) in self.comps.iter().enumerate() {
            if n > 0 {
                write!(f, "; ")?;
            }
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", parts.join(" "))?;
        }
        write!(f, "]")
    }
}

pub(crate) fn pow(d: usize, n: usize) -> usize {
    d.pow(n as u32)
}

/// Basis index tuples of length `n` in the row-major order used by components.
pub fn basis_tuples(d: usize, n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..pow(d, n)).map(move |mut idx| {
        let mut t = vec![0; n];
        for slot in (0..n).rev() {
            t[slot] = idx % d;
            idx /= d;
        }
        t
    })
}

impl MultiSeries {
    pub fn zero(alg: &Arc<BaseAlgebra>, order: usize) -> Self {
        let d = alg.dim();
        Self {
            alg: alg.clone(),
            order,
            comps: (0..=order).map(|n| vec![zero(); pow(d, n + 1)]).collect(),
        }
    }

    /// The constant series `1_B`.
    pub fn one(alg: &Arc<BaseAlgebra>, order: usize) -> Self {
        let mut s = Self::zero(alg, order);
        s.comps[0] = alg.unit_coeffs().to_vec();
        s
    }

    /// The identity map `I` in arity one.
    pub fn identity(alg: &Arc<BaseAlgebra>, order: usize) -> Self {
        let mut s = Self::zero(alg, order);
        if order >= 1 {
            let d = alg.dim();
            for i in 0..d {
                s.comps[1][i * d + i] = one();
            }
        }
        s
    }

    /// `E = I + I.I + I.I.I + ...`, the series `I/(1-I)`.
    pub fn geometric(alg: &Arc<BaseAlgebra>, order: usize) -> Self {
        let id = Self::identity(alg, order);
        let mut power = id.clone();
        let mut acc = Self::zero(alg, order);
        for _ in 1..=order {
            acc = acc.add(&power);
            power = power.cauchy_unchecked(&id);
        }
        acc
    }

    /// Build from the values on basis tuples, one call per tuple of every arity.
    pub fn from_fn<F>(alg: &Arc<BaseAlgebra>, order: usize, mut f: F) -> Self
    where
        F: FnMut(&[usize]) -> AlgElement,
    {
        let mut s = Self::zero(alg, order);
        let d = alg.dim();
        for n in 0..=order {
            let width = pow(d, n);
            for (idx, tuple) in basis_tuples(d, n).enumerate() {
                let v = f(&tuple);
                for (j, x) in v.into_coeffs().into_iter().enumerate() {
                    s.comps[n][j * width + idx] = x;
                }
            }
        }
        s
    }

    /// Build from flat row-major components, checking every length.
    pub fn from_components(
        alg: &Arc<BaseAlgebra>,
        order: usize,
        comps: Vec<Vec<Q>>,
    ) -> Result<Self> {
        let d = alg.dim();
        if comps.len() != order + 1 {
            return Err(SeriesError::ShapeMismatch {
                degree: comps.len(),
                expected: order + 1,
                found: comps.len(),
            });
        }
        for (n, c) in comps.iter().enumerate() {
            if c.len() != pow(d, n + 1) {
                return Err(SeriesError::ShapeMismatch {
                    degree: n,
                    expected: pow(d, n + 1),
                    found: c.len(),
                });
            }
        }
        Ok(Self {
            alg: alg.clone(),
            order,
            comps,
        })
    }

    /// Scalar shorthand `[c0; c1, c2, ..]` over the one-dimensional algebra.
    pub fn scalar(coeffs: &[Q]) -> Self {
        let alg = Arc::new(BaseAlgebra::scalar());
        let order = coeffs.len().saturating_sub(1);
        Self {
            alg,
            order,
            comps: coeffs.iter().map(|c| vec![c.clone()]).collect(),
        }
    }

    pub fn scalar_ints(coeffs: &[i64]) -> Self {
        Self::scalar(
            &coeffs
                .iter()
                .map(|&c| crate::rational::q(c))
                .collect::<Vec<_>>(),
        )
    }

    /// Random series with small rational entries; `c0` as requested.
    pub fn random<R: Rng + ?Sized>(
        alg: &Arc<BaseAlgebra>,
        order: usize,
        rng: &mut R,
        start: Start,
    ) -> Self {
        let mut s = Self::zero(alg, order);
        for n in 0..=order {
            for x in s.comps[n].iter_mut() {
                *x = random_q(rng, 3, 3);
            }
        }
        match start {
            Start::Unit => s.comps[0] = alg.unit_coeffs().to_vec(),
            Start::Identity => {
                s.comps[0] = vec![zero(); alg.dim()];
                if order >= 1 {
                    s.comps[1] = Self::identity(alg, 1).comps[1].clone();
                }
            }
            Start::Free => {}
        }
        s
    }

    pub fn algebra(&self) -> &Arc<BaseAlgebra> {
        &self.alg
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn component(&self, n: usize) -> &[Q] {
        &self.comps[n]
    }

    pub fn components(&self) -> &[Vec<Q>] {
        &self.comps
    }

    pub(crate) fn component_mut(&mut self, n: usize) -> &mut Vec<Q> {
        &mut self.comps[n]
    }

    /// Scalar shorthand coefficient list; only meaningful for `dim == 1`.
    pub fn scalar_coeffs(&self) -> Vec<Q> {
        self.comps.iter().map(|c| c[0].clone()).collect()
    }

    pub fn is_group_like(&self) -> bool {
        self.comps[0] == self.alg.unit_coeffs()
    }

    fn check_compositional(&self) -> Result<()> {
        if self.comps[0].iter().any(|x| !x.is_zero()) {
            return Err(SeriesError::NotCompositional);
        }
        if self.order >= 1 && self.comps[1] != Self::identity(&self.alg, 1).comps[1] {
            return Err(SeriesError::LinearPartNotIdentity);
        }
        Ok(())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        Self {
            alg: self.alg.clone(),
            order,
            comps: self.comps[..=order].to_vec(),
        }
    }

    /// Lowest degree where the two series differ.
    pub fn first_mismatch(&self, other: &Self) -> Option<usize> {
        if self.alg != other.alg {
            return Some(0);
        }
        let top = self.order.max(other.order);
        (0..=top).find(|&n| self.comps.get(n) != other.comps.get(n))
    }

    pub(crate) fn compatible(&self, other: &Self) -> Result<()> {
        if self.alg != other.alg {
            return Err(SeriesError::AlgebraMismatch);
        }
        if self.order != other.order {
            return Err(SeriesError::OrderMismatch(self.order, other.order));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Self {
            alg: self.alg.clone(),
            order: self.order.min(other.order),
            comps,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-one()))
    }

    pub fn scale(&self, s: &Q) -> Self {
        let comps = self
            .comps
            .iter()
            .map(|c| c.iter().map(|x| x * s).collect())
            .collect();
        Self {
            alg: self.alg.clone(),
            order: self.order,
            comps,
        }
    }

    /// Evaluate the arity-`n` component on algebra elements.
    pub fn eval(&self, args: &[AlgElement]) -> AlgElement {
        let n = args.len();
        let d = self.dim();
        let mut out = vec![zero(); d];
        if n > self.order {
            return AlgElement::new(out);
        }
        let c = &self.comps[n];
        let width = pow(d, n);
        for idx in 0..width {
            let mut weight = one();
            let mut rest = idx;
            for slot in (0..n).rev() {
                let i = rest % d;
                rest /= d;
                weight *= &args[slot].coeffs()[i];
                if weight.is_zero() {
                    break;
                }
            }
            if weight.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let v = &c[j * width + idx];
                if !v.is_zero() {
                    *o += v * &weight;
                }
            }
        }
        AlgElement::new(out)
    }

    /// Cauchy product `(A.B)(x1..xn) = sum A(x1..xp) B(x_{p+1}..xn)`.
    pub fn cauchy(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(self.cauchy_unchecked(other))
    }

    pub(crate) fn cauchy_unchecked(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut out = Self::zero(&self.alg, order);
        for n in 0..=order {
            for p in 0..=n {
                cauchy_term(
                    &self.alg,
                    &self.comps[p],
                    p,
                    &other.comps[n - p],
                    n - p,
                    &mut out.comps[n],
                );
            }
        }
        out
    }

    /// `I . self`, left multiplication by the identity map.
    pub fn left_shift(&self) -> Self {
        Self::identity(&self.alg, self.order).cauchy_unchecked(self)
    }

    /// `self . I`, right multiplication by the identity map.
    pub fn right_shift(&self) -> Self {
        self.cauchy_unchecked(&Self::identity(&self.alg, self.order))
    }

    /// Composition `A o beta`; the constant term of `A` passes through.
    pub fn compose(&self, beta: &CompElement) -> Result<Self> {
        self.compatible(beta)?;
        Ok(self.compose_unchecked(&beta.0))
    }

    pub(crate) fn compose_unchecked(&self, beta: &Self) -> Self {
        let order = self.order.min(beta.order);
        let mut out = Self::zero(&self.alg, order);
        out.comps[0] = self.comps[0].clone();
        for n in 1..=order {
            out.comps[n] = compose_component(self, beta, n);
        }
        out
    }

    /// Given `S = K.I`, recover `K` (order drops by one) by feeding `1_B` in the last slot.
    pub fn strip_right_unit(&self) -> Result<Self> {
        self.strip_unit(false)
    }

    /// Given `S = I.K`, recover `K` by feeding `1_B` in the first slot.
    pub fn strip_left_unit(&self) -> Result<Self> {
        self.strip_unit(true)
    }

    fn strip_unit(&self, left: bool) -> Result<Self> {
        if self.order == 0 {
            return Err(SeriesError::NothingToStrip(0));
        }
        let d = self.dim();
        let u = self.alg.unit_coeffs();
        let order = self.order - 1;
        let mut k = Self::zero(&self.alg, order);
        for n in 0..=order {
            let src = &self.comps[n + 1];
            let width = pow(d, n);
            let dst = &mut k.comps[n];
            for j in 0..d {
                for idx in 0..width {
                    let mut acc = zero();
                    for (l, ul) in u.iter().enumerate() {
                        if ul.is_zero() {
                            continue;
                        }
                        let flat = if left { l * width + idx } else { idx * d + l };
                        acc += &src[j * width * d + flat] * ul;
                    }
                    dst[j * width + idx] = acc;
                }
            }
        }
        let ext = k.extend_order(self.order);
        let rebuilt = if left {
            ext.left_shift()
        } else {
            ext.right_shift()
        };
        if self.comps[0].iter().any(|x| !x.is_zero()) {
            return Err(SeriesError::UnitStripMismatch(0));
        }
        if let Some(deg) = (1..=self.order).find(|&n| rebuilt.comps[n] != self.comps[n]) {
            return Err(SeriesError::UnitStripMismatch(deg));
        }
        Ok(k)
    }
}

/// How [`MultiSeries::random`] fixes the low degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Start {
    Unit,
    Identity,
    Free,
}

/// `out += a_p (x) b_q` contracted through the algebra product.
fn cauchy_term(alg: &BaseAlgebra, a: &[Q], p: usize, b: &[Q], q: usize, out: &mut [Q]) {
    let d = alg.dim();
    let (wa, wb) = (pow(d, p), pow(d, q));
    let w = wa * wb;
    for (j, l, k, c) in alg.terms() {
        for ia in 0..wa {
            let x = &a[j * wa + ia];
            if x.is_zero() {
                continue;
            }
            let xc = if c.is_one() { x.clone() } else { x * c };
            for ib in 0..wb {
                let y = &b[l * wb + ib];
                if y.is_zero() {
                    continue;
                }
                out[k * w + ia * wb + ib] += &xc * y;
            }
        }
    }
}

/// Replace slot `l` (of size `d`) of `t = [outer][d][inner]` by `beta = [d][qd]`.
fn contract(t: &[Q], outer: usize, d: usize, inner: usize, beta: &[Q], qd: usize) -> Vec<Q> {
    let mut res = vec![zero(); outer * qd * inner];
    for o in 0..outer {
        for l in 0..d {
            let row = &beta[l * qd..(l + 1) * qd];
            if row.iter().all(Zero::is_zero) {
                continue;
            }
            for r in 0..inner {
                let x = &t[(o * d + l) * inner + r];
                if x.is_zero() {
                    continue;
                }
                for (i, b) in row.iter().enumerate() {
                    if !b.is_zero() {
                        res[(o * qd + i) * inner + r] += x * b;
                    }
                }
            }
        }
    }
    res
}

/// Arity-`n` component of `alpha o beta` (`beta` with zero constant term).
fn compose_component(alpha: &MultiSeries, beta: &MultiSeries, n: usize) -> Vec<Q> {
    let d = alpha.dim();
    let mut out = vec![zero(); pow(d, n + 1)];
    for k in 1..=n.min(alpha.order) {
        let a = &alpha.comps[k];
        if a.iter().all(Zero::is_zero) {
            continue;
        }
        fill_slots(a.clone(), k, 0, 0, n, beta, d, &mut out);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn fill_slots(
    t: Vec<Q>,
    k: usize,
    slot: usize,
    used: usize,
    n: usize,
    beta: &MultiSeries,
    d: usize,
    out: &mut [Q],
) {
    if slot == k {
        debug_assert_eq!(used, n);
        for (o, x) in out.iter_mut().zip(t) {
            *o += x;
        }
        return;
    }
    let remaining_slots = k - slot - 1;
    let max_q = n - used - remaining_slots;
    let outer = pow(d, 1 + used);
    let inner = pow(d, remaining_slots);
    let min_q = if remaining_slots == 0 { max_q } else { 1 };
    for q in min_q..=max_q.min(beta.order) {
        let b = &beta.comps[q];
        if b.iter().all(Zero::is_zero) {
            continue;
        }
        let next = contract(&t, outer, d, inner, b, pow(d, q));
        if next.iter().all(Zero::is_zero) {
            continue;
        }
        fill_slots(next, k, slot + 1, used + q, n, beta, d, out);
    }
}

/// Series with `c0 = 1_B`: the group under the Cauchy product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement(MultiSeries);

/// Series with `c0 = 0`, `c1 = I`: the group under composition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompElement(MultiSeries);

impl Deref for GroupElement {
    type Target = MultiSeries;
    fn deref(&self) -> &MultiSeries {
        &self.0
    }
}

impl Deref for CompElement {
    type Target = MultiSeries;
    fn deref(&self) -> &MultiSeries {
        &self.0
    }
}

impl TryFrom<MultiSeries> for GroupElement {
    type Error = SeriesError;
    fn try_from(s: MultiSeries) -> Result<Self> {
        if !s.is_group_like() {
            return Err(SeriesError::NotUnital);
        }
        Ok(Self(s))
    }
}

impl TryFrom<MultiSeries> for CompElement {
    type Error = SeriesError;
    fn try_from(s: MultiSeries) -> Result<Self> {
        s.check_compositional()?;
        Ok(Self(s))
    }
}

impl GroupElement {
    pub fn new(s: MultiSeries) -> Result<Self> {
        Self::try_from(s)
    }

    pub fn one(alg: &Arc<BaseAlgebra>, order: usize) -> Self {
        Self(MultiSeries::one(alg, order))
    }

    pub fn random<R: Rng + ?Sized>(alg: &Arc<BaseAlgebra>, order: usize, rng: &mut R) -> Self {
        Self(MultiSeries::random(alg, order, rng, Start::Unit))
    }

    pub fn scalar_ints(coeffs: &[i64]) -> Result<Self> {
        Self::new(MultiSeries::scalar_ints(coeffs))
    }

    pub fn series(&self) -> &MultiSeries {
        &self.0
    }

    pub fn into_series(self) -> MultiSeries {
        self.0
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self(self.0.truncate(order))
    }

    /// Cauchy product, which keeps the group.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.cauchy(&other.0)?))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        Self(self.0.cauchy_unchecked(&other.0))
    }

    /// Inverse for the Cauchy product, by graded recursion.
    pub fn cauchy_inverse(&self) -> Self {
        let s = &self.0;
        let mut x = MultiSeries::one(&s.alg, s.order);
        for n in 1..=s.order {
            let mut acc = vec![zero(); pow(s.dim(), n + 1)];
            for p in 1..=n {
                cauchy_term(&s.alg, &s.comps[p], p, &x.comps[n - p], n - p, &mut acc);
            }
            x.comps[n] = acc.into_iter().map(|v| -v).collect();
        }
        Self(x)
    }

    /// Right action `(1 + a) . beta = 1 + a o beta`.
    pub fn act(&self, beta: &CompElement) -> Result<Self> {
        Ok(Self(self.0.compose(beta)?))
    }

    pub(crate) fn act_unchecked(&self, beta: &CompElement) -> Self {
        Self(self.0.compose_unchecked(&beta.0))
    }

    /// `1 + K.I` for a cumulant-type series `K`; order grows by one.
    pub fn unit_plus_right_shift(&self) -> Self {
        let s = &self.0;
        let ext = s.extend_order(s.order + 1);
        let shifted = ext.right_shift();
        Self(MultiSeries::one(&s.alg, s.order + 1).add(&shifted))
    }

    /// Inverse of [`unit_plus_right_shift`](Self::unit_plus_right_shift).
    pub fn strip_unit_plus_right_shift(&self) -> Result<Self> {
        let s = &self.0;
        let tail = s.sub(&MultiSeries::one(&s.alg, s.order));
        let k = tail.strip_right_unit()?;
        GroupElement::new(k)
    }
}

impl MultiSeries {
    /// Pad with zero components up to a larger order (used only where the
    /// extra components are provably irrelevant, e.g. before a right shift).
    pub(crate) fn extend_order(&self, order: usize) -> Self {
        let mut out = Self::zero(&self.alg, order.max(self.order));
        for n in 0..=self.order {
            out.comps[n] = self.comps[n].clone();
        }
        out
    }
}

impl CompElement {
    pub fn new(s: MultiSeries) -> Result<Self> {
        Self::try_from(s)
    }

    pub(crate) fn new_unchecked(s: MultiSeries) -> Self {
        debug_assert!(s.check_compositional().is_ok());
        Self(s)
    }

    pub fn identity(alg: &Arc<BaseAlgebra>, order: usize) -> Self {
        Self(MultiSeries::identity(alg, order))
    }

    pub fn geometric(alg: &Arc<BaseAlgebra>, order: usize) -> Self {
        Self(MultiSeries::geometric(alg, order))
    }

    pub fn random<R: Rng + ?Sized>(alg: &Arc<BaseAlgebra>, order: usize, rng: &mut R) -> Self {
        Self(MultiSeries::random(alg, order, rng, Start::Identity))
    }

    pub fn series(&self) -> &MultiSeries {
        &self.0
    }

    pub fn into_series(self) -> MultiSeries {
        self.0
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self(self.0.truncate(order))
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.compose(other)?))
    }

    pub(crate) fn compose_unchecked(&self, other: &Self) -> Self {
        Self(self.0.compose_unchecked(&other.0))
    }

    /// Inverse for composition, solved degree by degree.
    pub fn comp_inverse(&self) -> Self {
        let s = &self.0;
        let mut g = MultiSeries::identity(&s.alg, s.order);
        for n in 2..=s.order {
            let c = compose_component(s, &g, n);
            g.comps[n] = c.into_iter().map(|v| -v).collect();
        }
        Self(g)
    }
}

/// Checked Cauchy inverse on a raw series.
pub fn cauchy_inverse(a: &MultiSeries) -> Result<GroupElement> {
    Ok(GroupElement::new(a.clone())?.cauchy_inverse())
}

/// Checked composition inverse on a raw series.
pub fn comp_inverse(b: &MultiSeries) -> Result<CompElement> {
    Ok(CompElement::new(b.clone())?.comp_inverse())
}
