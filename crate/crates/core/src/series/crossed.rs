//! Crossed product `G_T x G` with `(k1,h1)(k2,h2) = (k1 *_T k2, (h1 . T(k2)) . h2)`.

use super::operator::{e_inverse, e_transform, star, star_inverse, star_opposite};
use super::{GroupElement, OOperator, Result, SeriesError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossedPair {
    pub k: GroupElement,
    pub h: GroupElement,
    pub op: OOperator,
}

impl CrossedPair {
    pub fn new(op: OOperator, k: GroupElement, h: GroupElement) -> Result<Self> {
        k.compatible(&h)?;
        Ok(Self { k, h, op })
    }

    pub fn unit(op: OOperator, like: &GroupElement) -> Self {
        let one = GroupElement::one(like.algebra(), like.order());
        Self {
            k: one.clone(),
            h: one,
            op,
        }
    }

    pub fn is_unit(&self) -> bool {
        self.k.is_group_like()
            && self
                .k
                .first_mismatch(&GroupElement::one(self.k.algebra(), self.k.order()))
                .is_none()
            && self
                .h
                .first_mismatch(&GroupElement::one(self.h.algebra(), self.h.order()))
                .is_none()
    }

    /// Componentwise Cauchy inverse `(k^{-1}, h^{-1})`.
    pub fn cauchy_inverse(&self) -> Self {
        Self {
            k: self.k.cauchy_inverse(),
            h: self.h.cauchy_inverse(),
            op: self.op.clone(),
        }
    }
}

pub fn crossed_mul(p: &CrossedPair, q: &CrossedPair) -> Result<CrossedPair> {
    if p.op != q.op {
        return Err(SeriesError::OperatorMismatch);
    }
    p.k.compatible(&q.k)?;
    let k = star(&p.op, &p.k, &q.k)?;
    let h = p.h.act_unchecked(&p.op.apply(&q.k)).mul_unchecked(&q.h);
    Ok(CrossedPair {
        k,
        h,
        op: p.op.clone(),
    })
}

/// Crossed product over the opposite Cauchy group:
/// `(k1,h1)(k2,h2) = (k2 . (k1 . T(k2)), h2 . (h1 . T(k2)))`. This is the
/// associative form for `lambda`.
pub fn crossed_mul_opposite(p: &CrossedPair, q: &CrossedPair) -> Result<CrossedPair> {
    if p.op != q.op {
        return Err(SeriesError::OperatorMismatch);
    }
    p.k.compatible(&q.k)?;
    let k = star_opposite(&p.op, &p.k, &q.k)?;
    let h = q.h.mul_unchecked(&p.h.act_unchecked(&p.op.apply(&q.k)));
    Ok(CrossedPair {
        k,
        h,
        op: p.op.clone(),
    })
}

pub fn crossed_inverse(p: &CrossedPair) -> Result<CrossedPair> {
    let k = star_inverse(&p.op, &p.k)?;
    let h = p.h.act_unchecked(&p.op.apply(&k)).cauchy_inverse();
    Ok(CrossedPair {
        k,
        h,
        op: p.op.clone(),
    })
}

/// `(k, h) -> (e_T(k), h . T(e_T(k)))`
pub fn relative_e(p: &CrossedPair) -> Result<CrossedPair> {
    let k = e_transform(&p.op, &p.k)?;
    let h = p.h.act_unchecked(&p.op.apply(&k));
    let out = CrossedPair {
        k,
        h,
        op: p.op.clone(),
    };
    let back = relative_e_inverse(&out);
    if let Some(deg) = back
        .k
        .first_mismatch(&p.k)
        .or_else(|| back.h.first_mismatch(&p.h))
    {
        return Err(SeriesError::FixedPointNotStable(deg));
    }
    Ok(out)
}

/// `(k', h') -> (e_T^{-1}(k'), h' . T(k')^{-1})`
pub fn relative_e_inverse(p: &CrossedPair) -> CrossedPair {
    let k = e_inverse(&p.op, &p.k);
    let h = p.h.act_unchecked(&p.op.apply(&p.k).comp_inverse());
    CrossedPair {
        k,
        h,
        op: p.op.clone(),
    }
}
