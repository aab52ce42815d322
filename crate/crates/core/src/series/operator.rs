//! Group-level operators `G -> Gamma`, the twisted products they induce,
//! and the e-transform fixed point.

use super::{CompElement, GroupElement, MultiSeries, Result, SeriesError};

/// Operators from the Cauchy group to the composition group.
///
/// Every kind is degree-raising: the arity-`n` output only reads input
/// components of arity `< n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OOperator {
    /// `A -> I.A`
    Lambda,
    /// `A -> A.I`
    Rho,
    /// `A -> I.A^{-1}`
    LambdaInvSharp,
    /// `A -> A.I.A^{-1}`
    LambdaInvSharpRho,
    /// `A -> I`
    ConstUnit,
    /// `A -> T(A^{-1})`, the `#`-inverse of a group operator.
    InvSharp(Box<OOperator>),
    /// `g -> S(g . T(g)^{-1}) o T(g)`
    SharpComposite(Box<OOperator>, Box<OOperator>),
}

impl OOperator {
    pub fn sharp(left: OOperator, right: OOperator) -> Self {
        OOperator::SharpComposite(Box::new(left), Box::new(right))
    }

    pub fn inv_sharp(self) -> Self {
        OOperator::InvSharp(Box::new(self))
    }

    pub fn apply(&self, g: &GroupElement) -> CompElement {
        let s = g.series();
        let out = match self {
            OOperator::Lambda => s.left_shift(),
            OOperator::Rho => s.right_shift(),
            OOperator::LambdaInvSharp => g.cauchy_inverse().left_shift(),
            OOperator::LambdaInvSharpRho => s
                .right_shift()
                .cauchy_unchecked(g.cauchy_inverse().series()),
            OOperator::ConstUnit => MultiSeries::identity(s.algebra(), s.order()),
            OOperator::InvSharp(t) => return t.apply(&g.cauchy_inverse()),
            OOperator::SharpComposite(left, right) => {
                let t = right.apply(g);
                let inner = g.act_unchecked(&t.comp_inverse());
                return left.apply(&inner).compose_unchecked(&t);
            }
        };
        CompElement::new_unchecked(out)
    }

    /// Short label used in reports.
    pub fn label(&self) -> String {
        match self {
            OOperator::Lambda => "lambda".into(),
            OOperator::Rho => "rho".into(),
            OOperator::LambdaInvSharp => "lambda^{-1#}".into(),
            OOperator::LambdaInvSharpRho => "lambda^{-1#}#rho".into(),
            OOperator::ConstUnit => "I".into(),
            OOperator::InvSharp(t) => format!("({})^{{-1#}}", t.label()),
            OOperator::SharpComposite(l, r) => format!("({})#({})", l.label(), r.label()),
        }
    }
}

/// `A *_T B = (A . T(B)) . B`
pub fn star(op: &OOperator, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
    a.compatible(b)?;
    Ok(a.act_unchecked(&op.apply(b)).mul_unchecked(b))
}

/// `A *_T B = B . (A . T(B))`, the twisted product for an operator on the
/// opposite Cauchy group (the case of `lambda`).
pub fn star_opposite(op: &OOperator, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
    a.compatible(b)?;
    Ok(b.mul_unchecked(&a.act_unchecked(&op.apply(b))))
}

/// Inverse for [`star_opposite`]; same closed form, both sides asserted.
pub fn star_opposite_inverse(op: &OOperator, a: &GroupElement) -> Result<GroupElement> {
    let inv = star_left_inverse(op, a);
    let unit = GroupElement::one(a.algebra(), a.order());
    for prod in [star_opposite(op, a, &inv)?, star_opposite(op, &inv, a)?] {
        if let Some(deg) = prod.first_mismatch(&unit) {
            return Err(SeriesError::StarInverseCheckFailed(deg));
        }
    }
    Ok(inv)
}

/// The `x` with `x *_T a = 1`, namely `A^{-1} . T(A)^{-1}` read as a left inverse.
pub fn star_left_inverse(op: &OOperator, a: &GroupElement) -> GroupElement {
    a.cauchy_inverse()
        .act_unchecked(&op.apply(a).comp_inverse())
}

/// Inverse for `*_T`, with both one-sided products asserted to be `1`.
pub fn star_inverse(op: &OOperator, a: &GroupElement) -> Result<GroupElement> {
    let inv = star_left_inverse(op, a);
    let unit = GroupElement::one(a.algebra(), a.order());
    for prod in [star(op, a, &inv)?, star(op, &inv, a)?] {
        if let Some(deg) = prod.first_mismatch(&unit) {
            return Err(SeriesError::StarInverseCheckFailed(deg));
        }
    }
    Ok(inv)
}

/// Solve `x = f(x)` by `order + 1` iterations from `1`, then assert stability.
pub fn fixed_point<F>(start: &GroupElement, f: F) -> Result<GroupElement>
where
    F: Fn(&GroupElement) -> Result<GroupElement>,
{
    let mut x = GroupElement::one(start.algebra(), start.order());
    for _ in 0..=start.order() {
        x = f(&x)?;
    }
    let again = f(&x)?;
    if let Some(deg) = again.first_mismatch(&x) {
        return Err(SeriesError::FixedPointNotStable(deg));
    }
    Ok(x)
}

/// The unique `x` with `x = g . T(x)`.
pub fn e_transform(op: &OOperator, g: &GroupElement) -> Result<GroupElement> {
    fixed_point(g, |x| Ok(g.act_unchecked(&op.apply(x))))
}

/// Closed inverse of the e-transform: `g . T(g)^{-1}`.
pub fn e_inverse(op: &OOperator, g: &GroupElement) -> GroupElement {
    g.act_unchecked(&op.apply(g).comp_inverse())
}
