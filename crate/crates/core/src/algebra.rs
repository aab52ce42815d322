//! Finite-dimensional unital associative algebras over the rationals.
//!
//! An algebra is given by structure constants `c[i][j][k]` with
//! `e_i e_j = sum_k c[i][j][k] e_k` and a unit vector. Associativity and the
//! unit laws are checked once, at construction, so everything downstream can
//! take a lawful algebra for granted.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::rational::{one, zero, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("associativity fails on basis triple ({0}, {1}, {2})")]
    AssociativityViolation(usize, usize, usize),
    #[error("unit is not a two-sided identity on basis element {0}")]
    UnitViolation(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("algebra dimension must be positive")]
    ZeroDimension,
}

/// Element of a base algebra, as a coefficient vector on the basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgElement {
    coeffs: Vec<Q>,
}

impl AlgElement {
    pub fn new(coeffs: Vec<Q>) -> Self {
        Self { coeffs }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            coeffs: vec![zero(); dim],
        }
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut coeffs = vec![zero(); dim];
        coeffs[i] = one();
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Q> {
        self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
        }
    }
}

/// Structure-constant presentation of a unital associative algebra.
#[derive(Clone, PartialEq, Eq)]
pub struct BaseAlgebra {
    dim: usize,
    /// Flat `dim^3` table, index `(i * dim + j) * dim + k`.
    table: Vec<Q>,
    unit: Vec<Q>,
    /// Nonzero entries of `table`, used by every product loop.
    terms: Vec<(usize, usize, usize, Q)>,
}

impl fmt::Debug for BaseAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BaseAlgebra")
            .field("dim", &self.dim)
            .field("nonzero_constants", &self.terms.len())
            .finish()
    }
}

impl BaseAlgebra {
    /// Build and validate an algebra from a nested `dim x dim x dim` table.
    pub fn from_table(
        dim: usize,
        table: &[Vec<Vec<Q>>],
        unit: Vec<Q>,
    ) -> Result<Self, AlgebraError> {
        if dim == 0 {
            return Err(AlgebraError::ZeroDimension);
        }
        let shape_err = |found| AlgebraError::DimensionMismatch {
            expected: dim,
            found,
        };
        if table.len() != dim {
            return Err(shape_err(table.len()));
        }
        let mut flat = Vec::with_capacity(dim * dim * dim);
        for row in table {
            if row.len() != dim {
                return Err(shape_err(row.len()));
            }
            for cell in row {
                if cell.len() != dim {
                    return Err(shape_err(cell.len()));
                }
                flat.extend(cell.iter().cloned());
            }
        }
        if unit.len() != dim {
            return Err(shape_err(unit.len()));
        }
        Self::from_flat(dim, flat, unit)
    }

    /// Same as [`from_table`](Self::from_table) with the table already flattened.
    pub fn from_flat(dim: usize, table: Vec<Q>, unit: Vec<Q>) -> Result<Self, AlgebraError> {
        if dim == 0 {
            return Err(AlgebraError::ZeroDimension);
        }
        if table.len() != dim * dim * dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: dim * dim * dim,
                found: table.len(),
            });
        }
        if unit.len() != dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: dim,
                found: unit.len(),
            });
        }
        let mut terms = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let c = &table[(i * dim + j) * dim + k];
                    if !c.is_zero() {
                        terms.push((i, j, k, c.clone()));
                    }
                }
            }
        }
        let alg = Self {
            dim,
            table,
            unit,
            terms,
        };
        alg.validate()?;
        Ok(alg)
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        let d = self.dim;
        let u = self.unit();
        for i in 0..d {
            let e = AlgElement::basis(d, i);
            if self.mul_unchecked(&u, &e) != e || self.mul_unchecked(&e, &u) != e {
                return Err(AlgebraError::UnitViolation(i));
            }
        }
        for i in 0..d {
            let ei = AlgElement::basis(d, i);
            for j in 0..d {
                let ej = AlgElement::basis(d, j);
                let ij = self.mul_unchecked(&ei, &ej);
                for k in 0..d {
                    let ek = AlgElement::basis(d, k);
                    let left = self.mul_unchecked(&ij, &ek);
                    let right = self.mul_unchecked(&ei, &self.mul_unchecked(&ej, &ek));
                    if left != right {
                        return Err(AlgebraError::AssociativityViolation(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    /// The rationals as a one-dimensional algebra.
    pub fn scalar() -> Self {
        Self::from_flat(1, vec![one()], vec![one()]).expect("scalar algebra is lawful")
    }

    /// Upper-triangular 2x2 matrices on the basis `(e11, e12, e22)`.
    pub fn upper_triangular() -> Self {
        let mut t = vec![zero(); 27];
        let mut set = |i: usize, j: usize, k: usize| t[(i * 3 + j) * 3 + k] = one();
        set(0, 0, 0);
        set(0, 1, 1);
        set(1, 2, 1);
        set(2, 2, 2);
        Self::from_flat(3, t, vec![one(), zero(), one()])
            .expect("upper-triangular algebra is lawful")
    }

    /// Diagonal `d x d` matrices, i.e. `d` orthogonal idempotents.
    pub fn diagonal(d: usize) -> Self {
        let mut t = vec![zero(); d * d * d];
        for i in 0..d {
            t[(i * d + i) * d + i] = one();
        }
        Self::from_flat(d, t, vec![one(); d]).expect("diagonal algebra is lawful")
    }

    /// Full matrix algebra `M_n` on the basis `E_ab` (index `a * n + b`).
    pub fn matrix(n: usize) -> Self {
        let d = n * n;
        let mut t = vec![zero(); d * d * d];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    t[((a * n + b) * d + (b * n + c)) * d + (a * n + c)] = one();
                }
            }
        }
        let mut unit = vec![zero(); d];
        for a in 0..n {
            unit[a * n + a] = one();
        }
        Self::from_flat(d, t, unit).expect("matrix algebra is lawful")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> AlgElement {
        AlgElement::new(self.unit.clone())
    }

    pub fn unit_coeffs(&self) -> &[Q] {
        &self.unit
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Q {
        &self.table[(i * self.dim + j) * self.dim + k]
    }

    /// Nonzero structure constants `(i, j, k, c)`.
    pub fn terms(&self) -> &[(usize, usize, usize, Q)] {
        &self.terms
    }

    pub fn is_scalar(&self) -> bool {
        self.dim == 1
    }

    pub fn is_commutative(&self) -> bool {
        let d = self.dim;
        (0..d).all(|i| {
            (0..d).all(|j| (0..d).all(|k| self.constant(i, j, k) == self.constant(j, i, k)))
        })
    }

    /// Nested `dim x dim x dim` copy of the structure constants.
    pub fn table_nested(&self) -> Vec<Vec<Vec<Q>>> {
        let d = self.dim;
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).map(|k| self.constant(i, j, k).clone()).collect())
                    .collect()
            })
            .collect()
    }

    pub fn mul(&self, a: &AlgElement, b: &AlgElement) -> Result<AlgElement, AlgebraError> {
        for x in [a, b] {
            if x.dim() != self.dim {
                return Err(AlgebraError::DimensionMismatch {
                    expected: self.dim,
                    found: x.dim(),
                });
            }
        }
        Ok(self.mul_unchecked(a, b))
    }

    pub(crate) fn mul_unchecked(&self, a: &AlgElement, b: &AlgElement) -> AlgElement {
        let mut out = vec![zero(); self.dim];
        self.mul_into(a.coeffs(), b.coeffs(), &mut out);
        AlgElement::new(out)
    }

    /// `out += a * b` on raw coefficient slices.
    pub(crate) fn mul_into(&self, a: &[Q], b: &[Q], out: &mut [Q]) {
        for (i, j, k, c) in &self.terms {
            let (x, y) = (&a[*i], &b[*j]);
            if x.is_zero() || y.is_zero() {
                continue;
            }
            let p = x * y;
            if c.is_one() {
                out[*k] += p;
            } else {
                out[*k] += p * c;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};
    use proptest::prelude::*;

    fn brute_force_associative(alg: &BaseAlgebra) -> bool {
        let d = alg.dim();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for out in 0..d {
                        let mut left = zero();
                        let mut right = zero();
                        for m in 0..d {
                            left += alg.constant(i, j, m) * alg.constant(m, k, out);
                            right += alg.constant(j, k, m) * alg.constant(i, m, out);
                        }
                        if left != right {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    #[test]
    fn scalar_algebra() {
        let s = BaseAlgebra::from_table(1, &[vec![vec![q(1)]]], vec![q(1)]).unwrap();
        assert_eq!(s, BaseAlgebra::scalar());
        let p = s
            .mul(
                &AlgElement::new(vec![qf(2, 3)]),
                &AlgElement::new(vec![qf(3, 4)]),
            )
            .unwrap();
        assert_eq!(p.coeffs(), &[qf(1, 2)]);
    }

    #[test]
    fn upper_triangular_accepted_and_associative() {
        let ut = BaseAlgebra::upper_triangular();
        assert!(brute_force_associative(&ut));
        let e12 = AlgElement::basis(3, 1);
        assert!(ut.mul(&e12, &e12).unwrap().is_zero());
        let x = AlgElement::new(vec![q(2), q(-1), qf(1, 3)]);
        assert_eq!(ut.mul(&ut.unit(), &x).unwrap(), x);
        assert_eq!(ut.mul(&x, &ut.unit()).unwrap(), x);
    }

    #[test]
    fn matrix_algebra_is_lawful() {
        let m2 = BaseAlgebra::matrix(2);
        assert!(brute_force_associative(&m2));
        assert!(!m2.is_commutative());
        assert!(BaseAlgebra::diagonal(2).is_commutative());
    }

    #[test]
    fn associativity_violation_detected() {
        // e0 e0 = e1, e0 e1 = 0, e1 e0 = e1: (e0 e0) e0 = e1 but e0 (e0 e0) = 0.
        // Unit slot e2.
        let mut t = vec![zero(); 27];
        let idx = |i: usize, j: usize, k: usize| (i * 3 + j) * 3 + k;
        t[idx(0, 0, 1)] = q(1);
        t[idx(1, 0, 1)] = q(1);
        for i in 0..3 {
            t[idx(2, i, i)] = q(1);
            t[idx(i, 2, i)] = q(1);
        }
        let err = BaseAlgebra::from_flat(3, t, vec![zero(), zero(), q(1)]).unwrap_err();
        assert!(matches!(err, AlgebraError::AssociativityViolation(0, 0, 0)));
    }

    #[test]
    fn unit_violation_detected() {
        let err = BaseAlgebra::from_flat(1, vec![q(1)], vec![q(2)]).unwrap_err();
        assert_eq!(err, AlgebraError::UnitViolation(0));
    }

    #[test]
    fn dimension_mismatch() {
        let ut = BaseAlgebra::upper_triangular();
        let err = ut.mul(&AlgElement::zero(2), &ut.unit()).unwrap_err();
        assert_eq!(
            err,
            AlgebraError::DimensionMismatch {
                expected: 3,
                found: 2
            }
        );
    }

    proptest! {
        #[test]
        fn mul_is_bilinear(
            a in proptest::collection::vec(-5i64..5, 3),
            b in proptest::collection::vec(-5i64..5, 3),
            n in -7i64..7, d in 1i64..5,
        ) {
            let ut = BaseAlgebra::upper_triangular();
            let a = AlgElement::new(a.into_iter().map(q).collect());
            let b = AlgElement::new(b.into_iter().map(q).collect());
            let s = qf(n, d);
            let lhs = ut.mul(&a.scale(&s), &b).unwrap();
            let rhs = ut.mul(&a, &b).unwrap().scale(&s);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
