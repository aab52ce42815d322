//! Universal enveloping algebras in a PBW basis.
//!
//! Elements are exact finite sums of PBW monomials (nondecreasing words in
//! the ordered generators). Products are normal-ordered by bracket
//! rewriting and never truncated; the degree cap `D` only bounds the basis
//! on which maps are tabulated and identities are checked.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::rational::{q, Q};

use super::lie::LieAlgebra;
use super::{HopfError, Result};

/// Largest PBW basis [`Envelope::new`] will tabulate.
pub const MAX_BASIS: usize = 10_000;

/// A PBW monomial: generator indices in nondecreasing order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    /// Sort `letters` into PBW order; valid only when they commute.
    pub fn sorted(mut letters: Vec<u16>) -> Self {
        letters.sort_unstable();
        Self(letters)
    }

    /// `(E, h)` with `self = E h` and `h` the last generator.
    pub fn split_last(&self) -> Option<(Monomial, u16)> {
        self.0.split_last().map(|(&h, e)| (Monomial(e.to_vec()), h))
    }

    pub fn letters(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            write!(f, "x{l}")?;
        }
        Ok(())
    }
}

/// Element of an enveloping algebra: PBW monomial -> nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct UElem(BTreeMap<Monomial, Q>);

impl fmt::Debug for UElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for UElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*{m}")?;
        }
        Ok(())
    }
}

impl UElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::one())
    }

    pub fn monomial(m: Monomial) -> Self {
        Self(BTreeMap::from([(m, Q::one())]))
    }

    pub fn generator(i: usize) -> Self {
        Self::monomial(Monomial(vec![i as u16]))
    }

    /// Degree-one element from Lie coordinates.
    pub fn from_lie(v: &[Q]) -> Self {
        let mut out = Self::zero();
        for (i, c) in v.iter().enumerate() {
            out.add_term(Monomial(vec![i as u16]), c.clone());
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.0.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// Coefficient of the empty monomial.
    pub fn counit(&self) -> Q {
        self.coeff(&Monomial::one())
    }

    /// Largest monomial degree, 0 for the zero element.
    pub fn degree(&self) -> usize {
        self.0.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Lie coordinates when the element is homogeneous of degree one (or zero).
    pub fn lie_part(&self, dim: usize) -> Option<Vec<Q>> {
        let mut out = vec![Q::zero(); dim];
        for (m, c) in &self.0 {
            match m.letters() {
                [l] if (*l as usize) < dim => out[*l as usize] = c.clone(),
                _ => return None,
            }
        }
        Some(out)
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &Q, other: &UElem) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &other.0 {
            self.add_term(m.clone(), c * x);
        }
    }

    pub fn add(&self, other: &UElem) -> UElem {
        let mut out = self.clone();
        out.add_scaled(&Q::one(), other);
        out
    }

    pub fn sub(&self, other: &UElem) -> UElem {
        let mut out = self.clone();
        out.add_scaled(&-Q::one(), other);
        out
    }

    pub fn scale(&self, c: &Q) -> UElem {
        let mut out = UElem::zero();
        out.add_scaled(c, self);
        out
    }

    /// Drop monomials above degree `d`.
    pub fn truncate(&self, d: usize) -> UElem {
        Self(
            self.0
                .iter()
                .filter(|(m, _)| m.degree() <= d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        )
    }
}

/// Element of `U ⊗ U`.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct UTensor(BTreeMap<(Monomial, Monomial), Q>);

impl UTensor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, l: Monomial, r: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.0.entry((l, r)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c * (a ⊗ b)`.
    pub fn add_product(&mut self, c: &Q, a: &UElem, b: &UElem) {
        for (l, x) in a.terms() {
            for (r, y) in b.terms() {
                self.add_term(l.clone(), r.clone(), c * x * y);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Monomial, Monomial), &Q)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

type Cache = Mutex<HashMap<(Monomial, u16), UElem>>;

/// Enveloping algebra of a Lie algebra with its PBW basis up to degree `D`.
pub struct Envelope {
    lie: LieAlgebra,
    degree: usize,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    gen_cache: Arc<Cache>,
}

impl fmt::Debug for Envelope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Envelope")
            .field("lie_dim", &self.lie.dim())
            .field("degree", &self.degree)
            .field("basis", &self.basis.len())
            .finish()
    }
}

fn binomial(n: usize, k: usize) -> Option<usize> {
    (0..k).try_fold(1usize, |acc, i| acc.checked_mul(n - i).map(|x| x / (i + 1)))
}

impl Envelope {
    pub fn new(lie: LieAlgebra, degree: usize) -> Result<Self> {
        let dim = lie.dim();
        let size =
            binomial(dim + degree, degree).filter(|&s| s <= MAX_BASIS && dim <= u16::MAX as usize);
        if size.is_none() {
            return Err(HopfError::TooLarge(format!(
                "PBW basis of dim {dim} to degree {degree}"
            )));
        }
        let mut basis = vec![Monomial::one()];
        let mut layer = vec![Monomial::one()];
        for _ in 0..degree {
            let mut next = Vec::new();
            for m in &layer {
                let start = m.0.last().copied().unwrap_or(0);
                for g in start..dim as u16 {
                    let mut w = m.0.clone();
                    w.push(g);
                    next.push(Monomial(w));
                }
            }
            basis.extend(next.iter().cloned());
            layer = next;
        }
        let index = basis
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        Ok(Self {
            lie,
            degree,
            basis,
            index,
            gen_cache: Arc::default(),
        })
    }

    pub fn lie(&self) -> &LieAlgebra {
        &self.lie
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// PBW basis sorted by degree, then lexicographically.
    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// `m * x_k`, normal ordered.
    fn mul_gen(&self, m: &Monomial, k: u16) -> UElem {
        match m.0.last() {
            None => return UElem::generator(k as usize),
            Some(&l) if l <= k => {
                let mut w = m.0.clone();
                w.push(k);
                return UElem::monomial(Monomial(w));
            }
            _ => {}
        }
        let key = (m.clone(), k);
        if let Some(hit) = self.gen_cache.lock().expect("cache lock").get(&key) {
            return hit.clone();
        }
        let (&l, head) = m.0.split_last().expect("nonempty");
        let head = Monomial(head.to_vec());
        // head x_l x_k = (head x_k) x_l + head [x_l, x_k]
        let mut out = UElem::zero();
        for (n, c) in self.mul_gen(&head, k).terms() {
            out.add_scaled(c, &self.mul_gen(n, l));
        }
        for (j, c) in self.lie.bracket_basis(l as usize, k as usize) {
            out.add_scaled(c, &self.mul_gen(&head, *j as u16));
        }
        self.gen_cache
            .lock()
            .expect("cache lock")
            .insert(key, out.clone());
        out
    }

    fn mul_elem_gen(&self, x: &UElem, k: u16) -> UElem {
        let mut out = UElem::zero();
        for (m, c) in x.terms() {
            out.add_scaled(c, &self.mul_gen(m, k));
        }
        out
    }

    /// Product of an arbitrary word of generators.
    pub fn word(&self, letters: &[u16]) -> UElem {
        letters
            .iter()
            .fold(UElem::one(), |acc, &k| self.mul_elem_gen(&acc, k))
    }

    pub fn mul_mono(&self, m: &Monomial, n: &Monomial) -> UElem {
        n.0.iter().fold(UElem::monomial(m.clone()), |acc, &k| {
            self.mul_elem_gen(&acc, k)
        })
    }

    pub fn mul(&self, x: &UElem, y: &UElem) -> UElem {
        let mut out = UElem::zero();
        for (m, c) in x.terms() {
            for (n, d) in y.terms() {
                out.add_scaled(&(c * d), &self.mul_mono(m, n));
            }
        }
        out
    }

    /// `Δ m` for a PBW monomial: every split of the letters, generators primitive.
    pub fn coproduct_mono(&self, m: &Monomial) -> Vec<(Monomial, Monomial, Q)> {
        let n = m.degree();
        let mut acc: BTreeMap<(Monomial, Monomial), Q> = BTreeMap::new();
        for mask in 0u32..(1 << n) {
            let (mut l, mut r) = (Vec::new(), Vec::new());
            for (i, &g) in m.0.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    l.push(g);
                } else {
                    r.push(g);
                }
            }
            *acc.entry((Monomial(l), Monomial(r)))
                .or_insert_with(Q::zero) += q(1);
        }
        acc.into_iter().map(|((l, r), c)| (l, r, c)).collect()
    }

    pub fn coproduct(&self, x: &UElem) -> UTensor {
        let mut out = UTensor::zero();
        for (m, c) in x.terms() {
            for (l, r, k) in self.coproduct_mono(m) {
                out.add_term(l, r, c * k);
            }
        }
        out
    }

    /// `S(x_1 .. x_n) = (-1)^n x_n .. x_1`.
    pub fn antipode_mono(&self, m: &Monomial) -> UElem {
        let rev: Vec<u16> = m.0.iter().rev().copied().collect();
        let sign = if m.degree().is_multiple_of(2) {
            q(1)
        } else {
            q(-1)
        };
        self.word(&rev).scale(&sign)
    }

    pub fn antipode(&self, x: &UElem) -> UElem {
        let mut out = UElem::zero();
        for (m, c) in x.terms() {
            out.add_scaled(c, &self.antipode_mono(m));
        }
        out
    }

    fn tensor_mul(&self, x: &UTensor, y: &UTensor) -> UTensor {
        let mut out = UTensor::zero();
        for ((a, b), c) in x.terms() {
            for ((e, f), d) in y.terms() {
                out.add_product(&(c * d), &self.mul_mono(a, e), &self.mul_mono(b, f));
            }
        }
        out
    }

    /// Coassociativity, `S * id = id * S = ηε` and multiplicativity of `Δ`
    /// on the whole basis (products with total degree up to `D`).
    pub fn check_hopf_axioms(&self) -> Result<()> {
        let fail = |axiom: &'static str, m: &Monomial| HopfError::HopfAxiomFailed {
            axiom,
            basis: m.to_string(),
        };
        for m in &self.basis {
            let mut left: BTreeMap<[Monomial; 3], Q> = BTreeMap::new();
            let mut right: BTreeMap<[Monomial; 3], Q> = BTreeMap::new();
            for (a, b, c) in self.coproduct_mono(m) {
                for (a1, a2, d) in self.coproduct_mono(&a) {
                    *left.entry([a1, a2, b.clone()]).or_insert_with(Q::zero) += &c * &d;
                }
                for (b1, b2, d) in self.coproduct_mono(&b) {
                    *right.entry([a.clone(), b1, b2]).or_insert_with(Q::zero) += &c * &d;
                }
            }
            if left != right {
                return Err(fail("coassociativity", m));
            }
            let eps = if m.is_one() {
                UElem::one()
            } else {
                UElem::zero()
            };
            let (mut s_id, mut id_s) = (UElem::zero(), UElem::zero());
            for (a, b, c) in self.coproduct_mono(m) {
                s_id.add_scaled(
                    &c,
                    &self.mul(&self.antipode_mono(&a), &UElem::monomial(b.clone())),
                );
                id_s.add_scaled(&c, &self.mul(&UElem::monomial(a), &self.antipode_mono(&b)));
            }
            if s_id != eps || id_s != eps {
                return Err(fail("antipode", m));
            }
        }
        for m in &self.basis {
            for n in self
                .basis
                .iter()
                .filter(|n| n.degree() + m.degree() <= self.degree)
            {
                let lhs = self.coproduct(&self.mul_mono(m, n));
                let rhs = self.tensor_mul(
                    &self.coproduct(&UElem::monomial(m.clone())),
                    &self.coproduct(&UElem::monomial(n.clone())),
                );
                if lhs != rhs {
                    return Err(fail("multiplicative coproduct", m));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    fn mono(l: &[u16]) -> Monomial {
        Monomial(l.to_vec())
    }

    #[test]
    fn abelian_line_has_binomial_coproduct() {
        let env = Envelope::new(LieAlgebra::abelian(1), 3).unwrap();
        assert_eq!(
            env.basis(),
            &[mono(&[]), mono(&[0]), mono(&[0, 0]), mono(&[0, 0, 0])]
        );
        let got = env.coproduct_mono(&mono(&[0, 0]));
        let want = vec![
            (mono(&[]), mono(&[0, 0]), q(1)),
            (mono(&[0]), mono(&[0]), q(2)),
            (mono(&[0, 0]), mono(&[]), q(1)),
        ];
        assert_eq!(got, want);
        assert_eq!(
            env.antipode_mono(&mono(&[0, 0])),
            UElem::monomial(mono(&[0, 0]))
        );
        env.check_hopf_axioms().unwrap();
    }

    /// Defining 2x2 representation of sl2 on `(e, h, f)`.
    fn rep(g: u16) -> [[Q; 2]; 2] {
        let z = || q(0);
        match g {
            0 => [[z(), q(1)], [z(), z()]],
            1 => [[q(1), z()], [z(), q(-1)]],
            _ => [[z(), z()], [q(1), z()]],
        }
    }

    fn matmul(a: &[[Q; 2]; 2], b: &[[Q; 2]; 2]) -> [[Q; 2]; 2] {
        let mut out = [[q(0), q(0)], [q(0), q(0)]];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
        out
    }

    fn rep_elem(x: &UElem) -> [[Q; 2]; 2] {
        let mut out = [[q(0), q(0)], [q(0), q(0)]];
        for (m, c) in x.terms() {
            let id = [[q(1), q(0)], [q(0), q(1)]];
            let r = m.letters().iter().fold(id, |acc, &g| matmul(&acc, &rep(g)));
            for i in 0..2 {
                for j in 0..2 {
                    out[i][j] += c * &r[i][j];
                }
            }
        }
        out
    }

    #[test]
    fn sl2_rewriting_matches_a_representation() {
        let env = Envelope::new(LieAlgebra::sl2(), 2).unwrap();
        assert_eq!(env.basis().len(), 10);
        // f e = e f - h
        let fe = env.word(&[2, 0]);
        let mut want = UElem::monomial(mono(&[0, 2]));
        want.add_term(mono(&[1]), q(-1));
        assert_eq!(fe, want);
        for m in env.basis() {
            for n in env.basis() {
                let prod = env.mul_mono(m, n);
                let direct = matmul(
                    &rep_elem(&UElem::monomial(m.clone())),
                    &rep_elem(&UElem::monomial(n.clone())),
                );
                assert_eq!(rep_elem(&prod), direct, "{m} * {n}");
            }
        }
        env.check_hopf_axioms().unwrap();
    }

    #[test]
    fn gl2_envelope_is_a_hopf_algebra() {
        let env = Envelope::new(LieAlgebra::gl(2), 3).unwrap();
        env.check_hopf_axioms().unwrap();
        let x = UElem::from_lie(&[q(1), qf(1, 2), q(0), q(-3)]);
        let y = env.mul(&x, &x);
        assert_eq!(env.antipode(&y), y);
    }

    #[test]
    fn oversized_basis_is_rejected() {
        assert!(matches!(
            Envelope::new(LieAlgebra::abelian(40), 6),
            Err(HopfError::TooLarge(_))
        ));
    }
}
