//! Finite-dimensional Lie algebras, right Lie modules and linear maps
//! between them, all by sparse structure constants.

use std::fmt;

use num_traits::Zero;

use crate::algebra::BaseAlgebra;
use crate::rational::{q, Q};

use super::{HopfError, Result, Side};

/// Sparse vector: sorted `(basis index, nonzero coefficient)` pairs.
pub type SparseVec = Vec<(usize, Q)>;

pub(crate) fn to_dense(v: &SparseVec, dim: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); dim];
    for (i, c) in v {
        out[*i] += c;
    }
    out
}

pub(crate) fn to_sparse(v: &[Q]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

fn axpy(out: &mut [Q], c: &Q, v: &SparseVec) {
    for (i, x) in v {
        out[*i] += c * x;
    }
}

/// Lie algebra on the basis `e_0..e_{dim-1}`; `bracket[i][j] = [e_i, e_j]`.
#[derive(Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    bracket: Vec<Vec<SparseVec>>,
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LieAlgebra")
            .field("dim", &self.dim)
            .field("abelian", &self.is_abelian())
            .finish()
    }
}

impl LieAlgebra {
    /// Validate antisymmetry and the Jacobi identity on every basis triple.
    pub fn new(dim: usize, bracket: Vec<Vec<SparseVec>>, side: Side) -> Result<Self> {
        check_square(dim, &bracket)?;
        let alg = Self {
            dim,
            bracket: bracket
                .into_iter()
                .map(|r| r.into_iter().map(normalize).collect())
                .collect(),
        };
        alg.check_jacobi(side)?;
        Ok(alg)
    }

    pub fn abelian(dim: usize) -> Self {
        Self {
            dim,
            bracket: vec![vec![Vec::new(); dim]; dim],
        }
    }

    /// `sl2` on `(e, h, f)`: `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
    pub fn sl2() -> Self {
        let mut b = vec![vec![Vec::new(); 3]; 3];
        b[1][0] = vec![(0, q(2))];
        b[0][1] = vec![(0, q(-2))];
        b[1][2] = vec![(2, q(-2))];
        b[2][1] = vec![(2, q(2))];
        b[0][2] = vec![(1, q(1))];
        b[2][0] = vec![(1, q(-1))];
        Self { dim: 3, bracket: b }
    }

    /// `gl_n` on matrix units `E_ij`, index `i * n + j`.
    pub fn gl(n: usize) -> Self {
        let dim = n * n;
        let mut b = vec![vec![Vec::new(); dim]; dim];
        for (i, j, k, l) in quad(n) {
            let mut v = vec![Q::zero(); dim];
            if j == k {
                v[i * n + l] += q(1);
            }
            if l == i {
                v[k * n + j] -= q(1);
            }
            b[i * n + j][k * n + l] = to_sparse(&v);
        }
        Self { dim, bracket: b }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.bracket[i][j]
    }

    pub fn is_abelian(&self) -> bool {
        self.bracket.iter().all(|r| r.iter().all(Vec::is_empty))
    }

    pub fn bracket(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim];
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                axpy(&mut out, &(a * b), &self.bracket[i][j]);
            }
        }
        out
    }

    fn basis(&self, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim];
        v[i] = q(1);
        v
    }

    fn check_jacobi(&self, side: Side) -> Result<()> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let sum: Vec<Q> = add(
                    &to_dense(&self.bracket[i][j], self.dim),
                    &to_dense(&self.bracket[j][i], self.dim),
                );
                if sum.iter().any(|c| !c.is_zero()) {
                    return Err(HopfError::JacobiViolation {
                        side,
                        witness: [i, j, j],
                    });
                }
            }
        }
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let (x, y, z) = (self.basis(i), self.basis(j), self.basis(k));
                    let t1 = self.bracket(&x, &self.bracket(&y, &z));
                    let t2 = self.bracket(&y, &self.bracket(&z, &x));
                    let t3 = self.bracket(&z, &self.bracket(&x, &y));
                    if add(&add(&t1, &t2), &t3).iter().any(|c| !c.is_zero()) {
                        return Err(HopfError::JacobiViolation {
                            side,
                            witness: [i, j, k],
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

fn quad(n: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..n).flat_map(move |i| {
        (0..n).flat_map(move |j| (0..n).flat_map(move |k| (0..n).map(move |l| (i, j, k, l))))
    })
}

fn normalize(v: SparseVec) -> SparseVec {
    let dim = v.iter().map(|(i, _)| i + 1).max().unwrap_or(0);
    to_sparse(&to_dense(&v, dim))
}

fn check_square(dim: usize, table: &[Vec<SparseVec>]) -> Result<()> {
    if table.len() != dim || table.iter().any(|r| r.len() != dim) {
        return Err(HopfError::Shape(format!(
            "bracket table is not {dim} x {dim}"
        )));
    }
    if table.iter().flatten().flatten().any(|(k, _)| *k >= dim) {
        return Err(HopfError::Shape(format!(
            "bracket value index out of range (dim {dim})"
        )));
    }
    Ok(())
}

pub(crate) fn add(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn scaled(a: &[Q], c: &Q) -> Vec<Q> {
    a.iter().map(|x| x * c).collect()
}

/// Linear map between Lie algebras, by images of basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieMap {
    source_dim: usize,
    target_dim: usize,
    images: Vec<SparseVec>,
}

impl LieMap {
    pub fn new(source_dim: usize, target_dim: usize, images: Vec<SparseVec>) -> Result<Self> {
        if images.len() != source_dim || images.iter().flatten().any(|(k, _)| *k >= target_dim) {
            return Err(HopfError::Shape(format!(
                "linear map images do not fit {source_dim} -> {target_dim}"
            )));
        }
        Ok(Self {
            source_dim,
            target_dim,
            images: images.into_iter().map(normalize).collect(),
        })
    }

    pub fn zero(source_dim: usize, target_dim: usize) -> Self {
        Self {
            source_dim,
            target_dim,
            images: vec![Vec::new(); source_dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            source_dim: dim,
            target_dim: dim,
            images: (0..dim).map(|i| vec![(i, q(1))]).collect(),
        }
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn image(&self, i: usize) -> &SparseVec {
        &self.images[i]
    }

    pub fn apply(&self, x: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.target_dim];
        for (i, c) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            axpy(&mut out, c, &self.images[i]);
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        let images = self
            .images
            .iter()
            .map(|v| to_sparse(&scaled(&to_dense(v, self.target_dim), c)))
            .collect();
        Self {
            images,
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| {
                to_sparse(&add(
                    &to_dense(a, self.target_dim),
                    &to_dense(b, self.target_dim),
                ))
            })
            .collect();
        Self {
            images,
            ..self.clone()
        }
    }

    /// `self + u * other`, the deformation family of operator sums.
    pub fn add_scaled(&self, u: &Q, other: &Self) -> Self {
        self.add(&other.scale(u))
    }
}

/// Right Lie module `(g, ◁, a)`: `action[i][j] = g_i ◁ a_j`.
///
/// Laws, on every basis triple:
/// `[x,y] ◁ a = [x ◁ a, y] + [x, y ◁ a]` and
/// `x ◁ [a,b] = (x ◁ a) ◁ b - (x ◁ b) ◁ a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieModule {
    g: LieAlgebra,
    a: LieAlgebra,
    action: Vec<Vec<SparseVec>>,
}

impl LieModule {
    pub fn new(g: LieAlgebra, a: LieAlgebra, action: Vec<Vec<SparseVec>>) -> Result<Self> {
        if action.len() != g.dim() || action.iter().any(|r| r.len() != a.dim()) {
            return Err(HopfError::Shape(format!(
                "action table is not {} x {}",
                g.dim(),
                a.dim()
            )));
        }
        if action
            .iter()
            .flatten()
            .flatten()
            .any(|(k, _)| *k >= g.dim())
        {
            return Err(HopfError::Shape("action value index out of range".into()));
        }
        let action = action
            .into_iter()
            .map(|r| r.into_iter().map(normalize).collect())
            .collect();
        let module = Self { g, a, action };
        module.check_laws()?;
        Ok(module)
    }

    /// Validate both brackets and the module laws from raw tables.
    pub fn from_constants(
        g: (usize, Vec<Vec<SparseVec>>),
        a: (usize, Vec<Vec<SparseVec>>),
        action: Vec<Vec<SparseVec>>,
    ) -> Result<Self> {
        let g = LieAlgebra::new(g.0, g.1, Side::Source)?;
        let a = LieAlgebra::new(a.0, a.1, Side::Target)?;
        Self::new(g, a, action)
    }

    /// `(g, ad, g)` with `x ◁ y = [x, y]`.
    pub fn adjoint(g: LieAlgebra) -> Self {
        let action = g.bracket.clone();
        Self {
            a: g.clone(),
            g,
            action,
        }
    }

    pub fn g(&self) -> &LieAlgebra {
        &self.g
    }

    pub fn a(&self) -> &LieAlgebra {
        &self.a
    }

    pub fn act_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.action[i][j]
    }

    /// `x ◁ y` for `x` in g and `y` in a.
    pub fn act(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.g.dim()];
        for (i, c) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, d) in y.iter().enumerate().filter(|(_, d)| !d.is_zero()) {
                axpy(&mut out, &(c * d), &self.action[i][j]);
            }
        }
        out
    }

    fn check_laws(&self) -> Result<()> {
        let (gd, ad) = (self.g.dim(), self.a.dim());
        for i in 0..gd {
            for j in 0..gd {
                for k in 0..ad {
                    let (x, y, z) = (self.g.basis(i), self.g.basis(j), self.a.basis(k));
                    let lhs = self.act(&self.g.bracket(&x, &y), &z);
                    let rhs = add(
                        &self.g.bracket(&self.act(&x, &z), &y),
                        &self.g.bracket(&x, &self.act(&y, &z)),
                    );
                    if lhs != rhs {
                        return Err(HopfError::DerivationViolation { witness: [i, j, k] });
                    }
                }
            }
        }
        for i in 0..gd {
            for j in 0..ad {
                for k in 0..ad {
                    let (x, y, z) = (self.g.basis(i), self.a.basis(j), self.a.basis(k));
                    let lhs = self.act(&x, &self.a.bracket(&y, &z));
                    let rhs = sub(
                        &self.act(&self.act(&x, &y), &z),
                        &self.act(&self.act(&x, &z), &y),
                    );
                    if lhs != rhs {
                        return Err(HopfError::ModuleViolation { witness: [i, j, k] });
                    }
                }
            }
        }
        Ok(())
    }

    /// `[t x, t y]_a = t(x ◁ t y) - t(y ◁ t x) + t([x, y]_g)` on basis pairs.
    pub fn check_o_lie(&self, t: &LieMap) -> Result<()> {
        self.check_map_shape(t)?;
        let gd = self.g.dim();
        for i in 0..gd {
            for j in 0..gd {
                let (x, y) = (self.g.basis(i), self.g.basis(j));
                let (tx, ty) = (t.apply(&x), t.apply(&y));
                let lhs = self.a.bracket(&tx, &ty);
                let inner = add(
                    &sub(&self.act(&x, &ty), &self.act(&y, &tx)),
                    &self.g.bracket(&x, &y),
                );
                if lhs != t.apply(&inner) {
                    return Err(HopfError::NotOLieOperator { witness: [i, j] });
                }
            }
        }
        Ok(())
    }

    /// Matching condition `[s x, t y]_a = s(x ◁ t y) - t(y ◁ s x)` on basis
    /// pairs, with both operators O-Lie.
    pub fn check_matching(&self, s: &LieMap, t: &LieMap) -> Result<()> {
        self.check_o_lie(s)?;
        self.check_o_lie(t)?;
        let gd = self.g.dim();
        for i in 0..gd {
            for j in 0..gd {
                let (x, y) = (self.g.basis(i), self.g.basis(j));
                let (sx, ty) = (s.apply(&x), t.apply(&y));
                let lhs = self.a.bracket(&sx, &ty);
                let rhs = sub(&s.apply(&self.act(&x, &ty)), &t.apply(&self.act(&y, &sx)));
                if lhs != rhs {
                    return Err(HopfError::NotMatching { witness: [i, j] });
                }
            }
        }
        Ok(())
    }

    fn check_map_shape(&self, t: &LieMap) -> Result<()> {
        if t.source_dim() != self.g.dim() || t.target_dim() != self.a.dim() {
            return Err(HopfError::Shape(format!(
                "operator is {} -> {}, module is {} -> {}",
                t.source_dim(),
                t.target_dim(),
                self.g.dim(),
                self.a.dim()
            )));
        }
        Ok(())
    }
}

/// Multilinear maps `B^n -> B` for arities `1..=max_arity`, coefficient
/// `[k][i1..in]` of `e_k` in `p(e_i1, .., e_in)`, stacked by arity.
struct OperadSpace<'a> {
    alg: &'a BaseAlgebra,
    max_arity: usize,
    offsets: Vec<usize>,
    dim: usize,
}

impl<'a> OperadSpace<'a> {
    fn new(alg: &'a BaseAlgebra, max_arity: usize) -> Self {
        let d = alg.dim();
        let mut offsets = vec![0; max_arity + 2];
        for n in 1..=max_arity {
            offsets[n + 1] = offsets[n] + d.pow(n as u32 + 1);
        }
        Self {
            alg,
            max_arity,
            dim: offsets[max_arity + 1],
            offsets,
        }
    }

    /// Basis index -> (arity, output, inputs).
    fn decode(&self, idx: usize) -> (usize, usize, Vec<usize>) {
        let d = self.alg.dim();
        let n = (1..=self.max_arity)
            .find(|&n| idx < self.offsets[n + 1])
            .expect("index in range");
        let mut rest = idx - self.offsets[n];
        let mut inputs = vec![0; n];
        for slot in inputs.iter_mut().rev() {
            *slot = rest % d;
            rest /= d;
        }
        (n, rest, inputs)
    }

    fn encode(&self, n: usize, out: usize, inputs: &[usize]) -> usize {
        let d = self.alg.dim();
        self.offsets[n] + inputs.iter().fold(out, |acc, i| acc * d + i)
    }

    fn arity_of(&self, idx: usize) -> usize {
        self.decode(idx).0
    }

    /// `p • q` for basis maps; zero above `max_arity`.
    fn dot(&self, p: usize, q_: usize) -> SparseVec {
        let (m, pk, pi) = self.decode(p);
        let (n, qk, qi) = self.decode(q_);
        if m + n > self.max_arity {
            return Vec::new();
        }
        let inputs: Vec<usize> = pi.iter().chain(&qi).copied().collect();
        let mut out = vec![Q::zero(); self.dim];
        for k in 0..self.alg.dim() {
            let c = self.alg.constant(pk, qk, k);
            if !c.is_zero() {
                out[self.encode(m + n, k, &inputs)] += c;
            }
        }
        to_sparse(&out)
    }

    /// Gerstenhaber insertion `p ◁ q = Σ_i p(.., q(x_i, ..), ..)`.
    fn insert(&self, p: usize, q_: usize) -> SparseVec {
        let (m, pk, pi) = self.decode(p);
        let (n, qk, qi) = self.decode(q_);
        let arity = m + n - 1;
        let mut out = vec![Q::zero(); self.dim];
        if arity > self.max_arity {
            return Vec::new();
        }
        for slot in 0..m {
            if pi[slot] != qk {
                continue;
            }
            let inputs: Vec<usize> = pi[..slot]
                .iter()
                .chain(&qi)
                .chain(&pi[slot + 1..])
                .copied()
                .collect();
            out[self.encode(arity, pk, &inputs)] += q(1);
        }
        to_sparse(&out)
    }

    /// Identity map `I` of arity one as a vector.
    fn identity(&self) -> SparseVec {
        (0..self.alg.dim())
            .map(|i| (self.encode(1, i, &[i]), q(1)))
            .collect()
    }

    fn dot_vec(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = vec![Q::zero(); self.dim];
        for (i, a) in x {
            for (j, b) in y {
                axpy(&mut out, &(a * b), &self.dot(*i, *j));
            }
        }
        to_sparse(&out)
    }
}

/// The truncated endomorphism-operad module over `B` with its translations.
#[derive(Clone, Debug)]
pub struct EndOperadModule {
    pub module: LieModule,
    /// `s = -λ`, `λ(p) = I • p`.
    pub s: LieMap,
    /// `t = ρ`, `ρ(p) = p • I`.
    pub t: LieMap,
    /// Arity of every basis vector.
    pub arities: Vec<usize>,
    pub base_commutative: bool,
    /// `dot[i][j] = e_i • e_j`, truncated.
    dot: Vec<Vec<SparseVec>>,
}

impl EndOperadModule {
    /// `x • y`, truncated by arity.
    pub fn dot(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let n = x.len();
        let mut out = vec![Q::zero(); n];
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                axpy(&mut out, &(a * b), &self.dot[i][j]);
            }
        }
        out
    }

    /// `λ = -s`.
    pub fn lambda(&self) -> LieMap {
        self.s.scale(&q(-1))
    }

    pub fn rho(&self) -> &LieMap {
        &self.t
    }

    /// Basis index of the arity-`n` map `e_out(e_inputs)`.
    pub fn basis_index(
        &self,
        dim_b: usize,
        arity: usize,
        output: usize,
        inputs: &[usize],
    ) -> usize {
        let offset: usize = (1..arity).map(|k| dim_b.pow(k as u32 + 1)).sum();
        offset + inputs.iter().fold(output, |acc, i| acc * dim_b + i)
    }
}

/// Largest Lie dimension accepted by [`end_operad_module`].
pub const END_OPERAD_MAX_DIM: usize = 64;

/// `g = ⊕_{n ≤ A} Hom(B^n, B)` with the commutator of `•`, `a` the same space
/// with the commutator of the insertion product, action the insertion; all
/// modulo maps of arity above `A`.
pub fn end_operad_module(alg: &BaseAlgebra, max_arity: usize) -> Result<EndOperadModule> {
    if max_arity == 0 {
        return Err(HopfError::Shape("max arity must be positive".into()));
    }
    let d = alg.dim();
    let dim = (1..=max_arity).try_fold(0usize, |acc, n| {
        d.checked_pow(n as u32 + 1).and_then(|b| acc.checked_add(b))
    });
    match dim {
        Some(dim) if dim <= END_OPERAD_MAX_DIM => {}
        _ => {
            return Err(HopfError::TooLarge(format!(
                "end operad over dim {d} to arity {max_arity}"
            )))
        }
    }
    let space = OperadSpace::new(alg, max_arity);
    let n = space.dim;
    let mut gb = vec![vec![Vec::new(); n]; n];
    let mut ab = vec![vec![Vec::new(); n]; n];
    let mut action = vec![vec![Vec::new(); n]; n];
    let mut dot = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            dot[i][j] = space.dot(i, j);
            let (dij, dji) = (to_dense(&space.dot(i, j), n), to_dense(&space.dot(j, i), n));
            gb[i][j] = to_sparse(&sub(&dij, &dji));
            let (ij, ji) = (
                to_dense(&space.insert(i, j), n),
                to_dense(&space.insert(j, i), n),
            );
            ab[i][j] = to_sparse(&sub(&ij, &ji));
            action[i][j] = to_sparse(&ij);
        }
    }
    let g = LieAlgebra::new(n, gb, Side::Source)?;
    let a = LieAlgebra::new(n, ab, Side::Target)?;
    let module = LieModule::new(g, a, action)?;
    let id = space.identity();
    let unit_basis = |i: usize| vec![(i, q(1))];
    let lambda: Vec<SparseVec> = (0..n).map(|i| space.dot_vec(&id, &unit_basis(i))).collect();
    let rho: Vec<SparseVec> = (0..n).map(|i| space.dot_vec(&unit_basis(i), &id)).collect();
    let s = LieMap::new(n, n, lambda)?.scale(&q(-1));
    let t = LieMap::new(n, n, rho)?;
    Ok(EndOperadModule {
        module,
        s,
        t,
        arities: (0..n).map(|i| space.arity_of(i)).collect(),
        base_commutative: alg.is_commutative(),
        dot,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: usize, i: usize) -> Vec<Q> {
        let mut x = vec![Q::zero(); n];
        x[i] = q(1);
        x
    }

    #[test]
    fn sl2_and_gl2_satisfy_jacobi() {
        for g in [LieAlgebra::sl2(), LieAlgebra::gl(2), LieAlgebra::abelian(2)] {
            let rebuilt = LieAlgebra::new(g.dim(), g.bracket.clone(), Side::Source).unwrap();
            assert_eq!(rebuilt, g);
        }
    }

    #[test]
    fn adjoint_module_is_accepted() {
        let m = LieModule::adjoint(LieAlgebra::sl2());
        LieModule::new(m.g.clone(), m.a.clone(), m.action.clone()).unwrap();
    }

    #[test]
    fn abelian_zero_action_is_accepted() {
        LieModule::new(
            LieAlgebra::abelian(2),
            LieAlgebra::abelian(3),
            vec![vec![Vec::new(); 3]; 2],
        )
        .unwrap();
    }

    #[test]
    fn broken_derivation_law_is_reported() {
        // g = sl2, a one-dimensional, acting by a non-derivation scaling of e.
        let mut action = vec![vec![Vec::new(); 1]; 3];
        action[0][0] = vec![(0, q(1))];
        let err = LieModule::new(LieAlgebra::sl2(), LieAlgebra::abelian(1), action).unwrap_err();
        assert!(
            matches!(err, HopfError::DerivationViolation { .. }),
            "{err:?}"
        );
    }

    #[test]
    fn broken_module_law_is_reported() {
        // Abelian g of dim 2, a = sl2 acting through a map that is not a representation.
        let mut action = vec![vec![Vec::new(); 3]; 2];
        action[0][0] = vec![(1, q(1))];
        action[1][2] = vec![(0, q(1))];
        let err = LieModule::new(LieAlgebra::abelian(2), LieAlgebra::sl2(), action).unwrap_err();
        assert!(matches!(err, HopfError::ModuleViolation { .. }), "{err:?}");
    }

    #[test]
    fn broken_jacobi_is_reported() {
        let mut b = vec![vec![Vec::new(); 3]; 3];
        b[0][1] = vec![(0, q(1))];
        b[1][0] = vec![(0, q(-1))];
        b[1][2] = vec![(1, q(1))];
        b[2][1] = vec![(1, q(-1))];
        b[0][2] = vec![(1, q(1))];
        b[2][0] = vec![(1, q(-1))];
        let err = LieAlgebra::new(3, b, Side::Source).unwrap_err();
        assert!(matches!(err, HopfError::JacobiViolation { .. }), "{err:?}");
    }

    #[test]
    fn scalar_end_operad_counts_insertions() {
        let op = end_operad_module(&BaseAlgebra::scalar(), 3).unwrap();
        let m = &op.module;
        assert!(m.g().is_abelian());
        assert_eq!(op.arities, vec![1, 2, 3]);
        // Basis index n-1 is p_n.
        for mm in 1..=3usize {
            for nn in 1..=3usize {
                let got = m.act(&v(3, mm - 1), &v(3, nn - 1));
                let arity = mm + nn - 1;
                let mut want = vec![Q::zero(); 3];
                if arity <= 3 {
                    want[arity - 1] = q(mm as i64);
                }
                assert_eq!(got, want, "p{mm} ◁ p{nn}");
            }
            let up: Vec<Q> = if mm < 3 { v(3, mm) } else { vec![Q::zero(); 3] };
            assert_eq!(op.lambda().apply(&v(3, mm - 1)), up);
            assert_eq!(op.rho().apply(&v(3, mm - 1)), up);
        }
        m.check_matching(&op.s, &op.t).unwrap();
    }

    #[test]
    fn diagonal_end_operad_bracket_swaps_slots() {
        let op = end_operad_module(&BaseAlgebra::diagonal(2), 2).unwrap();
        assert!(op.base_commutative);
        assert_eq!(op.module.g().dim(), 12);
        // p(x) = x_0 e_0 and q(x) = x_1 e_0: p • q and q • p read different slots.
        let p = op.basis_index(2, 1, 0, &[0]);
        let qq = op.basis_index(2, 1, 0, &[1]);
        let br = op.module.g().bracket_basis(p, qq);
        let want = vec![
            (op.basis_index(2, 2, 0, &[0, 1]), q(1)),
            (op.basis_index(2, 2, 0, &[1, 0]), q(-1)),
        ];
        assert_eq!(br, &want);
        op.module.check_matching(&op.s, &op.t).unwrap();
        // The bracket image sits in top arity, which both translations kill.
        for i in 0..12 {
            for j in 0..12 {
                let b = to_dense(op.module.g().bracket_basis(i, j), 12);
                assert!(op.t.apply(&b).iter().all(Zero::is_zero));
                assert!(op.s.apply(&b).iter().all(Zero::is_zero));
            }
        }
    }

    #[test]
    fn upper_triangular_end_operad_is_a_module() {
        let op = end_operad_module(&BaseAlgebra::upper_triangular(), 1).unwrap();
        op.module.check_matching(&op.s, &op.t).unwrap();
    }

    #[test]
    fn oversized_end_operad_is_rejected() {
        assert!(matches!(
            end_operad_module(&BaseAlgebra::diagonal(2), 5),
            Err(HopfError::TooLarge(_))
        ));
        assert!(end_operad_module(&BaseAlgebra::diagonal(2), 4).is_ok());
    }

    #[test]
    fn non_o_lie_map_is_reported() {
        let m = LieModule::adjoint(LieAlgebra::sl2());
        let twice = LieMap::identity(3).scale(&q(2));
        assert!(matches!(
            m.check_o_lie(&twice),
            Err(HopfError::NotOLieOperator { .. })
        ));
        // -id is O-Lie for the adjoint module.
        m.check_o_lie(&LieMap::identity(3).scale(&q(-1))).unwrap();
    }
}
