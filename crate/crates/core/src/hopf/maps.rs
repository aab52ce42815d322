//! Linear maps out of `U(g)` tabulated on the PBW basis, and the operations
//! on them: convolution, the `#` product, the Guin-Oudom extension, the
//! e-transform and the Eulerian idempotents.

use std::collections::HashMap;
use std::sync::Mutex;

use num_traits::One;
use rand::Rng;

use crate::rational::{factorial, q, Q};

use super::envelope::{Envelope, Monomial, UElem};
use super::lie::{LieMap, LieModule};
use super::{HopfError, Result};

/// Codomain of a tabulated map: `U(g)` itself or `U(a)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Codomain {
    Source,
    Target,
}

/// Linear map out of `U(g)`, by images of the PBW basis up to degree `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoalgMap {
    codomain: Codomain,
    images: Vec<UElem>,
}

impl CoalgMap {
    pub fn zero(codomain: Codomain, len: usize) -> Self {
        Self {
            codomain,
            images: vec![UElem::zero(); len],
        }
    }

    pub fn from_images(codomain: Codomain, images: Vec<UElem>) -> Self {
        Self { codomain, images }
    }

    /// Apply `f` to every image, keeping or changing the codomain.
    pub fn map_images(&self, codomain: Codomain, f: impl Fn(&UElem) -> UElem) -> Self {
        Self {
            codomain,
            images: self.images.iter().map(f).collect(),
        }
    }

    pub fn codomain(&self) -> Codomain {
        self.codomain
    }

    pub fn images(&self) -> &[UElem] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &UElem {
        &self.images[i]
    }

    fn zip(&self, other: &Self, f: impl Fn(&UElem, &UElem) -> UElem) -> Result<Self> {
        if self.codomain != other.codomain || self.images.len() != other.images.len() {
            return Err(HopfError::CodomainMismatch);
        }
        Ok(Self {
            codomain: self.codomain,
            images: self
                .images
                .iter()
                .zip(&other.images)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, UElem::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, UElem::sub)
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self {
            codomain: self.codomain,
            images: self.images.iter().map(|x| x.scale(c)).collect(),
        }
    }

    /// First basis index where two maps differ.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        (0..self.images.len().max(other.images.len()))
            .find(|&i| self.images.get(i) != other.images.get(i))
    }
}

/// A Guin-Oudom extension `[t]` together with the Lie map it extends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OHopfOperator {
    map: CoalgMap,
    generator: LieMap,
}

impl OHopfOperator {
    pub fn map(&self) -> &CoalgMap {
        &self.map
    }

    pub fn generator(&self) -> &LieMap {
        &self.generator
    }

    pub fn into_map(self) -> CoalgMap {
        self.map
    }
}

/// A right Lie module with both envelopes tabulated to degree `D` and the
/// extended action `◁◁` of `U(a)` on `U(g)`.
pub struct HopfModule {
    module: LieModule,
    ug: Envelope,
    ua: Envelope,
    /// `Δ` of each basis monomial as basis-index pairs.
    coproducts: Vec<Vec<(usize, usize, Q)>>,
    act_cache: Mutex<HashMap<(Monomial, u16), UElem>>,
}

impl std::fmt::Debug for HopfModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HopfModule")
            .field("source", &self.ug)
            .field("target", &self.ua)
            .finish()
    }
}

impl HopfModule {
    pub fn new(module: LieModule, degree: usize) -> Result<Self> {
        let ug = Envelope::new(module.g().clone(), degree)?;
        let ua = Envelope::new(module.a().clone(), degree)?;
        let idx = |m: &Monomial| {
            ug.index_of(m)
                .expect("sub-monomials of basis monomials are basis monomials")
        };
        let coproducts = ug
            .basis()
            .iter()
            .map(|m| {
                ug.coproduct_mono(m)
                    .into_iter()
                    .map(|(l, r, c)| (idx(&l), idx(&r), c))
                    .collect()
            })
            .collect();
        Ok(Self {
            module,
            ug,
            ua,
            coproducts,
            act_cache: Mutex::default(),
        })
    }

    pub fn module(&self) -> &LieModule {
        &self.module
    }

    pub fn degree(&self) -> usize {
        self.ug.degree()
    }

    pub fn source(&self) -> &Envelope {
        &self.ug
    }

    pub fn target(&self) -> &Envelope {
        &self.ua
    }

    pub fn env(&self, codomain: Codomain) -> &Envelope {
        match codomain {
            Codomain::Source => &self.ug,
            Codomain::Target => &self.ua,
        }
    }

    pub fn basis_len(&self) -> usize {
        self.ug.basis().len()
    }

    fn basis_elem(&self, i: usize) -> UElem {
        UElem::monomial(self.ug.basis()[i].clone())
    }

    fn tabulate(
        &self,
        codomain: Codomain,
        mut f: impl FnMut(usize) -> Result<UElem>,
    ) -> Result<CoalgMap> {
        let images = (0..self.basis_len()).map(&mut f).collect::<Result<_>>()?;
        Ok(CoalgMap { codomain, images })
    }

    fn expect(&self, f: &CoalgMap, codomain: Codomain) -> Result<()> {
        if f.codomain != codomain || f.images.len() != self.basis_len() {
            return Err(HopfError::CodomainMismatch);
        }
        Ok(())
    }

    // ---- extended action ----

    /// `m ◁◁ a_j = Σ_i x_1 .. (x_i ◁ a_j) .. x_n`, normal ordered.
    fn act_gen(&self, m: &Monomial, j: u16) -> UElem {
        let key = (m.clone(), j);
        if let Some(hit) = self.act_cache.lock().expect("cache lock").get(&key) {
            return hit.clone();
        }
        let mut out = UElem::zero();
        for (pos, &g) in m.letters().iter().enumerate() {
            for (k, c) in self.module.act_basis(g as usize, j as usize) {
                let mut w = m.letters().to_vec();
                w[pos] = *k as u16;
                out.add_scaled(c, &self.ug.word(&w));
            }
        }
        self.act_cache
            .lock()
            .expect("cache lock")
            .insert(key, out.clone());
        out
    }

    fn act_elem_gen(&self, x: &UElem, j: u16) -> UElem {
        let mut out = UElem::zero();
        for (m, c) in x.terms() {
            out.add_scaled(c, &self.act_gen(m, j));
        }
        out
    }

    /// `x ◁◁ y` for `x` in `U(g)` and `y` in `U(a)`, a right action by
    /// algebra derivations extended multiplicatively in `y`.
    pub fn act(&self, x: &UElem, y: &UElem) -> UElem {
        let mut out = UElem::zero();
        for (n, d) in y.terms() {
            let v = n
                .letters()
                .iter()
                .fold(x.clone(), |acc, &j| self.act_elem_gen(&acc, j));
            out.add_scaled(d, &v);
        }
        out
    }

    // ---- evaluation and elementary maps ----

    pub fn eval(&self, f: &CoalgMap, x: &UElem) -> Result<UElem> {
        let mut out = UElem::zero();
        for (m, c) in x.terms() {
            let i = self
                .ug
                .index_of(m)
                .ok_or(HopfError::DegreeOverflow(m.degree(), self.degree()))?;
            out.add_scaled(c, &f.images[i]);
        }
        Ok(out)
    }

    pub fn identity(&self) -> CoalgMap {
        CoalgMap {
            codomain: Codomain::Source,
            images: (0..self.basis_len()).map(|i| self.basis_elem(i)).collect(),
        }
    }

    /// `η ∘ ε` into either envelope.
    pub fn unit_counit(&self, codomain: Codomain) -> CoalgMap {
        let mut f = CoalgMap::zero(codomain, self.basis_len());
        f.images[0] = UElem::one();
        f
    }

    /// Antipode of `U(g)`.
    pub fn antipode(&self) -> CoalgMap {
        let images = self
            .ug
            .basis()
            .iter()
            .map(|m| self.ug.antipode_mono(m))
            .collect();
        CoalgMap {
            codomain: Codomain::Source,
            images,
        }
    }

    /// The ε-co-cocycle equal to `t` on generators and zero elsewhere.
    pub fn from_lie_map(&self, t: &LieMap) -> CoalgMap {
        let mut f = CoalgMap::zero(Codomain::Target, self.basis_len());
        for (i, m) in self.ug.basis().iter().enumerate() {
            if let [g] = m.letters() {
                f.images[i] =
                    UElem::from_lie(&super::lie::to_dense(t.image(*g as usize), t.target_dim()));
            }
        }
        f
    }

    /// `t ∘ f` for `f` with values in `g`.
    pub fn lie_after(&self, t: &LieMap, f: &CoalgMap) -> Result<CoalgMap> {
        self.expect(f, Codomain::Source)?;
        let dim = self.module.g().dim();
        self.tabulate(Codomain::Target, |i| {
            let v = f.images[i].lie_part(dim).ok_or_else(|| {
                HopfError::Shape(format!("value at {} is not primitive", self.ug.basis()[i]))
            })?;
            Ok(UElem::from_lie(&t.apply(&v)))
        })
    }

    /// `a ∘ b` for `b` with values in `U(g)`.
    pub fn compose(&self, a: &CoalgMap, b: &CoalgMap) -> Result<CoalgMap> {
        self.expect(b, Codomain::Source)?;
        self.expect(a, a.codomain)?;
        self.tabulate(a.codomain, |i| self.eval(a, &b.images[i]))
    }

    // ---- convolution ----

    /// `(a * b)(f) = a(f₍₁₎) b(f₍₂₎)` in the common codomain.
    pub fn convolve(&self, a: &CoalgMap, b: &CoalgMap) -> Result<CoalgMap> {
        self.expect(a, a.codomain)?;
        self.expect(b, a.codomain)?;
        let env = self.env(a.codomain);
        self.tabulate(a.codomain, |i| {
            let mut out = UElem::zero();
            for (l, r, c) in &self.coproducts[i] {
                out.add_scaled(c, &env.mul(&a.images[*l], &b.images[*r]));
            }
            Ok(out)
        })
    }

    /// Inverse for `*` of a map with `f(1) = 1`, by the Neumann series.
    pub fn convolution_inverse(&self, f: &CoalgMap) -> Result<CoalgMap> {
        let unit = self.unit_counit(f.codomain);
        self.check_unital(f)?;
        let gap = unit.sub(f)?;
        self.neumann(&unit, &gap, |a, b| self.convolve(a, b))
    }

    fn check_unital(&self, f: &CoalgMap) -> Result<()> {
        if f.images[0] != UElem::one() {
            return Err(HopfError::NotCoalgebraMorphism("1".into()));
        }
        Ok(())
    }

    /// `Σ_{n ≤ D} gap^n` for a product `mul` with unit `unit`; exact since
    /// `gap` vanishes on `1` and the products are filtered.
    fn neumann(
        &self,
        unit: &CoalgMap,
        gap: &CoalgMap,
        mul: impl Fn(&CoalgMap, &CoalgMap) -> Result<CoalgMap>,
    ) -> Result<CoalgMap> {
        let mut sum = unit.clone();
        let mut power = unit.clone();
        for _ in 0..self.degree() {
            power = mul(&power, gap)?;
            sum = sum.add(&power)?;
        }
        Ok(sum)
    }

    // ---- the # product ----

    /// `(a # b)(f) = a(f₍₁₎ ◁◁ S(b(f₍₂₎)₍₁₎)) b(f₍₂₎)₍₂₎`.
    pub fn sharp(&self, a: &CoalgMap, b: &CoalgMap) -> Result<CoalgMap> {
        self.expect(a, Codomain::Target)?;
        self.expect(b, Codomain::Target)?;
        self.tabulate(Codomain::Target, |i| {
            let mut out = UElem::zero();
            for (l, r, c) in &self.coproducts[i] {
                let left = self.basis_elem(*l);
                for ((b1, b2), d) in self.ua.coproduct(&b.images[*r]).terms() {
                    let arg = self.act(&left, &self.ua.antipode_mono(b1));
                    let val = self.eval(a, &arg)?;
                    out.add_scaled(&(c * d), &self.ua.mul_mono_right(&val, b2));
                }
            }
            Ok(out)
        })
    }

    /// Inverse for `#` of a map with `f(1) = 1`.
    pub fn sharp_inverse(&self, f: &CoalgMap) -> Result<CoalgMap> {
        self.expect(f, Codomain::Target)?;
        self.check_unital(f)?;
        let unit = self.unit_counit(Codomain::Target);
        let gap = unit.sub(f)?;
        self.neumann(&unit, &gap, |a, b| self.sharp(a, b))
    }

    /// `ηε + Σ_{n ≥ 1} α^{#n} / n!` for an ε-co-cocycle `α`.
    pub fn exp_sharp(&self, alpha: &CoalgMap) -> Result<CoalgMap> {
        self.check_cocycle(alpha)?;
        let mut sum = self.unit_counit(Codomain::Target);
        let mut power = sum.clone();
        for n in 1..=self.degree() {
            power = self.sharp(&power, alpha)?;
            sum = sum.add(&power.scale(&(Q::one() / factorial(n))))?;
        }
        Ok(sum)
    }

    /// ε-co-cocycles are the maps into `a` (primitives of `U(a)`); `exp_#`
    /// additionally needs `α(1) = 0`.
    fn check_cocycle(&self, alpha: &CoalgMap) -> Result<()> {
        self.expect(alpha, Codomain::Target)?;
        let dim = self.module.a().dim();
        for (i, v) in alpha.images.iter().enumerate() {
            if v.lie_part(dim).is_none() || (i == 0 && !v.is_zero()) {
                return Err(HopfError::NotEpsCocycle(self.ug.basis()[i].to_string()));
            }
        }
        Ok(())
    }

    /// Random ε-co-cocycle, zero on `1`. Each generator gets a random value;
    /// higher basis elements get one with probability `1/4`, supported on at
    /// most two coordinates of `a`, with integer coefficients in `[-bound, bound]`.
    pub fn random_cocycle<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> CoalgMap {
        let dim = self.module.a().dim();
        let mut f = CoalgMap::zero(Codomain::Target, self.basis_len());
        for (i, img) in f.images.iter_mut().enumerate().skip(1) {
            if self.ug.basis()[i].degree() > 1 && !rng.gen_bool(0.25) {
                continue;
            }
            let mut v = vec![q(0); dim];
            for _ in 0..2 {
                v[rng.gen_range(0..dim)] = q(rng.gen_range(-bound..=bound));
            }
            *img = UElem::from_lie(&v);
        }
        f
    }

    /// `(α ◁◁* β)(f) = -α(f₍₁₎ ◁◁ β(f₍₂₎))`.
    pub fn act_star(&self, alpha: &CoalgMap, beta: &CoalgMap) -> Result<CoalgMap> {
        self.expect(alpha, Codomain::Target)?;
        self.expect(beta, Codomain::Target)?;
        self.tabulate(Codomain::Target, |i| {
            let mut out = UElem::zero();
            for (l, r, c) in &self.coproducts[i] {
                let arg = self.act(&self.basis_elem(*l), &beta.images[*r]);
                out.add_scaled(&-c, &self.eval(alpha, &arg)?);
            }
            Ok(out)
        })
    }

    /// `[α, β]_* = α * β - β * α`.
    pub fn convolution_bracket(&self, alpha: &CoalgMap, beta: &CoalgMap) -> Result<CoalgMap> {
        self.convolve(alpha, beta)?
            .sub(&self.convolve(beta, alpha)?)
    }

    // ---- Eulerian idempotents ----

    /// `sol_1 = log_*(id) = Σ_{k ≥ 1} (-1)^{k+1} / k (id - ηε)^{*k}`.
    pub fn sol1(&self) -> Result<CoalgMap> {
        let reduced = self.identity().sub(&self.unit_counit(Codomain::Source))?;
        let mut sum = CoalgMap::zero(Codomain::Source, self.basis_len());
        let mut power = reduced.clone();
        for k in 1..=self.degree() {
            let sign = if k % 2 == 1 { q(1) } else { q(-1) };
            sum = sum.add(&power.scale(&(sign / q(k as i64))))?;
            power = self.convolve(&power, &reduced)?;
        }
        Ok(sum)
    }

    /// `sol_p = sol_1^{*p} / p!`, the projection onto symmetrized degree `p`.
    pub fn sol(&self, p: usize) -> Result<CoalgMap> {
        let s1 = self.sol1()?;
        if p == 0 {
            return Ok(self.unit_counit(Codomain::Source));
        }
        let mut power = s1.clone();
        for _ in 1..p {
            power = self.convolve(&power, &s1)?;
        }
        Ok(power.scale(&(Q::one() / factorial(p))))
    }

    // ---- Guin-Oudom extension and post-Hopf structure ----

    /// `[t](E h) = [t](E) t(h) - [t](E ◁◁ t(h))`, `[t](1) = 1`, with the
    /// coalgebra-morphism and O-Hopf certificates checked.
    pub fn go_extend(&self, t: &LieMap) -> Result<OHopfOperator> {
        self.module.check_o_lie(t)?;
        let mut images: Vec<UElem> = Vec::with_capacity(self.basis_len());
        images.push(UElem::one());
        for m in self.ug.basis().iter().skip(1) {
            let (e, h) = m.split_last().expect("nonempty monomial");
            let th = UElem::from_lie(&super::lie::to_dense(t.image(h as usize), t.target_dim()));
            let e_idx = self.ug.index_of(&e).expect("prefix is a basis monomial");
            let mut value = self.ua.mul(&images[e_idx], &th);
            let moved = self.act(&UElem::monomial(e), &th);
            for (n, c) in moved.terms() {
                let k = self.ug.index_of(n).expect("action does not raise degree");
                value.add_scaled(&-c, &images[k]);
            }
            images.push(value);
        }
        let map = CoalgMap {
            codomain: Codomain::Target,
            images,
        };
        if let Some(i) = self.coalgebra_defect(&map)? {
            return Err(HopfError::NotCoalgebraMorphism(
                self.ug.basis()[i].to_string(),
            ));
        }
        if let Some((i, j)) = self.o_hopf_defect(&map)? {
            let b = self.ug.basis();
            return Err(HopfError::NotOHopf(b[i].to_string(), b[j].to_string()));
        }
        Ok(OHopfOperator {
            map,
            generator: t.clone(),
        })
    }

    /// `e ⋆_T f = (e ◁◁ T(f₍₁₎)) f₍₂₎`.
    pub fn star_t(&self, t: &CoalgMap, e: &UElem, f: &UElem) -> Result<UElem> {
        self.expect(t, Codomain::Target)?;
        let mut out = UElem::zero();
        for (m, c) in f.terms() {
            let i = self
                .ug
                .index_of(m)
                .ok_or(HopfError::DegreeOverflow(m.degree(), self.degree()))?;
            for (l, r, d) in &self.coproducts[i] {
                let moved = self.act(e, &t.images[*l]);
                out.add_scaled(&(c * d), &self.ug.mul(&moved, &self.basis_elem(*r)));
            }
        }
        Ok(out)
    }

    /// First basis pair `(e, f)` with `|e| + |f| ≤ D` breaking
    /// `T(e) T(f) = T(e ⋆_T f)`.
    pub fn o_hopf_defect(&self, t: &CoalgMap) -> Result<Option<(usize, usize)>> {
        let basis = self.ug.basis();
        for (i, e) in basis.iter().enumerate() {
            for (j, f) in basis.iter().enumerate() {
                if e.degree() + f.degree() > self.degree() {
                    continue;
                }
                let lhs = self.ua.mul(&t.images[i], &t.images[j]);
                let rhs = self.eval(
                    t,
                    &self.star_t(t, &self.basis_elem(i), &self.basis_elem(j))?,
                )?;
                if lhs != rhs {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }

    /// First basis element where `Δ ∘ F ≠ (F ⊗ F) ∘ Δ`.
    pub fn coalgebra_defect(&self, f: &CoalgMap) -> Result<Option<usize>> {
        self.expect(f, f.codomain)?;
        let env = self.env(f.codomain);
        for i in 0..self.basis_len() {
            let lhs = env.coproduct(&f.images[i]);
            let mut rhs = super::envelope::UTensor::zero();
            for (l, r, c) in &self.coproducts[i] {
                rhs.add_product(c, &f.images[*l], &f.images[*r]);
            }
            if lhs != rhs {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// First basis element where `Δ ∘ α ≠ (ηε ⊗ α + α ⊗ ηε) ∘ Δ`.
    pub fn cocycle_defect(&self, alpha: &CoalgMap) -> Result<Option<usize>> {
        self.expect(alpha, alpha.codomain)?;
        let env = self.env(alpha.codomain);
        for i in 0..self.basis_len() {
            let lhs = env.coproduct(&alpha.images[i]);
            let mut rhs = super::envelope::UTensor::zero();
            for (l, r, c) in &self.coproducts[i] {
                if *l == 0 {
                    rhs.add_product(c, &UElem::one(), &alpha.images[*r]);
                }
                if *r == 0 {
                    rhs.add_product(c, &alpha.images[*l], &UElem::one());
                }
            }
            if lhs != rhs {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// `e_T(f) = f₍₁₎ ◁◁ T(e_T(f₍₂₎))` by recursion on degree.
    pub fn e_transform(&self, t: &CoalgMap) -> Result<CoalgMap> {
        self.expect(t, Codomain::Target)?;
        let mut images: Vec<UElem> = Vec::with_capacity(self.basis_len());
        images.push(UElem::one());
        for i in 1..self.basis_len() {
            let mut out = UElem::zero();
            for (l, r, c) in &self.coproducts[i] {
                // The `1 ⊗ f` term contributes ε(T(e_T(f))) = ε(f) = 0.
                if *r == i {
                    continue;
                }
                let inner = self.eval(t, &images[*r])?;
                out.add_scaled(c, &self.act(&self.basis_elem(*l), &inner));
            }
            images.push(out);
        }
        Ok(CoalgMap {
            codomain: Codomain::Source,
            images,
        })
    }

    /// `e_T^{-1} = id ◁◁ T^{-1*}`, i.e. `f ↦ f₍₁₎ ◁◁ S(T(f₍₂₎))`.
    pub fn e_inverse(&self, t: &CoalgMap) -> Result<CoalgMap> {
        self.expect(t, Codomain::Target)?;
        self.tabulate(Codomain::Source, |i| {
            let mut out = UElem::zero();
            for (l, r, c) in &self.coproducts[i] {
                out.add_scaled(
                    c,
                    &self.act(&self.basis_elem(*l), &self.ua.antipode(&t.images[*r])),
                );
            }
            Ok(out)
        })
    }

    /// Convolution over `⋆_T`: `(a ⋆ b)(f) = a(f₍₁₎) ⋆_T b(f₍₂₎)`.
    pub fn star_convolve(&self, t: &CoalgMap, a: &CoalgMap, b: &CoalgMap) -> Result<CoalgMap> {
        self.expect(a, Codomain::Source)?;
        self.expect(b, Codomain::Source)?;
        self.tabulate(Codomain::Source, |i| {
            let mut out = UElem::zero();
            for (l, r, c) in &self.coproducts[i] {
                out.add_scaled(c, &self.star_t(t, &a.images[*l], &b.images[*r])?);
            }
            Ok(out)
        })
    }
}

impl Envelope {
    /// `x * m` for a single monomial `m`.
    pub(crate) fn mul_mono_right(&self, x: &UElem, m: &Monomial) -> UElem {
        let mut out = UElem::zero();
        for (n, c) in x.terms() {
            out.add_scaled(c, &self.mul_mono(n, m));
        }
        out
    }
}
