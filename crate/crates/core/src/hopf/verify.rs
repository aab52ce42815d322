//! Basis-exhaustive identity checks and their reports.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::BaseAlgebra;
use crate::rational::{factorial, fmt_q, one, q, qf, zero, Q};
use crate::report::{Check, Report};

use super::envelope::UElem;
use super::lie::{end_operad_module, EndOperadModule, LieAlgebra, LieMap, LieModule};
use super::maps::{CoalgMap, Codomain, HopfModule};
use super::Result;

fn differ(hm: &HopfModule, a: &CoalgMap, b: &CoalgMap) -> Option<String> {
    a.first_difference(b).map(|i| {
        let show = |m: &CoalgMap| m.images().get(i).map(UElem::to_string).unwrap_or_default();
        format!("{}: {} vs {}", hm.source().basis()[i], show(a), show(b))
    })
}

fn same(hm: &HopfModule, a: Result<CoalgMap>, b: Result<CoalgMap>) -> Result<Option<String>> {
    Ok(differ(hm, &a?, &b?))
}

fn first_of(outcomes: impl IntoIterator<Item = Result<Option<String>>>) -> Result<Option<String>> {
    for o in outcomes {
        if let Some(w) = o? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// An O-Lie matching pair on a Lie module with tabulated envelopes.
pub struct HopfInstance {
    pub name: String,
    pub hm: HopfModule,
    pub s: LieMap,
    pub t: LieMap,
    /// Values of `u` at which `[s + u t] = [s] # [u t] = [u t] # [s]` is checked.
    pub deformations: Vec<Q>,
}

/// Named end-operad instances: `end-operad-1-3` (scalar `B`, arity 3) and
/// `end-operad-diag2-2` (`B = C^2` diagonal, arity 2), both to degree 3.
pub fn end_operad_instance(name: &str) -> Result<HopfInstance> {
    let (alg, arity) = match name {
        "end-operad-1-3" => (BaseAlgebra::scalar(), 3),
        "end-operad-diag2-2" => (BaseAlgebra::diagonal(2), 2),
        other => {
            return Err(super::HopfError::Shape(format!(
                "unknown instance `{other}`"
            )))
        }
    };
    let op = end_operad_module(&alg, arity)?;
    Ok(HopfInstance {
        name: name.to_string(),
        hm: HopfModule::new(op.module, 3)?,
        s: op.s,
        t: op.t,
        deformations: vec![q(1), q(2), q(-1)],
    })
}

/// `T(E ◁◁ S(s(F₍₁₎))) s(F₍₂₎) = s(F ◁◁ S(T(E₍₁₎))) T(E₍₂₎)` on basis
/// pairs of total degree at most `D`.
fn matching_hopf_defect(hm: &HopfModule, s: &CoalgMap, t: &CoalgMap) -> Result<Option<String>> {
    let (ug, ua) = (hm.source(), hm.target());
    let basis = ug.basis();
    let side = |x: &CoalgMap, y: &CoalgMap, e: usize, f: usize| -> Result<UElem> {
        let mut out = UElem::zero();
        for (l, r, c) in ug.coproduct_mono(&basis[f]) {
            let li = ug.index_of(&l).expect("basis");
            let ri = ug.index_of(&r).expect("basis");
            let moved = hm.act(
                &UElem::monomial(basis[e].clone()),
                &ua.antipode(y.image(li)),
            );
            out.add_scaled(&c, &ua.mul(&hm.eval(x, &moved)?, y.image(ri)));
        }
        Ok(out)
    };
    for e in 0..basis.len() {
        for f in 0..basis.len() {
            if basis[e].degree() + basis[f].degree() > hm.degree() {
                continue;
            }
            let lhs = side(t, s, e, f)?;
            let rhs = side(s, t, f, e)?;
            if lhs != rhs {
                return Ok(Some(format!(
                    "E={}, F={}: {lhs} vs {rhs}",
                    basis[e], basis[f]
                )));
            }
        }
    }
    Ok(None)
}

/// Compositions of `p` into positive parts.
fn compositions(p: usize) -> Vec<Vec<usize>> {
    if p == 0 {
        return vec![Vec::new()];
    }
    (1..=p)
        .flat_map(|first| {
            compositions(p - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// `T ∘ sol_p = Σ_{compositions λ of p} t_{λ1} # .. # t_{λk} / k!` for
/// `T = exp_#(t)`, `t_n = t ∘ sol_n`.
fn composition_grading_defect(
    hm: &HopfModule,
    t: &CoalgMap,
    max_p: usize,
) -> Result<Option<String>> {
    let big_t = hm.exp_sharp(t)?;
    let sols: Vec<CoalgMap> = (0..=max_p).map(|p| hm.sol(p)).collect::<Result<_>>()?;
    let parts: Vec<CoalgMap> = sols
        .iter()
        .map(|s| hm.compose(t, s))
        .collect::<Result<_>>()?;
    for (p, sol) in sols.iter().enumerate().skip(1) {
        let lhs = hm.compose(&big_t, sol)?;
        let mut rhs = CoalgMap::zero(Codomain::Target, hm.basis_len());
        for lambda in compositions(p) {
            let mut term = parts[lambda[0]].clone();
            for &part in &lambda[1..] {
                term = hm.sharp(&term, &parts[part])?;
            }
            rhs = rhs.add(&term.scale(&(one() / factorial(lambda.len()))))?;
        }
        if let Some(w) = differ(hm, &lhs, &rhs) {
            return Ok(Some(format!("p={p}, {w}")));
        }
    }
    Ok(None)
}

/// `S_{H_T} = e_T ∘ S`: both convolutions with `id` over `⋆_T` equal `ηε`.
fn antipode_ht_defect(hm: &HopfModule, t: &CoalgMap) -> Result<Option<String>> {
    let cand = hm.compose(&hm.e_transform(t)?, &hm.antipode())?;
    let unit = hm.unit_counit(Codomain::Source);
    let id = hm.identity();
    first_of([
        same(hm, hm.star_convolve(t, &cand, &id), Ok(unit.clone())),
        same(hm, hm.star_convolve(t, &id, &cand), Ok(unit)),
    ])
}

fn e_transform_defect(hm: &HopfModule, t: &CoalgMap) -> Result<Option<String>> {
    let e = hm.e_transform(t)?;
    let inv = hm.e_inverse(t)?;
    let id = hm.identity();
    if let Some(i) = hm.coalgebra_defect(&e)? {
        return Ok(Some(format!(
            "e_T not a coalgebra map at {}",
            hm.source().basis()[i]
        )));
    }
    first_of([
        same(hm, hm.compose(&e, &inv), Ok(id.clone())),
        same(hm, hm.compose(&inv, &e), Ok(id)),
        same(hm, hm.e_transform(&hm.compose(t, &hm.antipode())?), Ok(inv)),
    ])
}

/// `[t]^{#-1} = [t] ∘ S`, checked from both sides.
fn sharp_inverse_defect(hm: &HopfModule, t: &CoalgMap) -> Result<Option<String>> {
    let ts = hm.compose(t, &hm.antipode())?;
    let unit = hm.unit_counit(Codomain::Target);
    first_of([
        same(hm, hm.sharp_inverse(t), Ok(ts.clone())),
        same(hm, hm.sharp(t, &ts), Ok(unit.clone())),
        same(hm, hm.sharp(&ts, t), Ok(unit)),
    ])
}

/// `(T^{-1*})^{-1#}` against `(T^{-1#})^{-1*}` for the extensions of `s` and
/// `t`, with `T^{-1*} = S ∘ T` checked first. This commutation does not hold
/// in general: it fails on the scalar end operad at `x0x0`.
pub fn inverse_commutation(inst: &HopfInstance) -> Report {
    let hm = &inst.hm;
    let mut report = Report::new(format!("{}/inverse-commutation", inst.name));
    for (name, lie) in [("s", &inst.s), ("t", &inst.t)] {
        let outcome = (|| {
            let t = hm.go_extend(lie)?.into_map();
            let conv_inv = hm.convolution_inverse(&t)?;
            first_of([
                Ok(differ(hm, &conv_inv, &antipode_after(hm, &t))),
                same(
                    hm,
                    hm.sharp_inverse(&conv_inv),
                    hm.convolution_inverse(&hm.sharp_inverse(&t)?),
                ),
            ])
        })();
        report.push(Check::from_outcome(
            format!("inverse-commutation [{name}]"),
            outcome,
        ));
    }
    report
}

/// `S_{U(a)} ∘ T`.
fn antipode_after(hm: &HopfModule, t: &CoalgMap) -> CoalgMap {
    t.map_images(Codomain::Target, |x| hm.target().antipode(x))
}

/// `x ⋆_T y - y ⋆_T x = x ◁ t(y) - y ◁ t(x) + [x, y]` on generators, and
/// associativity of `⋆_T` on basis triples of total degree at most `D`.
fn post_hopf_defect(hm: &HopfModule, t: &CoalgMap, lie: &LieMap) -> Result<Option<String>> {
    let module = hm.module();
    let dim = module.g().dim();
    for i in 0..dim {
        for j in 0..dim {
            let (x, y) = (UElem::generator(i), UElem::generator(j));
            let lhs = hm.star_t(t, &x, &y)?.sub(&hm.star_t(t, &y, &x)?);
            let (ex, ey) = (unit_vec(dim, i), unit_vec(dim, j));
            let br = module.act(&ex, &lie.apply(&ey));
            let br = super::lie::sub(&br, &module.act(&ey, &lie.apply(&ex)));
            let br = super::lie::add(&br, &module.g().bracket(&ex, &ey));
            if lhs != UElem::from_lie(&br) {
                return Ok(Some(format!("commutator on (x{i}, x{j})")));
            }
        }
    }
    let basis = hm.source().basis();
    let d = hm.degree();
    for a in basis.iter().filter(|m| m.degree() >= 1) {
        for b in basis
            .iter()
            .filter(|m| m.degree() >= 1 && a.degree() + m.degree() < d.max(2))
        {
            for c in basis
                .iter()
                .filter(|m| m.degree() >= 1 && a.degree() + b.degree() + m.degree() <= d)
            {
                let (x, y, z) = (
                    UElem::monomial(a.clone()),
                    UElem::monomial(b.clone()),
                    UElem::monomial(c.clone()),
                );
                let left = hm.star_t(t, &hm.star_t(t, &x, &y)?, &z)?;
                let right = hm.star_t(t, &x, &hm.star_t(t, &y, &z)?)?;
                if left != right {
                    return Ok(Some(format!("associativity on ({a}, {b}, {c})")));
                }
            }
        }
    }
    Ok(None)
}

fn unit_vec(dim: usize, i: usize) -> Vec<Q> {
    let mut v = vec![zero(); dim];
    v[i] = q(1);
    v
}

/// The two post-Lie axioms of `(δ, ◁◁*, [-,-]_*)` and closure of `◁◁*`.
fn post_lie_defect(
    hm: &HopfModule,
    a: &CoalgMap,
    b: &CoalgMap,
    c: &CoalgMap,
) -> Result<Option<String>> {
    let act = |x: &CoalgMap, y: &CoalgMap| hm.act_star(x, y);
    let br = |x: &CoalgMap, y: &CoalgMap| hm.convolution_bracket(x, y);
    if let Some(i) = hm.cocycle_defect(&act(a, b)?)? {
        return Ok(Some(format!("closure at {}", hm.source().basis()[i])));
    }
    let lhs1 = act(&br(a, b)?, c)?;
    let rhs1 = br(&act(a, c)?, b)?.add(&br(a, &act(b, c)?)?)?;
    if let Some(w) = differ(hm, &lhs1, &rhs1) {
        return Ok(Some(format!("first axiom: {w}")));
    }
    let lhs2 = act(a, &br(b, c)?)?;
    let assoc = |y: &CoalgMap, z: &CoalgMap| -> Result<CoalgMap> {
        act(&act(a, y)?, z)?.sub(&act(a, &act(y, z)?)?)
    };
    let rhs2 = assoc(b, c)?.sub(&assoc(c, b)?)?;
    Ok(differ(hm, &lhs2, &rhs2).map(|w| format!("second axiom: {w}")))
}

/// Closure, associativity, unit and inverses of `#` on coalgebra maps, and
/// `e^{-1}_{A # B} = e^{-1}_A ∘ e^{-1}_B`.
fn group_defects(
    hm: &HopfModule,
    a: &CoalgMap,
    b: &CoalgMap,
    c: &CoalgMap,
) -> Result<[Option<String>; 2]> {
    let ab = hm.sharp(a, b)?;
    let unit = hm.unit_counit(Codomain::Target);
    let inv = hm.sharp_inverse(a)?;
    let group = first_of([
        Ok(hm
            .coalgebra_defect(&ab)?
            .map(|i| format!("closure at {}", hm.source().basis()[i]))),
        same(hm, hm.sharp(&ab, c), hm.sharp(a, &hm.sharp(b, c)?)),
        same(hm, hm.sharp(a, &unit), Ok(a.clone())),
        same(hm, hm.sharp(&unit, a), Ok(a.clone())),
        same(hm, hm.sharp(a, &inv), Ok(unit.clone())),
        same(hm, hm.sharp(&inv, a), Ok(unit)),
        Ok(hm
            .coalgebra_defect(&inv)?
            .map(|i| format!("inverse not a coalgebra map at {}", hm.source().basis()[i]))),
    ])?;
    let morphism = same(
        hm,
        hm.e_inverse(&ab),
        hm.compose(&hm.e_inverse(a)?, &hm.e_inverse(b)?),
    )?;
    Ok([group, morphism])
}

/// `R(S, T) = (S # T # (S ∘ e_T^{-1})^{-1#}, S ∘ e_T^{-1})`.
fn braid_map(hm: &HopfModule, s: &CoalgMap, t: &CoalgMap) -> Result<(CoalgMap, CoalgMap)> {
    let moved = hm.compose(s, &hm.e_inverse(t)?)?;
    let first = hm.sharp(&hm.sharp(s, t)?, &hm.sharp_inverse(&moved)?)?;
    Ok((first, moved))
}

/// `R12 R23 R12 = R23 R12 R23` on `(x, y, z)`.
fn braid_defect(
    hm: &HopfModule,
    x: &CoalgMap,
    y: &CoalgMap,
    z: &CoalgMap,
) -> Result<Option<String>> {
    let (a1, b1) = braid_map(hm, x, y)?;
    let (b2, c2) = braid_map(hm, &b1, z)?;
    let (a3, b3) = braid_map(hm, &a1, &b2)?;
    let (e1, f1) = braid_map(hm, y, z)?;
    let (d2, e2) = braid_map(hm, x, &e1)?;
    let (e3, f3) = braid_map(hm, &e2, &f1)?;
    for (slot, (l, r)) in [(&a3, &d2), (&b3, &e3), (&c2, &f3)].into_iter().enumerate() {
        if let Some(w) = differ(hm, l, r) {
            return Ok(Some(format!("component {}: {w}", slot + 1)));
        }
    }
    Ok(None)
}

/// Every identity of the Hopf layer on one matching instance.
pub fn verify_instance(inst: &HopfInstance, seed: u64) -> Report {
    let hm = &inst.hm;
    let mut report = Report::new(inst.name.clone());
    report.push(Check::from_outcome(
        "hopf-axioms",
        hm.source()
            .check_hopf_axioms()
            .and_then(|_| hm.target().check_hopf_axioms())
            .map(|_| None),
    ));
    report.push(Check::from_outcome(
        "matching-lie",
        hm.module().check_matching(&inst.s, &inst.t).map(|_| None),
    ));
    let ext = |t: &LieMap| hm.go_extend(t).map(|x| x.into_map());
    let (big_s, big_t) = match (ext(&inst.s), ext(&inst.t)) {
        (Ok(s), Ok(t)) => (s, t),
        (Err(e), _) | (_, Err(e)) => {
            report.push(Check::fail("guin-oudom-extension", e.to_string()));
            return report;
        }
    };
    report.push(Check::pass("guin-oudom-extension"));
    for u in &inst.deformations {
        let tu = inst.t.scale(u);
        let outcome = (|| {
            hm.module().check_matching(&inst.s, &tu)?;
            let sum = ext(&inst.s.add(&tu))?;
            let big_tu = ext(&tu)?;
            first_of([
                same(hm, hm.sharp(&big_s, &big_tu), Ok(sum.clone())),
                same(hm, hm.sharp(&big_tu, &big_s), Ok(sum)),
            ])
        })();
        report.push(Check::from_outcome(format!("sts u={}", fmt_q(u)), outcome));
    }
    report.push(Check::from_outcome(
        "matching-hopf",
        matching_hopf_defect(hm, &big_s, &big_t),
    ));
    for (name, op, lie) in [("s", &big_s, &inst.s), ("t", &big_t, &inst.t)] {
        report.push(Check::from_outcome(
            format!("sharp-inverse-is-antipode-precomposition [{name}]"),
            sharp_inverse_defect(hm, op),
        ));
        report.push(Check::from_outcome(
            format!("antipode-of-post-hopf [{name}]"),
            antipode_ht_defect(hm, op),
        ));
        report.push(Check::from_outcome(
            format!("e-transform-isomorphism [{name}]"),
            e_transform_defect(hm, op),
        ));
        report.push(Check::from_outcome(
            format!("exp-identity [{name}]"),
            hm.sol1()
                .and_then(|s1| hm.compose(op, &s1))
                .and_then(|ts| same(hm, hm.exp_sharp(&ts), Ok(op.clone()))),
        ));
        report.push(Check::from_outcome(
            format!("composition-grading [{name}]"),
            hm.sol1()
                .and_then(|s1| hm.compose(op, &s1))
                .and_then(|ts| composition_grading_defect(hm, &ts, 3)),
        ));
        report.push(Check::from_outcome(
            format!("post-hopf [{name}]"),
            post_hopf_defect(hm, op, lie),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cocycles: Vec<CoalgMap> = (0..3).map(|_| hm.random_cocycle(&mut rng, 2)).collect();
    report.push(Check::from_outcome(
        "composition-grading [random cocycle]",
        composition_grading_defect(hm, &cocycles[0], 3),
    ));
    report.push(Check::from_outcome(
        "exp-sharp-inverse [random cocycle]",
        hm.sol1()
            .and_then(|s1| hm.compose(&cocycles[0], &s1))
            .and_then(|ts| hm.exp_sharp(&ts))
            .and_then(|big| sharp_inverse_defect(hm, &big)),
    ));
    report.push(Check::from_outcome(
        "post-lie",
        post_lie_defect(hm, &cocycles[0], &cocycles[1], &cocycles[2]),
    ));
    let group: Result<Vec<CoalgMap>> = cocycles.iter().map(|c| hm.exp_sharp(c)).collect();
    match group.and_then(|g| group_defects(hm, &g[0], &g[1], &g[2])) {
        Ok([g, m]) => {
            report.push(Check::verdict("guin-oudom-group", g));
            report.push(Check::verdict("e-inverse-morphism", m));
        }
        Err(e) => report.push(Check::fail("guin-oudom-group", e.to_string())),
    }
    report
}

/// Sample of `exp_#(u · (o ∘ sol_1))` for `o` in `{s, t}` and small rational `u`.
fn ybe_sample(inst: &HopfInstance, rng: &mut ChaCha8Rng) -> Result<CoalgMap> {
    use rand::Rng;
    let hm = &inst.hm;
    let op = if rng.gen_bool(0.5) { &inst.s } else { &inst.t };
    let u = qf(rng.gen_range(-3..=3), rng.gen_range(1..=2));
    let s1 = hm.sol1()?;
    hm.exp_sharp(&hm.lie_after(&op.scale(&u), &s1)?)
}

/// Braid relation for `R_#` on `triples` sampled operator triples.
pub fn verify_ybe(inst: &HopfInstance, triples: usize, seed: u64) -> Report {
    let mut report = Report::new(format!("{}/ybe", inst.name));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..triples {
        let outcome = (|| {
            let x = ybe_sample(inst, &mut rng)?;
            let y = ybe_sample(inst, &mut rng)?;
            let z = ybe_sample(inst, &mut rng)?;
            braid_defect(&inst.hm, &x, &y, &z)
        })();
        report.push(Check::from_outcome(
            format!("braid triple {}", k + 1),
            outcome,
        ));
    }
    report
}

/// `gl2 = upper ⊕ strictly lower` with `r = -P_upper`, `r̂ = -P_lower`.
pub fn classical_sts(degree: usize) -> Report {
    let mut report = Report::new("classical-sts");
    let g = LieAlgebra::gl(2);
    let module = LieModule::adjoint(g);
    // Basis E00, E01, E10, E11; E10 spans the strictly lower part.
    let proj = |keep: &[usize]| {
        let images = (0..4)
            .map(|i| {
                if keep.contains(&i) {
                    vec![(i, q(-1))]
                } else {
                    Vec::new()
                }
            })
            .collect();
        LieMap::new(4, 4, images).expect("projector shape")
    };
    let r = proj(&[0, 1, 3]);
    let r_hat = proj(&[2]);
    report.push(Check::from_outcome(
        "rota-baxter-weight-one",
        module
            .check_o_lie(&r)
            .and_then(|_| module.check_o_lie(&r_hat))
            .map(|_| None),
    ));
    report.push(Check::from_outcome(
        "matching-lie",
        module.check_matching(&r_hat, &r).map(|_| None),
    ));
    let hm = match HopfModule::new(module, degree) {
        Ok(hm) => hm,
        Err(e) => {
            report.push(Check::fail("envelope", e.to_string()));
            return report;
        }
    };
    let outcome = (|| -> Result<[Option<String>; 3]> {
        let big_r = hm.go_extend(&r)?.into_map();
        let big_r_hat = hm.go_extend(&r_hat)?.into_map();
        let product = hm.sharp(&big_r_hat, &big_r)?;
        let antipode = hm.antipode();
        let sts = product
            .first_difference(&as_target(&antipode))
            .map(|i| hm.source().basis()[i].to_string());
        // X = S(R(X₍₁₎)) S(R̂(e_R^{-1}(X₍₂₎))), the antipode of the identity
        // S(X) = R̂(e_R^{-1}(X₍₁₎)) R(X₍₂₎).
        let plus = antipode_after(&hm, &hm.compose(&big_r_hat, &hm.e_inverse(&big_r)?)?);
        let minus = antipode_after(&hm, &big_r);
        let factor = hm.convolve(&minus, &plus)?;
        let linear = factor
            .first_difference(&as_target(&hm.identity()))
            .map(|i| hm.source().basis()[i].to_string());
        let mut grouplike = None;
        for f in [&plus, &minus] {
            if let Some(i) = hm.coalgebra_defect(f)? {
                grouplike = Some(format!(
                    "factor map not a coalgebra map at {}",
                    hm.source().basis()[i]
                ));
            }
        }
        for coords in [[1, 0, 0, 0], [0, 1, 1, 0], [1, -2, 3, 1]] {
            let x: Vec<Q> = coords.iter().map(|&c| q(c)).collect();
            let e = truncated_exp(&hm, &x);
            let mut value = UElem::zero();
            for (m, c) in e.terms() {
                let mut split = UElem::zero();
                for (l, rr, k) in hm.source().coproduct_mono(m) {
                    let (li, ri) = (
                        hm.source().index_of(&l).expect("basis"),
                        hm.source().index_of(&rr).expect("basis"),
                    );
                    split.add_scaled(&k, &hm.target().mul(minus.image(li), plus.image(ri)));
                }
                value.add_scaled(c, &split);
            }
            if value != e && grouplike.is_none() {
                grouplike = Some(format!("exp({coords:?})"));
            }
        }
        Ok([sts, linear, grouplike])
    })();
    match outcome {
        Ok([sts, linear, grouplike]) => {
            report.push(Check::verdict("r-hat-sharp-r-is-antipode", sts));
            report.push(Check::verdict("factorization", linear));
            report.push(Check::verdict("group-like-factorization", grouplike));
        }
        Err(e) => report.push(Check::fail("r-hat-sharp-r-is-antipode", e.to_string())),
    }
    report
}

/// Source-valued map viewed in `U(a)`; only meaningful when `a = g`.
fn as_target(f: &CoalgMap) -> CoalgMap {
    f.map_images(Codomain::Target, UElem::clone)
}

/// `Σ_{k ≤ D} x^k / k!`.
fn truncated_exp(hm: &HopfModule, x: &[Q]) -> UElem {
    let gen = UElem::from_lie(x);
    let mut power = UElem::one();
    let mut sum = UElem::one();
    for k in 1..=hm.degree() {
        power = hm.source().mul(&power, &gen).scale(&(one() / q(k as i64)));
        sum = sum.add(&power);
    }
    sum
}

/// Compare `[ρ]` and `[-λ]` on products `p_1 .. p_n` of the given vectors
/// with the set-partition closed forms. Returns one check per `n`.
pub fn partition_formula(
    op: &EndOperadModule,
    degree: usize,
    vectors: &[Vec<Q>],
) -> Result<Report> {
    let hm = HopfModule::new(op.module.clone(), degree)?;
    let rho = hm.go_extend(&op.t)?.into_map();
    let minus_lambda = hm.go_extend(&op.s)?.into_map();
    let lambda = op.lambda();
    let mut report = Report::new("partition-formula");
    for n in 1..=degree.min(vectors.len()) {
        let ps = &vectors[..n];
        let word = ps.iter().fold(UElem::one(), |acc, p| {
            hm.source().mul(&acc, &UElem::from_lie(p))
        });
        let (mut want_rho, mut want_lambda) = (UElem::zero(), UElem::zero());
        for blocks in set_partitions(n) {
            let (mut pr, mut pl) = (UElem::one(), UElem::one());
            for b in &blocks {
                let fwd = b
                    .iter()
                    .skip(1)
                    .fold(ps[b[0]].clone(), |acc, &j| op.dot(&acc, &ps[j]));
                let last = *b.last().expect("nonempty block");
                let back = b
                    .iter()
                    .rev()
                    .skip(1)
                    .fold(ps[last].clone(), |acc, &j| op.dot(&acc, &ps[j]));
                pr = hm.target().mul(&pr, &UElem::from_lie(&op.t.apply(&fwd)));
                pl = hm.target().mul(&pl, &UElem::from_lie(&lambda.apply(&back)));
            }
            want_rho = want_rho.add(&pr);
            want_lambda = want_lambda.add(&pl);
        }
        // [-λ] = (-1)^n [λ] on a length-n word when g is abelian.
        let sign = if n % 2 == 0 { q(1) } else { q(-1) };
        let want_minus_lambda = want_lambda.scale(&sign);
        let got_rho = hm.eval(&rho, &word)?;
        let got_ml = hm.eval(&minus_lambda, &word)?;
        let w =
            |got: &UElem, want: &UElem| (got != want).then(|| format!("n={n}: {got} vs {want}"));
        report.push(Check::verdict(format!("rho n={n}"), w(&got_rho, &want_rho)));
        report.push(Check::verdict(
            format!("minus-lambda n={n}"),
            w(&got_ml, &want_minus_lambda),
        ));
    }
    Ok(report)
}

fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(i: usize, n: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(i);
            rec(i + 1, n, cur, out);
            cur[b].pop();
        }
        cur.push(vec![i]);
        rec(i + 1, n, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    rec(0, n, &mut Vec::new(), &mut out);
    out
}

/// Criteria of the Hopf layer: both end-operad instances, the classical
/// factorization on `gl2` to degree 4 and the braid relation.
pub fn hopf_suite() -> Report {
    let mut report = Report::new("hopf");
    for name in ["end-operad-1-3", "end-operad-diag2-2"] {
        match end_operad_instance(name) {
            Ok(inst) => report.absorb(name, verify_instance(&inst, 11)),
            Err(e) => report.push(Check::fail(name, e.to_string())),
        }
    }
    report.absorb("classical", classical_sts(4));
    match end_operad_instance("end-operad-1-3") {
        Ok(inst) => report.absorb("end-operad-1-3", verify_ybe(&inst, 5, 23)),
        Err(e) => report.push(Check::fail("ybe", e.to_string())),
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_green(report: &Report) {
        let bad: Vec<_> = report.failures().collect();
        assert!(bad.is_empty(), "{bad:#?}");
    }

    #[test]
    fn scalar_end_operad_instance_is_green() {
        let inst = end_operad_instance("end-operad-1-3").unwrap();
        assert_green(&verify_instance(&inst, 1));
    }

    #[test]
    fn diagonal_end_operad_instance_is_green() {
        let inst = end_operad_instance("end-operad-diag2-2").unwrap();
        assert_green(&verify_instance(&inst, 2));
    }

    #[test]
    fn classical_factorization_on_gl2() {
        assert_green(&classical_sts(3));
    }

    #[test]
    fn braid_relation_on_samples() {
        let inst = end_operad_instance("end-operad-1-3").unwrap();
        assert_green(&verify_ybe(&inst, 2, 5));
    }

    #[test]
    fn inverse_commutation_fails_on_scalar_operad() {
        let inst = end_operad_instance("end-operad-1-3").unwrap();
        let report = inverse_commutation(&inst);
        assert_eq!(report.failures().count(), 2);
        assert!(report.checks[0].witnesses[0].starts_with("x0x0"));
    }

    #[test]
    fn reversed_classical_factorization_is_wrong() {
        let report = classical_sts(2);
        assert!(report.passed());
        let hm = HopfModule::new(LieModule::adjoint(LieAlgebra::gl(2)), 2).unwrap();
        let r = LieMap::new(
            4,
            4,
            vec![vec![(0, q(-1))], vec![(1, q(-1))], vec![], vec![(3, q(-1))]],
        )
        .unwrap();
        let r_hat = LieMap::new(4, 4, vec![vec![], vec![], vec![(2, q(-1))], vec![]]).unwrap();
        let big_r = hm.go_extend(&r).unwrap().into_map();
        let plus = antipode_after(
            &hm,
            &hm.compose(
                &hm.go_extend(&r_hat).unwrap().into_map(),
                &hm.e_inverse(&big_r).unwrap(),
            )
            .unwrap(),
        );
        let minus = antipode_after(&hm, &big_r);
        assert_ne!(
            hm.convolve(&plus, &minus).unwrap(),
            as_target(&hm.identity())
        );
    }

    #[test]
    fn unknown_instance_is_an_error() {
        assert!(end_operad_instance("end-operad-9-9").is_err());
    }

    #[test]
    fn compositions_are_counted() {
        assert_eq!(compositions(3).len(), 4);
        assert_eq!(set_partitions(3).len(), 5);
    }
}
