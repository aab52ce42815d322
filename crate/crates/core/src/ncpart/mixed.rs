//! Mixed moments of independent variables, computed from the defining rules.
//!
//! Free and conditionally free values come from the centering expansion:
//! every alternating run is split as `p = (p - psi(p)) + psi(p)` and centered
//! products are evaluated by the factorization rule. Monotone values come from
//! extracting runs of the top variable. [`mixed_moment_nc`] gives the
//! partition-sum route for the free kinds.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::{AlgElement, BaseAlgebra};
use crate::series::MultiSeries;

use super::cumulants::{conditional_cumulants_nc, nested_value, CumulantFamily};
use super::{enumerate_nc, NcError, MAX_NC_SIZE};

/// Which independence relation joins the variables.
///
/// For the monotone kinds variables are ordered by index: runs of the
/// highest-index variable present are extracted first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Independence {
    Free,
    ConditionallyFree,
    Monotone,
    ConditionallyMonotone,
}

impl Independence {
    pub fn is_conditional(self) -> bool {
        matches!(
            self,
            Independence::ConditionallyFree | Independence::ConditionallyMonotone
        )
    }
}

/// Single-variable data: the two moment series `C(b1..bn) = state(x b1 .. x bn)`
/// and the matching cumulant family.
#[derive(Clone, Debug)]
pub struct VariableData {
    phi: MultiSeries,
    psi: MultiSeries,
    cumulants: CumulantFamily,
}

impl VariableData {
    /// From a pair of moment series (pass the same series twice for one state).
    pub fn from_moments(phi: &MultiSeries, psi: &MultiSeries) -> Result<Self, NcError> {
        let cumulants = conditional_cumulants_nc(phi, psi)?;
        let order = cumulants.order() + 1;
        Ok(Self {
            phi: phi.truncate(order),
            psi: psi.truncate(order),
            cumulants,
        })
    }

    pub fn from_cumulants(cumulants: CumulantFamily) -> Result<Self, NcError> {
        let phi = super::moments_from_cumulants_nc(&cumulants)?;
        let psi = super::moments_from_cumulants_nc(&CumulantFamily::new(cumulants.main().clone()))?;
        Ok(Self {
            phi,
            psi,
            cumulants,
        })
    }

    pub fn phi(&self) -> &MultiSeries {
        &self.phi
    }

    pub fn psi(&self) -> &MultiSeries {
        &self.psi
    }

    pub fn cumulants(&self) -> &CumulantFamily {
        &self.cumulants
    }

    pub fn order(&self) -> usize {
        self.phi.order()
    }

    pub fn algebra(&self) -> &Arc<BaseAlgebra> {
        self.phi.algebra()
    }
}

/// A word `c0 x_{v1} c1 x_{v2} c2 .. x_{vm} cm`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColoredWord {
    pub lead: AlgElement,
    pub letters: Vec<(usize, AlgElement)>,
}

impl ColoredWord {
    pub fn new(lead: AlgElement, letters: Vec<(usize, AlgElement)>) -> Self {
        Self { lead, letters }
    }

    /// All coefficients equal to the unit.
    pub fn plain(alg: &BaseAlgebra, vars: &[usize]) -> Self {
        Self {
            lead: alg.unit(),
            letters: vars.iter().map(|&v| (v, alg.unit())).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// Values of a word under both states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedValue {
    pub phi: AlgElement,
    pub psi: AlgElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Run {
    var: usize,
    coeffs: Vec<AlgElement>,
}

fn split_runs(letters: &[(usize, AlgElement)]) -> Vec<Run> {
    let mut runs: Vec<Run> = Vec::new();
    for (v, c) in letters {
        match runs.last_mut() {
            Some(r) if r.var == *v => r.coeffs.push(c.clone()),
            _ => runs.push(Run {
                var: *v,
                coeffs: vec![c.clone()],
            }),
        }
    }
    runs
}

/// Concatenate, merging adjacent runs of the same variable.
fn join_runs(mut left: Vec<Run>, right: impl IntoIterator<Item = Run>) -> Vec<Run> {
    for r in right {
        match left.last_mut() {
            Some(l) if l.var == r.var => l.coeffs.extend(r.coeffs),
            _ => left.push(r),
        }
    }
    left
}

#[derive(Clone, Debug)]
struct Pair {
    phi: AlgElement,
    psi: AlgElement,
}

struct Ctx<'a> {
    alg: &'a BaseAlgebra,
    vars: &'a [VariableData],
    single: HashMap<Run, Pair>,
    memo: HashMap<(Vec<Run>, usize), Pair>,
    mono: HashMap<Vec<Run>, Pair>,
    /// Runs stand for the shifted variables `x - 1`.
    shifted: bool,
}

impl<'a> Ctx<'a> {
    fn new(alg: &'a BaseAlgebra, vars: &'a [VariableData]) -> Self {
        Self {
            alg,
            vars,
            single: HashMap::new(),
            memo: HashMap::new(),
            mono: HashMap::new(),
            shifted: false,
        }
    }

    fn mul(&self, a: &AlgElement, b: &AlgElement) -> AlgElement {
        self.alg.mul_unchecked(a, b)
    }

    fn pair_left(&self, c: &AlgElement, p: &Pair) -> Pair {
        Pair {
            phi: self.mul(c, &p.phi),
            psi: self.mul(c, &p.psi),
        }
    }

    fn pair_right(&self, p: &Pair, c: &AlgElement) -> Pair {
        Pair {
            phi: self.mul(&p.phi, c),
            psi: self.mul(&p.psi, c),
        }
    }

    fn unit_pair(&self) -> Pair {
        Pair {
            phi: self.alg.unit(),
            psi: self.alg.unit(),
        }
    }

    fn run_value(&mut self, run: &Run) -> Pair {
        if let Some(hit) = self.single.get(run) {
            return hit.clone();
        }
        let data = &self.vars[run.var];
        let v = if self.shifted {
            let letters: Vec<(usize, AlgElement)> =
                run.coeffs.iter().map(|c| (run.var, c.clone())).collect();
            let mut phi = AlgElement::zero(self.alg.dim());
            let mut psi = phi.clone();
            for (lead, kept) in drop_letters(self.alg, &self.alg.unit(), &letters) {
                let coeffs: Vec<AlgElement> = kept.into_iter().map(|(_, c)| c).collect();
                let term_phi = self.mul(&lead, &data.phi.eval(&coeffs));
                let term_psi = self.mul(&lead, &data.psi.eval(&coeffs));
                let odd = (letters.len() - coeffs.len()) % 2 == 1;
                if odd {
                    phi = phi.sub(&term_phi);
                    psi = psi.sub(&term_psi);
                } else {
                    phi = phi.add(&term_phi);
                    psi = psi.add(&term_psi);
                }
            }
            Pair { phi, psi }
        } else {
            Pair {
                phi: data.phi.eval(&run.coeffs),
                psi: data.psi.eval(&run.coeffs),
            }
        };
        self.single.insert(run.clone(), v.clone());
        v
    }

    /// Values of `p1' .. pj' p_{j+1} .. pk` where the first `j` runs are centered.
    fn centered(&mut self, runs: &[Run], j: usize) -> Pair {
        let key = (runs.to_vec(), j);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let out = if runs.is_empty() {
            self.unit_pair()
        } else if j == runs.len() {
            let mut phi = self.alg.unit();
            for r in runs {
                let v = self.run_value(r);
                phi = self.mul(&phi, &v.phi.sub(&v.psi));
            }
            Pair {
                phi,
                psi: AlgElement::zero(self.alg.dim()),
            }
        } else {
            let split = self.centered(runs, j + 1);
            let c = self.run_value(&runs[j]).psi;
            let merged = self.attach(&runs[..j], &c, &runs[j + 1..]);
            Pair {
                phi: split.phi.add(&merged.phi),
                psi: split.psi.add(&merged.psi),
            }
        };
        self.memo.insert(key, out.clone());
        out
    }

    /// Values of `p1' .. pj' c r1 r2 ..` with all of `prefix` centered.
    fn attach(&mut self, prefix: &[Run], c: &AlgElement, rest: &[Run]) -> Pair {
        let j = prefix.len();
        if j == 0 {
            let v = self.centered(rest, 0);
            return self.pair_left(c, &v);
        }
        if rest.is_empty() {
            let v = self.centered(prefix, j);
            return self.pair_right(&v, c);
        }
        let mut last = prefix[j - 1].clone();
        let tail = last.coeffs.last_mut().expect("runs are nonempty");
        *tail = self.alg.mul_unchecked(tail, c);
        if last.var != rest[0].var {
            let mut runs = prefix[..j - 1].to_vec();
            runs.push(last);
            runs.extend_from_slice(rest);
            return self.centered(&runs, j);
        }
        // (p c)' r = p c r - psi(p c) r
        let mut runs = prefix[..j - 1].to_vec();
        let psi_last = self.run_value(&last).psi;
        let mut joined = last;
        joined.coeffs.extend(rest[0].coeffs.iter().cloned());
        runs.push(joined);
        runs.extend_from_slice(&rest[1..]);
        let whole = self.centered(&runs, j - 1);
        let sub = self.attach(&prefix[..j - 1], &psi_last, rest);
        Pair {
            phi: whole.phi.sub(&sub.phi),
            psi: whole.psi.sub(&sub.psi),
        }
    }

    /// Monotone-type extraction of runs of the top variable.
    fn monotone(&mut self, runs: &[Run]) -> Pair {
        if runs.is_empty() {
            return self.unit_pair();
        }
        if runs.len() == 1 {
            return self.run_value(&runs[0]);
        }
        if let Some(hit) = self.mono.get(runs) {
            return hit.clone();
        }
        let top = runs.iter().map(|r| r.var).max().expect("nonempty");
        let i = runs
            .iter()
            .position(|r| r.var == top)
            .expect("top var present");
        let p = self.run_value(&runs[i]);
        let left = &runs[..i];
        let right = &runs[i + 1..];
        // L psi(p) R, with psi(p) folded into the preceding coefficient.
        let replaced = self.fold_constant(left, &p.psi, right);
        let phi = if i == 0 {
            let r = self.monotone(right);
            self.mul(&p.phi, &r.phi)
        } else if i + 1 == runs.len() {
            let l = self.monotone(left);
            self.mul(&l.phi, &p.phi)
        } else {
            let l = self.monotone(left);
            let r = self.monotone(right);
            let centered = self.mul(&self.mul(&l.phi, &p.phi.sub(&p.psi)), &r.phi);
            centered.add(&replaced.phi)
        };
        let out = Pair {
            phi,
            psi: replaced.psi,
        };
        self.mono.insert(runs.to_vec(), out.clone());
        out
    }

    fn fold_constant(&mut self, left: &[Run], c: &AlgElement, right: &[Run]) -> Pair {
        if left.is_empty() {
            let v = self.monotone(right);
            return self.pair_left(c, &v);
        }
        let mut runs = left.to_vec();
        let last = runs.last_mut().expect("nonempty");
        let tail = last.coeffs.last_mut().expect("runs are nonempty");
        *tail = self.alg.mul_unchecked(tail, c);
        let runs = join_runs(runs, right.iter().cloned());
        self.monotone(&runs)
    }
}

/// Every way of replacing some letters by `1`, with the freed coefficient
/// folded into its left neighbour.
fn drop_letters(
    alg: &BaseAlgebra,
    lead: &AlgElement,
    letters: &[(usize, AlgElement)],
) -> Vec<(AlgElement, Vec<(usize, AlgElement)>)> {
    let m = letters.len();
    (0u32..(1u32 << m))
        .map(|mask| {
            let mut lead = lead.clone();
            let mut kept: Vec<(usize, AlgElement)> = Vec::new();
            for (i, (v, c)) in letters.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    kept.push((*v, c.clone()));
                } else if let Some(last) = kept.last_mut() {
                    last.1 = alg.mul_unchecked(&last.1, c);
                } else {
                    lead = alg.mul_unchecked(&lead, c);
                }
            }
            (lead, kept)
        })
        .collect()
}

fn check_word(vars: &[VariableData], word: &ColoredWord) -> Result<Arc<BaseAlgebra>, NcError> {
    if word.len() > MAX_NC_SIZE {
        return Err(NcError::WordTooLong(word.len()));
    }
    let alg = vars
        .first()
        .ok_or(NcError::UnknownVariable(0))?
        .algebra()
        .clone();
    for data in vars {
        if data.phi.eval(&[]) != alg.unit() || data.phi.eval(&[alg.unit()]) != alg.unit() {
            return Err(NcError::MeanNotUnit);
        }
    }
    for (v, _) in &word.letters {
        if *v >= vars.len() {
            return Err(NcError::UnknownVariable(*v));
        }
    }
    let longest = split_runs(&word.letters)
        .iter()
        .map(|r| r.coeffs.len())
        .max()
        .unwrap_or(0);
    let available = vars.iter().map(VariableData::order).min().unwrap_or(0);
    if longest > available {
        return Err(NcError::OrderTooLow {
            needed: longest,
            available,
        });
    }
    Ok(alg)
}

/// Values of `word` under both states of the joint distribution in which
/// the variables are independent of the given kind.
///
/// For the unconditional kinds each variable's `phi` data is ignored and
/// `psi` is used throughout.
pub fn mixed_moment(
    kind: Independence,
    vars: &[VariableData],
    word: &ColoredWord,
) -> Result<MixedValue, NcError> {
    mixed_moment_with(kind, vars, word, true)
}

/// `shift_monotone` selects whether the monotone rules act on the algebras
/// generated by `x - 1` (true) or by `x` itself.
pub(crate) fn mixed_moment_with(
    kind: Independence,
    vars: &[VariableData],
    word: &ColoredWord,
    shift_monotone: bool,
) -> Result<MixedValue, NcError> {
    let alg = check_word(vars, word)?;
    let effective: Vec<VariableData>;
    let vars = if kind.is_conditional() {
        vars
    } else {
        effective = vars
            .iter()
            .map(|v| VariableData {
                phi: v.psi.clone(),
                ..v.clone()
            })
            .collect();
        &effective
    };
    let mut ctx = Ctx::new(&alg, vars);
    let runs = split_runs(&word.letters);
    let v = match kind {
        Independence::Free | Independence::ConditionallyFree => ctx.centered(&runs, 0),
        Independence::Monotone | Independence::ConditionallyMonotone => {
            ctx.shifted = shift_monotone;
            let expanded = if shift_monotone {
                drop_letters(&alg, &word.lead, &word.letters)
            } else {
                vec![(word.lead.clone(), word.letters.clone())]
            };
            let mut acc = Pair {
                phi: AlgElement::zero(alg.dim()),
                psi: AlgElement::zero(alg.dim()),
            };
            for (lead, letters) in expanded {
                let v = ctx.monotone(&split_runs(&letters));
                let v = ctx.pair_left(&lead, &v);
                acc = Pair {
                    phi: acc.phi.add(&v.phi),
                    psi: acc.psi.add(&v.psi),
                };
            }
            acc
        }
    };
    let v = if matches!(
        kind,
        Independence::Monotone | Independence::ConditionallyMonotone
    ) {
        v
    } else {
        ctx.pair_left(&word.lead, &v)
    };
    Ok(MixedValue {
        phi: v.phi,
        psi: v.psi,
    })
}

/// Free-type values as sums over monochromatic noncrossing partitions, outer
/// blocks weighted by conditional cumulants.
pub fn mixed_moment_nc(
    kind: Independence,
    vars: &[VariableData],
    word: &ColoredWord,
) -> Result<MixedValue, NcError> {
    assert!(
        matches!(kind, Independence::Free | Independence::ConditionallyFree),
        "partition route covers the free kinds only"
    );
    let alg = check_word(vars, word)?;
    let colors: Vec<usize> = word.letters.iter().map(|(v, _)| *v).collect();
    let coeffs: Vec<AlgElement> = word.letters.iter().map(|(_, c)| c.clone()).collect();
    let mut phi = AlgElement::zero(alg.dim());
    let mut psi = AlgElement::zero(alg.dim());
    if coeffs.is_empty() {
        return Ok(MixedValue {
            phi: word.lead.clone(),
            psi: word.lead.clone(),
        });
    }
    let pick_phi = |pos: usize, outer: bool| {
        let fam = &vars[colors[pos]].cumulants;
        if outer && kind == Independence::ConditionallyFree {
            fam.outer().series()
        } else {
            fam.main().series()
        }
    };
    let pick_psi = |pos: usize, _: bool| vars[colors[pos]].cumulants.main().series();
    for pi in enumerate_nc(coeffs.len())?.iter() {
        if pi
            .blocks()
            .iter()
            .any(|b| b.iter().any(|&x| colors[x] != colors[b[0]]))
        {
            continue;
        }
        let owners = pi.owners();
        phi = phi.add(&nested_value(
            &alg,
            &owners,
            pi.blocks(),
            &coeffs,
            &pick_phi,
        ));
        psi = psi.add(&nested_value(
            &alg,
            &owners,
            pi.blocks(),
            &coeffs,
            &pick_psi,
        ));
    }
    Ok(MixedValue {
        phi: alg.mul_unchecked(&word.lead, &phi),
        psi: alg.mul_unchecked(&word.lead, &psi),
    })
}
