//! Chen-Fliess series: tuples of truncated formal series on words over
//! `x0 .. xm`, with shuffle, composition, multiplicative feedback `⟲`, the
//! `⋆` group and the closed-loop product `@`.
//!
//! Every operation is exact at the truncation length: coefficients of words
//! of length at most `L` only ever depend on input words of length at most `L`.

mod verify;

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::rational::{fmt_q, random_q, Q};

pub use verify::{fliess_suite, verify_fliess, FliessInstance};

/// Longest word length accepted by [`WordSeries`].
pub const MAX_WORD_LEN: usize = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FliessError {
    #[error("alphabets differ: {0} vs {1} letters")]
    AlphabetMismatch(usize, usize),
    #[error("expected a tuple of {expected} series, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("word length {0} exceeds the cap {MAX_WORD_LEN}")]
    TooLong(usize),
    #[error("component {0} has constant term {1}, not 1")]
    NotGroupLike(usize, String),
    #[error("component {0} has zero constant term and no shuffle inverse")]
    NotInvertible(usize),
    #[error("malformed word `{0}`")]
    BadWord(String),
    #[error("letter x{0} outside an alphabet of {1} letters")]
    LetterOutOfRange(usize, usize),
    #[error("a series tuple needs at least one component and one letter")]
    Empty,
}

pub type Result<T> = std::result::Result<T, FliessError>;

/// Word over `x0 .. xm`, as letter indices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn new(letters: Vec<u8>) -> Self {
        Self(letters)
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn prepend(&self, letter: u8) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(letter);
        v.extend_from_slice(&self.0);
        Self(v)
    }

    /// Parse `x0x1x0`; the empty string and `1` are the empty word.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Self::empty());
        }
        let bad = || FliessError::BadWord(s.to_string());
        let mut letters = Vec::new();
        for part in s.strip_prefix('x').ok_or_else(bad)?.split('x') {
            letters.push(part.parse::<u8>().map_err(|_| bad())?);
        }
        Ok(Self(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|l| write!(f, "x{l}"))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("1")
        } else {
            fmt::Display::fmt(self, f)
        }
    }
}

type Series = BTreeMap<Word, Q>;

fn add_term(s: &mut Series, w: Word, c: Q) {
    if c.is_zero() {
        return;
    }
    match s.entry(w) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Shuffles of `u` and `v` with multiplicities.
fn shuffle_words(u: &[u8], v: &[u8]) -> BTreeMap<Word, u64> {
    let mut out = BTreeMap::new();
    fn rec(u: &[u8], v: &[u8], prefix: &mut Vec<u8>, out: &mut BTreeMap<Word, u64>) {
        match (u.split_first(), v.split_first()) {
            (None, _) | (_, None) => {
                let mut w = prefix.clone();
                w.extend_from_slice(u);
                w.extend_from_slice(v);
                *out.entry(Word(w)).or_insert(0) += 1;
            }
            (Some((&a, ur)), Some((&b, vr))) => {
                prefix.push(a);
                rec(ur, v, prefix, out);
                prefix.pop();
                prefix.push(b);
                rec(u, vr, prefix, out);
                prefix.pop();
            }
        }
    }
    rec(u, v, &mut Vec::new(), &mut out);
    out
}

fn shuffle_series(a: &Series, b: &Series, max_len: usize) -> Series {
    let mut out = Series::new();
    for (u, x) in a {
        for (v, y) in b.iter().filter(|(v, _)| u.len() + v.len() <= max_len) {
            let xy = x * y;
            for (w, n) in shuffle_words(&u.0, &v.0) {
                add_term(&mut out, w, &xy * Q::from_integer((n as i64).into()));
            }
        }
    }
    out
}

fn prepend_series(letter: u8, s: &Series, max_len: usize) -> Series {
    s.iter()
        .filter(|(w, _)| w.len() < max_len)
        .map(|(w, c)| (w.prepend(letter), c.clone()))
        .collect()
}

/// `Σ_η (s, η) op(η)(1)` where `op` acts letter by letter from the right:
/// `op(l η)(1) = step(l, op(η)(1))`. Suffix values are memoized.
fn substitute(s: &Series, step: &dyn Fn(u8, &Series) -> Series) -> Series {
    let mut memo: HashMap<Word, Series> = HashMap::new();
    memo.insert(Word::empty(), Series::from([(Word::empty(), Q::one())]));
    fn value(
        w: &Word,
        memo: &mut HashMap<Word, Series>,
        step: &dyn Fn(u8, &Series) -> Series,
    ) -> Series {
        if let Some(v) = memo.get(w) {
            return v.clone();
        }
        let tail = Word(w.0[1..].to_vec());
        let inner = value(&tail, memo, step);
        let v = step(w.0[0], &inner);
        memo.insert(w.clone(), v.clone());
        v
    }
    let mut out = Series::new();
    for (w, c) in s {
        for (u, d) in value(w, &mut memo, step) {
            add_term(&mut out, u, c * d);
        }
    }
    out
}

/// A `q`-tuple of series on `letters` letters, truncated at length `max_len`.
#[derive(Clone, PartialEq, Eq)]
pub struct WordSeries {
    letters: usize,
    max_len: usize,
    comps: Vec<Series>,
}

impl fmt::Debug for WordSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "WordSeries({} letters, L={}) ",
            self.letters, self.max_len
        )?;
        f.debug_list().entries(self.comps.iter()).finish()
    }
}

impl fmt::Display for WordSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, comp) in self.comps.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            if comp.is_empty() {
                f.write_str("0")?;
            }
            for (k, (w, c)) in comp.iter().enumerate() {
                if k > 0 {
                    f.write_str(" + ")?;
                }
                write!(f, "{}*{:?}", fmt_q(c), w)?;
            }
        }
        Ok(())
    }
}

impl WordSeries {
    /// Series from `(word, coefficient)` terms per component. Words longer
    /// than `max_len` are dropped.
    pub fn new(letters: usize, max_len: usize, terms: Vec<Vec<(Word, Q)>>) -> Result<Self> {
        if letters == 0 || terms.is_empty() {
            return Err(FliessError::Empty);
        }
        if max_len > MAX_WORD_LEN {
            return Err(FliessError::TooLong(max_len));
        }
        let mut comps = Vec::with_capacity(terms.len());
        for comp in terms {
            let mut s = Series::new();
            for (w, c) in comp {
                if let Some(&l) = w.0.iter().find(|&&l| l as usize >= letters) {
                    return Err(FliessError::LetterOutOfRange(l as usize, letters));
                }
                if w.len() <= max_len {
                    add_term(&mut s, w, c);
                }
            }
            comps.push(s);
        }
        Ok(Self {
            letters,
            max_len,
            comps,
        })
    }

    pub fn zero(letters: usize, max_len: usize, arity: usize) -> Self {
        Self {
            letters,
            max_len,
            comps: vec![Series::new(); arity],
        }
    }

    /// Every component equal to the empty word; the unit of `⧢` and `⋆`.
    pub fn one(letters: usize, max_len: usize, arity: usize) -> Self {
        Self {
            letters,
            max_len,
            comps: vec![Series::from([(Word::empty(), Q::one())]); arity],
        }
    }

    /// Single series `c · w`.
    pub fn monomial(letters: usize, max_len: usize, w: Word, c: Q) -> Result<Self> {
        Self::new(letters, max_len, vec![vec![(w, c)]])
    }

    /// Random tuple with every word present and small rational coefficients.
    /// `constant` fixes the empty-word coefficient when given.
    pub fn random<R: Rng + ?Sized>(
        rng: &mut R,
        letters: usize,
        max_len: usize,
        arity: usize,
        constant: Option<&Q>,
    ) -> Self {
        let words = all_words(letters, max_len);
        let comps = (0..arity)
            .map(|_| {
                let mut s = Series::new();
                for w in &words {
                    let c = match constant {
                        Some(c) if w.is_empty() => c.clone(),
                        _ => random_q(rng, 2, 2),
                    };
                    add_term(&mut s, w.clone(), c);
                }
                s
            })
            .collect();
        Self {
            letters,
            max_len,
            comps,
        }
    }

    pub fn letters(&self) -> usize {
        self.letters
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn arity(&self) -> usize {
        self.comps.len()
    }

    pub fn component(&self, i: usize) -> impl Iterator<Item = (&Word, &Q)> {
        self.comps[i].iter()
    }

    pub fn coeff(&self, i: usize, w: &Word) -> Q {
        self.comps[i].get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant(&self, i: usize) -> Q {
        self.coeff(i, &Word::empty())
    }

    /// Single component as a one-tuple.
    pub fn project(&self, i: usize) -> Self {
        Self {
            letters: self.letters,
            max_len: self.max_len,
            comps: vec![self.comps[i].clone()],
        }
    }

    pub fn truncate(&self, max_len: usize) -> Self {
        let max_len = max_len.min(self.max_len);
        let comps = self
            .comps
            .iter()
            .map(|s| {
                s.iter()
                    .filter(|(w, _)| w.len() <= max_len)
                    .map(|(w, c)| (w.clone(), c.clone()))
                    .collect()
            })
            .collect();
        Self {
            letters: self.letters,
            max_len,
            comps,
        }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.letters != other.letters {
            return Err(FliessError::AlphabetMismatch(self.letters, other.letters));
        }
        if self.arity() != other.arity() {
            return Err(FliessError::ArityMismatch {
                expected: self.arity(),
                found: other.arity(),
            });
        }
        Ok(())
    }

    fn zip(&self, other: &Self, f: impl Fn(&Series, &Series, usize) -> Series) -> Result<Self> {
        self.same_shape(other)?;
        let max_len = self.max_len.min(other.max_len);
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| f(a, b, max_len))
            .collect();
        Ok(Self {
            letters: self.letters,
            max_len,
            comps,
        }
        .truncate(max_len))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b, _| {
            let mut s = a.clone();
            b.iter()
                .for_each(|(w, c)| add_term(&mut s, w.clone(), c.clone()));
            s
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Self {
        let comps = self
            .comps
            .iter()
            .map(|s| {
                s.iter()
                    .map(|(w, x)| (w.clone(), x * c))
                    .filter(|(_, x)| !x.is_zero())
                    .collect()
            })
            .collect();
        Self {
            letters: self.letters,
            max_len: self.max_len,
            comps,
        }
    }

    /// Componentwise shuffle product.
    pub fn shuffle(&self, other: &Self) -> Result<Self> {
        self.zip(other, shuffle_series)
    }

    /// Componentwise inverse for `⧢`; needs nonzero constant terms.
    pub fn shuffle_inverse(&self) -> Result<Self> {
        let mut comps = Vec::with_capacity(self.arity());
        for (i, s) in self.comps.iter().enumerate() {
            let c0 = s
                .get(&Word::empty())
                .cloned()
                .ok_or(FliessError::NotInvertible(i))?;
            // s = c0 (1 - h) with h free of constant term.
            let mut h = Series::new();
            for (w, c) in s.iter().filter(|(w, _)| !w.is_empty()) {
                add_term(&mut h, w.clone(), -c / &c0);
            }
            let mut power = Series::from([(Word::empty(), Q::one() / &c0)]);
            let mut sum = power.clone();
            for _ in 0..self.max_len {
                power = shuffle_series(&power, &h, self.max_len);
                power
                    .iter()
                    .for_each(|(w, c)| add_term(&mut sum, w.clone(), c.clone()));
            }
            comps.push(sum);
        }
        Ok(Self {
            letters: self.letters,
            max_len: self.max_len,
            comps,
        })
    }

    /// `c ∘ d`: `c` on `ℓ + 1` letters, `d` an `ℓ`-tuple on `X`. Letter `x'_0`
    /// sends `e` to `x0 e` and `x'_i` sends `e` to `x0 (d_i ⧢ e)`.
    pub fn compose(&self, d: &Self) -> Result<Self> {
        if self.letters != d.arity() + 1 {
            return Err(FliessError::ArityMismatch {
                expected: self.letters - 1,
                found: d.arity(),
            });
        }
        let max_len = self.max_len.min(d.max_len);
        let step = |l: u8, e: &Series| -> Series {
            if l == 0 {
                prepend_series(0, e, max_len)
            } else {
                prepend_series(
                    0,
                    &shuffle_series(&d.comps[l as usize - 1], e, max_len.saturating_sub(1)),
                    max_len,
                )
            }
        };
        let comps = self.comps.iter().map(|c| substitute(c, &step)).collect();
        Ok(Self {
            letters: d.letters,
            max_len,
            comps,
        }
        .truncate(max_len))
    }

    /// `e ⟲ f` with `f` an `m`-tuple on `x0 .. xm`: `x0` sends `t` to `x0 t`
    /// and `x_i` sends `t` to `x_i (f_i ⧢ t)`.
    pub fn feedback(&self, f: &Self) -> Result<Self> {
        if self.letters != f.letters {
            return Err(FliessError::AlphabetMismatch(self.letters, f.letters));
        }
        if f.arity() + 1 != f.letters {
            return Err(FliessError::ArityMismatch {
                expected: f.letters - 1,
                found: f.arity(),
            });
        }
        let max_len = self.max_len.min(f.max_len);
        let step = |l: u8, t: &Series| -> Series {
            if l == 0 {
                prepend_series(0, t, max_len)
            } else {
                prepend_series(
                    l,
                    &shuffle_series(&f.comps[l as usize - 1], t, max_len.saturating_sub(1)),
                    max_len,
                )
            }
        };
        let comps = self.comps.iter().map(|c| substitute(c, &step)).collect();
        Ok(Self {
            letters: self.letters,
            max_len,
            comps,
        }
        .truncate(max_len))
    }

    /// `F ⋆ G = (F ⟲ G) ⧢ G`.
    pub fn star(&self, g: &Self) -> Result<Self> {
        self.feedback(g)?.shuffle(g)
    }

    fn check_group_like(&self) -> Result<()> {
        for i in 0..self.arity() {
            let c = self.constant(i);
            if !c.is_one() {
                return Err(FliessError::NotGroupLike(i, fmt_q(&c)));
            }
        }
        Ok(())
    }

    /// Inverse for `⋆` of a tuple with unit constant terms: the solution of
    /// `F ⟲ G = G^{⧢-1}`, found by recursion on word length.
    pub fn star_inverse(&self) -> Result<Self> {
        self.check_group_like()?;
        let target = self.shuffle_inverse()?;
        let mut f = target.clone();
        for _ in 0..=self.max_len {
            let excess = f.feedback(self)?.sub(&f)?;
            f = target.sub(&excess)?;
        }
        Ok(f)
    }

    /// Closed loop `c @ d`: the fixed point `y = c ⟲ (d ∘ y)`, for `c` a
    /// `k`-tuple on `m + 1` letters and `d` an `m`-tuple on `k + 1` letters.
    pub fn closed_loop(&self, d: &Self) -> Result<Self> {
        if d.letters != self.arity() + 1 {
            return Err(FliessError::ArityMismatch {
                expected: d.letters - 1,
                found: self.arity(),
            });
        }
        let mut y = self.clone();
        for _ in 0..=self.max_len {
            y = self.feedback(&d.compose(&y)?)?;
        }
        Ok(y)
    }

    /// Inverse of `c ↦ c @ d`: `y ↦ y ⟲ (d ∘ y)^{-1⋆}`.
    pub fn open_loop(&self, d: &Self) -> Result<Self> {
        self.feedback(&d.compose(self)?.star_inverse()?)
    }
}

/// Every word of length at most `max_len`, shortest first.
pub fn all_words(letters: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| (0..letters as u8).map(move |l| Word([w.0.as_slice(), &[l]].concat())))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

#[cfg(test)]
mod tests;
