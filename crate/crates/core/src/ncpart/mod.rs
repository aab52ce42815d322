//! Noncrossing partitions and the brute-force oracles built on them.
//!
//! Everything in this module is computed directly from definitions, so it
//! can serve as ground truth for the series-level transforms in
//! [`crate::prob`].

mod cumulants;
mod mixed;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use thiserror::Error;

pub use cumulants::{
    conditional_cumulants_nc, cumulants_from_moments_nc, kappa_eval, moments_from_cumulants_nc,
    CumulantFamily,
};
#[cfg(test)]
pub(crate) use mixed::mixed_moment_with as mixed_moment_with_shift;
pub use mixed::{
    mixed_moment, mixed_moment_nc, ColoredWord, Independence, MixedValue, VariableData,
};

/// Largest size accepted by [`enumerate_nc`].
pub const MAX_NC_SIZE: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NcError {
    #[error("partition size {0} exceeds the cap of {MAX_NC_SIZE}")]
    SizeTooLarge(usize),
    #[error("cumulant of arity {0} is not available in the family")]
    ArityMissing(usize),
    #[error("mean is not the unit of B")]
    MeanNotUnit,
    #[error("word of length {0} exceeds the cap of {MAX_NC_SIZE}")]
    WordTooLong(usize),
    #[error("moment data is inconsistent with a B-bimodule distribution at degree {0}")]
    MomentsInconsistent(usize),
    #[error("moments of degree {needed} requested but only {available} available")]
    OrderTooLow { needed: usize, available: usize },
    #[error("free oracle routes disagree on a word of length {0}")]
    RouteMismatch(usize),
    #[error("variable {0} has no distribution")]
    UnknownVariable(usize),
    #[error(transparent)]
    Series(#[from] crate::series::SeriesError),
}

/// A noncrossing partition of `{0, .., n-1}` (printed 1-based).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NCPartition {
    n: usize,
    /// Blocks sorted internally and by minimum.
    blocks: Vec<Vec<usize>>,
    /// Innermost enclosing block of each block, if any.
    parent: Vec<Option<usize>>,
}

impl fmt::Debug for NCPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for NCPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            let parts: Vec<String> = b.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "{{{}}}", parts.join(","))?;
        }
        write!(f, "}}")
    }
}

impl NCPartition {
    /// Build from 0-based blocks; returns `None` if they do not form a
    /// noncrossing partition of `0..n`.
    pub fn from_blocks(n: usize, blocks: Vec<Vec<usize>>) -> Option<Self> {
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .filter(|b| !b.is_empty())
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort();
        let mut seen = vec![false; n];
        for b in &blocks {
            for &x in b {
                if x >= n || seen[x] {
                    return None;
                }
                seen[x] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return None;
        }
        let p = Self::with_forest(n, blocks);
        if p.has_crossing() {
            return None;
        }
        Some(p)
    }

    /// 1-based convenience constructor.
    pub fn from_one_based(n: usize, blocks: &[&[usize]]) -> Option<Self> {
        Self::from_blocks(
            n,
            blocks
                .iter()
                .map(|b| b.iter().map(|x| x - 1).collect())
                .collect(),
        )
    }

    fn with_forest(n: usize, blocks: Vec<Vec<usize>>) -> Self {
        let parent = (0..blocks.len())
            .map(|i| {
                let (lo, hi) = (blocks[i][0], *blocks[i].last().unwrap());
                (0..blocks.len())
                    .filter(|&j| j != i)
                    .filter(|&j| {
                        let b = &blocks[j];
                        b[0] < lo
                            && hi < *b.last().unwrap()
                            && b.iter().any(|&x| x < lo)
                            && b.iter().any(|&x| x > hi)
                    })
                    .filter(|&j| {
                        // Innermost: the gap of block j that holds block i.
                        blocks[j].windows(2).any(|w| w[0] < lo && hi < w[1])
                    })
                    .max_by_key(|&j| blocks[j][0])
            })
            .collect();
        Self { n, blocks, parent }
    }

    fn has_crossing(&self) -> bool {
        let mut owner = vec![0usize; self.n];
        for (i, b) in self.blocks.iter().enumerate() {
            for &x in b {
                owner[x] = i;
            }
        }
        for a in 0..self.n {
            for b in a + 1..self.n {
                if owner[a] == owner[b] {
                    continue;
                }
                for c in b + 1..self.n {
                    if owner[c] != owner[a] {
                        continue;
                    }
                    for d in c + 1..self.n {
                        if owner[d] == owner[b] {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Innermost enclosing block for each block (`None` for outer blocks).
    pub fn nesting_forest(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn is_outer(&self, block: usize) -> bool {
        self.parent[block].is_none()
    }

    /// First and last point lie in the same block.
    pub fn is_irreducible(&self) -> bool {
        self.n == 0 || self.block_of(0) == self.block_of(self.n - 1)
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(&x))
            .expect("point in range")
    }

    /// Block index for every point.
    pub fn owners(&self) -> Vec<usize> {
        let mut owner = vec![0; self.n];
        for (i, b) in self.blocks.iter().enumerate() {
            for &x in b {
                owner[x] = i;
            }
        }
        owner
    }
}

/// Kreweras complement, computed as the permutation `pi^{-1} o gamma` with
/// `gamma = (1 2 .. n)` and the blocks of `pi` read as increasing cycles.
pub fn kreweras(pi: &NCPartition) -> NCPartition {
    let n = pi.n;
    let mut pi_inv = vec![0usize; n];
    for b in &pi.blocks {
        for (i, &x) in b.iter().enumerate() {
            let next = b[(i + 1) % b.len()];
            pi_inv[next] = x;
        }
    }
    let sigma: Vec<usize> = (0..n).map(|x| pi_inv[(x + 1) % n]).collect();
    let mut seen = vec![false; n];
    let mut blocks = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push(x);
            x = sigma[x];
        }
        blocks.push(cycle);
    }
    let kr = NCPartition::from_blocks(n, blocks).expect("Kreweras complement is noncrossing");
    assert_eq!(
        pi.num_blocks() + kr.num_blocks(),
        n + 1,
        "Kreweras size complement"
    );
    kr
}

fn nc_cache() -> &'static Mutex<HashMap<usize, std::sync::Arc<Vec<NCPartition>>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, std::sync::Arc<Vec<NCPartition>>>>> =
        OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// All noncrossing partitions of `[n]` in a fixed order: by the block of
/// `1`, then recursively by the gaps it leaves.
pub fn enumerate_nc(n: usize) -> Result<std::sync::Arc<Vec<NCPartition>>, NcError> {
    if n > MAX_NC_SIZE {
        return Err(NcError::SizeTooLarge(n));
    }
    if let Some(hit) = nc_cache().lock().expect("cache lock").get(&n) {
        return Ok(hit.clone());
    }
    let raw = raw_nc(0, n);
    let parts: Vec<NCPartition> = raw
        .into_iter()
        .map(|b| NCPartition::from_blocks(n, b).expect("generated partition is noncrossing"))
        .collect();
    let parts = std::sync::Arc::new(parts);
    nc_cache()
        .lock()
        .expect("cache lock")
        .insert(n, parts.clone());
    Ok(parts)
}

/// Noncrossing partitions of the interval `start..start + len` as block lists.
fn raw_nc(start: usize, len: usize) -> Vec<Vec<Vec<usize>>> {
    if len == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let rest = len - 1;
    // Choose the other members of the block containing `start` by bitmask.
    for mask in 0u32..(1u32 << rest) {
        let mut block = vec![start];
        for bit in 0..rest {
            if mask & (1 << bit) != 0 {
                block.push(start + 1 + bit);
            }
        }
        // Gaps between consecutive members, then the tail after the last.
        let mut gaps = Vec::new();
        for w in block.windows(2) {
            gaps.push((w[0] + 1, w[1] - w[0] - 1));
        }
        let last = *block.last().unwrap();
        gaps.push((last + 1, start + len - last - 1));
        let mut partial: Vec<Vec<Vec<usize>>> = vec![vec![block.clone()]];
        for (gs, gl) in gaps {
            let options = raw_nc(gs, gl);
            let mut next = Vec::with_capacity(partial.len() * options.len());
            for p in &partial {
                for o in &options {
                    let mut q = p.clone();
                    q.extend(o.iter().cloned());
                    next.push(q);
                }
            }
            partial = next;
        }
        out.extend(partial);
    }
    out
}

#[cfg(test)]
mod tests;
