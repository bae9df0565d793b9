//! Set systems and the basic design constructions and checks.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::perm::PermGroup;
use crate::subset::{binom, for_each_subset};

/// A collection of distinct blocks on the points `{0..v-1}`.
///
/// Every block is stored sorted and the block list is kept in lexicographic
/// order, so two equal systems compare equal field by field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetSystem {
    v: usize,
    blocks: Vec<Vec<u32>>,
}

impl SetSystem {
    /// Normalizes and validates a block list. Duplicate blocks are an error.
    pub fn new(v: usize, blocks: Vec<Vec<u32>>) -> Result<Self> {
        let n = blocks.len();
        let s = Self::from_blocks_dedup(v, blocks)?;
        if s.blocks.len() != n {
            return Err(Error::DuplicateBlock);
        }
        Ok(s)
    }

    /// Like [`SetSystem::new`] but silently merges duplicate blocks.
    pub fn from_blocks_dedup(v: usize, mut blocks: Vec<Vec<u32>>) -> Result<Self> {
        for b in &mut blocks {
            b.sort_unstable();
            for w in b.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::RepeatedPoint(w[0]));
                }
            }
            if let Some(&x) = b.last() {
                if x as usize >= v {
                    return Err(Error::PointOutOfRange { point: x, degree: v });
                }
            }
        }
        blocks.sort_unstable();
        blocks.dedup();
        Ok(SetSystem { v, blocks })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn into_blocks(self) -> Vec<Vec<u32>> {
        self.blocks
    }

    /// The subsystem of blocks with exactly `k` points.
    pub fn blocks_of_size(&self, k: usize) -> SetSystem {
        SetSystem { v: self.v, blocks: self.blocks.iter().filter(|b| b.len() == k).cloned().collect() }
    }

    pub fn hexads(&self) -> SetSystem {
        self.blocks_of_size(6)
    }

    pub fn tetrads(&self) -> SetSystem {
        self.blocks_of_size(4)
    }

    /// Block size -> number of blocks of that size.
    pub fn size_distribution(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for b in &self.blocks {
            *m.entry(b.len()).or_insert(0) += 1;
        }
        m
    }

    /// Removes a block, returning whether it was present.
    pub fn remove_block(&mut self, block: &[u32]) -> bool {
        let mut b = block.to_vec();
        b.sort_unstable();
        match self.blocks.binary_search(&b) {
            Ok(i) => {
                self.blocks.remove(i);
                true
            }
            Err(_) => false,
        }
    }

    /// Number of blocks through each point.
    pub fn replication_profile(&self) -> Vec<usize> {
        let mut r = vec![0usize; self.v];
        for b in &self.blocks {
            for &x in b {
                r[x as usize] += 1;
            }
        }
        r
    }

    /// The common replication number, if every point lies in the same number of blocks.
    pub fn replication_number(&self) -> Option<usize> {
        let r = self.replication_profile();
        let first = *r.first()?;
        r.iter().all(|&x| x == first).then_some(first)
    }

    /// True iff the blocks form a 1-design (tactical configuration).
    pub fn is_tactical(&self) -> bool {
        self.replication_number().is_some()
    }

    /// `counts[x][y]` = number of blocks containing both `x` and `y`.
    pub fn pair_counts(&self) -> Vec<Vec<u32>> {
        let mut c = vec![vec![0u32; self.v]; self.v];
        for b in &self.blocks {
            for (i, &x) in b.iter().enumerate() {
                for &y in &b[i + 1..] {
                    c[x as usize][y as usize] += 1;
                    c[y as usize][x as usize] += 1;
                }
            }
        }
        c
    }

    /// Points represented as bitsets, one `Vec<u64>` word list per block.
    pub(crate) fn block_bitsets(&self) -> Vec<Vec<u64>> {
        let words = self.v.div_ceil(64).max(1);
        self.blocks
            .iter()
            .map(|b| {
                let mut w = vec![0u64; words];
                for &x in b {
                    w[x as usize / 64] |= 1 << (x % 64);
                }
                w
            })
            .collect()
    }

    /// Sizes of all pairwise block intersections, as value -> count.
    pub fn intersection_distribution(&self) -> BTreeMap<usize, usize> {
        let bits = self.block_bitsets();
        let mut m = BTreeMap::new();
        for i in 0..bits.len() {
            for j in i + 1..bits.len() {
                let n: u32 = bits[i].iter().zip(&bits[j]).map(|(a, b)| (a & b).count_ones()).sum();
                *m.entry(n as usize).or_insert(0) += 1;
            }
        }
        m
    }

    /// Pair coverage values over all point pairs, as value -> count.
    pub fn pair_coverage_distribution(&self) -> BTreeMap<usize, usize> {
        let c = self.pair_counts();
        let mut m = BTreeMap::new();
        for (x, row) in c.iter().enumerate() {
            for &n in &row[x + 1..] {
                *m.entry(n as usize).or_insert(0) += 1;
            }
        }
        m
    }
}

/// Union of the orbits of the base blocks under the group.
pub fn develop(baseblocks: &[Vec<u32>], group: &PermGroup) -> Result<SetSystem> {
    let v = group.degree();
    let mut all: BTreeSet<Vec<u32>> = BTreeSet::new();
    for base in baseblocks {
        let mut start = base.clone();
        start.sort_unstable();
        if let Some(&x) = start.iter().find(|&&x| x as usize >= v) {
            return Err(Error::PointOutOfRange { point: x, degree: v });
        }
        if !all.insert(start.clone()) {
            continue;
        }
        let mut queue = vec![start];
        while let Some(b) = queue.pop() {
            for g in group.generators() {
                let img = g.apply_to_subset(&b)?;
                if all.insert(img.clone()) {
                    queue.push(img);
                }
            }
        }
    }
    SetSystem::from_blocks_dedup(v, all.into_iter().collect())
}

/// Outcome of a t-wise balance check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwbdReport {
    pub holds: bool,
    /// First block (in block order) whose size is not allowed.
    pub bad_block: Option<Vec<u32>>,
    /// Lexicographically first t-subset covered a wrong number of times, with its count.
    pub witness: Option<(Vec<u32>, usize)>,
}

/// Checks that all block sizes lie in `sizes` and every `t`-subset of points
/// is contained in exactly `lambda` blocks.
pub fn verify_twbd(s: &SetSystem, t: usize, sizes: &[usize], lambda: usize) -> TwbdReport {
    let bad_block = s.blocks.iter().find(|b| !sizes.contains(&b.len())).cloned();
    let witness = coverage_witness(s, t, lambda);
    TwbdReport { holds: bad_block.is_none() && witness.is_none(), bad_block, witness }
}

fn coverage_witness(s: &SetSystem, t: usize, lambda: usize) -> Option<(Vec<u32>, usize)> {
    let v = s.v;
    if t > v {
        return None;
    }
    let total = binom(v as u64, t as u64);
    let points: Vec<u32> = (0..v as u32).collect();
    if total <= 1 << 26 {
        // colex rank: sum of C(x_i, i+1)
        let table: Vec<Vec<usize>> =
            (0..t).map(|i| (0..v).map(|x| binom(x as u64, i as u64 + 1) as usize).collect()).collect();
        let rank = |sub: &[u32]| sub.iter().enumerate().map(|(i, &x)| table[i][x as usize]).sum::<usize>();
        let mut counts = vec![0usize; total as usize];
        for b in &s.blocks {
            for_each_subset(b, t, |sub| counts[rank(sub)] += 1);
        }
        let mut found = None;
        for_each_subset(&points, t, |sub| {
            if found.is_none() && counts[rank(sub)] != lambda {
                found = Some((sub.to_vec(), counts[rank(sub)]));
            }
        });
        found
    } else {
        let mut counts: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
        for b in &s.blocks {
            for_each_subset(b, t, |sub| *counts.entry(sub.to_vec()).or_insert(0) += 1);
        }
        if lambda == 0 {
            return counts.into_iter().next();
        }
        let mut found = None;
        for_each_subset(&points, t, |sub| {
            if found.is_none() {
                let c = counts.get(sub).copied().unwrap_or(0);
                if c != lambda {
                    found = Some((sub.to_vec(), c));
                }
            }
        });
        found
    }
}

/// Necessary condition for a homogeneous 3-(v,{4,6},1) design:
/// `v = 2 or 4 (mod 6)` and `v >= 16`.
pub fn admissible_v(v: usize) -> bool {
    v >= 16 && matches!(v % 6, 2 | 4)
}

/// Number of tetrads in a 3-(v,{4,6},1) design with exactly v hexads:
/// `(C(v,3) - 20v) / 4`.
pub fn tetrad_count(v: usize) -> Result<usize> {
    let triples = binom(v as u64, 3);
    let hexad_triples = 20 * v as u64;
    if triples < hexad_triples || !(triples - hexad_triples).is_multiple_of(4) {
        return Err(Error::NonIntegralTetradCount(v));
    }
    Ok(((triples - hexad_triples) / 4) as usize)
}

/// Doubling of a symmetric design: the system on `2v` points with incidence
/// matrix `[[A, I], [I, A^T]]`.
///
/// Block `j < v` is `B_j + {v+j}`; block `v+i` is `{i} + {v+j : i in B_j}`.
pub fn double(d: &SetSystem) -> Result<SetSystem> {
    let v = d.v;
    if d.blocks.len() != v {
        return Err(Error::NotSymmetric { points: v, blocks: d.blocks.len() });
    }
    let mut blocks = Vec::with_capacity(2 * v);
    for (j, b) in d.blocks.iter().enumerate() {
        let mut nb = b.clone();
        nb.push((v + j) as u32);
        blocks.push(nb);
    }
    for i in 0..v as u32 {
        let mut nb = vec![i];
        nb.extend(
            d.blocks.iter().enumerate().filter(|(_, b)| b.binary_search(&i).is_ok()).map(|(j, _)| (v + j) as u32),
        );
        blocks.push(nb);
    }
    SetSystem::new(2 * v, blocks)
}
