//! k-subsets of `{0..v-1}` for `v <= 32`, encoded as `u32` bitmasks, with
//! colex ranking and lexicographic enumeration.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::perm::Permutation;

/// Largest point count supported by the bitmask encoding.
pub const MAX_MASK_POINTS: usize = 32;

/// Binomial coefficient, saturating at `u64::MAX`.
pub fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

pub fn mask_of(subset: &[u32]) -> u32 {
    subset.iter().fold(0u32, |m, &x| m | (1 << x))
}

pub fn points_of(mut mask: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros());
        mask &= mask - 1;
    }
    out
}

/// Lexicographic order of the sorted point sequences of two equal-size sets.
#[inline]
pub fn lex_cmp(a: u32, b: u32) -> Ordering {
    let diff = a ^ b;
    if diff == 0 {
        Ordering::Equal
    } else if a & (diff & diff.wrapping_neg()) != 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Colex ranking of k-subsets of `{0..v-1}`.
#[derive(Clone, Debug)]
pub struct Ranker {
    // table[i][x] = C(x, i+1)
    table: Vec<[u32; MAX_MASK_POINTS]>,
    count: u64,
}

impl Ranker {
    pub fn new(v: usize, k: usize) -> Self {
        let table = (0..k)
            .map(|i| {
                let mut row = [0u32; MAX_MASK_POINTS];
                for (x, slot) in row.iter_mut().enumerate().take(v) {
                    *slot = binom(x as u64, i as u64 + 1).min(u32::MAX as u64) as u32;
                }
                row
            })
            .collect();
        Ranker { table, count: binom(v as u64, k as u64) }
    }

    /// Number of k-subsets, i.e. one past the largest rank.
    pub fn count(&self) -> u64 {
        self.count
    }

    #[inline]
    pub fn rank(&self, mut mask: u32) -> usize {
        let mut r = 0usize;
        let mut i = 0;
        while mask != 0 {
            let x = mask.trailing_zeros() as usize;
            r += self.table[i][x] as usize;
            mask &= mask - 1;
            i += 1;
        }
        r
    }
}

/// Iterator over all k-subsets of `{0..v-1}` as masks, in lexicographic order
/// of their sorted point sequences.
pub struct LexSubsets {
    v: u32,
    combo: Vec<u32>,
    done: bool,
}

impl LexSubsets {
    pub fn new(v: usize, k: usize) -> Self {
        LexSubsets { v: v as u32, combo: (0..k as u32).collect(), done: k > v }
    }
}

impl Iterator for LexSubsets {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.done {
            return None;
        }
        let out = mask_of(&self.combo);
        let k = self.combo.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.combo[i] < self.v - (k - i) as u32 {
                self.combo[i] += 1;
                for j in i + 1..k {
                    self.combo[j] = self.combo[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// A permutation acting on bitmasks through per-byte lookup tables.
#[derive(Clone)]
pub struct MaskAction {
    tables: [[u32; 256]; 4],
}

impl MaskAction {
    pub fn new(p: &Permutation) -> Self {
        debug_assert!(p.degree() <= MAX_MASK_POINTS);
        let mut tables = [[0u32; 256]; 4];
        for (byte, table) in tables.iter_mut().enumerate() {
            for (bits, slot) in table.iter_mut().enumerate() {
                let mut img = 0u32;
                for b in 0..8 {
                    let x = byte * 8 + b;
                    if bits >> b & 1 == 1 && x < p.degree() {
                        img |= 1 << p.apply(x as u32);
                    }
                }
                *slot = img;
            }
        }
        MaskAction { tables }
    }

    #[inline]
    pub fn apply(&self, m: u32) -> u32 {
        self.tables[0][(m & 0xff) as usize]
            | self.tables[1][(m >> 8 & 0xff) as usize]
            | self.tables[2][(m >> 16 & 0xff) as usize]
            | self.tables[3][(m >> 24) as usize]
    }
}

/// Calls `f` on every `t`-subset (as a sorted slice) of a sorted `set`, in
/// lexicographic order.
pub fn for_each_subset<F: FnMut(&[u32])>(set: &[u32], t: usize, mut f: F) {
    if t > set.len() {
        return;
    }
    let mut idx: Vec<usize> = (0..t).collect();
    let mut buf: Vec<u32> = idx.iter().map(|&i| set[i]).collect();
    loop {
        f(&buf);
        let mut i = t;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < set.len() - (t - i) {
                idx[i] += 1;
                for j in i + 1..t {
                    idx[j] = idx[j - 1] + 1;
                }
                for j in i..t {
                    buf[j] = set[idx[j]];
                }
                break;
            }
        }
    }
}
