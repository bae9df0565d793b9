//! Orbits of a permutation group on the k-subsets of its point set.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::perm::PermGroup;
use crate::subset::{binom, lex_cmp, mask_of, points_of, LexSubsets, MaskAction, Ranker, MAX_MASK_POINTS};

/// Default cap on `C(v,k)` for [`OrbitIndex::new`].
pub const DEFAULT_SUBSET_CAP: u64 = 5_000_000;

const UNSEEN: u32 = u32::MAX;

/// Partition of all k-subsets of `{0..v-1}` into orbits of a group.
///
/// Orbits are numbered in increasing lexicographic order of their
/// representatives, and each representative is the lexicographically smallest
/// member of its orbit. Subsets are stored as bitmasks, so `v <= 32`.
#[derive(Clone, Debug)]
pub struct OrbitIndex {
    degree: usize,
    k: usize,
    offsets: Vec<u32>,
    members: Vec<u32>,
    orbit_of: Vec<u32>,
    ranker: Ranker,
}

impl OrbitIndex {
    pub fn new(group: &PermGroup, k: usize) -> Result<Self> {
        Self::with_cap(group, k, DEFAULT_SUBSET_CAP)
    }

    pub fn with_cap(group: &PermGroup, k: usize, cap: u64) -> Result<Self> {
        let v = group.degree();
        if k == 0 || k > v || v > MAX_MASK_POINTS {
            return Err(Error::InvalidSubsetSize { k, degree: v });
        }
        let total = binom(v as u64, k as u64);
        if total > cap {
            return Err(Error::CapExceeded { what: "k-subset enumeration", cap });
        }
        let actions: Vec<MaskAction> = group.generators().iter().map(MaskAction::new).collect();
        let ranker = Ranker::new(v, k);
        let mut orbit_of = vec![UNSEEN; total as usize];
        let mut offsets = vec![0u32];
        let mut members: Vec<u32> = Vec::with_capacity(total as usize);
        for s in LexSubsets::new(v, k) {
            let r = ranker.rank(s);
            if orbit_of[r] != UNSEEN {
                continue;
            }
            let id = (offsets.len() - 1) as u32;
            let start = members.len();
            orbit_of[r] = id;
            members.push(s);
            let mut i = start;
            while i < members.len() {
                let m = members[i];
                for a in &actions {
                    let img = a.apply(m);
                    let ri = ranker.rank(img);
                    if orbit_of[ri] == UNSEEN {
                        orbit_of[ri] = id;
                        members.push(img);
                    }
                }
                i += 1;
            }
            members[start..].sort_unstable_by(|a, b| lex_cmp(*a, *b));
            offsets.push(members.len() as u32);
        }
        Ok(OrbitIndex { degree: v, k, offsets, members, orbit_of, ranker })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn subset_size(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Members of orbit `i` as bitmasks, in lexicographic order.
    pub fn orbit_masks(&self, i: usize) -> &[u32] {
        &self.members[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    /// Members of orbit `i` as sorted point lists.
    pub fn orbit(&self, i: usize) -> Vec<Vec<u32>> {
        self.orbit_masks(i).iter().map(|&m| points_of(m)).collect()
    }

    pub fn orbit_size(&self, i: usize) -> usize {
        (self.offsets[i + 1] - self.offsets[i]) as usize
    }

    pub fn representative_mask(&self, i: usize) -> u32 {
        self.members[self.offsets[i] as usize]
    }

    pub fn representative(&self, i: usize) -> Vec<u32> {
        points_of(self.representative_mask(i))
    }

    /// Orbit containing a k-subset given as a bitmask.
    #[inline]
    pub fn orbit_id_mask(&self, mask: u32) -> usize {
        debug_assert_eq!(mask.count_ones() as usize, self.k);
        self.orbit_of[self.ranker.rank(mask)] as usize
    }

    /// Orbit containing a k-subset, or `None` if it is not a k-subset of the points.
    pub fn orbit_id(&self, subset: &[u32]) -> Option<usize> {
        if subset.iter().any(|&x| x as usize >= self.degree) {
            return None;
        }
        let m = mask_of(subset);
        if m.count_ones() as usize != self.k {
            return None;
        }
        Some(self.orbit_id_mask(m))
    }
}
