//! Orbit-based search for 3-(v,{4,6},1) designs with a prescribed transitive
//! automorphism group.
//!
//! The pipeline is:
//!
//! 1. partition the 3-, 4- and 6-subsets into orbits of the group,
//! 2. pick unions of 6-orbits of total size `v` that cover no triple twice
//!    (the hexad candidates),
//! 3. collect the triple orbits left uncovered (the residual rows) and the
//!    4-orbits that touch only residual triples, each at most once (the
//!    admissible columns),
//! 4. solve `AU = J` for the 0/1 Kramer–Mesner matrix `A` by exact cover and
//!    add the selected tetrad orbits to the candidate hexads.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::classify::{classify, TwoClassParams};
use crate::design::{admissible_v, tetrad_count, verify_twbd, SetSystem};
use crate::dlx::{CoverMatrix, Solutions};
use crate::error::{Error, Result};
use crate::orbit::{OrbitIndex, DEFAULT_SUBSET_CAP};
use crate::perm::PermGroup;
use crate::subset::points_of;

/// Which hexad candidates are extended.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum HexadFilter {
    #[default]
    Any,
    /// Only candidates whose hexads form a 2-class symmetric design.
    TwoClass,
    /// Only candidates whose hexads have exactly these 2-class parameters.
    Params(TwoClassParams),
}

impl HexadFilter {
    pub fn accepts(&self, hexads: &SetSystem) -> bool {
        match self {
            HexadFilter::Any => true,
            HexadFilter::TwoClass => classify(hexads).two_class.is_some(),
            HexadFilter::Params(p) => classify(hexads).two_class == Some(*p),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub filter: HexadFilter,
    /// Stop after this many designs in total.
    pub solution_limit: Option<u64>,
    /// Stop after this many hexad candidates have been accepted.
    pub candidate_limit: Option<u64>,
    /// Cap on `C(v,k)` for the orbit computations.
    pub subset_cap: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            filter: HexadFilter::Any,
            solution_limit: None,
            candidate_limit: None,
            subset_cap: DEFAULT_SUBSET_CAP,
        }
    }
}

/// Counters describing a search run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Unions of 6-orbits with total size `v` and no doubly covered triple.
    pub unions: u64,
    /// Orbit additions rejected because a triple would be covered twice.
    pub double_cover_pruned: u64,
    /// Unions rejected because the hexads were not a tactical configuration.
    pub tactical_pruned: u64,
    /// Unions rejected by the hexad filter.
    pub filter_rejected: u64,
    /// Candidates handed to the exact cover stage.
    pub candidates: u64,
    /// Candidates whose Kramer–Mesner matrix has an all-zero row.
    pub infeasible: u64,
    pub solutions: u64,
    /// A solution or candidate limit cut the run short.
    pub capped: bool,
}

/// A union of 6-orbits usable as the hexads of a design.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HexadCandidate {
    pub orbit_ids: Vec<usize>,
    /// Hexads as bitmasks.
    pub blocks: Vec<u32>,
    /// Covered triple orbit -> multiplicity (always 1 for accepted candidates).
    pub triple_cover: Vec<(usize, u32)>,
}

impl HexadCandidate {
    pub fn hexads(&self, v: usize) -> SetSystem {
        let blocks = self.blocks.iter().map(|&m| points_of(m)).collect();
        SetSystem::from_blocks_dedup(v, blocks).expect("orbit members are valid blocks")
    }
}

/// The 0/1 matrix over residual triple orbits (rows) and admissible tetrad
/// orbits (columns).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KmMatrix {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    /// Row indices (into `rows`) with a 1 in each column.
    pub col_support: Vec<Vec<u32>>,
}

impl KmMatrix {
    pub fn entry(&self, row: usize, col: usize) -> u8 {
        self.col_support[col].binary_search(&(row as u32)).is_ok() as u8
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        let mut d = vec![vec![0u8; self.cols.len()]; self.rows.len()];
        for (c, rows) in self.col_support.iter().enumerate() {
            for &r in rows {
                d[r as usize][c] = 1;
            }
        }
        d
    }

    /// Rows (as indices into `rows`) with no 1 at all.
    pub fn empty_rows(&self) -> Vec<usize> {
        let mut hit = vec![false; self.rows.len()];
        for rows in &self.col_support {
            for &r in rows {
                hit[r as usize] = true;
            }
        }
        (0..self.rows.len()).filter(|&r| !hit[r]).collect()
    }

    pub fn to_cover_matrix(&self) -> CoverMatrix {
        CoverMatrix::from_columns(self.rows.len(), &self.col_support).expect("supports are in range")
    }
}

/// Triple orbit -> multiplicity with which the orbit of `rep` covers every
/// triple in it: `count_in_rep * |orbit| / |triple orbit|`.
fn triple_coverage(rep: u32, orbit_size: usize, triples: &OrbitIndex) -> Vec<(usize, u32)> {
    let pts = points_of(rep);
    let mut counts: Vec<(usize, u32)> = Vec::new();
    crate::subset::for_each_subset(&pts, 3, |t| {
        let id = triples.orbit_id_mask(crate::subset::mask_of(t));
        match counts.iter_mut().find(|(i, _)| *i == id) {
            Some((_, c)) => *c += 1,
            None => counts.push((id, 1)),
        }
    });
    counts.sort_unstable();
    counts
        .into_iter()
        .map(|(id, c)| {
            let total = c as usize * orbit_size;
            debug_assert_eq!(total % triples.orbit_size(id), 0);
            (id, (total / triples.orbit_size(id)) as u32)
        })
        .collect()
}

/// Triple orbits not covered by the candidate hexads.
pub fn residual_triple_orbits(candidate: &HexadCandidate, triples: &OrbitIndex) -> Vec<usize> {
    let mut covered = vec![false; triples.len()];
    for &(id, _) in &candidate.triple_cover {
        covered[id] = true;
    }
    (0..triples.len()).filter(|&i| !covered[i]).collect()
}

/// 4-orbits that contain residual triples only, each at most once.
pub fn admissible_tetrad_orbits(residual: &[usize], triples: &OrbitIndex, tetrads: &OrbitIndex) -> Vec<usize> {
    let mut is_residual = vec![false; triples.len()];
    for &r in residual {
        is_residual[r] = true;
    }
    (0..tetrads.len())
        .filter(|&g| {
            triple_coverage(tetrads.representative_mask(g), tetrads.orbit_size(g), triples)
                .iter()
                .all(|&(d, m)| is_residual[d] && m == 1)
        })
        .collect()
}

/// Builds `A[Δ,Γ] = |{K in Γ : K ⊇ T}|` for the representative `T` of each
/// residual orbit `Δ`, by mapping the `v-3` supersets of `T` to their orbits.
///
/// Columns without a 1 are dropped; an entry above 1 is an error.
pub fn build_km_matrix(
    residual: &[usize],
    admissible: &[usize],
    triples: &OrbitIndex,
    tetrads: &OrbitIndex,
) -> Result<KmMatrix> {
    let v = triples.degree();
    let mut col_of = vec![u32::MAX; tetrads.len()];
    for (c, &g) in admissible.iter().enumerate() {
        col_of[g] = c as u32;
    }
    let mut support: Vec<Vec<u32>> = vec![Vec::new(); admissible.len()];
    for (r, &d) in residual.iter().enumerate() {
        let t = triples.representative_mask(d);
        for x in 0..v {
            if t >> x & 1 == 1 {
                continue;
            }
            let g = tetrads.orbit_id_mask(t | 1 << x);
            let c = col_of[g];
            if c == u32::MAX {
                continue;
            }
            let col = &mut support[c as usize];
            if col.last() == Some(&(r as u32)) {
                return Err(Error::KmEntry { row: r, col: c as usize, value: 2 });
            }
            col.push(r as u32);
        }
    }
    let mut cols = Vec::with_capacity(admissible.len());
    let mut col_support = Vec::with_capacity(admissible.len());
    for (c, rows) in support.into_iter().enumerate() {
        if !rows.is_empty() {
            cols.push(admissible[c]);
            col_support.push(rows);
        }
    }
    Ok(KmMatrix { rows: residual.to_vec(), cols, col_support })
}

/// Orbit data for one prescribed group, shared by all candidates.
#[derive(Clone, Debug)]
pub struct SearchSpace {
    group: PermGroup,
    triples: OrbitIndex,
    tetrads: OrbitIndex,
    hexads: OrbitIndex,
    /// Per 6-orbit: bitset of covered triple orbits, `None` if it covers a triple twice.
    hexad_cover: Vec<Option<Vec<u64>>>,
    /// Per 4-orbit: usable as a column whenever all these triple orbits are residual.
    tetrad_cover: Vec<Option<Vec<u32>>>,
    words: usize,
}

impl SearchSpace {
    /// Computes the orbit data. The group must be transitive and its degree
    /// admissible (`v = 2, 4 mod 6`, `v >= 16`).
    pub fn new(group: &PermGroup, subset_cap: u64) -> Result<Self> {
        let v = group.degree();
        if !admissible_v(v) {
            return Err(Error::InadmissibleDegree(v));
        }
        Self::new_unchecked_degree(group, subset_cap)
    }

    /// Like [`SearchSpace::new`] without the degree condition; used for small
    /// synthetic cases.
    pub fn new_unchecked_degree(group: &PermGroup, subset_cap: u64) -> Result<Self> {
        if !group.is_transitive() {
            return Err(Error::NotTransitive);
        }
        let triples = OrbitIndex::with_cap(group, 3, subset_cap)?;
        let tetrads = OrbitIndex::with_cap(group, 4, subset_cap)?;
        let hexads = OrbitIndex::with_cap(group, 6, subset_cap)?;
        let words = triples.len().div_ceil(64);
        let hexad_cover = (0..hexads.len())
            .map(|e| {
                let cov = triple_coverage(hexads.representative_mask(e), hexads.orbit_size(e), &triples);
                if cov.iter().any(|&(_, m)| m > 1) {
                    return None;
                }
                let mut bits = vec![0u64; words];
                for (d, _) in cov {
                    bits[d / 64] |= 1 << (d % 64);
                }
                Some(bits)
            })
            .collect();
        let tetrad_cover = (0..tetrads.len())
            .map(|g| {
                let cov = triple_coverage(tetrads.representative_mask(g), tetrads.orbit_size(g), &triples);
                cov.iter().all(|&(_, m)| m == 1).then(|| cov.iter().map(|&(d, _)| d as u32).collect())
            })
            .collect();
        Ok(SearchSpace { group: group.clone(), triples, tetrads, hexads, hexad_cover, tetrad_cover, words })
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn v(&self) -> usize {
        self.group.degree()
    }

    pub fn triples(&self) -> &OrbitIndex {
        &self.triples
    }

    pub fn tetrads(&self) -> &OrbitIndex {
        &self.tetrads
    }

    pub fn hexads(&self) -> &OrbitIndex {
        &self.hexads
    }

    /// Lazily enumerates hexad candidates in lexicographic order of their
    /// orbit-id sets.
    pub fn candidates(&self, filter: HexadFilter) -> Candidates<'_> {
        Candidates { space: self, cursor: CandidateCursor::new(self), filter, stats: SearchStats::default() }
    }

    /// Residual triple orbits of a candidate.
    pub fn residual(&self, candidate: &HexadCandidate) -> Vec<usize> {
        residual_triple_orbits(candidate, &self.triples)
    }

    /// Admissible tetrad orbits for a residual set, from the cached coverage.
    pub fn admissible(&self, residual: &[usize]) -> Vec<usize> {
        let mut is_residual = vec![false; self.triples.len()];
        for &r in residual {
            is_residual[r] = true;
        }
        self.tetrad_cover
            .iter()
            .enumerate()
            .filter_map(|(g, cov)| {
                let cov = cov.as_ref()?;
                cov.iter().all(|&d| is_residual[d as usize]).then_some(g)
            })
            .collect()
    }

    pub fn km_matrix(&self, candidate: &HexadCandidate) -> Result<KmMatrix> {
        let residual = self.residual(candidate);
        let admissible = self.admissible(&residual);
        build_km_matrix(&residual, &admissible, &self.triples, &self.tetrads)
    }

    /// Exact-cover extensions of a candidate. `None` when the matrix has an
    /// empty row.
    pub fn extend(&self, candidate: &HexadCandidate, limit: Option<u64>) -> Result<Option<Extensions>> {
        let km = self.km_matrix(candidate)?;
        if !km.empty_rows().is_empty() {
            return Ok(None);
        }
        let solutions = km.to_cover_matrix().into_solutions(limit);
        Ok(Some(Extensions { candidate: candidate.clone(), cols: km.cols, solutions }))
    }

    /// Design formed by candidate hexads and the given tetrad orbits.
    pub fn assemble(&self, candidate: &HexadCandidate, tetrad_orbits: &[usize]) -> SetSystem {
        let mut blocks: Vec<Vec<u32>> = candidate.blocks.iter().map(|&m| points_of(m)).collect();
        for &g in tetrad_orbits {
            blocks.extend(self.tetrads.orbit_masks(g).iter().map(|&m| points_of(m)));
        }
        SetSystem::from_blocks_dedup(self.v(), blocks).expect("orbit members are valid blocks")
    }

    /// Independent check that a design is homogeneous 3-(v,{4,6},1).
    pub fn check_design(&self, design: &SetSystem) -> Result<()> {
        let v = self.v();
        let report = verify_twbd(design, 3, &[4, 6], 1);
        if !report.holds {
            return Err(Error::Unsound(format!("3-wise balance fails: {report:?}")));
        }
        let sizes = design.size_distribution();
        let hexads = sizes.get(&6).copied().unwrap_or(0);
        let tetrads = sizes.get(&4).copied().unwrap_or(0);
        if hexads != v || tetrad_count(v).ok() != Some(tetrads) {
            return Err(Error::Unsound(format!("{hexads} hexads and {tetrads} tetrads")));
        }
        Ok(())
    }

    /// Runs the whole pipeline; see [`DesignSearch`].
    pub fn search(&self, config: SearchConfig) -> DesignSearch<'_> {
        DesignSearch {
            space: self,
            candidates: self.candidates(config.filter),
            current: None,
            config,
            solutions: 0,
            done: false,
        }
    }
}

/// Enumeration state for hexad candidates: a depth-first walk over orbit ids
/// in increasing order, pruned by total size and by triple double cover.
#[derive(Clone, Debug)]
struct CandidateCursor {
    pool: Vec<usize>,
    chosen: Vec<usize>,
    sums: Vec<usize>,
    unions: Vec<Vec<u64>>,
    next: usize,
    done: bool,
}

impl CandidateCursor {
    fn new(space: &SearchSpace) -> Self {
        let pool: Vec<usize> = (0..space.hexads.len()).filter(|&e| space.hexad_cover[e].is_some()).collect();
        CandidateCursor {
            pool,
            chosen: Vec::new(),
            sums: vec![0],
            unions: vec![vec![0u64; space.words]],
            next: 0,
            done: false,
        }
    }

    /// Next union of orbits (pool indices resolved to orbit ids) summing to v.
    fn next_union(&mut self, space: &SearchSpace, stats: &mut SearchStats) -> Option<Vec<usize>> {
        let v = space.v();
        while !self.done {
            let sum = *self.sums.last().unwrap();
            let rem = v - sum;
            let mut advanced = false;
            while self.next < self.pool.len() {
                let p = self.next;
                self.next += 1;
                let e = self.pool[p];
                let size = space.hexads.orbit_size(e);
                if size > rem {
                    continue;
                }
                let bits = space.hexad_cover[e].as_ref().unwrap();
                let union = self.unions.last().unwrap();
                if bits.iter().zip(union).any(|(a, b)| a & b != 0) {
                    stats.double_cover_pruned += 1;
                    continue;
                }
                if size == rem {
                    let mut ids: Vec<usize> = self.chosen.iter().map(|&q| self.pool[q]).collect();
                    ids.push(e);
                    return Some(ids);
                }
                let merged: Vec<u64> = bits.iter().zip(union).map(|(a, b)| a | b).collect();
                self.chosen.push(p);
                self.sums.push(sum + size);
                self.unions.push(merged);
                advanced = true;
                break;
            }
            if advanced {
                continue;
            }
            match self.chosen.pop() {
                Some(q) => {
                    self.sums.pop();
                    self.unions.pop();
                    self.next = q + 1;
                }
                None => self.done = true,
            }
        }
        None
    }
}

/// Iterator over hexad candidates; see [`SearchSpace::candidates`].
pub struct Candidates<'a> {
    space: &'a SearchSpace,
    cursor: CandidateCursor,
    filter: HexadFilter,
    stats: SearchStats,
}

impl Candidates<'_> {
    pub fn stats(&self) -> &SearchStats {
        &self.stats
    }
}

impl Iterator for Candidates<'_> {
    type Item = HexadCandidate;

    fn next(&mut self) -> Option<HexadCandidate> {
        let space = self.space;
        let v = space.v();
        while let Some(ids) = self.cursor.next_union(space, &mut self.stats) {
            self.stats.unions += 1;
            let mut blocks = Vec::with_capacity(v);
            let mut replication = vec![0usize; v];
            for &e in &ids {
                for &m in space.hexads.orbit_masks(e) {
                    blocks.push(m);
                    for x in points_of(m) {
                        replication[x as usize] += 1;
                    }
                }
            }
            if replication.iter().any(|&r| r != replication[0]) {
                self.stats.tactical_pruned += 1;
                continue;
            }
            blocks.sort_unstable();
            let candidate = HexadCandidate {
                triple_cover: {
                    let mut cover: Vec<(usize, u32)> = Vec::new();
                    for &e in &ids {
                        cover.extend(triple_coverage(
                            space.hexads.representative_mask(e),
                            space.hexads.orbit_size(e),
                            &space.triples,
                        ));
                    }
                    cover.sort_unstable();
                    cover
                },
                orbit_ids: ids,
                blocks,
            };
            if !self.filter.accepts(&candidate.hexads(v)) {
                self.stats.filter_rejected += 1;
                continue;
            }
            self.stats.candidates += 1;
            return Some(candidate);
        }
        None
    }
}

/// Exact-cover extensions of one candidate; owns its solver state.
pub struct Extensions {
    pub candidate: HexadCandidate,
    /// Tetrad orbit id of each matrix column.
    pub cols: Vec<usize>,
    solutions: Solutions<CoverMatrix>,
}

impl Extensions {
    /// Next design, checked with [`SearchSpace::check_design`].
    pub fn next_design(&mut self, space: &SearchSpace) -> Option<Result<FoundDesign>> {
        let sol = self.solutions.next()?;
        let tetrad_orbits: Vec<usize> = sol.iter().map(|&c| self.cols[c as usize]).collect();
        let design = space.assemble(&self.candidate, &tetrad_orbits);
        Some(space.check_design(&design).map(|()| FoundDesign {
            hexad_orbits: self.candidate.orbit_ids.clone(),
            tetrad_orbits,
            design,
        }))
    }

    /// Collects all remaining designs.
    pub fn collect_all(mut self, space: &SearchSpace) -> Result<Vec<FoundDesign>> {
        let mut out = Vec::new();
        while let Some(d) = self.next_design(space) {
            out.push(d?);
        }
        Ok(out)
    }
}

/// A design produced by the search together with the orbits it is made of.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoundDesign {
    pub hexad_orbits: Vec<usize>,
    pub tetrad_orbits: Vec<usize>,
    pub design: SetSystem,
}

impl FoundDesign {
    /// Orbit representatives: developing them under the group gives the design.
    pub fn baseblocks(&self, space: &SearchSpace) -> Vec<Vec<u32>> {
        let mut out: Vec<Vec<u32>> = self.tetrad_orbits.iter().map(|&g| space.tetrads.representative(g)).collect();
        out.extend(self.hexad_orbits.iter().map(|&e| space.hexads.representative(e)));
        out
    }
}

/// Lazy stream of designs; see [`SearchSpace::search`].
pub struct DesignSearch<'a> {
    space: &'a SearchSpace,
    candidates: Candidates<'a>,
    current: Option<Extensions>,
    config: SearchConfig,
    solutions: u64,
    done: bool,
}

impl DesignSearch<'_> {
    pub fn stats(&self) -> SearchStats {
        let mut s = *self.candidates.stats();
        s.solutions = self.solutions;
        s.capped = self.done && s.capped || self.capped_flag();
        s
    }

    fn capped_flag(&self) -> bool {
        self.config.solution_limit.is_some_and(|l| self.solutions >= l)
            || self.config.candidate_limit.is_some_and(|l| self.candidates.stats().candidates >= l) && self.done
    }
}

impl Iterator for DesignSearch<'_> {
    type Item = Result<FoundDesign>;

    fn next(&mut self) -> Option<Result<FoundDesign>> {
        if self.done {
            return None;
        }
        loop {
            if self.config.solution_limit.is_some_and(|l| self.solutions >= l) {
                self.done = true;
                return None;
            }
            if let Some(ext) = self.current.as_mut() {
                match ext.next_design(self.space) {
                    Some(Ok(d)) => {
                        self.solutions += 1;
                        return Some(Ok(d));
                    }
                    Some(Err(e)) => {
                        self.done = true;
                        return Some(Err(e));
                    }
                    None => self.current = None,
                }
            }
            if self.config.candidate_limit.is_some_and(|l| self.candidates.stats().candidates >= l) {
                self.done = true;
                return None;
            }
            let cand = self.candidates.next()?;
            match self.space.extend(&cand, None) {
                Ok(Some(ext)) => self.current = Some(ext),
                Ok(None) => self.candidates.stats.infeasible += 1,
                Err(e) => {
                    self.done = true;
                    return Some(Err(e));
                }
            }
        }
    }
}

/// Convenience wrapper: orbit data plus search in one call, collecting the designs.
pub fn search_designs(group: &PermGroup, config: SearchConfig) -> Result<(Vec<FoundDesign>, SearchStats)> {
    let space = SearchSpace::new(group, config.subset_cap)?;
    let mut run = space.search(config);
    let mut out = Vec::new();
    for d in run.by_ref() {
        out.push(d?);
    }
    Ok((out, run.stats()))
}
