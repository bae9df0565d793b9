//! Canonical labeling of set systems by individualization and refinement.
//!
//! A set system is encoded as the bipartite point/block incidence graph with
//! points in one color class and blocks colored by their size. Refinement is
//! colour refinement to the coarsest equitable partition; individualization
//! only ever picks points, because once the points are discrete the blocks are
//! determined. The canonical leaf is the one maximising
//! `(trace sequence, relabeled block list)`; leaves that tie with the first or
//! the best leaf yield automorphisms, which prune the rest of the tree.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::design::SetSystem;
use crate::error::{Error, Result};
use crate::perm::{PermGroup, Permutation, DEFAULT_CLOSURE_CAP};

/// Label-invariant byte encoding of a set system.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Certificate(Vec<u8>);

impl Certificate {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(text: &str) -> Result<Self> {
        hex::decode(text.trim())
            .map(Certificate)
            .map_err(|_| Error::Parse { line: 1, msg: "invalid certificate hex".into() })
    }

    fn encode(v: usize, blocks: &[Vec<u32>]) -> Self {
        let mut out = Vec::new();
        out.extend_from_slice(&(v as u32).to_le_bytes());
        out.extend_from_slice(&(blocks.len() as u32).to_le_bytes());
        for b in blocks {
            out.extend_from_slice(&(b.len() as u16).to_le_bytes());
            for &x in b {
                out.extend_from_slice(&(x as u16).to_le_bytes());
            }
        }
        Certificate(out)
    }
}

impl fmt::Debug for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Certificate({})", self.to_hex())
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

fn mix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

struct Graph {
    v: usize,
    blocks: Vec<Vec<u32>>,
    adj: Vec<Vec<u32>>,
    initial: Vec<u32>,
}

impl Graph {
    fn new(s: &SetSystem) -> Self {
        let v = s.v();
        let blocks = s.blocks().to_vec();
        let n = v + blocks.len();
        let mut adj = vec![Vec::new(); n];
        for (j, b) in blocks.iter().enumerate() {
            for &x in b {
                adj[x as usize].push((v + j) as u32);
                adj[v + j].push(x);
            }
        }
        let mut sizes: Vec<usize> = blocks.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        sizes.dedup();
        let mut initial = vec![0u32; n];
        for (j, b) in blocks.iter().enumerate() {
            initial[v + j] = 1 + sizes.binary_search(&b.len()).unwrap() as u32;
        }
        Graph { v, blocks, adj, initial }
    }

    fn n(&self) -> usize {
        self.adj.len()
    }
}

/// Dense ordered colouring of the graph vertices.
#[derive(Clone)]
struct Colouring {
    color: Vec<u32>,
    count: usize,
}

struct Refiner {
    sig: Vec<u64>,
    order: Vec<u32>,
    next: Vec<u32>,
}

impl Refiner {
    fn new(n: usize) -> Self {
        Refiner { sig: vec![0; n], order: (0..n as u32).collect(), next: vec![0; n] }
    }

    /// Refines to the coarsest equitable colouring finer than `c`, returning a
    /// label-invariant hash of the process.
    fn refine(&mut self, g: &Graph, c: &mut Colouring) -> u64 {
        let mut trace = 0xcbf2_9ce4_8422_2325u64;
        loop {
            for (x, nb) in g.adj.iter().enumerate() {
                self.sig[x] = nb.iter().fold(0u64, |h, &y| h.wrapping_add(mix(c.color[y as usize] as u64)));
            }
            let (color, sig) = (&c.color, &self.sig);
            self.order.sort_unstable_by_key(|&x| (color[x as usize], sig[x as usize]));
            let mut k = 0u32;
            let mut prev: Option<(u32, u64)> = None;
            let mut run = 0u64;
            for &x in &self.order {
                let key = (c.color[x as usize], self.sig[x as usize]);
                if prev.is_some_and(|p| p != key) {
                    trace = mix(trace ^ mix(prev.unwrap().1 ^ run << 40));
                    k += 1;
                    run = 0;
                }
                prev = Some(key);
                run += 1;
                self.next[x as usize] = k;
            }
            if let Some(p) = prev {
                trace = mix(trace ^ mix(p.1 ^ run << 40));
            }
            let count = if g.n() == 0 { 0 } else { k as usize + 1 };
            if count == c.count {
                return trace;
            }
            c.color.copy_from_slice(&self.next);
            c.count = count;
        }
    }
}

/// Gives point `w` its own colour just ahead of the rest of its cell.
fn individualize(c: &Colouring, w: u32) -> Colouring {
    let wc = c.color[w as usize];
    let color = c
        .color
        .iter()
        .enumerate()
        .map(|(x, &k)| if k > wc || (k == wc && x as u32 != w) { k + 1 } else { k })
        .collect();
    Colouring { color, count: c.count + 1 }
}

struct Leaf {
    traces: Vec<u64>,
    blocks: Vec<Vec<u32>>,
    /// Point -> canonical label.
    labels: Vec<u32>,
    path: Vec<u32>,
}

struct Search<'g> {
    g: &'g Graph,
    refiner: Refiner,
    path: Vec<u32>,
    traces: Vec<u64>,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Vec<u32>>,
    nodes: u64,
}

fn common_prefix(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Minimum point of the orbit of each point under `gens`.
fn orbit_minima(v: usize, gens: &[&Vec<u32>]) -> Vec<u32> {
    let mut parent: Vec<u32> = (0..v as u32).collect();
    fn find(p: &mut [u32], mut x: u32) -> u32 {
        while p[x as usize] != x {
            p[x as usize] = p[p[x as usize] as usize];
            x = p[x as usize];
        }
        x
    }
    for g in gens {
        for x in 0..v as u32 {
            let (a, b) = (find(&mut parent, x), find(&mut parent, g[x as usize]));
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi as usize] = lo;
            }
        }
    }
    (0..v as u32).map(|x| find(&mut parent, x)).collect()
}

impl<'g> Search<'g> {
    fn leaf_of(&self, c: &Colouring) -> Leaf {
        let labels: Vec<u32> = c.color[..self.g.v].to_vec();
        let mut blocks: Vec<Vec<u32>> = self
            .g
            .blocks
            .iter()
            .map(|b| {
                let mut r: Vec<u32> = b.iter().map(|&x| labels[x as usize]).collect();
                r.sort_unstable();
                r
            })
            .collect();
        blocks.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Leaf { traces: self.traces.clone(), blocks, labels, path: self.path.clone() }
    }

    fn leaf_cmp(a: &Leaf, b: &Leaf) -> Ordering {
        a.traces.cmp(&b.traces).then_with(|| a.blocks.cmp(&b.blocks))
    }

    /// Records the automorphism taking `other`'s labeling to `leaf`'s.
    fn record(&mut self, leaf: &Leaf, other_labels: &[u32]) {
        let v = self.g.v;
        let mut inv = vec![0u32; v];
        for (x, &l) in leaf.labels.iter().enumerate() {
            inv[l as usize] = x as u32;
        }
        let img: Vec<u32> = other_labels.iter().map(|&l| inv[l as usize]).collect();
        if img.iter().enumerate().any(|(x, &y)| x as u32 != y) && !self.generators.contains(&img) {
            self.generators.push(img);
        }
    }

    /// Returns `Some(d)` to abandon every node deeper than `d`.
    fn visit(&mut self, c: Colouring) -> Option<usize> {
        self.nodes += 1;
        let depth = self.path.len();
        let v = self.g.v;

        if let (Some(first), Some(best)) = (&self.first, &self.best) {
            let l = self.traces.len();
            let on_first = first.traces.get(..l) == Some(&self.traces[..]);
            if !on_first {
                let m = l.min(best.traces.len());
                if self.traces[..m] < best.traces[..m] {
                    return None;
                }
            }
        }

        let mut counts = vec![0u32; c.count];
        for &k in &c.color[..v] {
            counts[k as usize] += 1;
        }
        let target = c.color[..v].iter().copied().filter(|&k| counts[k as usize] > 1).min();
        let Some(target) = target else {
            let leaf = self.leaf_of(&c);
            let Some(first) = &self.first else {
                self.first = Some(Leaf {
                    traces: leaf.traces.clone(),
                    blocks: leaf.blocks.clone(),
                    labels: leaf.labels.clone(),
                    path: leaf.path.clone(),
                });
                self.best = Some(leaf);
                return None;
            };
            if Self::leaf_cmp(&leaf, first) == Ordering::Equal {
                let labels = first.labels.clone();
                let k = common_prefix(&leaf.path, &first.path);
                self.record(&leaf, &labels);
                return Some(k);
            }
            let best = self.best.as_ref().unwrap();
            match Self::leaf_cmp(&leaf, best) {
                Ordering::Equal => {
                    let labels = best.labels.clone();
                    let k = common_prefix(&leaf.path, &best.path);
                    self.record(&leaf, &labels);
                    return Some(k);
                }
                Ordering::Greater => self.best = Some(leaf),
                Ordering::Less => {}
            }
            return None;
        };

        let cell: Vec<u32> = (0..v as u32).filter(|&x| c.color[x as usize] == target).collect();
        let mut explored: Vec<u32> = Vec::new();
        for &w in &cell {
            let fixing: Vec<&Vec<u32>> =
                self.generators.iter().filter(|g| self.path.iter().all(|&p| g[p as usize] == p)).collect();
            let minima = orbit_minima(v, &fixing);
            if explored.iter().any(|&e| minima[e as usize] == minima[w as usize]) {
                continue;
            }
            explored.push(w);
            let mut child = individualize(&c, w);
            let t = self.refiner.refine(self.g, &mut child);
            self.path.push(w);
            self.traces.push(t);
            let jump = self.visit(child);
            self.path.pop();
            self.traces.pop();
            if let Some(k) = jump {
                if k < depth {
                    return Some(k);
                }
            }
        }
        None
    }
}

/// Result of a full canonical search.
struct Canon {
    labels: Vec<u32>,
    blocks: Vec<Vec<u32>>,
    generators: Vec<Vec<u32>>,
}

fn canonize(s: &SetSystem) -> Canon {
    let g = Graph::new(s);
    let mut refiner = Refiner::new(g.n());
    let mut c = Colouring { color: g.initial.clone(), count: 0 };
    c.count = c.color.iter().max().map_or(0, |&m| m as usize + 1);
    let t = refiner.refine(&g, &mut c);
    let mut search = Search {
        g: &g,
        refiner,
        path: Vec::new(),
        traces: vec![t],
        first: None,
        best: None,
        generators: Vec::new(),
        nodes: 0,
    };
    search.visit(c);
    let best = search.best.take().expect("search reaches a leaf");
    Canon { labels: best.labels, blocks: best.blocks, generators: search.generators }
}

/// Canonical certificate: equal exactly for isomorphic set systems.
pub fn canonical_certificate(s: &SetSystem) -> Certificate {
    let c = canonize(s);
    Certificate::encode(s.v(), &c.blocks)
}

/// The canonical relabeling of `s` and the point permutation producing it.
pub fn canonical_form(s: &SetSystem) -> (SetSystem, Permutation) {
    let c = canonize(s);
    let form = SetSystem::new(s.v(), c.blocks).expect("relabeling preserves validity");
    (form, Permutation::from_images(c.labels).expect("labels are a bijection"))
}

pub fn are_isomorphic(a: &SetSystem, b: &SetSystem) -> bool {
    a.v() == b.v()
        && a.len() == b.len()
        && invariant_key(a) == invariant_key(b)
        && canonical_certificate(a) == canonical_certificate(b)
}

/// Generators of the full automorphism group (point action) and its order.
pub fn automorphism_group(s: &SetSystem) -> Result<(PermGroup, u64)> {
    automorphism_group_with_cap(s, DEFAULT_CLOSURE_CAP)
}

pub fn automorphism_group_with_cap(s: &SetSystem, cap: u64) -> Result<(PermGroup, u64)> {
    let c = canonize(s);
    let gens: Vec<Permutation> =
        c.generators.into_iter().map(|g| Permutation::from_images(g).expect("automorphisms are bijections")).collect();
    let group = if gens.is_empty() { PermGroup::trivial(s.v()) } else { PermGroup::new(gens)? };
    let order = group.closure_order(cap)?;
    Ok((group, order))
}

type InvariantKey = (Vec<usize>, BTreeMap<usize, usize>, BTreeMap<usize, usize>, BTreeMap<usize, usize>);

/// Cheap isomorphism invariant: degree sequence, block sizes, block
/// intersection sizes and pair coverage counts.
fn invariant_key(s: &SetSystem) -> InvariantKey {
    let mut degrees = s.replication_profile();
    degrees.sort_unstable();
    (degrees, s.size_distribution(), s.intersection_distribution(), s.pair_coverage_distribution())
}

/// One isomorphism class found by [`iso_reduce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoClass {
    /// First member seen.
    pub representative: SetSystem,
    pub certificate: Certificate,
    pub multiplicity: usize,
}

/// Streaming isomorphism reduction. Certificates are only computed once a
/// second system with the same cheap invariants shows up, or at the end.
#[derive(Default)]
pub struct IsoReducer {
    buckets: BTreeMap<(usize, InvariantKey), Vec<usize>>,
    classes: Vec<(SetSystem, Option<Certificate>, usize)>,
}

impl IsoReducer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a system; returns its class index and whether the class is new.
    pub fn insert(&mut self, s: SetSystem) -> (usize, bool) {
        self.insert_with(s, None)
    }

    /// Like [`IsoReducer::insert`] with a precomputed certificate.
    pub fn insert_with(&mut self, s: SetSystem, cert: Option<Certificate>) -> (usize, bool) {
        let key = (s.v(), invariant_key(&s));
        let bucket = self.buckets.entry(key).or_default();
        if bucket.is_empty() {
            self.classes.push((s, cert, 1));
            bucket.push(self.classes.len() - 1);
            return (self.classes.len() - 1, true);
        }
        let cert = cert.unwrap_or_else(|| canonical_certificate(&s));
        for &i in bucket.iter() {
            let entry = &mut self.classes[i];
            let c = entry.1.get_or_insert_with(|| canonical_certificate(&entry.0));
            if *c == cert {
                entry.2 += 1;
                return (i, false);
            }
        }
        self.classes.push((s, Some(cert), 1));
        bucket.push(self.classes.len() - 1);
        (self.classes.len() - 1, true)
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn finish(self) -> Vec<IsoClass> {
        self.classes
            .into_iter()
            .map(|(s, c, m)| {
                let certificate = c.unwrap_or_else(|| canonical_certificate(&s));
                IsoClass { representative: s, certificate, multiplicity: m }
            })
            .collect()
    }
}

/// Classes in order of first appearance.
pub fn iso_reduce<I: IntoIterator<Item = SetSystem>>(systems: I) -> Vec<IsoClass> {
    let mut r = IsoReducer::new();
    for s in systems {
        r.insert(s);
    }
    r.finish()
}
