//! Permutations of `{0..v-1}`, finitely generated permutation groups, and the
//! cycle-notation text formats used to describe them.

use alloc::boxed::Box;
use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashSet;

use crate::error::{Error, Result};

/// Default cap on the number of elements enumerated by [`PermGroup::closure_order`].
pub const DEFAULT_CLOSURE_CAP: u64 = 10_000_000;

/// A bijection on `{0..degree-1}`; `images[x]` is the image of `x`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree as u32).collect() }
    }

    /// Builds a permutation from its image list, checking that it is a bijection.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x as usize >= n {
                return Err(Error::PointOutOfRange { point: x, degree: n });
            }
            if core::mem::replace(&mut seen[x as usize], true) {
                return Err(Error::RepeatedPoint(x));
            }
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from a product of disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x as usize >= degree {
                    return Err(Error::PointOutOfRange { point: x, degree });
                }
                if core::mem::replace(&mut used[x as usize], true) {
                    return Err(Error::RepeatedPoint(x));
                }
                images[x as usize] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.images[x as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` followed by `other`: `x -> other(self(x))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        check_degree(self.degree(), other.degree())?;
        Ok(Permutation { images: self.images.iter().map(|&x| other.images[x as usize]).collect() })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y as usize] = x as u32;
        }
        Permutation { images }
    }

    /// Image of a subset, returned sorted.
    pub fn apply_to_subset(&self, subset: &[u32]) -> Result<Vec<u32>> {
        let mut out = Vec::with_capacity(subset.len());
        for &x in subset {
            if x as usize >= self.degree() {
                return Err(Error::PointOutOfRange { point: x, degree: self.degree() });
            }
            out.push(self.images[x as usize]);
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Order of the permutation (lcm of its cycle lengths).
    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| lcm(acc, c.len() as u64))
    }

    /// Nontrivial cycles, each starting at its smallest point, in order of that point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x as u32);
                x = self.images[x] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle notation with decimal labels, e.g. `(0,1,2)(4,5)`; the identity is `()`.
    pub fn to_cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return String::from("()");
        }
        let mut s = String::new();
        for c in cycles {
            s.push('(');
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                s.push_str(&format!("{x}"));
            }
            s.push(')');
        }
        s
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self.to_cycle_string())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

fn check_degree(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DegreeMismatch { expected, found });
    }
    Ok(())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Parses a product of disjoint cycles with decimal labels.
///
/// Whitespace is ignored, cycle elements are separated by commas, points that
/// are not mentioned are fixed and `()` denotes the identity.
pub fn parse_cycle_notation(text: &str, degree: usize) -> Result<Permutation> {
    parse_cycle_notation_with(text, degree, |tok| tok.parse::<u32>().ok())
}

/// Like [`parse_cycle_notation`] but with a caller-supplied label mapping.
pub fn parse_cycle_notation_with<F>(text: &str, degree: usize, label: F) -> Result<Permutation>
where
    F: Fn(&str) -> Option<u32>,
{
    let err = |msg: String| Error::Parse { line: 0, msg };
    let mut cycles: Vec<Vec<u32>> = Vec::new();
    let mut current: Option<(Vec<u32>, String)> = None;
    for ch in text.chars() {
        match ch {
            '(' => {
                if current.is_some() {
                    return Err(err(String::from("nested '('")));
                }
                current = Some((Vec::new(), String::new()));
            }
            ')' | ',' => {
                let Some((cycle, tok)) = current.as_mut() else {
                    return Err(err(format!("unexpected '{ch}' outside a cycle")));
                };
                let t = tok.trim();
                if t.is_empty() {
                    if ch == ',' || !cycle.is_empty() {
                        return Err(err(String::from("empty label in cycle")));
                    }
                } else {
                    let x = label(t).ok_or_else(|| err(format!("bad point label {t:?}")))?;
                    cycle.push(x);
                }
                tok.clear();
                if ch == ')' {
                    let (cycle, _) = current.take().unwrap();
                    cycles.push(cycle);
                }
            }
            c if c.is_whitespace() => {
                if let Some((_, tok)) = current.as_mut() {
                    if !tok.is_empty() {
                        tok.push(' ');
                    }
                }
            }
            c => match current.as_mut() {
                Some((_, tok)) => {
                    if tok.ends_with(' ') {
                        return Err(err(String::from("missing ',' between labels")));
                    }
                    tok.push(c)
                }
                None => return Err(err(format!("unexpected character {c:?} outside a cycle"))),
            },
        }
    }
    if current.is_some() {
        return Err(err(String::from("unterminated cycle")));
    }
    let refs: Vec<&[u32]> = cycles.iter().map(|c| c.as_slice()).collect();
    Permutation::from_cycles(degree, &refs)
}

/// A permutation group given by a nonempty list of generators of equal degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
}

impl PermGroup {
    pub fn new(generators: Vec<Permutation>) -> Result<Self> {
        let first = generators.first().ok_or(Error::EmptyGroup)?;
        let degree = first.degree();
        for g in &generators {
            check_degree(degree, g.degree())?;
        }
        Ok(PermGroup { degree, generators })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup { degree, generators: vec![Permutation::identity(degree)] }
    }

    /// The cyclic group generated by `x -> x+1 mod n`.
    pub fn cyclic(n: usize) -> Self {
        let images = (0..n as u32).map(|x| (x + 1) % n as u32).collect();
        PermGroup { degree: n, generators: vec![Permutation { images }] }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Orbit of a point under the group, in breadth-first order.
    pub fn point_orbit(&self, x: u32) -> Vec<u32> {
        let mut seen = vec![false; self.degree];
        let mut orbit = vec![x];
        seen[x as usize] = true;
        let mut i = 0;
        while i < orbit.len() {
            let y = orbit[i];
            for g in &self.generators {
                let z = g.apply(y);
                if !core::mem::replace(&mut seen[z as usize], true) {
                    orbit.push(z);
                }
            }
            i += 1;
        }
        orbit
    }

    pub fn is_transitive(&self) -> bool {
        self.degree == 0 || self.point_orbit(0).len() == self.degree
    }

    /// Order of the group by breadth-first closure of the generators.
    ///
    /// Fails with [`Error::CapExceeded`] once more than `cap` elements are found.
    pub fn closure_order(&self, cap: u64) -> Result<u64> {
        let mut seen: HashSet<Box<[u32]>> = HashSet::new();
        let mut queue = VecDeque::new();
        let id: Box<[u32]> = Permutation::identity(self.degree).images.into_boxed_slice();
        seen.insert(id.clone());
        queue.push_back(id);
        while let Some(p) = queue.pop_front() {
            for g in &self.generators {
                let q: Box<[u32]> = p.iter().map(|&x| g.images[x as usize]).collect();
                if !seen.contains(&q) {
                    if seen.len() as u64 >= cap {
                        return Err(Error::CapExceeded { what: "group closure", cap });
                    }
                    seen.insert(q.clone());
                    queue.push_back(q);
                }
            }
        }
        Ok(seen.len() as u64)
    }

    /// Closure order with [`DEFAULT_CLOSURE_CAP`].
    pub fn order(&self) -> Result<u64> {
        self.closure_order(DEFAULT_CLOSURE_CAP)
    }

    /// Membership test by closure; only meant for small groups.
    pub fn contains(&self, p: &Permutation, cap: u64) -> Result<bool> {
        check_degree(self.degree, p.degree())?;
        let mut seen: HashSet<Box<[u32]>> = HashSet::new();
        let mut queue = VecDeque::new();
        let id: Box<[u32]> = Permutation::identity(self.degree).images.into_boxed_slice();
        if *id == *p.images {
            return Ok(true);
        }
        seen.insert(id.clone());
        queue.push_back(id);
        while let Some(e) = queue.pop_front() {
            for g in &self.generators {
                let q: Box<[u32]> = e.iter().map(|&x| g.images[x as usize]).collect();
                if *q == *p.images {
                    return Ok(true);
                }
                if !seen.contains(&q) {
                    if seen.len() as u64 >= cap {
                        return Err(Error::CapExceeded { what: "group closure", cap });
                    }
                    seen.insert(q.clone());
                    queue.push_back(q);
                }
            }
        }
        Ok(false)
    }

    /// Group generated by the generators of both groups.
    pub fn join(&self, other: &PermGroup) -> Result<PermGroup> {
        check_degree(self.degree, other.degree)?;
        let mut gens = self.generators.clone();
        for g in &other.generators {
            if !gens.contains(g) {
                gens.push(g.clone());
            }
        }
        PermGroup::new(gens)
    }
}

/// Parses the group file format: a `degree v` line followed by one
/// permutation per nonempty line in cycle notation; `#` starts a comment.
pub fn parse_group_file(text: &str) -> Result<PermGroup> {
    let mut degree: Option<usize> = None;
    let mut gens = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match degree {
            None => {
                let rest = line
                    .strip_prefix("degree")
                    .ok_or_else(|| Error::Parse { line: i + 1, msg: String::from("expected `degree v` header") })?;
                let v = rest
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse { line: i + 1, msg: format!("bad degree {:?}", rest.trim()) })?;
                degree = Some(v);
            }
            Some(v) => {
                let p = parse_cycle_notation(line, v).map_err(|e| match e {
                    Error::Parse { msg, .. } => Error::Parse { line: i + 1, msg },
                    other => other,
                })?;
                gens.push(p);
            }
        }
    }
    let Some(v) = degree else {
        return Err(Error::Parse { line: 0, msg: String::from("missing `degree v` header") });
    };
    if gens.is_empty() {
        return Ok(PermGroup::trivial(v));
    }
    PermGroup::new(gens)
}

/// Writes a group in the group file format.
pub fn format_group_file(group: &PermGroup) -> String {
    let mut s = format!("degree {}\n", group.degree());
    for g in group.generators() {
        s.push_str(&g.to_cycle_string());
        s.push('\n');
    }
    s
}
