//! Exact cover by Algorithm X on a dancing-links matrix.
//!
//! Rows of the matrix are constraints that must each be covered exactly once;
//! columns are the choices. A solution is a set of columns whose supports
//! partition the rows. In the Kramer–Mesner setting the rows are residual
//! triple orbits and the columns admissible tetrad orbits.
//!
//! Internally the roles are the usual DLX ones: every constraint row is a
//! header ("item") and every choice column is a linked option.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

const ROOT: usize = 0;

/// Sparse 0/1 matrix with four-way circular links.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverMatrix {
    n_rows: usize,
    n_cols: usize,
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    /// Header node (constraint row + 1) of each node; headers point at themselves.
    header: Vec<usize>,
    /// Choice column of each non-header node.
    choice: Vec<u32>,
    /// Remaining 1-count per header.
    len: Vec<u32>,
    /// Supports of the choice columns, as given.
    supports: Vec<Vec<u32>>,
}

impl CoverMatrix {
    /// Builds a matrix from choice columns, each listing the constraint rows it covers.
    pub fn from_columns(n_rows: usize, columns: &[Vec<u32>]) -> Result<Self> {
        let headers = n_rows + 1;
        let total: usize = headers + columns.iter().map(|c| c.len()).sum::<usize>();
        let mut m = CoverMatrix {
            n_rows,
            n_cols: columns.len(),
            left: Vec::with_capacity(total),
            right: Vec::with_capacity(total),
            up: Vec::with_capacity(total),
            down: Vec::with_capacity(total),
            header: Vec::with_capacity(total),
            choice: Vec::with_capacity(total),
            len: alloc::vec![0; headers],
            supports: Vec::with_capacity(columns.len()),
        };
        for i in 0..headers {
            m.left.push(if i == 0 { n_rows } else { i - 1 });
            m.right.push(if i == n_rows { 0 } else { i + 1 });
            m.up.push(i);
            m.down.push(i);
            m.header.push(i);
            m.choice.push(u32::MAX);
        }
        for (c, rows) in columns.iter().enumerate() {
            let mut rows = rows.clone();
            rows.sort_unstable();
            rows.dedup();
            if let Some(&r) = rows.last() {
                if r as usize >= n_rows {
                    return Err(Error::RaggedMatrix { row: r as usize, expected: n_rows, found: r as usize + 1 });
                }
            }
            let first = m.header.len();
            let k = rows.len();
            for (i, &r) in rows.iter().enumerate() {
                let node = first + i;
                let h = r as usize + 1;
                m.left.push(if i == 0 { first + k - 1 } else { node - 1 });
                m.right.push(if i + 1 == k { first } else { node + 1 });
                let last = m.up[h];
                m.up.push(last);
                m.down.push(h);
                m.down[last] = node;
                m.up[h] = node;
                m.header.push(h);
                m.choice.push(c as u32);
                m.len[h] += 1;
            }
            m.supports.push(rows);
        }
        Ok(m)
    }

    /// Builds a matrix from dense constraint rows of 0/1 entries.
    pub fn from_dense(rows: &[Vec<u8>]) -> Result<Self> {
        let n_cols = rows.first().map_or(0, |r| r.len());
        let mut columns = alloc::vec![Vec::new(); n_cols];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_cols {
                return Err(Error::RaggedMatrix { row: i, expected: n_cols, found: row.len() });
            }
            for (j, &e) in row.iter().enumerate() {
                match e {
                    0 => {}
                    1 => columns[j].push(i as u32),
                    _ => return Err(Error::Parse { line: i + 1, msg: format!("entry {e} is not 0/1") }),
                }
            }
        }
        Self::from_columns(rows.len(), &columns)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Rows covered by choice column `c`.
    pub fn support(&self, c: usize) -> &[u32] {
        &self.supports[c]
    }

    /// The implied dense matrix.
    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        let mut d = alloc::vec![alloc::vec![0u8; self.n_cols]; self.n_rows];
        for (c, rows) in self.supports.iter().enumerate() {
            for &r in rows {
                d[r as usize][c] = 1;
            }
        }
        d
    }

    /// Current number of 1s in a constraint row (restricted to uncovered columns).
    pub fn row_count(&self, row: usize) -> usize {
        self.len[row + 1] as usize
    }

    /// Constraint rows that no column covers.
    pub fn empty_rows(&self) -> Vec<usize> {
        (0..self.n_rows).filter(|&r| self.len[r + 1] == 0).collect()
    }

    /// FNV-1a hash over every link array, for checking that cover/uncover
    /// sequences restore the structure exactly.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x100_0000_01b3);
            }
        };
        for arr in [&self.left, &self.right, &self.up, &self.down] {
            for &x in arr.iter() {
                eat(x as u64);
            }
        }
        for &x in &self.len {
            eat(x as u64);
        }
        h
    }

    /// Whether constraint row `row` is still linked into the header list.
    pub fn is_active(&self, row: usize) -> bool {
        let h = row + 1;
        self.right[self.left[h]] == h
    }

    /// Removes constraint row `row` and every choice column that covers it.
    pub fn cover(&mut self, row: usize) {
        self.cover_header(row + 1)
    }

    /// Exact inverse of [`CoverMatrix::cover`]; calls must nest.
    pub fn uncover(&mut self, row: usize) {
        self.uncover_header(row + 1)
    }

    fn cover_header(&mut self, h: usize) {
        let (l, r) = (self.left[h], self.right[h]);
        self.right[l] = r;
        self.left[r] = l;
        let mut i = self.down[h];
        while i != h {
            let mut j = self.right[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.len[self.header[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover_header(&mut self, h: usize) {
        let mut i = self.up[h];
        while i != h {
            let mut j = self.left[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = j;
                self.up[d] = j;
                self.len[self.header[j]] += 1;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (l, r) = (self.left[h], self.right[h]);
        self.right[l] = h;
        self.left[r] = h;
    }

    fn select(&mut self, node: usize) {
        let mut j = self.right[node];
        while j != node {
            self.cover_header(self.header[j]);
            j = self.right[j];
        }
    }

    fn unselect(&mut self, node: usize) {
        let mut j = self.left[node];
        while j != node {
            self.uncover_header(self.header[j]);
            j = self.left[j];
        }
    }

    /// Active header with the fewest remaining 1s, ties to the lowest row.
    fn choose_header(&self) -> usize {
        let mut best = self.right[ROOT];
        let mut h = best;
        while h != ROOT {
            if self.len[h] < self.len[best] {
                best = h;
                if self.len[h] == 0 {
                    break;
                }
            }
            h = self.right[h];
        }
        best
    }

    /// Lazily enumerates all exact covers, at most `limit` of them.
    ///
    /// Solutions are sorted column-id lists, produced in a fixed order. The
    /// matrix is restored when the iterator is dropped.
    pub fn solutions(&mut self, limit: Option<u64>) -> Solutions<&mut CoverMatrix> {
        Solutions::new(self, limit)
    }

    /// Owning variant of [`CoverMatrix::solutions`].
    pub fn into_solutions(self, limit: Option<u64>) -> Solutions<CoverMatrix> {
        Solutions::new(self, limit)
    }

    /// Writes the matrix as an `r rows cols` header followed by one
    /// `e row col` line per 1-entry.
    pub fn to_libexact_text(&self) -> String {
        let mut s = format!("r {} {}\n", self.n_rows, self.n_cols);
        let mut entries: Vec<(u32, usize)> = Vec::new();
        for (c, rows) in self.supports.iter().enumerate() {
            entries.extend(rows.iter().map(|&r| (r, c)));
        }
        entries.sort_unstable();
        for (r, c) in entries {
            s.push_str(&format!("e {r} {c}\n"));
        }
        s
    }

    /// Reads the format written by [`CoverMatrix::to_libexact_text`].
    pub fn from_libexact_text(text: &str) -> Result<Self> {
        let mut dims: Option<(usize, usize)> = None;
        let mut columns: Vec<Vec<u32>> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: &str| Error::Parse { line: i + 1, msg: String::from(msg) };
            let mut it = line.split_whitespace();
            let tag = it.next().unwrap_or("");
            let a: usize = it.next().and_then(|t| t.parse().ok()).ok_or_else(|| bad("expected two integers"))?;
            let b: usize = it.next().and_then(|t| t.parse().ok()).ok_or_else(|| bad("expected two integers"))?;
            if it.next().is_some() {
                return Err(bad("trailing tokens"));
            }
            match (tag, dims) {
                ("r", None) => {
                    dims = Some((a, b));
                    columns = alloc::vec![Vec::new(); b];
                }
                ("e", Some((rows, cols))) => {
                    if a >= rows || b >= cols {
                        return Err(bad("entry outside declared dimensions"));
                    }
                    columns[b].push(a as u32);
                }
                ("r", Some(_)) => return Err(bad("duplicate header")),
                _ => return Err(bad("expected `r rows cols` header or `e row col` entry")),
            }
        }
        let (rows, _) = dims.ok_or(Error::Parse { line: 0, msg: String::from("missing header") })?;
        Self::from_columns(rows, &columns)
    }
}

/// Iterator over exact covers; see [`CoverMatrix::solutions`].
pub struct Solutions<M: core::borrow::BorrowMut<CoverMatrix>> {
    matrix: M,
    /// Chosen (header, option node) pairs along the current branch.
    stack: Vec<(usize, usize)>,
    started: bool,
    finished: bool,
    limit: Option<u64>,
    emitted: u64,
    nodes: u64,
}

impl<M: core::borrow::BorrowMut<CoverMatrix>> Solutions<M> {
    fn new(matrix: M, limit: Option<u64>) -> Self {
        Solutions { matrix, stack: Vec::new(), started: false, finished: false, limit, emitted: 0, nodes: 0 }
    }

    /// Search-tree nodes visited so far.
    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    /// Total number of solutions found, draining the iterator.
    pub fn count_all(mut self) -> u64 {
        let mut n = 0;
        while self.next().is_some() {
            n += 1;
        }
        n
    }

    fn current(&self) -> Vec<u32> {
        let m = self.matrix.borrow();
        let mut cols: Vec<u32> = self.stack.iter().map(|&(_, node)| m.choice[node]).collect();
        cols.sort_unstable();
        cols
    }

    /// Descends from the current state until a solution or a dead end.
    /// Returns true on a solution.
    fn descend(&mut self) -> bool {
        loop {
            let m = self.matrix.borrow_mut();
            if m.right[ROOT] == ROOT {
                return true;
            }
            self.nodes += 1;
            let h = m.choose_header();
            if m.len[h] == 0 {
                return false;
            }
            m.cover_header(h);
            let node = m.down[h];
            m.select(node);
            self.stack.push((h, node));
        }
    }

    /// Moves to the next sibling branch. Returns false when exhausted.
    fn advance(&mut self) -> bool {
        while let Some((h, node)) = self.stack.pop() {
            let m = self.matrix.borrow_mut();
            m.unselect(node);
            let next = m.down[node];
            if next != h {
                m.select(next);
                self.stack.push((h, next));
                return true;
            }
            m.uncover_header(h);
        }
        false
    }

    fn unwind(&mut self) {
        while let Some((h, node)) = self.stack.pop() {
            let m = self.matrix.borrow_mut();
            m.unselect(node);
            m.uncover_header(h);
        }
    }
}

impl<M: core::borrow::BorrowMut<CoverMatrix>> Iterator for Solutions<M> {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.finished {
            return None;
        }
        if self.limit.is_some_and(|l| self.emitted >= l) {
            self.unwind();
            self.finished = true;
            return None;
        }
        if !self.started {
            self.started = true;
            if !self.matrix.borrow().empty_rows().is_empty() {
                self.finished = true;
                return None;
            }
            if self.descend() {
                self.emitted += 1;
                return Some(self.current());
            }
        }
        loop {
            if !self.advance() {
                self.finished = true;
                return None;
            }
            if self.descend() {
                self.emitted += 1;
                return Some(self.current());
            }
        }
    }
}

impl<M: core::borrow::BorrowMut<CoverMatrix>> Drop for Solutions<M> {
    fn drop(&mut self) {
        self.unwind();
    }
}
