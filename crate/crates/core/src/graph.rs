//! Immutable simple graphs on `0..n` with bit-matrix adjacency.
//!
//! Every hot loop in the crate is a neighbourhood intersection, so rows are
//! stored as packed `u64` words and vertex sets share the same layout.

use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gadgets::{Label, LabeledGadget, Role};

/// Upper bound on the vertex count of a bit-matrix graph.
pub const MAX_VERTICES: usize = 1 << 14;

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

/// A subset of `0..n` stored as a bitmask.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            n,
            words: vec![0; words_for(n)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    pub fn from_vertices(n: usize, vertices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::empty(n);
        for v in vertices {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            s.insert(v);
        }
        Ok(s)
    }

    pub(crate) fn from_words(n: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(n));
        VertexSet { n, words }
    }

    /// Size of the universe, not of the set.
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        debug_assert!(v < self.n);
        self.words[v / 64] |= 1 << (v % 64);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.words[v / 64] &= !(1 << (v % 64));
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.n && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersect_with(&mut self, other: &[u64]) {
        for (a, b) in self.words.iter_mut().zip(other) {
            *a &= *b;
        }
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        out.intersect_with(&other.words);
        out
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
        out
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A sequence of pairwise distinct vertices, e.g. the ends of an m-path.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrderedTuple(Vec<usize>);

impl OrderedTuple {
    pub fn new(vertices: Vec<usize>, n: usize) -> Result<Self> {
        let mut seen = VertexSet::empty(n);
        for &v in &vertices {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if seen.contains(v) {
                return Err(Error::RepeatedVertex(v));
            }
            seen.insert(v);
        }
        Ok(OrderedTuple(vertices))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn as_set(&self, n: usize) -> VertexSet {
        let mut s = VertexSet::empty(n);
        for &v in &self.0 {
            s.insert(v);
        }
        s
    }

    pub fn first_overlap(&self, other: &OrderedTuple) -> Option<usize> {
        self.0.iter().copied().find(|v| other.0.contains(v))
    }
}

impl std::ops::Index<usize> for OrderedTuple {
    type Output = usize;
    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

/// Mutable adjacency used while a graph is being assembled.
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    n: usize,
    stride: usize,
    adj: Vec<u64>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "graph too large for a bit matrix: {n}");
        let stride = words_for(n);
        GraphBuilder {
            n,
            stride,
            adj: vec![0; n * stride],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Adds `{u, v}`; returns false if it was already present.
    #[inline]
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        debug_assert!(u < self.n && v < self.n && u != v);
        let (wu, bu) = (u / 64, 1u64 << (u % 64));
        let (wv, bv) = (v / 64, 1u64 << (v % 64));
        let present = self.adj[u * self.stride + wv] & bv != 0;
        self.adj[u * self.stride + wv] |= bv;
        self.adj[v * self.stride + wu] |= bu;
        !present
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.stride + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn try_add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        for x in [u, v] {
            if x >= self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: x,
                    n: self.n,
                });
            }
        }
        if u == v {
            return Err(Error::LoopEdge(u));
        }
        Ok(self.add_edge(u, v))
    }

    pub fn add_clique(&mut self, vertices: &[usize]) {
        for (i, &u) in vertices.iter().enumerate() {
            for &v in &vertices[i + 1..] {
                self.add_edge(u, v);
            }
        }
    }

    pub fn add_biclique(&mut self, left: &[usize], right: &[usize]) {
        for &u in left {
            for &v in right {
                self.add_edge(u, v);
            }
        }
    }

    pub fn build(self) -> Graph {
        let edge_count = self
            .adj
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum::<usize>()
            / 2;
        Graph {
            n: self.n,
            stride: self.stride,
            adj: self.adj,
            edge_count,
        }
    }
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    stride: usize,
    adj: Vec<u64>,
    edge_count: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// Builds a graph from an edge list; repeated pairs are merged.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::InvalidParameter(format!(
                "{n} vertices exceeds the bit-matrix cap {MAX_VERTICES}"
            )));
        }
        let mut b = GraphBuilder::new(n);
        for &(u, v) in edges {
            b.try_add_edge(u, v)?;
        }
        Ok(b.build())
    }

    pub fn empty(n: usize) -> Self {
        GraphBuilder::new(n).build()
    }

    pub fn complete(n: usize) -> Self {
        let mut b = GraphBuilder::new(n);
        let all: Vec<usize> = (0..n).collect();
        b.add_clique(&all);
        b.build()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Raw adjacency row of `v` as packed words.
    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.stride..(v + 1) * self.stride]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u * self.stride + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet::from_words(self.n, self.row(v).to_vec())
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Minimum degree; 0 for the empty graph on zero vertices.
    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            VertexSet::from_words(self.n, self.row(u).to_vec())
                .iter()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
                .collect::<Vec<_>>()
        })
    }

    /// `N(J)`: vertices adjacent to every member of `j`.
    pub fn joint_neighborhood(&self, j: &VertexSet) -> Result<VertexSet> {
        if j.universe() != self.n {
            return Err(Error::SizeMismatch(j.universe(), self.n));
        }
        let mut out: Option<VertexSet> = None;
        for u in j.iter() {
            match out.as_mut() {
                None => out = Some(self.neighbors(u)),
                Some(s) => s.intersect_with(self.row(u)),
            }
        }
        out.ok_or(Error::EmptySet)
    }

    pub fn joint_neighborhood_of(&self, vertices: &[usize]) -> Result<VertexSet> {
        self.joint_neighborhood(&VertexSet::from_vertices(self.n, vertices.iter().copied())?)
    }

    /// Number of edges with both endpoints in `s`.
    pub fn induced_edge_count(&self, s: &VertexSet) -> usize {
        s.iter()
            .map(|u| {
                self.row(u)
                    .iter()
                    .zip(s.words())
                    .map(|(a, b)| (a & b).count_ones() as usize)
                    .sum::<usize>()
            })
            .sum::<usize>()
            / 2
    }

    /// Edge-set union of two graphs on the same vertex count.
    pub fn union(&self, other: &Graph) -> Result<Graph> {
        if self.n != other.n {
            return Err(Error::SizeMismatch(self.n, other.n));
        }
        let mut b = GraphBuilder {
            n: self.n,
            stride: self.stride,
            adj: self.adj.clone(),
        };
        for (a, o) in b.adj.iter_mut().zip(&other.adj) {
            *a |= *o;
        }
        Ok(b.build())
    }

    /// Edges present in both graphs.
    pub fn intersection(&self, other: &Graph) -> Result<Graph> {
        if self.n != other.n {
            return Err(Error::SizeMismatch(self.n, other.n));
        }
        let mut b = GraphBuilder {
            n: self.n,
            stride: self.stride,
            adj: self.adj.clone(),
        };
        for (a, o) in b.adj.iter_mut().zip(&other.adj) {
            *a &= *o;
        }
        Ok(b.build())
    }

    /// First edge of `self` missing from `other`, if any.
    pub fn first_edge_not_in(&self, other: &Graph) -> Option<(usize, usize)> {
        if self.n != other.n {
            return self.edges().next();
        }
        self.edges().find(|&(u, v)| !other.has_edge(u, v))
    }

    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.adj.iter().zip(&other.adj).all(|(a, b)| a & !b == 0)
    }

    /// Subgraph induced on `vertices`, relabelled to `0..vertices.len()` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut b = GraphBuilder::new(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    b.add_edge(i, j);
                }
            }
        }
        b.build()
    }

    /// Vertex-disjoint union; the vertices of `parts[i]` are shifted past all earlier parts.
    pub fn disjoint_union(parts: &[&Graph]) -> Graph {
        let n: usize = parts.iter().map(|g| g.n).sum();
        let mut b = GraphBuilder::new(n);
        let mut offset = 0;
        for g in parts {
            for (u, v) in g.edges() {
                b.add_edge(u + offset, v + offset);
            }
            offset += g.n;
        }
        b.build()
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = VertexSet::empty(self.n);
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen.contains(s) {
                continue;
            }
            seen.insert(s);
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for v in self.neighbors(u).iter() {
                    if !seen.contains(v) {
                        seen.insert(v);
                        comp.push(v);
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Text edge list: `n e` then one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edge_count);
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_edge_list().as_bytes())?;
        Ok(())
    }

    /// Parses the edge-list format. In strict mode duplicate and loop lines are
    /// rejected; otherwise duplicates are merged and loops dropped.
    pub fn parse_edge_list(text: &str, strict: bool) -> Result<Graph> {
        Self::read_edge_list_from(text.as_bytes(), strict)
    }

    pub fn read_edge_list_from<R: BufRead>(reader: R, strict: bool) -> Result<Graph> {
        let mut lines = reader
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| l.as_ref().map(|s| !s.trim().is_empty()).unwrap_or(true));
        let (line_no, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let header = header?;
        let (n, e) = parse_pair(&header, line_no)?;
        if n > MAX_VERTICES {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("{n} vertices exceeds the cap {MAX_VERTICES}"),
            });
        }
        let mut b = GraphBuilder::new(n);
        let mut seen_lines = 0;
        for (line_no, line) in lines {
            let line = line?;
            let (u, v) = parse_pair(&line, line_no)?;
            seen_lines += 1;
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange {
                    vertex: u.max(v),
                    n,
                });
            }
            if u == v {
                if strict {
                    return Err(Error::LoopEdge(u));
                }
                continue;
            }
            if !b.add_edge(u, v) && strict {
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
        }
        if seen_lines != e {
            return Err(Error::Parse {
                line: 1,
                msg: format!("header announces {e} edges, found {seen_lines}"),
            });
        }
        Ok(b.build())
    }

    pub fn read_edge_list(path: &Path, strict: bool) -> Result<Graph> {
        let f = std::fs::File::open(path)?;
        Self::read_edge_list_from(std::io::BufReader::new(f), strict)
    }
}

fn parse_pair(line: &str, line_no: usize) -> Result<(usize, usize)> {
    let mut it = line.split_ascii_whitespace();
    let mut next = || -> Result<usize> {
        it.next()
            .ok_or_else(|| Error::Parse {
                line: line_no,
                msg: "expected two integers".into(),
            })?
            .parse()
            .map_err(|e| Error::Parse {
                line: line_no,
                msg: format!("{e}"),
            })
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line: line_no,
            msg: "trailing tokens".into(),
        });
    }
    Ok((a, b))
}

/// `P^m_s`: path on `0..s` with every pair at distance at most `m` joined.
pub fn power_path(s: usize, m: usize) -> Graph {
    let mut b = GraphBuilder::new(s);
    for u in 0..s {
        for v in u + 1..s.min(u + m + 1) {
            b.add_edge(u, v);
        }
    }
    b.build()
}

/// `C^m_n`: cycle on `0..n` with every pair at cyclic distance at most `m` joined.
pub fn power_cycle(n: usize, m: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "power cycle needs n >= 3, got {n}"
        )));
    }
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for d in 1..=m.min(n / 2) {
            b.add_edge(u, (u + d) % n);
        }
    }
    Ok(b.build())
}

/// Blow-up `F(t_1, ..., t_h)`: vertex `i` becomes an independent class of `sizes[i]`
/// consecutive ids, and every edge of `f` becomes a complete bipartite graph.
pub fn blow_up(f: &Graph, sizes: &[usize]) -> Result<LabeledGadget> {
    if sizes.len() != f.n() {
        return Err(Error::LengthMismatch {
            expected: f.n(),
            actual: sizes.len(),
        });
    }
    let mut starts = Vec::with_capacity(sizes.len() + 1);
    let mut acc = 0;
    for &s in sizes {
        starts.push(acc);
        acc += s;
    }
    starts.push(acc);
    if acc > MAX_VERTICES {
        return Err(Error::InvalidParameter(format!(
            "blow-up has {acc} vertices, above the cap {MAX_VERTICES}"
        )));
    }
    let mut b = GraphBuilder::new(acc);
    for (i, j) in f.edges() {
        for u in starts[i]..starts[i + 1] {
            for v in starts[j]..starts[j + 1] {
                b.add_edge(u, v);
            }
        }
    }
    let mut labels = Vec::with_capacity(acc);
    for (class, &s) in sizes.iter().enumerate() {
        for pos in 0..s {
            labels.push(Label::new(Role::Class, 0, class, pos));
        }
    }
    LabeledGadget::new(b.build(), labels)
}

/// Writes the edge list of `g` to `w`.
pub fn write_graph<W: Write>(g: &Graph, w: W) -> Result<()> {
    g.write_edge_list(w)
}
