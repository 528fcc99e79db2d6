//! Gap counting refutation for the square of a Hamiltonian cycle.
//!
//! Pick two disjoint classes `A` and `B` and call every other vertex free.
//! Going once around a cyclic ordering, the gap after an `A`-vertex is the
//! number of vertices before the next `A`-vertex. Gaps of 0 or 1 join
//! vertices at distance at most 2, which must be adjacent, and two zero gaps in
//! a row need the chord between the outer vertices. Cutting `A` at its gaps of
//! 2 or more leaves paths of `G[A]`, called chains.
//!
//! The gaps of `A` add up to the `|B| + free` other vertices. With `k` chains
//! and `x` zero gaps, each cut costs at least two and every other nonzero gap
//! exactly one, so
//!
//! ```text
//! k_A + |A| - x_A <= |B| + free.
//! ```
//!
//! A cut of `A` without a free vertex contains two adjacent `B`-vertices, which
//! is a zero gap of `B`, so `k_A <= x_B + free`; symmetrically for `B`. For
//! every chain count the largest `x` is computed over the linear forests of
//! `G[A]`, component by component, and the ordering is refuted when no pair of
//! chain counts meets all four inequalities.

use super::bit;

/// Linear forests enumerated per component before settling for a weaker bound.
const FOREST_CAP: u64 = 200_000;

/// `best[k]`: the most zero gaps a cover by exactly `k` chains can carry, or
/// `None` when no linear forest has `k` paths. Index 0 is unused.
type Profile = Vec<Option<u32>>;

/// True if the counting argument rules out the square of a Hamiltonian cycle
/// on `full`. `cut` is an arbitrary split tried besides the one read off the
/// complement.
pub(super) fn refuted(adj: &[u128], full: u128, cut: u128) -> bool {
    let mut splits = Vec::with_capacity(2);
    if let Some(split) = complement_classes(adj, full) {
        splits.push(split);
    }
    splits.push((cut & full, full & !cut));
    splits
        .into_iter()
        .any(|(a, b)| split_refuted(adj, full, a, b))
}

/// The two largest components of the complement with at least two vertices.
/// Vertices outside them are adjacent to everything outside their own
/// component, which makes them cheap free letters.
fn complement_classes(adj: &[u128], full: u128) -> Option<(u128, u128)> {
    let mut comps = Vec::new();
    let mut left = full;
    while left != 0 {
        let v = left.trailing_zeros() as usize;
        let mut comp = bit(v);
        let mut frontier = bit(v);
        while frontier != 0 {
            let u = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = full & !adj[u] & !bit(u) & !comp;
            comp |= fresh;
            frontier |= fresh;
        }
        left &= !comp;
        if comp.count_ones() >= 2 {
            comps.push(comp);
        }
    }
    if comps.len() < 2 {
        return None;
    }
    // stable: equal sizes keep the order of their smallest vertex
    comps.sort_by_key(|c| std::cmp::Reverse(c.count_ones()));
    Some((comps[0], comps[1]))
}

pub(super) fn split_refuted(adj: &[u128], full: u128, a: u128, b: u128) -> bool {
    let n = full.count_ones() as usize;
    let (ha, hb) = (a.count_ones() as usize, b.count_ones() as usize);
    let free = n - ha - hb;
    let opts_a = options(adj, a, ha, hb + free);
    if opts_a.is_empty() {
        return true;
    }
    let opts_b = options(adj, b, hb, ha + free);
    !opts_a.iter().any(|&(ka, xa)| {
        opts_b
            .iter()
            .any(|&(kb, xb)| ka <= xb + free && kb <= xa + free)
    })
}

/// `(chains, zero gaps)` pairs for one class that fit the `others` vertices
/// outside it. Zero chains stands for a class forming one closed chain, or for
/// an empty class.
fn options(adj: &[u128], class: u128, h: usize, others: usize) -> Vec<(usize, usize)> {
    if h == 0 {
        return vec![(0, 0)];
    }
    let mut out = Vec::new();
    // closed chain: every gap is 0 or 1, and exactly `others` of them are 1
    if others <= h {
        out.push((0, h - others));
    }
    for (k, x) in profile(adj, class).into_iter().enumerate() {
        if let Some(x) = x {
            let x = x as usize;
            if k >= 1 && k + h <= x + others {
                out.push((k, x));
            }
        }
    }
    out
}

fn profile(adj: &[u128], class: u128) -> Profile {
    let mut total: Profile = vec![Some(0)];
    let mut left = class;
    while left != 0 {
        let mut comp = bit(left.trailing_zeros() as usize);
        loop {
            let mut grown = comp;
            let mut it = comp;
            while it != 0 {
                let v = it.trailing_zeros() as usize;
                it &= it - 1;
                grown |= adj[v] & class;
            }
            if grown == comp {
                break;
            }
            comp = grown;
        }
        left &= !comp;
        total = max_plus(&total, &component_profile(adj, comp));
    }
    total
}

fn max_plus(p: &Profile, q: &Profile) -> Profile {
    let mut out = vec![None; p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        let Some(a) = a else { continue };
        for (j, b) in q.iter().enumerate() {
            if let Some(b) = b {
                let slot = &mut out[i + j];
                *slot = Some(slot.map_or(a + b, |s: u32| s.max(a + b)));
            }
        }
    }
    out
}

struct Forests<'a> {
    adj: &'a [u128],
    verts: Vec<usize>,
    edges: Vec<(usize, usize)>,
    /// forest neighbours of each local vertex, `usize::MAX` when absent
    links: Vec<[usize; 2]>,
    parent: Vec<usize>,
    best: Profile,
    visits: u64,
}

impl Forests<'_> {
    fn root(&self, mut v: usize) -> usize {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }

    fn chord(&self, u: usize, v: usize) -> bool {
        self.adj[self.verts[u]] & bit(self.verts[v]) != 0
    }

    /// Most zero gaps the current forest can carry: along each path, two
    /// consecutive zero links need the chord over their shared vertex.
    fn zero_gaps(&self) -> u32 {
        let size = self.verts.len();
        let mut seen = vec![false; size];
        let mut total = 0;
        for s in 0..size {
            if seen[s] || self.links[s][1] != usize::MAX {
                continue;
            }
            seen[s] = true;
            let (mut prev, mut cur) = (usize::MAX, s);
            // best counts so far with the last link zero / nonzero
            let (mut zero, mut one) = (i64::MIN / 2, 0i64);
            while let Some(&next) = self.links[cur]
                .iter()
                .find(|&&w| w != usize::MAX && w != prev)
            {
                let chained = prev != usize::MAX && self.chord(prev, next);
                let z = 1 + if chained { zero.max(one) } else { one };
                one = zero.max(one);
                zero = z;
                seen[next] = true;
                prev = cur;
                cur = next;
            }
            total += zero.max(one) as u32;
        }
        total
    }

    /// Include or skip each edge in turn. Returns false once the cap is hit.
    fn walk(&mut self, e: usize, used: usize) -> bool {
        self.visits += 1;
        if self.visits > FOREST_CAP {
            return false;
        }
        if e == self.edges.len() {
            let k = self.verts.len() - used;
            let x = self.zero_gaps();
            if self.best[k].is_none_or(|b| x > b) {
                self.best[k] = Some(x);
            }
            return true;
        }
        if !self.walk(e + 1, used) {
            return false;
        }
        let (u, v) = self.edges[e];
        let free_slot = |l: &[usize; 2]| l.iter().position(|&w| w == usize::MAX);
        let (Some(su), Some(sv)) = (free_slot(&self.links[u]), free_slot(&self.links[v])) else {
            return true;
        };
        let (ru, rv) = (self.root(u), self.root(v));
        if ru == rv {
            return true;
        }
        self.links[u][su] = v;
        self.links[v][sv] = u;
        self.parent[ru] = rv;
        let ok = self.walk(e + 1, used + 1);
        self.parent[ru] = ru;
        self.links[u][su] = usize::MAX;
        self.links[v][sv] = usize::MAX;
        ok
    }
}

/// Exact profile of one connected component, or a weaker but safe one when
/// it has too many linear forests to list.
fn component_profile(adj: &[u128], comp: u128) -> Profile {
    let mut verts = Vec::with_capacity(comp.count_ones() as usize);
    let mut it = comp;
    while it != 0 {
        verts.push(it.trailing_zeros() as usize);
        it &= it - 1;
    }
    let size = verts.len();
    let mut edges = Vec::new();
    for i in 0..size {
        for j in i + 1..size {
            if adj[verts[i]] & bit(verts[j]) != 0 {
                edges.push((i, j));
            }
        }
    }
    let mut f = Forests {
        adj,
        verts,
        edges,
        links: vec![[usize::MAX; 2]; size],
        parent: (0..size).collect(),
        best: vec![None; size + 1],
        visits: 0,
    };
    if f.walk(0, 0) {
        return f.best;
    }
    // A path on s vertices whose zero links meet at c shared vertices carries
    // at most (s + c) / 2 of them, and distinct shared vertices sit in
    // distinct triangles.
    let triangles: u32 = f
        .edges
        .iter()
        .map(|&(i, j)| (adj[f.verts[i]] & adj[f.verts[j]] & comp).count_ones())
        .sum::<u32>()
        / 3;
    let cap = (size as u32 + triangles) / 2;
    let mut best = vec![None; size + 1];
    for (k, slot) in best.iter_mut().enumerate().skip(1) {
        *slot = Some(cap.min((size - k) as u32));
    }
    best
}
