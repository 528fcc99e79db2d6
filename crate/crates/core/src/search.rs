//! Exact detection of `C_n^m` by budgeted backtracking, clique counting, and
//! the tuple predicates used by the connecting and absorbing arguments.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::experiments::rng::splitmix64;
use crate::gadgets::ProblemParams;
use crate::graph::{Graph, OrderedTuple};

mod gaps;

/// Largest graph the exact solver accepts (one `u128` word per row).
pub const MAX_SEARCH_VERTICES: usize = 128;
/// Number of dead states remembered per search.
const MEMO_CAP: usize = 1 << 20;
/// Nodes between wall-clock checks.
const CLOCK_STRIDE: u64 = 1024;
/// Node cap of the first restart; each later restart doubles it.
const FIRST_RUN_NODES: u64 = 20_000;
/// How many degree points the random tie-break may override on restarts.
const TIE_SPREAD: u64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_millis: u64,
    /// Report wall-clock time in the outcome. Off by default so outcomes are
    /// reproducible byte for byte.
    pub record_stats: bool,
}

impl SearchBudget {
    pub fn new(max_nodes: u64, max_millis: u64, record_stats: bool) -> Result<Self> {
        if max_nodes == 0 || max_millis == 0 {
            return Err(Error::InvalidParameter(
                "search budget limits must be positive".into(),
            ));
        }
        Ok(SearchBudget {
            max_nodes,
            max_millis,
            record_stats,
        })
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 50_000_000,
            max_millis: 600_000,
            record_stats: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// A cyclic ordering in which every pair at distance at most `m` is an edge.
    Found(Vec<usize>),
    /// The search tree was exhausted.
    NotFound,
    /// The budget ran out first. This is censored, not negative.
    Timeout,
}

impl Verdict {
    pub fn token(&self) -> &'static str {
        match self {
            Verdict::Found(_) => "found",
            Verdict::NotFound => "not_found",
            Verdict::Timeout => "timeout",
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Verdict::Found(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub verdict: Verdict,
    pub nodes_expanded: u64,
    pub elapsed: Option<Duration>,
}

impl Serialize for SearchOutcome {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            verdict: &'static str,
            #[serde(skip_serializing_if = "Option::is_none")]
            witness: Option<&'a [usize]>,
            nodes_expanded: u64,
            #[serde(skip_serializing_if = "Option::is_none")]
            elapsed_ms: Option<f64>,
        }
        let witness = match &self.verdict {
            Verdict::Found(w) => Some(w.as_slice()),
            _ => None,
        };
        Repr {
            verdict: self.verdict.token(),
            witness,
            nodes_expanded: self.nodes_expanded,
            elapsed_ms: self.elapsed.map(|d| d.as_secs_f64() * 1e3),
        }
        .serialize(s)
    }
}

/// Checks that `order` is a permutation of `V(g)` whose `m`-th cyclic power
/// lies in `g`. Deliberately independent of the solver: it only uses
/// `Graph::has_edge`.
pub fn is_power_cycle_witness(g: &Graph, order: &[usize], m: usize) -> bool {
    let n = g.n();
    if order.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    for i in 0..n {
        for j in i + 1..n {
            let dist = (j - i).min(n - (j - i));
            if dist <= m && !g.has_edge(order[i], order[j]) {
                return false;
            }
        }
    }
    true
}

/// `sequence` spans an `m`-path in `g`: entries at index distance at most `m`
/// are adjacent.
pub fn is_power_path(g: &Graph, sequence: &[usize], m: usize) -> bool {
    sequence.iter().enumerate().all(|(i, &a)| {
        sequence[i + 1..(i + m + 1).min(sequence.len())]
            .iter()
            .all(|&b| g.has_edge(a, b))
    })
}

/// Counting certificate that `g` contains no square of a Hamiltonian cycle,
/// hence no `m`-th power for any `m >= 2`. `false` is inconclusive.
///
/// Two disjoint vertex classes are cut into paths at the places where the
/// ordering leaves them for two or more steps; the cuts and single steps
/// outside a class must fit into the vertices outside it. See the solver for
/// where this runs.
pub fn refutes_square_cycle(g: &Graph) -> Result<bool> {
    let n = g.n();
    if n > MAX_SEARCH_VERTICES {
        return Err(Error::SearchTooLarge {
            n,
            max: MAX_SEARCH_VERTICES,
        });
    }
    if n < 4 {
        return Ok(false);
    }
    let adj = adjacency(g);
    let full = full_mask(n);
    Ok(gaps::refuted(&adj, full, local_max_cut(&adj, full)))
}

fn adjacency(g: &Graph) -> Vec<u128> {
    (0..g.n())
        .map(|v| {
            let row = g.row(v);
            row[0] as u128 | (row.get(1).copied().unwrap_or(0) as u128) << 64
        })
        .collect()
}

/// Splits the vertices in `within` into two sides, locally maximising the
/// number of edges between them. Deterministic.
fn local_max_cut(adj: &[u128], within: u128) -> u128 {
    let mut side = 0u128;
    let mut rest = within;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let placed = within & !rest & !bit(v);
        let on_a = (adj[v] & side & placed).count_ones();
        let on_b = (adj[v] & !side & placed).count_ones();
        if on_a <= on_b {
            side |= bit(v);
        }
    }
    for _ in 0..4 * adj.len() {
        let mut improved = false;
        let mut rest = within;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let own = if side & bit(v) != 0 {
                side
            } else {
                within & !side
            };
            let same = (adj[v] & own).count_ones();
            let other = (adj[v] & within & !own).count_ones();
            if same > other {
                side ^= bit(v);
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    side
}

/// Lower bound on the number of paths needed to cover `set` by vertex-disjoint
/// paths of `adj[set]`. Per component: its order minus the largest fractional
/// 2-matching, computed as a flow in the bipartite double cover.
fn path_cover_lower_bound(adj: &[u128], set: u128) -> usize {
    let mut total = 0;
    let mut left = set;
    while left != 0 {
        let mut comp = bit(left.trailing_zeros() as usize);
        loop {
            let mut grown = comp;
            let mut it = comp;
            while it != 0 {
                let v = it.trailing_zeros() as usize;
                it &= it - 1;
                grown |= adj[v] & set;
            }
            if grown == comp {
                break;
            }
            comp = grown;
        }
        left &= !comp;
        let size = comp.count_ones() as usize;
        let matched = if size == 1 {
            0
        } else {
            double_cover_flow(adj, comp) / 2
        };
        total += size.saturating_sub(matched).max(1);
    }
    total
}

/// Max flow with capacity 2 at every vertex on both sides and 1 on every arc
/// `u → v` for edges `uv` inside `set`.
fn double_cover_flow(adj: &[u128], set: u128) -> usize {
    let verts: Vec<usize> = {
        let mut v = Vec::new();
        let mut it = set;
        while it != 0 {
            v.push(it.trailing_zeros() as usize);
            it &= it - 1;
        }
        v
    };
    let k = verts.len();
    let mut slot = [usize::MAX; MAX_SEARCH_VERTICES];
    for (i, &v) in verts.iter().enumerate() {
        slot[v] = i;
    }
    // flow[i] = right-side vertices currently receiving flow from left i
    let mut flow = vec![0u128; k];
    let mut out = vec![0u8; k];
    let mut inn = vec![0u8; k];
    let mut total = 0;
    loop {
        // BFS over left vertices; reaching a right vertex with spare capacity
        // ends the search, otherwise continue from the left vertices feeding it
        let mut from_left = vec![usize::MAX; k]; // right j reached from left i
        let mut via_right = vec![usize::MAX; k]; // left i reached through right j
        let mut seen_left = vec![false; k];
        let mut queue = std::collections::VecDeque::new();
        for i in 0..k {
            if out[i] < 2 {
                seen_left[i] = true;
                queue.push_back(i);
            }
        }
        let mut end = None;
        'bfs: while let Some(i) = queue.pop_front() {
            let mut nb = adj[verts[i]] & set & !flow[i];
            while nb != 0 {
                let j = slot[nb.trailing_zeros() as usize];
                nb &= nb - 1;
                if from_left[j] != usize::MAX {
                    continue;
                }
                from_left[j] = i;
                if inn[j] < 2 {
                    end = Some(j);
                    break 'bfs;
                }
                for i2 in 0..k {
                    if !seen_left[i2] && flow[i2] & bit(verts[j]) != 0 {
                        seen_left[i2] = true;
                        via_right[i2] = j;
                        queue.push_back(i2);
                    }
                }
            }
        }
        let Some(mut j) = end else { break };
        inn[j] += 1;
        loop {
            let i = from_left[j];
            flow[i] |= bit(verts[j]);
            let back = via_right[i];
            if back == usize::MAX {
                out[i] += 1;
                break;
            }
            flow[i] &= !bit(verts[back]);
            j = back;
        }
        total += 1;
    }
    total
}

/// Necessary condition for the square of a Hamiltonian cycle on `set`.
///
/// Colour the vertices with two sides. Same-side vertices at distance at most
/// 2 along the ordering must be adjacent, so each side is covered by paths of
/// its induced graph, one per maximal run of the other side of length at
/// least 2. Counting runs bounds the two path-cover numbers together by the
/// smaller side plus one.
fn run_count_ok(adj: &[u128], set: u128, side: u128) -> bool {
    let a = set & side;
    let b = set & !side;
    if a == 0 || b == 0 {
        return true;
    }
    let room = (a.count_ones().min(b.count_ones()) as usize) + 1;
    let pa = path_cover_lower_bound(adj, a);
    if pa > room {
        return false;
    }
    pa + path_cover_lower_bound(adj, b) <= room
}

enum Step {
    Found,
    Dead,
    Abort,
}

struct Solver<'a> {
    n: usize,
    m: usize,
    need: u32,
    adj: Vec<u128>,
    order: Vec<usize>,
    used: u128,
    nodes: u64,
    /// Node count at which the current run stops.
    limit: u64,
    /// Tie-breaking seed for candidate order; 0 keeps vertex order.
    noise: u64,
    out_of_time: bool,
    budget: &'a SearchBudget,
    start: Instant,
    memo: HashSet<(u128, Vec<u8>)>,
}

#[inline]
fn bit(v: usize) -> u128 {
    1u128 << v
}

fn full_mask(n: usize) -> u128 {
    if n == 128 {
        u128::MAX
    } else {
        bit(n) - 1
    }
}

impl Solver<'_> {
    fn full(&self) -> u128 {
        full_mask(self.n)
    }

    fn memo_key(&self, i: usize) -> Option<(u128, Vec<u8>)> {
        let head = self.m.max(2);
        if i <= head || i + 1 >= self.n {
            return None;
        }
        let mut key = Vec::with_capacity(head + self.m);
        key.extend(self.order[..head].iter().map(|&v| v as u8));
        key.extend(self.order[i - self.m..i].iter().map(|&v| v as u8));
        Some((self.used, key))
    }

    /// Cheap necessary conditions once positions `0..i` are fixed.
    fn feasible(&self, i: usize) -> bool {
        let (n, m) = (self.n, self.m);
        if i >= n {
            return true;
        }
        let unused = self.full() & !self.used;
        // vertices a future position can still be adjacent to
        let mut reach = unused;
        for &v in &self.order[i.saturating_sub(m)..i] {
            reach |= bit(v);
        }
        for &v in &self.order[..m.min(i)] {
            reach |= bit(v);
        }
        let mut rest = unused;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if (self.adj[u] & reach).count_ones() < self.need {
                return false;
            }
        }
        // each placed vertex still waiting for later neighbours must have enough
        // unused neighbours to fill those slots
        for q in i.saturating_sub(m)..i {
            let last = (q + m).min(n - 1);
            let mut slots = last + 1 - i;
            if q < m {
                // wraparound slots n - m + q ..= n - 1 that are still open
                let wrap_lo = (n - m + q).max(i).max(last + 1);
                slots += n.saturating_sub(wrap_lo);
            }
            if ((self.adj[self.order[q]] & unused).count_ones() as usize) < slots.min(n - i) {
                return false;
            }
        }
        for q in 0..m.min(i) {
            if q + m >= i {
                continue; // handled above
            }
            let lo = (n - m + q).max(i);
            let slots = n - lo;
            if ((self.adj[self.order[q]] & unused).count_ones() as usize) < slots {
                return false;
            }
        }
        true
    }

    fn candidates(&self, i: usize) -> u128 {
        let (n, m) = (self.n, self.m);
        let mut cand = self.full() & !self.used;
        for &v in &self.order[i.saturating_sub(m)..i] {
            cand &= self.adj[v];
        }
        if i + m >= n {
            for &v in &self.order[..=(i + m - n)] {
                cand &= self.adj[v];
            }
        }
        if i == n - 1 {
            // reflection: v_1 < v_{n-1}
            let v1 = self.order[1];
            cand &= !((bit(v1) << 1) - 1);
        }
        cand
    }

    fn extend(&mut self, i: usize) -> Step {
        if i == self.n {
            return Step::Found;
        }
        self.nodes += 1;
        if self.nodes > self.limit {
            return Step::Abort;
        }
        if self.nodes.is_multiple_of(CLOCK_STRIDE)
            && self.start.elapsed() >= Duration::from_millis(self.budget.max_millis)
        {
            self.out_of_time = true;
            return Step::Abort;
        }
        let key = self.memo_key(i);
        if let Some(k) = &key {
            if self.memo.contains(k) {
                return Step::Dead;
            }
        }
        let mut cand = self.candidates(i);
        let mut ranked: Vec<(u32, u64, usize)> = Vec::with_capacity(cand.count_ones() as usize);
        let unused = self.full() & !self.used;
        while cand != 0 {
            let c = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            let tie = if self.noise == 0 {
                0
            } else {
                splitmix64(self.noise ^ (i << 8 | c) as u64)
            };
            let deg = (self.adj[c] & unused & !bit(c)).count_ones();
            // Perturbed runs let the noise outweigh a few degree points, so
            // they explore genuinely different parts of the tree.
            let key = deg * 64
                + if self.noise == 0 {
                    0
                } else {
                    (tie % (TIE_SPREAD * 64)) as u32
                };
            ranked.push((key, tie, c));
        }
        ranked.sort_unstable();
        // Vertices that later positions can still constrain: the unused ones
        // and the head, which the wraparound windows revisit.
        let mut relevant = unused;
        for &v in &self.order[..self.m.min(i)] {
            relevant |= bit(v);
        }
        let low = if i >= 2 { self.order[1] } else { usize::MAX };
        let mut tried: Vec<usize> = Vec::with_capacity(ranked.len());
        for (_, _, c) in ranked {
            // Two candidates with the same neighbourhood in `relevant` lead to
            // isomorphic subproblems (swap them in any completion), so only
            // one needs exploring. Both must clear the reflection bound.
            if low != usize::MAX && c > low {
                let twin = tried.iter().any(|&t| {
                    t > low && (self.adj[c] ^ self.adj[t]) & relevant & !(bit(c) | bit(t)) == 0
                });
                if twin {
                    continue;
                }
            }
            tried.push(c);
            self.order.push(c);
            self.used |= bit(c);
            let step = if self.feasible(i + 1) {
                self.extend(i + 1)
            } else {
                Step::Dead
            };
            match step {
                Step::Found => return Step::Found,
                Step::Abort => return Step::Abort,
                Step::Dead => {}
            }
            self.order.pop();
            self.used &= !bit(c);
        }
        if let Some(k) = key {
            if self.memo.len() < MEMO_CAP {
                self.memo.insert(k);
            }
        }
        Step::Dead
    }
}

/// Decides whether `g` contains the `m`-th power of a Hamiltonian cycle.
///
/// The ordering is anchored at `v_0 = 0` and extended left to right through
/// joint neighbourhoods of the previous `m` vertices (and, near the end, of
/// the first vertices for the wraparound); reflections are removed by
/// requiring `v_1 < v_{n-1}`.
///
/// The search restarts with doubling node caps, breaking ties in the candidate
/// order differently each time, since a fixed order occasionally wanders far
/// from every solution. Each run is complete if it finishes, and refuted
/// states are shared between runs. The node budget makes the verdict
/// deterministic.
pub fn contains_power_ham_cycle(
    g: &Graph,
    m: usize,
    budget: &SearchBudget,
) -> Result<SearchOutcome> {
    let n = g.n();
    if m == 0 {
        return Err(Error::InvalidParameter("m must be >= 1".into()));
    }
    if n < m + 2 {
        return Err(Error::TooFewVertices { n, m });
    }
    if n > MAX_SEARCH_VERTICES {
        return Err(Error::SearchTooLarge {
            n,
            max: MAX_SEARCH_VERTICES,
        });
    }
    let start = Instant::now();
    let finish = |verdict, nodes| SearchOutcome {
        verdict,
        nodes_expanded: nodes,
        elapsed: budget.record_stats.then(|| start.elapsed()),
    };
    let need = (2 * m).min(n - 1);
    if g.min_degree() < need {
        return Ok(finish(Verdict::NotFound, 0));
    }
    let adj = adjacency(g);
    // C_n^m contains C_n^2, so both counting bounds apply for every m >= 2
    let cut = local_max_cut(&adj, full_mask(n));
    if m >= 2 && !run_count_ok(&adj, full_mask(n), cut) {
        return Ok(finish(Verdict::NotFound, 0));
    }
    let mut solver = Solver {
        n,
        m,
        need: need as u32,
        adj,
        order: vec![0],
        used: 1,
        nodes: 0,
        limit: 0,
        noise: 0,
        out_of_time: false,
        budget,
        start,
        memo: HashSet::new(),
    };
    if !solver.feasible(1) {
        return Ok(finish(Verdict::NotFound, 0));
    }
    let mut cap = FIRST_RUN_NODES;
    let mut run = 0u64;
    let verdict = loop {
        solver.order.truncate(1);
        solver.used = 1;
        solver.noise = if run == 0 { 0 } else { splitmix64(run) | 1 };
        solver.limit = solver.nodes.saturating_add(cap).min(budget.max_nodes);
        match solver.extend(1) {
            Step::Found => break Verdict::Found(solver.order.clone()),
            Step::Dead => break Verdict::NotFound,
            Step::Abort if solver.out_of_time || solver.nodes > budget.max_nodes => {
                break Verdict::Timeout
            }
            Step::Abort => {}
        }
        // the gap bound costs more than the run-count one, so easy instances
        // get one search run first
        if run == 0 && m >= 2 && gaps::refuted(&solver.adj, full_mask(n), cut) {
            break Verdict::NotFound;
        }
        run += 1;
        cap = cap.saturating_mul(2);
    };
    debug_assert!(match &verdict {
        Verdict::Found(w) => is_power_cycle_witness(g, w, m),
        _ => true,
    });
    Ok(finish(verdict, solver.nodes))
}

/// Result of a capped count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CliqueCount {
    pub count: u64,
    /// The cap was reached; `count` is a lower bound equal to the cap.
    pub capped: bool,
}

fn above_mask(words: usize, v: usize) -> Vec<u64> {
    (0..words)
        .map(|w| {
            let lo = w * 64;
            if v < lo {
                u64::MAX
            } else if v + 1 >= lo + 64 {
                0
            } else {
                u64::MAX << (v + 1 - lo)
            }
        })
        .collect()
}

fn for_each_clique_rec<F: FnMut(&[usize]) -> bool>(
    g: &Graph,
    cand: &[u64],
    left: usize,
    stack: &mut Vec<usize>,
    f: &mut F,
) -> bool {
    for (w, &word) in cand.iter().enumerate() {
        let mut bits = word;
        while bits != 0 {
            let v = w * 64 + bits.trailing_zeros() as usize;
            bits &= bits - 1;
            stack.push(v);
            let stopped = if left == 1 {
                !f(stack)
            } else {
                let above = above_mask(cand.len(), v);
                let next: Vec<u64> = cand
                    .iter()
                    .zip(g.row(v))
                    .zip(&above)
                    .map(|((c, r), a)| c & r & a)
                    .collect();
                for_each_clique_rec(g, &next, left - 1, stack, f)
            };
            stack.pop();
            if stopped {
                return true;
            }
        }
    }
    false
}

/// Calls `f` on every `ℓ`-clique inside `allowed` (vertices ascending) until
/// `f` returns `false`.
pub fn for_each_clique<F: FnMut(&[usize]) -> bool>(g: &Graph, l: usize, allowed: &[u64], mut f: F) {
    if l == 0 {
        f(&[]);
        return;
    }
    let mut stack = Vec::with_capacity(l);
    for_each_clique_rec(g, allowed, l, &mut stack, &mut f);
}

fn count_rec(g: &Graph, cand: &[u64], left: usize, count: &mut u64, cap: u64) {
    if left == 1 {
        *count += cand.iter().map(|w| w.count_ones() as u64).sum::<u64>();
        return;
    }
    for (w, &word) in cand.iter().enumerate() {
        let mut bits = word;
        while bits != 0 {
            if *count >= cap {
                return;
            }
            let v = w * 64 + bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let above = above_mask(cand.len(), v);
            let next: Vec<u64> = cand
                .iter()
                .zip(g.row(v))
                .zip(&above)
                .map(|((c, r), a)| c & r & a)
                .collect();
            if next.iter().map(|x| x.count_ones() as usize).sum::<usize>() >= left - 1 {
                count_rec(g, &next, left - 1, count, cap);
            }
        }
    }
}

/// Number of `ℓ`-vertex cliques of `g`, stopping early once `cap` is reached.
pub fn count_cliques(g: &Graph, l: usize, cap: u64) -> CliqueCount {
    let mut count = 0u64;
    if l == 0 {
        count = 1;
    } else if l <= g.n() {
        let all = crate::graph::VertexSet::full(g.n());
        count_rec(g, all.words(), l, &mut count, cap);
    }
    CliqueCount {
        count: count.min(cap),
        capped: count >= cap,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectabilitySpec {
    pub params: ProblemParams,
    #[serde(serialize_with = "crate::density::serialize_ratio_u64")]
    pub xi: Ratio<u64>,
}

impl ConnectabilitySpec {
    pub fn new(params: ProblemParams, xi: Ratio<u64>) -> Result<Self> {
        if *xi.numer() == 0 || xi > Ratio::from_integer(1) {
            return Err(Error::InvalidParameter(format!("xi = {xi} not in (0, 1]")));
        }
        Ok(ConnectabilitySpec { params, xi })
    }

    /// `count ≥ ξ n^{k+1}`, compared exactly.
    pub fn clears(&self, count: u64, n: usize) -> bool {
        let pow = (n as u128).pow(self.params.k as u32 + 1);
        count as u128 * *self.xi.denom() as u128 >= *self.xi.numer() as u128 * pow
    }
}

fn joint(g: &Graph, vertices: &[usize], base: &mut [u64]) {
    for &v in vertices {
        for (b, r) in base.iter_mut().zip(g.row(v)) {
            *b &= r;
        }
    }
}

fn rec_witness(g: &Graph, pools: &[Vec<u64>], chosen: &mut Vec<usize>, count: &mut u64, cap: u64) {
    let i = chosen.len();
    if i == pools.len() {
        *count += 1;
        return;
    }
    let mut cand = pools[i].clone();
    joint(g, chosen, &mut cand);
    for (w, &word) in cand.iter().enumerate() {
        let mut bits = word;
        while bits != 0 {
            if *count >= cap {
                return;
            }
            let v = w * 64 + bits.trailing_zeros() as usize;
            bits &= bits - 1;
            chosen.push(v);
            rec_witness(g, pools, chosen, count, cap);
            chosen.pop();
        }
    }
}

/// Ordered `(k+1)`-cliques `(y_1, …, y_{k+1})` disjoint from `x` with
/// `y_i ∈ N(x_{(i−1)ℓ+1}, …, x_m)`; an empty suffix imposes no condition.
pub fn connectable_witness_count(
    g: &Graph,
    x: &OrderedTuple,
    spec: &ConnectabilitySpec,
    cap: u64,
) -> Result<CliqueCount> {
    let p = spec.params;
    let m = p.m();
    if x.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            actual: x.len(),
        });
    }
    let xs = x.as_slice();
    if let Some(&v) = xs.iter().find(|&&v| v >= g.n()) {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            n: g.n(),
        });
    }
    let outside = {
        let mut s = crate::graph::VertexSet::full(g.n());
        for &v in xs {
            s.remove(v);
        }
        s
    };
    let pools: Vec<Vec<u64>> = (0..=p.k)
        .map(|i| {
            let mut pool = outside.words().to_vec();
            joint(g, &xs[(i * p.l).min(m)..], &mut pool);
            pool
        })
        .collect();
    let mut count = 0;
    rec_witness(g, &pools, &mut Vec::with_capacity(p.k + 1), &mut count, cap);
    Ok(CliqueCount {
        count: count.min(cap),
        capped: count >= cap,
    })
}

/// `y_i ∈ N(x_i, …, x_{k+1}, y_1, …, y_{i−1})` for every `i`.
pub fn interlaces(g: &Graph, x: &OrderedTuple, y: &OrderedTuple) -> Result<bool> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    if let Some(v) = x.first_overlap(y) {
        return Err(Error::OverlappingTuples(v));
    }
    let (xs, ys) = (x.as_slice(), y.as_slice());
    for &v in xs.iter().chain(ys) {
        if v >= g.n() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: g.n(),
            });
        }
    }
    Ok((0..ys.len()).all(|i| {
        xs[i..]
            .iter()
            .chain(&ys[..i])
            .all(|&u| g.has_edge(ys[i], u))
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AbsorberReport {
    pub half: bool,
    pub full: bool,
    pub absorbs: bool,
}

/// Sequence positions of the `(r, ℓ, …, ℓ, r)` classes along a `2m`-tuple.
fn blow_up_classes(p: ProblemParams) -> Vec<usize> {
    let mut sizes = vec![p.r];
    sizes.extend(std::iter::repeat_n(p.l, 2 * p.k));
    sizes.push(p.r);
    sizes
        .iter()
        .enumerate()
        .flat_map(|(c, &s)| std::iter::repeat_n(c, s))
        .collect()
}

/// Tests the half-absorber, full-absorber and insertion properties of the
/// `2m`-tuple `(x_m, …, x_1, x'_1, …, x'_m)` for the vertex `v`.
///
/// Structural conditions are read as containment in the stated order: the
/// blow-up condition requires every pair in classes at most `k` apart to be
/// adjacent, and the path condition every pair at most `m` apart.
pub fn absorber_check(
    g_det: &Graph,
    g_union: &Graph,
    v: usize,
    tuple2m: &OrderedTuple,
    spec: &ConnectabilitySpec,
) -> Result<AbsorberReport> {
    let p = spec.params;
    let m = p.m();
    if g_det.n() != g_union.n() {
        return Err(Error::SizeMismatch(g_det.n(), g_union.n()));
    }
    let n = g_det.n();
    if tuple2m.len() != 2 * m {
        return Err(Error::LengthMismatch {
            expected: 2 * m,
            actual: tuple2m.len(),
        });
    }
    if v >= n {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    let seq = tuple2m.as_slice();
    if let Some(&w) = seq.iter().find(|&&w| w >= n) {
        return Err(Error::VertexOutOfRange { vertex: w, n });
    }
    if seq.contains(&v) {
        return Err(Error::RepeatedVertex(v));
    }
    if let Some((a, b)) = g_det.first_edge_not_in(g_union) {
        return Err(Error::NotASubgraph(a, b));
    }
    let cond_i = seq.iter().all(|&x| g_det.has_edge(v, x));
    let x_left: Vec<usize> = seq[..m].iter().rev().copied().collect();
    let x_right = seq[m..].to_vec();
    let connectable = |xs: Vec<usize>| -> Result<bool> {
        let t = OrderedTuple::new(xs, n)?;
        let need = {
            let pow = (n as u128).pow(p.k as u32 + 1);
            let num = *spec.xi.numer() as u128 * pow;
            let den = *spec.xi.denom() as u128;
            num.div_ceil(den).min(u64::MAX as u128) as u64
        };
        let c = connectable_witness_count(g_det, &t, spec, need.max(1))?;
        Ok(spec.clears(c.count, n))
    };
    let cond_ii = connectable(x_left)? && connectable(x_right)?;
    let classes = blow_up_classes(p);
    let cond_iii = (0..2 * m).all(|a| {
        (a + 1..2 * m).all(|b| classes[b] - classes[a] > p.k || g_det.has_edge(seq[a], seq[b]))
    });
    let cond_iii_full = is_power_path(g_union, seq, m);
    let mut inserted = seq[..m].to_vec();
    inserted.push(v);
    inserted.extend_from_slice(&seq[m..]);
    let absorbs = is_power_path(g_union, &inserted, m);
    Ok(AbsorberReport {
        half: cond_i && cond_ii && cond_iii,
        full: cond_i && cond_ii && cond_iii_full,
        absorbs,
    })
}
