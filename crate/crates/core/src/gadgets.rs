//! Named graph families: braid graphs, the reduced braid `B⁻` used by
//! absorbers, and the extremal lower-bound graphs `G_α`.
//!
//! All constructors emit canonical consecutive-block labelings so that tests
//! and verifiers can address segments and classes by index.

use std::fmt;
use std::io::{BufRead, Write};
use std::ops::Range;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, OrderedTuple};

/// `(k, ℓ, r)` with `m = kℓ + r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProblemParams {
    pub k: usize,
    pub l: usize,
    pub r: usize,
}

impl ProblemParams {
    /// Accepts `k ≥ 1`, `ℓ ≥ 2`, `0 ≤ r ≤ ℓ`. `r = 0` is only meaningful for
    /// experiments; gadget constructors that need a bridge reject it.
    pub fn new(k: usize, l: usize, r: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParameter(format!("k must be >= 1, got {k}")));
        }
        if l < 2 {
            return Err(Error::InvalidParameter(format!("l must be >= 2, got {l}")));
        }
        if r > l {
            return Err(Error::InvalidParameter(format!(
                "r must satisfy r <= l, got r = {r}, l = {l}"
            )));
        }
        Ok(ProblemParams { k, l, r })
    }

    /// Resolves `(k, ℓ, r, m)` where any one of `r`, `m` may be omitted.
    pub fn resolve(k: usize, l: usize, r: Option<usize>, m: Option<usize>) -> Result<Self> {
        let r = match (r, m) {
            (Some(r), Some(m)) if k * l + r != m => {
                return Err(Error::InvalidParameter(format!(
                    "inconsistent parameters: k*l + r = {} but m = {m}",
                    k * l + r
                )))
            }
            (Some(r), _) => r,
            (None, Some(m)) => m.checked_sub(k * l).ok_or_else(|| {
                Error::InvalidParameter(format!("m = {m} is smaller than k*l = {}", k * l))
            })?,
            (None, None) => {
                return Err(Error::InvalidParameter("one of r or m is required".into()))
            }
        };
        Self::new(k, l, r)
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.k * self.l + self.r
    }

    /// `ℓ ≥ r(r+1)`, the regime where the `n^{-2/ℓ}` upper bound holds.
    pub fn strong_regime(&self) -> bool {
        self.l >= self.r * (self.r + 1)
    }

    fn require_bridge(&self) -> Result<()> {
        if self.r == 0 {
            return Err(Error::InvalidParameter("this gadget needs r >= 1".into()));
        }
        Ok(())
    }
}

/// What a vertex is inside a gadget.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// Clique segment of a braid graph.
    Braid,
    /// Independent class of a blow-up.
    Class,
    /// Part `V_i \ W_i` of a lower-bound graph.
    Part,
    /// The distinguished subset `W_i` of a part.
    W,
}

impl Role {
    pub fn token(self) -> &'static str {
        match self {
            Role::Braid => "braid",
            Role::Class => "class",
            Role::Part => "part",
            Role::W => "w",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Role {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "braid" => Ok(Role::Braid),
            "class" => Ok(Role::Class),
            "part" => Ok(Role::Part),
            "w" => Ok(Role::W),
            other => Err(Error::InvalidParameter(format!("unknown role `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Label {
    pub role: Role,
    /// Copy index for multi-copy gadgets, 0 otherwise.
    pub copy: usize,
    /// Segment / class / part index, global across copies.
    pub segment: usize,
    pub position: usize,
}

impl Label {
    pub fn new(role: Role, copy: usize, segment: usize, position: usize) -> Self {
        Label {
            role,
            copy,
            segment,
            position,
        }
    }
}

/// A graph whose every vertex carries exactly one label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGadget {
    pub graph: Graph,
    labels: Vec<Label>,
}

impl LabeledGadget {
    pub fn new(graph: Graph, labels: Vec<Label>) -> Result<Self> {
        if labels.len() != graph.n() {
            return Err(Error::LengthMismatch {
                expected: graph.n(),
                actual: labels.len(),
            });
        }
        Ok(LabeledGadget { graph, labels })
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> Label {
        self.labels[v]
    }

    /// Vertices of a segment, ordered by position.
    pub fn segment(&self, segment: usize) -> Vec<usize> {
        let mut vs: Vec<usize> = (0..self.labels.len())
            .filter(|&v| self.labels[v].segment == segment)
            .collect();
        vs.sort_by_key(|&v| self.labels[v].position);
        vs
    }

    pub fn find(&self, copy: usize, segment: usize, position: usize) -> Option<usize> {
        self.labels
            .iter()
            .position(|l| l.copy == copy && l.segment == segment && l.position == position)
    }

    /// Sidecar: one `vertex role segment position` line per vertex.
    pub fn labels_to_string(&self) -> String {
        let mut out = String::new();
        for (v, l) in self.labels.iter().enumerate() {
            out.push_str(&format!("{v} {} {} {}\n", l.role, l.segment, l.position));
        }
        out
    }

    pub fn write_dump<W: Write, L: Write>(&self, mut edges: W, mut labels: L) -> Result<()> {
        self.graph.write_edge_list(&mut edges)?;
        labels.write_all(self.labels_to_string().as_bytes())?;
        Ok(())
    }

    /// Reads a gadget back from its edge list and label sidecar.
    pub fn read_dump<E: BufRead, L: BufRead>(edges: E, labels: L) -> Result<Self> {
        let graph = Graph::read_edge_list_from(edges, true)?;
        let mut out: Vec<Option<Label>> = vec![None; graph.n()];
        for (i, line) in labels.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let bad = |msg: String| Error::Parse { line: i + 1, msg };
            let f: Vec<&str> = line.split_ascii_whitespace().collect();
            if f.len() != 4 {
                return Err(bad("expected `vertex role segment position`".into()));
            }
            let v: usize = f[0].parse().map_err(|e| bad(format!("{e}")))?;
            let role: Role = f[1].parse()?;
            let segment: usize = f[2].parse().map_err(|e| bad(format!("{e}")))?;
            let position: usize = f[3].parse().map_err(|e| bad(format!("{e}")))?;
            let slot = out.get_mut(v).ok_or(Error::VertexOutOfRange {
                vertex: v,
                n: graph.n(),
            })?;
            if slot.is_some() {
                return Err(bad(format!("vertex {v} labelled twice")));
            }
            *slot = Some(Label::new(role, 0, segment, position));
        }
        let labels = out
            .into_iter()
            .enumerate()
            .map(|(v, l)| {
                l.ok_or(Error::Parse {
                    line: 0,
                    msg: format!("vertex {v} has no label"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        LabeledGadget::new(graph, labels)
    }
}

fn check_braid_params(l: usize, r: usize, t: usize) -> Result<()> {
    if t < 1 || l < 2 || r < 1 || r > l {
        return Err(Error::InvalidParameter(format!(
            "braid needs t >= 1, l >= 2, 1 <= r <= l; got l = {l}, r = {r}, t = {t}"
        )));
    }
    Ok(())
}

/// Adds the r-bridge between `last` (the `v` side) and `first` (the `u` side):
/// `v_i` is joined to `u_1, ..., u_i`.
pub(crate) fn add_bridge(b: &mut GraphBuilder, last: &[usize], first: &[usize]) {
    debug_assert_eq!(last.len(), first.len());
    for (i, &v) in last.iter().enumerate() {
        for &u in &first[..=i] {
            b.add_edge(v, u);
        }
    }
}

/// Adds a braid on the given consecutive segments (each of length ℓ) to `b`.
pub(crate) fn add_braid(b: &mut GraphBuilder, segments: &[Vec<usize>], r: usize) {
    for seg in segments {
        b.add_clique(seg);
    }
    for pair in segments.windows(2) {
        let (a, c) = (&pair[0], &pair[1]);
        let last = &a[a.len() - r..];
        let first = &c[..r];
        add_bridge(b, last, first);
    }
}

/// `B(ℓ, r, t)`: segment `i` occupies ids `[iℓ, (i+1)ℓ)`.
pub fn braid(l: usize, r: usize, t: usize) -> Result<LabeledGadget> {
    multi_braid(1, l, r, t)
}

/// `s·B(ℓ, r, t)`: `s` translated copies; copy `c` segment `i` has global index `c·t + i`.
pub fn multi_braid(s: usize, l: usize, r: usize, t: usize) -> Result<LabeledGadget> {
    check_braid_params(l, r, t)?;
    if s < 1 {
        return Err(Error::InvalidParameter("need at least one copy".into()));
    }
    let n = s * t * l;
    let mut b = GraphBuilder::new(n);
    let mut labels = Vec::with_capacity(n);
    for c in 0..s {
        let segments: Vec<Vec<usize>> = (0..t)
            .map(|i| {
                let base = (c * t + i) * l;
                (base..base + l).collect()
            })
            .collect();
        add_braid(&mut b, &segments, r);
        for i in 0..t {
            for pos in 0..l {
                labels.push(Label::new(Role::Braid, c, c * t + i, pos));
            }
        }
    }
    LabeledGadget::new(b.build(), labels)
}

/// True iff `v` and `u` form an r-bridge in `g`. Both equivalent formulations
/// are evaluated and must agree.
pub fn check_r_bridge(g: &Graph, v: &OrderedTuple, u: &OrderedTuple, r: usize) -> Result<bool> {
    for t in [v, u] {
        if t.len() != r {
            return Err(Error::LengthMismatch {
                expected: r,
                actual: t.len(),
            });
        }
    }
    if let Some(x) = v.first_overlap(u) {
        return Err(Error::OverlappingTuples(x));
    }
    // each v_i adjacent to u_1..u_i
    let forward = (0..r).all(|i| (0..=i).all(|j| g.has_edge(v[i], u[j])));
    // each u_i adjacent to v_i..v_r
    let backward = (0..r).all(|i| (i..r).all(|j| g.has_edge(u[i], v[j])));
    assert_eq!(forward, backward, "r-bridge formulations disagree");
    Ok(forward)
}

/// `B⁻`: `(k+1)·B(ℓ, r, 2)` with the last `ℓ - r` vertices of the second clique
/// removed in the first and the last copy. Surviving vertices keep their labels
/// from the full braid family, so `B⁻` maps into `B` by label.
pub fn b_minus(params: ProblemParams) -> Result<LabeledGadget> {
    params.require_bridge()?;
    let ProblemParams { k, l, r } = params;
    let full = multi_braid(k + 1, l, r, 2)?;
    let keep: Vec<usize> = (0..full.graph.n())
        .filter(|&v| {
            let lab = full.label(v);
            let trimmed_copy = lab.copy == 0 || lab.copy == k;
            let second = lab.segment % 2 == 1;
            !(trimmed_copy && second && lab.position >= r)
        })
        .collect();
    let graph = full.graph.induced(&keep);
    let labels = keep.iter().map(|&v| full.label(v)).collect();
    LabeledGadget::new(graph, labels)
}

/// Expected edge count of `B⁻`.
pub fn b_minus_edge_formula(params: ProblemParams) -> usize {
    let ProblemParams { k, l, r } = params;
    2 * k * binom2(l) + 2 * binom2(r) + (k + 1) * binom2(r + 1)
}

/// Expected edge count of `B(ℓ, r, t)`.
pub fn braid_edge_formula(l: usize, r: usize, t: usize) -> usize {
    t * binom2(l) + (t - 1) * binom2(r + 1)
}

#[inline]
pub fn binom2(x: usize) -> usize {
    x * x.saturating_sub(1) / 2
}

/// Parameters of the extremal lower-bound graph `G_α`, `α = k/(k+1) + ε`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerBoundSpec {
    pub n: usize,
    pub k: usize,
    /// Target power; only used for `ε₀` and the recommended size.
    pub m: usize,
    pub eps: Ratio<u64>,
}

impl LowerBoundSpec {
    pub fn new(n: usize, k: usize, m: usize, eps: Ratio<u64>) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParameter("k must be >= 1".into()));
        }
        if n < k + 1 {
            return Err(Error::InvalidParameter(format!(
                "lower-bound graph needs n >= k + 1 = {}, got {n}",
                k + 1
            )));
        }
        let spec = LowerBoundSpec { n, k, m, eps };
        let smallest = spec.part_sizes().into_iter().min().unwrap_or(0);
        if spec.w_size() > smallest {
            return Err(Error::InvalidParameter(format!(
                "|W_i| = {} exceeds the smallest part ({smallest})",
                spec.w_size()
            )));
        }
        Ok(spec)
    }

    /// Part sizes; the `n mod (k+1)` extra vertices go to the lowest-indexed parts.
    pub fn part_sizes(&self) -> Vec<usize> {
        let parts = self.k + 1;
        let (q, rem) = (self.n / parts, self.n % parts);
        (0..parts).map(|i| q + usize::from(i < rem)).collect()
    }

    /// `|W_i| = ⌈εn⌉`.
    pub fn w_size(&self) -> usize {
        let prod = self.eps * Ratio::from_integer(self.n as u64);
        prod.ceil().to_integer() as usize
    }

    /// `ε₀ = 1 / (2(m+1)(k+1))`.
    pub fn eps0(&self) -> Ratio<u64> {
        Ratio::new(1, 2 * (self.m as u64 + 1) * (self.k as u64 + 1))
    }

    pub fn alpha(&self) -> Ratio<u64> {
        Ratio::new(self.k as u64, self.k as u64 + 1) + self.eps
    }

    /// `4(k+2)(m+1)`.
    pub fn recommended_min_n(&self) -> usize {
        4 * (self.k + 2) * (self.m + 1)
    }

    /// `⌈(k/(k+1) + ε)n⌉`.
    pub fn degree_target(&self) -> usize {
        (self.alpha() * Ratio::from_integer(self.n as u64))
            .ceil()
            .to_integer() as usize
    }
}

/// `G_α` together with its partition.
#[derive(Clone, Debug)]
pub struct LowerBoundGraph {
    pub spec: LowerBoundSpec,
    pub graph: Graph,
    pub parts: Vec<Range<usize>>,
    pub w: Vec<Range<usize>>,
    /// Set when `n` is below the size the construction is designed for.
    pub below_recommended_n: bool,
}

impl LowerBoundGraph {
    pub fn part_of(&self, v: usize) -> usize {
        self.parts
            .iter()
            .position(|p| p.contains(&v))
            .expect("vertex outside every part")
    }

    pub fn in_w(&self, v: usize) -> bool {
        self.w.iter().any(|w| w.contains(&v))
    }

    pub fn gadget(&self) -> LabeledGadget {
        let mut labels = Vec::with_capacity(self.graph.n());
        for (i, (p, w)) in self.parts.iter().zip(&self.w).enumerate() {
            for v in p.clone() {
                let role = if w.contains(&v) { Role::W } else { Role::Part };
                labels.push(Label::new(role, 0, i, v - p.start));
            }
        }
        LabeledGadget::new(self.graph.clone(), labels).expect("labels cover every vertex")
    }
}

/// Complete `(k+1)`-partite graph plus complete bipartite graphs between
/// `W_i` (the first `⌈εn⌉` ids of part `i`) and the rest of `V_i`.
pub fn lower_bound_graph(spec: &LowerBoundSpec) -> Result<LowerBoundGraph> {
    let spec = LowerBoundSpec::new(spec.n, spec.k, spec.m, spec.eps)?;
    let sizes = spec.part_sizes();
    let w_size = spec.w_size();
    let mut parts = Vec::with_capacity(sizes.len());
    let mut start = 0;
    for s in &sizes {
        parts.push(start..start + s);
        start += s;
    }
    let w: Vec<Range<usize>> = parts.iter().map(|p| p.start..p.start + w_size).collect();
    let mut b = GraphBuilder::new(spec.n);
    for (i, pi) in parts.iter().enumerate() {
        for pj in &parts[i + 1..] {
            for u in pi.clone() {
                for v in pj.clone() {
                    b.add_edge(u, v);
                }
            }
        }
        for u in w[i].clone() {
            for v in w[i].end..pi.end {
                b.add_edge(u, v);
            }
        }
    }
    Ok(LowerBoundGraph {
        below_recommended_n: spec.n < spec.recommended_min_n(),
        graph: b.build(),
        parts,
        w,
        spec,
    })
}

/// Parses `a/b` or a plain integer into a non-negative rational.
pub fn parse_ratio(s: &str) -> Result<Ratio<u64>> {
    let bad = || Error::InvalidParameter(format!("cannot parse rational `{s}`"));
    let s = s.trim();
    let r = match s.split_once('/') {
        Some((a, b)) => {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ratio::new(a, b)
        }
        None => Ratio::from_integer(s.parse().map_err(|_| bad())?),
    };
    Ok(r)
}

pub fn ratio_to_f64(r: Ratio<u64>) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}
