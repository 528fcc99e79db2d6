//! Embedding of the m-path `P^m_{ℓ(k+1)t}` into a blown-up k-path (or k-cycle)
//! plus `k+1` braid graphs, and a verifier for the embedding.
//!
//! The host order is cut into segments `u_0, u_1, ...` of length ℓ. Braid copy
//! `i` lives on the segments `u_i, u_{i+k+1}, u_{i+2(k+1)}, ...`: each segment
//! becomes a clique and consecutive segments of the copy are r-bridged.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gadgets::{add_braid, Label, LabeledGadget, ProblemParams, Role};
use crate::graph::{blow_up, power_cycle, power_path, GraphBuilder, OrderedTuple};

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub params: ProblemParams,
    pub t: usize,
    pub cycle: bool,
    /// `v = (u_0, ..., u_{(k+1)t-1})`, all `ℓ(k+1)t` vertices.
    pub host_order: OrderedTuple,
    /// Blow-up of `P^k_{(k+1)t}` or of `C^k_{2k+2}`.
    pub base: LabeledGadget,
    /// The `k+1` braids on the same vertex ids.
    pub braids: LabeledGadget,
    pub target_m: usize,
}

impl Decomposition {
    pub fn segment_count(&self) -> usize {
        (self.params.k + 1) * self.t
    }

    /// Segment `u_j` as a slice of the host order.
    pub fn segment(&self, j: usize) -> &[usize] {
        let l = self.params.l;
        &self.host_order.as_slice()[j * l..(j + 1) * l]
    }

    /// Vertices of braid copy `i`, in braid order.
    pub fn braid_copy(&self, i: usize) -> Vec<usize> {
        let step = self.params.k + 1;
        (i..self.segment_count())
            .step_by(step)
            .flat_map(|j| self.segment(j).iter().copied())
            .collect()
    }

    /// Braid copies are pairwise disjoint and each is independent in the base.
    pub fn braid_supports_independent(&self) -> bool {
        let n = self.base.graph.n();
        let mut seen = vec![false; n];
        for i in 0..=self.params.k {
            let vs = self.braid_copy(i);
            for &v in &vs {
                if seen[v] {
                    return false;
                }
                seen[v] = true;
            }
            for (a, &u) in vs.iter().enumerate() {
                if vs[a + 1..].iter().any(|&w| self.base.graph.has_edge(u, w)) {
                    return false;
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

fn check_params(params: ProblemParams, t: usize) -> Result<()> {
    if params.r == 0 {
        return Err(Error::InvalidParameter(
            "decomposition needs 1 <= r <= l".into(),
        ));
    }
    if t < 1 {
        return Err(Error::InvalidParameter("t must be >= 1".into()));
    }
    Ok(())
}

fn braid_family(params: ProblemParams, t: usize, host: &[usize]) -> Result<LabeledGadget> {
    let ProblemParams { k, l, r } = params;
    let n = host.len();
    let segments = (k + 1) * t;
    let mut b = GraphBuilder::new(n);
    let mut labels = vec![Label::new(Role::Braid, 0, 0, 0); n];
    for i in 0..=k {
        let segs: Vec<Vec<usize>> = (i..segments)
            .step_by(k + 1)
            .map(|j| host[j * l..(j + 1) * l].to_vec())
            .collect();
        add_braid(&mut b, &segs, r);
    }
    for j in 0..segments {
        for (pos, &v) in host[j * l..(j + 1) * l].iter().enumerate() {
            labels[v] = Label::new(Role::Braid, j % (k + 1), j, pos);
        }
    }
    LabeledGadget::new(b.build(), labels)
}

/// `P^m_{ℓ(k+1)t} ⊆ P^k_{(k+1)t}(ℓ) ⊎ (k+1)B(ℓ, r, t)` under the identity order.
pub fn decompose_path(params: ProblemParams, t: usize) -> Result<Decomposition> {
    check_params(params, t)?;
    let ProblemParams { k, l, .. } = params;
    let classes = (k + 1) * t;
    let base = blow_up(&power_path(classes, k), &vec![l; classes])?;
    let n = base.graph.n();
    let host: Vec<usize> = (0..n).collect();
    let braids = braid_family(params, t, &host)?;
    Ok(Decomposition {
        params,
        t,
        cycle: false,
        host_order: OrderedTuple::new(host, n)?,
        base,
        braids,
        target_m: params.m(),
    })
}

/// Same embedding inside `C^k_{2k+2}(ℓt/2)` for even `t`. Class `W_i` is split
/// into `t/2` chunks of ℓ ascending ids which become segments `u_i, u_{i+2k+2}, ...`.
pub fn decompose_cycle(params: ProblemParams, t: usize) -> Result<Decomposition> {
    check_params(params, t)?;
    if !t.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "cycle decomposition needs even t, got {t}"
        )));
    }
    let ProblemParams { k, l, .. } = params;
    let classes = 2 * k + 2;
    let class_size = l * t / 2;
    let base = blow_up(&power_cycle(classes, k)?, &vec![class_size; classes])?;
    let n = base.graph.n();
    let mut host = Vec::with_capacity(n);
    for j in 0..(k + 1) * t {
        let (class, chunk) = (j % classes, j / classes);
        let start = class * class_size + chunk * l;
        host.extend(start..start + l);
    }
    let braids = braid_family(params, t, &host)?;
    Ok(Decomposition {
        params,
        t,
        cycle: true,
        host_order: OrderedTuple::new(host, n)?,
        base,
        braids,
        target_m: params.m(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub edge_disjoint: bool,
    pub covers_m_path: bool,
    /// `(i, d)`: host positions `i` and `i + d` are not adjacent in the union.
    pub first_failure: Option<(usize, usize)>,
    /// First edge present in both base and braids.
    pub first_overlap: Option<(usize, usize)>,
    /// Required pairs supplied by a braid edge.
    pub braid_edges_used: usize,
    pub required_pairs: usize,
    pub base_edges: usize,
    pub braid_edges: usize,
}

/// Checks that base and braids are edge-disjoint and that every host position
/// is adjacent in the union to the next `m` positions (no wraparound).
pub fn verify_decomposition(d: &Decomposition) -> VerificationReport {
    let base = &d.base.graph;
    let braids = &d.braids.graph;
    let first_overlap = base.edges().find(|&(u, v)| braids.has_edge(u, v));
    let order = d.host_order.as_slice();
    let s = order.len();
    let mut first_failure = None;
    let mut braid_edges_used = 0;
    let mut required_pairs = 0;
    for i in 0..s {
        for dist in 1..=d.target_m {
            if i + dist >= s {
                break;
            }
            required_pairs += 1;
            let (u, v) = (order[i], order[i + dist]);
            if base.has_edge(u, v) {
                continue;
            }
            if braids.has_edge(u, v) {
                braid_edges_used += 1;
            } else if first_failure.is_none() {
                first_failure = Some((i, dist));
            }
        }
    }
    VerificationReport {
        edge_disjoint: first_overlap.is_none(),
        covers_m_path: first_failure.is_none(),
        first_failure,
        first_overlap,
        braid_edges_used,
        required_pairs,
        base_edges: base.edge_count(),
        braid_edges: braids.edge_count(),
    }
}

/// `|E(P^m_s)| = m·s − m(m+1)/2` for `s ≥ m`.
pub fn power_path_edge_formula(s: usize, m: usize) -> usize {
    m * s - m * (m + 1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn params(k: usize, l: usize, r: usize) -> ProblemParams {
        ProblemParams::new(k, l, r).unwrap()
    }

    #[test]
    fn figure_one_instance() {
        let d = decompose_path(params(2, 3, 2), 3).unwrap();
        assert_eq!(d.base.graph.n(), 27);
        assert_eq!(d.target_m, 8);
        assert_eq!(d.braids.graph.edge_count(), 45);
        let rep = verify_decomposition(&d);
        assert!(rep.edge_disjoint && rep.covers_m_path, "{rep:?}");
        assert!(d.braid_supports_independent());
        // r = ℓ - 1: an actual decomposition
        assert_eq!(
            rep.base_edges + rep.braid_edges,
            power_path_edge_formula(27, 8)
        );
    }

    #[test]
    fn smallest_path_instance_by_hand() {
        // k=1, ℓ=2, r=1, t=1: P^3_4 inside K_{2,2} plus edges {0,1} and {2,3}
        let d = decompose_path(params(1, 2, 1), 1).unwrap();
        let union = d.base.graph.union(&d.braids.graph).unwrap();
        assert_eq!(union, Graph::complete(4));
        assert_eq!(d.braids.graph, Graph::new(4, &[(0, 1), (2, 3)]).unwrap());
        assert!(verify_decomposition(&d).covers_m_path);
    }

    #[test]
    fn cycle_instance_from_figure_two() {
        let d = decompose_cycle(params(2, 3, 1), 6).unwrap();
        assert_eq!(d.base.graph.n(), 54);
        let rep = verify_decomposition(&d);
        assert!(rep.edge_disjoint && rep.covers_m_path, "{rep:?}");
        // braid copy 0 sits on the antipodal classes W_0 and W_3
        let class_of = |v: usize| d.base.label(v).segment;
        let mut classes: Vec<usize> = d.braid_copy(0).into_iter().map(class_of).collect();
        classes.sort_unstable();
        classes.dedup();
        assert_eq!(classes, vec![0, 3]);
        for i in 0..3 {
            let mut cs: Vec<usize> = d.braid_copy(i).into_iter().map(class_of).collect();
            cs.sort_unstable();
            cs.dedup();
            assert_eq!(cs, vec![i, i + 3]);
        }
    }

    #[test]
    fn smallest_cycle_instance() {
        let d = decompose_cycle(params(1, 2, 1), 2).unwrap();
        assert_eq!(d.base.graph.n(), 8);
        let rep = verify_decomposition(&d);
        assert!(rep.edge_disjoint && rep.covers_m_path);
        // brute force: every pair of host positions within distance 3 is adjacent
        let union = d.base.graph.union(&d.braids.graph).unwrap();
        let o = d.host_order.as_slice();
        for i in 0..8 {
            for j in i + 1..(i + 4).min(8) {
                assert!(union.has_edge(o[i], o[j]));
            }
        }
        assert!(decompose_cycle(params(1, 2, 1), 3).is_err());
    }

    #[test]
    fn deleting_a_braid_edge_is_localized() {
        let d = decompose_path(params(2, 3, 2), 2).unwrap();
        let order = d.host_order.as_slice();
        let pos = |v: usize| order.iter().position(|&x| x == v).unwrap();
        for (u, v) in d.braids.graph.edges().collect::<Vec<_>>() {
            let kept: Vec<_> = d.braids.graph.edges().filter(|&e| e != (u, v)).collect();
            let mut m = d.clone();
            let g = Graph::new(d.braids.graph.n(), &kept).unwrap();
            m.braids = LabeledGadget::new(g, d.braids.labels().to_vec()).unwrap();
            let rep = verify_decomposition(&m);
            assert!(!rep.covers_m_path);
            let (i, dist) = rep.first_failure.unwrap();
            let (a, b) = (pos(u).min(pos(v)), pos(u).max(pos(v)));
            assert_eq!((i, i + dist), (a, b));
        }
    }

    #[test]
    fn duplicated_base_edge_breaks_disjointness() {
        let d = decompose_path(params(1, 3, 1), 2).unwrap();
        let extra = d.base.graph.edges().next().unwrap();
        let mut edges: Vec<_> = d.braids.graph.edges().collect();
        edges.push(extra);
        let mut m = d.clone();
        m.braids = LabeledGadget::new(
            Graph::new(d.base.graph.n(), &edges).unwrap(),
            d.braids.labels().to_vec(),
        )
        .unwrap();
        let rep = verify_decomposition(&m);
        assert!(!rep.edge_disjoint);
        assert_eq!(rep.first_overlap, Some(extra));
        assert!(rep.covers_m_path);
    }

    #[test]
    fn full_width_bridge() {
        // r = ℓ: m = (k+1)ℓ and the union is exactly P^m
        let d = decompose_path(params(1, 3, 3), 3).unwrap();
        let union = d.base.graph.union(&d.braids.graph).unwrap();
        assert_eq!(union, power_path(18, 6));
    }
}
