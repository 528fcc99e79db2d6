//! Expected-count scales `Ψ_F = n^{v_F} p^{e_F}`, their minimum `Φ_G` over
//! subgraphs with at least one edge, the densities `d_G = e_G/(v_G − 1)` and
//! `m_G = max_{H ⊆ G} d_H`, and the resulting Janson-type lower-tail bound.
//!
//! `Ψ` and `Φ` are carried as natural logarithms so that `n^v` never
//! overflows; `d` and `m` are exact rationals.

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gadgets::binom2;
use crate::graph::{Graph, VertexSet};

/// Default bound on the number of vertices enumerated by brute force.
pub const DEFAULT_SUBSET_CAP: usize = 16;
const HARD_SUBSET_CAP: usize = 28;

/// The binomial random graph parameters `(n, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RandomModel {
    pub n: u64,
    pub p: f64,
}

impl RandomModel {
    pub fn new(n: u64, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("p = {p} is not in [0, 1]")));
        }
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        Ok(RandomModel { n, p })
    }

    /// `p = min(1, C·n^exponent)`.
    pub fn from_scale(n: u64, c: f64, exponent: f64) -> Result<Self> {
        if c < 0.0 || !c.is_finite() {
            return Err(Error::InvalidParameter(format!("C = {c} must be >= 0")));
        }
        Self::new(n, (c * (n as f64).powf(exponent)).min(1.0))
    }

    pub fn ln_n(&self) -> f64 {
        (self.n as f64).ln()
    }

    pub fn ln_p(&self) -> f64 {
        if self.p == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.p.ln()
        }
    }
}

/// `ln Ψ = v ln n + e ln p`; `−∞` when `p = 0` and `e > 0`.
pub fn psi_ln(v: usize, e: usize, model: &RandomModel) -> f64 {
    let edge_term = if e == 0 { 0.0 } else { e as f64 * model.ln_p() };
    v as f64 * model.ln_n() + edge_term
}

fn serialize_ratio<S: Serializer>(r: &Ratio<i64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

pub(crate) fn serialize_ratio_u64<S: Serializer>(
    r: &Ratio<u64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

fn serialize_ln<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_str(if *x < 0.0 { "-inf" } else { "inf" })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityProfile {
    pub v: usize,
    pub e: usize,
    #[serde(serialize_with = "serialize_ratio")]
    pub d: Ratio<i64>,
    #[serde(serialize_with = "serialize_ratio")]
    pub m: Ratio<i64>,
    pub m_argmax: Vec<usize>,
    #[serde(serialize_with = "serialize_ln")]
    pub psi_ln: f64,
    #[serde(serialize_with = "serialize_ln")]
    pub phi_ln: f64,
    pub phi_argmin: Vec<usize>,
    pub model: RandomModel,
}

/// `d_G = e/(v−1)`, and 0 for a single vertex.
pub fn density_d(g: &Graph) -> Ratio<i64> {
    if g.n() < 2 {
        Ratio::from_integer(0)
    } else {
        Ratio::new(g.edge_count() as i64, g.n() as i64 - 1)
    }
}

/// Adjacency rows as `u32` masks for brute-force enumeration.
fn small_rows(g: &Graph) -> Vec<u32> {
    (0..g.n()).map(|v| g.row(v)[0] as u32).collect()
}

/// `e(G[S])` for every mask `S` of a graph on at most `HARD_SUBSET_CAP` vertices.
fn induced_edge_table(rows: &[u32]) -> Vec<u16> {
    let n = rows.len();
    let mut table = vec![0u16; 1 << n];
    for mask in 1u32..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        table[mask as usize] = table[rest as usize] + (rows[low] & rest).count_ones() as u16;
    }
    table
}

fn mask_to_vertices(mask: u32, ids: &[usize]) -> Vec<usize> {
    (0..ids.len())
        .filter(|&i| mask >> i & 1 == 1)
        .map(|i| ids[i])
        .collect()
}

fn check_cap(size: usize, cap: usize) -> Result<()> {
    let cap = cap.min(HARD_SUBSET_CAP);
    if size > cap {
        return Err(Error::CapExceeded { size, cap });
    }
    Ok(())
}

fn ln_less(a: f64, b: f64) -> bool {
    if a == b {
        return false;
    }
    if a == f64::NEG_INFINITY || b == f64::INFINITY {
        return true;
    }
    if b == f64::NEG_INFINITY {
        return false;
    }
    a < b - 1e-12 * (1.0 + a.abs().max(b.abs()))
}

/// Φ restricted to a graph small enough to enumerate; vertex ids in `ids`.
fn phi_small(g: &Graph, ids: &[usize], model: &RandomModel) -> Option<(f64, Vec<usize>)> {
    let rows = small_rows(g);
    let table = induced_edge_table(&rows);
    let (ln_n, ln_p) = (model.ln_n(), model.ln_p());
    let mut best: Option<(f64, u32)> = None;
    for mask in 1u32..(1 << rows.len()) {
        let e = table[mask as usize] as usize;
        if e == 0 {
            continue;
        }
        let mut bits = mask;
        let mut isolated = false;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if rows[v] & mask == 0 {
                isolated = true;
                break;
            }
        }
        if isolated {
            continue;
        }
        let val = mask.count_ones() as f64 * ln_n + e as f64 * ln_p;
        if best.is_none_or(|(b, _)| ln_less(val, b)) {
            best = Some((val, mask));
        }
    }
    best.map(|(v, mask)| (v, mask_to_vertices(mask, ids)))
}

/// `ln Φ_G` and a minimising vertex set (induced subgraph without isolated
/// vertices; ties go to the lexicographically smallest bitmask).
///
/// Graphs above `cap` vertices are handled component-wise, which requires each
/// component to fit under the cap: Ψ is multiplicative over components, so the
/// minimum takes every component whose own Φ is below 1, or else the single
/// smallest one.
pub fn phi(g: &Graph, model: &RandomModel, cap: usize) -> Result<(f64, VertexSet)> {
    if g.edge_count() == 0 {
        return Err(Error::Edgeless);
    }
    if g.n() <= cap.min(HARD_SUBSET_CAP) {
        let ids: Vec<usize> = (0..g.n()).collect();
        let (val, vs) = phi_small(g, &ids, model).expect("graph has an edge");
        return Ok((val, VertexSet::from_vertices(g.n(), vs)?));
    }
    let mut parts = Vec::new();
    for comp in g.components() {
        if comp.len() < 2 {
            continue;
        }
        check_cap(comp.len(), cap)?;
        let sub = g.induced(&comp);
        if let Some(best) = phi_small(&sub, &comp, model) {
            parts.push(best);
        }
    }
    let below_one: Vec<&(f64, Vec<usize>)> = parts.iter().filter(|(v, _)| *v < 0.0).collect();
    let (val, vs) = if below_one.is_empty() {
        let mut best = &parts[0];
        for p in &parts[1..] {
            if ln_less(p.0, best.0) {
                best = p;
            }
        }
        best.clone()
    } else {
        let val = below_one.iter().map(|(v, _)| *v).sum();
        let vs = below_one
            .iter()
            .flat_map(|(_, s)| s.iter().copied())
            .collect();
        (val, vs)
    };
    Ok((val, VertexSet::from_vertices(g.n(), vs)?))
}

fn max_density_small(g: &Graph, ids: &[usize]) -> (Ratio<i64>, Vec<usize>) {
    let rows = small_rows(g);
    let n = rows.len();
    if n < 2 {
        return (Ratio::from_integer(0), ids.to_vec());
    }
    let table = induced_edge_table(&rows);
    // best as (e, v - 1) compared by cross multiplication
    let mut best: Option<(i64, i64, u32)> = None;
    for mask in 1u32..(1 << n) {
        let size = mask.count_ones() as i64;
        if size < 2 {
            continue;
        }
        let e = table[mask as usize] as i64;
        let better = match best {
            None => true,
            Some((be, bd, _)) => e * bd > be * (size - 1),
        };
        if better {
            best = Some((e, size - 1, mask));
        }
    }
    let (e, d, mask) = best.expect("n >= 2");
    (Ratio::new(e, d), mask_to_vertices(mask, ids))
}

/// `m_G = max_{H ⊆ G} d_H` by enumeration of induced subgraphs on at least
/// two vertices, with the maximising vertex set. Graphs above the cap are
/// handled per component (the maximum is always attained on a connected
/// subgraph).
pub fn max_density_m(g: &Graph, cap: usize) -> Result<(Ratio<i64>, VertexSet)> {
    if g.n() <= cap.min(HARD_SUBSET_CAP) {
        let ids: Vec<usize> = (0..g.n()).collect();
        let (m, vs) = max_density_small(g, &ids);
        return Ok((m, VertexSet::from_vertices(g.n(), vs)?));
    }
    let mut best: Option<(Ratio<i64>, Vec<usize>)> = None;
    for comp in g.components() {
        check_cap(comp.len(), cap)?;
        if comp.len() < 2 {
            continue;
        }
        let cand = max_density_small(&g.induced(&comp), &comp);
        if best.as_ref().is_none_or(|(b, _)| cand.0 > *b) {
            best = Some(cand);
        }
    }
    let (m, vs) = best.unwrap_or((Ratio::from_integer(0), vec![0, 1]));
    Ok((m, VertexSet::from_vertices(g.n(), vs)?))
}

/// Closed form for `m_{B(ℓ,r,t)}` where one is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BraidDensity {
    /// Exact value.
    Closed(#[serde(serialize_with = "serialize_ratio")] Ratio<i64>),
    /// No closed form; fall back to `max_density_m`.
    Unknown,
}

/// `ℓ/2` when `ℓ ≥ r(r+1)`; for `r = ℓ − 1` the braid is `P^{ℓ−1}_{tℓ}` and
/// its densest subgraph is the whole graph, giving
/// `(tℓ(ℓ−1) − C(ℓ,2)) / (tℓ − 1)` (which is `(6t−3)/(3t−1)` for ℓ = 3).
pub fn braid_m_closed_form(l: usize, r: usize, t: usize) -> BraidDensity {
    if l < 2 || r < 1 || r > l || t < 1 {
        return BraidDensity::Unknown;
    }
    if l >= r * (r + 1) {
        return BraidDensity::Closed(Ratio::new(l as i64, 2));
    }
    if r + 1 == l {
        let v = (t * l) as i64;
        let e = v * (l as i64 - 1) - binom2(l) as i64;
        return BraidDensity::Closed(Ratio::new(e, v - 1));
    }
    BraidDensity::Unknown
}

/// `exp(−τ² 4^{−e} Φ / 8)`, clamped to `[0, 1]`.
pub fn janson_upper_bound(tau: f64, g: &Graph, model: &RandomModel, cap: usize) -> Result<f64> {
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "tau = {tau} not in (0, 1]"
        )));
    }
    let (phi_ln, _) = phi(g, model, cap)?;
    Ok(janson_from_phi_ln(tau, g.edge_count(), phi_ln))
}

pub fn janson_from_phi_ln(tau: f64, edges: usize, phi_ln: f64) -> f64 {
    let scaled = (phi_ln - edges as f64 * 4f64.ln()).exp();
    (-tau * tau * scaled / 8.0).exp().clamp(0.0, 1.0)
}

pub fn density_profile(g: &Graph, model: &RandomModel, cap: usize) -> Result<DensityProfile> {
    let (m, argmax) = max_density_m(g, cap)?;
    let (phi_ln, argmin) = phi(g, model, cap)?;
    Ok(DensityProfile {
        v: g.n(),
        e: g.edge_count(),
        d: density_d(g),
        m,
        m_argmax: argmax.to_vec(),
        psi_ln: psi_ln(g.n(), g.edge_count(), model),
        phi_ln,
        phi_argmin: argmin.to_vec(),
        model: *model,
    })
}
