//! Harmonic morphisms of graphs, double covers, and towers.
//!
//! A morphism carries a local degree on every point, constant on edges.
//! Harmonicity at a vertex v says: for every half-edge h at the image of
//! v, the degrees of the half-edges at v mapping to h sum to deg(v).

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::symgraph::{components, Graph, LinearForm, Point};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HarmError {
    #[error("target graph is not connected")]
    DisconnectedTarget,
    #[error("tower validation failed: {0}")]
    InvalidTower(String),
    #[error("morphism validation failed: {0}")]
    InvalidMorphism(Violation),
}

/// First violated invariant of a harmonic morphism.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("map sizes do not match the graphs")]
    SizeMismatch,
    #[error("half-edge {h} does not commute with the root map")]
    RootCompat { h: usize },
    #[error("half-edge {h} does not commute with the involution")]
    MateCompat { h: usize },
    #[error("local degree must be positive at {0:?}")]
    ZeroDegree(Point),
    #[error("harmonicity fails at vertex {v} over target half-edge {h}")]
    Harmonicity { v: usize, h: usize },
    #[error("fiber degree sum over {0:?} differs from the rest")]
    DegreeInconsistent(Point),
    #[error("metric incompatibility on edge {e}")]
    MetricCompat { e: usize },
}

/// Graph map with local degrees; source and target are passed to the
/// operations explicitly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub vmap: Vec<usize>,
    pub hmap: Vec<usize>,
    pub deg_v: Vec<u32>,
    pub deg_e: Vec<u32>,
}

impl Morphism {
    pub fn identity(g: &Graph) -> Morphism {
        Morphism {
            vmap: (0..g.n_vertices()).collect(),
            hmap: (0..g.n_halves()).collect(),
            deg_v: vec![1; g.n_vertices()],
            deg_e: vec![1; g.n_edges()],
        }
    }

    pub fn emap(&self, e: usize) -> usize {
        self.hmap[2 * e] / 2
    }

    pub fn is_free(&self) -> bool {
        self.deg_v.iter().all(|&d| d == 1) && self.deg_e.iter().all(|&d| d == 1)
    }
}

/// Checks every structural invariant and returns the first violation.
pub fn validate(
    m: &Morphism,
    src: &Graph,
    dst: &Graph,
    src_len: Option<&[LinearForm]>,
    dst_len: Option<&[LinearForm]>,
) -> Result<(), Violation> {
    if m.vmap.len() != src.n_vertices()
        || m.hmap.len() != src.n_halves()
        || m.deg_v.len() != src.n_vertices()
        || m.deg_e.len() != src.n_edges()
    {
        return Err(Violation::SizeMismatch);
    }
    for h in 0..src.n_halves() {
        if m.hmap[h] >= dst.n_halves() {
            return Err(Violation::SizeMismatch);
        }
        if dst.root(m.hmap[h]) != m.vmap[src.root(h)] {
            return Err(Violation::RootCompat { h });
        }
        if m.hmap[src.mate(h)] != dst.mate(m.hmap[h]) {
            return Err(Violation::MateCompat { h });
        }
    }
    for v in 0..src.n_vertices() {
        if m.vmap[v] >= dst.n_vertices() {
            return Err(Violation::SizeMismatch);
        }
        if m.deg_v[v] == 0 {
            return Err(Violation::ZeroDegree(Point::V(v)));
        }
    }
    for e in 0..src.n_edges() {
        if m.deg_e[e] == 0 {
            return Err(Violation::ZeroDegree(Point::E(e)));
        }
    }
    // harmonicity
    for v in 0..src.n_vertices() {
        let fv = m.vmap[v];
        for &h in dst.tangent(fv) {
            let sum: u32 = src
                .tangent(v)
                .iter()
                .filter(|&&hh| m.hmap[hh] == h)
                .map(|&hh| m.deg_e[src.edge_of(hh)])
                .sum();
            if sum != m.deg_v[v] {
                return Err(Violation::Harmonicity { v, h });
            }
        }
    }
    // global degree well-defined when the target is connected
    if components(dst).count == 1 {
        let mut deg: Option<u32> = None;
        for x in 0..dst.n_vertices() {
            let sum: u32 = (0..src.n_vertices())
                .filter(|&v| m.vmap[v] == x)
                .map(|v| m.deg_v[v])
                .sum();
            match deg {
                None => deg = Some(sum),
                Some(d) if d != sum => return Err(Violation::DegreeInconsistent(Point::V(x))),
                _ => {}
            }
        }
        for e in 0..dst.n_edges() {
            let sum: u32 = (0..src.n_edges())
                .filter(|&x| m.emap(x) == e)
                .map(|x| m.deg_e[x])
                .sum();
            if deg != Some(sum) {
                return Err(Violation::DegreeInconsistent(Point::E(e)));
            }
        }
    }
    // metric compatibility
    if let (Some(sl), Some(dl)) = (src_len, dst_len) {
        for e in 0..src.n_edges() {
            let scaled = sl[e].scale_int(&BigInt::from(m.deg_e[e]));
            if scaled != dl[m.emap(e)] {
                return Err(Violation::MetricCompat { e });
            }
        }
    }
    Ok(())
}

/// The constant fiber degree sum; requires a connected target.
pub fn degree(m: &Morphism, src: &Graph, dst: &Graph) -> Result<u32, HarmError> {
    if components(dst).count != 1 {
        return Err(HarmError::DisconnectedTarget);
    }
    let x = 0;
    Ok((0..src.n_vertices())
        .filter(|&v| m.vmap[v] == x)
        .map(|v| m.deg_v[v])
        .sum())
}

/// The unique source edge lengths making the morphism metric-compatible:
/// length(e) = length(f(e)) / deg(e).
pub fn metrize_source(m: &Morphism, src: &Graph, dst_len: &[LinearForm]) -> Vec<LinearForm> {
    (0..src.n_edges())
        .map(|e| {
            let d = BigRational::new(BigInt::from(1), BigInt::from(m.deg_e[e]));
            dst_len[m.emap(e)].scale(&d)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// double covers

/// Degree-2 harmonic morphism together with its covering involution.
/// Free points have two preimages swapped by iota, dilated points are
/// iota-fixed.
#[derive(Debug, Clone)]
pub struct DoubleCover {
    pub total: Graph,
    pub map: Morphism,
    pub iota_v: Vec<usize>,
    pub iota_h: Vec<usize>,
}

/// Derives the covering involution from a degree-2 morphism.
pub fn derive_iota(
    m: &Morphism,
    src: &Graph,
    dst: &Graph,
) -> Result<(Vec<usize>, Vec<usize>), HarmError> {
    let mut iota_v = vec![usize::MAX; src.n_vertices()];
    for x in 0..dst.n_vertices() {
        let fiber: Vec<usize> = (0..src.n_vertices()).filter(|&v| m.vmap[v] == x).collect();
        match fiber.as_slice() {
            [v] => iota_v[*v] = *v,
            [v, w] => {
                iota_v[*v] = *w;
                iota_v[*w] = *v;
            }
            _ => {
                return Err(HarmError::InvalidTower(format!(
                    "vertex {} has {} preimages under a double cover",
                    dst.vertex_name(x),
                    fiber.len()
                )))
            }
        }
    }
    let mut iota_h = vec![usize::MAX; src.n_halves()];
    for h in 0..dst.n_halves() {
        let fiber: Vec<usize> = (0..src.n_halves()).filter(|&t| m.hmap[t] == h).collect();
        match fiber.as_slice() {
            [t] => iota_h[*t] = *t,
            [t, s] => {
                iota_h[*t] = *s;
                iota_h[*s] = *t;
            }
            _ => {
                return Err(HarmError::InvalidTower(format!(
                    "half-edge {h} has {} preimages under a double cover",
                    fiber.len()
                )))
            }
        }
    }
    Ok((iota_v, iota_h))
}

/// Builds the free double cover encoded by a signed graph: two disjoint
/// copies of the base, with the preimages of the dashed edges crossing
/// the two sheets.
pub fn signed_cover(base: &Graph, dashed: &BTreeSet<usize>) -> DoubleCover {
    let nv = base.n_vertices();
    let ne = base.n_edges();
    let mut vnames = Vec::with_capacity(2 * nv);
    for v in 0..nv {
        vnames.push(format!("{}.p", base.vertex_name(v)));
    }
    for v in 0..nv {
        vnames.push(format!("{}.m", base.vertex_name(v)));
    }
    let mut edges = Vec::with_capacity(2 * ne);
    for e in 0..ne {
        let (u, v) = base.endpoints(e);
        let cross = dashed.contains(&e);
        let head = if cross { v + nv } else { v };
        edges.push((u, head, format!("{}.p", base.edge_name(e))));
    }
    for e in 0..ne {
        let (u, v) = base.endpoints(e);
        let cross = dashed.contains(&e);
        let head = if cross { v } else { v + nv };
        edges.push((u + nv, head, format!("{}.m", base.edge_name(e))));
    }
    let total = Graph::build(vnames, edges);
    let mut vmap = Vec::with_capacity(2 * nv);
    for v in 0..nv {
        vmap.push(v);
    }
    for v in 0..nv {
        vmap.push(v);
    }
    let mut hmap = vec![0usize; 4 * ne];
    for e in 0..ne {
        hmap[2 * e] = 2 * e;
        hmap[2 * e + 1] = 2 * e + 1;
        hmap[2 * (ne + e)] = 2 * e;
        hmap[2 * (ne + e) + 1] = 2 * e + 1;
    }
    let map = Morphism {
        vmap,
        hmap,
        deg_v: vec![1; 2 * nv],
        deg_e: vec![1; 2 * ne],
    };
    let mut iota_v = vec![0usize; 2 * nv];
    for v in 0..nv {
        iota_v[v] = v + nv;
        iota_v[v + nv] = v;
    }
    let mut iota_h = vec![0usize; 4 * ne];
    for e in 0..ne {
        iota_h[2 * e] = 2 * (ne + e);
        iota_h[2 * e + 1] = 2 * (ne + e) + 1;
        iota_h[2 * (ne + e)] = 2 * e;
        iota_h[2 * (ne + e) + 1] = 2 * e + 1;
    }
    DoubleCover {
        total,
        map,
        iota_v,
        iota_h,
    }
}

// ---------------------------------------------------------------------------
// towers

/// A composable pair: a double cover over a degree-n harmonic map with
/// connected base. Metrics are optional but must be present on all three
/// levels at once.
#[derive(Debug, Clone)]
pub struct Tower {
    pub base: Graph,
    pub mid: Graph,
    pub top: Graph,
    /// mid -> base, degree n
    pub f: Morphism,
    /// top -> mid, degree 2
    pub pi: Morphism,
    pub iota_v: Vec<usize>,
    pub iota_h: Vec<usize>,
    pub base_len: Option<Vec<LinearForm>>,
    pub mid_len: Option<Vec<LinearForm>>,
    pub top_len: Option<Vec<LinearForm>>,
    /// mid edges whose preimages cross the sheets, when built from a
    /// signed cover (used for DOT output only)
    pub dashed: Option<BTreeSet<usize>>,
}

impl Tower {
    pub fn validate(&self) -> Result<(), HarmError> {
        if components(&self.base).count != 1 {
            return Err(HarmError::InvalidTower(
                "base graph must be connected".into(),
            ));
        }
        validate(
            &self.f,
            &self.mid,
            &self.base,
            self.mid_len.as_deref(),
            self.base_len.as_deref(),
        )
        .map_err(HarmError::InvalidMorphism)?;
        validate(
            &self.pi,
            &self.top,
            &self.mid,
            self.top_len.as_deref(),
            self.mid_len.as_deref(),
        )
        .map_err(HarmError::InvalidMorphism)?;
        let d = degree(&self.pi, &self.top, &self.mid);
        match d {
            Ok(2) => {}
            Ok(d) => {
                return Err(HarmError::InvalidTower(format!(
                    "top cover has degree {d}, expected 2"
                )))
            }
            Err(_) => {
                // mid may be disconnected; check fiber sums pointwise instead
                for x in 0..self.mid.n_vertices() {
                    let s: u32 = (0..self.top.n_vertices())
                        .filter(|&v| self.pi.vmap[v] == x)
                        .map(|v| self.pi.deg_v[v])
                        .sum();
                    if s != 2 {
                        return Err(HarmError::InvalidTower(format!(
                            "vertex {} has fiber degree {s} under the double cover",
                            self.mid.vertex_name(x)
                        )));
                    }
                }
            }
        }
        // involution invariants
        for v in 0..self.top.n_vertices() {
            if self.iota_v[self.iota_v[v]] != v {
                return Err(HarmError::InvalidTower(
                    "iota is not an involution on vertices".into(),
                ));
            }
            if self.pi.vmap[self.iota_v[v]] != self.pi.vmap[v] {
                return Err(HarmError::InvalidTower(
                    "iota does not commute with the cover".into(),
                ));
            }
        }
        for h in 0..self.top.n_halves() {
            if self.iota_h[self.iota_h[h]] != h
                || self.pi.hmap[self.iota_h[h]] != self.pi.hmap[h]
                || self.iota_h[self.top.mate(h)] != self.top.mate(self.iota_h[h])
            {
                return Err(HarmError::InvalidTower(
                    "iota is not a covering involution on half-edges".into(),
                ));
            }
            if self.top.root(self.iota_h[h]) != self.iota_v[self.top.root(h)] {
                return Err(HarmError::InvalidTower(
                    "iota does not commute with the root map".into(),
                ));
            }
        }
        // orbits of iota are exactly the fibers
        for v in 0..self.top.n_vertices() {
            let free = self.iota_v[v] != v;
            let fiber = (0..self.top.n_vertices())
                .filter(|&w| self.pi.vmap[w] == self.pi.vmap[v])
                .count();
            if free != (fiber == 2) {
                return Err(HarmError::InvalidTower(
                    "iota orbits do not match the fibers".into(),
                ));
            }
        }
        match (&self.base_len, &self.mid_len, &self.top_len) {
            (Some(_), Some(_), Some(_)) | (None, None, None) => {}
            _ => {
                return Err(HarmError::InvalidTower(
                    "metric must be present on all levels or none".into(),
                ))
            }
        }
        // lengths are positive under any positive assignment: nonzero
        // forms with nonnegative coefficients
        for lens in [&self.base_len, &self.mid_len, &self.top_len]
            .into_iter()
            .flatten()
        {
            for (e, l) in lens.iter().enumerate() {
                if l.is_zero() || !l.nonnegative() {
                    return Err(HarmError::InvalidTower(format!(
                        "edge length {e} is not positive"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Local degree of a top point with respect to the base (f after pi).
    pub fn top_deg_to_base_v(&self, v: usize) -> u32 {
        self.pi.deg_v[v] * self.f.deg_v[self.pi.vmap[v]]
    }

    pub fn top_deg_to_base_e(&self, e: usize) -> u32 {
        self.pi.deg_e[e] * self.f.deg_e[self.pi.emap(e)]
    }

    /// True when the double cover has no dilated points.
    pub fn top_is_free(&self) -> bool {
        self.pi.is_free()
    }

    pub fn bottom_degree(&self) -> Result<u32, HarmError> {
        degree(&self.f, &self.mid, &self.base)
    }

    pub fn is_metric(&self) -> bool {
        self.base_len.is_some()
    }
}

// ---------------------------------------------------------------------------
// fiber types

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiberType {
    I,
    II,
    III,
    Other(Vec<u32>),
}

/// Sorted dilation profile of f over a base point.
pub fn fiber_profile(t: &Tower, x: Point) -> Vec<u32> {
    let mut profile: Vec<u32> = match x {
        Point::V(x) => (0..t.mid.n_vertices())
            .filter(|&v| t.f.vmap[v] == x)
            .map(|v| t.f.deg_v[v])
            .collect(),
        Point::E(x) => (0..t.mid.n_edges())
            .filter(|&e| t.f.emap(e) == x)
            .map(|e| t.f.deg_e[e])
            .collect(),
    };
    profile.sort_unstable_by(|a, b| b.cmp(a));
    profile
}

/// Type I, II, III for the dilation profiles (3,1), (2,1,1), (1,1,1,1);
/// anything else reports Other. Only meaningful for degree-4 bottoms.
pub fn classify_fiber(t: &Tower, x: Point) -> FiberType {
    let p = fiber_profile(t, x);
    match p.as_slice() {
        [3, 1] => FiberType::I,
        [2, 1, 1] => FiberType::II,
        [1, 1, 1, 1] => FiberType::III,
        _ => FiberType::Other(p),
    }
}

/// All base points in canonical order: vertices then edges.
pub fn base_points(t: &Tower) -> Vec<Point> {
    (0..t.base.n_vertices())
        .map(Point::V)
        .chain((0..t.base.n_edges()).map(Point::E))
        .collect()
}

/// A tower is generic when every base point has type I, II or III and the
/// double cover is free. Returns the first offending point otherwise.
pub fn is_generic(t: &Tower) -> (bool, Option<Point>) {
    if !t.top_is_free() {
        let bad = (0..t.top.n_vertices())
            .find(|&v| t.pi.deg_v[v] > 1)
            .map(|v| Point::V(t.pi.vmap[v]))
            .or_else(|| {
                (0..t.top.n_edges())
                    .find(|&e| t.pi.deg_e[e] > 1)
                    .map(|e| Point::E(t.pi.emap(e)))
            });
        // offending point reported downstairs in the base
        let bad = bad.map(|p| match p {
            Point::V(v) => Point::V(t.f.vmap[v]),
            Point::E(e) => Point::E(t.f.emap(e)),
        });
        return (false, bad);
    }
    for x in base_points(t) {
        if matches!(classify_fiber(t, x), FiberType::Other(_)) {
            return (false, Some(x));
        }
    }
    (true, None)
}

// ---------------------------------------------------------------------------
// tower isomorphism over a common base

#[derive(Debug, Clone)]
pub struct TowerIso {
    pub mid_v: Vec<usize>,
    pub mid_h: Vec<usize>,
    pub top_v: Vec<usize>,
    pub top_h: Vec<usize>,
}

/// Searches for an isomorphism of towers commuting with the maps to the
/// (shared) base: a pair of level isomorphisms compatible with f, pi,
/// degrees and lengths. Both towers must have structurally equal bases.
pub fn tower_isomorphic(a: &Tower, b: &Tower) -> Option<TowerIso> {
    if a.base != b.base {
        return None;
    }
    let mut result: Option<TowerIso> = None;
    for_each_cover_iso(
        &a.mid,
        &a.f,
        a.mid_len.as_deref(),
        &b.mid,
        &b.f,
        b.mid_len.as_deref(),
        &identity_bij(&a.base),
        &mut |mid| {
            let mut found = false;
            for_each_cover_iso(
                &a.top,
                &a.pi,
                a.top_len.as_deref(),
                &b.top,
                &b.pi,
                b.top_len.as_deref(),
                mid,
                &mut |top| {
                    result = Some(TowerIso {
                        mid_v: mid.vmap.clone(),
                        mid_h: mid.hmap.clone(),
                        top_v: top.vmap.clone(),
                        top_h: top.hmap.clone(),
                    });
                    found = true;
                    true
                },
            );
            found
        },
    );
    result
}

#[derive(Debug, Clone)]
pub struct Bij {
    pub vmap: Vec<usize>,
    pub hmap: Vec<usize>,
}

fn identity_bij(g: &Graph) -> Bij {
    Bij {
        vmap: (0..g.n_vertices()).collect(),
        hmap: (0..g.n_halves()).collect(),
    }
}

/// Enumerates isomorphisms of two covers over a fixed bijection of their
/// targets; calls `found` for each one, stopping when it returns true.
/// Returns whether the enumeration was stopped.
pub fn for_each_cover_iso(
    src_a: &Graph,
    map_a: &Morphism,
    len_a: Option<&[LinearForm]>,
    src_b: &Graph,
    map_b: &Morphism,
    len_b: Option<&[LinearForm]>,
    tgt: &Bij,
    found: &mut dyn FnMut(&Bij) -> bool,
) -> bool {
    if src_a.n_vertices() != src_b.n_vertices() || src_a.n_edges() != src_b.n_edges() {
        return false;
    }
    let n = src_a.n_vertices();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (usize::MAX - src_a.valence(v), v));
    let mut vmap = vec![usize::MAX; n];
    let mut used = vec![false; src_b.n_vertices()];

    fn assign_vertices(
        pos: usize,
        order: &[usize],
        src_a: &Graph,
        map_a: &Morphism,
        len_a: Option<&[LinearForm]>,
        src_b: &Graph,
        map_b: &Morphism,
        len_b: Option<&[LinearForm]>,
        tgt: &Bij,
        vmap: &mut Vec<usize>,
        used: &mut Vec<bool>,
        found: &mut dyn FnMut(&Bij) -> bool,
    ) -> bool {
        if pos == order.len() {
            // vertices fixed; try to match edges with orientation constraints
            let mut hmap = vec![usize::MAX; src_a.n_halves()];
            let mut used_e = vec![false; src_b.n_edges()];
            return assign_edges(
                0,
                src_a,
                map_a,
                len_a,
                src_b,
                map_b,
                len_b,
                tgt,
                vmap,
                &mut hmap,
                &mut used_e,
                found,
            );
        }
        let v = order[pos];
        for w in 0..src_b.n_vertices() {
            if used[w]
                || map_b.vmap[w] != tgt.vmap[map_a.vmap[v]]
                || map_b.deg_v[w] != map_a.deg_v[v]
                || src_b.valence(w) != src_a.valence(v)
            {
                continue;
            }
            // quick local consistency: mapped-neighbor multiset
            let ok = {
                let mut ka: Vec<usize> = src_a
                    .tangent(v)
                    .iter()
                    .map(|&h| {
                        let u = src_a.root(src_a.mate(h));
                        if u == v {
                            usize::MAX - 1
                        } else if vmap[u] != usize::MAX {
                            vmap[u]
                        } else {
                            usize::MAX
                        }
                    })
                    .collect();
                let mut image = vec![false; src_b.n_vertices()];
                for &m in vmap.iter() {
                    if m != usize::MAX {
                        image[m] = true;
                    }
                }
                let mut kb: Vec<usize> = src_b
                    .tangent(w)
                    .iter()
                    .map(|&h| {
                        let u = src_b.root(src_b.mate(h));
                        if u == w {
                            usize::MAX - 1
                        } else if image[u] {
                            u
                        } else {
                            usize::MAX
                        }
                    })
                    .collect();
                ka.sort_unstable();
                kb.sort_unstable();
                ka == kb
            };
            if !ok {
                continue;
            }
            vmap[v] = w;
            used[w] = true;
            if assign_vertices(
                pos + 1,
                order,
                src_a,
                map_a,
                len_a,
                src_b,
                map_b,
                len_b,
                tgt,
                vmap,
                used,
                found,
            ) {
                return true;
            }
            used[w] = false;
            vmap[v] = usize::MAX;
        }
        false
    }

    #[allow(clippy::too_many_arguments)]
    fn assign_edges(
        ea: usize,
        src_a: &Graph,
        map_a: &Morphism,
        len_a: Option<&[LinearForm]>,
        src_b: &Graph,
        map_b: &Morphism,
        len_b: Option<&[LinearForm]>,
        tgt: &Bij,
        vmap: &[usize],
        hmap: &mut Vec<usize>,
        used_e: &mut Vec<bool>,
        found: &mut dyn FnMut(&Bij) -> bool,
    ) -> bool {
        if ea == src_a.n_edges() {
            let bij = Bij {
                vmap: vmap.to_vec(),
                hmap: hmap.clone(),
            };
            return found(&bij);
        }
        let (u, v) = src_a.endpoints(ea);
        let (bu, bv) = (vmap[u], vmap[v]);
        let ta0 = tgt.hmap[map_a.hmap[2 * ea]];
        let ta1 = tgt.hmap[map_a.hmap[2 * ea + 1]];
        for eb in 0..src_b.n_edges() {
            if used_e[eb] || map_b.deg_e[eb] != map_a.deg_e[ea] {
                continue;
            }
            if let (Some(la), Some(lb)) = (len_a, len_b) {
                if la[ea] != lb[eb] {
                    continue;
                }
            }
            let (x, y) = src_b.endpoints(eb);
            // try both orientations; endpoints and target half-edges must line up
            for flip in [false, true] {
                let (hx, hy) = if flip {
                    (2 * eb + 1, 2 * eb)
                } else {
                    (2 * eb, 2 * eb + 1)
                };
                let (px, py) = if flip { (y, x) } else { (x, y) };
                if (px, py) != (bu, bv) {
                    continue;
                }
                if map_b.hmap[hx] != ta0 || map_b.hmap[hy] != ta1 {
                    continue;
                }
                hmap[2 * ea] = hx;
                hmap[2 * ea + 1] = hy;
                used_e[eb] = true;
                if assign_edges(
                    ea + 1,
                    src_a,
                    map_a,
                    len_a,
                    src_b,
                    map_b,
                    len_b,
                    tgt,
                    vmap,
                    hmap,
                    used_e,
                    found,
                ) {
                    return true;
                }
                used_e[eb] = false;
                hmap[2 * ea] = usize::MAX;
                hmap[2 * ea + 1] = usize::MAX;
            }
        }
        false
    }

    assign_vertices(
        0, &order, src_a, map_a, len_a, src_b, map_b, len_b, tgt, &mut vmap, &mut used, found,
    )
}

// ---------------------------------------------------------------------------
