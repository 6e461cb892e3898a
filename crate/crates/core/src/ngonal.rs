//! The tropical n-gonal construction on towers, its involution, the
//! orientation double cover, splitting into output towers, triality
//! verification, and tower contraction.
//!
//! Given a double cover pi : top -> mid and a degree-n map f : mid -> base,
//! the construction enumerates, fiberwise over every base point, the
//! nonnegative divisors D on the top graph with pi_*(D) = f^*(x). Root and
//! mate maps act coordinatewise, and the local degree of a point is the
//! product of binomial coefficients over the free part of the fiber and
//! powers of two over the dilated part.

pub mod wd4;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::harmonic::{derive_iota, is_generic, tower_isomorphic, validate, Morphism, Tower};
use crate::symgraph::{components, contract_edges, Graph, LinearForm, Point};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NgonalError {
    #[error("invalid tower: {0}")]
    InvalidTower(String),
    #[error("the double cover is dilated; the orientation relation is undefined")]
    UnsupportedDilatedTop,
    #[error("tower is not orientable")]
    NotOrientable,
    #[error("tower is not generic at {0:?}")]
    NotGeneric(Option<Point>),
    #[error("cannot contract loop edge {0}")]
    LoopContraction(String),
    #[error("no octuple-quotient witness labeling exists")]
    NoWitnessLabeling,
    #[error("triality verification failed: {0}")]
    TrialityFailure(String),
}

// ---------------------------------------------------------------------------
// pullback and pushforward of point-vectors

pub type PointVec = BTreeMap<Point, i64>;

/// f^*(x) = sum of d_f(y) y over the fiber of x.
pub fn pullback(m: &Morphism, src: &Graph, x: Point) -> PointVec {
    let mut out = PointVec::new();
    match x {
        Point::V(x) => {
            for v in 0..src.n_vertices() {
                if m.vmap[v] == x {
                    out.insert(Point::V(v), i64::from(m.deg_v[v]));
                }
            }
        }
        Point::E(x) => {
            for e in 0..src.n_edges() {
                if m.emap(e) == x {
                    out.insert(Point::E(e), i64::from(m.deg_e[e]));
                }
            }
        }
    }
    out
}

/// Linear extension of x -> f(x): sums coefficients along fibers.
pub fn pushforward(m: &Morphism, d: &PointVec) -> PointVec {
    let mut out = PointVec::new();
    for (&p, &c) in d {
        let q = match p {
            Point::V(v) => Point::V(m.vmap[v]),
            Point::E(e) => Point::E(m.emap(e)),
        };
        let entry = out.entry(q).or_insert(0);
        *entry += c;
        if *entry == 0 {
            out.remove(&q);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// fiber tables

/// Per base point, the top-level fibers in a fixed canonical order,
/// grouped by mid point. Coefficient vectors of Donagi points are indexed
/// by these fiber lists.
#[derive(Debug, Clone)]
pub struct FiberTables {
    /// per base vertex: top vertices over it, grouped by mid vertex
    pub vert_fiber: Vec<Vec<usize>>,
    /// per base vertex: (mid vertex, its top preimages) in mid order
    pub vert_groups: Vec<Vec<(usize, Vec<usize>)>>,
    /// position of each top vertex inside its fiber list
    pub pos_v: Vec<usize>,
    /// per base edge: top half-edges over the half 2e, grouped by mid half
    pub half_fiber: Vec<Vec<usize>>,
    pub half_groups: Vec<Vec<(usize, Vec<usize>)>>,
    /// position of each top half-edge over an even base half (MAX otherwise)
    pub pos_h: Vec<usize>,
}

impl FiberTables {
    pub fn build(t: &Tower) -> FiberTables {
        let nbv = t.base.n_vertices();
        let nbe = t.base.n_edges();
        let mut vert_groups: Vec<Vec<(usize, Vec<usize>)>> = vec![Vec::new(); nbv];
        for y in 0..t.mid.n_vertices() {
            let x = t.f.vmap[y];
            let pre: Vec<usize> = (0..t.top.n_vertices())
                .filter(|&p| t.pi.vmap[p] == y)
                .collect();
            vert_groups[x].push((y, pre));
        }
        let mut vert_fiber = vec![Vec::new(); nbv];
        let mut pos_v = vec![usize::MAX; t.top.n_vertices()];
        for x in 0..nbv {
            vert_groups[x].sort_by_key(|(y, _)| *y);
            for (_, pre) in &vert_groups[x] {
                for &p in pre {
                    pos_v[p] = vert_fiber[x].len();
                    vert_fiber[x].push(p);
                }
            }
        }
        let mut half_groups: Vec<Vec<(usize, Vec<usize>)>> = vec![Vec::new(); nbe];
        for mh in 0..t.mid.n_halves() {
            let bh = t.f.hmap[mh];
            if bh % 2 != 0 {
                continue;
            }
            let e = bh / 2;
            let pre: Vec<usize> = (0..t.top.n_halves())
                .filter(|&h| t.pi.hmap[h] == mh)
                .collect();
            half_groups[e].push((mh, pre));
        }
        let mut half_fiber = vec![Vec::new(); nbe];
        let mut pos_h = vec![usize::MAX; t.top.n_halves()];
        for e in 0..nbe {
            half_groups[e].sort_by_key(|(m, _)| *m);
            for (_, pre) in &half_groups[e] {
                for &h in pre {
                    pos_h[h] = half_fiber[e].len();
                    half_fiber[e].push(h);
                }
            }
        }
        FiberTables {
            vert_fiber,
            vert_groups,
            pos_v,
            half_fiber,
            half_groups,
            pos_h,
        }
    }
}

// ---------------------------------------------------------------------------
// the Donagi construction

/// The graph on fiber divisors with its structural map to the base, the
/// induced involution, and the metric when the input tower is metric.
#[derive(Debug, Clone)]
pub struct DonagiOutput {
    pub graph: Graph,
    /// harmonic morphism to the base, degree 2^n
    pub map: Morphism,
    pub iota_v: Vec<usize>,
    pub iota_h: Vec<usize>,
    pub metric: Option<Vec<LinearForm>>,
    /// per output vertex: (base vertex, coefficients over the top fiber)
    pub vert_points: Vec<(usize, Vec<u32>)>,
    /// per output edge: (base edge, coefficients over the fiber of half 2e)
    pub edge_points: Vec<(usize, Vec<u32>)>,
    pub tables: FiberTables,
}

fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * u64::from(n - i) / u64::from(i + 1);
    }
    acc
}

// group shape: (degree over the base, number of cover preimages)
type Shape = (u32, usize);

/// Admissible coefficient vectors for one fiber: a dilated mid point
/// forces its preimage coefficient, a free one distributes its degree
/// over the two preimages. Enumeration is lexicographic in the
/// concatenated coefficient vector.
fn enumerate_fiber(shapes: &[Shape]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &(d, k) in shapes {
        let mut next = Vec::new();
        for v in &out {
            match k {
                1 => {
                    let mut w = v.clone();
                    w.push(d);
                    next.push(w);
                }
                2 => {
                    for a in 0..=d {
                        let mut w = v.clone();
                        w.push(a);
                        w.push(d - a);
                        next.push(w);
                    }
                }
                _ => unreachable!("double cover fibers have 1 or 2 points"),
            }
        }
        out = next;
    }
    out
}

fn local_degree(shapes: &[Shape], vec: &[u32]) -> u64 {
    let mut acc: u64 = 1;
    let mut i = 0;
    for &(d, k) in shapes {
        match k {
            1 => {
                acc *= 1u64 << d;
                i += 1;
            }
            2 => {
                acc *= binomial(d, vec[i]);
                i += 2;
            }
            _ => unreachable!(),
        }
    }
    acc
}

fn point_code(shapes: &[Shape], vec: &[u32]) -> String {
    let mut code = String::new();
    let mut i = 0;
    for &(d, k) in shapes {
        match k {
            1 => {
                code.push(char::from_digit(u32::min(vec[i], 9), 10).unwrap());
                i += 1;
            }
            2 => {
                if d == 1 {
                    code.push(if vec[i] == 1 { 'p' } else { 'm' });
                } else {
                    code.push(char::from_digit(u32::min(vec[i], 9), 10).unwrap());
                }
                i += 2;
            }
            _ => unreachable!(),
        }
    }
    code
}

fn vert_shapes(t: &Tower, groups: &[(usize, Vec<usize>)]) -> Vec<Shape> {
    groups
        .iter()
        .map(|(y, pre)| (t.f.deg_v[*y], pre.len()))
        .collect()
}

fn half_shapes(t: &Tower, groups: &[(usize, Vec<usize>)]) -> Vec<Shape> {
    groups
        .iter()
        .map(|(mh, pre)| (t.f.deg_e[t.mid.edge_of(*mh)], pre.len()))
        .collect()
}

/// Runs the n-gonal construction. The bottom map must have degree n; the
/// double cover may be dilated (the local degrees then carry the 2^d
/// factors), but the orientation-dependent consumers reject such inputs.
pub fn donagi_construct(t: &Tower, n: u32) -> Result<DonagiOutput, NgonalError> {
    t.validate()
        .map_err(|e| NgonalError::InvalidTower(e.to_string()))?;
    let deg = t
        .bottom_degree()
        .map_err(|e| NgonalError::InvalidTower(e.to_string()))?;
    if deg != n {
        return Err(NgonalError::InvalidTower(format!(
            "bottom map has degree {deg}, expected {n}"
        )));
    }
    let tables = FiberTables::build(t);

    let mut vnames = Vec::new();
    let mut vert_points = Vec::new();
    let mut deg_v: Vec<u32> = Vec::new();
    let mut index_v: HashMap<(usize, Vec<u32>), usize> = HashMap::new();
    for x in 0..t.base.n_vertices() {
        let shapes = vert_shapes(t, &tables.vert_groups[x]);
        for vec in enumerate_fiber(&shapes) {
            let id = vert_points.len();
            let d = local_degree(&shapes, &vec);
            vnames.push(format!(
                "{}.{}",
                t.base.vertex_name(x),
                point_code(&shapes, &vec)
            ));
            deg_v.push(u32::try_from(d).expect("local degree overflow"));
            index_v.insert((x, vec.clone()), id);
            vert_points.push((x, vec));
        }
    }

    let mut edges: Vec<(usize, usize, String)> = Vec::new();
    let mut edge_points = Vec::new();
    let mut deg_e: Vec<u32> = Vec::new();
    let mut hmap: Vec<usize> = Vec::new();
    for e in 0..t.base.n_edges() {
        let shapes = half_shapes(t, &tables.half_groups[e]);
        let (u, w) = t.base.endpoints(e);
        for vec in enumerate_fiber(&shapes) {
            let d = local_degree(&shapes, &vec);
            // endpoints: push coefficients through the root maps
            let mut vec_u = vec![0u32; tables.vert_fiber[u].len()];
            let mut vec_w = vec![0u32; tables.vert_fiber[w].len()];
            for (i, &h) in tables.half_fiber[e].iter().enumerate() {
                if vec[i] == 0 {
                    continue;
                }
                vec_u[tables.pos_v[t.top.root(h)]] += vec[i];
                vec_w[tables.pos_v[t.top.root(t.top.mate(h))]] += vec[i];
            }
            let vu = *index_v
                .get(&(u, vec_u))
                .expect("root of an admissible divisor must be admissible");
            let vw = *index_v
                .get(&(w, vec_w))
                .expect("root of an admissible divisor must be admissible");
            let name = format!("{}.{}", t.base.edge_name(e), point_code(&shapes, &vec));
            edges.push((vu, vw, name));
            hmap.push(2 * e);
            hmap.push(2 * e + 1);
            deg_e.push(u32::try_from(d).expect("local degree overflow"));
            edge_points.push((e, vec));
        }
    }

    let graph = Graph::build(vnames, edges);
    let vmap: Vec<usize> = vert_points.iter().map(|(x, _)| *x).collect();
    let map = Morphism {
        vmap,
        hmap,
        deg_v,
        deg_e,
    };
    validate(&map, &graph, &t.base, None, None)
        .map_err(|e| NgonalError::InvalidTower(format!("construction not harmonic: {e}")))?;

    // induced involution, coordinatewise
    let mut iota_v = vec![usize::MAX; vert_points.len()];
    for (id, (x, vec)) in vert_points.iter().enumerate() {
        let mut new_vec = vec![0u32; vec.len()];
        for (i, &p) in tables.vert_fiber[*x].iter().enumerate() {
            new_vec[tables.pos_v[t.iota_v[p]]] = vec[i];
        }
        iota_v[id] = *index_v
            .get(&(*x, new_vec))
            .expect("iota image of an admissible divisor must be admissible");
    }
    let mut index_e: HashMap<(usize, Vec<u32>), usize> = HashMap::new();
    for (id, (e, vec)) in edge_points.iter().enumerate() {
        index_e.insert((*e, vec.clone()), id);
    }
    let mut iota_h = vec![usize::MAX; 2 * edge_points.len()];
    for (id, (e, vec)) in edge_points.iter().enumerate() {
        let mut new_vec = vec![0u32; vec.len()];
        for (i, &h) in tables.half_fiber[*e].iter().enumerate() {
            new_vec[tables.pos_h[t.iota_h[h]]] = vec[i];
        }
        let im = *index_e
            .get(&(*e, new_vec))
            .expect("iota image of an edge divisor");
        iota_h[2 * id] = 2 * im;
        iota_h[2 * id + 1] = 2 * im + 1;
    }

    let metric = t.base_len.as_ref().map(|bl| {
        (0..edge_points.len())
            .map(|u| {
                let e = edge_points[u].0;
                bl[e].scale(&BigRational::new(
                    BigInt::from(1),
                    BigInt::from(map.deg_e[u]),
                ))
            })
            .collect()
    });

    Ok(DonagiOutput {
        graph,
        map,
        iota_v,
        iota_h,
        metric,
        vert_points,
        edge_points,
        tables,
    })
}

/// Coordinatewise involution on the constructed graph.
pub fn output_involution(o: &DonagiOutput) -> (Vec<usize>, Vec<usize>) {
    (o.iota_v.clone(), o.iota_h.clone())
}

// ---------------------------------------------------------------------------
// orientation double cover

/// Parities of the Donagi points. With the first cover preimage of each
/// mid point labeled "+", the parity of a divisor is the sum of its
/// "+"-coefficients mod 2; relabeling flips whole classes, so the induced
/// partition is labeling-independent.
fn parities(t: &Tower, o: &DonagiOutput) -> Result<(Vec<u8>, Vec<u8>), NgonalError> {
    if !t.top_is_free() {
        return Err(NgonalError::UnsupportedDilatedTop);
    }
    let vert: Vec<u8> = o
        .vert_points
        .iter()
        .map(|(x, vec)| {
            let mut acc = 0u32;
            let mut i = 0;
            for (_, pre) in &o.tables.vert_groups[*x] {
                acc += vec[i];
                i += pre.len();
            }
            (acc % 2) as u8
        })
        .collect();
    let edge: Vec<u8> = o
        .edge_points
        .iter()
        .map(|(e, vec)| {
            let mut acc = 0u32;
            let mut i = 0;
            for (_, pre) in &o.tables.half_groups[*e] {
                acc += vec[i];
                i += pre.len();
            }
            (acc % 2) as u8
        })
        .collect();
    Ok((vert, edge))
}

/// Public view of the parity classes of a construction (per output
/// vertex and per output edge); the class labels are only meaningful up
/// to a global flip per fiber.
pub fn parity_classes(t: &Tower, o: &DonagiOutput) -> Result<(Vec<u8>, Vec<u8>), NgonalError> {
    parities(t, o)
}

/// The free double cover of the base built from the parity classes of the
/// Donagi fibers.
pub struct OrientationCover {
    pub cover: crate::harmonic::DoubleCover,
    /// component id of (base vertex, parity class)
    pub comp_of: HashMap<(usize, u8), usize>,
    pub n_components: usize,
}

pub fn orientation_cover(t: &Tower) -> Result<OrientationCover, NgonalError> {
    let n = t
        .bottom_degree()
        .map_err(|e| NgonalError::InvalidTower(e.to_string()))?;
    let o = donagi_construct(t, n)?;
    orientation_cover_of(t, &o)
}

fn orientation_cover_of(t: &Tower, o: &DonagiOutput) -> Result<OrientationCover, NgonalError> {
    let (pv, pe) = parities(t, o)?;
    let base = &t.base;
    // two sheets per base point; vertex (x, c) has id 2x + c
    let vnames: Vec<String> = (0..base.n_vertices())
        .flat_map(|x| {
            [
                format!("{}.0", base.vertex_name(x)),
                format!("{}.1", base.vertex_name(x)),
            ]
        })
        .collect();
    let mut edges = Vec::new();
    for e in 0..base.n_edges() {
        let (u, w) = base.endpoints(e);
        for c in 0..2u8 {
            // the parity class of the roots must be constant over the class
            let mut root_u: Option<u8> = None;
            let mut root_w: Option<u8> = None;
            for (id, (ee, _)) in o.edge_points.iter().enumerate() {
                if *ee != e || pe[id] != c {
                    continue;
                }
                let cu = pv[o.graph.root(2 * id)];
                let cw = pv[o.graph.root(2 * id + 1)];
                match root_u {
                    None => root_u = Some(cu),
                    Some(prev) => assert_eq!(prev, cu, "parity classes are not root-consistent"),
                }
                match root_w {
                    None => root_w = Some(cw),
                    Some(prev) => assert_eq!(prev, cw, "parity classes are not root-consistent"),
                }
            }
            let cu = root_u.expect("parity classes are nonempty");
            let cw = root_w.expect("parity classes are nonempty");
            edges.push((
                2 * u + usize::from(cu),
                2 * w + usize::from(cw),
                format!("{}.{}", base.edge_name(e), c),
            ));
        }
    }
    let total = Graph::build(vnames, edges);
    let vmap: Vec<usize> = (0..2 * base.n_vertices()).map(|i| i / 2).collect();
    let mut hmap = Vec::new();
    for i in 0..total.n_edges() {
        let e = i / 2;
        hmap.push(2 * e);
        hmap.push(2 * e + 1);
    }
    let map = Morphism {
        vmap,
        hmap,
        deg_v: vec![1; total.n_vertices()],
        deg_e: vec![1; total.n_edges()],
    };
    validate(&map, &total, base, None, None)
        .map_err(|e| NgonalError::InvalidTower(format!("orientation cover not harmonic: {e}")))?;
    let (iota_v, iota_h) =
        derive_iota(&map, &total, base).map_err(|e| NgonalError::InvalidTower(e.to_string()))?;
    let comps = components(&total);
    let mut comp_of = HashMap::new();
    for x in 0..base.n_vertices() {
        for c in 0..2u8 {
            comp_of.insert((x, c), comps.comp_of_vertex[2 * x + usize::from(c)]);
        }
    }
    Ok(OrientationCover {
        cover: crate::harmonic::DoubleCover {
            total,
            map,
            iota_v,
            iota_h,
        },
        comp_of,
        n_components: comps.count,
    })
}

/// A tower is orientable when its orientation double cover is trivial.
pub fn is_orientable(t: &Tower) -> Result<bool, NgonalError> {
    Ok(orientation_cover(t)?.n_components == 2)
}

// ---------------------------------------------------------------------------
// splitting the tetragonal output

/// One output tower of the split, together with the Donagi coefficient
/// vectors of its top-level points (indexed by the input's fiber tables).
#[derive(Debug, Clone)]
pub struct SplitHalf {
    pub tower: Tower,
    /// per top vertex: (base vertex, coefficient vector)
    pub vert_vecs: Vec<(usize, Vec<u32>)>,
    /// per top edge: (base edge, coefficient vector over the fiber of 2e)
    pub edge_vecs: Vec<(usize, Vec<u32>)>,
}

/// Splits the tetragonal construction of an orientable generic tower into
/// its two output towers. The pair is unordered; a deterministic sort of
/// the point data fixes the order returned here.
pub fn split(t: &Tower) -> Result<(SplitHalf, SplitHalf), NgonalError> {
    let deg = t
        .bottom_degree()
        .map_err(|e| NgonalError::InvalidTower(e.to_string()))?;
    if deg != 4 {
        return Err(NgonalError::InvalidTower(format!(
            "split requires a degree-4 bottom map, got {deg}"
        )));
    }
    let (ok, offending) = is_generic(t);
    if !ok {
        return Err(NgonalError::NotGeneric(offending));
    }
    let o = donagi_construct(t, 4)?;
    let oc = orientation_cover_of(t, &o)?;
    if oc.n_components != 2 {
        return Err(NgonalError::NotOrientable);
    }
    let (pv, _pe) = parities(t, &o)?;

    let mut halves = Vec::new();
    for comp in 0..2 {
        let keep_v: Vec<usize> = (0..o.vert_points.len())
            .filter(|&v| oc.comp_of[&(o.vert_points[v].0, pv[v])] == comp)
            .collect();
        let keep_e: Vec<usize> = (0..o.edge_points.len())
            .filter(|&u| {
                let vu = o.graph.root(2 * u);
                oc.comp_of[&(o.vert_points[vu].0, pv[vu])] == comp
            })
            .collect();
        halves.push(build_half(t, &o, keep_v, keep_e)?);
    }
    let mut it = halves.into_iter();
    let a = it.next().unwrap();
    let b = it.next().unwrap();
    let key = |h: &SplitHalf| (h.vert_vecs.clone(), h.edge_vecs.clone());
    if key(&a) <= key(&b) {
        Ok((a, b))
    } else {
        Ok((b, a))
    }
}

fn build_half(
    t: &Tower,
    o: &DonagiOutput,
    keep_v: Vec<usize>,
    keep_e: Vec<usize>,
) -> Result<SplitHalf, NgonalError> {
    let mut new_v = vec![usize::MAX; o.graph.n_vertices()];
    for (i, &v) in keep_v.iter().enumerate() {
        new_v[v] = i;
    }
    let vnames: Vec<String> = keep_v
        .iter()
        .map(|&v| o.graph.vertex_name(v).to_string())
        .collect();
    let mut edges = Vec::new();
    for &u in &keep_e {
        let (a, b) = o.graph.endpoints(u);
        assert!(
            new_v[a] != usize::MAX && new_v[b] != usize::MAX,
            "split component is not edge-closed"
        );
        edges.push((new_v[a], new_v[b], o.graph.edge_name(u).to_string()));
    }
    let top = Graph::build(vnames, edges);

    // involution restricts to the component
    let mut iota_v_top = vec![usize::MAX; top.n_vertices()];
    for (i, &v) in keep_v.iter().enumerate() {
        let im = o.iota_v[v];
        assert!(
            new_v[im] != usize::MAX,
            "involution does not preserve the split component"
        );
        assert_ne!(o.iota_v[v], v, "involution fixes a Donagi point");
        iota_v_top[i] = new_v[im];
    }
    let mut new_e = vec![usize::MAX; o.edge_points.len()];
    for (i, &u) in keep_e.iter().enumerate() {
        new_e[u] = i;
    }
    let mut iota_h_top = vec![usize::MAX; top.n_halves()];
    for (i, &u) in keep_e.iter().enumerate() {
        let im_even = o.iota_h[2 * u];
        let im_edge = new_e[im_even / 2];
        assert!(
            im_edge != usize::MAX,
            "involution does not preserve the split edges"
        );
        iota_h_top[2 * i] = 2 * im_edge + (im_even % 2);
        iota_h_top[2 * i + 1] = (2 * im_edge + (im_even % 2)) ^ 1;
    }

    // quotient by the involution: the mid graph of the output tower
    let mut orbit_of_v = vec![usize::MAX; top.n_vertices()];
    let mut mid_names = Vec::new();
    let mut reps_v = Vec::new();
    for v in 0..top.n_vertices() {
        if orbit_of_v[v] != usize::MAX {
            continue;
        }
        let im = iota_v_top[v];
        assert_ne!(im, v, "free involution expected on generic split outputs");
        let id = reps_v.len();
        orbit_of_v[v] = id;
        orbit_of_v[im] = id;
        let name = top.vertex_name(v).min(top.vertex_name(im)).to_string();
        mid_names.push(name);
        reps_v.push(v.min(im));
    }
    let mut orbit_of_e = vec![usize::MAX; top.n_edges()];
    let mut mid_edges = Vec::new();
    let mut reps_e = Vec::new();
    let mut pi_hmap = vec![usize::MAX; top.n_halves()];
    for u in 0..top.n_edges() {
        if orbit_of_e[u] != usize::MAX {
            continue;
        }
        let im = iota_h_top[2 * u] / 2;
        assert_ne!(im, u, "free involution expected on split edges");
        let id = mid_edges.len();
        orbit_of_e[u] = id;
        orbit_of_e[im] = id;
        let rep = u.min(im);
        reps_e.push(rep);
        let name = top.edge_name(u).min(top.edge_name(im)).to_string();
        let (a, b) = top.endpoints(rep);
        mid_edges.push((orbit_of_v[a], orbit_of_v[b], name));
        // rep keeps its orientation, the mirror follows via iota
        pi_hmap[2 * rep] = 2 * id;
        pi_hmap[2 * rep + 1] = 2 * id + 1;
        let mirrored_even = iota_h_top[2 * rep];
        pi_hmap[mirrored_even] = 2 * id;
        pi_hmap[mirrored_even ^ 1] = 2 * id + 1;
    }
    let mid = Graph::build(mid_names, mid_edges);

    let pi = Morphism {
        vmap: orbit_of_v.clone(),
        hmap: pi_hmap,
        deg_v: vec![1; top.n_vertices()],
        deg_e: vec![1; top.n_edges()],
    };

    // the induced degree-4 map down to the base
    let f_vmap: Vec<usize> = reps_v.iter().map(|&v| o.map.vmap[keep_v[v]]).collect();
    let mut f_hmap = vec![usize::MAX; mid.n_halves()];
    let mut f_deg_e = vec![0u32; mid.n_edges()];
    for (id, &rep) in reps_e.iter().enumerate() {
        let orig = keep_e[rep];
        f_hmap[2 * id] = o.map.hmap[2 * orig];
        f_hmap[2 * id + 1] = o.map.hmap[2 * orig + 1];
        f_deg_e[id] = o.map.deg_e[orig];
    }
    let f_deg_v: Vec<u32> = reps_v.iter().map(|&v| o.map.deg_v[keep_v[v]]).collect();
    let f = Morphism {
        vmap: f_vmap,
        hmap: f_hmap,
        deg_v: f_deg_v,
        deg_e: f_deg_e,
    };

    let (top_len, mid_len) = match &o.metric {
        Some(lens) => {
            let tl: Vec<LinearForm> = keep_e.iter().map(|&u| lens[u].clone()).collect();
            let ml: Vec<LinearForm> = reps_e.iter().map(|&rep| tl[rep].clone()).collect();
            (Some(tl), Some(ml))
        }
        None => (None, None),
    };

    let tower = Tower {
        base: t.base.clone(),
        mid,
        top,
        f,
        pi,
        iota_v: iota_v_top,
        iota_h: iota_h_top,
        base_len: t.base_len.clone(),
        mid_len,
        top_len,
        dashed: None,
    };
    tower
        .validate()
        .map_err(|e| NgonalError::InvalidTower(format!("split output invalid: {e}")))?;

    let vert_vecs: Vec<(usize, Vec<u32>)> =
        keep_v.iter().map(|&v| o.vert_points[v].clone()).collect();
    let edge_vecs: Vec<(usize, Vec<u32>)> =
        keep_e.iter().map(|&u| o.edge_points[u].clone()).collect();
    Ok(SplitHalf {
        tower,
        vert_vecs,
        edge_vecs,
    })
}

/// Packages a Donagi construction as an ordinary tower: the constructed
/// graph, its quotient by the involution, and the base. Involution-fixed
/// points are allowed and give a dilated double cover.
pub fn donagi_to_tower(t: &Tower, o: &DonagiOutput) -> Result<Tower, NgonalError> {
    let top = o.graph.clone();
    let nv = top.n_vertices();
    let ne = top.n_edges();
    // vertex orbits
    let mut orbit_v = vec![usize::MAX; nv];
    let mut reps_v = Vec::new();
    let mut mid_names = Vec::new();
    let mut pi_deg_v = vec![1u32; nv];
    for v in 0..nv {
        if orbit_v[v] != usize::MAX {
            continue;
        }
        let im = o.iota_v[v];
        let id = reps_v.len();
        orbit_v[v] = id;
        if im == v {
            pi_deg_v[v] = 2;
            mid_names.push(top.vertex_name(v).to_string());
        } else {
            orbit_v[im] = id;
            mid_names.push(top.vertex_name(v).min(top.vertex_name(im)).to_string());
        }
        reps_v.push(v);
    }
    // edge orbits; a fixed edge is fixed pointwise (the involution
    // preserves the side over the reference half of the base edge)
    let mut orbit_e = vec![usize::MAX; ne];
    let mut reps_e = Vec::new();
    let mut mid_edges = Vec::new();
    let mut pi_hmap = vec![usize::MAX; top.n_halves()];
    let mut pi_deg_e = vec![1u32; ne];
    for u in 0..ne {
        if orbit_e[u] != usize::MAX {
            continue;
        }
        let im_even = o.iota_h[2 * u];
        assert_eq!(im_even % 2, 0, "involution preserves the reference side");
        let im = im_even / 2;
        let id = reps_e.len();
        orbit_e[u] = id;
        let name = if im == u {
            pi_deg_e[u] = 2;
            top.edge_name(u).to_string()
        } else {
            orbit_e[im] = id;
            top.edge_name(u).min(top.edge_name(im)).to_string()
        };
        let (a, b) = top.endpoints(u);
        mid_edges.push((orbit_v[a], orbit_v[b], name));
        pi_hmap[2 * u] = 2 * id;
        pi_hmap[2 * u + 1] = 2 * id + 1;
        if im != u {
            pi_hmap[2 * im] = 2 * id;
            pi_hmap[2 * im + 1] = 2 * id + 1;
        }
        reps_e.push(u);
    }
    let mid = Graph::build(mid_names, mid_edges);
    let pi = Morphism {
        vmap: orbit_v,
        hmap: pi_hmap,
        deg_v: pi_deg_v,
        deg_e: pi_deg_e,
    };

    // induced map down to the base: local degrees divide out the cover
    let f_vmap: Vec<usize> = reps_v.iter().map(|&v| o.map.vmap[v]).collect();
    let mut f_hmap = vec![usize::MAX; mid.n_halves()];
    let mut f_deg_e = vec![0u32; mid.n_edges()];
    let mut f_deg_v = vec![0u32; mid.n_vertices()];
    for (id, &rep) in reps_e.iter().enumerate() {
        f_hmap[2 * id] = o.map.hmap[2 * rep];
        f_hmap[2 * id + 1] = o.map.hmap[2 * rep + 1];
        assert_eq!(
            o.map.deg_e[rep] % pi.deg_e[rep],
            0,
            "quotient degree must divide"
        );
        f_deg_e[id] = o.map.deg_e[rep] / pi.deg_e[rep];
    }
    for (id, &rep) in reps_v.iter().enumerate() {
        assert_eq!(
            o.map.deg_v[rep] % pi.deg_v[rep],
            0,
            "quotient degree must divide"
        );
        f_deg_v[id] = o.map.deg_v[rep] / pi.deg_v[rep];
    }
    let f = Morphism {
        vmap: f_vmap,
        hmap: f_hmap,
        deg_v: f_deg_v,
        deg_e: f_deg_e,
    };

    let mid_len = match (&t.base_len, &f) {
        (Some(bl), f) => Some(crate::harmonic::metrize_source(f, &mid, bl)),
        _ => None,
    };
    let tower = Tower {
        base: t.base.clone(),
        mid,
        top,
        f,
        pi,
        iota_v: o.iota_v.clone(),
        iota_h: o.iota_h.clone(),
        base_len: t.base_len.clone(),
        mid_len,
        top_len: o.metric.clone(),
        dashed: None,
    };
    tower
        .validate()
        .map_err(|e| NgonalError::InvalidTower(format!("constructed tower invalid: {e}")))?;
    Ok(tower)
}

// ---------------------------------------------------------------------------
// tower contraction

/// Contracts a base edge together with all of its preimages on both
/// levels; local degrees are recomputed from the surviving edges.
pub fn contract_tower(t: &Tower, e: usize) -> Result<Tower, NgonalError> {
    if t.base.is_loop(e) {
        return Err(NgonalError::LoopContraction(
            t.base.edge_name(e).to_string(),
        ));
    }
    let s_base = BTreeSet::from([e]);
    let s_mid: BTreeSet<usize> = (0..t.mid.n_edges()).filter(|&x| t.f.emap(x) == e).collect();
    let s_top: BTreeSet<usize> = (0..t.top.n_edges())
        .filter(|&x| s_mid.contains(&t.pi.emap(x)))
        .collect();
    let cb = contract_edges(&t.base, &s_base).map_err(contract_err)?;
    let cm = contract_edges(&t.mid, &s_mid).map_err(contract_err)?;
    let ct = contract_edges(&t.top, &s_top).map_err(contract_err)?;

    if cb.graph.n_edges() == 0 {
        return Err(NgonalError::InvalidTower(
            "contraction leaves the base with no edges".into(),
        ));
    }

    let f = rebuild_morphism(&t.f, &t.mid, &cm, &cb)?;
    let pi = rebuild_morphism(&t.pi, &t.top, &ct, &cm)?;
    let mut iota_v = vec![usize::MAX; ct.graph.n_vertices()];
    for v in 0..t.top.n_vertices() {
        iota_v[ct.vmap[v]] = ct.vmap[t.iota_v[v]];
    }
    let mut iota_h = vec![usize::MAX; ct.graph.n_halves()];
    for h in 0..t.top.n_halves() {
        if let Some(ne) = ct.emap[t.top.edge_of(h)] {
            let nh = 2 * ne + h % 2;
            let ih = t.iota_h[h];
            let ie = ct.emap[t.top.edge_of(ih)].expect("iota preserves the contracted set");
            iota_h[nh] = 2 * ie + ih % 2;
        }
    }

    let restrict = |lens: &Option<Vec<LinearForm>>, emap: &[Option<usize>], n: usize| {
        lens.as_ref().map(|l| {
            let mut out = vec![LinearForm::zero(); n];
            for (old, ne) in emap.iter().enumerate() {
                if let Some(ne) = ne {
                    out[*ne] = l[old].clone();
                }
            }
            out
        })
    };

    let tower = Tower {
        base_len: restrict(&t.base_len, &cb.emap, cb.graph.n_edges()),
        mid_len: restrict(&t.mid_len, &cm.emap, cm.graph.n_edges()),
        top_len: restrict(&t.top_len, &ct.emap, ct.graph.n_edges()),
        base: cb.graph,
        mid: cm.graph,
        top: ct.graph,
        f,
        pi,
        iota_v,
        iota_h,
        dashed: None,
    };
    tower
        .validate()
        .map_err(|e| NgonalError::InvalidTower(format!("contracted tower invalid: {e}")))?;
    Ok(tower)
}

fn contract_err(e: crate::symgraph::SymError) -> NgonalError {
    match e {
        crate::symgraph::SymError::LoopContraction(n) => NgonalError::LoopContraction(n),
        other => NgonalError::InvalidTower(other.to_string()),
    }
}

/// Rebuilds a morphism on contracted source and target; vertex degrees
/// are recomputed from the surviving edge degrees via harmonicity.
fn rebuild_morphism(
    m: &Morphism,
    old_src: &Graph,
    src: &crate::symgraph::Contraction,
    dst: &crate::symgraph::Contraction,
) -> Result<Morphism, NgonalError> {
    let nv = src.graph.n_vertices();
    let ne = src.graph.n_edges();
    let mut vmap = vec![usize::MAX; nv];
    for v in 0..old_src.n_vertices() {
        let nvv = src.vmap[v];
        let image = dst.vmap[m.vmap[v]];
        if vmap[nvv] != usize::MAX && vmap[nvv] != image {
            return Err(NgonalError::InvalidTower(
                "contraction identifies vertices with different images".into(),
            ));
        }
        vmap[nvv] = image;
    }
    let mut hmap = vec![usize::MAX; 2 * ne];
    let mut deg_e = vec![0u32; ne];
    for old_e in 0..old_src.n_edges() {
        if let Some(new_e) = src.emap[old_e] {
            let old_img = m.emap(old_e);
            let new_img = dst.emap[old_img].ok_or_else(|| {
                NgonalError::InvalidTower("surviving edge maps to a contracted edge".into())
            })?;
            for side in 0..2 {
                let old_h = 2 * old_e + side;
                let img_h = m.hmap[old_h];
                hmap[2 * new_e + side] = 2 * new_img + img_h % 2;
            }
            deg_e[new_e] = m.deg_e[old_e];
        }
    }
    // recompute vertex degrees from harmonicity
    let mut deg_v = vec![0u32; nv];
    for v in 0..nv {
        let fv = vmap[v];
        let mut chosen: Option<u32> = None;
        for &h in dst.graph.tangent(fv) {
            let sum: u32 = src
                .graph
                .tangent(v)
                .iter()
                .filter(|&&hh| hmap[hh] == h)
                .map(|&hh| deg_e[src.graph.edge_of(hh)])
                .sum();
            match chosen {
                None => chosen = Some(sum),
                Some(c) if c != sum => {
                    return Err(NgonalError::InvalidTower(format!(
                        "contraction breaks harmonicity at {}",
                        src.graph.vertex_name(v)
                    )))
                }
                _ => {}
            }
        }
        deg_v[v] = chosen.ok_or_else(|| {
            NgonalError::InvalidTower("contracted image vertex has no tangent edges".into())
        })?;
        if deg_v[v] == 0 {
            return Err(NgonalError::InvalidTower(format!(
                "vertex {} has no edges over some tangent direction",
                src.graph.vertex_name(v)
            )));
        }
    }
    Ok(Morphism {
        vmap,
        hmap,
        deg_v,
        deg_e,
    })
}

// ---------------------------------------------------------------------------
// triality

#[derive(Debug, Clone)]
pub struct TrialityReport {
    pub passed: bool,
    pub details: Vec<String>,
}

/// Applies the tetragonal construction to both outputs of `t` and checks,
/// via tower isomorphism over the common base, that the results are the
/// original tower and the other output.
pub fn triality_check(t: &Tower) -> Result<TrialityReport, NgonalError> {
    let (o1, o2) = split(t)?;
    let mut details = Vec::new();
    let mut passed = true;
    for (i, (this, other)) in [(&o1, &o2), (&o2, &o1)].iter().enumerate() {
        let (a, b) = split(&this.tower)?;
        let direct = tower_isomorphic(&a.tower, t).is_some()
            && tower_isomorphic(&b.tower, &other.tower).is_some();
        let crossed = !direct
            && tower_isomorphic(&b.tower, t).is_some()
            && tower_isomorphic(&a.tower, &other.tower).is_some();
        if direct || crossed {
            details.push(format!(
                "output {} reproduces {{input, other output}}",
                i + 1
            ));
        } else {
            passed = false;
            details.push(format!(
                "output {} does NOT reproduce {{input, other output}}",
                i + 1
            ));
        }
    }
    Ok(TrialityReport { passed, details })
}

/// The explicit fiberwise bijections of the triality: on the component of
/// the reconstruction where every divisor-sum has exactly one point of
/// the original tower common to all its summands, that assignment is the
/// bijection onto the original top graph; on the other component, the
/// points occurring three times survive (with multiplicities
/// (count - dilation)/2 in the dilated cases) and land in the other
/// output.
pub struct TrialityMaps {
    /// reconstruction vertex/edge ids sent to t.top vertex/half-edge ids
    pub even_v: Vec<(usize, usize)>,
    pub even_e: Vec<(usize, usize)>,
    /// and the odd side, sent to out2 top vertex/edge ids
    pub odd_v: Vec<(usize, usize)>,
    pub odd_e: Vec<(usize, usize)>,
}

pub fn canonical_triality_maps(
    t: &Tower,
    out1: &SplitHalf,
    out2: &SplitHalf,
) -> Result<TrialityMaps, NgonalError> {
    let tables = FiberTables::build(t);
    let p1 = donagi_construct(&out1.tower, 4)?;
    let oc = orientation_cover_of(&out1.tower, &p1)?;
    if oc.n_components != 2 {
        return Err(NgonalError::NotOrientable);
    }
    let (pv, _) = parities(&out1.tower, &p1)?;
    // the even/odd split is by the components of the orientation double
    // cover of the reconstruction, not by the per-fiber parity labels
    let comp_of_v: Vec<usize> = (0..p1.graph.n_vertices())
        .map(|v| oc.comp_of[&(p1.vert_points[v].0, pv[v])])
        .collect();
    let t1 = &p1.tables;

    let mut out2_v_index: HashMap<(usize, Vec<u32>), usize> = HashMap::new();
    for (id, (x, vec)) in out2.vert_vecs.iter().enumerate() {
        out2_v_index.insert((*x, vec.clone()), id);
    }
    let mut out2_e_index: HashMap<(usize, Vec<u32>), usize> = HashMap::new();
    for (id, (e, vec)) in out2.edge_vecs.iter().enumerate() {
        out2_e_index.insert((*e, vec.clone()), id);
    }

    let mut maps = TrialityMaps {
        even_v: vec![],
        even_e: vec![],
        odd_v: vec![],
        odd_e: vec![],
    };
    for class in 0..2usize {
        let vs: Vec<usize> = (0..p1.graph.n_vertices())
            .filter(|&v| comp_of_v[v] == class)
            .collect();
        let es: Vec<usize> = (0..p1.edge_points.len())
            .filter(|&u| comp_of_v[p1.graph.root(2 * u)] == class)
            .collect();
        // try the common-point rule on this class
        let mut even_ok = true;
        let mut ev = Vec::new();
        let mut ee = Vec::new();
        for &v in &vs {
            match common_point_vertex(t, &tables, out1, &p1, t1, v) {
                Some(p) => ev.push((v, p)),
                None => {
                    even_ok = false;
                    break;
                }
            }
        }
        if even_ok {
            for &u in &es {
                match common_point_edge(t, &tables, out1, &p1, t1, u) {
                    Some(h) => ee.push((u, h)),
                    None => {
                        even_ok = false;
                        break;
                    }
                }
            }
        }
        if even_ok && !vs.is_empty() {
            maps.even_v = ev;
            maps.even_e = ee;
        } else {
            for &v in &vs {
                let target = triple_rule_vertex(t, &tables, out1, &p1, t1, v).ok_or_else(|| {
                    NgonalError::TrialityFailure("triple rule failed on a vertex".into())
                })?;
                let id = out2_v_index.get(&target).ok_or_else(|| {
                    NgonalError::TrialityFailure("triple rule left the expected output".into())
                })?;
                maps.odd_v.push((v, *id));
            }
            for &u in &es {
                let target = triple_rule_edge(t, &tables, out1, &p1, t1, u).ok_or_else(|| {
                    NgonalError::TrialityFailure("triple rule failed on an edge".into())
                })?;
                let id = out2_e_index.get(&target).ok_or_else(|| {
                    NgonalError::TrialityFailure("triple rule left the expected output".into())
                })?;
                maps.odd_e.push((u, *id));
            }
        }
    }
    if maps.even_v.is_empty() || maps.odd_v.is_empty() {
        return Err(NgonalError::TrialityFailure(
            "could not identify the even and odd components".into(),
        ));
    }

    verify_triality_maps(t, out2, &p1, &maps)?;
    Ok(maps)
}

fn support_vecs<'a>(
    out1: &'a SplitHalf,
    t1: &FiberTables,
    x: usize,
    vec: &[u32],
) -> Vec<(&'a Vec<u32>, u32)> {
    let mut out = Vec::new();
    for (i, &c1v) in t1.vert_fiber[x].iter().enumerate() {
        if vec[i] > 0 {
            out.push((&out1.vert_vecs[c1v].1, vec[i]));
        }
    }
    out
}

// The image point of the "common summand" rule, generalized to dilated
// fibers: with count(p) the multiplicity-weighted number of occurrences
// of p among the summands and d(p) the dilation over the base,
// (count - 2d)/2 is +1 at the image, -1 at its involution mirror, and 0
// elsewhere. In the free case this is exactly "the unique point common
// to all four summands".
fn common_point_vertex(
    t: &Tower,
    tables: &FiberTables,
    out1: &SplitHalf,
    p1: &DonagiOutput,
    t1: &FiberTables,
    v: usize,
) -> Option<usize> {
    let (x, vec) = &p1.vert_points[v];
    let supp = support_vecs(out1, t1, *x, vec);
    let fiber = &tables.vert_fiber[*x];
    let mut found: Option<usize> = None;
    let mut mirror = false;
    for (i, &p) in fiber.iter().enumerate() {
        let count: i64 = supp
            .iter()
            .map(|(d, m)| i64::from(d[i]) * i64::from(*m))
            .sum();
        match count - 2 * i64::from(t.top_deg_to_base_v(p)) {
            2 => {
                if found.is_some() {
                    return None;
                }
                found = Some(p);
            }
            -2 => {
                if mirror {
                    return None;
                }
                mirror = true;
            }
            0 => {}
            _ => return None,
        }
    }
    match (found, mirror) {
        (Some(p), true) => Some(p),
        _ => None,
    }
}

fn common_point_edge(
    t: &Tower,
    tables: &FiberTables,
    out1: &SplitHalf,
    p1: &DonagiOutput,
    t1: &FiberTables,
    u: usize,
) -> Option<usize> {
    let (e, vec) = &p1.edge_points[u];
    let mut supp = Vec::new();
    for (i, &c1h) in t1.half_fiber[*e].iter().enumerate() {
        if vec[i] > 0 {
            supp.push((&out1.edge_vecs[c1h / 2].1, vec[i]));
        }
    }
    let fiber = &tables.half_fiber[*e];
    let mut found: Option<usize> = None;
    let mut mirror = false;
    for (i, &h) in fiber.iter().enumerate() {
        let count: i64 = supp
            .iter()
            .map(|(d, m)| i64::from(d[i]) * i64::from(*m))
            .sum();
        match count - 2 * i64::from(t.top_deg_to_base_e(t.top.edge_of(h))) {
            2 => {
                if found.is_some() {
                    return None;
                }
                found = Some(h);
            }
            -2 => {
                if mirror {
                    return None;
                }
                mirror = true;
            }
            0 => {}
            _ => return None,
        }
    }
    match (found, mirror) {
        (Some(h), true) => Some(h),
        _ => None,
    }
}

fn triple_rule_vertex(
    t: &Tower,
    tables: &FiberTables,
    out1: &SplitHalf,
    p1: &DonagiOutput,
    t1: &FiberTables,
    v: usize,
) -> Option<(usize, Vec<u32>)> {
    let (x, vec) = &p1.vert_points[v];
    let supp = support_vecs(out1, t1, *x, vec);
    let fiber = &tables.vert_fiber[*x];
    let mut out = vec![0u32; fiber.len()];
    for (i, &p) in fiber.iter().enumerate() {
        let count: u32 = supp.iter().map(|(d, m)| d[i] * m).sum();
        let dil = t.top_deg_to_base_v(p);
        if count < dil || (count - dil) % 2 != 0 {
            return None;
        }
        out[i] = (count - dil) / 2;
    }
    Some((*x, out))
}

fn triple_rule_edge(
    t: &Tower,
    tables: &FiberTables,
    out1: &SplitHalf,
    p1: &DonagiOutput,
    t1: &FiberTables,
    u: usize,
) -> Option<(usize, Vec<u32>)> {
    let (e, vec) = &p1.edge_points[u];
    let mut supp = Vec::new();
    for (i, &c1h) in t1.half_fiber[*e].iter().enumerate() {
        if vec[i] > 0 {
            supp.push((&out1.edge_vecs[c1h / 2].1, vec[i]));
        }
    }
    let fiber = &tables.half_fiber[*e];
    let mut out = vec![0u32; fiber.len()];
    for (i, &h) in fiber.iter().enumerate() {
        let count: u32 = supp.iter().map(|(d, m)| d[i] * m).sum();
        let dil = t.top_deg_to_base_e(t.top.edge_of(h));
        if count < dil || (count - dil) % 2 != 0 {
            return None;
        }
        out[i] = (count - dil) / 2;
    }
    Some((*e, out))
}

/// The canonical maps must be fiberwise bijections commuting with the
/// root maps, the involutions, and the maps to the base.
fn verify_triality_maps(
    t: &Tower,
    out2: &SplitHalf,
    p1: &DonagiOutput,
    maps: &TrialityMaps,
) -> Result<(), NgonalError> {
    let fail = |m: &str| Err(NgonalError::TrialityFailure(m.to_string()));
    let ev: HashMap<usize, usize> = maps.even_v.iter().copied().collect();
    let mut hit = BTreeSet::new();
    for (&a, &b) in ev.iter() {
        if p1.map.vmap[a] != t.f.vmap[t.pi.vmap[b]] {
            return fail("even map does not commute with the maps to the base");
        }
        if !hit.insert(b) {
            return fail("even map is not injective on vertices");
        }
    }
    if hit.len() != t.top.n_vertices() {
        return fail("even map is not onto the original top vertices");
    }
    for (a, h) in &maps.even_e {
        let (ru, rw) = (p1.graph.root(2 * a), p1.graph.root(2 * a + 1));
        let (bu, bw) = (t.top.root(*h), t.top.root(t.top.mate(*h)));
        if ev.get(&ru) != Some(&bu) || ev.get(&rw) != Some(&bw) {
            return fail("even map does not commute with the root maps");
        }
    }
    for (&a, &b) in ev.iter() {
        let ia = p1.iota_v[a];
        match ev.get(&ia) {
            Some(&ib) if ib == t.iota_v[b] => {}
            _ => return fail("even map does not commute with the involution"),
        }
    }
    let ov: HashMap<usize, usize> = maps.odd_v.iter().copied().collect();
    let mut hit2 = BTreeSet::new();
    for (&a, &b) in ov.iter() {
        if p1.map.vmap[a] != out2.tower.f.vmap[out2.tower.pi.vmap[b]] {
            return fail("odd map does not commute with the maps to the base");
        }
        if !hit2.insert(b) {
            return fail("odd map is not injective on vertices");
        }
    }
    if hit2.len() != out2.tower.top.n_vertices() {
        return fail("odd map is not onto the other output");
    }
    for (a, b_edge) in &maps.odd_e {
        let (ru, rw) = (p1.graph.root(2 * a), p1.graph.root(2 * a + 1));
        let (bu, bw) = (
            out2.tower.top.root(2 * b_edge),
            out2.tower.top.root(2 * b_edge + 1),
        );
        if ov.get(&ru) != Some(&bu) || ov.get(&rw) != Some(&bw) {
            return fail("odd map does not commute with the root maps");
        }
    }
    for (&a, &b) in ov.iter() {
        let ia = p1.iota_v[a];
        match ov.get(&ia) {
            Some(&ib) if ib == out2.tower.iota_v[b] => {}
            _ => return fail("odd map does not commute with the involution"),
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
