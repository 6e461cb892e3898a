//! Shared test support: random towers built from sheet labelings of the
//! trivial octuple cover, and brute-force oracles kept independent of the
//! library's computation paths.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use twr_core::harmonic::{metrize_source, Morphism, Tower};
use twr_core::intlat::IntMatrix;
use twr_core::prym::boundary_matrix;
use twr_core::symgraph::{components, Graph, LinearForm, Vars};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn load_fixture(name: &str) -> twr_core::towerio::TowerFile {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture readable");
    match twr_core::towerio::parse_tower(&text) {
        Ok(tf) => tf,
        Err(ds) => panic!("fixture {name} failed to parse: {:?}", ds),
    }
}

// ---------------------------------------------------------------------------
// random towers as quotients of the trivial octuple cover
//
// Sheets are 0..=7 with negation s -> (s + 4) % 8. A tower is described by
// a partition of the sheets over every base point: classes are
// negation-paired and never contain a sheet together with its negation,
// which makes the double cover free. Edge partitions refine the meets of
// their endpoint partitions.

fn neg(s: u8) -> u8 {
    (s + 4) % 8
}

type Partition = Vec<u8>; // masks, disjoint, covering 0xff

fn singletons() -> Partition {
    (0..8).map(|s| 1u8 << s).collect()
}

fn mask_neg(m: u8) -> u8 {
    (m << 4) | (m >> 4)
}

/// Random generic vertex partition: type III (all singletons), type II
/// (one twisted pair), or type I (one twisted triple).
fn random_vertex_partition(rng: &mut ChaCha8Rng, allow_i: bool) -> Partition {
    let kind = rng.gen_range(0..if allow_i { 3 } else { 2 });
    match kind {
        0 => singletons(),
        1 => {
            // class {a, +-b}
            let a = rng.gen_range(0..4u8);
            let mut b = rng.gen_range(0..4u8);
            while b == a {
                b = rng.gen_range(0..4u8);
            }
            let b = if rng.gen_bool(0.5) { b } else { neg(b) };
            let c = (1u8 << a) | (1u8 << b);
            let mut p = vec![c, mask_neg(c)];
            for s in 0..8u8 {
                if c & (1 << s) == 0 && mask_neg(c) & (1 << s) == 0 {
                    p.push(1 << s);
                }
            }
            p
        }
        _ => {
            // class {a, +-b, +-c}
            let mut idx: Vec<u8> = (0..4).collect();
            for i in (1..4).rev() {
                let j = rng.gen_range(0..=i);
                idx.swap(i, j);
            }
            let (a, b, c) = (idx[0], idx[1], idx[2]);
            let b = if rng.gen_bool(0.5) { b } else { neg(b) };
            let c = if rng.gen_bool(0.5) { c } else { neg(c) };
            let m = (1u8 << a) | (1u8 << b) | (1u8 << c);
            let mut p = vec![m, mask_neg(m)];
            for s in 0..8u8 {
                if m & (1 << s) == 0 && mask_neg(m) & (1 << s) == 0 {
                    p.push(1 << s);
                }
            }
            p
        }
    }
}

/// Meet of two partitions: nonempty pairwise intersections.
fn meet(a: &Partition, b: &Partition) -> Partition {
    let mut out = Vec::new();
    for &x in a {
        for &y in b {
            if x & y != 0 {
                out.push(x & y);
            }
        }
    }
    out
}

/// Random edge partition refining the meet: either all singletons or one
/// nonsingleton meet class (with its negation) plus singletons.
fn random_edge_partition(rng: &mut ChaCha8Rng, m: &Partition) -> Partition {
    let big: Vec<u8> = m.iter().copied().filter(|c| c.count_ones() > 1).collect();
    if big.is_empty() || rng.gen_bool(0.5) {
        return singletons();
    }
    let c = big[rng.gen_range(0..big.len())];
    let mut p = vec![c, mask_neg(c)];
    for s in 0..8u8 {
        if c & (1 << s) == 0 && mask_neg(c) & (1 << s) == 0 {
            p.push(1 << s);
        }
    }
    p
}

/// Assembles the tower determined by partitions over the base points.
pub fn tower_from_partitions(
    base: &Graph,
    base_len: &[LinearForm],
    vparts: &[Partition],
    eparts: &[Partition],
) -> Tower {
    // the top graph: one vertex per (base vertex, class)
    let mut top_vids: Vec<Vec<(u8, usize)>> = vec![Vec::new(); base.n_vertices()];
    let mut top_names = Vec::new();
    for (x, p) in vparts.iter().enumerate() {
        for &c in p {
            top_vids[x].push((c, top_names.len()));
            top_names.push(format!("{}c{:02x}", base.vertex_name(x), c));
        }
    }
    let class_at = |x: usize, sheet: u8| -> usize {
        top_vids[x]
            .iter()
            .find(|(c, _)| c & (1 << sheet) != 0)
            .map(|(_, id)| *id)
            .expect("partitions cover the sheets")
    };
    let mut top_edges = Vec::new();
    let mut top_edeg = Vec::new();
    let mut top_e_class: Vec<(usize, u8)> = Vec::new();
    for (e, p) in eparts.iter().enumerate() {
        let (u, w) = base.endpoints(e);
        for &c in p {
            let sheet = (0..8u8).find(|s| c & (1 << s) != 0).unwrap();
            top_edges.push((
                class_at(u, sheet),
                class_at(w, sheet),
                format!("{}c{:02x}", base.edge_name(e), c),
            ));
            top_edeg.push(c.count_ones());
            top_e_class.push((e, c));
        }
    }
    let top = Graph::build(top_names, top_edges);

    // the mid graph: classes of absolute values
    let abs_part = |p: &Partition| -> Vec<u8> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &c in p {
            let a = (c | mask_neg(c)) & 0x0f;
            if seen.insert(a) {
                out.push(a);
            }
        }
        out
    };
    let mut mid_vids: Vec<Vec<(u8, usize)>> = vec![Vec::new(); base.n_vertices()];
    let mut mid_names = Vec::new();
    for x in 0..base.n_vertices() {
        for a in abs_part(&vparts[x]) {
            mid_vids[x].push((a, mid_names.len()));
            mid_names.push(format!("{}a{:x}", base.vertex_name(x), a));
        }
    }
    let mid_class_at = |x: usize, sheet: u8| -> usize {
        let a = sheet % 4;
        mid_vids[x]
            .iter()
            .find(|(c, _)| c & (1 << a) != 0)
            .map(|(_, id)| *id)
            .unwrap()
    };
    let mut mid_edges = Vec::new();
    let mut mid_edeg = Vec::new();
    let mut mid_e_class: Vec<(usize, u8)> = Vec::new();
    for (e, p) in eparts.iter().enumerate() {
        let (u, w) = base.endpoints(e);
        for a in abs_part(p) {
            let sheet = (0..4u8).find(|s| a & (1 << s) != 0).unwrap();
            mid_edges.push((
                mid_class_at(u, sheet),
                mid_class_at(w, sheet),
                format!("{}a{:x}", base.edge_name(e), a),
            ));
            mid_edeg.push(a.count_ones());
            mid_e_class.push((e, a));
        }
    }
    let mid = Graph::build(mid_names, mid_edges);

    // morphisms
    let f_vmap: Vec<usize> = {
        let mut v = vec![0; mid.n_vertices()];
        for (x, classes) in mid_vids.iter().enumerate() {
            for (c, id) in classes {
                v[*id] = x;
                let _ = c;
            }
        }
        v
    };
    let f_deg_v: Vec<u32> = {
        let mut v = vec![0; mid.n_vertices()];
        for classes in mid_vids.iter() {
            for (c, id) in classes {
                v[*id] = c.count_ones();
            }
        }
        v
    };
    let f_hmap: Vec<usize> = (0..mid.n_halves())
        .map(|h| 2 * mid_e_class[h / 2].0 + h % 2)
        .collect();
    let f = Morphism {
        vmap: f_vmap,
        hmap: f_hmap,
        deg_v: f_deg_v,
        deg_e: mid_edeg,
    };

    let pi_vmap: Vec<usize> = {
        let mut v = vec![0; top.n_vertices()];
        for (x, classes) in top_vids.iter().enumerate() {
            for (c, id) in classes {
                let sheet = (0..8u8).find(|s| c & (1 << s) != 0).unwrap();
                v[*id] = mid_class_at(x, sheet);
            }
        }
        v
    };
    let pi_emap: Vec<usize> = top_e_class
        .iter()
        .map(|(e, c)| {
            let a = (c | mask_neg(*c)) & 0x0f;
            mid_e_class
                .iter()
                .position(|&(me, mc)| me == *e && mc == a)
                .unwrap()
        })
        .collect();
    let pi_hmap: Vec<usize> = (0..top.n_halves())
        .map(|h| 2 * pi_emap[h / 2] + h % 2)
        .collect();
    let pi = Morphism {
        vmap: pi_vmap,
        hmap: pi_hmap,
        deg_v: vec![1; top.n_vertices()],
        deg_e: vec![1; top.n_edges()],
    };

    // involution: negate the class
    let mut iota_v = vec![0; top.n_vertices()];
    for (x, classes) in top_vids.iter().enumerate() {
        for (c, id) in classes {
            let nc = mask_neg(*c);
            iota_v[*id] = top_vids[x].iter().find(|(cc, _)| *cc == nc).unwrap().1;
        }
    }
    let mut iota_h = vec![0; top.n_halves()];
    for (u, (e, c)) in top_e_class.iter().enumerate() {
        let nc = mask_neg(*c);
        let im = top_e_class
            .iter()
            .position(|&(ee, cc)| ee == *e && cc == nc)
            .unwrap();
        iota_h[2 * u] = 2 * im;
        iota_h[2 * u + 1] = 2 * im + 1;
    }

    let mid_len = metrize_source(&f, &mid, base_len);
    let top_len = metrize_source(&pi, &top, &mid_len);
    let t = Tower {
        base: base.clone(),
        mid,
        top,
        f,
        pi,
        iota_v,
        iota_h,
        base_len: Some(base_len.to_vec()),
        mid_len: Some(mid_len),
        top_len: Some(top_len),
        dashed: None,
    };
    t.validate().expect("generated tower is valid");
    t
}

pub fn random_tree(
    rng: &mut ChaCha8Rng,
    n_edges: usize,
    vars: &mut Vars,
) -> (Graph, Vec<LinearForm>) {
    let mut edges = Vec::new();
    for i in 1..=n_edges {
        let parent = rng.gen_range(0..i);
        edges.push((parent, i));
    }
    let g = Graph::from_edges(n_edges + 1, &edges);
    let lens = (0..n_edges)
        .map(|e| LinearForm::var(vars.declare(&format!("l{e}"))))
        .collect();
    (g, lens)
}

/// Random generic tower over a random tree, optionally with extra base
/// cycles; always a fiberwise quotient of the trivial octuple cover.
pub fn random_quotient_tower(
    rng: &mut ChaCha8Rng,
    max_edges: usize,
    extra_cycles: usize,
    vars: &mut Vars,
) -> Tower {
    let n_edges = rng.gen_range(1..=max_edges);
    let (mut base, mut lens) = random_tree(rng, n_edges, vars);
    for k in 0..extra_cycles {
        // add a chord (or loop) between random vertices
        let u = rng.gen_range(0..base.n_vertices());
        let w = rng.gen_range(0..base.n_vertices());
        let mut edges: Vec<(usize, usize, String)> = (0..base.n_edges())
            .map(|e| {
                let (a, b) = base.endpoints(e);
                (a, b, base.edge_name(e).to_string())
            })
            .collect();
        edges.push((u, w, format!("x{k}")));
        let names = (0..base.n_vertices())
            .map(|v| base.vertex_name(v).to_string())
            .collect();
        base = Graph::build(names, edges);
        lens.push(LinearForm::var(vars.declare(&format!("lx{k}"))));
    }
    let vparts: Vec<Partition> = (0..base.n_vertices())
        .map(|_| random_vertex_partition(rng, true))
        .collect();
    let eparts: Vec<Partition> = (0..base.n_edges())
        .map(|e| {
            let (u, w) = base.endpoints(e);
            let m = meet(&vparts[u], &vparts[w]);
            random_edge_partition(rng, &m)
        })
        .collect();
    tower_from_partitions(&base, &lens, &vparts, &eparts)
}

/// Random good tower: a connected quotient over a tree (connectedness of
/// the double cover makes the tower orientable with connected outputs).
pub fn random_good_tower(rng: &mut ChaCha8Rng, max_edges: usize, vars: &mut Vars) -> Tower {
    loop {
        let t = random_quotient_tower(rng, max_edges, 0, vars);
        if components(&t.top).count == 1 {
            return t;
        }
    }
}

/// Random orientable generic tower with a disconnected double cover.
pub fn random_disconnected_top_tower(
    rng: &mut ChaCha8Rng,
    max_edges: usize,
    vars: &mut Vars,
) -> Tower {
    loop {
        let t = if rng.gen_bool(0.5) {
            // restrict gluing to {1,2} and {3,4}: the mid graph splits
            // into two double covers of the base
            let n_edges = rng.gen_range(1..=max_edges);
            let (base, lens) = random_tree(rng, n_edges, vars);
            let part = |rng: &mut ChaCha8Rng| -> Partition {
                // glue at most one of the pairs, keeping the profile
                // generic: (2,2) is never produced
                let glue = rng.gen_range(0..3);
                let mut p = Vec::new();
                for (k, pair) in [[0u8, 1], [2, 3]].into_iter().enumerate() {
                    if glue == k {
                        let b = if rng.gen_bool(0.5) {
                            pair[1]
                        } else {
                            neg(pair[1])
                        };
                        let c = (1u8 << pair[0]) | (1 << b);
                        p.push(c);
                        p.push(mask_neg(c));
                    } else {
                        for s in pair {
                            p.push(1 << s);
                            p.push(1 << neg(s));
                        }
                    }
                }
                p
            };
            let vparts: Vec<Partition> = (0..base.n_vertices()).map(|_| part(rng)).collect();
            let eparts: Vec<Partition> = (0..base.n_edges())
                .map(|e| {
                    let (u, w) = base.endpoints(e);
                    random_edge_partition(rng, &meet(&vparts[u], &vparts[w]))
                })
                .collect();
            tower_from_partitions(&base, &lens, &vparts, &eparts)
        } else {
            random_quotient_tower(rng, max_edges, 0, vars)
        };
        if components(&t.top).count > 1 {
            return t;
        }
    }
}

// ---------------------------------------------------------------------------
// brute-force oracles

/// All kernel vectors of pi_* restricted to H_1 with coefficients in
/// [-bound, bound], by exhaustive enumeration over the edge coordinates.
pub fn brute_force_prym_vectors(t: &Tower, bound: i64) -> Vec<Vec<BigInt>> {
    let ne = t.top.n_edges();
    let boundary = boundary_matrix(&t.top);
    let push = twr_core::prym::edge_pushforward(t);
    let mut out = Vec::new();
    let mut cur = vec![0i64; ne];
    fn rec(
        i: usize,
        cur: &mut Vec<i64>,
        bound: i64,
        boundary: &IntMatrix,
        push: &IntMatrix,
        out: &mut Vec<Vec<BigInt>>,
    ) {
        if i == cur.len() {
            let v: Vec<BigInt> = cur.iter().map(|&c| BigInt::from(c)).collect();
            if boundary.mul_vec(&v).iter().all(|x| x.is_zero())
                && push.mul_vec(&v).iter().all(|x| x.is_zero())
            {
                out.push(v);
            }
            return;
        }
        for c in -bound..=bound {
            cur[i] = c;
            rec(i + 1, cur, bound, boundary, push, out);
        }
        cur[i] = 0;
    }
    rec(0, &mut cur, bound, &boundary, &push, &mut out);
    out
}

/// Membership of a vector in the integer span of the columns of a basis.
pub fn in_span(basis: &IntMatrix, v: &[BigInt]) -> bool {
    let mut b = IntMatrix::zero(basis.rows, 1);
    for (i, x) in v.iter().enumerate() {
        b.set(i, 0, x.clone());
    }
    twr_core::intlat::solve_matrix(basis, &b).is_some()
}
