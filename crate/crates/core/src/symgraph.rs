//! Half-edge graphs, symbolic edge lengths, and the purely graph-theoretic
//! utilities (genus, components, contraction, isomorphism search).
//!
//! A graph is a set of vertices, a set of half-edges, a root map and a
//! fixed-point-free involution pairing each half-edge with its mate. We
//! store half-edges so that mate(h) = h ^ 1 and edge(h) = h / 2, which
//! makes the involution fixed-point-free by construction.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymError {
    #[error("graph is not connected")]
    DisconnectedGraph,
    #[error("cannot contract loop edge {0}")]
    LoopContraction(String),
}

// ---------------------------------------------------------------------------
// length variables and linear forms

/// Registry of declared length variables. Index order is declaration order,
/// which is also the rendering order for Gram matrices.
#[derive(Debug, Clone, Default)]
pub struct Vars {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

/// Reserved variable name modeling a rational constant term.
pub const CONST_VAR: &str = "1";

impl Vars {
    pub fn new() -> Self {
        Vars::default()
    }

    pub fn declare(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        i
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Declares all of `other`'s variables here and returns the index remap.
    pub fn absorb(&mut self, other: &Vars) -> Vec<usize> {
        other.names.iter().map(|n| self.declare(n)).collect()
    }
}

/// Exact rational linear combination of length variables, kept in canonical
/// sparse form: zero coefficients are never stored, so structural equality
/// is semantic equality.
#[derive(Debug, Clone, PartialEq, Eq, Default, PartialOrd, Ord, Hash)]
pub struct LinearForm {
    coeffs: BTreeMap<usize, BigRational>,
}

impl LinearForm {
    pub fn zero() -> Self {
        LinearForm::default()
    }

    pub fn var(i: usize) -> Self {
        LinearForm::term(i, BigRational::one())
    }

    pub fn term(i: usize, c: BigRational) -> Self {
        let mut f = LinearForm::zero();
        if !c.is_zero() {
            f.coeffs.insert(i, c);
        }
        f
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs
            .get(&i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigRational)> {
        self.coeffs.iter().map(|(&i, c)| (i, c))
    }

    pub fn add(&self, other: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        for (i, c) in other.coeffs.iter() {
            let entry = out.coeffs.entry(*i).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                out.coeffs.remove(i);
            }
        }
        out
    }

    pub fn sub(&self, other: &LinearForm) -> LinearForm {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LinearForm {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, s: &BigRational) -> LinearForm {
        if s.is_zero() {
            return LinearForm::zero();
        }
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c *= s;
        }
        out
    }

    pub fn scale_int(&self, s: &BigInt) -> LinearForm {
        self.scale(&BigRational::from_integer(s.clone()))
    }

    /// All coefficients nonnegative (positivity under any positive
    /// assignment of the variables).
    pub fn nonnegative(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    /// Rewrites variable indices through `map` (see [`Vars::absorb`]).
    pub fn remap(&self, map: &[usize]) -> LinearForm {
        let mut out = LinearForm::zero();
        for (i, c) in self.coeffs.iter() {
            out = out.add(&LinearForm::term(map[*i], c.clone()));
        }
        out
    }

    /// Exact substitution of every variable; the constant variable "1", if
    /// present in `vars`, is always substituted by 1.
    pub fn specialize(
        &self,
        vars: &Vars,
        assignment: &HashMap<String, BigRational>,
    ) -> Option<BigRational> {
        let mut acc = BigRational::zero();
        for (i, c) in self.coeffs.iter() {
            let name = vars.name(*i);
            let v = if name == CONST_VAR {
                BigRational::one()
            } else {
                assignment.get(name)?.clone()
            };
            acc += c * v;
        }
        Some(acc)
    }

    pub fn render(&self, vars: &Vars) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (i, c)) in self.coeffs.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            let name = vars.name(*i);
            if name == CONST_VAR {
                let _ = write!(out, "{}", render_rat(&mag));
            } else if mag.is_one() {
                out.push_str(name);
            } else {
                let _ = write!(out, "{}*{}", render_rat(&mag), name);
            }
        }
        out
    }
}

pub fn render_rat(q: &BigRational) -> String {
    if q.is_integer() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

// ---------------------------------------------------------------------------
// graphs

/// Finite graph given by vertices, half-edges, root map and the mate
/// involution. Edges are the orbits {h, mate(h)}; loops are permitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vnames: Vec<String>,
    enames: Vec<String>,
    /// root vertex of each half-edge; half-edges 2e and 2e+1 form edge e
    root: Vec<usize>,
    /// tangent space of each vertex (half-edges rooted there), by id
    tangents: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from named vertices and edges given as endpoint pairs.
    /// Edge e gets half-edges 2e (rooted at the first endpoint) and 2e+1.
    pub fn build(vnames: Vec<String>, edges: Vec<(usize, usize, String)>) -> Graph {
        let mut root = Vec::with_capacity(edges.len() * 2);
        let mut enames = Vec::with_capacity(edges.len());
        for (u, v, name) in edges {
            assert!(
                u < vnames.len() && v < vnames.len(),
                "edge endpoint out of range"
            );
            root.push(u);
            root.push(v);
            enames.push(name);
        }
        let mut tangents = vec![Vec::new(); vnames.len()];
        for (h, &r) in root.iter().enumerate() {
            tangents[r].push(h);
        }
        Graph {
            vnames,
            enames,
            root,
            tangents,
        }
    }

    /// Convenience constructor with generated names.
    pub fn from_edges(n_vertices: usize, edges: &[(usize, usize)]) -> Graph {
        let vnames = (0..n_vertices).map(|i| format!("v{i}")).collect();
        let edges = edges
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| (u, v, format!("e{i}")))
            .collect();
        Graph::build(vnames, edges)
    }

    pub fn n_vertices(&self) -> usize {
        self.vnames.len()
    }

    pub fn n_edges(&self) -> usize {
        self.enames.len()
    }

    pub fn n_halves(&self) -> usize {
        self.root.len()
    }

    pub fn root(&self, h: usize) -> usize {
        self.root[h]
    }

    pub fn mate(&self, h: usize) -> usize {
        h ^ 1
    }

    pub fn edge_of(&self, h: usize) -> usize {
        h / 2
    }

    pub fn halves(&self, e: usize) -> (usize, usize) {
        (2 * e, 2 * e + 1)
    }

    /// Endpoints in half-edge order (tail = root of 2e, head = root of 2e+1).
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        (self.root[2 * e], self.root[2 * e + 1])
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.root[2 * e] == self.root[2 * e + 1]
    }

    pub fn tangent(&self, v: usize) -> &[usize] {
        &self.tangents[v]
    }

    pub fn valence(&self, v: usize) -> usize {
        self.tangents[v].len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vnames[v]
    }

    pub fn edge_name(&self, e: usize) -> &str {
        &self.enames[e]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<usize> {
        self.vnames.iter().position(|n| n == name)
    }

    pub fn edge_by_name(&self, name: &str) -> Option<usize> {
        self.enames.iter().position(|n| n == name)
    }
}

/// A point of a graph: a vertex or an edge (the latter standing for the
/// orbit {h, mate(h)} of its half-edges).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    V(usize),
    E(usize),
}

// ---------------------------------------------------------------------------
// graph-theoretic operations

/// g(G) = |E| - |V| + 1 for connected graphs.
pub fn genus(g: &Graph) -> Result<usize, SymError> {
    let comps = components(g);
    if comps.count != 1 {
        return Err(SymError::DisconnectedGraph);
    }
    Ok(g.n_edges() + 1 - g.n_vertices())
}

/// First Betti number |E| - |V| + #components; agrees with `genus` on
/// connected graphs and sums over components otherwise.
pub fn betti(g: &Graph) -> usize {
    let comps = components(g);
    g.n_edges() + comps.count - g.n_vertices()
}

#[derive(Debug, Clone)]
pub struct Components {
    pub comp_of_vertex: Vec<usize>,
    pub count: usize,
}

impl Components {
    pub fn comp_of_half(&self, g: &Graph, h: usize) -> usize {
        self.comp_of_vertex[g.root(h)]
    }
}

pub fn components(g: &Graph) -> Components {
    let n = g.n_vertices();
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        comp[start] = count;
        while let Some(v) = stack.pop() {
            for &h in g.tangent(v) {
                let w = g.root(g.mate(h));
                if comp[w] == usize::MAX {
                    comp[w] = count;
                    stack.push(w);
                }
            }
        }
        count += 1;
    }
    Components {
        comp_of_vertex: comp,
        count,
    }
}

/// Result of contracting an edge set: the new graph plus the vertex and
/// edge correspondences (contracted edges map to None).
#[derive(Debug, Clone)]
pub struct Contraction {
    pub graph: Graph,
    pub vmap: Vec<usize>,
    pub emap: Vec<Option<usize>>,
}

/// Identifies the endpoints of every edge in `set` (transitive closure) and
/// drops those edges; the remaining edges keep their identity. Edges that
/// are loops in the input are rejected.
pub fn contract_edges(g: &Graph, set: &BTreeSet<usize>) -> Result<Contraction, SymError> {
    for &e in set {
        if e >= g.n_edges() {
            panic!("edge id {e} out of range");
        }
        if g.is_loop(e) {
            return Err(SymError::LoopContraction(g.edge_name(e).to_string()));
        }
    }
    // union-find over vertices
    let mut parent: Vec<usize> = (0..g.n_vertices()).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &e in set {
        let (u, v) = g.endpoints(e);
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru.max(rv)] = ru.min(rv);
        }
    }
    let mut vmap = vec![usize::MAX; g.n_vertices()];
    let mut new_names = Vec::new();
    for v in 0..g.n_vertices() {
        let r = find(&mut parent, v);
        if vmap[r] == usize::MAX {
            vmap[r] = new_names.len();
            new_names.push(g.vertex_name(r).to_string());
        }
        vmap[v] = vmap[r];
    }
    let mut edges = Vec::new();
    let mut emap = vec![None; g.n_edges()];
    for e in 0..g.n_edges() {
        if set.contains(&e) {
            continue;
        }
        let (u, v) = g.endpoints(e);
        emap[e] = Some(edges.len());
        edges.push((vmap[u], vmap[v], g.edge_name(e).to_string()));
    }
    Ok(Contraction {
        graph: Graph::build(new_names, edges),
        vmap,
        emap,
    })
}

// ---------------------------------------------------------------------------
// isomorphism search

#[derive(Debug, Clone)]
pub struct GraphIso {
    pub vmap: Vec<usize>,
    pub hmap: Vec<usize>,
}

/// Deterministic backtracking search for a root- and mate-preserving
/// bijection. Vertices are matched in order of decreasing valence; the
/// half-edge bijection is reconstructed from the vertex bijection by
/// pairing parallel bundles in id order.
pub fn graph_isomorphic(a: &Graph, b: &Graph) -> Option<GraphIso> {
    iso_search(a, b, |_, _| true, |_, _| true)
}

/// Isomorphism search with extra per-vertex and per-edge compatibility
/// predicates (used for tower isomorphism where points carry K-images,
/// degrees and lengths).
pub fn iso_search(
    a: &Graph,
    b: &Graph,
    vertex_ok: impl Fn(usize, usize) -> bool,
    edge_ok: impl Fn(usize, usize) -> bool,
) -> Option<GraphIso> {
    if a.n_vertices() != b.n_vertices() || a.n_edges() != b.n_edges() {
        return None;
    }
    let n = a.n_vertices();
    // degree-sequence pruning
    let mut da: Vec<usize> = (0..n).map(|v| a.valence(v)).collect();
    let mut db: Vec<usize> = (0..n).map(|v| b.valence(v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return None;
    }
    // match vertices in order of decreasing valence, ties by id
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (usize::MAX - a.valence(v), v));

    let mut vmap = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn neighbor_key(g: &Graph, v: usize, vmap: &[usize]) -> Vec<(usize, usize)> {
        // multiset of (mapped neighbor or MAX, loop flag surrogate)
        let mut key: Vec<(usize, usize)> = g
            .tangent(v)
            .iter()
            .map(|&h| {
                let w = g.root(g.mate(h));
                (
                    if vmap[w] == usize::MAX {
                        usize::MAX
                    } else {
                        vmap[w]
                    },
                    usize::from(w == v),
                )
            })
            .collect();
        key.sort_unstable();
        key
    }

    fn consistent(
        a: &Graph,
        b: &Graph,
        vmap: &[usize],
        v: usize,
        w: usize,
        edge_ok: &impl Fn(usize, usize) -> bool,
    ) -> bool {
        // for every already-mapped neighbor, the parallel bundles must match
        let mut bundles_a: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &h in a.tangent(v) {
            let u = a.root(a.mate(h));
            if vmap[u] != usize::MAX {
                bundles_a.entry(vmap[u]).or_default().push(a.edge_of(h));
            }
        }
        let mut bundles_b: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &h in b.tangent(w) {
            let u = b.root(b.mate(h));
            // u may be w itself (loop); count only mapped vertices plus w
            let mu = if u == w {
                w
            } else {
                vmap.iter()
                    .position(|&x| x == u)
                    .map(|_| u)
                    .unwrap_or(usize::MAX)
            };
            let _ = mu;
            bundles_b.entry(u).or_default().push(b.edge_of(h));
        }
        // compare v's mapped bundles against w's bundles to those images
        for (img, ea) in bundles_a {
            let eb = match bundles_b.get(&img) {
                Some(eb) => eb,
                None => return false,
            };
            if ea.len() != eb.len() {
                return false;
            }
            // greedy bundle pairing in id order, each a-edge must accept some b-edge
            let mut taken = vec![false; eb.len()];
            for &ea_i in &ea {
                let mut placed = false;
                for (j, &eb_j) in eb.iter().enumerate() {
                    if !taken[j] && edge_ok(ea_i, eb_j) {
                        taken[j] = true;
                        placed = true;
                        break;
                    }
                }
                if !placed {
                    return false;
                }
            }
        }
        true
    }

    fn go(
        a: &Graph,
        b: &Graph,
        order: &[usize],
        pos: usize,
        vmap: &mut Vec<usize>,
        used: &mut Vec<bool>,
        vertex_ok: &impl Fn(usize, usize) -> bool,
        edge_ok: &impl Fn(usize, usize) -> bool,
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let v = order[pos];
        for w in 0..b.n_vertices() {
            if used[w] || a.valence(v) != b.valence(w) || !vertex_ok(v, w) {
                continue;
            }
            vmap[v] = w;
            if neighbor_key(a, v, vmap) == neighbor_key_b(b, w, vmap)
                && consistent(a, b, vmap, v, w, edge_ok)
            {
                used[w] = true;
                if go(a, b, order, pos + 1, vmap, used, vertex_ok, edge_ok) {
                    return true;
                }
                used[w] = false;
            }
            vmap[v] = usize::MAX;
        }
        false
    }

    fn neighbor_key_b(g: &Graph, w: usize, vmap: &[usize]) -> Vec<(usize, usize)> {
        // b-side analogue: neighbors that are images of mapped a-vertices
        let mut image = vec![false; g.n_vertices()];
        for &m in vmap.iter() {
            if m != usize::MAX {
                image[m] = true;
            }
        }
        let mut key: Vec<(usize, usize)> = g
            .tangent(w)
            .iter()
            .map(|&h| {
                let u = g.root(g.mate(h));
                (if image[u] { u } else { usize::MAX }, usize::from(u == w))
            })
            .collect();
        key.sort_unstable();
        key
    }

    if !go(a, b, &order, 0, &mut vmap, &mut used, &vertex_ok, &edge_ok) {
        return None;
    }

    // reconstruct the half-edge bijection: pair parallel bundles in id order
    let hmap = match build_hmap(a, b, &vmap, &edge_ok) {
        Some(h) => h,
        None => return None,
    };
    Some(GraphIso { vmap, hmap })
}

fn build_hmap(
    a: &Graph,
    b: &Graph,
    vmap: &[usize],
    edge_ok: &impl Fn(usize, usize) -> bool,
) -> Option<Vec<usize>> {
    let mut hmap = vec![usize::MAX; a.n_halves()];
    let mut used_e = vec![false; b.n_edges()];
    for ea in 0..a.n_edges() {
        let (u, v) = a.endpoints(ea);
        let (bu, bv) = (vmap[u], vmap[v]);
        let mut placed = false;
        for eb in 0..b.n_edges() {
            if used_e[eb] || !edge_ok(ea, eb) {
                continue;
            }
            let (x, y) = b.endpoints(eb);
            if (x, y) == (bu, bv) {
                hmap[2 * ea] = 2 * eb;
                hmap[2 * ea + 1] = 2 * eb + 1;
            } else if (y, x) == (bu, bv) {
                hmap[2 * ea] = 2 * eb + 1;
                hmap[2 * ea + 1] = 2 * eb;
            } else {
                continue;
            }
            used_e[eb] = true;
            placed = true;
            break;
        }
        if !placed {
            return None;
        }
    }
    Some(hmap)
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn linear_form_canonical() {
        let a = LinearForm::term(0, rat(1, 2)).add(&LinearForm::term(1, rat(3, 1)));
        let b = LinearForm::term(1, rat(3, 1)).add(&LinearForm::term(0, rat(1, 2)));
        assert_eq!(a, b);
        let cancel = a.sub(&a);
        assert!(cancel.is_zero());
    }

    #[test]
    fn linear_form_render() {
        let mut vars = Vars::new();
        let l1 = vars.declare("l1");
        let l3 = vars.declare("l3");
        let f = LinearForm::var(l1).sub(&LinearForm::var(l3));
        assert_eq!(f.render(&vars), "l1-l3");
        let g = LinearForm::term(l1, rat(2, 1)).add(&LinearForm::term(l3, rat(2, 1)));
        assert_eq!(g.render(&vars), "2*l1+2*l3");
        assert_eq!(LinearForm::zero().render(&vars), "0");
        let c = vars.declare(CONST_VAR);
        assert_eq!(LinearForm::term(c, rat(3, 2)).render(&vars), "3/2");
    }

    #[test]
    fn genus_path_and_loop() {
        // path with 3 vertices, 2 edges -> genus 0
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        assert_eq!(genus(&path).unwrap(), 0);
        // single loop -> genus 1
        let loop1 = Graph::from_edges(1, &[(0, 0)]);
        assert_eq!(genus(&loop1).unwrap(), 1);
        // two disjoint loops -> disconnected
        let two = Graph::from_edges(2, &[(0, 0), (1, 1)]);
        assert_eq!(genus(&two), Err(SymError::DisconnectedGraph));
        assert_eq!(components(&two).count, 2);
    }

    #[test]
    fn theta_graph_connected() {
        let theta = Graph::from_edges(2, &[(0, 1), (0, 1), (0, 1)]);
        assert_eq!(components(&theta).count, 1);
        assert_eq!(genus(&theta).unwrap(), 2);
    }

    #[test]
    fn contract_basics() {
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let c = contract_edges(&path, &BTreeSet::from([0])).unwrap();
        assert_eq!(c.graph.n_vertices(), 2);
        assert_eq!(c.graph.n_edges(), 1);
        // contracting nothing is the identity
        let c0 = contract_edges(&path, &BTreeSet::new()).unwrap();
        assert_eq!(c0.graph, path);
        // loop contraction rejected
        let loop1 = Graph::from_edges(1, &[(0, 0)]);
        assert!(matches!(
            contract_edges(&loop1, &BTreeSet::from([0])),
            Err(SymError::LoopContraction(_))
        ));
    }

    #[test]
    fn contract_parallel_pair() {
        // contracting both edges of a banana merges the endpoints once
        let banana = Graph::from_edges(2, &[(0, 1), (0, 1)]);
        let c = contract_edges(&banana, &BTreeSet::from([0, 1])).unwrap();
        assert_eq!(c.graph.n_vertices(), 1);
        assert_eq!(c.graph.n_edges(), 0);
    }

    #[test]
    fn iso_identity_and_negative() {
        let theta = Graph::from_edges(2, &[(0, 1), (0, 1), (0, 1)]);
        let iso = graph_isomorphic(&theta, &theta).expect("self-isomorphic");
        for h in 0..theta.n_halves() {
            assert_eq!(iso.vmap[theta.root(h)], theta.root(iso.hmap[h]));
            assert_eq!(iso.hmap[theta.mate(h)], theta.mate(iso.hmap[h]));
        }
        let path = Graph::from_edges(2, &[(0, 1)]);
        let loop1 = Graph::from_edges(1, &[(0, 0)]);
        assert!(graph_isomorphic(&path, &loop1).is_none());
    }

    #[test]
    fn iso_detects_relabeling() {
        let a = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]);
        let b = Graph::from_edges(4, &[(2, 3), (3, 0), (0, 1), (1, 2), (3, 1)]);
        assert!(graph_isomorphic(&a, &b).is_some());
        let c = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 1)]);
        assert!(graph_isomorphic(&a, &c).is_none());
    }

    proptest! {
        #[test]
        fn linform_arith_is_exact(coeffs in proptest::collection::vec((0usize..6, -20i64..20, 1i64..9), 0..12)) {
            let mut f = LinearForm::zero();
            let mut g = LinearForm::zero();
            for (i, n, d) in &coeffs {
                f = f.add(&LinearForm::term(*i, rat(*n, *d)));
                g = LinearForm::term(*i, rat(*n, *d)).add(&g);
            }
            // commutative and associative accumulation agree
            prop_assert_eq!(f.clone(), g);
            // exactness: f + f - f == f
            prop_assert_eq!(f.add(&f).sub(&f), f.clone());
            // scaling distributes
            let s = rat(7, 3);
            prop_assert_eq!(f.scale(&s).sub(&f.scale(&s)), LinearForm::zero());
        }

        #[test]
        fn contraction_preserves_genus(n in 2usize..7, extra in 0usize..4) {
            // random-ish connected graph: spanning path plus extra chords
            let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
            for k in 0..extra {
                edges.push((k % n, (k * 2 + 1) % n));
            }
            let g = Graph::from_edges(n, &edges);
            let non_loop = (0..g.n_edges()).find(|&e| !g.is_loop(e));
            if let Some(e) = non_loop {
                let before = genus(&g);
                let c = contract_edges(&g, &BTreeSet::from([e])).unwrap();
                prop_assert_eq!(c.graph.n_vertices() + 1, g.n_vertices());
                prop_assert_eq!(c.graph.n_edges() + 1, g.n_edges());
                if let Ok(gen) = before {
                    prop_assert_eq!(genus(&c.graph).unwrap(), gen);
                }
            }
        }
    }

    #[test]
    fn specialize_linear_form() {
        let mut vars = Vars::new();
        let l1 = vars.declare("l1");
        let f = LinearForm::term(l1, BigRational::from_i64(2).unwrap());
        let mut asg = HashMap::new();
        asg.insert("l1".to_string(), rat(3, 1));
        assert_eq!(f.specialize(&vars, &asg).unwrap(), rat(6, 1));
    }
}
