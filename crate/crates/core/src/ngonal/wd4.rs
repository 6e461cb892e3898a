//! The even signed permutation group WD4 on {±1, ±2, ±3, ±4}, the
//! octuple-quotient witness search, and the component-count predictions
//! for towers that are fiberwise quotients of the trivial octuple cover.
//!
//! Sheets are encoded 0..=7 with 0..=3 standing for +1..+4 and 4..=7 for
//! -1..-4; negation is s -> (s + 4) % 8.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::harmonic::Tower;
use crate::ngonal::NgonalError;
use crate::symgraph::Point;

pub const N_SHEETS: usize = 8;

pub type Perm = [u8; N_SHEETS];

pub fn neg(s: u8) -> u8 {
    (s + 4) % 8
}

pub const IDENTITY: Perm = [0, 1, 2, 3, 4, 5, 6, 7];

fn compose(a: &Perm, b: &Perm) -> Perm {
    // (a ∘ b)(x) = a(b(x))
    let mut out = [0u8; N_SHEETS];
    for (x, o) in out.iter_mut().enumerate() {
        *o = a[b[x] as usize];
    }
    out
}

/// The bitransposition (s, t)(-s, -t); requires t != s and t != -s.
pub fn bitransposition(s: u8, t: u8) -> Perm {
    assert!(t != s && t != neg(s));
    let mut p = IDENTITY;
    p[s as usize] = t;
    p[t as usize] = s;
    p[neg(s) as usize] = neg(t);
    p[neg(t) as usize] = neg(s);
    p
}

/// WD4: generated by (1,2)(-1,-2), (1,3)(-1,-3), (1,4)(-1,-4) and
/// (1,-1)(2,-2); order 192.
#[derive(Debug, Clone)]
pub struct WD4Group {
    pub elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
}

pub fn wd4() -> WD4Group {
    let gens = [
        bitransposition(0, 1),
        bitransposition(0, 2),
        bitransposition(0, 3),
        {
            // (1,-1)(2,-2)
            let mut p = IDENTITY;
            p[0] = 4;
            p[4] = 0;
            p[1] = 5;
            p[5] = 1;
            p
        },
    ];
    let mut seen: HashSet<Perm> = HashSet::new();
    let mut elements = vec![IDENTITY];
    seen.insert(IDENTITY);
    let mut frontier = vec![IDENTITY];
    while let Some(p) = frontier.pop() {
        for g in &gens {
            let q = compose(g, &p);
            if seen.insert(q) {
                elements.push(q);
                frontier.push(q);
            }
        }
    }
    elements.sort_unstable();
    let index = elements.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    WD4Group { elements, index }
}

impl WD4Group {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Elements that are products of exactly two disjoint transpositions.
    pub fn bitranspositions(&self) -> Vec<Perm> {
        self.elements
            .iter()
            .filter(|p| {
                let fixed = (0..N_SHEETS).filter(|&i| p[i] as usize == i).count();
                let two_cycles = (0..N_SHEETS)
                    .filter(|&i| p[i] as usize != i && p[p[i] as usize] as usize == i)
                    .count();
                fixed == 4 && two_cycles == 4
            })
            .copied()
            .collect()
    }

    /// Closure of a set of element indices as a sorted index list.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.elements.len()];
        let id = self.index_of(&IDENTITY).unwrap();
        seen[id] = true;
        let mut members = vec![id];
        let mut frontier = vec![id];
        while let Some(i) = frontier.pop() {
            for &g in gens {
                let q = compose(&self.elements[g], &self.elements[i]);
                let qi = self.index_of(&q).expect("closure stays inside the group");
                if !seen[qi] {
                    seen[qi] = true;
                    members.push(qi);
                    frontier.push(qi);
                }
            }
        }
        members.sort_unstable();
        members
    }

    /// Whether the subgroup given by element indices acts transitively on
    /// the 8 sheets.
    pub fn is_transitive(&self, members: &[usize]) -> bool {
        let mut reach = [false; N_SHEETS];
        reach[0] = true;
        let mut frontier = vec![0u8];
        while let Some(s) = frontier.pop() {
            for &i in members {
                let t = self.elements[i][s as usize];
                if !reach[t as usize] {
                    reach[t as usize] = true;
                    frontier.push(t);
                }
            }
        }
        reach.iter().all(|&r| r)
    }

    /// All distinct subgroups generated by subsets of the bitranspositions,
    /// as sorted index lists. Walks the lattice: every subset closure is
    /// reachable by adding one generator at a time.
    pub fn subgroups_from_bitranspositions(&self) -> Vec<Vec<usize>> {
        let bits: Vec<usize> = self
            .bitranspositions()
            .iter()
            .map(|p| self.index_of(p).unwrap())
            .collect();
        let trivial = self.closure(&[]);
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        seen.insert(trivial.clone());
        let mut queue = vec![trivial];
        let mut out = Vec::new();
        while let Some(sub) = queue.pop() {
            out.push(sub.clone());
            for &b in &bits {
                if sub.binary_search(&b).is_ok() {
                    continue;
                }
                let mut gens = sub.clone();
                gens.push(b);
                let cl = self.closure(&gens);
                if seen.insert(cl.clone()) {
                    queue.push(cl);
                }
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// octuple-quotient witness labelings

/// Assignment, for every top-level vertex and edge, of the set of sheets
/// of the trivial octuple cover that map onto it (as an 8-bit mask).
#[derive(Debug, Clone)]
pub struct OctupleLabeling {
    pub vert: Vec<u8>,
    pub edge: Vec<u8>,
}

fn mask_card(m: u8) -> u32 {
    m.count_ones()
}

fn mask_neg(m: u8) -> u8 {
    (m << 4) | (m >> 4)
}

/// abs-injective: no sheet together with its negation
fn mask_abs_injective(m: u8) -> bool {
    (m & mask_neg(m)) == 0
}

fn mask_abs(m: u8) -> u8 {
    (m | mask_neg(m)) & 0x0f
}

/// Searches for a labeling exhibiting the top level as a fiberwise
/// quotient of the trivial octuple cover, compatible with the quotient
/// through the trivial quadruple cover in the middle. Constraint
/// propagation runs over the edges, backtracking over the vertex fibers;
/// the first witness in lexicographic assignment order is returned.
pub fn octuple_quotient_witness(t: &Tower) -> Option<OctupleLabeling> {
    if t.bottom_degree().ok()? != 4 {
        return None;
    }
    t.validate().ok()?;

    // order base vertices by BFS from 0; after each vertex, handle the
    // base edges whose endpoints are both settled
    let nb = t.base.n_vertices();
    let mut vorder = Vec::with_capacity(nb);
    let mut seen = vec![false; nb];
    let mut queue = std::collections::VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(x) = queue.pop_front() {
        vorder.push(x);
        for &h in t.base.tangent(x) {
            let y = t.base.root(t.base.mate(h));
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    let mut settled = vec![false; nb];
    let mut plan: Vec<Task> = Vec::new();
    for &x in &vorder {
        plan.push(Task::Vertex(x));
        settled[x] = true;
        for e in 0..t.base.n_edges() {
            let (u, w) = t.base.endpoints(e);
            if (u == x || w == x) && settled[u] && settled[w] {
                plan.push(Task::Edge(e));
            }
        }
    }

    let mut lab = OctupleLabeling {
        vert: vec![0; t.top.n_vertices()],
        edge: vec![0; t.top.n_edges()],
    };
    if solve(t, &plan, 0, &mut lab) {
        Some(lab)
    } else {
        None
    }
}

enum Task {
    Vertex(usize),
    Edge(usize),
}

fn solve(t: &Tower, plan: &[Task], i: usize, lab: &mut OctupleLabeling) -> bool {
    if i == plan.len() {
        return true;
    }
    match plan[i] {
        Task::Vertex(x) => {
            let fiber: Vec<usize> = (0..t.top.n_vertices())
                .filter(|&v| t.f.vmap[t.pi.vmap[v]] == x)
                .collect();
            let caps: Vec<u32> = fiber.iter().map(|&v| t.top_deg_to_base_v(v)).collect();
            assign_sheets(
                t,
                &fiber,
                &caps,
                0,
                lab,
                &mut |t, lab| {
                    // compatibility through the middle quotient
                    for &v in &fiber {
                        let m = lab.vert[v];
                        let iv = t.iota_v[v];
                        if iv == v {
                            if mask_neg(m) != m {
                                return false;
                            }
                        } else if !mask_abs_injective(m) || mask_abs(m) != mask_abs(lab.vert[iv]) {
                            return false;
                        }
                    }
                    true
                },
                &mut |lab| solve(t, plan, i + 1, lab),
            )
        }
        Task::Edge(e) => {
            let fiber: Vec<usize> = (0..t.top.n_edges())
                .filter(|&u| t.f.emap(t.pi.emap(u)) == e)
                .collect();
            let caps: Vec<u32> = fiber.iter().map(|&u| t.top_deg_to_base_e(u)).collect();
            // allowed sheets per edge: intersection of the root masks
            let allowed: Vec<u8> = fiber
                .iter()
                .map(|&u| {
                    let (a, b) = t.top.endpoints(u);
                    lab.vert[a] & lab.vert[b]
                })
                .collect();
            assign_edge_sheets(
                t,
                &fiber,
                &caps,
                &allowed,
                0,
                lab,
                &mut |t, lab| {
                    for &u in &fiber {
                        let m = lab.edge[u];
                        let iu = t.iota_h[2 * u] / 2;
                        if iu == u {
                            if mask_neg(m) != m {
                                return false;
                            }
                        } else if !mask_abs_injective(m) || mask_abs(m) != mask_abs(lab.edge[iu]) {
                            return false;
                        }
                    }
                    true
                },
                &mut |lab| solve(t, plan, i + 1, lab),
            )
        }
    }
}

/// Distributes the 8 sheets over a vertex fiber, sheet by sheet in
/// lexicographic order, respecting the capacity of each point.
fn assign_sheets(
    t: &Tower,
    fiber: &[usize],
    caps: &[u32],
    sheet: usize,
    lab: &mut OctupleLabeling,
    check: &mut dyn FnMut(&Tower, &OctupleLabeling) -> bool,
    cont: &mut dyn FnMut(&mut OctupleLabeling) -> bool,
) -> bool {
    if sheet == N_SHEETS {
        if !check(t, lab) {
            return false;
        }
        return cont(lab);
    }
    for (k, &v) in fiber.iter().enumerate() {
        if mask_card(lab.vert[v]) < caps[k] {
            lab.vert[v] |= 1 << sheet;
            if assign_sheets(t, fiber, caps, sheet + 1, lab, check, cont) {
                return true;
            }
            lab.vert[v] &= !(1 << sheet);
        }
    }
    false
}

fn assign_edge_sheets(
    t: &Tower,
    fiber: &[usize],
    caps: &[u32],
    allowed: &[u8],
    sheet: usize,
    lab: &mut OctupleLabeling,
    check: &mut dyn FnMut(&Tower, &OctupleLabeling) -> bool,
    cont: &mut dyn FnMut(&mut OctupleLabeling) -> bool,
) -> bool {
    if sheet == N_SHEETS {
        if !check(t, lab) {
            return false;
        }
        return cont(lab);
    }
    for (k, &u) in fiber.iter().enumerate() {
        if mask_card(lab.edge[u]) < caps[k] && allowed[k] & (1 << sheet) != 0 {
            lab.edge[u] |= 1 << sheet;
            if assign_edge_sheets(t, fiber, caps, allowed, sheet + 1, lab, check, cont) {
                return true;
            }
            lab.edge[u] &= !(1 << sheet);
        }
    }
    false
}

// ---------------------------------------------------------------------------
// fiber stabilizers and connectivity prediction

/// Generators of the subgroup of WD4 acting as the identity on the fiber
/// over a base point: bitranspositions within each sheet class.
pub fn fiber_stabilizer(t: &Tower, lab: &OctupleLabeling, x: Point) -> Vec<Perm> {
    let masks: Vec<u8> = match x {
        Point::V(x) => (0..t.top.n_vertices())
            .filter(|&v| t.f.vmap[t.pi.vmap[v]] == x)
            .map(|v| lab.vert[v])
            .collect(),
        Point::E(x) => (0..t.top.n_edges())
            .filter(|&u| t.f.emap(t.pi.emap(u)) == x)
            .map(|u| lab.edge[u])
            .collect(),
    };
    let mut gens = Vec::new();
    for m in masks {
        let sheets: Vec<u8> = (0..N_SHEETS as u8).filter(|&s| m & (1 << s) != 0).collect();
        for i in 0..sheets.len() {
            for j in (i + 1)..sheets.len() {
                if sheets[j] != neg(sheets[i]) {
                    gens.push(bitransposition(sheets[i], sheets[j]));
                }
            }
        }
    }
    gens
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectivityPrediction {
    pub top_components: usize,
    pub donagi_components: usize,
}

/// Predicts the component counts of the top graph (orbits on the sheets)
/// and of the Donagi graph (orbits on the sign patterns) from the
/// stabilizer generators of a witness labeling.
pub fn predict_connectivity(t: &Tower) -> Result<ConnectivityPrediction, NgonalError> {
    let lab = octuple_quotient_witness(t).ok_or(NgonalError::NoWitnessLabeling)?;
    let mut gens = Vec::new();
    for x in crate::harmonic::base_points(t) {
        gens.extend(fiber_stabilizer(t, &lab, x));
    }
    // orbits on the 8 sheets
    let mut comp: Vec<usize> = (0..N_SHEETS).collect();
    fn find(comp: &mut Vec<usize>, x: usize) -> usize {
        while comp[x] != x {
            comp[x] = comp[comp[x]];
            let y = comp[x];
            if y == x {
                break;
            }
            return find(comp, y);
        }
        comp[x]
    }
    for g in &gens {
        for s in 0..N_SHEETS {
            let (a, b) = (find(&mut comp, s), find(&mut comp, g[s] as usize));
            if a != b {
                comp[a.max(b)] = a.min(b);
            }
        }
    }
    let top_components = (0..N_SHEETS)
        .map(|s| find(&mut comp, s))
        .collect::<BTreeSet<_>>()
        .len();

    // orbits on M: 4-subsets hitting each absolute value once, i.e. the
    // 16 sign patterns
    let m_elems: Vec<u8> = (0..16u8)
        .map(|bits| {
            let mut mask = 0u8;
            for i in 0..4 {
                if bits & (1 << i) != 0 {
                    mask |= 1 << (i + 4);
                } else {
                    mask |= 1 << i;
                }
            }
            mask
        })
        .collect();
    let apply = |g: &Perm, m: u8| -> u8 {
        let mut out = 0u8;
        for s in 0..N_SHEETS {
            if m & (1 << s) != 0 {
                out |= 1 << g[s];
            }
        }
        out
    };
    let mut mcomp: HashMap<u8, usize> = m_elems.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut parent: Vec<usize> = (0..16).collect();
    fn findp(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for g in &gens {
        for &m in &m_elems {
            let im = apply(g, m);
            let (a, b) = (
                findp(&mut parent, mcomp[&m]),
                findp(&mut parent, mcomp[&im]),
            );
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let donagi_components = (0..16)
        .map(|i| findp(&mut parent, i))
        .collect::<BTreeSet<_>>()
        .len();
    let _ = &mut mcomp;
    Ok(ConnectivityPrediction {
        top_components,
        donagi_components,
    })
}

// ---------------------------------------------------------------------------
