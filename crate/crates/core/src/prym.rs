//! Cycle lattices, Prym lattices of free double covers, the S and S^T
//! correspondence matrices between a tower and its tetragonal outputs,
//! and the factorization of S through multiplication by 2.
//!
//! Cycles are integer vectors in edge coordinates; the reference
//! orientation of edge e runs from root(2e) to root(2e+1). The Prym
//! lattice is Ker pi_* inside H_1 of the top graph, and its Gram matrix
//! is assembled from the antisymmetric edge form: a basis vector is
//! sum a_e (e+ - e-) over undilated mid edges, and the principal pairing
//! is sum a_e b_e l(e).

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::harmonic::Tower;
use crate::intlat::{integer_kernel, is_unimodular, solve_matrix, GramMatrix, IntMatrix};
use crate::ngonal::{FiberTables, SplitHalf};
use crate::symgraph::{components, Graph, LinearForm, SymError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrymError {
    #[error("the double cover is dilated")]
    DilatedCover,
    #[error("graph is not connected")]
    DisconnectedInput,
    #[error("tower carries no metric")]
    NotMetric,
    #[error("correspondence validation failed: {0}")]
    ValidationFailure(String),
    #[error("not divisible by 2 in the Prym lattice: {side} sends {element} to a vector with odd coefficients")]
    NotDivisible { side: String, element: String },
    #[error("the halved correspondence is not unimodular")]
    NotUnimodular,
    #[error(transparent)]
    Sym(#[from] SymError),
}

// ---------------------------------------------------------------------------
// cycle lattices

/// Basis of H_1 in edge coordinates, columns = fundamental cycles of a
/// spanning forest, deterministic in the edge order.
#[derive(Debug, Clone)]
pub struct CycleLattice {
    pub basis: IntMatrix,
}

/// Fundamental cycle basis for a connected graph.
pub fn h1_basis(g: &Graph) -> Result<CycleLattice, SymError> {
    if components(g).count != 1 {
        return Err(SymError::DisconnectedGraph);
    }
    Ok(cycle_basis(g))
}

/// Spanning-forest fundamental cycles; works on disconnected graphs too
/// (rank |E| - |V| + #components).
pub fn cycle_basis(g: &Graph) -> CycleLattice {
    let nv = g.n_vertices();
    let ne = g.n_edges();
    // BFS forest: parent[v] = (edge, +1 if v is the head root(2e+1))
    let mut parent: Vec<Option<(usize, i64)>> = vec![None; nv];
    let mut visited = vec![false; nv];
    let mut tree = vec![false; ne];
    for start in 0..nv {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &h in g.tangent(v) {
                let w = g.root(g.mate(h));
                let e = g.edge_of(h);
                if !visited[w] {
                    visited[w] = true;
                    tree[e] = true;
                    parent[w] = Some((e, if g.root(2 * e + 1) == w { 1 } else { -1 }));
                    queue.push_back(w);
                }
            }
        }
    }
    // signed tree path from the forest root down to v
    let path_to = |mut v: usize| -> Vec<(usize, i64)> {
        let mut out = Vec::new();
        while let Some((e, s)) = parent[v] {
            out.push((e, s));
            v = if s == 1 {
                g.root(2 * e)
            } else {
                g.root(2 * e + 1)
            };
        }
        out
    };
    let cols: Vec<usize> = (0..ne).filter(|&e| !tree[e]).collect();
    let mut basis = IntMatrix::zero(ne, cols.len());
    for (j, &e) in cols.iter().enumerate() {
        let (tail, head) = g.endpoints(e);
        basis.set(e, j, BigInt::one());
        // cycle = e + P(tail) - P(head)
        for (f, s) in path_to(tail) {
            let v = basis.get(f, j) + BigInt::from(s);
            basis.set(f, j, v);
        }
        for (f, s) in path_to(head) {
            let v = basis.get(f, j) - BigInt::from(s);
            basis.set(f, j, v);
        }
    }
    CycleLattice { basis }
}

/// Boundary matrix: rows = vertices, columns = edges, head minus tail.
pub fn boundary_matrix(g: &Graph) -> IntMatrix {
    let mut b = IntMatrix::zero(g.n_vertices(), g.n_edges());
    for e in 0..g.n_edges() {
        let (tail, head) = g.endpoints(e);
        let v = b.get(head, e) + BigInt::one();
        b.set(head, e, v);
        let v = b.get(tail, e) - BigInt::one();
        b.set(tail, e, v);
    }
    b
}

/// The integration pairing of two cycles: sum u_e v_e l(e).
pub fn integration_pairing(lengths: &[LinearForm], u: &[BigInt], v: &[BigInt]) -> LinearForm {
    let mut acc = LinearForm::zero();
    for (e, l) in lengths.iter().enumerate() {
        let c = &u[e] * &v[e];
        if !c.is_zero() {
            acc = acc.add(&l.scale_int(&c));
        }
    }
    acc
}

/// Gram matrix of the integration pairing on the columns of a basis.
pub fn gram_of_basis(lengths: &[LinearForm], basis: &IntMatrix) -> GramMatrix {
    let r = basis.cols;
    let mut g = GramMatrix::zero(r);
    for i in 0..r {
        for j in i..r {
            let f = integration_pairing(lengths, &basis.column(i), &basis.column(j));
            g.set(i, j, f.clone());
            g.set(j, i, f);
        }
    }
    g
}

// ---------------------------------------------------------------------------
// Prym lattices

/// Basis of Ker pi_* in top edge coordinates with the antisymmetric edge
/// form and the principally polarized Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PrymLattice {
    /// rows = top edges
    pub basis: IntMatrix,
    /// rows = mid edges: the a_e of the antisymmetric form
    pub antisym: IntMatrix,
    pub gram: GramMatrix,
}

impl PrymLattice {
    pub fn rank(&self) -> usize {
        self.basis.cols
    }
}

/// Signed pushforward of edge vectors: rows = mid edges, cols = top edges;
/// the entry is +1 when the top edge is oriented compatibly with its image.
pub fn edge_pushforward(t: &Tower) -> IntMatrix {
    let mut p = IntMatrix::zero(t.mid.n_edges(), t.top.n_edges());
    for te in 0..t.top.n_edges() {
        let me = t.pi.emap(te);
        let aligned = t.pi.hmap[2 * te] % 2 == 0;
        p.set(
            me,
            te,
            if aligned {
                BigInt::one()
            } else {
                -BigInt::one()
            },
        );
    }
    p
}

/// Computes Ker(pi_* on H_1(top)), converts the basis to the antisymmetric
/// edge form, and assembles the Gram matrix of the principal polarization
/// (half the integration pairing).
pub fn prym_lattice(t: &Tower) -> Result<PrymLattice, PrymError> {
    if !t.top_is_free() {
        return Err(PrymError::DilatedCover);
    }
    if components(&t.mid).count != 1 {
        return Err(PrymError::DisconnectedInput);
    }
    let mid_len = t.mid_len.as_ref().ok_or(PrymError::NotMetric)?;
    let cycles = cycle_basis(&t.top);
    let push = edge_pushforward(t);
    let kappa = integer_kernel(&push.mul(&cycles.basis));
    let basis = cycles.basis.mul(&kappa);

    // antisymmetric form: per mid edge, the coefficient on the first
    // preimage measured in the orientation aligned with the image
    let mut first_pre = vec![usize::MAX; t.mid.n_edges()];
    for te in 0..t.top.n_edges() {
        let me = t.pi.emap(te);
        if first_pre[me] == usize::MAX {
            first_pre[me] = te;
        }
    }
    let mut antisym = IntMatrix::zero(t.mid.n_edges(), basis.cols);
    for j in 0..basis.cols {
        for me in 0..t.mid.n_edges() {
            let te = first_pre[me];
            let sign = if t.pi.hmap[2 * te] % 2 == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            };
            antisym.set(me, j, sign * basis.get(te, j));
        }
    }
    if !push.mul(&basis).is_zero() {
        return Err(PrymError::ValidationFailure(
            "kernel basis does not push forward to zero".into(),
        ));
    }

    let mut gram = GramMatrix::zero(basis.cols);
    for i in 0..basis.cols {
        for j in i..basis.cols {
            let f = integration_pairing(mid_len, &antisym.column(i), &antisym.column(j));
            gram.set(i, j, f.clone());
            gram.set(j, i, f);
        }
    }
    Ok(PrymLattice {
        basis,
        antisym,
        gram,
    })
}

// ---------------------------------------------------------------------------
// the correspondences S and S^T

/// S on edge spaces (columns indexed by the edges of the output tower,
/// rows by the edges of the input top graph) and S^T going back. On
/// 1-chains the entry of S^T at (u, e) carries the weight d(u)/d(e) of
/// the respective dilations over the base, making S^T the exact adjoint
/// of S under the length pairings; the weights are 1 away from dilated
/// edges. Both matrices carry cycles to cycles and restrict to the Prym
/// lattices.
#[derive(Debug, Clone)]
pub struct Correspondence {
    pub forward: IntMatrix,
    pub backward: IntMatrix,
}

pub fn correspondence(t: &Tower, out1: &SplitHalf) -> Result<Correspondence, PrymError> {
    let tables = FiberTables::build(t);
    let n_rows = t.top.n_edges();
    let n_cols = out1.tower.top.n_edges();
    let mut forward = IntMatrix::zero(n_rows, n_cols);
    let mut backward = IntMatrix::zero(n_cols, n_rows);
    for (u, (e, vec)) in out1.edge_vecs.iter().enumerate() {
        // orientation of u relative to the base reference half 2e
        let u_half = out1.tower.f.hmap[out1.tower.pi.hmap[2 * u]];
        let sigma_u = if u_half % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        let d_u = BigInt::from(out1.tower.top_deg_to_base_e(u));
        for (i, &h) in tables.half_fiber[*e].iter().enumerate() {
            if vec[i] == 0 {
                continue;
            }
            let te = t.top.edge_of(h);
            let sigma_t = if h % 2 == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            };
            let val = &sigma_u * sigma_t * BigInt::from(vec[i]);
            let acc = forward.get(te, u) + &val;
            forward.set(te, u, acc);
            let d_te = BigInt::from(t.top_deg_to_base_e(te));
            let (q, r) = num_integer::Integer::div_rem(&(val * &d_u), &d_te);
            if !r.is_zero() {
                return Err(PrymError::ValidationFailure(
                    "S^T weights are not integral".into(),
                ));
            }
            let acc = backward.get(u, te) + q;
            backward.set(u, te, acc);
        }
    }

    // both must send cycles to cycles
    let b_t = boundary_matrix(&t.top);
    let b_1 = boundary_matrix(&out1.tower.top);
    let cyc_1 = cycle_basis(&out1.tower.top);
    let cyc_t = cycle_basis(&t.top);
    if !b_t.mul(&forward.mul(&cyc_1.basis)).is_zero() {
        return Err(PrymError::ValidationFailure(
            "S does not map H1 into H1".into(),
        ));
    }
    if !b_1.mul(&backward.mul(&cyc_t.basis)).is_zero() {
        return Err(PrymError::ValidationFailure(
            "S^T does not map H1 into H1".into(),
        ));
    }
    Ok(Correspondence { forward, backward })
}

/// S and S^T restricted to the Prym lattices, in basis coordinates.
#[derive(Debug, Clone)]
pub struct RestrictedPair {
    /// X with forward . B1 = B . X
    pub s_on_prym: IntMatrix,
    /// Y with backward . B = B1 . Y
    pub st_on_prym: IntMatrix,
}

pub fn restrict_to_prym(
    corr: &Correspondence,
    p: &PrymLattice,
    p1: &PrymLattice,
) -> Result<RestrictedPair, PrymError> {
    let s_img = corr.forward.mul(&p1.basis);
    let s_on_prym = solve_matrix(&p.basis, &s_img).ok_or_else(|| {
        PrymError::ValidationFailure("S does not restrict to the Prym lattice".into())
    })?;
    let st_img = corr.backward.mul(&p.basis);
    let st_on_prym = solve_matrix(&p1.basis, &st_img).ok_or_else(|| {
        PrymError::ValidationFailure("S^T does not restrict to the Prym lattice".into())
    })?;
    Ok(RestrictedPair {
        s_on_prym,
        st_on_prym,
    })
}

/// Checks s^t . s = 4 and s . s^t = 4 on the Prym lattices.
pub fn four_identity(r: &RestrictedPair) -> bool {
    let n = r.s_on_prym.cols;
    let m = r.st_on_prym.cols;
    let four = BigInt::from(4);
    r.st_on_prym.mul(&r.s_on_prym) == IntMatrix::identity(n).scale(&four)
        && r.s_on_prym.mul(&r.st_on_prym) == IntMatrix::identity(m).scale(&four)
}

/// Symbolic check that the correspondences double the polarizations:
/// (S B1)^T Q (S B1) = 4 B1^T Q1 B1 and (S^T B)^T Q1 (S^T B) = 4 B^T Q B,
/// where Q and Q1 are the diagonal length forms on the two edge spaces.
pub fn verify_polarization_doubling(
    corr: &Correspondence,
    t: &Tower,
    out1: &SplitHalf,
    p: &PrymLattice,
    p1: &PrymLattice,
) -> Result<(), PrymError> {
    let q_t = t.top_len.as_ref().ok_or(PrymError::NotMetric)?;
    let q_1 = out1.tower.top_len.as_ref().ok_or(PrymError::NotMetric)?;
    let four = BigInt::from(4);
    let lhs = gram_of_basis(q_t, &corr.forward.mul(&p1.basis));
    let rhs = gram_of_basis(q_1, &p1.basis).scale_int(&four);
    if lhs != rhs {
        return Err(PrymError::ValidationFailure(
            "S does not double the polarization on the Prym lattice".into(),
        ));
    }
    let lhs = gram_of_basis(q_1, &corr.backward.mul(&p.basis));
    let rhs = gram_of_basis(q_t, &p.basis).scale_int(&four);
    if lhs != rhs {
        return Err(PrymError::ValidationFailure(
            "S^T does not double the polarization on the Prym lattice".into(),
        ));
    }
    Ok(())
}

fn render_antisym_element(t: &Tower, p: &PrymLattice, col: usize) -> String {
    let mut terms = Vec::new();
    for me in 0..t.mid.n_edges() {
        let c = p.antisym.get(me, col);
        if !c.is_zero() {
            terms.push(format!(
                "{:+}*({}+ - {}-)",
                c,
                t.mid.edge_name(me),
                t.mid.edge_name(me)
            ));
        }
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" ")
    }
}

/// Factors S (and S^T) through multiplication by 2. On towers over trees
/// this always succeeds; the returned matrix psi = S/2 is a unimodular
/// isometry of the Gram matrices. On non-tree bases the divisibility can
/// fail, which is reported with the first offending lattice element.
pub fn factor_psi(
    corr: &Correspondence,
    t: &Tower,
    out1: &SplitHalf,
    p: &PrymLattice,
    p1: &PrymLattice,
) -> Result<IntMatrix, PrymError> {
    let r = restrict_to_prym(corr, p, p1)?;
    let two = BigInt::from(2);
    for j in 0..r.s_on_prym.cols {
        if (0..r.s_on_prym.rows).any(|i| !(r.s_on_prym.get(i, j) % &two).is_zero()) {
            return Err(PrymError::NotDivisible {
                side: "s".into(),
                element: render_antisym_element(&out1.tower, p1, j),
            });
        }
    }
    for j in 0..r.st_on_prym.cols {
        if (0..r.st_on_prym.rows).any(|i| !(r.st_on_prym.get(i, j) % &two).is_zero()) {
            return Err(PrymError::NotDivisible {
                side: "s^t".into(),
                element: render_antisym_element(t, p, j),
            });
        }
    }
    let psi = r.s_on_prym.div_exact(&two);
    if !is_unimodular(&psi) {
        return Err(PrymError::NotUnimodular);
    }
    // isometry of the principal polarizations
    let lhs = p.gram.congruent_by(&psi);
    if lhs != p1.gram {
        return Err(PrymError::ValidationFailure(
            "psi is not an isometry of the Gram matrices".into(),
        ));
    }
    Ok(psi)
}

// ---------------------------------------------------------------------------
// end-to-end report

#[derive(Debug, Clone)]
pub struct PsiReport {
    pub gram_input: GramMatrix,
    pub gram_outputs: [GramMatrix; 2],
    pub four_id: [bool; 2],
    pub doubling: [bool; 2],
    /// psi matrices when the base is a tree and the factorization succeeds
    pub psi: [Result<IntMatrix, PrymError>; 2],
}

/// Runs the whole correspondence suite against both outputs of the
/// tetragonal construction.
pub fn prym_isomorphism_check(t: &Tower) -> Result<PsiReport, String> {
    let p = prym_lattice(t).map_err(|e| e.to_string())?;
    let (o1, o2) = crate::ngonal::split(t).map_err(|e| e.to_string())?;
    let mut four_id = [false; 2];
    let mut doubling = [false; 2];
    let mut grams = Vec::new();
    let mut psis = Vec::new();
    for (i, o) in [&o1, &o2].into_iter().enumerate() {
        let p_i = prym_lattice(&o.tower).map_err(|e| e.to_string())?;
        let corr = correspondence(t, o).map_err(|e| e.to_string())?;
        if let Ok(r) = restrict_to_prym(&corr, &p, &p_i) {
            four_id[i] = four_identity(&r);
        }
        doubling[i] = verify_polarization_doubling(&corr, t, o, &p, &p_i).is_ok();
        psis.push(factor_psi(&corr, t, o, &p, &p_i));
        grams.push(p_i.gram);
    }
    let mut it = grams.into_iter();
    let g1 = it.next().unwrap();
    let g2 = it.next().unwrap();
    let mut pit = psis.into_iter();
    Ok(PsiReport {
        gram_input: p.gram,
        gram_outputs: [g1, g2],
        four_id,
        doubling,
        psi: [pit.next().unwrap(), pit.next().unwrap()],
    })
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::{metrize_source, signed_cover, Morphism};
    use crate::symgraph::Vars;
    use std::collections::BTreeSet;

    #[test]
    fn h1_rank_examples() {
        let tree = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        assert_eq!(h1_basis(&tree).unwrap().basis.cols, 0);
        let loop1 = Graph::from_edges(1, &[(0, 0)]);
        let b = h1_basis(&loop1).unwrap();
        assert_eq!(b.basis.cols, 1);
        assert_eq!(*b.basis.get(0, 0), BigInt::one());
        let theta = Graph::from_edges(2, &[(0, 1), (0, 1), (0, 1)]);
        let b = h1_basis(&theta).unwrap();
        assert_eq!(b.basis.cols, 2);
        assert!(boundary_matrix(&theta).mul(&b.basis).is_zero());
        let two = Graph::from_edges(2, &[(0, 0), (1, 1)]);
        assert!(h1_basis(&two).is_err());
    }

    #[test]
    fn integration_pairing_examples() {
        let mut vars = Vars::new();
        let l = vars.declare("l");
        let lengths = vec![LinearForm::var(l), LinearForm::var(l)];
        let u = vec![BigInt::one(), BigInt::zero()];
        let v = vec![BigInt::zero(), BigInt::one()];
        assert_eq!(integration_pairing(&lengths, &u, &u), LinearForm::var(l));
        assert!(integration_pairing(&lengths, &u, &v).is_zero());
    }

    #[test]
    fn trivial_cover_prym_is_jacobian_of_one_sheet() {
        let mut vars = Vars::new();
        let l1 = vars.declare("l1");
        let base = Graph::from_edges(2, &[(0, 1), (0, 1)]);
        let base_len = vec![LinearForm::var(l1), LinearForm::var(l1)];
        let mid = base.clone();
        let f = Morphism::identity(&mid);
        let cover = signed_cover(&mid, &BTreeSet::new());
        let top_len = metrize_source(&cover.map, &cover.total, &base_len);
        let t = Tower {
            base: base.clone(),
            mid,
            top: cover.total,
            f,
            pi: cover.map,
            iota_v: cover.iota_v,
            iota_h: cover.iota_h,
            base_len: Some(base_len.clone()),
            mid_len: Some(base_len),
            top_len: Some(top_len),
            dashed: None,
        };
        t.validate().unwrap();
        let p = prym_lattice(&t).unwrap();
        // trivial double cover: rank equals g(mid) = 1, and the gram is
        // the Jacobian gram of one sheet: the 2-cycle has length l1 + l1
        assert_eq!(p.rank(), 1);
        let two_l1 = LinearForm::var(l1).scale_int(&BigInt::from(2));
        assert_eq!(p.gram.get(0, 0), &two_l1);
    }

    #[test]
    fn twisted_cover_of_two_cycle_has_trivial_prym() {
        // the connected double cover of a 2-cycle is a 4-cycle: both have
        // genus 1, so Ker pi_* on H_1 is trivial
        let mut vars = Vars::new();
        let l1 = vars.declare("l1");
        let l2 = vars.declare("l2");
        let mid = Graph::from_edges(2, &[(0, 1), (0, 1)]);
        let mid_len = vec![LinearForm::var(l1), LinearForm::var(l2)];
        let cover = signed_cover(&mid, &BTreeSet::from([1]));
        let top_len = metrize_source(&cover.map, &cover.total, &mid_len);
        let t = Tower {
            base: mid.clone(),
            mid: mid.clone(),
            top: cover.total,
            f: Morphism::identity(&mid),
            pi: cover.map,
            iota_v: cover.iota_v,
            iota_h: cover.iota_h,
            base_len: Some(mid_len.clone()),
            mid_len: Some(mid_len),
            top_len: Some(top_len),
            dashed: None,
        };
        t.validate().unwrap();
        let p = prym_lattice(&t).unwrap();
        assert_eq!(p.rank(), 0);
    }

    #[test]
    fn theta_cover_prym_gram() {
        // theta graph with one dashed edge: the kernel is spanned by
        // gamma - iota(gamma) for the cycle through the two plain edges,
        // with gram l1 + l2
        let mut vars = Vars::new();
        let l1 = vars.declare("l1");
        let l2 = vars.declare("l2");
        let l3 = vars.declare("l3");
        let mid = Graph::from_edges(2, &[(0, 1), (0, 1), (0, 1)]);
        let mid_len = vec![
            LinearForm::var(l1),
            LinearForm::var(l2),
            LinearForm::var(l3),
        ];
        let cover = signed_cover(&mid, &BTreeSet::from([2]));
        let top_len = metrize_source(&cover.map, &cover.total, &mid_len);
        let t = Tower {
            base: mid.clone(),
            mid: mid.clone(),
            top: cover.total,
            f: Morphism::identity(&mid),
            pi: cover.map,
            iota_v: cover.iota_v,
            iota_h: cover.iota_h,
            base_len: Some(mid_len.clone()),
            mid_len: Some(mid_len),
            top_len: Some(top_len),
            dashed: None,
        };
        t.validate().unwrap();
        let p = prym_lattice(&t).unwrap();
        assert_eq!(p.rank(), 1);
        let expect = LinearForm::var(l1).add(&LinearForm::var(l2));
        let diag = p.gram.get(0, 0);
        // the basis cycle is gamma - iota(gamma) up to sign; the third
        // edge cannot occur since it is the dashed one
        assert_eq!(diag, &expect);
        assert!(p.antisym.get(2, 0).is_zero());
        // flipping the basis cycle leaves the diagonal unchanged
        let flipped = p.antisym.scale(&-BigInt::one());
        let g = integration_pairing(
            t.mid_len.as_ref().unwrap(),
            &flipped.column(0),
            &flipped.column(0),
        );
        assert_eq!(&g, diag);
    }

    #[test]
    fn dilated_cover_is_rejected() {
        // folded path: the middle vertex of the top is iota-fixed
        let mid = Graph::from_edges(2, &[(0, 1)]);
        let top = Graph::from_edges(3, &[(0, 1), (2, 1)]);
        let pi = Morphism {
            vmap: vec![0, 1, 0],
            hmap: vec![0, 1, 0, 1],
            deg_v: vec![1, 2, 1],
            deg_e: vec![1, 1],
        };
        let t = Tower {
            base: mid.clone(),
            mid: mid.clone(),
            top,
            f: Morphism::identity(&mid),
            pi,
            iota_v: vec![2, 1, 0],
            iota_h: vec![2, 3, 0, 1],
            base_len: None,
            mid_len: None,
            top_len: None,
            dashed: None,
        };
        assert_eq!(prym_lattice(&t).unwrap_err(), PrymError::DilatedCover);
    }
}
