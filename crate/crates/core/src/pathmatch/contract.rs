use std::collections::BTreeSet;

use super::{norm, PathMatchError, PathMatchingInstance, VertexKind};
use crate::linalg::Matrix;

/// How a component of a partial path-matching looks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Piece {
    /// A complete `T1`–`T2` path.
    Through,
    /// A path from `T1` ending at the given `S` vertex.
    FromT1(usize),
    /// A path from `T2` ending at the given `S` vertex.
    FromT2(usize),
    /// A single `S`–`S` matching edge.
    Matched,
}

struct Shape {
    pieces: Vec<Piece>,
    covered: Vec<bool>,
    d1: Vec<usize>,
    d2: Vec<usize>,
}

/// Splits `m` into components and checks each is a legal piece of a
/// path-matching. Does not look at the matroids.
fn analyse(inst: &PathMatchingInstance, m: &[(usize, usize)]) -> Result<Shape, String> {
    let n = inst.vertex_count();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut seen = BTreeSet::new();
    for &(u, v) in m {
        if u >= n || v >= n || !inst.has_edge(u, v) {
            return Err(format!("({u}, {v}) is not an edge of the instance"));
        }
        if !seen.insert(norm(u, v)) {
            return Err(format!("edge ({u}, {v}) repeated"));
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    for (v, list) in adj.iter().enumerate() {
        let cap = if matches!(inst.kind(v), VertexKind::S(_)) { 2 } else { 1 };
        if list.len() > cap {
            return Err(format!("vertex {v} has degree {}", list.len()));
        }
    }
    let mut visited = vec![false; n];
    let mut pieces = Vec::new();
    let mut d1 = Vec::new();
    let mut d2 = Vec::new();
    for start in 0..n {
        if visited[start] || adj[start].len() != 1 {
            continue;
        }
        let mut path = vec![start];
        visited[start] = true;
        let mut prev = usize::MAX;
        let mut cur = start;
        loop {
            let next = adj[cur].iter().copied().find(|&w| w != prev);
            match next {
                Some(w) if !visited[w] => {
                    visited[w] = true;
                    path.push(w);
                    prev = cur;
                    cur = w;
                }
                _ => break,
            }
        }
        let (a, b) = (path[0], *path.last().unwrap());
        let piece = match (inst.kind(a), inst.kind(b)) {
            (VertexKind::T1(_), VertexKind::T2(_)) | (VertexKind::T2(_), VertexKind::T1(_)) => {
                Piece::Through
            }
            (VertexKind::T1(_), VertexKind::S(_)) => Piece::FromT1(b),
            (VertexKind::S(_), VertexKind::T1(_)) => Piece::FromT1(a),
            (VertexKind::T2(_), VertexKind::S(_)) => Piece::FromT2(b),
            (VertexKind::S(_), VertexKind::T2(_)) => Piece::FromT2(a),
            (VertexKind::S(_), VertexKind::S(_)) if path.len() == 2 => Piece::Matched,
            (VertexKind::S(_), VertexKind::S(_)) => {
                return Err(format!("path {a}..{b} has no terminal endpoint"));
            }
            _ => return Err(format!("path {a}..{b} joins two terminals of one side")),
        };
        for &v in &[a, b] {
            match inst.kind(v) {
                VertexKind::T1(i) => d1.push(i),
                VertexKind::T2(i) => d2.push(i),
                VertexKind::S(_) => {}
            }
        }
        pieces.push(piece);
    }
    if (0..n).any(|v| !adj[v].is_empty() && !visited[v]) {
        return Err("edge set contains a cycle".into());
    }
    d1.sort_unstable();
    d2.sort_unstable();
    let covered = (0..n).map(|v| !adj[v].is_empty()).collect();
    Ok(Shape { pieces, covered, d1, d2 })
}

fn independent(q: &Matrix, cols: &[usize], by_rows: bool) -> bool {
    let sub = if by_rows { q.select_rows(cols) } else { q.select_cols(cols) };
    sub.rank() == cols.len()
}

/// Deterministic check that `m` is a basic path-matching of `inst`:
/// vertex-disjoint `T1`–`T2` paths through `S` plus `S`–`S` matching edges,
/// every `S` vertex covered, and the covered terminals forming bases of both
/// matroids.
pub fn verify_bpm(inst: &PathMatchingInstance, m: &[(usize, usize)]) -> Result<(), String> {
    let shape = analyse(inst, m)?;
    if let Some(p) = shape.pieces.iter().find(|p| !matches!(p, Piece::Through | Piece::Matched)) {
        return Err(format!("unfinished path {p:?}"));
    }
    for k in 0..inst.s() {
        if !shape.covered[inst.s_vertex(k)] {
            return Err(format!("vertex {} of S is not covered", inst.s_vertex(k)));
        }
    }
    let r = inst.r();
    if shape.d1.len() != r || !independent(inst.q1(), &shape.d1, false) {
        return Err("T1 endpoints are not a basis".into());
    }
    if shape.d2.len() != r || !independent(inst.q2(), &shape.d2, true) {
        return Err("T2 endpoints are not a basis".into());
    }
    Ok(())
}

/// The instance left after committing a partial path-matching `M`.
///
/// Unused terminals keep their side; the `S`-ends of paths started from `T1`
/// (`T2`) become new terminals of that side, represented as free elements
/// added to the contracted matroid.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub instance: PathMatchingInstance,
    /// `T1`-vertices covered by `M` (indices within `T1`).
    pub d1: Vec<usize>,
    pub d2: Vec<usize>,
    /// `S`-vertices ending a path from `T1` (global numbers).
    pub c1: Vec<usize>,
    pub c2: Vec<usize>,
    /// Number of complete `T1`–`T2` paths in `M`.
    pub p: usize,
    /// Original global number of every vertex of the contracted instance.
    pub original: Vec<usize>,
}

impl Contraction {
    /// Maps edges of the contracted instance back to the original numbering.
    pub fn lift(&self, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
        edges.iter().map(|&(u, v)| norm(self.original[u], self.original[v])).collect()
    }
}

/// Contracts `inst` by the partial path-matching `m`.
pub fn contract(
    inst: &PathMatchingInstance,
    m: &[(usize, usize)],
) -> Result<Contraction, PathMatchError> {
    let shape = analyse(inst, m).map_err(PathMatchError::IllegalPartial)?;
    if !independent(inst.q1(), &shape.d1, false) {
        return Err(PathMatchError::IllegalPartial("covered T1 set is dependent".into()));
    }
    if !independent(inst.q2(), &shape.d2, true) {
        return Err(PathMatchError::IllegalPartial("covered T2 set is dependent".into()));
    }
    let f = inst.field();
    let t = inst.t();
    let mut c1 = Vec::new();
    let mut c2 = Vec::new();
    let mut p = 0;
    for piece in &shape.pieces {
        match *piece {
            Piece::Through => p += 1,
            Piece::FromT1(v) => c1.push(v),
            Piece::FromT2(v) => c2.push(v),
            Piece::Matched => {}
        }
    }
    c1.sort_unstable();
    c2.sort_unstable();
    let free1: Vec<usize> = (0..t).filter(|i| !shape.d1.contains(i)).collect();
    let free2: Vec<usize> = (0..t).filter(|i| !shape.d2.contains(i)).collect();
    let s_rest: Vec<usize> =
        (0..inst.s()).map(|k| inst.s_vertex(k)).filter(|&v| !shape.covered[v]).collect();

    let mut original: Vec<usize> = free1.iter().map(|&i| inst.t1_vertex(i)).collect();
    original.extend(&c1);
    original.extend(free2.iter().map(|&i| inst.t2_vertex(i)));
    original.extend(&c2);
    original.extend(&s_rest);
    let t_new = free1.len() + c1.len();
    debug_assert_eq!(t_new, free2.len() + c2.len());

    // Contract M1 by d1: project the remaining columns onto the quotient by
    // span(Q1[*, d1]); then append the new free elements.
    let proj = inst.q1().select_cols(&shape.d1).transpose().kernel_basis().transpose();
    let q1_rest = proj.mul(&inst.q1().select_cols(&free1))?;
    let r_new = q1_rest.rows() + c1.len();
    let mut q1 = Matrix::zeros(f, r_new, t_new);
    q1.paste(0, 0, &q1_rest);
    q1.paste(q1_rest.rows(), free1.len(), &Matrix::identity(f, c1.len()));

    let kern = inst.q2().select_rows(&shape.d2).kernel_basis();
    let q2_rest = inst.q2().select_rows(&free2).mul(&kern)?;
    let mut q2 = Matrix::zeros(f, t_new, q2_rest.cols() + c2.len());
    q2.paste(0, 0, &q2_rest);
    q2.paste(free2.len(), q2_rest.cols(), &Matrix::identity(f, c2.len()));

    let mut new_id = vec![usize::MAX; inst.vertex_count()];
    for (i, &v) in original.iter().enumerate() {
        new_id[v] = i;
    }
    let side = |i: usize| -> u8 {
        if i < t_new {
            1
        } else if i < 2 * t_new {
            2
        } else {
            0
        }
    };
    let mut edges = Vec::new();
    for &(u, v) in inst.edges() {
        let (a, b) = (new_id[u], new_id[v]);
        if a == usize::MAX || b == usize::MAX {
            continue;
        }
        // Both in S', or terminals of different sides, or a terminal and S'.
        if side(a) == 0 || side(b) == 0 || side(a) != side(b) {
            edges.push((a, b));
        }
    }
    let instance = PathMatchingInstance::new(q1, q2, s_rest.len(), edges)?;
    Ok(Contraction { instance, d1: shape.d1, d2: shape.d2, c1, c2, p, original })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::graph::Graph;

    fn path_instance() -> PathMatchingInstance {
        let one = Matrix::identity(PrimeField::default(), 1);
        PathMatchingInstance::new(one.clone(), one, 2, [(0, 2), (2, 3), (3, 1)]).unwrap()
    }

    #[test]
    fn empty_contraction_is_identity() {
        let inst = path_instance();
        let c = contract(&inst, &[]).unwrap();
        assert_eq!(c.instance.edges(), inst.edges());
        assert_eq!(c.instance.q1(), inst.q1());
        assert_eq!(c.original, vec![0, 1, 2, 3]);
    }

    #[test]
    fn matching_edge_removes_both_vertices() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]);
        let inst = PathMatchingInstance::matching(&g, PrimeField::default());
        let c = contract(&inst, &[(0, 1)]).unwrap();
        assert_eq!(c.instance.s(), 2);
        assert_eq!(c.original, vec![2, 3]);
        assert_eq!(c.instance.edges(), &[(0, 1)]);
    }

    #[test]
    fn path_start_becomes_terminal() {
        let inst = path_instance();
        let c = contract(&inst, &[(0, 2)]).unwrap();
        assert_eq!(c.c1, vec![2]);
        assert_eq!(c.instance.t(), 1);
        assert_eq!(c.instance.s(), 1);
        // T1' = {s1}, T2' = {t2}, S' = {s2}.
        assert_eq!(c.original, vec![2, 1, 3]);
        assert_eq!(c.instance.q1(), &Matrix::identity(PrimeField::default(), 1));
        assert_eq!(c.instance.edges(), &[(0, 2), (1, 2)]);
        assert_eq!(verify_bpm(&c.instance, &[(0, 2), (2, 1)]), Ok(()));
    }

    #[test]
    fn complete_path_leaves_empty_instance() {
        let inst = path_instance();
        let m = [(0, 2), (2, 3), (1, 3)];
        assert_eq!(verify_bpm(&inst, &m), Ok(()));
        let c = contract(&inst, &m).unwrap();
        assert_eq!(c.p, 1);
        assert_eq!(c.instance.vertex_count(), 0);
        assert_eq!(c.instance.r(), 0);
    }

    #[test]
    fn illegal_partials() {
        let inst = path_instance();
        assert!(matches!(contract(&inst, &[(0, 1)]), Err(PathMatchError::IllegalPartial(_))));
        let g = Graph::new(3, [(0, 1), (1, 2)]);
        let m = PathMatchingInstance::matching(&g, PrimeField::default());
        // An S-only path of length two has no terminal endpoint.
        assert!(contract(&m, &[(0, 1), (1, 2)]).is_err());
    }

    #[test]
    fn verification_rejects_non_bases() {
        let f = PrimeField::default();
        // M1 on T1 = {a0, a1} is U(1,2) with a0 a loop.
        let q1 = Matrix::from_rows(f, &[vec![0, 1]]);
        let q2 = Matrix::from_rows(f, &[vec![1], vec![1]]);
        let inst = PathMatchingInstance::new(q1, q2, 0, [(0, 2), (1, 3)]).unwrap();
        assert!(verify_bpm(&inst, &[(0, 2)]).is_err());
        assert_eq!(verify_bpm(&inst, &[(1, 3)]), Ok(()));
        assert!(verify_bpm(&inst, &[(0, 2), (1, 3)]).is_err());
    }
}
