use super::{OracleError, RankOracle};
use crate::pathmatch::{PathMatchingInstance, VertexKind};

/// Whether the instance has a basic path-matching, by exhaustive search.
///
/// Tries every pair of bases `D1 ⊆ T1`, `D2 ⊆ T2`, every system of
/// disjoint `D1`–`D2` paths through `S`, and every perfect matching of the
/// inner vertices left over.
pub fn oracle_bpm_exists(inst: &PathMatchingInstance) -> Result<bool, OracleError> {
    let (t, s, r) = (inst.t(), inst.s(), inst.r());
    if s > 8 || t > 3 {
        return Err(OracleError::TooLarge(format!("t = {t}, s = {s}; at most t = 3, s = 8 supported")));
    }
    let n = inst.vertex_count();
    let mut adj = vec![0u32; n];
    for &(u, v) in inst.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let mut m1 = RankOracle::new(inst.q1().clone());
    let mut m2 = RankOracle::from_rows(inst.q2());
    let bases1: Vec<Vec<usize>> = subsets(t, r).into_iter().filter(|b| m1.is_independent(b)).collect();
    let bases2: Vec<Vec<usize>> = subsets(t, r).into_iter().filter(|b| m2.is_independent(b)).collect();
    let inner: u32 = (0..s).fold(0, |m, i| m | 1 << inst.s_vertex(i));
    for d1 in &bases1 {
        for d2 in &bases2 {
            let starts: Vec<usize> = d1.iter().map(|&i| inst.t1_vertex(i)).collect();
            let ends: u32 = d2.iter().fold(0, |m, &i| m | 1 << inst.t2_vertex(i));
            let search = Search { adj: &adj, inst, starts: &starts };
            if search.paths(0, inner, ends) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

struct Search<'a> {
    adj: &'a [u32],
    inst: &'a PathMatchingInstance,
    starts: &'a [usize],
}

impl Search<'_> {
    /// Routes paths from `starts[idx..]`; `free` holds unused inner
    /// vertices, `ends` unused path ends.
    fn paths(&self, idx: usize, free: u32, ends: u32) -> bool {
        if idx == self.starts.len() {
            return ends == 0 && perfect(free, self.adj);
        }
        self.extend(self.starts[idx], idx, free, ends)
    }

    fn extend(&self, cur: usize, idx: usize, free: u32, ends: u32) -> bool {
        let mut nb = self.adj[cur] & (free | ends);
        while nb != 0 {
            let w = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            let found = match self.inst.kind(w) {
                VertexKind::T2(_) => self.paths(idx + 1, free, ends & !(1 << w)),
                VertexKind::S(_) => self.extend(w, idx, free & !(1 << w), ends),
                VertexKind::T1(_) => false,
            };
            if found {
                return true;
            }
        }
        false
    }
}

fn perfect(free: u32, adj: &[u32]) -> bool {
    if free == 0 {
        return true;
    }
    let v = free.trailing_zeros() as usize;
    let rest = free & !(1 << v);
    let mut nb = adj[v] & rest;
    while nb != 0 {
        let u = nb.trailing_zeros();
        nb &= nb - 1;
        if perfect(rest & !(1 << u), adj) {
            return true;
        }
    }
    false
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|&i| m & (1 << i) != 0).collect())
        .collect()
}
