use super::Graph;
use crate::error::{Error, Result};

/// Largest pattern graph accepted by [`subgraph_embed`].
pub const MAX_PATTERN_VERTICES: usize = 12;

/// Finds an injective, edge-preserving vertex map from `g` into `h`.
///
/// The copy need not be induced. Pattern vertices are assigned in index order
/// and host vertices are tried in index order, so the first embedding found is
/// reproducible.
pub fn subgraph_embed(g: &Graph, h: &Graph) -> Result<Option<Vec<usize>>> {
    if g.vertex_count() > MAX_PATTERN_VERTICES {
        return Err(Error::TooLarge(format!(
            "pattern graph has {} vertices, the limit is {MAX_PATTERN_VERTICES}",
            g.vertex_count()
        )));
    }
    if g.vertex_count() > h.vertex_count() || g.edge_count() > h.edge_count() {
        return Ok(None);
    }
    let g_adj: Vec<Vec<usize>> = (0..g.vertex_count())
        .map(|v| g.neighbors(v).filter(|&w| w < v).collect())
        .collect();
    let g_deg: Vec<usize> = (0..g.vertex_count()).map(|v| g.degree(v)).collect();
    let h_deg: Vec<usize> = (0..h.vertex_count()).map(|v| h.degree(v)).collect();

    let mut map = Vec::with_capacity(g.vertex_count());
    let mut used = vec![false; h.vertex_count()];
    let found = extend(g, h, &g_adj, &g_deg, &h_deg, &mut map, &mut used);
    Ok(found.then_some(map))
}

fn extend(
    g: &Graph,
    h: &Graph,
    g_back: &[Vec<usize>],
    g_deg: &[usize],
    h_deg: &[usize],
    map: &mut Vec<usize>,
    used: &mut [bool],
) -> bool {
    let v = map.len();
    if v == g.vertex_count() {
        return true;
    }
    for w in 0..h.vertex_count() {
        if used[w] || h_deg[w] < g_deg[v] {
            continue;
        }
        if g_back[v].iter().all(|&u| h.has_edge(map[u], w)) {
            map.push(w);
            used[w] = true;
            if extend(g, h, g_back, g_deg, h_deg, map, used) {
                return true;
            }
            used[w] = false;
            map.pop();
        }
    }
    false
}
