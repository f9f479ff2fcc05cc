//! Induced sub(di)graph search by backtracking.

use crate::graph::Adjacency;

/// An injective map `pattern vertex -> host vertex` under which the pattern
/// is exactly the induced sub(di)graph on the image, if one exists.
///
/// Both arguments must be of the same kind (both directed or both not);
/// undirected inputs report each edge as two arcs so the same test works.
pub fn contains_induced<G, P>(host: &G, pattern: &P) -> Option<Vec<usize>>
where
    G: Adjacency + ?Sized,
    P: Adjacency + ?Sized,
{
    let k = pattern.order();
    if k > host.order() {
        return None;
    }
    let mut map = Vec::with_capacity(k);
    let mut used = vec![false; host.order()];
    if extend(host, pattern, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

fn extend<G, P>(host: &G, pattern: &P, map: &mut Vec<usize>, used: &mut [bool]) -> bool
where
    G: Adjacency + ?Sized,
    P: Adjacency + ?Sized,
{
    let i = map.len();
    if i == pattern.order() {
        return true;
    }
    let out_deg = pattern.out_neighbors(i).len();
    for v in 0..host.order() {
        if used[v] || host.out_neighbors(v).len() < out_deg {
            continue;
        }
        let consistent = map.iter().enumerate().all(|(j, &w)| {
            pattern.has_arc(i, j) == host.has_arc(v, w)
                && pattern.has_arc(j, i) == host.has_arc(w, v)
        });
        if !consistent {
            continue;
        }
        map.push(v);
        used[v] = true;
        if extend(host, pattern, map, used) {
            return true;
        }
        used[v] = false;
        map.pop();
    }
    false
}

/// Index of the first family member found as an induced sub(di)graph.
pub fn first_induced<'a, G, P>(
    host: &G,
    family: &'a [(&'a str, P)],
) -> Option<(&'a str, Vec<usize>)>
where
    G: Adjacency + ?Sized,
    P: Adjacency,
{
    family
        .iter()
        .find_map(|(name, p)| contains_induced(host, p).map(|m| (*name, m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{bull, complete, forbidden_family, lambda_digraph, path};

    #[test]
    fn triangle_has_no_induced_p3() {
        assert!(contains_induced(&complete(3), &path(3)).is_none());
    }

    #[test]
    fn bull_has_induced_p3() {
        let bull = bull();
        let m = contains_induced(&bull, &path(3)).unwrap();
        assert!(bull.has_edge(m[0], m[1]) && bull.has_edge(m[1], m[2]));
        assert!(!bull.has_edge(m[0], m[2]));
    }

    #[test]
    fn lambda_212_avoids_f31() {
        let fam = forbidden_family();
        assert!(contains_induced(&lambda_digraph(2, 1, 2), &fam[0].1).is_none());
        assert!(first_induced(&lambda_digraph(2, 1, 2), &fam).is_none());
    }
}
