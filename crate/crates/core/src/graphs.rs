//! Shared base categories and builders for graph-shaped copresheaves.

use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use rand::Rng;

use crate::copresheaf::{Copresheaf, FinSet};
use crate::error::{Error, Result};
use crate::fincat::{builtin, FinCategory};
use crate::findiag::{identity_func, Func};
use crate::structures::Signature;

/// The multidigraph base `V`, `E`, `s, t : E -> V`, shared.
pub fn digraph_base() -> Arc<FinCategory> {
    static BASE: OnceLock<Arc<FinCategory>> = OnceLock::new();
    BASE.get_or_init(|| Arc::new(builtin::digraph())).clone()
}

/// The multigraph base with edge reversal `r`, shared.
pub fn graph_base() -> Arc<FinCategory> {
    static BASE: OnceLock<Arc<FinCategory>> = OnceLock::new();
    BASE.get_or_init(|| Arc::new(builtin::graph())).clone()
}

/// Resolves `builtin:digraph`, `builtin:graph` and
/// `builtin:signature(E/2, R/3)`.
pub fn builtin_base(name: &str) -> Result<Arc<FinCategory>> {
    let name = name.trim();
    match name {
        "builtin:digraph" => return Ok(digraph_base()),
        "builtin:graph" => return Ok(graph_base()),
        _ => {}
    }
    if let Some(sig) = name
        .strip_prefix("builtin:signature(")
        .and_then(|s| s.strip_suffix(')'))
    {
        return Ok(Arc::new(Signature::parse_list(sig)?.category()));
    }
    Err(Error::Parse(format!("unknown builtin base `{name}`")))
}

/// Multidigraph on vertices `0..n` with the given edges in order, named
/// `e0, e1, …`.
pub fn digraph(n: usize, edges: &[(usize, usize)]) -> Copresheaf {
    let names = (0..edges.len()).map(|i| format!("e{i}"));
    digraph_named(FinSet::range(n), FinSet::named(names), edges)
}

pub fn digraph_named(vertices: FinSet, edge_names: FinSet, edges: &[(usize, usize)]) -> Copresheaf {
    assert_eq!(edge_names.len(), edges.len());
    let s: Func = edges.iter().map(|e| e.0).collect();
    let t: Func = edges.iter().map(|e| e.1).collect();
    let nv = vertices.len();
    Copresheaf::new(
        digraph_base(),
        vec![vertices, edge_names],
        vec![identity_func(nv), identity_func(edges.len()), s, t],
    )
    .expect("edges reference existing vertices")
}

/// Edge list of a copresheaf over the digraph base.
pub fn edges_of(g: &Copresheaf) -> Vec<(usize, usize)> {
    let (s, t) = (g.function(2), g.function(3));
    (0..g.set(1).len()).map(|e| (s[e], t[e])).collect()
}

/// `K_k` as a symmetric loopless digraph, edges `(i, j)` in lexicographic
/// order and named `ij`.
pub fn complete(k: usize) -> Copresheaf {
    let edges: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let names = edges.iter().map(|(i, j)| format!("{i}{j}"));
    digraph_named(FinSet::range(k), FinSet::named(names), &edges)
}

/// Symmetric `n`-cycle: both orientations of each edge `{i, i+1}`.
pub fn cycle(n: usize) -> Copresheaf {
    let mut edges = Vec::new();
    for i in 0..n {
        edges.push((i, (i + 1) % n));
        edges.push(((i + 1) % n, i));
    }
    digraph(n, &edges)
}

/// Directed path `0 -> 1 -> … -> n-1`.
pub fn path(n: usize) -> Copresheaf {
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    digraph(n, &edges)
}

/// One vertex with one loop.
pub fn loop_vertex() -> Copresheaf {
    digraph(1, &[(0, 0)])
}

/// Multigraph over the graph base: each undirected edge `{u, v}` becomes two
/// edge elements `(u,v)`, `(v,u)` exchanged by `r`; a loop becomes one
/// element fixed by `r`.
pub fn undirected(n: usize, edges: &[(usize, usize)]) -> Copresheaf {
    let base = graph_base();
    let mut darts: Vec<(usize, usize)> = Vec::new();
    let mut rev: Vec<usize> = Vec::new();
    for &(u, v) in edges {
        let i = darts.len();
        if u == v {
            darts.push((u, v));
            rev.push(i);
        } else {
            darts.push((u, v));
            darts.push((v, u));
            rev.push(i + 1);
            rev.push(i);
        }
    }
    let names = darts.iter().enumerate().map(|(i, _)| format!("d{i}"));
    let sets = vec![FinSet::range(n), FinSet::named(names)];
    let id = |m: &str| base.morphism_id(m).expect("graph base morphism");
    let given = vec![
        (id("s"), darts.iter().map(|d| d.0).collect::<Func>()),
        (id("r"), Func::from(rev)),
    ];
    Copresheaf::from_generators(base, sets, given).expect("valid multigraph")
}

/// Symmetric `n`-cycle over the graph base.
pub fn undirected_cycle(n: usize) -> Copresheaf {
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    undirected(n, &edges)
}

/// `K_k` over the graph base.
pub fn undirected_complete(k: usize) -> Copresheaf {
    let edges: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
        .collect();
    undirected(k, &edges)
}

/// A random multidigraph with `n` vertices and `m` edges.
pub fn random_digraph(rng: &mut impl Rng, n: usize, m: usize, loops: bool) -> Copresheaf {
    let mut edges = Vec::with_capacity(m);
    if n > 1 || (n == 1 && loops) {
        while edges.len() < m {
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if loops || u != v {
                edges.push((u, v));
            }
        }
    }
    digraph(n, &edges)
}

/// Lexicographically least sorted edge list over all vertex relabellings.
pub fn canonical_edges(n: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<(usize, usize)>> = None;
    loop {
        let mut relabelled: Vec<(usize, usize)> =
            edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        relabelled.sort_unstable();
        if best.as_ref().is_none_or(|b| relabelled < *b) {
            best = Some(relabelled);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap_or_default()
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Every multidigraph with at most `max_vertices` vertices and at most
/// `max_edges` edges (loops allowed), one per isomorphism class, ordered by
/// vertex count, edge count, then canonical edge list.
pub fn all_multidigraphs(max_vertices: usize, max_edges: usize) -> Vec<Copresheaf> {
    let mut out = Vec::new();
    for n in 0..=max_vertices {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect();
        let mut seen: BTreeSet<(usize, Vec<(usize, usize)>)> = BTreeSet::new();
        let mut stack: Vec<(Vec<(usize, usize)>, usize)> = vec![(Vec::new(), 0)];
        while let Some((edges, from)) = stack.pop() {
            seen.insert((edges.len(), canonical_edges(n, &edges)));
            if edges.len() == max_edges {
                continue;
            }
            for (k, &p) in pairs.iter().enumerate().skip(from) {
                let mut next = edges.clone();
                next.push(p);
                stack.push((next, k));
            }
        }
        out.extend(seen.into_iter().map(|(_, edges)| digraph(n, &edges)));
    }
    out
}
