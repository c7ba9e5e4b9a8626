//! Brute-force reference implementations, written without the library's
//! solver so they can check it.
#![allow(dead_code)]

use std::collections::HashSet;

use catcsp::graphs::edges_of;
use catcsp::{Copresheaf, FinDiagram};

/// Calls `f` on every map `[n] -> [k]`, as a slice of images.
pub fn for_each_map(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if n > 0 && k == 0 {
        return;
    }
    let mut m = vec![0; n];
    loop {
        f(&m);
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            m[i] += 1;
            if m[i] < k {
                break;
            }
            m[i] = 0;
            i += 1;
        }
    }
}

/// Homomorphisms between multidigraphs: for each vertex map, the product over
/// edges of the number of parallel target edges.
pub fn digraph_hom_count(x: &Copresheaf, a: &Copresheaf) -> u64 {
    let (xn, an) = (x.set(0).len(), a.set(0).len());
    let (xe, ae) = (edges_of(x), edges_of(a));
    let mut mult = vec![vec![0u64; an]; an];
    for &(u, v) in &ae {
        mult[u][v] += 1;
    }
    let mut total = 0;
    for_each_map(xn, an, |h| {
        total += xe.iter().map(|&(u, v)| mult[h[u]][h[v]]).product::<u64>();
    });
    total
}

/// Proper 3-colourings by exhaustion; a loop is never properly coloured.
pub fn three_colourable(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut found = false;
    for_each_map(n, 3, |c| {
        if !found && edges.iter().all(|&(u, v)| c[u] != c[v]) {
            found = true;
        }
    });
    found
}

/// Families of elements, one per object, compatible with every arrow.
pub fn limit_count(d: &FinDiagram) -> u64 {
    let n = d.shape.num_objects();
    let sizes: Vec<usize> = d.sets.iter().map(|s| s.len()).collect();
    let arrows: Vec<_> = d.shape.non_identities().collect();
    let mut count = 0;
    let mut pick = vec![0; n];
    fn rec(
        i: usize,
        pick: &mut Vec<usize>,
        sizes: &[usize],
        d: &FinDiagram,
        arrows: &[usize],
        count: &mut u64,
    ) {
        if i == sizes.len() {
            let ok = arrows
                .iter()
                .all(|&m| d.function(m)[pick[d.shape.source(m)]] == pick[d.shape.target(m)]);
            if ok {
                *count += 1;
            }
            return;
        }
        for v in 0..sizes[i] {
            pick[i] = v;
            rec(i + 1, pick, sizes, d, arrows, count);
        }
    }
    rec(0, &mut pick, &sizes, d, &arrows, &mut count);
    count
}

/// A relational structure as plain data.
#[derive(Clone, Debug)]
pub struct Rel {
    pub size: usize,
    pub relations: Vec<Vec<Vec<usize>>>,
}

impl Rel {
    pub fn from_structure(s: &catcsp::structures::RelationalStructure) -> Self {
        Rel {
            size: s.domain.len(),
            relations: s.relations.clone(),
        }
    }

    /// The `n`-th power, tuples indexed with the first coordinate most
    /// significant.
    pub fn power(&self, n: usize) -> Rel {
        let size = self.size.pow(n as u32);
        let encode = |t: &[usize]| t.iter().fold(0, |acc, &x| acc * self.size + x);
        let relations = self
            .relations
            .iter()
            .map(|r| {
                let mut out = Vec::new();
                let mut choice = vec![0; n];
                loop {
                    let arity = r.first().map_or(0, Vec::len);
                    let tuple: Vec<usize> = (0..arity)
                        .map(|j| {
                            let coords: Vec<usize> = choice.iter().map(|&c| r[c][j]).collect();
                            encode(&coords)
                        })
                        .collect();
                    if !r.is_empty() {
                        out.push(tuple);
                    }
                    let mut i = 0;
                    loop {
                        if i == n || r.is_empty() {
                            return out;
                        }
                        choice[i] += 1;
                        if choice[i] < r.len() {
                            break;
                        }
                        choice[i] = 0;
                        i += 1;
                    }
                }
            })
            .collect();
        Rel { size, relations }
    }
}

/// Relation-preserving maps by backtracking; each tuple is checked once its
/// last argument is assigned.
pub fn rel_hom_count(x: &Rel, a: &Rel) -> u64 {
    let targets: Vec<HashSet<Vec<usize>>> = a.relations.iter().map(|r| r.iter().cloned().collect()).collect();
    let mut due: Vec<Vec<(usize, &Vec<usize>)>> = vec![Vec::new(); x.size];
    for (ri, r) in x.relations.iter().enumerate() {
        for t in r {
            match t.iter().max() {
                Some(&m) => due[m].push((ri, t)),
                None => {
                    if !targets[ri].contains(&Vec::new()) {
                        return 0;
                    }
                }
            }
        }
    }
    fn rec(
        i: usize,
        h: &mut Vec<usize>,
        x: &Rel,
        a: &Rel,
        due: &[Vec<(usize, &Vec<usize>)>],
        targets: &[HashSet<Vec<usize>>],
    ) -> u64 {
        if i == x.size {
            return 1;
        }
        let mut total = 0;
        for v in 0..a.size {
            h[i] = v;
            let ok = due[i]
                .iter()
                .all(|(ri, t)| targets[*ri].contains(&t.iter().map(|&e| h[e]).collect::<Vec<_>>()));
            if ok {
                total += rec(i + 1, h, x, a, due, targets);
            }
        }
        total
    }
    let mut h = vec![0; x.size];
    rec(0, &mut h, x, a, &due, &targets)
}
