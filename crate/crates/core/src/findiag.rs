//! Diagrams of finite sets: limits by backtracking search, colimits by
//! union-find.

use std::borrow::Cow;
use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, VecDeque};
use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fincat::{FinCategory, MorId, ObjId, Report};
use crate::par::Execution;

/// A function between finite sets as a table of element indices.
pub type Func = Arc<[usize]>;

pub fn identity_func(n: usize) -> Func {
    (0..n).collect()
}

/// Composite table `g ∘ f`.
pub fn compose_func(g: &[usize], f: &[usize]) -> Func {
    f.iter().map(|&x| g[x]).collect()
}

#[derive(Clone)]
enum Names {
    Index,
    List(Arc<[String]>),
    Lazy(Arc<dyn Fn(usize) -> String + Send + Sync>),
}

/// A finite set `{0, …, len-1}` whose elements carry display names.
///
/// Names are either `0, 1, …`, an explicit list, or computed on demand; the
/// last form keeps large derived sets (powers, quotients) cheap.
#[derive(Clone)]
pub struct FinSet {
    len: usize,
    names: Names,
}

impl FinSet {
    /// `{0, …, n-1}` named by the numerals.
    pub fn range(n: usize) -> Self {
        Self { len: n, names: Names::Index }
    }

    pub fn named<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        let names: Arc<[String]> = names.into_iter().map(Into::into).collect();
        Self {
            len: names.len(),
            names: Names::List(names),
        }
    }

    pub fn lazy(len: usize, name: impl Fn(usize) -> String + Send + Sync + 'static) -> Self {
        Self {
            len,
            names: Names::Lazy(Arc::new(name)),
        }
    }

    pub fn empty() -> Self {
        Self::range(0)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn name(&self, i: usize) -> Cow<'_, str> {
        assert!(i < self.len, "element {i} out of range {}", self.len);
        match &self.names {
            Names::Index => Cow::Owned(i.to_string()),
            Names::List(v) => Cow::Borrowed(&v[i]),
            Names::Lazy(f) => Cow::Owned(f(i)),
        }
    }

    pub fn names(&self) -> Vec<String> {
        (0..self.len).map(|i| self.name(i).into_owned()).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        match &self.names {
            Names::Index => name.parse().ok().filter(|&i| i < self.len),
            Names::List(v) => v.iter().position(|n| n == name),
            Names::Lazy(f) => (0..self.len).find(|&i| f(i) == name),
        }
    }

    /// Replaces lazy names by an explicit list.
    pub fn materialize(&self) -> Self {
        match self.names {
            Names::Lazy(_) => Self::named(self.names()),
            _ => self.clone(),
        }
    }
}

impl PartialEq for FinSet {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && (0..self.len).all(|i| self.name(i) == other.name(i))
    }
}

impl Eq for FinSet {}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len > 32 {
            return write!(f, "FinSet({} elements)", self.len);
        }
        f.debug_set().entries(self.names()).finish()
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for i in 0..self.len {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.name(i))?;
        }
        write!(f, "}}")
    }
}

/// A functor from a finite category into finite sets.
#[derive(Clone, Debug)]
pub struct FinDiagram {
    pub shape: Arc<FinCategory>,
    pub sets: Vec<FinSet>,
    pub functions: Vec<Func>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DiagramViolation {
    WrongCount { detail: String },
    WrongLength { morphism: String },
    OutOfRange { morphism: String, element: String },
    Identity { object: String, element: String },
    Composition { g: String, f: String, element: String },
}

impl fmt::Display for DiagramViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::WrongCount { detail } => write!(out, "{detail}"),
            Self::WrongLength { morphism } => {
                write!(out, "table of {morphism} is not total on its source set")
            }
            Self::OutOfRange { morphism, element } => {
                write!(out, "{morphism} sends {element} outside its target set")
            }
            Self::Identity { object, element } => {
                write!(out, "identity of {object} moves {element}")
            }
            Self::Composition { g, f, element } => {
                write!(out, "{g} . {f} disagrees with composing the tables at {element}")
            }
        }
    }
}

pub type DiagramReport = Report<DiagramViolation>;

/// Limit search mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Decide,
    Enumerate,
}

/// Result of [`FinDiagram::limit`]. In decide mode `solutions` holds the first
/// solution found, if any.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Limit {
    pub nonempty: bool,
    pub solutions: Vec<Vec<usize>>,
}

impl FinDiagram {
    pub fn new(shape: Arc<FinCategory>, sets: Vec<FinSet>, functions: Vec<Func>) -> Result<Self> {
        let d = Self { shape, sets, functions };
        let report = d.validate();
        if report.is_ok() {
            Ok(d)
        } else {
            Err(Error::InvalidDiagram(report.to_string()))
        }
    }

    pub fn set(&self, o: ObjId) -> &FinSet {
        &self.sets[o]
    }

    pub fn function(&self, m: MorId) -> &[usize] {
        &self.functions[m]
    }

    /// Checks table shapes, identities and composition.
    pub fn validate(&self) -> DiagramReport {
        let shape = &self.shape;
        let mut violations = Vec::new();
        if self.sets.len() != shape.num_objects() || self.functions.len() != shape.num_morphisms() {
            violations.push(DiagramViolation::WrongCount {
                detail: "one set per object and one table per morphism expected".into(),
            });
            return Report { violations };
        }
        let mut well_typed = vec![true; shape.num_morphisms()];
        for (m, mor) in shape.morphisms().iter().enumerate() {
            let (src, tgt) = (&self.sets[mor.source], &self.sets[mor.target]);
            let table = &self.functions[m];
            if table.len() != src.len() {
                well_typed[m] = false;
                violations.push(DiagramViolation::WrongLength {
                    morphism: mor.name.clone(),
                });
                continue;
            }
            if let Some(x) = table.iter().position(|&y| y >= tgt.len()) {
                well_typed[m] = false;
                violations.push(DiagramViolation::OutOfRange {
                    morphism: mor.name.clone(),
                    element: src.name(x).into_owned(),
                });
            }
        }
        for o in 0..shape.num_objects() {
            let id = shape.identity(o);
            if !well_typed[id] {
                continue;
            }
            if let Some(x) = self.functions[id].iter().enumerate().position(|(x, &y)| x != y) {
                violations.push(DiagramViolation::Identity {
                    object: shape.object_name(o).to_string(),
                    element: self.sets[o].name(x).into_owned(),
                });
            }
        }
        for f in 0..shape.num_morphisms() {
            for &g in shape.outgoing(shape.target(f)) {
                let Some(gf) = shape.compose(g, f) else { continue };
                if !(well_typed[f] && well_typed[g] && well_typed[gf]) {
                    continue;
                }
                let (tf, tg, tgf) = (&self.functions[f], &self.functions[g], &self.functions[gf]);
                if let Some(x) = (0..tf.len()).find(|&x| tg[tf[x]] != tgf[x]) {
                    violations.push(DiagramViolation::Composition {
                        g: shape.morphism(g).name.clone(),
                        f: shape.morphism(f).name.clone(),
                        element: self.sets[shape.source(f)].name(x).into_owned(),
                    });
                }
            }
        }
        Report { violations }
    }

    /// One variable per object, one functional constraint per non-identity
    /// morphism.
    pub fn network(&self) -> Network {
        let constraints = self
            .shape
            .non_identities()
            .map(|m| Constraint {
                source: self.shape.source(m),
                target: self.shape.target(m),
                table: self.functions[m].clone(),
            })
            .collect();
        Network::new(self.sets.iter().map(FinSet::len).collect(), constraints)
    }

    pub fn limit(&self, mode: Mode) -> Limit {
        let net = self.network();
        match mode {
            Mode::Decide => {
                let first = net.first(Execution::default());
                Limit {
                    nonempty: first.is_some(),
                    solutions: first.into_iter().collect(),
                }
            }
            Mode::Enumerate => {
                let solutions = net.enumerate(Execution::default());
                Limit {
                    nonempty: !solutions.is_empty(),
                    solutions,
                }
            }
        }
    }

    pub fn limit_count(&self) -> u64 {
        self.network().count(Execution::default())
    }

    pub fn limit_exists(&self) -> bool {
        self.network().exists(Execution::default())
    }

    /// Disjoint sum of all sets modulo `x ~ D(f)(x)`.
    pub fn colimit(&self) -> QuotientSet {
        let sizes: Vec<usize> = self.sets.iter().map(FinSet::len).collect();
        let shape = &self.shape;
        let arrows = shape
            .non_identities()
            .map(|m| (shape.source(m), shape.target(m), &self.functions[m][..]));
        let (injections, representatives) = quotient(&sizes, arrows);
        let sets = self.sets.clone();
        let objects: Vec<String> = shape.objects().to_vec();
        let reps = Arc::new(representatives.clone());
        let carrier = FinSet::lazy(representatives.len(), move |c| {
            let (o, x) = reps[c];
            format!("{}:{}", objects[o], sets[o].name(x))
        });
        QuotientSet {
            carrier,
            injections,
            representatives,
        }
    }
}

/// A colimit of finite sets with its cocone.
#[derive(Clone, Debug)]
pub struct QuotientSet {
    pub carrier: FinSet,
    /// Per object of the shape, the map into the carrier.
    pub injections: Vec<Func>,
    /// Least `(object, element)` of each class, in carrier order.
    pub representatives: Vec<(ObjId, usize)>,
}

/// Union-find quotient of a disjoint sum. Arrows are `(source, target, table)`.
/// Classes are numbered in order of their least `(object, element)` pair.
pub fn quotient<'a>(
    sizes: &[usize],
    arrows: impl IntoIterator<Item = (ObjId, ObjId, &'a [usize])>,
) -> (Vec<Func>, Vec<(ObjId, usize)>) {
    let mut offset = Vec::with_capacity(sizes.len() + 1);
    offset.push(0);
    for &s in sizes {
        offset.push(offset.last().unwrap() + s);
    }
    let total = *offset.last().unwrap();
    let mut uf = UnionFind::new(total);
    for (i, j, table) in arrows {
        for (x, &y) in table.iter().enumerate() {
            uf.union(offset[i] + x, offset[j] + y);
        }
    }
    let mut class = vec![usize::MAX; total];
    let mut reps = Vec::new();
    let mut object = 0;
    for e in 0..total {
        while offset[object + 1] <= e {
            object += 1;
        }
        let root = uf.find(e);
        if class[root] == usize::MAX {
            class[root] = reps.len();
            reps.push((object, e - offset[object]));
        }
        class[e] = class[root];
    }
    let injections = (0..sizes.len())
        .map(|o| class[offset[o]..offset[o + 1]].iter().copied().collect())
        .collect();
    (injections, reps)
}

/// Disjoint-set forest whose roots are the least members of their classes.
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra < rb {
            self.parent[rb] = ra;
        } else if rb < ra {
            self.parent[ra] = rb;
        }
    }
}

/// `table[x]` of `source` must equal the value of `target`.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub source: usize,
    pub target: usize,
    pub table: Func,
}

/// A conjunction of functional constraints over variables with finite
/// domains `{0, …, size-1}`; the solution set is the limit of a diagram.
#[derive(Clone, Debug)]
pub struct Network {
    sizes: Vec<usize>,
    constraints: Vec<Constraint>,
    adjacency: Vec<Vec<u32>>,
    /// Values excluded before search, sorted.
    removed: Vec<(usize, usize)>,
    offset: Vec<usize>,
    /// Variables in static order: ascending domain size, then index.
    by_rank: Vec<u32>,
    rank: Vec<u32>,
}

impl Network {
    /// A constraint from a variable to itself, or one parallel to an earlier
    /// constraint, is turned into value removals on its source: `a` survives
    /// only where the tables agree (resp. `table[a] = a`). Only the first of
    /// each parallel family takes part in propagation.
    pub fn new(sizes: Vec<usize>, constraints: Vec<Constraint>) -> Self {
        let mut adjacency = vec![Vec::new(); sizes.len()];
        let mut removed = BTreeSet::new();
        for (c, con) in constraints.iter().enumerate() {
            assert_eq!(con.table.len(), sizes[con.source], "constraint table length");
            if con.source == con.target {
                removed.extend((0..sizes[con.source]).filter(|&a| con.table[a] != a).map(|a| (con.source, a)));
                continue;
            }
            let parallel = adjacency[con.source].iter().map(|&d| &constraints[d as usize]).find(|d| {
                d.source == con.source && d.target == con.target
            });
            match parallel {
                Some(other) => removed.extend(
                    (0..sizes[con.source])
                        .filter(|&a| con.table[a] != other.table[a])
                        .map(|a| (con.source, a)),
                ),
                None => {
                    adjacency[con.source].push(c as u32);
                    adjacency[con.target].push(c as u32);
                }
            }
        }
        let removed = removed.into_iter().collect();
        let mut offset = Vec::with_capacity(sizes.len() + 1);
        offset.push(0);
        for &s in &sizes {
            offset.push(offset.last().unwrap() + s.div_ceil(64));
        }
        let mut by_rank: Vec<u32> = (0..sizes.len() as u32).collect();
        by_rank.sort_by_key(|&v| (sizes[v as usize], v));
        let mut rank = vec![0; sizes.len()];
        for (r, &v) in by_rank.iter().enumerate() {
            rank[v as usize] = r as u32;
        }
        Self {
            sizes,
            constraints,
            adjacency,
            removed,
            offset,
            by_rank,
            rank,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.sizes.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn is_solution(&self, assignment: &[usize]) -> bool {
        assignment.len() == self.sizes.len()
            && assignment.iter().zip(&self.sizes).all(|(&a, &s)| a < s)
            && self
                .constraints
                .iter()
                .all(|c| c.table[assignment[c.source]] == assignment[c.target])
    }

    /// Calls `emit` on each solution in search order until it breaks.
    pub fn for_each(&self, mut emit: impl FnMut(&[usize]) -> ControlFlow<()>) {
        if let Some(mut state) = State::root(self) {
            let _ = state.search(&mut emit);
        }
    }

    /// Root-level branches, each already propagated. `None` for a root that is
    /// inconsistent.
    fn branches(&self) -> Option<Vec<State<'_>>> {
        let mut root = State::root(self)?;
        let Some(v) = root.select() else {
            return Some(vec![root]);
        };
        let values = root.values(v);
        Some(
            values
                .into_iter()
                .filter_map(|a| {
                    let mut s = root.clone();
                    s.assign(v, a).then_some(s)
                })
                .collect(),
        )
    }

    pub fn first(&self, exec: Execution) -> Option<Vec<usize>> {
        if !exec.is_parallel() {
            let mut found = None;
            self.for_each(|sol| {
                found = Some(sol.to_vec());
                ControlFlow::Break(())
            });
            return found;
        }
        exec.find_map_first(self.branches()?, |mut s| {
            let mut found = None;
            let _ = s.search(&mut |sol: &[usize]| {
                found = Some(sol.to_vec());
                ControlFlow::Break(())
            });
            found
        })
    }

    pub fn exists(&self, exec: Execution) -> bool {
        self.first(exec).is_some()
    }

    pub fn count(&self, exec: Execution) -> u64 {
        let Some(branches) = self.branches() else { return 0 };
        exec.map(branches, |mut s| {
            let mut n = 0u64;
            let _ = s.search(&mut |_: &[usize]| {
                n += 1;
                ControlFlow::Continue(())
            });
            n
        })
        .into_iter()
        .sum()
    }

    /// All solutions, sorted lexicographically.
    pub fn enumerate(&self, exec: Execution) -> Vec<Vec<usize>> {
        let Some(branches) = self.branches() else { return Vec::new() };
        let mut all: Vec<Vec<usize>> = exec
            .map(branches, |mut s| {
                let mut out = Vec::new();
                let _ = s.search(&mut |sol: &[usize]| {
                    out.push(sol.to_vec());
                    ControlFlow::Continue(())
                });
                out
            })
            .into_iter()
            .flatten()
            .collect();
        all.sort_unstable();
        all
    }
}

/// Search state: bitset domains with an undo trail.
#[derive(Clone)]
struct State<'a> {
    net: &'a Network,
    words: Vec<u64>,
    size: Vec<u32>,
    trail: Vec<(u32, u32)>,
    heap: BinaryHeap<Reverse<(u32, u32)>>,
    queue: VecDeque<u32>,
    queued: Vec<bool>,
    touched: Vec<bool>,
    image: Vec<u64>,
}

impl<'a> State<'a> {
    fn root(net: &'a Network) -> Option<Self> {
        let n = net.sizes.len();
        let mut words = vec![0u64; *net.offset.last().unwrap()];
        for v in 0..n {
            let s = net.sizes[v];
            let base = net.offset[v];
            for k in 0..s / 64 {
                words[base + k] = u64::MAX;
            }
            if s % 64 != 0 {
                words[base + s / 64] = (1u64 << (s % 64)) - 1;
            }
        }
        let mut size: Vec<u32> = net.sizes.iter().map(|&s| s as u32).collect();
        for &(v, a) in &net.removed {
            words[net.offset[v] + a / 64] &= !(1u64 << (a % 64));
            size[v] -= 1;
        }
        let max_words = (0..n).map(|v| net.offset[v + 1] - net.offset[v]).max().unwrap_or(0);
        let mut state = Self {
            net,
            words,
            size,
            trail: Vec::new(),
            heap: BinaryHeap::new(),
            queue: (0..n as u32).collect(),
            queued: vec![true; n],
            touched: vec![false; n],
            image: vec![0; max_words],
        };
        if state.size.iter().any(|&s| s == 0) {
            return None;
        }
        if !state.propagate() {
            return None;
        }
        for v in 0..n {
            state.push_entry(v);
        }
        // The root is never undone.
        state.trail.clear();
        Some(state)
    }

    fn push_entry(&mut self, v: usize) {
        if self.size[v] > 1 {
            self.heap.push(Reverse((self.size[v], self.net.rank[v])));
            if self.heap.len() > 4 * self.size.len() + 64 {
                self.rebuild_heap();
            }
        }
    }

    /// Drops stale entries: one entry per undecided variable.
    fn rebuild_heap(&mut self) {
        let entries: Vec<_> = (0..self.size.len())
            .filter(|&v| self.size[v] > 1)
            .map(|v| Reverse((self.size[v], self.net.rank[v])))
            .collect();
        self.heap = BinaryHeap::from(entries);
    }

    fn contains(&self, v: usize, a: usize) -> bool {
        self.words[self.net.offset[v] + a / 64] >> (a % 64) & 1 == 1
    }

    fn values(&self, v: usize) -> Vec<usize> {
        let base = self.net.offset[v];
        let mut out = Vec::with_capacity(self.size[v] as usize);
        for k in 0..self.net.offset[v + 1] - base {
            let mut w = self.words[base + k];
            while w != 0 {
                out.push(k * 64 + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }

    fn next_value(&self, v: usize, from: usize) -> Option<usize> {
        let base = self.net.offset[v];
        let nwords = self.net.offset[v + 1] - base;
        let mut k = from / 64;
        if k >= nwords {
            return None;
        }
        let mut w = self.words[base + k] & (u64::MAX << (from % 64));
        loop {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
            k += 1;
            if k >= nwords {
                return None;
            }
            w = self.words[base + k];
        }
    }

    /// Clears `kill` bits of word `k` of `v`.
    fn remove_bits(&mut self, v: usize, k: usize, kill: u64) {
        if kill == 0 {
            return;
        }
        self.words[self.net.offset[v] + k] &= !kill;
        self.size[v] -= kill.count_ones();
        let mut w = kill;
        while w != 0 {
            self.trail.push((v as u32, (k * 64) as u32 + w.trailing_zeros()));
            w &= w - 1;
        }
    }

    fn enqueue(&mut self, v: usize) {
        if !self.queued[v] {
            self.queued[v] = true;
            self.queue.push_back(v as u32);
        }
    }

    /// Arc consistency for one functional constraint. False on a wipeout.
    fn revise(&mut self, c: usize) -> bool {
        let net = self.net;
        let con = &net.constraints[c];
        let (i, j) = (con.source, con.target);
        let table = &con.table;
        let (bi, bj) = (net.offset[i], net.offset[j]);
        let (wi, wj) = (net.offset[i + 1] - bi, net.offset[j + 1] - bj);

        let before_i = self.size[i];
        for k in 0..wi {
            let mut w = self.words[bi + k];
            let mut kill = 0u64;
            while w != 0 {
                let b = w.trailing_zeros();
                if !self.contains(j, table[k * 64 + b as usize]) {
                    kill |= 1 << b;
                }
                w &= w - 1;
            }
            self.remove_bits(i, k, kill);
        }
        if self.size[i] == 0 {
            return false;
        }

        self.image[..wj].iter_mut().for_each(|w| *w = 0);
        for k in 0..wi {
            let mut w = self.words[bi + k];
            while w != 0 {
                let y = table[k * 64 + w.trailing_zeros() as usize];
                self.image[y / 64] |= 1 << (y % 64);
                w &= w - 1;
            }
        }
        let before_j = self.size[j];
        for k in 0..wj {
            let kill = self.words[bj + k] & !self.image[k];
            self.remove_bits(j, k, kill);
        }
        if self.size[j] == 0 {
            return false;
        }
        if self.size[i] != before_i {
            self.enqueue(i);
            self.push_entry(i);
        }
        if self.size[j] != before_j {
            self.enqueue(j);
            self.push_entry(j);
        }
        true
    }

    fn propagate(&mut self) -> bool {
        while let Some(v) = self.queue.pop_front() {
            let v = v as usize;
            self.queued[v] = false;
            for idx in 0..self.net.adjacency[v].len() {
                let c = self.net.adjacency[v][idx] as usize;
                if !self.revise(c) {
                    for u in self.queue.drain(..) {
                        self.queued[u as usize] = false;
                    }
                    return false;
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        let mut touched = Vec::new();
        while self.trail.len() > mark {
            let (v, a) = self.trail.pop().unwrap();
            let (v, a) = (v as usize, a as usize);
            self.words[self.net.offset[v] + a / 64] |= 1 << (a % 64);
            self.size[v] += 1;
            if !self.touched[v] {
                self.touched[v] = true;
                touched.push(v);
            }
        }
        for v in touched {
            self.touched[v] = false;
            self.push_entry(v);
        }
    }

    /// Restricts `v` to `{a}` and propagates. False on failure.
    fn assign(&mut self, v: usize, a: usize) -> bool {
        let base = self.net.offset[v];
        for k in 0..self.net.offset[v + 1] - base {
            let keep = if a / 64 == k { 1u64 << (a % 64) } else { 0 };
            let kill = self.words[base + k] & !keep;
            self.remove_bits(v, k, kill);
        }
        self.enqueue(v);
        self.propagate()
    }

    /// Undecided variable with the smallest current domain, ties broken by
    /// static rank.
    fn select(&mut self) -> Option<usize> {
        while let Some(Reverse((s, r))) = self.heap.pop() {
            let v = self.net.by_rank[r as usize] as usize;
            if self.size[v] == s && s > 1 {
                return Some(v);
            }
        }
        None
    }

    fn solution(&self) -> Vec<usize> {
        (0..self.size.len())
            .map(|v| self.next_value(v, 0).expect("nonempty domain"))
            .collect()
    }

    fn search(&mut self, emit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>) -> ControlFlow<()> {
        struct Frame {
            var: usize,
            mark: usize,
            next: usize,
        }
        let mut stack: Vec<Frame> = Vec::new();
        let mut descend = true;
        loop {
            if descend {
                descend = false;
                match self.select() {
                    None => emit(&self.solution())?,
                    Some(v) => stack.push(Frame {
                        var: v,
                        mark: self.trail.len(),
                        next: 0,
                    }),
                }
            }
            let Some(top) = stack.last_mut() else {
                return ControlFlow::Continue(());
            };
            let (var, mark, from) = (top.var, top.mark, top.next);
            self.undo(mark);
            match self.next_value(var, from) {
                None => {
                    stack.pop();
                }
                Some(a) => {
                    stack.last_mut().unwrap().next = a + 1;
                    descend = self.assign(var, a);
                }
            }
        }
    }
}
