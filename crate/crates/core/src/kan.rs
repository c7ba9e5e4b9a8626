//! Kan extensions along copresheaves evaluated on finite sets, and gadget
//! functors with their Yoneda extensions and nerves.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::copresheaf::{
    checked_pow, hom_all, hom_count, power, same_base, tuple_at, tuple_index, yoneda, Copresheaf,
    FinSet, HomProblem, NatTransformation,
};
use crate::error::{Error, Result};
use crate::fincat::{split_spaced, strip_comment, FinCategory, MorId, ObjId, Report};
use crate::findiag::{compose_func, identity_func, quotient, Func};
use crate::graphs::{digraph_base, graph_base, undirected};
use crate::grothendieck::class_name;
use crate::par::Execution;

/// A functor `Fin → Fin`, evaluated on demand.
pub trait Minion {
    /// `M(N)`.
    fn eval(&self, n: &FinSet) -> Result<FinSet>;
    /// `M(π): M(N) → M(M)` for `π: N → M` given as a table.
    fn action(&self, n: &FinSet, m: &FinSet, pi: &[usize]) -> Result<Func>;
}

/// `M ∘ A`: at `s` the set `M(A(s))`, along `f` the map `M(A(f))`.
pub fn compose_minion(m: &dyn Minion, a: &Copresheaf) -> Result<Copresheaf> {
    let base = a.base();
    let sets = a.sets().iter().map(|s| m.eval(s)).collect::<Result<Vec<_>>>()?;
    let functions = (0..base.num_morphisms())
        .map(|f| m.action(a.set(base.source(f)), a.set(base.target(f)), a.function(f)))
        .collect::<Result<Vec<_>>>()?;
    Copresheaf::new(base.clone(), sets, functions)
}

/// The representable minion `hom([k], −)`: `N ↦ N^k`, acting by
/// postcomposition. `k = 1` is the identity functor.
pub struct PowerMinion {
    pub k: usize,
    pub cap: usize,
}

impl Minion for PowerMinion {
    fn eval(&self, n: &FinSet) -> Result<FinSet> {
        let len = checked_pow(n.len(), self.k, self.cap, "power minion")?;
        let (n, k) = (n.clone(), self.k);
        if k == 1 {
            return Ok(n);
        }
        Ok(FinSet::lazy(len, move |i| {
            let t = tuple_at(i, n.len(), k);
            let parts: Vec<String> = t.iter().map(|&x| n.name(x).into_owned()).collect();
            format!("({})", parts.join(","))
        }))
    }

    fn action(&self, n: &FinSet, m: &FinSet, pi: &[usize]) -> Result<Func> {
        let len = checked_pow(n.len(), self.k, self.cap, "power minion")?;
        Ok((0..len)
            .map(|i| tuple_index(tuple_at(i, n.len(), self.k).into_iter().map(|x| pi[x]), m.len()))
            .collect())
    }
}

/// One recorded action `π: N → M` of a [`MinionTable`].
#[derive(Clone, Debug)]
pub struct TableAction {
    pub from: usize,
    pub to: usize,
    pub map: Vec<usize>,
    pub table: Func,
}

/// A finite window of `Ran_A B = Pol(A, B)`: the homomorphisms `A^N → B` for
/// each recorded arity `N`, and the action of every map between recorded
/// arities.
#[derive(Clone, Debug)]
pub struct MinionTable {
    pub a: Copresheaf,
    pub b: Copresheaf,
    pub arities: Vec<FinSet>,
    /// Per arity, the polymorphisms as component tables of `A^N → B`,
    /// lexicographically ordered.
    pub elements: Vec<Vec<Vec<Func>>>,
    pub actions: Vec<TableAction>,
    lookup: Vec<HashMap<Vec<Func>, usize>>,
}

/// Every function `[n] → [m]` as a table, lexicographically.
pub fn all_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    let count = (0..n).try_fold(1usize, |acc, _| acc.checked_mul(m)).unwrap_or(usize::MAX);
    (0..count).map(|i| tuple_at(i, m, n)).collect()
}

/// Applies `f ↦ f ∘ A^π` to the components of `f: A^N → B`.
fn minor(a: &Copresheaf, f: &[Func], n: usize, m: usize, pi: &[usize]) -> Vec<Func> {
    (0..a.base().num_objects())
        .map(|s| {
            let k = a.set(s).len();
            let len = k.pow(m as u32);
            (0..len)
                .map(|i| {
                    let t = tuple_at(i, k, m);
                    f[s][tuple_index((0..n).map(|x| t[pi[x]]), k)]
                })
                .collect()
        })
        .collect()
}

impl MinionTable {
    pub fn arity_index(&self, n: &FinSet) -> Option<usize> {
        self.arities
            .iter()
            .position(|a| a == n)
            .or_else(|| self.arities.iter().position(|a| a.len() == n.len()))
    }

    /// Index of a polymorphism at arity `idx`.
    pub fn index_of(&self, idx: usize, components: &[Func]) -> Option<usize> {
        self.lookup[idx].get(components).copied()
    }

    pub fn action_table(&self, from: usize, to: usize, map: &[usize]) -> Option<&Func> {
        self.actions
            .iter()
            .find(|a| a.from == from && a.to == to && a.map == map)
            .map(|a| &a.table)
    }

    /// True when every recorded composite `ρ ∘ π` acts as the composite of
    /// the actions, and identities act trivially.
    pub fn check_functorial(&self) -> bool {
        for act in &self.actions {
            let n = self.arities[act.from].len();
            if act.from == act.to && act.map == (0..n).collect::<Vec<_>>() {
                let id: Vec<usize> = (0..self.elements[act.from].len()).collect();
                if act.table[..] != id[..] {
                    return false;
                }
            }
            for next in self.actions.iter().filter(|b| b.from == act.to) {
                let composite: Vec<usize> = act.map.iter().map(|&x| next.map[x]).collect();
                let Some(direct) = self.action_table(act.from, next.to, &composite) else {
                    continue;
                };
                if compose_func(&next.table, &act.table) != *direct {
                    return false;
                }
            }
        }
        true
    }
}

impl Minion for MinionTable {
    fn eval(&self, n: &FinSet) -> Result<FinSet> {
        let idx = self
            .arity_index(n)
            .ok_or_else(|| Error::MissingArity(format!("arity of size {}", n.len())))?;
        Ok(FinSet::range(self.elements[idx].len()))
    }

    fn action(&self, n: &FinSet, m: &FinSet, pi: &[usize]) -> Result<Func> {
        let missing = |s: &FinSet| Error::MissingArity(format!("arity of size {}", s.len()));
        let (i, j) = (
            self.arity_index(n).ok_or_else(|| missing(n))?,
            self.arity_index(m).ok_or_else(|| missing(m))?,
        );
        if let Some(t) = self.action_table(i, j, pi) {
            return Ok(t.clone());
        }
        self.elements[i]
            .iter()
            .map(|f| {
                let g = minor(&self.a, f, n.len(), m.len(), pi);
                self.index_of(j, &g)
                    .ok_or_else(|| Error::MissingArity("minor outside the table".into()))
            })
            .collect()
    }
}

/// `Ran_A B` at the given arities: `hom(A^N, B)` for each `N`, plus the action
/// of every map between the arities.
pub fn ran_eval(a: &Copresheaf, b: &Copresheaf, arities: &[FinSet], cap: usize) -> Result<MinionTable> {
    if !same_base(a.base(), b.base()) {
        return Err(Error::BaseMismatch("ran_eval".into()));
    }
    let mut elements = Vec::with_capacity(arities.len());
    let mut lookup = Vec::with_capacity(arities.len());
    for n in arities {
        let an = power(a, n, cap)?;
        let homs = HomProblem::new(&an, b)?.all_components(Execution::default());
        lookup.push(homs.iter().cloned().enumerate().map(|(i, h)| (h, i)).collect());
        elements.push(homs);
    }
    let mut table = MinionTable {
        a: a.clone(),
        b: b.clone(),
        arities: arities.to_vec(),
        elements,
        actions: Vec::new(),
        lookup,
    };
    let mut actions = Vec::new();
    for (i, n) in arities.iter().enumerate() {
        for (j, m) in arities.iter().enumerate() {
            for map in all_maps(n.len(), m.len()) {
                let t = table.action(n, m, &map)?;
                actions.push(TableAction {
                    from: i,
                    to: j,
                    map,
                    table: t,
                });
            }
        }
    }
    table.actions = actions;
    Ok(table)
}

/// Quotient data of `Lan_A X` at a set of size `k`.
#[derive(Debug)]
struct LanLevel {
    class_of: Vec<Func>,
    representatives: Vec<(usize, usize)>,
}

/// `Lan_A X` as a functor `Fin → Fin`: at `N`, the colimit over the elements
/// `(s, x)` of `X` of the sets `N^{A(s)}`, where `f: (s, x) → (t, y)`
/// identifies `g` in copy `(t, y)` with `g ∘ A(f)` in copy `(s, x)`.
/// Classes are named as those of [`crate::grothendieck::GlMinion`].
pub struct LanMinion {
    a: Copresheaf,
    /// Copies `(s, x)` in base-object-then-element order.
    copies: Vec<(ObjId, usize)>,
    /// `(copy of (t, X(f)x), copy of (s, x), f)` per non-identity `f`.
    arrows: Vec<(usize, usize, MorId)>,
    names: Vec<String>,
    cap: usize,
    cache: Mutex<HashMap<usize, Arc<LanLevel>>>,
}

impl LanMinion {
    pub fn new(a: &Copresheaf, x: &Copresheaf, cap: usize) -> Result<Self> {
        if !same_base(a.base(), x.base()) {
            return Err(Error::BaseMismatch("left Kan extension".into()));
        }
        let base = a.base();
        let mut copies = Vec::new();
        let mut copy_of = vec![Vec::new(); base.num_objects()];
        for s in 0..base.num_objects() {
            for e in 0..x.set(s).len() {
                copy_of[s].push(copies.len());
                copies.push((s, e));
            }
        }
        let mut arrows = Vec::new();
        for f in base.non_identities() {
            let (s, t) = (base.source(f), base.target(f));
            for e in 0..x.set(s).len() {
                arrows.push((copy_of[t][x.function(f)[e]], copy_of[s][e], f));
            }
        }
        let names = copies
            .iter()
            .map(|&(s, e)| format!("{}:{}", base.object_name(s), x.set(s).name(e)))
            .collect();
        Ok(Self {
            a: a.clone(),
            copies,
            arrows,
            names,
            cap,
            cache: Mutex::new(HashMap::new()),
        })
    }

    fn level(&self, k: usize) -> Result<Arc<LanLevel>> {
        if let Some(l) = self.cache.lock().unwrap().get(&k) {
            return Ok(l.clone());
        }
        let (a, base) = (&self.a, self.a.base());
        let sizes: Vec<usize> = self
            .copies
            .iter()
            .map(|&(s, _)| checked_pow(k, a.set(s).len(), self.cap, "left Kan extension"))
            .collect::<Result<_>>()?;
        let mut pulls: HashMap<MorId, Func> = HashMap::new();
        for f in base.non_identities() {
            let (ws, wt) = (a.set(base.source(f)).len(), a.set(base.target(f)).len());
            let af = a.function(f);
            let pull = (0..checked_pow(k, wt, self.cap, "left Kan extension")?)
                .map(|g| {
                    let g = tuple_at(g, k, wt);
                    tuple_index((0..ws).map(|i| g[af[i]]), k)
                })
                .collect();
            pulls.insert(f, pull);
        }
        let (class_of, representatives) = quotient(
            &sizes,
            self.arrows.iter().map(|&(i, j, f)| (i, j, &pulls[&f][..])),
        );
        let level = Arc::new(LanLevel {
            class_of,
            representatives,
        });
        self.cache.lock().unwrap().insert(k, level.clone());
        Ok(level)
    }
}

impl Minion for LanMinion {
    fn eval(&self, n: &FinSet) -> Result<FinSet> {
        let k = n.len();
        let level = self.level(k)?;
        let widths: Vec<usize> = self.copies.iter().map(|&(s, _)| self.a.set(s).len()).collect();
        let names = self.names.clone();
        let n = n.clone();
        Ok(FinSet::lazy(level.representatives.len(), move |c| {
            let (i, g) = level.representatives[c];
            let g = tuple_at(g, k, widths[i]);
            class_name(&names[i], g.iter().map(|&y| n.name(y).into_owned()))
        }))
    }

    fn action(&self, n: &FinSet, m: &FinSet, pi: &[usize]) -> Result<Func> {
        let (from, to) = (self.level(n.len())?, self.level(m.len())?);
        let (kn, km) = (n.len(), m.len());
        Ok(from
            .representatives
            .iter()
            .map(|&(i, g)| {
                let width = self.a.set(self.copies[i].0).len();
                let g = tuple_at(g, kn, width);
                to.class_of[i][tuple_index(g.iter().map(|&y| pi[y]), km)]
            })
            .collect())
    }
}

/// `Lan_A X` at `N`; see [`LanMinion`].
pub fn lan_eval(a: &Copresheaf, x: &Copresheaf, n: &FinSet, cap: usize) -> Result<FinSet> {
    LanMinion::new(a, x, cap)?.eval(n)
}

/// A contravariant assignment `G: S^op → [T, Fin]`: a copresheaf over `T`
/// for each object of `S` and, for each `f: s → s'`, a natural
/// transformation `G(f): G(s') → G(s)`.
#[derive(Clone, Debug)]
pub struct GadgetFunctor {
    pub source: Arc<FinCategory>,
    pub target: Arc<FinCategory>,
    pub gadgets: Vec<Copresheaf>,
    /// Per morphism of `S`, the components of `G(f)` per object of `T`.
    pub transforms: Vec<Vec<Func>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GadgetViolation {
    Base { object: String },
    NotNatural { morphism: String, detail: String },
    Identity { object: String },
    Composition { g: String, f: String },
}

impl fmt::Display for GadgetViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Base { object } => write!(out, "gadget of {object} is over the wrong base"),
            Self::NotNatural { morphism, detail } => {
                write!(out, "transformation of {morphism} is not natural: {detail}")
            }
            Self::Identity { object } => write!(out, "G(id_{object}) is not the identity"),
            Self::Composition { g, f } => write!(out, "G({g} . {f}) != G({f}) . G({g})"),
        }
    }
}

impl GadgetFunctor {
    /// Validated construction. `given` supplies `G(f)` for non-identity
    /// morphisms; identities are filled in and missing composites derived.
    pub fn new(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        gadgets: Vec<Copresheaf>,
        given: impl IntoIterator<Item = (MorId, Vec<Func>)>,
    ) -> Result<Self> {
        let mut transforms: Vec<Option<Vec<Func>>> = vec![None; source.num_morphisms()];
        for o in 0..source.num_objects() {
            transforms[source.identity(o)] =
                Some(gadgets[o].sets().iter().map(|s| identity_func(s.len())).collect());
        }
        for (m, t) in given {
            transforms[m] = Some(t);
        }
        loop {
            let mut progress = false;
            for f in 0..source.num_morphisms() {
                let Some(tf) = transforms[f].clone() else { continue };
                for &g in source.outgoing(source.target(f)) {
                    let gf = source.compose(g, f).expect("total");
                    if transforms[gf].is_some() {
                        continue;
                    }
                    if let Some(tg) = &transforms[g] {
                        transforms[gf] = Some(tf.iter().zip(tg).map(|(a, b)| compose_func(a, b)).collect());
                        progress = true;
                    }
                }
            }
            if !progress {
                break;
            }
        }
        let mut full = Vec::with_capacity(transforms.len());
        for (m, t) in transforms.into_iter().enumerate() {
            full.push(t.ok_or_else(|| {
                Error::InvalidFunctor(format!("no transformation for {}", source.morphism(m).name))
            })?);
        }
        let g = Self {
            source,
            target,
            gadgets,
            transforms: full,
        };
        let report = g.validate();
        if !report.is_ok() {
            return Err(Error::InvalidFunctor(report.to_string()));
        }
        Ok(g)
    }

    pub fn transformation(&self, f: MorId) -> NatTransformation {
        let (s, s2) = (self.source.source(f), self.source.target(f));
        NatTransformation {
            source: self.gadgets[s2].clone(),
            target: self.gadgets[s].clone(),
            components: self.transforms[f].clone(),
        }
    }

    pub fn validate(&self) -> Report<GadgetViolation> {
        let (src, tgt) = (&self.source, &self.target);
        let mut violations = Vec::new();
        for (o, g) in self.gadgets.iter().enumerate() {
            if !same_base(g.base(), tgt) {
                violations.push(GadgetViolation::Base {
                    object: src.object_name(o).into(),
                });
            }
        }
        if !violations.is_empty() {
            return Report { violations };
        }
        for f in 0..src.num_morphisms() {
            let report = self.transformation(f).check_naturality();
            if !report.is_ok() {
                violations.push(GadgetViolation::NotNatural {
                    morphism: src.morphism(f).name.clone(),
                    detail: report.to_string(),
                });
            }
        }
        if !violations.is_empty() {
            return Report { violations };
        }
        for o in 0..src.num_objects() {
            let id = &self.transforms[src.identity(o)];
            if id.iter().any(|c| c.iter().enumerate().any(|(x, &y)| x != y)) {
                violations.push(GadgetViolation::Identity {
                    object: src.object_name(o).into(),
                });
            }
        }
        for f in 0..src.num_morphisms() {
            for &g in src.outgoing(src.target(f)) {
                let gf = src.compose(g, f).expect("total");
                let expected: Vec<Func> = self.transforms[f]
                    .iter()
                    .zip(&self.transforms[g])
                    .map(|(a, b)| compose_func(a, b))
                    .collect();
                if expected != self.transforms[gf] {
                    violations.push(GadgetViolation::Composition {
                        g: src.morphism(g).name.clone(),
                        f: src.morphism(f).name.clone(),
                    });
                }
            }
        }
        Report { violations }
    }

    /// The Yoneda embedding `s ↦ hom(s, −)` as a gadget from `S` to itself.
    pub fn yoneda(base: &Arc<FinCategory>) -> Self {
        let gadgets: Vec<Copresheaf> = (0..base.num_objects()).map(|s| yoneda(base, s)).collect();
        let transforms = (0..base.num_morphisms())
            .map(|f| {
                // G(f): hom(s', −) → hom(s, −), h ↦ h ∘ f.
                let (s, s2) = (base.source(f), base.target(f));
                (0..base.num_objects())
                    .map(|t| {
                        let (from, to) = (base.hom(s2, t), base.hom(s, t));
                        from.iter()
                            .map(|&h| {
                                let hf = base.compose(h, f).expect("composable");
                                to.iter().position(|&m| m == hf).expect("in hom set")
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let g = Self {
            source: base.clone(),
            target: base.clone(),
            gadgets,
            transforms,
        };
        debug_assert!(g.validate().is_ok());
        g
    }

    /// From multidigraphs to multigraphs: a vertex becomes a vertex, an edge a
    /// path `x – z1 – z2 – y` with `s` at `x` and `t` at `y`.
    pub fn subdivision() -> Self {
        let (d, u) = (digraph_base(), graph_base());
        let vertex = undirected(1, &[]);
        // Vertices x, y, z1, z2 = 0, 1, 2, 3.
        let path = undirected(4, &[(0, 2), (2, 3), (3, 1)]);
        let path = Copresheaf::from_parts(
            u.clone(),
            vec![FinSet::named(["x", "y", "z1", "z2"]), path.set(1).clone()],
            path.functions().to_vec(),
        );
        let vertex = Copresheaf::from_parts(
            u.clone(),
            vec![FinSet::named(["*"]), FinSet::empty()],
            vertex.functions().to_vec(),
        );
        let empty = Func::from(Vec::new());
        let s = d.morphism_id("s").expect("s");
        let t = d.morphism_id("t").expect("t");
        Self::new(
            d,
            u,
            vec![vertex, path],
            vec![
                (s, vec![Func::from(vec![0]), empty.clone()]),
                (t, vec![Func::from(vec![1]), empty]),
            ],
        )
        .expect("subdivision gadget is functorial")
    }

    /// Parses a gadget description. `load` reads a referenced copresheaf
    /// file, `resolve` turns base references into categories.
    ///
    /// ```text
    /// source builtin:digraph
    /// target builtin:graph
    /// object V = vertex.txt
    /// object E = path.txt
    /// nat s @ V : * -> x
    /// ```
    ///
    /// A `nat f @ T : a -> b` line says that `G(f)` sends element `a` of
    /// `G(s')(T)` to element `b` of `G(s)(T)` for `f: s -> s'`.
    pub fn parse(
        text: &str,
        load: &dyn Fn(&str) -> Result<Copresheaf>,
        resolve: &dyn Fn(&str) -> Result<Arc<FinCategory>>,
    ) -> Result<Self> {
        let mut source = None;
        let mut target = None;
        let mut gadgets: HashMap<ObjId, Copresheaf> = HashMap::new();
        let mut nats: Vec<(String, String, String, String, usize)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::Parse(format!("line {}: {msg}", lineno + 1));
            let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match kw {
                "source" => source = Some(resolve(rest)?),
                "target" => target = Some(resolve(rest)?),
                "object" => {
                    let src: &Arc<FinCategory> = source.as_ref().ok_or_else(|| err("`object` before `source`"))?;
                    let (o, file) = rest.split_once('=').ok_or_else(|| err("expected `object X = file`"))?;
                    let o = src.object_id(o.trim()).ok_or_else(|| err("unknown source object"))?;
                    gadgets.insert(o, load(file.trim())?);
                }
                "nat" => {
                    let (head, body) = split_spaced(rest, ':').ok_or_else(|| err("expected `nat f @ T : a -> b`"))?;
                    let (f, t) = split_spaced(head, '@').ok_or_else(|| err("expected `@`"))?;
                    let (a, b) = body.split_once("->").ok_or_else(|| err("expected `->`"))?;
                    nats.push((f.trim().into(), t.trim().into(), a.trim().into(), b.trim().into(), lineno + 1));
                }
                _ => return Err(err(&format!("unknown keyword `{kw}`"))),
            }
        }
        let source = source.ok_or_else(|| Error::Parse("missing `source`".into()))?;
        let target = target.ok_or_else(|| Error::Parse("missing `target`".into()))?;
        let mut list = Vec::with_capacity(source.num_objects());
        for o in 0..source.num_objects() {
            let g = gadgets
                .remove(&o)
                .ok_or_else(|| Error::Parse(format!("no gadget for {}", source.object_name(o))))?;
            if !same_base(g.base(), &target) {
                return Err(Error::BaseMismatch(format!("gadget of {}", source.object_name(o))));
            }
            list.push(g);
        }
        let mut tables: HashMap<MorId, Vec<Vec<Option<usize>>>> = HashMap::new();
        for (f, t, a, b, lineno) in nats {
            let err = |msg: String| Error::Parse(format!("line {lineno}: {msg}"));
            let m = source.morphism_id(&f).ok_or_else(|| Error::UnknownMorphism(f.clone()))?;
            let tobj = target.object_id(&t).ok_or_else(|| err(format!("unknown target object {t}")))?;
            let (s, s2) = (source.source(m), source.target(m));
            let (from, to) = (list[s2].set(tobj), list[s].set(tobj));
            let x = from.index_of(&a).ok_or_else(|| err(format!("unknown element {a}")))?;
            let y = to.index_of(&b).ok_or_else(|| err(format!("unknown element {b}")))?;
            let entry = tables.entry(m).or_insert_with(|| {
                (0..target.num_objects()).map(|o| vec![None; list[s2].set(o).len()]).collect()
            });
            entry[tobj][x] = Some(y);
        }
        let mut given = Vec::new();
        for (m, comps) in tables {
            let mut full = Vec::new();
            for (o, c) in comps.into_iter().enumerate() {
                let c: Option<Vec<usize>> = c.into_iter().collect();
                full.push(Func::from(c.ok_or_else(|| {
                    Error::Parse(format!(
                        "transformation of {} is incomplete at {}",
                        source.morphism(m).name,
                        target.object_name(o)
                    ))
                })?));
            }
            given.push((m, full));
        }
        Self::new(source, target, list, given)
    }

    /// The gadget description plus one copresheaf text per source object,
    /// named `<object>.txt`.
    pub fn to_files(&self, source_ref: &str, target_ref: &str) -> (String, Vec<(String, String)>) {
        let (src, tgt) = (&self.source, &self.target);
        let mut main = format!("source {source_ref}\ntarget {target_ref}\n");
        let mut files = Vec::new();
        for o in 0..src.num_objects() {
            let file = format!("{}.txt", src.object_name(o));
            main.push_str(&format!("object {} = {}\n", src.object_name(o), file));
            files.push((file, self.gadgets[o].to_text(target_ref)));
        }
        for f in src.non_identities() {
            let (s, s2) = (src.source(f), src.target(f));
            for t in 0..tgt.num_objects() {
                for (x, &y) in self.transforms[f][t].iter().enumerate() {
                    main.push_str(&format!(
                        "nat {} @ {} : {} -> {}\n",
                        src.morphism(f).name,
                        tgt.object_name(t),
                        self.gadgets[s2].set(t).name(x),
                        self.gadgets[s].set(t).name(y)
                    ));
                }
            }
        }
        (main, files)
    }
}

/// `kay_G(A)`: at each `t`, the disjoint union over elements `(s, a)` of `A`
/// of `G(s)(t)`, where `f: s → s'` identifies `y` in copy `(s', A(f)(a))`
/// with `G(f)_t(y)` in copy `(s, a)`. Elements are named `s:a:y` after their
/// class representative.
pub fn yoneda_extend(g: &GadgetFunctor, a: &Copresheaf) -> Result<Copresheaf> {
    if !same_base(a.base(), &g.source) {
        return Err(Error::BaseMismatch("yoneda_extend: copresheaf is not over the gadget source".into()));
    }
    let (src, tgt) = (&g.source, &g.target);
    let mut copies = Vec::new();
    let mut copy_of = vec![Vec::new(); src.num_objects()];
    for s in 0..src.num_objects() {
        for e in 0..a.set(s).len() {
            copy_of[s].push(copies.len());
            copies.push((s, e));
        }
    }
    let mut sets = Vec::with_capacity(tgt.num_objects());
    let mut classes = Vec::with_capacity(tgt.num_objects());
    let mut reps_all = Vec::with_capacity(tgt.num_objects());
    for t in 0..tgt.num_objects() {
        let sizes: Vec<usize> = copies.iter().map(|&(s, _)| g.gadgets[s].set(t).len()).collect();
        let mut arrows = Vec::new();
        for f in src.non_identities() {
            let (s, s2) = (src.source(f), src.target(f));
            for e in 0..a.set(s).len() {
                arrows.push((copy_of[s2][a.function(f)[e]], copy_of[s][e], &g.transforms[f][t][..]));
            }
        }
        let (inj, reps) = quotient(&sizes, arrows);
        let names: Vec<String> = reps
            .iter()
            .map(|&(c, y)| {
                let (s, e) = copies[c];
                format!(
                    "{}:{}:{}",
                    src.object_name(s),
                    a.set(s).name(e),
                    g.gadgets[s].set(t).name(y)
                )
            })
            .collect();
        sets.push(FinSet::named(names));
        classes.push(inj);
        reps_all.push(reps);
    }
    let functions = (0..tgt.num_morphisms())
        .map(|h| {
            let (t, t2) = (tgt.source(h), tgt.target(h));
            reps_all[t]
                .iter()
                .map(|&(c, y)| {
                    let (s, _) = copies[c];
                    classes[t2][c][g.gadgets[s].function(h)[y]]
                })
                .collect()
        })
        .collect();
    Copresheaf::new(tgt.clone(), sets, functions)
}

/// `nerve_G(B)(s) = hom(G(s), B)`, acting by precomposition with `G(f)`.
/// Elements are named by listing their images, e.g. `<b>`.
pub fn nerve(g: &GadgetFunctor, b: &Copresheaf) -> Result<Copresheaf> {
    if !same_base(b.base(), &g.target) {
        return Err(Error::BaseMismatch("nerve: copresheaf is not over the gadget target".into()));
    }
    let src = &g.source;
    let homs: Vec<Vec<Vec<Func>>> = Execution::default().map(
        (0..src.num_objects()).collect(),
        |s| -> Result<Vec<Vec<Func>>> {
            Ok(HomProblem::new(&g.gadgets[s], b)?.all_components(Execution::Sequential))
        },
    )
    .into_iter()
    .collect::<Result<_>>()?;
    let lookup: Vec<HashMap<&[Func], usize>> = homs
        .iter()
        .map(|hs| hs.iter().enumerate().map(|(i, h)| (&h[..], i)).collect())
        .collect();
    let sets = homs
        .iter()
        .map(|hs| {
            FinSet::named(hs.iter().map(|h| {
                let parts: Vec<String> = h
                    .iter()
                    .enumerate()
                    .flat_map(|(t, c)| c.iter().map(move |&y| b.set(t).name(y).into_owned()))
                    .collect();
                format!("<{}>", parts.join(","))
            }))
        })
        .collect();
    let functions = (0..src.num_morphisms())
        .map(|f| {
            let (s, s2) = (src.source(f), src.target(f));
            homs[s]
                .iter()
                .map(|h| {
                    let composed: Vec<Func> = h
                        .iter()
                        .zip(&g.transforms[f])
                        .map(|(hc, gc)| compose_func(hc, gc))
                        .collect();
                    lookup[s2][&composed[..]]
                })
                .collect()
        })
        .collect();
    Copresheaf::new(src.clone(), sets, functions)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AdjunctionCheck {
    pub holds: bool,
    pub left: u64,
    pub right: u64,
}

/// Compares `|hom(kay_G A, C)|` with `|hom(A, nerve_G C)|`.
pub fn verify_adjunction(g: &GadgetFunctor, a: &Copresheaf, c: &Copresheaf) -> Result<AdjunctionCheck> {
    let left = hom_count(&yoneda_extend(g, a)?, c)?;
    let right = hom_count(a, &nerve(g, c)?)?;
    Ok(AdjunctionCheck {
        holds: left == right,
        left,
        right,
    })
}

/// The image of a polymorphism `f: A^N → B` under the nerve: the map
/// `nerve(A)^N → nerve(B)` sending a tuple of maps `G(s) → A` to their
/// pairing followed by `f`.
pub fn nerve_polymorphism(
    g: &GadgetFunctor,
    a: &Copresheaf,
    b: &Copresheaf,
    n: usize,
    f: &[Func],
    cap: usize,
) -> Result<NatTransformation> {
    let (na, nb) = (nerve(g, a)?, nerve(g, b)?);
    let na_pow = power(&na, &FinSet::range(n), cap)?;
    let src = &g.source;
    let homs_a: Vec<Vec<Vec<Func>>> = (0..src.num_objects())
        .map(|s| HomProblem::new(&g.gadgets[s], a).map(|p| p.all_components(Execution::Sequential)))
        .collect::<Result<_>>()?;
    let homs_b: Vec<HashMap<Vec<Func>, usize>> = (0..src.num_objects())
        .map(|s| {
            HomProblem::new(&g.gadgets[s], b).map(|p| {
                p.all_components(Execution::Sequential)
                    .into_iter()
                    .enumerate()
                    .map(|(i, h)| (h, i))
                    .collect()
            })
        })
        .collect::<Result<_>>()?;
    let tgt = &g.target;
    let components = (0..src.num_objects())
        .map(|s| {
            let k = homs_a[s].len();
            (0..na_pow.set(s).len())
                .map(|i| {
                    let tuple = tuple_at(i, k, n);
                    let image: Vec<Func> = (0..tgt.num_objects())
                        .map(|t| {
                            let width = a.set(t).len();
                            (0..g.gadgets[s].set(t).len())
                                .map(|y| {
                                    let point = tuple.iter().map(|&h| homs_a[s][h][t][y]);
                                    f[t][tuple_index(point, width)]
                                })
                                .collect()
                        })
                        .collect();
                    homs_b[s][&image]
                })
                .collect()
        })
        .collect();
    Ok(NatTransformation {
        source: na_pow,
        target: nb,
        components,
    })
}

/// Number of polymorphisms `A^N → B` for `|N| = n`.
pub fn pol_count(a: &Copresheaf, b: &Copresheaf, n: usize, cap: usize) -> Result<u64> {
    hom_count(&power(a, &FinSet::range(n), cap)?, b)
}

/// All polymorphisms `A^N → B` as natural transformations.
pub fn polymorphisms(a: &Copresheaf, b: &Copresheaf, n: &FinSet, cap: usize) -> Result<Vec<NatTransformation>> {
    hom_all(&power(a, n, cap)?, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copresheaf::{hom_equivalent, isomorphic, DEFAULT_SIZE_CAP};
    use crate::graphs::{complete, digraph, undirected_complete, undirected_cycle};
    use crate::grothendieck::{template_condition, GlMinion};

    #[test]
    fn ran_of_triangle() {
        let k3 = complete(3);
        let t = ran_eval(&k3, &k3, &[FinSet::empty(), FinSet::range(1), FinSet::range(2)], DEFAULT_SIZE_CAP)
            .unwrap();
        assert_eq!(t.elements[0].len(), 0);
        assert_eq!(t.elements[1].len(), 6);
        assert_eq!(t.elements[2].len(), 12);
        assert!(t.check_functorial());
    }

    #[test]
    fn lan_small_cases() {
        let k3 = complete(3);
        let x = digraph(1, &[]);
        assert_eq!(lan_eval(&k3, &x, &FinSet::range(2), DEFAULT_SIZE_CAP).unwrap().len(), 8);
        assert_eq!(lan_eval(&k3, &k3, &FinSet::range(1), DEFAULT_SIZE_CAP).unwrap().len(), 1);
        assert_eq!(lan_eval(&k3, &digraph(0, &[]), &FinSet::range(2), DEFAULT_SIZE_CAP).unwrap().len(), 0);
    }

    #[test]
    fn lan_matches_gl_of_template_condition() {
        let a = complete(3);
        let x = digraph(3, &[(0, 1), (1, 2), (2, 2)]);
        let n = FinSet::named(["p", "q"]);
        let direct = lan_eval(&a, &x, &n, DEFAULT_SIZE_CAP).unwrap();
        let via = GlMinion::new(template_condition(&a, &x).unwrap(), DEFAULT_SIZE_CAP).eval(&n).unwrap();
        assert_eq!(direct, via);
    }

    #[test]
    fn subdivision_of_a_digon_is_a_hexagon() {
        let g = GadgetFunctor::subdivision();
        let a = digraph(2, &[(0, 1), (0, 1)]);
        let k = yoneda_extend(&g, &a).unwrap();
        assert!(isomorphic(&k, &undirected_cycle(6)).unwrap());
    }

    #[test]
    fn subdivision_nerve_of_pentagon() {
        let g = GadgetFunctor::subdivision();
        let n = nerve(&g, &undirected_cycle(5)).unwrap();
        assert_eq!(n.set(0).len(), 5);
        assert_eq!(n.set(1).len(), 40);
        assert!(hom_equivalent(&n, &complete(5)).unwrap());
    }

    #[test]
    fn yoneda_gadget_is_dense() {
        let d = digraph_base();
        let y = GadgetFunctor::yoneda(&d);
        let a = digraph(3, &[(0, 1), (1, 1), (2, 0)]);
        assert!(isomorphic(&yoneda_extend(&y, &a).unwrap(), &a).unwrap());
        assert!(isomorphic(&nerve(&y, &a).unwrap(), &a).unwrap());
    }

    #[test]
    fn adjunction_for_subdivision() {
        let g = GadgetFunctor::subdivision();
        let a = digraph(2, &[(0, 1), (0, 1)]);
        let check = verify_adjunction(&g, &a, &undirected_cycle(6)).unwrap();
        assert!(check.holds);
        assert!(check.left > 0);
        let check = verify_adjunction(&g, &a, &undirected_complete(3)).unwrap();
        assert!(check.holds);
    }

    #[test]
    fn gadget_file_round_trip() {
        let g = GadgetFunctor::subdivision();
        let (main, files) = g.to_files("builtin:digraph", "builtin:graph");
        let files: HashMap<String, String> = files.into_iter().collect();
        let resolve = |r: &str| crate::graphs::builtin_base(r);
        let back = GadgetFunctor::parse(
            &main,
            &|f| Copresheaf::parse(&files[f], &resolve),
            &resolve,
        )
        .unwrap();
        assert_eq!(back.transforms, g.transforms);
    }

    #[test]
    fn power_minions() {
        let k3 = complete(3);
        let id = compose_minion(&PowerMinion { k: 1, cap: DEFAULT_SIZE_CAP }, &k3).unwrap();
        assert!(isomorphic(&id, &k3).unwrap());
        let sq = compose_minion(&PowerMinion { k: 2, cap: DEFAULT_SIZE_CAP }, &k3).unwrap();
        assert!(isomorphic(&sq, &power(&k3, &FinSet::range(2), DEFAULT_SIZE_CAP).unwrap()).unwrap());
    }

    #[test]
    fn nerve_preserves_polymorphisms() {
        let g = GadgetFunctor::subdivision();
        let (a, b) = (undirected_complete(3), undirected_complete(3));
        for f in polymorphisms(&a, &b, &FinSet::range(2), DEFAULT_SIZE_CAP).unwrap().iter().take(4) {
            let h = nerve_polymorphism(&g, &a, &b, 2, &f.components, DEFAULT_SIZE_CAP).unwrap();
            assert!(h.check_naturality().is_ok());
        }
    }
}
