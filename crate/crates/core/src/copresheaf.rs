//! Copresheaves on finite categories and the homomorphism problem between
//! them.

use std::collections::HashMap;
use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fincat::{split_spaced, strip_comment, CatFunctor, FinCategory, MorId, ObjId, Report};
use crate::findiag::{compose_func, identity_func, Constraint, FinDiagram, Func, Network};
use crate::par::Execution;

pub use crate::findiag::FinSet;

/// Default bound on the size of any single component built by exponentiation.
pub const DEFAULT_SIZE_CAP: usize = 1_000_000;

/// A functor from a finite base category into finite sets.
#[derive(Clone, Debug)]
pub struct Copresheaf {
    diagram: FinDiagram,
}

pub(crate) fn same_base(a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for Copresheaf {
    /// Same base, same element names, same tables.
    fn eq(&self, other: &Self) -> bool {
        same_base(self.base(), other.base())
            && self.sets() == other.sets()
            && self.functions() == other.functions()
    }
}

fn check_base(a: &Copresheaf, b: &Copresheaf) -> Result<()> {
    if same_base(a.base(), b.base()) {
        Ok(())
    } else {
        Err(Error::BaseMismatch(format!(
            "base with objects {:?} vs base with objects {:?}",
            a.base().objects(),
            b.base().objects()
        )))
    }
}

impl Copresheaf {
    /// Validated construction from one table per base morphism.
    pub fn new(base: Arc<FinCategory>, sets: Vec<FinSet>, functions: Vec<Func>) -> Result<Self> {
        Ok(Self {
            diagram: FinDiagram::new(base, sets, functions)?,
        })
    }

    /// Construction without validation; for builders whose output is
    /// functorial by construction.
    pub fn from_parts(base: Arc<FinCategory>, sets: Vec<FinSet>, functions: Vec<Func>) -> Self {
        let c = Self {
            diagram: FinDiagram {
                shape: base,
                sets,
                functions,
            },
        };
        debug_assert!(c.diagram.validate().is_ok(), "{}", c.diagram.validate());
        c
    }

    pub fn from_diagram(diagram: FinDiagram) -> Result<Self> {
        let report = diagram.validate();
        if !report.is_ok() {
            return Err(Error::InvalidDiagram(report.to_string()));
        }
        Ok(Self { diagram })
    }

    /// Builds a copresheaf from tables for some morphisms; tables of the
    /// remaining ones are derived through composites, identities are filled
    /// in, and the result is validated.
    pub fn from_generators(
        base: Arc<FinCategory>,
        sets: Vec<FinSet>,
        given: impl IntoIterator<Item = (MorId, Func)>,
    ) -> Result<Self> {
        let mut tables: Vec<Option<Func>> = vec![None; base.num_morphisms()];
        for o in 0..base.num_objects() {
            tables[base.identity(o)] = Some(identity_func(sets[o].len()));
        }
        for (m, t) in given {
            tables[m] = Some(t);
        }
        for (m, t) in tables.iter_mut().enumerate() {
            if t.is_none() && sets[base.source(m)].is_empty() {
                *t = Some(Func::from(Vec::new()));
            }
        }
        loop {
            let mut progress = false;
            for f in 0..base.num_morphisms() {
                let Some(tf) = tables[f].clone() else { continue };
                for &g in base.outgoing(base.target(f)) {
                    let gf = base.compose(g, f).expect("total composition");
                    if tables[gf].is_some() {
                        continue;
                    }
                    if let Some(tg) = &tables[g] {
                        if tf.iter().all(|&x| x < tg.len()) {
                            tables[gf] = Some(compose_func(tg, &tf));
                            progress = true;
                        }
                    }
                }
            }
            if !progress {
                break;
            }
        }
        let mut functions = Vec::with_capacity(tables.len());
        for (m, t) in tables.into_iter().enumerate() {
            functions.push(t.ok_or_else(|| {
                Error::InvalidDiagram(format!("no table for morphism {}", base.morphism(m).name))
            })?);
        }
        Self::new(base, sets, functions)
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        &self.diagram.shape
    }

    pub fn diagram(&self) -> &FinDiagram {
        &self.diagram
    }

    pub fn into_diagram(self) -> FinDiagram {
        self.diagram
    }

    pub fn set(&self, o: ObjId) -> &FinSet {
        &self.diagram.sets[o]
    }

    pub fn sets(&self) -> &[FinSet] {
        &self.diagram.sets
    }

    pub fn function(&self, m: MorId) -> &Func {
        &self.diagram.functions[m]
    }

    pub fn functions(&self) -> &[Func] {
        &self.diagram.functions
    }

    /// Total number of elements across all objects.
    pub fn num_elements(&self) -> usize {
        self.diagram.sets.iter().map(FinSet::len).sum()
    }

    /// Same data with every set carrying explicit names.
    pub fn materialize(&self) -> Self {
        let mut c = self.clone();
        for s in &mut c.diagram.sets {
            *s = s.materialize();
        }
        c
    }

    /// `A ∘ F` for a functor `F: T → S` into the base of `A`.
    pub fn precompose(&self, f: &CatFunctor) -> Result<Self> {
        if !same_base(&f.target, self.base()) {
            return Err(Error::BaseMismatch("functor target differs from base".into()));
        }
        let sets = f.objects.iter().map(|&o| self.set(o).clone()).collect();
        let functions = f.morphisms.iter().map(|&m| self.function(m).clone()).collect();
        Ok(Self::from_parts(f.source.clone(), sets, functions))
    }

    /// The line-oriented text form with the given `base` reference.
    pub fn to_text(&self, base_ref: &str) -> String {
        let base = self.base();
        let mut s = format!("base {base_ref}\n");
        for o in 0..base.num_objects() {
            s.push_str(&format!("set {} = {}\n", base.object_name(o), self.set(o)));
        }
        for m in base.non_identities() {
            let (src, tgt) = (self.set(base.source(m)), self.set(base.target(m)));
            for (x, &y) in self.function(m).iter().enumerate() {
                s.push_str(&format!(
                    "map {} : {} -> {}\n",
                    base.morphism(m).name,
                    src.name(x),
                    tgt.name(y)
                ));
            }
        }
        s
    }

    /// Parses the text format. `resolve` turns the `base` reference into a
    /// category.
    ///
    /// ```text
    /// base builtin:digraph
    /// set V = {0, 1}
    /// set E = {e}
    /// map s : e -> 0
    /// map t : e -> 1
    /// ```
    pub fn parse(text: &str, resolve: &dyn Fn(&str) -> Result<Arc<FinCategory>>) -> Result<Self> {
        let mut base: Option<Arc<FinCategory>> = None;
        let mut sets: Vec<Option<FinSet>> = Vec::new();
        let mut lookup: Vec<HashMap<String, usize>> = Vec::new();
        let mut maps: HashMap<MorId, Vec<Option<usize>>> = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse(format!("line {}: {msg}", lineno + 1));
            let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match kw {
                "base" => {
                    if base.is_some() {
                        return Err(err("duplicate base".into()));
                    }
                    let b = resolve(rest)?;
                    sets = vec![None; b.num_objects()];
                    lookup = vec![HashMap::new(); b.num_objects()];
                    base = Some(b);
                }
                "set" => {
                    let b = base.as_ref().ok_or_else(|| err("`set` before `base`".into()))?;
                    let (obj, elems) = rest
                        .split_once('=')
                        .ok_or_else(|| err("expected `set <object> = {...}`".into()))?;
                    let o = b
                        .object_id(obj.trim())
                        .ok_or_else(|| err(format!("unknown object {}", obj.trim())))?;
                    let names = parse_braced_list(elems.trim()).map_err(err)?;
                    let mut index = HashMap::new();
                    for (i, n) in names.iter().enumerate() {
                        if index.insert(n.clone(), i).is_some() {
                            return Err(err(format!("duplicate element {n}")));
                        }
                    }
                    lookup[o] = index;
                    sets[o] = Some(FinSet::named(names));
                }
                "map" => {
                    let b = base.as_ref().ok_or_else(|| err("`map` before `base`".into()))?;
                    let (mname, body) = split_spaced(rest, ':')
                        .ok_or_else(|| err("expected `map <arrow> : x -> y`".into()))?;
                    let m = b
                        .morphism_id(mname.trim())
                        .ok_or_else(|| Error::UnknownMorphism(mname.trim().to_string()))?;
                    let (x, y) = body.split_once("->").ok_or_else(|| err("expected `->`".into()))?;
                    let (src, tgt) = (b.source(m), b.target(m));
                    let (Some(ss), Some(_)) = (&sets[src], &sets[tgt]) else {
                        return Err(err("map refers to a set not declared yet".into()));
                    };
                    let xi = *lookup[src]
                        .get(x.trim())
                        .ok_or_else(|| err(format!("unknown element {}", x.trim())))?;
                    let yi = *lookup[tgt]
                        .get(y.trim())
                        .ok_or_else(|| err(format!("unknown element {}", y.trim())))?;
                    let table = maps.entry(m).or_insert_with(|| vec![None; ss.len()]);
                    if table[xi].is_some_and(|old| old != yi) {
                        return Err(err(format!("conflicting image for {}", x.trim())));
                    }
                    table[xi] = Some(yi);
                }
                _ => return Err(err(format!("unknown keyword `{kw}`"))),
            }
        }
        let base = base.ok_or_else(|| Error::Parse("missing `base` line".into()))?;
        let sets: Vec<FinSet> = sets.into_iter().map(|s| s.unwrap_or_else(FinSet::empty)).collect();
        let mut given = Vec::new();
        for (m, table) in maps {
            let src = &sets[base.source(m)];
            let mut full = Vec::with_capacity(table.len());
            for (x, y) in table.into_iter().enumerate() {
                full.push(y.ok_or_else(|| {
                    Error::Parse(format!(
                        "map {} has no image for {}",
                        base.morphism(m).name,
                        src.name(x)
                    ))
                })?);
            }
            given.push((m, Func::from(full)));
        }
        Self::from_generators(base, sets, given)
    }
}

/// Splits `{a, (b,c), d}` at top-level commas.
pub(crate) fn parse_braced_list(s: &str) -> std::result::Result<Vec<String>, String> {
    let inner = s
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| format!("expected braces around `{s}`"))?;
    split_top_level(inner, ',')
        .into_iter()
        .map(|p| p.trim().to_string())
        .filter(|p| !p.is_empty())
        .map(Ok)
        .collect()
}

pub(crate) fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '{' | '<' => depth += 1,
            ')' | ']' | '}' | '>' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// A natural transformation given by its components.
#[derive(Clone, Debug)]
pub struct NatTransformation {
    pub source: Copresheaf,
    pub target: Copresheaf,
    pub components: Vec<Func>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NaturalityViolation {
    Shape { detail: String },
    Square { morphism: String, element: String },
}

impl fmt::Display for NaturalityViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Shape { detail } => write!(out, "{detail}"),
            Self::Square { morphism, element } => {
                write!(out, "naturality square of {morphism} fails at {element}")
            }
        }
    }
}

impl NatTransformation {
    pub fn identity(a: &Copresheaf) -> Self {
        Self {
            source: a.clone(),
            target: a.clone(),
            components: a.sets().iter().map(|s| identity_func(s.len())).collect(),
        }
    }

    pub fn check_naturality(&self) -> Report<NaturalityViolation> {
        let (x, a) = (&self.source, &self.target);
        let mut violations = Vec::new();
        if !same_base(x.base(), a.base()) {
            violations.push(NaturalityViolation::Shape {
                detail: "source and target have different bases".into(),
            });
            return Report { violations };
        }
        let base = x.base();
        for o in 0..base.num_objects() {
            let c = self.components.get(o);
            if c.map(|c| c.len()) != Some(x.set(o).len())
                || c.is_some_and(|c| c.iter().any(|&y| y >= a.set(o).len()))
            {
                violations.push(NaturalityViolation::Shape {
                    detail: format!("component at {} is not a function", base.object_name(o)),
                });
            }
        }
        if !violations.is_empty() {
            return Report { violations };
        }
        for f in base.non_identities() {
            let (s, t) = (base.source(f), base.target(f));
            let (xf, af) = (x.function(f), a.function(f));
            let (hs, ht) = (&self.components[s], &self.components[t]);
            for e in 0..x.set(s).len() {
                if af[hs[e]] != ht[xf[e]] {
                    violations.push(NaturalityViolation::Square {
                        morphism: base.morphism(f).name.clone(),
                        element: x.set(s).name(e).into_owned(),
                    });
                }
            }
        }
        Report { violations }
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &NatTransformation) -> NatTransformation {
        NatTransformation {
            source: other.source.clone(),
            target: self.target.clone(),
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(g, f)| compose_func(g, f))
                .collect(),
        }
    }

    pub fn is_bijective(&self) -> bool {
        self.components.iter().enumerate().all(|(o, c)| {
            let n = self.target.set(o).len();
            if c.len() != n {
                return false;
            }
            let mut seen = vec![false; n];
            c.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
        })
    }
}

/// The homomorphism problem `X → A`, lowered to a constraint network: one
/// variable per element `(s, x)` of `X` with domain `A(s)`, and for every
/// non-identity `f: s → t` the constraint `A(f)(v(s,x)) = v(t, X(f)(x))`.
/// This is the limit of `A ∘ gr X` without naming the category of elements.
pub struct HomProblem {
    source: Copresheaf,
    target: Copresheaf,
    offset: Vec<usize>,
    network: Network,
}

impl HomProblem {
    pub fn new(x: &Copresheaf, a: &Copresheaf) -> Result<Self> {
        check_base(x, a)?;
        let base = x.base();
        let mut offset = Vec::with_capacity(base.num_objects() + 1);
        offset.push(0);
        let mut sizes = Vec::with_capacity(x.num_elements());
        for o in 0..base.num_objects() {
            sizes.extend(std::iter::repeat(a.set(o).len()).take(x.set(o).len()));
            offset.push(sizes.len());
        }
        let mut constraints = Vec::new();
        for f in base.non_identities() {
            let (s, t) = (base.source(f), base.target(f));
            let xf = x.function(f);
            for e in 0..x.set(s).len() {
                constraints.push(Constraint {
                    source: offset[s] + e,
                    target: offset[t] + xf[e],
                    table: a.function(f).clone(),
                });
            }
        }
        Ok(Self {
            source: x.clone(),
            target: a.clone(),
            offset,
            network: Network::new(sizes, constraints),
        })
    }

    pub fn network(&self) -> &Network {
        &self.network
    }

    fn transformation(&self, sol: &[usize]) -> NatTransformation {
        let components = (0..self.offset.len() - 1)
            .map(|o| sol[self.offset[o]..self.offset[o + 1]].iter().copied().collect())
            .collect();
        NatTransformation {
            source: self.source.clone(),
            target: self.target.clone(),
            components,
        }
    }

    pub fn exists(&self, exec: Execution) -> bool {
        self.network.exists(exec)
    }

    pub fn first(&self, exec: Execution) -> Option<NatTransformation> {
        self.network.first(exec).map(|s| self.transformation(&s))
    }

    pub fn count(&self, exec: Execution) -> u64 {
        self.network.count(exec)
    }

    /// All transformations, ordered lexicographically by their components.
    pub fn all(&self, exec: Execution) -> Vec<NatTransformation> {
        self.network
            .enumerate(exec)
            .iter()
            .map(|s| self.transformation(s))
            .collect()
    }

    /// Component tuples only, in the same order as [`HomProblem::all`].
    pub fn all_components(&self, exec: Execution) -> Vec<Vec<Func>> {
        self.network
            .enumerate(exec)
            .iter()
            .map(|s| self.transformation(s).components)
            .collect()
    }

    pub fn for_each(&self, mut f: impl FnMut(&NatTransformation) -> ControlFlow<()>) {
        self.network.for_each(|s| f(&self.transformation(s)));
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomMode {
    Decide,
    Enumerate,
    Count,
}

#[derive(Clone, Debug)]
pub enum HomResult {
    Decide(Option<NatTransformation>),
    Enumerate(Vec<NatTransformation>),
    Count(u64),
}

pub fn hom(x: &Copresheaf, a: &Copresheaf, mode: HomMode) -> Result<HomResult> {
    let p = HomProblem::new(x, a)?;
    let exec = Execution::default();
    Ok(match mode {
        HomMode::Decide => HomResult::Decide(p.first(exec)),
        HomMode::Enumerate => HomResult::Enumerate(p.all(exec)),
        HomMode::Count => HomResult::Count(p.count(exec)),
    })
}

pub fn hom_exists(x: &Copresheaf, a: &Copresheaf) -> Result<bool> {
    Ok(HomProblem::new(x, a)?.exists(Execution::default()))
}

pub fn hom_count(x: &Copresheaf, a: &Copresheaf) -> Result<u64> {
    Ok(HomProblem::new(x, a)?.count(Execution::default()))
}

pub fn hom_all(x: &Copresheaf, a: &Copresheaf) -> Result<Vec<NatTransformation>> {
    Ok(HomProblem::new(x, a)?.all(Execution::default()))
}

pub fn hom_equivalent(a: &Copresheaf, b: &Copresheaf) -> Result<bool> {
    Ok(hom_exists(a, b)? && hom_exists(b, a)?)
}

/// An isomorphism `a → b`, if one exists.
pub fn find_isomorphism(a: &Copresheaf, b: &Copresheaf) -> Result<Option<NatTransformation>> {
    check_base(a, b)?;
    if a.sets().iter().zip(b.sets()).any(|(x, y)| x.len() != y.len()) {
        return Ok(None);
    }
    let p = HomProblem::new(a, b)?;
    let mut found = None;
    p.for_each(|h| {
        if h.is_bijective() {
            found = Some(h.clone());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(found)
}

pub fn isomorphic(a: &Copresheaf, b: &Copresheaf) -> Result<bool> {
    Ok(find_isomorphism(a, b)?.is_some())
}

/// Index of a tuple over `{0..k}` in lexicographic order.
pub fn tuple_index(tuple: impl IntoIterator<Item = usize>, k: usize) -> usize {
    tuple.into_iter().fold(0, |acc, a| acc * k + a)
}

/// Inverse of [`tuple_index`] for tuples of length `n`.
pub fn tuple_at(mut index: usize, k: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for i in (0..n).rev() {
        out[i] = index % k.max(1);
        index /= k.max(1);
    }
    out
}

pub(crate) fn checked_pow(base: usize, exp: usize, cap: usize, what: &str) -> Result<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc
            .checked_mul(base)
            .filter(|&v| v <= cap)
            .ok_or_else(|| Error::SizeCap(format!("{what}: {base}^{exp} exceeds {cap}")))?;
    }
    Ok(acc)
}

/// Componentwise power `A^N` with tuples in lexicographic order.
pub fn power(a: &Copresheaf, n: &FinSet, cap: usize) -> Result<Copresheaf> {
    let base = a.base();
    let k = n.len();
    let mut sets = Vec::with_capacity(base.num_objects());
    for o in 0..base.num_objects() {
        let m = a.set(o).len();
        let len = checked_pow(m, k, cap, "power")?;
        let elems = a.set(o).clone();
        sets.push(FinSet::lazy(len, move |i| {
            let t = tuple_at(i, m, k);
            let parts: Vec<String> = t.iter().map(|&x| elems.name(x).into_owned()).collect();
            format!("({})", parts.join(","))
        }));
    }
    let functions = base
        .morphisms()
        .iter()
        .enumerate()
        .map(|(f, mor)| {
            let (ms, mt) = (a.set(mor.source).len(), a.set(mor.target).len());
            let af = a.function(f);
            (0..sets[mor.source].len())
                .map(|i| tuple_index(tuple_at(i, ms, k).into_iter().map(|x| af[x]), mt))
                .collect()
        })
        .collect();
    Ok(Copresheaf::from_parts(base.clone(), sets, functions))
}

/// Binary product `A × B`, pairs in lexicographic order.
pub fn product(a: &Copresheaf, b: &Copresheaf) -> Result<Copresheaf> {
    check_base(a, b)?;
    let base = a.base();
    let sets: Vec<FinSet> = (0..base.num_objects())
        .map(|o| {
            let (sa, sb) = (a.set(o).clone(), b.set(o).clone());
            let nb = sb.len();
            FinSet::lazy(sa.len() * nb, move |i| format!("({},{})", sa.name(i / nb), sb.name(i % nb)))
        })
        .collect();
    let functions = (0..base.num_morphisms())
        .map(|f| {
            let (s, t) = (base.source(f), base.target(f));
            let (nbs, nbt) = (b.set(s).len(), b.set(t).len());
            let (af, bf) = (a.function(f), b.function(f));
            (0..sets[s].len())
                .map(|i| af[i / nbs] * nbt + bf[i % nbs])
                .collect()
        })
        .collect();
    Ok(Copresheaf::from_parts(base.clone(), sets, functions))
}

/// The representable `hom(s, -)`, elements named by morphisms.
pub fn yoneda(base: &Arc<FinCategory>, s: ObjId) -> Copresheaf {
    let mut index = vec![usize::MAX; base.num_morphisms()];
    let mut sets_members: Vec<Vec<MorId>> = vec![Vec::new(); base.num_objects()];
    for &m in base.outgoing(s) {
        let t = base.target(m);
        index[m] = sets_members[t].len();
        sets_members[t].push(m);
    }
    let sets = sets_members
        .iter()
        .map(|ms| FinSet::named(ms.iter().map(|&m| base.morphism(m).name.clone())))
        .collect();
    let functions = (0..base.num_morphisms())
        .map(|g| {
            sets_members[base.source(g)]
                .iter()
                .map(|&f| index[base.compose(g, f).expect("composable")])
                .collect()
        })
        .collect();
    Copresheaf::from_parts(base.clone(), sets, functions)
}

/// The copresheaf with no elements.
pub fn empty(base: &Arc<FinCategory>) -> Copresheaf {
    Copresheaf::from_parts(
        base.clone(),
        vec![FinSet::empty(); base.num_objects()],
        vec![Func::from(Vec::new()); base.num_morphisms()],
    )
}

/// The copresheaf with one element everywhere.
pub fn terminal(base: &Arc<FinCategory>) -> Copresheaf {
    Copresheaf::from_parts(
        base.clone(),
        vec![FinSet::named(["*"]); base.num_objects()],
        vec![Func::from(vec![0]); base.num_morphisms()],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{self, complete, cycle, digraph_base};

    #[test]
    fn triangle_endomorphisms() {
        let k3 = complete(3);
        assert_eq!(hom_count(&k3, &k3).unwrap(), 6);
        for h in hom_all(&k3, &k3).unwrap() {
            assert!(h.check_naturality().is_ok());
        }
    }

    #[test]
    fn five_cycle_colourings() {
        assert_eq!(hom_count(&cycle(5), &complete(3)).unwrap(), 30);
    }

    #[test]
    fn yoneda_representables() {
        let d = digraph_base();
        let yv = yoneda(&d, 0);
        assert_eq!((yv.set(0).len(), yv.set(1).len()), (1, 0));
        let ye = yoneda(&d, 1);
        assert_eq!(ye.set(0).names(), ["s", "t"]);
        assert_eq!(ye.set(1).names(), ["id_E"]);
        assert_eq!(ye.function(2)[0], 0);
        assert_eq!(ye.function(3)[0], 1);
        let k3 = complete(3);
        assert_eq!(hom_count(&ye, &k3).unwrap(), 6);
        assert_eq!(hom_count(&yv, &k3).unwrap(), 3);
    }

    #[test]
    fn power_sizes() {
        let k3 = complete(3);
        let sq = power(&k3, &FinSet::range(2), DEFAULT_SIZE_CAP).unwrap();
        assert_eq!((sq.set(0).len(), sq.set(1).len()), (9, 36));
        assert!(sq.diagram().validate().is_ok());
        let unit = power(&k3, &FinSet::empty(), DEFAULT_SIZE_CAP).unwrap();
        assert_eq!((unit.set(0).len(), unit.set(1).len()), (1, 1));
        assert!(isomorphic(&power(&k3, &FinSet::range(1), DEFAULT_SIZE_CAP).unwrap(), &k3).unwrap());
        assert!(matches!(power(&k3, &FinSet::range(9), 1000), Err(Error::SizeCap(_))));
    }

    #[test]
    fn collapsing_an_edge_is_not_natural() {
        let k3 = complete(3);
        let mut h = NatTransformation::identity(&k3);
        assert!(h.check_naturality().is_ok());
        h.components[0] = Func::from(vec![0, 0, 2]);
        assert!(!h.check_naturality().is_ok());
    }

    #[test]
    fn equivalence_and_mismatch() {
        let k3 = complete(3);
        assert!(hom_equivalent(&k3, &k3).unwrap());
        assert!(!hom_equivalent(&k3, &cycle(5)).unwrap());
        let u = graphs::graph_base();
        assert!(matches!(hom_exists(&k3, &terminal(&u)), Err(Error::BaseMismatch(_))));
    }

    #[test]
    fn text_round_trip() {
        let k3 = complete(3);
        let text = k3.to_text("builtin:digraph");
        let back = Copresheaf::parse(&text, &|r| graphs::builtin_base(r)).unwrap();
        assert!(isomorphic(&back, &k3).unwrap());
        assert_eq!(back.set(1).names(), k3.set(1).names());
    }

    #[test]
    fn parse_derives_composite_maps() {
        let text = "base builtin:graph\nset V = {a, b}\nset E = {ab, ba}\n\
                    map s : ab -> a\nmap s : ba -> b\nmap r : ab -> ba\nmap r : ba -> ab\n";
        let g = Copresheaf::parse(text, &|r| graphs::builtin_base(r)).unwrap();
        let t = g.base().morphism_id("t").unwrap();
        assert_eq!(&g.function(t)[..], &[1, 0]);
    }
}
