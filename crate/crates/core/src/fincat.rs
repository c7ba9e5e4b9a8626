//! Finite categories given by an explicit composition table, functors between
//! them, and finite presentations that close to such tables.
//!
//! Objects and morphisms are addressed by their index in declaration order.
//! Composition is stored sparsely: for each morphism `f` we keep the composites
//! `g ∘ f` for every `g` leaving the target of `f`, in the order in which those
//! `g` appear among the outgoing morphisms of that object. This keeps lookups
//! O(1) and memory proportional to the number of composable pairs, which
//! matters for categories of elements of large copresheaves.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

pub type ObjId = usize;
pub type MorId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Morphism {
    pub name: String,
    pub source: ObjId,
    pub target: ObjId,
}

/// A finite category with a total composition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identity: Vec<MorId>,
    /// Outgoing morphisms of each object, in declaration order.
    outgoing: Vec<Vec<MorId>>,
    /// Position of each morphism inside `outgoing[source]`.
    out_pos: Vec<usize>,
    /// `composites[f][k]` is `outgoing[target f][k] ∘ f`, when defined.
    composites: Vec<Vec<Option<MorId>>>,
    /// Composites recorded for pairs that are not composable. Only ever
    /// non-empty for raw tables handed to `from_table`, so that validation can
    /// report them.
    stray: Vec<(MorId, MorId, MorId)>,
}

/// One way a composition table can fail to describe a category.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CategoryViolation {
    IdentityNotEndo { object: String, identity: String },
    ComposedNonComposable { g: String, f: String, composite: String },
    MissingComposite { g: String, f: String },
    CompositeWrongType { g: String, f: String, composite: String },
    LeftIdentity { f: String },
    RightIdentity { f: String },
    Associativity { h: String, g: String, f: String },
}

impl fmt::Display for CategoryViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::IdentityNotEndo { object, identity } => {
                write!(out, "identity {identity} of {object} is not an endomorphism of it")
            }
            Self::ComposedNonComposable { g, f, composite } => {
                write!(out, "{g} . {f} = {composite} declared but {g} and {f} are not composable")
            }
            Self::MissingComposite { g, f } => write!(out, "composite {g} . {f} is missing"),
            Self::CompositeWrongType { g, f, composite } => {
                write!(out, "{g} . {f} = {composite} has the wrong source or target")
            }
            Self::LeftIdentity { f } => write!(out, "id . {f} != {f}"),
            Self::RightIdentity { f } => write!(out, "{f} . id != {f}"),
            Self::Associativity { h, g, f } => {
                write!(out, "({h} . {g}) . {f} != {h} . ({g} . {f})")
            }
        }
    }
}

/// Outcome of a validation pass: empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report<V> {
    pub violations: Vec<V>,
}

impl<V> Report<V> {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl<V: fmt::Display> fmt::Display for Report<V> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(out, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(out)?;
            }
            write!(out, "{v}")?;
        }
        Ok(())
    }
}

pub type CategoryReport = Report<CategoryViolation>;

impl FinCategory {
    /// Builds a category from raw parts without validating it. `compose` lists
    /// triples `(g, f, g∘f)`; pairs of identities with anything are filled in
    /// automatically when absent.
    pub fn from_table(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identity: Vec<MorId>,
        compose: impl IntoIterator<Item = (MorId, MorId, MorId)>,
    ) -> Self {
        let mut outgoing = vec![Vec::new(); objects.len()];
        let mut out_pos = vec![0; morphisms.len()];
        for (m, mor) in morphisms.iter().enumerate() {
            out_pos[m] = outgoing[mor.source].len();
            outgoing[mor.source].push(m);
        }
        let mut composites: Vec<Vec<Option<MorId>>> = morphisms
            .iter()
            .map(|mor| vec![None; outgoing[mor.target].len()])
            .collect();
        let mut stray = Vec::new();
        for (g, f, h) in compose {
            if morphisms[g].source == morphisms[f].target {
                composites[f][out_pos[g]] = Some(h);
            } else {
                stray.push((g, f, h));
            }
        }
        let is_identity: Vec<bool> = {
            let mut v = vec![false; morphisms.len()];
            for &i in &identity {
                v[i] = true;
            }
            v
        };
        for f in 0..morphisms.len() {
            for (k, &g) in outgoing[morphisms[f].target].iter().enumerate() {
                if composites[f][k].is_none() {
                    if is_identity[g] {
                        composites[f][k] = Some(f);
                    } else if is_identity[f] {
                        composites[f][k] = Some(g);
                    }
                }
            }
        }
        Self {
            objects,
            morphisms,
            identity,
            outgoing,
            out_pos,
            composites,
            stray,
        }
    }

    /// Like [`FinCategory::from_table`] but rejects anything that fails
    /// [`FinCategory::validate`].
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identity: Vec<MorId>,
        compose: impl IntoIterator<Item = (MorId, MorId, MorId)>,
    ) -> Result<Self> {
        let cat = Self::from_table(objects, morphisms, identity, compose);
        let report = cat.validate();
        if report.is_ok() {
            Ok(cat)
        } else {
            Err(Error::InvalidCategory(report.to_string()))
        }
    }

    /// The category with the given objects and generating arrows, where no two
    /// non-identity arrows compose. Panics if two arrows are composable.
    pub fn composition_free(objects: Vec<String>, arrows: Vec<(String, ObjId, ObjId)>) -> Self {
        let mut morphisms: Vec<Morphism> = objects
            .iter()
            .enumerate()
            .map(|(i, o)| Morphism {
                name: format!("id_{o}"),
                source: i,
                target: i,
            })
            .collect();
        let identity = (0..objects.len()).collect();
        for (name, source, target) in arrows {
            morphisms.push(Morphism { name, source, target });
        }
        let n = objects.len();
        for a in &morphisms[n..] {
            assert!(
                !morphisms[n..].iter().any(|b| b.source == a.target),
                "arrows compose; not composition-free"
            );
        }
        Self::from_table(objects, morphisms, identity, std::iter::empty())
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn object_name(&self, o: ObjId) -> &str {
        &self.objects[o]
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism(&self, m: MorId) -> &Morphism {
        &self.morphisms[m]
    }

    pub fn source(&self, m: MorId) -> ObjId {
        self.morphisms[m].source
    }

    pub fn target(&self, m: MorId) -> ObjId {
        self.morphisms[m].target
    }

    pub fn identity(&self, o: ObjId) -> MorId {
        self.identity[o]
    }

    pub fn is_identity(&self, m: MorId) -> bool {
        let src = self.morphisms[m].source;
        self.identity[src] == m
    }

    pub fn outgoing(&self, o: ObjId) -> &[MorId] {
        &self.outgoing[o]
    }

    pub fn object_id(&self, name: &str) -> Option<ObjId> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphism_id(&self, name: &str) -> Option<MorId> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    /// `g ∘ f`, or `None` when the pair is not composable.
    pub fn compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        if self.morphisms[g].source != self.morphisms[f].target {
            return None;
        }
        self.composites[f][self.out_pos[g]]
    }

    /// Morphisms `a → b`.
    pub fn hom(&self, a: ObjId, b: ObjId) -> Vec<MorId> {
        self.outgoing[a]
            .iter()
            .copied()
            .filter(|&m| self.morphisms[m].target == b)
            .collect()
    }

    /// Non-identity morphisms, in declaration order.
    pub fn non_identities(&self) -> impl Iterator<Item = MorId> + '_ {
        (0..self.morphisms.len()).filter(move |&m| !self.is_identity(m))
    }

    /// True when no two non-identity morphisms are composable.
    pub fn is_composition_free(&self) -> bool {
        self.non_identities().all(|f| {
            self.outgoing[self.target(f)]
                .iter()
                .all(|&g| self.is_identity(g))
        })
    }

    /// Checks identity laws, closure and associativity exhaustively.
    pub fn validate(&self) -> CategoryReport {
        let name = |m: MorId| self.morphisms[m].name.clone();
        let mut violations = Vec::new();
        for (o, &id) in self.identity.iter().enumerate() {
            let m = &self.morphisms[id];
            if m.source != o || m.target != o {
                violations.push(CategoryViolation::IdentityNotEndo {
                    object: self.objects[o].clone(),
                    identity: m.name.clone(),
                });
            }
        }
        for &(g, f, h) in &self.stray {
            violations.push(CategoryViolation::ComposedNonComposable {
                g: name(g),
                f: name(f),
                composite: name(h),
            });
        }
        let mut typed = true;
        for f in 0..self.morphisms.len() {
            for (k, &g) in self.outgoing[self.target(f)].iter().enumerate() {
                match self.composites[f][k] {
                    None => {
                        typed = false;
                        violations.push(CategoryViolation::MissingComposite {
                            g: name(g),
                            f: name(f),
                        });
                    }
                    Some(h) => {
                        if self.source(h) != self.source(f) || self.target(h) != self.target(g) {
                            typed = false;
                            violations.push(CategoryViolation::CompositeWrongType {
                                g: name(g),
                                f: name(f),
                                composite: name(h),
                            });
                        }
                    }
                }
            }
        }
        for f in 0..self.morphisms.len() {
            let (s, t) = (self.source(f), self.target(f));
            if self.compose(self.identity[t], f) != Some(f) {
                violations.push(CategoryViolation::LeftIdentity { f: name(f) });
            }
            if self.compose(f, self.identity[s]) != Some(f) {
                violations.push(CategoryViolation::RightIdentity { f: name(f) });
            }
        }
        if typed {
            for f in 0..self.morphisms.len() {
                for &g in &self.outgoing[self.target(f)] {
                    let gf = self.compose(g, f).expect("typed table");
                    for &h in &self.outgoing[self.target(g)] {
                        let hg = self.compose(h, g).expect("typed table");
                        if self.compose(hg, f) != self.compose(h, gf) {
                            violations.push(CategoryViolation::Associativity {
                                h: name(h),
                                g: name(g),
                                f: name(f),
                            });
                        }
                    }
                }
            }
        }
        Report { violations }
    }

    /// Same objects and morphism names, arrows reversed, composition transposed.
    pub fn opposite(&self) -> Self {
        let morphisms: Vec<Morphism> = self
            .morphisms
            .iter()
            .map(|m| Morphism {
                name: m.name.clone(),
                source: m.target,
                target: m.source,
            })
            .collect();
        let mut table = Vec::new();
        for f in 0..self.morphisms.len() {
            for &g in &self.outgoing[self.target(f)] {
                if let Some(h) = self.compose(g, f) {
                    // In the opposite category f ∘op g = g ∘ f.
                    table.push((f, g, h));
                }
            }
        }
        Self::from_table(self.objects.clone(), morphisms, self.identity.clone(), table)
    }

    /// Renders the category in the line-oriented text format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for o in &self.objects {
            s.push_str(&format!("object {o}\n"));
        }
        for m in self.non_identities() {
            let mor = &self.morphisms[m];
            s.push_str(&format!(
                "arrow {} : {} -> {}\n",
                mor.name, self.objects[mor.source], self.objects[mor.target]
            ));
        }
        for f in self.non_identities() {
            for &g in &self.outgoing[self.target(f)] {
                if self.is_identity(g) {
                    continue;
                }
                if let Some(h) = self.compose(g, f) {
                    s.push_str(&format!(
                        "compose {} . {} = {}\n",
                        self.morphisms[g].name, self.morphisms[f].name, self.morphisms[h].name
                    ));
                }
            }
        }
        s
    }
}

/// A functor between finite categories, stored as index maps.
#[derive(Clone, Debug)]
pub struct CatFunctor {
    pub source: Arc<FinCategory>,
    pub target: Arc<FinCategory>,
    pub objects: Vec<ObjId>,
    pub morphisms: Vec<MorId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctorViolation {
    WrongArity { detail: String },
    SourceMismatch { morphism: String },
    TargetMismatch { morphism: String },
    Identity { object: String },
    Composition { g: String, f: String },
}

impl fmt::Display for FunctorViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::WrongArity { detail } => write!(out, "{detail}"),
            Self::SourceMismatch { morphism } => write!(out, "source of {morphism} not preserved"),
            Self::TargetMismatch { morphism } => write!(out, "target of {morphism} not preserved"),
            Self::Identity { object } => write!(out, "identity of {object} not preserved"),
            Self::Composition { g, f } => write!(out, "F({g} . {f}) != F({g}) . F({f})"),
        }
    }
}

pub type FunctorReport = Report<FunctorViolation>;

impl CatFunctor {
    pub fn identity(cat: Arc<FinCategory>) -> Self {
        Self {
            objects: (0..cat.num_objects()).collect(),
            morphisms: (0..cat.num_morphisms()).collect(),
            source: cat.clone(),
            target: cat,
        }
    }

    pub fn validate(&self) -> FunctorReport {
        let (src, tgt) = (&self.source, &self.target);
        let mut violations = Vec::new();
        if self.objects.len() != src.num_objects() || self.morphisms.len() != src.num_morphisms() {
            violations.push(FunctorViolation::WrongArity {
                detail: "object or morphism map is not total on the source".into(),
            });
            return Report { violations };
        }
        if self.objects.iter().any(|&o| o >= tgt.num_objects())
            || self.morphisms.iter().any(|&m| m >= tgt.num_morphisms())
        {
            violations.push(FunctorViolation::WrongArity {
                detail: "map points outside the target".into(),
            });
            return Report { violations };
        }
        for (m, mor) in src.morphisms().iter().enumerate() {
            let image = self.morphisms[m];
            if tgt.source(image) != self.objects[mor.source] {
                violations.push(FunctorViolation::SourceMismatch {
                    morphism: mor.name.clone(),
                });
            }
            if tgt.target(image) != self.objects[mor.target] {
                violations.push(FunctorViolation::TargetMismatch {
                    morphism: mor.name.clone(),
                });
            }
        }
        for o in 0..src.num_objects() {
            if self.morphisms[src.identity(o)] != tgt.identity(self.objects[o]) {
                violations.push(FunctorViolation::Identity {
                    object: src.object_name(o).to_string(),
                });
            }
        }
        for f in 0..src.num_morphisms() {
            for &g in src.outgoing(src.target(f)) {
                let Some(gf) = src.compose(g, f) else { continue };
                if tgt.compose(self.morphisms[g], self.morphisms[f]) != Some(self.morphisms[gf]) {
                    violations.push(FunctorViolation::Composition {
                        g: src.morphism(g).name.clone(),
                        f: src.morphism(f).name.clone(),
                    });
                }
            }
        }
        Report { violations }
    }
}

/// Objects, generating arrows, and equations between composable words.
///
/// Words are written in composition order: `[g, f]` is `g ∘ f`. An empty word
/// stands for the identity of the object it is attached to.
#[derive(Clone, Debug, Default)]
pub struct Presentation {
    pub objects: Vec<String>,
    pub arrows: Vec<(String, ObjId, ObjId)>,
    pub relations: Vec<(Word, Word)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    /// Generator indices in composition order (leftmost applied last).
    pub arrows: Vec<usize>,
    /// Object of the identity when `arrows` is empty.
    pub object: Option<ObjId>,
}

impl Word {
    pub fn arrows(arrows: Vec<usize>) -> Self {
        Self { arrows, object: None }
    }

    pub fn identity(object: ObjId) -> Self {
        Self {
            arrows: Vec::new(),
            object: Some(object),
        }
    }
}

impl Presentation {
    fn word_type(&self, w: &Word) -> Result<(ObjId, ObjId)> {
        if w.arrows.is_empty() {
            let o = w
                .object
                .ok_or_else(|| Error::Parse("empty word without an object".into()))?;
            return Ok((o, o));
        }
        // Rightmost arrow is applied first.
        let mut iter = w.arrows.iter().rev();
        let first = &self.arrows[*iter.next().unwrap()];
        let (src, mut cur) = (first.1, first.2);
        for &a in iter {
            let arrow = &self.arrows[a];
            if arrow.1 != cur {
                return Err(Error::Parse(format!("word is not composable at {}", arrow.0)));
            }
            cur = arrow.2;
        }
        Ok((src, cur))
    }

    /// Closes the presentation to a finite category with at most `cap`
    /// morphisms (identities included).
    ///
    /// Equations are oriented by shortlex order on generator indices and
    /// completed to a confluent rewriting system; morphisms are the irreducible
    /// words, so each class is represented by its shortlex-least word.
    pub fn close(&self, cap: usize) -> Result<FinCategory> {
        if cap < self.arrows.len() {
            return Err(Error::CapExceeded(format!(
                "cap {cap} is below the number of generators {}",
                self.arrows.len()
            )));
        }
        let mut rules = Vec::new();
        for (lhs, rhs) in &self.relations {
            let (ls, lt) = self.word_type(lhs)?;
            let (rs, rt) = self.word_type(rhs)?;
            if (ls, lt) != (rs, rt) {
                return Err(Error::Parse("relation between non-parallel words".into()));
            }
            if let Some(rule) = Rule::oriented(lhs.arrows.clone(), rhs.arrows.clone()) {
                rules.push(rule);
            }
        }
        let rules = complete(rules, cap)?;

        // Irreducible words, layer by layer (length, then lexicographic).
        let n = self.objects.len();
        let mut words: Vec<Vec<usize>> = Vec::new();
        let mut types: Vec<(ObjId, ObjId)> = Vec::new();
        let mut index: HashMap<Vec<usize>, MorId> = HashMap::new();
        let mut layer: Vec<Vec<usize>> = (0..self.arrows.len()).map(|a| vec![a]).collect();
        while !layer.is_empty() {
            let mut next = Vec::new();
            for w in layer {
                if reduce(&rules, &w) != w {
                    continue;
                }
                if n + words.len() + 1 > cap {
                    return Err(Error::CapExceeded(format!(
                        "presentation generates more than {cap} morphisms"
                    )));
                }
                let (s, t) = self.word_type(&Word::arrows(w.clone()))?;
                index.insert(w.clone(), words.len());
                words.push(w.clone());
                types.push((s, t));
                for (g, arrow) in self.arrows.iter().enumerate() {
                    if arrow.1 == t {
                        let mut ext = Vec::with_capacity(w.len() + 1);
                        ext.push(g);
                        ext.extend_from_slice(&w);
                        next.push(ext);
                    }
                }
            }
            next.sort();
            next.dedup();
            layer = next;
        }

        let mut morphisms: Vec<Morphism> = self
            .objects
            .iter()
            .enumerate()
            .map(|(i, o)| Morphism {
                name: format!("id_{o}"),
                source: i,
                target: i,
            })
            .collect();
        for (w, &(s, t)) in words.iter().zip(&types) {
            let name = w
                .iter()
                .map(|&a| self.arrows[a].0.as_str())
                .collect::<Vec<_>>()
                .join(".");
            morphisms.push(Morphism { name, source: s, target: t });
        }
        let mut table = Vec::new();
        for (fi, f) in words.iter().enumerate() {
            for (gi, g) in words.iter().enumerate() {
                if types[gi].0 != types[fi].1 {
                    continue;
                }
                let mut gf = g.clone();
                gf.extend_from_slice(f);
                let red = reduce(&rules, &gf);
                let h = if red.is_empty() {
                    types[fi].0
                } else {
                    n + *index.get(&red).ok_or_else(|| {
                        Error::CapExceeded("composite escaped the enumerated words".into())
                    })?
                };
                table.push((n + gi, n + fi, h));
            }
        }
        let cat = FinCategory::from_table(self.objects.clone(), morphisms, (0..n).collect(), table);
        debug_assert!(cat.validate().is_ok());
        Ok(cat)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Rule {
    lhs: Vec<usize>,
    rhs: Vec<usize>,
}

fn shortlex_greater(a: &[usize], b: &[usize]) -> bool {
    a.len() > b.len() || (a.len() == b.len() && a > b)
}

impl Rule {
    fn oriented(a: Vec<usize>, b: Vec<usize>) -> Option<Self> {
        if a == b {
            None
        } else if shortlex_greater(&a, &b) {
            Some(Self { lhs: a, rhs: b })
        } else {
            Some(Self { lhs: b, rhs: a })
        }
    }
}

fn find(hay: &[usize], needle: &[usize]) -> Option<usize> {
    if needle.is_empty() || needle.len() > hay.len() {
        return None;
    }
    hay.windows(needle.len()).position(|w| w == needle)
}

fn reduce(rules: &[Rule], word: &[usize]) -> Vec<usize> {
    let mut w = word.to_vec();
    'outer: loop {
        for r in rules {
            if let Some(at) = find(&w, &r.lhs) {
                w.splice(at..at + r.lhs.len(), r.rhs.iter().copied());
                continue 'outer;
            }
        }
        return w;
    }
}

/// Knuth–Bendix completion for the shortlex order. Gives up once the rule set
/// grows past a bound tied to `cap`.
fn complete(mut rules: Vec<Rule>, cap: usize) -> Result<Vec<Rule>> {
    let limit = 4 * cap + 16;
    loop {
        let mut added = false;
        let snapshot = rules.clone();
        for a in &snapshot {
            for b in &snapshot {
                for (x, y) in critical_pairs(a, b) {
                    let (rx, ry) = (reduce(&rules, &x), reduce(&rules, &y));
                    if let Some(rule) = Rule::oriented(rx, ry) {
                        rules.push(rule);
                        added = true;
                        if rules.len() > limit {
                            return Err(Error::CapExceeded(
                                "rewriting system did not complete within the cap".into(),
                            ));
                        }
                    }
                }
            }
        }
        // Drop rules that the remaining ones already make joinable.
        let mut i = 0;
        while i < rules.len() {
            let others: Vec<Rule> = rules
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, r)| r.clone())
                .collect();
            let r = &rules[i];
            if reduce(&others, &r.lhs) == reduce(&others, &r.rhs) {
                rules.remove(i);
            } else {
                i += 1;
            }
        }
        if !added {
            return Ok(rules);
        }
    }
}

/// Overlaps of two left-hand sides and the two ways to rewrite them.
fn critical_pairs(a: &Rule, b: &Rule) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    // Suffix of a.lhs equals prefix of b.lhs.
    for k in 1..a.lhs.len().min(b.lhs.len()) {
        if a.lhs[a.lhs.len() - k..] == b.lhs[..k] {
            let mut x = a.rhs.clone();
            x.extend_from_slice(&b.lhs[k..]);
            let mut y = a.lhs[..a.lhs.len() - k].to_vec();
            y.extend_from_slice(&b.rhs);
            out.push((x, y));
        }
    }
    // b.lhs strictly inside a.lhs.
    if a.lhs != b.lhs && b.lhs.len() <= a.lhs.len() {
        if let Some(at) = find(&a.lhs, &b.lhs) {
            let mut y = a.lhs[..at].to_vec();
            y.extend_from_slice(&b.rhs);
            y.extend_from_slice(&a.lhs[at + b.lhs.len()..]);
            out.push((a.rhs.clone(), y));
        }
    }
    out
}

/// Built-in signature categories.
pub mod builtin {
    use super::*;

    /// Two objects `V`, `E` and arrows `s, t : E -> V` (multidigraphs).
    pub fn digraph() -> FinCategory {
        FinCategory::composition_free(
            vec!["V".into(), "E".into()],
            vec![("s".into(), 1, 0), ("t".into(), 1, 0)],
        )
    }

    /// `V`, `E`, `s, t : E -> V` and the edge reversal `r : E -> E` with
    /// `r.r = id_E`, `s.r = t`, `t.r = s` (multigraphs).
    pub fn graph() -> FinCategory {
        Presentation {
            objects: vec!["V".into(), "E".into()],
            arrows: vec![("s".into(), 1, 0), ("t".into(), 1, 0), ("r".into(), 1, 1)],
            relations: vec![
                (Word::arrows(vec![2, 2]), Word::identity(1)),
                (Word::arrows(vec![0, 2]), Word::arrows(vec![1])),
                (Word::arrows(vec![1, 2]), Word::arrows(vec![0])),
            ],
        }
        .close(16)
        .expect("graph presentation is finite")
    }

    /// The one-object category of a finite monoid given by its multiplication
    /// table (`table[a][b] = a * b`, element 0 the unit).
    pub fn monoid(names: &[&str], table: &[Vec<usize>]) -> FinCategory {
        let morphisms = names
            .iter()
            .map(|n| Morphism {
                name: n.to_string(),
                source: 0,
                target: 0,
            })
            .collect();
        let mut compose = Vec::new();
        for (a, row) in table.iter().enumerate() {
            for (b, &ab) in row.iter().enumerate() {
                compose.push((a, b, ab));
            }
        }
        FinCategory::from_table(vec!["*".into()], morphisms, vec![0], compose)
    }
}

/// Parses the category text format.
///
/// ```text
/// object V
/// object E
/// arrow s : E -> V
/// arrow t : E -> V
/// compose g . f = h        # explicit table entry (g after f)
/// relation r . r = id_E    # presentation equation
/// ```
///
/// Identities are named `id_<object>`. Without any `compose` line the file is
/// read as a presentation and closed with [`Presentation::close`]; otherwise
/// every composable pair of non-identity arrows needs a `compose` line.
pub fn parse_category(text: &str, cap: usize) -> Result<FinCategory> {
    let mut objects: Vec<String> = Vec::new();
    let mut arrows: Vec<(String, ObjId, ObjId)> = Vec::new();
    let mut composes: Vec<(String, String, String, usize)> = Vec::new();
    let mut relations: Vec<(String, String, usize)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let lineno = lineno + 1;
        let err = |msg: &str| Error::Parse(format!("line {lineno}: {msg}"));
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match kw {
            "object" => {
                if rest.is_empty() || rest.contains(char::is_whitespace) {
                    return Err(err("expected `object <name>`"));
                }
                if objects.iter().any(|o| o == rest) {
                    return Err(err("duplicate object"));
                }
                objects.push(rest.to_string());
            }
            "arrow" => {
                let (name, ty) = split_spaced(rest, ':').ok_or_else(|| err("expected `arrow <name> : <src> -> <tgt>`"))?;
                let (src, tgt) = ty.split_once("->").ok_or_else(|| err("expected `->`"))?;
                let name = name.trim().to_string();
                let find = |o: &str| {
                    objects
                        .iter()
                        .position(|x| x == o.trim())
                        .ok_or_else(|| err(&format!("unknown object {}", o.trim())))
                };
                let (s, t) = (find(src)?, find(tgt)?);
                if arrows.iter().any(|a| a.0 == name) || name.starts_with("id_") {
                    return Err(err("duplicate or reserved arrow name"));
                }
                arrows.push((name, s, t));
            }
            "compose" => {
                let (lhs, h) = rest.split_once('=').ok_or_else(|| err("expected `compose g . f = h`"))?;
                let (g, f) = split_spaced(lhs, '.').ok_or_else(|| err("expected `g . f`"))?;
                composes.push((g.trim().into(), f.trim().into(), h.trim().into(), lineno));
            }
            "relation" => {
                let (l, r) = rest.split_once('=').ok_or_else(|| err("expected `relation <word> = <word>`"))?;
                relations.push((l.trim().into(), r.trim().into(), lineno));
            }
            _ => return Err(err(&format!("unknown keyword `{kw}`"))),
        }
    }

    if composes.is_empty() {
        let word = |w: &str, lineno: usize| -> Result<Word> {
            let mut out = Vec::new();
            let mut ident = None;
            for part in w.split('.') {
                let part = part.trim();
                if let Some(o) = part.strip_prefix("id_") {
                    let o = objects
                        .iter()
                        .position(|x| x == o)
                        .ok_or_else(|| Error::Parse(format!("line {lineno}: unknown object {o}")))?;
                    ident = Some(o);
                    continue;
                }
                let a = arrows
                    .iter()
                    .position(|a| a.0 == part)
                    .ok_or_else(|| Error::Parse(format!("line {lineno}: unknown arrow {part}")))?;
                out.push(a);
            }
            Ok(Word { arrows: out, object: ident })
        };
        let mut rels = Vec::new();
        for (l, r, lineno) in &relations {
            rels.push((word(l, *lineno)?, word(r, *lineno)?));
        }
        return Presentation {
            objects,
            arrows,
            relations: rels,
        }
        .close(cap);
    }
    if !relations.is_empty() {
        return Err(Error::Parse("`compose` and `relation` lines cannot be mixed".into()));
    }
    let n = objects.len();
    let mut morphisms: Vec<Morphism> = objects
        .iter()
        .enumerate()
        .map(|(i, o)| Morphism {
            name: format!("id_{o}"),
            source: i,
            target: i,
        })
        .collect();
    morphisms.extend(arrows.iter().map(|(name, s, t)| Morphism {
        name: name.clone(),
        source: *s,
        target: *t,
    }));
    let lookup = |name: &str, lineno: usize| {
        morphisms
            .iter()
            .position(|m| m.name == name)
            .ok_or_else(|| Error::Parse(format!("line {lineno}: unknown arrow {name}")))
    };
    let mut table = Vec::new();
    for (g, f, h, lineno) in &composes {
        table.push((lookup(g, *lineno)?, lookup(f, *lineno)?, lookup(h, *lineno)?));
    }
    FinCategory::new(objects, morphisms, (0..n).collect(), table)
}

/// Splits at ` sep ` when present, else at the first `sep`, so that names
/// may contain the separator character.
pub(crate) fn split_spaced(s: &str, sep: char) -> Option<(&str, &str)> {
    let spaced = format!(" {sep} ");
    s.split_once(spaced.as_str()).or_else(|| s.split_once(sep))
}

pub(crate) fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}
