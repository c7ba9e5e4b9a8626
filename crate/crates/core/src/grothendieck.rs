//! The category of elements `gr` and its left adjoint `gl`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::copresheaf::{checked_pow, same_base, tuple_at, tuple_index, Copresheaf, FinSet};
use crate::error::{Error, Result};
use crate::fincat::{parse_category, split_spaced, strip_comment, CatFunctor, FinCategory, Morphism, ObjId};
use crate::findiag::{quotient, FinDiagram, Func};
use crate::kan::Minion;

/// `gr X` with its projection to the base.
#[derive(Clone, Debug)]
pub struct ElementsCategory {
    pub category: Arc<FinCategory>,
    pub projection: CatFunctor,
    /// `(base object, element)` of each object, in object order.
    pub elements: Vec<(ObjId, usize)>,
}

impl ElementsCategory {
    pub fn object_of(&self, s: ObjId, x: usize) -> ObjId {
        self.elements
            .binary_search(&(s, x))
            .expect("element of the copresheaf")
    }
}

/// The category of elements. Objects `(s, x)` are ordered by base object then
/// element and named `s:x`; morphisms `(f, (s, x))` are listed per object in
/// the base's outgoing order and named `f@s:x`.
pub fn gr(x: &Copresheaf) -> ElementsCategory {
    let base = x.base();
    let mut elements = Vec::with_capacity(x.num_elements());
    let mut names = Vec::with_capacity(x.num_elements());
    let mut first = vec![0; base.num_objects() + 1];
    for s in 0..base.num_objects() {
        first[s] = elements.len();
        for e in 0..x.set(s).len() {
            elements.push((s, e));
            names.push(format!("{}:{}", base.object_name(s), x.set(s).name(e)));
        }
    }
    first[base.num_objects()] = elements.len();
    let obj = |s: ObjId, e: usize| first[s] + e;

    // Morphisms of object (s, e) start at block[obj(s, e)].
    let mut block = Vec::with_capacity(elements.len());
    let mut morphisms = Vec::new();
    let mut proj_mor = Vec::new();
    for (i, &(s, e)) in elements.iter().enumerate() {
        block.push(morphisms.len());
        for &f in base.outgoing(s) {
            let t = base.target(f);
            morphisms.push(Morphism {
                name: format!("{}@{}", base.morphism(f).name, names[i]),
                source: i,
                target: obj(t, x.function(f)[e]),
            });
            proj_mor.push(f);
        }
    }
    let pos_in_out = |s: ObjId, f: usize| {
        base.outgoing(s)
            .iter()
            .position(|&g| g == f)
            .expect("outgoing morphism")
    };
    let mut out_pos: Vec<Vec<usize>> = vec![Vec::new(); base.num_objects()];
    for s in 0..base.num_objects() {
        let mut v = vec![0; base.num_morphisms()];
        for &f in base.outgoing(s) {
            v[f] = pos_in_out(s, f);
        }
        out_pos[s] = v;
    }
    let identity: Vec<usize> = elements
        .iter()
        .enumerate()
        .map(|(i, &(s, _))| block[i] + out_pos[s][base.identity(s)])
        .collect();
    let mut table = Vec::new();
    for (m, mor) in morphisms.iter().enumerate() {
        let f = proj_mor[m];
        let (s, _) = elements[mor.source];
        let (t, _) = elements[mor.target];
        for &g in base.outgoing(t) {
            let gm = block[mor.target] + out_pos[t][g];
            let gf = base.compose(g, f).expect("composable");
            table.push((gm, m, block[mor.source] + out_pos[s][gf]));
        }
    }
    let category = Arc::new(FinCategory::from_table(names, morphisms, identity, table));
    let projection = CatFunctor {
        source: category.clone(),
        target: base.clone(),
        objects: elements.iter().map(|&(s, _)| s).collect(),
        morphisms: proj_mor,
    };
    ElementsCategory {
        category,
        projection,
        elements,
    }
}

/// The diagram `A ∘ gr I`.
pub fn template_condition(a: &Copresheaf, i: &Copresheaf) -> Result<FinDiagram> {
    if !same_base(a.base(), i.base()) {
        return Err(Error::BaseMismatch("template and instance bases differ".into()));
    }
    let el = gr(i);
    Ok(a.precompose(&el.projection)?.into_diagram())
}

/// `gl D = colim (yo ∘ D^op)`, computed componentwise: at `t` the quotient
/// of the disjoint union of the sets `hom(D(i), t)`.
pub fn gl(d: &CatFunctor) -> Result<Copresheaf> {
    let report = d.validate();
    if !report.is_ok() {
        return Err(Error::InvalidFunctor(report.to_string()));
    }
    let (j, s) = (&d.source, &d.target);
    let jop = Arc::new(j.opposite());
    let mut sets = Vec::with_capacity(s.num_objects());
    // Per target object t: class of (i, g) for g in hom(D(i), t).
    let mut class_of: Vec<Vec<Func>> = Vec::with_capacity(s.num_objects());
    let mut homs: Vec<Vec<Vec<usize>>> = Vec::with_capacity(s.num_objects());
    let mut reps_all = Vec::with_capacity(s.num_objects());
    for t in 0..s.num_objects() {
        let hom_t: Vec<Vec<usize>> = (0..j.num_objects()).map(|i| s.hom(d.objects[i], t)).collect();
        let index_in = |i: ObjId, g: usize| hom_t[i].iter().position(|&h| h == g).expect("in hom set");
        let functions: Vec<Func> = (0..j.num_morphisms())
            .map(|u| {
                // u: i -> k in J is k -> i in J^op; sends g to g ∘ D(u).
                let (i, k) = (j.source(u), j.target(u));
                hom_t[k]
                    .iter()
                    .map(|&g| index_in(i, s.compose(g, d.morphisms[u]).expect("composable")))
                    .collect()
            })
            .collect();
        let diagram = FinDiagram {
            shape: jop.clone(),
            sets: hom_t
                .iter()
                .map(|ms| FinSet::named(ms.iter().map(|&m| s.morphism(m).name.clone())))
                .collect(),
            functions,
        };
        let q = diagram.colimit();
        sets.push(q.carrier.materialize());
        class_of.push(q.injections);
        reps_all.push(q.representatives);
        homs.push(hom_t);
    }
    let functions = (0..s.num_morphisms())
        .map(|h| {
            let (t, t2) = (s.source(h), s.target(h));
            reps_all[t]
                .iter()
                .map(|&(i, gi)| {
                    let g = homs[t][i][gi];
                    let hg = s.compose(h, g).expect("composable");
                    let idx = homs[t2][i].iter().position(|&m| m == hg).expect("in hom set");
                    class_of[t2][i][idx]
                })
                .collect()
        })
        .collect();
    Copresheaf::new(s.clone(), sets, functions)
}

/// Quotient data of `gl D` evaluated at a set of size `k`.
#[derive(Debug)]
struct GlLevel {
    /// Per object `i`, class of each function `D(i) → [k]` by tuple index.
    class_of: Vec<Func>,
    representatives: Vec<(ObjId, usize)>,
}

/// `gl D` for a diagram `D: J → Fin`, as a functor `Fin → Fin`:
/// `(gl D)(N)` is the colimit over `J^op` of the sets `N^{D(i)}`, where an
/// arrow `u: i → j` identifies `g: D(j) → N` with `g ∘ D(u)`.
pub struct GlMinion {
    diagram: FinDiagram,
    cap: usize,
    cache: Mutex<HashMap<usize, Arc<GlLevel>>>,
}

impl GlMinion {
    pub fn new(diagram: FinDiagram, cap: usize) -> Self {
        Self {
            diagram,
            cap,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn diagram(&self) -> &FinDiagram {
        &self.diagram
    }

    fn level(&self, k: usize) -> Result<Arc<GlLevel>> {
        if let Some(l) = self.cache.lock().unwrap().get(&k) {
            return Ok(l.clone());
        }
        let d = &self.diagram;
        let shape = &d.shape;
        let sizes: Vec<usize> = d
            .sets
            .iter()
            .map(|s| checked_pow(k, s.len(), self.cap, "exponential"))
            .collect::<Result<_>>()?;
        let tables: Vec<(ObjId, ObjId, Func)> = shape
            .non_identities()
            .map(|u| {
                let (i, j) = (shape.source(u), shape.target(u));
                let du = d.function(u);
                let (ni, nj) = (d.sets[i].len(), d.sets[j].len());
                let table = (0..sizes[j])
                    .map(|g| {
                        let g = tuple_at(g, k, nj);
                        tuple_index((0..ni).map(|x| g[du[x]]), k)
                    })
                    .collect();
                (j, i, table)
            })
            .collect();
        let (class_of, representatives) =
            quotient(&sizes, tables.iter().map(|(a, b, t)| (*a, *b, &t[..])));
        let level = Arc::new(GlLevel {
            class_of,
            representatives,
        });
        self.cache.lock().unwrap().insert(k, level.clone());
        Ok(level)
    }

    /// Class of `(i, g)` in `(gl D)([k])`, `g` given by its images.
    pub fn class(&self, k: usize, i: ObjId, g: &[usize]) -> Result<usize> {
        Ok(self.level(k)?.class_of[i][tuple_index(g.iter().copied(), k)])
    }

    /// Representative `(i, g)` of each class in `(gl D)([k])`.
    pub fn representatives(&self, k: usize) -> Result<Vec<(ObjId, Vec<usize>)>> {
        let level = self.level(k)?;
        Ok(level
            .representatives
            .iter()
            .map(|&(i, g)| (i, tuple_at(g, k, self.diagram.sets[i].len())))
            .collect())
    }
}

/// Canonical name of the class of `(i, g)`: `object:(g(0),g(1),…)`.
pub fn class_name(object: &str, images: impl IntoIterator<Item = String>) -> String {
    let parts: Vec<String> = images.into_iter().collect();
    format!("{object}:({})", parts.join(","))
}

impl Minion for GlMinion {
    fn eval(&self, n: &FinSet) -> Result<FinSet> {
        let level = self.level(n.len())?;
        let objects: Vec<String> = self.diagram.shape.objects().to_vec();
        let widths: Vec<usize> = self.diagram.sets.iter().map(FinSet::len).collect();
        let n = n.clone();
        let k = n.len();
        let level2 = level.clone();
        Ok(FinSet::lazy(level.representatives.len(), move |c| {
            let (i, g) = level2.representatives[c];
            let g = tuple_at(g, k, widths[i]);
            class_name(&objects[i], g.iter().map(|&y| n.name(y).into_owned()))
        }))
    }

    fn action(&self, n: &FinSet, m: &FinSet, pi: &[usize]) -> Result<Func> {
        let (from, to) = (self.level(n.len())?, self.level(m.len())?);
        let (kn, km) = (n.len(), m.len());
        Ok(from
            .representatives
            .iter()
            .map(|&(i, g)| {
                let width = self.diagram.sets[i].len();
                let g = tuple_at(g, kn, width);
                to.class_of[i][tuple_index(g.iter().map(|&y| pi[y]), km)]
            })
            .collect())
    }
}

/// Parses a functor into `base` written as a category whose objects and
/// arrows carry their images:
///
/// ```text
/// object a : E
/// object c : V
/// arrow u : a -> c = s
/// ```
///
/// `compose` and `relation` lines are as in the category format.
pub fn parse_instance(text: &str, base: Arc<FinCategory>, cap: usize) -> Result<CatFunctor> {
    let mut plain = String::new();
    let mut object_images: Vec<(String, String)> = Vec::new();
    let mut arrow_images: Vec<(String, String)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        let err = |msg: &str| Error::Parse(format!("line {}: {msg}", lineno + 1));
        if let Some(rest) = line.strip_prefix("object ") {
            let (name, image) = split_spaced(rest, ':').ok_or_else(|| err("expected `object <name> : <base object>`"))?;
            plain.push_str(&format!("object {}\n", name.trim()));
            object_images.push((name.trim().into(), image.trim().into()));
        } else if let Some(rest) = line.strip_prefix("arrow ") {
            let (decl, image) = rest.rsplit_once('=').ok_or_else(|| err("expected `arrow f : a -> b = <base morphism>`"))?;
            let name = split_spaced(decl, ':').map_or(decl, |(n, _)| n).trim();
            plain.push_str(&format!("arrow {}\n", decl.trim()));
            arrow_images.push((name.into(), image.trim().into()));
        } else if line.starts_with("base ") {
            continue;
        } else {
            plain.push_str(line);
            plain.push('\n');
        }
    }
    let j = Arc::new(parse_category(&plain, cap)?);
    let mut objects = vec![0; j.num_objects()];
    for (name, image) in &object_images {
        let o = j.object_id(name).expect("declared object");
        objects[o] = base
            .object_id(image)
            .ok_or_else(|| Error::Parse(format!("unknown base object {image}")))?;
    }
    let mut morphisms = vec![usize::MAX; j.num_morphisms()];
    for o in 0..j.num_objects() {
        morphisms[j.identity(o)] = base.identity(objects[o]);
    }
    for (name, image) in &arrow_images {
        let m = j.morphism_id(name).expect("declared arrow");
        morphisms[m] = base
            .morphism_id(image)
            .ok_or_else(|| Error::UnknownMorphism(image.clone()))?;
    }
    // Composite morphisms of a closed presentation get the composite image.
    loop {
        let mut progress = false;
        for f in 0..j.num_morphisms() {
            if morphisms[f] == usize::MAX {
                continue;
            }
            for &g in j.outgoing(j.target(f)) {
                let gf = j.compose(g, f).expect("total");
                if morphisms[g] != usize::MAX && morphisms[gf] == usize::MAX {
                    if let Some(h) = base.compose(morphisms[g], morphisms[f]) {
                        morphisms[gf] = h;
                        progress = true;
                    }
                }
            }
        }
        if !progress {
            break;
        }
    }
    if morphisms.contains(&usize::MAX) {
        return Err(Error::InvalidFunctor("some morphisms have no image".into()));
    }
    let f = CatFunctor {
        source: j,
        target: base,
        objects,
        morphisms,
    };
    let report = f.validate();
    if !report.is_ok() {
        return Err(Error::InvalidFunctor(report.to_string()));
    }
    Ok(f)
}

/// Text form of a functor into a base, readable by [`parse_instance`].
pub fn instance_to_text(f: &CatFunctor, base_ref: &str) -> String {
    let (j, s) = (&f.source, &f.target);
    let mut out = format!("base {base_ref}\n");
    for o in 0..j.num_objects() {
        out.push_str(&format!(
            "object {} : {}\n",
            j.object_name(o),
            s.object_name(f.objects[o])
        ));
    }
    for m in j.non_identities() {
        let mor = j.morphism(m);
        out.push_str(&format!(
            "arrow {} : {} -> {} = {}\n",
            mor.name,
            j.object_name(mor.source),
            j.object_name(mor.target),
            s.morphism(f.morphisms[m]).name
        ));
    }
    for fm in j.non_identities() {
        for &g in j.outgoing(j.target(fm)) {
            if j.is_identity(g) {
                continue;
            }
            let h = j.compose(g, fm).expect("total");
            out.push_str(&format!(
                "compose {} . {} = {}\n",
                j.morphism(g).name,
                j.morphism(fm).name,
                j.morphism(h).name
            ));
        }
    }
    out
}
