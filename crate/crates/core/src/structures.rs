//! Relational structures, primitive positive formulas and interpretations,
//! and their translations to copresheaves and gadgets.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::copresheaf::{
    checked_pow, parse_braced_list, split_top_level, tuple_at, tuple_index, Copresheaf, FinSet,
};
use crate::error::{Error, Result};
use crate::fincat::{strip_comment, CatFunctor, FinCategory, ObjId};
use crate::findiag::{identity_func, Func, UnionFind};
use crate::kan::GadgetFunctor;

/// Relation symbols with arities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub symbols: Vec<(String, usize)>,
}

impl Signature {
    pub fn new(symbols: Vec<(String, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (name, arity) in &symbols {
            if *arity == 0 {
                return Err(Error::Parse(format!("symbol {name} has arity 0")));
            }
            if name == "V" || !seen.insert(name.clone()) {
                return Err(Error::Parse(format!("duplicate or reserved symbol {name}")));
            }
        }
        Ok(Self { symbols })
    }

    /// Parses `E/2, R/3`.
    pub fn parse_list(s: &str) -> Result<Self> {
        let mut symbols = Vec::new();
        for part in s.split([',', ' ']).map(str::trim).filter(|p| !p.is_empty()) {
            let (name, arity) = part
                .split_once('/')
                .ok_or_else(|| Error::Parse(format!("expected `name/arity`, got `{part}`")))?;
            let arity = arity
                .parse()
                .map_err(|_| Error::Parse(format!("bad arity in `{part}`")))?;
            symbols.push((name.to_string(), arity));
        }
        Self::new(symbols)
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.symbols.iter().find(|(n, _)| n == name).map(|(_, a)| *a)
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|(n, _)| n == name)
    }

    /// Object `V`, one object per symbol, and projections `R.1 … R.k`.
    pub fn category(&self) -> FinCategory {
        let mut objects = vec!["V".to_string()];
        let mut arrows = Vec::new();
        for (i, (name, arity)) in self.symbols.iter().enumerate() {
            objects.push(name.clone());
            for k in 1..=*arity {
                arrows.push((format!("{name}.{k}"), i + 1, 0));
            }
        }
        FinCategory::composition_free(objects, arrows)
    }

    /// Reads a signature off a category shaped like [`Signature::category`]:
    /// one object receiving every non-identity arrow and sending none, every
    /// other object sending at least one arrow to it. Arities follow
    /// declaration order of the arrows.
    pub fn from_category(cat: &FinCategory) -> Result<(Self, ObjId)> {
        let bad = |m: &str| Error::BaseShape(m.to_string());
        if !cat.is_composition_free() {
            return Err(bad("arrows compose"));
        }
        let targets: BTreeSet<ObjId> = cat.non_identities().map(|m| cat.target(m)).collect();
        let v = match targets.len() {
            1 => *targets.iter().next().unwrap(),
            0 if cat.num_objects() == 1 => 0,
            _ => return Err(bad("arrows do not share one target")),
        };
        let mut symbols = Vec::new();
        for o in 0..cat.num_objects() {
            if o == v {
                continue;
            }
            let arity = cat.outgoing(o).iter().filter(|&&m| !cat.is_identity(m)).count();
            if arity == 0 {
                return Err(bad("an object other than the domain has no projections"));
            }
            symbols.push((cat.object_name(o).to_string(), arity));
        }
        let sig = Signature { symbols };
        Ok((sig, v))
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.symbols.iter().map(|(n, a)| format!("{n}/{a}")).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// A finite relational structure; each relation is a sorted set of tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationalStructure {
    pub signature: Signature,
    pub domain: FinSet,
    pub relations: Vec<Vec<Vec<usize>>>,
}

impl RelationalStructure {
    /// Sorts and deduplicates the tuples.
    pub fn new(signature: Signature, domain: FinSet, relations: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        if relations.len() != signature.symbols.len() {
            return Err(Error::Parse("one relation per symbol expected".into()));
        }
        let mut rels = Vec::with_capacity(relations.len());
        for ((name, arity), mut r) in signature.symbols.iter().zip(relations) {
            if r.iter().any(|t| t.len() != *arity || t.iter().any(|&x| x >= domain.len())) {
                return Err(Error::Parse(format!("bad tuple in relation {name}")));
            }
            r.sort();
            r.dedup();
            rels.push(r);
        }
        Ok(Self {
            signature,
            domain,
            relations: rels,
        })
    }

    /// Undirected simple graph with both orientations of each edge.
    pub fn graph(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut r = Vec::new();
        for &(u, v) in edges {
            r.push(vec![u, v]);
            r.push(vec![v, u]);
        }
        Self::new(
            Signature::new(vec![("E".into(), 2)]).expect("valid"),
            FinSet::range(n),
            vec![r],
        )
        .expect("edges in range")
    }

    pub fn relation(&self, name: &str) -> Option<&[Vec<usize>]> {
        self.signature.index(name).map(|i| &self.relations[i][..])
    }

    /// ```text
    /// domain {a, b, c}
    /// rel E/2 = {(a,b), (b,c)}
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut domain: Option<(FinSet, HashMap<String, usize>)> = None;
        let mut symbols = Vec::new();
        let mut relations = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let err = |m: String| Error::Parse(format!("line {}: {m}", lineno + 1));
            let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            match kw {
                "domain" => {
                    let names = parse_braced_list(rest.trim()).map_err(err)?;
                    let index = names.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
                    domain = Some((FinSet::named(names), index));
                }
                "rel" => {
                    let (_, index) = domain.as_ref().ok_or_else(|| err("`rel` before `domain`".into()))?;
                    let (head, body) = rest.split_once('=').ok_or_else(|| err("expected `rel R/k = {...}`".into()))?;
                    let (name, arity) = head
                        .trim()
                        .split_once('/')
                        .ok_or_else(|| err("expected `R/k`".into()))?;
                    let arity: usize = arity.trim().parse().map_err(|_| err("bad arity".into()))?;
                    let mut tuples = Vec::new();
                    for t in parse_braced_list(body.trim()).map_err(err)? {
                        let inner = t
                            .strip_prefix('(')
                            .and_then(|t| t.strip_suffix(')'))
                            .ok_or_else(|| err(format!("expected a tuple, got `{t}`")))?;
                        let tuple = split_top_level(inner, ',')
                            .into_iter()
                            .map(|x| index.get(x.trim()).copied().ok_or_else(|| err(format!("unknown element `{}`", x.trim()))))
                            .collect::<Result<Vec<_>>>()?;
                        if tuple.len() != arity {
                            return Err(err(format!("tuple `{t}` has the wrong width")));
                        }
                        tuples.push(tuple);
                    }
                    symbols.push((name.trim().to_string(), arity));
                    relations.push(tuples);
                }
                _ => return Err(err(format!("unknown keyword `{kw}`"))),
            }
        }
        let (domain, _) = domain.ok_or_else(|| Error::Parse("missing `domain` line".into()))?;
        Self::new(Signature::new(symbols)?, domain, relations)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("domain {}\n", self.domain);
        for ((name, arity), r) in self.signature.symbols.iter().zip(&self.relations) {
            let tuples: Vec<String> = r
                .iter()
                .map(|t| {
                    let parts: Vec<String> = t.iter().map(|&x| self.domain.name(x).into_owned()).collect();
                    format!("({})", parts.join(","))
                })
                .collect();
            s.push_str(&format!("rel {name}/{arity} = {{{}}}\n", tuples.join(", ")));
        }
        s
    }

    /// The copresheaf over the signature category: the domain at `V`, the
    /// tuples of `R` at `R`, coordinate projections along `R.i`.
    pub fn to_copresheaf(&self) -> Copresheaf {
        self.to_copresheaf_over(Arc::new(self.signature.category()))
    }

    /// As [`RelationalStructure::to_copresheaf`] over a given copy of the
    /// signature category.
    pub fn to_copresheaf_over(&self, base: Arc<FinCategory>) -> Copresheaf {
        let mut sets = vec![self.domain.clone()];
        for r in &self.relations {
            let dom = self.domain.clone();
            let r2 = r.clone();
            sets.push(FinSet::lazy(r.len(), move |i| {
                let parts: Vec<String> = r2[i].iter().map(|&x| dom.name(x).into_owned()).collect();
                format!("({})", parts.join(","))
            }));
        }
        let mut functions: Vec<Func> = sets.iter().map(|s| identity_func(s.len())).collect();
        for (r, (_, arity)) in self.relations.iter().zip(&self.signature.symbols) {
            for k in 0..*arity {
                functions.push(r.iter().map(|t| t[k]).collect());
            }
        }
        Copresheaf::from_parts(base, sets, functions)
    }

    /// Single-sorted copy of a structure: the relation of each symbol.
    pub fn from_copresheaf(a: &Copresheaf) -> Result<Self> {
        let base = a.base();
        let (sig, v) = Signature::from_category(base)?;
        let mut relations = Vec::new();
        for o in (0..base.num_objects()).filter(|&o| o != v) {
            let projections: Vec<usize> = base
                .outgoing(o)
                .iter()
                .copied()
                .filter(|&m| !base.is_identity(m))
                .collect();
            let tuples = (0..a.set(o).len())
                .map(|e| projections.iter().map(|&p| a.function(p)[e]).collect())
                .collect();
            relations.push(tuples);
        }
        Self::new(sig, a.set(v).clone(), relations)
    }
}

/// The ▵ translation.
pub fn to_copresheaf(a: &RelationalStructure) -> Copresheaf {
    a.to_copresheaf()
}

/// The ▿ translation: collapses parallel relation elements into tuple sets.
pub fn to_structure(a: &Copresheaf) -> Result<RelationalStructure> {
    RelationalStructure::from_copresheaf(a)
}

/// The single-sorted encoding: domain `∏_s A(s)` (tuples in lexicographic
/// order, coordinates in object order), and for each morphism `π: s → t` the
/// binary relation `E_π = {(a, b) : A(π)(a_s) = b_t}`.
pub fn single_sorted(a: &Copresheaf, cap: usize) -> Result<RelationalStructure> {
    let base = a.base();
    let sizes: Vec<usize> = a.sets().iter().map(FinSet::len).collect();
    let mut total: usize = 1;
    for &s in &sizes {
        total = total
            .checked_mul(s)
            .filter(|&t| t <= cap)
            .ok_or_else(|| Error::SizeCap(format!("product of component sizes exceeds {cap}")))?;
    }
    let decode = |mut i: usize| {
        let mut out = vec![0; sizes.len()];
        for o in (0..sizes.len()).rev() {
            out[o] = i % sizes[o];
            i /= sizes[o];
        }
        out
    };
    let elements: Vec<Vec<usize>> = (0..total).map(decode).collect();
    let mut by_coord: Vec<Vec<Vec<usize>>> = sizes.iter().map(|&s| vec![Vec::new(); s]).collect();
    for (i, e) in elements.iter().enumerate() {
        for (o, &x) in e.iter().enumerate() {
            by_coord[o][x].push(i);
        }
    }
    let mut symbols = Vec::new();
    let mut relations = Vec::new();
    for (m, mor) in base.morphisms().iter().enumerate() {
        let f = a.function(m);
        let mut tuples = Vec::new();
        for (i, e) in elements.iter().enumerate() {
            for &j in &by_coord[mor.target][f[e[mor.source]]] {
                tuples.push(vec![i, j]);
            }
        }
        symbols.push((format!("E_{}", mor.name), 2));
        relations.push(tuples);
    }
    let sets = a.sets().to_vec();
    let domain = FinSet::lazy(total, move |i| {
        let mut idx = i;
        let mut parts = vec![String::new(); sets.len()];
        for o in (0..sets.len()).rev() {
            let n = sets[o].len();
            parts[o] = sets[o].name(idx % n).into_owned();
            idx /= n;
        }
        format!("({})", parts.join(","))
    });
    RelationalStructure::new(Signature::new(symbols)?, domain, relations)
}

/// A pp-formula variable with an optional sort annotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Var {
    pub name: String,
    pub sort: Option<String>,
}

impl Var {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            sort: None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.sort {
            Some(s) => write!(f, "{}:{}", self.name, s),
            None => write!(f, "{}", self.name),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    /// `R(x1, …, xk)`.
    Rel { symbol: String, args: Vec<String> },
    /// `x = y`.
    Eq(String, String),
    /// `f(x) = y`.
    Func { morphism: String, arg: String, value: String },
}

impl Atom {
    pub fn vars(&self) -> Vec<&str> {
        match self {
            Atom::Rel { args, .. } => args.iter().map(String::as_str).collect(),
            Atom::Eq(a, b) => vec![a, b],
            Atom::Func { arg, value, .. } => vec![arg, value],
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Rel { symbol, args } => write!(f, "{symbol}({})", args.join(",")),
            Atom::Eq(a, b) => write!(f, "{a} = {b}"),
            Atom::Func { morphism, arg, value } => write!(f, "{morphism}({arg}) = {value}"),
        }
    }
}

/// `[free] exists bound . atom & atom & …`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PPFormula {
    pub free: Vec<Var>,
    pub exists: Vec<Var>,
    pub atoms: Vec<Atom>,
}

impl fmt::Display for PPFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let free: Vec<String> = self.free.iter().map(ToString::to_string).collect();
        write!(f, "[{}] ", free.join(","))?;
        if !self.exists.is_empty() {
            let ex: Vec<String> = self.exists.iter().map(ToString::to_string).collect();
            write!(f, "exists {} . ", ex.join(" "))?;
        }
        if self.atoms.is_empty() {
            return write!(f, "true");
        }
        let atoms: Vec<String> = self.atoms.iter().map(ToString::to_string).collect();
        write!(f, "{}", atoms.join(" & "))
    }
}

fn tokenize(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in s.chars() {
        if c.is_alphanumeric() || matches!(c, '_' | '\'' | '.' | ':' | '-') {
            cur.push(c);
        } else {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            if !c.is_whitespace() {
                out.push(c.to_string());
            }
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn parse_var(tok: &str) -> Var {
    match tok.split_once(':') {
        Some((n, s)) => Var {
            name: n.to_string(),
            sort: Some(s.to_string()),
        },
        None => Var::new(tok),
    }
}

impl PPFormula {
    /// Parses `[x,y] exists u v . E(x,u) & E(u,v) & x = y`; the free list,
    /// the quantifier prefix, and sort annotations `v:V` are optional. Without
    /// a free list, variables not bound by `exists` are free in order of
    /// appearance. `f(x) = y` is a functional atom; `true` is the empty
    /// conjunction.
    pub fn parse(s: &str) -> Result<Self> {
        let toks = tokenize(s.trim());
        let err = |m: &str| Error::Parse(format!("formula: {m}"));
        let mut i = 0;
        let mut free: Option<Vec<Var>> = None;
        if toks.first().map(String::as_str) == Some("[") {
            let mut vars = Vec::new();
            i = 1;
            while i < toks.len() && toks[i] != "]" {
                if toks[i] != "," {
                    vars.push(parse_var(&toks[i]));
                }
                i += 1;
            }
            if i == toks.len() {
                return Err(err("unterminated free variable list"));
            }
            i += 1;
            free = Some(vars);
        }
        let mut exists = Vec::new();
        if toks.get(i).map(String::as_str) == Some("exists") {
            i += 1;
            loop {
                let t = toks.get(i).ok_or_else(|| err("missing `.` after quantifier"))?;
                i += 1;
                if t == "." {
                    break;
                }
                if let Some(stripped) = t.strip_suffix('.') {
                    exists.push(parse_var(stripped));
                    break;
                }
                exists.push(parse_var(t));
            }
        }
        let mut atoms = Vec::new();
        let rest = &toks[i..];
        let mut j = 0;
        if rest.len() == 1 && rest[0] == "true" {
            j = 1;
        }
        while j < rest.len() {
            let name = rest[j].clone();
            if rest.get(j + 1).map(String::as_str) == Some("(") {
                let mut args = Vec::new();
                let mut k = j + 2;
                while k < rest.len() && rest[k] != ")" {
                    if rest[k] != "," {
                        args.push(rest[k].clone());
                    }
                    k += 1;
                }
                if k == rest.len() {
                    return Err(err("unterminated argument list"));
                }
                k += 1;
                if rest.get(k).map(String::as_str) == Some("=") {
                    if args.len() != 1 {
                        return Err(err("functional atoms take one argument"));
                    }
                    let value = rest.get(k + 1).ok_or_else(|| err("missing value"))?.clone();
                    atoms.push(Atom::Func {
                        morphism: name,
                        arg: args.remove(0),
                        value,
                    });
                    k += 2;
                } else {
                    atoms.push(Atom::Rel { symbol: name, args });
                }
                j = k;
            } else if rest.get(j + 1).map(String::as_str) == Some("=") {
                let other = rest.get(j + 2).ok_or_else(|| err("missing right side of `=`"))?;
                atoms.push(Atom::Eq(name, other.clone()));
                j += 3;
            } else {
                return Err(err(&format!("unexpected token `{name}`")));
            }
            match rest.get(j).map(String::as_str) {
                None => {}
                Some("&") => {
                    j += 1;
                    if j == rest.len() {
                        return Err(err("dangling `&`"));
                    }
                }
                Some(t) => return Err(err(&format!("expected `&`, got `{t}`"))),
            }
        }
        let bound: BTreeSet<&str> = exists.iter().map(|v| v.name.as_str()).collect();
        let free = match free {
            Some(f) => f,
            None => {
                let mut seen = BTreeSet::new();
                let mut f = Vec::new();
                for a in &atoms {
                    for v in a.vars() {
                        if !bound.contains(v) && seen.insert(v.to_string()) {
                            f.push(Var::new(v));
                        }
                    }
                }
                f
            }
        };
        let phi = Self { free, exists, atoms };
        phi.check_declared()?;
        Ok(phi)
    }

    fn check_declared(&self) -> Result<()> {
        let declared: BTreeSet<&str> = self
            .free
            .iter()
            .chain(&self.exists)
            .map(|v| v.name.as_str())
            .collect();
        if declared.len() != self.free.len() + self.exists.len() {
            return Err(Error::Parse("a variable is declared twice".into()));
        }
        for a in &self.atoms {
            for v in a.vars() {
                if !declared.contains(v) {
                    return Err(Error::Parse(format!("undeclared variable {v}")));
                }
            }
        }
        Ok(())
    }

    /// Free variables first, then bound ones.
    pub fn variables(&self) -> Vec<&Var> {
        self.free.iter().chain(&self.exists).collect()
    }

    pub fn is_quantifier_free(&self) -> bool {
        self.exists.is_empty()
    }

    /// Number of satisfying assignments of the free variables in `a`, by
    /// backtracking over all variables in declaration order.
    pub fn count_satisfying(&self, a: &RelationalStructure) -> Result<u64> {
        Ok(self.satisfying_tuples(a)?.len() as u64)
    }

    /// Distinct free-variable tuples satisfying the formula in `a`, sorted.
    pub fn satisfying_tuples(&self, a: &RelationalStructure) -> Result<Vec<Vec<usize>>> {
        let vars = self.variables();
        let index: HashMap<&str, usize> = vars.iter().enumerate().map(|(i, v)| (v.name.as_str(), i)).collect();
        let mut rels: Vec<(BTreeSet<Vec<usize>>, Vec<usize>)> = Vec::new();
        let mut eqs: Vec<(usize, usize)> = Vec::new();
        for atom in &self.atoms {
            match atom {
                Atom::Rel { symbol, args } => {
                    let r = a
                        .relation(symbol)
                        .ok_or_else(|| Error::Parse(format!("unknown relation {symbol}")))?;
                    if a.signature.arity(symbol) != Some(args.len()) {
                        return Err(Error::Parse(format!("wrong arity for {symbol}")));
                    }
                    rels.push((r.iter().cloned().collect(), args.iter().map(|v| index[v.as_str()]).collect()));
                }
                Atom::Eq(x, y) => eqs.push((index[x.as_str()], index[y.as_str()])),
                Atom::Func { .. } => {
                    return Err(Error::ShapeError("functional atoms need a copresheaf".into()))
                }
            }
        }
        // Each atom is checked once its last variable is assigned.
        let last = |vs: &[usize]| vs.iter().copied().max();
        let mut checks: Vec<Vec<usize>> = vec![Vec::new(); vars.len()];
        for (i, (_, vs)) in rels.iter().enumerate() {
            if let Some(l) = last(vs) {
                checks[l].push(i);
            }
        }
        let mut eq_checks: Vec<Vec<usize>> = vec![Vec::new(); vars.len()];
        for (i, &(x, y)) in eqs.iter().enumerate() {
            eq_checks[x.max(y)].push(i);
        }
        let n = a.domain.len();
        let nfree = self.free.len();
        let mut out = BTreeSet::new();
        let mut assign = vec![0usize; vars.len()];
        fn go(
            depth: usize,
            n: usize,
            assign: &mut Vec<usize>,
            rels: &[(BTreeSet<Vec<usize>>, Vec<usize>)],
            eqs: &[(usize, usize)],
            checks: &[Vec<usize>],
            eq_checks: &[Vec<usize>],
            nfree: usize,
            out: &mut BTreeSet<Vec<usize>>,
        ) {
            if depth == assign.len() {
                out.insert(assign[..nfree].to_vec());
                return;
            }
            if depth == nfree && out.contains(&assign[..nfree]) {
                return;
            }
            for x in 0..n {
                assign[depth] = x;
                let ok = checks[depth].iter().all(|&i| {
                    let t: Vec<usize> = rels[i].1.iter().map(|&v| assign[v]).collect();
                    rels[i].0.contains(&t)
                }) && eq_checks[depth].iter().all(|&i| assign[eqs[i].0] == assign[eqs[i].1]);
                if ok {
                    go(depth + 1, n, assign, rels, eqs, checks, eq_checks, nfree, out);
                    if depth >= nfree && out.contains(&assign[..nfree]) {
                        return;
                    }
                }
            }
        }
        go(0, n, &mut assign, &rels, &eqs, &checks, &eq_checks, nfree, &mut out);
        Ok(out.into_iter().collect())
    }
}

/// Canonical structure of a quantifier-free conjunction: variables modulo
/// the equalities, one tuple per relational atom. Returns the structure and
/// the element of each variable (in [`PPFormula::variables`] order).
pub fn canonical_structure(phi: &PPFormula, sig: &Signature) -> Result<(RelationalStructure, Vec<usize>)> {
    let vars = phi.variables();
    let index: HashMap<&str, usize> = vars.iter().enumerate().map(|(i, v)| (v.name.as_str(), i)).collect();
    let mut uf = UnionFind::new(vars.len());
    for atom in &phi.atoms {
        match atom {
            Atom::Eq(x, y) => uf.union(index[x.as_str()], index[y.as_str()]),
            Atom::Func { .. } => {
                return Err(Error::ShapeError("functional atom in a relational formula".into()))
            }
            Atom::Rel { .. } => {}
        }
    }
    let mut class = vec![usize::MAX; vars.len()];
    let mut names = Vec::new();
    let mut element = Vec::with_capacity(vars.len());
    for v in 0..vars.len() {
        let root = uf.find(v);
        if class[root] == usize::MAX {
            class[root] = names.len();
            names.push(vars[root].name.clone());
        }
        element.push(class[root]);
    }
    let mut relations = vec![Vec::new(); sig.symbols.len()];
    for atom in &phi.atoms {
        if let Atom::Rel { symbol, args } = atom {
            let r = sig
                .index(symbol)
                .ok_or_else(|| Error::Parse(format!("unknown relation {symbol}")))?;
            if sig.symbols[r].1 != args.len() {
                return Err(Error::Parse(format!("wrong arity for {symbol}")));
            }
            relations[r].push(args.iter().map(|a| element[index[a.as_str()]]).collect());
        }
    }
    let s = RelationalStructure::new(sig.clone(), FinSet::named(names), relations)?;
    Ok((s, element))
}

/// Conjunction of all tuples of a structure, one free variable per element
/// named after it.
pub fn canonical_formula(c: &RelationalStructure) -> PPFormula {
    let var = |x: usize| format!("x{x}");
    let free = (0..c.domain.len()).map(|x| Var::new(var(x))).collect();
    let mut atoms = Vec::new();
    for ((name, _), r) in c.signature.symbols.iter().zip(&c.relations) {
        for t in r {
            atoms.push(Atom::Rel {
                symbol: name.clone(),
                args: t.iter().map(|&x| var(x)).collect(),
            });
        }
    }
    PPFormula {
        free,
        exists: Vec::new(),
        atoms,
    }
}

/// Sort of each variable from annotations and functional atoms.
fn infer_sorts(phi: &PPFormula, base: &FinCategory) -> Result<HashMap<String, ObjId>> {
    let mut sorts: HashMap<String, ObjId> = HashMap::new();
    let set = |v: &str, o: ObjId, sorts: &mut HashMap<String, ObjId>| -> Result<()> {
        match sorts.insert(v.to_string(), o) {
            Some(old) if old != o => Err(Error::ShapeError(format!("variable {v} has two sorts"))),
            _ => Ok(()),
        }
    };
    for v in phi.variables() {
        if let Some(s) = &v.sort {
            let o = base
                .object_id(s)
                .ok_or_else(|| Error::Parse(format!("unknown sort {s}")))?;
            set(&v.name, o, &mut sorts)?;
        }
    }
    for _ in 0..=phi.atoms.len() {
        for atom in &phi.atoms {
            match atom {
                Atom::Func { morphism, arg, value } => {
                    let m = base
                        .morphism_id(morphism)
                        .ok_or_else(|| Error::UnknownMorphism(morphism.clone()))?;
                    set(arg, base.source(m), &mut sorts)?;
                    set(value, base.target(m), &mut sorts)?;
                }
                Atom::Eq(a, b) => {
                    if let Some(&o) = sorts.get(a) {
                        set(b, o, &mut sorts)?;
                    } else if let Some(&o) = sorts.get(b) {
                        set(a, o, &mut sorts)?;
                    }
                }
                Atom::Rel { symbol, args } => {
                    let o = base
                        .object_id(symbol)
                        .ok_or_else(|| Error::UnknownMorphism(symbol.clone()))?;
                    let projections: Vec<usize> = base
                        .outgoing(o)
                        .iter()
                        .copied()
                        .filter(|&m| !base.is_identity(m))
                        .collect();
                    if projections.len() != args.len() {
                        return Err(Error::ShapeError(format!("{symbol} applied to the wrong number of arguments")));
                    }
                    for (a, &p) in args.iter().zip(&projections) {
                        set(a, base.target(p), &mut sorts)?;
                    }
                }
            }
        }
    }
    for v in phi.variables() {
        if !sorts.contains_key(&v.name) {
            return Err(Error::ShapeError(format!("cannot infer the sort of {}", v.name)));
        }
    }
    Ok(sorts)
}

/// Instance for a pp-sentence of functional atoms `f(x) = y` over `base`.
///
/// Each variable `x` gets an object `x` and a primed copy `x'` with an
/// identity-labelled arrow `x' -> x`; an atom `f(x) = y` becomes an arrow
/// `x' -> y` labelled `f`, and `x = y` an identity-labelled arrow `x' -> y`.
/// Primed objects only send arrows and unprimed ones only receive them, so no
/// two non-identity arrows compose. A relational atom `R(x1, …, xk)` is
/// accepted when `base` has an object `R` with `k` outgoing arrows, through
/// a fresh variable of sort `R`.
pub fn pp_sentence_to_instance(phi: &PPFormula, base: &Arc<FinCategory>) -> Result<CatFunctor> {
    if !phi.free.is_empty() {
        return Err(Error::ShapeError("expected a sentence (no free variables)".into()));
    }
    let mut phi = phi.clone();
    let mut extra_atoms = Vec::new();
    let mut fresh = 0;
    for atom in std::mem::take(&mut phi.atoms) {
        if let Atom::Rel { symbol, args } = &atom {
            let o = base
                .object_id(symbol)
                .ok_or_else(|| Error::UnknownMorphism(symbol.clone()))?;
            let projections: Vec<usize> = base
                .outgoing(o)
                .iter()
                .copied()
                .filter(|&m| !base.is_identity(m))
                .collect();
            if projections.len() != args.len() {
                return Err(Error::ShapeError(format!("{symbol} applied to the wrong number of arguments")));
            }
            let name = loop {
                let n = format!("_r{fresh}");
                fresh += 1;
                if phi.variables().iter().all(|v| v.name != n) {
                    break n;
                }
            };
            phi.exists.push(Var {
                name: name.clone(),
                sort: Some(symbol.clone()),
            });
            for (a, &p) in args.iter().zip(&projections) {
                extra_atoms.push(Atom::Func {
                    morphism: base.morphism(p).name.clone(),
                    arg: name.clone(),
                    value: a.clone(),
                });
            }
        } else {
            phi.atoms.push(atom);
        }
    }
    phi.atoms.extend(extra_atoms);
    let sorts = infer_sorts(&phi, base)?;
    let vars = phi.variables();
    let n = vars.len();
    let index: HashMap<&str, usize> = vars.iter().enumerate().map(|(i, v)| (v.name.as_str(), i)).collect();
    let mut objects: Vec<String> = vars.iter().map(|v| v.name.clone()).collect();
    objects.extend(vars.iter().map(|v| format!("{}'", v.name)));
    let mut obj_map: Vec<ObjId> = vars.iter().map(|v| sorts[&v.name]).collect();
    obj_map.extend(obj_map.clone());
    let mut arrows = Vec::new();
    let mut labels = Vec::new();
    for (i, v) in vars.iter().enumerate() {
        arrows.push((format!("{}'>{}", v.name, v.name), n + i, i));
        labels.push(base.identity(sorts[&v.name]));
    }
    for (k, atom) in phi.atoms.iter().enumerate() {
        let (x, y, label) = match atom {
            Atom::Func { morphism, arg, value } => {
                (arg, value, base.morphism_id(morphism).ok_or_else(|| Error::UnknownMorphism(morphism.clone()))?)
            }
            Atom::Eq(a, b) => {
                if sorts[a] != sorts[b] {
                    return Err(Error::ShapeError(format!("{a} = {b} relates different sorts")));
                }
                (a, b, base.identity(sorts[a]))
            }
            Atom::Rel { .. } => unreachable!("rewritten above"),
        };
        arrows.push((format!("a{k}"), n + index[x.as_str()], index[y.as_str()]));
        labels.push(label);
    }
    let j = Arc::new(FinCategory::composition_free(objects, arrows));
    let mut morphisms: Vec<usize> = (0..2 * n).map(|o| base.identity(obj_map[o])).collect();
    morphisms.extend(labels);
    let f = CatFunctor {
        source: j,
        target: base.clone(),
        objects: obj_map,
        morphisms,
    };
    let report = f.validate();
    if !report.is_ok() {
        return Err(Error::ShapeError(report.to_string()));
    }
    Ok(f)
}

/// The pp-sentence of an instance: a variable per object of the shape, a
/// functional atom per non-identity arrow (an equality when the arrow is
/// sent to an identity).
pub fn instance_to_pp_sentence(d: &CatFunctor) -> PPFormula {
    let (j, s) = (&d.source, &d.target);
    let name = |o: usize| format!("v{o}");
    let exists = (0..j.num_objects())
        .map(|o| Var {
            name: name(o),
            sort: Some(s.object_name(d.objects[o]).to_string()),
        })
        .collect();
    let atoms = j
        .non_identities()
        .map(|m| {
            let (x, y) = (name(j.source(m)), name(j.target(m)));
            let label = d.morphisms[m];
            if s.is_identity(label) {
                Atom::Eq(x, y)
            } else {
                Atom::Func {
                    morphism: s.morphism(label).name.clone(),
                    arg: x,
                    value: y,
                }
            }
        })
        .collect();
    PPFormula {
        free: Vec::new(),
        exists,
        atoms,
    }
}

/// A pp-interpretation of `target`-structures in `source`-structures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PPInterpretation {
    pub source: Signature,
    pub target: Signature,
    pub dimension: usize,
    pub domain: PPFormula,
    /// One formula per symbol of `target`, with `dimension · arity` free
    /// variables.
    pub relations: Vec<PPFormula>,
}

impl PPInterpretation {
    /// ```text
    /// source-signature E/2
    /// target-signature E/2
    /// dimension 1
    /// domain [x] x = x
    /// formula E [x,y] exists u v . E(x,u) & E(u,v) & E(v,y)
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut source = None;
        let mut target = None;
        let mut dimension = None;
        let mut domain = None;
        let mut formulas: HashMap<String, PPFormula> = HashMap::new();
        for raw in text.lines() {
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match kw {
                "source-signature" => source = Some(Signature::parse_list(rest)?),
                "target-signature" => target = Some(Signature::parse_list(rest)?),
                "dimension" => {
                    dimension = Some(rest.parse().map_err(|_| Error::Parse("bad dimension".into()))?)
                }
                "domain" => domain = Some(PPFormula::parse(rest)?),
                "formula" => {
                    let (sym, f) = rest
                        .split_once(char::is_whitespace)
                        .ok_or_else(|| Error::Parse("expected `formula R <formula>`".into()))?;
                    formulas.insert(sym.to_string(), PPFormula::parse(f)?);
                }
                _ => return Err(Error::Parse(format!("unknown keyword `{kw}`"))),
            }
        }
        let target: Signature = target.ok_or_else(|| Error::Parse("missing target-signature".into()))?;
        let mut relations = Vec::new();
        for (name, _) in &target.symbols {
            relations.push(
                formulas
                    .remove(name)
                    .ok_or_else(|| Error::Parse(format!("no formula for {name}")))?,
            );
        }
        let interp = Self {
            source: source.ok_or_else(|| Error::Parse("missing source-signature".into()))?,
            target,
            dimension: dimension.ok_or_else(|| Error::Parse("missing dimension".into()))?,
            domain: domain.ok_or_else(|| Error::Parse("missing domain".into()))?,
            relations,
        };
        interp.check_arities()?;
        Ok(interp)
    }

    fn check_arities(&self) -> Result<()> {
        if self.domain.free.len() != self.dimension {
            return Err(Error::ShapeError("domain formula needs `dimension` free variables".into()));
        }
        for ((name, arity), f) in self.target.symbols.iter().zip(&self.relations) {
            if f.free.len() != arity * self.dimension {
                return Err(Error::ShapeError(format!(
                    "formula for {name} needs {} free variables",
                    arity * self.dimension
                )));
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "source-signature {}\ntarget-signature {}\ndimension {}\ndomain {}\n",
            self.source, self.target, self.dimension, self.domain
        );
        for ((name, _), f) in self.target.symbols.iter().zip(&self.relations) {
            s.push_str(&format!("formula {name} {f}\n"));
        }
        s
    }

    /// `I_φ(A)`: domain the `n`-tuples satisfying the domain formula, a
    /// relation per target symbol. Fails when some tuple of a relation has a
    /// block outside the domain.
    pub fn evaluate(&self, a: &RelationalStructure, cap: usize) -> Result<RelationalStructure> {
        let n = self.dimension;
        checked_pow(a.domain.len(), n, cap, "interpretation domain")?;
        let dom = self.domain.satisfying_tuples(a)?;
        let index: HashMap<&[usize], usize> = dom.iter().enumerate().map(|(i, t)| (&t[..], i)).collect();
        let mut relations = Vec::new();
        for ((name, arity), f) in self.target.symbols.iter().zip(&self.relations) {
            let mut tuples = Vec::new();
            for t in f.satisfying_tuples(a)? {
                let mut out = Vec::with_capacity(*arity);
                for block in t.chunks(n.max(1)).take(*arity) {
                    let block = if n == 0 { &[][..] } else { block };
                    out.push(*index.get(block).ok_or_else(|| {
                        Error::Containment(format!("a tuple of {name} leaves the interpreted domain"))
                    })?);
                }
                tuples.push(out);
            }
            relations.push(tuples);
        }
        let names = a.domain.clone();
        let dom2 = dom.clone();
        let domain = FinSet::lazy(dom.len(), move |i| {
            let parts: Vec<String> = dom2[i].iter().map(|&x| names.name(x).into_owned()).collect();
            format!("({})", parts.join(","))
        });
        RelationalStructure::new(self.target.clone(), domain, relations)
    }
}

/// The gadget of a pp-interpretation, from the target signature category
/// (contravariantly) to the source one: `G(V)` is the canonical structure of
/// the domain formula, `G(R)` that of the matrix of `φ_R`, and `G(R.i)` sends
/// the `j`-th domain variable to the `j`-th variable of the `i`-th block.
pub fn ppinterp_to_gadget(phi: &PPInterpretation) -> Result<GadgetFunctor> {
    phi.check_arities()?;
    if !phi.domain.is_quantifier_free() {
        return Err(Error::ShapeError("domain formula must be quantifier-free".into()));
    }
    let n = phi.dimension;
    let src_cat = Arc::new(phi.target.category());
    let tgt_cat = Arc::new(phi.source.category());
    let (gv, gv_elem) = canonical_structure(&phi.domain, &phi.source)?;
    let gv_cop = gv.to_copresheaf_over(tgt_cat.clone());
    let mut gadgets = vec![gv_cop.clone()];
    let mut given = Vec::new();
    let mut mor = src_cat.num_objects();
    for ((name, arity), f) in phi.target.symbols.iter().zip(&phi.relations) {
        let (gr_s, gr_elem) = canonical_structure(f, &phi.source)?;
        let gr_cop = gr_s.to_copresheaf_over(tgt_cat.clone());
        for i in 0..*arity {
            // Domain variable j (an element of G(V)) goes to free variable i·n + j.
            let mut at_v = vec![usize::MAX; gv.domain.len()];
            for j in 0..n {
                let x = gv_elem[j];
                let y = gr_elem[i * n + j];
                if at_v[x] != usize::MAX && at_v[x] != y {
                    return Err(Error::ShapeError(format!(
                        "block {} of {name} does not respect the domain equalities",
                        i + 1
                    )));
                }
                at_v[x] = y;
            }
            if at_v.contains(&usize::MAX) {
                return Err(Error::ShapeError("domain formula has variables beyond its free ones".into()));
            }
            let mut components = vec![Func::from(at_v.clone())];
            for (r, tuples) in gv.relations.iter().enumerate() {
                let comp = tuples
                    .iter()
                    .map(|t| {
                        let image: Vec<usize> = t.iter().map(|&x| at_v[x]).collect();
                        gr_s.relations[r].binary_search(&image).map_err(|_| {
                            Error::ShapeError(format!(
                                "block {} of {name} does not satisfy the domain formula",
                                i + 1
                            ))
                        })
                    })
                    .collect::<Result<Vec<usize>>>()?;
                components.push(Func::from(comp));
            }
            given.push((mor, components));
            mor += 1;
        }
        gadgets.push(gr_cop);
    }
    GadgetFunctor::new(src_cat, tgt_cat, gadgets, given)
}

/// The pp-interpretation of a gadget between signature categories: the domain
/// formula is the canonical formula of `G(V)`, and `φ_R` has the elements of
/// `G(R)` as bound variables, fresh free variables tied to them by
/// equalities, and one atom per relation element.
pub fn gadget_to_ppinterp(g: &GadgetFunctor) -> Result<PPInterpretation> {
    let (target_sig, tv) = Signature::from_category(&g.source)?;
    let (source_sig, sv) = Signature::from_category(&g.target)?;
    let structure_of = |c: &Copresheaf| RelationalStructure::from_copresheaf(c);
    let gv = structure_of(&g.gadgets[tv])?;
    let domain = canonical_formula(&gv);
    let n = gv.domain.len();
    let mut relations = Vec::new();
    let rel_objects: Vec<ObjId> = (0..g.source.num_objects()).filter(|&o| o != tv).collect();
    for (&o, (_, arity)) in rel_objects.iter().zip(&target_sig.symbols) {
        let gr_s = structure_of(&g.gadgets[o])?;
        let body = canonical_formula(&gr_s);
        let projections: Vec<usize> = g
            .source
            .outgoing(o)
            .iter()
            .copied()
            .filter(|&m| !g.source.is_identity(m))
            .collect();
        let mut free = Vec::new();
        let mut atoms = Vec::new();
        for (i, &p) in projections.iter().enumerate().take(*arity) {
            let at_v = &g.transforms[p][sv];
            for j in 0..n {
                let y = format!("y{}_{}", i + 1, j);
                atoms.push(Atom::Eq(y.clone(), format!("x{}", at_v[j])));
                free.push(Var::new(y));
            }
        }
        atoms.extend(body.atoms);
        relations.push(PPFormula {
            free,
            exists: body.free,
            atoms,
        });
    }
    Ok(PPInterpretation {
        source: source_sig,
        target: target_sig,
        dimension: n,
        domain,
        relations,
    })
}

/// Tuples of a power structure are indexed lexicographically; exposed for
/// callers building polymorphisms of single-sorted encodings.
pub fn power_index(tuple: &[usize], k: usize) -> usize {
    tuple_index(tuple.iter().copied(), k)
}

pub fn power_tuple(index: usize, k: usize, n: usize) -> Vec<usize> {
    tuple_at(index, k, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copresheaf::{hom_count, hom_equivalent, isomorphic, DEFAULT_SIZE_CAP};
    use crate::graphs::{complete, digraph};
    use crate::kan::nerve;

    fn triangle() -> RelationalStructure {
        RelationalStructure::graph(3, &[(0, 1), (1, 2), (2, 0)])
    }

    #[test]
    fn triangle_translation_matches_k3() {
        let k3 = triangle().to_copresheaf();
        assert_eq!(k3.set(0).len(), 3);
        assert_eq!(k3.set(1).len(), 6);
        let back = to_structure(&k3).unwrap();
        assert_eq!(back, triangle());
        // The digraph base is itself a signature category.
        let from_d = to_structure(&complete(3)).unwrap();
        assert_eq!(from_d.relations, triangle().relations);
    }

    #[test]
    fn parallel_edges_collapse() {
        let g = digraph(2, &[(0, 1), (0, 1)]);
        let s = to_structure(&g).unwrap();
        assert_eq!(s.relations[0], vec![vec![0, 1]]);
        let back = s.to_copresheaf_over(g.base().clone());
        assert!(hom_equivalent(&g, &back).unwrap());
    }

    #[test]
    fn graph_base_is_not_a_signature() {
        let u = crate::graphs::undirected_cycle(3);
        assert!(matches!(to_structure(&u), Err(Error::BaseShape(_))));
    }

    #[test]
    fn single_sorted_k3() {
        let s = single_sorted(&complete(3), DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(s.domain.len(), 18);
        let names: Vec<&str> = s.signature.symbols.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["E_id_V", "E_id_E", "E_s", "E_t"]);
    }

    #[test]
    fn parse_and_print_formula() {
        let phi = PPFormula::parse("[x,y] exists u v . E(x,u) & E(u,v) & E(v,y)").unwrap();
        assert_eq!(phi.free.len(), 2);
        assert_eq!(phi.exists.len(), 2);
        assert_eq!(PPFormula::parse(&phi.to_string()).unwrap(), phi);
        let f = PPFormula::parse("exists e:E v. s(e) = v & t(e) = v").unwrap();
        assert!(matches!(f.atoms[0], Atom::Func { .. }));
        assert!(f.free.is_empty());
    }

    #[test]
    fn loop_sentence_fails_in_k3() {
        let f = PPFormula::parse("exists e v . s(e) = v & t(e) = v").unwrap();
        let d = pp_sentence_to_instance(&f, &crate::graphs::digraph_base()).unwrap();
        assert!(d.source.is_composition_free());
        let k3 = complete(3);
        assert!(!k3.precompose(&d).unwrap().diagram().limit_exists());
        let empty = PPFormula::parse("true").unwrap();
        let d = pp_sentence_to_instance(&empty, &crate::graphs::digraph_base()).unwrap();
        assert_eq!(k3.precompose(&d).unwrap().diagram().limit_count(), 1);
    }

    #[test]
    fn canonical_path() {
        let phi = PPFormula::parse("[x,y,u,v] E(x,u) & E(u,v) & E(v,y)").unwrap();
        let sig = Signature::parse_list("E/2").unwrap();
        let (c, _) = canonical_structure(&phi, &sig).unwrap();
        assert_eq!(c.domain.len(), 4);
        assert!(isomorphic(
            &c.to_copresheaf(),
            &RelationalStructure::new(sig.clone(), FinSet::range(4), vec![vec![vec![0, 1], vec![1, 2], vec![2, 3]]])
                .unwrap()
                .to_copresheaf()
        )
        .unwrap());
        let (one, _) = canonical_structure(&PPFormula::parse("[x,y] x = y").unwrap(), &sig).unwrap();
        assert_eq!(one.domain.len(), 1);
    }

    #[test]
    fn chandra_merlin_on_triangle() {
        let sig = Signature::parse_list("E/2").unwrap();
        let phi = PPFormula::parse("[a,b,c] E(a,b) & E(b,c)").unwrap();
        let (c, _) = canonical_structure(&phi, &sig).unwrap();
        let count = phi.count_satisfying(&triangle()).unwrap();
        assert_eq!(count, 12);
        assert_eq!(hom_count(&c.to_copresheaf(), &triangle().to_copresheaf()).unwrap(), count);
    }

    fn c5_to_k5() -> PPInterpretation {
        PPInterpretation::parse(
            "source-signature E/2\ntarget-signature E/2\ndimension 1\ndomain [x] x = x\n\
             formula E [x,y] exists u v . E(x,u) & E(u,v) & E(v,y)\n",
        )
        .unwrap()
    }

    #[test]
    fn c5_interprets_k5() {
        let phi = c5_to_k5();
        let c5 = RelationalStructure::graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let k5 = RelationalStructure::graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
        let i = phi.evaluate(&c5, DEFAULT_SIZE_CAP).unwrap();
        assert!(isomorphic(&i.to_copresheaf(), &k5.to_copresheaf()).unwrap());
        let g = ppinterp_to_gadget(&phi).unwrap();
        assert_eq!(g.gadgets[0].set(0).len(), 1);
        assert_eq!(g.gadgets[1].set(0).len(), 4);
        let c5c = c5.to_copresheaf_over(g.target.clone());
        let n = nerve(&g, &c5c).unwrap();
        let k5c = k5.to_copresheaf_over(g.source.clone());
        assert!(hom_equivalent(&n, &k5c).unwrap());
        let back = gadget_to_ppinterp(&g).unwrap();
        let i2 = back.evaluate(&c5, DEFAULT_SIZE_CAP).unwrap();
        assert!(hom_equivalent(&i2.to_copresheaf(), &k5.to_copresheaf()).unwrap());
    }

    #[test]
    fn identity_interpretation_is_yoneda() {
        let phi = PPInterpretation::parse(
            "source-signature E/2\ntarget-signature E/2\ndimension 1\ndomain [x] x = x\nformula E [x,y] E(x,y)\n",
        )
        .unwrap();
        let g = ppinterp_to_gadget(&phi).unwrap();
        let y = GadgetFunctor::yoneda(&g.source);
        for o in 0..2 {
            assert!(isomorphic(&g.gadgets[o], &y.gadgets[o]).unwrap());
        }
    }

    #[test]
    fn block_violating_domain_is_rejected() {
        let phi = PPInterpretation::parse(
            "source-signature E/2\ntarget-signature E/2\ndimension 1\ndomain [x] E(x,x)\nformula E [x,y] E(x,y)\n",
        )
        .unwrap();
        assert!(matches!(ppinterp_to_gadget(&phi), Err(Error::ShapeError(_))));
    }

    #[test]
    fn instance_formula_round_trip() {
        let text = "object a : E\nobject c : V\narrow u : a -> c = s\narrow w : a -> c = t\n";
        let d = crate::grothendieck::parse_instance(text, crate::graphs::digraph_base(), 100).unwrap();
        let phi = instance_to_pp_sentence(&d);
        let d2 = pp_sentence_to_instance(&phi, &crate::graphs::digraph_base()).unwrap();
        let k3 = complete(3);
        let count = |d: &CatFunctor| k3.precompose(d).unwrap().diagram().limit_count();
        assert_eq!(count(&d), 0);
        assert_eq!(count(&d), count(&d2));
    }
}
