//! Minor conditions, their diagrams, satisfaction in polymorphism minions,
//! interpretability, free structures and the hardness probe.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::copresheaf::{same_base, Copresheaf, FinSet, HomProblem};
use crate::error::{Error, Result};
use crate::fincat::{strip_comment, FinCategory};
use crate::findiag::{identity_func, Constraint, FinDiagram, Func, Network};
use crate::grothendieck::GlMinion;
use crate::kan::{compose_minion, ran_eval, Minion, MinionTable};
use crate::par::Execution;

/// `left(x_{π(0)}, …, x_{π(m-1)}) ≈ right(x_0, …, x_{n-1})`, symbols given
/// by index into the condition's symbol table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MinorIdentity {
    pub left: usize,
    pub right: usize,
    pub map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorCondition {
    pub symbols: Vec<(String, usize)>,
    pub identities: Vec<MinorIdentity>,
}

impl MinorCondition {
    pub fn new(symbols: Vec<(String, usize)>, identities: Vec<MinorIdentity>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (name, arity) in &symbols {
            if *arity == 0 {
                return Err(Error::Parse(format!("symbol {name} has arity 0")));
            }
            if !seen.insert(name) {
                return Err(Error::Parse(format!("symbol {name} declared twice")));
            }
        }
        for id in &identities {
            let (Some((_, m)), Some((_, n))) = (symbols.get(id.left), symbols.get(id.right)) else {
                return Err(Error::Parse("identity refers to an unknown symbol".into()));
            };
            if id.map.len() != *m || id.map.iter().any(|&x| x >= *n) {
                return Err(Error::Parse("identity map does not fit the arities".into()));
            }
        }
        Ok(Self { symbols, identities })
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|(n, _)| n == name)
    }

    /// ```text
    /// symbol s/6
    /// symbol t/3
    /// identity s(x,y,z,x,y,z) = t(x,y,z)
    /// ```
    ///
    /// The right-hand side lists distinct variables; the map is read off by
    /// variable name. Undeclared symbols take the arity of their first use.
    pub fn parse(text: &str) -> Result<Self> {
        let mut symbols: Vec<(String, usize)> = Vec::new();
        let mut identities = Vec::new();
        fn term(s: &str) -> Option<(&str, Vec<&str>)> {
            let (name, rest) = s.trim().split_once('(')?;
            let args = rest.trim().strip_suffix(')')?;
            Some((name.trim(), args.split(',').map(str::trim).collect()))
        }
        let symbol = |name: &str, arity: usize, symbols: &mut Vec<(String, usize)>| -> Result<usize> {
            match symbols.iter().position(|(n, _)| n == name) {
                Some(i) if symbols[i].1 == arity => Ok(i),
                Some(_) => Err(Error::Parse(format!("symbol {name} used with two arities"))),
                None => {
                    symbols.push((name.to_string(), arity));
                    Ok(symbols.len() - 1)
                }
            }
        };
        for (lineno, raw) in text.lines().enumerate() {
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let err = |m: &str| Error::Parse(format!("line {}: {m}", lineno + 1));
            let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            match kw {
                "symbol" => {
                    let (name, arity) = rest.trim().split_once('/').ok_or_else(|| err("expected `symbol f/n`"))?;
                    let arity = arity.trim().parse().map_err(|_| err("bad arity"))?;
                    if symbols.iter().any(|(n, _)| n == name.trim()) {
                        return Err(err("symbol declared twice"));
                    }
                    symbols.push((name.trim().to_string(), arity));
                }
                "identity" => {
                    let (l, r) = rest.split_once('=').ok_or_else(|| err("expected `f(...) = g(...)`"))?;
                    let (lname, largs) = term(l).ok_or_else(|| err("malformed left term"))?;
                    let (rname, rargs) = term(r).ok_or_else(|| err("malformed right term"))?;
                    let mut index = HashMap::new();
                    for (i, v) in rargs.iter().enumerate() {
                        if index.insert(*v, i).is_some() {
                            return Err(err("right-hand variables must be distinct"));
                        }
                    }
                    let map = largs
                        .iter()
                        .map(|v| index.get(v).copied().ok_or_else(|| err(&format!("variable {v} not on the right"))))
                        .collect::<Result<Vec<_>>>()?;
                    let left = symbol(lname, largs.len(), &mut symbols).map_err(|e| err(&e.to_string()))?;
                    let right = symbol(rname, rargs.len(), &mut symbols).map_err(|e| err(&e.to_string()))?;
                    identities.push(MinorIdentity { left, right, map });
                }
                _ => return Err(err(&format!("unknown keyword `{kw}`"))),
            }
        }
        Self::new(symbols, identities)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (name, arity) in &self.symbols {
            s.push_str(&format!("symbol {name}/{arity}\n"));
        }
        for id in &self.identities {
            let var = |i: usize| format!("x{i}");
            let left: Vec<String> = id.map.iter().map(|&i| var(i)).collect();
            let right: Vec<String> = (0..self.symbols[id.right].1).map(var).collect();
            s.push_str(&format!(
                "identity {}({}) = {}({})\n",
                self.symbols[id.left].0,
                left.join(","),
                self.symbols[id.right].0,
                right.join(",")
            ));
        }
        s
    }
}

impl fmt::Display for MinorCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub mod builtin {
    use super::MinorCondition;

    /// `s(x,y,z,x,y,z) ≈ t(x,y,z)`, `s(y,z,x,z,x,y) ≈ t(x,y,z)`.
    pub fn siggers() -> MinorCondition {
        MinorCondition::parse(
            "symbol s/6\nsymbol t/3\n\
             identity s(x,y,z,x,y,z) = t(x,y,z)\n\
             identity s(y,z,x,z,x,y) = t(x,y,z)\n",
        )
        .expect("valid")
    }

    /// `f(x,y) ≈ f(y,x)`.
    pub fn symmetric_binary() -> MinorCondition {
        MinorCondition::parse("identity f(y,x) = f(x,y)\n").expect("valid")
    }

    /// `f(x) ≈ f(x)`, satisfied by every minion with a unary element.
    pub fn trivial() -> MinorCondition {
        MinorCondition::parse("identity f(x) = f(x)\n").expect("valid")
    }

    pub fn by_name(name: &str) -> Option<MinorCondition> {
        match name {
            "siggers" => Some(siggers()),
            "symmetric-binary" => Some(symmetric_binary()),
            "trivial" => Some(trivial()),
            _ => None,
        }
    }
}

/// `D_Γ`: one object per symbol with its arity set, one arrow per identity
/// labelled by its map. A symbol occurring on both sides of identities gets a
/// copy `f'` carrying its left-hand occurrences, joined to `f` by an arrow
/// labelled with the identity; then no two arrows compose.
pub fn condition_to_diagram(gamma: &MinorCondition) -> FinDiagram {
    let n = gamma.symbols.len();
    let lefts: BTreeSet<usize> = gamma.identities.iter().map(|i| i.left).collect();
    let rights: BTreeSet<usize> = gamma.identities.iter().map(|i| i.right).collect();
    let split: Vec<usize> = lefts.intersection(&rights).copied().collect();
    let mut objects: Vec<String> = gamma.symbols.iter().map(|(s, _)| s.clone()).collect();
    let mut sizes: Vec<usize> = gamma.symbols.iter().map(|(_, a)| *a).collect();
    let mut source_obj: Vec<usize> = (0..n).collect();
    for &f in &split {
        source_obj[f] = objects.len();
        objects.push(format!("{}'", gamma.symbols[f].0));
        sizes.push(gamma.symbols[f].1);
    }
    let mut arrows = Vec::new();
    let mut tables: Vec<Func> = Vec::new();
    for (k, id) in gamma.identities.iter().enumerate() {
        arrows.push((format!("e{k}"), source_obj[id.left], id.right));
        tables.push(Func::from(id.map.clone()));
    }
    for &f in &split {
        arrows.push((format!("copy_{}", gamma.symbols[f].0), source_obj[f], f));
        tables.push(identity_func(gamma.symbols[f].1));
    }
    let shape = Arc::new(FinCategory::composition_free(objects, arrows));
    let mut functions: Vec<Func> = sizes.iter().map(|&s| identity_func(s)).collect();
    functions.extend(tables);
    FinDiagram {
        shape,
        sets: sizes.into_iter().map(FinSet::range).collect(),
        functions,
    }
}

/// The condition of a diagram over a composition-free shape: a symbol per
/// object, an identity per non-identity arrow.
pub fn diagram_to_condition(d: &FinDiagram) -> Result<MinorCondition> {
    let shape = &d.shape;
    if !shape.is_composition_free() {
        return Err(Error::InvalidDiagram(
            "shape has composable arrows; split it into a composition-free one first".into(),
        ));
    }
    let symbols = (0..shape.num_objects())
        .map(|o| (shape.object_name(o).to_string(), d.sets[o].len()))
        .collect();
    let identities = shape
        .non_identities()
        .map(|u| MinorIdentity {
            left: shape.source(u),
            right: shape.target(u),
            map: d.function(u).to_vec(),
        })
        .collect();
    MinorCondition::new(symbols, identities)
}

/// The indicator structure `gl(D_Γ) ∘ A`.
pub fn indicator(a: &Copresheaf, gamma: &MinorCondition, cap: usize) -> Result<Copresheaf> {
    let gl = GlMinion::new(condition_to_diagram(gamma), cap);
    compose_minion(&gl, a)
}

/// `M ∘ A`.
pub fn free_structure(a: &Copresheaf, m: &dyn Minion) -> Result<Copresheaf> {
    compose_minion(m, a)
}

/// Polymorphisms assigned to the symbols of a condition, each as component
/// tables of `A^n → B` (tuples in lexicographic order).
pub type Interpretation = Vec<Vec<Func>>;

#[derive(Clone, Debug)]
pub struct Satisfaction {
    pub satisfied: bool,
    pub witness: Option<Interpretation>,
}

/// Whether `Pol(A, B)` satisfies `Γ`, decided as `hom(gl(D_Γ) ∘ A, B) ≠ ∅`.
/// The witness reads each symbol's polymorphism off the homomorphism.
pub fn satisfies(a: &Copresheaf, b: &Copresheaf, gamma: &MinorCondition, cap: usize) -> Result<Satisfaction> {
    if !same_base(a.base(), b.base()) {
        return Err(Error::BaseMismatch("satisfies".into()));
    }
    let d = condition_to_diagram(gamma);
    let gl = GlMinion::new(d, cap);
    let ind = compose_minion(&gl, a)?;
    let Some(h) = HomProblem::new(&ind, b)?.first(Execution::default()) else {
        return Ok(Satisfaction {
            satisfied: false,
            witness: None,
        });
    };
    let mut witness = Vec::with_capacity(gamma.symbols.len());
    for (f, (_, arity)) in gamma.symbols.iter().enumerate() {
        let mut comps = Vec::with_capacity(a.base().num_objects());
        for s in 0..a.base().num_objects() {
            let k = a.set(s).len();
            let len = crate::copresheaf::checked_pow(k, *arity, cap, "polymorphism")?;
            let comp: Func = (0..len)
                .map(|t| {
                    let tuple = crate::copresheaf::tuple_at(t, k, *arity);
                    gl.class(k, f, &tuple).map(|c| h.components[s][c])
                })
                .collect::<Result<_>>()?;
            comps.push(comp);
        }
        witness.push(comps);
    }
    Ok(Satisfaction {
        satisfied: true,
        witness: Some(witness),
    })
}

/// Reference decision by enumerating `Pol(A, B)` at the condition's arities
/// and solving `limit(Pol ∘ D_Γ)`.
pub fn satisfies_by_enumeration(
    a: &Copresheaf,
    b: &Copresheaf,
    gamma: &MinorCondition,
    cap: usize,
) -> Result<Satisfaction> {
    let arities: BTreeSet<usize> = gamma.symbols.iter().map(|(_, a)| *a).collect();
    let arities: Vec<FinSet> = arities.into_iter().map(FinSet::range).collect();
    let table = ran_eval(a, b, &arities, cap)?;
    let d = condition_to_diagram(gamma);
    let pol_d = compose_minion(&table, &Copresheaf::from_diagram(d)?)?;
    let Some(sol) = pol_d.diagram().network().first(Execution::default()) else {
        return Ok(Satisfaction {
            satisfied: false,
            witness: None,
        });
    };
    let witness = gamma
        .symbols
        .iter()
        .enumerate()
        .map(|(f, (_, arity))| {
            let idx = table.arity_index(&FinSet::range(*arity)).expect("recorded");
            table.elements[idx][sol[f]].clone()
        })
        .collect();
    Ok(Satisfaction {
        satisfied: true,
        witness: Some(witness),
    })
}

/// Checks that an interpretation consists of polymorphisms satisfying every
/// identity of `Γ`.
pub fn check_interpretation(
    a: &Copresheaf,
    b: &Copresheaf,
    gamma: &MinorCondition,
    xi: &Interpretation,
    cap: usize,
) -> Result<bool> {
    use crate::copresheaf::{power, tuple_at, tuple_index, NatTransformation};
    for (f, (_, arity)) in gamma.symbols.iter().enumerate() {
        let an = power(a, &FinSet::range(*arity), cap)?;
        let t = NatTransformation {
            source: an,
            target: b.clone(),
            components: xi[f].clone(),
        };
        if !t.check_naturality().is_ok() {
            return Ok(false);
        }
    }
    for id in &gamma.identities {
        let (m, n) = (gamma.symbols[id.left].1, gamma.symbols[id.right].1);
        for s in 0..a.base().num_objects() {
            let k = a.set(s).len();
            for t in 0..xi[id.right][s].len() {
                let args = tuple_at(t, k, n);
                let left = tuple_index((0..m).map(|i| args[id.map[i]]), k);
                if xi[id.left][s][left] != xi[id.right][s][t] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Whether `Π` is interpretable in `Γ`: `limit((gl D_Γ) ∘ D_Π)` is nonempty.
pub fn interpretable(pi: &MinorCondition, gamma: &MinorCondition, cap: usize) -> Result<bool> {
    let gl = GlMinion::new(condition_to_diagram(gamma), cap);
    let d_pi = Copresheaf::from_diagram(condition_to_diagram(pi))?;
    Ok(compose_minion(&gl, &d_pi)?.diagram().limit_exists())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum HardnessProbeResult {
    /// No choice functions natural over arities `1..=k` exist, so there is no
    /// natural transformation `Ran_A B → id`.
    RefutedAt { arity: usize },
    /// Per arity `n` (index `n - 1`), a choice `ξ_n: Pol(A, B)([n]) → [n]`
    /// natural over the probed window. Evidence only.
    BoundedWitness { witness: Vec<Vec<usize>> },
}

#[derive(Clone, Debug)]
pub struct HardnessProbe {
    pub result: HardnessProbeResult,
    pub table: MinionTable,
}

/// The CSP for choice functions over arities `1..=k` of the table: one
/// variable per polymorphism, one constraint per recorded action.
fn choice_network(table: &MinionTable, k: usize) -> (Network, Vec<usize>) {
    let mut offset = vec![0];
    for n in 0..k {
        offset.push(offset[n] + table.elements[n].len());
    }
    let mut sizes = Vec::with_capacity(offset[k]);
    for n in 0..k {
        sizes.extend(std::iter::repeat(table.arities[n].len()).take(table.elements[n].len()));
    }
    let mut constraints = Vec::new();
    for act in table.actions.iter().filter(|a| a.from < k && a.to < k) {
        for (e, &img) in act.table.iter().enumerate() {
            constraints.push(Constraint {
                source: offset[act.from] + e,
                target: offset[act.to] + img,
                table: Func::from(act.map.clone()),
            });
        }
    }
    (Network::new(sizes, constraints), offset)
}

/// Searches for choice functions `ξ_N: Pol(A, B)(N) → N` natural in every
/// map between sets `N` of sizes `1..=max_arity`. A refutation at some
/// arity is conclusive; a witness only covers the window.
pub fn probe_hardness(a: &Copresheaf, b: &Copresheaf, max_arity: usize, cap: usize) -> Result<HardnessProbe> {
    if max_arity == 0 {
        return Err(Error::Parse("max arity must be positive".into()));
    }
    if !HomProblem::new(a, b)?.exists(Execution::default()) {
        return Err(Error::Promise("no homomorphism from A to B".into()));
    }
    let arities: Vec<FinSet> = (1..=max_arity).map(FinSet::range).collect();
    let table = ran_eval(a, b, &arities, cap)?;
    let mut witness = None;
    for k in 1..=max_arity {
        let (net, offset) = choice_network(&table, k);
        match net.first(Execution::default()) {
            None => {
                return Ok(HardnessProbe {
                    result: HardnessProbeResult::RefutedAt { arity: k },
                    table,
                })
            }
            Some(sol) if k == max_arity => {
                witness = Some((0..k).map(|n| sol[offset[n]..offset[n + 1]].to_vec()).collect());
            }
            Some(_) => {}
        }
    }
    Ok(HardnessProbe {
        result: HardnessProbeResult::BoundedWitness {
            witness: witness.expect("searched at max arity"),
        },
        table,
    })
}

impl HardnessProbe {
    /// Checks `ξ_M(action(π)(e)) = π(ξ_N(e))` for every recorded action.
    pub fn witness_holds(&self) -> bool {
        match &self.result {
            HardnessProbeResult::RefutedAt { .. } => true,
            HardnessProbeResult::BoundedWitness { witness } => check_witness(&self.table, witness),
        }
    }
}

/// Direct check of every naturality equation of a choice witness.
pub fn check_witness(table: &MinionTable, witness: &[Vec<usize>]) -> bool {
    let k = witness.len();
    (0..k).all(|n| witness[n].len() == table.elements[n].len() && witness[n].iter().all(|&x| x < table.arities[n].len()))
        && table
            .actions
            .iter()
            .filter(|a| a.from < k && a.to < k)
            .all(|act| {
                act.table
                    .iter()
                    .enumerate()
                    .all(|(e, &img)| witness[act.to][img] == act.map[witness[act.from][e]])
            })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copresheaf::{hom_exists, isomorphic, power, DEFAULT_SIZE_CAP};
    use crate::fincat::CatFunctor;
    use crate::graphs::{complete, cycle, digraph, loop_vertex};
    use crate::kan::PowerMinion;

    const CAP: usize = DEFAULT_SIZE_CAP;

    #[test]
    fn siggers_diagram_is_k3() {
        let d = condition_to_diagram(&builtin::siggers());
        assert_eq!(d.shape.num_objects(), 2);
        let k3 = complete(3);
        let base = k3.base().clone();
        let f = CatFunctor {
            source: base.clone(),
            target: d.shape.clone(),
            objects: vec![1, 0],
            morphisms: vec![1, 0, 2, 3],
        };
        assert!(f.validate().is_ok());
        let pulled = Copresheaf::from_diagram(d).unwrap().precompose(&f).unwrap();
        assert!(isomorphic(&pulled, &k3).unwrap());
    }

    #[test]
    fn single_identity_diagram() {
        let g = MinorCondition::parse("identity f(x) = g(x)").unwrap();
        let d = condition_to_diagram(&g);
        assert_eq!(d.shape.num_objects(), 2);
        assert_eq!(d.shape.non_identities().count(), 1);
        assert!(d.sets.iter().all(|s| s.len() == 1));
        assert_eq!(diagram_to_condition(&d).unwrap(), g);
    }

    #[test]
    fn round_trip_siggers() {
        let g = builtin::siggers();
        assert_eq!(diagram_to_condition(&condition_to_diagram(&g)).unwrap(), g);
        assert_eq!(MinorCondition::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn self_referencing_symbols_are_split() {
        let d = condition_to_diagram(&builtin::symmetric_binary());
        assert_eq!(d.shape.num_objects(), 2);
        assert!(d.shape.is_composition_free());
        assert!(d.validate().is_ok());
    }

    #[test]
    fn k3_fails_siggers_and_symmetry() {
        let k3 = complete(3);
        assert!(!satisfies(&k3, &k3, &builtin::siggers(), CAP).unwrap().satisfied);
        assert!(!satisfies(&k3, &complete(4), &builtin::siggers(), CAP).unwrap().satisfied);
        assert!(!satisfies(&k3, &k3, &builtin::symmetric_binary(), CAP).unwrap().satisfied);
        assert!(!satisfies_by_enumeration(&k3, &k3, &builtin::symmetric_binary(), CAP).unwrap().satisfied);
    }

    #[test]
    fn loop_satisfies_everything() {
        let l = loop_vertex();
        for g in [builtin::siggers(), builtin::symmetric_binary(), builtin::trivial()] {
            let s = satisfies(&l, &l, &g, CAP).unwrap();
            assert!(s.satisfied);
            assert!(check_interpretation(&l, &l, &g, &s.witness.unwrap(), CAP).unwrap());
        }
    }

    #[test]
    fn witness_satisfies_the_identities() {
        // Two vertices with loops: symmetric polymorphisms exist (max).
        let a = digraph(2, &[(0, 0), (1, 1), (0, 1)]);
        let g = builtin::symmetric_binary();
        let s = satisfies(&a, &a, &g, CAP).unwrap();
        let e = satisfies_by_enumeration(&a, &a, &g, CAP).unwrap();
        assert_eq!(s.satisfied, e.satisfied);
        assert!(s.satisfied);
        assert!(check_interpretation(&a, &a, &g, &s.witness.unwrap(), CAP).unwrap());
        assert!(check_interpretation(&a, &a, &g, &e.witness.unwrap(), CAP).unwrap());
    }

    #[test]
    fn indicator_of_siggers_over_k3() {
        let k3 = complete(3);
        let ind = indicator(&k3, &builtin::siggers(), CAP).unwrap();
        assert!(!hom_exists(&ind, &k3).unwrap());
    }

    #[test]
    fn free_structures() {
        let c5 = cycle(5);
        let id = free_structure(&c5, &PowerMinion { k: 1, cap: CAP }).unwrap();
        assert_eq!(id, c5);
        let sq = free_structure(&c5, &PowerMinion { k: 2, cap: CAP }).unwrap();
        assert!(isomorphic(&sq, &power(&c5, &FinSet::range(2), CAP).unwrap()).unwrap());
        let k3 = complete(3);
        let table = ran_eval(&k3, &k3, &[FinSet::range(1)], CAP).unwrap();
        assert!(matches!(free_structure(&k3, &table), Err(Error::MissingArity(_))));
    }

    #[test]
    fn interpretability_examples() {
        let (sig, triv) = (builtin::siggers(), builtin::trivial());
        assert!(interpretable(&sig, &sig, CAP).unwrap());
        assert!(interpretable(&triv, &triv, CAP).unwrap());
        assert!(!interpretable(&sig, &triv, CAP).unwrap());
        assert!(interpretable(&triv, &sig, CAP).unwrap());
        let collapse = MinorCondition::parse("identity f(x) = g(x,y)\nidentity f(y) = g(x,y)\n").unwrap();
        for g in [sig, triv, builtin::symmetric_binary()] {
            assert!(interpretable(&g, &collapse, CAP).unwrap());
        }
    }

    #[test]
    fn probe_examples() {
        let l = loop_vertex();
        let p = probe_hardness(&l, &l, 2, CAP).unwrap();
        assert_eq!(p.result, HardnessProbeResult::RefutedAt { arity: 2 });
        let k3 = complete(3);
        let p = probe_hardness(&k3, &k3, 2, CAP).unwrap();
        assert!(matches!(p.result, HardnessProbeResult::BoundedWitness { .. }));
        assert!(p.witness_holds());
        let p = probe_hardness(&l, &l, 1, CAP).unwrap();
        assert!(matches!(p.result, HardnessProbeResult::BoundedWitness { .. }));
        assert!(matches!(
            probe_hardness(&l, &k3, 1, CAP),
            Err(Error::Promise(_))
        ));
    }

    #[test]
    fn corrupted_witness_fails() {
        let k3 = complete(3);
        let p = probe_hardness(&k3, &k3, 2, CAP).unwrap();
        let HardnessProbeResult::BoundedWitness { mut witness } = p.result.clone() else {
            panic!("expected a witness")
        };
        witness[1][0] = 1 - witness[1][0];
        assert!(!check_witness(&p.table, &witness));
    }
}
