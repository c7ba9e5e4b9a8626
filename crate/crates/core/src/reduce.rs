//! Reductions between template problems and a corpus harness that checks
//! them instance by instance.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::copresheaf::{same_base, Copresheaf, HomProblem, NatTransformation};
use crate::error::{Error, Result};
use crate::graphs::{all_multidigraphs, random_digraph};
use crate::grothendieck::{template_condition, GlMinion};
use crate::kan::{compose_minion, yoneda_extend, GadgetFunctor, LanMinion};
use crate::par::Execution;

/// A promise template: `A → B` is witnessed at construction.
#[derive(Clone, Debug)]
pub struct TemplatePair {
    pub a: Copresheaf,
    pub b: Copresheaf,
    pub witness: NatTransformation,
}

impl TemplatePair {
    pub fn new(a: Copresheaf, b: Copresheaf) -> Result<Self> {
        let witness = HomProblem::new(&a, &b)?
            .first(Execution::default())
            .ok_or_else(|| Error::Promise("no homomorphism from A to B".into()))?;
        Ok(Self { a, b, witness })
    }

    /// `(A, A)`.
    pub fn single(a: Copresheaf) -> Self {
        Self::new(a.clone(), a).expect("identity homomorphism")
    }

    /// YES if `X → A`, NO if not even `X → B`.
    pub fn verdict(&self, x: &Copresheaf, exec: Execution) -> Result<Verdict> {
        if HomProblem::new(x, &self.a)?.exists(exec) {
            Ok(Verdict::Yes)
        } else if self.a == self.b || !HomProblem::new(x, &self.b)?.exists(exec) {
            Ok(Verdict::No)
        } else {
            Ok(Verdict::Neither)
        }
    }
}

/// `gl(A ∘ gr X) ∘ A′`, computed directly: at `t`, the colimit over the
/// elements `(s, x)` of `X` of `A′(t)^{A(s)}`.
pub fn universal_reduction(src: &TemplatePair, dst: &TemplatePair, x: &Copresheaf, cap: usize) -> Result<Copresheaf> {
    let lan = LanMinion::new(&src.a, x, cap)?;
    compose_minion(&lan, &dst.a)
}

/// The same composite through the category of elements and `gl`.
pub fn universal_reduction_via_gl(
    src: &TemplatePair,
    dst: &TemplatePair,
    x: &Copresheaf,
    cap: usize,
) -> Result<Copresheaf> {
    let gl = GlMinion::new(template_condition(&src.a, x)?, cap);
    compose_minion(&gl, &dst.a)
}

/// `kay_G(X)`.
pub fn gadget_reduce(g: &GadgetFunctor, x: &Copresheaf) -> Result<Copresheaf> {
    yoneda_extend(g, x)
}

#[derive(Clone, Debug)]
pub enum Reduction {
    Identity,
    Universal,
    Gadget(GadgetFunctor),
    /// Ignores the input; a negative control.
    Constant(Copresheaf),
}

impl Reduction {
    pub fn name(&self) -> &'static str {
        match self {
            Reduction::Identity => "identity",
            Reduction::Universal => "universal",
            Reduction::Gadget(_) => "gadget",
            Reduction::Constant(_) => "constant",
        }
    }

    pub fn apply(&self, src: &TemplatePair, dst: &TemplatePair, x: &Copresheaf, cap: usize) -> Result<Copresheaf> {
        match self {
            Reduction::Identity => Ok(x.clone()),
            Reduction::Universal => universal_reduction(src, dst, x, cap),
            Reduction::Gadget(g) => gadget_reduce(g, x),
            Reduction::Constant(c) => Ok(c.clone()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// A YES instance mapped to a YES instance.
    Complete,
    /// A NO instance mapped to a NO instance.
    Sound,
    Violation,
    OutsidePromise,
    Skipped(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportEntry {
    pub index: usize,
    pub input: Option<Verdict>,
    pub output: Option<Verdict>,
    pub output_size: Option<usize>,
    pub classification: Classification,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionReport {
    pub reduction: String,
    /// The hypothesis the reduction relies on, as asserted by the caller.
    pub assertion: String,
    pub entries: Vec<ReportEntry>,
}

impl ReductionReport {
    pub fn violations(&self) -> usize {
        self.count(|c| *c == Classification::Violation)
    }

    pub fn passes(&self) -> bool {
        self.violations() == 0
    }

    pub fn count(&self, pred: impl Fn(&Classification) -> bool) -> usize {
        self.entries.iter().filter(|e| pred(&e.classification)).count()
    }
}

impl fmt::Display for ReductionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "reduction: {}", self.reduction)?;
        writeln!(f, "assumes: {}", self.assertion)?;
        writeln!(
            f,
            "instances: {}  complete: {}  sound: {}  outside promise: {}  skipped: {}  violations: {}",
            self.entries.len(),
            self.count(|c| *c == Classification::Complete),
            self.count(|c| *c == Classification::Sound),
            self.count(|c| *c == Classification::OutsidePromise),
            self.count(|c| matches!(c, Classification::Skipped(_))),
            self.violations()
        )?;
        for e in self.entries.iter().filter(|e| e.classification == Classification::Violation) {
            writeln!(f, "violation at instance {}: {:?} -> {:?}", e.index, e.input, e.output)?;
        }
        Ok(())
    }
}

fn run_one(
    index: usize,
    x: &Copresheaf,
    src: &TemplatePair,
    dst: &TemplatePair,
    reduction: &Reduction,
    cap: usize,
    inner: Execution,
) -> ReportEntry {
    let skipped = |e: Error| ReportEntry {
        index,
        input: None,
        output: None,
        output_size: None,
        classification: Classification::Skipped(e.to_string()),
    };
    let input = match src.verdict(x, inner) {
        Ok(v) => v,
        Err(e) => return skipped(e),
    };
    let out = match reduction.apply(src, dst, x, cap) {
        Ok(o) => o,
        Err(e) => return skipped(e),
    };
    if !same_base(out.base(), dst.a.base()) {
        return skipped(Error::BaseMismatch("reduction output is over another base".into()));
    }
    let output = match dst.verdict(&out, inner) {
        Ok(v) => v,
        Err(e) => return skipped(e),
    };
    let classification = match (input, output) {
        (Verdict::Neither, _) => Classification::OutsidePromise,
        (Verdict::Yes, Verdict::Yes) => Classification::Complete,
        (Verdict::No, Verdict::No) => Classification::Sound,
        _ => Classification::Violation,
    };
    ReportEntry {
        index,
        input: Some(input),
        output: Some(output),
        output_size: Some(out.num_elements()),
        classification,
    }
}

/// Runs the reduction and both solvers on every instance. Instances are
/// processed in parallel under [`Execution::Parallel`]; the report keeps
/// corpus order.
pub fn harness(
    corpus: &[Copresheaf],
    src: &TemplatePair,
    dst: &TemplatePair,
    reduction: &Reduction,
    assertion: &str,
    cap: usize,
    exec: Execution,
) -> ReductionReport {
    let items: Vec<(usize, &Copresheaf)> = corpus.iter().enumerate().collect();
    let entries = exec.map(items, |(i, x)| run_one(i, x, src, dst, reduction, cap, Execution::Sequential));
    ReductionReport {
        reduction: reduction.name().to_string(),
        assertion: assertion.to_string(),
        entries,
    }
}

/// Every multidigraph up to the bounds, one per isomorphism class.
pub fn exhaustive_corpus(max_vertices: usize, max_edges: usize) -> Vec<Copresheaf> {
    all_multidigraphs(max_vertices, max_edges)
}

/// `count` random multidigraphs with up to the given numbers of vertices and
/// edges, loops allowed.
pub fn random_corpus(seed: u64, count: usize, max_vertices: usize, max_edges: usize) -> Vec<Copresheaf> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(0..=max_vertices);
            let m = if n == 0 { 0 } else { rng.gen_range(0..=max_edges) };
            random_digraph(&mut rng, n, m, true)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copresheaf::{empty, hom_exists, DEFAULT_SIZE_CAP};
    use crate::graphs::{complete, digraph, loop_vertex, path};

    const CAP: usize = DEFAULT_SIZE_CAP;

    fn k3_pair() -> TemplatePair {
        TemplatePair::single(complete(3))
    }

    #[test]
    fn path_stays_colourable() {
        let p = k3_pair();
        let out = universal_reduction(&p, &p, &path(3), CAP).unwrap();
        assert!(hom_exists(&out, &complete(3)).unwrap());
    }

    #[test]
    fn loop_stays_uncolourable() {
        let p = k3_pair();
        let out = universal_reduction(&p, &p, &loop_vertex(), CAP).unwrap();
        assert!(!hom_exists(&out, &complete(3)).unwrap());
    }

    #[test]
    fn empty_instance_maps_anywhere() {
        let p = k3_pair();
        let out = universal_reduction(&p, &p, &digraph(0, &[]), CAP).unwrap();
        assert_eq!(out.num_elements(), 0);
        assert!(hom_exists(&out, &loop_vertex()).unwrap());
    }

    #[test]
    fn two_paths_agree() {
        let p = k3_pair();
        for x in [path(3), loop_vertex(), digraph(2, &[(0, 1), (1, 0), (0, 1)])] {
            let direct = universal_reduction(&p, &p, &x, CAP).unwrap();
            let via_gl = universal_reduction_via_gl(&p, &p, &x, CAP).unwrap();
            assert!(direct == via_gl);
        }
    }

    #[test]
    fn promise_is_checked() {
        assert!(matches!(
            TemplatePair::new(loop_vertex(), complete(3)),
            Err(Error::Promise(_))
        ));
    }

    #[test]
    fn identity_and_universal_pass() {
        let p = k3_pair();
        let corpus = exhaustive_corpus(3, 2);
        for r in [Reduction::Identity, Reduction::Universal] {
            let report = harness(&corpus, &p, &p, &r, "identity transformation", CAP, Execution::default());
            assert!(report.passes(), "{report}");
            assert!(report.count(|c| *c == Classification::Sound) > 0);
        }
    }

    #[test]
    fn constant_output_is_caught() {
        let p = k3_pair();
        let corpus = exhaustive_corpus(3, 2);
        let bad = Reduction::Constant(empty(p.a.base()));
        let report = harness(&corpus, &p, &p, &bad, "none", CAP, Execution::Sequential);
        assert!(!report.passes());
    }

    #[test]
    fn random_corpus_is_seeded() {
        let a = random_corpus(7, 5, 4, 4);
        let b = random_corpus(7, 5, 4, 4);
        assert!(a.iter().zip(&b).all(|(x, y)| x == y));
    }
}
