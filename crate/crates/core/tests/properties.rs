mod oracle;

use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use catcsp::copresheaf::{hom_all, hom_count, hom_equivalent, power, HomProblem, NatTransformation, DEFAULT_SIZE_CAP};
use catcsp::fincat::parse_category;
use catcsp::findiag::{Func, Mode};
use catcsp::graphs::{complete, digraph, digraph_base, edges_of, loop_vertex, random_digraph};
use catcsp::grothendieck::{gl, gr, template_condition, GlMinion};
use catcsp::kan::{lan_eval, nerve_polymorphism, polymorphisms, ran_eval, yoneda_extend, GadgetFunctor, Minion};
use catcsp::minion::{
    builtin, check_interpretation, check_witness, interpretable, probe_hardness, satisfies,
    satisfies_by_enumeration, HardnessProbeResult, MinorCondition, MinorIdentity,
};
use catcsp::par::Execution;
use catcsp::reduce::{harness, Reduction, TemplatePair};
use catcsp::structures::{pp_sentence_to_instance, PPFormula};
use catcsp::{Copresheaf, FinCategory, FinDiagram, FinSet};

const CAP: usize = DEFAULT_SIZE_CAP;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn graph(r: &mut ChaCha8Rng, lo: usize, hi: usize, max_edges: usize) -> Copresheaf {
    let n = r.gen_range(lo..=hi);
    let m = if n == 0 { 0 } else { r.gen_range(0..=max_edges) };
    random_digraph(r, n, m, true)
}

/// A random diagram over a composition-free shape (arrows only from sources
/// to sinks).
fn random_diagram(r: &mut ChaCha8Rng) -> FinDiagram {
    let n = r.gen_range(1..=4);
    let sizes: Vec<usize> = (0..n).map(|_| r.gen_range(0..=3)).collect();
    let (mut has_in, mut has_out) = (vec![false; n], vec![false; n]);
    let mut arrows = Vec::new();
    let mut tables: Vec<Func> = Vec::new();
    for k in 0..r.gen_range(0..=4) {
        let (i, j) = (r.gen_range(0..n), r.gen_range(0..n));
        if i == j || has_in[i] || has_out[j] || (sizes[i] > 0 && sizes[j] == 0) {
            continue;
        }
        has_out[i] = true;
        has_in[j] = true;
        arrows.push((format!("a{k}"), i, j));
        tables.push((0..sizes[i]).map(|_| r.gen_range(0..sizes[j])).collect());
    }
    let shape = Arc::new(FinCategory::composition_free((0..n).map(|i| format!("o{i}")).collect(), arrows));
    let mut functions: Vec<Func> = sizes.iter().map(|&s| (0..s).collect()).collect();
    functions.extend(tables);
    FinDiagram::new(shape, sizes.into_iter().map(FinSet::range).collect(), functions).unwrap()
}

fn random_condition(r: &mut ChaCha8Rng) -> MinorCondition {
    let symbols: Vec<(String, usize)> = (0..r.gen_range(1..=2))
        .map(|i| (format!("f{i}"), r.gen_range(1..=2)))
        .collect();
    let identities = (0..r.gen_range(0..=2))
        .map(|_| {
            let (left, right) = (r.gen_range(0..symbols.len()), r.gen_range(0..symbols.len()));
            let map = (0..symbols[left].1).map(|_| r.gen_range(0..symbols[right].1)).collect();
            MinorIdentity { left, right, map }
        })
        .collect();
    MinorCondition::new(symbols, identities).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_presentations_validate(p in 2usize..5, q in 0usize..2, comm in any::<bool>()) {
        let mut text = String::from("object X\narrow a : X -> X\narrow b : X -> X\n");
        let power = |g: &str, k: usize| if k == 0 { "id_X".to_string() } else { vec![g; k].join(" . ") };
        text.push_str(&format!("relation {} = {}\n", power("a", p), power("a", q)));
        text.push_str("relation b . b = id_X\n");
        text.push_str(if comm { "relation a . b = b . a\n" } else { "relation b . a = a . a . b\n" });
        let c = match parse_category(&text, 200) {
            Ok(c) => c,
            Err(catcsp::Error::CapExceeded(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert!(c.validate().is_ok());
        let n = c.num_morphisms();
        for f in 0..n {
            for g in 0..n {
                for h in 0..n {
                    let (Some(gf), Some(hg)) = (c.compose(g, f), c.compose(h, g)) else { continue };
                    prop_assert_eq!(c.compose(h, gf), c.compose(hg, f));
                }
            }
        }
        let back = c.opposite().opposite();
        for f in 0..n {
            for g in 0..n {
                prop_assert_eq!(back.compose(g, f), c.compose(g, f));
            }
        }
    }

    #[test]
    fn limits_match_product_scan(seed in any::<u64>()) {
        let d = random_diagram(&mut rng(seed));
        let lim = d.limit(Mode::Enumerate);
        for s in &lim.solutions {
            for m in d.shape.non_identities() {
                prop_assert_eq!(d.function(m)[s[d.shape.source(m)]], s[d.shape.target(m)]);
            }
        }
        prop_assert_eq!(lim.solutions.len() as u64, oracle::limit_count(&d));
        prop_assert_eq!(lim.nonempty, !lim.solutions.is_empty());
        prop_assert_eq!(d.network().count(Execution::Sequential), d.network().count(Execution::Parallel));
    }

    #[test]
    fn colimit_is_a_cocone(seed in any::<u64>()) {
        let d = random_diagram(&mut rng(seed));
        let q = d.colimit();
        for m in d.shape.non_identities() {
            let (s, t) = (d.shape.source(m), d.shape.target(m));
            for x in 0..d.set(s).len() {
                prop_assert_eq!(q.injections[s][x], q.injections[t][d.function(m)[x]]);
            }
        }
        // Connected components of the element graph, by hand.
        let offsets: Vec<usize> = d.sets.iter().scan(0, |acc, s| { let o = *acc; *acc += s.len(); Some(o) }).collect();
        let total: usize = d.sets.iter().map(FinSet::len).sum();
        let mut parent: Vec<usize> = (0..total).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize { if p[x] == x { x } else { let r = find(p, p[x]); p[x] = r; r } }
        for m in d.shape.non_identities() {
            let (s, t) = (d.shape.source(m), d.shape.target(m));
            for x in 0..d.set(s).len() {
                let (a, b) = (find(&mut parent, offsets[s] + x), find(&mut parent, offsets[t] + d.function(m)[x]));
                parent[a] = b;
            }
        }
        let roots = (0..total).filter(|&x| find(&mut parent, x) == x).count();
        prop_assert_eq!(q.carrier.len(), roots);
    }

    #[test]
    fn hom_counts_match_brute_force(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (x, a) = (graph(&mut r, 0, 4, 5), graph(&mut r, 1, 3, 6));
        prop_assert_eq!(hom_count(&x, &a).unwrap(), oracle::digraph_hom_count(&x, &a));
        let p = HomProblem::new(&x, &a).unwrap();
        prop_assert_eq!(p.count(Execution::Sequential), p.count(Execution::Parallel));
    }

    #[test]
    fn homs_pull_back_along_instance_maps(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (x2, x, a) = (graph(&mut r, 1, 3, 3), graph(&mut r, 1, 3, 4), graph(&mut r, 1, 3, 6));
        let Some(g) = HomProblem::new(&x2, &x).unwrap().first(Execution::default()) else { return Ok(()) };
        for h in hom_all(&x, &a).unwrap().iter().take(8) {
            prop_assert!(h.after(&g).check_naturality().is_ok());
        }
    }

    #[test]
    fn power_sizes_and_projections(seed in any::<u64>()) {
        let a = graph(&mut rng(seed), 1, 3, 4);
        let sq = power(&a, &FinSet::range(2), CAP).unwrap();
        for o in 0..2 {
            prop_assert_eq!(sq.set(o).len(), a.set(o).len().pow(2));
        }
        for coord in 0..2 {
            let components = (0..2)
                .map(|o| {
                    let k = a.set(o).len();
                    (0..k * k).map(|i| if coord == 0 { i / k } else { i % k }).collect()
                })
                .collect();
            let t = NatTransformation { source: sq.clone(), target: a.clone(), components };
            prop_assert!(t.check_naturality().is_ok());
        }
    }

    #[test]
    fn gl_of_gr_is_equivalent(seed in any::<u64>()) {
        let x = graph(&mut rng(seed), 0, 4, 5);
        let back = gl(&gr(&x).projection).unwrap();
        prop_assert!(hom_equivalent(&back, &x).unwrap());
    }

    #[test]
    fn ran_tables_are_functorial(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (graph(&mut r, 1, 2, 3), graph(&mut r, 1, 3, 5));
        let sets = [FinSet::range(1), FinSet::range(2)];
        let t = ran_eval(&a, &b, &sets, CAP).unwrap();
        prop_assert!(t.check_functorial());
    }

    #[test]
    fn lan_agrees_with_gl(seed in any::<u64>(), n in 1usize..3) {
        let mut r = rng(seed);
        let (a, x) = (graph(&mut r, 1, 3, 4), graph(&mut r, 0, 3, 3));
        let set = FinSet::range(n);
        let direct = lan_eval(&a, &x, &set, CAP).unwrap();
        let via = GlMinion::new(template_condition(&a, &x).unwrap(), CAP).eval(&set).unwrap();
        prop_assert_eq!(direct, via);
    }

    #[test]
    fn nerves_carry_polymorphisms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = GadgetFunctor::subdivision();
        let n = r.gen_range(2..=4);
        let a = catcsp::graphs::undirected_cycle(n);
        let b = catcsp::graphs::undirected_complete(r.gen_range(2..=3));
        for f in polymorphisms(&a, &b, &FinSet::range(2), CAP).unwrap().iter().take(4) {
            let h = nerve_polymorphism(&g, &a, &b, 2, &f.components, CAP).unwrap();
            prop_assert!(h.check_naturality().is_ok());
        }
    }

    #[test]
    fn satisfaction_two_paths(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = graph(&mut r, 1, 2, 3);
        let b = graph(&mut r, 1, 3, 5);
        prop_assume!(HomProblem::new(&a, &b).unwrap().exists(Execution::default()));
        let gamma = if r.gen_bool(0.5) { builtin::symmetric_binary() } else { random_condition(&mut r) };
        let s = satisfies(&a, &b, &gamma, CAP).unwrap();
        let e = satisfies_by_enumeration(&a, &b, &gamma, CAP).unwrap();
        prop_assert_eq!(s.satisfied, e.satisfied);
        if let Some(w) = s.witness {
            prop_assert!(check_interpretation(&a, &b, &gamma, &w, CAP).unwrap());
        }
    }

    #[test]
    fn interpretability_is_a_preorder(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (p, q, s) = (random_condition(&mut r), random_condition(&mut r), random_condition(&mut r));
        prop_assert!(interpretable(&p, &p, CAP).unwrap());
        if interpretable(&p, &q, CAP).unwrap() && interpretable(&q, &s, CAP).unwrap() {
            prop_assert!(interpretable(&p, &s, CAP).unwrap());
        }
    }

    #[test]
    fn probe_witnesses_are_natural(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = graph(&mut r, 1, 2, 3);
        let p = probe_hardness(&a, &a, 2, CAP).unwrap();
        if let HardnessProbeResult::BoundedWitness { witness } = &p.result {
            prop_assert!(check_witness(&p.table, witness));
        }
    }

    #[test]
    fn pp_instances_are_composition_free(seed in any::<u64>()) {
        let mut r = rng(seed);
        let vars = r.gen_range(1..=4);
        let atoms: Vec<String> = (0..r.gen_range(1..=4))
            .map(|_| {
                let (x, y) = (r.gen_range(0..vars), r.gen_range(0..vars));
                match r.gen_range(0..3) {
                    0 => format!("s(e{x}) = v{y}"),
                    1 => format!("t(e{x}) = v{y}"),
                    _ => format!("v{x} = v{y}"),
                }
            })
            .collect();
        let names: Vec<String> = (0..vars).flat_map(|i| [format!("e{i}:E"), format!("v{i}:V")]).collect();
        let phi = PPFormula::parse(&format!("exists {} . {}", names.join(" "), atoms.join(" & "))).unwrap();
        let d = pp_sentence_to_instance(&phi, &digraph_base()).unwrap();
        prop_assert!(d.source.is_composition_free());
        prop_assert!(d.validate().is_ok());
    }

    #[test]
    fn yoneda_reduction_preserves_equivalence(seed in any::<u64>()) {
        let x = graph(&mut rng(seed), 0, 4, 5);
        let yo = GadgetFunctor::yoneda(&digraph_base());
        prop_assert!(hom_equivalent(&yoneda_extend(&yo, &x).unwrap(), &x).unwrap());
    }
}

#[test]
fn universal_reduction_on_small_corpus() {
    let pair = TemplatePair::single(complete(3));
    let corpus = catcsp::reduce::exhaustive_corpus(4, 2);
    let report = harness(&corpus, &pair, &pair, &Reduction::Universal, "identity", CAP, Execution::Sequential);
    assert!(report.passes(), "{report}");
    for (entry, x) in report.entries.iter().zip(&corpus) {
        let yes = oracle::three_colourable(x.set(0).len(), &edges_of(x));
        assert_eq!(entry.input == Some(catcsp::reduce::Verdict::Yes), yes);
    }
}

#[test]
fn loop_template_satisfies_every_condition() {
    let l = loop_vertex();
    let mut r = rng(5);
    for _ in 0..20 {
        let gamma = random_condition(&mut r);
        assert!(satisfies(&l, &l, &gamma, CAP).unwrap().satisfied);
    }
    assert!(hom_count(&digraph(2, &[(0, 1)]), &l).unwrap() == 1);
}
