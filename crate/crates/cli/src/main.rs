use std::cell::RefCell;
use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use catcsp::copresheaf::{HomProblem, DEFAULT_SIZE_CAP};
use catcsp::fincat::parse_category;
use catcsp::graphs::{builtin_base, complete, cycle, loop_vertex, path, undirected_complete, undirected_cycle};
use catcsp::grothendieck::{gl, gr, instance_to_text, parse_instance};
use catcsp::kan::{lan_eval, nerve, ran_eval, verify_adjunction, yoneda_extend, GadgetFunctor};
use catcsp::minion::{
    self, check_witness, indicator, interpretable, probe_hardness, satisfies, satisfies_by_enumeration,
    HardnessProbeResult, MinorCondition,
};
use catcsp::par::Execution;
use catcsp::reduce::{self, harness, Reduction, TemplatePair};
use catcsp::structures::{
    canonical_formula, canonical_structure, gadget_to_ppinterp, pp_sentence_to_instance, ppinterp_to_gadget,
    single_sorted, to_structure, PPFormula, PPInterpretation, RelationalStructure, Signature,
};
use catcsp::{Copresheaf, FinCategory, FinSet};

#[derive(Parser)]
#[command(name = "catcsp", version, about = "Constraint satisfaction over finite copresheaves")]
struct Cli {
    /// Bound on the size of any set built by exponentiation or closure.
    #[arg(long, global = true, default_value_t = DEFAULT_SIZE_CAP)]
    cap: usize,
    /// Seed for corpus sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Args)]
struct Pair {
    /// Template `A` (file or builtin such as `builtin:complete(3)`).
    #[arg(long)]
    template: String,
    /// Second template `B` of a promise pair; defaults to `A`.
    #[arg(long)]
    target: Option<String>,
}

#[derive(Args)]
struct TwoPairs {
    /// Source template `A`.
    #[arg(long)]
    src_template: String,
    /// Source promise target `B`; defaults to `A`.
    #[arg(long)]
    src_target: Option<String>,
    /// Destination template `A'`.
    #[arg(long)]
    dst_template: String,
    /// Destination promise target `B'`; defaults to `A'`.
    #[arg(long)]
    dst_target: Option<String>,
    #[arg(long, value_enum, default_value_t = ReductionKind::Universal)]
    reduction: ReductionKind,
    /// Gadget description file for `--reduction gadget`.
    #[arg(long)]
    gadget: Option<PathBuf>,
    /// The natural transformation the reduction relies on, as asserted.
    #[arg(long, default_value = "Ran_{A'}B' -> Ran_A B asserted by the caller")]
    assume: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReductionKind {
    Identity,
    Universal,
    Gadget,
    Constant,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConvertTarget {
    Sat,
    Hom,
}

#[derive(Subcommand)]
enum Command {
    /// Decide, count or enumerate homomorphisms `X -> A`.
    Solve {
        #[arg(long)]
        template: String,
        #[arg(long)]
        instance: String,
        #[arg(long)]
        enumerate: bool,
        #[arg(long)]
        count: bool,
    },
    /// Limit of a diagram given in the copresheaf format over its shape.
    Limit {
        #[arg(long)]
        diagram: String,
        #[arg(long)]
        enumerate: bool,
        #[arg(long)]
        count: bool,
    },
    /// Colimit of a diagram.
    Colimit {
        #[arg(long)]
        diagram: String,
    },
    /// Category of elements with its projection, as an instance functor.
    Gr {
        #[arg(long)]
        instance: String,
    },
    /// `gl` of an instance functor into `--base`.
    Gl {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        base: String,
    },
    /// Move between the homomorphism and satisfiability forms of an instance.
    Convert {
        #[arg(long, value_enum)]
        to: ConvertTarget,
        #[arg(long)]
        instance: String,
        /// Base of an instance functor (for `--to hom`).
        #[arg(long)]
        base: Option<String>,
    },
    /// `Ran_A B` (polymorphisms) at the given arities.
    Ran {
        #[command(flatten)]
        pair: Pair,
        #[arg(long = "arity", default_values_t = vec![1usize, 2])]
        arities: Vec<usize>,
    },
    /// `Lan_A X` evaluated at a set of the given size.
    Lan {
        #[arg(long)]
        template: String,
        #[arg(long)]
        instance: String,
        #[arg(long)]
        arity: usize,
    },
    /// Yoneda extension of a gadget functor applied to an instance.
    GadgetApply {
        #[arg(long)]
        gadget: PathBuf,
        #[arg(long)]
        instance: String,
    },
    /// Nerve of a gadget functor at a copresheaf.
    Nerve {
        #[arg(long)]
        gadget: PathBuf,
        #[arg(long)]
        instance: String,
    },
    /// Compare `|hom(kay_G A, C)|` with `|hom(A, nerve_G C)|`.
    VerifyAdjunction {
        #[arg(long)]
        gadget: PathBuf,
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
    },
    /// Whether `Pol(A, B)` satisfies a minor condition.
    CheckCondition {
        #[command(flatten)]
        pair: Pair,
        /// Condition file or `builtin:siggers|symmetric-binary|trivial`.
        #[arg(long)]
        condition: String,
        /// Also decide by enumerating polymorphisms and compare.
        #[arg(long)]
        oracle: bool,
    },
    /// Whether `--condition` is interpretable in `--in`.
    Interpretable {
        #[arg(long)]
        condition: String,
        #[arg(long = "in")]
        within: String,
    },
    /// Search for choice functions `Pol(A, B)(N) -> N` over small arities.
    ProbeHardness {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 2)]
        max_arity: usize,
    },
    /// The indicator structure `gl(D_Γ) ∘ A`.
    Indicator {
        #[arg(long)]
        template: String,
        #[arg(long)]
        condition: String,
    },
    /// Relational structure to copresheaf.
    Encode {
        #[arg(long)]
        structure: PathBuf,
    },
    /// Copresheaf over a signature category to relational structure.
    Decode {
        #[arg(long)]
        copresheaf: String,
    },
    /// Single-sorted encoding of a copresheaf.
    SingleSorted {
        #[arg(long)]
        copresheaf: String,
    },
    /// Instance functor of a pp-sentence over `--base`.
    PpToInstance {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        base: String,
    },
    /// Gadget functor of a pp-interpretation, written to `--out-dir`.
    PpToGadget {
        #[arg(long)]
        interpretation: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// pp-interpretation of a gadget between signature categories.
    GadgetToPp {
        #[arg(long)]
        gadget: PathBuf,
    },
    /// Canonical structure of a formula, or canonical formula of a structure.
    Canonical {
        #[arg(long, conflicts_with = "structure")]
        formula: Option<String>,
        #[arg(long, requires = "formula")]
        signature: Option<String>,
        #[arg(long)]
        structure: Option<PathBuf>,
    },
    /// Apply a reduction to one instance.
    Reduce {
        #[command(flatten)]
        pairs: TwoPairs,
        #[arg(long)]
        instance: String,
    },
    /// Run a reduction over a corpus and classify every instance.
    Harness {
        #[command(flatten)]
        pairs: TwoPairs,
        /// `exhaustive:V:E`, `random:N:V:E` (seeded by `--seed`).
        #[arg(long)]
        corpus: Option<String>,
        /// Instance files added to the corpus.
        #[arg(long = "instance")]
        instances: Vec<String>,
        /// Process instances one at a time.
        #[arg(long)]
        sequential: bool,
    },
}

/// Loads files, sharing one category per base reference.
struct Loader {
    cap: usize,
    categories: RefCell<HashMap<String, Arc<FinCategory>>>,
}

/// A loaded copresheaf with the reference to print for its base.
struct Loaded {
    value: Copresheaf,
    base_ref: String,
}

fn parse_builtin_arg(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix)?.strip_suffix(')')?.trim().parse().ok()
}

impl Loader {
    fn category(&self, reference: &str, dir: &Path) -> catcsp::Result<(Arc<FinCategory>, String)> {
        let reference = reference.trim();
        let key = if reference.starts_with("builtin:") {
            reference.to_string()
        } else {
            let p = dir.join(reference);
            fs::canonicalize(&p).unwrap_or(p).display().to_string()
        };
        if let Some(c) = self.categories.borrow().get(&key) {
            return Ok((c.clone(), key));
        }
        let cat = if key.starts_with("builtin:") {
            builtin_base(&key)?
        } else {
            Arc::new(parse_category(&fs::read_to_string(&key)?, self.cap)?)
        };
        self.categories.borrow_mut().insert(key.clone(), cat.clone());
        Ok((cat, key))
    }

    fn copresheaf(&self, reference: &str) -> Result<Loaded> {
        let builtin = |value: Copresheaf, base: &str| Loaded {
            value,
            base_ref: base.to_string(),
        };
        let r = reference.trim();
        if let Some(k) = parse_builtin_arg(r, "builtin:complete(") {
            return Ok(builtin(complete(k), "builtin:digraph"));
        }
        if let Some(n) = parse_builtin_arg(r, "builtin:cycle(") {
            return Ok(builtin(cycle(n), "builtin:digraph"));
        }
        if let Some(n) = parse_builtin_arg(r, "builtin:path(") {
            return Ok(builtin(path(n), "builtin:digraph"));
        }
        if let Some(n) = parse_builtin_arg(r, "builtin:ucycle(") {
            return Ok(builtin(undirected_cycle(n), "builtin:graph"));
        }
        if let Some(k) = parse_builtin_arg(r, "builtin:ucomplete(") {
            return Ok(builtin(undirected_complete(k), "builtin:graph"));
        }
        if r == "builtin:loop" {
            return Ok(builtin(loop_vertex(), "builtin:digraph"));
        }
        let path = Path::new(r);
        let text = fs::read_to_string(path).with_context(|| format!("reading {r}"))?;
        let dir = path.parent().unwrap_or(Path::new("."));
        let base_ref = RefCell::new(String::new());
        let value = Copresheaf::parse(&text, &|b| {
            let (cat, key) = self.category(b, dir)?;
            *base_ref.borrow_mut() = key;
            Ok(cat)
        })
        .with_context(|| format!("parsing {r}"))?;
        Ok(Loaded {
            value,
            base_ref: base_ref.into_inner(),
        })
    }

    /// A gadget description with the references of its source and target.
    fn gadget(&self, file: &Path) -> Result<(GadgetFunctor, String, String)> {
        let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
        let dir = file.parent().unwrap_or(Path::new(".")).to_path_buf();
        let refs = RefCell::new(Vec::new());
        let g = GadgetFunctor::parse(
            &text,
            &|f| {
                self.copresheaf(&dir.join(f).display().to_string())
                    .map(|l| l.value)
                    .map_err(|e| catcsp::Error::Parse(format!("{e:#}")))
            },
            &|r| {
                let (cat, key) = self.category(r, &dir)?;
                refs.borrow_mut().push(key);
                Ok(cat)
            },
        )
        .with_context(|| format!("parsing {}", file.display()))?;
        let refs = refs.into_inner();
        let (s, t) = (refs.first().cloned().unwrap_or_default(), refs.get(1).cloned().unwrap_or_default());
        Ok((g, s, t))
    }

    fn condition(&self, reference: &str) -> Result<MinorCondition> {
        if let Some(name) = reference.strip_prefix("builtin:") {
            return minion::builtin::by_name(name).ok_or_else(|| anyhow!("unknown builtin condition {name}"));
        }
        Ok(MinorCondition::parse(&fs::read_to_string(reference).with_context(|| format!("reading {reference}"))?)?)
    }

    fn pair(&self, pair: &Pair) -> Result<(Loaded, Loaded)> {
        let a = self.copresheaf(&pair.template)?;
        let b = match &pair.target {
            Some(t) => self.copresheaf(t)?,
            None => Loaded {
                value: a.value.clone(),
                base_ref: a.base_ref.clone(),
            },
        };
        Ok((a, b))
    }
}

fn copresheaf_json(c: &Copresheaf) -> Value {
    let base = c.base();
    let sets: serde_json::Map<String, Value> = (0..base.num_objects())
        .map(|o| (base.object_name(o).to_string(), json!(c.set(o).names())))
        .collect();
    let maps: serde_json::Map<String, Value> = base
        .non_identities()
        .map(|m| (base.morphism(m).name.clone(), json!(c.function(m).to_vec())))
        .collect();
    json!({ "sets": sets, "maps": maps })
}

fn structure_json(s: &RelationalStructure) -> Value {
    let rels: serde_json::Map<String, Value> = s
        .signature
        .symbols
        .iter()
        .zip(&s.relations)
        .map(|((n, _), r)| (n.clone(), json!(r)))
        .collect();
    json!({ "domain": s.domain.names(), "relations": rels })
}

/// What a subcommand produced.
struct Output {
    text: String,
    machine: Value,
    violation: bool,
}

impl Output {
    fn ok(text: String, machine: Value) -> Self {
        Self {
            text,
            machine,
            violation: false,
        }
    }
}

fn run(cli: &Cli) -> Result<Output> {
    let cap = cli.cap;
    let loader = Loader {
        cap,
        categories: RefCell::new(HashMap::new()),
    };
    let exec = Execution::default();
    let out = match &cli.command {
        Command::Solve {
            template,
            instance,
            enumerate,
            count,
        } => {
            let a = loader.copresheaf(template)?.value;
            let x = loader.copresheaf(instance)?.value;
            let problem = HomProblem::new(&x, &a)?;
            let names = |components: &[catcsp::findiag::Func]| -> Vec<String> {
                let base = x.base();
                let mut lines = Vec::new();
                for o in 0..base.num_objects() {
                    for (e, &v) in components[o].iter().enumerate() {
                        lines.push(format!("{} : {} -> {}", base.object_name(o), x.set(o).name(e), a.set(o).name(v)));
                    }
                }
                lines
            };
            if *count {
                let n = problem.count(exec);
                Output::ok(format!("{n}\n"), json!({ "count": n }))
            } else if *enumerate {
                let all = problem.all_components(exec);
                let mut text = format!("{} homomorphisms\n", all.len());
                for (i, h) in all.iter().enumerate() {
                    text.push_str(&format!("# {i}\n{}\n", names(h).join("\n")));
                }
                Output::ok(text, json!({ "count": all.len(), "homomorphisms": all }))
            } else {
                match problem.first(exec) {
                    Some(h) => Output::ok(
                        format!("yes\n{}\n", names(&h.components).join("\n")),
                        json!({ "exists": true, "witness": h.components }),
                    ),
                    None => Output::ok("no\n".into(), json!({ "exists": false })),
                }
            }
        }
        Command::Limit {
            diagram,
            enumerate,
            count,
        } => {
            let d = loader.copresheaf(diagram)?.value;
            let d = d.diagram();
            if *count {
                let n = d.limit_count();
                Output::ok(format!("{n}\n"), json!({ "count": n }))
            } else {
                let mode = if *enumerate {
                    catcsp::findiag::Mode::Enumerate
                } else {
                    catcsp::findiag::Mode::Decide
                };
                let lim = d.limit(mode);
                let mut text = format!("{}\n", if lim.nonempty { "nonempty" } else { "empty" });
                for sol in &lim.solutions {
                    let parts: Vec<String> = sol
                        .iter()
                        .enumerate()
                        .map(|(o, &v)| format!("{}={}", d.shape.object_name(o), d.set(o).name(v)))
                        .collect();
                    text.push_str(&format!("{}\n", parts.join(" ")));
                }
                Output::ok(text, json!({ "nonempty": lim.nonempty, "solutions": lim.solutions }))
            }
        }
        Command::Colimit { diagram } => {
            let d = loader.copresheaf(diagram)?.value;
            let q = d.diagram().colimit();
            let mut text = format!("carrier {}\n", q.carrier);
            for (o, inj) in q.injections.iter().enumerate() {
                for (x, &c) in inj.iter().enumerate() {
                    text.push_str(&format!(
                        "inject {} : {} -> {}\n",
                        d.base().object_name(o),
                        d.set(o).name(x),
                        q.carrier.name(c)
                    ));
                }
            }
            Output::ok(text, json!({ "carrier": q.carrier.names(), "injections": q.injections }))
        }
        Command::Gr { instance } | Command::Convert { to: ConvertTarget::Sat, instance, .. } => {
            let x = loader.copresheaf(instance)?;
            let el = gr(&x.value);
            let text = instance_to_text(&el.projection, &x.base_ref);
            let machine = json!({
                "objects": el.category.objects(),
                "morphisms": el.category.morphisms().iter().map(|m| json!([m.name, m.source, m.target])).collect::<Vec<_>>(),
                "projection": { "objects": el.projection.objects, "morphisms": el.projection.morphisms },
            });
            Output::ok(text, machine)
        }
        Command::Gl { instance, base } => gl_output(&loader, instance, Some(base), cap)?,
        Command::Convert { to: ConvertTarget::Hom, instance, base } => {
            gl_output(&loader, Path::new(instance), base.as_deref(), cap)?
        }
        Command::Ran { pair, arities } => {
            let (a, b) = loader.pair(pair)?;
            let sets: Vec<FinSet> = arities.iter().map(|&n| FinSet::range(n)).collect();
            let table = ran_eval(&a.value, &b.value, &sets, cap)?;
            let functorial = table.check_functorial();
            let mut text = String::new();
            for (n, e) in arities.iter().zip(&table.elements) {
                text.push_str(&format!("arity {n}: {} polymorphisms\n", e.len()));
            }
            text.push_str(&format!("functorial: {functorial}\n"));
            let sizes: Vec<usize> = table.elements.iter().map(Vec::len).collect();
            Output {
                text,
                machine: json!({ "arities": arities, "sizes": sizes, "functorial": functorial }),
                violation: !functorial,
            }
        }
        Command::Lan {
            template,
            instance,
            arity,
        } => {
            let a = loader.copresheaf(template)?.value;
            let x = loader.copresheaf(instance)?.value;
            let s = lan_eval(&a, &x, &FinSet::range(*arity), cap)?;
            Output::ok(format!("{} elements\n{}\n", s.len(), s), json!({ "elements": s.names() }))
        }
        Command::GadgetApply { gadget, instance } => {
            let (g, _, tgt) = loader.gadget(gadget)?;
            let x = loader.copresheaf(instance)?.value;
            let out = yoneda_extend(&g, &x)?;
            Output::ok(out.to_text(&tgt), copresheaf_json(&out))
        }
        Command::Nerve { gadget, instance } => {
            let (g, src, _) = loader.gadget(gadget)?;
            let c = loader.copresheaf(instance)?.value;
            let out = nerve(&g, &c)?;
            Output::ok(out.to_text(&src), copresheaf_json(&out))
        }
        Command::VerifyAdjunction { gadget, source, target } => {
            let (g, _, _) = loader.gadget(gadget)?;
            let a = loader.copresheaf(source)?.value;
            let c = loader.copresheaf(target)?.value;
            let check = verify_adjunction(&g, &a, &c)?;
            Output {
                text: format!(
                    "|hom(kay A, C)| = {}\n|hom(A, nerve C)| = {}\n{}\n",
                    check.left,
                    check.right,
                    if check.holds { "holds" } else { "FAILS" }
                ),
                machine: json!({ "left": check.left, "right": check.right, "holds": check.holds }),
                violation: !check.holds,
            }
        }
        Command::CheckCondition { pair, condition, oracle } => {
            let (a, b) = loader.pair(pair)?;
            let gamma = loader.condition(condition)?;
            let s = satisfies(&a.value, &b.value, &gamma, cap)?;
            let mut text = format!("{}\n", if s.satisfied { "satisfied" } else { "not satisfied" });
            let mut violation = false;
            let mut machine = json!({ "satisfied": s.satisfied, "witness": s.witness });
            if *oracle {
                let e = satisfies_by_enumeration(&a.value, &b.value, &gamma, cap)?;
                violation = e.satisfied != s.satisfied;
                text.push_str(&format!(
                    "enumeration: {}\n",
                    if e.satisfied { "satisfied" } else { "not satisfied" }
                ));
                machine["enumeration"] = json!(e.satisfied);
            }
            Output {
                text,
                machine,
                violation,
            }
        }
        Command::Interpretable { condition, within } => {
            let pi = loader.condition(condition)?;
            let gamma = loader.condition(within)?;
            let r = interpretable(&pi, &gamma, cap)?;
            Output::ok(format!("{r}\n"), json!({ "interpretable": r }))
        }
        Command::ProbeHardness { pair, max_arity } => {
            let (a, b) = loader.pair(pair)?;
            let probe = probe_hardness(&a.value, &b.value, *max_arity, cap)?;
            let (text, violation) = match &probe.result {
                HardnessProbeResult::RefutedAt { arity } => (
                    format!("refuted at arity {arity}: no natural transformation Ran_A B -> id\n"),
                    false,
                ),
                HardnessProbeResult::BoundedWitness { witness } => {
                    let ok = check_witness(&probe.table, witness);
                    (
                        format!(
                            "bounded witness up to arity {max_arity} (evidence only); naturality {}\n",
                            if ok { "checked" } else { "FAILS" }
                        ),
                        !ok,
                    )
                }
            };
            Output {
                text,
                machine: serde_json::to_value(&probe.result)?,
                violation,
            }
        }
        Command::Indicator { template, condition } => {
            let a = loader.copresheaf(template)?;
            let gamma = loader.condition(condition)?;
            let ind = indicator(&a.value, &gamma, cap)?;
            Output::ok(ind.to_text(&a.base_ref), copresheaf_json(&ind))
        }
        Command::Encode { structure } => {
            let s = RelationalStructure::parse(&fs::read_to_string(structure)?)?;
            let base_ref = format!("builtin:signature({})", s.signature);
            let (cat, _) = loader.category(&base_ref, Path::new("."))?;
            let c = s.to_copresheaf_over(cat);
            Output::ok(c.to_text(&base_ref), copresheaf_json(&c))
        }
        Command::Decode { copresheaf } => {
            let c = loader.copresheaf(copresheaf)?.value;
            let s = to_structure(&c)?;
            Output::ok(s.to_text(), structure_json(&s))
        }
        Command::SingleSorted { copresheaf } => {
            let c = loader.copresheaf(copresheaf)?.value;
            let s = single_sorted(&c, cap)?;
            Output::ok(s.to_text(), structure_json(&s))
        }
        Command::PpToInstance { formula, base } => {
            let (cat, key) = loader.category(base, Path::new("."))?;
            let phi = PPFormula::parse(formula)?;
            let f = pp_sentence_to_instance(&phi, &cat)?;
            Output::ok(instance_to_text(&f, &key), json!({ "objects": f.source.objects() }))
        }
        Command::PpToGadget { interpretation, out_dir } => {
            let phi = PPInterpretation::parse(&fs::read_to_string(interpretation)?)?;
            let g = ppinterp_to_gadget(&phi)?;
            let src = format!("builtin:signature({})", phi.target);
            let tgt = format!("builtin:signature({})", phi.source);
            let (main, files) = g.to_files(&src, &tgt);
            fs::create_dir_all(out_dir)?;
            for (name, text) in &files {
                fs::write(out_dir.join(name), text)?;
            }
            let main_path = out_dir.join("gadget.txt");
            fs::write(&main_path, &main)?;
            Output::ok(
                format!("{}\n", main_path.display()),
                json!({ "gadget": main_path, "files": files.iter().map(|f| &f.0).collect::<Vec<_>>() }),
            )
        }
        Command::GadgetToPp { gadget } => {
            let (g, _, _) = loader.gadget(gadget)?;
            let phi = gadget_to_ppinterp(&g)?;
            Output::ok(phi.to_text(), json!({ "interpretation": phi.to_text() }))
        }
        Command::Canonical {
            formula,
            signature,
            structure,
        } => match (formula, structure) {
            (Some(f), None) => {
                let phi = PPFormula::parse(f)?;
                let sig = Signature::parse_list(signature.as_deref().ok_or_else(|| anyhow!("--signature is required"))?)?;
                let (s, _) = canonical_structure(&phi, &sig)?;
                Output::ok(s.to_text(), structure_json(&s))
            }
            (None, Some(p)) => {
                let s = RelationalStructure::parse(&fs::read_to_string(p)?)?;
                let phi = canonical_formula(&s);
                Output::ok(format!("{phi}\n"), json!({ "formula": phi.to_string() }))
            }
            _ => bail!("give exactly one of --formula or --structure"),
        },
        Command::Reduce { pairs, instance } => {
            let (src, dst, dst_ref, reduction) = setup_reduction(&loader, pairs)?;
            let x = loader.copresheaf(instance)?.value;
            let out = reduction.apply(&src, &dst, &x, cap)?;
            let mut text = format!("# assumes: {}\n", pairs.assume);
            text.push_str(&out.to_text(&dst_ref));
            Output::ok(text, json!({ "assumes": pairs.assume, "output": copresheaf_json(&out) }))
        }
        Command::Harness {
            pairs,
            corpus,
            instances,
            sequential,
        } => {
            let (src, dst, _, reduction) = setup_reduction(&loader, pairs)?;
            let mut items = match corpus.as_deref() {
                None => Vec::new(),
                Some(spec) => corpus_from_spec(spec, cli.seed)?,
            };
            for f in instances {
                items.push(loader.copresheaf(f)?.value);
            }
            let exec = if *sequential { Execution::Sequential } else { Execution::default() };
            let report = harness(&items, &src, &dst, &reduction, &pairs.assume, cap, exec);
            Output {
                text: report.to_string(),
                machine: serde_json::to_value(&report)?,
                violation: !report.passes(),
            }
        }
    };
    Ok(out)
}

fn gl_output(loader: &Loader, instance: &Path, base: Option<&str>, cap: usize) -> Result<Output> {
    let base = base.ok_or_else(|| anyhow!("an instance functor needs --base"))?;
    let (cat, key) = loader.category(base, Path::new("."))?;
    let f = parse_instance(&fs::read_to_string(instance)?, cat, cap)?;
    let g = gl(&f)?;
    Ok(Output::ok(g.to_text(&key), copresheaf_json(&g)))
}

fn setup_reduction(loader: &Loader, p: &TwoPairs) -> Result<(TemplatePair, TemplatePair, String, Reduction)> {
    let load_pair = |a: &str, b: &Option<String>| -> Result<(TemplatePair, String)> {
        let a = loader.copresheaf(a)?;
        let b = match b {
            Some(b) => loader.copresheaf(b)?.value,
            None => a.value.clone(),
        };
        Ok((TemplatePair::new(a.value, b)?, a.base_ref))
    };
    let (src, _) = load_pair(&p.src_template, &p.src_target)?;
    let (dst, dst_ref) = load_pair(&p.dst_template, &p.dst_target)?;
    let reduction = match p.reduction {
        ReductionKind::Identity => Reduction::Identity,
        ReductionKind::Universal => Reduction::Universal,
        ReductionKind::Constant => Reduction::Constant(catcsp::copresheaf::empty(dst.a.base())),
        ReductionKind::Gadget => {
            let file = p.gadget.as_ref().ok_or_else(|| anyhow!("--reduction gadget needs --gadget"))?;
            Reduction::Gadget(loader.gadget(file)?.0)
        }
    };
    Ok((src, dst, dst_ref, reduction))
}

fn corpus_from_spec(spec: &str, seed: u64) -> Result<Vec<Copresheaf>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| s.parse::<usize>().with_context(|| format!("bad number `{s}` in corpus spec"));
    match parts.as_slice() {
        ["exhaustive", v, e] => Ok(reduce::exhaustive_corpus(num(v)?, num(e)?)),
        ["random", n, v, e] => Ok(reduce::random_corpus(seed, num(n)?, num(v)?, num(e)?)),
        _ => bail!("corpus spec must be `exhaustive:V:E` or `random:N:V:E`"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text),
                Format::Machine => println!("{}", out.machine),
            }
            if out.violation {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            match cli.format {
                Format::Text => eprintln!("error: {e:#}"),
                Format::Machine => println!("{}", json!({ "error": format!("{e:#}") })),
            }
            ExitCode::from(2)
        }
    }
}
