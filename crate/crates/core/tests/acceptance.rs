//! Acceptance criteria, one pass/fail line each. Runs as a plain binary
//! (`harness = false`) so the lines print in order with their timings.

#![allow(clippy::type_complexity)]

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use fibercheck::corpus::{
    build_finfilt, build_finset, build_fintop, corpus_dir, corpus_pseudofunctors, full_corpus,
    random_model, random_pseudofunctor, DEFAULT_BUDGET,
};
use fibercheck::families::{
    check_collection_properties, is_epi_family, is_strict_epi_family, Collection, Family,
};
use fibercheck::fibered::{
    compare_strict_epi_final_surjective, compare_strict_mono_initial_injective, is_fiber_product,
    OverContext,
};
use fibercheck::fincat::{preorder_category, Arr, CompositeDecl, FinCat, FunctorMap, Obj, Violation};
use fibercheck::grothendieck::{
    check_lattice_characterization, extract_pseudofunctor, pseudofunctors_isomorphic,
    PosetPseudofunctor,
};
use fibercheck::lattice::FinPoset;
use fibercheck::mask::{Bound, Exactness};
use fibercheck::model::ModelFile;
use fibercheck::topological::{
    bot_object, classify, pretopological_routes, self_duality_check, theorem_battery, top_object,
    topological_routes, ItemStatus,
};
use fibercheck::verify::check_double_diagram_lemma;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: fibercheck::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Random models checked by the route criteria.
const RANDOM_SEEDS: u64 = 200;
/// Random pseudofunctors added to the corpus ones.
const RANDOM_PSEUDOFUNCTORS: u64 = 60;

// ---------------------------------------------------------------------------
// Oracles over concrete structures: objects are named `n:s1,s2,...` with
// subsets written as digit strings (`e` for the empty one), arrows
// `[src]->[tgt]:table`.

fn parse_subset(s: &str) -> u32 {
    if s == "e" {
        0
    } else {
        s.bytes().fold(0, |m, b| m | 1 << (b - b'0'))
    }
}

fn parse_structure(name: &str) -> (usize, BTreeSet<u32>) {
    let (n, rest) = name.split_once(':').expect("sized name");
    let n: usize = n.parse().expect("size");
    let sets = if rest.is_empty() { BTreeSet::new() } else { rest.split(',').map(parse_subset).collect() };
    (n, sets)
}

fn parse_table(arrow: &str) -> Vec<usize> {
    let t = arrow.rsplit(':').next().expect("table suffix");
    t.bytes().map(|b| (b - b'0') as usize).collect()
}

fn pre(table: &[usize], mask: u32) -> u32 {
    (0..table.len()).filter(|&i| mask >> table[i] & 1 == 1).fold(0, |m, i| m | 1 << i)
}

fn all_subsets(n: usize) -> impl Iterator<Item = u32> {
    0..1u32 << n
}

/// Structure of `X` as read from its name, plus its size.
struct Concrete {
    size: Vec<usize>,
    sets: Vec<BTreeSet<u32>>,
    tables: Vec<Vec<usize>>,
}

impl Concrete {
    fn new(t: &FinCat) -> Concrete {
        let (size, sets) = t.objects().map(|x| parse_structure(t.obj_name(x))).unzip();
        let tables = t.arrows().map(|a| parse_table(t.arr_name(a))).collect();
        Concrete { size, sets, tables }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Topology,
    Filter,
}

/// Smallest structure on an `n`-set containing `sub`.
fn generated(kind: Kind, n: usize, sub: &BTreeSet<u32>) -> BTreeSet<u32> {
    let full = (1u32 << n) - 1;
    let mut s: BTreeSet<u32> = sub.clone();
    s.insert(full);
    if kind == Kind::Topology {
        s.insert(0);
    }
    loop {
        let v: Vec<u32> = s.iter().copied().collect();
        let before = s.len();
        for &a in &v {
            for &b in &v {
                s.insert(a & b);
                if kind == Kind::Topology {
                    s.insert(a | b);
                }
            }
        }
        if kind == Kind::Filter {
            let v: Vec<u32> = s.iter().copied().collect();
            for m in all_subsets(n) {
                if v.iter().any(|&a| a & !m == 0) {
                    s.insert(m);
                }
            }
        }
        if s.len() == before {
            return s;
        }
    }
}

/// Sink over `x`: jointly surjective and carrying the final structure.
fn sink_oracle(c: &Concrete, x: usize, legs: &[(usize, usize)]) -> bool {
    let n = c.size[x];
    let image = legs.iter().fold(0u32, |m, &(a, _)| c.tables[a].iter().fold(m, |m, &v| m | 1 << v));
    let fin: BTreeSet<u32> = all_subsets(n)
        .filter(|&u| legs.iter().all(|&(a, src)| c.sets[src].contains(&pre(&c.tables[a], u))))
        .collect();
    image == (1u32 << n) - 1 && fin == c.sets[x]
}

/// Source out of `x`: jointly injective and carrying the initial structure.
/// The empty source is strict in finite sets only out of the point.
fn source_oracle(kind: Kind, c: &Concrete, x: usize, legs: &[(usize, usize)]) -> bool {
    let n = c.size[x];
    let separated = if legs.is_empty() {
        n == 1
    } else {
        (0..n).all(|i| (0..i).all(|j| legs.iter().any(|&(a, _)| c.tables[a][i] != c.tables[a][j])))
    };
    let sub: BTreeSet<u32> = legs
        .iter()
        .flat_map(|&(a, tgt)| c.sets[tgt].iter().map(move |&v| (a, v)))
        .map(|(a, v)| pre(&c.tables[a], v))
        .collect();
    separated && generated(kind, n, &sub) == c.sets[x]
}

/// Counts, over every object and every subset of its incoming (or
/// outgoing) arrows, the families the oracle accepts.
fn oracle_counts(kind: Kind, t: &FinCat) -> ((u64, u64), (u64, u64)) {
    let c = Concrete::new(t);
    let (mut sinks, mut strict_sinks, mut sources, mut strict_sources) = (0, 0, 0, 0);
    for x in t.objects() {
        let ins: Vec<(usize, usize)> = t.ins(x).iter().map(|&a| (a.idx(), t.src(a).idx())).collect();
        for sel in 0u64..1 << ins.len() {
            let legs: Vec<(usize, usize)> = (0..ins.len()).filter(|i| sel >> i & 1 == 1).map(|i| ins[i]).collect();
            sinks += 1;
            strict_sinks += sink_oracle(&c, x.idx(), &legs) as u64;
        }
        let outs: Vec<(usize, usize)> = t.outs(x).iter().map(|&a| (a.idx(), t.tgt(a).idx())).collect();
        for sel in 0u64..1 << outs.len() {
            let legs: Vec<(usize, usize)> = (0..outs.len()).filter(|i| sel >> i & 1 == 1).map(|i| outs[i]).collect();
            sources += 1;
            strict_sources += source_oracle(kind, &c, x.idx(), &legs) as u64;
        }
    }
    ((sinks, strict_sinks), (sources, strict_sources))
}

// ---------------------------------------------------------------------------
// 1. validators

fn finset_model() -> ModelFile {
    let mut m = ModelFile::default();
    let c = Arc::new(build_finset(2).unwrap());
    let mut id = FunctorMap::identity(c);
    id.name = "id".into();
    m.add_functor(&id);
    m
}

fn chains3() -> PosetPseudofunctor {
    let names: Vec<String> = ["0", "1", "2"].iter().map(|s| s.to_string()).collect();
    let base = Arc::new(preorder_category("Chain3", &names, |i, j| i <= j, |a, b| format!("{a}{b}")));
    let chain = FinPoset::from_edges(vec!["lo".into(), "hi".into()], &[(0, 1)]);
    PosetPseudofunctor {
        name: "chains3".into(),
        transitions: vec![vec![0, 1]; base.num_arrows()],
        posets: vec![chain; 3],
        base,
    }
}

fn model_violations(m: &ModelFile) -> Result<Vec<Violation>, String> {
    let r = m.resolve().map_err(|e| e.to_string())?;
    Ok(r.validate().into_iter().flat_map(|(_, _, rep)| rep.violations).collect())
}

fn criterion_validators() -> Outcome {
    let mut accepted = 0;
    for e in lib(full_corpus())? {
        let u = &e.functor;
        for rep in [u.source.validate(), u.target.validate(), u.validate()] {
            ensure(rep.is_valid(), || format!("{} rejected: {:?}", e.name, rep.violations))?;
        }
        accepted += 1;
    }
    for p in lib(corpus_pseudofunctors())? {
        ensure(p.validate().is_valid(), || format!("{} rejected", p.name))?;
        accepted += 1;
    }
    let base = finset_model();
    ensure(model_violations(&base)?.is_empty(), || "FinSet(2) model rejected".into())?;
    ensure(chains3().validate().is_valid(), || "chains3 rejected".into())?;

    type Mutation = (&'static str, fn(&mut ModelFile), fn(&Violation) -> bool);
    fn find(cs: &[CompositeDecl], g: &str, f: &str) -> usize {
        cs.iter().position(|c| c.after == g && c.first == f).expect("composite present")
    }
    let cat_mutations: [Mutation; 8] = [
        ("missing composite", |m| {
            let cs = &mut m.categories[0].compositions;
            cs.remove(find(cs, "2->2:10", "1->2:0"));
        }, |v| matches!(v, Violation::MissingComposite { .. })),
        ("composite with wrong endpoints", |m| {
            let cs = &mut m.categories[0].compositions;
            let i = find(cs, "2->2:10", "1->2:0");
            cs[i].result = "2->2:00".into();
        }, |v| matches!(v, Violation::CompositeEndpoints { .. })),
        ("left identity", |m| {
            let cs = &mut m.categories[0].compositions;
            let i = find(cs, "2->2:01", "1->2:0");
            cs[i].result = "1->2:1".into();
        }, |v| matches!(v, Violation::LeftIdentity { .. })),
        ("right identity", |m| {
            let cs = &mut m.categories[0].compositions;
            let i = find(cs, "1->2:0", "1->1:0");
            cs[i].result = "1->2:1".into();
        }, |v| matches!(v, Violation::RightIdentity { .. })),
        ("associativity", |m| {
            let cs = &mut m.categories[0].compositions;
            let i = find(cs, "2->2:10", "1->2:0");
            cs[i].result = "1->2:0".into();
        }, |v| matches!(v, Violation::Associativity { .. })),
        ("missing identity", |m| {
            m.categories[0].identities.retain(|(o, _)| o != "1");
        }, |v| matches!(v, Violation::MissingIdentity { .. })),
        ("spurious composite", |m| {
            m.categories[0].compose("1->2:0", "1->2:1", "1->2:0");
        }, |v| matches!(v, Violation::SpuriousComposite { .. })),
        ("identity with wrong endpoints", |m| {
            m.categories[0].identities.retain(|(o, _)| o != "1");
            m.categories[0].identity("1", "1->2:0");
        }, |v| matches!(v, Violation::IdentityEndpoints { .. })),
    ];
    let functor_mutations: [Mutation; 3] = [
        ("functor endpoints", |m| {
            let a = &mut m.functors[0].arrows;
            let i = a.iter().position(|(x, _)| x == "1->2:0").unwrap();
            a[i].1 = "2->2:00".into();
        }, |v| matches!(v, Violation::FunctorEndpoints { .. })),
        ("functor identity", |m| {
            let a = &mut m.functors[0].arrows;
            let i = a.iter().position(|(x, _)| x == "2->2:01").unwrap();
            a[i].1 = "2->2:10".into();
        }, |v| matches!(v, Violation::FunctorIdentity { .. })),
        ("functor composition", |m| {
            let a = &mut m.functors[0].arrows;
            let i = a.iter().position(|(x, _)| x == "1->2:0").unwrap();
            let j = a.iter().position(|(x, _)| x == "1->2:1").unwrap();
            let (vi, vj) = (a[i].1.clone(), a[j].1.clone());
            a[i].1 = vj;
            a[j].1 = vi;
        }, |v| matches!(v, Violation::FunctorComposition { .. })),
    ];
    let mut rejected = 0;
    for (name, mutate, expected) in cat_mutations.iter().chain(&functor_mutations) {
        let mut m = base.clone();
        mutate(&mut m);
        let v = model_violations(&m)?;
        ensure(v.iter().any(expected), || format!("{name}: got {v:?}"))?;
        rejected += 1;
    }
    let build_errors: [(&str, fn(&mut ModelFile)); 4] = [
        ("unmapped arrow", |m| m.functors[0].arrows.retain(|(x, _)| x != "1->2:0")),
        ("duplicate object", |m| {
            m.categories[0].object("1");
        }),
        ("conflicting composite", |m| {
            m.categories[0].compose("2->2:10", "1->2:0", "1->2:0");
        }),
        ("unknown arrow", |m| {
            m.categories[0].compose("2->2:10", "nowhere", "1->2:0");
        }),
    ];
    for (name, mutate) in build_errors {
        let mut m = base.clone();
        mutate(&mut m);
        ensure(m.resolve().is_err(), || format!("{name} accepted"))?;
        rejected += 1;
    }
    type PMutation = (&'static str, fn(&mut PosetPseudofunctor), fn(&Violation) -> bool);
    let pmutations: [PMutation; 5] = [
        ("not a poset", |p| {
            p.posets[0] = FinPoset::from_edges(vec!["lo".into(), "hi".into()], &[(0, 1), (1, 0)]);
        }, |v| matches!(v, Violation::NotAPoset { .. })),
        ("transition shape", |p| {
            let a = p.base.arr("01").unwrap().idx();
            p.transitions[a].pop();
        }, |v| matches!(v, Violation::TransitionShape { .. })),
        ("not monotone", |p| {
            let a = p.base.arr("01").unwrap().idx();
            p.transitions[a] = vec![1, 0];
        }, |v| matches!(v, Violation::NotMonotone { .. })),
        ("identity transition", |p| {
            let a = p.base.arr("11").unwrap().idx();
            p.transitions[a] = vec![1, 1];
        }, |v| matches!(v, Violation::IdentityTransition { .. })),
        ("composite transition", |p| {
            let a = p.base.arr("02").unwrap().idx();
            p.transitions[a] = vec![1, 1];
        }, |v| matches!(v, Violation::CompositeTransition { .. })),
    ];
    for (name, mutate, expected) in pmutations {
        let mut p = chains3();
        mutate(&mut p);
        let v = p.validate().violations;
        ensure(v.iter().any(expected), || format!("{name}: got {v:?}"))?;
        if name == "composite transition" {
            ensure(v.iter().all(expected), || format!("{name}: extra violations {v:?}"))?;
        }
        rejected += 1;
    }
    ensure(rejected >= 20, || format!("only {rejected} mutations"))?;
    Ok(format!("{accepted} valid sections accepted, {rejected} single-fault mutations rejected"))
}

// ---------------------------------------------------------------------------
// 2. epi = strict epi = jointly surjective in finite sets

fn criterion_finset_epis() -> Outcome {
    let c = build_finset(2).map_err(|e| e.to_string())?;
    let mut families = 0;
    let mut surjective = 0;
    for x in c.objects() {
        let n: usize = c.obj_name(x).parse().unwrap();
        let ins = c.ins(x);
        for sel in 0u64..1 << ins.len() {
            let members: Vec<Arr> = (0..ins.len()).filter(|i| sel >> i & 1 == 1).map(|i| ins[i]).collect();
            let image = members
                .iter()
                .flat_map(|&a| parse_table(c.arr_name(a)))
                .fold(0u32, |m, v| m | 1 << v);
            let oracle = image == (1u32 << n) - 1;
            let f = lib(Family::sink(&c, x, members))?;
            let epi = lib(is_epi_family(&c, &f))?;
            let strict = lib(is_strict_epi_family(&c, &f))?;
            ensure(epi == oracle && strict == oracle, || {
                format!("{}: epi={epi} strict={strict} surjective={oracle}", f.display(&c))
            })?;
            families += 1;
            surjective += oracle as u64;
        }
    }
    let p = lib(check_collection_properties(&Collection::strict_epi(), &c))?;
    ensure(p.i && p.c && p.u && p.s && p.f, || format!("strict-epi properties {p:?}"))?;
    ensure(p.exactness == Exactness::Exact, || "properties not exact".into())?;
    Ok(format!("{families} sink families, {surjective} surjective; I C U S F hold"))
}

// ---------------------------------------------------------------------------
// 3. strict epi = final and surjective, strict mono = initial and injective

fn criterion_strict_classes() -> Outcome {
    let mut parts = Vec::new();
    for (name, kind, u) in [
        ("FinTop(2)", Kind::Topology, lib(build_fintop(2))?),
        ("FinFilt(2)", Kind::Filter, lib(build_finfilt(2))?),
    ] {
        let ctx = lib(OverContext::new(u))?;
        let epi = lib(compare_strict_epi_final_surjective(&ctx, Bound::Auto))?;
        let mono = lib(compare_strict_mono_initial_injective(&ctx, Bound::Auto))?;
        ensure(epi.equal() && mono.equal(), || format!("{name}: classes differ"))?;
        ensure(epi.exactness == Exactness::Exact && mono.exactness == Exactness::Exact, || {
            format!("{name}: enumeration truncated")
        })?;
        let ((sinks, strict_sinks), (sources, strict_sources)) = oracle_counts(kind, ctx.t());
        ensure(epi.families == sinks && epi.strict == strict_sinks, || {
            format!(
                "{name} sinks: {} strict of {} vs oracle {strict_sinks} of {sinks}",
                epi.strict, epi.families
            )
        })?;
        ensure(mono.families == sources && mono.strict == strict_sources, || {
            format!(
                "{name} sources: {} strict of {} vs oracle {strict_sources} of {sources}",
                mono.strict, mono.families
            )
        })?;
        parts.push(format!("{name}: {strict_sinks}/{sinks} sinks, {strict_sources}/{sources} sources"));
    }
    Ok(parts.join("; "))
}

// ---------------------------------------------------------------------------
// 4. double-diagram lemma and fiber products of spaces

fn criterion_lemma() -> Outcome {
    let ctx = lib(OverContext::new(lib(build_fintop(2))?))?;
    let r = lib(check_double_diagram_lemma(&ctx, Bound::Auto))?;
    ensure(r.counterexamples.is_empty(), || r.counterexamples.join("; "))?;
    ensure(r.exactness == Exactness::Exact && r.diagrams > 0, || "lemma not exhaustive".into())?;
    let t = ctx.t();
    let c = Concrete::new(t);
    let mut pairs = 0;
    for s in ctx.s().objects() {
        let over = ctx.over(s);
        for &y1 in over {
            for &y2 in over {
                let union: BTreeSet<u32> = c.sets[y1.idx()].union(&c.sets[y2.idx()]).copied().collect();
                let meet = generated(Kind::Topology, c.size[y1.idx()], &union);
                for &z in over {
                    let legs: Option<Vec<Arr>> =
                        [y1, y2].iter().map(|&y| ctx.vertical(z, y).next()).collect();
                    let product = legs.is_some_and(|l| is_fiber_product(&ctx, z, &l));
                    ensure(product == (c.sets[z.idx()] == meet), || {
                        format!("{} over {} and {}", t.obj_name(z), t.obj_name(y1), t.obj_name(y2))
                    })?;
                }
                pairs += 1;
            }
        }
    }
    Ok(format!(
        "{} diagrams, {} with initial legs, no counterexample; {pairs} fiber products match the generated topology",
        r.diagrams, r.initial_diagrams
    ))
}

// ---------------------------------------------------------------------------
// 5-7. random and corpus models

fn models() -> Result<Vec<(String, OverContext)>, String> {
    let mut out = Vec::new();
    for e in lib(full_corpus())? {
        out.push((e.name.clone(), lib(OverContext::new(e.functor))?));
    }
    for seed in 0..RANDOM_SEEDS {
        out.push((format!("seed {seed}"), random_model(seed, DEFAULT_BUDGET)));
    }
    Ok(out)
}

fn criterion_routes(models: &[(String, OverContext)]) -> Outcome {
    let (mut top, mut pre) = (0, 0);
    for (name, ctx) in models {
        let t = lib(topological_routes(ctx, Bound::Auto))?;
        let p = lib(pretopological_routes(ctx, Bound::Auto))?;
        ensure(t.agree(), || format!("{name}: topological routes {t}"))?;
        ensure(p.agree(), || format!("{name}: pretopological routes {p}"))?;
        top += t.value() as usize;
        pre += p.value() as usize;
    }
    Ok(format!("{} models, {top} topological, {pre} pretopological", models.len()))
}

fn criterion_faithful(models: &[(String, OverContext)]) -> Outcome {
    let mut pre = 0;
    let mut unfaithful = 0;
    for (name, ctx) in models {
        let cl = lib(classify(ctx, Bound::Auto))?;
        ensure(cl.inconsistencies().is_empty(), || format!("{name}: {:?}", cl.inconsistencies()))?;
        if cl.is_pretopological() {
            ensure(ctx.u.is_faithful(), || format!("{name}: pretopological and not faithful"))?;
            pre += 1;
        }
        unfaithful += !ctx.u.is_faithful() as usize;
    }
    Ok(format!("{pre} pretopological models all faithful; {unfaithful} unfaithful models seen"))
}

fn criterion_self_duality(models: &[(String, OverContext)]) -> Outcome {
    let mut top = 0;
    for (name, ctx) in models {
        let (a, b) = lib(self_duality_check(ctx, Bound::Auto))?;
        ensure(a == b, || format!("{name}: u {a}, u^op {b}"))?;
        top += a as usize;
    }
    Ok(format!("{} models, {top} topological on both sides", models.len()))
}

// ---------------------------------------------------------------------------
// 8. lattice characterization of topological total categories

fn brute_complete_lattice(p: &FinPoset) -> bool {
    let n = p.len();
    n > 0
        && (0u32..1 << n).all(|sel| {
            let uppers: Vec<usize> =
                (0..n).filter(|&u| (0..n).all(|i| sel >> i & 1 == 0 || p.le(i, u))).collect();
            uppers.iter().any(|&j| uppers.iter().all(|&u| p.le(j, u)))
        })
}

/// `f: Q → P` has a left adjoint when every `x` of `P` has a least `y`
/// with `x ≤ f(y)`.
fn brute_left_adjoint(p: &FinPoset, q: &FinPoset, f: &[usize]) -> bool {
    (0..p.len()).all(|x| {
        let ys: Vec<usize> = (0..q.len()).filter(|&y| p.le(x, f[y])).collect();
        ys.iter().any(|&y| ys.iter().all(|&z| q.le(y, z)))
    })
}

fn lattice_oracle(p: &PosetPseudofunctor) -> bool {
    let b = &*p.base;
    p.posets.iter().all(brute_complete_lattice)
        && b.arrows().all(|a| {
            brute_left_adjoint(&p.posets[b.src(a).idx()], &p.posets[b.tgt(a).idx()], &p.transitions[a.idx()])
        })
}

fn criterion_lattice() -> Outcome {
    let mut ps = lib(corpus_pseudofunctors())?;
    ps.extend((0..RANDOM_PSEUDOFUNCTORS).map(random_pseudofunctor));
    let (mut yes, mut no) = (0, 0);
    for p in &ps {
        let ch = lib(check_lattice_characterization(p))?;
        let oracle = lattice_oracle(p);
        ensure(ch.agree() && ch.rhs() == oracle, || {
            format!("{}: topological {} lattice condition {} oracle {oracle}", p.name, ch.lhs(), ch.rhs())
        })?;
        if ["antichain_fiber", "adjoint_free_transition"].contains(&p.name.as_str()) {
            ensure(!ch.lhs(), || format!("{} should fail", p.name))?;
        }
        if ch.lhs() {
            yes += 1
        } else {
            no += 1
        }
    }
    ensure(ps.len() >= 50 && yes > 0 && no > 0, || format!("{yes} true, {no} false"))?;
    Ok(format!("{} pseudofunctors: {yes} topological, {no} not; both sides agree with the oracle", ps.len()))
}

// ---------------------------------------------------------------------------
// 9. property battery

fn criterion_battery() -> Outcome {
    let mut parts = Vec::new();
    for (name, u, top1, bot1, top2, bot2) in [
        ("FinTop(2)", lib(build_fintop(2))?, "1:e,0", "1:e,0", "2:e,01", "2:e,0,1,01"),
        ("FinFilt(2)", lib(build_finfilt(2))?, "1:0", "1:e,0", "2:01", "2:e,0,1,01"),
    ] {
        let ctx = lib(OverContext::new(u))?;
        let b = lib(theorem_battery(&ctx, Bound::Auto))?;
        let failed: Vec<String> = b
            .items
            .iter()
            .filter(|i| i.status == ItemStatus::Fail)
            .map(|i| format!("item {} ({})", i.number, i.detail))
            .collect();
        ensure(failed.is_empty(), || format!("{name}: {}", failed.join("; ")))?;
        let (t, s) = (ctx.t(), ctx.s());
        let name_at = |x: Option<Obj>| x.map(|x| t.obj_name(x).to_string());
        for (base, top, bot) in [("1", top1, bot1), ("2", top2, bot2)] {
            let sb = lib(s.obj(base))?;
            ensure(name_at(lib(top_object(&ctx, sb))?).as_deref() == Some(top), || format!("{name}: top over {base}"))?;
            ensure(name_at(lib(bot_object(&ctx, sb))?).as_deref() == Some(bot), || format!("{name}: bottom over {base}"))?;
        }
        let point = lib(t.obj(bot1))?;
        for x in t.objects() {
            let size = parse_structure(t.obj_name(x)).0;
            ensure(t.hom(point, x).len() == size, || format!("{name}: hom({bot1}, {})", t.obj_name(x)))?;
        }
        let skipped = b.items.iter().filter(|i| i.status == ItemStatus::Skipped).count();
        parts.push(format!("{name}: {} items, {skipped} skipped", b.items.len()));
    }
    Ok(parts.join("; "))
}

// ---------------------------------------------------------------------------
// 10. Grothendieck round trips

fn criterion_round_trips() -> Outcome {
    let mut pseudo = 0;
    for p in lib(corpus_pseudofunctors())? {
        let tc = lib(p.total_category())?;
        let q = lib(extract_pseudofunctor(&lib(OverContext::new(tc.projection))?))?;
        ensure(pseudofunctors_isomorphic(&p, &q).is_some(), || format!("{}: extraction differs", p.name))?;
        pseudo += 1;
    }
    let mut functors = 0;
    let mut candidates: Vec<(String, FunctorMap)> =
        lib(full_corpus())?.into_iter().map(|e| (e.name, e.functor)).collect();
    candidates.extend((0..RANDOM_SEEDS).map(|s| (format!("seed {s}"), random_model(s, DEFAULT_BUDGET).u)));
    for (name, u) in candidates {
        let ctx = lib(OverContext::new(u.clone()))?;
        let Ok(p) = extract_pseudofunctor(&ctx) else { continue };
        let tc = lib(p.total_category())?;
        ensure(tc.projection.iso_over_base(&u).is_some(), || format!("{name}: total category differs"))?;
        functors += 1;
    }
    ensure(functors >= 5, || format!("only {functors} faithful fibrations with poset fibers"))?;
    Ok(format!("{pseudo} pseudofunctors and {functors} fibrations survive the round trip"))
}

// ---------------------------------------------------------------------------
// 11. determinism

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["fibercheck"];
    argv.extend_from_slice(args);
    let code = fibercheck::cli::run(argv, &mut out, &mut err);
    out.extend(err);
    (code, out)
}

fn criterion_determinism() -> Outcome {
    let fintop = corpus_dir().join("fintop2.model");
    let fintop = fintop.to_str().unwrap();
    let runs: [&[&str]; 4] = [
        &["classify", fintop, "--routes", "--battery"],
        &["classify", fintop, "--format", "machine"],
        &["verify", "--corpus", "--quiet"],
        &["verify", "--seeds", "100", "--quiet"],
    ];
    for args in runs {
        let a = run_cli(args);
        let b = run_cli(args);
        ensure(a.0 == 0, || format!("{args:?} exited {}: {}", a.0, String::from_utf8_lossy(&a.1)))?;
        ensure(a == b, || format!("{args:?} output differs between runs"))?;
    }
    Ok(format!("{} commands byte-identical across two runs", runs.len()))
}

// ---------------------------------------------------------------------------

fn main() {
    let shared = AssertUnwindSafe(std::cell::OnceCell::new());
    let cached = || -> Result<&Vec<(String, OverContext)>, String> {
        if shared.get().is_none() {
            let _ = shared.set(models()?);
        }
        Ok(shared.get().unwrap())
    };
    let criteria: Vec<(&str, Duration, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("validators accept the corpus and reject single faults", Duration::from_secs(1), Box::new(criterion_validators)),
        ("finite sets: epi = strict epi = jointly surjective", Duration::from_secs(30), Box::new(criterion_finset_epis)),
        ("strict epi/mono = final-surjective/initial-injective", Duration::from_secs(120), Box::new(criterion_strict_classes)),
        ("double-diagram lemma and fiber products", Duration::from_secs(120), Box::new(criterion_lemma)),
        ("topological and pretopological routes agree", Duration::from_secs(300), Box::new(|| criterion_routes(cached()?))),
        ("pretopological functors are faithful", Duration::from_secs(300), Box::new(|| criterion_faithful(cached()?))),
        ("topological is self-dual", Duration::from_secs(300), Box::new(|| criterion_self_duality(cached()?))),
        ("lattice characterization of total categories", Duration::from_secs(60), Box::new(criterion_lattice)),
        ("property battery on spaces and filters", Duration::from_secs(120), Box::new(criterion_battery)),
        ("pseudofunctor and total category round trips", Duration::from_secs(120), Box::new(criterion_round_trips)),
        ("command output is deterministic", Duration::from_secs(300), Box::new(criterion_determinism)),
    ];
    let mut failures = 0;
    for (i, (title, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(d) if elapsed > *limit => Err(format!("{d}; took longer than {limit:?}")),
            o => o,
        };
        let (status, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!("{status} criterion {:>2}: {title} ({:.2}s): {detail}", i + 1, elapsed.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
