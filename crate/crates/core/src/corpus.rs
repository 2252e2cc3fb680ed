//! Example models: finite sets, finite spaces and finite filter spaces with
//! their forgetful functors, hand-built and searched counterexamples, and a
//! seeded random model generator.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fibered::{is_fibration, restrict_to_full_subcategory, renamed, OverContext};
use crate::fincat::{discrete_category, terminal_category, ConcreteBuilder, FinCat, FunctorMap, Obj};
use crate::grothendieck::PosetPseudofunctor;
use crate::lattice::{is_monotone, FinPoset};
use crate::mask::Bound;
use crate::model::{Expectation, ModelFile};
use crate::topological::{pretopological_routes, topological_routes};

/// Environment variable overriding the directory of frozen corpus files.
pub const CORPUS_DIR_ENV: &str = "FIBERCHECK_CORPUS_DIR";

/// Version directory of the bundled corpus.
pub const CORPUS_VERSION: &str = "v1";

fn digits(table: &[usize]) -> String {
    table.iter().map(|v| v.to_string()).collect()
}

/// Skeleton of finite sets `0, …, max_size` with every function. Arrows are
/// named `m->n:t` with `t` the value table.
pub fn build_finset(max_size: usize) -> Result<FinCat> {
    if !(1..=3).contains(&max_size) {
        return Err(Error::SizeOutOfRange(format!(
            "finite sets need 1 <= max_size <= 3, got {max_size}"
        )));
    }
    let mut b = ConcreteBuilder::new(format!("FinSet({max_size})"));
    for n in 0..=max_size {
        b.object(n.to_string(), n);
    }
    for m in 0..=max_size {
        for n in 0..=max_size {
            for table in functions(m, n) {
                b.arrow(format!("{m}->{n}:{}", digits(&table)), m, n, table);
            }
        }
    }
    Ok(b.build())
}

/// All value tables `m → n`, in lexicographic order.
fn functions(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 && m > 0 {
        return out;
    }
    let mut t = vec![0; m];
    loop {
        out.push(t.clone());
        let mut i = m;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < n {
                break;
            }
            t[i] = 0;
        }
    }
}

/// Subsets of an `n`-set as bit masks, `e` printing the empty one.
fn subset_name(mask: u32, n: usize) -> String {
    if mask == 0 {
        return "e".into();
    }
    (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i.to_string()).collect()
}

fn structure_name(n: usize, family: &[u32]) -> String {
    let mut f = family.to_vec();
    f.sort_by_key(|&m| (m.count_ones(), subset_name(m, n)));
    let parts: Vec<String> = f.iter().map(|&m| subset_name(m, n)).collect();
    format!("{n}:{}", parts.join(","))
}

fn preimage(table: &[usize], mask: u32) -> u32 {
    table
        .iter()
        .enumerate()
        .filter(|&(_, &v)| mask >> v & 1 == 1)
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

/// Every family of subsets of an `n`-set satisfying `keep`.
fn set_families(n: usize, keep: impl Fn(&[u32]) -> bool) -> Vec<Vec<u32>> {
    let subsets = 1u32 << n;
    (0u64..1 << subsets)
        .map(|sel| (0..subsets).filter(|&m| sel >> m & 1 == 1).collect::<Vec<u32>>())
        .filter(|f| keep(f))
        .collect()
}

fn is_topology(n: usize, f: &[u32]) -> bool {
    let full = (1u32 << n) - 1;
    f.contains(&0)
        && f.contains(&full)
        && f.iter().all(|&a| f.iter().all(|&b| f.contains(&(a | b)) && f.contains(&(a & b))))
}

/// Nonempty, up-closed, closed under binary intersection. The improper
/// filter (containing the empty set) is allowed.
fn is_filter(n: usize, f: &[u32]) -> bool {
    let subsets = 1u32 << n;
    !f.is_empty()
        && f.iter().all(|&a| (0..subsets).all(|b| b & a != a || f.contains(&b)))
        && f.iter().all(|&a| f.iter().all(|&b| f.contains(&(a & b))))
}

/// Sets of size `0..=max_size` carrying a structure, with the maps whose
/// preimages send structure members to structure members, over finite sets.
fn structured(
    kind: &str,
    max_size: usize,
    is_structure: impl Fn(usize, &[u32]) -> bool,
) -> Result<FunctorMap> {
    if !(1..=2).contains(&max_size) {
        return Err(Error::SizeOutOfRange(format!(
            "{kind} needs 1 <= max_size <= 2, got {max_size}"
        )));
    }
    let base = Arc::new(build_finset(max_size)?);
    let mut b = ConcreteBuilder::new(format!("{kind}({max_size})"));
    let mut objs: Vec<(usize, Vec<u32>, String)> = Vec::new();
    for n in 0..=max_size {
        for f in set_families(n, |f| is_structure(n, f)) {
            let name = structure_name(n, &f);
            b.object(name.clone(), n);
            objs.push((n, f, name));
        }
    }
    for (i, (m, fs, ns)) in objs.iter().enumerate() {
        for (j, (n, ft, nt)) in objs.iter().enumerate() {
            for table in functions(*m, *n) {
                if ft.iter().all(|&o| fs.contains(&preimage(&table, o))) {
                    let name = format!("[{ns}]->[{nt}]:{}", digits(&table));
                    b.arrow(name, i, j, table);
                }
            }
        }
    }
    let total = Arc::new(b.build());
    let obj_map = total
        .objects()
        .map(|x| {
            let n = total.obj_name(x).split(':').next().expect("sized name");
            base.obj(n).expect("size is a base object")
        })
        .collect();
    let arr_map = total
        .arrows()
        .map(|a| {
            let name = total.arr_name(a);
            let table = name.rsplit(':').next().expect("table suffix");
            let (m, n) = (base_size(total.obj_name(total.src(a))), base_size(total.obj_name(total.tgt(a))));
            base.arr(&format!("{m}->{n}:{table}")).expect("function of the base")
        })
        .collect();
    Ok(FunctorMap {
        name: format!("U_{kind}({max_size})"),
        source: total,
        target: base,
        obj_map,
        arr_map,
    })
}

fn base_size(name: &str) -> &str {
    name.split(':').next().expect("sized name")
}

/// Finite spaces with continuous maps, forgetful to finite sets. Objects
/// are named `n:` followed by the open sets.
pub fn build_fintop(max_size: usize) -> Result<FunctorMap> {
    structured("FinTop", max_size, is_topology)
}

/// Finite sets with a (possibly improper) filter of subsets.
pub fn build_finfilt(max_size: usize) -> Result<FunctorMap> {
    structured("FinFilt", max_size, is_filter)
}

/// Two incomparable objects over a one-object base.
pub fn antichain_fibration() -> FunctorMap {
    let t = Arc::new(discrete_category("Antichain", &["a", "b"]));
    let s = Arc::new(terminal_category("Point"));
    let mut u = FunctorMap::to_terminal(t, s);
    u.name = "antichain".into();
    u
}

/// A model with the flags it is known to have.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub params: String,
    pub functor: FunctorMap,
    pub expected: Vec<(String, bool)>,
    pub provenance: String,
}

impl CorpusEntry {
    fn new(
        name: &str,
        params: &str,
        functor: FunctorMap,
        expected: &[(&str, bool)],
        provenance: &str,
    ) -> CorpusEntry {
        CorpusEntry {
            name: name.into(),
            params: params.into(),
            functor,
            expected: expected.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            provenance: provenance.into(),
        }
    }

    pub fn to_model(&self) -> ModelFile {
        let mut m = ModelFile::default();
        m.add_functor(&self.functor);
        m.expectations.push(Expectation {
            entry: self.name.clone(),
            functor: self.functor.name.clone(),
            flags: self.expected.clone(),
        });
        m
    }

    pub fn file_name(&self) -> String {
        format!("{}.model", self.name)
    }
}

const ALL_TRUE: [(&str, bool); 7] = [
    ("faithful", true),
    ("prefibration", true),
    ("fibration", true),
    ("pretopological", true),
    ("topological", true),
    ("e-functor", true),
    ("m-functor", true),
];

/// The example categories of the corpus, built in code.
pub fn build_examples() -> Result<Vec<CorpusEntry>> {
    let finset = Arc::new(build_finset(2)?);
    let mut id = FunctorMap::identity(finset.clone());
    id.name = "identity_finset2".into();
    let point = Arc::new(terminal_category("Point"));
    let mut bang = FunctorMap::to_terminal(finset, point);
    bang.name = "finset2_to_point".into();
    let mut out = vec![
        CorpusEntry::new("identity_finset2", "max_size=2", id, &ALL_TRUE, "identity functor"),
        CorpusEntry::new(
            "finset2_to_point",
            "max_size=2",
            bang,
            &[
                ("faithful", false),
                ("prefibration", true),
                ("fibration", true),
                ("pretopological", false),
                ("topological", false),
            ],
            "one fiber, the whole category; not thin",
        ),
    ];
    for n in 1..=2 {
        out.push(CorpusEntry::new(
            &format!("fintop{n}"),
            &format!("max_size={n}"),
            build_fintop(n)?,
            &ALL_TRUE,
            "finite spaces over finite sets",
        ));
        out.push(CorpusEntry::new(
            &format!("finfilt{n}"),
            &format!("max_size={n}"),
            build_finfilt(n)?,
            &ALL_TRUE,
            "finite sets with a filter over finite sets",
        ));
    }
    Ok(out)
}

/// The hand-built separating example; the searched ones live in files.
pub fn build_counterexamples() -> Vec<CorpusEntry> {
    vec![CorpusEntry::new(
        "antichain",
        "",
        antichain_fibration(),
        &[
            ("faithful", true),
            ("prefibration", true),
            ("fibration", true),
            ("pretopological", false),
            ("topological", false),
        ],
        "fiber without a top element",
    )]
}

/// Directory of the frozen corpus files: the environment override, or the
/// bundled directory.
pub fn corpus_dir() -> PathBuf {
    match std::env::var_os(CORPUS_DIR_ENV) {
        Some(d) => PathBuf::from(d),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(CORPUS_VERSION),
    }
}

/// Entries read from every `.model` file in `dir`, in file-name order.
/// Each `expect` block becomes one entry.
pub fn load_corpus_dir(dir: &Path) -> Result<Vec<CorpusEntry>> {
    let read = std::fs::read_dir(dir).map_err(|source| Error::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let mut paths: Vec<PathBuf> = read
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "model"))
        .collect();
    paths.sort();
    let mut out = Vec::new();
    for p in paths {
        let r = ModelFile::read(&p)?.resolve()?;
        for e in &r.expectations {
            let u = r.functor(&e.functor).expect("resolved expectation").clone();
            out.push(CorpusEntry {
                name: e.entry.clone(),
                params: String::new(),
                functor: u,
                expected: e.flags.clone(),
                provenance: p.file_name().unwrap().to_string_lossy().into_owned(),
            });
        }
    }
    Ok(out)
}

/// Built-in entries missing from the frozen files, followed by the frozen
/// files.
pub fn full_corpus() -> Result<Vec<CorpusEntry>> {
    let frozen = load_corpus_dir(&corpus_dir())?;
    let mut out = build_examples()?;
    out.extend(build_counterexamples());
    out.retain(|e| !frozen.iter().any(|f| f.name == e.name));
    out.extend(frozen);
    Ok(out)
}

/// Pseudofunctors of the corpus: hand-built ones, including the two
/// designed failures of the lattice condition, and those extracted from the
/// spaces and filters examples.
pub fn corpus_pseudofunctors() -> Result<Vec<PosetPseudofunctor>> {
    let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let interval = Arc::new(interval_category());
    let point = Arc::new(terminal_category("Point"));
    let chain = FinPoset::from_edges(names(&["lo", "hi"]), &[(0, 1)]);
    let diamond = FinPoset::from_edges(names(&["b", "l", "r", "t"]), &[(0, 1), (0, 2), (1, 3), (2, 3)]);
    let antichain = FinPoset::from_edges(names(&["a", "b"]), &[]);
    let mk = |name: &str, base: &Arc<FinCat>, posets: Vec<FinPoset>, transitions: Vec<Vec<usize>>| {
        PosetPseudofunctor {
            name: name.into(),
            base: base.clone(),
            posets,
            transitions,
        }
    };
    // interval arrows in identifier order: "00", "01", "11"
    let mut out = vec![
        mk("chain_over_point", &point, vec![chain.clone()], vec![vec![0, 1]]),
        mk("antichain_fiber", &point, vec![antichain], vec![vec![0, 1]]),
        mk(
            "chains_identity",
            &interval,
            vec![chain.clone(), chain.clone()],
            vec![vec![0, 1], vec![0, 1], vec![0, 1]],
        ),
        mk(
            "chains_top",
            &interval,
            vec![chain.clone(), chain.clone()],
            vec![vec![0, 1], vec![1, 1], vec![0, 1]],
        ),
        mk(
            "adjoint_free_transition",
            &interval,
            vec![chain, diamond.clone()],
            vec![vec![0, 1], vec![0, 1, 1, 1], vec![0, 1, 2, 3]],
        ),
        mk(
            "diamond_identity",
            &interval,
            vec![diamond.clone(), diamond],
            vec![vec![0, 1, 2, 3], vec![0, 1, 2, 3], vec![0, 1, 2, 3]],
        ),
    ];
    for u in [build_fintop(1)?, build_fintop(2)?, build_finfilt(1)?, build_finfilt(2)?] {
        out.push(crate::grothendieck::extract_pseudofunctor(&OverContext::new(u)?)?);
    }
    Ok(out)
}

/// The category `0 → 1` with arrows `00`, `01`, `11`.
pub fn interval_category() -> FinCat {
    let names = ["0".to_string(), "1".to_string()];
    crate::fincat::preorder_category("Interval", &names, |i, j| i <= j, |a, b| format!("{a}{b}"))
}

/// Largest creation universe over any base object, in either direction:
/// the number of (base arrow, object over its far end) pairs.
pub fn universe_size(ctx: &OverContext) -> usize {
    let one = |c: &OverContext| {
        let s = c.s();
        s.objects()
            .map(|b| s.outs(b).iter().map(|&a| c.over(s.tgt(a)).len()).sum::<usize>())
            .max()
            .unwrap_or(0)
    };
    one(ctx).max(one(ctx.op()))
}

/// Default limit on [`universe_size`] for random models.
pub const DEFAULT_BUDGET: usize = 12;

fn random_poset(rng: &mut ChaCha8Rng, n: usize, prefix: &str) -> FinPoset {
    let elements: Vec<String> = (0..n).map(|i| format!("{prefix}{i}")).collect();
    match rng.gen_range(0..4) {
        0 => FinPoset::from_edges(elements, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>()),
        _ => {
            let p = rng.gen_range(0.25..0.75);
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(p) {
                        edges.push((i, j));
                    }
                }
            }
            FinPoset::from_edges(elements, &edges)
        }
    }
}

fn random_monotone(rng: &mut ChaCha8Rng, p: &FinPoset, q: &FinPoset) -> Vec<usize> {
    for _ in 0..64 {
        let f: Vec<usize> = (0..p.len()).map(|_| rng.gen_range(0..q.len())).collect();
        if is_monotone(p, q, &f) {
            return f;
        }
    }
    vec![rng.gen_range(0..q.len()); p.len()]
}

type ForestBase = (&'static str, usize, &'static [(usize, usize)]);

/// Bases whose Hasse diagram is a forest, so that transitions chosen on
/// covering pairs compose uniquely.
const FOREST_BASES: [ForestBase; 5] = [
    ("Point", 1, &[]),
    ("Chain2", 2, &[(0, 1)]),
    ("Chain3", 3, &[(0, 1), (1, 2)]),
    ("Vee", 3, &[(0, 1), (0, 2)]),
    ("Wedge", 3, &[(0, 2), (1, 2)]),
];

/// A random strict poset-valued pseudofunctor over a small poset base.
pub fn random_pseudofunctor(seed: u64) -> PosetPseudofunctor {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_pseudofunctor_with(&mut rng, &format!("random{seed}"), 3)
}

fn random_pseudofunctor_with(rng: &mut ChaCha8Rng, name: &str, max_fiber: usize) -> PosetPseudofunctor {
    let &(bname, n, cover) = FOREST_BASES.choose(rng).expect("nonempty");
    let base_poset = FinPoset::from_edges((0..n).map(|i| format!("s{i}")).collect(), cover);
    let base = Arc::new(base_poset.to_category(bname));
    let posets: Vec<FinPoset> = (0..n)
        .map(|i| {
            let k = rng.gen_range(1..=max_fiber);
            random_poset(rng, k, &format!("x{i}_"))
        })
        .collect();
    // φ* for each covering pair s ≤ t: P(t) → P(s); identities and
    // composites follow
    let mut cover_maps = std::collections::HashMap::new();
    for &(s, t) in cover {
        cover_maps.insert((s, t), random_monotone(rng, &posets[t], &posets[s]));
    }
    let transition = |s: usize, t: usize| -> Vec<usize> {
        // walk the unique path from s up to t
        let mut path = vec![s];
        let mut cur = s;
        while cur != t {
            cur = cover
                .iter()
                .find(|&&(a, b)| a == cur && base_poset.le(b, t))
                .map(|&(_, b)| b)
                .expect("forest path");
            path.push(cur);
        }
        let mut tab: Vec<usize> = (0..posets[t].len()).collect();
        for w in path.windows(2).rev() {
            let m = &cover_maps[&(w[0], w[1])];
            tab = tab.iter().map(|&y| m[y]).collect();
        }
        tab
    };
    // base objects `s0, s1, …` are indexed like the poset elements
    let b = &*base;
    let transitions = b
        .arrows()
        .map(|a| transition(b.src(a).idx(), b.tgt(a).idx()))
        .collect();
    PosetPseudofunctor {
        name: name.into(),
        base,
        posets,
        transitions,
    }
}

fn random_concrete(rng: &mut ChaCha8Rng, name: &str) -> FinCat {
    let mut b = ConcreteBuilder::new(name);
    let n = rng.gen_range(1..=3);
    for i in 0..n {
        b.object(format!("c{i}"), rng.gen_range(1..=2));
    }
    for _ in 0..rng.gen_range(0..=3) {
        let (s, t) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let table: Vec<usize> = (0..b.carrier(s)).map(|_| rng.gen_range(0..b.carrier(t))).collect();
        b.arrow(format!("c{s}->c{t}:{}", digits(&table)), s, t, table);
    }
    b.close(|b, s, t, tab| format!("{}->{}:{}", b.object_name(s), b.object_name(t), digits(tab)));
    b.build()
}

fn random_preorder(rng: &mut ChaCha8Rng, n: usize, prefix: &str) -> FinPoset {
    let mut p = random_poset(rng, n, prefix);
    if n >= 2 && rng.gen_bool(0.2) {
        // an equivalent pair
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i != j {
            let mut edges: Vec<(usize, usize)> = p.hasse_edges();
            edges.push((i, j));
            edges.push((j, i));
            p = FinPoset::from_edges(p.elements.clone(), &edges);
        }
    }
    p
}

/// The generation strategies of [`random_model`].
pub const STRATEGIES: [&str; 5] = ["total", "full-subcategory", "monotone", "identity", "to-point"];

/// A random functor from one of [`STRATEGIES`], redrawn from the same
/// stream until its creation universe fits `budget`.
pub fn random_functor(seed: u64, budget: usize) -> (&'static str, FunctorMap) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let strategy = *STRATEGIES.choose(&mut rng).expect("nonempty");
        let u = match strategy {
            "total" | "full-subcategory" => {
                let p = random_pseudofunctor_with(&mut rng, &format!("P{seed}"), 3);
                let total = p.total_category().expect("random pseudofunctors are valid");
                let mut u = total.projection;
                if strategy == "full-subcategory" && u.source.num_objects() > 1 {
                    let t = u.source.clone();
                    let drop = rng.gen_range(0..t.num_objects());
                    let extra = rng.gen_range(0..t.num_objects());
                    let keep: Vec<bool> = t
                        .objects()
                        .map(|x| x.idx() != drop && (x.idx() != extra || rng.gen_bool(0.5)))
                        .collect();
                    u = restrict_to_full_subcategory(&u, "", |x| keep[x.idx()]);
                }
                u
            }
            "monotone" => {
                let (nt, ns) = (rng.gen_range(1..=4), rng.gen_range(1..=3));
                let p = random_preorder(&mut rng, nt, "t");
                let q = random_preorder(&mut rng, ns, "s");
                let f = random_monotone(&mut rng, &p, &q);
                let (t, s) = (Arc::new(p.to_category("T")), Arc::new(q.to_category("S")));
                FunctorMap::from_fns(
                    "",
                    t.clone(),
                    s.clone(),
                    |x| Obj(f[x.idx()] as u32),
                    |a| {
                        let (x, y) = (f[t.src(a).idx()], f[t.tgt(a).idx()]);
                        s.hom(Obj(x as u32), Obj(y as u32))[0]
                    },
                )
            }
            "identity" => FunctorMap::identity(Arc::new(random_concrete(&mut rng, "C"))),
            _ => FunctorMap::to_terminal(
                Arc::new(random_concrete(&mut rng, "C")),
                Arc::new(terminal_category("Point")),
            ),
        };
        let u = named_model(u, &format!("random{seed}"));
        let ctx = OverContext::new(u.clone()).expect("generated models are valid");
        if universe_size(&ctx) <= budget {
            return (strategy, u);
        }
    }
}

/// `random_functor` wrapped as a context.
pub fn random_model(seed: u64, size_budget: usize) -> OverContext {
    OverContext::new(random_functor(seed, size_budget).1).expect("generated models are valid")
}

/// Renames a functor to `name` and its categories to `name.T`, `name.S`.
pub fn named_model(u: FunctorMap, name: &str) -> FunctorMap {
    FunctorMap {
        name: name.into(),
        source: Arc::new(renamed(&u.source, &format!("{name}.T"))),
        target: Arc::new(renamed(&u.target, &format!("{name}.S"))),
        obj_map: u.obj_map,
        arr_map: u.arr_map,
    }
}

/// Which notions a searched counterexample separates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Separation {
    PrefibrationNotFibration,
    PretopologicalNotTopological,
}

impl Separation {
    pub fn entry_name(self) -> &'static str {
        match self {
            Separation::PrefibrationNotFibration => "prefibration_not_fibration",
            Separation::PretopologicalNotTopological => "pretopological_not_topological",
        }
    }

    fn expected(self) -> Vec<(String, bool)> {
        let v: &[(&str, bool)] = match self {
            Separation::PrefibrationNotFibration => &[("prefibration", true), ("fibration", false)],
            Separation::PretopologicalNotTopological => &[
                ("faithful", true),
                ("pretopological", true),
                ("topological", false),
            ],
        };
        v.iter().map(|&(k, b)| (k.to_string(), b)).collect()
    }

    fn holds(self, ctx: &OverContext) -> Result<bool> {
        Ok(match self {
            Separation::PrefibrationNotFibration => {
                let f = is_fibration(ctx)?;
                f.prefibration.holds && !f.by_composition()
            }
            Separation::PretopologicalNotTopological => {
                pretopological_routes(ctx, Bound::Auto)?.value()
                    && !topological_routes(ctx, Bound::Auto)?.value()
            }
        })
    }
}

/// Number of seeds scanned by [`search_counterexample`] by default.
pub const SEARCH_SEEDS: u64 = 4000;

/// Scans random models for seeds `0..seeds` and returns the smallest one
/// (fewest objects plus arrows of both categories, then lowest seed) with
/// the separation, renamed for the corpus.
pub fn search_counterexample(sep: Separation, seeds: u64) -> Result<Option<CorpusEntry>> {
    let mut best: Option<(usize, u64, FunctorMap)> = None;
    for seed in 0..seeds {
        let (_, u) = random_functor(seed, DEFAULT_BUDGET);
        let size = u.source.num_objects() + u.source.num_arrows() + u.target.num_objects() + u.target.num_arrows();
        if best.as_ref().is_some_and(|b| b.0 <= size) {
            continue;
        }
        let ctx = OverContext::new(u.clone())?;
        if sep.holds(&ctx)? {
            best = Some((size, seed, u));
        }
    }
    Ok(best.map(|(_, seed, u)| CorpusEntry {
        name: sep.entry_name().into(),
        params: format!("seed={seed} budget={DEFAULT_BUDGET} seeds={seeds}"),
        functor: named_model(u, sep.entry_name()),
        expected: sep.expected(),
        provenance: format!("smallest hit among random models for seeds 0..{seeds} (seed {seed})"),
    }))
}

/// Writes every built-in entry, and the searched ones when `search` is set,
/// into `dir` as model files. Returns the written paths.
pub fn write_corpus(dir: &Path, search: bool) -> Result<Vec<PathBuf>> {
    let io = |path: &Path| {
        let path = path.display().to_string();
        move |source| Error::Io { path, source }
    };
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    let mut entries = build_examples()?;
    entries.extend(build_counterexamples());
    if search {
        for sep in [Separation::PrefibrationNotFibration, Separation::PretopologicalNotTopological] {
            match search_counterexample(sep, SEARCH_SEEDS)? {
                Some(e) => entries.push(e),
                None => {
                    return Err(Error::Precondition(format!(
                        "no {} model among seeds 0..{SEARCH_SEEDS}",
                        sep.entry_name()
                    )))
                }
            }
        }
    }
    let mut out = Vec::new();
    for e in &entries {
        let path = dir.join(e.file_name());
        let text = format!("# {}\n# {}\n{}", e.name, e.provenance, e.to_model());
        std::fs::write(&path, text).map_err(io(&path))?;
        out.push(path);
    }
    Ok(out)
}
