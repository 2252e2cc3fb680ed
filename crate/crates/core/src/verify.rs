//! The invariant suites run by `fibercheck verify`: route agreement, the
//! implication lattice, self-duality, class equalities, the property
//! battery, expected flags and Grothendieck round trips.

use std::fmt;
use std::ops::ControlFlow;

use crate::corpus::{self, CorpusEntry};
use crate::error::Result;
use crate::fibered::relative::initial_members;
use crate::fibered::{
    compare_strict_epi_final_surjective, compare_strict_mono_initial_injective, is_cartesian_arrow,
    is_fiber_product, is_fibration, is_initial_arrow, OverContext,
};
use crate::fincat::{Arr, Obj};
use crate::grothendieck::{check_lattice_characterization, extract_pseudofunctor, pseudofunctors_isomorphic, PosetPseudofunctor};
use crate::mask::{walk_subsets, Bound, Exactness};
use crate::model::Resolved;
use crate::topological::{classify, fibers_are_complete_lattices, theorem_battery, Classification, ItemStatus};

/// One named check on one subject.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub anchor: &'static str,
    pub subject: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} [{}] {}", self.anchor, self.subject)?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, anchor: &'static str, subject: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            anchor,
            subject: subject.to_string(),
            passed,
            detail: detail.into(),
        });
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.failures().count();
        writeln!(
            f,
            "{} checks, {} passed, {failed} failed",
            self.checks.len(),
            self.checks.len() - failed
        )
    }
}

/// What to run beyond the per-model invariants.
#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub bound: Bound,
    /// Run the property battery on topological models.
    pub battery: bool,
    /// Run the double-diagram lemma on faithful models.
    pub lemma: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            bound: Bound::Auto,
            battery: true,
            lemma: true,
        }
    }
}

/// Every per-model invariant, plus the expected flags when given.
pub fn verify_model(
    report: &mut VerifyReport,
    name: &str,
    ctx: &OverContext,
    expected: Option<&[(String, bool)]>,
    opts: VerifyOptions,
) -> Result<Classification> {
    let cl = classify(ctx, opts.bound)?;
    let fib = &cl.fibration;
    report.push(
        "fibration routes agree",
        name,
        fib.agree(),
        format!("composition={} initial-arrows={}", fib.by_composition(), fib.by_initial_arrows()),
    );
    report.push(
        "pretopological routes agree",
        name,
        cl.pretopological.agree(),
        cl.pretopological.to_string(),
    );
    report.push(
        "topological routes agree",
        name,
        cl.topological.agree(),
        cl.topological.to_string(),
    );
    let top = cl.is_topological();
    report.push(
        "topological iff m-functor with top sections",
        name,
        cl.via_strict_monos() == top,
        format!("m-functor={} top-sections={}", cl.mfunctor.holds(), cl.top_section),
    );
    report.push(
        "topological iff e-functor with bottom sections",
        name,
        cl.via_strict_epis() == top,
        format!("e-functor={} bottom-sections={}", cl.efunctor.holds(), cl.bot_section),
    );
    report.push(
        "self-duality",
        name,
        cl.topological_opposite == top,
        format!("u={top} u^op={}", cl.topological_opposite),
    );
    let broken: Vec<String> = cl
        .inconsistencies()
        .into_iter()
        .filter(|i| i.contains(" without "))
        .collect();
    report.push("implication lattice", name, broken.is_empty(), broken.join("; "));
    if cl.is_pretopological() {
        report.push("pretopological implies faithful", name, cl.faithful, "");
        let lat = fibers_are_complete_lattices(ctx)?;
        report.push(
            "pretopological implies lattice fibers",
            name,
            lat.holds,
            lat.counterexample.clone().unwrap_or_default(),
        );
    }
    if top {
        let se = compare_strict_epi_final_surjective(ctx, opts.bound)?;
        let sm = compare_strict_mono_initial_injective(ctx, opts.bound)?;
        let t = ctx.t();
        let first = |c: &crate::fibered::ClassComparison| {
            c.only_strict
                .iter()
                .chain(&c.only_final_surjective)
                .next()
                .map(|f| f.display(t).to_string())
                .unwrap_or_default()
        };
        report.push(
            "strict-epi = final and surjective",
            name,
            se.equal(),
            if se.equal() { format!("{} families", se.families) } else { first(&se) },
        );
        report.push(
            "strict-mono = initial and injective",
            name,
            sm.equal(),
            if sm.equal() { format!("{} families", sm.families) } else { first(&sm) },
        );
        if opts.battery {
            let b = theorem_battery(ctx, opts.bound)?;
            for it in &b.items {
                report.push(
                    "topological property battery",
                    &format!("{name} item {}", it.number),
                    it.status != ItemStatus::Fail,
                    format!("{}: {} ({})", it.title, it.status, it.detail),
                );
            }
        }
    }
    if opts.lemma && ctx.is_faithful() {
        let l = check_double_diagram_lemma(ctx, opts.bound)?;
        report.push(
            "fiber products and cartesian families",
            name,
            l.counterexamples.is_empty(),
            match l.counterexamples.first() {
                None => format!("{} diagrams, {}", l.diagrams, l.exactness),
                Some(c) => c.clone(),
            },
        );
    }
    if ctx.is_faithful() && fib.by_composition() && fiber_posets(ctx) {
        report.push_round_trip_fibration(name, ctx)?;
    }
    if let Some(exp) = expected {
        let flags = cl.flags();
        let wrong: Vec<String> = exp
            .iter()
            .filter_map(|(k, v)| {
                let got = flags.iter().find(|(n, _)| n == k).map(|&(_, g)| g);
                (got != Some(*v)).then(|| format!("{k}: expected {v}, got {}", got.map_or("?".into(), |g| g.to_string())))
            })
            .collect();
        report.push("expected flags", name, wrong.is_empty(), wrong.join("; "));
    }
    Ok(cl)
}

fn fiber_posets(ctx: &OverContext) -> bool {
    ctx.s().objects().all(|b| {
        let over = ctx.over(b);
        over.iter().all(|&x| {
            over.iter()
                .all(|&y| x == y || ctx.vertical(x, y).next().is_none() || ctx.vertical(y, x).next().is_none())
        })
    })
}

impl VerifyReport {
    /// Extracting the pseudofunctor of `ctx` and building its total
    /// category gives back `u` up to isomorphism over the base.
    fn push_round_trip_fibration(&mut self, name: &str, ctx: &OverContext) -> Result<()> {
        let p = extract_pseudofunctor(ctx)?;
        let total = p.total_category()?;
        let iso = total.projection.iso_over_base(&ctx.u);
        self.push(
            "extract then build is isomorphic",
            name,
            iso.is_some(),
            if iso.is_some() { "" } else { "no isomorphism over the base" },
        );
        Ok(())
    }
}

/// Lattice characterization and both round trips for one pseudofunctor.
pub fn verify_pseudofunctor(report: &mut VerifyReport, p: &PosetPseudofunctor) -> Result<()> {
    let name = format!("pseudofunctor {}", p.name);
    let lc = check_lattice_characterization(p)?;
    report.push(
        "lattice characterization",
        &name,
        lc.agree(),
        format!("topological={} ({}) lattice-condition={}", lc.lhs(), lc.topological, lc.rhs()),
    );
    let total = p.total_category()?;
    let ctx = OverContext::new(total.projection.clone())?;
    let fib = is_fibration(&ctx)?;
    report.push(
        "total category is a fibration",
        &name,
        fib.by_composition() && fib.agree(),
        "",
    );
    let back = extract_pseudofunctor(&ctx)?;
    let iso = pseudofunctors_isomorphic(p, &back);
    report.push(
        "build then extract is isomorphic",
        &name,
        iso.is_some(),
        if iso.is_some() { "" } else { "extracted data differs" },
    );
    Ok(())
}

/// Every functor of a model file, checked against its `expect` blocks, and
/// every pseudofunctor.
pub fn verify_resolved(r: &Resolved, opts: VerifyOptions) -> Result<VerifyReport> {
    let mut rep = VerifyReport::default();
    for u in &r.functors {
        let ctx = OverContext::new(u.clone())?;
        let expectations: Vec<_> = r.expectations.iter().filter(|e| e.functor == u.name).collect();
        if expectations.is_empty() {
            verify_model(&mut rep, &u.name, &ctx, None, opts)?;
        }
        for e in expectations {
            verify_model(&mut rep, &e.entry, &ctx, Some(&e.flags), opts)?;
        }
    }
    for p in &r.pseudofunctors {
        verify_pseudofunctor(&mut rep, p)?;
    }
    Ok(rep)
}

/// Runs [`verify_model`] on every corpus entry and [`verify_pseudofunctor`]
/// on every corpus pseudofunctor.
pub fn verify_entries(entries: &[CorpusEntry], opts: VerifyOptions) -> Result<VerifyReport> {
    let mut r = VerifyReport::default();
    for e in entries {
        let ctx = OverContext::new(e.functor.clone())?;
        verify_model(&mut r, &e.name, &ctx, Some(&e.expected), opts)?;
    }
    Ok(r)
}

pub fn verify_corpus(opts: VerifyOptions) -> Result<VerifyReport> {
    let mut r = verify_entries(&corpus::full_corpus()?, opts)?;
    for p in corpus::corpus_pseudofunctors()? {
        verify_pseudofunctor(&mut r, &p)?;
    }
    Ok(r)
}

/// Random models for seeds `first..first + count`, and a random
/// pseudofunctor per seed.
pub fn verify_random(first: u64, count: u64, budget: usize, opts: VerifyOptions) -> Result<VerifyReport> {
    let mut r = VerifyReport::default();
    for seed in first..first + count {
        let (strategy, u) = corpus::random_functor(seed, budget);
        let ctx = OverContext::new(u)?;
        verify_model(&mut r, &format!("seed {seed} ({strategy})"), &ctx, None, opts)?;
        verify_pseudofunctor(&mut r, &corpus::random_pseudofunctor(seed))?;
    }
    Ok(r)
}

/// Outcome of [`check_double_diagram_lemma`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    /// Families examined for the product/cartesian equivalence.
    pub diagrams: u64,
    /// Families examined for the initial/initial equivalence.
    pub initial_diagrams: u64,
    pub counterexamples: Vec<String>,
    pub exactness: Exactness,
}

/// For every object `X` over `S` and every set of pairs `(π_α, f_α)` with
/// `π_α: X → Y_α` vertical and `f_α: Y_α → X_α` cartesian, checks that `π`
/// is a fiber product exactly when `p_α = f_α ∘ π_α` is a cartesian family;
/// and when every `f_α` is initial, that `π` is initial exactly when `p` is.
/// Families are sets, so the check is exact for faithful functors.
pub fn check_double_diagram_lemma(ctx: &OverContext, bound: Bound) -> Result<LemmaReport> {
    let t = ctx.t();
    let mut out = LemmaReport {
        diagrams: 0,
        initial_diagrams: 0,
        counterexamples: Vec::new(),
        exactness: Exactness::Exact,
    };
    let cartesian: Vec<bool> = t.arrows().map(|a| is_cartesian_arrow(ctx, a)).collect();
    let initial: Vec<bool> = t.arrows().map(|a| is_initial_arrow(ctx, a)).collect();
    for b in ctx.s().objects() {
        for &x in ctx.over(b) {
            // (π, f) with f cartesian out of the fiber
            let pairs: Vec<(Arr, Arr)> = ctx
                .over(b)
                .iter()
                .flat_map(|&y| {
                    let fs: Vec<Arr> = t
                        .arrows()
                        .filter(|&f| t.src(f) == y && cartesian[f.idx()])
                        .collect();
                    ctx.vertical(x, y)
                        .flat_map(move |pi| fs.clone().into_iter().map(move |f| (pi, f)))
                        .collect::<Vec<_>>()
                })
                .collect();
            let (k, ex) = bound.resolve(pairs.len());
            out.exactness = out.exactness.combine(ex);
            let _ = walk_subsets(
                pairs.len(),
                k,
                (),
                &mut |_, _| (),
                &mut |_, idx: &[usize]| {
                    let pis: Vec<Arr> = idx.iter().map(|&i| pairs[i].0).collect();
                    let ps: Vec<Arr> = idx.iter().map(|&i| t.comp(pairs[i].1, pairs[i].0)).collect();
                    out.diagrams += 1;
                    let product = is_fiber_product(ctx, x, &pis);
                    let cart = initial_members(ctx, x, &ps, true);
                    if product != cart {
                        out.counterexamples.push(lemma_witness(ctx, x, &pis, &ps, "product", product, "cartesian", cart));
                        return ControlFlow::Break(());
                    }
                    if idx.iter().all(|&i| initial[pairs[i].1.idx()]) {
                        out.initial_diagrams += 1;
                        let a = initial_members(ctx, x, &pis, false);
                        let c = initial_members(ctx, x, &ps, false);
                        if a != c {
                            out.counterexamples.push(lemma_witness(ctx, x, &pis, &ps, "initial", a, "initial", c));
                            return ControlFlow::Break(());
                        }
                    }
                    ControlFlow::Continue(())
                },
            );
            if !out.counterexamples.is_empty() {
                return Ok(out);
            }
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn lemma_witness(
    ctx: &OverContext,
    x: Obj,
    pis: &[Arr],
    ps: &[Arr],
    left: &str,
    lv: bool,
    right: &str,
    rv: bool,
) -> String {
    let t = ctx.t();
    let names = |v: &[Arr]| v.iter().map(|&a| t.arr_name(a)).collect::<Vec<_>>().join(", ");
    format!(
        "at {}: legs [{}] {left}={lv}, composites [{}] {right}={rv}",
        t.obj_name(x),
        names(pis),
        names(ps)
    )
}
