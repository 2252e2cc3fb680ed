//! Pretopological and topological functors: every characterization as a
//! separate route, the `⊤`/`⊥` sections, self-duality and the property
//! battery of topological functors.

use std::fmt;
use std::sync::Arc;

use crate::error::Result;
use crate::families::{Family, Orientation, SinkOracle};
use crate::fibered::{
    is_cartesian_arrow,
    cartesian_arrows_compose_with_families, compare_strict_epi_final_surjective,
    compare_strict_mono_initial_injective, create_witness, creates_families, efunctor_report,
    fibers_have_all_products, is_fibration, mfunctor_report, products_stable, BaseFilter,
    FibrationVerdict, FunctorConditionReport, Kind, LiftTarget, OverContext, Verdict,
};
use crate::fincat::limits::{self, shape_catalog};
use crate::fincat::{Arr, FinCat, FunctorMap, Obj};
use crate::lattice::FinPoset;
use crate::mask::{walk_subsets, Bound, Exactness, Mask};

/// Verdicts of several characterizations of one notion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Routes {
    pub routes: Vec<(&'static str, Verdict)>,
}

impl Routes {
    /// The verdict of the first (defining) route.
    pub fn value(&self) -> bool {
        self.routes[0].1.holds
    }

    pub fn agree(&self) -> bool {
        self.routes.iter().all(|(_, v)| v.holds == self.value())
    }

    pub fn exactness(&self) -> Exactness {
        self.routes
            .iter()
            .fold(Exactness::Exact, |e, (_, v)| e.combine(v.exactness))
    }

    pub fn get(&self, name: &str) -> Option<&Verdict> {
        self.routes.iter().find(|(n, _)| *n == name).map(|(_, v)| v)
    }
}

impl fmt::Display for Routes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .routes
            .iter()
            .map(|(n, v)| format!("{n}={}", v.holds))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Every fiber is thin and a complete lattice.
pub fn fibers_are_complete_lattices(ctx: &OverContext) -> Result<Verdict> {
    for s in ctx.s().objects() {
        let fib = ctx.fiber(s)?;
        let name = ctx.s().obj_name(s);
        if !fib.subcat.is_thin() {
            return Ok(Verdict::fail(
                Exactness::Exact,
                format!("fiber over {name} is not thin"),
            ));
        }
        let p = FinPoset::of_category(&fib.subcat);
        if let Some(why) = p.lattice_failure() {
            let detail = match why {
                None => "has no top element".to_string(),
                Some((a, b)) => format!("has no meet of {} and {}", p.elements[a], p.elements[b]),
            };
            return Ok(Verdict::fail(
                Exactness::Exact,
                format!("fiber over {name} {detail}"),
            ));
        }
    }
    Ok(Verdict::pass(Exactness::Exact))
}

fn both(a: &Verdict, b: &Verdict) -> Verdict {
    let exactness = a.exactness.combine(b.exactness);
    match (a.holds, b.holds) {
        (true, true) => Verdict::pass(exactness),
        (false, _) => Verdict::fail(exactness, a.counterexample.clone().unwrap_or_default()),
        (_, false) => Verdict::fail(exactness, b.counterexample.clone().unwrap_or_default()),
    }
}

fn all_of(vs: &[&Verdict]) -> Verdict {
    vs.iter()
        .skip(1)
        .fold(vs[0].clone(), |acc, v| both(&acc, v))
}

/// Route A: creation of cartesian families. Route B: prefibration whose
/// fibers have all products. Route B′: prefibration whose fibers are
/// complete lattices.
pub fn pretopological_routes(ctx: &OverContext, bound: Bound) -> Result<Routes> {
    let a = creates_families(ctx, Kind::Cartesian, BaseFilter::All, bound)?;
    let pre = creates_families(ctx, Kind::Cartesian, BaseFilter::Singletons, bound)?;
    let pre = Verdict::from_creation(&pre, ctx);
    let prod = fibers_have_all_products(ctx, bound)?;
    let lat = fibers_are_complete_lattices(ctx)?;
    Ok(Routes {
        routes: vec![
            ("A", Verdict::from_creation(&a, ctx)),
            ("B", both(&pre, &prod)),
            ("B'", both(&pre, &lat)),
        ],
    })
}

/// Route A: creates cartesian families, and cartesian arrows compose with
/// cartesian families. Route B: creates initial families. Route C:
/// fibration creating initial families over strict-mono families and over
/// the empty family out of each base object. Route D:
/// fibration with complete-lattice fibers and stable products.
pub fn topological_routes(ctx: &OverContext, bound: Bound) -> Result<Routes> {
    let cart = creates_families(ctx, Kind::Cartesian, BaseFilter::All, bound)?;
    let cart = Verdict::from_creation(&cart, ctx);
    let compose = if cart.holds {
        cartesian_arrows_compose_with_families(ctx, bound)?
    } else {
        Verdict::pass(Exactness::Exact)
    };
    let b = creates_families(ctx, Kind::Initial, BaseFilter::All, bound)?;
    let fib = is_fibration(ctx)?;
    let init_arrows = fib.creates_initial_arrows.clone();
    let injective = creates_families(ctx, Kind::Initial, BaseFilter::StrictMono, bound)?;
    let empty = empty_initial_families(ctx)?;
    let fibration = both(&fib.prefibration, &fib.cartesian_compose);
    let lat = fibers_are_complete_lattices(ctx)?;
    let stable = products_stable(ctx, bound)?;
    Ok(Routes {
        routes: vec![
            ("A", both(&cart, &compose)),
            ("B", Verdict::from_creation(&b, ctx)),
            ("C", all_of(&[&init_arrows, &Verdict::from_creation(&injective, ctx), &empty])),
            ("D", all_of(&[&fibration, &lat, &stable])),
        ],
    })
}

/// An initial family over the empty family out of every base object. The
/// empty family is strict-mono only out of a terminal object, so route C
/// asks for it separately.
fn empty_initial_families(ctx: &OverContext) -> Result<Verdict> {
    for s in ctx.s().objects() {
        if create_witness(ctx, Kind::Initial, s, &[])?.is_none() {
            return Ok(Verdict::fail(
                Exactness::Exact,
                format!("no initial family out of an object over {} along []", ctx.s().obj_name(s)),
            ));
        }
    }
    Ok(Verdict::pass(Exactness::Exact))
}

/// `⊤` over `s`: the apex of an initial family over the empty family out of
/// `s`, checked terminal in its fiber.
pub fn top_object(ctx: &OverContext, s: Obj) -> Result<Option<Obj>> {
    let w = create_witness(ctx, Kind::Initial, s, &[])?;
    Ok(w.map(|w| w.apex).filter(|&y| terminal_in_fiber(ctx, y)))
}

/// `⊥` over `s`: the apex of a final family over the empty family into `s`,
/// checked initial in its fiber.
pub fn bot_object(ctx: &OverContext, s: Obj) -> Result<Option<Obj>> {
    let w = create_witness(ctx, Kind::Final, s, &[])?;
    Ok(w.map(|w| w.apex).filter(|&y| terminal_in_fiber(ctx.op(), y)))
}

/// For faithful `u`: the apex of an initial family over every arrow out of
/// `s` into the base of some object, together with that object.
pub fn bot_via_initial_family(ctx: &OverContext, s: Obj) -> Result<Option<Obj>> {
    let (t, b) = (ctx.t(), ctx.s());
    let targets: Vec<LiftTarget> = t
        .objects()
        .flat_map(|z| {
            b.hom(s, ctx.base(z))
                .iter()
                .map(move |&phi| LiftTarget { phi, x: z })
        })
        .collect();
    Ok(create_witness(ctx, Kind::Initial, s, &targets)?.map(|w| w.apex))
}

fn terminal_in_fiber(ctx: &OverContext, y: Obj) -> bool {
    let b = ctx.base(y);
    ctx.over(b)
        .iter()
        .all(|&z| ctx.vertical(z, y).count() == 1)
}

/// `ε = id_S: u(Y) → S` is couniversal.
fn identity_couniversal(ctx: &OverContext, y: Obj) -> bool {
    let (t, s) = (ctx.t(), ctx.s());
    let b = ctx.base(y);
    t.objects()
        .all(|x| s.hom(ctx.base(x), b).iter().all(|&phi| ctx.lift_count(x, y, phi) == 1))
}

/// A section `S ↦ S_⊤` whose objects make `id_S` couniversal, that is, a
/// right adjoint of `u` with identity counit.
pub fn top_section(ctx: &OverContext) -> Option<Vec<Obj>> {
    ctx.s()
        .objects()
        .map(|s| ctx.over(s).iter().copied().find(|&y| identity_couniversal(ctx, y)))
        .collect()
}

/// The dual: a left adjoint of `u` with identity unit.
pub fn bot_section(ctx: &OverContext) -> Option<Vec<Obj>> {
    top_section(ctx.op())
}

/// One side of [`AdjointPair`]: the section as a functor, and the checks
/// made on it.
#[derive(Clone, Debug)]
pub struct SectionAdjoint {
    pub objects: Vec<Obj>,
    pub functor: FunctorMap,
    pub functorial: bool,
    pub splits_u: bool,
    pub full_and_faithful: bool,
    pub triangle_identities: bool,
}

impl SectionAdjoint {
    pub fn verified(&self) -> bool {
        self.functorial && self.splits_u && self.full_and_faithful && self.triangle_identities
    }
}

/// `(−)_⊤` and `(−)_⊥`, each absent when some object lacks it.
#[derive(Clone, Debug)]
pub struct AdjointPair {
    pub top: Option<SectionAdjoint>,
    pub bot: Option<SectionAdjoint>,
}

impl AdjointPair {
    pub fn complete(&self) -> bool {
        self.top.as_ref().is_some_and(|t| t.verified())
            && self.bot.as_ref().is_some_and(|b| b.verified())
    }
}

/// Builds the section functor `S ↦ S_⊤` (arrows: the unique lift between
/// the chosen objects) and checks functoriality, `u ∘ (−)_⊤ = id`, full
/// faithfulness and the triangle identities.
fn section_adjoint(ctx: &OverContext, objects: Vec<Obj>) -> SectionAdjoint {
    let (t, s) = (ctx.t(), ctx.s());
    let mut arrows = Vec::with_capacity(s.num_arrows());
    let mut complete = true;
    for a in s.arrows() {
        match ctx.lift(objects[s.src(a).idx()], objects[s.tgt(a).idx()], a) {
            Some(l) => arrows.push(l),
            None => {
                complete = false;
                arrows.push(Arr(0));
            }
        }
    }
    let functor = FunctorMap {
        name: format!("section({})", ctx.name()),
        source: ctx.u.target.clone(),
        target: ctx.u.source.clone(),
        obj_map: objects.clone(),
        arr_map: arrows,
    };
    let functorial = complete && functor.validate().is_valid();
    let splits_u = functorial
        && s.objects().all(|x| ctx.base(functor.on_obj(x)) == x)
        && s.arrows().all(|a| ctx.u.on_arr(functor.on_arr(a)) == a);
    let full_and_faithful = functorial
        && s.objects().all(|x| {
            s.objects()
                .all(|y| t.hom(objects[x.idx()], objects[y.idx()]).len() == s.hom(x, y).len())
        });
    // unit η_X: X → (uX)_⊤ over the identity; u(η) = id and η at a section
    // object is its identity
    let triangle_identities = functorial
        && t.objects().all(|x| {
            let b = ctx.base(x);
            let y = objects[b.idx()];
            ctx.lift_count(x, y, s.id(b)) == 1
        })
        && s.objects().all(|b| {
            let y = objects[b.idx()];
            ctx.lift(y, y, s.id(b)) == Some(t.id(y))
        });
    SectionAdjoint {
        objects,
        functor,
        functorial,
        splits_u,
        full_and_faithful,
        triangle_identities,
    }
}

/// Assembles and verifies `(−)_⊤ ⊣`-style sections on both sides.
pub fn adjoint_witness(ctx: &OverContext) -> AdjointPair {
    let top = top_section(ctx).map(|objs| section_adjoint(ctx, objs));
    let bot = bot_section(ctx).map(|objs| {
        let mut sa = section_adjoint(ctx.op(), objs);
        sa.functor = sa.functor.opposite();
        sa.functor.name = format!("section_bot({})", ctx.name());
        sa
    });
    AdjointPair { top, bot }
}

/// The flags and per-route verdicts for one functor.
#[derive(Clone, Debug)]
pub struct Classification {
    pub name: String,
    pub faithful: bool,
    pub fibration: FibrationVerdict,
    pub pretopological: Routes,
    pub topological: Routes,
    pub efunctor: FunctorConditionReport,
    pub mfunctor: FunctorConditionReport,
    pub top_section: bool,
    pub bot_section: bool,
    pub topological_opposite: bool,
}

impl Classification {
    pub fn prefibration(&self) -> bool {
        self.fibration.prefibration.holds
    }

    pub fn is_fibration(&self) -> bool {
        self.fibration.by_composition()
    }

    pub fn is_pretopological(&self) -> bool {
        self.pretopological.value()
    }

    pub fn is_topological(&self) -> bool {
        self.topological.value()
    }

    /// M-functor with `⊤` sections.
    pub fn via_strict_monos(&self) -> bool {
        self.mfunctor.holds() && self.top_section
    }

    /// E-functor with `⊥` sections.
    pub fn via_strict_epis(&self) -> bool {
        self.efunctor.holds() && self.bot_section
    }

    pub fn exactness(&self) -> Exactness {
        self.pretopological
            .exactness()
            .combine(self.topological.exactness())
            .combine(self.efunctor.exactness())
            .combine(self.mfunctor.exactness())
    }

    /// Named flags in a fixed order.
    pub fn flags(&self) -> Vec<(&'static str, bool)> {
        vec![
            ("faithful", self.faithful),
            ("prefibration", self.prefibration()),
            ("fibration", self.is_fibration()),
            ("pretopological", self.is_pretopological()),
            ("topological", self.is_topological()),
            ("e-functor", self.efunctor.holds()),
            ("m-functor", self.mfunctor.holds()),
        ]
    }

    /// Disagreements between routes and broken implications; empty on a
    /// consistent classification.
    pub fn inconsistencies(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.fibration.agree() {
            out.push(format!(
                "fibration routes disagree: composition={} initial-arrows={}",
                self.fibration.by_composition(),
                self.fibration.by_initial_arrows()
            ));
        }
        if !self.pretopological.agree() {
            out.push(format!("pretopological routes disagree: {}", self.pretopological));
        }
        if !self.topological.agree() {
            out.push(format!("topological routes disagree: {}", self.topological));
        }
        let top = self.is_topological();
        if self.via_strict_monos() != top {
            out.push(format!(
                "m-functor with top sections gives {} against topological={top}",
                self.via_strict_monos()
            ));
        }
        if self.via_strict_epis() != top {
            out.push(format!(
                "e-functor with bottom sections gives {} against topological={top}",
                self.via_strict_epis()
            ));
        }
        if self.topological_opposite != top {
            out.push(format!(
                "opposite functor gives topological={} against {top}",
                self.topological_opposite
            ));
        }
        let imp = [
            ("topological", top, "pretopological", self.is_pretopological()),
            ("pretopological", self.is_pretopological(), "prefibration", self.prefibration()),
            ("topological", top, "fibration", self.is_fibration()),
            ("pretopological", self.is_pretopological(), "faithful", self.faithful),
            ("fibration", self.is_fibration(), "prefibration", self.prefibration()),
        ];
        for (a, va, b, vb) in imp {
            if va && !vb {
                out.push(format!("{a} without {b}"));
            }
        }
        out
    }
}

pub fn classify(ctx: &OverContext, bound: Bound) -> Result<Classification> {
    Ok(Classification {
        name: ctx.name().to_string(),
        faithful: ctx.is_faithful(),
        fibration: is_fibration(ctx)?,
        pretopological: pretopological_routes(ctx, bound)?,
        topological: topological_routes(ctx, bound)?,
        efunctor: efunctor_report(ctx, bound)?,
        mfunctor: mfunctor_report(ctx, bound)?,
        top_section: top_section(ctx).is_some(),
        bot_section: bot_section(ctx).is_some(),
        topological_opposite: topological_routes(ctx.op(), bound)?.value(),
    })
}

/// Topological verdicts of `u` and of `u^op`.
pub fn self_duality_check(ctx: &OverContext, bound: Bound) -> Result<(bool, bool)> {
    Ok((
        topological_routes(ctx, bound)?.value(),
        topological_routes(ctx.op(), bound)?.value(),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ItemStatus {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for ItemStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ItemStatus::Pass => "PASS",
            ItemStatus::Fail => "FAIL",
            ItemStatus::Skipped => "SKIPPED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BatteryItem {
    pub number: u8,
    pub title: &'static str,
    pub status: ItemStatus,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BatteryReport {
    pub items: Vec<BatteryItem>,
}

impl BatteryReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.status != ItemStatus::Fail)
    }

    pub fn item(&self, n: u8) -> &BatteryItem {
        &self.items[(n - 1) as usize]
    }
}

fn item(number: u8, title: &'static str, ok: bool, detail: impl Into<String>) -> BatteryItem {
    BatteryItem {
        number,
        title,
        status: if ok { ItemStatus::Pass } else { ItemStatus::Fail },
        detail: detail.into(),
    }
}

/// Maximum diagram shape size used by the limit item of the battery.
pub const BATTERY_SHAPE_NODES: usize = 3;

/// The properties every topological functor has, each checked directly.
pub fn theorem_battery(ctx: &OverContext, bound: Bound) -> Result<BatteryReport> {
    let mut items = Vec::with_capacity(8);
    items.push(item(
        1,
        "faithful",
        ctx.is_faithful(),
        if ctx.is_faithful() { "every hom-set maps injectively" } else { "two parallel arrows share an image" },
    ));

    let fin = creates_families(ctx, Kind::Final, BaseFilter::All, bound)?;
    let ini = creates_families(ctx, Kind::Initial, BaseFilter::All, bound)?;
    items.push(item(
        2,
        "creates final and initial families",
        fin.holds && ini.holds,
        format!("final: {}; initial: {}", Verdict::from_creation(&fin, ctx), Verdict::from_creation(&ini, ctx)),
    ));

    items.push(fibration_item(ctx)?);

    let pair = adjoint_witness(ctx);
    items.push(item(
        4,
        "top and bottom sections are adjoints splitting u",
        pair.complete(),
        format!(
            "top: {}; bottom: {}",
            pair.top.as_ref().map_or("absent".to_string(), |t| section_summary(ctx.t(), t)),
            pair.bot.as_ref().map_or("absent".to_string(), |t| section_summary(ctx.t(), t)),
        ),
    ));

    let se = compare_strict_epi_final_surjective(ctx, bound)?;
    let sm = compare_strict_mono_initial_injective(ctx, bound)?;
    items.push(item(
        5,
        "strict-epi = final∧surjective, strict-mono = initial∧injective",
        se.equal() && sm.equal(),
        format!(
            "sinks: {} strict, {} final-surjective of {}; sources: {} strict, {} initial-injective of {}",
            se.strict, se.final_surjective, se.families, sm.strict, sm.final_surjective, sm.families
        ),
    ));

    items.push(limits_item(ctx)?);
    items.push(epi_surjective_item(ctx, bound)?);
    items.push(representable_item(ctx)?);
    Ok(BatteryReport { items })
}

fn section_summary(t: &FinCat, s: &SectionAdjoint) -> String {
    let names: Vec<&str> = s.objects.iter().map(|&o| t.obj_name(o)).collect();
    format!(
        "[{}] {}",
        names.join(", "),
        if s.verified() { "verified" } else { "not verified" }
    )
}

/// Fibration and cofibration, lattice fibers, and `φ_! ⊣ φ*` between the
/// fibers for every base arrow.
fn fibration_item(ctx: &OverContext) -> Result<BatteryItem> {
    let title = "fibration and cofibration with lattice fibers and adjoint transitions";
    let fib = is_fibration(ctx)?;
    let cofib = is_fibration(ctx.op())?;
    let lat = fibers_are_complete_lattices(ctx)?;
    if !(fib.by_composition() && cofib.by_composition() && lat.holds) {
        return Ok(item(
            3,
            title,
            false,
            format!(
                "fibration={} cofibration={} lattices={}",
                fib.by_composition(),
                cofib.by_composition(),
                lat.holds
            ),
        ));
    }
    // φ*(y) is the source of a cartesian arrow over φ into y, φ_!(x) the
    // target of a cocartesian one out of x; fibers are thin, so any choice
    // does
    let (t, s) = (ctx.t(), ctx.s());
    let le = |x: Obj, y: Obj| ctx.vertical(x, y).next().is_some();
    for a in s.arrows() {
        let (src, tgt) = (s.src(a), s.tgt(a));
        let pull = |y: Obj| {
            ctx.over(src)
                .iter()
                .flat_map(|&x| ctx.lifts(x, y, a))
                .find(|&f| is_cartesian_arrow(ctx, f))
                .map(|f| t.src(f))
        };
        let push = |x: Obj| {
            ctx.over(tgt)
                .iter()
                .flat_map(|&y| ctx.lifts(x, y, a))
                .find(|&f| is_cartesian_arrow(ctx.op(), f))
                .map(|f| t.tgt(f))
        };
        for &x in ctx.over(src) {
            for &y in ctx.over(tgt) {
                let (Some(px), Some(py)) = (push(x), pull(y)) else {
                    return Ok(item(3, title, false, format!("missing lift along {}", s.arr_name(a))));
                };
                if le(px, y) != le(x, py) {
                    return Ok(item(
                        3,
                        title,
                        false,
                        format!(
                            "along {}: push of {} vs pull of {} breaks the adjunction",
                            s.arr_name(a),
                            t.obj_name(x),
                            t.obj_name(y)
                        ),
                    ));
                }
            }
        }
    }
    Ok(item(
        3,
        title,
        true,
        format!("push-forward left adjoint to pullback along all {} base arrows", s.num_arrows()),
    ))
}

/// Colimits of diagrams in `T` map to colimits, and colimits of image
/// diagrams lift to colimits; limits via the opposite functor.
fn limits_item(ctx: &OverContext) -> Result<BatteryItem> {
    let title = "creates and preserves limits and colimits";
    let mut checked = 0usize;
    for (side, c) in [("colimit", ctx), ("limit", ctx.op())] {
        let (t, s) = (Arc::clone(&c.u.source), Arc::clone(&c.u.target));
        for shape in shape_catalog(BATTERY_SHAPE_NODES) {
            for d in limits::diagrams(&shape.cat, &t) {
                checked += 1;
                let ud = c.u.after(&d);
                // preservation
                for k in limits::colimits(&t, &d) {
                    let img = limits::Cocone {
                        apex: c.base(k.apex),
                        legs: k.legs.iter().map(|&l| c.u.on_arr(l)).collect(),
                    };
                    if !limits::is_colimit_cocone(&s, &ud, &img) {
                        return Ok(item(
                            6,
                            title,
                            false,
                            format!("a {side} of a {} diagram is not preserved", shape.name),
                        ));
                    }
                }
                // creation
                for k in limits::colimits(&s, &ud) {
                    let lifted = c.over(k.apex).iter().any(|&y| {
                        lifted_cocones(c, &d, y, &k.legs)
                            .iter()
                            .any(|kk| limits::is_colimit_cocone(&t, &d, kk))
                    });
                    if !lifted {
                        return Ok(item(
                            6,
                            title,
                            false,
                            format!("a {side} of the image of a {} diagram does not lift", shape.name),
                        ));
                    }
                }
            }
        }
    }
    Ok(item(
        6,
        title,
        true,
        format!("{checked} diagrams over shapes with at most {BATTERY_SHAPE_NODES} nodes, both directions"),
    ))
}

/// Cocones of `d` with apex `y` whose legs sit over `legs`.
fn lifted_cocones(ctx: &OverContext, d: &FunctorMap, y: Obj, legs: &[Arr]) -> Vec<limits::Cocone> {
    limits::cocones_to(ctx.t(), d, y)
        .into_iter()
        .filter(|k| k.legs.iter().zip(legs).all(|(&l, &b)| ctx.u.on_arr(l) == b))
        .collect()
}

/// When every epi family in the base is strict, epi families of `T` are
/// exactly the surjective ones; dually for monos.
fn epi_surjective_item(ctx: &OverContext, bound: Bound) -> Result<BatteryItem> {
    let title = "epi = surjective and mono = injective when the base has only strict ones";
    let mut parts = Vec::new();
    let mut ran = false;
    for (side, c) in [("epi", ctx), ("mono", ctx.op())] {
        let s = c.s();
        if !all_epi_families_strict(s, bound)? {
            parts.push(format!("{side}: SKIPPED (base has a non-strict {side} family)"));
            continue;
        }
        ran = true;
        match epi_vs_surjective(c, bound)? {
            None => parts.push(format!("{side}: equal")),
            Some(f) => {
                let t = c.t();
                return Ok(item(7, title, false, format!("{side}: {} differs", f.display(t))));
            }
        }
    }
    Ok(BatteryItem {
        number: 7,
        title,
        status: if ran { ItemStatus::Pass } else { ItemStatus::Skipped },
        detail: parts.join("; "),
    })
}

fn all_epi_families_strict(c: &FinCat, bound: Bound) -> Result<bool> {
    let mut o = SinkOracle::new(c)?;
    let down: Vec<Mask> = c.arrows().map(|a| o.index.down(a)).collect();
    let mut ok = true;
    for x in c.objects() {
        let ins = c.ins(x);
        let (k, _) = bound.resolve(ins.len());
        let _ = walk_subsets(
            ins.len(),
            k,
            0 as Mask,
            &mut |m: &Mask, i| m | down[ins[i].idx()],
            &mut |m: &Mask, _| {
                if o.epi_crible(c, x, *m) && !o.strict_epi_crible(c, x, *m) {
                    ok = false;
                    return std::ops::ControlFlow::Break(());
                }
                std::ops::ControlFlow::Continue(())
            },
        );
        if !ok {
            break;
        }
    }
    Ok(ok)
}

/// First sink family of `T` that is epi but not surjective or conversely.
fn epi_vs_surjective(ctx: &OverContext, bound: Bound) -> Result<Option<Family>> {
    let (t, s) = (ctx.t(), ctx.s());
    let mut top = SinkOracle::new(t)?;
    let mut bot = SinkOracle::new(s)?;
    let tdown: Vec<Mask> = t.arrows().map(|a| top.index.down(a)).collect();
    let sdown: Vec<Mask> = t.arrows().map(|a| bot.index.down(ctx.u.on_arr(a))).collect();
    for x in t.objects() {
        let ins = t.ins(x);
        let (k, _) = bound.resolve(ins.len());
        let mut bad = None;
        let _ = walk_subsets(
            ins.len(),
            k,
            (0 as Mask, 0 as Mask),
            &mut |m: &(Mask, Mask), i| (m.0 | tdown[ins[i].idx()], m.1 | sdown[ins[i].idx()]),
            &mut |m: &(Mask, Mask), idx: &[usize]| {
                if top.epi_crible(t, x, m.0) != bot.strict_epi_crible(s, ctx.base(x), m.1) {
                    bad = Some(idx.iter().map(|&i| ins[i]).collect::<Vec<_>>());
                    return std::ops::ControlFlow::Break(());
                }
                std::ops::ControlFlow::Continue(())
            },
        );
        if let Some(members) = bad {
            return Ok(Some(Family {
                orientation: Orientation::Sink,
                anchor: x,
                members,
            }));
        }
    }
    Ok(None)
}

/// The base looks like a truncation of finite sets: it has a terminal
/// object `1`, `hom(1, −)` is faithful, and `|hom(X, Y)| = |Y|^|X|` for
/// the point counts. Returns `1`.
pub fn finset_like_terminal(s: &FinCat) -> Option<Obj> {
    let one = s
        .objects()
        .find(|&o| s.objects().all(|x| s.hom(x, o).len() == 1))?;
    let points = |x: Obj| s.hom(one, x).len() as u32;
    let faithful = s.objects().all(|x| {
        s.objects().all(|y| {
            let hom = s.hom(x, y);
            let mut seen: Vec<Vec<Arr>> = Vec::new();
            hom.iter().all(|&f| {
                let img: Vec<Arr> = s.hom(one, x).iter().map(|&p| s.comp(f, p)).collect();
                !seen.contains(&img) && {
                    seen.push(img);
                    true
                }
            })
        })
    });
    let counts = s.objects().all(|x| {
        s.objects()
            .all(|y| Some(s.hom(x, y).len()) == (points(y) as usize).checked_pow(points(x)))
    });
    (faithful && counts).then_some(one)
}

/// Over a finite-set base, `g ↦ u(g)` is a bijection
/// `hom(1_⊥, X) → hom(1, uX)`, natural in `X`.
fn representable_item(ctx: &OverContext) -> Result<BatteryItem> {
    let title = "u is represented by the bottom object over the point";
    let Some(one) = finset_like_terminal(ctx.s()) else {
        return Ok(BatteryItem {
            number: 8,
            title,
            status: ItemStatus::Skipped,
            detail: "base is not a truncation of finite sets".into(),
        });
    };
    let Some(bot) = bot_object(ctx, one)? else {
        return Ok(item(8, title, false, "no bottom object over the point"));
    };
    let (t, s) = (ctx.t(), ctx.s());
    for x in t.objects() {
        let hom = t.hom(bot, x);
        let pts = s.hom(one, ctx.base(x));
        let mut imgs: Vec<Arr> = hom.iter().map(|&g| ctx.u.on_arr(g)).collect();
        imgs.sort();
        imgs.dedup();
        if hom.len() != pts.len() || imgs.len() != hom.len() {
            return Ok(item(
                8,
                title,
                false,
                format!(
                    "{}: {} arrows from {} but {} points",
                    t.obj_name(x),
                    hom.len(),
                    t.obj_name(bot),
                    pts.len()
                ),
            ));
        }
    }
    // naturality: u(f ∘ g) = u(f) ∘ u(g)
    let natural = t.arrows().all(|f| {
        t.hom(bot, t.src(f))
            .iter()
            .all(|&g| ctx.u.on_arr(t.comp(f, g)) == s.comp(ctx.u.on_arr(f), ctx.u.on_arr(g)))
    });
    Ok(item(
        8,
        title,
        natural,
        format!("hom({}, X) matches the points of X for all {} objects", t.obj_name(bot), t.num_objects()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{antichain_fibration, build_finfilt, build_finset, build_fintop};

    /// A fibration over the vee `s1 ≥ s0 ≤ s2` whose fiber over `s1` has
    /// no top. Every strict-mono family of the base is non-empty here.
    const VEE_WITHOUT_TOP: &str = r#"
category "Vee" {
  object "s0"
  object "s1"
  object "s2"
  arrow "s0<=s0" "s0" "s0"
  arrow "s0<=s1" "s0" "s1"
  arrow "s0<=s2" "s0" "s2"
  arrow "s1<=s1" "s1" "s1"
  arrow "s2<=s2" "s2" "s2"
  identity "s0" "s0<=s0"
  identity "s1" "s1<=s1"
  identity "s2" "s2<=s2"
  compose "s0<=s0" "s0<=s0" "s0<=s0"
  compose "s0<=s1" "s0<=s0" "s0<=s1"
  compose "s0<=s2" "s0<=s0" "s0<=s2"
  compose "s1<=s1" "s0<=s1" "s0<=s1"
  compose "s1<=s1" "s1<=s1" "s1<=s1"
  compose "s2<=s2" "s0<=s2" "s0<=s2"
  compose "s2<=s2" "s2<=s2" "s2<=s2"
}

pseudofunctor "random17" "Vee" {
  poset "s0" {
    element "x0_0"
    element "x0_1"
    le "x0_0" "x0_1"
  }
  poset "s1" {
    element "x1_0"
    element "x1_1"
    element "x1_2"
    le "x1_0" "x1_1"
    le "x1_0" "x1_2"
  }
  poset "s2" {
    element "x2_0"
  }
  transition "s0<=s0" "x0_0" "x0_1"
  transition "s0<=s1" "x0_1" "x0_1" "x0_1"
  transition "s0<=s2" "x0_0"
  transition "s1<=s1" "x1_0" "x1_1" "x1_2"
  transition "s2<=s2" "x2_0"
}
"#;

    #[test]
    fn initial_injective_creation_misses_the_empty_family() {
        let r = crate::model::parse(VEE_WITHOUT_TOP).unwrap().resolve().unwrap();
        let total = r.pseudofunctors[0].total_category().unwrap();
        let ctx = OverContext::new(total.projection).unwrap();
        assert!(is_fibration(&ctx).unwrap().by_composition());
        assert!(creates_families(&ctx, Kind::Initial, BaseFilter::StrictMono, Bound::Auto).unwrap().holds);
        let routes = topological_routes(&ctx, Bound::Auto).unwrap();
        assert!(routes.agree(), "{routes}");
        assert!(!routes.value());
        let s1 = ctx.s().obj("s1").unwrap();
        assert_eq!(top_object(&ctx, s1).unwrap(), None);
    }

    #[test]
    fn identity_functor_is_topological_everywhere() {
        let c = Arc::new(build_finset(1).unwrap());
        let ctx = OverContext::identity(c.clone()).unwrap();
        let cl = classify(&ctx, Bound::Auto).unwrap();
        assert!(cl.flags().iter().all(|(_, v)| *v), "{:?}", cl.flags());
        assert!(cl.inconsistencies().is_empty(), "{:?}", cl.inconsistencies());
        for s in c.objects() {
            assert_eq!(top_object(&ctx, s).unwrap(), Some(s));
            assert_eq!(bot_object(&ctx, s).unwrap(), Some(s));
        }
    }

    #[test]
    fn spaces_top_and_bottom() {
        let ctx = OverContext::new(build_fintop(2).unwrap()).unwrap();
        let (t, s) = (ctx.t(), ctx.s());
        let two = s.obj("2").unwrap();
        assert_eq!(t.obj_name(top_object(&ctx, two).unwrap().unwrap()), "2:e,01");
        assert_eq!(t.obj_name(bot_object(&ctx, two).unwrap().unwrap()), "2:e,0,1,01");
        assert_eq!(bot_via_initial_family(&ctx, two).unwrap(), bot_object(&ctx, two).unwrap());
        let one = s.obj("1").unwrap();
        assert_eq!(top_object(&ctx, one).unwrap(), bot_object(&ctx, one).unwrap());
    }

    #[test]
    fn filters_have_two_structures_on_the_point() {
        let ctx = OverContext::new(build_finfilt(1).unwrap()).unwrap();
        let one = ctx.s().obj("1").unwrap();
        assert_ne!(top_object(&ctx, one).unwrap(), bot_object(&ctx, one).unwrap());
    }

    #[test]
    fn antichain_is_a_fibration_but_not_pretopological() {
        let ctx = OverContext::new(antichain_fibration()).unwrap();
        let cl = classify(&ctx, Bound::Auto).unwrap();
        assert!(cl.is_fibration());
        assert!(!cl.is_pretopological());
        assert!(cl.inconsistencies().is_empty(), "{:?}", cl.inconsistencies());
        assert!(adjoint_witness(&ctx).bot.is_none());
    }

    #[test]
    fn finset_is_recognized() {
        let c = build_finset(2).unwrap();
        assert_eq!(finset_like_terminal(&c), Some(c.obj("1").unwrap()));
    }
}
