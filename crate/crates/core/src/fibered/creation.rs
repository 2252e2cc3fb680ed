//! Creation of cartesian, initial, final and strict families over classes
//! of base families.
//!
//! Families of targets are enumerated as sets of pairs `(φ, X)`. A repeated
//! index only matters when two lifts over the same pair differ, which shows
//! up as a non-thin fiber hom-set; the probe families `(id_S, X)^K`, with
//! `2^K` larger than every hom-set, detect exactly that. Set enumeration
//! plus the probe therefore decides creation over indexed families.

use std::fmt;
use std::ops::ControlFlow;

use super::relative::initial_members;
use super::OverContext;
use crate::error::{Error, Result};
use crate::families::{Family, Orientation, SinkOracle};
use crate::fincat::{Arr, Obj};
use crate::mask::{self, walk_subsets, Bound, Exactness, Mask};

/// The kind of family to be created.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Cartesian,
    Initial,
    StrictMono,
    Cocartesian,
    Final,
    StrictEpi,
}

impl Kind {
    pub fn orientation(self) -> Orientation {
        match self {
            Kind::Cartesian | Kind::Initial | Kind::StrictMono => Orientation::Source,
            _ => Orientation::Sink,
        }
    }

    pub fn dual(self) -> Kind {
        match self {
            Kind::Cartesian => Kind::Cocartesian,
            Kind::Initial => Kind::Final,
            Kind::StrictMono => Kind::StrictEpi,
            Kind::Cocartesian => Kind::Cartesian,
            Kind::Final => Kind::Initial,
            Kind::StrictEpi => Kind::StrictMono,
        }
    }

    pub fn word(self) -> &'static str {
        match self {
            Kind::Cartesian => "cartesian",
            Kind::Initial => "initial",
            Kind::StrictMono => "strict-mono",
            Kind::Cocartesian => "cocartesian",
            Kind::Final => "final",
            Kind::StrictEpi => "strict-epi",
        }
    }
}

/// Which base families a created family must exist over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseFilter {
    All,
    StrictMono,
    StrictEpi,
    /// Single arrows only (creation of arrows).
    Singletons,
}

impl BaseFilter {
    fn dual(self) -> BaseFilter {
        match self {
            BaseFilter::StrictMono => BaseFilter::StrictEpi,
            BaseFilter::StrictEpi => BaseFilter::StrictMono,
            f => f,
        }
    }
}

/// One index of a family to be created: a base arrow and an object of `T`
/// over its far end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LiftTarget {
    pub phi: Arr,
    pub x: Obj,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CreatedFamily {
    pub apex: Obj,
    pub members: Vec<Arr>,
}

/// A base family with objects over it for which nothing was created.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CreationFailure {
    pub kind: Kind,
    pub base_object: Obj,
    pub targets: Vec<LiftTarget>,
}

impl CreationFailure {
    pub fn describe(&self, ctx: &OverContext) -> String {
        let (t, s) = (ctx.t(), ctx.s());
        let legs: Vec<String> = self
            .targets
            .iter()
            .map(|l| format!("{} @ {}", s.arr_name(l.phi), t.obj_name(l.x)))
            .collect();
        let arrow = match self.kind.orientation() {
            Orientation::Source => "out of",
            Orientation::Sink => "into",
        };
        format!(
            "no {} family {arrow} an object over {} along [{}]",
            self.kind.word(),
            s.obj_name(self.base_object),
            legs.join(", ")
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CreationReport {
    pub holds: bool,
    pub exactness: Exactness,
    /// Base families examined (after filtering).
    pub checked: u64,
    pub failure: Option<CreationFailure>,
}

impl fmt::Display for CreationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}; {} families]",
            if self.holds { "holds" } else { "fails" },
            self.exactness,
            self.checked
        )
    }
}

/// Number of repeated legs in the probe families.
pub fn probe_power(ctx: &OverContext) -> usize {
    ctx.power_probe_size()
}

/// Decides whether `u` creates `kind` families over the base families
/// admitted by `filter`.
pub fn creates_families(
    ctx: &OverContext,
    kind: Kind,
    filter: BaseFilter,
    bound: Bound,
) -> Result<CreationReport> {
    let bad = |what: &str| {
        Err(Error::Precondition(format!(
            "{} families cannot be created over {what} families",
            kind.word()
        )))
    };
    match kind.orientation() {
        Orientation::Source => {
            if filter == BaseFilter::StrictEpi {
                return bad("strict-epi sink");
            }
            Creator::new(ctx, kind, filter)?.run(bound)
        }
        Orientation::Sink => {
            if filter == BaseFilter::StrictMono {
                return bad("strict-mono source");
            }
            let mut r = Creator::new(ctx.op(), kind.dual(), filter.dual())?.run(bound)?;
            if let Some(f) = r.failure.as_mut() {
                f.kind = kind;
            }
            Ok(r)
        }
    }
}

/// Least created family over `targets` (source kinds: out of an object
/// over `base`; sink kinds: into one), if any.
pub fn create_witness(
    ctx: &OverContext,
    kind: Kind,
    base: Obj,
    targets: &[LiftTarget],
) -> Result<Option<CreatedFamily>> {
    let (ctx, kind) = match kind.orientation() {
        Orientation::Source => (ctx, kind),
        Orientation::Sink => (ctx.op(), kind.dual()),
    };
    let s = ctx.s();
    for l in targets {
        if s.src(l.phi) != base || ctx.base(l.x) != s.tgt(l.phi) {
            return Err(Error::IndexMismatch(format!(
                "`{}` @ `{}` does not start at `{}` and end under its object",
                s.arr_name(l.phi),
                ctx.t().obj_name(l.x),
                s.obj_name(base)
            )));
        }
    }
    let mut c = Creator::new(ctx, kind, BaseFilter::All)?;
    Ok(c.search(base, targets))
}

struct Creator<'a> {
    ctx: &'a OverContext,
    kind: Kind,
    filter: BaseFilter,
    /// Strict-epi verdicts in `S^op`, for the base filter.
    base_oracle: Option<SinkOracle>,
    /// Strict-epi verdicts in `T^op`, for strict-mono families.
    top_oracle: Option<SinkOracle>,
}

impl<'a> Creator<'a> {
    fn new(ctx: &'a OverContext, kind: Kind, filter: BaseFilter) -> Result<Creator<'a>> {
        let base_oracle = match filter {
            BaseFilter::StrictMono => Some(SinkOracle::new(ctx.s().op())?),
            _ => None,
        };
        let top_oracle = match kind {
            Kind::StrictMono => Some(SinkOracle::new(ctx.t().op())?),
            _ => None,
        };
        Ok(Creator {
            ctx,
            kind,
            filter,
            base_oracle,
            top_oracle,
        })
    }

    /// The family out of `y` with the given members has the wanted kind.
    fn accepts(&mut self, y: Obj, members: &[Arr]) -> bool {
        match self.kind {
            Kind::Cartesian => initial_members(self.ctx, y, members, true),
            Kind::Initial => initial_members(self.ctx, y, members, false),
            Kind::StrictMono => {
                let top = self.ctx.t().op();
                let o = self.top_oracle.as_mut().expect("strict-mono oracle");
                let m = members.iter().fold(0, |m, &a| m | o.index.down(a));
                o.strict_epi_crible(top, y, m)
            }
            _ => unreachable!("sink kinds run on the opposite functor"),
        }
    }

    /// Least apex, then least members in identifier order.
    fn search(&mut self, base: Obj, targets: &[LiftTarget]) -> Option<CreatedFamily> {
        let ctx = self.ctx;
        for &y in ctx.over(base) {
            let choices: Vec<Vec<Arr>> = targets
                .iter()
                .map(|l| ctx.lifts(y, l.x, l.phi).collect())
                .collect();
            if choices.iter().any(|c| c.is_empty()) {
                continue;
            }
            let mut pos = vec![0usize; choices.len()];
            'outer: loop {
                let members: Vec<Arr> = pos.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
                if self.accepts(y, &members) {
                    return Some(CreatedFamily { apex: y, members });
                }
                // odometer, last index fastest
                let mut i = pos.len();
                loop {
                    if i == 0 {
                        break 'outer;
                    }
                    i -= 1;
                    pos[i] += 1;
                    if pos[i] < choices[i].len() {
                        continue 'outer;
                    }
                    pos[i] = 0;
                }
            }
        }
        None
    }

    fn admits(&mut self, base: Obj, crible: Mask, size: usize) -> bool {
        match self.filter {
            BaseFilter::All => true,
            BaseFilter::Singletons => size == 1,
            BaseFilter::StrictMono => {
                let sop = self.ctx.s().op();
                self.base_oracle
                    .as_mut()
                    .expect("base oracle")
                    .strict_epi_crible(sop, base, crible)
            }
            BaseFilter::StrictEpi => unreachable!("filters are stated for source kinds"),
        }
    }

    fn base_down(&self, phi: Arr) -> Mask {
        self.base_oracle.as_ref().map_or(0, |o| o.index.down(phi))
    }

    fn run(mut self, bound: Bound) -> Result<CreationReport> {
        let ctx = self.ctx;
        let s = ctx.s();
        let mut report = CreationReport {
            holds: true,
            exactness: Exactness::Exact,
            checked: 0,
            failure: None,
        };
        for base in s.objects() {
            let universe: Vec<LiftTarget> = s
                .outs(base)
                .iter()
                .flat_map(|&phi| ctx.over(s.tgt(phi)).iter().map(move |&x| LiftTarget { phi, x }))
                .collect();
            let n = universe.len();
            let (k, ex) = match self.filter {
                BaseFilter::Singletons => (n.min(1), Exactness::Exact),
                _ => bound.resolve(n),
            };
            report.exactness = report.exactness.combine(ex);
            let failed = if ctx.is_faithful() {
                match self.kind {
                    Kind::Cartesian | Kind::Initial => self.fast_initial(base, &universe, k, &mut report),
                    Kind::StrictMono => self.fast_strict(base, &universe, k, &mut report),
                    _ => unreachable!(),
                }
            } else {
                None
            };
            let failed = match failed {
                Some(r) => r,
                None => self.generic(base, &universe, k, &mut report),
            };
            if let Some(targets) = failed {
                report.holds = false;
                report.failure = Some(CreationFailure {
                    kind: self.kind,
                    base_object: base,
                    targets,
                });
                return Ok(report);
            }
            if matches!(self.kind, Kind::Cartesian | Kind::Initial) && self.filter != BaseFilter::Singletons {
                let reps = ctx.power_probe_size();
                let id = s.id(base);
                let crible = self.base_down(id);
                for &x in ctx.over(base) {
                    let targets = vec![LiftTarget { phi: id, x }; reps];
                    if !self.admits(base, crible, reps) {
                        continue;
                    }
                    report.checked += 1;
                    if self.search(base, &targets).is_none() {
                        report.holds = false;
                        report.failure = Some(CreationFailure {
                            kind: self.kind,
                            base_object: base,
                            targets,
                        });
                        return Ok(report);
                    }
                }
            }
        }
        Ok(report)
    }

    /// Every admitted subset of the universe, searched directly. Returns
    /// the first failing family.
    fn generic(
        &mut self,
        base: Obj,
        universe: &[LiftTarget],
        k: usize,
        report: &mut CreationReport,
    ) -> Option<Vec<LiftTarget>> {
        let downs: Vec<Mask> = universe.iter().map(|l| self.base_down(l.phi)).collect();
        let mut out = None;
        let _ = walk_subsets(
            universe.len(),
            k,
            0 as Mask,
            &mut |acc: &Mask, i| acc | downs[i],
            &mut |acc: &Mask, idx: &[usize]| {
                if !self.admits(base, *acc, idx.len()) {
                    return ControlFlow::Continue(());
                }
                report.checked += 1;
                let targets: Vec<LiftTarget> = idx.iter().map(|&i| universe[i]).collect();
                if self.search(base, &targets).is_none() {
                    out = Some(targets);
                    return ControlFlow::Break(());
                }
                ControlFlow::Continue(())
            },
        );
        out
    }

    /// Faithful `u`, cartesian or initial families: with one lift at most
    /// per base arrow, a family out of `Y` is initial exactly when every
    /// test pair `(Z, ψ)` that lifts along all legs lifts into `Y`.
    /// `None` means the fast path does not apply.
    fn fast_initial(
        &mut self,
        base: Obj,
        universe: &[LiftTarget],
        k: usize,
        report: &mut CreationReport,
    ) -> Option<Option<Vec<LiftTarget>>> {
        let ctx = self.ctx;
        let s = ctx.s();
        let id = s.id(base);
        let tests: Vec<(Obj, Arr)> = if self.kind == Kind::Cartesian {
            ctx.over(base).iter().map(|&z| (z, id)).collect()
        } else {
            ctx.t()
                .objects()
                .flat_map(|z| s.hom(ctx.base(z), base).iter().map(move |&p| (z, p)))
                .collect()
        };
        if tests.len() > mask::MAX_UNIVERSE {
            return None;
        }
        let leg: Vec<Mask> = universe
            .iter()
            .map(|l| {
                tests.iter().enumerate().fold(0, |m, (w, &(z, psi))| {
                    if ctx.lift(z, l.x, s.comp(l.phi, psi)).is_some() {
                        m | mask::bit(w)
                    } else {
                        m
                    }
                })
            })
            .collect();
        let apexes: Vec<(Mask, Mask)> = ctx
            .over(base)
            .iter()
            .map(|&y| {
                let into = tests.iter().enumerate().fold(0, |m, (w, &(z, psi))| {
                    if ctx.lift(z, y, psi).is_some() {
                        m | mask::bit(w)
                    } else {
                        m
                    }
                });
                let at = tests.iter().position(|&p| p == (y, id)).expect("identity test");
                (mask::bit(at), into)
            })
            .collect();
        let downs: Vec<Mask> = universe.iter().map(|l| self.base_down(l.phi)).collect();
        let mut out = None;
        let _ = walk_subsets(
            universe.len(),
            k,
            (mask::full(tests.len()), 0 as Mask),
            &mut |acc: &(Mask, Mask), i| (acc.0 & leg[i], acc.1 | downs[i]),
            &mut |acc: &(Mask, Mask), idx: &[usize]| {
                if !self.admits(base, acc.1, idx.len()) {
                    return ControlFlow::Continue(());
                }
                report.checked += 1;
                let ok = apexes
                    .iter()
                    .any(|&(at, into)| acc.0 & at != 0 && mask::is_subset(acc.0, into));
                if !ok {
                    out = Some(idx.iter().map(|&i| universe[i]).collect());
                    return ControlFlow::Break(());
                }
                ControlFlow::Continue(())
            },
        );
        Some(out)
    }

    /// Faithful `u`, strict-mono families: each apex carries the crible (in
    /// `T^op`) of its lifted legs, or drops out when a leg does not lift.
    fn fast_strict(
        &mut self,
        base: Obj,
        universe: &[LiftTarget],
        k: usize,
        report: &mut CreationReport,
    ) -> Option<Option<Vec<LiftTarget>>> {
        let ctx = self.ctx;
        let apexes = ctx.over(base).to_vec();
        if apexes.len() > 64 {
            return None;
        }
        let top = ctx.t().op();
        let downs: Vec<Mask> = universe.iter().map(|l| self.base_down(l.phi)).collect();
        // per universe element and apex, the T^op crible of the lift
        let legs: Vec<Vec<Option<Mask>>> = {
            let o = self.top_oracle.as_ref().expect("strict-mono oracle");
            universe
                .iter()
                .map(|l| {
                    apexes
                        .iter()
                        .map(|&y| ctx.lift(y, l.x, l.phi).map(|a| o.index.down(a)))
                        .collect()
                })
                .collect()
        };
        #[derive(Clone)]
        struct Acc {
            base: Mask,
            valid: u64,
            cribles: Vec<Mask>,
        }
        let init = Acc {
            base: 0,
            valid: if apexes.len() == 64 { u64::MAX } else { (1u64 << apexes.len()) - 1 },
            cribles: vec![0; apexes.len()],
        };
        let mut out = None;
        let _ = walk_subsets(
            universe.len(),
            k,
            init,
            &mut |acc: &Acc, i| {
                let mut next = acc.clone();
                next.base |= downs[i];
                for (j, l) in legs[i].iter().enumerate() {
                    match l {
                        Some(m) => next.cribles[j] |= m,
                        None => next.valid &= !(1u64 << j),
                    }
                }
                next
            },
            &mut |acc: &Acc, idx: &[usize]| {
                if !self.admits(base, acc.base, idx.len()) {
                    return ControlFlow::Continue(());
                }
                report.checked += 1;
                let o = self.top_oracle.as_mut().expect("strict-mono oracle");
                let ok = (0..apexes.len()).any(|j| {
                    acc.valid >> j & 1 == 1 && o.strict_epi_crible(top, apexes[j], acc.cribles[j])
                });
                if !ok {
                    out = Some(idx.iter().map(|&i| universe[i]).collect());
                    return ControlFlow::Break(());
                }
                ControlFlow::Continue(())
            },
        );
        Some(out)
    }
}

impl CreatedFamily {
    /// The created legs as a family of `T`: a source family for source
    /// kinds, a sink family into the apex for sink kinds.
    pub fn family(&self, kind: Kind) -> Family {
        Family {
            orientation: kind.orientation(),
            anchor: self.apex,
            members: self.members.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_finfilt, build_finset, build_fintop};
    use std::sync::Arc;

    fn generic_only(ctx: &OverContext, kind: Kind, filter: BaseFilter) -> bool {
        let mut c = Creator::new(ctx, kind, filter).unwrap();
        let s = ctx.s();
        let mut rep = CreationReport {
            holds: true,
            exactness: Exactness::Exact,
            checked: 0,
            failure: None,
        };
        s.objects().all(|b| {
            let universe: Vec<LiftTarget> = s
                .outs(b)
                .iter()
                .flat_map(|&phi| ctx.over(s.tgt(phi)).iter().map(move |&x| LiftTarget { phi, x }))
                .collect();
            c.generic(b, &universe, universe.len(), &mut rep).is_none()
        })
    }

    #[test]
    fn identity_creates_everything() {
        let c = Arc::new(build_finset(2).unwrap());
        let ctx = OverContext::identity(c).unwrap();
        for kind in [Kind::Cartesian, Kind::Initial, Kind::Final, Kind::StrictEpi] {
            let filter = match kind {
                Kind::StrictEpi => BaseFilter::StrictEpi,
                _ => BaseFilter::All,
            };
            let r = creates_families(&ctx, kind, filter, Bound::Auto).unwrap();
            assert!(r.holds, "{kind:?}: {r}");
            assert!(r.exactness.is_exact());
        }
    }

    #[test]
    fn fast_paths_agree_with_generic_search() {
        for u in [build_fintop(1).unwrap(), build_finfilt(1).unwrap()] {
            let ctx = OverContext::new(u).unwrap();
            for (kind, filter) in [
                (Kind::Cartesian, BaseFilter::All),
                (Kind::Initial, BaseFilter::All),
                (Kind::Initial, BaseFilter::StrictMono),
                (Kind::StrictMono, BaseFilter::StrictMono),
            ] {
                let fast = creates_families(&ctx, kind, filter, Bound::Auto).unwrap();
                assert_eq!(fast.holds, generic_only(&ctx, kind, filter), "{kind:?} {filter:?}");
            }
        }
    }

    #[test]
    fn topological_examples_create_initial_families() {
        let ctx = OverContext::new(build_fintop(2).unwrap()).unwrap();
        let r = creates_families(&ctx, Kind::Initial, BaseFilter::All, Bound::Auto).unwrap();
        assert!(r.holds, "{r}");
        let w = create_witness(
            &ctx,
            Kind::Initial,
            ctx.s().obj("2").unwrap(),
            &[LiftTarget {
                phi: ctx.s().arr("2->1:00").unwrap(),
                x: ctx.t().obj("1:e,0").unwrap(),
            }],
        )
        .unwrap()
        .unwrap();
        // the initial structure along a map to a point is indiscrete
        assert_eq!(ctx.t().obj_name(w.apex), "2:e,01");
    }
}
