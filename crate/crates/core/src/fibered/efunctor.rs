//! Preservation and creation of strict families, E- and M-functors, and the
//! comparison of strict-epi families with final surjective ones.

use std::collections::HashMap;
use std::ops::ControlFlow;

use super::creation::{creates_families, BaseFilter, Kind};
use super::relative::final_members;
use super::{OverContext, Verdict};
use crate::error::Result;
use crate::families::{CribleIndex, Family, Orientation, SinkOracle};
use crate::fincat::Obj;
use crate::mask::{walk_subsets, Bound, Exactness, Mask};

/// `u` sends strict-epi sink families to strict-epi families.
pub fn preserves_strict_epi(ctx: &OverContext, bound: Bound) -> Result<Verdict> {
    let (t, s) = (ctx.t(), ctx.s());
    let mut top = SinkOracle::new(t)?;
    let mut bot = SinkOracle::new(s)?;
    let tdown: Vec<Mask> = t.arrows().map(|a| top.index.down(a)).collect();
    let sdown: Vec<Mask> = t.arrows().map(|a| bot.index.down(ctx.u.on_arr(a))).collect();
    let mut exactness = Exactness::Exact;
    for x in t.objects() {
        let ins = t.ins(x);
        let (k, ex) = bound.resolve(ins.len());
        exactness = exactness.combine(ex);
        let mut bad = None;
        let _ = walk_subsets(
            ins.len(),
            k,
            (0 as Mask, 0 as Mask),
            &mut |acc: &(Mask, Mask), i| (acc.0 | tdown[ins[i].idx()], acc.1 | sdown[ins[i].idx()]),
            &mut |acc: &(Mask, Mask), idx: &[usize]| {
                if top.strict_epi_crible(t, x, acc.0) && !bot.strict_epi_crible(s, ctx.base(x), acc.1) {
                    bad = Some(idx.iter().map(|&i| ins[i]).collect::<Vec<_>>());
                    return ControlFlow::Break(());
                }
                ControlFlow::Continue(())
            },
        );
        if let Some(members) = bad {
            let f = Family {
                orientation: Orientation::Sink,
                anchor: x,
                members,
            };
            return Ok(Verdict::fail(
                exactness,
                format!(
                    "{} is strict-epi but its image {} is not",
                    f.display(t),
                    ctx.image(&f).display(s)
                ),
            ));
        }
    }
    Ok(Verdict::pass(exactness))
}

/// `u` sends strict-mono source families to strict-mono families.
pub fn preserves_strict_mono(ctx: &OverContext, bound: Bound) -> Result<Verdict> {
    preserves_strict_epi(ctx.op(), bound)
}

/// Faithfulness together with creation and preservation of one class of
/// strict families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorConditionReport {
    pub faithful: bool,
    pub creates: Verdict,
    pub preserves: Verdict,
}

impl FunctorConditionReport {
    pub fn holds(&self) -> bool {
        self.faithful && self.creates.holds && self.preserves.holds
    }

    pub fn exactness(&self) -> Exactness {
        self.creates.exactness.combine(self.preserves.exactness)
    }
}

/// Faithful, creates strict-epi families over strict-epi families, and
/// preserves them.
pub fn efunctor_report(ctx: &OverContext, bound: Bound) -> Result<FunctorConditionReport> {
    let c = creates_families(ctx, Kind::StrictEpi, BaseFilter::StrictEpi, bound)?;
    Ok(FunctorConditionReport {
        faithful: ctx.is_faithful(),
        creates: Verdict::from_creation(&c, ctx),
        preserves: preserves_strict_epi(ctx, bound)?,
    })
}

/// The dual: faithful, creates and preserves strict-mono families.
pub fn mfunctor_report(ctx: &OverContext, bound: Bound) -> Result<FunctorConditionReport> {
    let c = creates_families(ctx, Kind::StrictMono, BaseFilter::StrictMono, bound)?;
    Ok(FunctorConditionReport {
        faithful: ctx.is_faithful(),
        creates: Verdict::from_creation(&c, ctx),
        preserves: preserves_strict_mono(ctx, bound)?,
    })
}

/// Strict-epi sink families of `T` against final families with
/// strict-epi image, over every object of `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassComparison {
    pub families: u64,
    pub strict: u64,
    pub final_surjective: u64,
    /// A few families in one class and not the other, in enumeration order.
    pub only_strict: Vec<Family>,
    pub only_final_surjective: Vec<Family>,
    pub exactness: Exactness,
}

impl ClassComparison {
    pub fn equal(&self) -> bool {
        self.only_strict.is_empty() && self.only_final_surjective.is_empty()
    }
}

const KEPT_EXAMPLES: usize = 4;

pub fn compare_strict_epi_final_surjective(ctx: &OverContext, bound: Bound) -> Result<ClassComparison> {
    let (t, s) = (ctx.t(), ctx.s());
    let mut top = SinkOracle::new(t)?;
    let mut bot = SinkOracle::new(s)?;
    let tindex: CribleIndex = top.index.clone();
    let tdown: Vec<Mask> = t.arrows().map(|a| tindex.down(a)).collect();
    let sdown: Vec<Mask> = t.arrows().map(|a| bot.index.down(ctx.u.on_arr(a))).collect();
    // final families of a faithful functor depend only on their crible
    let mut final_cache: HashMap<(Obj, Mask), bool> = HashMap::new();
    let mut out = ClassComparison {
        families: 0,
        strict: 0,
        final_surjective: 0,
        only_strict: Vec::new(),
        only_final_surjective: Vec::new(),
        exactness: Exactness::Exact,
    };
    for x in t.objects() {
        let ins = t.ins(x);
        let (k, ex) = bound.resolve(ins.len());
        out.exactness = out.exactness.combine(ex);
        let _ = walk_subsets(
            ins.len(),
            k,
            (0 as Mask, 0 as Mask),
            &mut |acc: &(Mask, Mask), i| (acc.0 | tdown[ins[i].idx()], acc.1 | sdown[ins[i].idx()]),
            &mut |acc: &(Mask, Mask), idx: &[usize]| {
                out.families += 1;
                let strict = top.strict_epi_crible(t, x, acc.0);
                let surjective = bot.strict_epi_crible(s, ctx.base(x), acc.1);
                let fs = surjective && {
                    if ctx.is_faithful() {
                        *final_cache.entry((x, acc.0)).or_insert_with(|| {
                            final_members(ctx, x, &tindex.generators(t, x, acc.0))
                        })
                    } else {
                        let members: Vec<_> = idx.iter().map(|&i| ins[i]).collect();
                        final_members(ctx, x, &members)
                    }
                };
                out.strict += strict as u64;
                out.final_surjective += fs as u64;
                if strict != fs {
                    let f = Family {
                        orientation: Orientation::Sink,
                        anchor: x,
                        members: idx.iter().map(|&i| ins[i]).collect(),
                    };
                    let list = if strict {
                        &mut out.only_strict
                    } else {
                        &mut out.only_final_surjective
                    };
                    if list.len() < KEPT_EXAMPLES {
                        list.push(f);
                    }
                }
                ControlFlow::Continue(())
            },
        );
    }
    Ok(out)
}

/// The dual comparison: strict-mono source families against initial
/// families with strict-mono image.
pub fn compare_strict_mono_initial_injective(ctx: &OverContext, bound: Bound) -> Result<ClassComparison> {
    let mut c = compare_strict_epi_final_surjective(ctx.op(), bound)?;
    for f in c.only_strict.iter_mut().chain(c.only_final_surjective.iter_mut()) {
        *f = f.dual();
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::build_fintop;
    use crate::families::is_strict_epi_family;
    use crate::fibered::is_u_final;

    #[test]
    fn spaces_over_sets_are_e_and_m_functors() {
        let ctx = OverContext::new(build_fintop(1).unwrap()).unwrap();
        assert!(efunctor_report(&ctx, Bound::Auto).unwrap().holds());
        assert!(mfunctor_report(&ctx, Bound::Auto).unwrap().holds());
    }

    #[test]
    fn cached_comparison_matches_direct_checks() {
        let ctx = OverContext::new(build_fintop(1).unwrap()).unwrap();
        let c = compare_strict_epi_final_surjective(&ctx, Bound::Auto).unwrap();
        let (t, s) = (ctx.t(), ctx.s());
        let mut strict = 0;
        let mut fs = 0;
        for x in t.objects() {
            let ins = t.ins(x);
            for m in 0u32..(1 << ins.len()) {
                let members = (0..ins.len()).filter(|i| m >> i & 1 == 1).map(|i| ins[i]).collect();
                let f = Family::sink(t, x, members).unwrap();
                strict += is_strict_epi_family(t, &f).unwrap() as u64;
                fs += (is_u_final(&ctx, &f).unwrap()
                    && is_strict_epi_family(s, &ctx.image(&f)).unwrap()) as u64;
            }
        }
        assert_eq!((c.strict, c.final_surjective), (strict, fs));
        assert!(c.equal());
    }
}
