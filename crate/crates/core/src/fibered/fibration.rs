//! Prefibrations, fibrations, products in the fibers and their stability.

use std::ops::ControlFlow;

use super::creation::{creates_families, create_witness, BaseFilter, Kind, LiftTarget};
use super::relative::{initial_members, is_cartesian_arrow};
use super::{OverContext, Verdict};
use crate::error::Result;
use crate::fincat::{Arr, Obj};
use crate::mask::{self, walk_subsets, Bound, Exactness, Mask};

pub fn creates_cartesian_arrows(ctx: &OverContext) -> Result<Verdict> {
    let r = creates_families(ctx, Kind::Cartesian, BaseFilter::Singletons, Bound::Auto)?;
    Ok(Verdict::from_creation(&r, ctx))
}

pub fn creates_initial_arrows(ctx: &OverContext) -> Result<Verdict> {
    let r = creates_families(ctx, Kind::Initial, BaseFilter::Singletons, Bound::Auto)?;
    Ok(Verdict::from_creation(&r, ctx))
}

/// Every composite of two cartesian arrows is cartesian.
pub fn cartesian_arrows_compose(ctx: &OverContext) -> Verdict {
    let t = ctx.t();
    let cart: Vec<bool> = t.arrows().map(|a| is_cartesian_arrow(ctx, a)).collect();
    for f in t.arrows().filter(|f| cart[f.idx()]) {
        for &g in t.outs(t.tgt(f)) {
            if cart[g.idx()] && !cart[t.comp(g, f).idx()] {
                return Verdict::fail(
                    Exactness::Exact,
                    format!(
                        "{} after {} is not cartesian",
                        t.arr_name(g),
                        t.arr_name(f)
                    ),
                );
            }
        }
    }
    Verdict::pass(Exactness::Exact)
}

/// Both forms of the fibration property and whether they agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibrationVerdict {
    pub prefibration: Verdict,
    pub cartesian_compose: Verdict,
    pub creates_initial_arrows: Verdict,
}

impl FibrationVerdict {
    /// Prefibration whose cartesian arrows compose.
    pub fn by_composition(&self) -> bool {
        self.prefibration.holds && self.cartesian_compose.holds
    }

    pub fn by_initial_arrows(&self) -> bool {
        self.creates_initial_arrows.holds
    }

    pub fn agree(&self) -> bool {
        self.by_composition() == self.by_initial_arrows()
    }
}

pub fn is_fibration(ctx: &OverContext) -> Result<FibrationVerdict> {
    Ok(FibrationVerdict {
        prefibration: creates_cartesian_arrows(ctx)?,
        cartesian_compose: cartesian_arrows_compose(ctx),
        creates_initial_arrows: creates_initial_arrows(ctx)?,
    })
}

/// `legs` are fiber arrows out of `apex` forming a product in its fiber.
pub fn is_fiber_product(ctx: &OverContext, apex: Obj, legs: &[Arr]) -> bool {
    let t = ctx.t();
    let b = ctx.base(apex);
    let id = ctx.s().id(b);
    legs.iter()
        .all(|&a| t.src(a) == apex && ctx.u.on_arr(a) == id)
        && initial_members(ctx, apex, legs, true)
}

/// Every fiber has products of every set of its objects, and of every
/// power of one object up to the probe size.
pub fn fibers_have_all_products(ctx: &OverContext, bound: Bound) -> Result<Verdict> {
    let s = ctx.s();
    let mut exactness = Exactness::Exact;
    for b in s.objects() {
        let id = s.id(b);
        let over = ctx.over(b);
        let (k, ex) = bound.resolve(over.len());
        exactness = exactness.combine(ex);
        let mut families: Vec<Vec<Obj>> = mask::subsets_by_size(over.len(), k)
            .map(|idx| idx.into_iter().map(|i| over[i]).collect())
            .collect();
        for &x in over {
            for p in 2..=ctx.power_probe_size() {
                families.push(vec![x; p]);
            }
        }
        for fam in families {
            let targets: Vec<LiftTarget> = fam.iter().map(|&x| LiftTarget { phi: id, x }).collect();
            if create_witness(ctx, Kind::Cartesian, b, &targets)?.is_none() {
                let names: Vec<&str> = fam.iter().map(|&x| ctx.t().obj_name(x)).collect();
                return Ok(Verdict::fail(
                    exactness,
                    format!("no product of [{}] in the fiber over {}", names.join(", "), s.obj_name(b)),
                ));
            }
        }
    }
    Ok(Verdict::pass(exactness))
}

/// Reindexing along cartesian arrows keeps products in the fibers: for
/// `φ: S → T`, cartesian `g: Y → X` and `g_α: Y_α → X_α` over `φ`, and a
/// fiber product `π_α: X → X_α`, the induced `ρ_α: Y → Y_α` is a product.
/// Product families are enumerated as sets of fiber arrows.
pub fn products_stable(ctx: &OverContext, bound: Bound) -> Result<Verdict> {
    let (t, s) = (ctx.t(), ctx.s());
    let cart: Vec<bool> = t.arrows().map(|a| is_cartesian_arrow(ctx, a)).collect();
    // cartesian arrows into x over phi
    let cart_into = |x: Obj, phi: Arr| -> Vec<Arr> {
        ctx.over(s.src(phi))
            .iter()
            .flat_map(|&y| ctx.lifts(y, x, phi))
            .filter(|a| cart[a.idx()])
            .collect()
    };
    let mut exactness = Exactness::Exact;
    for x in t.objects() {
        let bx = ctx.base(x);
        let fiber_outs: Vec<Arr> = ctx
            .over(bx)
            .iter()
            .flat_map(|&x2| ctx.vertical(x, x2))
            .collect();
        let (k, ex) = bound.resolve(fiber_outs.len());
        exactness = exactness.combine(ex);
        let products: Vec<Vec<Arr>> = mask::subsets_by_size(fiber_outs.len(), k)
            .map(|idx| idx.into_iter().map(|i| fiber_outs[i]).collect::<Vec<Arr>>())
            .filter(|pi| initial_members(ctx, x, pi, true))
            .collect();
        if products.is_empty() {
            continue;
        }
        for &phi in s.ins(bx) {
            let gs = cart_into(x, phi);
            if gs.is_empty() {
                continue;
            }
            for pi in &products {
                let leg_choices: Vec<Vec<Arr>> = pi.iter().map(|&p| cart_into(t.tgt(p), phi)).collect();
                if leg_choices.iter().any(|c| c.is_empty()) {
                    continue;
                }
                for &g in &gs {
                    if let Some(why) = unstable(ctx, g, pi, &leg_choices) {
                        return Ok(Verdict::fail(exactness, why));
                    }
                }
            }
        }
    }
    Ok(Verdict::pass(exactness))
}

/// Some choice of cartesian legs `g_α` with its induced `ρ_α` that is not a
/// product, described.
fn unstable(ctx: &OverContext, g: Arr, pi: &[Arr], leg_choices: &[Vec<Arr>]) -> Option<String> {
    let t = ctx.t();
    let y = t.src(g);
    let mut pos = vec![0usize; pi.len()];
    'outer: loop {
        let mut rho = Vec::with_capacity(pi.len());
        for (a, &p) in pi.iter().enumerate() {
            let ga = leg_choices[a][pos[a]];
            let target = t.comp(p, g);
            // cartesian g_α: the vertical ρ_α exists and is unique
            match ctx.vertical(y, t.src(ga)).find(|&r| t.comp(ga, r) == target) {
                Some(r) => rho.push(r),
                None => return Some(format!("{} is not cartesian", t.arr_name(ga))),
            }
        }
        if !initial_members(ctx, y, &rho, true) {
            let names: Vec<&str> = rho.iter().map(|&r| t.arr_name(r)).collect();
            let pis: Vec<&str> = pi.iter().map(|&r| t.arr_name(r)).collect();
            return Some(format!(
                "[{}] is a product but its reindexing along {} gives [{}], which is not",
                pis.join(", "),
                t.arr_name(g),
                names.join(", ")
            ));
        }
        let mut i = pos.len();
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            pos[i] += 1;
            if pos[i] < leg_choices[i].len() {
                continue 'outer;
            }
            pos[i] = 0;
        }
    }
    None
}

/// For every cartesian arrow `f: Y → X` and cartesian family `f_α` out of
/// `X`, the family `f_α ∘ f` is cartesian. Families out of `X` are
/// enumerated as sets; for faithful functors this is exhaustive.
pub fn cartesian_arrows_compose_with_families(ctx: &OverContext, bound: Bound) -> Result<Verdict> {
    let t = ctx.t();
    let cart: Vec<bool> = t.arrows().map(|a| is_cartesian_arrow(ctx, a)).collect();
    let mut exactness = Exactness::Exact;
    for x in t.objects() {
        let outs = t.outs(x);
        let (k, ex) = bound.resolve(outs.len());
        exactness = exactness.combine(ex);
        let into: Vec<Arr> = t.ins(x).iter().copied().filter(|a| cart[a.idx()]).collect();
        if into.is_empty() {
            continue;
        }
        let failure = if ctx.is_faithful() {
            compose_fast(ctx, x, &into, k)
        } else {
            compose_generic(ctx, x, &into, k)
        };
        if let Some((f, fam)) = failure {
            let names: Vec<&str> = fam.iter().map(|&a| t.arr_name(a)).collect();
            return Ok(Verdict::fail(
                exactness,
                format!(
                    "[{}] is cartesian but its composite with {} is not",
                    names.join(", "),
                    t.arr_name(f)
                ),
            ));
        }
    }
    Ok(Verdict::pass(exactness))
}

fn compose_generic(ctx: &OverContext, x: Obj, into: &[Arr], k: usize) -> Option<(Arr, Vec<Arr>)> {
    let t = ctx.t();
    let outs = t.outs(x);
    for idx in mask::subsets_by_size(outs.len(), k) {
        let fam: Vec<Arr> = idx.iter().map(|&i| outs[i]).collect();
        if !initial_members(ctx, x, &fam, true) {
            continue;
        }
        for &f in into {
            let comp: Vec<Arr> = fam.iter().map(|&a| t.comp(a, f)).collect();
            if !initial_members(ctx, t.src(f), &comp, true) {
                return Some((f, fam));
            }
        }
    }
    None
}

/// Faithful `u`: a family out of `X` is cartesian when every object over
/// `uX` lifting along all legs lies below `X`. The test masks for `X` and
/// for each cartesian `f: Y → X` are accumulated together.
fn compose_fast(ctx: &OverContext, x: Obj, into: &[Arr], k: usize) -> Option<(Arr, Vec<Arr>)> {
    let (t, s) = (ctx.t(), ctx.s());
    let outs = t.outs(x);
    let bx = ctx.base(x);
    // test sets: objects over uX, then over the base of each f's source
    let mut tests: Vec<Vec<Obj>> = vec![ctx.over(bx).to_vec()];
    let mut phis: Vec<Arr> = vec![s.id(bx)];
    let mut apex: Vec<Obj> = vec![x];
    for &f in into {
        tests.push(ctx.over(ctx.base(t.src(f))).to_vec());
        phis.push(ctx.u.on_arr(f));
        apex.push(t.src(f));
    }
    if tests.iter().any(|v| v.len() > mask::MAX_UNIVERSE) {
        return compose_generic(ctx, x, into, k);
    }
    let down: Vec<Mask> = (0..tests.len())
        .map(|j| {
            let id = s.id(ctx.base(apex[j]));
            tests[j].iter().enumerate().fold(0, |m, (w, &z)| {
                if ctx.lift(z, apex[j], id).is_some() {
                    m | mask::bit(w)
                } else {
                    m
                }
            })
        })
        .collect();
    // leg[i][j]: objects of test set j lifting along outs[i] ∘ phis[j]
    let leg: Vec<Vec<Mask>> = outs
        .iter()
        .map(|&a| {
            let pa = ctx.u.on_arr(a);
            (0..tests.len())
                .map(|j| {
                    let phi = s.comp(pa, phis[j]);
                    tests[j].iter().enumerate().fold(0, |m, (w, &z)| {
                        if ctx.lift(z, t.tgt(a), phi).is_some() {
                            m | mask::bit(w)
                        } else {
                            m
                        }
                    })
                })
                .collect()
        })
        .collect();
    let init: Vec<Mask> = tests.iter().map(|v| mask::full(v.len())).collect();
    let mut out = None;
    let _ = walk_subsets(
        outs.len(),
        k,
        init,
        &mut |acc: &Vec<Mask>, i| acc.iter().zip(&leg[i]).map(|(a, l)| a & l).collect(),
        &mut |acc: &Vec<Mask>, idx: &[usize]| {
            if !mask::is_subset(acc[0], down[0]) {
                return ControlFlow::Continue(());
            }
            for j in 1..tests.len() {
                if !mask::is_subset(acc[j], down[j]) {
                    out = Some((into[j - 1], idx.iter().map(|&i| outs[i]).collect()));
                    return ControlFlow::Break(());
                }
            }
            ControlFlow::Continue(())
        },
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_finfilt, build_fintop};

    #[test]
    fn fintop_is_a_fibration_both_ways() {
        let ctx = OverContext::new(build_fintop(2).unwrap()).unwrap();
        let v = is_fibration(&ctx).unwrap();
        assert!(v.by_composition() && v.by_initial_arrows());
        assert!(fibers_have_all_products(&ctx, Bound::Auto).unwrap().holds);
        assert!(products_stable(&ctx, Bound::Auto).unwrap().holds);
        assert!(cartesian_arrows_compose_with_families(&ctx, Bound::Auto).unwrap().holds);
    }

    #[test]
    fn fast_composition_agrees_with_generic() {
        for u in [build_fintop(2).unwrap(), build_finfilt(1).unwrap()] {
            let ctx = OverContext::new(u).unwrap();
            let t = ctx.t();
            for x in t.objects() {
                let into: Vec<Arr> = t
                    .ins(x)
                    .iter()
                    .copied()
                    .filter(|&a| is_cartesian_arrow(&ctx, a))
                    .collect();
                let k = t.outs(x).len().min(8);
                assert_eq!(
                    compose_fast(&ctx, x, &into, k).is_some(),
                    compose_generic(&ctx, x, &into, k).is_some()
                );
            }
        }
    }
}
