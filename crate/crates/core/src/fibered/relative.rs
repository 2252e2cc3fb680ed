//! Final, initial and cartesian families, decided by counting lifts.
//!
//! A source family `f_α: X → X_α` over `φ_α` is initial when, for every
//! `Z` and `ψ: uZ → uX`, the map `g ↦ (f_α ∘ g)_α` is a bijection from the
//! lifts `Z → X` of `ψ` onto the families of lifts `Z → X_α` of `φ_α ∘ ψ`.
//! Cartesian families ask the same for `ψ` the identity only.

use super::OverContext;
use crate::error::Result;
use crate::families::{is_strict_epi_family, is_strict_mono_family, Family, Orientation};
use crate::fincat::{Arr, Obj};

/// `Π counts`, saturating.
fn product(counts: impl Iterator<Item = usize>) -> u128 {
    counts.fold(1u128, |p, c| p.saturating_mul(c as u128))
}

fn injective<K: PartialEq>(items: impl Iterator<Item = K>) -> bool {
    let mut seen: Vec<K> = Vec::new();
    for k in items {
        if seen.contains(&k) {
            return false;
        }
        seen.push(k);
    }
    true
}

/// Initial-family test on raw members; `only_identity` restricts the test
/// objects to those over `uX` with `ψ` the identity (cartesian families).
pub(crate) fn initial_members(ctx: &OverContext, x: Obj, members: &[Arr], only_identity: bool) -> bool {
    let (t, s) = (ctx.t(), ctx.s());
    let sx = ctx.base(x);
    let legs: Vec<(Arr, Obj)> = members.iter().map(|&f| (ctx.u.on_arr(f), t.tgt(f))).collect();
    let test = |z: Obj, psi: Arr| -> bool {
        let want = product(legs.iter().map(|&(phi, xa)| ctx.lift_count(z, xa, s.comp(phi, psi))));
        let have = ctx.lift_count(z, x, psi);
        if have as u128 != want {
            return false;
        }
        have <= 1
            || injective(
                ctx.lifts(z, x, psi)
                    .map(|g| members.iter().map(|&f| t.comp(f, g)).collect::<Vec<_>>()),
            )
    };
    if only_identity {
        let id = s.id(sx);
        ctx.over(sx).iter().all(|&z| test(z, id))
    } else {
        t.objects()
            .all(|z| s.hom(ctx.base(z), sx).iter().all(|&psi| test(z, psi)))
    }
}

/// Final-family test on raw members of a sink family into `x`.
pub(crate) fn final_members(ctx: &OverContext, x: Obj, members: &[Arr]) -> bool {
    let (t, s) = (ctx.t(), ctx.s());
    let sx = ctx.base(x);
    let legs: Vec<(Arr, Obj)> = members.iter().map(|&f| (ctx.u.on_arr(f), t.src(f))).collect();
    t.objects().all(|y| {
        s.hom(sx, ctx.base(y)).iter().all(|&psi| {
            let want = product(legs.iter().map(|&(phi, xa)| ctx.lift_count(xa, y, s.comp(psi, phi))));
            let have = ctx.lift_count(x, y, psi);
            have as u128 == want
                && (have <= 1
                    || injective(
                        ctx.lifts(x, y, psi)
                            .map(|g| members.iter().map(|&f| t.comp(g, f)).collect::<Vec<_>>()),
                    ))
        })
    })
}

/// `f` is a `u`-final sink family.
pub fn is_u_final(ctx: &OverContext, f: &Family) -> Result<bool> {
    f.expect(Orientation::Sink)?;
    f.check(ctx.t())?;
    Ok(final_members(ctx, f.anchor, &f.members))
}

/// `f` is a `u`-initial source family, checked directly.
pub fn is_u_initial(ctx: &OverContext, f: &Family) -> Result<bool> {
    f.expect(Orientation::Source)?;
    f.check(ctx.t())?;
    Ok(initial_members(ctx, f.anchor, &f.members, false))
}

/// `f` is `u`-initial, checked as a final family of `u^op`.
pub fn is_u_initial_via_opposite(ctx: &OverContext, f: &Family) -> Result<bool> {
    is_u_final(ctx.op(), &f.dual())
}

/// `f` is a `u`-cartesian source family.
pub fn is_u_cartesian(ctx: &OverContext, f: &Family) -> Result<bool> {
    f.expect(Orientation::Source)?;
    f.check(ctx.t())?;
    Ok(initial_members(ctx, f.anchor, &f.members, true))
}

pub fn is_cartesian_arrow(ctx: &OverContext, a: Arr) -> bool {
    initial_members(ctx, ctx.t().src(a), &[a], true)
}

pub fn is_initial_arrow(ctx: &OverContext, a: Arr) -> bool {
    initial_members(ctx, ctx.t().src(a), &[a], false)
}

/// The image of the sink family `f` is strict-epi in the base.
pub fn is_u_surjective(ctx: &OverContext, f: &Family) -> Result<bool> {
    f.expect(Orientation::Sink)?;
    f.check(ctx.t())?;
    is_strict_epi_family(ctx.s(), &ctx.image(f))
}

/// The image of the source family `f` is strict-mono in the base.
pub fn is_u_injective(ctx: &OverContext, f: &Family) -> Result<bool> {
    f.expect(Orientation::Source)?;
    f.check(ctx.t())?;
    is_strict_mono_family(ctx.s(), &ctx.image(f))
}
