//! Adjoints of `u`, found as universal arrows.

use super::OverContext;
use crate::fincat::{Arr, FinCat, Obj};

/// One universal arrow per base object: `ε_S: uY_S → S` for a right
/// adjoint, `η_S: S → uY_S` for a left adjoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalArrows {
    pub objects: Vec<Obj>,
    pub arrows: Vec<Arr>,
}

impl UniversalArrows {
    /// Every universal arrow is an isomorphism (checked in the base).
    pub fn all_iso(&self, base: &FinCat) -> bool {
        self.arrows.iter().all(|&a| base.is_iso(a))
    }

    /// Every universal arrow is an identity.
    pub fn all_identities(&self, base: &FinCat) -> bool {
        self.arrows.iter().all(|&a| base.is_identity(a))
    }
}

/// `ε: uY → S` is couniversal: `g ↦ ε ∘ ug` is a bijection
/// `T(X, Y) → S(uX, S)` for every `X`.
fn couniversal(ctx: &OverContext, y: Obj, eps: Arr) -> bool {
    let (t, s) = (ctx.t(), ctx.s());
    let target = s.tgt(eps);
    t.objects().all(|x| {
        let hom = t.hom(x, y);
        let want = s.hom(ctx.base(x), target).len();
        if hom.len() != want {
            return false;
        }
        let mut seen: Vec<Arr> = Vec::with_capacity(hom.len());
        hom.iter().all(|&g| {
            let v = s.comp(eps, ctx.u.on_arr(g));
            if seen.contains(&v) {
                false
            } else {
                seen.push(v);
                true
            }
        })
    })
}

/// Least couniversal arrows, if `u` has a right adjoint.
pub fn right_adjoint(ctx: &OverContext) -> Option<UniversalArrows> {
    let (t, s) = (ctx.t(), ctx.s());
    let mut objects = Vec::with_capacity(s.num_objects());
    let mut arrows = Vec::with_capacity(s.num_objects());
    for b in s.objects() {
        let found = t.objects().find_map(|y| {
            s.hom(ctx.base(y), b)
                .iter()
                .find(|&&eps| couniversal(ctx, y, eps))
                .map(|&eps| (y, eps))
        })?;
        objects.push(found.0);
        arrows.push(found.1);
    }
    Some(UniversalArrows { objects, arrows })
}

/// Least universal arrows `η_S: S → uY`, if `u` has a left adjoint.
pub fn left_adjoint(ctx: &OverContext) -> Option<UniversalArrows> {
    right_adjoint(ctx.op())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_finset, build_fintop};
    use std::sync::Arc;

    #[test]
    fn identity_is_self_adjoint() {
        let c = Arc::new(build_finset(2).unwrap());
        let ctx = OverContext::identity(c.clone()).unwrap();
        let r = right_adjoint(&ctx).unwrap();
        assert!(r.all_identities(&c));
        assert!(left_adjoint(&ctx).unwrap().all_identities(&c));
    }

    #[test]
    fn forgetful_from_spaces_has_both_adjoints() {
        // indiscrete on the right, discrete on the left
        let ctx = OverContext::new(build_fintop(2).unwrap()).unwrap();
        let r = right_adjoint(&ctx).unwrap();
        let l = left_adjoint(&ctx).unwrap();
        let t = ctx.t();
        let two = ctx.s().obj("2").unwrap();
        assert_eq!(t.obj_name(r.objects[two.idx()]), "2:e,01");
        assert_eq!(t.obj_name(l.objects[two.idx()]), "2:e,0,1,01");
        assert!(r.all_iso(ctx.s()) && l.all_iso(ctx.s()));
    }
}
