//! Notions relative to a functor `u: T → S`: fibers, lifts, final, initial
//! and cartesian families, creation of families, (pre)fibrations, stable
//! products, E/M-functors and adjoints of `u`.

mod adjoint;
mod creation;
mod efunctor;
mod fibration;
pub(crate) mod relative;

pub use adjoint::{left_adjoint, right_adjoint, UniversalArrows};
pub use creation::{
    create_witness, creates_families, probe_power, BaseFilter, CreatedFamily, CreationFailure,
    CreationReport,
    Kind, LiftTarget,
};
pub use efunctor::{
    compare_strict_epi_final_surjective, compare_strict_mono_initial_injective,
    efunctor_report, mfunctor_report, preserves_strict_epi, preserves_strict_mono,
    ClassComparison, FunctorConditionReport,
};
pub use fibration::{
    cartesian_arrows_compose, cartesian_arrows_compose_with_families, creates_cartesian_arrows,
    creates_initial_arrows, fibers_have_all_products, is_fiber_product, is_fibration,
    products_stable, FibrationVerdict,
};
pub use relative::{
    is_cartesian_arrow, is_initial_arrow, is_u_cartesian, is_u_final, is_u_initial,
    is_u_initial_via_opposite, is_u_injective, is_u_surjective,
};

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::families::{Family, Orientation};
use crate::fincat::{Arr, CategoryData, FinCat, FunctorMap, Obj};
use crate::mask::Exactness;

const NONE: u32 = u32::MAX;

/// A functor `u: T → S` with precomputed fibers and lift tables.
pub struct OverContext {
    pub u: FunctorMap,
    faithful: bool,
    over: Vec<Vec<Obj>>,
    lift_first: Vec<u32>,
    lift_count: Vec<u32>,
    op: OnceLock<Box<OverContext>>,
}

/// Outcome of a property check, with a readable counterexample on failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub exactness: Exactness,
    pub counterexample: Option<String>,
}

impl Verdict {
    pub fn pass(exactness: Exactness) -> Verdict {
        Verdict {
            holds: true,
            exactness,
            counterexample: None,
        }
    }

    pub fn fail(exactness: Exactness, why: impl Into<String>) -> Verdict {
        Verdict {
            holds: false,
            exactness,
            counterexample: Some(why.into()),
        }
    }

    pub fn from_creation(r: &CreationReport, ctx: &OverContext) -> Verdict {
        Verdict {
            holds: r.holds,
            exactness: r.exactness,
            counterexample: r.failure.as_ref().map(|f| f.describe(ctx)),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", if self.holds { "holds" } else { "fails" }, self.exactness)?;
        if let Some(c) = &self.counterexample {
            write!(f, ": {c}")?;
        }
        Ok(())
    }
}

/// Objects over one base object and the arrows between them over its
/// identity.
#[derive(Clone, Debug)]
pub struct Fiber {
    pub base_object: Obj,
    /// Objects of `T` in the fiber, in identifier order.
    pub objects: Vec<Obj>,
    pub subcat: FinCat,
}

impl OverContext {
    /// Fails if either category or the functor violates the axioms.
    pub fn new(u: FunctorMap) -> Result<OverContext> {
        for (what, r) in [
            ("source category", u.source.validate()),
            ("target category", u.target.validate()),
            ("functor", u.validate()),
        ] {
            if !r.is_valid() {
                return Err(Error::Precondition(format!(
                    "{what} of `{}` is invalid: {}",
                    u.name,
                    r.violations[0]
                )));
            }
        }
        Ok(OverContext::new_unchecked(u))
    }

    fn new_unchecked(u: FunctorMap) -> OverContext {
        let (t, s) = (&*u.source, &*u.target);
        let mut over = vec![Vec::new(); s.num_objects()];
        for x in t.objects() {
            over[u.on_obj(x).idx()].push(x);
        }
        let (nt, ns) = (t.num_objects(), s.num_arrows());
        let mut lift_first = vec![NONE; nt * nt * ns];
        let mut lift_count = vec![0u32; nt * nt * ns];
        for a in t.arrows() {
            let k = (t.src(a).idx() * nt + t.tgt(a).idx()) * ns + u.on_arr(a).idx();
            if lift_first[k] == NONE {
                lift_first[k] = a.0;
            }
            lift_count[k] += 1;
        }
        let faithful = lift_count.iter().all(|&c| c <= 1);
        OverContext {
            u,
            faithful,
            over,
            lift_first,
            lift_count,
            op: OnceLock::new(),
        }
    }

    pub fn identity(c: Arc<FinCat>) -> Result<OverContext> {
        OverContext::new(FunctorMap::identity(c))
    }

    #[inline]
    pub fn t(&self) -> &FinCat {
        &self.u.source
    }

    #[inline]
    pub fn s(&self) -> &FinCat {
        &self.u.target
    }

    pub fn name(&self) -> &str {
        &self.u.name
    }

    pub fn is_faithful(&self) -> bool {
        self.faithful
    }

    /// Objects of `T` over `s`.
    #[inline]
    pub fn over(&self, s: Obj) -> &[Obj] {
        &self.over[s.idx()]
    }

    #[inline]
    pub fn base(&self, x: Obj) -> Obj {
        self.u.on_obj(x)
    }

    #[inline]
    fn key(&self, x: Obj, y: Obj, phi: Arr) -> usize {
        let nt = self.t().num_objects();
        (x.idx() * nt + y.idx()) * self.s().num_arrows() + phi.idx()
    }

    /// Number of arrows `x → y` over `phi`.
    #[inline]
    pub fn lift_count(&self, x: Obj, y: Obj, phi: Arr) -> usize {
        self.lift_count[self.key(x, y, phi)] as usize
    }

    /// Least arrow `x → y` over `phi`.
    #[inline]
    pub fn lift(&self, x: Obj, y: Obj, phi: Arr) -> Option<Arr> {
        let v = self.lift_first[self.key(x, y, phi)];
        (v != NONE).then_some(Arr(v))
    }

    /// All arrows `x → y` over `phi`, in identifier order.
    pub fn lifts(&self, x: Obj, y: Obj, phi: Arr) -> impl Iterator<Item = Arr> + '_ {
        let n = self.lift_count(x, y, phi);
        self.t()
            .hom(x, y)
            .iter()
            .copied()
            .filter(move |&a| n > 0 && self.u.on_arr(a) == phi)
    }

    /// The same functor between the opposite categories, cached.
    pub fn op(&self) -> &OverContext {
        self.op
            .get_or_init(|| Box::new(OverContext::new_unchecked(self.u.opposite())))
    }

    pub fn fiber(&self, s: Obj) -> Result<Fiber> {
        if s.idx() >= self.s().num_objects() {
            return Err(Error::UnknownObject(format!("#{}", s.0)));
        }
        let t = self.t();
        let ids = self.s().id(s);
        let objects = self.over(s).to_vec();
        let sub = t.subcategory(
            format!("{}_{}", t.name(), self.s().obj_name(s)),
            |x| self.base(x) == s,
            |a| self.u.on_arr(a) == ids,
        );
        Ok(Fiber {
            base_object: s,
            objects,
            subcat: sub,
        })
    }

    pub fn fiber_by_name(&self, s: &str) -> Result<Fiber> {
        self.fiber(self.s().obj(s)?)
    }

    /// Fiber arrows `x → y` (over the identity of their common base).
    pub fn vertical(&self, x: Obj, y: Obj) -> impl Iterator<Item = Arr> + '_ {
        let bx = self.base(x);
        let id = self.s().id(bx);
        let same = bx == self.base(y);
        self.lifts(x, y, id).filter(move |_| same)
    }

    /// The image of a family under `u`.
    pub fn image(&self, f: &Family) -> Family {
        Family {
            orientation: f.orientation,
            anchor: self.base(f.anchor),
            members: f.members.iter().map(|&a| self.u.on_arr(a)).collect(),
        }
    }

    /// Least isomorphism `θ: X → Y` over the identity with `θ ∘ f_α = g_α`
    /// (sink families) or `f_α ∘ θ = g_α` (source families, `θ: Y → X`).
    pub fn u_isomorphic(&self, f: &Family, g: &Family) -> Result<Option<Arr>> {
        if f.orientation != g.orientation {
            return Err(Error::Orientation {
                expected: "same-orientation",
            });
        }
        if f.len() != g.len() {
            return Err(Error::IndexMismatch(format!("{} vs {} members", f.len(), g.len())));
        }
        if let Orientation::Source = f.orientation {
            return self.op().u_isomorphic(&f.dual(), &g.dual());
        }
        let t = self.t();
        for (&a, &b) in f.members.iter().zip(&g.members) {
            if t.src(a) != t.src(b) || self.u.on_arr(a) != self.u.on_arr(b) {
                return Err(Error::IndexMismatch(format!(
                    "`{}` and `{}` do not sit over the same base arrow with the same domain",
                    t.arr_name(a),
                    t.arr_name(b)
                )));
            }
        }
        let (x, y) = (f.anchor, g.anchor);
        if self.base(x) != self.base(y) {
            return Err(Error::IndexMismatch("anchors over different objects".into()));
        }
        Ok(self.vertical(x, y).find(|&th| {
            t.is_iso(th)
                && f.members
                    .iter()
                    .zip(&g.members)
                    .all(|(&a, &b)| t.comp(th, a) == b)
        }))
    }

    /// `log2` of the largest hom-set of `T`, plus one: the number of
    /// repeated legs needed to see a fiber hom-set with two elements.
    pub fn power_probe_size(&self) -> usize {
        let m = self.t().max_hom_size().max(1);
        (usize::BITS - m.leading_zeros()) as usize
    }
}

impl std::fmt::Debug for OverContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "OverContext({:?})", self.u)
    }
}

/// The identity-on-names restriction of `u` to a full subcategory of `T`.
pub fn restrict_to_full_subcategory(
    u: &FunctorMap,
    name: impl Into<String>,
    keep: impl Fn(Obj) -> bool,
) -> FunctorMap {
    let t = &*u.source;
    let sub = Arc::new(t.full_subcategory(format!("{}|sub", t.name()), &keep));
    let obj_map = sub
        .objects()
        .map(|x| u.on_obj(t.obj(sub.obj_name(x)).unwrap()))
        .collect();
    let arr_map = sub
        .arrows()
        .map(|a| u.on_arr(t.arr(sub.arr_name(a)).unwrap()))
        .collect();
    FunctorMap {
        name: name.into(),
        source: sub,
        target: u.target.clone(),
        obj_map,
        arr_map,
    }
}

/// Renames a category, keeping its structure.
pub fn renamed(c: &FinCat, name: &str) -> FinCat {
    let mut d: CategoryData = c.to_data();
    d.name = name.to_string();
    d.build().expect("renaming keeps identifiers")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::terminal_category;

    #[test]
    fn identity_fibers_are_points() {
        let c = Arc::new(terminal_category("1"));
        let ctx = OverContext::identity(c.clone()).unwrap();
        let f = ctx.fiber(Obj(0)).unwrap();
        assert_eq!(f.objects.len(), 1);
        assert_eq!(f.subcat.num_arrows(), 1);
        assert!(ctx.is_faithful());
    }

    #[test]
    fn opposite_context_is_cached_and_involutive() {
        let c = Arc::new(terminal_category("1"));
        let ctx = OverContext::identity(c).unwrap();
        let op = ctx.op();
        assert_eq!(op.op().t(), ctx.t());
    }
}
