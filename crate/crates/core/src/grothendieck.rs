//! Poset-valued pseudofunctors, their total categories, and extraction of
//! the pseudofunctor of a faithful fibration.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fibered::{is_cartesian_arrow, is_fibration, OverContext};
use crate::fincat::{Arr, CategoryData, FinCat, FunctorMap, Obj, ValidationReport, Violation};
use crate::lattice::{self, FinPoset};
use crate::mask::Bound;
use crate::topological::{topological_routes, Routes};

/// A strict contravariant functor from a base category to finite posets:
/// a poset over each base object and, for each `φ: S → T`, a monotone
/// `φ*: P(T) → P(S)` given as a table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetPseudofunctor {
    pub name: String,
    pub base: Arc<FinCat>,
    /// Indexed by base object.
    pub posets: Vec<FinPoset>,
    /// Indexed by base arrow; `transitions[φ][y]` is `φ*(y)`.
    pub transitions: Vec<Vec<usize>>,
}

/// The total category with its projection onto the base.
#[derive(Clone, Debug)]
pub struct TotalCategory {
    pub total: Arc<FinCat>,
    pub projection: FunctorMap,
}

impl PosetPseudofunctor {
    pub fn validate(&self) -> ValidationReport {
        let b = &*self.base;
        let mut r = ValidationReport::default();
        if self.posets.len() != b.num_objects() || self.transitions.len() != b.num_arrows() {
            r.violations.push(Violation::TransitionShape {
                arrow: "*".into(),
                detail: format!(
                    "{} posets and {} transitions for {} objects and {} arrows",
                    self.posets.len(),
                    self.transitions.len(),
                    b.num_objects(),
                    b.num_arrows()
                ),
            });
            return r;
        }
        for s in b.objects() {
            if let Some((x, y)) = self.posets[s.idx()].antisymmetry_failure() {
                let p = &self.posets[s.idx()];
                r.violations.push(Violation::NotAPoset {
                    object: b.obj_name(s).into(),
                    detail: format!("`{}` and `{}` are distinct but equivalent", p.elements[x], p.elements[y]),
                });
            }
        }
        let mut shaped = vec![true; b.num_arrows()];
        for a in b.arrows() {
            let (p, q) = (&self.posets[b.src(a).idx()], &self.posets[b.tgt(a).idx()]);
            let tab = &self.transitions[a.idx()];
            if tab.len() != q.len() || tab.iter().any(|&v| v >= p.len()) {
                shaped[a.idx()] = false;
                r.violations.push(Violation::TransitionShape {
                    arrow: b.arr_name(a).into(),
                    detail: format!(
                        "needs {} values below {}, got {:?}",
                        q.len(),
                        p.len(),
                        tab
                    ),
                });
                continue;
            }
            for x in 0..q.len() {
                for y in 0..q.len() {
                    if q.le(x, y) && !p.le(tab[x], tab[y]) {
                        r.violations.push(Violation::NotMonotone {
                            arrow: b.arr_name(a).into(),
                            x: q.elements[x].clone(),
                            y: q.elements[y].clone(),
                        });
                    }
                }
            }
        }
        for s in b.objects() {
            let Some(id) = b.try_id(s) else { continue };
            if !shaped[id.idx()] {
                continue;
            }
            for (x, &v) in self.transitions[id.idx()].iter().enumerate() {
                if v != x {
                    r.violations.push(Violation::IdentityTransition {
                        object: b.obj_name(s).into(),
                        element: self.posets[s.idx()].elements[x].clone(),
                    });
                }
            }
        }
        for f in b.arrows() {
            for &g in b.outs(b.tgt(f)) {
                let gf = b.comp(g, f);
                if !(shaped[f.idx()] && shaped[g.idx()] && shaped[gf.idx()]) {
                    continue;
                }
                let (tf, tg, tgf) = (
                    &self.transitions[f.idx()],
                    &self.transitions[g.idx()],
                    &self.transitions[gf.idx()],
                );
                for z in 0..tg.len() {
                    if tgf[z] != tf[tg[z]] {
                        r.violations.push(Violation::CompositeTransition {
                            after: b.arr_name(g).into(),
                            first: b.arr_name(f).into(),
                            element: self.posets[b.tgt(g).idx()].elements[z].clone(),
                        });
                    }
                }
            }
        }
        r
    }

    fn require_valid(&self) -> Result<()> {
        let r = self.validate();
        if r.is_valid() {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "pseudofunctor `{}` is invalid: {}",
                self.name, r.violations[0]
            )))
        }
    }

    /// Objects `<S|x>`; an arrow `(φ|x|y): <S|x> → <T|y>` for every
    /// `φ: S → T` with `x ≤ φ*(y)`.
    pub fn total_category(&self) -> Result<TotalCategory> {
        self.require_valid()?;
        let b = &*self.base;
        let obj = |s: Obj, x: usize| format!("<{}|{}>", b.obj_name(s), self.posets[s.idx()].elements[x]);
        let arr = |a: Arr, x: usize, y: usize| {
            format!(
                "({}|{}|{})",
                b.arr_name(a),
                self.posets[b.src(a).idx()].elements[x],
                self.posets[b.tgt(a).idx()].elements[y]
            )
        };
        let holds = |a: Arr, x: usize, y: usize| {
            self.posets[b.src(a).idx()].le(x, self.transitions[a.idx()][y])
        };
        let mut d = CategoryData::new(format!("total({})", self.name));
        for s in b.objects() {
            for x in 0..self.posets[s.idx()].len() {
                d.object(obj(s, x));
                d.identity(obj(s, x), arr(b.id(s), x, x));
            }
        }
        for a in b.arrows() {
            let (s, t) = (b.src(a), b.tgt(a));
            for x in 0..self.posets[s.idx()].len() {
                for y in 0..self.posets[t.idx()].len() {
                    if holds(a, x, y) {
                        d.arrow(arr(a, x, y), obj(s, x), obj(t, y));
                    }
                }
            }
        }
        for f in b.arrows() {
            for &g in b.outs(b.tgt(f)) {
                let gf = b.comp(g, f);
                let (ps, pt, pu) = (
                    &self.posets[b.src(f).idx()],
                    &self.posets[b.tgt(f).idx()],
                    &self.posets[b.tgt(g).idx()],
                );
                for x in 0..ps.len() {
                    for y in 0..pt.len() {
                        if !holds(f, x, y) {
                            continue;
                        }
                        for z in 0..pu.len() {
                            if holds(g, y, z) {
                                d.compose(arr(g, y, z), arr(f, x, y), arr(gf, x, z));
                            }
                        }
                    }
                }
            }
        }
        let total = Arc::new(d.build()?);
        let mut fd = crate::fincat::FunctorData::new(format!("p_{}", self.name), total.name(), b.name());
        for s in b.objects() {
            for x in 0..self.posets[s.idx()].len() {
                fd.objects.push((obj(s, x), b.obj_name(s).to_string()));
            }
        }
        for a in b.arrows() {
            let (s, t) = (b.src(a), b.tgt(a));
            for x in 0..self.posets[s.idx()].len() {
                for y in 0..self.posets[t.idx()].len() {
                    if holds(a, x, y) {
                        fd.arrows.push((arr(a, x, y), b.arr_name(a).to_string()));
                    }
                }
            }
        }
        let projection = fd.build(total.clone(), self.base.clone())?;
        Ok(TotalCategory { total, projection })
    }

    /// The fiber poset and transitions read as a lattice condition: every
    /// fiber a complete lattice and every transition with a left adjoint.
    pub fn lattice_condition(&self) -> LatticeCondition {
        let b = &*self.base;
        let incomplete = b
            .objects()
            .find(|s| !self.posets[s.idx()].is_complete_lattice())
            .map(|s| b.obj_name(s).to_string());
        let no_adjoint = b
            .arrows()
            .find(|&a| self.left_adjoint_of_transition(a).is_none())
            .map(|a| b.arr_name(a).to_string());
        LatticeCondition {
            incomplete_fiber: incomplete,
            transition_without_left_adjoint: no_adjoint,
        }
    }

    /// `φ_!` with `φ_!(x) ≤ y ⟺ x ≤ φ*(y)`, if it exists.
    pub fn left_adjoint_of_transition(&self, a: Arr) -> Option<Vec<usize>> {
        let b = &*self.base;
        lattice::left_adjoint(
            &self.posets[b.tgt(a).idx()],
            &self.posets[b.src(a).idx()],
            &self.transitions[a.idx()],
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeCondition {
    pub incomplete_fiber: Option<String>,
    pub transition_without_left_adjoint: Option<String>,
}

impl LatticeCondition {
    pub fn holds(&self) -> bool {
        self.incomplete_fiber.is_none() && self.transition_without_left_adjoint.is_none()
    }
}

/// The pseudofunctor of a faithful fibration whose fibers are posets:
/// the fiber order over each object, and `φ*(y)` the domain of the
/// cartesian lift of `φ` at `y`.
pub fn extract_pseudofunctor(ctx: &OverContext) -> Result<PosetPseudofunctor> {
    if !ctx.is_faithful() {
        return Err(Error::Precondition(format!("`{}` is not faithful", ctx.name())));
    }
    let v = is_fibration(ctx)?;
    if !v.by_composition() {
        return Err(Error::Precondition(format!("`{}` is not a fibration", ctx.name())));
    }
    let (t, s) = (ctx.t(), ctx.s());
    let mut posets = Vec::with_capacity(s.num_objects());
    for b in s.objects() {
        let over = ctx.over(b);
        let p = FinPoset::from_relation(
            over.iter().map(|&x| t.obj_name(x).to_string()).collect(),
            |i, j| ctx.vertical(over[i], over[j]).next().is_some(),
        );
        if let Some((x, y)) = p.antisymmetry_failure() {
            return Err(Error::Precondition(format!(
                "fiber over `{}` is not a poset: `{}` and `{}` are isomorphic",
                s.obj_name(b),
                p.elements[x],
                p.elements[y]
            )));
        }
        posets.push(p);
    }
    let pos = |x: Obj| ctx.over(ctx.base(x)).iter().position(|&o| o == x).expect("object in its fiber");
    let mut transitions = Vec::with_capacity(s.num_arrows());
    for phi in s.arrows() {
        let (src, tgt) = (s.src(phi), s.tgt(phi));
        let mut tab = Vec::with_capacity(ctx.over(tgt).len());
        for &y in ctx.over(tgt) {
            let x = ctx
                .over(src)
                .iter()
                .copied()
                .find(|&x| ctx.lifts(x, y, phi).any(|a| is_cartesian_arrow(ctx, a)))
                .ok_or_else(|| Error::Precondition("missing cartesian lift".into()))?;
            tab.push(pos(x));
        }
        transitions.push(tab);
    }
    Ok(PosetPseudofunctor {
        name: format!("P({})", ctx.name()),
        base: ctx.u.target.clone(),
        posets,
        transitions,
    })
}

/// Both sides of the lattice characterization of topological fibrations.
#[derive(Clone, Debug)]
pub struct LatticeCharacterization {
    pub topological: Routes,
    pub condition: LatticeCondition,
}

impl LatticeCharacterization {
    pub fn lhs(&self) -> bool {
        self.topological.value()
    }

    pub fn rhs(&self) -> bool {
        self.condition.holds()
    }

    pub fn agree(&self) -> bool {
        self.topological.agree() && self.lhs() == self.rhs()
    }
}

/// The total fibration is topological exactly when every fiber is a
/// complete lattice and every transition has a left adjoint.
pub fn check_lattice_characterization(p: &PosetPseudofunctor) -> Result<LatticeCharacterization> {
    let tc = p.total_category()?;
    let ctx = OverContext::new(tc.projection)?;
    Ok(LatticeCharacterization {
        topological: topological_routes(&ctx, Bound::Auto)?,
        condition: p.lattice_condition(),
    })
}

/// Per-fiber poset isomorphisms `p → q` (as element-name maps) that
/// conjugate the transitions, if the bases have the same identifiers.
pub fn pseudofunctors_isomorphic(p: &PosetPseudofunctor, q: &PosetPseudofunctor) -> Option<BTreeMap<String, Vec<String>>> {
    let (pb, qb) = (&*p.base, &*q.base);
    let (mut dp, mut dq) = (pb.to_data(), qb.to_data());
    dp.name.clear();
    dq.name.clear();
    if dp != dq {
        return None;
    }
    let n = pb.num_objects();
    let candidates: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|i| poset_isos(&p.posets[i], &q.posets[i]))
        .collect();
    if candidates.iter().any(|c| c.is_empty()) {
        return None;
    }
    let mut choice = vec![0usize; n];
    let consistent = |choice: &[usize]| {
        pb.arrows().all(|a| {
            let (s, t) = (pb.src(a).idx(), pb.tgt(a).idx());
            let (is, it) = (&candidates[s][choice[s]], &candidates[t][choice[t]]);
            (0..p.posets[t].len()).all(|y| is[p.transitions[a.idx()][y]] == q.transitions[a.idx()][it[y]])
        })
    };
    loop {
        if consistent(&choice) {
            return Some(
                pb.objects()
                    .map(|s| {
                        let iso = &candidates[s.idx()][choice[s.idx()]];
                        (
                            pb.obj_name(s).to_string(),
                            iso.iter().map(|&j| q.posets[s.idx()].elements[j].clone()).collect(),
                        )
                    })
                    .collect(),
            );
        }
        let mut i = n;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < candidates[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// All order isomorphisms `p → q`, as tables.
fn poset_isos(p: &FinPoset, q: &FinPoset) -> Vec<Vec<usize>> {
    let n = p.len();
    if n != q.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut map = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn go(p: &FinPoset, q: &FinPoset, map: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let i = map.len();
        if i == p.len() {
            out.push(map.clone());
            return;
        }
        for j in 0..q.len() {
            if used[j] {
                continue;
            }
            let ok = (0..i).all(|k| p.le(k, i) == q.le(map[k], j) && p.le(i, k) == q.le(j, map[k]));
            if ok {
                used[j] = true;
                map.push(j);
                go(p, q, map, used, out);
                map.pop();
                used[j] = false;
            }
        }
    }
    go(p, q, &mut map, &mut used, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{preorder_category, terminal_category};

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    /// Base `0 → 1`, a 2-chain over each end, `φ*` the identity-shaped map.
    fn interval_chains() -> PosetPseudofunctor {
        let base = Arc::new(preorder_category(
            "I",
            &names(&["0", "1"]),
            |i, j| i <= j,
            |a, b| format!("{a}{b}"),
        ));
        let chain = FinPoset::from_edges(names(&["lo", "hi"]), &[(0, 1)]);
        let mut transitions = vec![Vec::new(); base.num_arrows()];
        for a in base.arrows() {
            transitions[a.idx()] = vec![0, 1];
        }
        PosetPseudofunctor {
            name: "chains".into(),
            base,
            posets: vec![chain.clone(), chain],
            transitions,
        }
    }

    #[test]
    fn interval_total_has_four_objects_and_is_a_fibration() {
        let p = interval_chains();
        assert!(p.validate().is_valid());
        let tc = p.total_category().unwrap();
        assert_eq!(tc.total.num_objects(), 4);
        let ctx = OverContext::new(tc.projection).unwrap();
        assert!(is_fibration(&ctx).unwrap().by_composition());
        let q = extract_pseudofunctor(&ctx).unwrap();
        assert!(pseudofunctors_isomorphic(&p, &q).is_some());
    }

    #[test]
    fn point_fibers_give_the_base_back() {
        let base = Arc::new(terminal_category("1"));
        let p = PosetPseudofunctor {
            name: "points".into(),
            base: base.clone(),
            posets: vec![FinPoset::from_edges(names(&["x"]), &[])],
            transitions: vec![vec![0]],
        };
        let tc = p.total_category().unwrap();
        let id = FunctorMap::identity(base);
        assert!(tc.projection.iso_over_base(&id).is_some());
    }

    #[test]
    fn moved_identity_transition_is_reported() {
        let mut p = interval_chains();
        let b = p.base.clone();
        let id0 = b.arr("00").unwrap();
        p.transitions[id0.idx()] = vec![1, 1];
        let r = p.validate();
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::IdentityTransition { .. })));
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::CompositeTransition { .. })));
    }
}
