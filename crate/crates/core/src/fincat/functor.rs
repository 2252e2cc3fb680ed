use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{Arr, FinCat, Obj, ValidationReport, Violation};
use crate::error::{Error, Result};

/// Name-level description of a functor between two named categories.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FunctorData {
    pub name: String,
    pub source: String,
    pub target: String,
    pub objects: Vec<(String, String)>,
    pub arrows: Vec<(String, String)>,
}

impl FunctorData {
    pub fn new(
        name: impl Into<String>,
        source: impl Into<String>,
        target: impl Into<String>,
    ) -> Self {
        FunctorData {
            name: name.into(),
            source: source.into(),
            target: target.into(),
            ..Default::default()
        }
    }

    /// Resolves the assignment against the given categories. Every object
    /// and arrow of `source` must be mapped exactly once.
    pub fn build(&self, source: Arc<FinCat>, target: Arc<FinCat>) -> Result<FunctorMap> {
        let mut obj_map = vec![None; source.num_objects()];
        for (x, y) in &self.objects {
            let xi = source.obj(x)?;
            let yi = target.obj(y)?;
            if obj_map[xi.idx()].replace(yi).is_some() {
                return Err(Error::Duplicate(x.clone()));
            }
        }
        let mut arr_map = vec![None; source.num_arrows()];
        for (a, b) in &self.arrows {
            let ai = source.arr(a)?;
            let bi = target.arr(b)?;
            if arr_map[ai.idx()].replace(bi).is_some() {
                return Err(Error::Duplicate(a.clone()));
            }
        }
        let obj_map = obj_map
            .into_iter()
            .enumerate()
            .map(|(i, o)| {
                o.ok_or_else(|| {
                    Error::MissingAssignment(source.obj_name(Obj(i as u32)).to_string())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let arr_map = arr_map
            .into_iter()
            .enumerate()
            .map(|(i, a)| {
                a.ok_or_else(|| {
                    Error::MissingAssignment(source.arr_name(Arr(i as u32)).to_string())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FunctorMap {
            name: self.name.clone(),
            source,
            target,
            obj_map,
            arr_map,
        })
    }
}

/// A functor between two finite categories, stored as index tables.
#[derive(Clone)]
pub struct FunctorMap {
    pub name: String,
    pub source: Arc<FinCat>,
    pub target: Arc<FinCat>,
    pub obj_map: Vec<Obj>,
    pub arr_map: Vec<Arr>,
}

impl FunctorMap {
    /// Builds a functor from closures; no validation.
    pub fn from_fns(
        name: impl Into<String>,
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        obj: impl Fn(Obj) -> Obj,
        arr: impl Fn(Arr) -> Arr,
    ) -> FunctorMap {
        let obj_map = source.objects().map(obj).collect();
        let arr_map = source.arrows().map(arr).collect();
        FunctorMap {
            name: name.into(),
            source,
            target,
            obj_map,
            arr_map,
        }
    }

    pub fn identity(c: Arc<FinCat>) -> FunctorMap {
        FunctorMap::from_fns(format!("id_{}", c.name()), c.clone(), c, |x| x, |a| a)
    }

    /// The unique functor to a one-object category with only an identity.
    pub fn to_terminal(c: Arc<FinCat>, terminal: Arc<FinCat>) -> FunctorMap {
        let star = Obj(0);
        let id = terminal.id(star);
        FunctorMap::from_fns(
            format!("!_{}", c.name()),
            c,
            terminal,
            |_| star,
            |_| id,
        )
    }

    #[inline]
    pub fn on_obj(&self, x: Obj) -> Obj {
        self.obj_map[x.idx()]
    }

    #[inline]
    pub fn on_arr(&self, a: Arr) -> Arr {
        self.arr_map[a.idx()]
    }

    pub fn validate(&self) -> ValidationReport {
        let (s, t) = (&*self.source, &*self.target);
        let mut v = Vec::new();
        for a in s.arrows() {
            let b = self.on_arr(a);
            if t.src(b) != self.on_obj(s.src(a)) || t.tgt(b) != self.on_obj(s.tgt(a)) {
                v.push(Violation::FunctorEndpoints {
                    arrow: s.arr_name(a).to_string(),
                });
            }
        }
        for x in s.objects() {
            if let (Some(i), Some(j)) = (s.try_id(x), t.try_id(self.on_obj(x))) {
                if self.on_arr(i) != j {
                    v.push(Violation::FunctorIdentity {
                        object: s.obj_name(x).to_string(),
                    });
                }
            }
        }
        for g in s.arrows() {
            for &f in s.ins(s.src(g)) {
                let Some(gf) = s.try_comp(g, f) else { continue };
                let (ug, uf) = (self.on_arr(g), self.on_arr(f));
                if t.try_comp(ug, uf) != Some(self.on_arr(gf)) {
                    v.push(Violation::FunctorComposition {
                        after: s.arr_name(g).to_string(),
                        first: s.arr_name(f).to_string(),
                    });
                }
            }
        }
        ValidationReport { violations: v }
    }

    /// Injective on every hom-set.
    pub fn is_faithful(&self) -> bool {
        let s = &*self.source;
        s.objects().all(|x| {
            s.objects().all(|y| {
                let h = s.hom(x, y);
                let mut seen = Vec::with_capacity(h.len());
                h.iter().all(|&a| {
                    let b = self.on_arr(a);
                    if seen.contains(&b) {
                        false
                    } else {
                        seen.push(b);
                        true
                    }
                })
            })
        })
    }

    /// Surjective on every hom-set.
    pub fn is_full(&self) -> bool {
        let (s, t) = (&*self.source, &*self.target);
        s.objects().all(|x| {
            s.objects().all(|y| {
                let img: Vec<Arr> = s.hom(x, y).iter().map(|&a| self.on_arr(a)).collect();
                t.hom(self.on_obj(x), self.on_obj(y))
                    .iter()
                    .all(|b| img.contains(b))
            })
        })
    }

    /// The same assignment viewed between the opposite categories.
    pub fn opposite(&self) -> FunctorMap {
        let name = match self.name.strip_suffix("^op") {
            Some(base) => base.to_string(),
            None => format!("{}^op", self.name),
        };
        FunctorMap {
            name,
            source: Arc::new(self.source.op().clone()),
            target: Arc::new(self.target.op().clone()),
            obj_map: self.obj_map.clone(),
            arr_map: self.arr_map.clone(),
        }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &FunctorMap) -> FunctorMap {
        FunctorMap::from_fns(
            format!("{}.{}", self.name, first.name),
            first.source.clone(),
            self.target.clone(),
            |x| self.on_obj(first.on_obj(x)),
            |a| self.on_arr(first.on_arr(a)),
        )
    }

    pub fn to_data(&self) -> FunctorData {
        let (s, t) = (&*self.source, &*self.target);
        FunctorData {
            name: self.name.clone(),
            source: s.name().to_string(),
            target: t.name().to_string(),
            objects: s
                .objects()
                .map(|x| (s.obj_name(x).to_string(), t.obj_name(self.on_obj(x)).to_string()))
                .collect(),
            arrows: s
                .arrows()
                .map(|a| (s.arr_name(a).to_string(), t.arr_name(self.on_arr(a)).to_string()))
                .collect(),
        }
    }

    /// Searches for an isomorphism of categories `k: source → other.source`
    /// with `other ∘ k = self` (an isomorphism over the common target).
    /// Returns the object and arrow bijections by name.
    pub fn iso_over_base(&self, other: &FunctorMap) -> Option<BTreeMap<String, String>> {
        let (a, b) = (&*self.source, &*other.source);
        if a.num_objects() != b.num_objects() || a.num_arrows() != b.num_arrows() {
            return None;
        }
        if self.target.to_data() != other.target.to_data() {
            return None;
        }
        // candidates: objects over the same base object with matching hom-size profile
        let profile = |c: &FinCat, x: Obj| {
            let mut p: Vec<(usize, usize)> = c
                .objects()
                .map(|y| (c.hom(x, y).len(), c.hom(y, x).len()))
                .collect();
            p.sort();
            p
        };
        let cand: Vec<Vec<Obj>> = a
            .objects()
            .map(|x| {
                let px = profile(a, x);
                b.objects()
                    .filter(|&y| other.on_obj(y) == self.on_obj(x) && profile(b, y) == px)
                    .collect()
            })
            .collect();
        let mut assign: Vec<Option<Obj>> = vec![None; a.num_objects()];
        let mut used = vec![false; b.num_objects()];
        let mut result = None;
        self.iso_search(other, &cand, 0, &mut assign, &mut used, &mut result);
        result
    }

    fn iso_search(
        &self,
        other: &FunctorMap,
        cand: &[Vec<Obj>],
        i: usize,
        assign: &mut Vec<Option<Obj>>,
        used: &mut Vec<bool>,
        result: &mut Option<BTreeMap<String, String>>,
    ) {
        if result.is_some() {
            return;
        }
        let (a, b) = (&*self.source, &*other.source);
        if i == cand.len() {
            if let Some(m) = self.extend_to_arrows(other, assign) {
                *result = Some(m);
            }
            return;
        }
        for &y in &cand[i] {
            if used[y.idx()] {
                continue;
            }
            // hom sizes to already assigned objects must agree
            let x = Obj(i as u32);
            let ok = (0..i).all(|j| {
                let xj = Obj(j as u32);
                let yj = assign[j].unwrap();
                a.hom(x, xj).len() == b.hom(y, yj).len()
                    && a.hom(xj, x).len() == b.hom(yj, y).len()
            }) && a.hom(x, x).len() == b.hom(y, y).len();
            if !ok {
                continue;
            }
            assign[i] = Some(y);
            used[y.idx()] = true;
            self.iso_search(other, cand, i + 1, assign, used, result);
            used[y.idx()] = false;
            assign[i] = None;
        }
    }

    /// Given an object bijection, finds an arrow bijection commuting with
    /// composition and the projections. Arrow choice inside each hom-set is
    /// determined by the projection when both functors are faithful;
    /// otherwise a backtracking search over hom-set bijections is used.
    fn extend_to_arrows(
        &self,
        other: &FunctorMap,
        assign: &[Option<Obj>],
    ) -> Option<BTreeMap<String, String>> {
        let (a, b) = (&*self.source, &*other.source);
        let arrows: Vec<Arr> = a.arrows().collect();
        let mut amap: Vec<Option<Arr>> = vec![None; a.num_arrows()];
        let mut used = vec![false; b.num_arrows()];
        fn go(
            s: &FunctorMap,
            o: &FunctorMap,
            assign: &[Option<Obj>],
            arrows: &[Arr],
            k: usize,
            amap: &mut Vec<Option<Arr>>,
            used: &mut Vec<bool>,
        ) -> bool {
            let (a, b) = (&*s.source, &*o.source);
            if k == arrows.len() {
                return true;
            }
            let f = arrows[k];
            let (x, y) = (assign[a.src(f).idx()].unwrap(), assign[a.tgt(f).idx()].unwrap());
            for &g in b.hom(x, y) {
                if used[g.idx()] || o.on_arr(g) != s.on_arr(f) {
                    continue;
                }
                if a.is_identity(f) != b.is_identity(g) {
                    continue;
                }
                // composition with already-mapped arrows
                let consistent = arrows[..k].iter().all(|&h| {
                    let hm = amap[h.idx()].unwrap();
                    let chk = |p: Arr, q: Arr, pm: Arr, qm: Arr| match a.try_comp(p, q) {
                        Some(r) => match amap[r.idx()] {
                            Some(rm) => b.try_comp(pm, qm) == Some(rm),
                            None => true,
                        },
                        None => true,
                    };
                    chk(f, h, g, hm) && chk(h, f, hm, g)
                });
                if !consistent {
                    continue;
                }
                amap[f.idx()] = Some(g);
                used[g.idx()] = true;
                if go(s, o, assign, arrows, k + 1, amap, used) {
                    return true;
                }
                used[g.idx()] = false;
                amap[f.idx()] = None;
            }
            false
        }
        if !go(self, other, assign, &arrows, 0, &mut amap, &mut used) {
            return None;
        }
        // final full check of composition
        for g in a.arrows() {
            for &f in a.ins(a.src(g)) {
                let gf = a.comp(g, f);
                let (gm, fm) = (amap[g.idx()].unwrap(), amap[f.idx()].unwrap());
                if b.try_comp(gm, fm) != amap[gf.idx()] {
                    return None;
                }
            }
        }
        let mut m = BTreeMap::new();
        for x in a.objects() {
            m.insert(
                a.obj_name(x).to_string(),
                b.obj_name(assign[x.idx()].unwrap()).to_string(),
            );
        }
        for f in a.arrows() {
            m.insert(
                a.arr_name(f).to_string(),
                b.arr_name(amap[f.idx()].unwrap()).to_string(),
            );
        }
        Some(m)
    }
}

impl fmt::Debug for FunctorMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FunctorMap({}: {} -> {})",
            self.name,
            self.source.name(),
            self.target.name()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{discrete_category, CategoryData};

    fn parallel_pair() -> FinCat {
        let mut d = CategoryData::new("P");
        d.object("a").object("b");
        d.arrow("ia", "a", "a").arrow("ib", "b", "b");
        d.arrow("p", "a", "b").arrow("q", "a", "b");
        d.identity("a", "ia").identity("b", "ib");
        d.compose("ia", "ia", "ia").compose("ib", "ib", "ib");
        for x in ["p", "q"] {
            d.compose(x, "ia", x).compose("ib", x, x);
        }
        d.build().unwrap()
    }

    fn interval() -> FinCat {
        let mut d = CategoryData::new("I");
        d.object("a").object("b");
        d.arrow("ia", "a", "a").arrow("ib", "b", "b").arrow("f", "a", "b");
        d.identity("a", "ia").identity("b", "ib");
        d.compose("ia", "ia", "ia").compose("ib", "ib", "ib");
        d.compose("f", "ia", "f").compose("ib", "f", "f");
        d.build().unwrap()
    }

    fn collapse() -> FunctorMap {
        let mut d = FunctorData::new("c", "P", "I");
        d.objects = vec![("a".into(), "a".into()), ("b".into(), "b".into())];
        d.arrows = [("ia", "ia"), ("ib", "ib"), ("p", "f"), ("q", "f")]
            .iter()
            .map(|(x, y)| (x.to_string(), y.to_string()))
            .collect();
        d.build(Arc::new(parallel_pair()), Arc::new(interval())).unwrap()
    }

    #[test]
    fn identity_functor_is_valid_and_faithful() {
        let u = FunctorMap::identity(Arc::new(interval()));
        assert!(u.validate().is_valid());
        assert!(u.is_faithful() && u.is_full());
    }

    #[test]
    fn collapse_is_valid_but_not_faithful() {
        let u = collapse();
        assert!(u.validate().is_valid());
        assert!(!u.is_faithful());
        assert!(!u.opposite().is_faithful());
    }

    #[test]
    fn identity_sent_to_non_identity_is_reported() {
        let c = Arc::new(interval());
        let mut u = FunctorMap::identity(c.clone());
        let ia = c.arr("ia").unwrap();
        let ib = c.arr("ib").unwrap();
        u.arr_map[ia.idx()] = ib;
        let r = u.validate();
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::FunctorIdentity { object } if object == "a")));
    }

    #[test]
    fn missing_assignment_is_an_input_error() {
        let d = FunctorData::new("u", "D", "D");
        let c = Arc::new(discrete_category("D", &["a"]));
        assert!(matches!(d.build(c.clone(), c), Err(Error::MissingAssignment(_))));
    }

    #[test]
    fn iso_over_base_finds_renaming() {
        let c = Arc::new(interval());
        let u = FunctorMap::identity(c.clone());
        let m = u.iso_over_base(&u).unwrap();
        assert_eq!(m["f"], "f");
        assert!(collapse().iso_over_base(&FunctorMap::identity(c)).is_none());
    }
}
