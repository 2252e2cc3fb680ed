//! Collections of sink families given by membership predicates, the
//! operations building new collections, and exhaustive checks of the
//! closure properties I, C, U, S and F.
//!
//! Families are evaluated as member sets (duplicates removed).

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use super::{
    crible_of, is_epi_family, is_pullback_square, is_strict_epi_family, CribleIndex, Family,
    Orientation, Square,
};
use crate::error::Result;
use crate::fincat::{Arr, FinCat, Obj};
use crate::mask::{self, Bound, Exactness, Mask};

pub type Predicate = Arc<dyn Fn(&FinCat, &Family) -> bool + Send + Sync>;

/// An object-indexed class of sink families, given intensionally.
#[derive(Clone)]
pub struct Collection {
    pub name: String,
    pub pred: Predicate,
    /// Largest family size considered when a collection has to be
    /// enumerated; `Auto` means all families.
    pub bound: Bound,
}

impl fmt::Debug for Collection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Collection({})", self.name)
    }
}

fn subsets_of(m: Mask, max: usize) -> Vec<Mask> {
    let idx: Vec<usize> = mask::bits(m).collect();
    mask::subsets_by_size(idx.len(), max)
        .map(|s| s.iter().fold(0, |acc, &i| acc | mask::bit(idx[i])))
        .collect()
}

impl Collection {
    pub fn new(
        name: impl Into<String>,
        pred: impl Fn(&FinCat, &Family) -> bool + Send + Sync + 'static,
    ) -> Collection {
        Collection {
            name: name.into(),
            pred: Arc::new(pred),
            bound: Bound::Auto,
        }
    }

    pub fn with_bound(mut self, bound: Bound) -> Collection {
        self.bound = bound;
        self
    }

    pub fn contains(&self, c: &FinCat, f: &Family) -> bool {
        f.orientation == Orientation::Sink && (self.pred)(c, &f.normalized())
    }

    /// Families consisting of one isomorphism.
    pub fn iso() -> Collection {
        Collection::new("Iso", |c, f| f.members.len() == 1 && c.is_iso(f.members[0]))
    }

    pub fn all() -> Collection {
        Collection::new("All", |_, _| true)
    }

    pub fn epi() -> Collection {
        Collection::new("Epi", |c, f| is_epi_family(c, f).unwrap_or(false))
    }

    pub fn strict_epi() -> Collection {
        Collection::new("sE", |c, f| is_strict_epi_family(c, f).unwrap_or(false))
    }

    pub fn intersect(&self, other: &Collection) -> Collection {
        let (a, b) = (self.pred.clone(), other.pred.clone());
        Collection::new(format!("({} & {})", self.name, other.name), move |c, f| {
            a(c, f) && b(c, f)
        })
        .with_bound(self.bound)
    }

    /// Members of this collection over `x`, as masks over `ins(x)`, up to
    /// the bound.
    pub fn members_over(&self, c: &FinCat, idx: &CribleIndex, x: Obj) -> Vec<Mask> {
        let (k, _) = self.bound.resolve(c.ins(x).len());
        subsets_of(mask::full(c.ins(x).len()), k)
            .into_iter()
            .filter(|&m| (self.pred)(c, &idx.family(c, x, m)))
            .collect()
    }

    /// `s𝒜`: families refined by some 𝒜-family over the same object.
    pub fn saturation(&self) -> Collection {
        let a = self.clone();
        Collection::new(format!("s{}", self.name), move |c, f| {
            let Ok(cr) = crible_of(c, f) else { return false };
            let (k, _) = a.bound.resolve(c.ins(f.anchor).len());
            let ins = cr.members;
            mask::subsets_by_size(ins.len(), k).any(|s| {
                let g = Family {
                    orientation: Orientation::Sink,
                    anchor: f.anchor,
                    members: s.iter().map(|&i| ins[i]).collect(),
                };
                (a.pred)(c, &g)
            })
        })
        .with_bound(self.bound)
    }

    /// `π𝒜`: families arising from some 𝒜-family by pulling back along an
    /// arrow, every member sitting in a pullback square over a member and
    /// every member of the 𝒜-family being used.
    pub fn pullback_closure(&self) -> Collection {
        let a = self.clone();
        Collection::new(format!("pi{}", self.name), move |c, g| {
            let Ok(idx) = CribleIndex::new(c) else { return false };
            let y = g.anchor;
            c.objects().any(|x| {
                let cands = a.members_over(c, &idx, x);
                c.hom(y, x).iter().any(|&yx| {
                    cands.iter().any(|&fm| {
                        let f = idx.family(c, x, fm);
                        pullback_relation_total(c, g, yx, &f)
                    })
                })
            })
        })
        .with_bound(self.bound)
    }

    /// `𝒜 ∘ ℬ`: composites of an 𝒜-family with ℬ-families over its domains.
    pub fn compose(&self, other: &Collection) -> Collection {
        let (a, b) = (self.clone(), other.clone());
        Collection::new(format!("({} o {})", self.name, other.name), move |c, f| {
            let Ok(idx) = CribleIndex::new(c) else { return false };
            let target = idx.members(f);
            composites(c, &idx, &a, &b, f.anchor).contains(&target)
        })
        .with_bound(self.bound)
    }
}

/// Whether every member of `g` sits in a pullback square over some member
/// of `f` along `yx`, and every member of `f` is hit.
fn pullback_relation_total(c: &FinCat, g: &Family, yx: Arr, f: &Family) -> bool {
    let mut used = vec![false; f.len()];
    for &ga in &g.members {
        let mut any = false;
        for (b, &fb) in f.members.iter().enumerate() {
            let sq_exists = c.hom(c.src(ga), c.src(fb)).iter().any(|&top| {
                is_pullback_square(
                    c,
                    &Square {
                        top,
                        left: ga,
                        right: fb,
                        bottom: yx,
                    },
                )
            });
            if sq_exists {
                used[b] = true;
                any = true;
            }
        }
        if !any {
            return false;
        }
    }
    used.iter().all(|&u| u)
}

/// Member sets of all composites `a_α ∘ b_{α,β}` with an 𝒜-family `a` over
/// `x` and ℬ-families `b_α` over the domains.
fn composites(
    c: &FinCat,
    idx: &CribleIndex,
    a: &Collection,
    b: &Collection,
    x: Obj,
) -> HashSet<Mask> {
    let mut out = HashSet::new();
    let mut inner_cache: std::collections::HashMap<Obj, Vec<Mask>> = Default::default();
    for am in a.members_over(c, idx, x) {
        let fam = idx.family(c, x, am);
        let mut reach: HashSet<Mask> = HashSet::from([0]);
        for &fa in &fam.members {
            let z = c.src(fa);
            let inner = inner_cache
                .entry(z)
                .or_insert_with(|| b.members_over(c, idx, z))
                .clone();
            let pushed: Vec<Mask> = inner
                .iter()
                .map(|&gm| {
                    mask::bits(gm).fold(0, |m, i| {
                        m | mask::bit(idx.pos(c.comp(fa, c.ins(z)[i])))
                    })
                })
                .collect();
            let mut next = HashSet::new();
            for &r in &reach {
                for &p in &pushed {
                    next.insert(r | p);
                }
            }
            reach = next;
        }
        out.extend(reach);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CollectionProperties {
    /// Isomorphisms are members.
    pub i: bool,
    /// Closed under composition.
    pub c: bool,
    /// Universal: pullback cribles are refined by members.
    pub u: bool,
    /// Saturated: anything refined by a member is a member.
    pub s: bool,
    /// Filtered: two members over an object have a common refining member.
    pub f: bool,
    pub exactness: Exactness,
}

/// Decides I, C, U, S, F by enumerating every sink family of `c` up to the
/// collection's bound.
pub fn check_collection_properties(a: &Collection, c: &FinCat) -> Result<CollectionProperties> {
    let idx = CribleIndex::new(c)?;
    let mut exactness = Exactness::Exact;
    let mut members: Vec<Vec<Mask>> = Vec::with_capacity(c.num_objects());
    let mut member_set: Vec<HashSet<Mask>> = Vec::with_capacity(c.num_objects());
    for x in c.objects() {
        let (_, e) = a.bound.resolve(c.ins(x).len());
        exactness = exactness.combine(e);
        let m = a.members_over(c, &idx, x);
        member_set.push(m.iter().copied().collect());
        members.push(m);
    }
    // some member lies inside the crible `m`
    let refined_by_member =
        |x: Obj, m: Mask| members[x.idx()].iter().any(|&g| mask::is_subset(g, m));
    let crible = |x: Obj, m: Mask| {
        mask::bits(m).fold(0, |acc, i| acc | idx.down(c.ins(x)[i]))
    };

    let i = c.arrows().filter(|&a| c.is_iso(a)).all(|iso| {
        member_set[c.tgt(iso).idx()].contains(&mask::bit(idx.pos(iso)))
    });

    let cc = c.objects().all(|x| {
        composites(c, &idx, a, a, x)
            .iter()
            .all(|m| member_set[x.idx()].contains(m))
    });

    let u = c.objects().all(|x| {
        members[x.idx()].iter().all(|&fm| {
            let f = idx.family(c, x, fm);
            c.ins(x).iter().all(|&yx| {
                let p = super::pullback_crible(c, yx, &f).expect("sink family");
                refined_by_member(c.src(yx), idx.members(&p))
            })
        })
    });

    let s = c.objects().all(|x| {
        let n = c.ins(x).len();
        let (k, _) = a.bound.resolve(n);
        subsets_of(mask::full(n), k).into_iter().all(|h| {
            !refined_by_member(x, crible(x, h)) || member_set[x.idx()].contains(&h)
        })
    });

    let f = c.objects().all(|x| {
        let ms = &members[x.idx()];
        ms.iter().all(|&p| {
            let cp = crible(x, p);
            ms.iter()
                .all(|&q| refined_by_member(x, cp & crible(x, q)))
        })
    });

    Ok(CollectionProperties {
        i,
        c: cc,
        u,
        s,
        f,
        exactness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::build_finset;

    #[test]
    fn iso_collection_has_i_and_c() {
        let c = build_finset(2).unwrap();
        let p = check_collection_properties(&Collection::iso(), &c).unwrap();
        assert!(p.i && p.c);
        assert_eq!(p.exactness, Exactness::Exact);
    }

    #[test]
    fn saturation_of_iso_accepts_families_with_an_iso() {
        let c = build_finset(2).unwrap();
        let x = c.obj("2").unwrap();
        let f = Family::sink(&c, x, vec![c.arr("2->2:10").unwrap(), c.arr("1->2:0").unwrap()])
            .unwrap();
        let s = Collection::iso().saturation();
        assert!(s.contains(&c, &f));
        let g = Family::sink(&c, x, vec![c.arr("1->2:0").unwrap()]).unwrap();
        assert!(!s.contains(&c, &g));
    }

    #[test]
    fn collections_are_contained_in_their_closures() {
        let c = build_finset(2).unwrap();
        let e = Collection::epi();
        let (s, p) = (e.saturation(), e.pullback_closure());
        let idx = CribleIndex::new(&c).unwrap();
        for x in c.objects() {
            for m in e.members_over(&c, &idx, x) {
                let f = idx.family(&c, x, m);
                assert!(s.contains(&c, &f));
                assert!(p.contains(&c, &f));
            }
        }
    }

    #[test]
    fn compose_with_iso_agrees_with_direct_check() {
        let c = build_finset(2).unwrap();
        let e = Collection::epi();
        let comp = e.compose(&Collection::iso());
        let idx = CribleIndex::new(&c).unwrap();
        for x in c.objects() {
            let n = c.ins(x).len();
            for m in 0..(1u128 << n) {
                let f = idx.family(&c, x, m);
                // some epi family with one iso precomposed on each member
                let direct = e.members_over(&c, &idx, x).iter().any(|&em| {
                    let ef = idx.family(&c, x, em);
                    let choices: Vec<Vec<Arr>> = ef
                        .members
                        .iter()
                        .map(|&b| {
                            c.ins(c.src(b))
                                .iter()
                                .filter(|&&i| c.is_iso(i))
                                .map(|&i| c.comp(b, i))
                                .collect()
                        })
                        .collect();
                    let mut picks = vec![Vec::new()];
                    for ch in &choices {
                        picks = picks
                            .iter()
                            .flat_map(|p: &Vec<Arr>| {
                                ch.iter().map(move |&a| {
                                    let mut q = p.clone();
                                    q.push(a);
                                    q
                                })
                            })
                            .collect();
                    }
                    picks.into_iter().any(|mut p| {
                        p.sort();
                        p.dedup();
                        p == f.members
                    })
                });
                assert_eq!(comp.contains(&c, &f), direct, "{}", f.display(&c));
            }
        }
    }
}
