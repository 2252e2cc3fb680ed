//! Brute-force recognition of colimits and limits of small diagrams.
//!
//! A diagram is a functor from a small shape category. A cocone is a
//! colimit when, for every object `Y`, composing with the legs is a
//! bijection from `hom(apex, Y)` onto the commuting cocones with apex `Y`;
//! both sides are enumerated.

use std::sync::Arc;

use super::{Arr, CategoryData, FinCat, FunctorMap, Obj};

/// Apex and one leg per shape object (indexed by shape object index).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cocone {
    pub apex: Obj,
    pub legs: Vec<Arr>,
}

/// A cone in `c` is a cocone in the opposite category.
pub type Cone = Cocone;

/// Default maximum node count for shapes in the catalog.
pub const DEFAULT_MAX_NODES: usize = 4;

/// Legs commute with the diagram: `leg(j) ∘ D(s) = leg(i)` for `s: i → j`.
pub fn is_cocone(c: &FinCat, d: &FunctorMap, k: &Cocone) -> bool {
    let shape = &*d.source;
    if k.legs.len() != shape.num_objects() {
        return false;
    }
    shape.objects().all(|i| {
        let l = k.legs[i.idx()];
        c.src(l) == d.on_obj(i) && c.tgt(l) == k.apex
    }) && shape.arrows().all(|s| {
        let (i, j) = (shape.src(s), shape.tgt(s));
        c.comp(k.legs[j.idx()], d.on_arr(s)) == k.legs[i.idx()]
    })
}

/// All commuting cocones of `d` with apex `y`.
pub fn cocones_to(c: &FinCat, d: &FunctorMap, y: Obj) -> Vec<Cocone> {
    let shape = &*d.source;
    let n = shape.num_objects();
    let mut out = Vec::new();
    let mut legs = Vec::with_capacity(n);
    fn go(
        c: &FinCat,
        d: &FunctorMap,
        y: Obj,
        legs: &mut Vec<Arr>,
        out: &mut Vec<Cocone>,
    ) {
        let shape = &*d.source;
        let i = legs.len();
        if i == shape.num_objects() {
            out.push(Cocone {
                apex: y,
                legs: legs.clone(),
            });
            return;
        }
        let io = Obj(i as u32);
        for &l in c.hom(d.on_obj(io), y) {
            legs.push(l);
            let ok = shape.arrows().all(|s| {
                let (a, b) = (shape.src(s), shape.tgt(s));
                if a.idx() > i || b.idx() > i {
                    return true;
                }
                c.comp(legs[b.idx()], d.on_arr(s)) == legs[a.idx()]
            });
            if ok {
                go(c, d, y, legs, out);
            }
            legs.pop();
        }
    }
    go(c, d, y, &mut legs, &mut out);
    out
}

fn cocone_counts(c: &FinCat, d: &FunctorMap) -> Vec<usize> {
    c.objects().map(|y| cocones_to(c, d, y).len()).collect()
}

fn universal_against(c: &FinCat, k: &Cocone, counts: &[usize]) -> bool {
    c.objects().all(|y| {
        let h = c.hom(k.apex, y);
        if h.len() != counts[y.idx()] {
            return false;
        }
        let mut seen: Vec<Vec<Arr>> = Vec::with_capacity(h.len());
        h.iter().all(|&g| {
            let img: Vec<Arr> = k.legs.iter().map(|&l| c.comp(g, l)).collect();
            if seen.contains(&img) {
                false
            } else {
                seen.push(img);
                true
            }
        })
    })
}

pub fn is_colimit_cocone(c: &FinCat, d: &FunctorMap, k: &Cocone) -> bool {
    is_cocone(c, d, k) && universal_against(c, k, &cocone_counts(c, d))
}

/// `k` is a limit cone of `d` in `c`. The legs point from the apex to the
/// diagram; this is the colimit test in the opposite category.
pub fn is_limit_cone(c: &FinCat, d: &FunctorMap, k: &Cone) -> bool {
    is_colimit_cocone(c.op(), &d.opposite(), k)
}

/// Every colimit cocone of `d`, in apex-then-legs order.
pub fn colimits(c: &FinCat, d: &FunctorMap) -> Vec<Cocone> {
    let counts = cocone_counts(c, d);
    let mut out = Vec::new();
    for y in c.objects() {
        for k in cocones_to(c, d, y) {
            if universal_against(c, &k, &counts) {
                out.push(k);
            }
        }
    }
    out
}

pub fn limits(c: &FinCat, d: &FunctorMap) -> Vec<Cone> {
    colimits(c.op(), &d.opposite())
}

/// A named diagram shape.
#[derive(Clone, Debug)]
pub struct Shape {
    pub name: &'static str,
    pub cat: Arc<FinCat>,
}

fn free_shape(name: &'static str, nodes: &[&str], edges: &[(&str, &str, &str)]) -> Shape {
    let mut d = CategoryData::new(name);
    for n in nodes {
        let id = format!("1{n}");
        d.object(*n).arrow(&id, *n, *n).identity(*n, &id).compose(&id, &id, &id);
    }
    for (e, s, t) in edges {
        d.arrow(*e, *s, *t);
        d.compose(*e, format!("1{s}"), *e);
        d.compose(format!("1{t}"), *e, *e);
    }
    Shape {
        name,
        cat: Arc::new(d.build().expect("shape identifiers are consistent")),
    }
}

/// Shapes used for (co)limit checks: all have at most three nodes and no
/// composable pair of non-identity arrows.
pub fn shape_catalog(max_nodes: usize) -> Vec<Shape> {
    let all = vec![
        free_shape("empty", &[], &[]),
        free_shape("point", &["a"], &[]),
        free_shape("arrow", &["a", "b"], &[("e", "a", "b")]),
        free_shape("discrete2", &["a", "b"], &[]),
        free_shape("discrete3", &["a", "b", "c"], &[]),
        free_shape("parallel", &["a", "b"], &[("e", "a", "b"), ("f", "a", "b")]),
        free_shape("span", &["a", "b", "c"], &[("e", "c", "a"), ("f", "c", "b")]),
        free_shape("cospan", &["a", "b", "c"], &[("e", "a", "c"), ("f", "b", "c")]),
    ];
    all.into_iter()
        .filter(|s| s.cat.num_objects() <= max_nodes)
        .collect()
}

/// Every functor from `shape` into `c`. Intended for the free shapes of the
/// catalog; functoriality is checked on each candidate.
pub fn diagrams(shape: &Arc<FinCat>, c: &Arc<FinCat>) -> Vec<FunctorMap> {
    let n = shape.num_objects();
    let mut out = Vec::new();
    let mut objs = vec![Obj(0); n];
    fn objects_rec(
        shape: &Arc<FinCat>,
        c: &Arc<FinCat>,
        i: usize,
        objs: &mut Vec<Obj>,
        out: &mut Vec<FunctorMap>,
    ) {
        if i == objs.len() {
            arrows_rec(shape, c, objs, 0, &mut vec![Arr(0); shape.num_arrows()], out);
            return;
        }
        for x in c.objects() {
            objs[i] = x;
            objects_rec(shape, c, i + 1, objs, out);
        }
    }
    fn arrows_rec(
        shape: &Arc<FinCat>,
        c: &Arc<FinCat>,
        objs: &[Obj],
        k: usize,
        arrs: &mut Vec<Arr>,
        out: &mut Vec<FunctorMap>,
    ) {
        if k == arrs.len() {
            let d = FunctorMap {
                name: format!("D_{}", shape.name()),
                source: shape.clone(),
                target: c.clone(),
                obj_map: objs.to_vec(),
                arr_map: arrs.clone(),
            };
            if d.validate().is_valid() {
                out.push(d);
            }
            return;
        }
        let s = Arr(k as u32);
        let (a, b) = (objs[shape.src(s).idx()], objs[shape.tgt(s).idx()]);
        if shape.is_identity(s) {
            arrs[k] = c.id(a);
            arrows_rec(shape, c, objs, k + 1, arrs, out);
            return;
        }
        for &f in c.hom(a, b) {
            arrs[k] = f;
            arrows_rec(shape, c, objs, k + 1, arrs, out);
        }
    }
    objects_rec(shape, c, 0, &mut objs, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::build_finset;

    #[test]
    fn identity_cocone_on_point_is_colimit() {
        let c = Arc::new(build_finset(2).unwrap());
        let point = shape_catalog(4).into_iter().find(|s| s.name == "point").unwrap();
        for d in diagrams(&point.cat, &c) {
            let x = d.on_obj(Obj(0));
            let k = Cocone {
                apex: x,
                legs: vec![c.id(x)],
            };
            assert!(is_colimit_cocone(&c, &d, &k));
            assert!(is_limit_cone(&c, &d, &k));
        }
    }

    #[test]
    fn coproduct_of_points_in_finset() {
        let c = Arc::new(build_finset(2).unwrap());
        let two = shape_catalog(4).into_iter().find(|s| s.name == "discrete2").unwrap();
        let one = c.obj("1").unwrap();
        let d = diagrams(&two.cat, &c)
            .into_iter()
            .find(|d| d.obj_map == vec![one, one])
            .unwrap();
        let ks = colimits(&c, &d);
        assert!(!ks.is_empty());
        assert!(ks.iter().all(|k| c.obj_name(k.apex) == "2"));
        // the same legs with apex 1 do not form a colimit
        let id1 = c.id(one);
        let bad = Cocone {
            apex: one,
            legs: vec![id1, id1],
        };
        assert!(is_cocone(&c, &d, &bad));
        assert!(!is_colimit_cocone(&c, &d, &bad));
    }
}
