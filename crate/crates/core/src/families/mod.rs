//! Families of arrows with a common codomain (sinks) or domain (sources),
//! refinements, cribles and pullback cribles.
//!
//! Sink families are the primary notion. Source-family notions are the
//! sink notions of the opposite category; a source family in `C` is the
//! same member list read as a sink family in `C^op`.

mod collection;
mod epi;

pub use collection::{check_collection_properties, Collection, CollectionProperties, Predicate};
pub use epi::{
    compatible_count, is_compatible, is_epi_family, is_mono_family, is_strict_epi_family,
    is_strict_mono_family, SinkOracle,
};

use std::fmt;

use crate::error::{Error, Result};
use crate::fincat::{Arr, FinCat, Obj};
use crate::mask::{self, Mask};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    /// Common codomain.
    Sink,
    /// Common domain.
    Source,
}

impl Orientation {
    pub fn flip(self) -> Orientation {
        match self {
            Orientation::Sink => Orientation::Source,
            Orientation::Source => Orientation::Sink,
        }
    }

    fn word(self) -> &'static str {
        match self {
            Orientation::Sink => "sink",
            Orientation::Source => "source",
        }
    }
}

/// An indexed family of arrows; the index of a member is its position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Family {
    pub orientation: Orientation,
    pub anchor: Obj,
    pub members: Vec<Arr>,
}

impl Family {
    /// A sink family over `anchor`; every member must have target `anchor`.
    pub fn sink(c: &FinCat, anchor: Obj, members: Vec<Arr>) -> Result<Family> {
        let f = Family {
            orientation: Orientation::Sink,
            anchor,
            members,
        };
        f.check(c)?;
        Ok(f)
    }

    /// A source family out of `anchor`; every member must have source `anchor`.
    pub fn source(c: &FinCat, anchor: Obj, members: Vec<Arr>) -> Result<Family> {
        let f = Family {
            orientation: Orientation::Source,
            anchor,
            members,
        };
        f.check(c)?;
        Ok(f)
    }

    pub fn check(&self, c: &FinCat) -> Result<()> {
        for &a in &self.members {
            let end = match self.orientation {
                Orientation::Sink => c.tgt(a),
                Orientation::Source => c.src(a),
            };
            if end != self.anchor {
                return Err(Error::AnchorMismatch(format!(
                    "`{}` does not {} `{}`",
                    c.arr_name(a),
                    match self.orientation {
                        Orientation::Sink => "end at",
                        Orientation::Source => "start at",
                    },
                    c.obj_name(self.anchor)
                )));
            }
        }
        Ok(())
    }

    pub fn expect(&self, o: Orientation) -> Result<()> {
        if self.orientation == o {
            Ok(())
        } else {
            Err(Error::Orientation {
                expected: o.word(),
            })
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members as a sorted set without duplicates.
    pub fn normalized(&self) -> Family {
        let mut m = self.members.clone();
        m.sort();
        m.dedup();
        Family {
            orientation: self.orientation,
            anchor: self.anchor,
            members: m,
        }
    }

    /// The same member list read in the opposite category.
    pub fn dual(&self) -> Family {
        Family {
            orientation: self.orientation.flip(),
            anchor: self.anchor,
            members: self.members.clone(),
        }
    }

    /// The object at the other end of member `i`.
    pub fn leg_end(&self, c: &FinCat, i: usize) -> Obj {
        match self.orientation {
            Orientation::Sink => c.src(self.members[i]),
            Orientation::Source => c.tgt(self.members[i]),
        }
    }

    pub fn display<'a>(&'a self, c: &'a FinCat) -> FamilyDisplay<'a> {
        FamilyDisplay { f: self, c }
    }
}

pub struct FamilyDisplay<'a> {
    f: &'a Family,
    c: &'a FinCat,
}

impl fmt::Display for FamilyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.f.members.iter().map(|&a| self.c.arr_name(a)).collect();
        match self.f.orientation {
            Orientation::Sink => write!(
                f,
                "{{{}}} -> {}",
                names.join(", "),
                self.c.obj_name(self.f.anchor)
            ),
            Orientation::Source => write!(
                f,
                "{} -> {{{}}}",
                self.c.obj_name(self.f.anchor),
                names.join(", ")
            ),
        }
    }
}

/// Witness that `g` refines `f`: member `λ` of `g` factors as
/// `f[index_map[λ]] ∘ connectors[λ]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refinement {
    pub index_map: Vec<usize>,
    pub connectors: Vec<Arr>,
}

/// Least refinement of the sink family `f` by `g`, if any. Each member of
/// `g` is matched independently to the least index, then least connector.
pub fn refines(c: &FinCat, g: &Family, f: &Family) -> Result<Option<Refinement>> {
    g.expect(Orientation::Sink)?;
    f.expect(Orientation::Sink)?;
    if g.anchor != f.anchor {
        return Err(Error::AnchorMismatch(format!(
            "`{}` vs `{}`",
            c.obj_name(g.anchor),
            c.obj_name(f.anchor)
        )));
    }
    let mut index_map = Vec::with_capacity(g.len());
    let mut connectors = Vec::with_capacity(g.len());
    for &gl in &g.members {
        let found = f.members.iter().enumerate().find_map(|(a, &fa)| {
            c.hom(c.src(gl), c.src(fa))
                .iter()
                .find(|&&k| c.comp(fa, k) == gl)
                .map(|&k| (a, k))
        });
        match found {
            Some((a, k)) => {
                index_map.push(a);
                connectors.push(k);
            }
            None => return Ok(None),
        }
    }
    Ok(Some(Refinement {
        index_map,
        connectors,
    }))
}

/// Per-category index of arrows inside their target's in-list, and the
/// crible generated by each single arrow, as bit masks.
#[derive(Clone, Debug)]
pub struct CribleIndex {
    pos: Vec<u32>,
    down: Vec<Mask>,
}

impl CribleIndex {
    pub fn new(c: &FinCat) -> Result<CribleIndex> {
        let max_in = c.objects().map(|x| c.ins(x).len()).max().unwrap_or(0);
        if max_in > mask::MAX_UNIVERSE {
            return Err(Error::UniverseTooLarge(max_in));
        }
        let mut pos = vec![0u32; c.num_arrows()];
        for x in c.objects() {
            for (i, &a) in c.ins(x).iter().enumerate() {
                pos[a.idx()] = i as u32;
            }
        }
        let down = c
            .arrows()
            .map(|a| {
                c.ins(c.src(a))
                    .iter()
                    .fold(0, |m, &h| m | mask::bit(pos[c.comp(a, h).idx()] as usize))
            })
            .collect();
        Ok(CribleIndex { pos, down })
    }

    /// Position of `a` inside `ins(tgt(a))`.
    #[inline]
    pub fn pos(&self, a: Arr) -> usize {
        self.pos[a.idx()] as usize
    }

    /// The crible generated by `a`, over `ins(tgt(a))`.
    #[inline]
    pub fn down(&self, a: Arr) -> Mask {
        self.down[a.idx()]
    }

    /// Members of a sink family as a mask over `ins(anchor)`.
    pub fn members(&self, f: &Family) -> Mask {
        f.members.iter().fold(0, |m, &a| m | mask::bit(self.pos(a)))
    }

    /// Crible of a sink family as a mask over `ins(anchor)`.
    pub fn crible(&self, f: &Family) -> Mask {
        f.members.iter().fold(0, |m, &a| m | self.down(a))
    }

    pub fn family(&self, c: &FinCat, anchor: Obj, m: Mask) -> Family {
        let ins = c.ins(anchor);
        Family {
            orientation: Orientation::Sink,
            anchor,
            members: mask::bits(m).map(|i| ins[i]).collect(),
        }
    }

    /// A smallest-index set of members generating the crible `m`: one arrow
    /// for each maximal single-arrow crible inside `m`.
    pub fn generators(&self, c: &FinCat, anchor: Obj, m: Mask) -> Vec<Arr> {
        let ins = c.ins(anchor);
        let cand: Vec<Arr> = mask::bits(m).map(|i| ins[i]).collect();
        let mut out: Vec<Arr> = Vec::new();
        for &a in &cand {
            let da = self.down(a);
            let dominated = cand.iter().any(|&b| {
                let db = self.down(b);
                mask::is_subset(da, db) && (da != db || b < a)
            });
            if !dominated {
                out.push(a);
            }
        }
        out
    }
}

/// All arrows into the anchor factoring through some member.
pub fn crible_of(c: &FinCat, f: &Family) -> Result<Family> {
    f.expect(Orientation::Sink)?;
    let mut m: Vec<Arr> = c
        .ins(f.anchor)
        .iter()
        .copied()
        .filter(|&h| factors_through(c, h, &f.members))
        .collect();
    m.sort();
    Ok(Family {
        orientation: Orientation::Sink,
        anchor: f.anchor,
        members: m,
    })
}

fn factors_through(c: &FinCat, h: Arr, members: &[Arr]) -> bool {
    members
        .iter()
        .any(|&fa| c.hom(c.src(h), c.src(fa)).iter().any(|&k| c.comp(fa, k) == h))
}

/// Closed under precomposition with arbitrary arrows.
pub fn is_crible(c: &FinCat, f: &Family) -> Result<bool> {
    f.expect(Orientation::Sink)?;
    Ok(f.members
        .iter()
        .all(|&a| c.ins(c.src(a)).iter().all(|&h| f.members.contains(&c.comp(a, h)))))
}

/// The largest r-pullback of `f` along `y_to_x`: arrows `z: Z → Y` such that
/// `y_to_x ∘ z` factors through some member of `f`.
pub fn pullback_crible(c: &FinCat, y_to_x: Arr, f: &Family) -> Result<Family> {
    f.expect(Orientation::Sink)?;
    if c.tgt(y_to_x) != f.anchor {
        return Err(Error::AnchorMismatch(format!(
            "`{}` does not end at `{}`",
            c.arr_name(y_to_x),
            c.obj_name(f.anchor)
        )));
    }
    let y = c.src(y_to_x);
    let mut m: Vec<Arr> = c
        .ins(y)
        .iter()
        .copied()
        .filter(|&z| factors_through(c, c.comp(y_to_x, z), &f.members))
        .collect();
    m.sort();
    Ok(Family {
        orientation: Orientation::Sink,
        anchor: y,
        members: m,
    })
}

/// `y_to_x ∘ g` refines `f`.
pub fn is_r_pullback(c: &FinCat, g: &Family, y_to_x: Arr, f: &Family) -> Result<bool> {
    g.expect(Orientation::Sink)?;
    if c.src(y_to_x) != g.anchor {
        return Err(Error::AnchorMismatch(format!(
            "`{}` does not start at `{}`",
            c.arr_name(y_to_x),
            c.obj_name(g.anchor)
        )));
    }
    let moved = Family::sink(
        c,
        c.tgt(y_to_x),
        g.members.iter().map(|&a| c.comp(y_to_x, a)).collect(),
    )?;
    Ok(refines(c, &moved, f)?.is_some())
}

/// The family `f_α ∘ g_{α,β}` with indices `(α, β)` in lexicographic order.
pub fn compose_families(c: &FinCat, f: &Family, inner: &[Family]) -> Result<Family> {
    f.expect(Orientation::Sink)?;
    if inner.len() != f.len() {
        return Err(Error::IndexMismatch(format!(
            "{} inner families for {} members",
            inner.len(),
            f.len()
        )));
    }
    let mut members = Vec::new();
    for (&fa, g) in f.members.iter().zip(inner) {
        g.expect(Orientation::Sink)?;
        if g.anchor != c.src(fa) {
            return Err(Error::AnchorMismatch(format!(
                "inner family over `{}` for member `{}`",
                c.obj_name(g.anchor),
                c.arr_name(fa)
            )));
        }
        members.extend(g.members.iter().map(|&b| c.comp(fa, b)));
    }
    Family::sink(c, f.anchor, members)
}

/// A commutative-square candidate
/// ```text
///   P --top--> B
///   |          |
///  left      right
///   v          v
///   A --bot--> D
/// ```
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Square {
    pub top: Arr,
    pub left: Arr,
    pub right: Arr,
    pub bottom: Arr,
}

impl Square {
    pub fn is_well_formed(&self, c: &FinCat) -> bool {
        c.src(self.top) == c.src(self.left)
            && c.tgt(self.top) == c.src(self.right)
            && c.tgt(self.left) == c.src(self.bottom)
            && c.tgt(self.right) == c.tgt(self.bottom)
    }

    pub fn commutes(&self, c: &FinCat) -> bool {
        self.is_well_formed(c)
            && c.comp(self.right, self.top) == c.comp(self.bottom, self.left)
    }
}

/// The square commutes and every commuting fork into `A` and `B` factors
/// uniquely through `P`.
pub fn is_pullback_square(c: &FinCat, sq: &Square) -> bool {
    if !sq.commutes(c) {
        return false;
    }
    let p = c.src(sq.top);
    let (a, b) = (c.tgt(sq.left), c.tgt(sq.top));
    c.objects().all(|q| {
        let mut forks = 0usize;
        for &x in c.hom(q, a) {
            for &y in c.hom(q, b) {
                if c.comp(sq.bottom, x) == c.comp(sq.right, y) {
                    forks += 1;
                }
            }
        }
        let h = c.hom(q, p);
        if h.len() != forks {
            return false;
        }
        let mut seen = Vec::with_capacity(h.len());
        h.iter().all(|&k| {
            let img = (c.comp(sq.left, k), c.comp(sq.top, k));
            if seen.contains(&img) {
                false
            } else {
                seen.push(img);
                true
            }
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::build_finset;
    use crate::fincat::preorder_category;

    fn chain3() -> FinCat {
        let els: Vec<String> = ["0", "1", "2"].iter().map(|s| s.to_string()).collect();
        preorder_category("chain", &els, |i, j| i <= j, |a, b| format!("{a}{b}"))
    }

    #[test]
    fn refines_self_and_total_family() {
        let c = chain3();
        let x = c.obj("2").unwrap();
        let f = Family::sink(&c, x, vec![c.arr("12").unwrap()]).unwrap();
        let r = refines(&c, &f, &f).unwrap().unwrap();
        assert_eq!(r.connectors, vec![c.arr("11").unwrap()]);
        let all = Family::sink(&c, x, c.ins(x).to_vec()).unwrap();
        assert!(refines(&c, &f, &all).unwrap().is_some());
    }

    #[test]
    fn no_connecting_arrow_means_no_refinement() {
        let c = chain3();
        let x = c.obj("2").unwrap();
        let g = Family::sink(&c, x, vec![c.arr("12").unwrap()]).unwrap();
        let f = Family::sink(&c, x, vec![c.arr("02").unwrap()]).unwrap();
        assert!(refines(&c, &g, &f).unwrap().is_none());
        let other = Family::sink(&c, c.obj("1").unwrap(), vec![]).unwrap();
        assert!(refines(&c, &g, &other).is_err());
    }

    #[test]
    fn crible_of_identity_and_empty() {
        let c = chain3();
        let x = c.obj("1").unwrap();
        let idf = Family::sink(&c, x, vec![c.id(x)]).unwrap();
        assert_eq!(crible_of(&c, &idf).unwrap().members.len(), c.ins(x).len());
        let empty = Family::sink(&c, x, vec![]).unwrap();
        assert!(crible_of(&c, &empty).unwrap().is_empty());
        // in a poset the crible of one arrow is its down-set
        let f = Family::sink(&c, c.obj("2").unwrap(), vec![c.arr("12").unwrap()]).unwrap();
        let cr = crible_of(&c, &f).unwrap();
        let mut want = vec![c.arr("02").unwrap(), c.arr("12").unwrap()];
        want.sort();
        assert_eq!(cr.members, want);
        assert!(is_crible(&c, &cr).unwrap());
        assert!(!is_crible(&c, &Family::sink(&c, x, vec![c.id(x)]).unwrap()).unwrap());
    }

    #[test]
    fn pullback_crible_basics() {
        let c = chain3();
        let x = c.obj("2").unwrap();
        let f = Family::sink(&c, x, vec![c.arr("12").unwrap()]).unwrap();
        let p = pullback_crible(&c, c.id(x), &f).unwrap();
        assert_eq!(p, crible_of(&c, &f).unwrap());
        let idf = Family::sink(&c, x, vec![c.id(x)]).unwrap();
        let y2x = c.arr("02").unwrap();
        let q = pullback_crible(&c, y2x, &idf).unwrap();
        assert_eq!(q.members, c.ins(c.obj("0").unwrap()).to_vec());
        assert!(is_r_pullback(&c, &q, y2x, &idf).unwrap());
        let e = Family::sink(&c, c.obj("0").unwrap(), vec![]).unwrap();
        assert!(is_r_pullback(&c, &e, y2x, &f).unwrap());
    }

    #[test]
    fn identity_not_factoring_is_not_r_pullback() {
        let c = chain3();
        let f = Family::sink(&c, c.obj("1").unwrap(), vec![c.arr("01").unwrap()]).unwrap();
        let y = c.obj("1").unwrap();
        let g = Family::sink(&c, y, vec![c.id(y)]).unwrap();
        assert!(!is_r_pullback(&c, &g, c.id(y), &f).unwrap());
    }

    #[test]
    fn compose_with_identities_is_identity() {
        let c = build_finset(2).unwrap();
        let x = c.obj("2").unwrap();
        let members: Vec<Arr> = c.ins(x).iter().copied().take(2).collect();
        let f = Family::sink(&c, x, members.clone()).unwrap();
        let inner: Vec<Family> = members
            .iter()
            .map(|&a| Family::sink(&c, c.src(a), vec![c.id(c.src(a))]).unwrap())
            .collect();
        assert_eq!(compose_families(&c, &f, &inner).unwrap(), f);
    }

    #[test]
    fn product_square_in_finset() {
        let c = build_finset(2).unwrap();
        let (one, two) = (c.obj("1").unwrap(), c.obj("2").unwrap());
        // 1 x 1 = 1 over 1, with identity projections
        let id1 = c.id(one);
        let sq = Square {
            top: id1,
            left: id1,
            right: id1,
            bottom: id1,
        };
        assert!(is_pullback_square(&c, &sq));
        // apex 1 instead of 2 x 1 = 2 over 1: existence fails
        let t2 = c.hom(two, one)[0];
        let pt = c.hom(one, two)[0];
        let smaller = Square {
            top: id1,
            left: pt,
            right: id1,
            bottom: t2,
        };
        assert!(smaller.commutes(&c));
        assert!(!is_pullback_square(&c, &smaller));
        let ok = Square {
            top: t2,
            left: c.id(two),
            right: id1,
            bottom: t2,
        };
        assert!(is_pullback_square(&c, &ok));
    }
}
