//! Finite categories given by explicit composition tables.
//!
//! Objects and arrows carry opaque string identifiers. Internally they are
//! numbered in lexicographic order of their identifiers, so iterating over
//! indices is iterating in identifier order; every "least witness" returned
//! by this crate is least in that order.

mod functor;
pub mod limits;

pub use functor::{FunctorData, FunctorMap};

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;

/// Object index inside one [`FinCat`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Obj(pub u32);

/// Arrow index inside one [`FinCat`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arr(pub u32);

impl Obj {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl Arr {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowDecl {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

/// `after ∘ first = result`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositeDecl {
    pub after: String,
    pub first: String,
    pub result: String,
}

/// Name-level description of a category, as read from or written to a model
/// file. [`CategoryData::build`] resolves identifiers; it does not check the
/// category axioms (see [`FinCat::validate`]).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CategoryData {
    pub name: String,
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowDecl>,
    pub identities: Vec<(String, String)>,
    pub compositions: Vec<CompositeDecl>,
}

impl CategoryData {
    pub fn new(name: impl Into<String>) -> Self {
        CategoryData {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn object(&mut self, id: impl Into<String>) -> &mut Self {
        self.objects.push(id.into());
        self
    }

    pub fn arrow(
        &mut self,
        id: impl Into<String>,
        src: impl Into<String>,
        tgt: impl Into<String>,
    ) -> &mut Self {
        self.arrows.push(ArrowDecl {
            id: id.into(),
            src: src.into(),
            tgt: tgt.into(),
        });
        self
    }

    pub fn identity(&mut self, object: impl Into<String>, arrow: impl Into<String>) -> &mut Self {
        self.identities.push((object.into(), arrow.into()));
        self
    }

    pub fn compose(
        &mut self,
        after: impl Into<String>,
        first: impl Into<String>,
        result: impl Into<String>,
    ) -> &mut Self {
        self.compositions.push(CompositeDecl {
            after: after.into(),
            first: first.into(),
            result: result.into(),
        });
        self
    }

    pub fn build(&self) -> Result<FinCat> {
        let mut seen = BTreeSet::new();
        for o in &self.objects {
            if !seen.insert(o.as_str()) {
                return Err(Error::Duplicate(o.clone()));
            }
        }
        let objects: Vec<String> = seen.iter().map(|s| s.to_string()).collect();
        let obj_index: HashMap<String, Obj> = objects
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), Obj(i as u32)))
            .collect();

        let mut decls: BTreeMap<&str, &ArrowDecl> = BTreeMap::new();
        for a in &self.arrows {
            if decls.insert(a.id.as_str(), a).is_some() {
                return Err(Error::Duplicate(a.id.clone()));
            }
        }
        let mut arrows = Vec::with_capacity(decls.len());
        let mut src = Vec::with_capacity(decls.len());
        let mut tgt = Vec::with_capacity(decls.len());
        for (id, d) in &decls {
            let s = *obj_index
                .get(&d.src)
                .ok_or_else(|| Error::UnknownObject(d.src.clone()))?;
            let t = *obj_index
                .get(&d.tgt)
                .ok_or_else(|| Error::UnknownObject(d.tgt.clone()))?;
            arrows.push(id.to_string());
            src.push(s);
            tgt.push(t);
        }
        let arr_index: HashMap<String, Arr> = arrows
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), Arr(i as u32)))
            .collect();
        let arr = |name: &str| {
            arr_index
                .get(name)
                .copied()
                .ok_or_else(|| Error::UnknownArrow(name.to_string()))
        };

        let mut identity = vec![NONE; objects.len()];
        for (o, a) in &self.identities {
            let oi = *obj_index
                .get(o)
                .ok_or_else(|| Error::UnknownObject(o.clone()))?;
            let ai = arr(a)?;
            if identity[oi.idx()] != NONE && identity[oi.idx()] != ai.0 {
                return Err(Error::Conflict(format!("two identities for object `{o}`")));
            }
            identity[oi.idx()] = ai.0;
        }

        let n = arrows.len();
        let mut compose = vec![NONE; n * n];
        let mut spurious = Vec::new();
        for c in &self.compositions {
            let g = arr(&c.after)?;
            let f = arr(&c.first)?;
            let h = arr(&c.result)?;
            if tgt[f.idx()] != src[g.idx()] {
                spurious.push((g, f, h));
                continue;
            }
            let slot = &mut compose[g.idx() * n + f.idx()];
            if *slot != NONE && *slot != h.0 {
                return Err(Error::Conflict(format!(
                    "`{}` after `{}` defined twice",
                    c.after, c.first
                )));
            }
            *slot = h.0;
        }
        spurious.sort();
        spurious.dedup();

        Ok(FinCat::assemble(
            self.name.clone(),
            objects,
            arrows,
            src,
            tgt,
            identity,
            compose,
            spurious,
            obj_index,
            arr_index,
        ))
    }
}

/// A finite category with an explicit composition table.
///
/// A `FinCat` may violate the category axioms; analysis functions assume
/// [`FinCat::validate`] returned an empty report.
pub struct FinCat {
    name: String,
    objects: Vec<String>,
    arrows: Vec<String>,
    src: Vec<Obj>,
    tgt: Vec<Obj>,
    identity: Vec<u32>,
    compose: Vec<u32>,
    spurious: Vec<(Arr, Arr, Arr)>,
    hom: Vec<Vec<Arr>>,
    ins: Vec<Vec<Arr>>,
    outs: Vec<Vec<Arr>>,
    obj_index: HashMap<String, Obj>,
    arr_index: HashMap<String, Arr>,
    op: OnceLock<Box<FinCat>>,
}

impl FinCat {
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        name: String,
        objects: Vec<String>,
        arrows: Vec<String>,
        src: Vec<Obj>,
        tgt: Vec<Obj>,
        identity: Vec<u32>,
        compose: Vec<u32>,
        spurious: Vec<(Arr, Arr, Arr)>,
        obj_index: HashMap<String, Obj>,
        arr_index: HashMap<String, Arr>,
    ) -> FinCat {
        let no = objects.len();
        let mut hom = vec![Vec::new(); no * no];
        let mut ins = vec![Vec::new(); no];
        let mut outs = vec![Vec::new(); no];
        for (i, (s, t)) in src.iter().zip(&tgt).enumerate() {
            let a = Arr(i as u32);
            hom[s.idx() * no + t.idx()].push(a);
            ins[t.idx()].push(a);
            outs[s.idx()].push(a);
        }
        FinCat {
            name,
            objects,
            arrows,
            src,
            tgt,
            identity,
            compose,
            spurious,
            hom,
            ins,
            outs,
            obj_index,
            arr_index,
            op: OnceLock::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(&self, name: impl Into<String>) -> FinCat {
        let mut c = self.clone();
        c.name = name.into();
        c
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> impl ExactSizeIterator<Item = Obj> + Clone {
        (0..self.objects.len() as u32).map(Obj)
    }

    pub fn arrows(&self) -> impl ExactSizeIterator<Item = Arr> + Clone {
        (0..self.arrows.len() as u32).map(Arr)
    }

    pub fn obj_name(&self, x: Obj) -> &str {
        &self.objects[x.idx()]
    }

    pub fn arr_name(&self, a: Arr) -> &str {
        &self.arrows[a.idx()]
    }

    pub fn obj(&self, name: &str) -> Result<Obj> {
        self.obj_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn arr(&self, name: &str) -> Result<Arr> {
        self.arr_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownArrow(name.to_string()))
    }

    #[inline]
    pub fn src(&self, a: Arr) -> Obj {
        self.src[a.idx()]
    }

    #[inline]
    pub fn tgt(&self, a: Arr) -> Obj {
        self.tgt[a.idx()]
    }

    /// Identity of `x`. Panics if the table has none (invalid category).
    #[inline]
    pub fn id(&self, x: Obj) -> Arr {
        let i = self.identity[x.idx()];
        assert!(i != NONE, "object `{}` has no identity", self.obj_name(x));
        Arr(i)
    }

    pub fn try_id(&self, x: Obj) -> Option<Arr> {
        let i = self.identity[x.idx()];
        (i != NONE).then_some(Arr(i))
    }

    pub fn is_identity(&self, a: Arr) -> bool {
        self.identity[self.src(a).idx()] == a.0
    }

    /// `g ∘ f`. Panics if the pair is not in the table.
    #[inline]
    pub fn comp(&self, g: Arr, f: Arr) -> Arr {
        let h = self.compose[g.idx() * self.arrows.len() + f.idx()];
        debug_assert!(h != NONE, "missing composite");
        Arr(h)
    }

    pub fn try_comp(&self, g: Arr, f: Arr) -> Option<Arr> {
        let h = self.compose[g.idx() * self.arrows.len() + f.idx()];
        (h != NONE).then_some(Arr(h))
    }

    /// Arrows `x → y`, in identifier order.
    #[inline]
    pub fn hom(&self, x: Obj, y: Obj) -> &[Arr] {
        &self.hom[x.idx() * self.objects.len() + y.idx()]
    }

    /// Name-level hom-set lookup.
    pub fn hom_by_name(&self, x: &str, y: &str) -> Result<&[Arr]> {
        Ok(self.hom(self.obj(x)?, self.obj(y)?))
    }

    /// All arrows with target `x`.
    #[inline]
    pub fn ins(&self, x: Obj) -> &[Arr] {
        &self.ins[x.idx()]
    }

    /// All arrows with source `x`.
    #[inline]
    pub fn outs(&self, x: Obj) -> &[Arr] {
        &self.outs[x.idx()]
    }

    pub fn max_hom_size(&self) -> usize {
        self.hom.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// At most one arrow between any two objects.
    pub fn is_thin(&self) -> bool {
        self.hom.iter().all(|h| h.len() <= 1)
    }

    /// Least two-sided inverse of `a`, if any.
    pub fn inverse(&self, a: Arr) -> Option<Arr> {
        let (s, t) = (self.src(a), self.tgt(a));
        self.hom(t, s)
            .iter()
            .copied()
            .find(|&b| self.comp(b, a) == self.id(s) && self.comp(a, b) == self.id(t))
    }

    pub fn is_iso(&self, a: Arr) -> bool {
        self.inverse(a).is_some()
    }

    /// The opposite category, freshly built. Identifiers are unchanged and
    /// the name toggles a `^op` suffix, so `c.opposite().opposite() == c`.
    pub fn opposite(&self) -> FinCat {
        let n = self.arrows.len();
        let mut compose = vec![NONE; n * n];
        for g in 0..n {
            for f in 0..n {
                compose[g * n + f] = self.compose[f * n + g];
            }
        }
        let name = match self.name.strip_suffix("^op") {
            Some(base) => base.to_string(),
            None => format!("{}^op", self.name),
        };
        let mut spurious: Vec<_> = self.spurious.iter().map(|&(g, f, h)| (f, g, h)).collect();
        spurious.sort();
        FinCat::assemble(
            name,
            self.objects.clone(),
            self.arrows.clone(),
            self.tgt.clone(),
            self.src.clone(),
            self.identity.clone(),
            compose,
            spurious,
            self.obj_index.clone(),
            self.arr_index.clone(),
        )
    }

    /// Cached opposite category.
    pub fn op(&self) -> &FinCat {
        self.op.get_or_init(|| Box::new(self.opposite()))
    }

    /// Check the category axioms, collecting every violation.
    pub fn validate(&self) -> ValidationReport {
        let mut v = Vec::new();
        let n = self.arrows.len();
        for x in self.objects() {
            match self.try_id(x) {
                None => v.push(Violation::MissingIdentity {
                    object: self.obj_name(x).to_string(),
                }),
                Some(i) if self.src(i) != x || self.tgt(i) != x => {
                    v.push(Violation::IdentityEndpoints {
                        object: self.obj_name(x).to_string(),
                        arrow: self.arr_name(i).to_string(),
                    })
                }
                Some(_) => {}
            }
        }
        for &(g, f, h) in &self.spurious {
            v.push(Violation::SpuriousComposite {
                after: self.arr_name(g).to_string(),
                first: self.arr_name(f).to_string(),
                result: self.arr_name(h).to_string(),
            });
        }
        for g in self.arrows() {
            for f in self.arrows() {
                if self.tgt(f) != self.src(g) {
                    continue;
                }
                match self.try_comp(g, f) {
                    None => v.push(Violation::MissingComposite {
                        after: self.arr_name(g).to_string(),
                        first: self.arr_name(f).to_string(),
                    }),
                    Some(h) if self.src(h) != self.src(f) || self.tgt(h) != self.tgt(g) => {
                        v.push(Violation::CompositeEndpoints {
                            after: self.arr_name(g).to_string(),
                            first: self.arr_name(f).to_string(),
                            result: self.arr_name(h).to_string(),
                        })
                    }
                    Some(_) => {}
                }
            }
        }
        for f in self.arrows() {
            if let Some(i) = self.try_id(self.src(f)) {
                if let Some(h) = self.try_comp(f, i) {
                    if h != f {
                        v.push(Violation::RightIdentity {
                            arrow: self.arr_name(f).to_string(),
                            identity: self.arr_name(i).to_string(),
                        });
                    }
                }
            }
            if let Some(i) = self.try_id(self.tgt(f)) {
                if let Some(h) = self.try_comp(i, f) {
                    if h != f {
                        v.push(Violation::LeftIdentity {
                            arrow: self.arr_name(f).to_string(),
                            identity: self.arr_name(i).to_string(),
                        });
                    }
                }
            }
        }
        for f in 0..n {
            for g in self.outs(self.tgt[f]) {
                let Some(gf) = self.try_comp(*g, Arr(f as u32)) else {
                    continue;
                };
                for h in self.outs(self.tgt(*g)) {
                    let (Some(hg), Some(lhs)) = (self.try_comp(*h, *g), self.try_comp(*h, gf))
                    else {
                        continue;
                    };
                    let Some(rhs) = self.try_comp(hg, Arr(f as u32)) else {
                        continue;
                    };
                    if lhs != rhs {
                        v.push(Violation::Associativity {
                            h: self.arr_name(*h).to_string(),
                            g: self.arr_name(*g).to_string(),
                            f: self.arr_name(Arr(f as u32)).to_string(),
                        });
                    }
                }
            }
        }
        ValidationReport { violations: v }
    }

    /// Canonical name-level form: everything in identifier order, the full
    /// composition table included.
    pub fn to_data(&self) -> CategoryData {
        let mut d = CategoryData::new(self.name.clone());
        d.objects = self.objects.clone();
        for a in self.arrows() {
            d.arrow(
                self.arr_name(a),
                self.obj_name(self.src(a)),
                self.obj_name(self.tgt(a)),
            );
        }
        for x in self.objects() {
            if let Some(i) = self.try_id(x) {
                d.identity(self.obj_name(x), self.arr_name(i));
            }
        }
        for g in self.arrows() {
            for f in self.arrows() {
                if let Some(h) = self.try_comp(g, f) {
                    d.compose(self.arr_name(g), self.arr_name(f), self.arr_name(h));
                }
            }
        }
        for &(g, f, h) in &self.spurious {
            d.compose(self.arr_name(g), self.arr_name(f), self.arr_name(h));
        }
        d
    }

    /// Full subcategory on the objects satisfying `keep`.
    pub fn full_subcategory(&self, name: impl Into<String>, keep: impl Fn(Obj) -> bool) -> FinCat {
        self.subcategory(name, &keep, |a| keep(self.src(a)) && keep(self.tgt(a)))
    }

    /// Subcategory on the kept objects and arrows. The caller guarantees the
    /// arrow selection is closed under composition and contains identities.
    pub fn subcategory(
        &self,
        name: impl Into<String>,
        keep_obj: impl Fn(Obj) -> bool,
        keep_arr: impl Fn(Arr) -> bool,
    ) -> FinCat {
        let mut d = CategoryData::new(name);
        for x in self.objects().filter(|&x| keep_obj(x)) {
            d.object(self.obj_name(x));
            if let Some(i) = self.try_id(x) {
                d.identity(self.obj_name(x), self.arr_name(i));
            }
        }
        let kept: Vec<Arr> = self.arrows().filter(|&a| keep_arr(a)).collect();
        for &a in &kept {
            d.arrow(
                self.arr_name(a),
                self.obj_name(self.src(a)),
                self.obj_name(self.tgt(a)),
            );
        }
        for &g in &kept {
            for &f in &kept {
                if let Some(h) = self.try_comp(g, f) {
                    d.compose(self.arr_name(g), self.arr_name(f), self.arr_name(h));
                }
            }
        }
        d.build().expect("subcategory of a resolved category")
    }
}

impl Clone for FinCat {
    fn clone(&self) -> Self {
        FinCat {
            name: self.name.clone(),
            objects: self.objects.clone(),
            arrows: self.arrows.clone(),
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            identity: self.identity.clone(),
            compose: self.compose.clone(),
            spurious: self.spurious.clone(),
            hom: self.hom.clone(),
            ins: self.ins.clone(),
            outs: self.outs.clone(),
            obj_index: self.obj_index.clone(),
            arr_index: self.arr_index.clone(),
            op: OnceLock::new(),
        }
    }
}

impl PartialEq for FinCat {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.objects == other.objects
            && self.arrows == other.arrows
            && self.src == other.src
            && self.tgt == other.tgt
            && self.identity == other.identity
            && self.compose == other.compose
            && self.spurious == other.spurious
    }
}

impl Eq for FinCat {}

impl fmt::Debug for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCat")
            .field("name", &self.name)
            .field("objects", &self.objects.len())
            .field("arrows", &self.arrows.len())
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    MissingIdentity { object: String },
    IdentityEndpoints { object: String, arrow: String },
    MissingComposite { after: String, first: String },
    SpuriousComposite { after: String, first: String, result: String },
    CompositeEndpoints { after: String, first: String, result: String },
    LeftIdentity { arrow: String, identity: String },
    RightIdentity { arrow: String, identity: String },
    Associativity { h: String, g: String, f: String },
    // functor violations
    Unmapped { what: String },
    FunctorEndpoints { arrow: String },
    FunctorIdentity { object: String },
    FunctorComposition { after: String, first: String },
    // pseudofunctor violations
    NotAPoset { object: String, detail: String },
    TransitionShape { arrow: String, detail: String },
    NotMonotone { arrow: String, x: String, y: String },
    IdentityTransition { object: String, element: String },
    CompositeTransition { after: String, first: String, element: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            MissingIdentity { object } => write!(f, "object `{object}` has no identity"),
            IdentityEndpoints { object, arrow } => {
                write!(f, "identity `{arrow}` of `{object}` is not an endo-arrow of it")
            }
            MissingComposite { after, first } => {
                write!(f, "missing composite `{after}` after `{first}`")
            }
            SpuriousComposite { after, first, result } => write!(
                f,
                "composite `{after}` after `{first}` = `{result}` given for a non-composable pair"
            ),
            CompositeEndpoints { after, first, result } => write!(
                f,
                "composite `{after}` after `{first}` = `{result}` has wrong endpoints"
            ),
            LeftIdentity { arrow, identity } => {
                write!(f, "identity law fails: `{identity}` after `{arrow}` is not `{arrow}`")
            }
            RightIdentity { arrow, identity } => {
                write!(f, "identity law fails: `{arrow}` after `{identity}` is not `{arrow}`")
            }
            Associativity { h, g, f: ff } => {
                write!(f, "associativity fails on (`{h}`, `{g}`, `{ff}`)")
            }
            Unmapped { what } => write!(f, "`{what}` is not mapped"),
            FunctorEndpoints { arrow } => {
                write!(f, "image of `{arrow}` does not connect the images of its endpoints")
            }
            FunctorIdentity { object } => {
                write!(f, "identity of `{object}` is not sent to an identity")
            }
            FunctorComposition { after, first } => {
                write!(f, "composite `{after}` after `{first}` is not preserved")
            }
            NotAPoset { object, detail } => write!(f, "fiber poset over `{object}`: {detail}"),
            TransitionShape { arrow, detail } => write!(f, "transition of `{arrow}`: {detail}"),
            NotMonotone { arrow, x, y } => write!(
                f,
                "transition of `{arrow}` is not monotone on `{x}` <= `{y}`"
            ),
            IdentityTransition { object, element } => write!(
                f,
                "transition of the identity of `{object}` moves `{element}`"
            ),
            CompositeTransition { after, first, element } => write!(
                f,
                "transition of `{after}` after `{first}` disagrees with the composite of transitions at `{element}`"
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "violation: {v}")?;
        }
        Ok(())
    }
}

/// Builds categories whose arrows are functions between finite carriers.
/// Composition is function composition, so the result is always a category.
pub struct ConcreteBuilder {
    name: String,
    objects: Vec<(String, usize)>,
    arrows: Vec<(String, usize, usize, Vec<usize>)>,
    index: HashMap<(usize, usize, Vec<usize>), usize>,
}

impl ConcreteBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        ConcreteBuilder {
            name: name.into(),
            objects: Vec::new(),
            arrows: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// Adds an object with carrier `{0, …, size-1}` and returns its position.
    pub fn object(&mut self, id: impl Into<String>, size: usize) -> usize {
        self.objects.push((id.into(), size));
        self.objects.len() - 1
    }

    pub fn carrier(&self, obj: usize) -> usize {
        self.objects[obj].1
    }

    pub fn object_name(&self, obj: usize) -> &str {
        &self.objects[obj].0
    }

    pub fn has_arrow(&self, src: usize, tgt: usize, table: &[usize]) -> bool {
        self.index.contains_key(&(src, tgt, table.to_vec()))
    }

    /// Adds the arrow `src → tgt` acting by `table`; returns false if it was
    /// already present.
    pub fn arrow(&mut self, id: impl Into<String>, src: usize, tgt: usize, table: Vec<usize>) -> bool {
        assert_eq!(table.len(), self.objects[src].1);
        debug_assert!(table.iter().all(|&v| v < self.objects[tgt].1));
        let key = (src, tgt, table.clone());
        if self.index.contains_key(&key) {
            return false;
        }
        self.index.insert(key, self.arrows.len());
        self.arrows.push((id.into(), src, tgt, table));
        true
    }

    /// Current arrows as `(src, tgt, table)`.
    pub fn arrow_tables(&self) -> impl Iterator<Item = (usize, usize, &[usize])> {
        self.arrows.iter().map(|(_, s, t, tab)| (*s, *t, tab.as_slice()))
    }

    /// Adds identities and closes the arrow set under composition, naming new
    /// arrows with `namer(src, tgt, table)`.
    pub fn close(&mut self, namer: impl Fn(&Self, usize, usize, &[usize]) -> String) {
        for o in 0..self.objects.len() {
            let table: Vec<usize> = (0..self.objects[o].1).collect();
            if !self.has_arrow(o, o, &table) {
                let id = namer(self, o, o, &table);
                self.arrow(id, o, o, table);
            }
        }
        loop {
            let mut added = false;
            let n = self.arrows.len();
            for i in 0..n {
                for j in 0..n {
                    let (_, fs, ft, ftab) = &self.arrows[j];
                    let (_, gs, gt, gtab) = &self.arrows[i];
                    if ft != gs {
                        continue;
                    }
                    let table: Vec<usize> = ftab.iter().map(|&x| gtab[x]).collect();
                    let (fs, gt) = (*fs, *gt);
                    if !self.has_arrow(fs, gt, &table) {
                        let id = namer(self, fs, gt, &table);
                        self.arrow(id, fs, gt, table);
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
    }

    /// Builds the category. All identities must be present and the arrow set
    /// closed under composition (see [`ConcreteBuilder::close`]).
    pub fn build(&self) -> FinCat {
        let mut d = CategoryData::new(self.name.clone());
        for (id, _) in &self.objects {
            d.object(id.clone());
        }
        for (id, s, t, _) in &self.arrows {
            d.arrow(id.clone(), self.objects[*s].0.clone(), self.objects[*t].0.clone());
        }
        for (o, (oid, size)) in self.objects.iter().enumerate() {
            let table: Vec<usize> = (0..*size).collect();
            let i = self.index[&(o, o, table)];
            d.identity(oid.clone(), self.arrows[i].0.clone());
        }
        for (gid, gs, gt, gtab) in &self.arrows {
            for (fid, fs, ft, ftab) in &self.arrows {
                if ft != gs {
                    continue;
                }
                let table: Vec<usize> = ftab.iter().map(|&x| gtab[x]).collect();
                let h = self.index[&(*fs, *gt, table)];
                d.compose(gid.clone(), fid.clone(), self.arrows[h].0.clone());
            }
        }
        d.build().expect("concrete category identifiers are consistent")
    }
}

/// Poset (or preorder) category: objects `elements`, one arrow `x → y` when
/// `le(x, y)`. `le` must be reflexive and transitive.
pub fn preorder_category(
    name: impl Into<String>,
    elements: &[String],
    le: impl Fn(usize, usize) -> bool,
    arrow_name: impl Fn(&str, &str) -> String,
) -> FinCat {
    let mut d = CategoryData::new(name);
    for e in elements {
        d.object(e.clone());
    }
    let n = elements.len();
    for i in 0..n {
        for j in 0..n {
            if le(i, j) {
                d.arrow(arrow_name(&elements[i], &elements[j]), &elements[i], &elements[j]);
            }
        }
        d.identity(&elements[i], arrow_name(&elements[i], &elements[i]));
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if le(i, j) && le(j, k) {
                    d.compose(
                        arrow_name(&elements[j], &elements[k]),
                        arrow_name(&elements[i], &elements[j]),
                        arrow_name(&elements[i], &elements[k]),
                    );
                }
            }
        }
    }
    d.build().expect("preorder identifiers are consistent")
}

/// Category with a single object and only its identity.
pub fn terminal_category(name: impl Into<String>) -> FinCat {
    let mut d = CategoryData::new(name);
    d.object("*").arrow("id", "*", "*").identity("*", "id").compose("id", "id", "id");
    d.build().unwrap()
}

/// Discrete category on the given objects.
pub fn discrete_category(name: impl Into<String>, objects: &[&str]) -> FinCat {
    let mut d = CategoryData::new(name);
    for o in objects {
        let id = format!("id_{o}");
        d.object(*o).arrow(&id, *o, *o).identity(*o, &id).compose(&id, &id, &id);
    }
    d.build().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interval() -> FinCat {
        let mut d = CategoryData::new("I");
        d.object("a").object("b");
        d.arrow("ida", "a", "a").arrow("idb", "b", "b").arrow("f", "a", "b");
        d.identity("a", "ida").identity("b", "idb");
        d.compose("ida", "ida", "ida")
            .compose("idb", "idb", "idb")
            .compose("f", "ida", "f")
            .compose("idb", "f", "f");
        d.build().unwrap()
    }

    #[test]
    fn terminal_is_valid_and_hom_is_identity() {
        let t = terminal_category("1");
        assert!(t.validate().is_valid());
        let x = t.obj("*").unwrap();
        assert_eq!(t.hom(x, x), &[t.id(x)]);
    }

    #[test]
    fn injected_identity_violation_is_reported() {
        let mut d = interval().to_data();
        // f ∘ ida := ida is ill-typed and breaks the right identity law
        for c in &mut d.compositions {
            if c.after == "f" && c.first == "ida" {
                c.result = "ida".into();
            }
        }
        let r = d.build().unwrap().validate();
        assert!(r.violations.iter().any(|v| matches!(v,
            Violation::RightIdentity { arrow, identity } if arrow == "f" && identity == "ida")));
    }

    #[test]
    fn missing_composite_is_reported() {
        let mut d = interval().to_data();
        d.compositions.retain(|c| !(c.after == "idb" && c.first == "f"));
        let r = d.build().unwrap().validate();
        assert_eq!(
            r.violations,
            vec![Violation::MissingComposite {
                after: "idb".into(),
                first: "f".into()
            }]
        );
    }

    #[test]
    fn unknown_identifiers_are_input_errors() {
        let mut d = interval().to_data();
        d.arrow("g", "a", "c");
        assert!(matches!(d.build(), Err(Error::UnknownObject(o)) if o == "c"));
        let c = interval();
        assert!(c.hom_by_name("a", "zz").is_err());
    }

    #[test]
    fn discrete_hom_is_empty() {
        let c = discrete_category("D", &["a", "b"]);
        assert!(c.validate().is_valid());
        assert!(c.hom_by_name("a", "b").unwrap().is_empty());
    }

    #[test]
    fn opposite_is_an_involution() {
        let c = interval();
        let op = c.opposite();
        assert_eq!(op.hom_by_name("b", "a").unwrap().len(), 1);
        assert!(op.validate().is_valid());
        assert_eq!(op.opposite(), c);
    }

    #[test]
    fn opposite_of_poset_reverses_order() {
        let els: Vec<String> = ["0", "1", "2"].iter().map(|s| s.to_string()).collect();
        let p = preorder_category("chain", &els, |i, j| i <= j, |a, b| format!("{a}<={b}"));
        assert!(p.validate().is_valid());
        let q = p.opposite();
        for i in 0..3 {
            for j in 0..3 {
                let (x, y) = (&els[i], &els[j]);
                assert_eq!(q.hom_by_name(x, y).unwrap().len(), usize::from(j <= i));
            }
        }
    }

    #[test]
    fn concrete_builder_closes_under_composition() {
        let mut b = ConcreteBuilder::new("M");
        let o = b.object("2", 2);
        b.arrow("swap", o, o, vec![1, 0]);
        b.arrow("c0", o, o, vec![0, 0]);
        b.close(|_, _, _, t| format!("f{t:?}"));
        let c = b.build();
        assert!(c.validate().is_valid());
        // swap and c0 generate all four self-maps of a 2-set
        assert_eq!(c.num_arrows(), 4);
    }
}
