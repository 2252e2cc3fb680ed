use std::collections::HashMap;

use super::{CribleIndex, Family, Orientation};
use crate::error::{Error, Result};
use crate::fincat::{Arr, FinCat, Obj};
use crate::mask::Mask;

/// `g ↦ (g ∘ f_α)_α` is injective on every `hom(X, Y)`.
pub fn is_epi_family(c: &FinCat, f: &Family) -> Result<bool> {
    f.expect(Orientation::Sink)?;
    Ok(epi_members(c, f.anchor, &f.members))
}

/// Dual of [`is_epi_family`] for a source family.
pub fn is_mono_family(c: &FinCat, f: &Family) -> Result<bool> {
    f.expect(Orientation::Source)?;
    Ok(epi_members(c.op(), f.anchor, &f.members))
}

fn epi_members(c: &FinCat, x: Obj, members: &[Arr]) -> bool {
    c.objects().all(|y| injective_on(c, c.hom(x, y), members))
}

fn injective_on(c: &FinCat, hom: &[Arr], members: &[Arr]) -> bool {
    let mut seen: Vec<Vec<Arr>> = Vec::with_capacity(hom.len());
    hom.iter().all(|&g| {
        let img: Vec<Arr> = members.iter().map(|&a| c.comp(g, a)).collect();
        if seen.contains(&img) {
            false
        } else {
            seen.push(img);
            true
        }
    })
}

/// Pairs `(x_α, x_β)` with a common domain and `f_α ∘ x_α = f_β ∘ x_β`, for
/// every `α ≤ β` (pairs with `x_α = x_β` omitted when `α = β`).
struct Spans {
    n: usize,
    pairs: Vec<Vec<(Arr, Arr)>>,
}

impl Spans {
    fn new(c: &FinCat, members: &[Arr]) -> Spans {
        let n = members.len();
        let mut pairs = vec![Vec::new(); n * n];
        for a in 0..n {
            for b in a..n {
                let (fa, fb) = (members[a], members[b]);
                let (xa, xb) = (c.src(fa), c.src(fb));
                let out = &mut pairs[a * n + b];
                for z in c.objects() {
                    for &p in c.hom(z, xa) {
                        let lhs = c.comp(fa, p);
                        for &q in c.hom(z, xb) {
                            if (a != b || p != q) && lhs == c.comp(fb, q) {
                                out.push((p, q));
                            }
                        }
                    }
                }
            }
        }
        Spans { n, pairs }
    }

    #[inline]
    fn get(&self, a: usize, b: usize) -> &[(Arr, Arr)] {
        &self.pairs[a * self.n + b]
    }

    /// Assignment `g[..=b]` respects every span between `b` and an earlier
    /// (or the same) index.
    fn consistent(&self, c: &FinCat, g: &[Arr], b: usize) -> bool {
        (0..=b).all(|a| {
            self.get(a, b)
                .iter()
                .all(|&(p, q)| c.comp(g[a], p) == c.comp(g[b], q))
        })
    }
}

/// Number of families over `y` compatible with `members`, counting up to
/// `cap` (the search stops once `cap` is reached).
fn count_compatible(c: &FinCat, spans: &Spans, members: &[Arr], y: Obj, cap: usize) -> usize {
    let n = members.len();
    let mut g = Vec::with_capacity(n);
    let mut count = 0;
    fn go(
        c: &FinCat,
        spans: &Spans,
        members: &[Arr],
        y: Obj,
        g: &mut Vec<Arr>,
        count: &mut usize,
        cap: usize,
    ) {
        if *count >= cap {
            return;
        }
        let b = g.len();
        if b == members.len() {
            *count += 1;
            return;
        }
        for &cand in c.hom(c.src(members[b]), y) {
            g.push(cand);
            if spans.consistent(c, g, b) {
                go(c, spans, members, y, g, count, cap);
            }
            g.pop();
            if *count >= cap {
                return;
            }
        }
    }
    go(c, spans, members, y, &mut g, &mut count, cap);
    count
}

/// Number of families with codomain `y` compatible with the sink family
/// `f`, counted up to `cap`.
pub fn compatible_count(c: &FinCat, f: &Family, y: Obj, cap: usize) -> Result<usize> {
    f.expect(Orientation::Sink)?;
    let spans = Spans::new(c, &f.members);
    Ok(count_compatible(c, &spans, &f.members, y, cap))
}

/// `g` is compatible with `f`: equal composites against `f` force equal
/// composites against `g`. Both are sink families with the same index set
/// and per-index domains.
pub fn is_compatible(c: &FinCat, g: &Family, f: &Family) -> Result<bool> {
    g.expect(Orientation::Sink)?;
    f.expect(Orientation::Sink)?;
    if g.len() != f.len() {
        return Err(Error::IndexMismatch(format!(
            "{} members against {}",
            g.len(),
            f.len()
        )));
    }
    for (i, (&a, &b)) in g.members.iter().zip(&f.members).enumerate() {
        if c.src(a) != c.src(b) {
            return Err(Error::IndexMismatch(format!(
                "index {i}: `{}` and `{}` have different domains",
                c.arr_name(a),
                c.arr_name(b)
            )));
        }
    }
    let spans = Spans::new(c, &f.members);
    Ok((0..g.len()).all(|b| spans.consistent(c, &g.members, b)))
}

/// Every compatible family over every `Y` has exactly one mediating arrow.
/// Decided by counting: mediation is injective (the family is epi) and
/// there are as many compatible families as arrows `X → Y`.
fn strict_epi_members(c: &FinCat, x: Obj, members: &[Arr]) -> bool {
    let mut m = members.to_vec();
    m.sort();
    m.dedup();
    if !epi_members(c, x, &m) {
        return false;
    }
    let spans = Spans::new(c, &m);
    c.objects().all(|y| {
        let h = c.hom(x, y).len();
        count_compatible(c, &spans, &m, y, h + 1) == h
    })
}

pub fn is_strict_epi_family(c: &FinCat, f: &Family) -> Result<bool> {
    f.expect(Orientation::Sink)?;
    Ok(strict_epi_members(c, f.anchor, &f.members))
}

pub fn is_strict_mono_family(c: &FinCat, f: &Family) -> Result<bool> {
    f.expect(Orientation::Source)?;
    Ok(strict_epi_members(c.op(), f.anchor, &f.members))
}

/// Memoized epi and strict-epi verdicts for sink families of one category.
///
/// Both properties depend only on the crible a family generates, so
/// verdicts are cached per `(anchor, crible)` and computed on a small
/// generating set of the crible.
pub struct SinkOracle {
    pub index: CribleIndex,
    epi: HashMap<(Obj, Mask), bool>,
    strict: HashMap<(Obj, Mask), bool>,
}

impl SinkOracle {
    pub fn new(c: &FinCat) -> Result<SinkOracle> {
        Ok(SinkOracle {
            index: CribleIndex::new(c)?,
            epi: HashMap::new(),
            strict: HashMap::new(),
        })
    }

    pub fn epi_crible(&mut self, c: &FinCat, x: Obj, crible: Mask) -> bool {
        if let Some(&v) = self.epi.get(&(x, crible)) {
            return v;
        }
        let gens = self.index.generators(c, x, crible);
        let v = epi_members(c, x, &gens);
        self.epi.insert((x, crible), v);
        v
    }

    pub fn strict_epi_crible(&mut self, c: &FinCat, x: Obj, crible: Mask) -> bool {
        if let Some(&v) = self.strict.get(&(x, crible)) {
            return v;
        }
        let gens = self.index.generators(c, x, crible);
        let v = strict_epi_members(c, x, &gens);
        self.strict.insert((x, crible), v);
        v
    }

    pub fn is_epi(&mut self, c: &FinCat, f: &Family) -> bool {
        let m = self.index.crible(f);
        self.epi_crible(c, f.anchor, m)
    }

    pub fn is_strict_epi(&mut self, c: &FinCat, f: &Family) -> bool {
        let m = self.index.crible(f);
        self.strict_epi_crible(c, f.anchor, m)
    }
}
