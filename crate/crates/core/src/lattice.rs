//! Finite preorders: meets, complete lattices and adjoints of monotone maps.

use crate::fincat::{preorder_category, FinCat};

/// A finite preorder on named elements, stored as its full relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinPoset {
    pub elements: Vec<String>,
    le: Vec<bool>,
}

impl FinPoset {
    /// Reflexive-transitive closure of `edges` (`(a, b)` meaning `a ≤ b`).
    pub fn from_edges(elements: Vec<String>, edges: &[(usize, usize)]) -> FinPoset {
        let n = elements.len();
        let mut le = vec![false; n * n];
        for i in 0..n {
            le[i * n + i] = true;
        }
        for &(a, b) in edges {
            le[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if le[i * n + k] {
                    for j in 0..n {
                        if le[k * n + j] {
                            le[i * n + j] = true;
                        }
                    }
                }
            }
        }
        FinPoset { elements, le }
    }

    /// `le` must be reflexive and transitive.
    pub fn from_relation(elements: Vec<String>, le: impl Fn(usize, usize) -> bool) -> FinPoset {
        let n = elements.len();
        let mut rel = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                rel[i * n + j] = le(i, j);
            }
        }
        FinPoset { elements, le: rel }
    }

    /// The preorder of a thin category (`x ≤ y` when there is an arrow).
    pub fn of_category(c: &FinCat) -> FinPoset {
        FinPoset::from_relation(
            c.objects().map(|x| c.obj_name(x).to_string()).collect(),
            |i, j| !c.hom(crate::fincat::Obj(i as u32), crate::fincat::Obj(j as u32)).is_empty(),
        )
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    #[inline]
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.le[a * self.len() + b]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    /// First pair `a ≠ b` with `a ≤ b ≤ a`, if any.
    pub fn antisymmetry_failure(&self) -> Option<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .find(|&(a, b)| self.le(a, b) && self.le(b, a))
    }

    pub fn is_poset(&self) -> bool {
        self.antisymmetry_failure().is_none()
    }

    /// Covering pairs (the Hasse diagram); for a preorder, the strict part
    /// of the relation with no element strictly in between.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let lt = |a: usize, b: usize| self.le(a, b) && !self.le(b, a);
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a == b || !self.le(a, b) {
                    continue;
                }
                if self.le(b, a) {
                    // equivalent elements: keep one edge each way
                    out.push((a, b));
                    continue;
                }
                if !(0..n).any(|c| lt(a, c) && lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// A greatest lower bound of `subset` (least index among equivalent
    /// ones); the empty meet is a top element.
    pub fn meet(&self, subset: &[usize]) -> Option<usize> {
        let lower: Vec<usize> = (0..self.len())
            .filter(|&x| subset.iter().all(|&s| self.le(x, s)))
            .collect();
        lower
            .iter()
            .copied()
            .find(|&m| lower.iter().all(|&x| self.le(x, m)))
    }

    /// A least upper bound of `subset`.
    pub fn join(&self, subset: &[usize]) -> Option<usize> {
        let upper: Vec<usize> = (0..self.len())
            .filter(|&x| subset.iter().all(|&s| self.le(s, x)))
            .collect();
        upper
            .iter()
            .copied()
            .find(|&m| upper.iter().all(|&x| self.le(m, x)))
    }

    pub fn top(&self) -> Option<usize> {
        self.meet(&[])
    }

    pub fn bottom(&self) -> Option<usize> {
        self.join(&[])
    }

    /// Every subset has a meet. For a finite preorder it suffices that a
    /// top element and all binary meets exist.
    pub fn is_complete_lattice(&self) -> bool {
        let n = self.len();
        self.top().is_some() && (0..n).all(|a| (a + 1..n).all(|b| self.meet(&[a, b]).is_some()))
    }

    /// The first pair without a meet, or `None` for the missing top.
    pub fn lattice_failure(&self) -> Option<Option<(usize, usize)>> {
        if self.top().is_none() {
            return Some(None);
        }
        let n = self.len();
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .find(|&(a, b)| self.meet(&[a, b]).is_none())
            .map(Some)
    }

    pub fn to_category(&self, name: &str) -> FinCat {
        preorder_category(name, &self.elements, |i, j| self.le(i, j), |a, b| format!("{a}<={b}"))
    }

    pub fn equivalent(&self, a: usize, b: usize) -> bool {
        self.le(a, b) && self.le(b, a)
    }
}

/// `f: P → Q` given as a table is monotone.
pub fn is_monotone(p: &FinPoset, q: &FinPoset, f: &[usize]) -> bool {
    (0..p.len()).all(|a| (0..p.len()).all(|b| !p.le(a, b) || q.le(f[a], f[b])))
}

/// The left adjoint `g: Q → P` of a monotone `f: P → Q`, if it exists:
/// `g(y) ≤ x ⟺ y ≤ f(x)`. Each `g(y)` is the least `x` with `y ≤ f(x)`;
/// the adjunction is then verified on all pairs.
pub fn left_adjoint(p: &FinPoset, q: &FinPoset, f: &[usize]) -> Option<Vec<usize>> {
    let mut g = Vec::with_capacity(q.len());
    for y in 0..q.len() {
        let above: Vec<usize> = (0..p.len()).filter(|&x| q.le(y, f[x])).collect();
        let least = above
            .iter()
            .copied()
            .find(|&m| above.iter().all(|&x| p.le(m, x)))?;
        g.push(least);
    }
    let ok = (0..q.len()).all(|y| (0..p.len()).all(|x| p.le(g[y], x) == q.le(y, f[x])));
    ok.then_some(g)
}

/// `f` sends every existing meet (including the empty one) to a meet of the
/// images.
pub fn preserves_meets(p: &FinPoset, q: &FinPoset, f: &[usize]) -> bool {
    let n = p.len();
    let image_meet = |subset: &[usize], m: usize| {
        let imgs: Vec<usize> = subset.iter().map(|&s| f[s]).collect();
        q.meet(&imgs).is_some_and(|mm| q.equivalent(mm, f[m]))
    };
    let top_ok = p.top().map_or(true, |t| image_meet(&[], t));
    top_ok
        && (0..n).all(|a| {
            (a + 1..n).all(|b| p.meet(&[a, b]).map_or(true, |m| image_meet(&[a, b], m)))
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    fn diamond() -> FinPoset {
        // 0 < 1, 2 < 3
        FinPoset::from_edges(names(4), &[(0, 1), (0, 2), (1, 3), (2, 3)])
    }

    #[test]
    fn diamond_is_a_complete_lattice() {
        let d = diamond();
        assert!(d.is_complete_lattice());
        assert_eq!(d.meet(&[1, 2]), Some(0));
        assert_eq!(d.join(&[1, 2]), Some(3));
        assert_eq!(d.top(), Some(3));
        assert_eq!(d.hasse_edges().len(), 4);
    }

    #[test]
    fn antichain_is_not() {
        let a = FinPoset::from_edges(names(2), &[]);
        assert!(!a.is_complete_lattice());
        assert_eq!(a.lattice_failure(), Some(None));
    }

    #[test]
    fn identity_is_its_own_left_adjoint() {
        let d = diamond();
        let id: Vec<usize> = (0..4).collect();
        assert_eq!(left_adjoint(&d, &d, &id), Some(id.clone()));
        assert!(preserves_meets(&d, &d, &id));
    }

    #[test]
    fn meet_breaking_map_has_no_left_adjoint() {
        let d = diamond();
        let chain = FinPoset::from_edges(names(2), &[(0, 1)]);
        // 0 ↦ 0, everything else ↦ 1: the meet of 1 and 2 is not preserved
        let f = vec![0, 1, 1, 1];
        assert!(is_monotone(&d, &chain, &f));
        assert!(!preserves_meets(&d, &chain, &f));
        assert_eq!(left_adjoint(&d, &chain, &f), None);
        // constant top map: adjoint sends everything to the bottom
        let top = vec![1, 1, 1, 1];
        assert_eq!(left_adjoint(&d, &chain, &top), Some(vec![0, 0]));
    }
}
