//! Bit sets over small universes and subset enumeration.

use std::fmt;
use std::ops::ControlFlow;

/// A subset of a universe of at most 128 elements.
pub type Mask = u128;

pub const MAX_UNIVERSE: usize = 128;

/// Subset counts above this are enumerated only up to a family-size bound.
pub const DEFAULT_SUBSET_BUDGET: u64 = 1 << 24;

#[inline]
pub fn bit(i: usize) -> Mask {
    1u128 << i
}

#[inline]
pub fn full(n: usize) -> Mask {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

#[inline]
pub fn contains(m: Mask, i: usize) -> bool {
    m >> i & 1 == 1
}

#[inline]
pub fn is_subset(a: Mask, b: Mask) -> bool {
    a & !b == 0
}

/// Indices of set bits, increasing.
pub fn bits(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// Whether an enumeration covered every family or stopped at a size bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Exactness {
    Exact,
    Bounded(usize),
}

impl Exactness {
    pub fn combine(self, other: Exactness) -> Exactness {
        match (self, other) {
            (Exactness::Exact, e) | (e, Exactness::Exact) => e,
            (Exactness::Bounded(a), Exactness::Bounded(b)) => Exactness::Bounded(a.min(b)),
        }
    }

    pub fn is_exact(self) -> bool {
        self == Exactness::Exact
    }
}

impl fmt::Display for Exactness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exactness::Exact => write!(f, "EXACT"),
            Exactness::Bounded(k) => write!(f, "BOUNDED(families of size <= {k})"),
        }
    }
}

/// Limit on the size of enumerated families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[derive(Default)]
pub enum Bound {
    /// Every family, unless the universe is too large for the subset
    /// budget, in which case the largest affordable size is used.
    #[default]
    Auto,
    AtMost(usize),
}


/// Number of subsets of an `n`-set with at most `k` elements, saturating.
pub fn subsets_up_to(n: usize, k: usize) -> u64 {
    let mut total: u64 = 0;
    let mut c: u128 = 1;
    for i in 0..=k.min(n) {
        total = total.saturating_add(c.min(u64::MAX as u128) as u64);
        c = c * (n - i) as u128 / (i + 1) as u128;
        if c > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    total
}

impl Bound {
    /// The family-size limit to use for a universe of `n` elements, and
    /// whether the enumeration is then exhaustive.
    pub fn resolve(self, n: usize) -> (usize, Exactness) {
        let k = match self {
            Bound::AtMost(k) => k.min(n),
            Bound::Auto => {
                let mut k = n;
                while k > 0 && subsets_up_to(n, k) > DEFAULT_SUBSET_BUDGET {
                    k -= 1;
                }
                k
            }
        };
        if k >= n {
            (n, Exactness::Exact)
        } else {
            (k, Exactness::Bounded(k))
        }
    }
}

/// Depth-first walk over all subsets of `0..n` with at most `max` elements.
/// `step(acc, i)` extends the accumulator by element `i`; `visit` sees
/// every subset once (the empty one first). Returning `Break` stops.
pub fn walk_subsets<A: Clone>(
    n: usize,
    max: usize,
    init: A,
    step: &mut impl FnMut(&A, usize) -> A,
    visit: &mut impl FnMut(&A, &[usize]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let mut stack = Vec::with_capacity(max);
    walk(0, n, max, &init, &mut stack, step, visit)
}

fn walk<A: Clone>(
    from: usize,
    n: usize,
    max: usize,
    acc: &A,
    stack: &mut Vec<usize>,
    step: &mut impl FnMut(&A, usize) -> A,
    visit: &mut impl FnMut(&A, &[usize]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    visit(acc, stack)?;
    if stack.len() == max {
        return ControlFlow::Continue(());
    }
    for i in from..n {
        let next = step(acc, i);
        stack.push(i);
        let r = walk(i + 1, n, max, &next, stack, step, visit);
        stack.pop();
        r?;
    }
    ControlFlow::Continue(())
}

/// Subsets of `0..n` with at most `max` elements, by increasing size and
/// lexicographically within a size.
pub fn subsets_by_size(n: usize, max: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..=max.min(n)).flat_map(move |k| Combinations::new(n, k))
}

struct Combinations {
    n: usize,
    cur: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            cur: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.clone()?;
        let k = out.len();
        let mut c = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            if c[i] < self.n - k + i {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
                self.cur = Some(c);
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walk_visits_every_subset_once() {
        let mut seen = Vec::new();
        let _ = walk_subsets(4, 4, 0u128, &mut |a, i| a | bit(i), &mut |m, _| {
            seen.push(*m);
            ControlFlow::Continue(())
        });
        seen.sort();
        assert_eq!(seen, (0..16).collect::<Vec<u128>>());
    }

    #[test]
    fn by_size_counts_match_binomials() {
        assert_eq!(subsets_by_size(5, 2).count(), 1 + 5 + 10);
        assert_eq!(subsets_up_to(5, 2), 16);
        let v: Vec<_> = subsets_by_size(3, 3).collect();
        assert_eq!(v.first().unwrap(), &Vec::<usize>::new());
        assert_eq!(v.last().unwrap(), &vec![0, 1, 2]);
        assert_eq!(v.len(), 8);
    }

    #[test]
    fn auto_bound_degrades_on_large_universes() {
        assert_eq!(Bound::Auto.resolve(10), (10, Exactness::Exact));
        let (k, e) = Bound::Auto.resolve(60);
        assert!(k < 60 && e == Exactness::Bounded(k));
        assert!(subsets_up_to(60, k) <= DEFAULT_SUBSET_BUDGET);
    }
}
