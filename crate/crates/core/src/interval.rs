//! Finite unions of half-open rational subintervals of `[0,1)`.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::Error;
use crate::rational::{format_exact, Rational};

/// A finite union of disjoint half-open intervals `[l, r)` with
/// `0 <= l < r <= 1`.
///
/// Intervals are kept sorted and maximally merged: for consecutive
/// intervals `r_i < l_{i+1}`. Two sets describing the same subset of
/// `[0,1)` therefore have identical representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IntervalSet {
    intervals: Vec<(Rational, Rational)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The whole unit interval `[0,1)`.
    pub fn full() -> Self {
        Self {
            intervals: vec![(Rational::zero(), Rational::one())],
        }
    }

    pub fn interval(left: Rational, right: Rational) -> Result<Self, Error> {
        Self::from_intervals(vec![(left, right)])
    }

    /// Builds a set from arbitrary intervals, merging overlaps and
    /// adjacent pieces. Each interval must satisfy `0 <= l < r <= 1`.
    pub fn from_intervals(mut intervals: Vec<(Rational, Rational)>) -> Result<Self, Error> {
        for (l, r) in &intervals {
            if l < &Rational::zero() || r > &Rational::one() || l >= r {
                return Err(Error::InvalidInterval(format!(
                    "[{},{}) must satisfy 0 <= l < r <= 1",
                    format_exact(l),
                    format_exact(r)
                )));
            }
        }
        intervals.sort();
        Ok(Self {
            intervals: merge_sorted(intervals),
        })
    }

    /// Sum of interval lengths.
    pub fn measure(&self) -> Rational {
        self.intervals
            .iter()
            .fold(Rational::zero(), |acc, (l, r)| acc + (r - l))
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.intervals.len() == 1
            && self.intervals[0].0.is_zero()
            && self.intervals[0].1.is_one()
    }

    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = std::cmp::max(&a[i].0, &b[j].0);
            let hi = std::cmp::min(&a[i].1, &b[j].1);
            if lo < hi {
                out.push((lo.clone(), hi.clone()));
            }
            if a[i].1 < b[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        // Pieces of two merged sets cannot touch, so no further merging.
        Self { intervals: out }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut all: Vec<_> = self
            .intervals
            .iter()
            .chain(other.intervals.iter())
            .cloned()
            .collect();
        all.sort();
        Self {
            intervals: merge_sorted(all),
        }
    }

    /// `[0,1) \ self`.
    pub fn complement(&self) -> Self {
        let mut out = Vec::new();
        let mut cursor = Rational::zero();
        for (l, r) in &self.intervals {
            if &cursor < l {
                out.push((cursor.clone(), l.clone()));
            }
            cursor = r.clone();
        }
        if cursor < Rational::one() {
            out.push((cursor, Rational::one()));
        }
        Self { intervals: out }
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersection(&other.complement())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.intervals.iter().any(|(l, r)| l <= x && x < r)
    }
}

fn merge_sorted(sorted: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
    let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(sorted.len());
    for (l, r) in sorted {
        match out.last_mut() {
            Some(last) if l <= last.1 => {
                if r > last.1 {
                    last.1 = r;
                }
            }
            _ => out.push((l, r)),
        }
    }
    out
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("{}");
        }
        let parts: Vec<String> = self
            .intervals
            .iter()
            .map(|(l, r)| format!("[{},{})", format_exact(l), format_exact(r)))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn set(pairs: &[(i64, i64, i64, i64)]) -> IntervalSet {
        IntervalSet::from_intervals(
            pairs
                .iter()
                .map(|&(a, b, c, d)| (rat(a, b), rat(c, d)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn adjacent_intervals_merge() {
        let s = set(&[(1, 2, 1, 1), (0, 1, 1, 2)]);
        assert!(s.is_full());
        assert_eq!(s.intervals().len(), 1);
    }

    #[test]
    fn overlapping_intervals_merge() {
        let s = set(&[(0, 1, 1, 2), (1, 4, 3, 4)]);
        assert_eq!(s, set(&[(0, 1, 3, 4)]));
        assert_eq!(s.measure(), rat(3, 4));
    }

    #[test]
    fn rejects_bad_intervals() {
        assert!(IntervalSet::interval(rat(1, 2), rat(1, 2)).is_err());
        assert!(IntervalSet::interval(rat(-1, 2), rat(1, 2)).is_err());
        assert!(IntervalSet::interval(rat(1, 2), int(2)).is_err());
    }

    #[test]
    fn intersection_and_complement() {
        let a = set(&[(0, 1, 1, 2)]);
        let b = set(&[(1, 4, 3, 4)]);
        assert_eq!(a.intersection(&b), set(&[(1, 4, 1, 2)]));
        assert_eq!(a.complement(), set(&[(1, 2, 1, 1)]));
        assert!(IntervalSet::full().complement().is_empty());
        assert!(IntervalSet::empty().complement().is_full());
        assert_eq!(b.difference(&a), set(&[(1, 2, 3, 4)]));
        // touching but disjoint pieces
        assert!(a.intersection(&a.complement()).is_empty());
    }

    #[test]
    fn membership_is_half_open() {
        let a = set(&[(0, 1, 1, 2)]);
        assert!(a.contains(&int(0)));
        assert!(!a.contains(&rat(1, 2)));
    }

    #[test]
    fn display() {
        assert_eq!(set(&[(0, 1, 91, 300)]).to_string(), "[0,91/300)");
        assert_eq!(IntervalSet::empty().to_string(), "{}");
    }
}
