//! Exact sparse linear algebra over ℚ for the Čech solver.

use std::collections::BTreeMap;

use num::Zero;

use crate::ratlaurent::Rational;

/// A sparse vector indexed by row labels.
pub type SparseVec = BTreeMap<i64, Rational>;

fn axpy(y: &mut SparseVec, a: &Rational, x: &SparseVec) {
    for (r, c) in x {
        let e = y.entry(*r).or_insert_with(Rational::zero);
        *e += a * c;
        if e.is_zero() {
            y.remove(r);
        }
    }
}

/// Incrementally built row-echelon basis of a column span.
#[derive(Default, Clone, Debug)]
pub struct Echelon {
    /// Pivot row → reduced vector with entry 1 at the pivot.
    pivots: BTreeMap<i64, SparseVec>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut w = v.clone();
        for (p, b) in &self.pivots {
            if let Some(c) = w.get(p).cloned() {
                axpy(&mut w, &-c, b);
            }
        }
        w
    }

    /// Adds `v`; returns whether it was independent of the span so far.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let w = self.reduce(v);
        let Some((&p, c)) = w.iter().next() else {
            return false;
        };
        let inv = Rational::from_integer(1.into()) / c;
        let w: SparseVec = w.iter().map(|(r, x)| (*r, x * &inv)).collect();
        for b in self.pivots.values_mut() {
            if let Some(c) = b.get(&p).cloned() {
                axpy(b, &-c, &w);
            }
        }
        self.pivots.insert(p, w);
        true
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }
}

/// Solves `Σ x_j cols[j] = target` exactly; free variables are set to zero.
/// Returns `None` when the system is inconsistent.
pub fn solve(cols: &[SparseVec], target: &SparseVec) -> Option<Vec<Rational>> {
    // Gauss–Jordan on the augmented matrix, stored column-wise by row.
    let mut rows: BTreeMap<i64, (BTreeMap<usize, Rational>, Rational)> = BTreeMap::new();
    for (j, col) in cols.iter().enumerate() {
        for (r, c) in col {
            rows.entry(*r).or_default().0.insert(j, c.clone());
        }
    }
    for (r, c) in target {
        rows.entry(*r).or_default().1 = c.clone();
    }
    let mut rows: Vec<(BTreeMap<usize, Rational>, Rational)> = rows.into_values().collect();
    let mut pivot_of_row: Vec<Option<usize>> = vec![None; rows.len()];
    let mut done = 0;
    for j in 0..cols.len() {
        let Some(p) = (done..rows.len()).find(|&r| rows[r].0.get(&j).is_some_and(|c| !c.is_zero())) else {
            continue;
        };
        rows.swap(done, p);
        let inv = Rational::from_integer(1.into()) / &rows[done].0[&j];
        let (pr, pb) = {
            let (m, b) = &rows[done];
            (
                m.iter().map(|(k, x)| (*k, x * &inv)).collect::<BTreeMap<_, _>>(),
                b * &inv,
            )
        };
        for (r, row) in rows.iter_mut().enumerate() {
            if r == done {
                continue;
            }
            if let Some(c) = row.0.get(&j).cloned() {
                for (k, x) in &pr {
                    let e = row.0.entry(*k).or_insert_with(Rational::zero);
                    *e -= &c * x;
                    if e.is_zero() {
                        row.0.remove(k);
                    }
                }
                row.1 -= &c * &pb;
            }
        }
        rows[done] = (pr, pb);
        pivot_of_row[done] = Some(j);
        done += 1;
    }
    if rows[done..].iter().any(|(_, b)| !b.is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols.len()];
    for (r, p) in pivot_of_row.iter().enumerate() {
        if let Some(j) = p {
            x[*j] = rows[r].1.clone();
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlaurent::rat;
    use proptest::prelude::*;

    fn vecs(entries: &[(i64, i64)]) -> SparseVec {
        entries.iter().filter(|(_, c)| *c != 0).map(|&(r, c)| (r, rat(c, 1))).collect()
    }

    #[test]
    fn small_system() {
        let cols = [vecs(&[(0, 1), (1, 1)]), vecs(&[(1, 1), (2, 2)])];
        let x = solve(&cols, &vecs(&[(0, 1), (1, 3), (2, 4)])).unwrap();
        assert_eq!(x, vec![rat(1, 1), rat(2, 1)]);
        assert!(solve(&cols, &vecs(&[(2, 1)])).is_none());
        let mut e = Echelon::default();
        assert!(e.insert(&cols[0]));
        assert!(e.insert(&cols[1]));
        assert!(!e.insert(&vecs(&[(0, 2), (1, 5), (2, 6)])));
        assert_eq!(e.rank(), 2);
    }

    proptest! {
        #[test]
        fn solutions_reproduce_targets(
            raw in proptest::collection::vec(proptest::collection::vec(-3i64..4, 5), 1..5),
            coeffs in proptest::collection::vec(-3i64..4, 5),
        ) {
            let cols: Vec<SparseVec> = raw
                .iter()
                .map(|c| vecs(&c.iter().enumerate().map(|(r, &x)| (r as i64, x)).collect::<Vec<_>>()))
                .collect();
            let mut target = SparseVec::new();
            for (j, c) in cols.iter().enumerate() {
                axpy(&mut target, &rat(coeffs[j], 1), c);
            }
            let x = solve(&cols, &target).expect("target is in the span");
            let mut back = SparseVec::new();
            for (j, c) in cols.iter().enumerate() {
                axpy(&mut back, &x[j], c);
            }
            prop_assert_eq!(back, target);
        }
    }
}
