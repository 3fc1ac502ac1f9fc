//! Dense interval linear algebra.
//!
//! Matrices are lists of rows. Nothing enforces a rectangular shape, and dot
//! products follow `zip` semantics: the longer operand is truncated. The
//! back-substitution in [`solve`] relies on that truncation to skip the
//! augmented column.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Element type of an interval matrix: a set-valued number with sound
/// ring operations and a reciprocal that refuses to divide by zero.
pub trait Entry: Clone + Send + Sync {
    fn zero() -> Self;
    fn add(&self, other: &Self) -> Result<Self>;
    fn mul(&self, other: &Self) -> Result<Self>;
    fn neg(&self) -> Self;
    fn recip(&self) -> Result<Self>;
    fn from_scalar(x: Scalar) -> Self;
    /// Upper bound on the magnitude, used only to choose pivots.
    fn magnitude_ub(&self) -> f64;

    fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.recip()?)
    }
}

impl Entry for Scalar {
    fn zero() -> Self {
        Scalar::ZERO
    }
    fn add(&self, other: &Self) -> Result<Self> {
        Scalar::add(*self, *other)
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        Scalar::mul(*self, *other)
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn recip(&self) -> Result<Self> {
        Scalar::recip(*self)
    }
    fn from_scalar(x: Scalar) -> Self {
        x
    }
    fn magnitude_ub(&self) -> f64 {
        self.abs().hi()
    }
}

pub type Matrix<T> = Vec<Vec<T>>;

/// `sum (zipWith (*) a b)`, summed left to right from zero.
pub fn dot<T: Entry>(a: &[T], b: &[T]) -> Result<T> {
    a.iter()
        .zip(b)
        .try_fold(T::zero(), |acc, (x, y)| acc.add(&x.mul(y)?))
}

pub fn apply<T: Entry>(m: &[Vec<T>], x: &[T]) -> Result<Vec<T>> {
    debug_assert!(
        m.iter().all(|row| row.len() == x.len()),
        "apply: matrix columns do not match vector length"
    );
    m.iter().map(|row| dot(x, row)).collect()
}

/// `m - x I`.
pub fn subtract_diag<T: Entry>(m: &[Vec<T>], x: &T) -> Result<Matrix<T>> {
    m.iter()
        .enumerate()
        .map(|(k, row)| {
            let mut row = row.clone();
            if let Some(t) = row.get_mut(k) {
                *t = t.sub(x)?;
            }
            Ok(row)
        })
        .collect()
}

/// Encloses the solutions of `m x = b` for every member of `[m]`, `[b]`.
///
/// Gaussian elimination with partial pivoting on the augmented matrix
/// `[m b]`, solved recursively: pivot, eliminate the first column, solve the
/// trailing system, back-substitute.
pub fn solve<T: Entry>(m: &[Vec<T>], b: &[T]) -> Result<Vec<T>> {
    debug_assert_eq!(m.len(), b.len(), "solve: row count does not match rhs");
    let augmented: Matrix<T> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let mut x = solve_augmented_many(augmented, 1)?;
    Ok(x.pop().unwrap_or_default())
}

/// Solves `m x = b_j` for every right-hand side `b_j` at once.
///
/// Row operations depend only on the matrix part, so each column of the
/// result is identical to a separate [`solve`] with that right-hand side.
pub fn solve_many<T: Entry>(m: &[Vec<T>], rhs: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    let n = m.len();
    debug_assert!(rhs.iter().all(|b| b.len() == n));
    let augmented: Matrix<T> = (0..n)
        .map(|i| {
            let mut r = m[i].clone();
            r.extend(rhs.iter().map(|b| b[i].clone()));
            r
        })
        .collect();
    solve_augmented_many(augmented, rhs.len())
}

// Iterative form of the recursive solver: the forward sweep records each
// pivot row, the backward sweep replays the back-substitution from the
// innermost level outward.
fn solve_augmented_many<T: Entry>(mut rows: Matrix<T>, nrhs: usize) -> Result<Vec<Vec<T>>> {
    let mut pivots: Vec<Vec<T>> = Vec::with_capacity(rows.len());
    while !rows.is_empty() {
        partial_pivot(&mut rows);
        let top = rows.remove(0);
        rows = eliminate(&top, rows)?;
        pivots.push(top);
    }
    // solutions[j] is built back to front
    let mut solutions: Vec<Vec<T>> = vec![Vec::with_capacity(pivots.len()); nrhs];
    for top in pivots.iter().rev() {
        let (m11, m1t) = top.split_first().expect("pivot row is nonempty");
        let ncoef = m1t.len() - nrhs;
        for (j, x) in solutions.iter_mut().enumerate() {
            // x holds the trailing unknowns in reverse order
            let tail: Vec<T> = x.iter().rev().cloned().collect();
            let s = dot(&m1t[..ncoef], &tail)?;
            let xi = m1t[ncoef + j].sub(&s)?.div(m11)?;
            x.push(xi);
        }
    }
    for x in &mut solutions {
        x.reverse();
    }
    Ok(solutions)
}

/// Moves the row whose leading entry has the largest magnitude bound to the
/// top, keeping the remaining rows in order. Ties go to the first row.
fn partial_pivot<T: Entry>(rows: &mut Matrix<T>) {
    let mut best = 0;
    let mut best_mag = f64::NEG_INFINITY;
    for (i, row) in rows.iter().enumerate() {
        let mag = row.first().map_or(f64::NEG_INFINITY, Entry::magnitude_ub);
        if mag > best_mag {
            best = i;
            best_mag = mag;
        }
    }
    if best != 0 {
        let piv = rows.remove(best);
        rows.insert(0, piv);
    }
}

/// Adds `-(r / m11)` times the pivot row to each remaining row and drops
/// the first column.
fn eliminate<T: Entry>(top: &[T], rest: Matrix<T>) -> Result<Matrix<T>> {
    let (m11, m1t) = top.split_first().expect("pivot row is nonempty");
    let inv = m11.recip()?;
    rest.into_iter()
        .map(|row| {
            let (r, rs) = row.split_first().expect("row is nonempty");
            let s = r.mul(&inv)?.neg();
            m1t.iter()
                .zip(rs)
                .map(|(a, b)| a.mul(&s)?.add(b))
                .collect::<Result<Vec<T>>>()
        })
        .collect()
}

/// Every `(prefix, suffix)` cut with a nonempty suffix.
pub fn splits<T: Clone>(x: &[T]) -> Vec<(Vec<T>, Vec<T>)> {
    (0..x.len())
        .map(|k| (x[..k].to_vec(), x[k..].to_vec()))
        .collect()
}

/// `[a0, b0, a1, b1, ...]`, truncated to the shorter list.
pub fn interleave<T: Clone>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| [x.clone(), y.clone()])
        .collect()
}

pub fn pairs<T: Clone>(c: &[T]) -> Result<Vec<(T, T)>> {
    if c.len() % 2 != 0 {
        return Err(Error::OddLength(c.len()));
    }
    Ok(c.chunks_exact(2)
        .map(|p| (p[0].clone(), p[1].clone()))
        .collect())
}

pub fn uninterleave<T: Clone>(c: &[T]) -> Result<(Vec<T>, Vec<T>)> {
    Ok(pairs(c)?.into_iter().unzip())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix<Scalar> {
        rows.iter()
            .map(|r| r.iter().copied().map(Scalar::point).collect())
            .collect()
    }

    fn v(x: &[f64]) -> Vec<Scalar> {
        x.iter().copied().map(Scalar::point).collect()
    }

    fn assert_contains(got: &[Scalar], want: &[f64]) {
        assert_eq!(got.len(), want.len());
        for (g, &w) in got.iter().zip(want) {
            assert!(g.contains(w), "{g:?} misses {w}");
        }
    }

    #[test]
    fn apply_examples() {
        let a = m(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert_contains(&apply(&a, &v(&[1.0, 1.0])).unwrap(), &[3.0, 7.0]);
        let id = m(&[&[1.0, 0.0], &[0.0, 1.0]]);
        assert_contains(&apply(&id, &v(&[0.3, -2.0])).unwrap(), &[0.3, -2.0]);
        // short vector: zip truncation
        let r: Vec<Scalar> = a.iter().map(|row| dot(&v(&[1.0]), row).unwrap()).collect();
        assert_contains(&r, &[1.0, 3.0]);
    }

    #[test]
    fn solve_examples() {
        let x = solve(&m(&[&[2.0, 0.0], &[0.0, 4.0]]), &v(&[2.0, 8.0])).unwrap();
        assert_contains(&x, &[1.0, 2.0]);
        let x = solve(&m(&[&[0.0, 1.0], &[1.0, 0.0]]), &v(&[3.0, 4.0])).unwrap();
        assert_contains(&x, &[4.0, 3.0]);
        let x = solve(&m(&[&[1.0, 2.0, 0.5], &[3.0, -1.0, 2.0], &[0.0, 1.0, 4.0]]), &v(&[3.5, 4.0, 5.0]))
            .unwrap();
        assert_contains(&x, &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn solve_singular_aborts() {
        let r = solve(&m(&[&[1.0, 2.0], &[2.0, 4.0]]), &v(&[1.0, 2.0]));
        assert!(matches!(r, Err(Error::RecipNotWellDefined { .. })));
    }

    #[test]
    fn solve_many_matches_single_solves() {
        let a = m(&[&[4.0, 1.0, -1.0], &[2.0, 5.0, 1.0], &[1.0, -2.0, 6.0]]);
        let rhs = vec![v(&[1.0, 2.0, 3.0]), v(&[-0.5, 0.25, 7.0])];
        let many = solve_many(&a, &rhs).unwrap();
        for (b, x) in rhs.iter().zip(&many) {
            assert_eq!(&solve(&a, b).unwrap(), x);
        }
    }

    #[test]
    fn subtract_diag_examples() {
        let a = m(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let r = subtract_diag(&a, &Scalar::ONE).unwrap();
        assert_eq!(r[0][1], Scalar::point(2.0));
        assert_eq!(r[1][0], Scalar::point(3.0));
        assert!(r[0][0].contains(0.0) && r[1][1].contains(3.0));
        let r0 = subtract_diag(&a, &Scalar::ZERO).unwrap();
        assert!(r0[0][0].contains(1.0) && r0[1][1].contains(4.0) && r0[0][1] == a[0][1]);
        let z = subtract_diag(&m(&[&[1.0, 0.0], &[0.0, 1.0]]), &Scalar::ONE).unwrap();
        assert!(z.iter().flatten().all(|c| c.contains(0.0)));
    }

    #[test]
    fn list_utilities() {
        assert_eq!(interleave(&[1, 2], &[3, 4]), vec![1, 3, 2, 4]);
        assert_eq!(uninterleave(&[1, 3, 2, 4]).unwrap(), (vec![1, 2], vec![3, 4]));
        assert_eq!(pairs(&[1, 2, 3]), Err(Error::OddLength(3)));
        assert_eq!(
            splits(&[1, 2]),
            vec![(vec![], vec![1, 2]), (vec![1], vec![2])]
        );
        assert!(splits::<i32>(&[]).is_empty());
    }
}
