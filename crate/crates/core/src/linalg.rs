//! Exact row reduction over a field.

use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::scalar::Scalar;

/// Reduced row echelon form of a set of row vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct RowSpace<T> {
    cols: usize,
    rows: Vec<Vec<T>>,
    pivots: Vec<usize>,
}

impl<T: Scalar> RowSpace<T> {
    pub fn new(cols: usize, rows: impl IntoIterator<Item = Vec<T>>) -> Self {
        let mut m: Vec<Vec<T>> = rows
            .into_iter()
            .map(|mut r| {
                r.resize(cols, T::zero());
                r
            })
            .collect();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for col in 0..cols {
            let Some(p) = (lead..m.len()).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(lead, p);
            let inv = T::one() / m[lead][col].clone();
            for v in m[lead].iter_mut() {
                *v = v.clone() * inv.clone();
            }
            for r in 0..m.len() {
                if r != lead && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in col..cols {
                        let d = m[lead][c].clone() * f.clone();
                        m[r][c] = m[r][c].clone() - d;
                    }
                }
            }
            pivots.push(col);
            lead += 1;
            if lead == m.len() {
                break;
            }
        }
        m.truncate(lead);
        Self {
            cols,
            rows: m,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn basis(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Remainder of `v` after eliminating every pivot column; zero iff `v`
    /// lies in the row space.
    pub fn reduce(&self, v: &[T]) -> Vec<T> {
        let mut v: Vec<T> = v.to_vec();
        v.resize(self.cols, T::zero());
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for c in p..self.cols {
                v[c] = v[c].clone() - row[c].clone() * f.clone();
            }
        }
        v
    }

    pub fn contains(&self, v: &[T]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Is the unit vector `e_col` in the span?
    pub fn contains_unit(&self, col: usize) -> bool {
        let mut e = vec![T::zero(); self.cols];
        e[col] = T::one();
        self.contains(&e)
    }
}

impl<T: Scalar> Serialize for RowSpace<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RowSpace", 3)?;
        st.serialize_field("rank", &self.rank())?;
        st.serialize_field("pivots", &self.pivots)?;
        st.serialize_field("basis", &to_strings(&self.rows))?;
        st.end()
    }
}

pub fn rank<T: Scalar>(cols: usize, rows: impl IntoIterator<Item = Vec<T>>) -> usize {
    RowSpace::new(cols, rows).rank()
}

/// Solves `x * A = b` for the row-coefficient vector `x`, where `A` has the
/// given rows. Returns `None` when `b` is outside the row space or the rows
/// are dependent (no unique solution).
pub fn solve_left<T: Scalar>(rows: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let n = rows.len();
    let cols = b.len();
    // Augment each column of A^T | b^T and reduce: unknowns are row weights.
    let system: Vec<Vec<T>> = (0..cols)
        .map(|c| {
            let mut eq: Vec<T> = rows.iter().map(|r| r[c].clone()).collect();
            eq.push(b[c].clone());
            eq
        })
        .collect();
    let rs = RowSpace::new(n + 1, system);
    if rs.pivots.contains(&n) || rs.rank() != n {
        return None;
    }
    let mut x = vec![T::zero(); n];
    for (row, &p) in rs.rows.iter().zip(&rs.pivots) {
        x[p] = row[n].clone();
    }
    Some(x)
}

pub fn to_strings<T: Scalar>(m: &[Vec<T>]) -> Vec<Vec<String>> {
    m.iter()
        .map(|r| r.iter().map(|v| v.to_string()).collect())
        .collect()
}

pub fn is_diagonal<T: Scalar>(m: &[Vec<T>]) -> bool {
    m.iter()
        .enumerate()
        .all(|(i, r)| r.iter().enumerate().all(|(j, v)| i == j || v.is_zero()))
}

pub fn identity<T: Scalar>(n: usize) -> Vec<Vec<T>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { T::one() } else { T::zero() })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn row(v: &[i64]) -> Vec<Rational> {
        v.iter()
            .map(|&x| Rational::from_integer(x.into()))
            .collect()
    }

    #[test]
    fn rank_and_membership() {
        let rs = RowSpace::new(3, vec![row(&[1, 2, 3]), row(&[2, 4, 6]), row(&[0, 1, 1])]);
        assert_eq!(rs.rank(), 2);
        assert!(rs.contains(&row(&[1, 3, 4])));
        assert!(!rs.contains(&row(&[0, 0, 1])));
        assert_eq!(rs.pivots(), &[0, 1]);
    }

    #[test]
    fn empty_and_zero_rows() {
        let rs = RowSpace::<Rational>::new(4, Vec::new());
        assert_eq!(rs.rank(), 0);
        assert!(rs.contains(&row(&[0, 0, 0, 0])));
        assert!(!rs.contains_unit(2));
        assert_eq!(rank(2, vec![row(&[0, 0])]), 0);
    }

    #[test]
    fn solve_left_recovers_weights() {
        let rows = vec![row(&[1, 0, 1]), row(&[0, 1, 1])];
        let x = solve_left(&rows, &row(&[2, -3, -1])).unwrap();
        assert_eq!(x, row(&[2, -3]));
        assert!(solve_left(&rows, &row(&[0, 0, 1])).is_none());
    }

    #[test]
    fn diagonal_check() {
        assert!(is_diagonal(&identity::<Rational>(3)));
        assert!(!is_diagonal(&[row(&[1, 1]), row(&[0, 1])]));
    }
}
