//! Smith normal form over ℤ with overflow-checked `i64` arithmetic.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::matrix::{Matrix, SparseMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SnfError {
    #[error("integer overflow during Smith normal form (entries exceed 64 bits)")]
    OverflowWithoutBigInt,
}

fn add(a: i64, b: i64) -> Result<i64, SnfError> {
    a.checked_add(b).ok_or(SnfError::OverflowWithoutBigInt)
}

fn mul(a: i64, b: i64) -> Result<i64, SnfError> {
    a.checked_mul(b).ok_or(SnfError::OverflowWithoutBigInt)
}

/// Invariant factors `d_1 | d_2 | ...` (nonzero only) and, on request,
/// unimodular `u`, `v` with `u · M · v = diag(d_1, d_2, ...)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub factors: Vec<i64>,
    pub u: Option<Matrix>,
    pub v: Option<Matrix>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Factors greater than one.
    pub fn torsion(&self) -> Vec<i64> {
        self.factors.iter().copied().filter(|&d| d > 1).collect()
    }
}

struct Reducer {
    a: Matrix,
    u: Option<Matrix>,
    v: Option<Matrix>,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        for m in std::iter::once(&mut self.a).chain(self.u.as_mut()) {
            for j in 0..m.cols() {
                let t = m.get(i, j);
                m.set(i, j, m.get(k, j));
                m.set(k, j, t);
            }
        }
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        if j == k {
            return;
        }
        for m in std::iter::once(&mut self.a).chain(self.v.as_mut()) {
            for i in 0..m.rows() {
                let t = m.get(i, j);
                m.set(i, j, m.get(i, k));
                m.set(i, k, t);
            }
        }
    }

    /// row[dst] += q · row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: i64) -> Result<(), SnfError> {
        for m in std::iter::once(&mut self.a).chain(self.u.as_mut()) {
            for j in 0..m.cols() {
                let s = m.get(src, j);
                if s != 0 {
                    m.set(dst, j, add(m.get(dst, j), mul(q, s)?)?);
                }
            }
        }
        Ok(())
    }

    /// col[dst] += q · col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: i64) -> Result<(), SnfError> {
        for m in std::iter::once(&mut self.a).chain(self.v.as_mut()) {
            for i in 0..m.rows() {
                let s = m.get(i, src);
                if s != 0 {
                    m.set(i, dst, add(m.get(i, dst), mul(q, s)?)?);
                }
            }
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) {
        for m in std::iter::once(&mut self.a).chain(self.u.as_mut()) {
            for j in 0..m.cols() {
                m.set(i, j, -m.get(i, j));
            }
        }
    }

    fn run(&mut self) -> Result<Vec<i64>, SnfError> {
        let (rows, cols) = (self.a.rows(), self.a.cols());
        let mut t = 0;
        while t < rows.min(cols) {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = self.a.get(i, j);
                    if x != 0 && best.is_none_or(|(bi, bj)| x.unsigned_abs() < self.a.get(bi, bj).unsigned_abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let p = self.a.get(t, t);
                let mut clean = true;
                for i in t + 1..rows {
                    let x = self.a.get(i, t);
                    if x != 0 {
                        self.add_row(i, t, -(x / p))?;
                        clean &= self.a.get(i, t) == 0;
                    }
                }
                for j in t + 1..cols {
                    let x = self.a.get(t, j);
                    if x != 0 {
                        self.add_col(j, t, -(x / p))?;
                        clean &= self.a.get(t, j) == 0;
                    }
                }
                if !clean {
                    // A remainder smaller than the pivot is left in row or column t.
                    let mut best = (t, t);
                    for i in t + 1..rows {
                        let x = self.a.get(i, t);
                        if x != 0 && x.unsigned_abs() < self.a.get(best.0, best.1).unsigned_abs() {
                            best = (i, t);
                        }
                    }
                    for j in t + 1..cols {
                        let x = self.a.get(t, j);
                        if x != 0 && x.unsigned_abs() < self.a.get(best.0, best.1).unsigned_abs() {
                            best = (t, j);
                        }
                    }
                    self.swap_rows(t, best.0);
                    self.swap_cols(t, best.1);
                    continue;
                }
                let bad_row = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| self.a.get(i, j) % p != 0));
                match bad_row {
                    Some(i) => self.add_row(t, i, 1)?,
                    None => break,
                }
            }
            if self.a.get(t, t) < 0 {
                self.negate_row(t);
            }
            t += 1;
        }
        Ok((0..t).map(|i| self.a.get(i, i)).collect())
    }
}

/// Smith normal form of a dense matrix.
pub fn smith_normal_form(m: &Matrix, transforms: bool) -> Result<SmithForm, SnfError> {
    let mut r = Reducer {
        a: m.clone(),
        u: transforms.then(|| Matrix::identity(m.rows())),
        v: transforms.then(|| Matrix::identity(m.cols())),
    };
    let factors = r.run()?;
    Ok(SmithForm { factors, u: r.u, v: r.v })
}

/// Nonzero invariant factors of a sparse matrix.
///
/// Entries equal to ±1 are eliminated first (each contributes a factor 1
/// and removes its row and column); whatever remains goes through the dense
/// reduction.
pub fn invariant_factors(m: &SparseMatrix) -> Result<Vec<i64>, SnfError> {
    let mut rows: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); m.rows()];
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols()];
    for (i, j, v) in m.triples() {
        rows[i].insert(j, v);
        cols[j].insert(i);
    }

    let mut units = 0usize;
    loop {
        let mut progress = false;
        for c in 0..cols.len() {
            let pivot = cols[c]
                .iter()
                .copied()
                .filter(|&r| rows[r][&c].abs() == 1)
                .min_by_key(|&r| (rows[r].len(), r));
            let Some(r) = pivot else { continue };
            let pivot_row = std::mem::take(&mut rows[r]);
            let sign = pivot_row[&c];
            for &j in pivot_row.keys() {
                cols[j].remove(&r);
            }
            let others: Vec<usize> = cols[c].iter().copied().collect();
            for r2 in others {
                let f = mul(rows[r2][&c], sign)?;
                for (&j, &x) in &pivot_row {
                    let cur = rows[r2].get(&j).copied().unwrap_or(0);
                    let new = add(cur, -mul(f, x)?)?;
                    if new == 0 {
                        rows[r2].remove(&j);
                        cols[j].remove(&r2);
                    } else {
                        rows[r2].insert(j, new);
                        cols[j].insert(r2);
                    }
                }
            }
            debug_assert!(cols[c].is_empty());
            units += 1;
            progress = true;
        }
        if !progress {
            break;
        }
    }

    let live_rows: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i].is_empty()).collect();
    let live_cols: Vec<usize> = (0..cols.len()).filter(|&j| !cols[j].is_empty()).collect();
    let mut factors = vec![1; units];
    if !live_rows.is_empty() {
        let col_pos: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(k, &j)| (j, k)).collect();
        let mut dense = Matrix::zeros(live_rows.len(), live_cols.len());
        for (k, &i) in live_rows.iter().enumerate() {
            for (&j, &v) in &rows[i] {
                dense.set(k, col_pos[&j], v);
            }
        }
        factors.extend(smith_normal_form(&dense, false)?.factors);
    }
    factors.sort_unstable();
    Ok(factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn factors(rows: &[Vec<i64>]) -> Vec<i64> {
        smith_normal_form(&Matrix::from_rows(rows), false).unwrap().factors
    }

    #[test]
    fn examples() {
        assert_eq!(factors(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(factors(&[vec![0, 0], vec![0, 0]]), Vec::<i64>::new());
        assert_eq!(factors(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]), vec![1, 1, 1]);
        assert_eq!(factors(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]), vec![2, 6, 12]);
        assert_eq!(factors(&[vec![4, 6]]), vec![2]);
    }

    #[test]
    fn empty_shapes() {
        assert!(smith_normal_form(&Matrix::zeros(0, 3), true).unwrap().factors.is_empty());
        assert!(invariant_factors(&SparseMatrix::zeros(3, 0)).unwrap().is_empty());
    }

    #[test]
    fn overflow_is_reported() {
        let big = i64::MAX / 2 + 7;
        let m = Matrix::from_rows(&[vec![big, big - 1], vec![big - 3, big]]);
        assert_eq!(smith_normal_form(&m, false), Err(SnfError::OverflowWithoutBigInt));
    }

    fn small_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-4i64..=4, r * c).prop_map(move |data| {
                let rows: Vec<Vec<i64>> = data.chunks(c).map(<[i64]>::to_vec).collect();
                Matrix::from_rows(&rows)
            })
        })
    }

    fn det(m: &Matrix) -> i64 {
        // Laplace expansion; only used on tiny unimodular transforms.
        let n = m.rows();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let minor_rows: Vec<Vec<i64>> = (1..n)
                    .map(|i| (0..n).filter(|&k| k != j).map(|k| m.get(i, k)).collect())
                    .collect();
                let minor = if n == 1 { Matrix::zeros(0, 0) } else { Matrix::from_rows(&minor_rows) };
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m.get(0, j) * det(&minor)
            })
            .sum()
    }

    proptest! {
        #[test]
        fn transforms_diagonalize(m in small_matrix()) {
            let snf = smith_normal_form(&m, true).unwrap();
            let (u, v) = (snf.u.clone().unwrap(), snf.v.clone().unwrap());
            let d = u.mul(&m).mul(&v);
            for i in 0..d.rows() {
                for j in 0..d.cols() {
                    let expect = if i == j && i < snf.factors.len() { snf.factors[i] } else { 0 };
                    prop_assert_eq!(d.get(i, j), expect);
                }
            }
            prop_assert_eq!(det(&u).abs(), 1);
            prop_assert_eq!(det(&v).abs(), 1);
            for w in snf.factors.windows(2) {
                prop_assert_eq!(w[1] % w[0], 0);
            }
            prop_assert!(snf.factors.iter().all(|&d| d > 0));
        }

        #[test]
        fn sparse_agrees_with_dense(m in small_matrix()) {
            let dense = smith_normal_form(&m, false).unwrap().factors;
            let sparse = invariant_factors(&SparseMatrix::from_dense(&m)).unwrap();
            prop_assert_eq!(sparse, dense);
        }

        #[test]
        fn transpose_has_same_factors(m in small_matrix()) {
            prop_assert_eq!(
                smith_normal_form(&m, false).unwrap().factors,
                smith_normal_form(&m.transpose(), false).unwrap().factors
            );
        }
    }
}
