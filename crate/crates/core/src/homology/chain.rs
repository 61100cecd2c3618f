use std::fmt;

use serde::{Deserialize, Serialize};

use super::matrix::SparseMatrix;
use super::snf::{invariant_factors, SnfError};

/// A finitely generated abelian group `ℤ^rank ⊕ ℤ/t_1 ⊕ ... ⊕ ℤ/t_k` with
/// `t_1 | t_2 | ... | t_k`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub rank: usize,
    pub torsion: Vec<i64>,
}

impl HomologyGroup {
    pub fn zero() -> Self {
        HomologyGroup::default()
    }

    pub fn free(rank: usize) -> Self {
        HomologyGroup { rank, torsion: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    fn from_factors(rank: usize, factors: &[i64]) -> Self {
        HomologyGroup { rank, torsion: factors.iter().copied().filter(|&d| d > 1).collect() }
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// A bounded chain complex of free abelian groups.
///
/// Degrees run from `lowest` to `lowest + ranks.len() - 1`; `boundaries[i]`
/// maps degree `lowest + i` to degree `lowest + i - 1` (rows are the lower
/// cells), and `boundaries[0]` is the zero map out of the lowest degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    lowest: i64,
    ranks: Vec<usize>,
    boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    pub fn new(lowest: i64, ranks: Vec<usize>, mut boundaries: Vec<SparseMatrix>) -> Self {
        if boundaries.len() + 1 == ranks.len() {
            boundaries.insert(0, SparseMatrix::zeros(0, ranks.first().copied().unwrap_or(0)));
        }
        assert_eq!(boundaries.len(), ranks.len(), "one boundary map per degree");
        for (i, b) in boundaries.iter().enumerate() {
            assert_eq!(b.cols(), ranks[i], "boundary {i} has wrong source");
            if i > 0 {
                assert_eq!(b.rows(), ranks[i - 1], "boundary {i} has wrong target");
            }
        }
        ChainComplex { lowest, ranks, boundaries }
    }

    pub fn lowest_degree(&self) -> i64 {
        self.lowest
    }

    pub fn top_degree(&self) -> i64 {
        self.lowest + self.ranks.len() as i64 - 1
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, degree: i64) -> usize {
        self.index(degree).map_or(0, |i| self.ranks[i])
    }

    /// ∂ out of `degree`, if that degree is present.
    pub fn boundary(&self, degree: i64) -> Option<&SparseMatrix> {
        self.index(degree).map(|i| &self.boundaries[i])
    }

    fn index(&self, degree: i64) -> Option<usize> {
        let i = degree - self.lowest;
        (i >= 0 && (i as usize) < self.ranks.len()).then_some(i as usize)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .enumerate()
            .map(|(i, &r)| if (self.lowest + i as i64) % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }

    /// Whether every composite ∂∘∂ vanishes.
    pub fn is_complex(&self) -> bool {
        (2..self.boundaries.len()).all(|i| self.boundaries[i - 1].mul(&self.boundaries[i]).is_zero())
    }

    fn factor_all(mats: Vec<SparseMatrix>) -> Result<Vec<Vec<i64>>, SnfError> {
        // Each degree is independent; results are collected in order.
        std::thread::scope(|s| {
            let handles: Vec<_> = mats.iter().map(|m| s.spawn(move || invariant_factors(m))).collect();
            handles.into_iter().map(|h| h.join().expect("SNF worker panicked")).collect()
        })
    }

    /// Homology groups, indexed from the lowest degree.
    pub fn homology(&self) -> Result<Vec<HomologyGroup>, SnfError> {
        let factors = Self::factor_all(self.boundaries.clone())?;
        let n = self.ranks.len();
        Ok((0..n)
            .map(|i| {
                let out_rank = factors[i].len();
                let (in_rank, in_factors) = match factors.get(i + 1) {
                    Some(f) => (f.len(), f.as_slice()),
                    None => (0, &[][..]),
                };
                HomologyGroup::from_factors(self.ranks[i] - out_rank - in_rank, in_factors)
            })
            .collect())
    }

    /// Cohomology groups from the transposed (coboundary) maps, indexed from
    /// the lowest degree.
    pub fn cohomology(&self) -> Result<Vec<HomologyGroup>, SnfError> {
        // δ^(i-1) = ∂_i^T maps degree i-1 into degree i.
        let cofactors = Self::factor_all(self.boundaries.iter().map(SparseMatrix::transpose).collect())?;
        let n = self.ranks.len();
        Ok((0..n)
            .map(|i| {
                let in_rank = cofactors[i].len();
                let out_rank = cofactors.get(i + 1).map_or(0, Vec::len);
                HomologyGroup::from_factors(self.ranks[i] - out_rank - in_rank, &cofactors[i])
            })
            .collect())
    }
}
