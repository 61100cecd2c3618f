//! The finite bar-type complex of a germ: one k-cell `[μ_1|...|μ_k]` for
//! every k-tuple of nontrivial simples whose product is again simple.

use std::collections::HashMap;

use serde::Serialize;

use super::chain::{ChainComplex, HomologyGroup};
use super::matrix::{Matrix, SparseMatrix};
use super::snf::{smith_normal_form, SnfError};
use crate::germ::{Germ, SimpleId};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TupleCell {
    pub entries: Vec<SimpleId>,
    /// Product of the entries; `1` only for the empty 0-cell.
    pub total: SimpleId,
}

/// All k-cells in lexicographic order of their entries.
pub fn cells(germ: &Germ, k: usize) -> Vec<TupleCell> {
    let mut out = Vec::new();
    let mut entries = Vec::with_capacity(k);
    extend(germ, k, SimpleId::ONE, &mut entries, &mut out);
    out
}

fn extend(germ: &Germ, k: usize, total: SimpleId, entries: &mut Vec<SimpleId>, out: &mut Vec<TupleCell>) {
    if entries.len() == k {
        out.push(TupleCell { entries: entries.clone(), total });
        return;
    }
    for x in germ.nontrivial() {
        if let Some(next) = germ.product(total, x) {
            entries.push(x);
            extend(germ, k, next, entries, out);
            entries.pop();
        }
    }
}

fn index_of(cells: &[TupleCell]) -> HashMap<&[SimpleId], usize> {
    cells.iter().enumerate().map(|(i, c)| (c.entries.as_slice(), i)).collect()
}

/// Faces of `[μ_1|...|μ_k]` with their signs: the front face, the merged
/// faces `(-1)^i [...|μ_i μ_{i+1}|...]`, and the back face with `(-1)^k`.
fn faces(germ: &Germ, entries: &[SimpleId]) -> Vec<(Vec<SimpleId>, i64)> {
    let k = entries.len();
    let mut out = Vec::with_capacity(k + 1);
    out.push((entries[1..].to_vec(), 1));
    for i in 1..k {
        let mut face = entries[..i - 1].to_vec();
        face.push(germ.product(entries[i - 1], entries[i]).expect("partial products of a cell are simple"));
        face.extend_from_slice(&entries[i + 1..]);
        out.push((face, if i % 2 == 0 { 1 } else { -1 }));
    }
    out.push((entries[..k - 1].to_vec(), if k.is_multiple_of(2) { 1 } else { -1 }));
    out
}

fn boundary_between(germ: &Germ, lower: &[TupleCell], upper: &[TupleCell]) -> SparseMatrix {
    let index = index_of(lower);
    let triples = upper.iter().enumerate().flat_map(|(j, cell)| {
        faces(germ, &cell.entries)
            .into_iter()
            .map(|(face, sign)| (index[face.as_slice()], j, sign))
            .collect::<Vec<_>>()
    });
    SparseMatrix::from_triples(lower.len(), upper.len(), triples)
}

/// ∂_k: rows are the (k-1)-cells, columns the k-cells. Requires `k ≥ 1`.
pub fn boundary(germ: &Germ, k: usize) -> SparseMatrix {
    assert!(k >= 1, "boundary is defined from degree 1");
    boundary_between(germ, &cells(germ, k - 1), &cells(germ, k))
}

/// The whole complex in degrees `0..=||Δ||`.
pub fn bar_complex(germ: &Germ) -> ChainComplex {
    let top = germ.simple_norm(germ.delta()) as usize;
    let all: Vec<Vec<TupleCell>> = (0..=top).map(|k| cells(germ, k)).collect();
    let ranks = all.iter().map(Vec::len).collect();
    let boundaries = (1..=top).map(|k| boundary_between(germ, &all[k - 1], &all[k])).collect();
    ChainComplex::new(0, ranks, boundaries)
}

/// Integral homology of the group, degrees `0..=||Δ||`.
pub fn homology(germ: &Germ) -> Result<Vec<HomologyGroup>, SnfError> {
    bar_complex(germ).homology()
}

/// Integral cohomology of the group, degrees `0..=||Δ||`.
pub fn cohomology(germ: &Germ) -> Result<Vec<HomologyGroup>, SnfError> {
    bar_complex(germ).cohomology()
}

/// Abelianization of the group presented by generators 𝒟 − {1} and
/// relations `ab = c` for every defined product, computed from the dense
/// relation matrix.
pub fn abelianization(germ: &Germ) -> Result<HomologyGroup, SnfError> {
    let gens: Vec<SimpleId> = germ.nontrivial().collect();
    let relations: Vec<Vec<i64>> = germ
        .product_entries()
        .map(|(a, b, c)| {
            let mut row = vec![0i64; gens.len()];
            row[a.index() - 1] += 1;
            row[b.index() - 1] += 1;
            row[c.index() - 1] -= 1;
            row
        })
        .collect();
    let m = if relations.is_empty() { Matrix::zeros(0, gens.len()) } else { Matrix::from_rows(&relations) };
    let snf = smith_normal_form(&m, false)?;
    Ok(HomologyGroup { rank: gens.len() - snf.rank(), torsion: snf.torsion() })
}
