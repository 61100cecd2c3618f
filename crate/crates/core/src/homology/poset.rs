//! Finite posets of simples and the reduced homology of their order complexes.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::chain::{ChainComplex, HomologyGroup};
use super::matrix::SparseMatrix;
use super::snf::SnfError;
use crate::germ::{Germ, SimpleId};

/// A finite poset with a strict order relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    elements: Vec<SimpleId>,
    // above[i] = {j : e_i < e_j}
    above: Vec<FixedBitSet>,
}

impl FinitePoset {
    /// Poset on `elements` with `less(i, j)` meaning `elements[i] < elements[j]`.
    /// The relation must be a strict partial order.
    pub fn from_relation(elements: Vec<SimpleId>, less: impl Fn(usize, usize) -> bool) -> Self {
        let n = elements.len();
        let above = (0..n)
            .map(|i| {
                let mut set = FixedBitSet::with_capacity(n);
                for j in (0..n).filter(|&j| j != i && less(i, j)) {
                    set.insert(j);
                }
                set
            })
            .collect();
        FinitePoset { elements, above }
    }

    /// `elements` ordered by left divisibility in `germ`.
    pub fn left_divisibility(germ: &Germ, elements: Vec<SimpleId>) -> Self {
        let els = elements.clone();
        FinitePoset::from_relation(elements, |i, j| germ.left_divides(els[i], els[j]))
    }

    pub fn elements(&self) -> &[SimpleId] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn less(&self, i: usize, j: usize) -> bool {
        self.above[i].contains(j)
    }

    /// Whether the relation is irreflexive and transitive.
    pub fn is_strict_order(&self) -> bool {
        (0..self.len()).all(|i| {
            !self.less(i, i)
                && self.above[i].ones().all(|j| self.above[j].is_subset(&self.above[i]))
        })
    }

    /// Index of an element below every other one.
    pub fn minimum(&self) -> Option<usize> {
        (0..self.len()).find(|&i| (0..self.len()).all(|j| j == i || self.less(i, j)))
    }

    /// Chains with `size` elements, each listed bottom-up.
    pub fn chains(&self, size: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if size == 0 {
            out.push(Vec::new());
            return out;
        }
        let mut chain = Vec::with_capacity(size);
        for start in 0..self.len() {
            chain.push(start);
            self.grow(size, &mut chain, &mut out);
            chain.pop();
        }
        out
    }

    fn grow(&self, size: usize, chain: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if chain.len() == size {
            out.push(chain.clone());
            return;
        }
        let last = *chain.last().unwrap();
        for next in self.above[last].ones() {
            chain.push(next);
            self.grow(size, chain, out);
            chain.pop();
        }
    }

    /// Augmented simplicial chain complex of the order complex: the empty
    /// chain sits in degree −1 and a chain of `k + 1` elements in degree `k`.
    pub fn order_complex(&self) -> ChainComplex {
        let mut levels: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new()]];
        loop {
            let next = self.chains(levels.len());
            if next.is_empty() {
                break;
            }
            levels.push(next);
        }
        let ranks = levels.iter().map(Vec::len).collect();
        let boundaries = (1..levels.len())
            .map(|k| {
                let index: HashMap<&[usize], usize> =
                    levels[k - 1].iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();
                let triples = levels[k].iter().enumerate().flat_map(|(j, chain)| {
                    let index = &index;
                    (0..chain.len()).map(move |drop| {
                        let face: Vec<usize> =
                            chain.iter().enumerate().filter(|&(p, _)| p != drop).map(|(_, &x)| x).collect();
                        let sign = if drop % 2 == 0 { 1 } else { -1 };
                        (index[face.as_slice()], j, sign)
                    })
                });
                SparseMatrix::from_triples(levels[k - 1].len(), levels[k].len(), triples)
            })
            .collect();
        ChainComplex::new(-1, ranks, boundaries)
    }
}

/// Reduced (co)homology of an order complex, starting in degree −1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducedHomology {
    groups: Vec<HomologyGroup>,
}

impl ReducedHomology {
    pub fn degree(&self, d: i64) -> HomologyGroup {
        let i = d + 1;
        if i < 0 {
            return HomologyGroup::zero();
        }
        self.groups.get(i as usize).cloned().unwrap_or_default()
    }

    /// `(degree, group)` pairs from degree −1 up to the top simplex dimension.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &HomologyGroup)> {
        self.groups.iter().enumerate().map(|(i, g)| (i as i64 - 1, g))
    }

    pub fn top_degree(&self) -> i64 {
        self.groups.len() as i64 - 2
    }

    pub fn nonzero_degrees(&self) -> Vec<i64> {
        self.iter().filter(|(_, g)| !g.is_zero()).map(|(d, _)| d).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.groups.iter().all(HomologyGroup::is_zero)
    }

    pub fn is_torsion_free(&self) -> bool {
        self.groups.iter().all(HomologyGroup::is_torsion_free)
    }

    /// Lowest degree carrying a nonzero group.
    pub fn first_nonzero(&self) -> Option<i64> {
        self.nonzero_degrees().first().copied()
    }
}

pub fn reduced_poset_homology(p: &FinitePoset) -> Result<ReducedHomology, SnfError> {
    Ok(ReducedHomology { groups: p.order_complex().homology()? })
}

pub fn reduced_poset_cohomology(p: &FinitePoset) -> Result<ReducedHomology, SnfError> {
    Ok(ReducedHomology { groups: p.order_complex().cohomology()? })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(n: usize, less: impl Fn(usize, usize) -> bool) -> FinitePoset {
        FinitePoset::from_relation((0..n as u32).map(SimpleId).collect(), less)
    }

    #[test]
    fn antichain() {
        let p = synthetic(3, |_, _| false);
        let h = reduced_poset_homology(&p).unwrap();
        assert_eq!(h.degree(0), HomologyGroup::free(2));
        assert_eq!(h.nonzero_degrees(), vec![0]);
    }

    #[test]
    fn cone_is_acyclic() {
        // 0 below everything, 1 and 2 incomparable, 3 above 1.
        let p = synthetic(4, |i, j| i == 0 && j != 0 || (i, j) == (1, 3));
        assert!(p.is_strict_order());
        assert_eq!(p.minimum(), Some(0));
        assert!(reduced_poset_homology(&p).unwrap().is_acyclic());
    }

    #[test]
    fn empty_poset() {
        let p = synthetic(0, |_, _| false);
        let h = reduced_poset_homology(&p).unwrap();
        assert_eq!(h.degree(-1), HomologyGroup::free(1));
        assert_eq!(h.nonzero_degrees(), vec![-1]);
    }

    #[test]
    fn circle() {
        // Two minima below two maxima: the order complex is a 4-cycle.
        let p = synthetic(4, |i, j| i < 2 && j >= 2);
        let h = reduced_poset_homology(&p).unwrap();
        assert_eq!(h.nonzero_degrees(), vec![1]);
        assert_eq!(h.degree(1), HomologyGroup::free(1));
        let co = reduced_poset_cohomology(&p).unwrap();
        assert_eq!(co.nonzero_degrees(), vec![1]);
        assert_eq!(p.chains(2).len(), 4);
    }

    #[test]
    fn reduced_euler_characteristic_of_a_chain() {
        let p = synthetic(4, |i, j| i < j);
        let c = p.order_complex();
        assert_eq!(c.ranks(), &[1, 4, 6, 4, 1]);
        assert!(c.is_complex());
        assert!(reduced_poset_homology(&p).unwrap().is_acyclic());
    }
}
