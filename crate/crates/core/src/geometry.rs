//! Combinatorial geometry of the coset complex: vertices are cosets `g⟨Δ⟩`,
//! and the nonsymmetric distance counts the norm of the Δ-free part of
//! `v⁻¹w`.

use std::collections::{BTreeSet, HashSet};

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::germ::{Germ, SimpleId};
use crate::words::{GroupElement, NormCalculator, Positive, PositiveWord, WordError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("orientation profile is not down*up* at edge {edge}")]
    OrientationViolation { edge: usize, profile: Vec<Orientation> },
    #[error("centers {a} and {b} are not adjacent")]
    CentersNotAdjacent { a: String, b: String },
    #[error("empty vertex set")]
    EmptyVertexSet,
    #[error("{0} must be at least 1")]
    NonPositive(&'static str),
}

/// A vertex, named by the Δ-free prefix of any element of its coset.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Vertex {
    pub rep: PositiveWord,
}

impl Vertex {
    pub fn base() -> Self {
        Vertex::default()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Down,
    Up,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CenterReport {
    pub radius: u64,
    pub centers: Vec<Vertex>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupRecord {
    pub mu: SimpleId,
    pub j: u32,
    pub t: u32,
    /// Central factor `Δ^k` of a type-2 record.
    pub k: Option<u32>,
    pub order: u64,
    #[serde(rename = "type")]
    pub kind: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TamenessProbe {
    /// `(n, ||Δ^n||)` for `n = 1..=N`.
    pub norms: Vec<(u64, u64)>,
    /// max over n of `||Δ^n|| / n`.
    #[serde(serialize_with = "ratio_text")]
    pub constant: Ratio<u64>,
    pub nodes: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TranslationEstimate {
    /// `min |g^n| / n` over `1 ≤ n ≤ N`; an upper bound for τ(g).
    #[serde(serialize_with = "ratio_text")]
    pub estimate: Ratio<u64>,
    /// Smallest `n` attaining the minimum.
    pub argmin: u64,
    /// `|g^n|_𝒟` for `n = 1..=N`.
    pub lengths: Vec<u64>,
}

fn ratio_text<S: serde::Serializer>(r: &Ratio<u64>, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl Germ {
    pub fn vertex(&self, g: &GroupElement) -> Vertex {
        Vertex { rep: g.prefix().clone() }
    }

    /// Parse a vertex from element syntax; the Δ-exponent is discarded.
    pub fn parse_vertex(&self, text: &str) -> Result<Vertex, WordError> {
        Ok(self.vertex(&self.parse_element(text)?))
    }

    pub fn render_vertex(&self, v: &Vertex) -> String {
        self.render_letters(v.rep.letters())
    }

    fn vertex_element(&self, v: &Vertex) -> GroupElement {
        self.element(v.rep.letters(), 0).expect("vertex letters belong to the germ")
    }

    /// The vertex `g·v`.
    pub fn translate(&self, g: &GroupElement, v: &Vertex) -> Result<Vertex, WordError> {
        Ok(self.vertex(&self.mult(g, &self.vertex_element(v))?))
    }

    fn offset(&self, v: &Vertex, w: &Vertex) -> Result<PositiveWord, WordError> {
        let vi = self.inverse(&self.vertex_element(v))?;
        Ok(self.mult(&vi, &self.vertex_element(w))?.prefix().clone())
    }

    /// Nonsymmetric distance `d(v, w)`.
    pub fn distance(&self, v: &Vertex, w: &Vertex) -> Result<u64, WordError> {
        self.norm(&Positive { deltas: 0, word: self.offset(v, w)? })
    }

    /// Edge labels of the geodesic from `v` to `w`.
    pub fn geodesic(&self, v: &Vertex, w: &Vertex) -> Result<Vec<SimpleId>, WordError> {
        Ok(self.offset(v, w)?.into_letters())
    }

    /// The vertices `v, v b_1, v b_1 b_2, …` along a geodesic.
    pub fn geodesic_path(&self, v: &Vertex, w: &Vertex) -> Result<Vec<Vertex>, WordError> {
        let mut g = self.vertex_element(v);
        let mut path = vec![v.clone()];
        for b in self.geodesic(v, w)? {
            g = self.mult(&g, &self.element(&[b], 0)?)?;
            path.push(self.vertex(&g));
        }
        Ok(path)
    }

    /// Whether the geodesic from `w` to `v` retraces the one from `v` to `w`.
    pub fn reverse_geodesic_check(&self, v: &Vertex, w: &Vertex) -> Result<bool, WordError> {
        let mut back = self.geodesic_path(w, v)?;
        back.reverse();
        Ok(back == self.geodesic_path(v, w)?)
    }

    /// Whether two vertices are equal or joined by an edge.
    pub fn adjacent(&self, v: &Vertex, w: &Vertex) -> Result<bool, WordError> {
        Ok(self.offset(v, w)?.len() <= 1)
    }

    /// Direction of each geodesic edge relative to the norm of the vertex
    /// representatives; must have the shape down*up*.
    pub fn orientation_profile(&self, v: &Vertex, w: &Vertex) -> Result<Vec<Orientation>, GeometryError> {
        let path = self.geodesic_path(v, w)?;
        let mut calc = NormCalculator::new(self, crate::words::DEFAULT_NODE_BUDGET);
        let heights = path
            .iter()
            .map(|p| calc.norm(&Positive { deltas: 0, word: p.rep.clone() }))
            .collect::<Result<Vec<_>, _>>()?;
        let mut profile = Vec::with_capacity(path.len().saturating_sub(1));
        let mut bad = None;
        for (i, pair) in heights.windows(2).enumerate() {
            let o = if pair[1] < pair[0] { Orientation::Down } else { Orientation::Up };
            if pair[1] == pair[0] || (o == Orientation::Down && profile.last() == Some(&Orientation::Up)) {
                bad.get_or_insert(i);
            }
            profile.push(o);
        }
        match bad {
            Some(edge) => Err(GeometryError::OrientationViolation { edge, profile }),
            None => Ok(profile),
        }
    }

    /// All vertices within distance `r` of `t`, sorted.
    pub fn ball(&self, t: &Vertex, r: u64) -> Result<Vec<Vertex>, WordError> {
        let mut calc = NormCalculator::new(self, crate::words::DEFAULT_NODE_BUDGET);
        let base = self.vertex_element(t);
        let mut seen: HashSet<PositiveWord> = HashSet::from([PositiveWord::empty()]);
        let mut frontier = vec![PositiveWord::empty()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for a in &frontier {
                for &atom in self.atoms() {
                    let mut letters = a.letters().to_vec();
                    letters.push(atom);
                    let p = self.normalize(&letters)?;
                    if p.deltas > 0 || seen.contains(&p.word) || calc.norm(&p)? > r {
                        continue;
                    }
                    seen.insert(p.word.clone());
                    next.push(p.word);
                }
            }
            frontier = next;
        }
        let mut out = BTreeSet::new();
        for a in seen {
            let g = self.mult(&base, &self.element(a.letters(), 0)?)?;
            out.insert(self.vertex(&g));
        }
        Ok(out.into_iter().collect())
    }

    /// Circumscribed radius of `targets` and all vertices attaining it.
    ///
    /// Any center lies within `r(T) ≤ min_t ecc(t)` of every target, so the
    /// search walks outward from the target of least eccentricity and stops
    /// growing a branch once its norm exceeds the best radius found so far.
    pub fn centers(&self, targets: &[Vertex]) -> Result<CenterReport, GeometryError> {
        if targets.is_empty() {
            return Err(GeometryError::EmptyVertexSet);
        }
        // Eccentricity of v, or None once it exceeds `cap`.
        let eccentricity = |v: &Vertex, cap: u64| -> Result<Option<u64>, WordError> {
            let mut e = 0;
            for t in targets {
                e = e.max(self.distance(t, v)?);
                if e > cap {
                    return Ok(None);
                }
            }
            Ok(Some(e))
        };
        let mut root = &targets[0];
        let mut radius = u64::MAX;
        for t in targets {
            if let Some(e) = eccentricity(t, radius)? {
                if e < radius {
                    radius = e;
                    root = t;
                }
            }
        }
        let base = self.vertex_element(root);
        let mut calc = NormCalculator::new(self, crate::words::DEFAULT_NODE_BUDGET);
        let mut seen_words: HashSet<PositiveWord> = HashSet::from([PositiveWord::empty()]);
        let mut seen_vertices: HashSet<Vertex> = HashSet::new();
        let mut centers = Vec::new();
        let mut frontier = vec![(PositiveWord::empty(), 0u64)];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (a, norm) in frontier {
                if norm > radius {
                    continue;
                }
                let v = self.vertex(&self.mult(&base, &self.element(a.letters(), 0)?)?);
                if seen_vertices.insert(v.clone()) {
                    if let Some(e) = eccentricity(&v, radius)? {
                        if e < radius {
                            radius = e;
                            centers.clear();
                        }
                        centers.push(v);
                    }
                }
                if norm >= radius {
                    continue;
                }
                for &atom in self.atoms() {
                    let mut letters = a.letters().to_vec();
                    letters.push(atom);
                    let p = self.normalize(&letters)?;
                    if p.deltas == 0 && !seen_words.contains(&p.word) {
                        let n = calc.norm(&p)?;
                        seen_words.insert(p.word.clone());
                        next.push((p.word, n));
                    }
                }
            }
            frontier = next;
        }
        centers.sort();
        for (i, a) in centers.iter().enumerate() {
            for b in &centers[i + 1..] {
                if !self.adjacent(a, b)? {
                    return Err(GeometryError::CentersNotAdjacent {
                        a: self.render_vertex(a),
                        b: self.render_vertex(b),
                    });
                }
            }
        }
        Ok(CenterReport { radius, centers })
    }

    /// Generators `μΔ^j` of finite cyclic subgroups of `G/⟨Δ^m⟩`, one per
    /// σ^j-orbit of μ, followed by their extensions by central powers `Δ^k`.
    pub fn finite_subgroups(&self) -> Vec<SubgroupRecord> {
        let m = self.sigma_order();
        let mut type1 = Vec::new();
        for j in 0..m {
            for mu in self.nontrivial() {
                let orbit_min = (0..m as i64).map(|i| self.sigma(mu, i * j as i64)).min().unwrap();
                if orbit_min != mu {
                    continue;
                }
                let mut p = mu;
                let mut t = 1u32;
                while p != self.delta() {
                    match self.product(p, self.sigma(mu, (t * j) as i64)) {
                        Some(q) => {
                            p = q;
                            t += 1;
                        }
                        None => break,
                    }
                }
                if p == self.delta() {
                    let order = t as u64 * m as u64 / gcd(m as u64, t as u64 * j as u64 + 1);
                    type1.push(SubgroupRecord { mu, j, t, k: None, order, kind: 1 });
                }
            }
        }
        let mut out = type1.clone();
        for r in &type1 {
            let mut seen = HashSet::new();
            for k in (1..m).filter(|k| m.is_multiple_of(*k) && self.sigma(r.mu, *k as i64) == r.mu) {
                let g = gcd(gcd(m as u64, r.t as u64 * r.j as u64 + 1), k as u64);
                let order = r.t as u64 * m as u64 / g;
                if order > r.order && seen.insert(g) {
                    out.push(SubgroupRecord { k: Some(k), order, kind: 2, ..*r });
                }
            }
        }
        out
    }

    /// Checks `(μΔ^j)^t = Δ^{tj+1}`, that the order kills the generator
    /// modulo `Δ^m`, and for type 2 that `Δ^k` commutes with it.
    pub fn verify_subgroup(&self, r: &SubgroupRecord) -> Result<bool, WordError> {
        let m = self.sigma_order() as i64;
        let g = self.element(&[r.mu], r.j as i64)?;
        let power = self.power(&g, r.t as i64)?;
        if power != self.delta_power(r.t as i64 * r.j as i64 + 1) {
            return Ok(false);
        }
        let cyclic_order = r.t as i64 * m / gcd(m as u64, (r.t * r.j + 1) as u64) as i64;
        let killed = self.power(&g, cyclic_order)?;
        if !killed.prefix().is_empty() || killed.exp() % m != 0 {
            return Ok(false);
        }
        if let Some(k) = r.k {
            let d = self.delta_power(k as i64);
            if self.mult(&g, &d)? != self.mult(&d, &g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Exact `||Δ^n||` for `n ≤ max_n` under a node budget shared across `n`.
    pub fn tameness_probe(&self, max_n: u64, budget: usize) -> Result<TamenessProbe, GeometryError> {
        if max_n == 0 {
            return Err(GeometryError::NonPositive("N"));
        }
        let mut calc = NormCalculator::new(self, budget);
        let mut norms = Vec::new();
        let mut constant = Ratio::from_integer(0);
        for n in 1..=max_n {
            let v = calc.norm(&Positive { deltas: n, word: PositiveWord::empty() })?;
            norms.push((n, v));
            constant = constant.max(Ratio::new(v, n));
        }
        Ok(TamenessProbe { norms, constant, nodes: calc.nodes() })
    }

    /// Upper estimate of τ(g) from the first `max_n` powers.
    pub fn translation_length(&self, g: &GroupElement, max_n: u64) -> Result<TranslationEstimate, GeometryError> {
        if max_n == 0 {
            return Err(GeometryError::NonPositive("N"));
        }
        let mut acc = self.identity();
        let mut lengths = Vec::new();
        let mut best: Option<(Ratio<u64>, u64)> = None;
        for n in 1..=max_n {
            acc = self.mult(&acc, g)?;
            let len = self.word_length(&acc);
            lengths.push(len);
            let q = Ratio::new(len, n);
            if best.is_none_or(|(b, _)| q < b) {
                best = Some((q, n));
            }
        }
        let (estimate, argmin) = best.unwrap();
        Ok(TranslationEstimate { estimate, argmin, lengths })
    }
}

/// Lower bound `1/(c·||Δ||)` on translation lengths of elements of infinite
/// order in `G/⟨Δ^m⟩`, given a tameness constant `c`.
pub fn translation_lower_bound(c: Ratio<u64>, delta_norm: u64) -> Ratio<u64> {
    (c * delta_norm).recip()
}

fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::tests::a2;

    fn v(g: &Germ, text: &str) -> Vertex {
        g.parse_vertex(text).unwrap()
    }

    #[test]
    fn distances() {
        let g = a2();
        let one = Vertex::base();
        assert_eq!(g.distance(&one, &one).unwrap(), 0);
        assert_eq!(g.distance(&one, &v(&g, "s.s")).unwrap(), 2);
        assert_eq!(g.distance(&v(&g, "s"), &one).unwrap(), 2);
        assert_eq!(g.distance(&one, &v(&g, "s")).unwrap(), 1);
        assert_eq!(v(&g, "s.t.s@3"), one);
    }

    #[test]
    fn geodesics() {
        let g = a2();
        let one = Vertex::base();
        let id = |n: &str| g.simple(n).unwrap();
        assert!(g.geodesic(&one, &one).unwrap().is_empty());
        assert_eq!(g.geodesic(&one, &v(&g, "s.s")).unwrap(), [id("s"), id("s")]);
        assert_eq!(g.geodesic(&v(&g, "s"), &one).unwrap(), [id("ts")]);
        assert!(g.reverse_geodesic_check(&v(&g, "s"), &one).unwrap());
        assert!(g.reverse_geodesic_check(&v(&g, "s.s"), &v(&g, "t")).unwrap());
    }

    #[test]
    fn profiles() {
        let g = a2();
        let one = Vertex::base();
        assert_eq!(g.orientation_profile(&one, &v(&g, "s.s")).unwrap(), [Orientation::Up, Orientation::Up]);
        assert!(g.orientation_profile(&one, &one).unwrap().is_empty());
        let p = g.orientation_profile(&v(&g, "s"), &v(&g, "t")).unwrap();
        assert!(!p.is_empty());
        assert_eq!(*p.last().unwrap(), Orientation::Up);
    }

    #[test]
    fn balls() {
        let g = a2();
        let one = Vertex::base();
        assert_eq!(g.ball(&one, 0).unwrap(), std::slice::from_ref(&one));
        let b1 = g.ball(&one, 1).unwrap();
        assert_eq!(b1.len(), 3);
        assert!(b1.contains(&v(&g, "s")) && b1.contains(&v(&g, "t")));
        let b2 = g.ball(&one, 2).unwrap();
        for w in ["st", "ts", "s.s", "t.t"] {
            assert!(b2.contains(&v(&g, w)), "{w}");
        }
        for w in &b2 {
            assert!(g.distance(&one, w).unwrap() <= 2);
        }
        let s = v(&g, "s");
        for w in g.ball(&s, 2).unwrap() {
            assert!(g.distance(&s, &w).unwrap() <= 2);
        }
    }

    #[test]
    fn center_reports() {
        let g = a2();
        let x = v(&g, "s.t");
        let r = g.centers(std::slice::from_ref(&x)).unwrap();
        assert_eq!((r.radius, r.centers), (0, vec![x]));
        let r = g.centers(&[Vertex::base(), v(&g, "s.s")]).unwrap();
        assert!(r.radius <= 2);
        assert!(!r.centers.is_empty());
        assert!(matches!(g.centers(&[]), Err(GeometryError::EmptyVertexSet)));
    }

    #[test]
    fn a2_subgroups() {
        let g = a2();
        let table = g.finite_subgroups();
        let delta = g.delta();
        let s = g.simple("s").unwrap();
        assert!(table.iter().any(|r| r.mu == delta && r.j == 0 && r.t == 1 && r.order == 2));
        assert!(table.iter().any(|r| r.mu == s && r.j == 1 && r.t == 3 && r.order == 3));
        for r in &table {
            assert!(g.verify_subgroup(r).unwrap(), "{r:?}");
        }
    }

    #[test]
    fn tameness_and_translation() {
        let g = a2();
        let probe = g.tameness_probe(4, crate::words::DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(probe.norms, [(1, 3), (2, 6), (3, 9), (4, 12)]);
        assert_eq!(probe.constant, Ratio::from_integer(3));
        let tau = g.translation_length(&g.delta_power(1), 5).unwrap();
        assert_eq!(tau.estimate, Ratio::from_integer(1));
        assert_eq!(g.translation_length(&g.identity(), 3).unwrap().estimate, Ratio::from_integer(0));
        let s = g.parse_element("s").unwrap();
        let est = g.translation_length(&s, 6).unwrap();
        assert!(est.estimate <= Ratio::from_integer(1));
        assert!(est.estimate <= Ratio::new(est.lengths[5], 6));
        assert!(matches!(g.tameness_probe(10, 5), Err(GeometryError::Word(WordError::BudgetExceeded { .. }))));
        assert_eq!(translation_lower_bound(Ratio::from_integer(3), 3), Ratio::new(1, 9));
    }
}
