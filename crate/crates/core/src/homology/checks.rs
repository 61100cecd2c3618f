//! Poset-homology checkers for the duality and end-connectivity criteria,
//! plus the ascending and descending vertex links.

use serde::Serialize;

use super::chain::HomologyGroup;
use super::poset::{reduced_poset_cohomology, reduced_poset_homology, FinitePoset, ReducedHomology};
use super::snf::SnfError;
use crate::germ::{Germ, SimpleId};
use crate::words::{Positive, PositiveWord};

/// 𝒟 − {1, Δ} under left divisibility.
pub fn proper_poset(germ: &Germ) -> FinitePoset {
    FinitePoset::left_divisibility(germ, germ.proper().collect())
}

/// The elements η of the proper poset with `μ ≰ η`.
pub fn avoid_poset(germ: &Germ, mu: SimpleId) -> FinitePoset {
    let elements = germ.proper().filter(|&eta| !germ.left_divides(mu, eta)).collect();
    FinitePoset::left_divisibility(germ, elements)
}

/// RF(a)*, with RF(1)* = Δ.
fn rf_complement(germ: &Germ, a: &PositiveWord) -> SimpleId {
    let u = Positive { deltas: 0, word: a.clone() };
    germ.right_complement(germ.rf(&u))
}

/// Simples of the proper poset above RF(a)*; empty for the empty word.
pub fn descending_link(germ: &Germ, a: &PositiveWord) -> FinitePoset {
    if a.is_empty() {
        return FinitePoset::left_divisibility(germ, Vec::new());
    }
    let bottom = rf_complement(germ, a);
    let elements = germ.proper().filter(|&mu| germ.left_divides(bottom, mu)).collect();
    FinitePoset::left_divisibility(germ, elements)
}

/// The proper poset minus everything above RF(a)*.
pub fn ascending_link(germ: &Germ, a: &PositiveWord) -> FinitePoset {
    avoid_poset(germ, rf_complement(germ, a))
}

/// The proper poset followed by every avoid poset, with display labels.
pub fn tested_posets(germ: &Germ) -> Vec<(String, FinitePoset)> {
    let mut out = vec![("PD".to_string(), proper_poset(germ))];
    for mu in germ.proper() {
        out.push((format!("PD_not_above({})", germ.name_of(mu)), avoid_poset(germ, mu)));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeGroup {
    pub degree: i64,
    pub group: HomologyGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PosetReport {
    pub label: String,
    pub size: usize,
    /// Nonzero groups only.
    pub groups: Vec<DegreeGroup>,
}

impl PosetReport {
    fn new(label: &str, p: &FinitePoset, h: &ReducedHomology) -> Self {
        PosetReport {
            label: label.to_string(),
            size: p.len(),
            groups: h
                .iter()
                .filter(|(_, g)| !g.is_zero())
                .map(|(degree, group)| DegreeGroup { degree, group: group.clone() })
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityVerdict {
    pub verdict: Verdict,
    /// Duality dimension when the verdict is yes.
    pub n: Option<i64>,
    /// Common degree of the reduced cohomology.
    pub concentrated_in: Option<i64>,
    pub offending: Option<String>,
    pub reason: Option<String>,
    /// Reduced cohomology of every tested poset.
    pub reports: Vec<PosetReport>,
}

/// Duality test on reduced cohomology: every poset torsion-free and
/// concentrated in one common degree `c` gives an `(c + 2)`-dimensional
/// duality group. Acyclic posets are compatible with any `c`.
pub fn duality_check(germ: &Germ) -> Result<DualityVerdict, SnfError> {
    let posets = tested_posets(germ);
    let mut reports = Vec::with_capacity(posets.len());
    let mut common: Option<i64> = None;
    let mut failure: Option<(String, String)> = None;
    for (label, p) in &posets {
        let co = reduced_poset_cohomology(p)?;
        reports.push(PosetReport::new(label, p, &co));
        if failure.is_some() {
            continue;
        }
        let nonzero = co.nonzero_degrees();
        let reason = if !co.is_torsion_free() {
            Some("reduced cohomology has torsion".to_string())
        } else if nonzero.len() > 1 {
            Some(format!("reduced cohomology in several degrees {nonzero:?}"))
        } else if nonzero == [-1] {
            Some("empty poset".to_string())
        } else if let (Some(&d), Some(c)) = (nonzero.first(), common) {
            (d != c).then(|| format!("reduced cohomology in degree {d}, expected {c}"))
        } else {
            if let Some(&d) = nonzero.first() {
                common = Some(d);
            }
            None
        };
        if let Some(reason) = reason {
            failure = Some((label.clone(), reason));
        }
    }
    let verdict = match (&failure, common) {
        (None, Some(c)) => DualityVerdict {
            verdict: Verdict::Yes,
            n: Some(c + 2),
            concentrated_in: Some(c),
            offending: None,
            reason: None,
            reports,
        },
        (None, None) => DualityVerdict {
            verdict: Verdict::Inconclusive,
            n: None,
            concentrated_in: None,
            offending: None,
            reason: Some("every tested poset is acyclic; no dimension is pinned".into()),
            reports,
        },
        (Some((label, reason)), _) => DualityVerdict {
            verdict: Verdict::Inconclusive,
            n: None,
            concentrated_in: None,
            offending: Some(label.clone()),
            reason: Some(reason.clone()),
            reports,
        },
    };
    Ok(verdict)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndConnectivity {
    /// Largest `n ≥ 0` for which every tested poset has vanishing reduced
    /// homology in all degrees `≤ n`.
    pub n: Option<i64>,
    pub conclusion: String,
    pub offending: Option<String>,
    /// Reduced homology of every tested poset.
    pub reports: Vec<PosetReport>,
}

pub fn end_connectivity_check(germ: &Germ) -> Result<EndConnectivity, SnfError> {
    end_connectivity_from(&tested_posets(germ))
}

/// End-connectivity verdict for an explicit list of labelled posets.
pub fn end_connectivity_from(posets: &[(String, FinitePoset)]) -> Result<EndConnectivity, SnfError> {
    let mut reports = Vec::with_capacity(posets.len());
    let mut bound: Option<(i64, String)> = None;
    let mut top = 0i64;
    for (label, p) in posets {
        let h = reduced_poset_homology(p)?;
        reports.push(PosetReport::new(label, p, &h));
        top = top.max(h.top_degree());
        if let Some(first) = h.first_nonzero() {
            if bound.as_ref().is_none_or(|(b, _)| first - 1 < *b) {
                bound = Some((first - 1, label.clone()));
            }
        }
    }
    let (n, offending) = match bound {
        Some((b, label)) => (b, Some(label)),
        None => (top, None),
    };
    Ok(if n >= 0 {
        EndConnectivity {
            n: Some(n),
            conclusion: format!("{}-connected at infinity", n + 1),
            offending,
            reports,
        }
    } else {
        EndConnectivity {
            n: None,
            conclusion: "inconclusive".into(),
            offending,
            reports,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::tests::a2;

    fn names(germ: &Germ, p: &FinitePoset) -> Vec<String> {
        p.elements().iter().map(|&s| germ.name_of(s).to_string()).collect()
    }

    #[test]
    fn a2_proper_poset_is_two_chains() {
        let g = a2();
        let p = proper_poset(&g);
        assert_eq!(names(&g, &p), ["s", "st", "t", "ts"]);
        assert_eq!(p.chains(2).len(), 2);
        let h = reduced_poset_homology(&p).unwrap();
        assert_eq!(h.nonzero_degrees(), vec![0]);
        assert_eq!(h.degree(0), HomologyGroup::free(1));
    }

    #[test]
    fn avoid_posets() {
        let g = a2();
        for &a in g.atoms() {
            assert!(!avoid_poset(&g, a).elements().contains(&a));
        }
        assert_eq!(avoid_poset(&g, g.delta()), proper_poset(&g));
        assert_eq!(names(&g, &avoid_poset(&g, g.simple("st").unwrap())), ["s", "t", "ts"]);
    }

    #[test]
    fn links() {
        let g = a2();
        let s = g.simple("s").unwrap();
        let empty = PositiveWord::empty();
        assert_eq!(ascending_link(&g, &empty), proper_poset(&g));
        assert!(descending_link(&g, &empty).is_empty());
        let ss = g.normalize(&[s, s]).unwrap().word;
        assert_eq!(names(&g, &descending_link(&g, &ss)), ["ts"]);
        assert_eq!(ascending_link(&g, &ss), avoid_poset(&g, g.simple("ts").unwrap()));
    }

    #[test]
    fn a2_verdicts() {
        let g = a2();
        let v = duality_check(&g).unwrap();
        assert_eq!(v.verdict, Verdict::Yes);
        assert_eq!(v.n, Some(2));
        let e = end_connectivity_check(&g).unwrap();
        assert_eq!(e.n, None);
        assert_eq!(e.conclusion, "inconclusive");
    }

    #[test]
    fn cones_give_full_conclusion() {
        let chain = |n: u32| FinitePoset::from_relation((0..n).map(SimpleId).collect(), |i, j| i < j);
        let posets = vec![("P".to_string(), chain(3)), ("Q".to_string(), chain(2))];
        let e = end_connectivity_from(&posets).unwrap();
        assert_eq!(e.n, Some(2));
        assert_eq!(e.conclusion, "3-connected at infinity");

        let circle = FinitePoset::from_relation((0..4).map(SimpleId).collect(), |i, j| i < 2 && j >= 2);
        let e = end_connectivity_from(&[("P".to_string(), chain(3)), ("C".to_string(), circle)]).unwrap();
        assert_eq!(e.n, Some(0));
        assert_eq!(e.offending.as_deref(), Some("C"));
    }

    #[test]
    fn empty_poset_is_flagged() {
        let empty = FinitePoset::from_relation(Vec::new(), |_, _| false);
        let e = end_connectivity_from(&[("E".to_string(), empty)]).unwrap();
        assert_eq!(e.n, None);
    }
}
