//! Positive monoid and group arithmetic through greedy normal forms.
//!
//! Positive elements are kept as `Δ^k · w` with `w` Δ-free and left greedy;
//! group elements as Deligne normal forms `w · Δ^n`. Both representations
//! are unique, so equality of values decides the word problem.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::germ::{Germ, GermId, Side, SimpleId};

/// Default cap on distinct positive elements visited by a norm computation.
pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("unknown simple {0:?}")]
    UnknownSimple(String),
    #[error("elements belong to different germs")]
    GermMismatch,
    #[error("invalid Δ-exponent {0:?}")]
    BadExponent(String),
    #[error("element is not positive")]
    NotPositive,
    #[error("norm computation exceeded the node budget of {limit}")]
    BudgetExceeded { limit: usize },
}

/// A Δ-free word in left greedy normal form. Letters are never `1` or Δ.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PositiveWord(Vec<SimpleId>);

impl PositiveWord {
    pub fn empty() -> Self {
        PositiveWord(Vec::new())
    }

    pub fn letters(&self) -> &[SimpleId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_letters(self) -> Vec<SimpleId> {
        self.0
    }
}

/// A positive element `Δ^deltas · word` in left greedy normal form.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Positive {
    pub deltas: u64,
    pub word: PositiveWord,
}

impl Positive {
    pub fn identity() -> Self {
        Positive::default()
    }

    pub fn is_identity(&self) -> bool {
        self.deltas == 0 && self.word.is_empty()
    }
}

/// A group element in Deligne normal form `prefix · Δ^exp`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GroupElement {
    #[serde(skip)]
    germ: GermId,
    prefix: PositiveWord,
    exp: i64,
}

impl GroupElement {
    pub fn germ(&self) -> GermId {
        self.germ
    }

    pub fn prefix(&self) -> &PositiveWord {
        &self.prefix
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn is_identity(&self) -> bool {
        self.exp == 0 && self.prefix.is_empty()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters: Vec<String> = self.prefix.0.iter().map(|s| s.0.to_string()).collect();
        write!(f, "[{}]@{}", letters.join(","), self.exp)
    }
}

impl Germ {
    fn check_letters(&self, seq: &[SimpleId]) -> Result<(), WordError> {
        match seq.iter().find(|s| !self.contains(**s)) {
            Some(s) => Err(WordError::UnknownSimple(s.to_string())),
            None => Ok(()),
        }
    }

    fn check_germ(&self, g: &GroupElement) -> Result<(), WordError> {
        if g.germ == self.id() {
            Ok(())
        } else {
            Err(WordError::GermMismatch)
        }
    }

    /// Left greedy normal form of the product of `seq`, with the leading Δs
    /// counted separately. Letters equal to `1` are dropped.
    pub fn normalize(&self, seq: &[SimpleId]) -> Result<Positive, WordError> {
        self.check_letters(seq)?;
        Ok(self.normalize_letters(seq.to_vec()))
    }

    pub(crate) fn normalize_letters(&self, mut letters: Vec<SimpleId>) -> Positive {
        letters.retain(|s| !s.is_one());
        while self.greedy_pass(&mut letters) {
            letters.retain(|s| !s.is_one());
        }
        let delta = self.delta();
        let deltas = letters.iter().take_while(|&&s| s == delta).count();
        letters.drain(..deltas);
        Positive { deltas: deltas as u64, word: PositiveWord(letters) }
    }

    /// One left-to-right sweep of the local rewrite `(a, b) -> (ac, c\b)` with
    /// `c = a* ∧ b`. Returns whether anything changed.
    fn greedy_pass(&self, letters: &mut [SimpleId]) -> bool {
        let mut changed = false;
        for i in 1..letters.len() {
            let (a, b) = (letters[i - 1], letters[i]);
            let c = self.meet(self.right_complement(a), b, Side::Left);
            if !c.is_one() {
                letters[i - 1] = self.product(a, c).expect("a·c divides Δ");
                letters[i] = self.lq(c, b);
                changed = true;
            }
        }
        changed
    }

    /// Right greedy normal form of a word, as a list of letters without `1`s.
    pub fn right_normal_form(&self, seq: &[SimpleId]) -> Vec<SimpleId> {
        let mut letters: Vec<SimpleId> = seq.iter().copied().filter(|s| !s.is_one()).collect();
        loop {
            let mut changed = false;
            for i in (1..letters.len()).rev() {
                let (a, b) = (letters[i - 1], letters[i]);
                let c = self.meet(a, self.left_complement(b), Side::Right);
                if !c.is_one() {
                    letters[i - 1] = self.rq(a, c);
                    letters[i] = self.product(c, b).expect("c·b divides Δ");
                    changed = true;
                }
            }
            letters.retain(|s| !s.is_one());
            if !changed {
                return letters;
            }
        }
    }

    /// LF(u), the left gcd of `u` with Δ.
    pub fn lf(&self, u: &Positive) -> SimpleId {
        if u.deltas > 0 {
            self.delta()
        } else {
            u.word.0.first().copied().unwrap_or(SimpleId::ONE)
        }
    }

    /// RF(u), the right gcd of `u` with Δ.
    pub fn rf(&self, u: &Positive) -> SimpleId {
        if u.deltas > 0 {
            self.delta()
        } else {
            self.right_normal_form(&u.word.0).last().copied().unwrap_or(SimpleId::ONE)
        }
    }

    /// Apply σ^k letterwise.
    pub fn sigma_word(&self, seq: &[SimpleId], k: i64) -> Vec<SimpleId> {
        seq.iter().map(|&s| self.sigma(s, k)).collect()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { germ: self.id(), prefix: PositiveWord::empty(), exp: 0 }
    }

    pub fn delta_power(&self, k: i64) -> GroupElement {
        GroupElement { germ: self.id(), prefix: PositiveWord::empty(), exp: k }
    }

    /// The element `seq · Δ^exp` in Deligne normal form.
    pub fn element(&self, seq: &[SimpleId], exp: i64) -> Result<GroupElement, WordError> {
        let p = self.normalize(seq)?;
        let mut g = self.positive_to_element(&p);
        g.exp += exp;
        Ok(g)
    }

    /// `Δ^k w = σ^k(w) Δ^k`.
    pub fn positive_to_element(&self, u: &Positive) -> GroupElement {
        let prefix = self.sigma_word(&u.word.0, u.deltas as i64);
        GroupElement { germ: self.id(), prefix: PositiveWord(prefix), exp: u.deltas as i64 }
    }

    /// The positive element equal to `g`, if there is one.
    pub fn element_to_positive(&self, g: &GroupElement) -> Result<Positive, WordError> {
        self.check_germ(g)?;
        if g.exp < 0 {
            return Err(WordError::NotPositive);
        }
        let word = self.sigma_word(&g.prefix.0, -g.exp);
        Ok(Positive { deltas: g.exp as u64, word: PositiveWord(word) })
    }

    pub fn mult(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, WordError> {
        self.check_germ(g)?;
        self.check_germ(h)?;
        let mut letters = g.prefix.0.clone();
        letters.extend(self.sigma_word(&h.prefix.0, g.exp));
        let p = self.normalize_letters(letters);
        let prefix = self.sigma_word(&p.word.0, p.deltas as i64);
        Ok(GroupElement {
            germ: self.id(),
            prefix: PositiveWord(prefix),
            exp: g.exp + h.exp + p.deltas as i64,
        })
    }

    /// Folds μ⁻¹ = μ*·Δ⁻¹ over the prefix in reverse, then multiplies by Δ^-exp on the left.
    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement, WordError> {
        self.check_germ(g)?;
        let mut acc = self.identity();
        for &mu in g.prefix.0.iter().rev() {
            let inv = GroupElement {
                germ: self.id(),
                prefix: PositiveWord(vec![self.right_complement(mu)]),
                exp: -1,
            };
            acc = self.mult(&acc, &inv)?;
        }
        self.mult(&self.delta_power(-g.exp), &acc)
    }

    pub fn equals(&self, g: &GroupElement, h: &GroupElement) -> Result<bool, WordError> {
        self.check_germ(g)?;
        self.check_germ(h)?;
        Ok(g.prefix == h.prefix && g.exp == h.exp)
    }

    /// `g^n` for any integer `n`.
    pub fn power(&self, g: &GroupElement, n: i64) -> Result<GroupElement, WordError> {
        self.check_germ(g)?;
        let base = if n < 0 { self.inverse(g)? } else { g.clone() };
        let mut acc = self.identity();
        for _ in 0..n.unsigned_abs() {
            acc = self.mult(&acc, &base)?;
        }
        Ok(acc)
    }

    /// Product of two positive elements.
    pub fn positive_mult(&self, u: &Positive, v: &Positive) -> Positive {
        // Δ^a w Δ^b x = Δ^(a+b) σ^-b(w) x
        let mut letters = self.sigma_word(&u.word.0, -(v.deltas as i64));
        letters.extend_from_slice(&v.word.0);
        let mut p = self.normalize_letters(letters);
        p.deltas += u.deltas + v.deltas;
        p
    }

    /// `c\u` for a simple `c ≤ LF(u)`.
    pub(crate) fn left_divide_simple(&self, c: SimpleId, u: &Positive) -> Positive {
        if c.is_one() {
            return u.clone();
        }
        if u.deltas > 0 {
            // c\(Δ^k w) = c* Δ^(k-1) w = Δ^(k-1) σ^-(k-1)(c*) w
            let k = u.deltas;
            let mut letters = vec![self.sigma(self.right_complement(c), 1 - k as i64)];
            letters.extend_from_slice(&u.word.0);
            let mut p = self.normalize_letters(letters);
            p.deltas += k - 1;
            p
        } else {
            let mut letters = u.word.0.clone();
            letters[0] = self.lq(c, letters[0]);
            self.normalize_letters(letters)
        }
    }

    /// Left gcd of two positive elements by repeatedly peeling off the meet of
    /// their left fronts.
    pub fn left_gcd(&self, u: &Positive, v: &Positive) -> Positive {
        let (mut u, mut v) = (u.clone(), v.clone());
        let mut acc = Vec::new();
        loop {
            let c = self.meet(self.lf(&u), self.lf(&v), Side::Left);
            if c.is_one() {
                break;
            }
            acc.push(c);
            u = self.left_divide_simple(c, &u);
            v = self.left_divide_simple(c, &v);
        }
        self.normalize_letters(acc)
    }

    /// ||u|| with the default node budget.
    pub fn norm(&self, u: &Positive) -> Result<u64, WordError> {
        NormCalculator::new(self, DEFAULT_NODE_BUDGET).norm(u)
    }

    /// |g|_𝒟 = number of prefix letters + |exp|.
    pub fn word_length(&self, g: &GroupElement) -> u64 {
        g.prefix.len() as u64 + g.exp.unsigned_abs()
    }

    /// Whether `w·η` begins with at most one Δ.
    pub fn one_delta_check(&self, w: &PositiveWord, eta: SimpleId) -> bool {
        let mut letters = w.0.clone();
        letters.push(eta);
        self.normalize_letters(letters).deltas <= 1
    }

    /// Parse a dot-separated word of simple names; the empty string is the empty word.
    pub fn parse_letters(&self, text: &str) -> Result<Vec<SimpleId>, WordError> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Vec::new());
        }
        text.split('.')
            .map(|name| {
                let name = name.trim();
                self.simple(name).ok_or_else(|| WordError::UnknownSimple(name.to_string()))
            })
            .collect()
    }

    /// Parse `WORD` or `WORD@k`, where `k` is the Δ-exponent.
    pub fn parse_element(&self, text: &str) -> Result<GroupElement, WordError> {
        let (word, exp) = match text.rsplit_once('@') {
            Some((w, e)) => {
                let e = e.trim();
                let exp = e.parse::<i64>().map_err(|_| WordError::BadExponent(e.to_string()))?;
                (w, exp)
            }
            None => (text, 0),
        };
        let letters = self.parse_letters(word)?;
        self.element(&letters, exp)
    }

    pub fn parse_positive(&self, text: &str) -> Result<Positive, WordError> {
        let g = self.parse_element(text)?;
        self.element_to_positive(&g)
    }

    pub fn render_letters(&self, seq: &[SimpleId]) -> String {
        seq.iter().map(|&s| self.name_of(s)).collect::<Vec<_>>().join(".")
    }

    /// Canonical text of a Deligne normal form, e.g. `s.t@2`; the identity is `""`.
    pub fn render_element(&self, g: &GroupElement) -> String {
        let mut out = self.render_letters(&g.prefix.0);
        if g.exp != 0 {
            out.push('@');
            out.push_str(&g.exp.to_string());
        }
        out
    }

    pub fn render_positive(&self, u: &Positive) -> String {
        self.render_element(&self.positive_to_element(u))
    }
}

/// Memoized computation of the norm ||u||: the longest factorization of a
/// positive element into atoms.
pub struct NormCalculator<'g> {
    germ: &'g Germ,
    memo: HashMap<Positive, u64>,
    budget: usize,
}

impl<'g> NormCalculator<'g> {
    pub fn new(germ: &'g Germ, budget: usize) -> Self {
        NormCalculator { germ, memo: HashMap::new(), budget }
    }

    /// Number of distinct elements whose norm has been computed.
    pub fn nodes(&self) -> usize {
        self.memo.len()
    }

    pub fn norm(&mut self, u: &Positive) -> Result<u64, WordError> {
        if u.is_identity() {
            return Ok(0);
        }
        if let Some(&n) = self.memo.get(u) {
            return Ok(n);
        }
        if self.memo.len() >= self.budget {
            return Err(WordError::BudgetExceeded { limit: self.budget });
        }
        let germ = self.germ;
        let head = germ.lf(u);
        let mut best = 0;
        for &a in germ.atoms() {
            if germ.left_divides(a, head) {
                let rest = germ.left_divide_simple(a, u);
                best = best.max(1 + self.norm(&rest)?);
            }
        }
        self.memo.insert(u.clone(), best);
        Ok(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::tests::a2;

    fn ids(g: &Germ, names: &[&str]) -> Vec<SimpleId> {
        names.iter().map(|n| g.simple(n).unwrap()).collect()
    }

    fn pos(g: &Germ, deltas: u64, names: &[&str]) -> Positive {
        Positive { deltas, word: PositiveWord(ids(g, names)) }
    }

    fn el(g: &Germ, names: &[&str], exp: i64) -> GroupElement {
        g.element(&ids(g, names), exp).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let g = a2();
        assert_eq!(g.normalize(&ids(&g, &["s", "ts"])).unwrap(), pos(&g, 1, &[]));
        assert_eq!(g.normalize(&ids(&g, &["s", "s"])).unwrap(), pos(&g, 0, &["s", "s"]));
        assert_eq!(g.normalize(&ids(&g, &["s", "t"])).unwrap(), pos(&g, 0, &["st"]));
        assert_eq!(g.normalize(&[]).unwrap(), Positive::identity());
        assert_eq!(g.normalize(&[SimpleId::ONE, SimpleId::ONE]).unwrap(), Positive::identity());
        assert!(matches!(g.normalize(&[SimpleId(99)]), Err(WordError::UnknownSimple(_))));
    }

    #[test]
    fn several_leading_deltas() {
        let g = a2();
        let p = g.normalize(&ids(&g, &["s", "t", "s", "t", "s", "t", "t"])).unwrap();
        assert_eq!(p, pos(&g, 2, &["t"]));
    }

    #[test]
    fn fronts() {
        let g = a2();
        let p = g.normalize(&ids(&g, &["s", "t", "s"])).unwrap();
        assert_eq!(g.lf(&p), g.delta());
        assert_eq!(g.lf(&Positive::identity()), SimpleId::ONE);
        assert_eq!(g.rf(&pos(&g, 0, &["s", "s"])), g.simple("s").unwrap());
        assert_eq!(g.rf(&pos(&g, 0, &["st", "t"])), g.simple("t").unwrap());
        assert_eq!(g.rf(&pos(&g, 2, &["s"])), g.delta());
        assert_eq!(g.rf(&Positive::identity()), SimpleId::ONE);
    }

    #[test]
    fn mult_examples() {
        let g = a2();
        assert_eq!(g.mult(&el(&g, &["s"], 0), &el(&g, &["t"], 0)).unwrap(), el(&g, &["st"], 0));
        let x = el(&g, &["st", "s"], -3);
        assert_eq!(g.mult(&x, &g.identity()).unwrap(), x);
        assert_eq!(g.mult(&el(&g, &["ts"], 0), &el(&g, &["ts"], 0)).unwrap().prefix().letters(), ids(&g, &["t"]));
        assert_eq!(g.mult(&el(&g, &["ts"], 0), &el(&g, &["ts"], 0)).unwrap().exp(), 1);
    }

    #[test]
    fn inverse_examples() {
        let g = a2();
        let inv = g.inverse(&el(&g, &["s"], 0)).unwrap();
        assert_eq!(inv.prefix().letters(), ids(&g, &["ts"]));
        assert_eq!(inv.exp(), -1);
        assert_eq!(g.inverse(&g.identity()).unwrap(), g.identity());
        assert_eq!(g.inverse(&g.delta_power(1)).unwrap(), g.delta_power(-1));
    }

    #[test]
    fn equality_examples() {
        let g = a2();
        let stst = el(&g, &["s", "t", "s", "t"], 0);
        assert!(g.equals(&stst, &el(&g, &["s"], 1)).unwrap());
        assert!(g.equals(&stst, &stst).unwrap());
        assert!(!g.equals(&el(&g, &["s"], 0), &el(&g, &["t"], 0)).unwrap());
    }

    #[test]
    fn germ_mismatch() {
        let g = a2();
        let mut raw = crate::germ::tests::a2_raw();
        raw.name = "other".into();
        let h = crate::germ::validate(&raw).unwrap();
        assert_eq!(g.mult(&g.identity(), &h.identity()), Err(WordError::GermMismatch));
        assert_eq!(g.equals(&h.identity(), &g.identity()), Err(WordError::GermMismatch));
    }

    #[test]
    fn gcd_examples() {
        let g = a2();
        let u = pos(&g, 0, &["st"]);
        assert_eq!(g.left_gcd(&u, &pos(&g, 0, &["s", "s"])), pos(&g, 0, &["s"]));
        assert_eq!(g.left_gcd(&u, &Positive::identity()), Positive::identity());
        let w = g.normalize(&ids(&g, &["st", "s", "s", "t"])).unwrap();
        assert_eq!(g.left_gcd(&w, &w), w);
        assert_eq!(g.left_gcd(&pos(&g, 2, &[]), &pos(&g, 1, &["s"])), pos(&g, 1, &["s"]));
        assert_eq!(g.left_gcd(&pos(&g, 0, &["s", "s"]), &pos(&g, 0, &["t"])), Positive::identity());
    }

    #[test]
    fn left_division_matches_group_route() {
        let g = a2();
        let u = g.normalize(&ids(&g, &["s", "t", "s", "s", "t", "t", "s"])).unwrap();
        for c in g.simples().filter(|&c| g.left_divides(c, g.lf(&u))) {
            let direct = g.left_divide_simple(c, &u);
            let via_group = g
                .mult(&g.inverse(&g.element(&[c], 0).unwrap()).unwrap(), &g.positive_to_element(&u))
                .unwrap();
            assert_eq!(g.element_to_positive(&via_group).unwrap(), direct);
        }
    }

    #[test]
    fn norm_examples() {
        let g = a2();
        assert_eq!(g.norm(&pos(&g, 1, &[])).unwrap(), 3);
        assert_eq!(g.norm(&pos(&g, 0, &["s"])).unwrap(), 1);
        assert_eq!(g.norm(&pos(&g, 0, &["st", "ts"])).unwrap(), 4);
        assert_eq!(g.norm(&Positive::identity()).unwrap(), 0);
    }

    #[test]
    fn norm_budget() {
        let g = a2();
        let mut calc = NormCalculator::new(&g, 2);
        assert_eq!(calc.norm(&pos(&g, 3, &[])), Err(WordError::BudgetExceeded { limit: 2 }));
    }

    #[test]
    fn word_lengths() {
        let g = a2();
        assert_eq!(g.word_length(&g.identity()), 0);
        assert_eq!(g.word_length(&el(&g, &["s"], 1)), 2);
        let x = GroupElement { germ: g.id(), prefix: PositiveWord(ids(&g, &["st", "ts"])), exp: -2 };
        assert_eq!(g.word_length(&x), 4);
    }

    #[test]
    fn one_delta_examples() {
        let g = a2();
        let s = g.simple("s").unwrap();
        assert!(g.one_delta_check(&PositiveWord(ids(&g, &["s"])), g.simple("ts").unwrap()));
        assert!(g.one_delta_check(&PositiveWord::empty(), s));
        assert!(g.one_delta_check(&PositiveWord(ids(&g, &["st", "ts"])), g.simple("t").unwrap()));
    }

    #[test]
    fn text_round_trip() {
        let g = a2();
        assert_eq!(g.render_element(&g.parse_element("s.t.s").unwrap()), "@1");
        assert_eq!(g.render_element(&g.parse_element("").unwrap()), "");
        assert_eq!(g.render_element(&g.parse_element("s.t.s.t").unwrap()), "s@1");
        assert_eq!(g.render_element(&g.parse_element("s@-1").unwrap()), "s@-1");
        assert_eq!(g.render_element(&g.inverse(&g.parse_element("s").unwrap()).unwrap()), "ts@-1");
        assert!(matches!(g.parse_element("s.x"), Err(WordError::UnknownSimple(_))));
        assert!(matches!(g.parse_element("s@q"), Err(WordError::BadExponent(_))));
        assert_eq!(g.parse_positive("s@-1"), Err(WordError::NotPositive));
    }
}
