//! The finite lattice of simple divisors of a Garside monoid.
//!
//! A [`Germ`] is built from raw table data by [`validate`], which checks the
//! finite germ axioms (identity, partial associativity, cancellation,
//! divisibility orders forming lattices with maximum Δ, unique complements)
//! and eagerly derives every lattice-level table. A validated germ is
//! immutable.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{DefaultHasher, Hash, Hasher};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Name reserved for the identity simple.
pub const IDENTITY_NAME: &str = "1";

/// Index of a simple divisor within one [`Germ`]. Index 0 is always `1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimpleId(pub u32);

impl SimpleId {
    pub const ONE: SimpleId = SimpleId(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_one(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for SimpleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Fingerprint of a germ's defining data, carried by group elements so that
/// elements of different germs are never mixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GermId(pub u64);

/// Which divisibility order a lattice operation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Left => f.write_str("left"),
            Side::Right => f.write_str("right"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Meet,
    Join,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Meet => f.write_str("meet"),
            Bound::Join => f.write_str("join"),
        }
    }
}

/// Germ data as it appears in a germ file, before any checking.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawGerm {
    pub name: String,
    pub simples: Vec<String>,
    pub delta: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<String>>,
    pub product: Vec<[String; 3]>,
}

/// One violated germ axiom, with the names that witness it.
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind")]
pub enum Violation {
    #[error("simples do not contain the identity \"1\"")]
    MissingIdentity,
    #[error("duplicate simple name {0:?}")]
    DuplicateName(String),
    #[error("unknown simple name {0:?}")]
    UnknownName(String),
    #[error("invalid simple name {0:?} (names must be non-empty without '.', '@' or whitespace)")]
    InvalidName(String),
    #[error("duplicate product entry for ({a}, {b})")]
    DuplicateEntry { a: String, b: String },
    #[error("product entry {a}·{b} = {c} contradicts the identity")]
    IdentityViolation { a: String, b: String, c: String },
    #[error("associativity fails for ({a}, {b}, {c})")]
    AssociativityViolation { a: String, b: String, c: String },
    #[error("cancellation fails: {}·{} = {}·{} = {product}", first[0], first[1], second[0], second[1])]
    CancellationViolation {
        first: [String; 2],
        second: [String; 2],
        product: String,
    },
    #[error("{side} divisibility is not antisymmetric on ({a}, {b})")]
    NotAPartialOrder { a: String, b: String, side: Side },
    #[error("no {bound} of ({a}, {b}) in the {side} divisibility order")]
    NotALattice {
        a: String,
        b: String,
        side: Side,
        bound: Bound,
    },
    #[error("{simple} is not a {side} divisor of delta")]
    DivisorMismatch { simple: String, side: Side },
    #[error("{simple} has {count} {side} complements")]
    ComplementNotUnique {
        simple: String,
        side: Side,
        count: usize,
    },
    #[error("declared atoms {declared:?} differ from derived atoms {derived:?}")]
    AtomMismatch {
        declared: Vec<String>,
        derived: Vec<String>,
    },
    #[error("sigma is not a product-preserving bijection (witness {a}, {b})")]
    SigmaNotAutomorphism { a: String, b: String },
}

/// Errors from lattice-level queries.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GermError {
    #[error("{a} does not {side}-divide {b}")]
    NotADivisor { a: String, b: String, side: Side },
}

/// A validated germ: the simple divisors, their partial product and every
/// derived lattice table.
#[derive(Clone, Debug)]
pub struct Germ {
    name: String,
    names: Vec<String>,
    by_name: HashMap<String, SimpleId>,
    delta: SimpleId,
    product: Vec<Option<SimpleId>>,
    atoms: Vec<SimpleId>,
    // down[b] = {a : a ≤ b}, up[a] = {b : a ≤ b}
    left_down: Vec<FixedBitSet>,
    left_up: Vec<FixedBitSet>,
    right_down: Vec<FixedBitSet>,
    right_up: Vec<FixedBitSet>,
    left_quot: Vec<Option<SimpleId>>,
    right_quot: Vec<Option<SimpleId>>,
    meet_left: Vec<SimpleId>,
    join_left: Vec<SimpleId>,
    meet_right: Vec<SimpleId>,
    join_right: Vec<SimpleId>,
    rc: Vec<SimpleId>,
    lc: Vec<SimpleId>,
    sigma: Vec<SimpleId>,
    sigma_inv: Vec<SimpleId>,
    norms: Vec<u32>,
    sigma_order: u32,
    id: GermId,
}

impl PartialEq for Germ {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.names == other.names
            && self.delta == other.delta
            && self.product == other.product
    }
}

impl Eq for Germ {}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && !name.contains(['.', '@']) && !name.chars().any(char::is_whitespace)
}

/// Check the germ axioms and derive all lattice data.
///
/// Internal indices are canonical: `1` is index 0 and the remaining simples
/// follow in byte order of their names, so the result does not depend on the
/// order of the input lists.
pub fn validate(raw: &RawGerm) -> Result<Germ, Vec<Violation>> {
    let mut violations = Vec::new();

    let mut seen = BTreeSet::new();
    for name in &raw.simples {
        if !valid_name(name) {
            violations.push(Violation::InvalidName(name.clone()));
        }
        if !seen.insert(name.as_str()) {
            violations.push(Violation::DuplicateName(name.clone()));
        }
    }
    if !seen.contains(IDENTITY_NAME) {
        violations.push(Violation::MissingIdentity);
    }
    if !seen.contains(raw.delta.as_str()) {
        violations.push(Violation::UnknownName(raw.delta.clone()));
    }
    if !violations.is_empty() {
        return Err(violations);
    }

    let mut names = vec![IDENTITY_NAME.to_string()];
    names.extend(seen.iter().filter(|n| **n != IDENTITY_NAME).map(|n| n.to_string()));
    let n = names.len();
    let by_name: HashMap<String, SimpleId> = names
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), SimpleId(i as u32)))
        .collect();
    let delta = by_name[&raw.delta];

    let mut product = vec![None; n * n];
    for i in 0..n {
        product[i] = Some(SimpleId(i as u32));
        product[i * n] = Some(SimpleId(i as u32));
    }
    let mut explicit = vec![false; n * n];
    for [a, b, c] in &raw.product {
        let ids: Vec<Option<SimpleId>> = [a, b, c].iter().map(|s| by_name.get(*s).copied()).collect();
        let mut unknown = false;
        for (s, id) in [a, b, c].iter().zip(&ids) {
            if id.is_none() {
                violations.push(Violation::UnknownName((*s).clone()));
                unknown = true;
            }
        }
        if unknown {
            continue;
        }
        let (ia, ib, ic) = (ids[0].unwrap(), ids[1].unwrap(), ids[2].unwrap());
        let slot = ia.index() * n + ib.index();
        if explicit[slot] {
            violations.push(Violation::DuplicateEntry { a: a.clone(), b: b.clone() });
            continue;
        }
        explicit[slot] = true;
        if ia.is_one() || ib.is_one() {
            if product[slot] != Some(ic) {
                violations.push(Violation::IdentityViolation {
                    a: a.clone(),
                    b: b.clone(),
                    c: c.clone(),
                });
            }
            continue;
        }
        product[slot] = Some(ic);
    }
    if !violations.is_empty() {
        return Err(violations);
    }

    let mut table = Table { n, names: &names, product, violations: Vec::new() };
    table.check_cancellation();
    table.check_associativity();
    let mut orders = table.divisibility(delta);
    table.check_lattice(&mut orders);
    let norms = table.norms(&orders);
    let atoms: Vec<SimpleId> = (1..n)
        .filter(|&i| orders.left_down[i].count_ones(..) == 2)
        .map(|i| SimpleId(i as u32))
        .collect();
    if let Some(declared) = &raw.atoms {
        let mut declared: Vec<String> = declared.clone();
        declared.sort();
        let mut derived: Vec<String> = atoms.iter().map(|a| names[a.index()].clone()).collect();
        derived.sort();
        if declared != derived {
            table.violations.push(Violation::AtomMismatch { declared, derived });
        }
    }
    let rc = table.complements(delta, Side::Left);
    let lc = table.complements(delta, Side::Right);
    if !table.violations.is_empty() {
        return Err(table.violations);
    }
    let rc: Vec<SimpleId> = rc.into_iter().map(Option::unwrap).collect();
    let lc: Vec<SimpleId> = lc.into_iter().map(Option::unwrap).collect();

    let sigma: Vec<SimpleId> = (0..n).map(|i| lc[lc[i].index()]).collect();
    let mut sigma_inv = vec![SimpleId::ONE; n];
    let mut hit = vec![false; n];
    for (i, s) in sigma.iter().enumerate() {
        hit[s.index()] = true;
        sigma_inv[s.index()] = SimpleId(i as u32);
    }
    if let Some(miss) = hit.iter().position(|h| !h) {
        table.violations.push(Violation::SigmaNotAutomorphism {
            a: names[miss].clone(),
            b: names[miss].clone(),
        });
    } else if sigma[0] != SimpleId::ONE || sigma[delta.index()] != delta {
        table.violations.push(Violation::SigmaNotAutomorphism {
            a: names[0].clone(),
            b: names[delta.index()].clone(),
        });
    } else {
        'outer: for a in 0..n {
            for b in 0..n {
                if let Some(c) = table.product[a * n + b] {
                    let image = table.product[sigma[a].index() * n + sigma[b].index()];
                    if image != Some(sigma[c.index()]) {
                        table.violations.push(Violation::SigmaNotAutomorphism {
                            a: names[a].clone(),
                            b: names[b].clone(),
                        });
                        break 'outer;
                    }
                }
            }
        }
    }
    if !table.violations.is_empty() {
        return Err(table.violations);
    }

    let mut sigma_order = 1u32;
    let mut power = sigma.clone();
    while power.iter().enumerate().any(|(i, s)| s.index() != i) {
        power = power.iter().map(|s| sigma[s.index()]).collect();
        sigma_order += 1;
    }

    let mut left_quot = vec![None; n * n];
    let mut right_quot = vec![None; n * n];
    for a in 0..n {
        for b in 0..n {
            if let Some(c) = table.product[a * n + b] {
                left_quot[a * n + c.index()] = Some(SimpleId(b as u32));
                right_quot[b * n + c.index()] = Some(SimpleId(a as u32));
            }
        }
    }

    let mut hasher = DefaultHasher::new();
    raw.name.hash(&mut hasher);
    names.hash(&mut hasher);
    delta.hash(&mut hasher);
    table.product.hash(&mut hasher);
    let id = GermId(hasher.finish());

    let Table { product, .. } = table;
    let Orders {
        left_down,
        left_up,
        right_down,
        right_up,
        meet_left,
        join_left,
        meet_right,
        join_right,
    } = orders;

    Ok(Germ {
        name: raw.name.clone(),
        by_name,
        names,
        delta,
        product,
        atoms,
        left_down,
        left_up,
        right_down,
        right_up,
        left_quot,
        right_quot,
        meet_left: meet_left.into_iter().map(Option::unwrap).collect(),
        join_left: join_left.into_iter().map(Option::unwrap).collect(),
        meet_right: meet_right.into_iter().map(Option::unwrap).collect(),
        join_right: join_right.into_iter().map(Option::unwrap).collect(),
        rc,
        lc,
        sigma,
        sigma_inv,
        norms,
        sigma_order,
        id,
    })
}

struct Table<'a> {
    n: usize,
    names: &'a [String],
    product: Vec<Option<SimpleId>>,
    violations: Vec<Violation>,
}

struct Orders {
    left_down: Vec<FixedBitSet>,
    left_up: Vec<FixedBitSet>,
    right_down: Vec<FixedBitSet>,
    right_up: Vec<FixedBitSet>,
    meet_left: Vec<Option<SimpleId>>,
    join_left: Vec<Option<SimpleId>>,
    meet_right: Vec<Option<SimpleId>>,
    join_right: Vec<Option<SimpleId>>,
}

impl Table<'_> {
    fn get(&self, a: usize, b: usize) -> Option<usize> {
        self.product[a * self.n + b].map(SimpleId::index)
    }

    fn name(&self, i: usize) -> String {
        self.names[i].clone()
    }

    fn check_cancellation(&mut self) {
        let n = self.n;
        for a in 0..n {
            let mut by_product: HashMap<usize, usize> = HashMap::new();
            for b in 0..n {
                if let Some(c) = self.get(a, b) {
                    if let Some(&b0) = by_product.get(&c) {
                        self.violations.push(Violation::CancellationViolation {
                            first: [self.name(a), self.name(b0)],
                            second: [self.name(a), self.name(b)],
                            product: self.name(c),
                        });
                    } else {
                        by_product.insert(c, b);
                    }
                }
            }
        }
        for b in 0..n {
            let mut by_product: HashMap<usize, usize> = HashMap::new();
            for a in 0..n {
                if let Some(c) = self.get(a, b) {
                    if let Some(&a0) = by_product.get(&c) {
                        self.violations.push(Violation::CancellationViolation {
                            first: [self.name(a0), self.name(b)],
                            second: [self.name(a), self.name(b)],
                            product: self.name(c),
                        });
                    } else {
                        by_product.insert(c, a);
                    }
                }
            }
        }
    }

    fn check_associativity(&mut self) {
        let n = self.n;
        let mut bad = BTreeSet::new();
        for a in 1..n {
            for b in 1..n {
                // (ab)c defined  =>  bc and a(bc) defined and equal
                if let Some(ab) = self.get(a, b) {
                    for c in 1..n {
                        if let Some(abc) = self.get(ab, c) {
                            let ok = self.get(b, c).and_then(|bc| self.get(a, bc)) == Some(abc);
                            if !ok {
                                bad.insert((a, b, c));
                            }
                        }
                    }
                }
            }
        }
        // a(bc) defined  =>  ab and (ab)c defined and equal
        for b in 1..n {
            for c in 1..n {
                if let Some(bc) = self.get(b, c) {
                    for a in 1..n {
                        if let Some(abc) = self.get(a, bc) {
                            let ok = self.get(a, b).and_then(|ab| self.get(ab, c)) == Some(abc);
                            if !ok {
                                bad.insert((a, b, c));
                            }
                        }
                    }
                }
            }
        }
        for (a, b, c) in bad {
            self.violations.push(Violation::AssociativityViolation {
                a: self.name(a),
                b: self.name(b),
                c: self.name(c),
            });
        }
    }

    fn divisibility(&mut self, delta: SimpleId) -> Orders {
        let n = self.n;
        let mut left_down = vec![FixedBitSet::with_capacity(n); n];
        let mut left_up = vec![FixedBitSet::with_capacity(n); n];
        let mut right_down = vec![FixedBitSet::with_capacity(n); n];
        let mut right_up = vec![FixedBitSet::with_capacity(n); n];
        for a in 0..n {
            for b in 0..n {
                if let Some(c) = self.get(a, b) {
                    left_down[c].insert(a);
                    left_up[a].insert(c);
                    right_down[c].insert(b);
                    right_up[b].insert(c);
                }
            }
        }
        for (side, down) in [(Side::Left, &left_down), (Side::Right, &right_down)] {
            for a in 0..n {
                for b in down[a].ones().filter(|&b| b > a) {
                    if down[b].contains(a) {
                        self.violations.push(Violation::NotAPartialOrder {
                            a: self.name(a),
                            b: self.name(b),
                            side,
                        });
                    }
                }
            }
            for s in 0..n {
                if !down[delta.index()].contains(s) {
                    self.violations.push(Violation::DivisorMismatch { simple: self.name(s), side });
                }
            }
        }
        Orders {
            left_down,
            left_up,
            right_down,
            right_up,
            meet_left: Vec::new(),
            join_left: Vec::new(),
            meet_right: Vec::new(),
            join_right: Vec::new(),
        }
    }

    fn check_lattice(&mut self, orders: &mut Orders) {
        let n = self.n;
        let passes: [(Side, Bound, &Vec<FixedBitSet>, &Vec<FixedBitSet>); 4] = [
            (Side::Left, Bound::Meet, &orders.left_down, &orders.left_down),
            (Side::Left, Bound::Join, &orders.left_up, &orders.left_down),
            (Side::Right, Bound::Meet, &orders.right_down, &orders.right_down),
            (Side::Right, Bound::Join, &orders.right_up, &orders.right_down),
        ];
        let mut tables = Vec::with_capacity(4);
        for (side, bound, sets, down) in passes {
            let mut out = vec![None; n * n];
            for a in 0..n {
                for b in a..n {
                    let mut common = sets[a].clone();
                    common.intersect_with(&sets[b]);
                    // The meet is the common lower bound with the most divisors,
                    // the join the common upper bound with the fewest.
                    let pick = match bound {
                        Bound::Meet => common.ones().max_by_key(|&c| (down[c].count_ones(..), c)),
                        Bound::Join => common.ones().min_by_key(|&c| (down[c].count_ones(..), c)),
                    };
                    let ok = pick.filter(|&c| match bound {
                        Bound::Meet => common.is_subset(&down[c]),
                        Bound::Join => common.ones().all(|u| down[u].contains(c)),
                    });
                    match ok {
                        Some(c) => {
                            out[a * n + b] = Some(SimpleId(c as u32));
                            out[b * n + a] = Some(SimpleId(c as u32));
                        }
                        None => self.violations.push(Violation::NotALattice {
                            a: self.name(a),
                            b: self.name(b),
                            side,
                            bound,
                        }),
                    }
                }
            }
            tables.push(out);
        }
        let mut it = tables.into_iter();
        orders.meet_left = it.next().unwrap();
        orders.join_left = it.next().unwrap();
        orders.meet_right = it.next().unwrap();
        orders.join_right = it.next().unwrap();
    }

    /// Longest atom chain from 1 to each simple, by dynamic programming in
    /// increasing number of left divisors.
    fn norms(&self, orders: &Orders) -> Vec<u32> {
        let n = self.n;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (orders.left_down[i].count_ones(..), i));
        let is_atom = |i: usize| i != 0 && orders.left_down[i].count_ones(..) == 2;
        let mut norms = vec![0u32; n];
        for &b in &order {
            let mut best = 0;
            for a in orders.left_down[b].ones().filter(|&a| a != b) {
                if let Some(x) = self.product[a * n..(a + 1) * n].iter().position(|p| p.map(SimpleId::index) == Some(b)) {
                    if is_atom(x) {
                        best = best.max(norms[a] + 1);
                    }
                }
            }
            norms[b] = best;
        }
        norms
    }

    fn complements(&mut self, delta: SimpleId, side: Side) -> Vec<Option<SimpleId>> {
        let n = self.n;
        let mut out = vec![None; n];
        for mu in 0..n {
            let found: Vec<usize> = (0..n)
                .filter(|&x| {
                    let p = match side {
                        Side::Left => self.get(mu, x),
                        Side::Right => self.get(x, mu),
                    };
                    p == Some(delta.index())
                })
                .collect();
            if found.len() == 1 {
                out[mu] = Some(SimpleId(found[0] as u32));
            } else {
                // Side::Left asks for μ* (μ on the left), reported as the right complement.
                let reported = match side {
                    Side::Left => Side::Right,
                    Side::Right => Side::Left,
                };
                self.violations.push(Violation::ComplementNotUnique {
                    simple: self.name(mu),
                    side: reported,
                    count: found.len(),
                });
            }
        }
        out
    }
}

impl Germ {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn id(&self) -> GermId {
        self.id
    }

    /// Number of simples, including `1` and Δ.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn delta(&self) -> SimpleId {
        self.delta
    }

    pub fn simples(&self) -> impl Iterator<Item = SimpleId> + '_ {
        (0..self.len() as u32).map(SimpleId)
    }

    /// 𝒟 − {1}.
    pub fn nontrivial(&self) -> impl Iterator<Item = SimpleId> + '_ {
        (1..self.len() as u32).map(SimpleId)
    }

    /// 𝒟 − {1, Δ}.
    pub fn proper(&self) -> impl Iterator<Item = SimpleId> + '_ {
        let delta = self.delta;
        self.nontrivial().filter(move |&s| s != delta)
    }

    pub fn name_of(&self, s: SimpleId) -> &str {
        &self.names[s.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn simple(&self, name: &str) -> Option<SimpleId> {
        self.by_name.get(name).copied()
    }

    pub fn contains(&self, s: SimpleId) -> bool {
        s.index() < self.len()
    }

    #[inline]
    fn slot(&self, a: SimpleId, b: SimpleId) -> usize {
        a.index() * self.len() + b.index()
    }

    /// The product `ab` when it is again simple.
    #[inline]
    pub fn product(&self, a: SimpleId, b: SimpleId) -> Option<SimpleId> {
        self.product[self.slot(a, b)]
    }

    pub fn atoms(&self) -> &[SimpleId] {
        &self.atoms
    }

    pub fn is_atom(&self, s: SimpleId) -> bool {
        self.atoms.binary_search(&s).is_ok()
    }

    /// μ* with μ·μ* = Δ.
    #[inline]
    pub fn right_complement(&self, mu: SimpleId) -> SimpleId {
        self.rc[mu.index()]
    }

    /// *μ with *μ·μ = Δ.
    #[inline]
    pub fn left_complement(&self, mu: SimpleId) -> SimpleId {
        self.lc[mu.index()]
    }

    /// σ^k(μ), where Δμ = σ(μ)Δ.
    pub fn sigma(&self, mu: SimpleId, k: i64) -> SimpleId {
        let m = self.sigma_order as i64;
        let k = k.rem_euclid(m);
        let (table, steps) = if 2 * k > m { (&self.sigma_inv, m - k) } else { (&self.sigma, k) };
        (0..steps).fold(mu, |acc, _| table[acc.index()])
    }

    /// The order m of σ: Δ^m is the smallest central power of Δ.
    pub fn sigma_order(&self) -> u32 {
        self.sigma_order
    }

    /// ||μ||, the longest factorization of μ into atoms.
    pub fn simple_norm(&self, mu: SimpleId) -> u32 {
        self.norms[mu.index()]
    }

    pub fn left_divides(&self, a: SimpleId, b: SimpleId) -> bool {
        self.left_down[b.index()].contains(a.index())
    }

    pub fn right_divides(&self, a: SimpleId, b: SimpleId) -> bool {
        self.right_down[b.index()].contains(a.index())
    }

    /// Simples `b` with `a ≤ b` in the chosen order.
    pub fn multiples(&self, a: SimpleId, side: Side) -> impl Iterator<Item = SimpleId> + '_ {
        let set = match side {
            Side::Left => &self.left_up[a.index()],
            Side::Right => &self.right_up[a.index()],
        };
        set.ones().map(|i| SimpleId(i as u32))
    }

    #[inline]
    pub fn meet(&self, a: SimpleId, b: SimpleId, side: Side) -> SimpleId {
        let slot = self.slot(a, b);
        match side {
            Side::Left => self.meet_left[slot],
            Side::Right => self.meet_right[slot],
        }
    }

    #[inline]
    pub fn join(&self, a: SimpleId, b: SimpleId, side: Side) -> SimpleId {
        let slot = self.slot(a, b);
        match side {
            Side::Left => self.join_left[slot],
            Side::Right => self.join_right[slot],
        }
    }

    /// `a\b`: the simple `c` with `ac = b`.
    pub fn left_quotient(&self, a: SimpleId, b: SimpleId) -> Result<SimpleId, GermError> {
        self.left_quot[self.slot(a, b)].ok_or_else(|| GermError::NotADivisor {
            a: self.name_of(a).to_string(),
            b: self.name_of(b).to_string(),
            side: Side::Left,
        })
    }

    /// `b/a`: the simple `c` with `ca = b`.
    pub fn right_quotient(&self, b: SimpleId, a: SimpleId) -> Result<SimpleId, GermError> {
        self.right_quot[self.slot(a, b)].ok_or_else(|| GermError::NotADivisor {
            a: self.name_of(a).to_string(),
            b: self.name_of(b).to_string(),
            side: Side::Right,
        })
    }

    /// Unchecked variants for callers that have already established divisibility.
    #[inline]
    pub(crate) fn lq(&self, a: SimpleId, b: SimpleId) -> SimpleId {
        self.left_quot[self.slot(a, b)].expect("left divisor")
    }

    #[inline]
    pub(crate) fn rq(&self, b: SimpleId, a: SimpleId) -> SimpleId {
        self.right_quot[self.slot(a, b)].expect("right divisor")
    }

    /// All defined products `(a, b, ab)` with `a, b ≠ 1`, in index order.
    pub fn product_entries(&self) -> impl Iterator<Item = (SimpleId, SimpleId, SimpleId)> + '_ {
        self.nontrivial().flat_map(move |a| {
            self.nontrivial().filter_map(move |b| self.product(a, b).map(|c| (a, b, c)))
        })
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn triple(a: &str, b: &str, c: &str) -> [String; 3] {
        [a.to_string(), b.to_string(), c.to_string()]
    }

    /// The classical A_2 germ written out by hand from S_3.
    pub(crate) fn a2_raw() -> RawGerm {
        RawGerm {
            name: "classical A2".into(),
            simples: ["1", "s", "t", "st", "ts", "sts"].iter().map(|s| s.to_string()).collect(),
            delta: "sts".into(),
            atoms: Some(vec!["s".into(), "t".into()]),
            product: vec![
                triple("s", "t", "st"),
                triple("t", "s", "ts"),
                triple("s", "ts", "sts"),
                triple("st", "s", "sts"),
                triple("t", "st", "sts"),
                triple("ts", "t", "sts"),
            ],
        }
    }

    pub(crate) fn a2() -> Germ {
        validate(&a2_raw()).expect("A2 germ is valid")
    }

    fn id(g: &Germ, name: &str) -> SimpleId {
        g.simple(name).unwrap()
    }

    #[test]
    fn a2_validates() {
        let g = a2();
        assert_eq!(g.len(), 6);
        assert_eq!(g.name_of(g.delta()), "sts");
        let atoms: Vec<&str> = g.atoms().iter().map(|&a| g.name_of(a)).collect();
        assert_eq!(atoms, ["s", "t"]);
    }

    #[test]
    fn a2_products() {
        let g = a2();
        assert_eq!(g.product(id(&g, "s"), id(&g, "t")), Some(id(&g, "st")));
        assert_eq!(g.product(id(&g, "s"), id(&g, "ts")), Some(g.delta()));
        assert_eq!(g.product(id(&g, "st"), id(&g, "ts")), None);
        assert_eq!(g.product(SimpleId::ONE, id(&g, "ts")), Some(id(&g, "ts")));
    }

    #[test]
    fn a2_complements_and_sigma() {
        let g = a2();
        assert_eq!(g.right_complement(id(&g, "s")), id(&g, "ts"));
        assert_eq!(g.right_complement(g.delta()), SimpleId::ONE);
        assert_eq!(g.left_complement(id(&g, "st")), id(&g, "t"));
        assert_eq!(g.sigma(id(&g, "s"), 1), id(&g, "t"));
        assert_eq!(g.sigma(id(&g, "st"), 1), id(&g, "ts"));
        assert_eq!(g.sigma(id(&g, "st"), -1), id(&g, "ts"));
        for k in -3..4 {
            assert_eq!(g.sigma(g.delta(), k), g.delta());
        }
        assert_eq!(g.sigma_order(), 2);
    }

    #[test]
    fn a2_lattice() {
        let g = a2();
        assert_eq!(g.meet(id(&g, "st"), id(&g, "ts"), Side::Left), SimpleId::ONE);
        assert_eq!(g.join(id(&g, "s"), id(&g, "t"), Side::Left), g.delta());
        assert_eq!(g.join(id(&g, "s"), id(&g, "t"), Side::Right), g.delta());
        assert_eq!(g.meet(id(&g, "st"), id(&g, "sts"), Side::Right), id(&g, "st"));
        for mu in g.simples() {
            assert_eq!(g.meet(mu, g.delta(), Side::Left), mu);
            assert_eq!(g.join(mu, SimpleId::ONE, Side::Right), mu);
        }
    }

    #[test]
    fn a2_quotients() {
        let g = a2();
        assert_eq!(g.left_quotient(id(&g, "s"), id(&g, "st")), Ok(id(&g, "t")));
        assert_eq!(g.right_quotient(id(&g, "st"), id(&g, "t")), Ok(id(&g, "s")));
        for b in g.simples() {
            assert_eq!(g.left_quotient(SimpleId::ONE, b), Ok(b));
        }
        assert!(matches!(
            g.left_quotient(id(&g, "t"), id(&g, "s")),
            Err(GermError::NotADivisor { .. })
        ));
    }

    #[test]
    fn a2_norms() {
        let g = a2();
        assert_eq!(g.simple_norm(g.delta()), 3);
        assert_eq!(g.simple_norm(SimpleId::ONE), 0);
        assert_eq!(g.simple_norm(id(&g, "ts")), 2);
    }

    #[test]
    fn input_order_is_irrelevant() {
        let mut raw = a2_raw();
        raw.simples.reverse();
        raw.product.reverse();
        assert_eq!(validate(&raw).unwrap(), a2());
    }

    #[test]
    fn corrupted_entry_is_rejected() {
        let mut raw = a2_raw();
        raw.product[0] = triple("s", "t", "ts");
        let errs = validate(&raw).unwrap_err();
        assert!(errs.iter().any(|v| matches!(
            v,
            Violation::AssociativityViolation { .. } | Violation::CancellationViolation { .. }
        )));
    }

    #[test]
    fn removing_delta_breaks_the_lattice() {
        let mut raw = a2_raw();
        raw.simples.retain(|s| s != "sts");
        raw.product.retain(|t| t[2] != "sts");
        raw.delta = "st".into();
        raw.atoms = None;
        let errs = validate(&raw).unwrap_err();
        assert!(errs.iter().any(|v| matches!(v, Violation::NotALattice { .. })), "{errs:?}");
        assert!(errs.iter().any(|v| matches!(v, Violation::DivisorMismatch { .. })));
    }

    #[test]
    fn loader_level_errors() {
        let mut raw = a2_raw();
        raw.simples.retain(|s| s != "1");
        assert_eq!(validate(&raw).unwrap_err(), vec![Violation::MissingIdentity]);

        let mut raw = a2_raw();
        raw.simples.push("s".into());
        assert!(validate(&raw).unwrap_err().contains(&Violation::DuplicateName("s".into())));

        let mut raw = a2_raw();
        raw.product.push(triple("s", "u", "st"));
        assert!(validate(&raw).unwrap_err().contains(&Violation::UnknownName("u".into())));

        let mut raw = a2_raw();
        raw.product.push(triple("s", "t", "st"));
        assert!(matches!(validate(&raw).unwrap_err()[0], Violation::DuplicateEntry { .. }));

        let mut raw = a2_raw();
        raw.product.push(triple("1", "s", "t"));
        assert!(matches!(validate(&raw).unwrap_err()[0], Violation::IdentityViolation { .. }));

        let mut raw = a2_raw();
        raw.atoms = Some(vec!["s".into()]);
        assert!(matches!(validate(&raw).unwrap_err()[0], Violation::AtomMismatch { .. }));
    }

    #[test]
    fn missing_complement_is_reported() {
        // Two atoms whose product is never Δ: the atom `b` has no right complement.
        let raw = RawGerm {
            name: "broken".into(),
            simples: ["1", "a", "b", "D"].iter().map(|s| s.to_string()).collect(),
            delta: "D".into(),
            atoms: None,
            product: vec![triple("a", "a", "D")],
        };
        let errs = validate(&raw).unwrap_err();
        assert!(errs.iter().any(|v| matches!(v, Violation::DivisorMismatch { .. })));
        assert!(errs.iter().any(|v| matches!(v, Violation::ComplementNotUnique { .. })));
    }

    #[test]
    fn cyclic_germ() {
        // Z with Δ = a²: the smallest germ with a nontrivial proper simple.
        let raw = RawGerm {
            name: "Z".into(),
            simples: ["1", "a", "aa"].iter().map(|s| s.to_string()).collect(),
            delta: "aa".into(),
            atoms: None,
            product: vec![triple("a", "a", "aa")],
        };
        let g = validate(&raw).unwrap();
        assert_eq!(g.simple_norm(g.delta()), 2);
        assert_eq!(g.sigma_order(), 1);
    }
}
