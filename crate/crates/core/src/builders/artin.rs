use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::perm::Perm;
use crate::germ::{validate, Germ, RawGerm, Violation};

/// Largest supported rank for type A.
pub const MAX_RANK_A: usize = 5;

const GENERATOR_NAMES: [&str; MAX_RANK_A] = ["s", "t", "u", "v", "w"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoxeterSpec {
    /// `A_n`, the symmetric group on `n + 1` points.
    A(usize),
    /// `I2(m)`, the dihedral group of order `2m`.
    I2(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("rank {rank} exceeds the supported maximum {max}")]
    RankTooLarge { rank: usize, max: usize },
    #[error("invalid Coxeter type: {0}")]
    InvalidSpec(String),
    #[error("built germ failed validation: {0:?}")]
    Invalid(Vec<Violation>),
}

impl CoxeterSpec {
    /// Parses a family (`A` or `I2`) and its rank or `m`.
    pub fn parse(family: &str, n: usize) -> Result<Self, BuildError> {
        let spec = match family {
            "A" | "a" => CoxeterSpec::A(n),
            "I2" | "i2" => CoxeterSpec::I2(n),
            other => return Err(BuildError::InvalidSpec(format!("unknown family {other:?}"))),
        };
        spec.check()?;
        Ok(spec)
    }

    fn check(self) -> Result<(), BuildError> {
        match self {
            CoxeterSpec::A(0) => Err(BuildError::InvalidSpec("A_n needs n ≥ 1".into())),
            CoxeterSpec::A(n) if n > MAX_RANK_A => Err(BuildError::RankTooLarge { rank: n, max: MAX_RANK_A }),
            CoxeterSpec::I2(m) if m < 3 => Err(BuildError::InvalidSpec("I2(m) needs m ≥ 3".into())),
            _ => Ok(()),
        }
    }

    /// Generating reflections as permutations.
    fn generators(self) -> Vec<Perm> {
        match self {
            CoxeterSpec::A(n) => (0..n).map(|i| Perm::transposition(n + 1, i, i + 1)).collect(),
            CoxeterSpec::I2(m) => vec![dihedral_reflection(m, 0), dihedral_reflection(m, 1)],
        }
    }
}

impl fmt::Display for CoxeterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoxeterSpec::A(n) => write!(f, "A{n}"),
            CoxeterSpec::I2(m) => write!(f, "I2({m})"),
        }
    }
}

impl FromStr for CoxeterSpec {
    type Err = BuildError;

    /// `A3`, `I2(5)`, or `I2 5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (family, rest) = if let Some(rest) = s.strip_prefix("I2") {
            ("I2", rest)
        } else if let Some(rest) = s.strip_prefix('A') {
            ("A", rest)
        } else {
            return Err(BuildError::InvalidSpec(s.to_string()));
        };
        let digits = rest.trim().trim_start_matches('(').trim_end_matches(')');
        let n = digits.parse().map_err(|_| BuildError::InvalidSpec(s.to_string()))?;
        CoxeterSpec::parse(family, n)
    }
}

/// `i ↦ k − i` on `0..m`.
fn dihedral_reflection(m: usize, k: usize) -> Perm {
    Perm::from_images((0..m).map(|i| (k + m - i) % m).collect())
}

/// `i ↦ i + 1` on `0..m`.
fn rotation(m: usize) -> Perm {
    Perm::from_images((0..m).map(|i| (i + 1) % m).collect())
}

fn finish(raw: RawGerm) -> Result<Germ, BuildError> {
    validate(&raw).map_err(BuildError::Invalid)
}

fn raw_germ(name: String, simples: &[(String, Perm)], delta: &Perm, atoms: Vec<String>, product: impl Fn(&Perm, &Perm) -> Option<Perm>) -> RawGerm {
    let names: HashMap<&Perm, &str> = simples.iter().map(|(n, p)| (p, n.as_str())).collect();
    let mut triples = Vec::new();
    for (a, u) in simples.iter().filter(|(_, p)| !p.is_identity()) {
        for (b, v) in simples.iter().filter(|(_, p)| !p.is_identity()) {
            if let Some(w) = product(u, v) {
                triples.push([a.clone(), b.clone(), names[&w].to_string()]);
            }
        }
    }
    RawGerm {
        name,
        simples: simples.iter().map(|(n, _)| n.clone()).collect(),
        delta: names[delta].to_string(),
        atoms: Some(atoms),
        product: triples,
    }
}

/// The classical Artin germ: simples are the elements of the Coxeter group,
/// and `u·v` is defined when lengths add. Each simple is named by its
/// lexicographically least reduced word.
pub fn classical_artin(spec: CoxeterSpec) -> Result<Germ, BuildError> {
    spec.check()?;
    let gens = spec.generators();
    let degree = gens[0].degree();
    // Breadth-first: layer k holds the elements of length k.
    let mut word: BTreeMap<Perm, String> = BTreeMap::new();
    let mut length: HashMap<Perm, usize> = HashMap::new();
    let identity = Perm::identity(degree);
    length.insert(identity.clone(), 0);
    let mut layer = vec![identity.clone()];
    let mut k = 0;
    while !layer.is_empty() {
        let mut next: BTreeMap<Perm, String> = BTreeMap::new();
        for y in &layer {
            let prefix = word.get(y).cloned().unwrap_or_default();
            for (g, name) in gens.iter().zip(GENERATOR_NAMES) {
                let x = y.compose(g);
                if length.contains_key(&x) && length[&x] <= k {
                    continue;
                }
                let candidate = format!("{prefix}{name}");
                next.entry(x).and_modify(|w| {
                    if candidate < *w {
                        *w = candidate.clone();
                    }
                }).or_insert(candidate);
            }
        }
        k += 1;
        layer = next.keys().cloned().collect();
        for (x, w) in next {
            length.insert(x.clone(), k);
            word.insert(x, w);
        }
    }
    let delta = length.iter().max_by_key(|(_, &l)| l).map(|(p, _)| p.clone()).unwrap();
    let mut simples = vec![("1".to_string(), identity)];
    simples.extend(word.into_iter().map(|(p, w)| (w, p)));
    let atoms = GENERATOR_NAMES[..gens.len()].iter().map(|s| s.to_string()).collect();
    let raw = raw_germ(format!("classical {spec}"), &simples, &delta, atoms, |u, v| {
        let w = u.compose(v);
        (length[u] + length[v] == length[&w]).then_some(w)
    });
    finish(raw)
}

/// The dual Artin germ: simples are the divisors of the Coxeter element in
/// reflection length, named in cycle notation.
pub fn dual_artin(spec: CoxeterSpec) -> Result<Germ, BuildError> {
    spec.check()?;
    let (delta, members, reflections): (Perm, Vec<Perm>, Vec<Perm>) = match spec {
        CoxeterSpec::A(n) => {
            let gens = spec.generators();
            let delta = gens.iter().skip(1).fold(gens[0].clone(), |acc, g| acc.compose(g));
            let members: Vec<Perm> = Perm::all(n + 1)
                .into_iter()
                .filter(|w| w.reflection_length() + w.inverse().compose(&delta).reflection_length() == n)
                .collect();
            let reflections = members.iter().filter(|w| w.reflection_length() == 1).cloned().collect();
            (delta, members, reflections)
        }
        CoxeterSpec::I2(m) => {
            let reflections: Vec<Perm> = (0..m).map(|k| dihedral_reflection(m, k)).collect();
            let delta = rotation(m);
            let mut members = vec![Perm::identity(m), delta.clone()];
            members.extend(reflections.iter().cloned());
            (delta, members, reflections)
        }
    };
    let mut simples: Vec<(String, Perm)> = members.into_iter().map(|p| (p.to_string(), p)).collect();
    simples.sort();
    let mut atoms: Vec<String> = reflections.iter().map(Perm::to_string).collect();
    atoms.sort();
    let rank = |p: &Perm| -> usize {
        match spec {
            CoxeterSpec::A(_) => p.reflection_length(),
            // Reflections have length 1, the rotation 2.
            CoxeterSpec::I2(_) => {
                if p.is_identity() {
                    0
                } else if *p == delta {
                    2
                } else {
                    1
                }
            }
        }
    };
    let is_simple: HashMap<Perm, usize> = simples.iter().map(|(_, p)| (p.clone(), rank(p))).collect();
    let raw = raw_germ(format!("dual {spec}"), &simples, &delta, atoms, |u, v| {
        let w = u.compose(v);
        let lw = *is_simple.get(&w)?;
        (is_simple[u] + is_simple[v] == lw).then_some(w)
    });
    finish(raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::cells;

    fn catalan(n: u64) -> u64 {
        (0..n).fold(1, |c, k| c * 2 * (2 * k + 1) / (k + 2))
    }

    #[test]
    fn classical_a2() {
        let g = classical_artin(CoxeterSpec::A(2)).unwrap();
        assert_eq!(g.name(), "classical A2");
        assert_eq!(g.len(), 6);
        assert_eq!(g.atoms().len(), 2);
        assert_eq!(g.name_of(g.delta()), "sts");
        assert_eq!(g.simple_norm(g.delta()), 3);
        assert_eq!(g.sigma_order(), 2);
        assert_eq!(g.names(), ["1", "s", "st", "sts", "t", "ts"]);
        assert_eq!(g, crate::germ::tests::a2());
    }

    #[test]
    fn classical_family() {
        for n in 1..=4usize {
            let g = classical_artin(CoxeterSpec::A(n)).unwrap();
            assert_eq!(g.len(), (1..=n + 1).product::<usize>());
            assert_eq!(g.simple_norm(g.delta()) as usize, n * (n + 1) / 2);
            assert_eq!(g.atoms().len(), n);
            for &a in g.atoms() {
                assert!(g.is_atom(g.sigma(a, 1)));
            }
        }
        let i3 = classical_artin(CoxeterSpec::I2(3)).unwrap();
        let a2 = classical_artin(CoxeterSpec::A(2)).unwrap();
        assert_eq!(i3.names(), a2.names());
        assert_eq!(i3.product_entries().count(), a2.product_entries().count());
        let i5 = classical_artin(CoxeterSpec::I2(5)).unwrap();
        assert_eq!(i5.len(), 10);
        assert_eq!(i5.simple_norm(i5.delta()), 5);
    }

    #[test]
    fn dual_family() {
        for n in 1..=4usize {
            let g = dual_artin(CoxeterSpec::A(n)).unwrap();
            assert_eq!(g.len() as u64, catalan(n as u64 + 1));
            assert_eq!(g.atoms().len(), n * (n + 1) / 2);
            assert_eq!(g.simple_norm(g.delta()) as usize, n);
            assert!(!cells(&g, n).is_empty());
            assert!(cells(&g, n + 1).is_empty());
        }
        let a2 = dual_artin(CoxeterSpec::A(2)).unwrap();
        assert_eq!(a2.names(), ["1", "(12)", "(123)", "(13)", "(23)"]);
        assert_eq!(a2.name_of(a2.delta()), "(123)");
        for m in 3..=7usize {
            let g = dual_artin(CoxeterSpec::I2(m)).unwrap();
            assert_eq!(g.len(), m + 2);
            assert_eq!(cells(&g, 2).len(), m);
        }
        let i3 = dual_artin(CoxeterSpec::I2(3)).unwrap();
        assert_eq!(i3.names(), a2.names());
        assert_eq!(i3.product_entries().collect::<Vec<_>>(), a2.product_entries().collect::<Vec<_>>());
    }

    #[test]
    fn specs() {
        assert_eq!("A3".parse::<CoxeterSpec>().unwrap(), CoxeterSpec::A(3));
        assert_eq!("I2(5)".parse::<CoxeterSpec>().unwrap(), CoxeterSpec::I2(5));
        assert_eq!(CoxeterSpec::parse("I2", 5).unwrap(), CoxeterSpec::I2(5));
        assert_eq!(classical_artin(CoxeterSpec::A(6)), Err(BuildError::RankTooLarge { rank: 6, max: 5 }));
        assert!(matches!(dual_artin(CoxeterSpec::I2(2)), Err(BuildError::InvalidSpec(_))));
        assert!(matches!(CoxeterSpec::parse("B", 3), Err(BuildError::InvalidSpec(_))));
    }
}
