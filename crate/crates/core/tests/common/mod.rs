#![allow(dead_code)]

use garside::geometry::Vertex;
use garside::{Germ, GroupElement, Positive, SimpleId};
use rand::Rng;

/// A word of up to `max_len` nontrivial simples.
pub fn word(germ: &Germ, rng: &mut impl Rng, max_len: usize) -> Vec<SimpleId> {
    let simples: Vec<SimpleId> = germ.nontrivial().collect();
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| simples[rng.gen_range(0..simples.len())]).collect()
}

pub fn positive(germ: &Germ, rng: &mut impl Rng, max_len: usize) -> Positive {
    germ.normalize(&word(germ, rng, max_len)).unwrap()
}

pub fn element(germ: &Germ, rng: &mut impl Rng, max_len: usize) -> GroupElement {
    let w = word(germ, rng, max_len);
    germ.element(&w, rng.gen_range(-3..=3)).unwrap()
}

pub fn vertex(germ: &Germ, rng: &mut impl Rng, max_len: usize) -> Vertex {
    germ.vertex(&element(germ, rng, max_len))
}

/// `Δ^k w` spelled out letter by letter.
pub fn letters_of(germ: &Germ, p: &Positive) -> Vec<SimpleId> {
    let mut out = vec![germ.delta(); p.deltas as usize];
    out.extend_from_slice(p.word.letters());
    out
}
