#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use bsfibre::cartan::{reduced_words, CartanDatum, ParabolicType, WeylElement, Word};
use bsfibre::gallery::GalleryType;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TYPES: [&str; 9] = ["A1", "A2", "A3", "A4", "B2", "B3", "C3", "D4", "G2"];

pub fn datum(name: &str) -> Arc<CartanDatum> {
    Arc::new(name.parse().unwrap())
}

pub fn tau(d: &Arc<CartanDatum>, word: &Word) -> GalleryType {
    GalleryType::new(d.clone(), word.clone(), ParabolicType::empty()).unwrap()
}

pub fn longest_length(d: &CartanDatum) -> usize {
    d.positive_roots().len()
}

/// Random reduced word of length `len`, built by appending non-descents.
pub fn random_reduced_word(d: &CartanDatum, len: usize, rng: &mut ChaCha8Rng) -> Word {
    let mut w = WeylElement::identity(d);
    let mut letters = Vec::with_capacity(len);
    while letters.len() < len {
        let k = rng.gen_range(1..=d.rank());
        if !w.has_right_descent(k) {
            w = w.times_simple(d, k);
            letters.push(k);
        }
    }
    Word::new(letters)
}

/// Up to `per_type` distinct seeded reduced words of length at most `max_len`
/// for every type in `TYPES`. Rank-two types may contribute all of their reduced words.
pub fn word_set(per_type: usize, max_len: usize, seed: u64) -> Vec<(Arc<CartanDatum>, Word)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for name in TYPES {
        let d = datum(name);
        let top = max_len.min(longest_length(&d));
        let mut chosen = BTreeSet::new();
        // Only rank-two types can run out of reduced words.
        let available = if d.rank() <= 2 { reduced_words(&d, top).len() } else { usize::MAX };
        let target = per_type.min(available);
        while chosen.len() < target {
            let len = rng.gen_range(0..=top);
            chosen.insert(random_reduced_word(&d, len, &mut rng));
        }
        out.extend(chosen.into_iter().map(|w| (d.clone(), w)));
    }
    out
}

pub fn binomial_row(r: usize) -> Vec<u64> {
    let mut row = vec![1u64];
    for _ in 0..r {
        let mut next = vec![1u64; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row
}
