//! Subexpression enumerators for fibre point counts. Works directly on words
//! and Weyl elements; nothing here reads walls or galleries.

use crate::cartan::{is_reduced, min_coset_rep, CartanDatum, ParabolicType, WeylElement, Word};
use crate::error::{Error, Result};

fn check(datum: &CartanDatum, word: &Word, t0: ParabolicType) -> Result<()> {
    word.validate(datum)?;
    t0.validate(datum)?;
    if !is_reduced(datum, word) {
        return Err(Error::NonReducedWord(word.to_string()));
    }
    Ok(())
}

fn add(poly: &mut Vec<u64>, degree: usize) {
    if poly.len() <= degree {
        poly.resize(degree + 1, 0);
    }
    poly[degree] += 1;
}

/// `sum_sigma q^{d(sigma) + l(pi(sigma)) - l(u)}` over all subexpressions
/// `sigma` of `word` whose product lies in `u W_{T0}`, where `d(sigma)` counts
/// the positions at which the running prefix has the next letter as a right
/// descent.
pub fn deodhar_polynomial(datum: &CartanDatum, word: &Word, t0: ParabolicType, u: &WeylElement) -> Result<Vec<u64>> {
    check(datum, word, t0)?;
    let u = min_coset_rep(datum, u, t0);
    let mut poly = Vec::new();
    let mut stack = vec![(0usize, WeylElement::identity(datum), 0usize)];
    while let Some((p, prefix, descents)) = stack.pop() {
        if p == word.len() {
            if min_coset_rep(datum, &prefix, t0) == u {
                add(&mut poly, descents + prefix.length() - u.length());
            }
            continue;
        }
        let k = word.letters()[p];
        let d = descents + usize::from(prefix.has_right_descent(k));
        stack.push((p + 1, prefix.times_simple(datum, k), d));
        stack.push((p + 1, prefix, d));
    }
    Ok(poly)
}

/// `sum q^{defect}` over distinguished subexpressions ending in `u W_{T0}`:
/// a letter that shortens the running prefix must be taken, and the defect
/// counts those forced steps.
pub fn distinguished_polynomial(datum: &CartanDatum, word: &Word, t0: ParabolicType, u: &WeylElement) -> Result<Vec<u64>> {
    check(datum, word, t0)?;
    let u = min_coset_rep(datum, u, t0);
    let mut poly = Vec::new();
    let mut stack = vec![(0usize, WeylElement::identity(datum), 0usize)];
    while let Some((p, prefix, defect)) = stack.pop() {
        if p == word.len() {
            if min_coset_rep(datum, &prefix, t0) == u {
                add(&mut poly, defect);
            }
            continue;
        }
        let k = word.letters()[p];
        if prefix.has_right_descent(k) {
            stack.push((p + 1, prefix.times_simple(datum, k), defect + 1));
        } else {
            stack.push((p + 1, prefix.times_simple(datum, k), defect));
            stack.push((p + 1, prefix, defect));
        }
    }
    Ok(poly)
}
