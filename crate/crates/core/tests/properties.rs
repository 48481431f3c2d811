mod common;

use std::collections::HashSet;
use std::sync::Arc;

use bsfibre::cartan::{
    bruhat_leq, coset_fixed_points, is_reduced, min_coset_rep, reflect, CartanDatum, ParabolicType, WeylElement, Word,
};
use bsfibre::chevalley::{realize_point, retract_point, FieldSpec};
use bsfibre::fibre::{deodhar_polynomial, fibre_report, FixedPoint, TargetWalls};
use bsfibre::gallery::{bs_cells_report, enumerate_galleries, half_space_test, load_bearing_set, wall_sequence, IndexSet};
use common::{binomial_row, datum, random_reduced_word, tau, TYPES};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A type from `TYPES`, a reduced word of length at most `max_len`, and a seed
/// for follow-up choices.
fn typed_word(max_len: usize) -> impl Strategy<Value = (Arc<CartanDatum>, Word, u64)> {
    (0..TYPES.len(), 0..=max_len, any::<u64>()).prop_map(|(t, len, seed)| {
        let d = datum(TYPES[t]);
        let len = len.min(common::longest_length(&d));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_reduced_word(&d, len, &mut rng);
        (d, w, seed)
    })
}

fn element(d: &CartanDatum, seed: u64) -> WeylElement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = rng.gen_range(0..=common::longest_length(d));
    WeylElement::from_word(d, &random_reduced_word(d, len, &mut rng)).unwrap()
}

fn random_subset(d: &CartanDatum, seed: u64) -> ParabolicType {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    ParabolicType::new((1..=d.rank()).filter(|_| rng.gen_bool(0.5)))
}

fn shifted_sum(parts: &[(usize, Vec<u64>)], len: usize) -> Vec<u64> {
    let mut total = vec![0u64; len + 1];
    for (shift, poly) in parts {
        for (p, c) in poly.iter().enumerate() {
            total[shift + p] += c;
        }
    }
    total
}

fn pick_point(d: &Arc<CartanDatum>, w: &Word, seed: u64) -> FixedPoint {
    let points = coset_fixed_points(d, w, ParabolicType::empty()).unwrap();
    let u = &points[seed as usize % points.len()];
    FixedPoint::new(d, u, ParabolicType::empty(), TargetWalls::Full)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reflections_are_involutions_on_roots(t in 0..TYPES.len()) {
        let d = datum(TYPES[t]);
        let roots: HashSet<_> = d.roots().iter().cloned().collect();
        for beta in d.roots() {
            for i in 1..=d.rank() {
                let image = reflect(&d, i, beta).unwrap();
                prop_assert!(roots.contains(&image));
                prop_assert_eq!(&reflect(&d, i, &image).unwrap(), beta);
            }
        }
    }

    #[test]
    fn reduced_words_realize_lengths((d, w, seed) in typed_word(12)) {
        let x = WeylElement::from_word(&d, &w).unwrap();
        prop_assert_eq!(x.length(), w.len());
        prop_assert!(is_reduced(&d, &w));
        let v = element(&d, seed);
        let word = v.reduced_word(&d);
        prop_assert!(is_reduced(&d, &word));
        prop_assert_eq!(word.len(), v.length());
        prop_assert_eq!(WeylElement::from_word(&d, &word).unwrap(), v);
    }

    #[test]
    fn bruhat_is_a_graded_partial_order(t in 0..TYPES.len(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let d = datum(TYPES[t]);
        let (u, v, w) = (element(&d, a), element(&d, b), element(&d, c));
        prop_assert!(bruhat_leq(&d, &u, &u));
        if bruhat_leq(&d, &u, &v) && bruhat_leq(&d, &v, &u) {
            prop_assert_eq!(&u, &v);
        }
        if bruhat_leq(&d, &u, &v) && bruhat_leq(&d, &v, &w) {
            prop_assert!(bruhat_leq(&d, &u, &w));
        }
        if bruhat_leq(&d, &u, &v) {
            prop_assert!(u.length() <= v.length());
            if u.length() == v.length() {
                prop_assert_eq!(&u, &v);
            }
        }
        for i in 1..=d.rank() {
            let us = u.times_simple(&d, i);
            let (lo, hi) = if us.length() > u.length() { (&u, &us) } else { (&us, &u) };
            prop_assert!(bruhat_leq(&d, lo, hi));
            prop_assert!(!bruhat_leq(&d, hi, lo));
        }
    }

    #[test]
    fn minimal_coset_representatives(t in 0..TYPES.len(), a in any::<u64>()) {
        let d = datum(TYPES[t]);
        let w = element(&d, a);
        let t0 = random_subset(&d, a);
        let m = min_coset_rep(&d, &w, t0);
        prop_assert!(m.length() <= w.length());
        prop_assert!(bruhat_leq(&d, &m, &w));
        for s in t0.generators() {
            prop_assert!(!m.has_right_descent(s));
            prop_assert_eq!(&min_coset_rep(&d, &m.times_simple(&d, s), t0), &m);
            prop_assert_eq!(&min_coset_rep(&d, &w.times_simple(&d, s), t0), &m);
        }
        prop_assert_eq!(&min_coset_rep(&d, &m, t0), &m);
    }

    #[test]
    fn load_bearing_sets_biject_onto_subsets((d, w, _) in typed_word(9)) {
        let t = tau(&d, &w);
        let sets: HashSet<IndexSet> = enumerate_galleries(&t).iter().map(|g| load_bearing_set(&t, g)).collect();
        prop_assert_eq!(sets.len(), 1usize << t.len());
        prop_assert_eq!(bs_cells_report(&t).poincare, binomial_row(t.len()));
    }

    #[test]
    fn load_bearing_half_space_dual((d, w, _) in typed_word(9)) {
        let t = tau(&d, &w);
        for g in enumerate_galleries(&t) {
            let direct: Vec<bool> = wall_sequence(&t, &g).iter().map(|r| r.load_bearing).collect();
            prop_assert_eq!(direct, half_space_test(&t, &g));
        }
    }

    #[test]
    fn fibres_reassemble_the_variety((d, w, _) in typed_word(8)) {
        let t = tau(&d, &w);
        let parts: Vec<(usize, Vec<u64>)> = coset_fixed_points(&d, &w, ParabolicType::empty())
            .unwrap()
            .iter()
            .map(|u| {
                let x = FixedPoint::new(&d, u, ParabolicType::empty(), TargetWalls::Full);
                (u.length(), fibre_report(&t, &x, None).unwrap().poincare)
            })
            .collect();
        prop_assert_eq!(shifted_sum(&parts, t.len()), binomial_row(t.len()));
    }

    #[test]
    fn fibre_cell_equations_are_consistent((d, w, seed) in typed_word(8)) {
        let t = tau(&d, &w);
        let x = pick_point(&d, &w, seed);
        for cell in fibre_report(&t, &x, None).unwrap().cells {
            prop_assert!(cell.j2.is_subset(&cell.load_bearing));
            prop_assert!(cell.equations.zero_indices.is_subset(&cell.load_bearing));
            prop_assert_eq!(cell.dim, cell.j2.len() - cell.equations.relations.len());
            prop_assert_eq!(cell.dim, cell.load_bearing.len() - x.u().length());
            for rel in &cell.equations.relations {
                for j in rel.support() {
                    prop_assert!(cell.j2.contains(j));
                    prop_assert!(!cell.equations.zero_indices.contains(j));
                }
            }
        }
    }

    #[test]
    fn open_point_fibre_is_a_point((d, w, _) in typed_word(10)) {
        let t = tau(&d, &w);
        let x = FixedPoint::new(&d, t.element(), ParabolicType::empty(), TargetWalls::Full);
        let rep = fibre_report(&t, &x, None).unwrap();
        prop_assert_eq!(rep.cells.len(), 1);
        prop_assert_eq!(rep.cells[0].dim, 0);
        prop_assert_eq!(rep.poincare, vec![1]);
    }

    #[test]
    fn fibre_cells_match_subexpressions((d, w, seed) in typed_word(8)) {
        let t = tau(&d, &w);
        let x = pick_point(&d, &w, seed);
        let rep = fibre_report(&t, &x, None).unwrap();
        prop_assert_eq!(rep.poincare, deodhar_polynomial(&d, &w, ParabolicType::empty(), x.u()).unwrap());
    }

    #[test]
    fn retraction_inverts_realization(len in 0usize..=6, a in any::<u64>()) {
        let d = datum("A3");
        let mut rng = ChaCha8Rng::seed_from_u64(a);
        let w = random_reduced_word(&d, len, &mut rng);
        let t = tau(&d, &w);
        let field = FieldSpec::new(7).unwrap();
        for g in enumerate_galleries(&t) {
            let j = load_bearing_set(&t, &g);
            let coords: Vec<i64> = t.indices().map(|i| if j.contains(i) { rng.gen_range(0..7) } else { 0 }).collect();
            prop_assert_eq!(retract_point(&realize_point(&t, &g, &vec![0; t.len()], field).unwrap()), g);
            prop_assert_eq!(retract_point(&realize_point(&t, &g, &coords, field).unwrap()), g);
        }
    }
}
