//! Secant classification, composite Veronese relations and power independence.

use neurovar::forms::{binomial, form_dim};
use neurovar::veronese::{expected_secant_dim, AH_DEFECTIVE_ROWS, AH_NEIGHBOUR_ROWS, DEFAULT_OVERSAMPLE_MARGIN};
use neurovar::{
    ah_secant_defective, classify_secant, composite_veronese, empirical_secant_dim, image_linear_relations,
    power_threshold_scan, Error,
};

/// Rows where sampling and the lookup table are known to disagree: the cubic
/// exception sits at seven summands, not eight.
const FLIPPED: [(usize, u32, usize); 2] = [(5, 3, 7), (5, 3, 8)];

#[test]
fn secant_lookup_matches_sampling_on_small_ambients() {
    let mut checked = 0;
    for nvars in 2..=5usize {
        for deg in 2..=4u32 {
            let ambient = binomial(nvars as u64 - 1 + deg as u64, nvars as u64 - 1);
            if ambient > 70 {
                continue;
            }
            for s in 1..=10usize {
                let c = classify_secant(nvars, deg, s, 3, 7).unwrap();
                let table = ah_secant_defective(nvars, deg, s);
                if FLIPPED.contains(&(nvars, deg, s)) {
                    assert_ne!(c.defective, table, "({nvars},{deg},{s}) expected to stay flipped");
                } else {
                    assert_eq!(c.defective, table, "({nvars},{deg},{s}): dim {} vs {}", c.dim, c.expected);
                }
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 120);
}

#[test]
fn cubic_exception_is_at_seven_summands() {
    assert_eq!(empirical_secant_dim(5, 3, 7, 3, 1).unwrap(), 33);
    assert_eq!(expected_secant_dim(5, 3, 7), 34);
    assert_eq!(empirical_secant_dim(5, 3, 8, 3, 1).unwrap(), 34);
}

#[test]
fn secant_dimensions_grow_then_saturate() {
    for (nvars, deg) in [(3, 4), (4, 2), (5, 3)] {
        let dims: Vec<usize> = (1..=9).map(|s| empirical_secant_dim(nvars, deg, s, 3, 2).unwrap()).collect();
        assert!(dims.windows(2).all(|w| w[0] <= w[1]), "({nvars},{deg}): {dims:?}");
        assert_eq!(dims[0], nvars - 1);
    }
}

#[test]
fn table_rows_are_classified_by_the_lookup() {
    for (n, d, s) in AH_DEFECTIVE_ROWS {
        assert!(ah_secant_defective(n, d, s));
    }
    for (n, d, s) in AH_NEIGHBOUR_ROWS {
        assert!(!ah_secant_defective(n, d, s));
    }
}

#[test]
fn secant_dims_do_not_depend_on_the_seed() {
    for seed in [1, 99, 20240601] {
        assert_eq!(empirical_secant_dim(3, 4, 5, 3, seed).unwrap(), 13);
        assert_eq!(empirical_secant_dim(3, 2, 2, 3, seed).unwrap(), 4);
    }
}

#[test]
fn relation_count_is_ambient_minus_span() {
    // The image spans every form of degree prod(degrees).
    for (n, degrees) in [(2, vec![2, 2]), (2, vec![3, 2]), (2, vec![2, 3]), (3, vec![2, 2]), (2, vec![2, 2, 2])] {
        let cv = composite_veronese(n, &degrees).unwrap();
        let total: u32 = degrees.iter().product();
        let rels = image_linear_relations(&cv, cv.ambient_coords() + DEFAULT_OVERSAMPLE_MARGIN, 5).unwrap();
        assert_eq!(rels.len(), cv.ambient_coords() - form_dim(n, total), "{n} {degrees:?}");
    }
}

#[test]
fn relations_do_not_depend_on_the_seed() {
    let cv = composite_veronese(2, &[3, 2]).unwrap();
    let base = image_linear_relations(&cv, cv.ambient_coords() + DEFAULT_OVERSAMPLE_MARGIN, 1).unwrap();
    for seed in [2, 3, 1000] {
        assert_eq!(image_linear_relations(&cv, cv.ambient_coords() + DEFAULT_OVERSAMPLE_MARGIN, seed).unwrap(), base);
    }
}

#[test]
fn conic_composite_has_one_relation() {
    let cv = composite_veronese(2, &[2, 2]).unwrap();
    let rels = image_linear_relations(&cv, cv.ambient_coords() + DEFAULT_OVERSAMPLE_MARGIN, 20240601).unwrap();
    assert_eq!(rels.len(), 1);
    assert_eq!(cv.display_relation(&rels[0]), "z0*z2 - z1^2");
}

#[test]
fn composite_veronese_rejects_bad_input() {
    assert!(matches!(composite_veronese(2, &[1, 2]), Err(Error::DegreeBelowTwo { .. })));
    assert!(composite_veronese(0, &[2]).is_err());
    assert!(matches!(composite_veronese(6, &[4, 4]), Err(Error::AmbientTooLarge { .. })));
}

#[test]
fn powers_become_independent_by_k_minus_one() {
    for (d, k, s) in [(2, 3, 2), (3, 4, 2), (2, 5, 3)] {
        let r = power_threshold_scan(d, k, s, 5, 4);
        assert!(r.all_independent(), "{d} {k} {s}");
        assert!(r.monotone);
        assert!(r.minimal_r.iter().all(|m| m.is_some_and(|m| m <= (k as u32 - 1).max(1))));
    }
}
