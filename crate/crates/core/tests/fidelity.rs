//! Symbolic coefficient map against hand-expanded coefficients and against
//! the numeric forward pass.

mod common;

use common::printed::{parse_latex, S_COEFFS};
use neurovar::network::{forward_numeric, NetworkRing, WeightAssignment};
use neurovar::{coefficient_map, gauge_fix, Architecture, Domain, Rationals, WeightId};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn printed_coefficients_match_term_for_term() {
    let arch = Architecture::new(vec![2, 2, 2, 1], vec![2, 2]).unwrap();
    let q = Rationals;
    let map = coefficient_map(&arch, &q);
    assert_eq!(map.outputs[0].len(), 5);
    for (i, text) in S_COEFFS.iter().enumerate() {
        let expected = parse_latex(&arch, text);
        let names = map.names();
        assert_eq!(
            map.outputs[0][i],
            expected,
            "s_{i}: got {} expected {}",
            map.outputs[0][i].display(&names),
            expected.display(&names)
        );
        assert_eq!(map.outputs[0][i].num_terms(), expected.num_terms());
    }
}

#[test]
fn gauged_map_dimensions() {
    let arch = Architecture::new(vec![2, 2, 2, 1], vec![2, 2]).unwrap();
    let g = gauge_fix(&arch);
    assert_eq!(g.free_count(), 5);
    assert_eq!(g.target_dim(), 4);
    let names: Vec<String> = g.free_weights().iter().map(WeightId::name).collect();
    assert_eq!(names, ["w1_0_0", "w1_1_0", "w2_0_0", "w2_1_0", "w3_0_0"]);
}

#[test]
fn output_degrees_per_layer() {
    // Every coefficient is homogeneous of degree d_k ... d_{L-1} in the
    // entries of W_k, of degree 1 in W_L, and free of the inputs.
    let q = Rationals;
    for (w, d) in [(vec![2, 2, 2, 1], vec![2, 2]), (vec![2, 3, 2, 1], vec![3, 2]), (vec![3, 2, 2], vec![3])] {
        let arch = Architecture::new(w, d).unwrap();
        let ring = NetworkRing::new(&arch);
        let map = coefficient_map(&arch, &q);
        let inputs: Vec<usize> = (0..arch.inputs()).collect();
        for out in &map.outputs {
            for c in out {
                assert!(c.degrees_in(&inputs).iter().all(|&e| e == 0));
                for k in 1..=arch.depth() {
                    let vars = ring.layer_vars(k);
                    assert!(c.is_homogeneous_in(&vars), "{arch} layer {k}");
                    let want: u32 = arch.degrees()[k - 1..].iter().product();
                    assert!(c.degrees_in(&vars).iter().all(|&e| e == want), "{arch} layer {k}");
                }
            }
        }
    }
}

fn random_weights(arch: &Architecture, rng: &mut ChaCha8Rng) -> WeightAssignment<BigRational> {
    let q = Rationals;
    let layers = (1..=arch.depth())
        .map(|k| {
            (0..arch.width(k))
                .map(|_| (0..arch.width(k - 1)).map(|_| q.from_i64(rng.gen_range(-9..=9))).collect())
                .collect()
        })
        .collect();
    WeightAssignment::new(arch, layers).unwrap()
}

fn numeric_coeffs(arch: &Architecture, w: &WeightAssignment<BigRational>) -> Vec<Vec<BigRational>> {
    forward_numeric(arch, w, &Rationals).last().unwrap().iter().map(|f| f.coeffs().to_vec()).collect()
}

#[test]
fn symbolic_and_numeric_paths_agree() {
    let q = Rationals;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (w, d) in [(vec![2, 2, 2, 1], vec![3, 3]), (vec![3, 2, 2], vec![2]), (vec![2, 3, 2, 2], vec![2, 2])] {
        let arch = Architecture::new(w, d).unwrap();
        let ring = NetworkRing::new(&arch);
        let map = coefficient_map(&arch, &q);
        for _ in 0..3 {
            let w = random_weights(&arch, &mut rng);
            let mut point = vec![q.zero(); ring.nvars()];
            for k in 1..=arch.depth() {
                for r in 0..arch.width(k) {
                    for c in 0..arch.width(k - 1) {
                        let id = WeightId { layer: k, row: r, col: c };
                        point[ring.weight_var(id)] = w.get(id).clone();
                    }
                }
            }
            let symbolic: Vec<Vec<BigRational>> =
                map.outputs.iter().map(|o| o.iter().map(|c| c.eval(&point)).collect()).collect();
            assert_eq!(symbolic, numeric_coeffs(&arch, &w));
        }
    }
}

#[test]
fn hidden_permutations_and_rescalings_fix_the_output() {
    let q = Rationals;
    let arch = Architecture::new(vec![2, 3, 2, 1], vec![2, 3]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let w = random_weights(&arch, &mut rng);
    let base = numeric_coeffs(&arch, &w);

    // Swap hidden neurons 0 and 2 of layer 1.
    let perm = [2usize, 1, 0];
    let swapped = w.map(|id, v| match id.layer {
        1 => w.get(WeightId { row: perm[id.row], ..id }).clone(),
        2 => w.get(WeightId { col: perm[id.col], ..id }).clone(),
        _ => v.clone(),
    });
    assert_eq!(numeric_coeffs(&arch, &swapped), base);

    // Scale row 1 of W_2 by t and column 1 of W_3 by t^{-d_2}.
    let t = q.from_i64(5);
    let t_inv = q.inv(&q.pow(&t, 3)).unwrap();
    let scaled = w.map(|id, v| match (id.layer, id.row, id.col) {
        (2, 1, _) => q.mul(v, &t),
        (3, _, 1) => q.mul(v, &t_inv),
        _ => v.clone(),
    });
    assert_eq!(numeric_coeffs(&arch, &scaled), base);
}
