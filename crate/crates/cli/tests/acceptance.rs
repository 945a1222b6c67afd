//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Tolerances and time budgets are pinned below. Two criteria cannot pass as
//! stated and are listed in `UNATTAINABLE`; the run fails if the set of
//! failing criteria differs from that list in either direction.

#[path = "../../core/tests/common/printed.rs"]
mod printed;

use std::process::{Command, Output};
use std::time::{Duration, Instant};

use neurovar::network::GaugedMap;
use neurovar::scan::ScanSpec;
use neurovar::veronese::{AH_DEFECTIVE_ROWS, AH_NEIGHBOUR_ROWS, AH_SLOW_ROW};
use neurovar::{
    block_ranks, classify_secant, coefficient_map, gauge_fix, power_threshold_scan, prime_for_seed, scan, Architecture,
    CoefficientDomain, Domain, GaugeMask, Rationals, SparsePoly, WeightId,
};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const SEED: u64 = 20240601;
/// Criteria known to fail as stated; see the notes in the README.
const UNATTAINABLE: [u8; 2] = [6, 9];
/// Trials per secant classification.
const SECANT_TRIES: usize = 3;
const POWER_TRIALS: usize = 50;
const WITNESS_CHOICES: usize = 20;

struct Outcome {
    id: u8,
    title: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
    budget: Duration,
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn nv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nv")).args(args).env_remove("NV_SEED").env_remove("NV_THREADS").output().unwrap()
}

fn nv_json(args: &[&str]) -> (Value, Vec<u8>) {
    let out = nv(args);
    assert!(out.status.success(), "nv {args:?}: {}", String::from_utf8_lossy(&out.stderr));
    (serde_json::from_slice(&out.stdout).unwrap(), out.stdout)
}

fn dims(widths: &str, degrees: &str) -> (Value, Vec<u8>) {
    nv_json(&["dims", "-n", widths, "-d", degrees, "--seed", &SEED.to_string(), "--json"])
}

fn fields(v: &Value, keys: &[&str]) -> String {
    keys.iter().map(|k| format!("{k}={}", v[k])).collect::<Vec<_>>().join(" ")
}

fn check_dims(v: &Value, want: &[(&str, Value)]) -> bool {
    want.iter().all(|(k, w)| v[*k] == *w)
}

fn criterion_1() -> (bool, String) {
    let (v, _) = dims("2,3,2,1", "4,3");
    let ok = check_dims(&v, &[("expdim", 8.into()), ("dim_actual", 8.into()), ("defective", false.into())]);
    (ok, fields(&v, &["expdim", "dim_actual", "defective"]))
}

fn criterion_2() -> (bool, String) {
    let (v, _) = dims("2,3,2,1", "3,3");
    let want = [("expdim", 8.into()), ("dim_actual", 7.into()), ("fiber_dim", 1.into()), ("defective", true.into())];
    (check_dims(&v, &want), fields(&v, &["expdim", "dim_actual", "fiber_dim", "defective"]))
}

/// Gauge with `a12 = a21 = b12 = b22 = c12 = 1`, so that the point
/// `a11 = a22 = 0` puts the two level-one forms at `y` and `x`.
fn depth_three_gauge() -> GaugedMap {
    let a = Architecture::new(vec![2, 2, 2, 1], vec![3, 3]).unwrap();
    let w = |layer, row, col| WeightId { layer, row, col };
    let mask = GaugeMask::from_fixed(&a, &[w(1, 0, 1), w(1, 1, 0), w(2, 0, 1), w(2, 1, 1), w(3, 0, 1)]).unwrap();
    GaugedMap::new(&a, mask)
}

fn criterion_3() -> (bool, String) {
    let (v, _) = dims("2,2,2,1", "3,3");
    let ok = check_dims(&v, &[("expdim_refined", 5.into()), ("dim_actual", 5.into())]);
    let q = Rationals;
    let point: Vec<BigRational> = [0, 0, 2, 5, 7].iter().map(|&x| q.from_i64(x)).collect();
    let b = block_ranks(&depth_three_gauge(), &point, &q).unwrap();
    let blocks_ok = (b.normal_rank, b.last_rank, b.total) == (2, 3, 5);
    let detail = format!(
        "{} blocks ({}, {}) total {}",
        fields(&v, &["expdim_refined", "dim_actual"]),
        b.normal_rank,
        b.last_rank,
        b.total
    );
    (ok && blocks_ok, detail)
}

fn lin(a: &BigRational) -> SparsePoly<Rationals> {
    let x = SparsePoly::var(&Rationals, 2, 0);
    &x.scale(a) + &SparsePoly::var(&Rationals, 2, 1)
}

fn criterion_4() -> (bool, String) {
    let q = Rationals;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let x = SparsePoly::var(&q, 2, 0);
    let mut zero = 0;
    for _ in 0..WITNESS_CHOICES {
        let [a1, a2, a3, b11, b12]: [BigRational; 5] = std::array::from_fn(|_| {
            BigRational::new(rng.gen_range(-30i64..=30).into(), rng.gen_range(1i64..=7).into())
        });
        let (l1, l2, l3) = (lin(&a1), lin(&a2), lin(&a3));
        let r = &(&l1.pow(3).scale(&b11) + &l2.pow(3).scale(&b12)) + &l3.pow(3);
        let r2 = r.pow(2);
        let n = |v: i64| q.from_i64(v);
        let a = &a1 - &a2;
        let (d13, d23) = (&a1 - &a3, &a2 - &a3);
        let a_cubed = &a * &a * &a;
        let combo = [
            (n(3) * &d13 * &d23 * &d23 * &a, &(&r2 * &l1.pow(2)) * &x),
            (n(3) * &d13 * &d13 * &d23 * &a, &(&r2 * &l2.pow(2)) * &x),
            (-(&d23 * &d23 * (n(3) * &a1 - &a2 - n(2) * &a3)) - &b11 * &a_cubed, &r2 * &l1.pow(3)),
            (-(&d13 * &d13 * (&a1 - n(3) * &a2 + n(2) * &a3)) - &b12 * &a_cubed, &r2 * &l2.pow(3)),
            (a_cubed.clone(), r.pow(3)),
        ];
        let sum = combo.iter().fold(SparsePoly::zero(&q, 2), |acc, (c, b)| &acc + &b.scale(c));
        zero += usize::from(sum.is_zero());
    }
    (zero == WITNESS_CHOICES, format!("{zero}/{WITNESS_CHOICES} choices give the zero polynomial"))
}

fn criterion_5() -> (bool, String) {
    let arch = Architecture::new(vec![2, 2, 2, 1], vec![2, 2]).unwrap();
    let map = coefficient_map(&arch, &Rationals);
    let matched = printed::S_COEFFS
        .iter()
        .zip(&map.outputs[0])
        .filter(|(text, c)| printed::parse_latex(&arch, text) == **c)
        .count();
    let g = gauge_fix(&arch);
    let ok = matched == 5 && map.outputs[0].len() == 5 && g.free_count() == 5 && g.target_dim() == 4;
    (ok, format!("{matched}/5 coefficients match; domain {} target {}", g.free_count(), g.target_dim()))
}

fn criterion_6() -> (bool, String) {
    let slow = std::env::var_os("NV_ACCEPTANCE_SLOW").is_some();
    let mut defective_rows = AH_DEFECTIVE_ROWS.to_vec();
    if slow {
        defective_rows.push(AH_SLOW_ROW);
    }
    let mut wrong = Vec::new();
    let rows = defective_rows.iter().map(|r| (r, true)).chain(AH_NEIGHBOUR_ROWS.iter().map(|r| (r, false)));
    for (&(n, d, s), want) in rows {
        let c = classify_secant(n, d, s, SECANT_TRIES, SEED).unwrap();
        if c.defective != want {
            wrong.push(format!("({n},{d},{s}) dim {} expected {}", c.dim, c.expected));
        }
    }
    let total = defective_rows.len() + AH_NEIGHBOUR_ROWS.len();
    let detail = if wrong.is_empty() {
        format!("{total}/{total} rows classified")
    } else {
        format!("{}/{total} rows classified; misclassified {}", total - wrong.len(), wrong.join(", "))
    };
    (wrong.is_empty(), detail)
}

fn criterion_7() -> (bool, String) {
    let (v, _) = nv_json(&["relations", "--nvars", "2", "--degrees", "2,2", "--json"]);
    let polys: Vec<&str> = v["polynomials"].as_array().unwrap().iter().filter_map(Value::as_str).collect();
    let ok = v["dimension"] == 1 && (polys == ["z0*z2 - z1^2"] || polys == ["z1^2 - z0*z2"]);
    (ok, format!("dimension {} spanned by {polys:?}", v["dimension"]))
}

fn criterion_8() -> (bool, String) {
    let mut bad = Vec::new();
    let mut runs = 0;
    for d in [2, 3] {
        for k in 2..=6 {
            for s in 1..=3 {
                let r = power_threshold_scan(d, k, s, POWER_TRIALS, SEED);
                runs += 1;
                if !r.all_independent() {
                    bad.push(format!("(d={d},k={k},s={s}) {}/{}", r.independent_at_bound, r.trials));
                }
            }
        }
    }
    (
        bad.is_empty(),
        format!(
            "{}/{runs} cells fully independent at r = k-1{}",
            runs - bad.len(),
            bad.iter().map(|b| format!(" {b}")).collect::<String>()
        ),
    )
}

fn criterion_9() -> (bool, String) {
    let spec = ScanSpec::new(CoefficientDomain::PrimeField(prime_for_seed(SEED)), SEED);
    let rows = scan(&spec).unwrap();
    let failed = rows.iter().filter(|r| r.report.is_err()).count();
    let disagree: Vec<&_> = rows.iter().filter(|r| !r.agreement).collect();
    let thin = disagree.iter().filter(|r| r.arch.widths()[..r.arch.depth()].contains(&1)).count();
    let sample: Vec<String> = disagree.iter().take(3).map(|r| r.arch.to_string()).collect();
    let detail = format!(
        "{} rows, {} disagreements ({thin} with a width-1 layer), {failed} sampling errors; e.g. {}",
        rows.len(),
        disagree.len(),
        sample.join(" ")
    );
    (disagree.is_empty() && failed == 0, detail)
}

fn criterion_10() -> (bool, String) {
    let (v, _) = dims("2,2,2,2", "3,3");
    let (c, _) = nv_json(&["check", "-n", "2,2,2,2", "-d", "3,3", "--json"]);
    let ok = check_dims(&v, &[("expdim", 6.into()), ("dim_actual", 6.into())]) && c["kind"] == "PredictedIdentifiable";
    (ok, format!("{} check {}", fields(&v, &["expdim", "dim_actual"]), c["kind"]))
}

fn criterion_11() -> (bool, String) {
    let cases = [("2,3,2,1", "4,3"), ("2,3,2,1", "3,3"), ("2,2,2,1", "3,3")];
    let same = cases.iter().filter(|(w, d)| dims(w, d).1 == dims(w, d).1).count();
    (same == cases.len(), format!("{same}/{} reruns byte-identical", cases.len()))
}

fn main() {
    type Check = fn() -> (bool, String);
    let criteria: [(u8, &str, Check, u64); 11] = [
        (1, "(2,3,2,1),(4,3) dimension", criterion_1, 5),
        (2, "room failure is defective", criterion_2, 5),
        (3, "(2,2,2,1),(3,3) dimension and blocks", criterion_3, 5),
        (4, "defect witness relation", criterion_4, 10),
        (5, "coefficient fidelity", criterion_5, 5),
        (6, "secant table cross-check", criterion_6, 60),
        (7, "composite Veronese relation", criterion_7, 2),
        (8, "powers independent at k-1", criterion_8, 120),
        (9, "theorem vs sampling on the grid", criterion_9, 600),
        (10, "multi-output identifiability", criterion_10, 5),
        (11, "determinism", criterion_11, 15),
    ];
    let mut outcomes = Vec::new();
    for (id, title, check, budget) in criteria {
        let start = Instant::now();
        let (pass, detail) = check();
        outcomes.push(Outcome { id, title, pass, detail, elapsed: start.elapsed(), budget: secs(budget) });
    }
    for o in &outcomes {
        let in_time = o.elapsed < o.budget;
        let verdict = if o.pass && in_time { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {verdict} {}: {} [{:.2}s of {}s]",
            o.id,
            o.title,
            o.detail,
            o.elapsed.as_secs_f64(),
            o.budget.as_secs()
        );
    }
    let failing: Vec<u8> = outcomes.iter().filter(|o| !(o.pass && o.elapsed < o.budget)).map(|o| o.id).collect();
    println!(
        "acceptance: {}/{} pass; failing {failing:?}; pinned unattainable {UNATTAINABLE:?}",
        11 - failing.len(),
        11
    );
    if failing != UNATTAINABLE {
        eprintln!("failing criteria differ from the pinned unattainable set");
        std::process::exit(1);
    }
}
