//! Hand-expanded coefficients of (2,2,2,1),(2,2), shared by the fidelity
//! and acceptance targets.

use neurovar::network::NetworkRing;
use neurovar::{Architecture, Domain, Monomial, Rationals, SparsePoly, WeightId};
use regex::Regex;

/// Coefficients of `x0^4, x0^3 x1, ..., x1^4` for (2,2,2,1),(2,2) in LaTeX
/// notation; `a`, `b`, `c` are the entries of `W_1`, `W_2`, `W_3`.
pub const S_COEFFS: [&str; 5] = [
    r"a_{0,0}^4b_{0,0}^2c_{0,0} + a_{0,0}^4b_{1,0}^2c_{0,1} + 2a_{0,0}^2a_{1,0}^2b_{0,0}b_{0,1}c_{0,0} + 2a_{0,0}^2a_{1,0}^2b_{1,0}b_{1,1}c_{0,1} + a_{1,0}^4b_{0,1}^2c_{0,0} + a_{1,0}^4b_{1,1}^2c_{0,1};",
    r"4a_{0,0}^3a_{0,1}b_{0,0}^2c_{0,0} + 4a_{0,0}^3a_{0,1}b_{1,0}^2c_{0,1} + 4a_{0,0}^2a_{1,0}a_{1,1}b_{0,0}b_{0,1}c_{0,0}  + 4a_{0,0}^2a_{1,0}a_{1,1}b_{1,0}b_{1,1}c_{0,1} + 4a_{0,0}a_{0,1}a_{1,0}^2b_{0,0}b_{0,1}c_{0,0}\\
 & & + 4a_{0,0}a_{0,1}a_{1,0}^2b_{1,0}b_{1,1}c_{0,1} + 4a_{1,0}^3a_{1,1}b_{0,1}^2c_{0,0} + 4a_{1,0}^3a_{1,1}b_{1,1}^2c_{0,1};",
    r"6a_{0,0}^2a_{0,1}^2b_{0,0}^2c_{0,0} + 6a_{0,0}^2a_{0,1}^2b_{1,0}^2c_{0,1} + 2a_{0,0}^2a_{1,1}^2b_{0,0}b_{0,1}c_{0,0} + 2a_{0,0}^2a_{1,1}^2b_{1,0}b_{1,1}c_{0,1} + 8a_{0,0}a_{0,1}a_{1,0}a_{1,1}b_{0,0}b_{0,1}c_{0,0}; \\
 & & + 8a_{0,0}a_{0,1}a_{1,0}a_{1,1}b_{1,0}b_{1,1}c_{0,1} + 2a_{0,1}^2a_{1,0}^2b_{0,0}b_{0,1}c_{0,0} + 2a_{0,1}^2a_{1,0}^2b_{1,0}b_{1,1}c_{0,1} + 6a_{1,0}^2a_{1,1}^2b_{0,1}^2c_{0,0} + 6a_{1,0}^2a_{1,1}^2b_{1,1}^2c_{0,1};",
    r"4a_{0,0}a_{0,1}^3b_{0,0}^2c_{0,0} + 4a_{0,0}a_{0,1}^3b_{1,0}^2c_{0,1} + 4a_{0,0}a_{0,1}a_{1,1}^2b_{0,0}b_{0,1}c_{0,0} + 4a_{0,0}a_{0,1}a_{1,1}^2b_{1,0}b_{1,1}c_{0,1} + 4a_{0,1}^2a_{1,0}a_{1,1}b_{0,0}b_{0,1}c_{0,0};  \\
 & & + 4a_{0,1}^2a_{1,0}a_{1,1}b_{1,0}b_{1,1}c_{0,1} + 4a_{1,0}a_{1,1}^3b_{0,1}^2c_{0,0} + 4a_{1,0}a_{1,1}^3b_{1,1}^2c_{0,1};",
    r"a_{0,1}^4b_{0,0}^2c_{0,0} + a_{0,1}^4b_{1,0}^2c_{0,1} + 2a_{0,1}^2a_{1,1}^2b_{0,0}b_{0,1}c_{0,0} + 2a_{0,1}^2a_{1,1}^2b_{1,0}b_{1,1}c_{0,1} + a_{1,1}^4b_{0,1}^2c_{0,0} + a_{1,1}^4b_{1,1}^2c_{0,1}.",
];

/// Parses a sum of monomials in `a_{i,j}`, `b_{i,j}`, `c_{i,j}` into the
/// network ring of `arch`.
pub fn parse_latex(arch: &Architecture, text: &str) -> SparsePoly<Rationals> {
    let q = Rationals;
    let ring = NetworkRing::new(arch);
    let cleaned: String = text.replace(r"\\", " ").replace(['&', ';', '.'], " ");
    let term_re = Regex::new(r"^(\d*)((?:[abc]_\{\d,\d\}(?:\^\d+)?)+)$").unwrap();
    let factor_re = Regex::new(r"([abc])_\{(\d),(\d)\}(?:\^(\d+))?").unwrap();
    let mut poly = SparsePoly::zero(&q, ring.nvars());
    for raw in cleaned.split('+') {
        let term: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
        if term.is_empty() {
            continue;
        }
        let caps = term_re.captures(&term).unwrap_or_else(|| panic!("unparsed term {term:?}"));
        let coeff: i64 = if caps[1].is_empty() { 1 } else { caps[1].parse().unwrap() };
        let mut exps = vec![0u32; ring.nvars()];
        for f in factor_re.captures_iter(&caps[2]) {
            let layer = match &f[1] {
                "a" => 1,
                "b" => 2,
                _ => 3,
            };
            let w = WeightId { layer, row: f[2].parse().unwrap(), col: f[3].parse().unwrap() };
            exps[ring.weight_var(w)] += f.get(4).map_or(1, |e| e.as_str().parse().unwrap());
        }
        poly.add_term(Monomial::from_exponents(exps), q.from_i64(coeff));
    }
    poly
}
