//! Dense homogeneous forms.
//!
//! A form of degree `deg` in `nvars` variables is stored as its coefficient
//! vector over [`monomials_of_degree`](crate::poly::monomials_of_degree)
//! (decreasing lex order). This is the workhorse of the numeric engines,
//! where every polynomial is homogeneous in the input variables and the
//! coefficient index must match the symbolic listings.

use crate::domain::Domain;
use crate::poly::{monomials_of_degree, Monomial, SparsePoly};

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Number of monomials of degree `deg` in `nvars` variables.
pub fn form_dim(nvars: usize, deg: u32) -> usize {
    binomial(deg as u64 + nvars as u64 - 1, nvars as u64 - 1) as usize
}

/// Position of an exponent vector inside `monomials_of_degree(n, deg)`.
pub fn monomial_index(exps: &[u32]) -> usize {
    let n = exps.len();
    let mut remaining: u32 = exps.iter().sum();
    let mut idx = 0usize;
    for (i, &e) in exps.iter().enumerate().take(n - 1) {
        let after = remaining - e;
        if after >= 1 {
            let tail = (n - i - 1) as u64;
            idx += binomial((after - 1) as u64 + tail, tail) as usize;
        }
        remaining = after;
    }
    idx
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form<D: Domain> {
    nvars: usize,
    degree: u32,
    coeffs: Vec<D::Elem>,
}

impl<D: Domain> Form<D> {
    pub fn zero(domain: &D, nvars: usize, degree: u32) -> Self {
        Form { nvars, degree, coeffs: vec![domain.zero(); form_dim(nvars, degree)] }
    }

    /// The linear form `sum_i coeffs[i] * x_i`.
    pub fn linear(coeffs: Vec<D::Elem>) -> Self {
        Form { nvars: coeffs.len(), degree: 1, coeffs }
    }

    pub fn var(domain: &D, nvars: usize, index: usize) -> Self {
        let mut f = Self::zero(domain, nvars, 1);
        f.coeffs[index] = domain.one();
        f
    }

    pub fn from_coeffs(nvars: usize, degree: u32, coeffs: Vec<D::Elem>) -> Self {
        assert_eq!(coeffs.len(), form_dim(nvars, degree));
        Form { nvars, degree, coeffs }
    }

    /// Dense form of a homogeneous sparse polynomial.
    pub fn from_sparse(p: &SparsePoly<D>, degree: u32) -> Self {
        let d = p.domain();
        let mut f = Self::zero(d, p.nvars(), degree);
        for (m, c) in p.terms() {
            assert_eq!(m.degree(), degree, "polynomial is not homogeneous of degree {degree}");
            f.coeffs[monomial_index(m.exponents())] = c.clone();
        }
        f
    }

    pub fn to_sparse(&self, domain: &D) -> SparsePoly<D> {
        SparsePoly::from_terms(
            domain,
            self.nvars,
            monomials_of_degree(self.nvars, self.degree).into_iter().zip(self.coeffs.iter().cloned()),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &[D::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<D::Elem> {
        self.coeffs
    }

    pub fn is_zero(&self, domain: &D) -> bool {
        self.coeffs.iter().all(|c| domain.is_zero(c))
    }

    pub fn scale(&self, domain: &D, c: &D::Elem) -> Self {
        Form { nvars: self.nvars, degree: self.degree, coeffs: self.coeffs.iter().map(|v| domain.mul(v, c)).collect() }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, domain: &D, c: &D::Elem, other: &Form<D>) {
        assert_eq!((self.nvars, self.degree), (other.nvars, other.degree), "form shape");
        if domain.is_zero(c) {
            return;
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !domain.is_zero(b) {
                let t = domain.mul(c, b);
                domain.add_assign(a, &t);
            }
        }
    }

    pub fn mul(&self, domain: &D, other: &Form<D>) -> Form<D> {
        assert_eq!(self.nvars, other.nvars);
        let degree = self.degree + other.degree;
        let mut out = Self::zero(domain, self.nvars, degree);
        let ea = monomials_of_degree(self.nvars, self.degree);
        let eb = monomials_of_degree(self.nvars, other.degree);
        let nz_b: Vec<usize> = (0..other.coeffs.len()).filter(|&j| !domain.is_zero(&other.coeffs[j])).collect();
        let mut buf = vec![0u32; self.nvars];
        for (i, ca) in self.coeffs.iter().enumerate() {
            if domain.is_zero(ca) {
                continue;
            }
            for &j in &nz_b {
                for (k, slot) in buf.iter_mut().enumerate() {
                    *slot = ea[i].exponents()[k] + eb[j].exponents()[k];
                }
                let t = domain.mul(ca, &other.coeffs[j]);
                domain.add_assign(&mut out.coeffs[monomial_index(&buf)], &t);
            }
        }
        out
    }

    pub fn pow(&self, domain: &D, e: u32) -> Form<D> {
        let mut acc = Form::zero(domain, self.nvars, 0);
        acc.coeffs[0] = domain.one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(domain, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(domain, &base);
            }
        }
        acc
    }

    /// Evaluates at a point of the input space.
    pub fn eval(&self, domain: &D, point: &[D::Elem]) -> D::Elem {
        let mut acc = domain.zero();
        for (m, c) in monomials_of_degree(self.nvars, self.degree).iter().zip(&self.coeffs) {
            if domain.is_zero(c) {
                continue;
            }
            let mut t = c.clone();
            for (v, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = domain.mul(&t, &domain.pow(&point[v], e as u64));
                }
            }
            domain.add_assign(&mut acc, &t);
        }
        acc
    }

    pub fn monomials(&self) -> Vec<Monomial> {
        monomials_of_degree(self.nvars, self.degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Rationals;
    use proptest::prelude::*;

    #[test]
    fn index_matches_enumeration() {
        for n in 1..5 {
            for d in 0..7 {
                let ms = monomials_of_degree(n, d);
                assert_eq!(ms.len(), form_dim(n, d));
                for (i, m) in ms.iter().enumerate() {
                    assert_eq!(monomial_index(m.exponents()), i, "n={n} d={d} m={m:?}");
                }
            }
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 1), 5);
        assert_eq!(binomial(13, 1), 13);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(0, 0), 1);
    }

    proptest! {
        #[test]
        fn dense_product_matches_sparse(a in prop::collection::vec(-9i64..9, 3), b in prop::collection::vec(-9i64..9, 6), e in 0u32..4) {
            let q = Rationals;
            let fa = Form::<Rationals>::linear(a.iter().map(|&v| q.from_i64(v)).collect());
            let fb = Form::<Rationals>::from_coeffs(3, 2, b.iter().map(|&v| q.from_i64(v)).collect());
            let dense = fa.mul(&q, &fb).pow(&q, e);
            let sparse = (&fa.to_sparse(&q) * &fb.to_sparse(&q)).pow(e);
            prop_assert_eq!(dense.to_sparse(&q), sparse);
        }
    }
}
