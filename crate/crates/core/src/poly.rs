//! Sparse multivariate polynomials over an exact [`Domain`].
//!
//! A polynomial is a map from [`Monomial`] to nonzero coefficient. Monomials
//! are compared lexicographically on the exponent vector with variable 0 most
//! significant, so `x0^2 > x0*x1 > x1^2`. Terms are iterated from the largest
//! monomial down, which is the order listings are printed in.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use crate::domain::Domain;

/// Exponent vector over a fixed variable set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Degree restricted to a set of variable indices.
    pub fn degree_in(&self, vars: &[usize]) -> u32 {
        vars.iter().map(|&v| self.0[v]).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

/// All monomials of total degree `deg` in `nvars` variables, in decreasing
/// lexicographic order: `x0^deg` first, `x_{n-1}^deg` last.
pub fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
    assert!(nvars >= 1, "need at least one variable");
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fill_monomials(&mut out, &mut cur, 0, deg);
    out
}

fn fill_monomials(out: &mut Vec<Monomial>, cur: &mut Vec<u32>, pos: usize, remaining: u32) {
    if pos == cur.len() - 1 {
        cur[pos] = remaining;
        out.push(Monomial(cur.clone()));
        return;
    }
    for e in (0..=remaining).rev() {
        cur[pos] = e;
        fill_monomials(out, cur, pos + 1, remaining - e);
    }
    cur[pos] = 0;
}

#[derive(Clone, Debug)]
pub struct SparsePoly<D: Domain> {
    domain: D,
    nvars: usize,
    terms: BTreeMap<Monomial, D::Elem>,
}

impl<D: Domain> PartialEq for SparsePoly<D> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms
    }
}

impl<D: Domain> Eq for SparsePoly<D> {}

impl<D: Domain> SparsePoly<D> {
    pub fn zero(domain: &D, nvars: usize) -> Self {
        SparsePoly { domain: domain.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn constant(domain: &D, nvars: usize, c: D::Elem) -> Self {
        let mut p = Self::zero(domain, nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(domain: &D, nvars: usize) -> Self {
        Self::constant(domain, nvars, domain.one())
    }

    pub fn var(domain: &D, nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable {index} out of range");
        let mut p = Self::zero(domain, nvars);
        p.add_term(Monomial::var(nvars, index), domain.one());
        p
    }

    pub fn from_terms(domain: &D, nvars: usize, terms: impl IntoIterator<Item = (Monomial, D::Elem)>) -> Self {
        let mut p = Self::zero(domain, nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn domain(&self) -> &D {
        &self.domain
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms from the lexicographically largest monomial down.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &D::Elem)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> D::Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.domain.zero())
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Set of degrees of the terms in the given variables.
    pub fn degrees_in(&self, vars: &[usize]) -> Vec<u32> {
        let mut ds: Vec<u32> = self.terms.keys().map(|m| m.degree_in(vars)).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// True iff every term has the same degree in `vars` (vacuously for zero).
    pub fn is_homogeneous_in(&self, vars: &[usize]) -> bool {
        self.degrees_in(vars).len() <= 1
    }

    pub fn add_term(&mut self, m: Monomial, c: D::Elem) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if self.domain.is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = self.domain.add(e.get(), &c);
                if self.domain.is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &D::Elem) -> Self {
        if self.domain.is_zero(c) {
            return Self::zero(&self.domain, self.nvars);
        }
        let terms = self.terms.iter().map(|(m, v)| (m.clone(), self.domain.mul(v, c))).collect();
        SparsePoly { domain: self.domain.clone(), nvars: self.nvars, terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.domain, self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn partial(&self, var: usize) -> Self {
        assert!(var < self.nvars, "variable {var} out of range");
        let mut out = Self::zero(&self.domain, self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            out.add_term(Monomial(exps), self.domain.mul(c, &self.domain.from_i64(e as i64)));
        }
        out
    }

    /// Evaluates at a full assignment of the variables.
    pub fn eval(&self, point: &[D::Elem]) -> D::Elem {
        assert_eq!(point.len(), self.nvars, "point arity");
        let d = &self.domain;
        let mut acc = d.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = d.mul(&t, &d.pow(&point[v], e as u64));
                }
            }
            d.add_assign(&mut acc, &t);
        }
        acc
    }

    /// Substitutes a constant for one variable; the variable stays in the
    /// ring with exponent zero everywhere.
    pub fn substitute(&self, var: usize, value: &D::Elem) -> Self {
        let d = &self.domain;
        let mut out = Self::zero(d, self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            let mut exps = m.0.clone();
            exps[var] = 0;
            let coef = if e == 0 { c.clone() } else { d.mul(c, &d.pow(value, e as u64)) };
            out.add_term(Monomial(exps), coef);
        }
        out
    }

    /// Splits off the variables `0..split`: returns, for every monomial in
    /// those variables, its coefficient as a polynomial in the remaining
    /// variables (same ring, leading exponents zeroed).
    pub fn coefficients_in_leading(&self, split: usize) -> BTreeMap<Monomial, SparsePoly<D>> {
        let mut out: BTreeMap<Monomial, SparsePoly<D>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let head = Monomial(m.0[..split].to_vec());
            let mut rest = m.0.clone();
            rest[..split].iter_mut().for_each(|e| *e = 0);
            out.entry(head).or_insert_with(|| Self::zero(&self.domain, self.nvars)).add_term(Monomial(rest), c.clone());
        }
        out
    }

    /// Moves the polynomial into another domain coefficient-wise.
    pub fn map_coefficients<E: Domain>(&self, target: &E, f: impl Fn(&D::Elem) -> E::Elem) -> SparsePoly<E> {
        SparsePoly::from_terms(target, self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Human-readable rendering using the given variable names.
    pub fn display(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms().enumerate() {
            let mut coef = self.domain.format(c);
            let negative = coef.starts_with('-');
            if negative {
                coef.remove(0);
            }
            if i == 0 {
                if negative {
                    s.push('-');
                }
            } else {
                s.push_str(if negative { " - " } else { " + " });
            }
            let mono = format_monomial(m, names);
            match (coef.as_str(), mono.is_empty()) {
                ("1", false) => s.push_str(&mono),
                (_, true) => s.push_str(&coef),
                _ => {
                    let _ = write!(s, "{coef}*{mono}");
                }
            }
        }
        s
    }
}

fn format_monomial(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (v, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[v].clone()),
            _ => parts.push(format!("{}^{e}", names[v])),
        }
    }
    parts.join("*")
}

impl<D: Domain> Add for &SparsePoly<D> {
    type Output = SparsePoly<D>;
    fn add(self, rhs: &SparsePoly<D>) -> SparsePoly<D> {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<D: Domain> Sub for &SparsePoly<D> {
    type Output = SparsePoly<D>;
    fn sub(self, rhs: &SparsePoly<D>) -> SparsePoly<D> {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), self.domain.neg(c));
        }
        out
    }
}

impl<D: Domain> Neg for &SparsePoly<D> {
    type Output = SparsePoly<D>;
    fn neg(self) -> SparsePoly<D> {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), self.domain.neg(c))).collect();
        SparsePoly { domain: self.domain.clone(), nvars: self.nvars, terms }
    }
}

impl<D: Domain> Mul for &SparsePoly<D> {
    type Output = SparsePoly<D>;
    fn mul(self, rhs: &SparsePoly<D>) -> SparsePoly<D> {
        assert_eq!(self.nvars, rhs.nvars);
        let d = &self.domain;
        let mut acc: BTreeMap<Monomial, D::Elem> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let prod = d.mul(ca, cb);
                let m = ma.mul(mb);
                match acc.get_mut(&m) {
                    Some(v) => d.add_assign(v, &prod),
                    None => {
                        acc.insert(m, prod);
                    }
                }
            }
        }
        acc.retain(|_, v| !d.is_zero(v));
        SparsePoly { domain: d.clone(), nvars: self.nvars, terms: acc }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl<D: Domain> $tr for SparsePoly<D> {
            type Output = SparsePoly<D>;
            fn $method(self, rhs: SparsePoly<D>) -> SparsePoly<D> {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
