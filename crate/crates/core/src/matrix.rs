//! Dense matrices over a [`Domain`] and exact rank/kernel routines.
//!
//! Over a prime field rank is plain Gaussian elimination. Over the rationals
//! each row is scaled to integers and the rank is taken by fraction-free
//! (Bareiss) elimination, which keeps every intermediate entry a determinant
//! of the input and therefore bounded.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::domain::{denominator_lcm, Domain};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<D: Domain> {
    rows: usize,
    cols: usize,
    data: Vec<D::Elem>,
}

impl<D: Domain> Matrix<D> {
    pub fn zeros(domain: &D, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![domain.zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<D::Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_columns(domain: &D, nrows: usize, columns: &[Vec<D::Elem>]) -> Self {
        let mut m = Matrix::zeros(domain, nrows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), nrows, "column {j} has wrong length");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn identity(domain: &D, n: usize) -> Self {
        let mut m = Matrix::zeros(domain, n, n);
        for i in 0..n {
            m.set(i, i, domain.one());
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &D::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: D::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[D::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<D::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Sub-matrix made of the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let data = (0..self.rows).flat_map(|i| cols.iter().map(move |&j| self.get(i, j).clone())).collect();
        Matrix { rows: self.rows, cols: cols.len(), data }
    }

    pub fn transpose(&self) -> Self {
        let data = (0..self.cols).flat_map(|j| (0..self.rows).map(move |i| self.get(i, j).clone())).collect();
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn rank(&self, domain: &D) -> usize {
        domain.rank(self)
    }

    /// Basis of the right kernel `{v : M v = 0}` in reduced form.
    pub fn kernel(&self, domain: &D) -> Vec<Vec<D::Elem>> {
        let mut a = self.clone();
        let pivots = rref(domain, &mut a);
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![domain.zero(); self.cols];
            v[free] = domain.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = domain.neg(a.get(r, free));
            }
            basis.push(v);
        }
        basis
    }
}

/// Exact rank of a matrix over an arbitrary [`Domain`] by Gauss–Jordan
/// elimination with field division.
pub fn exact_rank<D: Domain>(domain: &D, m: &Matrix<D>) -> usize {
    domain.rank(m)
}

/// In-place reduced row echelon form; returns pivot columns.
pub fn rref<D: Domain>(domain: &D, a: &mut Matrix<D>) -> Vec<usize> {
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !domain.is_zero(a.get(i, c))) else {
            continue;
        };
        swap_rows(a, r, p);
        let inv = domain.inv(a.get(r, c)).expect("nonzero pivot");
        for j in c..cols {
            let v = domain.mul(a.get(r, j), &inv);
            a.set(r, j, v);
        }
        for i in 0..rows {
            if i == r || domain.is_zero(a.get(i, c)) {
                continue;
            }
            let factor = a.get(i, c).clone();
            for j in c..cols {
                let v = domain.sub(a.get(i, j), &domain.mul(&factor, a.get(r, j)));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn swap_rows<D: Domain>(a: &mut Matrix<D>, i: usize, j: usize) {
    if i == j {
        return;
    }
    let cols = a.cols;
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    let (head, tail) = a.data.split_at_mut(hi * cols);
    head[lo * cols..(lo + 1) * cols].swap_with_slice(&mut tail[..cols]);
}

/// Rank by forward elimination over a field (no back substitution).
pub(crate) fn field_rank<D: Domain>(domain: &D, m: &Matrix<D>) -> usize {
    // Eliminate along the shorter side.
    let mut a = if m.rows < m.cols { m.transpose() } else { m.clone() };
    let (rows, cols) = (a.rows, a.cols);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !domain.is_zero(a.get(i, c))) else {
            continue;
        };
        swap_rows(&mut a, r, p);
        let inv = domain.inv(a.get(r, c)).expect("nonzero pivot");
        for i in r + 1..rows {
            if domain.is_zero(a.get(i, c)) {
                continue;
            }
            let factor = domain.mul(a.get(i, c), &inv);
            for j in c..cols {
                let v = domain.sub(a.get(i, j), &domain.mul(&factor, a.get(r, j)));
                a.set(i, j, v);
            }
        }
        r += 1;
    }
    r
}

/// Rank of a rational matrix: rows are scaled to integers, then Bareiss.
pub(crate) fn rational_rank<D>(m: &Matrix<D>) -> usize
where
    D: Domain<Elem = BigRational>,
{
    let rows: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|i| {
            let row = m.row(i);
            let l = denominator_lcm(row);
            row.iter().map(|v| (v * BigRational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    bareiss_rank(rows)
}

/// Fraction-free Gaussian elimination over the integers. Every division is
/// exact by Sylvester's identity.
pub fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (head, tail) = a.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            for j in c + 1..cols {
                let v = &pivot_row[c] * &row[j] - &row[c] * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}
