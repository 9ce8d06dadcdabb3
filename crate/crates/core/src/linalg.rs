//! Exact sparse linear algebra over the rationals.
//!
//! Vectors are sorted `(index, coefficient)` lists without zero entries.
//! Matrices are stored column by column.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar.
pub type Q = BigRational;

/// Sparse vector: sorted by index, no explicit zeros.
pub type SVec = Vec<(usize, Q)>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn unit_vec(i: usize) -> SVec {
    vec![(i, Q::one())]
}

/// `a + c * b`.
pub fn axpy(a: &[(usize, Q)], c: &Q, b: &[(usize, Q)]) -> SVec {
    if c.is_zero() {
        return a.to_vec();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => x.0.cmp(&y.0),
            (Some(_), None) => Ordering::Less,
            _ => Ordering::Greater,
        };
        match ord {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push((b[j].0, c * &b[j].1));
                j += 1;
            }
            Ordering::Equal => {
                let v = &a[i].1 + c * &b[j].1;
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

pub fn sv_add(a: &[(usize, Q)], b: &[(usize, Q)]) -> SVec {
    axpy(a, &Q::one(), b)
}

pub fn sv_sub(a: &[(usize, Q)], b: &[(usize, Q)]) -> SVec {
    axpy(a, &-Q::one(), b)
}

pub fn sv_scale(a: &[(usize, Q)], c: &Q) -> SVec {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|(i, x)| (*i, x * c)).collect()
}

/// Builds a sparse vector from unsorted entries, summing duplicates.
pub fn sv_from_entries(mut e: Vec<(usize, Q)>) -> SVec {
    e.sort_by_key(|x| x.0);
    let mut out: SVec = Vec::with_capacity(e.len());
    for (i, x) in e {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 += x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|x| !x.1.is_zero());
    out
}

pub fn sv_get(a: &[(usize, Q)], i: usize) -> Q {
    match a.binary_search_by_key(&i, |x| x.0) {
        Ok(k) => a[k].1.clone(),
        Err(_) => Q::zero(),
    }
}

/// Column-sparse rational matrix, `rows x cols`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<SVec>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Mat {
        Mat { rows: n, cols: n, data: (0..n).map(unit_vec).collect() }
    }

    pub fn from_columns(rows: usize, data: Vec<SVec>) -> Mat {
        Mat { rows, cols: data.len(), data }
    }

    /// Dense row-major input, mostly for tests and fixtures.
    pub fn from_rows(rows: &[Vec<Q>], cols: usize) -> Mat {
        let mut m = Mat::zero(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                if !x.is_zero() {
                    m.data[j].push((i, x.clone()));
                }
            }
        }
        m
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Mat {
        let cols = rows.first().map_or(0, |r| r.len());
        let r: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|x| q(*x)).collect()).collect();
        Mat::from_rows(&r, cols)
    }

    /// Permutation-style matrix sending column `j` to basis vector `f[j]`.
    pub fn from_function(rows: usize, f: &[usize]) -> Mat {
        Mat { rows, cols: f.len(), data: f.iter().map(|&i| unit_vec(i)).collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        sv_get(&self.data[j], i)
    }

    pub fn col(&self, j: usize) -> &SVec {
        &self.data[j]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_empty())
    }

    pub fn apply(&self, v: &[(usize, Q)]) -> SVec {
        let mut acc: SVec = Vec::new();
        for (j, x) in v {
            acc = axpy(&acc, x, &self.data[*j]);
        }
        acc
    }

    /// `self ∘ other`.
    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        Mat { rows: self.rows, cols: other.cols, data: other.data.iter().map(|c| self.apply(c)).collect() }
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert!(self.rows == other.rows && self.cols == other.cols);
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| sv_add(a, b)).collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert!(self.rows == other.rows && self.cols == other.cols);
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| sv_sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| sv_scale(a, c)).collect() }
    }

    pub fn transpose(&self) -> Mat {
        let mut data = vec![Vec::new(); self.rows];
        for (j, c) in self.data.iter().enumerate() {
            for (i, x) in c {
                data[*i].push((j, x.clone()));
            }
        }
        Mat { rows: self.cols, cols: self.rows, data }
    }

    /// Block matrix `[self | other]` side by side.
    pub fn hcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Mat { rows: self.rows, cols: self.cols + other.cols, data }
    }

    /// Block matrix with `self` on top of `other`.
    pub fn vcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let shift = self.rows;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut c = a.clone();
                c.extend(b.iter().map(|(i, x)| (i + shift, x.clone())));
                c
            })
            .collect();
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn direct_sum(&self, other: &Mat) -> Mat {
        self.vcat(&Mat::zero(other.rows, self.cols)).hcat(&Mat::zero(self.rows, other.cols).vcat(other))
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.rows);
        for c in &self.data {
            e.insert(c.clone());
        }
        e.rank()
    }

    /// Basis of the null space.
    pub fn kernel(&self) -> Vec<SVec> {
        let t = self.transpose();
        let mut e = Echelon::new(self.cols);
        for r in &t.data {
            e.insert(r.clone());
        }
        e.complement_kernel()
    }

    /// Some `x` with `self * x = b`, if one exists.
    pub fn solve(&self, b: &[(usize, Q)]) -> Option<SVec> {
        let sol = self.solve_many(&Mat::from_columns(self.rows, vec![b.to_vec()]));
        sol[0].clone()
    }

    /// Solves `self * X = B` column by column with a single elimination.
    pub fn solve_many(&self, b: &Mat) -> Vec<Option<SVec>> {
        assert_eq!(self.rows, b.rows);
        // rows of [A | B]
        let n = self.cols;
        let mut rows: Vec<SVec> = vec![Vec::new(); self.rows];
        for (j, c) in self.data.iter().enumerate() {
            for (i, x) in c {
                rows[*i].push((j, x.clone()));
            }
        }
        for (j, c) in b.data.iter().enumerate() {
            for (i, x) in c {
                rows[*i].push((n + j, x.clone()));
            }
        }
        let mut e = Echelon::new(n + b.cols);
        for r in rows {
            e.insert(r);
        }
        let mut out = vec![Some(Vec::new()); b.cols];
        let mut sols: Vec<Vec<(usize, Q)>> = vec![Vec::new(); b.cols];
        for r in &e.rows {
            let p = r[0].0;
            if p >= n {
                out[p - n] = None;
                continue;
            }
            for (k, x) in r.iter().skip(1) {
                if *k >= n {
                    sols[*k - n].push((p, x.clone()));
                }
            }
        }
        for (j, s) in sols.into_iter().enumerate() {
            if out[j].is_some() {
                out[j] = Some(sv_from_entries(s));
            }
        }
        out
    }

    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols || self.rank() != self.rows {
            return None;
        }
        let sols = self.solve_many(&Mat::identity(self.rows));
        Some(Mat::from_columns(self.cols, sols.into_iter().map(|s| s.expect("invertible")).collect()))
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.rows
    }
}

/// Incrementally maintained reduced row echelon basis of a subspace of `Q^n`.
///
/// Rows are kept sorted by pivot, each pivot normalized to 1 and cleared from
/// every other row, so the stored basis is canonical for the span.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub n: usize,
    pub rows: Vec<SVec>,
}

impl Echelon {
    pub fn new(n: usize) -> Echelon {
        Echelon { n, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r[0].0).collect()
    }

    fn pivot_row(&self, p: usize) -> Option<usize> {
        self.rows.binary_search_by_key(&p, |r| r[0].0).ok()
    }

    /// Remainder of `v` after clearing every pivot coordinate.
    pub fn reduce(&self, v: &[(usize, Q)]) -> SVec {
        let mut v = v.to_vec();
        let mut k = 0;
        while k < v.len() {
            let (idx, c) = (v[k].0, v[k].1.clone());
            if let Some(r) = self.pivot_row(idx) {
                v = axpy(&v, &-c, &self.rows[r]);
                // entries before position k are untouched, entry k vanished
            } else {
                k += 1;
            }
        }
        v
    }

    pub fn contains(&self, v: &[(usize, Q)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: SVec) -> bool {
        let mut r = self.reduce(&v);
        if r.is_empty() {
            return false;
        }
        let lead = r[0].1.clone();
        if !lead.is_one() {
            let inv = lead.recip();
            r = sv_scale(&r, &inv);
        }
        let p = r[0].0;
        for row in self.rows.iter_mut() {
            let c = sv_get(row, p);
            if !c.is_zero() {
                *row = axpy(row, &-c, &r);
            }
        }
        let pos = self.rows.partition_point(|x| x[0].0 < p);
        self.rows.insert(pos, r);
        true
    }

    /// Null space of the row space, i.e. vectors orthogonal to every row in
    /// the sense of `row · x = 0`.
    pub fn complement_kernel(&self) -> Vec<SVec> {
        let piv = self.pivots();
        let mut is_piv = vec![false; self.n];
        for p in &piv {
            is_piv[*p] = true;
        }
        let mut out = Vec::new();
        for f in 0..self.n {
            if is_piv[f] {
                continue;
            }
            let mut e = vec![(f, Q::one())];
            for r in &self.rows {
                let c = sv_get(r, f);
                if !c.is_zero() {
                    e.push((r[0].0, -c));
                }
            }
            out.push(sv_from_entries(e));
        }
        out
    }

    /// Quotient `Q^n / span`: the non-pivot coordinates form the quotient basis.
    /// Returns (number of quotient coordinates, projection matrix, section indices).
    pub fn quotient(&self) -> (usize, Mat, Vec<usize>) {
        let mut is_piv = vec![false; self.n];
        for p in self.pivots() {
            is_piv[p] = true;
        }
        let free: Vec<usize> = (0..self.n).filter(|i| !is_piv[*i]).collect();
        let mut idx = vec![usize::MAX; self.n];
        for (k, f) in free.iter().enumerate() {
            idx[*f] = k;
        }
        let mut data = vec![Vec::new(); self.n];
        for f in &free {
            data[*f] = unit_vec(idx[*f]);
        }
        for r in &self.rows {
            let p = r[0].0;
            data[p] = r.iter().skip(1).map(|(k, x)| (idx[*k], -x.clone())).collect();
        }
        (free.len(), Mat::from_columns(free.len(), data), free)
    }
}

/// Formats a rational as `p/q`, or `p` for integers.
pub fn q_to_string(x: &Q) -> alloc::string::String {
    use alloc::string::ToString;
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        alloc::format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p/q` or `p`. The flag is `false` when the input was not in lowest
/// terms with a positive denominator.
pub fn parse_q(s: &str) -> Option<(Q, bool)> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s.trim(), None),
    };
    let num: BigInt = n.parse().ok()?;
    let den: BigInt = match d {
        Some(d) => d.parse().ok()?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return None;
    }
    let x = Q::new(num.clone(), den.clone());
    let canonical = x.numer() == &num && x.denom() == &den && (d.is_none() || !den.is_one());
    Some((x, canonical))
}

pub fn q_sign(x: &Q) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}
