//! Rational matrices and integer row echelon forms.
//!
//! Hermite normal form here is row-style: upper triangular, positive pivots,
//! and every entry above a pivot reduced into `[0, pivot)`. Two generator
//! sets span the same lattice exactly when their forms are equal.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigRational>>,
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for r in &self.data {
            let cells: Vec<String> = r.iter().map(|c| c.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

impl RatMatrix {
    /// Build from rows; every row must have `cols` entries.
    pub fn new(cols: usize, data: Vec<Vec<BigRational>>) -> Self {
        assert!(data.iter().all(|r| r.len() == cols), "ragged matrix");
        RatMatrix {
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn from_ints(cols: usize, data: &[Vec<BigInt>]) -> Self {
        Self::new(
            cols,
            data.iter()
                .map(|r| r.iter().cloned().map(BigRational::from).collect())
                .collect(),
        )
    }

    pub fn from_i64(data: &[&[i64]]) -> Self {
        let cols = data.first().map_or(0, |r| r.len());
        Self::new(
            cols,
            data.iter()
                .map(|r| r.iter().map(|&x| BigRational::from(BigInt::from(x))).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        Self::new(
            n,
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            if i == j {
                                BigRational::one()
                            } else {
                                BigRational::zero()
                            }
                        })
                        .collect()
                })
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i]
    }

    pub fn data(&self) -> &[Vec<BigRational>] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i][j]
    }

    pub fn transpose(&self) -> Self {
        Self::new(
            self.rows,
            (0..self.cols)
                .map(|j| (0..self.rows).map(|i| self.data[i][j].clone()).collect())
                .collect(),
        )
    }

    pub fn mul(&self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let data = self
            .data
            .iter()
            .map(|r| {
                (0..rhs.cols)
                    .map(|j| {
                        r.iter()
                            .enumerate()
                            .filter(|(_, a)| !a.is_zero())
                            .fold(BigRational::zero(), |acc, (k, a)| acc + a * &rhs.data[k][j])
                    })
                    .collect()
            })
            .collect();
        RatMatrix::new(rhs.cols, data)
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| {
                v.iter()
                    .enumerate()
                    .filter(|(_, a)| !a.is_zero())
                    .fold(BigRational::zero(), |acc, (k, a)| acc + a * &self.data[k][j])
            })
            .collect()
    }

    pub fn add_scaled_identity(&self, s: &BigRational) -> RatMatrix {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            out.data[i][i] += s;
        }
        out
    }

    pub fn determinant(&self) -> BigRational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut a = self.data.clone();
        let n = self.rows;
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return BigRational::zero();
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            let piv = a[c][c].clone();
            det *= &piv;
            for r in c + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let factor = &a[r][c] / &piv;
                for k in c..n {
                    let t = &factor * &a[c][k];
                    a[r][k] -= t;
                }
            }
        }
        det
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let mut inv = RatMatrix::identity(n).data;
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero())?;
            a.swap(p, c);
            inv.swap(p, c);
            let piv = a[c][c].clone();
            for k in 0..n {
                a[c][k] = &a[c][k] / &piv;
                inv[c][k] = &inv[c][k] / &piv;
            }
            for r in 0..n {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let factor = a[r][c].clone();
                for k in 0..n {
                    let t = &factor * &a[c][k];
                    a[r][k] -= t;
                    let t = &factor * &inv[c][k];
                    inv[r][k] -= t;
                }
            }
        }
        Some(RatMatrix::new(n, inv))
    }

    /// Solve `x * self = v` for a row vector `x`, assuming full row rank.
    pub fn solve_left(&self, v: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(v.len(), self.cols);
        // Columns of the augmented system [self^T | v^T].
        let k = self.rows;
        let mut a: Vec<Vec<BigRational>> = (0..self.cols)
            .map(|j| {
                let mut r: Vec<BigRational> = (0..k).map(|i| self.data[i][j].clone()).collect();
                r.push(v[j].clone());
                r
            })
            .collect();
        let m = a.len();
        let mut row = 0;
        let mut pivots = Vec::new();
        for c in 0..k {
            let Some(p) = (row..m).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(p, row);
            let piv = a[row][c].clone();
            for x in a[row].iter_mut() {
                *x = &*x / &piv;
            }
            for r in 0..m {
                if r != row && !a[r][c].is_zero() {
                    let factor = a[r][c].clone();
                    for j in 0..=k {
                        let t = &factor * &a[row][j];
                        a[r][j] -= t;
                    }
                }
            }
            pivots.push(c);
            row += 1;
        }
        if a[row..].iter().any(|r| !r[k].is_zero()) || pivots.len() < k {
            return None;
        }
        let mut x = vec![BigRational::zero(); k];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = a[i][k].clone();
        }
        Some(x)
    }

    /// Common denominator of all entries together with the scaled integer rows.
    pub fn clear_denominators(&self) -> (BigInt, Vec<Vec<BigInt>>) {
        let den = self
            .data
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints = self
            .data
            .iter()
            .map(|r| r.iter().map(|c| c.numer() * (&den / c.denom())).collect())
            .collect();
        (den, ints)
    }

    /// Canonical Hermite normal form of the lattice spanned by the rows.
    ///
    /// The result is square (`cols x cols`); fewer independent rows than
    /// columns is a [`Error::Rank`].
    pub fn hnf(&self) -> Result<RatMatrix> {
        let (den, ints) = self.clear_denominators();
        let h = hnf_int(&ints, self.cols)?;
        let den = BigRational::from(den);
        Ok(RatMatrix::new(
            self.cols,
            h.into_iter()
                .map(|r| r.into_iter().map(|c| BigRational::from(c) / &den).collect())
                .collect(),
        ))
    }
}

/// Incrementally built integer echelon form.
#[derive(Clone, Debug)]
pub(crate) struct Echelon {
    cols: usize,
    pivots: Vec<Option<Vec<BigInt>>>,
}

impl Echelon {
    pub(crate) fn new(cols: usize) -> Self {
        Echelon {
            cols,
            pivots: vec![None; cols],
        }
    }

    pub(crate) fn insert(&mut self, v: &[BigInt]) {
        assert_eq!(v.len(), self.cols);
        let mut v = v.to_vec();
        for c in 0..self.cols {
            if v[c].is_zero() {
                continue;
            }
            match self.pivots[c].take() {
                None => {
                    if v[c].is_negative() {
                        v.iter_mut().for_each(|x| *x = -&*x);
                    }
                    self.pivots[c] = Some(v);
                    self.reduce_all();
                    return;
                }
                Some(p) => {
                    let (q, r) = v[c].div_mod_floor(&p[c]);
                    if r.is_zero() {
                        for k in c..self.cols {
                            v[k] -= &q * &p[k];
                        }
                        self.pivots[c] = Some(p);
                        continue;
                    }
                    let eg = p[c].extended_gcd(&v[c]);
                    let (mut g, mut s, mut t) = (eg.gcd, eg.x, eg.y);
                    if g.is_negative() {
                        g = -g;
                        s = -s;
                        t = -t;
                    }
                    let pa = &p[c] / &g;
                    let va = &v[c] / &g;
                    let mut np = vec![BigInt::zero(); self.cols];
                    let mut nv = vec![BigInt::zero(); self.cols];
                    for k in c..self.cols {
                        np[k] = &s * &p[k] + &t * &v[k];
                        nv[k] = &pa * &v[k] - &va * &p[k];
                    }
                    self.pivots[c] = Some(np);
                    v = nv;
                }
            }
        }
        self.reduce_all();
    }

    fn reduce_all(&mut self) {
        for j in 0..self.cols {
            let Some(pj) = self.pivots[j].clone() else {
                continue;
            };
            for i in 0..j {
                if let Some(row) = self.pivots[i].as_mut() {
                    let q = row[j].div_floor(&pj[j]);
                    if !q.is_zero() {
                        for k in j..self.cols {
                            row[k] -= &q * &pj[k];
                        }
                    }
                }
            }
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.pivots.iter().filter(|p| p.is_some()).count()
    }

    /// Rows with their pivot column, in pivot order.
    pub(crate) fn rows(&self) -> impl Iterator<Item = (usize, &Vec<BigInt>)> {
        self.pivots
            .iter()
            .enumerate()
            .filter_map(|(c, p)| p.as_ref().map(|r| (c, r)))
    }
}

/// Integer HNF of a generator set whose span has rank `cols`.
pub(crate) fn hnf_int(rows: &[Vec<BigInt>], cols: usize) -> Result<Vec<Vec<BigInt>>> {
    let mut e = Echelon::new(cols);
    for r in rows {
        e.insert(r);
    }
    e.reduce_all();
    if e.rank() < cols {
        return Err(Error::Rank {
            expected: cols,
            found: e.rank(),
        });
    }
    Ok(e.rows().map(|(_, r)| r.clone()).collect())
}

/// Basis of the integer left kernel `{u in Z^m : u * M = 0}`.
pub(crate) fn left_kernel_int(m: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let rows = m.len();
    let mut e = Echelon::new(cols + rows);
    for (i, r) in m.iter().enumerate() {
        let mut aug = r.clone();
        aug.extend((0..rows).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
        e.insert(&aug);
    }
    e.rows()
        .filter(|(c, _)| *c >= cols)
        .map(|(_, r)| r[cols..].to_vec())
        .collect()
}

/// Determinant of an integer matrix (fraction-free elimination).
pub fn det_int(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}
