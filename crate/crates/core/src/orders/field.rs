use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{IntPoly, RatMatrix};
use crate::error::{domain, Result};

/// Element of a number field as rational coordinates on the power basis.
pub type Elem = Vec<BigRational>;

/// `Q[x]/(h)` for a monic separable `h`, with multiplication and trace tables.
#[derive(Debug)]
pub struct NumberField {
    modulus: IntPoly,
    degree: usize,
    /// `x^k mod h` for `k < 2 deg - 1`.
    reduction: Vec<Vec<BigInt>>,
    trace_matrix: RatMatrix,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus
    }
}

impl Eq for NumberField {}

impl NumberField {
    pub fn new(h: IntPoly) -> Result<Arc<Self>> {
        let Some(d) = h.degree().filter(|&d| d >= 1) else {
            return domain(format!("{h} does not define a number field"));
        };
        if !h.is_monic() || !h.is_squarefree() {
            return domain(format!("{h} must be monic and separable"));
        }
        let lower: Vec<BigInt> = h.coeffs()[..d].to_vec();
        let mut reduction: Vec<Vec<BigInt>> = Vec::with_capacity(3 * d);
        for k in 0..d {
            let mut e = vec![BigInt::zero(); d];
            e[k] = BigInt::one();
            reduction.push(e);
        }
        // x^(k+1) = x * x^k, folding x^d = -sum c_i x^i
        while reduction.len() < 3 * d - 1 {
            let prev = reduction.last().unwrap();
            let top = prev[d - 1].clone();
            let mut next = vec![BigInt::zero(); d];
            next[1..].clone_from_slice(&prev[..d - 1]);
            for i in 0..d {
                next[i] -= &top * &lower[i];
            }
            reduction.push(next);
        }
        // Tr(x^k) = trace of multiplication by x^k = sum_i [x^(i+k)]_i
        let traces: Vec<BigInt> = (0..2 * d - 1)
            .map(|k| (0..d).map(|i| reduction[i + k][i].clone()).sum())
            .collect();
        let trace_matrix = RatMatrix::new(
            d,
            (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| BigRational::from_integer(traces[i + j].clone()))
                        .collect()
                })
                .collect(),
        );
        reduction.truncate(2 * d - 1);
        Ok(Arc::new(NumberField {
            modulus: h,
            degree: d,
            reduction,
            trace_matrix,
        }))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &IntPoly {
        &self.modulus
    }

    /// Gram matrix of the trace form on the power basis.
    pub fn trace_matrix(&self) -> &RatMatrix {
        &self.trace_matrix
    }

    pub fn one(&self) -> Elem {
        self.basis_vector(0)
    }

    /// The generator `x`.
    pub fn gen(&self) -> Elem {
        if self.degree == 1 {
            // x = -c0 in Q
            return vec![BigRational::from_integer(-self.modulus.coeff(0))];
        }
        self.basis_vector(1)
    }

    pub fn basis_vector(&self, i: usize) -> Elem {
        let mut e = vec![BigRational::zero(); self.degree];
        e[i] = BigRational::one();
        e
    }

    pub fn from_int(&self, n: i64) -> Elem {
        let mut e = vec![BigRational::zero(); self.degree];
        e[0] = BigRational::from_integer(n.into());
        e
    }

    pub fn mul(&self, a: &[BigRational], b: &[BigRational]) -> Elem {
        let d = self.degree;
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                prod[i + j] += x * y;
            }
        }
        let mut out: Elem = prod[..d].to_vec();
        for (k, c) in prod.iter().enumerate().skip(d).filter(|(_, c)| !c.is_zero()) {
            for (o, r) in out.iter_mut().zip(&self.reduction[k]) {
                if !r.is_zero() {
                    *o += c * BigRational::from_integer(r.clone());
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &[BigRational], e: u32) -> Elem {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    pub fn add(&self, a: &[BigRational], b: &[BigRational]) -> Elem {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &[BigRational], b: &[BigRational]) -> Elem {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn scale(&self, a: &[BigRational], c: &BigRational) -> Elem {
        a.iter().map(|x| x * c).collect()
    }

    /// Rows `x^i * a`: the matrix of multiplication by `a` acting on row vectors.
    pub fn mul_matrix(&self, a: &[BigRational]) -> RatMatrix {
        RatMatrix::new(
            self.degree,
            (0..self.degree).map(|i| self.mul(&self.basis_vector(i), a)).collect(),
        )
    }

    pub fn inverse(&self, a: &[BigRational]) -> Option<Elem> {
        self.mul_matrix(a).solve_left(&self.one())
    }

    pub fn trace(&self, a: &[BigRational]) -> BigRational {
        a.iter().enumerate().map(|(i, x)| x * self.trace_matrix.get(0, i)).sum()
    }

    pub fn norm(&self, a: &[BigRational]) -> BigRational {
        self.mul_matrix(a).determinant()
    }

    /// Image of a polynomial expression `p(x)`.
    pub fn eval_poly(&self, p: &IntPoly) -> Elem {
        let x = self.gen();
        p.coeffs()
            .iter()
            .rev()
            .fold(vec![BigRational::zero(); self.degree], |acc, c| {
                let mut r = self.mul(&acc, &x);
                r[0] += BigRational::from_integer(c.clone());
                r
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn gaussian_integers() {
        let k = NumberField::new(IntPoly::from_i64(&[1, 0, 1])).unwrap();
        let i = k.gen();
        assert_eq!(k.mul(&i, &i), vec![rat(-1), rat(0)]);
        assert_eq!(k.trace_matrix(), &RatMatrix::from_i64(&[&[2, 0], &[0, -2]]));
        assert_eq!(k.norm(&[rat(3), rat(4)]), rat(25));
        let inv = k.inverse(&[rat(1), rat(1)]).unwrap();
        assert_eq!(
            inv,
            vec![
                BigRational::new(1.into(), 2.into()),
                BigRational::new((-1).into(), 2.into())
            ]
        );
    }

    #[test]
    fn root_annihilates_modulus() {
        let h = IntPoly::from_i64(&[529, -138, 32, -6, 1]);
        let k = NumberField::new(h.clone()).unwrap();
        assert!(k.eval_poly(&h).iter().all(|c| c.is_zero()));
        // trace of x equals minus the x^3 coefficient
        assert_eq!(k.trace(&k.gen()), rat(6));
    }

    #[test]
    fn rational_field() {
        let q = NumberField::new(IntPoly::from_i64(&[-3, 1])).unwrap();
        assert_eq!(q.gen(), vec![rat(3)]);
        assert_eq!(q.trace(&q.gen()), rat(3));
        assert_eq!(q.mul(&[rat(2)], &[rat(5)]), vec![rat(10)]);
    }

    #[test]
    fn rejects_inseparable() {
        assert!(NumberField::new(IntPoly::from_i64(&[1, 2, 1])).is_err());
        assert!(NumberField::new(IntPoly::from_i64(&[1])).is_err());
    }
}
