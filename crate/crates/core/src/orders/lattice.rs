use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::{Elem, NumberField};
use crate::arith::matrix::{hnf_int, left_kernel_int};
use crate::arith::RatMatrix;
use crate::error::{domain, Error, Result};

/// A full-rank Z-lattice in a number field, stored as `(1/den) * H` with `H` an
/// integer upper-triangular Hermite normal form in power-basis coordinates.
///
/// The representation is canonical, so `==` is lattice equality.
#[derive(Clone)]
pub struct Lattice {
    field: Arc<NumberField>,
    den: BigInt,
    hnf: Vec<Vec<BigInt>>,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.den == other.den && self.hnf == other.hnf
    }
}

impl Eq for Lattice {}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice(1/{} * {:?})", self.den, self.hnf)
    }
}

fn clear(gens: &[Elem]) -> (BigInt, Vec<Vec<BigInt>>) {
    let den = gens.iter().flatten().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints = gens
        .iter()
        .map(|r| r.iter().map(|c| c.numer() * (&den / c.denom())).collect())
        .collect();
    (den, ints)
}

impl Lattice {
    /// The Z-span of `gens`, which must have full rank.
    pub fn from_generators(field: &Arc<NumberField>, gens: &[Elem]) -> Result<Self> {
        let d = field.degree();
        if gens.iter().any(|g| g.len() != d) {
            return domain(format!("generators must have {d} coordinates"));
        }
        let (den, ints) = clear(gens);
        let hnf = hnf_int(&ints, d)?;
        Ok(Self::normalized(field.clone(), den, hnf))
    }

    /// `(1/den) * rows`; the rows need not be in Hermite form.
    pub fn from_int_basis(field: &Arc<NumberField>, den: BigInt, rows: &[Vec<BigInt>]) -> Result<Self> {
        if !den.is_positive() {
            return domain(format!("lattice denominator {den} must be positive"));
        }
        let d = field.degree();
        if rows.iter().any(|r| r.len() != d) {
            return domain(format!("basis rows must have {d} coordinates"));
        }
        let hnf = hnf_int(rows, d)?;
        Ok(Self::normalized(field.clone(), den, hnf))
    }

    fn normalized(field: Arc<NumberField>, den: BigInt, mut hnf: Vec<Vec<BigInt>>) -> Self {
        let g = hnf.iter().flatten().fold(den.clone(), |acc, c| acc.gcd(c));
        let den = if g.is_one() {
            den
        } else {
            hnf.iter_mut().flatten().for_each(|c| *c /= &g);
            den / g
        };
        Lattice { field, den, hnf }
    }

    /// `Z[x]`, the order generated by the field's defining root.
    pub fn equation_order(field: &Arc<NumberField>) -> Self {
        let d = field.degree();
        let hnf = (0..d)
            .map(|i| (0..d).map(|j| BigInt::from(u8::from(i == j))).collect())
            .collect();
        Lattice {
            field: field.clone(),
            den: BigInt::one(),
            hnf,
        }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    /// Integer Hermite rows; the lattice is these rows divided by [`Lattice::den`].
    pub fn hnf_rows(&self) -> &[Vec<BigInt>] {
        &self.hnf
    }

    pub fn basis(&self) -> Vec<Elem> {
        let den = BigRational::from_integer(self.den.clone());
        self.hnf
            .iter()
            .map(|r| r.iter().map(|c| BigRational::from_integer(c.clone()) / &den).collect())
            .collect()
    }

    pub fn basis_matrix(&self) -> RatMatrix {
        RatMatrix::new(self.field.degree(), self.basis())
    }

    /// Integer coordinates of `v` in the Hermite basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigRational]) -> Option<Vec<BigInt>> {
        let d = self.field.degree();
        // w = den * v must be an integer combination of the rows
        let mut w: Vec<BigRational> = v
            .iter()
            .map(|c| c * BigRational::from_integer(self.den.clone()))
            .collect();
        let mut x = Vec::with_capacity(d);
        for j in 0..d {
            let piv = BigRational::from_integer(self.hnf[j][j].clone());
            let q = &w[j] / piv;
            if !q.is_integer() {
                return None;
            }
            let qi = q.to_integer();
            for k in j..d {
                w[k] -= BigRational::from_integer(&qi * &self.hnf[j][k]);
            }
            x.push(qi);
        }
        Some(x)
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis().iter().all(|b| self.contains(b))
    }

    pub fn contains_one(&self) -> bool {
        self.contains(&self.field.one())
    }

    /// Absolute determinant of the basis in power-basis coordinates.
    pub fn covolume(&self) -> BigRational {
        let prod: BigInt = self.hnf.iter().enumerate().map(|(i, r)| r[i].clone()).product();
        BigRational::new(prod, self.den.pow(self.field.degree() as u32))
    }

    /// `[self : sub]` for a sublattice `sub`.
    pub fn index_of(&self, sub: &Lattice) -> Result<BigInt> {
        if !self.contains_lattice(sub) {
            return domain("index requested for a lattice that is not a sublattice");
        }
        let r = sub.covolume() / self.covolume();
        if !r.is_integer() {
            return Err(Error::Internal(format!("non-integral index {r}")));
        }
        Ok(r.to_integer())
    }

    /// Generalized index `[self : other] = covol(other) / covol(self)`.
    pub fn relative_index(&self, other: &Lattice) -> BigRational {
        other.covolume() / self.covolume()
    }

    /// `det(Tr(b_i b_j))`.
    pub fn discriminant(&self) -> BigRational {
        let c = self.covolume();
        &c * &c * self.field.trace_matrix().determinant()
    }

    pub fn sum(&self, other: &Lattice) -> Result<Lattice> {
        let mut gens = self.basis();
        gens.extend(other.basis());
        Lattice::from_generators(&self.field, &gens)
    }

    pub fn product(&self, other: &Lattice) -> Result<Lattice> {
        let (a, b) = (self.basis(), other.basis());
        let gens: Vec<Elem> = a.iter().flat_map(|x| b.iter().map(|y| self.field.mul(x, y))).collect();
        Lattice::from_generators(&self.field, &gens)
    }

    /// `c * L` for a nonzero element `c`.
    pub fn scale_by(&self, c: &[BigRational]) -> Result<Lattice> {
        let gens: Vec<Elem> = self.basis().iter().map(|b| self.field.mul(b, c)).collect();
        Lattice::from_generators(&self.field, &gens)
    }

    pub fn scale_rational(&self, c: &BigRational) -> Result<Lattice> {
        if c.is_zero() {
            return domain("cannot scale a lattice by zero");
        }
        let gens: Vec<Elem> = self.basis().iter().map(|b| self.field.scale(b, c)).collect();
        Lattice::from_generators(&self.field, &gens)
    }

    /// Image under a Q-linear automorphism acting on row vectors.
    pub fn image(&self, m: &RatMatrix) -> Result<Lattice> {
        let gens: Vec<Elem> = self.basis().iter().map(|b| m.apply_row(b)).collect();
        Lattice::from_generators(&self.field, &gens)
    }

    /// Elements of the lattice killed by `m` (acting on row vectors), as a Z-basis.
    pub fn kernel_elements(&self, m: &RatMatrix) -> Vec<Elem> {
        let b = self.basis_matrix();
        let (_, ints) = b.mul(m).clear_denominators();
        left_kernel_int(&ints, m.cols())
            .into_iter()
            .map(|z| {
                let z: Vec<BigRational> = z.into_iter().map(BigRational::from_integer).collect();
                b.apply_row(&z)
            })
            .collect()
    }

    /// `L† = {x : Tr(x L) ⊆ Z}`.
    pub fn trace_dual(&self) -> Result<Lattice> {
        let b = self.basis_matrix();
        // dual basis rows D satisfy D T B^T = I
        let g = self.field.trace_matrix().mul(&b.transpose());
        let inv = g
            .inverse()
            .ok_or_else(|| Error::Internal("degenerate trace form".into()))?;
        Lattice::from_generators(&self.field, inv.data())
    }

    /// `(self : other) = {x : x * other ⊆ self}`.
    pub fn colon(&self, other: &Lattice) -> Result<Lattice> {
        other.product(&self.trace_dual()?)?.trace_dual()
    }

    /// `{x : x L ⊆ L}`.
    pub fn multiplier_ring(&self) -> Result<Lattice> {
        self.colon(self)
    }

    /// Contains 1 and is closed under multiplication.
    pub fn is_ring(&self) -> bool {
        if !self.contains_one() {
            return false;
        }
        let b = self.basis();
        b.iter()
            .enumerate()
            .all(|(i, x)| b[i..].iter().all(|y| self.contains(&self.field.mul(x, y))))
    }

    /// `I (R : I) == R`.
    pub fn is_invertible_over(&self, ring: &Lattice) -> Result<bool> {
        Ok(self.product(&ring.colon(self)?)? == *ring)
    }

    /// An order is Gorenstein iff its trace dual is invertible.
    pub fn is_gorenstein(&self) -> Result<bool> {
        if !self.is_ring() {
            return domain("Gorenstein test requires an order");
        }
        self.trace_dual()?.is_invertible_over(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::IntPoly;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn field(c: &[i64]) -> Arc<NumberField> {
        NumberField::new(IntPoly::from_i64(c)).unwrap()
    }

    #[test]
    fn gaussian_dual() {
        let k = field(&[1, 0, 1]);
        let z = Lattice::equation_order(&k);
        assert_eq!(z.discriminant(), rat(-4, 1));
        let dual = z.trace_dual().unwrap();
        let half = z.scale_rational(&rat(1, 2)).unwrap();
        assert_eq!(dual, half);
        assert!(z.is_gorenstein().unwrap());
    }

    #[test]
    fn equation_order_discriminant() {
        let k = field(&[2, -1, 1]);
        assert_eq!(Lattice::equation_order(&k).discriminant(), rat(-7, 1));
        let k = field(&[529, -138, 32, -6, 1]);
        let r = Lattice::equation_order(&k);
        let disc = crate::arith::discriminant(k.modulus()).unwrap();
        assert_eq!(r.discriminant(), BigRational::from_integer(disc));
    }

    #[test]
    fn non_gorenstein_order() {
        // Z + 2 O in a cubic field is never Gorenstein
        let k = field(&[-2, 0, 0, 1]);
        let o = Lattice::equation_order(&k);
        let mut g = o.scale_rational(&rat(2, 1)).unwrap().basis();
        g.push(k.one());
        let r = Lattice::from_generators(&k, &g).unwrap();
        assert!(r.is_ring());
        assert_eq!(o.index_of(&r).unwrap(), BigInt::from(4));
        assert!(!r.is_gorenstein().unwrap());
        assert_eq!(r.multiplier_ring().unwrap(), r);
        // the dual is not invertible, but its multiplier ring is still r
        assert_eq!(r.trace_dual().unwrap().multiplier_ring().unwrap(), r);
    }

    #[test]
    fn colon_and_index() {
        let k = field(&[1, 0, 1]);
        let z = Lattice::equation_order(&k);
        let i2 = z.scale_rational(&rat(2, 1)).unwrap();
        assert_eq!(z.index_of(&i2).unwrap(), BigInt::from(4));
        assert_eq!(z.colon(&i2).unwrap(), z.scale_rational(&rat(1, 2)).unwrap());
        assert!(z.index_of(&z.scale_rational(&rat(1, 2)).unwrap()).is_err());
    }

    #[test]
    fn kernel_elements_of_projection() {
        let k = field(&[1, 0, 1]);
        let z = Lattice::equation_order(&k);
        // kill the real coordinate
        let m = RatMatrix::from_i64(&[&[1], &[0]]);
        let ker = z.kernel_elements(&m);
        assert_eq!(ker.len(), 1);
        assert_eq!(
            ker[0].iter().map(|c| c.abs()).collect::<Vec<_>>(),
            vec![rat(0, 1), rat(1, 1)]
        );
    }

    fn random_lattice(k: &Arc<NumberField>, entries: &[i64], den: i64) -> Option<Lattice> {
        let d = k.degree();
        let gens: Vec<Elem> = entries
            .chunks(d)
            .map(|r| r.iter().map(|&c| rat(c, den)).collect())
            .collect();
        Lattice::from_generators(k, &gens).ok()
    }

    proptest! {
        #[test]
        fn dual_of_dual(entries in prop::collection::vec(-9i64..10, 16), den in 1i64..6) {
            let k = field(&[529, -138, 32, -6, 1]);
            if let Some(l) = random_lattice(&k, &entries, den) {
                prop_assert_eq!(l.trace_dual().unwrap().trace_dual().unwrap(), l.clone());
                // covolumes of dual pairs multiply to 1/|det T|
                let t = k.trace_matrix().determinant().abs();
                prop_assert_eq!(l.covolume() * l.trace_dual().unwrap().covolume() * t, BigRational::one());
            }
        }

        #[test]
        fn scaling_discriminant(entries in prop::collection::vec(-9i64..10, 9), c in 1i64..8) {
            let k = field(&[-2, 1, 0, 1]);
            if let Some(l) = random_lattice(&k, &entries, 1) {
                let s = l.scale_rational(&rat(c, 1)).unwrap();
                prop_assert_eq!(s.discriminant(), l.discriminant() * rat(c.pow(6), 1));
            }
        }

        #[test]
        fn membership_agrees_with_coordinates(entries in prop::collection::vec(-9i64..10, 9), z in prop::collection::vec(-5i64..6, 3)) {
            let k = field(&[-2, 1, 0, 1]);
            if let Some(l) = random_lattice(&k, &entries, 3) {
                let b = l.basis_matrix();
                let v = b.apply_row(&z.iter().map(|&c| rat(c, 1)).collect::<Vec<_>>());
                let coords = l.coordinates(&v).unwrap();
                prop_assert_eq!(coords, z.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>());
                let mut off = v.clone();
                off[0] += BigRational::new(BigInt::one(), l.den() * 2);
                prop_assert!(!l.contains(&off));
            }
        }
    }
}
