use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use super::field::{Elem, NumberField};
use super::lattice::Lattice;
use crate::arith::{IntPoly, RatMatrix};
use crate::error::{domain, Error, Result};
use crate::serde_util::{self, json_int, parse_json_int};
use crate::weil::{is_simple, IsogenyClassSpec};

/// The CM field `K = Q[pi]` of a Weil polynomial, its real subfield `K+ = Q[alpha]`
/// with `alpha = pi + q/pi`, and complex conjugation `pi -> q/pi`.
#[derive(Clone, Debug)]
pub struct FieldContext {
    f: IntPoly,
    q: BigInt,
    g: IntPoly,
    n: usize,
    field: Arc<NumberField>,
    real_field: Arc<NumberField>,
    conj: RatMatrix,
    /// Rows `alpha^k`, `k < n`, in power-basis coordinates of `K`.
    embed: RatMatrix,
}

impl FieldContext {
    pub fn new(spec: &IsogenyClassSpec) -> Result<Self> {
        let f = spec.f().clone();
        if f.degree().is_some_and(|d| d <= 4) && !is_simple(&f)? {
            return Err(Error::InvalidWeil(format!("{f} is reducible over Q")));
        }
        let field = NumberField::new(f.clone())?;
        let real_field = NumberField::new(spec.g().clone())?;
        let pi = field.gen();
        let q = BigRational::from_integer(spec.q().clone());
        let pi_bar = field.scale(
            &field
                .inverse(&pi)
                .ok_or_else(|| Error::Internal("pi is not invertible".into()))?,
            &q,
        );
        let d = field.degree();
        let conj = RatMatrix::new(d, (0..d as u32).map(|k| field.pow(&pi_bar, k)).collect());
        let alpha = field.add(&pi, &pi_bar);
        let n = spec.n();
        let embed = RatMatrix::new(d, (0..n as u32).map(|k| field.pow(&alpha, k)).collect());
        Ok(FieldContext {
            f,
            q: spec.q().clone(),
            g: spec.g().clone(),
            n,
            field,
            real_field,
            conj,
            embed,
        })
    }

    pub fn from_weil(f: IntPoly, q: BigInt) -> Result<Self> {
        Self::new(&IsogenyClassSpec::new(f, q)?)
    }

    pub fn f(&self) -> &IntPoly {
        &self.f
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn g(&self) -> &IntPoly {
        &self.g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn real_field(&self) -> &Arc<NumberField> {
        &self.real_field
    }

    /// Matrix of `x -> x-bar` acting on row vectors.
    pub fn conj(&self) -> &RatMatrix {
        &self.conj
    }

    pub fn trace_gram(&self) -> &RatMatrix {
        self.field.trace_matrix()
    }

    pub fn pi(&self) -> Elem {
        self.field.gen()
    }

    pub fn pi_bar(&self) -> Elem {
        self.conjugate(&self.pi())
    }

    pub fn alpha(&self) -> Elem {
        self.field.add(&self.pi(), &self.pi_bar())
    }

    pub fn conjugate(&self, x: &[BigRational]) -> Elem {
        self.conj.apply_row(x)
    }

    /// An element of `K+` (coordinates on `1, alpha, ..., alpha^(n-1)`) inside `K`.
    pub fn embed_real(&self, x: &[BigRational]) -> Elem {
        self.embed.apply_row(x)
    }

    /// Coordinates over `1, alpha, ...` of a conjugation-fixed element.
    pub fn restrict_real(&self, x: &[BigRational]) -> Option<Elem> {
        self.embed.solve_left(x)
    }

    pub fn is_stable(&self, r: &Lattice) -> Result<bool> {
        Ok(r.image(&self.conj)? == *r)
    }

    /// `R+ = R ∩ K+`, as a lattice in `K+`.
    pub fn real_sublattice(&self, r: &Lattice) -> Result<Lattice> {
        let minus_id = self.conj.add_scaled_identity(&-BigRational::one());
        let fixed: Vec<Elem> = r
            .kernel_elements(&minus_id)
            .iter()
            .map(|v| {
                self.restrict_real(v)
                    .ok_or_else(|| Error::Internal("fixed element outside Q(alpha)".into()))
            })
            .collect::<Result<_>>()?;
        Lattice::from_generators(&self.real_field, &fixed)
    }

    /// Z-basis of the pure imaginary elements `{x in L : x-bar = -x}`.
    pub fn pure_imaginary(&self, l: &Lattice) -> Vec<Elem> {
        l.kernel_elements(&self.conj.add_scaled_identity(&BigRational::one()))
    }

    /// The smallest order containing the given elements.
    pub fn order_generated_by(&self, elems: &[Elem]) -> Result<Lattice> {
        let k = &self.field;
        let mut gens: Vec<Elem> = vec![k.one()];
        gens.extend(elems.iter().cloned());
        // span enough monomials to reach full rank, then close under products
        let mut layer = gens.clone();
        for _ in 0..k.degree() {
            layer = layer
                .iter()
                .flat_map(|x| elems.iter().map(move |y| k.mul(x, y)))
                .collect();
            gens.extend(layer.iter().cloned());
            if Lattice::from_generators(k, &gens).is_ok() {
                break;
            }
        }
        let mut r = Lattice::from_generators(k, &gens)?;
        loop {
            let next = r.product(&r)?.sum(&r)?;
            if next == r {
                return Ok(r);
            }
            r = next;
        }
    }

    /// `Z[pi, pi-bar]`, spanned by `1, pi, pi-bar, ..., pi^(n-1), pi-bar^(n-1), pi^n`.
    pub fn minimal_order(&self) -> Result<Lattice> {
        let k = &self.field;
        let (pi, pi_bar) = (self.pi(), self.pi_bar());
        let mut gens = vec![k.one()];
        for i in 1..self.n as u32 {
            gens.push(k.pow(&pi, i));
            gens.push(k.pow(&pi_bar, i));
        }
        gens.push(k.pow(&pi, self.n as u32));
        Lattice::from_generators(k, &gens)
    }

    /// `B[pi] = B + B pi` for an order `B` of `K+` containing `alpha`.
    pub fn order_over_real(&self, b: &Lattice) -> Result<Lattice> {
        if b.field() != &self.real_field {
            return domain("order_over_real expects a lattice in the real subfield");
        }
        if !b.contains(&self.real_field.gen()) {
            return domain("B must contain pi + pi-bar");
        }
        let pi = self.pi();
        let mut gens = Vec::with_capacity(2 * self.n);
        for v in b.basis() {
            let e = self.embed_real(&v);
            gens.push(self.field.mul(&e, &pi));
            gens.push(e);
        }
        Lattice::from_generators(&self.field, &gens)
    }

    pub fn convenient_certificate(&self, r: &Lattice) -> Result<ConvenienceCertificate> {
        if r.field() != &self.field || !r.is_ring() {
            return domain("convenience is defined for orders of K");
        }
        let stable = self.is_stable(r)?;
        let real_gorenstein = self.real_sublattice(r)?.is_gorenstein()?;
        let dual = r.trace_dual()?;
        let imag = self.pure_imaginary(&dual);
        let gens: Vec<Elem> = r
            .basis()
            .iter()
            .flat_map(|x| imag.iter().map(|y| self.field.mul(x, y)))
            .collect();
        let index = match Lattice::from_generators(&self.field, &gens) {
            Ok(rp) => dual.index_of(&rp)?,
            // the pure imaginary part does not even span K over K+
            Err(Error::Rank { .. }) => BigInt::zero(),
            Err(e) => return Err(e),
        };
        let is_convenient = stable && real_gorenstein && index.is_one();
        Ok(ConvenienceCertificate {
            stable_under_conjugation: stable,
            real_subring_gorenstein: real_gorenstein,
            pure_imaginary_index: index,
            is_convenient,
        })
    }

    /// Order-file JSON: `{"f", "q", "den", "basis"}`, integers as numbers up to 2^53.
    pub fn lattice_to_json(&self, l: &Lattice) -> Value {
        json!({
            "f": self.f.coeffs().iter().map(json_int).collect::<Vec<_>>(),
            "q": json_int(&self.q),
            "den": json_int(l.den()),
            "basis": l
                .hnf_rows()
                .iter()
                .map(|r| r.iter().map(json_int).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    /// Parse an order file, validating the Weil polynomial and the lattice rank.
    pub fn lattice_from_json(v: &Value) -> Result<(FieldContext, Lattice)> {
        let ints = |v: &Value, what: &str| -> Result<Vec<BigInt>> {
            v.as_array()
                .ok_or_else(|| Error::Domain(format!("{what} must be an array")))?
                .iter()
                .map(|c| parse_json_int(c).ok_or_else(|| Error::Domain(format!("bad integer {c} in {what}"))))
                .collect()
        };
        let int = |key: &str| -> Result<BigInt> {
            parse_json_int(&v[key]).ok_or_else(|| Error::Domain(format!("missing or bad \"{key}\"")))
        };
        let f = IntPoly::new(ints(&v["f"], "f")?);
        let ctx = FieldContext::from_weil(f, int("q")?)?;
        let rows: Vec<Vec<BigInt>> = v["basis"]
            .as_array()
            .ok_or_else(|| Error::Domain("\"basis\" must be an array of rows".into()))?
            .iter()
            .map(|r| ints(r, "basis row"))
            .collect::<Result<_>>()?;
        let l = Lattice::from_int_basis(&ctx.field, int("den")?, &rows)?;
        Ok((ctx, l))
    }

    pub fn read_order_file(path: &Path) -> Result<(FieldContext, Lattice)> {
        let text = std::fs::read_to_string(path)?;
        Self::lattice_from_json(&serde_json::from_str(&text)?)
    }
}

/// Outcome of the three convenience conditions for an order `R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvenienceCertificate {
    pub stable_under_conjugation: bool,
    pub real_subring_gorenstein: bool,
    /// `[R† : R * (pure imaginary part of R†)]`, or 0 if that product has lower rank.
    #[serde(serialize_with = "serde_util::int_json")]
    pub pure_imaginary_index: BigInt,
    pub is_convenient: bool,
}

/// Order of conductor `c` in the real quadratic subfield: `Z + c O_{K+}`.
///
/// Requires `n = 2`; `c` must divide the conductor of `Z[alpha]` for the order to
/// contain `alpha`.
pub fn real_quadratic_order(ctx: &FieldContext, c: &BigInt) -> Result<Lattice> {
    if ctx.n != 2 {
        return domain("real quadratic orders need n = 2");
    }
    let (a, c0) = (ctx.g.coeff(1), ctx.g.coeff(0));
    let disc = &a * &a - BigInt::from(4) * c0;
    let qd = crate::quadratic::QuadDiscriminant::new(&disc)?;
    // sqrt(D0) = (2 alpha + a) / F, so c * (D0 + sqrt D0) / 2 is
    // c D0/2 + c a/(2F) + (c/F) alpha
    let two = BigRational::from_integer(2.into());
    let cf = BigRational::new(c.clone(), qd.conductor.clone());
    let d0 = BigRational::from_integer(qd.delta0.clone());
    let omega = vec![
        BigRational::from_integer(c.clone()) * &d0 / &two + &cf * BigRational::from_integer(a) / &two,
        cf,
    ];
    Lattice::from_generators(&ctx.real_field, &[ctx.real_field.one(), omega])
}

/// The order `R = Z[2 sqrt 2] + Z[2 sqrt 2] (pi - pi-bar)/2` of a field `K` with
/// `K+ = Q(sqrt 2)` and `pi + pi-bar = 2 + 4 sqrt 2`: stable, with Gorenstein
/// real subring, yet not convenient (`R†` needs index 2).
pub fn inconvenient_example() -> Result<(FieldContext, Lattice)> {
    let p = 19i64;
    let f = IntPoly::from_i64(&[p * p, -4 * p, 10, -4, 1]);
    let ctx = FieldContext::from_weil(f, p.into())?;
    let k = ctx.field.clone();
    let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let sqrt2 = k.scale(&k.sub(&ctx.alpha(), &k.from_int(2)), &r(1, 4));
    let delta = k.sub(&ctx.pi(), &ctx.pi_bar());
    let half_delta = k.scale(&delta, &r(1, 2));
    let gens = vec![
        k.one(),
        k.scale(&sqrt2, &r(2, 1)),
        half_delta.clone(),
        k.mul(&half_delta, &sqrt2),
    ];
    let l = Lattice::from_generators(&k, &gens)?;
    Ok((ctx, l))
}
