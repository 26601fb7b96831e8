//! Limiting angle distributions on the ordered simplex `0 <= t_1 <= ... <= t_n <= pi`.
//!
//! `mu_n` is the distribution of principally polarized varieties (Haar measure
//! on the compact symplectic group) and `nu_n` that of isogeny classes. The
//! closed-form constant `d_n = 1/(v_n pi^n)` does not make `nu_n` a probability
//! measure (for `n = 1` the total mass is `1/(2 pi)`), so both it and the
//! numerically normalized constant are exposed.

use std::f64::consts::PI;
use std::io::Write;

use gauss_quad::legendre::GaussLegendre;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::factor::prime_power;
use crate::arith::to_f64;
use crate::error::{domain, Error, Result};
use crate::serde_util;

/// Largest `n` accepted by the simplex quadrature.
pub const MAX_QUADRATURE_DIM: usize = 4;

const GL_POINTS: usize = 64;
const REFINE_TOL: f64 = 1e-8;
const MAX_PANELS: usize = 32;

/// `v_n = 2^n/n! * prod_{j=1}^n (2j/(2j-1))^(n+1-j)`.
pub fn constant_v(n: usize) -> Result<BigRational> {
    if n == 0 {
        return domain("n must be positive");
    }
    let mut v = BigRational::from_integer(BigInt::from(2).pow(n as u32));
    for k in 2..=n {
        v /= BigRational::from_integer(k.into());
    }
    for j in 1..=n {
        let r = BigRational::new((2 * j).into(), (2 * j - 1).into());
        for _ in 0..(n + 1 - j) {
            v *= &r;
        }
    }
    Ok(v)
}

/// `c_n = 2^(n^2) / pi^n`.
pub fn constant_c(n: usize) -> f64 {
    2f64.powi((n * n) as i32) / PI.powi(n as i32)
}

/// The closed-form constant `1/(v_n pi^n)`.
pub fn constant_d_closed_form(n: usize) -> Result<f64> {
    let v = constant_v(n)?;
    Ok(1.0 / (crate::arith::rat_to_f64(&v) * PI.powi(n as i32)))
}

/// `1 / integral of prod (cos t_i - cos t_j) prod sin t_i` over the simplex.
pub fn constant_d_effective(n: usize) -> Result<f64> {
    Ok(1.0 / integrate_simplex(n, nu_kernel)?.value)
}

/// Normalizing constant used for `nu_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NuConstant {
    /// `1/(v_n pi^n)`.
    ClosedForm,
    /// Normalizes `nu_n` to total mass 1.
    Effective,
}

impl NuConstant {
    pub fn value(self, n: usize) -> Result<f64> {
        match self {
            NuConstant::ClosedForm => constant_d_closed_form(n),
            NuConstant::Effective => constant_d_effective(n),
        }
    }
}

fn check_angles(theta: &[f64]) -> Result<()> {
    if theta.is_empty() {
        return domain("empty angle tuple");
    }
    if theta.iter().any(|t| !(0.0..=PI).contains(t)) {
        return domain(format!("angles {theta:?} leave [0, pi]"));
    }
    if theta.windows(2).any(|w| w[0] > w[1]) {
        return domain(format!("angles {theta:?} are not ascending"));
    }
    Ok(())
}

/// `prod_{i<j} (cos t_i - cos t_j) prod_i sin t_i`, no validation.
fn nu_kernel(theta: &[f64]) -> f64 {
    let cos: Vec<f64> = theta.iter().map(|t| t.cos()).collect();
    let mut v: f64 = theta.iter().map(|t| t.sin()).product();
    for i in 0..cos.len() {
        for j in i + 1..cos.len() {
            v *= cos[i] - cos[j];
        }
    }
    v
}

/// `c_n prod_{i<j} (cos t_i - cos t_j)^2 prod_i sin^2 t_i` at an ascending tuple.
pub fn density_mu(theta: &[f64]) -> Result<f64> {
    check_angles(theta)?;
    let k = nu_kernel(theta);
    Ok(constant_c(theta.len()) * k * k)
}

/// `d_n prod_{i<j} (cos t_i - cos t_j) prod_i sin t_i` at an ascending tuple.
pub fn density_nu(theta: &[f64], constant: NuConstant) -> Result<f64> {
    check_angles(theta)?;
    Ok(constant.value(theta.len())? * nu_kernel(theta))
}

fn density_nu_with(theta: &[f64], d: f64) -> Result<f64> {
    check_angles(theta)?;
    Ok(d * nu_kernel(theta))
}

/// A quadrature value with the difference between the last two refinements.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
    pub panels: usize,
}

struct Rule {
    nodes: Vec<(f64, f64)>,
    panels: usize,
}

impl Rule {
    /// Mapped nodes and weights for `[lo, hi]`.
    fn on(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let width = (hi - lo) / self.panels as f64;
        (0..self.panels).flat_map(move |p| {
            let a = lo + width * p as f64;
            self.nodes
                .iter()
                .map(move |&(x, w)| (a + 0.5 * width * (x + 1.0), 0.5 * width * w))
        })
    }
}

fn nested<F: Fn(&[f64]) -> f64>(rule: &Rule, f: &F, theta: &mut Vec<f64>, n: usize, lo: f64) -> f64 {
    if theta.len() == n {
        return f(theta);
    }
    let mut sum = 0.0;
    for (x, w) in rule.on(lo, PI) {
        theta.push(x);
        sum += w * nested(rule, f, theta, n, x);
        theta.pop();
    }
    sum
}

fn integrate_with(n: usize, panels: usize, nodes: &[(f64, f64)], f: &(impl Fn(&[f64]) -> f64 + Sync)) -> f64 {
    let rule = Rule {
        nodes: nodes.to_vec(),
        panels,
    };
    // outermost level in parallel, summed in node order
    let outer: Vec<(f64, f64)> = rule.on(0.0, PI).collect();
    let parts: Vec<f64> = outer
        .par_iter()
        .map(|&(x, w)| {
            let mut theta = Vec::with_capacity(n);
            theta.push(x);
            w * nested(&rule, f, &mut theta, n, x)
        })
        .collect();
    parts.iter().sum()
}

/// Integral of `f` over the ordered simplex by iterated 64-point Gauss-Legendre
/// panels, doubling the panel count until successive values agree to 1e-8.
pub fn integrate_simplex<F>(n: usize, f: F) -> Result<Quadrature>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if n == 0 || n > MAX_QUADRATURE_DIM {
        return domain(format!(
            "simplex quadrature supports 1 <= n <= {MAX_QUADRATURE_DIM}, got {n}"
        ));
    }
    let gl = GaussLegendre::new(GL_POINTS).map_err(|e| Error::Internal(e.to_string()))?;
    let nodes = gl.as_node_weight_pairs();
    let mut panels = 1;
    let mut prev = integrate_with(n, panels, nodes, &f);
    loop {
        panels *= 2;
        let next = integrate_with(n, panels, nodes, &f);
        let err = (next - prev).abs();
        if err < REFINE_TOL * next.abs().max(1.0) || panels >= MAX_PANELS {
            return Ok(Quadrature {
                value: next,
                error_estimate: err,
                panels,
            });
        }
        prev = next;
    }
}

fn phi_ratio(q: &BigInt) -> Result<f64> {
    let (p, _) = prime_power(q).ok_or_else(|| Error::Domain(format!("q = {q} is not a prime power")))?;
    Ok(1.0 - 1.0 / to_f64(&p))
}

/// `v_n (phi(q)/q) q^(n(n+1)/4)`, the asymptotic number of isogeny classes.
pub fn isogeny_class_count_estimate(n: usize, q: &BigInt) -> Result<f64> {
    let v = crate::arith::rat_to_f64(&constant_v(n)?);
    Ok(v * phi_ratio(q)? * to_f64(q).powf((n * (n + 1)) as f64 / 4.0))
}

/// The displayed per-class average
/// `2^(n^2+1)/pi^(2n) * (q/phi(q)) * q^(n(n+1)/4) * prod (cos a_i - cos a_j) prod sin a_i`.
pub fn average_ppav_estimate(n: usize, q: &BigInt, theta: &[f64]) -> Result<f64> {
    check_angles(theta)?;
    if theta.len() != n {
        return domain(format!("expected {n} angles, got {}", theta.len()));
    }
    let lead = 2f64.powi((n * n + 1) as i32) / PI.powi(2 * n as i32);
    Ok(lead / phi_ratio(q)? * to_f64(q).powf((n * (n + 1)) as f64 / 4.0) * nu_kernel(theta))
}

/// The same average rebuilt from its ingredients: the polarized-variety density
/// `2 q^(n(n+1)/2) mu_n` over the class density `count_estimate * nu_n`.
///
/// With the closed-form `d_n` this exceeds [`average_ppav_estimate`] by exactly
/// `pi^(2n)`.
pub fn average_ppav_composed(n: usize, q: &BigInt, theta: &[f64], constant: NuConstant) -> Result<f64> {
    let ppav = 2.0 * to_f64(q).powf((n * (n + 1)) as f64 / 2.0) * density_mu(theta)?;
    let classes = isogeny_class_count_estimate(n, q)? * density_nu(theta, constant)?;
    Ok(ppav / classes)
}

/// The constants for one `n`.
#[derive(Clone, Debug, Serialize)]
pub struct MeasureSpec {
    pub n: usize,
    #[serde(serialize_with = "serde_util::rat_str")]
    pub v_n: BigRational,
    #[serde(serialize_with = "serde_util::f64_17")]
    pub c_n: f64,
    #[serde(serialize_with = "serde_util::f64_17")]
    pub d_n_closed_form: f64,
    #[serde(serialize_with = "serde_util::f64_17")]
    pub d_n_eff: f64,
    /// `nu_n(S_n)` under the closed-form constant.
    #[serde(serialize_with = "serde_util::f64_17")]
    pub nu_closed_form_mass: f64,
    /// `mu_n(S_n)` by quadrature.
    #[serde(serialize_with = "serde_util::f64_17")]
    pub mu_mass: f64,
}

pub fn measure_spec(n: usize) -> Result<MeasureSpec> {
    let kernel_mass = integrate_simplex(n, nu_kernel)?.value;
    let c = constant_c(n);
    let mu_mass = integrate_simplex(n, |t| {
        let k = nu_kernel(t);
        c * k * k
    })?
    .value;
    let d_closed = constant_d_closed_form(n)?;
    Ok(MeasureSpec {
        n,
        v_n: constant_v(n)?,
        c_n: c,
        d_n_closed_form: d_closed,
        d_n_eff: 1.0 / kernel_mass,
        nu_closed_form_mass: d_closed * kernel_mass,
        mu_mass,
    })
}

/// Ordered tuples on the grid `pi k/(grid - 1)`, `k = 0..grid`.
fn grid_tuples(n: usize, grid: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, grid: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for k in start..grid {
            cur.push(k);
            rec(n, grid, k, cur, out);
            cur.pop();
        }
    }
    rec(n, grid, 0, &mut cur, &mut out);
    out
}

/// One row of a density table.
#[derive(Clone, Debug)]
pub struct DensityRow {
    pub theta: Vec<f64>,
    pub mu: f64,
    pub nu_effective: f64,
    pub nu_closed_form: f64,
}

/// Densities at every ascending tuple of a regular grid with `grid` points per axis.
pub fn density_table(n: usize, grid: usize) -> Result<Vec<DensityRow>> {
    if grid < 2 {
        return domain("grid needs at least 2 points");
    }
    let d_eff = constant_d_effective(n)?;
    let d_closed = constant_d_closed_form(n)?;
    let step = PI / (grid - 1) as f64;
    grid_tuples(n, grid)
        .into_iter()
        .map(|ks| {
            // keep the endpoint exactly pi
            let theta: Vec<f64> = ks
                .iter()
                .map(|&k| if k == grid - 1 { PI } else { k as f64 * step })
                .collect();
            Ok(DensityRow {
                mu: density_mu(&theta)?,
                nu_effective: density_nu_with(&theta, d_eff)?,
                nu_closed_form: density_nu_with(&theta, d_closed)?,
                theta,
            })
        })
        .collect()
}

/// CSV with columns `theta_1..theta_n, mu, nu_effective, nu_closed_form`, floats at 17 digits.
pub fn write_density_csv<W: Write>(rows: &[DensityRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if let Some(first) = rows.first() {
        let mut header: Vec<String> = (1..=first.theta.len()).map(|i| format!("theta_{i}")).collect();
        header.extend(["mu", "nu_effective", "nu_closed_form"].map(String::from));
        w.write_record(&header)?;
    }
    let fmt = |x: f64| format!("{x:.16e}");
    for r in rows {
        let mut rec: Vec<String> = r.theta.iter().map(|&t| fmt(t)).collect();
        rec.extend([fmt(r.mu), fmt(r.nu_effective), fmt(r.nu_closed_form)]);
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// `q/phi(q)` exposed for reports.
pub fn q_over_phi(q: &BigInt) -> Result<f64> {
    Ok(1.0 / phi_ratio(q)?)
}

/// `v_n` as a float.
pub fn constant_v_f64(n: usize) -> Result<f64> {
    constant_v(n)?
        .to_f64()
        .ok_or_else(|| Error::Internal("v_n out of range".into()))
}
