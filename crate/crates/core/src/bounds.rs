//! Norm bounds on integer minimizers.
//!
//! For `f` with positive definite leading form, every integer and
//! continuous minimizer `x'` satisfies `||x'||_p <= R`, where `R` is the
//! largest nonnegative real root of `q(lambda) = sum_j c_j lambda^j` and
//! each `c_j` lower-bounds the homogeneous component `f_j` on the
//! p-sphere. This module computes the `c_j` by four methods (coefficient
//! norm, the closed-form monomial-maximizer refinement, sphere SOS
//! programs, and the leading-form bound against `sum X_i^d`), the radius,
//! the classical comparison radius, per-orthant refinements, and the
//! end-to-end certification pipeline.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{Monomial, Polynomial};
use crate::rng::{p_norm, Rng};
use crate::sos::{self, SosOptions};

#[derive(Debug, Error, PartialEq)]
pub enum BoundsError {
    #[error("leading coefficient bound c_d must be positive, got {0}")]
    NonPositiveLeading(f64),
    #[error("monomial maximizer requires a nonzero exponent vector")]
    ZeroExponent,
    #[error("orthant enumeration is limited to n <= 16, got n = {0}")]
    TooManyOrthants(usize),
    #[error("degree must be even and positive, got {0}")]
    BadDegree(u32),
    #[error("the zero polynomial has no minimizer bound")]
    ZeroPolynomial,
}

/// Where a per-degree bound came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CjProvenance {
    CoefficientNorm,
    MonomialRefined,
    SphereSos,
    NieBound,
    /// Several methods tied at the maximum.
    Max,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CjEntry {
    pub degree: u32,
    pub value: f64,
    pub provenance: CjProvenance,
}

/// The vector `(c_1, ..., c_d)` of sphere lower bounds for one polynomial.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CjVector {
    pub p: u32,
    pub entries: Vec<CjEntry>,
}

impl CjVector {
    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.value).collect()
    }
}

/// Trivial coefficient-norm bound `c_j = -||f_j||_1`, valid on every
/// p-sphere.
pub fn cj_coefficient_norm(fj: &Polynomial) -> f64 {
    -fj.one_norm()
}

/// The maximizer of `x^alpha` on the nonnegative part of the p-sphere:
/// `x_i = (alpha_i / |alpha|)^(1/p)`.
pub fn monomial_sphere_maximizer(alpha: &Monomial, p: f64) -> Result<Vec<f64>, BoundsError> {
    let total = alpha.modulus();
    if total == 0 {
        return Err(BoundsError::ZeroExponent);
    }
    Ok(alpha
        .0
        .iter()
        .map(|&a| (a as f64 / total as f64).powf(1.0 / p))
        .collect())
}

/// Refined per-degree bound: `sum_alpha -|a_alpha| * (xhat_alpha)^alpha`,
/// never worse than the coefficient norm.
pub fn cj_monomial_refined(fj: &Polynomial, p: f64) -> f64 {
    let mut acc = 0.0;
    for (m, c) in fj.terms() {
        if m.modulus() == 0 {
            continue;
        }
        let xhat = monomial_sphere_maximizer(m, p).expect("nonconstant monomial");
        acc -= c.abs() * m.eval(&xhat);
    }
    acc
}

/// Convert the leading-form value `gamma` (from `f_d >= gamma sum X_i^d`)
/// into a bound valid on the p-sphere, where `sum x_i^d` ranges over
/// `[min(1, n^(1-d/p)), max(1, n^(1-d/p))]`.
pub fn nie_to_sphere(gamma: f64, n: usize, d: u32, p: u32) -> f64 {
    let factor = (n as f64).powf(1.0 - d as f64 / p as f64);
    let lo = factor.min(1.0);
    let hi = factor.max(1.0);
    if gamma >= 0.0 {
        gamma * lo
    } else {
        gamma * hi
    }
}

/// Best-available `c_j` for every degree `1..=d`: the entry-wise maximum of
/// the coefficient norm, the monomial-maximizer refinement and (for even p)
/// the sphere SOS bound; the top degree additionally consults the
/// leading-form program. SOS failures fall back to the algebraic bounds.
pub fn best_cj(f: &Polynomial, p: u32, k: u32, opts: &SosOptions) -> Result<CjVector, BoundsError> {
    let d = f.degree().as_u32().ok_or(BoundsError::ZeroPolynomial)?;
    let comps = f.homogeneous_components();
    let mut entries = Vec::with_capacity(d as usize);
    for j in 1..=d {
        let fj = &comps[j as usize];
        if fj.is_zero() {
            entries.push(CjEntry {
                degree: j,
                value: 0.0,
                provenance: CjProvenance::CoefficientNorm,
            });
            continue;
        }
        let mut candidates: Vec<(f64, CjProvenance)> = vec![
            (cj_coefficient_norm(fj), CjProvenance::CoefficientNorm),
            (
                cj_monomial_refined(fj, p as f64),
                CjProvenance::MonomialRefined,
            ),
        ];
        if p % 2 == 0 {
            if let Ok(b) = sos::sphere_min_bound(fj, p, k, opts) {
                if b.is_optimal() {
                    candidates.push((b.value, CjProvenance::SphereSos));
                }
            }
        }
        if j == d {
            if let Ok(b) = sos::nie_bound(fj, opts) {
                if b.is_optimal() {
                    candidates.push((nie_to_sphere(b.value, f.n(), d, p), CjProvenance::NieBound));
                }
            }
        }
        let best = candidates
            .iter()
            .cloned()
            .fold((f64::NEG_INFINITY, CjProvenance::Max), |acc, c| {
                if c.0 > acc.0 {
                    c
                } else {
                    acc
                }
            });
        let ties = candidates
            .iter()
            .filter(|(v, _)| (v - best.0).abs() <= 1e-12 * (1.0 + best.0.abs()))
            .count();
        entries.push(CjEntry {
            degree: j,
            value: best.0,
            provenance: if ties > 1 { CjProvenance::Max } else { best.1 },
        });
    }
    Ok(CjVector { p, entries })
}

/// Largest nonnegative real root of `q(lambda) = sum_{j=1}^d c_j lambda^j`
/// with `c_d > 0`. Zero always qualifies, so the result is 0 when no
/// positive root exists.
///
/// The factor lambda is deflated and the rest goes through companion-matrix
/// eigenvalues, imaginary parts filtered at 1e-8, followed by one Newton
/// polish.
pub fn largest_nonneg_root(c: &[f64]) -> Result<f64, BoundsError> {
    let d = c.len();
    assert!(d >= 1, "need at least the leading coefficient");
    let cd = c[d - 1];
    if cd <= 0.0 {
        return Err(BoundsError::NonPositiveLeading(cd));
    }
    // q(lambda)/lambda has coefficients c_1..c_d of degrees 0..d-1.
    let deflated: Vec<f64> = c.iter().map(|v| v / cd).collect();
    let deg = d - 1;
    if deg == 0 {
        return Ok(0.0);
    }
    let mut companion = nalgebra::DMatrix::zeros(deg, deg);
    for i in 1..deg {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        companion[(i, deg - 1)] = -deflated[i];
    }
    let eigs = companion.complex_eigenvalues();
    let mut best = 0.0f64;
    for e in eigs.iter() {
        if e.im.abs() <= 1e-8 * (1.0 + e.re.abs()) && e.re > best {
            best = e.re;
        }
    }
    if best > 0.0 {
        // One Newton polish on q(lambda)/lambda.
        let eval = |x: f64| -> (f64, f64) {
            let mut v = 0.0;
            let mut dv = 0.0;
            for (i, &ci) in deflated.iter().enumerate() {
                v += ci * x.powi(i as i32);
                if i >= 1 {
                    dv += ci * i as f64 * x.powi(i as i32 - 1);
                }
            }
            (v, dv)
        };
        let (v, dv) = eval(best);
        if dv.abs() > 1e-12 {
            let polished = best - v / dv;
            if polished.is_finite()
                && polished > 0.0
                && (polished - best).abs() < 0.1 * (1.0 + best)
            {
                best = polished;
            }
        }
    }
    Ok(best.max(0.0))
}

/// The classical comparison radius
/// `R_lit = max(1, (1/c_d) sum_{0 < |alpha| < d} |a_alpha|)`, stated for
/// the 2-norm.
pub fn marshall_radius(f: &Polynomial, c_d: f64) -> Result<f64, BoundsError> {
    if c_d <= 0.0 {
        return Err(BoundsError::NonPositiveLeading(c_d));
    }
    let d = f.degree().as_u32().ok_or(BoundsError::ZeroPolynomial)?;
    let mut mid = 0.0;
    for (m, c) in f.terms() {
        let deg = m.modulus();
        if deg > 0 && deg < d {
            mid += c.abs();
        }
    }
    Ok((mid / c_d).max(1.0))
}

/// Per-orthant radius: sign vector tau, the orthant-restricted `c_j^tau`
/// (only coefficients that are negative after the sign change contribute)
/// and the resulting radius for minimizers inside that orthant.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrthantBound {
    pub tau: Vec<i8>,
    pub c: Vec<f64>,
    pub radius: f64,
}

/// The `2^n` orthant radii; the integer search region is the union over tau
/// of the orthant pieces of the p-balls of radius `R^tau`. Lower-order
/// entries use `c_j^tau = sum -|a_alpha tau^alpha|^- xhat^alpha`; the
/// top-degree entry keeps the global `c_d`.
pub fn orthant_radii(f: &Polynomial, p: u32, c_d: f64) -> Result<Vec<OrthantBound>, BoundsError> {
    if c_d <= 0.0 {
        return Err(BoundsError::NonPositiveLeading(c_d));
    }
    let n = f.n();
    if n > 16 {
        return Err(BoundsError::TooManyOrthants(n));
    }
    let d = f.degree().as_u32().ok_or(BoundsError::ZeroPolynomial)?;
    let mut out = Vec::with_capacity(1 << n);
    for mask in 0..(1u32 << n) {
        let tau: Vec<i8> = (0..n)
            .map(|i| if mask & (1 << i) == 0 { 1 } else { -1 })
            .collect();
        let mut c = vec![0.0; d as usize];
        for (m, coeff) in f.terms() {
            let deg = m.modulus();
            if deg == 0 || deg == d {
                continue;
            }
            let mut sign = 1.0;
            for (i, &e) in m.0.iter().enumerate() {
                if tau[i] < 0 && e % 2 == 1 {
                    sign = -sign;
                }
            }
            let signed = coeff * sign;
            if signed < 0.0 {
                let xhat = monomial_sphere_maximizer(m, p as f64)?;
                c[deg as usize - 1] -= signed.abs() * m.eval(&xhat);
            }
        }
        c[d as usize - 1] = c_d;
        let radius = largest_nonneg_root(&c)?;
        out.push(OrthantBound { tau, c, radius });
    }
    Ok(out)
}

/// Outcome of the definiteness certification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Definiteness {
    /// `c_d > 0` was certified at the recorded relaxation level.
    CertifiedPositive,
    /// A point with `f_d < 0` was found; no minimizers exist.
    CertifiedNotPsd,
    /// Neither a certificate nor a witness within the level budget.
    Undecided,
}

/// Full norm-bound report (the certification pipeline output).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormBoundReport {
    pub n: usize,
    pub degree: u32,
    pub p: u32,
    pub definiteness: Definiteness,
    /// Relaxation level at which `c_d > 0` was certified.
    pub cert_level: Option<u32>,
    pub c: Option<CjVector>,
    pub radius: Option<f64>,
    /// Integer minimizers satisfy `|x_i| <= box_radius`.
    pub box_radius: Option<i64>,
    pub marshall: Option<f64>,
    pub witness: Option<Vec<f64>>,
    pub orthants: Vec<OrthantBound>,
}

#[derive(Debug, Clone, Copy)]
pub struct NormBoundOptions {
    pub sos: SosOptions,
    /// Compute the orthant table when `2^n` is at most this.
    pub orthant_limit: usize,
    pub witness_samples: usize,
}

impl Default for NormBoundOptions {
    fn default() -> Self {
        NormBoundOptions {
            sos: SosOptions::default(),
            orthant_limit: 8,
            witness_samples: 2000,
        }
    }
}

/// Certification loop: escalate the sphere program level for `j = d` until
/// `c_d > 0`, a negativity witness turns up, or the budget runs out.
fn certify_leading_form(
    fd: &Polynomial,
    p: u32,
    k_max: u32,
    opts: &NormBoundOptions,
) -> (Definiteness, Option<f64>, Option<u32>, Option<Vec<f64>>) {
    // Cheap sampling first: a single negative value settles the question.
    if let Some(w) = negativity_witness(fd, p, opts.witness_samples / 4, false) {
        return (Definiteness::CertifiedNotPsd, None, None, Some(w));
    }
    let mut k = 0;
    while k <= k_max {
        if let Ok(b) = sos::sphere_min_bound(fd, p, k, &opts.sos) {
            if b.is_optimal() && b.value > 0.0 {
                return (
                    Definiteness::CertifiedPositive,
                    Some(b.value),
                    Some(k),
                    None,
                );
            }
        }
        k += 2;
    }
    // Thorough witness search with local descent before giving up.
    if let Some(w) = negativity_witness(fd, p, opts.witness_samples, true) {
        return (Definiteness::CertifiedNotPsd, None, None, Some(w));
    }
    (Definiteness::Undecided, None, None, None)
}

/// Sphere sampling, optionally followed by projected gradient descent,
/// looking for a point with `f_d < 0`. Absence of a witness proves nothing.
fn negativity_witness(fd: &Polynomial, p: u32, samples: usize, descend: bool) -> Option<Vec<f64>> {
    let n = fd.n();
    let mut rng = Rng::new(0x5eed_7a11);
    let margin = -1e-9 * (1.0 + fd.one_norm());
    let mut best: Option<(f64, Vec<f64>)> = None;
    for _ in 0..samples {
        let x = rng.sphere_point(n, p as f64);
        let v = fd.evaluate(&x);
        if best.as_ref().map_or(true, |(bv, _)| v < *bv) {
            best = Some((v, x));
        }
    }
    let (mut val, mut x) = best?;
    if val < margin {
        return Some(x);
    }
    if !descend {
        return None;
    }
    let mut step = 0.1;
    for _ in 0..200 {
        let grad = fd_gradient(fd, &x);
        let mut cand: Vec<f64> = x.iter().zip(&grad).map(|(xi, gi)| xi - step * gi).collect();
        let norm = p_norm(&cand, p as f64);
        if norm < 1e-9 {
            break;
        }
        cand.iter_mut().for_each(|c| *c /= norm);
        let v = fd.evaluate(&cand);
        if v < val {
            val = v;
            x = cand;
            if val < margin {
                return Some(x);
            }
            step *= 1.2;
        } else {
            step *= 0.5;
            if step < 1e-12 {
                break;
            }
        }
    }
    None
}

pub(crate) fn fd_gradient(f: &Polynomial, x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut g = vec![0.0; n];
    for i in 0..n {
        let h = 1e-6 * (1.0 + x[i].abs());
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[i] += h;
        xm[i] -= h;
        g[i] = (f.evaluate(&xp) - f.evaluate(&xm)) / (2.0 * h);
    }
    g
}

/// The norm-bound pipeline: certify the leading form by escalating the
/// relaxation level up to `k_max`; on success compute the best `c_j`, the
/// radius `R`, the comparison radius and the orthant table. A negativity
/// witness yields `CertifiedNotPsd`; otherwise `Undecided` is reported and
/// no radius is produced.
pub fn compute_norm_bound(
    f: &Polynomial,
    p: u32,
    k_max: u32,
    opts: &NormBoundOptions,
) -> Result<NormBoundReport, BoundsError> {
    let d = f.degree().as_u32().ok_or(BoundsError::ZeroPolynomial)?;
    if d == 0 || d % 2 == 1 {
        return Err(BoundsError::BadDegree(d));
    }
    let fd = f.leading_form().expect("nonzero polynomial");
    let (definiteness, cd_cert, cert_level, witness) = certify_leading_form(&fd, p, k_max, opts);
    let mut report = NormBoundReport {
        n: f.n(),
        degree: d,
        p,
        definiteness: definiteness.clone(),
        cert_level,
        c: None,
        radius: None,
        box_radius: None,
        marshall: None,
        witness,
        orthants: Vec::new(),
    };
    if definiteness != Definiteness::CertifiedPositive {
        return Ok(report);
    }

    let mut c = best_cj(f, p, k_max, &opts.sos)?;
    // The certified value is itself a valid candidate for c_d.
    if let Some(cd) = cd_cert {
        let last = c.entries.last_mut().expect("degree >= 1");
        if cd > last.value {
            last.value = cd;
            last.provenance = CjProvenance::SphereSos;
        }
    }
    let cd = c.entries.last().expect("degree >= 1").value;
    if cd <= 0.0 {
        report.definiteness = Definiteness::Undecided;
        return Ok(report);
    }
    let radius = largest_nonneg_root(&c.values())?;
    report.marshall = Some(marshall_radius(f, cd)?);
    report.box_radius = Some(radius.floor() as i64);
    report.radius = Some(radius);
    if (1usize << f.n().min(30)) <= opts.orthant_limit {
        report.orthants = orthant_radii(f, p, cd)?;
    }
    report.c = Some(c);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(text: &str, n: usize) -> Polynomial {
        Polynomial::parse(text, n).unwrap()
    }

    #[test]
    fn coefficient_norm_examples() {
        assert_eq!(cj_coefficient_norm(&poly("3*x1 - 2*x2", 2)), -5.0);
        assert_eq!(cj_coefficient_norm(&Polynomial::zero(2)), 0.0);
        assert_eq!(
            cj_coefficient_norm(&poly("x1^4 - 3*x1^2*x2^2 + 2*x2^4", 2)),
            -6.0
        );
    }

    #[test]
    fn sphere_maximizer_closed_form() {
        let x = monomial_sphere_maximizer(&Monomial(vec![1, 1]), 2.0).unwrap();
        let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
        assert!((x[0] - inv_sqrt2).abs() < 1e-12);
        assert!((x[1] - inv_sqrt2).abs() < 1e-12);
        assert!((x[0] * x[1] - 0.5).abs() < 1e-12);

        let x = monomial_sphere_maximizer(&Monomial(vec![2, 0]), 2.0).unwrap();
        assert_eq!(x, vec![1.0, 0.0]);

        let x = monomial_sphere_maximizer(&Monomial(vec![1, 1]), 4.0).unwrap();
        let expect = 2.0_f64.powf(-0.25);
        assert!((x[0] - expect).abs() < 1e-12);
        assert!((x[0] * x[1] - 1.0 / 2.0_f64.sqrt()).abs() < 1e-12);

        assert_eq!(
            monomial_sphere_maximizer(&Monomial(vec![0, 0]), 2.0).unwrap_err(),
            BoundsError::ZeroExponent
        );
    }

    #[test]
    fn refined_cj_examples() {
        // -x1 x2 on the 2-sphere: refined -1/2 versus coefficient norm -1.
        assert!((cj_monomial_refined(&poly("-x1*x2", 2), 2.0) + 0.5).abs() < 1e-12);
        // Pure powers gain nothing.
        assert!((cj_monomial_refined(&poly("x1^2 + x2^2", 2), 2.0) + 2.0).abs() < 1e-12);
        // -x1^2 x2: xhat = (sqrt(2/3), sqrt(1/3)), value -(2/3)sqrt(1/3).
        let expect = -(2.0 / 3.0) * (1.0f64 / 3.0).sqrt();
        assert!((cj_monomial_refined(&poly("-x1^2*x2", 2), 2.0) - expect).abs() < 1e-12);
    }

    #[test]
    fn refined_never_below_coefficient_norm() {
        let mut rng = Rng::new(7);
        for _ in 0..50 {
            let n = 2;
            let terms: Vec<(Monomial, f64)> = sos::monomials_of_degree(n, 4)
                .into_iter()
                .map(|m| (m, rng.uniform_sym()))
                .collect();
            let fj = Polynomial::from_terms(n, terms);
            assert!(cj_monomial_refined(&fj, 2.0) >= cj_coefficient_norm(&fj) - 1e-12);
        }
    }

    #[test]
    fn largest_root_examples() {
        // q = lambda^2: only root 0.
        assert_eq!(largest_nonneg_root(&[0.0, 1.0]).unwrap(), 0.0);
        // q = lambda^4 - 3 lambda^2 - 2 lambda: lambda^3 - 3 lambda - 2 =
        // (lambda - 2)(lambda + 1)^2.
        let r = largest_nonneg_root(&[-2.0, -3.0, 0.0, 1.0]).unwrap();
        assert!((r - 2.0).abs() < 1e-9, "r = {r}");
        // Diophantine c-vector gives roughly 9.90.
        let c = [-60.49, -13.03, -41.76, -7.85, -24.45, 2.59];
        let r = largest_nonneg_root(&c).unwrap();
        assert!((r - 9.90).abs() < 0.05, "r = {r}");
        assert_eq!(
            largest_nonneg_root(&[1.0, -1.0]).unwrap_err(),
            BoundsError::NonPositiveLeading(-1.0)
        );
    }

    #[test]
    fn marshall_examples() {
        let f = poly("x1^4 - 3*x1^2 + 2*x1", 1);
        assert_eq!(marshall_radius(&f, 1.0).unwrap(), 5.0);
        let g = poly("x1^4 + 1", 1);
        assert_eq!(marshall_radius(&g, 1.0).unwrap(), 1.0);
        // Same f: root-based radius 2 stays below the comparison radius 5.
        let r = largest_nonneg_root(&[-2.0, -3.0, 0.0, 1.0]).unwrap();
        assert!(r < marshall_radius(&f, 1.0).unwrap());
    }

    #[test]
    fn orthant_example_x4_plus_x3() {
        // tau = +1 drops the x^3 term, tau = -1 keeps it with radius 1.
        let f = poly("x1^4 + x1^3", 1);
        let bounds = orthant_radii(&f, 2, 1.0).unwrap();
        assert_eq!(bounds.len(), 2);
        let plus = bounds.iter().find(|b| b.tau == vec![1]).unwrap();
        let minus = bounds.iter().find(|b| b.tau == vec![-1]).unwrap();
        assert_eq!(plus.radius, 0.0);
        assert!((minus.radius - 1.0).abs() < 1e-9);
    }

    #[test]
    fn orthant_all_nonneg_coefficients() {
        let f = poly("x1^4 + x2^4 + x1*x2 + x1^2*x2", 2);
        let bounds = orthant_radii(&f, 2, 1.0).unwrap();
        let pp = bounds.iter().find(|b| b.tau == vec![1, 1]).unwrap();
        // All mixed coefficients positive: nothing survives the negative
        // part in the positive orthant.
        assert_eq!(pp.radius, 0.0);
    }

    #[test]
    fn pipeline_pure_quadratic() {
        let f = poly("x1^2 + x2^2", 2);
        let rep = compute_norm_bound(&f, 2, 4, &NormBoundOptions::default()).unwrap();
        assert_eq!(rep.definiteness, Definiteness::CertifiedPositive);
        assert_eq!(rep.radius, Some(0.0));
        assert_eq!(rep.box_radius, Some(0));
    }

    #[test]
    fn pipeline_rejects_odd_degree() {
        let f = poly("x1^3", 1);
        assert_eq!(
            compute_norm_bound(&f, 2, 4, &NormBoundOptions::default()).unwrap_err(),
            BoundsError::BadDegree(3)
        );
    }

    #[test]
    fn pipeline_detects_indefinite_leading_form() {
        let f = poly("-x1^4 + x2^4", 2);
        let rep = compute_norm_bound(&f, 2, 6, &NormBoundOptions::default()).unwrap();
        assert_eq!(rep.definiteness, Definiteness::CertifiedNotPsd);
        let w = rep.witness.unwrap();
        let fd = f.leading_form().unwrap();
        assert!(fd.evaluate(&w) < 0.0);
    }

    #[test]
    fn nie_conversion_directions() {
        // p = d: no scaling either way.
        assert_eq!(nie_to_sphere(2.5, 2, 6, 6), 2.5);
        assert_eq!(nie_to_sphere(-2.5, 2, 6, 6), -2.5);
        // d > p, gamma > 0: scale down by n^(1-d/p).
        let v = nie_to_sphere(1.0, 3, 4, 2);
        assert!((v - 1.0 / 3.0).abs() < 1e-12);
        // d > p, gamma < 0: no scaling (the maximum of sum x^d is 1).
        assert_eq!(nie_to_sphere(-1.0, 3, 4, 2), -1.0);
    }
}
