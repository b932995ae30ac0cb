//! Absolute and linear-programming bounds for designs and codes, and the
//! tightness equivalence between them.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::design::{is_design, MomentTable};
use crate::error::{invalid, Error, Result};
use crate::poly::{binomial, convolve, expand, harm_dim, jacobi, rationalize, BiDegree, JacobiExpansion, LowerSet, ZonalPoly};
use crate::space::{angle_set, AngleSet, PointSet};

/// `Σ_{U} dim Harm(k,l)`: lower bound for `U*U`-designs.
pub fn absolute_design_bound(d: u32, u: &LowerSet) -> u64 {
    u.iter().map(|deg| harm_dim(d, deg)).sum()
}

/// `Σ_{S} dim Harm(k,l)`: upper bound for `S`-codes.
pub fn absolute_code_bound(d: u32, s: &LowerSet) -> u64 {
    s.iter().map(|deg| harm_dim(d, deg)).sum()
}

/// Upper bound for a code with `s` distinct inner products: the annihilator
/// `Π (x - α)` lies in `⊕_{k≤s} Hom(k,0)`, of dimension `C(d+s, d)`.
pub fn degree_code_bound(d: u32, s: u32) -> u64 {
    binomial(d as i64 + s as i64, d as i64)
}

/// `S_n = {(k,l) ∈ S : k ≡ l mod n}`.
pub fn congruent_part(s: &LowerSet, n: u32) -> Vec<BiDegree> {
    s.iter().filter(|d| (d.k as i64 - d.l as i64).rem_euclid(n as i64) == 0).collect()
}

/// `n · min(Σ_{S_n} m, Σ_{S∖S_n} m)` for `n`-antipodal codes.
pub fn antipodal_bound(d: u32, s: &LowerSet, n: u32) -> Result<u64> {
    if n < 2 {
        return Err(invalid("antipodal bound needs n >= 2"));
    }
    let sn = congruent_part(s, n);
    let inside: u64 = sn.iter().map(|deg| harm_dim(d, *deg)).sum();
    let outside: u64 = s.iter().filter(|deg| !sn.contains(deg)).map(|deg| harm_dim(d, deg)).sum();
    Ok(n as u64 * inside.min(outside))
}

/// Whether `F(ω^j α) = 0` for all angles and all `n`-th roots `ω^j`.
pub fn antipodal_condition(f: &ZonalPoly, angles: &AngleSet, n: u32, tol: f64) -> bool {
    let scale = f.eval_at_one().to_f64().unwrap_or(1.0).abs().max(1.0);
    angles.values.iter().all(|a| {
        (0..n).all(|j| f.eval(crate::space::root_of_unity(n, j as i64) * a).norm() <= tol * scale)
    })
}

/// Which inequality of the linear-programming bound to apply.
/// The two evaluations of `Σ_{x,y ∈ X} F(x^* y)` that the LP bounds rest on:
/// through the Jacobi expansion, `f_{0,0}|X|² + Σ f_{k,l} Σ_{x,y} g_{k,l}(x^* y)`,
/// and through the angle distribution, `F(1)|X| + Σ_i F(α_i) d_i`.
pub fn lp_identity_sides(x: &PointSet, f: &ZonalPoly) -> Result<(Complex64, Complex64)> {
    let d = x.dim() as u32;
    if d < 2 {
        return Err(invalid("dimension must be at least 2"));
    }
    let e = expand(d, f);
    let cutoff = f.total_degree().unwrap_or(0);
    let table = MomentTable::new(x, cutoff);
    let n = x.len() as f64;
    let by_expansion = e.iter().map(|(deg, c)| table.jacobi_sum(deg) * c.to_f64().unwrap_or(f64::NAN)).sum::<Complex64>();
    let a = angle_set(x)?;
    let ff = f.to_float();
    let by_angles = ff.eval(Complex64::new(1.0, 0.0)) * n
        + a.values.iter().zip(&a.counts).map(|(&v, &k)| ff.eval(v) * k as f64).sum::<Complex64>();
    Ok((by_expansion, by_angles))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum LpMode {
    /// `|X| ≥ F(1)/f_{0,0}` for `T`-designs; needs `f_{k,l} ≤ 0` off `T` and `F(α) ≥ 0`.
    Lower { t: LowerSet },
    /// `|X| ≤ F(1)/f_{0,0}`; needs every `f_{k,l} ≥ 0` and `F(α) ≤ 0`.
    Upper,
}

/// Exact certificate produced by [`lp_bound`].
#[derive(Clone, Debug)]
pub struct Certificate {
    pub value: BigRational,
    pub f_at_one: BigRational,
    pub f00: BigRational,
    pub expansion: JacobiExpansion,
    pub angle_values: Vec<(Complex64, Complex64)>,
    pub violations: Vec<String>,
}

impl Certificate {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn sign_tol(f: &ZonalPoly) -> f64 {
    1e-9 * f.eval_at_one().to_f64().unwrap_or(1.0).abs().max(1.0)
}

/// Evaluates the linear-programming bound `F(1)/f_{0,0}` and checks its side
/// conditions against the supplied angle set.
pub fn lp_bound(d: u32, f: &ZonalPoly, mode: &LpMode, angles: &[Complex64]) -> Result<Certificate> {
    let expansion = expand(d, f);
    let f00 = expansion.f00();
    if !f00.is_positive() {
        return Err(invalid(format!("f_00 = {f00} is not positive")));
    }
    let f_at_one = f.eval_at_one();
    let value = &f_at_one / &f00;
    let tol = sign_tol(f);
    let mut violations = Vec::new();
    let mut angle_values = Vec::new();
    for &a in angles {
        let v = f.eval(a);
        angle_values.push((a, v));
        if v.im.abs() > tol {
            violations.push(format!("F({a}) = {v} is not real"));
        }
        match mode {
            LpMode::Lower { .. } if v.re < -tol => violations.push(format!("F({a}) = {} < 0", v.re)),
            LpMode::Upper if v.re > tol => violations.push(format!("F({a}) = {} > 0", v.re)),
            _ => {}
        }
    }
    for (deg, c) in expansion.iter() {
        match mode {
            LpMode::Lower { t } if !t.contains(deg) && c.is_positive() => {
                violations.push(format!("f_{deg} = {c} > 0 outside the design set"))
            }
            LpMode::Upper if c.is_negative() => violations.push(format!("f_{deg} = {c} < 0")),
            _ => {}
        }
    }
    Ok(Certificate { value, f_at_one, f00, expansion, angle_values, violations })
}

/// `|X| ≤ F(1)/f_{k,l}` for an annihilator whose Jacobi coefficients are all positive.
pub fn coefficient_bound_check(d: u32, f: &ZonalPoly, deg: BiDegree, angles: &[Complex64]) -> Result<BigRational> {
    let e = expand(d, f);
    if let Some((bad, c)) = e.iter().find(|(_, c)| !c.is_positive()) {
        return Err(invalid(format!("coefficient f_{bad} = {c} is not positive")));
    }
    let tol = sign_tol(f);
    if let Some(a) = angles.iter().find(|a| f.eval(**a).norm() > tol) {
        return Err(invalid(format!("F does not vanish at {a}")));
    }
    let c = e.get(deg);
    if c.is_zero() {
        return Err(invalid(format!("{deg} is outside the support of F")));
    }
    Ok(f.eval_at_one() / c)
}

/// An annihilator `F` with `F(α) = 0` on a given angle set.
#[derive(Clone, Debug)]
pub struct Annihilator {
    pub poly: ZonalPoly,
    pub expansion: JacobiExpansion,
    pub max_abs_at_angles: f64,
}

fn float_f00(d: u32, monos: &[(u32, u32)], c: &[f64]) -> f64 {
    monos
        .iter()
        .zip(c)
        .filter(|((a, b), _)| a == b)
        .map(|((a, _), v)| v / binomial(d as i64 + *a as i64 - 1, *a as i64) as f64)
        .sum()
}

fn rational_poly(monos: &[(u32, u32)], c: &[f64]) -> ZonalPoly {
    let scale = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    ZonalPoly::from_terms(
        monos.iter().zip(c).filter(|(_, v)| v.abs() > 1e-12 * scale).map(|(m, v)| (*m, rationalize(*v))),
    )
}

/// Finds a real polynomial vanishing on `angles`.
///
/// With a hint `S`, searches the span of `{x^a x̄^b : (a,b) ∈ S}` through the
/// null space of the evaluation matrix, picking the null vector closest to
/// maximising `F(1)` and scaling to `f_{0,0} = 1` when possible. Without a
/// hint, returns `x x̄ - |α|^2` when all moduli agree and `Π (x - α)` otherwise.
pub fn find_annihilator(d: u32, angles: &[Complex64], hint: Option<&LowerSet>, tol: f64) -> Result<Annihilator> {
    let poly = match hint {
        Some(s) => {
            let monos: Vec<(u32, u32)> = s.iter().map(|deg| (deg.k, deg.l)).collect();
            let cols = monos.len();
            let rows = (2 * angles.len()).max(cols);
            let mut m = DMatrix::<f64>::zeros(rows, cols);
            for (i, a) in angles.iter().enumerate() {
                for (j, (p, q)) in monos.iter().enumerate() {
                    let v = a.powu(*p) * a.conj().powu(*q);
                    m[(2 * i, j)] = v.re;
                    m[(2 * i + 1, j)] = v.im;
                }
            }
            let svd = m.svd(false, true);
            let vt = svd.v_t.ok_or_else(|| Error::Numerical("svd failed".into()))?;
            let smax = svd.singular_values.iter().fold(0.0f64, |a, b| a.max(*b)).max(1.0);
            let null: Vec<usize> = (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] <= 1e-9 * smax).collect();
            if null.is_empty() {
                return Err(Error::Construction(format!("no annihilator supported on {s}")));
            }
            let mut c = vec![0.0; cols];
            for &i in &null {
                let proj: f64 = (0..cols).map(|j| vt[(i, j)]).sum();
                for j in 0..cols {
                    c[j] += proj * vt[(i, j)];
                }
            }
            if c.iter().map(|v| v * v).sum::<f64>() < 1e-18 {
                c = (0..cols).map(|j| vt[(null[0], j)]).collect();
            }
            let f00 = float_f00(d, &monos, &c);
            let scale = if f00.abs() > 1e-9 { 1.0 / f00 } else { 1.0 / c.iter().fold(0.0f64, |m, v| m.max(v.abs())) };
            let c: Vec<f64> = c.iter().map(|v| v * scale).collect();
            rational_poly(&monos, &c)
        }
        None => {
            let mods: Vec<f64> = angles.iter().map(|a| a.norm()).collect();
            let same = mods.windows(2).all(|w| (w[0] - w[1]).abs() <= tol);
            if same && !mods.is_empty() {
                let r2 = rationalize(mods[0] * mods[0]);
                &ZonalPoly::monomial(1, 1, BigRational::one()) - &ZonalPoly::constant(r2)
            } else {
                let mut coeffs = vec![Complex64::new(1.0, 0.0)];
                for a in angles {
                    let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
                    for (i, c) in coeffs.iter().enumerate() {
                        next[i + 1] += c;
                        next[i] -= c * a;
                    }
                    coeffs = next;
                }
                if coeffs.iter().any(|c| c.im.abs() > 1e-9 * c.norm().max(1.0)) {
                    return Err(invalid("angle set is not closed under conjugation"));
                }
                let monos: Vec<(u32, u32)> = (0..coeffs.len() as u32).map(|a| (a, 0)).collect();
                rational_poly(&monos, &coeffs.iter().map(|c| c.re).collect::<Vec<_>>())
            }
        }
    };
    let scale = poly.terms().map(|(_, c)| c.abs().to_f64().unwrap_or(0.0)).fold(1.0f64, f64::max);
    let max_abs = angles.iter().map(|a| poly.eval(*a).norm()).fold(0.0, f64::max);
    if max_abs > tol * scale {
        return Err(Error::Construction(format!("best candidate leaves |F(α)| = {max_abs:e}")));
    }
    let expansion = expand(d, &poly);
    Ok(Annihilator { poly, expansion, max_abs_at_angles: max_abs })
}

/// The components of the tightness equivalence for an `S`-code.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TightnessReport {
    pub size: usize,
    pub absolute_bound: u64,
    pub size_equals_bound: bool,
    /// `Σ_{S} g_{k,l}` vanishes on `A(X)`.
    pub sum_annihilates: bool,
    /// `X` has some annihilator supported on `S`.
    pub is_code: bool,
    /// `X` is a `S*S`-design.
    pub design_holds: bool,
    pub code_and_design: bool,
    pub tight_code: bool,
    pub tight_design: bool,
}

impl TightnessReport {
    /// The three characterisations agree.
    pub fn consistent(&self) -> bool {
        self.code_and_design == self.tight_code && self.tight_code == self.tight_design
    }
}

/// Evaluates every ingredient of the tightness equivalence for `X` and `S`.
pub fn tightness_check(x: &PointSet, s: &LowerSet, tol: f64) -> Result<TightnessReport> {
    let d = x.dim() as u32;
    let angles = angle_set(x)?;
    let bound = absolute_code_bound(d, s);
    let sum: ZonalPoly = s.iter().fold(ZonalPoly::zero(), |acc, deg| &acc + &jacobi(d, deg));
    let scale = sum.eval_at_one().to_f64().unwrap_or(1.0).max(1.0);
    let sum_annihilates = angles.values.iter().all(|a| sum.eval(*a).norm() <= 1e-9 * scale);
    let is_code = sum_annihilates || find_annihilator(d, &angles.values, Some(s), 1e-9).is_ok();
    let ss = LowerSet::closure(convolve(s.members(), s.members()));
    let design_holds = is_design(x, &ss, tol);
    let size_equals_bound = x.len() as u64 == bound;
    Ok(TightnessReport {
        size: x.len(),
        absolute_bound: bound,
        size_equals_bound,
        sum_annihilates,
        is_code,
        design_holds,
        code_and_design: is_code && design_holds,
        tight_code: is_code && size_equals_bound,
        tight_design: design_holds && size_equals_bound,
    })
}

/// Built-in annihilators for the bound examples.
pub mod builtin {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn x() -> ZonalPoly {
        ZonalPoly::x()
    }

    fn xb() -> ZonalPoly {
        ZonalPoly::xbar()
    }

    /// `d((d+1) x x̄ - 1)(x² + x̄² + 2x + 2x̄ + 2)/2`, for angle sets
    /// `{±1/√(d+1), ±i/√(d+1), ±i, -1}`.
    pub fn sic(d: u32) -> ZonalPoly {
        let d = d as i64;
        let a = &(&x() * &xb()).scale(&q(d + 1)) - &ZonalPoly::constant(q(1));
        let b = &(&(&(&x() * &x()) + &(&xb() * &xb())) + &(&x() + &xb()).scale(&q(2))) + &ZonalPoly::constant(q(2));
        (&a * &b).scale(&BigRational::new(BigInt::from(d), BigInt::from(2)))
    }

    /// `d(x⁴+x̄⁴) + 2d(x³+x̄³) + (d+1)(x²+x̄²) + 2(x x̄ + x + x̄)`, for angle
    /// sets `{(±1±i)/√(2d), 0, ±i, -1}`.
    pub fn kerdock(d: u32) -> ZonalPoly {
        let d = d as i64;
        let p = |a: u32| &ZonalPoly::monomial(a, 0, q(1)) + &ZonalPoly::monomial(0, a, q(1));
        let terms = [
            p(4).scale(&q(d)),
            p(3).scale(&q(2 * d)),
            p(2).scale(&q(d + 1)),
            (&(&x() * &xb()) + &p(1)).scale(&q(2)),
        ];
        terms.iter().fold(ZonalPoly::zero(), |acc, t| &acc + t)
    }

    /// `d(d+1)(d x x̄ - 1)(x + x̄)(x + x̄ + 2)`, for angle sets
    /// `{±1/√d, ±i/√d, 0, ±i, -1}`.
    pub fn kerdock_even(d: u32) -> ZonalPoly {
        let d = d as i64;
        let a = &(&x() * &xb()).scale(&q(d)) - &ZonalPoly::constant(q(1));
        let s = &x() + &xb();
        let b = &s + &ZonalPoly::constant(q(2));
        (&(&a * &s) * &b).scale(&q(d * (d + 1)))
    }

    /// `1 + d(x + x̄)`, annihilating the real part `-1/(2d)` of the regular simplex.
    pub fn simplex(d: u32) -> ZonalPoly {
        &ZonalPoly::one() + &(&x() + &xb()).scale(&q(d as i64))
    }
}

/// Jacobi coefficients keyed by bidegree string, for reports.
pub fn expansion_table(e: &JacobiExpansion) -> BTreeMap<String, String> {
    e.iter().map(|(deg, c)| (deg.to_string(), c.to_string())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{c64, DEFAULT_TOL};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn sic_angles(d: u32) -> Vec<Complex64> {
        let r = 1.0 / ((d + 1) as f64).sqrt();
        vec![c64(r, 0.0), c64(-r, 0.0), c64(0.0, r), c64(0.0, -r), c64(0.0, 1.0), c64(0.0, -1.0), c64(-1.0, 0.0)]
    }

    fn kerdock_angles(d: u32) -> Vec<Complex64> {
        let r = 1.0 / (2.0 * d as f64).sqrt();
        let mut v = vec![c64(0.0, 0.0), c64(0.0, 1.0), c64(0.0, -1.0), c64(-1.0, 0.0)];
        for s1 in [1.0, -1.0] {
            for s2 in [1.0, -1.0] {
                v.push(c64(s1 * r, s2 * r));
            }
        }
        v
    }

    #[test]
    fn sic_certificate_is_four_d_squared() {
        for d in 2..10u32 {
            let f = builtin::sic(d);
            let cert = lp_bound(d, &f, &LpMode::Upper, &sic_angles(d)).unwrap();
            assert!(cert.is_valid(), "{:?}", cert.violations);
            assert_eq!(cert.f00, q(1, 1));
            assert_eq!(cert.f_at_one, q(4 * (d * d) as i64, 1));
            assert_eq!(cert.value, q(4 * (d * d) as i64, 1));
        }
    }

    #[test]
    fn kerdock_certificate_is_four_d_d_plus_one() {
        for d in [2u32, 4, 8, 16] {
            let cert = lp_bound(d, &builtin::kerdock(d), &LpMode::Upper, &kerdock_angles(d)).unwrap();
            assert!(cert.is_valid(), "{:?}", cert.violations);
            assert_eq!(cert.value, q(4 * (d * (d + 1)) as i64, 1));
        }
    }

    #[test]
    fn kerdock_expansion_in_normalised_basis() {
        // In the basis g_{k,l}/g_{k,l}(1): row (1, d, d(d+1)/2, d², d²/2) along (k,0), and d-1 at (1,1).
        for d in [2i64, 4, 8] {
            let du = d as u32;
            let e = expand(du, &builtin::kerdock(du));
            let f00 = e.f00();
            let m = |k: u32, l: u32| BigRational::from_integer(BigInt::from(harm_dim(du, BiDegree::new(k, l))));
            let table = [
                ((1, 0), q(d, 1)),
                ((2, 0), q(d * (d + 1), 2)),
                ((3, 0), q(d * d, 1)),
                ((4, 0), q(d * d, 2)),
                ((1, 1), q(d - 1, 1)),
            ];
            for ((k, l), v) in table {
                assert_eq!(e.get(BiDegree::new(k, l)) * m(k, l) / &f00, v.clone(), "d={d} ({k},{l})");
                assert_eq!(e.get(BiDegree::new(l, k)) * m(l, k) / &f00, v, "d={d} ({l},{k})");
            }
            assert_eq!(e.support().len(), 10);
        }
    }

    #[test]
    fn kerdock_even_certificate() {
        for d in [4u32, 16] {
            let r = 1.0 / (d as f64).sqrt();
            let angles = vec![
                c64(r, 0.0),
                c64(-r, 0.0),
                c64(0.0, r),
                c64(0.0, -r),
                c64(0.0, 0.0),
                c64(0.0, 1.0),
                c64(0.0, -1.0),
                c64(-1.0, 0.0),
            ];
            let cert = lp_bound(d, &builtin::kerdock_even(d), &LpMode::Upper, &angles).unwrap();
            assert!(cert.is_valid(), "{:?}", cert.violations);
            assert_eq!(cert.value, q(4 * (d * (d + 1)) as i64, 1));
        }
    }

    #[test]
    fn printed_second_kerdock_form_fails_at_minus_one() {
        let d = 4i64;
        let xb = ZonalPoly::xbar();
        let x = ZonalPoly::x();
        let a = &(&x * &xb).scale(&q(d, 1)) - &ZonalPoly::one();
        let s = &x + &xb;
        let f = (&(&a * &s) * &(&s + &ZonalPoly::one())).scale(&q(d * (d + 1), 1));
        assert!(f.eval(c64(-1.0, 0.0)).re > 0.0);
    }

    #[test]
    fn absolute_bounds_small_cases() {
        assert_eq!(absolute_design_bound(3, &LowerSet::total_degree(2)), 27);
        assert_eq!(absolute_design_bound(2, &LowerSet::closure([BiDegree::new(1, 1)])), 8);
                assert_eq!(absolute_code_bound(3, &LowerSet::closure([BiDegree::new(5, 0)])), 56);
        assert_eq!(degree_code_bound(3, 5), 56);
        // cross polytope in C^2: degree 2, four points
        assert!(degree_code_bound(2, 2) >= 4);
    }

    #[test]
    fn antipodal_bound_takes_the_smaller_part() {
        // S = cl{(1,1),(2,0)}, n = 2: S_2 = {(0,0),(1,1),(2,0)}, rest = {(1,0),(0,1)}.
        for d in 2..6u32 {
            let s = LowerSet::closure([BiDegree::new(1, 1), BiDegree::new(2, 0)]);
            assert_eq!(antipodal_bound(d, &s, 2).unwrap(), 4 * d as u64);
        }
        assert!(antipodal_bound(3, &LowerSet::total_degree(1), 1).is_err());
    }

    #[test]
    fn lower_mode_flags_positive_coefficients_off_t() {
        let d = 2;
        let f = builtin::simplex(d);
        let t = LowerSet::closure([BiDegree::ZERO]);
        let cert = lp_bound(d, &f, &LpMode::Lower { t }, &[c64(-0.25, 0.0)]).unwrap();
        assert!(!cert.is_valid());
        let t = LowerSet::total_degree(1);
        let cert = lp_bound(d, &f, &LpMode::Lower { t }, &[c64(-0.25, 0.3)]).unwrap();
        assert!(cert.is_valid());
        assert_eq!(cert.value, q(1 + 2 * d as i64, 1));
    }

    #[test]
    fn zero_f00_is_rejected() {
        assert!(lp_bound(3, &ZonalPoly::x(), &LpMode::Upper, &[]).is_err());
    }

    #[test]
    fn annihilator_defaults() {
        let a = find_annihilator(3, &[c64(-1.0, 0.0), c64(0.0, 0.0)], None, 1e-9).unwrap();
        assert_eq!(a.poly, ZonalPoly::from_terms([((2, 0), q(1, 1)), ((1, 0), q(1, 1))]));
        let r = 1.0 / 3f64.sqrt();
        let a = find_annihilator(2, &[c64(r, 0.0), c64(0.0, r), c64(-r, 0.0)], None, 1e-9).unwrap();
        assert_eq!(a.poly, ZonalPoly::from_terms([((1, 1), q(1, 1)), ((0, 0), q(-1, 3))]));
    }

    #[test]
    fn hinted_annihilator_recovers_tight_sum() {
        // A(X) of the simplex in d = 1 ... use the cross polytope instead:
        // angles {-1, 0} admit Σ_{cl{(1,0)}} g = 1 + d x only up to scale; search must fail
        // on cl{(1,0)} and succeed on cl{(2,0)}.
        let d = 3;
        let angles = [c64(-1.0, 0.0), c64(0.0, 0.0)];
        assert!(find_annihilator(d, &angles, Some(&LowerSet::closure([BiDegree::new(1, 0)])), 1e-9).is_err());
        let a = find_annihilator(d, &angles, Some(&LowerSet::closure([BiDegree::new(2, 0)])), 1e-9).unwrap();
        assert!(a.max_abs_at_angles < 1e-12);
        let _ = DEFAULT_TOL;
    }

    #[test]
    fn coefficient_bound_requires_positive_coefficients() {
        let d = 3;
        let f = builtin::kerdock(d);
        assert!(coefficient_bound_check(d, &f, BiDegree::ZERO, &kerdock_angles(d)).is_ok());
        let bad = &f - &ZonalPoly::constant(q(100, 1));
        assert!(coefficient_bound_check(d, &bad, BiDegree::ZERO, &[]).is_err());
    }
}
