//! Property checks shared by the proptest suites and the acceptance runner.
#![allow(dead_code)]

use cdl_core::bounds::lp_identity_sides;
use cdl_core::construct::{conference_to_design, coxeter_27, cross_polytope, mub_cover, sic_d2, skew_conference_search};
use cdl_core::design::max_design_strength;
use cdl_core::poly::{expand, gegenbauer, jacobi, product_expand, BiDegree, JacobiExpansion};
use cdl_core::space::{random_points, random_unitary, PointSet, DEFAULT_TOL};
use cdl_core::MubFamily;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const CASES: u32 = 256;

pub type Terms = Vec<((u32, u32), i64, i64)>;

pub fn terms_strategy(max_deg: u32, max_terms: usize) -> impl Strategy<Value = Terms> {
    prop::collection::vec(((0..=max_deg, 0..=max_deg), -1000i64..=1000, 1i64..=50), 0..=max_terms)
}

pub fn expansion(d: u32, terms: &Terms) -> JacobiExpansion {
    let mut e = JacobiExpansion::new(d);
    for &((k, l), num, den) in terms {
        e.add(BiDegree::new(k, l), BigRational::new(BigInt::from(num), BigInt::from(den)));
    }
    e
}

/// `expand(synthesize(E)) = E` exactly.
pub fn roundtrip(d: u32, terms: &Terms) -> Result<(), String> {
    let e = expansion(d, terms);
    let back = expand(d, &e.synthesize());
    if back == e {
        Ok(())
    } else {
        Err(format!("round trip changed the expansion in dimension {d}"))
    }
}

/// Nonnegative coefficients, and `(0,0)` present iff `k = l'` and `k' = l`.
pub fn product_rule(d: u32, a: BiDegree, b: BiDegree) -> Result<(), String> {
    let e = product_expand(d, a, b);
    if let Some((deg, c)) = e.iter().find(|(_, c)| c.is_negative()) {
        return Err(format!("g{a} g{b}: coefficient {c} at {deg}"));
    }
    let has00 = !e.get(BiDegree::new(0, 0)).is_zero();
    let want = a.k == b.l && a.l == b.k;
    if has00 != want {
        return Err(format!("g{a} g{b}: (0,0) coefficient present = {has00}"));
    }
    Ok(())
}

/// `Q_{2d,k}(Re z) = Σ_{i=0}^k g_{i,k-i}(z)` at relative tolerance `1e-10`.
pub fn gegenbauer_identity(d: u32, k: u32, r: f64, theta: f64) -> Result<(), String> {
    let z = Complex64::from_polar(r, theta);
    let q = gegenbauer(2 * d, k).eval(z.re);
    let terms: Vec<Complex64> = (0..=k).map(|i| jacobi(d, BiDegree::new(i, k - i)).to_float().eval(z)).collect();
    let sum: Complex64 = terms.iter().sum();
    let scale = terms.iter().map(|t| t.norm()).sum::<f64>().max(q.abs()).max(1.0);
    let err = (sum - q).norm();
    if err <= 1e-10 * scale {
        Ok(())
    } else {
        Err(format!("d={d} k={k} z={z}: error {err:e}"))
    }
}

/// The two evaluations of `Σ_{x,y} F(x^* y)` agree within `1e-6` relative.
pub fn lp_identity(d: usize, n: usize, seed: u64, terms: &Terms) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = PointSet::new(d, random_points(d, n, &mut rng), DEFAULT_TOL).map_err(|e| e.to_string())?;
    let f = expansion(d as u32, terms).synthesize();
    let (lhs, rhs) = lp_identity_sides(&x, &f).map_err(|e| e.to_string())?;
    let scale = lhs.norm().max(rhs.norm()).max(1.0);
    if (lhs - rhs).norm() <= 1e-6 * scale {
        Ok(())
    } else {
        Err(format!("sides differ: {lhs} vs {rhs}"))
    }
}

pub fn gallery_small() -> Vec<PointSet> {
    let conf = skew_conference_search(4).unwrap().unwrap();
    vec![
        coxeter_27().unwrap(),
        sic_d2().unwrap(),
        cross_polytope(3, 4).unwrap(),
        mub_cover(MubFamily::Odd, 1).unwrap(),
        conference_to_design(&conf).unwrap(),
    ]
}

/// `max_design_strength(UX) = max_design_strength(X)`.
pub fn unitary_invariance(x: &PointSet, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = random_unitary(x.dim(), &mut rng);
    let y = x.apply_unitary(&u).map_err(|e| e.to_string())?;
    let a = max_design_strength(x, 6, 1e-7).verdict;
    let b = max_design_strength(&y, 6, 1e-7).verdict;
    if a == b {
        Ok(())
    } else {
        Err(format!("verdict {a} became {b}"))
    }
}
