//! Design tests: vanishing of `Σ_{x,y} g_{k,l}(x^* y)` over bidegrees, the
//! moment form of the same condition, and real designs via the embedding `φ`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::poly::{binomial, gegenbauer, harm_dim, jacobi, BiDegree, LowerSet};
use crate::space::{inner, PointSet};

/// Default residual tolerance.
pub const DEFAULT_DESIGN_TOL: f64 = 1e-7;
/// Default total-degree cutoff for strength searches.
pub const DEFAULT_CUTOFF: u32 = 8;

/// Sums `M_{a,b} = Σ_{x,y} (x^* y)^a conj(x^* y)^b` for `a + b ≤ cutoff`.
#[derive(Clone, Debug)]
pub struct MomentTable {
    pub cutoff: u32,
    pub n: usize,
    pub dim: usize,
    sums: Vec<Complex64>,
}

impl MomentTable {
    pub fn new(x: &PointSet, cutoff: u32) -> Self {
        let c = cutoff as usize;
        let n = x.len();
        let zero = vec![Complex64::new(0.0, 0.0); (c + 1) * (c + 1)];
        let sums = (0..n)
            .into_par_iter()
            .fold(
                || zero.clone(),
                |mut acc, i| {
                    let xi = x.point(i);
                    let mut pz = vec![Complex64::new(1.0, 0.0); c + 1];
                    let mut pc = vec![Complex64::new(1.0, 0.0); c + 1];
                    for j in 0..n {
                        let z = inner(xi, x.point(j));
                        let zc = z.conj();
                        for a in 1..=c {
                            pz[a] = pz[a - 1] * z;
                            pc[a] = pc[a - 1] * zc;
                        }
                        for a in 0..=c {
                            for b in 0..=(c - a) {
                                acc[a * (c + 1) + b] += pz[a] * pc[b];
                            }
                        }
                    }
                    acc
                },
            )
            .reduce(
                || zero.clone(),
                |mut a, b| {
                    for (p, q) in a.iter_mut().zip(b) {
                        *p += q;
                    }
                    a
                },
            );
        MomentTable { cutoff, n, dim: x.dim(), sums }
    }

    pub fn sum(&self, a: u32, b: u32) -> Complex64 {
        self.sums[a as usize * (self.cutoff as usize + 1) + b as usize]
    }

    /// `Σ_{x,y} g_{k,l}(x^* y)`.
    pub fn jacobi_sum(&self, deg: BiDegree) -> Complex64 {
        assert!(deg.total() <= self.cutoff, "bidegree beyond moment table cutoff");
        jacobi(self.dim as u32, deg)
            .terms()
            .map(|((a, b), c)| self.sum(a, b) * c.to_f64().unwrap_or(f64::NAN))
            .sum()
    }

    /// `|Σ g_{k,l}(x^* y)| / (|X| m_{k,l})`.
    pub fn residual(&self, deg: BiDegree) -> f64 {
        let m = harm_dim(self.dim as u32, deg) as f64;
        if m == 0.0 {
            return 0.0;
        }
        self.jacobi_sum(deg).norm() / (self.n as f64 * m)
    }
}

/// Normalised residual `ρ_{k,l}` for a single bidegree.
pub fn design_residual(x: &PointSet, deg: BiDegree) -> f64 {
    MomentTable::new(x, deg.total()).residual(deg)
}

/// Whether every nonzero member of `t` has residual at most `tol`.
pub fn is_design(x: &PointSet, t: &LowerSet, tol: f64) -> bool {
    let cutoff = t.iter().map(|d| d.total()).max().unwrap_or(0);
    let table = MomentTable::new(x, cutoff);
    t.nonzero().all(|d| table.residual(d) <= tol)
}

/// Outcome of a strength search.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DesignReport {
    pub verdict: LowerSet,
    pub residuals: BTreeMap<String, f64>,
    pub cutoff: u32,
    pub tol: f64,
}

impl DesignReport {
    pub fn residual(&self, deg: BiDegree) -> Option<f64> {
        self.residuals.get(&deg.to_string()).copied()
    }
}

/// The largest lower set `T ⊆ {k+l ≤ cutoff}` such that `X` is a `T`-design.
pub fn max_design_strength(x: &PointSet, cutoff: u32, tol: f64) -> DesignReport {
    let table = MomentTable::new(x, cutoff);
    let mut residuals = BTreeMap::new();
    let mut pass = BTreeMap::new();
    for t in 0..=cutoff {
        for k in 0..=t {
            let deg = BiDegree::new(k, t - k);
            let r = if deg == BiDegree::ZERO { 0.0 } else { table.residual(deg) };
            residuals.insert(deg.to_string(), r);
            pass.insert(deg, r <= tol);
        }
    }
    let verdict = strength_from_passes(&pass);
    DesignReport { verdict, residuals, cutoff, tol }
}

/// Members all of whose lower neighbours (and themselves) pass.
pub(crate) fn strength_from_passes(pass: &BTreeMap<BiDegree, bool>) -> LowerSet {
    let mut members = Vec::new();
    let mut degs: Vec<BiDegree> = pass.keys().copied().collect();
    degs.sort_by_key(|d| (d.total(), d.k));
    let mut inside = std::collections::BTreeSet::new();
    for d in degs {
        let below_ok = (d.k == 0 || inside.contains(&BiDegree::new(d.k - 1, d.l)))
            && (d.l == 0 || inside.contains(&BiDegree::new(d.k, d.l - 1)));
        if below_ok && pass[&d] {
            inside.insert(d);
            members.push(d);
        }
    }
    LowerSet::new(members).expect("strength set is lower by construction")
}

/// `(k,l)`-regularity, i.e. vanishing residuals on `(k-i, l-i)` for
/// `0 ≤ i ≤ min(k,l)` other than `(0,0)`, via `(1/|X|^2) Σ (x^*y)^k conj(x^*y)^l = δ_{kl} / C(d+k-1, k)`.
pub fn regularity_check(x: &PointSet, deg: BiDegree, tol: f64) -> bool {
    regularity_gap(x, deg) <= tol
}

/// `|moment - target|` for the regularity condition.
pub fn regularity_gap(x: &PointSet, deg: BiDegree) -> f64 {
    let table = MomentTable::new(x, deg.total());
    let n = x.len() as f64;
    let m = table.sum(deg.k, deg.l) / (n * n);
    let target = if deg.k == deg.l { 1.0 / binomial(x.dim() as i64 + deg.k as i64 - 1, deg.k as i64) as f64 } else { 0.0 };
    (m - Complex64::new(target, 0.0)).norm()
}

/// Whether `P(L)` is a projective `t`-design, i.e. `L` is `(t,t)`-regular.
pub fn projective_design_check(l: &PointSet, t: u32, tol: f64) -> bool {
    regularity_check(l, BiDegree::new(t, t), tol)
}

/// `n` is coprime to every integer in `2..=t`; then the `n`-antipodal cover of a
/// projective `t`-design is a `cl{(t,t)}`-design.
pub fn cover_inherits_projective_strength(t: u32, n: u32) -> bool {
    (2..=t).all(|m| num_integer::gcd(m, n) == 1)
}

/// Normalised residual of `Σ Q_{2d,i}(Re x^* y)` for the real image `φ(X)`.
pub fn real_design_residual(x: &PointSet, i: u32) -> f64 {
    let d2 = 2 * x.dim() as u32;
    let q = gegenbauer(d2, i);
    let q1 = q.eval(1.0);
    let n = x.len();
    let s: f64 = (0..n)
        .into_par_iter()
        .map(|a| (0..n).map(|b| q.eval(x.inner(a, b).re)).sum::<f64>())
        .sum();
    s.abs() / (n as f64 * q1)
}

/// Whether `φ(X)` is a real spherical `t`-design.
pub fn real_design_check(x: &PointSet, t: u32, tol: f64) -> bool {
    (1..=t).all(|i| real_design_residual(x, i) <= tol)
}
