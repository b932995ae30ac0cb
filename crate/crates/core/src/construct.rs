//! Deterministic generators for the example point sets, and the small
//! finite-field and Galois-ring arithmetic they need.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grouprep::{hoggar_group, orbit, sic_d2_group};
use crate::scheme::{check_scheme, embed_scheme, RelationPartition};
use crate::space::{antipodal_cover, c64, inner, psd_factor, root_of_unity, PointSet, DEFAULT_TOL};

fn cx(re: f64) -> Complex64 {
    c64(re, 0.0)
}

fn expect_size(x: &PointSet, n: usize, what: &str) -> Result<()> {
    if x.len() != n {
        return Err(Error::Construction(format!("{what}: produced {} points, expected {n}", x.len())));
    }
    Ok(())
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|p| p * p <= n).all(|p| n % p != 0)
}

/// Arithmetic in `GF(p)` for a prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(invalid(format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn order(self) -> u64 {
        self.p
    }

    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    /// Legendre symbol `(a/p)` in `{-1, 0, 1}` for odd `p`.
    pub fn legendre(self, a: u64) -> i32 {
        let a = a % self.p;
        if a == 0 {
            return 0;
        }
        if self.pow(a, (self.p - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }
}

// ---------------------------------------------------------------------------
// Cross polytope, simplex, SIC covers

/// `n`-antipodal cover of the standard basis of `ℂ^d`.
pub fn cross_polytope(d: usize, n: u32) -> Result<PointSet> {
    if d == 0 {
        return Err(invalid("dimension must be positive"));
    }
    let basis = (0..d).map(|i| (0..d).map(|j| cx(if i == j { 1.0 } else { 0.0 })).collect()).collect();
    antipodal_cover(&PointSet::new(d, basis, DEFAULT_TOL)?, n)
}

/// `2d + 1` points whose real images form a regular simplex in `ℝ^{2d}`,
/// so `Re(x^* y) = -1/(2d)` for `x ≠ y`.
pub fn regular_simplex_cover(d: usize) -> Result<PointSet> {
    if d == 0 {
        return Err(invalid("dimension must be positive"));
    }
    let m = 2 * d + 1;
    // Helmert basis of the sum-zero hyperplane of ℝ^m.
    let helmert = |k: usize, i: usize| -> f64 {
        let s = ((k * (k + 1)) as f64).sqrt();
        if i < k {
            1.0 / s
        } else if i == k {
            -(k as f64) / s
        } else {
            0.0
        }
    };
    let pts = (0..m)
        .map(|i| {
            let y: Vec<f64> = (1..m).map(|k| helmert(k, i)).collect();
            y.chunks(2).map(|p| c64(p[0], p[1])).collect()
        })
        .collect();
    PointSet::normalized(d, pts, DEFAULT_TOL)
}

/// The 16-point 4-antipodal SIC cover in `Ω(2)`: the orbit of
/// `v = (1, -(1+√3)(1+i)/2)` under `⟨P_x, P_z, iI⟩`.
pub fn sic_d2() -> Result<PointSet> {
    let s = -(1.0 + 3f64.sqrt()) / 2.0;
    let v = [cx(1.0), c64(s, s)];
    let x = orbit_of(&sic_d2_group(), &v)?;
    expect_size(&x, 16, "SIC cover in dimension 2")?;
    Ok(x)
}

/// The 256-point 4-antipodal Hoggar SIC cover in `Ω(8)`.
pub fn hoggar() -> Result<PointSet> {
    let h = |re: f64, im: f64| c64(re, im);
    let v = [h(0.0, 0.0), h(0.0, 0.0), h(1.0, 1.0), h(1.0, -1.0), h(1.0, 1.0), h(-1.0, -1.0), h(0.0, 0.0), h(2.0, 0.0)];
    let x = orbit_of(&hoggar_group(), &v)?;
    expect_size(&x, 256, "Hoggar cover")?;
    Ok(x)
}

fn orbit_of(g: &crate::grouprep::FiniteUnitaryGroup, v: &[Complex64]) -> Result<PointSet> {
    let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let v: Vec<Complex64> = v.iter().map(|c| c / n).collect();
    orbit(g, &v, DEFAULT_TOL)
}

// ---------------------------------------------------------------------------
// Coxeter's configurations

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Every coordinate permutation of every seed, deduplicated.
fn permuted(seeds: &[Vec<Complex64>], dim: usize) -> Result<PointSet> {
    let perms = all_permutations(dim);
    let mut pts = Vec::new();
    for s in seeds {
        for p in &perms {
            pts.push(p.iter().map(|&i| s[i]).collect::<Vec<_>>());
        }
    }
    PointSet::dedup_normalized(dim, pts, DEFAULT_TOL)
}

/// 27 points in `Ω(3)`: `(0, ω^μ, -ω^ν)/√2` and its two cyclic shifts, `ω = e^{2πi/3}`.
pub fn coxeter_27() -> Result<PointSet> {
    let mut pts = Vec::new();
    for shift in 0..3 {
        for mu in 0..3 {
            for nu in 0..3 {
                let base = [cx(0.0), root_of_unity(3, mu), -root_of_unity(3, nu)];
                pts.push((0..3).map(|i| base[(i + 3 - shift) % 3] * FRAC_1_SQRT_2).collect());
            }
        }
    }
    let x = PointSet::new(3, pts, DEFAULT_TOL)?;
    expect_size(&x, 27, "Coxeter 27")?;
    Ok(x)
}

/// `λ = (-1 - √7 i)/2`.
fn klein_lambda() -> Complex64 {
    c64(-0.5, -7f64.sqrt() / 2.0)
}

/// 42 points in `Ω(3)`: signed coordinate permutations of six seed vectors in `λ`.
pub fn coxeter_42() -> Result<PointSet> {
    let l = klein_lambda();
    let two = cx(2.0);
    let zero = cx(0.0);
    let mut seeds = Vec::new();
    for sign in [1.0, -1.0] {
        let r = 1.0 / (2.0 * SQRT_2);
        for v in [
            [l * l, l * l, zero],
            [l + two, -(l + two), zero],
            [l * 2.0, zero, zero],
            [l, l, two],
            [l, -l, two],
            [-l, -l, two],
        ] {
            seeds.push(v.iter().map(|c| c * sign * r).collect());
        }
    }
    let x = permuted(&seeds, 3)?;
    expect_size(&x, 42, "Coxeter 42")?;
    Ok(x)
}

/// 56 points in `Ω(3)` with independent coordinate signs.
pub fn coxeter_56() -> Result<PointSet> {
    let l = klein_lambda();
    let lb = l.conj();
    let one = cx(1.0);
    let zero = cx(0.0);
    let mut seeds = Vec::new();
    for signs in 0..8u32 {
        let s = |k: u32| if signs >> k & 1 == 1 { -1.0 } else { 1.0 };
        for v in [[l, l, l], [l * l, one, one], [lb * lb, lb, zero]] {
            seeds.push((0..3).map(|i| v[i] * s(i as u32) / 6f64.sqrt()).collect());
        }
    }
    let x = permuted(&seeds, 3)?;
    expect_size(&x, 56, "Coxeter 56")?;
    Ok(x)
}

/// 240 points in `Ω(4)`: a 6-antipodal cover of the 40 Witting lines.
///
/// With `ω = e^{2πi/3}` and an overall sign, the vectors are
/// `(0, ω^λ, -ω^μ, ω^ν)`, `(-ω^λ, 0, ω^μ, ω^ν)`, `(ω^λ, -ω^μ, 0, ω^ν)`,
/// `(-ω^λ, -ω^μ, -ω^ν, 0)` scaled by `1/√3`, and `±i ω^λ e_j`.
pub fn coxeter_240() -> Result<PointSet> {
    let patterns: [[i8; 4]; 4] = [[0, 1, -1, 1], [-1, 0, 1, 1], [1, -1, 0, 1], [-1, -1, -1, 0]];
    let r = 1.0 / 3f64.sqrt();
    let mut pts = Vec::new();
    for sign in [1.0, -1.0] {
        for pat in &patterns {
            for a in 0..3 {
                for b in 0..3 {
                    for c in 0..3 {
                        let exps = [a, b, c];
                        let mut k = 0;
                        let v = pat
                            .iter()
                            .map(|&s| {
                                if s == 0 {
                                    cx(0.0)
                                } else {
                                    let w = root_of_unity(3, exps[k]);
                                    k += 1;
                                    w * (s as f64 * sign * r)
                                }
                            })
                            .collect();
                        pts.push(v);
                    }
                }
            }
        }
        for j in 0..4 {
            for a in 0..3 {
                pts.push((0..4).map(|i| if i == j { c64(0.0, sign) * root_of_unity(3, a) } else { cx(0.0) }).collect());
            }
        }
    }
    let x = PointSet::new(4, pts, DEFAULT_TOL)?;
    expect_size(&x, 240, "Coxeter 240")?;
    Ok(x)
}

/// 756 points in `Ω(6)`: the 252 vectors `((-1)^{k_1}, (-1)^{k_2}, 0, 0, 0, 0)/√2` and
/// `((-1)^{k_1} √3 i, (-1)^{k_2}, …, (-1)^{k_6})/√8` (even sign parity), in all
/// coordinate positions, multiplied by the cube roots of unity.
pub fn coxeter_756() -> Result<PointSet> {
    let mut base: Vec<Vec<Complex64>> = Vec::new();
    for i in 0..6 {
        for j in i + 1..6 {
            for signs in 0..4u32 {
                let mut v = vec![cx(0.0); 6];
                v[i] = cx(if signs & 1 == 1 { -1.0 } else { 1.0 } * FRAC_1_SQRT_2);
                v[j] = cx(if signs & 2 == 2 { -1.0 } else { 1.0 } * FRAC_1_SQRT_2);
                base.push(v);
            }
        }
    }
    let r = 1.0 / 8f64.sqrt();
    for pos in 0..6 {
        for signs in 0..64u32 {
            if signs.count_ones() % 2 == 1 {
                continue;
            }
            let v = (0..6)
                .map(|k| {
                    let s = if signs >> k & 1 == 1 { -1.0 } else { 1.0 };
                    if k == pos {
                        c64(0.0, s * 3f64.sqrt() * r)
                    } else {
                        cx(s * r)
                    }
                })
                .collect();
            base.push(v);
        }
    }
    let pts = base.iter().flat_map(|v| (0..3).map(move |a| v.iter().map(|c| c * root_of_unity(3, a)).collect())).collect();
    let x = PointSet::dedup_normalized(6, pts, DEFAULT_TOL)?;
    expect_size(&x, 756, "Coxeter 756")?;
    Ok(x)
}

// ---------------------------------------------------------------------------
// Galois rings and Kerdock sets

/// `GR(4^r) = ℤ_4[x]/(h)` with `h` the Hensel lift of a primitive binary polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisRing {
    r: usize,
    /// Coefficients of the monic `h`, lowest degree first, length `r + 1`.
    h: Vec<u8>,
}

/// An element `Σ a_i ξ^i` of a Galois ring, `a_i ∈ ℤ_4`.
pub type GrElement = Vec<u8>;

const PRIMITIVE_BINARY: [&[u8]; 8] = [
    &[1, 1],
    &[1, 1, 1],
    &[1, 1, 0, 1],
    &[1, 1, 0, 0, 1],
    &[1, 0, 1, 0, 0, 1],
    &[1, 1, 0, 0, 0, 0, 1],
    &[1, 1, 0, 0, 0, 0, 0, 1],
    &[1, 0, 1, 1, 1, 0, 0, 0, 1],
];

impl GaloisRing {
    /// Supports `1 ≤ r ≤ 8`.
    pub fn new(r: usize) -> Result<Self> {
        if r == 0 || r > PRIMITIVE_BINARY.len() {
            return Err(invalid(format!("Galois ring degree {r} outside 1..=8")));
        }
        Ok(GaloisRing { r, h: hensel_lift(PRIMITIVE_BINARY[r - 1]) })
    }

    pub fn degree(&self) -> usize {
        self.r
    }

    pub fn modulus(&self) -> &[u8] {
        &self.h
    }

    pub fn zero(&self) -> GrElement {
        vec![0; self.r]
    }

    pub fn one(&self) -> GrElement {
        let mut e = self.zero();
        e[0] = 1;
        e
    }

    /// The class of `x`, a root of `h` of multiplicative order `2^r - 1`.
    pub fn xi(&self) -> GrElement {
        let mut e = self.zero();
        if self.r == 1 {
            // h = x - 1, so ξ = 1.
            e[0] = (4 - self.h[0]) % 4;
        } else {
            e[1] = 1;
        }
        e
    }

    pub fn add(&self, a: &[u8], b: &[u8]) -> GrElement {
        a.iter().zip(b).map(|(x, y)| (x + y) % 4).collect()
    }

    pub fn mul(&self, a: &[u8], b: &[u8]) -> GrElement {
        let r = self.r;
        let mut prod = vec![0u32; 2 * r - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] += x as u32 * y as u32;
            }
        }
        for deg in (r..prod.len()).rev() {
            let c = prod[deg] % 4;
            if c != 0 {
                for k in 0..r {
                    prod[deg - r + k] += (4 - c) * self.h[k] as u32;
                }
            }
            prod[deg] = 0;
        }
        prod[..r].iter().map(|&c| (c % 4) as u8).collect()
    }

    /// Trace of multiplication by `a` on the free `ℤ_4`-module with basis `ξ^i`.
    pub fn trace(&self, a: &[u8]) -> u8 {
        let mut basis = self.one();
        let mut t = 0u32;
        let x = if self.r == 1 { self.one() } else { self.xi() };
        for i in 0..self.r {
            t += self.mul(a, &basis)[i] as u32;
            basis = self.mul(&basis, &x);
        }
        (t % 4) as u8
    }

    /// `{0} ∪ {ξ^j : 0 ≤ j < 2^r - 1}`.
    pub fn teichmuller(&self) -> Result<Vec<GrElement>> {
        let n = (1usize << self.r) - 1;
        let mut out = vec![self.zero()];
        let xi = self.xi();
        let mut p = self.one();
        for _ in 0..n {
            out.push(p.clone());
            p = self.mul(&p, &xi);
        }
        if p != self.one() {
            return Err(Error::Construction("ξ does not have order 2^r - 1".into()));
        }
        Ok(out)
    }

    /// All `4^r` elements in lexicographic coefficient order.
    pub fn elements(&self) -> Vec<GrElement> {
        (0..1usize << (2 * self.r)).map(|n| (0..self.r).map(|i| ((n >> (2 * i)) & 3) as u8).collect()).collect()
    }
}

/// `h(x^2) = ±f(x) f(-x) mod 4` for a binary `f`, lowest degree first.
fn hensel_lift(f: &[u8]) -> Vec<u8> {
    let r = f.len() - 1;
    let fneg: Vec<i64> = f.iter().enumerate().map(|(i, &c)| if i % 2 == 1 { -(c as i64) } else { c as i64 }).collect();
    let mut prod = vec![0i64; 2 * r + 1];
    for (i, &a) in f.iter().enumerate() {
        for (j, &b) in fneg.iter().enumerate() {
            prod[i + j] += a as i64 * b;
        }
    }
    let sign = if r % 2 == 1 { -1 } else { 1 };
    (0..=r).map(|k| (sign * prod[2 * k]).rem_euclid(4) as u8).collect()
}

/// Codewords `(Tr(λτ) + ε)_{τ ∈ T}` of the `ℤ_4` Kerdock code of length `2^r`.
pub fn kerdock_codewords(gr: &GaloisRing) -> Result<Vec<Vec<u8>>> {
    let teich = gr.teichmuller()?;
    let mut words = Vec::with_capacity(4 << (2 * gr.degree()));
    for lam in gr.elements() {
        let base: Vec<u8> = teich.iter().map(|t| gr.trace(&gr.mul(&lam, t))).collect();
        for eps in 0..4u8 {
            words.push(base.iter().map(|&c| (c + eps) % 4).collect());
        }
    }
    Ok(words)
}

/// `(n_0, n_1, n_2, n_3)`: how many entries equal each residue.
pub fn z4_weights(word: &[u8]) -> [usize; 4] {
    let mut n = [0; 4];
    for &c in word {
        n[c as usize] += 1;
    }
    n
}

/// Weight classes allowed for odd `r`, up to the rotations `c ↦ c + 1`, in
/// units doubled so that `r = 1` stays integral.
fn odd_weight_ok(r: usize, n: [usize; 4]) -> bool {
    let d = 1i64 << r;
    let n2: Vec<i64> = n.iter().map(|&v| 2 * v as i64).collect();
    let rot = |w: [i64; 4]| (0..4).any(|s| (0..4).all(|j| n2[(j + s) % 4] == w[j]));
    let q = d / 2; // 2 · 2^{r-2}
    let e = 1i64 << ((r + 1) / 2); // 2 · 2^{(r-3)/2}, as 2^{(r-1)/2}
    let e = e / 2;
    if rot([2 * d, 0, 0, 0]) || rot([d, 0, d, 0]) {
        return true;
    }
    [(1, 1), (1, -1), (-1, 1), (-1, -1)].iter().any(|&(a, b)| rot([q + a * e, q + b * e, q - a * e, q - b * e]))
}

/// The Kerdock code set in `Ω(2^r)` of size `4d(d+1)`: normalised codeword
/// vectors `i^c / √d` plus `((±1±i)/√2) e_j` for odd `r`, `i^k e_j` for even `r`.
pub fn kerdock_code_set(r: usize) -> Result<PointSet> {
    let gr = GaloisRing::new(r)?;
    let d = 1usize << r;
    let words = kerdock_codewords(&gr)?;
    for w in &words {
        let n = z4_weights(w);
        let ok = if r % 2 == 1 {
            odd_weight_ok(r, n)
        } else {
            let re = n[0] as f64 - n[2] as f64;
            let im = n[1] as f64 - n[3] as f64;
            let m2 = re * re + im * im;
            (m2 - (d * d) as f64).abs() < 0.5 || m2 < 0.5 || ((m2 - d as f64).abs() < 0.5 && (re == 0.0 || im == 0.0))
        };
        if !ok {
            return Err(Error::Construction(format!("codeword with weights {n:?} is outside the Kerdock classes")));
        }
    }
    let s = 1.0 / (d as f64).sqrt();
    let ipow = [c64(1.0, 0.0), c64(0.0, 1.0), c64(-1.0, 0.0), c64(0.0, -1.0)];
    let mut pts: Vec<Vec<Complex64>> = words.iter().map(|w| w.iter().map(|&c| ipow[c as usize] * s).collect()).collect();
    let phases: Vec<Complex64> = if r % 2 == 1 {
        [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)].iter().map(|&(a, b)| c64(a, b) * FRAC_1_SQRT_2).collect()
    } else {
        ipow.to_vec()
    };
    for j in 0..d {
        for &ph in &phases {
            pts.push((0..d).map(|i| if i == j { ph } else { cx(0.0) }).collect());
        }
    }
    let x = PointSet::new(d, pts, DEFAULT_TOL)?;
    expect_size(&x, 4 * d * (d + 1), "Kerdock code set")?;
    Ok(x)
}

/// Parity class of the MUB families in `ℂ^{2^m}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MubFamily {
    Even,
    Odd,
}

/// 4-antipodal cover of `d + 1` mutually unbiased bases of `ℂ^d`, `d = 2^m`,
/// taken from the Kerdock code set; `m` must have the family's parity.
pub fn mub_cover(family: MubFamily, m: usize) -> Result<PointSet> {
    let odd = m % 2 == 1;
    if odd != (family == MubFamily::Odd) {
        return Err(invalid(format!("m = {m} does not belong to the {family:?} family")));
    }
    let x = kerdock_code_set(m)?;
    check_unbiased(&x, 4)?;
    Ok(x)
}

/// Splits the fibre representatives of an `n`-antipodal set into orthonormal
/// bases and checks `|x^* y| ∈ {0, 1/√d}` across distinct fibres.
pub fn check_unbiased(x: &PointSet, n: u32) -> Result<Vec<Vec<usize>>> {
    let reps = crate::space::fiber_representatives(x, n)?;
    let d = x.dim();
    let t = 1.0 / (d as f64).sqrt();
    let tol = 1e-9;
    let mut basis_of = vec![usize::MAX; reps.len()];
    let mut bases: Vec<Vec<usize>> = Vec::new();
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            let a = reps.inner(i, j).norm();
            if a > tol && (a - t).abs() > tol {
                return Err(Error::Construction(format!("|x^*y| = {a} between fibres {i} and {j}")));
            }
        }
        if basis_of[i] == usize::MAX {
            let b: Vec<usize> = std::iter::once(i).chain((i + 1..reps.len()).filter(|&j| reps.inner(i, j).norm() <= tol)).collect();
            for &k in &b {
                basis_of[k] = bases.len();
            }
            bases.push(b);
        }
    }
    for b in &bases {
        if b.len() != d || b.iter().any(|&i| b.iter().any(|&j| i != j && reps.inner(i, j).norm() > tol)) {
            return Err(Error::Construction("orthogonality classes are not bases".into()));
        }
    }
    Ok(bases)
}

// ---------------------------------------------------------------------------
// Odd-prime MUBs, Singer difference sets, orthogonal arrays

/// The `p^2` vectors `(v_{i,y})_x = ω^{i x^2 + y x}/√p`, indexed `i·p + y`.
pub fn mub_odd_prime(p: u64) -> Result<PointSet> {
    if p == 2 || !is_prime(p) {
        return Err(invalid(format!("{p} is not an odd prime")));
    }
    let s = 1.0 / (p as f64).sqrt();
    let pts = (0..p)
        .flat_map(|i| {
            (0..p).map(move |y| (0..p).map(|x| root_of_unity(p as u32, ((i * x * x + y * x) % p) as i64) * s).collect())
        })
        .collect();
    PointSet::new(p as usize, pts, DEFAULT_TOL)
}

/// [`mub_odd_prime`] followed by the standard basis: `p + 1` mutually unbiased bases.
pub fn mub_odd_prime_complete(p: u64) -> Result<PointSet> {
    let x = mub_odd_prime(p)?;
    let d = p as usize;
    let mut pts = x.to_vecs();
    pts.extend((0..d).map(|i| (0..d).map(|j| cx(if i == j { 1.0 } else { 0.0 })).collect()));
    PointSet::new(d, pts, DEFAULT_TOL)
}

/// `GF(q^3)` as `GF(q)[x]/(c)` for the lexicographically smallest monic irreducible cubic `c`.
struct CubicField {
    f: PrimeField,
    c: [u64; 3],
}

impl CubicField {
    fn new(f: PrimeField) -> Self {
        let q = f.order();
        for a2 in 0..q {
            for a1 in 0..q {
                for a0 in 1..q {
                    // A cubic is irreducible iff it has no root.
                    let root = (0..q).any(|x| {
                        f.add(f.add(f.add(f.pow(x, 3), f.mul(a2, f.mul(x, x))), f.mul(a1, x)), a0) == 0
                    });
                    if !root {
                        return CubicField { f, c: [a0, a1, a2] };
                    }
                }
            }
        }
        unreachable!("irreducible cubics exist over every prime field")
    }

    fn mul(&self, a: [u64; 3], b: [u64; 3]) -> [u64; 3] {
        let f = self.f;
        let mut p = [0u64; 5];
        for i in 0..3 {
            for j in 0..3 {
                p[i + j] = f.add(p[i + j], f.mul(a[i], b[j]));
            }
        }
        for deg in (3..5).rev() {
            let t = p[deg];
            for k in 0..3 {
                p[deg - 3 + k] = f.sub(p[deg - 3 + k], f.mul(t, self.c[k]));
            }
        }
        [p[0], p[1], p[2]]
    }

    fn pow(&self, mut a: [u64; 3], mut e: u64) -> [u64; 3] {
        let mut r = [1, 0, 0];
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    fn trace(&self, a: [u64; 3]) -> u64 {
        let q = self.f.order();
        let a1 = self.pow(a, q);
        let a2 = self.pow(a1, q);
        let s = self.f.add(self.f.add(a[0], a1[0]), a2[0]);
        debug_assert!(self.f.add(a[1], self.f.add(a1[1], a2[1])) == 0);
        s
    }

    fn primitive(&self) -> [u64; 3] {
        let q = self.f.order();
        let order = q * q * q - 1;
        let primes: Vec<u64> = (2..=order).filter(|&p| order % p == 0 && is_prime(p)).collect();
        let q = self.f.order();
        for n in 0..q * q * q {
            let a = [n % q, n / q % q, n / (q * q)];
            if a == [0, 0, 0] {
                continue;
            }
            if primes.iter().all(|&p| self.pow(a, order / p) != [1, 0, 0]) {
                return a;
            }
        }
        unreachable!("finite fields have primitive elements")
    }
}

/// Singer difference set `D ⊂ ℤ_n`, `n = q^2 + q + 1`, `|D| = q + 1`.
pub fn singer_difference_set(q: u64) -> Result<Vec<u64>> {
    let f = PrimeField::new(q)?;
    let field = CubicField::new(f);
    let g = field.primitive();
    let n = q * q + q + 1;
    let mut d: Vec<u64> = (0..n).filter(|&k| field.trace(field.pow(g, k)) == 0).collect();
    d.sort_unstable();
    if d.len() as u64 != q + 1 {
        return Err(Error::Construction(format!("trace-zero set has {} elements, expected {}", d.len(), q + 1)));
    }
    Ok(d)
}

/// The `n = q^2+q+1` normalised characters of `ℤ_n` restricted to the Singer set, in `Ω(q+1)`.
pub fn singer_design(q: u64) -> Result<PointSet> {
    let d = singer_difference_set(q)?;
    let n = q * q + q + 1;
    let s = 1.0 / (d.len() as f64).sqrt();
    let pts = (0..n).map(|g| d.iter().map(|&e| root_of_unity(n as u32, (g * e % n) as i64) * s).collect()).collect();
    PointSet::new(d.len(), pts, DEFAULT_TOL)
}

/// `ψ`: a word over `{0..q}` of rank `r` maps to `(w^{x_k}/√r)` on its support.
pub fn psi(word: &[u32], q: u32) -> Vec<Complex64> {
    let r = word.iter().filter(|&&c| c != 0).count() as f64;
    word.iter().map(|&c| if c == 0 { cx(0.0) } else { root_of_unity(q, c as i64) / r.sqrt() }).collect()
}

fn combinations(n: usize, t: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, t: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == t {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, t, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, t, &mut Vec::new(), &mut out);
    out
}

/// `λ_t` of a set of words over `{0..q}`, or `None` if it depends on the rank-`t` word.
pub fn block_design_lambda(words: &[Vec<u32>], q: u32, t: usize) -> Option<usize> {
    let d = words.first()?.len();
    let mut lambda = None;
    for positions in combinations(d, t) {
        for code in 0..(q as usize).pow(t as u32) {
            let symbols: Vec<u32> = (0..t).map(|i| (code / (q as usize).pow(i as u32) % q as usize) as u32 + 1).collect();
            let count = words.iter().filter(|w| positions.iter().zip(&symbols).all(|(&p, &s)| w[p] == s)).count();
            match lambda {
                None => lambda = Some(count),
                Some(l) if l != count => return None,
                _ => {}
            }
        }
    }
    lambda
}

/// `ψ(X)` for a nonbinary block `t`-design `X` of constant rank, `q ≥ 3`, `t ≥ 2`.
pub fn oa_design(words: &[Vec<u32>], q: u32, t: usize) -> Result<PointSet> {
    if q < 3 || t < 2 {
        return Err(invalid("need q ≥ 3 and t ≥ 2"));
    }
    let d = words.first().map(|w| w.len()).ok_or_else(|| invalid("no words"))?;
    let rank = |w: &Vec<u32>| w.iter().filter(|&&c| c != 0).count();
    let r = rank(&words[0]);
    if words.iter().any(|w| w.len() != d || rank(w) != r || w.iter().any(|&c| c > q)) {
        return Err(invalid("words must have equal length, equal rank and symbols in 0..=q"));
    }
    if t > r {
        return Err(invalid("strength exceeds rank"));
    }
    if block_design_lambda(words, q, t).is_none() {
        return Err(invalid(format!("words do not form a nonbinary block {t}-design")));
    }
    PointSet::new(d, words.iter().map(|w| psi(w, q)).collect(), DEFAULT_TOL)
}

/// `OA(9, 4, 3, 2)`: rows `(a, b, a+b, a+2b)` over `GF(3)`, symbols shifted to `1..=3`.
pub fn oa_9_4_3_2() -> Vec<Vec<u32>> {
    let mut rows = Vec::new();
    for a in 0..3u32 {
        for b in 0..3u32 {
            rows.push(vec![a + 1, b + 1, (a + b) % 3 + 1, (a + 2 * b) % 3 + 1]);
        }
    }
    rows
}

// ---------------------------------------------------------------------------
// Conference matrices and derived codes

/// Checks zero diagonal, `±1` off the diagonal, `C^T = -C` and `C C^T = (n-1) I`.
pub fn is_skew_conference(c: &[Vec<i32>]) -> bool {
    let n = c.len();
    if c.iter().any(|row| row.len() != n) {
        return false;
    }
    for i in 0..n {
        if c[i][i] != 0 {
            return false;
        }
        for j in 0..n {
            if i != j && (c[i][j].abs() != 1 || c[i][j] != -c[j][i]) {
                return false;
            }
        }
    }
    (0..n).all(|i| (0..n).all(|j| (0..n).map(|k| c[i][k] * c[j][k]).sum::<i32>() == if i == j { n as i32 - 1 } else { 0 }))
}

/// First skew conference matrix of order `n` in the lexicographic order of
/// the upper-triangle sign patterns; exhaustive, so only small `n` are allowed.
pub fn skew_conference_search(n: usize) -> Result<Option<Vec<Vec<i32>>>> {
    let free = n * n.saturating_sub(1) / 2;
    if free > 24 {
        return Err(invalid(format!("order {n} is too large for exhaustive search")));
    }
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    for mask in 0u64..1 << free {
        let mut c = vec![vec![0i32; n]; n];
        for (b, &(i, j)) in cells.iter().enumerate() {
            let s = if mask >> b & 1 == 1 { -1 } else { 1 };
            c[i][j] = s;
            c[j][i] = -s;
        }
        if is_skew_conference(&c) {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// Bordered Paley skew conference matrix of order `q + 1`, `q ≡ 3 (mod 4)` prime.
pub fn paley_skew_conference(q: u64) -> Result<Vec<Vec<i32>>> {
    let f = PrimeField::new(q)?;
    if q % 4 != 3 {
        return Err(invalid(format!("{q} is not 3 mod 4")));
    }
    let n = q as usize + 1;
    let mut c = vec![vec![0i32; n]; n];
    for i in 1..n {
        c[0][i] = 1;
        c[i][0] = -1;
        for j in 1..n {
            if i != j {
                c[i][j] = f.legendre(f.sub(j as u64 - 1, i as u64 - 1));
            }
        }
    }
    Ok(c)
}

/// Relations on `Z_q`: `1` when `y - x` is a nonzero square, `2` when it is
/// a nonsquare. For `q ≡ 3 (mod 4)` the two are transposes of each other.
pub fn paley_tournament_scheme(q: u64) -> Result<RelationPartition> {
    let f = PrimeField::new(q)?;
    if q % 4 != 3 {
        return Err(invalid(format!("{q} is not 3 mod 4")));
    }
    let n = q as usize;
    let mut table = vec![0usize; n * n];
    for x in 0..n {
        for y in 0..n {
            table[x * n + y] = match f.legendre(f.sub(y as u64, x as u64)) {
                0 => 0,
                1 => 1,
                _ => 2,
            };
        }
    }
    RelationPartition::from_table(n, &table)
}

/// `q` unit vectors in `ℂ^{(q-1)/2}` realising the Paley tournament scheme:
/// the embedding through the idempotent of rank `(q-1)/2` whose entry on
/// the square relation has positive imaginary part.
pub fn paley_tournament_design(q: u64) -> Result<PointSet> {
    let rp = paley_tournament_scheme(q)?;
    let rep = check_scheme(&rp);
    let eig = rep.eigen.as_ref().ok_or_else(|| Error::Construction("Paley tournament is not a scheme".into()))?;
    let d = (q as usize - 1) / 2;
    let j = (1..eig.q.len())
        .find(|&j| eig.multiplicities[j] == d && eig.q[1][j].im > 0.0)
        .ok_or_else(|| Error::Construction("no idempotent of rank (q-1)/2".into()))?;
    embed_scheme(&rp, eig, j, DEFAULT_TOL)
}

/// `X = L ∪ (-L)` where `L` has Gram matrix `I + (i/√(2d-1)) C`, `C` of order `2d`.
pub fn conference_to_design(c: &[Vec<i32>]) -> Result<PointSet> {
    if !is_skew_conference(c) || c.len() % 2 == 1 {
        return Err(invalid("not a skew conference matrix of even order"));
    }
    let n = c.len();
    let d = n / 2;
    let s = 1.0 / ((n - 1) as f64).sqrt();
    let g = DMatrix::from_fn(n, n, |i, j| if i == j { cx(1.0) } else { c64(0.0, c[i][j] as f64 * s) });
    let l = psd_factor(&g, d, 1e-9)?;
    let mut pts = l.clone();
    pts.extend(l.iter().map(|v| v.iter().map(|z| -z).collect()));
    PointSet::normalized(d, pts, DEFAULT_TOL)
}

/// Recovers `C = -i √(2d-1) (G - I)` from the fibre representatives of a
/// 2-antipodal set, with entries rounded to integers and re-validated.
pub fn design_to_conference(x: &PointSet) -> Result<Vec<Vec<i32>>> {
    let l = crate::space::fiber_representatives(x, 2)?;
    let n = l.len();
    let s = ((n - 1) as f64).sqrt();
    let mut c = vec![vec![0i32; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let v = c64(0.0, -s) * l.inner(i, j);
                if v.im.abs() > 1e-6 || (v.re.abs() - 1.0).abs() > 1e-6 {
                    return Err(invalid(format!("Gram entry ({i},{j}) is not ±i/√(2d-1)")));
                }
                c[i][j] = v.re.round() as i32;
            }
        }
    }
    if !is_skew_conference(&c) {
        return Err(invalid("recovered matrix is not a skew conference matrix"));
    }
    Ok(c)
}

/// Unitary `U` with `U z = e_1`, built from a Householder reflection.
pub fn unitary_to_e1(z: &[Complex64]) -> DMatrix<Complex64> {
    let d = z.len();
    let theta = if z[0].norm() > 1e-15 { z[0] / z[0].norm() } else { cx(1.0) };
    let mut w: Vec<Complex64> = z.to_vec();
    w[0] -= theta;
    let ww: f64 = w.iter().map(|c| c.norm_sqr()).sum();
    let mut h = DMatrix::<Complex64>::identity(d, d);
    if ww > 1e-24 {
        for i in 0..d {
            for j in 0..d {
                h[(i, j)] -= w[i] * w[j].conj() * (2.0 / ww);
            }
        }
    }
    h * theta.conj()
}

/// `X_α(z)`: points `y` with `z^* y = α`, projected onto `z^⊥` and rescaled
/// into `Ω(d-1)`. Requires `|α| < 1`.
pub fn derived_code(x: &PointSet, z: usize, alpha: Complex64, tol: f64) -> Result<PointSet> {
    if alpha.norm() >= 1.0 - tol {
        return Err(invalid("derived codes need |α| < 1"));
    }
    if x.dim() < 2 {
        return Err(invalid("derived codes need dimension at least 2"));
    }
    let u = unitary_to_e1(x.point(z));
    let scale = 1.0 / (1.0 - alpha.norm_sqr()).sqrt();
    let zp = x.point(z);
    let pts: Vec<Vec<Complex64>> = (0..x.len())
        .filter(|&j| (inner(zp, x.point(j)) - alpha).norm() <= tol)
        .map(|j| {
            let y = x.point(j);
            (1..x.dim()).map(|r| (0..x.dim()).map(|c| u[(r, c)] * y[c]).sum::<Complex64>() * scale).collect()
        })
        .collect();
    if pts.is_empty() {
        return Err(invalid(format!("no point has inner product {alpha} with point {z}")));
    }
    PointSet::normalized(x.dim() - 1, pts, x.tol())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{is_design, max_design_strength};
    use crate::poly::LowerSet;
    use crate::space::angle_set;

    fn has_angle(x: &PointSet, z: Complex64) -> bool {
        angle_set(x).unwrap().find(z, 1e-9).is_some()
    }

    #[test]
    fn field_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.mul(3, f.inv(3)), 1);
        let squares: Vec<u64> = (1..7).filter(|&a| f.legendre(a) == 1).collect();
        assert_eq!(squares, vec![1, 2, 4]);
        assert!(PrimeField::new(9).is_err());
    }

    #[test]
    fn hensel_lifts() {
        assert_eq!(GaloisRing::new(3).unwrap().modulus(), &[3, 1, 2, 1]);
        assert_eq!(GaloisRing::new(2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(GaloisRing::new(1).unwrap().modulus(), &[3, 1]);
        for r in 1..=5 {
            let gr = GaloisRing::new(r).unwrap();
            let t = gr.teichmuller().unwrap();
            assert_eq!(t.len(), 1 << r);
            // Teichmüller set is closed under multiplication.
            for a in &t {
                for b in &t {
                    assert!(t.contains(&gr.mul(a, b)));
                }
            }
        }
    }

    #[test]
    fn kerdock_sizes_and_angles() {
        for r in 1..=4 {
            let x = kerdock_code_set(r).unwrap();
            let d = 1usize << r;
            assert_eq!(x.len(), 4 * d * (d + 1));
            let a = angle_set(&x).unwrap();
            assert_eq!(a.len(), if r % 2 == 1 { 8 } else { 8 });
        }
        let x = kerdock_code_set(3).unwrap();
        assert!(has_angle(&x, c64(0.25, 0.25)));
        assert!(has_angle(&x, c64(-1.0, 0.0)));
        let y = kerdock_code_set(2).unwrap();
        assert!(has_angle(&y, c64(0.5, 0.0)));
    }

    #[test]
    fn mub_covers_are_unbiased() {
        let x = mub_cover(MubFamily::Odd, 1).unwrap();
        assert_eq!(check_unbiased(&x, 4).unwrap().len(), 3);
        assert!(mub_cover(MubFamily::Even, 1).is_err());
        let y = mub_cover(MubFamily::Even, 2).unwrap();
        assert_eq!(check_unbiased(&y, 4).unwrap().len(), 5);
    }

    #[test]
    fn sic_and_hoggar() {
        let x = sic_d2().unwrap();
        assert_eq!(x.len(), 16);
        let s = 1.0 / 3f64.sqrt();
        for z in [c64(s, 0.0), c64(0.0, s), c64(-1.0, 0.0), c64(0.0, 1.0)] {
            assert!(has_angle(&x, z));
        }
        assert_eq!(angle_set(&x).unwrap().len(), 7);
        assert_eq!(hoggar().unwrap().len(), 256);
    }

    #[test]
    fn coxeter_sizes() {
        assert_eq!(coxeter_27().unwrap().len(), 27);
        assert_eq!(coxeter_42().unwrap().len(), 42);
        assert_eq!(coxeter_56().unwrap().len(), 56);
        assert_eq!(coxeter_240().unwrap().len(), 240);
        assert_eq!(coxeter_756().unwrap().len(), 756);
    }

    #[test]
    fn coxeter_angle_sets() {
        let x = coxeter_42().unwrap();
        let a = angle_set(&x).unwrap();
        assert_eq!(a.len(), 8);
        assert!(has_angle(&x, c64(0.25, 7f64.sqrt() / 4.0)));
        assert!(has_angle(&x, c64(-0.5, 0.0)));
        let y = coxeter_240().unwrap();
        assert_eq!(angle_set(&y).unwrap().len(), 12);
        assert!(has_angle(&y, c64(0.0, 1.0 / 3f64.sqrt())));
        let z = coxeter_27().unwrap();
        assert_eq!(angle_set(&z).unwrap().len(), 5);
        assert!(has_angle(&z, c64(-0.5, 0.0)));
    }

    #[test]
    fn odd_prime_mubs() {
        let x = mub_odd_prime_complete(3).unwrap();
        assert_eq!(x.len(), 12);
        let t = 1.0 / 3f64.sqrt();
        for i in 0..x.len() {
            for j in 0..x.len() {
                let a = x.inner(i, j).norm();
                let same = i / 3 == j / 3;
                if i == j {
                    assert!((a - 1.0).abs() < 1e-12);
                } else if same {
                    assert!(a < 1e-12);
                } else {
                    assert!((a - t).abs() < 1e-12);
                }
            }
        }
        let cover = antipodal_cover(&mub_odd_prime(5).unwrap(), 5).unwrap();
        assert!(is_design(&cover, &LowerSet::total_degree(2), 1e-9));
        assert!(mub_odd_prime(9).is_err());
    }

    #[test]
    fn singer_sets() {
        let d = singer_difference_set(2).unwrap();
        assert_eq!(d.len(), 3);
        // Every nonzero difference occurs exactly once.
        let mut seen = vec![0; 7];
        for &a in &d {
            for &b in &d {
                if a != b {
                    seen[((a + 7 - b) % 7) as usize] += 1;
                }
            }
        }
        assert!(seen[1..].iter().all(|&c| c == 1));
        let x = singer_design(3).unwrap();
        assert_eq!((x.len(), x.dim()), (13, 4));
        let cover = antipodal_cover(&x, 13).unwrap();
        assert!(is_design(&cover, &LowerSet::total_degree(2), 1e-9));
    }

    #[test]
    fn orthogonal_array_design() {
        let rows = oa_9_4_3_2();
        assert_eq!(block_design_lambda(&rows, 3, 2), Some(1));
        let x = oa_design(&rows, 3, 2).unwrap();
        assert!(is_design(&x, &LowerSet::total_degree(2), 1e-9));
        let rep = max_design_strength(&x, 4, 1e-9);
        assert!(rep.residual(crate::poly::BiDegree::new(2, 2)).unwrap() > 1e-3);
        let mut bad = rows.clone();
        bad[0][0] = 2;
        assert!(oa_design(&bad, 3, 2).is_err());
    }

    #[test]
    fn simplex_cover() {
        let x = regular_simplex_cover(2).unwrap();
        assert_eq!(x.len(), 5);
        for i in 0..5 {
            for j in 0..5 {
                if i != j {
                    assert!((x.inner(i, j).re + 0.25).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn conference_roundtrip() {
        let c = skew_conference_search(4).unwrap().unwrap();
        let x = conference_to_design(&c).unwrap();
        assert_eq!(x.len(), 8);
        assert_eq!(angle_set(&x).unwrap().len(), 3);
        assert!(is_design(&x, &LowerSet::total_degree(3), 1e-9));
        assert_eq!(design_to_conference(&x).unwrap(), c);
        let p = paley_skew_conference(7).unwrap();
        assert!(is_skew_conference(&p));
        let y = conference_to_design(&p).unwrap();
        assert!(is_design(&y, &LowerSet::total_degree(3), 1e-9));
    }

    #[test]
    fn householder_maps_to_e1() {
        let x = coxeter_27().unwrap();
        let u = unitary_to_e1(x.point(4));
        let v = &u * nalgebra::DVector::from_column_slice(x.point(4));
        assert!((v[0] - cx(1.0)).norm() < 1e-12);
        assert!(v.iter().skip(1).all(|c| c.norm() < 1e-12));
        assert!(((u.adjoint() * &u) - DMatrix::identity(3, 3)).iter().all(|c| c.norm() < 1e-12));
    }

    #[test]
    fn paley_tournament_angles() {
        let x = paley_tournament_design(7).unwrap();
        assert_eq!((x.len(), x.dim()), (7, 3));
        let a = crate::space::angle_set(&x).unwrap();
        let r = 7f64.sqrt();
        let want = [c64(-1.0, r) / 6.0, c64(-1.0, -r) / 6.0];
        assert_eq!(a.values.len(), 2);
        assert!(want.iter().all(|w| a.values.iter().any(|v| (v - w).norm() < 1e-9)));
        assert!(paley_tournament_scheme(5).is_err());
        let singer = crate::space::angle_set(&singer_design(2).unwrap()).unwrap();
        assert!(singer.values.iter().all(|v| a.values.iter().any(|w| (v - w).norm() < 1e-9)));
    }
}
