//! Polynomials in `x` and `x̄` with rational coefficients, the Jacobi basis
//! `g_{k,l}` of zonal harmonics on the complex sphere, and the real
//! Gegenbauer polynomials.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// A bidegree `(k, l)`: degree `k` in `z` and `l` in `z̄`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BiDegree {
    pub k: u32,
    pub l: u32,
}

impl BiDegree {
    pub const ZERO: BiDegree = BiDegree { k: 0, l: 0 };

    pub const fn new(k: u32, l: u32) -> Self {
        BiDegree { k, l }
    }

    pub fn total(self) -> u32 {
        self.k + self.l
    }

    pub fn swap(self) -> Self {
        BiDegree { k: self.l, l: self.k }
    }

    /// Product order: `(k,l) ⪯ (k',l')` iff `k ≤ k'` and `l ≤ l'`.
    pub fn precedes(self, other: BiDegree) -> bool {
        self.k <= other.k && self.l <= other.l
    }
}

impl fmt::Display for BiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k, self.l)
    }
}

impl From<(u32, u32)> for BiDegree {
    fn from((k, l): (u32, u32)) -> Self {
        BiDegree { k, l }
    }
}

/// A finite subset of `ℕ²` closed downward under the product order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerSet {
    members: BTreeSet<BiDegree>,
}

impl LowerSet {
    /// Validates that `members` is closed downward.
    pub fn new(members: impl IntoIterator<Item = BiDegree>) -> Result<Self> {
        let members: BTreeSet<BiDegree> = members.into_iter().collect();
        for m in &members {
            if m.k > 0 && !members.contains(&BiDegree::new(m.k - 1, m.l)) {
                return Err(Error::NotLowerSet(format!("{m} present without ({},{})", m.k - 1, m.l)));
            }
            if m.l > 0 && !members.contains(&BiDegree::new(m.k, m.l - 1)) {
                return Err(Error::NotLowerSet(format!("{m} present without ({},{})", m.k, m.l - 1)));
            }
        }
        Ok(LowerSet { members })
    }

    pub fn empty() -> Self {
        LowerSet::default()
    }

    /// The smallest lower set containing every generator.
    pub fn closure(gens: impl IntoIterator<Item = BiDegree>) -> Self {
        let mut members = BTreeSet::new();
        for g in gens {
            for k in 0..=g.k {
                for l in 0..=g.l {
                    members.insert(BiDegree::new(k, l));
                }
            }
        }
        LowerSet { members }
    }

    /// `{(k,l) : k + l ≤ t}`.
    pub fn total_degree(t: u32) -> Self {
        LowerSet::closure((0..=t).map(|k| BiDegree::new(k, t - k)))
    }

    pub fn contains(&self, d: BiDegree) -> bool {
        self.members.contains(&d)
    }

    pub fn iter(&self) -> impl Iterator<Item = BiDegree> + '_ {
        self.members.iter().copied()
    }

    pub fn members(&self) -> &BTreeSet<BiDegree> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members not strictly below any other member.
    pub fn maximal(&self) -> Vec<BiDegree> {
        self.members
            .iter()
            .copied()
            .filter(|m| {
                !self.contains(BiDegree::new(m.k + 1, m.l)) && !self.contains(BiDegree::new(m.k, m.l + 1))
            })
            .collect()
    }

    pub fn is_subset(&self, other: &LowerSet) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn union(&self, other: &LowerSet) -> LowerSet {
        LowerSet { members: self.members.union(&other.members).copied().collect() }
    }

    /// Members other than `(0,0)`.
    pub fn nonzero(&self) -> impl Iterator<Item = BiDegree> + '_ {
        self.iter().filter(|d| *d != BiDegree::ZERO)
    }
}

impl fmt::Display for LowerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.maximal().iter().map(|d| d.to_string()).collect();
        write!(f, "cl{{{}}}", gens.join(","))
    }
}

impl FromStr for LowerSet {
    type Err = Error;

    /// Accepts `cl{(5,0),(3,2)}`, an explicit lower set `{(0,0),(1,0)}`,
    /// or `k+l<=t`.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(t) = s.strip_prefix("k+l<=") {
            let t: u32 = t.parse().map_err(|_| invalid(format!("bad total degree in {s:?}")))?;
            return Ok(LowerSet::total_degree(t));
        }
        let (closed, body) = if let Some(b) = s.strip_prefix("cl{") {
            (true, b)
        } else if let Some(b) = s.strip_prefix('{') {
            (false, b)
        } else {
            return Err(invalid(format!("cannot parse lower set {s:?}")));
        };
        let body = body.strip_suffix('}').ok_or_else(|| invalid(format!("missing '}}' in {s:?}")))?;
        let mut degs = Vec::new();
        for part in body.split(")").filter(|p| !p.is_empty()) {
            let part = part.trim_start_matches(',').trim_start_matches('(');
            let mut it = part.split(',');
            let k = it.next().and_then(|v| v.parse().ok());
            let l = it.next().and_then(|v| v.parse().ok());
            match (k, l, it.next()) {
                (Some(k), Some(l), None) => degs.push(BiDegree::new(k, l)),
                _ => return Err(invalid(format!("bad bidegree {part:?} in {s:?}"))),
            }
        }
        if closed {
            Ok(LowerSet::closure(degs))
        } else {
            LowerSet::new(degs)
        }
    }
}

/// `U * V = {(k + l', k' + l) : (k,l) ∈ U, (k',l') ∈ V}`.
pub fn convolve<'a>(
    u: impl IntoIterator<Item = &'a BiDegree>,
    v: impl IntoIterator<Item = &'a BiDegree> + Clone,
) -> BTreeSet<BiDegree> {
    let mut out = BTreeSet::new();
    for a in u {
        for b in v.clone() {
            out.insert(BiDegree::new(a.k + b.l, b.k + a.l));
        }
    }
    out
}

/// A polynomial `Σ c_{a,b} x^a x̄^b` with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZonalPoly {
    coeffs: BTreeMap<(u32, u32), BigRational>,
}

impl ZonalPoly {
    pub fn zero() -> Self {
        ZonalPoly::default()
    }

    pub fn constant(c: BigRational) -> Self {
        ZonalPoly::monomial(0, 0, c)
    }

    pub fn one() -> Self {
        ZonalPoly::constant(BigRational::one())
    }

    pub fn monomial(a: u32, b: u32, c: BigRational) -> Self {
        let mut p = ZonalPoly::zero();
        p.add_term(a, b, c);
        p
    }

    /// The variable `x`.
    pub fn x() -> Self {
        ZonalPoly::monomial(1, 0, BigRational::one())
    }

    /// The variable `x̄`.
    pub fn xbar() -> Self {
        ZonalPoly::monomial(0, 1, BigRational::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), BigRational)>) -> Self {
        let mut p = ZonalPoly::zero();
        for ((a, b), c) in terms {
            p.add_term(a, b, c);
        }
        p
    }

    pub fn add_term(&mut self, a: u32, b: u32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry((a, b)).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&(a, b));
        }
    }

    pub fn coeff(&self, a: u32, b: u32) -> BigRational {
        self.coeffs.get(&(a, b)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &BigRational)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest `a + b` over the support, or `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|(a, b)| a + b).max()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return ZonalPoly::zero();
        }
        ZonalPoly { coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    /// Exchanges `x` and `x̄`.
    pub fn swap(&self) -> Self {
        ZonalPoly { coeffs: self.coeffs.iter().map(|((a, b), v)| ((*b, *a), v.clone())).collect() }
    }

    /// True when `F(x̄) = conj(F(x))`, i.e. `F` is real valued.
    pub fn is_real_valued(&self) -> bool {
        self.coeffs.iter().all(|((a, b), v)| self.coeff(*b, *a) == *v)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let zc = z.conj();
        let mut acc = Complex64::new(0.0, 0.0);
        for ((a, b), c) in &self.coeffs {
            acc += z.powu(*a) * zc.powu(*b) * c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    /// `F(1)` computed exactly.
    pub fn eval_at_one(&self) -> BigRational {
        self.coeffs.values().fold(BigRational::zero(), |acc, v| acc + v)
    }

    pub fn to_float(&self) -> FloatPoly {
        FloatPoly {
            terms: self.coeffs.iter().map(|((a, b), c)| (*a, *b, c.to_f64().unwrap_or(f64::NAN))).collect(),
        }
    }

    /// Parses one term per line as `a b coeff`, where `coeff` is an integer,
    /// a fraction `p/q`, or a decimal. `#` starts a comment.
    pub fn parse_terms(text: &str) -> Result<Self> {
        let mut p = ZonalPoly::zero();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let err = |msg: &str| Error::Parse { line: i + 1, msg: msg.to_string() };
            if parts.len() != 3 {
                return Err(err("expected `a b coeff`"));
            }
            let a: u32 = parts[0].parse().map_err(|_| err("bad exponent"))?;
            let b: u32 = parts[1].parse().map_err(|_| err("bad exponent"))?;
            let c = parse_rational(parts[2]).ok_or_else(|| err("bad coefficient"))?;
            p.add_term(a, b, c);
        }
        Ok(p)
    }

    /// Inverse of [`ZonalPoly::parse_terms`].
    pub fn to_terms_string(&self) -> String {
        self.coeffs.iter().map(|((a, b), c)| format!("{a} {b} {c}\n")).collect()
    }
}

impl fmt::Display for ZonalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((a, b), c) in self.coeffs.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mono = match (a, b) {
                (0, 0) => String::new(),
                _ => {
                    let mut parts = Vec::new();
                    if *a == 1 {
                        parts.push("x".to_string());
                    } else if *a > 1 {
                        parts.push(format!("x^{a}"));
                    }
                    if *b == 1 {
                        parts.push("xb".to_string());
                    } else if *b > 1 {
                        parts.push(format!("xb^{b}"));
                    }
                    parts.join("*")
                }
            };
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl std::ops::Add for &ZonalPoly {
    type Output = ZonalPoly;
    fn add(self, rhs: &ZonalPoly) -> ZonalPoly {
        let mut out = self.clone();
        for ((a, b), c) in &rhs.coeffs {
            out.add_term(*a, *b, c.clone());
        }
        out
    }
}

impl std::ops::Sub for &ZonalPoly {
    type Output = ZonalPoly;
    fn sub(self, rhs: &ZonalPoly) -> ZonalPoly {
        let mut out = self.clone();
        for ((a, b), c) in &rhs.coeffs {
            out.add_term(*a, *b, -c.clone());
        }
        out
    }
}

impl std::ops::Mul for &ZonalPoly {
    type Output = ZonalPoly;
    fn mul(self, rhs: &ZonalPoly) -> ZonalPoly {
        let mut out = ZonalPoly::zero();
        for ((a, b), c) in &self.coeffs {
            for ((a2, b2), c2) in &rhs.coeffs {
                out.add_term(a + a2, b + b2, c * c2);
            }
        }
        out
    }
}

/// Floating point copy of a [`ZonalPoly`] for repeated evaluation.
#[derive(Clone, Debug)]
pub struct FloatPoly {
    pub terms: Vec<(u32, u32, f64)>,
}

impl FloatPoly {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let zc = z.conj();
        self.terms.iter().map(|&(a, b, c)| z.powu(a) * zc.powu(b) * c).sum()
    }
}

/// Parses an integer, a fraction `p/q`, or a decimal literal.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    if let Ok(q) = BigRational::from_str(s) {
        return Some(q);
    }
    let v: f64 = s.parse().ok()?;
    v.is_finite().then(|| rationalize(v))
}

/// Best rational approximation with a denominator below `10^6` when one
/// lies within `1e-12` relative error, otherwise the exact binary value.
pub fn rationalize(v: f64) -> BigRational {
    let tol = 1e-12 * v.abs().max(1.0);
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut x = v;
    for _ in 0..40 {
        let a = x.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > 1_000_000 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if ((h1 as f64) / (k1 as f64) - v).abs() <= tol {
            return BigRational::new(BigInt::from(h1), BigInt::from(k1));
        }
        let frac = x - a;
        if frac.abs() < 1e-300 {
            break;
        }
        x = 1.0 / frac;
    }
    BigRational::from_float(v).unwrap_or_else(BigRational::zero)
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `C(n, k)` with `C(n, k) = 0` for `n < k` and `C(n, k) = 0` for negative `n`.
pub fn binomial(n: i64, k: i64) -> u64 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    num_integer::binomial(n as u64, k as u64)
}

/// `dim Harm(k,l)` on `ℂ^d`.
pub fn harm_dim(d: u32, deg: BiDegree) -> u64 {
    let d = d as i64;
    let (k, l) = (deg.k as i64, deg.l as i64);
    binomial(d + k - 1, d - 1) * binomial(d + l - 1, d - 1) - binomial(d + k - 2, d - 1) * binomial(d + l - 2, d - 1)
}

/// `dim Hom(k,l)` on `ℂ^d`.
pub fn hom_dim(d: u32, deg: BiDegree) -> u64 {
    let d = d as i64;
    binomial(d + deg.k as i64 - 1, d - 1) * binomial(d + deg.l as i64 - 1, d - 1)
}

/// `∫ |z_1|^{2a} dσ(z) = C(d+a-1, a)^{-1}`; mixed monomials average to zero.
pub fn monomial_average(d: u32, a: u32, b: u32) -> BigRational {
    if a != b {
        return BigRational::zero();
    }
    BigRational::new(BigInt::one(), BigInt::from(binomial(d as i64 + a as i64 - 1, a as i64)))
}

/// Sphere average of `F(⟨e_1, z⟩)`.
pub fn sphere_average(d: u32, f: &ZonalPoly) -> BigRational {
    f.terms().fold(BigRational::zero(), |acc, ((a, b), c)| acc + c * monomial_average(d, a, b))
}

/// The zonal polynomial `g_{k,l}` on `ℂ^d`, normalised so `g_{k,l}(1) = dim Harm(k,l)`.
pub fn jacobi(d: u32, deg: BiDegree) -> ZonalPoly {
    assert!(d >= 2, "jacobi polynomials need d >= 2");
    let (k, l) = (deg.k, deg.l);
    let pref = BigRational::new(BigInt::from(d + k + l - 1), factorial(d - 1));
    let mut p = ZonalPoly::zero();
    for r in 0..=k.min(l) {
        let num = factorial(d + k + l - r - 2);
        let den = factorial(r) * factorial(k - r) * factorial(l - r);
        let mut c = &pref * BigRational::new(num, den);
        if r % 2 == 1 {
            c = -c;
        }
        p.add_term(k - r, l - r, c);
    }
    p
}

/// Coefficient of `x^k x̄^l` in `g_{k,l}`.
pub fn leading_coeff(d: u32, deg: BiDegree) -> BigRational {
    let (k, l) = (deg.k, deg.l);
    BigRational::new(
        BigInt::from(d + k + l - 1) * factorial(d + k + l - 2),
        factorial(d - 1) * factorial(k) * factorial(l),
    )
}

/// Coefficients `f_{k,l}` of `F = Σ f_{k,l} g_{k,l}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiExpansion {
    pub dim: u32,
    coeffs: BTreeMap<BiDegree, BigRational>,
}

impl JacobiExpansion {
    pub fn new(dim: u32) -> Self {
        JacobiExpansion { dim, coeffs: BTreeMap::new() }
    }

    pub fn get(&self, deg: BiDegree) -> BigRational {
        self.coeffs.get(&deg).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn f00(&self) -> BigRational {
        self.get(BiDegree::ZERO)
    }

    pub fn add(&mut self, deg: BiDegree, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(deg).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&deg);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (BiDegree, &BigRational)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn support(&self) -> BTreeSet<BiDegree> {
        self.coeffs.keys().copied().collect()
    }

    /// Rebuilds `Σ f_{k,l} g_{k,l}` in the monomial basis.
    pub fn synthesize(&self) -> ZonalPoly {
        let mut out = ZonalPoly::zero();
        for (deg, c) in &self.coeffs {
            out = &out + &jacobi(self.dim, *deg).scale(c);
        }
        out
    }
}

/// Jacobi expansion by triangular back-substitution on leading monomials.
pub fn expand(d: u32, f: &ZonalPoly) -> JacobiExpansion {
    let mut rest = f.clone();
    let mut out = JacobiExpansion::new(d);
    while let Some(((a, b), c)) = rest
        .terms()
        .max_by_key(|((a, b), _)| (a + b, *a))
        .map(|(m, c)| (m, c.clone()))
    {
        let deg = BiDegree::new(a, b);
        let coef = c / leading_coeff(d, deg);
        rest = &rest - &jacobi(d, deg).scale(&coef);
        out.add(deg, coef);
    }
    out
}

/// Multiplies an expansion by `x` using
/// `x g_{k,l} = (k+1)/(d+k+l) g_{k+1,l} + (d+l-2)/(d+k+l-2) g_{k,l-1}`.
pub fn times_x(e: &JacobiExpansion) -> JacobiExpansion {
    let d = e.dim as i64;
    let mut out = JacobiExpansion::new(e.dim);
    for (deg, c) in e.iter() {
        let (k, l) = (deg.k as i64, deg.l as i64);
        let a = BigRational::new(BigInt::from(k + 1), BigInt::from(d + k + l));
        out.add(BiDegree::new(deg.k + 1, deg.l), c * a);
        if l > 0 {
            let b = BigRational::new(BigInt::from(d + l - 2), BigInt::from(d + k + l - 2));
            out.add(BiDegree::new(deg.k, deg.l - 1), c * b);
        }
    }
    out
}

/// Multiplies an expansion by `x̄`; the mirror image of [`times_x`].
pub fn times_xbar(e: &JacobiExpansion) -> JacobiExpansion {
    let swapped = JacobiExpansion { dim: e.dim, coeffs: e.coeffs.iter().map(|(k, v)| (k.swap(), v.clone())).collect() };
    let t = times_x(&swapped);
    JacobiExpansion { dim: e.dim, coeffs: t.coeffs.into_iter().map(|(k, v)| (k.swap(), v)).collect() }
}

/// Jacobi expansion built from the three-term recurrence alone.
pub fn expand_by_recurrence(d: u32, f: &ZonalPoly) -> JacobiExpansion {
    let mut out = JacobiExpansion::new(d);
    for ((a, b), c) in f.terms() {
        let mut e = JacobiExpansion::new(d);
        e.add(BiDegree::ZERO, BigRational::one());
        for _ in 0..a {
            e = times_x(&e);
        }
        for _ in 0..b {
            e = times_xbar(&e);
        }
        for (deg, v) in e.iter() {
            out.add(deg, v * c);
        }
    }
    out
}

/// Expansion of `g_a · g_b` in the Jacobi basis.
pub fn product_expand(d: u32, a: BiDegree, b: BiDegree) -> JacobiExpansion {
    expand(d, &(&jacobi(d, a) * &jacobi(d, b)))
}

/// Univariate polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly(pub Vec<BigRational>);

impl UniPoly {
    pub fn eval(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * t + c.to_f64().unwrap_or(f64::NAN))
    }

    /// `Q(Re x)` written in `x` and `x̄`.
    pub fn of_real_part(&self) -> ZonalPoly {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let re = (&ZonalPoly::x() + &ZonalPoly::xbar()).scale(&half);
        let mut out = ZonalPoly::zero();
        let mut pow = ZonalPoly::one();
        for c in &self.0 {
            out = &out + &pow.scale(c);
            pow = &pow * &re;
        }
        out
    }
}

/// Gegenbauer polynomial `Q_{d,k}` on the real sphere `S^{d-1}`, normalised so
/// `Q_{d,k}(1)` is the dimension of degree `k` harmonics.
pub fn gegenbauer(d: u32, k: u32) -> UniPoly {
    let lambda = |j: u32| BigRational::new(BigInt::from(j), BigInt::from(d + 2 * j - 2));
    let mut prev = vec![BigRational::one()];
    if k == 0 {
        return UniPoly(prev);
    }
    let mut cur = vec![BigRational::zero(), BigRational::from_integer(BigInt::from(d))];
    for j in 1..k {
        let mut next = vec![BigRational::zero(); cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c;
        }
        let lm = if j == 1 { BigRational::zero() } else { lambda(j - 1) };
        let shift = lm - BigRational::one();
        for (i, c) in prev.iter().enumerate() {
            next[i] += c * &shift;
        }
        let inv = BigRational::one() / lambda(j + 1);
        for c in next.iter_mut() {
            *c *= &inv;
        }
        prev = cur;
        cur = next;
    }
    UniPoly(cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn x() -> ZonalPoly {
        ZonalPoly::x()
    }

    fn xb() -> ZonalPoly {
        ZonalPoly::xbar()
    }

    fn c(n: i64) -> ZonalPoly {
        ZonalPoly::constant(q(n, 1))
    }

    #[test]
    fn low_degree_jacobi_match_closed_forms() {
        for d in 2..7i64 {
            let du = d as u32;
            let xx = &x() * &xb();
            assert_eq!(jacobi(du, BiDegree::new(0, 0)), ZonalPoly::one());
            assert_eq!(jacobi(du, BiDegree::new(1, 0)), x().scale(&q(d, 1)));
            let g11 = (&xx.scale(&q(d, 1)) - &c(1)).scale(&q(d + 1, 1));
            assert_eq!(jacobi(du, BiDegree::new(1, 1)), g11);
            let g20 = (&x() * &x()).scale(&q(d * (d + 1), 2));
            assert_eq!(jacobi(du, BiDegree::new(2, 0)), g20);
            let g21 = (&(&x() * &xx).scale(&q(d + 1, 1)) - &x().scale(&q(2, 1))).scale(&q(d * (d + 2), 2));
            assert_eq!(jacobi(du, BiDegree::new(2, 1)), g21);
            let inner = &(&(&xx * &xx).scale(&q((d + 1) * (d + 2), 1)) - &xx.scale(&q(4 * (d + 1), 1))) + &c(2);
            assert_eq!(jacobi(du, BiDegree::new(2, 2)), inner.scale(&q(d * (d + 3), 4)));
            let x3x2 = &(&xx * &xx) * &x();
            let x2x = &xx * &x();
            let inner = &(&x3x2.scale(&q((d + 2) * (d + 3), 1)) - &x2x.scale(&q(6 * (d + 2), 1))) + &x().scale(&q(6, 1));
            assert_eq!(jacobi(du, BiDegree::new(3, 2)), inner.scale(&q(d * (d + 1) * (d + 4), 12)));
        }
    }

    #[test]
    fn jacobi_at_one_is_harmonic_dimension() {
        for d in 2..9 {
            for k in 0..7 {
                for l in 0..7 {
                    let deg = BiDegree::new(k, l);
                    let v = jacobi(d, deg).eval_at_one();
                    assert_eq!(v, BigRational::from_integer(BigInt::from(harm_dim(d, deg))), "d={d} {deg}");
                }
            }
        }
    }

    #[test]
    fn harm_dim_small_values() {
        // d = 1: only constants, z and z̄ powers survive.
        assert_eq!(harm_dim(1, BiDegree::new(3, 0)), 1);
        assert_eq!(harm_dim(1, BiDegree::new(1, 1)), 0);
        assert_eq!(harm_dim(2, BiDegree::new(1, 1)), 3);
        assert_eq!(harm_dim(3, BiDegree::new(2, 2)), 27);
        assert_eq!(harm_dim(4, BiDegree::new(2, 1)), 36);
    }

    #[test]
    fn harm_dim_matches_hom_difference() {
        for d in 1..7 {
            for k in 0..6 {
                for l in 0..6 {
                    let deg = BiDegree::new(k, l);
                    let lower = if k > 0 && l > 0 { hom_dim(d, BiDegree::new(k - 1, l - 1)) } else { 0 };
                    assert_eq!(harm_dim(d, deg), hom_dim(d, deg) - lower);
                }
            }
        }
    }

    /// Independent oracle: `m_{k,l} x^k x̄^l ₂F₁(-k,-l; d-1; 1 - 1/(x x̄))`.
    fn hypergeometric_g(d: u32, k: u32, l: u32, z: Complex64) -> Complex64 {
        let m = harm_dim(d, BiDegree::new(k, l)) as f64;
        let w = Complex64::new(1.0, 0.0) - Complex64::new(1.0, 0.0) / (z * z.conj());
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for n in 0..k.min(l) {
            let n = n as f64;
            let num = (n - k as f64) * (n - l as f64);
            let den = (d as f64 - 1.0 + n) * (n + 1.0);
            term = term * w * (num / den);
            sum += term;
        }
        z.powu(k) * z.conj().powu(l) * sum * m
    }

    #[test]
    fn jacobi_agrees_with_hypergeometric_form() {
        let pts = [Complex64::new(0.3, 0.4), Complex64::new(-0.7, 0.1), Complex64::new(0.05, -0.9)];
        for d in 2..6 {
            for k in 0..5 {
                for l in 0..5 {
                    let g = jacobi(d, BiDegree::new(k, l));
                    for z in pts {
                        let a = g.eval(z);
                        let b = hypergeometric_g(d, k, l, z);
                        assert!((a - b).norm() <= 1e-9 * (1.0 + b.norm()), "d={d} ({k},{l}) {a} vs {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn expansion_of_jacobi_is_unit_vector() {
        for d in 2..5 {
            for k in 0..4 {
                for l in 0..4 {
                    let deg = BiDegree::new(k, l);
                    let e = expand(d, &jacobi(d, deg));
                    assert_eq!(e.support(), [deg].into_iter().collect());
                    assert_eq!(e.get(deg), BigRational::one());
                }
            }
        }
    }

    #[test]
    fn f00_is_sphere_average() {
        let f = &(&(&x() * &x()) * &(&xb() * &xb())) + &(&x() * &xb()).scale(&q(3, 1));
        for d in 2..6 {
            assert_eq!(expand(d, &f).f00(), sphere_average(d, &f));
        }
    }

    #[test]
    fn recurrence_route_agrees_with_back_substitution() {
        let f = ZonalPoly::from_terms([((3, 1), q(2, 1)), ((0, 2), q(-1, 3)), ((1, 1), q(5, 7)), ((0, 0), q(1, 1))]);
        for d in 2..6 {
            assert_eq!(expand(d, &f), expand_by_recurrence(d, &f));
        }
    }

    #[test]
    fn recurrence_identity_with_lowered_conjugate_index() {
        for d in 2..6u32 {
            for k in 0..4u32 {
                for l in 0..4u32 {
                    let lhs = &x() * &jacobi(d, BiDegree::new(k, l));
                    let a = q((k + 1) as i64, (d + k + l) as i64);
                    let mut rhs = jacobi(d, BiDegree::new(k + 1, l)).scale(&a);
                    if l > 0 {
                        let b = q((d + l - 2) as i64, (d + k + l - 2) as i64);
                        rhs = &rhs + &jacobi(d, BiDegree::new(k, l - 1)).scale(&b);
                    }
                    assert_eq!(lhs, rhs, "d={d} ({k},{l})");
                }
            }
        }
    }

    #[test]
    fn product_constant_term_rule() {
        let d = 4;
        for a in [BiDegree::new(1, 0), BiDegree::new(2, 1), BiDegree::new(1, 1)] {
            for b in [BiDegree::new(0, 1), BiDegree::new(1, 2), BiDegree::new(1, 1), BiDegree::new(2, 0)] {
                let e = product_expand(d, a, b);
                let expect = if a.k == b.l && a.l == b.k {
                    BigRational::from_integer(BigInt::from(harm_dim(d, a)))
                } else {
                    BigRational::zero()
                };
                assert_eq!(e.f00(), expect, "{a} {b}");
            }
        }
    }

    #[test]
    fn gegenbauer_low_degrees() {
        for d in 2..8i64 {
            let g2 = gegenbauer(d as u32, 2);
            assert_eq!(g2.0, vec![q(-(d + 2), 2), q(0, 1), q(d * (d + 2), 2)]);
            let g3 = gegenbauer(d as u32, 3);
            let at_one: BigRational = g3.0.iter().fold(BigRational::zero(), |a, c| a + c);
            assert_eq!(at_one, q(d * (d - 1) * (d + 4), 6));
        }
    }

    #[test]
    fn gegenbauer_sums_jacobi_along_antidiagonal() {
        for d in 2..5u32 {
            for k in 0..6u32 {
                let lhs = gegenbauer(2 * d, k).of_real_part();
                let rhs = (0..=k).fold(ZonalPoly::zero(), |acc, i| &acc + &jacobi(d, BiDegree::new(i, k - i)));
                assert_eq!(lhs, rhs, "d={d} k={k}");
            }
        }
    }

    #[test]
    fn lower_set_parsing_and_display() {
        let s: LowerSet = "cl{(5,0),(3,2),(2,3),(0,5)}".parse().unwrap();
        assert!(s.contains(BiDegree::new(3, 2)));
        assert!(!s.contains(BiDegree::new(4, 1)));
        assert_eq!(s.to_string(), "cl{(0,5),(2,3),(3,2),(5,0)}");
        assert_eq!("k+l<=2".parse::<LowerSet>().unwrap().len(), 6);
        assert!("{(1,0)}".parse::<LowerSet>().is_err());
        assert!(LowerSet::new([BiDegree::new(0, 0), BiDegree::new(0, 1)]).is_ok());
    }

    #[test]
    fn convolution_of_small_sets() {
        let u = [BiDegree::new(0, 0), BiDegree::new(1, 0)];
        let c = convolve(&u, &u);
        let expect: BTreeSet<_> =
            [BiDegree::new(0, 0), BiDegree::new(0, 1), BiDegree::new(1, 0), BiDegree::new(1, 1)].into_iter().collect();
        assert_eq!(c, expect);
    }

    #[test]
    fn rationalize_recovers_simple_fractions() {
        assert_eq!(rationalize(1.0 / 3.0), q(1, 3));
        assert_eq!(rationalize(-2.5), q(-5, 2));
        assert_eq!(rationalize(0.0), q(0, 1));
        let r = rationalize(std::f64::consts::SQRT_2);
        assert!((r.to_f64().unwrap() - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn parse_terms_roundtrip() {
        let f = jacobi(3, BiDegree::new(2, 1));
        assert_eq!(ZonalPoly::parse_terms(&f.to_terms_string()).unwrap(), f);
        assert!(matches!(ZonalPoly::parse_terms("1 0\n"), Err(Error::Parse { line: 1, .. })));
    }
}
