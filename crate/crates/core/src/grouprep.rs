//! Finite subgroups of `U(d)`, their orbits, and invariant dimensions of
//! `Hom(k,l)` and `Harm(k,l)` via Molien series.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::poly::{convolve, harm_dim, BiDegree, LowerSet};
use crate::space::{c64, root_of_unity, PointSet};

/// Default bound on the number of group elements enumerated by [`close_group`].
pub const DEFAULT_GROUP_CAP: usize = 100_000;
const UNITARY_TOL: f64 = 1e-10;
const MATCH_TOL: f64 = 1e-8;
const DRIFT_TOL: f64 = 1e-6;

pub type CMatrix = DMatrix<Complex64>;

/// A finite group of unitary matrices, stored as a full element list.
#[derive(Clone, Debug)]
pub struct FiniteUnitaryGroup {
    dim: usize,
    elements: Vec<CMatrix>,
    generators: Vec<CMatrix>,
    pub label: String,
}

impl FiniteUnitaryGroup {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    /// Whether `m` is an element, up to [`MATCH_TOL`] entrywise.
    pub fn contains(&self, m: &CMatrix) -> bool {
        self.elements.iter().any(|g| max_diff(g, m) <= MATCH_TOL)
    }
}

fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn matrix_key(m: &CMatrix) -> Vec<i64> {
    m.iter().flat_map(|c| [(c.re * 1e6).round() as i64, (c.im * 1e6).round() as i64]).collect()
}

fn check_unitary(g: &CMatrix) -> Result<()> {
    if !g.is_square() {
        return Err(invalid("generator is not square"));
    }
    let n = g.nrows();
    let dev = max_diff(&(g.adjoint() * g), &CMatrix::identity(n, n));
    if dev > UNITARY_TOL {
        return Err(invalid(format!("generator is not unitary (deviation {dev:.2e})")));
    }
    Ok(())
}

/// Breadth-first closure of `⟨generators⟩`.
///
/// Elements are bucketed by entries rounded to six decimals and compared at
/// full tolerance inside a bucket; the neighbouring bucket keys of a new
/// element are not probed, so generators must be accurate to well below
/// `1e-6`.
pub fn close_group(generators: Vec<CMatrix>, cap: usize, label: impl Into<String>) -> Result<FiniteUnitaryGroup> {
    let dim = generators.first().map(|g| g.nrows()).ok_or_else(|| invalid("at least one generator is required"))?;
    for g in &generators {
        if g.nrows() != dim {
            return Err(invalid("generators have different sizes"));
        }
        check_unitary(g)?;
    }
    let id = CMatrix::identity(dim, dim);
    let mut elements = vec![id.clone()];
    let mut index: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    index.entry(matrix_key(&id)).or_default().push(0);
    let mut frontier = 0;
    while frontier < elements.len() {
        let h = elements[frontier].clone();
        frontier += 1;
        for g in &generators {
            let p = g * &h;
            let key = matrix_key(&p);
            let known = index
                .get(&key)
                .map(|ids| ids.iter().any(|&i| max_diff(&elements[i], &p) <= MATCH_TOL))
                .unwrap_or(false);
            if !known {
                if elements.len() >= cap {
                    return Err(Error::GroupTooLarge { cap });
                }
                index.entry(key).or_default().push(elements.len());
                elements.push(p);
            }
        }
    }
    Ok(FiniteUnitaryGroup { dim, elements, generators, label: label.into() })
}

/// Cyclic shift `(δ_{i+1,j})`.
pub fn shift_matrix(d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |i, j| if (i + 1) % d == j { c64(1.0, 0.0) } else { c64(0.0, 0.0) })
}

/// `diag(1, w, …, w^{d-1})` with `w = e^{2πi/d}`.
pub fn clock_matrix(d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |i, j| if i == j { root_of_unity(d as u32, i as i64) } else { c64(0.0, 0.0) })
}

/// `⟨P_x, P_z⟩ ⊂ U(d)`; order `d^3` (order 8 for `d = 2`, where `-I` appears).
pub fn pauli_group(d: usize) -> Result<FiniteUnitaryGroup> {
    if d == 0 {
        return Err(invalid("dimension must be positive"));
    }
    close_group(vec![shift_matrix(d), clock_matrix(d)], DEFAULT_GROUP_CAP, format!("pauli {d}"))
}

/// `⟨P_x, P_z, iI⟩ ⊂ U(2)`, the group whose orbit gives the 16-point SIC cover.
pub fn sic_d2_group() -> FiniteUnitaryGroup {
    let i = CMatrix::identity(2, 2) * c64(0.0, 1.0);
    close_group(vec![shift_matrix(2), clock_matrix(2), i], DEFAULT_GROUP_CAP, "sic-d2-group")
        .expect("small Pauli group closes")
}

/// Three-qubit Pauli group with phases: `P_x`, `P_z` on each tensor factor and `iI`.
pub fn hoggar_group() -> FiniteUnitaryGroup {
    let id2 = CMatrix::identity(2, 2);
    let mut gens = Vec::new();
    for site in 0..3 {
        for p in [shift_matrix(2), clock_matrix(2)] {
            let factors: Vec<&CMatrix> = (0..3).map(|s| if s == site { &p } else { &id2 }).collect();
            gens.push(factors[0].kronecker(factors[1]).kronecker(factors[2]));
        }
    }
    gens.push(CMatrix::identity(8, 8) * c64(0.0, 1.0));
    close_group(gens, DEFAULT_GROUP_CAP, "hoggar-group").expect("three-qubit Pauli group closes")
}

/// The trivial group in `U(d)`.
pub fn trivial_group(d: usize) -> FiniteUnitaryGroup {
    close_group(vec![CMatrix::identity(d, d)], 1, "trivial").expect("identity closes")
}

/// Named built-ins: `pauli <d>`, `sic-d2-group`, `hoggar-group`, `trivial <d>`.
pub fn builtin_group(name: &str, param: Option<usize>) -> Result<FiniteUnitaryGroup> {
    match (name, param) {
        ("pauli", Some(d)) => pauli_group(d),
        ("trivial", Some(d)) if d > 0 => Ok(trivial_group(d)),
        ("sic-d2-group", _) => Ok(sic_d2_group()),
        ("hoggar-group", _) => Ok(hoggar_group()),
        _ => Err(invalid(format!("unknown group `{name}` (expected pauli <d>, trivial <d>, sic-d2-group, hoggar-group)"))),
    }
}

/// Reads generator matrices: a `dimension = d` header, then `d` rows per
/// matrix, each row holding `d` pairs of real and imaginary parts.
/// Blank lines and `#` comments are ignored.
pub fn read_generators(text: &str) -> Result<Vec<CMatrix>> {
    let mut dim: Option<usize> = None;
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("dimension") {
            let v = rest.trim_start_matches([' ', '=']).trim();
            dim = Some(v.parse().map_err(|_| Error::Parse { line: line_no, msg: format!("bad dimension `{v}`") })?);
            continue;
        }
        if line.ends_with(':') {
            continue;
        }
        let d = dim.ok_or(Error::Parse { line: line_no, msg: "matrix row before dimension header".into() })?;
        let nums: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|_| Error::Parse { line: line_no, msg: format!("bad number `{t}`") }))
            .collect::<Result<_>>()?;
        if nums.len() != 2 * d {
            return Err(Error::Parse { line: line_no, msg: format!("expected {} numbers, found {}", 2 * d, nums.len()) });
        }
        rows.push(nums.chunks(2).map(|p| c64(p[0], p[1])).collect());
    }
    let d = dim.ok_or(Error::Parse { line: 0, msg: "missing dimension header".into() })?;
    if rows.is_empty() || rows.len() % d != 0 {
        return Err(Error::Parse { line: 0, msg: format!("{} rows do not form whole {d}x{d} matrices", rows.len()) });
    }
    Ok(rows.chunks(d).map(|block| CMatrix::from_fn(d, d, |i, j| block[i][j])).collect())
}

/// `Gx`, deduplicated at `tol`.
pub fn orbit(g: &FiniteUnitaryGroup, x: &[Complex64], tol: f64) -> Result<PointSet> {
    if x.len() != g.dim {
        return Err(invalid(format!("vector has {} coordinates, group acts on ℂ^{}", x.len(), g.dim)));
    }
    let v = nalgebra::DVector::from_column_slice(x);
    let pts: Vec<Vec<Complex64>> = g.elements.iter().map(|m| (m * &v).iter().copied().collect()).collect();
    PointSet::dedup_normalized(g.dim, pts, tol)
}

/// Complete homogeneous symmetric functions `h_0..=h_n` of the eigenvalues
/// of `g`, from power sums `p_j = tr(g^j)` and `k h_k = Σ_{j=1}^k p_j h_{k-j}`.
pub fn complete_symmetric(g: &CMatrix, n: usize) -> Vec<Complex64> {
    let mut p = Vec::with_capacity(n + 1);
    p.push(c64(g.nrows() as f64, 0.0));
    let mut pow = g.clone();
    for _ in 1..=n {
        p.push(pow.trace());
        pow = &pow * g;
    }
    let mut h = vec![c64(1.0, 0.0)];
    for k in 1..=n {
        let s: Complex64 = (1..=k).map(|j| p[j] * h[k - j]).sum();
        h.push(s / k as f64);
    }
    h
}

/// Per-element `h_k` tables, shared by every series computation.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    order: usize,
    h: Vec<Vec<Complex64>>,
}

impl CharacterTable {
    pub fn new(g: &FiniteUnitaryGroup, n: usize) -> Self {
        let h = g.elements.par_iter().map(|m| complete_symmetric(m, n)).collect();
        CharacterTable { order: g.order(), h }
    }

    pub fn max_degree(&self) -> usize {
        self.h.first().map(|v| v.len() - 1).unwrap_or(0)
    }

    /// Group average of `f(h(g))`.
    fn average(&self, f: impl Fn(&[Complex64]) -> Complex64 + Sync) -> Complex64 {
        self.h.par_iter().map(|v| f(v)).sum::<Complex64>() / self.order as f64
    }

    /// Character of `Hom(k,l)` at element `e`.
    fn hom_char(h: &[Complex64], k: usize, l: usize) -> Complex64 {
        h[k] * h[l].conj()
    }

    fn harm_char(h: &[Complex64], k: usize, l: usize) -> Complex64 {
        let mut c = Self::hom_char(h, k, l);
        if k > 0 && l > 0 {
            c -= Self::hom_char(h, k - 1, l - 1);
        }
        c
    }
}

fn round_guarded(z: Complex64, what: &str) -> Result<i64> {
    let r = z.re.round();
    if (z.re - r).abs() > DRIFT_TOL || z.im.abs() > DRIFT_TOL {
        return Err(Error::Numerical(format!("{what} = {z} is not close to an integer")));
    }
    Ok(r as i64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MolienKind {
    HomInvariants,
    HarmInvariants,
}

/// `entries[k][l]` is an invariant dimension for `0 ≤ k ≤ kmax`, `0 ≤ l ≤ lmax`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MolienTable {
    pub kmax: u32,
    pub lmax: u32,
    pub kind: MolienKind,
    pub entries: Vec<Vec<i64>>,
}

impl MolienTable {
    pub fn get(&self, k: u32, l: u32) -> i64 {
        self.entries[k as usize][l as usize]
    }
}

/// `dim Hom(k,l)^G`, the coefficient of `x^k y^l` in the Molien series.
pub fn molien_hom(g: &FiniteUnitaryGroup, kmax: u32, lmax: u32) -> Result<MolienTable> {
    let table = CharacterTable::new(g, kmax.max(lmax) as usize);
    molien_hom_from(&table, kmax, lmax)
}

fn molien_hom_from(table: &CharacterTable, kmax: u32, lmax: u32) -> Result<MolienTable> {
    let mut entries = vec![vec![0; lmax as usize + 1]; kmax as usize + 1];
    for k in 0..=kmax as usize {
        for l in 0..=lmax as usize {
            let v = table.average(|h| CharacterTable::hom_char(h, k, l));
            entries[k][l] = round_guarded(v, &format!("dim Hom({k},{l})^G"))?;
        }
    }
    Ok(MolienTable { kmax, lmax, kind: MolienKind::HomInvariants, entries })
}

/// `dim Harm(k,l)^G`, computed as the difference of Hom entries and, separately,
/// from the `(1 - xy)`-weighted series; the two must agree.
pub fn molien_harm(g: &FiniteUnitaryGroup, kmax: u32, lmax: u32) -> Result<MolienTable> {
    let table = CharacterTable::new(g, kmax.max(lmax) as usize);
    let hom = molien_hom_from(&table, kmax, lmax)?;
    let mut entries = vec![vec![0; lmax as usize + 1]; kmax as usize + 1];
    for k in 0..=kmax as usize {
        for l in 0..=lmax as usize {
            let diff = hom.entries[k][l] - if k > 0 && l > 0 { hom.entries[k - 1][l - 1] } else { 0 };
            let direct = round_guarded(
                table.average(|h| CharacterTable::harm_char(h, k, l)),
                &format!("dim Harm({k},{l})^G"),
            )?;
            if diff != direct {
                return Err(Error::Numerical(format!(
                    "Harm({k},{l}) invariants: difference route gives {diff}, series route gives {direct}"
                )));
            }
            entries[k][l] = diff;
        }
    }
    Ok(MolienTable { kmax, lmax, kind: MolienKind::HarmInvariants, entries })
}

/// `(1/|G|) Σ |χ(g)|²` for the character of `Harm(k,l)`.
pub fn harm_character_norm(g: &FiniteUnitaryGroup, deg: BiDegree) -> Result<i64> {
    let table = CharacterTable::new(g, deg.k.max(deg.l) as usize);
    let (k, l) = (deg.k as usize, deg.l as usize);
    let v = table.average(|h| {
        let c = CharacterTable::harm_char(h, k, l);
        c64(c.norm_sqr(), 0.0)
    });
    round_guarded(v, &format!("character norm of Harm{deg}"))
}

/// `(1/|G|) Σ conj(χ_a(g)) χ_b(g)` for the characters of `Harm(a)` and `Harm(b)`;
/// for irreducible spaces this is 1 iff they are equivalent.
pub fn harm_character_inner(g: &FiniteUnitaryGroup, a: BiDegree, b: BiDegree) -> Result<i64> {
    let n = a.k.max(a.l).max(b.k).max(b.l) as usize;
    let table = CharacterTable::new(g, n);
    let v = table.average(|h| {
        CharacterTable::harm_char(h, a.k as usize, a.l as usize).conj() * CharacterTable::harm_char(h, b.k as usize, b.l as usize)
    });
    round_guarded(v, &format!("character inner product of Harm{a} and Harm{b}"))
}

/// Irreducibility of `G` on `Harm(k,l)`: character norm equal to one.
pub fn harm_irreducible(g: &FiniteUnitaryGroup, deg: BiDegree) -> Result<bool> {
    Ok(harm_character_norm(g, deg)? == 1)
}

/// Coefficient of `x^k z^k y^l w^l` in the four-variable Molien series,
/// i.e. `(1/|G|) Σ |h_k|² |h_l|²`.
pub fn molien_four_variable(g: &FiniteUnitaryGroup, deg: BiDegree) -> Result<i64> {
    let table = CharacterTable::new(g, deg.k.max(deg.l) as usize);
    let (k, l) = (deg.k as usize, deg.l as usize);
    let v = table.average(|h| c64(h[k].norm_sqr() * h[l].norm_sqr(), 0.0));
    round_guarded(v, &format!("four-variable coefficient at {deg}"))
}

/// True iff `Harm(k-i, l-i)` is irreducible and pairwise distinct for
/// `0 ≤ i ≤ min(k,l)`, read off the four-variable series.
pub fn harm_chain_irreducible(g: &FiniteUnitaryGroup, deg: BiDegree) -> Result<bool> {
    Ok(molien_four_variable(g, deg)? == deg.k.min(deg.l) as i64 + 1)
}

/// What the representation theory of `G` guarantees about every orbit `Gx`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitDesignReport {
    pub requested: LowerSet,
    /// Largest lower subset of `requested` with `Harm(k,l)^G = 0` off the origin.
    pub invariant_free: LowerSet,
    /// Largest lower subset of `requested` on which the nonzero `Harm(k,l)` are
    /// irreducible and pairwise inequivalent.
    pub irreducible: LowerSet,
    /// `invariant_free ∪ cl(irreducible * irreducible)`.
    pub guaranteed: LowerSet,
    pub u_design_guaranteed: bool,
    pub uu_design_guaranteed: bool,
}

fn largest_lower_subset(u: &LowerSet, pass: impl Fn(BiDegree) -> bool) -> LowerSet {
    let mut map = std::collections::BTreeMap::new();
    for d in u.iter() {
        map.insert(d, d == BiDegree::ZERO || pass(d));
    }
    crate::design::strength_from_passes(&map)
}

/// Orbit-design guarantees for `U`: vanishing invariants give a `U`-design,
/// irreducibility gives a `U*U`-design.
pub fn orbit_design_strength(g: &FiniteUnitaryGroup, u: &LowerSet) -> Result<OrbitDesignReport> {
    let kmax = u.iter().map(|d| d.k).max().unwrap_or(0);
    let lmax = u.iter().map(|d| d.l).max().unwrap_or(0);
    let harm = molien_harm(g, kmax, lmax)?;
    let d = g.dim() as u32;
    let invariant_free = largest_lower_subset(u, |deg| harm.get(deg.k, deg.l) == 0);
    // The U*U argument needs the spaces in U irreducible and pairwise
    // inequivalent; for d=2 Pauli, Harm(1,0) and Harm(0,1) are equivalent.
    let mut degs: Vec<BiDegree> = u.iter().collect();
    degs.sort_by_key(|g| (g.total(), g.k));
    let mut kept: Vec<BiDegree> = Vec::new();
    for deg in degs {
        let lower_ok = (deg.k == 0 || kept.contains(&BiDegree::new(deg.k - 1, deg.l)))
            && (deg.l == 0 || kept.contains(&BiDegree::new(deg.k, deg.l - 1)));
        if !lower_ok {
            continue;
        }
        // A zero space carries no representation, so it counts as neither.
        let ok = deg == BiDegree::ZERO
            || (harm_dim(d, deg) > 0
                && harm_irreducible(g, deg)?
                && kept.iter().try_fold(true, |acc, &o| Ok::<_, Error>(acc && harm_character_inner(g, o, deg)? == 0))?);
        if ok {
            kept.push(deg);
        }
    }
    let irreducible = LowerSet::new(kept)?;
    let squared = LowerSet::closure(convolve(irreducible.members(), irreducible.members()));
    let guaranteed = invariant_free.union(&squared);
    Ok(OrbitDesignReport {
        requested: u.clone(),
        u_design_guaranteed: invariant_free == *u,
        uu_design_guaranteed: irreducible == *u,
        invariant_free,
        irreducible,
        guaranteed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::is_design;
    use crate::poly::hom_dim;
    use crate::space::random_points;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pauli_orders() {
        assert_eq!(pauli_group(2).unwrap().order(), 8);
        assert_eq!(pauli_group(3).unwrap().order(), 27);
        assert_eq!(sic_d2_group().order(), 16);
        assert_eq!(trivial_group(3).order(), 1);
        let x = shift_matrix(3);
        let z = clock_matrix(3);
        let w = root_of_unity(3, 1);
        assert!(max_diff(&(&x * &z), &(&z * &x * w)) < 1e-12);
    }

    #[test]
    fn closure_rejects_non_unitary_and_caps() {
        let bad = CMatrix::identity(2, 2) * c64(2.0, 0.0);
        assert!(close_group(vec![bad], 10, "bad").is_err());
        let r = close_group(vec![clock_matrix(7)], 3, "cyclic");
        assert!(matches!(r, Err(Error::GroupTooLarge { cap: 3 })));
    }

    #[test]
    fn generator_order_does_not_matter() {
        let a = close_group(vec![shift_matrix(3), clock_matrix(3)], 1000, "a").unwrap();
        let b = close_group(vec![clock_matrix(3), shift_matrix(3)], 1000, "b").unwrap();
        assert_eq!(a.order(), b.order());
        assert!(b.elements().iter().all(|m| a.contains(m)));
    }

    #[test]
    fn trivial_group_gives_full_dimensions() {
        for d in 1..=4usize {
            let t = molien_hom(&trivial_group(d), 4, 4).unwrap();
            for k in 0..=4 {
                for l in 0..=4 {
                    assert_eq!(t.get(k, l) as u64, hom_dim(d as u32, BiDegree::new(k, l)));
                }
            }
            let h = molien_harm(&trivial_group(d), 3, 3).unwrap();
            assert_eq!(h.get(2, 1) as u64, harm_dim(d as u32, BiDegree::new(2, 1)));
        }
    }

    #[test]
    fn pauli_two_invariants() {
        let g = pauli_group(2).unwrap();
        let hom = molien_hom(&g, 3, 3).unwrap();
        assert_eq!(hom.get(0, 0), 1);
        assert_eq!(hom.get(1, 1), 1);
        let harm = molien_harm(&g, 3, 3).unwrap();
        for (k, l) in [(1, 0), (0, 1), (1, 1)] {
            assert_eq!(harm.get(k, l), 0);
        }
        assert!(harm_irreducible(&g, BiDegree::new(1, 0)).unwrap());
        assert!(harm_irreducible(&g, BiDegree::new(0, 1)).unwrap());
        assert_eq!(harm_character_norm(&g, BiDegree::new(1, 1)).unwrap(), 3);
        assert!(!harm_irreducible(&trivial_group(2), BiDegree::new(1, 0)).unwrap());
    }

    #[test]
    fn minus_identity_kills_odd_degrees() {
        let g = close_group(vec![CMatrix::identity(3, 3) * c64(-1.0, 0.0), shift_matrix(3)], 100, "g").unwrap();
        let harm = molien_harm(&g, 3, 3).unwrap();
        for k in 0..=3 {
            for l in 0..=3 {
                if (k + l) % 2 == 1 {
                    assert_eq!(harm.get(k, l), 0);
                }
            }
        }
    }

    #[test]
    fn four_variable_route_matches_character_norms() {
        let g = pauli_group(2).unwrap();
        // Harm(1,0) irreducible, so its chain is trivially distinct.
        assert!(harm_chain_irreducible(&g, BiDegree::new(1, 0)).unwrap());
        assert!(!harm_chain_irreducible(&g, BiDegree::new(1, 1)).unwrap());
        let hog = hoggar_group();
        assert_eq!(hog.order(), 256);
        assert!(harm_chain_irreducible(&hog, BiDegree::new(1, 0)).unwrap());
    }

    #[test]
    fn random_pauli_orbits_are_two_designs() {
        let g = pauli_group(3).unwrap();
        let u = LowerSet::total_degree(1);
        let rep = orbit_design_strength(&g, &u).unwrap();
        assert!(rep.u_design_guaranteed && rep.uu_design_guaranteed);
        assert_eq!(rep.guaranteed, LowerSet::total_degree(2));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for x in random_points(3, 5, &mut rng) {
            let o = orbit(&g, &x, 1e-8).unwrap();
            assert!(is_design(&o, &rep.guaranteed, 1e-9));
        }
        let triv = orbit_design_strength(&trivial_group(2), &u).unwrap();
        assert_eq!(triv.guaranteed, LowerSet::total_degree(0));
    }

    #[test]
    fn real_pauli_group_gets_no_second_order_guarantee() {
        let g = pauli_group(2).unwrap();
        let (a, b) = (BiDegree::new(1, 0), BiDegree::new(0, 1));
        assert!(harm_irreducible(&g, a).unwrap() && harm_irreducible(&g, b).unwrap());
        assert_eq!(harm_character_inner(&g, a, b).unwrap(), 1);
        let rep = orbit_design_strength(&g, &LowerSet::total_degree(1)).unwrap();
        assert!(!rep.uu_design_guaranteed);
        assert!(!rep.guaranteed.contains(BiDegree::new(2, 0)));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let o = orbit(&g, &random_points(2, 1, &mut rng)[0], 1e-8).unwrap();
        assert!(is_design(&o, &rep.guaranteed, 1e-9));
        assert!(!is_design(&o, &LowerSet::total_degree(2), 1e-7));
    }

    #[test]
    fn generator_file_roundtrip() {
        let text = "dimension = 2\n# Pauli X\n0 0 1 0\n1 0 0 0\n\n1 0 0 0\n0 0 -1 0\n";
        let gens = read_generators(text).unwrap();
        assert_eq!(gens.len(), 2);
        assert_eq!(close_group(gens, 100, "file").unwrap().order(), 8);
        assert!(matches!(read_generators("dimension = 2\n0 0 1\n"), Err(Error::Parse { line: 2, .. })));
    }
}
