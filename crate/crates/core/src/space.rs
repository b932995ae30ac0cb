//! Finite point sets on the unit sphere `Ω(d) ⊂ ℂ^d`, their inner product
//! structure, and the plain-text point-set format.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::poly::BiDegree;

/// Default clustering radius for inner product values.
pub const DEFAULT_TOL: f64 = 1e-8;
const NORM_TOL: f64 = 1e-12;

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `e^{2πi j / n}`.
pub fn root_of_unity(n: u32, j: i64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (j.rem_euclid(n as i64) as f64) / n as f64)
}

/// A finite set of unit vectors in `ℂ^d`, stored row-major.
#[derive(Clone, Debug)]
pub struct PointSet {
    dim: usize,
    data: Vec<Complex64>,
    tol: f64,
}

impl PointSet {
    /// Validates unit norms and pairwise distinctness.
    pub fn new(dim: usize, points: Vec<Vec<Complex64>>, tol: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidPointSet("dimension must be positive".into()));
        }
        let mut data = Vec::with_capacity(points.len() * dim);
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::InvalidPointSet(format!("point {i} has {} coordinates, expected {dim}", p.len())));
            }
            if p.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                return Err(Error::InvalidPointSet(format!("point {i} has a non-finite coordinate")));
            }
            let n2: f64 = p.iter().map(|c| c.norm_sqr()).sum();
            if (n2.sqrt() - 1.0).abs() > NORM_TOL {
                return Err(Error::InvalidPointSet(format!("point {i} has norm {}", n2.sqrt())));
            }
            data.extend_from_slice(p);
        }
        let set = PointSet { dim, data, tol };
        set.check_distinct()?;
        Ok(set)
    }

    /// Normalises every vector before validation.
    pub fn normalized(dim: usize, points: Vec<Vec<Complex64>>, tol: f64) -> Result<Self> {
        let points = points
            .into_iter()
            .map(|p| {
                let n = p.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                p.into_iter().map(|c| c / n).collect()
            })
            .collect();
        PointSet::new(dim, points, tol)
    }

    /// Drops vectors equal (within `tol`) to an earlier one, then normalises.
    pub fn dedup_normalized(dim: usize, points: Vec<Vec<Complex64>>, tol: f64) -> Result<Self> {
        let mut kept: Vec<Vec<Complex64>> = Vec::new();
        let mut seen: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        for p in points {
            let n = p.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            let p: Vec<Complex64> = p.into_iter().map(|c| c / n).collect();
            let key = hash_key(&p);
            let dup = seen
                .get(&key)
                .map(|ids| ids.iter().any(|&i| dist(&kept[i], &p) <= tol.max(1e-9)))
                .unwrap_or(false);
            if !dup {
                seen.entry(key).or_default().push(kept.len());
                kept.push(p);
            }
        }
        PointSet::new(dim, kept, tol)
    }

    fn check_distinct(&self) -> Result<()> {
        let n = self.len();
        let tol = self.tol;
        let bad = (0..n).into_par_iter().find_map_any(|i| {
            (i + 1..n).find(|&j| dist(self.point(i), self.point(j)) <= tol).map(|j| (i, j))
        });
        match bad {
            Some((i, j)) => Err(Error::InvalidPointSet(format!("points {i} and {j} coincide within {tol}"))),
            None => Ok(()),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn point(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks(self.dim)
    }

    pub fn to_vecs(&self) -> Vec<Vec<Complex64>> {
        self.points().map(|p| p.to_vec()).collect()
    }

    /// `x_i^* x_j`.
    pub fn inner(&self, i: usize, j: usize) -> Complex64 {
        inner(self.point(i), self.point(j))
    }

    /// The Gram matrix `G_{ij} = x_i^* x_j`, row-major.
    pub fn gram(&self) -> Vec<Complex64> {
        let n = self.len();
        let mut g = vec![Complex64::new(0.0, 0.0); n * n];
        g.par_chunks_mut(n.max(1)).enumerate().for_each(|(i, row)| {
            let xi = self.point(i);
            for (j, v) in row.iter_mut().enumerate() {
                *v = inner(xi, self.point(j));
            }
        });
        g
    }

    /// `φ(x) = (Re x_1, Im x_1, …, Re x_d, Im x_d)`.
    pub fn embed_real(&self, i: usize) -> Vec<f64> {
        self.point(i).iter().flat_map(|c| [c.re, c.im]).collect()
    }

    /// Applies `x ↦ U x` to every point.
    pub fn apply_unitary(&self, u: &DMatrix<Complex64>) -> Result<PointSet> {
        if u.nrows() != self.dim || u.ncols() != self.dim {
            return Err(invalid("unitary has the wrong shape"));
        }
        let pts = self.points().map(|p| (0..self.dim).map(|r| (0..self.dim).map(|c| u[(r, c)] * p[c]).sum()).collect()).collect();
        PointSet::normalized(self.dim, pts, self.tol)
    }

    /// Subset by index list.
    pub fn subset(&self, idx: &[usize]) -> Result<PointSet> {
        PointSet::new(self.dim, idx.iter().map(|&i| self.point(i).to_vec()).collect(), self.tol)
    }
}

pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

fn dist(x: &[Complex64], y: &[Complex64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
}

/// Coordinates rounded to six decimals; used for dedup buckets.
pub(crate) fn hash_key(p: &[Complex64]) -> Vec<i64> {
    p.iter().flat_map(|c| [(c.re * 1e6).round() as i64, (c.im * 1e6).round() as i64]).collect()
}

/// Distinct values of `x^* y` for `x ≠ y`, clustered, with ordered-pair counts.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AngleSet {
    pub values: Vec<Complex64>,
    pub counts: Vec<usize>,
    pub tol: f64,
}

impl AngleSet {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index of the value within `tol` of `z`.
    pub fn find(&self, z: Complex64, tol: f64) -> Option<usize> {
        self.values.iter().position(|v| (v - z).norm() <= tol)
    }

    /// Whether every value appears together with its conjugate.
    pub fn closed_under_conjugation(&self) -> bool {
        let tol = (self.tol * 10.0).max(1e-9);
        self.values.iter().all(|v| self.find(v.conj(), tol).is_some())
    }
}

/// Result of clustering all ordered pairs: relation `0` is the diagonal,
/// relation `i ≥ 1` collects pairs with `x^* y ≈ values[i]`.
#[derive(Clone, Debug)]
pub struct PairClusters {
    pub values: Vec<Complex64>,
    pub rel: Vec<u16>,
    pub n: usize,
}

impl PairClusters {
    pub fn relation(&self, x: usize, y: usize) -> usize {
        self.rel[x * self.n + y] as usize
    }

    pub fn counts(&self) -> Vec<usize> {
        let mut c = vec![0usize; self.values.len()];
        for &r in &self.rel {
            c[r as usize] += 1;
        }
        c
    }

    pub fn angle_set(&self, tol: f64) -> AngleSet {
        let counts = self.counts();
        AngleSet { values: self.values[1..].to_vec(), counts: counts[1..].to_vec(), tol }
    }
}

struct Cell {
    min: Complex64,
    max: Complex64,
    sum: Complex64,
    count: usize,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Canonical order on angle values: larger modulus first, then argument in `[0, 2π)`.
pub fn angle_sort_key(z: Complex64) -> (i64, i64) {
    let m = z.norm();
    let mut a = if m < 1e-6 { 0.0 } else { z.im.atan2(z.re) };
    if a < -1e-7 {
        a += 2.0 * PI;
    }
    if a < 0.0 || a > 2.0 * PI - 1e-7 {
        a = 0.0;
    }
    (-(m * 1e6).round() as i64, (a * 1e6).round() as i64)
}

/// Single-linkage clustering of off-diagonal inner products on a grid of
/// cell size `tol`; neighbouring cells merge when their bounding boxes lie
/// within `tol`.
pub fn cluster_pairs(x: &PointSet) -> Result<PairClusters> {
    let n = x.len();
    let tol = x.tol();
    let gram = x.gram();
    let cell_of = |z: Complex64| ((z.re / tol).floor() as i64, (z.im / tol).floor() as i64);
    let mut cells: HashMap<(i64, i64), usize> = HashMap::new();
    let mut info: Vec<Cell> = Vec::new();
    let mut keys: Vec<(i64, i64)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let z = gram[i * n + j];
            let key = cell_of(z);
            let id = *cells.entry(key).or_insert_with(|| {
                info.push(Cell { min: z, max: z, sum: Complex64::new(0.0, 0.0), count: 0 });
                keys.push(key);
                info.len() - 1
            });
            let c = &mut info[id];
            c.min = Complex64::new(c.min.re.min(z.re), c.min.im.min(z.im));
            c.max = Complex64::new(c.max.re.max(z.re), c.max.im.max(z.im));
            c.sum += z;
            c.count += 1;
        }
    }
    let mut parent: Vec<usize> = (0..info.len()).collect();
    for (id, key) in keys.iter().enumerate() {
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(&other) = cells.get(&(key.0 + dx, key.1 + dy)) {
                    let (a, b) = (&info[id], &info[other]);
                    let gx = (a.min.re - b.max.re).max(b.min.re - a.max.re).max(0.0);
                    let gy = (a.min.im - b.max.im).max(b.min.im - a.max.im).max(0.0);
                    if (gx * gx + gy * gy).sqrt() <= tol {
                        let (ra, rb) = (find(&mut parent, id), find(&mut parent, other));
                        parent[ra] = rb;
                    }
                }
            }
        }
    }
    let mut root_sum: HashMap<usize, (Complex64, usize)> = HashMap::new();
    for id in 0..info.len() {
        let r = find(&mut parent, id);
        let e = root_sum.entry(r).or_insert((Complex64::new(0.0, 0.0), 0));
        e.0 += info[id].sum;
        e.1 += info[id].count;
    }
    let mut roots: Vec<(usize, Complex64)> = root_sum.iter().map(|(r, (s, c))| (*r, s / *c as f64)).collect();
    roots.sort_by_key(|(_, v)| angle_sort_key(*v));
    if let Some((_, v)) = roots.iter().find(|(_, v)| (v - Complex64::new(1.0, 0.0)).norm() <= tol) {
        return Err(Error::InvalidPointSet(format!("two points have inner product {v}, indistinguishable from 1")));
    }
    let mut root_index = HashMap::new();
    for (idx, (r, _)) in roots.iter().enumerate() {
        root_index.insert(*r, idx + 1);
    }
    if roots.len() + 1 > u16::MAX as usize {
        return Err(Error::Numerical("too many distinct inner products".into()));
    }
    let cell_rel: Vec<u16> = (0..info.len()).map(|id| root_index[&find(&mut parent, id)] as u16).collect();
    let mut rel = vec![0u16; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                rel[i * n + j] = cell_rel[cells[&cell_of(gram[i * n + j])]];
            }
        }
    }
    let mut values = vec![Complex64::new(1.0, 0.0)];
    values.extend(roots.iter().map(|(_, v)| *v));
    Ok(PairClusters { values, rel, n })
}

/// `A(X)`: the clustered set of inner products between distinct points.
pub fn angle_set(x: &PointSet) -> Result<AngleSet> {
    Ok(cluster_pairs(x)?.angle_set(x.tol()))
}

/// `(1/|X|^2) Σ_{x,y} (x^* y)^k conj(x^* y)^l`.
pub fn moment(x: &PointSet, deg: BiDegree) -> Complex64 {
    let n = x.len();
    let s: Complex64 = (0..n)
        .into_par_iter()
        .map(|i| {
            let xi = x.point(i);
            (0..n)
                .map(|j| {
                    let z = inner(xi, x.point(j));
                    z.powu(deg.k) * z.conj().powu(deg.l)
                })
                .sum::<Complex64>()
        })
        .sum();
    s / (n * n) as f64
}

/// Haar-random unitary from the QR factorisation of a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<Complex64> {
    let mut gauss = || {
        let u1: f64 = rng.gen::<f64>().max(1e-300);
        let u2: f64 = rng.gen();
        (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
    };
    let m = DMatrix::from_fn(d, d, |_, _| Complex64::new(gauss(), gauss()));
    let qr = m.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut q = q;
    for j in 0..d {
        let rj = r[(j, j)];
        let ph = if rj.norm() > 0.0 { rj / rj.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Random unit vectors.
pub fn random_points<R: Rng + ?Sized>(d: usize, n: usize, rng: &mut R) -> Vec<Vec<Complex64>> {
    (0..n)
        .map(|_| {
            let v: Vec<Complex64> = (0..d).map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
            let nrm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            v.into_iter().map(|c| c / nrm).collect()
        })
        .collect()
}

/// Vectors `x_1..x_n ∈ ℂ^rank` with `x_i^* x_j = G_{ij}` for a Hermitian
/// positive semidefinite `G` of the given rank. Errors if `G` has a negative
/// eigenvalue or its rank differs from `rank`, both at `tol`.
pub fn psd_factor(g: &DMatrix<Complex64>, rank: usize, tol: f64) -> Result<Vec<Vec<Complex64>>> {
    let n = g.nrows();
    let eig = nalgebra::SymmetricEigen::new(g.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let scale = eig.eigenvalues.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    if eig.eigenvalues.iter().any(|&v| v < -tol * scale) {
        return Err(Error::Numerical("matrix is not positive semidefinite".into()));
    }
    let positive = eig.eigenvalues.iter().filter(|&&v| v > tol * scale).count();
    if positive != rank {
        return Err(Error::Numerical(format!("matrix has rank {positive}, expected {rank}")));
    }
    // G = U Λ U^*; rows of U√Λ give G_{ij} = u_i · conj(u_j), so conjugate them.
    Ok((0..n)
        .map(|i| {
            order[..rank]
                .iter()
                .map(|&k| (eig.eigenvectors[(i, k)] * eig.eigenvalues[k].sqrt()).conj())
                .collect()
        })
        .collect())
}

/// `{ω_n^j x : x ∈ L, 0 ≤ j < n}`, fibre by fibre.
pub fn antipodal_cover(l: &PointSet, n: u32) -> Result<PointSet> {
    if n == 0 {
        return Err(invalid("cover order must be positive"));
    }
    let mut pts = Vec::with_capacity(l.len() * n as usize);
    for p in l.points() {
        for j in 0..n {
            let w = root_of_unity(n, j as i64);
            pts.push(p.iter().map(|c| c * w).collect());
        }
    }
    PointSet::new(l.dim(), pts, l.tol())
}

/// Largest `n` such that `X` is `n`-antipodal: the unit-modulus inner
/// products, together with 1, are exactly the `n`-th roots of unity and
/// every point meets each of them once.
pub fn detect_antipodal(x: &PointSet) -> Result<u32> {
    let pc = cluster_pairs(x)?;
    let tol = (x.tol() * 10.0).max(1e-9);
    let unit: Vec<usize> = (1..pc.values.len()).filter(|&i| (pc.values[i].norm() - 1.0).abs() <= tol).collect();
    let n = unit.len() as u32 + 1;
    if n == 1 {
        return Ok(1);
    }
    for &i in &unit {
        let v = pc.values[i];
        let ok = (1..n).any(|j| (root_of_unity(n, j as i64) - v).norm() <= tol);
        if !ok {
            return Ok(1);
        }
    }
    let counts = pc.counts();
    if unit.iter().all(|&i| counts[i] == x.len()) {
        Ok(n)
    } else {
        Ok(1)
    }
}

/// Partitions an `n`-antipodal set into fibres `{ω^j x}`, in order of first appearance.
pub fn fibers(x: &PointSet, n: u32) -> Result<Vec<Vec<usize>>> {
    let tol = (x.tol() * 10.0).max(1e-9);
    let mut assigned = vec![false; x.len()];
    let mut out = Vec::new();
    for i in 0..x.len() {
        if assigned[i] {
            continue;
        }
        let mut fib = vec![i];
        assigned[i] = true;
        for j in i + 1..x.len() {
            if !assigned[j] && (x.inner(i, j).norm() - 1.0).abs() <= tol {
                assigned[j] = true;
                fib.push(j);
            }
        }
        if fib.len() != n as usize {
            return Err(invalid(format!("fibre of point {i} has {} members, expected {n}", fib.len())));
        }
        out.push(fib);
    }
    Ok(out)
}

/// Representatives of the fibres of an `n`-antipodal set.
pub fn fiber_representatives(x: &PointSet, n: u32) -> Result<PointSet> {
    let reps: Vec<usize> = fibers(x, n)?.iter().map(|f| f[0]).collect();
    x.subset(&reps)
}

/// Writes the plain-text point-set format:
///
/// ```text
/// dimension = 2
/// tolerance = 1e-8
/// points:
/// <re> <im> <re> <im>
/// ```
pub fn write_point_set(x: &PointSet) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "dimension = {}", x.dim());
    let _ = writeln!(s, "tolerance = {:e}", x.tol());
    let _ = writeln!(s, "count = {}", x.len());
    s.push_str("points:\n");
    for p in x.points() {
        let row: Vec<String> = p.iter().map(|c| format!("{:.17e} {:.17e}", c.re, c.im)).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

/// Parses the format written by [`write_point_set`]. `#` starts a comment.
pub fn read_point_set(text: &str) -> Result<PointSet> {
    let mut dim: Option<usize> = None;
    let mut tol = DEFAULT_TOL;
    let mut count: Option<usize> = None;
    let mut in_points = false;
    let mut pts: Vec<Vec<Complex64>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if in_points {
            let d = dim.ok_or_else(|| err("points before dimension".into()))?;
            let nums: Vec<f64> = line
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|_| err(format!("bad number {t:?}"))))
                .collect::<Result<_>>()?;
            if nums.len() != 2 * d {
                return Err(err(format!("expected {} numbers, found {}", 2 * d, nums.len())));
            }
            pts.push(nums.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect());
            continue;
        }
        if line == "points:" {
            in_points = true;
            continue;
        }
        let (key, val) = line.split_once('=').ok_or_else(|| err(format!("expected `key = value`, found {line:?}")))?;
        let (key, val) = (key.trim(), val.trim());
        match key {
            "dimension" => dim = Some(val.parse().map_err(|_| err(format!("bad dimension {val:?}")))?),
            "tolerance" => tol = val.parse().map_err(|_| err(format!("bad tolerance {val:?}")))?,
            "count" => count = Some(val.parse().map_err(|_| err(format!("bad count {val:?}")))?),
            _ => return Err(err(format!("unknown field {key:?}"))),
        }
    }
    let dim = dim.ok_or_else(|| Error::Parse { line: 0, msg: "missing dimension".into() })?;
    if let Some(c) = count {
        if c != pts.len() {
            return Err(Error::Parse { line: 0, msg: format!("count says {c} points, found {}", pts.len()) });
        }
    }
    PointSet::new(dim, pts, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn basis(d: usize) -> PointSet {
        let pts = (0..d).map(|i| (0..d).map(|j| c64(if i == j { 1.0 } else { 0.0 }, 0.0)).collect()).collect();
        PointSet::new(d, pts, DEFAULT_TOL).unwrap()
    }

    #[test]
    fn rejects_bad_input() {
        assert!(PointSet::new(2, vec![vec![c64(1.0, 0.0)]], DEFAULT_TOL).is_err());
        assert!(PointSet::new(1, vec![vec![c64(0.5, 0.0)]], DEFAULT_TOL).is_err());
        assert!(PointSet::new(1, vec![vec![c64(1.0, 0.0)], vec![c64(1.0, 0.0)]], DEFAULT_TOL).is_err());
        assert!(PointSet::new(1, vec![vec![c64(f64::NAN, 0.0)]], DEFAULT_TOL).is_err());
    }

    #[test]
    fn real_embedding_preserves_real_part_of_inner_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = PointSet::new(3, random_points(3, 4, &mut rng), DEFAULT_TOL).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let a = x.embed_real(i);
                let b = x.embed_real(j);
                let dot: f64 = a.iter().zip(&b).map(|(p, q)| p * q).sum();
                assert!((dot - x.inner(i, j).re).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn cross_polytope_angles() {
        let x = antipodal_cover(&basis(3), 2).unwrap();
        let a = angle_set(&x).unwrap();
        assert_eq!(a.len(), 2);
        assert!((a.values[0] + 1.0).norm() < 1e-12);
        assert!(a.values[1].norm() < 1e-12);
        assert_eq!(a.counts, vec![6, 24]);
        assert_eq!(detect_antipodal(&x).unwrap(), 2);
        assert_eq!(fibers(&x, 2).unwrap().len(), 3);
    }

    #[test]
    fn detect_antipodal_order_three() {
        let x = antipodal_cover(&basis(2), 3).unwrap();
        assert_eq!(detect_antipodal(&x).unwrap(), 3);
        assert_eq!(detect_antipodal(&basis(2)).unwrap(), 1);
    }

    #[test]
    fn moment_of_cross_polytope() {
        for d in 2..7 {
            let x = antipodal_cover(&basis(d), 2).unwrap();
            let m = moment(&x, BiDegree::new(1, 1));
            assert!((m.re - 1.0 / d as f64).abs() < 1e-12 && m.im.abs() < 1e-12);
        }
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u = random_unitary(4, &mut rng);
        let p = u.adjoint() * &u;
        for i in 0..4 {
            for j in 0..4 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((p[(i, j)] - c64(e, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn unitary_preserves_angle_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = antipodal_cover(&basis(3), 4).unwrap();
        let y = x.apply_unitary(&random_unitary(3, &mut rng)).unwrap();
        let (a, b) = (angle_set(&x).unwrap(), angle_set(&y).unwrap());
        assert_eq!(a.counts, b.counts);
        for (p, q) in a.values.iter().zip(&b.values) {
            assert!((p - q).norm() < 1e-9);
        }
    }

    #[test]
    fn file_format_roundtrip_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = PointSet::new(3, random_points(3, 5, &mut rng), 1e-7).unwrap();
        let y = read_point_set(&write_point_set(&x)).unwrap();
        assert_eq!(x.to_vecs(), y.to_vecs());
        assert_eq!(y.tol(), 1e-7);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "dimension = 1\npoints:\n1 0\n0.5 x\n";
        match read_point_set(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(read_point_set("dimension = 2\nfoo = 1\n"), Err(Error::Parse { line: 2, .. })));
    }
}
