//! Association schemes carried by inner-product relations: exact closure
//! verification, eigenmatrices, Krein parameters, fusion and quotient
//! schemes, Jacobi-matrix criteria and the embedding of a scheme back into
//! the sphere.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::design::{is_design, strength_from_passes};
use crate::error::{invalid, Error, Result};
use crate::poly::{binomial, convolve, jacobi, leading_coeff, BiDegree, LowerSet};
use num_traits::ToPrimitive;
use crate::space::{cluster_pairs, psd_factor, PointSet};

/// Eigenvalues closer than this (relative) are treated as one eigenspace.
pub const EIGEN_CLUSTER_TOL: f64 = 1e-6;
/// Tolerance for floating identities of eigenmatrices and Krein parameters.
pub const SCHEME_FLOAT_TOL: f64 = 1e-8;

const ANGLE_MATCH_TOL: f64 = 1e-6;
const EIGEN_SEED: u64 = 0x5eed_0f_5c4e3e;

type CMatrix = DMatrix<Complex64>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// A partition of `X × X` into relations, relation `0` being the diagonal.
#[derive(Clone, Debug)]
pub struct RelationPartition {
    n: usize,
    rel: Vec<u16>,
    transpose: Vec<usize>,
    angles: Option<Vec<Complex64>>,
}

impl RelationPartition {
    /// Relations `R_i = {(x,y) : x^* y = α_i}` with `α_0 = 1`, angles in canonical order.
    pub fn from_points(x: &PointSet) -> Result<Self> {
        let pc = cluster_pairs(x)?;
        Self::build(pc.n, pc.rel, Some(pc.values))
    }

    /// As [`from_points`](Self::from_points) but with relation `i` carrying
    /// the given `order[i]`; `order[0]` must be `1` and every clustered angle
    /// must appear exactly once.
    pub fn from_points_ordered(x: &PointSet, order: &[Complex64]) -> Result<Self> {
        let pc = cluster_pairs(x)?;
        if order.len() != pc.values.len() {
            return Err(invalid(format!("{} angles supplied, point set has {}", order.len(), pc.values.len())));
        }
        if (order[0] - c(1.0)).norm() > ANGLE_MATCH_TOL {
            return Err(invalid("the first angle must be 1"));
        }
        let mut map = vec![usize::MAX; pc.values.len()];
        for (old, v) in pc.values.iter().enumerate() {
            let hits: Vec<usize> = (0..order.len()).filter(|&i| (order[i] - v).norm() <= ANGLE_MATCH_TOL).collect();
            if hits.len() != 1 {
                return Err(invalid(format!("angle {v} matches {} supplied values", hits.len())));
            }
            map[old] = hits[0];
        }
        let mut seen = vec![false; order.len()];
        for &m in &map {
            if std::mem::replace(&mut seen[m], true) {
                return Err(invalid("supplied angles are not distinct"));
            }
        }
        let rel = pc.rel.iter().map(|&r| map[r as usize] as u16).collect();
        Self::build(pc.n, rel, Some(order.to_vec()))
    }

    /// An abstract partition from a full `n × n` relation table.
    pub fn from_table(n: usize, table: &[usize]) -> Result<Self> {
        if table.len() != n * n {
            return Err(invalid("relation table must be n × n"));
        }
        if table.iter().any(|&r| r > u16::MAX as usize) {
            return Err(invalid("too many relations"));
        }
        Self::build(n, table.iter().map(|&r| r as u16).collect(), None)
    }

    fn build(n: usize, rel: Vec<u16>, angles: Option<Vec<Complex64>>) -> Result<Self> {
        if n == 0 {
            return Err(invalid("empty relation table"));
        }
        let count = rel.iter().map(|&r| r as usize + 1).max().unwrap_or(1);
        let mut used = vec![false; count];
        let mut transpose = vec![usize::MAX; count];
        for x in 0..n {
            for y in 0..n {
                let r = rel[x * n + y] as usize;
                if (r == 0) != (x == y) {
                    return Err(invalid(format!("relation 0 must be exactly the diagonal (pair {x},{y})")));
                }
                used[r] = true;
                let t = rel[y * n + x] as usize;
                if transpose[r] == usize::MAX {
                    transpose[r] = t;
                } else if transpose[r] != t {
                    return Err(invalid(format!("relation {r} has no well-defined transpose")));
                }
            }
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(invalid(format!("relation {i} is empty")));
        }
        if let Some(a) = &angles {
            if a.len() != count {
                return Err(invalid("angle list does not match the relations"));
            }
        }
        Ok(RelationPartition { n, rel, transpose, angles })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of relations including the diagonal, `s + 1`.
    pub fn num_relations(&self) -> usize {
        self.transpose.len()
    }

    pub fn relation(&self, x: usize, y: usize) -> usize {
        self.rel[x * self.n + y] as usize
    }

    pub fn transpose(&self, i: usize) -> usize {
        self.transpose[i]
    }

    pub fn angles(&self) -> Option<&[Complex64]> {
        self.angles.as_deref()
    }

    /// The partition obtained by merging relations block by block.
    pub fn merged(&self, blocks: &[Vec<usize>]) -> Result<Self> {
        let map = block_map(blocks, self.num_relations())?;
        let rel = self.rel.iter().map(|&r| map[r as usize] as u16).collect();
        Self::build(self.n, rel, None)
    }

    /// `k_i(x)` for every point and relation.
    pub fn valency_table(&self) -> Vec<Vec<u64>> {
        let s1 = self.num_relations();
        (0..self.n)
            .map(|x| {
                let mut row = vec![0u64; s1];
                for y in 0..self.n {
                    row[self.relation(x, y)] += 1;
                }
                row
            })
            .collect()
    }
}

fn block_map(blocks: &[Vec<usize>], size: usize) -> Result<Vec<usize>> {
    let mut map = vec![usize::MAX; size];
    for (b, block) in blocks.iter().enumerate() {
        if block.is_empty() {
            return Err(invalid("empty block in partition"));
        }
        for &i in block {
            if i >= size {
                return Err(invalid(format!("index {i} out of range (size {size})")));
            }
            if map[i] != usize::MAX {
                return Err(invalid(format!("index {i} appears twice")));
            }
            map[i] = b;
        }
    }
    if map.iter().any(|&m| m == usize::MAX) {
        return Err(invalid("partition does not cover every index"));
    }
    if blocks[map[0]] != [0] {
        return Err(invalid("index 0 must form a block on its own"));
    }
    Ok(map)
}

/// Two pairs in the same relation `h` whose `(i,j)` path counts differ.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ClosureWitness {
    pub i: usize,
    pub j: usize,
    pub relation: usize,
    pub first: (usize, usize),
    pub first_count: u64,
    pub second: (usize, usize),
    pub second_count: u64,
}

/// Eigenmatrices of a commutative scheme. `p[j][i]` is the eigenvalue of
/// `A_i` on `E_j`, `q[i][j]` the coefficient of `A_i` in `|X| E_j`.
#[derive(Clone, Debug, Serialize)]
pub struct Eigenmatrices {
    pub p: Vec<Vec<Complex64>>,
    pub q: Vec<Vec<Complex64>>,
    pub multiplicities: Vec<usize>,
    /// `ĵ` with `E_ĵ = E_j^T`.
    pub idempotent_transpose: Vec<usize>,
    /// `krein[k][i][j] = q_{i,j}^k`.
    pub krein: Vec<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SchemeReport {
    pub n: usize,
    pub classes: usize,
    pub is_scheme: bool,
    pub symmetric: bool,
    pub inner_product_invariant: bool,
    pub commutative: bool,
    /// `closed[i][j]`: whether `A_i A_j` lies in the span of the `A_k`.
    pub closed: Vec<Vec<bool>>,
    pub witnesses: Vec<ClosureWitness>,
    pub transpose: Vec<usize>,
    pub valencies: Vec<u64>,
    /// `intersection[k][i][j] = p_{i,j}^k`, present when the relations form a scheme.
    pub intersection: Option<Vec<Vec<Vec<u64>>>>,
    pub angles: Option<Vec<Complex64>>,
    pub eigen: Option<Eigenmatrices>,
}

impl SchemeReport {
    pub fn p(&self, i: usize, j: usize, k: usize) -> Option<u64> {
        self.intersection.as_ref().map(|t| t[k][i][j])
    }

    /// Closure pattern as the list of `(i,j)` with `A_i A_j` in the span.
    pub fn closed_pairs(&self) -> Vec<(usize, usize)> {
        let s1 = self.closed.len();
        (0..s1).flat_map(|i| (0..s1).map(move |j| (i, j))).filter(|&(i, j)| self.closed[i][j]).collect()
    }
}

/// Path counts `c[i*s1+j] = #{z : rel(x,z)=i, rel(z,y)=j}`.
fn path_counts(rel: &[u16], relt: &[u16], n: usize, s1: usize, x: usize, y: usize, out: &mut [u32]) {
    out.iter_mut().for_each(|v| *v = 0);
    let row = &rel[x * n..(x + 1) * n];
    let col = &relt[y * n..(y + 1) * n];
    for z in 0..n {
        out[row[z] as usize * s1 + col[z] as usize] += 1;
    }
}

struct PairScan {
    bad: Vec<bool>,
    witness: Vec<Option<ClosureWitness>>,
}

/// Compares every pair's path counts against its relation representative on
/// the entries selected by `mask`.
fn scan_pairs(rp: &RelationPartition, reps: &[(usize, usize)], tables: &[Vec<u32>], mask: &[bool]) -> PairScan {
    let (n, s1) = (rp.n, rp.num_relations());
    let mut relt = vec![0u16; n * n];
    for x in 0..n {
        for y in 0..n {
            relt[y * n + x] = rp.rel[x * n + y];
        }
    }
    let empty = || PairScan { bad: vec![false; s1 * s1], witness: vec![None; s1 * s1] };
    (0..n)
        .into_par_iter()
        .fold(empty, |mut acc, x| {
            let mut buf = vec![0u32; s1 * s1];
            for y in 0..n {
                let h = rp.rel[x * n + y] as usize;
                path_counts(&rp.rel, &relt, n, s1, x, y, &mut buf);
                let t = &tables[h];
                for e in 0..s1 * s1 {
                    if mask[e] && buf[e] != t[e] && !acc.bad[e] {
                        acc.bad[e] = true;
                        acc.witness[e] = Some(ClosureWitness {
                            i: e / s1,
                            j: e % s1,
                            relation: h,
                            first: reps[h],
                            first_count: t[e] as u64,
                            second: (x, y),
                            second_count: buf[e] as u64,
                        });
                    }
                }
            }
            acc
        })
        .reduce(empty, |mut a, b| {
            for e in 0..s1 * s1 {
                if b.bad[e] {
                    let take = match (&a.witness[e], &b.witness[e]) {
                        (Some(wa), Some(wb)) => wb.second < wa.second,
                        _ => true,
                    };
                    a.bad[e] = true;
                    if take {
                        a.witness[e] = b.witness[e].clone();
                    }
                }
            }
            a
        })
}

fn representatives(rp: &RelationPartition) -> (Vec<(usize, usize)>, Vec<Vec<u32>>) {
    let (n, s1) = (rp.n, rp.num_relations());
    let mut reps = vec![(usize::MAX, usize::MAX); s1];
    let mut found = 0;
    'outer: for x in 0..n {
        for y in 0..n {
            let h = rp.relation(x, y);
            if reps[h].0 == usize::MAX {
                reps[h] = (x, y);
                found += 1;
                if found == s1 {
                    break 'outer;
                }
            }
        }
    }
    let mut relt = vec![0u16; n * n];
    for x in 0..n {
        for y in 0..n {
            relt[y * n + x] = rp.rel[x * n + y];
        }
    }
    let tables = reps
        .iter()
        .map(|&(x, y)| {
            let mut t = vec![0u32; s1 * s1];
            path_counts(&rp.rel, &relt, n, s1, x, y, &mut t);
            t
        })
        .collect();
    (reps, tables)
}

/// Full verification of the association-scheme axioms: every product
/// `A_i A_j` is checked entrywise against the counts at a representative
/// pair of each relation, then commutativity of the resulting `p_{i,j}^k`.
pub fn check_scheme(rp: &RelationPartition) -> SchemeReport {
    let s1 = rp.num_relations();
    let (reps, tables) = representatives(rp);
    let scan = scan_pairs(rp, &reps, &tables, &vec![true; s1 * s1]);
    let closed: Vec<Vec<bool>> = (0..s1).map(|i| (0..s1).map(|j| !scan.bad[i * s1 + j]).collect()).collect();
    let witnesses: Vec<ClosureWitness> = scan.witness.into_iter().flatten().collect();
    let valency_rows = rp.valency_table();
    let inner_product_invariant = valency_rows.iter().all(|r| *r == valency_rows[0]);
    let valencies = valency_rows[0].clone();
    let all_closed = witnesses.is_empty();
    let intersection: Vec<Vec<Vec<u64>>> = tables
        .iter()
        .map(|t| (0..s1).map(|i| (0..s1).map(|j| t[i * s1 + j] as u64).collect()).collect())
        .collect();
    let commutative =
        all_closed && (0..s1).all(|k| (0..s1).all(|i| (0..s1).all(|j| intersection[k][i][j] == intersection[k][j][i])));
    let is_scheme = all_closed && commutative;
    let symmetric = (0..s1).all(|i| rp.transpose(i) == i);
    let mut report = SchemeReport {
        n: rp.n,
        classes: s1 - 1,
        is_scheme,
        symmetric,
        inner_product_invariant,
        commutative,
        closed,
        witnesses,
        transpose: rp.transpose.clone(),
        valencies,
        intersection: if all_closed { Some(intersection) } else { None },
        angles: rp.angles.clone(),
        eigen: None,
    };
    if is_scheme {
        report.eigen = eigenmatrices(&report).ok();
    }
    report
}

/// `k_i(x)` is constant in `x` for every relation.
#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub invariant: bool,
    pub valencies: Vec<u64>,
    /// First point whose valencies differ from point 0.
    pub counterexample: Option<usize>,
}

pub fn invariance_check(x: &PointSet) -> Result<InvarianceReport> {
    let rp = RelationPartition::from_points(x)?;
    let table = rp.valency_table();
    let counterexample = table.iter().position(|r| *r != table[0]);
    Ok(InvarianceReport { invariant: counterexample.is_none(), valencies: table[0].clone(), counterexample })
}

fn regular_rep(p: &[Vec<Vec<u64>>], i: usize) -> CMatrix {
    let s1 = p.len();
    CMatrix::from_fn(s1, s1, |k, j| c(p[k][i][j] as f64))
}

/// `P` and `Q` via simultaneous diagonalisation of the regular
/// representation: a generic Hermitian element `Σ c_i A_i` (with
/// `c_{ĩ} = conj(c_i)`) has simple eigenvalues on the Bose–Mesner algebra,
/// and its eigenvectors are the columns of `Q`.
pub fn eigenmatrices(rep: &SchemeReport) -> Result<Eigenmatrices> {
    let p = rep.intersection.as_ref().filter(|_| rep.is_scheme).ok_or_else(|| invalid("not an association scheme"))?;
    let s1 = p.len();
    let n = rep.n as f64;
    let k: Vec<f64> = rep.valencies.iter().map(|&v| v as f64).collect();
    let reps: Vec<CMatrix> = (0..s1).map(|i| regular_rep(p, i)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(EIGEN_SEED);
    for _attempt in 0..8 {
        let mut coef = vec![c(0.0); s1];
        for i in 0..s1 {
            let t = rep.transpose[i];
            if t < i {
                coef[i] = coef[t].conj();
            } else if t == i {
                coef[i] = c(rng.gen_range(-1.0..1.0));
            } else {
                coef[i] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        let mut l = CMatrix::zeros(s1, s1);
        for i in 0..s1 {
            l += &reps[i] * coef[i];
        }
        let m = CMatrix::from_fn(s1, s1, |a, b| l[(a, b)] * (k[a] / k[b]).sqrt());
        let m = (&m + m.adjoint()) * c(0.5);
        let eig = nalgebra::SymmetricEigen::new(m);
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        let scale = vals.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        if vals.windows(2).any(|w| w[1] - w[0] < EIGEN_CLUSTER_TOL * scale) {
            continue;
        }
        let mut cols: Vec<(usize, Vec<Complex64>)> = Vec::with_capacity(s1);
        for col in 0..s1 {
            let v: Vec<Complex64> = (0..s1).map(|a| eig.eigenvectors[(a, col)] / k[a].sqrt()).collect();
            let norm: f64 = (0..s1).map(|a| v[a].norm_sqr() * k[a]).sum();
            if v[0].norm() < 1e-12 {
                return Err(Error::Numerical("eigenvector orthogonal to the identity".into()));
            }
            let mult = n * v[0].norm_sqr() / norm;
            let mr = mult.round();
            if (mult - mr).abs() > 1e-6 || mr < 1.0 {
                return Err(Error::Numerical(format!("non-integral multiplicity {mult}")));
            }
            let scale = c(mr) / v[0];
            cols.push((mr as usize, v.iter().map(|z| z * scale).collect()));
        }
        let order = idempotent_order(&cols);
        let cols: Vec<(usize, Vec<Complex64>)> = order.into_iter().map(|i| cols[i].clone()).collect();
        let q = CMatrix::from_fn(s1, s1, |i, j| cols[j].1[i]);
        let qinv = q.clone().try_inverse().ok_or_else(|| Error::Numerical("second eigenmatrix is singular".into()))?;
        let pm = qinv * c(n);
        // Each column of Q must be a common eigenvector of every A_i.
        for i in 0..s1 {
            for j in 0..s1 {
                let v = q.column(j);
                let r = &reps[i] * v - v * pm[(j, i)];
                if r.norm() > 1e-6 * (1.0 + v.norm() * pm[(j, i)].norm()) {
                    return Err(Error::Numerical("eigenspaces are not common to all relations".into()));
                }
            }
        }
        let idem_t: Vec<usize> = (0..s1)
            .map(|j| {
                (0..s1)
                    .find(|&h| (0..s1).all(|i| (q[(i, h)] - q[(i, j)].conj()).norm() < 1e-6 * (1.0 + q[(i, j)].norm())))
                    .ok_or_else(|| Error::Numerical("idempotent transpose not found".into()))
            })
            .collect::<Result<_>>()?;
        let krein = krein_tensor(&q, &pm, n);
        return Ok(Eigenmatrices {
            p: (0..s1).map(|j| (0..s1).map(|i| pm[(j, i)]).collect()).collect(),
            q: (0..s1).map(|i| (0..s1).map(|j| q[(i, j)]).collect()).collect(),
            multiplicities: cols.iter().map(|(m, _)| *m).collect(),
            idempotent_transpose: idem_t,
            krein,
        });
    }
    Err(Error::Numerical("could not separate the eigenspaces".into()))
}

/// `E_0` first, then by multiplicity and the rounded column values.
fn idempotent_order(cols: &[(usize, Vec<Complex64>)]) -> Vec<usize> {
    let key = |j: usize| -> (bool, usize, Vec<(i64, i64)>) {
        let (m, v) = &cols[j];
        let trivial = *m == 1 && v.iter().all(|z| (z - c(1.0)).norm() < 1e-6);
        (!trivial, *m, v.iter().map(|z| ((-z.re * 1e6).round() as i64, (-z.im * 1e6).round() as i64)).collect())
    };
    let mut order: Vec<usize> = (0..cols.len()).collect();
    order.sort_by_key(|&j| key(j));
    order
}

/// `q_{i,j}^k = (1/|X|) Σ_l Q_{l,i} Q_{l,j} P_{k,l}`, stored `[k][i][j]`.
fn krein_tensor(q: &CMatrix, p: &CMatrix, n: f64) -> Vec<Vec<Vec<f64>>> {
    let s1 = q.nrows();
    (0..s1)
        .map(|k| {
            (0..s1)
                .map(|i| {
                    (0..s1)
                        .map(|j| {
                            let v: Complex64 = (0..s1).map(|l| q[(l, i)] * q[(l, j)] * p[(k, l)]).sum::<Complex64>() / n;
                            v.re
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// The Krein tensor of a verified scheme.
pub fn krein(rep: &SchemeReport) -> Result<Vec<Vec<Vec<f64>>>> {
    match &rep.eigen {
        Some(e) => Ok(e.krein.clone()),
        None => Ok(eigenmatrices(rep)?.krein),
    }
}

/// Index `j` with `Q_{i,j} = m_j α_i` for every relation, i.e. `E_j` is a
/// scalar multiple of the Gram matrix of `X ⊂ ℂ^{m_j}`.
pub fn gram_idempotent(rep: &SchemeReport, dim: usize) -> Option<usize> {
    let (e, a) = (rep.eigen.as_ref()?, rep.angles.as_ref()?);
    (0..e.multiplicities.len()).find(|&j| {
        e.multiplicities[j] == dim && (0..a.len()).all(|i| (e.q[i][j] - a[i] * dim as f64).norm() < 1e-6 * dim as f64)
    })
}

/// The matrix `E_j = (1/|X|) Σ_i Q_{i,j} A_i`.
pub fn idempotent_matrix(rp: &RelationPartition, eig: &Eigenmatrices, j: usize) -> CMatrix {
    let n = rp.n();
    CMatrix::from_fn(n, n, |x, y| eig.q[rp.relation(x, y)][j] / n as f64)
}

/// Rows of a factorisation of `(|X|/m_j) E_j`: `|X|` unit vectors in
/// `ℂ^{m_j}` whose inner products realise the relations.
pub fn embed_scheme(rp: &RelationPartition, eig: &Eigenmatrices, j: usize, tol: f64) -> Result<PointSet> {
    let m = *eig.multiplicities.get(j).ok_or_else(|| invalid("idempotent index out of range"))?;
    let n = rp.n();
    let gram = CMatrix::from_fn(n, n, |x, y| eig.q[rp.relation(x, y)][j] / m as f64);
    let rows = psd_factor(&gram, m, 1e-9)?;
    PointSet::normalized(m, rows, tol)
        .map_err(|e| Error::InvalidPointSet(format!("embedding is not injective: {e}")))
}

/// One `(i,j)` test of the Krein-parameter design criterion.
#[derive(Clone, Debug, Serialize)]
pub struct KreinDesignEntry {
    pub degree: BiDegree,
    pub value: f64,
    pub target: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct KreinDesignReport {
    pub idempotent: usize,
    pub dim: usize,
    pub entries: Vec<KreinDesignEntry>,
    /// Largest lower set inside the passing degrees.
    pub verdict: LowerSet,
}

/// Coefficients of `(|X| E_j)^{∘i}` in the basis `|X| E_l`: start from
/// `J = |X| E_0` and apply `E_j ∘ E_l = (1/|X|) Σ_k q_{j,l}^k E_k`.
fn hadamard_power_coeffs(krein: &[Vec<Vec<f64>>], j: usize, power: u32) -> Vec<f64> {
    let s1 = krein.len();
    let mut a = vec![0.0; s1];
    a[0] = 1.0;
    for _ in 0..power {
        let mut b = vec![0.0; s1];
        for (l, &al) in a.iter().enumerate() {
            if al != 0.0 {
                for (k, bk) in b.iter_mut().enumerate() {
                    *bk += krein[k][j][l] * al;
                }
            }
        }
        a = b;
    }
    a
}

/// For each `(i,j) ∈ T`, the nested Krein sum
/// `Σ_{l,h} a^{(i)}_l a^{(j)}_h q^0_{l,ĥ}` against `d^{2i}/C(d+i-1,i)` (or 0),
/// where `a^{(i)}` are the Hadamard-power coefficients of the embedding idempotent.
pub fn krein_design_check(eig: &Eigenmatrices, idem: usize, t: &LowerSet, tol: f64) -> Result<KreinDesignReport> {
    let s1 = eig.q.len();
    if idem >= s1 {
        return Err(invalid("idempotent index out of range"));
    }
    let d = eig.multiplicities[idem];
    let maxdeg = t.iter().map(|g| g.k.max(g.l)).max().unwrap_or(0);
    let powers: Vec<Vec<f64>> = (0..=maxdeg).map(|p| hadamard_power_coeffs(&eig.krein, idem, p)).collect();
    let mut pass = BTreeMap::new();
    let mut entries = Vec::new();
    for deg in t.iter() {
        let (a, b) = (&powers[deg.k as usize], &powers[deg.l as usize]);
        let mut value = 0.0;
        for l in 0..s1 {
            for h in 0..s1 {
                value += a[l] * b[h] * eig.krein[0][l][eig.idempotent_transpose[h]];
            }
        }
        let target = if deg.k == deg.l {
            (d as f64).powi(2 * deg.k as i32) / binomial(d as i64 + deg.k as i64 - 1, deg.k as i64) as f64
        } else {
            0.0
        };
        let scale = (d as f64).powi((deg.k + deg.l) as i32);
        let holds = (value - target).abs() <= tol * scale.max(1.0);
        pass.insert(deg, holds);
        entries.push(KreinDesignEntry { degree: deg, value, target, holds });
    }
    Ok(KreinDesignReport { idempotent: idem, dim: d, entries, verdict: strength_from_passes(&pass) })
}

/// A primitive idempotent built from zonal polynomials of a design.
#[derive(Clone, Debug)]
pub struct DesignIdempotent {
    /// `None` for the complement `I - Σ F_{k,l}`.
    pub degree: Option<BiDegree>,
    pub rank: usize,
    pub matrix: CMatrix,
}

/// `F_{k,l} = (1/|X|) Σ_i g_{k,l}(α_i) A_i` for `(k,l) ∈ U`, verified to be
/// mutually orthogonal idempotents.
pub fn idempotents_from_design(x: &PointSet, u: &LowerSet, tol: f64) -> Result<Vec<DesignIdempotent>> {
    let rp = RelationPartition::from_points(x)?;
    let s = rp.num_relations() - 1;
    if u.len() != s && u.len() != s + 1 {
        return Err(invalid(format!("|U| = {} but the degree is {s}", u.len())));
    }
    let uu = LowerSet::closure(convolve(u.members(), u.members()));
    if !is_design(x, &uu, tol) {
        return Err(invalid(format!("not a {uu}-design")));
    }
    let n = x.len();
    let angles = rp.angles().expect("point relations carry angles").to_vec();
    let d = x.dim() as u32;
    let mut out = Vec::new();
    for deg in u.iter() {
        let g = jacobi(d, deg).to_float();
        let vals: Vec<Complex64> = angles.iter().map(|&a| g.eval(a) / n as f64).collect();
        let m = CMatrix::from_fn(n, n, |a, b| vals[rp.relation(a, b)]);
        out.push(DesignIdempotent { degree: Some(deg), rank: 0, matrix: m });
    }
    if u.len() == s {
        let mut rest = CMatrix::identity(n, n);
        for f in &out {
            rest -= &f.matrix;
        }
        out.push(DesignIdempotent { degree: None, rank: 0, matrix: rest });
    }
    for a in 0..out.len() {
        let tr = out[a].matrix.trace();
        out[a].rank = tr.re.round().max(0.0) as usize;
        for b in a..out.len() {
            let prod = &out[a].matrix * &out[b].matrix;
            let expect = if a == b { out[a].matrix.clone() } else { CMatrix::zeros(n, n) };
            let err = (prod - expect).iter().fold(0.0f64, |m, z| m.max(z.norm()));
            if err > SCHEME_FLOAT_TOL.max(tol) {
                return Err(Error::Numerical(format!("idempotent products fail by {err:e}")));
            }
        }
    }
    Ok(out)
}

/// Outcome of a Bannai–Muzychuk fusion test.
#[derive(Clone, Debug, Serialize)]
pub struct FusionReport {
    pub is_fusion: bool,
    /// `Q̃[a][b] = Σ_{j ∈ Δ_b} Q_{i,j}` for any `i ∈ Λ_a`.
    pub fused_q: Option<Vec<Vec<Complex64>>>,
    pub failure: Option<String>,
    /// Exact verification of the merged relations.
    pub scheme: Option<SchemeReport>,
}

/// Fuses relations by `adj` and idempotents by `idem`; the fusion is a
/// scheme iff the block sums of `Q` (and dually of `P`) are constant.
pub fn fusion_check(
    rp: &RelationPartition,
    eig: &Eigenmatrices,
    adj: &[Vec<usize>],
    idem: &[Vec<usize>],
) -> Result<FusionReport> {
    let s1 = eig.q.len();
    if rp.num_relations() != s1 {
        return Err(invalid("relation partition does not match the eigenmatrices"));
    }
    if adj.len() != idem.len() {
        return Err(invalid(format!("{} relation blocks but {} idempotent blocks", adj.len(), idem.len())));
    }
    let amap = block_map(adj, s1)?;
    block_map(idem, s1)?;
    let scale = eig.q.iter().flatten().fold(1.0f64, |m, z| m.max(z.norm()));
    let close = |a: Complex64, b: Complex64| (a - b).norm() <= 1e-8 * scale;
    let mut fused = vec![vec![c(0.0); idem.len()]; adj.len()];
    for (a, block) in adj.iter().enumerate() {
        for (b, iblock) in idem.iter().enumerate() {
            let sums: Vec<Complex64> = block.iter().map(|&i| iblock.iter().map(|&j| eig.q[i][j]).sum()).collect();
            if let Some(pos) = sums.iter().position(|&v| !close(v, sums[0])) {
                return Ok(FusionReport {
                    is_fusion: false,
                    fused_q: None,
                    failure: Some(format!("Q block ({a},{b}) sums differ at relation {}", block[pos])),
                    scheme: None,
                });
            }
            // Dual condition on P: Σ_{i ∈ Λ_a} P_{j,i} constant over j ∈ Δ_b.
            let psums: Vec<Complex64> = iblock.iter().map(|&j| block.iter().map(|&i| eig.p[j][i]).sum()).collect();
            if let Some(pos) = psums.iter().position(|&v| !close(v, psums[0])) {
                return Ok(FusionReport {
                    is_fusion: false,
                    fused_q: None,
                    failure: Some(format!("P block ({a},{b}) sums differ at idempotent {}", iblock[pos])),
                    scheme: None,
                });
            }
            fused[a][b] = sums[0];
        }
    }
    let merged = rp.merged(adj)?;
    let scheme = check_scheme(&merged);
    let _ = amap;
    Ok(FusionReport {
        is_fusion: scheme.is_scheme,
        fused_q: Some(fused),
        failure: (!scheme.is_scheme).then(|| "merged relations are not closed".to_string()),
        scheme: Some(scheme),
    })
}

/// A scheme on the fibres of an `n`-antipodal set.
#[derive(Clone, Debug, Serialize)]
pub struct QuotientReport {
    pub fibers: Vec<Vec<usize>>,
    /// `|α|` of each quotient relation; entry 0 is the fibre itself.
    pub moduli: Vec<f64>,
    pub report: SchemeReport,
}

/// Collapses the root-of-unity relations to fibres and merges the remaining
/// relations by `|α|`.
pub fn quotient_scheme(rp: &RelationPartition, order: u32) -> Result<QuotientReport> {
    let angles = rp.angles().ok_or_else(|| invalid("quotient needs inner product values"))?;
    if order == 0 {
        return Err(invalid("antipodal order must be positive"));
    }
    let n = rp.n();
    let in_fiber: Vec<bool> = angles
        .iter()
        .map(|a| {
            let t = a.powu(order);
            (a.norm() - 1.0).abs() < ANGLE_MATCH_TOL && (t - c(1.0)).norm() < ANGLE_MATCH_TOL
        })
        .collect();
    if in_fiber.iter().filter(|&&b| b).count() != order as usize {
        return Err(invalid(format!("relations do not contain all {order}-th roots of unity")));
    }
    let mut fiber_of = vec![usize::MAX; n];
    let mut fibers: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        if fiber_of[x] != usize::MAX {
            continue;
        }
        let f: Vec<usize> = (0..n).filter(|&y| in_fiber[rp.relation(x, y)]).collect();
        if f.len() != order as usize || f.iter().any(|&y| fiber_of[y] != usize::MAX) {
            return Err(invalid("root-of-unity relations do not form an equivalence with classes of size n"));
        }
        for &y in &f {
            fiber_of[y] = fibers.len();
        }
        fibers.push(f);
    }
    for x in 0..n {
        for y in 0..n {
            if in_fiber[rp.relation(x, y)] != (fiber_of[x] == fiber_of[y]) {
                return Err(invalid("root-of-unity relations are not transitive"));
            }
        }
    }
    let mut moduli: Vec<f64> = vec![1.0];
    for (i, a) in angles.iter().enumerate() {
        if !in_fiber[i] && !moduli.iter().skip(1).any(|m| (m - a.norm()).abs() < ANGLE_MATCH_TOL) {
            moduli.push(a.norm());
        }
    }
    moduli[1..].sort_by(|a, b| b.total_cmp(a));
    let class_of: Vec<usize> = angles
        .iter()
        .enumerate()
        .map(|(i, a)| {
            if in_fiber[i] {
                0
            } else {
                1 + moduli[1..].iter().position(|m| (m - a.norm()).abs() < ANGLE_MATCH_TOL).unwrap()
            }
        })
        .collect();
    let nf = fibers.len();
    let mut table = vec![0usize; nf * nf];
    for a in 0..nf {
        for b in 0..nf {
            let classes: Vec<usize> =
                fibers[a].iter().flat_map(|&x| fibers[b].iter().map(move |&y| (x, y))).map(|(x, y)| class_of[rp.relation(x, y)]).collect();
            if classes.iter().any(|&k| k != classes[0]) {
                return Err(invalid(format!("fibres {a} and {b} are joined by values of different modulus")));
            }
            table[a * nf + b] = classes[0];
        }
    }
    let qrp = RelationPartition::from_table(nf, &table)?;
    Ok(QuotientReport { fibers, moduli, report: check_scheme(&qrp) })
}

/// `G = (g_{k,l}(α))` with rows indexed by `angles` and columns by `u`.
#[derive(Clone, Debug, Serialize)]
pub struct JacobiMatrix {
    pub rows: Vec<Complex64>,
    pub columns: Vec<BiDegree>,
    pub entries: Vec<Vec<Complex64>>,
    pub determinant: Complex64,
    /// Determinant with every column divided by the leading coefficient of
    /// its `g_{k,l}`. For a lower set `U` this equals the determinant of the
    /// monomial matrix `(α^k ᾱ^l)`.
    pub monic_determinant: Complex64,
}

pub fn jacobi_matrix(d: u32, angles: &[Complex64], u: &[BiDegree]) -> Result<JacobiMatrix> {
    if angles.len() != u.len() {
        return Err(invalid(format!("{} angles but {} degrees", angles.len(), u.len())));
    }
    if d < 2 {
        return Err(invalid("dimension must be at least 2"));
    }
    let polys: Vec<_> = u.iter().map(|&g| jacobi(d, g).to_float()).collect();
    let entries: Vec<Vec<Complex64>> = angles.iter().map(|&a| polys.iter().map(|p| p.eval(a)).collect()).collect();
    let m = angles.len();
    let determinant = if m == 0 { c(1.0) } else { CMatrix::from_fn(m, m, |i, j| entries[i][j]).determinant() };
    let lead: f64 = u.iter().map(|&g| leading_coeff(d, g).to_f64().unwrap_or(f64::NAN)).product();
    Ok(JacobiMatrix { rows: angles.to_vec(), columns: u.to_vec(), entries, determinant, monic_determinant: determinant / lead })
}

/// Hypotheses and verdict of the partial-regularity scheme criterion.
#[derive(Clone, Debug, Serialize)]
pub struct PartialRegularityReport {
    pub design_ok: bool,
    /// `p_{i,j}(x,y)` depends only on the relation of `(x,y)` and is symmetric
    /// in `i,j` whenever `i ∉ I` or `j ∉ I`.
    pub outside_ok: bool,
    pub determinant: Complex64,
    pub nonsingular: bool,
    pub predicts_scheme: bool,
}

/// Checks the hypotheses: `X` is a `U*U`-design, the path counts with an
/// index outside `rows` are determined by the relation and symmetric, and
/// the Jacobi matrix on `rows × U` is nonsingular.
pub fn partial_regularity_scheme_check(
    x: &PointSet,
    rp: &RelationPartition,
    u: &LowerSet,
    rows: &[usize],
    tol: f64,
) -> Result<PartialRegularityReport> {
    let s1 = rp.num_relations();
    let angles = rp.angles().ok_or_else(|| invalid("criterion needs inner product values"))?;
    if rows.iter().any(|&i| i == 0 || i >= s1) {
        return Err(invalid("row indices must lie in 1..=s"));
    }
    let uu = LowerSet::closure(convolve(u.members(), u.members()));
    let design_ok = is_design(x, &uu, tol);
    let mut in_rows = vec![false; s1];
    rows.iter().for_each(|&i| in_rows[i] = true);
    let mask: Vec<bool> = (0..s1 * s1).map(|e| !in_rows[e / s1] || !in_rows[e % s1]).collect();
    let (reps, tables) = representatives(rp);
    let scan = scan_pairs(rp, &reps, &tables, &mask);
    let symmetric =
        tables.iter().all(|t| (0..s1 * s1).filter(|&e| mask[e]).all(|e| t[e] == t[(e % s1) * s1 + e / s1]));
    let outside_ok = !scan.bad.iter().any(|&b| b) && symmetric;
    let row_angles: Vec<Complex64> = rows.iter().map(|&i| angles[i]).collect();
    let cols: Vec<BiDegree> = u.iter().collect();
    let g = jacobi_matrix(x.dim() as u32, &row_angles, &cols)?;
    let nonsingular = g.determinant.norm() > 1e-9;
    Ok(PartialRegularityReport {
        design_ok,
        outside_ok,
        determinant: g.determinant,
        nonsingular,
        predicts_scheme: design_ok && outside_ok && nonsingular,
    })
}
