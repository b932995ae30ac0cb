use cdl_core::construct::*;
use cdl_core::design::{max_design_strength, DEFAULT_DESIGN_TOL};
use cdl_core::poly::{BiDegree, LowerSet};
use cdl_core::scheme::*;
use cdl_core::space::{c64, PointSet};
use cdl_core::MubFamily;
use num_complex::Complex64;

fn omega(j: i64) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::PI * j as f64 / 3.0)
}

fn closure_pattern(x: &PointSet, order: &[Complex64]) -> Vec<Vec<bool>> {
    let rp = RelationPartition::from_points_ordered(x, order).unwrap();
    let rep = check_scheme(&rp);
    assert!(!rep.is_scheme);
    assert!(rep.inner_product_invariant);
    rep.closed
}

#[test]
fn coxeter_42_closure_pattern() {
    let b = c64(1.0, 7f64.sqrt()) / 4.0;
    let order = [c64(1., 0.), c64(-1., 0.), c64(0., 0.), c64(0.5, 0.), c64(-0.5, 0.), b, -b, b.conj(), -b.conj()];
    let closed = closure_pattern(&coxeter_42().unwrap(), &order);
    let block = |i: usize| match i {
        1..=4 => 1,
        5 | 6 => 2,
        7 | 8 => 3,
        _ => 0,
    };
    for i in 0..9 {
        for j in 0..9 {
            let want = i <= 1 || j <= 1 || (block(i) != 0 && block(i) == block(j));
            assert_eq!(closed[i][j], want, "({i},{j})");
        }
    }
}

#[test]
fn coxeter_56_closure_pattern() {
    let r = c64(0.0, 7f64.sqrt());
    let third = |z: Complex64| z / 3.0;
    let sixth = |z: Complex64| z / 6.0;
    let order = [
        c64(1., 0.),
        c64(-1., 0.),
        c64(1. / 3., 0.),
        c64(-1. / 3., 0.),
        c64(2. / 3., 0.),
        c64(-2. / 3., 0.),
        third(r),
        -third(r),
        sixth(c64(1., 0.) + r),
        sixth(c64(-1., 0.) - r),
        sixth(c64(1., 0.) - r),
        sixth(c64(-1., 0.) + r),
    ];
    let closed = closure_pattern(&coxeter_56().unwrap(), &order);
    let in_block = |i: usize, j: usize| {
        let both = |a: &[usize]| a.contains(&i) && a.contains(&j);
        both(&[2, 3, 4, 5])
            || both(&[6, 7])
            || both(&[8, 9])
            || both(&[10, 11])
            || ([4, 5].contains(&i) && [6, 7].contains(&j))
            || ([6, 7].contains(&i) && [4, 5].contains(&j))
    };
    for i in 0..12 {
        for j in 0..12 {
            assert_eq!(closed[i][j], i <= 1 || j <= 1 || in_block(i, j), "({i},{j})");
        }
    }
}

#[test]
fn eigenmatrices_are_inverse_up_to_size() {
    for x in [coxeter_240().unwrap(), mub_cover(MubFamily::Even, 2).unwrap(), hoggar().unwrap()] {
        let rep = check_scheme(&RelationPartition::from_points(&x).unwrap());
        let e = rep.eigen.as_ref().unwrap();
        let s1 = e.q.len();
        let n = x.len() as f64;
        for a in 0..s1 {
            for b in 0..s1 {
                let v: Complex64 = (0..s1).map(|k| e.p[a][k] * e.q[k][b]).sum();
                let want = if a == b { n } else { 0.0 };
                assert!((v - c64(want, 0.0)).norm() < 1e-7 * n, "{} ({a},{b})", x.len());
            }
        }
        assert_eq!(e.multiplicities.iter().sum::<usize>(), x.len());
        // The first row of P lists the valencies.
        for (i, &k) in rep.valencies.iter().enumerate() {
            assert!((e.p[0][i] - c64(k as f64, 0.0)).norm() < 1e-7);
        }
    }
}

#[test]
fn embedding_recovers_gram_matrix() {
    for x in [sic_d2().unwrap(), mub_cover(MubFamily::Odd, 1).unwrap(), coxeter_240().unwrap()] {
        let rp = RelationPartition::from_points(&x).unwrap();
        let rep = check_scheme(&rp);
        let e = rep.eigen.as_ref().unwrap();
        let j = gram_idempotent(&rep, x.dim()).unwrap();
        let y = embed_scheme(&rp, e, j, 1e-8).unwrap();
        assert_eq!(y.dim(), x.dim());
        assert!(x.gram().iter().zip(&y.gram()).all(|(a, b)| (a - b).norm() < 1e-8));
    }
}

#[test]
fn partial_regularity_predicts_schemes() {
    let i = c64(0.0, 1.0);
    let u = LowerSet::new(LowerSet::total_degree(2).iter().chain([BiDegree::new(3, 0)])).unwrap();
    let x = coxeter_240().unwrap();
    let order: Vec<Complex64> =
        (0..6).map(omega).chain([c64(0., 0.)]).chain((0..6).map(|j| i / 3f64.sqrt() * omega(j))).collect();
    let rp = RelationPartition::from_points_ordered(&x, &order).unwrap();
    let rows: Vec<usize> = (6..=12).collect();
    let r = partial_regularity_scheme_check(&x, &rp, &u, &rows, 1e-7).unwrap();
    assert!(r.design_ok && r.outside_ok && r.nonsingular && r.predicts_scheme, "{r:?}");
    assert_eq!(r.predicts_scheme, check_scheme(&rp).is_scheme);

    let d = 2.0f64;
    let rr = (2.0 * d).sqrt();
    let x = mub_cover(MubFamily::Odd, 1).unwrap();
    let order =
        [c64(1., 0.), i, c64(-1., 0.), -i, c64(1., 1.) / rr, c64(-1., 1.) / rr, c64(-1., -1.) / rr, c64(1., -1.) / rr, c64(0., 0.)];
    let rp = RelationPartition::from_points_ordered(&x, &order).unwrap();
    let r = partial_regularity_scheme_check(&x, &rp, &LowerSet::total_degree(2), &[2, 4, 5, 6, 7, 8], 1e-7).unwrap();
    assert!(r.predicts_scheme, "{r:?}");
    assert!(check_scheme(&rp).is_scheme);
}

#[test]
fn partial_regularity_never_predicts_a_non_scheme() {
    let x = coxeter_42().unwrap();
    let rp = RelationPartition::from_points(&x).unwrap();
    for rows in [[1, 2, 3], [2, 3, 4], [5, 6, 7], [6, 7, 8]] {
        let r = partial_regularity_scheme_check(&x, &rp, &LowerSet::total_degree(1), &rows, 1e-7).unwrap();
        assert!(!r.predicts_scheme, "{rows:?}: {r:?}");
    }
}

#[test]
fn quotients_collapse_to_one_class() {
    for (x, order, fibres) in
        [(cross_polytope(3, 2).unwrap(), 2, 3), (coxeter_27().unwrap(), 3, 9), (sic_d2().unwrap(), 4, 4)]
    {
        let q = quotient_scheme(&RelationPartition::from_points(&x).unwrap(), order).unwrap();
        assert_eq!(q.fibers.len(), fibres);
        assert!(q.report.is_scheme);
        assert_eq!(q.report.classes, 1);
    }
}

#[test]
fn design_idempotents_are_orthogonal_projections() {
    let x = coxeter_27().unwrap();
    let f = idempotents_from_design(&x, &LowerSet::total_degree(2), 1e-7).unwrap();
    let n = x.len();
    for (a, fa) in f.iter().enumerate() {
        for (b, fb) in f.iter().enumerate() {
            let p = &fa.matrix * &fb.matrix;
            let want = if a == b { fa.matrix.clone() } else { fa.matrix.scale(0.0) };
            assert!((p - want).norm() < 1e-9, "F{a} F{b}");
        }
    }
    assert_eq!(f.iter().map(|e| e.rank).sum::<usize>(), n);
}

#[test]
fn conference_scheme_valencies() {
    let c = skew_conference_search(4).unwrap().unwrap();
    let x = conference_to_design(&c).unwrap();
    let rep = check_scheme(&RelationPartition::from_points(&x).unwrap());
    assert!(rep.is_scheme && !rep.symmetric);
    let mut v = rep.valencies.clone();
    v.sort();
    assert_eq!(v, vec![1, 1, 3, 3]);
}

#[test]
fn krein_verdicts_on_covers() {
    for x in [hoggar().unwrap(), mub_cover(MubFamily::Odd, 1).unwrap(), coxeter_240().unwrap()] {
        let rep = check_scheme(&RelationPartition::from_points(&x).unwrap());
        let e = rep.eigen.as_ref().unwrap();
        let j = gram_idempotent(&rep, x.dim()).unwrap();
        let kr = krein_design_check(e, j, &LowerSet::total_degree(7), 1e-7).unwrap();
        assert_eq!(kr.verdict, max_design_strength(&x, 7, DEFAULT_DESIGN_TOL).verdict);
    }
}

#[test]
fn relation_partition_rejects_bad_order() {
    let x = coxeter_27().unwrap();
    assert!(RelationPartition::from_points_ordered(&x, &[c64(1.0, 0.0)]).is_err());
    assert!(RelationPartition::from_points_ordered(&x, &[c64(0.5, 0.0)]).is_err());
}
