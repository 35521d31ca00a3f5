//! Worked values at fixed parameter points. Indices are 0-based here, so the
//! component usually written `R_1221` is `[0, 1, 1, 0]`.

use wintgen_core::classify::{condition_matrix, dependence, extract_l, DependenceKind, LCondition, TensorCache, TensorId};
use wintgen_core::curvature::{
    classify_umbilicity, mean_curvature, normal_curvature, ricci_from_r, scalar_invariants, sectional_curvature,
    Curvature, SubmanifoldModel, Umbilicity,
};
use wintgen_core::derivations::{commutation_residual, endo_derive, extended_kulkarni, p_tensor, tachibana};
use wintgen_core::sectional::{inf_sectional, Strategy};
use wintgen_core::tensor::{kulkarni_nomizu, wedge_endomorphism};
use wintgen_core::wintgen::{case_params, choi_lu_shape_ops, ddvv_gap, theorem_case_builder, CaseId, CaseInputs};
use wintgen_core::{q, ChoiLuParams, Rational, Scalar, SymMatrix, Tensor};

fn params(n: usize, m: usize, a: Rational, b: Rational, c: Rational, mu: Rational, k: Rational) -> ChoiLuParams<Rational> {
    ChoiLuParams { n, m, a, b, c, mu, k_tilde: k }
}

fn unit() -> ChoiLuParams<Rational> {
    let one = Rational::one();
    params(4, 3, one.clone(), one.clone(), one.clone(), one, Rational::zero())
}

fn model(p: &ChoiLuParams<Rational>) -> SubmanifoldModel<Rational> {
    choi_lu_shape_ops(p).unwrap()
}

fn flat(n: usize, m: usize, k: Rational) -> SubmanifoldModel<Rational> {
    SubmanifoldModel::new(n, k, vec![SymMatrix::zeros(n).unwrap(); m]).unwrap()
}

fn r(v: i64) -> Rational {
    Rational::integer(v)
}

#[test]
fn metric_products() {
    let g = SymMatrix::<Rational>::identity(4).unwrap();
    assert_eq!(kulkarni_nomizu(&g, &g).unwrap().get(&[0, 1, 1, 0]), &r(2));
    let cv = Curvature::of(&model(&unit()));
    assert_eq!(kulkarni_nomizu(&g, &cv.ricci.ricc).unwrap().get(&[0, 1, 1, 0]), &r(14));
}

#[test]
fn metric_wedge_on_frame() {
    let g = SymMatrix::<Rational>::identity(4).unwrap();
    assert_eq!(wedge_endomorphism(&g, 0, 1, 1).unwrap(), vec![r(1), r(0), r(0), r(0)]);
    assert!(wedge_endomorphism(&g, 0, 1, 2).unwrap().iter().all(Scalar::is_zero));
}

#[test]
fn riemann_components_at_unit_point() {
    let cv = Curvature::of(&model(&unit()));
    assert_eq!(cv.r.get(&[0, 1, 1, 0]), &r(1));
    assert_eq!(cv.r.get(&[0, 2, 2, 0]), &r(4));
    assert_eq!(cv.r.get(&[0, 2, 2, 1]), &r(1));
    assert_eq!(cv.r.get(&[1, 2, 2, 1]), &r(2));
    assert_eq!(cv.r.get(&[2, 3, 3, 2]), &r(3));
}

#[test]
fn ricci_at_unit_point() {
    let cv = Curvature::of(&model(&unit()));
    let s = &cv.ricci.ricc;
    assert_eq!((s.get(0, 0), s.get(0, 1), s.get(1, 1)), (&r(9), &r(2), &r(5)));
    assert_eq!((s.get(2, 2), s.get(3, 3)), (&r(9), &r(9)));
    assert_eq!(cv.ricci.tau, r(32));
}

#[test]
fn space_form() {
    let cv = Curvature::of(&flat(4, 2, r(1)));
    assert_eq!(cv.r.get(&[0, 1, 1, 0]), &r(1));
    assert_eq!(cv.ricci.ricc, SymMatrix::scalar(4, r(3)).unwrap());
    assert_eq!(cv.ricci.tau, r(12));
    assert!(cv.c.is_zero());
    let e = |i: usize| (0..4).map(|j| if i == j { r(1) } else { r(0) }).collect::<Vec<_>>();
    let u = vec![r(1), r(2), r(0), q(-1, 3)];
    assert_eq!(sectional_curvature(&cv.r, &u, &e(3)).unwrap(), r(1));
    let min = inf_sectional(&cv.r.map(Scalar::to_f64), &Strategy::default());
    assert!((min.value - 1.0).abs() < 1e-9);
}

#[test]
fn weyl_components() {
    let cv = Curvature::of(&model(&unit()));
    assert_eq!(cv.c.get(&[0, 1, 1, 0]), &q(-2, 3));
    assert_eq!(cv.c.get(&[0, 2, 2, 0]), &q(1, 3));
    assert_eq!(cv.c.get(&[2, 3, 3, 2]), &q(-2, 3));
    let mut p = unit();
    p.mu = Rational::zero();
    assert!(Curvature::of(&model(&p)).c.is_zero());
}

#[test]
fn normal_curvature_and_invariants() {
    let m = model(&unit());
    let rp = normal_curvature(&m);
    assert_eq!(rp.get(0, 1, 0, 1).abs(), r(2));
    for i in 0..4 {
        for j in 0..4 {
            for a in 0..2 {
                assert!(rp.get(i, j, a, 2).is_zero());
            }
        }
    }
    let cv = Curvature::of(&m);
    let inv = scalar_invariants(&m, &cv.ricci, &rp);
    let h2 = mean_curvature(&m).h_sq;
    assert_eq!(inv.rho, q(8, 3));
    assert_eq!(inv.rho_perp.exact(), Some(&q(1, 3)));
    assert_eq!(h2, r(3));
    assert_eq!(inv.rho, h2 - q(1, 3));
    assert!(ddvv_gap(&m).exact().unwrap().is_zero());

    assert!(normal_curvature(&flat(4, 1, r(1))).is_zero());
    let geo = flat(5, 3, r(1));
    let cv = Curvature::of(&geo);
    let inv = scalar_invariants(&geo, &cv.ricci, &normal_curvature(&geo));
    assert_eq!(inv.rho, r(1));
    assert!(inv.rho_perp.exact().unwrap().is_zero());
    assert!(ddvv_gap(&geo).exact().unwrap().is_zero());
}

#[test]
fn diagonal_operators_have_flat_normal_connection() {
    let d = |v: [i64; 4]| SymMatrix::from_upper(4, |i, j| if i == j { r(v[i]) } else { r(0) }).unwrap();
    let m = SubmanifoldModel::new(4, r(0), vec![d([1, 2, 3, 4]), d([0, -1, 5, 2])]).unwrap();
    assert!(normal_curvature(&m).is_zero());
}

#[test]
fn mean_curvature_vector() {
    let p = params(5, 4, q(1, 2), r(-1), r(2), r(3), r(0));
    let mc = mean_curvature(&model(&p));
    assert_eq!(mc.h_vec, vec![q(1, 2), r(-1), r(2), r(0)]);
    assert_eq!(mc.h_sq, q(21, 4));
    let one = SubmanifoldModel::new(4, r(0), vec![SymMatrix::identity(4).unwrap(), SymMatrix::zeros(4).unwrap()]).unwrap();
    assert_eq!(mean_curvature(&one).h_vec, vec![r(1), r(0)]);
}

#[test]
fn umbilicity_classes() {
    let (z, one) = (Rational::zero(), Rational::one());
    let cls = |a: &Rational, c: &Rational, mu: &Rational| {
        classify_umbilicity(&model(&params(5, 3, a.clone(), z.clone(), c.clone(), mu.clone(), z.clone())))
    };
    assert_eq!(cls(&z, &one, &z), Umbilicity::TotallyUmbilical);
    assert_eq!(cls(&z, &one, &one), Umbilicity::PseudoUmbilical);
    assert_eq!(cls(&z, &z, &one), Umbilicity::Minimal);
    assert_eq!(cls(&one, &one, &one), Umbilicity::Generic);
    assert_eq!(cls(&z, &z, &z), Umbilicity::TotallyGeodesic);
}

#[test]
fn umbilical_infimum() {
    let p = params(4, 3, r(1), q(1, 2), r(0), r(0), r(-1));
    let cv = Curvature::of(&model(&p));
    let min = inf_sectional(&cv.r.map(Scalar::to_f64), &Strategy::default());
    assert!((min.value - 0.25).abs() < 1e-9);
    let cv = Curvature::of(&model(&unit()));
    let min = inf_sectional(&cv.r.map(Scalar::to_f64), &Strategy::default());
    assert!(min.value <= 1.0 + 1e-12);
}

#[test]
fn derivations_at_unit_point() {
    let cv = Curvature::of(&model(&unit()));
    let g = SymMatrix::identity(4).unwrap();
    assert!(endo_derive(&cv.r, &g.to_tensor()).unwrap().is_zero());
    let q_gr = tachibana(&g, &cv.r).unwrap();
    assert_eq!(q_gr.get(&[0, 1, 2, 1, 0, 2]), &r(-1));
    let rc = endo_derive(&cv.r, &cv.c).unwrap();
    assert_eq!(rc.get(&[0, 1, 2, 0, 0, 2]), &r(1));
    assert!(commutation_residual(&model(&unit())).unwrap().is_zero());
}

#[test]
fn weyl_pseudo_symmetric_on_pseudo_umbilical_point() {
    let p = params(4, 3, r(0), r(0), r(1), r(1), r(0));
    let m = model(&p);
    let cache = TensorCache::new(&m);
    let v = dependence(cache.get(TensorId::RC), cache.get(TensorId::QgC), 0.0).unwrap();
    assert_eq!(v.kind, DependenceKind::Proportional);
    assert_eq!(v.lambda, Some(r(1)));
}

#[test]
fn p_and_extended_products() {
    let cv = Curvature::of(&flat(4, 2, r(0)));
    assert!(p_tensor(&cv.r, &cv.ricci).unwrap().is_zero());
    let g = SymMatrix::<Rational>::identity(4).unwrap();
    assert!(extended_kulkarni(&g, &Tensor::zeros(4, 4).unwrap()).unwrap().is_zero());
    // single entry D(0,1;2,3) = 1: four patterns of 4 images, 8 cancel in pairs
    let mut d = Tensor::zeros(4, 4).unwrap();
    d.set(&[0, 1, 2, 3], r(1));
    let e = extended_kulkarni(&g, &d).unwrap();
    assert_eq!(e.nonzero_count(), 8);
    assert_eq!(e.get(&[2, 0, 1, 2, 2, 3]), &r(1));
    assert_eq!(e.get(&[0, 2, 2, 1, 2, 3]), &r(1));
    assert_eq!(e.get(&[2, 0, 2, 1, 2, 3]), &r(-1));
    assert_eq!(e.get(&[0, 2, 1, 2, 2, 3]), &r(-1));
}

#[test]
fn umbilical_residual_and_verdicts() {
    let p = params(5, 3, r(1), q(-1, 2), r(2), r(0), r(1));
    let m = model(&p);
    assert!(commutation_residual(&m).unwrap().is_zero());
    for c in condition_matrix(&m, 0.0) {
        assert!(matches!(c.verdict.kind, DependenceKind::BothZero | DependenceKind::LeftZero), "{:?}", c.left);
    }
    assert_eq!(extract_l(&m, LCondition::WeylPseudoS, 0.0).kind, DependenceKind::BothZero);
}

#[test]
fn generic_point_is_independent() {
    let m = model(&unit());
    let cache = TensorCache::new(&m);
    let v = dependence(cache.get(TensorId::CR), cache.get(TensorId::QgR), 0.0).unwrap();
    assert_eq!(v.kind, DependenceKind::Independent);
}

#[test]
fn shape_operators() {
    let m = model(&unit());
    let a2 = &m.shape_ops()[1];
    assert_eq!((0..4).map(|i| a2.get(i, i).clone()).collect::<Vec<_>>(), vec![r(2), r(0), r(1), r(1)]);
    let zero = params(4, 3, r(0), r(0), r(0), r(0), r(0));
    assert!(model(&zero).shape_ops().iter().all(SymMatrix::is_zero));
}

#[test]
fn branch_builders() {
    let t2 = theorem_case_builder(CaseId::T2ii, &CaseInputs { n: 4, m: 3, mu: r(1), c: r(1), k_tilde: r(-1) }).unwrap();
    assert_eq!(t2.shape_ops()[2], SymMatrix::identity(4).unwrap());
    assert_eq!(classify_umbilicity(&t2), Umbilicity::PseudoUmbilical);
    let cache = TensorCache::new(&t2);
    assert!(cache.get(TensorId::RC).is_zero());
    for right in TensorId::RIGHTS.into_iter().filter(|&t| cache.get(t).rank() == 6) {
        let kind = dependence(cache.get(TensorId::RC), cache.get(right), 0.0).unwrap().kind;
        // R = -μ² P∧P and Ricc = -2μ² P with P = diag(1,1,0,..), so Q(Ricc,R) = 0 too
        let expected = if right == TensorId::QSR { DependenceKind::BothZero } else { DependenceKind::LeftZero };
        assert_eq!(kind, expected, "{right:?}");
    }

    let c1 = theorem_case_builder(CaseId::C1ii, &CaseInputs { n: 4, m: 3, mu: r(1), c: r(0), k_tilde: r(0) }).unwrap();
    assert!(c1.shape_ops()[2].is_zero());
    assert_eq!(classify_umbilicity(&c1), Umbilicity::Minimal);

    let p = case_params(CaseId::T27ii, &CaseInputs { n: 4, m: 3, mu: r(1), c: r(1), k_tilde: q(-4, 3) }).unwrap();
    let m = model(&p);
    assert_eq!(mean_curvature(&m).h_sq + p.k_tilde.clone(), q(2, 3));
    let a2 = &m.shape_ops()[1];
    assert_eq!((a2.get(0, 0), a2.get(1, 1), a2.get(3, 3)), (&r(2), &r(0), &r(1)));
}

#[test]
fn dependence_basics() {
    let cv = Curvature::of(&model(&unit()));
    let three = cv.r.scale(&r(3));
    let v = dependence(&three, &cv.r, 0.0).unwrap();
    assert_eq!((v.kind, v.lambda), (DependenceKind::Proportional, Some(r(3))));
    let q_gr = tachibana(&SymMatrix::identity(4).unwrap(), &cv.r).unwrap();
    let v = dependence(&Tensor::zeros(4, 6).unwrap(), &q_gr, 0.0).unwrap();
    assert_eq!((v.kind, v.lambda), (DependenceKind::LeftZero, Some(r(0))));
}

#[test]
fn pseudo_symmetry_function_on_pseudo_umbilical_points() {
    for (c, mu, k) in [(r(1), r(1), r(0)), (q(1, 2), r(-2), r(-1)), (r(0), q(1, 3), r(1))] {
        let p = params(5, 3, r(0), r(0), c, mu, k);
        let v = extract_l(&model(&p), LCondition::PseudoSym, 0.0);
        assert_eq!(v.kind, DependenceKind::Proportional);
        assert_eq!(v.lambda, Some(p.k_tilde.clone() + p.h_sq()));
    }
}

#[test]
fn ricci_of_space_form_is_einstein() {
    let cv = Curvature::of(&flat(6, 1, q(-1, 2)));
    let rd = ricci_from_r(&cv.r).unwrap();
    assert_eq!(rd.ricc, SymMatrix::scalar(6, q(-5, 2)).unwrap());
}
