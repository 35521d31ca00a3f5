//! Library kernels against naive loops written straight from the definitions.

use proptest::prelude::*;
use rand_core::SeedableRng;
use rand_pcg::Pcg64;

use wintgen_core::classify::{dependence, extract_l, DependenceKind, LCondition, TensorCache, TensorId};
use wintgen_core::curvature::{sectional_curvature, Curvature, SubmanifoldModel};
use wintgen_core::derivations::{commutation_residual, endo_derive, extended_kulkarni, p_tensor, tachibana};
use wintgen_core::grid::{random_model, random_rational, random_sym};
use wintgen_core::tensor::{kulkarni_nomizu, linear_combination, max_abs_component, wedge_endomorphism};
use wintgen_core::wintgen::choi_lu_shape_ops;
use wintgen_core::{q, ChoiLuParams, Rational, Scalar, SymMatrix, Tensor};

fn rng(seed: u64) -> Pcg64 {
    Pcg64::seed_from_u64(seed)
}

fn random_tensor(rng: &mut Pcg64, n: usize, rank: usize) -> Tensor<Rational> {
    Tensor::from_fn(n, rank, |_| random_rational(rng)).unwrap()
}

fn delta(i: usize, j: usize) -> Rational {
    if i == j {
        Rational::one()
    } else {
        Rational::zero()
    }
}

/// Every index tuple of length `k` over `0..n`.
fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out.into_iter().flat_map(|t| (0..n).map(move |i| [t.clone(), vec![i]].concat())).collect();
    }
    out
}

fn naive_kn(a: &SymMatrix<Rational>, b: &SymMatrix<Rational>) -> Tensor<Rational> {
    let n = a.n();
    let mut t = Tensor::zeros(n, 4).unwrap();
    for i in tuples(n, 4) {
        let (x1, x2, x3, x4) = (i[0], i[1], i[2], i[3]);
        let v = a.get(x1, x4).clone() * b.get(x2, x3).clone() + a.get(x2, x3).clone() * b.get(x1, x4).clone()
            - a.get(x1, x3).clone() * b.get(x2, x4).clone()
            - a.get(x2, x4).clone() * b.get(x1, x3).clone();
        t.set(&i, v);
    }
    t
}

/// `(B·T)(x1..xk; x,y) = −Σ_s Σ_w B(x,y,x_s,w) T(.., w at s, ..)`.
fn naive_derive(b: impl Fn(usize, usize, usize, usize) -> Rational, t: &Tensor<Rational>) -> Tensor<Rational> {
    let (n, k) = (t.n(), t.rank());
    let mut out = Tensor::zeros(n, k + 2).unwrap();
    for idx in tuples(n, k + 2) {
        let (x, y) = (idx[k], idx[k + 1]);
        let mut v = Rational::zero();
        for s in 0..k {
            for w in 0..n {
                let mut j = idx[..k].to_vec();
                j[s] = w;
                v -= b(x, y, idx[s], w) * t.get(&j).clone();
            }
        }
        out.set(&idx, v);
    }
    out
}

/// `A(y,z)δ_xw − A(x,z)δ_yw`.
fn wedge_entry(a: &SymMatrix<Rational>) -> impl Fn(usize, usize, usize, usize) -> Rational + '_ {
    move |x, y, z, w| a.get(y, z).clone() * delta(x, w) - a.get(x, z).clone() * delta(y, w)
}

#[test]
fn kulkarni_nomizu_matches_double_loop() {
    let mut g = rng(1);
    for i in 0..20 {
        let n = 4 + i % 4;
        let a = random_sym(&mut g, n).unwrap();
        let b = random_sym(&mut g, n).unwrap();
        assert_eq!(kulkarni_nomizu(&a, &a).unwrap(), naive_kn(&a, &a));
        assert_eq!(kulkarni_nomizu(&a, &b).unwrap(), naive_kn(&a, &b));
        assert_eq!(kulkarni_nomizu(&a, &b).unwrap(), kulkarni_nomizu(&b, &a).unwrap());
    }
}

#[test]
fn wedge_endomorphism_is_skew_in_its_pair() {
    let mut g = rng(2);
    let a = random_sym(&mut g, 5).unwrap();
    for x in 0..5 {
        for y in 0..5 {
            for z in 0..5 {
                let xy = wedge_endomorphism(&a, x, y, z).unwrap();
                let yx = wedge_endomorphism(&a, y, x, z).unwrap();
                assert!(xy.iter().zip(&yx).all(|(p, q)| *p == -q.clone()));
            }
        }
    }
}

#[test]
fn linear_combinations() {
    let mut g = rng(3);
    let t = random_tensor(&mut g, 4, 4);
    let one = Rational::one();
    assert!(linear_combination(&[(one.clone(), &t), (-one, &t)]).unwrap().is_zero());
    let two = linear_combination(&[(Rational::integer(2), &t)]).unwrap();
    assert!(two.data().iter().zip(t.data()).all(|(d, s)| *d == s.clone() + s.clone()));
}

#[test]
fn max_abs_reporting() {
    let z = Tensor::<Rational>::zeros(4, 4).unwrap();
    assert_eq!(max_abs_component(&z), (Rational::zero(), vec![0, 0, 0, 0]));
    let mut t = z.clone();
    t.set(&[1, 3, 0, 2], Rational::integer(-5));
    assert_eq!(max_abs_component(&t), (Rational::integer(5), vec![1, 3, 0, 2]));
}

#[test]
fn weyl_from_its_definition() {
    let mut g = rng(4);
    for i in 0..10 {
        let m = random_model(&mut g, 4 + i % 3, 1 + i % 3).unwrap();
        let cv = Curvature::of(&m);
        let n = m.n() as i64;
        let id = SymMatrix::identity(m.n()).unwrap();
        let gs = naive_kn(&id, &cv.ricci.ricc);
        let gg = naive_kn(&id, &id);
        let expect = Tensor::from_fn(m.n(), 4, |i| {
            cv.r.get(i).clone() - gs.get(i).clone() * q(1, n - 2)
                + gg.get(i).clone() * cv.ricci.tau.clone() * q(1, 2 * (n - 1) * (n - 2))
        })
        .unwrap();
        assert_eq!(cv.c, expect);
        for u in 0..m.n() {
            for v in 0..m.n() {
                let tr = (0..m.n()).fold(Rational::zero(), |s, i| s + cv.c.get(&[i, u, v, i]).clone());
                assert!(tr.is_zero());
            }
        }
    }
}

#[test]
fn riemann_symmetries_and_bianchi() {
    let mut g = rng(5);
    for n in 4..=6 {
        let r = Curvature::of(&random_model(&mut g, n, 3).unwrap()).r;
        for i in tuples(n, 4) {
            let (a, b, c, d) = (i[0], i[1], i[2], i[3]);
            let v = r.get(&i).clone();
            assert_eq!(v, -r.get(&[b, a, c, d]).clone());
            assert_eq!(&v, r.get(&[c, d, a, b]));
            assert!((v + r.get(&[b, c, a, d]).clone() + r.get(&[c, a, b, d]).clone()).is_zero());
        }
    }
}

#[test]
fn derivations_match_naive_sums() {
    let mut g = rng(6);
    for n in [4, 5] {
        let cv = Curvature::of(&random_model(&mut g, n, 2).unwrap());
        let a = random_sym(&mut g, n).unwrap();
        let r = &cv.r;
        let b = |x: usize, y: usize, z: usize, w: usize| r.get(&[x, y, z, w]).clone();
        assert_eq!(endo_derive(r, &cv.c).unwrap(), naive_derive(b, &cv.c));
        assert_eq!(endo_derive(r, &cv.ricci.ricc.to_tensor()).unwrap(), naive_derive(b, &cv.ricci.ricc.to_tensor()));
        assert_eq!(tachibana(&a, r).unwrap(), naive_derive(wedge_entry(&a), r));
        assert_eq!(tachibana(&a, &cv.ricci.ricc.to_tensor()).unwrap(), naive_derive(wedge_entry(&a), &cv.ricci.ricc.to_tensor()));
    }
}

#[test]
fn annihilated_tensors() {
    let mut g = rng(7);
    for n in 4..=7 {
        let id = SymMatrix::<Rational>::identity(n).unwrap();
        assert!(tachibana(&id, &kulkarni_nomizu(&id, &id).unwrap()).unwrap().is_zero());
        let a = random_sym(&mut g, n).unwrap();
        assert!(tachibana(&a, &kulkarni_nomizu(&a, &a).unwrap()).unwrap().is_zero());
        let r = Curvature::of(&random_model(&mut g, n, 2).unwrap()).r;
        assert!(endo_derive(&r, &id.to_tensor()).unwrap().is_zero());
    }
}

/// `P(x1..x4;x,y) = Σ_s [δ(x,x_s) R(.., 𝒮E_y at s, ..) − δ(y,x_s) R(.., 𝒮E_x at s, ..)]`.
fn naive_p(r: &Tensor<Rational>, s: &SymMatrix<Rational>) -> Tensor<Rational> {
    let n = r.n();
    let r_with = |idx: &[usize], slot: usize, u: usize| {
        (0..n).fold(Rational::zero(), |acc, v| {
            let mut j = idx.to_vec();
            j[slot] = v;
            acc + s.get(u, v).clone() * r.get(&j).clone()
        })
    };
    let mut out = Tensor::zeros(n, 6).unwrap();
    for idx in tuples(n, 6) {
        let (x, y) = (idx[4], idx[5]);
        let mut v = Rational::zero();
        for slot in 0..4 {
            v += delta(x, idx[slot]) * r_with(&idx[..4], slot, y) - delta(y, idx[slot]) * r_with(&idx[..4], slot, x);
        }
        out.set(&idx, v);
    }
    out
}

#[test]
fn p_tensor_matches_expansion() {
    let mut g = rng(8);
    let cv = Curvature::of(&random_model(&mut g, 4, 3).unwrap());
    assert_eq!(p_tensor(&cv.r, &cv.ricci).unwrap(), naive_p(&cv.r, &cv.ricci.ricc));
    // space form: 𝒮 = (n−1)k̃ Id
    let k = q(-2, 3);
    let sf = SubmanifoldModel::new(4, k.clone(), vec![SymMatrix::zeros(4).unwrap()]).unwrap();
    let cv = Curvature::of(&sf);
    assert_eq!(cv.ricci.ricc, SymMatrix::scalar(4, k * Rational::integer(3)).unwrap());
    assert_eq!(p_tensor(&cv.r, &cv.ricci).unwrap(), naive_p(&cv.r, &cv.ricci.ricc));
}

#[test]
fn extended_kulkarni_matches_expansion() {
    let mut g = rng(9);
    let a = random_sym(&mut g, 4).unwrap();
    let d = random_tensor(&mut g, 4, 4);
    let mut expect = Tensor::zeros(4, 6).unwrap();
    for i in tuples(4, 6) {
        let (x1, x2, x3, x4) = (i[0], i[1], i[2], i[3]);
        let dd = |p: usize, q: usize| d.get(&[p, q, i[4], i[5]]).clone();
        let v = a.get(x1, x4).clone() * dd(x2, x3) + a.get(x2, x3).clone() * dd(x1, x4)
            - a.get(x1, x3).clone() * dd(x2, x4)
            - a.get(x2, x4).clone() * dd(x1, x3);
        expect.set(&i, v);
    }
    assert_eq!(extended_kulkarni(&a, &d).unwrap(), expect);
}

#[test]
fn commutation_identity_on_random_models() {
    let mut g = rng(10);
    for i in 0..20 {
        let m = random_model(&mut g, 4 + i % 2, 1 + i % 3).unwrap();
        assert!(commutation_residual(&m).unwrap().is_zero(), "model {i}");
    }
}

#[test]
fn sectional_curvature_of_random_planes() {
    let mut g = rng(11);
    let r = Curvature::of(&random_model(&mut g, 5, 2).unwrap()).r;
    for _ in 0..10 {
        let u: Vec<Rational> = (0..5).map(|_| random_rational(&mut g)).collect();
        let v: Vec<Rational> = (0..5).map(|_| random_rational(&mut g)).collect();
        let dot = |x: &[Rational], y: &[Rational]| x.iter().zip(y).fold(Rational::zero(), |s, (a, b)| s + a.clone() * b.clone());
        let mut num = Rational::zero();
        for i in tuples(5, 4) {
            num += r.get(&i).clone() * u[i[0]].clone() * v[i[1]].clone() * v[i[2]].clone() * u[i[3]].clone();
        }
        let den = dot(&u, &u) * dot(&v, &v) - dot(&u, &v) * dot(&u, &v);
        if den.is_zero() {
            continue;
        }
        assert_eq!(sectional_curvature(&r, &u, &v).unwrap(), num.checked_div(&den).unwrap());
    }
}

fn choi_lu(n: usize, a: Rational, b: Rational, c: Rational, mu: Rational, k: Rational) -> SubmanifoldModel<Rational> {
    choi_lu_shape_ops(&ChoiLuParams { n, m: 3, a, b, c, mu, k_tilde: k }).unwrap()
}

#[test]
fn scaling_shape_operators() {
    // k̃ = 0: R ~ s², R·R ~ s⁴, Q(g,R) ~ s², so L_R ~ s²
    let base = choi_lu(5, q(1, 2), Rational::zero(), Rational::zero(), Rational::one(), Rational::zero());
    let s = q(3, 2);
    let scaled = SubmanifoldModel::new(5, Rational::zero(), base.shape_ops().iter().map(|a| a.scale(&s)).collect()).unwrap();
    let (r0, r1) = (Curvature::of(&base).r, Curvature::of(&scaled).r);
    assert_eq!(r1, r0.scale(&(s.clone() * s.clone())));
    let (l0, l1) = (extract_l(&base, LCondition::PseudoSym, 0.0), extract_l(&scaled, LCondition::PseudoSym, 0.0));
    assert_eq!(l0.kind, l1.kind);
    if let (Some(a), Some(b)) = (l0.lambda, l1.lambda) {
        assert_eq!(b, a * s.clone() * s);
    }
}

#[test]
fn frame_relabeling_of_trailing_directions() {
    let m = choi_lu(6, q(1, 3), q(-1, 2), Rational::one(), Rational::integer(2), q(1, 4));
    let cache = TensorCache::new(&m);
    // swap E3 and E6, cycle E4 -> E5 -> E4
    let sigma = [0usize, 1, 5, 4, 3, 2];
    for id in [TensorId::R, TensorId::C, TensorId::RC, TensorId::QgR] {
        let t = cache.get(id);
        let mut j = vec![0; t.rank()];
        for i in tuples(6, t.rank()) {
            for (k, &x) in i.iter().enumerate() {
                j[k] = sigma[x];
            }
            assert_eq!(t.get(&i), t.get(&j), "{id:?} at {i:?}");
        }
    }
}

fn small() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| Rational::new(p, q).unwrap())
}

fn sym4() -> impl Strategy<Value = SymMatrix<Rational>> {
    proptest::collection::vec(small(), 10).prop_map(|v| {
        let mut it = v.into_iter();
        SymMatrix::from_upper(4, |_, _| it.next().unwrap()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kulkarni_nomizu_is_bilinear(a in sym4(), b in sym4(), c in sym4(), s in small()) {
        let lhs = kulkarni_nomizu(&a.try_add(&b.scale(&s)).unwrap(), &c).unwrap();
        let rhs = linear_combination(&[
            (Rational::one(), &kulkarni_nomizu(&a, &c).unwrap()),
            (s, &kulkarni_nomizu(&b, &c).unwrap()),
        ]).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn tachibana_is_bilinear(a in sym4(), b in sym4(), c in sym4(), s in small()) {
        let t = kulkarni_nomizu(&b, &c).unwrap();
        let lhs = tachibana(&a.try_add(&b.scale(&s)).unwrap(), &t).unwrap();
        let rhs = linear_combination(&[
            (Rational::one(), &tachibana(&a, &t).unwrap()),
            (s.clone(), &tachibana(&b, &t).unwrap()),
        ]).unwrap();
        prop_assert_eq!(lhs, rhs);
        let t2 = kulkarni_nomizu(&c, &c).unwrap();
        let lhs = tachibana(&a, &t.try_add(&t2.scale(&s)).unwrap()).unwrap();
        let rhs = tachibana(&a, &t).unwrap().try_add(&tachibana(&a, &t2).unwrap().scale(&s)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    /// Rank oracle: `t1 = λ t2` with `t2 ≠ 0` iff every 2×2 minor of the pair vanishes.
    #[test]
    fn dependence_agrees_with_minors(
        x in proptest::collection::vec(-3i64..=3, 16),
        y in proptest::collection::vec(-3i64..=3, 16),
        scale in proptest::option::of(-3i64..=3),
    ) {
        let y: Vec<i64> = match scale { Some(s) => x.iter().map(|v| v * s).collect(), None => y };
        let mk = |v: &[i64]| Tensor::from_fn(4, 2, |i| Rational::integer(v[i[0] * 4 + i[1]])).unwrap();
        let (t1, t2) = (mk(&y), mk(&x));
        let verdict = dependence(&t1, &t2, 0.0).unwrap();
        let z1 = y.iter().all(|v| *v == 0);
        let z2 = x.iter().all(|v| *v == 0);
        let minors = (0..16).all(|i| (0..16).all(|j| y[i] * x[j] == y[j] * x[i]));
        let expect = match (z1, z2) {
            (true, true) => DependenceKind::BothZero,
            (true, false) => DependenceKind::LeftZero,
            (false, true) => DependenceKind::RightZero,
            _ if minors => DependenceKind::Proportional,
            _ => DependenceKind::Independent,
        };
        prop_assert_eq!(verdict.kind, expect);
        if expect == DependenceKind::Proportional {
            let l = verdict.lambda.unwrap();
            prop_assert_eq!(t2.scale(&l), t1);
        }
    }
}
