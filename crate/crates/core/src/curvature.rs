//! Intrinsic and normal curvature of a pointwise submanifold model.
//!
//! A model is the data `(n, m, k̃, A_1..A_m)` at a single point: the tangent
//! dimension, the codimension, the ambient constant curvature and the shape
//! operators in orthonormal tangent and normal frames.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::scalar::{ExactOrFloat, Scalar};
use crate::tensor::{kulkarni_nomizu, linear_combination, SymMatrix, Tensor};

#[derive(Clone, Debug, PartialEq)]
pub struct SubmanifoldModel<S> {
    n: usize,
    k_tilde: S,
    shape_ops: Vec<SymMatrix<S>>,
}

impl<S: Scalar> SubmanifoldModel<S> {
    /// The codimension is the number of shape operators.
    pub fn new(n: usize, k_tilde: S, shape_ops: Vec<SymMatrix<S>>) -> Result<Self, Error> {
        if !(4..=crate::tensor::MAX_DIM).contains(&n) {
            return Err(Error::Dimension { n, reason: "models need 4 <= n <= 12" });
        }
        if shape_ops.is_empty() {
            return Err(Error::InvalidModel("codimension must be at least 1".into()));
        }
        if let Some(a) = shape_ops.iter().find(|a| a.n() != n) {
            return Err(Error::Shape { expected: format!("{n}x{n} shape operators"), found: format!("{0}x{0}", a.n()) });
        }
        Ok(SubmanifoldModel { n, k_tilde, shape_ops })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.shape_ops.len()
    }

    pub fn k_tilde(&self) -> &S {
        &self.k_tilde
    }

    pub fn shape_ops(&self) -> &[SymMatrix<S>] {
        &self.shape_ops
    }

    pub fn metric(&self) -> SymMatrix<S> {
        SymMatrix::identity(self.n).expect("dimension validated")
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SubmanifoldModel<T> {
        SubmanifoldModel {
            n: self.n,
            k_tilde: f(&self.k_tilde),
            shape_ops: self.shape_ops.iter().map(|a| a.map(&f)).collect(),
        }
    }
}

/// Gauss equation in an orthonormal frame:
/// `R(x1,x2,x3,x4) = Σ_α [A_α(x1,x4)A_α(x2,x3) − A_α(x1,x3)A_α(x2,x4)] + k̃(δ14δ23 − δ13δ24)`.
pub fn gauss_curvature<S: Scalar>(model: &SubmanifoldModel<S>) -> Tensor<S> {
    let n = model.n();
    let mut r = Tensor::from_fn(n, 4, |i| {
        let (x1, x2, x3, x4) = (i[0], i[1], i[2], i[3]);
        let mut v = S::zero();
        for a in model.shape_ops() {
            v.add_prod(a.get(x1, x4), a.get(x2, x3));
            v -= a.get(x1, x3).clone() * a.get(x2, x4).clone();
        }
        v
    })
    .expect("dimension validated");
    let k = model.k_tilde();
    if !k.is_zero() {
        for x1 in 0..n {
            for x2 in 0..n {
                if x1 == x2 {
                    continue;
                }
                let o = r.offset(&[x1, x2, x2, x1]);
                r.data_mut()[o] += k.clone();
                let o = r.offset(&[x1, x2, x1, x2]);
                r.data_mut()[o] -= k.clone();
            }
        }
    }
    r
}

/// Ricci tensor `S_uv = Σ_i R(E_i,E_u,E_v,E_i)` with its trace.
///
/// In an orthonormal frame the Ricci operator has the same matrix as the
/// Ricci tensor, and the scalar curvature is written both κ and τ in the
/// literature; both are `tau` here.
#[derive(Clone, Debug, PartialEq)]
pub struct RicciData<S> {
    pub ricc: SymMatrix<S>,
    pub tau: S,
}

impl<S: Scalar> RicciData<S> {
    pub fn ricci_op(&self) -> &SymMatrix<S> {
        &self.ricc
    }
}

pub fn ricci_from_r<S: Scalar>(r: &Tensor<S>) -> Result<RicciData<S>, Error> {
    if r.rank() != 4 {
        return Err(Error::Shape { expected: "rank 4".into(), found: format!("rank {}", r.rank()) });
    }
    let n = r.n();
    let ricc = SymMatrix::from_upper(n, |u, v| {
        let mut s = S::zero();
        for i in 0..n {
            s += r.get(&[i, u, v, i]).clone();
        }
        s
    })?;
    let tau = ricc.trace();
    Ok(RicciData { ricc, tau })
}

/// Weyl conformal tensor `C = R − g∧S/(n−2) + τ/(2(n−1)(n−2)) g∧g`.
pub fn weyl<S: Scalar>(r: &Tensor<S>, ricci: &RicciData<S>) -> Result<Tensor<S>, Error> {
    let n = r.n();
    if n < 4 {
        return Err(Error::Dimension { n, reason: "the Weyl tensor needs n >= 4" });
    }
    let g = SymMatrix::identity(n)?;
    let gs = kulkarni_nomizu(&g, &ricci.ricc)?;
    let gg = kulkarni_nomizu(&g, &g)?;
    let ni = n as i64;
    let c1 = S::from_ratio(-1, ni - 2);
    let c2 = ricci.tau.checked_div(&S::from_i64(2 * (ni - 1) * (ni - 2)))?;
    linear_combination(&[(S::one(), r), (c1, &gs), (c2, &gg)])
}

/// R, Ricci data and Weyl tensor of one model.
#[derive(Clone, Debug)]
pub struct Curvature<S> {
    pub r: Tensor<S>,
    pub ricci: RicciData<S>,
    pub c: Tensor<S>,
}

impl<S: Scalar> Curvature<S> {
    pub fn of(model: &SubmanifoldModel<S>) -> Self {
        let r = gauss_curvature(model);
        let ricci = ricci_from_r(&r).expect("rank 4");
        let c = weyl(&r, &ricci).expect("n >= 4");
        Curvature { r, ricci, c }
    }
}

/// Normal curvature `R⊥(E_i,E_j;ξ_α,ξ_β)`, skew in both pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalTensor4<S> {
    n: usize,
    m: usize,
    data: Vec<S>,
}

impl<S: Scalar> NormalTensor4<S> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize, alpha: usize, beta: usize) -> &S {
        &self.data[((i * self.n + j) * self.m + alpha) * self.m + beta]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(S::is_zero)
    }

    /// Visit nonzero components as `(i, j, α, β, value)`, 0-based.
    pub fn for_each_nonzero(&self, mut f: impl FnMut([usize; 4], &S)) {
        for i in 0..self.n {
            for j in 0..self.n {
                for a in 0..self.m {
                    for b in 0..self.m {
                        let v = self.get(i, j, a, b);
                        if !v.is_zero() {
                            f([i, j, a, b], v);
                        }
                    }
                }
            }
        }
    }
}

/// Ricci equation: `R⊥(E_i,E_j;ξ_α,ξ_β) = g([A_α,A_β]E_i, E_j)`.
pub fn normal_curvature<S: Scalar>(model: &SubmanifoldModel<S>) -> NormalTensor4<S> {
    let (n, m) = (model.n(), model.m());
    let ops = model.shape_ops();
    let mut data = vec![S::zero(); n * n * m * m];
    for a in 0..m {
        for b in 0..m {
            if a == b {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    // ([A_a, A_b])[j][i]
                    let mut v = S::zero();
                    for k in 0..n {
                        v.add_prod(ops[a].get(j, k), ops[b].get(k, i));
                        v -= ops[b].get(j, k).clone() * ops[a].get(k, i).clone();
                    }
                    data[((i * n + j) * m + a) * m + b] = v;
                }
            }
        }
    }
    NormalTensor4 { n, m, data }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeanCurvatureData<S> {
    /// `tr(A_α)/n` per normal direction.
    pub h_vec: Vec<S>,
    pub h_sq: S,
}

pub fn mean_curvature<S: Scalar>(model: &SubmanifoldModel<S>) -> MeanCurvatureData<S> {
    let n = S::from_i64(model.n() as i64);
    let h_vec: Vec<S> = model.shape_ops().iter().map(|a| a.trace().checked_div(&n).expect("n > 0")).collect();
    let mut h_sq = S::zero();
    for h in &h_vec {
        h_sq.add_prod(h, h);
    }
    MeanCurvatureData { h_vec, h_sq }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalarInvariants<S> {
    /// `τ / (n(n−1))`.
    pub rho: S,
    /// `2/(n(n−1)) · sqrt(Σ_{i<j} Σ_{α<β} R⊥(E_i,E_j;ξ_α,ξ_β)²)`; exact when the
    /// radicand is a rational square.
    pub rho_perp: ExactOrFloat<S>,
    /// Infimum of sectional curvature, filled in only when minimized.
    pub inf_k: Option<f64>,
}

pub fn scalar_invariants<S: Scalar>(
    model: &SubmanifoldModel<S>,
    ricci: &RicciData<S>,
    r_perp: &NormalTensor4<S>,
) -> ScalarInvariants<S> {
    let n = model.n() as i64;
    let norm = S::from_i64(n * (n - 1));
    let rho = ricci.tau.checked_div(&norm).expect("n >= 4");
    let mut radicand = S::zero();
    for i in 0..r_perp.n() {
        for j in i + 1..r_perp.n() {
            for a in 0..r_perp.m() {
                for b in a + 1..r_perp.m() {
                    let v = r_perp.get(i, j, a, b);
                    radicand.add_prod(v, v);
                }
            }
        }
    }
    let factor = S::from_ratio(2, n * (n - 1));
    let rho_perp = match radicand.sqrt_exact() {
        Some(root) => ExactOrFloat::Exact(factor * root),
        None => ExactOrFloat::Float(factor.to_f64() * libm::sqrt(radicand.to_f64())),
    };
    ScalarInvariants { rho, rho_perp, inf_k: None }
}

/// Umbilicity class; the first matching variant wins in declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Umbilicity {
    TotallyGeodesic,
    TotallyUmbilical,
    Minimal,
    PseudoUmbilical,
    Generic,
}

impl Umbilicity {
    pub fn as_str(self) -> &'static str {
        match self {
            Umbilicity::TotallyGeodesic => "TotallyGeodesic",
            Umbilicity::TotallyUmbilical => "TotallyUmbilical",
            Umbilicity::Minimal => "Minimal",
            Umbilicity::PseudoUmbilical => "PseudoUmbilical",
            Umbilicity::Generic => "Generic",
        }
    }
}

pub fn classify_umbilicity<S: Scalar>(model: &SubmanifoldModel<S>) -> Umbilicity {
    let ops = model.shape_ops();
    if ops.iter().all(SymMatrix::is_zero) {
        return Umbilicity::TotallyGeodesic;
    }
    let mc = mean_curvature(model);
    let umbilical = ops.iter().zip(&mc.h_vec).all(|(a, h)| {
        a.is_scalar_multiple_of_identity() && a.get(0, 0) == h
    });
    if umbilical {
        return Umbilicity::TotallyUmbilical;
    }
    if mc.h_vec.iter().all(S::is_zero) {
        return Umbilicity::Minimal;
    }
    let n = model.n();
    let mut a_h = SymMatrix::zeros(n).expect("dimension validated");
    for (a, h) in ops.iter().zip(&mc.h_vec) {
        a_h = a_h.try_add(&a.scale(h)).expect("same n");
    }
    if a_h.is_scalar_multiple_of_identity() {
        Umbilicity::PseudoUmbilical
    } else {
        Umbilicity::Generic
    }
}

/// `R(u,v,v,u) / (|u|²|v|² − ⟨u,v⟩²)`.
pub fn sectional_curvature<S: Scalar>(r: &Tensor<S>, u: &[S], v: &[S]) -> Result<S, Error> {
    let n = r.n();
    if u.len() != n || v.len() != n {
        return Err(Error::Shape { expected: format!("vectors of length {n}"), found: format!("{} and {}", u.len(), v.len()) });
    }
    let dot = |x: &[S], y: &[S]| {
        let mut s = S::zero();
        for (a, b) in x.iter().zip(y) {
            s.add_prod(a, b);
        }
        s
    };
    let den = dot(u, u) * dot(v, v) - dot(u, v) * dot(u, v);
    if den.is_zero() {
        return Err(Error::DegeneratePlane);
    }
    let mut num = S::zero();
    for a in 0..n {
        if u[a].is_zero() {
            continue;
        }
        for b in 0..n {
            if v[b].is_zero() {
                continue;
            }
            let uv = u[a].clone() * v[b].clone();
            for (c, vc) in v.iter().enumerate() {
                if vc.is_zero() {
                    continue;
                }
                let uvv = uv.clone() * vc.clone();
                for (d, ud) in u.iter().enumerate() {
                    let rv = r.get(&[a, b, c, d]);
                    if !rv.is_zero() && !ud.is_zero() {
                        num += uvv.clone() * ud.clone() * rv.clone();
                    }
                }
            }
        }
    }
    num.checked_div(&den)
}

