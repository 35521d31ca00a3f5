//! Numerical infimum of sectional curvature over 2-planes.
//!
//! For an orthonormal pair `(u, v)` the sectional curvature is
//! `f(u,v) = R(u,v,v,u)`. We run projected gradient descent on the Stiefel
//! manifold of orthonormal pairs with Armijo backtracking and a Gram–Schmidt
//! retraction, from every coordinate plane and from seeded random planes.
//! The result is best-effort, not a certified global minimum.

use alloc::vec;
use alloc::vec::Vec;

use rand_core::{RngCore, SeedableRng};
use rand_pcg::Pcg64;

use crate::tensor::Tensor;

#[derive(Clone, Debug, PartialEq)]
pub struct Strategy {
    pub coordinate_seeds: bool,
    pub random_restarts: usize,
    /// Stop a descent once the tangent gradient norm drops below this.
    pub refine_tol: f64,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy { coordinate_seeds: true, random_restarts: 32, refine_tol: 1e-12, max_iters: 2000, seed: 0x5eed }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SectionalMin {
    pub value: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Orthonormalize in place; `None` when the pair is (nearly) dependent.
fn gram_schmidt(u: &mut [f64], v: &mut [f64]) -> Option<()> {
    let nu = libm::sqrt(dot(u, u));
    if nu < 1e-14 {
        return None;
    }
    u.iter_mut().for_each(|x| *x /= nu);
    let p = dot(u, v);
    v.iter_mut().zip(u.iter()).for_each(|(y, x)| *y -= p * x);
    let nv = libm::sqrt(dot(v, v));
    if nv < 1e-14 {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= nv);
    Some(())
}

struct Objective<'a> {
    r: &'a Tensor<f64>,
    n: usize,
}

impl Objective<'_> {
    fn at(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.r.data()[((i * self.n + j) * self.n + k) * self.n + l]
    }

    /// `f = R(u,v,v,u)` with `∂f/∂u = 2M(v)u`, `∂f/∂v = 2N(u)v`.
    fn value_grad(&self, u: &[f64], v: &[f64]) -> (f64, Vec<f64>, Vec<f64>) {
        let n = self.n;
        let mut mv = vec![0.0; n * n];
        let mut nu = vec![0.0; n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let x = self.at(a, b, c, d);
                        if x != 0.0 {
                            mv[a * n + d] += x * v[b] * v[c];
                            nu[b * n + c] += x * u[a] * u[d];
                        }
                    }
                }
            }
        }
        let mut gu = vec![0.0; n];
        let mut gv = vec![0.0; n];
        let mut f = 0.0;
        for a in 0..n {
            for d in 0..n {
                gu[a] += 2.0 * mv[a * n + d] * u[d];
                gv[a] += 2.0 * nu[a * n + d] * v[d];
                f += u[a] * mv[a * n + d] * u[d];
            }
        }
        (f, gu, gv)
    }

    fn value(&self, u: &[f64], v: &[f64]) -> f64 {
        self.value_grad(u, v).0
    }
}

fn descend(obj: &Objective<'_>, mut u: Vec<f64>, mut v: Vec<f64>, st: &Strategy) -> SectionalMin {
    let mut f = obj.value(&u, &v);
    let mut step = 1.0;
    for _ in 0..st.max_iters {
        let (_, gu, gv) = obj.value_grad(&u, &v);
        // tangent projection: G − X sym(XᵀG) with X = [u v]
        let (uu, vv) = (dot(&u, &gu), dot(&v, &gv));
        let off = 0.5 * (dot(&u, &gv) + dot(&v, &gu));
        let tu: Vec<f64> = (0..u.len()).map(|i| gu[i] - u[i] * uu - v[i] * off).collect();
        let tv: Vec<f64> = (0..u.len()).map(|i| gv[i] - u[i] * off - v[i] * vv).collect();
        let g2 = dot(&tu, &tu) + dot(&tv, &tv);
        if libm::sqrt(g2) < st.refine_tol {
            break;
        }
        step = libm::fmin(step * 2.0, 1e3);
        let mut moved = false;
        while step > 1e-16 {
            let mut nu: Vec<f64> = u.iter().zip(&tu).map(|(x, g)| x - step * g).collect();
            let mut nv: Vec<f64> = v.iter().zip(&tv).map(|(x, g)| x - step * g).collect();
            if gram_schmidt(&mut nu, &mut nv).is_some() {
                let nf = obj.value(&nu, &nv);
                if nf <= f - 1e-4 * step * g2 {
                    u = nu;
                    v = nv;
                    f = nf;
                    moved = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
    }
    SectionalMin { value: f, u, v }
}

/// Best-found minimum of the sectional curvature of a curvature-like `R`.
pub fn inf_sectional(r: &Tensor<f64>, st: &Strategy) -> SectionalMin {
    let n = r.n();
    let obj = Objective { r, n };
    let mut best: Option<SectionalMin> = None;
    let mut keep = |cand: SectionalMin| {
        if best.as_ref().is_none_or(|b| cand.value < b.value) {
            best = Some(cand);
        }
    };
    if st.coordinate_seeds {
        for i in 0..n {
            for j in i + 1..n {
                let mut u = vec![0.0; n];
                let mut v = vec![0.0; n];
                u[i] = 1.0;
                v[j] = 1.0;
                keep(descend(&obj, u, v, st));
            }
        }
    }
    let mut rng = Pcg64::seed_from_u64(st.seed);
    let mut uniform = || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0;
    let mut done = 0;
    while done < st.random_restarts {
        let mut u: Vec<f64> = (0..n).map(|_| uniform()).collect();
        let mut v: Vec<f64> = (0..n).map(|_| uniform()).collect();
        if gram_schmidt(&mut u, &mut v).is_none() {
            continue;
        }
        keep(descend(&obj, u, v, st));
        done += 1;
    }
    best.unwrap_or(SectionalMin { value: f64::NAN, u: vec![], v: vec![] })
}
