//! Second, independent evaluation path for single tensor components.
//!
//! Instead of the Gauss formula on (0,4)-tensors and the scatter kernel, this
//! route builds the curvature operators `ℛ(E_x,E_y)` directly from products
//! of shape operators, the Weyl operators `𝒞(E_x,E_y)` from the operator form
//! `ℛ − (X∧𝒮Y + 𝒮X∧Y)/(n−2) + τ/((n−1)(n−2)) X∧Y`, and evaluates
//! derivations one component at a time by gathering. It is slow and only
//! used to confirm mismatches found by the main pipeline.

use alloc::vec;
use alloc::vec::Vec;

use crate::classify::TensorId;
use crate::curvature::SubmanifoldModel;
use crate::error::Error;
use crate::scalar::Scalar;

/// `n²` operators stored as `ops[x*n+y][w*n+z] = g(Op(E_x,E_y)E_z, E_w)`.
struct OpFamily<S> {
    n: usize,
    ops: Vec<Vec<S>>,
}

impl<S: Scalar> OpFamily<S> {
    fn build(n: usize, mut f: impl FnMut(usize, usize, usize, usize) -> S) -> Self {
        let mut ops = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let mut m = vec![S::zero(); n * n];
                for w in 0..n {
                    for z in 0..n {
                        m[w * n + z] = f(x, y, z, w);
                    }
                }
                ops.push(m);
            }
        }
        OpFamily { n, ops }
    }

    /// `g(Op(E_x,E_y)E_z, E_w)`, which is the (0,4) component `(x,y,z,w)`.
    fn at(&self, x: usize, y: usize, z: usize, w: usize) -> &S {
        &self.ops[x * self.n + y][w * self.n + z]
    }
}

/// Operator families of one model.
pub struct OperatorRoute<S> {
    n: usize,
    r: OpFamily<S>,
    c: OpFamily<S>,
    gws: OpFamily<S>,
    ricci: Vec<S>,
    tau: S,
}

fn d<S: Scalar>(i: usize, j: usize) -> S {
    if i == j {
        S::one()
    } else {
        S::zero()
    }
}

impl<S: Scalar> OperatorRoute<S> {
    pub fn new(model: &SubmanifoldModel<S>) -> Result<Self, Error> {
        let n = model.n();
        let k = model.k_tilde().clone();
        let a = model.shape_ops();
        // ℛ(X,Y)Z = Σ_α g(A_αY,Z)A_αX − g(A_αX,Z)A_αY + k̃(g(Y,Z)X − g(X,Z)Y)
        let r = OpFamily::build(n, |x, y, z, w| {
            let mut v = k.clone() * (d::<S>(y, z) * d(w, x) - d::<S>(x, z) * d(w, y));
            for op in a {
                v += op.get(y, z).clone() * op.get(w, x).clone();
                v -= op.get(x, z).clone() * op.get(w, y).clone();
            }
            v
        });
        // Ricc(U,V) = tr(Z ↦ ℛ(Z,U)V)
        let mut ricci = vec![S::zero(); n * n];
        for u in 0..n {
            for v in 0..n {
                let mut s = S::zero();
                for z in 0..n {
                    s += r.at(z, u, v, z).clone();
                }
                ricci[u * n + v] = s;
            }
        }
        let tau = (0..n).fold(S::zero(), |acc, i| acc + ricci[i * n + i].clone());
        let sr = |i: usize, j: usize| ricci[i * n + j].clone();
        // (E_x ∧ 𝒮E_y + 𝒮E_x ∧ E_y)E_z, component w
        let gws = OpFamily::build(n, |x, y, z, w| {
            sr(y, z) * d(w, x) - d::<S>(x, z) * sr(w, y) + d::<S>(y, z) * sr(w, x) - sr(x, z) * d(w, y)
        });
        let ni = n as i64;
        let c1 = S::one().checked_div(&S::from_i64(ni - 2))?;
        let c2 = tau.checked_div(&S::from_i64((ni - 1) * (ni - 2)))?;
        let c = OpFamily::build(n, |x, y, z, w| {
            let wedge = d::<S>(y, z) * d(w, x) - d::<S>(x, z) * d(w, y);
            r.at(x, y, z, w).clone() - c1.clone() * gws.at(x, y, z, w).clone() + c2.clone() * wedge
        });
        Ok(OperatorRoute { n, r, c, gws, ricci, tau })
    }

    pub fn tau(&self) -> &S {
        &self.tau
    }

    fn rank4(&self, id: TensorId) -> Option<&OpFamily<S>> {
        match id {
            TensorId::R => Some(&self.r),
            TensorId::C => Some(&self.c),
            TensorId::GwRicc => Some(&self.gws),
            _ => None,
        }
    }

    /// `g((E_x ∧_A E_y)E_z, E_w) = A(y,z)δ_wx − A(x,z)δ_wy`.
    fn wedge(&self, metric: bool, x: usize, y: usize, z: usize, w: usize) -> S {
        let a = |i: usize, j: usize| if metric { d::<S>(i, j) } else { self.ricci[i * self.n + j].clone() };
        a(y, z) * d(w, x) - a(x, z) * d(w, y)
    }

    /// `−Σ_s Σ_w B(x,y,x_s,w) T(x_1,..,w,..,x_4)` for one component.
    fn derive(&self, b: &dyn Fn(usize, usize, usize, usize) -> S, t: &OpFamily<S>, idx: &[usize]) -> S {
        let (x, y) = (idx[4], idx[5]);
        let mut out = S::zero();
        let mut k = [idx[0], idx[1], idx[2], idx[3]];
        for s in 0..4 {
            let orig = k[s];
            for w in 0..self.n {
                let bv = b(x, y, orig, w);
                if bv.is_zero() {
                    continue;
                }
                k[s] = w;
                out -= bv * t.at(k[0], k[1], k[2], k[3]).clone();
            }
            k[s] = orig;
        }
        out
    }

    /// One component of a rank-4 or rank-6 tensor (0-based index).
    pub fn component(&self, id: TensorId, idx: &[usize]) -> Result<S, Error> {
        if let Some(f) = self.rank4(id) {
            return Ok(f.at(idx[0], idx[1], idx[2], idx[3]).clone());
        }
        if idx.len() != 6 {
            return Err(Error::Shape { expected: "6 indices".into(), found: alloc::format!("{}", idx.len()) });
        }
        let by_r = |x, y, z, w| self.r.at(x, y, z, w).clone();
        let by_c = |x, y, z, w| self.c.at(x, y, z, w).clone();
        let by_g = |x, y, z, w| self.wedge(true, x, y, z, w);
        let by_s = |x, y, z, w| self.wedge(false, x, y, z, w);
        Ok(match id {
            TensorId::RR => self.derive(&by_r, &self.r, idx),
            TensorId::RC => self.derive(&by_r, &self.c, idx),
            TensorId::CR => self.derive(&by_c, &self.r, idx),
            TensorId::CC => self.derive(&by_c, &self.c, idx),
            TensorId::RCmCR => self.derive(&by_r, &self.c, idx) - self.derive(&by_c, &self.r, idx),
            TensorId::QgR => self.derive(&by_g, &self.r, idx),
            TensorId::QgC => self.derive(&by_g, &self.c, idx),
            TensorId::QgGR => self.derive(&by_g, &self.gws, idx),
            TensorId::QSR => self.derive(&by_s, &self.r, idx),
            TensorId::QSC => self.derive(&by_s, &self.c, idx),
            TensorId::QSGS => self.derive(&by_s, &self.gws, idx),
            other => return Err(Error::Parse(alloc::format!("no operator route for {}", other.code()))),
        })
    }
}
