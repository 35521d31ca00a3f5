//! Curvature derivations `B·T`, Tachibana tensors `Q(A,T)`, the P-tensor and
//! the commutation identity for `R·C − C·R`.
//!
//! Every derivation is computed by one scatter kernel: an endomorphism family
//! `ℬ(E_x,E_y)` with matrix `ℬ[z][w] = B(x,y,z,w)` acts on `T` by
//! `(ℬ·T)(x1..xk;x,y) = −Σ_s Σ_w B(x,y,x_s,w) T(x1,..,w,..,xk)` (w in slot s).
//! The kernel walks the nonzero components of `T` and, for each slot, the
//! family entries whose last index matches, so sparse Choi–Lu inputs stay
//! cheap while dense random models cost the same as a plain gather.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::curvature::{Curvature, RicciData, SubmanifoldModel};
use crate::error::Error;
use crate::scalar::Scalar;
use crate::tensor::{check_pair_skew, linear_combination, SymMatrix, Tensor};

/// Nonzero entries of an endomorphism family, bucketed by target index `w`.
struct Family<S> {
    n: usize,
    by_w: Vec<Vec<(usize, usize, usize, S)>>,
}

impl<S: Scalar> Family<S> {
    fn from_tensor(b: &Tensor<S>) -> Self {
        let n = b.n();
        let mut by_w = vec![Vec::new(); n];
        b.for_each_nonzero(|i, v| by_w[i[3]].push((i[0], i[1], i[2], v.clone())));
        Family { n, by_w }
    }

    /// `ℬ(E_x,E_y)E_z = A(y,z)E_x − A(x,z)E_y`, i.e. the family `X ∧_A Y`.
    fn wedge(a: &SymMatrix<S>) -> Self {
        Self::from_tensor(&wedge_family(a))
    }
}

/// The (generally non-skew) family tensor `B_A(x,y,z,w) = A(y,z)δ_xw − A(x,z)δ_yw`.
pub fn wedge_family<S: Scalar>(a: &SymMatrix<S>) -> Tensor<S> {
    let n = a.n();
    let mut t = Tensor::zeros(n, 4).expect("dimension validated");
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let col = crate::tensor::wedge_endomorphism(a, x, y, z).expect("in range");
                for (w, v) in col.into_iter().enumerate() {
                    if !v.is_zero() {
                        t.set(&[x, y, z, w], v);
                    }
                }
            }
        }
    }
    t
}

fn check_derivable<S: Scalar>(t: &Tensor<S>, n: usize) -> Result<(), Error> {
    if t.rank() != 2 && t.rank() != 4 {
        return Err(Error::Shape { expected: "rank 2 or 4".into(), found: format!("rank {}", t.rank()) });
    }
    if t.n() != n {
        return Err(Error::Shape { expected: format!("n={n}"), found: format!("n={}", t.n()) });
    }
    Ok(())
}

fn derive_family<S: Scalar>(fam: &Family<S>, t: &Tensor<S>) -> Tensor<S> {
    let n = fam.n;
    let k = t.rank();
    let mut out = Tensor::<S>::zeros(n, k + 2).expect("rank bounded");
    let strides: Vec<usize> = (0..k).map(|s| n.pow((k - 1 - s) as u32)).collect();
    let mut idx = vec![0usize; k];
    let data = out.data_mut();
    for (off, v) in t.data().iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        t.unravel(off, &mut idx);
        for s in 0..k {
            let w = idx[s];
            let base = off - w * strides[s];
            for (x, y, z, b) in &fam.by_w[w] {
                let o = ((base + z * strides[s]) * n + x) * n + y;
                data[o].sub_prod(b, v);
            }
        }
    }
    out
}

/// `B·T` for a family `B` skew in both index pairs (`R·T`, `C·T`).
pub fn endo_derive<S: Scalar>(b: &Tensor<S>, t: &Tensor<S>) -> Result<Tensor<S>, Error> {
    if b.rank() != 4 {
        return Err(Error::Shape { expected: "rank 4 endomorphism family".into(), found: format!("rank {}", b.rank()) });
    }
    check_derivable(t, b.n())?;
    check_pair_skew(b)?;
    Ok(derive_family(&Family::from_tensor(b), t))
}

/// Tachibana tensor `Q(A,T)`: the derivation of `T` by `X ∧_A Y`.
pub fn tachibana<S: Scalar>(a: &SymMatrix<S>, t: &Tensor<S>) -> Result<Tensor<S>, Error> {
    check_derivable(t, a.n())?;
    Ok(derive_family(&Family::wedge(a), t))
}

/// `P(x1..x4;x,y) = Σ_s [δ(x,x_s) R(..𝒮E_y at s..) − δ(y,x_s) R(..𝒮E_x at s..)]`,
/// with `𝒮E_u = Σ_v S_uv E_v`.
pub fn p_tensor<S: Scalar>(r: &Tensor<S>, ricci: &RicciData<S>) -> Result<Tensor<S>, Error> {
    if r.rank() != 4 || ricci.ricc.n() != r.n() {
        return Err(Error::Shape { expected: "rank-4 R with matching Ricci".into(), found: format!("rank {}", r.rank()) });
    }
    let n = r.n();
    let s = &ricci.ricc;
    let mut out = Tensor::<S>::zeros(n, 6)?;
    let n4 = n.pow(4);
    let strides = [n * n * n, n * n, n, 1];
    let mut idx = [0usize; 4];
    let mut rs = vec![S::zero(); n];
    for off in 0..n4 {
        r.unravel(off, &mut idx);
        for slot in 0..4 {
            let xs = idx[slot];
            let base = off - xs * strides[slot];
            // rs[u] = R with 𝒮E_u in this slot
            for (u, acc) in rs.iter_mut().enumerate() {
                *acc = S::zero();
                for v in 0..n {
                    let sv = s.get(u, v);
                    if !sv.is_zero() {
                        acc.add_prod(sv, &r.data()[base + v * strides[slot]]);
                    }
                }
            }
            let data = out.data_mut();
            for (u, val) in rs.iter().enumerate() {
                if val.is_zero() {
                    continue;
                }
                data[(off * n + xs) * n + u] += val.clone();
                data[(off * n + u) * n + xs] -= val.clone();
            }
        }
    }
    Ok(out)
}

/// Kulkarni–Nomizu product of a symmetric `A` with a rank-4 `D` stored as
/// `(x1,x2;x,y)`, carrying the `(x,y)` pair along:
/// `A(1,4)D(2,3) + A(2,3)D(1,4) − A(1,3)D(2,4) − A(2,4)D(1,3)`.
pub fn extended_kulkarni<S: Scalar>(a: &SymMatrix<S>, d: &Tensor<S>) -> Result<Tensor<S>, Error> {
    if d.rank() != 4 || d.n() != a.n() {
        return Err(Error::Shape { expected: format!("rank 4, n={}", a.n()), found: format!("rank {}, n={}", d.rank(), d.n()) });
    }
    let n = a.n();
    let n2 = n * n;
    let mut out = Tensor::<S>::zeros(n, 6)?;
    let data = out.data_mut();
    let dd = d.data();
    // (position of the A pair, position of the D pair, sign)
    let patterns: [([usize; 2], [usize; 2], bool); 4] =
        [([0, 3], [1, 2], true), ([1, 2], [0, 3], true), ([0, 2], [1, 3], false), ([1, 3], [0, 2], false)];
    let mut x = [0usize; 4];
    for (ap, dp, plus) in patterns {
        for i in 0..n {
            for j in 0..n {
                let av = a.get(i, j);
                if av.is_zero() {
                    continue;
                }
                x[ap[0]] = i;
                x[ap[1]] = j;
                for p in 0..n {
                    for q in 0..n {
                        x[dp[0]] = p;
                        x[dp[1]] = q;
                        let head = ((x[0] * n + x[1]) * n + x[2]) * n + x[3];
                        let dbase = (p * n + q) * n2;
                        for xy in 0..n2 {
                            let dv = &dd[dbase + xy];
                            if dv.is_zero() {
                                continue;
                            }
                            if plus {
                                data[head * n2 + xy].add_prod(av, dv);
                            } else {
                                data[head * n2 + xy].sub_prod(av, dv);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Residual `(n−2)(R·C − C·R) − Q(S − τ/(n−1) g, R) + g∧(R·S) − P`.
pub fn commutation_residual_of<S: Scalar>(cv: &Curvature<S>) -> Result<Tensor<S>, Error> {
    let n = cv.r.n();
    let ni = n as i64;
    let g = SymMatrix::identity(n)?;
    let rc = endo_derive(&cv.r, &cv.c)?;
    let cr = endo_derive(&cv.c, &cv.r)?;
    let shift = cv.ricci.tau.checked_div(&S::from_i64(ni - 1))?;
    let a = cv.ricci.ricc.try_add(&g.scale(&-shift))?;
    let q = tachibana(&a, &cv.r)?;
    let rs = endo_derive(&cv.r, &cv.ricci.ricc.to_tensor())?;
    let ext = extended_kulkarni(&g, &rs)?;
    let p = p_tensor(&cv.r, &cv.ricci)?;
    let m = S::from_i64(ni - 2);
    linear_combination(&[(m.clone(), &rc), (-m, &cr), (-S::one(), &q), (S::one(), &ext), (-S::one(), &p)])
}

pub fn commutation_residual<S: Scalar>(model: &SubmanifoldModel<S>) -> Result<Tensor<S>, Error> {
    commutation_residual_of(&Curvature::of(model))
}
