//! Dense tensors in an orthonormal frame and the basic products on them.
//!
//! Every tensor stores all `n^rank` components in row-major order (first
//! index most significant). Indices are 0-based here; 1-based numbering is a
//! presentation concern of the reporting layer.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::scalar::Scalar;

/// Largest supported tangent dimension (12⁶ ≈ 3M components).
pub const MAX_DIM: usize = 12;
/// Largest supported rank.
pub const MAX_RANK: usize = 6;

#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<S> {
    n: usize,
    rank: usize,
    data: Vec<S>,
}

fn check_dim(n: usize) -> Result<(), Error> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::Dimension { n, reason: "expected 1 <= n <= 12" });
    }
    Ok(())
}

impl<S: Scalar> Tensor<S> {
    pub fn zeros(n: usize, rank: usize) -> Result<Self, Error> {
        check_dim(n)?;
        if rank > MAX_RANK {
            return Err(Error::Shape { expected: format!("rank <= {MAX_RANK}"), found: format!("rank {rank}") });
        }
        Ok(Tensor { n, rank, data: vec![S::zero(); n.pow(rank as u32)] })
    }

    /// Build from a closure over 0-based index tuples.
    pub fn from_fn(n: usize, rank: usize, mut f: impl FnMut(&[usize]) -> S) -> Result<Self, Error> {
        let mut t = Self::zeros(n, rank)?;
        let mut idx = vec![0usize; rank];
        for off in 0..t.data.len() {
            t.unravel(off, &mut idx);
            t.data[off] = f(&idx);
        }
        Ok(t)
    }

    pub(crate) fn from_raw(n: usize, rank: usize, data: Vec<S>) -> Self {
        debug_assert_eq!(data.len(), n.pow(rank as u32));
        Tensor { n, rank, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [S] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<S> {
        self.data
    }

    #[inline]
    pub fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank);
        idx.iter().fold(0, |acc, &i| acc * self.n + i)
    }

    pub fn unravel(&self, mut off: usize, out: &mut [usize]) {
        for slot in (0..self.rank).rev() {
            out[slot] = off % self.n;
            off /= self.n;
        }
    }

    /// Component at a 0-based tuple. Panics when out of range; see [`Tensor::try_get`].
    #[inline]
    pub fn get(&self, idx: &[usize]) -> &S {
        &self.data[self.offset(idx)]
    }

    pub fn try_get(&self, idx: &[usize]) -> Result<&S, Error> {
        if idx.len() != self.rank {
            return Err(Error::Shape { expected: format!("{}-tuple", self.rank), found: format!("{}-tuple", idx.len()) });
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.n) {
            return Err(Error::IndexOutOfRange { index: bad + 1, n: self.n });
        }
        Ok(self.get(idx))
    }

    pub fn set(&mut self, idx: &[usize], v: S) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(S::is_zero)
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|v| !v.is_zero()).count()
    }

    /// Visit nonzero components in lexicographic order.
    pub fn for_each_nonzero(&self, mut f: impl FnMut(&[usize], &S)) {
        let mut idx = vec![0usize; self.rank];
        for (off, v) in self.data.iter().enumerate() {
            if !v.is_zero() {
                self.unravel(off, &mut idx);
                f(&idx, v);
            }
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        Tensor { n: self.n, rank: self.rank, data: self.data.iter().map(|v| v.clone() * s.clone()).collect() }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Tensor<T> {
        Tensor { n: self.n, rank: self.rank, data: self.data.iter().map(f).collect() }
    }

    pub fn same_shape(&self, other: &Self) -> Result<(), Error> {
        if self.n != other.n || self.rank != other.rank {
            return Err(Error::Shape {
                expected: format!("n={}, rank={}", self.n, self.rank),
                found: format!("n={}, rank={}", other.n, other.rank),
            });
        }
        Ok(())
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, Error> {
        linear_combination(&[(S::one(), self), (-S::one(), other)])
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, Error> {
        linear_combination(&[(S::one(), self), (S::one(), other)])
    }

    /// Permute the tangent basis: component at `idx` moves to `perm[idx]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = self.clone();
        let mut idx = vec![0usize; self.rank];
        for (off, v) in self.data.iter().enumerate() {
            self.unravel(off, &mut idx);
            for i in idx.iter_mut() {
                *i = perm[*i];
            }
            let o = out.offset(&idx);
            out.data[o] = v.clone();
        }
        out
    }
}

/// Symmetric `n × n` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix<S> {
    n: usize,
    data: Vec<S>,
}

impl<S: Scalar> SymMatrix<S> {
    pub fn zeros(n: usize) -> Result<Self, Error> {
        check_dim(n)?;
        Ok(SymMatrix { n, data: vec![S::zero(); n * n] })
    }

    pub fn identity(n: usize) -> Result<Self, Error> {
        Self::scalar(n, S::one())
    }

    pub fn scalar(n: usize, s: S) -> Result<Self, Error> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            m.data[i * n + i] = s.clone();
        }
        Ok(m)
    }

    /// Rows must form a square symmetric array.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self, Error> {
        let n = rows.len();
        check_dim(n)?;
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::Shape { expected: format!("{n}x{n} matrix"), found: format!("row of length {}", r.len()) });
        }
        let data: Vec<S> = rows.into_iter().flatten().collect();
        for i in 0..n {
            for j in i + 1..n {
                if data[i * n + j] != data[j * n + i] {
                    return Err(Error::NotSymmetric { i, j });
                }
            }
        }
        Ok(SymMatrix { n, data })
    }

    /// Build from the closure evaluated on `i <= j`, mirrored below the diagonal.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> S) -> Result<Self, Error> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                m.data[j * n + i] = v.clone();
                m.data[i * n + j] = v;
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.n + j]
    }

    /// Set both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[j * self.n + i] = v.clone();
        self.data[i * self.n + j] = v;
    }

    pub fn trace(&self) -> S {
        let mut t = S::zero();
        for i in 0..self.n {
            t += self.get(i, i).clone();
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(S::is_zero)
    }

    /// `true` when the matrix equals `s * Id` for some `s`.
    pub fn is_scalar_multiple_of_identity(&self) -> bool {
        let d = self.get(0, 0);
        (0..self.n).all(|i| (0..self.n).all(|j| if i == j { self.get(i, j) == d } else { self.get(i, j).is_zero() }))
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        self.data.chunks(self.n).map(<[S]>::to_vec).collect()
    }

    pub fn to_tensor(&self) -> Tensor<S> {
        Tensor::from_raw(self.n, 2, self.data.clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        SymMatrix { n: self.n, data: self.data.iter().map(|v| v.clone() * s.clone()).collect() }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, Error> {
        if self.n != other.n {
            return Err(dim_mismatch(self.n, other.n));
        }
        Ok(SymMatrix { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect() })
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SymMatrix<T> {
        SymMatrix { n: self.n, data: self.data.iter().map(f).collect() }
    }
}

impl<S: Scalar> TryFrom<&Tensor<S>> for SymMatrix<S> {
    type Error = Error;

    fn try_from(t: &Tensor<S>) -> Result<Self, Error> {
        if t.rank() != 2 {
            return Err(Error::Shape { expected: "rank 2".into(), found: format!("rank {}", t.rank()) });
        }
        SymMatrix::from_rows(t.data().chunks(t.n()).map(<[S]>::to_vec).collect())
    }
}

fn dim_mismatch(a: usize, b: usize) -> Error {
    Error::Shape { expected: format!("n={a}"), found: format!("n={b}") }
}

/// Kulkarni–Nomizu product of two symmetric (0,2)-tensors:
/// `(A∧B)(x1,x2,x,y) = A(x1,y)B(x2,x) + A(x2,x)B(x1,y) − A(x1,x)B(x2,y) − A(x2,y)B(x1,x)`.
pub fn kulkarni_nomizu<S: Scalar>(a: &SymMatrix<S>, b: &SymMatrix<S>) -> Result<Tensor<S>, Error> {
    if a.n() != b.n() {
        return Err(dim_mismatch(a.n(), b.n()));
    }
    Tensor::from_fn(a.n(), 4, |i| {
        let (x1, x2, x, y) = (i[0], i[1], i[2], i[3]);
        let mut v = S::zero();
        v.add_prod(a.get(x1, y), b.get(x2, x));
        v.add_prod(a.get(x2, x), b.get(x1, y));
        v -= a.get(x1, x).clone() * b.get(x2, y).clone();
        v -= a.get(x2, y).clone() * b.get(x1, x).clone();
        v
    })
}

/// Coordinates of `(E_x ∧_A E_y)E_z = A(y,z)E_x − A(x,z)E_y` (0-based indices).
pub fn wedge_endomorphism<S: Scalar>(a: &SymMatrix<S>, x: usize, y: usize, z: usize) -> Result<Vec<S>, Error> {
    let n = a.n();
    if let Some(&bad) = [x, y, z].iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange { index: bad + 1, n });
    }
    let mut v = vec![S::zero(); n];
    v[x] += a.get(y, z).clone();
    v[y] -= a.get(x, z).clone();
    Ok(v)
}

/// `Σ λ_k T_k` for tensors of equal rank and dimension.
pub fn linear_combination<S: Scalar>(terms: &[(S, &Tensor<S>)]) -> Result<Tensor<S>, Error> {
    let Some((_, first)) = terms.first() else {
        return Err(Error::Shape { expected: "at least one term".into(), found: "none".into() });
    };
    for (_, t) in &terms[1..] {
        first.same_shape(t)?;
    }
    let mut out = Tensor::<S>::zeros(first.n(), first.rank())?;
    for (c, t) in terms {
        if c.is_zero() {
            continue;
        }
        for (o, v) in out.data.iter_mut().zip(&t.data) {
            if !v.is_zero() {
                o.add_prod(c, v);
            }
        }
    }
    Ok(out)
}

/// Largest `|component|` and the lexicographically first 0-based tuple where
/// it occurs. The zero tensor yields `(0, (0, …, 0))`.
pub fn max_abs_component<S: Scalar>(t: &Tensor<S>) -> (S, Vec<usize>) {
    let mut best = S::zero();
    let mut at = 0usize;
    for (off, v) in t.data.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let a = v.abs();
        if a > best {
            best = a;
            at = off;
        }
    }
    let mut idx = vec![0usize; t.rank()];
    t.unravel(at, &mut idx);
    (best, idx)
}

/// Which algebraic symmetries a rank-4 tensor carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetryClass {
    /// Pair-skew, pair-symmetric and first Bianchi.
    CurvatureLike,
    /// Skew in `(x1,x2)` and in `(x3,x4)` only.
    PairSkewOnly,
}

fn one_based(idx: &[usize]) -> Vec<usize> {
    idx.iter().map(|i| i + 1).collect()
}

fn check_rank(t: &Tensor<impl Scalar>, rank: usize) -> Result<(), Error> {
    if t.rank() != rank {
        return Err(Error::Shape { expected: format!("rank {rank}"), found: format!("rank {}", t.rank()) });
    }
    Ok(())
}

/// Skewness in each consecutive index pair `(0,1)`, `(2,3)`, … of an even-rank tensor.
pub fn check_pair_skew<S: Scalar>(t: &Tensor<S>) -> Result<(), Error> {
    if !t.rank().is_multiple_of(2) {
        return Err(Error::Shape { expected: "even rank".into(), found: format!("rank {}", t.rank()) });
    }
    let mut idx = vec![0usize; t.rank()];
    let mut sw = idx.clone();
    for off in 0..t.data.len() {
        t.unravel(off, &mut idx);
        for p in (0..t.rank()).step_by(2) {
            sw.copy_from_slice(&idx);
            sw.swap(p, p + 1);
            if t.data[off] != -t.get(&sw).clone() {
                return Err(Error::Symmetry { kind: "pair-skew", at: one_based(&idx) });
            }
        }
    }
    Ok(())
}

/// Pair-skew, pair symmetry and first Bianchi identity for a rank-4 tensor.
pub fn check_curvature_like<S: Scalar>(t: &Tensor<S>) -> Result<(), Error> {
    check_rank(t, 4)?;
    check_pair_skew(t)?;
    let n = t.n();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let v = t.get(&[a, b, c, d]);
                    if v != t.get(&[c, d, a, b]) {
                        return Err(Error::Symmetry { kind: "pair-symmetric", at: one_based(&[a, b, c, d]) });
                    }
                    let cyc = v.clone() + t.get(&[b, c, a, d]).clone() + t.get(&[c, a, b, d]).clone();
                    if !cyc.is_zero() {
                        return Err(Error::Symmetry { kind: "Bianchi", at: one_based(&[a, b, c, d]) });
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn symmetry_class<S: Scalar>(t: &Tensor<S>) -> Option<SymmetryClass> {
    if check_curvature_like(t).is_ok() {
        Some(SymmetryClass::CurvatureLike)
    } else if t.rank() == 4 && check_pair_skew(t).is_ok() {
        Some(SymmetryClass::PairSkewOnly)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    #[test]
    fn offset_round_trip() {
        let t: Tensor<Rational> = Tensor::zeros(5, 4).unwrap();
        let mut idx = [0usize; 4];
        for off in [0, 7, 123, 624] {
            t.unravel(off, &mut idx);
            assert_eq!(t.offset(&idx), off);
        }
    }

    #[test]
    fn dimension_guard() {
        assert!(Tensor::<Rational>::zeros(13, 2).is_err());
        assert!(Tensor::<Rational>::zeros(0, 2).is_err());
        assert!(SymMatrix::<Rational>::zeros(12).is_ok());
    }

    #[test]
    fn gg_component() {
        let g = SymMatrix::<Rational>::identity(4).unwrap();
        let gg = kulkarni_nomizu(&g, &g).unwrap();
        assert_eq!(*gg.get(&[0, 1, 1, 0]), q(2, 1));
        assert_eq!(*gg.get(&[0, 1, 0, 1]), q(-2, 1));
        check_curvature_like(&gg).unwrap();
    }

    #[test]
    fn wedge_with_metric() {
        let g = SymMatrix::<Rational>::identity(4).unwrap();
        assert_eq!(wedge_endomorphism(&g, 0, 1, 1).unwrap(), vec![q(1, 1), q(0, 1), q(0, 1), q(0, 1)]);
        assert!(wedge_endomorphism(&g, 0, 1, 2).unwrap().iter().all(Scalar::is_zero));
        assert!(wedge_endomorphism(&g, 0, 4, 2).is_err());
    }

    #[test]
    fn max_abs_ties_take_first() {
        let mut t: Tensor<Rational> = Tensor::zeros(4, 2).unwrap();
        assert_eq!(max_abs_component(&t), (q(0, 1), vec![0, 0]));
        t.set(&[2, 1], q(-5, 1));
        t.set(&[3, 0], q(5, 1));
        assert_eq!(max_abs_component(&t), (q(5, 1), vec![2, 1]));
    }

    #[test]
    fn asymmetric_rows_rejected() {
        let rows = vec![vec![q(1, 1), q(2, 1)], vec![q(3, 1), q(1, 1)]];
        assert_eq!(SymMatrix::from_rows(rows), Err(Error::NotSymmetric { i: 0, j: 1 }));
    }

    #[test]
    fn combination_needs_matching_shapes() {
        let a: Tensor<Rational> = Tensor::zeros(4, 2).unwrap();
        let b: Tensor<Rational> = Tensor::zeros(4, 4).unwrap();
        assert!(linear_combination(&[(q(1, 1), &a), (q(1, 1), &b)]).is_err());
        assert!(linear_combination::<Rational>(&[]).is_err());
    }
}
