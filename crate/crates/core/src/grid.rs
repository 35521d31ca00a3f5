//! Parameter grids over Choi–Lu frames and seeded random models.

use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::curvature::SubmanifoldModel;
use crate::error::Error;
use crate::scalar::{q, Rational, Scalar};
use crate::tensor::SymMatrix;
use crate::wintgen::ChoiLuParams;

/// Per-variable value lists plus the dimensions to sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub a: Vec<Rational>,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
    pub mu: Vec<Rational>,
    pub k_tilde: Vec<Rational>,
    pub n_list: Vec<usize>,
    pub m_list: Vec<usize>,
}

impl GridSpec {
    /// `{−2,−1,0,1,2}/3` for every variable, `n ∈ 4..=7`, `m ∈ {2,3,4}`.
    pub fn default_grid() -> Self {
        let vals: Vec<Rational> = (-2..=2).map(|k| q(k, 3)).collect();
        GridSpec {
            a: vals.clone(),
            b: vals.clone(),
            c: vals.clone(),
            mu: vals.clone(),
            k_tilde: vals,
            n_list: vec![4, 5, 6, 7],
            m_list: vec![2, 3, 4],
        }
    }

    /// Same values with a single codimension, as used by the table audits.
    pub fn audit_grid() -> Self {
        GridSpec { m_list: vec![3], ..Self::default_grid() }
    }

    pub fn validate(&self) -> Result<(), Error> {
        let lists = [&self.a, &self.b, &self.c, &self.mu, &self.k_tilde];
        if lists.iter().any(|l| l.is_empty()) || self.n_list.is_empty() || self.m_list.is_empty() {
            return Err(Error::InvalidModel("grid lists must be nonempty".into()));
        }
        if let Some(&n) = self.n_list.iter().find(|&&n| !(4..=crate::tensor::MAX_DIM).contains(&n)) {
            return Err(Error::Dimension { n, reason: "grid dimensions need 4 <= n <= 12" });
        }
        if self.m_list.iter().any(|&m| m < 2) {
            return Err(Error::InvalidModel("grid codimensions need m >= 2".into()));
        }
        Ok(())
    }

    /// Cartesian product in the order n, m, a, b, c, μ, k̃. Points with `c ≠ 0`
    /// and `m = 2` have no Choi–Lu realization and are skipped.
    pub fn points(&self) -> Vec<ChoiLuParams<Rational>> {
        let mut out = Vec::new();
        for &n in &self.n_list {
            for &m in &self.m_list {
                for a in &self.a {
                    for b in &self.b {
                        for c in &self.c {
                            if m == 2 && !c.is_zero() {
                                continue;
                            }
                            for mu in &self.mu {
                                for k in &self.k_tilde {
                                    out.push(ChoiLuParams {
                                        n,
                                        m,
                                        a: a.clone(),
                                        b: b.clone(),
                                        c: c.clone(),
                                        mu: mu.clone(),
                                        k_tilde: k.clone(),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Uniform draw of `k/8` with `k ∈ [−16, 16]`.
pub fn random_rational(rng: &mut dyn RngCore) -> Rational {
    let k = (rng.next_u32() % 33) as i64 - 16;
    q(k, 8)
}

/// A general model with independent random symmetric shape operators.
pub fn random_model(rng: &mut dyn RngCore, n: usize, m: usize) -> Result<SubmanifoldModel<Rational>, Error> {
    let k_tilde = random_rational(rng);
    let mut ops = Vec::with_capacity(m);
    for _ in 0..m {
        ops.push(SymMatrix::from_upper(n, |_, _| random_rational(rng))?);
    }
    SubmanifoldModel::new(n, k_tilde, ops)
}

/// Random symmetric matrix with the same value distribution.
pub fn random_sym(rng: &mut dyn RngCore, n: usize) -> Result<SymMatrix<Rational>, Error> {
    SymMatrix::from_upper(n, |_, _| random_rational(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_pcg::Pcg64;
    use rand_core::SeedableRng;

    #[test]
    fn default_grid_size() {
        let g = GridSpec::default_grid();
        // m=2 keeps only c=0
        assert_eq!(g.points().len(), 4 * (625 + 2 * 3125));
        assert_eq!(GridSpec::audit_grid().points().len(), 4 * 3125);
    }

    #[test]
    fn random_models_are_reproducible() {
        let a = random_model(&mut Pcg64::seed_from_u64(7), 4, 2).unwrap();
        let b = random_model(&mut Pcg64::seed_from_u64(7), 4, 2).unwrap();
        assert_eq!(a, b);
    }
}
