//! Wintgen ideal frames: Choi–Lu shape operators, their closed-form curvature
//! tables, the DDVV gap, and builders for the special branches appearing in
//! the classification theorems.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::curvature::{mean_curvature, normal_curvature, ricci_from_r, scalar_invariants, gauss_curvature, SubmanifoldModel};
use crate::error::Error;
use crate::scalar::{ExactOrFloat, Scalar};
use crate::tensor::SymMatrix;

/// Parameters `(a, b, c, μ)` of a Choi–Lu frame plus `n`, `m` and `k̃`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiLuParams<S> {
    pub n: usize,
    pub m: usize,
    pub a: S,
    pub b: S,
    pub c: S,
    pub mu: S,
    pub k_tilde: S,
}

impl<S: Scalar> ChoiLuParams<S> {
    pub fn h_sq(&self) -> S {
        self.a.clone() * self.a.clone() + self.b.clone() * self.b.clone() + self.c.clone() * self.c.clone()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> ChoiLuParams<T> {
        ChoiLuParams { n: self.n, m: self.m, a: f(&self.a), b: f(&self.b), c: f(&self.c), mu: f(&self.mu), k_tilde: f(&self.k_tilde) }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(4..=crate::tensor::MAX_DIM).contains(&self.n) {
            return Err(Error::Dimension { n: self.n, reason: "Choi-Lu frames need 4 <= n <= 12" });
        }
        if self.m < 2 {
            return Err(Error::InvalidModel("Choi-Lu frames need codimension m >= 2".into()));
        }
        if self.m == 2 && !self.c.is_zero() {
            return Err(Error::InvalidModel("c != 0 needs a third normal direction (m >= 3)".into()));
        }
        Ok(())
    }
}

/// `A_1 = aI` plus `μ` at (1,2),(2,1); `A_2 = bI` plus `+μ` at (1,1) and `−μ` at
/// (2,2); `A_3 = cI`; the remaining operators vanish.
pub fn choi_lu_shape_ops<S: Scalar>(p: &ChoiLuParams<S>) -> Result<SubmanifoldModel<S>, Error> {
    p.validate()?;
    let n = p.n;
    let mut a1 = SymMatrix::scalar(n, p.a.clone())?;
    a1.set(0, 1, p.mu.clone());
    let mut a2 = SymMatrix::scalar(n, p.b.clone())?;
    a2.set(0, 0, p.b.clone() + p.mu.clone());
    a2.set(1, 1, p.b.clone() - p.mu.clone());
    let mut ops = vec![a1, a2];
    if p.m >= 3 {
        ops.push(SymMatrix::scalar(n, p.c.clone())?);
    }
    while ops.len() < p.m {
        ops.push(SymMatrix::zeros(n)?);
    }
    SubmanifoldModel::new(n, p.k_tilde.clone(), ops)
}

/// Closed-form components of `R`, `Ricc`, `g∧Ricc`, `C`, `τ` and `ρ` in a
/// Choi–Lu frame. Indices `i, j ≥ 3` are distinct.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentTable<S> {
    pub r_1221: S,
    pub r_1ii1: S,
    pub r_2ii2: S,
    pub r_ijji: S,
    pub r_1ii2: S,
    pub s_11: S,
    pub s_12: S,
    pub s_22: S,
    pub s_ii: S,
    pub gwr_1221: S,
    pub gwr_1ii1: S,
    pub gwr_2ii2: S,
    pub gwr_ijji: S,
    pub c_1221: S,
    pub c_1ii1: S,
    pub c_2ii2: S,
    pub c_ijji: S,
    pub tau: S,
    pub rho: S,
}

impl<S: Scalar> ComponentTable<S> {
    /// `(name, value)` pairs in declaration order.
    pub fn entries(&self) -> [(&'static str, &S); 19] {
        [
            ("R_1221", &self.r_1221),
            ("R_1ii1", &self.r_1ii1),
            ("R_2ii2", &self.r_2ii2),
            ("R_ijji", &self.r_ijji),
            ("R_1ii2", &self.r_1ii2),
            ("S_11", &self.s_11),
            ("S_12", &self.s_12),
            ("S_22", &self.s_22),
            ("S_ii", &self.s_ii),
            ("gwR_1221", &self.gwr_1221),
            ("gwR_1ii1", &self.gwr_1ii1),
            ("gwR_2ii2", &self.gwr_2ii2),
            ("gwR_ijji", &self.gwr_ijji),
            ("C_1221", &self.c_1221),
            ("C_1ii1", &self.c_1ii1),
            ("C_2ii2", &self.c_2ii2),
            ("C_ijji", &self.c_ijji),
            ("tau", &self.tau),
            ("rho", &self.rho),
        ]
    }
}

pub fn closed_form_table<S: Scalar>(p: &ChoiLuParams<S>) -> ComponentTable<S> {
    let n = p.n as i64;
    let int = S::from_i64;
    let hk = p.h_sq() + p.k_tilde.clone();
    let mu2 = p.mu.clone() * p.mu.clone();
    let bmu = p.b.clone() * p.mu.clone();
    let amu = p.a.clone() * p.mu.clone();
    let two_mu2 = int(2) * mu2.clone();
    let s_base = int(n - 1) * hk.clone() - two_mu2.clone();
    let gw_base = int(2 * (n - 1)) * hk.clone();
    let tau = int(n * (n - 1)) * hk.clone() - int(4) * mu2.clone();
    let c_side = S::from_ratio(2 * (n - 3), (n - 1) * (n - 2)) * mu2.clone();
    ComponentTable {
        r_1221: hk.clone() - two_mu2.clone(),
        r_1ii1: hk.clone() + bmu.clone(),
        r_2ii2: hk.clone() - bmu.clone(),
        r_ijji: hk.clone(),
        r_1ii2: amu.clone(),
        s_11: s_base.clone() + int(n - 2) * bmu.clone(),
        s_12: int(n - 2) * amu,
        s_22: s_base - int(n - 2) * bmu.clone(),
        s_ii: int(n - 1) * hk.clone(),
        gwr_1221: gw_base.clone() - int(4) * mu2.clone(),
        gwr_1ii1: gw_base.clone() - two_mu2.clone() + int(n - 2) * bmu.clone(),
        gwr_2ii2: gw_base.clone() - two_mu2 - int(n - 2) * bmu,
        gwr_ijji: gw_base,
        c_1221: S::from_ratio(-2 * (n - 3), n - 1) * mu2.clone(),
        c_1ii1: c_side.clone(),
        c_2ii2: c_side,
        c_ijji: S::from_ratio(-4, (n - 1) * (n - 2)) * mu2.clone(),
        tau,
        rho: hk - S::from_ratio(4, n * (n - 1)) * mu2,
    }
}

/// `H² − ρ⊥ + k̃ − ρ`; nonnegative for every submanifold, zero exactly on
/// Wintgen ideal points. Exact whenever `ρ⊥` is.
pub fn ddvv_gap<S: Scalar>(model: &SubmanifoldModel<S>) -> ExactOrFloat<S> {
    let r = gauss_curvature(model);
    let ricci = ricci_from_r(&r).expect("rank 4");
    let inv = scalar_invariants(model, &ricci, &normal_curvature(model));
    let h_sq = mean_curvature(model).h_sq;
    let rest = h_sq + model.k_tilde().clone() - inv.rho;
    inv.rho_perp.neg().add_scalar(&rest)
}

/// Special parameter branches used by the theorems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseId {
    /// `a = b = 0`, `c² = −k̃`, `μ ≠ 0` (Weyl-semi-symmetric branch).
    T2ii,
    T6ii,
    T7ii,
    T9ii,
    T13ii,
    T14ii,
    T18ii,
    T22ii,
    /// `a = b = c = 0`, `k̃ = 0`, `μ ≠ 0` (minimal branch in flat space).
    C1ii,
    C2ii,
    C3ii,
    C4ii,
    C5ii,
    C6ii,
    /// `a = b = 0`, `μ ≠ 0`.
    T10ii,
    /// `a = b = 0`, `μ ≠ 0`, `c² + k̃ ≠ 0`.
    T25ii,
    /// `a = 0`, `b = μ ≠ 0`, `c² = −k̃ − μ²(n−3)/(n−1)`.
    T27ii,
    /// `μ = 0`, `a = b = 0`.
    Umbilical,
    /// Every shape operator zero.
    Geodesic,
}

impl CaseId {
    pub const ALL: [CaseId; 19] = [
        CaseId::T2ii,
        CaseId::T6ii,
        CaseId::T7ii,
        CaseId::T9ii,
        CaseId::T13ii,
        CaseId::T14ii,
        CaseId::T18ii,
        CaseId::T22ii,
        CaseId::C1ii,
        CaseId::C2ii,
        CaseId::C3ii,
        CaseId::C4ii,
        CaseId::C5ii,
        CaseId::C6ii,
        CaseId::T10ii,
        CaseId::T25ii,
        CaseId::T27ii,
        CaseId::Umbilical,
        CaseId::Geodesic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseId::T2ii => "T2ii",
            CaseId::T6ii => "T6ii",
            CaseId::T7ii => "T7ii",
            CaseId::T9ii => "T9ii",
            CaseId::T13ii => "T13ii",
            CaseId::T14ii => "T14ii",
            CaseId::T18ii => "T18ii",
            CaseId::T22ii => "T22ii",
            CaseId::C1ii => "C1ii",
            CaseId::C2ii => "C2ii",
            CaseId::C3ii => "C3ii",
            CaseId::C4ii => "C4ii",
            CaseId::C5ii => "C5ii",
            CaseId::C6ii => "C6ii",
            CaseId::T10ii => "T10ii",
            CaseId::T25ii => "T25ii",
            CaseId::T27ii => "T27ii",
            CaseId::Umbilical => "umbilical",
            CaseId::Geodesic => "geodesic",
        }
    }

    pub fn parse(s: &str) -> Result<CaseId, Error> {
        CaseId::ALL.into_iter().find(|c| c.as_str().eq_ignore_ascii_case(s)).ok_or_else(|| Error::UnknownCase(s.to_string()))
    }

    /// The parameter family this case belongs to.
    pub fn family(self) -> Family {
        match self {
            CaseId::T2ii | CaseId::T6ii | CaseId::T7ii | CaseId::T9ii | CaseId::T13ii | CaseId::T14ii | CaseId::T18ii | CaseId::T22ii => {
                Family::WeylSemiSymmetric
            }
            CaseId::C1ii | CaseId::C2ii | CaseId::C3ii | CaseId::C4ii | CaseId::C5ii | CaseId::C6ii => Family::MinimalFlat,
            CaseId::T10ii => Family::PseudoUmbilical,
            CaseId::T25ii => Family::PseudoUmbilicalNonFlat,
            CaseId::T27ii => Family::Shifted,
            CaseId::Umbilical => Family::Umbilical,
            CaseId::Geodesic => Family::Geodesic,
        }
    }
}

/// Branch predicates on Choi–Lu parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    WeylSemiSymmetric,
    MinimalFlat,
    PseudoUmbilical,
    PseudoUmbilicalNonFlat,
    Shifted,
    Umbilical,
    Geodesic,
}

impl Family {
    pub fn contains<S: Scalar>(self, p: &ChoiLuParams<S>) -> bool {
        let ab0 = p.a.is_zero() && p.b.is_zero();
        let mu = !p.mu.is_zero();
        let c2 = p.c.clone() * p.c.clone();
        match self {
            Family::WeylSemiSymmetric => ab0 && mu && (c2 + p.k_tilde.clone()).is_zero(),
            Family::MinimalFlat => ab0 && mu && p.c.is_zero() && p.k_tilde.is_zero(),
            Family::PseudoUmbilical => ab0 && mu,
            Family::PseudoUmbilicalNonFlat => ab0 && mu && !(c2 + p.k_tilde.clone()).is_zero(),
            Family::Shifted => {
                let n = p.n as i64;
                let rhs = -p.k_tilde.clone() - S::from_ratio(n - 3, n - 1) * p.mu.clone() * p.mu.clone();
                p.a.is_zero() && mu && p.b == p.mu && c2 == rhs
            }
            Family::Umbilical => p.mu.is_zero(),
            Family::Geodesic => {
                p.a.is_zero() && p.b.is_zero() && p.c.is_zero() && p.mu.is_zero()
            }
        }
    }
}

/// Free inputs of a branch builder; the builder fixes the rest.
#[derive(Clone, Debug, PartialEq)]
pub struct CaseInputs<S> {
    pub n: usize,
    pub m: usize,
    pub mu: S,
    pub c: S,
    pub k_tilde: S,
}

/// Parameters of a branch, checking its constraints exactly.
pub fn case_params<S: Scalar>(case: CaseId, inp: &CaseInputs<S>) -> Result<ChoiLuParams<S>, Error> {
    let z = S::zero;
    let mut p = ChoiLuParams { n: inp.n, m: inp.m, a: z(), b: z(), c: inp.c.clone(), mu: inp.mu.clone(), k_tilde: inp.k_tilde.clone() };
    let fam = case.family();
    match fam {
        Family::Umbilical => {
            if !p.mu.is_zero() {
                return Err(Error::Constraint(format!("{}: needs mu = 0", case.as_str())));
            }
        }
        Family::Geodesic => {
            p.c = z();
            p.mu = z();
        }
        Family::Shifted => p.b = p.mu.clone(),
        _ => {}
    }
    if matches!(fam, Family::WeylSemiSymmetric | Family::MinimalFlat | Family::PseudoUmbilical | Family::PseudoUmbilicalNonFlat | Family::Shifted)
        && p.mu.is_zero()
    {
        return Err(Error::Constraint(format!("{}: needs mu != 0", case.as_str())));
    }
    if !fam.contains(&p) {
        let why = match fam {
            Family::WeylSemiSymmetric => "c^2 = -k_tilde",
            Family::MinimalFlat => "c = 0 and k_tilde = 0",
            Family::PseudoUmbilicalNonFlat => "c^2 + k_tilde != 0",
            Family::Shifted => "c^2 = -k_tilde - mu^2 (n-3)/(n-1)",
            _ => "branch constraints",
        };
        return Err(Error::Constraint(format!("{}: inputs violate {why}", case.as_str())));
    }
    p.validate()?;
    Ok(p)
}

pub fn theorem_case_builder<S: Scalar>(case: CaseId, inp: &CaseInputs<S>) -> Result<SubmanifoldModel<S>, Error> {
    choi_lu_shape_ops(&case_params(case, inp)?)
}

/// Index tuples (0-based) realizing a named table entry, for `i, j ≥ 3`.
pub(crate) fn entry_instances(name: &str, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    match name {
        "R_1221" | "gwR_1221" | "C_1221" => out.push(vec![0, 1, 1, 0]),
        "S_11" => out.push(vec![0, 0]),
        "S_12" => out.push(vec![0, 1]),
        "S_22" => out.push(vec![1, 1]),
        "tau" | "rho" => out.push(vec![]),
        _ => {
            for i in 2..n {
                match name {
                    "R_1ii1" | "gwR_1ii1" | "C_1ii1" => out.push(vec![0, i, i, 0]),
                    "R_2ii2" | "gwR_2ii2" | "C_2ii2" => out.push(vec![1, i, i, 1]),
                    "R_1ii2" => out.push(vec![0, i, i, 1]),
                    "S_ii" => out.push(vec![i, i]),
                    "R_ijji" | "gwR_ijji" | "C_ijji" => out.extend((i + 1..n).map(|j| vec![i, j, j, i])),
                    _ => {}
                }
            }
        }
    }
    out
}
