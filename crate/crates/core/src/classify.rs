//! Linear dependence between curvature tensors, the pseudo-symmetry condition
//! matrix, and theorem verdicts on Choi–Lu parameter points.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cell::OnceCell;

use crate::curvature::{classify_umbilicity, Curvature, SubmanifoldModel, Umbilicity};
use crate::derivations::{endo_derive, p_tensor, tachibana};
use crate::error::Error;
use crate::scalar::{FromRational, Rational, Scalar};
use crate::sectional::{inf_sectional, Strategy};
use crate::tensor::{kulkarni_nomizu, max_abs_component, SymMatrix, Tensor};
use crate::wintgen::{choi_lu_shape_ops, ChoiLuParams, Family};

/// Every tensor the condition engine can build from a model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TensorId {
    R,
    Ricc,
    C,
    GwRicc,
    RR,
    RC,
    CR,
    CC,
    RRicc,
    RCmCR,
    QgR,
    QgC,
    QgRicc,
    QgGR,
    QSR,
    QSC,
    QSGS,
    P,
}

impl TensorId {
    pub const ALL: [TensorId; 18] = [
        TensorId::R,
        TensorId::Ricc,
        TensorId::C,
        TensorId::GwRicc,
        TensorId::RR,
        TensorId::RC,
        TensorId::CR,
        TensorId::CC,
        TensorId::RRicc,
        TensorId::RCmCR,
        TensorId::QgR,
        TensorId::QgC,
        TensorId::QgRicc,
        TensorId::QgGR,
        TensorId::QSR,
        TensorId::QSC,
        TensorId::QSGS,
        TensorId::P,
    ];
    /// Derivation-side tensors of the condition matrix.
    pub const LEFTS: [TensorId; 6] = [TensorId::RR, TensorId::RC, TensorId::CR, TensorId::CC, TensorId::RRicc, TensorId::RCmCR];
    /// Tachibana-side tensors of the condition matrix.
    pub const RIGHTS: [TensorId; 7] =
        [TensorId::QgR, TensorId::QgC, TensorId::QgRicc, TensorId::QgGR, TensorId::QSR, TensorId::QSC, TensorId::QSGS];

    /// Short id used on the command line and in the table files.
    pub fn code(self) -> &'static str {
        match self {
            TensorId::R => "R",
            TensorId::Ricc => "Ricc",
            TensorId::C => "C",
            TensorId::GwRicc => "gwRicc",
            TensorId::RR => "RR",
            TensorId::RC => "RC",
            TensorId::CR => "CR",
            TensorId::CC => "CC",
            TensorId::RRicc => "RRicc",
            TensorId::RCmCR => "RCmCR",
            TensorId::QgR => "QgR",
            TensorId::QgC => "QgC",
            TensorId::QgRicc => "QgRicc",
            TensorId::QgGR => "QgGR",
            TensorId::QSR => "QSR",
            TensorId::QSC => "QSC",
            TensorId::QSGS => "QSGS",
            TensorId::P => "P",
        }
    }

    /// Mathematical name for reports.
    pub fn label(self) -> &'static str {
        match self {
            TensorId::R => "R",
            TensorId::Ricc => "Ricc",
            TensorId::C => "C",
            TensorId::GwRicc => "g∧Ricc",
            TensorId::RR => "R·R",
            TensorId::RC => "R·C",
            TensorId::CR => "C·R",
            TensorId::CC => "C·C",
            TensorId::RRicc => "R·Ricc",
            TensorId::RCmCR => "R·C−C·R",
            TensorId::QgR => "Q(g,R)",
            TensorId::QgC => "Q(g,C)",
            TensorId::QgRicc => "Q(g,Ricc)",
            TensorId::QgGR => "Q(g,g∧Ricc)",
            TensorId::QSR => "Q(Ricc,R)",
            TensorId::QSC => "Q(Ricc,C)",
            TensorId::QSGS => "Q(Ricc,g∧Ricc)",
            TensorId::P => "P",
        }
    }

    pub fn parse(s: &str) -> Result<TensorId, Error> {
        TensorId::ALL
            .into_iter()
            .find(|t| t.code().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown tensor `{s}`")))
    }
}

/// Lazily built tensors of one model; each is computed at most once.
pub struct TensorCache<'m, S: Scalar> {
    model: &'m SubmanifoldModel<S>,
    curv: OnceCell<Curvature<S>>,
    slots: [OnceCell<Tensor<S>>; 18],
}

impl<'m, S: Scalar> TensorCache<'m, S> {
    pub fn new(model: &'m SubmanifoldModel<S>) -> Self {
        TensorCache { model, curv: OnceCell::new(), slots: Default::default() }
    }

    pub fn model(&self) -> &SubmanifoldModel<S> {
        self.model
    }

    pub fn curvature(&self) -> &Curvature<S> {
        self.curv.get_or_init(|| Curvature::of(self.model))
    }

    pub fn ricci(&self) -> &SymMatrix<S> {
        &self.curvature().ricci.ricc
    }

    pub fn get(&self, id: TensorId) -> &Tensor<S> {
        let slot = &self.slots[id as usize];
        if let Some(t) = slot.get() {
            return t;
        }
        let t = self.build(id);
        slot.get_or_init(|| t)
    }

    fn build(&self, id: TensorId) -> Tensor<S> {
        let cv = self.curvature();
        let g = self.model.metric();
        let s = &cv.ricci.ricc;
        let ok = "shapes agree by construction";
        match id {
            TensorId::R => cv.r.clone(),
            TensorId::Ricc => s.to_tensor(),
            TensorId::C => cv.c.clone(),
            TensorId::GwRicc => kulkarni_nomizu(&g, s).expect(ok),
            TensorId::RR => endo_derive(&cv.r, &cv.r).expect(ok),
            TensorId::RC => endo_derive(&cv.r, &cv.c).expect(ok),
            TensorId::CR => endo_derive(&cv.c, &cv.r).expect(ok),
            TensorId::CC => endo_derive(&cv.c, &cv.c).expect(ok),
            TensorId::RRicc => endo_derive(&cv.r, self.get(TensorId::Ricc)).expect(ok),
            TensorId::RCmCR => self.get(TensorId::RC).try_sub(self.get(TensorId::CR)).expect(ok),
            TensorId::QgR => tachibana(&g, &cv.r).expect(ok),
            TensorId::QgC => tachibana(&g, &cv.c).expect(ok),
            TensorId::QgRicc => tachibana(&g, self.get(TensorId::Ricc)).expect(ok),
            TensorId::QgGR => tachibana(&g, self.get(TensorId::GwRicc)).expect(ok),
            TensorId::QSR => tachibana(s, &cv.r).expect(ok),
            TensorId::QSC => tachibana(s, &cv.c).expect(ok),
            TensorId::QSGS => tachibana(s, self.get(TensorId::GwRicc)).expect(ok),
            TensorId::P => p_tensor(&cv.r, &cv.ricci).expect(ok),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DependenceKind {
    BothZero,
    LeftZero,
    RightZero,
    Proportional,
    Independent,
}

impl DependenceKind {
    /// `T1 = λ T2` for some `λ` (the reading every theorem uses).
    pub fn is_dependent(self) -> bool {
        matches!(self, DependenceKind::BothZero | DependenceKind::LeftZero | DependenceKind::Proportional)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DependenceKind::BothZero => "BothZero",
            DependenceKind::LeftZero => "LeftZero",
            DependenceKind::RightZero => "RightZero",
            DependenceKind::Proportional => "Proportional",
            DependenceKind::Independent => "Independent",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DependenceVerdict<S> {
    pub kind: DependenceKind,
    /// Set for `Proportional` and `LeftZero` (where it is 0).
    pub lambda: Option<S>,
    /// `max |T1 − λ T2|`, or `max |T1|` when no `λ` exists.
    pub residual_max: S,
}

fn max_abs<S: Scalar>(t: &Tensor<S>) -> S {
    max_abs_component(t).0
}

/// Decide whether `t1 = λ t2`. `tol = 0` is exact; otherwise components below
/// `tol · max(1, scale)` count as zero, `scale` being the larger max-abs.
pub fn dependence<S: Scalar>(t1: &Tensor<S>, t2: &Tensor<S>, tol: f64) -> Result<DependenceVerdict<S>, Error> {
    t1.same_shape(t2)?;
    let (m1, m2) = (max_abs(t1), max_abs(t2));
    let scale = if m1 > m2 { m1.to_f64() } else { m2.to_f64() };
    let floor = tol * if scale > 1.0 { scale } else { 1.0 };
    let zero = |v: &S| if tol == 0.0 { v.is_zero() } else { v.to_f64() <= floor };
    let (z1, z2) = (zero(&m1), zero(&m2));
    let verdict = |kind, lambda, residual_max| DependenceVerdict { kind, lambda, residual_max };
    Ok(match (z1, z2) {
        (true, true) => verdict(DependenceKind::BothZero, None, m1),
        (true, false) => verdict(DependenceKind::LeftZero, Some(S::zero()), m1),
        (false, true) => verdict(DependenceKind::RightZero, None, m1),
        (false, false) => {
            let (_, pivot) = max_abs_component(t2);
            let lambda = t1.get(&pivot).checked_div(t2.get(&pivot))?;
            let mut res = S::zero();
            for (x, y) in t1.data().iter().zip(t2.data()) {
                let mut d = x.clone();
                d.sub_prod(&lambda, y);
                let d = d.abs();
                if d > res {
                    res = d;
                }
            }
            let kind = if zero(&res) { DependenceKind::Proportional } else { DependenceKind::Independent };
            verdict(kind, Some(lambda), res)
        }
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionReport<S> {
    pub left: TensorId,
    pub right: TensorId,
    pub verdict: DependenceVerdict<S>,
}

/// Pairs evaluated by [`condition_matrix`], in report order: every rank-6
/// derivation against every rank-6 Tachibana tensor, then `R·Ricc` against
/// `Q(g,Ricc)`.
pub fn condition_pairs() -> Vec<(TensorId, TensorId)> {
    let mut out = Vec::new();
    for l in TensorId::LEFTS.into_iter().filter(|&l| l != TensorId::RRicc) {
        for r in TensorId::RIGHTS.into_iter().filter(|&r| r != TensorId::QgRicc) {
            out.push((l, r));
        }
    }
    out.push((TensorId::RRicc, TensorId::QgRicc));
    out
}

pub fn condition_matrix<S: Scalar>(model: &SubmanifoldModel<S>, tol: f64) -> Vec<ConditionReport<S>> {
    let cache = TensorCache::new(model);
    condition_pairs()
        .into_iter()
        .map(|(left, right)| {
            let verdict = dependence(cache.get(left), cache.get(right), tol).expect("same shape");
            ConditionReport { left, right, verdict }
        })
        .collect()
}

/// The classical pseudo-symmetry type conditions with a named proportionality
/// function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LCondition {
    /// `R·R = L_R Q(g,R)`.
    PseudoSym,
    /// `R·C = L_C Q(g,C)`.
    WeylPseudoS,
    /// `C·C = L Q(g,C)`.
    PseudoWeylT,
    /// `R·Ricc = L_Ricc Q(g,Ricc)`.
    RicciPseudo,
    /// `R·C = L′ Q(Ricc,C)`.
    RicciWeyl,
}

impl LCondition {
    pub const ALL: [LCondition; 5] =
        [LCondition::PseudoSym, LCondition::WeylPseudoS, LCondition::PseudoWeylT, LCondition::RicciPseudo, LCondition::RicciWeyl];

    pub fn pair(self) -> (TensorId, TensorId) {
        match self {
            LCondition::PseudoSym => (TensorId::RR, TensorId::QgR),
            LCondition::WeylPseudoS => (TensorId::RC, TensorId::QgC),
            LCondition::PseudoWeylT => (TensorId::CC, TensorId::QgC),
            LCondition::RicciPseudo => (TensorId::RRicc, TensorId::QgRicc),
            LCondition::RicciWeyl => (TensorId::RC, TensorId::QSC),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LCondition::PseudoSym => "pseudoSym",
            LCondition::WeylPseudoS => "WeylpseudoS",
            LCondition::PseudoWeylT => "pseudoWeylT",
            LCondition::RicciPseudo => "Riccipseudo",
            LCondition::RicciWeyl => "RicciWeyl",
        }
    }

    pub fn parse(s: &str) -> Result<LCondition, Error> {
        LCondition::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown condition `{s}`")))
    }
}

pub fn extract_l<S: Scalar>(model: &SubmanifoldModel<S>, cond: LCondition, tol: f64) -> DependenceVerdict<S> {
    let cache = TensorCache::new(model);
    let (l, r) = cond.pair();
    dependence(cache.get(l), cache.get(r), tol).expect("same shape")
}

/// `L_C` from `C·C = L_C Q(g,C)` set against the closed form
/// `(n−3)/((n−1)(n−2)) (τ − n(n−1) inf K)` with a numerically minimized `inf K`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeylLCheck {
    pub kind: DependenceKind,
    pub lambda: Option<Rational>,
    pub inf_k: f64,
    pub predicted: f64,
    /// `|λ − predicted| / max(|λ|, |predicted|)`; infinite when `λ` is missing.
    pub rel_err: f64,
}

impl WeylLCheck {
    pub fn pass(&self, rel_tol: f64) -> bool {
        self.rel_err <= rel_tol
    }
}

pub fn weyl_l_check(p: &ChoiLuParams<Rational>, st: &Strategy) -> Result<WeylLCheck, Error> {
    let model = choi_lu_shape_ops(p)?;
    let cache = TensorCache::new(&model);
    let v = dependence(cache.get(TensorId::CC), cache.get(TensorId::QgC), 0.0)?;
    let r = cache.curvature().r.map(|x| x.to_f64());
    let inf_k = inf_sectional(&r, st).value;
    let n = p.n as f64;
    let tau = cache.curvature().ricci.tau.to_f64();
    let predicted = (n - 3.0) / ((n - 1.0) * (n - 2.0)) * (tau - n * (n - 1.0) * inf_k);
    let rel_err = match &v.lambda {
        Some(l) if v.kind == DependenceKind::Proportional => {
            let l = l.to_f64();
            let d = libm::fabs(l - predicted);
            if d == 0.0 {
                0.0
            } else {
                d / libm::fmax(libm::fabs(l), libm::fabs(predicted))
            }
        }
        _ => f64::INFINITY,
    };
    Ok(WeylLCheck { kind: v.kind, lambda: v.lambda, inf_k, predicted, rel_err })
}

// ---------------------------------------------------------------------------
// Theorem catalog

/// Sign hypothesis on the ambient curvature.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KSign {
    Positive,
    NonPositive,
    Zero,
    Any,
}

impl KSign {
    pub fn admits(self, k: &Rational) -> bool {
        match self {
            KSign::Positive => *k > Rational::zero(),
            KSign::NonPositive => *k <= Rational::zero(),
            KSign::Zero => k.is_zero(),
            KSign::Any => true,
        }
    }
}

/// Closed form claimed for `λ` on the special branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LambdaRule {
    /// No value claimed.
    Free,
    /// The left tensor vanishes on the branch.
    Zero,
    /// `−2(n−3)μ²/((n−1)(n−2))`.
    Shift,
    /// `k̃ + c²`.
    KPlusC2,
    /// `(k̃ + c²)/(2μ²)`.
    KPlusC2Over2Mu2,
    /// `−(n−3)/((n−1)(n−2))`.
    Conformal,
    /// `k̃ + H²`.
    KPlusH2,
}

impl LambdaRule {
    pub fn expected(self, p: &ChoiLuParams<Rational>) -> Option<Rational> {
        let n = p.n as i64;
        let mu2 = p.mu.clone() * p.mu.clone();
        let kc = p.k_tilde.clone() + p.c.clone() * p.c.clone();
        match self {
            LambdaRule::Free => None,
            LambdaRule::Zero => Some(Rational::zero()),
            LambdaRule::Shift => Some(Rational::from_ratio(-2 * (n - 3), (n - 1) * (n - 2)) * mu2),
            LambdaRule::KPlusC2 => Some(kc),
            LambdaRule::KPlusC2Over2Mu2 => kc.checked_div(&(Rational::from_i64(2) * mu2)).ok(),
            LambdaRule::Conformal => Some(Rational::from_ratio(-(n - 3), (n - 1) * (n - 2))),
            LambdaRule::KPlusH2 => Some(p.k_tilde.clone() + p.h_sq()),
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            LambdaRule::Free => "",
            LambdaRule::Zero => "0",
            LambdaRule::Shift => "-2(n-3)mu^2/((n-1)(n-2))",
            LambdaRule::KPlusC2 => "k+c^2",
            LambdaRule::KPlusC2Over2Mu2 => "(k+c^2)/(2mu^2)",
            LambdaRule::Conformal => "-(n-3)/((n-1)(n-2))",
            LambdaRule::KPlusH2 => "k+H^2",
        }
    }
}

/// One condition of a theorem: `left = 0` when `right` is `None`, otherwise
/// `left = λ right`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cond {
    pub left: TensorId,
    pub right: Option<TensorId>,
    pub lambda: LambdaRule,
}

/// Where the conditions are claimed to hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// Exactly at umbilical points.
    Umbilical,
    /// At umbilical points and on the family.
    UmbilicalOr(Family),
    /// Exactly on the family (points are restricted to `μ ≠ 0`).
    Only(Family),
    /// Everywhere.
    Always,
    /// The conditions hold or fail together.
    Agree,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TheoremSpec {
    pub id: &'static str,
    pub k_sign: KSign,
    pub branch: Branch,
    pub conds: &'static [Cond],
}

const fn c0(left: TensorId) -> Cond {
    Cond { left, right: None, lambda: LambdaRule::Zero }
}

const fn cd(left: TensorId, right: TensorId, lambda: LambdaRule) -> Cond {
    Cond { left, right: Some(right), lambda }
}

use Family::{MinimalFlat as MIN0, PseudoUmbilical as AB0, Shifted as SHIFT, WeylSemiSymmetric as WSS};
use LambdaRule::{Free, Zero};
use TensorId::{QgC, QgGR, QgR, QSC, QSGS, QSR, RCmCR, CC, CR, RC, RR};

const fn th(id: &'static str, k_sign: KSign, branch: Branch, conds: &'static [Cond]) -> TheoremSpec {
    TheoremSpec { id, k_sign, branch, conds }
}

/// Every checkable claim, in document order.
pub const THEOREMS: &[TheoremSpec] = &[
    th("T1", KSign::Positive, Branch::Umbilical, &[c0(RC)]),
    th("T2", KSign::NonPositive, Branch::UmbilicalOr(WSS), &[c0(RC)]),
    th("C1", KSign::Zero, Branch::UmbilicalOr(MIN0), &[c0(RC)]),
    th("T3", KSign::Any, Branch::Umbilical, &[c0(CR)]),
    th("T4", KSign::Any, Branch::Umbilical, &[c0(RCmCR)]),
    th("T5", KSign::Positive, Branch::Umbilical, &[cd(RC, QgR, Free)]),
    th("T6", KSign::NonPositive, Branch::UmbilicalOr(WSS), &[cd(RC, QgR, Zero)]),
    th("C2", KSign::Zero, Branch::UmbilicalOr(MIN0), &[cd(RC, QgR, Zero)]),
    th("T7", KSign::Any, Branch::Umbilical, &[cd(CR, QgR, Free)]),
    th("T8", KSign::Positive, Branch::Umbilical, &[cd(RCmCR, QgR, Free)]),
    th("T9", KSign::NonPositive, Branch::UmbilicalOr(WSS), &[cd(RCmCR, QgR, LambdaRule::Shift)]),
    th("C3", KSign::Zero, Branch::UmbilicalOr(MIN0), &[cd(RCmCR, QgR, LambdaRule::Shift)]),
    th("T10", KSign::Any, Branch::UmbilicalOr(AB0), &[cd(RC, QgC, LambdaRule::KPlusC2)]),
    th("T11", KSign::Any, Branch::Umbilical, &[cd(CR, QgC, Free)]),
    th("T12", KSign::Any, Branch::Umbilical, &[cd(RCmCR, QgC, Free)]),
    th("T13", KSign::Positive, Branch::Umbilical, &[cd(RC, QgGR, Free)]),
    th("T14", KSign::NonPositive, Branch::UmbilicalOr(WSS), &[cd(RC, QgGR, Zero)]),
    th("C4", KSign::Zero, Branch::UmbilicalOr(MIN0), &[cd(RC, QgGR, Zero)]),
    th("T15", KSign::Any, Branch::Umbilical, &[cd(CR, QgGR, Free)]),
    th("T16", KSign::Any, Branch::Umbilical, &[cd(RCmCR, QgGR, Free)]),
    th("T17", KSign::Positive, Branch::Umbilical, &[cd(RC, QSR, Free)]),
    th("T18", KSign::NonPositive, Branch::UmbilicalOr(WSS), &[cd(RC, QSR, Zero)]),
    th("C5", KSign::Zero, Branch::UmbilicalOr(MIN0), &[cd(RC, QSR, Zero)]),
    th("T19", KSign::Any, Branch::Umbilical, &[cd(CR, QSR, Free)]),
    th("T20", KSign::Any, Branch::Umbilical, &[cd(RCmCR, QSR, Free)]),
    th("T21", KSign::Positive, Branch::Umbilical, &[cd(RC, QSC, Free)]),
    th("T22", KSign::NonPositive, Branch::UmbilicalOr(WSS), &[cd(RC, QSC, Zero)]),
    th("C6", KSign::Zero, Branch::UmbilicalOr(MIN0), &[cd(RC, QSC, Zero)]),
    th("T23", KSign::Any, Branch::Umbilical, &[cd(CR, QSC, Free)]),
    th("T24", KSign::Any, Branch::Umbilical, &[cd(RCmCR, QSC, Free)]),
    th("T25", KSign::Any, Branch::UmbilicalOr(Family::PseudoUmbilicalNonFlat), &[cd(RC, QSGS, LambdaRule::KPlusC2Over2Mu2)]),
    th("T26", KSign::Any, Branch::Umbilical, &[cd(CR, QSGS, Free)]),
    th("T27", KSign::Any, Branch::UmbilicalOr(SHIFT), &[cd(RCmCR, QSGS, LambdaRule::Conformal)]),
    th(
        "C7",
        KSign::NonPositive,
        Branch::Only(WSS),
        &[cd(RC, QgR, Zero), cd(RC, QgGR, Zero), cd(RC, QSR, Zero), cd(RC, QSC, Zero), cd(RCmCR, QgR, LambdaRule::Shift)],
    ),
    th(
        "C8",
        KSign::Zero,
        Branch::Only(MIN0),
        &[cd(RC, QgR, Zero), cd(RC, QgGR, Zero), cd(RC, QSR, Zero), cd(RC, QSC, Zero), cd(RCmCR, QgR, LambdaRule::Shift)],
    ),
    th("C9", KSign::Positive, Branch::Umbilical, &[cd(RC, QgR, Free), cd(RC, QgGR, Free), cd(RC, QSR, Free), cd(RC, QSC, Free)]),
    th("TB", KSign::Any, Branch::UmbilicalOr(AB0), &[cd(RR, QgR, LambdaRule::KPlusH2)]),
    th("TC", KSign::Any, Branch::Agree, &[cd(RR, QgR, Free), cd(TensorId::RRicc, TensorId::QgRicc, Free)]),
    th("TD", KSign::Any, Branch::Always, &[cd(CC, QgC, Free)]),
    th("TE", KSign::Any, Branch::Umbilical, &[c0(TensorId::C)]),
];

pub fn theorem(id: &str) -> Result<&'static TheoremSpec, Error> {
    THEOREMS.iter().find(|t| t.id.eq_ignore_ascii_case(id)).ok_or_else(|| Error::UnknownCase(id.to_string()))
}

impl TheoremSpec {
    pub fn family(&self) -> Option<Family> {
        match self.branch {
            Branch::UmbilicalOr(f) | Branch::Only(f) => Some(f),
            _ => None,
        }
    }

    /// Whether the point satisfies the hypotheses.
    pub fn admits(&self, p: &ChoiLuParams<Rational>) -> bool {
        if !self.k_sign.admits(&p.k_tilde) || (p.m == 2 && !p.c.is_zero()) {
            return false;
        }
        !matches!(self.branch, Branch::Only(_)) || !p.mu.is_zero()
    }

    /// Whether the claimed conditions should hold at `p`.
    pub fn in_branch(&self, p: &ChoiLuParams<Rational>) -> bool {
        let umb = Family::Umbilical.contains(p);
        match self.branch {
            Branch::Umbilical => umb,
            Branch::UmbilicalOr(f) => umb || f.contains(p),
            Branch::Only(f) => f.contains(p),
            Branch::Always | Branch::Agree => true,
        }
    }

    /// Points to evaluate: the admissible part of the grid plus points placed
    /// on the special family, in deterministic order without repeats.
    pub fn points(&self, grid: &crate::grid::GridSpec) -> Vec<ChoiLuParams<Rational>> {
        let mut out: Vec<ChoiLuParams<Rational>> = grid.points().into_iter().filter(|p| self.admits(p)).collect();
        if let Some(f) = self.family() {
            for p in family_points(f, grid) {
                if self.admits(&p) && !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        out
    }
}

/// Points placed exactly on a family, built from the grid's `(n, m, c, μ, k̃)`.
pub fn family_points(f: Family, grid: &crate::grid::GridSpec) -> Vec<ChoiLuParams<Rational>> {
    let mut out = Vec::new();
    let zero = Rational::zero;
    for &n in &grid.n_list {
        for &m in &grid.m_list {
            for c in &grid.c {
                if m == 2 && !c.is_zero() {
                    continue;
                }
                for mu in grid.mu.iter().filter(|mu| !mu.is_zero()) {
                    let ni = n as i64;
                    let c2 = c.clone() * c.clone();
                    let base = ChoiLuParams { n, m, a: zero(), b: zero(), c: c.clone(), mu: mu.clone(), k_tilde: zero() };
                    let p = match f {
                        Family::WeylSemiSymmetric => ChoiLuParams { k_tilde: -c2, ..base },
                        Family::MinimalFlat => ChoiLuParams { c: zero(), ..base },
                        Family::Shifted => {
                            let k = -c2 - Rational::from_ratio(ni - 3, ni - 1) * mu.clone() * mu.clone();
                            ChoiLuParams { b: mu.clone(), k_tilde: k, ..base }
                        }
                        Family::PseudoUmbilical | Family::PseudoUmbilicalNonFlat => {
                            for k in &grid.k_tilde {
                                let p = ChoiLuParams { k_tilde: k.clone(), ..base.clone() };
                                if f.contains(&p) && !out.contains(&p) {
                                    out.push(p);
                                }
                            }
                            continue;
                        }
                        Family::Umbilical | Family::Geodesic => continue,
                    };
                    if f.contains(&p) && !out.contains(&p) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Outcome of one condition at one point, with exact values rendered.
#[derive(Clone, Debug, PartialEq)]
pub struct CondOutcome {
    pub left: TensorId,
    pub right: Option<TensorId>,
    pub kind: DependenceKind,
    pub dependent: bool,
    pub lambda: Option<String>,
    pub expected_lambda: Option<String>,
    pub residual: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointResult {
    pub theorem: &'static str,
    pub params: ChoiLuParams<Rational>,
    pub in_branch: bool,
    pub umbilicity: Umbilicity,
    pub conds: Vec<CondOutcome>,
    pub pass: bool,
}

fn lambda_matches<S: Scalar + FromRational>(got: &Option<S>, want: &S, tol: f64) -> bool {
    match got {
        None => false,
        Some(g) if tol == 0.0 => g == want,
        Some(g) => {
            let (g, w) = (g.to_f64(), want.to_f64());
            libm::fabs(g - w) <= tol * libm::fmax(1.0, libm::fabs(w))
        }
    }
}

/// Check one theorem at one point. `S = Rational` with `tol = 0` is exact.
pub fn evaluate_point<S: Scalar + FromRational>(
    spec: &'static TheoremSpec,
    p: &ChoiLuParams<Rational>,
    tol: f64,
) -> Result<PointResult, Error> {
    let model = choi_lu_shape_ops(&p.map(S::from_rational))?;
    let cache = TensorCache::new(&model);
    let in_branch = spec.in_branch(p);
    let on_family = spec.family().is_some_and(|f| f.contains(p)) && !Family::Umbilical.contains(p);
    let mut conds = Vec::with_capacity(spec.conds.len());
    for c in spec.conds {
        let left = cache.get(c.left);
        let verdict = match c.right {
            Some(r) => dependence(left, cache.get(r), tol)?,
            None => {
                let m = max_abs(left);
                let z = if tol == 0.0 { m.is_zero() } else { m.to_f64() <= tol };
                let kind = if z { DependenceKind::BothZero } else { DependenceKind::Independent };
                DependenceVerdict { kind, lambda: None, residual_max: m }
            }
        };
        let dependent = verdict.kind.is_dependent();
        let expected = if on_family { c.lambda.expected(p) } else { None };
        let mut ok = match spec.branch {
            Branch::Agree => true,
            _ => dependent == in_branch,
        };
        // both sides zero: any λ works
        if ok && dependent && c.right.is_some() && verdict.kind != DependenceKind::BothZero {
            if let Some(want) = &expected {
                ok = lambda_matches(&verdict.lambda, &S::from_rational(want), tol);
            }
        }
        conds.push(CondOutcome {
            left: c.left,
            right: c.right,
            kind: verdict.kind,
            dependent,
            lambda: verdict.lambda.as_ref().map(|l| l.to_string()),
            expected_lambda: expected.map(|e| e.to_string()),
            residual: verdict.residual_max.to_string(),
            ok,
        });
    }
    if spec.branch == Branch::Agree {
        let first = conds.first().map(|c| c.dependent);
        for c in &mut conds {
            c.ok = Some(c.dependent) == first;
        }
    }
    let pass = conds.iter().all(|c| c.ok);
    Ok(PointResult { theorem: spec.id, params: p.clone(), in_branch, umbilicity: classify_umbilicity(&model), conds, pass })
}

pub type Counterexample = (ChoiLuParams<Rational>, DependenceVerdict<Rational>);

/// Points where `left` depends on `right` (or vanishes, when `right` is
/// `None`) although the point lies in none of the `allowed` families.
pub fn counterexample_search(
    left: TensorId,
    right: Option<TensorId>,
    points: &[ChoiLuParams<Rational>],
    allowed: &[Family],
) -> Result<Vec<Counterexample>, Error> {
    let mut out = Vec::new();
    for p in points {
        if allowed.iter().any(|f| f.contains(p)) {
            continue;
        }
        if let Some(hit) = counterexample_at(left, right, p)? {
            out.push((p.clone(), hit));
        }
    }
    Ok(out)
}

/// The dependence verdict at `p` when it is dependent, else `None`.
pub fn counterexample_at(
    left: TensorId,
    right: Option<TensorId>,
    p: &ChoiLuParams<Rational>,
) -> Result<Option<DependenceVerdict<Rational>>, Error> {
    let model = choi_lu_shape_ops(p)?;
    let cache = TensorCache::new(&model);
    let l = cache.get(left);
    let v = match right {
        Some(r) => dependence(l, cache.get(r), 0.0)?,
        None => {
            let m = max_abs(l);
            let kind = if m.is_zero() { DependenceKind::BothZero } else { DependenceKind::Independent };
            DependenceVerdict { kind, lambda: None, residual_max: m }
        }
    };
    Ok(v.kind.is_dependent().then_some(v))
}

/// Every family except the umbilical and geodesic ones.
pub const SPECIAL_FAMILIES: [Family; 5] =
    [Family::WeylSemiSymmetric, Family::MinimalFlat, Family::PseudoUmbilical, Family::PseudoUmbilicalNonFlat, Family::Shifted];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn t(vals: &[i64]) -> Tensor<Rational> {
        let mut x = Tensor::zeros(4, 2).unwrap();
        for (k, v) in vals.iter().enumerate() {
            x.set(&[k / 4, k % 4], q(*v, 1));
        }
        x
    }

    #[test]
    fn dependence_kinds() {
        let a = t(&[1, 2, 0, -3]);
        let z = t(&[]);
        let v = dependence(&a.scale(&q(3, 1)), &a, 0.0).unwrap();
        assert_eq!((v.kind, v.lambda), (DependenceKind::Proportional, Some(q(3, 1))));
        assert_eq!(dependence(&z, &a, 0.0).unwrap().kind, DependenceKind::LeftZero);
        assert_eq!(dependence(&a, &z, 0.0).unwrap().kind, DependenceKind::RightZero);
        assert_eq!(dependence(&z, &z, 0.0).unwrap().kind, DependenceKind::BothZero);
        assert_eq!(dependence(&a, &t(&[1, 2, 0, 3]), 0.0).unwrap().kind, DependenceKind::Independent);
    }

    #[test]
    fn float_tolerance() {
        let a = t(&[1, 2, 0, -3]).map(|v| v.to_f64());
        let mut b = a.scale(&2.0);
        b.set(&[0, 0], 2.0 + 1e-12);
        assert_eq!(dependence(&b, &a, 1e-9).unwrap().kind, DependenceKind::Proportional);
        assert_eq!(dependence(&b, &a, 1e-14).unwrap().kind, DependenceKind::Independent);
    }

    #[test]
    fn catalog_ids_unique() {
        for (i, a) in THEOREMS.iter().enumerate() {
            assert!(THEOREMS[i + 1..].iter().all(|b| b.id != a.id), "{}", a.id);
        }
        assert_eq!(THEOREMS.len(), 27 + 9 + 4);
        assert_eq!(condition_pairs().len(), 31);
    }
}
