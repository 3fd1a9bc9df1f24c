//! Intermediate-series modules `V(α,β;F)` over `HVir[G]`.
//!
//! The module has basis `{v_h : h ∈ G}` with
//! `d_g·v_h = (α+h+gβ)·v_{g+h}`, `I(g)·v_h = F·v_{g+h}`, and every central
//! element acting as zero.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::{AlgebraElement, BasisKey};
use crate::groups::{normalize_alpha, SubgroupSpec};
use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModuleError {
    #[error("intermediate-series modules need a nonzero index group")]
    TrivialGroup,
    #[error("{key} is not in the subalgebra HVir[{group}]")]
    OutsideSubalgebra { key: BasisKey, group: SubgroupSpec },
    #[error("vector index {index} is not in {group}")]
    VectorOutsideGroup { index: Rational, group: SubgroupSpec },
    #[error("parameters live over different groups ({0} vs {1})")]
    GroupMismatch(SubgroupSpec, SubgroupSpec),
}

/// `(α, β, F)` together with the index group. `alpha` is stored normalized:
/// it is 0 whenever it lies in the group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModuleParams {
    alpha: Rational,
    beta: Rational,
    big_f: Rational,
    group: SubgroupSpec,
}

impl ModuleParams {
    pub fn new(
        alpha: Rational,
        beta: Rational,
        big_f: Rational,
        group: SubgroupSpec,
    ) -> Result<Self, ModuleError> {
        if group.is_trivial() {
            return Err(ModuleError::TrivialGroup);
        }
        Ok(ModuleParams { alpha: normalize_alpha(&alpha, &group), beta, big_f, group })
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    pub fn big_f(&self) -> &Rational {
        &self.big_f
    }

    pub fn group(&self) -> &SubgroupSpec {
        &self.group
    }

    /// Coefficient of `v_{g+h}` in `d_g·v_h`.
    pub fn d_coeff(&self, g: &Rational, h: &Rational) -> Rational {
        &self.alpha + h + g * &self.beta
    }

    /// Coefficient of `v_{g+h}` in `generator·v_h`; zero for central symbols.
    pub fn coeff(&self, generator: &BasisKey, h: &Rational) -> Rational {
        match generator {
            BasisKey::D(g) => self.d_coeff(g, h),
            BasisKey::I(_) => self.big_f.clone(),
            _ => Rational::zero(),
        }
    }
}

impl fmt::Display for ModuleParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}@{}", self.alpha, self.beta, self.big_f, self.group)
    }
}

impl Serialize for ModuleParams {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Sparse vector `Σ c_q v_q`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct WeightVector {
    entries: BTreeMap<Rational, Rational>,
}

impl WeightVector {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The basis vector `v_q`.
    pub fn basis(q: Rational) -> Self {
        Self::term(q, Rational::one())
    }

    pub fn term(q: Rational, c: Rational) -> Self {
        let mut v = Self::zero();
        v.add_term(q, &c);
        v
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (Rational, Rational)>) -> Self {
        let mut v = Self::zero();
        for (q, c) in entries {
            v.add_term(q, &c);
        }
        v
    }

    pub fn add_term(&mut self, q: Rational, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.entries.entry(q.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.entries.remove(&q);
        }
    }

    pub fn add_scaled(&mut self, other: &WeightVector, c: &Rational) {
        for (q, x) in &other.entries {
            self.add_term(q.clone(), &(x * c));
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        WeightVector { entries: self.entries.iter().map(|(q, x)| (q.clone(), x * c)).collect() }
    }

    pub fn coeff(&self, q: &Rational) -> Rational {
        self.entries.get(q).cloned().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.entries.iter()
    }

    pub fn indices(&self) -> impl Iterator<Item = &Rational> {
        self.entries.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry with the smallest index.
    pub fn leading(&self) -> Option<(&Rational, &Rational)> {
        self.entries.iter().next()
    }

    pub fn retain_indices(&mut self, mut keep: impl FnMut(&Rational) -> bool) {
        self.entries.retain(|q, _| keep(q));
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (q, c)) in self.entries.iter().enumerate() {
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            let m = c.abs();
            if m.is_one() {
                write!(f, "v({q})")?;
            } else {
                write!(f, "{m}*v({q})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `x · v`.
pub fn act(params: &ModuleParams, x: &AlgebraElement, v: &WeightVector) -> Result<WeightVector, ModuleError> {
    let group = params.group();
    for (key, _) in x.terms() {
        if key.index().is_some_and(|g| !group.contains(g)) {
            return Err(ModuleError::OutsideSubalgebra { key: key.clone(), group: group.clone() });
        }
    }
    for q in v.indices() {
        if !group.contains(q) {
            return Err(ModuleError::VectorOutsideGroup { index: q.clone(), group: group.clone() });
        }
    }
    let mut out = WeightVector::zero();
    for (key, c) in x.terms() {
        let Some(g) = key.index() else { continue };
        for (h, a) in v.entries() {
            let coeff = params.coeff(key, h);
            out.add_term(g + h, &(c * a * coeff));
        }
    }
    Ok(out)
}

/// Applies `x_1 x_2 ⋯ x_n` to `v`, rightmost factor first.
pub fn act_word(
    params: &ModuleParams,
    word: &[AlgebraElement],
    v: &WeightVector,
) -> Result<WeightVector, ModuleError> {
    word.iter().rev().try_fold(v.clone(), |acc, x| act(params, x, &acc))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Irreducible,
    ReducibleTrivialSub,
    ReducibleCodimOne,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Irreducible => "Irreducible",
            Verdict::ReducibleTrivialSub => "ReducibleTrivialSub",
            Verdict::ReducibleCodimOne => "ReducibleCodimOne",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    /// Description of the irreducible subquotient `V′`.
    pub subquotient: String,
}

impl Classification {
    pub fn from_verdict(verdict: Verdict) -> Self {
        let subquotient = match verdict {
            Verdict::ReducibleTrivialSub => "V' = V/T, the quotient by the trivial submodule spanned by v_0",
            Verdict::ReducibleCodimOne => "V' = span{v_h : h != 0}, the codimension-1 submodule",
            Verdict::Irreducible => "V' = V",
        };
        Classification { verdict, subquotient: subquotient.to_string() }
    }
}

/// Reducible exactly when `F = 0`, `α = 0` and `β ∈ {0, 1}`.
pub fn classify(params: &ModuleParams) -> Classification {
    Classification::from_verdict(reducible_locus(params).unwrap_or(Verdict::Irreducible))
}

fn reducible_locus(params: &ModuleParams) -> Option<Verdict> {
    if !params.big_f.is_zero() || !params.alpha.is_zero() {
        return None;
    }
    if params.beta.is_zero() {
        Some(Verdict::ReducibleTrivialSub)
    } else if params.beta.is_one() {
        Some(Verdict::ReducibleCodimOne)
    } else {
        None
    }
}

/// Index set spanning a proper nonzero submodule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IndexPredicate {
    /// `{v_0}`
    ZeroOnly,
    /// `{v_h : h ≠ 0}`
    NonZero,
}

impl IndexPredicate {
    pub fn contains(&self, q: &Rational) -> bool {
        match self {
            IndexPredicate::ZeroOnly => q.is_zero(),
            IndexPredicate::NonZero => !q.is_zero(),
        }
    }
}

/// `None` when the module is irreducible.
pub fn submodule_basis(params: &ModuleParams) -> Option<IndexPredicate> {
    match reducible_locus(params)? {
        Verdict::ReducibleTrivialSub => Some(IndexPredicate::ZeroOnly),
        Verdict::ReducibleCodimOne => Some(IndexPredicate::NonZero),
        Verdict::Irreducible => None,
    }
}

/// Why two subquotients `V′` are isomorphic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum IsoWitness {
    /// `v_q ↦ w_{q−g}` with `α₂ = α₁ + g`.
    Shift(Rational),
    /// `V′(0,0;0) ≅ V′(0,1;0)` through `v̄_h ↦ h·w_h`.
    SubquotientSwap,
    /// `V(α,0;0) ≅ V(α+g,1;0)` for `α ∉ G` through `v_q ↦ (α+q)·w_{q−g}`
    /// (or its inverse when `β₁ = 1`).
    DensitySwap(Rational),
}

/// Isomorphism test for the irreducible subquotients `V′` of two modules
/// over the same group. Returns the witness when they are isomorphic.
pub fn iso_check(p1: &ModuleParams, p2: &ModuleParams) -> Result<Option<IsoWitness>, ModuleError> {
    if p1.group != p2.group {
        return Err(ModuleError::GroupMismatch(p1.group.clone(), p2.group.clone()));
    }
    let shift = &p2.alpha - &p1.alpha;
    if !p1.group.contains(&shift) || p1.big_f != p2.big_f {
        return Ok(None);
    }
    if p1.beta == p2.beta {
        return Ok(Some(IsoWitness::Shift(shift)));
    }
    let swap = p1.big_f.is_zero()
        && ((p1.beta.is_zero() && p2.beta.is_one()) || (p1.beta.is_one() && p2.beta.is_zero()));
    Ok(swap.then(|| {
        if p1.group.contains(&p1.alpha) {
            IsoWitness::SubquotientSwap
        } else {
            IsoWitness::DensitySwap(shift)
        }
    }))
}

/// Parameters of `V(α,β;F)` over `ℚ_m` seen as an `HVir[ℤ]`-module through
/// the rescaling map: `(m!·α, β, m!·F)` over ℤ.
pub fn pullback_params(params: &ModuleParams, m: u32) -> Result<ModuleParams, ModuleError> {
    let qm = SubgroupSpec::qk(m);
    if params.group != qm {
        return Err(ModuleError::GroupMismatch(params.group.clone(), qm));
    }
    let big_m = Rational::factorial(m);
    ModuleParams::new(
        &big_m * &params.alpha,
        params.beta.clone(),
        &big_m * &params.big_f,
        SubgroupSpec::integers(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn params(a: Rational, b: Rational, f: Rational, g: SubgroupSpec) -> ModuleParams {
        ModuleParams::new(a, b, f, g).unwrap()
    }

    fn z() -> SubgroupSpec {
        SubgroupSpec::integers()
    }

    #[test]
    fn act_examples() {
        let p = params(q(0, 1), q(0, 1), q(0, 1), z());
        let v = act(&p, &AlgebraElement::d(q(5, 1)), &WeightVector::basis(q(0, 1))).unwrap();
        assert!(v.is_zero());

        let sixth = SubgroupSpec::cyclic(q(1, 6)).unwrap();
        let p = params(q(1, 2), q(2, 1), q(3, 1), sixth);
        let v0 = WeightVector::basis(q(1, 6));
        // 1/2 lies in the group, so the stored alpha is 0: 0 + 1/6 + 2/3.
        assert_eq!(act(&p, &AlgebraElement::d(q(1, 3)), &v0).unwrap(), WeightVector::term(q(1, 2), q(5, 6)));
        let p = params(q(1, 7), q(2, 1), q(3, 1), SubgroupSpec::cyclic(q(1, 6)).unwrap());
        assert_eq!(
            act(&p, &AlgebraElement::d(q(1, 3)), &v0).unwrap(),
            WeightVector::term(q(1, 2), q(1, 7) + q(5, 6))
        );
        assert_eq!(act(&p, &AlgebraElement::i(q(1, 3)), &v0).unwrap(), WeightVector::term(q(1, 2), q(3, 1)));
        assert!(act(&p, &AlgebraElement::cd(), &v0).unwrap().is_zero());
    }

    #[test]
    fn act_rejects_outside_indices() {
        let p = params(q(1, 3), q(0, 1), q(1, 1), z());
        let err = act(&p, &AlgebraElement::d(q(1, 2)), &WeightVector::basis(q(0, 1)));
        assert!(matches!(err, Err(ModuleError::OutsideSubalgebra { .. })));
        let err = act(&p, &AlgebraElement::d(q(1, 1)), &WeightVector::basis(q(1, 2)));
        assert!(matches!(err, Err(ModuleError::VectorOutsideGroup { .. })));
    }

    #[test]
    fn word_examples() {
        let p = params(q(0, 1), q(1, 1), q(0, 1), z());
        let v0 = WeightVector::basis(q(0, 1));
        assert_eq!(act_word(&p, &[], &v0).unwrap(), v0);
        let w = [AlgebraElement::d(q(1, 1)), AlgebraElement::d(q(-1, 1))];
        assert!(act_word(&p, &w, &v0).unwrap().is_zero());

        let p = params(q(1, 3), q(1, 2), q(5, 2), z());
        let (a, b) = (AlgebraElement::i(q(2, 1)), AlgebraElement::i(q(-3, 1)));
        for h in -3..=3 {
            let v = WeightVector::basis(q(h, 1));
            assert_eq!(
                act_word(&p, &[a.clone(), b.clone()], &v).unwrap(),
                act_word(&p, &[b.clone(), a.clone()], &v).unwrap()
            );
        }
    }

    #[test]
    fn classify_examples() {
        let qq = SubgroupSpec::FullQ;
        let cases = [
            (params(q(0, 1), q(0, 1), q(0, 1), qq.clone()), Verdict::ReducibleTrivialSub),
            (params(q(0, 1), q(1, 1), q(0, 1), qq), Verdict::ReducibleCodimOne),
            (params(q(1, 2), q(0, 1), q(0, 1), z()), Verdict::Irreducible),
            (params(q(0, 1), q(0, 1), q(2, 1), z()), Verdict::Irreducible),
            (
                params(q(3, 2), q(1, 1), q(0, 1), SubgroupSpec::cyclic(q(1, 2)).unwrap()),
                Verdict::ReducibleCodimOne,
            ),
        ];
        for (p, expected) in cases {
            assert_eq!(classify(&p).verdict, expected, "{p}");
        }
    }

    #[test]
    fn submodule_examples() {
        assert_eq!(submodule_basis(&params(q(0, 1), q(0, 1), q(0, 1), z())), Some(IndexPredicate::ZeroOnly));
        assert_eq!(submodule_basis(&params(q(0, 1), q(1, 1), q(0, 1), z())), Some(IndexPredicate::NonZero));
        assert_eq!(submodule_basis(&params(q(0, 1), q(0, 1), q(5, 1), z())), None);
        assert!(IndexPredicate::NonZero.contains(&q(3, 1)));
        assert!(!IndexPredicate::NonZero.contains(&q(0, 1)));
    }

    #[test]
    fn iso_examples() {
        let a = params(q(1, 3), q(2, 1), q(3, 1), z());
        let b = params(q(16, 3), q(2, 1), q(3, 1), z());
        assert_eq!(iso_check(&a, &b).unwrap(), Some(IsoWitness::Shift(q(5, 1))));

        // α = 5 ∈ ℤ normalizes to 0, so the witness is the zero shift.
        let a = params(q(0, 1), q(2, 1), q(3, 1), z());
        let b = params(q(5, 1), q(2, 1), q(3, 1), z());
        assert_eq!(iso_check(&a, &b).unwrap(), Some(IsoWitness::Shift(q(0, 1))));

        let qq = SubgroupSpec::FullQ;
        let t = params(q(0, 1), q(0, 1), q(0, 1), qq.clone());
        let c = params(q(0, 1), q(1, 1), q(0, 1), qq);
        assert_eq!(iso_check(&t, &c).unwrap(), Some(IsoWitness::SubquotientSwap));

        let half0 = params(q(1, 2), q(0, 1), q(0, 1), z());
        let half1 = params(q(1, 2), q(1, 1), q(0, 1), z());
        assert_eq!(iso_check(&half0, &half1).unwrap(), Some(IsoWitness::DensitySwap(q(0, 1))));
        assert_eq!(iso_check(&half1, &half0).unwrap(), Some(IsoWitness::DensitySwap(q(0, 1))));
        let half2 = params(q(1, 2), q(2, 1), q(0, 1), z());
        assert_eq!(iso_check(&half0, &half2).unwrap(), None);

        let f4 = params(q(0, 1), q(2, 1), q(4, 1), z());
        assert_eq!(iso_check(&a, &f4).unwrap(), None);
        let third = params(q(1, 3), q(2, 1), q(3, 1), z());
        assert_eq!(iso_check(&third, &a).unwrap(), None);

        let other = params(q(0, 1), q(2, 1), q(3, 1), SubgroupSpec::FullQ);
        assert!(matches!(iso_check(&a, &other), Err(ModuleError::GroupMismatch(..))));
    }

    #[test]
    fn pullback_examples() {
        let q3 = SubgroupSpec::qk(3);
        let p = params(q(1, 7), q(3, 1), q(1, 1), q3.clone());
        assert_eq!(pullback_params(&p, 3).unwrap(), params(q(6, 7), q(3, 1), q(6, 1), z()));
        // 1/2 ∈ ℚ_3, so it is stored as 0; m!·(1/2) = 3 ∈ ℤ normalizes to 0 as well.
        let p = params(q(1, 2), q(3, 1), q(1, 1), q3);
        assert_eq!(pullback_params(&p, 3).unwrap(), params(q(3, 1), q(3, 1), q(6, 1), z()));
        let p = params(q(0, 1), q(7, 5), q(0, 1), SubgroupSpec::qk(4));
        assert_eq!(pullback_params(&p, 4).unwrap(), params(q(0, 1), q(7, 5), q(0, 1), z()));
        let p = params(q(1, 1), q(0, 1), q(1, 1), SubgroupSpec::qk(2));
        assert_eq!(pullback_params(&p, 2).unwrap(), params(q(2, 1), q(0, 1), q(2, 1), z()));
        assert!(pullback_params(&p, 3).is_err());
    }

    #[test]
    fn weight_vector_printing() {
        let v = WeightVector::from_entries([(q(1, 2), q(4, 3)), (q(-1, 1), q(-1, 1))]);
        assert_eq!(v.to_string(), "-v(-1) + 4/3*v(1/2)");
        assert_eq!(WeightVector::zero().to_string(), "0");
    }
}
