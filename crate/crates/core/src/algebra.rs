//! The generalized Heisenberg-Virasoro algebra `HVir[G]` for `G ⊆ ℚ`.
//!
//! Elements are sparse maps from basis symbols to exact coefficients. The
//! Virasoro subalgebra `Vir[G]` is the span of the `d_g` and `C_D`; it needs
//! no separate representation.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::groups::SubgroupSpec;
use crate::scalar::Rational;

/// A basis symbol. The derived order is the canonical one:
/// `CD < CDI < CI < d_g (by g) < I(h) (by h)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisKey {
    CD,
    CDI,
    CI,
    D(Rational),
    I(Rational),
}

impl BasisKey {
    pub fn is_central(&self) -> bool {
        matches!(self, BasisKey::CD | BasisKey::CDI | BasisKey::CI)
    }

    /// The `ad d_0` eigenvalue of the symbol.
    pub fn weight(&self) -> Rational {
        match self {
            BasisKey::D(g) | BasisKey::I(g) => g.clone(),
            _ => Rational::zero(),
        }
    }

    /// The index `g` of `d_g` or `I(g)`; `None` for central symbols.
    pub fn index(&self) -> Option<&Rational> {
        match self {
            BasisKey::D(g) | BasisKey::I(g) => Some(g),
            _ => None,
        }
    }
}

impl fmt::Display for BasisKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisKey::CD => f.write_str("CD"),
            BasisKey::CDI => f.write_str("CDI"),
            BasisKey::CI => f.write_str("CI"),
            BasisKey::D(g) => write!(f, "d({g})"),
            BasisKey::I(g) => write!(f, "I({g})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("the centerless rescaling map is not defined on central term {0}")]
    CentralTermInCenterless(BasisKey),
    #[error("rescaling map is defined on HVir[Z] only; index of {0} is not an integer")]
    NonIntegerIndex(BasisKey),
    #[error("rescaling order m must be positive")]
    ZeroOrder,
}

/// A finite linear combination of basis symbols with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<BasisKey, Rational>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(key: BasisKey) -> Self {
        Self::term(Rational::one(), key)
    }

    pub fn term(coeff: Rational, key: BasisKey) -> Self {
        let mut x = Self::zero();
        x.add_term(key, &coeff);
        x
    }

    pub fn d(g: Rational) -> Self {
        Self::basis(BasisKey::D(g))
    }

    pub fn i(g: Rational) -> Self {
        Self::basis(BasisKey::I(g))
    }

    pub fn cd() -> Self {
        Self::basis(BasisKey::CD)
    }

    pub fn cdi() -> Self {
        Self::basis(BasisKey::CDI)
    }

    pub fn ci() -> Self {
        Self::basis(BasisKey::CI)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (BasisKey, Rational)>) -> Self {
        let mut x = Self::zero();
        for (k, c) in terms {
            x.add_term(k, &c);
        }
        x
    }

    /// Adds `coeff · key`, dropping the entry if it cancels.
    pub fn add_term(&mut self, key: BasisKey, coeff: &Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(coeff.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &BasisKey) -> Rational {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    /// Terms in canonical key order.
    pub fn terms(&self) -> impl Iterator<Item = (&BasisKey, &Rational)> {
        self.terms.iter()
    }

    pub fn is_central(&self) -> bool {
        self.terms.keys().all(BasisKey::is_central)
    }

    /// Projection onto the centerless quotient.
    pub fn drop_central(&self) -> Self {
        AlgebraElement {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| !k.is_central())
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        AlgebraElement { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    /// The Lie bracket `[self, other]`.
    pub fn bracket(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let c = ca * cb;
                for (key, coeff) in bracket_basis(a, b) {
                    out.add_term(key, &(&c * &coeff));
                }
            }
        }
        out
    }

    /// `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]`.
    pub fn jacobiator(x: &Self, y: &Self, z: &Self) -> Self {
        x.bracket(&y.bracket(z)) + y.bracket(&z.bracket(x)) + z.bracket(&x.bracket(y))
    }

    /// Splits into `ad d_0`-homogeneous parts keyed by weight.
    pub fn weight_components(&self) -> BTreeMap<Rational, AlgebraElement> {
        let mut out: BTreeMap<Rational, AlgebraElement> = BTreeMap::new();
        for (k, c) in &self.terms {
            out.entry(k.weight()).or_default().add_term(k.clone(), c);
        }
        out
    }

    /// Whether every `d_g`/`I(g)` index lies in `group`; central symbols always pass.
    pub fn in_subalgebra(&self, group: &SubgroupSpec) -> bool {
        self.terms.keys().filter_map(BasisKey::index).all(|g| group.contains(g))
    }

    /// Keys in print order: non-central symbols canonically, then the center.
    fn display_order(&self) -> impl Iterator<Item = (&BasisKey, &Rational)> {
        let (central, rest): (Vec<_>, Vec<_>) = self.terms.iter().partition(|(k, _)| k.is_central());
        rest.into_iter().chain(central)
    }
}

/// Bracket of two basis symbols as a list of (symbol, coefficient).
fn bracket_basis(a: &BasisKey, b: &BasisKey) -> Vec<(BasisKey, Rational)> {
    use BasisKey::*;
    match (a, b) {
        (D(g), D(h)) => {
            let mut out = vec![(D(g + h), h - g)];
            if (g + h).is_zero() {
                out.push((CD, (g * g * g - g) / Rational::from(12)));
            }
            out
        }
        (D(g), I(h)) => {
            let mut out = vec![(I(g + h), h.clone())];
            if (g + h).is_zero() {
                out.push((CDI, g * g + g));
            }
            out
        }
        (I(_), D(_)) => bracket_basis(b, a).into_iter().map(|(k, c)| (k, -c)).collect(),
        (I(g), I(h)) => {
            if (g + h).is_zero() {
                vec![(CI, g.clone())]
            } else {
                Vec::new()
            }
        }
        _ => Vec::new(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhiVariant {
    /// The formulas `d_n ↦ m!·d_{n/m!}`, `I(n) ↦ m!·I(n/m!)` verbatim; undefined on the center.
    Centerless,
    /// The same map corrected on `d_0`, `I(0)` and the center so that it is
    /// an exact homomorphism of central extensions.
    ExactCentral,
}

/// The embedding `HVir[ℤ] → HVir[ℚ_m]` scaling indices by `1/m!`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RescalingMap {
    pub m: u32,
    pub variant: PhiVariant,
}

impl RescalingMap {
    pub fn new(m: u32, variant: PhiVariant) -> Result<Self, AlgebraError> {
        if m == 0 {
            return Err(AlgebraError::ZeroOrder);
        }
        Ok(RescalingMap { m, variant })
    }

    /// `M = m!`.
    pub fn scale(&self) -> Rational {
        Rational::factorial(self.m)
    }

    pub fn apply(&self, x: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        let big_m = self.scale();
        let exact = self.variant == PhiVariant::ExactCentral;
        // Central corrections solve Φ[x,y] = [Φx,Φy] on the (1.1) and (1.2) sectors.
        let d0_shift = (&big_m * &big_m - Rational::one()) / (Rational::from(24) * &big_m);
        let i0_shift = Rational::one() - &big_m;
        let mut out = AlgebraElement::zero();
        for (key, c) in x.terms() {
            if let Some(n) = key.index() {
                if !n.is_integer() {
                    return Err(AlgebraError::NonIntegerIndex(key.clone()));
                }
            }
            match key {
                BasisKey::D(n) => {
                    out.add_term(BasisKey::D(n / &big_m), &(c * &big_m));
                    if exact && n.is_zero() {
                        out.add_term(BasisKey::CD, &(c * &d0_shift));
                    }
                }
                BasisKey::I(n) => {
                    out.add_term(BasisKey::I(n / &big_m), &(c * &big_m));
                    if exact && n.is_zero() {
                        out.add_term(BasisKey::CDI, &(c * &i0_shift));
                    }
                }
                central if !exact => {
                    return Err(AlgebraError::CentralTermInCenterless(central.clone()));
                }
                BasisKey::CD => out.add_term(BasisKey::CD, &(c / &big_m)),
                BasisKey::CDI => out.add_term(BasisKey::CDI, c),
                BasisKey::CI => out.add_term(BasisKey::CI, &(c * &big_m)),
            }
        }
        Ok(out)
    }
}

impl fmt::Display for AlgebraElement {
    /// `d(1/2) - 3*I(-2) + 1/2*CD`; the zero element prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (key, c)) in self.display_order().enumerate() {
            let magnitude = if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
                c.abs()
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
                c.abs()
            };
            if magnitude.is_one() {
                write!(f, "{key}")?;
            } else {
                write!(f, "{magnitude}*{key}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for AlgebraElement {
    type Output = AlgebraElement;
    fn add(mut self, rhs: AlgebraElement) -> AlgebraElement {
        for (k, c) in rhs.terms {
            self.add_term(k, &c);
        }
        self
    }
}

impl Add<&AlgebraElement> for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.clone() + rhs.clone()
    }
}

impl Neg for AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement { terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect() }
    }
}

impl Sub for AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: AlgebraElement) -> AlgebraElement {
        self + (-rhs)
    }
}

impl Sub<&AlgebraElement> for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.clone() - rhs.clone()
    }
}

impl Mul<&AlgebraElement> for &Rational {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        rhs.scale(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn d(n: i64, m: i64) -> AlgebraElement {
        AlgebraElement::d(q(n, m))
    }

    fn i(n: i64, m: i64) -> AlgebraElement {
        AlgebraElement::i(q(n, m))
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(d(1, 1).bracket(&d(2, 1)), d(3, 1));
        assert_eq!(
            d(2, 1).bracket(&d(-2, 1)),
            d(0, 1).scale(&q(-4, 1)) + AlgebraElement::cd().scale(&q(1, 2))
        );
        assert_eq!(d(1, 1).bracket(&i(-1, 1)), -i(0, 1) + AlgebraElement::cdi().scale(&q(2, 1)));
        assert_eq!(i(1, 2).bracket(&i(-1, 2)), AlgebraElement::ci().scale(&q(1, 2)));
        assert!(d(5, 3).bracket(&AlgebraElement::cd()).is_zero());
        assert!(AlgebraElement::ci().bracket(&i(2, 1)).is_zero());
    }

    #[test]
    fn jacobiator_examples() {
        assert!(AlgebraElement::jacobiator(&d(1, 1), &d(2, 1), &d(3, 1)).is_zero());
        assert!(AlgebraElement::jacobiator(&d(1, 1), &d(-1, 1), &i(0, 1)).is_zero());
        let x = d(1, 2) + i(1, 3).scale(&q(2, 1));
        let z = i(-1, 3) + AlgebraElement::cd();
        assert!(AlgebraElement::jacobiator(&x, &d(-1, 2), &z).is_zero());
    }

    #[test]
    fn weight_component_examples() {
        let x = d(3, 1) + i(3, 1).scale(&q(2, 1));
        let parts = x.weight_components();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[&q(3, 1)], x);

        let parts = AlgebraElement::cd().weight_components();
        assert_eq!(parts[&q(0, 1)], AlgebraElement::cd());

        let parts = (d(1, 1) + i(-1, 2)).weight_components();
        assert_eq!(parts[&q(1, 1)], d(1, 1));
        assert_eq!(parts[&q(-1, 2)], i(-1, 2));
    }

    #[test]
    fn subalgebra_membership() {
        let half = SubgroupSpec::cyclic(q(1, 2)).unwrap();
        assert!(d(1, 2).in_subalgebra(&half));
        assert!(!i(1, 3).in_subalgebra(&half));
        assert!(AlgebraElement::cdi().in_subalgebra(&SubgroupSpec::Trivial));
    }

    #[test]
    fn phi_examples() {
        let centerless = RescalingMap::new(2, PhiVariant::Centerless).unwrap();
        let exact = RescalingMap::new(2, PhiVariant::ExactCentral).unwrap();
        assert_eq!(centerless.apply(&d(1, 1)).unwrap(), d(1, 2).scale(&q(2, 1)));
        assert_eq!(
            exact.apply(&d(0, 1)).unwrap(),
            d(0, 1).scale(&q(2, 1)) + AlgebraElement::cd().scale(&q(1, 16))
        );
        assert_eq!(exact.apply(&i(0, 1)).unwrap(), i(0, 1).scale(&q(2, 1)) - AlgebraElement::cdi());
        assert_eq!(exact.apply(&AlgebraElement::ci()).unwrap(), AlgebraElement::ci().scale(&q(2, 1)));
        assert!(matches!(
            centerless.apply(&AlgebraElement::cd()),
            Err(AlgebraError::CentralTermInCenterless(BasisKey::CD))
        ));
        assert!(matches!(exact.apply(&d(1, 2)), Err(AlgebraError::NonIntegerIndex(_))));
        assert!(RescalingMap::new(0, PhiVariant::Centerless).is_err());
    }

    #[test]
    fn printing() {
        let x = d(1, 2) - i(-2, 1).scale(&q(3, 1)) + AlgebraElement::cd().scale(&q(1, 2));
        assert_eq!(x.to_string(), "d(1/2) - 3*I(-2) + 1/2*CD");
        assert_eq!((-d(0, 1).scale(&q(4, 1))).to_string(), "-4*d(0)");
        assert_eq!(AlgebraElement::zero().to_string(), "0");
        assert_eq!((-AlgebraElement::cdi()).to_string(), "-CDI");
    }

    #[test]
    fn zero_coefficients_are_pruned() {
        let x = d(1, 1) - d(1, 1);
        assert!(x.is_zero());
        assert_eq!(x, AlgebraElement::zero());
        assert!(AlgebraElement::term(q(0, 1), BasisKey::CD).is_zero());
    }
}
