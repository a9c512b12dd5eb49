use std::fmt;

use super::tower::{Elem, Field};
use crate::error::Result;

/// An element of `F^x / (F^x)^2`, written `u^a * pi^b` for the fixed
/// nonsquare unit `u` and uniformizer `pi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClass {
    pub odd_valuation: bool,
    pub nonsquare_unit: bool,
}

impl SquareClass {
    pub const ONE: Self = Self { odd_valuation: false, nonsquare_unit: false };
    pub const U: Self = Self { odd_valuation: false, nonsquare_unit: true };
    pub const PI: Self = Self { odd_valuation: true, nonsquare_unit: false };
    pub const U_PI: Self = Self { odd_valuation: true, nonsquare_unit: true };
    pub const ALL: [Self; 4] = [Self::ONE, Self::U, Self::PI, Self::U_PI];

    /// Index in `ALL`.
    pub fn index(self) -> usize {
        usize::from(self.nonsquare_unit) | (usize::from(self.odd_valuation) << 1)
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i & 3]
    }

    pub fn mul(self, o: Self) -> Self {
        Self {
            odd_valuation: self.odd_valuation ^ o.odd_valuation,
            nonsquare_unit: self.nonsquare_unit ^ o.nonsquare_unit,
        }
    }

    pub fn is_one(self) -> bool {
        self == Self::ONE
    }

    pub fn symbol(self) -> &'static str {
        ["1", "u", "pi", "u*pi"][self.index()]
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.symbol() == s)
    }
}

impl std::ops::Mul for SquareClass {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        SquareClass::mul(self, o)
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A subgroup of the Klein four-group of square classes, stored as a bit mask
/// over `SquareClass::index`. Always contains `1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SquareClassSubgroup(u8);

impl SquareClassSubgroup {
    pub fn trivial() -> Self {
        Self(1)
    }

    pub fn full() -> Self {
        Self(0b1111)
    }

    /// Subgroup generated by the given classes.
    pub fn generated_by<I: IntoIterator<Item = SquareClass>>(gens: I) -> Self {
        gens.into_iter().fold(Self::trivial(), |g, c| g.adjoin(c))
    }

    pub fn adjoin(self, c: SquareClass) -> Self {
        let mut mask = self.0;
        for x in self.classes() {
            mask |= 1 << (x * c).index();
        }
        Self(mask)
    }

    pub fn from_mask(mask: u8) -> Option<Self> {
        let g = Self(mask & 0b1111);
        (g.0 == mask && g.is_subgroup()).then_some(g)
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn contains(self, c: SquareClass) -> bool {
        self.0 & (1 << c.index()) != 0
    }

    pub fn is_full(self) -> bool {
        self.0 == 0b1111
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn classes(self) -> impl Iterator<Item = SquareClass> {
        SquareClass::ALL.into_iter().filter(move |c| self.contains(*c))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Product subgroup `G * H`.
    pub fn join(self, o: Self) -> Self {
        o.classes().fold(self, |g, c| g.adjoin(c))
    }

    /// Coset `c * G` as a raw class set.
    pub fn coset(self, c: SquareClass) -> u8 {
        self.classes().fold(0, |m, x| m | 1 << (x * c).index())
    }

    pub fn is_subgroup(self) -> bool {
        self.contains(SquareClass::ONE) && self.classes().all(|a| self.classes().all(|b| self.contains(a * b)))
    }

    pub fn symbols(self) -> Vec<&'static str> {
        self.classes().map(SquareClass::symbol).collect()
    }
}

impl fmt::Display for SquareClassSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.symbols().join(","))
    }
}

impl Field {
    pub fn square_class(&self, x: &Elem) -> Result<SquareClass> {
        let v = self.valuation(x)?;
        let lead = self.lead_residue(x)?;
        Ok(SquareClass { odd_valuation: v.rem_euclid(2) == 1, nonsquare_unit: !self.residue_field().is_square(&lead) })
    }

    pub fn is_square(&self, x: &Elem) -> Result<bool> {
        Ok(self.square_class(x)?.is_one())
    }

    /// Representative `u^a * pi^b` of a class.
    pub fn class_rep(&self, c: SquareClass) -> Elem {
        let mut r = self.one();
        if c.nonsquare_unit {
            r = self.nonsquare_unit();
        }
        if c.odd_valuation {
            r = self.mul(&r, &self.uniformizer());
        }
        r
    }

    /// Hilbert symbol `(a, b)`, as `+1` or `-1`.
    pub fn hilbert_symbol(&self, a: &Elem, b: &Elem) -> Result<i8> {
        let alpha = self.valuation(a)?;
        let beta = self.valuation(b)?;
        let k = self.residue_field();
        let mut r = k.one();
        if (alpha * beta).rem_euclid(2) == 1 {
            r = k.neg(&r);
        }
        let la = self.lead_residue(a)?;
        let lb = self.lead_residue(b)?;
        if beta.rem_euclid(2) == 1 {
            r = k.mul(&r, &la);
        }
        if alpha.rem_euclid(2) == 1 {
            r = k.mul(&r, &k.inv(&lb)?);
        }
        Ok(k.legendre(&r))
    }

    /// Hilbert symbol on square classes.
    pub fn hilbert_classes(&self, a: SquareClass, b: SquareClass) -> i8 {
        self.hilbert_symbol(&self.class_rep(a), &self.class_rep(b)).expect("class representatives are nonzero")
    }

    /// Square class of `N_{E/F}(x)` in the base of the tower.
    pub fn norm_class(&self, x: &Elem) -> Result<SquareClass> {
        let n = self.norm_to_base(x)?;
        self.base().square_class(&n)
    }
}
