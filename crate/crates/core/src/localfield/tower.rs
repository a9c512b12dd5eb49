use std::fmt;
use std::sync::Arc;

use super::base::{BaseField, Scalar};
use crate::error::{Error, Result};
use crate::ff::{FiniteField, Residue};

/// Element of a field in an extension tower. Level 0 holds base scalars;
/// level `l` holds coordinates over level `l - 1` in the power basis of the
/// `l`-th step generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Elem {
    Base(Scalar),
    Ext(Vec<Elem>),
}

/// Output of [`Field::sqrt`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareRoot {
    pub root: Elem,
    pub exact: bool,
}

/// One step of an extension tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    /// Unramified extension of the given degree, generated by a lift of the
    /// first irreducible polynomial of that degree over the current residue field.
    Unramified { degree: usize },
    /// Totally ramified extension by a monic Eisenstein polynomial, lowest
    /// coefficient first, coefficients in the step's base field.
    Eisenstein { coeffs: Vec<Elem> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Level {
    step: Step,
    degree: usize,
    /// Monic defining polynomial over the previous level, lowest degree first.
    modulus: Vec<Elem>,
    residue: FiniteField,
    uniformizer: Elem,
    /// Residue of `-modulus[0] / pi_prev`; only meaningful for Eisenstein steps.
    eisenstein_unit: Option<Residue>,
    nonsquare: Elem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Inner {
    base: BaseField,
    base_residue: FiniteField,
    base_nonsquare: Elem,
    levels: Vec<Level>,
}

/// A complete discretely valued field: a base field together with a finite
/// tower of unramified and Eisenstein steps. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.base)?;
        for l in &self.0.levels {
            match &l.step {
                Step::Unramified { degree } => write!(f, " / unramified({degree})")?,
                Step::Eisenstein { .. } => write!(f, " / eisenstein({})", l.degree)?,
            }
        }
        Ok(())
    }
}

impl From<BaseField> for Field {
    fn from(base: BaseField) -> Self {
        Field::new(base)
    }
}

impl Field {
    pub fn new(base: BaseField) -> Self {
        let base_residue = base.residue_field();
        let base_nonsquare = Elem::Base(base.lift(&base_residue.first_nonsquare()));
        Self(Arc::new(Inner { base, base_residue, base_nonsquare, levels: Vec::new() }))
    }

    pub fn padic(p: u32) -> Result<Self> {
        Ok(Self::new(BaseField::padic(p)?))
    }

    pub fn laurent(q: u64) -> Result<Self> {
        Ok(Self::new(BaseField::laurent(q)?))
    }

    /// Build a tower over `base` from the given steps.
    pub fn tower(base: BaseField, steps: &[Step]) -> Result<Self> {
        let mut field = Self::new(base);
        for s in steps {
            field = field.push_step(s.clone())?;
        }
        Ok(field)
    }

    /// Extend this field by one more step.
    pub fn push_step(&self, step: Step) -> Result<Self> {
        let lvl = self.top();
        let k = self.residue_field().clone();
        let level = match &step {
            Step::Unramified { degree } => {
                if *degree == 0 {
                    return Err(Error::MalformedTower("unramified degree must be positive".into()));
                }
                let gbar = k.first_irreducible(*degree)?;
                let residue = k.extend(gbar.clone())?;
                let modulus: Vec<Elem> = gbar.iter().map(|c| self.lift_at(lvl, c)).collect();
                Level {
                    step: step.clone(),
                    degree: *degree,
                    modulus,
                    residue,
                    uniformizer: Elem::Base(self.0.base.zero()),
                    eisenstein_unit: None,
                    nonsquare: Elem::Base(self.0.base.zero()),
                }
            }
            Step::Eisenstein { coeffs } => {
                let e = coeffs.len().saturating_sub(1);
                if e == 0 {
                    return Err(Error::MalformedTower("Eisenstein polynomial must have positive degree".into()));
                }
                for c in coeffs {
                    self.check_level(lvl, c)?;
                }
                if coeffs[e] != self.one_at(lvl) {
                    return Err(Error::MalformedTower("Eisenstein polynomial must be monic".into()));
                }
                if self.is_zero_at(lvl, &coeffs[0]) || self.valuation_at(lvl, &coeffs[0])? != 1 {
                    return Err(Error::MalformedTower("constant term must have valuation exactly 1".into()));
                }
                for c in &coeffs[1..e] {
                    if !self.is_zero_at(lvl, c) && self.valuation_at(lvl, c)? < 1 {
                        return Err(Error::MalformedTower(
                            "non-leading coefficients must lie in the maximal ideal".into(),
                        ));
                    }
                }
                let unit = self.lead_at(lvl, &self.neg_at(lvl, &coeffs[0]))?;
                Level {
                    step: step.clone(),
                    degree: e,
                    modulus: coeffs.clone(),
                    residue: k.clone(),
                    uniformizer: Elem::Base(self.0.base.zero()),
                    eisenstein_unit: Some(unit),
                    nonsquare: Elem::Base(self.0.base.zero()),
                }
            }
        };
        let mut inner = (*self.0).clone();
        inner.levels.push(level);
        let top = lvl + 1;
        // uniformizer and nonsquare need the arithmetic of the new level
        let uniformizer = {
            let tmp = Field(Arc::new(inner.clone()));
            match step {
                Step::Unramified { .. } => tmp.embed_up(lvl, top, &tmp.uniformizer_at(lvl)),
                Step::Eisenstein { .. } => tmp.generator(top),
            }
        };
        inner.levels[lvl].uniformizer = uniformizer;
        let ns = inner.levels[lvl].residue.first_nonsquare();
        let nonsquare = Field(Arc::new(inner.clone())).lift_at(top, &ns);
        inner.levels[lvl].nonsquare = nonsquare;
        Ok(Self(Arc::new(inner)))
    }

    pub fn base_field(&self) -> &BaseField {
        &self.0.base
    }

    /// The bottom of the tower as a field in its own right.
    pub fn base(&self) -> Field {
        if self.0.levels.is_empty() {
            return self.clone();
        }
        Field::new(self.0.base.clone())
    }

    pub fn steps(&self) -> Vec<Step> {
        self.0.levels.iter().map(|l| l.step.clone()).collect()
    }

    pub fn is_base(&self) -> bool {
        self.0.levels.is_empty()
    }

    fn top(&self) -> usize {
        self.0.levels.len()
    }

    /// Total degree over the base.
    pub fn degree(&self) -> usize {
        self.0.levels.iter().map(|l| l.degree).product()
    }

    /// Ramification index and residue degree over the base.
    pub fn ramification(&self) -> (usize, usize) {
        let mut e = 1;
        let mut f = 1;
        for l in &self.0.levels {
            match l.step {
                Step::Unramified { .. } => f *= l.degree,
                Step::Eisenstein { .. } => e *= l.degree,
            }
        }
        (e, f)
    }

    pub fn residue_field(&self) -> &FiniteField {
        self.residue_at(self.top())
    }

    fn residue_at(&self, level: usize) -> &FiniteField {
        if level == 0 {
            &self.0.base_residue
        } else {
            &self.0.levels[level - 1].residue
        }
    }

    // ---- constructors ----

    pub fn zero(&self) -> Elem {
        self.zero_at(self.top())
    }

    pub fn one(&self) -> Elem {
        self.one_at(self.top())
    }

    pub fn from_int(&self, n: i64) -> Elem {
        self.from_scalar(self.0.base.from_int(n))
    }

    /// Embed a base scalar.
    pub fn from_scalar(&self, s: Scalar) -> Elem {
        self.embed_up(0, self.top(), &Elem::Base(s))
    }

    /// Embed an element of the base field (level 0) of this tower.
    pub fn from_base(&self, x: &Elem) -> Elem {
        self.embed_up(0, self.top(), x)
    }

    pub fn uniformizer(&self) -> Elem {
        self.uniformizer_at(self.top())
    }

    /// Fixed nonsquare unit: lift of the first nonsquare of the residue field.
    pub fn nonsquare_unit(&self) -> Elem {
        let top = self.top();
        if top == 0 {
            self.0.base_nonsquare.clone()
        } else {
            self.0.levels[top - 1].nonsquare.clone()
        }
    }

    /// Representatives `sum_{k<m} lift(r_k) pi^k` of `R / pi^m R`, in enumeration order.
    pub fn residue_representatives(&self, m: u32) -> Vec<Elem> {
        let k = self.residue_field();
        let lifts: Vec<Elem> = k.elements().map(|r| self.lift(&r)).collect();
        let mut reps = vec![self.zero()];
        let mut pk = self.one();
        for _ in 0..m {
            let mut next = Vec::with_capacity(reps.len() * lifts.len());
            for l in &lifts {
                let term = self.mul(l, &pk);
                for r in &reps {
                    next.push(self.add(r, &term));
                }
            }
            reps = next;
            pk = self.mul(&pk, &self.uniformizer());
        }
        reps
    }

    /// Canonical lift of a residue class.
    pub fn lift(&self, r: &Residue) -> Elem {
        self.lift_at(self.top(), r)
    }

    /// Scalar content of a level-0 element.
    pub fn as_scalar<'a>(&self, x: &'a Elem) -> Option<&'a Scalar> {
        match x {
            Elem::Base(s) => Some(s),
            Elem::Ext(_) => None,
        }
    }

    /// Coefficients over the base field for elements that lie in it.
    pub fn to_base(&self, x: &Elem) -> Option<Scalar> {
        let mut cur = x;
        loop {
            match cur {
                Elem::Base(s) => return Some(s.clone()),
                Elem::Ext(c) => {
                    if c[1..].iter().any(|y| !self.is_zero_elem(y)) {
                        return None;
                    }
                    cur = &c[0];
                }
            }
        }
    }

    fn is_zero_elem(&self, x: &Elem) -> bool {
        match x {
            Elem::Base(s) => self.0.base.is_zero(s),
            Elem::Ext(c) => c.iter().all(|y| self.is_zero_elem(y)),
        }
    }

    // ---- arithmetic at the top level ----

    pub fn is_zero(&self, x: &Elem) -> bool {
        self.is_zero_elem(x)
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        self.add_at(a, b)
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add_at(a, &self.neg_at(self.top(), b))
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        self.neg_at(self.top(), a)
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.mul_at(self.top(), a, b)
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        self.inv_at(self.top(), a)
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Elem, e: i64) -> Result<Elem> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = self.one();
        let mut b = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            n >>= 1;
        }
        Ok(acc)
    }

    /// `uniformizer^k`, negative exponents allowed.
    pub fn pi_pow(&self, k: i64) -> Elem {
        self.pow(&self.uniformizer(), k).expect("uniformizer is nonzero")
    }

    /// Normalized valuation of this field.
    pub fn valuation(&self, x: &Elem) -> Result<i64> {
        self.valuation_at(self.top(), x)
    }

    /// Residue of `x / uniformizer^valuation(x)` in the residue field.
    pub fn lead_residue(&self, x: &Elem) -> Result<Residue> {
        self.lead_at(self.top(), x)
    }

    /// Reduction of an integral element modulo the maximal ideal.
    pub fn reduce(&self, x: &Elem) -> Result<Residue> {
        if self.is_zero(x) {
            return Ok(self.residue_field().zero());
        }
        match self.valuation(x)? {
            v if v > 0 => Ok(self.residue_field().zero()),
            0 => self.lead_residue(x),
            _ => Err(Error::Invalid("element is not integral".into())),
        }
    }

    /// Valuation treating zero as `+inf` (returned as `i64::MAX`).
    pub fn valuation_or_max(&self, x: &Elem) -> i64 {
        self.valuation(x).unwrap_or(i64::MAX)
    }

    pub fn is_integral(&self, x: &Elem) -> bool {
        self.valuation_or_max(x) >= 0
    }

    /// `N_{E/F}(x)` down to the base of the tower, as a level-0 element.
    pub fn norm_to_base(&self, x: &Elem) -> Result<Elem> {
        let mut cur = x.clone();
        for l in (1..=self.top()).rev() {
            cur = self.norm_down(l, &cur)?;
        }
        Ok(cur)
    }

    /// Square root in the dense subring when it exists there (base fields only).
    pub fn exact_sqrt(&self, x: &Elem) -> Option<Elem> {
        match x {
            Elem::Base(s) => self.0.base.exact_sqrt(s).map(Elem::Base),
            Elem::Ext(_) => None,
        }
    }

    /// A short representative `y` with `v(x - y) >= k`.
    pub fn truncate(&self, x: &Elem, k: i64) -> Elem {
        self.truncate_at(self.top(), x, k)
    }

    fn truncate_at(&self, level: usize, x: &Elem, k: i64) -> Elem {
        match x {
            Elem::Base(s) => Elem::Base(self.0.base.truncate(s, k)),
            Elem::Ext(c) => {
                let lv = &self.0.levels[level - 1];
                Elem::Ext(
                    c.iter()
                        .enumerate()
                        .map(|(i, ci)| match lv.step {
                            Step::Unramified { .. } => self.truncate_at(level - 1, ci, k),
                            Step::Eisenstein { .. } => {
                                let e = lv.degree as i64;
                                self.truncate_at(level - 1, ci, (k - i as i64).div_euclid(e) + 1)
                            }
                        })
                        .collect(),
                )
            }
        }
    }

    /// Square root of `x`, or `None` if `x` is not a square.
    ///
    /// The root is exact when one exists in the dense subring. Otherwise it is
    /// a Newton approximation `r` with `v(r^2 - x) >= v(x) + precision`.
    pub fn sqrt(&self, x: &Elem, precision: i64) -> Result<Option<SquareRoot>> {
        if self.is_zero(x) {
            return Ok(Some(SquareRoot { root: self.zero(), exact: true }));
        }
        if !self.is_square(x)? {
            return Ok(None);
        }
        if let Some(r) = self.exact_sqrt(x) {
            return Ok(Some(SquareRoot { root: r, exact: true }));
        }
        let v = self.valuation(x)?;
        let y = self.mul(x, &self.pi_pow(-v));
        let k = self.residue_field();
        let r0 = k.sqrt(&self.lead_residue(&y)?).expect("unit residue is a square");
        let mut r = self.lift(&r0);
        let half = self.inv(&self.from_int(2))?;
        let mut reached = 1;
        while reached < precision {
            let step = self.add(&r, &self.div(&y, &r)?);
            reached = (2 * reached).min(precision);
            r = self.truncate(&self.mul(&step, &half), reached + 1);
            let err = self.sub(&self.mul(&r, &r), &y);
            if self.is_zero(&err) {
                return Ok(Some(SquareRoot { root: self.mul(&r, &self.pi_pow(v / 2)), exact: true }));
            }
        }
        Ok(Some(SquareRoot { root: self.mul(&r, &self.pi_pow(v / 2)), exact: false }))
    }

    // ---- level machinery ----

    fn degree_at(&self, level: usize) -> usize {
        self.0.levels[level - 1].degree
    }

    fn check_level(&self, level: usize, x: &Elem) -> Result<()> {
        match (level, x) {
            (0, Elem::Base(_)) => Ok(()),
            (l, Elem::Ext(c)) if l > 0 && c.len() == self.degree_at(l) => {
                c.iter().try_for_each(|y| self.check_level(l - 1, y))
            }
            _ => Err(Error::MalformedTower("coefficient does not live in the step base".into())),
        }
    }

    fn zero_at(&self, level: usize) -> Elem {
        if level == 0 {
            Elem::Base(self.0.base.zero())
        } else {
            Elem::Ext(vec![self.zero_at(level - 1); self.degree_at(level)])
        }
    }

    fn one_at(&self, level: usize) -> Elem {
        self.embed_up(0, level, &Elem::Base(self.0.base.one()))
    }

    fn embed_up(&self, from: usize, to: usize, x: &Elem) -> Elem {
        let mut cur = x.clone();
        for l in (from + 1)..=to {
            let mut c = vec![self.zero_at(l - 1); self.degree_at(l)];
            c[0] = cur;
            cur = Elem::Ext(c);
        }
        cur
    }

    /// Class of the step variable at `level`.
    fn generator(&self, level: usize) -> Elem {
        let d = self.degree_at(level);
        if d == 1 {
            Elem::Ext(vec![self.neg_at(level - 1, &self.0.levels[level - 1].modulus[0])])
        } else {
            let mut c = vec![self.zero_at(level - 1); d];
            c[1] = self.one_at(level - 1);
            Elem::Ext(c)
        }
    }

    fn uniformizer_at(&self, level: usize) -> Elem {
        if level == 0 {
            Elem::Base(self.0.base.uniformizer())
        } else {
            self.0.levels[level - 1].uniformizer.clone()
        }
    }

    fn is_zero_at(&self, _level: usize, x: &Elem) -> bool {
        self.is_zero_elem(x)
    }

    fn add_at(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Base(x), Elem::Base(y)) => Elem::Base(self.0.base.add(x, y)),
            (Elem::Ext(x), Elem::Ext(y)) => Elem::Ext(x.iter().zip(y).map(|(u, v)| self.add_at(u, v)).collect()),
            _ => panic!("elements from different tower levels"),
        }
    }

    fn neg_at(&self, _level: usize, a: &Elem) -> Elem {
        match a {
            Elem::Base(x) => Elem::Base(self.0.base.neg(x)),
            Elem::Ext(x) => Elem::Ext(x.iter().map(|u| self.neg_at(0, u)).collect()),
        }
    }

    fn sub_at(&self, level: usize, a: &Elem, b: &Elem) -> Elem {
        self.add_at(a, &self.neg_at(level, b))
    }

    fn mul_at(&self, level: usize, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Base(x), Elem::Base(y)) => Elem::Base(self.0.base.mul(x, y)),
            (Elem::Ext(x), Elem::Ext(y)) => {
                let lv = &self.0.levels[level - 1];
                let d = lv.degree;
                let below = level - 1;
                let mut prod = vec![self.zero_at(below); 2 * d - 1];
                for (i, xi) in x.iter().enumerate() {
                    if self.is_zero_elem(xi) {
                        continue;
                    }
                    for (j, yj) in y.iter().enumerate() {
                        if self.is_zero_elem(yj) {
                            continue;
                        }
                        prod[i + j] = self.add_at(&prod[i + j], &self.mul_at(below, xi, yj));
                    }
                }
                for k in (d..2 * d - 1).rev() {
                    let c = std::mem::replace(&mut prod[k], self.zero_at(below));
                    if self.is_zero_elem(&c) {
                        continue;
                    }
                    for j in 0..d {
                        let t = self.mul_at(below, &c, &lv.modulus[j]);
                        prod[k - d + j] = self.sub_at(below, &prod[k - d + j], &t);
                    }
                }
                prod.truncate(d);
                Elem::Ext(prod)
            }
            _ => panic!("elements from different tower levels"),
        }
    }

    /// Matrix of multiplication by `a` on the power basis, column `j` = coordinates of `a * y^j`.
    fn mult_matrix(&self, level: usize, a: &Elem) -> Vec<Vec<Elem>> {
        let d = self.degree_at(level);
        let y = self.generator(level);
        let mut cols = Vec::with_capacity(d);
        let mut cur = a.clone();
        for j in 0..d {
            let Elem::Ext(c) = &cur else { unreachable!() };
            cols.push(c.clone());
            if j + 1 < d {
                cur = self.mul_at(level, &cur, &y);
            }
        }
        // transpose into rows
        (0..d).map(|r| (0..d).map(|c| cols[c][r].clone()).collect()).collect()
    }

    fn inv_at(&self, level: usize, a: &Elem) -> Result<Elem> {
        if self.is_zero_elem(a) {
            return Err(Error::DivisionByZero);
        }
        match a {
            Elem::Base(x) => Ok(Elem::Base(self.0.base.inv(x)?)),
            Elem::Ext(_) => {
                let m = self.mult_matrix(level, a);
                let d = m.len();
                let mut rhs = vec![self.zero_at(level - 1); d];
                rhs[0] = self.one_at(level - 1);
                Ok(Elem::Ext(self.solve_at(level - 1, m, rhs)?))
            }
        }
    }

    /// Gaussian elimination over `level`.
    fn solve_at(&self, level: usize, mut m: Vec<Vec<Elem>>, mut rhs: Vec<Elem>) -> Result<Vec<Elem>> {
        let n = m.len();
        for col in 0..n {
            let piv = (col..n).find(|&r| !self.is_zero_elem(&m[r][col])).ok_or(Error::DivisionByZero)?;
            m.swap(col, piv);
            rhs.swap(col, piv);
            let inv = self.inv_at(level, &m[col][col])?;
            for r in 0..n {
                if r == col || self.is_zero_elem(&m[r][col]) {
                    continue;
                }
                let factor = self.mul_at(level, &m[r][col], &inv);
                for c in col..n {
                    let t = self.mul_at(level, &factor, &m[col][c]);
                    m[r][c] = self.sub_at(level, &m[r][c], &t);
                }
                let t = self.mul_at(level, &factor, &rhs[col]);
                rhs[r] = self.sub_at(level, &rhs[r], &t);
            }
        }
        (0..n).map(|i| Ok(self.mul_at(level, &rhs[i], &self.inv_at(level, &m[i][i])?))).collect()
    }

    fn det_at(&self, level: usize, mut m: Vec<Vec<Elem>>) -> Result<Elem> {
        let n = m.len();
        let mut det = self.one_at(level);
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !self.is_zero_elem(&m[r][col])) else {
                return Ok(self.zero_at(level));
            };
            if piv != col {
                m.swap(col, piv);
                det = self.neg_at(level, &det);
            }
            det = self.mul_at(level, &det, &m[col][col]);
            let inv = self.inv_at(level, &m[col][col])?;
            for r in (col + 1)..n {
                if self.is_zero_elem(&m[r][col]) {
                    continue;
                }
                let factor = self.mul_at(level, &m[r][col], &inv);
                for c in col..n {
                    let t = self.mul_at(level, &factor, &m[col][c]);
                    m[r][c] = self.sub_at(level, &m[r][c], &t);
                }
            }
        }
        Ok(det)
    }

    /// Norm from `level` to `level - 1`: determinant of multiplication.
    fn norm_down(&self, level: usize, a: &Elem) -> Result<Elem> {
        let m = self.mult_matrix(level, a);
        self.det_at(level - 1, m)
    }

    fn valuation_at(&self, level: usize, x: &Elem) -> Result<i64> {
        if self.is_zero_elem(x) {
            return Err(Error::ZeroValuation);
        }
        match x {
            Elem::Base(s) => self.0.base.valuation(s),
            Elem::Ext(c) => {
                let lv = &self.0.levels[level - 1];
                let mut best = i64::MAX;
                for (i, ci) in c.iter().enumerate() {
                    if self.is_zero_elem(ci) {
                        continue;
                    }
                    let v = self.valuation_at(level - 1, ci)?;
                    let w = match lv.step {
                        Step::Unramified { .. } => v,
                        Step::Eisenstein { .. } => lv.degree as i64 * v + i as i64,
                    };
                    best = best.min(w);
                }
                Ok(best)
            }
        }
    }

    fn lead_at(&self, level: usize, x: &Elem) -> Result<Residue> {
        if self.is_zero_elem(x) {
            return Err(Error::ZeroValuation);
        }
        match x {
            Elem::Base(s) => self.0.base.lead_residue(s),
            Elem::Ext(c) => {
                let lv = &self.0.levels[level - 1];
                let below = self.residue_at(level - 1);
                let v = self.valuation_at(level, x)?;
                match lv.step {
                    Step::Unramified { .. } => {
                        let coords: Vec<Residue> = c
                            .iter()
                            .map(|ci| {
                                if !self.is_zero_elem(ci) && self.valuation_at(level - 1, ci).ok() == Some(v) {
                                    self.lead_at(level - 1, ci)
                                } else {
                                    Ok(below.zero())
                                }
                            })
                            .collect::<Result<_>>()?;
                        Ok(lv.residue.from_coordinates(&coords))
                    }
                    Step::Eisenstein { .. } => {
                        let e = lv.degree as i64;
                        let i0 = v.rem_euclid(e) as usize;
                        let k = (v - i0 as i64) / e;
                        let lead = self.lead_at(level - 1, &c[i0])?;
                        let unit = lv.eisenstein_unit.as_ref().unwrap();
                        let unit_pow =
                            if k >= 0 { below.inv(&below.pow(unit, k as u64))? } else { below.pow(unit, (-k) as u64) };
                        Ok(below.mul(&lead, &unit_pow))
                    }
                }
            }
        }
    }

    fn lift_at(&self, level: usize, r: &Residue) -> Elem {
        if level == 0 {
            return Elem::Base(self.0.base.lift(r));
        }
        let lv = &self.0.levels[level - 1];
        match lv.step {
            Step::Unramified { .. } => {
                let coords = if lv.degree == 1 { vec![r.clone()] } else { lv.residue.coordinates(r) };
                Elem::Ext(coords.iter().map(|c| self.lift_at(level - 1, c)).collect())
            }
            Step::Eisenstein { .. } => {
                let mut c = vec![self.zero_at(level - 1); lv.degree];
                c[0] = self.lift_at(level - 1, r);
                Elem::Ext(c)
            }
        }
    }
}
