use crate::error::{Error, Result};
use crate::ff::{FfPoly, FiniteField, Residue};

/// Reduced rational function over `F_q`: `num / den` with `den` monic and
/// coprime to `num`. Zero is `0 / 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: FfPoly,
    den: FfPoly,
}

impl RatFunc {
    pub fn new(fq: &FiniteField, num: FfPoly, den: FfPoly) -> Result<Self> {
        let num = fq.poly_trim(num);
        let den = fq.poly_trim(den);
        if den.is_empty() {
            return Err(Error::DivisionByZero);
        }
        if num.is_empty() {
            return Ok(Self::zero(fq));
        }
        let g = fq.poly_gcd(&num, &den);
        let num = fq.poly_divrem(&num, &g)?.0;
        let den = fq.poly_divrem(&den, &g)?.0;
        let lead_inv = fq.inv(den.last().unwrap())?;
        Ok(Self { num: fq.poly_scale(&num, &lead_inv), den: fq.poly_scale(&den, &lead_inv) })
    }

    pub fn from_poly(fq: &FiniteField, num: FfPoly) -> Self {
        Self::new(fq, num, vec![fq.one()]).expect("nonzero denominator")
    }

    pub fn constant(fq: &FiniteField, c: Residue) -> Self {
        Self::from_poly(fq, vec![c])
    }

    pub fn zero(fq: &FiniteField) -> Self {
        Self { num: Vec::new(), den: vec![fq.one()] }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn num(&self) -> &FfPoly {
        &self.num
    }

    pub fn den(&self) -> &FfPoly {
        &self.den
    }

    pub fn add(&self, fq: &FiniteField, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(fq, fq.poly_add(&self.num, &o.num), self.den.clone()).unwrap();
        }
        let num = fq.poly_add(&fq.poly_mul(&self.num, &o.den), &fq.poly_mul(&o.num, &self.den));
        Self::new(fq, num, fq.poly_mul(&self.den, &o.den)).unwrap()
    }

    pub fn neg(&self, fq: &FiniteField) -> Self {
        Self { num: self.num.iter().map(|c| fq.neg(c)).collect(), den: self.den.clone() }
    }

    pub fn sub(&self, fq: &FiniteField, o: &Self) -> Self {
        self.add(fq, &o.neg(fq))
    }

    pub fn mul(&self, fq: &FiniteField, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(fq);
        }
        Self::new(fq, fq.poly_mul(&self.num, &o.num), fq.poly_mul(&self.den, &o.den)).unwrap()
    }

    pub fn inv(&self, fq: &FiniteField) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(fq, self.den.clone(), self.num.clone())
    }

    /// Exact square root inside `F_q(t)`, if one exists.
    pub fn sqrt(&self, fq: &FiniteField) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let n = poly_sqrt(fq, &self.num)?;
        let d = poly_sqrt(fq, &self.den)?;
        Self::new(fq, n, d).ok()
    }
}

/// Multiplicity of the irreducible `place` in the nonzero polynomial `f`,
/// together with the cofactor.
pub fn strip_place(fq: &FiniteField, f: &FfPoly, place: &FfPoly) -> (i64, FfPoly) {
    let mut k = 0;
    let mut g = f.clone();
    loop {
        let (q, r) = fq.poly_divrem(&g, place).expect("place is nonzero");
        if !r.is_empty() {
            return (k, g);
        }
        g = q;
        k += 1;
    }
}

fn poly_sqrt(fq: &FiniteField, f: &FfPoly) -> Option<FfPoly> {
    if f.is_empty() {
        return Some(Vec::new());
    }
    let deg = f.len() - 1;
    if deg % 2 == 1 {
        return None;
    }
    let m = deg / 2;
    let top = fq.sqrt(&f[deg])?;
    let two_top_inv = fq.inv(&fq.add(&top, &top)).ok()?;
    let mut g = vec![fq.zero(); m + 1];
    g[m] = top;
    for k in (0..m).rev() {
        // coefficient of x^{m+k} in g^2 is 2 g_m g_k + sum over k < i, j < m
        let mut acc = f[m + k].clone();
        for i in (k + 1)..m {
            let j = m + k - i;
            if j > k && j < m {
                acc = fq.sub(&acc, &fq.mul(&g[i], &g[j]));
            }
        }
        g[k] = fq.mul(&acc, &two_top_inv);
    }
    (fq.poly_mul(&g, &g) == fq.poly_trim(f.clone())).then_some(g)
}
