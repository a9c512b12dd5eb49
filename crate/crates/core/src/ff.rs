//! Finite fields realized as towers of simple extensions over a prime field.
//!
//! Elements are flat coordinate vectors over `F_p`. A field with extension
//! degrees `d_1, ..., d_k` stores an element of level `l` as `d_l` chunks, each
//! chunk an element of level `l - 1`. Embedding a lower level into a higher one
//! is therefore zero padding.

use std::fmt;

use crate::error::{Error, Result};

/// Largest residue field size accepted anywhere in the crate (3^10).
pub const MAX_RESIDUE_FIELD_SIZE: u64 = 59_049;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue(pub Vec<u32>);

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Level {
    degree: usize,
    /// Monic modulus; `modulus[degree]` is one. Coefficients live one level down.
    modulus: Vec<Residue>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField {
    p: u32,
    levels: Vec<Level>,
}

/// Polynomial over a finite field, lowest degree first, no trailing zeros.
pub type FfPoly = Vec<Residue>;

impl FiniteField {
    pub fn prime(p: u32) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::Unsupported(format!("characteristic {p} is not an odd prime")));
        }
        Ok(Self { p, levels: Vec::new() })
    }

    /// `F_q` for an odd prime power `q`, using the first irreducible of the
    /// right degree in enumeration order.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or_else(|| Error::Unsupported(format!("{q} is not an odd prime power")))?;
        let base = Self::prime(p)?;
        if k == 1 {
            return Ok(base);
        }
        if q > MAX_RESIDUE_FIELD_SIZE {
            return Err(Error::Unsupported(format!("field of order {q} is too large")));
        }
        let m = base.first_irreducible(k as usize)?;
        base.extend(m)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    fn dim_at(&self, level: usize) -> usize {
        self.levels[..level].iter().map(|l| l.degree).product()
    }

    /// Degree over the prime field.
    pub fn dim(&self) -> usize {
        self.dim_at(self.levels.len())
    }

    pub fn size(&self) -> u64 {
        (self.p as u64).pow(self.dim() as u32)
    }

    pub fn zero(&self) -> Residue {
        Residue(vec![0; self.dim()])
    }

    pub fn one(&self) -> Residue {
        let mut v = vec![0; self.dim()];
        v[0] = 1;
        Residue(v)
    }

    pub fn from_int(&self, n: i64) -> Residue {
        let mut v = vec![0; self.dim()];
        v[0] = n.rem_euclid(self.p as i64) as u32;
        Residue(v)
    }

    pub fn is_zero(&self, a: &Residue) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &Residue, b: &Residue) -> Residue {
        Residue(a.0.iter().zip(&b.0).map(|(x, y)| (x + y) % self.p).collect())
    }

    pub fn sub(&self, a: &Residue, b: &Residue) -> Residue {
        Residue(a.0.iter().zip(&b.0).map(|(x, y)| (x + self.p - y) % self.p).collect())
    }

    pub fn neg(&self, a: &Residue) -> Residue {
        Residue(a.0.iter().map(|x| (self.p - x) % self.p).collect())
    }

    pub fn mul(&self, a: &Residue, b: &Residue) -> Residue {
        Residue(self.mul_at(self.levels.len(), &a.0, &b.0))
    }

    fn mul_at(&self, level: usize, a: &[u32], b: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        if level == 0 {
            return vec![((a[0] as u64 * b[0] as u64) % p) as u32];
        }
        let lv = &self.levels[level - 1];
        let d = lv.degree;
        let c = self.dim_at(level - 1);
        let mut prod = vec![vec![0u32; c]; 2 * d - 1];
        for i in 0..d {
            let ai = &a[i * c..(i + 1) * c];
            if ai.iter().all(|&x| x == 0) {
                continue;
            }
            for j in 0..d {
                let bj = &b[j * c..(j + 1) * c];
                if bj.iter().all(|&x| x == 0) {
                    continue;
                }
                let t = self.mul_at(level - 1, ai, bj);
                for (s, x) in prod[i + j].iter_mut().zip(t) {
                    *s = (*s + x) % self.p;
                }
            }
        }
        for k in (d..2 * d - 1).rev() {
            let coef = std::mem::take(&mut prod[k]);
            if coef.iter().all(|&x| x == 0) {
                continue;
            }
            for j in 0..d {
                let t = self.mul_at(level - 1, &coef, &lv.modulus[j].0);
                for (s, x) in prod[k - d + j].iter_mut().zip(t) {
                    *s = (*s + self.p - x) % self.p;
                }
            }
        }
        prod.truncate(d);
        prod.into_iter().flatten().collect()
    }

    pub fn pow(&self, a: &Residue, mut e: u64) -> Residue {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &Residue) -> Result<Residue> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.size() - 2))
    }

    /// Quadratic character: 0 for zero, otherwise +1 or -1.
    pub fn legendre(&self, a: &Residue) -> i8 {
        if self.is_zero(a) {
            return 0;
        }
        if self.pow(a, (self.size() - 1) / 2) == self.one() {
            1
        } else {
            -1
        }
    }

    pub fn is_square(&self, a: &Residue) -> bool {
        self.legendre(a) >= 0
    }

    pub fn first_nonsquare(&self) -> Residue {
        (1..self.size())
            .map(|i| self.element(i))
            .find(|x| self.legendre(x) == -1)
            .expect("odd order field has nonsquares")
    }

    /// Tonelli-Shanks square root; `None` if `a` is not a square.
    pub fn sqrt(&self, a: &Residue) -> Option<Residue> {
        if self.is_zero(a) {
            return Some(self.zero());
        }
        if self.legendre(a) != 1 {
            return None;
        }
        let q1 = self.size() - 1;
        let s = q1.trailing_zeros();
        let t = q1 >> s;
        let z = self.first_nonsquare();
        let mut m = s;
        let mut c = self.pow(&z, t);
        let mut x = self.pow(a, t.div_ceil(2));
        let mut b = self.pow(a, t);
        let one = self.one();
        while b != one {
            let mut i = 0;
            let mut b2 = b.clone();
            while b2 != one {
                b2 = self.mul(&b2, &b2);
                i += 1;
            }
            let mut g = c.clone();
            for _ in 0..(m - i - 1) {
                g = self.mul(&g, &g);
            }
            x = self.mul(&x, &g);
            c = self.mul(&g, &g);
            b = self.mul(&b, &c);
            m = i;
        }
        Some(x)
    }

    /// The element with the given enumeration index (base-`p` digits).
    pub fn element(&self, mut index: u64) -> Residue {
        let p = self.p as u64;
        let mut v = vec![0; self.dim()];
        for c in v.iter_mut() {
            *c = (index % p) as u32;
            index /= p;
        }
        Residue(v)
    }

    pub fn index_of(&self, a: &Residue) -> u64 {
        a.0.iter().rev().fold(0u64, |acc, &c| acc * self.p as u64 + c as u64)
    }

    pub fn elements(&self) -> impl Iterator<Item = Residue> + '_ {
        (0..self.size()).map(move |i| self.element(i))
    }

    /// Adjoin a root of `modulus` (monic, irreducible over `self`).
    pub fn extend(&self, modulus: FfPoly) -> Result<Self> {
        let degree = modulus.len().saturating_sub(1);
        if degree == 0 || modulus[degree] != self.one() {
            return Err(Error::MalformedTower("extension modulus must be monic of positive degree".into()));
        }
        if degree == 1 {
            return Ok(self.clone());
        }
        let size = (self.size() as u128).pow(degree as u32);
        if size > MAX_RESIDUE_FIELD_SIZE as u128 {
            return Err(Error::Unsupported(format!(
                "residue field of order {size} exceeds the supported bound {MAX_RESIDUE_FIELD_SIZE}"
            )));
        }
        if !self.is_irreducible(&modulus) {
            return Err(Error::MalformedTower("extension modulus is reducible".into()));
        }
        let mut levels = self.levels.clone();
        levels.push(Level { degree, modulus });
        Ok(Self { p: self.p, levels })
    }

    /// Degree of the last simple extension (1 for the prime field).
    pub fn top_degree(&self) -> usize {
        self.levels.last().map_or(1, |l| l.degree)
    }

    /// The field one level down (itself for the prime field).
    pub fn parent(&self) -> Self {
        let mut levels = self.levels.clone();
        levels.pop();
        Self { p: self.p, levels }
    }

    /// Embed an element of a subfield lower in this tower.
    pub fn embed(&self, a: &Residue) -> Residue {
        let mut v = a.0.clone();
        v.resize(self.dim(), 0);
        Residue(v)
    }

    /// Split an element into coefficients over `parent()` with respect to the
    /// power basis of the last simple extension.
    pub fn coordinates(&self, a: &Residue) -> Vec<Residue> {
        let c = self.dim() / self.top_degree();
        a.0.chunks(c).map(|ch| Residue(ch.to_vec())).collect()
    }

    pub fn from_coordinates(&self, coords: &[Residue]) -> Residue {
        Residue(coords.iter().flat_map(|c| c.0.iter().copied()).collect())
    }

    // ---- polynomials over this field ----

    pub fn poly_trim(&self, mut f: FfPoly) -> FfPoly {
        while f.last().is_some_and(|c| self.is_zero(c)) {
            f.pop();
        }
        f
    }

    pub fn poly_add(&self, f: &FfPoly, g: &FfPoly) -> FfPoly {
        let n = f.len().max(g.len());
        let z = self.zero();
        let out = (0..n).map(|i| self.add(f.get(i).unwrap_or(&z), g.get(i).unwrap_or(&z))).collect();
        self.poly_trim(out)
    }

    pub fn poly_sub(&self, f: &FfPoly, g: &FfPoly) -> FfPoly {
        let n = f.len().max(g.len());
        let z = self.zero();
        let out = (0..n).map(|i| self.sub(f.get(i).unwrap_or(&z), g.get(i).unwrap_or(&z))).collect();
        self.poly_trim(out)
    }

    pub fn poly_scale(&self, f: &FfPoly, c: &Residue) -> FfPoly {
        self.poly_trim(f.iter().map(|x| self.mul(x, c)).collect())
    }

    pub fn poly_mul(&self, f: &FfPoly, g: &FfPoly) -> FfPoly {
        if f.is_empty() || g.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.zero(); f.len() + g.len() - 1];
        for (i, a) in f.iter().enumerate() {
            if self.is_zero(a) {
                continue;
            }
            for (j, b) in g.iter().enumerate() {
                out[i + j] = self.add(&out[i + j], &self.mul(a, b));
            }
        }
        self.poly_trim(out)
    }

    /// Quotient and remainder; `g` must be nonzero.
    pub fn poly_divrem(&self, f: &FfPoly, g: &FfPoly) -> Result<(FfPoly, FfPoly)> {
        let g = self.poly_trim(g.clone());
        let lead = g.last().ok_or(Error::DivisionByZero)?;
        let lead_inv = self.inv(lead)?;
        let mut r = self.poly_trim(f.clone());
        if r.len() < g.len() {
            return Ok((Vec::new(), r));
        }
        let mut q = vec![self.zero(); r.len() - g.len() + 1];
        while r.len() >= g.len() {
            let shift = r.len() - g.len();
            let c = self.mul(r.last().unwrap(), &lead_inv);
            for (i, gi) in g.iter().enumerate() {
                r[shift + i] = self.sub(&r[shift + i], &self.mul(&c, gi));
            }
            q[shift] = c;
            r = self.poly_trim(r);
        }
        Ok((self.poly_trim(q), r))
    }

    pub fn poly_rem(&self, f: &FfPoly, g: &FfPoly) -> Result<FfPoly> {
        Ok(self.poly_divrem(f, g)?.1)
    }

    pub fn poly_monic(&self, f: &FfPoly) -> FfPoly {
        match f.last() {
            None => Vec::new(),
            Some(l) => {
                let inv = self.inv(l).expect("nonzero leading coefficient");
                self.poly_scale(f, &inv)
            }
        }
    }

    /// Monic gcd (zero polynomial if both inputs are zero).
    pub fn poly_gcd(&self, f: &FfPoly, g: &FfPoly) -> FfPoly {
        let mut a = self.poly_trim(f.clone());
        let mut b = self.poly_trim(g.clone());
        while !b.is_empty() {
            let r = self.poly_rem(&a, &b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        self.poly_monic(&a)
    }

    pub fn poly_powmod(&self, f: &FfPoly, mut e: u64, m: &FfPoly) -> FfPoly {
        let mut base = self.poly_rem(f, m).expect("nonzero modulus");
        let mut acc = self.poly_rem(&vec![self.one()], m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = self.poly_rem(&self.poly_mul(&acc, &base), m).unwrap();
            }
            base = self.poly_rem(&self.poly_mul(&base, &base), m).unwrap();
            e >>= 1;
        }
        acc
    }

    pub fn poly_eval(&self, f: &FfPoly, x: &Residue) -> Residue {
        f.iter().rev().fold(self.zero(), |acc, c| self.add(&self.mul(&acc, x), c))
    }

    /// Ben-Or irreducibility test.
    pub fn is_irreducible(&self, f: &FfPoly) -> bool {
        let f = self.poly_trim(f.clone());
        if f.len() < 2 {
            return false;
        }
        let n = f.len() - 1;
        if n == 1 {
            return true;
        }
        let q = self.size();
        let x = vec![self.zero(), self.one()];
        let mut xp = x.clone();
        for _ in 0..n / 2 {
            xp = self.poly_powmod(&xp, q, &f);
            let g = self.poly_gcd(&f, &self.poly_sub(&xp, &x));
            if g.len() != 1 {
                return false;
            }
        }
        true
    }

    /// Monic polynomial of the given degree whose lower coefficients have the
    /// given enumeration index.
    pub fn monic_poly(&self, degree: usize, mut index: u64) -> FfPoly {
        let q = self.size();
        let mut f = Vec::with_capacity(degree + 1);
        for _ in 0..degree {
            f.push(self.element(index % q));
            index /= q;
        }
        f.push(self.one());
        f
    }

    /// First monic irreducible polynomial of the given degree in enumeration order.
    pub fn first_irreducible(&self, degree: usize) -> Result<FfPoly> {
        let count = (self.size() as u128).pow(degree as u32);
        if count > MAX_RESIDUE_FIELD_SIZE as u128 {
            return Err(Error::Unsupported(format!(
                "residue field of order {count} exceeds the supported bound {MAX_RESIDUE_FIELD_SIZE}"
            )));
        }
        (0..count as u64)
            .map(|i| self.monic_poly(degree, i))
            .find(|f| self.is_irreducible(f))
            .ok_or_else(|| Error::Unsupported("no irreducible polynomial found".into()))
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Decompose `q = p^k` with `p` an odd prime.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 3 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    if p == 2 || p > u32::MAX as u64 {
        return None;
    }
    let mut k = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p as u32, k))
}
