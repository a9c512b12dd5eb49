use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::ratfunc::{strip_place, RatFunc};
use crate::error::{Error, Result};
use crate::ff::{FfPoly, FiniteField, Residue};

/// Element of the dense subring of a base field: a rational number for
/// `Q_p`, a rational function over `F_q` for `F_q((v))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Fun(RatFunc),
}

/// Complete discretely valued field with finite residue field of odd
/// characteristic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseField {
    /// `Q_p`, uniformizer `p`.
    Padic { p: u32 },
    /// Completion of `F_q(t)` at the monic irreducible `place`, uniformizer `place`.
    Laurent { q: u64, fq: FiniteField, place: FfPoly, residue: FiniteField },
}

impl BaseField {
    pub fn padic(p: u32) -> Result<Self> {
        FiniteField::prime(p)?;
        Ok(Self::Padic { p })
    }

    /// `F_q((t))`.
    pub fn laurent(q: u64) -> Result<Self> {
        let fq = FiniteField::of_order(q)?;
        let place = vec![fq.zero(), fq.one()];
        Ok(Self::Laurent { q, residue: fq.clone(), fq, place })
    }

    /// Completion of `F_q(t)` at a monic irreducible polynomial.
    pub fn laurent_at(q: u64, place: FfPoly) -> Result<Self> {
        let fq = FiniteField::of_order(q)?;
        let place = fq.poly_trim(place);
        let residue_size = (q as u128).saturating_pow(place.len().saturating_sub(1) as u32);
        if residue_size > crate::ff::MAX_RESIDUE_FIELD_SIZE as u128 {
            return Err(Error::Unsupported(format!(
                "residue field of order {residue_size} exceeds the supported bound"
            )));
        }
        if place.last() != Some(&fq.one()) || !fq.is_irreducible(&place) {
            return Err(Error::Invalid("place must be a monic irreducible polynomial".into()));
        }
        let residue = if place.len() == 2 { fq.clone() } else { fq.extend(place.clone())? };
        Ok(Self::Laurent { q, fq, place, residue })
    }

    pub fn residue_characteristic(&self) -> u32 {
        match self {
            Self::Padic { p } => *p,
            Self::Laurent { fq, .. } => fq.characteristic(),
        }
    }

    /// Coefficient field `F_q` of a function-field base.
    pub fn constants(&self) -> Option<&FiniteField> {
        match self {
            Self::Padic { .. } => None,
            Self::Laurent { fq, .. } => Some(fq),
        }
    }

    pub fn residue_field(&self) -> FiniteField {
        match self {
            Self::Padic { p } => FiniteField::prime(*p).expect("validated prime"),
            Self::Laurent { residue, .. } => residue.clone(),
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Self::Padic { .. } => Scalar::Rat(BigRational::zero()),
            Self::Laurent { fq, .. } => Scalar::Fun(RatFunc::zero(fq)),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        match self {
            Self::Padic { .. } => Scalar::Rat(BigRational::from_integer(n.into())),
            Self::Laurent { fq, .. } => Scalar::Fun(RatFunc::constant(fq, fq.from_int(n))),
        }
    }

    pub fn from_rational(&self, r: BigRational) -> Result<Scalar> {
        match self {
            Self::Padic { .. } => Ok(Scalar::Rat(r)),
            Self::Laurent { fq, .. } => {
                let p = BigInt::from(fq.characteristic());
                let n = r.numer().mod_floor(&p).to_i64().unwrap();
                let d = r.denom().mod_floor(&p).to_i64().unwrap();
                if d == 0 {
                    return Err(Error::DivisionByZero);
                }
                let num = RatFunc::constant(fq, fq.from_int(n));
                let den = RatFunc::constant(fq, fq.from_int(d));
                Ok(Scalar::Fun(num.mul(fq, &den.inv(fq)?)))
            }
        }
    }

    pub fn uniformizer(&self) -> Scalar {
        match self {
            Self::Padic { p } => self.from_int(*p as i64),
            Self::Laurent { fq, place, .. } => Scalar::Fun(RatFunc::from_poly(fq, place.clone())),
        }
    }

    pub fn is_zero(&self, x: &Scalar) -> bool {
        match x {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fun(f) => f.is_zero(),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (_, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (Self::Laurent { fq, .. }, Scalar::Fun(x), Scalar::Fun(y)) => Scalar::Fun(x.add(fq, y)),
            _ => panic!("scalar kind does not match base field"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (_, Scalar::Rat(x)) => Scalar::Rat(-x),
            (Self::Laurent { fq, .. }, Scalar::Fun(x)) => Scalar::Fun(x.neg(fq)),
            _ => panic!("scalar kind does not match base field"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (_, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (Self::Laurent { fq, .. }, Scalar::Fun(x), Scalar::Fun(y)) => Scalar::Fun(x.mul(fq, y)),
            _ => panic!("scalar kind does not match base field"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        match (self, a) {
            (_, Scalar::Rat(x)) => {
                if x.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Scalar::Rat(x.recip()))
                }
            }
            (Self::Laurent { fq, .. }, Scalar::Fun(x)) => Ok(Scalar::Fun(x.inv(fq)?)),
            _ => panic!("scalar kind does not match base field"),
        }
    }

    pub fn valuation(&self, x: &Scalar) -> Result<i64> {
        if self.is_zero(x) {
            return Err(Error::ZeroValuation);
        }
        Ok(match (self, x) {
            (Self::Padic { p }, Scalar::Rat(r)) => {
                let p = BigInt::from(*p);
                int_valuation(r.numer(), &p).0 - int_valuation(r.denom(), &p).0
            }
            (Self::Laurent { fq, place, .. }, Scalar::Fun(f)) => {
                strip_place(fq, f.num(), place).0 - strip_place(fq, f.den(), place).0
            }
            _ => panic!("scalar kind does not match base field"),
        })
    }

    /// Residue class of `x / uniformizer^valuation(x)`.
    pub fn lead_residue(&self, x: &Scalar) -> Result<Residue> {
        if self.is_zero(x) {
            return Err(Error::ZeroValuation);
        }
        match (self, x) {
            (Self::Padic { p }, Scalar::Rat(r)) => {
                let pb = BigInt::from(*p);
                let n = int_valuation(r.numer(), &pb).1.mod_floor(&pb).to_i64().unwrap();
                let d = int_valuation(r.denom(), &pb).1.mod_floor(&pb).to_i64().unwrap();
                let k = FiniteField::prime(*p)?;
                Ok(k.mul(&k.from_int(n), &k.inv(&k.from_int(d))?))
            }
            (Self::Laurent { fq, place, .. }, Scalar::Fun(f)) => {
                let n = strip_place(fq, f.num(), place).1;
                let d = strip_place(fq, f.den(), place).1;
                let Self::Laurent { residue: k, .. } = self else { unreachable!() };
                let rn = self.reduce_poly(&n);
                let rd = self.reduce_poly(&d);
                Ok(k.mul(&rn, &k.inv(&rd)?))
            }
            _ => panic!("scalar kind does not match base field"),
        }
    }

    fn reduce_poly(&self, f: &FfPoly) -> Residue {
        let Self::Laurent { fq, place, residue, .. } = self else { unreachable!() };
        let r = fq.poly_rem(f, place).expect("nonzero place");
        let d = place.len() - 1;
        let mut coords = r;
        coords.resize(d, fq.zero());
        if d == 1 {
            coords.pop().unwrap()
        } else {
            residue.from_coordinates(&coords)
        }
    }

    /// Canonical lift of a residue class to the dense subring.
    pub fn lift(&self, r: &Residue) -> Scalar {
        match self {
            Self::Padic { .. } => self.from_int(r.0[0] as i64),
            Self::Laurent { fq, place, residue, .. } => {
                if place.len() == 2 {
                    Scalar::Fun(RatFunc::constant(fq, r.clone()))
                } else {
                    Scalar::Fun(RatFunc::from_poly(fq, residue.coordinates(r)))
                }
            }
        }
    }

    /// A short representative `y` with `v(x - y) >= k`.
    pub fn truncate(&self, x: &Scalar, k: i64) -> Scalar {
        if self.is_zero(x) {
            return self.zero();
        }
        let v = self.valuation(x).expect("nonzero");
        if v >= k {
            return self.zero();
        }
        let m = (k - v) as u32;
        match (self, x) {
            (Self::Padic { p }, Scalar::Rat(r)) => {
                let pb = BigInt::from(*p);
                let n = int_valuation(r.numer(), &pb).1;
                let d = int_valuation(r.denom(), &pb).1;
                let modulus = num_traits::pow(pb.clone(), m as usize);
                let d_inv = d.extended_gcd(&modulus).x;
                let c = (n * d_inv).mod_floor(&modulus);
                let shift = num_traits::pow(BigRational::from_integer(pb), v.unsigned_abs() as usize);
                let c = BigRational::from_integer(c);
                Scalar::Rat(if v >= 0 { c * shift } else { c / shift })
            }
            (Self::Laurent { fq, place, .. }, Scalar::Fun(f)) => {
                let n = strip_place(fq, f.num(), place).1;
                let d = strip_place(fq, f.den(), place).1;
                let mut modulus = vec![fq.one()];
                for _ in 0..m {
                    modulus = fq.poly_mul(&modulus, place);
                }
                let d_inv = poly_inv_mod(fq, &d, &modulus);
                let c = fq.poly_rem(&fq.poly_mul(&n, &d_inv), &modulus).expect("nonzero modulus");
                let mut shift = vec![fq.one()];
                for _ in 0..v.unsigned_abs() {
                    shift = fq.poly_mul(&shift, place);
                }
                Scalar::Fun(if v >= 0 {
                    RatFunc::from_poly(fq, fq.poly_mul(&c, &shift))
                } else {
                    RatFunc::new(fq, c, shift).expect("nonzero denominator")
                })
            }
            _ => panic!("scalar kind does not match base field"),
        }
    }

    /// Square root inside the dense subring, if one exists there.
    pub fn exact_sqrt(&self, x: &Scalar) -> Option<Scalar> {
        match (self, x) {
            (_, Scalar::Rat(r)) => {
                if r.is_negative() {
                    return None;
                }
                let n = r.numer().sqrt();
                let d = r.denom().sqrt();
                (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Scalar::Rat(BigRational::new(n, d)))
            }
            (Self::Laurent { fq, .. }, Scalar::Fun(f)) => f.sqrt(fq).map(Scalar::Fun),
            _ => None,
        }
    }
}

/// Inverse of `f` modulo `m`, for `f` coprime to `m`.
fn poly_inv_mod(fq: &FiniteField, f: &FfPoly, m: &FfPoly) -> FfPoly {
    // extended Euclid tracking only the coefficient of f
    let (mut r0, mut r1) = (m.clone(), fq.poly_rem(f, m).expect("nonzero modulus"));
    let (mut s0, mut s1): (FfPoly, FfPoly) = (Vec::new(), vec![fq.one()]);
    while !r1.is_empty() {
        let (q, r) = fq.poly_divrem(&r0, &r1).expect("nonzero divisor");
        let s = fq.poly_sub(&s0, &fq.poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 is a nonzero constant
    let c = fq.inv(&r0[0]).expect("coprime");
    fq.poly_rem(&fq.poly_scale(&s0, &c), m).expect("nonzero modulus")
}

fn int_valuation(n: &BigInt, p: &BigInt) -> (i64, BigInt) {
    let mut k = 0;
    let mut m = n.clone();
    while !m.is_zero() && (&m % p).is_zero() {
        m /= p;
        k += 1;
    }
    (k, m)
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Padic { p } => write!(f, "Q_{p}"),
            Self::Laurent { q, place, fq, .. } => {
                if place.len() == 2 && fq.is_zero(&place[0]) {
                    write!(f, "F_{q}((t))")
                } else {
                    let idx: Vec<u64> = place.iter().map(|c| fq.index_of(c)).collect();
                    write!(f, "F_{q}(t) completed at {idx:?}")
                }
            }
        }
    }
}

impl Scalar {
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Self::Rat(r) => Some(r),
            Self::Fun(_) => None,
        }
    }
}
