//! Lattices over `F_q[t]` and their completions at finite places.

use std::fmt;

use crate::embedding::omeara_embeds;
use crate::error::{Error, Result};
use crate::ff::{FfPoly, FiniteField};
use crate::localfield::{BaseField, Field, RatFunc, Scalar};
use crate::matrix::Mat;
use crate::quadlattice::QuadLattice;

/// Finite place of `F_q(t)`: a monic irreducible polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Place {
    q: u64,
    /// Coefficient indices, constant term first.
    coeffs: Vec<u64>,
}

impl Place {
    pub fn new(fq: &FiniteField, poly: FfPoly) -> Result<Self> {
        let poly = fq.poly_trim(poly);
        if poly.len() < 2 || poly.last() != Some(&fq.one()) || !fq.is_irreducible(&poly) {
            return Err(Error::Invalid("place must be a monic irreducible polynomial".into()));
        }
        Ok(Self { q: fq.size(), coeffs: poly.iter().map(|c| fq.index_of(c)).collect() })
    }

    /// The place `t`.
    pub fn t(fq: &FiniteField) -> Self {
        Self { q: fq.size(), coeffs: vec![0, 1] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn poly(&self, fq: &FiniteField) -> FfPoly {
        self.coeffs.iter().map(|&i| fq.element(i)).collect()
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && k > 0 { String::new() } else { c.to_string() };
            terms.push(match k {
                0 => coef,
                1 => format!("{coef}t"),
                _ => format!("{coef}t^{k}"),
            });
        }
        write!(f, "{}", terms.join("+"))
    }
}

/// Free `F_q[t]`-lattice on the standard basis with a symmetric Gram matrix
/// over `F_q(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalLattice {
    fq: FiniteField,
    gram: Vec<Vec<RatFunc>>,
}

impl GlobalLattice {
    pub fn new(q: u64, gram: Vec<Vec<RatFunc>>) -> Result<Self> {
        let fq = FiniteField::of_order(q)?;
        if fq.characteristic() == 2 {
            return Err(Error::Unsupported("residue characteristic 2".into()));
        }
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("Gram matrix is not square".into()));
        }
        if (0..n).any(|i| (0..i).any(|j| gram[i][j] != gram[j][i])) {
            return Err(Error::Invalid("Gram matrix is not symmetric".into()));
        }
        let lattice = Self { fq, gram };
        if n > 0 && lattice.det().is_zero() {
            return Err(Error::DegenerateLattice);
        }
        Ok(lattice)
    }

    pub fn diagonal(q: u64, entries: Vec<RatFunc>) -> Result<Self> {
        let fq = FiniteField::of_order(q)?;
        let n = entries.len();
        let gram = entries
            .into_iter()
            .enumerate()
            .map(|(i, e)| (0..n).map(|j| if i == j { e.clone() } else { RatFunc::zero(&fq) }).collect())
            .collect();
        Self::new(q, gram)
    }

    pub fn constants(&self) -> &FiniteField {
        &self.fq
    }

    pub fn q(&self) -> u64 {
        self.fq.size()
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<RatFunc>] {
        &self.gram
    }

    pub fn det(&self) -> RatFunc {
        let fq = &self.fq;
        let n = self.rank();
        let mut m = self.gram.clone();
        let mut det = RatFunc::constant(fq, fq.one());
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
                return RatFunc::zero(fq);
            };
            if p != c {
                m.swap(p, c);
                det = det.neg(fq);
            }
            det = det.mul(fq, &m[c][c]);
            let inv = m[c][c].inv(fq).expect("nonzero pivot");
            for r in (c + 1)..n {
                if m[r][c].is_zero() {
                    continue;
                }
                let factor = m[r][c].mul(fq, &inv);
                for k in c..n {
                    let t = factor.mul(fq, &m[c][k]);
                    m[r][k] = m[r][k].sub(fq, &t);
                }
            }
        }
        det
    }

    /// Places dividing a numerator or denominator of a Gram entry or of the
    /// determinant. Every other place sees a unimodular lattice.
    pub fn bad_places(&self) -> Result<Vec<Place>> {
        let fq = &self.fq;
        let det = self.det();
        let mut out = Vec::new();
        for r in self.gram.iter().flatten().chain(std::iter::once(&det)) {
            if r.is_zero() {
                continue;
            }
            for poly in [r.num(), r.den()] {
                for p in monic_prime_factors(fq, poly)? {
                    let place = Place::new(fq, p)?;
                    if !out.contains(&place) {
                        out.push(place);
                    }
                }
            }
        }
        out.sort();
        Ok(out)
    }
}

/// Monic irreducible factors of `f`, without multiplicity, by trial division.
fn monic_prime_factors(fq: &FiniteField, f: &FfPoly) -> Result<Vec<FfPoly>> {
    let mut rest = fq.poly_monic(&fq.poly_trim(f.clone()));
    let mut out = Vec::new();
    let mut d = 1;
    while rest.len() > 1 && 2 * d < rest.len() {
        let count = (fq.size() as u128).pow(d as u32);
        if count > crate::ff::MAX_RESIDUE_FIELD_SIZE as u128 {
            return Err(Error::Unsupported(format!("factoring a polynomial of degree {}", rest.len() - 1)));
        }
        for i in 0..count as u64 {
            let g = fq.monic_poly(d, i);
            let mut divided = false;
            loop {
                let (quot, rem) = fq.poly_divrem(&rest, &g)?;
                if !rem.is_empty() {
                    break;
                }
                rest = quot;
                divided = true;
            }
            if divided {
                out.push(g);
            }
        }
        d += 1;
    }
    if rest.len() > 1 {
        out.push(rest);
    }
    Ok(out)
}

/// Completion of `m` at `place`: a lattice over the Laurent field with
/// uniformizer `place`.
pub fn local_at(m: &GlobalLattice, place: &Place) -> Result<QuadLattice> {
    if place.q != m.q() {
        return Err(Error::RingMismatch);
    }
    let base = BaseField::laurent_at(m.q(), place.poly(&m.fq))?;
    let field = Field::new(base);
    let rows =
        m.gram.iter().map(|row| row.iter().map(|r| field.from_scalar(Scalar::Fun(r.clone()))).collect()).collect();
    QuadLattice::new(field.clone(), Mat::from_rows(rows)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceVerdict {
    pub place: Place,
    pub embeds: bool,
}

/// Place-wise embedding verdicts. Purely local: nothing is claimed about a
/// global embedding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalReport {
    pub places: Vec<PlaceVerdict>,
    /// `Some(true)` when the rank gap settles all unlisted places; `None`
    /// when they were not examined.
    pub good_places: Option<bool>,
}

impl GlobalReport {
    /// True iff every recorded verdict is true.
    pub fn holds(&self) -> bool {
        self.places.iter().all(|p| p.embeds) && self.good_places != Some(false)
    }

    pub fn verdict_at(&self, place: &Place) -> Option<bool> {
        self.places.iter().find(|p| &p.place == place).map(|p| p.embeds)
    }
}

/// Local embedding of `n` into `m` at every finite place. Requires rank gap
/// at least 3.
pub fn everywhere_local_embeds(n: &GlobalLattice, m: &GlobalLattice) -> Result<GlobalReport> {
    let gap = m.rank().saturating_sub(n.rank());
    if gap < 3 {
        return Err(Error::GapTooSmall(gap));
    }
    everywhere_local_embeds_at(n, m, &[])
}

/// As [`everywhere_local_embeds`], additionally checking `extra` places. With
/// rank gap below 3, only the bad places and `extra` are examined.
pub fn everywhere_local_embeds_at(n: &GlobalLattice, m: &GlobalLattice, extra: &[Place]) -> Result<GlobalReport> {
    if n.q() != m.q() {
        return Err(Error::RingMismatch);
    }
    let mut places = n.bad_places()?;
    for p in m.bad_places()?.into_iter().chain(extra.iter().cloned()) {
        if !places.contains(&p) {
            places.push(p);
        }
    }
    places.sort();
    let verdicts: Vec<Result<bool>> = std::thread::scope(|s| {
        let handles: Vec<_> =
            places.iter().map(|p| s.spawn(move || omeara_embeds(&local_at(n, p)?, &local_at(m, p)?))).collect();
        handles.into_iter().map(|h| h.join().expect("place check panicked")).collect()
    });
    let places = places
        .into_iter()
        .zip(verdicts)
        .map(|(place, v)| Ok(PlaceVerdict { place, embeds: v? }))
        .collect::<Result<Vec<_>>>()?;
    let good_places = (m.rank() >= n.rank() + 3).then_some(true);
    Ok(GlobalReport { places, good_places })
}
