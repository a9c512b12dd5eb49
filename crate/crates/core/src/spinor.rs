//! Spinor-norm groups of lattices and of transporter sets.

use crate::error::{Error, Result};
use crate::localfield::{Elem, Field, SquareClass, SquareClassSubgroup};
use crate::matrix::{unit_vector, Mat};
use crate::quadlattice::QuadLattice;
use crate::quadspace::QuadSpace;

/// `(theta(O), theta(O^+))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpinorNorms {
    pub theta_o: SquareClassSubgroup,
    pub theta_o_plus: SquareClassSubgroup,
}

impl SpinorNorms {
    fn full() -> Self {
        Self { theta_o: SquareClassSubgroup::full(), theta_o_plus: SquareClassSubgroup::full() }
    }

    fn join(self, o: Self) -> Self {
        Self { theta_o: self.theta_o.join(o.theta_o), theta_o_plus: self.theta_o_plus.join(o.theta_o_plus) }
    }
}

/// Name of a reduction applied while computing transporter norms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reduction {
    /// Split off a common norm generator of equal scale.
    Split,
    /// Replace the leading Jordan component `M_1` by `pi M_1`.
    Rescale,
    /// Leading component is isotropic: everything is a spinor norm.
    Full,
    /// Jump directly to the reduced lattice `M‡`.
    Jump,
}

impl Reduction {
    pub fn name(self) -> &'static str {
        match self {
            Self::Split => "lemma3.4-split",
            Self::Rescale => "lemma3.5-rescale",
            Self::Full => "lemma3.5-full",
            Self::Jump => "prop3.7-jump",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub reduction: Reduction,
    /// Rank and scale exponent of `M` when the step was applied.
    pub rank: usize,
    pub scale: i64,
}

/// `theta(X(M/N))` and `theta(X^+(M/N))` with the reductions that produced them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransporterNorms {
    pub theta_x: SquareClassSubgroup,
    pub theta_x_plus: SquareClassSubgroup,
    pub trace: Vec<TraceStep>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormPrincipleReport {
    pub holds_x: bool,
    pub holds_x_plus: bool,
    pub holds_o: bool,
    pub holds_o_plus: bool,
}

impl NormPrincipleReport {
    pub fn all(&self) -> bool {
        self.holds_x && self.holds_x_plus && self.holds_o && self.holds_o_plus
    }
}

/// Spinor norms of the full orthogonal group of a space.
pub fn theta_space(v: &QuadSpace) -> Result<SpinorNorms> {
    if v.dim() == 0 {
        return Ok(SpinorNorms {
            theta_o: SquareClassSubgroup::trivial(),
            theta_o_plus: SquareClassSubgroup::trivial(),
        });
    }
    if v.is_isotropic()? {
        return Ok(SpinorNorms::full());
    }
    let f = v.field();
    let mut represented = Vec::new();
    for c in SquareClass::ALL {
        if v.represents_value(&f.class_rep(c))? {
            represented.push(c);
        }
    }
    let theta_o = SquareClassSubgroup::generated_by(represented.iter().copied());
    let pairs = represented.iter().flat_map(|&a| represented.iter().map(move |&b| a * b));
    Ok(SpinorNorms { theta_o, theta_o_plus: SquareClassSubgroup::generated_by(pairs) })
}

/// Spinor norms of a modular lattice of scale `pi^r`.
fn modular_spinor_norms(block: &QuadLattice, r: i64) -> Result<SpinorNorms> {
    let space = block.space();
    if space.is_isotropic()? {
        let units = SquareClassSubgroup::generated_by([SquareClass::U]);
        let theta_o = if r.rem_euclid(2) == 0 { units } else { SquareClassSubgroup::full() };
        Ok(SpinorNorms { theta_o, theta_o_plus: units })
    } else {
        theta_space(&space)
    }
}

/// `theta(O(M))` and `theta(O^+(M))` from a Jordan splitting and norm generators.
pub fn kneser_spinor_norms(m: &QuadLattice) -> Result<SpinorNorms> {
    let j = m.jordan_split()?;
    let mut theta_o = SquareClassSubgroup::trivial();
    let mut plus = SquareClassSubgroup::trivial();
    let mut gens = Vec::with_capacity(j.components.len());
    for c in &j.components {
        let s = modular_spinor_norms(&c.block, c.scale)?;
        theta_o = theta_o.join(s.theta_o);
        plus = plus.join(s.theta_o_plus);
        gens.push(c.norm_gen_class);
    }
    let t = gens.len();
    let mut mask = 0u8;
    for subset in 0u32..(1 << t) {
        if subset.count_ones() % 2 == 1 {
            continue;
        }
        let prod = (0..t).filter(|i| subset >> i & 1 == 1).fold(SquareClass::ONE, |acc, i| acc * gens[i]);
        mask |= plus.coset(prod);
    }
    let theta_o_plus = SquareClassSubgroup::from_mask(mask).expect("even products form a subgroup");
    Ok(SpinorNorms { theta_o, theta_o_plus })
}

/// A lattice given by basis columns in the coordinates of a fixed ambient space.
struct Embedded<'a> {
    space: &'a Mat,
    field: &'a Field,
    basis: Mat,
}

impl Embedded<'_> {
    fn lattice(&self) -> Result<QuadLattice> {
        QuadLattice::new(self.field.clone(), self.space.congruence(self.field, &self.basis))
    }

    fn rank(&self) -> usize {
        self.basis.cols()
    }

    /// Basis of `{m : <m, x> = 0}` for a vector `x` of the ambient space.
    fn kernel(&self, x: &[Elem]) -> Mat {
        let f = self.field;
        let w = self.basis.transpose().mul_vec(f, &self.space.mul_vec(f, x));
        let r = self.rank();
        let j0 = (0..r).min_by_key(|&j| f.valuation_or_max(&w[j])).expect("positive rank");
        let cols: Vec<Vec<Elem>> = (0..r)
            .filter(|&j| j != j0)
            .map(|j| {
                let mut c = unit_vector(f, r, j);
                if !f.is_zero(&w[j]) {
                    c[j0] = f.neg(&f.div(&w[j], &w[j0]).expect("nonzero pivot"));
                }
                c
            })
            .collect();
        self.basis.mul(f, &Mat::from_cols(f, r, &cols))
    }
}

fn check_injection(m: &QuadLattice, n: &QuadLattice, t: &Mat) -> Result<()> {
    if m.field() != n.field() {
        return Err(Error::RingMismatch);
    }
    let f = m.field();
    if t.rows() != m.rank() || t.cols() != n.rank() {
        return Err(Error::NotSublattice("injection has the wrong shape".into()));
    }
    if !t.is_integral(f) {
        return Err(Error::NotSublattice("injection entries are not integral".into()));
    }
    if m.gram().congruence(f, t) != *n.gram() {
        return Err(Error::NotSublattice("injection does not preserve the Gram matrix".into()));
    }
    Ok(())
}

/// Transporter norms computed by the reduction loop.
pub fn transporter_norms(m: &QuadLattice, n: &QuadLattice, injection: &Mat) -> Result<TransporterNorms> {
    transporter_norms_with(m, n, injection, false)
}

/// Transporter norms; with `fast_path` each unequal-scale stage jumps straight to `M‡`.
pub fn transporter_norms_with(
    m: &QuadLattice,
    n: &QuadLattice,
    injection: &Mat,
    fast_path: bool,
) -> Result<TransporterNorms> {
    check_injection(m, n, injection)?;
    let f = m.field();
    let gram = m.gram();
    let mut mm = Embedded { space: gram, field: f, basis: Mat::identity(f, m.rank()) };
    let mut nn = Embedded { space: gram, field: f, basis: injection.clone() };
    let mut acc = SpinorNorms { theta_o: SquareClassSubgroup::trivial(), theta_o_plus: SquareClassSubgroup::trivial() };
    let mut trace = Vec::new();
    let done = |acc: SpinorNorms, base: SpinorNorms, trace| {
        let r = acc.join(base);
        debug_assert!(r.theta_o.is_subgroup() && r.theta_o_plus.is_subgroup());
        Ok(TransporterNorms { theta_x: r.theta_o, theta_x_plus: r.theta_o_plus, trace })
    };
    loop {
        let ml = mm.lattice()?;
        if nn.rank() == 0 {
            return done(acc, theta_space(&ml.space())?, trace);
        }
        let nl = nn.lattice()?;
        let sm = ml.scale()?;
        let sn = nl.scale()?;
        if sn == sm {
            trace.push(TraceStep { reduction: Reduction::Split, rank: ml.rank(), scale: sm });
            acc = acc.join(kneser_spinor_norms(&ml)?);
            let jn = nl.jordan_split()?;
            let x = nn.basis.mul_vec(f, &jn.transition.col(0));
            let m_basis = mm.kernel(&x);
            let n_basis = nn.kernel(&x);
            mm.basis = m_basis;
            nn.basis = n_basis;
            continue;
        }
        if sn < sm {
            return Err(Error::NotSublattice("sublattice has larger scale than the lattice".into()));
        }
        let jm = ml.jordan_split()?;
        if fast_path {
            let shifts: Vec<i64> = jm
                .components
                .iter()
                .map(|c| match c.scale {
                    s if s > sn => 0,
                    s if (sn - s).rem_euclid(2) == 1 => (sn - s - 1) / 2,
                    s => (sn - s) / 2,
                })
                .collect();
            if shifts.iter().any(|&k| k > 0) {
                let mut space = QuadSpace::zero(f.clone());
                for c in jm.components.iter().filter(|c| c.scale < sn) {
                    space = space.orthogonal_sum(&c.block.space())?;
                }
                if space.is_isotropic()? {
                    trace.push(TraceStep { reduction: Reduction::Full, rank: ml.rank(), scale: sm });
                    return done(acc, SpinorNorms::full(), trace);
                }
                trace.push(TraceStep { reduction: Reduction::Jump, rank: ml.rank(), scale: sm });
                let mut cols = Vec::with_capacity(ml.rank());
                for (c, &k) in jm.components.iter().zip(&shifts) {
                    let factor = f.pi_pow(k);
                    for i in 0..c.basis.cols() {
                        let v = mm.basis.mul_vec(f, &c.basis.col(i));
                        cols.push(v.iter().map(|e| f.mul(e, &factor)).collect::<Vec<_>>());
                    }
                }
                mm.basis = Mat::from_cols(f, gram.rows(), &cols);
                continue;
            }
        }
        let top = &jm.components[0];
        if top.block.space().is_isotropic()? {
            trace.push(TraceStep { reduction: Reduction::Full, rank: ml.rank(), scale: sm });
            return done(acc, SpinorNorms::full(), trace);
        }
        trace.push(TraceStep { reduction: Reduction::Rescale, rank: ml.rank(), scale: sm });
        let pi = f.uniformizer();
        let mut cols = Vec::with_capacity(ml.rank());
        for (ci, c) in jm.components.iter().enumerate() {
            for k in 0..c.basis.cols() {
                let v = mm.basis.mul_vec(f, &c.basis.col(k));
                cols.push(if ci == 0 { v.iter().map(|e| f.mul(e, &pi)).collect() } else { v });
            }
        }
        mm.basis = Mat::from_cols(f, gram.rows(), &cols);
    }
}

/// Whether the slow reduction loop and the `M‡` jump agree; `None` when the
/// jump never applies to this pair.
pub fn fast_path_agrees(m: &QuadLattice, n: &QuadLattice, injection: &Mat) -> Result<Option<bool>> {
    let slow = transporter_norms_with(m, n, injection, false)?;
    let fast = transporter_norms_with(m, n, injection, true)?;
    if !fast.trace.iter().any(|s| s.reduction == Reduction::Jump || s.reduction == Reduction::Full)
        || !slow.trace.iter().any(|s| s.reduction != Reduction::Split)
    {
        return Ok(None);
    }
    Ok(Some(slow.theta_x == fast.theta_x && slow.theta_x_plus == fast.theta_x_plus))
}

/// Image of a subgroup over `ext` under the norm to the base field.
pub fn norm_image(ext: &Field, g: SquareClassSubgroup) -> Result<SquareClassSubgroup> {
    let images = g.classes().map(|c| ext.norm_class(&ext.class_rep(c))).collect::<Result<Vec<_>>>()?;
    Ok(SquareClassSubgroup::generated_by(images))
}

/// Check `N_{E/F}(theta(X(M~/N~))) ⊆ theta(X(M/N))` and the analogous
/// containments for `X^+`, `O` and `O^+`.
pub fn norm_principle_verify(
    m: &QuadLattice,
    n: &QuadLattice,
    injection: &Mat,
    ext: &Field,
) -> Result<NormPrincipleReport> {
    let base_x = transporter_norms(m, n, injection)?;
    let base_o = kneser_spinor_norms(m)?;
    let me = m.base_change(ext)?;
    let ne = n.base_change(ext)?;
    let te = injection.base_change(ext);
    let ext_x = transporter_norms(&me, &ne, &te)?;
    let ext_o = kneser_spinor_norms(&me)?;
    Ok(NormPrincipleReport {
        holds_x: norm_image(ext, ext_x.theta_x)?.is_subset(base_x.theta_x),
        holds_x_plus: norm_image(ext, ext_x.theta_x_plus)?.is_subset(base_x.theta_x_plus),
        holds_o: norm_image(ext, ext_o.theta_o)?.is_subset(base_o.theta_o),
        holds_o_plus: norm_image(ext, ext_o.theta_o_plus)?.is_subset(base_o.theta_o_plus),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::{BaseField, Step};

    fn q3() -> Field {
        Field::padic(3).unwrap()
    }

    fn lat(f: &Field, rows: &[&[i64]]) -> QuadLattice {
        QuadLattice::from_ints(f.clone(), rows).unwrap()
    }

    fn diag(f: &Field, d: &[i64]) -> QuadLattice {
        QuadLattice::diagonal(f.clone(), &d.iter().map(|&x| f.from_int(x)).collect::<Vec<_>>()).unwrap()
    }

    fn classes(g: SquareClassSubgroup) -> Vec<&'static str> {
        g.symbols()
    }

    #[test]
    fn space_norms() {
        let f = q3();
        let s = theta_space(&diag(&f, &[1, -1]).space()).unwrap();
        assert!(s.theta_o.is_full() && s.theta_o_plus.is_full());
        let s = theta_space(&diag(&f, &[1, 1]).space()).unwrap();
        assert_eq!(classes(s.theta_o), ["1", "u"]);
        assert_eq!(classes(s.theta_o_plus), ["1", "u"]);
        let s = theta_space(&QuadSpace::zero(f.clone())).unwrap();
        assert_eq!(s.theta_o.len(), 1);
    }

    #[test]
    fn kneser_examples() {
        let f = q3();
        let s = kneser_spinor_norms(&lat(&f, &[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!((classes(s.theta_o), classes(s.theta_o_plus)), (vec!["1", "u"], vec!["1", "u"]));
        let s = kneser_spinor_norms(&lat(&f, &[&[0, 3], &[3, 0]])).unwrap();
        assert!(s.theta_o.is_full());
        assert_eq!(classes(s.theta_o_plus), ["1", "u"]);
        let s = kneser_spinor_norms(&diag(&f, &[1, 3])).unwrap();
        assert_eq!((classes(s.theta_o), classes(s.theta_o_plus)), (vec!["1", "pi"], vec!["1", "pi"]));
    }

    #[test]
    fn transporter_examples() {
        let f = q3();
        let m = diag(&f, &[1, 3]);
        let t = transporter_norms(&m, &m, &Mat::identity(&f, 2)).unwrap();
        let k = kneser_spinor_norms(&m).unwrap();
        assert_eq!((t.theta_x, t.theta_x_plus), (k.theta_o, k.theta_o_plus));

        let h = lat(&f, &[&[0, 1], &[1, 0]]);
        let nine = Mat::identity(&f, 2).scale(&f, &f.from_int(9));
        let t = transporter_norms(&h, &h.rescale(2), &nine).unwrap();
        assert!(t.theta_x.is_full() && t.theta_x_plus.is_full());
        assert_eq!(t.trace.last().unwrap().reduction, Reduction::Full);

        let m = diag(&f, &[1, -3]);
        let three = Mat::identity(&f, 2).scale(&f, &f.from_int(3));
        let t = transporter_norms(&m, &m.rescale(1), &three).unwrap();
        // pi M_1 has Gram 9: the recursion reaches <9, -27> = 3M, an anisotropic plane
        // whose values only have classes 1 and u*pi
        assert_eq!((classes(t.theta_x), classes(t.theta_x_plus)), (vec!["1", "u*pi"], vec!["1", "u*pi"]));
        let names: Vec<_> = t.trace.iter().map(|s| s.reduction.name()).collect();
        assert_eq!(names, ["lemma3.5-rescale", "lemma3.5-rescale", "lemma3.4-split", "lemma3.4-split"]);
    }

    #[test]
    fn bad_injection_rejected() {
        let f = q3();
        let m = diag(&f, &[1, 1]);
        let half = Mat::identity(&f, 2).scale(&f, &f.inv(&f.from_int(3)).unwrap());
        let n = m.sublattice(&half).unwrap();
        assert!(matches!(transporter_norms(&m, &n, &half), Err(Error::NotSublattice(_))));
        let n = diag(&f, &[1, 2]);
        assert!(matches!(transporter_norms(&m, &n, &Mat::identity(&f, 2)), Err(Error::NotSublattice(_))));
    }

    #[test]
    fn norm_principle_examples() {
        let b = BaseField::padic(3).unwrap();
        let f = q3();
        let m = diag(&f, &[1, -1]);
        let id = Mat::identity(&f, 2);
        let trivial = Field::tower(b.clone(), &[Step::Unramified { degree: 1 }]).unwrap();
        assert!(norm_principle_verify(&m, &m, &id, &trivial).unwrap().all());
        let eis = Step::Eisenstein { coeffs: vec![f.from_int(-3), f.zero(), f.zero(), f.one()] };
        let e = Field::tower(b.clone(), &[eis]).unwrap();
        assert!(norm_principle_verify(&m, &m, &id, &e).unwrap().all());
        let m = diag(&f, &[1, 3]);
        let three = id.scale(&f, &f.from_int(3));
        let u3 = Field::tower(b, &[Step::Unramified { degree: 3 }]).unwrap();
        assert!(norm_principle_verify(&m, &m.rescale(1), &three, &u3).unwrap().all());
    }
}
