use crate::error::{Error, Result};
use crate::localfield::{Elem, Field, SquareClass};
use crate::matrix::{unit_vector, vec_add, vec_scale, vec_sub, Mat};
use crate::quadspace::QuadSpace;

/// Relative precision used when a square root has no exact representative.
pub const SQRT_PRECISION: i64 = 40;

/// Free lattice `R^n` inside the quadratic space given by `gram`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadLattice {
    field: Field,
    gram: Mat,
}

/// A modular Jordan component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanComponent {
    /// The component has scale `pi^scale`.
    pub scale: i64,
    /// Diagonal Gram matrix of the component in its split basis.
    pub block: QuadLattice,
    /// Square class of `Q` of the first basis vector, a norm generator.
    pub norm_gen_class: SquareClass,
    /// Basis of the component, as columns in the original coordinates.
    pub basis: Mat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanSplitting {
    pub field: Field,
    pub components: Vec<JordanComponent>,
    /// Columns are the split basis in original coordinates; unimodular over `R`.
    pub transition: Mat,
}

/// Isotropic pair spanning a hyperbolic plane that splits a modular lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperbolicPair {
    pub x: Vec<Elem>,
    pub y: Vec<Elem>,
    /// `None` when `Q(x) = Q(y) = 0` exactly; otherwise a lower bound for
    /// `v(Q(x))` and `v(Q(y))`.
    pub residual: Option<i64>,
}

impl JordanSplitting {
    pub fn scales(&self) -> Vec<i64> {
        self.components.iter().map(|c| c.scale).collect()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.block.rank()).collect()
    }

    /// Diagonal entries of the split form, in order.
    pub fn diagonal(&self) -> Vec<Elem> {
        self.components.iter().flat_map(|c| (0..c.block.rank()).map(move |i| c.block.gram()[(i, i)].clone())).collect()
    }
}

impl QuadLattice {
    pub fn new(field: Field, gram: Mat) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::Invalid("Gram matrix is not symmetric".into()));
        }
        if gram.rows() > 0 && field.is_zero(&gram.det(&field)) {
            return Err(Error::DegenerateLattice);
        }
        Ok(Self { field, gram })
    }

    pub fn diagonal(field: Field, entries: &[Elem]) -> Result<Self> {
        let gram = Mat::diagonal(&field, entries);
        Self::new(field, gram)
    }

    pub fn from_ints(field: Field, rows: &[&[i64]]) -> Result<Self> {
        let rows = rows.iter().map(|r| r.iter().map(|&x| field.from_int(x)).collect()).collect();
        Self::new(field, Mat::from_rows(rows)?)
    }

    pub fn zero(field: Field) -> Self {
        let gram = Mat::zeros(&field, 0, 0);
        Self { field, gram }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn q(&self, x: &[Elem]) -> Elem {
        self.gram.quadratic(&self.field, x)
    }

    pub fn b(&self, x: &[Elem], y: &[Elem]) -> Elem {
        self.gram.bilinear(&self.field, x, y)
    }

    pub fn det(&self) -> Elem {
        self.gram.det(&self.field)
    }

    pub fn space(&self) -> QuadSpace {
        QuadSpace::new(self.field.clone(), self.gram.clone()).expect("lattice is non-degenerate")
    }

    /// Exponent `s` with `scale = pi^s`.
    pub fn scale(&self) -> Result<i64> {
        self.gram.min_valuation(&self.field).ok_or(Error::DegenerateLattice)
    }

    /// Exponent of the norm ideal, generated by the values `Q(x)`.
    pub fn norm(&self) -> Result<i64> {
        // 2 is a unit, so norm and scale agree
        self.scale()
    }

    pub fn dual(&self) -> Result<QuadLattice> {
        let inv = self.gram.inverse(&self.field).map_err(|_| Error::DegenerateLattice)?;
        Ok(Self { field: self.field.clone(), gram: inv })
    }

    /// The lattice `pi^k L`.
    pub fn rescale(&self, k: i64) -> QuadLattice {
        let c = self.field.pi_pow(2 * k);
        Self { field: self.field.clone(), gram: self.gram.scale(&self.field, &c) }
    }

    /// Lattice spanned by the columns of `basis` (coordinates in this lattice).
    pub fn sublattice(&self, basis: &Mat) -> Result<QuadLattice> {
        QuadLattice::new(self.field.clone(), self.gram.congruence(&self.field, basis))
    }

    pub fn orthogonal_sum(&self, o: &QuadLattice) -> Result<QuadLattice> {
        if self.field != o.field {
            return Err(Error::RingMismatch);
        }
        let gram = Mat::block_diagonal(&self.field, &[self.gram.clone(), o.gram.clone()]);
        Ok(Self { field: self.field.clone(), gram })
    }

    /// `S ⊗ L` for the valuation ring `S` of an extension of this field.
    pub fn base_change(&self, ext: &Field) -> Result<QuadLattice> {
        if ext.base() != self.field {
            return Err(Error::RingMismatch);
        }
        Ok(Self { field: ext.clone(), gram: self.gram.base_change(ext) })
    }

    pub fn is_modular(&self) -> Result<bool> {
        Ok(self.jordan_split()?.components.len() <= 1)
    }

    /// Jordan splitting into rank-one modular pieces grouped by scale.
    pub fn jordan_split(&self) -> Result<JordanSplitting> {
        let f = &self.field;
        let n = self.rank();
        let mut g = self.gram.clone();
        let mut t = Mat::identity(f, n);
        let mut active: Vec<usize> = (0..n).collect();
        let mut order = Vec::with_capacity(n);
        while !active.is_empty() {
            let mut best: Option<(i64, bool, usize, usize)> = None;
            for (ai, &i) in active.iter().enumerate() {
                for &j in &active[ai..] {
                    let Ok(v) = f.valuation(&g[(i, j)]) else { continue };
                    let cand = (v, i != j, i.min(j), i.max(j));
                    if best.is_none_or(|b| cand < b) {
                        best = Some(cand);
                    }
                }
            }
            let (_, off_diagonal, i, j) = best.ok_or(Error::DegenerateLattice)?;
            if off_diagonal {
                // Q(e_i + e_j) = g_ii + 2 g_ij + g_jj has the minimal valuation
                add_multiple(f, &mut g, &mut t, i, j, &f.one());
            }
            let inv = f.inv(&g[(i, i)])?;
            for &k in &active {
                if k != i && !f.is_zero(&g[(k, i)]) {
                    let c = f.neg(&f.mul(&g[(k, i)], &inv));
                    add_multiple(f, &mut g, &mut t, k, i, &c);
                }
            }
            active.retain(|&k| k != i);
            order.push(i);
        }
        let transition = t.select_cols(&order);
        let mut components: Vec<JordanComponent> = Vec::new();
        for &i in &order {
            let d = g[(i, i)].clone();
            let s = f.valuation(&d)?;
            match components.last_mut() {
                Some(c) if c.scale == s => {
                    let mut entries: Vec<Elem> = (0..c.block.rank()).map(|k| c.block.gram[(k, k)].clone()).collect();
                    entries.push(d);
                    c.block = QuadLattice::diagonal(f.clone(), &entries)?;
                }
                _ => components.push(JordanComponent {
                    scale: s,
                    norm_gen_class: f.square_class(&d)?,
                    block: QuadLattice::diagonal(f.clone(), std::slice::from_ref(&d))?,
                    basis: Mat::zeros(f, n, 0),
                }),
            }
        }
        let mut start = 0;
        for c in &mut components {
            let cols: Vec<usize> = (start..start + c.block.rank()).collect();
            c.basis = transition.select_cols(&cols);
            start += cols.len();
        }
        Ok(JordanSplitting { field: f.clone(), components, transition })
    }

    /// Isometry test via Jordan invariants.
    pub fn is_isometric(&self, o: &QuadLattice) -> Result<bool> {
        if self.field != o.field {
            return Err(Error::RingMismatch);
        }
        if self.rank() != o.rank() {
            return Ok(false);
        }
        let a = self.jordan_split()?;
        let b = o.jordan_split()?;
        if a.scales() != b.scales() || a.ranks() != b.ranks() {
            return Ok(false);
        }
        for (x, y) in a.components.iter().zip(&b.components) {
            if !x.block.space().is_isometric(&y.block.space())? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// For a modular lattice, an isotropic pair `x, y` with `<x, y>` of the
    /// lattice's scale, or `None` when the ambient space is anisotropic.
    pub fn hyperbolic_split(&self) -> Result<Option<HyperbolicPair>> {
        let f = &self.field;
        let jordan = self.jordan_split()?;
        if jordan.components.len() > 1 {
            return Err(Error::NotModular);
        }
        if self.rank() < 2 || self.space().is_anisotropic()? {
            return Ok(None);
        }
        let s = self.scale()?;
        let n = self.rank();
        // isotropic pair already on the standard basis
        for i in 0..n {
            for j in (i + 1)..n {
                if f.is_zero(&self.gram[(i, i)])
                    && f.is_zero(&self.gram[(j, j)])
                    && f.valuation_or_max(&self.gram[(i, j)]) == s
                {
                    return Ok(Some(HyperbolicPair {
                        x: unit_vector(f, n, i),
                        y: unit_vector(f, n, j),
                        residual: None,
                    }));
                }
            }
        }
        let d = jordan.diagonal();
        let k = f.residue_field();
        let eps: Vec<_> = d.iter().map(|a| f.lead_residue(a)).collect::<Result<_>>()?;
        // residue isotropic vector supported on the first two or three coordinates
        let mut xbar = vec![k.zero(); n];
        let ratio = k.neg(&k.mul(&eps[0], &k.inv(&eps[1])?));
        if let Some(r) = k.sqrt(&ratio) {
            xbar[0] = k.one();
            xbar[1] = r;
        } else {
            let found = k.elements().find_map(|x| {
                let rhs = k.neg(&k.add(&eps[2], &k.mul(&eps[0], &k.mul(&x, &x))));
                let y2 = k.mul(&rhs, &k.inv(&eps[1]).ok()?);
                k.sqrt(&y2).map(|y| (x, y))
            });
            let (x, y) = found.ok_or_else(|| Error::Invalid("no residue isotropic vector".into()))?;
            xbar[0] = x;
            xbar[1] = y;
            xbar[2] = k.one();
        }
        let pivot = (0..n).rev().find(|&i| !k.is_zero(&xbar[i])).expect("nonzero residue vector");
        let mut coords: Vec<Elem> = xbar.iter().map(|r| f.lift(r)).collect();
        coords[pivot] = f.zero();
        let rest = coords.iter().zip(&d).fold(f.zero(), |acc, (c, a)| f.add(&acc, &f.mul(a, &f.mul(c, c))));
        let target = f.neg(&f.div(&rest, &d[pivot])?);
        let root = f.sqrt(&target, SQRT_PRECISION)?.ok_or_else(|| Error::Invalid("Hensel lift failed".into()))?;
        coords[pivot] = root.root;
        let x = jordan.transition.mul_vec(f, &coords);
        let z = jordan.transition.col(pivot);
        let c = f.div(&self.q(&z), &f.mul(&f.from_int(2), &self.b(&x, &z)))?;
        let y = vec_sub(f, &z, &vec_scale(f, &x, &c));
        let qx = self.q(&x);
        let residual = if f.is_zero(&qx) { None } else { Some(f.valuation(&qx)?) };
        Ok(Some(HyperbolicPair { x, y, residual }))
    }

    /// Reflection `tau_u(x) = x - 2<x,u>/Q(u) u` as a matrix on coordinates.
    pub fn reflection(&self, u: &[Elem]) -> Result<Mat> {
        reflection(&self.field, &self.gram, u)
    }

    /// Spinor norm of an isometry of the ambient space.
    pub fn spinor_norm(&self, sigma: &Mat) -> Result<SquareClass> {
        spinor_norm(&self.space(), sigma)
    }

    /// Whether the matrix maps the lattice into itself.
    pub fn stabilizes(&self, sigma: &Mat) -> bool {
        sigma.is_integral(&self.field)
    }

    /// Basis (as columns) of `{m in L : <m, v> = 0}` for nonzero `v` in the ambient space.
    pub fn orthogonal_kernel(&self, v: &[Elem]) -> Mat {
        let f = &self.field;
        let n = self.rank();
        let w = self.gram.mul_vec(f, v);
        let j0 = (0..n).min_by_key(|&j| f.valuation_or_max(&w[j])).expect("positive rank");
        let cols: Vec<Vec<Elem>> = (0..n)
            .filter(|&j| j != j0)
            .map(|j| {
                let mut c = unit_vector(f, n, j);
                if !f.is_zero(&w[j]) {
                    c[j0] = f.neg(&f.div(&w[j], &w[j0]).expect("nonzero pivot"));
                }
                c
            })
            .collect();
        Mat::from_cols(f, n, &cols)
    }
}

/// Basis change `e_k <- e_k + c e_i` applied to a Gram matrix and basis matrix.
fn add_multiple(f: &Field, g: &mut Mat, t: &mut Mat, k: usize, i: usize, c: &Elem) {
    let n = g.rows();
    for r in 0..n {
        let v = f.add(&g[(k, r)], &f.mul(c, &g[(i, r)]));
        g[(k, r)] = v;
    }
    for r in 0..n {
        let v = f.add(&g[(r, k)], &f.mul(c, &g[(r, i)]));
        g[(r, k)] = v;
    }
    for r in 0..t.rows() {
        let v = f.add(&t[(r, k)], &f.mul(c, &t[(r, i)]));
        t[(r, k)] = v;
    }
}

pub fn reflection(f: &Field, gram: &Mat, u: &[Elem]) -> Result<Mat> {
    let qu = gram.quadratic(f, u);
    if f.is_zero(&qu) {
        return Err(Error::IsotropicVector);
    }
    let n = gram.rows();
    let gu = gram.mul_vec(f, u);
    let c = f.div(&f.from_int(2), &qu)?;
    let mut m = Mat::identity(f, n);
    for i in 0..n {
        if f.is_zero(&u[i]) {
            continue;
        }
        let ci = f.mul(&c, &u[i]);
        for j in 0..n {
            m[(i, j)] = f.sub(&m[(i, j)], &f.mul(&ci, &gu[j]));
        }
    }
    Ok(m)
}

/// Spinor norm via a Cartan–Dieudonné factorization along an orthogonal basis.
pub fn spinor_norm(space: &QuadSpace, sigma: &Mat) -> Result<SquareClass> {
    let f = space.field();
    let g = space.gram();
    if sigma.rows() != g.rows() || !sigma.is_square() || g.congruence(f, sigma) != *g {
        return Err(Error::NotIsometry);
    }
    let (_, basis) = space.diagonalize()?;
    let mut rho = sigma.clone();
    let mut class = SquareClass::ONE;
    for i in 0..basis.cols() {
        let b = basis.col(i);
        let rb = rho.mul_vec(f, &b);
        if rb == b {
            continue;
        }
        let w = vec_sub(f, &rb, &b);
        let qw = g.quadratic(f, &w);
        if !f.is_zero(&qw) {
            rho = reflection(f, g, &w)?.mul(f, &rho);
            class = class * f.square_class(&qw)?;
        } else {
            // tau_{rb + b} sends rb to -b, then tau_b restores b
            let w = vec_add(f, &rb, &b);
            let qw = g.quadratic(f, &w);
            rho = reflection(f, g, &b)?.mul(f, &reflection(f, g, &w)?.mul(f, &rho));
            class = class * f.square_class(&qw)? * f.square_class(&g.quadratic(f, &b))?;
        }
    }
    debug_assert_eq!(rho, Mat::identity(f, g.rows()));
    Ok(class)
}

/// Integral with at least one unit coordinate.
pub fn is_primitive(f: &Field, x: &[Elem]) -> bool {
    x.iter().any(|c| f.valuation_or_max(c) == 0) && x.iter().all(|c| f.is_integral(c))
}
