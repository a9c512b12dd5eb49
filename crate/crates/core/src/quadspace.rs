use crate::error::{Error, Result};
use crate::localfield::{Elem, Field, SquareClass};
use crate::matrix::{vec_add, vec_scale, vec_sub, Mat};

/// Non-degenerate quadratic space `(F^n, Q)` given by a symmetric Gram matrix,
/// with `Q(x) = <x, x>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadSpace {
    field: Field,
    gram: Mat,
}

/// Complete isometry invariants of a quadratic space over a local field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpaceInvariants {
    pub dim: usize,
    pub det_class: SquareClass,
    /// Hasse invariant `prod_{i<j} (a_i, a_j)`.
    pub hasse: i8,
}

impl SpaceInvariants {
    pub fn zero() -> Self {
        Self { dim: 0, det_class: SquareClass::ONE, hasse: 1 }
    }

    /// Invariants of a diagonal form with the given square classes.
    pub fn of_diagonal(f: &Field, classes: &[SquareClass]) -> Self {
        classes.iter().fold(Self::zero(), |acc, &c| acc.orthogonal_sum(f, &Self { dim: 1, det_class: c, hasse: 1 }))
    }

    /// Invariants of `V ⊥ W`.
    pub fn orthogonal_sum(&self, f: &Field, o: &Self) -> Self {
        let cross = if self.dim == 0 || o.dim == 0 { 1 } else { f.hilbert_classes(self.det_class, o.det_class) };
        Self { dim: self.dim + o.dim, det_class: self.det_class * o.det_class, hasse: self.hasse * o.hasse * cross }
    }

    pub fn is_isotropic(&self, f: &Field) -> bool {
        let minus_one = f.square_class(&f.from_int(-1)).expect("nonzero");
        let minus_d = minus_one * self.det_class;
        match self.dim {
            0 | 1 => false,
            2 => minus_d.is_one(),
            3 => self.hasse == f.hilbert_classes(minus_one, minus_d),
            4 => !(self.det_class.is_one() && self.hasse == -f.hilbert_classes(minus_one, minus_one)),
            _ => true,
        }
    }

    /// All invariants realised by spaces of dimension `m`.
    pub fn realizable(f: &Field, m: usize) -> Vec<Self> {
        let mut out: Vec<Self> = Vec::new();
        let free = m.min(3);
        let pad = vec![SquareClass::ONE; m - free];
        for code in 0..(1usize << (2 * free)) {
            let mut classes = pad.clone();
            classes.extend((0..free).map(|i| SquareClass::from_index(code >> (2 * i))));
            let inv = Self::of_diagonal(f, &classes);
            if !out.contains(&inv) {
                out.push(inv);
            }
        }
        out
    }
}

impl QuadSpace {
    pub fn new(field: Field, gram: Mat) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::Invalid("Gram matrix is not symmetric".into()));
        }
        if gram.rows() > 0 && field.is_zero(&gram.det(&field)) {
            return Err(Error::DegenerateSpace);
        }
        Ok(Self { field, gram })
    }

    pub fn diagonal(field: Field, entries: &[Elem]) -> Result<Self> {
        let gram = Mat::diagonal(&field, entries);
        Self::new(field, gram)
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

    pub fn dim(&self) -> usize {
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

    /// Orthogonal basis: returns the diagonal entries `a_i` and the matrix `T`
    /// whose columns are the new basis, so that `T^t G T = diag(a_i)`.
    pub fn diagonalize(&self) -> Result<(Vec<Elem>, Mat)> {
        let f = &self.field;
        let n = self.dim();
        let mut basis: Vec<Vec<Elem>> = (0..n).map(|i| crate::matrix::unit_vector(f, n, i)).collect();
        let mut entries = Vec::with_capacity(n);
        for i in 0..n {
            if f.is_zero(&self.q(&basis[i])) {
                if let Some(j) = (i + 1..n).find(|&j| !f.is_zero(&self.q(&basis[j]))) {
                    basis.swap(i, j);
                } else if let Some(j) = (i + 1..n).find(|&j| !f.is_zero(&self.b(&basis[i], &basis[j]))) {
                    // Q(e_i + e_j) = 2<e_i, e_j> when both are isotropic
                    basis[i] = vec_add(f, &basis[i], &basis[j]);
                } else {
                    return Err(Error::DegenerateSpace);
                }
            }
            let a = self.q(&basis[i]);
            let a_inv = f.inv(&a)?;
            for j in (i + 1)..n {
                let c = f.mul(&self.b(&basis[j], &basis[i]), &a_inv);
                if !f.is_zero(&c) {
                    basis[j] = vec_sub(f, &basis[j], &vec_scale(f, &basis[i], &c));
                }
            }
            entries.push(a);
        }
        Ok((entries, Mat::from_cols(f, n, &basis)))
    }

    pub fn invariants(&self) -> Result<SpaceInvariants> {
        let (entries, _) = self.diagonalize()?;
        let classes = entries.iter().map(|a| self.field.square_class(a)).collect::<Result<Vec<_>>>()?;
        Ok(SpaceInvariants::of_diagonal(&self.field, &classes))
    }

    pub fn is_isotropic(&self) -> Result<bool> {
        Ok(self.invariants()?.is_isotropic(&self.field))
    }

    pub fn is_anisotropic(&self) -> Result<bool> {
        Ok(!self.is_isotropic()?)
    }

    pub fn is_isometric(&self, o: &QuadSpace) -> Result<bool> {
        if self.field != o.field {
            return Err(Error::FieldMismatch);
        }
        Ok(self.invariants()? == o.invariants()?)
    }

    /// Whether `self ≅ w ⊥ U` for some space `U`.
    pub fn represents(&self, w: &QuadSpace) -> Result<bool> {
        if self.field != w.field {
            return Err(Error::FieldMismatch);
        }
        if w.dim() > self.dim() {
            return Err(Error::DimensionOrder);
        }
        represents_invariants(&self.field, &self.invariants()?, &w.invariants()?)
    }

    /// Whether `self` represents the nonzero scalar `a`.
    pub fn represents_value(&self, a: &Elem) -> Result<bool> {
        let f = &self.field;
        let line = SpaceInvariants { dim: 1, det_class: f.square_class(a)?, hasse: 1 };
        if self.dim() == 0 {
            return Ok(false);
        }
        represents_invariants(f, &self.invariants()?, &line)
    }

    pub fn orthogonal_sum(&self, o: &QuadSpace) -> Result<QuadSpace> {
        if self.field != o.field {
            return Err(Error::FieldMismatch);
        }
        let gram = Mat::block_diagonal(&self.field, &[self.gram.clone(), o.gram.clone()]);
        Ok(QuadSpace { field: self.field.clone(), gram })
    }

    /// The same Gram matrix read over an extension whose base is this field.
    pub fn base_change(&self, ext: &Field) -> Result<QuadSpace> {
        if ext.base() != self.field {
            return Err(Error::FieldMismatch);
        }
        Ok(QuadSpace { field: ext.clone(), gram: self.gram.base_change(ext) })
    }
}

/// Whether a space with invariants `v` splits off one with invariants `w`.
pub fn represents_invariants(f: &Field, v: &SpaceInvariants, w: &SpaceInvariants) -> Result<bool> {
    if w.dim > v.dim {
        return Err(Error::DimensionOrder);
    }
    let m = v.dim - w.dim;
    if m == 0 {
        return Ok(v == w);
    }
    Ok(SpaceInvariants::realizable(f, m).iter().any(|u| w.orthogonal_sum(f, u) == *v))
}
