use crate::error::{Error, Result};
use crate::localfield::{Elem, Field};

/// Dense matrix over a [`Field`]. Row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Mat {
    pub fn zeros(f: &Field, rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![f.zero(); rows * cols] }
    }

    pub fn identity(f: &Field, n: usize) -> Self {
        let mut m = Self::zeros(f, n, n);
        for i in 0..n {
            m[(i, i)] = f.one();
        }
        m
    }

    pub fn diagonal(f: &Field, entries: &[Elem]) -> Self {
        let mut m = Self::zeros(f, entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Invalid("ragged matrix".into()));
        }
        Ok(Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_cols(f: &Field, rows: usize, cols: &[Vec<Elem>]) -> Self {
        let mut m = Self::zeros(f, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vec<Elem> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &Elem> {
        self.data.iter()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Self { rows: self.cols, cols: self.rows, data }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn mul(&self, f: &Field, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut out = Mat::zeros(f, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if f.is_zero(b) {
                        continue;
                    }
                    out[(i, j)] = f.add(&out[(i, j)], &f.mul(a, b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, f: &Field, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows).map(|i| dot(f, &self.data[i * self.cols..(i + 1) * self.cols], v)).collect()
    }

    pub fn add(&self, f: &Field, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "dimension mismatch");
        let data = self.data.iter().zip(&o.data).map(|(a, b)| f.add(a, b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, f: &Field, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "dimension mismatch");
        let data = self.data.iter().zip(&o.data).map(|(a, b)| f.sub(a, b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, f: &Field, c: &Elem) -> Mat {
        let data = self.data.iter().map(|a| f.mul(a, c)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn map(&self, g: impl Fn(&Elem) -> Elem) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(g).collect() }
    }

    /// `T^t * self * T`.
    pub fn congruence(&self, f: &Field, t: &Mat) -> Mat {
        t.transpose().mul(f, &self.mul(f, t))
    }

    /// Bilinear form `x^t * self * y`.
    pub fn bilinear(&self, f: &Field, x: &[Elem], y: &[Elem]) -> Elem {
        dot(f, x, &self.mul_vec(f, y))
    }

    pub fn quadratic(&self, f: &Field, x: &[Elem]) -> Elem {
        self.bilinear(f, x, x)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Mat {
        let data = rows.iter().flat_map(|&i| cols.iter().map(move |&j| self[(i, j)].clone())).collect();
        Mat { rows: rows.len(), cols: cols.len(), data }
    }

    /// Columns `cols` of `self`.
    pub fn select_cols(&self, cols: &[usize]) -> Mat {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&rows, cols)
    }

    pub fn block_diagonal(f: &Field, blocks: &[Mat]) -> Mat {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut out = Mat::zeros(f, n, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(off + i, off + j)] = b[(i, j)].clone();
                }
            }
            off += b.rows;
        }
        out
    }

    /// Columns of `self` followed by columns of `o`.
    pub fn hconcat(&self, f: &Field, o: &Mat) -> Mat {
        assert_eq!(self.rows, o.rows, "dimension mismatch");
        let mut cols: Vec<Vec<Elem>> = (0..self.cols).map(|j| self.col(j)).collect();
        cols.extend((0..o.cols).map(|j| o.col(j)));
        Mat::from_cols(f, self.rows, &cols)
    }

    pub fn det(&self, f: &Field) -> Elem {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = f.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !f.is_zero(&m[(r, c)])) else {
                return f.zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = f.neg(&det);
            }
            let piv = m[(c, c)].clone();
            det = f.mul(&det, &piv);
            let inv = f.inv(&piv).expect("nonzero pivot");
            for r in (c + 1)..n {
                if f.is_zero(&m[(r, c)]) {
                    continue;
                }
                let factor = f.mul(&m[(r, c)], &inv);
                for k in c..n {
                    let t = f.mul(&factor, &m[(c, k)]);
                    m[(r, k)] = f.sub(&m[(r, k)], &t);
                }
            }
        }
        det
    }

    pub fn inverse(&self, f: &Field) -> Result<Mat> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = Mat::identity(f, n);
        for c in 0..n {
            let p = (c..n).find(|&r| !f.is_zero(&m[(r, c)])).ok_or(Error::DivisionByZero)?;
            m.swap_rows(p, c);
            inv.swap_rows(p, c);
            let piv_inv = f.inv(&m[(c, c)])?;
            for k in 0..n {
                m[(c, k)] = f.mul(&m[(c, k)], &piv_inv);
                inv[(c, k)] = f.mul(&inv[(c, k)], &piv_inv);
            }
            for r in 0..n {
                if r == c || f.is_zero(&m[(r, c)]) {
                    continue;
                }
                let factor = m[(r, c)].clone();
                for k in 0..n {
                    let t = f.mul(&factor, &m[(c, k)]);
                    m[(r, k)] = f.sub(&m[(r, k)], &t);
                    let t = f.mul(&factor, &inv[(c, k)]);
                    inv[(r, k)] = f.sub(&inv[(r, k)], &t);
                }
            }
        }
        Ok(inv)
    }

    /// Solve `self * x = b` for square invertible `self`.
    pub fn solve(&self, f: &Field, b: &[Elem]) -> Result<Vec<Elem>> {
        Ok(self.inverse(f)?.mul_vec(f, b))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(a * self.cols + k, b * self.cols + k);
        }
    }

    /// Minimum valuation of the entries; `None` for the zero matrix.
    pub fn min_valuation(&self, f: &Field) -> Option<i64> {
        self.data.iter().filter_map(|x| f.valuation(x).ok()).min()
    }

    /// True if every entry lies in the valuation ring.
    pub fn is_integral(&self, f: &Field) -> bool {
        self.data.iter().all(|x| f.is_integral(x))
    }

    /// Entrywise embedding from the base of `f`'s tower.
    pub fn base_change(&self, f: &Field) -> Mat {
        self.map(|x| f.from_base(x))
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Elem;
    fn index(&self, (i, j): (usize, usize)) -> &Elem {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Elem {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(f: &Field, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter().zip(b).fold(
        f.zero(),
        |acc, (x, y)| {
            if f.is_zero(x) || f.is_zero(y) {
                acc
            } else {
                f.add(&acc, &f.mul(x, y))
            }
        },
    )
}

pub fn vec_add(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
}

pub fn vec_sub(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    a.iter().zip(b).map(|(x, y)| f.sub(x, y)).collect()
}

pub fn vec_scale(f: &Field, a: &[Elem], c: &Elem) -> Vec<Elem> {
    a.iter().map(|x| f.mul(x, c)).collect()
}

pub fn unit_vector(f: &Field, n: usize, i: usize) -> Vec<Elem> {
    let mut v = vec![f.zero(); n];
    v[i] = f.one();
    v
}
