//! Random generators shared by the property tests. Every generator is driven
//! by a seeded ChaCha stream so proptest failures replay from the seed.
#![allow(dead_code)]

use quadlat::localfield::Step;
use quadlat::{Elem, Field, Mat, QuadLattice, SquareClass, SquareClassSubgroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Rand = ChaCha8Rng;

pub fn rng(seed: u64) -> Rand {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q3() -> Field {
    Field::padic(3).unwrap()
}

pub fn q5() -> Field {
    Field::padic(5).unwrap()
}

pub fn f3t() -> Field {
    Field::laurent(3).unwrap()
}

/// `Q_3`, `Q_5` or `F_3((t))`.
pub fn base(k: usize) -> Field {
    [q3, q5, f3t][k % 3]()
}

pub fn eisenstein(f: &Field, e: usize) -> Step {
    // x^e - pi
    let mut coeffs = vec![f.zero(); e + 1];
    coeffs[0] = f.neg(&f.uniformizer());
    coeffs[e] = f.one();
    Step::Eisenstein { coeffs }
}

/// Tower with unramified degree `f` over ramification `e`, either order.
pub fn tower(base: &Field, e: usize, f: usize, ramified_first: bool) -> Field {
    let mut field = base.clone();
    let steps: Vec<bool> = if ramified_first { vec![true, false] } else { vec![false, true] };
    for ramified in steps {
        if ramified && e > 1 {
            field = field.push_step(eisenstein(&field, e)).unwrap();
        } else if !ramified && f > 1 {
            field = field.push_step(Step::Unramified { degree: f }).unwrap();
        }
    }
    field
}

pub fn residue_reps(f: &Field) -> Vec<Elem> {
    f.residue_representatives(1)
}

/// Random unit: nonzero residue plus a random multiple of `pi`.
pub fn unit(f: &Field, r: &mut Rand) -> Elem {
    let reps = residue_reps(f);
    let nonzero: Vec<&Elem> = reps.iter().filter(|x| !f.is_zero(x)).collect();
    let mut x = nonzero[r.gen_range(0..nonzero.len())].clone();
    let mut p = f.one();
    for _ in 0..2 {
        p = f.mul(&p, &f.uniformizer());
        let c = &reps[r.gen_range(0..reps.len())];
        x = f.add(&x, &f.mul(c, &p));
    }
    x
}

/// Random nonzero element of valuation in `lo..=hi`.
pub fn nonzero(f: &Field, r: &mut Rand, lo: i64, hi: i64) -> Elem {
    let v = r.gen_range(lo..=hi);
    f.mul(&unit(f, r), &f.pi_pow(v))
}

/// Random integral element, zero with probability about 1/4.
pub fn integral(f: &Field, r: &mut Rand, max_v: i64) -> Elem {
    if r.gen_ratio(1, 4) {
        f.zero()
    } else {
        nonzero(f, r, 0, max_v)
    }
}

/// Random nondegenerate integral lattice of the given rank.
pub fn lattice(f: &Field, r: &mut Rand, rank: usize, max_v: i64) -> QuadLattice {
    loop {
        let mut g = Mat::zeros(f, rank, rank);
        for i in 0..rank {
            for j in i..rank {
                let x = integral(f, r, max_v);
                g[(i, j)] = x.clone();
                g[(j, i)] = x;
            }
        }
        if let Ok(l) = QuadLattice::new(f.clone(), g) {
            return l;
        }
    }
}

/// Random diagonal lattice with entry valuations in `0..=max_v`.
pub fn diagonal(f: &Field, r: &mut Rand, rank: usize, max_v: i64) -> QuadLattice {
    let entries: Vec<Elem> = (0..rank).map(|_| nonzero(f, r, 0, max_v)).collect();
    QuadLattice::diagonal(f.clone(), &entries).unwrap()
}

/// Random matrix in `GL_n(R)`: unit lower triangular times upper triangular
/// with unit diagonal, then a random row permutation.
pub fn unimodular(f: &Field, r: &mut Rand, n: usize) -> Mat {
    let mut lower = Mat::identity(f, n);
    let mut upper = Mat::identity(f, n);
    for i in 0..n {
        upper[(i, i)] = unit(f, r);
        for j in 0..i {
            lower[(i, j)] = integral(f, r, 2);
            upper[(j, i)] = integral(f, r, 2);
        }
    }
    let mut m = lower.mul(f, &upper);
    for i in (1..n).rev() {
        m.swap_rows(i, r.gen_range(0..=i));
    }
    m
}

/// Random invertible matrix over the field (not necessarily integral).
pub fn invertible(f: &Field, r: &mut Rand, n: usize) -> Mat {
    loop {
        let mut m = Mat::zeros(f, n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = if r.gen_ratio(1, 4) { f.zero() } else { nonzero(f, r, -1, 2) };
            }
        }
        if !f.is_zero(&m.det(f)) {
            return m;
        }
    }
}

/// Proptest configuration with a fixed seed and no failure persistence, so
/// every run draws the same cases.
pub fn config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases,
        rng_seed: proptest::test_runner::RngSeed::Fixed(0x5eed),
        failure_persistence: None,
        ..Default::default()
    }
}

/// Random nondegenerate sublattice `pi^k T M` of `m` with `T` an integral
/// `rank(m) x rank` matrix, returned with its injection.
pub fn sublattice(m: &QuadLattice, r: &mut Rand, rank: usize, k: i64) -> (QuadLattice, Mat) {
    let f = m.field();
    let pk = f.pi_pow(k);
    loop {
        let mut t = Mat::zeros(f, m.rank(), rank);
        for i in 0..m.rank() {
            for j in 0..rank {
                t[(i, j)] = f.mul(&integral(f, r, 1), &pk);
            }
        }
        if let Ok(n) = QuadLattice::new(f.clone(), m.gram().congruence(f, &t)) {
            return (n, t);
        }
    }
}

/// Random nondegenerate symmetric integer Gram matrix with entry valuations
/// at most `max_v` at 3.
pub fn int_gram(r: &mut Rand, rank: usize, max_v: u32) -> Vec<Vec<i64>> {
    loop {
        let mut g = vec![vec![0i64; rank]; rank];
        for i in 0..rank {
            for j in i..rank {
                let x = if i != j && r.gen_ratio(1, 2) {
                    0
                } else {
                    let u = [1, 2, 4, 5, 7, 8][r.gen_range(0..6)] * if r.gen_bool(0.5) { 1 } else { -1 };
                    u * 3i64.pow(r.gen_range(0..=max_v))
                };
                g[i][j] = x;
                g[j][i] = x;
            }
        }
        let f = q3();
        let rows: Vec<&[i64]> = g.iter().map(|r| r.as_slice()).collect();
        if QuadLattice::from_ints(f, &rows).is_ok() {
            return g;
        }
    }
}

pub fn to_lattice(g: &[Vec<i64>]) -> QuadLattice {
    let rows: Vec<&[i64]> = g.iter().map(|r| r.as_slice()).collect();
    QuadLattice::from_ints(q3(), &rows).unwrap()
}

/// Square class of `Q(v)` when the reflection along `v` maps `m` onto itself:
/// `2 B(v, e_i) / Q(v)` integral for every basis vector `e_i`.
pub fn reflection_class(m: &QuadLattice, v: &[Elem]) -> Option<SquareClass> {
    let f = m.field();
    let q = m.q(v);
    if f.is_zero(&q) {
        return None;
    }
    let vq = f.valuation(&q).unwrap();
    let gv = m.gram().mul_vec(f, v);
    gv.iter().all(|b| f.is_zero(b) || f.valuation(b).unwrap() >= vq).then(|| f.square_class(&q).unwrap())
}

/// Classes of all lattice-preserving reflections along the vectors
/// `sum c_i d_i`, `d_i` a Jordan basis and `c_i` in `{0, residues, pi}`.
pub fn realized_reflections(m: &QuadLattice) -> Vec<SquareClass> {
    let f = m.field();
    let basis = m.jordan_split().unwrap().transition;
    let mut coeffs: Vec<Elem> = residue_reps(f);
    coeffs.push(f.uniformizer());
    let n = m.rank();
    let mut found = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let mut v = vec![f.zero(); n];
        for (i, &k) in idx.iter().enumerate() {
            let d = basis.col(i);
            for (x, y) in v.iter_mut().zip(&d) {
                *x = f.add(x, &f.mul(&coeffs[k], y));
            }
        }
        if let Some(c) = reflection_class(m, &v) {
            if !found.contains(&c) {
                found.push(c);
            }
        }
        let mut i = 0;
        while i < n {
            idx[i] += 1;
            if idx[i] < coeffs.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
        if i == n {
            return found;
        }
    }
}

pub fn even_products(classes: &[SquareClass]) -> SquareClassSubgroup {
    SquareClassSubgroup::generated_by(classes.iter().flat_map(|&a| classes.iter().map(move |&b| a * b)))
}

/// `pi^r` times a unimodular lattice with Gram `<a, -a> ⊥ <units>` in a
/// random basis.
pub fn isotropic_modular(f: &Field, r: &mut Rand, rank: usize, scale: i64) -> QuadLattice {
    let a = unit(f, r);
    let mut entries = vec![a.clone(), f.neg(&a)];
    entries.extend((2..rank).map(|_| unit(f, r)));
    let pr = f.pi_pow(scale);
    let entries: Vec<Elem> = entries.iter().map(|x| f.mul(x, &pr)).collect();
    let d = QuadLattice::diagonal(f.clone(), &entries).unwrap();
    let u = unimodular(f, r, rank);
    QuadLattice::new(f.clone(), d.gram().congruence(f, &u)).unwrap()
}

/// `pi^r` times an anisotropic unimodular lattice of rank 1 or 2 in a
/// random basis.
pub fn anisotropic_modular(f: &Field, r: &mut Rand, rank: usize, scale: i64) -> QuadLattice {
    let pr = f.pi_pow(scale);
    loop {
        let entries: Vec<Elem> = (0..rank).map(|_| f.mul(&unit(f, r), &pr)).collect();
        let d = QuadLattice::diagonal(f.clone(), &entries).unwrap();
        if d.space().is_anisotropic().unwrap() {
            let u = unimodular(f, r, rank);
            return QuadLattice::new(f.clone(), d.gram().congruence(f, &u)).unwrap();
        }
    }
}
