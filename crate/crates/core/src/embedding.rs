//! O'Meara's local embedding criterion, constructive embeddings and the
//! local integral Springer theorem.

use std::collections::HashSet;
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::localfield::{Elem, Field};
use crate::matrix::Mat;
use crate::quadlattice::{JordanSplitting, QuadLattice, SQRT_PRECISION};
use crate::quadspace::{represents_invariants, SpaceInvariants};

/// Upper bound on residue tuples visited by a single vector search.
pub const MAX_SEARCH: usize = 2_000_000;

/// A vector `v` of a lattice with `Q(v) = a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorWitness {
    pub vector: Vec<Elem>,
    /// `None` when `Q(v) = a` holds exactly; otherwise `v(Q(v) - a)`.
    pub residual: Option<i64>,
}

/// An injection matrix `T` with `T^t G_M T = G_N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingWitness {
    pub matrix: Mat,
    /// `None` when the Gram identity holds exactly; otherwise the minimum
    /// valuation of `T^t G_M T - G_N`.
    pub residual: Option<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpringerReport {
    pub embeds_base: bool,
    pub embeds_ext: bool,
    pub degree_odd: bool,
    /// `degree_odd` implies `embeds_base == embeds_ext`.
    pub consistent: bool,
}

/// `L_{<=i}`: the orthogonal sum of the components of scale exponent at most `i`.
pub fn sublattice_leq(j: &JordanSplitting, i: i64) -> QuadLattice {
    let entries: Vec<Elem> = j
        .components
        .iter()
        .filter(|c| c.scale <= i)
        .flat_map(|c| (0..c.block.rank()).map(move |k| c.block.gram()[(k, k)].clone()))
        .collect();
    QuadLattice::diagonal(j.field.clone(), &entries).expect("Jordan entries are nonzero")
}

/// Invariants of `F ⊗ L_{<=i}` for every `i` in `exponents`.
fn leq_invariants(j: &JordanSplitting, exponents: &[i64]) -> Result<Vec<SpaceInvariants>> {
    let f = &j.field;
    exponents
        .iter()
        .map(|&i| {
            let classes = j
                .components
                .iter()
                .filter(|c| c.scale <= i)
                .flat_map(|c| (0..c.block.rank()).map(move |k| f.square_class(&c.block.gram()[(k, k)])))
                .collect::<Result<Vec<_>>>()?;
            Ok(SpaceInvariants::of_diagonal(f, &classes))
        })
        .collect()
}

/// O'Meara's criterion: `N` embeds in `M` iff `F ⊗ N_{<=i}` is represented by
/// `F ⊗ M_{<=i}` for every `i`.
pub fn omeara_embeds(n: &QuadLattice, m: &QuadLattice) -> Result<bool> {
    if n.field() != m.field() {
        return Err(Error::RingMismatch);
    }
    if n.rank() > m.rank() {
        return Ok(false);
    }
    omeara_split(&n.jordan_split()?, &m.jordan_split()?)
}

/// One comparison in O'Meara's criterion: `F ⊗ N_{<=i}` against `F ⊗ M_{<=i}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OmearaLevel {
    pub exponent: i64,
    pub n: SpaceInvariants,
    pub m: SpaceInvariants,
    pub represented: bool,
}

/// Every comparison made by [`omeara_embeds`], at each scale exponent of `N` or `M`.
pub fn omeara_levels(n: &QuadLattice, m: &QuadLattice) -> Result<Vec<OmearaLevel>> {
    if n.field() != m.field() {
        return Err(Error::RingMismatch);
    }
    levels_split(&n.jordan_split()?, &m.jordan_split()?)
}

fn levels_split(jn: &JordanSplitting, jm: &JordanSplitting) -> Result<Vec<OmearaLevel>> {
    let mut exps: Vec<i64> = jn.scales().into_iter().chain(jm.scales()).collect();
    exps.sort_unstable();
    exps.dedup();
    let inv_n = leq_invariants(jn, &exps)?;
    let inv_m = leq_invariants(jm, &exps)?;
    exps.iter()
        .zip(inv_n.into_iter().zip(inv_m))
        .map(|(&exponent, (a, b))| {
            let represented = a.dim <= b.dim && represents_invariants(&jn.field, &b, &a)?;
            Ok(OmearaLevel { exponent, n: a, m: b, represented })
        })
        .collect()
}

fn omeara_split(jn: &JordanSplitting, jm: &JordanSplitting) -> Result<bool> {
    Ok(levels_split(jn, jm)?.iter().all(|l| l.represented))
}

/// Visit vectors `v` of `M` with `Q(v) = a`, in `M`'s coordinates, covering every
/// residue pattern that can occur for an actual solution.
fn visit_vectors(m: &QuadLattice, a: &Elem, mut visit: impl FnMut(Vec<Elem>, bool) -> ControlFlow<()>) -> Result<()> {
    let f = m.field();
    if f.is_zero(a) {
        return Err(Error::ZeroTarget);
    }
    let va = f.valuation(a)?;
    let jordan = m.jordan_split()?;
    let d = jordan.diagonal();
    let n = d.len();
    let vals: Vec<i64> = d.iter().map(|x| f.valuation(x)).collect::<Result<_>>()?;
    // coordinates j with v(a_j) > v(a) contribute nothing modulo pi^{v(a)+1}
    let depth: Vec<u32> = vals.iter().map(|&vj| (va - vj + 1).max(0) as u32).collect();
    let mut pivots: Vec<usize> = (0..n).filter(|&i| vals[i] <= va).collect();
    pivots.sort_by_key(|&i| vals[i]);
    let reps: Vec<Vec<Elem>> = depth.iter().map(|&k| f.residue_representatives(k)).collect();
    let mut visited = 0usize;
    for &i in &pivots {
        let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        let mut idx = vec![0usize; others.len()];
        loop {
            visited += 1;
            if visited > MAX_SEARCH {
                return Err(Error::Unsupported("vector search space too large".into()));
            }
            let mut coords = vec![f.zero(); n];
            let mut b = a.clone();
            for (slot, &j) in others.iter().enumerate() {
                let x = &reps[j][idx[slot]];
                if !f.is_zero(x) {
                    b = f.sub(&b, &f.mul(&d[j], &f.mul(x, x)));
                    coords[j] = x.clone();
                }
            }
            let found = if f.is_zero(&b) {
                Some(true)
            } else {
                let t = f.div(&b, &d[i])?;
                if f.valuation(&t)? >= 0 && f.is_square(&t)? {
                    let r = f.sqrt(&t, SQRT_PRECISION)?.expect("square");
                    coords[i] = r.root;
                    Some(r.exact)
                } else {
                    None
                }
            };
            if let Some(exact) = found {
                if visit(jordan.transition.mul_vec(f, &coords), exact).is_break() {
                    return Ok(());
                }
            }
            // odometer over the other coordinates
            let mut slot = 0;
            while slot < others.len() {
                idx[slot] += 1;
                if idx[slot] < reps[others[slot]].len() {
                    break;
                }
                idx[slot] = 0;
                slot += 1;
            }
            if slot == others.len() {
                break;
            }
        }
    }
    Ok(())
}

/// A vector of `M` representing `a`, preferring exact solutions.
pub fn find_vector(m: &QuadLattice, a: &Elem) -> Result<Option<VectorWitness>> {
    let f = m.field();
    let mut approx: Option<Vec<Elem>> = None;
    let mut exact: Option<Vec<Elem>> = None;
    visit_vectors(m, a, |v, is_exact| {
        if is_exact {
            exact = Some(v);
            ControlFlow::Break(())
        } else {
            approx.get_or_insert(v);
            ControlFlow::Continue(())
        }
    })?;
    if let Some(v) = exact {
        return Ok(Some(VectorWitness { vector: v, residual: None }));
    }
    Ok(approx.map(|v| {
        let err = f.sub(&m.q(&v), a);
        let residual = if f.is_zero(&err) { None } else { Some(f.valuation(&err).expect("nonzero")) };
        VectorWitness { vector: v, residual }
    }))
}

type Signature = Vec<(i64, usize, SpaceInvariants)>;

fn signature(j: &JordanSplitting) -> Result<Signature> {
    j.components.iter().map(|c| Ok((c.scale, c.block.rank(), c.block.space().invariants()?))).collect()
}

/// Columns (in `M`'s coordinates) of vectors with Gram matrix `diag(a)`.
fn embed_diagonal(m: &QuadLattice, a: &[Elem]) -> Result<Option<Vec<Vec<Elem>>>> {
    let f = m.field();
    if a.is_empty() {
        return Ok(Some(Vec::new()));
    }
    let target = QuadLattice::diagonal(f.clone(), a)?;
    if !omeara_embeds(&target, m)? {
        return Ok(None);
    }
    if a.len() == 1 {
        return Ok(find_vector(m, &a[0])?.map(|w| vec![w.vector]));
    }
    let rest = QuadLattice::diagonal(f.clone(), &a[1..])?;
    let rest_split = rest.jordan_split()?;
    let mut seen: HashSet<Signature> = HashSet::new();
    let mut result = None;
    let mut failure = None;
    visit_vectors(m, &a[0], |v, _| {
        let basis = m.orthogonal_kernel(&v);
        let step = (|| -> Result<Option<Vec<Vec<Elem>>>> {
            let k = m.sublattice(&basis)?;
            let jk = k.jordan_split()?;
            if !seen.insert(signature(&jk)?) || !omeara_split(&rest_split, &jk)? {
                return Ok(None);
            }
            let Some(cols) = embed_diagonal(&k, &a[1..])? else { return Ok(None) };
            let mut out = vec![v.clone()];
            out.extend(cols.iter().map(|c| basis.mul_vec(f, c)));
            Ok(Some(out))
        })();
        match step {
            Ok(Some(cols)) => {
                result = Some(cols);
                ControlFlow::Break(())
            }
            Ok(None) => ControlFlow::Continue(()),
            Err(e) => {
                failure = Some(e);
                ControlFlow::Break(())
            }
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(result)
}

/// An embedding `N -> M` as an integral matrix, or `None` when none exists.
pub fn find_embedding(n: &QuadLattice, m: &QuadLattice) -> Result<Option<EmbeddingWitness>> {
    if n.field() != m.field() {
        return Err(Error::RingMismatch);
    }
    let f = m.field();
    if n.rank() > m.rank() {
        return Ok(None);
    }
    let jn = n.jordan_split()?;
    let Some(cols) = embed_diagonal(m, &jn.diagonal())? else { return Ok(None) };
    let images = Mat::from_cols(f, m.rank(), &cols);
    let t = images.mul(f, &jn.transition.inverse(f)?);
    let diff = m.gram().congruence(f, &t).sub(f, n.gram());
    let residual = diff.min_valuation(f);
    debug_assert!(t.is_integral(f));
    Ok(Some(EmbeddingWitness { matrix: t, residual }))
}

/// Compare embeddability before and after base change to `ext`.
pub fn springer_verify(n: &QuadLattice, m: &QuadLattice, ext: &Field) -> Result<SpringerReport> {
    let embeds_base = omeara_embeds(n, m)?;
    let embeds_ext = omeara_embeds(&n.base_change(ext)?, &m.base_change(ext)?)?;
    let degree_odd = ext.degree() % 2 == 1;
    Ok(SpringerReport { embeds_base, embeds_ext, degree_odd, consistent: !degree_odd || embeds_base == embeds_ext })
}
