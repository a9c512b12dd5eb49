//! Brute-force embedding oracle over `Z_p` for small integer Gram matrices,
//! independent of the library: lift injections `T` digit by digit modulo
//! `p^j`, depth first, and accept once some `T` with `T^t G_M T = G_N mod p^j`
//! has `j > 2e`, `e` the valuation of the largest elementary divisor of the
//! Jacobian at `T` (Hensel). Reject when every branch dies.

/// Deepest level searched before giving up.
pub const MAX_LEVEL: u32 = 16;

fn val(p: i128, mut x: i128) -> u32 {
    if x == 0 {
        return u32::MAX;
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        _ => (0..m.len())
            .map(|c| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, &x)| x).collect())
                    .collect();
                let s = if c % 2 == 0 { 1 } else { -1 };
                s * m[0][c] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

struct Problem {
    p: i128,
    gm: Vec<Vec<i128>>,
    gn: Vec<Vec<i128>>,
    m: usize,
    n: usize,
    /// Index pairs `(i, j)`, `i <= j`, of the equations.
    eqs: Vec<(usize, usize)>,
}

impl Problem {
    /// `T` is stored column-major: `t[k * m + a]` is row `a`, column `k`.
    fn gt(&self, t: &[i128]) -> Vec<Vec<i128>> {
        (0..self.m)
            .map(|a| (0..self.n).map(|k| (0..self.m).map(|b| self.gm[a][b] * t[k * self.m + b]).sum()).collect())
            .collect()
    }

    fn residual_valuation(&self, t: &[i128], gt: &[Vec<i128>]) -> u32 {
        self.eqs
            .iter()
            .map(|&(i, j)| {
                let x: i128 = (0..self.m).map(|a| t[i * self.m + a] * gt[a][j]).sum::<i128>() - self.gn[i][j];
                val(self.p, x)
            })
            .min()
            .unwrap_or(u32::MAX)
    }

    /// Valuation of the largest elementary divisor of the Jacobian at `t`,
    /// `u32::MAX` when it is not surjective.
    fn jacobian_valuation(&self, gt: &[Vec<i128>]) -> u32 {
        let jac: Vec<Vec<i128>> = self
            .eqs
            .iter()
            .map(|&(i, j)| {
                (0..self.n * self.m)
                    .map(|var| {
                        let (k, a) = (var / self.m, var % self.m);
                        let mut d = 0;
                        if k == i {
                            d += gt[a][j];
                        }
                        if k == j {
                            d += gt[a][i];
                        }
                        d
                    })
                    .collect()
            })
            .collect();
        let r = self.eqs.len();
        let top = self.minor_valuation(&jac, r);
        if top == u32::MAX {
            return u32::MAX;
        }
        top - self.minor_valuation(&jac, r - 1)
    }

    /// Minimum valuation over all `k x k` minors.
    fn minor_valuation(&self, jac: &[Vec<i128>], k: usize) -> u32 {
        let rows = subsets(jac.len(), k);
        let cols = subsets(self.n * self.m, k);
        let mut best = u32::MAX;
        for rs in &rows {
            for cs in &cols {
                let sub: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&c| jac[i][c]).collect()).collect();
                best = best.min(val(self.p, det(&sub)));
                if best == 0 {
                    return 0;
                }
            }
        }
        best
    }
}

/// Search nodes visited before giving up.
pub const BUDGET: u64 = 2_000_000;

/// `Some(true/false)` when decided within [`MAX_LEVEL`] levels and [`BUDGET`]
/// nodes, else `None`.
pub fn embeds(p: i64, gn: &[Vec<i64>], gm: &[Vec<i64>]) -> Option<bool> {
    let (n, m) = (gn.len(), gm.len());
    if n > m {
        return Some(false);
    }
    let p = p as i128;
    let conv =
        |g: &[Vec<i64>]| -> Vec<Vec<i128>> { g.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect() };
    let (mut gn, mut gm) = (conv(gn), conv(gm));
    // scaling both forms by p^-1 preserves embeddability
    while gn.iter().chain(&gm).flatten().all(|x| x % p == 0) {
        for x in gn.iter_mut().chain(gm.iter_mut()).flatten() {
            *x /= p;
        }
    }
    let eqs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let prob = Problem { p, gm, gn, m, n, eqs };
    let mut search = Search { prob: &prob, budget: BUDGET, exhausted: false };
    match search.lift(vec![0; n * m], 0, 1) {
        true => Some(true),
        false if search.exhausted => None,
        false => Some(false),
    }
}

struct Search<'a> {
    prob: &'a Problem,
    budget: u64,
    exhausted: bool,
}

impl Search<'_> {
    /// Try every lift of `t` (known mod `p^j`, `modulus = p^j`) to level
    /// `j + 1`, depth first. True once some lift passes the Hensel test.
    fn lift(&mut self, t: Vec<i128>, j: u32, modulus: i128) -> bool {
        if j == MAX_LEVEL {
            self.exhausted = true;
            return false;
        }
        let p = self.prob.p;
        let vars = t.len();
        let mut digits = vec![0i128; vars];
        loop {
            if self.budget == 0 {
                self.exhausted = true;
                return false;
            }
            self.budget -= 1;
            let next: Vec<i128> = t.iter().zip(&digits).map(|(x, c)| x + c * modulus).collect();
            let gt = self.prob.gt(&next);
            if self.prob.residual_valuation(&next, &gt) > j {
                let d = self.prob.jacobian_valuation(&gt);
                if d != u32::MAX && j + 1 > 2 * d {
                    return true;
                }
                if self.lift(next, j + 1, modulus * p) {
                    return true;
                }
                if self.exhausted {
                    return false;
                }
            }
            // next digit vector in base p
            let mut k = 0;
            while k < vars {
                digits[k] += 1;
                if digits[k] < p {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
            if k == vars {
                return false;
            }
        }
    }
}
