//! Test-only oracles, independent of the library's chain machinery: the
//! classical ungraded Hochschild/cyclic theory of the flattened algebra on
//! full tensor powers, with its own dense rational elimination.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Zero};
use superhh::category::SuperCategory;
use superhh::field::Rat;

pub fn q(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Dense matrix with naive Gaussian elimination. Deliberately separate from
/// the library's sparse code so ranks are computed by a second route.
pub struct DenseMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<Rat>>, // row-major
}

impl DenseMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        DenseMat { rows, cols, data: vec![vec![Rat::zero(); cols]; rows] }
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r][c] = self.data[r][c].clone() + v;
    }

    pub fn rank(&self) -> usize {
        let mut m = self.data.clone();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..self.cols {
            let pivot = (row..self.rows).find(|&r| !m[r][col].is_zero());
            let Some(p) = pivot else { continue };
            m.swap(row, p);
            let inv = m[row][col].recip();
            for c in col..self.cols {
                m[row][c] = m[row][c].clone() * inv.clone();
            }
            for r in 0..self.rows {
                if r != row && !m[r][col].is_zero() {
                    let factor = m[r][col].clone();
                    for c in col..self.cols {
                        let sub = factor.clone() * m[row][c].clone();
                        m[r][c] = m[r][c].clone() - sub;
                    }
                }
            }
            rank += 1;
            row += 1;
            if row == self.rows {
                break;
            }
        }
        rank
    }
}

/// The flattened (ungraded) algebra of a category: basis indexed as in the
/// category, unit the sum of identities, product zero off composability.
pub struct ClassicalAlgebra {
    pub dim: usize,
    pub unit: Vec<Rat>,
    mult: Vec<Vec<Vec<(usize, Rat)>>>,
}

impl ClassicalAlgebra {
    pub fn from_category(cat: &SuperCategory<Rat>) -> Self {
        let dim = cat.basis_count();
        let mut unit = vec![Rat::zero(); dim];
        for x in 0..cat.object_count() {
            unit[cat.identity_of(x)] = Rat::one();
        }
        let mut mult = vec![vec![Vec::new(); dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                if let Some(v) = cat.compose(i, j) {
                    mult[i][j] = v.iter().map(|(k, c)| (*k, c.clone())).collect();
                }
            }
        }
        ClassicalAlgebra { dim, unit, mult }
    }

    fn chain_dim(&self, n: usize) -> usize {
        self.dim.pow(n as u32 + 1)
    }

    fn tuple(&self, mut flat: usize, n: usize) -> Vec<usize> {
        let mut out = vec![0; n + 1];
        for k in (0..=n).rev() {
            out[k] = flat % self.dim;
            flat /= self.dim;
        }
        out
    }

    fn flat(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    /// Writes the chain obtained by replacing slots (i, i+1 mod n+1) with
    /// each term of a product expansion into the accumulator.
    fn add_face(
        &self,
        m: &mut DenseMat,
        col: usize,
        tuple: &[usize],
        i: usize,
        coeff: &Rat,
    ) {
        let n = tuple.len() - 1;
        if i < n {
            for (k, c) in &self.mult[tuple[i]][tuple[i + 1]] {
                let mut t = Vec::with_capacity(n);
                t.extend_from_slice(&tuple[..i]);
                t.push(*k);
                t.extend_from_slice(&tuple[i + 2..]);
                m.add_at(self.flat(&t), col, coeff.clone() * c.clone());
            }
        } else {
            for (k, c) in &self.mult[tuple[n]][tuple[0]] {
                let mut t = Vec::with_capacity(n);
                t.push(*k);
                t.extend_from_slice(&tuple[1..n]);
                m.add_at(self.flat(&t), col, coeff.clone() * c.clone());
            }
        }
    }

    /// Classical Hochschild boundary b : C_n -> C_{n-1}, n >= 1.
    fn boundary(&self, n: usize, bar: bool) -> DenseMat {
        let mut m = DenseMat::zero(self.chain_dim(n - 1), self.chain_dim(n));
        let top = if bar { n - 1 } else { n };
        for col in 0..self.chain_dim(n) {
            let tuple = self.tuple(col, n);
            for i in 0..=top {
                let sign = if i % 2 == 0 { q(1) } else { q(-1) };
                self.add_face(&mut m, col, &tuple, i, &sign);
            }
        }
        m
    }

    /// Exact HH dims through nmax (one degree deeper internally).
    pub fn hochschild_dims(&self, nmax: usize) -> Vec<usize> {
        let bounds: Vec<DenseMat> = (1..=nmax + 1).map(|n| self.boundary(n, false)).collect();
        let ranks: Vec<usize> = bounds.iter().map(|b| b.rank()).collect();
        (0..=nmax)
            .map(|n| {
                let kernel = if n == 0 {
                    self.chain_dim(0)
                } else {
                    self.chain_dim(n) - ranks[n - 1]
                };
                kernel - ranks[n]
            })
            .collect()
    }

    /// Classical cochain differential on Hom(A^{⊗n}, A).
    fn cochain_differential(&self, n: usize) -> DenseMat {
        let src = self.dim.pow(n as u32) * self.dim;
        let tgt = self.dim.pow(n as u32 + 1) * self.dim;
        let mut m = DenseMat::zero(tgt, src);
        let tuples = self.dim.pow(n as u32 + 1);
        for flat in 0..tuples {
            let tuple = self.tuple(flat, n);
            // i = 0: a_1 · φ(a_2..)
            {
                let sub = &tuple[1..];
                let sub_flat = sub.iter().fold(0, |acc, &i| acc * self.dim + i);
                for val in 0..self.dim {
                    let col = sub_flat * self.dim + val;
                    for (k, c) in &self.mult[tuple[0]][val] {
                        m.add_at(flat * self.dim + k, col, c.clone());
                    }
                }
            }
            // interior compositions
            for i in 1..=n {
                let sign = if i % 2 == 0 { q(1) } else { q(-1) };
                for (k, c) in &self.mult[tuple[i - 1]][tuple[i]] {
                    let mut sub = Vec::with_capacity(n);
                    sub.extend_from_slice(&tuple[..i - 1]);
                    sub.push(*k);
                    sub.extend_from_slice(&tuple[i + 1..]);
                    let sub_flat = sub.iter().fold(0, |acc, &j| acc * self.dim + j);
                    for val in 0..self.dim {
                        let col = sub_flat * self.dim + val;
                        m.add_at(flat * self.dim + val, col, sign.clone() * c.clone());
                    }
                }
            }
            // i = n+1: φ(a_1..a_n) · a_{n+1}
            {
                let sign = if (n + 1) % 2 == 0 { q(1) } else { q(-1) };
                let sub = &tuple[..n];
                let sub_flat = sub.iter().fold(0, |acc, &i| acc * self.dim + i);
                for val in 0..self.dim {
                    let col = sub_flat * self.dim + val;
                    for (k, c) in &self.mult[val][tuple[n]] {
                        m.add_at(flat * self.dim + k, col, sign.clone() * c.clone());
                    }
                }
            }
        }
        m
    }

    pub fn cohomology_dims(&self, nmax: usize) -> Vec<usize> {
        let diffs: Vec<DenseMat> = (0..=nmax).map(|n| self.cochain_differential(n)).collect();
        let ranks: Vec<usize> = diffs.iter().map(|d| d.rank()).collect();
        (0..=nmax)
            .map(|n| {
                let dim_n = self.dim.pow(n as u32) * self.dim;
                let kernel = dim_n - ranks[n];
                let image = if n == 0 { 0 } else { ranks[n - 1] };
                kernel - image
            })
            .collect()
    }

    /// Cyclic operator t_n = (-1)^n rotation, as (target, sign) per column.
    fn t_perm(&self, n: usize) -> Vec<(usize, i8)> {
        let d = self.chain_dim(n);
        (0..d)
            .map(|col| {
                let tuple = self.tuple(col, n);
                let mut rot = Vec::with_capacity(n + 1);
                rot.push(tuple[n]);
                rot.extend_from_slice(&tuple[..n]);
                let sign = if n % 2 == 0 { 1 } else { -1 };
                (self.flat(&rot), sign)
            })
            .collect()
    }

    /// Exact HC dims through nmax via the classical Tot CC (one degree deeper).
    pub fn cyclic_dims(&self, nmax: usize) -> Vec<usize> {
        let deep = nmax + 1;
        // offsets of Tot_n = ⊕_{p+q=n} C_q
        let tot_dim = |n: usize| -> usize { (0..=n).map(|p| self.chain_dim(n - p)).sum() };
        let offsets = |n: usize| -> Vec<usize> {
            let mut offs = Vec::new();
            let mut acc = 0;
            for p in 0..=n {
                offs.push(acc);
                acc += self.chain_dim(n - p);
            }
            offs
        };
        let mut ranks = Vec::new();
        for n in 1..=deep {
            let mut m = DenseMat::zero(tot_dim(n - 1), tot_dim(n));
            let src_off = offsets(n);
            let tgt_off = offsets(n - 1);
            for p in 0..=n {
                let qd = n - p;
                if qd >= 1 {
                    let vert = self.boundary(qd, p % 2 == 1);
                    let vsign = if p % 2 == 0 { q(1) } else { q(-1) };
                    for c in 0..vert.cols {
                        for r in 0..vert.rows {
                            if !vert.data[r][c].is_zero() {
                                m.add_at(
                                    tgt_off[p] + r,
                                    src_off[p] + c,
                                    vsign.clone() * vert.data[r][c].clone(),
                                );
                            }
                        }
                    }
                }
                if p >= 1 {
                    let t = self.t_perm(qd);
                    let d = self.chain_dim(qd);
                    if p % 2 == 1 {
                        // 1 - t
                        for c in 0..d {
                            m.add_at(tgt_off[p - 1] + c, src_off[p] + c, q(1));
                            let (r, s) = t[c];
                            m.add_at(tgt_off[p - 1] + r, src_off[p] + c, q(-(s as i64)));
                        }
                    } else {
                        // N = 1 + t + ... + t^q, t iterated as a signed permutation
                        for c in 0..d {
                            let (mut r, mut s) = (c, 1i8);
                            for _ in 0..=qd {
                                m.add_at(tgt_off[p - 1] + r, src_off[p] + c, q(s as i64));
                                let (nr, ns) = t[r];
                                s *= ns;
                                r = nr;
                            }
                        }
                    }
                }
            }
            ranks.push(m.rank());
        }
        (0..=nmax)
            .map(|n| {
                let kernel = if n == 0 { tot_dim(0) } else { tot_dim(n) - ranks[n - 1] };
                kernel - ranks[n]
            })
            .collect()
    }
}
