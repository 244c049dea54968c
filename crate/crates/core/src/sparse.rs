//! Sparse vectors and matrices over an exact field, with the elimination
//! engine behind ranks, kernels and quotient bases.
//!
//! Matrices are stored column-major: every operator in this crate is
//! assembled column by column (the image of one basis chain at a time), and
//! rank/kernel computations reduce columns against a growing echelon of
//! pivot vectors. Over `Q` the pivot vectors are kept as coprime-integer
//! vectors (fraction-free in effect); over `F_p` they are kept monic.

use std::collections::BTreeMap;


use crate::field::{Fp, Rat, Scalar};

/// A sparse vector: entries sorted by index, no explicit zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseVec<F> {
    entries: Vec<(usize, F)>,
}

impl<F: Scalar> Default for SparseVec<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Scalar> SparseVec<F> {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(index: usize) -> Self {
        SparseVec { entries: vec![(index, F::one())] }
    }

    /// Builds from possibly unsorted, possibly repeated entries (summed).
    pub fn from_entries(entries: impl IntoIterator<Item = (usize, F)>) -> Self {
        let mut acc: BTreeMap<usize, F> = BTreeMap::new();
        for (i, c) in entries {
            match acc.remove(&i) {
                Some(prev) => {
                    let s = prev + c;
                    if !s.is_zero() {
                        acc.insert(i, s);
                    }
                }
                None => {
                    if !c.is_zero() {
                        acc.insert(i, c);
                    }
                }
            }
        }
        SparseVec { entries: acc.into_iter().collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, F)> {
        self.entries.iter()
    }

    pub fn get(&self, index: usize) -> Option<&F> {
        self.entries
            .binary_search_by_key(&index, |(i, _)| *i)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    pub fn leading(&self) -> Option<(usize, &F)> {
        self.entries.first().map(|(i, c)| (*i, c))
    }

    pub fn scale(&mut self, c: &F) {
        if c.is_zero() {
            self.entries.clear();
            return;
        }
        for (_, v) in &mut self.entries {
            *v = v.clone() * c.clone();
        }
    }

    pub fn scaled(mut self, c: &F) -> Self {
        self.scale(c);
        self
    }

    /// `self := a*self + b*other` (merge-add).
    pub fn combine(&mut self, a: &F, b: &F, other: &SparseVec<F>) {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let mut lhs = self.entries.iter();
        let mut rhs = other.entries.iter();
        let mut l = lhs.next();
        let mut r = rhs.next();
        loop {
            match (l, r) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        let v = a.clone() * x.clone();
                        if !v.is_zero() {
                            out.push((*i, v));
                        }
                        l = lhs.next();
                    } else if j < i {
                        let v = b.clone() * y.clone();
                        if !v.is_zero() {
                            out.push((*j, v));
                        }
                        r = rhs.next();
                    } else {
                        let v = a.clone() * x.clone() + b.clone() * y.clone();
                        if !v.is_zero() {
                            out.push((*i, v));
                        }
                        l = lhs.next();
                        r = rhs.next();
                    }
                }
                (Some((i, x)), None) => {
                    let v = a.clone() * x.clone();
                    if !v.is_zero() {
                        out.push((*i, v));
                    }
                    l = lhs.next();
                }
                (None, Some((j, y))) => {
                    let v = b.clone() * y.clone();
                    if !v.is_zero() {
                        out.push((*j, v));
                    }
                    r = rhs.next();
                }
                (None, None) => break,
            }
        }
        self.entries = out;
    }

    /// `self := self + c*other`.
    pub fn axpy(&mut self, c: &F, other: &SparseVec<F>) {
        self.combine(&F::one(), c, other);
    }

    pub fn add(&self, other: &SparseVec<F>) -> SparseVec<F> {
        let mut out = self.clone();
        out.axpy(&F::one(), other);
        out
    }

    pub fn sub(&self, other: &SparseVec<F>) -> SparseVec<F> {
        let mut out = self.clone();
        out.axpy(&(-F::one()), other);
        out
    }

    pub fn entries(&self) -> &[(usize, F)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, F)> {
        self.entries
    }
}

/// A sparse matrix over an exact field, column-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix<F> {
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec<F>>,
}

impl<F: Scalar> SparseMatrix<F> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![SparseVec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        let columns = (0..n).map(SparseVec::unit).collect();
        SparseMatrix { rows: n, cols: n, columns }
    }

    pub fn from_columns(rows: usize, columns: Vec<SparseVec<F>>) -> Self {
        debug_assert!(columns
            .iter()
            .all(|c| c.leading().map_or(true, |_| c.entries.last().unwrap().0 < rows)));
        SparseMatrix { rows, cols: columns.len(), columns }
    }

    /// Builds from (row, col, coefficient) triplets; repeats are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, F)>,
    ) -> Self {
        let mut per_col: Vec<Vec<(usize, F)>> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet ({r},{c}) out of range");
            per_col[c].push((r, v));
        }
        let columns = per_col.into_iter().map(SparseVec::from_entries).collect();
        SparseMatrix { rows, cols, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn column(&self, j: usize) -> &SparseVec<F> {
        &self.columns[j]
    }

    pub fn set_column(&mut self, j: usize, v: SparseVec<F>) {
        debug_assert!(v.entries.last().map_or(true, |(r, _)| *r < self.rows));
        self.columns[j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_zero())
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&F> {
        self.columns[c].get(r)
    }

    pub fn transpose(&self) -> SparseMatrix<F> {
        let mut per_col: Vec<Vec<(usize, F)>> = vec![Vec::new(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, c) in col.iter() {
                per_col[*i].push((j, c.clone()));
            }
        }
        let columns = per_col.into_iter().map(SparseVec::from_entries).collect();
        SparseMatrix { rows: self.cols, cols: self.rows, columns }
    }

    /// y = M v.
    pub fn apply(&self, v: &SparseVec<F>) -> SparseVec<F> {
        assert!(v.entries.last().map_or(true, |(i, _)| *i < self.cols));
        let mut out = SparseVec::new();
        for (j, c) in v.iter() {
            out.axpy(c, &self.columns[*j]);
        }
        out
    }

    /// self * other (composition of linear maps; `self` applied second).
    pub fn mul(&self, other: &SparseMatrix<F>) -> SparseMatrix<F> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let columns = other.columns.iter().map(|c| self.apply(c)).collect();
        SparseMatrix { rows: self.rows, cols: other.cols, columns }
    }

    pub fn add(&self, other: &SparseMatrix<F>) -> SparseMatrix<F> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| a.add(b))
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols, columns }
    }

    pub fn sub(&self, other: &SparseMatrix<F>) -> SparseMatrix<F> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| a.sub(b))
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols, columns }
    }

    pub fn scaled(&self, c: &F) -> SparseMatrix<F> {
        let columns = self.columns.iter().map(|col| col.clone().scaled(c)).collect();
        SparseMatrix { rows: self.rows, cols: self.cols, columns }
    }

    pub fn neg(&self) -> SparseMatrix<F> {
        self.scaled(&(-F::one()))
    }

    /// Rank over the exact field.
    pub fn rank(&self) -> usize {
        // Eliminate along the smaller dimension; rank is transpose-invariant.
        let oriented;
        let m = if self.rows <= self.cols {
            self
        } else {
            oriented = self.transpose();
            &oriented
        };
        if F::INTEGER_FAST_PATH {
            if let Some(r) = m.rank_small_integer() {
                return r;
            }
        }
        rank_of_columns(m.columns_by_weight())
    }

    /// Exact fraction-free i128 elimination for integer-valued matrices;
    /// None when an entry is not a small integer or an update would overflow
    /// (the caller falls back to the arbitrary-precision path).
    fn rank_small_integer(&self) -> Option<usize> {
        let mut order: Vec<usize> = (0..self.cols).collect();
        order.sort_by_key(|&j| (self.columns[j].len(), j));
        let mut cols: Vec<Vec<(u32, i128)>> = Vec::with_capacity(self.cols);
        for j in order {
            let mut col = Vec::with_capacity(self.columns[j].len());
            for (i, c) in self.columns[j].iter() {
                col.push((*i as u32, c.as_small_int()? as i128));
            }
            cols.push(col);
        }
        let mut pivots: Vec<Option<Vec<(u32, i128)>>> = vec![None; self.rows];
        let mut rank = 0usize;
        for mut v in cols {
            loop {
                let Some(&(r, c)) = v.first() else { break };
                match &pivots[r as usize] {
                    Some(p) => {
                        v = fraction_free_update(&v, c, p)?;
                    }
                    None => {
                        pivots[r as usize] = Some(v);
                        rank += 1;
                        break;
                    }
                }
            }
        }
        Some(rank)
    }

    /// Columns sorted sparsest-first (cheap stand-in for Markowitz pivoting).
    fn columns_by_weight(&self) -> Vec<SparseVec<F>> {
        let mut order: Vec<usize> = (0..self.cols).collect();
        order.sort_by_key(|&j| (self.columns[j].len(), j));
        order.into_iter().map(|j| self.columns[j].clone()).collect()
    }

    /// A basis of the null space; every returned `v` satisfies `M v = 0`
    /// exactly, and the count is `cols - rank`.
    pub fn kernel_basis(&self) -> Vec<SparseVec<F>> {
        let mut ech = Echelon::new();
        let mut kernel = Vec::new();
        let mut order: Vec<usize> = (0..self.cols).collect();
        order.sort_by_key(|&j| (self.columns[j].len(), j));
        for j in order {
            let mut v = self.columns[j].clone();
            let mut companion = SparseVec::unit(j);
            ech.reduce_leading(&mut v, Some(&mut companion));
            if v.is_zero() {
                kernel.push(companion);
            } else {
                ech.insert(v, Some(companion));
            }
        }
        kernel.sort_by_key(|v| v.leading().map(|(i, _)| i));
        kernel
    }
}

impl SparseMatrix<Rat> {
    /// Rank with a cross-check modulo two large primes; a mismatch means the
    /// elimination code is broken and is reported as such.
    pub fn rank_with_modular_check(&self) -> Result<usize, String> {
        let exact = self.rank();
        for p in [2_147_483_629u64, 2_147_483_587u64] {
            let spec = crate::field::FieldSpec::prime(p).expect("prime");
            let mut ok = true;
            let mut triplets = Vec::new();
            'outer: for (j, col) in self.columns.iter().enumerate() {
                for (i, c) in col.iter() {
                    match Fp::from_ratio(&spec, c.numer(), c.denom()) {
                        Ok(v) => triplets.push((*i, j, v)),
                        Err(_) => {
                            // denominator divisible by p: skip this prime
                            ok = false;
                            break 'outer;
                        }
                    }
                }
            }
            if !ok {
                continue;
            }
            let modular = SparseMatrix::from_triplets(self.rows, self.cols, triplets).rank();
            // The modular rank can only drop below the rational rank.
            if modular > exact {
                return Err(format!(
                    "internal consistency error: rank {exact} over Q but {modular} mod {p}"
                ));
            }
            if modular == exact {
                return Ok(exact);
            }
        }
        // Both primes degenerate (vanishingly unlikely at desk scale).
        Ok(exact)
    }
}

/// lead(p)·v − c·p, merged and divided by its content; None on overflow.
fn fraction_free_update(
    v: &[(u32, i128)],
    c: i128,
    p: &[(u32, i128)],
) -> Option<Vec<(u32, i128)>> {
    let lead = p[0].1;
    let mut out = Vec::with_capacity(v.len() + p.len());
    let (mut i, mut j) = (0usize, 0usize);
    while i < v.len() || j < p.len() {
        let take_v = j >= p.len() || (i < v.len() && v[i].0 < p[j].0);
        let take_p = i >= v.len() || (j < p.len() && p[j].0 < v[i].0);
        let (row, val) = if take_v {
            let e = (v[i].0, lead.checked_mul(v[i].1)?);
            i += 1;
            e
        } else if take_p {
            let e = (p[j].0, c.checked_mul(p[j].1)?.checked_neg()?);
            j += 1;
            e
        } else {
            let a = lead.checked_mul(v[i].1)?;
            let b = c.checked_mul(p[j].1)?;
            let e = (v[i].0, a.checked_sub(b)?);
            i += 1;
            j += 1;
            e
        };
        if val != 0 {
            out.push((row, val));
        }
    }
    if out.is_empty() {
        return Some(out);
    }
    let mut g: u128 = 0;
    for (_, val) in &out {
        g = gcd_u128(g, val.unsigned_abs());
        if g == 1 {
            break;
        }
    }
    if g > 1 {
        for (_, val) in &mut out {
            *val /= g as i128;
        }
    }
    Some(out)
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn rank_of_columns<F: Scalar>(columns: Vec<SparseVec<F>>) -> usize {
    let mut ech = Echelon::new();
    for mut v in columns {
        ech.reduce_leading(&mut v, None);
        if !v.is_zero() {
            ech.insert(v, None);
        }
    }
    ech.len()
}

/// A growing column echelon: pivot vectors keyed by their leading row.
///
/// Reduction uses the fraction-free two-term update
/// `v := lead(p) * v - v[r] * p`, then rescales by the field's
/// normalization hook.
pub struct Echelon<F> {
    pivots: BTreeMap<usize, (SparseVec<F>, Option<SparseVec<F>>)>,
}

impl<F: Scalar> Default for Echelon<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Scalar> Echelon<F> {
    pub fn new() -> Self {
        Echelon { pivots: BTreeMap::new() }
    }

    pub fn len(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pivots.is_empty()
    }

    /// Clears `v`'s leading entries against existing pivots until its leading
    /// row is pivot-free (or `v` is zero). The companion mirrors every update.
    pub fn reduce_leading(&self, v: &mut SparseVec<F>, mut companion: Option<&mut SparseVec<F>>) {
        while let Some((r, c)) = v.leading().map(|(r, c)| (r, c.clone())) {
            let Some((pivot, pivot_comp)) = self.pivots.get(&r) else {
                break;
            };
            let lead = pivot.leading().expect("pivot nonzero").1.clone();
            v.combine(&lead, &(-c.clone()), pivot);
            if let Some(comp) = companion.as_deref_mut() {
                match pivot_comp {
                    Some(pc) => comp.combine(&lead, &(-c.clone()), pc),
                    None => comp.scale(&lead),
                }
            }
            let f = F::normalization_factor(v.entries());
            if !f.is_one() {
                v.scale(&f);
                if let Some(comp) = companion.as_deref_mut() {
                    comp.scale(&f);
                }
            }
        }
    }

    /// Inserts a (nonzero, leading-reduced) vector as a new pivot.
    pub fn insert(&mut self, mut v: SparseVec<F>, mut companion: Option<SparseVec<F>>) {
        let f = F::normalization_factor(v.entries());
        if !f.is_one() {
            v.scale(&f);
            if let Some(comp) = companion.as_mut() {
                comp.scale(&f);
            }
        }
        let r = v.leading().expect("cannot insert zero pivot").0;
        debug_assert!(!self.pivots.contains_key(&r));
        self.pivots.insert(r, (v, companion));
    }

    /// Pushes a vector into the echelon; returns true if it increased the rank.
    pub fn push(&mut self, mut v: SparseVec<F>) -> bool {
        self.reduce_leading(&mut v, None);
        if v.is_zero() {
            false
        } else {
            self.insert(v, None);
            true
        }
    }

    /// Membership test: can `v` be fully reduced to zero against the pivots?
    pub fn contains(&self, v: &SparseVec<F>) -> bool {
        self.residual(v).is_zero()
    }

    /// Fully reduces `v` (division-based) and returns the remainder.
    pub fn residual(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let mut rem = SparseVec::new();
        let mut work = v.clone();
        while let Some((r, c)) = work.leading().map(|(r, c)| (r, c.clone())) {
            match self.pivots.get(&r) {
                Some((pivot, _)) => {
                    let lam = c.clone()
                        * pivot
                            .leading()
                            .unwrap()
                            .1
                            .inv()
                            .expect("pivot leading coefficient invertible");
                    work.axpy(&(-lam), pivot);
                }
                None => {
                    // move the untouchable entry out of the working vector
                    rem.axpy(&F::one(), &SparseVec::from_entries([(r, c.clone())]));
                    work.axpy(&(-c), &SparseVec::from_entries([(r, F::one())]));
                }
            }
        }
        rem
    }
}

/// Span of boundary columns plus chosen homology representatives, with
/// coordinate bookkeeping so cycles can be expressed in homology classes.
pub struct QuotientSolver<F> {
    pivots: BTreeMap<usize, (SparseVec<F>, SparseVec<F>)>, // vec, class coords
    reps: Vec<SparseVec<F>>,
    n_reps: usize,
}

impl<F: Scalar> QuotientSolver<F> {
    /// `boundaries`: columns spanning the image; `cycles`: spanning the kernel.
    /// Representatives are the kernel vectors that extend the image span.
    pub fn new(boundaries: &SparseMatrix<F>, cycles: Vec<SparseVec<F>>) -> Self {
        let mut solver = QuotientSolver { pivots: BTreeMap::new(), reps: Vec::new(), n_reps: 0 };
        let mut order: Vec<usize> = (0..boundaries.cols()).collect();
        order.sort_by_key(|&j| (boundaries.column(j).len(), j));
        for j in order {
            let v = boundaries.column(j).clone();
            solver.push(v, SparseVec::new());
        }
        for v in cycles {
            let coords = SparseVec::unit(solver.n_reps);
            if solver.push(v.clone(), coords) {
                solver.reps.push(v);
                solver.n_reps += 1;
            }
        }
        solver
    }

    fn push(&mut self, mut v: SparseVec<F>, mut coords: SparseVec<F>) -> bool {
        while let Some((r, c)) = v.leading().map(|(r, c)| (r, c.clone())) {
            let Some((pivot, pivot_coords)) = self.pivots.get(&r) else {
                break;
            };
            let lead = pivot.leading().unwrap().1.clone();
            v.combine(&lead, &(-c.clone()), pivot);
            coords.combine(&lead, &(-c), pivot_coords);
            let f = F::normalization_factor(v.entries());
            if !f.is_one() {
                v.scale(&f);
                coords.scale(&f);
            }
        }
        if v.is_zero() {
            false
        } else {
            let f = F::normalization_factor(v.entries());
            if !f.is_one() {
                v.scale(&f);
                coords.scale(&f);
            }
            let r = v.leading().unwrap().0;
            self.pivots.insert(r, (v, coords));
            true
        }
    }

    pub fn dim(&self) -> usize {
        self.n_reps
    }

    pub fn representatives(&self) -> &[SparseVec<F>] {
        &self.reps
    }

    /// Coordinates of the class of `cycle` in the representative basis.
    /// Errors if the vector is not in the span (i.e. not a cycle).
    pub fn class_coords(&self, cycle: &SparseVec<F>) -> Result<Vec<F>, String> {
        let mut work = cycle.clone();
        let mut coords = SparseVec::<F>::new();
        while let Some((r, c)) = work.leading().map(|(r, c)| (r, c.clone())) {
            let Some((pivot, pivot_coords)) = self.pivots.get(&r) else {
                return Err(format!("vector is not a cycle: leading row {r} unmatched"));
            };
            let lam =
                c * pivot.leading().unwrap().1.inv().expect("pivot leading invertible");
            work.axpy(&(-lam.clone()), pivot);
            coords.axpy(&lam, pivot_coords);
        }
        let mut out = vec![F::zero(); self.n_reps];
        for (i, c) in coords.iter() {
            out[*i] = c.clone();
        }
        Ok(out)
    }
}
