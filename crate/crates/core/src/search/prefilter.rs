//! Exact graded data of `R / m^(K+1)`, where `m` is the ideal generated by
//! the generators, computed by linear algebra in the free algebra truncated
//! above degree `K`.
//!
//! Columns are ordered by degree, so echelon pivots sit on lowest-degree
//! terms and the pivot count in degree `d` is the dimension of the initial
//! ideal there. For a local quotient `m = J`, so these are the first `K`
//! entries of the D-sequence followed by `dim J^K / J^(K+1)`.

use std::collections::HashMap;

use super::pool::monomials;
use crate::construct::NcPoly;
use crate::linalg::{inv_mod, FpMatrix};

#[derive(Clone, Debug)]
enum Rows {
    /// `F_2`: one bit per column.
    Bits {
        pivots: Vec<Option<Box<[u64]>>>,
    },
    Dense {
        p: u32,
        pivots: Vec<Option<Box<[u32]>>>,
    },
}

#[derive(Clone, Debug)]
pub(crate) struct Echelon {
    rows: Rows,
}

#[derive(Clone, Debug)]
pub(crate) enum Row {
    Bits(Box<[u64]>),
    Dense(Box<[u32]>),
}

impl Echelon {
    fn new(p: u32, cols: usize) -> Self {
        let rows =
            if p == 2 { Rows::Bits { pivots: vec![None; cols] } } else { Rows::Dense { p, pivots: vec![None; cols] } };
        Self { rows }
    }

    fn insert(&mut self, row: &Row) {
        match (&mut self.rows, row) {
            (Rows::Bits { pivots, .. }, Row::Bits(r)) => {
                let mut r = r.clone();
                loop {
                    let Some(col) = first_bit(&r) else { return };
                    match &pivots[col] {
                        Some(b) => r.iter_mut().zip(b.iter()).for_each(|(x, y)| *x ^= y),
                        None => {
                            pivots[col] = Some(r);
                            return;
                        }
                    }
                }
            }
            (Rows::Dense { p, pivots }, Row::Dense(r)) => {
                let p = *p;
                let mut r = r.clone();
                loop {
                    let Some(col) = r.iter().position(|&x| x != 0) else { return };
                    match &pivots[col] {
                        Some(b) => {
                            let f = (p - r[col]) as u64;
                            for (x, &y) in r.iter_mut().zip(b.iter()) {
                                *x = ((*x as u64 + f * y as u64) % p as u64) as u32;
                            }
                        }
                        None => {
                            let s = inv_mod(r[col], p) as u64;
                            r.iter_mut().for_each(|x| *x = (*x as u64 * s % p as u64) as u32);
                            pivots[col] = Some(r);
                            return;
                        }
                    }
                }
            }
            _ => unreachable!("row kind matches field"),
        }
    }

    fn is_pivot(&self, col: usize) -> bool {
        match &self.rows {
            Rows::Bits { pivots, .. } => pivots[col].is_some(),
            Rows::Dense { pivots, .. } => pivots[col].is_some(),
        }
    }
}

impl Echelon {
    /// Coordinates of the unit vector at `col` modulo the row space, with
    /// every pivot column cleared.
    fn reduce_unit(&self, col: usize, cols: usize) -> Vec<u32> {
        match &self.rows {
            Rows::Bits { pivots } => {
                let mut v = vec![0u64; cols.div_ceil(64)];
                v[col / 64] |= 1 << (col % 64);
                reduce_bits(&mut v, pivots, col);
                (0..cols).map(|c| (v[c / 64] >> (c % 64) & 1) as u32).collect()
            }
            Rows::Dense { p, pivots } => {
                let p = *p as u64;
                let mut v = vec![0u32; cols];
                v[col] = 1;
                for c in col..cols {
                    if v[c] != 0 {
                        if let Some(row) = &pivots[c] {
                            let f = p - v[c] as u64;
                            for (x, &y) in v.iter_mut().zip(row.iter()) {
                                *x = ((*x as u64 + f * y as u64) % p) as u32;
                            }
                        }
                    }
                }
                v
            }
        }
    }
}

/// Clears pivot columns from `from` on; earlier bits must already be clear.
fn reduce_bits(v: &mut [u64], pivots: &[Option<Box<[u64]>>], from: usize) {
    for c in from..pivots.len() {
        if v[c / 64] >> (c % 64) & 1 == 1 {
            if let Some(row) = &pivots[c] {
                v.iter_mut().zip(row.iter()).for_each(|(x, y)| *x ^= y);
            }
        }
    }
}

fn first_bit(r: &[u64]) -> Option<usize> {
    r.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

/// The truncated free algebra and the row blocks of each relation.
pub(crate) struct Graded {
    p: u32,
    k: usize,
    /// First column of each degree `0..=k+1`.
    offsets: Vec<usize>,
    index: HashMap<Vec<u8>, usize>,
    words: Vec<Vec<u8>>,
    /// Column of `words[i] words[j]`, or `usize::MAX` beyond degree `k`.
    products: Vec<usize>,
}

impl Graded {
    pub fn new(p: u32, gens: usize, k: usize) -> Self {
        let words: Vec<Vec<u8>> = monomials(gens, 0, k).into_iter().map(|w| w.0).collect();
        let mut offsets = vec![0];
        for d in 0..=k {
            offsets.push(offsets[d] + gens.pow(d as u32));
        }
        let index: HashMap<Vec<u8>, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let products = words
            .iter()
            .flat_map(|a| words.iter().map(|b| [a.as_slice(), b].concat()))
            .map(|w| index.get(&w).copied().unwrap_or(usize::MAX))
            .collect();
        Self { p, k, offsets, index, words, products }
    }

    /// The truncation degree `K`.
    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn echelon(&self) -> Echelon {
        Echelon::new(self.p, self.words.len())
    }

    /// Rows `a * poly * b` for all words with `|a| + |b| <= k - lowest degree`.
    pub fn rows(&self, poly: &NcPoly) -> Vec<Row> {
        let low = poly.terms().next().map_or(0, |(w, _)| w.len());
        if low > self.k {
            return Vec::new();
        }
        let slack = self.k - low;
        let short: Vec<&Vec<u8>> = self.words.iter().filter(|w| w.len() <= slack).collect();
        let n = self.words.len();
        let mut out = Vec::new();
        for a in &short {
            for b in short.iter().filter(|b| a.len() + b.len() <= slack) {
                let mut dense = vec![0u32; n];
                for (w, c) in poly.terms() {
                    if a.len() + w.len() + b.len() > self.k {
                        continue;
                    }
                    let word = [a.as_slice(), &w.0, b.as_slice()].concat();
                    let col = self.index[&word];
                    dense[col] = (dense[col] + c) % self.p;
                }
                out.push(if self.p == 2 {
                    let mut bits = vec![0u64; n.div_ceil(64)];
                    for (i, &x) in dense.iter().enumerate() {
                        if x != 0 {
                            bits[i / 64] |= 1 << (i % 64);
                        }
                    }
                    Row::Bits(bits.into())
                } else {
                    Row::Dense(dense.into())
                });
            }
        }
        out
    }

    pub fn insert_all(&self, ech: &mut Echelon, rows: &[Row]) {
        for r in rows {
            ech.insert(r);
        }
    }

    /// The quotient algebra `R / m^(k+1)`, on the words that are not pivots.
    pub fn truncation(&self, ech: &Echelon) -> Truncation {
        let cols = self.words.len();
        let basis: Vec<usize> = (0..cols).filter(|&c| !ech.is_pivot(c)).collect();
        let dim = basis.len();
        let product_col = |i: usize, j: usize| {
            let c = self.products[basis[i] * cols + basis[j]];
            (c != usize::MAX).then_some(c)
        };
        if let (Rows::Bits { pivots }, true) = (&ech.rows, dim <= 32) {
            let mut table = vec![0u32; dim * dim];
            let mut v = vec![0u64; cols.div_ceil(64)];
            for i in 0..dim {
                for j in 0..dim {
                    let Some(c) = product_col(i, j) else { continue };
                    v.iter_mut().for_each(|x| *x = 0);
                    v[c / 64] |= 1 << (c % 64);
                    reduce_bits(&mut v, pivots, c);
                    table[i * dim + j] =
                        basis.iter().enumerate().fold(0, |m, (k, &b)| m | (((v[b / 64] >> (b % 64)) & 1) as u32) << k);
                }
            }
            return Truncation::Bits { dim, table };
        }
        let mut table = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                table.push(match product_col(i, j) {
                    Some(c) => {
                        let v = ech.reduce_unit(c, cols);
                        basis.iter().map(|&b| v[b]).collect()
                    }
                    None => vec![0; dim],
                });
            }
        }
        Truncation::Dense { p: self.p, dim, table }
    }

    /// `dim m^d / m^(d+1)` of the quotient for `d = 0..=k`.
    pub fn dims(&self, ech: &Echelon) -> Vec<u32> {
        (0..=self.k)
            .map(|d| (self.offsets[d]..self.offsets[d + 1]).filter(|&c| !ech.is_pivot(c)).count() as u32)
            .collect()
    }
}

/// A finite algebra given by structure constants on a basis.
pub(crate) enum Truncation {
    /// `F_2`, elements as bit masks; `table[i * dim + j]` = `b_i b_j`.
    Bits {
        dim: usize,
        table: Vec<u32>,
    },
    Dense {
        p: u32,
        dim: usize,
        table: Vec<Vec<u32>>,
    },
}

// Screens try every element up to this many, else basis elements and
// their pairwise sums.
const SCREEN_ALL: u64 = 1 << 12;

impl Truncation {
    /// Whether some `a b = 0` has `b a != 0`, searching `ker L_a`.
    pub fn has_reversibility_violation(&self) -> bool {
        match self {
            Truncation::Bits { dim, table } => bits_violation(*dim, table),
            Truncation::Dense { p, dim, table } => dense_violation(*p, *dim, table),
        }
    }

    /// Whether `a b c = 0` always forces `b a c = 0`; `false` also when
    /// the algebra is too large to decide here.
    pub fn is_symmetric(&self) -> bool {
        match self {
            Truncation::Bits { dim, table } if 1u64 << dim <= SYMMETRY_ALL => bits_symmetric(*dim, table),
            _ => false,
        }
    }
}

const SYMMETRY_ALL: u64 = 1 << 8;

fn bits_symmetric(d: usize, table: &[u32]) -> bool {
    let n = 1usize << d;
    if (0..d).all(|i| (0..i).all(|j| table[i * d + j] == table[j * d + i])) {
        return true;
    }
    // prod[x * n + y] = x y, filled row by row from a row with one bit less.
    let mut prod = vec![0u32; n * n];
    for x in 1..n {
        let i = x.trailing_zeros() as usize;
        let rest = x & (x - 1);
        for y in 1..n {
            let low = y.trailing_zeros() as usize;
            let yrest = y & (y - 1);
            prod[x * n + y] = prod[x * n + yrest] ^ prod[rest * n + y] ^ prod[rest * n + yrest] ^ table[i * d + low];
        }
    }
    // Basis of the kernel of a -> a x for every x.
    let mut reduced: Vec<(u32, u32)> = Vec::with_capacity(d);
    let kernels: Vec<Vec<u32>> = (0..n)
        .map(|x| {
            reduced.clear();
            let mut kernel = Vec::new();
            for j in 0..d {
                let (mut v, mut combo) = (prod[(1 << j) * n + x], 1u32 << j);
                for &(bv, bc) in reduced.iter() {
                    if v & (bv & bv.wrapping_neg()) != 0 {
                        v ^= bv;
                        combo ^= bc;
                    }
                }
                if v == 0 {
                    kernel.push(combo);
                } else {
                    reduced.push((v, combo));
                }
            }
            kernel
        })
        .collect();
    (1..n).all(|b| {
        (1..n).all(|c| {
            let bc = prod[b * n + c] as usize;
            kernels[bc].iter().all(|&a| prod[prod[b * n + a as usize] as usize * n + c] == 0)
        })
    })
}

fn bits_violation(d: usize, table: &[u32]) -> bool {
    // unit_left[i][j] = b_i b_j and unit_right[i][k] = b_k b_i, so that
    // L_a and R_a are sums over the bits of a.
    let unit_left: Vec<&[u32]> = (0..d).map(|i| &table[i * d..(i + 1) * d]).collect();
    let unit_right: Vec<Vec<u32>> = (0..d).map(|i| (0..d).map(|k| table[k * d + i]).collect()).collect();
    let mut left = vec![0u32; d];
    let mut right = vec![0u32; d];
    let mut reduced: Vec<(u32, u32)> = Vec::with_capacity(d);
    let check = |left: &[u32], right: &[u32], reduced: &mut Vec<(u32, u32)>| {
        // Columns of L_a; dependencies among them are kernel vectors b.
        reduced.clear();
        for (j, &col) in left.iter().enumerate() {
            let (mut v, mut combo) = (col, 1u32 << j);
            for &(bv, bc) in reduced.iter() {
                if v & (bv & bv.wrapping_neg()) != 0 {
                    v ^= bv;
                    combo ^= bc;
                }
            }
            if v != 0 {
                reduced.push((v, combo));
                continue;
            }
            // b a = sum over bits k of b of b_k a.
            let ba = (0..d).filter(|&k| combo >> k & 1 == 1).fold(0, |acc, k| acc ^ right[k]);
            if ba != 0 {
                return true;
            }
        }
        false
    };
    let toggle = |i: usize, left: &mut [u32], right: &mut [u32]| {
        left.iter_mut().zip(unit_left[i]).for_each(|(x, y)| *x ^= y);
        right.iter_mut().zip(&unit_right[i]).for_each(|(x, y)| *x ^= y);
    };
    if 1u64 << d <= SCREEN_ALL {
        // Gray code: step k flips bit trailing_zeros(k).
        for k in 1..1u32 << d {
            toggle(k.trailing_zeros() as usize, &mut left, &mut right);
            if check(&left, &right, &mut reduced) {
                return true;
            }
        }
        return false;
    }
    for i in 0..d {
        for j in i..d {
            left.iter_mut().for_each(|x| *x = 0);
            right.iter_mut().for_each(|x| *x = 0);
            toggle(i, &mut left, &mut right);
            if j != i {
                toggle(j, &mut left, &mut right);
            }
            if check(&left, &right, &mut reduced) {
                return true;
            }
        }
    }
    false
}

fn dense_violation(p: u32, d: usize, table: &[Vec<u32>]) -> bool {
    let mul = |x: &[u32], y: &[u32]| -> Vec<u32> {
        let mut acc = vec![0u64; d];
        for (i, &xi) in x.iter().enumerate().filter(|(_, &c)| c != 0) {
            for (j, &yj) in y.iter().enumerate().filter(|(_, &c)| c != 0) {
                let k = xi as u64 * yj as u64 % p as u64;
                for (a, &c) in acc.iter_mut().zip(&table[i * d + j]) {
                    *a += k * c as u64;
                }
            }
        }
        acc.into_iter().map(|a| (a % p as u64) as u32).collect()
    };
    let unit = |i: usize| (0..d).map(|k| u32::from(k == i)).collect::<Vec<u32>>();
    let total = (p as u64).checked_pow(d as u32).unwrap_or(u64::MAX);
    let elements: Vec<Vec<u32>> = if total <= SCREEN_ALL {
        (1..total)
            .map(|mut n| {
                (0..d)
                    .map(|_| {
                        let c = (n % p as u64) as u32;
                        n /= p as u64;
                        c
                    })
                    .collect()
            })
            .collect()
    } else {
        let mut out: Vec<Vec<u32>> = (0..d).map(unit).collect();
        for i in 0..d {
            for j in i + 1..d {
                out.push((0..d).map(|k| u32::from(k == i || k == j)).collect());
            }
        }
        out
    };
    elements.iter().any(|a| {
        let columns: Vec<Vec<u32>> = (0..d).map(|j| mul(a, &unit(j))).collect();
        let kernel = FpMatrix::from_columns(p, d, &columns).kernel_basis();
        kernel.basis().iter().any(|b| mul(b, a).iter().any(|&c| c != 0))
    })
}

/// Whether truncated dims `(1, d1, ..., dk)` are consistent with a local
/// ring of D-sequence `target`.
pub(crate) fn matches_target(dims: &[u32], target: &[u32]) -> bool {
    let l = target.len();
    dims[1..].iter().enumerate().all(|(i, &d)| if i < l { d == target[i] } else { d == 0 })
}
