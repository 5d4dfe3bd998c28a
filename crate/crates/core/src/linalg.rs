//! Exact linear algebra over prime fields: row reduction, kernels, images and
//! subspace containment.

use crate::ring::{Element, FiniteRing, RingError};

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut base, mut exp, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    acc as u32
}

/// Dense matrix over `F_p`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        Self { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: u32, cols: usize, rows: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(p, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, v % p);
            }
        }
        m
    }

    pub fn from_columns(p: u32, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(p, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v % p);
            }
        }
        m
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        (0..self.rows)
            .map(|i| (self.row(i).iter().zip(v).map(|(&a, &b)| a as u64 * b as u64 % p).sum::<u64>() % p) as u32)
            .collect()
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p as u64;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = inv_mod(self.get(r, c), self.p) as u64;
            for j in c..self.cols {
                let v = self.get(r, j) as u64 * inv % p;
                self.set(r, j, v as u32);
            }
            for i in 0..self.rows {
                let f = self.get(i, c) as u64;
                if i == r || f == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let v = (self.get(i, j) as u64 + (p - f) * self.get(r, j) as u64) % p;
                    self.set(i, j, v as u32);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Null space `{x : Mx = 0}`.
    pub fn kernel_basis(&self) -> Subspace {
        let mut m = self.clone();
        let pivots = m.rref();
        let p = self.p;
        let mut vectors = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                let a = m.get(r, free);
                v[pc] = (p - a) % p;
            }
            vectors.push(v);
        }
        Subspace::span(p, self.cols, vectors)
    }

    /// Column space.
    pub fn image(&self) -> Subspace {
        Subspace::span(self.p, self.rows, (0..self.cols).map(|j| self.column(j)))
    }
}

/// Subspace of `F_p^n` kept as a reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    p: u32,
    ambient: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(p: u32, ambient: usize) -> Self {
        Self { p, ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(p: u32, ambient: usize) -> Self {
        Self::span(
            p,
            ambient,
            (0..ambient).map(|i| {
                let mut v = vec![0; ambient];
                v[i] = 1;
                v
            }),
        )
    }

    pub fn span(p: u32, ambient: usize, vectors: impl IntoIterator<Item = Vec<u32>>) -> Self {
        let mut s = Self::zero(p, ambient);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn size(&self) -> u128 {
        (self.p as u128).pow(self.dim() as u32)
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Reduces `v` against the echelon basis.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        let mut v: Vec<u32> = v.iter().map(|&x| x % self.p).collect();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = v[pc] as u64;
            if f == 0 {
                continue;
            }
            for (x, &r) in v.iter_mut().zip(row) {
                *x = ((*x as u64 + (p - f) * r as u64) % p) as u32;
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: Vec<u32>) -> bool {
        let mut r = self.reduce(&v);
        let Some(pc) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let p = self.p as u64;
        let inv = inv_mod(r[pc], self.p) as u64;
        r.iter_mut().for_each(|x| *x = (*x as u64 * inv % p) as u32);
        for row in &mut self.rows {
            let f = row[pc] as u64;
            if f != 0 {
                for (x, &y) in row.iter_mut().zip(&r) {
                    *x = ((*x as u64 + (p - f) * y as u64) % p) as u32;
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < pc);
        self.pivots.insert(at, pc);
        self.rows.insert(at, r);
        true
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|v| other.contains(v))
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        // Kernel of [A | -B] over the stacked bases.
        let p = self.p;
        let (a, b) = (self.dim(), other.dim());
        if a == 0 || b == 0 {
            return Subspace::zero(p, self.ambient);
        }
        let mut cols = Vec::with_capacity(a + b);
        cols.extend(self.rows.iter().cloned());
        cols.extend(other.rows.iter().map(|v| v.iter().map(|&x| (p - x) % p).collect()));
        let k = FpMatrix::from_columns(p, self.ambient, &cols).kernel_basis();
        let pp = p as u64;
        Subspace::span(
            p,
            self.ambient,
            k.rows.iter().map(|coef| {
                let mut v = vec![0u32; self.ambient];
                for (c, row) in coef[..a].iter().zip(&self.rows) {
                    for (x, &r) in v.iter_mut().zip(row) {
                        *x = ((*x as u64 + *c as u64 * r as u64) % pp) as u32;
                    }
                }
                v
            }),
        )
    }
}

pub fn kernel_basis(m: &FpMatrix) -> Subspace {
    m.kernel_basis()
}

/// `U <= V` as subspaces of the same ambient space.
pub fn subspace_leq(u: &Subspace, v: &Subspace) -> Result<bool, RingError> {
    if u.ambient != v.ambient || u.p != v.p {
        return Err(RingError::DimensionMismatch(u.ambient, v.ambient));
    }
    Ok(u.is_subspace_of(v))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// Matrix of `x -> a x` (left) or `x -> x a` (right) in the generator basis.
///
/// `ker` of the left operator is the right annihilator of `a`, and vice versa.
pub fn operator_matrix(ring: &FiniteRing, a: &Element, side: Side) -> Result<FpMatrix, RingError> {
    let p = ring
        .prime_field()
        .ok_or_else(|| RingError::BackendUnavailable("operator matrices need an F_p-algebra".into()))?;
    let t = ring.rank();
    let columns: Vec<Vec<u32>> = ring
        .generators()
        .iter()
        .map(|g| match side {
            Side::Left => ring.mul(a, g).0,
            Side::Right => ring.mul(g, a).0,
        })
        .collect();
    Ok(FpMatrix::from_columns(p, t, &columns))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_trivial_kernel() {
        assert_eq!(FpMatrix::identity(3, 4).kernel_basis().dim(), 0);
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let k = FpMatrix::zeros(2, 3, 3).kernel_basis();
        assert_eq!(k, Subspace::full(2, 3));
    }

    #[test]
    fn hand_solved_kernel_over_f2() {
        let m = FpMatrix::from_rows(2, 2, &[vec![1, 1], vec![0, 0]]);
        let k = m.kernel_basis();
        assert_eq!(k.basis(), &[vec![1, 1]]);
    }

    #[test]
    fn containment_basics() {
        let v = Subspace::span(2, 2, [vec![0, 1]]);
        let u = Subspace::span(2, 2, [vec![1, 0]]);
        let zero = Subspace::zero(2, 2);
        assert!(subspace_leq(&zero, &v).unwrap());
        assert!(subspace_leq(&v, &v).unwrap());
        assert!(!subspace_leq(&u, &v).unwrap());
        assert!(subspace_leq(&u, &Subspace::zero(2, 3)).is_err());
    }

    #[test]
    fn rank_nullity_over_f3() {
        let m = FpMatrix::from_rows(3, 3, &[vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 1]]);
        // Row 2 = 2 * row 1 mod 3.
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.dim(), 1);
        for v in k.basis() {
            assert!(m.mul_vec(v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn intersection_dimension() {
        let a = Subspace::span(2, 3, [vec![1, 0, 0], vec![0, 1, 0]]);
        let b = Subspace::span(2, 3, [vec![0, 1, 0], vec![0, 0, 1]]);
        let c = a.intersect(&b);
        assert_eq!(c.basis(), &[vec![0, 1, 0]]);
    }
}
