//! Dense linear algebra over the prime field F_p.
//!
//! Every object carries its modulus and binary operations check that the
//! moduli agree. Subspaces are stored in reduced row echelon form, so two
//! subspaces of the same ambient space are equal exactly when their stored
//! bases are equal.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// An odd prime modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p.is_multiple_of(2) || p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        Ok(Prime(p as u32))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// `(p - 1) / 2`.
    pub fn half(self) -> usize {
        (self.0 as usize - 1) / 2
    }

    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.0 as u64 - b as u64) % self.0 as u64) as u32
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32 % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero residue.
    pub fn inv(self, a: u32) -> u32 {
        assert!(
            !a.is_multiple_of(self.0),
            "zero has no inverse mod {}",
            self.0
        );
        self.pow(a, self.0 as u64 - 2)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn check_same(a: Prime, b: Prime) -> Result<()> {
    if a != b {
        return Err(Error::ModulusMismatch {
            left: a.get(),
            right: b.get(),
        });
    }
    Ok(())
}

/// A dense `rows x cols` matrix over F_p, stored row-major.
///
/// Matrices act on column vectors: column `j` is the image of the `j`-th
/// basis vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: Prime,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(p: Prime, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_fn(
        p: Prime,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> i64,
    ) -> Self {
        let mut m = Self::zeros(p, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = p.reduce(f(i, j));
            }
        }
        m
    }

    /// Builds a matrix from integer rows, reducing every entry mod p.
    pub fn from_rows<R: AsRef<[i64]>>(p: Prime, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    context: "matrix row length",
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r.iter().map(|&x| p.reduce(x)));
        }
        Ok(FpMatrix {
            p,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix whose rows are the given residue vectors.
    pub fn from_residue_rows(p: Prime, cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    context: "matrix row length",
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r.iter().map(|&x| x % p.get()));
        }
        Ok(FpMatrix {
            p,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix whose columns are the given residue vectors.
    pub fn from_columns(p: Prime, rows: usize, columns: &[Vec<u32>]) -> Result<Self> {
        Ok(Self::from_residue_rows(p, rows, columns)?.transpose())
    }

    pub fn prime(&self) -> Prime {
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

    pub fn set(&mut self, i: usize, j: usize, value: i64) {
        self.data[i * self.cols + j] = self.p.reduce(value);
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.p, self.rows)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn scale(&self, c: u32) -> Self {
        let p = self.p;
        FpMatrix {
            data: self.data.iter().map(|&x| p.mul(x, c % p.get())).collect(),
            ..self.clone()
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other, "matrix addition")?;
        let p = self.p;
        Ok(FpMatrix {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| p.add(a, b))
                .collect(),
            ..self.clone()
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_shape(other, "matrix subtraction")?;
        let p = self.p;
        Ok(FpMatrix {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| p.sub(a, b))
                .collect(),
            ..self.clone()
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        check_same(self.p, other.p)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                expected: self.cols,
                found: other.rows,
            });
        }
        let p = self.p.get() as u64;
        let mut out = Self::zeros(self.p, self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|x| *x = 0);
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                for (x, &b) in acc.iter_mut().zip(other.row(k)) {
                    *x = (*x + a * b as u64) % p;
                }
            }
            for (j, &x) in acc.iter().enumerate() {
                out.data[i * other.cols + j] = x as u32;
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: "matrix-vector product",
                expected: self.cols,
                found: v.len(),
            });
        }
        let p = self.p.get() as u64;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p)
                    as u32
            })
            .collect())
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        assert_eq!(self.rows, self.cols, "pow needs a square matrix");
        let mut base = self.clone();
        let mut acc = Self::identity(self.p, self.rows);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        check_same(self.p, other.p)?;
        let p = self.p;
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Self::zeros(p, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.data[(i * other.rows + k) * c + j * other.cols + l] =
                            p.mul(a, other.get(k, l));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Stacks matrices vertically. All inputs must share `cols`.
    pub fn vstack(p: Prime, cols: usize, blocks: &[&FpMatrix]) -> Result<Self> {
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            check_same(p, b.p)?;
            if b.cols != cols {
                return Err(Error::DimensionMismatch {
                    context: "vertical stacking",
                    expected: cols,
                    found: b.cols,
                });
            }
            data.extend_from_slice(&b.data);
            rows += b.rows;
        }
        Ok(FpMatrix {
            p,
            rows,
            cols,
            data,
        })
    }

    /// Stacks matrices horizontally. All inputs must share `rows`.
    pub fn hstack(p: Prime, rows: usize, blocks: &[&FpMatrix]) -> Result<Self> {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(p, rows, cols);
        let mut offset = 0;
        for b in blocks {
            check_same(p, b.p)?;
            if b.rows != rows {
                return Err(Error::DimensionMismatch {
                    context: "horizontal stacking",
                    expected: rows,
                    found: b.rows,
                });
            }
            for i in 0..rows {
                out.data[i * cols + offset..i * cols + offset + b.cols].copy_from_slice(b.row(i));
            }
            offset += b.cols;
        }
        Ok(out)
    }

    /// The sub-block with the given row and column ranges.
    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let mut out = Self::zeros(self.p, rows.len(), cols.len());
        for (oi, i) in rows.enumerate() {
            out.data[oi * out.cols..(oi + 1) * out.cols]
                .copy_from_slice(&self.row(i)[cols.clone()]);
        }
        out
    }

    /// Row-reduces in place and returns the pivot columns. With `full`
    /// set the result is the reduced echelon form; otherwise only rows below
    /// each pivot are cleared, which is enough to read off the rank.
    fn eliminate(&mut self, full: bool) -> Vec<usize> {
        let p = self.p;
        let pu = p.get() as u64;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        let mut pivot_row = vec![0u32; cols];
        for c in 0..cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in c..cols {
                    self.data.swap(r * cols + j, pr * cols + j);
                }
            }
            let inv = p.inv(self.data[r * cols + c]) as u64;
            for j in c..cols {
                let x = &mut self.data[r * cols + j];
                *x = ((*x as u64 * inv) % pu) as u32;
            }
            pivot_row[c..].copy_from_slice(&self.data[r * cols + c..(r + 1) * cols]);
            let start = if full { 0 } else { r + 1 };
            for i in start..self.rows {
                if i == r {
                    continue;
                }
                let f = self.data[i * cols + c] as u64;
                if f == 0 {
                    continue;
                }
                let f = pu - f;
                let row = &mut self.data[i * cols + c..(i + 1) * cols];
                for (x, &y) in row.iter_mut().zip(&pivot_row[c..]) {
                    if y != 0 {
                        *x = ((*x as u64 + f * y as u64) % pu) as u32;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// The reduced row echelon form (same shape; zero rows at the bottom).
    pub fn rref(&self) -> Self {
        let mut m = self.clone();
        m.eliminate(true);
        m
    }

    /// Reduced row echelon form together with its pivot columns.
    pub fn rref_with_pivots(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.eliminate(true);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.eliminate(false).len()
    }

    /// Right null space `{v : self * v = 0}`.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref_with_pivots();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let p = self.p;
        let vectors: Vec<Vec<u32>> = (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![0u32; self.cols];
                v[f] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = p.neg(r.get(i, f));
                }
                v
            })
            .collect();
        Subspace::from_vectors(p, self.cols, &vectors).expect("kernel vectors have ambient length")
    }

    /// Column space.
    pub fn image(&self) -> Subspace {
        Subspace::from_matrix_rows(&self.transpose())
    }

    /// Some `x` with `self * x = v`, or `None` when the system is inconsistent.
    pub fn solve(&self, v: &[u32]) -> Result<Option<Vec<u32>>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch {
                context: "solve right-hand side",
                expected: self.rows,
                found: v.len(),
            });
        }
        let rhs = FpMatrix::from_columns(self.p, self.rows, &[v.to_vec()])?;
        let aug = FpMatrix::hstack(self.p, self.rows, &[self, &rhs])?;
        let (r, pivots) = aug.rref_with_pivots();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0u32; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols);
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = FpMatrix::hstack(self.p, n, &[self, &Self::identity(self.p, n)]).ok()?;
        let (r, pivots) = aug.rref_with_pivots();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.submatrix(0..n, n..2 * n))
    }

    fn check_shape(&self, other: &Self, context: &'static str) -> Result<()> {
        check_same(self.p, other.p)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix mod {} ({}x{})", self.p, self.rows, self.cols)?;
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(u32::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

// Operator forms panic on shape or modulus mismatch; use the `checked_*`
// methods on untrusted input.
impl Mul for &FpMatrix {
    type Output = FpMatrix;
    fn mul(self, rhs: &FpMatrix) -> FpMatrix {
        self.checked_mul(rhs).expect("matrix product")
    }
}

impl Add for &FpMatrix {
    type Output = FpMatrix;
    fn add(self, rhs: &FpMatrix) -> FpMatrix {
        self.checked_add(rhs).expect("matrix sum")
    }
}

impl Sub for &FpMatrix {
    type Output = FpMatrix;
    fn sub(self, rhs: &FpMatrix) -> FpMatrix {
        self.checked_sub(rhs).expect("matrix difference")
    }
}

impl Neg for &FpMatrix {
    type Output = FpMatrix;
    fn neg(self) -> FpMatrix {
        self.scale(self.p.get() - 1)
    }
}

/// A subspace of F_p^n held as a reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: FpMatrix,
}

impl Subspace {
    pub fn zero(p: Prime, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: FpMatrix::zeros(p, 0, ambient),
        }
    }

    pub fn full(p: Prime, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: FpMatrix::identity(p, ambient),
        }
    }

    /// The row space of `m`.
    pub fn from_matrix_rows(m: &FpMatrix) -> Self {
        let (r, pivots) = m.rref_with_pivots();
        Subspace {
            ambient: m.cols(),
            basis: r.submatrix(0..pivots.len(), 0..m.cols()),
        }
    }

    pub fn from_vectors(p: Prime, ambient: usize, vectors: &[Vec<u32>]) -> Result<Self> {
        Ok(Self::from_matrix_rows(&FpMatrix::from_residue_rows(
            p, ambient, vectors,
        )?))
    }

    pub fn prime(&self) -> Prime {
        self.basis.prime()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<u32>> {
        self.basis.row_vectors()
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.dim())
            .map(|i| {
                self.basis
                    .row(i)
                    .iter()
                    .position(|&x| x != 0)
                    .expect("basis rows are nonzero")
            })
            .collect()
    }

    fn check_vector(&self, v: &[u32]) -> Result<()> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch {
                context: "subspace membership",
                expected: self.ambient,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[u32]) -> Result<Option<Vec<u32>>> {
        self.check_vector(v)?;
        let p = self.prime();
        let mut rest: Vec<u32> = v.iter().map(|&x| x % p.get()).collect();
        let mut coords = Vec::with_capacity(self.dim());
        for (i, pc) in self.pivots().into_iter().enumerate() {
            let c = rest[pc];
            coords.push(c);
            if c != 0 {
                for (x, &b) in rest.iter_mut().zip(self.basis.row(i)) {
                    *x = p.sub(*x, p.mul(c, b));
                }
            }
        }
        Ok(rest.iter().all(|&x| x == 0).then_some(coords))
    }

    pub fn contains(&self, v: &[u32]) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        self.check_compatible(other)?;
        for v in self.basis_vectors() {
            if !other.contains(&v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let stacked = FpMatrix::vstack(self.prime(), self.ambient, &[&self.basis, &other.basis])?;
        Ok(Subspace::from_matrix_rows(&stacked))
    }

    /// Intersection by the Zassenhaus method: reduce `[[A, A], [B, 0]]` and
    /// read the intersection off the rows whose left half vanishes.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let p = self.prime();
        let n = self.ambient;
        let top = FpMatrix::hstack(p, self.dim(), &[&self.basis, &self.basis])?;
        let bottom = FpMatrix::hstack(
            p,
            other.dim(),
            &[&other.basis, &FpMatrix::zeros(p, other.dim(), n)],
        )?;
        let (r, pivots) = FpMatrix::vstack(p, 2 * n, &[&top, &bottom])?.rref_with_pivots();
        let rows: Vec<Vec<u32>> = pivots
            .iter()
            .enumerate()
            .filter(|(_, &pc)| pc >= n)
            .map(|(i, _)| r.row(i)[n..].to_vec())
            .collect();
        Subspace::from_vectors(p, n, &rows)
    }

    /// Image of the subspace under a linear map given as a matrix.
    pub fn map(&self, m: &FpMatrix) -> Result<Subspace> {
        if m.cols() != self.ambient {
            return Err(Error::DimensionMismatch {
                context: "subspace image",
                expected: self.ambient,
                found: m.cols(),
            });
        }
        let images = (&self.basis.clone() * &m.transpose()).transpose();
        Ok(images.image())
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        check_same(self.prime(), other.prime())?;
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                context: "ambient dimension",
                expected: self.ambient,
                found: other.ambient,
            });
        }
        Ok(())
    }
}

/// `a * u + v` for vectors over F_p.
pub fn axpy(p: Prime, a: u32, u: &[u32], v: &[u32]) -> Vec<u32> {
    u.iter()
        .zip(v)
        .map(|(&x, &y)| p.add(p.mul(a, x), y))
        .collect()
}
