//! Elementary abelian groups Q = (Z/p)^n, Q-modules over F_p, normalized
//! 2-cocycles, the data (a_i, c_jk) classifying an extension of Q by a
//! module, and bar-resolution cohomology in degrees at most two.
//!
//! Modules are written additively and Q acts on the left. Generator
//! matrices act on column vectors.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fp::{check_same, FpMatrix, Prime};

/// `(Z/p)^rank` with generators τ_0, ..., τ_{rank-1}.
///
/// Elements are exponent vectors, indexed lexicographically with τ_0 the
/// most significant digit; index 0 is the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QGroup {
    p: Prime,
    rank: usize,
}

impl QGroup {
    pub fn new(p: Prime, rank: usize) -> Self {
        QGroup { p, rank }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        (self.p.get() as usize).pow(self.rank as u32)
    }

    pub fn exponents(&self, index: usize) -> Vec<u32> {
        let p = self.p.get() as usize;
        let mut e = vec![0u32; self.rank];
        let mut rest = index;
        for slot in e.iter_mut().rev() {
            *slot = (rest % p) as u32;
            rest /= p;
        }
        e
    }

    pub fn index(&self, exponents: &[u32]) -> usize {
        let p = self.p.get() as usize;
        exponents
            .iter()
            .fold(0, |acc, &e| acc * p + (e as usize % p))
    }

    pub fn generator(&self, i: usize) -> usize {
        let mut e = vec![0u32; self.rank];
        e[i] = 1;
        self.index(&e)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let (ea, eb) = (self.exponents(a), self.exponents(b));
        let e: Vec<u32> = ea
            .iter()
            .zip(&eb)
            .map(|(&x, &y)| self.p.add(x, y))
            .collect();
        self.index(&e)
    }

    pub fn power(&self, a: usize, k: u32) -> usize {
        let e: Vec<u32> = self
            .exponents(a)
            .iter()
            .map(|&x| self.p.mul(x, k % self.p.get()))
            .collect();
        self.index(&e)
    }
}

/// A finite-dimensional F_p[Q]-module given by one matrix per generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QModule {
    p: Prime,
    dim: usize,
    generators: Vec<FpMatrix>,
}

impl QModule {
    /// Checks that every matrix is `dim x dim`, has order dividing p, and
    /// that the matrices commute pairwise.
    pub fn new(p: Prime, dim: usize, generators: Vec<FpMatrix>) -> Result<Self> {
        let id = FpMatrix::identity(p, dim);
        for (i, g) in generators.iter().enumerate() {
            check_same(p, g.prime())?;
            if g.rows() != dim || g.cols() != dim {
                return Err(Error::InvalidModule(format!(
                    "M[{i}] is {}x{}, expected {dim}x{dim}",
                    g.rows(),
                    g.cols()
                )));
            }
            if g.pow(p.get() as u64) != id {
                return Err(Error::InvalidModule(format!(
                    "M[{i}] does not have order dividing {p}"
                )));
            }
        }
        for i in 0..generators.len() {
            for j in i + 1..generators.len() {
                if &generators[i] * &generators[j] != &generators[j] * &generators[i] {
                    return Err(Error::InvalidModule(format!(
                        "M[{i}] and M[{j}] do not commute"
                    )));
                }
            }
        }
        Ok(QModule { p, dim, generators })
    }

    /// Builds a module from matrices whose row `i` is the image of basis
    /// vector `i`.
    pub fn from_row_convention(p: Prime, dim: usize, rows: Vec<FpMatrix>) -> Result<Self> {
        Self::new(p, dim, rows.iter().map(FpMatrix::transpose).collect())
    }

    pub fn trivial(p: Prime, rank: usize, dim: usize) -> Self {
        QModule {
            p,
            dim,
            generators: vec![FpMatrix::identity(p, dim); rank],
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn group(&self) -> QGroup {
        QGroup::new(self.p, self.rank())
    }

    pub fn generators(&self) -> &[FpMatrix] {
        &self.generators
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(FpMatrix::is_identity)
    }

    /// Action matrix of every element of Q, by index.
    pub fn action_matrices(&self) -> Vec<FpMatrix> {
        let q = self.group();
        (0..q.order())
            .map(|idx| {
                q.exponents(idx)
                    .iter()
                    .zip(&self.generators)
                    .fold(FpMatrix::identity(self.p, self.dim), |acc, (&e, g)| {
                        &acc * &g.pow(e as u64)
                    })
            })
            .collect()
    }

    /// The fixed subspace `N^Q`.
    pub fn invariants(&self) -> crate::fp::Subspace {
        let id = FpMatrix::identity(self.p, self.dim);
        let blocks: Vec<FpMatrix> = self.generators.iter().map(|g| g - &id).collect();
        let refs: Vec<&FpMatrix> = blocks.iter().collect();
        FpMatrix::vstack(self.p, self.dim, &refs)
            .expect("generator blocks share a width")
            .kernel()
    }

    /// The quotient onto the first `l` coordinates, valid when the span of
    /// the remaining coordinates is a submodule. Returns the quotient and
    /// the `l x dim` surjection.
    pub fn leading_quotient(&self, l: usize) -> Result<(QModule, FpMatrix)> {
        if l > self.dim {
            return Err(Error::OutOfRange(format!(
                "quotient dimension {l} exceeds {}",
                self.dim
            )));
        }
        let mut blocks = Vec::with_capacity(self.rank());
        for (i, g) in self.generators.iter().enumerate() {
            for r in 0..l {
                for c in l..self.dim {
                    if g.get(r, c) != 0 {
                        return Err(Error::NotInvariant(format!(
                            "M[{i}] sends basis vector {c} outside the trailing span"
                        )));
                    }
                }
            }
            blocks.push(g.submatrix(0..l, 0..l));
        }
        let surjection = FpMatrix::identity(self.p, self.dim).submatrix(0..l, 0..self.dim);
        Ok((QModule::new(self.p, l, blocks)?, surjection))
    }

    /// Checks `surjection * g = g' * surjection` for every generator.
    pub fn is_equivariant(&self, target: &QModule, map: &FpMatrix) -> Result<bool> {
        if self.rank() != target.rank() || map.cols() != self.dim || map.rows() != target.dim {
            return Err(Error::DimensionMismatch {
                context: "equivariant map shape",
                expected: target.dim * self.dim,
                found: map.rows() * map.cols(),
            });
        }
        Ok(self
            .generators
            .iter()
            .zip(&target.generators)
            .all(|(g, h)| map * g == h * map))
    }
}

/// The vectors `a_i = s(τ_i)^p` and `c_jk = [s(τ_k), s(τ_j)]` for `j < k`,
/// in additive notation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionClassData {
    p: Prime,
    dim: usize,
    a: Vec<Vec<u32>>,
    c: BTreeMap<(usize, usize), Vec<u32>>,
}

impl ExtensionClassData {
    pub fn new(
        p: Prime,
        dim: usize,
        a: Vec<Vec<u32>>,
        c: BTreeMap<(usize, usize), Vec<u32>>,
    ) -> Result<Self> {
        let rank = a.len();
        for (i, v) in a.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::InvalidExtension(format!(
                    "a[{i}] has length {}, expected {dim}",
                    v.len()
                )));
            }
        }
        for j in 0..rank {
            for k in j + 1..rank {
                match c.get(&(j, k)) {
                    None => return Err(Error::InvalidExtension(format!("c[{j},{k}] is missing"))),
                    Some(v) if v.len() != dim => {
                        return Err(Error::InvalidExtension(format!(
                            "c[{j},{k}] has length {}, expected {dim}",
                            v.len()
                        )))
                    }
                    Some(_) => {}
                }
            }
        }
        if c.len() != rank * rank.saturating_sub(1) / 2 {
            return Err(Error::InvalidExtension(
                "c has entries outside 0 <= j < k < rank".into(),
            ));
        }
        let reduce = |v: Vec<u32>| v.into_iter().map(|x| x % p.get()).collect::<Vec<_>>();
        Ok(ExtensionClassData {
            p,
            dim,
            a: a.into_iter().map(reduce).collect(),
            c: c.into_iter().map(|(key, v)| (key, reduce(v))).collect(),
        })
    }

    pub fn zero(p: Prime, rank: usize, dim: usize) -> Self {
        let a = vec![vec![0; dim]; rank];
        let c = pairs(rank).map(|key| (key, vec![0; dim])).collect();
        ExtensionClassData { p, dim, a, c }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self, i: usize) -> &[u32] {
        &self.a[i]
    }

    pub fn c(&self, j: usize, k: usize) -> &[u32] {
        &self.c[&(j, k)]
    }

    pub fn a_vectors(&self) -> &[Vec<u32>] {
        &self.a
    }

    pub fn c_vectors(&self) -> &BTreeMap<(usize, usize), Vec<u32>> {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.a
            .iter()
            .chain(self.c.values())
            .all(|v| v.iter().all(|&x| x == 0))
    }

    pub fn negate(&self) -> Self {
        self.map_vectors(|v| v.iter().map(|&x| self.p.neg(x)).collect())
    }

    /// Pushes every vector forward along a linear map `N → N'`.
    pub fn push_forward(&self, map: &FpMatrix) -> Result<Self> {
        if map.cols() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "extension data push-forward",
                expected: self.dim,
                found: map.cols(),
            });
        }
        let mut out = self.map_vectors(|v| map.mul_vec(v).expect("checked width"));
        out.dim = map.rows();
        Ok(out)
    }

    fn map_vectors(&self, f: impl Fn(&Vec<u32>) -> Vec<u32>) -> Self {
        ExtensionClassData {
            p: self.p,
            dim: self.dim,
            a: self.a.iter().map(&f).collect(),
            c: self.c.iter().map(|(&key, v)| (key, f(v))).collect(),
        }
    }
}

fn pairs(rank: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..rank).flat_map(move |j| (j + 1..rank).map(move |k| (j, k)))
}

/// A normalized 2-cochain `Q x Q → N`, stored as `|Q|^2` vectors indexed by
/// `q1 * |Q| + q2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCocycle {
    group: QGroup,
    module: QModule,
    table: Vec<Vec<u32>>,
}

impl TwoCocycle {
    pub fn zero(module: &QModule) -> Self {
        let group = module.group();
        let n = group.order();
        TwoCocycle {
            group,
            module: module.clone(),
            table: vec![vec![0; module.dim()]; n * n],
        }
    }

    /// Tabulates `f(q1, q2)` over all pairs of element indices.
    pub fn from_fn(module: &QModule, mut f: impl FnMut(usize, usize) -> Vec<u32>) -> Result<Self> {
        let mut w = Self::zero(module);
        let n = w.group.order();
        for q1 in 0..n {
            for q2 in 0..n {
                w.set(q1, q2, f(q1, q2))?;
            }
        }
        Ok(w)
    }

    pub fn group(&self) -> QGroup {
        self.group
    }

    pub fn module(&self) -> &QModule {
        &self.module
    }

    pub fn get(&self, q1: usize, q2: usize) -> &[u32] {
        &self.table[q1 * self.group.order() + q2]
    }

    pub fn set(&mut self, q1: usize, q2: usize, value: Vec<u32>) -> Result<()> {
        if value.len() != self.module.dim() {
            return Err(Error::DimensionMismatch {
                context: "cocycle value",
                expected: self.module.dim(),
                found: value.len(),
            });
        }
        let p = self.module.prime();
        let n = self.group.order();
        self.table[q1 * n + q2] = value.into_iter().map(|x| x % p.get()).collect();
        Ok(())
    }

    pub fn checked_add(&self, other: &TwoCocycle) -> Result<TwoCocycle> {
        if self.module != other.module {
            return Err(Error::InvalidCocycle(
                "cocycles have different target modules".into(),
            ));
        }
        let p = self.module.prime();
        let table = self
            .table
            .iter()
            .zip(&other.table)
            .map(|(u, v)| u.iter().zip(v).map(|(&x, &y)| p.add(x, y)).collect())
            .collect();
        Ok(TwoCocycle {
            group: self.group,
            module: self.module.clone(),
            table,
        })
    }

    /// Normalization and the cocycle identity
    /// `q1·ω(q2,q3) − ω(q1q2,q3) + ω(q1,q2q3) − ω(q1,q2) = 0` on all triples.
    pub fn check_cocycle(&self) -> bool {
        let q = self.group;
        let n = q.order();
        let zero = |v: &[u32]| v.iter().all(|&x| x == 0);
        if (0..n).any(|g| !zero(self.get(g, 0)) || !zero(self.get(0, g))) {
            return false;
        }
        let p = self.module.prime();
        let actions = self.module.action_matrices();
        for (q1, act) in actions.iter().enumerate() {
            for q2 in 0..n {
                let q12 = q.mul(q1, q2);
                for q3 in 0..n {
                    let moved = act.mul_vec(self.get(q2, q3)).expect("module dimension");
                    let a = self.get(q12, q3);
                    let b = self.get(q1, q.mul(q2, q3));
                    let c = self.get(q1, q2);
                    for k in 0..moved.len() {
                        if p.sub(p.add(moved[k], b[k]), p.add(a[k], c[k])) != 0 {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// `a_i = Σ_{l=1}^{p-1} ω(τ_i^l, τ_i)` and `c_jk = ω(τ_k, τ_j) − ω(τ_j, τ_k)`.
    pub fn extract_extension_data(&self) -> Result<ExtensionClassData> {
        if !self.check_cocycle() {
            return Err(Error::InvalidCocycle(
                "normalization or cocycle identity fails".into(),
            ));
        }
        let q = self.group;
        let p = self.module.prime();
        let dim = self.module.dim();
        let a = (0..q.rank())
            .map(|i| {
                let t = q.generator(i);
                (1..p.get()).fold(vec![0u32; dim], |acc, l| {
                    crate::fp::axpy(p, 1, self.get(q.power(t, l), t), &acc)
                })
            })
            .collect();
        let c = pairs(q.rank())
            .map(|(j, k)| {
                let (tj, tk) = (q.generator(j), q.generator(k));
                let v = crate::fp::axpy(p, p.get() - 1, self.get(tj, tk), self.get(tk, tj));
                ((j, k), v)
            })
            .collect();
        ExtensionClassData::new(p, dim, a, c)
    }

    /// The coboundary `(dφ)(g, h) = g·φ(h) − φ(gh) + φ(g)` of a 1-cochain
    /// with `φ(1) = 0`, given as one vector per element index.
    pub fn coboundary_of(module: &QModule, phi: &[Vec<u32>]) -> Result<TwoCocycle> {
        let q = module.group();
        let p = module.prime();
        if phi.len() != q.order() || phi.iter().any(|v| v.len() != module.dim()) {
            return Err(Error::DimensionMismatch {
                context: "1-cochain table",
                expected: q.order() * module.dim(),
                found: phi.iter().map(Vec::len).sum(),
            });
        }
        if phi[0].iter().any(|&x| x % p.get() != 0) {
            return Err(Error::InvalidCocycle("1-cochain is not normalized".into()));
        }
        let actions = module.action_matrices();
        Self::from_fn(module, |g, h| {
            let moved = actions[g].mul_vec(&phi[h]).expect("module dimension");
            let s = crate::fp::axpy(p, p.get() - 1, &phi[q.mul(g, h)], &moved);
            crate::fp::axpy(p, 1, &phi[g], &s)
        })
    }

    /// A normalized cocycle realizing the presentation
    /// `s_i^p = a_i`, `s_k s_j = c_jk s_j s_k` (j < k), `s_k n s_k^{-1} = τ_k·n`,
    /// with section `t(q) = s_0^{e_0} ⋯ s_r^{e_r}`. Fails when the data do not
    /// define a group, which shows up as a broken cocycle identity.
    pub fn from_presentation(module: &QModule, ext: &ExtensionClassData) -> Result<TwoCocycle> {
        check_same(module.prime(), ext.prime())?;
        if ext.rank() != module.rank() || ext.dim() != module.dim() {
            return Err(Error::InvalidExtension(format!(
                "extension data of rank {} and dimension {} do not match the module",
                ext.rank(),
                ext.dim()
            )));
        }
        let q = module.group();
        let actions = module.action_matrices();
        let collector = Collector {
            q,
            p: module.prime(),
            actions: &actions,
            ext,
        };
        let w = Self::from_fn(module, |q1, q2| collector.product(q1, q2))?;
        if !w.check_cocycle() {
            return Err(Error::InvalidExtension(
                "the presentation is inconsistent: its collected products violate the cocycle identity".into(),
            ));
        }
        Ok(w)
    }
}

/// Multiplies normal forms `n · s_0^{e_0} ⋯ s_r^{e_r}` in the extension.
struct Collector<'a> {
    q: QGroup,
    p: Prime,
    actions: &'a [FpMatrix],
    ext: &'a ExtensionClassData,
}

impl Collector<'_> {
    /// The N-part of `t(q1) t(q2)` in normal form.
    fn product(&self, q1: usize, q2: usize) -> Vec<u32> {
        let mut n = vec![0u32; self.ext.dim()];
        let mut e = self.q.exponents(q1);
        for (j, &times) in self.q.exponents(q2).iter().enumerate() {
            for _ in 0..times {
                self.multiply_generator(&mut n, &mut e, j);
            }
        }
        n
    }

    /// Adds `prefix · x` to `n`, where `prefix` is the exponent vector of the
    /// word standing to the left of `x`.
    fn bring_forward(&self, n: &mut Vec<u32>, prefix: &[u32], x: &[u32]) {
        let moved = self.actions[self.q.index(prefix)]
            .mul_vec(x)
            .expect("module dimension");
        *n = crate::fp::axpy(self.p, 1, &moved, n);
    }

    /// Right-multiplies the normal form `(n, e)` by `s_j`.
    fn multiply_generator(&self, n: &mut Vec<u32>, e: &mut [u32], j: usize) {
        // Move s_j left through the letters of s_{j+1}^{e_{j+1}} ⋯ s_r^{e_r},
        // rightmost first; each swap s_k s_j = c_jk s_j s_k emits c_jk.
        let mut prefix = e.to_vec();
        for k in (j + 1..e.len()).rev() {
            for _ in 0..e[k] {
                prefix[k] -= 1;
                self.bring_forward(n, &prefix, self.ext.c(j, k));
            }
        }
        if e[j] + 1 == self.p.get() {
            let mut before = vec![0u32; e.len()];
            before[..j].copy_from_slice(&e[..j]);
            self.bring_forward(n, &before, self.ext.a(j));
            e[j] = 0;
        } else {
            e[j] += 1;
        }
    }
}

/// Normalized cochains `C^k`: maps `(Q \ 1)^k → M`. Returns the list of
/// argument tuples (as element indices) in column order.
fn nontrivial_tuples(q: &QGroup, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..q.order()).map(move |g| {
                    let mut t = t.clone();
                    t.push(g);
                    t
                })
            })
            .collect();
    }
    out
}

/// Matrix of the bar coboundary `d^k : C^k → C^{k+1}` on normalized cochains.
/// Cochain coordinates are (tuple index) * dim + module coordinate.
pub fn coboundary_matrix(m: &QModule, k: usize) -> FpMatrix {
    let q = m.group();
    let p = m.prime();
    let d = m.dim();
    let src = nontrivial_tuples(&q, k);
    let dst = nontrivial_tuples(&q, k + 1);
    let nt = q.order() - 1;
    let col_of = |t: &[usize]| -> Option<usize> {
        if t.contains(&0) {
            return None;
        }
        Some(t.iter().fold(0, |acc, &g| acc * nt + (g - 1)))
    };
    let actions = m.action_matrices();
    let mut out = FpMatrix::zeros(p, dst.len() * d, src.len() * d);
    let add =
        |out: &mut FpMatrix, row_tuple: usize, col_tuple: usize, block: &FpMatrix, sign: i64| {
            for r in 0..d {
                for c in 0..d {
                    let v = block.get(r, c) as i64;
                    if v != 0 {
                        let (i, j) = (row_tuple * d + r, col_tuple * d + c);
                        let cur = out.get(i, j) as i64;
                        out.set(i, j, cur + sign * v);
                    }
                }
            }
        };
    let id = FpMatrix::identity(p, d);
    for (ri, g) in dst.iter().enumerate() {
        if let Some(c) = col_of(&g[1..]) {
            add(&mut out, ri, c, &actions[g[0]], 1);
        }
        for i in 0..k {
            let mut merged = g[..i].to_vec();
            merged.push(q.mul(g[i], g[i + 1]));
            merged.extend_from_slice(&g[i + 2..]);
            if let Some(c) = col_of(&merged) {
                add(&mut out, ri, c, &id, if i % 2 == 0 { -1 } else { 1 });
            }
        }
        if let Some(c) = col_of(&g[..k]) {
            add(
                &mut out,
                ri,
                c,
                &id,
                if k.is_multiple_of(2) { -1 } else { 1 },
            );
        }
    }
    out
}

/// `dim H^k(Q, M)` from normalized bar cochains, for `k <= 2`.
pub fn bar_cohomology_dim(m: &QModule, k: usize) -> Result<usize> {
    if k > 2 {
        return Err(Error::OutOfRange(format!(
            "cohomology degree {k} exceeds 2"
        )));
    }
    let dk = coboundary_matrix(m, k);
    let cocycles = dk.cols() - dk.rank();
    let boundaries = if k == 0 {
        0
    } else {
        coboundary_matrix(m, k - 1).rank()
    };
    Ok(cocycles - boundaries)
}

/// A module together with optional extension data, as read from an N-data
/// file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NData {
    pub module: QModule,
    pub extension: Option<ExtensionClassData>,
}

impl NData {
    /// Parses the N-data format:
    ///
    /// ```text
    /// p = 3
    /// rank = 2
    /// dim = 2
    /// M[0]
    /// 1 1
    /// 0 1
    /// M[1]
    /// 1 0
    /// 0 1
    /// a[0] = [0, 1]
    /// a[1] = [0, 0]
    /// c[0,1] = [1, 0]
    /// ```
    ///
    /// Matrix row `i` is the image of basis vector `i`. The `a` and `c`
    /// lines are optional but must be complete when present.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: BTreeMap<&str, (usize, u64)> = BTreeMap::new();
        let mut blocks: Vec<(usize, Vec<Vec<i64>>)> = Vec::new();
        let mut a: BTreeMap<usize, (usize, Vec<i64>)> = BTreeMap::new();
        let mut c: BTreeMap<(usize, usize), (usize, Vec<i64>)> = BTreeMap::new();
        let mut open_block: Option<usize> = None;

        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(idx) = bracket_index(line, "M") {
                let idx = idx.map_err(|m| Error::parse(line_no, m))?;
                if idx != blocks.len() {
                    return Err(Error::parse(
                        line_no,
                        format!("expected M[{}], found M[{idx}]", blocks.len()),
                    ));
                }
                blocks.push((line_no, Vec::new()));
                open_block = Some(idx);
                continue;
            }
            if let Some((key, value)) = line.split_once('=') {
                open_block = None;
                let (key, value) = (key.trim(), value.trim());
                match key {
                    "p" | "rank" | "dim" => {
                        let v: u64 = value.parse().map_err(|_| {
                            Error::parse(line_no, format!("invalid {key} value {value:?}"))
                        })?;
                        if header.insert(key, (line_no, v)).is_some() {
                            return Err(Error::parse(line_no, format!("{key} given twice")));
                        }
                    }
                    _ => {
                        let vector = parse_vector(value).map_err(|m| Error::parse(line_no, m))?;
                        if let Some(i) = bracket_index(key, "a") {
                            let i = i.map_err(|m| Error::parse(line_no, m))?;
                            a.insert(i, (line_no, vector));
                        } else if let Some(rest) =
                            key.strip_prefix("c[").and_then(|s| s.strip_suffix(']'))
                        {
                            let (j, kk) = rest
                                .split_once(',')
                                .and_then(|(j, kk)| {
                                    Some((j.trim().parse().ok()?, kk.trim().parse().ok()?))
                                })
                                .ok_or_else(|| {
                                    Error::parse(line_no, format!("invalid key {key:?}"))
                                })?;
                            c.insert((j, kk), (line_no, vector));
                        } else {
                            return Err(Error::parse(line_no, format!("unknown key {key:?}")));
                        }
                    }
                }
                continue;
            }
            let Some(_) = open_block else {
                return Err(Error::parse(line_no, format!("unexpected line {line:?}")));
            };
            let row = parse_vector(line).map_err(|m| Error::parse(line_no, m))?;
            blocks.last_mut().expect("open block").1.push(row);
        }

        let get = |key: &str| {
            header
                .get(key)
                .copied()
                .ok_or_else(|| Error::parse(1, format!("missing {key} line")))
        };
        let (_, pv) = get("p")?;
        let p = Prime::new(pv)?;
        let (rank_line, rank) = get("rank")?;
        let (_, dim) = get("dim")?;
        let (rank, dim) = (rank as usize, dim as usize);
        if blocks.len() != rank {
            return Err(Error::parse(
                rank_line,
                format!("rank is {rank} but {} matrices given", blocks.len()),
            ));
        }
        let mut mats = Vec::with_capacity(rank);
        for (line_no, rows) in blocks {
            if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                return Err(Error::parse(
                    line_no,
                    format!("matrix must have {dim} rows of {dim} entries"),
                ));
            }
            mats.push(FpMatrix::from_rows(p, &rows)?);
        }
        let module = QModule::from_row_convention(p, dim, mats)?;

        let extension = if a.is_empty() && c.is_empty() {
            None
        } else {
            let reduce = |(line_no, v): (usize, Vec<i64>)| -> Result<Vec<u32>> {
                if v.len() != dim {
                    return Err(Error::parse(
                        line_no,
                        format!("vector must have {dim} entries"),
                    ));
                }
                Ok(v.into_iter().map(|x| p.reduce(x)).collect())
            };
            let mut av = Vec::with_capacity(rank);
            for i in 0..rank {
                let entry = a
                    .remove(&i)
                    .ok_or_else(|| Error::InvalidExtension(format!("a[{i}] is missing")))?;
                av.push(reduce(entry)?);
            }
            if let Some((&i, (line_no, _))) = a.iter().next() {
                return Err(Error::parse(
                    *line_no,
                    format!("a[{i}] exceeds rank {rank}"),
                ));
            }
            let mut cv = BTreeMap::new();
            for (key, entry) in c {
                cv.insert(key, reduce(entry)?);
            }
            Some(ExtensionClassData::new(p, dim, av, cv)?)
        };
        Ok(NData { module, extension })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::parse(0, format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Serializes to the N-data format.
    pub fn export(&self) -> String {
        let m = &self.module;
        let mut out = format!(
            "p = {}\nrank = {}\ndim = {}\n",
            m.prime(),
            m.rank(),
            m.dim()
        );
        for (i, g) in m.generators().iter().enumerate() {
            let _ = writeln!(out, "M[{i}]");
            let rows = g.transpose();
            for r in 0..rows.rows() {
                let cells: Vec<String> = rows.row(r).iter().map(u32::to_string).collect();
                let _ = writeln!(out, "{}", cells.join(" "));
            }
        }
        if let Some(ext) = &self.extension {
            for (i, v) in ext.a_vectors().iter().enumerate() {
                let _ = writeln!(out, "a[{i}] = {}", format_vector(v));
            }
            for ((j, k), v) in ext.c_vectors() {
                let _ = writeln!(out, "c[{j},{k}] = {}", format_vector(v));
            }
        }
        out
    }
}

/// `[x, y, z]`.
pub fn format_vector(v: &[u32]) -> String {
    let cells: Vec<String> = v.iter().map(u32::to_string).collect();
    format!("[{}]", cells.join(", "))
}

fn bracket_index(text: &str, name: &str) -> Option<std::result::Result<usize, String>> {
    let inner = text
        .strip_prefix(name)?
        .strip_prefix('[')?
        .strip_suffix(']')?;
    Some(
        inner
            .trim()
            .parse()
            .map_err(|_| format!("invalid index in {text:?}")),
    )
}

fn parse_vector(text: &str) -> std::result::Result<Vec<i64>, String> {
    let inner = text.trim().trim_start_matches('[').trim_end_matches(']');
    inner
        .split(|ch: char| ch == ',' || ch.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<i64>().map_err(|_| format!("invalid entry {s:?}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    /// Upper unitriangular 3x3 matrices over F_3, with section
    /// t(x, y) = [[1, x, 0], [0, 1, y], [0, 0, 1]].
    fn heisenberg_cocycle() -> TwoCocycle {
        let p = p3();
        let n = QModule::trivial(p, 2, 1);
        let q = n.group();
        let mat = |x: i64, y: i64, z: i64| {
            FpMatrix::from_rows(p, &[[1, x, z], [0, 1, y], [0, 0, 1]]).unwrap()
        };
        TwoCocycle::from_fn(&n, |g, h| {
            let (eg, eh) = (q.exponents(g), q.exponents(h));
            let prod = &mat(eg[0] as i64, eg[1] as i64, 0) * &mat(eh[0] as i64, eh[1] as i64, 0);
            let sum = q.mul(g, h);
            let es = q.exponents(sum);
            let t = mat(es[0] as i64, es[1] as i64, 0);
            // prod = z-corner element times t
            let corner = p.sub(prod.get(0, 2), t.get(0, 2));
            vec![corner]
        })
        .unwrap()
    }

    #[test]
    fn heisenberg_example() {
        let w = heisenberg_cocycle();
        let q = w.group();
        assert_eq!(w.get(q.generator(0), q.generator(1)), &[1]);
        assert!(w.check_cocycle());
        let ext = w.extract_extension_data().unwrap();
        assert_eq!(ext.a(0), &[0]);
        assert_eq!(ext.a(1), &[0]);
        assert_eq!(ext.c(0, 1), &[2]);
    }

    #[test]
    fn zero_and_broken_cocycles() {
        let n = QModule::trivial(p3(), 2, 1);
        let w = TwoCocycle::zero(&n);
        assert!(w.check_cocycle());
        assert!(w.extract_extension_data().unwrap().is_zero());
        let mut broken = w.clone();
        broken.set(0, 4, vec![1]).unwrap();
        assert!(!broken.check_cocycle());
        assert!(matches!(
            broken.extract_extension_data(),
            Err(Error::InvalidCocycle(_))
        ));
    }

    #[test]
    fn swapping_generators_negates_c() {
        let w = heisenberg_cocycle();
        let q = w.group();
        let n = w.module().clone();
        let swap = |g: usize| {
            let e = q.exponents(g);
            q.index(&[e[1], e[0]])
        };
        let swapped = TwoCocycle::from_fn(&n, |g, h| w.get(swap(g), swap(h)).to_vec()).unwrap();
        let c = w.extract_extension_data().unwrap().c(0, 1)[0];
        let c_swapped = swapped.extract_extension_data().unwrap().c(0, 1)[0];
        assert_eq!(p3().add(c, c_swapped), 0);
    }

    #[test]
    fn presentation_round_trip_on_trivial_modules() {
        let p = p3();
        let n = QModule::trivial(p, 2, 2);
        let mut c = BTreeMap::new();
        c.insert((0, 1), vec![2, 1]);
        let ext = ExtensionClassData::new(p, 2, vec![vec![1, 0], vec![0, 2]], c).unwrap();
        let w = TwoCocycle::from_presentation(&n, &ext).unwrap();
        assert_eq!(w.extract_extension_data().unwrap(), ext);
    }

    #[test]
    fn inconsistent_presentation_is_rejected() {
        // τ0 acts on N = F_3^2 nontrivially, and s_0^3 = a_0 must commute
        // with s_0; a_0 = e_1 is moved by τ0, so no group exists.
        let p = p3();
        let g0 = FpMatrix::from_rows(p, &[[1, 1], [0, 1]]).unwrap();
        let n = QModule::new(p, 2, vec![g0, FpMatrix::identity(p, 2)]).unwrap();
        let mut c = BTreeMap::new();
        c.insert((0, 1), vec![0, 0]);
        let ext = ExtensionClassData::new(p, 2, vec![vec![0, 1], vec![0, 0]], c).unwrap();
        assert!(matches!(
            TwoCocycle::from_presentation(&n, &ext),
            Err(Error::InvalidExtension(_))
        ));
    }

    #[test]
    fn module_validation() {
        let p = p3();
        let g = FpMatrix::from_rows(p, &[[2, 0], [0, 1]]).unwrap();
        assert!(QModule::new(p, 2, vec![g]).is_err());
        let a = FpMatrix::from_rows(p, &[[1, 1], [0, 1]]).unwrap();
        let b = FpMatrix::from_rows(p, &[[1, 0], [1, 1]]).unwrap();
        assert!(matches!(
            QModule::new(p, 2, vec![a, b]),
            Err(Error::InvalidModule(_))
        ));
    }

    #[test]
    fn cohomology_of_trivial_modules() {
        let p = p3();
        let n = QModule::trivial(p, 2, 1);
        assert_eq!(bar_cohomology_dim(&n, 0).unwrap(), 1);
        assert_eq!(bar_cohomology_dim(&n, 1).unwrap(), 2);
        assert_eq!(bar_cohomology_dim(&n, 2).unwrap(), 3);
        assert!(bar_cohomology_dim(&n, 3).is_err());
        let c1 = QModule::trivial(p, 1, 1);
        assert_eq!(bar_cohomology_dim(&c1, 2).unwrap(), 1);
        let p5 = QModule::trivial(Prime::new(5).unwrap(), 2, 1);
        assert_eq!(bar_cohomology_dim(&p5, 1).unwrap(), 2);
    }

    #[test]
    fn d_squared_vanishes() {
        let p = p3();
        let g0 = FpMatrix::from_rows(p, &[[1, 1, 0], [0, 1, 0], [0, 0, 1]]).unwrap();
        let g1 = FpMatrix::from_rows(p, &[[1, 0, 1], [0, 1, 0], [0, 0, 1]]).unwrap();
        let n = QModule::new(p, 3, vec![g0, g1]).unwrap();
        for k in 0..2 {
            assert!((&coboundary_matrix(&n, k + 1) * &coboundary_matrix(&n, k)).is_zero());
        }
    }

    #[test]
    fn n_data_round_trip_and_errors() {
        let text = "p = 3\nrank = 2\ndim = 2\nM[0]\n1 1\n0 1\nM[1]\n1 0\n0 1\na[0] = [0, 1]\na[1] = [0, 0]\nc[0,1] = [1, 0]\n";
        let data = NData::parse(text).unwrap();
        assert_eq!(
            data.module.generators()[0],
            FpMatrix::from_rows(p3(), &[[1, 0], [1, 1]]).unwrap()
        );
        assert_eq!(NData::parse(&data.export()).unwrap(), data);
        assert_eq!(data.export(), text);
        assert!(matches!(
            NData::parse("p = 3\nrank = 1\ndim = 2\nM[0]\n1 1\n"),
            Err(Error::Parse { line: 4, .. })
        ));
        assert!(matches!(
            NData::parse("p = 3\nrank = 1\ndim = 1\nM[0]\n1\na[0] = [1, 1]\n"),
            Err(Error::Parse { line: 6, .. })
        ));
        assert!(NData::parse("p = 3\nrank = 1\ndim = 1\nM[0]\n1\nfoo\n").is_err());
        let bare = NData::parse("p = 3\nrank = 1\ndim = 1\nM[0]\n1\n").unwrap();
        assert!(bare.extension.is_none());
    }

    fn cochain(order: usize, dim: usize) -> impl Strategy<Value = Vec<Vec<u32>>> {
        proptest::collection::vec(proptest::collection::vec(0u32..3, dim), order).prop_map(
            |mut v| {
                v[0].iter_mut().for_each(|x| *x = 0);
                v
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn coboundaries_are_cocycles(phi in cochain(9, 3)) {
            let p = p3();
            let g0 = FpMatrix::from_rows(p, &[[1, 1, 0], [0, 1, 0], [0, 0, 1]]).unwrap();
            let n = QModule::new(p, 3, vec![g0, FpMatrix::identity(p, 3)]).unwrap();
            let w = TwoCocycle::coboundary_of(&n, &phi).unwrap();
            prop_assert!(w.check_cocycle());
        }

        #[test]
        fn random_cochains_compose_to_zero(v in proptest::collection::vec(0i64..3, 8 * 2)) {
            let p = p3();
            let g0 = FpMatrix::from_rows(p, &[[1, 1], [0, 1]]).unwrap();
            let n = QModule::new(p, 2, vec![g0.clone(), g0]).unwrap();
            let d1 = coboundary_matrix(&n, 1);
            let d2 = coboundary_matrix(&n, 2);
            let f: Vec<u32> = v.iter().map(|&x| p.reduce(x)).collect();
            let image = d2.mul_vec(&d1.mul_vec(&f).unwrap()).unwrap();
            prop_assert!(image.iter().all(|&x| x == 0));
        }

        #[test]
        fn trivial_presentations_round_trip(a in proptest::collection::vec(0u32..3, 4), c in proptest::collection::vec(0u32..3, 2)) {
            let p = p3();
            let n = QModule::trivial(p, 2, 2);
            let mut cm = BTreeMap::new();
            cm.insert((0, 1), c);
            let ext = ExtensionClassData::new(p, 2, vec![a[..2].to_vec(), a[2..].to_vec()], cm).unwrap();
            let w = TwoCocycle::from_presentation(&n, &ext).unwrap();
            prop_assert_eq!(w.extract_extension_data().unwrap(), ext);
        }
    }
}
