//! Exact linear algebra over prime fields GF(p), and Jordan chain bases of
//! nilpotent matrices.
//!
//! Vectors are `Vec<u32>` of residues. Matrices act on column vectors, so
//! the image of `A` is its column space. A [`Subspace`] is stored by its
//! reduced row echelon basis, which makes equality entrywise.

use std::fmt;

use thiserror::Error;

use crate::partition::conjugate;
use crate::Verdict;

/// Largest prime below 2^16. Products of two residues stay far below
/// `u64::MAX`.
pub const MAX_PRIME: u32 = 65_521;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("prime {0} exceeds {MAX_PRIME}")]
    PrimeTooLarge(u32),
    #[error("entry {value} at ({row},{col}) is not a residue mod {prime}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: u64,
        prime: u32,
    },
    #[error("row {row} has {got} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, got: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not nilpotent")]
    NotNilpotent,
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn check_prime(p: u32) -> Result<(), GfError> {
    if p > MAX_PRIME {
        Err(GfError::PrimeTooLarge(p))
    } else if !is_prime(p) {
        Err(GfError::NotPrime(p))
    } else {
        Ok(())
    }
}

#[inline]
fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

#[inline]
fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    let (mut base, mut exp, mut acc) = (a as u64, p as u64 - 2, 1u64);
    let m = p as u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc as u32
}

/// A dense matrix over GF(p).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GfMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: GfMatrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl GfMatrix {
    /// Row-major data; every entry must already be a residue.
    pub fn new(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self, GfError> {
        check_prime(p)?;
        if data.len() != rows * cols {
            return Err(GfError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|&v| v >= p) {
            return Err(GfError::EntryOutOfRange {
                row: i / cols,
                col: i % cols,
                value: data[i] as u64,
                prime: p,
            });
        }
        Ok(Self { p, rows, cols, data })
    }

    /// Builds a matrix with `cols` columns from a list of rows.
    pub fn from_rows(p: u32, cols: usize, rows: &[Vec<u64>]) -> Result<Self, GfError> {
        check_prime(p)?;
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(GfError::Ragged {
                    row: r,
                    expected: cols,
                    got: row.len(),
                });
            }
            for (c, &v) in row.iter().enumerate() {
                if v >= p as u64 {
                    return Err(GfError::EntryOutOfRange {
                        row: r,
                        col: c,
                        value: v,
                        prime: p,
                    });
                }
                data.push(v as u32);
            }
        }
        Ok(Self {
            p,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        Self {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Matrix whose rows are the given vectors (all of length `cols`).
    fn from_vectors<'a, I: IntoIterator<Item = &'a [u32]>>(p: u32, cols: usize, vectors: I) -> Self {
        let mut data = Vec::new();
        let mut rows = 0;
        for v in vectors {
            assert_eq!(v.len(), cols, "vector length");
            data.extend_from_slice(v);
            rows += 1;
        }
        Self { p, rows, cols, data }
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        assert!(v < self.p);
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u32]> + '_ {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.row_iter().map(<[u32]>::to_vec).collect()
    }

    /// Compact text form: rows joined with `;`, residues as digits when
    /// `p <= 10` and comma separated otherwise.
    pub fn encode(&self) -> String {
        let sep = if self.p <= 10 { "" } else { "," };
        self.row_iter()
            .map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(sep))
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    /// Matrix product. Panics if the shapes or primes disagree.
    pub fn mul(&self, other: &GfMatrix) -> GfMatrix {
        assert_eq!(self.p, other.p, "prime mismatch");
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let p = self.p as u64;
        let mut out = Self::zeros(self.p, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = 0u64;
                for k in 0..self.cols {
                    acc += self.get(r, k) as u64 * other.get(k, c) as u64;
                    // Stay well clear of overflow for long rows.
                    if k % 1024 == 1023 {
                        acc %= p;
                    }
                }
                out.data[r * other.cols + c] = (acc % p) as u32;
            }
        }
        out
    }

    /// `A·v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols, "shape mismatch");
        let p = self.p as u64;
        (0..self.rows)
            .map(|r| {
                let acc = self
                    .row(r)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p);
                acc as u32
            })
            .collect()
    }

    pub fn pow(&self, mut k: u32) -> GfMatrix {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut result = Self::identity(self.p, self.rows);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        result
    }

    /// Reduced row echelon form: leftmost pivots, scaled to 1, eliminated
    /// above and below.
    pub fn rref(&self) -> Rref {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = inv_mod(m.get(r, c), p);
            m.scale_row(r, inv);
            for i in 0..m.rows {
                let f = m.get(i, c);
                if i != r && f != 0 {
                    m.sub_row_multiple(i, r, f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    pub fn inverse(&self) -> Option<GfMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(self.p, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.data[r * 2 * n + c] = self.get(r, c);
            }
            aug.data[r * 2 * n + n + r] = 1;
        }
        let red = aug.rref();
        if red.pivots.iter().take(n).enumerate().any(|(i, &c)| c != i) || red.rank() < n {
            return None;
        }
        let mut inv = Self::zeros(self.p, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.data[r * n + c] = red.matrix.get(r, n + c);
            }
        }
        Some(inv)
    }

    /// Least `k >= 1` with `A^k = 0`, if `A` is nilpotent.
    pub fn nilpotency_index(&self) -> Option<usize> {
        if !self.is_square() {
            return None;
        }
        let mut power = self.clone();
        for k in 1..=self.rows.max(1) {
            if power.is_zero() {
                return Some(k);
            }
            power = power.mul(self);
        }
        None
    }

    pub fn is_nilpotent(&self) -> bool {
        self.nilpotency_index().is_some()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn scale_row(&mut self, r: usize, f: u32) {
        let p = self.p;
        for v in &mut self.data[r * self.cols..(r + 1) * self.cols] {
            *v = mul_mod(*v, f, p);
        }
    }

    /// row[i] -= f * row[src]
    fn sub_row_multiple(&mut self, i: usize, src: usize, f: u32) {
        let p = self.p;
        for c in 0..self.cols {
            let s = mul_mod(self.data[src * self.cols + c], f, p);
            let d = &mut self.data[i * self.cols + c];
            *d = sub_mod(*d, s, p);
        }
    }
}

impl fmt::Display for GfMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .row_iter()
            .map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

/// A subspace of GF(p)^n, stored by its reduced row echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: GfMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(p: u32, n: usize) -> Self {
        Self {
            basis: GfMatrix::zeros(p, 0, n),
            pivots: Vec::new(),
        }
    }

    pub fn full(p: u32, n: usize) -> Self {
        Self {
            basis: GfMatrix::identity(p, n),
            pivots: (0..n).collect(),
        }
    }

    /// Row space of `m`.
    pub fn row_space(m: &GfMatrix) -> Self {
        let red = m.rref();
        let rank = red.rank();
        let mut basis = red.matrix;
        basis.data.truncate(rank * basis.cols);
        basis.rows = rank;
        Self {
            basis,
            pivots: red.pivots,
        }
    }

    /// Span of the given vectors in GF(p)^n.
    pub fn span(p: u32, n: usize, vectors: &[Vec<u32>]) -> Result<Self, GfError> {
        check_prime(p)?;
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != n {
                return Err(GfError::Ragged {
                    row: i,
                    expected: n,
                    got: v.len(),
                });
            }
            if let Some(c) = v.iter().position(|&x| x >= p) {
                return Err(GfError::EntryOutOfRange {
                    row: i,
                    col: c,
                    value: v[c] as u64,
                    prime: p,
                });
            }
        }
        Ok(Self::span_unchecked(p, n, vectors.iter().map(Vec::as_slice)))
    }

    fn span_unchecked<'a, I: IntoIterator<Item = &'a [u32]>>(p: u32, n: usize, vectors: I) -> Self {
        Self::row_space(&GfMatrix::from_vectors(p, n, vectors))
    }

    /// Builds a subspace from rows already in reduced row echelon form
    /// without zero rows. Used by enumeration.
    pub(crate) fn from_rref_rows(p: u32, n: usize, rows: Vec<Vec<u32>>, pivots: Vec<usize>) -> Self {
        let basis = GfMatrix::from_vectors(p, n, rows.iter().map(Vec::as_slice));
        debug_assert_eq!(basis.rref().matrix, basis);
        Self { basis, pivots }
    }

    pub fn prime(&self) -> u32 {
        self.basis.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &GfMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the echelon basis; the remainder is zero exactly
    /// when `v` lies in the subspace.
    fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let p = self.prime();
        let mut w = v.to_vec();
        for (i, &c) in self.pivots.iter().enumerate() {
            let f = w[c];
            if f != 0 {
                for (x, &b) in w.iter_mut().zip(self.basis.row(i)) {
                    *x = sub_mod(*x, mul_mod(b, f, p), p);
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.ambient_dim(), "vector length");
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coordinates of `v` in the echelon basis, if `v` is in the subspace.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        self.contains(v).then(|| self.pivots.iter().map(|&c| v[c]).collect())
    }

    /// Vector with the given coordinates in the echelon basis.
    pub fn combine(&self, coords: &[u32]) -> Vec<u32> {
        assert_eq!(coords.len(), self.dim());
        let p = self.prime();
        let mut out = vec![0; self.ambient_dim()];
        for (row, &c) in self.basis.row_iter().zip(coords) {
            if c != 0 {
                for (o, &b) in out.iter_mut().zip(row) {
                    *o = add_mod(*o, mul_mod(b, c, p), p);
                }
            }
        }
        out
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.row_iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Self::span_unchecked(
            self.prime(),
            self.ambient_dim(),
            self.basis.row_iter().chain(other.basis.row_iter()),
        )
    }

    /// All `x` with `x·v = 0` for every `v` in the subspace.
    pub fn annihilator(&self) -> Subspace {
        kernel_space(&self.basis)
    }

    /// Computed as the annihilator of the sum of annihilators.
    pub fn intersection(&self, other: &Subspace) -> Subspace {
        self.annihilator().sum(&other.annihilator()).annihilator()
    }

    /// `A·N`.
    pub fn image_under(&self, a: &GfMatrix) -> Subspace {
        let images: Vec<Vec<u32>> = self.basis.row_iter().map(|r| a.mul_vec(r)).collect();
        Self::span_unchecked(self.prime(), a.rows(), images.iter().map(Vec::as_slice))
    }

    /// `A⁻¹(X) = {u : A·u ∈ X}`.
    pub fn preimage_under(&self, a: &GfMatrix) -> Subspace {
        let constraints = self.annihilator().basis.mul(a);
        kernel_space(&constraints)
    }

    /// Basis rows joined with `;`. Residues are written as digits when
    /// `p <= 10`, otherwise comma separated. The zero subspace is `"0"`.
    pub fn label(&self) -> String {
        if self.dim() == 0 {
            "0".into()
        } else {
            self.basis.encode()
        }
    }
}

/// Null space `{v : A·v = 0}`.
pub fn kernel_space(a: &GfMatrix) -> Subspace {
    let p = a.prime();
    let n = a.cols();
    let red = a.rref();
    let free: Vec<usize> = (0..n).filter(|c| !red.pivots.contains(c)).collect();
    let vectors: Vec<Vec<u32>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![0; n];
            v[f] = 1;
            for (i, &c) in red.pivots.iter().enumerate() {
                v[c] = sub_mod(0, red.matrix.get(i, f), p);
            }
            v
        })
        .collect();
    Subspace::span_unchecked(p, n, vectors.iter().map(Vec::as_slice))
}

/// Column space of `A`.
pub fn image_space(a: &GfMatrix) -> Subspace {
    Subspace::row_space(&a.transpose())
}

/// Some `u` in `within` with `A·u = v`, or `None`. Free parameters of the
/// solution are set to zero.
pub fn preimage_vector(a: &GfMatrix, v: &[u32], within: &Subspace) -> Option<Vec<u32>> {
    assert_eq!(v.len(), a.rows(), "vector length");
    let p = a.prime();
    let d = within.dim();
    // Columns of M are A·w_j for the basis rows w_j of `within`.
    let images: Vec<Vec<u32>> = within.basis().row_iter().map(|w| a.mul_vec(w)).collect();
    let mut aug = GfMatrix::zeros(p, a.rows(), d + 1);
    for r in 0..a.rows() {
        for (j, img) in images.iter().enumerate() {
            aug.data[r * (d + 1) + j] = img[r];
        }
        aug.data[r * (d + 1) + d] = v[r];
    }
    let red = aug.rref();
    if red.pivots.last() == Some(&d) {
        return None;
    }
    let mut coords = vec![0; d];
    for (i, &c) in red.pivots.iter().enumerate() {
        coords[c] = red.matrix.get(i, d);
    }
    Some(within.combine(&coords))
}

/// Jordan chains `x_1, ..., x_k` with `A·x_i = x_{i-1}` and `A·x_1 = 0`,
/// longest chain first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JordanChainBasis {
    pub prime: u32,
    pub dim: usize,
    pub chains: Vec<Vec<Vec<u32>>>,
}

impl JordanChainBasis {
    pub fn lengths(&self) -> Vec<usize> {
        self.chains.iter().map(Vec::len).collect()
    }

    pub fn vectors(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.chains.iter().flatten().map(Vec::as_slice)
    }
}

/// Computes a Jordan chain basis of a nilpotent matrix.
///
/// Recurses on the restriction of `A` to its image, lifts the top of each
/// chain one step through `A`, and then completes the chain bottoms to a
/// basis of the kernel with singleton chains taken greedily from the
/// canonical kernel basis.
pub fn compute_jordan_chains(a: &GfMatrix) -> Result<JordanChainBasis, GfError> {
    if !a.is_square() {
        return Err(GfError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if !a.is_nilpotent() {
        return Err(GfError::NotNilpotent);
    }
    let mut chains = chains_of(a);
    chains.sort_by_key(|c| std::cmp::Reverse(c.len()));
    Ok(JordanChainBasis {
        prime: a.prime(),
        dim: a.rows(),
        chains,
    })
}

fn chains_of(a: &GfMatrix) -> Vec<Vec<Vec<u32>>> {
    let n = a.rows();
    let p = a.prime();
    if n == 0 {
        return Vec::new();
    }
    let image = image_space(a);
    let d = image.dim();
    // A restricted to its image, in coordinates of the echelon basis.
    let mut restricted = GfMatrix::zeros(p, d, d);
    for (j, w) in image.basis().row_iter().enumerate() {
        let aw = a.mul_vec(w);
        for (i, &c) in image.pivots().iter().enumerate() {
            restricted.data[i * d + j] = aw[c];
        }
    }
    let full = Subspace::full(p, n);
    let mut chains: Vec<Vec<Vec<u32>>> = chains_of(&restricted)
        .into_iter()
        .map(|chain| chain.iter().map(|coords| image.combine(coords)).collect())
        .collect();
    for chain in &mut chains {
        let top = chain.last().expect("chains are nonempty");
        let lifted = preimage_vector(a, top, &full).expect("image vectors have preimages");
        chain.push(lifted);
    }

    let kernel = kernel_space(a);
    let mut spanned = Subspace::span_unchecked(p, n, chains.iter().map(|c| c[0].as_slice()));
    for v in kernel.basis().row_iter() {
        if spanned.dim() == kernel.dim() {
            break;
        }
        if !spanned.contains(v) {
            spanned = spanned.sum(&Subspace::span_unchecked(p, n, [v]));
            chains.push(vec![v.to_vec()]);
        }
    }
    chains
}

/// Jordan block sizes from kernel dimensions of powers alone: the number of
/// blocks of size at least `i` is `dim ker A^i - dim ker A^(i-1)`, and the
/// block sizes are the conjugate of those counts. Sorted descending.
pub fn block_partition_oracle(a: &GfMatrix) -> Result<Vec<usize>, GfError> {
    if !a.is_square() {
        return Err(GfError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if !a.is_nilpotent() {
        return Err(GfError::NotNilpotent);
    }
    let mut counts = Vec::new();
    let mut power = GfMatrix::identity(a.prime(), n);
    let mut previous = 0;
    while previous < n {
        power = power.mul(a);
        let nullity = n - power.rank();
        counts.push(nullity - previous);
        previous = nullity;
    }
    Ok(conjugate(&counts))
}

/// Why a family of vectors is not a Jordan chain basis of `A`. Chain and
/// position indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainFailure {
    Shape(String),
    NotABasis,
    PhiAction { chain: usize, pos: usize },
}

impl fmt::Display for ChainFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainFailure::Shape(why) => write!(f, "shape mismatch: {why}"),
            ChainFailure::NotABasis => write!(f, "not a basis"),
            ChainFailure::PhiAction { chain, pos } => write!(f, "φ action violated at ({chain},{pos})"),
        }
    }
}

/// The flattened vectors form a basis and `A` shifts each chain down by
/// one, sending its bottom to zero.
pub fn verify_chain_basis(a: &GfMatrix, basis: &JordanChainBasis) -> Verdict<ChainFailure> {
    let n = a.rows();
    if !a.is_square() || basis.dim != n || basis.prime != a.prime() {
        return Verdict::Fails(ChainFailure::Shape(format!(
            "{}x{} matrix over GF({}) vs basis of GF({})^{}",
            a.rows(),
            a.cols(),
            a.prime(),
            basis.prime,
            basis.dim
        )));
    }
    if let Some(v) = basis.vectors().find(|v| v.len() != n || v.iter().any(|&x| x >= a.prime())) {
        return Verdict::Fails(ChainFailure::Shape(format!("vector of length {}", v.len())));
    }
    let vectors: Vec<&[u32]> = basis.vectors().collect();
    if vectors.len() != n || GfMatrix::from_vectors(a.prime(), n, vectors).rank() != n {
        return Verdict::Fails(ChainFailure::NotABasis);
    }
    for (t, chain) in basis.chains.iter().enumerate() {
        for i in 1..chain.len() {
            if a.mul_vec(&chain[i]) != chain[i - 1] {
                return Verdict::Fails(ChainFailure::PhiAction { chain: t + 1, pos: i + 1 });
            }
        }
        if let Some(bottom) = chain.first() {
            if a.mul_vec(bottom).iter().any(|&x| x != 0) {
                return Verdict::Fails(ChainFailure::PhiAction { chain: t + 1, pos: 1 });
            }
        }
    }
    Verdict::Holds
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u32, rows: &[&[u64]]) -> GfMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        GfMatrix::from_rows(p, cols, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn jordan_block(p: u32, n: usize) -> GfMatrix {
        let mut a = GfMatrix::zeros(p, n, n);
        for i in 0..n.saturating_sub(1) {
            a.set(i, i + 1, 1);
        }
        a
    }

    fn e(n: usize, i: usize) -> Vec<u32> {
        let mut v = vec![0; n];
        v[i] = 1;
        v
    }

    #[test]
    fn construction_checks() {
        assert_eq!(GfMatrix::new(4, 1, 1, vec![0]), Err(GfError::NotPrime(4)));
        assert_eq!(GfMatrix::new(65_537, 1, 1, vec![0]), Err(GfError::PrimeTooLarge(65_537)));
        assert!(matches!(
            GfMatrix::from_rows(3, 2, &[vec![0, 3]]),
            Err(GfError::EntryOutOfRange { row: 0, col: 1, .. })
        ));
        assert!(matches!(
            GfMatrix::from_rows(3, 2, &[vec![0, 1], vec![1]]),
            Err(GfError::Ragged { row: 1, .. })
        ));
        assert!(GfMatrix::new(MAX_PRIME, 1, 1, vec![MAX_PRIME - 1]).is_ok());
    }

    #[test]
    fn rref_examples() {
        let id = GfMatrix::identity(7, 3);
        let r = id.rref();
        assert_eq!((r.matrix.clone(), r.rank()), (id, 3));

        let z = GfMatrix::zeros(5, 2, 3);
        assert_eq!(z.rref().rank(), 0);
        assert_eq!(z.rref().matrix, z);

        let r = m(2, &[&[1, 1], &[1, 1]]).rref();
        assert_eq!(r.matrix, m(2, &[&[1, 1], &[0, 0]]));
        assert_eq!(r.rank(), 1);
    }

    #[test]
    fn rref_scales_and_eliminates() {
        let r = m(5, &[&[2, 4, 1], &[1, 2, 4]]).rref();
        assert_eq!(r.pivots, vec![0, 2]);
        assert_eq!(r.matrix, m(5, &[&[1, 2, 0], &[0, 0, 1]]));
    }

    #[test]
    fn kernel_and_image_examples() {
        let z = GfMatrix::zeros(3, 3, 3);
        assert_eq!(kernel_space(&z), Subspace::full(3, 3));
        assert_eq!(image_space(&z), Subspace::zero(3, 3));

        let j3 = jordan_block(2, 3);
        let k = kernel_space(&j3);
        assert_eq!(k, Subspace::span(2, 3, &[e(3, 0)]).unwrap());
        let im = image_space(&j3);
        assert_eq!(im, Subspace::span(2, 3, &[e(3, 0), e(3, 1)]).unwrap());

        let inv = m(5, &[&[1, 2], &[3, 4]]);
        assert_eq!(kernel_space(&inv).dim(), 0);
        assert_eq!(image_space(&inv), Subspace::full(5, 2));
    }

    #[test]
    fn preimage_examples() {
        let id = GfMatrix::identity(3, 2);
        let v = vec![2, 1];
        assert_eq!(preimage_vector(&id, &v, &Subspace::full(3, 2)), Some(v));

        let j2 = jordan_block(3, 2);
        assert_eq!(preimage_vector(&j2, &e(2, 0), &Subspace::full(3, 2)), Some(e(2, 1)));

        let z = GfMatrix::zeros(3, 2, 2);
        assert_eq!(preimage_vector(&z, &e(2, 0), &Subspace::full(3, 2)), None);

        // Restricted to the kernel, nothing maps onto e1.
        assert_eq!(preimage_vector(&j2, &e(2, 0), &kernel_space(&j2)), None);
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(7, &[&[1, 2, 3], &[0, 1, 4], &[5, 6, 0]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), GfMatrix::identity(7, 3));
        assert_eq!(m(2, &[&[1, 1], &[1, 1]]).inverse(), None);
    }

    #[test]
    fn chain_examples() {
        let z = GfMatrix::zeros(3, 4, 4);
        let b = compute_jordan_chains(&z).unwrap();
        assert_eq!(b.lengths(), vec![1, 1, 1, 1]);

        let j3 = jordan_block(2, 3);
        let b = compute_jordan_chains(&j3).unwrap();
        assert_eq!(b.chains, vec![vec![e(3, 0), e(3, 1), e(3, 2)]]);

        // block-diag(J_2, J_1) over GF(5)
        let a = m(5, &[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]);
        let b = compute_jordan_chains(&a).unwrap();
        assert_eq!(b.lengths(), vec![2, 1]);
        assert!(verify_chain_basis(&a, &b).holds());

        assert_eq!(
            compute_jordan_chains(&GfMatrix::identity(2, 2)),
            Err(GfError::NotNilpotent)
        );
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(block_partition_oracle(&jordan_block(2, 3)), Ok(vec![3]));
        assert_eq!(block_partition_oracle(&GfMatrix::zeros(2, 4, 4)), Ok(vec![1, 1, 1, 1]));
        let a = m(5, &[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]);
        assert_eq!(block_partition_oracle(&a), Ok(vec![2, 1]));
        assert_eq!(block_partition_oracle(&GfMatrix::identity(3, 2)), Err(GfError::NotNilpotent));
        assert_eq!(block_partition_oracle(&GfMatrix::zeros(3, 0, 0)), Ok(vec![]));
    }

    #[test]
    fn verify_examples() {
        let j2 = jordan_block(5, 2);
        let good = compute_jordan_chains(&j2).unwrap();
        assert!(verify_chain_basis(&j2, &good).holds());

        let mut scaled = good.clone();
        scaled.chains[0][1] = scaled.chains[0][1].iter().map(|&x| x * 2 % 5).collect();
        assert_eq!(
            verify_chain_basis(&j2, &scaled),
            Verdict::Fails(ChainFailure::PhiAction { chain: 1, pos: 2 })
        );

        let mut zeroed = good;
        zeroed.chains[0][0] = vec![0, 0];
        assert_eq!(verify_chain_basis(&j2, &zeroed), Verdict::Fails(ChainFailure::NotABasis));
        assert_eq!(ChainFailure::NotABasis.to_string(), "not a basis");
    }

    #[test]
    fn subspace_arithmetic() {
        let p = 3;
        let x = Subspace::span(p, 3, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        let y = Subspace::span(p, 3, &[vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(x.intersection(&y), Subspace::span(p, 3, &[vec![0, 1, 0]]).unwrap());
        assert_eq!(x.sum(&y), Subspace::full(p, 3));
        assert_eq!(x.annihilator(), Subspace::span(p, 3, &[vec![0, 0, 1]]).unwrap());
        assert!(x.intersection(&y).is_subspace_of(&x));
        assert_eq!(x.label(), "100;010");
        assert_eq!(Subspace::zero(p, 3).label(), "0");

        let a = jordan_block(p, 3);
        assert_eq!(y.image_under(&a), x);
        assert_eq!(
            Subspace::zero(p, 3).preimage_under(&a),
            Subspace::span(p, 3, &[e(3, 0)]).unwrap()
        );
    }

    #[test]
    fn large_prime_labels_are_comma_separated() {
        let s = Subspace::span(11, 2, &[vec![1, 10]]).unwrap();
        assert_eq!(s.label(), "1,10");
    }
}
