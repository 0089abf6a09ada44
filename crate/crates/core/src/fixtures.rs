//! Deterministic fixture generators: boolean and chain lattices, canonical
//! nilpotent matrices and seeded random nilpotent matrices.

use std::sync::Arc;

use rand::Rng;

use crate::gf::GfMatrix;
use crate::lattice::{FiniteLattice, LatticeError, MAX_ELEMENTS};
use crate::lattice_map::JoinHom;
use crate::partition::normalize;

/// The boolean lattice of subsets of a `dim`-element set. The empty set is
/// labelled `0`, the full set `1`, and other subsets by their letters.
pub fn boolean_lattice(dim: usize) -> Result<FiniteLattice, LatticeError> {
    if dim > 26 || (1usize << dim) > MAX_ELEMENTS {
        return Err(LatticeError::TooLarge {
            count: 1usize.checked_shl(dim as u32).unwrap_or(usize::MAX),
        });
    }
    let full = (1usize << dim) - 1;
    let label = |mask: usize| -> String {
        if mask == 0 {
            "0".into()
        } else if mask == full {
            "1".into()
        } else {
            (0..dim)
                .filter(|b| mask & (1 << b) != 0)
                .map(|b| (b'a' + b as u8) as char)
                .collect()
        }
    };
    let mut masks: Vec<usize> = (0..=full).collect();
    masks.sort_by_key(|&m| (m.count_ones(), label(m)));
    let mut position = vec![0; full + 1];
    for (i, &m) in masks.iter().enumerate() {
        position[m] = i;
    }
    let covers: Vec<(usize, usize)> = masks
        .iter()
        .flat_map(|&m| {
            let position = &position;
            (0..dim)
                .filter(move |b| m & (1 << b) == 0)
                .map(move |b| (position[m], position[m | (1 << b)]))
        })
        .collect();
    FiniteLattice::from_cover_indices(masks.into_iter().map(label).collect(), &covers)
}

/// The chain `0 < x1 < ... < x(len-1) < 1` of height `len`.
pub fn chain_lattice(len: usize) -> Result<FiniteLattice, LatticeError> {
    if len >= MAX_ELEMENTS {
        return Err(LatticeError::TooLarge { count: len + 1 });
    }
    let labels: Vec<String> = (0..=len)
        .map(|i| match i {
            0 => "0".to_owned(),
            i if i == len => "1".to_owned(),
            i => format!("x{i}"),
        })
        .collect();
    let covers: Vec<(usize, usize)> = (0..len).map(|i| (i, i + 1)).collect();
    FiniteLattice::from_cover_indices(labels, &covers)
}

/// Shift down by one step on a chain lattice: `1 ↦ x(len-1) ↦ ... ↦ x1 ↦ 0`.
pub fn chain_shift(lattice: Arc<FiniteLattice>) -> JoinHom {
    let values = (0..lattice.len()).map(|i| i.saturating_sub(1)).collect();
    JoinHom::new(lattice, values).expect("a monotone map fixing 0 on a chain preserves joins")
}

/// Block-diagonal matrix of Jordan blocks with ones on the superdiagonal.
pub fn canonical_blocks(p: u32, partition: &[usize]) -> GfMatrix {
    let n = partition.iter().sum();
    let mut a = GfMatrix::zeros(p, n, n);
    let mut offset = 0;
    for &k in partition {
        for i in 0..k.saturating_sub(1) {
            a.set(offset + i, offset + i + 1, 1);
        }
        offset += k;
    }
    a
}

pub fn random_matrix<R: Rng + ?Sized>(p: u32, rows: usize, cols: usize, rng: &mut R) -> GfMatrix {
    let data = (0..rows * cols).map(|_| rng.gen_range(0..p)).collect();
    GfMatrix::new(p, rows, cols, data).expect("valid prime and residues")
}

pub fn random_invertible<R: Rng + ?Sized>(p: u32, n: usize, rng: &mut R) -> (GfMatrix, GfMatrix) {
    loop {
        let s = random_matrix(p, n, n, rng);
        if let Some(inv) = s.inverse() {
            return (s, inv);
        }
    }
}

/// A uniformly random strictly upper triangular matrix conjugated by a
/// random invertible matrix.
pub fn random_nilpotent<R: Rng + ?Sized>(p: u32, n: usize, rng: &mut R) -> GfMatrix {
    let mut upper = GfMatrix::zeros(p, n, n);
    for i in 0..n {
        for j in i + 1..n {
            upper.set(i, j, rng.gen_range(0..p));
        }
    }
    let (s, inv) = random_invertible(p, n, rng);
    s.mul(&upper).mul(&inv)
}

/// Canonical blocks for `partition`, conjugated by a random invertible
/// matrix.
pub fn random_nilpotent_with_partition<R: Rng + ?Sized>(p: u32, partition: &[usize], rng: &mut R) -> GfMatrix {
    let n = partition.iter().sum();
    let (s, inv) = random_invertible(p, n, rng);
    s.mul(&canonical_blocks(p, partition)).mul(&inv)
}

/// A random partition of `n`, built from a random composition.
pub fn random_partition<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut parts = Vec::new();
    let mut left = n;
    while left > 0 {
        let part = rng.gen_range(1..=left);
        parts.push(part);
        left -= part;
    }
    normalize(parts)
}

/// Every `n × n` matrix over GF(p), in lexicographic order of row-major
/// entries. `None` if there are more than `limit`.
pub fn all_matrices(p: u32, n: usize, limit: u64) -> Option<impl Iterator<Item = GfMatrix>> {
    let cells = (n * n) as u32;
    let total = (p as u64).checked_pow(cells).filter(|&t| t <= limit)?;
    Some((0..total).map(move |mut code| {
        let mut data = vec![0u32; n * n];
        for slot in data.iter_mut().rev() {
            *slot = (code % p as u64) as u32;
            code /= p as u64;
        }
        GfMatrix::new(p, n, n, data).expect("valid residues")
    }))
}
