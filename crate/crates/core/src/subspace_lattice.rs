//! The lattice of subspaces of GF(p)^n, the join-homomorphism `N ↦ A·N`
//! induced by a matrix, and cross-validation of the lattice engine against
//! the matrix engine.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::gf::{
    block_partition_oracle, compute_jordan_chains, verify_chain_basis, GfError, GfMatrix, Subspace,
};
use crate::jnb::{check_irredundant_base, compute_jnb, nilpotency_from_jnb, verify_jnb, JordanNormalBase};
use crate::lattice::{FiniteLattice, LatticeError, MAX_ELEMENTS};
use crate::lattice_map::{JoinHom, MapError};
use crate::partition::normalize;
use crate::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("Sub(GF({prime})^{dim}) has {count} elements, limit is {MAX_ELEMENTS}")]
    TooLarge { prime: u32, dim: usize, count: String },
    #[error("matrix is {rows}x{cols} over GF({prime}), model is GF({model_prime})^{model_dim}")]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        prime: u32,
        model_prime: u32,
        model_dim: usize,
    },
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// Gaussian binomial `[n choose d]_p`, the number of `d`-dimensional
/// subspaces of GF(p)^n. `None` on overflow.
pub fn gaussian_binomial(n: usize, d: usize, p: u32) -> Option<u128> {
    if d > n {
        return Some(0);
    }
    let q = p as u128;
    let mut acc: u128 = 1;
    for i in 0..d {
        let num = q.checked_pow((n - i) as u32)? - 1;
        let den = q.checked_pow((i + 1) as u32)? - 1;
        // Each partial product is itself a Gaussian binomial, so the
        // division is exact.
        acc = acc.checked_mul(num)? / den;
    }
    Some(acc)
}

/// Total number of subspaces of GF(p)^n. `None` on overflow.
pub fn subspace_count(p: u32, n: usize) -> Option<u128> {
    (0..=n).try_fold(0u128, |acc, d| acc.checked_add(gaussian_binomial(n, d, p)?))
}

/// `Sub(GF(p)^n)` as an explicit lattice, with each element labelled by
/// its subspace.
#[derive(Debug, Clone)]
pub struct SubspaceLatticeModel {
    prime: u32,
    dim: usize,
    lattice: Arc<FiniteLattice>,
    subspaces: Vec<Subspace>,
    index: HashMap<Subspace, usize>,
}

impl SubspaceLatticeModel {
    /// Enumerates every subspace by its echelon profile and orders them by
    /// dimension, then by basis entries.
    pub fn enumerate(p: u32, n: usize) -> Result<Self, ModelError> {
        GfMatrix::new(p, 0, 0, Vec::new())?;
        let count = subspace_count(p, n);
        match count {
            Some(c) if c <= MAX_ELEMENTS as u128 => {}
            _ => {
                return Err(ModelError::TooLarge {
                    prime: p,
                    dim: n,
                    count: count.map_or_else(|| "too many".to_owned(), |c| c.to_string()),
                })
            }
        }

        let mut subspaces = Vec::new();
        for d in 0..=n {
            for pivots in combinations(n, d) {
                subspaces.extend(profile_subspaces(p, n, &pivots));
            }
        }
        subspaces.sort_by(|a, b| {
            a.dim()
                .cmp(&b.dim())
                .then_with(|| a.basis().to_rows().cmp(&b.basis().to_rows()))
        });
        assert_eq!(Some(subspaces.len() as u128), count, "enumeration missed subspaces");

        let index: HashMap<Subspace, usize> =
            subspaces.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();

        // In a subspace lattice, covers are exactly inclusions that raise
        // the dimension by one.
        let mut start = vec![0; n + 2];
        for s in &subspaces {
            start[s.dim() + 1] += 1;
        }
        for d in 1..start.len() {
            start[d] += start[d - 1];
        }
        let mut covers = Vec::new();
        for d in 0..n {
            for x in start[d]..start[d + 1] {
                for y in start[d + 1]..start[d + 2] {
                    if subspaces[x].is_subspace_of(&subspaces[y]) {
                        covers.push((x, y));
                    }
                }
            }
        }
        let labels = subspaces.iter().map(Subspace::label).collect();
        let lattice = FiniteLattice::from_cover_indices(labels, &covers)?;
        Ok(Self {
            prime: p,
            dim: n,
            lattice: Arc::new(lattice),
            subspaces,
            index,
        })
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn lattice_arc(&self) -> &Arc<FiniteLattice> {
        &self.lattice
    }

    pub fn subspace(&self, element: usize) -> &Subspace {
        &self.subspaces[element]
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    pub fn element_of(&self, s: &Subspace) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Lattice element of the line spanned by a nonzero vector.
    pub fn line_of(&self, v: &[u32]) -> Option<usize> {
        let s = Subspace::span(self.prime, self.dim, &[v.to_vec()]).ok()?;
        (s.dim() == 1).then(|| self.element_of(&s)).flatten()
    }

    fn check_matrix(&self, a: &GfMatrix) -> Result<(), ModelError> {
        if a.prime() != self.prime || a.rows() != self.dim || a.cols() != self.dim {
            return Err(ModelError::DimensionMismatch {
                rows: a.rows(),
                cols: a.cols(),
                prime: a.prime(),
                model_prime: self.prime,
                model_dim: self.dim,
            });
        }
        Ok(())
    }

    /// The join-homomorphism `N ↦ A·N`.
    pub fn induced_join_hom(&self, a: &GfMatrix) -> Result<JoinHom, ModelError> {
        self.check_matrix(a)?;
        let values = self
            .subspaces
            .iter()
            .map(|s| self.index[&s.image_under(a)])
            .collect();
        Ok(JoinHom::new(self.lattice.clone(), values)?)
    }

    /// Runs both engines on `A` and checks them against each other. Input
    /// problems are errors; disagreements are recorded per leg in the
    /// report.
    pub fn cross_validate(&self, a: &GfMatrix) -> Result<CrossReport, ModelError> {
        self.check_matrix(a)?;
        let oracle = block_partition_oracle(a)?;
        let h = self.induced_join_hom(a)?;
        let l = self.lattice();
        let mut legs = Vec::with_capacity(6);

        let conditions = h.conditions();
        legs.push(Leg::new(
            "conditions",
            if conditions.all_hold() {
                Ok(())
            } else {
                Err(conditions.render(l).to_string().replace('\n', "; "))
            },
        ));

        let lattice_base = compute_jnb(&h, false).map_err(|e| e.to_string());
        legs.push(Leg::new(
            "lattice base",
            lattice_base.as_ref().map_err(Clone::clone).and_then(|base| {
                verdict(verify_jnb(&h, base))?;
                let k = nilpotency_from_jnb(base).ok();
                if k != h.nilpotency_index() && !(base.is_empty() && self.dim == 0) {
                    return Err(format!(
                        "longest chain {k:?} but nilpotency index {:?}",
                        h.nilpotency_index()
                    ));
                }
                if !l.leq(base.c_element(l), h.kernel()) {
                    return Err("c is not below the kernel".into());
                }
                let total: usize = base.lengths().iter().sum();
                if total != l.height() {
                    return Err(format!("chain lengths sum to {total}, height is {}", l.height()));
                }
                Ok(())
            }),
        ));

        let vector_base = compute_jordan_chains(a).map_err(|e| e.to_string());
        legs.push(Leg::new(
            "vector chains",
            vector_base
                .as_ref()
                .map_err(Clone::clone)
                .and_then(|b| verdict(verify_chain_basis(a, b))),
        ));

        legs.push(Leg::new("partitions", {
            match (&lattice_base, &vector_base) {
                (Ok(lb), Ok(vb)) => {
                    let from_lattice = normalize(lb.lengths());
                    let from_vectors = normalize(vb.lengths());
                    if from_lattice == oracle && from_vectors == oracle {
                        Ok(())
                    } else {
                        Err(format!(
                            "lattice {from_lattice:?}, vectors {from_vectors:?}, oracle {oracle:?}"
                        ))
                    }
                }
                _ => Err("a base is missing".into()),
            }
        }));

        legs.push(Leg::new(
            "span correspondence",
            vector_base
                .as_ref()
                .map_err(Clone::clone)
                .and_then(|vb| {
                    let chains = vb
                        .chains
                        .iter()
                        .map(|chain| {
                            chain
                                .iter()
                                .map(|v| {
                                    self.line_of(v)
                                        .filter(|&e| l.is_atom(e))
                                        .ok_or_else(|| format!("span of {v:?} is not an atom"))
                                })
                                .collect::<Result<Vec<_>, _>>()
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    verdict(verify_jnb(&h, &JordanNormalBase::canonical(chains)))
                }),
        ));

        legs.push(Leg::new(
            "irredundance",
            lattice_base
                .as_ref()
                .map_err(Clone::clone)
                .and_then(|b| match check_irredundant_base(l, b) {
                    Ok(true) => Ok(()),
                    Ok(false) => Err("base atoms are not an irredundant join".into()),
                    Err(e) => Err(e.to_string()),
                }),
        ));

        Ok(CrossReport {
            matrix: a.clone(),
            partition: oracle,
            legs,
        })
    }
}

fn verdict<W: fmt::Display>(v: Verdict<W>) -> Result<(), String> {
    match v {
        Verdict::Holds => Ok(()),
        Verdict::Fails(w) => Err(w.to_string()),
    }
}

/// Convenience wrapper: enumerate the lattice, then cross-validate.
pub fn cross_validate(p: u32, n: usize, a: &GfMatrix) -> Result<CrossReport, ModelError> {
    SubspaceLatticeModel::enumerate(p, n)?.cross_validate(a)
}

/// One check within a cross-validation run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Leg {
    pub name: &'static str,
    pub outcome: Result<(), String>,
}

impl Leg {
    fn new(name: &'static str, outcome: Result<(), String>) -> Self {
        Self { name, outcome }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossReport {
    pub matrix: GfMatrix,
    /// Block sizes from the kernel-dimension oracle.
    pub partition: Vec<usize>,
    pub legs: Vec<Leg>,
}

impl CrossReport {
    pub fn passed(&self) -> bool {
        self.legs.iter().all(|l| l.outcome.is_ok())
    }

    pub fn failures(&self) -> impl Iterator<Item = &Leg> + '_ {
        self.legs.iter().filter(|l| l.outcome.is_err())
    }
}

impl fmt::Display for CrossReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for leg in &self.legs {
            match &leg.outcome {
                Ok(()) => writeln!(f, "  {}: ok", leg.name)?,
                Err(why) => writeln!(f, "  {}: FAILED ({why})", leg.name)?,
            }
        }
        Ok(())
    }
}

/// `d`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, d: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < d - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, d, &mut Vec::new(), &mut out);
    out
}

/// Every subspace whose echelon basis has the given pivot columns: pivots
/// are 1, other pivot-column entries 0, and entries right of a row's pivot
/// in non-pivot columns range over all residues.
fn profile_subspaces(p: u32, n: usize, pivots: &[usize]) -> Vec<Subspace> {
    let free: Vec<(usize, usize)> = pivots
        .iter()
        .enumerate()
        .flat_map(|(r, &c)| ((c + 1)..n).filter(|j| !pivots.contains(j)).map(move |j| (r, j)))
        .collect();
    let mut out = Vec::new();
    let mut digits = vec![0u32; free.len()];
    loop {
        let mut rows = vec![vec![0u32; n]; pivots.len()];
        for (r, &c) in pivots.iter().enumerate() {
            rows[r][c] = 1;
        }
        for (&(r, c), &v) in free.iter().zip(&digits) {
            rows[r][c] = v;
        }
        out.push(Subspace::from_rref_rows(p, n, rows, pivots.to_vec()));
        // Odometer increment.
        let mut i = 0;
        loop {
            if i == digits.len() {
                return out;
            }
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}
