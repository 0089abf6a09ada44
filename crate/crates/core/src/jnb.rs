//! Jordan normal bases of a finite lattice with respect to a nilpotent
//! join-homomorphism.
//!
//! A base is a family of atoms arranged in chains `a_1, ..., a_k` with
//! `λ(a_i) = a_{i-1}` and `λ(a_1) = 0`, such that the chain bottoms join up
//! strictly, every higher atom strictly enlarges the running join, and
//! everything together joins to the top.
//!
//! [`compute_jnb`] builds one by induction on height: find a base of the
//! interval `[0, λ(1)]`, lift each chain by one atom through `λ`, then fill
//! the kernel with fresh singleton chains.

use std::fmt;

use thiserror::Error;

use crate::lattice::FiniteLattice;
use crate::lattice_map::JoinHom;
use crate::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JnbError {
    #[error("not nilpotent, λ^∞(1) = {stable}")]
    NotNilpotent { stable: String },
    #[error("conditions do not hold:\n{0}")]
    ConditionsFailed(String),
    #[error("{0:?} is not an atom below λ(1)")]
    NotAnAtomBelowImage(String),
    #[error("no element maps onto {0:?}")]
    NoPreimage(String),
    #[error("no atom below {below:?} maps onto {target:?}")]
    NoAtomPreimage { target: String, below: String },
    #[error("{0:?} is not below the kernel")]
    NotBelowKernel(String),
    #[error("kernel chain stalled at {0:?}: no atom below the kernel lies outside it")]
    Stalled(String),
    #[error("assembled base failed verification: {0}")]
    VerificationFailed(JnbFailure),
    #[error("lattice fails the hypotheses of the irredundance test (atomic cover: {cover}, graded: {graded})")]
    HypothesesNotMet { cover: bool, graded: bool },
    #[error("empty base has no nilpotency index")]
    EmptyBase,
}

/// A Jordan normal base: chains of atoms, longest first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JordanNormalBase {
    chains: Vec<Vec<usize>>,
}

impl JordanNormalBase {
    /// Wraps chains as given, without reordering or validation.
    pub fn from_chains(chains: Vec<Vec<usize>>) -> Self {
        Self { chains }
    }

    /// Wraps chains and sorts them into canonical order: longer chains
    /// first, ties by smaller first atom.
    pub fn canonical(chains: Vec<Vec<usize>>) -> Self {
        let mut base = Self { chains };
        base.canonicalize();
        base
    }

    pub fn canonicalize(&mut self) {
        self.chains
            .sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.first().cmp(&b.first())));
    }

    pub fn chains(&self) -> &[Vec<usize>] {
        &self.chains
    }

    pub fn into_chains(self) -> Vec<Vec<usize>> {
        self.chains
    }

    /// Chain lengths `k_t` in stored order.
    pub fn lengths(&self) -> Vec<usize> {
        self.chains.iter().map(Vec::len).collect()
    }

    /// All atoms, chain by chain.
    pub fn atoms(&self) -> Vec<usize> {
        self.chains.iter().flatten().copied().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    /// `c`, the join of the chain bottoms.
    pub fn c_element(&self, lattice: &FiniteLattice) -> usize {
        lattice.join_many(self.chains.iter().filter_map(|c| c.first().copied()))
    }

    /// Chains rendered with labels, bottom first.
    pub fn labelled(&self, lattice: &FiniteLattice) -> Vec<Vec<String>> {
        self.chains
            .iter()
            .map(|c| c.iter().map(|&a| lattice.label(a).to_owned()).collect())
            .collect()
    }
}

/// Why a family of atoms is not a Jordan normal base. Chain and position
/// indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JnbFailure {
    EmptyChain { chain: usize },
    NotAnAtom { chain: usize, pos: usize },
    DuplicateAtom { chain: usize, pos: usize },
    BottomJoinNotStrict { chain: usize },
    ExtensionNotStrict { chain: usize, pos: usize },
    TotalJoinNotTop,
    LambdaAction { chain: usize, pos: usize },
}

impl fmt::Display for JnbFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            JnbFailure::EmptyChain { chain } => write!(f, "chain {chain} is empty"),
            JnbFailure::NotAnAtom { chain, pos } => write!(f, "element at ({chain},{pos}) is not an atom"),
            JnbFailure::DuplicateAtom { chain, pos } => write!(f, "duplicate atom at ({chain},{pos})"),
            JnbFailure::BottomJoinNotStrict { chain } => {
                write!(f, "join of chain bottoms not strictly ascending at chain {chain}")
            }
            JnbFailure::ExtensionNotStrict { chain, pos } => {
                write!(f, "join not strictly ascending at ({chain},{pos})")
            }
            JnbFailure::TotalJoinNotTop => write!(f, "total join ≠ 1"),
            JnbFailure::LambdaAction { chain, pos } => write!(f, "λ action violated at ({chain},{pos})"),
        }
    }
}

/// Computes a Jordan normal base of `(L, λ)` in canonical order.
///
/// With `check_conditions` set, non-nilpotent maps and failures of the
/// three conditions are rejected up front. Without it, a violated
/// condition shows up later as a lifting error or as
/// [`JnbError::VerificationFailed`].
pub fn compute_jnb(h: &JoinHom, check_conditions: bool) -> Result<JordanNormalBase, JnbError> {
    let l = h.lattice();
    if !h.is_nilpotent() {
        return Err(JnbError::NotNilpotent {
            stable: l.label(h.stable_image()).to_owned(),
        });
    }
    if check_conditions {
        let report = h.conditions();
        if !report.all_hold() {
            return Err(JnbError::ConditionsFailed(report.render(l).to_string()));
        }
    }
    let base = JordanNormalBase::canonical(build_chains(h)?);
    if let Verdict::Fails(why) = verify_jnb(h, &base) {
        return Err(JnbError::VerificationFailed(why));
    }
    Ok(base)
}

/// The induction on height. Chains come back in construction order: lifted
/// chains of the image interval first, then the kernel singletons.
fn build_chains(h: &JoinHom) -> Result<Vec<Vec<usize>>, JnbError> {
    let l = h.lattice();
    if l.height() == 0 {
        return Ok(Vec::new());
    }
    let restriction = h.restrict_to_image();
    let mut chains: Vec<Vec<usize>> = build_chains(&restriction.hom)?
        .into_iter()
        .map(|c| c.into_iter().map(|a| restriction.embedding.parent_of(a)).collect())
        .collect();
    for chain in &mut chains {
        let top = *chain.last().expect("chains are nonempty");
        chain.push(lift_atom(h, top)?);
    }
    let c = l.join_many(chains.iter().map(|c| c[0]));
    chains.extend(extend_kernel_chain(h, c)?.into_iter().map(|b| vec![b]));
    Ok(chains)
}

/// An atom `b` with `λ(b) = a`, for an atom `a <= λ(1)`.
///
/// Takes the first element mapping onto `a`, then the first atom below it
/// that also maps onto `a`.
pub fn lift_atom(h: &JoinHom, a: usize) -> Result<usize, JnbError> {
    let l = h.lattice();
    if !l.is_atom(a) || !l.leq(a, h.image()) {
        return Err(JnbError::NotAnAtomBelowImage(l.label(a).to_owned()));
    }
    let x = (0..l.len())
        .find(|&x| h.apply(x) == a)
        .ok_or_else(|| JnbError::NoPreimage(l.label(a).to_owned()))?;
    l.atoms()
        .iter()
        .copied()
        .find(|&b| l.leq(b, x) && h.apply(b) == a)
        .ok_or_else(|| JnbError::NoAtomPreimage {
            target: l.label(a).to_owned(),
            below: l.label(x).to_owned(),
        })
}

/// Atoms `b_1, ..., b_s` below the kernel with
/// `c < c ∨ b_1 < ... < c ∨ b_1 ∨ ... ∨ b_s = z`, each the first atom not
/// yet below the running join.
pub fn extend_kernel_chain(h: &JoinHom, c: usize) -> Result<Vec<usize>, JnbError> {
    let l = h.lattice();
    let z = h.kernel();
    if !l.leq(c, z) {
        return Err(JnbError::NotBelowKernel(l.label(c).to_owned()));
    }
    let mut current = c;
    let mut added = Vec::new();
    while current != z {
        let b = l
            .atoms()
            .iter()
            .copied()
            .find(|&b| l.leq(b, z) && !l.leq(b, current))
            .ok_or_else(|| JnbError::Stalled(l.label(current).to_owned()))?;
        added.push(b);
        current = l.join(current, b);
    }
    Ok(added)
}

/// Checks `base` against the definition, in stored chain order.
///
/// Structural problems (empty chains, non-atoms, repeated atoms) are
/// reported first, then in order: strict growth of the bottom joins, strict
/// growth as each higher atom is added, total join equal to the top, and
/// the action of `λ` along each chain (positions 2..k before position 1).
pub fn verify_jnb(h: &JoinHom, base: &JordanNormalBase) -> Verdict<JnbFailure> {
    let l = h.lattice();
    let chains = base.chains();
    let mut seen = vec![false; l.len()];
    for (t, chain) in chains.iter().enumerate() {
        if chain.is_empty() {
            return Verdict::Fails(JnbFailure::EmptyChain { chain: t + 1 });
        }
        for (i, &a) in chain.iter().enumerate() {
            if a >= l.len() || !l.is_atom(a) {
                return Verdict::Fails(JnbFailure::NotAnAtom { chain: t + 1, pos: i + 1 });
            }
            if std::mem::replace(&mut seen[a], true) {
                return Verdict::Fails(JnbFailure::DuplicateAtom { chain: t + 1, pos: i + 1 });
            }
        }
    }

    let mut running = l.bottom();
    for (t, chain) in chains.iter().enumerate() {
        let next = l.join(running, chain[0]);
        if next == running {
            return Verdict::Fails(JnbFailure::BottomJoinNotStrict { chain: t + 1 });
        }
        running = next;
    }
    for (t, chain) in chains.iter().enumerate() {
        for (i, &a) in chain.iter().enumerate().skip(1) {
            let next = l.join(running, a);
            if next == running {
                return Verdict::Fails(JnbFailure::ExtensionNotStrict { chain: t + 1, pos: i + 1 });
            }
            running = next;
        }
    }
    if running != l.top() {
        return Verdict::Fails(JnbFailure::TotalJoinNotTop);
    }

    for (t, chain) in chains.iter().enumerate() {
        for i in 1..chain.len() {
            if h.apply(chain[i]) != chain[i - 1] {
                return Verdict::Fails(JnbFailure::LambdaAction { chain: t + 1, pos: i + 1 });
            }
        }
        if h.apply(chain[0]) != l.bottom() {
            return Verdict::Fails(JnbFailure::LambdaAction { chain: t + 1, pos: 1 });
        }
    }
    Verdict::Holds
}

/// The atoms of `base`, taken together, form an irredundant join. Only
/// meaningful on lattices with the atomic cover property and graded
/// chains, where this certifies a direct sum.
pub fn check_irredundant_base(lattice: &FiniteLattice, base: &JordanNormalBase) -> Result<bool, JnbError> {
    let cover = lattice.has_atomic_cover_property().holds();
    let graded = lattice.has_graded_chains().holds();
    if !cover || !graded {
        return Err(JnbError::HypothesesNotMet { cover, graded });
    }
    Ok(lattice.is_irredundant_join(&base.atoms()))
}

/// Nilpotency index read off a base: its longest chain.
pub fn nilpotency_from_jnb(base: &JordanNormalBase) -> Result<usize, JnbError> {
    base.chains().iter().map(Vec::len).max().ok_or(JnbError::EmptyBase)
}
