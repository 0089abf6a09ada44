//! Explicit finite bounded lattices.
//!
//! A [`FiniteLattice`] is built from a list of labelled elements and a list
//! of cover pairs. The order is the reflexive-transitive closure of the
//! pairs; the pairs themselves need not be minimal. Construction validates
//! that every pair of elements has a unique join and meet and stores both
//! operation tables, so every later query is a table lookup.
//!
//! Elements are identified by their position in the input label list, and
//! every search in this crate breaks ties by lowest index.

use std::collections::HashMap;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::Verdict;

/// Largest lattice this crate will build. Join and meet tables are
/// quadratic in the element count.
pub const MAX_ELEMENTS: usize = 20_000;

// Table entries are stored as u16.
const _: () = assert!(MAX_ELEMENTS <= u16::MAX as usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("duplicate element label {0:?}")]
    DuplicateLabel(String),
    #[error("cover pair references unknown element {0:?}")]
    UnknownLabel(String),
    #[error("cover relation has a cycle through {0:?}")]
    CycleDetected(String),
    #[error("not a lattice: {x:?} and {y:?} have no unique {operation}")]
    NotALattice {
        x: String,
        y: String,
        operation: &'static str,
    },
    #[error("no bounded structure: {0}")]
    NoBoundedStructure(String),
    #[error("lattice has {count} elements, limit is {MAX_ELEMENTS}")]
    TooLarge { count: usize },
    #[error("{x:?} is not below {y:?}")]
    NotComparable { x: String, y: String },
}

/// A finite bounded lattice with precomputed order, cover, join and meet
/// tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    /// `up[x]` is the principal filter of `x`: all `y` with `x <= y`.
    up: Vec<FixedBitSet>,
    /// `down[y]` is the principal ideal of `y`.
    down: Vec<FixedBitSet>,
    upper_covers: Vec<Vec<usize>>,
    lower_covers: Vec<Vec<usize>>,
    join_table: Vec<u16>,
    meet_table: Vec<u16>,
    bottom: usize,
    top: usize,
    atoms: Vec<usize>,
    height: usize,
}

/// An interval `[x, y]` of a parent lattice, rebuilt as a standalone lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalEmbedding {
    pub sub: FiniteLattice,
    /// Sub-lattice index to parent index.
    pub to_parent: Vec<usize>,
    /// Parent index to sub-lattice index, for parent elements in the interval.
    pub from_parent: Vec<Option<usize>>,
}

impl IntervalEmbedding {
    pub fn parent_of(&self, e: usize) -> usize {
        self.to_parent[e]
    }

    pub fn child_of(&self, e: usize) -> Option<usize> {
        self.from_parent.get(e).copied().flatten()
    }
}

impl FiniteLattice {
    /// Builds a lattice from labels and cover pairs given by label.
    pub fn build<S: AsRef<str>>(labels: &[S], covers: &[(S, S)]) -> Result<Self, LatticeError> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_owned()).collect();
        let index = label_index(&labels)?;
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| LatticeError::UnknownLabel(s.to_owned()))
        };
        let pairs = covers
            .iter()
            .map(|(a, b)| Ok((lookup(a.as_ref())?, lookup(b.as_ref())?)))
            .collect::<Result<Vec<_>, LatticeError>>()?;
        Self::from_cover_indices(labels, &pairs)
    }

    /// Builds a lattice from labels and cover pairs given by element index.
    pub fn from_cover_indices(
        labels: Vec<String>,
        covers: &[(usize, usize)],
    ) -> Result<Self, LatticeError> {
        let n = labels.len();
        if n == 0 {
            return Err(LatticeError::NoBoundedStructure("no elements".into()));
        }
        if n > MAX_ELEMENTS {
            return Err(LatticeError::TooLarge { count: n });
        }
        let index = label_index(&labels)?;
        let mut succ = vec![Vec::new(); n];
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(LatticeError::UnknownLabel(format!("#{}", a.max(b))));
            }
            succ[a].push(b);
        }
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }

        let order = topological_order(&succ).map_err(|e| LatticeError::CycleDetected(labels[e].clone()))?;

        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for &x in order.iter().rev() {
            let mut set = FixedBitSet::with_capacity(n);
            set.insert(x);
            for &s in &succ[x] {
                set.union_with(&up[s]);
            }
            up[x] = set;
        }
        let down = transpose(&up);

        let minimal: Vec<usize> = (0..n).filter(|&x| down[x].count_ones(..) == 1).collect();
        let maximal: Vec<usize> = (0..n).filter(|&x| up[x].count_ones(..) == 1).collect();
        if minimal.len() != 1 {
            return Err(LatticeError::NoBoundedStructure(format!(
                "minimal elements {}",
                render_labels(&labels, &minimal)
            )));
        }
        if maximal.len() != 1 {
            return Err(LatticeError::NoBoundedStructure(format!(
                "maximal elements {}",
                render_labels(&labels, &maximal)
            )));
        }

        let up_count: Vec<usize> = up.iter().map(|s| s.count_ones(..)).collect();
        let down_count: Vec<usize> = down.iter().map(|s| s.count_ones(..)).collect();
        let mut join_table = vec![0u16; n * n];
        let mut meet_table = vec![0u16; n * n];
        for x in 0..n {
            for y in x..n {
                let j = extremal(&up[x], &up[y], &up_count).ok_or_else(|| LatticeError::NotALattice {
                    x: labels[x].clone(),
                    y: labels[y].clone(),
                    operation: "join",
                })?;
                let m = extremal(&down[x], &down[y], &down_count).ok_or_else(|| {
                    LatticeError::NotALattice {
                        x: labels[x].clone(),
                        y: labels[y].clone(),
                        operation: "meet",
                    }
                })?;
                join_table[x * n + y] = j as u16;
                join_table[y * n + x] = j as u16;
                meet_table[x * n + y] = m as u16;
                meet_table[y * n + x] = m as u16;
            }
        }

        Ok(Self::finish(labels, index, up, down, join_table, meet_table))
    }

    /// Derives covers, bounds, atoms and height from validated order and
    /// operation tables.
    fn finish(
        labels: Vec<String>,
        index: HashMap<String, usize>,
        up: Vec<FixedBitSet>,
        down: Vec<FixedBitSet>,
        join_table: Vec<u16>,
        meet_table: Vec<u16>,
    ) -> Self {
        let n = labels.len();
        let mut upper_covers = vec![Vec::new(); n];
        let mut lower_covers = vec![Vec::new(); n];
        for x in 0..n {
            for y in up[x].ones() {
                if y != x && down[y].intersection_count(&up[x]) == 2 {
                    upper_covers[x].push(y);
                    lower_covers[y].push(x);
                }
            }
        }
        let bottom = (0..n).find(|&x| down[x].count_ones(..) == 1).expect("validated bottom");
        let top = (0..n).find(|&x| up[x].count_ones(..) == 1).expect("validated top");
        let atoms = upper_covers[bottom].clone();

        let mut lattice = Self {
            labels,
            index,
            up,
            down,
            upper_covers,
            lower_covers,
            join_table,
            meet_table,
            bottom,
            top,
            atoms,
            height: 0,
        };
        let (_, longest) = lattice.chain_lengths();
        lattice.height = longest[top];
        lattice
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Atoms in index order.
    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    pub fn is_atom(&self, x: usize) -> bool {
        self.atoms.binary_search(&x).is_ok()
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    /// True iff `y` covers `x`.
    pub fn covers(&self, x: usize, y: usize) -> bool {
        self.upper_covers[x].binary_search(&y).is_ok()
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper_covers[x]
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower_covers[x]
    }

    /// All cover pairs `(x, y)` with `y` covering `x`, ordered by `x` then `y`.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|x| self.upper_covers[x].iter().map(move |&y| (x, y)))
            .collect()
    }

    /// Elements `y` with `x <= y`, in index order.
    pub fn above(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.up[x].ones()
    }

    /// Elements `y` with `y <= x`, in index order.
    pub fn below(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.down[x].ones()
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join_table[x * self.len() + y] as usize
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet_table[x * self.len() + y] as usize
    }

    /// Join of an arbitrary family; the empty join is the bottom element.
    pub fn join_many<I: IntoIterator<Item = usize>>(&self, xs: I) -> usize {
        xs.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// Meet of an arbitrary family; the empty meet is the top element.
    pub fn meet_many<I: IntoIterator<Item = usize>>(&self, xs: I) -> usize {
        xs.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Join of the atoms below `x`.
    pub fn atom_closure(&self, x: usize) -> usize {
        self.join_many(self.atoms.iter().copied().filter(|&a| self.leq(a, x)))
    }

    /// Every element is the join of the atoms below it. Fails with the
    /// first element that is not.
    pub fn is_atomistic(&self) -> Verdict<usize> {
        (0..self.len()).find(|&x| self.atom_closure(x) != x).into()
    }

    /// `x` is covered by `x ∨ a` for every `x` and every atom `a` not below
    /// `x`. Fails with the first `(x, a)` where it is not.
    pub fn has_atomic_cover_property(&self) -> Verdict<(usize, usize)> {
        for x in 0..self.len() {
            for &a in &self.atoms {
                let j = self.join(x, a);
                if j != x && !self.covers(x, j) {
                    return Verdict::Fails((x, a));
                }
            }
        }
        Verdict::Holds
    }

    /// All maximal chains from the bottom to any element have the same
    /// length. Fails with the first element reached by two maximal chains
    /// of different lengths.
    pub fn has_graded_chains(&self) -> Verdict<usize> {
        let (shortest, longest) = self.chain_lengths();
        (0..self.len()).find(|&x| shortest[x] != longest[x]).into()
    }

    /// Rank function, when the lattice is graded.
    pub fn rank(&self) -> Option<Vec<usize>> {
        let (shortest, longest) = self.chain_lengths();
        (shortest == longest).then_some(longest)
    }

    /// Dropping any single member strictly lowers the join. The empty family
    /// is vacuously irredundant.
    pub fn is_irredundant_join(&self, xs: &[usize]) -> bool {
        let total = self.join_many(xs.iter().copied());
        (0..xs.len()).all(|skip| {
            let rest = xs
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &x)| x);
            self.join_many(rest) != total
        })
    }

    /// The interval `[x, y]` as a standalone lattice. Element order follows
    /// the parent's index order.
    pub fn interval(&self, x: usize, y: usize) -> Result<IntervalEmbedding, LatticeError> {
        if !self.leq(x, y) {
            return Err(LatticeError::NotComparable {
                x: self.labels[x].clone(),
                y: self.labels[y].clone(),
            });
        }
        let n = self.len();
        let mut members = self.up[x].clone();
        members.intersect_with(&self.down[y]);
        let to_parent: Vec<usize> = members.ones().collect();
        let mut from_parent = vec![None; n];
        for (i, &e) in to_parent.iter().enumerate() {
            from_parent[e] = Some(i);
        }
        let m = to_parent.len();
        let restrict = |set: &FixedBitSet| {
            let mut out = FixedBitSet::with_capacity(m);
            for (i, &e) in to_parent.iter().enumerate() {
                if set.contains(e) {
                    out.insert(i);
                }
            }
            out
        };
        let up: Vec<FixedBitSet> = to_parent.iter().map(|&e| restrict(&self.up[e])).collect();
        let down: Vec<FixedBitSet> = to_parent.iter().map(|&e| restrict(&self.down[e])).collect();
        let mut join_table = vec![0u16; m * m];
        let mut meet_table = vec![0u16; m * m];
        for (i, &a) in to_parent.iter().enumerate() {
            for (j, &b) in to_parent.iter().enumerate() {
                let jn = from_parent[self.join(a, b)].expect("intervals are closed under join");
                let mt = from_parent[self.meet(a, b)].expect("intervals are closed under meet");
                join_table[i * m + j] = jn as u16;
                meet_table[i * m + j] = mt as u16;
            }
        }
        let labels: Vec<String> = to_parent.iter().map(|&e| self.labels[e].clone()).collect();
        let index = labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        let sub = Self::finish(labels, index, up, down, join_table, meet_table);
        Ok(IntervalEmbedding {
            sub,
            to_parent,
            from_parent,
        })
    }

    /// Hasse diagram in Graphviz DOT, drawn bottom to top.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=plaintext];\n");
        for (i, label) in self.labels.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label={label:?}];");
        }
        for (x, y) in self.cover_pairs() {
            let _ = writeln!(out, "  n{x} -> n{y} [arrowhead=none];");
        }
        out.push_str("}\n");
        out
    }

    /// Shortest and longest cover-path lengths from the bottom to each
    /// element.
    fn chain_lengths(&self) -> (Vec<usize>, Vec<usize>) {
        let n = self.len();
        // Sorting by ideal size gives a linear extension.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| self.down[x].count_ones(..));
        let mut shortest = vec![usize::MAX; n];
        let mut longest = vec![0; n];
        shortest[self.bottom] = 0;
        for &x in &order {
            for &y in &self.upper_covers[x] {
                shortest[y] = shortest[y].min(shortest[x] + 1);
                longest[y] = longest[y].max(longest[x] + 1);
            }
        }
        (shortest, longest)
    }
}

fn label_index(labels: &[String]) -> Result<HashMap<String, usize>, LatticeError> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(LatticeError::DuplicateLabel(l.clone()));
        }
    }
    Ok(index)
}

/// Kahn's algorithm. On a cycle, returns the lowest-index element left over.
fn topological_order(succ: &[Vec<usize>]) -> Result<Vec<usize>, usize> {
    let n = succ.len();
    let mut indegree = vec![0usize; n];
    for s in succ.iter().flatten() {
        indegree[*s] += 1;
    }
    let mut stack: Vec<usize> = (0..n).rev().filter(|&x| indegree[x] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(x) = stack.pop() {
        order.push(x);
        for &s in &succ[x] {
            indegree[s] -= 1;
            if indegree[s] == 0 {
                stack.push(s);
            }
        }
    }
    if order.len() == n {
        Ok(order)
    } else {
        Err((0..n).find(|&x| indegree[x] > 0).expect("leftover element"))
    }
}

fn transpose(rows: &[FixedBitSet]) -> Vec<FixedBitSet> {
    let n = rows.len();
    let mut out = vec![FixedBitSet::with_capacity(n); n];
    for (x, row) in rows.iter().enumerate() {
        for y in row.ones() {
            out[y].insert(x);
        }
    }
    out
}

/// The element of `a ∩ b` whose own filter (or ideal) is all of `a ∩ b`,
/// i.e. the least upper (greatest lower) bound, if there is one.
fn extremal(a: &FixedBitSet, b: &FixedBitSet, size: &[usize]) -> Option<usize> {
    let mut common = a.clone();
    common.intersect_with(b);
    let total = common.count_ones(..);
    common.ones().max_by_key(|&e| (size[e], std::cmp::Reverse(e))).filter(|&e| size[e] == total)
}

fn render_labels(labels: &[String], xs: &[usize]) -> String {
    if xs.is_empty() {
        return "(none)".into();
    }
    xs.iter().map(|&x| format!("{:?}", labels[x])).collect::<Vec<_>>().join(", ")
}
