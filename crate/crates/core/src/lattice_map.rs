//! Join-homomorphisms on finite lattices and the three conditions a pair
//! `(L, λ)` needs for a Jordan normal base to exist.

use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::lattice::{FiniteLattice, IntervalEmbedding};
use crate::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("map has {got} values, lattice has {expected} elements")]
    WrongLength { expected: usize, got: usize },
    #[error("map value #{0} is not an element")]
    OutOfRange(usize),
    #[error("map is missing a value for {0:?}")]
    MissingValue(String),
    #[error("map sends the bottom element to {0:?}")]
    ZeroNotFixed(String),
    #[error("not a join-homomorphism: λ({x} ∨ {y}) = {lhs} but λ({x}) ∨ λ({y}) = {rhs}")]
    NotJoinHom {
        x: String,
        y: String,
        lhs: String,
        rhs: String,
    },
    #[error("kernel law fails at {0:?}")]
    KernelMismatch(String),
}

/// A join-homomorphism `λ: L → L` stored as a full value table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JoinHom {
    lattice: Arc<FiniteLattice>,
    values: Vec<usize>,
    image: usize,
    kernel: usize,
    nilpotency: Option<usize>,
}

/// `λ` restricted to the interval `[0, λ(1)]`, together with the embedding
/// of that interval into the original lattice.
#[derive(Debug, Clone)]
pub struct Restriction {
    pub hom: JoinHom,
    pub embedding: IntervalEmbedding,
}

impl JoinHom {
    /// Validates `values` as a join-homomorphism on `lattice` and caches
    /// image, kernel and nilpotency index.
    pub fn new(lattice: Arc<FiniteLattice>, values: Vec<usize>) -> Result<Self, MapError> {
        let n = lattice.len();
        if values.len() != n {
            return Err(MapError::WrongLength {
                expected: n,
                got: values.len(),
            });
        }
        if let Some(&bad) = values.iter().find(|&&v| v >= n) {
            return Err(MapError::OutOfRange(bad));
        }
        let l = &*lattice;
        if values[l.bottom()] != l.bottom() {
            return Err(MapError::ZeroNotFixed(l.label(values[l.bottom()]).to_owned()));
        }
        for x in 0..n {
            for y in x + 1..n {
                let lhs = values[l.join(x, y)];
                let rhs = l.join(values[x], values[y]);
                if lhs != rhs {
                    return Err(MapError::NotJoinHom {
                        x: l.label(x).to_owned(),
                        y: l.label(y).to_owned(),
                        lhs: l.label(lhs).to_owned(),
                        rhs: l.label(rhs).to_owned(),
                    });
                }
            }
        }
        let image = values[l.top()];
        let kernel = l.join_many((0..n).filter(|&x| values[x] == l.bottom()));
        if let Some(x) = (0..n).find(|&x| (values[x] == l.bottom()) != l.leq(x, kernel)) {
            return Err(MapError::KernelMismatch(l.label(x).to_owned()));
        }
        let mut hom = Self {
            lattice,
            values,
            image,
            kernel,
            nilpotency: None,
        };
        hom.nilpotency = hom.compute_nilpotency();
        Ok(hom)
    }

    /// The constant map onto the bottom element.
    pub fn zero(lattice: Arc<FiniteLattice>) -> Self {
        let values = vec![lattice.bottom(); lattice.len()];
        Self::new(lattice, values).expect("the zero map is a join-homomorphism")
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn lattice_arc(&self) -> &Arc<FiniteLattice> {
        &self.lattice
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    /// `λ^m(x)`; `λ^0` is the identity.
    pub fn apply_power(&self, x: usize, m: usize) -> usize {
        (0..m).fold(x, |acc, _| self.values[acc])
    }

    /// `w = λ(1)`.
    pub fn image(&self) -> usize {
        self.image
    }

    /// `z`, the join of everything `λ` sends to the bottom.
    pub fn kernel(&self) -> usize {
        self.kernel
    }

    /// Least `k >= 1` with `λ^k = 0`, if any.
    pub fn nilpotency_index(&self) -> Option<usize> {
        self.nilpotency
    }

    pub fn is_nilpotent(&self) -> bool {
        self.nilpotency.is_some()
    }

    /// The value at which `1, λ(1), λ²(1), ...` becomes constant.
    pub fn stable_image(&self) -> usize {
        let mut cur = self.lattice.top();
        loop {
            let next = self.values[cur];
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    fn compute_nilpotency(&self) -> Option<usize> {
        let l = &self.lattice;
        let mut cur = l.top();
        // The sequence λ^i(1) is weakly decreasing, so it either reaches the
        // bottom or stalls within height + 1 steps.
        for k in 1..=l.height() + 1 {
            let next = self.values[cur];
            if next == l.bottom() {
                return Some(k);
            }
            if next == cur {
                return None;
            }
            cur = next;
        }
        None
    }

    /// All `u <= bound` with `λ(u) = target`, in index order.
    pub fn preimages_below(&self, target: usize, bound: usize) -> Vec<usize> {
        self.lattice
            .below(bound)
            .filter(|&u| self.values[u] == target)
            .collect()
    }

    /// `λ` restricted to `[0, λ(1)]` as a map on the standalone interval.
    pub fn restrict_to_image(&self) -> Restriction {
        let l = &self.lattice;
        let embedding = l
            .interval(l.bottom(), self.image)
            .expect("bottom is below every element");
        let values = embedding
            .to_parent
            .iter()
            .map(|&e| {
                embedding
                    .child_of(self.values[e])
                    .expect("λ maps [0, w] into itself")
            })
            .collect();
        let hom = JoinHom::new(Arc::new(embedding.sub.clone()), values)
            .expect("restriction of a join-homomorphism to [0, w]");
        Restriction { hom, embedding }
    }

    pub fn check_jnb2(&self) -> Verdict<(usize, usize)> {
        check_jnb2(self)
    }

    pub fn check_jnb3(&self) -> Verdict<(usize, usize)> {
        check_jnb3(self)
    }

    pub fn conditions(&self) -> ConditionReport {
        ConditionReport {
            jnb1: check_jnb1(&self.lattice),
            jnb2: Some(check_jnb2(self)),
            jnb3: Some(check_jnb3(self)),
        }
    }
}

/// Finite height (always, for a finite lattice) and atomistic.
pub fn check_jnb1(lattice: &FiniteLattice) -> Verdict<usize> {
    lattice.is_atomistic()
}

/// For every `x <= y` with `λ(x) = λ(y)` some `u` with `λ(u) = 0` has
/// `x ∨ u = y`. Fails with the first such `(x, y)` in index order that has
/// no `u`.
///
/// Any such `u` lies below `y ∧ z`, and if `u` works then so does every
/// element between `u` and `y ∧ z`. So the pair passes exactly when
/// `x ∨ (y ∧ z) = y`.
pub fn check_jnb2(h: &JoinHom) -> Verdict<(usize, usize)> {
    let l = h.lattice();
    let z = h.kernel();
    for x in 0..l.len() {
        for y in l.above(x) {
            if h.apply(x) == h.apply(y) && l.join(x, l.meet(y, z)) != y {
                return Verdict::Fails((x, y));
            }
        }
    }
    Verdict::Holds
}

/// For every `x`, `λ` maps `[0, x]` onto `[0, λ(x)]`. Fails with the first
/// `x` in index order that misses something, paired with the first missed
/// target.
pub fn check_jnb3(h: &JoinHom) -> Verdict<(usize, usize)> {
    let l = h.lattice();
    let n = l.len();
    for x in 0..n {
        let mut hit = FixedBitSet::with_capacity(n);
        for u in l.below(x) {
            hit.insert(h.apply(u));
        }
        if let Some(t) = l.below(h.apply(x)).find(|&t| !hit.contains(t)) {
            return Verdict::Fails((x, t));
        }
    }
    Verdict::Holds
}

/// Verdicts for the three conditions. `jnb2` and `jnb3` are absent when no
/// map was supplied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub jnb1: Verdict<usize>,
    pub jnb2: Option<Verdict<(usize, usize)>>,
    pub jnb3: Option<Verdict<(usize, usize)>>,
}

impl ConditionReport {
    pub fn lattice_only(lattice: &FiniteLattice) -> Self {
        Self {
            jnb1: check_jnb1(lattice),
            jnb2: None,
            jnb3: None,
        }
    }

    /// Every evaluated condition holds.
    pub fn all_hold(&self) -> bool {
        self.jnb1.holds()
            && self.jnb2.is_none_or(|v| v.holds())
            && self.jnb3.is_none_or(|v| v.holds())
    }

    /// Human-readable report with labels from `lattice`.
    pub fn render<'a>(&'a self, lattice: &'a FiniteLattice) -> impl fmt::Display + 'a {
        RenderedReport {
            report: self,
            lattice,
        }
    }
}

struct RenderedReport<'a> {
    report: &'a ConditionReport,
    lattice: &'a FiniteLattice,
}

impl fmt::Display for RenderedReport<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.lattice;
        match self.report.jnb1 {
            Verdict::Holds => writeln!(f, "jnb1: true")?,
            Verdict::Fails(x) => writeln!(
                f,
                "jnb1: false (witness {:?} is not a join of atoms)",
                l.label(x)
            )?,
        }
        match self.report.jnb2 {
            None => writeln!(f, "jnb2: skipped (no map)")?,
            Some(Verdict::Holds) => writeln!(f, "jnb2: true")?,
            Some(Verdict::Fails((x, y))) => writeln!(
                f,
                "jnb2: false (witness x={:?}, y={:?}: λ(x) = λ(y) but no u with λ(u) = 0 has x ∨ u = y)",
                l.label(x),
                l.label(y)
            )?,
        }
        match self.report.jnb3 {
            None => writeln!(f, "jnb3: skipped (no map)"),
            Some(Verdict::Holds) => writeln!(f, "jnb3: true"),
            Some(Verdict::Fails((x, t))) => writeln!(
                f,
                "jnb3: false (witness x={:?}, target={:?}: no u <= x with λ(u) = target)",
                l.label(x),
                l.label(t)
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b2() -> Arc<FiniteLattice> {
        Arc::new(
            FiniteLattice::build(&["0", "a", "b", "1"], &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])
                .unwrap(),
        )
    }

    fn chain4() -> Arc<FiniteLattice> {
        Arc::new(FiniteLattice::build(&["0", "a", "b", "1"], &[("0", "a"), ("a", "b"), ("b", "1")]).unwrap())
    }

    /// 1 ↦ b ↦ a ↦ 0 on the chain 0 < a < b < 1.
    fn shift() -> JoinHom {
        JoinHom::new(chain4(), vec![0, 0, 1, 2]).unwrap()
    }

    /// Sub(GF(2)^2) as labelled in the subspace module: 0, <e2>, <e1>, <e1+e2>, plane.
    fn m3() -> Arc<FiniteLattice> {
        Arc::new(
            FiniteLattice::build(
                &["0", "01", "10", "11", "10;01"],
                &[
                    ("0", "01"),
                    ("0", "10"),
                    ("0", "11"),
                    ("01", "10;01"),
                    ("10", "10;01"),
                    ("11", "10;01"),
                ],
            )
            .unwrap(),
        )
    }

    /// Induced map of [[0,1],[0,0]]: e2 ↦ e1, e1 ↦ 0, e1+e2 ↦ e1.
    fn jordan_block() -> JoinHom {
        JoinHom::new(m3(), vec![0, 2, 0, 2, 2]).unwrap()
    }

    #[test]
    fn build_examples() {
        let zero = JoinHom::zero(b2());
        assert_eq!((zero.image(), zero.kernel(), zero.nilpotency_index()), (0, 3, Some(1)));

        let fixed = JoinHom::new(b2(), vec![0, 2, 2, 2]).unwrap();
        assert_eq!((fixed.image(), fixed.kernel()), (2, 0));

        let bad = JoinHom::new(b2(), vec![0, 2, 0, 0]);
        assert_eq!(
            bad,
            Err(MapError::NotJoinHom {
                x: "a".into(),
                y: "b".into(),
                lhs: "0".into(),
                rhs: "b".into()
            })
        );

        assert_eq!(
            JoinHom::new(b2(), vec![1, 1, 1, 1]),
            Err(MapError::ZeroNotFixed("a".into()))
        );
        assert!(matches!(
            JoinHom::new(b2(), vec![0, 1]),
            Err(MapError::WrongLength { .. })
        ));
    }

    #[test]
    fn powers() {
        let h = shift();
        assert_eq!(h.apply_power(3, 0), 3);
        assert_eq!(h.apply_power(3, 2), 1);
        assert_eq!(JoinHom::zero(b2()).apply_power(3, 1), 0);
    }

    #[test]
    fn nilpotency_examples() {
        assert_eq!(JoinHom::zero(b2()).nilpotency_index(), Some(1));
        assert_eq!(shift().nilpotency_index(), Some(3));
        let fixed = JoinHom::new(b2(), vec![0, 2, 2, 2]).unwrap();
        assert_eq!(fixed.nilpotency_index(), None);
        assert_eq!(fixed.stable_image(), 2);
        assert_eq!(jordan_block().nilpotency_index(), Some(2));
    }

    #[test]
    fn one_element_lattice_is_nilpotent_of_index_one() {
        let one = Arc::new(FiniteLattice::build::<&str>(&["0"], &[]).unwrap());
        assert_eq!(JoinHom::zero(one).nilpotency_index(), Some(1));
    }

    #[test]
    fn jnb1_examples() {
        assert!(check_jnb1(&m3()).holds());
        let n5 = FiniteLattice::build(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("a", "c"), ("c", "1"), ("0", "b"), ("b", "1")],
        )
        .unwrap();
        assert_eq!(check_jnb1(&n5), Verdict::Fails(3));
        let z4 = FiniteLattice::build(&["0", "A", "M"], &[("0", "A"), ("A", "M")]).unwrap();
        assert_eq!(check_jnb1(&z4), Verdict::Fails(2));
    }

    #[test]
    fn jnb2_examples() {
        assert!(jordan_block().check_jnb2().holds());
        let fixed = JoinHom::new(b2(), vec![0, 2, 2, 2]).unwrap();
        assert_eq!(fixed.check_jnb2(), Verdict::Fails((1, 3)));
        let b3 = Arc::new(crate::fixtures::boolean_lattice(3).unwrap());
        assert!(JoinHom::zero(b3).check_jnb2().holds());
    }

    #[test]
    fn jnb3_examples() {
        assert!(jordan_block().check_jnb3().holds());
        let h = JoinHom::new(b2(), vec![0, 3, 0, 3]).unwrap();
        // Both a and b are missed below a; the index-order witness is a.
        assert_eq!(h.check_jnb3(), Verdict::Fails((1, 1)));
        assert!(JoinHom::zero(b2()).check_jnb3().holds());
    }

    #[test]
    fn preimage_examples() {
        assert_eq!(JoinHom::zero(b2()).preimages_below(0, 3), vec![0, 1, 2, 3]);
        assert_eq!(shift().preimages_below(1, 3), vec![2]);
        // a is not below λ(a) = 0.
        assert!(shift().preimages_below(2, 1).is_empty());
    }

    #[test]
    fn restriction_examples() {
        let r = JoinHom::zero(b2()).restrict_to_image();
        assert_eq!(r.hom.lattice().len(), 1);

        let r = shift().restrict_to_image();
        assert_eq!(r.hom.lattice().labels(), &["0", "a", "b"]);
        assert_eq!(r.hom.values(), &[0, 0, 1]);

        let r = jordan_block().restrict_to_image();
        assert_eq!(r.hom.lattice().labels(), &["0", "10"]);
        assert_eq!(r.hom.values(), &[0, 0]);
        for (i, &p) in r.embedding.to_parent.iter().enumerate() {
            assert_eq!(r.embedding.to_parent[r.hom.apply(i)], jordan_block().apply(p));
        }
    }

    #[test]
    fn report_rendering_uses_labels() {
        let fixed = JoinHom::new(b2(), vec![0, 2, 2, 2]).unwrap();
        let text = fixed.conditions().render(fixed.lattice()).to_string();
        assert!(text.contains("jnb1: true"));
        assert!(text.contains("jnb2: false (witness x=\"a\", y=\"1\""));
    }
}
