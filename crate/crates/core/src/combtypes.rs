//! Combinatorial types of rational marked tropical curves as compatible split
//! systems.
//!
//! A split is stored by the side that does not contain the last label `n`,
//! as a bitmask with label `l` at bit `l - 1`. Two canonical sides are
//! compatible iff they are nested or disjoint.

use serde::ser::{Serialize, SerializeStruct, Serializer};
use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported number of markings (labels must fit in a `u64`).
pub const MAX_MARKINGS: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Split {
    n: u8,
    mask: u64,
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn labels_of(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize + 1);
        m &= m - 1;
    }
    out
}

/// Lexicographic comparison of the sorted label lists of two masks.
fn lex_cmp(a: u64, b: u64) -> Ordering {
    let x = a ^ b;
    if x == 0 {
        return Ordering::Equal;
    }
    let low = x & x.wrapping_neg();
    let above = !(low | (low - 1));
    // the side holding the first differing label is smaller unless the other side stops there
    if a & low != 0 {
        if b & above != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    } else if a & above != 0 {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

impl Split {
    /// The split with `labels` on one side; either side may be given.
    pub fn new(n: usize, labels: &[usize]) -> Result<Split> {
        if !(4..=MAX_MARKINGS).contains(&n) {
            return Err(Error::InvalidSplit(format!("splits need 4 <= n <= {MAX_MARKINGS}, got n = {n}")));
        }
        let mut mask = 0u64;
        for &l in labels {
            if l == 0 || l > n {
                return Err(Error::InvalidSplit(format!("label {l} outside 1..={n}")));
            }
            if mask & 1 << (l - 1) != 0 {
                return Err(Error::InvalidSplit(format!("label {l} repeated")));
            }
            mask |= 1 << (l - 1);
        }
        Split::from_side(n, mask)
    }

    /// The split with the label set `mask` on one side.
    pub fn from_side(n: usize, mask: u64) -> Result<Split> {
        let full = full_mask(n);
        if mask & !full != 0 {
            return Err(Error::InvalidSplit(format!("labels beyond {n}")));
        }
        let size = mask.count_ones() as usize;
        if size < 2 || size + 2 > n {
            return Err(Error::InvalidSplit(format!(
                "side {:?} must have between 2 and {} labels",
                labels_of(mask),
                n - 2
            )));
        }
        let canonical = if mask >> (n - 1) & 1 == 1 { full & !mask } else { mask };
        Ok(Split { n: n as u8, mask: canonical })
    }

    pub(crate) fn from_canonical(n: usize, mask: u64) -> Split {
        debug_assert!(mask >> (n - 1) & 1 == 0);
        Split { n: n as u8, mask }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// Canonical side as a bitmask (label `l` at bit `l - 1`); never contains `n`.
    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn complement_mask(&self) -> u64 {
        full_mask(self.n()) & !self.mask
    }

    /// Sorted labels of the canonical side.
    pub fn members(&self) -> Vec<usize> {
        labels_of(self.mask)
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    /// Whether `label` lies on the canonical side.
    pub fn contains(&self, label: usize) -> bool {
        label >= 1 && self.mask >> (label - 1) & 1 == 1
    }

    pub(crate) fn compatible_mask(a: u64, b: u64) -> bool {
        let c = a & b;
        c == 0 || c == a || c == b
    }
}

impl Ord for Split {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| lex_cmp(self.mask, other.mask))
    }
}

impl PartialOrd for Split {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.members().iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

/// Whether some tree realizes both splits.
pub fn splits_compatible(a: &Split, b: &Split) -> Result<bool> {
    if a.n != b.n {
        return Err(Error::Dimension(format!("splits of n = {} and n = {}", a.n, b.n)));
    }
    Ok(Split::compatible_mask(a.mask, b.mask))
}

/// All splits of `{1..n}`, in order.
pub fn all_splits(n: usize) -> Vec<Split> {
    assert!((4..=MAX_MARKINGS).contains(&n), "n out of range");
    assert!(n <= 30, "enumerating all splits for n = {n} is not feasible");
    let mut out: Vec<Split> = (0u64..1 << (n - 1))
        .filter(|m| (2..=n - 2).contains(&(m.count_ones() as usize)))
        .map(|m| Split::from_canonical(n, m))
        .collect();
    out.sort();
    out
}

/// A cone of M_{0,n}: a set of pairwise compatible splits, kept sorted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CombType {
    n: usize,
    splits: Vec<Split>,
}

impl CombType {
    pub fn new(n: usize, splits: Vec<Split>) -> Result<CombType> {
        if !(3..=MAX_MARKINGS).contains(&n) {
            return Err(Error::InvalidArgument(format!("n = {n} out of range")));
        }
        let mut splits = splits;
        splits.sort();
        splits.dedup();
        for s in &splits {
            if s.n() != n {
                return Err(Error::Dimension(format!("split {s} is for n = {}, expected {n}", s.n())));
            }
        }
        for (i, a) in splits.iter().enumerate() {
            for b in &splits[i + 1..] {
                if !Split::compatible_mask(a.mask, b.mask) {
                    return Err(Error::InvalidSplit(format!("{a} and {b} are not compatible")));
                }
            }
        }
        if splits.len() + 3 > n {
            return Err(Error::InvalidArgument(format!("{} splits exceed n - 3 = {}", splits.len(), n - 3)));
        }
        Ok(CombType { n, splits })
    }

    /// Type from label sets, one per split, either side accepted.
    pub fn from_labels(n: usize, sides: &[Vec<usize>]) -> Result<CombType> {
        let splits = sides.iter().map(|s| Split::new(n, s)).collect::<Result<Vec<_>>>()?;
        CombType::new(n, splits)
    }

    /// Parses `"1,2;1,2,3"`; the empty string is the star.
    pub fn parse(n: usize, text: &str) -> Result<CombType> {
        let text = text.trim();
        if text.is_empty() {
            return CombType::new(n, Vec::new());
        }
        let sides = text
            .split(';')
            .map(|part| {
                part.split(',')
                    .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad label {t:?}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        CombType::from_labels(n, &sides)
    }

    /// The cone with no bounded edges (a single vertex).
    pub fn star(n: usize) -> CombType {
        CombType { n, splits: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn splits(&self) -> &[Split] {
        &self.splits
    }

    pub fn dim(&self) -> usize {
        self.splits.len()
    }

    pub fn codim(&self) -> usize {
        self.n - 3 - self.splits.len()
    }

    pub fn contains(&self, s: &Split) -> bool {
        self.splits.binary_search(s).is_ok()
    }

    pub fn is_face_of(&self, other: &CombType) -> bool {
        self.n == other.n && self.splits.iter().all(|s| other.contains(s))
    }

    pub fn is_compatible_with(&self, s: &Split) -> bool {
        self.splits.iter().all(|t| Split::compatible_mask(t.mask, s.mask))
    }

    /// `self` with `s` added; `s` must be compatible and new.
    pub(crate) fn with_split(&self, s: Split) -> CombType {
        let mut splits = self.splits.clone();
        let pos = splits.binary_search(&s).expect_err("split already present");
        splits.insert(pos, s);
        CombType { n: self.n, splits }
    }

    pub(crate) fn without(&self, idx: usize) -> CombType {
        let mut splits = self.splits.clone();
        splits.remove(idx);
        CombType { n: self.n, splits }
    }

    pub fn tree(&self) -> MarkedTree {
        tree_from_splits(self)
    }
}

impl fmt::Debug for CombType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CombType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.splits.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

impl Serialize for CombType {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("CombType", 2)?;
        st.serialize_field("n", &self.n)?;
        let splits: Vec<Vec<usize>> = self.splits.iter().map(Split::members).collect();
        st.serialize_field("splits", &splits)?;
        st.end()
    }
}

/// All types with exactly `dim` splits, in lexicographic order.
pub fn enumerate_types(n: usize, dim: usize) -> Result<Vec<CombType>> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("n = {n} must be at least 3")));
    }
    if dim + 3 > n {
        return Err(Error::InvalidArgument(format!("dim {dim} exceeds n - 3 = {}", n - 3)));
    }
    if n == 3 {
        return Ok(vec![CombType::star(3)]);
    }
    let candidates = all_splits(n);
    let mut out = Vec::new();
    extend_types(&CombType::star(n), &candidates, 0, dim, &mut out);
    Ok(out)
}

fn extend_types(base: &CombType, candidates: &[Split], from: usize, remaining: usize, out: &mut Vec<CombType>) {
    if remaining == 0 {
        out.push(base.clone());
        return;
    }
    for (i, s) in candidates.iter().enumerate().skip(from) {
        if base.contains(s) || !base.is_compatible_with(s) {
            continue;
        }
        let next = base.with_split(*s);
        // keep additions increasing so every set is produced once
        extend_types(&next, candidates, i + 1, remaining - 1, out);
    }
}

/// All types obtained from `t` by dropping one split.
pub fn codim1_faces(t: &CombType) -> Vec<CombType> {
    (0..t.splits.len()).map(|i| t.without(i)).collect()
}

/// All types obtained from `t` by adding `by` further compatible splits.
pub fn resolutions(t: &CombType, by: usize) -> Result<Vec<CombType>> {
    if t.dim() + by + 3 > t.n {
        return Err(Error::InvalidArgument(format!(
            "cannot add {by} splits to a type of dimension {} for n = {}",
            t.dim(),
            t.n
        )));
    }
    if t.n == 3 {
        return Ok(vec![t.clone()]);
    }
    let candidates: Vec<Split> =
        all_splits(t.n).into_iter().filter(|s| !t.contains(s) && t.is_compatible_with(s)).collect();
    let mut out = Vec::new();
    extend_types(t, &candidates, 0, by, &mut out);
    out.sort();
    Ok(out)
}

/// Splits that can be added to `t` (each gives a cone having `t` as a facet).
pub fn compatible_extensions(t: &CombType) -> Vec<Split> {
    if t.codim() == 0 {
        return Vec::new();
    }
    all_splits(t.n).into_iter().filter(|s| !t.contains(s) && t.is_compatible_with(s)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeEdge {
    /// Vertex on the side of label `n`.
    pub parent: usize,
    /// Vertex on the side of the canonical split labels.
    pub child: usize,
    pub split: Split,
}

/// The marked tree of a combinatorial type. Vertex 0 carries label `n`;
/// bounded edge `i` ends in vertex `i + 1` away from label `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedTree {
    n: usize,
    edges: Vec<TreeEdge>,
    leaf_vertex: Vec<usize>,
}

impl MarkedTree {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.edges.len() + 1
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    /// Vertex holding the end of marking `label`.
    pub fn leaf_vertex(&self, label: usize) -> usize {
        self.leaf_vertex[label - 1]
    }

    pub fn labels_at(&self, v: usize) -> Vec<usize> {
        (1..=self.n).filter(|&l| self.leaf_vertex[l - 1] == v).collect()
    }

    pub fn valence(&self, v: usize) -> usize {
        let leaves = self.leaf_vertex.iter().filter(|&&x| x == v).count();
        let edges = self.edges.iter().filter(|e| e.parent == v || e.child == v).count();
        leaves + edges
    }

    pub fn valences(&self) -> Vec<usize> {
        (0..self.vertex_count()).map(|v| self.valence(v)).collect()
    }

    /// Labels in the cluster below `v` (everything for the root).
    fn cluster(&self, v: usize) -> u64 {
        if v == 0 {
            full_mask(self.n)
        } else {
            self.edges[v - 1].split.mask()
        }
    }

    /// Label sets behind each edge at `v` (ends first, then child edges, then
    /// the parent edge). These partition `{1..n}`.
    pub fn sides_at(&self, v: usize) -> Vec<u64> {
        let mut sides: Vec<u64> = self.labels_at(v).iter().map(|&l| 1u64 << (l - 1)).collect();
        sides.extend(self.edges.iter().filter(|e| e.parent == v).map(|e| e.split.mask()));
        if v != 0 {
            sides.push(full_mask(self.n) & !self.cluster(v));
        }
        sides
    }

    /// Whether marking `label` sits at a vertex of valence at least 4.
    pub fn label_on_high_valence(&self, label: usize) -> bool {
        self.valence(self.leaf_vertex(label)) >= 4
    }
}

/// Builds the unique tree whose bounded edges carry exactly `t`'s splits.
pub fn tree_from_splits(t: &CombType) -> MarkedTree {
    let n = t.n;
    let parent_of = |mask: u64| -> usize {
        // the smallest cluster strictly containing `mask`, or the root
        t.splits
            .iter()
            .enumerate()
            .filter(|(_, s)| s.mask() != mask && s.mask() & mask == mask)
            .min_by_key(|(_, s)| s.len())
            .map_or(0, |(i, _)| i + 1)
    };
    let edges = t
        .splits
        .iter()
        .enumerate()
        .map(|(i, s)| TreeEdge { parent: parent_of(s.mask()), child: i + 1, split: *s })
        .collect();
    let leaf_vertex = (1..=n).map(|l| if l == n { 0 } else { parent_of(1 << (l - 1)) }).collect();
    MarkedTree { n, edges, leaf_vertex }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(n: usize, labels: &[usize]) -> Split {
        Split::new(n, labels).unwrap()
    }

    fn double_factorial(mut k: u64) -> u64 {
        let mut r = 1;
        while k > 1 {
            r *= k;
            k -= 2;
        }
        r
    }

    // counts trivalent trees by inserting leaves into edges of explicit trees
    fn count_trivalent(n: usize) -> u64 {
        fn grow(edges: &mut Vec<(usize, usize)>, next_vertex: usize, leaves: usize, target: usize) -> u64 {
            if leaves == target {
                return 1;
            }
            let mut total = 0;
            for i in 0..edges.len() {
                let (a, b) = edges[i];
                let mid = next_vertex;
                let leaf = next_vertex + 1;
                edges[i] = (a, mid);
                edges.push((mid, b));
                edges.push((mid, leaf));
                total += grow(edges, next_vertex + 2, leaves + 1, target);
                edges.pop();
                edges.pop();
                edges[i] = (a, b);
            }
            total
        }
        // three leaves 1, 2, 3 on a center vertex 0
        let mut edges = vec![(0, 1), (0, 2), (0, 3)];
        grow(&mut edges, 4, 3, n)
    }

    #[test]
    fn canonical_sides() {
        assert_eq!(sp(5, &[3, 4, 5]), sp(5, &[1, 2]));
        assert_eq!(sp(4, &[3, 4]), sp(4, &[1, 2]));
        assert_eq!(sp(4, &[3, 4]).members(), vec![1, 2]);
        assert!(Split::new(5, &[1]).is_err());
        assert!(Split::new(5, &[1, 2, 3, 4]).is_err());
        assert!(Split::new(5, &[1, 6]).is_err());
    }

    #[test]
    fn compatibility() {
        assert!(splits_compatible(&sp(5, &[1, 2]), &sp(5, &[3, 4])).unwrap());
        assert!(!splits_compatible(&sp(4, &[1, 2]), &sp(4, &[2, 3])).unwrap());
        assert!(splits_compatible(&sp(4, &[1, 2]), &sp(4, &[3, 4])).unwrap());
        assert!(splits_compatible(&sp(4, &[1, 2]), &sp(5, &[1, 2])).is_err());
    }

    #[test]
    fn split_order_is_lexicographic_on_labels() {
        let mut all = all_splits(7);
        let mut by_list = all.clone();
        by_list.sort_by_key(|s| s.members());
        assert_eq!(all, by_list);
        all.dedup();
        assert_eq!(all.len(), (1 << 6) - 7 - 1);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_types(5, 1).unwrap().len(), 10);
        assert_eq!(enumerate_types(5, 2).unwrap().len(), 15);
        assert_eq!(enumerate_types(4, 0).unwrap(), vec![CombType::star(4)]);
        assert!(enumerate_types(5, 3).is_err());
        for n in 4..=8 {
            let top = enumerate_types(n, n - 3).unwrap().len() as u64;
            assert_eq!(top, double_factorial(2 * n as u64 - 5));
            assert_eq!(top, count_trivalent(n));
        }
        for n in 5..=8 {
            let codim1 = enumerate_types(n, n - 4).unwrap().len() as u64;
            assert_eq!(codim1, (n as u64 - 3) * double_factorial(2 * n as u64 - 5) / 3);
        }
    }

    #[test]
    fn enumeration_is_sorted_and_unique() {
        let types = enumerate_types(7, 3).unwrap();
        assert!(types.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn trees() {
        let star = tree_from_splits(&CombType::star(4));
        assert_eq!(star.valences(), vec![4]);
        let t = tree_from_splits(&CombType::from_labels(5, &[vec![1, 2]]).unwrap());
        let mut v = t.valences();
        v.sort();
        assert_eq!(v, vec![3, 4]);
        let t = tree_from_splits(&CombType::from_labels(6, &[vec![1, 2], vec![1, 2, 3]]).unwrap());
        // edges: 0 = {1,2} (child 1), 1 = {1,2,3} (child 2)
        assert_eq!(t.labels_at(1), vec![1, 2]);
        assert_eq!(t.labels_at(2), vec![3]);
        assert_eq!(t.labels_at(0), vec![4, 5, 6]);
        assert_eq!(t.valences(), vec![4, 3, 3]);
        assert_eq!(t.edges()[0].parent, 2);
        assert_eq!(t.edges()[1].parent, 0);
    }

    #[test]
    fn valence_formula_holds_everywhere() {
        for n in 4..=7 {
            for d in 0..=n - 3 {
                for t in enumerate_types(n, d).unwrap() {
                    let tree = t.tree();
                    assert_eq!(tree.edges().len(), t.dim());
                    let excess: usize = tree.valences().iter().map(|v| v - 3).sum();
                    assert_eq!(n - 3 - excess, t.dim(), "{t}");
                    for v in 0..tree.vertex_count() {
                        let sides = tree.sides_at(v);
                        assert_eq!(sides.iter().fold(0, |a, s| a | s), full_mask(n));
                        assert_eq!(sides.iter().map(|s| s.count_ones()).sum::<u32>() as usize, n);
                    }
                }
            }
        }
    }

    #[test]
    fn faces_and_resolutions() {
        let t = CombType::from_labels(6, &[vec![1, 2], vec![1, 2, 3]]).unwrap();
        let faces = codim1_faces(&t);
        assert_eq!(faces.len(), 2);
        assert!(faces.contains(&CombType::from_labels(6, &[vec![1, 2]]).unwrap()));
        assert!(faces.contains(&CombType::from_labels(6, &[vec![1, 2, 3]]).unwrap()));
        let t = CombType::from_labels(5, &[vec![1, 2], vec![4, 5]]).unwrap();
        assert_eq!(codim1_faces(&t).len(), 2);
        assert_eq!(codim1_faces(&CombType::from_labels(5, &[vec![1, 2]]).unwrap()), vec![CombType::star(5)]);

        assert_eq!(resolutions(&CombType::star(4), 1).unwrap().len(), 3);
        assert_eq!(resolutions(&CombType::star(5), 1).unwrap().len(), 10);
        let with_one_high: Vec<_> = resolutions(&CombType::star(7), 1)
            .unwrap()
            .into_iter()
            .filter(|t| t.tree().label_on_high_valence(1))
            .collect();
        assert_eq!(with_one_high.len(), 50);
        assert!(resolutions(&CombType::star(4), 2).is_err());
    }

    #[test]
    fn resolutions_recover_faces() {
        for n in 4..=7 {
            for d in 0..n - 3 {
                for tau in enumerate_types(n, d).unwrap() {
                    for sigma in resolutions(&tau, 1).unwrap() {
                        assert!(codim1_faces(&sigma).contains(&tau));
                    }
                }
            }
        }
    }

    #[test]
    fn parse_and_json() {
        let t = CombType::parse(6, "1,2; 4,5,6").unwrap();
        assert_eq!(t.splits(), &[sp(6, &[1, 2]), sp(6, &[1, 2, 3])]);
        assert_eq!(serde_json::to_string(&t).unwrap(), r#"{"n":6,"splits":[[1,2],[1,2,3]]}"#);
        assert!(CombType::parse(4, "1,2;1,3").is_err());
        assert!(CombType::parse(4, "x").is_err());
    }
}
