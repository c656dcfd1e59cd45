//! Isomorphism classes of leaf-colored trees. Two labeled types lie in the same
//! orbit under permutations of equally colored labels iff their colored trees
//! are isomorphic, so codimension-one types can be enumerated up to relabeling
//! the contracted markings and ends of equal direction.

use rand::Rng;
use std::collections::BTreeMap;

use super::curve::ParamType;
use super::degree::Degree;
use crate::combtypes::{CombType, Split};
use crate::error::Result;

/// A tree whose leaves carry a tag (a color or a label) and whose inner
/// vertices have valence at least three.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafTree {
    adj: Vec<Vec<usize>>,
    tag: Vec<Option<usize>>,
}

impl LeafTree {
    /// One inner vertex joined to a leaf for every tag.
    pub fn star(tags: &[usize]) -> LeafTree {
        let mut adj = vec![Vec::new()];
        let mut tag = vec![None];
        for &t in tags {
            let v = adj.len();
            adj.push(vec![0]);
            adj[0].push(v);
            tag.push(Some(t));
        }
        LeafTree { adj, tag }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.tag[v].is_some()
    }

    pub fn leaf_count(&self) -> usize {
        self.tag.iter().filter(|t| t.is_some()).count()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, nb) in self.adj.iter().enumerate() {
            for &b in nb {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Edges between two inner vertices.
    pub fn inner_edges(&self) -> Vec<(usize, usize)> {
        self.edges().into_iter().filter(|&(a, b)| !self.is_leaf(a) && !self.is_leaf(b)).collect()
    }

    pub fn inner_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertex_count()).filter(|&v| !self.is_leaf(v))
    }

    /// Subdivides the edge `a`-`b` and hangs a new leaf off the new vertex.
    pub fn insert_on_edge(&self, a: usize, b: usize, tag: usize) -> LeafTree {
        let mut t = self.clone();
        let w = t.adj.len();
        let l = w + 1;
        for (x, y) in [(a, b), (b, a)] {
            let slot = t.adj[x].iter().position(|&z| z == y).expect("edge exists");
            t.adj[x][slot] = w;
        }
        t.adj.push(vec![a, b, l]);
        t.tag.push(None);
        t.adj.push(vec![w]);
        t.tag.push(Some(tag));
        t
    }

    /// Hangs a new leaf off the inner vertex `v`.
    pub fn attach(&self, v: usize, tag: usize) -> LeafTree {
        let mut t = self.clone();
        let l = t.adj.len();
        t.adj[v].push(l);
        t.adj.push(vec![v]);
        t.tag.push(Some(tag));
        t
    }

    fn farthest(&self, from: usize) -> (usize, Vec<usize>) {
        let mut parent = vec![usize::MAX; self.vertex_count()];
        let mut order = vec![from];
        parent[from] = from;
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            for &w in &self.adj[v] {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    order.push(w);
                }
            }
            i += 1;
        }
        (*order.last().expect("nonempty"), parent)
    }

    /// The center (one vertex) or bicenter (two adjacent vertices).
    fn centers(&self) -> Vec<usize> {
        let (a, _) = self.farthest(0);
        let (b, parent) = self.farthest(a);
        let mut path = vec![b];
        while *path.last().unwrap() != a {
            let v = *path.last().unwrap();
            path.push(parent[v]);
        }
        let k = path.len();
        if k % 2 == 1 {
            vec![path[k / 2]]
        } else {
            vec![path[k / 2 - 1], path[k / 2]]
        }
    }

    fn encode(&self, v: usize, from: usize) -> (String, u64) {
        if let Some(t) = self.tag[v] {
            return (format!("{t}"), 1);
        }
        let mut kids: Vec<(String, u64)> =
            self.adj[v].iter().filter(|&&w| w != from).map(|&w| self.encode(w, v)).collect();
        kids.sort();
        let mut aut: u64 = kids.iter().map(|k| k.1).product();
        let mut run = 1u64;
        for i in 1..kids.len() {
            if kids[i].0 == kids[i - 1].0 {
                run += 1;
                aut *= run;
            } else {
                run = 1;
            }
        }
        let body: Vec<&str> = kids.iter().map(|k| k.0.as_str()).collect();
        (format!("({})", body.join(",")), aut)
    }

    /// A string equal for two trees iff they are isomorphic preserving tags,
    /// and the order of the tag-preserving automorphism group.
    pub fn canonical(&self) -> (String, u64) {
        match self.centers().as_slice() {
            [c] => self.encode(*c, usize::MAX),
            [a, b] => {
                let x = self.encode(*a, *b);
                let y = self.encode(*b, *a);
                let aut = x.1 * y.1 * if x.0 == y.0 { 2 } else { 1 };
                let (lo, hi) = if x.0 <= y.0 { (x.0, y.0) } else { (y.0, x.0) };
                (format!("[{lo}|{hi}]"), aut)
            }
            _ => unreachable!(),
        }
    }

    /// The combinatorial type on `n` labels; leaf tags are labels.
    pub fn to_comb_type(&self, n: usize) -> Result<CombType> {
        self.comb_type_with(n, |_, t| t)
    }

    /// The combinatorial type where the `k`-th leaf with color `c` (in vertex
    /// order) gets label `labels[c][k]`.
    pub fn to_comb_type_colored(&self, labels: &[Vec<usize>]) -> Result<CombType> {
        let mut next = vec![0usize; labels.len()];
        let mut label = vec![0usize; self.vertex_count()];
        for (v, tag) in self.tag.iter().enumerate() {
            if let Some(c) = *tag {
                label[v] = labels[c][next[c]];
                next[c] += 1;
            }
        }
        let n = labels.iter().map(Vec::len).sum();
        self.comb_type_with(n, |v, _| label[v])
    }

    fn comb_type_with(&self, n: usize, label: impl Fn(usize, usize) -> usize) -> Result<CombType> {
        let mut splits = Vec::new();
        for (a, b) in self.inner_edges() {
            let mut mask = 0u64;
            let mut stack = vec![(b, a)];
            while let Some((v, from)) = stack.pop() {
                if let Some(t) = self.tag[v] {
                    mask |= 1 << (label(v, t) - 1);
                }
                stack.extend(self.adj[v].iter().filter(|&&w| w != from).map(|&w| (w, v)));
            }
            splits.push(Split::from_side(n, mask)?);
        }
        splits.sort();
        CombType::new(n, splits)
    }
}

/// Canonical trees with their automorphism counts.
pub type TreeClasses = Vec<(LeafTree, u64)>;

/// Representatives of the isomorphism classes of trivalent trees and of trees
/// with exactly one 4-valent vertex, with leaves colored by `colors`.
/// Returns `(top, codim_one)`, each with automorphism group orders.
pub fn colored_trees(colors: &[usize]) -> (TreeClasses, TreeClasses) {
    assert!(colors.len() >= 3, "need at least three leaves");
    let mut top: BTreeMap<String, (LeafTree, u64)> = BTreeMap::new();
    let star = LeafTree::star(&colors[..3]);
    let (key, aut) = star.canonical();
    top.insert(key, (star, aut));
    let mut codim: BTreeMap<String, (LeafTree, u64)> = BTreeMap::new();
    for &c in &colors[3..] {
        let mut next_top = BTreeMap::new();
        let mut next_codim = BTreeMap::new();
        for (t, _) in top.values() {
            for (a, b) in t.edges() {
                let s = t.insert_on_edge(a, b, c);
                let (key, aut) = s.canonical();
                next_top.entry(key).or_insert((s, aut));
            }
            for v in t.inner_vertices() {
                let s = t.attach(v, c);
                let (key, aut) = s.canonical();
                next_codim.entry(key).or_insert((s, aut));
            }
        }
        for (t, _) in codim.values() {
            for (a, b) in t.edges() {
                let s = t.insert_on_edge(a, b, c);
                let (key, aut) = s.canonical();
                next_codim.entry(key).or_insert((s, aut));
            }
        }
        top = next_top;
        codim = next_codim;
    }
    (top.into_values().collect(), codim.into_values().collect())
}

/// A codimension-one type together with the number of labeled types in its
/// orbit under permuting contracted markings and equal ends.
#[derive(Debug, Clone)]
pub struct TypeOrbit {
    pub param: ParamType,
    pub size: u128,
    pub automorphisms: u64,
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

/// The label blocks permuted by the symmetry group: contracted markings
/// first, then one block per class of equal directions.
pub fn label_blocks(degree: &Degree) -> Vec<Vec<usize>> {
    let n = degree.m() - 1;
    let mut blocks = vec![(1..=n).collect::<Vec<_>>()];
    for class in degree.classes() {
        blocks.push(class.iter().map(|i| n + 1 + i).collect());
    }
    blocks
}

/// One representative per orbit of codimension-one types with `n = m - 1`.
pub fn codim_one_orbits(degree: &Degree) -> Result<Vec<TypeOrbit>> {
    let n = degree.m() - 1;
    let blocks = label_blocks(degree);
    let colors: Vec<usize> = blocks.iter().enumerate().flat_map(|(c, b)| std::iter::repeat(c).take(b.len())).collect();
    let group: u128 = blocks.iter().map(|b| factorial(b.len())).product();
    let (_, codim) = colored_trees(&colors);
    codim
        .into_iter()
        .map(|(t, aut)| {
            let ctype = t.to_comb_type_colored(&blocks)?;
            Ok(TypeOrbit {
                param: ParamType::new(n, degree.clone(), ctype)?,
                size: group / aut as u128,
                automorphisms: aut,
            })
        })
        .collect()
}

/// A uniformly random trivalent labeled tree on `n` labels.
pub fn random_top_tree<R: Rng>(n: usize, rng: &mut R) -> LeafTree {
    let mut t = LeafTree::star(&[1, 2, 3]);
    for label in 4..=n {
        let edges = t.edges();
        let (a, b) = edges[rng.gen_range(0..edges.len())];
        t = t.insert_on_edge(a, b, label);
    }
    t
}

/// A random codimension-one type: a random trivalent tree with one random
/// bounded edge contracted.
pub fn random_codim_one<R: Rng>(degree: &Degree, rng: &mut R) -> Result<ParamType> {
    let n = degree.m() - 1;
    let total = n + degree.m();
    let top = random_top_tree(total, rng).to_comb_type(total)?;
    let drop = rng.gen_range(0..top.splits().len());
    ParamType::new(n, degree.clone(), top.without(drop))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combtypes::enumerate_types;
    use rand::rngs::StdRng;
    use rand::SeedableRng;
    use std::collections::HashMap;

    fn double_factorial(k: u128) -> u128 {
        (1..=k).rev().step_by(2).product()
    }

    /// Rebuilds the colored tree of a labeled type.
    fn colored_key(t: &CombType, color_of: &[usize]) -> String {
        let tree = t.tree();
        let mut lt = LeafTree { adj: vec![Vec::new(); tree.vertex_count()], tag: vec![None; tree.vertex_count()] };
        for e in tree.edges() {
            lt.adj[e.parent].push(e.child);
            lt.adj[e.child].push(e.parent);
        }
        for label in 1..=t.n() {
            let v = lt.adj.len();
            let at = tree.leaf_vertex(label);
            lt.adj.push(vec![at]);
            lt.adj[at].push(v);
            lt.tag.push(Some(color_of[label - 1]));
        }
        lt.canonical().0
    }

    #[test]
    fn orbits_match_brute_force() {
        // labels 1..3 red, 4..5 green, 6 blue
        let color_of = [0, 0, 0, 1, 1, 2];
        let blocks = vec![vec![1, 2, 3], vec![4, 5], vec![6]];
        let (top, codim) = colored_trees(&color_of);
        for (trees, dim) in [(top, 3), (codim, 2)] {
            let mut counts: HashMap<String, u128> = HashMap::new();
            for t in enumerate_types(6, dim).unwrap() {
                *counts.entry(colored_key(&t, &color_of)).or_default() += 1;
            }
            assert_eq!(counts.len(), trees.len());
            for (t, aut) in trees {
                let key = t.canonical().0;
                assert_eq!(counts[&key], 12 / aut as u128, "{key}");
                let back = t.to_comb_type_colored(&blocks).unwrap();
                assert_eq!(colored_key(&back, &color_of), key);
            }
        }
    }

    #[test]
    fn orbit_sizes_sum_to_codim_one_count() {
        for d in 1..=2 {
            let degree = Degree::standard(d).unwrap();
            let total = 2 * degree.m() - 1;
            let orbits = codim_one_orbits(&degree).unwrap();
            let sum: u128 = orbits.iter().map(|o| o.size).sum();
            // every codim-one type has three resolutions, every top type n - 3 faces
            let expected = double_factorial(2 * total as u128 - 5) * (total as u128 - 3) / 3;
            assert_eq!(sum, expected, "degree {d}");
            assert!(orbits.iter().all(|o| o.param.codim() == 1));
        }
    }

    #[test]
    fn random_types_are_codim_one() {
        let degree = Degree::standard(3).unwrap();
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let p = random_codim_one(&degree, &mut rng).unwrap();
            assert_eq!(p.codim(), 1);
            assert_eq!(p.comb_type().n(), 17);
        }
    }
}
