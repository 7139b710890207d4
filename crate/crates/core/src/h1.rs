//! Degree-1 Čech cohomology: cocycles, coboundary equivalence, pointed
//! class sets and the maps induced on them.
//!
//! Enumeration is exhaustive with unit propagation. Cocycles are gauge
//! fixed to the identity on a spanning tree; the residual gauge action on
//! tree-trivial cocycles is conjugation by a single group element, so
//! classes are conjugation orbits. Canonical representatives are always
//! taken with respect to the BFS tree rooted at vertex 0, which makes them
//! independent of the tree actually used for the search.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::budget::{Budget, SearchStats};
use crate::complexes::{spanning_tree, Nerve, SpanningTree, Vertex};
use crate::error::{Error, Result};
use crate::groups::{same_group, AutData, CrossedModule, Elem, FiniteGroup, GroupMorphism};

/// A group-valued assignment on the increasing edges of a nerve. Values on
/// reversed edges are defined by inversion, `g_ji = g_ij^{-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneCochain {
    nerve: Arc<Nerve>,
    group: Arc<FiniteGroup>,
    values: Vec<Elem>,
}

impl OneCochain {
    pub fn trivial(nerve: &Arc<Nerve>, group: &Arc<FiniteGroup>) -> Self {
        OneCochain {
            nerve: Arc::clone(nerve),
            group: Arc::clone(group),
            values: vec![0; nerve.edges().len()],
        }
    }

    pub fn from_values(
        nerve: &Arc<Nerve>,
        group: &Arc<FiniteGroup>,
        values: Vec<Elem>,
    ) -> Result<Self> {
        if values.len() != nerve.edges().len() {
            return Err(Error::Mismatch(format!(
                "cochain has {} values for {} edges",
                values.len(),
                nerve.edges().len()
            )));
        }
        if values.iter().any(|&v| v as usize >= group.order()) {
            return Err(Error::Mismatch("cochain value out of range".into()));
        }
        Ok(OneCochain {
            nerve: Arc::clone(nerve),
            group: Arc::clone(group),
            values,
        })
    }

    pub fn nerve(&self) -> &Arc<Nerve> {
        &self.nerve
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    #[inline]
    pub fn value(&self, edge: usize) -> Elem {
        self.values[edge]
    }

    /// Value on the directed pair `(from, to)`, inverting when the pair is
    /// decreasing.
    pub fn oriented_value(&self, from: Vertex, to: Vertex) -> Elem {
        let e = self
            .nerve
            .edge_index(from, to)
            .expect("oriented_value on a non-edge");
        if from < to {
            self.values[e]
        } else {
            self.group.inv(self.values[e])
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }
}

/// The cocycle relation `g_ij g_jk = g_ik` on every triangle.
pub fn is_cocycle(c: &OneCochain) -> bool {
    let g = &c.group;
    (0..c.nerve.triangles().len()).all(|t| {
        let [ij, jk, ik] = c.nerve.triangle_edges(t);
        g.mul(c.values[ij], c.values[jk]) == c.values[ik]
    })
}

/// Transform by a vertex family: `g'_ij = v_i^{-1} g_ij v_j`. Preserves
/// the cocycle property; the identity family is the identity map.
pub fn coboundary_transform(c: &OneCochain, v: &[Elem]) -> OneCochain {
    assert_eq!(v.len(), c.nerve.vertex_count(), "one value per vertex");
    let g = &c.group;
    let values = c
        .nerve
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(i, j))| g.mul(g.mul(g.inv(v[i as usize]), c.values[e]), v[j as usize]))
        .collect();
    OneCochain {
        nerve: Arc::clone(&c.nerve),
        group: Arc::clone(&c.group),
        values,
    }
}

/// The vertex family that trivializes `c` on the tree, with `v = e` at the
/// root: walking a tree edge from parent `p` to child `w` forces
/// `v_w = g_pw^{-1} v_p` (or the inverse form when `w < p`).
pub fn tree_gauge(c: &OneCochain, tree: &SpanningTree) -> Vec<Elem> {
    let g = &c.group;
    let mut v = vec![0 as Elem; c.nerve.vertex_count()];
    for &w in tree.bfs_order().iter().skip(1) {
        let p = tree.parent(w).expect("non-root vertices have parents");
        let gp = c.oriented_value(p, w);
        v[w as usize] = g.mul(g.inv(gp), v[p as usize]);
    }
    v
}

fn conjugated_values(c: &OneCochain, a: Elem) -> Vec<Elem> {
    let g = &c.group;
    c.values
        .iter()
        .map(|&x| g.mul(g.mul(g.inv(a), x), a))
        .collect()
}

/// Canonical representative of the class of a cocycle: gauge fix on the
/// BFS tree rooted at 0, then take the lexicographic minimum over the
/// residual conjugation action. Cohomologous cocycles map to equal
/// canonical forms, independently of any tree used elsewhere.
pub fn canonical_form(c: &OneCochain) -> Result<OneCochain> {
    let tree = spanning_tree(&c.nerve, 0)?;
    let v = tree_gauge(c, &tree);
    let fixed = coboundary_transform(c, &v);
    let mut best = fixed.values.clone();
    for a in c.group.elements().skip(1) {
        let candidate = conjugated_values(&fixed, a);
        if candidate < best {
            best = candidate;
        }
    }
    Ok(OneCochain {
        nerve: Arc::clone(&c.nerve),
        group: Arc::clone(&c.group),
        values: best,
    })
}

/// Edge-wise application of a morphism. Cocycles map to cocycles and
/// cohomologous inputs stay cohomologous.
pub fn pushforward(f: &GroupMorphism, c: &OneCochain) -> Result<OneCochain> {
    if !same_group(f.domain(), &c.group) {
        return Err(Error::Mismatch(
            "pushforward: cochain is not valued in the morphism's domain".into(),
        ));
    }
    Ok(OneCochain {
        nerve: Arc::clone(&c.nerve),
        group: Arc::clone(f.codomain()),
        values: c.values.iter().map(|&x| f.apply(x)).collect(),
    })
}

/// Replace each edge value `u_ij` by the automorphism `alpha(u_ij)` of
/// `G`, as an element of `Aut(G)`. Sends `N`-cocycles to `Aut(G)`-cocycles.
pub fn gamma_star(c: &OneCochain, xm: &CrossedModule, aut: &AutData) -> Result<OneCochain> {
    if !same_group(&c.group, xm.n()) {
        return Err(Error::Mismatch(
            "gamma_star: cochain is not valued in the crossed module's N".into(),
        ));
    }
    if !is_cocycle(c) {
        return Err(Error::NotCocycle("gamma_star input".into()));
    }
    let values = c
        .values
        .iter()
        .map(|&u| {
            aut.index_of(xm.alpha().permutation(u))
                .expect("action values are automorphisms")
        })
        .collect();
    Ok(OneCochain {
        nerve: Arc::clone(&c.nerve),
        group: Arc::clone(&aut.group),
        values,
    })
}

/// Push a `Q`-cocycle along a morphism into a cyclic group and return the
/// canonical representative of the resulting class. Trivial classes map to
/// the trivial class.
pub fn chern(q: &OneCochain, chi: &GroupMorphism) -> Result<OneCochain> {
    if !chi.codomain().is_cyclic() {
        return Err(Error::Usage(
            "chern: the coefficient morphism must land in a cyclic group".into(),
        ));
    }
    if !is_cocycle(q) {
        return Err(Error::NotCocycle("chern input".into()));
    }
    canonical_form(&pushforward(chi, q)?)
}

/// A pointed set of cohomology classes with canonical representatives.
///
/// `sizes[k]` counts the distinct gauge-fixed cocycles (tree-trivial with
/// respect to the canonical tree at vertex 0) lying in class `k`, so the
/// sizes sum to the total gauge-fixed cocycle count when the enumeration
/// was exhaustive.
#[derive(Debug, Clone)]
pub struct ClassSet<T> {
    reps: Vec<T>,
    sizes: Vec<u64>,
    distinguished: usize,
    total: u64,
    stats: SearchStats,
}

impl<T> ClassSet<T> {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn reps(&self) -> &[T] {
        &self.reps
    }

    pub fn rep(&self, k: usize) -> &T {
        &self.reps[k]
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn distinguished(&self) -> usize {
        self.distinguished
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn stats(&self) -> SearchStats {
        self.stats
    }

    pub(crate) fn new(
        reps: Vec<T>,
        sizes: Vec<u64>,
        distinguished: usize,
        total: u64,
        stats: SearchStats,
    ) -> Self {
        ClassSet {
            reps,
            sizes,
            distinguished,
            total,
            stats,
        }
    }
}

impl ClassSet<OneCochain> {
    /// Index of the class containing `c`.
    pub fn classify(&self, c: &OneCochain) -> Result<usize> {
        let canon = canonical_form(c)?;
        self.reps
            .iter()
            .position(|r| r.values == canon.values)
            .ok_or_else(|| Error::Mismatch("cocycle does not belong to this class set".into()))
    }
}

/// Exhaustive, deterministic enumeration of `H1(k, g)` as a pointed set.
pub fn h1_classes(
    nerve: &Arc<Nerve>,
    group: &Arc<FiniteGroup>,
    budget: &Budget,
) -> Result<ClassSet<OneCochain>> {
    h1_classes_with_root(nerve, group, 0, budget)
}

/// Same as [`h1_classes`] but gauge fixing on the BFS tree rooted at
/// `root`. The output is identical for every root; the suites use this to
/// test gauge invariance.
pub fn h1_classes_with_root(
    nerve: &Arc<Nerve>,
    group: &Arc<FiniteGroup>,
    root: Vertex,
    budget: &Budget,
) -> Result<ClassSet<OneCochain>> {
    let tree = spanning_tree(nerve, root)?;
    let (solutions, stats) = enumerate_tree_fixed_cocycles(nerve, group, &tree, budget)?;
    let mut orbits: BTreeMap<Vec<Elem>, u64> = BTreeMap::new();
    for values in &solutions {
        let c = OneCochain {
            nerve: Arc::clone(nerve),
            group: Arc::clone(group),
            values: values.clone(),
        };
        let canon = canonical_form(&c)?;
        *orbits.entry(canon.values).or_insert(0) += 1;
    }
    let total = solutions.len() as u64;
    let mut reps = Vec::with_capacity(orbits.len());
    let mut sizes = Vec::with_capacity(orbits.len());
    for (values, count) in orbits {
        reps.push(OneCochain {
            nerve: Arc::clone(nerve),
            group: Arc::clone(group),
            values,
        });
        sizes.push(count);
    }
    let distinguished = reps
        .iter()
        .position(|r| r.is_trivial())
        .expect("the trivial cocycle is always present");
    Ok(ClassSet::new(reps, sizes, distinguished, total, stats))
}

/// Every cocycle on the nerve, with no gauge fixing. Feasible only on
/// small instances; the node budget guards the search.
pub fn enumerate_all_cocycles(
    nerve: &Arc<Nerve>,
    group: &Arc<FiniteGroup>,
    budget: &Budget,
) -> Result<(Vec<Vec<Elem>>, SearchStats)> {
    let state = PartialCochain::new(nerve, group);
    let (mut solutions, stats) = search_from(state, budget)?;
    solutions.sort_unstable();
    Ok((solutions, stats))
}

/// All cocycles that are identity on the tree edges, found by backtracking
/// over the remaining edges with triangle relations used as unit
/// propagation. Results are sorted lexicographically.
pub fn enumerate_tree_fixed_cocycles(
    nerve: &Arc<Nerve>,
    group: &Arc<FiniteGroup>,
    tree: &SpanningTree,
    budget: &Budget,
) -> Result<(Vec<Vec<Elem>>, SearchStats)> {
    let mut state = PartialCochain::new(nerve, group);
    let mut queue = Vec::new();
    for &e in tree.tree_edges() {
        if !state.assign(e, 0, &mut queue) {
            return Ok((Vec::new(), SearchStats::default()));
        }
    }
    if !state.propagate(queue) {
        return Ok((Vec::new(), SearchStats::default()));
    }
    let (mut solutions, stats) = search_from(state, budget)?;
    solutions.sort_unstable();
    Ok((solutions, stats))
}

/// Backtracking search from a propagated partial state. The first branch
/// level is split across rayon workers; results are merged in branch
/// order, so the outcome does not depend on scheduling.
fn search_from(state: PartialCochain, budget: &Budget) -> Result<(Vec<Vec<Elem>>, SearchStats)> {
    match state.first_undecided() {
        None => Ok((
            vec![state.complete()],
            SearchStats {
                nodes: 0,
                solutions: 1,
            },
        )),
        Some(edge) => {
            let order = state.group.order() as Elem;
            let branches: Vec<(PartialCochain, bool)> = (0..order)
                .map(|value| {
                    let mut child = state.clone();
                    let mut queue = Vec::new();
                    let ok = child.assign(edge, value, &mut queue) && child.propagate(queue);
                    (child, ok)
                })
                .collect();
            let results: Vec<Result<(Vec<Vec<Elem>>, u64)>> = branches
                .into_par_iter()
                .map(|(child, ok)| {
                    let mut nodes = 1u64;
                    let mut out = Vec::new();
                    if ok {
                        dfs(child, budget, &mut nodes, &mut out)?;
                    }
                    Ok((out, nodes))
                })
                .collect();
            let mut solutions = Vec::new();
            let mut nodes = 0u64;
            for r in results {
                let (mut out, n) = r?;
                solutions.append(&mut out);
                nodes += n;
            }
            if nodes > budget.max_nodes {
                return Err(Error::Resource {
                    nodes,
                    budget: budget.max_nodes,
                    frontier: format!("edge {edge}"),
                });
            }
            let stats = SearchStats {
                nodes,
                solutions: solutions.len() as u64,
            };
            Ok((solutions, stats))
        }
    }
}

fn dfs(
    state: PartialCochain,
    budget: &Budget,
    nodes: &mut u64,
    out: &mut Vec<Vec<Elem>>,
) -> Result<()> {
    let edge = match state.first_undecided() {
        None => {
            out.push(state.complete());
            return Ok(());
        }
        Some(e) => e,
    };
    for value in 0..state.group.order() as Elem {
        *nodes += 1;
        if *nodes > budget.max_nodes {
            let undecided = state.values.iter().filter(|v| v.is_none()).count();
            return Err(Error::Resource {
                nodes: *nodes,
                budget: budget.max_nodes,
                frontier: format!("edge {edge}, {undecided} edges undecided"),
            });
        }
        let mut child = state.clone();
        let mut queue = Vec::new();
        if child.assign(edge, value, &mut queue) && child.propagate(queue) {
            dfs(child, budget, nodes, out)?;
        }
    }
    Ok(())
}

/// Partial edge assignment with triangle unit propagation: any triangle
/// with two decided edges forces the third.
#[derive(Clone)]
pub(crate) struct PartialCochain {
    nerve: Arc<Nerve>,
    group: Arc<FiniteGroup>,
    values: Vec<Option<Elem>>,
}

impl PartialCochain {
    pub(crate) fn new(nerve: &Arc<Nerve>, group: &Arc<FiniteGroup>) -> Self {
        PartialCochain {
            nerve: Arc::clone(nerve),
            group: Arc::clone(group),
            values: vec![None; nerve.edges().len()],
        }
    }

    pub(crate) fn assign(&mut self, edge: usize, value: Elem, queue: &mut Vec<usize>) -> bool {
        match self.values[edge] {
            Some(v) => v == value,
            None => {
                self.values[edge] = Some(value);
                queue.push(edge);
                true
            }
        }
    }

    pub(crate) fn propagate(&mut self, mut queue: Vec<usize>) -> bool {
        while let Some(e) = queue.pop() {
            for t in 0..self.nerve.triangles_of_edge(e).len() {
                let tri = self.nerve.triangles_of_edge(e)[t];
                let [ij, jk, ik] = self.nerve.triangle_edges(tri);
                let g = &self.group;
                match (self.values[ij], self.values[jk], self.values[ik]) {
                    (Some(a), Some(b), Some(c)) => {
                        if g.mul(a, b) != c {
                            return false;
                        }
                    }
                    (Some(a), Some(b), None) => {
                        let forced = g.mul(a, b);
                        if !self.assign(ik, forced, &mut queue) {
                            return false;
                        }
                    }
                    (Some(a), None, Some(c)) => {
                        let forced = g.mul(g.inv(a), c);
                        if !self.assign(jk, forced, &mut queue) {
                            return false;
                        }
                    }
                    (None, Some(b), Some(c)) => {
                        let forced = g.mul(c, g.inv(b));
                        if !self.assign(ij, forced, &mut queue) {
                            return false;
                        }
                    }
                    _ => {}
                }
            }
        }
        true
    }

    pub(crate) fn first_undecided(&self) -> Option<usize> {
        self.values.iter().position(|v| v.is_none())
    }

    pub(crate) fn complete(&self) -> Vec<Elem> {
        self.values
            .iter()
            .map(|v| v.expect("complete() on a full assignment"))
            .collect()
    }
}
