//! Degree-2 machinery: abelian cohomology as the oracle (in [`abelian`]),
//! nonabelian cocycle pairs with crossed-module coefficients, their
//! equivalence, and the maps between degree 1 and degree 2.

pub mod abelian;

pub use abelian::{
    abelian_cohomology, cochain_complex, AbelianCoeff, AbelianCohomology, AbelianH2Class,
    AbelianH2Context, AbelianPresentation, CochainComplex, IntMat,
};

use std::sync::Arc;

use crate::budget::{Budget, SearchStats};
use crate::complexes::Nerve;
use crate::error::{Error, Result};
use crate::groups::{same_group, AutData, CrossedModule, Elem, ExtensionData, FiniteGroup};
use crate::h1::{is_cocycle, ClassSet, OneCochain};

/// A group-valued assignment on the increasing triangles of a nerve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoCochain {
    nerve: Arc<Nerve>,
    group: Arc<FiniteGroup>,
    values: Vec<Elem>,
}

impl TwoCochain {
    pub fn trivial(nerve: &Arc<Nerve>, group: &Arc<FiniteGroup>) -> Self {
        TwoCochain {
            nerve: Arc::clone(nerve),
            group: Arc::clone(group),
            values: vec![0; nerve.triangles().len()],
        }
    }

    pub fn from_values(
        nerve: &Arc<Nerve>,
        group: &Arc<FiniteGroup>,
        values: Vec<Elem>,
    ) -> Result<Self> {
        if values.len() != nerve.triangles().len() {
            return Err(Error::Mismatch(format!(
                "2-cochain has {} values for {} triangles",
                values.len(),
                nerve.triangles().len()
            )));
        }
        if values.iter().any(|&v| v as usize >= group.order()) {
            return Err(Error::Mismatch("2-cochain value out of range".into()));
        }
        Ok(TwoCochain {
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
    pub fn value(&self, triangle: usize) -> Elem {
        self.values[triangle]
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Triangle-wise product with the inverse of `other`, for abelian
    /// difference cochains.
    pub fn difference(&self, other: &TwoCochain) -> Result<TwoCochain> {
        if !same_group(&self.group, &other.group) || self.nerve != other.nerve {
            return Err(Error::Mismatch("2-cochain difference".into()));
        }
        let g = &self.group;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| g.mul(a, g.inv(b)))
            .collect();
        Ok(TwoCochain {
            nerve: Arc::clone(&self.nerve),
            group: Arc::clone(&self.group),
            values,
        })
    }
}

/// The degree-2 nonabelian datum: an `N`-valued edge family with a
/// `G`-valued triangle correction, subject to the two cocycle relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocyclePair {
    xm: Arc<CrossedModule>,
    u: OneCochain,
    g: TwoCochain,
}

impl CocyclePair {
    pub fn new(xm: &Arc<CrossedModule>, u: OneCochain, g: TwoCochain) -> Result<Self> {
        if !same_group(u.group(), xm.n()) {
            return Err(Error::Mismatch(
                "cocycle pair: edge part must be valued in N".into(),
            ));
        }
        if !same_group(g.group(), xm.g()) {
            return Err(Error::Mismatch(
                "cocycle pair: triangle part must be valued in G".into(),
            ));
        }
        if u.nerve() != g.nerve() {
            return Err(Error::Mismatch(
                "cocycle pair: parts live on different nerves".into(),
            ));
        }
        Ok(CocyclePair {
            xm: Arc::clone(xm),
            u,
            g,
        })
    }

    pub fn trivial(nerve: &Arc<Nerve>, xm: &Arc<CrossedModule>) -> Self {
        CocyclePair {
            xm: Arc::clone(xm),
            u: OneCochain::trivial(nerve, xm.n()),
            g: TwoCochain::trivial(nerve, xm.g()),
        }
    }

    pub fn xm(&self) -> &Arc<CrossedModule> {
        &self.xm
    }

    pub fn u(&self) -> &OneCochain {
        &self.u
    }

    pub fn g(&self) -> &TwoCochain {
        &self.g
    }

    pub fn nerve(&self) -> &Arc<Nerve> {
        self.u.nerve()
    }

    pub fn is_trivial(&self) -> bool {
        self.u.is_trivial() && self.g.is_trivial()
    }

    /// Concatenated `(u, g)` values, the key for lexicographic ordering.
    pub fn flat_values(&self) -> Vec<Elem> {
        let mut v = self.u.values().to_vec();
        v.extend_from_slice(self.g.values());
        v
    }
}

/// Both cocycle-pair relations: on every triangle
/// `u_ij u_jk = i(g_ijk) u_ik`, and on every tetrahedron
/// `g_ijk g_ikl = alpha(u_ij)(g_jkl) g_ijl`.
pub fn is_cocycle_pair(b: &CocyclePair) -> bool {
    let nerve = b.nerve();
    let n = b.xm.n();
    let g = b.xm.g();
    let i = b.xm.i();
    let alpha = b.xm.alpha();
    for t in 0..nerve.triangles().len() {
        let [ij, jk, ik] = nerve.triangle_edges(t);
        let lhs = n.mul(b.u.value(ij), b.u.value(jk));
        let rhs = n.mul(i.apply(b.g.value(t)), b.u.value(ik));
        if lhs != rhs {
            return false;
        }
    }
    for tet in 0..nerve.tetrahedra().len() {
        let [ijk, ikl, jkl, ijl] = nerve.tet_triangles(tet);
        let ij = nerve.tet_leading_edge(tet);
        let lhs = g.mul(b.g.value(ijk), b.g.value(ikl));
        let rhs = g.mul(alpha.act(b.u.value(ij), b.g.value(jkl)), b.g.value(ijl));
        if lhs != rhs {
            return false;
        }
    }
    true
}

/// A witness that two cocycle pairs are cohomologous: vertex values in `N`
/// and edge values in `G` satisfying the two equivalence relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalencePair {
    pub v: Vec<Elem>,
    pub h: Vec<Elem>,
}

/// Exhaustive search for an equivalence witness between `a` and `b`:
/// families `(v, h)` with `v_i b.u_ij = i(h_ij) a.u_ij v_j` on edges and
/// `h_ik a.g_ijk = alpha(v_i)(b.g_ijk) h_ij alpha(a.u_ij)(h_jk)` on
/// triangles. Returns the lexicographically minimal witness, or None.
///
/// Vertex assignments are pruned by the edge relation (each edge with both
/// ends decided confines `h` to a fiber of `i`, possibly empty); the `h`
/// search uses triangle relations as unit propagation.
pub fn pairs_equivalent(
    a: &CocyclePair,
    b: &CocyclePair,
    budget: &Budget,
) -> Result<Option<EquivalencePair>> {
    if a.xm != b.xm {
        return Err(Error::Mismatch(
            "pairs_equivalent: different crossed modules".into(),
        ));
    }
    if a.nerve() != b.nerve() {
        return Err(Error::Mismatch("pairs_equivalent: different nerves".into()));
    }
    let nerve = a.nerve();
    let preimages = a.xm.i().preimages();
    // Edges become checkable once their larger endpoint is assigned.
    let mut edges_ready_at: Vec<Vec<usize>> = vec![Vec::new(); nerve.vertex_count()];
    for (e, &(_, j)) in nerve.edges().iter().enumerate() {
        edges_ready_at[j as usize].push(e);
    }
    let mut search = WitnessSearch {
        a,
        b,
        nerve,
        preimages: &preimages,
        edges_ready_at: &edges_ready_at,
        budget,
        nodes: 0,
        v: vec![0; nerve.vertex_count()],
        fibers: vec![Vec::new(); nerve.edges().len()],
    };
    let result = search.assign_vertex(0)?;
    Ok(result)
}

struct WitnessSearch<'a> {
    a: &'a CocyclePair,
    b: &'a CocyclePair,
    nerve: &'a Arc<Nerve>,
    preimages: &'a [Vec<Elem>],
    edges_ready_at: &'a [Vec<usize>],
    budget: &'a Budget,
    nodes: u64,
    v: Vec<Elem>,
    fibers: Vec<Vec<Elem>>,
}

impl WitnessSearch<'_> {
    fn assign_vertex(&mut self, k: usize) -> Result<Option<EquivalencePair>> {
        let n = self.a.xm.n();
        if k == self.nerve.vertex_count() {
            return self.search_h();
        }
        for value in n.elements() {
            self.nodes += 1;
            if self.nodes > self.budget.max_nodes {
                return Err(Error::Resource {
                    nodes: self.nodes,
                    budget: self.budget.max_nodes,
                    frontier: format!("vertex {k}"),
                });
            }
            self.v[k] = value;
            let mut ok = true;
            for &e in &self.edges_ready_at[k] {
                let (i, j) = self.nerve.edges()[e];
                // w = v_i u'_ij v_j^{-1} u_ij^{-1}; h_ij must satisfy i(h) = w.
                let w = n.mul(
                    n.mul(
                        n.mul(self.v[i as usize], self.b.u.value(e)),
                        n.inv(self.v[j as usize]),
                    ),
                    n.inv(self.a.u.value(e)),
                );
                let fiber = &self.preimages[w as usize];
                if fiber.is_empty() {
                    ok = false;
                    break;
                }
                self.fibers[e] = fiber.clone();
            }
            if ok {
                if let Some(found) = self.assign_vertex(k + 1)? {
                    return Ok(Some(found));
                }
            }
        }
        Ok(None)
    }

    fn search_h(&mut self) -> Result<Option<EquivalencePair>> {
        let state: Vec<Option<Elem>> = self
            .fibers
            .iter()
            .map(|f| if f.len() == 1 { Some(f[0]) } else { None })
            .collect();
        // Propagate the forced single-fiber edges first.
        let mut hs = HState {
            values: state,
            search: self,
        };
        let seeds: Vec<usize> = (0..hs.values.len())
            .filter(|&e| hs.values[e].is_some())
            .collect();
        if !hs.propagate(seeds) {
            return Ok(None);
        }
        let values = hs.values.clone();
        self.h_dfs(values)
    }

    fn h_dfs(&mut self, values: Vec<Option<Elem>>) -> Result<Option<EquivalencePair>> {
        let undecided = values.iter().position(|x| x.is_none());
        let edge = match undecided {
            None => {
                let h: Vec<Elem> = values.iter().map(|x| x.unwrap()).collect();
                return Ok(Some(EquivalencePair {
                    v: self.v.clone(),
                    h,
                }));
            }
            Some(e) => e,
        };
        let fiber = self.fibers[edge].clone();
        for value in fiber {
            self.nodes += 1;
            if self.nodes > self.budget.max_nodes {
                return Err(Error::Resource {
                    nodes: self.nodes,
                    budget: self.budget.max_nodes,
                    frontier: format!("edge {edge}"),
                });
            }
            let mut child = values.clone();
            child[edge] = Some(value);
            let mut hs = HState {
                values: child,
                search: self,
            };
            if hs.propagate(vec![edge]) {
                let next = hs.values.clone();
                if let Some(found) = self.h_dfs(next)? {
                    return Ok(Some(found));
                }
            }
        }
        Ok(None)
    }
}

/// Partial `h` assignment with the triangle relation as unit propagation.
struct HState<'a, 'b> {
    values: Vec<Option<Elem>>,
    search: &'a WitnessSearch<'b>,
}

impl HState<'_, '_> {
    fn propagate(&mut self, mut queue: Vec<usize>) -> bool {
        let s = self.search;
        let g = s.a.xm.g();
        let alpha = s.a.xm.alpha();
        while let Some(e) = queue.pop() {
            for idx in 0..s.nerve.triangles_of_edge(e).len() {
                let t = s.nerve.triangles_of_edge(e)[idx];
                let [ij, jk, ik] = s.nerve.triangle_edges(t);
                let (i, _, _) = (
                    s.nerve.triangles()[t].0,
                    s.nerve.triangles()[t].1,
                    s.nerve.triangles()[t].2,
                );
                let g_t = s.a.g.value(t);
                let gp_t = s.b.g.value(t);
                let a_t = alpha.act(s.v[i as usize], gp_t);
                let u_ij = s.a.u.value(ij);
                match (self.values[ij], self.values[jk], self.values[ik]) {
                    (Some(hij), Some(hjk), Some(hik)) => {
                        let lhs = g.mul(hik, g_t);
                        let rhs = g.mul(g.mul(a_t, hij), alpha.act(u_ij, hjk));
                        if lhs != rhs {
                            return false;
                        }
                    }
                    (Some(hij), Some(hjk), None) => {
                        let forced =
                            g.mul(g.mul(g.mul(a_t, hij), alpha.act(u_ij, hjk)), g.inv(g_t));
                        if !self.assign(ik, forced, &mut queue) {
                            return false;
                        }
                    }
                    (Some(hij), None, Some(hik)) => {
                        let x = g.mul(g.mul(g.mul(g.inv(hij), g.inv(a_t)), hik), g_t);
                        let forced = alpha.act_inv(u_ij, x);
                        if !self.assign(jk, forced, &mut queue) {
                            return false;
                        }
                    }
                    (None, Some(hjk), Some(hik)) => {
                        let forced = g.mul(
                            g.mul(g.mul(g.inv(a_t), hik), g_t),
                            g.inv(alpha.act(u_ij, hjk)),
                        );
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

    fn assign(&mut self, edge: usize, value: Elem, queue: &mut Vec<usize>) -> bool {
        // A forced value must lie in the edge's fiber.
        if self.search.fibers[edge].binary_search(&value).is_err() {
            return false;
        }
        match self.values[edge] {
            Some(prev) => prev == value,
            None => {
                self.values[edge] = Some(value);
                queue.push(edge);
                true
            }
        }
    }
}

/// The lifting map: choose `u_ij = section(y_ij)` and record the `G`-valued
/// failure of the cocycle identity, `i(g_ijk) = u_ij u_jk u_ik^{-1}`.
pub fn nu(q: &OneCochain, ext: &ExtensionData) -> Result<CocyclePair> {
    if !same_group(q.group(), ext.q()) {
        return Err(Error::Mismatch("nu: cochain is not valued in Q".into()));
    }
    if !is_cocycle(q) {
        return Err(Error::NotCocycle("nu input".into()));
    }
    let nerve = q.nerve();
    let n = ext.n();
    let u_values: Vec<Elem> = q.values().iter().map(|&y| ext.section(y)).collect();
    let u = OneCochain::from_values(nerve, n, u_values)?;
    let mut g_values = Vec::with_capacity(nerve.triangles().len());
    for t in 0..nerve.triangles().len() {
        let [ij, jk, ik] = nerve.triangle_edges(t);
        let w = n.mul(n.mul(u.value(ij), u.value(jk)), n.inv(u.value(ik)));
        let x = ext
            .i_preimage(w)
            .expect("p kills the cocycle failure, so it lies in i(G)");
        g_values.push(x);
    }
    let g = TwoCochain::from_values(nerve, ext.g(), g_values)?;
    let pair = CocyclePair::new(ext.xm(), u, g)?;
    debug_assert!(is_cocycle_pair(&pair));
    Ok(pair)
}

/// `d(lambda) = (lambda, 1)`: an `N`-cocycle as a cocycle pair.
pub fn d_star(lambda: &OneCochain, xm: &Arc<CrossedModule>) -> Result<CocyclePair> {
    if !same_group(lambda.group(), xm.n()) {
        return Err(Error::Mismatch(
            "d_star: cochain is not valued in the crossed module's N".into(),
        ));
    }
    if !is_cocycle(lambda) {
        return Err(Error::NotCocycle("d_star input".into()));
    }
    let pair = CocyclePair::new(
        xm,
        lambda.clone(),
        TwoCochain::trivial(lambda.nerve(), xm.g()),
    )?;
    debug_assert!(is_cocycle_pair(&pair));
    Ok(pair)
}

/// Replace the edge part by its image automorphisms, keeping the triangle
/// part: `(u, g)` over `G -> N` maps to `(alpha(u), g)` over `G -> Aut G`.
pub fn breve_gamma_star(
    b: &CocyclePair,
    aut_xm: &Arc<CrossedModule>,
    aut: &AutData,
) -> Result<CocyclePair> {
    if !same_group(aut_xm.g(), b.xm.g()) {
        return Err(Error::Mismatch(
            "breve_gamma_star: adjoint module is over a different group".into(),
        ));
    }
    if !same_group(aut_xm.n(), &aut.group) {
        return Err(Error::Mismatch(
            "breve_gamma_star: adjoint module does not match Aut data".into(),
        ));
    }
    let alpha = b.xm.alpha();
    let values: Vec<Elem> =
        b.u.values()
            .iter()
            .map(|&u| {
                aut.index_of(alpha.permutation(u))
                    .expect("action values are automorphisms")
            })
            .collect();
    let u = OneCochain::from_values(b.nerve(), &aut.group, values)?;
    let pair = CocyclePair::new(aut_xm, u, b.g.clone())?;
    debug_assert!(!is_cocycle_pair(b) || is_cocycle_pair(&pair));
    Ok(pair)
}

/// Push the triangle part into the abelianized group `G'`. The result is
/// an abelian 2-cocycle because conjugation dies in `N'`.
pub fn pi_n_push(b: &CocyclePair, ext: &ExtensionData) -> Result<TwoCochain> {
    if b.xm != *ext.xm() {
        return Err(Error::Mismatch(
            "pi_n_star: pair is over a different crossed module".into(),
        ));
    }
    let values: Vec<Elem> = b.g.values().iter().map(|&x| ext.pi_g().apply(x)).collect();
    TwoCochain::from_values(b.nerve(), ext.g_prime(), values)
}

/// `pi_N,*`: the abelian class of the pushed triangle part.
pub fn pi_n_star(
    b: &CocyclePair,
    ext: &ExtensionData,
    ctx: &AbelianH2Context,
) -> Result<AbelianH2Class> {
    let pushed = pi_n_push(b, ext)?;
    ctx.class_of(&pushed)
}

/// Exhaustive enumeration of cocycle pairs over a crossed module, grouped
/// into cohomology classes by the equivalence search. The class
/// representative is the lexicographically minimal member; the
/// distinguished class is that of the trivial pair.
pub fn nonabelian_h2_classes(
    nerve: &Arc<Nerve>,
    xm: &Arc<CrossedModule>,
    budget: &Budget,
) -> Result<ClassSet<CocyclePair>> {
    let kernel = xm.i().kernel().len() as u64;
    let mut space = 1u64;
    for _ in 0..nerve.edges().len() {
        space = space.saturating_mul(xm.n().order() as u64);
    }
    for _ in 0..nerve.triangles().len() {
        space = space.saturating_mul(kernel);
    }
    if space > budget.max_nodes {
        return Err(Error::Resource {
            nodes: 0,
            budget: budget.max_nodes,
            frontier: format!("pair space of size {space}"),
        });
    }
    let (pairs, stats) = enumerate_cocycle_pairs(nerve, xm, budget)?;
    // Classify against representatives; enumeration order is
    // lexicographic, so the first member of each class is its minimum.
    let mut reps: Vec<CocyclePair> = Vec::new();
    let mut sizes: Vec<u64> = Vec::new();
    for pair in &pairs {
        let mut class = None;
        for (k, rep) in reps.iter().enumerate() {
            if pairs_equivalent(rep, pair, budget)?.is_some() {
                class = Some(k);
                break;
            }
        }
        match class {
            Some(k) => sizes[k] += 1,
            None => {
                reps.push(pair.clone());
                sizes.push(1);
            }
        }
    }
    let distinguished = reps
        .iter()
        .position(|r| r.is_trivial())
        .expect("the trivial pair is always a cocycle pair");
    let total = pairs.len() as u64;
    Ok(ClassSet::new(reps, sizes, distinguished, total, stats))
}

/// All `(u, g)` satisfying both relations, in lexicographic order of the
/// concatenated value vector.
pub fn enumerate_cocycle_pairs(
    nerve: &Arc<Nerve>,
    xm: &Arc<CrossedModule>,
    budget: &Budget,
) -> Result<(Vec<CocyclePair>, SearchStats)> {
    let n = xm.n();
    let image: Vec<bool> = {
        let mut im = vec![false; n.order()];
        for x in xm.g().elements() {
            im[xm.i().apply(x) as usize] = true;
        }
        im
    };
    let preimages = xm.i().preimages();
    let mut out = Vec::new();
    let mut nodes = 0u64;
    let mut u_values: Vec<Elem> = Vec::new();
    enumerate_u(
        nerve,
        xm,
        &image,
        &preimages,
        &mut u_values,
        budget,
        &mut nodes,
        &mut out,
    )?;
    let solutions = out.len() as u64;
    Ok((out, SearchStats { nodes, solutions }))
}

#[allow(clippy::too_many_arguments)]
fn enumerate_u(
    nerve: &Arc<Nerve>,
    xm: &Arc<CrossedModule>,
    image: &[bool],
    preimages: &[Vec<Elem>],
    u_values: &mut Vec<Elem>,
    budget: &Budget,
    nodes: &mut u64,
    out: &mut Vec<CocyclePair>,
) -> Result<()> {
    let n = xm.n();
    let edge_count = nerve.edges().len();
    if u_values.len() == edge_count {
        let u = OneCochain::from_values(nerve, n, u_values.clone())?;
        return enumerate_g(nerve, xm, preimages, &u, budget, nodes, out);
    }
    let e = u_values.len();
    'candidates: for value in n.elements() {
        *nodes += 1;
        if *nodes > budget.max_nodes {
            return Err(Error::Resource {
                nodes: *nodes,
                budget: budget.max_nodes,
                frontier: format!("edge {e}"),
            });
        }
        u_values.push(value);
        // The edge relation constrains any triangle whose edges are all
        // assigned: its failure must land in the image of i.
        for t in 0..nerve.triangles().len() {
            let [ij, jk, ik] = nerve.triangle_edges(t);
            if ij.max(jk).max(ik) == e {
                let w = n.mul(n.mul(u_values[ij], u_values[jk]), n.inv(u_values[ik]));
                if !image[w as usize] {
                    u_values.pop();
                    continue 'candidates;
                }
            }
        }
        enumerate_u(nerve, xm, image, preimages, u_values, budget, nodes, out)?;
        u_values.pop();
    }
    Ok(())
}

fn enumerate_g(
    nerve: &Arc<Nerve>,
    xm: &Arc<CrossedModule>,
    preimages: &[Vec<Elem>],
    u: &OneCochain,
    budget: &Budget,
    nodes: &mut u64,
    out: &mut Vec<CocyclePair>,
) -> Result<()> {
    let n = xm.n();
    // Candidate fibers per triangle.
    let mut fibers: Vec<&[Elem]> = Vec::with_capacity(nerve.triangles().len());
    for t in 0..nerve.triangles().len() {
        let [ij, jk, ik] = nerve.triangle_edges(t);
        let w = n.mul(n.mul(u.value(ij), u.value(jk)), n.inv(u.value(ik)));
        fibers.push(&preimages[w as usize]);
    }
    let mut g_values: Vec<Elem> = Vec::new();
    g_dfs(nerve, xm, &fibers, u, &mut g_values, budget, nodes, out)
}

#[allow(clippy::too_many_arguments)]
fn g_dfs(
    nerve: &Arc<Nerve>,
    xm: &Arc<CrossedModule>,
    fibers: &[&[Elem]],
    u: &OneCochain,
    g_values: &mut Vec<Elem>,
    budget: &Budget,
    nodes: &mut u64,
    out: &mut Vec<CocyclePair>,
) -> Result<()> {
    let g = xm.g();
    if g_values.len() == nerve.triangles().len() {
        let gc = TwoCochain::from_values(nerve, g, g_values.clone())?;
        let pair = CocyclePair::new(xm, u.clone(), gc)?;
        debug_assert!(is_cocycle_pair(&pair));
        out.push(pair);
        return Ok(());
    }
    let t = g_values.len();
    'candidates: for &value in fibers[t] {
        *nodes += 1;
        if *nodes > budget.max_nodes {
            return Err(Error::Resource {
                nodes: *nodes,
                budget: budget.max_nodes,
                frontier: format!("triangle {t}"),
            });
        }
        g_values.push(value);
        // Tetrahedron relation on fully assigned tets.
        for tet in 0..nerve.tetrahedra().len() {
            let [ijk, ikl, jkl, ijl] = nerve.tet_triangles(tet);
            if ijk.max(ikl).max(jkl).max(ijl) == t {
                let ij = nerve.tet_leading_edge(tet);
                let lhs = g.mul(g_values[ijk], g_values[ikl]);
                let rhs = g.mul(xm.alpha().act(u.value(ij), g_values[jkl]), g_values[ijl]);
                if lhs != rhs {
                    g_values.pop();
                    continue 'candidates;
                }
            }
        }
        g_dfs(nerve, xm, fibers, u, g_values, budget, nodes, out)?;
        g_values.pop();
    }
    Ok(())
}
