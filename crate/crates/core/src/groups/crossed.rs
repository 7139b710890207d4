use std::collections::HashMap;
use std::sync::Arc;

use super::action::is_automorphism;
use super::{perm, Elem, FiniteGroup, GroupAction, GroupMorphism};
use crate::error::{Error, Result};

/// A crossed module `G -> N`: a morphism `i` with an action `alpha` of `N`
/// on `G` satisfying equivariance, `i(alpha_u(x)) = u i(x) u^{-1}`, and
/// the Peiffer identity, `alpha_{i(x)}(y) = x y x^{-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossedModule {
    g: Arc<FiniteGroup>,
    n: Arc<FiniteGroup>,
    i: GroupMorphism,
    alpha: GroupAction,
}

impl CrossedModule {
    pub fn new(
        g: Arc<FiniteGroup>,
        n: Arc<FiniteGroup>,
        i: GroupMorphism,
        alpha: GroupAction,
    ) -> Result<Arc<Self>> {
        if !super::same_group(i.domain(), &g) || !super::same_group(i.codomain(), &n) {
            return Err(Error::Mismatch("crossed module: i must map G to N".into()));
        }
        if !super::same_group(alpha.actor(), &n) || !super::same_group(alpha.target(), &g) {
            return Err(Error::Mismatch(
                "crossed module: alpha must be an action of N on G".into(),
            ));
        }
        for u in n.elements() {
            for x in g.elements() {
                if i.apply(alpha.act(u, x)) != n.conjugate(i.apply(x), u) {
                    return Err(Error::Structure(format!(
                        "equivariance fails: i(alpha_{}({})) != {} i({}) {}^-1",
                        n.name(u),
                        g.name(x),
                        n.name(u),
                        g.name(x),
                        n.name(u)
                    )));
                }
            }
        }
        for x in g.elements() {
            for y in g.elements() {
                if alpha.act(i.apply(x), y) != g.conjugate(y, x) {
                    return Err(Error::Structure(format!(
                        "Peiffer identity fails at ({}, {})",
                        g.name(x),
                        g.name(y)
                    )));
                }
            }
        }
        Ok(Arc::new(CrossedModule { g, n, i, alpha }))
    }

    /// The inclusion crossed module of a normal subgroup, with conjugation
    /// action. `subgroup` lists the member elements of `n`.
    pub fn from_normal_subgroup(n: &Arc<FiniteGroup>, subgroup: &[Elem]) -> Result<Arc<Self>> {
        if !n.is_normal(subgroup) {
            return Err(Error::Structure(
                "crossed module: the given set is not a normal subgroup".into(),
            ));
        }
        let (g, i) = super::subgroup_as_group(n, subgroup)?;
        let alpha = GroupAction::conjugation(n, &i)?;
        CrossedModule::new(g, Arc::clone(n), i, alpha)
    }

    pub fn g(&self) -> &Arc<FiniteGroup> {
        &self.g
    }

    pub fn n(&self) -> &Arc<FiniteGroup> {
        &self.n
    }

    pub fn i(&self) -> &GroupMorphism {
        &self.i
    }

    pub fn alpha(&self) -> &GroupAction {
        &self.alpha
    }
}

/// The automorphism group of `g` together with its index structure.
///
/// Elements are the automorphism permutations of `g`'s element list in
/// lexicographic order (the identity permutation is lexicographically
/// first); multiplication is composition, `(s * t)(x) = s(t(x))`.
#[derive(Debug, Clone)]
pub struct AutData {
    pub group: Arc<FiniteGroup>,
    /// The tautological action of the automorphism group on `g`.
    pub action: GroupAction,
    index: HashMap<Vec<Elem>, Elem>,
}

impl AutData {
    pub fn index_of(&self, perm: &[Elem]) -> Option<Elem> {
        self.index.get(perm).copied()
    }
}

/// Compute `Aut(g)` by backtracking over images of a minimal generating
/// set, extending each partial assignment by BFS closure.
pub fn automorphism_group(g: &Arc<FiniteGroup>, cap: usize) -> Result<AutData> {
    if g.order() > cap {
        return Err(Error::Size {
            what: "automorphism search".into(),
            value: g.order(),
            cap,
        });
    }
    let gens = g.minimal_generating_set();
    let mut found: Vec<Vec<Elem>> = Vec::new();
    let mut images: Vec<Elem> = Vec::new();
    search_automorphisms(g, &gens, &mut images, &mut found);
    found.sort();
    let order = found.len();
    let index: HashMap<Vec<Elem>, Elem> = found
        .iter()
        .enumerate()
        .map(|(k, p)| (p.clone(), k as Elem))
        .collect();
    let mut table = vec![0 as Elem; order * order];
    for (a, pa) in found.iter().enumerate() {
        for (b, pb) in found.iter().enumerate() {
            let composed: Vec<Elem> = pb.iter().map(|&x| pa[x as usize]).collect();
            table[a * order + b] = index[&composed];
        }
    }
    let names = found
        .iter()
        .map(|p| perm::format_cycles(&p.iter().map(|&x| x as usize).collect::<Vec<_>>()))
        .collect();
    let aut = Arc::new(FiniteGroup::assemble(order, table, names)?);
    aut.validate()?;
    let action = GroupAction::new(Arc::clone(&aut), Arc::clone(g), found)?;
    Ok(AutData {
        group: aut,
        action,
        index,
    })
}

fn search_automorphisms(
    g: &FiniteGroup,
    gens: &[Elem],
    images: &mut Vec<Elem>,
    found: &mut Vec<Vec<Elem>>,
) {
    if images.len() == gens.len() {
        if let Some(phi) = extend_by_closure(g, gens, images) {
            if is_automorphism(g, &phi) {
                found.push(phi);
            }
        }
        return;
    }
    let gen = gens[images.len()];
    let gen_order = g.element_order(gen);
    for candidate in g.elements() {
        if g.element_order(candidate) != gen_order {
            continue;
        }
        images.push(candidate);
        // Prune: the partial assignment must already extend consistently.
        if extend_by_closure(g, &gens[..images.len()], images).is_some() {
            search_automorphisms(g, gens, images, found);
        }
        images.pop();
    }
}

/// Extend `gens[k] -> images[k]` to the subgroup generated so far. Returns
/// the partial (or, when the generators span, total) map, or None on an
/// inconsistency or a collision.
fn extend_by_closure(g: &FiniteGroup, gens: &[Elem], images: &[Elem]) -> Option<Vec<Elem>> {
    let mut phi: Vec<Option<Elem>> = vec![None; g.order()];
    let mut used = vec![false; g.order()];
    phi[0] = Some(0);
    used[0] = true;
    let mut queue: Vec<Elem> = vec![0];
    for (&gen, &img) in gens.iter().zip(images) {
        match phi[gen as usize] {
            None => {
                if used[img as usize] {
                    return None;
                }
                phi[gen as usize] = Some(img);
                used[img as usize] = true;
                queue.push(gen);
            }
            Some(prev) if prev != img => return None,
            _ => {}
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let a = queue[head];
        head += 1;
        let fa = phi[a as usize].unwrap();
        for (&gen, &img) in gens.iter().zip(images) {
            let next = g.mul(a, gen);
            let fnext = g.mul(fa, img);
            match phi[next as usize] {
                None => {
                    if used[fnext as usize] {
                        return None;
                    }
                    phi[next as usize] = Some(fnext);
                    used[fnext as usize] = true;
                    queue.push(next);
                }
                Some(prev) if prev != fnext => return None,
                _ => {}
            }
        }
    }
    // Unreached elements map to themselves as a placeholder; the final
    // full-table automorphism check only runs when all generators are
    // assigned, in which case BFS reaches everything.
    Some(
        phi.into_iter()
            .enumerate()
            .map(|(i, x)| x.unwrap_or(i as Elem))
            .collect(),
    )
}

/// The crossed module `G -> Aut(G)` with `i` the adjoint map and the
/// tautological action.
pub fn adjoint_module(g: &Arc<FiniteGroup>, cap: usize) -> Result<(Arc<CrossedModule>, AutData)> {
    let aut = automorphism_group(g, cap)?;
    let mut image = Vec::with_capacity(g.order());
    for x in g.elements() {
        let conj: Vec<Elem> = g.elements().map(|y| g.conjugate(y, x)).collect();
        let idx = aut
            .index_of(&conj)
            .expect("inner automorphisms are automorphisms");
        image.push(idx);
    }
    let i = GroupMorphism::new(Arc::clone(g), Arc::clone(&aut.group), image)?;
    let xm = CrossedModule::new(Arc::clone(g), Arc::clone(&aut.group), i, aut.action.clone())?;
    Ok((xm, aut))
}
