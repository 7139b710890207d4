//! Finite groups as explicit Cayley tables, plus morphisms, actions,
//! crossed modules and extension data.
//!
//! Everything downstream is exhaustive, so groups are kept as plain
//! multiplication tables: membership, conjugation and inversion are O(1)
//! lookups. Element 0 is always the identity.

mod action;
mod builtin;
mod crossed;
mod extension;
mod morphism;
pub mod perm;

pub use action::GroupAction;
pub use builtin::{builtin_group, BUILTIN_GROUP_NAMES};
pub use crossed::{adjoint_module, automorphism_group, AutData, CrossedModule};
pub use extension::{abelianization_data, commutator_closure, Abelianization, ExtensionData};
pub use morphism::GroupMorphism;

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Index of a group element into its group's element list.
pub type Elem = u16;

/// A finite group given by its multiplication table.
///
/// Invariants checked at construction: the table is associative, element 0
/// is a two-sided identity, and every element has an inverse. Element
/// names are unique; they are used by the textual config format.
#[derive(Debug)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<Elem>,
    inverse: Vec<Elem>,
    names: Vec<String>,
    name_index: HashMap<String, Elem>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        // Structural equality; names are labels, not structure.
        self.order == other.order && self.table == other.table
    }
}
impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Build a group from a row-major multiplication table,
    /// `table[a * order + b] = a * b`. Validates all group axioms.
    pub fn from_table(
        order: usize,
        table: Vec<Elem>,
        names: Option<Vec<String>>,
    ) -> Result<Arc<Self>> {
        if order == 0 {
            return Err(Error::Structure("group order must be positive".into()));
        }
        if table.len() != order * order {
            return Err(Error::Structure(format!(
                "table has {} entries, expected {}",
                table.len(),
                order * order
            )));
        }
        if table.iter().any(|&x| x as usize >= order) {
            return Err(Error::Structure("table entry out of range".into()));
        }
        let names = match names {
            Some(ns) => {
                if ns.len() != order {
                    return Err(Error::Structure(format!(
                        "{} names given for a group of order {order}",
                        ns.len()
                    )));
                }
                ns
            }
            None => (0..order).map(|i| format!("g{i}")).collect(),
        };
        let group = Self::assemble(order, table, names)?;
        group.validate()?;
        Ok(Arc::new(group))
    }

    /// BFS closure of a set of permutations of `0..degree` under
    /// composition. Element 0 is the identity and element order is the
    /// deterministic BFS discovery order; names are cycle notation.
    pub fn from_permutations(
        degree: usize,
        generators: &[Vec<usize>],
        cap: usize,
    ) -> Result<Arc<Self>> {
        for g in generators {
            if g.len() != degree || !perm::is_permutation(g) {
                return Err(Error::Structure(format!(
                    "generator {:?} is not a permutation of 0..{degree}",
                    g
                )));
            }
        }
        let mut elements: Vec<Vec<usize>> = vec![perm::identity(degree)];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        index.insert(elements[0].clone(), 0);
        let mut head = 0;
        while head < elements.len() {
            for gen in generators {
                let next = perm::compose(&elements[head], gen);
                if !index.contains_key(&next) {
                    if elements.len() >= cap {
                        return Err(Error::Size {
                            what: "generator closure".into(),
                            value: elements.len() + 1,
                            cap,
                        });
                    }
                    index.insert(next.clone(), elements.len());
                    elements.push(next);
                }
            }
            head += 1;
        }
        let order = elements.len();
        let mut table = vec![0 as Elem; order * order];
        for a in 0..order {
            for b in 0..order {
                let prod = perm::compose(&elements[a], &elements[b]);
                table[a * order + b] = index[&prod] as Elem;
            }
        }
        let names = elements.iter().map(|p| perm::format_cycles(p)).collect();
        // Closure of permutations is associative by construction.
        let group = Self::assemble(order, table, names)?;
        debug_assert!(group.validate().is_ok());
        Ok(Arc::new(group))
    }

    fn assemble(order: usize, table: Vec<Elem>, names: Vec<String>) -> Result<Self> {
        let mut name_index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if name_index.insert(n.clone(), i as Elem).is_some() {
                return Err(Error::Structure(format!("duplicate element name {n:?}")));
            }
        }
        let mut inverse = vec![None; order];
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] == 0 && table[b * order + a] == 0 {
                    inverse[a] = Some(b as Elem);
                }
            }
        }
        let inverse = inverse
            .into_iter()
            .enumerate()
            .map(|(a, i)| i.ok_or_else(|| Error::Structure(format!("element {a} has no inverse"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteGroup {
            order,
            table,
            inverse,
            names,
            name_index,
        })
    }

    /// Check all group axioms on the stored table.
    pub fn validate(&self) -> Result<()> {
        let n = self.order;
        for a in 0..n as Elem {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return Err(Error::Structure(format!(
                    "element 0 is not a two-sided identity at {a}"
                )));
            }
            if self.mul(a, self.inv(a)) != 0 || self.mul(self.inv(a), a) != 0 {
                return Err(Error::Structure(format!("bad inverse for element {a}")));
            }
        }
        for a in 0..n as Elem {
            for b in 0..n as Elem {
                let ab = self.mul(a, b);
                for c in 0..n as Elem {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::Structure(format!(
                            "associativity fails on ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a as usize]
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn conjugate(&self, g: Elem, by: Elem) -> Elem {
        self.mul(self.mul(by, g), self.inv(by))
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order as Elem
    }

    pub fn name(&self, a: Elem) -> &str {
        &self.names[a as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element_by_name(&self, name: &str) -> Option<Elem> {
        self.name_index.get(name).copied()
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order as Elem)
            .all(|a| (0..self.order as Elem).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        self.elements().any(|a| self.element_order(a) == self.order)
    }

    /// All elements commuting with the whole group.
    pub fn center(&self) -> Vec<Elem> {
        self.elements()
            .filter(|&a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
            .collect()
    }

    /// Smallest subgroup containing `seed`, as a sorted element list.
    pub fn subgroup_closure(&self, seed: &[Elem]) -> Vec<Elem> {
        let mut member = vec![false; self.order];
        member[0] = true;
        let mut queue: Vec<Elem> = vec![0];
        for &s in seed {
            if !member[s as usize] {
                member[s as usize] = true;
                queue.push(s);
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let a = queue[head];
            head += 1;
            let i = self.inv(a);
            if !member[i as usize] {
                member[i as usize] = true;
                queue.push(i);
            }
            for pos in 0..queue.len() {
                let b = queue[pos];
                for prod in [self.mul(a, b), self.mul(b, a)] {
                    if !member[prod as usize] {
                        member[prod as usize] = true;
                        queue.push(prod);
                    }
                }
            }
        }
        let mut out: Vec<Elem> = member
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| i as Elem)
            .collect();
        out.sort_unstable();
        out
    }

    pub fn is_subgroup(&self, set: &[Elem]) -> bool {
        if !set.contains(&0) {
            return false;
        }
        set.iter().all(|&a| {
            set.contains(&self.inv(a)) && set.iter().all(|&b| set.contains(&self.mul(a, b)))
        })
    }

    pub fn is_normal(&self, set: &[Elem]) -> bool {
        self.is_subgroup(set)
            && self
                .elements()
                .all(|u| set.iter().all(|&a| set.contains(&self.conjugate(a, u))))
    }

    /// Normal closure of `seed` in this group.
    pub fn normal_closure(&self, seed: &[Elem]) -> Vec<Elem> {
        let mut conjugates: Vec<Elem> = Vec::new();
        for &s in seed {
            for u in self.elements() {
                conjugates.push(self.conjugate(s, u));
            }
        }
        self.subgroup_closure(&conjugates)
    }

    /// Conjugacy classes, each sorted, ordered by minimal element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<Elem>> {
        let mut seen = vec![false; self.order];
        let mut classes = Vec::new();
        for a in self.elements() {
            if seen[a as usize] {
                continue;
            }
            let mut class: Vec<Elem> = self.elements().map(|u| self.conjugate(a, u)).collect();
            class.sort_unstable();
            class.dedup();
            for &x in &class {
                seen[x as usize] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// A small generating set, chosen greedily by ascending element index.
    pub fn minimal_generating_set(&self) -> Vec<Elem> {
        let mut gens: Vec<Elem> = Vec::new();
        let mut generated = self.subgroup_closure(&gens);
        while generated.len() < self.order {
            let next = self
                .elements()
                .find(|a| generated.binary_search(a).is_err())
                .expect("subgroup is proper, a missing element exists");
            gens.push(next);
            generated = self.subgroup_closure(&gens);
        }
        gens
    }

    /// The one-element group.
    pub fn trivial() -> Arc<Self> {
        FiniteGroup::from_table(1, vec![0], Some(vec!["e".into()])).expect("trivial group is valid")
    }
}

/// True when the two handles denote the same group, structurally.
pub fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Closure of permutation generators as a [`FiniteGroup`].
///
/// Element 0 is the identity; element order is BFS discovery order, which
/// makes serialized output and canonical class representatives stable.
pub fn group_from_generators(
    degree: usize,
    generators: &[Vec<usize>],
    cap: usize,
) -> Result<Arc<FiniteGroup>> {
    FiniteGroup::from_permutations(degree, generators, cap)
}

/// Present a subgroup of `n` as a group in its own right, with element
/// names inherited from `n`, together with the inclusion morphism. The
/// subgroup's elements are taken in ascending index order, so the identity
/// lands at index 0.
pub fn subgroup_as_group(
    n: &Arc<FiniteGroup>,
    members: &[Elem],
) -> Result<(Arc<FiniteGroup>, GroupMorphism)> {
    let mut members = members.to_vec();
    members.sort_unstable();
    members.dedup();
    if !n.is_subgroup(&members) {
        return Err(Error::Structure("the given set is not a subgroup".into()));
    }
    let order = members.len();
    let index: HashMap<Elem, Elem> = members
        .iter()
        .enumerate()
        .map(|(k, &m)| (m, k as Elem))
        .collect();
    let mut table = vec![0 as Elem; order * order];
    for (a, &ma) in members.iter().enumerate() {
        for (b, &mb) in members.iter().enumerate() {
            table[a * order + b] = index[&n.mul(ma, mb)];
        }
    }
    let names = members.iter().map(|&m| n.name(m).to_string()).collect();
    let g = Arc::new(FiniteGroup::assemble(order, table, names)?);
    g.validate()?;
    let inclusion = GroupMorphism::new(Arc::clone(&g), Arc::clone(n), members)?;
    Ok((g, inclusion))
}

/// Quotient of `n` by a normal subgroup, with the projection and the
/// minimal-index coset representative section.
///
/// Coset representatives are the minimal element index per coset; the
/// quotient's elements are the representatives in ascending order, so the
/// identity coset is element 0 and `section(e) = e`.
pub fn quotient(
    n: &Arc<FiniteGroup>,
    subgroup: &[Elem],
) -> Result<(Arc<FiniteGroup>, GroupMorphism, Vec<Elem>)> {
    if !n.is_subgroup(subgroup) {
        return Err(Error::Structure(
            "quotient: the given set is not a subgroup".into(),
        ));
    }
    if !n.is_normal(subgroup) {
        return Err(Error::Structure(
            "quotient: the subgroup is not normal".into(),
        ));
    }
    // Minimal-index representative per coset.
    let mut coset_rep: Vec<Option<Elem>> = vec![None; n.order()];
    let mut reps: Vec<Elem> = Vec::new();
    for a in n.elements() {
        if coset_rep[a as usize].is_some() {
            continue;
        }
        reps.push(a);
        for &h in subgroup {
            let member = n.mul(a, h);
            coset_rep[member as usize] = Some(a);
        }
    }
    let rep_of = |a: Elem| coset_rep[a as usize].expect("cosets cover the group");
    let rep_index: HashMap<Elem, Elem> = reps
        .iter()
        .enumerate()
        .map(|(i, &r)| (r, i as Elem))
        .collect();
    let q_order = reps.len();
    let mut table = vec![0 as Elem; q_order * q_order];
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            table[i * q_order + j] = rep_index[&rep_of(n.mul(a, b))];
        }
    }
    let names = reps.iter().map(|&r| format!("[{}]", n.name(r))).collect();
    let q = Arc::new(FiniteGroup::assemble(q_order, table, names)?);
    q.validate()?;
    let projection: Vec<Elem> = n.elements().map(|a| rep_index[&rep_of(a)]).collect();
    let p = GroupMorphism::new(Arc::clone(n), Arc::clone(&q), projection)?;
    Ok((q, p, reps))
}
