use std::sync::Arc;

use super::{Elem, FiniteGroup, GroupMorphism};
use crate::error::{Error, Result};

/// An action of `actor` on `target` by automorphisms, one permutation of
/// the target's elements per actor element. Actions are on the left:
/// `act(u * v) = act(u) o act(v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    actor: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    perms: Vec<Vec<Elem>>,
}

impl GroupAction {
    pub fn new(
        actor: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        perms: Vec<Vec<Elem>>,
    ) -> Result<Self> {
        if perms.len() != actor.order() {
            return Err(Error::Structure(format!(
                "action has {} permutations for an actor of order {}",
                perms.len(),
                actor.order()
            )));
        }
        let action = GroupAction {
            actor,
            target,
            perms,
        };
        action.validate()?;
        Ok(action)
    }

    fn validate(&self) -> Result<()> {
        for u in self.actor.elements() {
            let p = &self.perms[u as usize];
            if p.len() != self.target.order() {
                return Err(Error::Structure(
                    "action permutation has wrong length".into(),
                ));
            }
            if !is_automorphism(&self.target, p) {
                return Err(Error::Structure(format!(
                    "action of {} is not an automorphism of the target",
                    self.actor.name(u)
                )));
            }
        }
        if self.perms[0] != self.target.elements().collect::<Vec<_>>() {
            return Err(Error::Structure(
                "action of the identity is not the identity map".into(),
            ));
        }
        for u in self.actor.elements() {
            for v in self.actor.elements() {
                let uv = self.actor.mul(u, v);
                for x in self.target.elements() {
                    if self.act(uv, x) != self.act(u, self.act(v, x)) {
                        return Err(Error::Structure(format!(
                            "action is not a homomorphism at ({}, {})",
                            self.actor.name(u),
                            self.actor.name(v)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Conjugation of `n` on a subgroup presented by the inclusion `i`:
    /// `act(u)(x) = i^{-1}(u i(x) u^{-1})`. Requires `i` injective with
    /// image closed under conjugation.
    pub fn conjugation(n: &Arc<FiniteGroup>, i: &GroupMorphism) -> Result<Self> {
        if !i.is_injective() {
            return Err(Error::Structure(
                "conjugation action requires an injective inclusion".into(),
            ));
        }
        let g = i.domain();
        let mut back: Vec<Option<Elem>> = vec![None; n.order()];
        for x in g.elements() {
            back[i.apply(x) as usize] = Some(x);
        }
        let mut perms = Vec::with_capacity(n.order());
        for u in n.elements() {
            let mut p = Vec::with_capacity(g.order());
            for x in g.elements() {
                let conj = n.conjugate(i.apply(x), u);
                match back[conj as usize] {
                    Some(y) => p.push(y),
                    None => {
                        return Err(Error::Structure(format!(
                            "image of the inclusion is not normal: conjugate of {} by {} leaves it",
                            g.name(x),
                            n.name(u)
                        )))
                    }
                }
            }
            perms.push(p);
        }
        GroupAction::new(Arc::clone(n), Arc::clone(g), perms)
    }

    /// The trivial action.
    pub fn trivial(actor: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>) -> Self {
        let id: Vec<Elem> = target.elements().collect();
        GroupAction {
            actor: Arc::clone(actor),
            target: Arc::clone(target),
            perms: vec![id; actor.order()],
        }
    }

    #[inline]
    pub fn act(&self, u: Elem, x: Elem) -> Elem {
        self.perms[u as usize][x as usize]
    }

    pub fn act_inv(&self, u: Elem, x: Elem) -> Elem {
        self.act(self.actor.inv(u), x)
    }

    pub fn permutation(&self, u: Elem) -> &[Elem] {
        &self.perms[u as usize]
    }

    pub fn actor(&self) -> &Arc<FiniteGroup> {
        &self.actor
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }
}

pub(crate) fn is_automorphism(g: &FiniteGroup, p: &[Elem]) -> bool {
    if p.len() != g.order() || p[0] != 0 {
        return false;
    }
    let mut seen = vec![false; g.order()];
    for &x in p {
        if seen[x as usize] {
            return false;
        }
        seen[x as usize] = true;
    }
    for a in g.elements() {
        for b in g.elements() {
            if p[g.mul(a, b) as usize] != g.mul(p[a as usize], p[b as usize]) {
                return false;
            }
        }
    }
    true
}
