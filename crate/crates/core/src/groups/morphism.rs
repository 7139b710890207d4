use std::sync::Arc;

use super::{Elem, FiniteGroup};
use crate::error::{Error, Result};

/// A group homomorphism given by its full element-wise image map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupMorphism {
    domain: Arc<FiniteGroup>,
    codomain: Arc<FiniteGroup>,
    image: Vec<Elem>,
}

impl GroupMorphism {
    /// Validates that the map is a homomorphism sending identity to identity.
    pub fn new(
        domain: Arc<FiniteGroup>,
        codomain: Arc<FiniteGroup>,
        image: Vec<Elem>,
    ) -> Result<Self> {
        if image.len() != domain.order() {
            return Err(Error::Structure(format!(
                "morphism image has {} entries for a domain of order {}",
                image.len(),
                domain.order()
            )));
        }
        if image.iter().any(|&x| x as usize >= codomain.order()) {
            return Err(Error::Structure("morphism image out of range".into()));
        }
        if image[0] != 0 {
            return Err(Error::Structure(
                "morphism does not send identity to identity".into(),
            ));
        }
        for a in domain.elements() {
            for b in domain.elements() {
                let lhs = image[domain.mul(a, b) as usize];
                let rhs = codomain.mul(image[a as usize], image[b as usize]);
                if lhs != rhs {
                    return Err(Error::Structure(format!(
                        "not a homomorphism: f({} * {}) != f({}) * f({})",
                        domain.name(a),
                        domain.name(b),
                        domain.name(a),
                        domain.name(b)
                    )));
                }
            }
        }
        Ok(GroupMorphism {
            domain,
            codomain,
            image,
        })
    }

    /// Extend images of a generating set to the whole group, failing if the
    /// assignment is inconsistent. Elements are reached by BFS over right
    /// multiplication by generators.
    pub fn from_generator_images(
        domain: Arc<FiniteGroup>,
        codomain: Arc<FiniteGroup>,
        pairs: &[(Elem, Elem)],
    ) -> Result<Self> {
        let mut image: Vec<Option<Elem>> = vec![None; domain.order()];
        image[0] = Some(0);
        for &(g, img) in pairs {
            if let Some(prev) = image[g as usize] {
                if prev != img {
                    return Err(Error::Structure(format!(
                        "conflicting images for generator {}",
                        domain.name(g)
                    )));
                }
            }
            image[g as usize] = Some(img);
        }
        let mut queue: Vec<Elem> = vec![0];
        for &(g, _) in pairs {
            if !queue.contains(&g) {
                queue.push(g);
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let a = queue[head];
            head += 1;
            let fa = image[a as usize].unwrap();
            for &(g, fg) in pairs {
                let next = domain.mul(a, g);
                let fnext = codomain.mul(fa, fg);
                match image[next as usize] {
                    None => {
                        image[next as usize] = Some(fnext);
                        queue.push(next);
                    }
                    Some(prev) if prev != fnext => {
                        return Err(Error::Structure(format!(
                            "generator images do not extend to a homomorphism at {}",
                            domain.name(next)
                        )));
                    }
                    _ => {}
                }
            }
        }
        if image.iter().any(|x| x.is_none()) {
            return Err(Error::Structure(
                "the given elements do not generate the domain".into(),
            ));
        }
        Self::new(
            domain,
            codomain,
            image.into_iter().map(|x| x.unwrap()).collect(),
        )
    }

    pub fn identity(g: &Arc<FiniteGroup>) -> Self {
        GroupMorphism {
            domain: Arc::clone(g),
            codomain: Arc::clone(g),
            image: g.elements().collect(),
        }
    }

    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        self.image[a as usize]
    }

    pub fn domain(&self) -> &Arc<FiniteGroup> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FiniteGroup> {
        &self.codomain
    }

    /// `other` after `self`, i.e. `x -> other(self(x))`.
    pub fn then(&self, other: &GroupMorphism) -> Result<GroupMorphism> {
        if !super::same_group(&self.codomain, &other.domain) {
            return Err(Error::Mismatch(
                "morphism composition: codomain does not match domain".into(),
            ));
        }
        Ok(GroupMorphism {
            domain: Arc::clone(&self.domain),
            codomain: Arc::clone(&other.codomain),
            image: self.image.iter().map(|&x| other.apply(x)).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.codomain.order()];
        self.image.iter().all(|&x| {
            let fresh = !seen[x as usize];
            seen[x as usize] = true;
            fresh
        })
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.codomain.order()];
        for &x in &self.image {
            seen[x as usize] = true;
        }
        seen.into_iter().all(|s| s)
    }

    pub fn kernel(&self) -> Vec<Elem> {
        self.domain
            .elements()
            .filter(|&a| self.apply(a) == 0)
            .collect()
    }

    /// Image as a sorted element list of the codomain.
    pub fn image_elements(&self) -> Vec<Elem> {
        let mut out = self.image.clone();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Elements of the codomain mapped onto by exactly one known preimage,
    /// as a lookup of all preimages per codomain element.
    pub fn preimages(&self) -> Vec<Vec<Elem>> {
        let mut pre: Vec<Vec<Elem>> = vec![Vec::new(); self.codomain.order()];
        for a in self.domain.elements() {
            pre[self.apply(a) as usize].push(a);
        }
        pre
    }
}
