use std::sync::Arc;

use super::{quotient, subgroup_as_group, CrossedModule, Elem, FiniteGroup, GroupMorphism};
use crate::error::{Error, Result};

/// `N_G`: the normal closure in `N` of the mixed commutators
/// `i(x) u i(x)^{-1} u^{-1}`, returned as a sorted element list.
pub fn commutator_closure(xm: &CrossedModule) -> Vec<Elem> {
    let n = xm.n();
    let g = xm.g();
    let mut seeds = Vec::new();
    for x in g.elements() {
        let ix = xm.i().apply(x);
        for u in n.elements() {
            let c = n.mul(n.conjugate(ix, u), n.inv(ix));
            // c = (u i(x) u^-1) i(x)^-1; same set as i(x) u i(x)^-1 u^-1
            // up to inverses, which the closure absorbs.
            seeds.push(c);
        }
    }
    n.normal_closure(&seeds)
}

/// The quotient-side data of the abelianization diagram:
/// `N' = N / N_G`, `G' = pi_N(i(G))`, with `pi_N o i = i' o pi_G`.
#[derive(Debug, Clone)]
pub struct Abelianization {
    pub ng: Vec<Elem>,
    pub pi_n: GroupMorphism,
    pub n_prime: Arc<FiniteGroup>,
    pub g_prime: Arc<FiniteGroup>,
    pub pi_g: GroupMorphism,
    pub i_prime: GroupMorphism,
}

pub fn abelianization_data(xm: &CrossedModule) -> Result<Abelianization> {
    if !xm.i().is_injective() {
        return Err(Error::Structure(
            "abelianization requires an injective inclusion".into(),
        ));
    }
    let n = xm.n();
    let g = xm.g();
    let ng = commutator_closure(xm);
    let (n_prime, pi_n, _section) = quotient(n, &ng)?;
    // G' as the image subgroup of pi_N o i inside N'.
    let image: Vec<Elem> = {
        let mut v: Vec<Elem> = g.elements().map(|x| pi_n.apply(xm.i().apply(x))).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let (g_prime, i_prime) = subgroup_as_group(&n_prime, &image)?;
    let mut back = vec![0 as Elem; n_prime.order()];
    for y in g_prime.elements() {
        back[i_prime.apply(y) as usize] = y;
    }
    let pi_g_map: Vec<Elem> = g
        .elements()
        .map(|x| back[pi_n.apply(xm.i().apply(x)) as usize])
        .collect();
    let pi_g = GroupMorphism::new(Arc::clone(g), Arc::clone(&g_prime), pi_g_map)?;
    if !g_prime.is_abelian() {
        return Err(Error::Structure(
            "abelianized subgroup G' is not abelian; N_G computation is wrong".into(),
        ));
    }
    for x in g.elements() {
        debug_assert_eq!(
            pi_n.apply(xm.i().apply(x)),
            i_prime.apply(pi_g.apply(x)),
            "abelianization diagram does not commute"
        );
    }
    Ok(Abelianization {
        ng,
        pi_n,
        n_prime,
        g_prime,
        pi_g,
        i_prime,
    })
}

/// A short exact sequence `1 -> G -> N -> Q -> 1` packaged with a chosen
/// set-theoretic section of `p` and the abelianization data.
///
/// The section sends each element of `Q` to the minimal-index element of
/// its coset; in particular `section(e) = e`. Class-level outputs are
/// section-independent, which is property-tested rather than assumed.
#[derive(Debug, Clone)]
pub struct ExtensionData {
    xm: Arc<CrossedModule>,
    q: Arc<FiniteGroup>,
    p: GroupMorphism,
    section: Vec<Elem>,
    ab: Abelianization,
    /// Unique preimage under `i` per element of `N`, where defined.
    i_preimage: Vec<Option<Elem>>,
}

impl ExtensionData {
    pub fn new(xm: Arc<CrossedModule>) -> Result<Self> {
        if !xm.i().is_injective() {
            return Err(Error::Structure(
                "extension data requires an injective inclusion".into(),
            ));
        }
        let image = xm.i().image_elements();
        if !xm.n().is_normal(&image) {
            return Err(Error::Structure(
                "extension data requires i(G) normal in N".into(),
            ));
        }
        let (q, p, section) = quotient(xm.n(), &image)?;
        let ab = abelianization_data(&xm)?;
        let mut i_preimage = vec![None; xm.n().order()];
        for x in xm.g().elements() {
            i_preimage[xm.i().apply(x) as usize] = Some(x);
        }
        debug_assert_eq!(xm.g().order() * q.order(), xm.n().order());
        Ok(ExtensionData {
            xm,
            q,
            p,
            section,
            ab,
            i_preimage,
        })
    }

    /// The inclusion extension of a normal subgroup with conjugation action.
    pub fn from_normal_subgroup(n: &Arc<FiniteGroup>, subgroup: &[Elem]) -> Result<Self> {
        let xm = CrossedModule::from_normal_subgroup(n, subgroup)?;
        Self::new(xm)
    }

    /// Same data with the other deterministic section: maximal-index coset
    /// representatives for non-identity cosets. Used to test that
    /// class-level outputs do not depend on the section choice.
    pub fn with_alternate_section(&self) -> Self {
        let n = self.xm.n();
        let mut alt = self.section.clone();
        for y in self.q.elements().skip(1) {
            let max = n
                .elements()
                .filter(|&u| self.p.apply(u) == y)
                .max()
                .expect("fibers of a surjection are nonempty");
            alt[y as usize] = max;
        }
        ExtensionData {
            xm: Arc::clone(&self.xm),
            q: Arc::clone(&self.q),
            p: self.p.clone(),
            section: alt,
            ab: self.ab.clone(),
            i_preimage: self.i_preimage.clone(),
        }
    }

    pub fn xm(&self) -> &Arc<CrossedModule> {
        &self.xm
    }

    pub fn g(&self) -> &Arc<FiniteGroup> {
        self.xm.g()
    }

    pub fn n(&self) -> &Arc<FiniteGroup> {
        self.xm.n()
    }

    pub fn q(&self) -> &Arc<FiniteGroup> {
        &self.q
    }

    pub fn p(&self) -> &GroupMorphism {
        &self.p
    }

    pub fn section(&self, y: Elem) -> Elem {
        self.section[y as usize]
    }

    pub fn abelianization(&self) -> &Abelianization {
        &self.ab
    }

    pub fn g_prime(&self) -> &Arc<FiniteGroup> {
        &self.ab.g_prime
    }

    pub fn pi_g(&self) -> &GroupMorphism {
        &self.ab.pi_g
    }

    /// The unique `x` with `i(x) = w`, if `w` lies in the image of `i`.
    pub fn i_preimage(&self, w: Elem) -> Option<Elem> {
        self.i_preimage[w as usize]
    }

    /// True when `i(G)` is contained in the centre of `N`.
    pub fn is_central(&self) -> bool {
        let center = self.xm.n().center();
        self.xm
            .g()
            .elements()
            .all(|x| center.contains(&self.xm.i().apply(x)))
    }
}
