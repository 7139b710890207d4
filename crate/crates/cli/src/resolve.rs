//! Resolution of a parsed config into validated engine objects: groups,
//! nerves, extensions and cochain literals. All names resolve here and
//! every morphism is validated at load time; failures carry the stable
//! diagnostic codes.

use std::collections::BTreeMap;
use std::sync::Arc;

use cocycle_core::groups::perm;
use cocycle_core::{
    build_complex, builtin_complex, builtin_group, Budget, CrossedModule, Elem, Error,
    ExtensionData, FiniteGroup, GroupAction, GroupMorphism, Nerve, OneCochain, TwoCochain,
};

use crate::config::{
    AlphaDef, Cochain2Def, CochainDef, ComplexDef, ComplexRef, ConfigAst, Diagnostic, ExtRef,
    ExtensionDef, GroupDef, GroupRef,
};

/// A fully resolved job: every referenced object constructed and checked.
#[derive(Debug)]
pub struct ResolvedConfig {
    pub groups: BTreeMap<String, Arc<FiniteGroup>>,
    pub complexes: BTreeMap<String, Arc<Nerve>>,
    pub extensions: BTreeMap<String, ExtensionData>,
    pub cochains: BTreeMap<String, OneCochain>,
    pub cochains2: BTreeMap<String, TwoCochain>,
    pub budget: Budget,
}

fn at_origin(code: &'static str, message: impl Into<String>) -> Diagnostic {
    Diagnostic::new(code, message, (0, 0))
}

impl ResolvedConfig {
    pub fn from_ast(ast: &ConfigAst, base_budget: Budget) -> Result<Self, Diagnostic> {
        let mut budget = base_budget;
        if let Some(n) = ast.budgets.nodes {
            budget.max_nodes = n;
        }
        if let Some(n) = ast.budgets.group_cap {
            budget.group_order_cap = n as usize;
        }
        if let Some(n) = ast.budgets.aut_cap {
            budget.aut_order_cap = n as usize;
        }
        let mut resolved = ResolvedConfig {
            groups: BTreeMap::new(),
            complexes: BTreeMap::new(),
            extensions: BTreeMap::new(),
            cochains: BTreeMap::new(),
            cochains2: BTreeMap::new(),
            budget,
        };
        for (name, def) in &ast.groups {
            let group = resolve_group_def(def, budget.group_order_cap)?;
            resolved.groups.insert(name.clone(), group);
        }
        for (name, def) in &ast.complexes {
            let complex = match def {
                ComplexDef::Builtin(b) => builtin_complex(b).ok_or_else(|| {
                    at_origin("E-BUILTIN", format!("unknown built-in complex {b:?}"))
                })?,
                ComplexDef::Facets(facets) => build_complex(name, facets).map_err(complex_error)?,
            };
            resolved.complexes.insert(name.clone(), complex);
        }
        for (name, def) in &ast.extensions {
            let ext = resolve_extension(&resolved, def)?;
            resolved.extensions.insert(name.clone(), ext);
        }
        for (name, def) in &ast.cochains {
            let c = resolve_cochain(&resolved, def)?;
            resolved.cochains.insert(name.clone(), c);
        }
        for (name, def) in &ast.cochains2 {
            let c = resolve_cochain2(&resolved, def)?;
            resolved.cochains2.insert(name.clone(), c);
        }
        Ok(resolved)
    }

    /// Group lookup: defined names first, then built-ins.
    pub fn group(&self, name: &str) -> Result<Arc<FiniteGroup>, Diagnostic> {
        if let Some(g) = self.groups.get(name) {
            return Ok(Arc::clone(g));
        }
        builtin_group(name).ok_or_else(|| at_origin("E-NAME", format!("unknown group {name:?}")))
    }

    pub fn complex(&self, r: &ComplexRef, seed: Option<&str>) -> Result<Arc<Nerve>, Diagnostic> {
        let name = match r {
            ComplexRef::Named(n) => n.as_str(),
            ComplexRef::Default => seed.ok_or_else(|| {
                at_origin(
                    "E-TASK",
                    "task omits its complex and no --seed-complex default is set",
                )
            })?,
        };
        if let Some(k) = self.complexes.get(name) {
            return Ok(Arc::clone(k));
        }
        builtin_complex(name)
            .ok_or_else(|| at_origin("E-NAME", format!("unknown complex {name:?}")))
    }

    pub fn extension(&self, r: &ExtRef) -> Result<ExtensionData, Diagnostic> {
        match r {
            ExtRef::Named(name) => self
                .extensions
                .get(name)
                .cloned()
                .ok_or_else(|| at_origin("E-NAME", format!("unknown extension {name:?}"))),
            ExtRef::Inline { g, n } => resolve_extension(
                self,
                &ExtensionDef {
                    g: g.clone(),
                    n: n.clone(),
                    i: None,
                    alpha: AlphaDef::Conjugation,
                },
            ),
        }
    }

    pub fn cochain(&self, name: &str) -> Result<OneCochain, Diagnostic> {
        self.cochains
            .get(name)
            .cloned()
            .ok_or_else(|| at_origin("E-NAME", format!("unknown cochain {name:?}")))
    }

    pub fn cochain2(&self, name: &str) -> Result<TwoCochain, Diagnostic> {
        self.cochains2
            .get(name)
            .cloned()
            .ok_or_else(|| at_origin("E-NAME", format!("unknown 2-cochain {name:?}")))
    }
}

fn complex_error(e: Error) -> Diagnostic {
    match e {
        Error::Dimension { vertices } => at_origin(
            "E-DIM",
            format!("facet with {vertices} vertices exceeds dimension 3"),
        ),
        other => at_origin("E-PARSE", other.to_string()),
    }
}

fn resolve_group_def(def: &GroupDef, cap: usize) -> Result<Arc<FiniteGroup>, Diagnostic> {
    match def {
        GroupDef::Builtin(b) => builtin_group(b)
            .ok_or_else(|| at_origin("E-BUILTIN", format!("unknown built-in group {b:?}"))),
        GroupDef::Perm { degree, generators } => {
            let mut perms = Vec::new();
            for text in generators {
                let p = perm::parse_cycles(text, *degree)
                    .map_err(|e| at_origin("E-GROUP", e.to_string()))?;
                perms.push(p);
            }
            FiniteGroup::from_permutations(*degree, &perms, cap)
                .map_err(|e| at_origin("E-GROUP", e.to_string()))
        }
        GroupDef::Table {
            order,
            table,
            names,
        } => {
            let entries: Vec<Elem> = table
                .iter()
                .map(|&x| {
                    Elem::try_from(x)
                        .map_err(|_| at_origin("E-GROUP", format!("table entry {x} out of range")))
                })
                .collect::<Result<_, _>>()?;
            FiniteGroup::from_table(*order, entries, names.clone())
                .map_err(|e| at_origin("E-GROUP", e.to_string()))
        }
    }
}

/// Deterministic embedding inference: images of the minimal generating set
/// are searched in ascending element order; the first injective
/// homomorphism whose image is normal in `n` wins.
fn infer_embedding(
    g: &Arc<FiniteGroup>,
    n: &Arc<FiniteGroup>,
) -> Result<GroupMorphism, Diagnostic> {
    let gens = g.minimal_generating_set();
    let mut images: Vec<Elem> = Vec::new();
    fn search(
        g: &Arc<FiniteGroup>,
        n: &Arc<FiniteGroup>,
        gens: &[Elem],
        images: &mut Vec<Elem>,
    ) -> Option<GroupMorphism> {
        if images.len() == gens.len() {
            let pairs: Vec<(Elem, Elem)> =
                gens.iter().copied().zip(images.iter().copied()).collect();
            if let Ok(m) =
                GroupMorphism::from_generator_images(Arc::clone(g), Arc::clone(n), &pairs)
            {
                if m.is_injective() && n.is_normal(&m.image_elements()) {
                    return Some(m);
                }
            }
            return None;
        }
        let gen = gens[images.len()];
        let order = g.element_order(gen);
        for candidate in n.elements() {
            if n.element_order(candidate) != order {
                continue;
            }
            images.push(candidate);
            if let Some(found) = search(g, n, gens, images) {
                return Some(found);
            }
            images.pop();
        }
        None
    }
    search(g, n, &gens, &mut images).ok_or_else(|| {
        at_origin(
            "E-XMOD",
            format!(
                "no embedding of the subgroup side as a normal subgroup of the ambient group \
                 (orders {} and {})",
                g.order(),
                n.order()
            ),
        )
    })
}

fn resolve_extension(
    resolved: &ResolvedConfig,
    def: &ExtensionDef,
) -> Result<ExtensionData, Diagnostic> {
    let n = resolved.group(&def.n)?;
    let (g, i) = match &def.g {
        GroupRef::Center(center_of) => {
            let host = resolved.group(center_of)?;
            if *host != *n {
                return Err(at_origin(
                    "E-XMOD",
                    "center(...) extensions must use the same ambient group on both sides",
                ));
            }
            let center = n.center();
            let (g, i) = cocycle_core::subgroup_as_group(&n, &center)
                .map_err(|e| at_origin("E-XMOD", e.to_string()))?;
            (g, i)
        }
        GroupRef::Name(gname) => {
            let g = resolved.group(gname)?;
            let i = match &def.i {
                None => infer_embedding(&g, &n)?,
                Some(pairs) => {
                    let mut elems = Vec::new();
                    for (from, to) in pairs {
                        let from = g.element_by_name(from).ok_or_else(|| {
                            at_origin("E-NAME", format!("unknown element {from:?} in G"))
                        })?;
                        let to = n.element_by_name(to).ok_or_else(|| {
                            at_origin("E-NAME", format!("unknown element {to:?} in N"))
                        })?;
                        elems.push((from, to));
                    }
                    GroupMorphism::from_generator_images(Arc::clone(&g), Arc::clone(&n), &elems)
                        .map_err(|e| at_origin("E-HOM", e.to_string()))?
                }
            };
            if !i.is_injective() {
                return Err(at_origin("E-XMOD", "the inclusion is not injective"));
            }
            if !n.is_normal(&i.image_elements()) {
                return Err(at_origin(
                    "E-XMOD",
                    "the image of the inclusion is not normal",
                ));
            }
            (g, i)
        }
    };
    let alpha = match &def.alpha {
        AlphaDef::Conjugation => {
            GroupAction::conjugation(&n, &i).map_err(|e| at_origin("E-XMOD", e.to_string()))?
        }
        AlphaDef::Trivial => GroupAction::trivial(&n, &g),
        AlphaDef::Explicit(entries) => {
            let identity: Vec<Elem> = g.elements().collect();
            let mut perms = vec![identity; n.order()];
            for (actor, pairs) in entries {
                let actor = n.element_by_name(actor).ok_or_else(|| {
                    at_origin("E-NAME", format!("unknown element {actor:?} in N"))
                })?;
                let mut p: Vec<Elem> = g.elements().collect();
                for (from, to) in pairs {
                    let from = g.element_by_name(from).ok_or_else(|| {
                        at_origin("E-NAME", format!("unknown element {from:?} in G"))
                    })?;
                    let to = g.element_by_name(to).ok_or_else(|| {
                        at_origin("E-NAME", format!("unknown element {to:?} in G"))
                    })?;
                    p[from as usize] = to;
                }
                perms[actor as usize] = p;
            }
            GroupAction::new(Arc::clone(&n), Arc::clone(&g), perms)
                .map_err(|e| at_origin("E-XMOD", e.to_string()))?
        }
    };
    let xm = CrossedModule::new(g, Arc::clone(&n), i, alpha)
        .map_err(|e| at_origin("E-XMOD", e.to_string()))?;
    ExtensionData::new(xm).map_err(|e| at_origin("E-XMOD", e.to_string()))
}

fn resolve_cochain(resolved: &ResolvedConfig, def: &CochainDef) -> Result<OneCochain, Diagnostic> {
    let complex = resolved.complex(&ComplexRef::Named(def.complex.clone()), None)?;
    let group = resolved.group(&def.group)?;
    let mut values = vec![0 as Elem; complex.edges().len()];
    for ((i, j), name) in &def.edges {
        let edge = complex.edge_index(*i as u16, *j as u16).ok_or_else(|| {
            at_origin(
                "E-COCHAIN",
                format!("({i},{j}) is not an edge of {:?}", def.complex),
            )
        })?;
        let value = group.element_by_name(name).ok_or_else(|| {
            at_origin(
                "E-COCHAIN",
                format!("unknown element {name:?} in {:?}", def.group),
            )
        })?;
        values[edge] = value;
    }
    OneCochain::from_values(&complex, &group, values)
        .map_err(|e| at_origin("E-COCHAIN", e.to_string()))
}

fn resolve_cochain2(
    resolved: &ResolvedConfig,
    def: &Cochain2Def,
) -> Result<TwoCochain, Diagnostic> {
    let complex = resolved.complex(&ComplexRef::Named(def.complex.clone()), None)?;
    let group = resolved.group(&def.group)?;
    let mut values = vec![0 as Elem; complex.triangles().len()];
    for ((i, j, k), name) in &def.triangles {
        let tri = complex
            .triangles()
            .iter()
            .position(|&t| t == (*i as u16, *j as u16, *k as u16))
            .ok_or_else(|| {
                at_origin(
                    "E-COCHAIN",
                    format!("({i},{j},{k}) is not a triangle of {:?}", def.complex),
                )
            })?;
        let value = group.element_by_name(name).ok_or_else(|| {
            at_origin(
                "E-COCHAIN",
                format!("unknown element {name:?} in {:?}", def.group),
            )
        })?;
        values[tri] = value;
    }
    TwoCochain::from_values(&complex, &group, values)
        .map_err(|e| at_origin("E-COCHAIN", e.to_string()))
}
