//! Finite simplicial nerves standing in for good covers: vertices play the
//! cover sets, edges the pairwise intersections, triangles the triple
//! intersections and tetrahedra the quadruple ones. Simplices stop at
//! dimension 3 because the tetrahedral 2-cocycle relation is the highest
//! relation in the calculus.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};

pub type Vertex = u16;

/// A face-closed simplicial complex on totally ordered vertices, with all
/// simplex tuples strictly increasing and the incidence tables needed by
/// the cocycle conditions precomputed.
#[derive(Debug)]
pub struct Nerve {
    name: String,
    vertex_count: usize,
    edges: Vec<(Vertex, Vertex)>,
    triangles: Vec<(Vertex, Vertex, Vertex)>,
    tetrahedra: Vec<(Vertex, Vertex, Vertex, Vertex)>,
    edge_index: HashMap<(Vertex, Vertex), usize>,
    /// Edge indices `(ij, jk, ik)` per triangle.
    triangle_edges: Vec<[usize; 3]>,
    /// Triangle indices `(ijk, ikl, jkl, ijl)` per tetrahedron.
    tet_triangles: Vec<[usize; 4]>,
    /// Edge index of `(i, j)` per tetrahedron `(i, j, k, l)`.
    tet_leading_edge: Vec<usize>,
    /// Triangles incident to each edge.
    triangles_of_edge: Vec<Vec<usize>>,
}

impl PartialEq for Nerve {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count
            && self.edges == other.edges
            && self.triangles == other.triangles
            && self.tetrahedra == other.tetrahedra
    }
}
impl Eq for Nerve {}

impl Nerve {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn triangles(&self) -> &[(Vertex, Vertex, Vertex)] {
        &self.triangles
    }

    pub fn tetrahedra(&self) -> &[(Vertex, Vertex, Vertex, Vertex)] {
        &self.tetrahedra
    }

    pub fn edge_index(&self, i: Vertex, j: Vertex) -> Option<usize> {
        self.edge_index.get(&(i.min(j), i.max(j))).copied()
    }

    pub fn triangle_edges(&self, t: usize) -> [usize; 3] {
        self.triangle_edges[t]
    }

    pub fn tet_triangles(&self, t: usize) -> [usize; 4] {
        self.tet_triangles[t]
    }

    pub fn tet_leading_edge(&self, t: usize) -> usize {
        self.tet_leading_edge[t]
    }

    pub fn triangles_of_edge(&self, e: usize) -> &[usize] {
        &self.triangles_of_edge[e]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edges.len() as i64 + self.triangles.len() as i64
            - self.tetrahedra.len() as i64
    }

    /// The maximal simplices, suitable for rebuilding the complex.
    pub fn facets(&self) -> Vec<Vec<Vertex>> {
        let mut non_maximal: BTreeSet<Vec<Vertex>> = BTreeSet::new();
        let mut all: Vec<Vec<Vertex>> = Vec::new();
        for &(a, b, c, d) in &self.tetrahedra {
            all.push(vec![a, b, c, d]);
            for face in [[a, b, c], [a, b, d], [a, c, d], [b, c, d]] {
                non_maximal.insert(face.to_vec());
            }
        }
        for &(a, b, c) in &self.triangles {
            all.push(vec![a, b, c]);
            for face in [[a, b], [a, c], [b, c]] {
                non_maximal.insert(face.to_vec());
            }
        }
        for &(a, b) in &self.edges {
            all.push(vec![a, b]);
            non_maximal.insert(vec![a]);
            non_maximal.insert(vec![b]);
        }
        for v in 0..self.vertex_count as Vertex {
            all.push(vec![v]);
        }
        all.retain(|s| !non_maximal.contains(s));
        all
    }
}

/// Build the face closure of the given facets with deterministic
/// (lexicographic) simplex ordering.
pub fn build_complex(name: &str, facets: &[Vec<usize>]) -> Result<Arc<Nerve>> {
    let mut vertices: BTreeSet<usize> = BTreeSet::new();
    let mut edges: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    let mut triangles: BTreeSet<(Vertex, Vertex, Vertex)> = BTreeSet::new();
    let mut tetrahedra: BTreeSet<(Vertex, Vertex, Vertex, Vertex)> = BTreeSet::new();
    for facet in facets {
        if facet.len() > 4 {
            return Err(Error::Dimension {
                vertices: facet.len(),
            });
        }
        let mut s: Vec<usize> = facet.clone();
        s.sort_unstable();
        s.dedup();
        if s.len() != facet.len() {
            return Err(Error::Structure(format!(
                "facet {facet:?} has repeated vertices"
            )));
        }
        if s.iter().any(|&v| v > Vertex::MAX as usize) {
            return Err(Error::Structure("vertex index out of range".into()));
        }
        vertices.extend(s.iter().copied());
        let vs: Vec<Vertex> = s.iter().map(|&v| v as Vertex).collect();
        match vs.len() {
            4 => {
                tetrahedra.insert((vs[0], vs[1], vs[2], vs[3]));
            }
            3 => {
                triangles.insert((vs[0], vs[1], vs[2]));
            }
            2 => {
                edges.insert((vs[0], vs[1]));
            }
            _ => {}
        }
    }
    // Face closure, top down.
    for &(a, b, c, d) in tetrahedra.clone().iter() {
        for (x, y, z) in [(a, b, c), (a, b, d), (a, c, d), (b, c, d)] {
            triangles.insert((x, y, z));
        }
    }
    for &(a, b, c) in triangles.clone().iter() {
        for (x, y) in [(a, b), (a, c), (b, c)] {
            edges.insert((x, y));
        }
    }
    let vertex_count = match vertices.iter().next_back() {
        Some(&max) => max + 1,
        None => 0,
    };
    if vertices.len() != vertex_count {
        return Err(Error::Structure(
            "vertex indices must be dense from 0".into(),
        ));
    }
    let edges: Vec<_> = edges.into_iter().collect();
    let triangles: Vec<_> = triangles.into_iter().collect();
    let tetrahedra: Vec<_> = tetrahedra.into_iter().collect();
    let edge_index: HashMap<(Vertex, Vertex), usize> =
        edges.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let tri_index: HashMap<(Vertex, Vertex, Vertex), usize> =
        triangles.iter().enumerate().map(|(k, &t)| (t, k)).collect();
    let triangle_edges: Vec<[usize; 3]> = triangles
        .iter()
        .map(|&(i, j, k)| {
            [
                edge_index[&(i, j)],
                edge_index[&(j, k)],
                edge_index[&(i, k)],
            ]
        })
        .collect();
    let tet_triangles: Vec<[usize; 4]> = tetrahedra
        .iter()
        .map(|&(i, j, k, l)| {
            [
                tri_index[&(i, j, k)],
                tri_index[&(i, k, l)],
                tri_index[&(j, k, l)],
                tri_index[&(i, j, l)],
            ]
        })
        .collect();
    let tet_leading_edge: Vec<usize> = tetrahedra
        .iter()
        .map(|&(i, j, _, _)| edge_index[&(i, j)])
        .collect();
    let mut triangles_of_edge: Vec<Vec<usize>> = vec![Vec::new(); edges.len()];
    for (t, te) in triangle_edges.iter().enumerate() {
        for &e in te {
            triangles_of_edge[e].push(t);
        }
    }
    Ok(Arc::new(Nerve {
        name: name.to_string(),
        vertex_count,
        edges,
        triangles,
        tetrahedra,
        edge_index,
        triangle_edges,
        tet_triangles,
        tet_leading_edge,
        triangles_of_edge,
    }))
}

/// Standard minimal triangulations used throughout the test suites.
///
/// * `circle3`: triangle boundary, 3/3/0/0.
/// * `sphere2_tet`: boundary of the 3-simplex, 4/6/4/0.
/// * `torus7`: the 7-vertex torus, 7/21/14/0.
/// * `rp2_6`: the 6-vertex projective plane, 6/15/10/0.
/// * `sphere3_pent`: boundary of the 4-simplex, 5/10/10/5.
/// * `disk3`: one filled triangle, 3/3/1/0.
pub fn builtin_complex(name: &str) -> Option<Arc<Nerve>> {
    let facets: Vec<Vec<usize>> = match name {
        "circle3" => vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        "sphere2_tet" => vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
        "torus7" => {
            let mut f = Vec::new();
            for i in 0..7usize {
                f.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
                f.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
            }
            f
        }
        "rp2_6" => vec![
            vec![0, 1, 2],
            vec![0, 2, 3],
            vec![0, 3, 4],
            vec![0, 4, 5],
            vec![0, 1, 5],
            vec![1, 2, 4],
            vec![2, 3, 5],
            vec![1, 3, 4],
            vec![2, 4, 5],
            vec![1, 3, 5],
        ],
        "sphere3_pent" => vec![
            vec![0, 1, 2, 3],
            vec![0, 1, 2, 4],
            vec![0, 1, 3, 4],
            vec![0, 2, 3, 4],
            vec![1, 2, 3, 4],
        ],
        "disk3" => vec![vec![0, 1, 2]],
        _ => return None,
    };
    Some(build_complex(name, &facets).expect("built-in complexes are valid"))
}

pub const BUILTIN_COMPLEX_NAMES: [&str; 6] = [
    "circle3",
    "sphere2_tet",
    "torus7",
    "rp2_6",
    "sphere3_pent",
    "disk3",
];

/// A BFS spanning tree of the (required connected) 1-skeleton.
#[derive(Debug, Clone)]
pub struct SpanningTree {
    root: Vertex,
    parent: Vec<Option<Vertex>>,
    /// Vertices in BFS discovery order; the root comes first.
    order: Vec<Vertex>,
    /// Edge indices belonging to the tree.
    tree_edges: Vec<usize>,
    is_tree_edge: Vec<bool>,
}

impl SpanningTree {
    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent[v as usize]
    }

    pub fn bfs_order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn tree_edges(&self) -> &[usize] {
        &self.tree_edges
    }

    pub fn is_tree_edge(&self, e: usize) -> bool {
        self.is_tree_edge[e]
    }

    pub fn cotree_edge_count(&self) -> usize {
        self.is_tree_edge.iter().filter(|&&t| !t).count()
    }
}

/// BFS tree from `root`; neighbours are visited in ascending vertex order.
pub fn spanning_tree(nerve: &Nerve, root: Vertex) -> Result<SpanningTree> {
    if nerve.vertex_count() == 0 || root as usize >= nerve.vertex_count() {
        return Err(Error::Usage(format!("root {root} out of range")));
    }
    let mut adjacency: Vec<Vec<Vertex>> = vec![Vec::new(); nerve.vertex_count()];
    for &(a, b) in nerve.edges() {
        adjacency[a as usize].push(b);
        adjacency[b as usize].push(a);
    }
    for adj in &mut adjacency {
        adj.sort_unstable();
    }
    let mut parent = vec![None; nerve.vertex_count()];
    let mut visited = vec![false; nerve.vertex_count()];
    visited[root as usize] = true;
    let mut order = vec![root];
    let mut head = 0;
    let mut tree_edges = Vec::new();
    let mut is_tree_edge = vec![false; nerve.edges().len()];
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &w in &adjacency[v as usize] {
            if !visited[w as usize] {
                visited[w as usize] = true;
                parent[w as usize] = Some(v);
                let e = nerve.edge_index(v, w).expect("adjacency from edge list");
                tree_edges.push(e);
                is_tree_edge[e] = true;
                order.push(w);
            }
        }
    }
    if order.len() != nerve.vertex_count() {
        return Err(Error::Disconnected);
    }
    Ok(SpanningTree {
        root,
        parent,
        order,
        tree_edges,
        is_tree_edge,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_of_3_simplex() {
        let k = build_complex(
            "s2",
            &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
        )
        .unwrap();
        assert_eq!(k.vertex_count(), 4);
        assert_eq!(k.edges().len(), 6);
        assert_eq!(k.triangles().len(), 4);
        assert_eq!(k.tetrahedra().len(), 0);
    }

    #[test]
    fn boundary_of_4_simplex() {
        let facets: Vec<Vec<usize>> = vec![
            vec![0, 1, 2, 3],
            vec![0, 1, 2, 4],
            vec![0, 1, 3, 4],
            vec![0, 2, 3, 4],
            vec![1, 2, 3, 4],
        ];
        let k = build_complex("s3", &facets).unwrap();
        assert_eq!(
            (
                k.vertex_count(),
                k.edges().len(),
                k.triangles().len(),
                k.tetrahedra().len()
            ),
            (5, 10, 10, 5)
        );
    }

    #[test]
    fn circle_has_no_triangles() {
        let k = build_complex("c", &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert_eq!(k.vertex_count(), 3);
        assert_eq!(k.edges().len(), 3);
        assert_eq!(k.triangles().len(), 0);
    }

    #[test]
    fn rejects_high_dimensional_facets() {
        let err = build_complex("bad", &[vec![0, 1, 2, 3, 4]]).unwrap_err();
        assert!(matches!(err, Error::Dimension { vertices: 5 }));
    }

    #[test]
    fn rejects_sparse_vertices() {
        assert!(build_complex("bad", &[vec![0, 2]]).is_err());
    }

    #[test]
    fn builtin_counts_and_euler_characteristics() {
        let expect = [
            ("circle3", (3, 3, 0, 0), 0),
            ("sphere2_tet", (4, 6, 4, 0), 2),
            ("torus7", (7, 21, 14, 0), 0),
            ("rp2_6", (6, 15, 10, 0), 1),
            ("sphere3_pent", (5, 10, 10, 5), 0),
            ("disk3", (3, 3, 1, 0), 1),
        ];
        for (name, (v, e, t, tet), chi) in expect {
            let k = builtin_complex(name).unwrap();
            assert_eq!(
                (
                    k.vertex_count(),
                    k.edges().len(),
                    k.triangles().len(),
                    k.tetrahedra().len()
                ),
                (v, e, t, tet),
                "{name}"
            );
            assert_eq!(k.euler_characteristic(), chi, "{name}");
        }
        assert!(builtin_complex("klein5").is_none());
    }

    #[test]
    fn closed_surfaces_have_each_edge_in_two_triangles() {
        for name in ["sphere2_tet", "torus7", "rp2_6"] {
            let k = builtin_complex(name).unwrap();
            for e in 0..k.edges().len() {
                assert_eq!(k.triangles_of_edge(e).len(), 2, "{name} edge {e}");
            }
        }
    }

    #[test]
    fn face_closure_round_trip() {
        for name in BUILTIN_COMPLEX_NAMES {
            let k = builtin_complex(name).unwrap();
            let facets: Vec<Vec<usize>> = k
                .facets()
                .into_iter()
                .map(|f| f.into_iter().map(|v| v as usize).collect())
                .collect();
            let rebuilt = build_complex(name, &facets).unwrap();
            assert_eq!(*k, *rebuilt, "{name}");
        }
    }

    #[test]
    fn spanning_tree_counts() {
        let cases = [("circle3", 2, 1), ("sphere2_tet", 3, 3), ("torus7", 6, 15)];
        for (name, tree, cotree) in cases {
            let k = builtin_complex(name).unwrap();
            let t = spanning_tree(&k, 0).unwrap();
            assert_eq!(t.tree_edges().len(), tree, "{name}");
            assert_eq!(t.cotree_edge_count(), cotree, "{name}");
        }
    }

    #[test]
    fn disconnected_complex_is_an_error() {
        let k = build_complex("two", &[vec![0, 1], vec![2, 3]]).unwrap();
        assert!(matches!(spanning_tree(&k, 0), Err(Error::Disconnected)));
    }
}
