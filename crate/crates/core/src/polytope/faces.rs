use std::collections::BTreeMap;

use super::Vertex;

/// A face, identified by the facets containing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub id: usize,
    /// `I_F`, sorted. Empty for the polytope itself.
    pub facets: Vec<usize>,
    /// Ids of the vertices `v` with `I_F ⊆ I_v`.
    pub vertices: Vec<usize>,
}

impl Face {
    pub fn codim(&self) -> usize {
        self.facets.len()
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

/// All faces of a simple polytope, ordered by codimension and then by facet
/// set. Face 0 is always the polytope.
#[derive(Debug, Clone)]
pub struct FaceLattice {
    faces: Vec<Face>,
    index: BTreeMap<Vec<usize>, usize>,
}

impl FaceLattice {
    /// Faces of a simple polytope are exactly the subsets of the vertex tight
    /// sets.
    pub(crate) fn build(vertices: &[Vertex]) -> Self {
        let mut sets: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for v in vertices {
            let n = v.tight.len();
            for mask in 0u32..(1 << n) {
                let subset: Vec<usize> = (0..n)
                    .filter(|k| mask & (1 << k) != 0)
                    .map(|k| v.tight[k])
                    .collect();
                sets.entry(subset).or_default().push(v.id);
            }
        }
        let mut faces: Vec<(Vec<usize>, Vec<usize>)> = sets.into_iter().collect();
        faces.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        let faces: Vec<Face> = faces
            .into_iter()
            .enumerate()
            .map(|(id, (facets, mut vs))| {
                vs.sort_unstable();
                Face {
                    id,
                    facets,
                    vertices: vs,
                }
            })
            .collect();
        let index = faces.iter().map(|f| (f.facets.clone(), f.id)).collect();
        FaceLattice { faces, index }
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn face(&self, id: usize) -> &Face {
        &self.faces[id]
    }

    pub fn find(&self, facets: &[usize]) -> Option<&Face> {
        self.index.get(facets).map(|&i| &self.faces[i])
    }

    /// Number of faces of each codimension `0..=n`.
    pub fn f_vector(&self) -> Vec<usize> {
        let n = self.faces.iter().map(Face::codim).max().unwrap_or(0);
        let mut out = vec![0; n + 1];
        for f in &self.faces {
            out[f.codim()] += 1;
        }
        out
    }

    /// Faces `E ⊋ F`, i.e. those with `I_E ⊊ I_F`.
    pub fn strict_superfaces(&self, f: &Face) -> Vec<&Face> {
        let k = f.facets.len();
        (0..(1u32 << k) - 1)
            .filter_map(|mask| {
                let subset: Vec<usize> = (0..k)
                    .filter(|b| mask & (1 << b) != 0)
                    .map(|b| f.facets[b])
                    .collect();
                self.find(&subset)
            })
            .collect()
    }

    /// Faces of one higher codimension lying inside `f`.
    pub fn facets_of(&self, f: &Face) -> Vec<&Face> {
        self.faces
            .iter()
            .filter(|g| g.codim() == f.codim() + 1 && f.facets.iter().all(|i| g.facets.contains(i)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use crate::polytope::{corpus, SimplePolytope};

    #[test]
    fn face_counts() {
        let sq = SimplePolytope::new(corpus::unit_square()).unwrap();
        assert_eq!(sq.face_lattice().f_vector(), vec![1, 4, 4]);
        assert_eq!(sq.face_lattice().len(), 9);
        let s = SimplePolytope::new(corpus::simplex(2, 1)).unwrap();
        assert_eq!(s.face_lattice().len(), 7);
        let c = SimplePolytope::new(corpus::cube(3)).unwrap();
        assert_eq!(c.face_lattice().f_vector(), vec![1, 6, 12, 8]);
        assert_eq!(c.face_lattice().len(), 27);
    }

    #[test]
    fn euler_relation() {
        // Σ (-1)^dim f_dim = 1 over all nonempty faces of a polytope.
        for h in corpus::all() {
            let p = SimplePolytope::new(h).unwrap();
            let n = p.dim() as i64;
            let chi: i64 = p
                .face_lattice()
                .faces()
                .iter()
                .map(|f| {
                    if (n - f.codim() as i64) % 2 == 0 {
                        1
                    } else {
                        -1
                    }
                })
                .sum();
            assert_eq!(chi, 1);
        }
    }

    #[test]
    fn vertex_faces_are_subsets_of_tight_sets() {
        let p = SimplePolytope::new(corpus::nonregular_tetrahedron()).unwrap();
        let lattice = p.face_lattice();
        for v in p.vertices() {
            let containing = lattice
                .faces()
                .iter()
                .filter(|f| f.contains_vertex(v.id))
                .count();
            assert_eq!(containing, 1 << p.dim());
            for f in lattice.faces().iter().filter(|f| f.contains_vertex(v.id)) {
                assert!(f.facets.iter().all(|i| v.tight.contains(i)));
            }
        }
        assert!(lattice.faces().iter().all(|f| !f.vertices.is_empty()));
        assert!(lattice.face(0).facets.is_empty());
    }
}
