use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{smith_normal_form, IntMatrix, Rational, RationalAngle};
use crate::polytope::{Face, SimplePolytope};

/// `Γ_F = (N_F ∩ ℤⁿ*) / Σ_{i ∈ I_F} ℤ u_i`, where `N_F` is the span of the
/// normals of the facets containing `F`.
///
/// With `U_F = P·D·Q` in Smith form, the first `k = |I_F|` rows of `Q` are a
/// basis of the saturation and `Γ_F ≅ ⊕ ℤ/d_i`. Element `c` (with
/// `0 ≤ c_i < d_i`) is represented by the covector `Σ c_i q_i`.
#[derive(Debug, Clone)]
pub struct FaceGroup {
    pub face: usize,
    pub facets: Vec<usize>,
    pub diagonal: Vec<BigInt>,
    pub elements: Vec<Vec<BigInt>>,
    pub reps: Vec<Vec<BigInt>>,
    q_inv: IntMatrix,
    index: HashMap<Vec<BigInt>, usize>,
}

impl FaceGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Canonical element of the coset of an integer covector in the
    /// saturation; `None` when the covector lies outside it.
    pub fn reduce(&self, covector: &[BigInt]) -> Option<usize> {
        let n = covector.len();
        let k = self.diagonal.len();
        let mut c = vec![BigInt::zero(); n];
        for (j, cj) in c.iter_mut().enumerate() {
            for (i, x) in covector.iter().enumerate() {
                *cj += x * &self.q_inv[(i, j)];
            }
        }
        if c[k..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let key: Vec<BigInt> = c[..k]
            .iter()
            .zip(&self.diagonal)
            .map(|(x, d)| x.mod_floor(d))
            .collect();
        self.index.get(&key).copied()
    }
}

pub fn face_group(p: &SimplePolytope, face: &Face) -> Result<FaceGroup> {
    let n = p.dim();
    let k = face.facets.len();
    if k == 0 {
        let zero = vec![BigInt::zero(); n];
        let mut index = HashMap::new();
        index.insert(vec![], 0);
        return Ok(FaceGroup {
            face: face.id,
            facets: vec![],
            diagonal: vec![],
            elements: vec![vec![]],
            reps: vec![zero],
            q_inv: IntMatrix::identity(n),
            index,
        });
    }
    let rows: Vec<Vec<i64>> = face
        .facets
        .iter()
        .map(|&i| p.h().normal(i).to_vec())
        .collect();
    let snf = smith_normal_form(&IntMatrix::from_rows(&rows));
    let diagonal = snf.diagonal();
    if diagonal.iter().any(|d| d.is_zero()) {
        return Err(Error::Singular);
    }
    let mut elements: Vec<Vec<BigInt>> = vec![vec![]];
    for d in &diagonal {
        let bound = d.to_u64().expect("group order fits in u64");
        elements = elements
            .into_iter()
            .flat_map(|prefix| {
                (0..bound).map(move |c| {
                    let mut e = prefix.clone();
                    e.push(BigInt::from(c));
                    e
                })
            })
            .collect();
    }
    let reps = elements
        .iter()
        .map(|c| {
            (0..n)
                .map(|j| {
                    c.iter()
                        .enumerate()
                        .fold(BigInt::zero(), |acc, (i, ci)| acc + ci * &snf.q[(i, j)])
                })
                .collect()
        })
        .collect();
    let index = elements
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect();
    Ok(FaceGroup {
        face: face.id,
        facets: face.facets.clone(),
        diagonal,
        elements,
        reps,
        q_inv: snf.q_inv,
        index,
    })
}

/// `Γ_E → Γ_F` for `F ⊆ E`, as element indices. Fails with `NotInjective`.
pub fn inclusion_map(e: &FaceGroup, f: &FaceGroup) -> Result<Vec<usize>> {
    if !e.facets.iter().all(|i| f.facets.contains(i)) {
        return Err(Error::Dimension(format!(
            "face {} does not contain face {}",
            e.face, f.face
        )));
    }
    let image: Vec<usize> = e
        .reps
        .iter()
        .map(|r| {
            f.reduce(r).ok_or_else(|| {
                Error::NotInjective(format!("face {} rep outside saturation", e.face))
            })
        })
        .collect::<Result<_>>()?;
    let mut seen = image.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != image.len() {
        return Err(Error::NotInjective(format!(
            "Γ of face {} into Γ of face {}",
            e.face, f.face
        )));
    }
    Ok(image)
}

/// Angles `q_{γ,j}`, `j = 1..d`: `γ̃ = Σ_{i ∈ I_v} b_i u_i` at a vertex `v ∈ F`
/// gives `q_{γ,j} = b_j mod 1` on `I_F` and 0 elsewhere. Every vertex of `F` is
/// checked to give the same answer.
pub fn character_angles(
    p: &SimplePolytope,
    group: &FaceGroup,
    gamma: usize,
) -> Result<Vec<RationalAngle>> {
    let face = p.face_lattice().face(group.face);
    let rep: Vec<Rational> = group.reps[gamma]
        .iter()
        .map(|x| Rational::from_integer(x.clone()))
        .collect();
    let mut result: Option<Vec<RationalAngle>> = None;
    for &v in &face.vertices {
        let mut angles = vec![RationalAngle::one(); p.num_facets()];
        for (i, alpha) in p.edge_vectors(v) {
            let b = rep
                .iter()
                .zip(&alpha)
                .fold(Rational::zero(), |acc, (x, y)| acc + x * y);
            let q = RationalAngle::new(b.clone());
            if !group.facets.contains(&i) {
                if !b.is_zero() {
                    return Err(Error::ClaimViolated(format!(
                        "face {}, γ {gamma}: coefficient {b} on facet {i} outside I_F at vertex {v}",
                        group.face
                    )));
                }
                continue;
            }
            angles[i] = q;
        }
        match &result {
            None => result = Some(angles),
            Some(prev) if *prev != angles => {
                return Err(Error::ClaimViolated(format!(
                    "face {}, γ {gamma}: angles depend on the vertex ({v})",
                    group.face
                )))
            }
            Some(_) => {}
        }
    }
    result.ok_or(Error::Empty)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatSubset {
    pub face: usize,
    pub members: Vec<usize>,
}

/// Every face group, flat subset, and the angles of every flat element.
#[derive(Debug, Clone)]
pub struct GroupTable {
    pub groups: Vec<FaceGroup>,
    pub flats: Vec<FlatSubset>,
    /// `angles[F][m]` for the `m`-th member of `flats[F]`.
    pub angles: Vec<Vec<Vec<RationalAngle>>>,
}

impl GroupTable {
    pub fn build(p: &SimplePolytope) -> Result<Self> {
        let lattice = p.face_lattice();
        let groups: Vec<FaceGroup> = lattice
            .faces()
            .iter()
            .map(|f| face_group(p, f))
            .collect::<Result<_>>()?;
        let flats = flat_subsets_from(p, &groups)?;
        let mut angles = Vec::with_capacity(flats.len());
        for flat in &flats {
            let g = &groups[flat.face];
            let rows = flat
                .members
                .iter()
                .map(|&m| {
                    let a = character_angles(p, g, m)?;
                    if let Some(&j) = g.facets.iter().find(|&&j| a[j].is_one()) {
                        return Err(Error::ClaimViolated(format!(
                            "face {}, flat γ {m}: trivial angle on facet {j}",
                            g.face
                        )));
                    }
                    Ok(a)
                })
                .collect::<Result<Vec<_>>>()?;
            angles.push(rows);
        }
        Ok(GroupTable {
            groups,
            flats,
            angles,
        })
    }

    /// Least common multiple of every angle order.
    pub fn cyclotomic_order(&self) -> u64 {
        self.angles
            .iter()
            .flatten()
            .flatten()
            .fold(1u64, |acc, a| acc.lcm(&a.order()))
    }
}

fn flat_subsets_from(p: &SimplePolytope, groups: &[FaceGroup]) -> Result<Vec<FlatSubset>> {
    let lattice = p.face_lattice();
    let mut flats = Vec::with_capacity(groups.len());
    for f in lattice.faces() {
        let g = &groups[f.id];
        let mut hit = vec![false; g.order()];
        for e in lattice.strict_superfaces(f) {
            for idx in inclusion_map(&groups[e.id], g)? {
                hit[idx] = true;
            }
        }
        let members = (0..g.order()).filter(|&i| !hit[i]).collect();
        flats.push(FlatSubset {
            face: f.id,
            members,
        });
    }
    for v in p.vertices() {
        let total: usize = lattice
            .faces()
            .iter()
            .filter(|f| f.contains_vertex(v.id))
            .map(|f| flats[f.id].members.len())
            .sum();
        let order = p.vertex_determinant(v.id);
        if BigInt::from(total) != order {
            return Err(Error::PartitionViolated(v.id));
        }
    }
    Ok(flats)
}

/// `Γ_F^♭ = Γ_F ∖ ⋃_{E ⊋ F} image(Γ_E)` for every face, with the partition
/// `|Γ_v| = Σ_{F ∋ v} |Γ_F^♭|` checked at every vertex.
pub fn flat_subsets(p: &SimplePolytope) -> Result<Vec<FlatSubset>> {
    let groups: Vec<FaceGroup> = p
        .face_lattice()
        .faces()
        .iter()
        .map(|f| face_group(p, f))
        .collect::<Result<_>>()?;
    flat_subsets_from(p, &groups)
}

/// `|Γ_F|` as a product of Smith invariants.
pub fn group_order(g: &FaceGroup) -> BigInt {
    g.diagonal.iter().fold(BigInt::one(), |acc, d| acc * d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::polytope::corpus;

    fn table(h: crate::polytope::HPolytope) -> (SimplePolytope, GroupTable) {
        let p = SimplePolytope::new(h).unwrap();
        let t = GroupTable::build(&p).unwrap();
        (p, t)
    }

    #[test]
    fn square_groups_trivial() {
        let (p, t) = table(corpus::unit_square());
        assert!(t.groups.iter().all(|g| g.order() == 1));
        let nonempty: Vec<usize> = t
            .flats
            .iter()
            .filter(|f| !f.members.is_empty())
            .map(|f| f.face)
            .collect();
        assert_eq!(nonempty, vec![0]);
        assert_eq!(p.face_lattice().face(0).facets.len(), 0);
    }

    #[test]
    fn triangle_groups() {
        let (p, t) = table(corpus::nonregular_triangle());
        let orders: Vec<usize> = t.groups.iter().map(FaceGroup::order).collect();
        assert_eq!(orders, vec![1, 1, 1, 1, 1, 1, 2]);
        // The order-2 group belongs to the vertex (1,0) = facets {1,2}.
        let v = p.face_lattice().find(&[1, 2]).unwrap().id;
        assert_eq!(t.groups[v].order(), 2);
        assert_eq!(t.flats[v].members.len(), 1);
        assert_eq!(t.flats.iter().map(|f| f.members.len()).sum::<usize>(), 2);
        let angles = &t.angles[v][0];
        assert_eq!(angles[0], RationalAngle::one());
        assert_eq!(angles[1], RationalAngle::from_ratio(1, 2));
        assert_eq!(angles[2], RationalAngle::from_ratio(1, 2));
        assert_eq!(t.cyclotomic_order(), 2);
    }

    #[test]
    fn inclusion_of_edge_into_vertex() {
        let (p, t) = table(corpus::nonregular_triangle());
        let lattice = p.face_lattice();
        let edge = lattice.find(&[2]).unwrap().id;
        let v = lattice.find(&[1, 2]).unwrap().id;
        let map = inclusion_map(&t.groups[edge], &t.groups[v]).unwrap();
        assert_eq!(map.len(), 1);
        assert_eq!(
            t.groups[v].elements[map[0]],
            vec![BigInt::zero(), BigInt::zero()]
        );
        assert_eq!(
            inclusion_map(&t.groups[v], &t.groups[v]).unwrap(),
            vec![0, 1]
        );
        assert_eq!(inclusion_map(&t.groups[0], &t.groups[v]).unwrap(), vec![0]);
    }

    #[test]
    fn vertex_orders_match_determinants() {
        for h in corpus::all() {
            let (p, t) = table(h);
            for v in p.vertices() {
                let f = p.face_lattice().find(&v.tight).unwrap();
                assert_eq!(group_order(&t.groups[f.id]), p.vertex_determinant(v.id));
                assert_eq!(
                    BigInt::from(t.groups[f.id].order()),
                    p.vertex_determinant(v.id)
                );
            }
        }
    }

    #[test]
    fn tetrahedron_flats() {
        let (p, t) = table(corpus::nonregular_tetrahedron());
        assert!(t.flats.iter().map(|f| f.members.len()).sum::<usize>() > 1);
        for (flat, rows) in t.flats.iter().zip(&t.angles) {
            let facets = &p.face_lattice().face(flat.face).facets;
            for a in rows {
                for (j, q) in a.iter().enumerate() {
                    assert_eq!(q.is_one(), !facets.contains(&j));
                }
            }
        }
    }

    #[test]
    fn trivial_element_has_trivial_angles() {
        let (p, t) = table(corpus::nonregular_tetrahedron());
        for g in &t.groups {
            let zero = g
                .elements
                .iter()
                .position(|e| e.iter().all(Zero::is_zero))
                .unwrap();
            assert!(character_angles(&p, g, zero)
                .unwrap()
                .iter()
                .all(RationalAngle::is_one));
        }
        let _ = rat(0, 1);
    }
}
