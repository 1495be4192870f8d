//! Rational polyhedral cones with both ray and facet descriptions.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{self, IntMatrix, LatticeMap};
use crate::linalg::{self, Int, Rat};
use crate::polyhedron::{Constraint, Region};

/// A rational polyhedral cone, not necessarily strongly convex.
///
/// Canonical form: `rays` are primitive, sorted, and orthogonal to the
/// lineality space; `facet_normals` are primitive, inward, sorted, and lie in
/// the linear span of the cone. Two cones are equal iff they are the same set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone {
    dim: usize,
    ambient: usize,
    rays: Vec<Vec<Int>>,
    lineality: Vec<Vec<Int>>,
    facet_normals: Vec<Vec<Int>>,
    equations: Vec<Vec<Int>>,
}

fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, k, &mut Vec::new(), &mut out);
    out
}

/// Extreme rays and lineality of `{x : a·x ≥ 0 for a in ineqs, e·x = 0 for e in eqs}`.
///
/// Rays are taken orthogonal to the lineality space. A ray is a point of the
/// cone where the tight constraints have rank `n - 1`.
pub fn h_to_v(ineqs: &[Vec<Int>], eqs: &[Vec<Int>], n: usize) -> (Vec<Vec<Int>>, Vec<Vec<Int>>) {
    let mut ineqs: Vec<Vec<Int>> = ineqs
        .iter()
        .filter(|a| !linalg::is_zero_vec(a))
        .map(|a| linalg::primitive(a))
        .collect();
    ineqs.sort();
    ineqs.dedup();

    let mut all = ineqs.clone();
    all.extend(eqs.iter().cloned());
    let lin = lattice::saturate(&linalg::nullspace_int(&all, n), n);

    let mut fixed: Vec<Vec<Int>> = eqs.to_vec();
    fixed.extend(lin.iter().cloned());
    let fixed_rank = linalg::rank_int(&fixed, n);
    let d = n - fixed_rank;
    let mut rays: BTreeSet<Vec<Int>> = BTreeSet::new();
    if d > 0 {
        for subset in combinations(ineqs.len(), d - 1) {
            let mut rows = fixed.clone();
            rows.extend(subset.iter().map(|&i| ineqs[i].clone()));
            let ns = linalg::nullspace_int(&rows, n);
            if ns.len() != 1 {
                continue;
            }
            let v = &ns[0];
            let vals: Vec<Int> = ineqs.iter().map(|a| linalg::dot_int(a, v)).collect();
            if vals.iter().all(|x| !x.is_negative()) {
                rays.insert(v.clone());
            } else if vals.iter().all(|x| !x.is_positive()) {
                rays.insert(linalg::neg_vec(v));
            }
        }
    }
    (rays.into_iter().collect(), lin)
}

impl Cone {
    /// The cone `cone(generators) + span(lineality)`.
    pub fn generated(ambient: usize, generators: &[Vec<Int>], lineality: &[Vec<Int>]) -> Result<Cone> {
        for g in generators.iter().chain(lineality) {
            if g.len() != ambient {
                return Err(Error::DimensionMismatch(format!(
                    "generator of length {} in ambient rank {ambient}",
                    g.len()
                )));
            }
        }
        let (facets, perp) = h_to_v(generators, lineality, ambient);
        Ok(Self::from_dual_data(ambient, facets, perp))
    }

    /// `{x : a·x ≥ 0, e·x = 0}`.
    pub fn from_inequalities(ambient: usize, ineqs: &[Vec<Int>], eqs: &[Vec<Int>]) -> Result<Cone> {
        for g in ineqs.iter().chain(eqs) {
            if g.len() != ambient {
                return Err(Error::DimensionMismatch(format!(
                    "covector of length {} in ambient rank {ambient}",
                    g.len()
                )));
            }
        }
        let (rays, lin) = h_to_v(ineqs, eqs, ambient);
        Self::generated(ambient, &rays, &lin)
    }

    fn from_dual_data(ambient: usize, facets: Vec<Vec<Int>>, perp: Vec<Vec<Int>>) -> Cone {
        let (rays, lineality) = h_to_v(&facets, &perp, ambient);
        let dim = ambient - perp.len();
        Cone { dim, ambient, rays, lineality, facet_normals: facets, equations: perp }
    }

    pub fn zero(ambient: usize) -> Cone {
        Self::generated(ambient, &[], &[]).expect("empty generator list")
    }

    pub fn whole_space(ambient: usize) -> Cone {
        let basis: Vec<Vec<Int>> = IntMatrix::identity(ambient).rows_vec();
        Self::generated(ambient, &[], &basis).expect("standard basis")
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<Int>] {
        &self.rays
    }

    pub fn lineality(&self) -> &[Vec<Int>] {
        &self.lineality
    }

    pub fn facet_normals(&self) -> &[Vec<Int>] {
        &self.facet_normals
    }

    /// A lattice basis of the covectors vanishing on the cone.
    pub fn equations(&self) -> &[Vec<Int>] {
        &self.equations
    }

    pub fn is_strongly_convex(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.facet_normals.iter().all(|f| !linalg::dot_int_rat(f, x).is_negative())
            && self.equations.iter().all(|e| linalg::dot_int_rat(e, x).is_zero())
    }

    pub fn contains_int(&self, x: &[Int]) -> bool {
        self.contains(&linalg::to_rat(x))
    }

    /// Whether `x` is in the relative interior.
    pub fn relint_contains(&self, x: &[Rat]) -> bool {
        self.facet_normals.iter().all(|f| linalg::dot_int_rat(f, x).is_positive())
            && self.equations.iter().all(|e| linalg::dot_int_rat(e, x).is_zero())
    }

    /// An integer point of the relative interior.
    pub fn relint_point(&self) -> Vec<Int> {
        let mut p = vec![Int::zero(); self.ambient];
        for r in &self.rays {
            for (a, b) in p.iter_mut().zip(r) {
                *a += b;
            }
        }
        p
    }

    pub fn is_subset_of(&self, other: &Cone) -> bool {
        self.rays.iter().chain(&self.lineality).all(|r| other.contains_int(r))
            && self.lineality.iter().all(|l| other.contains_int(&linalg::neg_vec(l)))
    }

    /// The dual cone in the dual lattice.
    pub fn dual(&self) -> Cone {
        Cone::generated(self.ambient, &self.facet_normals, &self.equations).expect("same ambient rank")
    }

    /// `−σ`.
    pub fn negate(&self) -> Cone {
        let rays: Vec<Vec<Int>> = self.rays.iter().map(|r| linalg::neg_vec(r)).collect();
        Cone::generated(self.ambient, &rays, &self.lineality).expect("same ambient rank")
    }

    pub fn intersect(&self, other: &Cone) -> Cone {
        let mut ineqs = self.facet_normals.clone();
        ineqs.extend(other.facet_normals.iter().cloned());
        let mut eqs = self.equations.clone();
        eqs.extend(other.equations.iter().cloned());
        Cone::from_inequalities(self.ambient, &ineqs, &eqs).expect("same ambient rank")
    }

    /// Image under a lattice map (may contain lines).
    pub fn image(&self, map: &LatticeMap) -> Result<Cone> {
        if map.source_rank() != self.ambient {
            return Err(Error::DimensionMismatch("map source differs from cone ambient".into()));
        }
        let rays: Vec<Vec<Int>> = self.rays.iter().map(|r| map.apply(r)).collect();
        let lin: Vec<Vec<Int>> = self.lineality.iter().map(|r| map.apply(r)).collect();
        Cone::generated(map.target_rank(), &rays, &lin)
    }

    /// `{x : map(x) ∈ self}`.
    pub fn preimage(&self, map: &LatticeMap) -> Result<Cone> {
        if map.target_rank() != self.ambient {
            return Err(Error::DimensionMismatch("map target differs from cone ambient".into()));
        }
        let dual = map.dual();
        let ineqs: Vec<Vec<Int>> = self.facet_normals.iter().map(|f| dual.apply(f)).collect();
        let eqs: Vec<Vec<Int>> = self.equations.iter().map(|e| dual.apply(e)).collect();
        Cone::from_inequalities(map.source_rank(), &ineqs, &eqs)
    }

    /// The cone as an exact region.
    pub fn region(&self) -> Region {
        let mut cs: Vec<Constraint> = self.facet_normals.iter().map(|f| Constraint::ge_zero(f)).collect();
        cs.extend(self.equations.iter().map(|e| Constraint::eq(linalg::to_rat(e), Rat::zero())));
        Region::new(self.ambient, cs)
    }

    /// The relative interior as an exact region.
    pub fn relint_region(&self) -> Region {
        let mut cs: Vec<Constraint> = self
            .facet_normals
            .iter()
            .map(|f| Constraint::gt(linalg::to_rat(f), Rat::zero()))
            .collect();
        cs.extend(self.equations.iter().map(|e| Constraint::eq(linalg::to_rat(e), Rat::zero())));
        Region::new(self.ambient, cs)
    }

    /// All faces of a strongly convex cone, including `{0}` and the cone itself,
    /// sorted by dimension.
    pub fn faces(&self) -> Vec<Cone> {
        assert!(self.is_strongly_convex(), "faces are enumerated for strongly convex cones");
        let all: BTreeSet<usize> = (0..self.rays.len()).collect();
        let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        let mut queue = VecDeque::from([all.clone()]);
        seen.insert(all);
        while let Some(s) = queue.pop_front() {
            for f in &self.facet_normals {
                let t: BTreeSet<usize> =
                    s.iter().copied().filter(|&i| linalg::dot_int(f, &self.rays[i]).is_zero()).collect();
                if seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
        let mut faces: Vec<Cone> = seen
            .into_iter()
            .map(|s| {
                let rays: Vec<Vec<Int>> = s.into_iter().map(|i| self.rays[i].clone()).collect();
                Cone::generated(self.ambient, &rays, &[]).expect("subset of rays")
            })
            .collect();
        faces.sort_by(|a, b| (a.dim, &a.rays).cmp(&(b.dim, &b.rays)));
        faces.dedup();
        faces
    }

    /// Whether `self` is a face of `other` (both strongly convex).
    pub fn is_face_of(&self, other: &Cone) -> bool {
        if self.ambient != other.ambient || !self.is_subset_of(other) {
            return false;
        }
        let p = self.relint_point();
        let tight: Vec<&Vec<Int>> =
            other.facet_normals.iter().filter(|f| linalg::dot_int(f, &p).is_zero()).collect();
        let face_rays: Vec<Vec<Int>> = other
            .rays
            .iter()
            .filter(|r| tight.iter().all(|f| linalg::dot_int(f, r).is_zero()))
            .cloned()
            .collect();
        face_rays == self.rays
    }

    pub fn is_simplicial(&self) -> bool {
        self.is_strongly_convex() && self.rays.len() == self.dim
    }

    /// Index of the lattice spanned by the rays in its saturation.
    pub fn multiplicity(&self) -> Int {
        lattice::saturation_index(&self.rays, self.ambient)
    }

    /// Simplicial with rays forming part of a lattice basis.
    pub fn is_smooth(&self) -> bool {
        self.is_simplicial() && self.multiplicity().is_one()
    }

    /// A basis of `ℤσ`, the saturated lattice spanned by the cone.
    pub fn span_basis(&self) -> Vec<Vec<Int>> {
        let mut gens = self.rays.clone();
        gens.extend(self.lineality.iter().cloned());
        lattice::saturate(&gens, self.ambient)
    }

    pub fn analyze(&self) -> ConeAnalysis {
        ConeAnalysis {
            dual: self.dual(),
            perp_basis: self.equations.clone(),
            faces: if self.is_strongly_convex() { self.faces() } else { Vec::new() },
            smooth: self.is_smooth(),
            span_basis: self.span_basis(),
        }
    }
}

/// Builds a strongly convex cone from its generators.
pub fn cone_from_rays(ambient: usize, rays: &[Vec<Int>]) -> Result<Cone> {
    let c = Cone::generated(ambient, rays, &[])?;
    if !c.is_strongly_convex() {
        return Err(Error::NotStronglyConvex);
    }
    Ok(c)
}

#[derive(Clone, Debug)]
pub struct ConeAnalysis {
    pub dual: Cone,
    pub perp_basis: Vec<Vec<Int>>,
    pub faces: Vec<Cone>,
    pub smooth: bool,
    pub span_basis: Vec<Vec<Int>>,
}

pub(crate) fn fmt_vec(v: &[Int]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rays: Vec<String> = self.rays.iter().map(|r| fmt_vec(r)).collect();
        write!(f, "cone[{}]", rays.join(","))?;
        if !self.lineality.is_empty() {
            let lin: Vec<String> = self.lineality.iter().map(|r| fmt_vec(r)).collect();
            write!(f, "+span[{}]", lin.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vec;

    fn c(rays: &[&[i64]]) -> Cone {
        let n = rays.first().map_or(2, |r| r.len());
        cone_from_rays(n, &rays.iter().map(|r| int_vec(r)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn facets_of_git_cone() {
        let k = c(&[&[1, 0], &[1, 2]]);
        assert_eq!(k.facet_normals(), &[int_vec(&[0, 1]), int_vec(&[2, -1])]);
        assert_eq!(k.multiplicity(), Int::from(2));
        assert!(!k.is_smooth());
        assert_eq!(k.dual().rays(), &[int_vec(&[0, 1]), int_vec(&[2, -1])]);
    }

    #[test]
    fn quadrant_and_line() {
        let q = c(&[&[1, 0], &[0, 1]]);
        assert_eq!(q.facet_normals(), &[int_vec(&[0, 1]), int_vec(&[1, 0])]);
        assert!(q.is_smooth());
        assert!(q.equations().is_empty());
        let err = cone_from_rays(2, &[int_vec(&[1, 0]), int_vec(&[-1, 0])]).unwrap_err();
        assert_eq!(err, Error::NotStronglyConvex);
    }

    #[test]
    fn ray_faces_and_perp() {
        let r = c(&[&[1, 0]]);
        assert_eq!(r.equations(), &[int_vec(&[0, 1])]);
        let faces = r.faces();
        assert_eq!(faces.len(), 2);
        assert!(faces[0].is_zero());
        assert_eq!(faces[1], r);
    }

    #[test]
    fn redundant_generators_collapse() {
        let a = c(&[&[1, 0], &[1, 1], &[0, 1], &[2, 2]]);
        assert_eq!(a, c(&[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn faces_of_square_pyramid() {
        let p = c(&[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]]);
        assert_eq!(p.facet_normals().len(), 4);
        // 1 + 4 + 4 + 1
        assert_eq!(p.faces().len(), 10);
        assert!(!p.is_simplicial());
    }

    #[test]
    fn preimage_can_contain_lines() {
        // Projection ℤ² → ℤ onto the first coordinate; preimage of ℝ≥0.
        let phi = LatticeMap::from_images(&[int_vec(&[1]), int_vec(&[0])], 1).unwrap();
        let pre = c(&[&[1]]).preimage(&phi).unwrap();
        assert_eq!(pre.lineality(), &[int_vec(&[0, 1])]);
        assert_eq!(pre.rays(), &[int_vec(&[1, 0])]);
        assert_eq!(pre.dim(), 2);
    }

    #[test]
    fn face_relation() {
        let q = c(&[&[1, 0], &[0, 1]]);
        assert!(c(&[&[1, 0]]).is_face_of(&q));
        assert!(Cone::zero(2).is_face_of(&q));
        assert!(!c(&[&[1, 1]]).is_face_of(&q));
    }
}
