//! Fans, fan morphisms, and the operations on them.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::arrangement::{self, CellMode, Hyperplane};
use crate::cone::{cone_from_rays, Cone};
use crate::error::{Error, Result};
use crate::lattice::{self, IntMatrix, LatticeMap};
use crate::linalg::{self, Int, Rat};

/// A face-closed collection of strongly convex cones meeting along faces.
/// Cones are kept sorted by dimension, then rays.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Fan {
    ambient: usize,
    cones: Vec<Cone>,
}

impl Fan {
    /// Validates and face-closes a list of cones.
    pub fn new(ambient: usize, cones: Vec<Cone>) -> Result<Fan> {
        let mut closed: BTreeSet<Cone> = BTreeSet::new();
        for c in &cones {
            if c.ambient_rank() != ambient {
                return Err(Error::DimensionMismatch(format!(
                    "cone {c} in ambient rank {} inside a rank {ambient} fan",
                    c.ambient_rank()
                )));
            }
            if !c.is_strongly_convex() {
                return Err(Error::NotStronglyConvex);
            }
            if closed.contains(c) {
                continue;
            }
            closed.extend(c.faces());
        }
        let fan = Fan { ambient, cones: closed.into_iter().collect() };
        let max = fan.maximal_cones();
        for (i, a) in max.iter().enumerate() {
            for b in &max[i + 1..] {
                let m = a.intersect(b);
                if !m.is_face_of(a) || !m.is_face_of(b) {
                    return Err(Error::OverlappingCones(a.to_string(), b.to_string()));
                }
            }
        }
        Ok(fan)
    }

    /// Builds from maximal cones given by integer ray lists.
    pub fn from_rays(ambient: usize, max_cones: &[Vec<Vec<Int>>]) -> Result<Fan> {
        let cones = max_cones.iter().map(|rays| cone_from_rays(ambient, rays)).collect::<Result<Vec<_>>>()?;
        Fan::new(ambient, cones)
    }

    pub fn from_i64(ambient: usize, max_cones: &[&[&[i64]]]) -> Result<Fan> {
        let cones: Vec<Vec<Vec<Int>>> =
            max_cones.iter().map(|c| c.iter().map(|r| linalg::int_vec(r)).collect()).collect();
        Fan::from_rays(ambient, &cones)
    }

    /// The fan with no cones at all (empty support).
    pub fn empty(ambient: usize) -> Fan {
        Fan { ambient, cones: Vec::new() }
    }

    /// The fan `{0}`.
    pub fn zero(ambient: usize) -> Fan {
        Fan { ambient, cones: vec![Cone::zero(ambient)] }
    }

    /// The complete fan of coordinate orthants.
    pub fn orthants(ambient: usize) -> Fan {
        let mut cones = Vec::new();
        for signs in 0..(1u64 << ambient) {
            let rays: Vec<Vec<Int>> = (0..ambient)
                .map(|i| {
                    let mut e = vec![Int::zero(); ambient];
                    e[i] = if signs >> i & 1 == 1 { -Int::one() } else { Int::one() };
                    e
                })
                .collect();
            cones.push(cone_from_rays(ambient, &rays).expect("orthant is strongly convex"));
        }
        Fan::new(ambient, cones).expect("orthants form a fan")
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn contains_cone(&self, c: &Cone) -> bool {
        self.cones.binary_search(c).is_ok()
    }

    pub fn maximal_cones(&self) -> Vec<Cone> {
        self.cones
            .iter()
            .filter(|c| !self.cones.iter().any(|d| d.dim() > c.dim() && c.is_face_of(d)))
            .cloned()
            .collect()
    }

    /// Primitive generators of the one-dimensional cones.
    pub fn rays(&self) -> Vec<Vec<Int>> {
        self.cones.iter().filter(|c| c.dim() == 1).map(|c| c.rays()[0].clone()).collect()
    }

    pub fn is_smooth(&self) -> bool {
        self.cones.iter().all(Cone::is_smooth)
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(Cone::is_simplicial)
    }

    pub fn support_contains(&self, x: &[Rat]) -> bool {
        self.cones.iter().any(|c| c.contains(x))
    }

    /// The cone whose relative interior contains `x`.
    pub fn cone_containing(&self, x: &[Rat]) -> Option<&Cone> {
        self.cones.iter().find(|c| c.relint_contains(x))
    }

    /// Facet and span hyperplanes of all cones; every cone is a union of
    /// cells of this arrangement.
    pub fn hyperplanes(&self) -> Vec<Hyperplane> {
        let mut hs = Vec::new();
        for c in &self.cones {
            for f in c.facet_normals().iter().chain(c.equations()) {
                hs.push(Hyperplane::linear(linalg::to_rat(f)));
            }
        }
        arrangement::dedupe(&hs)
    }

    pub fn is_complete(&self) -> Result<bool> {
        let cells = arrangement::cells(
            &crate::polyhedron::Region::whole(self.ambient),
            &self.hyperplanes(),
            CellMode::Chambers,
        )?;
        Ok(cells.iter().all(|c| self.support_contains(&c.sample)))
    }

    /// Whether the two supports are the same set.
    pub fn same_support(&self, other: &Fan) -> Result<bool> {
        if self.ambient != other.ambient {
            return Ok(false);
        }
        let mut hs = self.hyperplanes();
        hs.extend(other.hyperplanes());
        let cells = arrangement::cells(
            &crate::polyhedron::Region::whole(self.ambient),
            &hs,
            CellMode::AllFaces,
        )?;
        Ok(cells.iter().all(|c| self.support_contains(&c.sample) == other.support_contains(&c.sample)))
    }

    /// `Σ × Σ′` on `N ⊕ N′`.
    pub fn product(&self, other: &Fan) -> Fan {
        let n = self.ambient + other.ambient;
        let mut cones = Vec::new();
        for a in self.maximal_cones() {
            for b in other.maximal_cones() {
                let mut rays: Vec<Vec<Int>> = a
                    .rays()
                    .iter()
                    .map(|r| {
                        let mut v = r.clone();
                        v.extend(std::iter::repeat_n(Int::zero(), other.ambient));
                        v
                    })
                    .collect();
                rays.extend(b.rays().iter().map(|r| {
                    let mut v = vec![Int::zero(); self.ambient];
                    v.extend(r.iter().cloned());
                    v
                }));
                cones.push(cone_from_rays(n, &rays).expect("product of pointed cones is pointed"));
            }
        }
        Fan::new(n, cones).expect("product of fans is a fan")
    }

    /// All pairwise intersections; its support is the intersection of supports.
    pub fn common_refinement(&self, other: &Fan) -> Result<Fan> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch("fans live in different lattices".into()));
        }
        let mut cones = Vec::new();
        for a in self.maximal_cones() {
            for b in other.maximal_cones() {
                cones.push(a.intersect(&b));
            }
        }
        Fan::new(self.ambient, cones)
    }

    /// The image of every cone under a map that is injective on each cone's
    /// span, as a collection to be validated.
    pub fn image(&self, map: &LatticeMap) -> Result<Fan> {
        let cones = self.maximal_cones().iter().map(|c| c.image(map)).collect::<Result<Vec<_>>>()?;
        Fan::new(map.target_rank(), cones)
    }
}

impl fmt::Display for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let max: Vec<String> = self.maximal_cones().iter().map(|c| c.to_string()).collect();
        write!(f, "fan(rank {}; {})", self.ambient, max.join(", "))
    }
}

impl fmt::Debug for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FanRelation {
    Equal,
    /// The first fan is a subfan of the second.
    SubfanOf,
    /// The second fan is a subfan of the first.
    Contains,
    /// The first fan refines the second.
    Refines,
    /// The second fan refines the first.
    RefinedBy,
    Unrelated,
}

fn refines(a: &Fan, b: &Fan) -> Result<bool> {
    let covered = a.maximal_cones().iter().all(|c| b.maximal_cones().iter().any(|d| c.is_subset_of(d)));
    Ok(covered && a.same_support(b)?)
}

pub fn fan_relate(a: &Fan, b: &Fan) -> Result<FanRelation> {
    if a.ambient != b.ambient {
        return Ok(FanRelation::Unrelated);
    }
    if a.cones == b.cones {
        return Ok(FanRelation::Equal);
    }
    if a.cones.iter().all(|c| b.contains_cone(c)) {
        return Ok(FanRelation::SubfanOf);
    }
    if b.cones.iter().all(|c| a.contains_cone(c)) {
        return Ok(FanRelation::Contains);
    }
    if refines(a, b)? {
        return Ok(FanRelation::Refines);
    }
    if refines(b, a)? {
        return Ok(FanRelation::RefinedBy);
    }
    Ok(FanRelation::Unrelated)
}

/// A lattice map sending every source cone into some target cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanMorphism {
    map: LatticeMap,
    source: Fan,
    target: Fan,
}

impl FanMorphism {
    pub fn new(map: LatticeMap, source: Fan, target: Fan) -> Result<FanMorphism> {
        if map.source_rank() != source.ambient || map.target_rank() != target.ambient {
            return Err(Error::DimensionMismatch(format!(
                "map ℤ^{} → ℤ^{} between fans of rank {} and {}",
                map.source_rank(),
                map.target_rank(),
                source.ambient,
                target.ambient
            )));
        }
        let phi = FanMorphism { map, source, target };
        for c in phi.source.maximal_cones() {
            if phi.image_container(&c).is_none() {
                return Err(Error::NotAFanMorphism(format!("image of {c} lies in no target cone")));
            }
        }
        Ok(phi)
    }

    pub fn identity(fan: &Fan) -> FanMorphism {
        FanMorphism { map: LatticeMap::identity(fan.ambient), source: fan.clone(), target: fan.clone() }
    }

    pub fn map(&self) -> &LatticeMap {
        &self.map
    }

    pub fn source(&self) -> &Fan {
        &self.source
    }

    pub fn target(&self) -> &Fan {
        &self.target
    }

    /// The smallest target cone containing the image of `c`.
    pub fn image_container(&self, c: &Cone) -> Option<&Cone> {
        let p = self.map.apply(&c.relint_point());
        let t = self.target.cone_containing(&linalg::to_rat(&p))?;
        c.rays().iter().all(|r| t.contains_int(&self.map.apply(r))).then_some(t)
    }

    pub fn compose(&self, inner: &FanMorphism) -> Result<FanMorphism> {
        FanMorphism::new(self.map.compose(&inner.map)?, inner.source.clone(), self.target.clone())
    }

    /// Whether `φ⁻¹|Σ′| = |Σ|`; otherwise returns a primitive integer point
    /// of `φ⁻¹|Σ′| ∖ |Σ|` (the lex-smallest cell sample, rescaled).
    pub fn properness(&self) -> Result<(bool, Option<Vec<Int>>)> {
        let mut hs = self.source.hyperplanes();
        let dual = self.map.dual();
        for h in self.target.hyperplanes() {
            let pulled = dual.apply_rat(&h.normal);
            hs.push(Hyperplane::linear(pulled));
        }
        let cells = arrangement::cells(
            &crate::polyhedron::Region::whole(self.source.ambient),
            &hs,
            CellMode::AllFaces,
        )?;
        let mut witness: Option<Vec<Rat>> = None;
        for c in cells {
            let in_target = self.target.support_contains(&self.map.apply_rat(&c.sample));
            if in_target && !self.source.support_contains(&c.sample) {
                if witness.as_ref().is_none_or(|w| c.sample < *w) {
                    witness = Some(c.sample);
                }
            }
        }
        Ok(match witness {
            None => (true, None),
            Some(w) => (false, Some(linalg::primitive_from_rat(&w))),
        })
    }

    pub fn is_proper(&self) -> Result<bool> {
        Ok(self.properness()?.0)
    }
}

// ---- smooth refinement ----

/// The facets of a strongly convex cone, as ray subsets.
fn facet_ray_sets(c: &Cone) -> Vec<Vec<Vec<Int>>> {
    c.facet_normals()
        .iter()
        .map(|f| c.rays().iter().filter(|r| linalg::dot_int(f, r).is_zero()).cloned().collect())
        .collect()
}

/// Pulling refinement at the ray `v`.
fn pull(max_cones: &[Cone], v: &[Int]) -> Vec<Cone> {
    let mut out = Vec::new();
    for c in max_cones {
        if !c.rays().iter().any(|r| r.as_slice() == v) {
            out.push(c.clone());
            continue;
        }
        for mut rays in facet_ray_sets(c) {
            if rays.iter().any(|r| r.as_slice() == v) {
                continue;
            }
            rays.push(v.to_vec());
            out.push(cone_from_rays(c.ambient_rank(), &rays).expect("subcone of a pointed cone"));
        }
    }
    out
}

/// Coefficients of `v` in the rays of a simplicial cone.
fn simplicial_coords(c: &Cone, v: &[Int]) -> Option<Vec<Rat>> {
    let n = c.ambient_rank();
    let rows: Vec<Vec<Rat>> = (0..n).map(|i| c.rays().iter().map(|r| Rat::from_integer(r[i].clone())).collect()).collect();
    linalg::solve(&rows, &linalg::to_rat(v), c.rays().len())
}

/// Stellar subdivision of a simplicial fan at the primitive vector `v`.
fn stellar(max_cones: &[Cone], v: &[Int]) -> Vec<Cone> {
    let mut out = Vec::new();
    for c in max_cones {
        if !c.contains_int(v) || c.rays().iter().any(|r| r.as_slice() == v) {
            out.push(c.clone());
            continue;
        }
        let lambda = simplicial_coords(c, v).expect("v lies in the cone");
        for (j, l) in lambda.iter().enumerate() {
            if l.is_positive() {
                let mut rays = c.rays().to_vec();
                rays[j] = v.to_vec();
                out.push(cone_from_rays(c.ambient_rank(), &rays).expect("subcone of a pointed cone"));
            }
        }
    }
    out
}

/// Nonzero lattice points `Σ λ_i r_i` with `λ_i ∈ [0, 1)`, made primitive.
fn parallelepiped_points(c: &Cone) -> Vec<Vec<Int>> {
    let n = c.ambient_rank();
    let k = c.rays().len();
    let basis = c.span_basis();
    // Ray coordinates in the saturated basis of the span.
    let brows: Vec<Vec<Rat>> = (0..n).map(|i| basis.iter().map(|b| Rat::from_integer(b[i].clone())).collect()).collect();
    let coords: Vec<Vec<Int>> = c
        .rays()
        .iter()
        .map(|r| {
            linalg::solve(&brows, &linalg::to_rat(r), k)
                .expect("ray lies in its span")
                .iter()
                .map(|x| x.to_integer())
                .collect()
        })
        .collect();
    let r = IntMatrix::from_columns(&coords, k).expect("square");
    let snf = lattice::smith_normal_form(&r);
    let d = snf.invariants();
    let rinv = linalg::inverse(&r.rat_rows()).expect("simplicial cone");
    let mut out: BTreeSet<Vec<Int>> = BTreeSet::new();
    let mut digits = vec![Int::zero(); k];
    loop {
        let z = snf.left_inverse.apply(&digits);
        let lambda: Vec<Rat> = linalg::mat_vec(&rinv, &linalg::to_rat(&z))
            .into_iter()
            .map(|x| &x - Rat::from_integer(linalg::floor(&x)))
            .collect();
        if !linalg::is_zero_vec(&lambda) {
            let mut p = vec![Rat::zero(); n];
            for (l, ray) in lambda.iter().zip(c.rays()) {
                for (pi, ri) in p.iter_mut().zip(ray) {
                    *pi += l * Rat::from_integer(ri.clone());
                }
            }
            out.insert(linalg::primitive_from_rat(&p));
        }
        // Odometer over ⊕ ℤ/d_i.
        let mut i = 0;
        loop {
            if i == k {
                return out.into_iter().collect();
            }
            digits[i] += 1;
            if digits[i] < d[i] {
                break;
            }
            digits[i] = Int::zero();
            i += 1;
        }
    }
}

fn max_multiplicity(cones: &[Cone]) -> Int {
    cones.iter().map(Cone::multiplicity).max().unwrap_or_else(Int::one)
}

/// A smooth fan refining `fan`, leaving smooth cones untouched.
pub fn smooth_refine(fan: &Fan) -> Result<Fan> {
    let n = fan.ambient;
    let mut max = fan.maximal_cones();
    let mut pulled: BTreeSet<Vec<Int>> = BTreeSet::new();
    while let Some(c) = max.iter().filter(|c| !c.is_simplicial()).min().cloned() {
        let Some(v) = c.rays().iter().find(|r| !pulled.contains(*r)).cloned() else {
            return Err(Error::InternalInconsistency(format!("{c} stays non-simplicial after pulling all its rays")));
        };
        max = pull(&max, &v);
        pulled.insert(v);
    }
    loop {
        let worst = max_multiplicity(&max);
        if worst.is_one() {
            break;
        }
        let target = max.iter().filter(|c| c.multiplicity() == worst).min().expect("some cone attains the max").clone();
        let mut best: Option<(Int, Vec<Int>, Vec<Cone>)> = None;
        for v in parallelepiped_points(&target) {
            let next = stellar(&max, &v);
            let m = max_multiplicity(&next);
            let better = match &best {
                None => true,
                Some((bm, bv, _)) => m < *bm || (m == *bm && v < *bv),
            };
            if better {
                best = Some((m, v, next));
            }
        }
        max = best.expect("a non-smooth simplicial cone has parallelepiped points").2;
    }
    Fan::new(n, max)
}

// ---- completion ----

fn half(v: &[Int]) -> u8 {
    if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
        0
    } else {
        1
    }
}

fn cross(a: &[Int], b: &[Int]) -> Int {
    &a[0] * &b[1] - &a[1] * &b[0]
}

fn angle_cmp(a: &[Int], b: &[Int]) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| Int::zero().cmp(&cross(a, b)))
}

/// A complete fan containing `fan` (or a refinement of it) as a subfan.
/// The flag reports whether the input had to be refined.
pub fn complete_fan(fan: &Fan) -> Result<(Fan, bool)> {
    let n = fan.ambient;
    if fan.is_complete()? {
        return Ok((fan.clone(), false));
    }
    match n {
        1 => {
            let mut cones = fan.cones.clone();
            cones.push(cone_from_rays(1, &[linalg::int_vec(&[1])])?);
            cones.push(cone_from_rays(1, &[linalg::int_vec(&[-1])])?);
            cones.retain(|c| c.dim() == 1 || c.is_zero());
            Ok((Fan::new(1, cones)?, false))
        }
        2 => {
            let mut rays = fan.rays();
            if rays.is_empty() {
                rays = [[1, 0], [0, 1], [-1, 0], [0, -1]].iter().map(|r| linalg::int_vec(r)).collect();
            }
            let mut max: Vec<Cone> = fan.maximal_cones().into_iter().filter(|c| c.dim() == 2).collect();
            loop {
                rays.sort_by(|a, b| angle_cmp(a, b));
                rays.dedup();
                let mut inserted = false;
                for i in 0..rays.len() {
                    let a = &rays[i];
                    let b = &rays[(i + 1) % rays.len()];
                    if rays.len() > 1 && cross(a, b).is_positive() {
                        let c = cone_from_rays(2, &[a.clone(), b.clone()])?;
                        if !max.contains(&c) {
                            max.push(c);
                        }
                    } else {
                        let rot = vec![-a[1].clone(), a[0].clone()];
                        rays.push(rot);
                        inserted = true;
                        break;
                    }
                }
                if !inserted {
                    break;
                }
            }
            let mut cones = fan.cones.clone();
            cones.extend(max);
            Ok((Fan::new(2, cones)?, false))
        }
        _ => {
            let mut hs = fan.hyperplanes();
            for i in 0..n {
                let mut e = vec![Rat::zero(); n];
                e[i] = Rat::one();
                hs.push(Hyperplane::linear(e));
            }
            let cells = arrangement::cells(&crate::polyhedron::Region::whole(n), &hs, CellMode::Chambers)?;
            let hs = arrangement::dedupe(&hs);
            let mut cones = Vec::new();
            for cell in cells {
                let ineqs: Vec<Vec<Int>> = hs
                    .iter()
                    .map(|h| {
                        let normal = linalg::primitive_from_rat(&h.normal);
                        if linalg::dot(&h.normal, &cell.sample).is_positive() {
                            normal
                        } else {
                            linalg::neg_vec(&normal)
                        }
                    })
                    .collect();
                cones.push(Cone::from_inequalities(n, &ineqs, &[])?);
            }
            let out = Fan::new(n, cones)?;
            let refined = !fan.cones.iter().all(|c| out.contains_cone(c));
            Ok((out, refined))
        }
    }
}

// ---- stars and quotients ----

#[derive(Clone, Debug)]
pub struct StarQuotient {
    pub star: Vec<Cone>,
    pub closed_star: Fan,
    pub boundary_star: Fan,
    pub quotient_fan: Fan,
    /// `N → N/ℤτ`.
    pub projection: LatticeMap,
}

pub fn star_quotient(fan: &Fan, tau: &Cone) -> Result<StarQuotient> {
    if !fan.contains_cone(tau) {
        return Err(Error::ConeNotInFan(tau.to_string()));
    }
    let n = fan.ambient;
    let star: Vec<Cone> = fan.cones.iter().filter(|c| tau.is_face_of(c)).cloned().collect();
    let closed_star = Fan::new(n, star.clone())?;
    let boundary: Vec<Cone> = closed_star.cones.iter().filter(|c| !star.contains(c)).cloned().collect();
    let boundary_star = Fan { ambient: n, cones: boundary };

    let p = LatticeMap::new(lattice::quotient_map(&tau.span_basis(), n));
    let images: Vec<Cone> = star.iter().map(|c| c.image(&p)).collect::<Result<Vec<_>>>()?;
    for (c, img) in star.iter().zip(&images) {
        if !img.is_strongly_convex() {
            return Err(Error::InternalInconsistency(format!("projection of {c} contains a line")));
        }
    }
    let quotient_fan = Fan::new(p.target_rank(), images.clone())?;
    // The projection must be a poset isomorphism Star(τ) → quotient fan.
    let distinct: BTreeSet<&Cone> = images.iter().collect();
    if distinct.len() != star.len() || quotient_fan.cones.len() != star.len() {
        return Err(Error::InternalInconsistency("star does not project bijectively".into()));
    }
    for (i, a) in star.iter().enumerate() {
        for (j, b) in star.iter().enumerate() {
            if a.is_face_of(b) != images[i].is_face_of(&images[j]) {
                return Err(Error::InternalInconsistency("projection does not preserve the face order".into()));
            }
        }
    }
    Ok(StarQuotient { star, closed_star, boundary_star, quotient_fan, projection: p })
}
