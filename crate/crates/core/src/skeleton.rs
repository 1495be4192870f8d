//! Conic Lagrangians `⋃ (σ⊥/M) × (−σ)` in the cotangent bundle of a torus,
//! and the functoriality tests built on them.

use num_traits::{One, Zero};

use crate::arrangement::{self, CellMode, Hyperplane};
use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::lattice::{self, LatticeMap};
use crate::linalg::{self, Int, Rat};
use crate::stacky::{StackyFan, StackyMorphism, TorusCoverData};

/// `(W/M) × fiber`, with `W` a rational subspace of `M_ℝ` through 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonPiece {
    /// A saturated lattice basis of `W ∩ M`.
    pub subspace: Vec<Vec<Int>>,
    /// Covector directions in `N_ℝ`; need not be strongly convex.
    pub fiber: Cone,
    /// The cone `σ` the piece came from, when built from a fan.
    pub cone: Option<Cone>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SkeletonBase {
    Torus { rank: usize },
    Cover(TorusCoverData),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    pub base: SkeletonBase,
    pub pieces: Vec<SkeletonPiece>,
}

/// A point of the cotangent bundle: `base` in `M_ℝ` (read modulo the deck
/// lattice), optionally a component label, and a covector in `N_ℝ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CovectorPoint {
    pub base: Vec<Rat>,
    pub component: Option<Vec<Int>>,
    pub covector: Vec<Rat>,
}

impl CovectorPoint {
    pub fn new(base: Vec<Rat>, covector: Vec<Rat>) -> Self {
        CovectorPoint { base, component: None, covector }
    }
}

impl Skeleton {
    pub fn rank(&self) -> usize {
        match &self.base {
            SkeletonBase::Torus { rank } => *rank,
            SkeletonBase::Cover(t) => t.compact_rank + t.vector_rank,
        }
    }

    /// The whole cotangent bundle.
    pub fn full(rank: usize) -> Skeleton {
        Skeleton {
            base: SkeletonBase::Torus { rank },
            pieces: vec![SkeletonPiece {
                subspace: lattice::IntMatrix::identity(rank).rows_vec(),
                fiber: Cone::whole_space(rank),
                cone: None,
            }],
        }
    }

    /// The zero section alone.
    pub fn zero_section(rank: usize) -> Skeleton {
        Skeleton {
            base: SkeletonBase::Torus { rank },
            pieces: vec![SkeletonPiece {
                subspace: lattice::IntMatrix::identity(rank).rows_vec(),
                fiber: Cone::zero(rank),
                cone: Some(Cone::zero(rank)),
            }],
        }
    }

    pub fn contains(&self, pt: &CovectorPoint) -> Result<bool> {
        let n = self.rank();
        if pt.base.len() != n || pt.covector.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "point of ranks ({}, {}) on a rank {n} torus",
                pt.base.len(),
                pt.covector.len()
            )));
        }
        Ok(self.pieces.iter().any(|p| p.fiber.contains(&pt.covector) && in_subtorus(&p.subspace, &pt.base, n)))
    }
}

/// Whether `b ∈ W + ℤⁿ`.
fn in_subtorus(subspace: &[Vec<Int>], b: &[Rat], n: usize) -> bool {
    let p = lattice::quotient_map(subspace, n);
    p.apply_rat(b).iter().all(|x| x.is_integer())
}

pub fn fltz_skeleton(x: &StackyFan) -> Skeleton {
    let n = x.rank();
    let base = if x.group().is_trivial() {
        SkeletonBase::Torus { rank: n }
    } else {
        SkeletonBase::Cover(x.torus_data())
    };
    let pieces = x
        .fan()
        .cones()
        .iter()
        .map(|c| SkeletonPiece { subspace: c.equations().to_vec(), fiber: c.negate(), cone: Some(c.clone()) })
        .collect();
    Skeleton { base, pieces }
}

/// Image of `Λ′` (on the target's torus) under `f_π f_d⁻¹`.
pub fn pushforward_skeleton(phi: &StackyMorphism, target_skeleton: &Skeleton) -> Result<Skeleton> {
    let phi_n = phi.phi_n();
    let phi_m: LatticeMap = phi.phi_m();
    let n = phi_n.source_rank();
    if target_skeleton.rank() != phi_n.target_rank() {
        return Err(Error::DimensionMismatch("skeleton does not live on the target torus".into()));
    }
    let mut pieces = Vec::with_capacity(target_skeleton.pieces.len());
    for p in &target_skeleton.pieces {
        let image: Vec<Vec<Int>> = p.subspace.iter().map(|w| phi_m.apply(w)).collect();
        pieces.push(SkeletonPiece {
            subspace: lattice::saturate(&image, n),
            fiber: p.fiber.preimage(phi_n)?,
            cone: None,
        });
    }
    let base = if phi.source().group().is_trivial() {
        SkeletonBase::Torus { rank: n }
    } else {
        SkeletonBase::Cover(phi.source().torus_data())
    };
    Ok(Skeleton { base, pieces })
}

fn fiber_hyperplanes(s: &Skeleton) -> Vec<Hyperplane> {
    let mut hs = Vec::new();
    for p in &s.pieces {
        for f in p.fiber.facet_normals().iter().chain(p.fiber.equations()) {
            hs.push(Hyperplane::linear(linalg::to_rat(f)));
        }
    }
    hs
}

const PRIMES: [i64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// A rational point of `V` outside each of the given proper subtori.
fn generic_point(v: &[Vec<Int>], avoid: &[&Vec<Vec<Int>>], n: usize) -> Vec<Rat> {
    for shift in 0..PRIMES.len() {
        let mut b = vec![Rat::zero(); n];
        for (j, basis) in v.iter().enumerate() {
            let p = PRIMES[(j + shift) % PRIMES.len()] * PRIMES[shift];
            let w = Rat::new(Int::one(), Int::from(p));
            for (bi, x) in b.iter_mut().zip(basis) {
                *bi += &w * Rat::from_integer(x.clone());
            }
        }
        if avoid.iter().all(|w| !in_subtorus(w, &b, n)) {
            return b;
        }
    }
    unreachable!("a subtorus is not a finite union of proper subtori")
}

/// Exact containment of `a` in `b`. On failure returns a witness point of
/// `a ∖ b`.
pub fn skeleton_subset_witness(a: &Skeleton, b: &Skeleton) -> Result<Option<CovectorPoint>> {
    let n = a.rank();
    if b.rank() != n {
        return Err(Error::DimensionMismatch("skeletons over tori of different rank".into()));
    }
    let hs = fiber_hyperplanes(b);
    for piece in &a.pieces {
        let cells = arrangement::cells(&piece.fiber.region(), &hs, CellMode::AllFaces)?;
        for cell in cells {
            let covering: Vec<&Vec<Vec<Int>>> = b
                .pieces
                .iter()
                .filter(|q| q.fiber.contains(&cell.sample))
                .map(|q| &q.subspace)
                .collect();
            let ok = covering.iter().any(|w| lattice::span_contains(w, &piece.subspace, n));
            if !ok {
                let base = generic_point(&piece.subspace, &covering, n);
                return Ok(Some(CovectorPoint::new(base, cell.sample)));
            }
        }
    }
    Ok(None)
}

pub fn skeleton_subset(a: &Skeleton, b: &Skeleton) -> Result<bool> {
    Ok(skeleton_subset_witness(a, b)?.is_none())
}

#[derive(Clone, Debug)]
pub struct LeftVerdict {
    pub verdict: bool,
    /// A primitive point of `φ⁻¹|Σ′| ∖ |Σ|`.
    pub witness: Option<Vec<Int>>,
    /// A point of the pushed-forward skeleton outside `Λ`.
    pub covector_witness: Option<CovectorPoint>,
}

pub fn decide_left_functorial(phi: &StackyMorphism) -> Result<LeftVerdict> {
    let (proper, witness) = phi.fan_morphism().properness()?;
    let pushed = pushforward_skeleton(phi, &fltz_skeleton(phi.target()))?;
    let inclusion = skeleton_subset_witness(&pushed, &fltz_skeleton(phi.source()))?;
    if proper != inclusion.is_none() {
        return Err(Error::InternalInconsistency(format!(
            "properness says {proper} but skeleton inclusion says {}",
            inclusion.is_none()
        )));
    }
    let covector_witness = witness.as_ref().map(|x| {
        let n = x.len();
        CovectorPoint::new(vec![Rat::zero(); n], linalg::to_rat(&linalg::neg_vec(x)))
    });
    Ok(LeftVerdict { verdict: proper, witness, covector_witness })
}

#[derive(Clone, Debug)]
pub struct ConeConditions {
    pub cone: Cone,
    /// The image of the cone is a cone of the target fan.
    pub image_is_cone: bool,
    /// `(σ⊥ ∩ M) + φ_M(M′)` is saturated.
    pub saturated: bool,
}

#[derive(Clone, Debug)]
pub struct RightVerdict {
    pub verdict: bool,
    pub failing_cone: Option<Cone>,
    pub failing_condition: Option<u8>,
    pub per_cone: Vec<ConeConditions>,
}

pub fn decide_right_functorial(phi: &StackyMorphism) -> Result<RightVerdict> {
    let phi_n = phi.phi_n();
    let phi_m = phi.phi_m();
    let n = phi_n.source_rank();
    let target = phi.target().fan();
    let images_of_basis = phi_m.matrix().columns();
    let mut per_cone = Vec::new();
    let mut failing: Option<(Cone, u8)> = None;
    for sigma in phi.source().fan().cones() {
        let image_is_cone = target.contains_cone(&sigma.image(phi_n)?);
        let mut gens = sigma.equations().to_vec();
        gens.extend(images_of_basis.iter().cloned());
        let saturated = lattice::saturation_index(&gens, n).is_one();
        if failing.is_none() {
            if !image_is_cone {
                failing = Some((sigma.clone(), 1));
            } else if !saturated {
                failing = Some((sigma.clone(), 2));
            }
        }
        per_cone.push(ConeConditions { cone: sigma.clone(), image_is_cone, saturated });
    }
    Ok(RightVerdict {
        verdict: failing.is_none(),
        failing_condition: failing.as_ref().map(|f| f.1),
        failing_cone: failing.map(|f| f.0),
        per_cone,
    })
}

/// With `Λ ⊆ Π` and `Λ′ ⊆ Π′`, whether the pushforward of `Π′` lies in `Π`.
pub fn adj_hypothesis_check(phi: &StackyMorphism, pi: &Skeleton, pi_target: &Skeleton) -> Result<bool> {
    if !skeleton_subset(&fltz_skeleton(phi.source()), pi)? {
        return Err(Error::PrerequisiteFailed("the source skeleton is not contained in Π".into()));
    }
    if !skeleton_subset(&fltz_skeleton(phi.target()), pi_target)? {
        return Err(Error::PrerequisiteFailed("the target skeleton is not contained in Π′".into()));
    }
    skeleton_subset(&pushforward_skeleton(phi, pi_target)?, pi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::Fan;
    use crate::linalg::{frac, rat_vec};

    fn p1() -> StackyFan {
        StackyFan::plain(Fan::from_i64(1, &[&[&[1]], &[&[-1]]]).unwrap())
    }

    #[test]
    fn p1_skeleton_membership() {
        let s = fltz_skeleton(&p1());
        assert_eq!(s.pieces.len(), 3);
        assert!(s.contains(&CovectorPoint::new(vec![frac(1, 2)], rat_vec(&[0]))).unwrap());
        assert!(s.contains(&CovectorPoint::new(rat_vec(&[0]), rat_vec(&[-3]))).unwrap());
        assert!(!s.contains(&CovectorPoint::new(vec![frac(1, 2)], rat_vec(&[1]))).unwrap());
        // Integer base points are the identity of the torus.
        assert!(s.contains(&CovectorPoint::new(rat_vec(&[5]), rat_vec(&[7]))).unwrap());
    }

    #[test]
    fn blowup_is_not_inside_a2() {
        let a2 = StackyFan::plain(Fan::from_i64(2, &[&[&[1, 0], &[0, 1]]]).unwrap());
        let bl = StackyFan::plain(Fan::from_i64(2, &[&[&[1, 0], &[1, 1]], &[&[1, 1], &[0, 1]]]).unwrap());
        let (la, lb) = (fltz_skeleton(&a2), fltz_skeleton(&bl));
        assert!(skeleton_subset(&la, &lb).unwrap());
        let w = skeleton_subset_witness(&lb, &la).unwrap().expect("not contained");
        assert!(lb.contains(&w).unwrap());
        assert!(!la.contains(&w).unwrap());
    }

    #[test]
    fn zero_section_is_everywhere() {
        let s = fltz_skeleton(&p1());
        assert!(skeleton_subset(&Skeleton::zero_section(1), &s).unwrap());
        assert!(skeleton_subset(&s, &Skeleton::full(1)).unwrap());
        assert!(!skeleton_subset(&Skeleton::full(1), &s).unwrap());
    }
}
